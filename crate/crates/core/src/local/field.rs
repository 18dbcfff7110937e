//! `Q_p`, its unramified quadratic extension, and its two ramified ones, with
//! the finite rings `O_K / p_K^m`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, ipow, is_prime, least_nonresidue};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Base,
    /// `Q_p(sqrt(u))`, `u` the least non-residue.
    Unramified,
    /// `Q_p(sqrt(p))`.
    Ramified,
    /// `Q_p(sqrt(u p))`.
    RamifiedTwisted,
}

impl FieldKind {
    pub const QUADRATIC: [FieldKind; 3] = [FieldKind::Unramified, FieldKind::Ramified, FieldKind::RamifiedTwisted];

    pub fn name(self) -> &'static str {
        match self {
            FieldKind::Base => "base",
            FieldKind::Unramified => "unram",
            FieldKind::Ramified => "ram",
            FieldKind::RamifiedTwisted => "ram_u",
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FieldKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "base" | "qp" => Ok(FieldKind::Base),
            "unram" | "unramified" => Ok(FieldKind::Unramified),
            "ram" | "ramified" => Ok(FieldKind::Ramified),
            "ram_u" | "ramified_u" | "ramified_twisted" => Ok(FieldKind::RamifiedTwisted),
            other => Err(Error::InvalidInput(format!("unknown field kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocalFieldDesc {
    pub p: u64,
    pub kind: FieldKind,
}

impl LocalFieldDesc {
    pub fn new(p: u64, kind: FieldKind) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::UnsupportedPrime(p));
        }
        Ok(LocalFieldDesc { p, kind })
    }

    pub fn base(p: u64) -> Result<Self> {
        Self::new(p, FieldKind::Base)
    }

    pub fn base_field(&self) -> LocalFieldDesc {
        LocalFieldDesc { p: self.p, kind: FieldKind::Base }
    }

    pub fn is_quadratic(&self) -> bool {
        self.kind != FieldKind::Base
    }

    pub fn is_ramified(&self) -> bool {
        matches!(self.kind, FieldKind::Ramified | FieldKind::RamifiedTwisted)
    }

    /// Residue degree.
    pub fn f(&self) -> u32 {
        if self.kind == FieldKind::Unramified {
            2
        } else {
            1
        }
    }

    /// Ramification index.
    pub fn e(&self) -> u32 {
        if self.is_ramified() {
            2
        } else {
            1
        }
    }

    /// Valuation of the discriminant.
    pub fn disc_val(&self) -> u32 {
        self.e() - 1
    }

    pub fn residue_size(&self) -> u64 {
        ipow(self.p, self.f())
    }

    pub fn nonresidue(&self) -> u64 {
        least_nonresidue(self.p)
    }

    /// `c0` with `theta^2 = c0 p` in the ramified cases.
    pub fn c0(&self) -> u64 {
        match self.kind {
            FieldKind::RamifiedTwisted => self.nonresidue(),
            _ => 1,
        }
    }

    /// Level of `Z_p^x / (1 + p^l)` that `O_K^x / (1 + p_K^m)` sees.
    pub fn base_level(&self, m: u32) -> u32 {
        m.div_ceil(self.e())
    }
}

impl fmt::Display for LocalFieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind, self.p)
    }
}

/// `a + b theta` in `O_K / p_K^m`.
pub type Elem = (u64, u64);

/// `O_K / p_K^m` for `m >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalRing {
    pub field: LocalFieldDesc,
    pub m: u32,
    pub mod_a: u64,
    pub mod_b: u64,
    /// `theta^2` reduced mod `mod_a`.
    theta_sq: u64,
}

impl LocalRing {
    pub fn new(field: LocalFieldDesc, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("truncation level must be at least 1".into()));
        }
        let p = field.p;
        let (mod_a, mod_b, theta_sq) = match field.kind {
            FieldKind::Base => (ipow(p, m), 1, 0),
            FieldKind::Unramified => {
                let q = ipow(p, m);
                (q, q, field.nonresidue() % q)
            }
            FieldKind::Ramified | FieldKind::RamifiedTwisted => {
                let ma = ipow(p, m.div_ceil(2));
                (ma, ipow(p, m / 2), (field.c0() * p) % ma)
            }
        };
        Ok(LocalRing { field, m, mod_a, mod_b, theta_sq })
    }

    pub fn one(&self) -> Elem {
        (1 % self.mod_a, 0)
    }

    pub fn reduce(&self, x: Elem) -> Elem {
        (x.0 % self.mod_a, x.1 % self.mod_b)
    }

    /// Embeds an integer.
    pub fn int(&self, a: i64) -> Elem {
        (a.rem_euclid(self.mod_a as i64) as u64, 0)
    }

    pub fn code(&self, x: Elem) -> u64 {
        x.0 * self.mod_b + x.1
    }

    pub fn decode(&self, c: u64) -> Elem {
        (c / self.mod_b, c % self.mod_b)
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        let ma = self.mod_a as u128;
        let mb = self.mod_b as u128;
        let (a, b, c, d) = (x.0 as u128, x.1 as u128, y.0 as u128, y.1 as u128);
        let bd = (b * d) % ma;
        let re = (a * c + bd * self.theta_sq as u128) % ma;
        let im = ((a % mb) * (d % mb) + (b % mb) * (c % mb)) % mb;
        (re as u64, im as u64)
    }

    pub fn pow(&self, mut x: Elem, mut e: u64) -> Elem {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        acc
    }

    /// Galois conjugation `a + b theta -> a - b theta`.
    pub fn conj(&self, x: Elem) -> Elem {
        (x.0, (self.mod_b - x.1 % self.mod_b) % self.mod_b)
    }

    /// Norm to `Z / p^{base_level(m)}`.
    pub fn norm(&self, x: Elem) -> u64 {
        let mb = ipow(self.field.p, self.field.base_level(self.m)) as u128;
        let (a, b) = (x.0 as u128, x.1 as u128);
        let full_theta_sq: u128 = match self.field.kind {
            FieldKind::Base => 0,
            FieldKind::Unramified => self.field.nonresidue() as u128,
            _ => (self.field.c0() * self.field.p) as u128,
        };
        let bb = (b * b) % mb;
        ((a * a % mb + mb * mb - (bb * full_theta_sq) % mb) % mb) as u64
    }

    pub fn is_unit(&self, x: Elem) -> bool {
        x.0 % self.field.p != 0 || (self.field.kind == FieldKind::Unramified && x.1 % self.field.p != 0)
    }

    pub fn inverse(&self, x: Elem) -> Option<Elem> {
        if !self.is_unit(x) {
            return None;
        }
        match self.field.kind {
            FieldKind::Base => inv_mod(x.0, self.mod_a).map(|a| (a, 0)),
            _ => {
                // x^{-1} = conj(x) / N(x), with N(x) computed in the a-component ring.
                let ma = self.mod_a as u128;
                let (a, b) = (x.0 as u128, x.1 as u128);
                let n = (a * a % ma + ma * ma - (b * b % ma) * self.theta_sq as u128 % ma) % ma;
                let ninv = inv_mod(n as u64, self.mod_a)?;
                let c = self.conj(x);
                Some(self.mul(c, (ninv, 0)))
            }
        }
    }

    /// All units, in increasing code order.
    pub fn units(&self) -> Vec<Elem> {
        let mut out = Vec::new();
        for a in 0..self.mod_a {
            for b in 0..self.mod_b {
                if self.is_unit((a, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn unit_count(&self) -> u64 {
        let q = self.field.residue_size();
        (q - 1) * ipow(q, self.m - 1)
    }

    /// Whether `x` lies in `1 + p_K^i`.
    pub fn in_filtration(&self, x: Elem, i: u32) -> bool {
        if i >= self.m {
            return self.reduce(x) == self.one();
        }
        let sub = LocalRing::new(self.field, i).expect("i >= 1");
        sub.reduce(x) == sub.one()
    }
}
