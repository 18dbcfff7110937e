//! Dirichlet characters, their p-parts, and the local central character at p.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::abelian::{group_from_multiplication, FiniteAbelianGroup, GroupCharacter};
use crate::arith::{divisors, gcd, inv_mod, ipow, is_prime, mul_mod, valuation};
use crate::error::{Error, Result};
use crate::qz::QZ;

/// Value of a Dirichlet character: a root of unity, or zero off the units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharValue {
    Zero,
    Value(QZ),
}

/// `(Z/n)^x` with a discrete-log table keyed by residues in `[0, n)`.
pub fn unit_group(n: u64) -> Arc<FiniteAbelianGroup> {
    assert!(n >= 1, "modulus must be positive");
    if n <= 2 {
        // The unit group is trivial; its single element is the class of 1.
        return Arc::new(group_from_multiplication(&[1 % n], |a, b| mul_mod(a, b, n)).unwrap());
    }
    let elems: Vec<u64> = (1..n).filter(|&a| gcd(a, n) == 1).collect();
    Arc::new(group_from_multiplication(&elems, |a, b| mul_mod(a, b, n)).expect("units mod n form a group"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    character: GroupCharacter,
}

impl DirichletCharacter {
    pub fn new(modulus: u64, character: GroupCharacter) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidInput("modulus must be positive".into()));
        }
        if character.group().dlog(1 % modulus).is_none() {
            return Err(Error::InvalidInput("character is not defined on (Z/N)^x".into()));
        }
        Ok(DirichletCharacter { modulus, character })
    }

    pub fn trivial(modulus: u64) -> Self {
        DirichletCharacter { modulus, character: GroupCharacter::trivial(unit_group(modulus)) }
    }

    pub fn from_images(modulus: u64, images: &[QZ]) -> Result<Self> {
        let g = unit_group(modulus);
        Ok(DirichletCharacter { modulus, character: GroupCharacter::from_images(g, images)? })
    }

    /// Builds the character from its values on the generators of `(Z/N)^x`.
    pub fn from_fn(modulus: u64, f: impl Fn(u64) -> QZ) -> Result<Self> {
        let g = unit_group(modulus);
        let images: Vec<QZ> = g.generator_elements().unwrap_or(&[]).iter().map(|&x| f(x)).collect();
        Self::from_images(modulus, &images)
    }

    /// All characters modulo `n`.
    pub fn all(modulus: u64) -> Vec<Self> {
        let g = unit_group(modulus);
        crate::abelian::all_characters(&g)
            .into_iter()
            .map(|character| DirichletCharacter { modulus, character })
            .collect()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn character(&self) -> &GroupCharacter {
        &self.character
    }

    pub fn is_trivial(&self) -> bool {
        self.character.is_trivial()
    }

    pub fn order(&self) -> u64 {
        self.character.order()
    }

    pub fn evaluate(&self, a: i64) -> CharValue {
        let r = a.rem_euclid(self.modulus as i64) as u64;
        if gcd(r, self.modulus) != 1 {
            return CharValue::Zero;
        }
        CharValue::Value(self.character.evaluate_element(r).expect("units are in the dlog table"))
    }

    /// Value at a unit, panicking on non-units.
    pub fn value(&self, a: i64) -> QZ {
        match self.evaluate(a) {
            CharValue::Value(v) => v,
            CharValue::Zero => panic!("{a} is not a unit modulo {}", self.modulus),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::MismatchedGroups);
        }
        Ok(DirichletCharacter { modulus: self.modulus, character: self.character.mul(&other.character)? })
    }

    pub fn inverse(&self) -> Self {
        DirichletCharacter { modulus: self.modulus, character: self.character.inverse() }
    }

    fn units(&self) -> impl Iterator<Item = u64> + '_ {
        (1..=self.modulus).filter(move |&a| gcd(a, self.modulus) == 1)
    }

    /// Whether the character factors through `(Z/m)^x`.
    pub fn factors_through(&self, m: u64) -> bool {
        self.modulus % m == 0 && self.units().filter(|a| a % m == 1 % m).all(|a| self.value(a as i64).is_zero())
    }

    /// Smallest `M | N` through which the character factors.
    pub fn conductor(&self) -> u64 {
        divisors(self.modulus).into_iter().find(|&m| self.factors_through(m)).unwrap_or(self.modulus)
    }

    /// `eps = eps_p * eps'` with `eps_p` modulo `p^{N_p}` and `eps'` modulo the prime-to-p part.
    pub fn decompose_p_part(&self, p: u64) -> Result<(DirichletCharacter, DirichletCharacter)> {
        if !is_prime(p) || self.modulus % p != 0 {
            return Err(Error::InvalidInput(format!("{p} is not a prime dividing {}", self.modulus)));
        }
        let e = valuation(self.modulus, p);
        let q = ipow(p, e);
        let rest = self.modulus / q;
        let n = self.modulus;
        // x = a mod q, 1 mod rest  and  y = 1 mod q, b mod rest
        let crt = |a: u64, b: u64| -> u64 {
            let t = mul_mod((b + rest - a % rest) % rest, inv_mod(q % rest, rest).unwrap(), rest);
            (a + q * t) % n
        };
        let eps_p = DirichletCharacter::from_fn(q, |a| self.value(crt(a, 1) as i64))?;
        let eps_rest = DirichletCharacter::from_fn(rest, |b| self.value(crt(1, b) as i64))?;
        Ok((eps_p, eps_rest))
    }

    /// The local component at `p` in the convention `w_p(p^i u) = eps'(p)^i eps_p^{-1}(u)`.
    pub fn adelize(&self, p: u64) -> Result<LocalizedCentralCharacter> {
        if p == 2 {
            return Err(Error::UnsupportedPrime(2));
        }
        let (eps_p, eps_rest) = self.decompose_p_part(p)?;
        Ok(LocalizedCentralCharacter {
            p,
            exponent: valuation(self.modulus, p),
            unit_part: eps_p.inverse(),
            uniformizer_value: eps_rest.value(p as i64),
        })
    }

    pub fn record(&self) -> DirichletRecord {
        DirichletRecord {
            modulus: self.modulus,
            images: self.character.images().iter().map(QZ::to_string).collect(),
        }
    }
}

/// `(modulus, generator images)` as emitted by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirichletRecord {
    pub modulus: u64,
    pub images: Vec<String>,
}

/// Local central character at `p` obtained from a Dirichlet character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizedCentralCharacter {
    pub p: u64,
    /// `N_p`, so `unit_part` lives on `(Z/p^{N_p})^x`.
    pub exponent: u32,
    pub unit_part: DirichletCharacter,
    pub uniformizer_value: QZ,
}

impl LocalizedCentralCharacter {
    /// Value on `p^i u` for a unit `u`.
    pub fn evaluate(&self, i: i64, u: i64) -> QZ {
        self.uniformizer_value.times(i) + self.unit_part.value(u)
    }

    /// Conductor exponent of the unit part, 0 when it is trivial.
    pub fn conductor_exponent(&self) -> u32 {
        valuation(self.unit_part.conductor(), self.p)
    }
}
