//! CM forms from Hecke characters of imaginary quadratic fields.
//!
//! Fields are given by a negative fundamental discriminant `d`; the ring of
//! integers is `Z[w]` with `w = (d + sqrt d)/2`, so `w^2 = d w - (d^2 - d)/4`.
//! Ideals are kept in Hermite normal form `A Z + (B + C w) Z` with `C | A`, `C | B`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::abelian::{group_from_multiplication, FiniteAbelianGroup, GroupCharacter};
use crate::arith::{divisors, factorize, is_fundamental_discriminant, kronecker};
use crate::error::{Error, Result};
use crate::qz::QZ;

/// Primitive positive definite binary quadratic form `a x^2 + b xy + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Form {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        self.b.abs() <= self.a && self.a <= self.c && !((self.b.abs() == self.a || self.a == self.c) && self.b < 0)
    }

    fn normalize(self) -> Form {
        let d = self.discriminant();
        let two_a = 2 * self.a;
        let mut b = self.b.rem_euclid(two_a);
        if b > self.a {
            b -= two_a;
        }
        Form { a: self.a, b, c: (b * b - d) / (4 * self.a) }
    }

    pub fn reduce(self) -> Form {
        let mut f = self.normalize();
        while f.a > f.c || (f.a == f.c && f.b < 0) {
            f = Form { a: f.c, b: -f.b, c: f.a }.normalize();
        }
        f
    }

    /// Gauss composition (Cohen, Algorithm 5.4.7), reduced.
    pub fn compose(self, other: Form) -> Form {
        let d = self.discriminant();
        let (f1, f2) = if self.a > other.a { (other, self) } else { (self, other) };
        let (a1, b1) = (f1.a as i128, f1.b as i128);
        let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (y1, dd) = if a2 % a1 == 0 {
            (0, a1)
        } else {
            let e = a2.extended_gcd(&a1);
            (e.x, e.gcd)
        };
        let (x2, y2, d1) = if s % dd == 0 {
            (0, -1, dd)
        } else {
            let e = s.extended_gcd(&dd);
            (e.x, -e.y, e.gcd)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (b3 * b3 - d as i128) / (4 * a3);
        Form { a: a3 as i64, b: b3 as i64, c: c3 as i64 }.reduce()
    }

    pub fn identity(d: i64) -> Form {
        let b = d.rem_euclid(2);
        Form { a: 1, b, c: (b * b - d) / 4 }
    }
}

/// Reduced forms of discriminant `d < 0`, sorted.
pub fn reduced_forms(d: i64) -> Vec<Form> {
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = Form { a, b, c: num / (4 * a) };
            if f.is_reduced() && crate::arith::gcd(crate::arith::gcd(a as u64, b.unsigned_abs()), f.c as u64) == 1 {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort();
    out
}

pub fn class_number(d: i64) -> usize {
    reduced_forms(d).len()
}

pub fn unit_count(d: i64) -> u64 {
    match d {
        -4 => 4,
        -3 => 6,
        _ => 2,
    }
}

#[derive(Debug, Clone)]
pub struct ImagQuadField {
    pub d: i64,
    pub h: u64,
    pub w: u64,
    pub forms: Vec<Form>,
    /// Class group on form indices.
    pub class_group: Arc<FiniteAbelianGroup>,
}

pub fn class_group(d: i64) -> Result<ImagQuadField> {
    if d >= 0 || !is_fundamental_discriminant(d) {
        return Err(Error::NotFundamental(d));
    }
    let forms = reduced_forms(d);
    let index: BTreeMap<Form, u64> = forms.iter().enumerate().map(|(i, f)| (*f, i as u64)).collect();
    let codes: Vec<u64> = (0..forms.len() as u64).collect();
    let group = group_from_multiplication(&codes, |x, y| index[&forms[x as usize].compose(forms[y as usize])])?;
    Ok(ImagQuadField { d, h: forms.len() as u64, w: unit_count(d), forms, class_group: Arc::new(group) })
}

/// `x + y w`.
pub type Elem = (i128, i128);

/// An integral ideal `A Z + (B + C w) Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Ideal {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Order {
    pub d: i64,
}

impl Order {
    fn n0(&self) -> i128 {
        let d = self.d as i128;
        (d * d - d) / 4
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        let d = self.d as i128;
        (x.0 * y.0 - x.1 * y.1 * self.n0(), x.0 * y.1 + x.1 * y.0 + d * x.1 * y.1)
    }

    pub fn norm(&self, x: Elem) -> i128 {
        x.0 * x.0 + self.d as i128 * x.0 * x.1 + self.n0() * x.1 * x.1
    }

    /// Hermite normal form of the Z-lattice spanned by `vs`.
    fn hnf(vs: &[Elem]) -> Ideal {
        let mut a: i128 = 0;
        let mut second: Option<Elem> = None;
        for &(x, y) in vs {
            if y == 0 {
                a = a.gcd(&x);
                continue;
            }
            match second {
                None => second = Some((x, y)),
                Some((sb, sc)) => {
                    let e = sc.extended_gcd(&y);
                    let g = e.gcd;
                    let new = (e.x * sb + e.y * x, g);
                    let left = (y / g) * sb - (sc / g) * x;
                    a = a.gcd(&left);
                    second = Some(new);
                }
            }
        }
        let (mut b, mut c) = second.expect("ideal lattice has full rank");
        if c < 0 {
            b = -b;
            c = -c;
        }
        assert!(a != 0, "ideal lattice has full rank");
        let a = a.abs();
        Ideal { a, b: b.rem_euclid(a), c }
    }

    /// The ideal generated by the given elements.
    pub fn ideal(&self, gens: &[Elem]) -> Ideal {
        let w = (0, 1);
        let mut vs = Vec::with_capacity(2 * gens.len());
        for &g in gens {
            vs.push(g);
            vs.push(self.mul(g, w));
        }
        Self::hnf(&vs)
    }

    pub fn unit_ideal(&self) -> Ideal {
        Ideal { a: 1, b: 0, c: 1 }
    }

    pub fn ideal_mul(&self, i: Ideal, j: Ideal) -> Ideal {
        let gi = [(i.a, 0), (i.b, i.c)];
        let gj = [(j.a, 0), (j.b, j.c)];
        let mut vs = Vec::with_capacity(8);
        for &x in &gi {
            for &y in &gj {
                vs.push(self.mul(x, y));
            }
        }
        // The product of Z-bases spans the product ideal.
        Self::hnf(&vs)
    }

    pub fn contains(&self, i: Ideal, x: Elem) -> bool {
        x.1 % i.c == 0 && (x.0 - (x.1 / i.c) * i.b) % i.a == 0
    }

    /// Canonical representative of `x` modulo the ideal.
    pub fn reduce(&self, i: Ideal, x: Elem) -> Elem {
        let y = x.1.rem_euclid(i.c);
        let k = (x.1 - y) / i.c;
        ((x.0 - k * i.b).rem_euclid(i.a), y)
    }

    /// Prime ideals above the rational prime `l`, with their norms.
    pub fn primes_above(&self, l: u64) -> Vec<(Ideal, u64)> {
        let l_i = l as i128;
        let d = self.d as i128;
        let roots: Vec<i128> =
            (0..l_i).filter(|&r| (r * r - d * r + self.n0()).rem_euclid(l_i) == 0).collect();
        match kronecker(self.d, l) {
            -1 => vec![(Ideal { a: l_i, b: 0, c: l_i }, l * l)],
            _ => roots.iter().map(|&r| (self.ideal(&[(l_i, 0), (-r, 1)]), l)).collect(),
        }
    }

    /// All ideals of norm `n`, each with its prime factorization.
    pub fn ideals_of_norm(&self, n: u64) -> Vec<(Ideal, Vec<(Ideal, u32)>)> {
        let mut acc: Vec<(Ideal, Vec<(Ideal, u32)>)> = vec![(self.unit_ideal(), vec![])];
        for (l, e) in factorize(n) {
            let ps = self.primes_above(l);
            let mut options: Vec<Vec<(Ideal, u32)>> = Vec::new();
            match (kronecker(self.d, l), ps.len()) {
                (-1, _) => {
                    if e % 2 == 0 {
                        options.push(vec![(ps[0].0, e / 2)]);
                    }
                }
                (0, _) | (_, 1) => options.push(vec![(ps[0].0, e)]),
                _ => {
                    for k in 0..=e {
                        let mut o = Vec::new();
                        if k > 0 {
                            o.push((ps[0].0, k));
                        }
                        if e - k > 0 {
                            o.push((ps[1].0, e - k));
                        }
                        options.push(o);
                    }
                }
            }
            let mut next = Vec::new();
            for (ideal, fac) in &acc {
                for o in &options {
                    let mut id = *ideal;
                    for &(p, k) in o {
                        for _ in 0..k {
                            id = self.ideal_mul(id, p);
                        }
                    }
                    let mut f = fac.clone();
                    f.extend(o.iter().copied());
                    next.push((id, f));
                }
            }
            acc = next;
        }
        acc.sort();
        acc
    }

    /// A root of unity generating the unit group.
    pub fn unit_generator(&self) -> Elem {
        match self.d {
            -4 | -3 => (2, 1),
            _ => (-1, 0),
        }
    }

    /// A generator of the ideal, if it is principal.
    pub fn principal_generator(&self, i: Ideal) -> Option<Elem> {
        let n = i.a * i.c;
        let dabs = -(self.d as i128);
        // x^2 + d x y + n0 y^2 = (x + d y/2)^2 + |d| y^2 / 4
        let ymax = ((4 * n) as f64 / dabs as f64).sqrt().ceil() as i128 + 1;
        for y in -ymax..=ymax {
            let xmid = -(self.d as i128) * y / 2;
            let r = ((n as f64).sqrt().ceil() as i128) + 2;
            for x in xmid - r..=xmid + r {
                if self.norm((x, y)) == n && self.contains(i, (x, y)) {
                    return Some((x, y));
                }
            }
        }
        None
    }
}

fn ideal_norm(i: Ideal) -> u64 {
    (i.a * i.c) as u64
}

/// `(O_K / m)^x` by residue enumeration.
pub fn ray_unit_group(field: &ImagQuadField, m: Ideal) -> Result<FiniteAbelianGroup> {
    let o = Order { d: field.d };
    let primes: Vec<Ideal> = factorize(ideal_norm(m))
        .into_iter()
        .flat_map(|(l, _)| o.primes_above(l))
        .filter(|&(p, _)| divides(&o, p, m))
        .map(|(p, _)| p)
        .collect();
    let mut codes = Vec::new();
    for x in 0..m.a {
        for y in 0..m.c {
            if primes.iter().all(|&p| !o.contains(p, (x, y))) {
                codes.push((x * m.c + y) as u64);
            }
        }
    }
    if codes.is_empty() {
        codes.push(0);
    }
    let decode = |c: u64| ((c as i128) / m.c, (c as i128) % m.c);
    group_from_multiplication(&codes, |a, b| {
        let r = o.reduce(m, o.mul(decode(a), decode(b)));
        (r.0 * m.c + r.1) as u64
    })
}

/// Whether `p` divides `m`, i.e. `m` is contained in `p`.
fn divides(o: &Order, p: Ideal, m: Ideal) -> bool {
    o.contains(p, (m.a, 0)) && o.contains(p, (m.b, m.c))
}

/// `|(O_K/m)^x| = N(m) prod_{p | m} (1 - 1/N(p))`.
fn ray_unit_order(factors: &[(Ideal, u32)]) -> u64 {
    let mut total = 1u64;
    let mut seen: BTreeMap<Ideal, u32> = BTreeMap::new();
    for &(p, e) in factors {
        *seen.entry(p).or_default() += e;
    }
    for (p, e) in seen {
        let np = ideal_norm(p);
        total *= (np - 1) * np.pow(e - 1);
    }
    total
}

#[derive(Debug, Clone, Serialize)]
pub struct HeckeCharCount {
    pub d: i64,
    pub modulus: Ideal,
    pub modulus_norm: u64,
    pub infinity_type: u64,
    pub count: u64,
    pub induced_level: u64,
}

/// Hecke characters of modulus `m` with `zeta((alpha)) = alpha^t` for `alpha = 1 mod m`.
///
/// They exist iff every unit congruent to 1 mod `m` has `u^t = 1`; then there are
/// `|Cl_m| = h |(O/m)^x| / |image of units|` of them.
pub fn hecke_char_count(field: &ImagQuadField, m: Ideal, t: u64) -> HeckeCharCount {
    let o = Order { d: field.d };
    let nm = ideal_norm(m);
    let factors: Vec<(Ideal, u32)> = {
        let mut v = Vec::new();
        for (l, _) in factorize(nm) {
            for (p, _) in o.primes_above(l) {
                let mut e = 0;
                let mut pe = p;
                while divides(&o, pe, m) {
                    e += 1;
                    pe = o.ideal_mul(pe, p);
                }
                if e > 0 {
                    v.push((p, e));
                }
            }
        }
        v
    };
    let units = ray_unit_order(&factors);
    // order of the image of the unit group in (O/m)^x
    let zeta = o.unit_generator();
    let mut x = zeta;
    let mut image = 1u64;
    while !o.contains(m, (x.0 - 1, x.1)) {
        x = o.mul(x, zeta);
        image += 1;
    }
    let kernel = field.w / image;
    let count = if t % kernel == 0 { field.h * units / image } else { 0 };
    HeckeCharCount {
        d: field.d,
        modulus: m,
        modulus_norm: nm,
        infinity_type: t,
        count,
        induced_level: field.d.unsigned_abs() * nm,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CmBreakdownRow {
    pub d: i64,
    pub norm_m: u64,
    pub count: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CmCount {
    pub k: u64,
    #[serde(rename = "N")]
    pub level: u64,
    pub total: u64,
    pub breakdown: Vec<CmBreakdownRow>,
}

/// Hecke characters of infinity type `k - 1` over all imaginary quadratic fields with
/// `|d| N(m) = N`; each induces a weight-`k` CM form of level `N`.
pub fn cm_count(k: u64, n: u64) -> Result<CmCount> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::UnsupportedWeight(k));
    }
    let t = k - 1;
    let mut breakdown = Vec::new();
    for dabs in divisors(n) {
        let d = -(dabs as i64);
        if !is_fundamental_discriminant(d) {
            continue;
        }
        let field = class_group(d)?;
        let o = Order { d };
        let count: u64 =
            o.ideals_of_norm(n / dabs).into_iter().map(|(m, _)| hecke_char_count(&field, m, t).count).sum();
        breakdown.push(CmBreakdownRow { d, norm_m: n / dabs, count });
    }
    breakdown.sort_by_key(|r| (r.d.unsigned_abs(), r.norm_m));
    Ok(CmCount { k, level: n, total: breakdown.iter().map(|r| r.count).sum(), breakdown })
}

/// A Hecke character of modulus `(1)`: a class-group character and an infinity type.
#[derive(Debug, Clone)]
pub struct HeckeCharSpec {
    pub class_character: GroupCharacter,
    pub t: u64,
    /// Drops the `N(a)^{t/2}` factor from the coefficients.
    pub drop_norm_factor: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct QTerm {
    pub ideal: Ideal,
    /// Class-group coordinates of the ideal.
    pub class: Vec<u64>,
    /// Value of the class character.
    pub class_value: QZ,
    /// `alpha^t` as `(x, y)` meaning `x + y w`, when the ideal is `(alpha)`.
    pub generator_power: Option<(String, String)>,
    /// Exponent `t/2` of `N(a)` attached to the term, unless dropped.
    pub norm_exponent: Option<(u64, u64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct QCoefficient {
    pub n: u64,
    pub terms: Vec<QTerm>,
}

/// Class of an ideal as an index into the reduced forms.
fn ideal_class(field: &ImagQuadField, i: Ideal) -> u64 {
    // a = C a' with a' primitive; a' = A' Z + (B' + w) Z <-> (A', -(2B' + d), .)
    let a = i.a / i.c;
    let b = -(2 * (i.b / i.c) + field.d as i128);
    let d = field.d as i128;
    let c = (b * b - d) / (4 * a);
    let f = Form { a: a as i64, b: b as i64, c: c as i64 }.reduce();
    field.forms.iter().position(|g| *g == f).expect("reduced form of the right discriminant") as u64
}

/// The first `terms` coefficients of the theta series of a Hecke character of modulus `(1)`.
pub fn cm_q_expansion(field: &ImagQuadField, spec: &HeckeCharSpec, terms: u64) -> Result<Vec<QCoefficient>> {
    if spec.t % field.w != 0 {
        return Err(Error::InvalidInput(format!("infinity type {} is incompatible with {} units", spec.t, field.w)));
    }
    if spec.class_character.group().invariant_factors() != field.class_group.invariant_factors() {
        return Err(Error::MismatchedGroups);
    }
    let o = Order { d: field.d };
    let mut out = Vec::with_capacity(terms as usize);
    for n in 1..=terms {
        let mut qterms = Vec::new();
        for (ideal, _) in o.ideals_of_norm(n) {
            let idx = ideal_class(field, ideal);
            let class = field.class_group.dlog(idx).expect("form index in table").to_vec();
            let class_value = spec.class_character.evaluate(&class);
            let generator_power = o.principal_generator(ideal).map(|alpha| {
                let mut acc = (BigInt::one(), BigInt::zero());
                let a = (BigInt::from(alpha.0), BigInt::from(alpha.1));
                let n0 = BigInt::from(o.n0());
                let d = BigInt::from(field.d);
                for _ in 0..spec.t {
                    acc = (&acc.0 * &a.0 - &acc.1 * &a.1 * &n0, &acc.0 * &a.1 + &acc.1 * &a.0 + &d * &acc.1 * &a.1);
                }
                (acc.0.to_string(), acc.1.to_string())
            });
            qterms.push(QTerm {
                ideal,
                class,
                class_value,
                generator_power,
                norm_exponent: if spec.drop_norm_factor { None } else { Some((spec.t, 2)) },
            });
        }
        out.push(QCoefficient { n, terms: qterms });
    }
    Ok(out)
}
