//! `(O_K / p_K^m)^x` presented through the unit filtration.
//!
//! Raw generators are a Teichmuller lift `T` of a residue-field generator and
//! `s_{j,k} = 1 + pi^j b_k` for `1 <= j < m`, `b_k` running over a residue
//! basis. `T^{q-1} = 1`, and `s_{j,k}^p` is rewritten in the deeper `s`. The
//! relation matrix is triangular with determinant `(q-1) q^{m-1}`, so it is a
//! complete presentation; Smith normal form gives the invariant factors.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::field::{Elem, FieldKind, LocalFieldDesc, LocalRing};
use crate::abelian::{group_from_multiplication, FiniteAbelianGroup, Presentation};
use crate::arith::{inv_mod, ipow, mul_mod, pow_mod, primitive_root};
use crate::error::{Error, Result};
use crate::qz::QZ;

#[derive(Debug)]
pub struct UnitQuotient {
    pub ring: LocalRing,
    group: Arc<FiniteAbelianGroup>,
    pres: Presentation,
    /// Concrete raw generators: `T` first, then `s_{j,k}` by increasing `j`.
    raw_elems: Vec<Elem>,
    raw_inv: Vec<Elem>,
    /// Level `j` of each raw generator (0 for `T`).
    raw_level: Vec<u32>,
    /// Residue-field discrete log of the residue of `T^k`.
    residue_log: HashMap<Elem, u64>,
    teich_inv_pows: Vec<Elem>,
    /// Concrete invariant-factor generators.
    gen_elems: Vec<Elem>,
    /// Invariant-factor coordinates of each raw generator.
    raw_coords: Vec<Vec<u64>>,
    sigma_coords: OnceLock<Vec<Vec<u64>>>,
}

type CacheKey = (LocalFieldDesc, u32);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<UnitQuotient>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<UnitQuotient>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared, memoised unit quotient of `field` at level `m`.
pub fn unit_quotient(field: LocalFieldDesc, m: u32) -> Result<Arc<UnitQuotient>> {
    if let Some(u) = cache().lock().unwrap().get(&(field, m)) {
        return Ok(u.clone());
    }
    let built = Arc::new(UnitQuotient::build(field, m)?);
    // Another thread may have raced us; keep whichever landed first so pointers stay canonical.
    let mut guard = cache().lock().unwrap();
    Ok(guard.entry((field, m)).or_insert(built).clone())
}

/// Generator of `F_q^x` as `(a, b)`, `b` the coefficient of `sqrt(u)`.
fn residue_generator(field: LocalFieldDesc) -> Elem {
    let p = field.p;
    if field.kind != FieldKind::Unramified {
        return (primitive_root(p), 0);
    }
    let r = LocalRing::new(field, 1).unwrap();
    let order = p * p - 1;
    let fs = crate::arith::factorize(order);
    for a in 0..p {
        for b in 1..p {
            if fs.iter().all(|&(l, _)| r.pow((a, b), order / l) != r.one()) {
                return (a, b);
            }
        }
    }
    unreachable!("F_q^x is cyclic")
}

impl UnitQuotient {
    fn build(field: LocalFieldDesc, m: u32) -> Result<Self> {
        let ring = LocalRing::new(field, m)?;
        let p = field.p;
        let q = field.residue_size();

        let mut t = ring.reduce(residue_generator(field));
        for _ in 0..m {
            t = ring.pow(t, q);
        }
        let res = LocalRing::new(field, 1)?;
        let mut residue_log = HashMap::new();
        let mut teich_inv_pows = Vec::with_capacity((q - 1) as usize);
        let t_inv = ring.inverse(t).expect("Teichmuller lift is a unit");
        let mut x = ring.one();
        let mut xi = ring.one();
        for k in 0..q - 1 {
            residue_log.insert(res.reduce(x), k);
            teich_inv_pows.push(xi);
            x = ring.mul(x, t);
            xi = ring.mul(xi, t_inv);
        }
        debug_assert_eq!(x, ring.one());

        let mut raw_elems = vec![t];
        let mut raw_level = vec![0];
        for j in 1..m {
            for s in Self::level_generators(&ring, j) {
                raw_elems.push(s);
                raw_level.push(j);
            }
        }
        let raw_inv: Vec<Elem> = raw_elems.iter().map(|&e| ring.inverse(e).unwrap()).collect();

        let mut partial = UnitQuotient {
            ring,
            group: Arc::new(FiniteAbelianGroup::trivial()),
            pres: Presentation::from_relations(&[], 0, "")?,
            raw_elems,
            raw_inv,
            raw_level,
            residue_log,
            teich_inv_pows,
            gen_elems: vec![],
            raw_coords: vec![],
            sigma_coords: OnceLock::new(),
        };

        let n_raw = partial.raw_elems.len();
        let mut relations = Vec::with_capacity(n_raw);
        let mut row = vec![0i64; n_raw];
        row[0] = (q - 1) as i64;
        relations.push(row);
        for r in 1..n_raw {
            let sp = ring.pow(partial.raw_elems[r], p);
            let digits = partial.raw_dlog(sp);
            let mut row: Vec<i64> = digits.iter().map(|&d| -(d as i64)).collect();
            row[r] += p as i64;
            relations.push(row);
        }
        let pres = Presentation::from_relations(&relations, n_raw, &format!("{}:{}:", field, m))?;
        let expected = (q - 1) * ipow(q, m - 1);
        if pres.group.order() != expected {
            return Err(Error::InvariantViolation(format!(
                "unit quotient of {field} at level {m} has order {} instead of {expected}",
                pres.group.order()
            )));
        }
        let gen_elems = (0..pres.group.rank())
            .map(|j| {
                pres.generator_raw(j)
                    .iter()
                    .zip(&partial.raw_elems)
                    .fold(ring.one(), |acc, (&e, &g)| ring.mul(acc, ring.pow(g, e)))
            })
            .collect();
        let raw_coords = (0..n_raw)
            .map(|r| {
                let mut v = vec![0u64; n_raw];
                v[r] = 1;
                pres.coords(&v)
            })
            .collect();
        partial.group = Arc::new(pres.group.clone());
        partial.pres = pres;
        partial.gen_elems = gen_elems;
        partial.raw_coords = raw_coords;
        Ok(partial)
    }

    /// `1 + pi^j b_k` for the residue basis `b_k`.
    fn level_generators(ring: &LocalRing, j: u32) -> Vec<Elem> {
        let p = ring.field.p;
        match ring.field.kind {
            FieldKind::Base => vec![ring.reduce((1 + ipow(p, j), 0))],
            FieldKind::Unramified => {
                let pj = ipow(p, j);
                vec![ring.reduce((1 + pj, 0)), ring.reduce((1, pj))]
            }
            FieldKind::Ramified | FieldKind::RamifiedTwisted => {
                let c0 = ring.field.c0();
                let i = j / 2;
                // pi^{2i} = c0^i p^i and pi^{2i+1} = c0^i p^i theta
                let c = pow_mod(c0, i as u64, ring.mod_a) as u128 * ipow(p, i) as u128;
                if j % 2 == 0 {
                    vec![ring.reduce(((1 + c % ring.mod_a as u128) as u64, 0))]
                } else {
                    vec![ring.reduce((1, (c % ring.mod_b.max(1) as u128) as u64))]
                }
            }
        }
    }

    /// Digits of `y = 1 + pi^j (sum c_k b_k) + ...` at level `j`.
    fn digits(&self, y: Elem, j: u32) -> Vec<u64> {
        let p = self.ring.field.p;
        match self.ring.field.kind {
            FieldKind::Base => vec![((y.0 + self.ring.mod_a - 1) % self.ring.mod_a / ipow(p, j)) % p],
            FieldKind::Unramified => {
                let pj = ipow(p, j);
                vec![((y.0 + self.ring.mod_a - 1) % self.ring.mod_a / pj) % p, (y.1 / pj) % p]
            }
            FieldKind::Ramified | FieldKind::RamifiedTwisted => {
                let i = j / 2;
                let c0_inv_i = pow_mod(inv_mod(self.ring.field.c0(), p).unwrap(), i as u64, p);
                let raw = if j % 2 == 0 {
                    ((y.0 + self.ring.mod_a - 1) % self.ring.mod_a / ipow(p, i)) % p
                } else {
                    (y.1 / ipow(p, i)) % p
                };
                vec![mul_mod(raw, c0_inv_i, p)]
            }
        }
    }

    /// Exponents of `x` in the raw generators.
    pub fn raw_dlog(&self, x: Elem) -> Vec<u64> {
        let ring = &self.ring;
        let x = ring.reduce(x);
        let res = LocalRing::new(ring.field, 1).unwrap();
        let k = *self.residue_log.get(&res.reduce(x)).expect("argument must be a unit");
        let mut out = vec![0u64; self.raw_elems.len()];
        out[0] = k;
        let mut y = ring.mul(x, self.teich_inv_pows[k as usize]);
        let mut r = 1;
        for j in 1..ring.m {
            let ds = self.digits(y, j);
            for c in ds {
                out[r] = c;
                if c != 0 {
                    y = ring.mul(y, ring.pow(self.raw_inv[r], c));
                }
                r += 1;
            }
        }
        debug_assert_eq!(y, ring.one());
        out
    }

    /// Invariant-factor coordinates of the unit `x`.
    pub fn dlog(&self, x: Elem) -> Vec<u64> {
        self.pres.coords(&self.raw_dlog(x))
    }

    pub fn field(&self) -> LocalFieldDesc {
        self.ring.field
    }

    pub fn level(&self) -> u32 {
        self.ring.m
    }

    pub fn group(&self) -> &Arc<FiniteAbelianGroup> {
        &self.group
    }

    pub fn generator_elements(&self) -> &[Elem] {
        &self.gen_elems
    }

    pub fn raw_generators(&self) -> &[Elem] {
        &self.raw_elems
    }

    pub fn raw_coords(&self) -> &[Vec<u64>] {
        &self.raw_coords
    }

    pub fn raw_levels(&self) -> &[u32] {
        &self.raw_level
    }

    /// Coordinates of the raw generators of `(1 + p_K^i) / (1 + p_K^m)`.
    pub fn filtration_generators(&self, i: u32) -> impl Iterator<Item = &[u64]> {
        self.raw_level
            .iter()
            .zip(&self.raw_coords)
            .filter(move |(&lvl, _)| lvl >= i.max(1))
            .map(|(_, c)| c.as_slice())
    }

    /// Coordinates of `sigma(g_j)` for each invariant-factor generator.
    pub fn sigma_coords(&self) -> &[Vec<u64>] {
        self.sigma_coords
            .get_or_init(|| self.gen_elems.iter().map(|&g| self.dlog(self.ring.conj(g))).collect())
    }

    /// Value of a character, given by its numerators, on coordinates `v`.
    pub fn pair(&self, numerators: &[u64], v: &[u64]) -> QZ {
        numerators
            .iter()
            .zip(v)
            .zip(self.group.invariant_factors())
            .map(|((&a, &e), &d)| QZ::new((a as u128 * e as u128 % d as u128) as i128, d))
            .sum()
    }

    /// The same group built by brute-force enumeration, for cross-checks on small quotients.
    pub fn brute_force_group(&self) -> Result<FiniteAbelianGroup> {
        let ring = self.ring;
        let codes: Vec<u64> = ring.units().iter().map(|&x| ring.code(x)).collect();
        group_from_multiplication(&codes, |a, b| ring.code(ring.mul(ring.decode(a), ring.decode(b))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uq(p: u64, kind: FieldKind, m: u32) -> Arc<UnitQuotient> {
        unit_quotient(LocalFieldDesc::new(p, kind).unwrap(), m).unwrap()
    }

    #[test]
    fn small_quotients() {
        assert_eq!(uq(3, FieldKind::Base, 1).group().invariant_factors(), &[2]);
        assert_eq!(uq(3, FieldKind::Base, 2).group().invariant_factors(), &[6]);
        assert_eq!(uq(3, FieldKind::Unramified, 1).group().invariant_factors(), &[8]);
    }

    #[test]
    fn presentation_matches_brute_force() {
        for p in [3u64, 5, 7] {
            for kind in [FieldKind::Base, FieldKind::Unramified, FieldKind::Ramified, FieldKind::RamifiedTwisted] {
                let max_m = if kind == FieldKind::Unramified { 2 } else { 4 };
                for m in 1..=max_m {
                    if p == 7 && m > 2 {
                        continue;
                    }
                    let u = uq(p, kind, m);
                    let brute = u.brute_force_group().unwrap();
                    assert_eq!(u.group().invariant_factors(), brute.invariant_factors(), "{kind} p={p} m={m}");
                }
            }
        }
    }

    #[test]
    fn cube_roots_of_unity_at_three() {
        // Q_3(sqrt 3) contains no primitive cube root of unity but Q_3(sqrt -3) does.
        let twisted = LocalFieldDesc::new(3, FieldKind::RamifiedTwisted).unwrap();
        assert_eq!(twisted.c0(), 2);
        let u = uq(3, FieldKind::RamifiedTwisted, 5);
        let brute = u.brute_force_group().unwrap();
        assert_eq!(u.group().invariant_factors(), brute.invariant_factors());
    }

    #[test]
    fn dlog_is_a_homomorphism() {
        for kind in [FieldKind::Base, FieldKind::Unramified, FieldKind::Ramified, FieldKind::RamifiedTwisted] {
            let u = uq(5, kind, 3);
            let ring = u.ring;
            let units = ring.units();
            let f = u.group().invariant_factors().to_vec();
            for (i, &x) in units.iter().enumerate().step_by(7) {
                let y = units[(i * 31 + 3) % units.len()];
                let lhs = u.dlog(ring.mul(x, y));
                let rhs: Vec<u64> =
                    u.dlog(x).iter().zip(u.dlog(y)).zip(&f).map(|((a, b), d)| (a + b) % d).collect();
                assert_eq!(lhs, rhs);
            }
            for (j, &g) in u.generator_elements().iter().enumerate() {
                let mut e = vec![0; f.len()];
                e[j] = 1;
                assert_eq!(u.dlog(g), e);
            }
        }
    }

    #[test]
    fn filtration_sets_have_the_right_size() {
        for kind in [FieldKind::Base, FieldKind::Unramified, FieldKind::Ramified] {
            let u = uq(3, kind, 3);
            let ring = u.ring;
            let q = ring.field.residue_size();
            for i in 1..=3 {
                let count = ring.units().into_iter().filter(|&x| ring.in_filtration(x, i)).count() as u64;
                assert_eq!(count, ipow(q, 3 - i));
                let gens: Vec<Vec<u64>> = u.filtration_generators(i).map(<[u64]>::to_vec).collect();
                assert_eq!(gens.len() as u32, (3 - i) * (if kind == FieldKind::Unramified { 2 } else { 1 }));
            }
        }
    }
}
