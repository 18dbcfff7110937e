use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::snf::smith_normal_form_big;
use crate::arith::lcm;
use crate::error::{Error, Result};

/// A finite abelian group `Z/d_1 x ... x Z/d_r` with `d_i | d_{i+1}`, `d_i >= 2`.
#[derive(Debug, Clone)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<u64>,
    generator_labels: Vec<String>,
    /// Concrete element code -> exponent vector, when built from a concrete group.
    dlog_table: Option<BTreeMap<u64, Vec<u64>>>,
    generator_elements: Option<Vec<u64>>,
}

impl PartialEq for FiniteAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.invariant_factors == other.invariant_factors && self.generator_labels == other.generator_labels
    }
}

impl Eq for FiniteAbelianGroup {}

impl FiniteAbelianGroup {
    pub fn new(invariant_factors: Vec<u64>, generator_labels: Vec<String>) -> Result<Self> {
        if invariant_factors.len() != generator_labels.len() {
            return Err(Error::InvalidInput("one label per invariant factor".into()));
        }
        for (i, &d) in invariant_factors.iter().enumerate() {
            if d < 2 {
                return Err(Error::InvalidInput(format!("invariant factor {d} < 2")));
            }
            if let Some(&next) = invariant_factors.get(i + 1) {
                if next % d != 0 {
                    return Err(Error::InvalidInput(format!("{d} does not divide {next}")));
                }
            }
        }
        Ok(FiniteAbelianGroup { invariant_factors, generator_labels, dlog_table: None, generator_elements: None })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { invariant_factors: vec![], generator_labels: vec![], dlog_table: None, generator_elements: None }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn generator_labels(&self) -> &[String] {
        &self.generator_labels
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    pub fn dlog_table(&self) -> Option<&BTreeMap<u64, Vec<u64>>> {
        self.dlog_table.as_ref()
    }

    /// Exponent vector of a concrete element, when a table is present.
    pub fn dlog(&self, element: u64) -> Option<&[u64]> {
        self.dlog_table.as_ref()?.get(&element).map(Vec::as_slice)
    }

    /// Concrete element codes of the invariant-factor generators.
    pub fn generator_elements(&self) -> Option<&[u64]> {
        self.generator_elements.as_deref()
    }

    pub fn reduce(&self, v: &[i128]) -> Vec<u64> {
        v.iter().zip(&self.invariant_factors).map(|(&x, &d)| x.rem_euclid(d as i128) as u64).collect()
    }

    /// All exponent vectors in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let order = self.order();
        (0..order).map(move |mut idx| {
            let mut v = vec![0u64; self.rank()];
            for i in (0..self.rank()).rev() {
                let d = self.invariant_factors[i];
                v[i] = idx % d;
                idx /= d;
            }
            v
        })
    }
}

/// `Z^n / rowspace(relations)` together with the change of coordinates from
/// the raw generators to the invariant-factor basis.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub group: FiniteAbelianGroup,
    /// `to_snf[i][j]`: coordinate `j` of raw generator `i`, reduced mod `d_j`.
    to_snf: Vec<Vec<u64>>,
    /// `from_snf[j]`: raw exponent vector of invariant-factor generator `j`,
    /// reduced mod the group exponent.
    from_snf: Vec<Vec<u64>>,
}

impl Presentation {
    /// Builds the presentation from relation rows over `n_raw` raw generators.
    pub fn from_relations(relations: &[Vec<i64>], n_raw: usize, label_prefix: &str) -> Result<Self> {
        let m: Vec<Vec<BigInt>> = relations.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let snf = smith_normal_form_big(m, n_raw);
        if snf.free_rank > 0 {
            return Err(Error::InfiniteGroup(snf.free_rank));
        }
        let mut kept = Vec::new();
        let mut factors = Vec::new();
        for (j, d) in snf.diagonal.iter().enumerate() {
            let d = d.to_u64().ok_or_else(|| Error::InvalidInput("invariant factor exceeds u64".into()))?;
            if d > 1 {
                kept.push(j);
                factors.push(d);
            }
        }
        let exponent = factors.iter().fold(1u64, |a, &b| lcm(a, b));
        let to_snf = (0..n_raw)
            .map(|i| {
                kept.iter()
                    .zip(&factors)
                    .map(|(&j, &d)| snf.right[i][j].mod_floor(&BigInt::from(d)).to_u64().unwrap())
                    .collect()
            })
            .collect();
        let from_snf = kept
            .iter()
            .map(|&j| {
                (0..n_raw).map(|i| snf.right_inverse[j][i].mod_floor(&BigInt::from(exponent)).to_u64().unwrap()).collect()
            })
            .collect();
        let labels = (0..factors.len()).map(|j| format!("{label_prefix}g{j}")).collect();
        let group = FiniteAbelianGroup::new(factors, labels)?;
        Ok(Presentation { group, to_snf, from_snf })
    }

    /// Invariant-factor coordinates of the element with raw exponents `raw`.
    pub fn coords(&self, raw: &[u64]) -> Vec<u64> {
        let f = self.group.invariant_factors();
        let mut out = vec![0u64; f.len()];
        for (i, &r) in raw.iter().enumerate() {
            if r == 0 {
                continue;
            }
            for (j, &d) in f.iter().enumerate() {
                let t = (r as u128 % d as u128) * self.to_snf[i][j] as u128 % d as u128;
                out[j] = ((out[j] as u128 + t) % d as u128) as u64;
            }
        }
        out
    }

    pub fn generator_raw(&self, j: usize) -> &[u64] {
        &self.from_snf[j]
    }
}

/// Builds the invariant-factor presentation of a concrete finite abelian group
/// given by element codes and a product function.
///
/// Generators are adjoined greedily; each new generator `g` contributes the
/// relation `t e_g = dlog(g^t)` with `t` minimal such that `g^t` lies in the
/// subgroup generated so far.
pub fn group_from_multiplication<F>(elements: &[u64], mul: F) -> Result<FiniteAbelianGroup>
where
    F: Fn(u64, u64) -> u64,
{
    if elements.is_empty() {
        return Err(Error::NotAGroup("empty set".into()));
    }
    let set: std::collections::HashSet<u64> = elements.iter().copied().collect();
    if set.len() != elements.len() {
        return Err(Error::NotAGroup("repeated element codes".into()));
    }
    let identity = *elements
        .iter()
        .find(|&&e| mul(e, e) == e)
        .ok_or_else(|| Error::NotAGroup("no idempotent element".into()))?;
    for &x in elements {
        if mul(identity, x) != x || mul(x, identity) != x {
            return Err(Error::NotAGroup("idempotent is not a two-sided identity".into()));
        }
    }

    let mut span: HashMap<u64, Vec<i64>> = HashMap::from([(identity, vec![])]);
    let mut gens: Vec<u64> = Vec::new();
    let mut relations: Vec<Vec<i64>> = Vec::new();
    for &x in elements {
        if span.contains_key(&x) {
            continue;
        }
        for &g in &gens {
            if mul(g, x) != mul(x, g) {
                return Err(Error::NotAGroup("elements do not commute".into()));
            }
        }
        let r = gens.len();
        let mut power = x;
        let mut t = 1i64;
        while !span.contains_key(&power) {
            power = mul(power, x);
            if !set.contains(&power) {
                return Err(Error::NotAGroup("set is not closed under the product".into()));
            }
            t += 1;
            if t as usize > elements.len() {
                return Err(Error::NotAGroup("element of infinite order".into()));
            }
        }
        let mut rel = vec![0i64; r + 1];
        for (i, &e) in span[&power].iter().enumerate() {
            rel[i] = -e;
        }
        rel[r] = t;
        for row in relations.iter_mut() {
            row.push(0);
        }
        relations.push(rel);

        let old: Vec<(u64, Vec<i64>)> = span.iter().map(|(k, v)| (*k, v.clone())).collect();
        let mut next = HashMap::with_capacity(old.len() * t as usize);
        for (h, v) in old {
            let mut y = h;
            for a in 0..t {
                if !set.contains(&y) {
                    return Err(Error::NotAGroup("set is not closed under the product".into()));
                }
                let mut w = v.clone();
                w.resize(r, 0);
                w.push(a);
                next.insert(y, w);
                y = mul(y, x);
            }
        }
        span = next;
        gens.push(x);
    }
    if span.len() != elements.len() {
        return Err(Error::NotAGroup("generated subgroup is smaller than the set".into()));
    }

    let n_raw = gens.len();
    let pres = Presentation::from_relations(&relations, n_raw, "")?;
    let mut table = BTreeMap::new();
    for (elem, raw) in &span {
        let mut padded: Vec<u64> = raw.iter().map(|&x| x as u64).collect();
        padded.resize(n_raw, 0);
        table.insert(*elem, pres.coords(&padded));
    }
    // Concrete generators: the elements whose coordinates are unit vectors.
    let rank = pres.group.rank();
    let mut gen_elems = vec![identity; rank];
    for (elem, c) in &table {
        if c.iter().filter(|&&x| x != 0).count() == 1 {
            if let Some(j) = c.iter().position(|&x| x == 1) {
                if c[j] == 1 {
                    gen_elems[j] = *elem;
                }
            }
        }
    }
    let mut group = pres.group;
    group.generator_labels = gen_elems.iter().map(|e| e.to_string()).collect();
    group.dlog_table = Some(table);
    group.generator_elements = Some(gen_elems);
    Ok(group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{gcd, mul_mod};

    fn units_mod(n: u64) -> FiniteAbelianGroup {
        let elems: Vec<u64> = (0..n.max(2)).filter(|&a| gcd(a, n) == 1).map(|a| a % n.max(1)).collect();
        let elems: Vec<u64> = if n == 1 { vec![0] } else { elems };
        group_from_multiplication(&elems, |a, b| mul_mod(a, b, n.max(1))).unwrap()
    }

    // Brute-force oracle: multiset of element orders determines a finite abelian group.
    fn element_order_profile(g: &FiniteAbelianGroup) -> Vec<u64> {
        let mut v: Vec<u64> = g
            .elements()
            .map(|e| e.iter().zip(g.invariant_factors()).fold(1, |acc, (&x, &d)| lcm(acc, d / gcd(x, d))))
            .collect();
        v.sort_unstable();
        v
    }

    fn brute_orders_mod(n: u64) -> Vec<u64> {
        let mut v: Vec<u64> = (1..n)
            .filter(|&a| gcd(a, n) == 1)
            .map(|a| {
                let mut k = 1;
                let mut x = a;
                while x != 1 {
                    x = mul_mod(x, a, n);
                    k += 1;
                }
                k
            })
            .collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn units_of_z8() {
        let g = units_mod(8);
        assert_eq!(g.invariant_factors(), &[2, 2]);
        assert_eq!(element_order_profile(&g), brute_orders_mod(8));
    }

    #[test]
    fn units_of_z3_and_trivial() {
        assert_eq!(units_mod(3).invariant_factors(), &[2]);
        assert_eq!(units_mod(1).invariant_factors(), &[] as &[u64]);
        assert_eq!(units_mod(2).invariant_factors(), &[] as &[u64]);
    }

    #[test]
    fn dlog_round_trip_and_orders() {
        for n in 3..120u64 {
            let g = units_mod(n);
            assert_eq!(g.order(), crate::arith::euler_phi(n));
            assert_eq!(element_order_profile(&g), brute_orders_mod(n), "n = {n}");
            let gens = g.generator_elements().unwrap();
            let table = g.dlog_table().unwrap();
            for (&elem, v) in table {
                // exponent vector -> element -> exponent vector
                let mut x = 1u64;
                for (i, &e) in v.iter().enumerate() {
                    x = mul_mod(x, crate::arith::pow_mod(gens[i], e, n), n);
                }
                assert_eq!(x, elem);
            }
        }
    }

    #[test]
    fn rejects_non_groups() {
        // {1, 2} mod 5 is not closed
        assert!(group_from_multiplication(&[1, 2], |a, b| a * b % 5).is_err());
        // non-abelian: S3 as permutations encoded 0..6
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap() as u64;
        let compose = |a: u64, b: u64| {
            let (pa, pb) = (perms[a as usize], perms[b as usize]);
            idx([pa[pb[0]], pa[pb[1]], pa[pb[2]]])
        };
        let elems: Vec<u64> = (0..6).collect();
        assert!(matches!(group_from_multiplication(&elems, compose), Err(Error::NotAGroup(_))));
    }

    #[test]
    fn presentation_rejects_free_part() {
        assert!(matches!(Presentation::from_relations(&[vec![2, 0]], 2, ""), Err(Error::InfiniteGroup(1))));
    }
}
