//! Lower bounds for symmetric power lifts at prime-power level.
//!
//! Newforms of weight `k` and level `p^l`, `l <= i`, that are not CM have
//! symmetric `n`-th power lifts of conductor exponent at most `(n + 2) i`, so
//! `sum_l dim S_k^new(p^l) - #CM` counts lifts at level `p^{(n+2) i}`.

use std::fmt::Write as _;
use std::str::FromStr;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::cm::cm_count;
use crate::error::{Error, Result};
use crate::modforms::{dim_cusp, dim_new};

/// Highest weight of the symmetric `n`-th power of a weight-`k` form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightVector {
    pub k: u64,
    pub n: u32,
    pub entries: Vec<i64>,
}

impl WeightVector {
    pub fn is_decreasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn sums_to_zero(&self) -> bool {
        self.entries.iter().sum::<i64>() == 0
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.entries.len();
        (0..n).all(|i| self.entries[i] == -self.entries[n - 1 - i])
    }

    pub fn check(&self) -> Result<()> {
        if self.entries.len() != self.n as usize + 1
            || !self.is_decreasing()
            || !self.sums_to_zero()
            || !self.is_antisymmetric()
        {
            return Err(Error::InvariantViolation(format!("malformed weight vector {:?}", self.entries)));
        }
        Ok(())
    }
}

/// `(n(k/2-1), (n-2)(k/2-1), ..., -n(k/2-1))`; the middle entry is 0 when `n` is even.
pub fn weight_mu(k: u64, n: u32) -> Result<WeightVector> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::UnsupportedWeight(k));
    }
    if n == 0 {
        return Err(Error::InvalidInput("symmetric power degree must be at least 1".into()));
    }
    let h = k as i64 / 2 - 1;
    let entries = (0..=n as i64).map(|r| (n as i64 - 2 * r) * h).collect();
    let v = WeightVector { k, n, entries };
    v.check()?;
    Ok(v)
}

/// Level exponent `j = (n + 2) i` reached by lifts of newforms of level `p^l`, `l <= i`.
pub fn level_propagation(i: u32, n: u32) -> u32 {
    (n + 2) * i
}

/// Range of level exponents a lift of a conductor-`l` newform can land in.
pub fn lift_levels(l: u32, n: u32) -> std::ops::RangeInclusive<u32> {
    1..=level_propagation(l, n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub k: u64,
    pub n: u32,
    pub p: u64,
    pub i: u32,
    pub j: u32,
    pub newform_sum: u64,
    pub cm_count: u64,
    pub lower_bound: u64,
    /// `lower_bound / p^{2i}` in lowest terms.
    pub ratio_num: u64,
    pub ratio_den: u64,
}

impl CensusRow {
    pub fn ratio(&self) -> f64 {
        self.ratio_num as f64 / self.ratio_den as f64
    }
}

/// `max(0, newform_sum - cm)`.
pub fn clamp_lower_bound(newform_sum: u64, cm: u64) -> u64 {
    newform_sum.saturating_sub(cm)
}

fn checked_pow(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e).ok_or_else(|| Error::InvalidInput(format!("{p}^{e} overflows")))
}

/// One row of the census.
///
/// CM forms are counted as newforms of every level `p^l`, `l <= i`, which
/// over-counts the CM part of `S_k(p^i)` at worst and so keeps the bound safe.
pub fn census_row(k: u64, n: u32, p: u64, i: u32) -> Result<CensusRow> {
    if p == 2 || !is_prime(p) {
        return Err(Error::UnsupportedPrime(p));
    }
    if n < 2 {
        return Err(Error::InvalidInput(format!("symmetric power degree {n} must be at least 2")));
    }
    if i == 0 {
        return Err(Error::InvalidInput("level exponent must be at least 1".into()));
    }
    let mut newform_sum = 0;
    let mut cm = 0;
    let mut full = 0;
    for l in 1..=i {
        let q = checked_pow(p, l)?;
        newform_sum += dim_new(k, q)?;
        cm += cm_count(k, q)?.total;
        full += dim_cusp(k, q)?;
    }
    let lower_bound = clamp_lower_bound(newform_sum, cm);
    if lower_bound > full {
        return Err(Error::InvariantViolation(format!(
            "lower bound {lower_bound} exceeds total cusp dimension {full} at k = {k}, p = {p}, i = {i}"
        )));
    }
    let den = checked_pow(p, 2 * i)?;
    let g = lower_bound.gcd(&den);
    Ok(CensusRow {
        k,
        n,
        p,
        i,
        j: level_propagation(i, n),
        newform_sum,
        cm_count: cm,
        lower_bound,
        ratio_num: lower_bound / g,
        ratio_den: den / g,
    })
}

/// Rows for `i = 1..=i_max`, in increasing `i`.
pub fn census(k: u64, n: u32, p: u64, i_max: u32) -> Result<Vec<CensusRow>> {
    census_sweep(k, n, &[p], i_max)
}

/// Rows for every prime and every `i <= i_max`, ordered by `(p, i)` in input order.
///
/// Rows are computed in parallel on the ambient rayon pool; the result does not
/// depend on the pool size.
pub fn census_sweep(k: u64, n: u32, primes: &[u64], i_max: u32) -> Result<Vec<CensusRow>> {
    let jobs: Vec<(u64, u32)> = primes.iter().flat_map(|&p| (1..=i_max).map(move |i| (p, i))).collect();
    jobs.par_iter().map(|&(p, i)| census_row(k, n, p, i)).collect()
}

/// Runs the sweep on a dedicated pool of `threads` workers.
pub fn census_with_threads(k: u64, n: u32, primes: &[u64], i_max: u32, threads: usize) -> Result<Vec<CensusRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    pool.install(|| census_sweep(k, n, primes, i_max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidInput(format!("unknown format '{s}' (expected csv or json)"))),
        }
    }
}

pub const CSV_HEADER: &str = "k,n,p,i,j,newform_sum,cm_count,lower_bound,ratio_num,ratio_den";

pub fn emit(rows: &[CensusRow], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.k, r.n, r.p, r.i, r.j, r.newform_sum, r.cm_count, r.lower_bound, r.ratio_num, r.ratio_den
                );
            }
            out
        }
        Format::Json => {
            let mut out = serde_json::to_string_pretty(rows).expect("rows serialize");
            out.push('\n');
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_examples() {
        assert_eq!(weight_mu(2, 5).unwrap().entries, vec![0; 6]);
        assert_eq!(weight_mu(4, 3).unwrap().entries, vec![3, 1, -1, -3]);
        assert_eq!(weight_mu(4, 2).unwrap().entries, vec![2, 0, -2]);
        assert!(weight_mu(5, 2).is_err());
    }

    #[test]
    fn propagation() {
        assert_eq!(level_propagation(1, 2), 4);
        assert_eq!(level_propagation(1, 3), 5);
        assert_eq!(level_propagation(2, 8), 20);
        assert_eq!(lift_levels(2, 3), 1..=10);
    }

    #[test]
    fn rows() {
        let r = census_row(4, 3, 13, 1).unwrap();
        assert_eq!(r.j, 5);
        assert_eq!(r.newform_sum, dim_new(4, 13).unwrap());
        let r = census_row(12, 2, 11, 1).unwrap();
        assert_eq!(r.newform_sum, dim_new(12, 11).unwrap());
        assert_eq!(r.ratio_den * r.lower_bound, r.ratio_num * 121);
        assert!(census_row(12, 2, 2, 1).is_err());
    }

    #[test]
    fn lower_bound_clamps() {
        assert_eq!(clamp_lower_bound(3, 5), 0);
        assert_eq!(clamp_lower_bound(13, 1), 12);
        let r = census_row(2, 2, 3, 3).unwrap();
        assert_eq!((r.newform_sum, r.cm_count, r.lower_bound), (13, 1, 12));
    }

    #[test]
    fn emit_shapes() {
        assert_eq!(emit(&[], Format::Csv), format!("{CSV_HEADER}\n"));
        let rows = census(4, 3, 13, 1).unwrap();
        let csv = emit(&rows, Format::Csv);
        assert_eq!(csv.lines().count(), 2);
        let back: Vec<CensusRow> = serde_json::from_str(&emit(&rows, Format::Json)).unwrap();
        assert_eq!(back, rows);
        assert!("xml".parse::<Format>().is_err());
    }
}
