//! Dimensions of `S_k(Gamma_1(N))` and of its new subspace, `k` even.

use serde::Serialize;

use crate::arith::{divisors, euler_phi, factorize};
use crate::error::{Error, Result};

fn check_weight(k: u64) -> Result<()> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::UnsupportedWeight(k));
    }
    Ok(())
}

/// Index, elliptic point counts and cusp count of `+-Gamma_1(N)` in `PSL_2(Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CurveInvariants {
    pub index: u64,
    pub e2: u64,
    pub e3: u64,
    pub cusps: u64,
    pub genus: u64,
}

pub fn curve_invariants(n: u64) -> CurveInvariants {
    assert!(n >= 1, "level must be positive");
    // For N <= 4, +-Gamma_1(N) = Gamma_0(N).
    let (index, e2, e3, cusps) = match n {
        1 => (1, 1, 1, 1),
        2 => (3, 1, 0, 2),
        3 => (4, 0, 1, 2),
        4 => (6, 0, 0, 3),
        _ => {
            let mut num = n * n;
            for (p, _) in factorize(n) {
                num = num / (p * p) * (p * p - 1);
            }
            let cusps = divisors(n).iter().map(|&d| euler_phi(d) * euler_phi(n / d)).sum::<u64>() / 2;
            (num / 2, 0, 0, cusps)
        }
    };
    // 12(g - 1) = index - 3 e2 - 4 e3 - 6 cusps
    let twelve_g = 12 + index as i64 - 3 * e2 as i64 - 4 * e3 as i64 - 6 * cusps as i64;
    assert!(twelve_g >= 0 && twelve_g % 12 == 0, "genus formula must be integral");
    CurveInvariants { index, e2, e3, cusps, genus: (twelve_g / 12) as u64 }
}

/// `dim S_k(Gamma_1(N))` for even `k >= 2`.
pub fn dim_cusp(k: u64, n: u64) -> Result<u64> {
    check_weight(k)?;
    if n == 0 {
        return Err(Error::InvalidInput("level must be positive".into()));
    }
    let inv = curve_invariants(n);
    if k == 2 {
        return Ok(inv.genus);
    }
    let (k, g) = (k as i64, inv.genus as i64);
    let d = (k - 1) * (g - 1) + (k / 2 - 1) * inv.cusps as i64 + inv.e2 as i64 * (k / 4) + inv.e3 as i64 * (k / 3);
    Ok(d.max(0) as u64)
}

/// Multiplicative `beta` with `beta(p) = -2`, `beta(p^2) = 1`, `beta(p^e) = 0` for `e >= 3`.
fn beta(n: u64) -> i64 {
    factorize(n)
        .into_iter()
        .map(|(_, e)| match e {
            1 => -2,
            2 => 1,
            _ => 0,
        })
        .product()
}

/// `dim S_k^new(Gamma_1(N))`.
pub fn dim_new(k: u64, n: u64) -> Result<u64> {
    check_weight(k)?;
    let mut total = 0i64;
    for d in divisors(n) {
        let b = beta(n / d);
        if b != 0 {
            total += b * dim_cusp(k, d)? as i64;
        }
    }
    if total < 0 {
        return Err(Error::InvariantViolation(format!("negative newform dimension at k = {k}, N = {n}")));
    }
    Ok(total as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DimensionRecord {
    pub k: u64,
    #[serde(rename = "N")]
    pub level: u64,
    pub dim_full: u64,
    pub dim_new: u64,
}

impl DimensionRecord {
    pub fn compute(k: u64, level: u64) -> Result<Self> {
        let rec = DimensionRecord { k, level, dim_full: dim_cusp(k, level)?, dim_new: dim_new(k, level)? };
        // dim S_k(N) = sum over d | N of sigma_0(N/d) dim S_k^new(d)
        let old_new: u64 = divisors(level)
            .iter()
            .map(|&d| Ok(divisors(level / d).len() as u64 * dim_new(k, d)?))
            .sum::<Result<u64>>()?;
        if rec.dim_new > rec.dim_full || old_new != rec.dim_full {
            return Err(Error::InvariantViolation(format!("new/old decomposition fails at k = {k}, N = {level}")));
        }
        Ok(rec)
    }
}

/// `(k - 1) / (4 pi^2)`.
pub fn density_target(k: u64) -> f64 {
    (k as f64 - 1.0) / (4.0 * std::f64::consts::PI * std::f64::consts::PI)
}

/// `(k - 1) / 24 * prod_{p | N} (1 - 1/p^2)`, the leading coefficient of
/// `dim S_k(Gamma_1(N)) / N^2` from the index term of the dimension formula.
pub fn leading_density(k: u64, n: u64) -> f64 {
    factorize(n).iter().fold((k as f64 - 1.0) / 24.0, |acc, &(p, _)| acc * (1.0 - 1.0 / (p * p) as f64))
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticRow {
    pub k: u64,
    #[serde(rename = "N")]
    pub level: u64,
    pub dim: u64,
    pub ratio: f64,
    pub target: f64,
    pub relative_error: f64,
    pub leading_density: f64,
}

/// `dim S_k(Gamma_1(N)) / N^2` against `(k-1)/(4 pi^2)` for each level.
pub fn asymptotic_report(k: u64, levels: &[u64]) -> Result<Vec<AsymptoticRow>> {
    levels
        .iter()
        .map(|&n| {
            let dim = dim_cusp(k, n)?;
            let ratio = dim as f64 / (n * n) as f64;
            let target = density_target(k);
            Ok(AsymptoticRow {
                k,
                level: n,
                dim,
                ratio,
                target,
                relative_error: (ratio - target).abs() / target,
                leading_density: leading_density(k, n),
            })
        })
        .collect()
}

/// `dim S_k^new(Gamma_1(p^i)) / p^{2i}` against `(k-1)/(4 pi^2) (1 - 1/p^2)^2`.
pub fn newform_report(k: u64, p: u64, i: u32) -> Result<AsymptoticRow> {
    let n = crate::arith::ipow(p, i);
    let dim = dim_new(k, n)?;
    let ratio = dim as f64 / (n as f64 * n as f64);
    let shrink = 1.0 - 1.0 / (p * p) as f64;
    let target = density_target(k) * shrink * shrink;
    Ok(AsymptoticRow {
        k,
        level: n,
        dim,
        ratio,
        target,
        relative_error: (ratio - target).abs() / target,
        leading_density: leading_density(k, n),
    })
}
