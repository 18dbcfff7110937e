//! Smith normal form of integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

/// Result of `U * M * V = D` with `U`, `V` unimodular and `D` diagonal.
#[derive(Debug, Clone)]
pub struct SmithForm {
    /// Full diagonal of `D` (length `min(rows, cols)`), non-negative, each
    /// entry dividing the next among the nonzero ones.
    pub diagonal: Vec<BigInt>,
    /// Diagonal entries greater than one.
    pub invariant_factors: Vec<BigInt>,
    /// `cols - rank`: rank of the free part of `Z^cols / rowspace(M)`.
    pub free_rank: usize,
    pub left: Matrix,
    pub right: Matrix,
    /// Inverse of `right`.
    pub right_inverse: Matrix,
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for (t, brow) in b.iter().enumerate().take(k) {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][t] * &brow[j];
            }
        }
    }
    out
}

/// Smith normal form of a small-integer matrix given as rows.
pub fn smith_normal_form(rows: &[Vec<i64>]) -> SmithForm {
    let cols = rows.first().map_or(0, |r| r.len());
    let m: Matrix = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    smith_normal_form_big(m, cols)
}

/// Smith normal form over arbitrary-precision integers. `cols` is needed for
/// matrices with no rows.
pub fn smith_normal_form_big(mut a: Matrix, cols: usize) -> SmithForm {
    let rows = a.len();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut vinv = identity(cols);
    let n = rows.min(cols);

    let mut t = 0;
    while t < n {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let Some((pi, pj)) = min_entry(&a, t, rows, cols) else { break };
        swap_rows(&mut a, &mut u, t, pi);
        swap_cols(&mut a, &mut v, &mut vinv, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                add_row(&mut a, &mut u, i, t, &(-q));
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                add_col(&mut a, &mut v, &mut vinv, j, t, &(-q));
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let (pi, pj) = min_in_cross(&a, t, rows, cols);
                swap_rows(&mut a, &mut u, t, pi);
                swap_cols(&mut a, &mut v, &mut vinv, t, pj);
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest.
            let mut bad = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    add_row(&mut a, &mut u, t, i, &one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for j in 0..cols {
                a[t][j] = -&a[t][j];
            }
            for j in 0..rows {
                u[t][j] = -&u[t][j];
            }
        }
        t += 1;
    }

    let diagonal: Vec<BigInt> = (0..n).map(|i| a[i][i].clone()).collect();
    let rank = diagonal.iter().filter(|d| !d.is_zero()).count();
    let invariant_factors = diagonal.iter().filter(|d| **d > BigInt::one()).cloned().collect();
    SmithForm { diagonal, invariant_factors, free_rank: cols - rank, left: u, right: v, right_inverse: vinv }
}

fn min_entry(a: &Matrix, t: usize, rows: usize, cols: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..rows {
        for j in t..cols {
            if a[i][j].is_zero() {
                continue;
            }
            if best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn min_in_cross(a: &Matrix, t: usize, rows: usize, cols: usize) -> (usize, usize) {
    let mut best = (t, t);
    for i in t..rows {
        if !a[i][t].is_zero() && (a[best.0][best.1].is_zero() || a[i][t].abs() < a[best.0][best.1].abs()) {
            best = (i, t);
        }
    }
    for j in t..cols {
        if !a[t][j].is_zero() && (a[best.0][best.1].is_zero() || a[t][j].abs() < a[best.0][best.1].abs()) {
            best = (t, j);
        }
    }
    best
}

fn swap_rows(a: &mut Matrix, u: &mut Matrix, i: usize, j: usize) {
    if i != j {
        a.swap(i, j);
        u.swap(i, j);
    }
}

fn swap_cols(a: &mut Matrix, v: &mut Matrix, vinv: &mut Matrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    for row in v.iter_mut() {
        row.swap(i, j);
    }
    vinv.swap(i, j);
}

/// row_i += c * row_j
fn add_row(a: &mut Matrix, u: &mut Matrix, i: usize, j: usize, c: &BigInt) {
    for k in 0..a[i].len() {
        let x = &a[j][k] * c;
        a[i][k] += x;
    }
    for k in 0..u[i].len() {
        let x = &u[j][k] * c;
        u[i][k] += x;
    }
}

/// col_i += c * col_j
fn add_col(a: &mut Matrix, v: &mut Matrix, vinv: &mut Matrix, i: usize, j: usize, c: &BigInt) {
    for row in a.iter_mut() {
        let x = &row[j] * c;
        row[i] += x;
    }
    for row in v.iter_mut() {
        let x = &row[j] * c;
        row[i] += x;
    }
    // V^-1 picks up the inverse elementary operation on the left: row_j -= c * row_i.
    for k in 0..vinv[j].len() {
        let x = &vinv[i][k] * c;
        vinv[j][k] -= x;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn as_i64(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    fn check_factorisation(m: &[Vec<i64>]) -> SmithForm {
        let s = smith_normal_form(m);
        let big: Matrix = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let d = mat_mul(&mat_mul(&s.left, &big), &s.right);
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i == j {
                    assert_eq!(x, &s.diagonal[i]);
                } else {
                    assert!(x.is_zero(), "off-diagonal entry survived");
                }
            }
        }
        let cols = m.first().map_or(0, |r| r.len());
        assert_eq!(mat_mul(&s.right, &s.right_inverse), identity(cols));
        s
    }

    #[test]
    fn diag_6_10() {
        let s = check_factorisation(&[vec![6, 0], vec![0, 10]]);
        assert_eq!(as_i64(&s.invariant_factors), vec![2, 30]);
        assert_eq!(s.free_rank, 0);
    }

    #[test]
    fn identity_is_trivial() {
        let s = check_factorisation(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert!(s.invariant_factors.is_empty());
    }

    #[test]
    fn single_entry() {
        let s = check_factorisation(&[vec![5]]);
        assert_eq!(as_i64(&s.invariant_factors), vec![5]);
    }

    #[test]
    fn zero_matrix_reports_free_rank() {
        let s = check_factorisation(&[vec![0, 0]]);
        assert_eq!(s.free_rank, 2);
        let s = smith_normal_form_big(vec![], 3);
        assert_eq!(s.free_rank, 3);
    }

    // Exhaustive oracle for 2x2 matrices: d1 = gcd of entries, d1*d2 = |det|.
    #[test]
    fn two_by_two_against_gcd_det_oracle() {
        for a in -4i64..=4 {
            for b in -3i64..=3 {
                for c in -3i64..=3 {
                    for d in -4i64..=4 {
                        let s = check_factorisation(&[vec![a, b], vec![c, d]]);
                        let g = a.gcd(&b).gcd(&c).gcd(&d);
                        let det = (a * d - b * c).abs();
                        let diag = as_i64(&s.diagonal);
                        assert_eq!(diag[0], g);
                        assert_eq!(diag[0] * diag[1], det);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn random_rectangular(rows in proptest::collection::vec(proptest::collection::vec(-30i64..30, 3), 1..5)) {
            let s = check_factorisation(&rows);
            for w in s.invariant_factors.windows(2) {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }
}
