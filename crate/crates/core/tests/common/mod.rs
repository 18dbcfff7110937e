//! Independent oracles shared by the integration tests. Nothing here calls into
//! the crate's own arithmetic.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn phi(n: u64) -> u64 {
    factor(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&m| factor(m) == vec![(m, 1)]).collect()
}

/// `dim S_k(Gamma_1(N))` from the Cohen-Oesterle formula, summed over even Dirichlet
/// characters mod `N` grouped by local conductor exponents.
pub fn dim_cusp_oracle(k: u64, n: u64) -> i64 {
    assert!(k >= 2 && k % 2 == 0);
    // per prime: (s, odd?, number of characters mod p^r with conductor exactly p^s and that parity)
    let local: Vec<(u64, u32, Vec<(u32, bool, u64)>)> = factor(n)
        .into_iter()
        .map(|(p, r)| {
            let mut opts = vec![(0, false, 1)];
            for s in 1..=r {
                if p == 2 {
                    match s {
                        1 => {}
                        2 => opts.push((2, true, 1)),
                        _ => {
                            let half = 1u64 << (s - 3);
                            opts.push((s, false, half));
                            opts.push((s, true, half));
                        }
                    }
                } else if s == 1 {
                    opts.push((1, false, (p - 1) / 2 - 1));
                    opts.push((1, true, (p - 1) / 2));
                } else {
                    let prim = phi(p.pow(s)) - phi(p.pow(s - 1));
                    opts.push((s, false, prim / 2));
                    opts.push((s, true, prim / 2));
                }
            }
            (p, r, opts)
        })
        .collect();
    let lambda = |p: u64, r: u32, s: u32| -> i64 {
        let p = p as i64;
        if 2 * s <= r {
            if r % 2 == 0 {
                p.pow(r / 2) + p.pow(r / 2 - 1)
            } else {
                2 * p.pow((r - 1) / 2)
            }
        } else {
            2 * p.pow(r - s)
        }
    };
    // (parity, count, product of lambdas) accumulated over primes
    let mut acc: Vec<(bool, i64, i64)> = vec![(false, 1, 1)];
    for (p, r, opts) in &local {
        let mut next = Vec::new();
        for &(par, cnt, lam) in &acc {
            for &(s, odd, c) in opts {
                if c > 0 {
                    next.push((par ^ odd, cnt * c as i64, lam * lambda(*p, *r, s)));
                }
            }
        }
        acc = next;
    }
    let even: Vec<(i64, i64)> = acc.into_iter().filter(|t| !t.0).map(|t| (t.1, t.2)).collect();
    let n_even: i64 = even.iter().map(|t| t.0).sum();
    let sum_lambda: i64 = even.iter().map(|t| t.0 * t.1).sum();
    let psi = factor(n).iter().fold(n, |acc, &(p, _)| acc / p * (p + 1)) as i64;
    let phin = phi(n) as i64;
    // sum over even chi of chi(x) is (phi/2)([x = 1] + [x = -1])
    let hits = |f: &dyn Fn(u64) -> u64| -> i64 {
        (0..n)
            .filter(|&x| f(x) % n == 0)
            .map(|x| (x % n == 1 % n) as i64 + ((x + 1) % n == 0) as i64)
            .sum()
    };
    let e4 = hits(&|x| x * x + 1);
    let e3 = hits(&|x| x * x + x + 1);
    let k = k as i64;
    let g4 = if k % 4 == 2 { -6 } else { 6 };
    let g3 = match k % 3 {
        0 => 8,
        1 => 0,
        _ => -8,
    };
    // everything times 24; the elliptic sums carry phi/2
    let total24 = 2 * (k - 1) * psi * n_even - 12 * sum_lambda + g4 * phin * e4 / 2 + g3 * phin * e3 / 2;
    assert_eq!(total24 % 24, 0, "Cohen-Oesterle sum must be integral at k = {k}, N = {n}");
    total24 / 24 + (k == 2) as i64
}

/// Kronecker symbol `(d / n)` for `n > 0`.
pub fn kronecker(d: i64, n: u64) -> i64 {
    let mut result = 1;
    let mut n = n;
    let a = d;
    while n % 2 == 0 {
        n /= 2;
        match a.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => result = -result,
            _ => return 0,
        }
    }
    // Jacobi symbol (a / n), n odd
    let mut a = a.rem_euclid(n as i64) as u64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

pub fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    let squarefree = |m: i64| factor(m.unsigned_abs()).iter().all(|&(_, e)| e == 1);
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            (m.rem_euclid(4) == 2 || m.rem_euclid(4) == 3) && squarefree(m)
        }
        _ => false,
    }
}

/// `h(d) = -(w / 2|d|) sum_{a=1}^{|d|} a (d/a)`.
pub fn analytic_class_number(d: i64) -> u64 {
    let w = match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    let m = d.unsigned_abs();
    let s: i64 = (1..m).map(|a| a as i64 * kronecker(d, a)).sum();
    let num = -w * s;
    assert_eq!(num % (2 * m as i64), 0);
    (num / (2 * m as i64)) as u64
}

pub type F = (i64, i64, i64);

fn disc(f: F) -> i64 {
    f.1 * f.1 - 4 * f.0 * f.2
}

pub fn reduce(f: F) -> F {
    let (mut a, mut b, mut c) = f;
    loop {
        // bring b into (-a, a]
        let d = b * b - 4 * a * c;
        while b > a {
            b -= 2 * a;
        }
        while b <= -a {
            b += 2 * a;
        }
        c = (b * b - d) / (4 * a);
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return (a, b, c);
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.signum() * a, a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// An equivalent form whose first coefficient is coprime to `m`.
fn coprime_first(f: F, m: i64) -> F {
    if gcd(f.0, m) == 1 {
        return f;
    }
    // smallest represented value coprime to m keeps the middle-coefficient search short
    let best = (0..30i64)
        .flat_map(|x| (-30..30i64).map(move |y| (x, y)))
        .filter(|&(x, y)| gcd(x, y) == 1)
        .map(|(x, y)| (f.0 * x * x + f.1 * x * y + f.2 * y * y, x, y))
        .filter(|&(v, _, _)| gcd(v, m) == 1)
        .min();
    if let Some((v, x, y)) = best {
        // complete (x, y) to [[x, z], [y, w]] of determinant 1
        let (_, w, nz) = ext_gcd(x, y);
        let z = -nz;
        assert_eq!(x * w - y * z, 1);
        let b = 2 * f.0 * x * z + f.1 * (x * w + y * z) + 2 * f.2 * y * w;
        let c = f.0 * z * z + f.1 * z * w + f.2 * w * w;
        return (v, b, c);
    }
    panic!("no representation coprime to {m}");
}

/// Dirichlet composition by exhaustive search for the common middle coefficient.
pub fn compose(f: F, g: F) -> F {
    let d = disc(f);
    let g = coprime_first(g, f.0);
    let (a1, a2) = (f.0, g.0);
    let m = 4 * a1 * a2;
    let b = (0..2 * a1 * a2)
        .find(|&b| (b - f.1).rem_euclid(2 * a1) == 0 && (b - g.1).rem_euclid(2 * a2) == 0 && (b * b - d).rem_euclid(m) == 0)
        .expect("united forms have a common middle coefficient");
    reduce((a1 * a2, b, (b * b - d) / m))
}

pub fn reduced_forms(d: i64) -> Vec<F> {
    let mut out = BTreeSet::new();
    for a in 1..=(-d) {
        for b in -a..=a {
            if (b * b - d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - d) / (4 * a);
            if gcd(gcd(a, b), c) == 1 {
                out.insert(reduce((a, b, c)));
            }
        }
        if 3 * a * a > -d {
            break;
        }
    }
    out.into_iter().collect()
}

/// Number of elements of each order in the class group, from the full composition table.
pub fn class_group_order_profile(d: i64) -> BTreeMap<u64, u64> {
    let forms = reduced_forms(d);
    let id = reduce(if d % 2 == 0 { (1, 0, -d / 4) } else { (1, 1, (1 - d) / 4) });
    let table: BTreeMap<(F, F), F> =
        forms.iter().flat_map(|&f| forms.iter().map(move |&g| ((f, g), compose(f, g)))).collect();
    for (&(f, g), &h) in &table {
        assert!(forms.contains(&h), "composition leaves the set of reduced forms");
        assert_eq!(table[&(g, f)], h, "composition is commutative");
    }
    let mut profile = BTreeMap::new();
    for &f in &forms {
        let mut x = f;
        let mut ord = 1;
        while x != id {
            x = table[&(x, f)];
            ord += 1;
        }
        *profile.entry(ord).or_insert(0) += 1;
    }
    profile
}

/// Order profile of `Z/n1 x Z/n2 x ...`.
pub fn order_profile(factors: &[u64]) -> BTreeMap<u64, u64> {
    fn lcm(a: u64, b: u64) -> u64 {
        a / gcd(a as i64, b as i64) as u64 * b
    }
    let mut elems: Vec<u64> = vec![1];
    for &n in factors {
        let mut next = Vec::new();
        for &o in &elems {
            for x in 0..n {
                next.push(lcm(o, n / gcd(x as i64, n as i64) as u64));
            }
        }
        elems = next;
    }
    let mut profile = BTreeMap::new();
    for o in elems {
        *profile.entry(o).or_insert(0) += 1;
    }
    profile
}

/// Least-squares slope of `ys` against `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if var == 0.0 {
        0.0
    } else {
        cov / var
    }
}
