//! Integer lattice algebra: echelon forms with unimodular transforms,
//! Hermite and Smith normal forms, integer kernels and lattice solves.

use crate::rat::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IMatrix = Vec<Vec<BigInt>>;

fn identity(n: usize) -> IMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn row_sub(a: &mut IMatrix, target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src = a[source].clone();
    for (x, s) in a[target].iter_mut().zip(&src) {
        *x -= q * s;
    }
}

fn row_neg(a: &mut IMatrix, r: usize) {
    for x in a[r].iter_mut() {
        *x = -x.clone();
    }
}

/// Row echelon form `e = t * m` with `t` unimodular. Pivots are positive and the
/// entries above each pivot are reduced into `[0, pivot)`, so `e` is the Hermite
/// normal form of `m`. Returns `(e, t, rank)`.
pub fn hermite_with_transform(m: &[Vec<BigInt>]) -> (IMatrix, IMatrix, usize) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: IMatrix = m.to_vec();
    let mut t = identity(rows);
    let mut p = 0;
    for c in 0..cols {
        if p == rows {
            break;
        }
        loop {
            let best = (p..rows)
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(b) = best else { break };
            a.swap(p, b);
            t.swap(p, b);
            let mut done = true;
            for i in p + 1..rows {
                if !a[i][c].is_zero() {
                    let q = a[i][c].div_floor(&a[p][c]);
                    row_sub(&mut a, i, p, &q);
                    row_sub(&mut t, i, p, &q);
                    if !a[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a[p][c].is_zero() {
            continue;
        }
        if a[p][c].is_negative() {
            row_neg(&mut a, p);
            row_neg(&mut t, p);
        }
        for i in 0..p {
            let q = a[i][c].div_floor(&a[p][c]);
            row_sub(&mut a, i, p, &q);
            row_sub(&mut t, i, p, &q);
        }
        p += 1;
    }
    (a, t, p)
}

/// Canonical Hermite basis of the lattice spanned by the rows of `m`.
pub fn hermite_rows(m: &[Vec<BigInt>]) -> IMatrix {
    let (e, _, r) = hermite_with_transform(m);
    e.into_iter().take(r).collect()
}

/// Lattice basis (in Hermite form) of `{x in Z^cols : m x = 0}`.
pub fn integer_kernel(m: &[Vec<BigInt>], cols: usize) -> IMatrix {
    if m.is_empty() {
        return identity(cols);
    }
    let mt: IMatrix = (0..cols).map(|c| m.iter().map(|r| r[c].clone()).collect()).collect();
    let (_, t, r) = hermite_with_transform(&mt);
    let kernel: IMatrix = t.into_iter().skip(r).collect();
    if kernel.is_empty() {
        return kernel;
    }
    hermite_rows(&kernel)
}

/// Unimodular `u` whose first column `w` satisfies `v . w = 1`; the remaining
/// columns form a lattice basis of `v`'s annihilator. `v` must be primitive.
pub fn unimodular_completion(v: &[BigInt]) -> Option<IMatrix> {
    let col: IMatrix = v.iter().map(|x| vec![x.clone()]).collect();
    let (e, t, _) = hermite_with_transform(&col);
    if !e[0][0].is_one() {
        return None;
    }
    let n = v.len();
    Some((0..n).map(|i| (0..n).map(|j| t[j][i].clone()).collect()).collect())
}

/// Least `k >= 1` such that `k b` lies in the integer column span of `m`, or
/// `None` when `b` is not even in the rational column span.
pub fn lattice_multiplier(m: &[Vec<BigInt>], b: &[BigInt]) -> Option<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    // columns of m become rows of mt; then y^T (t mt) = b^T
    let mt: IMatrix = (0..cols).map(|c| (0..rows).map(|r| m[r][c].clone()).collect()).collect();
    let (e, _, r) = hermite_with_transform(&mt);
    let e: Vec<Vec<Rat>> = e.iter().take(r).map(|row| crate::rat::from_integers(row)).collect();
    let target = crate::rat::from_integers(b);
    let y = if r == 0 {
        if target.iter().all(|x| x.is_zero()) {
            Vec::new()
        } else {
            return None;
        }
    } else {
        crate::linalg::solve(&crate::linalg::transpose(&e), &target)?
    };
    Some(y.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom())))
}

/// Nonzero invariant factors of `m` (Smith normal form diagonal).
pub fn smith_invariants(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a: IMatrix = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = a[i][t].div_floor(&a[t][t]);
            row_sub(&mut a, i, t, &q);
            if !a[i][t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..cols {
            let q = a[t][j].div_floor(&a[t][t]);
            if !q.is_zero() {
                for row in a.iter_mut().take(rows) {
                    let s = row[t].clone();
                    row[j] -= &q * s;
                }
            }
            if !a[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        let pivot = a[t][t].clone();
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&pivot)));
        if let Some(i) = bad {
            let src = a[i].clone();
            for (x, s) in a[t].iter_mut().zip(&src) {
                *x += s;
            }
            continue;
        }
        out.push(pivot.abs());
        t += 1;
    }
    out
}
