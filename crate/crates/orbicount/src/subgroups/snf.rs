//! Smith normal form of integer matrices over exact big integers.
//!
//! Pivots are chosen by least absolute value to keep coefficient growth in
//! check. Transform matrices are tracked on request so `U * A * V = D` can be
//! verified.

use crate::Int;
use num_integer::Integer;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone)]
pub struct SnfResult {
    /// Diagonal entries `d_1 | d_2 | ...`, all non-negative, zeros trailing.
    pub diagonal: Vec<Int>,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
    /// Left transform, when tracking was requested.
    pub left: Option<Vec<Vec<Int>>>,
    /// Right transform, when tracking was requested.
    pub right: Option<Vec<Vec<Int>>>,
}

fn identity(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::from(1) } else { Int::zero() }).collect())
        .collect()
}

/// Compute the Smith normal form of `a` (rows x cols, any shape).
pub fn smith_normal_form(a: &[Vec<Int>], track: bool) -> SnfResult {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<Int>> = a.to_vec();
    let mut left = if track { Some(identity(rows)) } else { None };
    let mut right = if track { Some(identity(cols)) } else { None };

    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: least nonzero absolute value in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() {
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => m[i][j].abs() < m[pi][pj].abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        if let Some(l) = left.as_mut() {
            l.swap(t, pi);
        }
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        if let Some(r) = right.as_mut() {
            r.swap(t, pj);
        }

        // clear row t and column t; keep going until both are clean, since
        // reduction steps can reintroduce entries
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !m[i][t].is_zero() {
                    let q = div_nearest(&m[i][t], &m[t][t]);
                    if !q.is_zero() {
                        for j in 0..cols {
                            let sub = &q * &m[t][j];
                            m[i][j] -= sub;
                        }
                        if let Some(l) = left.as_mut() {
                            for j in 0..rows {
                                let sub = &q * &l[t][j];
                                l[i][j] -= sub;
                            }
                        }
                    }
                    if !m[i][t].is_zero() {
                        // remainder is strictly smaller: swap it into the pivot
                        m.swap(t, i);
                        if let Some(l) = left.as_mut() {
                            l.swap(t, i);
                        }
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() {
                    let q = div_nearest(&m[t][j], &m[t][t]);
                    if !q.is_zero() {
                        for i in 0..rows {
                            let sub = &q * &m[i][t];
                            m[i][j] -= sub;
                        }
                        if let Some(r) = right.as_mut() {
                            for i in 0..cols {
                                let sub = &q * &r[i][t];
                                r[i][j] -= sub;
                            }
                        }
                    }
                    if !m[t][j].is_zero() {
                        for row in m.iter_mut() {
                            row.swap(t, j);
                        }
                        if let Some(r) = right.as_mut() {
                            for row in r.iter_mut() {
                                row.swap(t, j);
                            }
                        }
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        t += 1;
    }

    // make diagonal non-negative
    for i in 0..rows.min(cols) {
        if m[i][i].is_negative() {
            for j in 0..cols {
                m[i][j] = -m[i][j].clone();
            }
            if let Some(l) = left.as_mut() {
                for j in 0..rows {
                    l[i][j] = -l[i][j].clone();
                }
            }
        }
    }

    // enforce the divisibility chain d_i | d_{i+1}
    let k = rows.min(cols);
    loop {
        let mut fixed = true;
        for i in 0..k.saturating_sub(1) {
            let (a, b) = (m[i][i].clone(), m[i + 1][i + 1].clone());
            if b.is_zero() || a.is_zero() {
                continue;
            }
            if (&b % &a).is_zero() {
                continue;
            }
            fixed = false;
            let g = a.gcd(&b);
            let l = (&a / &g) * &b;
            // replace (a, b) by (gcd, lcm); realized by row/col operations on
            // the 2x2 diagonal block
            if track {
                // b = q*a + r style Bezout: g = x*a + y*b
                let e = a.extended_gcd(&b);
                let (x, y) = (e.x, e.y);
                // row i += row i+1 ; then col ops produce [[g,0],[0,l]]
                // left transform: L' rows i, i+1
                let (li, li1) = (left.as_ref().unwrap()[i].clone(), left.as_ref().unwrap()[i + 1].clone());
                let lm = left.as_mut().unwrap();
                // new row i = x*row_i + y*row_{i+1}
                for j in 0..rows {
                    lm[i][j] = &x * &li[j] + &y * &li1[j];
                }
                // new row i+1 = -(b/g)*row_i + (a/g)*row_{i+1}
                for j in 0..rows {
                    lm[i + 1][j] = -(&b / &g) * &li[j] + (&a / &g) * &li1[j];
                }
                let rm = right.as_mut().unwrap();
                let (c0, c1): (Vec<Int>, Vec<Int>) = (
                    rm.iter().map(|r| r[i].clone()).collect(),
                    rm.iter().map(|r| r[i + 1].clone()).collect(),
                );
                // new col i = col_i + col_{i+1} * (y*b/g)... derive from
                // U = [[x, y], [-b/g, a/g]], A = diag(a, b): U*A = [[xa, yb], [-ab/g, ab/g]]
                // choose V = [[1, -y*b/g], [1, x*a/g]] so that U*A*V = diag(g, l)
                for (r, row) in rm.iter_mut().enumerate() {
                    row[i] = &c0[r] + &c1[r];
                    row[i + 1] = -(&y * &b / &g) * &c0[r] + (&x * &a / &g) * &c1[r];
                }
            }
            m[i][i] = g;
            m[i + 1][i + 1] = l;
        }
        if fixed {
            break;
        }
    }

    let diagonal: Vec<Int> = (0..k).map(|i| m[i][i].clone()).collect();
    let rank = diagonal.iter().filter(|d| !d.is_zero()).count();
    SnfResult { diagonal, rank, left, right }
}

/// Division rounded to nearest, which halves remainders and keeps pivots
/// shrinking.
fn div_nearest(a: &Int, b: &Int) -> Int {
    let (mut q, r) = a.div_rem(b);
    let two_r: Int = &r * 2;
    if two_r.abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// Multiply matrices (for the `U * A * V = D` check).
pub fn mat_mul(a: &[Vec<Int>], b: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let rows = a.len();
    let inner = if rows == 0 { 0 } else { a[0].len() };
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &a[i][k] * &b[k][j]).sum::<Int>())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Int>> {
        rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect()
    }

    /// Independent oracle: d_k = gcd of all k x k minors; invariant factors
    /// are d_k / d_{k-1}.
    fn minor_gcd_invariants(a: &[Vec<Int>]) -> Vec<Int> {
        let rows = a.len();
        let cols = if rows == 0 { 0 } else { a[0].len() };
        let max_k = rows.min(cols);
        let mut out = Vec::new();
        let mut prev = Int::from(1);
        for k in 1..=max_k {
            let mut g = Int::zero();
            for rsel in combinations(rows, k) {
                for csel in combinations(cols, k) {
                    let d = det(&submatrix(a, &rsel, &csel));
                    g = num_integer::Integer::gcd(&g, &d);
                }
            }
            if g.is_zero() {
                break;
            }
            out.push(&g / &prev);
            prev = g;
        }
        out
    }

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if k > n {
            return vec![];
        }
        let mut out = Vec::new();
        for first in 0..=n - k {
            for mut rest in combinations(n - first - 1, k - 1) {
                for r in rest.iter_mut() {
                    *r += first + 1;
                }
                let mut v = vec![first];
                v.extend(rest);
                out.push(v);
            }
        }
        out
    }

    fn submatrix(a: &[Vec<Int>], rsel: &[usize], csel: &[usize]) -> Vec<Vec<Int>> {
        rsel.iter().map(|&i| csel.iter().map(|&j| a[i][j].clone()).collect()).collect()
    }

    fn det(a: &Vec<Vec<Int>>) -> Int {
        let n = a.len();
        if n == 0 {
            return Int::from(1);
        }
        if n == 1 {
            return a[0][0].clone();
        }
        let mut total = Int::zero();
        for j in 0..n {
            let minor: Vec<Vec<Int>> = (1..n)
                .map(|i| (0..n).filter(|&c| c != j).map(|c| a[i][c].clone()).collect())
                .collect();
            let term = &a[0][j] * det(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    #[test]
    fn matches_minor_gcd_oracle_on_the_spec_matrix() {
        let a = m(&[&[2, 4], &[6, 8]]);
        let snf = smith_normal_form(&a, false);
        let nonzero: Vec<Int> = snf.diagonal.iter().filter(|d| !d.is_zero()).cloned().collect();
        assert_eq!(nonzero, vec![Int::from(2), Int::from(4)]);
        assert_eq!(minor_gcd_invariants(&a), nonzero);
    }

    #[test]
    fn matches_minor_gcd_oracle_on_assorted_matrices() {
        let cases = [
            m(&[&[1, 0], &[0, 1]]),
            m(&[&[0, 0], &[0, 0]]),
            m(&[&[6, 10, 15]]),
            m(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 4]]),
            m(&[&[3, 1, -4], &[2, -3, 1], &[-4, 2, 0]]),
            m(&[&[4, 6], &[6, 9], &[10, 15]]),
        ];
        for a in cases {
            let snf = smith_normal_form(&a, false);
            let nonzero: Vec<Int> =
                snf.diagonal.iter().filter(|d| !d.is_zero()).cloned().collect();
            assert_eq!(minor_gcd_invariants(&a), nonzero, "failed on {a:?}");
        }
    }

    #[test]
    fn divisibility_chain_holds() {
        let a = m(&[&[2, 0], &[0, 3]]);
        let snf = smith_normal_form(&a, false);
        assert_eq!(snf.diagonal, vec![Int::from(1), Int::from(6)]);
        for w in snf.diagonal.windows(2) {
            if !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn transforms_reconstruct_the_input() {
        let cases = [
            m(&[&[2, 4], &[6, 8]]),
            m(&[&[2, 0], &[0, 3]]),
            m(&[&[3, 1, -4], &[2, -3, 1]]),
            m(&[&[0, 5], &[7, 0], &[2, 2]]),
        ];
        for a in cases {
            let snf = smith_normal_form(&a, true);
            let u = snf.left.unwrap();
            let v = snf.right.unwrap();
            let d = mat_mul(&mat_mul(&u, &a), &v);
            for (i, row) in d.iter().enumerate() {
                for (j, entry) in row.iter().enumerate() {
                    let expect =
                        if i == j && i < snf.diagonal.len() { snf.diagonal[i].clone() } else { Int::zero() };
                    assert_eq!(*entry, expect, "U*A*V mismatch at ({i},{j}) for {a:?}");
                }
            }
        }
    }
}
