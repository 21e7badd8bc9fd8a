//! Dense two-phase simplex for the tiny linear programs behind generator-form
//! membership. Bland's rule keeps it cycle-free.

use alloc::vec;
use alloc::vec::Vec;

const EPS: f64 = 1e-11;

/// Minimizes `c.x` subject to `A x = b`, `x >= 0`.
///
/// Returns the optimal value and a minimizer, or `None` when the program is
/// infeasible or unbounded.
pub fn minimize(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Option<(f64, Vec<f64>)> {
    let m = a.len();
    let n = c.len();
    let width = n + m + 1;
    let rhs = n + m;
    let mut t: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        let mut row = vec![0.0; width];
        for j in 0..n {
            row[j] = sign * a[i][j];
        }
        row[n + i] = 1.0;
        row[rhs] = sign * b[i];
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // phase 1: minimize the sum of artificials
    let mut obj = vec![0.0; width];
    for j in n..n + m {
        obj[j] = 1.0;
    }
    for row in &t {
        for j in 0..width {
            obj[j] -= row[j];
        }
    }
    t.push(obj);
    run(&mut t, &mut basis, n + m)?;
    let scale = 1.0 + b.iter().fold(0.0f64, |acc, x| acc.max(libm::fabs(*x)));
    if -t[m][rhs] > 1e-9 * scale {
        return None;
    }
    // drive remaining artificials out of the basis
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| libm::fabs(t[i][j]) > EPS) {
                pivot(&mut t, &mut basis, i, j);
            }
        }
    }

    // phase 2
    let mut obj = vec![0.0; width];
    obj[..n].copy_from_slice(c);
    for i in 0..m {
        let cb = if basis[i] < n { c[basis[i]] } else { 0.0 };
        if cb != 0.0 {
            for j in 0..width {
                obj[j] -= cb * t[i][j];
            }
        }
    }
    t[m] = obj;
    run(&mut t, &mut basis, n)?;

    let mut x = vec![0.0; n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = t[i][rhs];
        }
    }
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    Some((value, x))
}

/// Simplex iterations on columns `0..allowed`; `None` if unbounded.
fn run(t: &mut [Vec<f64>], basis: &mut [usize], allowed: usize) -> Option<()> {
    let m = basis.len();
    let rhs = t[0].len() - 1;
    for _ in 0..10_000 {
        let Some(j) = (0..allowed).find(|&j| t[m][j] < -EPS) else {
            return Some(());
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][j] > EPS {
                let ratio = t[i][rhs] / t[i][j];
                leave = match leave {
                    Some((r, best)) if ratio > best + EPS || (ratio >= best - EPS && basis[i] > basis[r]) => {
                        Some((r, best))
                    }
                    _ => Some((i, ratio)),
                };
            }
        }
        let (r, _) = leave?;
        pivot(t, basis, r, j);
    }
    Some(())
}

fn pivot(t: &mut [Vec<f64>], basis: &mut [usize], r: usize, j: usize) {
    let p = t[r][j];
    for v in t[r].iter_mut() {
        *v /= p;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != r {
            let f = row[j];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= f * pv;
                }
            }
        }
    }
    basis[r] = j;
}
