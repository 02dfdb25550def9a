//! One-sided (Hestenes) Jacobi SVD for complex matrices.
//!
//! Column pairs are rotated until mutually orthogonal; the column norms are
//! then the singular values. Slow for large inputs but accurate in the
//! relative sense, which is what the rank decisions downstream depend on.

use alloc::vec::Vec;

use crate::matrix::{Matrix, C64};

const MAX_SWEEPS: usize = 80;

/// Thin SVD `A = U · diag(s) · V^*` with `s` sorted descending.
/// `U` is `m x k`, `V` is `n x k`, `k = min(m, n)`.
pub(crate) struct Svd {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

pub(crate) fn singular_values(a: &Matrix) -> Vec<f64> {
    decompose(a).s
}

pub(crate) fn decompose(a: &Matrix) -> Svd {
    if a.rows() >= a.cols() {
        tall(a)
    } else {
        // A^* = U' S V'^*  =>  A = V' S U'^*
        let t = tall(&a.conjugate_transpose());
        Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        }
    }
}

fn tall(a: &Matrix) -> Svd {
    let (m, n) = a.shape();
    // Column-major working copies.
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.col_vec(j)).collect();
    let mut vcols: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = alloc::vec![C64::new(0.0, 0.0); n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    let eps = f64::EPSILON;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let alpha: f64 = cols[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[i].iter().zip(&cols[j]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= eps * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                rotate(&mut cols, i, j, phase, c, s);
                rotate(&mut vcols, i, j, phase, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(f64, usize)> = cols
        .iter()
        .enumerate()
        .map(|(j, col)| (libm::sqrt(col.iter().map(|z| z.norm_sqr()).sum()), j))
        .collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));

    let s: Vec<f64> = order.iter().map(|&(sv, _)| sv).collect();
    let u = Matrix::from_fn(m, n, |r, k| {
        let (sv, j) = order[k];
        if sv > 0.0 {
            cols[j][r] / sv
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let v = Matrix::from_fn(n, n, |r, k| vcols[order[k].1][r]);
    Svd { u, s, v }
}

/// Real Jacobi rotation of `(x_i, conj(phase) · x_j)`; `x_j`'s phase is restored afterwards.
fn rotate(cols: &mut [Vec<C64>], i: usize, j: usize, phase: C64, c: f64, s: f64) {
    let (head, tail) = cols.split_at_mut(j);
    let (xi, xj) = (&mut head[i], &mut tail[0]);
    let pc = phase.conj();
    for (a, b) in xi.iter_mut().zip(xj.iter_mut()) {
        let bj = *b * pc;
        let ai = *a;
        *a = ai * c - bj * s;
        *b = (ai * s + bj * c) * phase;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(d: &Svd) -> Matrix {
        let k = d.s.len();
        let us = Matrix::from_fn(d.u.rows(), k, |i, j| d.u.get(i, j) * d.s[j]);
        &us * &d.v.conjugate_transpose()
    }

    fn sample(m: usize, n: usize, seed: u64) -> Matrix {
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        Matrix::from_fn(m, n, |_, _| C64::new(next(), next()))
    }

    #[test]
    fn reconstructs_tall_and_wide() {
        for &(m, n) in &[(1, 1), (4, 4), (6, 3), (3, 6), (9, 9)] {
            let a = sample(m, n, (m * 31 + n) as u64);
            let d = decompose(&a);
            assert!(reconstruct(&d).max_abs_diff(&a) < 1e-13, "{m}x{n}");
            assert!(d.s.windows(2).all(|w| w[0] >= w[1]));
            let utu = &d.u.conjugate_transpose() * &d.u;
            assert!(utu.max_abs_diff(&Matrix::identity(m.min(n))) < 1e-13);
            let vtv = &d.v.conjugate_transpose() * &d.v;
            assert!(vtv.max_abs_diff(&Matrix::identity(m.min(n))) < 1e-13);
        }
    }

    #[test]
    fn known_singular_values() {
        let a = Matrix::from_real_rows(&[[3.0, 0.0], [0.0, -4.0]]);
        let s = singular_values(&a);
        assert!((s[0] - 4.0).abs() < 1e-15 && (s[1] - 3.0).abs() < 1e-15);
        let ones = Matrix::from_real_rows(&[[1.0, 1.0], [1.0, 1.0]]);
        let s = singular_values(&ones);
        assert!((s[0] - 2.0).abs() < 1e-15 && s[1] < 1e-15);
        assert_eq!(singular_values(&Matrix::zeros(3, 2)), alloc::vec![0.0, 0.0]);
    }
}
