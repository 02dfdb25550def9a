//! LU factorization with partial pivoting for small square solves.

use alloc::vec::Vec;

use crate::matrix::{Matrix, C64};

pub(crate) struct Lu {
    n: usize,
    // Packed unit-lower L and upper U, row-major.
    lu: Vec<C64>,
    perm: Vec<usize>,
}

impl Lu {
    /// Returns `None` when a pivot is exactly zero.
    pub(crate) fn factor(a: &Matrix) -> Option<Lu> {
        assert!(a.is_square());
        let n = a.rows();
        let mut lu = a.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let piv = (k..n)
                .max_by(|&x, &y| lu[x * n + k].norm().total_cmp(&lu[y * n + k].norm()))
                .unwrap();
            if lu[piv * n + k].norm() == 0.0 {
                return None;
            }
            if piv != k {
                for j in 0..n {
                    lu.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
            }
            let d = lu[k * n + k];
            for i in (k + 1)..n {
                let f = lu[i * n + k] / d;
                lu[i * n + k] = f;
                for j in (k + 1)..n {
                    let v = lu[k * n + j];
                    lu[i * n + j] -= f * v;
                }
            }
        }
        Some(Lu { n, lu, perm })
    }

    /// Solves `A X = B` column by column.
    pub(crate) fn solve(&self, b: &Matrix) -> Matrix {
        let n = self.n;
        assert_eq!(b.rows(), n);
        let mut out = Matrix::zeros(n, b.cols()).into_vec();
        let w = b.cols();
        for col in 0..w {
            let mut y: Vec<C64> = self.perm.iter().map(|&p| b.get(p, col)).collect();
            for i in 0..n {
                for k in 0..i {
                    let v = y[k];
                    y[i] -= self.lu[i * n + k] * v;
                }
            }
            for i in (0..n).rev() {
                for k in (i + 1)..n {
                    let v = y[k];
                    y[i] -= self.lu[i * n + k] * v;
                }
                y[i] /= self.lu[i * n + i];
            }
            for i in 0..n {
                out[i * w + col] = y[i];
            }
        }
        Matrix::from_raw(n, w, out)
    }
}
