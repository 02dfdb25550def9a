//! Group and Moore-Penrose inverses, the index-1 test, and range inclusion.
//!
//! The group inverse `A^#` is the unique `X` with `AXA = A`, `XAX = X` and
//! `AX = XA`. It exists exactly when `rank(A) = rank(A^2)`. We build it from
//! a full-rank factorization `A = F G` taken from the SVD:
//!
//! ```text
//! A^# = F (G F)^-2 G
//! ```
//!
//! where `G F` is `r x r` and invertible precisely when the index is at most one.

use crate::error::{Error, Operand, Result};
use crate::lu::Lu;
use crate::matrix::{numerical_rank, rank_from_singular_values, Matrix, Tolerance};
use crate::svd;

#[derive(Debug, Clone, PartialEq)]
pub struct GroupInverseResult {
    pub inverse: Matrix,
    pub rank: usize,
    /// Frobenius norms of `AXA - A`, `XAX - X`, `AX - XA`.
    pub residuals: [f64; 3],
}

fn require_square(a: &Matrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        })
    }
}

/// Returns `(rank(A), rank(A^2))`.
pub fn index_ranks(a: &Matrix, tol: &Tolerance) -> Result<(usize, usize)> {
    require_square(a)?;
    Ok((numerical_rank(a, tol), numerical_rank(&(a * a), tol)))
}

pub fn has_index_at_most_one(a: &Matrix, tol: &Tolerance) -> Result<bool> {
    let (r1, r2) = index_ranks(a, tol)?;
    Ok(r1 == r2)
}

pub fn group_inverse(a: &Matrix, tol: &Tolerance) -> Result<GroupInverseResult> {
    group_inverse_of(a, tol, Operand::Input)
}

pub(crate) fn group_inverse_of(a: &Matrix, tol: &Tolerance, operand: Operand) -> Result<GroupInverseResult> {
    let (rank, rank_squared) = index_ranks(a, tol)?;
    if rank != rank_squared {
        return Err(Error::NoGroupInverse {
            operand,
            rank,
            rank_squared,
        });
    }
    let n = a.rows();
    let inverse = if rank == 0 {
        Matrix::zeros(n, n)
    } else {
        let d = svd::decompose(a);
        let f = Matrix::from_fn(n, rank, |i, k| d.u.get(i, k) * d.s[k]);
        let g = Matrix::from_fn(rank, n, |k, j| d.v.get(j, k).conj());
        let gf = &g * &f;
        let gf_s = svd::singular_values(&gf);
        let cutoff = tol.rank_cutoff(rank, rank);
        let gf_rank = rank_from_singular_values(&gf_s, cutoff);
        // Condition ceiling 1/cutoff on G F.
        if gf_rank < rank {
            return Err(Error::NoGroupInverse {
                operand,
                rank,
                rank_squared: gf_rank,
            });
        }
        let lu = Lu::factor(&gf).ok_or(Error::NoGroupInverse {
            operand,
            rank,
            rank_squared: 0,
        })?;
        let once = lu.solve(&g);
        let twice = lu.solve(&once);
        &f * &twice
    };
    let residuals = defining_residuals(a, &inverse);
    Ok(GroupInverseResult {
        inverse,
        rank,
        residuals,
    })
}

/// Frobenius norms of `AXA - A`, `XAX - X`, `AX - XA`. Panics on shape mismatch.
pub fn defining_residuals(a: &Matrix, x: &Matrix) -> [f64; 3] {
    let ax = a * x;
    let xa = x * a;
    [
        (&(&ax * a) - a).frobenius_norm(),
        (&(&xa * x) - x).frobenius_norm(),
        (&ax - &xa).frobenius_norm(),
    ]
}

/// Moore-Penrose inverse via SVD, discarding singular values at or below
/// `rank_cutoff · σ_max`.
pub fn moore_penrose(a: &Matrix, tol: &Tolerance) -> Matrix {
    let (m, n) = a.shape();
    let d = svd::decompose(a);
    let r = rank_from_singular_values(&d.s, tol.rank_cutoff(m, n));
    if r == 0 {
        return Matrix::zeros(n, m);
    }
    // V_r S_r^-1 U_r^*
    let vs = Matrix::from_fn(n, r, |i, k| d.v.get(i, k) / d.s[k]);
    let ut = Matrix::from_fn(r, m, |k, j| d.u.get(j, k).conj());
    &vs * &ut
}

/// Orthogonal-projector test for `R(X) ⊆ R(Y)`:
/// `‖(I − Y Y^+) X‖_F ≤ eq_atol + eq_rtol · ‖X‖_F`.
pub fn range_included(x: &Matrix, y: &Matrix, tol: &Tolerance) -> Result<bool> {
    if x.rows() != y.rows() {
        return Err(Error::DimensionMismatch {
            op: "range inclusion",
            left: x.shape(),
            right: y.shape(),
        });
    }
    Ok(tol.accepts(range_defect(x, y, tol), x.frobenius_norm()))
}

/// `‖(I − Y Y^+) X‖_F`, the part of `X` outside the column space of `Y`.
pub fn range_defect(x: &Matrix, y: &Matrix, tol: &Tolerance) -> f64 {
    let pinv = moore_penrose(y, tol);
    let proj = y * &(&pinv * x);
    (x - &proj).frobenius_norm()
}
