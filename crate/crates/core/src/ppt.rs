//! Pseudo principal pivot transforms built on the group inverse.
//!
//! ```text
//! pppt(M)  = P = [[A^#,  −A^# B], [C A^#,  K  ]]    K = D − C A^# B
//! cpppt(M) = Q = [[L,     B D^#], [−D^# C, D^#]]    L = A − B D^# C
//! ```
//!
//! Under `R(B) ⊆ R(A)` and `R(C^*) ⊆ R(A^*)` the transform `pppt` is an
//! involution and exchanges domain and range:
//! `M (x1; x2) = (A A^# y1; y2)` iff `P (y1; x2) = (A^# A x1; y2)`.
//! The `D`-pivoted statements are obtained by swapping the blocks of `M`.

use alloc::vec::Vec;

use crate::block::{schur_with, BlockMatrix, Hypothesis};
use crate::error::{Error, Operand, Result};
use crate::geninv::{group_inverse_of, range_included};
use crate::matrix::{vec_norm, vec_sub, Matrix, Tolerance, C64};

pub fn pppt(m: &BlockMatrix, tol: &Tolerance) -> Result<BlockMatrix> {
    let a_sharp = group_inverse_of(m.a(), tol, Operand::A)?.inverse;
    let k = schur_with(m.d(), m.c(), &a_sharp, m.b());
    let top_right = -&(&a_sharp * m.b());
    let bottom_left = m.c() * &a_sharp;
    BlockMatrix::new(a_sharp, top_right, bottom_left, k)
}

pub fn cpppt(m: &BlockMatrix, tol: &Tolerance) -> Result<BlockMatrix> {
    let d_sharp = group_inverse_of(m.d(), tol, Operand::D)?.inverse;
    let l = schur_with(m.a(), m.b(), &d_sharp, m.c());
    let top_right = m.b() * &d_sharp;
    let bottom_left = -&(&d_sharp * m.c());
    BlockMatrix::new(l, top_right, bottom_left, d_sharp)
}

/// Checks `R(B) ⊆ R(A)` then `R(C^*) ⊆ R(A^*)`; also requires `A^#`.
fn require_a_pivot_inclusions(m: &BlockMatrix, tol: &Tolerance) -> Result<()> {
    group_inverse_of(m.a(), tol, Operand::A)?;
    if !range_included(m.b(), m.a(), tol)? {
        return Err(Error::HypothesisViolated(Hypothesis::BA));
    }
    if !range_included(&m.c().conjugate_transpose(), &m.a().conjugate_transpose(), tol)? {
        return Err(Error::HypothesisViolated(Hypothesis::CstarAstar));
    }
    Ok(())
}

/// Swapped-frame version of the above, reporting the `D`-pivot hypothesis names.
fn require_d_pivot_inclusions(m: &BlockMatrix, tol: &Tolerance) -> Result<()> {
    require_a_pivot_inclusions(&m.swapped(), tol).map_err(|e| match e {
        Error::HypothesisViolated(h) => Error::HypothesisViolated(h.mirror()),
        Error::NoGroupInverse {
            rank, rank_squared, ..
        } => Error::NoGroupInverse {
            operand: Operand::D,
            rank,
            rank_squared,
        },
        other => other,
    })
}

/// `pppt(pppt(M)) ≈ M` blockwise. The second transform pivots on `A^#` and
/// recomputes `(A^#)^#` numerically.
pub fn pppt_involution_check(m: &BlockMatrix, tol: &Tolerance) -> Result<bool> {
    require_a_pivot_inclusions(m, tol)?;
    let twice = pppt(&pppt(m, tol)?, tol)?;
    twice.approx_eq(m, tol)
}

pub fn cpppt_involution_check(m: &BlockMatrix, tol: &Tolerance) -> Result<bool> {
    require_d_pivot_inclusions(m, tol)?;
    let twice = cpppt(&cpppt(m, tol)?, tol)?;
    twice.approx_eq(m, tol)
}

/// Vectors partitioned conformally with a [`BlockMatrix`]: `x1, y1` have
/// length `p` and `x2, y2` length `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExchangeVectors {
    pub x1: Vec<C64>,
    pub x2: Vec<C64>,
    pub y1: Vec<C64>,
    pub y2: Vec<C64>,
}

impl ExchangeVectors {
    fn check_lengths(&self, m: &BlockMatrix) -> Result<()> {
        let (p, q) = (m.p(), m.q());
        for (v, n) in [(&self.x1, p), (&self.x2, q), (&self.y1, p), (&self.y2, q)] {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    op: "exchange vectors",
                    left: (n, 1),
                    right: (v.len(), 1),
                });
            }
        }
        Ok(())
    }

    /// Relabels for the block-swapped matrix `[[D, C], [B, A]]`.
    pub fn swapped(&self) -> ExchangeVectors {
        ExchangeVectors {
            x1: self.x2.clone(),
            x2: self.x1.clone(),
            y1: self.y2.clone(),
            y2: self.y1.clone(),
        }
    }
}

/// `M (x1; x2) = (A x1 + B x2, C x1 + D x2)`.
pub fn exchange_forward(m: &BlockMatrix, x1: &[C64], x2: &[C64]) -> Result<(Vec<C64>, Vec<C64>)> {
    if x1.len() != m.p() || x2.len() != m.q() {
        return Err(Error::DimensionMismatch {
            op: "exchange_forward",
            left: (m.p(), m.q()),
            right: (x1.len(), x2.len()),
        });
    }
    let top = add(&m.a().mul_vec(x1)?, &m.b().mul_vec(x2)?);
    let bottom = add(&m.c().mul_vec(x1)?, &m.d().mul_vec(x2)?);
    Ok((top, bottom))
}

fn add(a: &[C64], b: &[C64]) -> Vec<C64> {
    crate::matrix::vec_add(a, b)
}

/// Both sides of the domain-range exchange for one set of vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExchangeSides {
    /// `M (x1; x2) = (A A^# y1; y2)` holds within tolerance.
    pub m_side: bool,
    /// `P (y1; x2) = (A^# A x1; y2)` holds within tolerance.
    pub p_side: bool,
    pub m_residual: f64,
    pub p_residual: f64,
    /// `max(‖lhs‖, ‖rhs‖)` for each side, the scale the residuals were judged against.
    pub m_scale: f64,
    pub p_scale: f64,
}

impl ExchangeSides {
    /// The biconditional: either both sides hold or neither does.
    pub fn equivalent(&self) -> bool {
        self.m_side == self.p_side
    }
}

fn stacked_residual(l1: &[C64], l2: &[C64], r1: &[C64], r2: &[C64]) -> (f64, f64) {
    let d1 = vec_norm(&vec_sub(l1, r1));
    let d2 = vec_norm(&vec_sub(l2, r2));
    let nl = libm::hypot(vec_norm(l1), vec_norm(l2));
    let nr = libm::hypot(vec_norm(r1), vec_norm(r2));
    (libm::hypot(d1, d2), nl.max(nr))
}

/// Evaluates both sides of the exchange relation for `pppt(M)`.
pub fn exchange_sides(m: &BlockMatrix, v: &ExchangeVectors, tol: &Tolerance) -> Result<ExchangeSides> {
    v.check_lengths(m)?;
    require_a_pivot_inclusions(m, tol)?;
    let a_sharp = group_inverse_of(m.a(), tol, Operand::A)?.inverse;
    let p = pppt(m, tol)?;

    let (mx1, mx2) = exchange_forward(m, &v.x1, &v.x2)?;
    let aa_y1 = m.a().mul_vec(&a_sharp.mul_vec(&v.y1)?)?;
    let (m_residual, m_scale) = stacked_residual(&mx1, &mx2, &aa_y1, &v.y2);

    let (py1, py2) = exchange_forward(&p, &v.y1, &v.x2)?;
    let aa_x1 = a_sharp.mul_vec(&m.a().mul_vec(&v.x1)?)?;
    let (p_residual, p_scale) = stacked_residual(&py1, &py2, &aa_x1, &v.y2);

    Ok(ExchangeSides {
        m_side: tol.accepts(m_residual, m_scale),
        p_side: tol.accepts(p_residual, p_scale),
        m_residual,
        p_residual,
        m_scale,
        p_scale,
    })
}

/// `true` when the two sides of the exchange relation agree.
pub fn exchange_equivalence_check(m: &BlockMatrix, v: &ExchangeVectors, tol: &Tolerance) -> Result<bool> {
    Ok(exchange_sides(m, v, tol)?.equivalent())
}

/// The `D`-pivoted exchange relation for `Q = cpppt(M)`:
/// `M (x1; x2) = (y1; D D^# y2)` iff `Q (x1; y2) = (y1; D^# D x2)`.
///
/// Evaluated as the `A`-pivoted relation on the block-swapped matrix.
pub fn exchange_sides_complementary(m: &BlockMatrix, v: &ExchangeVectors, tol: &Tolerance) -> Result<ExchangeSides> {
    v.check_lengths(m)?;
    require_d_pivot_inclusions(m, tol)?;
    exchange_sides(&m.swapped(), &v.swapped(), tol)
}

pub fn exchange_equivalence_check_complementary(
    m: &BlockMatrix,
    v: &ExchangeVectors,
    tol: &Tolerance,
) -> Result<bool> {
    Ok(exchange_sides_complementary(m, v, tol)?.equivalent())
}

/// Stacks `(top; bottom)` into one column matrix.
pub fn stack(top: &[C64], bottom: &[C64]) -> Matrix {
    let mut v = top.to_vec();
    v.extend_from_slice(bottom);
    Matrix::column(&v)
}
