//! Pseudo Schur complements and group inverses of 2x2 block matrices.
//!
//! For `M = [[A, B], [C, D]]` with `A^#` existing, the pseudo Schur
//! complement is `K = D − C A^# B`. When `K^#` also exists and
//!
//! * `R(C^*) ⊆ R(A^*)`, `R(B) ⊆ R(A)`,
//! * `R(C) ⊆ R(K)`, `R(B^*) ⊆ R(K^*)`,
//!
//! the group inverse of `M` is
//!
//! ```text
//! M^# = [[A^# + A^# B K^# C A^#,  −A^# B K^#],
//!        [−K^# C A^#,             K^#       ]]
//! ```
//!
//! and conversely, if any of the four inclusions fails this matrix is not
//! `M^#`. The mirrored statement pivots on `D` with `L = A − B D^# C`.

use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Operand, Result};
use crate::geninv::{defining_residuals, group_inverse_of, has_index_at_most_one, range_included};
use crate::matrix::{mat_approx_eq, Matrix, Tolerance};

/// One of the eight range inclusions appearing in the block formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    /// `R(C^*) ⊆ R(A^*)`
    CstarAstar,
    /// `R(B) ⊆ R(A)`
    BA,
    /// `R(C) ⊆ R(K)`
    CK,
    /// `R(B^*) ⊆ R(K^*)`
    BstarKstar,
    /// `R(B^*) ⊆ R(D^*)`
    BstarDstar,
    /// `R(C) ⊆ R(D)`
    CD,
    /// `R(B) ⊆ R(L)`
    BL,
    /// `R(C^*) ⊆ R(L^*)`
    CstarLstar,
}

impl Hypothesis {
    pub const ALL: [Hypothesis; 8] = [
        Hypothesis::CstarAstar,
        Hypothesis::BA,
        Hypothesis::CK,
        Hypothesis::BstarKstar,
        Hypothesis::BstarDstar,
        Hypothesis::CD,
        Hypothesis::BL,
        Hypothesis::CstarLstar,
    ];

    /// Inclusions of the `A`-pivoted formula.
    pub const THEOREM1: [Hypothesis; 4] = [
        Hypothesis::CstarAstar,
        Hypothesis::BA,
        Hypothesis::CK,
        Hypothesis::BstarKstar,
    ];

    /// Inclusions of the `D`-pivoted formula.
    pub const THEOREM2: [Hypothesis; 4] = [
        Hypothesis::BstarDstar,
        Hypothesis::CD,
        Hypothesis::BL,
        Hypothesis::CstarLstar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Hypothesis::CstarAstar => "incl_CstarAstar",
            Hypothesis::BA => "incl_BA",
            Hypothesis::CK => "incl_CK",
            Hypothesis::BstarKstar => "incl_BstarKstar",
            Hypothesis::BstarDstar => "incl_BstarDstar",
            Hypothesis::CD => "incl_CD",
            Hypothesis::BL => "incl_BL",
            Hypothesis::CstarLstar => "incl_CstarLstar",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Hypothesis::CstarAstar => "R(C*) ⊆ R(A*)",
            Hypothesis::BA => "R(B) ⊆ R(A)",
            Hypothesis::CK => "R(C) ⊆ R(K)",
            Hypothesis::BstarKstar => "R(B*) ⊆ R(K*)",
            Hypothesis::BstarDstar => "R(B*) ⊆ R(D*)",
            Hypothesis::CD => "R(C) ⊆ R(D)",
            Hypothesis::BL => "R(B) ⊆ R(L)",
            Hypothesis::CstarLstar => "R(C*) ⊆ R(L*)",
        }
    }

    pub fn is_theorem1(self) -> bool {
        Hypothesis::THEOREM1.contains(&self)
    }

    /// The corresponding inclusion after swapping `M` to `[[D, C], [B, A]]`.
    pub fn mirror(self) -> Hypothesis {
        match self {
            Hypothesis::CstarAstar => Hypothesis::BstarDstar,
            Hypothesis::BA => Hypothesis::CD,
            Hypothesis::CK => Hypothesis::BL,
            Hypothesis::BstarKstar => Hypothesis::CstarLstar,
            Hypothesis::BstarDstar => Hypothesis::CstarAstar,
            Hypothesis::CD => Hypothesis::BA,
            Hypothesis::BL => Hypothesis::CK,
            Hypothesis::CstarLstar => Hypothesis::BstarKstar,
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Hypothesis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Hypothesis::ALL
            .into_iter()
            .find(|h| h.name() == s)
            .ok_or(Error::InvalidSpec("unknown hypothesis name"))
    }
}

/// `M = [[A, B], [C, D]]` with square diagonal blocks `A (p x p)` and `D (q x q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    a: Matrix,
    b: Matrix,
    c: Matrix,
    d: Matrix,
}

impl BlockMatrix {
    pub fn new(a: Matrix, b: Matrix, c: Matrix, d: Matrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        if !d.is_square() {
            return Err(Error::NotSquare {
                rows: d.rows(),
                cols: d.cols(),
            });
        }
        let (p, q) = (a.rows(), d.rows());
        if b.shape() != (p, q) {
            return Err(Error::DimensionMismatch {
                op: "block B",
                left: (p, q),
                right: b.shape(),
            });
        }
        if c.shape() != (q, p) {
            return Err(Error::DimensionMismatch {
                op: "block C",
                left: (q, p),
                right: c.shape(),
            });
        }
        Ok(BlockMatrix { a, b, c, d })
    }

    /// Splits a square matrix after its first `p` rows and columns.
    pub fn from_assembled(m: &Matrix, p: usize) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let n = m.rows();
        if p == 0 || p >= n {
            return Err(Error::InvalidSpec("split point must leave two non-empty diagonal blocks"));
        }
        let q = n - p;
        Ok(BlockMatrix {
            a: m.submatrix(0, 0, p, p),
            b: m.submatrix(0, p, p, q),
            c: m.submatrix(p, 0, q, p),
            d: m.submatrix(p, p, q, q),
        })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn c(&self) -> &Matrix {
        &self.c
    }

    pub fn d(&self) -> &Matrix {
        &self.d
    }

    pub fn p(&self) -> usize {
        self.a.rows()
    }

    pub fn q(&self) -> usize {
        self.d.rows()
    }

    pub fn into_parts(self) -> (Matrix, Matrix, Matrix, Matrix) {
        (self.a, self.b, self.c, self.d)
    }

    pub fn assemble(&self) -> Matrix {
        Matrix::from_blocks(&self.a, &self.b, &self.c, &self.d)
    }

    /// `[[D, C], [B, A]]`, i.e. `M` conjugated by the block swap permutation.
    pub fn swapped(&self) -> BlockMatrix {
        BlockMatrix {
            a: self.d.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
            d: self.a.clone(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        let sq = |m: &Matrix| {
            let n = m.frobenius_norm();
            n * n
        };
        libm::sqrt(sq(&self.a) + sq(&self.b) + sq(&self.c) + sq(&self.d))
    }

    /// Largest blockwise Frobenius distance to `other`. Panics on partition mismatch.
    pub fn max_block_distance(&self, other: &BlockMatrix) -> f64 {
        [
            (&self.a - &other.a).frobenius_norm(),
            (&self.b - &other.b).frobenius_norm(),
            (&self.c - &other.c).frobenius_norm(),
            (&self.d - &other.d).frobenius_norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Blockwise [`mat_approx_eq`].
    pub fn approx_eq(&self, other: &BlockMatrix, tol: &Tolerance) -> Result<bool> {
        Ok(mat_approx_eq(&self.a, &other.a, tol)?
            && mat_approx_eq(&self.b, &other.b, tol)?
            && mat_approx_eq(&self.c, &other.c, tol)?
            && mat_approx_eq(&self.d, &other.d, tol)?)
    }
}

/// Verdicts of every index and inclusion test the block formulas depend on.
///
/// `k_defined` is false when `A^#` does not exist, in which case `K` cannot
/// be formed and every `K` field is false. Likewise `l_defined` for `D^#`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HypothesisReport {
    pub a_index1: bool,
    pub k_defined: bool,
    pub k_index1: bool,
    pub d_index1: bool,
    pub l_defined: bool,
    pub l_index1: bool,
    pub incl_cstar_astar: bool,
    pub incl_b_a: bool,
    pub incl_c_k: bool,
    pub incl_bstar_kstar: bool,
    pub incl_bstar_dstar: bool,
    pub incl_c_d: bool,
    pub incl_b_l: bool,
    pub incl_cstar_lstar: bool,
}

impl HypothesisReport {
    pub fn inclusion(&self, h: Hypothesis) -> bool {
        match h {
            Hypothesis::CstarAstar => self.incl_cstar_astar,
            Hypothesis::BA => self.incl_b_a,
            Hypothesis::CK => self.incl_c_k,
            Hypothesis::BstarKstar => self.incl_bstar_kstar,
            Hypothesis::BstarDstar => self.incl_bstar_dstar,
            Hypothesis::CD => self.incl_c_d,
            Hypothesis::BL => self.incl_b_l,
            Hypothesis::CstarLstar => self.incl_cstar_lstar,
        }
    }

    fn set(&mut self, h: Hypothesis, v: bool) {
        let slot = match h {
            Hypothesis::CstarAstar => &mut self.incl_cstar_astar,
            Hypothesis::BA => &mut self.incl_b_a,
            Hypothesis::CK => &mut self.incl_c_k,
            Hypothesis::BstarKstar => &mut self.incl_bstar_kstar,
            Hypothesis::BstarDstar => &mut self.incl_bstar_dstar,
            Hypothesis::CD => &mut self.incl_c_d,
            Hypothesis::BL => &mut self.incl_b_l,
            Hypothesis::CstarLstar => &mut self.incl_cstar_lstar,
        };
        *slot = v;
    }

    pub fn failed(&self, set: &[Hypothesis]) -> Option<Hypothesis> {
        set.iter().copied().find(|&h| !self.inclusion(h))
    }

    /// Both index conditions and all four `A`-pivot inclusions hold.
    pub fn theorem1_holds(&self) -> bool {
        self.a_index1 && self.k_index1 && self.failed(&Hypothesis::THEOREM1).is_none()
    }

    /// Both index conditions and all four `D`-pivot inclusions hold.
    pub fn theorem2_holds(&self) -> bool {
        self.d_index1 && self.l_index1 && self.failed(&Hypothesis::THEOREM2).is_none()
    }
}

pub fn pseudo_schur(m: &BlockMatrix, tol: &Tolerance) -> Result<Matrix> {
    let a_sharp = group_inverse_of(&m.a, tol, Operand::A)?.inverse;
    Ok(schur_with(&m.d, &m.c, &a_sharp, &m.b))
}

pub fn complementary_schur(m: &BlockMatrix, tol: &Tolerance) -> Result<Matrix> {
    let d_sharp = group_inverse_of(&m.d, tol, Operand::D)?.inverse;
    Ok(schur_with(&m.a, &m.b, &d_sharp, &m.c))
}

/// `base − left · pivot_sharp · right`
pub(crate) fn schur_with(base: &Matrix, left: &Matrix, pivot_sharp: &Matrix, right: &Matrix) -> Matrix {
    base - &(&(left * pivot_sharp) * right)
}

fn theorem1_inclusions(m: &BlockMatrix, k: &Matrix, tol: &Tolerance, report: &mut HypothesisReport) {
    let incl = |x: &Matrix, y: &Matrix| range_included(x, y, tol).expect("conforming blocks");
    let (cs, bs) = (m.c.conjugate_transpose(), m.b.conjugate_transpose());
    report.set(Hypothesis::CstarAstar, incl(&cs, &m.a.conjugate_transpose()));
    report.set(Hypothesis::BA, incl(&m.b, &m.a));
    report.set(Hypothesis::CK, incl(&m.c, k));
    report.set(Hypothesis::BstarKstar, incl(&bs, &k.conjugate_transpose()));
}

fn theorem2_inclusions(m: &BlockMatrix, l: &Matrix, tol: &Tolerance, report: &mut HypothesisReport) {
    let incl = |x: &Matrix, y: &Matrix| range_included(x, y, tol).expect("conforming blocks");
    let (cs, bs) = (m.c.conjugate_transpose(), m.b.conjugate_transpose());
    report.set(Hypothesis::BstarDstar, incl(&bs, &m.d.conjugate_transpose()));
    report.set(Hypothesis::CD, incl(&m.c, &m.d));
    report.set(Hypothesis::BL, incl(&m.b, l));
    report.set(Hypothesis::CstarLstar, incl(&cs, &l.conjugate_transpose()));
}

/// Evaluates every index and inclusion predicate. Never fails.
pub fn check_hypotheses(m: &BlockMatrix, tol: &Tolerance) -> HypothesisReport {
    let mut report = HypothesisReport::default();
    let index1 = |x: &Matrix| has_index_at_most_one(x, tol).expect("square block");

    report.a_index1 = index1(&m.a);
    report.d_index1 = index1(&m.d);

    let incl = |x: &Matrix, y: &Matrix| range_included(x, y, tol).expect("conforming blocks");
    match pseudo_schur(m, tol) {
        Ok(k) => {
            report.k_defined = true;
            report.k_index1 = index1(&k);
            theorem1_inclusions(m, &k, tol, &mut report);
        }
        Err(_) => {
            report.incl_cstar_astar = incl(&m.c.conjugate_transpose(), &m.a.conjugate_transpose());
            report.incl_b_a = incl(&m.b, &m.a);
        }
    }
    match complementary_schur(m, tol) {
        Ok(l) => {
            report.l_defined = true;
            report.l_index1 = index1(&l);
            theorem2_inclusions(m, &l, tol, &mut report);
        }
        Err(_) => {
            report.incl_bstar_dstar = incl(&m.b.conjugate_transpose(), &m.d.conjugate_transpose());
            report.incl_c_d = incl(&m.c, &m.d);
        }
    }
    report
}

/// The `A`-pivoted block formula, applied without checking any range
/// inclusion. Only the existence of `A^#` and `K^#` is required.
///
/// On instances violating an inclusion the result is a candidate that is
/// *not* the group inverse; this is how the converse direction is exercised.
pub fn theorem1_candidate(m: &BlockMatrix, tol: &Tolerance) -> Result<Matrix> {
    let a_sharp = group_inverse_of(&m.a, tol, Operand::A)?.inverse;
    let k = schur_with(&m.d, &m.c, &a_sharp, &m.b);
    let k_sharp = group_inverse_of(&k, tol, Operand::K)?.inverse;
    Ok(theorem1_formula(m, &a_sharp, &k_sharp))
}

fn theorem1_formula(m: &BlockMatrix, a_sharp: &Matrix, k_sharp: &Matrix) -> Matrix {
    let ab_k = &(a_sharp * &m.b) * k_sharp; // A^# B K^#
    let k_ca = &(k_sharp * &m.c) * a_sharp; // K^# C A^#
    let tl = a_sharp + &(&ab_k * &(&m.c * a_sharp));
    Matrix::from_blocks(&tl, &-&ab_k, &-&k_ca, k_sharp)
}

/// The `D`-pivoted block formula without inclusion checks.
///
/// The bottom-right block is `D^# + D^# C L^# B D^#`, the mirror image of the
/// `A`-pivoted top-left block.
pub fn theorem2_candidate(m: &BlockMatrix, tol: &Tolerance) -> Result<Matrix> {
    let d_sharp = group_inverse_of(&m.d, tol, Operand::D)?.inverse;
    let l = schur_with(&m.a, &m.b, &d_sharp, &m.c);
    let l_sharp = group_inverse_of(&l, tol, Operand::L)?.inverse;
    Ok(theorem2_formula(m, &d_sharp, &l_sharp))
}

fn theorem2_formula(m: &BlockMatrix, d_sharp: &Matrix, l_sharp: &Matrix) -> Matrix {
    let lb_d = &(l_sharp * &m.b) * d_sharp; // L^# B D^#
    let dc_l = &(d_sharp * &m.c) * l_sharp; // D^# C L^#
    let br = d_sharp + &(&dc_l * &(&m.b * d_sharp));
    Matrix::from_blocks(l_sharp, &-&lb_d, &-&dc_l, &br)
}

/// `M^#` by the `A`-pivoted formula, after checking every hypothesis.
pub fn block_group_inverse(m: &BlockMatrix, tol: &Tolerance) -> Result<Matrix> {
    let a_sharp = group_inverse_of(&m.a, tol, Operand::A)?.inverse;
    let k = schur_with(&m.d, &m.c, &a_sharp, &m.b);
    let k_sharp = group_inverse_of(&k, tol, Operand::K)?.inverse;
    let mut report = HypothesisReport::default();
    theorem1_inclusions(m, &k, tol, &mut report);
    if let Some(h) = report.failed(&Hypothesis::THEOREM1) {
        return Err(Error::HypothesisViolated(h));
    }
    Ok(theorem1_formula(m, &a_sharp, &k_sharp))
}

/// `M^#` by the `D`-pivoted formula, after checking every hypothesis.
pub fn block_group_inverse_complementary(m: &BlockMatrix, tol: &Tolerance) -> Result<Matrix> {
    let d_sharp = group_inverse_of(&m.d, tol, Operand::D)?.inverse;
    let l = schur_with(&m.a, &m.b, &d_sharp, &m.c);
    let l_sharp = group_inverse_of(&l, tol, Operand::L)?.inverse;
    let mut report = HypothesisReport::default();
    theorem2_inclusions(m, &l, tol, &mut report);
    if let Some(h) = report.failed(&Hypothesis::THEOREM2) {
        return Err(Error::HypothesisViolated(h));
    }
    Ok(theorem2_formula(m, &d_sharp, &l_sharp))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verification {
    /// Frobenius norms of `MXM − M`, `XMX − X`, `MX − XM`.
    pub residuals: [f64; 3],
    pub verdict: bool,
}

impl Verification {
    pub fn max_residual(&self) -> f64 {
        self.residuals.into_iter().fold(0.0, f64::max)
    }
}

/// Checks the three defining equations of `X = M^#`, each with
/// [`mat_approx_eq`] semantics.
pub fn verify_group_inverse(m: &Matrix, x: &Matrix, tol: &Tolerance) -> Result<Verification> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.shape() != x.shape() {
        return Err(Error::DimensionMismatch {
            op: "verify group inverse",
            left: m.shape(),
            right: x.shape(),
        });
    }
    let residuals = defining_residuals(m, x);
    let mx = m * x;
    let xm = x * m;
    let verdict = mat_approx_eq(&(&mx * m), m, tol)?
        && mat_approx_eq(&(&xm * x), x, tol)?
        && mat_approx_eq(&mx, &xm, tol)?;
    Ok(Verification { residuals, verdict })
}
