//! Seeded construction of index-1 matrices and block instances that satisfy,
//! or deliberately break, the block-formula hypotheses.
//!
//! Instances are built "K first": draw index-1 `A (p x p)` and `K (q x q)`,
//! sandwich Gaussian couplers as `B = A B0 K` and `C = K C0 A`, then set
//! `D = K + C A^# B`. The sandwich forces all four `A`-pivot inclusions and
//! makes `K` the pseudo Schur complement by construction.
//!
//! All randomness flows from one [`SplitMix64`] stream seeded by
//! [`InstanceSpec::seed`], so a spec always yields the same bits.

use crate::block::{check_hypotheses, BlockMatrix, Hypothesis, HypothesisReport};
use crate::error::{Error, Result};
use crate::geninv::{group_inverse, has_index_at_most_one};
use crate::matrix::{numerical_rank, Matrix, Tolerance};
use crate::rng::SplitMix64;
use crate::svd;

/// Resampling budget for every generator.
pub const MAX_ATTEMPTS: usize = 100;

/// Perturbations whose projected norm falls below this fraction of the raw
/// draw are treated as numerically zero.
const PROJECTION_FLOOR: f64 = 1e-8;

/// Recipe for a reproducible block instance.
///
/// For `A`-pivoted instances `rank_a` is the rank of `A` and `rank_k` that
/// of `K`. The `D`-pivoted generators reuse the same fields for `D` and `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceSpec {
    pub p: usize,
    pub q: usize,
    pub rank_a: usize,
    pub rank_k: usize,
    pub seed: u64,
    pub violate: Option<Hypothesis>,
}

impl InstanceSpec {
    pub fn new(p: usize, q: usize, rank_a: usize, rank_k: usize, seed: u64) -> Self {
        InstanceSpec {
            p,
            q,
            rank_a,
            rank_k,
            seed,
            violate: None,
        }
    }

    pub fn violating(self, h: Hypothesis) -> Self {
        InstanceSpec {
            violate: Some(h),
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 || self.q == 0 {
            return Err(Error::InvalidSpec("block dimensions must be positive"));
        }
        if !(1..=self.p).contains(&self.rank_a) {
            return Err(Error::InvalidSpec("rank_a must lie in 1..=p"));
        }
        if !(1..=self.q).contains(&self.rank_k) {
            return Err(Error::InvalidSpec("rank_k must lie in 1..=q"));
        }
        Ok(())
    }

    /// The spec that, after a block swap, describes the `D`-pivoted instance.
    fn mirrored(&self) -> InstanceSpec {
        InstanceSpec {
            p: self.q,
            q: self.p,
            violate: self.violate.map(Hypothesis::mirror),
            ..*self
        }
    }
}

fn gen_tol() -> Tolerance {
    Tolerance::default()
}

/// Rescales `m` to unit RMS entry size.
fn normalized(m: &Matrix) -> Matrix {
    let norm = m.frobenius_norm();
    if norm == 0.0 {
        return m.clone();
    }
    let rms = libm::sqrt((m.rows() * m.cols()) as f64);
    m.scale_real(rms / norm)
}

/// Draws `A = F G` with Gaussian `F (n x r)`, `G (r x n)`, rejecting draws
/// where `G F` is too ill-conditioned or the numerical rank or index test
/// disagrees with the construction.
pub fn random_index1(n: usize, r: usize, seed: u64) -> Result<Matrix> {
    random_index1_from(&mut SplitMix64::new(seed), n, r)
}

pub(crate) fn random_index1_from(rng: &mut SplitMix64, n: usize, r: usize) -> Result<Matrix> {
    if n == 0 || !(1..=n).contains(&r) {
        return Err(Error::InvalidSpec("rank must lie in 1..=n"));
    }
    let tol = gen_tol();
    let ceiling = 1.0 / tol.rank_cutoff(r, r);
    for _ in 0..MAX_ATTEMPTS {
        let f = rng.gaussian_matrix(n, r);
        let g = rng.gaussian_matrix(r, n);
        let s = svd::singular_values(&(&g * &f));
        let smin = s[s.len() - 1];
        if smin == 0.0 || s[0] / smin >= ceiling {
            continue;
        }
        let a = normalized(&(&f * &g));
        if numerical_rank(&a, &tol) == r && has_index_at_most_one(&a, &tol)? {
            return Ok(a);
        }
    }
    Err(Error::GenerationFailed {
        attempts: MAX_ATTEMPTS,
    })
}

/// Block instance satisfying both index conditions and all four `A`-pivot
/// inclusions, with `pseudo_schur(M) = K` by construction.
pub fn theorem1_instance(spec: &InstanceSpec) -> Result<BlockMatrix> {
    spec.validate()?;
    if spec.violate.is_some() {
        return Err(Error::InvalidSpec("theorem1_instance takes no violation"));
    }
    let mut rng = SplitMix64::new(spec.seed);
    for _ in 0..MAX_ATTEMPTS {
        let parts = draw_theorem1_parts(&mut rng, spec)?;
        let m = parts.assemble_with(&parts.b, &parts.c)?;
        if check_hypotheses(&m, &gen_tol()).theorem1_holds() {
            return Ok(m);
        }
    }
    Err(Error::GenerationFailed {
        attempts: MAX_ATTEMPTS,
    })
}

struct Theorem1Parts {
    a: Matrix,
    a_sharp: Matrix,
    k: Matrix,
    k_sharp: Matrix,
    b: Matrix,
    c: Matrix,
}

impl Theorem1Parts {
    /// `[[A, B], [C, K + C A^# B]]`.
    fn assemble_with(&self, b: &Matrix, c: &Matrix) -> Result<BlockMatrix> {
        let d = &self.k + &(&(c * &self.a_sharp) * b);
        BlockMatrix::new(self.a.clone(), b.clone(), c.clone(), d)
    }
}

fn draw_theorem1_parts(rng: &mut SplitMix64, spec: &InstanceSpec) -> Result<Theorem1Parts> {
    let tol = gen_tol();
    let a = random_index1_from(rng, spec.p, spec.rank_a)?;
    let k = random_index1_from(rng, spec.q, spec.rank_k)?;
    let b0 = rng.gaussian_matrix(spec.p, spec.q);
    let c0 = rng.gaussian_matrix(spec.q, spec.p);
    let a_sharp = group_inverse(&a, &tol)?.inverse;
    let k_sharp = group_inverse(&k, &tol)?.inverse;
    let b = normalized(&(&(&a * &b0) * &k));
    let c = normalized(&(&(&k * &c0) * &a));
    Ok(Theorem1Parts {
        a,
        a_sharp,
        k,
        k_sharp,
        b,
        c,
    })
}

fn infeasible(spec: &InstanceSpec, h: Hypothesis) -> bool {
    match h {
        Hypothesis::CstarAstar | Hypothesis::BA => spec.rank_a == spec.p,
        Hypothesis::CK | Hypothesis::BstarKstar => spec.rank_k == spec.q,
        _ => false,
    }
}

/// A [`theorem1_instance`] with one block perturbed so that exactly the named
/// inclusion breaks (others may incidentally fail). `A` and `K` are kept:
///
/// | target            | perturbation                                |
/// |-------------------|---------------------------------------------|
/// | `incl_BA`         | `B += (I − A A^#) E K`                      |
/// | `incl_CstarAstar` | `C += K E (I − A^# A)`                      |
/// | `incl_CK`         | `C += (I − K K^#) E A`, `D` recomputed      |
/// | `incl_BstarKstar` | `B += A E (I − K^# K)`, `D` recomputed      |
///
/// `D` is always rebuilt as `K + C A^# B`; for the first two rows this leaves
/// it unchanged in exact arithmetic.
pub fn theorem1_violating_instance(spec: &InstanceSpec) -> Result<BlockMatrix> {
    spec.validate()?;
    let h = spec
        .violate
        .ok_or(Error::InvalidSpec("no hypothesis named for violation"))?;
    if !h.is_theorem1() {
        return Err(Error::InvalidSpec("violation target is not an A-pivot inclusion"));
    }
    if infeasible(spec, h) {
        return Err(Error::InfeasibleViolation(h));
    }
    let tol = gen_tol();
    let mut rng = SplitMix64::new(spec.seed);
    for _ in 0..MAX_ATTEMPTS {
        let parts = draw_theorem1_parts(&mut rng, spec)?;
        let (p, q) = (spec.p, spec.q);
        let ip = Matrix::identity(p);
        let iq = Matrix::identity(q);
        let (b, c) = match h {
            Hypothesis::BA => {
                let e = rng.gaussian_matrix(p, q);
                let proj = &ip - &(&parts.a * &parts.a_sharp);
                let delta = perturbation(&e, &(&(&proj * &e) * &parts.k))?;
                (&parts.b + &delta.scale_real(parts.b.frobenius_norm()), parts.c.clone())
            }
            Hypothesis::CstarAstar => {
                let e = rng.gaussian_matrix(q, p);
                let proj = &ip - &(&parts.a_sharp * &parts.a);
                let delta = perturbation(&e, &(&(&parts.k * &e) * &proj))?;
                (parts.b.clone(), &parts.c + &delta.scale_real(parts.c.frobenius_norm()))
            }
            Hypothesis::CK => {
                let e = rng.gaussian_matrix(q, p);
                let proj = &iq - &(&parts.k * &parts.k_sharp);
                let delta = perturbation(&e, &(&(&proj * &e) * &parts.a))?;
                (parts.b.clone(), &parts.c + &delta.scale_real(parts.c.frobenius_norm()))
            }
            Hypothesis::BstarKstar => {
                let e = rng.gaussian_matrix(p, q);
                let proj = &iq - &(&parts.k_sharp * &parts.k);
                let delta = perturbation(&e, &(&(&parts.a * &e) * &proj))?;
                (&parts.b + &delta.scale_real(parts.b.frobenius_norm()), parts.c.clone())
            }
            _ => unreachable!("checked above"),
        };
        let m = parts.assemble_with(&b, &c)?;
        let report = check_hypotheses(&m, &tol);
        if report.a_index1 && report.k_index1 && !report.inclusion(h) {
            return Ok(m);
        }
    }
    Err(Error::GenerationFailed {
        attempts: MAX_ATTEMPTS,
    })
}

/// Normalizes a projected draw to unit Frobenius norm, or reports it as
/// numerically zero.
fn perturbation(raw: &Matrix, projected: &Matrix) -> Result<Matrix> {
    let n = projected.frobenius_norm();
    if n <= PROJECTION_FLOOR * raw.frobenius_norm() {
        return Err(Error::GenerationFailed { attempts: 1 });
    }
    Ok(projected.scale_real(1.0 / n))
}

/// Block instance satisfying the `D`-pivoted hypotheses: the block swap of a
/// [`theorem1_instance`] with `p` and `q` exchanged. `rank_a` is the rank of
/// `D` and `rank_k` that of `L`.
pub fn theorem2_instance(spec: &InstanceSpec) -> Result<BlockMatrix> {
    if spec.violate.is_some() {
        return Err(Error::InvalidSpec("theorem2_instance takes no violation"));
    }
    Ok(theorem1_instance(&spec.mirrored())?.swapped())
}

/// Mirror of [`theorem1_violating_instance`]; `spec.violate` must name a
/// `D`-pivot inclusion.
pub fn theorem2_violating_instance(spec: &InstanceSpec) -> Result<BlockMatrix> {
    match spec.violate {
        Some(h) if !h.is_theorem1() => {}
        Some(_) => return Err(Error::InvalidSpec("violation target is not a D-pivot inclusion")),
        None => return Err(Error::InvalidSpec("no hypothesis named for violation")),
    }
    theorem1_violating_instance(&spec.mirrored())
        .map(|m| m.swapped())
        .map_err(|e| match e {
            Error::InfeasibleViolation(h) => Error::InfeasibleViolation(h.mirror()),
            other => other,
        })
}

/// Block instance on which both the `A`-pivoted and the `D`-pivoted
/// hypotheses hold: index-1 `A (rank_a)` and `D (rank_k)` with
/// `B = A B0 D`, `C = D C0 A`. Generically `R(K) = R(D)` and `R(L) = R(A)`.
pub fn both_theorems_instance(spec: &InstanceSpec) -> Result<BlockMatrix> {
    spec.validate()?;
    if spec.violate.is_some() {
        return Err(Error::InvalidSpec("both_theorems_instance takes no violation"));
    }
    let tol = gen_tol();
    let mut rng = SplitMix64::new(spec.seed);
    for _ in 0..MAX_ATTEMPTS {
        let a = random_index1_from(&mut rng, spec.p, spec.rank_a)?;
        let d = random_index1_from(&mut rng, spec.q, spec.rank_k)?;
        let b0 = rng.gaussian_matrix(spec.p, spec.q);
        let c0 = rng.gaussian_matrix(spec.q, spec.p);
        let b = normalized(&(&(&a * &b0) * &d));
        let c = normalized(&(&(&d * &c0) * &a));
        let m = BlockMatrix::new(a, b, c, d)?;
        let report: HypothesisReport = check_hypotheses(&m, &tol);
        if report.theorem1_holds() && report.theorem2_holds() {
            return Ok(m);
        }
    }
    Err(Error::GenerationFailed {
        attempts: MAX_ATTEMPTS,
    })
}
