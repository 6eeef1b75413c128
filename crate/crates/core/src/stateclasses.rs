//! State sets generated by unital CP maps, and witnesses certifying that a
//! state lies outside such a set.
//!
//! * `π(p, ω)(a) = Σ p_α tr(ω_α a)`: CP unital projections built from a
//!   resolution of the identity `p` and dual states `ω` with
//!   `tr(ω_α p_β) = δ_{αβ}`. `π(p)` is the special case `ω_α = p_α / tr p_α`.
//! * Werner and isotropic classes are `π(p)` for the flip-symmetric and
//!   maximally-entangled projector pairs on `C^n ⊗ C^n`.
//! * The purity-ball map `φ(a) = a/(d−1) + (1 − 1/(d−1)) I tr(a)/d` has
//!   image `{ρ : tr ρ² <= 1/(d−1)}`; its dual cone is
//!   `{a = a† : tr a >= 0, tr a² <= (tr a)²}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::maprep::{self, KrausForm, MapRep, TransferMatrix};
use crate::matrix::{c, ComplexMatrix};
use crate::matspace::{self, DensityMatrix, Tolerance};

/// Default number of ball samples used to cross-check a witness.
pub const DEFAULT_BALL_SAMPLES: usize = 1000;

/// Resolution of the identity `p` plus dual states `ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionSpec {
    d: usize,
    p: Vec<ComplexMatrix>,
    omega: Vec<DensityMatrix>,
}

/// Checks Hermitian, idempotent, mutually orthogonal, summing to `I_d`.
pub fn validate_projectors(p: &[ComplexMatrix], tol: Tolerance) -> Result<usize> {
    let first = p
        .first()
        .ok_or_else(|| Error::Spec("need at least one projector".into()))?;
    let d = first.square_dim()?;
    let mut sum = ComplexMatrix::zeros(d, d);
    for (a, pa) in p.iter().enumerate() {
        if pa.rows() != d || pa.cols() != d {
            return Err(Error::Spec(format!("projector {a} is not {d}x{d}")));
        }
        if !pa.is_hermitian(tol.atol) {
            return Err(Error::Spec(format!("projector {a} is not Hermitian")));
        }
        if !(pa * pa).approx_eq(pa, tol.atol) {
            return Err(Error::Spec(format!("projector {a} is not idempotent")));
        }
        for (b, pb) in p.iter().enumerate().skip(a + 1) {
            if (pa * pb).max_abs() > tol.atol {
                return Err(Error::Spec(format!(
                    "projectors {a} and {b} are not orthogonal"
                )));
            }
        }
        sum += pa;
    }
    if !sum.approx_eq(&ComplexMatrix::identity(d), tol.atol) {
        return Err(Error::Spec("projectors do not sum to the identity".into()));
    }
    Ok(d)
}

impl ProjectionSpec {
    pub fn new(p: Vec<ComplexMatrix>, omega: Vec<DensityMatrix>, tol: Tolerance) -> Result<Self> {
        let d = validate_projectors(&p, tol)?;
        if omega.len() != p.len() {
            return Err(Error::Spec(format!(
                "{} projectors but {} dual states",
                p.len(),
                omega.len()
            )));
        }
        for (a, w) in omega.iter().enumerate() {
            if w.dim() != d {
                return Err(Error::Spec(format!("dual state {a} is not {d}x{d}")));
            }
            for (b, pb) in p.iter().enumerate() {
                let want = if a == b { 1.0 } else { 0.0 };
                let got = (w.matrix() * pb).trace();
                if (got - c(want, 0.0)).norm() > tol.atol {
                    return Err(Error::Spec(format!(
                        "duality violated: tr(omega_{a} p_{b}) = {got}, expected {want}"
                    )));
                }
            }
        }
        Ok(Self { d, p, omega })
    }

    /// `ω_α = p_α / tr p_α`.
    pub fn from_projectors(p: Vec<ComplexMatrix>, tol: Tolerance) -> Result<Self> {
        validate_projectors(&p, tol)?;
        let omega = p
            .iter()
            .map(|pa| {
                let tr = pa.trace().re;
                DensityMatrix::new(pa.scale_real(1.0 / tr), tol)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, omega, tol)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.p
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.omega
    }

    /// `π*(ρ) = Σ ω_α tr(p_α ρ)`, evaluated from the definition.
    pub fn apply_dual(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.d, self.d);
        for (pa, w) in self.p.iter().zip(&self.omega) {
            out += &w.matrix().scale((pa * rho).trace());
        }
        out
    }
}

/// `π(p, ω)(a) = Σ_α p_α tr(ω_α a)`.
pub fn projection_map(spec: &ProjectionSpec) -> MapRep {
    let t = maprep::transfer_from_fn(spec.d, |a| {
        let mut out = ComplexMatrix::zeros(spec.d, spec.d);
        for (pa, w) in spec.p.iter().zip(&spec.omega) {
            out += &pa.scale((w.matrix() * a).trace());
        }
        out
    })
    .expect("operands have matching dimension");
    t.into()
}

/// `Σ c_α ω_α` for convex weights `c`; a fixed point of `π*`.
pub fn invariant_states(
    spec: &ProjectionSpec,
    weights: &[f64],
    tol: Tolerance,
) -> Result<DensityMatrix> {
    if weights.len() != spec.omega.len() {
        return Err(Error::Spec(format!(
            "expected {} weights, got {}",
            spec.omega.len(),
            weights.len()
        )));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < -tol.atol) {
        return Err(Error::Spec("weights must be nonnegative".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > tol.atol {
        return Err(Error::Spec(format!("weights sum to {total}, expected 1")));
    }
    let mut rho = ComplexMatrix::zeros(spec.d, spec.d);
    for (w, om) in weights.iter().zip(&spec.omega) {
        rho += &om.matrix().scale_real(*w);
    }
    DensityMatrix::new(rho, tol)
}

/// `π(a) = Σ p_α a p_α`, the measurement (pinching) projection.
pub fn pinching(p: &[ComplexMatrix], tol: Tolerance) -> Result<MapRep> {
    let d = validate_projectors(p, tol)?;
    Ok(KrausForm::new(d, p.to_vec())?.into())
}

/// `F = Σ_ij e_ij ⊗ e_ji` on `C^n ⊗ C^n`.
pub fn flip_operator(n: usize) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            f += &matspace::matrix_unit(n, i, j).kron(&matspace::matrix_unit(n, j, i));
        }
    }
    f
}

fn check_local_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Dimension(format!(
            "local dimension must be >= 2, got {n}"
        )));
    }
    Ok(())
}

/// `(p'_1, p'_0)`: `p'_1 = (1/n) Σ e_ij ⊗ e_ij` and `p'_0 = I − p'_1`.
pub fn isotropic_projectors(n: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_local_dim(n)?;
    let mut p1 = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let e = matspace::matrix_unit(n, i, j);
            p1 += &e.kron(&e);
        }
    }
    let p1 = p1.scale_real(1.0 / n as f64);
    let p0 = &ComplexMatrix::identity(n * n) - &p1;
    Ok((p1, p0))
}

/// `(p''_0, p''_1) = ((I + F)/2, (I − F)/2)`.
pub fn werner_projectors(n: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_local_dim(n)?;
    let id = ComplexMatrix::identity(n * n);
    let f = flip_operator(n);
    Ok(((&id + &f).scale_real(0.5), (&id - &f).scale_real(0.5)))
}

/// `π(p'')`; its dual image is the Werner class.
pub fn werner_map(n: usize) -> Result<MapRep> {
    let (p0, p1) = werner_projectors(n)?;
    Ok(projection_map(&ProjectionSpec::from_projectors(
        vec![p0, p1],
        Tolerance::default(),
    )?))
}

/// `π(p')`; its dual image is the isotropic class.
pub fn isotropic_map(n: usize) -> Result<MapRep> {
    let (p1, p0) = isotropic_projectors(n)?;
    Ok(projection_map(&ProjectionSpec::from_projectors(
        vec![p0, p1],
        Tolerance::default(),
    )?))
}

/// `1/(d−1)`, the purity radius of the ball image.
pub fn ball_purity_bound(d: usize) -> f64 {
    if d <= 1 {
        f64::INFINITY
    } else {
        1.0 / (d as f64 - 1.0)
    }
}

/// At `d = 2` the ball is the whole state space and the map is the identity.
pub fn ball_is_all_states(d: usize) -> bool {
    d == 2
}

/// `φ(a) = a/(d−1) + (1 − 1/(d−1)) I_d tr(a)/d`.
pub fn ball_map(d: usize) -> Result<MapRep> {
    if d < 2 {
        return Err(Error::Dimension(format!("ball map needs d >= 2, got {d}")));
    }
    let s = 1.0 / (d as f64 - 1.0);
    let id = ComplexMatrix::identity(d);
    let t: TransferMatrix = maprep::transfer_from_fn(d, |a| {
        let mixed = a.trace() / d as f64;
        &a.scale_real(s) + &id.scale(mixed * (1.0 - s))
    })?;
    Ok(t.into())
}

/// `tr ρ² <= 1/(d−1)`.
pub fn ball_membership(rho: &DensityMatrix, tol: Tolerance) -> bool {
    matspace::purity(rho) <= ball_purity_bound(rho.dim()) + tol.atol
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConeChecks {
    pub trace_nonneg: bool,
    pub trace_sq: bool,
}

impl ConeChecks {
    pub fn passes(&self) -> bool {
        self.trace_nonneg && self.trace_sq
    }
}

/// `tr a >= 0` and `tr a² <= (tr a)²` for Hermitian `a`.
pub fn cone_checks(a: &ComplexMatrix, tol: Tolerance) -> Result<ConeChecks> {
    a.square_dim()?;
    if !a.is_hermitian(tol.atol) {
        return Err(Error::Spec(
            "cone membership needs a Hermitian matrix".into(),
        ));
    }
    let tr = a.trace().re;
    let tr_sq = matspace::matrix_purity(a);
    Ok(ConeChecks {
        trace_nonneg: tr >= -tol.atol,
        trace_sq: tr_sq <= tr * tr + tol.psd(tr * tr),
    })
}

pub fn cone_membership(a: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    Ok(cone_checks(a, tol)?.passes())
}

/// Random state on the ball boundary: a Hilbert-Schmidt random state `σ`
/// moved along the segment through `I/d` to purity exactly `1/(d−1)`.
///
/// `σ_t = tσ + (1 − t)I/d` has purity `1/d + t²(tr σ² − 1/d)`.
pub fn sample_ball_state<R: rand::Rng + ?Sized>(rng: &mut R, d: usize) -> Result<DensityMatrix> {
    let sigma = matspace::random_density_with(rng, d, d)?;
    let p = matspace::purity(&sigma);
    let inv_d = 1.0 / d as f64;
    let excess = p - inv_d;
    if excess <= 1e-15 {
        return Ok(sigma);
    }
    let t = ((ball_purity_bound(d) - inv_d) / excess).sqrt();
    let mixed = ComplexMatrix::identity(d).scale_real(inv_d * (1.0 - t));
    let m = &sigma.matrix().scale_real(t) + &mixed;
    DensityMatrix::new(m.hermitian_part(), Tolerance::default())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub a: ComplexMatrix,
    /// `tr(a ρ)` for the separated state.
    pub value: f64,
    pub cone: ConeChecks,
    /// Minimum of `tr(a σ)` over the sampled ball states.
    pub sampled_min: f64,
    pub seed: u64,
}

/// Witness `a = c I − ρ`, `c = √(tr ρ² / (d−1))`, for a state outside the
/// purity ball.
///
/// Cauchy-Schwarz gives `tr(aσ) >= c − √(tr ρ² tr σ²) >= 0` on the ball,
/// while `tr(aρ) = c − tr ρ² < 0` off it. Every emitted witness is also
/// checked against the cone inequalities and `n_samples` seeded boundary
/// states.
pub fn ball_witness(
    rho: &DensityMatrix,
    n_samples: usize,
    seed: u64,
    tol: Tolerance,
) -> Result<Witness> {
    let d = rho.dim();
    let purity = matspace::purity(rho);
    let bound = ball_purity_bound(d);
    if ball_membership(rho, tol) {
        return Err(Error::InBall { purity, bound });
    }
    let cc = (purity / (d as f64 - 1.0)).sqrt();
    let a = (&ComplexMatrix::identity(d).scale_real(cc) - rho.matrix()).hermitian_part();
    let value = (&a * rho.matrix()).trace().re;
    let cone = cone_checks(&a, tol)?;
    if !cone.passes() {
        return Err(Error::Numerical(format!("witness left the cone: {cone:?}")));
    }
    let mut rng = matspace::seeded_rng(seed);
    let mut sampled_min = f64::INFINITY;
    for _ in 0..n_samples {
        let sigma = sample_ball_state(&mut rng, d)?;
        sampled_min = sampled_min.min((&a * sigma.matrix()).trace().re);
    }
    if sampled_min < -tol.atol {
        return Err(Error::Numerical(format!(
            "witness is negative on a ball state ({sampled_min:.3e})"
        )));
    }
    Ok(Witness {
        a,
        value,
        cone,
        sampled_min,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionMembership {
    pub member: bool,
    /// `max |ρ − π*(ρ)|` entrywise.
    pub residual: f64,
    /// Element of `(I − π)(M_d)` with `tr(ρ a) ≠ 0`, scaled to unit
    /// operator norm; present only for non-members.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ComplexMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

/// Membership in `π*(S)` as the fixed-point test `π*(ρ) = ρ`.
///
/// For a non-member, `Δ = ρ − π*(ρ)` and `a = (I − π)(Δ†)` give
/// `tr(ρ a) = tr(Δ Δ†) > 0`, while every member annihilates `a`.
pub fn projection_membership(
    rho: &DensityMatrix,
    pi: &MapRep,
    tol: Tolerance,
) -> Result<ProjectionMembership> {
    let d = rho.dim();
    if pi.dim() != d {
        return Err(Error::Dimension(format!(
            "map acts on d = {}, state has d = {d}",
            pi.dim()
        )));
    }
    let b = pi.to_transfer().matrix().clone();
    let idem = (&b * &b).max_abs_diff(&b);
    if idem > tol.atol {
        return Err(Error::NotAProjection { residual: idem });
    }
    let fixed = maprep::dual(pi).apply(rho.matrix())?;
    let delta = rho.matrix() - &fixed;
    let residual = delta.max_abs();
    if residual <= tol.atol {
        return Ok(ProjectionMembership {
            member: true,
            residual,
            witness: None,
            value: None,
        });
    }
    let x = delta.adjoint();
    let a = (&x - &pi.apply(&x)?).hermitian_part();
    let norm = linalg::operator_norm(&a)?;
    let a = a.scale_real(1.0 / norm);
    let value = (rho.matrix() * &a).trace().re;
    Ok(ProjectionMembership {
        member: false,
        residual,
        witness: Some(a),
        value: Some(value),
    })
}

/// Residual of the least-squares fit of `x` by `span{basis}` in
/// Hilbert-Schmidt norm.
pub fn span_residual(x: &ComplexMatrix, basis: &[ComplexMatrix]) -> Result<f64> {
    let k = basis.len();
    let gram = ComplexMatrix::from_fn(k, k, |i, j| {
        matspace::hs_inner(&basis[i], &basis[j]).unwrap()
    });
    let rhs: Vec<_> = basis
        .iter()
        .map(|b| matspace::hs_inner(b, x))
        .collect::<Result<_>>()?;
    let coef = linalg::inverse(&gram)?.mul_vec(&rhs)?;
    let mut fit = ComplexMatrix::zeros(x.rows(), x.cols());
    for (cf, b) in coef.iter().zip(basis) {
        fit += &b.scale(*cf);
    }
    Ok((x - &fit).frobenius_norm())
}
