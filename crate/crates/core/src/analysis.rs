//! Positivity certification, map spectra, the Perron-Frobenius bound,
//! bi-orthonormal spectral decompositions and the circulant example map.

use std::cmp::Ordering;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::maprep::{self, KrausForm, MapRep, TransferMatrix};
use crate::matrix::{c, ComplexMatrix, C64};
use crate::matspace::{self, DensityMatrix, Tolerance};

/// Default ceiling on the eigenvector condition number before a transfer
/// matrix is treated as defective.
pub const DEFAULT_COND_MAX: f64 = 1e8;

/// Eigenvalues closer than this are one degenerate cluster.
pub const CLUSTER_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CpReport {
    pub cp: bool,
    /// Smallest eigenvalue of the Hermitian part of the Choi matrix.
    pub min_choi_eig: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Choi eigenvalue test: CP iff `λ_min(Ĉ) >= −atol·max(1, ‖Ĉ‖)`.
pub fn is_completely_positive(phi: &MapRep, tol: Tolerance) -> Result<CpReport> {
    let choi = phi.to_choi();
    let eigs = linalg::hermitian_eigenvalues(choi.matrix())?;
    let min = eigs[0];
    let scale = eigs.iter().fold(0.0f64, |s, e| s.max(e.abs()));
    if !choi.matrix().is_hermitian(tol.atol) {
        return Ok(CpReport {
            cp: false,
            min_choi_eig: min,
            reason: Some("map is not self-adjoint (Choi matrix not Hermitian)".into()),
        });
    }
    let cp = min >= -tol.psd(scale);
    Ok(CpReport {
        cp,
        min_choi_eig: min,
        reason: (!cp).then(|| "Choi matrix has a negative eigenvalue".into()),
    })
}

/// `φ` is completely copositive iff `φ ∘ transpose` is completely positive.
pub fn is_completely_copositive(phi: &MapRep, tol: Tolerance) -> Result<CpReport> {
    let composed = maprep::compose(phi, &maprep::transpose_map(phi.dim()))?;
    is_completely_positive(&composed, tol)
}

/// `Σ_{αβ} B_{αβ} f_αᵀ ⊗ f_β†` over the transfer matrix's own basis.
///
/// Over matrix units this is a permuted transpose of the Choi matrix, so it
/// is PSD exactly when the map is CP.
pub fn cp_condition_matrix(t: &TransferMatrix) -> ComplexMatrix {
    let d = t.dim();
    let f = t.basis().elems();
    let mut out = ComplexMatrix::zeros(d * d, d * d);
    for (alpha, fa) in f.iter().enumerate() {
        let fat = fa.transpose();
        for (beta, fb) in f.iter().enumerate() {
            let w = t.matrix()[(alpha, beta)];
            if w != c(0.0, 0.0) {
                out += &fat.kron(&fb.adjoint()).scale(w);
            }
        }
    }
    out
}

/// Kraus operators from the spectral factorization of the Choi matrix.
///
/// With `Ĉ = Σ_k μ_k v_k v_k†`, each eigenpair above the rank threshold
/// gives `K_k = √μ_k · unvec(v_k)ᵀ` (the transpose comes from the
/// `e_kl ⊗ φ(e_kl)` ordering of the Choi matrix).
pub fn kraus_from_choi(phi: &MapRep, tol: Tolerance) -> Result<KrausForm> {
    let d = phi.dim();
    let choi = phi.to_choi();
    let (vals, vecs) = linalg::hermitian_eigen(choi.matrix())?;
    let scale = vals.iter().fold(0.0f64, |s, e| s.max(e.abs()));
    let psd_tol = tol.psd(scale);
    if vals[0] < -psd_tol || !choi.matrix().is_hermitian(tol.atol) {
        return Err(Error::NotCp { min_eig: vals[0] });
    }
    let mut ops = Vec::new();
    // Largest weights first.
    for k in (0..vals.len()).rev() {
        if vals[k] <= psd_tol {
            continue;
        }
        let s = vals[k].sqrt();
        let v = vecs.column(k);
        let op = ComplexMatrix::from_fn(d, d, |i, j| v[j * d + i] * s);
        ops.push(op);
    }
    KrausForm::new(d, ops)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PositivityVerdict {
    /// `φ(|ψ><ψ|)` is not PSD: the map is provably not positive.
    Counterexample {
        sample: usize,
        psi: Vec<C64>,
        min_output_eig: f64,
    },
    /// Nothing found; this proves nothing.
    NoCounterexampleFound {
        n_samples: usize,
        min_output_eig: f64,
    },
}

/// Samples seeded Haar-random pure states looking for a non-PSD output.
pub fn positivity_falsify(
    phi: &MapRep,
    n_samples: usize,
    seed: u64,
    tol: Tolerance,
) -> Result<PositivityVerdict> {
    if n_samples == 0 {
        return Err(Error::Spec("n_samples must be at least 1".into()));
    }
    let d = phi.dim();
    let mut rng = matspace::seeded_rng(seed);
    let mut worst = f64::INFINITY;
    for sample in 0..n_samples {
        let psi = matspace::haar_pure_vector(&mut rng, d);
        let out = phi.apply(&ComplexMatrix::outer(&psi, &psi))?;
        let eigs = linalg::hermitian_eigenvalues(&out)?;
        let scale = eigs.iter().fold(0.0f64, |s, e| s.max(e.abs()));
        let min = eigs[0];
        worst = worst.min(min);
        if min < -tol.psd(scale) || !out.is_hermitian(tol.atol) {
            return Ok(PositivityVerdict::Counterexample {
                sample,
                psi,
                min_output_eig: min,
            });
        }
    }
    Ok(PositivityVerdict::NoCounterexampleFound {
        n_samples,
        min_output_eig: worst,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<C64>,
    pub spectral_radius: f64,
    /// `‖φ(I)‖∞`, the largest singular value of `φ(I)`.
    pub pf_bound: f64,
    pub bound_satisfied: bool,
}

fn quantize(x: f64) -> i64 {
    (x * 1e10).round() as i64
}

/// Display order: decreasing modulus, then increasing phase in `[0, 2π)`.
/// Both keys are compared on a 1e-10 grid so rounding noise does not
/// reorder numerically equal eigenvalues.
pub fn spectral_order(a: &C64, b: &C64) -> Ordering {
    let phase = |z: &C64| {
        if z.norm() < 1e-12 {
            return 0;
        }
        let p = z.im.atan2(z.re).rem_euclid(2.0 * PI);
        let q = quantize(p);
        if q >= quantize(2.0 * PI) {
            0
        } else {
            q
        }
    };
    quantize(b.norm())
        .cmp(&quantize(a.norm()))
        .then(phase(a).cmp(&phase(b)))
}

pub fn sort_eigenvalues(vals: &mut [C64]) {
    vals.sort_by(spectral_order);
}

/// Eigenvalues of the transfer matrix with the Perron-Frobenius bound
/// `|λ| <= ‖φ(I)‖∞`.
pub fn spectrum(phi: &MapRep, tol: Tolerance) -> Result<SpectrumReport> {
    let t = phi.to_transfer();
    let mut eigenvalues = linalg::eigenvalues(t.matrix())?;
    sort_eigenvalues(&mut eigenvalues);
    let spectral_radius = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pf_bound = linalg::operator_norm(&phi.apply(&ComplexMatrix::identity(phi.dim()))?)?;
    Ok(SpectrumReport {
        eigenvalues,
        spectral_radius,
        pf_bound,
        bound_satisfied: spectral_radius <= pf_bound + tol.atol,
    })
}

/// `φ(a) = Σ_α λ_α f_α tr(g_α a)` with `tr(f_α g_β) = δ_{αβ}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiorthDecomp {
    pub lambdas: Vec<C64>,
    /// Right eigen-matrices: `φ(f_α) = λ_α f_α`.
    pub f: Vec<ComplexMatrix>,
    /// Dual eigen-matrices: `φ*(g_α) = λ_α g_α` under the trace pairing.
    pub g: Vec<ComplexMatrix>,
    pub condition_number: f64,
}

impl BiorthDecomp {
    /// `Σ_α λ_α f_α tr(g_α a)`.
    pub fn reconstruct(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let d = a.rows();
        let mut out = ComplexMatrix::zeros(d, d);
        for ((lam, f), g) in self.lambdas.iter().zip(&self.f).zip(&self.g) {
            let w = (g * a).trace() * lam;
            out += &f.scale(w);
        }
        out
    }

    /// Gram matrix `G_{αβ} = tr(f_α g_β)`.
    pub fn gram(&self) -> ComplexMatrix {
        let n = self.f.len();
        ComplexMatrix::from_fn(n, n, |a, b| (&self.f[a] * &self.g[b]).trace())
    }
}

/// Bi-orthonormal eigen-bases of a diagonalizable map.
///
/// Right eigenvectors `R` of the transfer matrix give `f_α`; the rows of
/// `R⁻¹` give `g_α` (transposed back from the trace pairing). Inverting the
/// full eigenvector matrix bi-orthonormalizes every degenerate cluster at
/// once. A condition number of `R` above `cond_max` is reported as
/// [`Error::NonDiagonalizable`].
pub fn biorthonormal_decomposition(phi: &MapRep, cond_max: f64) -> Result<BiorthDecomp> {
    let t = phi.to_transfer();
    let d = t.dim();
    let n = d * d;
    let (vals, right) = linalg::eigen(t.matrix())?;
    let cond = linalg::condition_number(&right)?;
    if !cond.is_finite() || cond > cond_max {
        return Err(Error::NonDiagonalizable { cond });
    }
    let left = linalg::inverse(&right)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| spectral_order(&vals[a], &vals[b]));
    let lambdas = order.iter().map(|&k| vals[k]).collect();
    let f = order
        .iter()
        .map(|&k| ComplexMatrix::from_fn(d, d, |i, j| right[(i * d + j, k)]))
        .collect();
    let g = order
        .iter()
        .map(|&k| ComplexMatrix::from_fn(d, d, |i, j| left[(k, j * d + i)]))
        .collect();
    Ok(BiorthDecomp {
        lambdas,
        f,
        g,
        condition_number: cond,
    })
}

/// Bi-orthonormal pair adapted to an invariant state `ω`:
/// `g = (h_1, …, h_{d²−1}, ω)`, `f = (h_1† − I tr(ω h_1†), …, I)` with `h`
/// the Gell-Mann family.
pub fn adapted_invariant_basis(
    omega: &DensityMatrix,
) -> Result<(Vec<ComplexMatrix>, Vec<ComplexMatrix>)> {
    let d = omega.dim();
    let id = ComplexMatrix::identity(d);
    let w = omega.matrix();
    let mut f = Vec::with_capacity(d * d);
    let mut g = Vec::with_capacity(d * d);
    if d >= 2 {
        for h in matspace::gell_mann_traceless(d)?.elems() {
            let h_adj = h.adjoint();
            let shift = (w * &h_adj).trace();
            f.push(&h_adj - &id.scale(shift));
            g.push(h.clone());
        }
    }
    f.push(id);
    g.push(w.clone());
    Ok((f, g))
}

/// Parameters of the circulant-plus-Schur example map.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExampleMapSpec {
    pub d: usize,
    pub alpha: Vec<f64>,
    pub beta: ComplexMatrix,
}

impl ExampleMapSpec {
    /// Checks `α_j >= 0`, `Σ α_j = 1`, `β` Hermitian PSD with unit diagonal.
    pub fn new(alpha: Vec<f64>, beta: ComplexMatrix, tol: Tolerance) -> Result<Self> {
        let d = alpha.len();
        if d == 0 {
            return Err(Error::Spec("alpha must be non-empty".into()));
        }
        if beta.rows() != d || beta.cols() != d {
            return Err(Error::Spec(format!(
                "beta must be {d}x{d} to match alpha, got {}x{}",
                beta.rows(),
                beta.cols()
            )));
        }
        if let Some(j) = alpha.iter().position(|a| !a.is_finite() || *a < -tol.atol) {
            return Err(Error::Spec(format!(
                "alpha[{j}] = {} is negative",
                alpha[j]
            )));
        }
        let total: f64 = alpha.iter().sum();
        if (total - 1.0).abs() > tol.atol {
            return Err(Error::Spec(format!("alpha sums to {total}, expected 1")));
        }
        if !beta.is_hermitian(tol.atol) {
            return Err(Error::Spec("beta must be Hermitian".into()));
        }
        if let Some(i) = (0..d).find(|&i| (beta[(i, i)] - c(1.0, 0.0)).norm() > tol.atol) {
            return Err(Error::Spec(format!("beta[{i}][{i}] must be 1")));
        }
        let min = linalg::min_hermitian_eigenvalue(&beta)?;
        if min < -tol.psd(d as f64) {
            return Err(Error::Spec(format!(
                "beta is not PSD (min eigenvalue {min:.3e})"
            )));
        }
        Ok(Self { d, alpha, beta })
    }

    /// Random valid spec: `α` from normalized exponentials, `β` the
    /// correlation matrix of a complex Gaussian Gram matrix.
    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R, d: usize) -> Self {
        let raw: Vec<f64> = (0..d)
            .map(|_| -rng.random::<f64>().max(1e-300).ln())
            .collect();
        let total: f64 = raw.iter().sum();
        let alpha = raw.iter().map(|x| x / total).collect();
        let g = matspace::gaussian_matrix(rng, d, d);
        let gram = &g * &g.adjoint();
        let scale: Vec<f64> = (0..d).map(|i| 1.0 / gram[(i, i)].re.sqrt()).collect();
        let mut beta = ComplexMatrix::from_fn(d, d, |i, j| gram[(i, j)] * scale[i] * scale[j]);
        for i in 0..d {
            beta[(i, i)] = c(1.0, 0.0);
        }
        let beta = beta.hermitian_part();
        Self { d, alpha, beta }
    }
}

/// `φ(a) = Σ_{i≠j} α_{(j−i) mod d} e_ij† a e_ij + α_0 Σ_{ij} β_ij e_ii† a e_jj`.
pub fn example_map(spec: &ExampleMapSpec) -> Result<MapRep> {
    let d = spec.d;
    let units: Vec<Vec<ComplexMatrix>> = (0..d)
        .map(|i| (0..d).map(|j| matspace::matrix_unit(d, i, j)).collect())
        .collect();
    let t = maprep::transfer_from_fn(d, |a| {
        let mut out = ComplexMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    let w = spec.alpha[(j + d - i) % d];
                    let e = &units[i][j];
                    out += &(&(&e.adjoint() * a) * e).scale_real(w);
                }
                let w = spec.beta[(i, j)] * spec.alpha[0];
                out += &(&(&units[i][i].adjoint() * a) * &units[j][j]).scale(w);
            }
        }
        out
    })?;
    Ok(t.into())
}

/// `ρ_m = Σ_j α_j λ^{−jm}`, `λ = exp(2πi/d)`, by direct sum.
pub fn circulant_eigenvalues(alpha: &[f64]) -> Vec<C64> {
    let d = alpha.len();
    (0..d)
        .map(|m| {
            alpha
                .iter()
                .enumerate()
                .map(|(j, a)| matspace::root_of_unity(d, -((j * m) as i64)) * *a)
                .sum()
        })
        .collect()
}

/// Closed-form spectrum: `{ρ_m} ∪ {α_0 β_ij : i ≠ j}`, in display order.
pub fn predicted_eigenvalues(spec: &ExampleMapSpec) -> Vec<C64> {
    let d = spec.d;
    let mut out = circulant_eigenvalues(&spec.alpha);
    for i in 0..d {
        for j in 0..d {
            if i != j {
                out.push(spec.beta[(i, j)] * spec.alpha[0]);
            }
        }
    }
    sort_eigenvalues(&mut out);
    out
}

/// Greedy nearest-neighbour matching of two equal-size multisets. Returns
/// `(pairs, max deviation)` with `pairs[k] = (index in a, index in b)`.
pub fn match_multisets(a: &[C64], b: &[C64]) -> Option<(Vec<(usize, usize)>, f64)> {
    if a.len() != b.len() {
        return None;
    }
    let mut candidates: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            candidates.push(((x - y).norm(), i, j));
        }
    }
    candidates.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)).then(p.2.cmp(&q.2)));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut pairs = Vec::with_capacity(a.len());
    let mut worst: f64 = 0.0;
    for (dist, i, j) in candidates {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            pairs.push((i, j));
            worst = worst.max(dist);
        }
    }
    pairs.sort();
    Some((pairs, worst))
}
