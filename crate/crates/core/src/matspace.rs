//! The matrix algebra `M_d`: orthonormal bases, Hilbert-Schmidt geometry,
//! density operators and seeded random fixtures.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{c, ComplexMatrix, C64};

/// Default absolute tolerance for Hermiticity, trace and PSD checks.
pub const DEFAULT_ATOL: f64 = 1e-9;

/// Absolute tolerance used by every predicate in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { atol: DEFAULT_ATOL }
    }
}

impl Tolerance {
    pub fn new(atol: f64) -> Self {
        Self { atol }
    }

    /// Tolerance for "minimum eigenvalue >= -tol", relative to the matrix scale.
    pub fn psd(&self, scale: f64) -> f64 {
        self.atol * scale.max(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    MatrixUnits,
    FourierDiagonalPlusOffdiag,
    GellMannWithIdentity,
    Custom,
}

impl BasisKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BasisKind::MatrixUnits => "matrix_units",
            BasisKind::FourierDiagonalPlusOffdiag => "fourier_diagonal_plus_offdiag",
            BasisKind::GellMannWithIdentity => "gell_mann_with_identity",
            BasisKind::Custom => "custom",
        }
    }
}

/// `d²` matrices, orthonormal under `tr(a† b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalBasis {
    d: usize,
    kind: BasisKind,
    elems: Vec<ComplexMatrix>,
}

impl OrthonormalBasis {
    /// Wraps a user-supplied family after checking size, shape and
    /// orthonormality.
    pub fn custom(d: usize, elems: Vec<ComplexMatrix>, tol: Tolerance) -> Result<Self> {
        let basis = Self {
            d,
            kind: BasisKind::Custom,
            elems,
        };
        basis.validate(tol)?;
        Ok(basis)
    }

    /// Builds one of the named bases.
    pub fn named(kind: BasisKind, d: usize) -> Result<Self> {
        match kind {
            BasisKind::MatrixUnits => matrix_unit_basis(d),
            BasisKind::FourierDiagonalPlusOffdiag => fourier_offdiag_basis(d),
            BasisKind::GellMannWithIdentity => gell_mann_with_identity(d),
            BasisKind::Custom => Err(Error::Basis(
                "a custom basis needs explicit elements".into(),
            )),
        }
    }

    fn validate(&self, tol: Tolerance) -> Result<()> {
        let d = self.d;
        if d == 0 || self.elems.len() != d * d {
            return Err(Error::Basis(format!(
                "expected {} basis elements for d = {d}, got {}",
                d * d,
                self.elems.len()
            )));
        }
        if let Some(k) = self
            .elems
            .iter()
            .position(|e| e.rows() != d || e.cols() != d)
        {
            return Err(Error::Basis(format!("basis element {k} is not {d}x{d}")));
        }
        let dev = self.orthonormality_defect();
        if dev > tol.atol {
            return Err(Error::Basis(format!(
                "basis is not orthonormal (defect {dev:.3e})"
            )));
        }
        Ok(())
    }

    /// `max_{α,β} |tr(f_α† f_β) − δ_{αβ}|`, by brute force over all pairs.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, fa) in self.elems.iter().enumerate() {
            for (b, fb) in self.elems.iter().enumerate() {
                let want = if a == b { 1.0 } else { 0.0 };
                let got = hs_inner_unchecked(fa, fb);
                worst = worst.max((got - c(want, 0.0)).norm());
            }
        }
        worst
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn elems(&self) -> &[ComplexMatrix] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// The `d² x d²` unitary whose column `α` is `vec(f_α)` (row-major).
    pub fn vec_matrix(&self) -> ComplexMatrix {
        let n = self.d * self.d;
        ComplexMatrix::from_fn(n, n, |mu, alpha| self.elems[alpha].data()[mu])
    }
}

/// `d² − 1` traceless matrices, orthonormal under `tr(h_α h_β†)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TracelessFamily {
    d: usize,
    elems: Vec<ComplexMatrix>,
}

impl TracelessFamily {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn elems(&self) -> &[ComplexMatrix] {
        &self.elems
    }
}

fn unit(d: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    m[(i, j)] = c(1.0, 0.0);
    m
}

/// The matrix unit `e_ij = |i><j|` in `M_d`.
pub fn matrix_unit(d: usize, i: usize, j: usize) -> ComplexMatrix {
    unit(d, i, j)
}

/// Matrix units `e_ij`, index `α = i·d + j` (zero-based, row-major).
pub fn matrix_unit_basis(d: usize) -> Result<OrthonormalBasis> {
    if d == 0 {
        return Err(Error::Dimension("d must be at least 1".into()));
    }
    let elems = (0..d * d).map(|a| unit(d, a / d, a % d)).collect();
    Ok(OrthonormalBasis {
        d,
        kind: BasisKind::MatrixUnits,
        elems,
    })
}

/// Generalized Gell-Mann matrices normalized to `tr(h_α h_β†) = δ_{αβ}`.
///
/// Order: for each pair `i < j` (lexicographic) the symmetric
/// `(e_ij + e_ji)/√2` followed by the antisymmetric `−i(e_ij − e_ji)/√2`;
/// then the `d − 1` diagonal matrices
/// `(Σ_{k<l} e_kk − l e_ll)/√(l(l+1))`, `l = 1..d−1`.
pub fn gell_mann_traceless(d: usize) -> Result<TracelessFamily> {
    if d < 2 {
        return Err(Error::Dimension(format!(
            "traceless family needs d >= 2, got {d}"
        )));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut elems = Vec::with_capacity(d * d - 1);
    for i in 0..d {
        for j in (i + 1)..d {
            let mut sym = ComplexMatrix::zeros(d, d);
            sym[(i, j)] = c(s, 0.0);
            sym[(j, i)] = c(s, 0.0);
            elems.push(sym);
            let mut asym = ComplexMatrix::zeros(d, d);
            asym[(i, j)] = c(0.0, -s);
            asym[(j, i)] = c(0.0, s);
            elems.push(asym);
        }
    }
    for l in 1..d {
        let norm = ((l * (l + 1)) as f64).sqrt();
        let mut diag = ComplexMatrix::zeros(d, d);
        for k in 0..l {
            diag[(k, k)] = c(1.0 / norm, 0.0);
        }
        diag[(l, l)] = c(-(l as f64) / norm, 0.0);
        elems.push(diag);
    }
    Ok(TracelessFamily { d, elems })
}

/// Gell-Mann family followed by `I/√d` as the last element.
pub fn gell_mann_with_identity(d: usize) -> Result<OrthonormalBasis> {
    if d == 0 {
        return Err(Error::Dimension("d must be at least 1".into()));
    }
    let mut elems = if d == 1 {
        Vec::new()
    } else {
        gell_mann_traceless(d)?.elems
    };
    elems.push(ComplexMatrix::identity(d).scale_real(1.0 / (d as f64).sqrt()));
    Ok(OrthonormalBasis {
        d,
        kind: BasisKind::GellMannWithIdentity,
        elems,
    })
}

/// `u_m = d^{-1/2} Σ_j λ^{jm} e_jj` with `λ = exp(2πi/d)`, `m = 0..d−1`.
pub fn fourier_diagonal_basis(d: usize) -> Result<Vec<ComplexMatrix>> {
    if d == 0 {
        return Err(Error::Dimension("d must be at least 1".into()));
    }
    let norm = 1.0 / (d as f64).sqrt();
    Ok((0..d)
        .map(|m| {
            let mut u = ComplexMatrix::zeros(d, d);
            for j in 0..d {
                u[(j, j)] = root_of_unity(d, (j * m) as i64) * norm;
            }
            u
        })
        .collect())
}

/// `exp(2πi k/d)`, with `k` reduced mod `d` first to keep the phase exact-ish.
pub fn root_of_unity(d: usize, k: i64) -> C64 {
    let r = k.rem_euclid(d as i64) as f64;
    C64::from_polar(1.0, 2.0 * PI * r / d as f64)
}

/// Basis `f_mn` with `f_mm = u_m` and `f_mn = e_mn` for `m ≠ n`, index `m·d + n`.
pub fn fourier_offdiag_basis(d: usize) -> Result<OrthonormalBasis> {
    let us = fourier_diagonal_basis(d)?;
    let elems = (0..d * d)
        .map(|a| {
            let (m, n) = (a / d, a % d);
            if m == n {
                us[m].clone()
            } else {
                unit(d, m, n)
            }
        })
        .collect();
    Ok(OrthonormalBasis {
        d,
        kind: BasisKind::FourierDiagonalPlusOffdiag,
        elems,
    })
}

fn hs_inner_unchecked(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    a.data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| x.conj() * y)
        .sum()
}

/// Hilbert-Schmidt inner product `tr(a† b)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Dimension(format!(
            "shape mismatch: {}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(hs_inner_unchecked(a, b))
}

/// A validated quantum state: Hermitian, PSD and unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix, tol: Tolerance) -> Result<Self> {
        let d = m.square_dim()?;
        let herm_dev = m.max_abs_diff(&m.adjoint());
        if herm_dev > tol.atol {
            return Err(Error::Spec(format!(
                "state is not Hermitian (deviation {herm_dev:.3e})"
            )));
        }
        let tr = m.trace();
        if (tr - c(1.0, 0.0)).norm() > tol.atol {
            return Err(Error::Spec(format!("state trace is {tr}, expected 1")));
        }
        let eigs = linalg::hermitian_eigenvalues(&m)?;
        let scale = eigs.iter().fold(0.0f64, |s, e| s.max(e.abs()));
        if eigs[0] < -tol.psd(scale) {
            return Err(Error::Spec(format!(
                "state is not positive semidefinite (min eigenvalue {:.3e}, d = {d})",
                eigs[0]
            )));
        }
        Ok(Self { m })
    }

    /// `|ψ><ψ| / <ψ|ψ>`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if psi.is_empty() || !norm.is_finite() || norm <= 0.0 {
            return Err(Error::Spec("pure state vector must be nonzero".into()));
        }
        Ok(Self {
            m: ComplexMatrix::outer(psi, psi).scale_real(1.0 / norm),
        })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            m: ComplexMatrix::identity(d).scale_real(1.0 / d as f64),
        }
    }

    /// Diagonal state from probabilities; validated.
    pub fn diagonal(probs: &[f64], tol: Tolerance) -> Result<Self> {
        Self::new(ComplexMatrix::diag_real(probs), tol)
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.m
    }
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.m.serialize(serializer)
    }
}

/// `tr(ρ²)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    matrix_purity(rho.matrix())
}

/// `tr(m²)` real part for any square matrix; equals `Σ |m_ij|²` when Hermitian.
pub fn matrix_purity(m: &ComplexMatrix) -> f64 {
    hs_inner_unchecked(&m.adjoint(), m).re
}

/// Seeded generator shared by all random fixtures.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian: real and imaginary parts i.i.d. `N(0, 1)`.
pub fn complex_gaussian<R: rand::Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c(re, im)
}

/// `rows x cols` matrix of standard complex Gaussians.
pub fn gaussian_matrix<R: rand::Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-random unit vector in `C^d`.
pub fn haar_pure_vector<R: rand::Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// Random density matrix `G G† / tr(G G†)` with `G` a `d x rank` complex
/// Gaussian matrix drawn from `rng`.
pub fn random_density_with<R: rand::Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    rank: usize,
) -> Result<DensityMatrix> {
    if d == 0 || rank == 0 || rank > d {
        return Err(Error::Dimension(format!(
            "need 1 <= rank <= d, got rank {rank}, d {d}"
        )));
    }
    let g = gaussian_matrix(rng, d, rank);
    let gg = g.matmul(&g.adjoint())?;
    let tr = gg.trace().re;
    // Exactly Hermitian: average with the adjoint to drop rounding asymmetry.
    Ok(DensityMatrix {
        m: gg.scale_real(1.0 / tr).hermitian_part(),
    })
}

/// Seeded random density matrix of the given rank.
pub fn random_density(d: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_with(&mut seeded_rng(seed), d, rank)
}

/// Row-major unvectorization of a length-`d²` vector.
pub fn unvec(v: &[C64], d: usize) -> Result<ComplexMatrix> {
    ComplexMatrix::from_vec(d, d, v.to_vec())
}
