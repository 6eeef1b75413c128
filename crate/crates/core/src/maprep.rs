//! Linear maps `φ: M_d → M_d` and their representations.
//!
//! Conventions, fixed crate-wide:
//!
//! * `vec(a)` stacks rows, so `vec(a)[i·d + j] = a_ij`.
//! * Transfer (B-form) in matrix units: `vec(φ(a)) = B vec(a)`, i.e.
//!   `B[(i,j),(k,l)] = φ(e_kl)_ij`. In a general orthonormal basis `f`,
//!   `φ(a) = Σ B_{αβ} f_α tr(f_β† a)`.
//! * A-form: `φ(a) = Σ A_{αβ} f_α a f_β†`.
//! * Choi: `Ĉ = Σ_{kl} e_kl ⊗ φ(e_kl)`, unnormalized, so
//!   `Ĉ[(k,i),(l,j)] = B[(i,j),(k,l)]`.
//! * Kraus: `φ(a) = Σ K a K†`.
//! * Dual: `tr(φ*(x) a) = tr(x φ(a))`, the bilinear trace pairing between
//!   states and observables.
//!
//! The matrix-unit transfer matrix is the canonical form; every other
//! representation converts through it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{c, ComplexMatrix, C64};
use crate::matspace::{self, BasisKind, OrthonormalBasis, Tolerance};

#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    d: usize,
    b: ComplexMatrix,
    basis: OrthonormalBasis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AForm {
    d: usize,
    a: ComplexMatrix,
    basis: OrthonormalBasis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    d: usize,
    c: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrausForm {
    d: usize,
    ops: Vec<ComplexMatrix>,
}

/// A linear map on `M_d` in one of its representations.
#[derive(Debug, Clone, PartialEq)]
pub enum MapRep {
    Transfer(TransferMatrix),
    AForm(AForm),
    Choi(ChoiMatrix),
    Kraus(KrausForm),
}

fn check_super(d: usize, m: &ComplexMatrix, what: &str) -> Result<()> {
    if d == 0 {
        return Err(Error::Dimension("d must be at least 1".into()));
    }
    if m.rows() != d * d || m.cols() != d * d {
        return Err(Error::Dimension(format!(
            "{what} must be {n}x{n} for d = {d}, got {}x{}",
            m.rows(),
            m.cols(),
            n = d * d
        )));
    }
    Ok(())
}

fn check_basis(d: usize, basis: &OrthonormalBasis) -> Result<()> {
    if basis.dim() != d {
        return Err(Error::Dimension(format!(
            "basis is for d = {}, map is for d = {d}",
            basis.dim()
        )));
    }
    Ok(())
}

fn check_operand(d: usize, a: &ComplexMatrix) -> Result<()> {
    if a.rows() != d || a.cols() != d {
        return Err(Error::Dimension(format!(
            "map acts on {d}x{d} matrices, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}

/// Index permutation `M[(i,j),(k,l)] -> M[(i,k),(j,l)]`.
///
/// Takes the matrix-unit B-form to the matrix-unit A-form and back
/// (`A_{ij,kl} = B_{ik,jl}`); it is its own inverse.
pub fn swap_middle_indices(m: &ComplexMatrix, d: usize) -> ComplexMatrix {
    let n = d * d;
    ComplexMatrix::from_fn(n, n, |r, col| {
        let (i, j) = (r / d, r % d);
        let (k, l) = (col / d, col % d);
        m[(i * d + k, j * d + l)]
    })
}

impl TransferMatrix {
    /// Transfer matrix over matrix units.
    pub fn new(d: usize, b: ComplexMatrix) -> Result<Self> {
        check_super(d, &b, "transfer matrix")?;
        Ok(Self {
            d,
            b,
            basis: matspace::matrix_unit_basis(d)?,
        })
    }

    /// Transfer matrix `B^f` relative to an arbitrary orthonormal basis.
    pub fn with_basis(d: usize, b: ComplexMatrix, basis: OrthonormalBasis) -> Result<Self> {
        check_super(d, &b, "transfer matrix")?;
        check_basis(d, &basis)?;
        Ok(Self { d, b, basis })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.b
    }

    pub fn basis(&self) -> &OrthonormalBasis {
        &self.basis
    }

    pub fn is_matrix_units(&self) -> bool {
        self.basis.kind() == BasisKind::MatrixUnits
    }

    /// Same map, transfer matrix over matrix units: `B = U B^f U†`.
    pub fn to_matrix_units(&self) -> TransferMatrix {
        if self.is_matrix_units() {
            return self.clone();
        }
        let u = self.basis.vec_matrix();
        let b = &(&u * &self.b) * &u.adjoint();
        TransferMatrix {
            d: self.d,
            b,
            basis: matspace::matrix_unit_basis(self.d).unwrap(),
        }
    }

    /// Same map re-expressed over `basis`: `B^f = U† B U`.
    pub fn in_basis(&self, basis: &OrthonormalBasis) -> Result<TransferMatrix> {
        check_basis(self.d, basis)?;
        let mu = self.to_matrix_units();
        let u = basis.vec_matrix();
        let b = &(&u.adjoint() * &mu.b) * &u;
        Ok(TransferMatrix {
            d: self.d,
            b,
            basis: basis.clone(),
        })
    }

    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_operand(self.d, a)?;
        if self.is_matrix_units() {
            let v = self.b.mul_vec(a.data())?;
            return ComplexMatrix::from_vec(self.d, self.d, v);
        }
        let f = self.basis.elems();
        let coeffs: Vec<C64> = f
            .iter()
            .map(|fb| matspace::hs_inner(fb, a).unwrap())
            .collect();
        let mut out = ComplexMatrix::zeros(self.d, self.d);
        for (alpha, fa) in f.iter().enumerate() {
            let w: C64 = (0..f.len())
                .map(|beta| self.b[(alpha, beta)] * coeffs[beta])
                .sum();
            out += &fa.scale(w);
        }
        Ok(out)
    }
}

impl AForm {
    pub fn new(d: usize, a: ComplexMatrix, basis: OrthonormalBasis) -> Result<Self> {
        check_super(d, &a, "A-matrix")?;
        check_basis(d, &basis)?;
        Ok(Self { d, a, basis })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn basis(&self) -> &OrthonormalBasis {
        &self.basis
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_operand(self.d, x)?;
        let f = self.basis.elems();
        let mut out = ComplexMatrix::zeros(self.d, self.d);
        for (alpha, fa) in f.iter().enumerate() {
            // right_alpha = Σ_β A_{αβ} f_β†
            let mut right = ComplexMatrix::zeros(self.d, self.d);
            let mut any = false;
            for (beta, fb) in f.iter().enumerate() {
                let w = self.a[(alpha, beta)];
                if w != c(0.0, 0.0) {
                    right += &fb.adjoint().scale(w);
                    any = true;
                }
            }
            if any {
                out += &(&(fa * x) * &right);
            }
        }
        Ok(out)
    }

    /// Matrix-unit transfer matrix of this map.
    pub fn to_transfer(&self) -> TransferMatrix {
        let u = self.basis.vec_matrix();
        let a_units = &(&u * &self.a) * &u.adjoint();
        let b = swap_middle_indices(&a_units, self.d);
        TransferMatrix {
            d: self.d,
            b,
            basis: matspace::matrix_unit_basis(self.d).unwrap(),
        }
    }
}

impl ChoiMatrix {
    pub fn new(d: usize, c: ComplexMatrix) -> Result<Self> {
        check_super(d, &c, "Choi matrix")?;
        Ok(Self { d, c })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.c
    }

    /// `φ(a)_ij = Σ_{kl} a_kl Ĉ[(k,i),(l,j)]`.
    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_operand(self.d, a)?;
        let d = self.d;
        Ok(ComplexMatrix::from_fn(d, d, |i, j| {
            let mut s = c(0.0, 0.0);
            for k in 0..d {
                for l in 0..d {
                    s += a[(k, l)] * self.c[(k * d + i, l * d + j)];
                }
            }
            s
        }))
    }
}

impl KrausForm {
    pub fn new(d: usize, ops: Vec<ComplexMatrix>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Dimension("d must be at least 1".into()));
        }
        if let Some(k) = ops.iter().position(|k| k.rows() != d || k.cols() != d) {
            return Err(Error::Dimension(format!(
                "Kraus operator {k} is not {d}x{d}"
            )));
        }
        Ok(Self { d, ops })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_operand(self.d, a)?;
        let mut out = ComplexMatrix::zeros(self.d, self.d);
        for k in &self.ops {
            out += &(&(k * a) * &k.adjoint());
        }
        Ok(out)
    }

    /// `B = Σ K ⊗ K̄`.
    pub fn to_transfer(&self) -> TransferMatrix {
        let n = self.d * self.d;
        let mut b = ComplexMatrix::zeros(n, n);
        for k in &self.ops {
            b += &k.kron(&k.conj());
        }
        TransferMatrix {
            d: self.d,
            b,
            basis: matspace::matrix_unit_basis(self.d).unwrap(),
        }
    }
}

/// Matrix-unit transfer matrix to Choi matrix:
/// `Ĉ[(k,i),(l,j)] = B[(i,j),(k,l)]`. A pure index permutation.
pub fn reshuffle(t: &TransferMatrix) -> Result<ChoiMatrix> {
    if !t.is_matrix_units() {
        return Err(Error::Basis(format!(
            "reshuffle needs a matrix-unit transfer matrix, got basis {}; convert first",
            t.basis.kind().as_str()
        )));
    }
    let d = t.d;
    let n = d * d;
    let cm = ComplexMatrix::from_fn(n, n, |r, col| {
        let (k, i) = (r / d, r % d);
        let (l, j) = (col / d, col % d);
        t.b[(i * d + j, k * d + l)]
    });
    Ok(ChoiMatrix { d, c: cm })
}

/// Inverse of [`reshuffle`].
pub fn unreshuffle(ch: &ChoiMatrix) -> TransferMatrix {
    let d = ch.d;
    let n = d * d;
    let b = ComplexMatrix::from_fn(n, n, |r, col| {
        let (i, j) = (r / d, r % d);
        let (k, l) = (col / d, col % d);
        ch.c[(k * d + i, l * d + j)]
    });
    TransferMatrix {
        d,
        b,
        basis: matspace::matrix_unit_basis(d).unwrap(),
    }
}

impl MapRep {
    pub fn dim(&self) -> usize {
        match self {
            MapRep::Transfer(t) => t.d,
            MapRep::AForm(a) => a.d,
            MapRep::Choi(ch) => ch.d,
            MapRep::Kraus(k) => k.d,
        }
    }

    pub fn repr_name(&self) -> &'static str {
        match self {
            MapRep::Transfer(_) => "transfer",
            MapRep::AForm(_) => "aform",
            MapRep::Choi(_) => "choi",
            MapRep::Kraus(_) => "kraus",
        }
    }

    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        match self {
            MapRep::Transfer(t) => t.apply(a),
            MapRep::AForm(af) => af.apply(a),
            MapRep::Choi(ch) => ch.apply(a),
            MapRep::Kraus(k) => k.apply(a),
        }
    }

    /// Canonical form: transfer matrix over matrix units.
    pub fn to_transfer(&self) -> TransferMatrix {
        match self {
            MapRep::Transfer(t) => t.to_matrix_units(),
            MapRep::AForm(af) => af.to_transfer(),
            MapRep::Choi(ch) => unreshuffle(ch),
            MapRep::Kraus(k) => k.to_transfer(),
        }
    }

    pub fn to_choi(&self) -> ChoiMatrix {
        match self {
            MapRep::Choi(ch) => ch.clone(),
            other => reshuffle(&other.to_transfer()).expect("matrix-unit transfer"),
        }
    }

    /// A-form over `basis`: `A^f = U† A^e U` with `A^e_{ij,kl} = B_{ik,jl}`.
    pub fn to_aform(&self, basis: &OrthonormalBasis) -> Result<AForm> {
        check_basis(self.dim(), basis)?;
        let t = self.to_transfer();
        let a_units = swap_middle_indices(&t.b, t.d);
        let u = basis.vec_matrix();
        let a = &(&u.adjoint() * &a_units) * &u;
        Ok(AForm {
            d: t.d,
            a,
            basis: basis.clone(),
        })
    }

    /// Largest entrywise difference of the canonical transfer matrices.
    pub fn max_abs_diff(&self, other: &MapRep) -> f64 {
        self.to_transfer().b.max_abs_diff(&other.to_transfer().b)
    }
}

impl From<TransferMatrix> for MapRep {
    fn from(t: TransferMatrix) -> Self {
        MapRep::Transfer(t)
    }
}

impl From<AForm> for MapRep {
    fn from(a: AForm) -> Self {
        MapRep::AForm(a)
    }
}

impl From<ChoiMatrix> for MapRep {
    fn from(ch: ChoiMatrix) -> Self {
        MapRep::Choi(ch)
    }
}

impl From<KrausForm> for MapRep {
    fn from(k: KrausForm) -> Self {
        MapRep::Kraus(k)
    }
}

pub fn apply(phi: &MapRep, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    phi.apply(a)
}

/// The kernel `K[(α,β),(μ,ν)] = tr(f_α† f_μ f_β f_ν†)` relating A- and
/// B-coefficients over one basis: `vec(A) = K vec(B)` and
/// `vec(B) = K vec(A)` (coefficient matrices flattened row-major).
pub fn coefficient_kernel(basis: &OrthonormalBasis) -> ComplexMatrix {
    let f = basis.elems();
    let n = f.len();
    let left: Vec<Vec<ComplexMatrix>> = f
        .iter()
        .map(|fa| {
            let fa_adj = fa.adjoint();
            f.iter().map(|fm| &fa_adj * fm).collect()
        })
        .collect();
    let right: Vec<Vec<ComplexMatrix>> = f
        .iter()
        .map(|fb| f.iter().map(|fnu| fb * &fnu.adjoint()).collect())
        .collect();
    let trace_prod = |x: &ComplexMatrix, y: &ComplexMatrix| -> C64 {
        let d = x.rows();
        let mut s = c(0.0, 0.0);
        for p in 0..d {
            for q in 0..d {
                s += x[(p, q)] * y[(q, p)];
            }
        }
        s
    };
    ComplexMatrix::from_fn(n * n, n * n, |row, col| {
        let (alpha, beta) = (row / n, row % n);
        let (mu, nu) = (col / n, col % n);
        trace_prod(&left[alpha][mu], &right[beta][nu])
    })
}

fn apply_kernel(kernel: &ComplexMatrix, coeffs: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = coeffs.rows();
    let v = kernel.mul_vec(coeffs.data())?;
    ComplexMatrix::from_vec(n, n, v)
}

/// A-coefficients from B-coefficients expressed over the same basis, using
/// the trace kernel rather than the matrix-unit permutation.
pub fn aform_from_bform(t: &TransferMatrix) -> Result<AForm> {
    let a = apply_kernel(&coefficient_kernel(&t.basis), &t.b)?;
    AForm::new(t.d, a, t.basis.clone())
}

/// B-coefficients from A-coefficients over the same basis (trace kernel).
pub fn bform_from_aform(af: &AForm) -> Result<TransferMatrix> {
    let b = apply_kernel(&coefficient_kernel(&af.basis), &af.a)?;
    TransferMatrix::with_basis(af.d, b, af.basis.clone())
}

/// `φ ∘ ψ`; transfer matrices multiply.
pub fn compose(phi: &MapRep, psi: &MapRep) -> Result<MapRep> {
    if phi.dim() != psi.dim() {
        return Err(Error::Dimension(format!(
            "cannot compose maps on d = {} and d = {}",
            phi.dim(),
            psi.dim()
        )));
    }
    let b = phi.to_transfer().b.matmul(&psi.to_transfer().b)?;
    Ok(TransferMatrix::new(phi.dim(), b)?.into())
}

/// Dual map under `tr(φ*(x) a) = tr(x φ(a))`:
/// `B*[(i,j),(k,l)] = B[(l,k),(j,i)]`. Coincides with `B†` exactly when
/// `φ` is self-adjoint.
pub fn dual(phi: &MapRep) -> MapRep {
    let t = phi.to_transfer();
    let d = t.d;
    let n = d * d;
    let b = ComplexMatrix::from_fn(n, n, |r, col| {
        let (i, j) = (r / d, r % d);
        let (k, l) = (col / d, col % d);
        t.b[(l * d + k, j * d + i)]
    });
    MapRep::Transfer(TransferMatrix {
        d,
        b,
        basis: t.basis,
    })
}

/// `φ(a†) = φ(a)†`, checked as Hermiticity of the Choi matrix.
pub fn is_selfadjoint(phi: &MapRep, tol: Tolerance) -> bool {
    phi.to_choi().c.is_hermitian(tol.atol)
}

/// `φ(I) = I`.
pub fn is_unital(phi: &MapRep, tol: Tolerance) -> bool {
    let d = phi.dim();
    let id = ComplexMatrix::identity(d);
    phi.apply(&id)
        .map(|out| out.approx_eq(&id, tol.atol))
        .unwrap_or(false)
}

/// `tr φ(a) = tr a` for all `a`, i.e. the dual is unital.
pub fn is_trace_preserving(phi: &MapRep, tol: Tolerance) -> bool {
    is_unital(&dual(phi), tol)
}

/// `(φ, ψ) = Σ_α tr(φ(f_α)† ψ(f_α))` over matrix units.
pub fn map_inner(phi: &MapRep, psi: &MapRep) -> Result<C64> {
    map_inner_in_basis(phi, psi, &matspace::matrix_unit_basis(phi.dim())?)
}

/// `(φ, ψ)` summed over an arbitrary orthonormal basis; basis independent.
pub fn map_inner_in_basis(phi: &MapRep, psi: &MapRep, basis: &OrthonormalBasis) -> Result<C64> {
    if phi.dim() != psi.dim() {
        return Err(Error::Dimension(format!(
            "inner product of maps on d = {} and d = {}",
            phi.dim(),
            psi.dim()
        )));
    }
    check_basis(phi.dim(), basis)?;
    let mut s = c(0.0, 0.0);
    for f in basis.elems() {
        s += matspace::hs_inner(&phi.apply(f)?, &psi.apply(f)?)?;
    }
    Ok(s)
}

/// `<Ĉ_φ, Ĉ_ψ> = tr(Ĉ_φ† Ĉ_ψ)`.
pub fn choi_inner(phi: &MapRep, psi: &MapRep) -> Result<C64> {
    matspace::hs_inner(&phi.to_choi().c, &psi.to_choi().c)
}

/// Transfer matrix of an arbitrary linear closure, by evaluation on matrix
/// units.
pub fn transfer_from_fn(
    d: usize,
    mut f: impl FnMut(&ComplexMatrix) -> ComplexMatrix,
) -> Result<TransferMatrix> {
    let n = d * d;
    let mut b = ComplexMatrix::zeros(n, n);
    for col in 0..n {
        let out = f(&matspace::matrix_unit(d, col / d, col % d));
        check_operand(d, &out)?;
        for (row, z) in out.data().iter().enumerate() {
            b[(row, col)] = *z;
        }
    }
    TransferMatrix::new(d, b)
}

pub fn identity_map(d: usize) -> MapRep {
    TransferMatrix::new(d, ComplexMatrix::identity(d * d))
        .unwrap()
        .into()
}

/// `a ↦ aᵀ`; its transfer matrix is the permutation `(i,j) ↔ (j,i)`.
pub fn transpose_map(d: usize) -> MapRep {
    let n = d * d;
    let b = ComplexMatrix::from_fn(n, n, |r, col| {
        if r / d == col % d && r % d == col / d {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    TransferMatrix::new(d, b).unwrap().into()
}

/// `a ↦ v a v†`.
pub fn conjugation_map(v: &ComplexMatrix) -> Result<MapRep> {
    let d = v.square_dim()?;
    Ok(KrausForm::new(d, vec![v.clone()])?.into())
}

/// Random CP map with `n_ops` Gaussian Kraus operators, each scaled by
/// `1/√(d·n_ops)`.
pub fn random_cp_map<R: rand::Rng + ?Sized>(rng: &mut R, d: usize, n_ops: usize) -> MapRep {
    let s = 1.0 / ((d * n_ops.max(1)) as f64).sqrt();
    let ops = (0..n_ops)
        .map(|_| matspace::gaussian_matrix(rng, d, d).scale_real(s))
        .collect();
    KrausForm::new(d, ops).unwrap().into()
}

/// Random unital CP map: Gaussian Kraus operators `K_k` completed to
/// `K'_k = S^{-1/2} K_k` with `S = Σ K_k K_k†`, so that `Σ K'_k K'_k† = I`.
pub fn random_unital_cp_map<R: rand::Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    n_ops: usize,
) -> Result<MapRep> {
    let ops: Vec<ComplexMatrix> = (0..n_ops.max(1))
        .map(|_| matspace::gaussian_matrix(rng, d, d))
        .collect();
    let mut s = ComplexMatrix::zeros(d, d);
    for k in &ops {
        s += &(k * &k.adjoint());
    }
    let (vals, vecs) = linalg::hermitian_eigen(&s)?;
    if vals[0] <= 0.0 {
        return Err(Error::Numerical("Kraus completion: singular Σ K K†".into()));
    }
    let inv_sqrt_diag =
        ComplexMatrix::diag_real(&vals.iter().map(|v| 1.0 / v.sqrt()).collect::<Vec<_>>());
    let inv_sqrt = &(&vecs * &inv_sqrt_diag) * &vecs.adjoint();
    let ops = ops.iter().map(|k| &inv_sqrt * k).collect();
    Ok(KrausForm::new(d, ops)?.into())
}

/// Random map with Gaussian transfer matrix (no positivity structure).
pub fn random_linear_map<R: rand::Rng + ?Sized>(rng: &mut R, d: usize) -> MapRep {
    let n = d * d;
    TransferMatrix::new(
        d,
        matspace::gaussian_matrix(rng, n, n).scale_real(1.0 / n as f64),
    )
    .unwrap()
    .into()
}

/// Wire form: `{"d": n, "repr": ..., "basis": ..., "data": ...}`.
///
/// `data` is a single matrix for `transfer`, `choi` and `aform`, and a list
/// of matrices for `kraus`. A `custom` basis carries its elements in
/// `basis_elems`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapWire {
    pub d: usize,
    pub repr: ReprName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_elems: Option<Vec<ComplexMatrix>>,
    pub data: MapData,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReprName {
    Transfer,
    Choi,
    Aform,
    Kraus,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapData {
    Matrix(ComplexMatrix),
    List(Vec<ComplexMatrix>),
}

impl MapWire {
    pub fn from_map(phi: &MapRep) -> Self {
        let basis_fields = |b: &OrthonormalBasis| {
            let elems = (b.kind() == BasisKind::Custom).then(|| b.elems().to_vec());
            (Some(b.kind()), elems)
        };
        match phi {
            MapRep::Transfer(t) => {
                let (basis, basis_elems) = basis_fields(&t.basis);
                MapWire {
                    d: t.d,
                    repr: ReprName::Transfer,
                    basis,
                    basis_elems,
                    data: MapData::Matrix(t.b.clone()),
                }
            }
            MapRep::AForm(a) => {
                let (basis, basis_elems) = basis_fields(&a.basis);
                MapWire {
                    d: a.d,
                    repr: ReprName::Aform,
                    basis,
                    basis_elems,
                    data: MapData::Matrix(a.a.clone()),
                }
            }
            MapRep::Choi(ch) => MapWire {
                d: ch.d,
                repr: ReprName::Choi,
                basis: Some(BasisKind::MatrixUnits),
                basis_elems: None,
                data: MapData::Matrix(ch.c.clone()),
            },
            MapRep::Kraus(k) => MapWire {
                d: k.d,
                repr: ReprName::Kraus,
                basis: None,
                basis_elems: None,
                data: MapData::List(k.ops.clone()),
            },
        }
    }

    pub fn into_map(self, tol: Tolerance) -> Result<MapRep> {
        let d = self.d;
        let basis = match (self.basis, self.basis_elems) {
            (None | Some(BasisKind::MatrixUnits), None) => matspace::matrix_unit_basis(d)?,
            (Some(BasisKind::Custom), Some(elems)) => OrthonormalBasis::custom(d, elems, tol)?,
            (Some(BasisKind::Custom), None) => {
                return Err(Error::Basis("basis \"custom\" requires basis_elems".into()))
            }
            (Some(kind), None) => OrthonormalBasis::named(kind, d)?,
            (_, Some(_)) => {
                return Err(Error::Basis(
                    "basis_elems is only allowed with basis \"custom\"".into(),
                ))
            }
        };
        match (self.repr, self.data) {
            (ReprName::Transfer, MapData::Matrix(m)) => {
                Ok(TransferMatrix::with_basis(d, m, basis)?.into())
            }
            (ReprName::Aform, MapData::Matrix(m)) => Ok(AForm::new(d, m, basis)?.into()),
            (ReprName::Choi, MapData::Matrix(m)) => {
                if basis.kind() != BasisKind::MatrixUnits {
                    return Err(Error::Basis(
                        "Choi matrices are defined over matrix units".into(),
                    ));
                }
                Ok(ChoiMatrix::new(d, m)?.into())
            }
            (ReprName::Kraus, MapData::List(ops)) => Ok(KrausForm::new(d, ops)?.into()),
            (ReprName::Kraus, MapData::Matrix(_)) => {
                Err(Error::Spec("kraus data must be a list of matrices".into()))
            }
            (_, MapData::List(_)) => Err(Error::Spec(
                "data must be a single matrix for this repr".into(),
            )),
        }
    }
}
