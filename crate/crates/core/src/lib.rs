//! Linear maps on the matrix algebra `M_d`.
//!
//! * [`matspace`]: bases of `M_d`, Hilbert-Schmidt geometry, density matrices.
//! * [`maprep`]: transfer, A-form, Choi and Kraus representations and the
//!   conversions between them; composition, duality, map inner product.
//! * [`analysis`]: complete positivity, spectra and the Perron-Frobenius
//!   bound, bi-orthonormal decompositions, the circulant example map.
//! * [`stateclasses`]: state sets generated by unital CP projections and the
//!   purity-ball map, with membership tests and witnesses.

pub mod analysis;
pub mod error;
pub mod linalg;
pub mod maprep;
pub mod matrix;
pub mod matspace;
pub mod stateclasses;

pub use analysis::{BiorthDecomp, CpReport, ExampleMapSpec, PositivityVerdict, SpectrumReport};
pub use error::{Error, Result};
pub use maprep::{AForm, ChoiMatrix, KrausForm, MapRep, MapWire, TransferMatrix};
pub use matrix::{c, ComplexMatrix, C64};
pub use matspace::{
    BasisKind, DensityMatrix, OrthonormalBasis, Tolerance, TracelessFamily, DEFAULT_ATOL,
};
pub use stateclasses::{ConeChecks, ProjectionMembership, ProjectionSpec, Witness};
