//! Lattices, bilinear forms, and spectral measures for the half-infinite
//! bipartite quivers of types A and D, computed on finite truncations.
//!
//! The crate is organised bottom-up:
//!
//! | module     | contents                                                        |
//! |------------|-----------------------------------------------------------------|
//! | `entire`   | the entire functions s, c and the two defining surfaces         |
//! | `geometry` | critical points of the surfaces, root refinement, adjacency     |
//! | `quiver`   | vertex/edge data of the truncated quivers, labels, classes      |
//! | `matrix`   | sparse exact matrix algebra, generic over the scalar            |
//! | `forms`    | the seed form J, its transpose, and the d-graded pairings       |
//! | `monodromy`| the two involutions, their product, factored form, word order   |
//! | `spectra`  | eigendecomposition, closed-form spectra and eigenvector streams |
//! | `measure`  | projector families, diagonal unitaries, atoms, transport        |
//! | `verify`   | named invariant checks grouped into suites                      |
//!
//! Everything numeric is generic over the scalar type through `num-traits`
//! where that is natural (entire-function evaluation over any float, lattice
//! algebra over any checked integer); the aliases below fix the concrete
//! types used throughout the higher modules and the CLI.

pub mod entire;
pub mod forms;
pub mod geometry;
pub mod matrix;
pub mod measure;
pub mod monodromy;
pub mod quiver;
pub mod scalar;
pub mod spectra;
pub mod verify;

/// Scalar for exact lattice arithmetic. All operations are overflow-checked.
pub type LatticeInt = i64;
/// Scalar for floating-point spectral work.
pub type Real = f64;
/// Complex scalar for measure atoms and diagonal unitaries.
pub type Cplx = num_complex::Complex<Real>;

/// Exact integer matrix (sparse rows).
pub type IntMatrix = matrix::SparseMatrix<LatticeInt>;
/// Dense real matrix used by the eigensolver layer.
pub type RealMatrix = nalgebra::DMatrix<Real>;
/// Dense real vector.
pub type RealVector = nalgebra::DVector<Real>;
/// Dense complex matrix used by the measure layer.
pub type CplxMatrix = nalgebra::DMatrix<Cplx>;
/// Dense complex vector.
pub type CplxVector = nalgebra::DVector<Cplx>;

/// Errors shared by every module of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("non-finite input {value} to {context}")]
    NonFinite { context: &'static str, value: f64 },
    #[error("size {size} below minimum {min} for family {family}")]
    SizeBelowMinimum {
        family: quiver::Family,
        size: usize,
        min: usize,
    },
    #[error("index count {n_max} below minimum {min} for {context}")]
    CountBelowMinimum {
        context: &'static str,
        n_max: usize,
        min: usize,
    },
    #[error("root refinement did not converge within {budget} iterations (last x = {last_x})")]
    NoConvergence { budget: usize, last_x: f64 },
    #[error("no sign change on bracket [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error("operator role {role:?} not invertible by complement (only the seed form and its transpose are)")]
    NotUnipotent { role: forms::OperatorRole },
    #[error("eigensolver residual {residual:e} above bound {bound:e}")]
    SolverResidual { residual: f64, bound: f64 },
    #[error("matrix dimensions {a}x{b} and {c}x{d} incompatible for {context}")]
    DimensionMismatch {
        context: &'static str,
        a: usize,
        b: usize,
        c: usize,
        d: usize,
    },
    #[error("{context}: {message}")]
    Invariant {
        context: &'static str,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
