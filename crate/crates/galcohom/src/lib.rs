//! Exact computation of Tate cohomology for finite-group modules and of the
//! closed-form global Galois cohomology invariants attached to an arithmetic
//! datum: H^1, the abelianized H^1/H^2, and the Tate-Shafarevich groups
//! Sha^1 and Sha^2, each cross-checked through two independent formulas.
//!
//! All arithmetic is exact (arbitrary-precision integers and rationals);
//! every group is a finitely generated abelian group presented by an integer
//! relation matrix and canonicalized by Smith normal form.

pub mod abelian;
pub mod base_change;
pub mod complex;
pub mod convert;
pub mod datum;
pub mod fiber;
pub mod gmodule;
pub mod group;
pub mod h1;
pub mod hinich;
pub mod local;
pub mod lowdeg;
pub mod matrix;
pub mod places;
pub mod qz;
pub mod replace;
pub mod rescor;
pub mod resolution;
pub mod sha;
pub mod tate;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("homomorphism is not well defined: a relator does not map to zero")]
    IllDefinedHom,
    #[error("not an embedding: {0}")]
    NotEmbedding(String),
    #[error("resolution depth {depth} exceeded at degree {degree}")]
    ResolutionDepth { degree: i64, depth: i64 },
    #[error("not archimedean: stabilizer of order {0} > 2")]
    NotArchimedean(usize),
    #[error("not a subgroup")]
    NotSubgroup,
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error("module is infinite; dual over Q/Z requires a finite module")]
    InfiniteModule,
    #[error("module has torsion; Z-dual requires a torsion-free module (use the Q/Z dual)")]
    TorsionDual,
    #[error("no admissible target orbit for stabilizer of order {0}")]
    NoAdmissibleTarget(usize),
    #[error("coverage condition fails: cyclic class {0} is contained in no stabilizer")]
    Uncovered(String),
    #[error("vacuous: Sha is trivial")]
    Vacuous,
    #[error("archimedean local datum missing for real orbit {0}")]
    MissingArchimedean(String),
    #[error("invalid group table: {0}")]
    BadGroup(String),
    #[error("invalid datum: {0}")]
    BadDatum(String),
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("augmentation of an empty place set is undefined")]
    EmptyPlaceSet,
    #[error("enumeration limit exceeded: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
