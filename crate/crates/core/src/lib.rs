//! MDS generator matrices with prescribed zero patterns over small finite
//! fields, built as generalized Reed-Solomon codes `A = C·V`, together with a
//! symbolic toolkit for the polynomial families `P(k, V)` behind them.
//!
//! Module map:
//! - [`gfield`]: GF(p^m) arithmetic, determinants and ranks.
//! - [`patterns`]: zero patterns, the MDS condition, completion, distance reduction.
//! - [`genmatrix`]: row polynomials, evaluation points, matrix assembly.
//! - [`verify`]: minor checks, minimum distance, minimal-field search.
//! - [`symcore`]: multiplicity vectors, `P(k, V)`, independence oracles, lemma transforms.

pub mod genmatrix;
pub mod gfield;
pub mod par;
pub mod patterns;
pub mod symcore;
pub mod verify;

pub use gfield::{FieldElement, FieldSpec, GfError, Matrix};
pub use par::Execution;
pub use patterns::{Condition, ConditionWitness, PatternError, ZeroPattern};
pub use genmatrix::{construct_mds, ConstructOptions, Construction, GenError, GeneratorMatrix};
pub use verify::{MdsVerdict, MinorWitness, VerifyError};
