//! Exact computations with arity-truncated symmetric operads.

pub mod axioms;
pub mod basis;
pub mod builders;
pub mod classify;
pub mod error;
pub mod ideal;
pub mod io;
pub mod linalg;
pub mod operad;
pub mod perm;
pub mod series;
pub mod truncatify;
pub mod truncation;

pub use error::{OperadError, Result};
pub use linalg::{RMatrix, Subspace, Q};
pub use operad::{Element, GrowthCertificate, OperadRule, TableRule, TruncatedOperad};
pub use perm::Permutation;
