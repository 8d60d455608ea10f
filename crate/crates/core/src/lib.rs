//! Semi-coarse spaces, bornologous maps `ℤ → X`, strings of maps and the
//! groupoid they generate, plus a mechanical checker for the van Kampen
//! factorization over well-split covers.

pub mod error;
pub mod homotopy;
pub mod io;
pub mod corpus;
pub mod cli;
pub mod strings;
pub mod label;
pub mod oracle;
pub mod pi1;
pub mod random;
pub mod space;
pub mod splitting;
pub mod tail;
pub mod vankampen;
pub mod zmap;
mod uf;

pub use error::{Error, Result};
pub use label::Label;
pub use space::{FiniteSpace, Scale, Space};
pub use tail::Tail;
pub use zmap::{PointMove, ZMap};
