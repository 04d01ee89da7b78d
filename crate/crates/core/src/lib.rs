//! Exact construction, recognition and counting of generalized
//! Reed-Solomon (GRS) and MDS codes over small finite fields.
//!
//! The crate is organized around a handful of layers:
//!
//! - [`gf`]: table-driven arithmetic in GF(p^e), q <= 256;
//! - [`linalg`]: dense exact linear algebra over GF(q) and the canonical
//!   [`linalg::CodeKey`] identifying a linear code by its reduced row
//!   echelon form;
//! - [`geom`]: projective points, normal rational curves, conics, nuclei
//!   and hyperoval searches in PG(2,q);
//! - [`grscore`]: GRS generator matrices, dual multipliers, fitting a
//!   normal rational curve through k+2 points, hyperconic codes,
//!   puncturing and GRS recognition;
//! - [`nrcauto`]: the symmetric-power homomorphism from PGL2 into PGL_k
//!   and automorphism-group checks for the normal rational curve;
//! - [`census`]: enumeration engines that count codes by exhaustive
//!   search with canonical deduplication;
//! - [`formulas`]: closed-form counts and exact polynomial expansions
//!   over arbitrary-precision integers and rationals.
//!
//! Every enumeration is deterministic: results are independent of worker
//! count, and all counts are exact integers.

pub mod census;
pub mod formulas;
pub mod geom;
pub mod gf;
pub mod grscore;
pub mod linalg;
pub mod nrcauto;

mod error;

pub use error::Error;
pub use gf::{Field, FieldElement, FieldSpec};
pub use linalg::{CodeKey, MatrixGF};

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
