//! Sums of k-th powers in the algebra `T_n(F_q)` of upper-triangular
//! matrices over a finite field.
//!
//! The crate is organised bottom-up:
//!
//! - [`field`]: exact arithmetic in `F_q`, power images and roots.
//! - [`power_sums`]: solutions of `X^k + Y^k = λ` (and three-variable
//!   variants), their partition into power-signature classes, and selection
//!   of representatives with pairwise distinct powers.
//! - [`tri_matrix`]: products, powers and k-th roots of triangular matrices.
//! - [`canonical`]: conjugation by invertible triangular matrices, and the
//!   graph presentation notation for 0/1 nilpotent matrices.
//! - [`decomposer`]: writing a matrix as `A^k + B^k` or `A^k + B^k + D^k`.
//! - [`oracle`]: brute-force ground truth at small sizes.
//! - [`cli`]: the `waring` command-line front end.
//!
//! Runnable walkthroughs of each capability live under `examples/`.

pub mod canonical;
pub mod cli;
pub mod decomposer;
pub mod field;
pub mod oracle;
pub mod power_sums;
pub mod tri_matrix;

pub use field::{Elem, Field, FieldError};
pub use tri_matrix::{MatrixError, UTMatrix};

/// Environment variable that replaces every enumeration guard.
pub const MAX_ENUM_ENV: &str = "WARING_MAX_ENUM";

/// Enumeration limit: `WARING_MAX_ENUM` when set and parseable, else `default`.
pub fn enumeration_limit(default: u64) -> u64 {
    std::env::var(MAX_ENUM_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(default)
}
