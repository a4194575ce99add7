//! Exact-arithmetic toolkit for cyclotomic product identities.
//!
//! The crate builds every object those identities live on — cyclotomic
//! polynomials Φₙ and their product normalization Φ̂ₙ, Ramanujan sums
//! cₙ(m), truncated products P_N(z) inside the unit disk, and formal
//! log-series over exact rationals — and verifies each identity with an
//! explicit residual/tolerance report.
//!
//! Module map:
//! - [`arith`]: factorization, sieves, μ/φ/σ, divisor classes, r₂
//! - [`zeta`]: ζ(s) for real s > 1 with a rigorous error bound
//! - [`ramanujan`]: cₙ(m) by definition and closed form, tables, S_N(m)
//! - [`cyclotomic`]: exact Φₙ/Φ̂ₙ, complex logs, truncated products, grids
//! - [`series`]: truncated formal power series over exact rationals
//! - [`verify`]: one verifier per identity, emitting `VerificationReport`s
//! - [`cache`]: checksummed binary cache for sieves and tables

pub mod arith;
pub mod cache;
pub mod cyclotomic;
pub mod error;
pub mod hp;
pub mod ramanujan;
pub mod series;
pub mod verify;
pub mod zeta;

pub use rug;

pub use arith::{Factorization, SieveTables};
pub use cyclotomic::{GridRow, IntPoly, ProductValue};
pub use error::{Error, Result};
pub use ramanujan::{CnTable, PartialSumTrace};
pub use series::RationalSeries;
pub use verify::{IdentityId, VerificationReport};
