//! Computational toolkit around the Mertens function `M(x) = Σ_{n≤x} μ(n)`.
//!
//! The crate is split the same way the work is:
//!
//! * [`sieves`]: linear and segmented sieves for μ, φ, λ, ω, σ₀, σ_k, J_k and Λ.
//! * [`mertens`]: sieved `M(1..N)` and the sublinear quotient-lattice table.
//! * [`floorsum`]: quotient blocks and `Σ M(⌊x/i⌋) f(i)` in `O(√x)` steps.
//! * [`identities`]: checks of the divisor-sum identities tied to `M(⌊x/i⌋)`.
//! * [`matrices`]: divisibility / Redheffer matrices and exact determinants.
//! * [`conjecture`]: range scans of `log(x!) > Σ M(⌊x/i⌋)² > ψ(x)`.
//! * [`records`]: champion scans of `j(x)` and `σ₀(x)` plus figure datasets.
//! * [`cli`]: the `mertens-lab` command line.

pub mod cli;
pub mod config;
pub mod conjecture;
pub mod error;
pub mod floorsum;
pub mod identities;
pub mod matrices;
pub mod mertens;
pub mod numeric;
pub mod records;
pub mod sieves;

pub use error::{Error, Result};
pub use floorsum::{blocks, weighted_msum, QuotientBlocks};
pub use mertens::{mertens_at, mertens_quotients, mertens_sieved, MertensLookup, MertensQuotientTable, MertensTable};
pub use sieves::{build_sieve, ArithFunction, PrefixSums, SieveTable};
