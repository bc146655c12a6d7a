//! Free-group computation toolkit built around Lee's C-test words.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! - [`word`]: exact arithmetic on freely reduced words over `F_m`;
//! - [`expr`]: compressed power-expression DAGs for words far too long to expand;
//! - [`oracle`]: Monte Carlo word equality through a faithful `SL(2, Z)` representation
//!   evaluated modulo random primes;
//! - [`group`]: commutation, cyclicity, single and simultaneous conjugacy;
//! - [`construct`]: the words `w_2`, `u` and `v_n`;
//! - [`endo`]: endomorphisms given by generator images.
#![no_std]

extern crate alloc;

pub mod construct;
pub mod endo;
mod error;
pub mod expr;
pub mod group;
pub mod oracle;
pub mod word;

pub use error::Error;
pub use expr::Expr;
pub use word::{Letter, Rank, Word};

pub type Result<T, E = Error> = core::result::Result<T, E>;
