//! Exact certificates that uniform hypergraphs fail Sidorenko's inequality or
//! the commonness inequality, together with the census polynomials, finite
//! kernels and homomorphism-density engines behind them.

pub mod common;
pub mod density;
pub mod error;
pub mod hypergraph;
pub mod kappa;
pub mod kernel;
pub mod rational;
pub mod sampling;
pub mod search;
pub mod witness;

pub use error::{Error, Result};
