pub mod algebra;
pub mod bruhat_tits;
pub mod cohomology;
pub mod error;
pub mod metabelian;
pub mod orbifold;

pub use error::{Error, Result};
pub mod presentation;
pub mod selftest;
pub mod valuation;
