pub mod analysis;
pub mod arith;
pub mod charsums;
pub mod cli;
pub mod coefficients;
pub mod ddouble;
pub mod deltamethod;
pub mod error;
pub mod expsums;
pub mod hardy;
pub mod selftest;
pub mod summation;

pub use error::{LabError, Result};
