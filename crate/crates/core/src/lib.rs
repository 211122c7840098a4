//! Exact arithmetic for quadratic Dirichlet L-functions over F_q[T].

pub mod character;
pub mod error;
pub mod experiments;
pub mod field;
pub mod lfunction;
pub mod parallel;
pub mod poly;
pub mod special;

pub use error::{Error, Result};
