//! Exact middle convolution of monodromy tuples.
//!
//! The crate is organised bottom-up:
//!
//! * [`fields`]: rationals, cyclotomic fields and finite fields;
//! * [`linalg`]: dense exact linear algebra over any of them;
//! * [`tuples`]: monodromy tuples, rank-one twists, local census;
//! * [`convolution`]: the middle convolution functor on tuples;
//! * [`group`]: residual analysis over finite fields;
//! * [`pipeline`]: the four convolution families and their reports.

pub mod error;
pub mod fields;
pub mod linalg;
pub mod tuples;
pub mod convolution;
pub mod group;
pub mod pipeline;

pub use error::{Error, Result};
