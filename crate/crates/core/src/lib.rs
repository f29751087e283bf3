//! Finite functor categories over extriangulated categories: defects,
//! effaceable functors, Serre quotients and hearts of cotorsion pairs,
//! computed with exact linear algebra.

pub mod defloc;
pub mod error;
pub mod exactlin;
pub mod extri;
pub mod fixtures;
pub mod fpmod;
pub mod heart;
pub mod kcat;
pub mod report;
pub mod cli;

pub use error::{Error, Result};
