//! Group-level dynamics of finitely generated affine actions on ℝ^q.
//!
//! The crate works entirely on the transversal: a foliation with transversally
//! affine structure is represented by its global holonomy group, a finitely
//! generated subgroup of Aff(ℝ^q), and attractors of the foliation are read off
//! from attractors of that group.
//!
//! - [`affine`]: the affine group, words over generator sets, commutators and
//!   fixed-point linearization.
//! - [`dynamics`]: orbit enumeration, contraction certificates, limit points,
//!   attractor and minimal-set detection.
//! - [`suspension`]: presentations, representations and suspended foliations,
//!   with leaf classification and attractor lifting.
//! - [`oracle`] (feature `oracle`): deliberately naive reference computations.
//!
//! The crate is `no_std` and only needs `alloc`. The `parallel` feature fans
//! out per-sample evidence and orbit expansion over rayon without changing any
//! result.
#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod affine;
pub mod dynamics;
mod error;
pub mod linalg;
#[cfg(any(test, feature = "oracle"))]
pub mod oracle;
pub mod suspension;
pub mod word;

pub use affine::{AffineMap, GeneratorSet};
pub use error::Error;
pub use linalg::LinearMap;
pub use word::{Letter, Word};

/// A point of ℝ^q.
pub type Point = alloc::vec::Vec<f64>;

/// Euclidean distance between two points of equal dimension.
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Euclidean norm.
pub fn norm(a: &[f64]) -> f64 {
    libm::sqrt(a.iter().map(|x| x * x).sum())
}
