//! Products of i.i.d. random matrices: cocycles, Lyapunov exponents,
//! stationary measures on projective space, the explicit corrector solving
//! the cohomological equation for the norm cocycle, and Monte Carlo harnesses
//! for the associated martingale limit theorems.

pub mod cocycle;
pub mod error;
pub mod export;
pub mod group;
pub mod harness;
pub mod limit;
pub mod linalg;
pub mod martingale;
pub mod rng;
pub mod stationary;
pub mod stats;

pub use error::{Error, Result};
pub use group::{GeneratorMeasure, WalkSampler};
pub use linalg::{DualProjectivePoint, ProjectivePoint, SquareMatrix};
