//! Weighted p-radial distributions on ℓ_p^n-balls and matrix p-balls.
//!
//! Exact samplers for cone, uniform and mixture laws, Metropolis-within-Gibbs
//! sampling of weighted base densities, spectral samplers for matrix balls,
//! rate-function evaluation and the numerical tools they depend on.
//! The crate is `no_std` and needs only `alloc`.

// Modules import `num_traits::Float` for no_std builds; when std is linked the
// inherent float methods shadow it, hence the `allow(unused_imports)` markers.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dist;
pub mod error;
pub mod ldp;
pub mod lpgeom;
pub mod matrix;
pub mod mcmc;
pub mod measure;
pub mod quad;
pub mod rng;
pub mod special;
pub mod stats;
pub mod weight;

pub use dist::{RadialLawW, TabulatedW, WVariant};
pub use error::{Error, Result};
pub use lpgeom::{Orthant, PBallSample, PsiSpec};
pub use matrix::{EnsembleSpec, MatrixKind, SpectralSample};
pub use mcmc::ChainConfig;
pub use measure::{MeasureRep, Support};
pub use rng::RngStream;
pub use weight::WeightFn;
