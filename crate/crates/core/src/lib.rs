//! Field phenotyping from multi-channel plot rasters.
//!
//! The pipeline has three trainable stages built from a small deterministic
//! tensor core:
//!
//! 1. **Segmentation** — an encoder/decoder network with index-preserving
//!    max-unpooling produces a relaxed (recall-first) plant mask for a plot.
//! 2. **Emergence counting** — connected components of the mask become
//!    224×224 black-padded patches; a convolutional regressor predicts a
//!    per-patch plant count and the plot total is the rounded sum.
//! 3. **Biomass regression** — a convolutional regressor maps selected
//!    raster channels (color bands and/or DEM height) to dry weight, trained
//!    on a pool expanded by randomized minimal region swapping (RMRS) of
//!    SLIC superpixels.
//!
//! Supporting modules provide CAM saliency maps, MAD/SDAD/%D evaluation
//! metrics, a statistical-height-feature + linear-regression baseline, and a
//! synthetic plot generator that supplies labeled data at desk scale.
//!
//! The numeric core is generic over the scalar type (`f32` for training,
//! `f64` for gradient verification); concrete aliases live at the crate
//! root.

pub mod augment;
pub mod baselines;
pub mod error;
pub mod imaging;
pub mod metrics;
pub mod netblocks;
pub mod numerics;
pub mod phenopipe;
pub mod rng;
pub mod synthdata;

pub use error::{Error, Result};
pub use numerics::scalar::Scalar;
pub use numerics::tensor::Tensor;

/// Training-precision tensor.
pub type Tensor32 = Tensor<f32>;
/// Verification-precision tensor (finite-difference harness).
pub type Tensor64 = Tensor<f64>;
/// Parameter store at training precision.
pub type ModelParams32 = netblocks::ModelParams<f32>;
/// Parameter store at verification precision.
pub type ModelParams64 = netblocks::ModelParams<f64>;
