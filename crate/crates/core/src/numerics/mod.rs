//! Deterministic tensor core: layer forward/backward passes, losses,
//! optimizers, and the finite-difference verification harness.
//!
//! Everything here is a pure function of its inputs; only optimizer steps
//! mutate parameters. Generic over [`Scalar`] so training runs in `f32`
//! while gradient checks run in `f64`.

pub mod gradcheck;
pub mod layers;
pub mod loss;
pub mod optim;
pub mod scalar;
pub mod tensor;

pub use gradcheck::{finite_diff_check, DiffFn};
pub use layers::{
    conv2d, conv2d_backward, global_avg_pool, global_avg_pool_backward, linear, linear_backward,
    lrn, lrn_backward, max_pool_backward, max_pool_with_indices, max_pool_with_indices_padded,
    max_unpool, max_unpool_backward, relu, relu_backward, ConvGrads, LinearGrads, PoolIndices,
};
pub use loss::{
    l1_loss, l1_loss_backward, per_pixel_cross_entropy, per_pixel_cross_entropy_backward,
    smooth_l1_loss, smooth_l1_loss_backward,
};
pub use optim::{OptimKind, OptimState};
pub use scalar::Scalar;
pub use tensor::Tensor;
