//! Hermitian dilations of PT-symmetric Hamiltonians.
//!
//! [`build_dilation`] handles any canonical pair, broken or not;
//! [`embed_unbroken`] builds the isometric embedding that exists only when
//! the metric is positive (`S = I`).

mod build;
mod unbroken;

pub use build::{
    build_dilation, frame_vectors, scale_frame, DilationOptions, DilationResiduals,
    DilationResult, FrameScaling, FrameVectors,
};
pub use unbroken::{embed_unbroken, EmbeddingReport, GuntherSamsonov, UnbrokenEmbedding};
