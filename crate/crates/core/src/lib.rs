//! Shape retrieval by symbolic contour strings.
//!
//! A binary shape image is reduced to its outer contour, resampled to a fixed
//! number of points and turned into a string over the nine-letter alphabet
//! `A..F, S, M, L`. Each contour point contributes one symbol triple: the
//! quantized angle subtended at the centroid by a pair of points walked in
//! lockstep, followed by the quantized centroid distances of both points.
//! Shapes are compared by a Needleman-Wunsch alignment of their strings with
//! exact rational substitution scores.
//!
//! The crate also carries the pairwise registration stage (log-polar shape
//! contexts, a cyclic dynamic-programming correspondence and rigid Procrustes
//! alignment) and a retrieval harness with bulls-eye style metrics and an
//! occlusion sweep.
//!
//! ```
//! use shapeseq::seqalign::{align_score, AlignParams};
//!
//! let a = "BLMALSCMM".parse().unwrap();
//! let b = "AMLALM".parse().unwrap();
//! let result = align_score(&a, &b, &AlignParams::default());
//! assert_eq!(result.score, 7.into());
//! ```

pub mod cli;
pub mod config;
pub mod error;
pub mod geometry;
pub mod pipeline;
pub mod procrustes;
pub mod retrieval;
pub mod seqalign;
pub mod shape_context;
pub mod symbolic;
pub mod synth;

pub use error::{Error, Result};
pub use geometry::{BinaryImage, Contour, Orientation, Point};
pub use seqalign::{AlignParams, AlignmentResult, Score, SubstitutionMatrix, Symbol, SymbolString};
