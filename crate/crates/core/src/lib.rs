//! Chaos-informed speech features.
//!
//! Two representations are extracted from a waveform:
//!
//! * multi-resolution Lyapunov exponent maps: the signal is cut into
//!   non-overlapping chunks at several window lengths, each chunk is
//!   delay-embedded, nearest neighbours are searched outside a Theiler
//!   window, and the slope of the mean log-divergence curve gives one
//!   local Lyapunov rate per chunk ([`lyapunov`]);
//! * multi-scale binarized recurrence plots: the signal is decimated by
//!   several strides, capped in length, and thresholded at the global mean
//!   of its pairwise distance matrix ([`recurrence`]).
//!
//! Supporting modules cover WAV I/O and preprocessing ([`audio_io`]),
//! objective metrics ([`metrics`]), and deterministic test signals
//! ([`synth`]).

pub mod audio_io;
pub mod cli;
pub mod embedding;
mod error;
pub mod format;
pub mod lyapunov;
pub mod metrics;
pub mod recurrence;
pub mod synth;

pub use audio_io::Signal;
pub use embedding::{DelayEmbedding, NeighborAssignment, NeighborBackend};
pub use error::{Error, Result};
pub use lyapunov::{DivergenceCurve, ExponentMap, LyapunovConfig, MultiResolutionFeatures, SlopeFit};
pub use recurrence::{MultiScaleRps, RecurrencePlot};
