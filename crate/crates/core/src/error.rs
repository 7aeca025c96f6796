use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("chunk of length {len} cannot hold an embedding with m={m}, tau={tau}")]
    EmbeddingTooShort { len: usize, m: usize, tau: usize },

    #[error("every one of {rows} rows is masked by the Theiler window {theiler}")]
    AllNeighborsMasked { rows: usize, theiler: usize },

    #[error("divergence horizon {horizon} is too short to fit a slope")]
    EmptyHorizon { horizon: usize },

    #[error("divergence curve is not finite at step {step}")]
    NonFiniteDivergence { step: usize },

    #[error("signal of length {len} is shorter than the required {required} samples")]
    SignalTooShort { len: usize, required: usize },

    #[error("input is empty")]
    EmptyInput,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("channel {channel} has {len} frames, expected {expected}")]
    ChannelLengthMismatch { channel: usize, len: usize, expected: usize },

    #[error("target rate {low_rate} Hz must be below the signal rate {sample_rate} Hz")]
    Rate { low_rate: u32, sample_rate: u32 },

    #[error("length mismatch: reference has {reference} samples, estimate has {estimate}")]
    LengthMismatch { reference: usize, estimate: usize },

    #[error("sample rate mismatch: reference is {reference} Hz, estimate is {estimate} Hz")]
    RateMismatch { reference: u32, estimate: u32 },

    #[error("reference signal has zero energy")]
    ZeroReference,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {detail}")]
    Format { path: PathBuf, detail: String },
}

impl Error {
    /// True for the per-chunk failures that the exponent map replaces with
    /// a substitute value instead of aborting.
    pub fn is_degenerate_chunk(&self) -> bool {
        matches!(
            self,
            Error::EmbeddingTooShort { .. }
                | Error::AllNeighborsMasked { .. }
                | Error::EmptyHorizon { .. }
                | Error::NonFiniteDivergence { .. }
        )
    }
}
