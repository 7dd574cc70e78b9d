use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error(
        "no edge scale available: noise level tau is zero or unset and `e` was not given \
         (supply `e`, a positive `tau`, or resolve against a point cloud)"
    )]
    EdgeScaleUnknown,

    #[error("invalid dataset spec: {0}")]
    InvalidSpec(String),

    #[error("invalid point cloud: {0}")]
    InvalidCloud(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("degenerate simplex pair: {0}")]
    Degenerate(String),

    #[error("no valid simplices survived the edge-length/distortion filter")]
    EmptyValidSet,

    #[error("denoising removed every simplex (eta = {eta})")]
    NoSurvivors { eta: f64 },

    #[error("all kNN distances are infinite; no elbow can be located")]
    AllInfinite,

    #[error("elbow detection needs at least 3 finite values, got {0}")]
    TooFewValues(usize),

    #[error("no nontrivial component at any scale; cluster count is undefined")]
    NoClusters,

    #[error("node id {id} out of range for {len} nodes")]
    OutOfRange { id: usize, len: usize },

    #[error("point {0} is not contained in any surviving simplex")]
    Uncovered(usize),

    #[error("node-level distance needs n <= {limit}, got n = {n}")]
    TooLarge { n: usize, limit: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("no labeled points to propagate labels from")]
    NoLabels,

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParam {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
