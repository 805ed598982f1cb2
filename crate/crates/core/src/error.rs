use thiserror::Error;

use crate::autoenc::AutoencError;
use crate::classify::ClassifyError;
use crate::dataset::DataError;
use crate::features::FeatureError;
use crate::wavelets::WaveletError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Crate-level error. Each variant wraps the error type of one module, except
/// for configuration problems and stage-tagged pipeline failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Wavelet(#[from] WaveletError),
    #[error(transparent)]
    Autoenc(#[from] AutoencError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Coarse failure class, used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Data,
    Numeric,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Config => 1,
            ErrorKind::Data => 2,
            ErrorKind::Numeric => 3,
        }
    }
}

impl Error {
    pub fn stage(stage: &'static str) -> impl FnOnce(Error) -> Error {
        move |e| Error::Stage {
            stage,
            source: Box::new(e),
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>) -> impl FnOnce(std::io::Error) -> Error {
        let path = path.as_ref().display().to_string();
        move |source| Error::Io { path, source }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Config(_) => ErrorKind::Config,
            Error::Data(_) | Error::Io { .. } => ErrorKind::Data,
            Error::Wavelet(WaveletError::UnknownWavelet(_)) => ErrorKind::Config,
            Error::Wavelet(WaveletError::SignalTooShort { .. }) => ErrorKind::Data,
            Error::Wavelet(_) => ErrorKind::Config,
            Error::Autoenc(AutoencError::InvalidConfig(_)) => ErrorKind::Config,
            Error::Autoenc(AutoencError::DimensionMismatch { .. }) => ErrorKind::Data,
            Error::Autoenc(AutoencError::ConstantSignal) => ErrorKind::Data,
            Error::Autoenc(_) => ErrorKind::Numeric,
            Error::Feature(FeatureError::InvalidConfig(_)) => ErrorKind::Config,
            Error::Feature(_) => ErrorKind::Numeric,
            Error::Classify(ClassifyError::MissingClass(_))
            | Error::Classify(ClassifyError::EmptyInput)
            | Error::Classify(ClassifyError::InvalidLabel(_))
            | Error::Classify(ClassifyError::DimensionMismatch { .. })
            | Error::Classify(ClassifyError::LengthMismatch { .. })
            | Error::Classify(ClassifyError::TooFewRows { .. }) => ErrorKind::Data,
            Error::Classify(ClassifyError::InvalidParameter(_)) => ErrorKind::Config,
            Error::Classify(_) => ErrorKind::Numeric,
            Error::Stage { source, .. } => source.kind(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind().exit_code()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_wrapping_keeps_the_inner_kind() {
        let e = Error::stage("features")(Error::Config("bad".into()));
        assert_eq!(e.exit_code(), 1);
        assert!(e.to_string().starts_with("features stage failed"));
        let e = Error::stage("autoencoder")(AutoencError::NonFinite("cost".into()).into());
        assert_eq!(e.exit_code(), 3);
    }
}
