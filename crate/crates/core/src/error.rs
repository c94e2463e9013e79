use thiserror::Error;

/// Every failure the library can report.
///
/// The variants are grouped by how a caller is expected to react: malformed
/// input (`Parse`, `Format`, `Truncated`), a broken mathematical contract
/// (`Contract`, `Kraft`, `Domain`), or a configured resource cap being hit
/// (`ResourceCap`, `Overflow`).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dyadic exponent {exponent} exceeds the configured limit {limit}")]
    Overflow { exponent: u64, limit: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("Kraft inequality violated by the prefix of length {prefix_len}")]
    Kraft { prefix_len: String },

    #[error("resource cap reached: {what} (limit {limit})")]
    ResourceCap { what: String, limit: u64 },

    #[error("bit stream truncated at bit offset {bit_offset}")]
    Truncated { bit_offset: u64 },

    #[error("format error at byte offset {offset}: {message}")]
    Format { offset: u64, message: String },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn cap(what: impl Into<String>, limit: u64) -> Self {
        Error::ResourceCap {
            what: what.into(),
            limit,
        }
    }

    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }

    pub(crate) fn format(offset: u64, message: impl Into<String>) -> Self {
        Error::Format {
            offset,
            message: message.into(),
        }
    }

    /// Stable process exit code for this error class.
    ///
    /// 2 = parse/format, 3 = resource cap, 4 = contract violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Format { .. } | Error::Truncated { .. } => 2,
            Error::ResourceCap { .. } | Error::Overflow { .. } => 3,
            Error::Contract(_) | Error::Kraft { .. } | Error::Domain(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
