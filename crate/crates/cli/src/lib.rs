//! Problem-file parsing, output formatting, and instance generation behind
//! the `omnicap` binary. Kept as a library so integration tests can drive
//! the same code paths the binary uses.

pub mod auction;
pub mod output;
pub mod problem;

/// CLI-level error split by exit code: bad input exits 2, a size cap
/// exits 3.
#[derive(Debug)]
pub enum CliError {
    /// Malformed files, invalid flags, violated invariants.
    Input(String),
    /// Instance exceeds a documented resource cap.
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Resource(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Resource(m) => m,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.message())
    }
}

impl std::error::Error for CliError {}

impl From<omnicap_core::Error> for CliError {
    fn from(e: omnicap_core::Error) -> Self {
        match e {
            omnicap_core::Error::ResourceCap(m) => CliError::Resource(m),
            omnicap_core::Error::InvalidArgument(m) | omnicap_core::Error::InvalidInput(m) => {
                CliError::Input(m)
            }
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
