use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error(transparent)]
    Core(#[from] besovkit_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for configuration and parameter errors, 3 for geometry, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use besovkit_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Geometry(_) => 3,
            CliError::Core(
                E::InvalidParameter(_) | E::Supercritical | E::NonConvexRange | E::SizeCap { .. },
            ) => 2,
            CliError::Core(E::EmptyDomain | E::CoverGap(_) | E::EmptyIntersection) => 3,
            _ => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use besovkit_core::Error as E;

    #[test]
    fn exit_codes_by_kind() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        assert_eq!(CliError::Core(E::Supercritical).exit_code(), 2);
        assert_eq!(CliError::Geometry("x".into()).exit_code(), 3);
        assert_eq!(CliError::Core(E::EmptyDomain).exit_code(), 3);
        assert_eq!(CliError::CheckFailed("x".into()).exit_code(), 1);
    }
}
