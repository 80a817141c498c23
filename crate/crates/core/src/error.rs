use thiserror::Error;

/// Errors raised by the simplification engines and the multiresolution driver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimplifyError {
    #[error("segment count {k} out of range 1..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("corridor half-width must be at least 1, got {0}")]
    BadBeta(usize),
    #[error("decimation factor must lie strictly between 0 and 1, got {0}")]
    BadRho(f64),
    #[error("exhaustive search limited to N <= 24 and K <= 8, got N = {n}, K = {k}")]
    InstanceTooLarge { n: usize, k: usize },
    #[error("level {level} out of range 0..={max}")]
    LevelOutOfRange { level: usize, max: usize },
}

pub(crate) fn check_k(k: usize, vertices: usize) -> Result<(), SimplifyError> {
    let max = vertices - 1;
    if k == 0 || k > max {
        return Err(SimplifyError::KOutOfRange { k, max });
    }
    Ok(())
}
