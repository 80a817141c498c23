use serde::Serialize;

use super::EvalError;

/// Fidelity `F = 100·E_min/E` of a candidate with error `e` against the
/// optimal error `e_min`. Both zero counts as a perfect score.
pub fn fidelity(e_min: f64, e: f64) -> Result<f64, EvalError> {
    if e_min < 0.0 || e < 0.0 {
        return Err(EvalError::NegativeError { e_min, e });
    }
    if e == 0.0 {
        return if e_min == 0.0 {
            Ok(100.0)
        } else {
            Err(EvalError::ZeroDenominator { e_min })
        };
    }
    Ok(100.0 * e_min / e)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityReport {
    #[serde(rename = "E_min")]
    pub e_min: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "fidelity")]
    pub f: f64,
}

impl FidelityReport {
    pub fn new(e_min: f64, e: f64) -> Result<Self, EvalError> {
        Ok(FidelityReport {
            e_min,
            e,
            f: fidelity(e_min, e)?,
        })
    }
}
