use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Logarithm base for every rate the crate reports.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RateUnit {
    #[default]
    Bits,
    Nats,
}

impl RateUnit {
    /// `½ log(1 + xi)` in this unit. The caller guarantees `xi >= 0`.
    #[inline]
    pub fn half_log1p(self, xi: f64) -> f64 {
        let nats = 0.5 * xi.ln_1p();
        match self {
            RateUnit::Nats => nats,
            RateUnit::Bits => nats / std::f64::consts::LN_2,
        }
    }
}

impl fmt::Display for RateUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RateUnit::Bits => "bits",
            RateUnit::Nats => "nats",
        })
    }
}

impl FromStr for RateUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bits" => Ok(RateUnit::Bits),
            "nats" => Ok(RateUnit::Nats),
            other => Err(Error::field(
                "rate_unit",
                format!("expected \"bits\" or \"nats\", got {other:?}"),
            )),
        }
    }
}

/// Gaussian capacity `g(xi) = ½ log(1 + xi)`.
pub fn g(xi: f64, unit: RateUnit) -> Result<f64> {
    if !(xi >= 0.0) {
        return Err(Error::field("xi", format!("must be >= 0, got {xi}")));
    }
    Ok(unit.half_log1p(xi))
}
