//! Channel description documents.
//!
//! Raw form:
//!
//! ```json
//! {
//!   "users": [{"gain_receiver": 4, "gain_eavesdropper": 1, "power_max": 5}],
//!   "noise_var_receiver": 2,
//!   "noise_var_eavesdropper": 1,
//!   "rate_unit": "bits"
//! }
//! ```
//!
//! With `"standard": true` each user's `gain_eavesdropper` and `power_max`
//! are already the standardized `h_k` and `P_k,max`; receiver gains and noise
//! variances may be omitted and must equal 1 if given.

use gmacwt::{standardize, ChannelParams, RateUnit, StandardChannel};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDoc {
    pub users: Vec<UserDoc>,
    pub noise_var_receiver: Option<f64>,
    pub noise_var_eavesdropper: Option<f64>,
    pub rate_unit: Option<RateUnit>,
    #[serde(default)]
    pub standard: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserDoc {
    pub gain_receiver: Option<f64>,
    pub gain_eavesdropper: f64,
    pub power_max: f64,
}

/// Standard-form document, as written by `standardize` and accepted back as
/// input.
#[derive(Debug, Clone, Serialize)]
pub struct StandardDoc {
    pub standard: bool,
    pub rate_unit: RateUnit,
    pub users: Vec<StandardUser>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StandardUser {
    pub gain_eavesdropper: f64,
    pub power_max: f64,
}

impl StandardDoc {
    pub fn from_channel(ch: &StandardChannel) -> Self {
        Self {
            standard: true,
            rate_unit: ch.rate_unit(),
            users: ch
                .h()
                .iter()
                .zip(ch.p_max())
                .map(|(&h, &p)| StandardUser {
                    gain_eavesdropper: h,
                    power_max: p,
                })
                .collect(),
        }
    }
}

impl ChannelDoc {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::Validation(format!("channel document: {e}")))
    }

    pub fn into_channel(self) -> Result<StandardChannel, CliError> {
        let unit = self.rate_unit.unwrap_or_default();
        if self.standard {
            for (name, v) in [
                ("noise_var_receiver", self.noise_var_receiver),
                ("noise_var_eavesdropper", self.noise_var_eavesdropper),
            ] {
                if v.is_some_and(|v| v != 1.0) {
                    return Err(CliError::Validation(format!(
                        "invalid `{name}`: must be 1 (or omitted) when `standard` is true"
                    )));
                }
            }
            if let Some(i) = self
                .users
                .iter()
                .position(|u| u.gain_receiver.is_some_and(|g| g != 1.0))
            {
                return Err(CliError::Validation(format!(
                    "invalid `users[{i}].gain_receiver`: must be 1 (or omitted) when `standard` is true"
                )));
            }
            let h = self.users.iter().map(|u| u.gain_eavesdropper).collect();
            let p = self.users.iter().map(|u| u.power_max).collect();
            return Ok(StandardChannel::new(h, p, unit)?);
        }

        let mut gains_to_receiver = Vec::with_capacity(self.users.len());
        for (i, u) in self.users.iter().enumerate() {
            gains_to_receiver.push(u.gain_receiver.ok_or_else(|| {
                CliError::Validation(format!(
                    "missing `users[{i}].gain_receiver` (required unless `standard` is true)"
                ))
            })?);
        }
        let noise = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| {
                CliError::Validation(format!(
                    "missing `{name}` (required unless `standard` is true)"
                ))
            })
        };
        let raw = ChannelParams {
            gains_to_receiver,
            gains_to_eavesdropper: self.users.iter().map(|u| u.gain_eavesdropper).collect(),
            noise_var_receiver: noise("noise_var_receiver", self.noise_var_receiver)?,
            noise_var_eavesdropper: noise("noise_var_eavesdropper", self.noise_var_eavesdropper)?,
            power_limits: self.users.iter().map(|u| u.power_max).collect(),
            rate_unit: unit,
        };
        Ok(standardize(&raw)?)
    }
}
