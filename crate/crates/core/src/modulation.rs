use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// Symbol alphabet of the authentication stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Modulation {
    /// Real Gaussian codebook, capacity `½ log2(1 + Γ)`.
    GaussianReal,
    /// Antipodal real signalling on a real AWGN channel.
    Bpsk,
    /// Constant-envelope M-PSK on a complex AWGN channel.
    Mpsk(u32),
}

impl Modulation {
    pub fn validate(self) -> Result<Self> {
        if let Modulation::Mpsk(m) = self {
            if m < 2 || !m.is_power_of_two() {
                return Err(invalid("modulation", format!("PSK order {m} must be a power of two >= 2")));
            }
        }
        Ok(self)
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulation::GaussianReal => write!(f, "gaussian"),
            Modulation::Bpsk => write!(f, "bpsk"),
            Modulation::Mpsk(m) => write!(f, "psk{m}"),
        }
    }
}

impl FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "gaussian" | "gauss" => return Ok(Modulation::GaussianReal),
            "bpsk" => return Ok(Modulation::Bpsk),
            _ => {}
        }
        let order = s
            .strip_prefix("psk")
            .or_else(|| s.strip_prefix("mpsk"))
            .and_then(|m| m.parse::<u32>().ok())
            .ok_or_else(|| invalid("modulation", format!("unrecognized `{s}`")))?;
        Modulation::Mpsk(order).validate()
    }
}
