use crate::error::{invalid, Result};
use crate::quantizer::QuantizerSpec;

/// Powers and impairments of one protocol run. All powers are linear and
/// referred to the output of the unit-norm despreading correlator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelScene {
    pub sigma2_x: f64,
    /// Artificial-noise power `σ²_{w*}`.
    pub sigma2_an: f64,
    pub sigma2_wb: f64,
    pub sigma2_we: f64,
    /// AN quantizer; its scale is re-targeted at `sigma2_an` on use.
    pub quantizer: QuantizerSpec,
    /// Authentication-vs-navigation delay in seconds.
    pub epsilon: f64,
}

impl Default for ChannelScene {
    fn default() -> Self {
        Self {
            sigma2_x: 1.0,
            sigma2_an: 1.0,
            sigma2_wb: 10f64.powf(-0.5),
            sigma2_we: 0.0,
            quantizer: QuantizerSpec::infinite(),
            epsilon: 0.0,
        }
    }
}

impl ChannelScene {
    pub fn with_an(mut self, sigma2_an: f64) -> Self {
        self.sigma2_an = sigma2_an;
        self
    }

    pub fn with_bob_noise(mut self, sigma2_wb: f64) -> Self {
        self.sigma2_wb = sigma2_wb;
        self
    }

    pub fn with_eve_noise(mut self, sigma2_we: f64) -> Self {
        self.sigma2_we = sigma2_we;
        self
    }

    pub fn with_quantizer(mut self, quantizer: QuantizerSpec) -> Self {
        self.quantizer = quantizer;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("sigma2_x", self.sigma2_x),
            ("sigma2_an", self.sigma2_an),
            ("sigma2_wb", self.sigma2_wb),
            ("sigma2_we", self.sigma2_we),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(name, format!("{v} must be finite and non-negative")));
            }
        }
        if !self.epsilon.is_finite() {
            return Err(invalid("epsilon", "must be finite"));
        }
        Ok(())
    }

    /// Quantizer designed for the current AN power.
    pub fn an_quantizer(&self) -> QuantizerSpec {
        self.quantizer.scaled(self.sigma2_an)
    }

    /// Residual quantization power `σ²_{w_q}`.
    pub fn sigma2_wq(&self) -> f64 {
        self.an_quantizer().residual_power()
    }

    /// Bob's SNR after AN cancellation.
    pub fn gamma_b(&self) -> f64 {
        ratio(self.sigma2_x, self.sigma2_wb + self.sigma2_wq())
    }

    /// Eve's SNR during the first phase.
    pub fn gamma_e(&self) -> f64 {
        ratio(self.sigma2_x, self.sigma2_an + self.sigma2_we)
    }
}

pub(crate) fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantizer::design_uniform_mse;

    #[test]
    fn snr_formulas() {
        let s = ChannelScene::default();
        assert!((s.gamma_b() - 10f64.powf(0.5)).abs() < 1e-12);
        assert_eq!(s.gamma_e(), 1.0);
        let q = s.with_quantizer(design_uniform_mse(3, 1.0).unwrap()).with_an(4.0);
        assert!((q.sigma2_wq() - 4.0 * design_uniform_mse(3, 1.0).unwrap().residual_power()).abs() < 1e-12);
        let clean = ChannelScene::default().with_bob_noise(0.0);
        assert_eq!(clean.gamma_b(), f64::INFINITY);
        assert!(ChannelScene::default().with_an(-1.0).validate().is_err());
    }
}
