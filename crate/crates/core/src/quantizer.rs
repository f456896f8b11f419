//! Uniform MSE-optimal quantizer for the revealed artificial-noise samples.

use crate::error::{invalid, Result};
use crate::numeric::golden_section;
use crate::special::{normal_pdf, q_function};

/// Quantizer resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Resolution {
    Bits(u32),
    Infinite,
}

impl std::fmt::Display for Resolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Resolution::Bits(b) => write!(f, "{b}"),
            Resolution::Infinite => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for Resolution {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinite") {
            return Ok(Resolution::Infinite);
        }
        s.parse::<u32>()
            .map(Resolution::Bits)
            .map_err(|_| invalid("bits", format!("`{s}` is neither an integer nor `inf`")))
    }
}

/// A symmetric midrise quantizer with `2^b` levels at `(i + ½)·step`,
/// designed for a zero-mean Gaussian source of standard deviation `scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizerSpec {
    resolution: Resolution,
    /// Step for a unit-variance source.
    step_unit: f64,
    /// Design MSE for a unit-variance source.
    mse_unit: f64,
    scale: f64,
}

impl QuantizerSpec {
    /// The identity quantizer.
    pub fn infinite() -> Self {
        Self {
            resolution: Resolution::Infinite,
            step_unit: 0.0,
            mse_unit: 0.0,
            scale: 1.0,
        }
    }

    pub fn design(resolution: Resolution, sigma2: f64) -> Result<Self> {
        match resolution {
            Resolution::Infinite => Ok(Self::infinite().scaled(sigma2)),
            Resolution::Bits(b) => design_uniform_mse(b, sigma2),
        }
    }

    /// Same design re-targeted at source power `sigma2`.
    pub fn scaled(mut self, sigma2: f64) -> Self {
        self.scale = sigma2.max(0.0).sqrt();
        self
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn step(&self) -> f64 {
        self.step_unit * self.scale
    }

    pub fn step_unit(&self) -> f64 {
        self.step_unit
    }

    pub fn mse_unit(&self) -> f64 {
        self.mse_unit
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn level_count(&self) -> Option<usize> {
        match self.resolution {
            Resolution::Bits(b) => Some(1usize << b),
            Resolution::Infinite => None,
        }
    }

    /// Reconstruction levels in ascending order; empty for the identity quantizer.
    pub fn levels(&self) -> Vec<f64> {
        let Some(k) = self.level_count() else {
            return Vec::new();
        };
        let half = (k / 2) as f64;
        (0..k).map(|i| (i as f64 - half + 0.5) * self.step()).collect()
    }

    pub fn quantize_one(&self, w: f64) -> f64 {
        let Some(k) = self.level_count() else {
            return w;
        };
        let step = self.step();
        if step == 0.0 {
            return 0.0;
        }
        let half = (k / 2) as i64;
        let idx = ((w / step).floor() as i64 + half).clamp(0, k as i64 - 1);
        (idx - half) as f64 * step + 0.5 * step
    }

    /// Design-time residual power `σ²_{w_q}` at the current scale.
    pub fn residual_power(&self) -> f64 {
        self.mse_unit * self.scale * self.scale
    }
}

/// Maps every sample to its nearest level, saturating at the outer levels.
pub fn quantize(spec: &QuantizerSpec, samples: &[f64]) -> Vec<f64> {
    samples.iter().map(|&w| spec.quantize_one(w)).collect()
}

/// Residual power of `spec` re-targeted at source power `sigma2`.
pub fn residual_power(spec: &QuantizerSpec, sigma2: f64) -> f64 {
    spec.scaled(sigma2).residual_power()
}

/// MSE of the `2^bits`-level midrise quantizer with `step` on a unit Gaussian.
pub fn uniform_mse_unit(bits: u32, step: f64) -> f64 {
    let k = 1usize << bits;
    let half = k / 2;
    // Positive half-line; cell i covers [i·step, (i+1)·step) with level (i+½)·step,
    // the last cell extending to infinity.
    let mut total = 0.0;
    for i in 0..half {
        let a = i as f64 * step;
        let c = a + 0.5 * step;
        let b = if i + 1 == half { f64::INFINITY } else { a + step };
        total += cell_moment(a, b, c);
    }
    2.0 * total
}

// ∫_a^b (w - c)² φ(w) dw for 0 <= a < b <= ∞.
fn cell_moment(a: f64, b: f64, c: f64) -> f64 {
    let mass = q_function(a) - q_function(b);
    let (pa, pb) = (normal_pdf(a), if b.is_finite() { normal_pdf(b) } else { 0.0 });
    let bpb = if b.is_finite() { b * pb } else { 0.0 };
    // ∫w²φ = mass + aφ(a) - bφ(b);  ∫wφ = φ(a) - φ(b)
    (mass + a * pa - bpb) - 2.0 * c * (pa - pb) + c * c * mass
}

/// Designs the MSE-optimal step for `bits` over a Gaussian source of power `sigma2`.
pub fn design_uniform_mse(bits: u32, sigma2: f64) -> Result<QuantizerSpec> {
    if !(1..=16).contains(&bits) {
        return Err(invalid("bits", format!("{bits} outside 1..=16")));
    }
    if !(sigma2 >= 0.0 && sigma2.is_finite()) {
        return Err(invalid("sigma2", format!("{sigma2} must be finite and non-negative")));
    }
    let k = (1u64 << bits) as f64;
    let step_unit = golden_section(|s| uniform_mse_unit(bits, s), 0.5 / k, 16.0 / k, 1e-7);
    Ok(QuantizerSpec {
        resolution: Resolution::Bits(bits),
        step_unit,
        mse_unit: uniform_mse_unit(bits, step_unit),
        scale: sigma2.sqrt(),
    })
}
