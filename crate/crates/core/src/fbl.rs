//! Finite-blocklength normal approximation: channel dispersion, the error
//! probability bound `q(Γ, R, n)`, codebook sizing for an outage target and
//! the forward-estimation success bound.

use std::f64::consts::{LN_2, LOG2_E};

use crate::error::{invalid, Error, Result};
use crate::numeric::{adaptive_simpson_rel, bisect};
use crate::special::{normal_pdf, q_function};

/// Input alphabet for the dispersion terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FblInput {
    GaussianReal,
    Bpsk,
}

impl std::fmt::Display for FblInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FblInput::GaussianReal => "gaussian",
            FblInput::Bpsk => "bpsk",
        })
    }
}

impl std::str::FromStr for FblInput {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "gauss" => Ok(FblInput::GaussianReal),
            "bpsk" => Ok(FblInput::Bpsk),
            other => Err(invalid("input", format!("`{other}` is not gaussian or bpsk"))),
        }
    }
}

/// Capacity `f` (bits) and dispersion `g` of a real AWGN channel at SNR `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FblChannel {
    pub gamma: f64,
    pub input: FblInput,
    pub f: f64,
    pub g: f64,
}

// ln(1 + e^{-2b}) without overflow.
fn softplus_neg2(b: f64) -> f64 {
    let t = -2.0 * b;
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

// Density of b ~ N(Γ, Γ).
fn llr_density(b: f64, gamma: f64) -> f64 {
    normal_pdf((b - gamma) / gamma.sqrt()) / gamma.sqrt()
}

// The integrands live on the Gaussian bulk around Γ and, at high SNR, on an
// O(1) neighbourhood of b = 0 where h(b) stops being negligible.
fn bpsk_breakpoints(gamma: f64) -> Vec<f64> {
    let spread = 10.0 * gamma.sqrt();
    let lo = (gamma - spread).min(-40.0);
    let hi = gamma + spread;
    let mut pts = vec![lo];
    for p in [-5.0, 0.0, 5.0, 40.0, gamma] {
        if p > *pts.last().unwrap() && p < hi {
            pts.push(p);
        }
    }
    pts.push(hi);
    pts
}

fn integrate_pieces<F: Fn(f64) -> f64 + Copy>(f: F, pts: &[f64]) -> Result<f64> {
    pts.windows(2)
        .map(|w| adaptive_simpson_rel(f, w[0], w[1], 1e-10, 1e-14))
        .sum()
}

/// `H^(ℓ) = E[(-h(b))^ℓ]` for `b ~ N(Γ, Γ)`, `h(b) = ln(1 + e^{-2b})`.
pub fn bpsk_h_moment(gamma: f64, order: i32) -> Result<f64> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(invalid("gamma", format!("{gamma} must be positive and finite")));
    }
    let pts = bpsk_breakpoints(gamma);
    let m = integrate_pieces(|b| softplus_neg2(b).powi(order) * llr_density(b, gamma), &pts)?;
    Ok(if order % 2 == 1 { -m } else { m })
}

/// Capacity and dispersion terms for the chosen input.
pub fn dispersion_terms(gamma: f64, input: FblInput) -> Result<FblChannel> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(invalid("gamma", format!("{gamma} must be positive and finite")));
    }
    let (f, g) = match input {
        FblInput::GaussianReal => (
            0.5 * gamma.ln_1p() / LN_2,
            gamma * (2.0 + gamma) / (2.0 * (1.0 + gamma).powi(2)),
        ),
        FblInput::Bpsk => {
            let pts = bpsk_breakpoints(gamma);
            let h1 = bpsk_h_moment(gamma, 1)?;
            // H2 - H1² evaluated as a variance so it stays positive when both are tiny.
            let g = integrate_pieces(
                |b| {
                    let d = softplus_neg2(b) + h1;
                    d * d * llr_density(b, gamma)
                },
                &pts,
            )?;
            (1.0 + h1 / LN_2, g)
        }
    };
    Ok(FblChannel { gamma, input, f, g })
}

// Argument of Q in q(Γ, R, n).
fn q_argument(ch: &FblChannel, rate: f64, n: f64) -> f64 {
    let backoff = (ch.f - rate) / LOG2_E + n.ln() / (2.0 * n);
    if ch.g == 0.0 {
        return if backoff >= 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
    }
    (n / ch.g).sqrt() * backoff
}

/// `q(Γ, R, n) = Q(sqrt(n/G)·((F - R)/log2 e + ln(n)/(2n)))`.
pub fn q_bound(gamma: f64, rate: f64, n: usize, input: FblInput) -> Result<f64> {
    if n == 0 {
        return Err(invalid("n", "blocklength must be at least 1"));
    }
    if !(rate > 0.0) {
        return Err(invalid("rate", format!("{rate} must be positive")));
    }
    let ch = dispersion_terms(gamma, input)?;
    Ok(q_function(q_argument(&ch, rate, n as f64)))
}

/// Codebook sized for a correctness outage target at Bob.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodebookDesign {
    pub n_bar: usize,
    /// `log2` of the number of codewords.
    pub log2_gamma: f64,
    pub outage_target: f64,
}

impl CodebookDesign {
    /// Rate `log2 γ / n̄` in bits per symbol.
    pub fn rate(&self) -> f64 {
        self.log2_gamma / self.n_bar as f64
    }

    /// Navigation-message-authentication baseline: `γ = 2^v` unpredictable codewords.
    pub fn nma(v: f64, n_bar: usize) -> Self {
        Self {
            n_bar,
            log2_gamma: v,
            outage_target: f64::NAN,
        }
    }
}

/// Largest `log2 γ` with `q(Γ_B, log2 γ / n̄, n̄) <= Π₀`, capped at `n̄·F`.
pub fn design_codebook(gamma_b: f64, n_bar: usize, pi0: f64, input: FblInput) -> Result<CodebookDesign> {
    if !(pi0 > 0.0 && pi0 < 0.5) {
        return Err(invalid("pi0", format!("{pi0} outside (0, 0.5)")));
    }
    if n_bar < 2 {
        return Err(invalid("n_bar", "blocklength must be at least 2"));
    }
    let ch = dispersion_terms(gamma_b, input)?;
    let n = n_bar as f64;
    let excess = |r: f64| q_function(q_argument(&ch, r, n)) - pi0;
    let lo = 1e-12;
    if excess(lo) > 0.0 {
        return Err(Error::InfeasibleDesign { pi0 });
    }
    let mut hi = ch.f.max(1e-6);
    while excess(hi) <= 0.0 {
        hi *= 2.0;
    }
    // Never size the codebook above capacity; only matters where the
    // dispersion vanishes (high-SNR binary input).
    let r = bisect(excess, lo, hi, 1e-12).min(ch.f);
    Ok(CodebookDesign {
        n_bar,
        log2_gamma: r * n,
        outage_target: pi0,
    })
}

/// Upper bound on Eve's success after observing `n` symbols:
/// `max{1 - q(Γ_E, log2 γ / n, n), 1/γ}`.
pub fn fea_success(design: &CodebookDesign, gamma_e: f64, n: usize, input: FblInput) -> Result<f64> {
    if n == 0 {
        return Err(invalid("n", "observed symbols must be at least 1"));
    }
    if n > design.n_bar {
        return Err(invalid("n", format!("{n} exceeds blocklength {}", design.n_bar)));
    }
    let floor = (-design.log2_gamma).exp2();
    if !(gamma_e > 0.0) {
        return Ok(floor);
    }
    if gamma_e.is_infinite() {
        return Ok(1.0);
    }
    let ch = dispersion_terms(gamma_e, input)?;
    let arg = q_argument(&ch, design.log2_gamma / n as f64, n as f64);
    // 1 - Q(x) = Q(-x) keeps precision when q is close to 1.
    Ok(q_function(-arg).max(floor))
}
