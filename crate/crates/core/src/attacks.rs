//! Attack analysis: delay attack, symbol prediction and forward estimation.

use rayon::prelude::*;

use crate::capacity::secrecy_capacity;
use crate::curve::BoundCurve;
use crate::error::{invalid, Result};
use crate::fbl::{design_codebook, fea_success, CodebookDesign, FblInput};
use crate::linear_to_db;
use crate::modulation::Modulation;
use crate::scene::{ratio, ChannelScene};
use crate::special::normal_cdf;
use crate::waveforms::SymbolWaveforms;

/// Delay-attack quantities at one delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayPoint {
    pub epsilon: f64,
    pub alpha: f64,
    pub beta: f64,
    pub nu: f64,
    /// Bob's SNR under the attack.
    pub gamma_b_prime: f64,
    pub c_a: f64,
}

/// `Γ'_B = α²σ²_x / (β²σ²_x + σ²_{w_B} + σ²_{w_q} + 2σ²_{w*}(1 - ν))`.
///
/// Inter-symbol leakage is counted as noise power; the AN mismatch adds to
/// the static quantization residual.
pub fn delayed_bob_snr(scene: &ChannelScene, alpha: f64, beta: f64, nu: f64) -> f64 {
    let mismatch = 2.0 * scene.sigma2_an * (1.0 - nu).max(0.0);
    let den = beta * beta * scene.sigma2_x + scene.sigma2_wb + scene.sigma2_wq() + mismatch;
    ratio(alpha * alpha * scene.sigma2_x, den)
}

pub fn delay_attack_points(
    waveforms: &SymbolWaveforms,
    scene: &ChannelScene,
    modulation: Modulation,
    epsilon_grid: &[f64],
) -> Result<Vec<DelayPoint>> {
    scene.validate()?;
    let gamma_e = scene.gamma_e();
    epsilon_grid
        .par_iter()
        .map(|&epsilon| {
            let (alpha, beta) = waveforms.cross_gains(epsilon)?;
            let nu = waveforms.an_correlation(epsilon)?;
            let gamma_b_prime = delayed_bob_snr(scene, alpha, beta, nu);
            let c_a = secrecy_capacity(gamma_b_prime, gamma_e, modulation)?;
            Ok(DelayPoint {
                epsilon,
                alpha,
                beta,
                nu,
                gamma_b_prime,
                c_a,
            })
        })
        .collect()
}

/// `C_A(ε)` with the abscissa in chip periods.
pub fn delay_attack_curve(
    waveforms: &SymbolWaveforms,
    scene: &ChannelScene,
    modulation: Modulation,
    epsilon_grid: &[f64],
) -> Result<BoundCurve> {
    let tc = waveforms.chip_period();
    let pts = delay_attack_points(waveforms, scene, modulation, epsilon_grid)?
        .into_iter()
        .map(|p| (p.epsilon / tc, p.c_a))
        .collect();
    Ok(BoundCurve::new(
        format!("delay_{}_{modulation}", waveforms.pulse().kind().name()),
        "epsilon_over_tc",
        "c_a",
        pts,
    )?
    .with_meta("pulse", waveforms.pulse().kind().name())
    .with_meta("modulation", modulation)
    .with_meta("sigma2_an_db", linear_to_db(scene.sigma2_an))
    .with_meta("sigma2_wb_db", linear_to_db(scene.sigma2_wb)))
}

/// Smallest delay at which `C_A` falls below the secrecy rate `r_s`,
/// interpolated between grid points. `None` if the curve never drops below.
pub fn detectable_delay_threshold(curve: &BoundCurve, r_s: f64) -> Result<Option<f64>> {
    let c0 = curve.points[0].1;
    if r_s > c0 {
        return Err(invalid("r_s", format!("{r_s} exceeds C_A at zero delay ({c0})")));
    }
    for w in curve.points.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if y1 < r_s {
            if y0 == r_s {
                return Ok(Some(x1));
            }
            return Ok(Some(x0 + (y0 - r_s) / (y0 - y1) * (x1 - x0)));
        }
    }
    Ok(None)
}

/// Probability that Eve guesses a binary symbol after observing a fraction
/// `t_frac` of it: `1 - Q(sqrt(2 Γ_E t))`.
pub fn symbol_prediction_success(gamma_e: f64, t_frac: f64) -> Result<f64> {
    if !(t_frac > 0.0 && t_frac <= 1.0) {
        return Err(invalid("t_frac", format!("{t_frac} outside (0, 1]")));
    }
    if !(gamma_e >= 0.0) {
        return Err(invalid("gamma_e", format!("{gamma_e} must be non-negative")));
    }
    Ok(normal_cdf((2.0 * gamma_e * t_frac).sqrt()))
}

/// Forward-estimation success bound over `n_grid` for a fixed design.
pub fn fea_curve(
    label: impl Into<String>,
    design: &CodebookDesign,
    gamma_e: f64,
    input: FblInput,
    n_grid: &[usize],
) -> Result<BoundCurve> {
    let pts = n_grid
        .par_iter()
        .map(|&n| fea_success(design, gamma_e, n, input).map(|p| (n as f64, p)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundCurve::new(label, "n", "p_succ", pts)?
        .with_meta("log2_gamma", design.log2_gamma)
        .with_meta("gamma_e_db", linear_to_db(gamma_e))
        .with_meta("input", input))
}

/// NMA baseline: `v` unpredictable bits in a BPSK codeword.
pub fn nma_curve(v: f64, n_bar: usize, gamma_e: f64, n_grid: &[usize]) -> Result<BoundCurve> {
    let design = CodebookDesign::nma(v, n_bar);
    Ok(fea_curve(format!("nma_v{v}"), &design, gamma_e, FblInput::Bpsk, n_grid)?.with_meta("v", v))
}

/// Design plus forward-estimation series for one scene.
#[derive(Debug, Clone, PartialEq)]
pub struct FeaReport {
    pub design: CodebookDesign,
    /// Eve behind the artificial noise: `Γ_E = σ²_x / (σ²_{w*} + σ²_{w_E})`.
    pub with_an: BoundCurve,
    /// Same receivers without AN: `Γ_E = σ²_x / σ²_{w_E}`.
    pub no_an: BoundCurve,
    pub nma: Vec<BoundCurve>,
}

/// Sizes the codebook for Bob at `Γ_B` and evaluates Eve's success bound
/// with and without AN, plus NMA baselines at the no-AN SNR.
pub fn fea_report(
    scene: &ChannelScene,
    n_bar: usize,
    pi0: f64,
    input: FblInput,
    n_grid: &[usize],
    nma_v: &[f64],
) -> Result<FeaReport> {
    scene.validate()?;
    let design = design_codebook(scene.gamma_b(), n_bar, pi0, input)?;
    let with_an = fea_curve("with_an", &design, scene.gamma_e(), input, n_grid)?;
    let gamma_e_plain = ratio(scene.sigma2_x, scene.sigma2_we);
    let no_an = fea_curve("no_an", &design, gamma_e_plain, input, n_grid)?;
    let nma = nma_v
        .iter()
        .map(|&v| nma_curve(v, n_bar, gamma_e_plain, n_grid))
        .collect::<Result<Vec<_>>>()?;
    Ok(FeaReport {
        design,
        with_an,
        no_an,
        nma,
    })
}

/// Outcome of a replay (meaconing) attack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplayAssessment {
    pub success_probability: f64,
    pub note: &'static str,
}

/// Replay is not analysed: a noiseless relay reproduces the signal exactly,
/// so it always succeeds against any signal-level scheme.
pub fn replay_attack() -> ReplayAssessment {
    ReplayAssessment {
        success_probability: 1.0,
        note: "a noiseless replay is indistinguishable from the genuine signal; not modelled",
    }
}
