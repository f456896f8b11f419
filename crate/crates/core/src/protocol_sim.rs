//! Monte Carlo model of both protocol phases.
//!
//! Phase one: the satellite sends `s_A = p + x + w*`; Bob and Eve despread
//! the authentication component. Phase two: the quantized AN samples are
//! revealed and Bob subtracts them. Symbols are processed in fixed-size
//! batches, each driven by its own ChaCha stream, so records are
//! bit-identical for a given seed regardless of thread count.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::modulation::Modulation;
use crate::quantizer::QuantizerSpec;
use crate::waveforms::{dot, SymbolWaveforms};

pub use crate::scene::ChannelScene;

const BATCH: usize = 256;

/// Everything observed during the first phase, one entry per symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseOneRecord {
    /// Transmitted authentication symbols `x_k`.
    pub x: Vec<f64>,
    /// The symbol preceding `x_k` on air.
    pub x_prev: Vec<f64>,
    /// Aligned despread AN `w*_k`, as revealed in phase two.
    pub an: Vec<f64>,
    /// Bob's raw despread samples `x̂'_k`.
    pub bob: Vec<f64>,
    /// Eve's despread samples `x̂'_{E,k}`.
    pub eve: Vec<f64>,
    /// Navigation data `d_k`.
    pub nav_data: Vec<f64>,
    /// Noise-free composite despread with the navigation code.
    pub legacy: Vec<f64>,
    /// Applied delay in whole samples.
    pub delay_samples: usize,
}

impl PhaseOneRecord {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    fn with_capacity(n: usize, delay_samples: usize) -> Self {
        Self {
            x: Vec::with_capacity(n),
            x_prev: Vec::with_capacity(n),
            an: Vec::with_capacity(n),
            bob: Vec::with_capacity(n),
            eve: Vec::with_capacity(n),
            nav_data: Vec::with_capacity(n),
            legacy: Vec::with_capacity(n),
            delay_samples,
        }
    }

    fn append(&mut self, mut other: PhaseOneRecord) {
        self.x.append(&mut other.x);
        self.x_prev.append(&mut other.x_prev);
        self.an.append(&mut other.an);
        self.bob.append(&mut other.bob);
        self.eve.append(&mut other.eve);
        self.nav_data.append(&mut other.nav_data);
        self.legacy.append(&mut other.legacy);
    }
}

/// Bob's view after AN cancellation.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTwoRecord {
    /// Quantized AN `Q(w*_k)` received over the authenticated channel.
    pub revealed: Vec<f64>,
    /// `x̂''_k = x̂'_k - Q(w*_k)`.
    pub bob_clean: Vec<f64>,
}

fn draw_symbol(modulation: Modulation, sigma_x: f64, rng: &mut ChaCha8Rng) -> f64 {
    match modulation {
        Modulation::GaussianReal => {
            let z: f64 = rng.sample(StandardNormal);
            sigma_x * z
        }
        Modulation::Bpsk => {
            if rng.random::<bool>() {
                sigma_x
            } else {
                -sigma_x
            }
        }
        Modulation::Mpsk(m) => {
            // In-phase rail of M-PSK, rescaled to power σ²_x.
            let k = rng.random_range(0..m);
            let c = (2.0 * PI * k as f64 / m as f64).cos();
            let power: f64 = if m == 2 { 1.0 } else { 0.5 };
            sigma_x * c / power.sqrt()
        }
    }
}

struct Buffers {
    an_cur: Vec<f64>,
    an_prev: Vec<f64>,
    z_cur: Vec<f64>,
    z_prev: Vec<f64>,
    noise: Vec<f64>,
    window: Vec<f64>,
}

fn simulate_batch(
    w: &SymbolWaveforms,
    scene: &ChannelScene,
    modulation: Modulation,
    seed: u64,
    batch: usize,
    count: usize,
    shift: usize,
) -> PhaseOneRecord {
    let l = w.samples_per_symbol();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch as u64);
    let sigma_x = scene.sigma2_x.sqrt();
    let mut b = Buffers {
        an_cur: vec![0.0; l],
        an_prev: vec![0.0; l],
        z_cur: vec![0.0; l],
        z_prev: vec![0.0; l],
        noise: vec![0.0; l],
        window: vec![0.0; l],
    };
    let mut rec = PhaseOneRecord::with_capacity(count, shift);

    // Warm-up symbol: what was on air just before this batch.
    let mut x_prev = draw_symbol(modulation, sigma_x, &mut rng);
    w.projected_an_into(scene.sigma2_an, &mut rng, &mut b.an_prev);
    for j in 0..l {
        b.z_prev[j] = x_prev * w.s_t[j] + b.an_prev[j];
    }

    for _ in 0..count {
        let x = draw_symbol(modulation, sigma_x, &mut rng);
        let d = if rng.random::<bool>() { 1.0 } else { -1.0 };
        w.projected_an_into(scene.sigma2_an, &mut rng, &mut b.an_cur);
        for j in 0..l {
            b.z_cur[j] = x * w.s_t[j] + b.an_cur[j];
        }

        // Bob: navigation aligned, authentication+AN delayed by `shift`.
        w.white_noise_into(scene.sigma2_wb, &mut rng, &mut b.noise);
        for j in 0..l {
            let z = if j < shift { b.z_prev[l - shift + j] } else { b.z_cur[j - shift] };
            b.window[j] = d * w.s_p[j] + z + b.noise[j];
        }
        let bob = w.despread(&b.window);

        // Eve and the legacy receiver see the aligned composite.
        for j in 0..l {
            b.window[j] = d * w.s_p[j] + b.z_cur[j];
        }
        let legacy = w.despread_navigation(&b.window);
        w.white_noise_into(scene.sigma2_we, &mut rng, &mut b.noise);
        let eve = w.despread(&b.window) + dot(&b.noise, &w.s_r) * w.dt();

        rec.x.push(x);
        rec.x_prev.push(x_prev);
        rec.an.push(w.despread(&b.an_cur));
        rec.bob.push(bob);
        rec.eve.push(eve);
        rec.nav_data.push(d);
        rec.legacy.push(legacy);

        x_prev = x;
        std::mem::swap(&mut b.z_prev, &mut b.z_cur);
        std::mem::swap(&mut b.an_prev, &mut b.an_cur);
    }
    rec
}

fn simulate(
    w: &SymbolWaveforms,
    scene: &ChannelScene,
    n_symbols: usize,
    modulation: Modulation,
    seed: u64,
) -> Result<PhaseOneRecord> {
    scene.validate()?;
    modulation.validate()?;
    if n_symbols == 0 {
        return Err(invalid("n_symbols", "must be at least 1"));
    }
    let ts = w.symbol_period();
    if !(scene.epsilon >= 0.0 && scene.epsilon < ts) {
        // Negative delays mirror onto the successor symbol and are not modelled directly.
        return Err(Error::DelayOutOfRange {
            epsilon: scene.epsilon,
            symbol_period: ts,
        });
    }
    let shift = w.delay_to_samples(scene.epsilon).min(w.samples_per_symbol() - 1);
    let batches = n_symbols.div_ceil(BATCH);
    let parts: Vec<PhaseOneRecord> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let count = BATCH.min(n_symbols - b * BATCH);
            simulate_batch(w, scene, modulation, seed, b, count, shift)
        })
        .collect();
    let mut rec = PhaseOneRecord::with_capacity(n_symbols, shift);
    for p in parts {
        rec.append(p);
    }
    Ok(rec)
}

/// First phase with the scene's delay (zero when there is no attack).
pub fn run_phase1(
    waveforms: &SymbolWaveforms,
    scene: &ChannelScene,
    n_symbols: usize,
    modulation: Modulation,
    seed: u64,
) -> Result<PhaseOneRecord> {
    simulate(waveforms, scene, n_symbols, modulation, seed)
}

/// Second phase: subtract the revealed, quantized AN from Bob's samples.
///
/// Under a delay Bob still subtracts the aligned-frame `Q(w*_k)`; the
/// mismatch with the delayed AN he actually received is what exposes the attack.
pub fn run_phase2(phase1: &PhaseOneRecord, scene: &ChannelScene) -> PhaseTwoRecord {
    let q: QuantizerSpec = scene.an_quantizer();
    let revealed: Vec<f64> = phase1.an.iter().map(|&a| q.quantize_one(a)).collect();
    let bob_clean = phase1.bob.iter().zip(&revealed).map(|(b, r)| b - r).collect();
    PhaseTwoRecord { revealed, bob_clean }
}

/// Empirical SNR with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrEstimate {
    pub gamma: f64,
    pub std_err: f64,
    pub residual_power: f64,
    pub n: usize,
}

pub const MIN_SNR_SYMBOLS: usize = 1000;

/// `σ²_x / mean((observed - reference)²)`; the noise is zero-mean by construction.
pub fn measure_snr(observed: &[f64], reference: &[f64], sigma2_x: f64) -> Result<SnrEstimate> {
    if observed.len() != reference.len() {
        return Err(invalid("reference", "length differs from observed"));
    }
    let n = observed.len();
    if n < MIN_SNR_SYMBOLS {
        return Err(Error::TooFewSymbols {
            required: MIN_SNR_SYMBOLS,
            got: n,
        });
    }
    let (mut m2, mut m4) = (0.0, 0.0);
    for (o, r) in observed.iter().zip(reference) {
        let e2 = (o - r) * (o - r);
        m2 += e2;
        m4 += e2 * e2;
    }
    let nf = n as f64;
    let (m2, m4) = (m2 / nf, m4 / nf);
    // Round-off floor of a noiseless run.
    if m2 <= 1e-20 * sigma2_x {
        return Ok(SnrEstimate {
            gamma: f64::INFINITY,
            std_err: 0.0,
            residual_power: m2,
            n,
        });
    }
    let gamma = sigma2_x / m2;
    let se_power = ((m4 - m2 * m2).max(0.0) / nf).sqrt();
    Ok(SnrEstimate {
        gamma,
        std_err: gamma * se_power / m2,
        residual_power: m2,
        n,
    })
}

/// A delayed run with least-squares estimates of the interference model
/// `x̂''_k = α x_k + β x_{k-1} + noise`.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayedRun {
    pub phase1: PhaseOneRecord,
    pub phase2: PhaseTwoRecord,
    pub alpha_hat: f64,
    pub beta_hat: f64,
    pub residual_var: f64,
    /// Delay actually applied, snapped to the sample grid.
    pub epsilon_effective: f64,
}

pub fn run_delayed(
    waveforms: &SymbolWaveforms,
    scene: &ChannelScene,
    n_symbols: usize,
    seed: u64,
) -> Result<DelayedRun> {
    if n_symbols < 3 {
        return Err(Error::TooFewSymbols {
            required: 3,
            got: n_symbols,
        });
    }
    let phase1 = run_phase1(waveforms, scene, n_symbols, Modulation::GaussianReal, seed)?;
    let phase2 = run_phase2(&phase1, scene);
    let (alpha_hat, beta_hat, residual_var) = fit_interference(&phase1.x, &phase1.x_prev, &phase2.bob_clean);
    let epsilon_effective = phase1.delay_samples as f64 * waveforms.dt();
    Ok(DelayedRun {
        phase1,
        phase2,
        alpha_hat,
        beta_hat,
        residual_var,
        epsilon_effective,
    })
}

// Two-regressor least squares without intercept.
fn fit_interference(x: &[f64], x_prev: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let (mut sxx, mut sxp, mut spp, mut sxy, mut spy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for ((&a, &p), &t) in x.iter().zip(x_prev).zip(y) {
        sxx += a * a;
        sxp += a * p;
        spp += p * p;
        sxy += a * t;
        spy += p * t;
    }
    let det = sxx * spp - sxp * sxp;
    let alpha = (sxy * spp - spy * sxp) / det;
    let beta = (spy * sxx - sxy * sxp) / det;
    let sse: f64 = x
        .iter()
        .zip(x_prev)
        .zip(y)
        .map(|((&a, &p), &t)| {
            let e = t - alpha * a - beta * p;
            e * e
        })
        .sum();
    (alpha, beta, sse / (x.len() as f64 - 2.0))
}
