//! Self-contained invariant suites backing the `check` command.

use crate::attacks::{delay_attack_points, symbol_prediction_success};
use crate::capacity::{authentication_capacity, capacity_gaussian};
use crate::fbl::{design_codebook, fea_success, q_bound, FblInput};
use crate::modulation::Modulation;
use crate::protocol_sim::{measure_snr, run_phase1, run_phase2};
use crate::quantizer::{design_uniform_mse, residual_power, Resolution};
use crate::scene::ChannelScene;
use crate::waveforms::{make_code_pair, synthesize_symbol, PulseKind, SymbolWaveforms};
use crate::{db_to_linear, Result};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Result of one suite.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Suite = fn() -> Result<std::result::Result<String, String>>;

const SUITES: [(&str, Suite); 8] = [
    ("orthogonality", orthogonality),
    ("matched-filter", matched_filter),
    ("quantizer", quantizer),
    ("snr-calibration", snr_calibration),
    ("capacity", capacity),
    ("bound-monotonicity", bound_monotonicity),
    ("delay-attack", delay_attack),
    ("symbol-prediction", symbol_prediction),
];

/// Runs every suite; a suite that errors counts as failed.
pub fn run_all() -> Vec<CheckOutcome> {
    SUITES
        .iter()
        .map(|(name, f)| {
            let (passed, detail) = match f() {
                Ok(Ok(d)) => (true, d),
                Ok(Err(d)) => (false, d),
                Err(e) => (false, e.to_string()),
            };
            CheckOutcome { name, passed, detail }
        })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn orthogonality() -> Result<std::result::Result<String, String>> {
    let mut worst = 0.0f64;
    for seed in 0..8 {
        let (c, ca) = make_code_pair(256, seed)?;
        worst = worst.max(c.dot(&ca).abs());
        let w = SymbolWaveforms::build(PulseKind::GalileoSignedRect, 64, 8, seed)?;
        let an = w.generate_projected_an(1.0, &mut ChaCha8Rng::seed_from_u64(seed));
        let norm = w.inner(&an, &an).sqrt();
        worst = worst.max(w.inner(&w.s_p, &w.s_t).abs());
        worst = worst.max(w.inner(&an, &w.s_p).abs() / norm);
    }
    Ok(ensure(worst <= 1e-10, || format!("max inner product {worst:e}")).map(|_| format!("max inner product {worst:e}")))
}

fn matched_filter() -> Result<std::result::Result<String, String>> {
    let mut worst = 0.0f64;
    for kind in [PulseKind::GalileoSignedRect, PulseKind::NarrowSupportTwoHorn] {
        let w = SymbolWaveforms::build(kind, 64, 16, 3)?;
        for a in [-10.0, -1.5, 0.0, 0.25, 10.0] {
            let s = synthesize_symbol(a, w.auth_code(), w.pulse());
            worst = worst.max((w.despread(&s) - a).abs());
        }
    }
    Ok(ensure(worst <= 1e-10, || format!("max error {worst:e}")).map(|_| format!("max error {worst:e}")))
}

fn quantizer() -> Result<std::result::Result<String, String>> {
    let mut prev = f64::INFINITY;
    for b in 1..=8 {
        let q = design_uniform_mse(b, 1.0)?;
        let r = residual_power(&q, 1.0);
        if !(r < prev) {
            return Ok(Err(format!("residual power not decreasing at b={b}")));
        }
        prev = r;
    }
    let inf = crate::quantizer::QuantizerSpec::design(Resolution::Infinite, 1.0)?;
    Ok(ensure(inf.residual_power() == 0.0, || "infinite resolution leaves residual".into())
        .map(|_| format!("b=8 residual {prev:e}")))
}

fn snr_calibration() -> Result<std::result::Result<String, String>> {
    let w = SymbolWaveforms::build(PulseKind::GalileoSignedRect, 32, 8, 5)?;
    let scene = ChannelScene::default();
    let p1 = run_phase1(&w, &scene, 100_000, Modulation::GaussianReal, 5)?;
    let p2 = run_phase2(&p1, &scene);
    let ge = measure_snr(&p1.eve, &p1.x, 1.0)?.gamma;
    let gb = measure_snr(&p2.bob_clean, &p1.x, 1.0)?.gamma;
    let (ee, eb) = (ge / scene.gamma_e() - 1.0, gb / scene.gamma_b() - 1.0);
    let detail = format!("Eve {ee:+.4}, Bob {eb:+.4} relative");
    Ok(ensure(ee.abs() < 0.03 && eb.abs() < 0.03, || detail.clone()).map(|_| detail))
}

fn capacity() -> Result<std::result::Result<String, String>> {
    let mut prev = 0.0;
    for db in -10..=20 {
        let s = ChannelScene::default().with_an(db_to_linear(db as f64));
        let c = authentication_capacity(&s, Modulation::GaussianReal)?;
        if c < prev {
            return Ok(Err(format!("C_A decreases at {db} dB")));
        }
        let closed = (0.5 * ((1.0 + s.gamma_b()) / (1.0 + s.gamma_e())).log2()).max(0.0);
        if (c - closed).abs() > 1e-12 {
            return Ok(Err(format!("identity broken at {db} dB")));
        }
        prev = c;
    }
    let c_b = capacity_gaussian(ChannelScene::default().gamma_b());
    Ok(ensure(prev <= c_b, || "C_A above C_B".into()).map(|_| format!("C_A(20 dB) = {prev:.4}")))
}

fn bound_monotonicity() -> Result<std::result::Result<String, String>> {
    let g = db_to_linear(5.0);
    for input in [FblInput::GaussianReal, FblInput::Bpsk] {
        let mut prev = 1.0;
        for n in (10..=500).step_by(10) {
            let q = q_bound(g, 0.5, n, input)?;
            if !(q < prev) {
                return Ok(Err(format!("{input}: q not decreasing at n={n}")));
            }
            prev = q;
        }
        let d = design_codebook(g, 250, 1e-3, input)?;
        let mut prev = 0.0;
        for n in 1..=250 {
            let p = fea_success(&d, 1.0, n, input)?;
            if p < prev {
                return Ok(Err(format!("{input}: P_succ decreasing at n={n}")));
            }
            prev = p;
        }
    }
    Ok(Ok("q_bound and P_succ monotone".into()))
}

fn delay_attack() -> Result<std::result::Result<String, String>> {
    let w = SymbolWaveforms::build(PulseKind::GalileoSignedRect, 64, 32, 1)?;
    let scene = ChannelScene::default();
    let grid: Vec<f64> = (0..=40).map(|i| i as f64 * 0.005 * w.chip_period()).collect();
    let pts = delay_attack_points(&w, &scene, Modulation::GaussianReal, &grid)?;
    for p in &pts {
        if p.gamma_b_prime > scene.gamma_b() * (1.0 + 1e-12) {
            return Ok(Err(format!("Γ'_B above Γ_B at {:e} s", p.epsilon)));
        }
    }
    Ok(Ok(format!("{} delays", pts.len())))
}

fn symbol_prediction() -> Result<std::result::Result<String, String>> {
    let mut prev = 0.0;
    for k in 1..=20 {
        let p = symbol_prediction_success(1.0, k as f64 / 20.0)?;
        if !(p > prev) {
            return Ok(Err(format!("not increasing at t = {}", k as f64 / 20.0)));
        }
        prev = p;
    }
    Ok(Ok("strictly increasing in t".into()))
}
