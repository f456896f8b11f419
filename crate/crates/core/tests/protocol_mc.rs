//! Monte Carlo checks of both protocol phases against the noise-calibration
//! contract and the closed-form SNRs.

use gnss_an_auth::protocol_sim::{measure_snr, run_delayed, run_phase1, run_phase2, PhaseOneRecord};
use gnss_an_auth::quantizer::design_uniform_mse;
use gnss_an_auth::waveforms::{PulseKind, SymbolWaveforms};
use gnss_an_auth::{ChannelScene, Modulation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: usize = 100_000;

fn small() -> SymbolWaveforms {
    SymbolWaveforms::build(PulseKind::GalileoSignedRect, 16, 8, 21).unwrap()
}

fn var_of_diff(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let m = d.iter().sum::<f64>() / d.len() as f64;
    d.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (d.len() - 1) as f64
}

fn variance(a: &[f64]) -> f64 {
    var_of_diff(a, &vec![0.0; a.len()])
}

#[test]
fn despread_an_has_nominal_power() {
    let r = run_phase1(&small(), &ChannelScene::default(), N, Modulation::GaussianReal, 1).unwrap();
    let v = variance(&r.an);
    assert!((v - 1.0).abs() < 0.02, "{v}");
}

#[test]
fn bob_phase_one_sees_an_plus_noise() {
    let s = ChannelScene::default();
    let r = run_phase1(&small(), &s, N, Modulation::GaussianReal, 2).unwrap();
    let v = var_of_diff(&r.bob, &r.x);
    let want = 1.0 + 10f64.powf(-0.5);
    assert!((v / want - 1.0).abs() < 0.02, "{v} vs {want}");
}

#[test]
fn cancellation_leaves_bob_noise() {
    let s = ChannelScene::default();
    let p1 = run_phase1(&small(), &s, N, Modulation::GaussianReal, 3).unwrap();
    let v = var_of_diff(&run_phase2(&p1, &s).bob_clean, &p1.x);
    assert!((v / s.sigma2_wb - 1.0).abs() < 0.02, "{v}");
}

#[test]
fn three_bit_cancellation_adds_quantization_noise() {
    let s = ChannelScene::default().with_quantizer(design_uniform_mse(3, 1.0).unwrap());
    let p1 = run_phase1(&small(), &s, N, Modulation::GaussianReal, 4).unwrap();
    let v = var_of_diff(&run_phase2(&p1, &s).bob_clean, &p1.x);
    let want = s.sigma2_wb + s.sigma2_wq();
    assert!((v / want - 1.0).abs() < 0.03, "{v} vs {want}");
}

#[test]
fn eve_snr_below_bob_snr_when_an_dominates() {
    for (an, seed) in [(1.0, 5), (0.5, 6), (4.0, 7)] {
        let s = ChannelScene::default().with_an(an);
        assert!(s.sigma2_an + s.sigma2_we > s.sigma2_wb + s.sigma2_wq());
        let p1 = run_phase1(&small(), &s, 20_000, Modulation::Bpsk, seed).unwrap();
        let ge = measure_snr(&p1.eve, &p1.x, 1.0).unwrap();
        let gb = measure_snr(&run_phase2(&p1, &s).bob_clean, &p1.x, 1.0).unwrap();
        assert!(ge.gamma < gb.gamma + 3.0 * (ge.std_err + gb.std_err));
    }
}

#[test]
fn psk_symbols_have_unit_power() {
    for m in [Modulation::Bpsk, Modulation::Mpsk(4), Modulation::Mpsk(16)] {
        let r = run_phase1(&small(), &ChannelScene::default(), 20_000, m, 8).unwrap();
        let p = r.x.iter().map(|x| x * x).sum::<f64>() / r.len() as f64;
        assert!((p - 1.0).abs() < 0.03, "{m}: {p}");
    }
}

#[test]
fn records_independent_of_thread_count() {
    let run = |threads| -> PhaseOneRecord {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_phase1(&small(), &ChannelScene::default(), 3_000, Modulation::GaussianReal, 9).unwrap())
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn delayed_residual_matches_closed_form_at_random_delays() {
    let w = SymbolWaveforms::build(PulseKind::NarrowSupportTwoHorn, 16, 32, 12).unwrap();
    let base = ChannelScene::default();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..10 {
        let eps = rng.random_range(0.0..w.symbol_period() * 0.99);
        let r = run_delayed(&w, &base.with_epsilon(eps), 40_000, 300 + i).unwrap();
        let nu = w.an_correlation(r.epsilon_effective).unwrap();
        let want = base.sigma2_wb + 2.0 * base.sigma2_an * (1.0 - nu);
        assert!((r.residual_var / want - 1.0).abs() < 0.03, "eps={eps:e}: {} vs {want}", r.residual_var);
    }
}
