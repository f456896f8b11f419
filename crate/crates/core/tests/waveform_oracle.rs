//! Correlation integrals checked against an exact piecewise-constant
//! integrator that works from the pulse samples and chips directly.

use gnss_an_auth::waveforms::{make_chip_pulse, make_code_pair, PulseKind, SymbolWaveforms};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A zero-order-hold signal on `[0, len·dt)`, zero outside.
struct Zoh {
    v: Vec<f64>,
    dt: f64,
}

impl Zoh {
    fn at(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let i = (t / self.dt).floor() as usize;
        self.v.get(i).copied().unwrap_or(0.0)
    }

    fn breakpoints(&self, shift: f64, lo: f64, hi: f64, out: &mut Vec<f64>) {
        for i in 0..=self.v.len() {
            let t = i as f64 * self.dt - shift;
            if t > lo && t < hi {
                out.push(t);
            }
        }
    }
}

/// `∫_lo^hi f(τ + a) g(τ + b) dτ`, exact for ZOH inputs.
fn integrate(f: &Zoh, a: f64, g: &Zoh, b: f64, lo: f64, hi: f64) -> f64 {
    let mut cuts = vec![lo, hi];
    f.breakpoints(a, lo, hi, &mut cuts);
    g.breakpoints(b, lo, hi, &mut cuts);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            f.at(mid + a) * g.at(mid + b) * (w[1] - w[0])
        })
        .sum()
}

fn transmit_pulse(kind: PulseKind, n_c: usize, n_os: usize, seed: u64) -> Zoh {
    let pulse = make_chip_pulse(kind, n_os).unwrap();
    let (_, auth) = make_code_pair(n_c, seed).unwrap();
    let mut v = Vec::with_capacity(n_c * n_os);
    for &c in auth.chips() {
        v.extend(pulse.samples().iter().map(|u| c * u));
    }
    Zoh { v, dt: pulse.dt() }
}

#[test]
fn gains_match_exact_integrals_at_random_delays() {
    for kind in [PulseKind::GalileoSignedRect, PulseKind::NarrowSupportTwoHorn] {
        let (n_c, n_os, seed) = (16, 8, 4);
        let w = SymbolWaveforms::build(kind, n_c, n_os, seed).unwrap();
        let s = transmit_pulse(kind, n_c, n_os, seed);
        let ts = w.symbol_period();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            let eps = rng.random_range(0.0..ts);
            let nu = integrate(&s, 0.0, &s, eps, 0.0, ts - eps);
            let alpha = integrate(&s, -eps, &s, 0.0, eps, ts);
            let beta = integrate(&s, ts - eps, &s, 0.0, 0.0, eps);
            let (a, b) = w.cross_gains(eps).unwrap();
            let n = w.an_correlation(eps).unwrap();
            assert!((n - nu).abs() < 1e-9, "{kind:?} eps={eps:e}: nu {n} vs {nu}");
            assert!((a - alpha).abs() < 1e-9, "{kind:?} eps={eps:e}: alpha {a} vs {alpha}");
            assert!((b - beta).abs() < 1e-9, "{kind:?} eps={eps:e}: beta {b} vs {beta}");
        }
    }
}

#[test]
fn gains_converge_under_oversampling() {
    for kind in [PulseKind::GalileoSignedRect, PulseKind::NarrowSupportTwoHorn] {
        let coarse = SymbolWaveforms::build(kind, 64, 16, 2).unwrap();
        let fine = SymbolWaveforms::build(kind, 64, 32, 2).unwrap();
        for k in 0..48 {
            let eps = k as f64 * coarse.dt();
            let (a0, b0) = coarse.cross_gains(eps).unwrap();
            let (a1, b1) = fine.cross_gains(eps).unwrap();
            let (n0, n1) = (coarse.an_correlation(eps).unwrap(), fine.an_correlation(eps).unwrap());
            assert!((a0 - a1).abs() < 1e-3 && (b0 - b1).abs() < 1e-3 && (n0 - n1).abs() < 1e-3);
        }
    }
}

#[test]
fn shifted_correlator_captures_at_most_unit_energy() {
    let w = SymbolWaveforms::build(PulseKind::GalileoSignedRect, 64, 16, 8).unwrap();
    for k in 0..200 {
        let eps = k as f64 * 0.37 * w.dt();
        let (a, b) = w.cross_gains(eps).unwrap();
        assert!(a * a + b * b <= 1.0 + 1e-12);
    }
}

// The signed-rectangle autocorrelation falls to its negative lobe at half a
// chip and recovers towards zero at a full chip.
#[test]
fn galileo_gain_non_increasing_up_to_half_chip() {
    let w = SymbolWaveforms::build(PulseKind::GalileoSignedRect, 1024, 64, 1).unwrap();
    let alpha: Vec<f64> = (0..=64).map(|k| w.cross_gains(k as f64 * w.dt()).unwrap().0).collect();
    for k in 1..=32 {
        assert!(alpha[k] <= alpha[k - 1] + 1e-12, "alpha rises at k={k}");
    }
    assert!(alpha[32] < -0.4);
    assert!(alpha[64] > alpha[32]);
}
