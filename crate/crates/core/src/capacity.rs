//! Channel capacities and the authentication (secrecy) capacity.
//!
//! Two conventions coexist. Gaussian and BPSK signalling use the real AWGN
//! channel (`½ log2(1 + Γ)` and the binary-input real channel). M-PSK uses
//! the complex AWGN channel, with capacity `H(y) - log2(πe/Γ)` and `H(y)`
//! obtained by 2-D trapezoidal integration of the received-signal density.

use rayon::prelude::*;

use crate::curve::BoundCurve;
use crate::error::{invalid, Error, Result};
use crate::fbl::{dispersion_terms, FblInput};
use crate::modulation::Modulation;
use crate::quantizer::{QuantizerSpec, Resolution};
use crate::scene::ChannelScene;
use crate::special::q_function;
use crate::{db_to_linear, linear_to_db};

/// Real Gaussian-input capacity `½ log2(1 + γ)` in bits per symbol.
pub fn capacity_gaussian(gamma: f64) -> f64 {
    0.5 * gamma.max(0.0).ln_1p() / std::f64::consts::LN_2
}

/// Grid for the received-density entropy integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationSettings {
    /// Truncation beyond the constellation, in noise standard deviations.
    pub half_width_sigmas: f64,
    pub points_per_axis: usize,
    /// Accepted change between successive grid refinements, in bits.
    pub tolerance: f64,
}

impl Default for IntegrationSettings {
    fn default() -> Self {
        Self {
            half_width_sigmas: 8.0,
            points_per_axis: 2048,
            tolerance: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityQuery {
    pub gamma: f64,
    pub modulation: Modulation,
    pub integration: IntegrationSettings,
}

impl CapacityQuery {
    pub fn new(gamma: f64, modulation: Modulation) -> Self {
        Self {
            gamma,
            modulation,
            integration: IntegrationSettings::default(),
        }
    }
}

/// M-PSK constellation on the unit circle.
pub fn psk_points(m: u32) -> Vec<(f64, f64)> {
    (0..m)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
            (a.cos(), a.sin())
        })
        .collect()
}

/// Constellation-constrained capacity of M-PSK on the complex AWGN channel.
pub fn capacity_mpsk(query: &CapacityQuery) -> Result<f64> {
    let Modulation::Mpsk(m) = query.modulation.validate()? else {
        return Err(invalid("modulation", "capacity_mpsk needs an M-PSK query"));
    };
    let gamma = query.gamma;
    if !(gamma >= 0.0) {
        return Err(invalid("gamma", format!("{gamma} must be non-negative")));
    }
    let log2m = (m as f64).log2();
    if gamma == 0.0 {
        return Ok(0.0);
    }
    // Symbol errors negligible: the entropy deficit is far below any tolerance.
    let d_half = (std::f64::consts::PI / m as f64).sin();
    if gamma.is_infinite() || m as f64 * q_function(d_half * (2.0 * gamma).sqrt()) < 1e-16 {
        return Ok(log2m);
    }
    let settings = query.integration;
    let points = psk_points(m);
    let mut half = (settings.points_per_axis / 2).max(8);
    let mut prev = entropy_capacity(&points, gamma, settings.half_width_sigmas, half / 2);
    for _ in 0..=2 {
        let cur = entropy_capacity(&points, gamma, settings.half_width_sigmas, half);
        if (cur - prev).abs() <= settings.tolerance {
            return Ok(cur.clamp(0.0, log2m));
        }
        prev = cur;
        half *= 2;
    }
    Err(Error::NonConvergence {
        what: "M-PSK entropy integral",
        detail: format!("M={m}, gamma={gamma}: refinements still differ by more than {}", settings.tolerance),
    })
}

// H(y) - log2(πe/Γ) with nodes i·h, i = -half..=half on each axis. The PSK
// set is symmetric about both axes, so only the closed first quadrant is
// visited, with doubled weights off the axes.
fn entropy_capacity(points: &[(f64, f64)], gamma: f64, half_width: f64, half: usize) -> f64 {
    let sigma = (0.5 / gamma).sqrt();
    let radius = 1.0 + half_width * sigma;
    let h = radius / half as f64;
    let m = points.len() as f64;
    let log_norm = (gamma / (std::f64::consts::PI * m)).ln();
    let weight = |i: usize| -> f64 {
        let sym = if i == 0 { 1.0 } else { 2.0 };
        let end = if i == half { 0.5 } else { 1.0 };
        sym * end
    };
    let row = |i: usize| -> f64 {
        let re = i as f64 * h;
        let mut acc = 0.0;
        let mut expo = vec![0.0; points.len()];
        for j in 0..=half {
            let im = j as f64 * h;
            let mut top = f64::NEG_INFINITY;
            for (e, &(sr, si)) in expo.iter_mut().zip(points) {
                let (dr, di) = (re - sr, im - si);
                *e = -gamma * (dr * dr + di * di);
                top = top.max(*e);
            }
            let lse = top + expo.iter().map(|e| (e - top).exp()).sum::<f64>().ln();
            let log_f = log_norm + lse;
            let f = log_f.exp();
            if f > 0.0 {
                acc += weight(j) * (-f * log_f);
            }
        }
        weight(i) * acc
    };
    let nats: f64 = (0..=half).into_par_iter().map(row).sum::<f64>() * h * h;
    let entropy_bits = nats / std::f64::consts::LN_2;
    entropy_bits - (std::f64::consts::PI * std::f64::consts::E / gamma).log2()
}

/// Capacity in bits per symbol under the modulation's own channel convention.
pub fn capacity(gamma: f64, modulation: Modulation) -> Result<f64> {
    match modulation.validate()? {
        Modulation::GaussianReal => Ok(capacity_gaussian(gamma)),
        Modulation::Bpsk => {
            if gamma == 0.0 {
                Ok(0.0)
            } else if gamma.is_infinite() {
                Ok(1.0)
            } else {
                Ok(dispersion_terms(gamma, FblInput::Bpsk)?.f.clamp(0.0, 1.0))
            }
        }
        m @ Modulation::Mpsk(_) => capacity_mpsk(&CapacityQuery::new(gamma, m)),
    }
}

/// `C_A = max(0, C_B - C_E)`.
pub fn authentication_capacity(scene: &ChannelScene, modulation: Modulation) -> Result<f64> {
    scene.validate()?;
    let (gb, ge) = (scene.gamma_b(), scene.gamma_e());
    secrecy_capacity(gb, ge, modulation)
}

/// `max(0, C(Γ_B) - C(Γ_E))`; capacities are monotone in SNR, so `Γ_B <= Γ_E` gives zero.
pub fn secrecy_capacity(gamma_b: f64, gamma_e: f64, modulation: Modulation) -> Result<f64> {
    if gamma_b <= gamma_e {
        return Ok(0.0);
    }
    Ok((capacity(gamma_b, modulation)? - capacity(gamma_e, modulation)?).max(0.0))
}

/// Smallest AN power keeping a noiseless eavesdropper below rate `r_x`.
pub fn min_an_power(r_x: f64, sigma2_x: f64) -> Result<f64> {
    if !(r_x > 0.0) {
        return Err(invalid("r_x", format!("{r_x} must be positive")));
    }
    Ok(sigma2_x / (2f64.powf(2.0 * r_x) - 1.0))
}

/// Infinite-length forward-estimation exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackExponent {
    /// Secrecy rate `R_A = R_x - C_E`, floored at zero.
    pub secrecy_rate: f64,
    pub c_e: f64,
}

impl AttackExponent {
    /// `2^(-R_A n̄)`.
    pub fn success_probability(&self, n_bar: f64) -> f64 {
        (-self.secrecy_rate * n_bar).exp2()
    }
}

pub fn asymptotic_attack_exponent(scene: &ChannelScene, r_x: f64, modulation: Modulation) -> Result<AttackExponent> {
    scene.validate()?;
    let c_e = capacity(scene.gamma_e(), modulation)?;
    Ok(AttackExponent {
        secrecy_rate: (r_x - c_e).max(0.0),
        c_e,
    })
}

/// Swept quantity for [`sweep`].
#[derive(Debug, Clone, PartialEq)]
pub enum SweepVariable {
    /// AN power in dB.
    Sigma2AnDb(Vec<f64>),
    /// Quantizer resolution; `Infinite` plots at `+inf`.
    Bits(Vec<Resolution>),
    /// PSK order; overrides the modulation argument.
    PskOrder(Vec<u32>),
}

/// Authentication capacity evaluated pointwise along one variable.
pub fn sweep(variable: &SweepVariable, scene: &ChannelScene, modulation: Modulation) -> Result<BoundCurve> {
    scene.validate()?;
    let (x_name, points): (&str, Vec<(f64, f64)>) = match variable {
        SweepVariable::Sigma2AnDb(grid) => {
            if grid.is_empty() {
                return Err(Error::EmptyRange);
            }
            let pts = grid
                .par_iter()
                .map(|&db| {
                    let s = scene.with_an(db_to_linear(db));
                    authentication_capacity(&s, modulation).map(|c| (db, c))
                })
                .collect::<Result<Vec<_>>>()?;
            ("sigma2_an_db", pts)
        }
        SweepVariable::Bits(list) => {
            if list.is_empty() {
                return Err(Error::EmptyRange);
            }
            let pts = list
                .iter()
                .map(|&r| {
                    let q = QuantizerSpec::design(r, 1.0)?;
                    let x = match r {
                        Resolution::Bits(b) => b as f64,
                        Resolution::Infinite => f64::INFINITY,
                    };
                    authentication_capacity(&scene.with_quantizer(q), modulation).map(|c| (x, c))
                })
                .collect::<Result<Vec<_>>>()?;
            ("bits", pts)
        }
        SweepVariable::PskOrder(list) => {
            if list.is_empty() {
                return Err(Error::EmptyRange);
            }
            let pts = list
                .iter()
                .map(|&m| authentication_capacity(scene, Modulation::Mpsk(m)).map(|c| (m as f64, c)))
                .collect::<Result<Vec<_>>>()?;
            ("psk_order", pts)
        }
    };
    let label = match variable {
        SweepVariable::PskOrder(_) => "c_a_vs_psk_order".to_string(),
        _ => format!("c_a_{modulation}"),
    };
    Ok(BoundCurve::new(label, x_name, "c_a", points)?
        .with_meta("sigma2_x", scene.sigma2_x)
        .with_meta("sigma2_an_db", linear_to_db(scene.sigma2_an))
        .with_meta("sigma2_wb_db", linear_to_db(scene.sigma2_wb))
        .with_meta("sigma2_we_db", linear_to_db(scene.sigma2_we))
        .with_meta("bits", scene.quantizer.resolution())
        .with_meta("modulation", modulation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantizer::design_uniform_mse;

    #[test]
    fn gaussian_capacity_points() {
        assert_eq!(capacity_gaussian(0.0), 0.0);
        assert!((capacity_gaussian(1.0) - 0.5).abs() < 1e-15);
        // ½ log2(1 + 10^0.5)
        assert!((capacity_gaussian(10f64.powf(0.5)) - 1.028_686_604_303_397_5).abs() < 1e-12);
    }

    #[test]
    fn reference_authentication_capacity() {
        let c = authentication_capacity(&ChannelScene::default(), Modulation::GaussianReal).unwrap();
        assert!((c - 0.528_686_604_303_397_5).abs() < 1e-12, "{c}");
    }

    #[test]
    fn zero_below_threshold_and_saturation() {
        let s = ChannelScene::default();
        assert_eq!(authentication_capacity(&s.with_an(s.sigma2_wb), Modulation::GaussianReal).unwrap(), 0.0);
        assert_eq!(authentication_capacity(&s.with_an(0.1), Modulation::GaussianReal).unwrap(), 0.0);
        let big = authentication_capacity(&s.with_an(1e9), Modulation::GaussianReal).unwrap();
        assert!((big - capacity_gaussian(s.gamma_b())).abs() < 1e-8);
    }

    #[test]
    fn gaussian_secrecy_identity() {
        for &an in &[0.5, 1.0, 3.0, 10.0] {
            let s = ChannelScene::default().with_an(an);
            let c = authentication_capacity(&s, Modulation::GaussianReal).unwrap();
            let closed = (0.5 * ((1.0 + s.gamma_b()) / (1.0 + s.gamma_e())).log2()).max(0.0);
            assert!((c - closed).abs() < 1e-14);
        }
    }

    #[test]
    fn min_an_power_cases() {
        assert!((min_an_power(0.5, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((min_an_power(1.0, 2.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(min_an_power(60.0, 1.0).unwrap() < 1e-30);
        assert!(min_an_power(0.0, 1.0).is_err());
    }

    #[test]
    fn attack_exponent() {
        let s = ChannelScene::default();
        let e = asymptotic_attack_exponent(&s, 0.2, Modulation::GaussianReal).unwrap();
        assert_eq!(e.secrecy_rate, 0.0);
        assert_eq!(e.success_probability(1e6), 1.0);
        let e = asymptotic_attack_exponent(&s, capacity_gaussian(s.gamma_b()), Modulation::GaussianReal).unwrap();
        let ca = authentication_capacity(&s, Modulation::GaussianReal).unwrap();
        assert!((e.secrecy_rate - ca).abs() < 1e-15);
        let half = AttackExponent { secrecy_rate: 0.5, c_e: 0.0 };
        assert_eq!(half.success_probability(250.0), 2f64.powi(-125));
    }

    #[test]
    fn mpsk_limits() {
        let tiny = capacity_mpsk(&CapacityQuery::new(1e-6, Modulation::Mpsk(8))).unwrap();
        assert!(tiny.abs() < 1e-3, "{tiny}");
        let sat = capacity_mpsk(&CapacityQuery::new(100.0, Modulation::Mpsk(2))).unwrap();
        assert!((sat - 1.0).abs() < 1e-3);
        assert!(capacity_mpsk(&CapacityQuery::new(1.0, Modulation::GaussianReal)).is_err());
    }

    #[test]
    fn bpsk_complex_matches_real_at_double_snr() {
        // Only the in-phase noise matters for BPSK on the complex channel.
        let c = capacity_mpsk(&CapacityQuery::new(1.0, Modulation::Mpsk(2))).unwrap();
        let r = capacity(2.0, Modulation::Bpsk).unwrap();
        assert!((c - r).abs() < 1e-6, "{c} vs {r}");
    }

    #[test]
    fn mpsk_monotone_and_bounded() {
        let mut last_by_m = vec![0.0; 4];
        for &g in &[0.1, 0.5, 1.0, 3.0, 10.0, 30.0] {
            let mut prev_m = 0.0;
            for (i, m) in [2u32, 4, 8, 16].into_iter().enumerate() {
                let c = capacity_mpsk(&CapacityQuery::new(g, Modulation::Mpsk(m))).unwrap();
                assert!(c <= (m as f64).log2() + 1e-12);
                assert!(c <= (1.0 + g).log2() + 1e-9);
                assert!(c >= prev_m - 1e-9, "M={m} g={g}");
                assert!(c >= last_by_m[i] - 1e-9);
                last_by_m[i] = c;
                prev_m = c;
            }
        }
    }

    #[test]
    fn grid_refinement_converged() {
        for &(m, g) in &[(2u32, 1.0), (4, 3.162), (8, 10.0), (16, 100.0)] {
            let q = CapacityQuery::new(g, Modulation::Mpsk(m));
            let pts = psk_points(m);
            let a = entropy_capacity(&pts, g, 8.0, 1024);
            let b = entropy_capacity(&pts, g, 8.0, 2048);
            assert!((a - b).abs() <= 1e-3);
            assert!((capacity_mpsk(&q).unwrap() - a).abs() <= 1e-3);
        }
    }

    #[test]
    fn capacity_monotone_in_an_and_noise() {
        let base = ChannelScene::default().with_quantizer(design_uniform_mse(3, 1.0).unwrap());
        let mut prev = -1.0;
        for i in 0..30 {
            let an = db_to_linear(-10.0 + i as f64);
            let c = authentication_capacity(&base.with_quantizer(QuantizerSpec::infinite()).with_an(an), Modulation::GaussianReal).unwrap();
            assert!(c >= prev);
            prev = c;
        }
        let mut prev = f64::INFINITY;
        for i in 0..20 {
            let c = authentication_capacity(&base.with_bob_noise(db_to_linear(-15.0 + i as f64)), Modulation::GaussianReal).unwrap();
            assert!(c <= prev);
            prev = c;
        }
    }

    #[test]
    fn sweeps() {
        let s = ChannelScene::default();
        let grid: Vec<f64> = (-10..=20).map(|d| d as f64).collect();
        let c = sweep(&SweepVariable::Sigma2AnDb(grid.clone()), &s, Modulation::GaussianReal).unwrap();
        assert_eq!(c.len(), 31);
        for (db, v) in c.points.iter() {
            if *db <= -5.0 {
                assert_eq!(*v, 0.0);
            } else {
                assert!(*v > 0.0);
            }
        }
        let bits = sweep(
            &SweepVariable::Bits(vec![Resolution::Bits(1), Resolution::Bits(3), Resolution::Infinite]),
            &s,
            Modulation::GaussianReal,
        )
        .unwrap();
        assert_eq!(bits.y_at(f64::INFINITY).unwrap(), authentication_capacity(&s, Modulation::GaussianReal).unwrap());
        assert!(matches!(sweep(&SweepVariable::Sigma2AnDb(vec![]), &s, Modulation::GaussianReal), Err(Error::EmptyRange)));
    }
}
