//! Chip pulses, spreading codes and the per-symbol waveforms of the composite
//! satellite signal.
//!
//! Continuous-time signals are held as zero-order-hold sample arrays on a grid
//! of `samples_per_chip` points per chip, so every integral is a Riemann sum
//! with step `dt = T_c / N_os`. Because both operands of a correlation are
//! piecewise constant on that grid, correlations at fractional sample shifts
//! are exact linear interpolations of the integer-shift sums.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};

/// Galileo E1 chip period in seconds.
pub const GALILEO_CHIP_PERIOD: f64 = 1e-6 / 1.023;

/// Default oversampling factor.
pub const DEFAULT_SAMPLES_PER_CHIP: usize = 64;

/// Default spreading factor.
pub const DEFAULT_CHIPS_PER_SYMBOL: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PulseKind {
    /// `+A` on the first half chip, `-A` on the second.
    GalileoSignedRect,
    /// Two signed rectangles of width `T_c / 8` at the chip edges, zero in between.
    NarrowSupportTwoHorn,
    /// User-supplied samples, see [`ChipPulse::custom`].
    Custom,
}

impl PulseKind {
    pub fn name(self) -> &'static str {
        match self {
            PulseKind::GalileoSignedRect => "galileo",
            PulseKind::NarrowSupportTwoHorn => "two-horn",
            PulseKind::Custom => "custom",
        }
    }
}

impl std::str::FromStr for PulseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "galileo" | "u1" | "galileo-signed-rect" => Ok(PulseKind::GalileoSignedRect),
            "two-horn" | "u2" | "narrow-support-two-horn" => Ok(PulseKind::NarrowSupportTwoHorn),
            other => Err(Error::UnsupportedPulse(other.to_string())),
        }
    }
}

/// Sampled unit-energy chip waveform over one chip period.
#[derive(Debug, Clone, PartialEq)]
pub struct ChipPulse {
    kind: PulseKind,
    chip_period: f64,
    samples: Vec<f64>,
}

impl ChipPulse {
    /// Builds a standard pulse at the Galileo chip period.
    pub fn new(kind: PulseKind, samples_per_chip: usize) -> Result<Self> {
        Self::with_chip_period(kind, samples_per_chip, GALILEO_CHIP_PERIOD)
    }

    pub fn with_chip_period(kind: PulseKind, samples_per_chip: usize, chip_period: f64) -> Result<Self> {
        if samples_per_chip < 8 || samples_per_chip % 2 != 0 {
            return Err(invalid(
                "samples_per_chip",
                format!("{samples_per_chip} must be even and at least 8"),
            ));
        }
        if !(chip_period > 0.0 && chip_period.is_finite()) {
            return Err(invalid("chip_period", format!("{chip_period} must be positive")));
        }
        let n = samples_per_chip;
        let samples = match kind {
            PulseKind::GalileoSignedRect => (0..n).map(|j| if j < n / 2 { 1.0 } else { -1.0 }).collect(),
            PulseKind::NarrowSupportTwoHorn => {
                if n % 8 != 0 {
                    return Err(Error::UnsupportedPulse(format!(
                        "two-horn pulse needs samples_per_chip divisible by 8, got {n}"
                    )));
                }
                let edge = n / 8;
                (0..n)
                    .map(|j| {
                        if j < edge {
                            1.0
                        } else if j >= n - edge {
                            -1.0
                        } else {
                            0.0
                        }
                    })
                    .collect()
            }
            PulseKind::Custom => {
                return Err(Error::UnsupportedPulse(
                    "custom pulses are built with ChipPulse::custom".into(),
                ))
            }
        };
        Ok(Self::normalized(kind, chip_period, samples))
    }

    /// Wraps arbitrary samples, rescaled to unit energy.
    pub fn custom(samples: Vec<f64>, chip_period: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(invalid("samples", "need at least two samples per chip"));
        }
        if !(chip_period > 0.0 && chip_period.is_finite()) {
            return Err(invalid("chip_period", format!("{chip_period} must be positive")));
        }
        if samples.iter().any(|s| !s.is_finite()) || samples.iter().all(|&s| s == 0.0) {
            return Err(invalid("samples", "must be finite and not all zero"));
        }
        Ok(Self::normalized(PulseKind::Custom, chip_period, samples))
    }

    fn normalized(kind: PulseKind, chip_period: f64, mut samples: Vec<f64>) -> Self {
        let dt = chip_period / samples.len() as f64;
        let energy: f64 = samples.iter().map(|s| s * s).sum::<f64>() * dt;
        let scale = energy.sqrt().recip();
        samples.iter_mut().for_each(|s| *s *= scale);
        Self {
            kind,
            chip_period,
            samples,
        }
    }

    pub fn kind(&self) -> PulseKind {
        self.kind
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn samples_per_chip(&self) -> usize {
        self.samples.len()
    }

    pub fn chip_period(&self) -> f64 {
        self.chip_period
    }

    /// Grid step in seconds.
    pub fn dt(&self) -> f64 {
        self.chip_period / self.samples.len() as f64
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s * s).sum::<f64>() * self.dt()
    }
}

/// Convenience wrapper matching [`ChipPulse::new`].
pub fn make_chip_pulse(kind: PulseKind, samples_per_chip: usize) -> Result<ChipPulse> {
    ChipPulse::new(kind, samples_per_chip)
}

/// A `±1/sqrt(N_c)` spreading sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadingCode {
    chips: Vec<f64>,
    code_id: String,
}

impl SpreadingCode {
    /// Builds a code from chip signs.
    pub fn from_signs(signs: &[bool], code_id: impl Into<String>) -> Self {
        let a = (signs.len() as f64).sqrt().recip();
        Self {
            chips: signs.iter().map(|&p| if p { a } else { -a }).collect(),
            code_id: code_id.into(),
        }
    }

    pub fn chips(&self) -> &[f64] {
        &self.chips
    }

    pub fn len(&self) -> usize {
        self.chips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chips.is_empty()
    }

    pub fn code_id(&self) -> &str {
        &self.code_id
    }

    pub fn dot(&self, other: &SpreadingCode) -> f64 {
        self.chips.iter().zip(&other.chips).map(|(a, b)| a * b).sum()
    }
}

// Sylvester-Hadamard entry: (-1)^popcount(row & col).
fn hadamard_sign(row: usize, col: usize) -> bool {
    (row & col).count_ones() % 2 == 0
}

/// Returns `(navigation, authentication)` codes: two distinct Hadamard rows
/// under a common random sign mask, so their dot product is exactly zero.
pub fn make_code_pair(chips_per_symbol: usize, seed: u64) -> Result<(SpreadingCode, SpreadingCode)> {
    let n = chips_per_symbol;
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::CodeLengthNotPowerOfTwo(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nav_row = rng.random_range(0..n);
    let auth_row = loop {
        let r = rng.random_range(0..n);
        if r != nav_row {
            break r;
        }
    };
    let mask: Vec<bool> = (0..n).map(|_| rng.random()).collect();
    let signs = |row: usize| -> Vec<bool> {
        (0..n)
            .map(|i| hadamard_sign(row, i) == mask[i])
            .collect()
    };
    Ok((
        SpreadingCode::from_signs(&signs(nav_row), format!("nav-s{seed}-h{nav_row}")),
        SpreadingCode::from_signs(&signs(auth_row), format!("auth-s{seed}-h{auth_row}")),
    ))
}

/// `amplitude * sum_i code_i u(t - i T_c)` over one symbol.
pub fn synthesize_symbol(amplitude: f64, code: &SpreadingCode, pulse: &ChipPulse) -> Vec<f64> {
    let mut out = Vec::with_capacity(code.len() * pulse.samples_per_chip());
    for &c in code.chips() {
        let g = amplitude * c;
        out.extend(pulse.samples().iter().map(|u| g * u));
    }
    out
}

/// Per-symbol waveforms shared by transmitter and receivers.
#[derive(Debug, Clone)]
pub struct SymbolWaveforms {
    pulse: ChipPulse,
    nav_code: SpreadingCode,
    auth_code: SpreadingCode,
    /// Navigation spreading pulse.
    pub s_p: Vec<f64>,
    /// Authentication transmit pulse.
    pub s_t: Vec<f64>,
    /// Authentication despreading correlator.
    pub s_r: Vec<f64>,
}

impl SymbolWaveforms {
    pub fn new(pulse: ChipPulse, nav_code: SpreadingCode, auth_code: SpreadingCode) -> Result<Self> {
        if nav_code.len() != auth_code.len() {
            return Err(invalid(
                "auth_code",
                format!("length {} differs from navigation code length {}", auth_code.len(), nav_code.len()),
            ));
        }
        let s_p = synthesize_symbol(1.0, &nav_code, &pulse);
        let s_t = synthesize_symbol(1.0, &auth_code, &pulse);
        // Real pulses: the matched correlator, written as a correlation
        // template, coincides with the transmit pulse.
        let s_r = s_t.clone();
        Ok(Self {
            pulse,
            nav_code,
            auth_code,
            s_p,
            s_t,
            s_r,
        })
    }

    /// Standard pulse and a seeded orthogonal code pair at the Galileo chip period.
    pub fn build(kind: PulseKind, chips_per_symbol: usize, samples_per_chip: usize, seed: u64) -> Result<Self> {
        let pulse = ChipPulse::new(kind, samples_per_chip)?;
        let (nav, auth) = make_code_pair(chips_per_symbol, seed)?;
        Self::new(pulse, nav, auth)
    }

    pub fn pulse(&self) -> &ChipPulse {
        &self.pulse
    }

    pub fn nav_code(&self) -> &SpreadingCode {
        &self.nav_code
    }

    pub fn auth_code(&self) -> &SpreadingCode {
        &self.auth_code
    }

    pub fn chips_per_symbol(&self) -> usize {
        self.nav_code.len()
    }

    pub fn samples_per_symbol(&self) -> usize {
        self.s_p.len()
    }

    pub fn dt(&self) -> f64 {
        self.pulse.dt()
    }

    pub fn chip_period(&self) -> f64 {
        self.pulse.chip_period()
    }

    pub fn symbol_period(&self) -> f64 {
        self.pulse.chip_period() * self.chips_per_symbol() as f64
    }

    /// `∫ a(t) b(t) dt` on the sample grid.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        dot(a, b) * self.dt()
    }

    /// Authentication despreading of one symbol window.
    pub fn despread(&self, window: &[f64]) -> f64 {
        self.inner(window, &self.s_r)
    }

    /// Legacy (navigation-code) despreading of one symbol window.
    pub fn despread_navigation(&self, window: &[f64]) -> f64 {
        self.inner(window, &self.s_p)
    }

    /// Nearest whole-sample shift for a delay in seconds.
    pub fn delay_to_samples(&self, epsilon: f64) -> usize {
        (epsilon / self.dt()).round().max(0.0) as usize
    }

    fn check_delay(&self, epsilon: f64) -> Result<()> {
        if !(epsilon >= 0.0 && epsilon < self.symbol_period()) {
            return Err(Error::DelayOutOfRange {
                epsilon,
                symbol_period: self.symbol_period(),
            });
        }
        Ok(())
    }

    // Splits a delay into (whole samples, fraction); near-grid values snap.
    fn split_delay(&self, epsilon: f64) -> (usize, f64) {
        let s = epsilon / self.dt();
        let r = s.round();
        if (s - r).abs() < 1e-9 {
            (r as usize, 0.0)
        } else {
            (s.floor() as usize, s - s.floor())
        }
    }

    fn interpolate(&self, epsilon: f64, at: impl Fn(usize) -> f64) -> f64 {
        let (m, theta) = self.split_delay(epsilon);
        if theta == 0.0 {
            at(m)
        } else {
            (1.0 - theta) * at(m) + theta * at(m + 1)
        }
    }

    // ∫_ε^{T_s} s_T(τ-ε) s_R(τ) dτ at a whole-sample shift.
    fn alpha_at(&self, m: usize) -> f64 {
        let l = self.samples_per_symbol();
        if m >= l {
            return 0.0;
        }
        dot(&self.s_t[..l - m], &self.s_r[m..]) * self.dt()
    }

    // ∫_0^ε s_T(τ+T_s-ε) s_R(τ) dτ at a whole-sample shift.
    fn beta_at(&self, m: usize) -> f64 {
        let l = self.samples_per_symbol();
        let m = m.min(l);
        dot(&self.s_t[l - m..], &self.s_r[..m]) * self.dt()
    }

    // ∫_0^{T_s-ε} s_T(τ) s_R(τ+ε) dτ at a whole-sample shift.
    fn nu_at(&self, m: usize) -> f64 {
        let l = self.samples_per_symbol();
        if m >= l {
            return 0.0;
        }
        let mut acc = 0.0;
        for j in 0..l - m {
            acc += self.s_t[j] * self.s_r[j + m];
        }
        acc * self.dt()
    }

    /// Current-symbol gain `alpha` and previous-symbol leakage `beta` seen
    /// by a correlator aligned `epsilon` seconds ahead of the signal.
    pub fn cross_gains(&self, epsilon: f64) -> Result<(f64, f64)> {
        self.check_delay(epsilon)?;
        Ok((
            self.interpolate(epsilon, |m| self.alpha_at(m)),
            self.interpolate(epsilon, |m| self.beta_at(m)),
        ))
    }

    /// Normalized correlation `nu_eps` between the artificial-noise samples
    /// despread from aligned and from delayed windows. Zero for delays of a
    /// full symbol or more.
    pub fn an_correlation(&self, epsilon: f64) -> Result<f64> {
        if epsilon >= self.symbol_period() {
            return Ok(0.0);
        }
        self.check_delay(epsilon)?;
        Ok(self.interpolate(epsilon, |m| self.nu_at(m)))
    }

    /// Fills `out` with white Gaussian samples whose despread value has
    /// variance `sigma2` (per-sample variance `sigma2 / dt`).
    pub fn white_noise_into<R: Rng + ?Sized>(&self, sigma2: f64, rng: &mut R, out: &mut [f64]) {
        if sigma2 == 0.0 {
            out.iter_mut().for_each(|v| *v = 0.0);
            return;
        }
        let sd = (sigma2 / self.dt()).sqrt();
        for v in out.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *v = sd * z;
        }
    }

    /// One symbol of artificial noise projected onto the orthogonal
    /// complement of the navigation pulse, written into `out`.
    pub fn projected_an_into<R: Rng + ?Sized>(&self, sigma2_an: f64, rng: &mut R, out: &mut [f64]) {
        self.white_noise_into(sigma2_an, rng, out);
        if sigma2_an == 0.0 {
            return;
        }
        let energy = self.inner(&self.s_p, &self.s_p);
        let rho = self.inner(out, &self.s_p) / energy;
        for (v, p) in out.iter_mut().zip(&self.s_p) {
            *v -= rho * p;
        }
    }

    /// Allocating form of [`SymbolWaveforms::projected_an_into`].
    pub fn generate_projected_an<R: Rng + ?Sized>(&self, sigma2_an: f64, rng: &mut R) -> Vec<f64> {
        let mut out = vec![0.0; self.samples_per_symbol()];
        self.projected_an_into(sigma2_an, rng, &mut out);
        out
    }
}

/// Free-function form of [`SymbolWaveforms::generate_projected_an`].
pub fn generate_projected_an<R: Rng + ?Sized>(sigma2_an: f64, waveforms: &SymbolWaveforms, rng: &mut R) -> Result<Vec<f64>> {
    if !(sigma2_an >= 0.0) {
        return Err(invalid("sigma2_an", format!("{sigma2_an} must be non-negative")));
    }
    Ok(waveforms.generate_projected_an(sigma2_an, rng))
}

/// `(alpha, beta)` for a pulse and authentication code.
pub fn cross_gains(pulse: &ChipPulse, code_a: &SpreadingCode, epsilon: f64) -> Result<(f64, f64)> {
    auth_only(pulse, code_a)?.cross_gains(epsilon)
}

/// `nu_eps` for a pulse and authentication code.
pub fn an_correlation(pulse: &ChipPulse, code_a: &SpreadingCode, epsilon: f64) -> Result<f64> {
    auth_only(pulse, code_a)?.an_correlation(epsilon)
}

fn auth_only(pulse: &ChipPulse, code_a: &SpreadingCode) -> Result<SymbolWaveforms> {
    // The navigation code does not enter alpha, beta or nu.
    SymbolWaveforms::new(pulse.clone(), code_a.clone(), code_a.clone())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Per-source breakdown of a [`SignalFrame`].
#[derive(Debug, Clone, PartialEq)]
pub struct FrameComponents {
    pub navigation: Vec<f64>,
    pub auth: Vec<f64>,
    pub an: Vec<f64>,
}

/// Oversampled real baseband samples over a span of symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalFrame {
    pub samples: Vec<f64>,
    pub components: Option<FrameComponents>,
    /// Start time in symbols.
    pub t0: usize,
}

impl SignalFrame {
    pub fn from_components(components: FrameComponents, t0: usize) -> Result<Self> {
        let n = components.navigation.len();
        if components.auth.len() != n || components.an.len() != n {
            return Err(invalid("components", "component lengths differ"));
        }
        let samples = (0..n)
            .map(|j| components.navigation[j] + components.auth[j] + components.an[j])
            .collect();
        Ok(Self {
            samples,
            components: Some(components),
            t0,
        })
    }

    /// Transmitted composite `s_A = p + x + w*` for the given symbol streams.
    pub fn synthesize<R: Rng + ?Sized>(
        waveforms: &SymbolWaveforms,
        nav_data: &[f64],
        auth_symbols: &[f64],
        sigma2_an: f64,
        rng: &mut R,
        t0: usize,
    ) -> Result<Self> {
        if nav_data.len() != auth_symbols.len() {
            return Err(invalid("auth_symbols", "must match nav_data length"));
        }
        let l = waveforms.samples_per_symbol();
        let mut c = FrameComponents {
            navigation: Vec::with_capacity(l * nav_data.len()),
            auth: Vec::with_capacity(l * nav_data.len()),
            an: Vec::with_capacity(l * nav_data.len()),
        };
        let mut an = vec![0.0; l];
        for (&d, &x) in nav_data.iter().zip(auth_symbols) {
            c.navigation.extend(waveforms.s_p.iter().map(|s| d * s));
            c.auth.extend(waveforms.s_t.iter().map(|s| x * s));
            waveforms.projected_an_into(sigma2_an, rng, &mut an);
            c.an.extend_from_slice(&an);
        }
        Self::from_components(c, t0)
    }

    pub fn symbol_window(&self, waveforms: &SymbolWaveforms, k: usize) -> &[f64] {
        let l = waveforms.samples_per_symbol();
        &self.samples[k * l..(k + 1) * l]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(kind: PulseKind) -> SymbolWaveforms {
        SymbolWaveforms::build(kind, 64, 16, 7).unwrap()
    }

    #[test]
    fn galileo_pulse_levels() {
        let p = make_chip_pulse(PulseKind::GalileoSignedRect, 16).unwrap();
        let a = GALILEO_CHIP_PERIOD.sqrt().recip();
        for (j, &s) in p.samples().iter().enumerate() {
            let want = if j < 8 { a } else { -a };
            assert!(((s - want) / a).abs() < 1e-12);
        }
        assert!((p.energy() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_horn_middle_is_zero() {
        let p = make_chip_pulse(PulseKind::NarrowSupportTwoHorn, 16).unwrap();
        assert!(p.samples()[2..14].iter().all(|&s| s == 0.0));
        assert!(p.samples()[0] > 0.0 && p.samples()[15] < 0.0);
        assert!((p.energy() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pulse_errors() {
        assert!(make_chip_pulse(PulseKind::GalileoSignedRect, 9).is_err());
        assert!(make_chip_pulse(PulseKind::GalileoSignedRect, 6).is_err());
        assert!(make_chip_pulse(PulseKind::NarrowSupportTwoHorn, 12).is_err());
        assert!(matches!(
            make_chip_pulse(PulseKind::Custom, 16),
            Err(Error::UnsupportedPulse(_))
        ));
        let c = ChipPulse::custom(vec![1.0, 2.0, 3.0, 0.5], 1e-6).unwrap();
        assert!((c.energy() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn code_pair_is_orthogonal() {
        let (c, ca) = make_code_pair(1024, 1).unwrap();
        assert_eq!(c.dot(&ca), 0.0);
        let a = 1.0 / 32.0;
        assert!(c.chips().iter().chain(ca.chips()).all(|&v| v == a || v == -a));
        assert!((c.dot(&c) - 1.0).abs() < 1e-12);
        assert!(matches!(make_code_pair(1000, 1), Err(Error::CodeLengthNotPowerOfTwo(1000))));
        assert!(make_code_pair(1, 1).is_err());
        let (c4, a4) = make_code_pair(4, 99).unwrap();
        assert_eq!(c4.dot(&a4), 0.0);
    }

    #[test]
    fn code_pair_deterministic() {
        assert_eq!(make_code_pair(256, 5).unwrap(), make_code_pair(256, 5).unwrap());
        assert_ne!(make_code_pair(256, 5).unwrap(), make_code_pair(256, 6).unwrap());
    }

    #[test]
    fn symbol_synthesis_and_despreading() {
        let w = small(PulseKind::GalileoSignedRect);
        let up = synthesize_symbol(1.0, w.auth_code(), w.pulse());
        assert!((w.despread(&up) - 1.0).abs() < 1e-10);
        let zero = synthesize_symbol(0.0, w.auth_code(), w.pulse());
        assert!(zero.iter().all(|&v| v == 0.0));
        let dn = synthesize_symbol(-1.0, w.nav_code(), w.pulse());
        let dp = synthesize_symbol(1.0, w.nav_code(), w.pulse());
        assert!(dn.iter().zip(&dp).all(|(a, b)| *a == -*b));
        assert!(w.inner(&w.s_p, &w.s_t).abs() < 1e-10);
    }

    #[test]
    fn projected_an_is_orthogonal() {
        let w = small(PulseKind::GalileoSignedRect);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let an = generate_projected_an(1.0, &w, &mut rng).unwrap();
        let norm = w.inner(&an, &an).sqrt();
        assert!(w.inner(&an, &w.s_p).abs() <= 1e-10 * norm);
        let z = generate_projected_an(0.0, &w, &mut rng).unwrap();
        assert!(z.iter().all(|&v| v == 0.0));
        assert!(generate_projected_an(-1.0, &w, &mut rng).is_err());
    }

    #[test]
    fn zero_delay_gains() {
        for kind in [PulseKind::GalileoSignedRect, PulseKind::NarrowSupportTwoHorn] {
            let w = small(kind);
            let (a, b) = w.cross_gains(0.0).unwrap();
            assert!((a - 1.0).abs() < 1e-10 && b.abs() < 1e-10);
            assert!((w.an_correlation(0.0).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn delay_range_checks() {
        let w = small(PulseKind::GalileoSignedRect);
        let ts = w.symbol_period();
        assert!(w.cross_gains(-1e-12).is_err());
        assert!(w.cross_gains(ts).is_err());
        assert_eq!(w.an_correlation(ts).unwrap(), 0.0);
        assert_eq!(w.an_correlation(2.0 * ts).unwrap(), 0.0);
        assert!(w.an_correlation(-1e-9).is_err());
    }

    #[test]
    fn small_delay_reduces_gain() {
        let w = SymbolWaveforms::build(PulseKind::GalileoSignedRect, 64, 64, 1).unwrap();
        let eps = 0.04 * w.chip_period();
        let (a, b) = w.cross_gains(eps).unwrap();
        assert!(a < 1.0);
        // previous-symbol leakage comes from one chip edge only
        assert!(b.abs() <= 0.04 / 64.0 + 1e-12, "b={b}");
        assert!(w.an_correlation(eps).unwrap() < 1.0);
    }

    #[test]
    fn frame_components_sum() {
        let w = small(PulseKind::GalileoSignedRect);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = SignalFrame::synthesize(&w, &[1.0, -1.0, 1.0], &[0.3, -1.2, 0.9], 1.0, &mut rng, 0).unwrap();
        let c = f.components.as_ref().unwrap();
        for j in 0..f.samples.len() {
            let s = c.navigation[j] + c.auth[j] + c.an[j];
            assert!((s - f.samples[j]).abs() <= 1e-10 * s.abs().max(1.0));
        }
        // legacy receiver sees only the navigation data
        for (k, d) in [1.0, -1.0, 1.0].iter().enumerate() {
            let got = w.despread_navigation(f.symbol_window(&w, k));
            assert!((got - d).abs() < 1e-9);
        }
    }
}
