//! Named experiments: each writes one CSV per series plus a
//! `<name>_manifest.txt` of `key = value` lines into an output directory.
//! Outputs depend only on the configuration, so reruns are byte-identical.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::attacks::{
    delay_attack_curve, delay_attack_points, detectable_delay_threshold, fea_curve, nma_curve,
    symbol_prediction_success,
};
use crate::capacity::{sweep, SweepVariable};
use crate::config::Config;
use crate::curve::{format_value, write_table, BoundCurve};
use crate::error::{Error, Result};
use crate::fbl::{design_codebook, FblInput};
use crate::modulation::Modulation;
use crate::protocol_sim::{measure_snr, run_phase1, run_phase2};
use crate::quantizer::{QuantizerSpec, Resolution};
use crate::scene::ratio;
use crate::waveforms::{PulseKind, SymbolWaveforms};
use crate::{db_to_linear, linear_to_db};

pub const EXPERIMENTS: [&str; 10] = [
    "capacity-vs-an",
    "quantization",
    "mpsk",
    "fea-gaussian",
    "fea-bpsk",
    "fea-vs-nma",
    "delay-attack",
    "symbol-prediction",
    "snr-calibration",
    "pulse-psd",
];

/// Files written by one experiment and the extra manifest entries it produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub experiment: String,
    pub files: Vec<PathBuf>,
    pub manifest: PathBuf,
    pub results: Vec<(String, String)>,
}

struct Run<'a> {
    cfg: &'a Config,
    dir: &'a Path,
    files: Vec<PathBuf>,
    results: Vec<(String, String)>,
}

impl Run<'_> {
    fn path(&mut self, name: &str) -> PathBuf {
        let p = self.dir.join(name);
        self.files.push(p.clone());
        p
    }

    fn curve(&mut self, name: &str, curve: &BoundCurve, constants: &[(&str, f64)]) -> Result<()> {
        let p = self.path(name);
        curve.write_csv(&p, constants)
    }

    fn record(&mut self, key: impl Into<String>, value: impl ToString) {
        self.results.push((key.into(), value.to_string()));
    }
}

/// Compact dB label for file names: `-5` stays `-5`, `2.5` becomes `2.5`.
fn tag(x: f64) -> String {
    x.to_string()
}

/// Runs experiment `name` with `config` into `out_dir`, creating it if needed.
pub fn run_experiment(name: &str, config: &Config, out_dir: &Path) -> Result<RunSummary> {
    if !EXPERIMENTS.contains(&name) {
        return Err(Error::UnknownExperiment(name.to_string()));
    }
    std::fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut run = Run {
        cfg: config,
        dir: out_dir,
        files: Vec::new(),
        results: Vec::new(),
    };
    match name {
        "capacity-vs-an" => capacity_vs_an(&mut run)?,
        "quantization" => quantization(&mut run)?,
        "mpsk" => mpsk(&mut run)?,
        "fea-gaussian" => fea_family(&mut run, "fea_gaussian", FblInput::GaussianReal, config.sigma2_wb_db)?,
        "fea-bpsk" => fea_family(&mut run, "fea_bpsk", FblInput::Bpsk, config.fea_bpsk_wb_db)?,
        "fea-vs-nma" => fea_vs_nma(&mut run)?,
        "delay-attack" => delay_attack(&mut run)?,
        "symbol-prediction" => symbol_prediction(&mut run)?,
        "snr-calibration" => snr_calibration(&mut run)?,
        "pulse-psd" => pulse_psd(&mut run)?,
        _ => unreachable!("name checked against EXPERIMENTS"),
    }

    let manifest = out_dir.join(format!("{name}_manifest.txt"));
    let mut text = String::new();
    let _ = writeln!(text, "experiment = {name}");
    let _ = writeln!(text, "version = {}", env!("CARGO_PKG_VERSION"));
    for (k, v) in config.entries() {
        let _ = writeln!(text, "{k} = {v}");
    }
    for (k, v) in &run.results {
        let _ = writeln!(text, "{k} = {v}");
    }
    for f in &run.files {
        if let Some(n) = f.file_name() {
            let _ = writeln!(text, "file = {}", n.to_string_lossy());
        }
    }
    std::fs::write(&manifest, text).map_err(|source| Error::Io {
        path: manifest.clone(),
        source,
    })?;
    Ok(RunSummary {
        experiment: name.to_string(),
        files: run.files,
        manifest,
        results: run.results,
    })
}

fn capacity_vs_an(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let base = cfg.scene()?;
    for &wb in &cfg.wb_list_db {
        let scene = base.with_bob_noise(db_to_linear(wb));
        let c = sweep(&SweepVariable::Sigma2AnDb(cfg.an_grid_db.clone()), &scene, cfg.modulation)?;
        run.curve(&format!("capacity_vs_an_wb{}.csv", tag(wb)), &c, &[("sigma2_wb_db", wb)])?;
        if let Some(c0) = c.y_at(0.0) {
            run.record(format!("c_a_an0_wb{}", tag(wb)), c0);
        }
    }
    Ok(())
}

fn quantization(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let base = cfg.scene()?;
    let grid = SweepVariable::Sigma2AnDb(cfg.an_grid_db.clone());
    let mut curves = Vec::new();
    for &bits in &cfg.bits_list {
        let scene = base.with_quantizer(QuantizerSpec::design(bits, 1.0)?);
        let c = sweep(&grid, &scene, cfg.modulation)?;
        let b = match bits {
            Resolution::Bits(b) => b as f64,
            Resolution::Infinite => f64::INFINITY,
        };
        run.curve(&format!("quantization_b{bits}.csv"), &c, &[("bits", b)])?;
        curves.push((bits, c));
    }
    if let Some((_, reference)) = curves.iter().find(|(b, _)| *b == Resolution::Infinite) {
        for (bits, c) in curves.iter().filter(|(b, _)| *b != Resolution::Infinite) {
            let loss = reference
                .ys()
                .zip(c.ys())
                .map(|(a, b)| a - b)
                .fold(f64::NEG_INFINITY, f64::max);
            run.record(format!("max_loss_b{bits}"), loss);
        }
    }
    Ok(())
}

fn mpsk(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let scene = cfg.scene()?;
    for &m in &cfg.psk_orders {
        let c = sweep(&SweepVariable::Sigma2AnDb(cfg.an_grid_db.clone()), &scene, Modulation::Mpsk(m))?;
        run.curve(&format!("mpsk_m{m}.csv"), &c, &[("m", m as f64)])?;
    }
    Ok(())
}

fn n_grid(n_bar: usize) -> Vec<usize> {
    (1..=n_bar).collect()
}

fn fea_family(run: &mut Run, prefix: &str, input: FblInput, wb_db: f64) -> Result<()> {
    let cfg = run.cfg;
    let base = cfg.scene()?.with_bob_noise(db_to_linear(wb_db));
    let design = design_codebook(base.gamma_b(), cfg.n_bar, cfg.pi0, input)?;
    run.record("gamma_b_db", linear_to_db(base.gamma_b()));
    run.record("log2_gamma", design.log2_gamma);
    run.record("log10_gamma", design.log2_gamma * std::f64::consts::LOG10_2);
    let ns = n_grid(cfg.n_bar);
    for &an in &cfg.fea_an_db {
        let s = base.with_an(db_to_linear(an)).with_eve_noise(0.0);
        let c = fea_curve(format!("with_an_{an}"), &design, s.gamma_e(), input, &ns)?;
        run.curve(&format!("{prefix}_an{}.csv", tag(an)), &c, &[("gamma_e_db", linear_to_db(s.gamma_e()))])?;
    }
    for &we in &cfg.fea_we_db {
        let s = base.with_an(0.0).with_eve_noise(db_to_linear(we));
        let c = fea_curve(format!("no_an_{we}"), &design, s.gamma_e(), input, &ns)?;
        run.curve(&format!("{prefix}_we{}.csv", tag(we)), &c, &[("gamma_e_db", linear_to_db(s.gamma_e()))])?;
    }
    Ok(())
}

fn fea_vs_nma(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let gamma = db_to_linear(cfg.nma_gamma_db);
    let design = design_codebook(gamma, cfg.n_bar, cfg.pi0, cfg.nma_input)?;
    run.record("log2_gamma", design.log2_gamma);
    let ns = n_grid(cfg.n_bar);
    let c = fea_curve("proposed", &design, gamma, cfg.nma_input, &ns)?;
    run.curve("fea_vs_nma_proposed.csv", &c, &[("gamma_db", cfg.nma_gamma_db)])?;
    for &v in &cfg.nma_v {
        let c = nma_curve(v, cfg.n_bar, gamma, &ns)?;
        run.curve(&format!("fea_vs_nma_v{}.csv", tag(v)), &c, &[("v", v)])?;
    }
    Ok(())
}

/// Delay grid `i / steps · max_chips · T_c`, `i = 0..=steps`.
pub fn epsilon_grid(chip_period: f64, max_chips: f64, steps: usize) -> Vec<f64> {
    (0..=steps)
        .map(|i| i as f64 / steps as f64 * max_chips * chip_period)
        .collect()
}

fn delay_attack(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let scene = cfg.scene()?;
    for kind in [PulseKind::GalileoSignedRect, PulseKind::NarrowSupportTwoHorn] {
        let w = SymbolWaveforms::build(kind, cfg.n_c, cfg.n_os, cfg.seed)?;
        let grid = epsilon_grid(w.chip_period(), cfg.eps_max_chips, cfg.eps_steps);
        let pts = delay_attack_points(&w, &scene, cfg.modulation, &grid)?;
        let tc = w.chip_period();
        let p = run.path(&format!("delay_attack_{}.csv", kind.name()));
        write_table(
            &p,
            &["epsilon_over_tc", "alpha", "beta", "nu", "gamma_b_prime", "c_a"],
            pts.iter().map(|q| {
                [q.epsilon / tc, q.alpha, q.beta, q.nu, q.gamma_b_prime, q.c_a].map(format_value)
            }),
        )?;
        let curve = delay_attack_curve(&w, &scene, cfg.modulation, &grid)?;
        if let Some(eps) = detectable_delay_threshold(&curve, f64::MIN_POSITIVE)? {
            run.record(format!("eps_star_over_tc_{}", kind.name()), eps);
        }
    }
    Ok(())
}

fn symbol_prediction(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let scene = cfg.scene()?;
    let we = db_to_linear(cfg.sym_we_db);
    let steps = cfg.t_frac_steps;
    let fracs: Vec<f64> = (1..=steps).map(|k| k as f64 / steps as f64).collect();
    for (name, gamma) in [
        ("no_an", ratio(scene.sigma2_x, we)),
        ("an", ratio(scene.sigma2_x, scene.sigma2_an + we)),
    ] {
        let pts = fracs
            .iter()
            .map(|&t| symbol_prediction_success(gamma, t).map(|p| (t, p)))
            .collect::<Result<Vec<_>>>()?;
        let c = BoundCurve::new(name, "t_frac", "p_succ", pts)?;
        run.curve(&format!("symbol_prediction_{name}.csv"), &c, &[("gamma_e_db", linear_to_db(gamma))])?;
    }
    Ok(())
}

fn snr_calibration(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let scene = cfg.scene()?;
    let w = SymbolWaveforms::build(cfg.pulse, cfg.mc_n_c, cfg.mc_n_os, cfg.seed)?;
    let p1 = run_phase1(&w, &scene, cfg.mc_symbols, Modulation::GaussianReal, cfg.seed)?;
    let p2 = run_phase2(&p1, &scene);
    let rows = [
        ("eve_phase1", scene.gamma_e(), measure_snr(&p1.eve, &p1.x, scene.sigma2_x)?),
        (
            "bob_phase1",
            ratio(scene.sigma2_x, scene.sigma2_an + scene.sigma2_wb),
            measure_snr(&p1.bob, &p1.x, scene.sigma2_x)?,
        ),
        ("bob_phase2", scene.gamma_b(), measure_snr(&p2.bob_clean, &p1.x, scene.sigma2_x)?),
    ];
    let p = run.path("snr_calibration.csv");
    write_table(
        &p,
        &["receiver", "analytic_gamma", "empirical_gamma", "std_err", "rel_err", "n"],
        rows.iter().map(|(name, a, e)| {
            vec![
                name.to_string(),
                format_value(*a),
                format_value(e.gamma),
                format_value(e.std_err),
                format_value((e.gamma - a) / a),
                e.n.to_string(),
            ]
        }),
    )?;
    for (name, a, e) in &rows {
        run.record(format!("rel_err_{name}"), (e.gamma - a) / a);
    }
    Ok(())
}

/// One-sided Welch PSD with a Hann window and 50% overlap.
/// Returns `(frequency_hz, psd)` pairs for bins `0..=segment/2`.
pub fn welch_psd(samples: &[f64], fs: f64, segment: usize) -> Result<Vec<(f64, f64)>> {
    if segment < 2 || samples.len() < segment {
        return Err(crate::error::invalid("segment", "longer than the signal or shorter than 2"));
    }
    let window: Vec<f64> = (0..segment)
        .map(|i| {
            let s = (std::f64::consts::PI * i as f64 / segment as f64).sin();
            s * s
        })
        .collect();
    let wpow: f64 = window.iter().map(|w| w * w).sum();
    let fft = FftPlanner::new().plan_fft_forward(segment);
    let hop = segment / 2;
    let half = segment / 2;
    let mut acc = vec![0.0; half + 1];
    let mut count = 0usize;
    let mut buf = vec![Complex::new(0.0, 0.0); segment];
    let mut start = 0;
    while start + segment <= samples.len() {
        for (b, (x, w)) in buf.iter_mut().zip(samples[start..start + segment].iter().zip(&window)) {
            *b = Complex::new(x * w, 0.0);
        }
        fft.process(&mut buf);
        for (k, a) in acc.iter_mut().enumerate() {
            *a += buf[k].norm_sqr();
        }
        count += 1;
        start += hop;
    }
    let scale = 1.0 / (fs * wpow * count as f64);
    Ok(acc
        .iter()
        .enumerate()
        .map(|(k, &a)| {
            let one_sided = if k == 0 || k == half { 1.0 } else { 2.0 };
            (k as f64 * fs / segment as f64, a * scale * one_sided)
        })
        .collect())
}

fn pulse_psd(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    for kind in [PulseKind::GalileoSignedRect, PulseKind::NarrowSupportTwoHorn] {
        let w = SymbolWaveforms::build(kind, cfg.mc_n_c, cfg.mc_n_os, cfg.seed)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut x = Vec::with_capacity(cfg.psd_symbols * w.samples_per_symbol());
        for _ in 0..cfg.psd_symbols {
            let a = if rng.random::<bool>() { 1.0 } else { -1.0 };
            x.extend(w.s_t.iter().map(|s| a * s));
        }
        let fs = 1.0 / w.dt();
        let psd = welch_psd(&x, fs, cfg.psd_segment)?;
        let df = fs / cfg.psd_segment as f64;
        let integral: f64 = psd.iter().map(|p| p.1).sum::<f64>() * df;
        let power = x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64;
        let p = run.path(&format!("pulse_psd_{}.csv", kind.name()));
        write_table(&p, &["freq_hz", "psd"], psd.iter().map(|&(f, v)| [f, v].map(format_value)))?;
        run.record(format!("power_{}", kind.name()), power);
        run.record(format!("psd_integral_{}", kind.name()), integral);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn unknown_experiment() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            run_experiment("nope", &Config::default(), dir.path()),
            Err(Error::UnknownExperiment(_))
        ));
    }

    #[test]
    fn welch_integrates_to_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x: Vec<f64> = (0..1 << 15).map(|_| StandardNormal.sample(&mut rng)).collect();
        let fs = 2.0e6;
        let psd = welch_psd(&x, fs, 1024).unwrap();
        let integral: f64 = psd.iter().map(|p| p.1).sum::<f64>() * fs / 1024.0;
        let power = x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64;
        assert!((integral / power - 1.0).abs() < 0.01, "{integral} vs {power}");
        // White noise: flat level σ²·2/fs on the interior bins.
        let mid: f64 = psd[100..400].iter().map(|p| p.1).sum::<f64>() / 300.0;
        assert!((mid * fs / 2.0 - 1.0).abs() < 0.05);
    }

    #[test]
    fn welch_tone_peaks_at_its_bin() {
        let fs = 1024.0;
        let x: Vec<f64> = (0..8192).map(|i| (2.0 * std::f64::consts::PI * 64.0 * i as f64 / fs).cos()).collect();
        let psd = welch_psd(&x, fs, 256).unwrap();
        let (kmax, _) = psd
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap())
            .unwrap();
        assert_eq!(psd[kmax].0, 64.0);
    }
}
