//! Flat `key = value` run configuration.
//!
//! Blank lines and `#` comments are ignored. Powers are given in dB (`-inf`
//! allowed) and converted to linear once, here. Lists are comma separated;
//! numeric grids may also be written `start:stop:step`. Every key has a
//! default, so an empty file is a valid configuration.

use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fbl::FblInput;
use crate::modulation::Modulation;
use crate::quantizer::{QuantizerSpec, Resolution};
use crate::scene::ChannelScene;
use crate::waveforms::PulseKind;
use crate::db_to_linear;

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub sigma2_x_db: f64,
    pub sigma2_an_db: f64,
    pub sigma2_wb_db: f64,
    pub sigma2_we_db: f64,
    pub quant_bits: Resolution,
    pub modulation: Modulation,
    pub pulse: PulseKind,
    pub n_c: usize,
    pub n_os: usize,
    pub seed: u64,

    pub an_grid_db: Vec<f64>,
    pub wb_list_db: Vec<f64>,
    pub bits_list: Vec<Resolution>,
    pub psk_orders: Vec<u32>,

    pub n_bar: usize,
    pub pi0: f64,
    pub fea_an_db: Vec<f64>,
    pub fea_we_db: Vec<f64>,
    pub fea_bpsk_wb_db: f64,
    pub nma_v: Vec<f64>,
    pub nma_gamma_db: f64,
    pub nma_input: FblInput,

    /// Delay grid upper end, in chip periods.
    pub eps_max_chips: f64,
    pub eps_steps: usize,

    pub sym_we_db: f64,
    pub t_frac_steps: usize,

    /// Monte Carlo sizes; kept separate from `n_c`/`n_os` so calibration
    /// runs stay fast.
    pub mc_symbols: usize,
    pub mc_n_c: usize,
    pub mc_n_os: usize,

    pub psd_symbols: usize,
    pub psd_segment: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            sigma2_x_db: 0.0,
            sigma2_an_db: 0.0,
            sigma2_wb_db: -5.0,
            sigma2_we_db: f64::NEG_INFINITY,
            quant_bits: Resolution::Infinite,
            modulation: Modulation::GaussianReal,
            pulse: PulseKind::GalileoSignedRect,
            n_c: 1024,
            n_os: 64,
            seed: 1,
            an_grid_db: (-10..=20).map(f64::from).collect(),
            wb_list_db: vec![0.0, -5.0, -10.0],
            bits_list: (1..=6).map(Resolution::Bits).chain([Resolution::Infinite]).collect(),
            psk_orders: vec![2, 4, 8, 16],
            n_bar: 250,
            pi0: 1e-3,
            fea_an_db: vec![0.0, 3.0],
            fea_we_db: vec![-5.0, -10.0],
            fea_bpsk_wb_db: 0.0,
            nma_v: vec![20.0, 42.0, 64.0],
            nma_gamma_db: 0.0,
            nma_input: FblInput::GaussianReal,
            eps_max_chips: 0.2,
            eps_steps: 200,
            sym_we_db: -5.0,
            t_frac_steps: 100,
            mc_symbols: 100_000,
            mc_n_c: 64,
            mc_n_os: 16,
            psd_symbols: 64,
            psd_segment: 4096,
        }
    }
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "-inf" => Ok(f64::NEG_INFINITY),
        "inf" | "+inf" => Ok(f64::INFINITY),
        t => t.parse::<f64>().map_err(|e| format!("`{t}`: {e}")),
    }
}

fn parse_scalar<T: FromStr>(s: &str) -> std::result::Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.trim().parse::<T>().map_err(|e| format!("`{}`: {e}", s.trim()))
}

fn parse_list<T: FromStr>(s: &str) -> std::result::Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    let v = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(parse_scalar)
        .collect::<std::result::Result<Vec<T>, String>>()?;
    if v.is_empty() {
        return Err("empty list".into());
    }
    Ok(v)
}

fn parse_grid(s: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 1 {
        let v = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(parse_f64)
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if v.is_empty() {
            return Err("empty list".into());
        }
        return Ok(v);
    }
    if parts.len() != 3 {
        return Err(format!("`{s}` is not start:stop:step"));
    }
    let (a, b, h) = (parse_f64(parts[0])?, parse_f64(parts[1])?, parse_f64(parts[2])?);
    if !(h > 0.0 && b >= a && a.is_finite() && b.is_finite()) {
        return Err(format!("`{s}` is not an increasing finite range"));
    }
    let n = ((b - a) / h + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| a + i as f64 * h).collect())
}

impl Config {
    /// Reads a config file; missing keys keep their defaults.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|reason| Error::Config {
            path: path.to_path_buf(),
            reason,
        })
    }

    /// Parses config text; the error names the offending line.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut c = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
            c.set(k.trim(), v.trim()).map_err(|e| format!("line {}: {} {e}", i + 1, k.trim()))?;
        }
        c.validate()?;
        Ok(c)
    }

    fn set(&mut self, key: &str, v: &str) -> std::result::Result<(), String> {
        match key {
            "sigma2_x_db" => self.sigma2_x_db = parse_f64(v)?,
            "sigma2_an_db" => self.sigma2_an_db = parse_f64(v)?,
            "sigma2_wb_db" => self.sigma2_wb_db = parse_f64(v)?,
            "sigma2_we_db" => self.sigma2_we_db = parse_f64(v)?,
            "quant_bits" => self.quant_bits = parse_scalar(v)?,
            "modulation" => self.modulation = parse_scalar(v)?,
            "pulse" => self.pulse = parse_scalar(v)?,
            "n_c" => self.n_c = parse_scalar(v)?,
            "n_os" => self.n_os = parse_scalar(v)?,
            "seed" => self.seed = parse_scalar(v)?,
            "an_grid_db" => self.an_grid_db = parse_grid(v)?,
            "wb_list_db" => self.wb_list_db = parse_grid(v)?,
            "bits_list" => self.bits_list = parse_list(v)?,
            "psk_orders" => self.psk_orders = parse_list(v)?,
            "n_bar" => self.n_bar = parse_scalar(v)?,
            "pi0" => self.pi0 = parse_f64(v)?,
            "fea_an_db" => self.fea_an_db = parse_grid(v)?,
            "fea_we_db" => self.fea_we_db = parse_grid(v)?,
            "fea_bpsk_wb_db" => self.fea_bpsk_wb_db = parse_f64(v)?,
            "nma_v" => self.nma_v = parse_grid(v)?,
            "nma_gamma_db" => self.nma_gamma_db = parse_f64(v)?,
            "nma_input" => self.nma_input = parse_scalar(v)?,
            "eps_max_chips" => self.eps_max_chips = parse_f64(v)?,
            "eps_steps" => self.eps_steps = parse_scalar(v)?,
            "sym_we_db" => self.sym_we_db = parse_f64(v)?,
            "t_frac_steps" => self.t_frac_steps = parse_scalar(v)?,
            "mc_symbols" => self.mc_symbols = parse_scalar(v)?,
            "mc_n_c" => self.mc_n_c = parse_scalar(v)?,
            "mc_n_os" => self.mc_n_os = parse_scalar(v)?,
            "psd_symbols" => self.psd_symbols = parse_scalar(v)?,
            "psd_segment" => self.psd_segment = parse_scalar(v)?,
            _ => return Err("unknown key".into()),
        }
        Ok(())
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if !(self.pi0 > 0.0 && self.pi0 < 0.5) {
            return Err(format!("pi0 = {} outside (0, 0.5)", self.pi0));
        }
        if self.eps_steps == 0 || self.t_frac_steps == 0 {
            return Err("grid step counts must be positive".into());
        }
        if !(self.eps_max_chips > 0.0) {
            return Err("eps_max_chips must be positive".into());
        }
        if self.psd_segment < 16 || !self.psd_segment.is_power_of_two() {
            return Err("psd_segment must be a power of two >= 16".into());
        }
        for (name, g) in [("an_grid_db", &self.an_grid_db), ("wb_list_db", &self.wb_list_db)] {
            if g.iter().any(|x| x.is_nan()) {
                return Err(format!("{name} contains NaN"));
            }
        }
        if self.an_grid_db.windows(2).any(|w| w[1] <= w[0]) {
            return Err("an_grid_db must be strictly increasing".into());
        }
        Ok(())
    }

    /// Scene built from the scalar power keys.
    pub fn scene(&self) -> Result<ChannelScene> {
        let s = ChannelScene {
            sigma2_x: db_to_linear(self.sigma2_x_db),
            sigma2_an: db_to_linear(self.sigma2_an_db),
            sigma2_wb: db_to_linear(self.sigma2_wb_db),
            sigma2_we: db_to_linear(self.sigma2_we_db),
            quantizer: QuantizerSpec::design(self.quant_bits, 1.0)?,
            epsilon: 0.0,
        };
        s.validate()?;
        Ok(s)
    }

    /// All keys and values in declaration order, for run manifests.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        fn join<T: ToString>(v: &[T]) -> String {
            v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
        }
        vec![
            ("sigma2_x_db", self.sigma2_x_db.to_string()),
            ("sigma2_an_db", self.sigma2_an_db.to_string()),
            ("sigma2_wb_db", self.sigma2_wb_db.to_string()),
            ("sigma2_we_db", self.sigma2_we_db.to_string()),
            ("quant_bits", self.quant_bits.to_string()),
            ("modulation", self.modulation.to_string()),
            ("pulse", self.pulse.name().to_string()),
            ("n_c", self.n_c.to_string()),
            ("n_os", self.n_os.to_string()),
            ("seed", self.seed.to_string()),
            ("an_grid_db", join(&self.an_grid_db)),
            ("wb_list_db", join(&self.wb_list_db)),
            ("bits_list", join(&self.bits_list)),
            ("psk_orders", join(&self.psk_orders)),
            ("n_bar", self.n_bar.to_string()),
            ("pi0", self.pi0.to_string()),
            ("fea_an_db", join(&self.fea_an_db)),
            ("fea_we_db", join(&self.fea_we_db)),
            ("fea_bpsk_wb_db", self.fea_bpsk_wb_db.to_string()),
            ("nma_v", join(&self.nma_v)),
            ("nma_gamma_db", self.nma_gamma_db.to_string()),
            ("nma_input", self.nma_input.to_string()),
            ("eps_max_chips", self.eps_max_chips.to_string()),
            ("eps_steps", self.eps_steps.to_string()),
            ("sym_we_db", self.sym_we_db.to_string()),
            ("t_frac_steps", self.t_frac_steps.to_string()),
            ("mc_symbols", self.mc_symbols.to_string()),
            ("mc_n_c", self.mc_n_c.to_string()),
            ("mc_n_os", self.mc_n_os.to_string()),
            ("psd_symbols", self.psd_symbols.to_string()),
            ("psd_segment", self.psd_segment.to_string()),
        ]
    }
}
