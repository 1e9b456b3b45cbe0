//! Experiment configuration: built-in defaults mirrored by the committed
//! files under `configs/`, overridable with `--config <file>`.

use serde::Deserialize;

use nilcycle_core::rational::{parse_rational, Rational};

use crate::CliError;

fn default_seed() -> u64 {
    0x6e696c // "nil"
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Prop41Config {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "d_centers")]
    pub centers: usize,
    #[serde(default = "d_x0_min")]
    pub x0_min: f64,
    #[serde(default = "d_x0_max")]
    pub x0_max: f64,
    #[serde(default = "d_samples")]
    pub samples: usize,
    /// Magnitude of each single-condition violation, exact rational text.
    #[serde(default = "d_violation")]
    pub violation: String,
}

fn d_centers() -> usize {
    10
}
fn d_x0_min() -> f64 {
    0.02
}
fn d_x0_max() -> f64 {
    0.2
}
fn d_samples() -> usize {
    20
}
fn d_violation() -> String {
    "1/1000".into()
}

impl Default for Prop41Config {
    fn default() -> Self {
        Prop41Config {
            seed: default_seed(),
            centers: d_centers(),
            x0_min: d_x0_min(),
            x0_max: d_x0_max(),
            samples: d_samples(),
            violation: d_violation(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Prop42Config {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "d_42_samples")]
    pub samples: usize,
}

fn d_42_samples() -> usize {
    5
}

impl Default for Prop42Config {
    fn default() -> Self {
        Prop42Config {
            seed: default_seed(),
            samples: d_42_samples(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Prop43Config {
    #[serde(default = "d_k")]
    pub k: usize,
    /// Ladder top magnitude, exact rational text.
    #[serde(default = "d_eps")]
    pub eps: String,
    /// Per-rung ratio, exact rational text.
    #[serde(default = "d_ratio")]
    pub ratio: String,
    #[serde(default = "d_top_sign")]
    pub top_sign: i32,
    #[serde(default = "d_r_min")]
    pub r_min: f64,
    #[serde(default = "d_r_max")]
    pub r_max: f64,
    #[serde(default = "d_grid")]
    pub grid: usize,
    #[serde(default = "d_estimate_rank")]
    pub estimate_rank: bool,
}

fn d_k() -> usize {
    2
}
fn d_eps() -> String {
    "1/10".into()
}
fn d_ratio() -> String {
    "1/40".into()
}
fn d_top_sign() -> i32 {
    -1
}
fn d_r_min() -> f64 {
    0.005
}
fn d_r_max() -> f64 {
    0.3
}
fn d_grid() -> usize {
    48
}
fn d_estimate_rank() -> bool {
    true
}

impl Default for Prop43Config {
    fn default() -> Self {
        Prop43Config {
            k: d_k(),
            eps: d_eps(),
            ratio: d_ratio(),
            top_sign: d_top_sign(),
            r_min: d_r_min(),
            r_max: d_r_max(),
            grid: d_grid(),
            estimate_rank: d_estimate_rank(),
        }
    }
}

impl Prop43Config {
    pub fn eps_rational(&self) -> Result<Rational, CliError> {
        parse_rational(&self.eps).map_err(CliError::Config)
    }
    pub fn ratio_rational(&self) -> Result<Rational, CliError> {
        parse_rational(&self.ratio).map_err(CliError::Config)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl Default for GenericConfig {
    fn default() -> Self {
        GenericConfig {
            seed: default_seed(),
        }
    }
}

/// Loads a JSON config file into `T`, or the default when `path` is `None`.
pub fn load_config<T>(path: Option<&std::path::Path>) -> Result<T, CliError>
where
    T: for<'de> Deserialize<'de> + Default,
{
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))
        }
    }
}
