//! Settings from flags and an optional TOML file, resolved into a validated
//! [`RunConfig`]. Flags win over the file, the file wins over defaults.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::classical::Units;
use crate::clock::Chart;
use crate::fock::Spin;
use crate::quadrature::SphereGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartArg {
    Primary,
    Antipodal,
}

impl From<ChartArg> for Chart {
    fn from(c: ChartArg) -> Self {
        match c {
            ChartArg::Primary => Chart::Primary,
            ChartArg::Antipodal => Chart::Antipodal,
        }
    }
}

/// Every tunable, all optional. Doubles as the config-file schema.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Settings {
    /// Spin j (half-integer); alternative to --m-prime
    #[arg(long, global = true)]
    pub j: Option<f64>,
    /// Sector quantum number m' = 2j
    #[arg(long = "m-prime", global = true)]
    pub m_prime: Option<u32>,
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    /// Gauss–Legendre order of the sphere grid (default 2j+2)
    #[arg(long = "quad-order", global = true)]
    pub quad_order: Option<usize>,
    /// VAR:MIN:MAX:COUNT
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub sweep: Option<String>,
    /// RE,IM
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub xi: Option<String>,
    /// RE,IM
    #[arg(long = "xi-prime", global = true, allow_hyphen_values = true)]
    pub xi_prime: Option<String>,
    #[arg(long = "phi-prime", global = true, allow_negative_numbers = true)]
    pub phi_prime: Option<f64>,
    /// Reference chart angle for figure 1
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long, global = true)]
    pub chart: Option<ChartArg>,
    /// Comma-separated m values for clock-trace
    #[arg(long = "m-list", global = true, value_delimiter = ',')]
    pub m_list: Option<Vec<u32>>,
    /// Random samples per property in verify
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Random label pairs for overlap
    #[arg(long, global = true)]
    pub pairs: Option<usize>,
    #[arg(long, global = true)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for sweeps (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

impl Settings {
    pub fn from_toml_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }

    /// Field-wise `self` over `fallback`. `j` and `m-prime` travel together so
    /// a flag for one hides the file's value for the other.
    pub fn over(self, fallback: Settings) -> Settings {
        let (j, m_prime) = if self.j.is_some() || self.m_prime.is_some() {
            (self.j, self.m_prime)
        } else {
            (fallback.j, fallback.m_prime)
        };
        Settings {
            j,
            m_prime,
            omega: self.omega.or(fallback.omega),
            hbar: self.hbar.or(fallback.hbar),
            quad_order: self.quad_order.or(fallback.quad_order),
            sweep: self.sweep.or(fallback.sweep),
            xi: self.xi.or(fallback.xi),
            xi_prime: self.xi_prime.or(fallback.xi_prime),
            phi_prime: self.phi_prime.or(fallback.phi_prime),
            theta: self.theta.or(fallback.theta),
            chart: self.chart.or(fallback.chart),
            m_list: self.m_list.or(fallback.m_list),
            samples: self.samples.or(fallback.samples),
            pairs: self.pairs.or(fallback.pairs),
            format: self.format.or(fallback.format),
            out: self.out.or(fallback.out),
            seed: self.seed.or(fallback.seed),
            threads: self.threads.or(fallback.threads),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub var: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl SweepSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("--sweep expects VAR:MIN:MAX:COUNT, got {text:?}"));
        let parts: Vec<&str> = text.split(':').collect();
        let [var, min, max, count] = parts[..] else {
            return Err(bad());
        };
        let min: f64 = min.trim().parse().map_err(|_| bad())?;
        let max: f64 = max.trim().parse().map_err(|_| bad())?;
        let count: usize = count.trim().parse().map_err(|_| bad())?;
        let spec = SweepSpec {
            var: var.trim().to_ascii_lowercase(),
            min,
            max,
            count,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.count < 2 {
            return Err(CliError::Usage(format!("sweep count must be at least 2, got {}", self.count)));
        }
        if !(self.min.is_finite() && self.max.is_finite()) || !(self.min < self.max) {
            return Err(CliError::Usage(format!(
                "sweep range must satisfy MIN < MAX, got {}..{}",
                self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| self.min + (self.max - self.min) * (k as f64 / last))
            .collect()
    }

    pub fn expect_var(&self, allowed: &[&str]) -> Result<(), CliError> {
        if allowed.contains(&self.var.as_str()) {
            Ok(())
        } else {
            Err(CliError::Usage(format!(
                "sweep variable {:?} not valid here; expected one of {}",
                self.var,
                allowed.join(", ")
            )))
        }
    }
}

pub fn parse_complex(text: &str, flag: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Usage(format!("--{flag} expects RE,IM, got {text:?}"));
    let (re, im) = text.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

/// The effective configuration. Echoed into JSON metadata, minus the output
/// path and thread count, which must not change the content.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub units: Units,
    pub j: f64,
    pub m_prime: u32,
    pub quad_order: usize,
    pub sweep: Option<SweepSpec>,
    pub xi: Option<[f64; 2]>,
    pub xi_prime: Option<[f64; 2]>,
    pub phi_prime: f64,
    pub theta: Option<f64>,
    pub chart: Option<ChartArg>,
    pub m_list: Option<Vec<u32>>,
    pub samples: usize,
    pub pairs: Option<usize>,
    pub format: Format,
    pub seed: u64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub threads: Option<usize>,
}

pub const DEFAULT_TWO_J: u32 = 10;
pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_SAMPLES: usize = 100;

impl RunConfig {
    pub fn resolve(s: Settings) -> Result<Self, CliError> {
        let spin = match (s.j, s.m_prime) {
            (Some(_), Some(_)) => {
                return Err(CliError::Usage("give exactly one of --j and --m-prime".into()));
            }
            (Some(j), None) => Spin::from_j(j).map_err(|e| CliError::Usage(e.to_string()))?,
            (None, Some(m)) => Spin::from_m_prime(m),
            (None, None) => Spin::from_two_j(DEFAULT_TWO_J),
        };
        let units = Units {
            hbar: s.hbar.unwrap_or(1.0),
            omega: s.omega.unwrap_or(1.0),
        };
        if !(units.hbar > 0.0 && units.hbar.is_finite() && units.omega > 0.0 && units.omega.is_finite()) {
            return Err(CliError::Usage("--hbar and --omega must be positive".into()));
        }
        let quad_order = s.quad_order.unwrap_or_else(|| SphereGrid::for_spin(spin).polar_order());
        if quad_order == 0 {
            return Err(CliError::Usage("--quad-order must be positive".into()));
        }
        let sweep = s.sweep.as_deref().map(SweepSpec::parse).transpose()?;
        let xi = s.xi.as_deref().map(|t| parse_complex(t, "xi")).transpose()?;
        let xi_prime = s.xi_prime.as_deref().map(|t| parse_complex(t, "xi-prime")).transpose()?;
        if let Some(list) = &s.m_list {
            if list.is_empty() {
                return Err(CliError::Usage("--m-list must not be empty".into()));
            }
        }
        if s.threads == Some(0) {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        if s.samples == Some(0) || s.pairs == Some(0) {
            return Err(CliError::Usage("--samples and --pairs must be positive".into()));
        }
        let finite = |v: Option<f64>, name: &str| match v {
            Some(x) if !x.is_finite() => Err(CliError::Usage(format!("--{name} must be finite"))),
            _ => Ok(()),
        };
        finite(s.phi_prime, "phi-prime")?;
        finite(s.theta, "theta")?;
        Ok(RunConfig {
            units,
            j: spin.j(),
            m_prime: spin.m_prime(),
            quad_order,
            sweep,
            xi: xi.map(|c| [c.re, c.im]),
            xi_prime: xi_prime.map(|c| [c.re, c.im]),
            phi_prime: s.phi_prime.unwrap_or(0.0),
            theta: s.theta,
            chart: s.chart,
            m_list: s.m_list,
            samples: s.samples.unwrap_or(DEFAULT_SAMPLES),
            pairs: s.pairs,
            format: s.format.unwrap_or_default(),
            seed: s.seed.unwrap_or(DEFAULT_SEED),
            out: s.out,
            threads: s.threads,
        })
    }

    pub fn spin(&self) -> Spin {
        Spin::from_m_prime(self.m_prime)
    }

    pub fn xi_or(&self, default: Complex64) -> Complex64 {
        self.xi.map_or(default, |[re, im]| Complex64::new(re, im))
    }

    pub fn xi_prime_or(&self, default: Complex64) -> Complex64 {
        self.xi_prime.map_or(default, |[re, im]| Complex64::new(re, im))
    }

    /// Sphere grid at the configured order; rejects orders below the exact
    /// degree for this spin.
    pub fn exact_sphere_grid(&self) -> Result<SphereGrid, CliError> {
        let spin = self.spin();
        let minimum = SphereGrid::for_spin(spin).polar_order();
        if self.quad_order < minimum {
            return Err(CliError::Usage(format!(
                "--quad-order {} is below the exact order {minimum} for j = {spin}",
                self.quad_order
            )));
        }
        self.sphere_grid()
    }

    /// Sphere grid at the configured order, however coarse.
    pub fn sphere_grid(&self) -> Result<SphereGrid, CliError> {
        Ok(SphereGrid::for_spin_with_order(self.spin(), self.quad_order)?)
    }

    /// The sweep if given (checked against `allowed`), else the default.
    pub fn sweep_values(&self, allowed: &[&str], default: impl FnOnce() -> Vec<f64>) -> Result<Vec<f64>, CliError> {
        match &self.sweep {
            Some(spec) => {
                spec.expect_var(allowed)?;
                Ok(spec.values())
            }
            None => Ok(default()),
        }
    }

    pub fn default_tau_grid(&self) -> Vec<f64> {
        let period = TAU / self.units.omega;
        (0..64).map(|k| period * f64::from(k) / 64.0).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_parsing() {
        let s = SweepSpec::parse("theta:-0.5:1.5:5").unwrap();
        assert_eq!(s.values(), vec![-0.5, 0.0, 0.5, 1.0, 1.5]);
        assert!(SweepSpec::parse("theta:1:1:5").is_err());
        assert!(SweepSpec::parse("theta:0:1:1").is_err());
        assert!(SweepSpec::parse("theta:0:1").is_err());
    }

    #[test]
    fn flags_override_file() {
        let flags = Settings {
            m_prime: Some(4),
            omega: Some(2.0),
            ..Default::default()
        };
        let file: Settings = toml::from_str("j = 7.5\nomega = 3.0\nhbar = 0.5\nseed = 9").unwrap();
        let cfg = RunConfig::resolve(flags.over(file)).unwrap();
        assert_eq!(cfg.m_prime, 4);
        assert_eq!(cfg.units, Units { hbar: 0.5, omega: 2.0 });
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn both_spin_forms_rejected() {
        let s = Settings {
            j: Some(1.0),
            m_prime: Some(2),
            ..Default::default()
        };
        assert!(RunConfig::resolve(s).is_err());
    }

    #[test]
    fn unknown_config_keys_rejected() {
        assert!(toml::from_str::<Settings>("spin = 3").is_err());
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("-1.5, 2", "xi").unwrap(), Complex64::new(-1.5, 2.0));
        assert!(parse_complex("1.5", "xi").is_err());
    }
}
