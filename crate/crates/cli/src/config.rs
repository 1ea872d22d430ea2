//! TOML run configuration.
//!
//! ```toml
//! [system]
//! beta1 = "a1 + a2 + 2*a1^2 + a2^2"
//! beta2 = [{ i = 1, j = 0, num = 1 }, { i = 0, j = 1, num = 1 }, { i = 1, j = 1, num = 2 }]
//! l2 = "1 + a1 + 2*a2 + a1^2 + a2^3"
//! theta0 = 0.05
//! order = 4
//!
//! [transform]
//! k = 2
//!
//! [classify]
//! sign_tol = 1e-9
//! delta_tol = 1e-9
//!
//! [simulate]
//! steps = 5000
//! probes = [0.17, 0.195]
//!
//! [output]
//! dir = "out"
//! formats = ["csv", "svg"]
//! ```
//!
//! Every block is optional. Without a `[system]` block the built-in reference
//! system is used.

use std::path::{Path, PathBuf};

use chenciner::series::{check_order, SeriesTerm, DEFAULT_ORDER};
use chenciner::{example, Series, System};
use serde::Deserialize;

use crate::Format;

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub system: Option<SystemBlock>,
    pub transform: TransformBlock,
    pub classify: ClassifyBlock,
    pub simulate: SimulateBlock,
    pub output: OutputBlock,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemBlock {
    pub beta1: SeriesSpec,
    pub beta2: SeriesSpec,
    pub l2: SeriesSpec,
    #[serde(default = "default_theta0")]
    pub theta0: f64,
    pub order: Option<u32>,
}

fn default_theta0() -> f64 {
    example::THETA0
}

/// A series as compact text or as a list of `{i, j, num, den}` records.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum SeriesSpec {
    Text(String),
    Records(Vec<SeriesTerm>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransformBlock {
    pub k: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifyBlock {
    pub sign_tol: Option<f64>,
    pub delta_tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateBlock {
    pub steps: Option<usize>,
    pub origin: Option<f64>,
    pub escape: Option<f64>,
    pub window: Option<usize>,
    pub circle_range: Option<f64>,
    pub circle_match: Option<f64>,
    pub certify: Option<bool>,
    pub probes: Vec<f64>,
    pub bracket: Option<bool>,
    pub phi1: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputBlock {
    pub dir: Option<PathBuf>,
    pub formats: Option<Vec<Format>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Builds the system at `order`, or the built-in one when no block is given.
    /// Only the angle is checked here; genericity is up to the caller.
    pub fn system(&self, order: Option<u32>, theta0: Option<f64>) -> Result<System, String> {
        let Some(block) = &self.system else {
            let order =
                check_order(order.unwrap_or(DEFAULT_ORDER)).map_err(|e| format!("order: {e}"))?;
            let sys = example::system_with_order(order);
            return match theta0 {
                Some(t) => sys.with_theta0(t).map_err(|e| format!("theta0: {e}")),
                None => Ok(sys),
            };
        };
        let order = order.or(block.order).unwrap_or(DEFAULT_ORDER);
        let series = |name: &str, spec: &SeriesSpec| {
            match spec {
                SeriesSpec::Text(s) => Series::parse_with_order(s, order),
                SeriesSpec::Records(r) => Series::from_records(order, r),
            }
            .map_err(|e| format!("system.{name}: {e}"))
        };
        let theta0 = theta0.unwrap_or(block.theta0);
        System::new_unchecked(
            series("beta1", &block.beta1)?,
            series("beta2", &block.beta2)?,
            series("l2", &block.l2)?,
            theta0,
        )
        .map_err(|e| format!("system.theta0: {e}"))
    }
}
