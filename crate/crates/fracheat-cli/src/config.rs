//! JSON run configuration for the verification suites. The schema is
//! validated up front: unknown keys are rejected before any computation.

use fracheat::{Error, Result};
use serde::Deserialize;

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// fractional order, default 0.5
    pub s: Option<f64>,
    /// spatial dimension, default 1
    pub n: Option<usize>,
    /// field spec in the mini-language, suite-specific default
    pub field: Option<String>,
    pub operator: Option<OperatorConfig>,
    pub grid: Option<GridConfig>,
    /// decay suite rays
    pub rays: Option<Vec<RayConfig>>,
    /// counterexample |t| magnitudes
    pub magnitudes: Option<Vec<f64>>,
    /// counterexample cutoff parameters
    pub bump: Option<BumpConfig>,
    /// membership truncation radius
    pub r_max: Option<f64>,
    /// membership expected verdict: "member" | "nonmember" | "inconclusive"
    pub expected: Option<String>,
    /// reduction kinds: "space_to_fraclap" | "time_to_marchaud" | "s_to_one"
    pub kinds: Option<Vec<String>>,
    /// symbol suite (|xi|, rho) pairs
    pub pairs: Option<Vec<[f64; 2]>>,
    /// symbol suite orders
    pub s_values: Option<Vec<f64>>,
    /// greens/equivalence truncation radius
    pub radius: Option<f64>,
    /// equivalence forcing kind: "pure" | "contraction"
    pub kind: Option<String>,
    pub kappa: Option<f64>,
    pub lattice: Option<LatticeConfig>,
    pub tolerance: Option<f64>,
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorConfig {
    pub delta: Option<f64>,
    pub sigma_max: Option<f64>,
    pub time_nodes: Option<usize>,
    pub space_nodes: Option<usize>,
    pub panel_ratio: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub l_x: f64,
    pub l_t: f64,
    pub n_x: usize,
    pub n_t: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RayConfig {
    pub family: String,
    pub magnitudes: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BumpConfig {
    pub r1: f64,
    pub r2: f64,
    pub t1: f64,
    pub t2: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub half_x: f64,
    pub half_t: f64,
    pub nx: usize,
    pub nt: usize,
}

impl RunConfig {
    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| bad(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| bad(format!("config schema error: {e}")))
    }

    pub fn order(&self) -> Result<fracheat::FracOrder64> {
        fracheat::FracOrder64::new(self.s.unwrap_or(0.5))
    }

    pub fn dim(&self) -> usize {
        self.n.unwrap_or(1)
    }

    pub fn operator_params(&self) -> Result<fracheat::OperatorParams64> {
        let mut p = fracheat::OperatorParams64::new(self.dim(), self.order()?);
        if let Some(op) = &self.operator {
            if let Some(d) = op.delta {
                p.delta = d;
            }
            p.sigma_max = op.sigma_max;
            if let Some(v) = op.time_nodes {
                p.n_time_nodes = v;
            }
            if let Some(v) = op.space_nodes {
                p.n_space_nodes = v;
            }
            if let Some(v) = op.panel_ratio {
                p.panel_ratio = v;
            }
        }
        p.validate()?;
        Ok(p)
    }

    pub fn ray_specs(&self) -> Result<Vec<fracheat::verify::RaySpec>> {
        use fracheat::verify::{RayFamily, RaySpec};
        match &self.rays {
            None => Ok(RaySpec::defaults()),
            Some(list) => list
                .iter()
                .map(|r| {
                    let family = match r.family.as_str() {
                        "space_axis" => RayFamily::SpaceAxis,
                        "time_axis_negative" => RayFamily::TimeAxisNegative,
                        "time_axis_positive" => RayFamily::TimeAxisPositive,
                        "parabola" => RayFamily::Parabola,
                        other => return Err(bad(format!("unknown ray family `{other}`"))),
                    };
                    RaySpec::new(family, r.magnitudes.clone())
                })
                .collect(),
        }
    }
}
