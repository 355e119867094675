//! Scenario files: JSON documents describing one experiment.
//!
//! ```json
//! {
//!   "region": { "width": 10, "height": 10 },
//!   "density": { "kind": "mixture", "components": [
//!     { "weight": 0.5, "mean": [3, 3], "std": 1.5 }
//!   ] },
//!   "gamma": 3.5,
//!   "N": 16,
//!   "lloyd": { "variant": "B", "seeds": 20 },
//!   "output": "out/mixture10"
//! }
//! ```
//!
//! `region` is either `{ "A": length }` for the interval `[0, A]` or
//! `{ "width", "height" }` for a rectangle. `density` defaults to uniform.
//! Give exactly one of `gamma` (with optional `beta`, default 1) or `alpha`
//! (path-loss exponent, `gamma = (alpha + 1) / 2`) or a `channel` block with
//! the fields of [`ChannelModel`]. `lloyd` takes any [`LloydConfig`] field.

use std::fs;
use std::path::{Path, PathBuf};

use paramquant::{
    ChannelModel, DensityModel, DistortionParams, GroundPoint, LloydConfig, MixtureComponent, TargetRegion,
};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    region: RegionSpec,
    #[serde(default)]
    density: DensitySpec,
    gamma: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    channel: Option<ChannelModel>,
    #[serde(rename = "N")]
    n: usize,
    #[serde(default)]
    lloyd: LloydConfig,
    output: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RegionSpec {
    Interval {
        #[serde(rename = "A")]
        length: f64,
    },
    Rectangle {
        width: f64,
        height: f64,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum DensitySpec {
    #[default]
    Uniform,
    Mixture { components: Vec<ComponentSpec> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentSpec {
    weight: f64,
    mean: MeanSpec,
    std: f64,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MeanSpec {
    Plane([f64; 2]),
    Line(f64),
}

/// A validated scenario.
#[derive(Debug)]
pub struct Scenario {
    pub region: TargetRegion,
    pub density: DensityModel,
    pub params: DistortionParams,
    pub n: usize,
    pub lloyd: LloydConfig,
    pub output: PathBuf,
}

pub const DEFAULT_OUTPUT: &str = "paramquant-out";

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read scenario {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Usage(format!("invalid scenario {}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let region = match file.region {
            RegionSpec::Interval { length } => TargetRegion::interval(length),
            RegionSpec::Rectangle { width, height } => TargetRegion::rectangle(width, height),
        }
        .map_err(|e| e.to_string())?;
        let density = match file.density {
            DensitySpec::Uniform => DensityModel::uniform(region),
            DensitySpec::Mixture { components } => {
                let comps = components
                    .into_iter()
                    .map(|c| {
                        let mean = match (c.mean, region.dim()) {
                            (MeanSpec::Plane([x, y]), 2) => GroundPoint::new(x, y),
                            (MeanSpec::Line(x), 1) => GroundPoint::on_line(x),
                            (m, d) => return Err(format!("mixture mean {m:?} does not fit a {d}-D region")),
                        };
                        Ok(MixtureComponent::new(c.weight, mean, c.std))
                    })
                    .collect::<Result<Vec<_>, String>>()?;
                DensityModel::gaussian_mixture(comps, region).map_err(|e| e.to_string())?
            }
        };
        let params = match (file.gamma, file.alpha, file.channel) {
            (Some(gamma), None, None) => DistortionParams::new(gamma, file.beta.unwrap_or(1.0)),
            (None, Some(alpha), None) => {
                DistortionParams::from_path_loss(alpha).and_then(|p| DistortionParams::new(p.gamma, file.beta.unwrap_or(1.0)))
            }
            (None, None, Some(ch)) => {
                if file.beta.is_some() {
                    return Err("beta comes from the channel block; drop the top-level beta".into());
                }
                ch.to_distortion_params()
            }
            _ => return Err("give exactly one of gamma, alpha or channel".into()),
        }
        .map_err(|e| e.to_string())?;
        if file.n == 0 {
            return Err("N must be at least 1".into());
        }
        file.lloyd.validate().map_err(|e| e.to_string())?;
        Ok(Self {
            region,
            density,
            params,
            n: file.n,
            lloyd: file.lloyd,
            output: file.output.unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT)),
        })
    }
}
