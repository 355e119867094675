//! Source densities over a target region.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::model::{GroundPoint, TargetRegion};
use crate::mobius::SampleGrid;

/// One isotropic Gaussian bump `weight * N(mean, std^2 I)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub weight: f64,
    pub mean: GroundPoint,
    pub std: f64,
}

impl MixtureComponent {
    pub fn new(weight: f64, mean: GroundPoint, std: f64) -> Self {
        Self { weight, mean, std }
    }
}

/// The three-cluster mixture on `[0, 10]^2` used for the non-uniform experiments.
pub fn clustered_mixture_components() -> Vec<MixtureComponent> {
    vec![
        MixtureComponent::new(0.5, GroundPoint::new(3.0, 3.0), 1.5),
        MixtureComponent::new(0.25, GroundPoint::new(6.0, 7.0), 1.0),
        MixtureComponent::new(0.25, GroundPoint::new(7.5, 2.5), 2.0),
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub enum DensityKind {
    Uniform,
    GaussianMixture(Vec<MixtureComponent>),
}

/// A probability density on a [`TargetRegion`], normalized to unit mass there.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityModel {
    kind: DensityKind,
    region: TargetRegion,
    norm: f64,
}

impl DensityModel {
    pub fn uniform(region: TargetRegion) -> Self {
        Self {
            kind: DensityKind::Uniform,
            norm: region.measure(),
            region,
        }
    }

    /// Gaussian mixture truncated to `region` and renormalized there.
    pub fn gaussian_mixture(components: Vec<MixtureComponent>, region: TargetRegion) -> Result<Self> {
        if components.is_empty() {
            return domain("mixture needs at least one component");
        }
        for c in &components {
            if !(c.weight > 0.0 && c.weight.is_finite()) {
                return domain(format!("mixture weight must be positive, got {}", c.weight));
            }
            if !(c.std > 0.0 && c.std.is_finite()) {
                return domain(format!("mixture std must be positive, got {}", c.std));
            }
            if !c.mean.is_finite() || (region.dim() == 1 && c.mean.y != 0.0) {
                return domain(format!("invalid mixture mean {:?}", c.mean));
            }
        }
        let mut model = Self {
            kind: DensityKind::GaussianMixture(components),
            region,
            norm: 1.0,
        };
        // Midpoint quadrature on the default sample grid.
        let res = SampleGrid::default_resolution(&region);
        let e = region.extent();
        let (dx, dy) = (e.x / res as f64, e.y / res as f64);
        let norm = match region {
            TargetRegion::Interval { .. } => (0..res)
                .map(|i| model.eval_unchecked(&GroundPoint::on_line((i as f64 + 0.5) * dx)))
                .sum::<f64>()
                * dx,
            TargetRegion::Rectangle { .. } => (0..res)
                .map(|row| {
                    let y = (row as f64 + 0.5) * dy;
                    (0..res)
                        .map(|col| model.eval_unchecked(&GroundPoint::new((col as f64 + 0.5) * dx, y)))
                        .sum::<f64>()
                })
                .sum::<f64>()
                * dx
                * dy,
        };
        if !(norm > 0.0) {
            return domain("mixture has no mass inside the region");
        }
        model.norm = norm;
        Ok(model)
    }

    pub fn kind(&self) -> &DensityKind {
        &self.kind
    }

    pub fn region(&self) -> &TargetRegion {
        &self.region
    }

    /// Mass of the untruncated mixture inside the region by midpoint
    /// quadrature on the default grid (the region's measure when uniform).
    pub fn normalization(&self) -> f64 {
        self.norm
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.kind, DensityKind::Uniform)
    }

    /// Density at `w`; errors if `w` lies outside the region.
    pub fn eval(&self, w: &GroundPoint) -> Result<f64> {
        if !self.region.contains(w) {
            return domain(format!("{w:?} lies outside {:?}", self.region));
        }
        Ok(self.eval_unchecked(w))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, w: &GroundPoint) -> f64 {
        match &self.kind {
            DensityKind::Uniform => 1.0 / self.norm,
            DensityKind::GaussianMixture(cs) => {
                let two_d = self.region.dim() == 2;
                cs.iter()
                    .map(|c| {
                        let var = c.std * c.std;
                        let pref = if two_d {
                            1.0 / (2.0 * PI * var)
                        } else {
                            1.0 / (2.0 * PI * var).sqrt()
                        };
                        c.weight * pref * (-w.dist2(&c.mean) / (2.0 * var)).exp()
                    })
                    .sum::<f64>()
                    / self.norm
            }
        }
    }
}

pub fn density_eval(model: &DensityModel, w: &GroundPoint) -> Result<f64> {
    model.eval(w)
}
