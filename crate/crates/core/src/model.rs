//! Domain types and the parameterized distortion measure.
//!
//! A quantization point `p_n` with height parameter `h_n > 0` charges a sample
//! `w` the cost `beta * (|p_n - w|^2 + h_n^2)^gamma / h_n`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Tolerance used when checking that a point lies inside a region.
const CONTAINMENT_SLACK: f64 = 1e-12;

/// A location on the ground. One-dimensional scenarios keep `y = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GroundPoint {
    pub x: f64,
    pub y: f64,
}

impl GroundPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub const fn on_line(x: f64) -> Self {
        Self { x, y: 0.0 }
    }

    #[inline]
    pub fn dist2(&self, other: &GroundPoint) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    #[inline]
    pub fn dist(&self, other: &GroundPoint) -> f64 {
        self.dist2(other).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// The target region, anchored at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetRegion {
    /// `[0, length]`
    Interval { length: f64 },
    /// `[0, width] x [0, height]`
    Rectangle { width: f64, height: f64 },
}

impl TargetRegion {
    pub fn interval(length: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return domain(format!("interval length must be positive, got {length}"));
        }
        Ok(Self::Interval { length })
    }

    pub fn rectangle(width: f64, height: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite() && height > 0.0 && height.is_finite()) {
            return domain(format!(
                "rectangle sides must be positive, got {width} x {height}"
            ));
        }
        Ok(Self::Rectangle { width, height })
    }

    pub fn square(side: f64) -> Result<Self> {
        Self::rectangle(side, side)
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Interval { .. } => 1,
            Self::Rectangle { .. } => 2,
        }
    }

    /// Length (d = 1) or area (d = 2).
    pub fn measure(&self) -> f64 {
        match *self {
            Self::Interval { length } => length,
            Self::Rectangle { width, height } => width * height,
        }
    }

    pub fn diameter(&self) -> f64 {
        match *self {
            Self::Interval { length } => length,
            Self::Rectangle { width, height } => width.hypot(height),
        }
    }

    /// Upper corner of the bounding box (`y = 0` on a line).
    pub fn extent(&self) -> GroundPoint {
        match *self {
            Self::Interval { length } => GroundPoint::on_line(length),
            Self::Rectangle { width, height } => GroundPoint::new(width, height),
        }
    }

    pub fn contains(&self, p: &GroundPoint) -> bool {
        let e = self.extent();
        let s = CONTAINMENT_SLACK * self.diameter();
        let y_ok = match self {
            Self::Interval { .. } => p.y == 0.0,
            Self::Rectangle { .. } => p.y >= -s && p.y <= e.y + s,
        };
        p.is_finite() && p.x >= -s && p.x <= e.x + s && y_ok
    }

    pub fn clamp(&self, p: GroundPoint) -> GroundPoint {
        let e = self.extent();
        GroundPoint::new(p.x.clamp(0.0, e.x), p.y.clamp(0.0, e.y))
    }
}

/// Exponent `gamma >= 1` and scale `beta > 0` of the distortion measure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistortionParams {
    pub gamma: f64,
    pub beta: f64,
}

impl DistortionParams {
    pub fn new(gamma: f64, beta: f64) -> Result<Self> {
        if !(gamma >= 1.0 && gamma.is_finite()) {
            return domain(format!("gamma must be >= 1, got {gamma}"));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return domain(format!("beta must be > 0, got {beta}"));
        }
        Ok(Self { gamma, beta })
    }

    /// Unit scale, which leaves every optimal quantizer unchanged.
    pub fn with_gamma(gamma: f64) -> Result<Self> {
        Self::new(gamma, 1.0)
    }

    /// Path-loss exponent `alpha` maps to `gamma = (alpha + 1) / 2`.
    pub fn from_path_loss(alpha: f64) -> Result<Self> {
        if !(alpha >= 1.0) {
            return domain(format!("path-loss exponent must be >= 1, got {alpha}"));
        }
        Self::with_gamma((alpha + 1.0) / 2.0)
    }

    pub fn alpha(&self) -> f64 {
        2.0 * self.gamma - 1.0
    }
}

impl Default for DistortionParams {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            beta: 1.0,
        }
    }
}

/// Air-to-ground link budget whose expected transmit power reduces to the
/// distortion measure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelModel {
    pub rate_bps: f64,
    pub bandwidth_hz: f64,
    pub noise_density: f64,
    pub shadowing_std_db: f64,
    pub antenna_const: f64,
    pub gt_gain: f64,
    pub ref_distance: f64,
    pub pathloss_exp: f64,
}

impl ChannelModel {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("rate_bps", self.rate_bps),
            ("bandwidth_hz", self.bandwidth_hz),
            ("noise_density", self.noise_density),
            ("shadowing_std_db", self.shadowing_std_db),
            ("antenna_const", self.antenna_const),
            ("gt_gain", self.gt_gain),
            ("ref_distance", self.ref_distance),
            ("pathloss_exp", self.pathloss_exp),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return domain(format!("channel field {name} must be positive, got {v}"));
            }
        }
        if self.pathloss_exp < 1.0 {
            return domain(format!(
                "path-loss exponent must be >= 1, got {}",
                self.pathloss_exp
            ));
        }
        Ok(())
    }

    /// Folds the link budget into `(gamma, beta)`.
    pub fn to_distortion_params(&self) -> Result<DistortionParams> {
        self.validate()?;
        let gamma = (self.pathloss_exp + 1.0) / 2.0;
        let ln10 = std::f64::consts::LN_10;
        let shadowing = (-self.shadowing_std_db.powi(2) * ln10 * ln10 / 200.0).exp();
        let beta = ((self.rate_bps / self.bandwidth_hz).exp2() - 1.0)
            * self.bandwidth_hz
            * self.noise_density
            * shadowing
            / (self.gt_gain * self.antenna_const)
            * self.ref_distance.powf(-self.pathloss_exp);
        if !(beta > 0.0 && beta.is_finite()) {
            return domain(format!("channel yields a non-positive scale beta = {beta}"));
        }
        Ok(DistortionParams { gamma, beta })
    }
}

pub fn channel_to_distortion_params(ch: &ChannelModel) -> Result<DistortionParams> {
    ch.to_distortion_params()
}

/// `beta * (|p - w|^2 + h^2)^gamma / h`
pub fn distortion(
    w: &GroundPoint,
    p: &GroundPoint,
    h: f64,
    params: &DistortionParams,
) -> Result<f64> {
    if !(h > 0.0) {
        return domain(format!("height must be positive, got {h}"));
    }
    Ok(distortion_from_dist2(w.dist2(p), h, params))
}

#[inline]
pub(crate) fn distortion_from_dist2(d2: f64, h: f64, params: &DistortionParams) -> f64 {
    params.beta * (d2 + h * h).powf(params.gamma) / h
}

/// Multiplicative and additive weights `(a, b) = (h^(-1/gamma), h^(2 - 1/gamma))`
/// so that `(a d^2 + b)^gamma = (d^2 + h^2)^gamma / h`.
pub fn weights_from_height(h: f64, gamma: f64) -> Result<(f64, f64)> {
    if !(h > 0.0) {
        return domain(format!("height must be positive, got {h}"));
    }
    if !(gamma >= 1.0) {
        return domain(format!("gamma must be >= 1, got {gamma}"));
    }
    let inv = 1.0 / gamma;
    Ok((h.powf(-inv), h.powf(2.0 - inv)))
}

/// `N` ground points together with their positive height parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QuantizerRepr", into = "QuantizerRepr")]
pub struct Quantizer {
    points: Vec<GroundPoint>,
    heights: Vec<f64>,
    common_height: bool,
}

#[derive(Serialize, Deserialize)]
struct QuantizerRepr {
    points: Vec<GroundPoint>,
    heights: Vec<f64>,
    #[serde(default)]
    common_height: bool,
}

impl TryFrom<QuantizerRepr> for Quantizer {
    type Error = Error;

    fn try_from(r: QuantizerRepr) -> Result<Self> {
        let mut q = Quantizer::new(r.points, r.heights)?;
        if r.common_height {
            if q.heights.iter().any(|&h| h != q.heights[0]) {
                return Err(Error::InvalidConfig(
                    "common_height is set but heights differ".into(),
                ));
            }
            q.common_height = true;
        }
        Ok(q)
    }
}

impl From<Quantizer> for QuantizerRepr {
    fn from(q: Quantizer) -> Self {
        QuantizerRepr {
            points: q.points,
            heights: q.heights,
            common_height: q.common_height,
        }
    }
}

impl Quantizer {
    pub fn new(points: Vec<GroundPoint>, heights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return domain("a quantizer needs at least one point");
        }
        if points.len() != heights.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                got: heights.len(),
            });
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return domain(format!("non-finite ground point {p:?}"));
        }
        if let Some(h) = heights.iter().find(|h| !(**h > 0.0 && h.is_finite())) {
            return domain(format!("heights must be positive, got {h}"));
        }
        Ok(Self {
            points,
            heights,
            common_height: false,
        })
    }

    /// All points share `height`; the optimizers keep it shared.
    pub fn with_common_height(points: Vec<GroundPoint>, height: f64) -> Result<Self> {
        let n = points.len();
        let mut q = Self::new(points, vec![height; n])?;
        q.common_height = true;
        Ok(q)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[GroundPoint] {
        &self.points
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    pub fn is_common_height(&self) -> bool {
        self.common_height
    }

    pub fn check_in(&self, region: &TargetRegion) -> Result<()> {
        match self.points.iter().position(|p| !region.contains(p)) {
            Some(i) => domain(format!(
                "point {i} at {:?} lies outside {region:?}",
                self.points[i]
            )),
            None => Ok(()),
        }
    }

    /// Relabels point `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.len();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&j| j >= n || std::mem::replace(&mut seen[j], true))
        {
            return domain("not a permutation");
        }
        let mut points = vec![GroundPoint::default(); n];
        let mut heights = vec![0.0; n];
        for (i, &j) in perm.iter().enumerate() {
            points[j] = self.points[i];
            heights[j] = self.heights[i];
        }
        Ok(Self {
            points,
            heights,
            common_height: self.common_height,
        })
    }

    pub(crate) fn set_point(&mut self, n: usize, p: GroundPoint) {
        self.points[n] = p;
    }

    pub(crate) fn set_height(&mut self, n: usize, h: f64) {
        debug_assert!(h > 0.0);
        self.heights[n] = h;
    }

    pub(crate) fn set_all_heights(&mut self, h: f64) {
        debug_assert!(h > 0.0);
        self.heights.iter_mut().for_each(|x| *x = h);
    }
}
