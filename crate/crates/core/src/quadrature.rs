//! Average distortion, cell moments and analytic gradients.
//!
//! Planar integrals use the midpoint rule on a [`GridPartition`]; integrals on
//! the line use adaptive Simpson on the exact intervals of a [`Partition1D`].
//! Gradients are taken with the partition held fixed; at a Möbius partition
//! the moving-boundary terms of neighboring cells cancel.

use crate::density::DensityModel;
use crate::error::{Error, Result};
use crate::mobius::{GridPartition, Partition1D};
use crate::model::{DistortionParams, GroundPoint, Quantizer};
use crate::numerics::{adaptive_simpson, GammaPow};

/// Absolute tolerance for integrals over `[0, A]`, shared among intervals.
pub const EXACT_1D_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug)]
pub enum PartitionRef<'a> {
    Grid(&'a GridPartition),
    Exact1D(&'a Partition1D),
}

impl<'a> From<&'a GridPartition> for PartitionRef<'a> {
    fn from(p: &'a GridPartition) -> Self {
        Self::Grid(p)
    }
}

impl<'a> From<&'a Partition1D> for PartitionRef<'a> {
    fn from(p: &'a Partition1D) -> Self {
        Self::Exact1D(p)
    }
}

impl PartitionRef<'_> {
    fn num_points(&self) -> usize {
        match self {
            Self::Grid(g) => g.num_points(),
            Self::Exact1D(p) => p.num_points(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistortionReport {
    pub total: f64,
    pub contributions: Vec<f64>,
    pub masses: Vec<f64>,
}

/// Partial derivatives of the average distortion per point.
#[derive(Clone, Debug, PartialEq)]
pub struct Gradient {
    pub dim: usize,
    pub d_point: Vec<[f64; 2]>,
    /// Positive when raising the point increases distortion.
    pub d_height: Vec<f64>,
}

impl Gradient {
    pub fn max_abs(&self) -> f64 {
        self.d_point
            .iter()
            .flat_map(|v| v[..self.dim].iter())
            .chain(&self.d_height)
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Flattened as `[x_0, (y_0), h_0, x_1, ...]`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.d_height.len() * (self.dim + 1));
        for (v, h) in self.d_point.iter().zip(&self.d_height) {
            out.extend_from_slice(&v[..self.dim]);
            out.push(*h);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellMoments {
    pub mass: f64,
    /// `None` for an empty cell.
    pub centroid: Option<GroundPoint>,
    /// Mean squared distance to the reference point; `None` for an empty cell.
    pub msd: Option<f64>,
}

fn check_sizes(q: &Quantizer, partition: &PartitionRef<'_>) -> Result<()> {
    if partition.num_points() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: q.len(),
            got: partition.num_points(),
        });
    }
    Ok(())
}

fn interval_tol(partition: &Partition1D, lo: f64, hi: f64) -> f64 {
    EXACT_1D_TOL * (hi - lo) / partition.length()
}

/// `sum_n  integral over R_n of  D(w, p_n, h_n) lambda(w) dw`.
pub fn average_distortion<'a>(
    q: &Quantizer,
    density: &DensityModel,
    params: &DistortionParams,
    partition: impl Into<PartitionRef<'a>>,
) -> Result<DistortionReport> {
    let partition = partition.into();
    check_sizes(q, &partition)?;
    let pow = GammaPow::new(params.gamma);
    let n = q.len();
    let mut contributions = vec![0.0; n];
    let mut masses = vec![0.0; n];
    match partition {
        PartitionRef::Grid(part) => {
            let grid = part.grid();
            let (xs, ys, ms) = (grid.xs(), grid.ys(), grid.masses());
            for (i, &o) in part.owners().iter().enumerate() {
                let p = q.points()[o];
                let h = q.heights()[o];
                let s = (xs[i] - p.x).powi(2) + (ys[i] - p.y).powi(2) + h * h;
                contributions[o] += ms[i] * pow.full(s) / h;
                masses[o] += ms[i];
            }
            for c in &mut contributions {
                *c *= params.beta;
            }
        }
        PartitionRef::Exact1D(part) => {
            for k in 0..n {
                let (p, h) = (q.points()[k].x, q.heights()[k]);
                for &(lo, hi) in part.cell(k) {
                    let tol = interval_tol(part, lo, hi);
                    let lambda = |x: f64| density.eval_unchecked(&GroundPoint::on_line(x));
                    contributions[k] += adaptive_simpson(
                        |x| params.beta * pow.full((p - x).powi(2) + h * h) / h * lambda(x),
                        lo,
                        hi,
                        tol,
                    );
                    masses[k] += adaptive_simpson(lambda, lo, hi, tol);
                }
            }
        }
    }
    Ok(DistortionReport {
        total: contributions.iter().sum(),
        contributions,
        masses,
    })
}

/// Gradient of the average distortion with respect to points and heights,
/// holding `partition` fixed. Empty cells get a zero gradient.
pub fn gradient<'a>(
    q: &Quantizer,
    density: &DensityModel,
    params: &DistortionParams,
    partition: impl Into<PartitionRef<'a>>,
) -> Result<Gradient> {
    let partition = partition.into();
    check_sizes(q, &partition)?;
    let pow = GammaPow::new(params.gamma);
    let (gamma, beta) = (params.gamma, params.beta);
    let n = q.len();
    // raw integrals: sum (p - w) s^(g-1) lambda, and sum s^(g-1) ((2g-1) h^2 - d^2) lambda
    let mut raw_point = vec![[0.0; 2]; n];
    let mut raw_height = vec![0.0; n];
    let dim = match partition {
        PartitionRef::Grid(part) => {
            let grid = part.grid();
            let (xs, ys, ms) = (grid.xs(), grid.ys(), grid.masses());
            for (i, &o) in part.owners().iter().enumerate() {
                let p = q.points()[o];
                let h = q.heights()[o];
                let (dx, dy) = (p.x - xs[i], p.y - ys[i]);
                let d2 = dx * dx + dy * dy;
                let s = d2 + h * h;
                let w = ms[i] * pow.minus_two(s) * s;
                raw_point[o][0] += w * dx;
                raw_point[o][1] += w * dy;
                raw_height[o] += w * ((2.0 * gamma - 1.0) * h * h - d2);
            }
            grid.region().dim()
        }
        PartitionRef::Exact1D(part) => {
            for k in 0..n {
                let (p, h) = (q.points()[k].x, q.heights()[k]);
                for &(lo, hi) in part.cell(k) {
                    let tol = interval_tol(part, lo, hi);
                    let weight = |x: f64| {
                        let s = (p - x).powi(2) + h * h;
                        pow.minus_two(s) * s * density.eval_unchecked(&GroundPoint::on_line(x))
                    };
                    raw_point[k][0] += adaptive_simpson(|x| (p - x) * weight(x), lo, hi, tol);
                    raw_height[k] += adaptive_simpson(
                        |x| ((2.0 * gamma - 1.0) * h * h - (p - x).powi(2)) * weight(x),
                        lo,
                        hi,
                        tol,
                    );
                }
            }
            1
        }
    };
    let d_point = raw_point
        .iter()
        .zip(q.heights())
        .map(|(v, &h)| {
            let c = 2.0 * gamma * beta / h;
            [c * v[0], c * v[1]]
        })
        .collect();
    let d_height = raw_height
        .iter()
        .zip(q.heights())
        .map(|(v, &h)| beta / (h * h) * v)
        .collect();
    Ok(Gradient {
        dim,
        d_point,
        d_height,
    })
}

/// Mass, centroid and mean squared distance to `p_n` of cell `n`.
pub fn cell_moments<'a>(
    partition: impl Into<PartitionRef<'a>>,
    density: &DensityModel,
    n: usize,
    p_n: &GroundPoint,
) -> CellMoments {
    let (mut mass, mut mx, mut my, mut sq) = (0.0, 0.0, 0.0, 0.0);
    match partition.into() {
        PartitionRef::Grid(part) => {
            let grid = part.grid();
            let (xs, ys, ms) = (grid.xs(), grid.ys(), grid.masses());
            for (i, _) in part.owners().iter().enumerate().filter(|(_, &o)| o == n) {
                mass += ms[i];
                mx += ms[i] * xs[i];
                my += ms[i] * ys[i];
                sq += ms[i] * ((xs[i] - p_n.x).powi(2) + (ys[i] - p_n.y).powi(2));
            }
        }
        PartitionRef::Exact1D(part) => {
            let lambda = |x: f64| density.eval_unchecked(&GroundPoint::on_line(x));
            for &(lo, hi) in part.cell(n) {
                let tol = interval_tol(part, lo, hi);
                mass += adaptive_simpson(lambda, lo, hi, tol);
                mx += adaptive_simpson(|x| x * lambda(x), lo, hi, tol);
                sq += adaptive_simpson(|x| (x - p_n.x).powi(2) * lambda(x), lo, hi, tol);
            }
        }
    }
    if mass > 0.0 {
        CellMoments {
            mass,
            centroid: Some(GroundPoint::new(mx / mass, my / mass)),
            msd: Some(sq / mass),
        }
    } else {
        CellMoments {
            mass: 0.0,
            centroid: None,
            msd: None,
        }
    }
}
