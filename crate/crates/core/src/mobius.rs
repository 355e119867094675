//! Generalized Voronoi (Möbius) partitions induced by the distortion measure.
//!
//! Sample `w` belongs to the point with the smallest distortion. Because
//! `(d^2 + h^2)^gamma / h = (a d^2 + b)^gamma` with `(a, b)` from
//! [`weights_from_height`], the comparison reduces to `a_n d_n^2 + b_n`, so the
//! pairwise bisectors are lines (equal heights) or circles.
//!
//! Exact cells are built on the line; in the plane cells are rasterized on a
//! [`SampleGrid`] and the exact pairwise [`DominanceRegion`] serves as a check.

use std::io::{self, Write};
use std::sync::Arc;

use rayon::prelude::*;

use crate::density::DensityModel;
use crate::error::{domain, Error, Result};
use crate::model::{weights_from_height, DistortionParams, GroundPoint, Quantizer, TargetRegion};

/// `(h_n / h_m)^(1 / gamma)`
pub fn parameter_ratio(h_n: f64, h_m: f64, gamma: f64) -> f64 {
    (h_n / h_m).powf(1.0 / gamma)
}

/// Where point `n` does at least as well as point `m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DominanceRegion {
    /// Equal heights: the side of the perpendicular bisector containing `p_n`.
    HalfSpace { p_n: GroundPoint, p_m: GroundPoint },
    /// `h_n < h_m`: a closed disc.
    Ball { center: GroundPoint, radius: f64 },
    /// `h_n > h_m`: the complement of an open disc.
    BallComplement { center: GroundPoint, radius: f64 },
}

impl DominanceRegion {
    pub fn contains(&self, w: &GroundPoint) -> bool {
        match self {
            Self::HalfSpace { p_n, p_m } => w.dist2(p_n) <= w.dist2(p_m),
            Self::Ball { center, radius } => w.dist2(center) <= radius * radius,
            Self::BallComplement { center, radius } => w.dist2(center) >= radius * radius,
        }
    }

    /// Signed distance-like margin: positive inside, negative outside.
    pub fn margin(&self, w: &GroundPoint) -> f64 {
        match self {
            Self::HalfSpace { p_n, p_m } => w.dist2(p_m) - w.dist2(p_n),
            Self::Ball { center, radius } => radius * radius - w.dist2(center),
            Self::BallComplement { center, radius } => w.dist2(center) - radius * radius,
        }
    }

    /// Points on the x-axis where the region's boundary crosses it.
    fn line_breakpoints(&self) -> Vec<f64> {
        match self {
            Self::HalfSpace { p_n, p_m } => vec![0.5 * (p_n.x + p_m.x)],
            Self::Ball { center, radius } | Self::BallComplement { center, radius } => {
                vec![center.x - radius, center.x + radius]
            }
        }
    }
}

/// Dominance region of `(p_n, h_n)` over `(p_m, h_m)`.
pub fn dominance_region(
    p_n: GroundPoint,
    h_n: f64,
    p_m: GroundPoint,
    h_m: f64,
    gamma: f64,
) -> Result<DominanceRegion> {
    if !(h_n > 0.0 && h_m > 0.0) {
        return domain(format!("heights must be positive, got {h_n} and {h_m}"));
    }
    if !(gamma >= 1.0) {
        return domain(format!("gamma must be >= 1, got {gamma}"));
    }
    if h_n == h_m {
        if p_n == p_m {
            return Err(Error::Degenerate(0, 1));
        }
        return Ok(DominanceRegion::HalfSpace { p_n, p_m });
    }
    let ratio = parameter_ratio(h_n, h_m, gamma);
    let one_minus = 1.0 - ratio;
    let center = GroundPoint::new(
        (p_n.x - ratio * p_m.x) / one_minus,
        (p_n.y - ratio * p_m.y) / one_minus,
    );
    let r2 = ratio * p_n.dist2(&p_m) / (one_minus * one_minus)
        + h_n * h_n * (ratio.powf(1.0 - 2.0 * gamma) - 1.0) / one_minus;
    let radius = r2.sqrt();
    Ok(if h_n < h_m {
        DominanceRegion::Ball { center, radius }
    } else {
        DominanceRegion::BallComplement { center, radius }
    })
}

/// Precomputed weights for repeated argmin queries.
#[derive(Clone, Debug)]
pub struct Classifier {
    px: Vec<f64>,
    py: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl Classifier {
    pub fn new(q: &Quantizer, params: &DistortionParams) -> Self {
        let (a, b) = q
            .heights()
            .iter()
            .map(|&h| weights_from_height(h, params.gamma).expect("quantizer heights are positive"))
            .unzip();
        Self {
            px: q.points().iter().map(|p| p.x).collect(),
            py: q.points().iter().map(|p| p.y).collect(),
            a,
            b,
        }
    }

    /// Index of the cheapest point, lowest index on ties.
    #[inline]
    pub fn classify_xy(&self, x: f64, y: f64) -> usize {
        let mut best = 0;
        let mut best_key = f64::INFINITY;
        for n in 0..self.a.len() {
            let dx = x - self.px[n];
            let dy = y - self.py[n];
            let key = self.a[n] * (dx * dx + dy * dy) + self.b[n];
            if key < best_key {
                best_key = key;
                best = n;
            }
        }
        best
    }

    pub fn classify(&self, w: &GroundPoint) -> usize {
        self.classify_xy(w.x, w.y)
    }
}

/// `argmin_n distortion(w, p_n, h_n)`, lowest index on ties.
pub fn classify(w: &GroundPoint, q: &Quantizer, params: &DistortionParams) -> usize {
    Classifier::new(q, params).classify(w)
}

fn check_no_duplicates(q: &Quantizer) -> Result<()> {
    let (ps, hs) = (q.points(), q.heights());
    for n in 0..q.len() {
        for m in n + 1..q.len() {
            if ps[n] == ps[m] && hs[n] == hs[m] {
                return Err(Error::Degenerate(n, m));
            }
        }
    }
    Ok(())
}

/// A partition of `[0, A]` into per-point unions of closed intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition1D {
    length: f64,
    cells: Vec<Vec<(f64, f64)>>,
}

impl Partition1D {
    /// Any assignment of intervals to points, as long as they tile `[0, length]`.
    pub fn from_cells(length: f64, cells: Vec<Vec<(f64, f64)>>) -> Result<Self> {
        let mut all: Vec<(f64, f64)> = cells.iter().flatten().copied().collect();
        if all.iter().any(|&(lo, hi)| !(lo <= hi)) {
            return domain("interval with negative length");
        }
        all.sort_by(|a, b| a.0.total_cmp(&b.0));
        let tol = 1e-12 * length;
        let mut cursor = 0.0;
        for &(lo, hi) in &all {
            if (lo - cursor).abs() > tol {
                return domain(format!("intervals do not tile [0, {length}] near {cursor}"));
            }
            cursor = hi;
        }
        if (cursor - length).abs() > tol {
            return domain(format!("intervals end at {cursor}, not {length}"));
        }
        Ok(Self { length, cells })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn num_points(&self) -> usize {
        self.cells.len()
    }

    pub fn cell(&self, n: usize) -> &[(f64, f64)] {
        &self.cells[n]
    }

    pub fn cells(&self) -> &[Vec<(f64, f64)>] {
        &self.cells
    }

    pub fn cell_length(&self, n: usize) -> f64 {
        self.cells[n].iter().map(|(lo, hi)| hi - lo).sum()
    }

    /// Owner of `x`, or `None` outside `[0, A]`.
    pub fn owner_at(&self, x: f64) -> Option<usize> {
        self.cells
            .iter()
            .position(|c| c.iter().any(|&(lo, hi)| x >= lo && x <= hi))
    }
}

/// Exact Möbius cells on `[0, A]`.
pub fn cells_1d(q: &Quantizer, region: &TargetRegion, params: &DistortionParams) -> Result<Partition1D> {
    let TargetRegion::Interval { length } = *region else {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: region.dim(),
        });
    };
    if q.points().iter().any(|p| p.y != 0.0) {
        return domain("one-dimensional quantizer points must have y = 0");
    }
    check_no_duplicates(q)?;
    let n = q.len();
    let mut breaks = vec![0.0, length];
    for i in 0..n {
        for j in i + 1..n {
            let region = dominance_region(
                q.points()[i],
                q.heights()[i],
                q.points()[j],
                q.heights()[j],
                params.gamma,
            )
            .map_err(|_| Error::Degenerate(i, j))?;
            breaks.extend(
                region
                    .line_breakpoints()
                    .into_iter()
                    .filter(|&x| x > 0.0 && x < length),
            );
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let classifier = Classifier::new(q, params);
    let mut cells: Vec<Vec<(f64, f64)>> = vec![Vec::new(); n];
    let mut current: Option<(usize, f64, f64)> = None;
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let owner = classifier.classify_xy(0.5 * (lo + hi), 0.0);
        current = match current {
            Some((o, start, _)) if o == owner => Some((o, start, hi)),
            Some((o, start, end)) => {
                cells[o].push((start, end));
                Some((owner, lo, hi))
            }
            None => Some((owner, lo, hi)),
        };
    }
    if let Some((o, start, end)) = current {
        cells[o].push((start, end));
    }
    Ok(Partition1D { length, cells })
}

/// Midpoint sample grid over a region with per-cell density mass.
#[derive(Clone, Debug)]
pub struct SampleGrid {
    region: TargetRegion,
    resolution: usize,
    xs: Vec<f64>,
    ys: Vec<f64>,
    mass: Vec<f64>,
    cell_measure: f64,
    cell_diameter: f64,
}

impl SampleGrid {
    /// Default cells per axis in the plane.
    pub const DEFAULT_RESOLUTION_2D: usize = 400;
    /// Default cells on a line.
    pub const DEFAULT_RESOLUTION_1D: usize = 10_000;

    pub fn default_resolution(region: &TargetRegion) -> usize {
        match region.dim() {
            1 => Self::DEFAULT_RESOLUTION_1D,
            _ => Self::DEFAULT_RESOLUTION_2D,
        }
    }

    /// `resolution` cells per axis over the density's region.
    pub fn new(density: &DensityModel, resolution: usize) -> Result<Self> {
        if resolution < 2 {
            return domain(format!("grid resolution must be >= 2, got {resolution}"));
        }
        let region = *density.region();
        let e = region.extent();
        let (xs, ys, cell_measure, cell_diameter) = match region {
            TargetRegion::Interval { length } => {
                let dx = length / resolution as f64;
                let xs = (0..resolution).map(|i| (i as f64 + 0.5) * dx).collect();
                (xs, vec![0.0; resolution], dx, dx)
            }
            TargetRegion::Rectangle { .. } => {
                let dx = e.x / resolution as f64;
                let dy = e.y / resolution as f64;
                let mut xs = Vec::with_capacity(resolution * resolution);
                let mut ys = Vec::with_capacity(resolution * resolution);
                for row in 0..resolution {
                    for col in 0..resolution {
                        xs.push((col as f64 + 0.5) * dx);
                        ys.push((row as f64 + 0.5) * dy);
                    }
                }
                (xs, ys, dx * dy, dx.hypot(dy))
            }
        };
        let mass = xs
            .iter()
            .zip(&ys)
            .map(|(&x, &y)| density.eval_unchecked(&GroundPoint::new(x, y)) * cell_measure)
            .collect();
        Ok(Self {
            region,
            resolution,
            xs,
            ys,
            mass,
            cell_measure,
            cell_diameter,
        })
    }

    pub fn region(&self) -> &TargetRegion {
        &self.region
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn center(&self, i: usize) -> GroundPoint {
        GroundPoint::new(self.xs[i], self.ys[i])
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn cell_measure(&self) -> f64 {
        self.cell_measure
    }

    pub fn cell_diameter(&self) -> f64 {
        self.cell_diameter
    }

    /// Owner of every sample under the Möbius rule of `q`.
    pub fn partition(self: &Arc<Self>, q: &Quantizer, params: &DistortionParams) -> GridPartition {
        let classifier = Classifier::new(q, params);
        let owner = (0..self.len())
            .into_par_iter()
            .map(|i| classifier.classify_xy(self.xs[i], self.ys[i]))
            .collect();
        GridPartition {
            grid: Arc::clone(self),
            owner,
            num_points: q.len(),
        }
    }
}

/// Per-sample ownership on a [`SampleGrid`].
#[derive(Clone, Debug)]
pub struct GridPartition {
    grid: Arc<SampleGrid>,
    owner: Vec<usize>,
    num_points: usize,
}

impl GridPartition {
    /// Arbitrary ownership, e.g. a non-Möbius comparison partition.
    pub fn from_owners(grid: Arc<SampleGrid>, owner: Vec<usize>, num_points: usize) -> Result<Self> {
        if owner.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: owner.len(),
            });
        }
        if owner.iter().any(|&o| o >= num_points) {
            return domain("owner index out of range");
        }
        Ok(Self {
            grid,
            owner,
            num_points,
        })
    }

    pub fn grid(&self) -> &Arc<SampleGrid> {
        &self.grid
    }

    pub fn owners(&self) -> &[usize] {
        &self.owner
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn cell_masses(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.num_points];
        for (&o, &w) in self.owner.iter().zip(self.grid.masses()) {
            m[o] += w;
        }
        m
    }

    /// Sample indices owned by each point, in grid order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut counts = vec![0usize; self.num_points];
        for &o in &self.owner {
            counts[o] += 1;
        }
        let mut out: Vec<Vec<usize>> = counts.into_iter().map(Vec::with_capacity).collect();
        for (i, &o) in self.owner.iter().enumerate() {
            out[o].push(i);
        }
        out
    }

    /// Rows of `x,y,owner,mass`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "x,y,owner,mass")?;
        for i in 0..self.grid.len() {
            writeln!(
                w,
                "{},{},{},{}",
                self.grid.xs[i], self.grid.ys[i], self.owner[i], self.grid.mass[i]
            )?;
        }
        Ok(())
    }

    /// Binary PPM raster, one color per owner, north up. Lines are drawn as
    /// a 16-pixel strip.
    pub fn write_ppm<W: Write>(&self, mut w: W) -> io::Result<()> {
        let res = self.grid.resolution;
        let (width, height) = match self.grid.region {
            TargetRegion::Interval { .. } => (res, 16),
            TargetRegion::Rectangle { .. } => (res, res),
        };
        write!(w, "P6\n{width} {height}\n255\n")?;
        let mut row_buf = Vec::with_capacity(width * 3);
        for r in 0..height {
            row_buf.clear();
            for c in 0..width {
                let idx = match self.grid.region {
                    TargetRegion::Interval { .. } => c,
                    TargetRegion::Rectangle { .. } => (res - 1 - r) * res + c,
                };
                row_buf.extend_from_slice(&owner_color(self.owner[idx]));
            }
            w.write_all(&row_buf)?;
        }
        Ok(())
    }
}

/// Möbius partition of `q` on a fresh grid over the density's region.
pub fn grid_partition(
    q: &Quantizer,
    density: &DensityModel,
    params: &DistortionParams,
    resolution: usize,
) -> Result<GridPartition> {
    q.check_in(density.region())?;
    let grid = Arc::new(SampleGrid::new(density, resolution)?);
    Ok(grid.partition(q, params))
}

fn owner_color(n: usize) -> [u8; 3] {
    let mut h = (n as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    h ^= h >> 29;
    h = h.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    h ^= h >> 32;
    let ch = |s: u32| 64 + ((h >> s) & 0xff) as u8 / 4 * 3;
    [ch(0), ch(8), ch(16)]
}
