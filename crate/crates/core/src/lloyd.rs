//! Lloyd-style alternating optimizers on a sample grid and the
//! random-deployment baseline.
//!
//! Each iteration classifies the grid under the current quantizer and then,
//! with that partition frozen, moves every point and re-optimizes the
//! heights. Lloyd-A keeps one height shared by all points; Lloyd-B gives each
//! point its own.

use std::io::{self, Write};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::DensityModel;
use crate::error::{domain, Error, Result};
use crate::mobius::{Classifier, SampleGrid};
use crate::model::{DistortionParams, GroundPoint, Quantizer, TargetRegion};
use crate::numerics::{bracketed_newton, GammaPow};
use crate::oned::g;

/// Points closer than this are treated as colliding.
const COLLISION_DIST: f64 = 1e-9;
/// Collision jitter and height floor, relative to the region diameter.
const NUDGE: f64 = 1e-6;
const MAX_BACKTRACKS: usize = 60;
const HEIGHT_MAX_ITER: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LloydVariant {
    /// One height shared by all points.
    A,
    /// One height per point.
    B,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LloydConfig {
    pub variant: LloydVariant,
    pub max_iters: usize,
    /// Stop once `(D_prev - D) / D_prev` drops below this.
    pub tolerance: f64,
    /// First trial step of the point line search, in cell diameters.
    pub initial_step: f64,
    /// Step shrink factor while backtracking.
    pub backtrack: f64,
    pub armijo: f64,
    /// Newton steps per point and iteration.
    pub point_steps: usize,
    /// Relative tolerance of the height root finder.
    pub height_tolerance: f64,
    pub seed: u64,
    /// Restarts for best-of-seeds runs.
    pub seeds: usize,
    /// Cells per axis; `None` picks the grid default for the region.
    pub resolution: Option<usize>,
}

impl Default for LloydConfig {
    fn default() -> Self {
        Self {
            variant: LloydVariant::B,
            max_iters: 500,
            tolerance: 1e-8,
            initial_step: 1.0,
            backtrack: 0.5,
            armijo: 1e-4,
            point_steps: 4,
            height_tolerance: 1e-12,
            seed: 0,
            seeds: 20,
            resolution: None,
        }
    }
}

impl LloydConfig {
    pub fn with_variant(&self, variant: LloydVariant) -> Self {
        Self {
            variant,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        let bad = |what: &str, v: &dyn std::fmt::Display| {
            Err(Error::InvalidConfig(format!("{what} out of range: {v}")))
        };
        if self.max_iters == 0 {
            return bad("max_iters", &self.max_iters);
        }
        if !positive(self.tolerance) {
            return bad("tolerance", &self.tolerance);
        }
        if !positive(self.initial_step) {
            return bad("initial_step", &self.initial_step);
        }
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return bad("backtrack", &self.backtrack);
        }
        if !(self.armijo > 0.0 && self.armijo < 1.0) {
            return bad("armijo", &self.armijo);
        }
        if self.point_steps == 0 {
            return bad("point_steps", &self.point_steps);
        }
        if !positive(self.height_tolerance) {
            return bad("height_tolerance", &self.height_tolerance);
        }
        if self.seeds == 0 {
            return bad("seeds", &self.seeds);
        }
        if let Some(r) = self.resolution {
            if r < 2 {
                return bad("resolution", &r);
            }
        }
        Ok(())
    }

    pub fn resolution_for(&self, region: &TargetRegion) -> usize {
        self.resolution
            .unwrap_or_else(|| SampleGrid::default_resolution(region))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxIters,
}

/// An empty cell whose point was moved to the costliest sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reseed {
    pub iteration: usize,
    pub point: usize,
    pub to: GroundPoint,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LloydReport {
    pub quantizer: Quantizer,
    /// Distortion of the initial quantizer followed by one entry per iteration.
    pub trace: Vec<f64>,
    pub iterations: usize,
    pub termination: Termination,
    pub reseeds: Vec<Reseed>,
}

impl LloydReport {
    pub fn final_distortion(&self) -> f64 {
        *self.trace.last().expect("trace starts with the initial distortion")
    }

    /// Largest increase between consecutive trace entries (0 if none).
    pub fn max_trace_increase(&self) -> f64 {
        self.trace
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// Rows of `iteration,distortion`.
    pub fn write_trace_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "iteration,distortion")?;
        for (i, d) in self.trace.iter().enumerate() {
            writeln!(w, "{i},{d}")?;
        }
        Ok(())
    }
}

fn uniform_point<R: Rng + ?Sized>(region: &TargetRegion, rng: &mut R) -> GroundPoint {
    let e = region.extent();
    match region {
        TargetRegion::Interval { .. } => GroundPoint::on_line(rng.gen::<f64>() * e.x),
        TargetRegion::Rectangle { .. } => {
            let x = rng.gen::<f64>() * e.x;
            GroundPoint::new(x, rng.gen::<f64>() * e.y)
        }
    }
}

/// A uniform draw from `(0, hmax]`.
fn random_height<R: Rng + ?Sized>(hmax: f64, rng: &mut R) -> f64 {
    (1.0 - rng.gen::<f64>()) * hmax
}

/// `n` i.i.d. uniform points with i.i.d. heights in `(0, diam * g(gamma)]`.
pub fn random_deployment<R: Rng + ?Sized>(
    region: &TargetRegion,
    n: usize,
    gamma: f64,
    rng: &mut R,
) -> Result<Quantizer> {
    if n == 0 {
        return domain("need at least one point");
    }
    if !(gamma >= 1.0) {
        return domain(format!("gamma must be >= 1, got {gamma}"));
    }
    let hmax = region.diameter() * g(gamma);
    let points: Vec<_> = (0..n).map(|_| uniform_point(region, rng)).collect();
    let heights = (0..n).map(|_| random_height(hmax, rng)).collect();
    Quantizer::new(points, heights)
}

/// Starting quantizer for the optimizers: i.i.d. uniform points sharing one
/// height drawn from `(0, diam * g(gamma)]`.
pub fn random_start<R: Rng + ?Sized>(
    region: &TargetRegion,
    n: usize,
    gamma: f64,
    rng: &mut R,
) -> Result<Quantizer> {
    if n == 0 {
        return domain("need at least one point");
    }
    if !(gamma >= 1.0) {
        return domain(format!("gamma must be >= 1, got {gamma}"));
    }
    let points: Vec<_> = (0..n).map(|_| uniform_point(region, rng)).collect();
    let h = random_height(region.diameter() * g(gamma), rng);
    Quantizer::with_common_height(points, h)
}

fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Owner and weighted cost of every sample.
fn classify_grid(grid: &SampleGrid, q: &Quantizer, params: &DistortionParams) -> (Vec<usize>, f64, Vec<f64>) {
    let classifier = Classifier::new(q, params);
    let pow = GammaPow::new(params.gamma);
    let (xs, ys, ms) = (grid.xs(), grid.ys(), grid.masses());
    let (ps, hs) = (q.points(), q.heights());
    let (owners, costs): (Vec<usize>, Vec<f64>) = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let o = classifier.classify_xy(xs[i], ys[i]);
            let (p, h) = (ps[o], hs[o]);
            let s = (xs[i] - p.x).powi(2) + (ys[i] - p.y).powi(2) + h * h;
            (o, params.beta * ms[i] * pow.full(s) / h)
        })
        .unzip();
    let total = costs.iter().sum();
    (owners, total, costs)
}

/// Average distortion of `q` under its own Möbius partition of `grid`.
pub fn grid_distortion(grid: &SampleGrid, q: &Quantizer, params: &DistortionParams) -> Result<f64> {
    q.check_in(grid.region())?;
    Ok(classify_grid(grid, q, params).1)
}

/// Samples grouped by owner, stored contiguously.
struct Cells {
    start: Vec<usize>,
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl Cells {
    fn new(grid: &SampleGrid, owners: &[usize], n: usize) -> Self {
        let mut start = vec![0usize; n + 1];
        for &o in owners {
            start[o + 1] += 1;
        }
        for k in 0..n {
            start[k + 1] += start[k];
        }
        let mut next = start.clone();
        let mut idx = vec![0; owners.len()];
        for (i, &o) in owners.iter().enumerate() {
            idx[next[o]] = i;
            next[o] += 1;
        }
        let pick = |v: &[f64]| idx.iter().map(|&i| v[i]).collect::<Vec<_>>();
        Self {
            x: pick(grid.xs()),
            y: pick(grid.ys()),
            m: pick(grid.masses()),
            start,
        }
    }

    fn range(&self, n: usize) -> std::ops::Range<usize> {
        self.start[n]..self.start[n + 1]
    }

    fn is_empty(&self, n: usize) -> bool {
        self.start[n] == self.start[n + 1]
    }
}

/// `sum m (|p - w|^2 + h^2)^gamma` over one cell.
fn cell_objective(c: &Cells, r: std::ops::Range<usize>, p: GroundPoint, h2: f64, pow: GammaPow) -> f64 {
    r.map(|i| {
        let s = (c.x[i] - p.x).powi(2) + (c.y[i] - p.y).powi(2) + h2;
        c.m[i] * pow.full(s)
    })
    .sum()
}

struct PointStep<'a> {
    cells: &'a Cells,
    region: &'a TargetRegion,
    pow: GammaPow,
    gamma: f64,
    config: &'a LloydConfig,
    min_step: f64,
    cell_floor: f64,
}

impl PointStep<'_> {
    /// Minimizes the frozen-cell objective over `p`: the mass centroid when
    /// `gamma = 1`, otherwise damped Newton steps with Armijo backtracking.
    fn update(&self, n: usize, p0: GroundPoint, h: f64, closed_form: bool) -> GroundPoint {
        let c = self.cells;
        let r = c.range(n);
        if closed_form && self.gamma == 1.0 {
            let (mut sm, mut sx, mut sy) = (0.0, 0.0, 0.0);
            for i in r {
                sm += c.m[i];
                sx += c.m[i] * c.x[i];
                sy += c.m[i] * c.y[i];
            }
            if !(sm > 0.0) {
                return p0;
            }
            return self.region.clamp(GroundPoint::new(sx / sm, sy / sm));
        }
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for i in r.clone() {
            x0 = x0.min(c.x[i]);
            x1 = x1.max(c.x[i]);
            y0 = y0.min(c.y[i]);
            y1 = y1.max(c.y[i]);
        }
        let cell_diam = (x1 - x0).hypot(y1 - y0) + self.cell_floor;
        let h2 = h * h;
        let mut p = p0;
        let mut f0 = cell_objective(c, r.clone(), p, h2, self.pow);
        for _ in 0..self.config.point_steps {
            // gradient and Hessian of f, both divided by 2 gamma
            let (mut gx, mut gy, mut hxx, mut hxy, mut hyy) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for i in r.clone() {
                let (rx, ry) = (p.x - c.x[i], p.y - c.y[i]);
                let s = rx * rx + ry * ry + h2;
                let t2 = c.m[i] * self.pow.minus_two(s);
                let t1 = t2 * s;
                let k = 2.0 * (self.gamma - 1.0) * t2;
                gx += t1 * rx;
                gy += t1 * ry;
                hxx += t1 + k * rx * rx;
                hxy += k * rx * ry;
                hyy += t1 + k * ry * ry;
            }
            let det = hxx * hyy - hxy * hxy;
            if !(det > 0.0) {
                break;
            }
            let dx = -(hyy * gx - hxy * gy) / det;
            let dy = -(hxx * gy - hxy * gx) / det;
            let len = dx.hypot(dy);
            if !(len > self.min_step) {
                break;
            }
            let slope = 2.0 * self.gamma * (gx * dx + gy * dy);
            let mut t = (self.config.initial_step * cell_diam / len).min(1.0);
            let mut accepted = None;
            for _ in 0..MAX_BACKTRACKS {
                let trial = GroundPoint::new(p.x + t * dx, p.y + t * dy);
                if self.region.contains(&trial) {
                    let f = cell_objective(c, r.clone(), trial, h2, self.pow);
                    if f <= f0 + self.config.armijo * t * slope {
                        accepted = Some((trial, f));
                        break;
                    }
                }
                t *= self.config.backtrack;
            }
            match accepted {
                Some((trial, f)) => {
                    let moved = t * len;
                    p = trial;
                    f0 = f;
                    if moved <= self.min_step {
                        break;
                    }
                }
                None => break,
            }
        }
        p
    }
}

/// Minimizer over `h > 0` of `sum m (d2 + h^2)^gamma / h`, with `d2` the
/// squared ground distances to each sample's point.
///
/// The derivative has the sign of `psi(h) = sum m s^(gamma-1) ((2 gamma - 1) h^2 - d2)`,
/// which increases in `h`, is negative at 0 and non-negative once
/// `(2 gamma - 1) h^2 >= max d2`.
fn optimal_height(
    d2: &[f64],
    m: &[f64],
    gamma: f64,
    pow: GammaPow,
    h0: f64,
    floor: f64,
    rel_tol: f64,
    closed_form: bool,
) -> f64 {
    let objective = |h: f64| {
        let h2 = h * h;
        d2.iter()
            .zip(m)
            .map(|(&d, &w)| w * pow.full(d + h2))
            .sum::<f64>()
            / h
    };
    let k = 2.0 * gamma - 1.0;
    let max_d2 = d2.iter().copied().fold(0.0, f64::max);
    let candidate = if closed_form && gamma == 1.0 {
        let mass: f64 = m.iter().sum();
        let msd = d2.iter().zip(m).map(|(&d, &w)| w * d).sum::<f64>() / mass;
        msd.sqrt()
    } else {
        let hi = (max_d2 / k).sqrt();
        if hi <= floor {
            floor
        } else {
            bracketed_newton(
                |h| {
                    let h2 = h * h;
                    let (mut psi, mut dpsi) = (0.0, 0.0);
                    for (&d, &w) in d2.iter().zip(m) {
                        let s = d + h2;
                        let t2 = w * pow.minus_two(s);
                        psi += t2 * s * (k * h2 - d);
                        dpsi += t2 * 2.0 * h * gamma * (k * h2 + d);
                    }
                    (psi, dpsi)
                },
                0.0,
                hi,
                h0,
                rel_tol,
                HEIGHT_MAX_ITER,
            )
        }
    };
    let candidate = candidate.max(floor);
    if objective(candidate) <= objective(h0) {
        candidate
    } else {
        h0
    }
}

/// Moves points that sit within [`COLLISION_DIST`] of an earlier point.
fn separate_collisions(q: &mut Quantizer, region: &TargetRegion) {
    let step = NUDGE * region.diameter();
    let e = region.extent();
    for n in 1..q.len() {
        for attempt in 0..64u32 {
            let p = q.points()[n];
            if !q.points()[..n].iter().any(|o| o.dist(&p) < COLLISION_DIST) {
                break;
            }
            let angle = 2.399_963_229_728_653 * (n as f64 + attempt as f64);
            let moved = match region {
                TargetRegion::Interval { .. } => {
                    let dir = if p.x + step <= e.x { 1.0 } else { -1.0 };
                    GroundPoint::on_line(p.x + dir * step * (1.0 + attempt as f64))
                }
                TargetRegion::Rectangle { .. } => GroundPoint::new(
                    p.x + step * angle.cos(),
                    p.y + step * angle.sin(),
                ),
            };
            q.set_point(n, region.clamp(moved));
        }
    }
}

/// Runs Lloyd-A or Lloyd-B from `q0` on a fresh grid over the density's region.
pub fn lloyd_run(
    q0: &Quantizer,
    region: &TargetRegion,
    density: &DensityModel,
    params: &DistortionParams,
    config: &LloydConfig,
) -> Result<LloydReport> {
    if density.region() != region {
        return domain(format!(
            "density lives on {:?}, not {region:?}",
            density.region()
        ));
    }
    config.validate()?;
    let grid = SampleGrid::new(density, config.resolution_for(region))?;
    lloyd_run_on_grid(q0, &grid, params, config)
}

/// [`lloyd_run`] on a prebuilt grid; `config.resolution` is ignored.
pub fn lloyd_run_on_grid(
    q0: &Quantizer,
    grid: &SampleGrid,
    params: &DistortionParams,
    config: &LloydConfig,
) -> Result<LloydReport> {
    run(q0, grid, params, config, true)
}

pub(crate) fn run(
    q0: &Quantizer,
    grid: &SampleGrid,
    params: &DistortionParams,
    config: &LloydConfig,
    closed_form: bool,
) -> Result<LloydReport> {
    config.validate()?;
    let region = *grid.region();
    q0.check_in(&region)?;
    let n = q0.len();
    let mut q = match config.variant {
        LloydVariant::A => {
            if !q0.is_common_height() {
                return Err(Error::InvalidConfig(
                    "Lloyd-A needs a quantizer with a common height".into(),
                ));
            }
            q0.clone()
        }
        LloydVariant::B => Quantizer::new(q0.points().to_vec(), q0.heights().to_vec())?,
    };
    let gamma = params.gamma;
    let pow = GammaPow::new(gamma);
    let floor = NUDGE * region.diameter();
    separate_collisions(&mut q, &region);

    let (mut owners, mut current, mut costs) = classify_grid(grid, &q, params);
    let mut trace = vec![current];
    let mut reseeds = Vec::new();
    let mut termination = Termination::MaxIters;
    let mut iterations = 0;
    let mut d2 = vec![0.0; grid.len()];

    for it in 1..=config.max_iters {
        iterations = it;
        let cells = Cells::new(grid, &owners, n);

        let mut reseeded = false;
        let mut taken: Vec<usize> = Vec::new();
        for k in 0..n {
            if !cells.is_empty(k) {
                continue;
            }
            let best = (0..grid.len())
                .filter(|i| !taken.contains(i))
                .fold(None, |acc: Option<usize>, i| match acc {
                    Some(j) if costs[j] >= costs[i] => Some(j),
                    _ => Some(i),
                });
            let Some(i) = best else { break };
            taken.push(i);
            let to = grid.center(i);
            q.set_point(k, to);
            if config.variant == LloydVariant::B {
                q.set_height(k, q.heights()[owners[i]]);
            }
            reseeds.push(Reseed { iteration: it, point: k, to });
            reseeded = true;
        }
        if reseeded {
            separate_collisions(&mut q, &region);
        }

        let stepper = PointStep {
            cells: &cells,
            region: &region,
            pow,
            gamma,
            config,
            min_step: 1e-13 * region.diameter(),
            cell_floor: grid.cell_diameter(),
        };
        let moved: Vec<GroundPoint> = (0..n)
            .map(|k| {
                if cells.is_empty(k) {
                    q.points()[k]
                } else {
                    stepper.update(k, q.points()[k], q.heights()[k], closed_form)
                }
            })
            .collect();
        for (k, p) in moved.into_iter().enumerate() {
            q.set_point(k, p);
        }

        for k in 0..n {
            let p = q.points()[k];
            for j in cells.range(k) {
                d2[j] = (cells.x[j] - p.x).powi(2) + (cells.y[j] - p.y).powi(2);
            }
        }
        match config.variant {
            LloydVariant::A => {
                let h = optimal_height(
                    &d2,
                    &cells.m,
                    gamma,
                    pow,
                    q.heights()[0],
                    floor,
                    config.height_tolerance,
                    closed_form,
                );
                q.set_all_heights(h);
            }
            LloydVariant::B => {
                for k in 0..n {
                    if cells.is_empty(k) {
                        continue;
                    }
                    let r = cells.range(k);
                    let h = optimal_height(
                        &d2[r.clone()],
                        &cells.m[r],
                        gamma,
                        pow,
                        q.heights()[k],
                        floor,
                        config.height_tolerance,
                        closed_form,
                    );
                    q.set_height(k, h);
                }
            }
        }
        let previous = current;
        (owners, current, costs) = classify_grid(grid, &q, params);
        trace.push(current);
        if !reseeded && previous - current <= config.tolerance * previous {
            termination = Termination::Converged;
            break;
        }
    }
    Ok(LloydReport {
        quantizer: q,
        trace,
        iterations,
        termination,
        reseeds,
    })
}

/// Outcome of several restarts of the same optimizer.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BestOf {
    /// Index of the winning restart; its seed is `config.seed + best_index`.
    pub best_index: usize,
    pub best: LloydReport,
    /// Final distortion of every restart, in seed order.
    pub finals: Vec<f64>,
}

/// The starting quantizer of restart `k`, shared by both variants.
pub fn restart_start(region: &TargetRegion, n: usize, gamma: f64, config: &LloydConfig, k: usize) -> Result<Quantizer> {
    random_start(region, n, gamma, &mut seeded_rng(config.seed.wrapping_add(k as u64), 0))
}

/// Runs restarts `0..config.seeds` from [`restart_start`], in seed order.
pub fn lloyd_restarts(
    grid: &SampleGrid,
    n: usize,
    params: &DistortionParams,
    config: &LloydConfig,
) -> Result<Vec<LloydReport>> {
    config.validate()?;
    (0..config.seeds)
        .into_par_iter()
        .map(|k| {
            let q0 = restart_start(grid.region(), n, params.gamma, config, k)?;
            lloyd_run_on_grid(&q0, grid, params, config)
        })
        .collect()
}

impl BestOf {
    /// Keeps the lowest final distortion, earliest restart on ties.
    pub fn from_reports(reports: Vec<LloydReport>) -> Result<Self> {
        if reports.is_empty() {
            return domain("no restarts to choose from");
        }
        let finals: Vec<f64> = reports.iter().map(LloydReport::final_distortion).collect();
        let best_index = (0..finals.len())
            .reduce(|b, k| if finals[k] < finals[b] { k } else { b })
            .expect("nonempty");
        let best = reports.into_iter().nth(best_index).expect("index in range");
        Ok(Self {
            best_index,
            best,
            finals,
        })
    }
}

/// Best of [`lloyd_restarts`].
pub fn lloyd_best_of(grid: &SampleGrid, n: usize, params: &DistortionParams, config: &LloydConfig) -> Result<BestOf> {
    BestOf::from_reports(lloyd_restarts(grid, n, params, config)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RandomBaseline {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

/// Distortion statistics of `count` random deployments seeded from `seed`.
pub fn random_baseline(
    grid: &SampleGrid,
    n: usize,
    params: &DistortionParams,
    count: usize,
    seed: u64,
) -> Result<RandomBaseline> {
    if count == 0 {
        return domain("need at least one random deployment");
    }
    let values = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = seeded_rng(seed.wrapping_add(k as u64), 1);
            let q = random_deployment(grid.region(), n, params.gamma, &mut rng)?;
            Ok(classify_grid(grid, &q, params).1)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(RandomBaseline {
        count,
        mean: values.iter().sum::<f64>() / count as f64,
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

/// One `(gamma, N)` cell of a comparison sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub gamma: f64,
    pub n: usize,
    /// Best of `config.seeds` restarts.
    pub lloyd_a: f64,
    pub lloyd_b: f64,
    pub rd: RandomBaseline,
    /// The first restart alone.
    pub lloyd_a_single: f64,
    pub lloyd_b_single: f64,
}

pub const SWEEP_CSV_HEADER: &str =
    "alpha,gamma,N,lloydA,lloydB,rd_mean,rd_min,rd_max,lloydA_single,lloydB_single";

impl SweepRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.alpha,
            self.gamma,
            self.n,
            self.lloyd_a,
            self.lloyd_b,
            self.rd.mean,
            self.rd.min,
            self.rd.max,
            self.lloyd_a_single,
            self.lloyd_b_single
        )
    }
}

/// Lloyd-A, Lloyd-B and the random baseline for every `(gamma, N)` pair,
/// rows ordered by gamma then N.
pub fn sweep(
    density: &DensityModel,
    gammas: &[f64],
    ns: &[usize],
    beta: f64,
    config: &LloydConfig,
    num_random: usize,
) -> Result<Vec<SweepRow>> {
    if gammas.is_empty() || ns.is_empty() {
        return domain("sweep needs at least one gamma and one N");
    }
    config.validate()?;
    let grid = Arc::new(SampleGrid::new(density, config.resolution_for(density.region()))?);
    let mut rows = Vec::with_capacity(gammas.len() * ns.len());
    for &gamma in gammas {
        let params = DistortionParams::new(gamma, beta)?;
        for &n in ns {
            let a = lloyd_best_of(&grid, n, &params, &config.with_variant(LloydVariant::A))?;
            let b = lloyd_best_of(&grid, n, &params, &config.with_variant(LloydVariant::B))?;
            let rd = random_baseline(&grid, n, &params, num_random, config.seed)?;
            rows.push(SweepRow {
                alpha: params.alpha(),
                gamma,
                n,
                lloyd_a: a.best.final_distortion(),
                lloyd_b: b.best.final_distortion(),
                rd,
                lloyd_a_single: a.finals[0],
                lloyd_b_single: b.finals[0],
            });
        }
    }
    Ok(rows)
}
