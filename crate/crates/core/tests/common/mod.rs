//! Oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::sync::Arc;

use paramquant::*;
use rand::Rng;

/// Relative sup-norm gap between the analytic gradient and central finite
/// differences of the frozen-partition distortion.
pub fn gradient_fd_error(q: &Quantizer, density: &DensityModel, params: &DistortionParams, dim: usize) -> f64 {
    let region = *density.region();
    enum Frozen {
        Grid(GridPartition),
        Line(Partition1D),
    }
    let frozen = if dim == 1 {
        Frozen::Line(cells_1d(q, &region, params).unwrap())
    } else {
        let grid = Arc::new(SampleGrid::new(density, 200).unwrap());
        Frozen::Grid(grid.partition(q, params))
    };
    let eval = |q: &Quantizer| match &frozen {
        Frozen::Grid(p) => average_distortion(q, density, params, p).unwrap().total,
        Frozen::Line(p) => average_distortion(q, density, params, p).unwrap().total,
    };
    let analytic = match &frozen {
        Frozen::Grid(p) => gradient(q, density, params, p).unwrap(),
        Frozen::Line(p) => gradient(q, density, params, p).unwrap(),
    };
    let step = 1e-5 * region.diameter();
    let mut worst: f64 = 0.0;
    let scale = analytic.max_abs().max(1e-300);
    for n in 0..q.len() {
        let mut coords: Vec<(f64, Box<dyn Fn(f64) -> Quantizer>)> = Vec::new();
        for axis in 0..dim {
            let base = q.clone();
            coords.push((
                analytic.d_point[n][axis],
                Box::new(move |t| {
                    let mut pts = base.points().to_vec();
                    if axis == 0 {
                        pts[n].x += t;
                    } else {
                        pts[n].y += t;
                    }
                    Quantizer::new(pts, base.heights().to_vec()).unwrap()
                }),
            ));
        }
        let base = q.clone();
        coords.push((
            analytic.d_height[n],
            Box::new(move |t| {
                let mut hs = base.heights().to_vec();
                hs[n] += t;
                Quantizer::new(base.points().to_vec(), hs).unwrap()
            }),
        ));
        for (want, shift) in coords {
            let fd = (eval(&shift(step)) - eval(&shift(-step))) / (2.0 * step);
            worst = worst.max((fd - want).abs() / scale);
        }
    }
    worst
}

/// Random points and heights on the unit interval or square.
pub fn random_quantizer(rng: &mut impl Rng, n: usize, dim: usize, h_range: (f64, f64)) -> Quantizer {
    loop {
        let points = (0..n)
            .map(|_| {
                let x = rng.gen_range(0.02..0.98);
                if dim == 1 {
                    GroundPoint::on_line(x)
                } else {
                    GroundPoint::new(x, rng.gen_range(0.02..0.98))
                }
            })
            .collect();
        let heights = (0..n).map(|_| rng.gen_range(h_range.0..h_range.1)).collect();
        let q = Quantizer::new(points, heights).unwrap();
        let far_apart = (0..n).all(|a| (a + 1..n).all(|b| q.points()[a].dist(&q.points()[b]) > 0.02));
        if far_apart {
            return q;
        }
    }
}

/// A random tiling of `[0, length]` into `pieces` intervals with random owners.
pub fn random_partition_1d(rng: &mut impl Rng, length: f64, n: usize, pieces: usize) -> Partition1D {
    let mut cuts: Vec<f64> = (0..pieces - 1).map(|_| rng.gen_range(0.0..length)).collect();
    cuts.push(0.0);
    cuts.push(length);
    cuts.sort_by(f64::total_cmp);
    let mut cells = vec![Vec::new(); n];
    for w in cuts.windows(2) {
        cells[rng.gen_range(0..n)].push((w[0], w[1]));
    }
    Partition1D::from_cells(length, cells).unwrap()
}
