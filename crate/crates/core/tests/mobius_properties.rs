use std::sync::Arc;

use paramquant::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn unit_point(rng: &mut impl Rng) -> GroundPoint {
    GroundPoint::new(rng.gen(), rng.gen())
}

#[test]
fn dominance_regions_match_pairwise_comparison() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for _ in 0..100_000 {
        let gamma = rng.gen_range(1.0..4.0);
        let params = DistortionParams::with_gamma(gamma).unwrap();
        let (p_n, p_m, w) = (unit_point(&mut rng), unit_point(&mut rng), unit_point(&mut rng));
        let h_n = rng.gen_range(0.05..2.0);
        let h_m = if rng.gen_bool(0.1) { h_n } else { rng.gen_range(0.05..2.0) };
        let region = dominance_region(p_n, h_n, p_m, h_m, gamma).unwrap();
        let d_n = distortion(&w, &p_n, h_n, &params).unwrap();
        let d_m = distortion(&w, &p_m, h_m, &params).unwrap();
        if (d_n - d_m).abs() <= 1e-9 * d_n.max(d_m) {
            continue;
        }
        assert_eq!(region.contains(&w), d_n <= d_m, "{p_n:?} {h_n} {p_m:?} {h_m} {gamma} at {w:?}");
        checked += 1;
    }
    assert!(checked > 99_000);
}

#[test]
fn classified_owner_dominates_every_rival() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let gamma = rng.gen_range(1.0..3.5);
        let params = DistortionParams::with_gamma(gamma).unwrap();
        let n = rng.gen_range(2..8);
        let q = Quantizer::new(
            (0..n).map(|_| unit_point(&mut rng)).collect(),
            (0..n).map(|_| rng.gen_range(0.05..1.5)).collect(),
        )
        .unwrap();
        for _ in 0..200 {
            let w = unit_point(&mut rng);
            let k = classify(&w, &q, &params);
            for m in (0..n).filter(|&m| m != k) {
                let r = dominance_region(q.points()[k], q.heights()[k], q.points()[m], q.heights()[m], gamma)
                    .unwrap();
                // inside up to rounding on the boundary
                let scale = 1.0 + w.dist2(&GroundPoint::default()) + r.margin(&GroundPoint::default()).abs();
                assert!(r.margin(&w) >= -1e-9 * scale, "{k} vs {m} at {w:?}");
            }
        }
    }
}

#[test]
fn equal_heights_give_the_euclidean_voronoi_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let n = rng.gen_range(1..12);
        let gamma = rng.gen_range(1.0..4.0);
        let params = DistortionParams::with_gamma(gamma).unwrap();
        let points: Vec<_> = (0..n).map(|_| unit_point(&mut rng)).collect();
        let q = Quantizer::with_common_height(points.clone(), rng.gen_range(0.01..3.0)).unwrap();
        for _ in 0..500 {
            let w = unit_point(&mut rng);
            let nearest = (0..n)
                .reduce(|b, k| if w.dist2(&points[k]) < w.dist2(&points[b]) { k } else { b })
                .unwrap();
            assert_eq!(classify(&w, &q, &params), nearest);
        }
    }
}

#[test]
fn one_dimensional_ball_matches_brute_force_scan() {
    let params = DistortionParams::default();
    let (p_n, p_m) = (GroundPoint::on_line(0.2), GroundPoint::on_line(0.8));
    let region = dominance_region(p_n, 0.4, p_m, 0.9, 1.0).unwrap();
    let DominanceRegion::Ball { center, radius } = region else {
        panic!("expected a ball, got {region:?}");
    };
    let steps = 100_000;
    let (lo, hi) = (-2.0, 3.0);
    let dx = (hi - lo) / steps as f64;
    let inside: Vec<f64> = (0..=steps)
        .map(|i| lo + i as f64 * dx)
        .filter(|&x| {
            let w = GroundPoint::on_line(x);
            distortion(&w, &p_n, 0.4, &params).unwrap() <= distortion(&w, &p_m, 0.9, &params).unwrap()
        })
        .collect();
    let (first, last) = (inside[0], *inside.last().unwrap());
    assert!((first - (center.x - radius)).abs() <= dx);
    assert!((last - (center.x + radius)).abs() <= dx);
    // one contiguous run
    assert_eq!(inside.len(), ((last - first) / dx).round() as usize + 1);
}

#[test]
fn cells_1d_match_dense_classification() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..40 {
        let n = rng.gen_range(1..7);
        let gamma = rng.gen_range(1.0..3.0);
        let params = DistortionParams::with_gamma(gamma).unwrap();
        let q = Quantizer::new(
            (0..n).map(|_| GroundPoint::on_line(rng.gen())).collect(),
            (0..n).map(|_| rng.gen_range(0.05..1.0)).collect(),
        )
        .unwrap();
        let region = TargetRegion::interval(1.0).unwrap();
        let part = cells_1d(&q, &region, &params).unwrap();
        let total: f64 = (0..n).map(|k| part.cell_length(k)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        for k in 0..n {
            assert!(part.cell(k).len() <= (2 * n).saturating_sub(2).max(1));
        }
        let mut all: Vec<(f64, f64)> = part.cells().iter().flatten().copied().collect();
        all.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in all.windows(2) {
            assert!(w[0].1 <= w[1].0 + 1e-15);
        }
        let classifier = Classifier::new(&q, &params);
        for i in 0..20_000 {
            let x = (i as f64 + 0.5) / 20_000.0;
            let owner = part.owner_at(x).unwrap();
            let direct = classifier.classify(&GroundPoint::on_line(x));
            if owner != direct {
                // only possible right at a breakpoint
                let d = |k: usize| distortion(&GroundPoint::on_line(x), &q.points()[k], q.heights()[k], &params).unwrap();
                assert!((d(owner) - d(direct)).abs() <= 1e-9 * d(direct));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ownership_ignores_beta_and_similarity_scaling(
        seed in 0u64..10_000,
        scale in 0.2f64..5.0,
        beta in 0.1f64..20.0,
        gamma in 1.0f64..3.5,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..6);
        let points: Vec<_> = (0..n).map(|_| unit_point(&mut rng)).collect();
        let heights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
        let q = Quantizer::new(points.clone(), heights.clone()).unwrap();
        let grid = Arc::new(SampleGrid::new(&DensityModel::uniform(TargetRegion::square(1.0).unwrap()), 64).unwrap());
        let plain = grid.partition(&q, &DistortionParams::with_gamma(gamma).unwrap());
        let beta_only = grid.partition(&q, &DistortionParams::new(gamma, beta).unwrap());
        prop_assert_eq!(plain.owners(), beta_only.owners());

        // region, points and heights scaled together: every cost picks up
        // the same factor scale^(2 gamma - 1)
        let big = Quantizer::new(
            points.iter().map(|p| GroundPoint::new(p.x * scale, p.y * scale)).collect(),
            heights.iter().map(|h| h * scale).collect(),
        ).unwrap();
        let big_grid = Arc::new(
            SampleGrid::new(&DensityModel::uniform(TargetRegion::square(scale).unwrap()), 64).unwrap(),
        );
        let scaled = big_grid.partition(&big, &DistortionParams::new(gamma, beta).unwrap());
        let differ = plain.owners().iter().zip(scaled.owners()).filter(|(a, b)| a != b).count();
        // rounding can only flip samples sitting on a boundary
        prop_assert!(differ <= 2, "{} samples changed owner", differ);
    }

    #[test]
    fn grid_masses_sum_to_one(seed in 0u64..10_000, n in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let region = TargetRegion::square(10.0).unwrap();
        let density = DensityModel::gaussian_mixture(clustered_mixture_components(), region).unwrap();
        let q = Quantizer::new(
            (0..n).map(|_| GroundPoint::new(rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0))).collect(),
            (0..n).map(|_| rng.gen_range(0.1..3.0)).collect(),
        ).unwrap();
        let part = grid_partition(&q, &density, &DistortionParams::with_gamma(2.0).unwrap(), 100).unwrap();
        let total: f64 = part.cell_masses().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-3, "{}", total);
    }
}
