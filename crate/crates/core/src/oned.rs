//! Optimal quantizers on an interval with uniform density.
//!
//! With `F(u, gamma) = integral_0^1 (w^2 + u^2)^gamma / u dw` and
//! `g(gamma) = argmin_u F(u, gamma)`, the optimal `N`-level quantizer on
//! `[0, A]` is the uniform scalar quantizer with common height
//! `(A / 2N) g(gamma)` and distortion `(A / 2N)^(2 gamma - 1) F(g, gamma)`.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::mobius::Partition1D;
use crate::model::{GroundPoint, Quantizer};
use crate::numerics::{adaptive_simpson, bracketed_newton, golden_section};

const F_TOL: f64 = 1e-12;
const G_LOWER: f64 = 1e-9;
const GOLDEN_TOL: f64 = 1e-8;

fn check_u(u: f64) -> Result<()> {
    if !(u > 0.0 && u.is_finite()) {
        return domain(format!("u must be positive, got {u}"));
    }
    Ok(())
}

fn integer_gamma(gamma: f64) -> Option<u32> {
    (gamma.fract() == 0.0 && (1.0..=32.0).contains(&gamma)).then_some(gamma as u32)
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// `F(u, gamma)`; exact for integer `gamma`, adaptive Simpson otherwise.
#[allow(non_snake_case)]
pub fn F(u: f64, gamma: f64) -> Result<f64> {
    check_u(u)?;
    Ok(f_unchecked(u, gamma))
}

fn f_unchecked(u: f64, gamma: f64) -> f64 {
    let x = u * u;
    match integer_gamma(gamma) {
        Some(k) => {
            (0..=k)
                .map(|j| binomial(k, j) * x.powi((k - j) as i32) / f64::from(2 * j + 1))
                .sum::<f64>()
                / u
        }
        None => adaptive_simpson(|w| (w * w + x).powf(gamma), 0.0, 1.0, F_TOL * u) / u,
    }
}

/// `dF/du = u^-2  integral_0^1 (w^2 + u^2)^(gamma-1) ((2 gamma - 1) u^2 - w^2) dw`
#[allow(non_snake_case)]
pub fn F_prime(u: f64, gamma: f64) -> Result<f64> {
    check_u(u)?;
    Ok(f_prime_unchecked(u, gamma))
}

fn f_prime_unchecked(u: f64, gamma: f64) -> f64 {
    let x = u * u;
    let c = 2.0 * gamma - 1.0;
    match integer_gamma(gamma) {
        Some(k) => {
            (0..k)
                .map(|j| {
                    binomial(k - 1, j)
                        * x.powi((k - 1 - j) as i32)
                        * (c * x / f64::from(2 * j + 1) - 1.0 / f64::from(2 * j + 3))
                })
                .sum::<f64>()
                / x
        }
        None => {
            adaptive_simpson(|w| (w * w + x).powf(gamma - 1.0) * (c * x - w * w), 0.0, 1.0, F_TOL * x)
                / x
        }
    }
}

fn f_second(u: f64, gamma: f64) -> f64 {
    let x = u * u;
    let c = 2.0 * gamma - 1.0;
    adaptive_simpson(
        |w| {
            let s = w * w + x;
            2.0 * (gamma - 1.0) * u * s.powf(gamma - 2.0) * (c - w * w / x)
                + s.powf(gamma - 1.0) * 2.0 * w * w / (x * u)
        },
        0.0,
        1.0,
        F_TOL,
    )
}

/// Closed-form minimizer of `F(., gamma)` for `gamma` in {1, 2, 3}.
pub fn g_closed_form(gamma: f64) -> Result<f64> {
    match integer_gamma(gamma) {
        Some(1) => Ok((1.0f64 / 3.0).sqrt()),
        Some(2) => Ok((((32.0f64 / 5.0).sqrt() - 1.0) / 9.0).sqrt()),
        Some(3) => Ok((((32.0f64 / 7.0).cbrt() - 1.0) / 5.0).sqrt()),
        _ => Err(Error::Unsupported(format!(
            "no closed form for gamma = {gamma}; use g_numeric"
        ))),
    }
}

/// Upper bound `1 / sqrt(2 gamma - 1)` on `g(gamma)`.
pub fn g_upper_bound(gamma: f64) -> f64 {
    1.0 / (2.0 * gamma - 1.0).sqrt()
}

/// Minimizer of `F(., gamma)` by golden section, polished by Newton on `F'`.
///
/// `F` is strictly convex on `u > 0` and `F' > 0` from `1 / sqrt(2 gamma - 1)`
/// on, so the root of `F'` is bracketed by `(0, 1 / sqrt(2 gamma - 1))`.
pub fn g_numeric(gamma: f64) -> f64 {
    assert!(gamma >= 1.0, "gamma must be >= 1, got {gamma}");
    let hi = g_upper_bound(gamma);
    let coarse = golden_section(|u| f_unchecked(u, gamma), G_LOWER, hi, GOLDEN_TOL);
    bracketed_newton(
        |u| (f_prime_unchecked(u, gamma), f_second(u, gamma)),
        G_LOWER,
        hi,
        coarse,
        1e-15,
        100,
    )
}

/// `g(gamma)`, closed form where one exists.
pub fn g(gamma: f64) -> f64 {
    g_closed_form(gamma).unwrap_or_else(|_| g_numeric(gamma))
}

/// The optimal `N`-level quantizer on `[0, A]` for a uniform density.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OneDimOptimum {
    pub length: f64,
    pub levels: usize,
    pub gamma: f64,
    pub points: Vec<f64>,
    pub height: f64,
    /// `N + 1` cell boundaries from `0` to `A`.
    pub boundaries: Vec<f64>,
    pub distortion: f64,
}

impl OneDimOptimum {
    pub fn half_cell(&self) -> f64 {
        self.length / (2.0 * self.levels as f64)
    }

    pub fn quantizer(&self) -> Quantizer {
        Quantizer::with_common_height(
            self.points.iter().map(|&x| GroundPoint::on_line(x)).collect(),
            self.height,
        )
        .expect("optimum heights are positive")
    }

    pub fn partition(&self) -> Partition1D {
        let cells = self
            .boundaries
            .windows(2)
            .map(|w| vec![(w[0], w[1])])
            .collect();
        Partition1D::from_cells(self.length, cells).expect("boundaries tile the interval")
    }
}

pub fn one_level_optimum(length: f64, gamma: f64) -> Result<OneDimOptimum> {
    n_level_optimum(1, length, gamma)
}

pub fn n_level_optimum(levels: usize, length: f64, gamma: f64) -> Result<OneDimOptimum> {
    if levels == 0 {
        return domain("need at least one level");
    }
    if !(length > 0.0 && length.is_finite()) {
        return domain(format!("interval length must be positive, got {length}"));
    }
    if !(gamma >= 1.0 && gamma.is_finite()) {
        return domain(format!("gamma must be >= 1, got {gamma}"));
    }
    let n = levels as f64;
    let half = length / (2.0 * n);
    let u = g(gamma);
    let points = (1..=levels).map(|k| half * (2 * k - 1) as f64).collect();
    let mut boundaries: Vec<f64> = (0..=levels).map(|k| length * k as f64 / n).collect();
    boundaries[levels] = length;
    Ok(OneDimOptimum {
        length,
        levels,
        gamma,
        points,
        height: half * u,
        boundaries,
        distortion: half.powf(2.0 * gamma - 1.0) * f_unchecked(u, gamma),
    })
}

/// `cos` of the widest elevation angle, `h* / (A / 2N)`.
pub fn max_elevation_cosine(opt: &OneDimOptimum) -> f64 {
    opt.height / opt.half_cell()
}

/// Optimal common height, its bound and the minimum distortion at one
/// path-loss exponent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HeightCurvePoint {
    pub alpha: f64,
    pub gamma: f64,
    pub height: f64,
    pub bound: f64,
    pub distortion: f64,
}

/// `h*(alpha) = (A / 2N) g((alpha + 1) / 2)` with bound `(A / 2N) / sqrt(alpha)`.
pub fn optimal_height_curve(levels: usize, length: f64, alphas: &[f64]) -> Result<Vec<HeightCurvePoint>> {
    alphas
        .iter()
        .map(|&alpha| {
            let gamma = (alpha + 1.0) / 2.0;
            let opt = n_level_optimum(levels, length, gamma)?;
            Ok(HeightCurvePoint {
                alpha,
                gamma,
                height: opt.height,
                bound: opt.half_cell() / alpha.sqrt(),
                distortion: opt.distortion,
            })
        })
        .collect()
}
