//! Scalar quadrature and one-dimensional minimization.

const MAX_SIMPSON_DEPTH: u32 = 48;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, b, fa, fm, fb, whole, tol, MAX_SIMPSON_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Golden-section search for the minimizer of a unimodal `f` on `[lo, hi]`,
/// stopping once the bracket is narrower than `tol`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Root of `g` on a sign-changing bracket `[lo, hi]` (`g(lo) < 0 < g(hi)`),
/// by Newton steps from `x0` that fall back to bisection whenever a step
/// leaves the bracket. `g_dg` returns `(g(x), g'(x))`.
pub fn bracketed_newton<F: FnMut(f64) -> (f64, f64)>(
    mut g_dg: F,
    mut lo: f64,
    mut hi: f64,
    x0: f64,
    rel_tol: f64,
    max_iter: usize,
) -> f64 {
    let mut x = if x0 > lo && x0 < hi { x0 } else { 0.5 * (lo + hi) };
    for _ in 0..max_iter {
        let (g, dg) = g_dg(x);
        if g == 0.0 {
            return x;
        }
        if g < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - g / dg;
        let next = if dg > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        x = next;
        if step <= rel_tol * x.abs() || hi - lo <= rel_tol * x.abs() {
            break;
        }
    }
    x
}


/// Fast `s^(gamma - 2)` for the exponents that show up in practice:
/// integers and half-integers avoid `powf`.
#[derive(Clone, Copy, Debug)]
pub(crate) enum GammaPow {
    Integer(i32),
    Half(i32),
    General(f64),
}

impl GammaPow {
    pub(crate) fn new(gamma: f64) -> Self {
        let twice = 2.0 * gamma;
        if gamma.fract() == 0.0 && gamma < 64.0 {
            Self::Integer(gamma as i32 - 2)
        } else if twice.fract() == 0.0 && gamma < 64.0 {
            Self::Half(gamma.floor() as i32 - 2)
        } else {
            Self::General(gamma - 2.0)
        }
    }

    /// `s^(gamma - 2)` for `s > 0`.
    #[inline]
    pub(crate) fn minus_two(&self, s: f64) -> f64 {
        match *self {
            Self::Integer(k) => s.powi(k),
            Self::Half(k) => s.powi(k) * s.sqrt(),
            Self::General(e) => s.powf(e),
        }
    }

    /// `s^gamma`
    #[inline]
    pub(crate) fn full(&self, s: f64) -> f64 {
        self.minus_two(s) * s * s
    }
}
