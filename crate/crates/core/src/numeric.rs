//! Small numerical kernels shared by the geometry and design code.

use crate::error::{Error, Result};

/// `n` equally spaced points over `[a, b]`, endpoints included.
///
/// A single point sits at the midpoint.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (a + b)],
        _ => {
            let step = (b - a) / (n - 1) as f64;
            let mut v: Vec<f64> = (0..n).map(|i| a + step * i as f64).collect();
            v[n - 1] = b;
            v
        }
    }
}

/// Cumulative trapezoid on a uniform grid with spacing `h`; output starts at 0.
pub fn cumulative_trapezoid(values: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in values.windows(2) {
        acc += 0.5 * h * (w[0] + w[1]);
        out.push(acc);
    }
    out.truncate(values.len());
    out
}

/// Linear interpolation on a uniform grid starting at `x0` with spacing `h`.
///
/// Arguments outside the grid are clamped to the end values.
pub fn interp_uniform(x0: f64, h: f64, values: &[f64], x: f64) -> f64 {
    let n = values.len();
    debug_assert!(n >= 2);
    let t = (x - x0) / h;
    if t <= 0.0 {
        return values[0];
    }
    let i = t.floor() as usize;
    if i >= n - 1 {
        return values[n - 1];
    }
    let frac = t - i as f64;
    values[i] + frac * (values[i + 1] - values[i])
}

/// Linear interpolation on an arbitrary increasing grid; `None` outside it.
pub fn interp_sorted(xs: &[f64], ys: &[f64], x: f64) -> Option<f64> {
    let n = xs.len();
    if n == 0 || x < xs[0] || x > xs[n - 1] {
        return None;
    }
    if n == 1 {
        return Some(ys[0]);
    }
    let j = xs.partition_point(|&v| v <= x).clamp(1, n - 1);
    let (x0, x1) = (xs[j - 1], xs[j]);
    let t = if x1 > x0 { (x - x0) / (x1 - x0) } else { 0.0 };
    Some(ys[j - 1] + t * (ys[j] - ys[j - 1]))
}

/// Root of `f` on a sign-changing bracket `[a, b]`.
///
/// Bisection keeps the bracket; a secant step is taken whenever it lands
/// inside the current bracket. Stops once `|f| <= f_tol` or the bracket
/// shrinks to a few ulps.
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, f_tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let (mut f_lo, f_hi) = (f(lo), f(hi));
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::Domain(format!(
            "root bracket [{lo}, {hi}] has no sign change ({f_lo}, {f_hi})"
        )));
    }
    let mut f_hi = f_hi;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        let x = if secant > lo && secant < hi && secant.is_finite() {
            // Secant tends to stall on one side; alternate with bisection by
            // taking whichever point lies closer to the middle.
            if (secant - mid).abs() < 0.25 * (hi - lo) {
                secant
            } else {
                mid
            }
        } else {
            mid
        };
        let fx = f(x);
        if fx.abs() <= f_tol {
            return Ok(x);
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
        if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok(if f_lo.abs() < f_hi.abs() { lo } else { hi })
}

/// Golden-section search for a local minimum of `f` on `[a, b]`.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, x_tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a, b);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > x_tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Minimum of `f` over a periodic angle, by dense sampling then golden refinement.
pub fn periodic_min<F: FnMut(f64) -> f64>(mut f: F, samples: usize) -> (f64, f64) {
    let step = std::f64::consts::TAU / samples as f64;
    let (mut best_i, mut best_v) = (0, f64::INFINITY);
    for i in 0..samples {
        let v = f(step * i as f64);
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let center = step * best_i as f64;
    let (x, v) = golden_min(&mut f, center - step, center + step, 1e-13);
    if v <= best_v {
        (x.rem_euclid(std::f64::consts::TAU), v)
    } else {
        (center, best_v)
    }
}

/// Integral of `f` over `[a, b]` to a relative tolerance.
///
/// Double-exponential quadrature; the absolute target handed to the
/// integrator is derived from a coarse first pass.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let coarse = quadrature::double_exponential::integrate(&f, a, b, 1e-3);
    let scale = coarse.integral.abs().max(f64::MIN_POSITIVE);
    quadrature::double_exponential::integrate(&f, a, b, rel_tol * scale).integral
}

/// Sum with pairwise recursion; error grows as O(log n) instead of O(n).
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 64;
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints() {
        let v = linspace(28e9, 32e9, 200);
        assert_eq!(v.len(), 200);
        assert_eq!(v[0], 28e9);
        assert_eq!(v[199], 32e9);
        assert_eq!(linspace(1.0, 3.0, 1), vec![2.0]);
    }

    #[test]
    fn trapezoid_exact_on_lines() {
        let xs = linspace(0.0, 2.0, 11);
        let c = cumulative_trapezoid(&xs, 0.2);
        assert!((c[10] - 2.0).abs() < 1e-14);
        assert_eq!(c[0], 0.0);
    }

    #[test]
    fn root_of_cosine() {
        let r = find_root(f64::cos, 0.0, 3.0, 0.0).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!(find_root(|x| x * x + 1.0, -1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, v) = golden_min(|x| (x - 0.3).powi(2) + 1.0, -1.0, 2.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn integrate_relative() {
        let v = integrate(|x| x.sqrt(), 0.0, 1.0, 1e-10);
        assert!((v - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn interp_clamps_and_matches() {
        let v = [0.0, 1.0, 4.0];
        assert_eq!(interp_uniform(0.0, 1.0, &v, 1.5), 2.5);
        assert_eq!(interp_uniform(0.0, 1.0, &v, -1.0), 0.0);
        assert_eq!(interp_uniform(0.0, 1.0, &v, 9.0), 4.0);
        assert_eq!(interp_sorted(&[0.0, 1.0, 2.0], &v, 0.5), Some(0.5));
        assert_eq!(interp_sorted(&[0.0, 1.0, 2.0], &v, 2.5), None);
    }
}
