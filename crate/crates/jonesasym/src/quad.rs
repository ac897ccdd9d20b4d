//! Shared contour-quadrature engine: Gaussian-weighted integrals along
//! rotated lines, lines with a semicircular detour around a simple pole, and
//! Cauchy circle integrals for Laurent coefficients.
//!
//! All integrators refine until self-consistent (panel doubling below 1e-11
//! relative, trapezoid node doubling below 1e-12), so callers get an error
//! rather than a silently inaccurate value.

use crate::{Error, Result};
use num_complex::Complex64;

const PI: f64 = std::f64::consts::PI;

/// Integration path in the complex plane.
#[derive(Debug, Clone, Copy)]
pub enum Contour {
    /// Infinite line `basepoint + t * exp(i*angle)`, `t` real.
    RotatedLine { angle: f64, basepoint: Complex64 },
    /// Same line, but with a semicircular arc of `detour_radius` around
    /// `detour_center` (which must lie on the line), passing below the
    /// center when `below` is set.
    DetourLine {
        angle: f64,
        basepoint: Complex64,
        detour_center: Complex64,
        detour_radius: f64,
        below: bool,
    },
    /// Circle of given radius; `orientation` +1 is anticlockwise.
    Circle { center: Complex64, radius: f64, orientation: i8 },
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; mirrored).
const GL_X: [f64; 8] = [
    0.0950125098376374,
    0.2816035507792589,
    0.4580167776572274,
    0.6178762444026438,
    0.7554044083550030,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GL_W: [f64; 8] = [
    0.1894506104550685,
    0.1826034150449236,
    0.1691565193950025,
    0.1495959888165767,
    0.1246289712555339,
    0.0951585116824928,
    0.0622535239386479,
    0.0271524594117541,
];

/// 16-point Gauss-Legendre on `[a, b]` of a complex path integrand already
/// including the `dz/dt` factor.
fn gl_panel<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Complex64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..8 {
        acc += GL_W[i] * (f(mid + half * GL_X[i]) + f(mid - half * GL_X[i]));
    }
    acc * half
}

/// Composite Gauss-Legendre over `[a, b]`, `panels` subintervals.
fn gl_composite<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, panels: usize) -> Complex64 {
    let step = (b - a) / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        acc += gl_panel(f, a + p as f64 * step, a + (p + 1) as f64 * step);
    }
    acc
}

fn refine<F: Fn(usize) -> Complex64>(eval: F, start: usize, max: usize, what: &str) -> Result<Complex64> {
    let mut panels = start;
    let mut prev = eval(panels);
    loop {
        panels *= 2;
        if panels > max {
            return Err(Error::Quadrature(format!("{what}: no convergence at {max} panels")));
        }
        let cur = eval(panels);
        let scale = cur.norm().max(1e-300);
        if (cur - prev).norm() <= 1e-11 * scale {
            return Ok(cur);
        }
        prev = cur;
    }
}

/// Integrates `f(w) dw` along the infinite rotated line, truncating where the
/// caller-supplied Gaussian decay envelope `exp(-decay_scale * t^2)` falls
/// below 1e-18 of its peak.
///
/// With `fold` set, the integrand is assumed even in `w - basepoint` and only
/// the half-line `t >= 0` is sampled (doubled).
pub fn integrate_gaussian_line<F: Fn(Complex64) -> Complex64>(
    f: &F,
    angle: f64,
    basepoint: Complex64,
    decay_scale: f64,
    fold: bool,
) -> Result<Complex64> {
    if !(decay_scale > 0.0) {
        return Err(Error::Precondition("decay scale must be positive".into()));
    }
    let t_max = (18.0 * std::f64::consts::LN_10 / decay_scale).sqrt();
    let dir = Complex64::from_polar(1.0, angle);
    let param = |t: f64| f(basepoint + t * dir) * dir;

    // Tail sample: the integrand itself must have decayed at the truncation
    // point, otherwise the supplied envelope is wrong.
    let peak = param(0.0).norm().max(param(t_max / 8.0).norm()).max(param(t_max / 3.0).norm());
    let tail = param(t_max).norm().max(param(-t_max).norm());
    if peak > 0.0 && tail > 1e-12 * peak {
        return Err(Error::Precondition(format!(
            "decay envelope violated at truncation point (tail/peak = {:.3e})",
            tail / peak
        )));
    }

    let val = if fold {
        refine(|p| gl_composite(&param, 0.0, t_max, p), 8, 1 << 14, "gaussian line (folded)")?
    } else {
        refine(|p| gl_composite(&param, -t_max, t_max, p), 16, 1 << 15, "gaussian line")?
    };
    Ok(if fold { 2.0 * val } else { val })
}

/// Integrates `f(z) dz` along a rotated line with a semicircular detour of
/// radius `detour_radius` around `detour_center`, truncated by the same
/// Gaussian envelope convention as [`integrate_gaussian_line`] (envelope
/// centered on `detour_center`).
pub fn integrate_detour_line<F: Fn(Complex64) -> Complex64>(
    f: &F,
    angle: f64,
    detour_center: Complex64,
    detour_radius: f64,
    below: bool,
    decay_scale: f64,
) -> Result<Complex64> {
    if !(detour_radius > 0.0) || !(decay_scale > 0.0) {
        return Err(Error::Precondition("detour radius and decay scale must be positive".into()));
    }
    let t_max = (18.0 * std::f64::consts::LN_10 / decay_scale).sqrt().max(2.0 * detour_radius);
    let dir = Complex64::from_polar(1.0, angle);
    let line = |t: f64| f(detour_center + t * dir) * dir;

    // Arc from angle+pi to angle (entering from the t<0 side); passing below
    // the center runs through angle - pi/2, otherwise through angle + pi/2.
    let (th0, th1) = if below { (angle + PI, angle + 2.0 * PI) } else { (angle + PI, angle) };
    let arc = |th: f64| {
        let z = detour_center + Complex64::from_polar(detour_radius, th);
        f(z) * Complex64::from_polar(detour_radius, th + 0.5 * PI)
    };

    let eval = |panels: usize| {
        gl_composite(&line, -t_max, -detour_radius, panels)
            + gl_composite(&arc, th0, th1, panels.max(8))
            + gl_composite(&line, detour_radius, t_max, panels)
    };
    refine(eval, 8, 1 << 14, "detour line")
}

/// Laurent coefficient of degree `degree` of `f` around `center`:
/// `(1/2πi) ∮ f(w) / (w - center)^{degree+1} dw`
/// on the circle of given `radius`, by trapezoid node doubling (exponentially
/// convergent for integrands analytic in an annulus around the circle).
pub fn cauchy_coefficient<F: Fn(Complex64) -> Complex64>(
    f: &F,
    center: Complex64,
    radius: f64,
    degree: i32,
) -> Result<Complex64> {
    if !(radius > 0.0) {
        return Err(Error::Precondition("circle radius must be positive".into()));
    }
    // `scale` tracks the mean sampled magnitude times r^{-degree}: the
    // coefficient itself may be far smaller through cancellation, and the
    // attainable absolute accuracy is a few ulps of this scale.
    let eval = |n: usize| {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        for m in 0..n {
            let th = 2.0 * PI * m as f64 / n as f64;
            let w = Complex64::from_polar(radius, th);
            let term = f(center + w) * Complex64::from_polar(radius.powi(-degree), -degree as f64 * th);
            mag += term.norm();
            acc += term;
        }
        (acc / n as f64, mag / n as f64)
    };
    let mut n = 32;
    let (mut prev, _) = eval(n);
    loop {
        n *= 2;
        if n > 1 << 16 {
            return Err(Error::Quadrature(format!("cauchy coefficient: no convergence at {} nodes", 1 << 16)));
        }
        let (cur, scale) = eval(n);
        if (cur - prev).norm() <= (1e-12 * cur.norm()).max(1e-14 * scale).max(1e-300) {
            return Ok(cur);
        }
        prev = cur;
    }
}

/// Contour selection for the real-exponent variant: for `-2π/ab < c < 0` a
/// line rotated by `π/4 + δ` with `|c| tan(φ) < 2π/ab`; for `0 < c < 2π/ab`
/// the real axis.
pub fn rotated_line_for_real_c(c: f64, ab: i64) -> Result<Contour> {
    let limit = 2.0 * PI / ab as f64;
    if c == 0.0 || c.abs() >= limit {
        return Err(Error::Precondition(format!(
            "real c must satisfy 0 < |c| < 2π/(ab) = {limit:.6}, got {c}"
        )));
    }
    let angle = if c > 0.0 {
        0.0
    } else {
        let phi_max = (limit / c.abs()).atan();
        let phi = 0.5 * (PI / 4.0 + phi_max);
        debug_assert!(c.abs() * phi.tan() < limit);
        phi
    };
    // The parallel shift through c/2 crosses the imaginary axis below the
    // first pole of τ at π i/(ab); enumerate to confirm.
    let crossing = 0.5 * c.abs() * angle.tan();
    if crossing >= PI / ab as f64 {
        return Err(Error::Precondition("shifted contour would cross a pole of τ".into()));
    }
    Ok(Contour::RotatedLine { angle, basepoint: Complex64::new(0.0, 0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Closed form for the half-line Gaussian moment along the π/4 line:
    // ∫_{half C} w^{2k} exp(-N ab w²/(2πr i)) dw
    //   = sqrt(πr/(2abN)) (2πr i/(abN))^k e^{iπ/4} Γ(k+1/2).
    fn moment_closed_form(k: i32, n: f64, ab: f64, r: f64) -> Complex64 {
        let s = PI * r / (2.0 * ab * n);
        let base = Complex64::new(0.0, 2.0 * PI * r / (ab * n));
        let gamma_half = match k {
            0 => PI.sqrt(),
            1 => 0.5 * PI.sqrt(),
            _ => unreachable!(),
        };
        s.sqrt() * base.powi(k) * Complex64::from_polar(1.0, PI / 4.0) * gamma_half
    }

    #[test]
    fn gaussian_moment_k0_matches_closed_form() {
        let (n, ab, r) = (50.0, 6.0, 0.2);
        let decay = n * ab / (2.0 * PI * r);
        let f = move |w: Complex64| (-n * ab / (2.0 * PI * r) * w * w / Complex64::new(0.0, 1.0)).exp();
        let full = integrate_gaussian_line(&f, PI / 4.0, Complex64::new(0.0, 0.0), decay, true).unwrap();
        let expect = 2.0 * moment_closed_form(0, n, ab, r);
        assert!((full - expect).norm() < 1e-12 * expect.norm());
    }

    #[test]
    fn gaussian_moment_k1_matches_closed_form() {
        let (n, ab, r) = (50.0, 6.0, 0.2);
        let decay = n * ab / (2.0 * PI * r);
        let f = move |w: Complex64| {
            w * w * (-n * ab / (2.0 * PI * r) * w * w / Complex64::new(0.0, 1.0)).exp()
        };
        let full = integrate_gaussian_line(&f, PI / 4.0, Complex64::new(0.0, 0.0), decay, true).unwrap();
        let expect = 2.0 * moment_closed_form(1, n, ab, r);
        assert!((full - expect).norm() < 1e-12 * expect.norm());
    }

    #[test]
    fn folding_agrees_with_full_line_for_even_integrand() {
        let base = Complex64::new(0.3, 0.4);
        let f = move |w: Complex64| {
            let u = w - base;
            (u * u).cos() * (-4.0 * u * u).exp()
        };
        let a = integrate_gaussian_line(&f, 0.0, base, 4.0, true).unwrap();
        let b = integrate_gaussian_line(&f, 0.0, base, 4.0, false).unwrap();
        assert!((a - b).norm() < 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn envelope_violation_is_detected() {
        // Integrand that does not decay: constant 1.
        let f = |_w: Complex64| Complex64::new(1.0, 0.0);
        let err = integrate_gaussian_line(&f, 0.0, Complex64::new(0.0, 0.0), 1000.0, false);
        assert!(err.is_err());
    }

    #[test]
    fn cauchy_residue_of_inverse_w() {
        let f = |w: Complex64| 1.0 / w;
        let c = cauchy_coefficient(&f, Complex64::new(0.0, 0.0), 0.7, -1).unwrap();
        assert!((c - Complex64::new(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn cauchy_taylor_coefficient_of_exp() {
        let f = |w: Complex64| w.exp();
        let c = cauchy_coefficient(&f, Complex64::new(0.0, 0.0), 1.0, 3).unwrap();
        assert_relative_eq!(c.re, 1.0 / 6.0, max_relative = 1e-12);
        assert!(c.im.abs() < 1e-13);
    }

    #[test]
    fn cauchy_radius_independence() {
        let f = |w: Complex64| (w + Complex64::new(2.0, 0.0)).sin() / (w - Complex64::new(1.5, 1.5));
        let c1 = cauchy_coefficient(&f, Complex64::new(0.0, 0.0), 0.8, 4).unwrap();
        let c2 = cauchy_coefficient(&f, Complex64::new(0.0, 0.0), 0.4, 4).unwrap();
        assert!((c1 - c2).norm() < 1e-10);
    }

    #[test]
    fn detour_line_skips_simple_pole_consistently() {
        // ∫ e^{-z²} / z dz along the real line detouring below 0 equals
        // πi (half residue, pole passed on the concave side) since the
        // principal value vanishes by oddness.
        let f = |z: Complex64| (-z * z).exp() / z;
        let v = integrate_detour_line(&f, 0.0, Complex64::new(0.0, 0.0), 0.3, true, 1.0).unwrap();
        assert!((v - Complex64::new(0.0, PI)).norm() < 1e-10, "got {v}");
    }

    #[test]
    fn real_c_contour_selection() {
        match rotated_line_for_real_c(-0.5, 6).unwrap() {
            Contour::RotatedLine { angle, .. } => {
                assert!(angle > PI / 4.0 && angle < PI / 2.0);
                assert!(0.5 * angle.tan() < 2.0 * PI / 6.0);
            }
            _ => panic!("expected rotated line"),
        }
        match rotated_line_for_real_c(0.5, 6).unwrap() {
            Contour::RotatedLine { angle, .. } => assert_eq!(angle, 0.0),
            _ => panic!("expected line"),
        }
        assert!(rotated_line_for_real_c(-1.2, 6).is_err());
    }
}
