//! Figure-eight asymptotics at the real growth point: the factor function
//! `f`, the truncation and Riemann-integral sandwich bounds behind the
//! `N^{2/3}` law, the Laplace-method leading term, and the ratio test
//! against the predicted constant `Γ(1/3)/(3ξ)^{2/3}`.

use crate::knot::xi;
use crate::special::{gamma, Kahan, ScaledComplex};
use crate::{Error, Result};
use num_complex::Complex64;

/// `f(x) = 3 - 2 cosh(ξ x)`: the Habiro factor of the figure-eight knot at
/// `c = ξ`, with `f(0) = 1`, `f(1) = 0`, strictly decreasing between.
pub fn f_fig8(x: f64) -> f64 {
    3.0 - 2.0 * (xi() * x).cosh()
}

/// Recursive adaptive Simpson integration with absolute tolerance.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let err = left + right - whole;
        if err.abs() <= 15.0 * tol {
            return Ok(left + right + err / 15.0);
        }
        if depth == 0 {
            return Err(Error::Quadrature(format!(
                "adaptive Simpson did not converge on [{a}, {b}] (residual {:.3e})",
                err.abs()
            )));
        }
        Ok(recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
    }
    if a == b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, a, b);
    recurse(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// `h(y) = ∫₀^y log f(x) dx` to absolute accuracy 1e-12.
fn h_fig8(y: f64) -> Result<f64> {
    adaptive_simpson(&|x| f_fig8(x).ln(), 0.0, y, 1e-12)
}

/// Outcome of the truncation bound: the full Habiro sum at `c = ξ` minus its
/// truncation at `⌊εN⌋` terms is positive yet below `N f(ε')^{(ε-ε')N-1}`.
/// Tail and bound are carried as natural logs since both underflow doubles
/// at large `N`.
#[derive(Debug, Clone, Copy)]
pub struct TailBoundReport {
    pub n: u64,
    pub eps: f64,
    pub eps_prime: f64,
    pub s_trunc: f64,
    /// log of `S_full - S_trunc`; `-inf` when the tail has no terms.
    pub ln_difference: f64,
    /// log of the bound `N f(ε')^{(ε-ε')N-1}`.
    pub ln_bound: f64,
    pub pass: bool,
}

pub fn tail_bound_check(n: u64, eps: f64, eps_prime: f64) -> Result<TailBoundReport> {
    if n < 2 || !(0.0 < eps_prime && eps_prime < eps && eps < 1.0) {
        return Err(Error::Precondition(format!(
            "need N ≥ 2 and 0 < ε' < ε < 1, got N={n}, ε={eps}, ε'={eps_prime}"
        )));
    }
    let nf = n as f64;
    let cut = (eps * nf).floor() as u64;

    let mut s_trunc = Kahan::default();
    s_trunc.add(1.0);
    let mut log_product = 0.0f64;
    let mut tail = ScaledComplex::zero();
    for k in 1..n {
        log_product += f_fig8(k as f64 / nf).ln();
        if k <= cut {
            s_trunc.add(log_product.exp());
        } else {
            tail = tail.add(ScaledComplex::from_exponent(Complex64::new(log_product, 0.0)));
        }
    }
    let ln_difference = tail.ln_norm();
    let ln_bound = nf.ln() + ((eps - eps_prime) * nf - 1.0) * f_fig8(eps_prime).ln();
    // Degenerate grid corner ⌊εN⌋ = N-1: the tail is empty and the strict
    // lower bound is vacuous; only the upper bound is checked.
    let pass = if cut >= n - 1 {
        ln_bound.is_finite()
    } else {
        ln_difference.is_finite() && ln_difference < ln_bound
    };
    Ok(TailBoundReport { n, eps, eps_prime, s_trunc: s_trunc.value(), ln_difference, ln_bound, pass })
}

/// Outcome of the Riemann sandwich: with `I = ∫₀^ε exp(N h(y)) dy`,
/// `f(ε)·I < S_trunc/N < I + 1/N`.
#[derive(Debug, Clone, Copy)]
pub struct RiemannReport {
    pub n: u64,
    pub eps: f64,
    pub integral: f64,
    /// `S_trunc / N`.
    pub scaled_sum: f64,
    pub lower: f64,
    pub upper: f64,
    pub pass: bool,
}

pub fn riemann_sandwich(n: u64, eps: f64) -> Result<RiemannReport> {
    if n < 2 || !(0.0 < eps && eps < 1.0) {
        return Err(Error::Precondition(format!("need N ≥ 2 and 0 < ε < 1, got N={n}, ε={eps}")));
    }
    let nf = n as f64;
    let integrand = |y: f64| (nf * h_fig8(y).expect("inner quadrature on a smooth integrand")).exp();
    // Coarse pass to set the outer absolute tolerance from the scale.
    let coarse: f64 = (0..64).map(|i| integrand((i as f64 + 0.5) * eps / 64.0) * eps / 64.0).sum();
    let integral = adaptive_simpson(&integrand, 0.0, eps, (1e-10 * coarse).max(1e-300))?;

    let cut = (eps * nf).floor() as u64;
    let mut s_trunc = Kahan::default();
    s_trunc.add(1.0);
    let mut product = 1.0f64;
    for k in 1..=cut.min(n - 1) {
        product *= f_fig8(k as f64 / nf);
        s_trunc.add(product);
    }
    let scaled_sum = s_trunc.value() / nf;
    let lower = f_fig8(eps) * integral;
    let upper = integral + 1.0 / nf;
    let pass = lower < scaled_sum && scaled_sum < upper;
    Ok(RiemannReport { n, eps, integral, scaled_sum, lower, upper, pass })
}

/// A Laplace-method integral `∫_α^β g(t) e^{N h(t)} dt` whose phase has a
/// degenerate maximum at the left endpoint: `h'(α) = h''(α) = 0` with
/// negative third derivative `h3`.
pub struct LaplaceProblem {
    pub h: Box<dyn Fn(f64) -> f64 + Sync>,
    pub g: Box<dyn Fn(f64) -> Complex64 + Sync>,
    pub alpha: f64,
    pub beta: f64,
    pub h3: f64,
}

impl LaplaceProblem {
    /// Numerical validation of the endpoint degeneracy and monotone decay.
    pub fn validate(&self) -> Result<()> {
        if !(self.h3 < 0.0) {
            return Err(Error::Precondition(format!("h3 must be negative, got {}", self.h3)));
        }
        if !(self.beta > self.alpha) {
            return Err(Error::Precondition("need β > α".into()));
        }
        let h = &self.h;
        let s = 1e-4 * (self.beta - self.alpha).min(1.0);
        let (h0, h1, h2, h3v) =
            (h(self.alpha), h(self.alpha + s), h(self.alpha + 2.0 * s), h(self.alpha + 3.0 * s));
        let d1 = (-3.0 * h0 + 4.0 * h1 - h2) / (2.0 * s);
        let d2 = (2.0 * h0 - 5.0 * h1 + 4.0 * h2 - h3v) / (s * s);
        if d1.abs() > 1e-6 || d2.abs() > 1e-3 {
            return Err(Error::Precondition(format!(
                "h'(α) = {d1:.3e}, h''(α) = {d2:.3e}: endpoint is not a degenerate maximum"
            )));
        }
        for i in 1..=16 {
            let t = self.alpha + i as f64 / 16.0 * (self.beta - self.alpha);
            let d = (h(t + s) - h(t - s)) / (2.0 * s);
            if d >= 0.0 {
                return Err(Error::Precondition(format!("h is not decreasing at t = {t}")));
            }
        }
        Ok(())
    }

    /// The figure-eight instance: `h(y) = ∫₀^y log f(x) dx`, `g ≡ 1`,
    /// `α = 0`, `β = ε`, `h'''(0) = -2ξ²`.
    pub fn fig8(eps: f64) -> Result<Self> {
        if !(0.0 < eps && eps < 1.0) {
            return Err(Error::Precondition(format!("need 0 < ε < 1, got {eps}")));
        }
        Ok(LaplaceProblem {
            h: Box::new(|y| h_fig8(y).expect("inner quadrature on a smooth integrand")),
            g: Box::new(|_| Complex64::new(1.0, 0.0)),
            alpha: 0.0,
            beta: eps,
            h3: -2.0 * xi() * xi(),
        })
    }
}

/// Leading Laplace term for a degenerate (cubic) endpoint maximum:
/// `g(α) Γ(1/3) (-2/(9 h3 N))^{1/3} e^{N h(α)}`.
pub fn laplace_leading(p: &LaplaceProblem, n: u64) -> Result<Complex64> {
    p.validate()?;
    let nf = n as f64;
    let width = (-2.0 / (9.0 * p.h3 * nf)).cbrt();
    Ok((p.g)(p.alpha) * gamma(1.0 / 3.0) * width * (nf * (p.h)(p.alpha)).exp())
}

/// Direct evaluation of the Laplace integral, for ratio tests against the
/// leading term.
pub fn laplace_integral(p: &LaplaceProblem, n: u64) -> Result<Complex64> {
    p.validate()?;
    let nf = n as f64;
    let re = adaptive_simpson(&|t| (p.g)(t).re * (nf * (p.h)(t)).exp(), p.alpha, p.beta, 1e-13)?;
    let im = adaptive_simpson(&|t| (p.g)(t).im * (nf * (p.h)(t)).exp(), p.alpha, p.beta, 1e-13)?;
    Ok(Complex64::new(re, im))
}

/// `J_N(E; e^{ξ/N})` divided by the predicted leading law
/// `Γ(1/3)/(3ξ)^{2/3} · N^{2/3}`; tends to 1.
pub fn thm1_ratio(n: u64) -> Result<f64> {
    let point = crate::jones::EvalPoint::new(Complex64::new(xi(), 0.0), n)?;
    let value = crate::jones::jones_fig8(&point)?;
    let prediction = gamma(1.0 / 3.0) / (3.0 * xi()).powf(2.0 / 3.0) * (n as f64).powf(2.0 / 3.0);
    Ok(value.value.re * value.log_scale.exp() / prediction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn f_endpoint_values() {
        assert!((f_fig8(0.0) - 1.0).abs() < 1e-12);
        assert!(f_fig8(1.0).abs() < 1e-12);
        assert_relative_eq!(f_fig8(0.5), 3.0 - 2.0 * (xi() / 2.0).cosh(), max_relative = 1e-15);
        assert_relative_eq!(f_fig8(0.5), 0.76393, max_relative = 1e-4);
    }

    #[test]
    fn f_strictly_decreasing_on_unit_interval() {
        let mut prev = f_fig8(0.0);
        for i in 1..=1000 {
            let v = f_fig8(i as f64 / 1000.0);
            assert!(v < prev, "not decreasing at {i}");
            assert!(v >= 0.0 && v <= 1.0);
            prev = v;
        }
    }

    #[test]
    fn simpson_exactness_and_accuracy() {
        let quartic = adaptive_simpson(&|x| x * x * x * x, 0.0, 1.0, 1e-12).unwrap();
        assert!((quartic - 0.2).abs() < 1e-12);
        let sine = adaptive_simpson(&f64::sin, 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!((sine - 2.0).abs() < 1e-11);
    }

    #[test]
    fn tail_bound_small_cases() {
        assert!(tail_bound_check(100, 0.5, 0.25).unwrap().pass);
        assert!(tail_bound_check(10, 0.9, 0.1).unwrap().pass);
    }

    #[test]
    fn tail_bound_large_n_is_tiny() {
        let rep = tail_bound_check(10_000, 0.3, 0.2).unwrap();
        assert!(rep.pass);
        // Both sides are far below double-precision visibility of the sum.
        assert!(rep.ln_bound < -25.0);
        assert!(rep.ln_difference < rep.ln_bound);
    }

    #[test]
    fn tail_bound_rejects_bad_arguments() {
        assert!(tail_bound_check(100, 0.25, 0.5).is_err());
        assert!(tail_bound_check(1, 0.5, 0.25).is_err());
        assert!(tail_bound_check(100, 1.2, 0.1).is_err());
    }

    #[test]
    fn riemann_sandwich_cases() {
        for &(n, eps) in &[(50u64, 0.5), (500, 0.25), (2000, 0.1)] {
            let rep = riemann_sandwich(n, eps).unwrap();
            assert!(rep.pass, "sandwich failed at N={n}, ε={eps}: {rep:?}");
            assert!(rep.lower < rep.scaled_sum && rep.scaled_sum < rep.upper);
        }
    }

    #[test]
    fn laplace_problem_fig8_validates() {
        let p = LaplaceProblem::fig8(0.5).unwrap();
        p.validate().unwrap();
        assert_relative_eq!(p.h3, -2.0 * xi() * xi(), max_relative = 1e-15);
    }

    #[test]
    fn laplace_validation_rejects_bad_problems() {
        let bad = LaplaceProblem {
            h: Box::new(|t| -t), // h'(α) = -1 ≠ 0
            g: Box::new(|_| Complex64::new(1.0, 0.0)),
            alpha: 0.0,
            beta: 1.0,
            h3: -1.0,
        };
        assert!(bad.validate().is_err());
        let positive_h3 = LaplaceProblem {
            h: Box::new(|t| -t * t * t),
            g: Box::new(|_| Complex64::new(1.0, 0.0)),
            alpha: 0.0,
            beta: 1.0,
            h3: 6.0,
        };
        assert!(positive_h3.validate().is_err());
    }

    #[test]
    fn laplace_leading_reproduces_fig8_constant() {
        let p = LaplaceProblem::fig8(0.5).unwrap();
        let lead = laplace_leading(&p, 1000).unwrap();
        let expect = gamma(1.0 / 3.0) / (3.0 * xi()).powf(2.0 / 3.0) * 1000f64.powf(-1.0 / 3.0);
        assert_relative_eq!(lead.re, expect, max_relative = 1e-12);
        assert!(lead.im.abs() < 1e-15);
        assert_relative_eq!(expect, 0.13209, max_relative = 1e-3);
    }

    #[test]
    fn laplace_ratio_near_one() {
        for &eps in &[0.2, 0.5, 0.9] {
            let p = LaplaceProblem::fig8(eps).unwrap();
            let integral = laplace_integral(&p, 10_000).unwrap();
            let lead = laplace_leading(&p, 10_000).unwrap();
            let ratio = (integral / lead).re;
            assert!((0.9..=1.1).contains(&ratio), "ratio {ratio} at ε={eps}");
        }
    }

    #[test]
    fn thm1_ratio_behaviour() {
        let r2 = thm1_ratio(2).unwrap();
        assert!(r2.is_finite() && r2 > 0.0);
        let errs: Vec<f64> =
            [1000u64, 10_000].iter().map(|&n| (thm1_ratio(n).unwrap() - 1.0).abs()).collect();
        assert!(errs[1] < errs[0]);
        assert!(errs[1] < 0.1);
    }
}
