//! Exact (non-asymptotic) evaluation of `J_N(K; exp(c/N))`.
//!
//! Three routes are implemented:
//! - the cyclotomic (Habiro) finite sum for the figure-eight knot,
//! - the Rosso–Jones/Morton closed finite sum for torus knots (0-framing),
//! - a contour-integral route for torus knots, used as an independent
//!   cross-oracle for the closed sum.
//!
//! Mirrors evaluate the base knot at `q^{-1}` (i.e. `c -> -c`) and connected
//! sums multiply leaf values in canonical order.

use crate::special::{KahanComplex, ScaledComplex};
use crate::torus::tau_torus;
use crate::{quad, Error, KnotExpr, Result};
use num_complex::Complex64;
use num_rational::Rational64;
use crate::torus::unit_phase_pi_ratio;

const PI: f64 = std::f64::consts::PI;

/// Natural-log magnitude beyond which products switch to log-domain
/// accumulation (doubles overflow near exp(709)).
const LOG_DOMAIN_THRESHOLD: f64 = 700.0;

/// A sampling point `(c, N)` with derived `q = exp(c/N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    pub c: Complex64,
    pub n: u64,
}

impl EvalPoint {
    pub fn new(c: Complex64, n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(format!("N must be at least 2, got {n}")));
        }
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::Precondition("c must be finite".into()));
        }
        Ok(Self { c, n })
    }
}

/// Which evaluator produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Method {
    HabiroSum,
    TorusClosedSum,
    TorusContour,
    /// Product of per-leaf evaluations (connected sums / mirrors).
    Composite,
}

/// An evaluated colored Jones value. `value * exp(log_scale)` is the actual
/// number; `log_scale` is zero whenever the value fits in double range.
#[derive(Debug, Clone, Copy)]
pub struct JonesValue {
    pub value: Complex64,
    pub log_scale: f64,
    pub method: Method,
    pub n: u64,
    pub c: Complex64,
    /// Set when overflow forced log-domain accumulation.
    pub log_domain: bool,
}

impl JonesValue {
    fn from_scaled(s: ScaledComplex, method: Method, n: u64, c: Complex64, log_domain: bool) -> Self {
        let s = s.normalize();
        if s.log_scale.abs() < LOG_DOMAIN_THRESHOLD {
            JonesValue { value: s.to_complex(), log_scale: 0.0, method, n, c, log_domain }
        } else {
            // The value is delivered in log form regardless of how it was
            // accumulated.
            JonesValue { value: s.mantissa, log_scale: s.log_scale, method, n, c, log_domain: true }
        }
    }

    pub fn scaled(&self) -> ScaledComplex {
        ScaledComplex { mantissa: self.value, log_scale: self.log_scale }
    }

    /// Natural log of the modulus.
    pub fn ln_norm(&self) -> f64 {
        self.value.norm().ln() + self.log_scale
    }
}

/// Habiro cyclotomic sum for the figure-eight knot:
/// `J_N(E; q) = Σ_{k=0}^{N-1} Π_{j=1}^{k} 2(cosh c - cosh(c j/N))`
/// after `q = exp(c/N)`; evaluated with a running product in O(N).
pub fn jones_fig8(point: &EvalPoint) -> Result<JonesValue> {
    let (c, n) = (point.c, point.n);
    if c.norm() == 0.0 {
        return Ok(JonesValue {
            value: Complex64::new(1.0, 0.0),
            log_scale: 0.0,
            method: Method::HabiroSum,
            n,
            c,
        log_domain: false,
        });
    }
    let cosh_c = c.cosh();
    let factor = |j: u64| 2.0 * (cosh_c - (c * (j as f64 / n as f64)).cosh());

    // Fast path: plain compensated accumulation, bailing out to the
    // log-domain path if any partial product leaves double range.
    let overflow_cap = LOG_DOMAIN_THRESHOLD.exp();
    let mut acc = KahanComplex::new();
    acc.add(Complex64::new(1.0, 0.0));
    let mut product = Complex64::new(1.0, 0.0);
    let mut overflowed = false;
    for j in 1..n {
        product *= factor(j);
        let m = product.norm();
        if !m.is_finite() || m > overflow_cap {
            overflowed = true;
            break;
        }
        acc.add(product);
    }
    if !overflowed {
        return Ok(JonesValue {
            value: acc.value(),
            log_scale: 0.0,
            method: Method::HabiroSum,
            n,
            c,
            log_domain: false,
        });
    }

    let mut sum = ScaledComplex::from_value(Complex64::new(1.0, 0.0));
    let mut product = ScaledComplex::from_value(Complex64::new(1.0, 0.0));
    for j in 1..n {
        product = product.mul(ScaledComplex::from_value(factor(j)));
        sum = sum.add(product);
    }
    Ok(JonesValue::from_scaled(sum, Method::HabiroSum, n, c, true))
}

// Exponents of the two q-powers in the Rosso-Jones summand for the index
// k = m - (N-1)/2: q^{ab k^2 + (a+b)k + 1/2} and q^{ab k^2 + (a-b)k - 1/2}.
fn rosso_jones_exponents(a: f64, b: f64, k: f64) -> (f64, f64) {
    let abk2 = a * b * k * k;
    (abk2 + (a + b) * k + 0.5, abk2 + (a - b) * k - 0.5)
}

// 2π split into a double-double constant for extended-precision reduction.
const TAU_HI: f64 = 6.283_185_307_179_586;
const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

/// `exp(i θ x)` with `θ` held as a double-double (`theta_hi + theta_lo`) and
/// the product reduced mod 2π before the trig call. For phases of magnitude
/// up to ~1e5 this keeps the phase error near one ulp of the reduced angle,
/// where a plain `f64` product would already have lost ~|θx| ulps.
fn unit_phase_dd(theta_hi: f64, theta_lo: f64, x: f64) -> Complex64 {
    let p_hi = theta_hi * x;
    let p_lo = theta_hi.mul_add(x, -p_hi) + theta_lo * x;
    let k = (p_hi / TAU_HI).round();
    let y = k.mul_add(-TAU_HI, p_hi) + (p_lo - k * TAU_LO);
    Complex64::from_polar(1.0, y)
}

/// Splits `num / den` into a double-double quotient.
fn div_dd(num: f64, den: f64) -> (f64, f64) {
    let hi = num / den;
    let lo = hi.mul_add(-den, num) / den;
    (hi, lo)
}

/// 0-framed normalized colored Jones of `T(a,b)` by the Rosso–Jones closed
/// finite sum (N terms):
///
/// `J_N = q^{ab(1-N^2)/4} / (q^{N/2} - q^{-N/2})
///        Σ_k q^{ab k^2} (q^{(a+b)k + 1/2} - q^{(a-b)k - 1/2})`
///
/// with `k` running over `-(N-1)/2, ..., (N-1)/2`. The chirality convention
/// is pinned by agreement with [`jones_torus_contour`]. When `q^{N/2}` hits
/// `±1` (i.e. `c` within 1e-10 of `2πmi`) the removable zero of the
/// denominator is resolved by l'Hôpital at the nearest such point.
///
/// Conditioning: for `Re c < 0` the terms cancel down to a fraction
/// `~exp(-|Re c| ab N / 4)` of their magnitude, so a fixed-precision
/// evaluation of the raw sum loses that many e-folds of accuracy. For purely
/// real `-2π/(ab) < c < 0` the stable contour route is used instead (and the
/// returned `method` says so); elsewhere in the left half-plane the raw sum
/// is the only route and its relative error grows with `N`.
pub fn jones_torus_sum(point: &EvalPoint, a: i64, b: i64) -> Result<JonesValue> {
    let c = point.c;
    if c.im == 0.0 && c.re < 0.0 && c.re.abs() < 2.0 * PI / (a * b) as f64 {
        KnotExpr::torus(a, b)?;
        return jones_torus_contour(point, a, b);
    }
    jones_torus_sum_raw(point, a, b)
}

/// Raw closed sum without the stability delegation; exposed for cross-checks
/// that deliberately probe the ill-conditioned window at small `N`.
pub(crate) fn jones_torus_sum_raw_for_tests(
    point: &EvalPoint,
    a: i64,
    b: i64,
) -> Result<JonesValue> {
    jones_torus_sum_raw(point, a, b)
}

fn jones_torus_sum_raw(point: &EvalPoint, a: i64, b: i64) -> Result<JonesValue> {
    KnotExpr::torus(a, b)?;
    let (c, n) = (point.c, point.n);
    let method = Method::TorusClosedSum;
    if c.norm() == 0.0 {
        return Ok(JonesValue {
            value: Complex64::new(1.0, 0.0),
            log_scale: 0.0,
            method,
            n,
            c,
            log_domain: false,
        });
    }
    let (af, bf, nf) = (a as f64, b as f64, n as f64);
    let step = c / nf;
    let half = (nf - 1.0) / 2.0;

    let denom = 2.0 * (c / 2.0).sinh();
    if denom.norm() < 1e-10 {
        // q^{N/2} = ±1: evaluate the removable limit at c0 = 2πmi.
        let m = (c.im / (2.0 * PI)).round();
        let (th_hi, th_lo) = div_dd(2.0 * PI * m, nf);
        let mut acc = KahanComplex::new();
        for idx in 0..n {
            let k = idx as f64 - half;
            let (x1, x2) = rosso_jones_exponents(af, bf, k);
            acc.add(
                (x1 / nf) * unit_phase_dd(th_hi, th_lo, x1)
                    - (x2 / nf) * unit_phase_dd(th_hi, th_lo, x2),
            );
        }
        let c0 = Complex64::new(0.0, 2.0 * PI * m);
        let dden = (c0 / 2.0).cosh(); // (-1)^m
        let prefactor = unit_phase_dd(th_hi, th_lo, af * bf * (1.0 - nf * nf) / 4.0);
        return Ok(JonesValue {
            value: prefactor * acc.value() / dden,
            log_scale: 0.0,
            method,
            n,
            c,
            log_domain: false,
        });
    }

    // Largest real part any term exponent can take, for log-domain shifting.
    let mut shift: f64 = f64::NEG_INFINITY;
    let mut probe = |x: f64| shift = shift.max(c.re * x / nf);
    for k in [-half, half, (-(af + bf) / (2.0 * af * bf)).clamp(-half, half)] {
        let (x1, x2) = rosso_jones_exponents(af, bf, k);
        probe(x1);
        probe(x2);
    }

    let log_domain = shift.abs() > 600.0;
    let shift = if log_domain { shift } else { 0.0 };
    let mut acc = KahanComplex::new();
    let x_pref = af * bf * (1.0 - nf * nf) / 4.0;
    let pref;
    if c.re == 0.0 {
        // Purely imaginary c: every q-power is a unit phase; reduce the
        // phases mod 2π in extended precision (they reach ~ab N/4 · |c|).
        let (th_hi, th_lo) = div_dd(c.im, nf);
        for idx in 0..n {
            let k = idx as f64 - half;
            let (x1, x2) = rosso_jones_exponents(af, bf, k);
            acc.add(unit_phase_dd(th_hi, th_lo, x1) - unit_phase_dd(th_hi, th_lo, x2));
        }
        pref = ScaledComplex::from_value(unit_phase_dd(th_hi, th_lo, x_pref));
    } else {
        for idx in 0..n {
            let k = idx as f64 - half;
            let (x1, x2) = rosso_jones_exponents(af, bf, k);
            acc.add((step * x1 - shift).exp() - (step * x2 - shift).exp());
        }
        pref = ScaledComplex::from_exponent(step * x_pref);
    }
    let total = pref
        .mul(ScaledComplex { mantissa: acc.value(), log_scale: shift })
        .mul(ScaledComplex::from_value(1.0 / denom));
    Ok(JonesValue::from_scaled(total, method, n, c, log_domain))
}

/// Same closed sum as [`jones_torus_sum`] at `c = 2π r i` with rational
/// `r = p/q` held exactly: all phase arguments are reduced modulo 2π in
/// integer arithmetic, so no term carries argument-reduction error even
/// though the raw exponents reach `~ab N²/4`. Used wherever the float image
/// of `2πr` would dominate the comparison floor against an expansion that
/// treats `r` exactly.
pub fn jones_torus_sum_rational(n: u64, a: i64, b: i64, r: Rational64) -> Result<JonesValue> {
    KnotExpr::torus(a, b)?;
    if n < 2 {
        return Err(Error::Precondition(format!("N must be at least 2, got {n}")));
    }
    let (p, q) = (*r.numer() as i128, *r.denom() as i128);
    let rf = *r.numer() as f64 / *r.denom() as f64;
    let c = Complex64::new(0.0, 2.0 * PI * rf);
    let method = Method::TorusClosedSum;
    if p == 0 {
        return Ok(JonesValue {
            value: Complex64::new(1.0, 0.0),
            log_scale: 0.0,
            method,
            n,
            c,
            log_domain: false,
        });
    }
    let nn = n as i128;
    let (ai, bi) = (a as i128, b as i128);
    let nf = n as f64;
    // Exponents are half-integral; X = 4x keeps everything in integers:
    // with 2k = 2 idx - N + 1,
    //   4 x1 = ab(2k)² + 2(a+b)(2k) + 2,  4 x2 = ab(2k)² + 2(a-b)(2k) - 2,
    // and q^x = exp(iπ · pX / (2qN)).
    let phase = |x4: i128| unit_phase_pi_ratio(p * x4, 2 * q * nn);
    let x4_pref = ai * bi * (1 - nn * nn);

    if p % q == 0 {
        // r integral: the denominator 2 sin(πr) vanishes; l'Hôpital limit.
        let m = p / q;
        let mut acc = KahanComplex::new();
        for idx in 0..nn {
            let two_k = 2 * idx - nn + 1;
            let base = ai * bi * two_k * two_k;
            let x1 = base + 2 * (ai + bi) * two_k + 2;
            let x2 = base + 2 * (ai - bi) * two_k - 2;
            acc.add(
                (x1 as f64 / (4.0 * nf)) * phase(x1) - (x2 as f64 / (4.0 * nf)) * phase(x2),
            );
        }
        let dden = if m % 2 == 0 { 1.0 } else { -1.0 }; // cosh(πmi)
        return Ok(JonesValue {
            value: phase(x4_pref) * acc.value() / dden,
            log_scale: 0.0,
            method,
            n,
            c,
            log_domain: false,
        });
    }

    let mut acc = KahanComplex::new();
    for idx in 0..nn {
        let two_k = 2 * idx - nn + 1;
        let base = ai * bi * two_k * two_k;
        let x1 = base + 2 * (ai + bi) * two_k + 2;
        let x2 = base + 2 * (ai - bi) * two_k - 2;
        acc.add(phase(x1) - phase(x2));
    }
    // 2 sinh(πri) = 2i sin(πp/q), with the argument reduced in integers.
    let p_red = p.rem_euclid(2 * q);
    let denom = Complex64::new(0.0, 2.0 * (PI * p_red as f64 / q as f64).sin());
    Ok(JonesValue {
        value: phase(x4_pref) * acc.value() / denom,
        log_scale: 0.0,
        method,
        n,
        c,
        log_domain: false,
    })
}

/// Parameters shared by the contour-route pieces.
struct ContourSetup {
    a: f64,
    b: f64,
    n: f64,
    /// c / (2πi); real for purely imaginary c.
    r: Complex64,
    c: Complex64,
}

impl ContourSetup {
    /// log of `Φ_{a,b,r}(N) = g sqrt(N) exp(-(ab(N²-1)+a/b+b/a) c/(4N))`,
    /// `g = sqrt(ab) / (2π sqrt(2r) e^{iπ/4} sinh(c/2))`.
    fn log_phi(&self) -> Complex64 {
        let ab = self.a * self.b;
        let log_g = 0.5 * ab.ln() - (2.0 * PI).ln() - 0.5 * (2.0 * self.r).ln()
            - Complex64::new(0.0, PI / 4.0)
            - (self.c / 2.0).sinh().ln();
        log_g + 0.5 * (self.n.ln())
            - (ab * (self.n * self.n - 1.0) + self.a / self.b + self.b / self.a) * self.c
                / (4.0 * self.n)
    }
}

/// Torus-knot evaluation through the contour-integral representation
/// `J_N = Φ ∫ τ(z) e^{N f(z)} dz`, computed through the shifted contour:
/// a Gaussian-weighted integral of the even part of `τ` around `c/2`, plus
/// explicit residue terms for the poles crossed by the shift. Supports
/// purely imaginary `c` with non-integer `r = c/(2πi)` (the pole-center case
/// takes a detour contour), and real `c` with `|c| < 2π/(ab)` on a rotated
/// line.
pub fn jones_torus_contour(point: &EvalPoint, a: i64, b: i64) -> Result<JonesValue> {
    KnotExpr::torus(a, b)?;
    let (c, n) = (point.c, point.n);
    let imag_scale = c.norm().max(1.0);
    if c.re.abs() < 1e-13 * imag_scale && c.im != 0.0 {
        if c.im < 0.0 {
            // Conjugation symmetry: J(conj q) = conj(J(q)).
            let mirrored = jones_torus_contour(&EvalPoint { c: -c, n }, a, b)?;
            return Ok(JonesValue {
                value: mirrored.value.conj(),
                c,
                ..mirrored
            });
        }
        jones_torus_contour_imag(Complex64::new(0.0, c.im), n, a, b)
    } else if c.im.abs() < 1e-13 && c.re != 0.0 {
        jones_torus_contour_real(c.re, n, a, b)
    } else {
        Err(Error::NumericDomain(
            "contour route supports purely imaginary c, or real c with |c| < 2π/(ab)".into(),
        ))
    }
}

fn residue_phase_sum(a: i64, b: i64, n: u64, r: f64, jmax: i64) -> Complex64 {
    let ab = (a * b) as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 1..=jmax {
        let jf = j as f64;
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        let amp = 2.0 * (jf * PI / a as f64).sin() * (jf * PI / b as f64).sin() / ab;
        let phase = Complex64::new(0.0, n as f64 * jf * PI * (1.0 - jf / (2.0 * ab * r))).exp();
        acc += sign * amp * phase;
    }
    2.0 * Complex64::new(0.0, PI) * acc
}

fn jones_torus_contour_imag(c: Complex64, n: u64, a: i64, b: i64) -> Result<JonesValue> {
    let r = c.im / (2.0 * PI);
    let ab = (a * b) as f64;
    let abr = ab * r;
    let k_near = abr.round();
    let near_integer_abr = (abr - k_near).abs() < 1e-9;
    if (r - r.round()).abs() < 1e-9 {
        return Err(Error::NumericDomain(format!(
            "contour route needs non-integer r = c/(2πi), got r = {r}"
        )));
    }
    let is_pole_center = near_integer_abr && {
        let k = k_near as i64;
        k >= 1 && k % a != 0 && k % b != 0
    };

    let setup = ContourSetup { a: a as f64, b: b as f64, n: n as f64, r: Complex64::new(r, 0.0), c };
    let nf = n as f64;
    let z0 = c / 2.0; // = πr i
    let decay = nf * ab / (2.0 * PI * r);
    let gauss_coef = Complex64::new(0.0, decay); // exponent i * decay * w²

    let (integral, jmax) = if is_pole_center {
        // Detour below the pole at the contour center; the extra residue
        // piece of the detour is what produces the sqrt(N) growth term.
        let f_abr = |z: Complex64| {
            let fz = ab * (z - z * z / c);
            tau_torus(a, b, z) * (nf * fz).exp()
        };
        let radius = (0.3 * PI / ab).min(0.5 / decay.sqrt());
        let i_det = quad::integrate_detour_line(&f_abr, PI / 4.0, z0, radius, true, decay)?;
        (i_det, k_near as i64 - 1)
    } else {
        let even_part = |w: Complex64| {
            0.5 * (tau_torus(a, b, z0 + w) + tau_torus(a, b, z0 - w)) * (gauss_coef * w * w).exp()
        };
        let i_b = quad::integrate_gaussian_line(&even_part, PI / 4.0, Complex64::new(0.0, 0.0), decay, true)?;
        let jmax = if near_integer_abr { k_near as i64 - 1 } else { abr.floor() as i64 };
        (Complex64::new(0.0, nf * abr * PI / 2.0).exp() * i_b, jmax)
    };

    let contour_total = integral + residue_phase_sum(a, b, n, r, jmax);
    let total = ScaledComplex::from_exponent(setup.log_phi())
        .mul(ScaledComplex::from_value(contour_total));
    Ok(JonesValue::from_scaled(total, Method::TorusContour, n, c, false))
}

fn jones_torus_contour_real(c: f64, n: u64, a: i64, b: i64) -> Result<JonesValue> {
    let ab = (a * b) as f64;
    let angle = match quad::rotated_line_for_real_c(c, a * b)? {
        quad::Contour::RotatedLine { angle, .. } => angle,
        _ => unreachable!(),
    };
    let nf = n as f64;
    let cc = Complex64::new(c, 0.0);
    let z0 = cc / 2.0;
    // exp(-(N ab / c) w²) along the rotated line; decay coefficient in t.
    let decay = nf * ab * (2.0 * angle).cos() / c;
    debug_assert!(decay > 0.0);
    let even_part = |w: Complex64| {
        0.5 * (tau_torus(a, b, z0 + w) + tau_torus(a, b, z0 - w)) * (-(nf * ab / c) * w * w).exp()
    };
    let i_b = quad::integrate_gaussian_line(&even_part, angle, Complex64::new(0.0, 0.0), decay, true)?;

    let setup = ContourSetup {
        a: a as f64,
        b: b as f64,
        n: nf,
        r: cc / Complex64::new(0.0, 2.0 * PI),
        c: cc,
    };
    // No poles between the contour and its shift for |c| < 2π/(ab).
    let total = ScaledComplex::from_exponent(setup.log_phi() + nf * ab * c / 4.0)
        .mul(ScaledComplex::from_value(i_b));
    Ok(JonesValue::from_scaled(total, Method::TorusContour, n, cc, false))
}

/// Evaluates any [`KnotExpr`]: product over connected-sum leaves in
/// canonical order, mirrors at `c -> -c`.
pub fn jones_eval(knot: &KnotExpr, point: &EvalPoint) -> Result<JonesValue> {
    knot.validate()?;
    let leaves = knot.canonical_leaves();
    if leaves.len() == 1 {
        return jones_leaf(&leaves[0], point);
    }
    let mut acc = ScaledComplex::from_value(Complex64::new(1.0, 0.0));
    let mut log_domain = false;
    for leaf in &leaves {
        let v = jones_leaf(leaf, point)?;
        log_domain |= v.log_domain;
        acc = acc.mul(v.scaled());
    }
    Ok(JonesValue::from_scaled(acc, Method::Composite, point.n, point.c, log_domain))
}

fn jones_leaf(leaf: &KnotExpr, point: &EvalPoint) -> Result<JonesValue> {
    match leaf {
        KnotExpr::FigureEight => jones_fig8(point),
        KnotExpr::Torus(a, b) => jones_torus_sum(point, *a, *b),
        KnotExpr::Mirror(inner) => {
            let flipped = EvalPoint { c: -point.c, n: point.n };
            let v = jones_leaf(inner, &flipped)?;
            Ok(JonesValue { c: point.c, ..v })
        }
        KnotExpr::ConnectedSum(_) => jones_eval(leaf, point),
    }
}
