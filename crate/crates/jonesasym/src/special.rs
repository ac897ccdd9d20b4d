//! Small special-function and numeric helpers shared across the crate.

use num_complex::Complex64;

/// Lanczos approximation of the Gamma function (g = 7, 9 terms).
///
/// Coefficients are the widely used GNU Scientific Library set; relative
/// accuracy on the positive real axis is close to machine precision. The
/// reflection-identity check `gamma(1/3) * gamma(2/3) = 2*pi/sqrt(3)` is
/// enforced in tests at 1e-13.
pub fn gamma(x: f64) -> f64 {
    const P: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    const PI: f64 = std::f64::consts::PI;
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = P[0];
    for (i, p) in P.iter().enumerate().skip(1) {
        acc += p / (x + i as f64);
    }
    let t = x + 7.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// `sinh(w)/w`, stable near `w = 0`.
pub fn sinhc(w: Complex64) -> Complex64 {
    if w.norm() < 1e-2 {
        let w2 = w * w;
        Complex64::new(1.0, 0.0) + w2 / 6.0 * (Complex64::new(1.0, 0.0) + w2 / 20.0 * (Complex64::new(1.0, 0.0) + w2 / 42.0))
    } else {
        w.sinh() / w
    }
}

/// Neumaier (improved Kahan) accumulator for one real component.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn add(&mut self, term: f64) {
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.comp += (self.sum - t) + term;
        } else {
            self.comp += (term - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated accumulator for long oscillatory complex sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanComplex {
    re: Kahan,
    im: Kahan,
}

impl KahanComplex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, term: Complex64) {
        self.re.add(term.re);
        self.im.add(term.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// A complex value stored as `mantissa * exp(log_scale)`, for quantities whose
/// magnitude can leave the double-precision exponent range.
#[derive(Debug, Clone, Copy)]
pub struct ScaledComplex {
    pub mantissa: Complex64,
    pub log_scale: f64,
}

impl ScaledComplex {
    pub fn zero() -> Self {
        Self { mantissa: Complex64::new(0.0, 0.0), log_scale: 0.0 }
    }

    pub fn from_value(v: Complex64) -> Self {
        Self { mantissa: v, log_scale: 0.0 }
    }

    /// `exp(w)` for complex `w` of arbitrary real part.
    pub fn from_exponent(w: Complex64) -> Self {
        Self { mantissa: Complex64::new(0.0, w.im).exp(), log_scale: w.re }
    }

    pub fn normalize(mut self) -> Self {
        let m = self.mantissa.norm();
        if m > 0.0 && (m > 1e100 || m < 1e-100) {
            self.log_scale += m.ln();
            self.mantissa /= m;
        }
        self
    }

    pub fn mul(self, other: Self) -> Self {
        Self {
            mantissa: self.mantissa * other.mantissa,
            log_scale: self.log_scale + other.log_scale,
        }
        .normalize()
    }

    pub fn add(self, other: Self) -> Self {
        // A zero mantissa carries no magnitude information: its log_scale
        // must not win the alignment (zero() would swallow tiny-log terms).
        if self.mantissa == Complex64::new(0.0, 0.0) {
            return other;
        }
        if other.mantissa == Complex64::new(0.0, 0.0) {
            return self;
        }
        let (hi, lo) = if self.log_scale >= other.log_scale { (self, other) } else { (other, self) };
        let shift = lo.log_scale - hi.log_scale;
        let m = if shift < -745.0 {
            hi.mantissa
        } else {
            hi.mantissa + lo.mantissa * shift.exp()
        };
        Self { mantissa: m, log_scale: hi.log_scale }.normalize()
    }

    /// Collapse to an ordinary complex number; may overflow/underflow.
    pub fn to_complex(self) -> Complex64 {
        self.mantissa * self.log_scale.exp()
    }

    /// Natural log of the modulus.
    pub fn ln_norm(self) -> f64 {
        self.mantissa.norm().ln() + self.log_scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_reflection_identity_at_one_third() {
        let lhs = gamma(1.0 / 3.0) * gamma(2.0 / 3.0);
        let rhs = 2.0 * std::f64::consts::PI / 3f64.sqrt();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
    }

    #[test]
    fn gamma_small_integers() {
        assert_relative_eq!(gamma(1.0), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(5.0), 24.0, max_relative = 1e-13);
        assert_relative_eq!(gamma(0.5), std::f64::consts::PI.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn sinhc_matches_direct_away_from_zero() {
        let w = Complex64::new(0.3, -0.7);
        assert!((sinhc(w) - w.sinh() / w).norm() < 1e-15);
    }

    #[test]
    fn sinhc_series_region_accuracy() {
        let w = Complex64::new(5e-3, 2e-3);
        let direct = w.sinh() / w;
        assert!((sinhc(w) - direct).norm() < 1e-15);
        assert_eq!(sinhc(Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn kahan_recovers_lost_low_bits() {
        let mut acc = KahanComplex::new();
        acc.add(Complex64::new(1e16, 0.0));
        for _ in 0..10 {
            acc.add(Complex64::new(1.0, 0.0));
        }
        acc.add(Complex64::new(-1e16, 0.0));
        assert_relative_eq!(acc.value().re, 10.0, max_relative = 1e-12);
    }

    #[test]
    fn scaled_complex_handles_huge_exponents() {
        let a = ScaledComplex::from_exponent(Complex64::new(5000.0, 1.0));
        let b = ScaledComplex::from_exponent(Complex64::new(4999.0, 2.0));
        let s = a.add(b);
        // exp(5000)(e^{i} + e^{-1} e^{2i})
        let expect = Complex64::new(0.0, 1.0).exp() + (-1.0f64).exp() * Complex64::new(0.0, 2.0).exp();
        assert_relative_eq!(s.ln_norm(), 5000.0 + expect.norm().ln(), max_relative = 1e-12);
    }
}
