//! Torus-knot asymptotics: the meromorphic kernel `τ`, its Laurent data at
//! contour centers, the exact large-N expansions (regular center, pole
//! center, and the `r = 1` Kashaev–Tirkkonen point), and the regime
//! classifier for the `c`-plane.

use crate::knot::alexander_eval;
use crate::special::sinhc;
use crate::{quad, Error, KnotExpr, Result};
use num_complex::Complex64;
use num_rational::Rational64;

const PI: f64 = std::f64::consts::PI;

fn parity_sign(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

fn factorial(n: u64) -> f64 {
    (1..=n).fold(1.0, |acc, m| acc * m as f64)
}

/// `τ_{T(a,b)}(z) = 2 sinh(az) sinh(bz) / sinh(abz)`, evaluated stably at the
/// removable points `z = kπi/(ab)` with `a | k` or `b | k` (where numerator
/// and denominator zeros cancel). At genuine poles the value diverges; use
/// [`tau_eval`] for an error-carrying wrapper.
pub fn tau_torus(a: i64, b: i64, z: Complex64) -> Complex64 {
    let ab = a * b;
    let abf = ab as f64;
    let k = (z.im * abf / PI).round();
    let delta = z - Complex64::new(0.0, k * PI / abf);
    // Near a zero of sinh(abz), reduce the argument exactly to avoid the
    // ill-conditioned direct evaluation of sinh close to kπi.
    if (abf * delta).norm() < 0.5 && k.abs() < 9e15 {
        let k = k as i64;
        let (af, bf) = (a as f64, b as f64);
        let den_sign = parity_sign(k);
        if k % a == 0 && k % b == 0 {
            // gcd(a,b) = 1, so ab | k: full cancellation, τ has a zero here.
            let m = k / ab;
            let sign = parity_sign(m * (a + b) - k);
            return 2.0 * sign * delta * sinhc(af * delta) * sinhc(bf * delta)
                / sinhc(abf * delta);
        }
        if k % b == 0 {
            let sign = parity_sign(k / b) * den_sign;
            return (2.0 / bf) * sign * sinhc(af * delta) / sinhc(abf * delta)
                * (bf * z).sinh();
        }
        if k % a == 0 {
            let sign = parity_sign(k / a) * den_sign;
            return (2.0 / af) * sign * sinhc(bf * delta) / sinhc(abf * delta)
                * (af * z).sinh();
        }
        // Genuine pole nearby: keep the reduced denominator for accuracy.
        return 2.0 * (af * z).sinh() * (bf * z).sinh() / (den_sign * (abf * delta).sinh());
    }
    let (af, bf) = (a as f64, b as f64);
    2.0 * (af * z).sinh() * (bf * z).sinh() / (abf * z).sinh()
}

/// `τ_{T(a,b)}` with pole detection: errors with the nearest pole location
/// when `z` is within 1e-9 of `kπi/(ab)`, `a ∤ k`, `b ∤ k`.
pub fn tau_eval(a: i64, b: i64, z: Complex64) -> Result<Complex64> {
    KnotExpr::torus(a, b)?;
    let ab = (a * b) as f64;
    let k = (z.im * ab / PI).round();
    if k.abs() < 9e15 {
        let ki = k as i64;
        let pole = Complex64::new(0.0, k * PI / ab);
        if ki % a != 0 && ki % b != 0 && (z - pole).norm() < 1e-9 {
            return Err(Error::PoleHit { re: pole.re, im: pole.im });
        }
    }
    Ok(tau_torus(a, b, z))
}

/// `τ_K(z) = 2 sinh(z) / Δ(K; e^{2z})` for any supported knot; errors when
/// `z` sits on a zero of the Alexander polynomial.
pub fn tau_eval_knot(knot: &KnotExpr, z: Complex64) -> Result<Complex64> {
    let delta = alexander_eval(knot, z)?;
    if delta.norm() < 1e-9 {
        return Err(Error::PoleHit { re: z.re, im: z.im });
    }
    Ok(2.0 * z.sinh() / delta)
}

/// The expansion parameter `r` (from `c = 2πr i`), kept as an exact rational
/// whenever one was supplied so pole membership and `⌊abr⌋` are decided
/// exactly. A float within 1e-12 of `k/(ab)` is promoted to that rational,
/// with the promotion recorded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalParam {
    rational: Option<Rational64>,
    value: f64,
    promoted: bool,
}

impl RationalParam {
    pub fn from_rational(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Precondition("rational parameter with zero denominator".into()));
        }
        let rat = Rational64::new(p, q);
        Ok(Self {
            rational: Some(rat),
            value: *rat.numer() as f64 / *rat.denom() as f64,
            promoted: false,
        })
    }

    pub fn from_real(r: f64, a: i64, b: i64) -> Self {
        let ab = a * b;
        let k = (r * ab as f64).round();
        if k.abs() < 1e15 && (r - k / ab as f64).abs() < 1e-12 {
            let rat = Rational64::new(k as i64, ab);
            return Self {
                rational: Some(rat),
                value: *rat.numer() as f64 / *rat.denom() as f64,
                promoted: true,
            };
        }
        Self { rational: None, value: r, promoted: false }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn rational(&self) -> Option<Rational64> {
        self.rational
    }

    /// True when a float input was snapped to an exact `k/(ab)`.
    pub fn promoted(&self) -> bool {
        self.promoted
    }

    pub fn neg(&self) -> Self {
        Self { rational: self.rational.map(|r| -r), value: -self.value, promoted: self.promoted }
    }

    pub fn is_integer(&self) -> bool {
        match self.rational {
            Some(rat) => rat.is_integer(),
            None => (self.value - self.value.round()).abs() < 1e-12,
        }
    }

    /// `ab·r` as an exact integer, when it is one.
    pub fn abr_integer(&self, a: i64, b: i64) -> Option<i64> {
        match self.rational {
            Some(rat) => {
                let scaled = rat * Rational64::from_integer(a * b);
                scaled.is_integer().then(|| scaled.to_integer())
            }
            None => {
                let abr = self.value * (a * b) as f64;
                ((abr - abr.round()).abs() < 1e-12).then(|| abr.round() as i64)
            }
        }
    }

    /// Whether `πr i` is a pole of `τ_{T(a,b)}`: `abr = k` integer with
    /// `a ∤ k` and `b ∤ k`.
    pub fn is_pole(&self, a: i64, b: i64) -> bool {
        match self.abr_integer(a, b) {
            Some(k) => k % a != 0 && k % b != 0,
            None => false,
        }
    }

    pub fn floor_abr(&self, a: i64, b: i64) -> i64 {
        match self.rational {
            Some(rat) => (rat * Rational64::from_integer(a * b)).floor().to_integer(),
            None => (self.value * (a * b) as f64).floor() as i64,
        }
    }
}

/// Laurent data of `τ_{T(a,b)}` at a contour center `πr i`: `gammas[k]` is
/// `(2k)!` times the degree-2k coefficient of the even part, and `residue`
/// is present exactly when the center is a pole.
#[derive(Debug, Clone)]
pub struct LaurentData {
    pub center: Complex64,
    pub gammas: Vec<Complex64>,
    pub residue: Option<Complex64>,
}

/// Even part of `τ` around the center: `B(w) = ½(τ(z0+w) + τ(z0-w))`. In the
/// pole case the product-to-sum identity gives the cancellation-free closed
/// form `(-1)^k i [(a+b)sin((a+b)rπ) sinhc((a+b)w) - (a-b)sin((a-b)rπ)
/// sinhc((a-b)w)] / (ab sinhc(abw))` with `k = abr`.
fn b_even(a: i64, b: i64, r: &RationalParam) -> impl Fn(Complex64) -> Complex64 {
    let rv = r.value();
    let (af, bf) = (a as f64, b as f64);
    let abf = af * bf;
    let pole_k = if r.is_pole(a, b) { r.abr_integer(a, b) } else { None };
    let z0 = Complex64::new(0.0, PI * rv);
    move |w: Complex64| match pole_k {
        Some(k) => {
            let s1 = ((af + bf) * rv * PI).sin();
            let s2 = ((af - bf) * rv * PI).sin();
            let num = (af + bf) * s1 * sinhc((af + bf) * w) - (af - bf) * s2 * sinhc((af - bf) * w);
            parity_sign(k) * Complex64::new(0.0, 1.0) * num / (abf * sinhc(abf * w))
        }
        None => 0.5 * (tau_torus(a, b, z0 + w) + tau_torus(a, b, z0 - w)),
    }
}

/// Circle radius for Cauchy integrals at center `πr i`: capped at 0.4 of the
/// pole spacing `π/(ab)` and at half the distance to the nearest genuine
/// pole of the recentered kernel.
fn circle_radius(a: i64, b: i64, r: &RationalParam) -> f64 {
    let ab = a * b;
    let abf = ab as f64;
    let cap = 0.4 * PI / abf;
    if r.is_pole(a, b) {
        // The even part's nearest singularity sits at the pole spacing.
        return cap;
    }
    let rv = r.value();
    let lo = (abf * rv).floor() as i64 - ab - 1;
    let hi = (abf * rv).ceil() as i64 + ab + 1;
    let mut dist = f64::INFINITY;
    for k in lo..=hi {
        if k % a != 0 && k % b != 0 {
            dist = dist.min((k as f64 * PI / abf - PI * rv).abs());
        }
    }
    cap.min(0.5 * dist)
}

fn laurent_coeffs_with_radius(
    a: i64,
    b: i64,
    r: &RationalParam,
    kmax: usize,
    radius: f64,
) -> Result<LaurentData> {
    KnotExpr::torus(a, b)?;
    let rv = r.value();
    let center = Complex64::new(0.0, PI * rv);
    let even = b_even(a, b, r);
    let mut gammas = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let coeff = quad::cauchy_coefficient(&even, Complex64::new(0.0, 0.0), radius, 2 * k as i32)?;
        gammas.push(factorial(2 * k as u64) * coeff);
    }
    let residue = if r.is_pole(a, b) {
        let k = r.abr_integer(a, b).unwrap();
        // Recenter on the exact pole location for the residue circle.
        let pole = Complex64::new(0.0, k as f64 * PI / (a * b) as f64);
        let tau_local = |w: Complex64| tau_torus(a, b, pole + w);
        Some(quad::cauchy_coefficient(&tau_local, Complex64::new(0.0, 0.0), radius, -1)?)
    } else {
        None
    };
    Ok(LaurentData { center, gammas, residue })
}

/// Laurent coefficients `γ_{a,b,r}(k)`, `k = 0..=kmax`, by Cauchy circle
/// integrals of the even part of `τ` around `πr i`; pole centers also carry
/// the residue of `τ` computed by a separate circle integral.
pub fn laurent_coeffs(a: i64, b: i64, r: &RationalParam, kmax: usize) -> Result<LaurentData> {
    let radius = circle_radius(a, b, r);
    laurent_coeffs_with_radius(a, b, r, kmax, radius)
}

/// One residue-driven oscillatory contribution to an expansion.
#[derive(Debug, Clone, Copy)]
pub struct OscillatoryTerm {
    pub j: i64,
    /// The amplitude datum `R(T(a,b); j)` (weighted by `j²` at `r = 1`).
    pub amplitude: f64,
    /// The evaluated phase power of `CS(T(a,b); j)`.
    pub phase: Complex64,
    /// Full signed contribution to the total, prefactors included.
    pub contribution: Complex64,
}

/// A predicted `J_N` value decomposed into its smooth-series part, the
/// `√N`-growth constant term (pole centers only), and oscillatory residue
/// terms. `total` is exactly the sum of the parts.
#[derive(Debug, Clone)]
pub struct AsymptoticResult {
    pub total: Complex64,
    pub series_part: Complex64,
    pub constant_growth_part: Complex64,
    pub oscillatory_terms: Vec<OscillatoryTerm>,
    /// Magnitude of the first omitted series term (the k-series is treated
    /// as asymptotic; this is the truncation error estimate).
    pub truncation_estimate: f64,
}

impl AsymptoticResult {
    fn conj(&self) -> Self {
        AsymptoticResult {
            total: self.total.conj(),
            series_part: self.series_part.conj(),
            constant_growth_part: self.constant_growth_part.conj(),
            oscillatory_terms: self
                .oscillatory_terms
                .iter()
                .map(|t| OscillatoryTerm {
                    j: t.j,
                    amplitude: t.amplitude,
                    phase: t.phase.conj(),
                    contribution: t.contribution.conj(),
                })
                .collect(),
            truncation_estimate: self.truncation_estimate,
        }
    }
}

/// `R(T(a,b); j) = (4/ab) sin(jπ/a) sin(jπ/b)`.
pub fn residue_amplitude(a: i64, b: i64, j: i64) -> f64 {
    let jf = j as f64;
    4.0 / (a * b) as f64 * (jf * PI / a as f64).sin() * (jf * PI / b as f64).sin()
}

/// `exp(i π p / q)` with the angle reduced modulo 2π in integer arithmetic.
pub(crate) fn unit_phase_pi_ratio(p: i128, q: i128) -> Complex64 {
    debug_assert!(q > 0);
    let p_red = p.rem_euclid(2 * q);
    Complex64::from_polar(1.0, PI * p_red as f64 / q as f64)
}

/// `CS(T(a,b); j)^{-N/r} = exp(-N j² π i / (2 a b r))`, reduced exactly for
/// rational `r`.
fn cs_power(a: i64, b: i64, j: i64, n: u64, r: &RationalParam) -> Complex64 {
    match r.rational() {
        Some(rat) => {
            let (p, q) = (*rat.numer() as i128, *rat.denom() as i128);
            debug_assert!(p > 0);
            unit_phase_pi_ratio(
                -(n as i128) * (j as i128) * (j as i128) * q,
                2 * (a as i128) * (b as i128) * p,
            )
        }
        None => {
            let angle = -(n as f64) * (j as f64).powi(2) * PI / (2.0 * (a * b) as f64 * r.value());
            Complex64::from_polar(1.0, angle.rem_euclid(2.0 * PI))
        }
    }
}

/// `exp(-N a b r π i / 2)`, reduced exactly for rational `r`.
fn half_frame_phase(a: i64, b: i64, n: u64, r: &RationalParam) -> Complex64 {
    match r.rational() {
        Some(rat) => {
            let (p, q) = (*rat.numer() as i128, *rat.denom() as i128);
            unit_phase_pi_ratio(-(n as i128) * (a as i128) * (b as i128) * p, 2 * q)
        }
        None => {
            let angle = -(n as f64) * (a * b) as f64 * r.value() * PI / 2.0;
            Complex64::from_polar(1.0, angle.rem_euclid(2.0 * PI))
        }
    }
}

struct SeriesPieces {
    prefactor: Complex64,
    series_part: Complex64,
    truncation_estimate: f64,
}

/// Common prefactor and k-series of both expansions:
/// `e^{(ab - a/b - b/a) πr i/(2N)} / sin(πr)` times
/// `(1/2i) Σ γ(k)/k! (πr i/(2abN))^k`.
fn series_pieces(
    a: i64,
    b: i64,
    r: &RationalParam,
    n: u64,
    kmax: usize,
    data: &LaurentData,
) -> SeriesPieces {
    let rv = r.value();
    let (af, bf, nf) = (a as f64, b as f64, n as f64);
    let ab = af * bf;
    let prefactor = Complex64::new(0.0, (ab - af / bf - bf / af) * PI * rv / (2.0 * nf)).exp()
        / (PI * rv).sin();
    let step = Complex64::new(0.0, PI * rv / (2.0 * ab * nf));
    let mut power = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=kmax {
        sum += data.gammas[k] * power / factorial(k as u64);
        power *= step;
    }
    let series_part = prefactor * sum / Complex64::new(0.0, 2.0);
    let truncation_estimate = if data.gammas.len() > kmax + 1 {
        (prefactor * data.gammas[kmax + 1] * power / factorial(kmax as u64 + 1) / 2.0).norm()
    } else {
        f64::NAN
    };
    SeriesPieces { prefactor, series_part, truncation_estimate }
}

fn oscillatory_terms(
    a: i64,
    b: i64,
    r: &RationalParam,
    n: u64,
    jmax: i64,
    prefactor: Complex64,
) -> Vec<OscillatoryTerm> {
    let rv = r.value();
    let nf = n as f64;
    let osc_pref = ((a * b) as f64 * nf).sqrt() * half_frame_phase(a, b, n, r)
        / (2.0 * (2.0 * rv).sqrt() * Complex64::new(0.0, PI / 4.0).exp());
    (1..=jmax)
        .map(|j| {
            let sign = parity_sign(n as i64 * j + j + 1);
            let amplitude = residue_amplitude(a, b, j);
            let phase = cs_power(a, b, j, n, r);
            OscillatoryTerm {
                j,
                amplitude,
                phase,
                contribution: prefactor * osc_pref * sign * amplitude * phase,
            }
        })
        .collect()
}

fn assemble(
    pieces: SeriesPieces,
    constant_growth_part: Complex64,
    oscillatory_terms: Vec<OscillatoryTerm>,
) -> AsymptoticResult {
    let mut total = pieces.series_part + constant_growth_part;
    for t in &oscillatory_terms {
        total += t.contribution;
    }
    AsymptoticResult {
        total,
        series_part: pieces.series_part,
        constant_growth_part,
        oscillatory_terms,
        truncation_estimate: pieces.truncation_estimate,
    }
}

/// Large-N expansion of `J_N(T(a,b); e^{2πr i/N})` when the center `πr i` is
/// not a pole of `τ` and `r` is not an integer. Negative `r` is handled by
/// the conjugation symmetry.
pub fn expansion_off_pole(
    a: i64,
    b: i64,
    r: &RationalParam,
    n: u64,
    kmax: usize,
) -> Result<AsymptoticResult> {
    KnotExpr::torus(a, b)?;
    if r.value() < 0.0 {
        return Ok(expansion_off_pole(a, b, &r.neg(), n, kmax)?.conj());
    }
    if r.value() == 0.0 || r.is_integer() {
        return Err(Error::Precondition("expansion needs non-integer r > 0".into()));
    }
    if r.is_pole(a, b) {
        return Err(Error::Precondition(
            "center is a pole of τ; use the pole-center expansion".into(),
        ));
    }
    let data = laurent_coeffs(a, b, r, kmax + 1)?;
    let pieces = series_pieces(a, b, r, n, kmax, &data);
    let jmax = r.floor_abr(a, b);
    let osc = oscillatory_terms(a, b, r, n, jmax, pieces.prefactor);
    Ok(assemble(pieces, Complex64::new(0.0, 0.0), osc))
}

/// Large-N expansion when `πr i` is a pole of `τ` (`abr = k`, `a ∤ k`,
/// `b ∤ k`): the off-pole form plus the `√N` constant-growth term
/// `-(√N / (√(2abr) e^{πi/4})) (-1)^{abr} sin(arπ) sin(brπ)`, with the
/// residue sum shortened to `j ≤ abr - 1`.
pub fn expansion_at_pole(
    a: i64,
    b: i64,
    r: &RationalParam,
    n: u64,
    kmax: usize,
) -> Result<AsymptoticResult> {
    KnotExpr::torus(a, b)?;
    if r.value() < 0.0 {
        return Ok(expansion_at_pole(a, b, &r.neg(), n, kmax)?.conj());
    }
    if !r.is_pole(a, b) {
        return Err(Error::Precondition(
            "center is not a pole of τ; use the regular-center expansion".into(),
        ));
    }
    let k = r.abr_integer(a, b).unwrap();
    let rv = r.value();
    let (af, bf, nf) = (a as f64, b as f64, n as f64);
    let data = laurent_coeffs(a, b, r, kmax + 1)?;
    let pieces = series_pieces(a, b, r, n, kmax, &data);
    let constant = -pieces.prefactor * nf.sqrt()
        / ((2.0 * af * bf * rv).sqrt() * Complex64::new(0.0, PI / 4.0).exp())
        * parity_sign(k)
        * (af * rv * PI).sin()
        * (bf * rv * PI).sin();
    let osc = oscillatory_terms(a, b, r, n, k - 1, pieces.prefactor);
    Ok(assemble(pieces, constant, osc))
}

/// The `r = 1` (Kashaev point) expansion:
/// `J_N(T(a,b); e^{2πi/N}) = e^{(ab-a/b-b/a)πi/(2N)} { ¼ Σ η(k+1)/(k+1)!
/// (πi/(2abN))^k + N^{3/2} e^{πi/4} e^{-Nabπi/2}/(4√(2ab)) Σ_j (-1)^{(N-1)j}
/// j² R(j) CS(j)^{-N} }` with `η_{a,b}(k)` the 2k-th derivative of `zτ(z)`
/// at 0, obtained from Cauchy circle integrals.
pub fn kashaev_tirkkonen_r1(a: i64, b: i64, n: u64, kmax: usize) -> Result<AsymptoticResult> {
    KnotExpr::torus(a, b)?;
    let (af, bf, nf) = (a as f64, b as f64, n as f64);
    let ab = af * bf;
    let g = |z: Complex64| z * tau_torus(a, b, z);
    let radius = 0.4 * PI / ab;
    // η(k) for k = 1..=kmax+2 (one extra for the truncation estimate).
    let mut eta = vec![Complex64::new(0.0, 0.0)];
    for k in 1..=kmax + 2 {
        let coeff =
            quad::cauchy_coefficient(&g, Complex64::new(0.0, 0.0), radius, 2 * k as i32)?;
        eta.push(factorial(2 * k as u64) * coeff);
    }

    let prefactor = Complex64::new(0.0, (ab - af / bf - bf / af) * PI / (2.0 * nf)).exp();
    let step = Complex64::new(0.0, PI / (2.0 * ab * nf));
    let mut power = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=kmax {
        sum += eta[k + 1] * power / factorial(k as u64 + 1);
        power *= step;
    }
    let series_part = prefactor * sum / 4.0;
    let truncation_estimate =
        (prefactor * eta[kmax + 2] * power / factorial(kmax as u64 + 2) / 4.0).norm();

    // exp(-N ab π i / 2) reduced exactly.
    let frame = unit_phase_pi_ratio(-(n as i128) * (a as i128) * (b as i128), 2);
    let osc_pref =
        prefactor * nf.powf(1.5) * Complex64::new(0.0, PI / 4.0).exp() * frame
            / (4.0 * (2.0 * ab).sqrt());
    let osc: Vec<OscillatoryTerm> = (1..=(a * b - 1))
        .map(|j| {
            let sign = parity_sign((n as i64 - 1) * j);
            let amplitude = (j * j) as f64 * residue_amplitude(a, b, j);
            // CS(j)^{-N} = exp(-N j² π i / (2ab)).
            let phase = unit_phase_pi_ratio(
                -(n as i128) * (j as i128) * (j as i128),
                2 * (a as i128) * (b as i128),
            );
            OscillatoryTerm {
                j,
                amplitude,
                phase,
                contribution: osc_pref * sign * amplitude * phase,
            }
        })
        .collect();
    let mut total = series_part;
    for t in &osc {
        total += t.contribution;
    }
    Ok(AsymptoticResult {
        total,
        series_part,
        constant_growth_part: Complex64::new(0.0, 0.0),
        oscillatory_terms: osc,
        truncation_estimate,
    })
}

/// Large-N behavior class of `{J_N(K; e^{c/N})}` at a fixed `c`.
#[derive(Debug, Clone, PartialEq)]
pub enum Regime {
    /// `c = 0`: every value is exactly 1.
    DegenerateUnit,
    ConvergesToInvAlexander,
    PolynomialGrowth(Rational64),
    ExponentialGrowth(Complex64),
    Oscillates,
    /// `c` lies outside every region the implemented results cover.
    Unknown,
}

const CLASSIFY_TOL: f64 = 1e-9;

fn classify_torus(a: i64, b: i64, c: Complex64) -> Regime {
    let ab = (a * b) as f64;
    let limit = 2.0 * PI / ab;
    let scale = c.norm();
    let real = c.im.abs() <= CLASSIFY_TOL * scale;
    let imag = c.re.abs() <= CLASSIFY_TOL * scale;
    let modulus = c.norm();

    if imag {
        if (modulus - limit).abs() <= CLASSIFY_TOL {
            // c = ±2πi/(ab): the smallest log-zero of the Alexander polynomial.
            return Regime::PolynomialGrowth(Rational64::new(1, 2));
        }
        if modulus < limit {
            return Regime::ConvergesToInvAlexander;
        }
        let m = modulus / (2.0 * PI);
        if (m - m.round()).abs() <= CLASSIFY_TOL {
            if m.round() == 1.0 {
                // Kashaev point c = ±2πi.
                return Regime::PolynomialGrowth(Rational64::new(3, 2));
            }
            return Regime::Unknown;
        }
        return Regime::Oscillates;
    }
    if real && modulus < limit - CLASSIFY_TOL {
        return Regime::ConvergesToInvAlexander;
    }
    if (modulus - limit).abs() <= CLASSIFY_TOL {
        return Regime::Unknown;
    }
    if modulus > limit {
        if c.re > 0.0 {
            return Regime::ConvergesToInvAlexander;
        }
        let i = Complex64::new(0.0, 1.0);
        let rate = (1.0 - PI * i / (ab * c) - ab * c / (4.0 * PI * i)) * PI * i;
        // e^{N rate} is only sensitive to Im(rate) mod 2π at integer N;
        // canonicalize to (-π, π] so conjugate points get conjugate rates.
        let im = rate.im - 2.0 * PI * (rate.im / (2.0 * PI)).round();
        return Regime::ExponentialGrowth(Complex64::new(rate.re, im));
    }
    Regime::Unknown
}

fn classify_fig8(c: Complex64) -> Regime {
    let xi = crate::knot::xi();
    if c.im.abs() <= CLASSIFY_TOL && (c.re.abs() - xi).abs() <= CLASSIFY_TOL {
        return Regime::PolynomialGrowth(Rational64::new(2, 3));
    }
    Regime::Unknown
}

fn classify_leaf(leaf: &KnotExpr, c: Complex64) -> Regime {
    match leaf {
        KnotExpr::FigureEight => classify_fig8(c),
        KnotExpr::Torus(a, b) => classify_torus(*a, *b, c),
        KnotExpr::Mirror(inner) => classify_leaf(inner, -c),
        KnotExpr::ConnectedSum(_) => classify_regime(leaf, c),
    }
}

/// Classifies the large-N behavior of `J_N(K; e^{c/N})`. Connected sums
/// combine leaf regimes: polynomial exponents add, exponential rates add and
/// dominate, oscillation mixed with growth is not classified. Boundary
/// points not covered by the implemented results return `Unknown` rather
/// than a guess.
pub fn classify_regime(knot: &KnotExpr, c: Complex64) -> Regime {
    if c.norm() == 0.0 {
        return Regime::DegenerateUnit;
    }
    let leaves = knot.canonical_leaves();
    let mut exponent = Rational64::from_integer(0);
    let mut rate = Complex64::new(0.0, 0.0);
    let (mut n_poly, mut n_exp, mut n_osc) = (0usize, 0usize, 0usize);
    for leaf in &leaves {
        match classify_leaf(leaf, c) {
            Regime::Unknown => return Regime::Unknown,
            Regime::DegenerateUnit | Regime::ConvergesToInvAlexander => {}
            Regime::PolynomialGrowth(e) => {
                exponent += e;
                n_poly += 1;
            }
            Regime::ExponentialGrowth(r) => {
                rate += r;
                n_exp += 1;
            }
            Regime::Oscillates => n_osc += 1,
        }
    }
    if n_exp > 0 {
        // Oscillating or polynomial factors are subexponential.
        return Regime::ExponentialGrowth(rate);
    }
    if n_osc > 0 {
        if n_poly > 0 {
            // Oscillation times unbounded growth has no classified limit law.
            return Regime::Unknown;
        }
        return Regime::Oscillates;
    }
    if n_poly > 0 {
        return Regime::PolynomialGrowth(exponent);
    }
    Regime::ConvergesToInvAlexander
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::xi;
    use approx::assert_relative_eq;

    fn t23() -> KnotExpr {
        KnotExpr::torus(2, 3).unwrap()
    }

    fn ipi(x: f64) -> Complex64 {
        Complex64::new(0.0, PI * x)
    }

    #[test]
    fn tau_removable_zero_at_origin() {
        assert_eq!(tau_torus(2, 3, Complex64::new(0.0, 0.0)), Complex64::new(0.0, 0.0));
        // Leading behavior 2z near 0 (numerator order 2, denominator order 1).
        let z = Complex64::new(1e-8, 1e-8);
        assert!((tau_torus(2, 3, z) / (2.0 * z) - 1.0).norm() < 1e-16 + 1e-8);
    }

    #[test]
    fn tau_agrees_with_alexander_route() {
        let z = ipi(0.07);
        let via_alexander = tau_eval_knot(&t23(), z).unwrap();
        assert!((tau_torus(2, 3, z) - via_alexander).norm() < 1e-12);
        for &(a, b) in &[(2i64, 5i64), (3, 4), (3, 5)] {
            let z = Complex64::new(0.11, 0.23);
            let k = KnotExpr::torus(a, b).unwrap();
            assert!((tau_torus(a, b, z) - tau_eval_knot(&k, z).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn tau_pole_detection() {
        match tau_eval(2, 3, ipi(1.0 / 6.0)).unwrap_err() {
            Error::PoleHit { re, im } => {
                assert_eq!(re, 0.0);
                assert_relative_eq!(im, PI / 6.0, max_relative = 1e-12);
            }
            other => panic!("expected PoleHit, got {other:?}"),
        }
        assert!(tau_eval(2, 3, ipi(0.07)).is_ok());
    }

    #[test]
    fn tau_stable_at_removable_points() {
        // z = πi/2 is k = 3 for (2,3): removable (3 | k).
        let z0 = ipi(0.5);
        let direct_limit = tau_torus(2, 3, z0 + Complex64::new(1e-6, 0.0));
        let at_point = tau_torus(2, 3, z0);
        assert!((at_point - direct_limit).norm() < 1e-5);
        assert!(at_point.norm() > 0.1);
        // z = πi (k = ab): full cancellation leaves a simple zero of τ.
        assert_eq!(tau_torus(2, 3, ipi(1.0)), Complex64::new(0.0, 0.0));
        let w = tau_torus(2, 3, ipi(1.0) + Complex64::new(1e-7, 0.0));
        assert!(w.norm() < 1e-5 && w.norm() > 0.0);
    }

    #[test]
    fn rational_param_pole_flags() {
        let r = RationalParam::from_rational(1, 6).unwrap();
        assert!(r.is_pole(2, 3));
        assert_eq!(r.abr_integer(2, 3), Some(1));
        let r = RationalParam::from_rational(1, 2).unwrap(); // abr = 3, divisible by 3
        assert!(!r.is_pole(2, 3));
        let r = RationalParam::from_rational(1, 4).unwrap(); // abr = 3/2
        assert!(!r.is_pole(2, 3));
        assert_eq!(r.abr_integer(2, 3), None);
        assert_eq!(r.floor_abr(2, 3), 1);
        let promoted = RationalParam::from_real(1.0 / 6.0 + 1e-14, 2, 3);
        assert!(promoted.promoted());
        assert!(promoted.is_pole(2, 3));
        let plain = RationalParam::from_real(0.07, 2, 3);
        assert!(!plain.promoted());
        assert!(!plain.is_pole(2, 3));
    }

    #[test]
    fn gamma0_equals_tau_at_center() {
        let r = RationalParam::from_real(0.07, 2, 3);
        let data = laurent_coeffs(2, 3, &r, 2).unwrap();
        let tau0 = tau_torus(2, 3, ipi(0.07));
        assert!((data.gammas[0] - tau0).norm() < 1e-12);
        assert!(data.residue.is_none());
    }

    #[test]
    fn pole_residue_matches_closed_form() {
        let r = RationalParam::from_rational(1, 6).unwrap();
        let data = laurent_coeffs(2, 3, &r, 1).unwrap();
        // (-1)^{j+1} 2 sin(jπ/a) sin(jπ/b) / (ab) at j = 1.
        let expect = 2.0 * (PI / 2.0).sin() * (PI / 3.0).sin() / 6.0;
        let res = data.residue.unwrap();
        assert!((res - Complex64::new(expect, 0.0)).norm() < 1e-10);
        assert_relative_eq!(expect, 3f64.sqrt() / 6.0, max_relative = 1e-15);
    }

    #[test]
    fn residue_closed_form_all_small_poles() {
        for &(a, b) in &[(2i64, 3i64), (3, 4), (3, 5), (2, 5)] {
            let ab = a * b;
            for j in 1..=2 * ab {
                if j % a == 0 || j % b == 0 {
                    continue;
                }
                let r = RationalParam::from_rational(j, ab).unwrap();
                let data = laurent_coeffs(a, b, &r, 0).unwrap();
                let expect = parity_sign(j + 1) * 2.0 * (j as f64 * PI / a as f64).sin()
                    * (j as f64 * PI / b as f64).sin()
                    / ab as f64;
                let res = data.residue.unwrap();
                assert!(
                    (res - Complex64::new(expect, 0.0)).norm() < 1e-10,
                    "({a},{b}) j={j}: {res} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn odd_coefficients_vanish() {
        for r in [RationalParam::from_real(0.07, 2, 3), RationalParam::from_rational(1, 6).unwrap()]
        {
            let even = b_even(2, 3, &r);
            let radius = circle_radius(2, 3, &r);
            for deg in [1, 3, 5] {
                let c = quad::cauchy_coefficient(&even, Complex64::new(0.0, 0.0), radius, deg)
                    .unwrap();
                assert!(c.norm() < 1e-10, "odd degree {deg}: {c}");
            }
        }
    }

    #[test]
    fn gammas_radius_independent() {
        let r = RationalParam::from_real(0.07, 2, 3);
        let rho = circle_radius(2, 3, &r);
        let d1 = laurent_coeffs_with_radius(2, 3, &r, 4, rho).unwrap();
        let d2 = laurent_coeffs_with_radius(2, 3, &r, 4, rho / 2.0).unwrap();
        for k in 0..=4 {
            let scale = d1.gammas[k].norm().max(1.0);
            assert!((d1.gammas[k] - d2.gammas[k]).norm() < 1e-10 * scale, "k={k}");
        }
    }

    fn direct(a: i64, b: i64, r: f64, n: u64) -> Complex64 {
        // Closed-sum oracle with r recovered as an exact small rational, so
        // the comparison floor is not set by the float image of 2πr.
        let rat = (1..=1000i64)
            .find_map(|den| {
                let num = (r * den as f64).round();
                ((num / den as f64) == r).then(|| Rational64::new(num as i64, den))
            })
            .expect("test r must be exactly a small rational");
        crate::jones::jones_torus_sum_rational(n, a, b, rat).unwrap().value
    }

    #[test]
    fn off_pole_expansion_matches_direct_small_r() {
        let r = RationalParam::from_real(0.07, 2, 3);
        let pred = expansion_off_pole(2, 3, &r, 500, 8).unwrap();
        assert!(pred.oscillatory_terms.is_empty());
        let exact = direct(2, 3, 0.07, 500);
        assert!((pred.total - exact).norm() <= 1e-6 * exact.norm());
    }

    #[test]
    fn off_pole_expansion_matches_direct_with_oscillation() {
        let r = RationalParam::from_rational(1, 4).unwrap();
        let pred = expansion_off_pole(2, 3, &r, 500, 8).unwrap();
        assert_eq!(pred.oscillatory_terms.len(), 1);
        let exact = direct(2, 3, 0.25, 500);
        assert!(
            (pred.total - exact).norm() <= 1e-4 * exact.norm(),
            "pred {} vs exact {}",
            pred.total,
            exact
        );
    }

    #[test]
    fn off_pole_rejects_wrong_case() {
        let pole = RationalParam::from_rational(1, 6).unwrap();
        assert!(expansion_off_pole(2, 3, &pole, 100, 4).is_err());
        let nonpole = RationalParam::from_real(0.07, 2, 3);
        assert!(expansion_at_pole(2, 3, &nonpole, 100, 4).is_err());
        let integer = RationalParam::from_rational(2, 1).unwrap();
        assert!(expansion_off_pole(2, 3, &integer, 100, 4).is_err());
    }

    #[test]
    fn at_pole_expansion_matches_direct() {
        let r = RationalParam::from_rational(1, 6).unwrap();
        let pred = expansion_at_pole(2, 3, &r, 200, 8).unwrap();
        assert!(pred.oscillatory_terms.is_empty());
        assert!(pred.constant_growth_part.norm() > 0.0);
        let exact = direct(2, 3, 1.0 / 6.0, 200);
        assert!(
            (pred.total - exact).norm() <= 1e-3 * exact.norm(),
            "pred {} vs exact {}",
            pred.total,
            exact
        );
    }

    #[test]
    fn at_pole_expansion_r_five_sixths() {
        let r = RationalParam::from_rational(5, 6).unwrap();
        let pred = expansion_at_pole(2, 3, &r, 500, 8).unwrap();
        assert_eq!(pred.oscillatory_terms.len(), 4);
        let exact = direct(2, 3, 5.0 / 6.0, 500);
        assert!(
            (pred.total - exact).norm() <= 1e-2 * exact.norm(),
            "pred {} vs exact {}",
            pred.total,
            exact
        );
    }

    #[test]
    fn at_pole_sqrt_n_law() {
        // total/√N tends to e^{-πi/4} sin(π/2) sin(π/3) / (√2 sin(π/6)).
        let r = RationalParam::from_rational(1, 6).unwrap();
        let pred = expansion_at_pole(2, 3, &r, 10_000, 8).unwrap();
        let limit = Complex64::new(0.0, -PI / 4.0).exp() * (PI / 2.0).sin() * (PI / 3.0).sin()
            / (2f64.sqrt() * (PI / 6.0).sin());
        let ratio = pred.total / (100.0 * limit);
        assert!((ratio - 1.0).norm() < 0.02, "ratio {ratio}");
    }

    #[test]
    fn negative_r_by_conjugation() {
        let r = RationalParam::from_real(-0.07, 2, 3);
        let pred = expansion_off_pole(2, 3, &r, 500, 8).unwrap();
        let exact = direct(2, 3, -0.07, 500);
        assert!((pred.total - exact).norm() <= 1e-6 * exact.norm());
    }

    #[test]
    fn expansion_error_shrinks_like_asymptotic_series() {
        let r = RationalParam::from_rational(1, 4).unwrap();
        let mut errs = Vec::new();
        for &n in &[100u64, 200, 400, 800] {
            let pred = expansion_off_pole(2, 3, &r, n, 8).unwrap();
            let exact = direct(2, 3, 0.25, n);
            errs.push(((n as f64).ln(), ((pred.total - exact).norm() / exact.norm()).ln()));
        }
        let slope = (errs[3].1 - errs[0].1) / (errs[3].0 - errs[0].0);
        assert!(slope <= -6.0, "slope {slope}");
    }

    #[test]
    fn kashaev_tirkkonen_matches_direct() {
        let pred = kashaev_tirkkonen_r1(2, 3, 50, 8).unwrap();
        let exact = direct(2, 3, 1.0, 50);
        assert!(
            (pred.total - exact).norm() <= 1e-3 * exact.norm(),
            "pred {} vs exact {}",
            pred.total,
            exact
        );
    }

    #[test]
    fn eta_matches_shifted_odd_derivative() {
        // τ is odd, so η(k) = (zτ)^{(2k)}(0) = 2k τ^{(2k-1)}(0), and
        // τ(πi + w) = (-1)^{ab+a+b} τ(w) relates that to the shifted derivative:
        // η(k) = 2k (-1)^{ab+a+b} τ^{(2k-1)}(πi).
        let (a, b) = (2i64, 3i64);
        let g = |z: Complex64| z * tau_torus(a, b, z);
        let radius = 0.4 * PI / 6.0;
        let shifted = |w: Complex64| tau_torus(a, b, Complex64::new(0.0, PI) + w);
        let sign = parity_sign(a * b + a + b);
        for k in 1..=3u32 {
            let eta = factorial(2 * k as u64)
                * quad::cauchy_coefficient(&g, Complex64::new(0.0, 0.0), radius, 2 * k as i32)
                    .unwrap();
            let deriv = factorial(2 * k as u64 - 1)
                * quad::cauchy_coefficient(
                    &shifted,
                    Complex64::new(0.0, 0.0),
                    radius,
                    2 * k as i32 - 1,
                )
                .unwrap();
            assert!(
                (eta - 2.0 * k as f64 * sign * deriv).norm() < 1e-8 * eta.norm().max(1.0),
                "k={k}: {eta} vs {deriv}"
            );
        }
    }

    #[test]
    fn kashaev_tirkkonen_growth_rate() {
        // |J_N| at the Kashaev point grows like N^{3/2}.
        let lo = kashaev_tirkkonen_r1(2, 3, 500, 6).unwrap().total.norm();
        let hi = kashaev_tirkkonen_r1(2, 3, 4000, 6).unwrap().total.norm();
        let slope = (hi / lo).ln() / (4000f64 / 500.0).ln();
        assert!((slope - 1.5).abs() < 0.05, "slope {slope}");
    }

    #[test]
    fn classify_torus_regions() {
        let k = t23();
        assert_eq!(
            classify_regime(&k, ipi(2.0 / 6.0)),
            Regime::PolynomialGrowth(Rational64::new(1, 2))
        );
        assert_eq!(
            classify_regime(&k, ipi(-2.0 / 6.0)),
            Regime::PolynomialGrowth(Rational64::new(1, 2))
        );
        assert_eq!(classify_regime(&k, ipi(0.2)), Regime::ConvergesToInvAlexander);
        assert_eq!(classify_regime(&k, ipi(2.0 / 3.0)), Regime::Oscillates);
        assert_eq!(
            classify_regime(&k, ipi(2.0)),
            Regime::PolynomialGrowth(Rational64::new(3, 2))
        );
        assert_eq!(classify_regime(&k, Complex64::new(0.5, 0.0)), Regime::ConvergesToInvAlexander);
        assert_eq!(classify_regime(&k, Complex64::new(-0.5, 0.0)), Regime::ConvergesToInvAlexander);
        assert_eq!(classify_regime(&k, Complex64::new(2.0, 1.0)), Regime::ConvergesToInvAlexander);
        assert_eq!(classify_regime(&k, Complex64::new(0.0, 0.0)), Regime::DegenerateUnit);
        // Boundary |c| = 2π/6 off the imaginary axis is not covered.
        let boundary = Complex64::from_polar(2.0 * PI / 6.0, 0.3);
        assert_eq!(classify_regime(&k, boundary), Regime::Unknown);
        // c = 4πi is an integer multiple beyond the Kashaev point.
        assert_eq!(classify_regime(&k, ipi(4.0)), Regime::Unknown);
    }

    #[test]
    fn classify_exponential_rate() {
        let c = Complex64::new(-2.0, 0.0);
        match classify_regime(&t23(), c) {
            Regime::ExponentialGrowth(rate) => {
                let i = Complex64::new(0.0, 1.0);
                let expect = (1.0 - PI * i / (6.0 * c) - 6.0 * c / (4.0 * PI * i)) * PI * i;
                // Im is reported canonicalized into (-π, π].
                assert!((rate.re - expect.re).abs() < 1e-12);
                let dim = (rate.im - expect.im) / (2.0 * PI);
                assert!((dim - dim.round()).abs() < 1e-12);
                assert!(rate.im > -PI - 1e-12 && rate.im <= PI + 1e-12);
                // The sequence genuinely grows: positive real part.
                assert!(rate.re > 0.0);
            }
            other => panic!("expected exponential, got {other:?}"),
        }
    }

    #[test]
    fn classify_fig8_and_sums() {
        let e = KnotExpr::fig8();
        let c_xi = Complex64::new(xi(), 0.0);
        assert_eq!(classify_regime(&e, c_xi), Regime::PolynomialGrowth(Rational64::new(2, 3)));
        assert_eq!(
            classify_regime(&e, Complex64::new(-xi(), 0.0)),
            Regime::PolynomialGrowth(Rational64::new(2, 3))
        );
        assert_eq!(classify_regime(&e, Complex64::new(0.5, 0.0)), Regime::Unknown);

        let sum = KnotExpr::connected_sum(vec![t23(), e.clone()]).unwrap();
        assert_eq!(classify_regime(&sum, c_xi), Regime::PolynomialGrowth(Rational64::new(2, 3)));

        let sum2 =
            KnotExpr::connected_sum(vec![t23(), KnotExpr::torus(3, 4).unwrap()]).unwrap();
        assert_eq!(
            classify_regime(&sum2, ipi(2.0 / 12.0)),
            Regime::PolynomialGrowth(Rational64::new(1, 2))
        );

        // Double polynomial point: exponents add.
        let sum3 = KnotExpr::connected_sum(vec![t23(), t23()]).unwrap();
        assert_eq!(
            classify_regime(&sum3, ipi(2.0 / 6.0)),
            Regime::PolynomialGrowth(Rational64::new(1, 1))
        );

        // c = 2πi/3 is above both knots' thresholds: both oscillate.
        let mixed = KnotExpr::connected_sum(vec![t23(), KnotExpr::torus(2, 5).unwrap()]).unwrap();
        assert_eq!(classify_regime(&mixed, ipi(2.0 / 3.0)), Regime::Oscillates);
        // c = 2πi/6: polynomial point for T(2,3) but T(2,5) oscillates there
        // (2π/6 > 2π/10, non-integer multiple of 2π); the mix is unclassified.
        assert_eq!(classify_regime(&mixed, ipi(2.0 / 6.0)), Regime::Unknown);
    }

    #[test]
    fn classify_conjugation_invariance() {
        let k = t23();
        for c in [Complex64::new(-2.0, 0.3), ipi(0.4), ipi(2.0 / 3.0), Complex64::new(1.5, -0.7)] {
            let base = classify_regime(&k, c);
            let conj = classify_regime(&k, c.conj());
            match (base, conj) {
                (Regime::ExponentialGrowth(r1), Regime::ExponentialGrowth(r2)) => {
                    assert!((r1.conj() - r2).norm() < 1e-12)
                }
                (x, y) => assert_eq!(x, y),
            }
        }
    }

    #[test]
    fn mirror_classification_flips_c() {
        // The mirror at c behaves like the base knot at -c.
        let mirrored = t23().mirror();
        assert_eq!(
            classify_regime(&mirrored, Complex64::new(2.0, 0.0)),
            classify_regime(&t23(), Complex64::new(-2.0, 0.0))
        );
        assert!(matches!(
            classify_regime(&mirrored, Complex64::new(2.0, 0.0)),
            Regime::ExponentialGrowth(_)
        ));
        assert_eq!(
            classify_regime(&mirrored, Complex64::new(-0.5, 0.0)),
            Regime::ConvergesToInvAlexander
        );
    }
}
