//! Knot algebra: figure-eight, torus knots, mirrors and connected sums,
//! together with Alexander polynomial evaluation and the logarithmic zero
//! sets that drive the polynomial-growth parameters.

use crate::{Error, Result};
use num_complex::Complex64;
use num_integer::Integer;

const PI: f64 = std::f64::consts::PI;

/// `ξ = log((3+√5)/2)`, the positive real logarithm of a zero of the
/// figure-eight Alexander polynomial.
pub fn xi() -> f64 {
    ((3.0 + 5f64.sqrt()) / 2.0).ln()
}

/// Algebraic knot description. Build torus knots through [`KnotExpr::torus`]
/// so the coprimality invariant is enforced.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum KnotExpr {
    FigureEight,
    Torus(i64, i64),
    Mirror(Box<KnotExpr>),
    ConnectedSum(Vec<KnotExpr>),
}

impl KnotExpr {
    pub fn fig8() -> Self {
        KnotExpr::FigureEight
    }

    pub fn torus(a: i64, b: i64) -> Result<Self> {
        if a < 2 || b < 2 {
            return Err(Error::InvalidKnot(format!("torus knot needs a, b >= 2, got ({a}, {b})")));
        }
        if a.gcd(&b) != 1 {
            return Err(Error::InvalidKnot(format!("torus knot needs gcd(a, b) = 1, got ({a}, {b})")));
        }
        Ok(KnotExpr::Torus(a, b))
    }

    pub fn mirror(self) -> Self {
        KnotExpr::Mirror(Box::new(self))
    }

    pub fn connected_sum(parts: Vec<KnotExpr>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidKnot("connected sum needs at least one part".into()));
        }
        if parts.len() == 1 {
            return Ok(parts.into_iter().next().unwrap());
        }
        Ok(KnotExpr::ConnectedSum(parts))
    }

    /// Checks the construction invariants of every node.
    pub fn validate(&self) -> Result<()> {
        match self {
            KnotExpr::FigureEight => Ok(()),
            KnotExpr::Torus(a, b) => {
                KnotExpr::torus(*a, *b)?;
                Ok(())
            }
            KnotExpr::Mirror(inner) => inner.validate(),
            KnotExpr::ConnectedSum(parts) => {
                if parts.is_empty() {
                    return Err(Error::InvalidKnot("empty connected sum".into()));
                }
                parts.iter().try_for_each(|p| p.validate())
            }
        }
    }

    /// Leaves of the connected-sum tree in a canonical (printer-sorted)
    /// order, with nested sums flattened and double mirrors cancelled.
    /// Every evaluation iterates in this order, which makes all outputs
    /// independent of how the sum was written.
    pub fn canonical_leaves(&self) -> Vec<KnotExpr> {
        fn walk(k: &KnotExpr, mirrored: bool, out: &mut Vec<KnotExpr>) {
            match k {
                KnotExpr::Mirror(inner) => walk(inner, !mirrored, out),
                KnotExpr::ConnectedSum(parts) => {
                    for p in parts {
                        walk(p, mirrored, out);
                    }
                }
                leaf => {
                    let leaf = leaf.clone();
                    out.push(if mirrored { leaf.mirror() } else { leaf });
                }
            }
        }
        let mut leaves = Vec::new();
        walk(self, false, &mut leaves);
        leaves.sort_by_key(|k| crate::parse::print(k));
        leaves
    }
}

/// A logarithm of a zero of the Alexander polynomial: `Δ(K; exp(z)) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogZero {
    pub z: Complex64,
    pub modulus: f64,
}

/// Quotient `sinh(p δ) / sinh(q δ)` stable through `δ = 0` (value `p/q`).
fn sinh_quotient(p: f64, q: f64, delta: Complex64) -> Complex64 {
    (p / q) * crate::special::sinhc(p * delta) / crate::special::sinhc(q * delta)
}

/// Evaluates `Δ(T(a,b); e^{2z})` with removable sinh-quotient singularities
/// handled by recentering on the nearest zero of the small denominator
/// factor (exact shift identities, then a `sinh(x)/x` series).
fn torus_alexander(a: i64, b: i64, z: Complex64) -> Complex64 {
    let (af, bf) = (a as f64, b as f64);
    let ab = af * bf;
    let da = (af * z).sinh();
    let db = (bf * z).sinh();
    let small_a = da.norm() < 1e-8;
    let small_b = db.norm() < 1e-8;
    if !small_a && !small_b {
        return (ab * z).sinh() * z.sinh() / (da * db);
    }
    if small_a && small_b {
        // z near nπi: every factor vanishes to first order there.
        let n = (z.im / PI).round();
        let delta = z - Complex64::new(0.0, n * PI);
        // Sign (-1)^{n(ab+1-a-b)} = (-1)^{n(a-1)(b-1)} = +1 (a, b coprime).
        return sinh_quotient(ab, af, delta) * sinh_quotient(1.0, bf, delta);
    }
    if small_a {
        // z near kπi/a; the numerator sinh(ab z) vanishes with sinh(a z).
        let k = (af * z.im / PI).round();
        let delta = z - Complex64::new(0.0, k * PI / af);
        let sign = if (k as i64 * (b - 1)).is_even() { 1.0 } else { -1.0 };
        sign * sinh_quotient(ab, af, delta) * z.sinh() / db
    } else {
        let k = (bf * z.im / PI).round();
        let delta = z - Complex64::new(0.0, k * PI / bf);
        let sign = if (k as i64 * (a - 1)).is_even() { 1.0 } else { -1.0 };
        sign * sinh_quotient(ab, bf, delta) * z.sinh() / da
    }
}

/// Evaluates `Δ(K; e^{2z})` in the symmetric normalization (`Δ(K; 1) = 1`,
/// `Δ` even in `z`). Multiplicative over connected sums, invariant under
/// mirrors.
pub fn alexander_eval(knot: &KnotExpr, z: Complex64) -> Result<Complex64> {
    knot.validate()?;
    Ok(alexander_eval_inner(knot, z))
}

fn alexander_eval_inner(knot: &KnotExpr, z: Complex64) -> Complex64 {
    match knot {
        // Δ(E; t) = -t + 3 - 1/t at t = e^{2z}.
        KnotExpr::FigureEight => Complex64::new(3.0, 0.0) - 2.0 * (2.0 * z).cosh(),
        KnotExpr::Torus(a, b) => torus_alexander(*a, *b, z),
        KnotExpr::Mirror(inner) => alexander_eval_inner(inner, z),
        KnotExpr::ConnectedSum(_) => {
            let mut acc = Complex64::new(1.0, 0.0);
            for leaf in knot.canonical_leaves() {
                acc *= alexander_eval_inner(&leaf, z);
            }
            acc
        }
    }
}

/// All elements of `Λ(K)` with modulus at most `window`, from the closed-form
/// index sets (no root finding). Connected sums take the union over parts;
/// mirrors leave the set unchanged.
pub fn log_zeros(knot: &KnotExpr, window: f64) -> Result<Vec<LogZero>> {
    knot.validate()?;
    if !(window > 0.0) {
        return Err(Error::Precondition("window must be positive".into()));
    }
    let mut zs: Vec<Complex64> = Vec::new();
    collect_zeros(knot, window, &mut zs);
    // Union semantics: drop duplicates contributed by repeated summands.
    zs.sort_by(|p, q| {
        p.norm()
            .partial_cmp(&q.norm())
            .unwrap()
            .then(p.arg().partial_cmp(&q.arg()).unwrap())
    });
    zs.dedup_by(|p, q| (*p - *q).norm() < 1e-12);
    Ok(zs
        .into_iter()
        .map(|z| LogZero { z, modulus: z.norm() })
        .collect())
}

fn collect_zeros(knot: &KnotExpr, window: f64, out: &mut Vec<Complex64>) {
    match knot {
        KnotExpr::FigureEight => {
            // Λ(E) = { ±ξ + 2nπi }.
            let xi = xi();
            let mut n = 0i64;
            loop {
                let im = 2.0 * n as f64 * PI;
                if (xi * xi + im * im).sqrt() > window && n > 0 {
                    break;
                }
                for s in [1.0, -1.0] {
                    for t in if n == 0 { vec![0.0] } else { vec![im, -im] } {
                        let z = Complex64::new(s * xi, t);
                        if z.norm() <= window + 1e-15 {
                            out.push(z);
                        }
                    }
                }
                n += 1;
            }
        }
        KnotExpr::Torus(a, b) => {
            // Λ(T(a,b)) = { 2kπi/(ab) : a∤k, b∤k }.
            let ab = (a * b) as f64;
            let kmax = (window * ab / (2.0 * PI)).floor() as i64 + 1;
            for k in 1..=kmax {
                if k % a == 0 || k % b == 0 {
                    continue;
                }
                let im = 2.0 * k as f64 * PI / ab;
                if im <= window + 1e-15 {
                    out.push(Complex64::new(0.0, im));
                    out.push(Complex64::new(0.0, -im));
                }
            }
        }
        KnotExpr::Mirror(inner) => collect_zeros(inner, window, out),
        KnotExpr::ConnectedSum(parts) => {
            for p in parts {
                collect_zeros(p, window, out);
            }
        }
    }
}

/// A minimal-modulus element of `Λ(K)`; ties broken toward positive
/// imaginary part, then positive real part.
pub fn min_log_zero(knot: &KnotExpr) -> Result<LogZero> {
    knot.validate()?;
    let mut window = 1.5;
    loop {
        let zs = log_zeros(knot, window)?;
        if let Some(min) = zs.first() {
            let m = min.modulus;
            let best = zs
                .iter()
                .filter(|z| z.modulus <= m + 1e-12)
                .max_by(|p, q| {
                    (p.z.im, p.z.re)
                        .partial_cmp(&(q.z.im, q.z.re))
                        .unwrap()
                })
                .unwrap();
            return Ok(*best);
        }
        window *= 2.0;
        if window > 1e6 {
            return Err(Error::NumericDomain("no Alexander zero found".into()));
        }
    }
}
