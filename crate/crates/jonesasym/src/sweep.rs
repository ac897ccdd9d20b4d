//! Concurrent evaluation sweeps: `J_N` over an N-range at fixed `c`, and
//! regime classification over a rectangular `c`-grid. Cells are evaluated in
//! parallel but results are always assembled in input order, so output is
//! deterministic regardless of scheduling. `JONESASYM_THREADS` caps the
//! worker count (0 or unset = automatic).

use crate::jones::{jones_eval, EvalPoint};
use crate::knot::{alexander_eval, xi};
use crate::special::gamma;
use crate::torus::{classify_regime, Regime};
use crate::{KnotExpr, Result};
use num_complex::Complex64;
use rayon::prelude::*;

const PI: f64 = std::f64::consts::PI;

fn thread_cap() -> usize {
    std::env::var("JONESASYM_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0)
}

/// Runs `f` over `0..len` on a rayon pool honoring `JONESASYM_THREADS`,
/// returning results in index order.
fn run_indexed<T, F>(len: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_cap())
        .build()
        .map_err(|e| crate::Error::Precondition(format!("thread pool: {e}")))?;
    pool.install(|| (0..len).into_par_iter().map(&f).collect())
}

/// One sweep output row.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub n: u64,
    pub value: Complex64,
    /// Natural-log offset when the value left double range (else 0).
    pub log_scale: f64,
    /// `|J_N / prediction|` when a leading-order prediction exists at this c.
    pub ratio_to_prediction: Option<f64>,
}

/// Leading-order prediction for `J_N(K; e^{c/N})` where every connected-sum
/// leaf has one: convergent leaves contribute `1/Δ`, the figure-eight at
/// `±ξ` contributes `Γ(1/3)/(3ξ)^{2/3} N^{2/3}`, and a torus knot at its
/// smallest log-zero `±2πi/(ab)` contributes the `√N` law.
pub fn predicted_value(knot: &KnotExpr, c: Complex64, n: u64) -> Option<Complex64> {
    let nf = n as f64;
    let mut product = Complex64::new(1.0, 0.0);
    for leaf in knot.canonical_leaves() {
        product *= predicted_leaf(&leaf, c, nf)?;
    }
    Some(product)
}

fn predicted_leaf(leaf: &KnotExpr, c: Complex64, nf: f64) -> Option<Complex64> {
    match leaf {
        KnotExpr::Mirror(inner) => predicted_leaf(inner, -c, nf),
        KnotExpr::ConnectedSum(_) => None, // leaves are already flattened
        KnotExpr::FigureEight => {
            if c.im.abs() <= 1e-9 && (c.re.abs() - xi()).abs() <= 1e-9 {
                let constant = gamma(1.0 / 3.0) / (3.0 * xi()).powf(2.0 / 3.0);
                return Some(Complex64::new(constant * nf.powf(2.0 / 3.0), 0.0));
            }
            None
        }
        KnotExpr::Torus(a, b) => {
            let ab = (a * b) as f64;
            if c.re.abs() <= 1e-9 && (c.im.abs() - 2.0 * PI / ab).abs() <= 1e-9 {
                let phase = Complex64::new(0.0, -c.im.signum() * PI / 4.0).exp();
                let constant = (PI / *a as f64).sin() * (PI / *b as f64).sin()
                    / (2f64.sqrt() * (PI / ab).sin());
                return Some(phase * constant * nf.sqrt());
            }
            if classify_regime(leaf, c) == Regime::ConvergesToInvAlexander {
                // Δ is evaluated at t = e^c, i.e. z = c/2.
                return Some(1.0 / alexander_eval(leaf, c / 2.0).ok()?);
            }
            None
        }
    }
}

/// Evaluates `J_N` at fixed `c` for each listed `N`, concurrently, in order.
pub fn sweep_n(knot: &KnotExpr, c: Complex64, ns: &[u64]) -> Result<Vec<SweepRow>> {
    knot.validate()?;
    let has_prediction = ns.first().map(|&n| predicted_value(knot, c, n).is_some()).unwrap_or(false);
    run_indexed(ns.len(), |i| {
        let n = ns[i];
        let v = jones_eval(knot, &EvalPoint::new(c, n)?)?;
        let ratio = if has_prediction {
            let p = predicted_value(knot, c, n).expect("prediction is uniform in N");
            Some((v.value.norm().ln() + v.log_scale - p.norm().ln()).exp())
        } else {
            None
        };
        Ok(SweepRow { n, value: v.value, log_scale: v.log_scale, ratio_to_prediction: ratio })
    })
}

/// A rectangular grid in the `c`-plane, iterated row-major (imaginary part
/// outer, ascending; real part inner, ascending).
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub re_step: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub im_step: f64,
}

impl GridSpec {
    pub fn cells(&self) -> Result<Vec<Complex64>> {
        let ok = |min: f64, max: f64, step: f64| step > 0.0 && max >= min && min.is_finite() && max.is_finite();
        if !ok(self.re_min, self.re_max, self.re_step) || !ok(self.im_min, self.im_max, self.im_step) {
            return Err(crate::Error::Precondition("malformed grid bounds".into()));
        }
        let counts = |min: f64, max: f64, step: f64| ((max - min) / step + 1.5).floor() as usize;
        let (nre, nim) = (
            counts(self.re_min, self.re_max, self.re_step),
            counts(self.im_min, self.im_max, self.im_step),
        );
        let mut out = Vec::with_capacity(nre * nim);
        for j in 0..nim {
            for i in 0..nre {
                out.push(Complex64::new(
                    self.re_min + i as f64 * self.re_step,
                    self.im_min + j as f64 * self.im_step,
                ));
            }
        }
        Ok(out)
    }
}

/// Classified grid cell.
#[derive(Debug, Clone)]
pub struct GridCell {
    pub c: Complex64,
    pub regime: Regime,
}

/// Classifies every cell of the grid concurrently, in deterministic order.
pub fn classify_grid(knot: &KnotExpr, grid: &GridSpec) -> Result<Vec<GridCell>> {
    knot.validate()?;
    let cells = grid.cells()?;
    run_indexed(cells.len(), |i| {
        Ok(GridCell { c: cells[i], regime: classify_regime(knot, cells[i]) })
    })
}

/// Geometric N-range with `count` distinct values from `start` to `end`.
pub fn geometric_ns(start: u64, end: u64, count: usize) -> Result<Vec<u64>> {
    if start < 2 || end < start || count == 0 {
        return Err(crate::Error::Precondition(format!(
            "bad N range {start}..{end} with {count} points"
        )));
    }
    let mut out: Vec<u64> = (0..count)
        .map(|i| {
            let t = if count == 1 { 0.0 } else { i as f64 / (count - 1) as f64 };
            ((start as f64).ln() + t * ((end as f64).ln() - (start as f64).ln())).exp().round()
                as u64
        })
        .collect();
    out.dedup();
    Ok(out)
}
