//! Command-line interface: point evaluation, asymptotic prediction, regime
//! classification, sweeps, and the verification suite. JSON goes to stdout;
//! human-readable progress goes to stderr. Exit codes: 2 for parse errors,
//! 3 for numeric-domain errors, 1 for any other failure.

use clap::{Parser, Subcommand};
use jonesasym::acceptance::{self, Profile};
use jonesasym::jones::{jones_eval, jones_torus_contour, EvalPoint, JonesValue, Method};
use jonesasym::knot::xi;
use jonesasym::sweep::{self, GridSpec};
use jonesasym::torus::{
    classify_regime, expansion_at_pole, expansion_off_pole, kashaev_tirkkonen_r1,
    AsymptoticResult, RationalParam, Regime,
};
use jonesasym::{parse, Error, KnotExpr};
use num_complex::Complex64;
use serde_json::{json, Value};

const PI: f64 = std::f64::consts::PI;

#[derive(Parser)]
#[command(name = "jonesasym", about = "Colored Jones polynomial evaluation and asymptotics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate J_N(K; exp(c/N)) at a single point.
    Eval {
        #[arg(long)]
        knot: String,
        #[arg(long = "N")]
        n: u64,
        /// Complex exponent, e.g. "0.1+0.5i".
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// "sum" (closed forms), "contour" (torus contour route), or "auto".
        #[arg(long, default_value = "auto")]
        method: String,
    },
    /// Asymptotic prediction for a torus knot at c = 2πr i, r rational.
    Asympt {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        /// Exact rational r as "p/q" (or a bare integer); decimals rejected.
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
    },
    /// Classify the large-N regime at a point or over a c-grid (CSV).
    Classify {
        #[arg(long)]
        knot: String,
        #[arg(long, conflicts_with = "grid", allow_hyphen_values = true)]
        c: Option<String>,
        /// Grid "re_min:re_max:re_step,im_min:im_max:im_step".
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, conflicts_with = "full")]
        quick: bool,
        #[arg(long)]
        full: bool,
        /// Run a single named criterion.
        #[arg(long)]
        only: Option<String>,
    },
    /// J_N over an N-range at fixed c (CSV).
    Sweep {
        #[arg(long)]
        knot: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        n_start: u64,
        #[arg(long)]
        n_end: u64,
        #[arg(long, default_value_t = 20)]
        n_count: usize,
        /// "geometric" or "linear".
        #[arg(long, default_value = "geometric")]
        spacing: String,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(match e {
                Error::Parse { .. } => 2,
                Error::NumericDomain(_) | Error::PoleHit { .. } => 3,
                _ => 1,
            });
        }
    }
}

fn parse_error(message: impl Into<String>) -> Error {
    Error::Parse { offset: 0, message: message.into() }
}

/// Parses "a+bi" / "a-bi" / "bi" / "a" into a complex number.
fn parse_complex(s: &str) -> Result<Complex64, Error> {
    let t = s.trim();
    let bad = || parse_error(format!("malformed complex number '{t}' (expected re+imi)"));
    if let Some(body) = t.strip_suffix('i') {
        let mut split = None;
        for (idx, ch) in body.char_indices().rev() {
            if (ch == '+' || ch == '-') && idx > 0 {
                let prev = body.as_bytes()[idx - 1];
                if prev != b'e' && prev != b'E' {
                    split = Some(idx);
                    break;
                }
            }
        }
        let (re_str, im_str) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("0", body),
        };
        let re: f64 = re_str.trim().parse().map_err(|_| bad())?;
        let im: f64 = match im_str.trim() {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other.parse().map_err(|_| bad())?,
        };
        return Ok(Complex64::new(re, im));
    }
    t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad())
}

/// Parses "p/q" or a bare integer into an exact rational parameter.
fn parse_rational(s: &str, a: i64, b: i64) -> Result<RationalParam, Error> {
    let t = s.trim();
    if t.contains('.') {
        return Err(parse_error(format!(
            "r must be an exact rational 'p/q', not a decimal: '{t}'"
        )));
    }
    let _ = (a, b);
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (
            p.trim().parse::<i64>().map_err(|_| parse_error(format!("bad numerator in '{t}'")))?,
            q.trim()
                .parse::<i64>()
                .map_err(|_| parse_error(format!("bad denominator in '{t}'")))?,
        ),
        None => (t.parse::<i64>().map_err(|_| parse_error(format!("bad rational '{t}'")))?, 1),
    };
    RationalParam::from_rational(p, q)
}

fn cjson(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::HabiroSum => "habiro-sum",
        Method::TorusClosedSum => "torus-closed-sum",
        Method::TorusContour => "torus-contour",
        Method::Composite => "composite",
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Eval { knot, n, c, method } => cmd_eval(&knot, n, &c, &method),
        Command::Asympt { a, b, r, n, kmax } => cmd_asympt(a, b, &r, n, kmax),
        Command::Classify { knot, c, grid } => cmd_classify(&knot, c.as_deref(), grid.as_deref()),
        Command::Verify { quick: _, full, only } => cmd_verify(full, only.as_deref()),
        Command::Sweep { knot, c, n_start, n_end, n_count, spacing } => {
            cmd_sweep(&knot, &c, n_start, n_end, n_count, &spacing)
        }
    }
}

fn cmd_eval(knot_str: &str, n: u64, c_str: &str, method: &str) -> Result<(), Error> {
    let knot = parse::parse(knot_str)?;
    let c = parse_complex(c_str)?;
    let point = EvalPoint::new(c, n)?;
    let value: JonesValue = match method {
        "auto" | "sum" => jones_eval(&knot, &point)?,
        "contour" => match &knot {
            KnotExpr::Torus(a, b) => jones_torus_contour(&point, *a, *b)?,
            _ => {
                return Err(Error::NumericDomain(
                    "the contour method applies to plain torus knots only".into(),
                ))
            }
        },
        other => return Err(parse_error(format!("unknown method '{other}'"))),
    };
    let out = json!({
        "knot": parse::print(&knot),
        "N": n,
        "c": cjson(c),
        "method": method_name(value.method),
        "value": cjson(value.value),
        "log_scale": value.log_scale,
        "log_domain": value.log_domain,
    });
    println!("{out}");
    Ok(())
}

fn asympt_json(result: &AsymptoticResult) -> Value {
    json!({
        "total": cjson(result.total),
        "series_part": cjson(result.series_part),
        "constant_growth_part": cjson(result.constant_growth_part),
        "oscillatory_terms": result.oscillatory_terms.iter().map(|t| json!({
            "j": t.j,
            "amplitude": t.amplitude,
            "phase": cjson(t.phase),
            "contribution": cjson(t.contribution),
        })).collect::<Vec<_>>(),
        "truncation_estimate": result.truncation_estimate,
    })
}

fn cmd_asympt(a: i64, b: i64, r_str: &str, n: u64, kmax: usize) -> Result<(), Error> {
    let r = parse_rational(r_str, a, b)?;
    let (route, result) = if r.is_integer() {
        if r.value() == 1.0 {
            ("kashaev-tirkkonen", kashaev_tirkkonen_r1(a, b, n, kmax)?)
        } else {
            return Err(Error::NumericDomain(format!(
                "integer r = {} has no implemented expansion (only r = 1)",
                r.value()
            )));
        }
    } else if r.is_pole(a, b) {
        ("pole-center", expansion_at_pole(a, b, &r, n, kmax)?)
    } else {
        ("regular-center", expansion_off_pole(a, b, &r, n, kmax)?)
    };

    let c = Complex64::new(0.0, 2.0 * PI * r.value());
    let direct = jonesasym::jones::jones_torus_sum(&EvalPoint::new(c, n)?, a, b)?;
    let rel = (result.total - direct.value).norm() / direct.value.norm().max(1e-300);
    let out = json!({
        "a": a,
        "b": b,
        "r": r_str.trim(),
        "N": n,
        "kmax": kmax,
        "route": route,
        "expansion": asympt_json(&result),
        "direct": cjson(direct.value),
        "relative_difference": rel,
    });
    println!("{out}");
    Ok(())
}

fn regime_fields(regime: &Regime) -> (&'static str, Value) {
    match regime {
        Regime::DegenerateUnit => ("DegenerateUnit", Value::Null),
        Regime::ConvergesToInvAlexander => ("ConvergesToInvAlexander", Value::Null),
        Regime::PolynomialGrowth(e) => {
            ("PolynomialGrowth", json!(format!("{}/{}", e.numer(), e.denom())))
        }
        Regime::ExponentialGrowth(rate) => ("ExponentialGrowth", cjson(*rate)),
        Regime::Oscillates => ("Oscillates", Value::Null),
        Regime::Unknown => ("Unknown", Value::Null),
    }
}

fn regime_csv_extra(regime: &Regime) -> String {
    match regime {
        Regime::PolynomialGrowth(e) => format!("{}/{}", e.numer(), e.denom()),
        Regime::ExponentialGrowth(rate) => format!("{}+{}i", rate.re, rate.im),
        _ => String::new(),
    }
}

fn has_fig8_leaf(knot: &KnotExpr) -> bool {
    match knot {
        KnotExpr::FigureEight => true,
        KnotExpr::Torus(..) => false,
        KnotExpr::Mirror(inner) => has_fig8_leaf(inner),
        KnotExpr::ConnectedSum(parts) => parts.iter().any(has_fig8_leaf),
    }
}

fn cmd_classify(knot_str: &str, c: Option<&str>, grid: Option<&str>) -> Result<(), Error> {
    let knot = parse::parse(knot_str)?;
    match (c, grid) {
        (Some(c_str), None) => {
            let c = parse_complex(c_str)?;
            // Real exponents within 1e-4 of ±ξ snap to the exact growth
            // point of the figure-eight factor; the snap is reported.
            let snapped = if has_fig8_leaf(&knot)
                && c.im.abs() <= 1e-4
                && (c.re.abs() - xi()).abs() <= 1e-4
            {
                Some(Complex64::new(c.re.signum() * xi(), 0.0))
            } else {
                None
            };
            let effective = snapped.unwrap_or(c);
            let regime = classify_regime(&knot, effective);
            let (name, extra) = regime_fields(&regime);
            let mut out = json!({
                "knot": parse::print(&knot),
                "c": cjson(c),
                "regime": name,
            });
            if let Some(s) = snapped {
                out["snapped_c"] = cjson(s);
            }
            match regime {
                Regime::PolynomialGrowth(_) => out["exponent"] = extra,
                Regime::ExponentialGrowth(_) => out["rate"] = extra,
                _ => {}
            }
            println!("{out}");
            Ok(())
        }
        (None, Some(grid_str)) => {
            let spec = parse_grid(grid_str)?;
            let cells = sweep::classify_grid(&knot, &spec)?;
            println!("c_re,c_im,regime,exponent_or_rate");
            for cell in cells {
                let (name, _) = regime_fields(&cell.regime);
                println!("{},{},{},{}", cell.c.re, cell.c.im, name, regime_csv_extra(&cell.regime));
            }
            Ok(())
        }
        _ => Err(parse_error("classify needs exactly one of --c or --grid")),
    }
}

fn parse_grid(s: &str) -> Result<GridSpec, Error> {
    let bad = || parse_error(format!("malformed grid '{s}' (expected a:b:step,a:b:step)"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    let axis = |part: &str| -> Result<(f64, f64, f64), Error> {
        let fields: Vec<&str> = part.split(':').collect();
        if fields.len() != 3 {
            return Err(bad());
        }
        let vals: Vec<f64> =
            fields.iter().map(|f| f.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        Ok((vals[0], vals[1], vals[2]))
    };
    let (re_min, re_max, re_step) = axis(re)?;
    let (im_min, im_max, im_step) = axis(im)?;
    Ok(GridSpec { re_min, re_max, re_step, im_min, im_max, im_step })
}

fn cmd_verify(full: bool, only: Option<&str>) -> Result<(), Error> {
    let profile = if full { Profile::Full } else { Profile::Quick };
    if let Some(name) = only {
        if !acceptance::CRITERIA.contains(&name) {
            return Err(parse_error(format!(
                "unknown criterion '{name}' (expected one of {})",
                acceptance::CRITERIA.join(", ")
            )));
        }
    }
    let reports = acceptance::run_all(profile, only);
    for rep in &reports {
        eprintln!(
            "{} {:<18} measured={:.6e} bound={:.6e}  {}",
            if rep.pass { "PASS" } else { "FAIL" },
            rep.criterion,
            rep.measured,
            rep.bound,
            rep.detail
        );
    }
    let out: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "criterion": r.criterion,
                "measured": r.measured,
                "bound": r.bound,
                "pass": r.pass,
                "detail": r.detail,
            })
        })
        .collect();
    println!("{}", Value::Array(out));
    if reports.iter().any(|r| !r.pass) {
        std::process::exit(1);
    }
    Ok(())
}

fn cmd_sweep(
    knot_str: &str,
    c_str: &str,
    n_start: u64,
    n_end: u64,
    n_count: usize,
    spacing: &str,
) -> Result<(), Error> {
    let knot = parse::parse(knot_str)?;
    let c = parse_complex(c_str)?;
    let ns: Vec<u64> = match spacing {
        "geometric" => sweep::geometric_ns(n_start, n_end, n_count)?,
        "linear" => {
            if n_start < 2 || n_end < n_start || n_count == 0 {
                return Err(parse_error(format!("bad N range {n_start}..{n_end}")));
            }
            let mut out: Vec<u64> = (0..n_count)
                .map(|i| {
                    let t = if n_count == 1 { 0.0 } else { i as f64 / (n_count - 1) as f64 };
                    (n_start as f64 + t * (n_end - n_start) as f64).round() as u64
                })
                .collect();
            out.dedup();
            out
        }
        other => return Err(parse_error(format!("unknown spacing '{other}'"))),
    };
    let rows = sweep::sweep_n(&knot, c, &ns)?;
    let with_prediction = rows.first().map(|r| r.ratio_to_prediction.is_some()).unwrap_or(false);
    if with_prediction {
        println!("N,re,im,abs,arg,ratio_to_prediction");
    } else {
        println!("N,re,im,abs,arg");
    }
    for row in rows {
        let abs = row.value.norm() * row.log_scale.exp();
        let arg = row.value.arg();
        match row.ratio_to_prediction {
            Some(ratio) => {
                println!("{},{},{},{},{},{}", row.n, row.value.re, row.value.im, abs, arg, ratio)
            }
            None => println!("{},{},{},{},{}", row.n, row.value.re, row.value.im, abs, arg),
        }
    }
    Ok(())
}
