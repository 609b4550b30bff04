//! `curvlab` — evaluate curvature invariants on model spaces, sweep the
//! Berger families, derive bounds for DSL expressions, and run the
//! verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/parse error.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use curvlab_core::engine::{explain, infer, parse};
use curvlab_core::models::{berger_ch_riem, berger_cp_riem, ModelSpec};
use curvlab_core::verify;
use curvlab_core::{
    c_p_min, riem_pointwise_with_tol, riem_small_pointwise_with_tol, RiemSmall, TOL_BASE,
};

#[derive(Parser)]
#[command(name = "curvlab", version, about = "curvature-operator invariants and Riem bounds")]
struct Cli {
    /// RNG seed (default: CURVLAB_SEED env var, else 12345)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Base tolerance override for positivity cutoffs
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Output format
    #[arg(long, global = true, value_enum)]
    out: Option<OutFormat>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Spectral scalar curvature of a model: Scal, lambda_max, Riem, riem
    Riem {
        /// Model: shorthand like `cp:3`, `sphere4`, `product:sphere3,hyperbolic2`,
        /// or a ModelSpec JSON object
        model: String,
    },
    /// Eigenvalues of a model curvature operator
    Spectrum { model: String },
    /// Sampled minimum of the intermediate curvature C_p over the Grassmannian
    Cp {
        model: String,
        /// Plane dimension p
        #[arg(long)]
        p: usize,
        /// Number of random frames on top of the coordinate planes
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Bounds on the smooth Riem invariant of a DSL expression
    Bound {
        /// Expression, e.g. `connsum(product(sphere(3), circle), rp(4))`
        expr: String,
    },
    /// Berger geodesic-sphere family sweep (CSV: r,riem)
    Sweep {
        /// Family: `cp:<n>` or `ch:<n>`
        family: String,
        #[arg(long)]
        r_min: f64,
        #[arg(long)]
        r_max: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Run a verification suite: core | models | weitzenbock | engine | all
    Verify { suite: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = cli.seed.unwrap_or_else(|| {
        std::env::var("CURVLAB_SEED")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(12345)
    });
    let tol = cli.tol.unwrap_or(TOL_BASE);

    let result = match &cli.cmd {
        Cmd::Riem { model } => cmd_riem(model, tol),
        Cmd::Spectrum { model } => cmd_spectrum(model),
        Cmd::Cp { model, p, samples } => cmd_cp(model, *p, *samples, seed),
        Cmd::Bound { expr } => cmd_bound(expr),
        Cmd::Sweep {
            family,
            r_min,
            r_max,
            steps,
        } => cmd_sweep(family, *r_min, *r_max, *steps, cli.out),
        Cmd::Verify { suite } => return cmd_verify(suite, seed),
    };

    match result {
        Ok(output) => {
            println!("{output}");
            ExitCode::SUCCESS
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// Rounds to 12 significant digits so printed numbers are stable.
fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let factor = 10f64.powi(11 - magnitude);
    (x * factor).round() / factor
}

fn pretty(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("value serializes")
}

fn cmd_riem(model: &str, tol: f64) -> Result<String, String> {
    let spec = parse_model(model)?;
    let op = spec.operator().map_err(|e| e.to_string())?;
    let scaled_tol = tol * (1.0 + op.norm());
    let riem_small = match riem_small_pointwise_with_tol(&op, scaled_tol) {
        RiemSmall::NegInfinity => json!("-inf"),
        RiemSmall::Value(v) => json!(sig12(v)),
    };
    let value = json!({
        "model": model,
        "n": op.dim(),
        "scal": sig12(op.scalar()),
        "lambda_max": sig12(op.spectrum().lambda_max()),
        "riem": sig12(riem_pointwise_with_tol(&op, scaled_tol)),
        "riem_small": riem_small,
    });
    Ok(pretty(&value))
}

fn cmd_spectrum(model: &str) -> Result<String, String> {
    let spec = parse_model(model)?;
    let op = spec.operator().map_err(|e| e.to_string())?;
    let spectrum = op.spectrum();
    let eigenvalues: Vec<f64> = spectrum.eigenvalues().iter().map(|&l| sig12(l)).collect();
    let value = json!({
        "model": model,
        "n": op.dim(),
        "N": op.bivector_dim(),
        "scal": sig12(op.scalar()),
        "eigenvalues": eigenvalues,
        "lambda_min": sig12(spectrum.lambda_min()),
        "lambda_max": sig12(spectrum.lambda_max()),
    });
    Ok(pretty(&value))
}

fn cmd_cp(model: &str, p: usize, samples: usize, seed: u64) -> Result<String, String> {
    let spec = parse_model(model)?;
    let op = spec.operator().map_err(|e| e.to_string())?;
    let out = c_p_min(&op, p, samples, seed).map_err(|e| e.to_string())?;
    let value = json!({
        "model": model,
        "n": op.dim(),
        "p": out.p,
        "samples": out.samples,
        "seed": out.seed,
        "value": sig12(out.value),
        "tolerance": sig12(out.tolerance),
    });
    Ok(pretty(&value))
}

fn cmd_bound(expr: &str) -> Result<String, String> {
    let ast = parse(expr).map_err(|e| e.to_string())?;
    let interval = infer(&ast).map_err(|e| e.to_string())?;
    let mut value = interval.to_json();
    value["expr"] = json!(expr);
    value["report"] = json!(explain(&interval)
        .lines()
        .map(str::to_string)
        .collect::<Vec<_>>());
    Ok(pretty(&value))
}

fn cmd_sweep(
    family: &str,
    r_min: f64,
    r_max: f64,
    steps: usize,
    out: Option<OutFormat>,
) -> Result<String, String> {
    let (kind, n) = parse_family(family)?;
    if steps < 2 {
        return Err("sweep needs steps >= 2".into());
    }
    if !(r_min > 0.0 && r_min < r_max) {
        return Err(format!("invalid radius range [{r_min}, {r_max}]"));
    }
    let mut rows = Vec::with_capacity(steps);
    for k in 0..steps {
        let r = r_min + (r_max - r_min) * k as f64 / (steps as f64 - 1.0);
        let value = match kind {
            FamilyKind::Cp => berger_cp_riem(n, r),
            FamilyKind::Ch => berger_ch_riem(n, r),
        }
        .map_err(|e| e.to_string())?;
        rows.push((sig12(r), sig12(value)));
    }
    match out {
        Some(OutFormat::Json) => {
            let value: Vec<serde_json::Value> =
                rows.iter().map(|(r, v)| json!({"r": r, "riem": v})).collect();
            Ok(pretty(&json!(value)))
        }
        _ => {
            let mut text = String::from("r,riem");
            for (r, v) in rows {
                text.push_str(&format!("\n{r},{v}"));
            }
            Ok(text)
        }
    }
}

fn cmd_verify(suite: &str, seed: u64) -> ExitCode {
    match verify::run_suite(suite, seed) {
        Some(checks) => {
            let mut text = String::new();
            let ok = verify::render(&checks, &mut text);
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        None => {
            eprintln!(
                "error: unknown suite `{suite}`; expected one of {}",
                verify::suite_names().join(", ")
            );
            ExitCode::from(2)
        }
    }
}

enum FamilyKind {
    Cp,
    Ch,
}

fn parse_family(text: &str) -> Result<(FamilyKind, usize), String> {
    let (kind, rest) = text
        .split_once(':')
        .ok_or_else(|| format!("expected `cp:<n>` or `ch:<n>`, got `{text}`"))?;
    let n: usize = rest
        .parse()
        .map_err(|_| format!("invalid family parameter `{rest}`"))?;
    match kind {
        "cp" | "bergercp" => Ok((FamilyKind::Cp, n)),
        "ch" | "bergerch" => Ok((FamilyKind::Ch, n)),
        other => Err(format!("unknown family `{other}`; expected cp or ch")),
    }
}

/// Model shorthand: `cp:3`, `hp:2`, `sphere:4`, `cylinder:3,5`,
/// `product:sphere3,hyperbolic2`, a bare atom like `sphere4`, or a
/// ModelSpec JSON object.
fn parse_model(text: &str) -> Result<ModelSpec, String> {
    let text = text.trim();
    if text.starts_with('{') {
        return serde_json::from_str(text).map_err(|e| format!("invalid model JSON: {e}"));
    }
    if let Some((kind, rest)) = text.split_once(':') {
        let spec = match kind {
            "cp" => ModelSpec::FubiniStudyCP { n: parse_num(rest)? },
            "hp" => ModelSpec::FubiniStudyHP { n: parse_num(rest)? },
            "sphere" => ModelSpec::SpaceForm { n: parse_num(rest)?, kappa: 1.0 },
            "torus" | "flat" => ModelSpec::SpaceForm { n: parse_num(rest)?, kappa: 0.0 },
            "hyperbolic" => ModelSpec::SpaceForm { n: parse_num(rest)?, kappa: -1.0 },
            "cylinder" => {
                let (q, n) = rest
                    .split_once(',')
                    .ok_or_else(|| format!("cylinder needs `q,n`, got `{rest}`"))?;
                ModelSpec::Cylinder {
                    q: parse_num(q)?,
                    n: parse_num(n)?,
                }
            }
            "product" => {
                let factors: Result<Vec<ModelSpec>, String> =
                    rest.split(',').map(|tok| parse_atom(tok.trim())).collect();
                ModelSpec::Product { factors: factors? }
            }
            other => return Err(format!("unknown model kind `{other}`")),
        };
        return Ok(spec);
    }
    parse_atom(text)
}

/// Bare atom token: a name followed by its dimension, e.g. `sphere3`.
fn parse_atom(token: &str) -> Result<ModelSpec, String> {
    if token == "circle" {
        return Ok(ModelSpec::SpaceForm { n: 1, kappa: 0.0 });
    }
    let split = token
        .find(|c: char| c.is_ascii_digit())
        .ok_or_else(|| format!("unknown model atom `{token}`"))?;
    let (name, digits) = token.split_at(split);
    let n: usize = digits
        .parse()
        .map_err(|_| format!("invalid dimension in `{token}`"))?;
    let spec = match name {
        "sphere" => ModelSpec::SpaceForm { n, kappa: 1.0 },
        "torus" | "flat" => ModelSpec::SpaceForm { n, kappa: 0.0 },
        "hyperbolic" => ModelSpec::SpaceForm { n, kappa: -1.0 },
        "cp" => ModelSpec::FubiniStudyCP { n },
        "hp" => ModelSpec::FubiniStudyHP { n },
        other => return Err(format!("unknown model atom `{other}`")),
    };
    Ok(spec)
}

fn parse_num(text: &str) -> Result<usize, String> {
    text.trim()
        .parse()
        .map_err(|_| format!("invalid integer `{text}`"))
}
