use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use qdeform_core::correlators::{self, omega_scan, sample_points};
use qdeform_core::document::{num, point_value, write_atomic, ReportDocument, SweepSpec};
use qdeform_core::ope::{antisymmetry_table, mode_bracket, virasoro_antisymmetry_scan, virasoro_structure};
use qdeform_core::params::RawParams;
use qdeform_core::suites::{run_suite, Point, Suite};
use qdeform_core::DeformationParams;

/// Verification workbench for (p,q;alpha,gamma,l)-deformed oscillator algebras.
#[derive(Debug, Parser)]
#[command(name = "qdeform", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    p: f64,
    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    q: f64,
    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    gamma: f64,
    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    l: f64,
    /// Spectrum shift of the shifted representations.
    #[arg(long, global = true, default_value_t = 0.0, allow_negative_numbers = true)]
    nu0: f64,
    /// Truncation dimension (per oscillator copy).
    #[arg(long, global = true, default_value_t = 8)]
    dim: usize,
    /// Conformal weight.
    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    h: f64,
    /// Holstein-Primakoff spin.
    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    j: f64,
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Leave the timestamp out so reports are reproducible.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a single quantity.
    Eval {
        #[command(subcommand)]
        what: EvalWhat,
    },
    /// Run suites at one parameter point.
    Check {
        /// Suite names; repeat the flag or separate with commas.
        #[arg(long = "suite", required = true, value_delimiter = ',')]
        suites: Vec<Suite>,
    },
    /// Run suites over a parameter grid described by a JSON file.
    Sweep { spec: PathBuf },
    /// Mode bracket, Virasoro structure constants and the antisymmetry scan.
    Ope {
        #[command(subcommand)]
        what: OpeWhat,
    },
    /// Two-point function and Ward identity checks.
    Corr {
        #[command(subcommand)]
        what: CorrWhat,
    },
}

#[derive(Debug, Subcommand)]
enum EvalWhat {
    /// Structure function [x].
    Bracket {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
    },
    /// [n]! = [s][2s]...[ns].
    Factorial {
        #[arg(long)]
        n: u32,
    },
    /// h_a(z) = (az; r)_inf / (z; r)_inf.
    Ha {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        a: Complex64,
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
    },
    /// Two-point function G(z1, z2) at weight --h.
    Twopoint {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z1: Complex64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z2: Complex64,
    },
}

#[derive(Debug, Subcommand)]
enum OpeWhat {
    /// [L_n, phi_m]; the field defaults to the single mode phi_(n+m) = 1.
    Bracket {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        /// Field modes as JSON, e.g. '{"1": [1, 0], "-2": [0.5, 0]}'.
        #[arg(long)]
        modes: Option<String>,
    },
    /// Weights and right-hand side of the centerless deformed Virasoro quommutator.
    Structure {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
    },
    /// |[m-n] + [n-m]| over a window such as -3..3.
    Antisym {
        #[arg(long, default_value = "-3..3", allow_hyphen_values = true)]
        window: String,
    },
}

#[derive(Debug, Subcommand)]
enum CorrWhat {
    /// Ward residuals at the sample points for a given exponent (default -2h).
    Ward {
        #[arg(long, allow_negative_numbers = true)]
        omega: Option<f64>,
    },
    /// Ward residual for each trial exponent.
    Scan {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        omegas: Option<Vec<f64>>,
    },
}

fn parse_complex(text: &str) -> std::result::Result<Complex64, String> {
    let cleaned = text.trim().replace('j', "i");
    cleaned.parse::<Complex64>().map_err(|e| format!("bad complex number {text:?}: {e}"))
}

fn parse_window(text: &str) -> Result<(i64, i64)> {
    let (lo, hi) = text.split_once("..").context("window must look like LO..HI")?;
    let (lo, hi): (i64, i64) = (lo.trim().parse()?, hi.trim().parse()?);
    if lo > hi {
        bail!("empty window {text}");
    }
    Ok((lo, hi))
}

/// Round to 15 significant digits and print the shortest form.
fn fmt_scalar(x: f64) -> String {
    let rounded: f64 = format!("{x:.14e}").parse().unwrap_or(x);
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    format!("{rounded}")
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        fmt_scalar(z.re)
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{}i", fmt_scalar(z.re), fmt_scalar(z.im.abs()))
    }
}

fn complex_value(z: Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

impl Global {
    fn raw(&self) -> RawParams {
        RawParams::new(self.p, self.q, self.alpha, self.gamma, self.l)
    }

    fn params(&self) -> Result<DeformationParams> {
        let r = self.raw();
        Ok(DeformationParams::new(r.p, r.q, r.alpha, r.gamma, r.l)?)
    }

    fn point(&self) -> Point {
        Point { params: self.raw(), nu0: self.nu0, h: self.h, j: self.j, dim: self.dim }
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => write_atomic(path, text.as_bytes()).with_context(|| format!("writing {}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn emit_json(&self, value: &Value) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.emit(&text)
    }

    fn emit_document(&self, doc: &ReportDocument) -> Result<ExitCode> {
        match self.format {
            Format::Json => self.emit(&doc.to_json())?,
            Format::Csv => self.emit(&doc.to_csv())?,
        }
        let s = doc.summary();
        let mut line = format!(
            "{} records: {} pass, {} fail, {} vacuous, {} documented, {} rejected",
            s.total, s.pass, s.fail, s.vacuous, s.documented, s.rejected
        );
        if s.documented > 0 {
            line.push_str(" (documented-discrepancy)");
        }
        eprintln!("{line}");
        Ok(ExitCode::from(s.exit_code() as u8))
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let g = &cli.global;
    if g.tol.is_nan() || g.tol <= 0.0 {
        bail!("--tol must be positive");
    }
    match cli.command {
        Command::Eval { what } => {
            let params = g.params()?;
            let text = match what {
                EvalWhat::Bracket { x } => fmt_scalar(params.bracket(x)),
                EvalWhat::Factorial { n } => fmt_scalar(params.bracket_factorial(n)),
                EvalWhat::Ha { z, a, r } => fmt_complex(correlators::h_a(z, a, r)?),
                EvalWhat::Twopoint { z1, z2 } => fmt_complex(correlators::two_point(z1, z2, g.h, &params)?),
            };
            println!("{text}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { suites } => {
            g.params()?;
            if g.dim == 0 {
                bail!("--dim must be at least 1");
            }
            let point = g.point();
            let records = suites.iter().map(|&s| run_suite(s, &point, g.tol)).collect();
            let input = json!({
                "command": "check",
                "suites": suites.iter().map(|s| s.name()).collect::<Vec<_>>(),
                "point": point_value(&point),
                "tol": num(g.tol),
            });
            g.emit_document(&ReportDocument::new(input, records, !g.no_timestamp))
        }
        Command::Sweep { spec } => {
            let text = std::fs::read_to_string(&spec).with_context(|| format!("reading {}", spec.display()))?;
            let parsed = SweepSpec::from_json(&text)?;
            let input: Value = serde_json::from_str(&text)?;
            let records = parsed.run();
            g.emit_document(&ReportDocument::new(json!({"command": "sweep", "spec": input}), records, !g.no_timestamp))
        }
        Command::Ope { what } => {
            let params = g.params()?;
            let value = match what {
                OpeWhat::Bracket { n, m, modes } => {
                    let modes: BTreeMap<i64, Complex64> = match modes {
                        Some(text) => {
                            let poly: qdeform_core::laurent::LaurentPoly =
                                serde_json::from_str(&text).context("parsing --modes")?;
                            poly.terms().collect()
                        }
                        None => BTreeMap::from([(n + m, Complex64::new(1.0, 0.0))]),
                    };
                    let result = mode_bracket(n, m, g.h, &modes, &params);
                    let coefficients: serde_json::Map<String, Value> =
                        result.coefficients.iter().map(|(k, c)| (k.to_string(), complex_value(*c))).collect();
                    json!({
                        "n": n,
                        "m": m,
                        "h": num(g.h),
                        "mode": result.target(),
                        "coefficient": complex_value(result.coefficient(result.target())),
                        "expected": complex_value(result.expected),
                        "coefficients": coefficients,
                        "residual": num(result.residual()),
                    })
                }
                OpeWhat::Structure { n, m } => {
                    let (w_nm, w_mn, rhs) = virasoro_structure(n, m, &params);
                    json!({"n": n, "m": m, "weight_nm": num(w_nm), "weight_mn": num(w_mn), "rhs": num(rhs)})
                }
                OpeWhat::Antisym { window } => {
                    let (lo, hi) = parse_window(&window)?;
                    let report = virasoro_antisymmetry_scan(&params, lo, hi);
                    let rows: Vec<Value> = antisymmetry_table(&params, lo, hi)
                        .into_iter()
                        .map(|(n, m, r)| json!({"n": n, "m": m, "residual": num(r)}))
                        .collect();
                    json!({"window": [lo, hi], "max_residual": num(report.residual), "note": report.note, "table": rows})
                }
            };
            g.emit_json(&value)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Corr { what } => {
            let params = g.params()?;
            let points = sample_points(g.h, &params)?;
            let value = match what {
                CorrWhat::Ward { omega } => {
                    let omega = omega.unwrap_or(-2.0 * g.h);
                    let mut rows = Vec::new();
                    for &(z1, z2) in &points {
                        let r = correlators::ward_k_minus(z1, z2, g.h, g.h, omega, &params)?;
                        rows.push(json!({"z1": complex_value(z1), "z2": complex_value(z2), "residual": num(r)}));
                    }
                    let report = correlators::ward_residual(g.h, g.h, &params, &points, omega, g.tol.max(1e-8))?;
                    json!({"omega": num(omega), "verdict": report.verdict.label(), "max_residual": num(report.residual), "points": rows})
                }
                CorrWhat::Scan { omegas } => {
                    let omegas = omegas.unwrap_or_else(|| vec![-2.0 * g.h - 1.0, -2.0 * g.h, -2.0 * g.h + 1.0]);
                    let scan = omega_scan(g.h, &params, &omegas)?;
                    json!({
                        "omegas": scan.omegas.iter().map(|&x| num(x)).collect::<Vec<_>>(),
                        "residuals": scan.residuals.iter().map(|&x| num(x)).collect::<Vec<_>>(),
                        "best": num(scan.best),
                        "separation": num(scan.separation),
                    })
                }
            };
            g.emit_json(&value)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
