use std::io::Write;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use siegelkit::approx;
use siegelkit::cli::parse::{self, ParsedSpec};
use siegelkit::cli::suite::{self, Budget};
use siegelkit::cli::{CAP_ENV, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
use siegelkit::curves::{self, CurveSpec};
use siegelkit::hyperarr::{self, LinearFormSystem};
use siegelkit::projective::{self, Hyperplane};
use siegelkit::sarith::{self, Rational, SContext, DEFAULT_CAP};
use siegelkit::thuemahler::{self, BinaryForm, ShearDirection};
use siegelkit::unitsolve;

#[derive(Parser)]
#[command(name = "siegelkit", version, about = "S-unit equations, Thue-Mahler equations and integral points at desk scale")]
struct Cli {
    #[command(flatten)]
    out: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Emit JSON (the canonical report).
    #[arg(long, global = true, conflicts_with = "tsv")]
    json: bool,
    /// Emit tab-separated `path value` lines.
    #[arg(long, global = true)]
    tsv: bool,
    /// Enumeration cap.
    #[arg(long, global = true, env = CAP_ENV, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Classes of e_0 + ... + e_{n+1} = 0 in S-units.
    SolveUnit {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "")]
        primes: String,
        /// Exponent bound.
        #[arg(long)]
        bound: u32,
    },
    /// Classes of F(x, y) = k e for a split form or xy(x-y).
    SolveTm {
        /// e.g. "roots=0,1,-1;k=1;H=1" or "form=xy(x-y);k=1".
        #[arg(long)]
        spec: String,
        #[arg(long, default_value = "")]
        primes: String,
        #[arg(long)]
        height: u64,
        /// Also shear the solutions: "i-to-ii" or "ii-to-i".
        #[arg(long)]
        shear: Option<String>,
    },
    /// Moves a Thue-Mahler solution to the unit equation, or a unit datum back.
    Transport {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value = "")]
        primes: String,
        #[arg(long, requires = "y", conflicts_with = "gamma")]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long, requires = "eta")]
        gamma: Option<String>,
        #[arg(long)]
        eta: Option<String>,
    },
    /// Checks |a - x/y| <= kappa/|y|^d for solutions of f(x, y) = k.
    VerifyApprox {
        /// Integer coefficients of f, leading first.
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, allow_hyphen_values = true, requires = "y")]
        x: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<i64>,
        /// Without x and y: every solution with max(|x|, |y|) up to this height.
        #[arg(long, default_value_t = 100)]
        height: i64,
        #[arg(long, default_value_t = 64)]
        prec: u32,
    },
    /// S-integrality of a point with respect to an arrangement.
    CheckIntegral {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Semicolon-separated coefficient vectors.
        #[arg(long, allow_hyphen_values = true)]
        hyperplanes: String,
        #[arg(long, default_value = "")]
        primes: String,
    },
    /// Hyperplanes covering the S-integral points of P^n minus n+2 hyperplanes.
    Cover {
        #[arg(long, required_unless_present = "arrangement")]
        n: Option<usize>,
        /// Arbitrary arrangement "1,0,0;0,1,0;0,0,1;1,1,1" instead of the standard one.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "n")]
        arrangement: Option<String>,
        #[arg(long, default_value = "")]
        primes: String,
        #[arg(long)]
        bound: u32,
    },
    /// Integral points of a classical curve in a box.
    Curve {
        #[arg(long)]
        family: String,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        roots: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        a1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        a2: Option<String>,
        #[arg(long, default_value = "")]
        primes: String,
        #[arg(long = "box")]
        bx: u32,
    },
    /// Runs a verification suite: prop21, prop51, prop61 or potpourri.
    Suite {
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Time budget in seconds.
        #[arg(long, default_value_t = 300)]
        budget: u64,
    },
}

/// A finished command: the report and whether its verification passed.
struct Outcome {
    report: Value,
    ok: bool,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn primes(text: &str) -> Result<SContext, Failure> {
    parse::parse_primes(text).map_err(usage)
}

fn rational(text: &str) -> Result<Rational, Failure> {
    sarith::parse_rational(text).map_err(usage)
}

fn form_spec(text: &str) -> Result<BinaryForm, Failure> {
    match parse::parse_equation_spec(text).map_err(usage)? {
        ParsedSpec::Form(f) => Ok(f),
        _ => Err(usage("expected a binary form spec")),
    }
}

fn run(cmd: Command, cap: usize) -> Result<Outcome, Failure> {
    match cmd {
        Command::SolveUnit { n, primes: p, bound } => {
            let s = primes(&p)?;
            let sols = unitsolve::solve_unit_equation(n, &s, bound, cap).map_err(runtime)?;
            let report = json!({
                "n": n, "primes": s, "bound": bound,
                "count": sols.classes.len(),
                "classes": sols.classes,
                "degenerate": sols.degenerate,
            });
            Ok(Outcome { report, ok: true })
        }
        Command::SolveTm { spec, primes: p, height, shear } => {
            let form = form_spec(&spec)?;
            let s = primes(&p)?;
            let sols = thuemahler::solve_thue_mahler(&form, &s, height, cap).map_err(runtime)?;
            let mut report = json!({ "form": form, "primes": s, "height": height, "count": sols.len(), "solutions": sols });
            if let Some(dir) = shear {
                let direction = match dir.as_str() {
                    "i-to-ii" => ShearDirection::IToIi,
                    "ii-to-i" => ShearDirection::IiToI,
                    other => return Err(usage(format!("unknown shear {other:?}"))),
                };
                let result = thuemahler::shear_transform(&form, direction, &sols, &s).map_err(runtime)?;
                report["shear"] = to_value(&result);
            }
            Ok(Outcome { report, ok: true })
        }
        Command::Transport { spec, primes: p, x, y, gamma, eta } => {
            let BinaryForm::Split(form) = form_spec(&spec)? else {
                return Err(usage("transport needs a split form"));
            };
            let s = primes(&p)?;
            match (x, y, gamma, eta) {
                (Some(x), Some(y), None, _) => {
                    let sol = thuemahler::TMSolution::at(&BinaryForm::Split(form.clone()), rational(&x)?, rational(&y)?)
                        .map_err(runtime)?;
                    let t = thuemahler::transport_thue_to_unit(&sol, &form, &s).map_err(runtime)?;
                    let back = thuemahler::transport_unit_to_thue(&t.gamma, &form, &t.betas[0]).map_err(runtime)?;
                    let ok = back == sol;
                    Ok(Outcome { report: json!({ "solution": sol, "unit": t, "round_trip": ok }), ok })
                }
                (None, None, Some(g), Some(e)) => {
                    let sol = thuemahler::transport_unit_to_thue(&rational(&g)?, &form, &rational(&e)?).map_err(runtime)?;
                    Ok(Outcome { report: json!({ "gamma": g, "eta": e, "solution": sol }), ok: true })
                }
                _ => Err(usage("give either --x and --y, or --gamma and --eta")),
            }
        }
        Command::VerifyApprox { f, k, x, y, height, prec } => {
            let coeffs: Vec<i64> = parse::parse_rationals(&f)
                .map_err(usage)?
                .iter()
                .map(|c| c.is_integer().then(|| c.to_integer()).and_then(|n| i64::try_from(n).ok()))
                .collect::<Option<_>>()
                .ok_or_else(|| usage("f needs integer coefficients"))?;
            let pairs = match (x, y) {
                (Some(x), Some(y)) => vec![(x, y)],
                _ => approx::thue_solutions(&coeffs, k, height).into_iter().filter(|&(_, y)| y != 0).collect(),
            };
            let big = approx::to_bigints(&coeffs);
            let mut reports = Vec::new();
            let mut ok = true;
            for (x, y) in pairs {
                let r = approx::verify_inequality(&big, &BigInt::from(k), &BigInt::from(x), &BigInt::from(y), prec)
                    .map_err(runtime)?;
                ok &= r.holds == Some(true) || r.above_threshold == Some(false);
                reports.push(json!({ "x": x, "y": y, "report": r }));
            }
            let kappas = approx::kappa_backward(&big, &BigInt::from(k), prec).map_err(runtime)?;
            Ok(Outcome { report: json!({ "f": coeffs, "k": k, "kappa": kappas, "solutions": reports }), ok })
        }
        Command::CheckIntegral { point, hyperplanes, primes: p } => {
            let p_coords = parse::parse_rationals(&point).map_err(usage)?;
            let pt = projective::normalize(&p_coords).map_err(usage)?;
            let hs: Vec<Hyperplane> = hyperplanes
                .split(';')
                .map(|v| parse::parse_rationals(v).map_err(usage).and_then(|c| Hyperplane::new(&c).map_err(usage)))
                .collect::<Result<_, _>>()?;
            let s = primes(&p)?;
            let integral = projective::is_s_integral(&pt, &hs, &s).map_err(runtime)?;
            let raw: Vec<BigInt> = hs.iter().map(|h| h.eval(&pt)).collect::<Result<_, _>>().map_err(runtime)?;
            let mut candidates = Vec::new();
            for v in &raw {
                candidates.extend(sarith::prime_divisors(v).map_err(runtime)?);
            }
            candidates.sort_unstable();
            candidates.dedup();
            let obstructions = projective::local_obstructions(&pt, &hs, &s, candidates).map_err(runtime)?;
            let values: Vec<String> = raw.iter().map(BigInt::to_string).collect();
            Ok(Outcome {
                report: json!({ "point": pt, "hyperplanes": hs, "primes": s, "values": values, "integral": integral, "bad_primes": obstructions }),
                ok: true,
            })
        }
        Command::Cover { n, arrangement, primes: p, bound } => {
            let s = primes(&p)?;
            match (n, arrangement) {
                (Some(n), None) => {
                    let r = hyperarr::covering_hyperplanes(n, &s, bound, cap).map_err(runtime)?;
                    let ok = r.covered;
                    Ok(Outcome { report: to_value(&r), ok })
                }
                (None, Some(text)) => {
                    let sys: LinearFormSystem = match parse::parse_equation_spec(&format!("hyperplanes={text}")).map_err(usage)? {
                        ParsedSpec::Arrangement(sys) => sys,
                        _ => unreachable!("hyperplanes= always yields an arrangement"),
                    };
                    let r = hyperarr::cover_arrangement(&sys, &s, bound, cap).map_err(runtime)?;
                    let ok = r.standard.covered;
                    Ok(Outcome { report: to_value(&r), ok })
                }
                _ => Err(usage("give exactly one of --n and --arrangement")),
            }
        }
        Command::Curve { family, k, f, m, roots, a1, a2, primes: p, bx } => {
            let mut text = format!("family={family}");
            for (key, value) in [("k", k), ("f", f), ("roots", roots), ("a1", a1), ("a2", a2)] {
                if let Some(v) = value {
                    text.push_str(&format!(";{key}={v}"));
                }
            }
            if let Some(m) = m {
                text.push_str(&format!(";m={m}"));
            }
            if !p.is_empty() {
                text.push_str(&format!(";primes={p}"));
            }
            let spec: CurveSpec = match parse::parse_equation_spec(&text).map_err(usage)? {
                ParsedSpec::Curve(c) => c,
                _ => unreachable!("family= always yields a curve"),
            };
            let pts = curves::enumerate_points(&spec, bx, cap).map_err(runtime)?;
            Ok(Outcome { report: json!({ "spec": spec, "box": bx, "count": pts.len(), "points": pts }), ok: true })
        }
        Command::Suite { name, seed, budget } => {
            let r = suite::run_verification_suite(&name, Budget { time: Duration::from_secs(budget), seed }).map_err(usage)?;
            let ok = r.passed();
            Ok(Outcome { report: to_value(&r), ok })
        }
    }
}

/// Leaf values keyed by their JSON path.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push((prefix.to_string(), format!("[{}]", parts.join(","))));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return ExitCode::from(code as u8);
        }
    };
    match run(cli.command, cli.out.cap) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe on stdout is not an error of the computation.
            let _ = if cli.out.json {
                writeln!(stdout, "{}", serde_json::to_string_pretty(&outcome.report).expect("json"))
            } else {
                let mut rows = Vec::new();
                flatten("", &outcome.report, &mut rows);
                let sep = if cli.out.tsv { "\t" } else { " = " };
                rows.iter().try_for_each(|(k, v)| writeln!(stdout, "{k}{sep}{v}"))
            };
            ExitCode::from(if outcome.ok { EXIT_OK } else { EXIT_FAILURE } as u8)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE as u8)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAILURE as u8)
        }
    }
}
