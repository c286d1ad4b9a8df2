use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperjacobi::catalog::Registry;
use hyperjacobi::qcore::{q2phi1_series, QParam};
use hyperjacobi::series::{agm_comparison, f21_series, TruncatedSeries};
use hyperjacobi::verifier::{verify_all, VerificationReport, Verdict, VerifyOptions, MIN_ORDER};
use hyperjacobi::{parse_rational, Rational};
use num_traits::ToPrimitive;

#[derive(Parser)]
#[command(name = "hyperjacobi", version, about = "Verify hypergeometric transformation formulas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Show the registered formulas.
    List {
        #[arg(long)]
        json: bool,
        #[arg(long, env = "HYPERJACOBI_REGISTRY")]
        registry: Option<PathBuf>,
    },
    /// Verify the named formulas.
    Verify {
        #[arg(required = true)]
        ids: Vec<String>,
        #[command(flatten)]
        flags: VerifyFlags,
    },
    /// Verify every registered formula.
    VerifyAll {
        #[command(flatten)]
        flags: VerifyFlags,
    },
    /// Evaluate a truncated series.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Floating-point cross-checks.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Args)]
struct VerifyFlags {
    #[arg(long, default_value_t = 40)]
    order: usize,
    #[arg(long, default_value_t = 3)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
    #[arg(long, env = "HYPERJACOBI_REGISTRY")]
    registry: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Omit timings so output is reproducible byte for byte.
    #[arg(long)]
    no_timings: bool,
}

#[derive(Subcommand)]
enum EvalCommand {
    /// Gauss 2F1(a, b; c; x).
    #[command(name = "2f1")]
    F21 {
        #[arg(long, value_parser = rational)]
        a: Rational,
        #[arg(long, value_parser = rational)]
        b: Rational,
        #[arg(long, value_parser = rational)]
        c: Rational,
        #[arg(long, value_parser = rational)]
        x: Rational,
        #[arg(long, default_value_t = 40)]
        order: usize,
        #[arg(long)]
        json: bool,
    },
    /// Basic hypergeometric 2phi1(alpha, beta; gamma; q; x).
    Qphi {
        #[arg(long, value_parser = rational)]
        alpha: Rational,
        #[arg(long, value_parser = rational)]
        beta: Rational,
        #[arg(long, value_parser = rational)]
        gamma: Rational,
        #[arg(long, value_parser = rational)]
        q: Rational,
        #[arg(long, value_parser = rational)]
        x: Rational,
        #[arg(long, default_value_t = 40)]
        order: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// M(x), 1/M(x) and 2F1(1/2, 1/2; 1; 1 - x^2).
    Agm {
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 200)]
        order: usize,
        #[arg(long)]
        json: bool,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {}", msg);
    ExitCode::from(2)
}

fn check_order(order: usize) -> Result<(), ExitCode> {
    if order < MIN_ORDER {
        return Err(usage(format!("--order must be at least {}", MIN_ORDER)));
    }
    Ok(())
}

fn load_registry(path: Option<&PathBuf>) -> Result<Registry, ExitCode> {
    match path {
        Some(p) => Registry::load(p).map_err(usage),
        None => Ok(Registry::builtin()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) | Err(code) => code,
    }
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    match cli.command {
        Command::List { json, registry } => {
            let reg = load_registry(registry.as_ref())?;
            if json {
                let rows: Vec<_> = reg
                    .list()
                    .into_iter()
                    .map(|(id, citation, family)| serde_json::json!({"id": id, "family": family, "citation": citation}))
                    .collect();
                println!("{}", serde_json::to_string_pretty(&rows).expect("rows serialize"));
            } else {
                println!("{:<8} {:<11} citation", "id", "family");
                for (id, citation, family) in reg.list() {
                    println!("{:<8} {:<11} {}", id, family.to_string(), citation);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { ids, flags } => {
            let (reg, opts) = prepare(&flags)?;
            let mut specs = Vec::new();
            for id in &ids {
                specs.push(reg.get(id).map_err(usage)?.clone());
            }
            let sub = Registry::new(specs).map_err(usage)?;
            Ok(emit(verify_all(&sub, &opts, flags.jobs), flags.json, false))
        }
        Command::VerifyAll { flags } => {
            let (reg, opts) = prepare(&flags)?;
            Ok(emit(verify_all(&reg, &opts, flags.jobs), flags.json, true))
        }
        Command::Eval(EvalCommand::F21 { a, b, c, x, order, json }) => {
            check_order(order)?;
            let s = f21_series(&a, &b, &c, order).map_err(usage)?;
            print_value(&s, &x, json);
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval(EvalCommand::Qphi { alpha, beta, gamma, q, x, order, json }) => {
            check_order(order)?;
            let qp = QParam::new(q, alpha, beta, gamma).map_err(usage)?;
            let s = q2phi1_series(&qp, order).map_err(usage)?;
            let s = TruncatedSeries::new(Rational::from_integer(0.into()), s.coeffs().to_vec(), order);
            print_value(&s, &x, json);
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle(OracleCommand::Agm { x, order, json }) => {
            check_order(order)?;
            let r = agm_comparison(x, order).map_err(usage)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r).expect("comparison serializes"));
            } else {
                println!("M(x) = {:.17}", r.m);
                println!("1/M(x) = {:.17}", r.inv_m);
                println!("2F1(1/2,1/2;1;1-x^2) = {:.17}", r.f21);
                println!("|F*M - 1| = {:.3e}", r.residual);
                if r.divergence_warning {
                    println!("warning: series evaluated outside its disk of convergence");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn prepare(flags: &VerifyFlags) -> Result<(Registry, VerifyOptions), ExitCode> {
    check_order(flags.order)?;
    if flags.samples == 0 {
        return Err(usage("--samples must be at least 1"));
    }
    let reg = load_registry(flags.registry.as_ref())?;
    let opts = VerifyOptions {
        order: flags.order,
        samples: flags.samples,
        seed: flags.seed,
        timings: !flags.no_timings,
    };
    Ok((reg, opts))
}

fn emit(reports: Vec<VerificationReport>, json: bool, summary: bool) -> ExitCode {
    if json {
        println!("{}", serde_json::to_string_pretty(&reports).expect("reports serialize"));
    } else {
        let body: Vec<String> = reports.iter().map(|r| r.to_string()).collect();
        if !body.is_empty() {
            println!("{}", body.join("\n\n"));
        }
        if summary {
            let count = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
            println!(
                "\n{} formulas: {} proved, {} series_only, {} failed",
                reports.len(),
                count(Verdict::Proved),
                count(Verdict::SeriesOnly),
                count(Verdict::Failed)
            );
        }
    }
    if reports.iter().all(|r| r.verdict.is_pass()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_value(s: &TruncatedSeries, x: &Rational, json: bool) {
    let exact = s.eval_exact(x);
    let fx = x.to_f64().unwrap_or(f64::NAN);
    let float = s.eval_float(fx);
    if json {
        let v = serde_json::json!({
            "order": s.order(),
            "exact": exact.as_ref().map(|e| e.to_string()),
            "float": float.value,
            "divergence_warning": float.divergence_warning,
        });
        println!("{}", serde_json::to_string_pretty(&v).expect("value serializes"));
    } else {
        match exact {
            Some(e) => println!("exact: {}", e),
            None => println!("exact: unavailable"),
        }
        println!("float: {:.17}", float.value);
        if float.divergence_warning {
            println!("warning: |x| >= 1, truncated series outside its disk of convergence");
        }
    }
}
