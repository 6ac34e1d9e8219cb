use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use parknap::bench::{bench_csv, doubling_growth, run_bench, BenchConfig};
use parknap::export::{rows_to_csv, sample_curves};
use parknap::generator::{generate, CapacityRule, GeneratorConfig};
use parknap::io::{instance_to_json, parse_instance, parse_schedule, rational_to_string, schedule_to_json};
use parknap::rational::parse_rational;
use parknap::{certify, solve_parametric, Epsilon, InnerMode, Instance, Rational};

/// Approximate solution schedules for knapsack problems whose profits are
/// affine in a parameter λ.
#[derive(Debug, Parser)]
#[command(name = "parknap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a seeded random instance as JSON.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        w_max: u64,
        #[arg(long, default_value_t = 10)]
        c_max: i64,
        /// Fixed capacity; default is half the total weight, rounded up.
        #[arg(long)]
        capacity: Option<u64>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Compute a schedule of (1 − ε)-approximate solutions.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        /// Approximation parameter as `num/den`.
        #[arg(long, value_parser = parse_epsilon)]
        eps: Epsilon,
        #[arg(long, default_value = "exact_inner", value_parser = parse_mode)]
        mode: InnerMode,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Check a schedule against the exact optimum (at most 20 items).
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
        /// Defaults to the ε stored in the schedule.
        #[arg(long, value_parser = parse_epsilon)]
        eps: Option<Epsilon>,
    },
    /// Sample schedule profit, φ and p* on an even λ grid as CSV.
    Export {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_lambda)]
        lambda_min: Rational,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_lambda)]
        lambda_max: Rational,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Sweep n ∈ {10, 20, 50, 100} × ε ∈ {1/2, 1/4, 1/10} and report
    /// interval counts and wall times.
    Bench {
        #[arg(long, default_value_t = 3)]
        seeds: u64,
        #[arg(long, default_value = "exact_inner", value_parser = parse_mode)]
        mode: InnerMode,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

fn parse_epsilon(text: &str) -> Result<Epsilon, String> {
    text.parse::<Epsilon>().map_err(|e| e.to_string())
}

fn parse_mode(text: &str) -> Result<InnerMode, String> {
    text.parse()
}

fn parse_lambda(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<Instance> {
    parse_instance(&read(path)?).with_context(|| format!("invalid instance {}", path.display()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate {
            n,
            seed,
            w_max,
            c_max,
            capacity,
            out,
        } => {
            let config = GeneratorConfig {
                n,
                seed,
                w_max,
                c_max,
                capacity: capacity.map_or(CapacityRule::HalfTotalWeight, CapacityRule::Fixed),
            };
            let inst = generate(&config)?;
            write_or_print(out.as_deref(), &instance_to_json(&inst))?;
        }
        Command::Solve {
            instance,
            eps,
            mode,
            out,
        } => {
            let inst = load_instance(&instance)?;
            let started = Instant::now();
            let schedule = solve_parametric(&inst, eps, mode)?;
            let wall = started.elapsed();
            write_or_print(Some(&out), &schedule_to_json(&schedule))?;
            println!(
                "n={} intervals={} wall_ms={:.3} mode={}",
                inst.len(),
                schedule.len(),
                wall.as_secs_f64() * 1000.0,
                mode
            );
        }
        Command::Verify {
            instance,
            schedule,
            eps,
        } => {
            let inst = load_instance(&instance)?;
            let parsed = parse_schedule(&read(&schedule)?, &inst)
                .with_context(|| format!("invalid schedule {}", schedule.display()))?;
            let eps = eps.unwrap_or(parsed.schedule.epsilon());
            let report = certify(&parsed.schedule, &inst, eps)?;
            for k in &parsed.profit_mismatches {
                println!("interval {k}: stored profit does not match its items");
            }
            for k in &report.infeasible_intervals {
                println!("interval {k}: solution exceeds the capacity");
            }
            if !report.violations.is_empty() {
                println!(
                    "{:>8}  {:>16}  {:>16}  {:>16}",
                    "interval", "lambda", "schedule", "p_star"
                );
                for v in &report.violations {
                    println!(
                        "{:>8}  {:>16}  {:>16}  {:>16}",
                        v.interval,
                        rational_to_string(&v.lambda),
                        rational_to_string(&v.schedule_profit),
                        rational_to_string(&v.optimum)
                    );
                }
            }
            let worst = report
                .worst_ratio
                .as_ref()
                .map_or_else(|| "n/a".to_owned(), rational_to_string);
            let ok = report.passed() && parsed.profit_mismatches.is_empty();
            println!(
                "{}: {} intervals, {} points checked, {} violations, worst ratio {}, eps {}",
                if ok { "PASS" } else { "FAIL" },
                parsed.schedule.len(),
                report.points_checked,
                report.violations.len(),
                worst,
                eps
            );
            if !ok {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Export {
            instance,
            schedule,
            lambda_min,
            lambda_max,
            samples,
            out,
        } => {
            let inst = load_instance(&instance)?;
            let parsed = parse_schedule(&read(&schedule)?, &inst)
                .with_context(|| format!("invalid schedule {}", schedule.display()))?;
            let rows = sample_curves(&inst, &parsed.schedule, &lambda_min, &lambda_max, samples)?;
            write_or_print(out.as_deref(), &rows_to_csv(&rows))?;
        }
        Command::Bench { seeds, mode, out } => {
            if seeds == 0 {
                bail!("need at least one seed");
            }
            let config = BenchConfig {
                seeds: (1..=seeds).collect(),
                mode,
                ..BenchConfig::default()
            };
            let rows = run_bench(&config, |r| {
                eprintln!(
                    "n={} eps={} seed={} intervals={} wall_ms={:.1}",
                    r.n,
                    r.epsilon,
                    r.seed,
                    r.intervals,
                    r.wall.as_secs_f64() * 1000.0
                )
            })?;
            write_or_print(out.as_deref(), &bench_csv(&rows))?;
            for g in doubling_growth(&rows) {
                eprintln!(
                    "growth eps={} n {}->{}: {:.3} (mean of {} seeds)",
                    g.epsilon, g.from_n, g.to_n, g.mean_ratio, g.seeds
                );
            }
            let over = rows.iter().filter(|r| !r.within_bound()).count();
            if over > 0 {
                eprintln!("{over} grid points exceed 16·n²/ε");
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
