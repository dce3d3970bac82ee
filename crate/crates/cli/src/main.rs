//! Command-line front end: evaluate tangle files, run the figure-eight
//! forms, emit volume-convergence CSV, and report the saddle, max-term,
//! and ratio analyses.
//!
//! Exit codes: 0 success, 1 computation failure (parse error, inconsistent
//! diagram, overflow), 2 usage error.

mod format;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use format::{fmt_complex, fmt_f64, write_csv, CsvTable};
use jonesvol_core::asymptotic::{
    ekholm_report, extrapolate_volume, saddle_solve, summand_ratio_analysis, volume_sequence,
};
use jonesvol_core::fig8::{fig8_double_sum, fig8_single_sum, le_colored_jones};
use jonesvol_core::special::lobachevsky;
use jonesvol_core::{evaluate, parse_tangle, validate, RootContext};

#[derive(Parser)]
#[command(name = "jonesvol", version, about = "Colored Jones state sums and volume asymptotics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the state sum of a tangle file at q = exp(2πi/N)
    Jones {
        #[arg(long)]
        tangle: String,
        #[arg(long)]
        n: usize,
        /// Endpoint label (the result does not depend on it)
        #[arg(long, default_value_t = 0)]
        endpoint: usize,
    },
    /// Figure-eight closed forms
    Fig8 {
        #[arg(long)]
        n: usize,
        /// double | single | le
        #[arg(long, default_value = "single")]
        form: String,
        /// evaluation point for --form le, as re,im
        #[arg(long)]
        t: Option<String>,
    },
    /// Volume sequence a_N = 2π log J_N / N as CSV
    Volume {
        /// comma-separated list of N values
        #[arg(long = "n-list")]
        n_list: String,
        #[arg(long)]
        extrapolate: bool,
        /// output file, or - for stdout
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Max-term bounds g_{k*}² <= J_N <= N g_{k*}²
    Ekholm {
        #[arg(long)]
        n: usize,
    },
    /// Saddle-point route: hyperbolicity roots and Im F0
    Saddle,
    /// Difference-equation route: summand ratios and the designated max term
    Ratios {
        #[arg(long)]
        n: usize,
    },
    /// Lobachevsky function
    Lob {
        #[arg(long)]
        theta: f64,
    },
}

fn usage_err(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn comp_err(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Jones { tangle, n, endpoint } => {
            if n == 0 {
                return usage_err("--n must be at least 1");
            }
            let text = match fs::read_to_string(&tangle) {
                Ok(t) => t,
                Err(e) => return comp_err(format_args!("{tangle}: {e}")),
            };
            let diagram = match parse_tangle(&text) {
                Ok(d) => d,
                Err(e) => return comp_err(format_args!("{tangle}: {e}")),
            };
            let violations = validate(&diagram);
            if !violations.is_empty() {
                return comp_err(format_args!("{tangle}: {}", violations[0]));
            }
            if endpoint >= n {
                return usage_err("--endpoint must be less than --n");
            }
            let ctx = RootContext::new(n).expect("n >= 1");
            match evaluate(&diagram, &ctx, endpoint) {
                Ok(r) => {
                    println!("{}", fmt_complex(r.value));
                    ExitCode::SUCCESS
                }
                Err(e) => comp_err(e),
            }
        }
        Command::Fig8 { n, form, t } => {
            if n == 0 {
                return usage_err("--n must be at least 1");
            }
            match form.as_str() {
                "single" => {
                    println!("{}", fmt_f64(fig8_single_sum(n)));
                    ExitCode::SUCCESS
                }
                "double" => {
                    let ctx = RootContext::new(n).expect("n >= 1");
                    println!("{}", fmt_complex(fig8_double_sum(&ctx)));
                    ExitCode::SUCCESS
                }
                "le" => {
                    let t = match t {
                        Some(t) => t,
                        None => {
                            // default to the root of unity exp(2πi/N)
                            let a = 2.0 * std::f64::consts::PI / n as f64;
                            format!("{},{}", a.cos(), a.sin())
                        }
                    };
                    let z = match parse_complex(&t) {
                        Some(z) => z,
                        None => return usage_err("--t must be re,im"),
                    };
                    match le_colored_jones(n, z) {
                        Ok(v) => {
                            println!("{}", fmt_complex(v));
                            ExitCode::SUCCESS
                        }
                        Err(e) => comp_err(e),
                    }
                }
                other => usage_err(&format!("unknown form {other:?}")),
            }
        }
        Command::Volume { n_list, extrapolate, out } => {
            let mut ns = Vec::new();
            for tok in n_list.split(',') {
                match tok.trim().parse::<usize>() {
                    Ok(n) if n >= 1 => ns.push(n),
                    _ => return usage_err(&format!("bad N value {tok:?} in --n-list")),
                }
            }
            if ns.is_empty() {
                return usage_err("--n-list is empty");
            }
            let mut table = match volume_sequence(&ns) {
                Ok(t) => t,
                Err(e) => return comp_err(e),
            };
            let extrapolated = if extrapolate {
                match extrapolate_volume(&mut table) {
                    Ok(v) => Some((v, table.fit_residual.unwrap_or(0.0))),
                    Err(e) => return comp_err(e),
                }
            } else {
                None
            };
            let mut csv = CsvTable::new(&["n", "log_jn", "a_n"]);
            for r in &table.rows {
                csv.push_row(vec![r.n.to_string(), fmt_f64(r.log_jn), fmt_f64(r.a_n)])
                    .expect("rectangular");
            }
            let render_extra = |v: f64, res: f64| {
                format!("# extrapolated={} fit_residual={}\n", fmt_f64(v), fmt_f64(res))
            };
            if out == "-" {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                if write_csv(&csv, &mut lock).is_err() {
                    return comp_err("failed to write csv");
                }
                if let Some((v, res)) = extrapolated {
                    let _ = lock.write_all(render_extra(v, res).as_bytes());
                }
            } else {
                let mut buf = Vec::new();
                write_csv(&csv, &mut buf).expect("in-memory write");
                if let Err(e) = fs::write(&out, &buf) {
                    return comp_err(format_args!("{out}: {e}"));
                }
                if let Some((v, res)) = extrapolated {
                    print!("{}", render_extra(v, res));
                }
            }
            ExitCode::SUCCESS
        }
        Command::Ekholm { n } => {
            if n == 0 {
                return usage_err("--n must be at least 1");
            }
            match ekholm_report(n) {
                Ok(r) => {
                    println!(
                        "n={} k_star={} g2={} jn={} lower_ok={} upper_ok={} riemann_sum={}",
                        r.n,
                        r.k_star,
                        fmt_f64(r.g2),
                        fmt_f64(r.jn),
                        r.lower_ok,
                        r.upper_ok,
                        fmt_f64(r.riemann_sum)
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => comp_err(e),
            }
        }
        Command::Saddle => {
            let s = saddle_solve();
            println!("u1 = {}", fmt_complex(s.roots_u.0));
            println!("u2 = {}", fmt_complex(s.roots_u.1));
            println!("im_F0 = {}", fmt_f64(s.im_f0));
            println!(
                "trivial_residuals = {} {}",
                fmt_complex(s.trivial_residuals.0),
                fmt_complex(s.trivial_residuals.1)
            );
            ExitCode::SUCCESS
        }
        Command::Ratios { n } => match summand_ratio_analysis(n) {
            Ok(r) => {
                println!(
                    "n={} v_n={} log_f_max={} f_max={} argmax={},{} max_ratio_residual={}",
                    r.n,
                    fmt_f64(r.v_n),
                    fmt_f64(r.log_f_max),
                    fmt_f64(r.f_max),
                    r.argmax.0,
                    r.argmax.1,
                    fmt_f64(r.max_ratio_residual)
                );
                ExitCode::SUCCESS
            }
            Err(e) => {
                if n < 2 {
                    usage_err("--n must be at least 2")
                } else {
                    comp_err(e)
                }
            }
        },
        Command::Lob { theta } => match lobachevsky(theta) {
            Ok(v) => {
                println!("{}", fmt_f64(v));
                ExitCode::SUCCESS
            }
            Err(e) => comp_err(e),
        },
    }
}

fn parse_complex(s: &str) -> Option<Complex64> {
    let (re, im) = s.split_once(',')?;
    Some(Complex64::new(re.trim().parse().ok()?, im.trim().parse().ok()?))
}
