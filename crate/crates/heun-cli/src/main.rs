//! Command-line surface: case classification, phase sweeps, eigenvalue
//! search, method comparison, and eigenfunction tabulation, emitting
//! plot-ready CSV/TSV with a reproducibility metadata header.
//!
//! Exit codes: 0 success, 2 bad input, 3 search failure, 4 numerical
//! failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use heun_core::{
    cfrac, classify_case_cfg, frobenius, model::ModeParams, monodromy, oracle, phase_diff_mod_pi,
    phase_mod_pi, wkb, CaseTag, Config,
};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "heun", version, about = "Scattering phases of the radial confluent Heun equation on Eguchi-Hanson space: WKB, continued-fraction/Frobenius, and direct integration")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum EfMethod {
    Wkb,
    Frobenius,
    Oracle,
}

#[derive(Args)]
struct Knobs {
    /// Continued-fraction stationarity tolerance
    #[arg(long = "tol-cf")]
    tol_cf: Option<f64>,
    /// Eigenvalue bisection tolerance (relative)
    #[arg(long = "tol-beta")]
    tol_beta: Option<f64>,
    /// ODE integrator local-error tolerance
    #[arg(long = "tol-ode")]
    tol_ode: Option<f64>,
    /// Far-field fit residual tolerance
    #[arg(long = "tol-fit")]
    tol_fit: Option<f64>,
    /// Adaptive quadrature subdivision budget
    #[arg(long = "quad-limit")]
    quad_limit: Option<usize>,
}

impl Knobs {
    fn config(&self) -> Result<Config, String> {
        let mut cfg = Config::default();
        if let Some(v) = self.tol_cf {
            cfg.cf_tol = v;
        }
        if let Some(v) = self.tol_beta {
            cfg.beta_tol = v;
        }
        if let Some(v) = self.tol_ode {
            cfg.ode_tol = v;
        }
        if let Some(v) = self.tol_fit {
            cfg.fit_tol = v;
        }
        if let Some(v) = self.quad_limit {
            cfg.quad_max_subdiv = v;
        }
        for (name, v) in [
            ("tol-cf", cfg.cf_tol),
            ("tol-beta", cfg.beta_tol),
            ("tol-ode", cfg.ode_tol),
            ("tol-fit", cfg.fit_tol),
        ] {
            if !(v > 0.0) {
                return Err(format!("--{name} must be positive"));
            }
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct Output {
    /// Write the CSV here (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the WKB case of a mode and print its transform data
    Classify {
        #[arg(long)]
        j: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        knobs: Knobs,
    },
    /// Sweep the WKB phase and error bound over a beta grid
    WkbSweep {
        #[arg(long)]
        j: u32,
        #[arg(long)]
        q: u32,
        #[arg(long = "beta-min", default_value_t = 0.5)]
        beta_min: f64,
        #[arg(long = "beta-max", default_value_t = 120.0)]
        beta_max: f64,
        #[arg(long, default_value_t = 240)]
        steps: usize,
        #[command(flatten)]
        knobs: Knobs,
        #[command(flatten)]
        output: Output,
    },
    /// Certified eigenvalues from the continued fraction, with monodromy data
    Eigenvalues {
        #[arg(long)]
        j: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        count: usize,
        #[arg(long = "beta-max")]
        beta_max: Option<f64>,
        #[command(flatten)]
        knobs: Knobs,
        #[command(flatten)]
        output: Output,
    },
    /// Compare WKB, exact (Frobenius/monodromy), and direct-integration
    /// phases at certified eigenvalues
    Compare {
        #[arg(long)]
        j: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        count: usize,
        #[arg(long = "beta-max")]
        beta_max: Option<f64>,
        #[command(flatten)]
        knobs: Knobs,
        #[command(flatten)]
        output: Output,
    },
    /// Tabulate an eigenfunction approximation on a z grid
    Eigenfunction {
        #[arg(long)]
        j: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        beta: f64,
        #[arg(long, value_enum)]
        method: EfMethod,
        #[arg(long = "z-min", default_value_t = 1.001)]
        z_min: f64,
        #[arg(long = "z-max", default_value_t = 6.0)]
        z_max: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[command(flatten)]
        knobs: Knobs,
        #[command(flatten)]
        output: Output,
    },
}

const EXIT_BAD_INPUT: u8 = 2;
const EXIT_SEARCH: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

fn fail(code: u8, msg: String) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var("HEUN_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        });
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

/// CSV writer with the `# key=value` metadata block.
struct Sink {
    out: Box<dyn Write>,
    sep: char,
}

impl Sink {
    fn new(output: &Output, meta: &[(&str, String)]) -> std::io::Result<Sink> {
        let out: Box<dyn Write> = match &output.out {
            Some(path) => Box::new(std::io::BufWriter::new(std::fs::File::create(path)?)),
            None => Box::new(std::io::stdout().lock()),
        };
        let mut sink = Sink {
            out,
            sep: match output.format {
                Format::Csv => ',',
                Format::Tsv => '\t',
            },
        };
        sink.meta("version", env!("CARGO_PKG_VERSION"))?;
        for (k, v) in meta {
            sink.meta(k, v)?;
        }
        Ok(sink)
    }

    fn meta(&mut self, k: &str, v: &str) -> std::io::Result<()> {
        writeln!(self.out, "# {k}={v}")
    }

    fn row(&mut self, fields: &[String]) -> std::io::Result<()> {
        writeln!(self.out, "{}", fields.join(&self.sep.to_string()))
    }
}

fn fmt(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:.12e}")
    }
}

fn knob_meta(cfg: &Config) -> Vec<(&'static str, String)> {
    vec![
        ("tol_cf", format!("{:e}", cfg.cf_tol)),
        ("tol_beta", format!("{:e}", cfg.beta_tol)),
        ("tol_ode", format!("{:e}", cfg.ode_tol)),
        ("tol_fit", format!("{:e}", cfg.fit_tol)),
        ("quad_limit", cfg.quad_max_subdiv.to_string()),
    ]
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => fail(EXIT_NUMERICAL, e.to_string()),
    }
}

fn run(cli: Cli) -> std::io::Result<ExitCode> {
    match cli.cmd {
        Cmd::Classify { j, q, beta, knobs } => {
            let cfg = match knobs.config() {
                Ok(c) => c,
                Err(e) => return Ok(fail(EXIT_BAD_INPUT, e)),
            };
            let p = match ModeParams::new(j, q, beta) {
                Ok(p) => p,
                Err(e) => return Ok(fail(EXIT_BAD_INPUT, e.to_string())),
            };
            let case = classify_case_cfg(&p, &cfg);
            let mut line = format!("{} a={} b={}", case.tag, p.a, p.b);
            if let Some(z0) = case.z0 {
                if case.tag == CaseTag::I {
                    line.push_str(&format!(" z0={z0:.6}"));
                }
            }
            if let Some(alpha) = case.alpha {
                line.push_str(&format!(" alpha={alpha:.6}"));
            }
            println!("{line}");
            Ok(ExitCode::SUCCESS)
        }

        Cmd::WkbSweep {
            j,
            q,
            beta_min,
            beta_max,
            steps,
            knobs,
            output,
        } => {
            let cfg = match knobs.config() {
                Ok(c) => c,
                Err(e) => return Ok(fail(EXIT_BAD_INPUT, e)),
            };
            if !(beta_min > 0.0 && beta_max > beta_min && steps >= 2) {
                return Ok(fail(
                    EXIT_BAD_INPUT,
                    "need 0 < beta-min < beta-max and steps >= 2".into(),
                ));
            }
            if ModeParams::new(j, q, beta_min).is_err() {
                return Ok(fail(EXIT_BAD_INPUT, format!("invalid quantum numbers j={j}, q={q}")));
            }
            let betas: Vec<f64> = (0..steps)
                .map(|i| beta_min + (beta_max - beta_min) * i as f64 / (steps - 1) as f64)
                .collect();
            let pool = thread_pool();
            let rows: Vec<(f64, Result<(wkb::PhaseEstimate, CaseTag), String>)> =
                pool.install(|| {
                    use rayon::prelude::*;
                    betas
                        .par_iter()
                        .map(|&beta| {
                            let p = ModeParams::new(j, q, beta).unwrap();
                            let tag = classify_case_cfg(&p, &cfg).tag;
                            let r = wkb::wkb_phase(&p, &cfg)
                                .map(|e| (e, tag))
                                .map_err(|e| e.to_string());
                            (beta, r)
                        })
                        .collect()
                });
            let mut meta = vec![
                ("command", "wkb-sweep".to_string()),
                ("j", j.to_string()),
                ("q", q.to_string()),
                ("beta_min", fmt(beta_min)),
                ("beta_max", fmt(beta_max)),
                ("steps", steps.to_string()),
            ];
            meta.extend(knob_meta(&cfg));
            let mut sink = Sink::new(&output, &meta)?;
            sink.row(&["beta", "delta_wkb", "err_bound", "case", "status"].map(String::from))?;
            for (beta, r) in rows {
                match r {
                    Ok((e, tag)) => sink.row(&[
                        fmt(beta),
                        fmt(e.delta),
                        fmt(e.err_bound),
                        tag.to_string(),
                        "ok".into(),
                    ])?,
                    Err(msg) => sink.row(&[
                        fmt(beta),
                        "nan".into(),
                        "nan".into(),
                        "-".into(),
                        msg.replace([',', '\n'], ";"),
                    ])?,
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Eigenvalues {
            j,
            q,
            count,
            beta_max,
            knobs,
            output,
        } => {
            let cfg = match knobs.config() {
                Ok(c) => c,
                Err(e) => return Ok(fail(EXIT_BAD_INPUT, e)),
            };
            if count < 1 || ModeParams::new(j, q, 1.0).is_err() {
                return Ok(fail(EXIT_BAD_INPUT, "need count >= 1 and q <= j".into()));
            }
            let list = match cfrac::find_eigenvalues(j, q, count, beta_max, &cfg) {
                Ok(l) => l,
                Err(e @ cfrac::CfracError::InsufficientRange { .. }) => {
                    return Ok(fail(EXIT_SEARCH, e.to_string()))
                }
                Err(e) => return Ok(fail(EXIT_NUMERICAL, e.to_string())),
            };
            let pool = thread_pool();
            let p_ests: Vec<f64> = pool.install(|| {
                use rayon::prelude::*;
                list.betas
                    .par_iter()
                    .map(|&b| {
                        let p = ModeParams::new(j, q, b).unwrap();
                        monodromy::compute_p(&p, &cfg)
                            .map(|c| c.p_est)
                            .unwrap_or(f64::NAN)
                    })
                    .collect()
            });
            let mut meta = vec![
                ("command", "eigenvalues".to_string()),
                ("j", j.to_string()),
                ("q", q.to_string()),
                ("count", count.to_string()),
            ];
            meta.extend(knob_meta(&cfg));
            let mut sink = Sink::new(&output, &meta)?;
            sink.row(
                &["n", "beta_n", "residual_M", "minimal_ratio", "P_est", "delta_exact_mod_pi"]
                    .map(String::from),
            )?;
            for (i, cert) in list.certified.iter().enumerate() {
                let p = ModeParams::new(j, q, cert.beta).unwrap();
                let exact = monodromy::exact_phase_at_eigenvalue(&p, i + 1);
                sink.row(&[
                    (i + 1).to_string(),
                    fmt(cert.beta),
                    fmt(cert.residual),
                    fmt(cert.minimal.ratio_min),
                    fmt(p_ests[i]),
                    fmt(phase_mod_pi(exact.delta)),
                ])?;
            }
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Compare {
            j,
            q,
            count,
            beta_max,
            knobs,
            output,
        } => {
            let cfg = match knobs.config() {
                Ok(c) => c,
                Err(e) => return Ok(fail(EXIT_BAD_INPUT, e)),
            };
            if count < 1 || ModeParams::new(j, q, 1.0).is_err() {
                return Ok(fail(EXIT_BAD_INPUT, "need count >= 1 and q <= j".into()));
            }
            let list = match cfrac::find_eigenvalues(j, q, count, beta_max, &cfg) {
                Ok(l) => l,
                Err(e @ cfrac::CfracError::InsufficientRange { .. }) => {
                    return Ok(fail(EXIT_SEARCH, e.to_string()))
                }
                Err(e) => return Ok(fail(EXIT_NUMERICAL, e.to_string())),
            };
            struct Row {
                beta: f64,
                tag: CaseTag,
                wkb: wkb::PhaseEstimate,
                exact: f64,
                oracle: f64,
            }
            let pool = thread_pool();
            let rows: Vec<Result<Row, String>> = pool.install(|| {
                use rayon::prelude::*;
                list.betas
                    .par_iter()
                    .enumerate()
                    .map(|(i, &b)| {
                        let p = ModeParams::new(j, q, b).unwrap();
                        let tag = classify_case_cfg(&p, &cfg).tag;
                        let w = wkb::wkb_phase(&p, &cfg).map_err(|e| e.to_string())?;
                        let exact = monodromy::exact_phase_at_eigenvalue(&p, i + 1).delta;
                        let o = oracle::oracle_phase(&p, &cfg).map_err(|e| e.to_string())?;
                        Ok(Row {
                            beta: b,
                            tag,
                            wkb: w,
                            exact,
                            oracle: o.delta,
                        })
                    })
                    .collect()
            });
            let mut meta = vec![
                ("command", "compare".to_string()),
                ("j", j.to_string()),
                ("q", q.to_string()),
                ("count", count.to_string()),
            ];
            meta.extend(knob_meta(&cfg));
            let mut sink = Sink::new(&output, &meta)?;
            sink.row(
                &[
                    "n",
                    "beta_n",
                    "case",
                    "delta_wkb",
                    "delta_exact",
                    "diff_mod_pi",
                    "err_bound",
                    "oracle_delta",
                    "oracle_diff",
                ]
                .map(String::from),
            )?;
            let mut max_diff = 0.0f64;
            let mut violations = 0usize;
            for (i, row) in rows.iter().enumerate() {
                let row = match row {
                    Ok(r) => r,
                    Err(e) => return Ok(fail(EXIT_NUMERICAL, e.clone())),
                };
                let diff = phase_diff_mod_pi(row.wkb.delta, row.exact);
                let odiff = phase_diff_mod_pi(row.wkb.delta, row.oracle);
                max_diff = max_diff.max(diff);
                if diff > row.wkb.err_bound {
                    violations += 1;
                }
                sink.row(&[
                    (i + 1).to_string(),
                    fmt(row.beta),
                    row.tag.to_string(),
                    fmt(row.wkb.delta),
                    fmt(row.exact),
                    fmt(diff),
                    fmt(row.wkb.err_bound),
                    fmt(row.oracle),
                    fmt(odiff),
                ])?;
            }
            drop(sink);
            if output.out.is_some() {
                println!(
                    "compare ({j},{q}) over {count} eigenvalues: max|diff_mod_pi| = {max_diff:.6}, bound violations = {violations}"
                );
            }
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Eigenfunction {
            j,
            q,
            beta,
            method,
            z_min,
            z_max,
            steps,
            knobs,
            output,
        } => {
            let cfg = match knobs.config() {
                Ok(c) => c,
                Err(e) => return Ok(fail(EXIT_BAD_INPUT, e)),
            };
            let p = match ModeParams::new(j, q, beta) {
                Ok(p) => p,
                Err(e) => return Ok(fail(EXIT_BAD_INPUT, e.to_string())),
            };
            if !(z_min > 1.0 && z_max > z_min && steps >= 2) {
                return Ok(fail(
                    EXIT_BAD_INPUT,
                    "need 1 < z-min < z-max and steps >= 2".into(),
                ));
            }
            let zs: Vec<f64> = (0..steps)
                .map(|i| z_min + (z_max - z_min) * i as f64 / (steps - 1) as f64)
                .collect();
            let method_name = match method {
                EfMethod::Wkb => "wkb",
                EfMethod::Frobenius => "frobenius",
                EfMethod::Oracle => "oracle",
            };
            let mut meta = vec![
                ("command", "eigenfunction".to_string()),
                ("j", j.to_string()),
                ("q", q.to_string()),
                ("beta", fmt(beta)),
                ("method", method_name.to_string()),
            ];
            meta.extend(knob_meta(&cfg));

            // columns: z, A (wkb adds zeta)
            match method {
                EfMethod::Wkb => {
                    let pool = thread_pool();
                    let vals: Vec<Result<(f64, f64), String>> = pool.install(|| {
                        use rayon::prelude::*;
                        zs.par_iter()
                            .map(|&z| {
                                let a = wkb::eigenfunction_wkb(&p, z, &cfg)
                                    .map_err(|e| e.to_string())?;
                                let zeta = wkb::liouville_zeta(&p, z, &cfg)
                                    .map_err(|e| e.to_string())?;
                                Ok((a, zeta))
                            })
                            .collect()
                    });
                    let mut sink = Sink::new(&output, &meta)?;
                    sink.row(&["z", "A", "zeta"].map(String::from))?;
                    for (z, v) in zs.iter().zip(vals) {
                        match v {
                            Ok((a, zeta)) => sink.row(&[fmt(*z), fmt(a), fmt(zeta)])?,
                            Err(e) => return Ok(fail(EXIT_NUMERICAL, e)),
                        }
                    }
                }
                EfMethod::Frobenius => {
                    // outside the unit disk in zeta the series only holds at
                    // certified eigenvalues
                    let zeta_max = 0.5 * (z_max - 1.0);
                    if zeta_max >= 1.0 {
                        let d = frobenius::minimality_diagnostic(&p, cfg.frobenius_k);
                        if !d.minimal_flag {
                            return Ok(fail(
                                EXIT_BAD_INPUT,
                                format!(
                                    "frobenius method outside its disk (zeta_max = {zeta_max:.3}) requires a certified eigenvalue"
                                ),
                            ));
                        }
                    }
                    let mut sink = Sink::new(&output, &meta)?;
                    sink.row(&["z", "A"].map(String::from))?;
                    for &z in &zs {
                        match frobenius::series_a(&p, z, 600) {
                            Ok(a) => sink.row(&[fmt(z), fmt(a)])?,
                            Err(e) => return Ok(fail(EXIT_NUMERICAL, e.to_string())),
                        }
                    }
                }
                EfMethod::Oracle => {
                    let zetas: Vec<f64> = zs.iter().map(|z| 0.5 * (z - 1.0)).collect();
                    let traj = match oracle::integrate_regular(&p, &zetas, cfg.ode_tol, &cfg) {
                        Ok(t) => t,
                        Err(e) => return Ok(fail(EXIT_NUMERICAL, e.to_string())),
                    };
                    let samples = oracle::samples_from_trajectory(&traj, &p);
                    let mut sink = Sink::new(&output, &meta)?;
                    sink.row(&["z", "A"].map(String::from))?;
                    for s in samples {
                        sink.row(&[fmt(s.z), fmt(s.a)])?;
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
