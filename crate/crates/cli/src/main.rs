//! `dampstar`: verification suites, spectra, state samples, star-exponential
//! comparisons and dissipation tables for the damped oscillator.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use dampstar::dissipation::{schedule_evolve, transition_probabilities, GammaSchedule, OmegaTau};
use dampstar::eigen::{energy_level, EigenLabel, Picture, MAX_LEVEL};
use dampstar::star::{star_exp_closed, star_exp_series};
use dampstar::verify::{grid, run_suite, Suite};
use dampstar::{Error, PhysParams, ProductKind};

#[derive(Parser, Debug)]
#[command(name = "dampstar", version, about = "Star-product toolkit for the damped harmonic oscillator")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Config {
    /// Mass
    #[arg(long, global = true, default_value_t = 1.0, allow_hyphen_values = true, value_parser = positive)]
    m: f64,
    /// Angular frequency ω
    #[arg(long, global = true, default_value_t = 1.0, allow_hyphen_values = true, value_parser = positive)]
    omega: f64,
    /// Reduced Planck constant
    #[arg(long, global = true, default_value_t = 1.0, allow_hyphen_values = true, value_parser = positive)]
    hbar: f64,
    /// Write output to this file instead of standard output
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run verification suites and report the worst error of every check
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Damping ratios γ/ω, comma separated
        #[arg(long, value_delimiter = ',', default_value = "0", allow_hyphen_values = true, value_parser = ratio)]
        gamma: Vec<f64>,
    },
    /// Complex spectrum E_n in units of ħω
    Spectrum {
        /// Damping ratio γ/ω
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true, value_parser = ratio)]
        gamma: f64,
        #[arg(long, default_value_t = 5, value_parser = level)]
        n_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Sample an eigenstate or projector on a square phase-space grid
    States {
        #[arg(long, value_parser = level)]
        n: u32,
        /// Damping ratio γ/ω
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true, value_parser = ratio)]
        gamma: f64,
        /// Points per axis
        #[arg(long, default_value_t = 11, value_parser = clap::value_parser!(u32).range(1..=1001))]
        grid: u32,
        /// Half-width of the grid in oscillator units
        #[arg(long, default_value_t = 3.0, value_parser = positive)]
        extent: f64,
        #[arg(long, value_enum, default_value_t = PictureArg::Schrodinger)]
        picture: PictureArg,
    },
    /// Compare the truncated star-exponential series with its closed form
    Starexp {
        /// Damping ratio γ/ω
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true, value_parser = ratio)]
        gamma: f64,
        /// Times ωt, comma separated; multiples of pi such as `pi/2` are accepted
        #[arg(long = "t", value_delimiter = ',', required = true, allow_hyphen_values = true, value_parser = omega_time)]
        t: Vec<OmegaTau>,
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(0..=40))]
        terms: u32,
        /// Points per axis
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..=101))]
        grid: u32,
        /// Half-width of the grid in oscillator units
        #[arg(long, default_value_t = 1.0, value_parser = positive)]
        extent: f64,
    },
    /// Transition probabilities after damping is switched on for a time τ
    Transition {
        /// Initial levels, comma separated
        #[arg(long, value_delimiter = ',', conflicts_with = "n_max", value_parser = level)]
        n: Vec<u32>,
        /// Sweep every initial level 0..=n-max
        #[arg(long, value_parser = level)]
        n_max: Option<u32>,
        /// Damping ratios γ/ω, comma separated
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true, value_parser = ratio)]
        gamma: Vec<f64>,
        /// Durations ωτ, comma separated; multiples of pi such as `pi/2` are accepted
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true, value_parser = omega_time)]
        tau: Vec<OmegaTau>,
    },
    /// Piecewise-constant damping schedule
    Schedule {
        #[arg(long, value_parser = level)]
        n: u32,
        /// Segments `γ/ω:ωduration`, comma separated, e.g. `0.5:1.0,0:2.0`
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true, value_parser = segment)]
        segments: Vec<(f64, f64)>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SuiteArg {
    Algebra,
    Spectra,
    Oracle,
    Dissipation,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Algebra => Suite::Algebra,
            SuiteArg::Spectra => Suite::Spectra,
            SuiteArg::Oracle => Suite::Oracle,
            SuiteArg::Dissipation => Suite::Dissipation,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PictureArg {
    Schrodinger,
    Heisenberg,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive and finite, got {s}"))
    }
}

fn ratio(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("damping ratio must be ≥ 0, got {s}"))
    }
}

fn level(s: &str) -> Result<u32, String> {
    let v: u32 = s.parse().map_err(|_| format!("`{s}` is not a non-negative integer"))?;
    if v <= MAX_LEVEL {
        Ok(v)
    } else {
        Err(format!("level must be at most {MAX_LEVEL}, got {s}"))
    }
}

fn omega_time(s: &str) -> Result<OmegaTau, String> {
    s.parse()
}

fn segment(s: &str) -> Result<(f64, f64), String> {
    let (g, d) = s.split_once(':').ok_or_else(|| format!("segment `{s}` is not `gamma:duration`"))?;
    let g = ratio(g)?;
    let d = positive(d).map_err(|e| format!("segment duration {e}"))?;
    Ok((g, d))
}

enum Failure {
    Usage(String),
    Domain(String),
    Verification,
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn domain(context: String) -> impl FnOnce(Error) -> Failure {
    move |e| match e {
        Error::InvalidParams(m) | Error::InvalidSchedule(m) => Failure::Usage(m),
        other => Failure::Domain(format!("{context}: {other}")),
    }
}

fn params(config: &Config, gamma_over_omega: f64) -> Result<PhysParams, Failure> {
    PhysParams::new(config.m, config.omega, config.hbar, gamma_over_omega * config.omega)
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn fmt_f(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Serialize)]
struct SpectrumEntry {
    n: u32,
    re: f64,
    im: f64,
    units: &'static str,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = cli.config;
    let mut out: Box<dyn Write> = match &config.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let result = dispatch(&config, cli.command, &mut out);
    out.flush()?;
    result
}

fn dispatch(config: &Config, command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Verify { suite, gamma } => {
            let mut all_passed = true;
            for g in gamma {
                let p = params(config, g)?;
                let name = suite.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default();
                writeln!(out, "# suite={name} gamma_over_omega={g}")?;
                let checks = run_suite(suite.into(), &p);
                let failed = checks.iter().filter(|c| !c.passed).count();
                for c in &checks {
                    writeln!(out, "{c}")?;
                }
                writeln!(out, "# {} checks, {} failed", checks.len(), failed)?;
                all_passed &= failed == 0;
            }
            if all_passed {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Spectrum { gamma, n_max, format } => {
            let kind = ProductKind::gamma(params(config, gamma)?);
            let entries: Vec<_> = (0..=n_max)
                .map(|n| {
                    let e = energy_level(&kind, n).value;
                    SpectrumEntry { n, re: e.re, im: e.im, units: "hbar_omega" }
                })
                .collect();
            match format {
                Format::Json => {
                    serde_json::to_writer_pretty(&mut *out, &entries).map_err(io::Error::from)?;
                    writeln!(out)?;
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(out);
                    w.write_record(["n", "re", "im", "units"])?;
                    for e in &entries {
                        w.write_record([e.n.to_string(), fmt_f(e.re), fmt_f(e.im), e.units.into()])?;
                    }
                    w.flush()?;
                }
            }
            Ok(())
        }
        Command::States { n, gamma, grid: side, extent, picture } => {
            let p = params(config, gamma)?;
            let picture = match picture {
                PictureArg::Schrodinger => Picture::Schrodinger,
                PictureArg::Heisenberg => Picture::Heisenberg,
            };
            let symbol = EigenLabel::new(n, picture, ProductKind::gamma(p))
                .and_then(|l| l.symbol())
                .map_err(domain(format!("n={n}")))?;
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["q", "p", "re", "im"])?;
            for (q, pp) in grid(&p, side as usize, extent) {
                let v = symbol.eval_real(q, pp);
                w.write_record([fmt_f(q), fmt_f(pp), fmt_f(v.re), fmt_f(v.im)])?;
            }
            w.flush()?;
            Ok(())
        }
        Command::Starexp { gamma, t, terms, grid: side, extent } => {
            let p = params(config, gamma)?;
            let kind = ProductKind::gamma(p);
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["t", "q", "p", "re_series", "im_series", "re_closed", "im_closed", "abs_err"])?;
            for wt in t {
                let time = Complex64::from(wt.value() / p.omega);
                let ctx = format!("t={wt}");
                let closed = star_exp_closed(&kind, time).map_err(domain(ctx.clone()))?;
                let series = star_exp_series(&kind, time, terms).map_err(domain(ctx))?;
                for (q, pp) in grid(&p, side as usize, extent) {
                    let (s, c) = (series.eval_real(q, pp), closed.eval_real(q, pp));
                    w.write_record([
                        fmt_f(wt.value()),
                        fmt_f(q),
                        fmt_f(pp),
                        fmt_f(s.re),
                        fmt_f(s.im),
                        fmt_f(c.re),
                        fmt_f(c.im),
                        fmt_f((s - c).norm()),
                    ])?;
                }
            }
            w.flush()?;
            Ok(())
        }
        Command::Transition { n, n_max, gamma, tau } => {
            let levels: Vec<u32> = match n_max {
                Some(top) => (0..=top).collect(),
                None if n.is_empty() => return Err(Failure::Usage("one of --n or --n-max is required".into())),
                None => n,
            };
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "n",
                "gamma_over_omega",
                "omega_tau",
                "k",
                "level",
                "prob",
                "expected_energy_over_hbar_omega",
                "norm_N",
            ])?;
            for &lvl in &levels {
                for &g in &gamma {
                    let p = params(config, g)?;
                    for &wt in &tau {
                        let t = transition_probabilities(lvl, wt, &p).map_err(domain(format!("n={lvl} tau={wt}")))?;
                        for &(k, l, prob) in &t.probabilities {
                            w.write_record([
                                lvl.to_string(),
                                fmt_f(g),
                                fmt_f(wt.value()),
                                k.to_string(),
                                l.to_string(),
                                fmt_f(prob),
                                fmt_f(t.energy),
                                fmt_f(t.norm),
                            ])?;
                        }
                    }
                }
            }
            w.flush()?;
            Ok(())
        }
        Command::Schedule { n, segments } => {
            let p = params(config, 0.0)?;
            let physical = segments.iter().map(|&(g, d)| (g * p.omega, d / p.omega)).collect();
            let schedule = GammaSchedule::new(physical).map_err(domain("schedule".into()))?;
            let run = schedule_evolve(n, &schedule, &p).map_err(domain(format!("n={n}")))?;
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["segment_index", "gamma_over_omega", "omega_duration", "k", "level", "prob"])?;
            for (i, (seg, &(g, d))) in run.iter().zip(&segments).enumerate() {
                for (l, prob) in seg.state.probabilities() {
                    w.write_record([
                        i.to_string(),
                        fmt_f(g),
                        fmt_f(d),
                        ((n - l) / 2).to_string(),
                        l.to_string(),
                        fmt_f(prob),
                    ])?;
                }
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}\n\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("domain error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("i/o error: {e}");
            ExitCode::from(2)
        }
    }
}
