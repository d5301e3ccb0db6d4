//! `qf`: band structures, Fibonacci scans and orbits as CSV or JSON.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O error, 3 numerical
//! divergence (rows up to the divergence are still written).

mod grid;
mod output;

use std::f64::consts::{PI, TAU};
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quasifloquet::floquet::{find_bands_for_ratio, is_in_band, kicked_half_trace};
use quasifloquet::free_group::fibonacci_word;
use quasifloquet::quasiperiodic::{
    band_overlap_scan, phase_orbit, FibonacciFamily, FibonacciKickedParams, GOLDEN_RATIO,
};
use quasifloquet::trace_map::{conserved_cubic, step, TraceTriple, ESCAPE_THRESHOLD};
use quasifloquet::{Generator, PhasePoint};

use grid::GridSpec;
use output::{Cell, Format, RowWriter};

/// Relative drift of the conserved cubic treated as loss of the orbit.
const TRACE_DRIFT_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "qf",
    version,
    about = "Floquet bands and Fibonacci-kicked oscillator dynamics"
)]
struct Cli {
    /// Output format
    #[arg(
        long,
        value_enum,
        global = true,
        env = "QF_DEFAULT_FORMAT",
        default_value = "csv"
    )]
    format: Format,
    /// Write to this file instead of standard output
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Half-trace of the kicked-oscillator monodromy over a grid of ωT
    Bands {
        /// Kick ratio u/2ω
        #[arg(long, value_parser = non_negative)]
        ratio: f64,
        /// ωT grid as start:stop:step
        #[arg(
            long,
            allow_hyphen_values = true,
            default_value = "0:12.566370614359172:0.01"
        )]
        range: GridSpec,
    },
    /// Bands and gaps with their edges and centers over [0, periods·2π]
    BandEdges {
        #[arg(long, value_parser = non_negative)]
        ratio: f64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=100))]
        periods: u32,
    },
    /// Band overlap, Nielsen invariant and commutative points of the T, τT family
    FibonacciScan {
        #[arg(long, default_value_t = 2.0, value_parser = non_negative)]
        u: f64,
        #[arg(long, default_value_t = 1.0, value_parser = positive)]
        omega: f64,
        #[arg(long, default_value_t = 1.0, value_parser = positive)]
        m: f64,
        /// Ratio T2/T1
        #[arg(long, default_value_t = GOLDEN_RATIO, value_parser = positive)]
        tau: f64,
        #[arg(long, allow_hyphen_values = true, default_value = "0:20:0.001")]
        range: GridSpec,
        /// Also flag the trivial commutative point ωT = 0
        #[arg(long)]
        include_zero: bool,
    },
    /// Phase-space orbit under the Fibonacci sequence of the two kicked intervals
    Orbit {
        #[arg(long, default_value_t = 2.0, value_parser = non_negative)]
        u: f64,
        #[arg(long, default_value_t = 1.0, value_parser = positive)]
        omega: f64,
        #[arg(long, default_value_t = 1.0, value_parser = positive)]
        m: f64,
        /// First interval; defaults to ωT1 = πτ
        #[arg(long, value_parser = non_negative)]
        t1: Option<f64>,
        /// Second interval; defaults to τ·T1
        #[arg(long, value_parser = non_negative)]
        t2: Option<f64>,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true, value_parser = finite)]
        x0: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true, value_parser = finite)]
        p0: f64,
        /// Number of letters
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(..=1_000_000))]
        n: u64,
    },
    /// Fibonacci words for 0..=n
    Words {
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(..=30))]
        n: u64,
    },
    /// Half-trace recursion (x, y, z) → (y, z, 2yz − x)
    TraceRec {
        #[arg(long, allow_hyphen_values = true, value_parser = finite)]
        x0: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = finite)]
        y0: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = finite)]
        z0: f64,
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(..=1_000_000))]
        n: u64,
    },
}

fn finite(s: &str) -> Result<f64, String> {
    s.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("`{s}` is not a finite number"))
}

fn non_negative(s: &str) -> Result<f64, String> {
    finite(s).and_then(|x| {
        if x >= 0.0 {
            Ok(x)
        } else {
            Err(format!("{x} is negative"))
        }
    })
}

fn positive(s: &str) -> Result<f64, String> {
    finite(s).and_then(|x| {
        if x > 0.0 {
            Ok(x)
        } else {
            Err(format!("{x} is not positive"))
        }
    })
}

enum Outcome {
    Complete,
    Diverged { step: usize, reason: String },
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<quasifloquet::Error> for Failure {
    fn from(e: quasifloquet::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let open =
        |header: Vec<&'static str>| RowWriter::open(cli.format, cli.output.as_deref(), header);
    match cli.command {
        Command::Bands { ratio, range } => {
            let mut out = open(vec!["beta", "half_trace", "in_band"])?;
            for beta in range.points() {
                let h = kicked_half_trace(ratio, beta);
                out.row(&[Cell::Num(beta), Cell::Num(h), Cell::Flag(is_in_band(h))])?;
            }
            out.finish()?;
        }
        Command::BandEdges { ratio, periods } => {
            let bands = find_bands_for_ratio(ratio, 0.0, periods as f64 * TAU)?;
            let mut out = open(vec!["kind", "lower", "center", "upper"])?;
            for b in bands {
                out.row(&[
                    Cell::Text(b.kind.to_string()),
                    Cell::Num(b.lower),
                    Cell::Num(b.center),
                    Cell::Num(b.upper),
                ])?;
            }
            out.finish()?;
        }
        Command::FibonacciScan {
            u,
            omega,
            m,
            tau,
            range,
            include_zero,
        } => {
            let family = FibonacciFamily::new(m, omega, u, tau)?;
            let records = band_overlap_scan(&family, &range.points(), include_zero)?;
            let mut out = open(vec![
                "omega_t",
                "invariant",
                "in_band_1",
                "in_band_2",
                "overlap",
                "commutative",
                "quasi_floquet",
            ])?;
            for r in records {
                out.row(&[
                    Cell::Num(r.omega_t),
                    Cell::Num(r.invariant),
                    Cell::Flag(r.in_band_1),
                    Cell::Flag(r.in_band_2),
                    Cell::Flag(r.overlap),
                    Cell::Flag(r.commutative),
                    Cell::Flag(r.quasi_floquet),
                ])?;
            }
            out.finish()?;
        }
        Command::Orbit {
            u,
            omega,
            m,
            t1,
            t2,
            x0,
            p0,
            n,
        } => {
            let t1 = t1.unwrap_or(PI * GOLDEN_RATIO / omega);
            let t2 = t2.unwrap_or(GOLDEN_RATIO * t1);
            let params = FibonacciKickedParams::new(m, omega, u, t1, t2)?;
            let (points, outcome) = match phase_orbit(&params, PhasePoint::new(x0, p0), n as usize)
            {
                Ok(points) => (points, Outcome::Complete),
                Err(e) => {
                    let reason = format!("|(x, p)| exceeded {:e}", e.threshold);
                    (
                        e.partial,
                        Outcome::Diverged {
                            step: e.step,
                            reason,
                        },
                    )
                }
            };
            let mut out = open(vec!["step", "letter", "x", "p", "q"])?;
            for pt in points {
                let letter = match pt.letter {
                    None => 0,
                    Some(Generator::Y1) => 1,
                    Some(Generator::Y2) => 2,
                };
                out.row(&[
                    Cell::Int(pt.step as i64),
                    Cell::Int(letter),
                    Cell::Num(pt.point.x),
                    Cell::Num(pt.point.p),
                    Cell::Num(pt.q),
                ])?;
            }
            out.finish()?;
            return Ok(outcome);
        }
        Command::Words { n } => {
            let mut out = open(vec!["n", "word", "length"])?;
            for k in 0..=n as usize {
                let w = fibonacci_word(k);
                out.row(&[
                    Cell::Int(k as i64),
                    Cell::Text(w.to_string()),
                    Cell::Int(w.len() as i64),
                ])?;
            }
            out.finish()?;
        }
        Command::TraceRec { x0, y0, z0, n } => {
            let mut out = open(vec!["step", "x", "y", "z", "invariant"])?;
            let mut t = TraceTriple::new(x0, y0, z0);
            let c0 = conserved_cubic(t);
            for k in 0..=n as usize {
                if t.is_escaped() {
                    out.finish()?;
                    let reason = format!("half-trace exceeded {ESCAPE_THRESHOLD:e}");
                    return Ok(Outcome::Diverged { step: k, reason });
                }
                let c = conserved_cubic(t);
                if (c - c0).abs() > TRACE_DRIFT_TOL * c0.abs().max(1.0) {
                    out.finish()?;
                    let reason = format!("conserved cubic drifted from {c0} to {c}");
                    return Ok(Outcome::Diverged { step: k, reason });
                }
                out.row(&[
                    Cell::Int(k as i64),
                    Cell::Num(t.x),
                    Cell::Num(t.y),
                    Cell::Num(t.z),
                    Cell::Num(c),
                ])?;
                t = step(t);
            }
            out.finish()?;
        }
    }
    Ok(Outcome::Complete)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Outcome::Complete) => ExitCode::SUCCESS,
        Ok(Outcome::Diverged { step, reason }) => {
            eprintln!("qf: diverged at step {step}: {reason}");
            ExitCode::from(3)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("qf: {msg}\n\nFor more information, try '--help'.");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("qf: {e}");
            ExitCode::from(2)
        }
    }
}
