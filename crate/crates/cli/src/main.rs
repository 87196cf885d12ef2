//! `hecke`: batch front end for hecke-core.

mod commands;
mod config;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hecke_core::Error;

use crate::config::Overrides;
use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "hecke", version, about = "Spectral exponential sums, zeta moments and their kernels")]
struct Cli {
    /// Spectral dataset (JSON lines, schema maass-v1).
    #[arg(long, global = true)]
    spectral: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// File of key=value overrides (quad.rel_tol, moment.a2, main.c1, ...).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for divisor-table caches.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Window {
    #[arg(long)]
    m: u8,
    #[arg(long)]
    k: f64,
    #[arg(long)]
    k2: f64,
    #[arg(long)]
    t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ZetaAlgo {
    Em,
    Rs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DivSide {
    Main,
    Theorem2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PsiKind {
    Plus,
    Minus,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Divisor sieve: Σ d(n) against the hyperbola count and Dirichlet's estimate.
    Sieve {
        #[arg(long)]
        limit: usize,
    },
    /// Σ_{m≤x} d(m)d(m+f).
    Divsum {
        #[arg(long)]
        x: usize,
        #[arg(long)]
        f: usize,
    },
    /// S(m,n;ℓ) and its Weil bound.
    Kloosterman {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        l: u64,
    },
    /// ζ(1/2+it) on a grid t, t+step, ..., ≤ t_end.
    Zeta {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        #[arg(long, value_enum, default_value = "em")]
        method: ZetaAlgo,
    },
    /// ∫_0^T |ζ(1/2+it)|⁴ dt.
    Moment4 {
        #[arg(long)]
        t: f64,
    },
    /// E₂(T).
    E2 {
        #[arg(long)]
        t: f64,
    },
    /// Gaussian-smoothed fourth moment around T.
    SmoothedMoment {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        g: f64,
    },
    /// H_j(1/2) for every form in the dataset.
    HeckeCentral,
    /// S_m(K;K′,t) over the dataset.
    Specsum {
        #[command(flatten)]
        w: Window,
    },
    /// Arithmetic side of Theorem 1 or the right-hand sum of Theorem 2.
    Divside {
        #[arg(long)]
        k: f64,
        #[arg(long)]
        t: f64,
        #[arg(long, value_enum, default_value = "main")]
        kind: DivSide,
        /// Power of H for the Theorem 2 envelope.
        #[arg(long, default_value_t = 2)]
        power: u8,
    },
    /// Kuznetsov trace formula with the kernel e^{−(r/width)²}.
    TraceCheck {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 6.0)]
        width: f64,
        #[arg(long)]
        l_cap: Option<u64>,
    },
    /// Smoothed fourth moment against main term plus spectral sum.
    MomentCheck {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        g: f64,
    },
    /// ∫ S_m(K;K′,t)² dt over [T, 2T].
    Meansquare {
        #[command(flatten)]
        w: Window,
        /// Weight by the smooth bump instead of the sharp interval.
        #[arg(long)]
        bump: bool,
    },
    /// Saddle point evaluation against the oscillatory quadrature.
    Saddle {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        g: f64,
    },
    /// Ψ±(x; h) for the weight kernel h_ℓ(T,K,G) or a Gaussian pair.
    Psi {
        #[arg(long)]
        x: f64,
        #[arg(long, value_enum, default_value = "plus")]
        kind: PsiKind,
        #[arg(long, default_value_t = 5000.0)]
        t: f64,
        #[arg(long, default_value_t = 30.0)]
        k: f64,
        #[arg(long, default_value_t = 3.0)]
        g: f64,
        /// Use the Gaussian pair at ±center of this width instead.
        #[arg(long, requires = "center")]
        width: Option<f64>,
        #[arg(long)]
        center: Option<f64>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) | Error::Domain(_) | Error::Validation(_) | Error::Io(_) => 2,
        Error::NumericFailure { .. } => 3,
        Error::ResourceLimit { .. } => 4,
        Error::Format { .. } => 5,
    }
}

fn run(cli: Cli) -> hecke_core::Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Validation("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    let ov = match &cli.config {
        Some(p) => Overrides::load(p)?,
        None => Overrides::default(),
    };
    let ctx = commands::Ctx { ov, spectral: cli.spectral.clone(), cache: cli.cache.clone() };
    let out = commands::dispatch(&ctx, &cli.command)?;
    match &cli.out {
        Some(p) => {
            let f = File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(f);
            out.write(cli.format, &mut w)?;
            w.flush()?;
        }
        None => out.write(cli.format, io::stdout().lock())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hecke: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
