use std::path::PathBuf;
use std::process::ExitCode;

use bvkit_cli::{run, Options};
use clap::{Args, Parser, Subcommand};

/// Exact BRST/BV checks on model files.
#[derive(Parser)]
#[command(name = "bvkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Model file
    model: PathBuf,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ActionArg {
    /// Name in [exprs] or an inline expression used as the action
    #[arg(long)]
    action: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Jacobi identity of the structure constants
    CheckLie(Common),
    /// Jacobi identity and the representation property
    CheckRep(Common),
    /// Images of the BRST differential and its square
    Brst(Common),
    /// L-infinity relation table
    Linf {
        #[command(flatten)]
        common: Common,
        /// Highest row reported separately
        #[arg(long, default_value_t = 3)]
        rows: u32,
    },
    /// Chevalley-Eilenberg cohomology dimensions
    CeCohomology {
        #[command(flatten)]
        common: Common,
        /// Module degree (0 or 1)
        #[arg(long, default_value_t = 0)]
        p: u32,
    },
    /// BV algebra identities on seeded random inputs
    BvIdentities {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random triples
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
    },
    /// Classical master equation {S,S} = 0
    Master {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        action: ActionArg,
    },
    /// Quantum master equation {S,S} - 2i hbar Delta S = 0
    Qme {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        action: ActionArg,
    },
    /// Quantum master equation order by order in hbar
    HbarSeq {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        action: ActionArg,
    },
    /// Antifield-degree analysis, optionally at critical points
    Onshell {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        action: ActionArg,
        /// Point such as `x=0,y=1/2`; repeatable
        #[arg(long = "point")]
        points: Vec<String>,
    },
    /// Square of the quantum BRST operator
    OmegaSquare {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        action: ActionArg,
        /// Name in [exprs] or inline expression; repeatable
        #[arg(long)]
        psi: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random test elements
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
    },
    /// Integrals of the [integrand] over graph Lagrangians
    GaugeExp {
        #[command(flatten)]
        common: Common,
        /// Gauge fermion (name in [exprs] or inline); repeatable
        #[arg(long = "gauge")]
        gauges: Vec<String>,
        /// Integrate Delta of the integrand instead
        #[arg(long)]
        stokes: bool,
    },
    /// Trace (unimodularity) condition
    TraceCond(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut opts = Options::default();
    let (name, common) = match cli.command {
        Command::CheckLie(c) => ("check-lie", c),
        Command::CheckRep(c) => ("check-rep", c),
        Command::Brst(c) => ("brst", c),
        Command::Linf { common, rows } => {
            opts.rows = rows;
            ("linf", common)
        }
        Command::CeCohomology { common, p } => {
            opts.p = p;
            ("ce-cohomology", common)
        }
        Command::BvIdentities { common, seed, samples, max_degree } => {
            (opts.seed, opts.samples, opts.max_degree) = (seed, samples, max_degree);
            ("bv-identities", common)
        }
        Command::Master { common, action } => {
            opts.action = action.action;
            ("master", common)
        }
        Command::Qme { common, action } => {
            opts.action = action.action;
            ("qme", common)
        }
        Command::HbarSeq { common, action } => {
            opts.action = action.action;
            ("hbar-seq", common)
        }
        Command::Onshell { common, action, points } => {
            (opts.action, opts.points) = (action.action, points);
            ("onshell", common)
        }
        Command::OmegaSquare { common, action, psi, seed, samples, max_degree } => {
            (opts.action, opts.psi, opts.seed, opts.samples, opts.max_degree) =
                (action.action, psi, seed, samples, max_degree);
            ("omega-square", common)
        }
        Command::GaugeExp { common, gauges, stokes } => {
            (opts.gauges, opts.stokes) = (gauges, stokes);
            ("gauge-exp", common)
        }
        Command::TraceCond(c) => ("trace-cond", c),
    };
    let report = run(name, &common.model, &opts);
    if common.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    ExitCode::from(report.exit_code() as u8)
}
