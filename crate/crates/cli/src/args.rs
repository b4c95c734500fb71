use std::path::PathBuf;

use antiratio::ModelKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "antiratio",
    version,
    about = "Particle and hidden antiparticle content of Klein-Gordon and Dirac wavefunctions",
    allow_negative_numbers = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report the ratio R for a free plane wave or a 1S bound state.
    Ratio(RatioArgs),
    /// Write the data behind one of the four figures.
    Figure(FigureArgs),
    /// Tabulate 1S energy and R across the coupling range.
    Scan(ScanArgs),
    /// Run a time evolution described by a scenario file.
    Evolve(EvolveArgs),
    /// Synthesize one boosted packet and report its ratio and shape.
    Packet(PacketArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Kg,
    Dirac,
}

impl Model {
    pub fn kind(self) -> ModelKind {
        match self {
            Model::Kg => ModelKind::KleinGordon,
            Model::Dirac => ModelKind::Dirac,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::Kg => "kg",
            Model::Dirac => "dirac",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Quadrature,
}

/// Coupling given directly as ζ or as a nuclear charge Z with ζ = Zα.
#[derive(Debug, Clone, Args)]
pub struct CouplingArgs {
    /// Coupling ζ = Zα.
    #[arg(long, conflicts_with = "z")]
    pub zeta: Option<f64>,
    /// Nuclear charge, converted with --alpha.
    #[arg(long)]
    pub z: Option<u32>,
    /// Fine-structure constant used with --z.
    #[arg(long, requires = "z")]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RatioArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    /// Free plane wave at speed --beta.
    #[arg(long, conflicts_with = "bound", required_unless_present = "bound")]
    pub free: bool,
    /// Hydrogenlike 1S state at coupling --zeta or --z.
    #[arg(long)]
    pub bound: bool,
    /// Speed in units of c.
    #[arg(long)]
    pub beta: Option<f64>,
    #[command(flatten)]
    pub coupling: CouplingArgs,
    /// Closed form or radial quadrature (bound states only).
    #[arg(long, value_enum, default_value = "closed")]
    pub method: Method,
    /// Relative tolerance for the quadrature.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

impl FigureId {
    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
        }
    }
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub figure: FigureId,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Rest-frame momentum spread σ̃ for the packet figures.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Profile nodes (fig1, fig3) or open-interval scan points (fig2, fig4).
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Write scan CSV and manifest here instead of printing to stdout.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct PacketArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Profile nodes.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Also write the profile CSV and manifest here.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    /// Flat key = value scenario file.
    pub scenario: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Override the scenario's charge-drift tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub json: bool,
}
