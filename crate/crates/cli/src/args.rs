use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "heightdyn",
    version,
    about = "Height-expansion experiments for rational self-maps of projective space"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags accepted by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance for the pass/fail decision (meaning depends on the command).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Number of iteration steps.
    #[arg(long, global = true)]
    pub kmax: Option<usize>,
    /// Stop orbits before a coordinate exceeds this many bits.
    #[arg(long, global = true)]
    pub max_bits: Option<u64>,
    /// Comma-separated height bounds (mu tiers, Kawaguchi boxes).
    #[arg(long, global = true, value_delimiter = ',')]
    pub tiers: Option<Vec<u64>>,
    /// Samples per tier or box.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Points where any of these `;`-separated forms vanish are excluded.
    #[arg(long, global = true)]
    pub exclude: Option<String>,
    /// Also write the main table as comma-separated rows to this path.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Use a shipped example instead of a map file.
    #[arg(long, global = true)]
    pub builtin: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Degree, height and classification verdicts for a map.
    Analyze(MapInput),
    /// Forward orbit of a point with heights.
    Orbit {
        #[command(flatten)]
        map: MapInput,
        /// Starting point, e.g. `1,2,3` (rational entries allowed).
        #[arg(long)]
        point: String,
    },
    /// Empirical height expansion coefficient over tiers of height bounds.
    Mu {
        #[command(flatten)]
        map: MapInput,
        #[arg(long, value_enum)]
        sampler: Option<SamplerArg>,
        /// Exponent slack for the pullback sampler.
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Compare the estimate with this value (relative tolerance `--tol`).
        #[arg(long)]
        expect: Option<f64>,
    },
    /// Canonical height of a regular affine automorphism.
    Canheight {
        #[command(flatten)]
        aut: AutInput,
        #[arg(long)]
        point: String,
        #[arg(long, value_enum, default_value_t = DirectionArg::Plus)]
        direction: DirectionArg,
    },
    /// Empirical infimum of the Kawaguchi slack over growing boxes.
    Kawaguchi {
        #[command(flatten)]
        aut: AutInput,
    },
    /// Ratios `h(phi Q_k)/h(Q_k)` along a backward orbit.
    BackwardMu {
        #[command(flatten)]
        aut: AutInput,
        #[arg(long)]
        point: String,
    },
    /// Expansion ratios of `phi^n` on a Wehler K3 surface.
    WehlerMu {
        #[command(flatten)]
        surface: SurfaceInput,
        /// The power `n` of `phi`.
        #[arg(long, default_value_t = 1)]
        power: usize,
        /// Coefficient of `E+` in `D` (default `1/(alpha - 1)`).
        #[arg(long)]
        a: Option<f64>,
        /// Coefficient of `E-` in `D` (default `1/(alpha - 1)`).
        #[arg(long)]
        b: Option<f64>,
    },
    /// Constructs a random Wehler surface through a base point.
    WehlerFind {
        /// Base point as `x0 x1 x2; y0 y1 y2`.
        #[arg(long, default_value = "1 0 0; 1 0 0")]
        base: String,
        #[arg(long, default_value_t = 3)]
        coeff_bound: u64,
        /// Write the surface file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the full acceptance suite with fixed defaults.
    Verify,
}

#[derive(Args, Debug, Clone)]
pub struct MapInput {
    /// File holding `phi_0; ...; phi_n` (omit with `--builtin`).
    pub map_file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct AutInput {
    /// Forward map file (omit with `--builtin`).
    pub map_file: Option<PathBuf>,
    /// Inverse map file.
    #[arg(long)]
    pub inverse: Option<PathBuf>,
    /// Declared dimensions of the two indeterminacy loci, e.g. `0,0`.
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<u32>>,
}

#[derive(Args, Debug, Clone)]
pub struct SurfaceInput {
    /// Surface file with a point (default: the shipped surface).
    pub surface_file: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplerArg {
    Uniform,
    Pullback,
    /// Both samplers; the estimate is the smaller of the two.
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectionArg {
    Plus,
    Minus,
}
