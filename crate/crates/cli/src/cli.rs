//! Command-line grammar.
//!
//! Codings are written `prefix|cycle` with 1-based indices, and `theta_1`
//! is the outermost map: `"1|2"` means `gamma_n = theta_1 o theta_2 o ... o
//! theta_2` with `theta_1 = x^2 + c_1`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "arboreal", version, about = "Iterated quadratic maps: orbits, certificates, densities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Report format; census and primes default to csv, the rest to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Root of all randomness.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RingTag {
    /// Integer constants, fields over Q.
    Z,
    /// Constants in Z[t], fields over Q(t).
    Qt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelTag {
    Double,
    Hold,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantTag {
    Even,
    Odd,
    Monic,
}

#[derive(Clone, Debug, Args)]
pub struct SetArgs {
    /// Critical constants, e.g. "-2; -6" or "t^4+5t; -(7t^4+3)".
    #[arg(long = "c", conflicts_with = "set", allow_hyphen_values = true)]
    pub constants: Option<String>,
    /// Maps, e.g. "x^2-2; x^2-6".
    #[arg(long, allow_hyphen_values = true)]
    pub set: Option<String>,
    #[arg(long, value_enum, default_value = "z")]
    pub ring: RingTag,
}

#[derive(Clone, Debug, Args)]
pub struct FactorArgs {
    /// Trial division bound (at most 10^6).
    #[arg(long, env = "ARBOREAL_FACTOR_TRIAL", default_value_t = 1_000_000)]
    pub factor_trial: u64,
    /// Total Pollard rho iterations per integer.
    #[arg(long, env = "ARBOREAL_FACTOR_RHO", default_value_t = 2_000_000)]
    pub factor_rho: u64,
}

#[derive(Clone, Debug, Args)]
pub struct OrbitCapArgs {
    #[arg(long, env = "ARBOREAL_ORBIT_SIZE_CAP", default_value_t = 100_000)]
    pub size_cap: usize,
    #[arg(long, env = "ARBOREAL_ORBIT_HEIGHT_CAP", default_value_t = 1_000)]
    pub height_cap: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a critical integer set is exceptional.
    Classify {
        #[command(flatten)]
        set: SetArgs,
    },
    /// Critical orbit values and, optionally, the semigroup orbit closure.
    Orbit {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, default_value = "|1")]
        coding: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// Starting point (a polynomial in t, or an integer).
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        start: String,
        /// Also close the starting point under every map.
        #[arg(long)]
        closure: bool,
        #[command(flatten)]
        caps: OrbitCapArgs,
    },
    /// Stability and maximality certificates level by level.
    Certify {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, default_value = "|1")]
        coding: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[command(flatten)]
        factor: FactorArgs,
        #[arg(long, env = "ARBOREAL_EISENSTEIN_CAP", default_value_t = 8)]
        eisenstein_cap: usize,
    },
    /// Exact parity-property fractions over coefficient boxes.
    Census {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        s: u32,
        /// Increasing box sizes, e.g. "4,8,16".
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<u64>,
        #[arg(long, value_enum)]
        variant: VariantTag,
    },
    /// Fixed-point proportions of the full binary-tree groups.
    Fpp {
        #[arg(long, default_value_t = 16)]
        depth: usize,
    },
    /// Monte Carlo runs of the fixed-point process.
    Simulate {
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, value_enum, default_value = "double")]
        nonmaximal_model: ModelTag,
        /// Maximal levels as a 0/1 string, e.g. "110111"; all maximal by
        /// default.
        #[arg(long, conflicts_with_all = ["constants", "set"])]
        mask: Option<String>,
        /// Take the maximal levels from the certificate of this set instead.
        #[arg(long = "c", conflicts_with = "set", allow_hyphen_values = true)]
        constants: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        set: Option<String>,
        #[arg(long, value_enum, default_value = "z")]
        ring: RingTag,
        #[arg(long, default_value = "|1")]
        coding: String,
    },
    /// Codings drawn from a product measure.
    Sample {
        #[command(flatten)]
        set: SetArgs,
        /// Rational weights summing to 1, e.g. "1/4,3/4"; uniform by default.
        #[arg(long, value_delimiter = ',')]
        weights: Vec<String>,
        #[arg(long, default_value_t = 32)]
        length: usize,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        /// Also certify the first levels of each sampled coding.
        #[arg(long)]
        certify_depth: Option<usize>,
    },
    /// Primes dividing some nonzero orbit value, counted up to cutoffs.
    Primes {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, default_value = "|1")]
        coding: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        a0: String,
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000,1000000")]
        cutoffs: Vec<u64>,
        #[arg(long, env = "ARBOREAL_ZERO_CAP", default_value_t = 64)]
        zero_cap: usize,
        #[arg(long, env = "ARBOREAL_VISIT_CAP", default_value_t = 1 << 20)]
        visit_cap: u64,
        #[arg(long, env = "ARBOREAL_MAX_CUTOFF", default_value_t = 1_000_000)]
        max_cutoff: u64,
        /// Report fixed-point proportions up to this level beside the last
        /// cutoff (json only).
        #[arg(long)]
        fpp_depth: Option<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Orbit { .. } => "orbit",
            Command::Certify { .. } => "certify",
            Command::Census { .. } => "census",
            Command::Fpp { .. } => "fpp",
            Command::Simulate { .. } => "simulate",
            Command::Sample { .. } => "sample",
            Command::Primes { .. } => "primes",
        }
    }

    pub fn default_format(&self) -> Format {
        match self {
            Command::Census { .. } | Command::Primes { .. } => Format::Csv,
            _ => Format::Json,
        }
    }
}
