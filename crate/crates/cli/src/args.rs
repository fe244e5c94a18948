//! Command-line flags, mapped onto [`RunSpec`].

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::{CommandName, Format, RunSpec};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "wblow", version, about = "Exact computations for weighted blow-ups of quotient singularities")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: FormatArg,
    #[command(subcommand)]
    pub command: Commands,
}

#[derive(Debug, Subcommand)]
pub enum Commands {
    /// Charts of the blow-up with weights read from TARGET, e.g. 1/1(1,2,3).
    Charts { target: String },
    /// Fan of the star subdivision.
    Fan { target: String },
    /// Minimal generators of I(k).
    Ideal {
        target: String,
        #[arg(long)]
        k: String,
    },
    /// Weight of a polynomial and its order along E in every chart.
    Wt {
        target: String,
        #[arg(long)]
        poly: String,
    },
    /// Multiplicity of E in the pullback and the push-forward ideals.
    Pushforward {
        target: String,
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 3)]
        a_max: u64,
        /// Also compare chartwise and ideal membership monomial by monomial.
        #[arg(long)]
        check: bool,
    },
    /// Strict transform of an equation in one or all charts.
    Transform {
        target: String,
        #[arg(long)]
        poly: Option<String>,
        #[arg(long)]
        chart: Option<usize>,
        /// Blow-up weights, when they differ from the target's weights.
        #[arg(long, value_delimiter = ',')]
        sigma: Option<Vec<u64>>,
    },
    /// Exhaustive check of the lifting identities for d = 1..dmax.
    LiftCheck {
        #[arg(long, value_delimiter = ',', required = true)]
        sigma_prime: Vec<u64>,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        a: u64,
        #[arg(long, default_value_t = 6)]
        dmax: u64,
        /// Replace the last weight a M by this value.
        #[arg(long)]
        an: Option<u64>,
        #[arg(long)]
        degree_bound: Option<u32>,
    },
    /// Iterated lifts of TARGET by the sequence of a values.
    Chain {
        target: String,
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<u64>,
        #[arg(long, default_value_t = 4)]
        dmax: u64,
        #[arg(long, value_delimiter = ',')]
        sigma: Option<Vec<u64>>,
    },
    /// Hilbert basis of the invariant monoid.
    Invariants {
        target: String,
        #[arg(long)]
        degree_bound: Option<u64>,
    },
    /// The surface xy + z^{rm} + t^n over 1/r(a,-a,1,0) and its cover.
    Example33 {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, default_value_t = 2)]
        n: u32,
    },
    /// Compare I(b)^d with I(db), or search for a stable b.
    Truncation {
        target: String,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        dmax: Option<u64>,
        #[arg(long, default_value_t = 8)]
        search_limit: u64,
    },
    /// Run a JSON list of run specs.
    Batch { file: PathBuf },
}

pub enum Invocation {
    Single(RunSpec),
    Batch(PathBuf),
}

fn object(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs
        .into_iter()
        .filter(|(_, v)| !v.is_null())
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

impl Cli {
    pub fn invocation(self) -> Invocation {
        let format = Format::from(self.format);
        let (command, target, parameters) = match self.command {
            Commands::Batch { file } => return Invocation::Batch(file),
            Commands::Charts { target } => (CommandName::Charts, Some(target), Map::new()),
            Commands::Fan { target } => (CommandName::Fan, Some(target), Map::new()),
            Commands::Ideal { target, k } => (CommandName::Ideal, Some(target), object(vec![("k", json!(k))])),
            Commands::Wt { target, poly } => (CommandName::Wt, Some(target), object(vec![("poly", json!(poly))])),
            Commands::Pushforward { target, poly, a_max, check } => (
                CommandName::Pushforward,
                Some(target),
                object(vec![("poly", json!(poly)), ("a_max", json!(a_max)), ("check", json!(check))]),
            ),
            Commands::Transform { target, poly, chart, sigma } => (
                CommandName::Transform,
                Some(target),
                object(vec![("poly", json!(poly)), ("chart", json!(chart)), ("sigma", json!(sigma))]),
            ),
            Commands::LiftCheck { sigma_prime, m, a, dmax, an, degree_bound } => (
                CommandName::LiftCheck,
                None,
                object(vec![
                    ("sigma_prime", json!(sigma_prime)),
                    ("m", json!(m)),
                    ("a", json!(a)),
                    ("dmax", json!(dmax)),
                    ("an", json!(an)),
                    ("degree_bound", json!(degree_bound)),
                ]),
            ),
            Commands::Chain { target, a, dmax, sigma } => (
                CommandName::Chain,
                Some(target),
                object(vec![("a", json!(a)), ("dmax", json!(dmax)), ("sigma", json!(sigma))]),
            ),
            Commands::Invariants { target, degree_bound } => (
                CommandName::Invariants,
                Some(target),
                object(vec![("degree_bound", json!(degree_bound))]),
            ),
            Commands::Example33 { r, m, a, n } => (
                CommandName::Example33,
                None,
                object(vec![("r", json!(r)), ("m", json!(m)), ("a", json!(a)), ("n", json!(n))]),
            ),
            Commands::Truncation { target, b, d, dmax, search_limit } => (
                CommandName::Truncation,
                Some(target),
                object(vec![
                    ("b", json!(b)),
                    ("d", json!(d)),
                    ("dmax", json!(dmax)),
                    ("search_limit", json!(search_limit)),
                ]),
            ),
        };
        Invocation::Single(RunSpec {
            command,
            target,
            parameters,
            format,
        })
    }
}
