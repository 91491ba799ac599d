use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "entgame", version, about = "Entropy games and matrix multiplication games")]
pub struct Cli {
    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads for enumeration (defaults to all cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    /// Largest number of family members or strategy pairs to enumerate.
    #[arg(long, global = true, env = "ENTGAME_ENUM_CAP", default_value_t = 1_000_000)]
    pub cap: u128,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Turn an arena into the pair of row-set families.
    Translate { arena: PathBuf },

    /// Value interval and optimal strategies of an arena or a pair file.
    Value {
        file: PathBuf,
        /// Width of the reported interval, as a decimal or `p/q`.
        #[arg(long, default_value = "1e-6")]
        tol: String,
    },

    /// Decide a threshold query; exits 0 when it holds and 1 when it does not.
    Decide {
        file: PathBuf,
        #[arg(long, value_enum)]
        query: Query,
        #[arg(long)]
        alpha: String,
        /// Family used by single-family queries on a pair or an arena.
        #[arg(long, value_enum, default_value_t = Side::Adam)]
        family: Side,
    },

    /// Count compatible plays on an arena, or simulate matrix products on a pair.
    Simulate {
        file: PathBuf,
        /// `positional:s=a,..`, `script:a,b,..`, `random:SEED`, `optimal`; on
        /// pairs also `constant:i,j,..`, `hull:SEED`.
        #[arg(long, default_value = "optimal")]
        despot: String,
        #[arg(long, default_value = "optimal")]
        tribune: String,
        #[arg(long, default_value_t = 10)]
        turns: usize,
    },

    /// Encode a two-counter machine as a matrix game.
    #[command(name = "encode-2cmm")]
    Encode2cmm {
        machine: PathBuf,
        #[arg(long, value_enum, default_value_t = VariantArg::Integer)]
        variant: VariantArg,
    },

    /// Replay the scripted strategies on both encodings of a machine.
    #[command(name = "check-2cmm")]
    Check2cmm {
        machine: PathBuf,
        #[arg(long, default_value_t = 50)]
        turns: usize,
    },

    /// Reduce a mean-payoff game to a weighted entropy game.
    Mpg {
        file: PathBuf,
        /// Also solve the reduced game and report log2 of its value.
        #[arg(long)]
        solve: bool,
        #[arg(long, default_value = "1e-9")]
        tol: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Query {
    #[value(name = "jsr<")]
    JsrLt,
    #[value(name = "jsr<=")]
    JsrLe,
    #[value(name = "jssr>")]
    JssrGt,
    #[value(name = "jssr>=")]
    JssrGe,
    #[value(name = "mm<")]
    MmLt,
    #[value(name = "mm>=")]
    MmGe,
    #[value(name = "mm<=")]
    MmLe,
}

impl Query {
    pub fn is_minimax(self) -> bool {
        matches!(self, Query::MmLt | Query::MmGe | Query::MmLe)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Adam,
    Eve,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Integer,
    Nonneg,
}
