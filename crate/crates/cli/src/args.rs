use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gcoh_core::{Field, Side};

use crate::{parse_field, parse_param, Command, Format, JobConfig, DEFAULT_VERIFY_PRIME_STR};

#[derive(Debug, Parser)]
#[command(
    name = "gcoh",
    version,
    about = "Graded coherence toolkit for finitely presented algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Normal forms of --expr values.
    Nf(Common),
    /// Normal-word basis in each degree.
    Basis(Common),
    /// Dimensions of the graded pieces, space-separated.
    Hilbert(Common),
    /// Annihilator of one --expr (left by default).
    Ann(Common),
    /// Minimal syzygies among the generators of a left ideal.
    Syzygy(Common),
    /// Betti table of A/J, or of the trivial module without an ideal.
    Betti(Common),
    /// Summary of the extension A -> A/I, including right-freeness.
    Extension(Common),
    /// Full coherence report for an extension and a battery of left ideals.
    Criterion(Common),
    /// Extend a twisting map, check its axioms and build the product.
    Twist(Common),
    /// Run the checks on the built-in reference fixtures.
    VerifyPaper(Common),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Input `.galg` files.
    pub inputs: Vec<PathBuf>,
    /// Highest internal degree computed (default 10, or the job's value).
    #[arg(long, short = 'D')]
    pub max_degree: Option<u32>,
    /// Highest homological degree (default 3, or the job's value).
    #[arg(long)]
    pub hom_bound: Option<usize>,
    /// Replace the field of every algebra: QQ or GF(p).
    #[arg(long, value_parser = parse_field)]
    pub field: Option<Field>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: FormatArg,
    /// Recompute dimensions over GF(p) as a cross-check.
    #[arg(long, num_args = 0..=1, default_missing_value = DEFAULT_VERIFY_PRIME_STR)]
    pub verify_prime: Option<u32>,
    /// A polynomial over the selected algebra; repeatable.
    #[arg(long = "expr", short = 'e')]
    pub exprs: Vec<String>,
    /// Algebra block to use (default: the first).
    #[arg(long)]
    pub algebra: Option<String>,
    /// Named ideal from an `ideals` block.
    #[arg(long)]
    pub ideal: Option<String>,
    /// Twist block to use.
    #[arg(long)]
    pub twist: Option<String>,
    /// Job block supplying defaults.
    #[arg(long)]
    pub job: Option<String>,
    #[arg(long, value_enum, default_value = "left")]
    pub side: SideArg,
    /// Override a twist parameter, e.g. `--param b=1/2`; repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, String)>,
    /// Exit with status 1 when a non-coherence witness or twist conflict is found.
    #[arg(long)]
    pub fail_on_witness: bool,
    /// Maximum number of ideals in the default battery.
    #[arg(long)]
    pub battery_limit: Option<usize>,
    /// Treat nonvanishing Tor_2(B, A/J) as an error.
    #[arg(long)]
    pub strict_vanishing: bool,
}

impl CommandArgs {
    pub fn into_config(self) -> JobConfig {
        let (command, c) = match self {
            CommandArgs::Nf(c) => (Command::Nf, c),
            CommandArgs::Basis(c) => (Command::Basis, c),
            CommandArgs::Hilbert(c) => (Command::Hilbert, c),
            CommandArgs::Ann(c) => (Command::Ann, c),
            CommandArgs::Syzygy(c) => (Command::Syzygy, c),
            CommandArgs::Betti(c) => (Command::Betti, c),
            CommandArgs::Extension(c) => (Command::Extension, c),
            CommandArgs::Criterion(c) => (Command::Criterion, c),
            CommandArgs::Twist(c) => (Command::Twist, c),
            CommandArgs::VerifyPaper(c) => (Command::VerifyPaper, c),
        };
        JobConfig {
            command,
            inputs: c.inputs,
            max_degree: c.max_degree,
            homological_bound: c.hom_bound,
            field: c.field,
            format: match c.format {
                FormatArg::Text => Format::Text,
                FormatArg::Json => Format::Json,
            },
            verify_prime: c.verify_prime,
            exprs: c.exprs,
            algebra: c.algebra,
            ideal: c.ideal,
            twist: c.twist,
            job: c.job,
            side: match c.side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            },
            params: c.params.into_iter().collect(),
            fail_on_witness: c.fail_on_witness,
            battery_limit: c.battery_limit,
            strict_vanishing: c.strict_vanishing,
        }
    }
}
