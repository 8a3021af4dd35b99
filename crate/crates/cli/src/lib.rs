//! Argument parsing and dispatch for the `finsite` binary.

mod commands;
mod load;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exit code and rendered text of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    /// 0 success, 1 a property failed, 2 usage or input error.
    pub code: i32,
    pub output: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "finsite", version, about = "Topologies, torsion theories and sheaves on finite categories")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Opts,
    #[command(subcommand)]
    pub command: Group,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Category document, or the name of a built-in fixture.
    #[arg(long, global = true)]
    pub category: Option<String>,
    /// Topology document, or trivial|dense|maximal|atomic|minimal.
    #[arg(long, global = true)]
    pub topology: Option<String>,
    /// Module document.
    #[arg(long, global = true)]
    pub module: Option<String>,
    /// Q or Fp:P.
    #[arg(long, global = true, default_value = "Q")]
    pub field: String,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Cap on candidate rules and sieves examined by enumerations.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Object window for type-N commands.
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Group {
    /// Validate or build categories
    #[command(subcommand)]
    Category(CategoryCmd),
    /// Enumerate and check topologies
    #[command(subcommand)]
    Topology(TopologyCmd),
    /// Torsion submodules and torsion pairs
    #[command(subcommand)]
    Torsion(TorsionCmd),
    /// Sheaf checks and sheafification
    #[command(subcommand)]
    Sheaf(SheafCmd),
    /// Type-N specs and symbolic sieves
    #[command(subcommand)]
    Typen(TypenCmd),
}

#[derive(Subcommand, Debug)]
pub enum CategoryCmd {
    /// Check a category document and report its flags.
    Validate,
    /// Build a standard category from a JSON build spec (path or inline).
    Build { spec: String },
}

#[derive(Subcommand, Debug)]
pub enum TopologyCmd {
    /// All topologies, in census order.
    Enumerate {
        /// Also print the torsion pair of each topology.
        #[arg(long)]
        pairs: bool,
    },
    /// Check the axioms for a rule.
    Check,
    /// The named topologies that exist on the category.
    Named,
    /// Rigidity and irreducible objects.
    Rigidity,
}

#[derive(Subcommand, Debug)]
pub enum TorsionCmd {
    /// The torsion submodule of a module.
    Submodule,
    /// Torsion, torsion-free or mixed.
    Classify,
    /// Check that the rule induces a hereditary torsion pair.
    Pair,
    /// Recover the topology from realized annihilators over F_p.
    Roundtrip,
}

#[derive(Subcommand, Debug)]
pub enum SheafCmd {
    /// Run the three sheaf detectors.
    Check,
    /// Sheafify a module.
    Sheafify,
    /// Check sheaves against modules on the irreducible objects.
    Equivalence,
}

#[derive(Subcommand, Debug)]
pub enum TypenCmd {
    /// Validate a spec document or a d-sequence.
    Validate {
        #[arg(long, conflicts_with = "sequence")]
        spec: Option<String>,
        /// Comma-separated values, then `;` and the tail, e.g. `2,1,0;0`.
        #[arg(long)]
        sequence: Option<String>,
    },
    /// Count specs up to the horizon.
    Census,
    /// Pull S(object, rank) back along a morphism of the given degree.
    Pullback {
        #[arg(long)]
        object: usize,
        /// Omit for the empty sieve.
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        degree: usize,
    },
    /// Compare the symbolic calculus with the truncated FI category.
    Crosscheck {
        #[arg(long)]
        spec: String,
    },
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return CommandResult { code, output: e.to_string() };
        }
    };
    match commands::dispatch(&cli) {
        Ok(out) => {
            let mut text = match cli.opts.format {
                Format::Table => out.table,
                Format::Json => serde_json::to_string_pretty(&out.json).expect("reports serialize"),
            };
            if !text.ends_with('\n') {
                text.push('\n');
            }
            CommandResult { code: if out.failed { 1 } else { 0 }, output: text }
        }
        Err(e) => CommandResult { code: 2, output: format!("error: {e}\n") },
    }
}
