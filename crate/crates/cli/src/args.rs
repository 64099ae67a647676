use clap::{Args, Parser, Subcommand};
use mutlab_core::harness::BudgetConfig;
use mutlab_core::mutation::OperatorSet;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "mutlab", version, about = "Mutation analysis for MiniLang programs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate mutants; writes mutants.json and one unified diff per mutant.
    Mutate {
        program: PathBuf,
        #[arg(long, default_value = "common")]
        set: OperatorSet,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run a test suite against every mutant; writes matrix.csv and matrix.meta.json.
    Matrix {
        program: PathBuf,
        tests: PathBuf,
        #[arg(long, default_value = "common")]
        set: OperatorSet,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Summarize a kill matrix and compute its disjoint mutant set; writes disjoint.json.
    Analyze {
        matrix: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the repeated test-selection study; writes report.json, report.csv,
    /// quartiles.csv and timing.json.
    Experiment {
        program: PathBuf,
        tests: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 30)]
        reps: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Tabulate one or more report.json files; writes a combined quartiles.csv.
    Report {
        #[arg(required = true)]
        reports: Vec<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct BudgetArgs {
    /// Mutant step budget as a multiple of the original run's steps.
    #[arg(long, default_value_t = 10.0)]
    pub budget_factor: f64,
    /// Minimum mutant step budget.
    #[arg(long, default_value_t = 10_000)]
    pub budget_floor: u64,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

impl BudgetArgs {
    pub fn config(&self) -> BudgetConfig {
        BudgetConfig {
            factor: self.budget_factor,
            floor: self.budget_floor,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Output directory.
    #[arg(long, env = "MUTLAB_OUT", default_value = "mutlab-out")]
    pub out: PathBuf,
}
