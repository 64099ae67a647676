use super::{Objective, SelectionRun};
use crate::analysis::DisjointResult;
use crate::harness::{BudgetConfig, MatrixRun};
use crate::stats::{Quartiles, RankSum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetSummary {
    pub mutants: usize,
    pub killable: usize,
    pub live: usize,
    pub duplicates: usize,
    pub disjoint: usize,
    /// Interpreter steps spent on all mutant runs.
    pub steps: u64,
}

/// Median easiness over killable mutants of each group; absent for empty groups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Easiness {
    pub common: Option<f64>,
    pub comprehensive: Option<f64>,
    /// Comprehensive mutants whose program text no common mutant produces.
    pub comprehensive_only: Option<f64>,
    pub common_disjoint: Option<f64>,
    pub comprehensive_disjoint: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostBlock {
    pub common_total: f64,
    pub comprehensive_total: f64,
    pub common_per_mutant: f64,
    pub comprehensive_per_mutant: f64,
    /// `(comprehensive / common - 1) * 100`; absent when the common cost is zero.
    pub overhead_percent: Option<f64>,
}

/// Everything the study reports for one program. Contains no wall-clock
/// data, so equal inputs give byte-identical serializations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub program: String,
    pub reps: usize,
    pub base_seed: u64,
    pub budget: BudgetConfig,
    pub tests: usize,
    pub common: SetSummary,
    pub comprehensive: SetSummary,
    pub runs: Vec<SelectionRun>,
    /// Comprehensive mutants killed by each selection against those killed by all tests.
    pub rank_sum: RankSum,
    pub alpha: f64,
    pub significant: bool,
    pub objective_all: Quartiles,
    pub objective_disjoint: Quartiles,
    pub easiness: Easiness,
    /// Execution cost measured in interpreter steps.
    pub cost_steps: CostBlock,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub report: ExperimentReport,
    /// Execution cost in wall-clock seconds.
    pub timing: CostBlock,
    pub common: MatrixRun,
    pub comprehensive: MatrixRun,
    pub comprehensive_disjoint: DisjointResult,
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
}

/// One row per repetition.
pub fn runs_csv(report: &ExperimentReport) -> String {
    let mut w = csv_writer();
    w.write_record([
        "repetition",
        "seed",
        "tests_kept",
        "common_score",
        "killed",
        "killable",
        "objective_all",
        "objective_disjoint",
    ])
    .expect("writing to memory");
    for SelectionRun {
        repetition,
        seed,
        selected,
        common_score,
        objective: Objective {
            killed,
            killable,
            all,
            disjoint,
        },
    } in &report.runs
    {
        w.write_record([
            repetition.to_string(),
            seed.to_string(),
            selected.len().to_string(),
            common_score.to_string(),
            killed.to_string(),
            killable.to_string(),
            all.value.to_string(),
            disjoint.value.to_string(),
        ])
        .expect("writing to memory");
    }
    finish(w)
}

/// Objective-score quartiles, one row per program.
pub fn quartiles_csv(reports: &[&ExperimentReport]) -> String {
    let mut w = csv_writer();
    w.write_record([
        "program",
        "all_q1",
        "all_median",
        "all_q3",
        "disjoint_q1",
        "disjoint_median",
        "disjoint_q3",
    ])
    .expect("writing to memory");
    for r in reports {
        let (a, d) = (r.objective_all, r.objective_disjoint);
        w.write_record([
            r.program.clone(),
            a.q1.to_string(),
            a.median.to_string(),
            a.q3.to_string(),
            d.q1.to_string(),
            d.median.to_string(),
            d.q3.to_string(),
        ])
        .expect("writing to memory");
    }
    finish(w)
}
