//! The random test-selection study: pick tests that are adequate for the
//! common mutants, then measure how many comprehensive mutants they kill.

mod report;

pub use report::{quartiles_csv, runs_csv, CostBlock, Easiness, ExperimentOutput, ExperimentReport, SetSummary};

use crate::analysis::{column_easiness, disjoint_mutants, DisjointResult, Score};
use crate::harness::{build_kill_matrix, BudgetConfig, HarnessError, KillMatrix, TestCase};
use crate::lang::Program;
use crate::mutation::{generate, OperatorSet};
use crate::stats::{median, quartiles, rank_sum_test, RankSumError};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use thiserror::Error;

/// Significance level for the rank-sum comparison.
pub const ALPHA: f64 = 0.05;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error("matrices are built over different test sequences")]
    MismatchedTests,
    #[error(transparent)]
    RankSum(#[from] RankSumError),
    #[error("at least one repetition is required")]
    NoRepetitions,
}

/// Tests kept by one pass over a seeded random permutation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub seed: u64,
    /// Indices of the kept tests, in the order they were kept.
    pub selected: Vec<usize>,
    /// Mutation score of the kept tests on the matrix they were selected for.
    pub score: f64,
}

/// Walks a ChaCha8 permutation of all tests seeded with `seed`, keeping a test
/// iff it kills a mutant none of the previously kept tests killed.
pub fn select_tests(m: &KillMatrix, seed: u64) -> Selection {
    let mut order: Vec<usize> = (0..m.n_tests()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    select_in_order(m, seed, &order)
}

/// The selection filter applied to an explicit test order.
pub fn select_in_order(m: &KillMatrix, seed: u64, order: &[usize]) -> Selection {
    let mut killed = vec![false; m.n_mutants()];
    let mut selected = Vec::new();
    for &t in order {
        let mut new = false;
        for (j, k) in killed.iter_mut().enumerate() {
            if !*k && m.get(t, j) {
                *k = true;
                new = true;
            }
        }
        if new {
            selected.push(t);
        }
    }
    let score = Score::ratio(killed.iter().filter(|k| **k).count(), m.n_mutants()).value;
    Selection { seed, selected, score }
}

/// How a test selection fares on another mutant set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    /// Mutants killed by the selected tests.
    pub killed: usize,
    /// Mutants killed by the whole test suite.
    pub killable: usize,
    pub all: Score,
    pub disjoint: Score,
}

/// Ratio of `target`'s killable mutants (and of its disjoint set) that the
/// tests selected on `source` kill.
pub fn objective_scores(
    selection: &Selection,
    source: &KillMatrix,
    target: &KillMatrix,
    target_disjoint: &DisjointResult,
) -> Result<Objective, ExperimentError> {
    if source.tests() != target.tests() {
        return Err(ExperimentError::MismatchedTests);
    }
    let everyone: Vec<usize> = (0..target.n_tests()).collect();
    let killable = (0..target.n_mutants()).filter(|&j| target.killed_by(j, &everyone)).count();
    let killed = (0..target.n_mutants())
        .filter(|&j| target.killed_by(j, &selection.selected))
        .count();
    let d_cols: Vec<usize> = target_disjoint.d.iter().filter_map(|id| target.index_of(*id)).collect();
    let d_killed = d_cols.iter().filter(|&&j| target.killed_by(j, &selection.selected)).count();
    Ok(Objective {
        killed,
        killable,
        all: Score::ratio(killed, killable),
        disjoint: Score::ratio(d_killed, d_cols.len()),
    })
}

/// One repetition of the study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionRun {
    pub repetition: usize,
    pub seed: u64,
    pub selected: Vec<String>,
    pub common_score: f64,
    pub objective: Objective,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub reps: usize,
    pub base_seed: u64,
    pub budget: BudgetConfig,
    pub jobs: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            reps: 30,
            base_seed: 0,
            budget: BudgetConfig::default(),
            jobs: 0,
        }
    }
}

/// Cost comparison between two runs: totals, per-mutant averages and the
/// relative overhead of the second.
pub fn cost_block(common_total: f64, common_mutants: usize, comp_total: f64, comp_mutants: usize) -> CostBlock {
    let per = |total: f64, n: usize| if n == 0 { 0.0 } else { total / n as f64 };
    CostBlock {
        common_total,
        comprehensive_total: comp_total,
        common_per_mutant: per(common_total, common_mutants),
        comprehensive_per_mutant: per(comp_total, comp_mutants),
        overhead_percent: (common_total > 0.0).then(|| (comp_total / common_total - 1.0) * 100.0),
    }
}

/// Wall-clock cost of building the two matrices.
pub fn timing_report(common: &crate::harness::MatrixRun, comp: &crate::harness::MatrixRun) -> CostBlock {
    cost_block(
        common.wall_seconds,
        common.matrix.n_mutants(),
        comp.wall_seconds,
        comp.matrix.n_mutants(),
    )
}

fn set_summary(m: &KillMatrix, d: &DisjointResult, steps: u64) -> SetSummary {
    SetSummary {
        mutants: m.n_mutants(),
        killable: m.n_mutants() - d.live.len(),
        live: d.live.len(),
        duplicates: d.duplicates.len(),
        disjoint: d.d.len(),
        steps,
    }
}

fn median_easiness(m: &KillMatrix, cols: impl Iterator<Item = usize>) -> Option<f64> {
    let e: Vec<f64> = cols.filter(|&j| !m.is_live(j)).map(|j| column_easiness(m, j)).collect();
    median(&e)
}

/// Builds both matrices for `program`, runs `config.reps` seeded selections
/// on the common matrix and compares them against the comprehensive one.
pub fn run_experiment(
    name: &str,
    program: &Program,
    tests: &[TestCase],
    config: &ExperimentConfig,
) -> Result<ExperimentOutput, ExperimentError> {
    if config.reps == 0 {
        return Err(ExperimentError::NoRepetitions);
    }
    let common_mutants = generate(program, OperatorSet::Common);
    let comp_mutants = generate(program, OperatorSet::Comprehensive);
    let descriptors = |ms: &[crate::mutation::Mutant]| ms.iter().map(|m| m.descriptor.clone()).collect::<Vec<_>>();
    let common = build_kill_matrix(program, &descriptors(&common_mutants), tests, config.budget, config.jobs)?;
    let comp = build_kill_matrix(program, &descriptors(&comp_mutants), tests, config.budget, config.jobs)?;
    let common_d = disjoint_mutants(&common.matrix);
    let comp_d = disjoint_mutants(&comp.matrix);

    let mut runs = Vec::with_capacity(config.reps);
    for r in 0..config.reps {
        let seed = config.base_seed.wrapping_add(r as u64);
        let sel = select_tests(&common.matrix, seed);
        let objective = objective_scores(&sel, &common.matrix, &comp.matrix, &comp_d)?;
        runs.push(SelectionRun {
            repetition: r,
            seed,
            selected: sel.selected.iter().map(|&t| tests[t].name.clone()).collect(),
            common_score: sel.score,
            objective,
        });
    }

    let sample_a: Vec<f64> = runs.iter().map(|r| r.objective.killed as f64).collect();
    let sample_b: Vec<f64> = runs.iter().map(|r| r.objective.killable as f64).collect();
    let rank_sum = rank_sum_test(&sample_a, &sample_b)?;
    let all: Vec<f64> = runs.iter().map(|r| r.objective.all.value).collect();
    let disjoint: Vec<f64> = runs.iter().map(|r| r.objective.disjoint.value).collect();

    let common_texts: HashSet<&str> = common_mutants.iter().map(|m| m.text.as_str()).collect();
    let comp_only = comp_mutants
        .iter()
        .enumerate()
        .filter(|(_, m)| !common_texts.contains(m.text.as_str()))
        .map(|(j, _)| j);
    let d_cols = |m: &KillMatrix, d: &DisjointResult| d.d.iter().filter_map(|id| m.index_of(*id)).collect::<Vec<_>>();
    let easiness = Easiness {
        common: median_easiness(&common.matrix, 0..common.matrix.n_mutants()),
        comprehensive: median_easiness(&comp.matrix, 0..comp.matrix.n_mutants()),
        comprehensive_only: median_easiness(&comp.matrix, comp_only),
        common_disjoint: median_easiness(&common.matrix, d_cols(&common.matrix, &common_d).into_iter()),
        comprehensive_disjoint: median_easiness(&comp.matrix, d_cols(&comp.matrix, &comp_d).into_iter()),
    };

    let report = ExperimentReport {
        program: name.to_string(),
        reps: config.reps,
        base_seed: config.base_seed,
        budget: config.budget,
        tests: tests.len(),
        common: set_summary(&common.matrix, &common_d, common.total_steps()),
        comprehensive: set_summary(&comp.matrix, &comp_d, comp.total_steps()),
        runs,
        rank_sum,
        alpha: ALPHA,
        significant: rank_sum.p < ALPHA,
        objective_all: quartiles(&all).expect("reps > 0"),
        objective_disjoint: quartiles(&disjoint).expect("reps > 0"),
        easiness,
        cost_steps: cost_block(
            common.total_steps() as f64,
            common.matrix.n_mutants(),
            comp.total_steps() as f64,
            comp.matrix.n_mutants(),
        ),
    };
    let timing = timing_report(&common, &comp);
    Ok(ExperimentOutput {
        report,
        timing,
        common,
        comprehensive: comp,
        comprehensive_disjoint: comp_d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// t1 kills {m1, m2}, t2 kills {m1}.
    fn two_by_two() -> KillMatrix {
        KillMatrix::from_rows(
            vec!["t1".into(), "t2".into()],
            vec![1, 2],
            &[vec![true, true], vec![true, false]],
        )
        .unwrap()
    }

    #[test]
    fn selection_hand_traces() {
        let m = two_by_two();
        assert_eq!(select_in_order(&m, 0, &[1, 0]).selected, [1, 0]);
        assert_eq!(select_in_order(&m, 0, &[0, 1]).selected, [0]);
        let live = KillMatrix::from_rows(vec!["t".into()], vec![0, 1], &[vec![false, false]]).unwrap();
        let s = select_tests(&live, 3);
        assert!(s.selected.is_empty());
        assert_eq!(s.score, 0.0);
    }

    #[test]
    fn selection_is_seeded() {
        let m = KillMatrix::from_rows(
            (0..10).map(|i| format!("t{i}")).collect(),
            (0..10).collect(),
            &(0..10).map(|i| (0..10).map(|j| j <= i).collect()).collect::<Vec<_>>(),
        )
        .unwrap();
        let a = select_tests(&m, 42);
        assert_eq!(a, select_tests(&m, 42));
        assert_eq!(a.score, 1.0);
        let distinct: HashSet<Vec<usize>> = (0..20).map(|s| select_tests(&m, s).selected).collect();
        assert!(distinct.len() > 1);
    }

    #[test]
    fn objective_examples() {
        let m = two_by_two();
        let d = disjoint_mutants(&m);
        let everything = Selection {
            seed: 0,
            selected: vec![0, 1],
            score: 1.0,
        };
        let o = objective_scores(&everything, &m, &m, &d).unwrap();
        assert_eq!((o.all.value, o.disjoint.value), (1.0, 1.0));
        let only_t2 = Selection {
            seed: 0,
            selected: vec![1],
            score: 0.5,
        };
        let o = objective_scores(&only_t2, &m, &m, &d).unwrap();
        assert_eq!((o.killed, o.killable), (1, 2));
        assert_eq!(o.all.value, 0.5);
        assert_eq!(o.disjoint.value, 0.0);

        let other = KillMatrix::from_rows(vec!["t2".into(), "t1".into()], vec![1], &[vec![true], vec![true]]).unwrap();
        assert!(matches!(
            objective_scores(&everything, &m, &other, &d),
            Err(ExperimentError::MismatchedTests)
        ));
        let live = KillMatrix::from_rows(vec!["t1".into(), "t2".into()], vec![0], &[vec![false], vec![false]]).unwrap();
        let o = objective_scores(&everything, &m, &live, &disjoint_mutants(&live)).unwrap();
        assert!(o.all.empty && o.disjoint.empty);
        assert_eq!(o.all.value, 1.0);
    }

    #[test]
    fn eight_of_ten() {
        let rows = vec![(0..10).map(|j| j < 8).collect(), (0..10).map(|_| true).collect()];
        let m = KillMatrix::from_rows(vec!["a".into(), "b".into()], (0..10).collect(), &rows).unwrap();
        let sel = Selection {
            seed: 0,
            selected: vec![0],
            score: 0.8,
        };
        let o = objective_scores(&sel, &m, &m, &disjoint_mutants(&m)).unwrap();
        assert_eq!(o.all.value, 0.8);
    }

    #[test]
    fn cost_arithmetic() {
        let c = cost_block(10.0, 1000, 25.0, 2500);
        assert_eq!(c.common_per_mutant, 0.01);
        assert_eq!(c.comprehensive_per_mutant, 0.01);
        assert_eq!(c.overhead_percent, Some(150.0));
        assert_eq!(cost_block(4.0, 2, 4.0, 2).overhead_percent, Some(0.0));
        assert_eq!(cost_block(0.0, 0, 1.0, 1).overhead_percent, None);
    }
}
