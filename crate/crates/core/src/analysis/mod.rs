//! Analytics over a kill matrix: mutation scores, live and duplicate
//! removal, dynamic subsumption, disjoint mutant sets and easiness.

mod disjoint;

pub use disjoint::{disjoint_mutants, remove_duplicates, remove_live, subsumed_set, DisjointResult};

use crate::harness::KillMatrix;
use crate::stats::{quartiles, Quartiles};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("mutant {0} is live; it subsumes nothing")]
    LiveMutant(u32),
    #[error("no mutant with id {0} in the matrix")]
    UnknownMutant(u32),
    #[error("the matrix has no tests")]
    NoTests,
}

/// A ratio that is defined as 1.0 (and flagged) when its denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub value: f64,
    pub empty: bool,
}

impl Score {
    pub fn ratio(num: usize, den: usize) -> Score {
        if den == 0 {
            Score { value: 1.0, empty: true }
        } else {
            Score {
                value: num as f64 / den as f64,
                empty: false,
            }
        }
    }
}

/// Number of mutant columns killed by at least one of `tests`.
pub fn killed_count(m: &KillMatrix, tests: &[usize]) -> usize {
    (0..m.n_mutants()).filter(|&j| m.killed_by(j, tests)).count()
}

/// Killed mutants over all mutants, for the given test indices.
pub fn mutation_score(m: &KillMatrix, tests: &[usize]) -> Score {
    Score::ratio(killed_count(m, tests), m.n_mutants())
}

/// Fraction of the tests that kill mutant `id`.
pub fn easiness(m: &KillMatrix, id: u32) -> Result<f64, AnalysisError> {
    let col = m.index_of(id).ok_or(AnalysisError::UnknownMutant(id))?;
    if m.n_tests() == 0 {
        return Err(AnalysisError::NoTests);
    }
    Ok(column_easiness(m, col))
}

pub(crate) fn column_easiness(m: &KillMatrix, col: usize) -> f64 {
    m.killers(col).len() as f64 / m.n_tests() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreSummary {
    pub total: usize,
    pub killable: usize,
    pub live: usize,
    pub duplicates: usize,
    pub disjoint: usize,
    pub mutation_score: Score,
    pub disjoint_score: Score,
    /// Quartiles of easiness over killable mutants; absent when there are none.
    pub easiness: Option<Quartiles>,
}

/// Scores of `tests` against `m` together with its disjoint-set bookkeeping.
pub fn score_summary(m: &KillMatrix, tests: &[usize]) -> ScoreSummary {
    let d = disjoint_mutants(m);
    let d_cols: Vec<usize> = d.d.iter().filter_map(|id| m.index_of(*id)).collect();
    let d_killed = d_cols.iter().filter(|&&j| m.killed_by(j, tests)).count();
    let ease: Vec<f64> = (0..m.n_mutants())
        .filter(|&j| !m.is_live(j))
        .map(|j| column_easiness(m, j))
        .collect();
    ScoreSummary {
        total: m.n_mutants(),
        killable: m.n_mutants() - d.live.len(),
        live: d.live.len(),
        duplicates: d.duplicates.len(),
        disjoint: d.d.len(),
        mutation_score: mutation_score(m, tests),
        disjoint_score: Score::ratio(d_killed, d_cols.len()),
        easiness: quartiles(&ease),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: &[&[u8]]) -> KillMatrix {
        let n = rows.first().map_or(0, |r| r.len());
        KillMatrix::from_rows(
            (0..rows.len()).map(|i| format!("t{}", i + 1)).collect(),
            (0..n as u32).collect(),
            &rows.iter().map(|r| r.iter().map(|c| *c == 1).collect()).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn mutation_score_examples() {
        let m = matrix(&[&[1, 1, 0, 0], &[0, 0, 1, 0]]);
        assert_eq!(mutation_score(&m, &[0, 1]).value, 0.75);
        assert_eq!(mutation_score(&m, &[]).value, 0.0);
        assert_eq!(mutation_score(&m, &[0]).value, 0.5);
        let full = matrix(&[&[1, 0], &[0, 1]]);
        assert_eq!(mutation_score(&full, &[0, 1]), Score { value: 1.0, empty: false });
        let none = KillMatrix::new(vec!["t".into()], vec![], vec![]).unwrap();
        assert_eq!(mutation_score(&none, &[0]), Score { value: 1.0, empty: true });
    }

    #[test]
    fn easiness_examples() {
        let m = KillMatrix::from_rows(
            (0..8).map(|i| format!("t{i}")).collect(),
            vec![0, 1, 2],
            &(0..8).map(|i| vec![i < 2, true, false]).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(easiness(&m, 0), Ok(0.25));
        assert_eq!(easiness(&m, 1), Ok(1.0));
        assert_eq!(easiness(&m, 2), Ok(0.0));
        assert_eq!(easiness(&m, 3), Err(AnalysisError::UnknownMutant(3)));
        let empty = KillMatrix::new(vec![], vec![0], vec![vec![]]).unwrap();
        assert_eq!(easiness(&empty, 0), Err(AnalysisError::NoTests));
    }

    #[test]
    fn summary_composes() {
        // m1..m5 with m4 live and m5 a duplicate of m2.
        let m = KillMatrix::from_rows(
            vec!["t1".into(), "t2".into(), "t3".into()],
            vec![1, 2, 3, 4, 5],
            &[
                vec![true, true, false, false, true],
                vec![false, true, true, false, true],
                vec![false, false, true, false, false],
            ],
        )
        .unwrap();
        let s = score_summary(&m, &[0]);
        assert_eq!((s.total, s.killable, s.live, s.duplicates, s.disjoint), (5, 4, 1, 1, 2));
        assert_eq!(s.mutation_score.value, 0.6);
        assert_eq!(s.disjoint_score.value, 0.5);
        let all = score_summary(&m, &[0, 1, 2]);
        assert_eq!(all.mutation_score.value, 0.8);
        assert_eq!(all.disjoint_score.value, 1.0);

        let empty = KillMatrix::new(vec!["t".into()], vec![], vec![]).unwrap();
        let s = score_summary(&empty, &[0]);
        assert!(s.mutation_score.empty && s.disjoint_score.empty);
        assert_eq!(s.easiness, None);
    }
}
