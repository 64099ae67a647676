use super::suite::{verify_green, TestCase};
use super::{HarnessError, BASELINE_BUDGET};
use crate::lang::{execute, Outcome, Program, Status};
use crate::mutation::{apply_mutant, MutantDescriptor};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix dimensions do not match: {0}")]
    Dimension(String),
    #[error("mutant id {0} appears twice")]
    DuplicateMutant(u32),
    #[error("malformed matrix csv: {0}")]
    Csv(String),
}

/// Which tests kill which mutants.
///
/// Stored column-major: `column(j)[i]` is true iff test `i` kills the mutant
/// at column `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KillMatrix {
    tests: Vec<String>,
    mutants: Vec<u32>,
    columns: Vec<Vec<bool>>,
}

impl KillMatrix {
    pub fn new(tests: Vec<String>, mutants: Vec<u32>, columns: Vec<Vec<bool>>) -> Result<Self, MatrixError> {
        if columns.len() != mutants.len() {
            return Err(MatrixError::Dimension(format!(
                "{} mutant ids but {} columns",
                mutants.len(),
                columns.len()
            )));
        }
        if let Some((j, c)) = columns.iter().enumerate().find(|(_, c)| c.len() != tests.len()) {
            return Err(MatrixError::Dimension(format!(
                "column of mutant {} has {} cells for {} tests",
                mutants[j],
                c.len(),
                tests.len()
            )));
        }
        let mut seen = HashSet::new();
        if let Some(&dup) = mutants.iter().find(|id| !seen.insert(**id)) {
            return Err(MatrixError::DuplicateMutant(dup));
        }
        Ok(KillMatrix { tests, mutants, columns })
    }

    /// Builds a matrix from rows, `rows[i][j]` being test `i` against mutant `j`.
    pub fn from_rows(tests: Vec<String>, mutants: Vec<u32>, rows: &[Vec<bool>]) -> Result<Self, MatrixError> {
        if rows.len() != tests.len() {
            return Err(MatrixError::Dimension(format!("{} tests but {} rows", tests.len(), rows.len())));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != mutants.len()) {
            return Err(MatrixError::Dimension(format!(
                "row has {} cells for {} mutants",
                r.len(),
                mutants.len()
            )));
        }
        let columns = (0..mutants.len()).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        KillMatrix::new(tests, mutants, columns)
    }

    pub fn tests(&self) -> &[String] {
        &self.tests
    }

    pub fn mutants(&self) -> &[u32] {
        &self.mutants
    }

    pub fn n_tests(&self) -> usize {
        self.tests.len()
    }

    pub fn n_mutants(&self) -> usize {
        self.mutants.len()
    }

    pub fn get(&self, test: usize, col: usize) -> bool {
        self.columns[col][test]
    }

    pub fn column(&self, col: usize) -> &[bool] {
        &self.columns[col]
    }

    /// Column index of mutant `id`.
    pub fn index_of(&self, id: u32) -> Option<usize> {
        self.mutants.iter().position(|m| *m == id)
    }

    /// Indices of the tests that kill the mutant at `col`.
    pub fn killers(&self, col: usize) -> Vec<usize> {
        self.columns[col].iter().enumerate().filter(|(_, k)| **k).map(|(i, _)| i).collect()
    }

    pub fn is_live(&self, col: usize) -> bool {
        !self.columns[col].iter().any(|k| *k)
    }

    /// Whether any test in `tests` kills the mutant at `col`.
    pub fn killed_by(&self, col: usize, tests: &[usize]) -> bool {
        tests.iter().any(|&i| self.columns[col][i])
    }

    /// The matrix restricted to the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> KillMatrix {
        KillMatrix {
            tests: self.tests.clone(),
            mutants: cols.iter().map(|&j| self.mutants[j]).collect(),
            columns: cols.iter().map(|&j| self.columns[j].clone()).collect(),
        }
    }

    /// The matrix restricted to the given tests, in the given order.
    pub fn select_tests(&self, tests: &[usize]) -> KillMatrix {
        KillMatrix {
            tests: tests.iter().map(|&i| self.tests[i].clone()).collect(),
            mutants: self.mutants.clone(),
            columns: self.columns.iter().map(|c| tests.iter().map(|&i| c[i]).collect()).collect(),
        }
    }

    /// Header `test,<mutant ids>`, then one row of 0/1 cells per test.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let header = std::iter::once("test".to_string()).chain(self.mutants.iter().map(|m| m.to_string()));
        w.write_record(header).expect("writing to memory");
        for (i, t) in self.tests.iter().enumerate() {
            let row = std::iter::once(t.clone())
                .chain(self.columns.iter().map(|c| if c[i] { "1" } else { "0" }.to_string()));
            w.write_record(row).expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
    }

    pub fn from_csv(text: &str) -> Result<Self, MatrixError> {
        let csv_err = |e: csv::Error| MatrixError::Csv(e.to_string());
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let header = r.headers().map_err(csv_err)?.clone();
        if header.get(0) != Some("test") {
            return Err(MatrixError::Csv("first header cell must be `test`".into()));
        }
        let mutants = header
            .iter()
            .skip(1)
            .map(|h| {
                h.trim()
                    .parse::<u32>()
                    .map_err(|_| MatrixError::Csv(format!("mutant id `{h}` is not a number")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut tests = Vec::new();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(csv_err)?;
            let name = rec.get(0).unwrap_or_default().to_string();
            let row = rec
                .iter()
                .skip(1)
                .map(|c| match c.trim() {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    other => Err(MatrixError::Csv(format!("cell `{other}` in row `{name}` is not 0 or 1"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            tests.push(name);
            rows.push(row);
        }
        KillMatrix::from_rows(tests, mutants, &rows)
    }
}

/// True iff the mutated run is observably different from the baseline.
/// Exhausting the step budget always counts as a kill.
pub fn kill_check(baseline: &Outcome, mutated: &Outcome) -> bool {
    match mutated.status {
        Status::BudgetExceeded => true,
        s => s != baseline.status,
    }
}

/// Per-test step budget for mutant runs: `max(floor, ceil(factor * baseline))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetConfig {
    pub factor: f64,
    pub floor: u64,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        BudgetConfig {
            factor: 10.0,
            floor: 10_000,
        }
    }
}

impl BudgetConfig {
    pub fn budget_for(&self, baseline_steps: u64) -> u64 {
        let scaled = (self.factor * baseline_steps as f64).ceil() as u64;
        scaled.max(self.floor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRecord {
    pub status: Status,
    pub steps: u64,
}

/// A kill matrix together with everything recorded while building it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixRun {
    pub matrix: KillMatrix,
    pub budget: BudgetConfig,
    pub baseline: Vec<Outcome>,
    pub budgets: Vec<u64>,
    /// `cells[j][i]`: mutant column `j` under test `i`.
    pub cells: Vec<Vec<CellRecord>>,
    pub wall_seconds: f64,
}

impl MatrixRun {
    /// Steps spent executing mutants, summed over all cells.
    pub fn total_steps(&self) -> u64 {
        self.cells.iter().flatten().map(|c| c.steps).sum()
    }

    pub fn meta(&self) -> MatrixMeta {
        MatrixMeta {
            budget_factor: self.budget.factor,
            budget_floor: self.budget.floor,
            tests: self
                .matrix
                .tests()
                .iter()
                .zip(&self.baseline)
                .zip(&self.budgets)
                .map(|((name, o), b)| TestMeta {
                    name: name.clone(),
                    baseline_steps: o.steps,
                    budget: *b,
                })
                .collect(),
            mutant_steps: self
                .matrix
                .mutants()
                .iter()
                .zip(&self.cells)
                .map(|(id, col)| MutantSteps {
                    id: *id,
                    steps: col.iter().map(|c| c.steps).sum(),
                    budget_exceeded: col.iter().filter(|c| c.status == Status::BudgetExceeded).count(),
                })
                .collect(),
            total_steps: self.total_steps(),
            wall_seconds: self.wall_seconds,
        }
    }
}

/// Contents of `matrix.meta.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixMeta {
    pub budget_factor: f64,
    pub budget_floor: u64,
    pub tests: Vec<TestMeta>,
    pub mutant_steps: Vec<MutantSteps>,
    pub total_steps: u64,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestMeta {
    pub name: String,
    pub baseline_steps: u64,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutantSteps {
    pub id: u32,
    pub steps: u64,
    pub budget_exceeded: usize,
}

/// Runs every test against every mutant.
///
/// The suite must be green on `p`. Mutants are evaluated on `jobs` worker
/// threads (0 picks the machine default); the result does not depend on it.
pub fn build_kill_matrix(
    p: &Program,
    mutants: &[MutantDescriptor],
    tests: &[TestCase],
    budget: BudgetConfig,
    jobs: usize,
) -> Result<MatrixRun, HarnessError> {
    let green = verify_green(p, tests, BASELINE_BUDGET)?;
    green.require_green()?;
    let baseline: Vec<Outcome> = green.results.iter().map(|r| r.outcome).collect();
    let budgets: Vec<u64> = baseline.iter().map(|o| budget.budget_for(o.steps)).collect();

    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let start = Instant::now();
    let results: Vec<Result<Vec<CellRecord>, HarnessError>> = pool.install(|| {
        mutants
            .par_iter()
            .map(|m| {
                let mutated = apply_mutant(p, m)?;
                tests
                    .iter()
                    .zip(&budgets)
                    .map(|(t, &b)| {
                        let o = execute(&mutated, &t.entry, &t.args, b).map_err(|source| HarnessError::Entry {
                            test: t.name.clone(),
                            source,
                        })?;
                        Ok(CellRecord {
                            status: o.status,
                            steps: o.steps,
                        })
                    })
                    .collect()
            })
            .collect()
    });
    let wall_seconds = start.elapsed().as_secs_f64();
    let cells = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let columns = cells
        .iter()
        .map(|col| {
            col.iter()
                .zip(&baseline)
                .map(|(c, b)| {
                    let o = Outcome {
                        status: c.status,
                        steps: c.steps,
                        trace_hash: 0,
                    };
                    kill_check(b, &o)
                })
                .collect()
        })
        .collect();
    let matrix = KillMatrix::new(
        tests.iter().map(|t| t.name.clone()).collect(),
        mutants.iter().map(|m| m.id).collect(),
        columns,
    )
    .map_err(|e| match e {
        MatrixError::DuplicateMutant(id) => HarnessError::DuplicateMutant(id),
        other => unreachable!("matrix assembled with consistent dimensions: {other}"),
    })?;
    Ok(MatrixRun {
        matrix,
        budget,
        baseline,
        budgets,
        cells,
        wall_seconds,
    })
}
