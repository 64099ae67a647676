use crate::args::{BudgetArgs, Cli, Command};
use crate::output::{ensure_dir, read, write, write_json};
use crate::CliError;
use mutlab_core::analysis::{disjoint_mutants, score_summary};
use mutlab_core::experiment::{quartiles_csv, run_experiment, runs_csv, ExperimentConfig, ExperimentReport};
use mutlab_core::harness::{build_kill_matrix, load_tests, BudgetConfig, KillMatrix, TestCase};
use mutlab_core::lang::{parse, pretty_print, Program, Span};
use mutlab_core::mutation::{generate, Membership, Mutant, Operator, OperatorSet};
use serde::Serialize;
use similar::TextDiff;
use std::path::{Path, PathBuf};

/// Validated settings shared by the commands that execute tests.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub program: PathBuf,
    pub tests: PathBuf,
    pub set: OperatorSet,
    pub budget: BudgetConfig,
    pub reps: usize,
    pub base_seed: u64,
    pub out: PathBuf,
    pub jobs: usize,
}

impl RunConfig {
    fn validate(&self) -> Result<(), CliError> {
        if self.reps < 1 {
            return Err(CliError::Input("--reps must be at least 1".into()));
        }
        if !self.budget.factor.is_finite() || self.budget.factor < 1.0 {
            return Err(CliError::Input("--budget-factor must be a finite number >= 1".into()));
        }
        Ok(())
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Mutate { program, set, out } => cmd_mutate(program, *set, &out.out),
        Command::Matrix {
            program,
            tests,
            set,
            budget,
            out,
        } => cmd_matrix(&run_config(program, tests, *set, budget, 1, 0, &out.out)?),
        Command::Analyze { matrix, out } => cmd_analyze(matrix, &out.out),
        Command::Experiment {
            program,
            tests,
            seed,
            reps,
            budget,
            out,
        } => cmd_experiment(&run_config(
            program,
            tests,
            OperatorSet::Comprehensive,
            budget,
            *reps,
            *seed,
            &out.out,
        )?),
        Command::Report { reports, out } => cmd_report(reports, &out.out),
    }
}

fn run_config(
    program: &Path,
    tests: &Path,
    set: OperatorSet,
    budget: &BudgetArgs,
    reps: usize,
    base_seed: u64,
    out: &Path,
) -> Result<RunConfig, CliError> {
    let c = RunConfig {
        program: program.to_path_buf(),
        tests: tests.to_path_buf(),
        set,
        budget: budget.config(),
        reps,
        base_seed,
        out: out.to_path_buf(),
        jobs: budget.jobs,
    };
    c.validate()?;
    Ok(c)
}

fn load_program(path: &Path) -> Result<Program, CliError> {
    parse(&read(path)?).map_err(|source| CliError::Program {
        path: path.to_path_buf(),
        source,
    })
}

fn load_suite(path: &Path) -> Result<Vec<TestCase>, CliError> {
    load_tests(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn program_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| "program".into(), |s| s.to_string_lossy().into_owned())
}

/// One entry of `mutants.json`.
#[derive(Debug, Serialize)]
struct MutantRecord<'a> {
    id: u32,
    operator: Operator,
    set: Membership,
    span: Span,
    original: &'a str,
    replacement: &'a str,
    description: &'a str,
}

fn records(mutants: &[Mutant]) -> Vec<MutantRecord<'_>> {
    mutants
        .iter()
        .map(|m| {
            let d = &m.descriptor;
            MutantRecord {
                id: d.id,
                operator: d.operator,
                set: d.membership(),
                span: d.span,
                original: &d.original,
                replacement: &d.replacement,
                description: &d.description,
            }
        })
        .collect()
}

fn cmd_mutate(program: &Path, set: OperatorSet, out: &Path) -> Result<(), CliError> {
    let p = load_program(program)?;
    let mutants = generate(&p, set);
    ensure_dir(out)?;
    write_json(out, "mutants.json", &records(&mutants))?;
    let diffs = out.join("diffs");
    ensure_dir(&diffs)?;
    let original = pretty_print(&p);
    let name = program.display().to_string();
    for m in &mutants {
        let diff = TextDiff::from_lines(&original, &m.text)
            .unified_diff()
            .context_radius(3)
            .header(&name, &format!("{name} (mutant {})", m.descriptor.id))
            .to_string();
        write(&diffs, &format!("{}.diff", m.descriptor.id), &diff)?;
    }
    println!("{} {} mutants written to {}", mutants.len(), set, out.display());
    Ok(())
}

fn cmd_matrix(c: &RunConfig) -> Result<(), CliError> {
    let p = load_program(&c.program)?;
    let tests = load_suite(&c.tests)?;
    let mutants = generate(&p, c.set);
    let descriptors: Vec<_> = mutants.iter().map(|m| m.descriptor.clone()).collect();
    let run = build_kill_matrix(&p, &descriptors, &tests, c.budget, c.jobs)?;
    if run.matrix.n_tests() != tests.len() || run.matrix.n_mutants() != mutants.len() {
        return Err(CliError::Invariant("kill matrix dimensions differ from its inputs".into()));
    }
    ensure_dir(&c.out)?;
    write(&c.out, "matrix.csv", &run.matrix.to_csv())?;
    write_json(&c.out, "matrix.meta.json", &run.meta())?;
    write_json(&c.out, "mutants.json", &records(&mutants))?;
    println!(
        "{} tests x {} {} mutants written to {}",
        tests.len(),
        mutants.len(),
        c.set,
        c.out.display()
    );
    Ok(())
}

fn fmt_ids(ids: &[u32]) -> String {
    let parts: Vec<String> = ids.iter().map(|id| format!("m{id}")).collect();
    format!("[{}]", parts.join(", "))
}

fn cmd_analyze(matrix: &Path, out: &Path) -> Result<(), CliError> {
    let m = KillMatrix::from_csv(&read(matrix)?).map_err(|e| CliError::Input(format!("{}: {e}", matrix.display())))?;
    let all: Vec<usize> = (0..m.n_tests()).collect();
    let s = score_summary(&m, &all);
    let d = disjoint_mutants(&m);
    if s.killable + s.live != s.total || d.d.len() != s.disjoint {
        return Err(CliError::Invariant("score summary disagrees with the disjoint set".into()));
    }
    ensure_dir(out)?;
    write_json(out, "disjoint.json", &d)?;
    println!("tests       {}", m.n_tests());
    println!("mutants     {}", s.total);
    println!("killable    {}", s.killable);
    println!("live        {}", s.live);
    println!("duplicates  {}", s.duplicates);
    println!("disjoint    {}", s.disjoint);
    let flag = if s.mutation_score.empty { " (empty)" } else { "" };
    println!("score       {:.4}{flag}", s.mutation_score.value);
    match s.easiness {
        Some(q) => println!("easiness    q1 {:.4}  median {:.4}  q3 {:.4}", q.q1, q.median, q.q3),
        None => println!("easiness    none"),
    }
    println!("D={}", fmt_ids(&d.d));
    Ok(())
}

fn check_report(r: &ExperimentReport) -> Result<(), CliError> {
    let unit = |x: f64| (0.0..=1.0).contains(&x);
    for run in &r.runs {
        let o = &run.objective;
        if !unit(o.all.value) || !unit(o.disjoint.value) || !unit(run.common_score) {
            return Err(CliError::Invariant(format!("ratio out of range in repetition {}", run.repetition)));
        }
        if o.disjoint.value == 1.0 && o.all.value != 1.0 {
            return Err(CliError::Invariant(format!(
                "repetition {} kills every disjoint mutant but not every killable one",
                run.repetition
            )));
        }
    }
    for q in [r.objective_all, r.objective_disjoint] {
        if !(q.q1 <= q.median && q.median <= q.q3) {
            return Err(CliError::Invariant("quartiles out of order".into()));
        }
    }
    Ok(())
}

fn cmd_experiment(c: &RunConfig) -> Result<(), CliError> {
    let p = load_program(&c.program)?;
    let tests = load_suite(&c.tests)?;
    let config = ExperimentConfig {
        reps: c.reps,
        base_seed: c.base_seed,
        budget: c.budget,
        jobs: c.jobs,
    };
    let out = run_experiment(&program_name(&c.program), &p, &tests, &config).map_err(|e| match e {
        mutlab_core::experiment::ExperimentError::Harness(h) => CliError::from(h),
        other => CliError::Invariant(other.to_string()),
    })?;
    check_report(&out.report)?;
    ensure_dir(&c.out)?;
    write_json(&c.out, "report.json", &out.report)?;
    write(&c.out, "report.csv", &runs_csv(&out.report))?;
    write(&c.out, "quartiles.csv", &quartiles_csv(&[&out.report]))?;
    write_json(&c.out, "timing.json", &out.timing)?;
    print_table(&[&out.report]);
    Ok(())
}

fn print_table(reports: &[&ExperimentReport]) {
    println!(
        "{:<16} {:>6} {:>6} {:>6} {:>6} {:>8} {:>8} {:>10} {:>4} {:>9}",
        "program", "common", "comp", "kill", "disj", "med_all", "med_dis", "p", "sig", "overhead"
    );
    for r in reports {
        let overhead = r
            .cost_steps
            .overhead_percent
            .map_or_else(|| "-".to_string(), |o| format!("{o:.0}%"));
        println!(
            "{:<16} {:>6} {:>6} {:>6} {:>6} {:>8.4} {:>8.4} {:>10.3e} {:>4} {:>9}",
            r.program,
            r.common.mutants,
            r.comprehensive.mutants,
            r.comprehensive.killable,
            r.comprehensive.disjoint,
            r.objective_all.median,
            r.objective_disjoint.median,
            r.rank_sum.p,
            if r.significant { "yes" } else { "no" },
            overhead
        );
    }
}

fn cmd_report(paths: &[PathBuf], out: &Path) -> Result<(), CliError> {
    let reports = paths
        .iter()
        .map(|p| {
            serde_json::from_str::<ExperimentReport>(&read(p)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<&ExperimentReport> = reports.iter().collect();
    print_table(&refs);
    let significant = reports.iter().filter(|r| r.significant).count();
    println!("significant: {significant} of {}", reports.len());
    ensure_dir(out)?;
    write(out, "quartiles.csv", &quartiles_csv(&refs))?;
    Ok(())
}
