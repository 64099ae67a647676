use mutlab_core::experiment::{run_experiment, ExperimentConfig};
use mutlab_core::harness::{load_tests, verify_green, BudgetConfig, TestCase, BASELINE_BUDGET};
use mutlab_core::lang::{parse, pretty_print, Program, Status};
use mutlab_core::mutation::{generate, OperatorSet};
use std::collections::HashSet;
use std::path::PathBuf;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus() -> Vec<(String, Program, Vec<TestCase>)> {
    let mut names: Vec<String> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .filter_map(|e| {
            let p = e.unwrap().path();
            (p.extension()? == "ml5").then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|n| {
            let src = std::fs::read_to_string(corpus_dir().join(format!("{n}.ml5"))).unwrap();
            let tests = std::fs::read_to_string(corpus_dir().join(format!("{n}.tests.json"))).unwrap();
            let p = parse(&src).unwrap_or_else(|e| panic!("{n}: {e}"));
            (n, p, load_tests(&tests).unwrap())
        })
        .collect()
}

#[test]
fn every_suite_is_green_within_default_budgets() {
    let all = corpus();
    assert!(all.len() >= 6);
    for (name, p, tests) in &all {
        let r = verify_green(p, tests, BASELINE_BUDGET).unwrap();
        assert!(r.green, "{name}: failing {:?}", r.failing());
        for res in &r.results {
            assert_ne!(res.outcome.status, Status::BudgetExceeded);
            // The default mutant budget never constrains the original behavior.
            assert!(res.outcome.steps <= BudgetConfig::default().budget_for(res.outcome.steps));
            assert!(res.outcome.steps < BudgetConfig::default().floor, "{name}/{}", res.name);
        }
    }
}

#[test]
fn canonical_text_round_trips() {
    for (name, p, _) in corpus() {
        let text = pretty_print(&p);
        let again = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(again.structurally_eq(&p), "{name}");
        assert_eq!(pretty_print(&again), text);
    }
}

#[test]
fn comprehensive_texts_contain_common() {
    for (name, p, _) in corpus() {
        let common: HashSet<String> = generate(&p, OperatorSet::Common).into_iter().map(|m| m.text).collect();
        let comp: HashSet<String> = generate(&p, OperatorSet::Comprehensive).into_iter().map(|m| m.text).collect();
        assert!(common.is_subset(&comp), "{name}: {:?}", common.difference(&comp).collect::<Vec<_>>());
    }
}

#[test]
fn boundary_experiment_shape() {
    let (_, p, tests) = corpus().into_iter().find(|(n, _, _)| n == "boundary").unwrap();
    let out = run_experiment("boundary", &p, &tests, &ExperimentConfig::default()).unwrap();
    let r = &out.report;
    println!("{}", serde_json::to_string_pretty(r).unwrap());
    assert_eq!(r.reps, 30);
    assert_eq!(r.runs.len(), 30);
    for run in &r.runs {
        assert!((0.0..=1.0).contains(&run.objective.all.value));
        assert!((0.0..=1.0).contains(&run.objective.disjoint.value));
        if run.objective.disjoint.value == 1.0 {
            assert_eq!(run.objective.all.value, 1.0);
        }
    }
    assert!(r.objective_all.q1 <= r.objective_all.median && r.objective_all.median <= r.objective_all.q3);
}

#[test]
fn same_seed_same_report() {
    let (_, p, tests) = corpus().into_iter().find(|(n, _, _)| n == "leap_year").unwrap();
    let config = ExperimentConfig {
        reps: 5,
        base_seed: 9,
        jobs: 1,
        ..ExperimentConfig::default()
    };
    let a = run_experiment("leap_year", &p, &tests, &config).unwrap();
    let b = run_experiment("leap_year", &p, &tests, &ExperimentConfig { jobs: 3, ..config }).unwrap();
    assert_eq!(
        serde_json::to_string(&a.report).unwrap(),
        serde_json::to_string(&b.report).unwrap()
    );
    assert_eq!(a.common.matrix, b.common.matrix);
}
