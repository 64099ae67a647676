use super::AnalysisError;
use crate::harness::KillMatrix;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Output of the greedy disjoint-mutant selection.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DisjointResult {
    /// Selected mutants, in selection order.
    #[serde(rename = "D")]
    pub d: Vec<u32>,
    /// For each selected mutant, the mutants it subsumed when it was picked.
    pub subsumed: BTreeMap<u32, Vec<u32>>,
    pub live: Vec<u32>,
    /// Duplicate id to the representative kept in its place.
    pub duplicates: BTreeMap<u32, u32>,
}

/// Drops the all-zero columns, keeping the order of the rest.
pub fn remove_live(m: &KillMatrix) -> KillMatrix {
    let keep: Vec<usize> = (0..m.n_mutants()).filter(|&j| !m.is_live(j)).collect();
    m.select_columns(&keep)
}

/// Collapses columns with identical kill patterns onto the lowest mutant id.
pub fn remove_duplicates(m: &KillMatrix) -> (KillMatrix, BTreeMap<u32, u32>) {
    let mut order: Vec<usize> = (0..m.n_mutants()).collect();
    order.sort_by_key(|&j| m.mutants()[j]);
    let mut first: HashMap<&[bool], u32> = HashMap::new();
    let mut duplicates = BTreeMap::new();
    let mut dup_cols = BTreeSet::new();
    for j in order {
        let id = m.mutants()[j];
        match first.get(m.column(j)) {
            Some(&rep) => {
                duplicates.insert(id, rep);
                dup_cols.insert(j);
            }
            None => {
                first.insert(m.column(j), id);
            }
        }
    }
    let keep: Vec<usize> = (0..m.n_mutants()).filter(|j| !dup_cols.contains(j)).collect();
    (m.select_columns(&keep), duplicates)
}

fn subset(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).all(|(x, y)| !*x || *y)
}

/// All mutants (including `id`) killed by every test that kills `id`.
pub fn subsumed_set(m: &KillMatrix, id: u32) -> Result<BTreeSet<u32>, AnalysisError> {
    let col = m.index_of(id).ok_or(AnalysisError::UnknownMutant(id))?;
    if m.is_live(col) {
        return Err(AnalysisError::LiveMutant(id));
    }
    Ok((0..m.n_mutants())
        .filter(|&j| subset(m.column(col), m.column(j)))
        .map(|j| m.mutants()[j])
        .collect())
}

/// Greedy disjoint mutant set.
///
/// Removes live and duplicate mutants, then repeatedly picks the mutant that
/// subsumes the most remaining mutants (lowest id on ties) and removes
/// everything it subsumes, until nothing remains.
pub fn disjoint_mutants(m: &KillMatrix) -> DisjointResult {
    let live: Vec<u32> = (0..m.n_mutants())
        .filter(|&j| m.is_live(j))
        .map(|j| m.mutants()[j])
        .collect();
    let (s, duplicates) = remove_duplicates(&remove_live(m));

    let mut remaining: Vec<usize> = (0..s.n_mutants()).collect();
    remaining.sort_by_key(|&j| s.mutants()[j]);
    let mut d = Vec::new();
    let mut subsumed = BTreeMap::new();
    while !remaining.is_empty() {
        let mut best: Option<(usize, Vec<usize>)> = None;
        for &j in &remaining {
            let sub: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&k| subset(s.column(j), s.column(k)))
                .collect();
            if best.as_ref().is_none_or(|(_, b)| sub.len() > b.len()) {
                best = Some((j, sub));
            }
        }
        let (j, sub) = best.expect("remaining is non-empty");
        let id = s.mutants()[j];
        let mut ids: Vec<u32> = sub.iter().map(|&k| s.mutants()[k]).collect();
        ids.sort_unstable();
        d.push(id);
        subsumed.insert(id, ids);
        remaining.retain(|k| !sub.contains(k));
    }
    DisjointResult {
        d,
        subsumed,
        live,
        duplicates,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(ids: Vec<u32>, rows: &[&[u8]]) -> KillMatrix {
        KillMatrix::from_rows(
            (0..rows.len()).map(|i| format!("t{}", i + 1)).collect(),
            ids,
            &rows.iter().map(|r| r.iter().map(|c| *c == 1).collect()).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    /// killers: m1={t1}, m2={t1,t2}, m3={t2,t3}, m4={}, m5={t1,t2}.
    fn five() -> KillMatrix {
        matrix(vec![1, 2, 3, 4, 5], &[&[1, 1, 0, 0, 1], &[0, 1, 1, 0, 1], &[0, 0, 1, 0, 0]])
    }

    #[test]
    fn hand_traced_example() {
        let r = disjoint_mutants(&five());
        assert_eq!(r.d, [1, 3]);
        assert_eq!(r.live, [4]);
        assert_eq!(r.duplicates, BTreeMap::from([(5, 2)]));
        assert_eq!(r.subsumed, BTreeMap::from([(1, vec![1, 2]), (3, vec![3])]));
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, r#"{"D":[1,3],"subsumed":{"1":[1,2],"3":[3]},"live":[4],"duplicates":{"5":2}}"#);
    }

    #[test]
    fn subsumed_set_examples() {
        let m = matrix(vec![1, 2, 3], &[&[1, 1, 0], &[0, 1, 1]]);
        assert_eq!(subsumed_set(&m, 1).unwrap(), BTreeSet::from([1, 2]));
        assert_eq!(subsumed_set(&m, 2).unwrap(), BTreeSet::from([2]));
        assert_eq!(subsumed_set(&m, 3).unwrap(), BTreeSet::from([2, 3]));
        let with_live = matrix(vec![0, 1], &[&[1, 0]]);
        assert_eq!(subsumed_set(&with_live, 1), Err(AnalysisError::LiveMutant(1)));
        assert_eq!(subsumed_set(&with_live, 7), Err(AnalysisError::UnknownMutant(7)));
        let everyone = matrix(vec![0, 1, 2], &[&[1, 1, 0], &[1, 0, 1]]);
        assert_eq!(subsumed_set(&everyone, 0).unwrap(), BTreeSet::from([0]));
        let all_kill = matrix(vec![0, 1, 2], &[&[1, 1, 1], &[1, 0, 1]]);
        assert_eq!(subsumed_set(&all_kill, 1).unwrap(), BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn live_and_duplicate_removal() {
        let all_zero = matrix(vec![0, 1], &[&[0, 0]]);
        assert_eq!(remove_live(&all_zero).n_mutants(), 0);
        let m = five();
        assert_eq!(remove_live(&m).mutants(), [1, 2, 3, 5]);
        let distinct = matrix(vec![0, 1], &[&[1, 0], &[0, 1]]);
        assert_eq!(remove_live(&distinct), distinct);
        assert!(remove_duplicates(&distinct).1.is_empty());
        let three = matrix(vec![7, 3, 5], &[&[1, 1, 1]]);
        let (kept, dups) = remove_duplicates(&three);
        assert_eq!(kept.mutants(), [3]);
        assert_eq!(dups, BTreeMap::from([(5, 3), (7, 3)]));
    }

    #[test]
    fn degenerate_matrices() {
        let empty = KillMatrix::new(vec![], vec![], vec![]).unwrap();
        assert_eq!(disjoint_mutants(&empty), DisjointResult::default());
        let same = matrix(vec![0, 1, 2], &[&[1, 1, 1], &[0, 0, 0]]);
        assert_eq!(disjoint_mutants(&same).d, [0]);
    }
}
