use super::*;
use crate::metric::DistanceOrder;

fn coordinate_example() -> (DataPoint, SelectionInstance) {
    let rows: [&[i64]; 5] = [&[0, 2, 1, 3, 2], &[0, 1, 1, 3, 1], &[1, 2, 1, 3, 1], &[0, 2, 2, 3, 2], &[0, 2, 2, 3, 1]];
    let groups = rows.iter().map(|r| vec![DataPoint::from_i64(r)]).collect();
    let inst = SelectionInstance::unit(DistanceOrder::l1(), groups, CostValue::int(2)).unwrap();
    (DataPoint::from_i64(rows[0]), inst)
}

fn h(v: usize, edges: &[&[usize]]) -> Hypergraph {
    Hypergraph::new(v, edges.iter().map(|e| (e.to_vec(), 1)).collect()).unwrap()
}

#[test]
fn difference_hypergraph_of_example() {
    let (pivot, inst) = coordinate_example();
    let g = build_difference_hypergraph(&pivot, &inst, inst.budget(), &Tolerance::default()).unwrap();
    let nonempty: Vec<Vec<usize>> = g.edges().iter().filter(|(e, _)| !e.is_empty()).map(|(e, _)| e.clone()).collect();
    // Coordinates are zero-based here: {2,5},{1,5},{3},{3,5}.
    assert_eq!(nonempty, vec![vec![1, 4], vec![0, 4], vec![2], vec![2, 4]]);
}

#[test]
fn difference_hypergraph_cutoffs() {
    let same = SelectionInstance::unit(
        DistanceOrder::l1(),
        vec![vec![DataPoint::from_i64(&[1, 1])], vec![DataPoint::from_i64(&[1, 1])]],
        CostValue::int(1),
    )
    .unwrap();
    let g =
        build_difference_hypergraph(&DataPoint::from_i64(&[1, 1]), &same, &CostValue::int(1), &Tolerance::default())
            .unwrap();
    assert!(g.edges().iter().all(|(e, _)| e.is_empty()));

    let far = SelectionInstance::unit(
        DistanceOrder::l1(),
        vec![vec![DataPoint::from_i64(&[0, 0, 0])], vec![DataPoint::from_i64(&[1, 1, 0])]],
        CostValue::int(1),
    )
    .unwrap();
    let g =
        build_difference_hypergraph(&DataPoint::from_i64(&[0, 0, 0]), &far, &CostValue::int(1), &Tolerance::default())
            .unwrap();
    assert_eq!(g.edges().len(), 1);

    let heavy = SelectionInstance::new(
        DistanceOrder::l1(),
        1,
        vec![vec![DataPoint::from_i64(&[0])], vec![DataPoint::from_i64(&[1])]],
        vec![vec![1u32.into()], vec![5u32.into()]],
        CostValue::int(2),
    )
    .unwrap();
    let g = build_difference_hypergraph(&DataPoint::from_i64(&[0]), &heavy, &CostValue::int(2), &Tolerance::default())
        .unwrap();
    assert_eq!(g.edges().len(), 1);
}

#[test]
fn quarter_cover_examples() {
    assert!(quarter_cover_holds(&h(1, &[&[0], &[0]])));
    assert!(!quarter_cover_holds(&h(2, &[&[0], &[0], &[0], &[0]])));
    assert!(quarter_cover_holds(&h(1, &[&[0], &[0]])));
    assert!(quarter_cover_holds(&h(2, &[&[0], &[0], &[0], &[1]])));
    assert!(!quarter_cover_holds(&h(2, &[&[0], &[0], &[0], &[0], &[1]])));
}

#[test]
fn patterns_for_small_budgets() {
    let caps = PatternCaps::default();
    let one = enumerate_patterns(1, &caps).unwrap();
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].hypergraph, h(1, &[&[0]]));

    let two = enumerate_patterns(2, &caps).unwrap();
    let forms: Vec<_> = two.iter().map(|p| canonical_form(&p.hypergraph)).collect();
    for expected in
        [h(1, &[&[0]]), h(1, &[&[0], &[0]]), h(2, &[&[0, 1]]), h(2, &[&[0, 1], &[0, 1]]), h(1, &[&[0], &[]])]
    {
        assert!(forms.contains(&canonical_form(&expected)), "{expected:?}");
    }
    assert!(!forms.contains(&canonical_form(&h(2, &[&[0], &[0]]))));
    assert!(two.iter().all(|p| p.quarter_covered && quarter_cover_holds(&p.hypergraph)));
}

#[test]
fn patterns_have_no_isomorphic_duplicates() {
    for budget in 1..=3 {
        let patterns = enumerate_patterns(budget, &PatternCaps::default()).unwrap();
        let forms: BTreeSet<_> = patterns.iter().map(|p| canonical_form(&p.hypergraph)).collect();
        assert_eq!(forms.len(), patterns.len());
    }
}

#[test]
fn pattern_budget_zero_and_caps() {
    assert!(enumerate_patterns(0, &PatternCaps::default()).is_err());
    let tiny = PatternCaps { candidates: 3, ..PatternCaps::default() };
    assert!(matches!(enumerate_patterns(3, &tiny), Err(Error::CapExceeded { .. })));
}

#[test]
fn appearances_in_example() {
    let (pivot, inst) = coordinate_example();
    let host = build_difference_hypergraph(&pivot, &inst, inst.budget(), &Tolerance::default()).unwrap();
    let found = find_appearances(&h(1, &[&[0], &[0]]), &host);
    assert!(found.contains(&vec![2]));
    assert_eq!(find_appearances(&h(0, &[]), &host), vec![Vec::<usize>::new()]);
    assert!(find_appearances(&h(3, &[&[0, 1, 2]]), &host).is_empty());
}

#[test]
fn appearances_are_sound() {
    let host = h(5, &[&[0, 1], &[1, 2, 3], &[3], &[0, 4], &[]]);
    let patterns = enumerate_patterns(3, &PatternCaps::default()).unwrap();
    for pattern in &patterns {
        for set in find_appearances(&pattern.hypergraph, &host) {
            assert!(witness_exists(&pattern.hypergraph, &host, &set), "{pattern:?} at {set:?}");
        }
    }
}

/// Brute-force check of the bijection condition over all orderings of `set`.
fn witness_exists(pattern: &Hypergraph, host: &Hypergraph, set: &[usize]) -> bool {
    permutations(set.len()).iter().any(|perm| {
        pattern.edges().iter().all(|(pe, _)| {
            let image: BTreeSet<usize> = pe.iter().map(|&v| set[perm[v]]).collect();
            host.edges().iter().any(|(he, _)| {
                let cut: BTreeSet<usize> = he.iter().copied().filter(|v| set.contains(v)).collect();
                cut == image
            })
        })
    })
}

#[test]
fn candidate_sets() {
    let (pivot, inst) = coordinate_example();
    let host = build_difference_hypergraph(&pivot, &inst, inst.budget(), &Tolerance::default()).unwrap();
    let caps = PatternCaps::default();
    let exhaustive = candidate_coordinate_sets(&host, 2, CandidateMode::Exhaustive, &caps).unwrap();
    assert_eq!(exhaustive.len(), 1 + 4 + 6);
    assert!(exhaustive.contains(&vec![2]));
    let paper = candidate_coordinate_sets(&host, 2, CandidateMode::Paper, &caps).unwrap();
    assert!(paper.contains(&vec![2]));
    assert!(paper.is_subset(&exhaustive));

    let empty = h(3, &[]);
    assert_eq!(
        candidate_coordinate_sets(&empty, 2, CandidateMode::Exhaustive, &caps).unwrap(),
        BTreeSet::from([vec![]])
    );
    assert_eq!(candidate_coordinate_sets(&empty, 2, CandidateMode::Paper, &caps).unwrap(), BTreeSet::from([vec![]]));
}

#[test]
fn log_edge_bound_values() {
    assert_eq!(log_edge_bound(1), log_edge_bound(2));
    assert_eq!(log_edge_bound(2), (160.0 * 2f64.ln()).ceil() as usize);
}
