//! Property tests for switching, canonical labelling, spectra and detection.

use proptest::prelude::*;
use sgspec_core::forbidden::find_unbalanced_kst;
use sgspec_core::spectra::multisets_match;
use sgspec_core::{
    adjacency, canonical_key, find_witness, is_free, lambda1, negative_edge_minimize, read_graph, spectrum,
    write_graph, ForbiddenFamily, Limits, Sign, SignedGraph, SwitchingSet,
};

/// `state[k]` for the k-th pair in row-major order: 0 absent, 1 positive, 2 negative.
fn graph_from(n: usize, states: &[u8]) -> SignedGraph {
    let mut edges = Vec::new();
    let mut k = 0;
    for u in 0..n {
        for v in (u + 1)..n {
            match states[k] % 3 {
                1 => edges.push((u, v, Sign::Positive)),
                2 => edges.push((u, v, Sign::Negative)),
                _ => {}
            }
            k += 1;
        }
    }
    SignedGraph::new(n, edges).unwrap()
}

fn graph(max_n: usize) -> impl Strategy<Value = SignedGraph> {
    (3..=max_n).prop_flat_map(|n| prop::collection::vec(0u8..3, n * (n - 1) / 2).prop_map(move |s| graph_from(n, &s)))
}

/// A graph with a switching set and a relabelling of its vertices.
fn graph_switch_perm(max_n: usize) -> impl Strategy<Value = (SignedGraph, SwitchingSet, Vec<usize>)> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        let perm = Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
        (Just(g), any::<u64>(), perm)
            .prop_map(move |(g, m, p)| (g, SwitchingSet::new(n, m & ((1u64 << n) - 1)).unwrap(), p))
    })
}

fn family() -> impl Strategy<Value = ForbiddenFamily> {
    prop_oneof![
        Just(ForbiddenFamily::K33),
        (2usize..=3, 2usize..=3).prop_map(|(s, t)| ForbiddenFamily::kst(s, t).unwrap()),
        (3usize..=5).prop_map(|r| ForbiddenFamily::kr(r).unwrap()),
        (3usize..=6).prop_map(|k| ForbiddenFamily::ck(k).unwrap()),
    ]
}

/// Negative 4-cycles by direct enumeration of ordered quadruples.
fn has_negative_c4(g: &SignedGraph) -> bool {
    let n = g.n();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let distinct = a != b && a != c && a != d && b != c && b != d && c != d;
                    if distinct && g.cycle_sign(&[a, b, c, d]) == Some(Sign::Negative) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

proptest! {
    #[test]
    fn balance_is_switching_invariant((g, s, _) in graph_switch_perm(12)) {
        prop_assert_eq!(g.is_balanced(), g.switch(&s).is_balanced());
    }

    #[test]
    fn switching_is_an_involution((g, s, _) in graph_switch_perm(12)) {
        prop_assert_eq!(g.switch(&s).switch(&s), g);
    }

    #[test]
    fn cycle_sign_is_switching_invariant(
        (g, s, perm) in graph_switch_perm(10),
        k in 3usize..=10,
        signs in prop::collection::vec(any::<bool>(), 10),
    ) {
        let k = k.min(g.n());
        let cycle: Vec<usize> = perm[..k].to_vec();
        let mut h = g;
        for i in 0..k {
            let sign = if signs[i] { Sign::Negative } else { Sign::Positive };
            h = h.with_edge(cycle[i], cycle[(i + 1) % k], sign).unwrap();
        }
        let before = h.cycle_sign(&cycle);
        prop_assert!(before.is_some());
        prop_assert_eq!(before, h.switch(&s).cycle_sign(&cycle));
        let negatives = (0..k).filter(|&i| signs[i]).count();
        let expected = if negatives % 2 == 1 { Sign::Negative } else { Sign::Positive };
        prop_assert_eq!(before, Some(expected));
    }

    #[test]
    fn negative_edge_minimize_stays_in_class(g in graph(10)) {
        let (m, set) = negative_edge_minimize(&g, &Limits::default()).unwrap();
        prop_assert_eq!(g.switch(&set), m.clone());
        prop_assert!(m.negative_edge_count() <= g.negative_edge_count());
        if g.is_balanced() {
            prop_assert_eq!(m.negative_edge_count(), 0);
        }
    }

    #[test]
    fn negative_edge_minimize_is_optimal(g in graph(7)) {
        let n = g.n();
        let best = (0..1u64 << n)
            .map(|m| g.switch(&SwitchingSet::new(n, m).unwrap()).negative_edge_count())
            .min()
            .unwrap();
        let (m, _) = negative_edge_minimize(&g, &Limits::default()).unwrap();
        prop_assert_eq!(m.negative_edge_count(), best);
    }

    #[test]
    fn canonical_key_is_class_invariant((g, s, perm) in graph_switch_perm(7)) {
        let limits = Limits::default();
        let h = g.switch(&s).permute(&perm).unwrap();
        prop_assert_eq!(canonical_key(&g, &limits).unwrap(), canonical_key(&h, &limits).unwrap());
    }

    #[test]
    fn canonical_key_separates_visible_differences(a in graph(7), b in graph(7)) {
        let limits = Limits::default();
        let ka = canonical_key(&a, &limits).unwrap();
        let kb = canonical_key(&b, &limits).unwrap();
        let ua = canonical_key(&a.underlying(), &limits).unwrap();
        let ub = canonical_key(&b.underlying(), &limits).unwrap();
        if a.n() != b.n() || a.is_balanced() != b.is_balanced() || ua != ub {
            prop_assert_ne!(ka, kb);
        }
    }

    #[test]
    fn spectrum_is_switching_and_permutation_invariant((g, s, perm) in graph_switch_perm(12)) {
        let base = spectrum(&adjacency(&g), 1e-10).unwrap();
        let switched = spectrum(&adjacency(&g.switch(&s)), 1e-10).unwrap();
        let permuted = spectrum(&adjacency(&g.permute(&perm).unwrap()), 1e-10).unwrap();
        prop_assert!(multisets_match(&base.eigenvalues, &switched.eigenvalues, 1e-8));
        prop_assert!(multisets_match(&base.eigenvalues, &permuted.eigenvalues, 1e-8));
    }

    #[test]
    fn spectrum_trace_identities(g in graph(12)) {
        let s = spectrum(&adjacency(&g), 1e-10).unwrap();
        let sum: f64 = s.eigenvalues.iter().sum();
        let squares: f64 = s.eigenvalues.iter().map(|x| x * x).sum();
        prop_assert!(sum.abs() < 1e-8);
        prop_assert!((squares - 2.0 * g.edge_count() as f64).abs() < 1e-8);
        prop_assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn induced_subgraphs_interlace(g in graph(12), mask in any::<u64>()) {
        let keep: Vec<usize> = (0..g.n()).filter(|v| mask >> v & 1 == 1).collect();
        prop_assume!(!keep.is_empty());
        let h = g.induced(&keep).unwrap();
        prop_assert!(lambda1(&h).unwrap() <= lambda1(&g).unwrap() + 1e-9);
    }

    #[test]
    fn freeness_is_switching_invariant((g, s, _) in graph_switch_perm(9), fam in family()) {
        prop_assert_eq!(is_free(&g, &fam).unwrap(), is_free(&g.switch(&s), &fam).unwrap());
    }

    #[test]
    fn witnesses_validate(g in graph(9), fam in family()) {
        if let Some(w) = find_witness(&g, &fam).unwrap() {
            prop_assert!(w.validate(&g, &fam));
            prop_assert_eq!(g.cycle_sign(&w.certificate_cycle), Some(Sign::Negative));
        } else if g.is_balanced() {
            prop_assert!(is_free(&g, &fam).unwrap());
        }
    }

    #[test]
    fn witnesses_survive_disjoint_positive_edges(g in graph(9), fam in family(), u in 0usize..9, v in 0usize..9) {
        let n = g.n();
        let (u, v) = (u % n, v % n);
        if let Some(w) = find_witness(&g, &fam).unwrap() {
            if u == v || (w.vertices.contains(&u) && w.vertices.contains(&v)) {
                return Ok(());
            }
            let h = g.with_edge(u, v, Sign::Positive).unwrap();
            prop_assert!(w.validate(&h, &fam));
            prop_assert!(!is_free(&h, &fam).unwrap());
        }
    }

    #[test]
    fn c4_detection_matches_enumeration(g in graph(7)) {
        prop_assert_eq!(find_unbalanced_kst(&g, 2, 2).is_some(), has_negative_c4(&g));
    }

    #[test]
    fn sg_text_round_trips(g in graph(16)) {
        prop_assert_eq!(read_graph(&write_graph(&g)).unwrap(), g);
    }
}
