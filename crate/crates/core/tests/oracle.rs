use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use evosky::aggregate::{aggregate, count, CombinationUniverse};
use evosky::skyline::{BruteForce, Selection};
use evosky::synth::{all_queries, random_graph, random_spec, RandomGraphParams};
use evosky::{event_graph, Exploration, SkylineTuple, TupleId, Window};

fn by_id(b: &BruteForce) -> BTreeMap<TupleId, (SkylineTuple, usize)> {
    b.skyline_tuples()
        .map(|(t, d)| (t.id(), (t.clone(), d)))
        .collect()
}

#[test]
fn sweep_candidates_match_definitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let g = random_graph(&mut rng, &RandomGraphParams::default());
        let spec = random_spec(&mut rng);
        for q in all_queries(&spec) {
            let ex = Exploration::new(&g, q.clone()).unwrap();
            let mut fast = ex.candidates().unwrap();
            let mut slow = ex.brute_force(Selection::Unified).unwrap().candidates;
            fast.sort_by_key(SkylineTuple::id);
            slow.sort_by_key(SkylineTuple::id);
            assert_eq!(fast, slow, "{q:?}");
        }
    }
}

#[test]
fn engine_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..40 {
        let g = random_graph(&mut rng, &RandomGraphParams::default());
        let spec = random_spec(&mut rng);
        for q in all_queries(&spec) {
            let ex = Exploration::new(&g, q.clone()).unwrap();
            let cands = ex.candidates().unwrap();
            let mut selections = vec![Selection::Unified];
            selections.extend((0..ex.universe().len()).map(Selection::Individual));
            for sel in selections {
                let fast = ex.skyline_of(&cands, sel);
                let got: BTreeMap<_, _> = fast
                    .rows()
                    .into_iter()
                    .map(|(t, d)| (t.id(), (t.clone(), d)))
                    .collect();
                assert_eq!(got, by_id(&ex.brute_force(sel).unwrap()), "{q:?} {sel:?}");
            }
        }
    }
}

// The count of a pair in an event graph equals the weight of the matching
// grouped edge of its aggregate.
#[test]
fn counts_equal_aggregate_edge_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..40 {
        let g = random_graph(&mut rng, &RandomGraphParams::default());
        let spec = random_spec(&mut rng);
        let u = CombinationUniverse::new(&g, "link", &spec).unwrap();
        for q in all_queries(&spec) {
            for r in 1..g.horizon_len() as u32 {
                let r = evosky::TimeInstant(r);
                for len in 1..=r.index() {
                    let w = Window::preceding(r, len).unwrap().to_element();
                    let ev = event_graph(&g, q.kind, r, &w, q.semantics).unwrap();
                    let agg = aggregate(&ev, &spec).unwrap();
                    for (s, d) in u.pairs() {
                        let mut weight = agg.edge_weight("link", s, d);
                        if u.is_symmetric() && s != d {
                            weight += agg.edge_weight("link", d, s);
                        }
                        assert_eq!(count(&ev, &u, s, d).unwrap(), weight);
                    }
                }
            }
        }
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..10 {
        let g = random_graph(&mut rng, &RandomGraphParams::default());
        let spec = random_spec(&mut rng);
        for q in all_queries(&spec) {
            let one = Exploration::new(&g, q.clone()).unwrap().with_threads(1);
            let many = Exploration::new(&g, q).unwrap().with_threads(8);
            assert_eq!(
                one.unified_skyline().unwrap(),
                many.unified_skyline().unwrap()
            );
        }
    }
}
