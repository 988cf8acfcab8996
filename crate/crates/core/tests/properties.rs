use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use evosky::aggregate::{count_vector, CombinationUniverse, CountVector};
use evosky::skyline::pareto_dominates;
use evosky::synth::{all_queries, random_graph, random_spec, RandomGraphParams};
use evosky::{
    count_direction, dominates, event_graph, CountDirection, EventKind, Semantics, SkylineTuple,
    TimeInstant, Window,
};

fn tuple(reference: u32, len: usize, counts: Vec<u64>) -> SkylineTuple {
    SkylineTuple {
        reference: TimeInstant(reference),
        window: Window::preceding(TimeInstant(reference), len).unwrap(),
        counts: CountVector {
            counts,
            length: len,
        },
    }
}

fn arb_tuple(dims: usize) -> impl Strategy<Value = SkylineTuple> {
    (1usize..6, prop::collection::vec(0u64..4, dims)).prop_map(|(len, c)| tuple(6, len, c))
}

fn arb_dir() -> impl Strategy<Value = CountDirection> {
    prop_oneof![
        Just(CountDirection::Increasing),
        Just(CountDirection::Decreasing)
    ]
}

proptest! {
    #[test]
    fn dominance_is_a_strict_order(
        (a, b, c) in (1usize..4).prop_flat_map(|d| (arb_tuple(d), arb_tuple(d), arb_tuple(d))),
        dir in arb_dir(),
    ) {
        prop_assert!(!dominates(&a, &a, dir).unwrap());
        if dominates(&a, &b, dir).unwrap() {
            prop_assert!(!dominates(&b, &a, dir).unwrap());
            if dominates(&b, &c, dir).unwrap() {
                prop_assert!(dominates(&a, &c, dir).unwrap());
            }
        }
    }

    #[test]
    fn dominance_agrees_with_pareto(
        (a, b) in (1usize..4).prop_flat_map(|d| (arb_tuple(d), arb_tuple(d))),
        dir in arb_dir(),
    ) {
        prop_assert_eq!(dominates(&a, &b, dir).unwrap(), pareto_dominates(&a, &b, dir));
    }
}

fn graphs() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // Growing the window moves every count in the tabulated direction.
    #[test]
    fn counts_are_monotone_in_window_length(seed in graphs()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, &RandomGraphParams::default());
        let spec = random_spec(&mut rng);
        let u = CombinationUniverse::new(&g, "link", &spec).unwrap();
        for q in all_queries(&spec) {
            let dir = count_direction(q.kind, q.semantics);
            for r in 2..g.horizon_len() as u32 {
                let r = TimeInstant(r);
                let mut prev: Option<CountVector> = None;
                for len in 1..=r.index() {
                    let w = Window::preceding(r, len).unwrap().to_element();
                    let ev = event_graph(&g, q.kind, r, &w, q.semantics).unwrap();
                    let v = count_vector(&ev, &u).unwrap();
                    if let Some(p) = &prev {
                        for (old, new) in p.counts.iter().zip(&v.counts) {
                            match dir {
                                CountDirection::Increasing => prop_assert!(new >= old),
                                CountDirection::Decreasing => prop_assert!(new <= old),
                            }
                        }
                    }
                    prev = Some(v);
                }
            }
        }
    }

    #[test]
    fn events_partition_their_operands(seed in graphs()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, &RandomGraphParams::default());
        for sem in Semantics::ALL {
            for r in 1..g.horizon_len() as u32 {
                let r = TimeInstant(r);
                let snap = g.snapshot(r).unwrap().elements.edges;
                for len in 1..=r.index() {
                    let w = Window::preceding(r, len).unwrap().to_element();
                    let combined = g.combine(&w, sem).unwrap().edges;
                    let ev = |k| event_graph(&g, k, r, &w, sem).unwrap().elements.edges;
                    let (s, gr, sh) = (ev(EventKind::Stability), ev(EventKind::Growth), ev(EventKind::Shrinkage));
                    let mut a: Vec<u32> = s.iter().chain(&gr).copied().collect();
                    a.sort_unstable();
                    prop_assert_eq!(a.len(), snap.len());
                    prop_assert_eq!(&a, &snap);
                    let mut b: Vec<u32> = s.iter().chain(&sh).copied().collect();
                    b.sort_unstable();
                    prop_assert_eq!(&b, &combined);
                }
            }
        }
    }
}
