use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use evosky::skyline::Selection;
use evosky::synth::{synthetic_bibliographic, SyntheticParams};
use evosky::{AggregationSpec, EventKind, Exploration, Query, Semantics};

fn skyline(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let g = synthetic_bibliographic(&mut rng, &SyntheticParams::bibliographic().scaled_down(4));
    let spec = AggregationSpec::by_props(&g, ["gender"]).unwrap();
    let mut group = c.benchmark_group("unified_skyline");
    group.sample_size(10);
    for (kind, sem) in [
        (EventKind::Stability, Semantics::Strict),
        (EventKind::Stability, Semantics::Loose),
        (EventKind::Growth, Semantics::Loose),
        (EventKind::Shrinkage, Semantics::Loose),
    ] {
        let q = Query {
            kind,
            semantics: sem,
            edge_label: "collaborate".into(),
            spec: spec.clone(),
        };
        let ex = Exploration::new(&g, q).unwrap();
        group.bench_function(BenchmarkId::from_parameter(format!("{kind}-{sem}")), |b| {
            b.iter(|| {
                let cands = ex.candidates().unwrap();
                ex.skyline_of(&cands, Selection::Unified)
            })
        });
    }
    group.finish();
}

criterion_group!(benches, skyline);
criterion_main!(benches);
