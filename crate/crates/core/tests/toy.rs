use std::path::PathBuf;

use evosky::aggregate::{aggregate, count, AggregationSpec, CombinationUniverse, EndpointKey};
use evosky::fixtures::bibliographic_toy;
use evosky::ingest::{load_manifest, load_unvalidated, DatasetManifest};
use evosky::report::display_tuple;
use evosky::{
    event_graph, EventKind, Exploration, Query, Semantics, TemporalElement, TimeInstant,
    ViolationKind,
};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .join("manifest.toml")
}

fn gender(v: &str) -> EndpointKey {
    EndpointKey::group([("gender", v)])
}

#[test]
fn csv_fixture_matches_builder() {
    assert_eq!(load_manifest(fixture("toy")).unwrap(), bibliographic_toy());
}

#[test]
fn broken_fixture_has_one_violation() {
    let m = DatasetManifest::from_path(fixture("toy_broken")).unwrap();
    let v = load_unvalidated(&m).unwrap().validate();
    assert_eq!(v.len(), 1, "{v:?}");
    assert_eq!(v[0].element, "7");
    assert!(
        matches!(&v[0].kind, ViolationKind::MissingProperty { prop } if prop == "#publications")
    );
}

#[test]
fn stable_collaboration_count() {
    let g = bibliographic_toy();
    let spec = AggregationSpec::by_props(&g, ["gender"]).unwrap();
    let u = CombinationUniverse::new(&g, "collaborate", &spec).unwrap();
    let window = TemporalElement::interval(0, 1).unwrap();
    let ev = event_graph(
        &g,
        EventKind::Stability,
        TimeInstant(2),
        &window,
        Semantics::Loose,
    )
    .unwrap();
    assert_eq!(
        count(&ev, &u, &gender("male"), &gender("female")).unwrap(),
        1
    );
}

#[test]
fn snapshot_aggregations() {
    let g = bibliographic_toy();
    let snap = g.snapshot(TimeInstant(2)).unwrap();

    let by_gender = aggregate(&snap, &AggregationSpec::by_props(&g, ["gender"]).unwrap()).unwrap();
    let c = |v: &str| evosky::Combination::of([("gender", v)]);
    assert_eq!(by_gender.group_weight(&c("male")), 2);
    assert_eq!(by_gender.group_weight(&c("female")), 2);
    assert_eq!(
        by_gender.edge_weight("collaborate", &gender("female"), &gender("male")),
        2
    );
    assert_eq!(
        by_gender.edge_weight("publish", &gender("male"), &EndpointKey::Node("4".into())),
        1
    );

    let both = AggregationSpec::by_props(&g, ["gender", "topic"]).unwrap();
    let agg = aggregate(&snap, &both).unwrap();
    let dm = evosky::Combination::of([("topic", "data mining")]);
    assert_eq!(agg.group_weight(&dm), 2);
    assert_eq!(
        agg.edge_weight("publish", &gender("male"), &EndpointKey::Group(dm)),
        3
    );
}

// Hand-derived: at t_r = 2 the window [1] keeps 1-2 and 2-6; at t_r = 3
// both windows keep only 2-6, and the longer one wins.
#[test]
fn strict_stability_skyline() {
    let g = bibliographic_toy();
    let q = Query {
        kind: EventKind::Stability,
        semantics: Semantics::Strict,
        edge_label: "collaborate".into(),
        spec: AggregationSpec::by_props(&g, ["gender"]).unwrap(),
    };
    let ex = Exploration::new(&g, q).unwrap();
    assert_eq!(
        ex.universe().pair_names(),
        ["female~female", "female~male", "male~male"]
    );
    let r = ex.unified_skyline().unwrap();
    let rows: Vec<(String, Vec<u64>, usize)> = r
        .rows()
        .into_iter()
        .map(|(t, d)| (display_tuple(&g, t), t.counts.counts.clone(), d))
        .collect();
    assert_eq!(
        rows,
        [
            ("([3], [1, 2], 1)".to_string(), vec![0, 1, 0], 1),
            ("([2], [1], 2)".to_string(), vec![0, 1, 1], 1),
        ]
    );
}
