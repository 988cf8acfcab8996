use std::path::PathBuf;
use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use evosky::ingest::write_dataset;
use evosky::synth::{random_graph, RandomGraphParams};
use evosky::{GraphBuilder, Interval, TimeInstant};

fn evosky(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evosky"))
        .args(args)
        .output()
        .unwrap()
}

fn toy() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures/toy/manifest.toml")
        .to_string_lossy()
        .into_owned()
}

fn broken() -> String {
    toy().replace("fixtures/toy/", "fixtures/toy_broken/")
}

#[test]
fn validate_exit_codes() {
    let ok = evosky(&["validate", "--manifest", &toy()]);
    assert_eq!(ok.status.code(), Some(0));

    let bad = evosky(&["validate", "--manifest", &broken()]);
    assert_eq!(bad.status.code(), Some(2));
    let report: serde_json::Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(report["valid"], false);
    assert_eq!(report["violations"].as_array().unwrap().len(), 1);
    assert_eq!(report["violations"][0]["kind"], "missing_property");

    let missing = evosky(&["validate", "--manifest", "/nonexistent/manifest.toml"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    let base = ["skyline", "--manifest"];
    let cases: [&[&str]; 3] = [
        &[
            "--event",
            "decay",
            "--semantics",
            "strict",
            "--edge-label",
            "collaborate",
            "--agg-props",
            "gender",
        ],
        &[
            "--event",
            "growth",
            "--semantics",
            "strict",
            "--edge-label",
            "collaborate",
            "--agg-props",
            "gender",
            "--top-k",
            "0",
        ],
        &[
            "--event",
            "growth",
            "--semantics",
            "strict",
            "--edge-label",
            "cites",
            "--agg-props",
            "gender",
        ],
    ];
    let toy = toy();
    for extra in cases {
        let mut args: Vec<&str> = base.to_vec();
        args.push(&toy);
        args.extend_from_slice(extra);
        assert_eq!(evosky(&args).status.code(), Some(1), "{extra:?}");
    }
}

#[test]
fn skyline_on_toy_writes_expected_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = evosky(&[
        "skyline",
        "--manifest",
        &toy(),
        "--event",
        "stability",
        "--semantics",
        "strict",
        "--edge-label",
        "collaborate",
        "--agg-props",
        "gender",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let unified = std::fs::read_to_string(dir.path().join("unified.csv")).unwrap();
    assert_eq!(
        unified,
        "reference,start,end,length,female~female,female~male,male~male,dod,display\n\
         3,1,2,2,0,1,0,1,\"([3], [1, 2], 1)\"\n\
         2,1,1,1,0,1,1,1,\"([2], [1], 2)\"\n"
    );
    let sizes = std::fs::read_to_string(dir.path().join("sizes.csv")).unwrap();
    assert_eq!(
        sizes,
        "event,semantics,female~female,female~male,male~male,unified\nstability,strict,1,1,2,2\n"
    );
}

#[test]
fn top_k_prints_at_most_k_rows() {
    let out = evosky(&[
        "skyline",
        "--manifest",
        &toy(),
        "--event",
        "shrinkage",
        "--semantics",
        "loose",
        "--edge-label",
        "publish",
        "--agg-props",
        "gender,topic",
        "--top-k",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let block: Vec<&str> = stdout
        .lines()
        .skip_while(|l| !l.starts_with("top-3"))
        .skip(1)
        .collect();
    assert!(!block.is_empty() && block.len() <= 3, "{stdout}");
    assert!(block.iter().all(|l| l.contains(" dod ")));
}

#[test]
fn oracle_agrees_on_random_fixture() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let params = RandomGraphParams {
        max_instants: 10,
        ..Default::default()
    };
    let g = loop {
        let g = random_graph(&mut rng, &params);
        if g.horizon_len() == 10 {
            break g;
        }
    };
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_dataset(&g, dir.path()).unwrap();
    for (event, sem) in [
        ("stability", "strict"),
        ("growth", "loose"),
        ("shrinkage", "loose"),
    ] {
        let out = evosky(&[
            "skyline",
            "--manifest",
            manifest.to_str().unwrap(),
            "--event",
            event,
            "--semantics",
            sem,
            "--edge-label",
            "link",
            "--agg-props",
            "gender,level",
            "--individual",
            "--oracle",
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(String::from_utf8_lossy(&out.stdout).contains("oracle: agrees"));
    }
}

#[test]
fn bench_emits_one_row_per_prefix_and_config() {
    let mut b = GraphBuilder::new(6);
    for (id, g) in [("a", "x"), ("b", "y"), ("c", "x")] {
        b.node(id, "n", Interval::new(0, 5).unwrap()).unwrap();
        b.static_prop(id, "g", g).unwrap();
    }
    b.edge("a", "b", "e", Interval::new(0, 2).unwrap())
        .edge("b", "c", "e", Interval::new(1, 5).unwrap())
        .edge("c", "a", "e", Interval::point(TimeInstant(4)));
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_dataset(&b.build().unwrap(), dir.path().join("data")).unwrap();
    let timing = dir.path().join("timing.csv");
    let out = evosky(&[
        "bench",
        "--manifest",
        manifest.to_str().unwrap(),
        "--edge-label",
        "e",
        "--agg-props",
        "g",
        "--out",
        timing.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(timing).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 4 * 4);
    for len in 3..=6 {
        assert_eq!(
            rows.iter()
                .filter(|r| r.starts_with(&format!("{len},")))
                .count(),
            4
        );
    }
}

#[test]
fn oracle_agrees_on_toy_for_every_event() {
    for event in ["stability", "growth", "shrinkage"] {
        for sem in ["strict", "loose"] {
            let out = evosky(&[
                "skyline",
                "--manifest",
                &toy(),
                "--event",
                event,
                "--semantics",
                sem,
                "--edge-label",
                "publish",
                "--agg-props",
                "gender",
                "--oracle",
            ]);
            assert_eq!(out.status.code(), Some(0), "{event}/{sem}");
        }
    }
}
