use akucb_core::harness::{
    preset, run_experiment, ExperimentConfig, HarnessError, InitialQueues, PolicySpec, TopologySpec, PRESET_NAMES,
    SCHEMA_VERSION,
};

const SMALL: &str = r#"
schema_version = 1
name = "small"
seed = 7
runs = 2
frame_len = 200
horizon = 600

[topology]
kind = "grid"
rows = 2
cols = 3

[traffic]
lambda = [0.05, 0.1]
mu = [0.3, 0.9]

[[policies]]
kind = "akucb"
k = 3
p = 0.2

[[policies]]
kind = "gmm"

[[policies]]
kind = "mwm"

[output]
regret = true
stability = true
queue_trace_every = 100
"#;

fn small() -> ExperimentConfig {
    ExperimentConfig::from_toml_str(SMALL).unwrap()
}

#[test]
fn toml_round_trip() {
    let cfg = small();
    assert_eq!(cfg.schema_version, SCHEMA_VERSION);
    assert_eq!(cfg.topology, TopologySpec::Grid { rows: 2, cols: 3 });
    assert_eq!(cfg.traffic.initial_queues, InitialQueues::Zero);
    assert!(cfg.toggles.reset_s_prev_each_frame);
    let back = ExperimentConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
    assert_eq!(back, cfg);
}

#[test]
fn schema_version_is_required_and_checked() {
    let missing = SMALL.replace("schema_version = 1", "");
    let wrong = SMALL.replace("schema_version = 1", "schema_version = 2");
    for text in [missing, wrong] {
        let err = ExperimentConfig::from_toml_str(&text).unwrap_err();
        assert!(matches!(err, HarnessError::Config(ref m) if m.contains("schema_version")), "{err}");
    }
}

#[test]
fn unknown_fields_rejected() {
    let text = SMALL.replace("runs = 2", "runs = 2\nruns_typo = 3");
    assert!(ExperimentConfig::from_toml_str(&text).is_err());
}

#[test]
fn overrides_edit_nested_values() {
    let cfg = small()
        .with_overrides(&[
            "runs=5".into(),
            "traffic.lambda=[0.2]".into(),
            "toggles.observe_empty_queues=false".into(),
            "name=renamed".into(),
            "traffic.initial_queues=[1,2,3,4,5,6,7]".into(),
        ])
        .unwrap();
    assert_eq!(cfg.runs, 5);
    assert_eq!(cfg.traffic.lambda, vec![0.2]);
    assert!(!cfg.toggles.observe_empty_queues);
    assert_eq!(cfg.name, "renamed");
    assert_eq!(cfg.traffic.initial_queues, InitialQueues::Explicit(vec![1, 2, 3, 4, 5, 6, 7]));

    assert!(small().with_overrides(&["runs".into()]).is_err());
    assert!(small().with_overrides(&["schema_version=9".into()]).is_err());
    assert!(small().with_overrides(&["runs=\"many\"".into()]).is_err());
}

#[test]
fn oracle_guard_on_large_graphs() {
    let mut cfg = small();
    cfg.topology = TopologySpec::Random {
        nodes: 20,
        links: 40,
        seed: Some(1),
    };
    cfg.output.regret = false;
    assert!(matches!(
        cfg.prepare(),
        Err(HarnessError::OracleGuard { links: 40, limit: 30 })
    ));
    cfg.toggles.exact_mwm_large = true;
    assert!(cfg.prepare().is_ok());

    cfg.toggles.exact_mwm_large = false;
    cfg.policies = vec![PolicySpec::Gmm];
    assert!(cfg.prepare().is_ok());
    cfg.output.regret = true;
    assert!(matches!(cfg.prepare(), Err(HarnessError::OracleGuard { .. })));
}

#[test]
fn validation_errors() {
    let mut cfg = small();
    cfg.runs = 0;
    assert!(cfg.prepare().is_err());
    let mut cfg = small();
    cfg.policies = vec![PolicySpec::Akucb { k: 0, p: 0.2 }];
    assert!(cfg.prepare().is_err());
    let mut cfg = small();
    cfg.traffic.initial_queues = InitialQueues::Explicit(vec![1, 2]);
    assert!(cfg.prepare().is_err());
}

#[test]
fn every_preset_prepares() {
    for name in PRESET_NAMES {
        let cfg = preset(name).unwrap_or_else(|| panic!("{name} missing"));
        assert_eq!(cfg.name, *name);
        let text = cfg.to_toml_string();
        assert_eq!(ExperimentConfig::from_toml_str(&text).unwrap(), cfg);
        cfg.prepare().unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    assert!(preset("nope").is_none());
}

fn read(path: &std::path::Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn experiment_writes_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_experiment(&small(), dir.path(), 1).unwrap();
    // 2 runs x 2 loads x 3 policies
    assert_eq!(report.results.len(), 12);

    let stability = read(&dir.path().join("stability.csv"));
    let mut lines = stability.lines();
    assert_eq!(lines.next(), Some("policy,lambda,run,end_total_queue"));
    assert_eq!(lines.count(), 12);

    let regret = read(&dir.path().join("regret_a3_ucb_lambda0.csv"));
    assert!(regret.starts_with("run,frame,t,regret,alpha_regret,normalized_regret\n"));
    assert!(regret.lines().count() > 1);
    for name in ["regret_ucb_gmm_lambda1.csv", "regret_mwm_lambda0.csv", "queue_trace.csv", "summary.txt"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let trace = read(&dir.path().join("queue_trace.csv"));
    assert!(trace.starts_with("policy,lambda,run,slot,total_queue\n"));

    // r* bounds every schedule's frame weight, so regret never goes negative.
    for name in ["regret_mwm_lambda0.csv", "regret_a3_ucb_lambda1.csv"] {
        for line in read(&dir.path().join(name)).lines().skip(1) {
            let f: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
            assert!(f[3] >= -1e-9 && f[4] <= f[3] + 1e-9, "{line}");
        }
    }

    let written = ExperimentConfig::from_toml_str(&read(&dir.path().join("config.toml"))).unwrap();
    assert_eq!(written, small());
}

#[test]
fn experiment_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_experiment(&small(), a.path(), 1).unwrap();
    run_experiment(&small(), b.path(), 3).unwrap();
    for name in ["stability.csv", "regret_a3_ucb_lambda1.csv", "queue_trace.csv", "summary.txt"] {
        assert_eq!(read(&a.path().join(name)), read(&b.path().join(name)), "{name}");
    }
}

#[test]
fn frame_sweep_layout() {
    let cfg = small()
        .with_overrides(&["frame_sweep=[100, 300]".into(), "horizon_frames=2".into(), "output.regret=false".into()])
        .unwrap();
    let dir = tempfile::tempdir().unwrap();
    run_experiment(&cfg, dir.path(), 1).unwrap();
    let sweep = read(&dir.path().join("frame_sweep.csv"));
    assert!(sweep.starts_with("policy,frame_len,lambda,run,end_total_queue\n"));
    assert!(sweep.contains(",300,"));
    assert!(!dir.path().join("stability.csv").exists());
}

#[test]
fn edge_list_topology() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("path.txt");
    std::fs::write(&path, "nodes 4\n0 1\n1 2\n2 3\n").unwrap();
    let mut cfg = small();
    cfg.topology = TopologySpec::File { path };
    let prep = cfg.prepare().unwrap();
    assert_eq!(prep.graph.link_count(), 3);
}

#[test]
fn shipped_example_config_is_valid() {
    let cfg = ExperimentConfig::from_toml_str(include_str!("../../../configs/example.toml")).unwrap();
    let prep = cfg.prepare().unwrap();
    assert_eq!(prep.graph.link_count(), 24);
    assert_eq!(prep.policies.len(), 4);
}
