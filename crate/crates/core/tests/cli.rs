use std::fs;

use reconfig_mimo::cli::run;
use reconfig_mimo::simlab::ExperimentReport;

fn argv(parts: &[&str]) -> Vec<String> {
    std::iter::once("rmimo")
        .chain(parts.iter().copied())
        .map(String::from)
        .collect()
}

#[test]
fn analytic_single_state_is_unit_gain() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.csv");
    let code = run(argv(&[
        "analytic",
        "--mu",
        "10",
        "--var",
        "4",
        "--psi",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]));
    assert_eq!(code, 0);
    let text = fs::read_to_string(out).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "1");
    assert!((row[1].parse::<f64>().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(row[5], "1");
}

#[test]
fn config_file_values_and_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"n_r": 9, "n_t": 9, "l_r": 2, "l_t": 2, "trials": 7, "seed": 3}"#,
    )
    .unwrap();
    let report = dir.path().join("r.json");
    let out = dir.path().join("g.csv");
    let code = run(argv(&[
        "gain-avg",
        "--config",
        cfg.to_str().unwrap(),
        "--trials",
        "40",
        "--psi",
        "1..3",
        "--out",
        out.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]));
    assert_eq!(code, 0);
    let rep: ExperimentReport = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(rep.schema, 1);
    assert_eq!(rep.config.n_r, 9);
    assert_eq!(rep.trials, 40);
    assert_eq!(rep.seed, 3);
    assert_eq!(rep.avg_gains.len(), 3);
    assert!(rep.runtime_secs.is_none());
    let csv = fs::read_to_string(out).unwrap();
    assert!(
        csv.starts_with("psi,empirical,std_error,integral,small_psi,large_psi,asymptotic\n1,1,")
    );
}

#[test]
fn bad_configuration_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"l_r": 40}"#).unwrap();
    assert_eq!(run(argv(&["pdf", "--config", cfg.to_str().unwrap()])), 2);
    fs::write(&cfg, r#"{"antennas": 4}"#).unwrap();
    assert_eq!(run(argv(&["pdf", "--config", cfg.to_str().unwrap()])), 2);
    assert_eq!(run(argv(&["gain-avg", "--selector", "random"])), 2);
    assert_eq!(run(argv(&["gain-avg", "--psi", "0..3"])), 2);
    assert_eq!(run(argv(&["pdf", "--unknown-flag"])), 2);
    // 100 trials at ε = 0.05 leave only 5 outage samples
    assert_eq!(
        run(argv(&["gain-outage", "--trials", "100", "--eps", "0.05"])),
        2
    );
}

#[test]
fn exhaustive_search_over_the_cap_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"trials": 2}"#).unwrap();
    let code = run(argv(&[
        "loss-ratio",
        "--config",
        cfg.to_str().unwrap(),
        "--psi",
        "2",
    ]));
    assert_eq!(code, 3);
}

#[test]
fn numerical_domain_error_exits_with_four() {
    assert_eq!(
        run(argv(&[
            "analytic", "--mu", "1", "--var", "4", "--psi", "2", "--eps", "0.05"
        ])),
        4
    );
}

#[test]
fn dump_channels_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.json");
    let code = run(argv(&[
        "dump-channels",
        "--psi",
        "3",
        "--trial",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]));
    assert_eq!(code, 0);
    let dump: reconfig_mimo::channel::ChannelDump =
        serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    let set = dump.to_channel_set().unwrap();
    assert_eq!(
        set,
        reconfig_mimo::channel::realize_channels(&dump.config, 2)
    );
    assert_eq!(set.len(), 3);
}

#[test]
fn seeds_change_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (seed, path) in [("1", &a), ("2", &b)] {
        let code = run(argv(&[
            "pdf",
            "--trials",
            "200",
            "--bins",
            "10",
            "--seed",
            seed,
            "--out",
            path.to_str().unwrap(),
        ]));
        assert_eq!(code, 0);
    }
    assert_ne!(fs::read(a).unwrap(), fs::read(b).unwrap());
}
