use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use gog_core::freewords::Presentation;
use gog_core::paperlab::{SemidirectModel, SeparationCertificate};

fn data(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name]
        .iter()
        .collect()
}

fn gog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gog"))
        .args(args)
        .output()
        .unwrap()
}

fn report(out: &Output) -> Value {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let line = text.lines().next().expect("one report line");
    serde_json::from_str(line).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gog-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn lambda_mu_group_of_order_eight() {
    let out = gog(&["verify-prop41", "--p", "2", "--l", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["claim"], "prop4.1");
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["witness"]["order"], 8);
    assert_eq!(r["parameters"]["seed"], 0);
}

#[test]
fn infinite_order_suite_passes() {
    let out = gog(&["verify-prop43", "--steps", "1000", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["witness"]["separated"], 100);
}

#[test]
fn pi_check_for_p3() {
    let out = gog(&["verify-prop42", "--p", "3", "--l", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["witness"]["pi"]["order"], 81);
    assert_eq!(r["witness"]["pi"]["injective_on_a"], true);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(gog(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(gog(&["verify-prop41", "--p", "2"]).status.code(), Some(2));
    assert_eq!(gog(&[]).status.code(), Some(2));
}

#[test]
fn malformed_input_exits_2() {
    let bad = scratch("bad.json", "{ not json");
    let out = gog(&["build-presentation", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["verdict"], "error");
    assert!(!out.stderr.is_empty());

    let unknown = scratch(
        "unknown.json",
        r#"{"vertices": ["u"], "edges": [{"id": "e", "from": "u", "to": "w"}]}"#,
    );
    assert_eq!(
        gog(&["unfold", unknown.to_str().unwrap()]).status.code(),
        Some(2)
    );
    // Not a tree.
    assert_eq!(
        gog(&["unfold", data("theta.json").to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        gog(&["verify-prop41", "--p", "4", "--l", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn presentation_text_round_trips() {
    let out = gog(&["build-presentation", data("amalgam.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let pres: Presentation = r["witness"]["text"].as_str().unwrap().parse().unwrap();
    assert_eq!(pres.generators, ["u.g", "v.x", "v.y", "t_f"]);
    assert_eq!(r["witness"]["abelianization"]["free_rank"], 1);
    assert_eq!(r["witness"]["stable_letters"], serde_json::json!(["t_f"]));
}

#[test]
fn explicit_tree_changes_stable_letters() {
    let out = gog(&[
        "build-presentation",
        data("amalgam.json").to_str().unwrap(),
        "--tree",
        "e",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let bad = gog(&[
        "build-presentation",
        data("amalgam.json").to_str().unwrap(),
        "--tree",
        "f",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn separation_witness_replays() {
    for (file, p) in [("element.json", 2), ("mixed.json", 3)] {
        let out = gog(&["separate", data(file).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        let r = report(&out);
        let cert: SeparationCertificate =
            serde_json::from_value(r["witness"]["certificate"].clone()).unwrap();
        let input: Value =
            serde_json::from_str(&std::fs::read_to_string(data(file)).unwrap()).unwrap();
        let model = SemidirectModel::p_inf(p).unwrap();
        let mut word = String::new();
        for (i, e) in input["vector"].as_object().unwrap() {
            word.push_str(&format!("c{i}^{e} "));
        }
        word.push_str(input["control"].as_str().unwrap());
        let x = model.eval_word(&word.parse().unwrap()).unwrap();
        assert!(cert.verify(&x).unwrap());
    }
}

#[test]
fn identity_element_fails() {
    let f = scratch(
        "identity.json",
        r#"{"p": 2, "vector": {"3": 2}, "control": "a a"}"#,
    );
    let out = gog(&["separate", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["verdict"], "fail");
}

#[test]
fn theorem3_and_unfold_files() {
    let out = gog(&[
        "build-theorem3",
        data("theta.json").to_str().unwrap(),
        "--p",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["witness"]["witnesses"].as_array().unwrap().len(), 4);

    let out = gog(&[
        "unfold",
        data("tree.json").to_str().unwrap(),
        "--radius",
        "2",
        "--base",
        "b",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["witness"]["check"]["is_forest"], true);
    assert_eq!(r["witness"]["corrupted_labeling_rejected"], true);
    let g: gog_core::multigraph::GraphFile =
        serde_json::from_value(r["witness"]["graph"].clone()).unwrap();
    assert!(g.to_graph().unwrap().is_forest());
}

#[test]
fn seeded_runs_are_deterministic() {
    let run = |seed: &str| {
        let out = gog(&[
            "cross-check",
            "--p",
            "2",
            "--n",
            "2",
            "--trials",
            "40",
            "--seed",
            seed,
        ]);
        assert_eq!(out.status.code(), Some(0));
        report(&out)["witness"].clone()
    };
    assert_eq!(run("7"), run("7"));
    let seq = gog(&[
        "cross-check",
        "--p",
        "2",
        "--n",
        "2",
        "--trials",
        "40",
        "--seed",
        "7",
        "--sequential",
    ]);
    assert_eq!(report(&seq)["witness"], run("7"));
}

#[test]
fn out_file_and_pretty() {
    let dir = std::env::temp_dir().join(format!("gog-cli-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.jsonl");
    let out = gog(&[
        "verify-prop41",
        "--p",
        "3",
        "--l",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let line = std::fs::read_to_string(&path).unwrap();
    let r: Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(r["witness"]["order"], 3);

    let out = gog(&["--pretty", "verify-prop41", "--p", "2", "--l", "1"]);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("PASS prop4.1"));
}
