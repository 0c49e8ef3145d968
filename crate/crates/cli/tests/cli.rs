use std::process::{Command, Output};

fn flaggraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flaggraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn dot_output_for_smallest_two_level_graph() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gpg.dot");
    let out = flaggraph(&[
        "build",
        "--n",
        "3",
        "--type",
        "1,2",
        "--dot",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("graph gpg {\n"));
    assert!(text.trim_end().ends_with('}'));
    assert!(text.contains("v0 [label=\"{1}⊂{1,2}\"]"));
    let edges: Vec<&str> = text
        .lines()
        .filter(|l| l.contains("--"))
        .map(str::trim)
        .collect();
    assert_eq!(edges, ["v0 -- v5", "v1 -- v3", "v2 -- v4"]);
}

#[test]
fn exit_codes() {
    assert_eq!(flaggraph(&["verify", "edgecase"]).status.code(), Some(0));
    assert_eq!(flaggraph(&["verify", "secondmax"]).status.code(), Some(1));
    assert_eq!(flaggraph(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(
        flaggraph(&["verify", "formulas", "--n", "5", "--a", "2", "--b", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        flaggraph(&[
            "verify",
            "autgroup",
            "--n",
            "7",
            "--type",
            "1,5",
            "--vertex-cap",
            "100"
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(
        flaggraph(&["aut", "--n", "8", "--type", "2,5"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn json_report_is_ordered_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for name in ["first.json", "second.json"] {
        let path = dir.path().join(name);
        let out = flaggraph(&["verify", "autgroup", "--json", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        texts.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(texts[0], texts[1]);

    let text = String::from_utf8(texts.remove(0)).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["suite"], "autgroup");
    assert_eq!(json["pass"], true);
    let positions: Vec<usize> = ["\"suite\"", "\"params\"", "\"checks\"", "\"pass\""]
        .iter()
        .map(|key| text.find(key).unwrap())
        .collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn aut_prints_order() {
    let out = flaggraph(&["aut", "--n", "5", "--type", "1,3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("120"));
}

#[test]
fn vertex_cap_raises_the_search_limit() {
    let out = flaggraph(&["aut", "--n", "8", "--type", "2,5", "--vertex-cap", "600"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("order: 40320"));
}
