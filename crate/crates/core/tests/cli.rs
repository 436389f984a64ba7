use drycert::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("drycert").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("drycert-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn realize_then_verify() {
    let args = ["realize", "F0", "--phi", "7,8", "--omega", "30", "--N", "6"];
    let (code, out, _) = call(&args);
    assert_eq!(code, 0);
    let (_, again, _) = call(&args);
    assert_eq!(out, again, "realize must be deterministic");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "realized");
    assert_eq!(v["witness"]["c2E"], 36);

    let path = scratch("w.json");
    std::fs::write(&path, &out).unwrap();
    let (code, out, _) = call(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let rep: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(rep["valid"], true);

    // lowering c2(E) below the Artamkin bound must be caught
    let mut bad = v.clone();
    bad["witness"]["c2E"] = 4.into();
    std::fs::write(&path, serde_json::to_string(&bad).unwrap()).unwrap();
    let (code, out, _) = call(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let rep: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(rep["valid"], false);
    assert_eq!(rep["checks"]["artamkin"], false);

    std::fs::write(&path, "{not json").unwrap();
    assert_eq!(call(&["verify", path.to_str().unwrap()]).0, 2);
}

#[test]
fn negative_verdicts_exit_zero() {
    let (code, out, _) = call(&["realize", "F0", "--phi", "7,8", "--omega", "29", "--N", "6"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"verdict\": \"not_dry\""));
    let path = scratch("nd.json");
    std::fs::write(&path, &out).unwrap();
    assert_eq!(call(&["verify", path.to_str().unwrap()]).0, 2);
}

#[test]
fn census_formats_and_out_file() {
    let (code, out, _) = call(&["census", "F0", "--N", "6"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 0);
    assert_eq!(v["complete"], true);

    let path = scratch("dp8.csv");
    let (code, out, _) = call(&["census", "dP8", "--N", "6", "--format", "csv", "--bound", "8", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("base,N,phi,omega,failing_configs"));
    let first = lines.next().expect("bounded dP8 census has rows");
    assert!(first.starts_with("dP8,6,"));
}

#[test]
fn cones_lists_generators() {
    let (code, out, _) = call(&["cones", "dP2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["mori_generators"].as_array().unwrap().len(), 3);
    assert_eq!(v["c1_squared"], "7");
    assert_eq!(v["toric"], true);
}

#[test]
fn unsupported_and_malformed_inputs() {
    assert_eq!(call(&["realize", "P2", "--phi", "9", "--omega", "40", "--N", "6"]).0, 3);
    assert_eq!(call(&["census", "dP3", "--N", "4"]).0, 3);
    assert_eq!(call(&["check-dry", "F0", "--phi", "7", "--omega", "30", "--N", "6"]).0, 2);
    assert_eq!(call(&["check-dry", "F0", "--phi", "7,8", "--omega", "x", "--N", "6"]).0, 2);
    assert_eq!(call(&["check-dry", "F0", "--phi", "7,8", "--omega", "30", "--N", "0"]).0, 2);
    let (code, _, err) = call(&["cones", "dP9"]);
    assert_eq!(code, 2);
    assert!(err.contains("dP9"));
}
