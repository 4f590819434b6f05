use serde_json::Value;
use weil::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("weil").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn gens_json_shape() {
    let (code, out, _) = call(&["gens", "--r", "3", "--field", "gf:7"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["r"], 3);
    assert_eq!(doc["l"], 1);
    assert_eq!(doc["lambda"], "3");
    assert_eq!(doc["matrices"]["C1"][1], serde_json::json!(["3", "6", "5"]));
    let names: Vec<_> = doc["matrices"].as_object().unwrap().keys().cloned().collect();
    assert_eq!(names, ["C1", "U1"]);
}

#[test]
fn gens_full_rank_two_names() {
    let (code, out, _) = call(&["gens", "--r", "3", "--l", "2", "--full"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    let names: Vec<_> = doc["matrices"].as_object().unwrap().keys().cloned().collect();
    for name in ["C1", "C2", "D12", "U1", "U2", "sigma"] {
        assert!(names.iter().any(|n| n == name), "missing {name} in {names:?}");
    }
    assert_eq!(doc["matrices"]["C1"].as_array().unwrap().len(), 9);
}

#[test]
fn gens_cyclotomic_entries_are_rational_vectors() {
    let (code, out, _) = call(&["gens", "--r", "3", "--field", "cyclotomic"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["lambda"], serde_json::json!(["-1/3", "-2/3"]));
    assert_eq!(doc["theta"], serde_json::json!(["0/1", "1/1"]));
}

#[test]
fn gens_magma_golden() {
    let (code, out, _) = call(&["gens", "--r", "3", "--field", "gf:7", "--format", "magma"]);
    assert_eq!(code, 0);
    let expected = "\
// weil 0.1.0: r = 3, l = 1, field = GF(7)
K := GF(7);
theta := K!2;
lambda := K!(3);
C1 := Matrix(K, 3, 3, [3, 3, 3, 3, 6, 5, 3, 5, 6]);
U1 := Matrix(K, 3, 3, [1, 0, 0, 0, 4, 0, 0, 0, 4]);
";
    assert_eq!(out, expected);
}

#[test]
fn gens_gap_golden() {
    let (code, out, _) = call(&["gens", "--r", "3", "--field", "gf:7", "--format", "gap"]);
    assert_eq!(code, 0);
    let expected = "\
# weil 0.1.0: r = 3, l = 1, field = GF(7)
one := One(GF(7));
theta := 2 * one;
lambda := (3) * one;
C1 := [[3, 3, 3], [3, 6, 5], [3, 5, 6]] * one;
U1 := [[1, 0, 0], [0, 4, 0], [0, 0, 4]] * one;
";
    assert_eq!(out, expected);
}

#[test]
fn gens_writes_to_file() {
    let dir = std::env::temp_dir().join(format!("weil-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gens.json");
    let (code, out, _) = call(&["gens", "--r", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["field"]["p"], 11);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn image_transvection() {
    let (code, out, _) = call(&["image", "--r", "3", "--g", "1 1; 0 1", "--field", "gf:7"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["word"], serde_json::json!([{"gen": "U", "t": 1, "exp": 1}]));
    assert_eq!(doc["g"], serde_json::json!([[1, 1], [0, 1]]));
    assert_eq!(doc["matrices"]["image"][1][1], "4");
}

#[test]
fn image_independent_of_factorization() {
    let g = "1 2 0 1; 0 1 0 0; 0 1 1 0; 0 0 0 1";
    let (code, base, err) = call(&["image", "--r", "3", "--l", "2", "--g", g]);
    assert_eq!(code, 0, "{err}");
    let (code, seeded, _) = call(&["image", "--r", "3", "--l", "2", "--g", g, "--seed", "9"]);
    assert_eq!(code, 0);
    let a: Value = serde_json::from_str(&base).unwrap();
    let b: Value = serde_json::from_str(&seeded).unwrap();
    assert_eq!(a["matrices"]["image"], b["matrices"]["image"]);
}

#[test]
fn image_irreducible_dimensions() {
    let g = "0 1; 2 0";
    for (which, dim) in [("plus", 2), ("minus", 1)] {
        let (code, out, err) = call(&["image", "--r", "3", "--g", g, "--irreducible", which]);
        assert_eq!(code, 0, "{err}");
        let doc: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(doc["irreducible"], which);
        assert_eq!(doc["matrices"]["image"].as_array().unwrap().len(), dim);
    }
    let (code, out, err) = call(&["image", "--r", "3", "--g", g, "--field", "gf2-auto", "--irreducible", "socle"]);
    assert_eq!(code, 0, "{err}");
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["matrices"]["image"].as_array().unwrap().len(), 1);
}

#[test]
fn plus_minus_need_odd_characteristic() {
    let (code, _, err) = call(&["image", "--r", "3", "--g", "1 0; 0 1", "--field", "gf:4", "--irreducible", "plus"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
}

#[test]
fn non_symplectic_input_exits_3() {
    let (code, _, err) = call(&["image", "--r", "3", "--g", "1 1; 1 1"]);
    assert_eq!(code, 3);
    assert!(err.contains("symplectic"), "{err}");
}

#[test]
fn wrong_shape_is_usage_error() {
    let (code, _, _) = call(&["image", "--r", "3", "--g", "1 0 0"]);
    assert_eq!(code, 2);
}

#[test]
fn bad_parameters_exit_2() {
    for args in [
        &["gens", "--r", "2"][..],
        &["gens", "--r", "9"],
        &["gens", "--r", "3", "--l", "0"],
        &["gens", "--r", "3", "--field", "gf:9"],
        &["gens", "--r", "3", "--field", "mystery"],
        &["frobnicate"],
    ] {
        let (code, _, _) = call(args);
        assert_eq!(code, 2, "{args:?}");
    }
}

#[test]
fn verify_text_and_json() {
    let (code, out, _) = call(&["verify", "--r", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("[PASS] c_squared_is_r_sigma"), "{out}");
    let (code, out, _) = call(&["verify", "--r", "5", "--field", "gf2-auto", "--format", "json"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    let checks = doc["report"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] != "fail"));
    assert!(checks.iter().any(|c| c["id"] == "chain_dimensions"));
}

#[test]
fn verify_closure_small_cap_skips() {
    let (code, out, _) = call(&["verify", "--r", "3", "--l", "2", "--closure", "--cap", "100"]);
    assert_eq!(code, 0);
    assert!(out.contains("[SKIP] closure_order_matches_group_order"), "{out}");
    let (code, out, _) = call(&["verify", "--r", "5", "--closure"]);
    assert_eq!(code, 0);
    assert!(out.contains("[PASS] closure_order_matches_group_order"), "{out}");
}
