use operad_core::builders::{build_as, build_d, build_uni, AugmentedAlgebra, SwModule};
use operad_core::io::*;
use operad_core::truncatify::truncatify;
use operad_core::{OperadError, TruncatedOperad};
use serde_json::{json, Value};

fn same_tables(a: &TruncatedOperad, b: &TruncatedOperad) {
    assert_eq!(a.dims(), b.dims());
    for n in 0..=a.horizon() {
        assert_eq!(a.labels(n), b.labels(n));
        for k in 1..n {
            assert_eq!(a.generator_matrix(n, k), b.generator_matrix(n, k));
        }
    }
    for (m, i, n) in operad_core::operad::composition_keys(a.horizon()) {
        for x in 0..a.dim(m) {
            for y in 0..a.dim(n) {
                assert_eq!(a.rule().compose_basis(m, i, x, n, y), b.rule().compose_basis(m, i, x, n, y));
            }
        }
    }
    assert_eq!(a.two_unit(), b.two_unit());
    assert_eq!(a.certificate(), b.certificate());
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("operad-io-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn json_roundtrip_is_exact_and_canonical() {
    for p in [
        build_as(4).unwrap(),
        build_uni(3).unwrap(),
        build_d(&AugmentedAlgebra::random(2, 0), 4).unwrap(),
    ] {
        let v = operad_to_json(&p, None, None);
        let back = operad_from_json(&v).unwrap().operad;
        same_tables(&p, &back);
        // a second pass reproduces the same bytes
        let again = operad_to_json(&back, None, None);
        assert_eq!(to_canonical_string(&v), to_canonical_string(&again));
    }
}

#[test]
fn files_plain_and_gzipped() {
    let p = build_d(&AugmentedAlgebra::random(1, 2), 4).unwrap();
    let mut manifest = Manifest::new(vec!["operad".into(), "build".into()], 2);
    manifest.horizon = Some(4);
    let t = truncatify(&p).unwrap();
    for name in ["d.json", "d.json.gz"] {
        let path = tmp(name);
        save_operad(&t.operad, Some(&t.grading), Some(&manifest), &path).unwrap();
        let doc = load_operad(&path).unwrap();
        same_tables(&t.operad, &doc.operad);
        assert_eq!(doc.grading.as_ref(), Some(&t.grading));
        assert_eq!(doc.manifest.as_ref(), Some(&manifest));
    }
    let plain = std::fs::read(tmp("d.json")).unwrap();
    let gz = std::fs::read(tmp("d.json.gz")).unwrap();
    assert_eq!(&gz[..2], &[0x1f, 0x8b]);
    assert_eq!(read_json(&tmp("d.json")).unwrap(), read_json(&tmp("d.json.gz")).unwrap());
    assert_eq!(String::from_utf8(plain).unwrap(), to_canonical_string(&read_json(&tmp("d.json")).unwrap()));
    let mut m2 = manifest.clone();
    m2.add_input(&tmp("d.json")).unwrap();
    assert_eq!(m2.input_hashes[0].1.len(), 64);
}

#[test]
fn rationals_are_normalized_strings() {
    let p = build_as(2).unwrap();
    let half = operad_core::linalg::qfrac(1, 2);
    let sym = p
        .basis_element(2, 0)
        .unwrap()
        .add(&p.basis_element(2, 1).unwrap())
        .unwrap()
        .scale(&half);
    let v = operad_to_json(&p.with_two_unit(&sym).unwrap(), None, None);
    assert_eq!(v["two_unit"]["coords"], json!(["1/2", "1/2"]));
    assert_eq!(v["unit"]["coords"], json!(["1"]));
    let back = operad_from_json(&v).unwrap().operad;
    assert_eq!(back.two_unit().unwrap(), sym);
}

#[test]
fn a_perturbed_table_is_rejected_with_its_instance() {
    let p = build_as(3).unwrap();
    let mut v = operad_to_json(&p, None, None);
    let comps = v["compositions"].as_array_mut().unwrap();
    let entry = comps
        .iter_mut()
        .find(|c| c["m"] == 2 && c["i"] == 1 && c["n"] == 2)
        .unwrap();
    entry["table"][0][0][0] = json!("2");
    assert!(operad_from_json_unchecked(&v).is_ok());
    let err = operad_from_json(&v).err().expect("must be rejected");
    let OperadError::AxiomViolation(msg) = &err else {
        panic!("unexpected error {err}");
    };
    assert!(msg.contains('∘'), "{msg}");
    let path = tmp("bad.json");
    write_json(&path, &v).unwrap();
    assert!(matches!(load_operad(&path), Err(OperadError::AxiomViolation(_))));
}

#[test]
fn schema_errors() {
    let good = operad_to_json(&build_as(2).unwrap(), None, None);
    let mutate = |f: &dyn Fn(&mut Value)| {
        let mut v = good.clone();
        f(&mut v);
        operad_from_json(&v).err().expect("must fail")
    };
    let cases: Vec<Box<dyn Fn(&mut Value)>> = vec![
        Box::new(|v| {
            v.as_object_mut().unwrap().remove("unit");
        }),
        Box::new(|v| v["field"] = json!("F_7")),
        Box::new(|v| v["max_arity"] = json!(5)),
        Box::new(|v| v["unit"]["coords"] = json!([1])),
        Box::new(|v| v["unit"]["coords"] = json!(["x"])),
        Box::new(|v| v["unit"]["coords"] = json!(["1", "0"])),
        Box::new(|v| v["components"][2]["labels"] = json!(["a"])),
        Box::new(|v| v["compositions"] = json!([])),
        Box::new(|v| v["actions"] = json!([])),
    ];
    for c in cases {
        assert!(matches!(mutate(&*c), OperadError::Schema(_)));
    }
    assert!(read_json(&tmp("missing.json")).is_err());
}

#[test]
fn algebras_and_modules() {
    let a = AugmentedAlgebra::random(3, 4);
    assert_eq!(algebra_from_json(&algebra_to_json(&a)).unwrap(), a);
    // non-associative: δ₁δ₁ = δ₂, everything else zero
    let bad = json!({"d": 2, "omega": [[["0","1"],["0","0"]],[["0","0"],["1","0"]]]});
    assert!(algebra_from_json(&bad).is_err());
    assert!(algebra_from_json(&json!({"d": 1, "omega": []})).is_err());

    let m = SwModule::sign(3, 2);
    assert_eq!(module_from_json(&module_to_json(&m)).unwrap(), m);
    let broken = json!({"w": 3, "d": 1, "generators": [[["1"]], [["2"]]]});
    assert!(module_from_json(&broken).is_err());
}
