//! JSON persistence of operads, algebras and modules.
//!
//! Documents are canonical: keys in a fixed order, rationals as normalized
//! `"p/q"` strings (`"p"` when integral), compact output. A `.gz` suffix
//! selects gzip compression.

use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::axioms::verify_axioms;
use crate::builders::{AugmentedAlgebra, SwModule};
use crate::error::{OperadError, Result};
use crate::linalg::{self, RMatrix, SRow, Q};
use crate::operad::{composition_keys, Element, GrowthCertificate, TableRule, TruncatedOperad};
use crate::truncatify::Grading;

/// Provenance data embedded in every emitted artifact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool_version: String,
    pub command_line: Vec<String>,
    /// `(path, sha256)` of every input file.
    pub input_hashes: Vec<(String, String)>,
    pub horizon: Option<usize>,
    pub field: String,
    pub seed: u64,
    pub timings_ms: Vec<(String, u128)>,
}

impl Manifest {
    pub fn new(command_line: Vec<String>, seed: u64) -> Self {
        Manifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command_line,
            input_hashes: Vec::new(),
            horizon: None,
            field: "Q".into(),
            seed,
            timings_ms: Vec::new(),
        }
    }

    pub fn add_input(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path)?;
        self.input_hashes
            .push((path.display().to_string(), Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()));
        Ok(())
    }
}

/// An operad document with its optional extras.
pub struct OperadDocument {
    pub operad: TruncatedOperad,
    pub grading: Option<Grading>,
    pub manifest: Option<Manifest>,
}

fn qs(v: &Q) -> Value {
    Value::String(linalg::format_q(v))
}

fn dense_json(dim: usize, v: &SRow) -> Value {
    Value::Array(linalg::to_dense(dim, v).iter().map(qs).collect())
}

fn coords_obj(dim: usize, v: &SRow) -> Value {
    json!({ "coords": dense_json(dim, v) })
}

/// Canonical JSON value of an operad (tables are materialized).
pub fn operad_to_json(p: &TruncatedOperad, grading: Option<&Grading>, manifest: Option<&Manifest>) -> Value {
    let n_max = p.horizon();
    let rule = p.rule();
    let mut doc = Map::new();
    doc.insert("name".into(), json!(p.name()));
    doc.insert("max_arity".into(), json!(n_max));
    doc.insert("field".into(), json!("Q"));
    doc.insert(
        "components".into(),
        Value::Array(
            (0..=n_max)
                .map(|n| json!({ "arity": n, "dim": p.dim(n), "labels": p.labels(n) }))
                .collect(),
        ),
    );
    doc.insert("unit".into(), coords_obj(p.dim(1), &rule.unit()));
    doc.insert(
        "zero_unit".into(),
        rule.zero_unit().map_or(Value::Null, |z| coords_obj(p.dim(0), &z)),
    );
    doc.insert(
        "two_unit".into(),
        p.two_unit().map_or(Value::Null, |u| coords_obj(p.dim(2), &u.sparse())),
    );
    doc.insert(
        "actions".into(),
        Value::Array(
            (2..=n_max)
                .map(|n| {
                    let gens: Vec<Value> = (1..n)
                        .map(|k| matrix_json(&p.generator_matrix(n, k)))
                        .collect();
                    json!({ "arity": n, "generators": gens })
                })
                .collect(),
        ),
    );
    doc.insert(
        "compositions".into(),
        Value::Array(
            composition_keys(n_max)
                .into_iter()
                .map(|(m, i, n)| {
                    let t = m + n - 1;
                    let table: Vec<Value> = (0..p.dim(m))
                        .map(|a| {
                            Value::Array(
                                (0..p.dim(n))
                                    .map(|b| dense_json(p.dim(t), &rule.compose_basis(m, i, a, n, b)))
                                    .collect(),
                            )
                        })
                        .collect();
                    json!({ "m": m, "i": i, "n": n, "table": table })
                })
                .collect(),
        ),
    );
    if let Some(c) = p.certificate() {
        doc.insert("growth_certificate".into(), serde_json::to_value(c).expect("serializable"));
    }
    if let Some(g) = grading {
        let ranges: Vec<Value> = (0..=n_max)
            .map(|n| {
                json!(g
                    .ranges(n)
                    .unwrap_or_default()
                    .into_iter()
                    .map(|(s, e)| [s, e])
                    .collect::<Vec<_>>())
            })
            .collect();
        doc.insert("grading".into(), Value::Array(ranges));
    }
    if let Some(m) = manifest {
        doc.insert("manifest".into(), serde_json::to_value(m).expect("serializable"));
    }
    Value::Object(doc)
}

/// `M[r][c]` = coefficient of `e_r` in `e_c ∗ s_k` (column convention).
fn matrix_json(m: &RMatrix) -> Value {
    Value::Array(
        m.to_dense()
            .iter()
            .map(|row| Value::Array(row.iter().map(qs).collect()))
            .collect(),
    )
}

fn schema(msg: impl Into<String>) -> OperadError {
    OperadError::Schema(msg.into())
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| schema(format!("missing key {key:?}")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema(format!("{what} must be a non-negative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(format!("{what} must be an array")))
}

fn parse_vec(v: &Value, dim: usize, what: &str) -> Result<SRow> {
    let arr = as_array(v, what)?;
    if arr.len() != dim {
        return Err(schema(format!("{what} has length {}, expected {dim}", arr.len())));
    }
    let dense: Vec<Q> = arr
        .iter()
        .map(|x| {
            let s = x.as_str().ok_or_else(|| schema(format!("{what}: rationals must be strings")))?;
            linalg::parse_q(s).map_err(|_| schema(format!("{what}: cannot parse rational {s:?}")))
        })
        .collect::<Result<_>>()?;
    Ok(linalg::to_sparse(&dense))
}

fn parse_coords(v: &Value, dim: usize, what: &str) -> Result<SRow> {
    parse_vec(get(v, "coords")?, dim, what)
}

/// Parses a document without checking the operad axioms.
pub fn operad_from_json_unchecked(doc: &Value) -> Result<OperadDocument> {
    let name = get(doc, "name")?
        .as_str()
        .ok_or_else(|| schema("name must be a string"))?
        .to_string();
    let n_max = as_usize(get(doc, "max_arity")?, "max_arity")?;
    if get(doc, "field")? != "Q" {
        return Err(schema("only field \"Q\" is supported"));
    }
    let comps = as_array(get(doc, "components")?, "components")?;
    if comps.len() != n_max + 1 {
        return Err(schema(format!("expected {} components", n_max + 1)));
    }
    let mut dims = Vec::new();
    let mut labels = Vec::new();
    for (n, c) in comps.iter().enumerate() {
        if as_usize(get(c, "arity")?, "arity")? != n {
            return Err(schema(format!("component {n} has the wrong arity")));
        }
        let d = as_usize(get(c, "dim")?, "dim")?;
        let ls: Vec<String> = as_array(get(c, "labels")?, "labels")?
            .iter()
            .map(|l| l.as_str().map(String::from).ok_or_else(|| schema("labels must be strings")))
            .collect::<Result<_>>()?;
        if ls.len() != d {
            return Err(schema(format!("component {n}: {} labels for dimension {d}", ls.len())));
        }
        dims.push(d);
        labels.push(ls);
    }
    let unit = parse_coords(get(doc, "unit")?, dims[1.min(n_max)], "unit")?;
    let zero_unit = match doc.get("zero_unit").unwrap_or(&Value::Null) {
        Value::Null => None,
        z => Some(parse_coords(z, dims[0], "zero_unit")?),
    };

    let mut actions: Vec<Vec<Vec<SRow>>> = vec![Vec::new(); n_max + 1];
    let acts = as_array(get(doc, "actions")?, "actions")?;
    for a in acts {
        let n = as_usize(get(a, "arity")?, "actions.arity")?;
        if n > n_max || n < 2 {
            return Err(schema(format!("action entry for invalid arity {n}")));
        }
        let gens = as_array(get(a, "generators")?, "generators")?;
        if gens.len() != n - 1 {
            return Err(schema(format!("arity {n}: expected {} generators", n - 1)));
        }
        let d = dims[n];
        let mut per_k = Vec::new();
        for (k, g) in gens.iter().enumerate() {
            let rows = as_array(g, "generator")?;
            if rows.len() != d {
                return Err(schema(format!("arity {n}, s_{}: wrong number of rows", k + 1)));
            }
            let dense: Vec<Vec<Q>> = rows
                .iter()
                .map(|r| Ok(linalg::to_dense(d, &parse_vec(r, d, "generator row")?)))
                .collect::<Result<_>>()?;
            // columns are the images e_c ∗ s_k
            per_k.push((0..d).map(|c| linalg::to_sparse(&dense.iter().map(|r| r[c].clone()).collect::<Vec<_>>())).collect());
        }
        actions[n] = per_k;
    }
    for n in 2..=n_max {
        if actions[n].len() != n - 1 {
            return Err(schema(format!("missing action generators for arity {n}")));
        }
    }

    let mut table: HashMap<(usize, usize, usize), Vec<Vec<SRow>>> = HashMap::new();
    for c in as_array(get(doc, "compositions")?, "compositions")? {
        let m = as_usize(get(c, "m")?, "m")?;
        let i = as_usize(get(c, "i")?, "i")?;
        let n = as_usize(get(c, "n")?, "n")?;
        if m == 0 || i == 0 || i > m || m + n > n_max + 1 {
            return Err(schema(format!("illegal composition key ({m},{i},{n})")));
        }
        let t = m + n - 1;
        let rows = as_array(get(c, "table")?, "table")?;
        if rows.len() != dims[m] {
            return Err(schema(format!("({m},{i},{n}): table has {} rows", rows.len())));
        }
        let parsed: Vec<Vec<SRow>> = rows
            .iter()
            .map(|r| {
                let cols = as_array(r, "table row")?;
                if cols.len() != dims[n] {
                    return Err(schema(format!("({m},{i},{n}): table row has {} entries", cols.len())));
                }
                cols.iter().map(|x| parse_vec(x, dims[t], "table entry")).collect()
            })
            .collect::<Result<_>>()?;
        table.insert((m, i, n), parsed);
    }
    for key in composition_keys(n_max) {
        if !table.contains_key(&key) {
            return Err(schema(format!("missing composition table {key:?}")));
        }
    }
    let rule = TableRule {
        name,
        horizon: n_max,
        dims: dims.clone(),
        labels,
        actions,
        comps: table,
        unit,
        zero_unit,
    };
    let certificate: Option<GrowthCertificate> = match doc.get("growth_certificate") {
        None | Some(Value::Null) => None,
        Some(c) => Some(serde_json::from_value(c.clone()).map_err(|e| schema(format!("growth_certificate: {e}")))?),
    };
    let mut operad = TruncatedOperad::new(rule).with_certificate(certificate);
    if let Some(u) = doc.get("two_unit").filter(|u| !u.is_null()) {
        if n_max < 2 {
            return Err(schema("two_unit given for horizon < 2"));
        }
        let x = Element::from_sparse(2, dims[2], &parse_coords(u, dims[2], "two_unit")?);
        if !operad.is_unitary() {
            return Err(OperadError::NotUnitary("a 2-unit needs a unitary operad".into()));
        }
        operad = operad.with_two_unit(&x)?;
    }
    let grading = match doc.get("grading") {
        None | Some(Value::Null) => None,
        Some(g) => Some(parse_grading(g, &dims)?),
    };
    let manifest = match doc.get("manifest") {
        None | Some(Value::Null) => None,
        Some(m) => Some(serde_json::from_value(m.clone()).map_err(|e| schema(format!("manifest: {e}")))?),
    };
    Ok(OperadDocument {
        operad,
        grading,
        manifest,
    })
}

fn parse_grading(g: &Value, dims: &[usize]) -> Result<Grading> {
    let arities = as_array(g, "grading")?;
    if arities.len() != dims.len() {
        return Err(schema("grading must list every arity"));
    }
    let mut degrees = Vec::new();
    for (n, ranges) in arities.iter().enumerate() {
        let mut deg = vec![usize::MAX; dims[n]];
        for (i, r) in as_array(ranges, "grading ranges")?.iter().enumerate() {
            let pair = as_array(r, "grading range")?;
            if pair.len() != 2 {
                return Err(schema("a grading range is [start, end]"));
            }
            let (s, e) = (as_usize(&pair[0], "start")?, as_usize(&pair[1], "end")?);
            if s > e || e > dims[n] {
                return Err(schema(format!("arity {n}: bad range [{s}, {e}]")));
            }
            for x in &mut deg[s..e] {
                *x = i;
            }
        }
        if deg.contains(&usize::MAX) {
            return Err(schema(format!("arity {n}: grading does not cover every coordinate")));
        }
        degrees.push(deg);
    }
    Ok(Grading { degrees })
}

/// Parses a document and verifies all operad axioms, naming the first
/// violated instance on failure.
pub fn operad_from_json(doc: &Value) -> Result<OperadDocument> {
    let parsed = operad_from_json_unchecked(doc)?;
    let report = verify_axioms(&parsed.operad);
    if let Some(v) = report.violations.first() {
        return Err(OperadError::AxiomViolation(format!(
            "{v} ({} violation(s) in total)",
            report.violations.len()
        )));
    }
    Ok(parsed)
}

fn is_gz(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "gz")
}

pub fn read_json(path: &Path) -> Result<Value> {
    let mut text = String::new();
    let f = File::open(path)?;
    if is_gz(path) {
        GzDecoder::new(f).read_to_string(&mut text)?;
    } else {
        std::io::BufReader::new(f).read_to_string(&mut text)?;
    }
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    let text = to_canonical_string(v);
    let f = File::create(path)?;
    if is_gz(path) {
        let mut enc = GzEncoder::new(f, Compression::default());
        enc.write_all(text.as_bytes())?;
        enc.finish()?;
    } else {
        let mut w = std::io::BufWriter::new(f);
        w.write_all(text.as_bytes())?;
        w.flush()?;
    }
    Ok(())
}

pub fn to_canonical_string(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON values serialize")
}

pub fn load_operad(path: &Path) -> Result<OperadDocument> {
    operad_from_json(&read_json(path)?)
}

pub fn save_operad(p: &TruncatedOperad, grading: Option<&Grading>, manifest: Option<&Manifest>, path: &Path) -> Result<()> {
    write_json(path, &operad_to_json(p, grading, manifest))
}

pub fn algebra_to_json(a: &AugmentedAlgebra) -> Value {
    json!({
        "d": a.d,
        "omega": a.omega.iter().map(|r| r.iter().map(|c| c.iter().map(qs).collect::<Vec<_>>()).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

/// `{d, omega}` with `omega[i][j][k]` the coefficient of `δ_k` in `δ_i δ_j`;
/// associativity is validated.
pub fn algebra_from_json(v: &Value) -> Result<AugmentedAlgebra> {
    let d = as_usize(get(v, "d")?, "d")?;
    let om = as_array(get(v, "omega")?, "omega")?;
    if om.len() != d {
        return Err(schema(format!("omega must have {d} rows")));
    }
    let omega = om
        .iter()
        .map(|r| {
            let r = as_array(r, "omega row")?;
            if r.len() != d {
                return Err(schema(format!("omega rows must have {d} entries")));
            }
            r.iter().map(|c| Ok(linalg::to_dense(d, &parse_vec(c, d, "omega entry")?))).collect()
        })
        .collect::<Result<_>>()?;
    AugmentedAlgebra::new(d, omega)
}

pub fn module_to_json(m: &SwModule) -> Value {
    json!({
        "w": m.w,
        "d": m.d,
        "generators": m.generators.iter().map(matrix_json).collect::<Vec<_>>(),
    })
}

/// `{w, d, generators}` in the column convention; the Coxeter relations are
/// validated.
pub fn module_from_json(v: &Value) -> Result<SwModule> {
    let w = as_usize(get(v, "w")?, "w")?;
    let d = as_usize(get(v, "d")?, "d")?;
    let gens = as_array(get(v, "generators")?, "generators")?
        .iter()
        .map(|g| {
            let rows = as_array(g, "generator")?;
            if rows.len() != d {
                return Err(schema(format!("generators must be {d}×{d}")));
            }
            let dense: Vec<Vec<Q>> = rows
                .iter()
                .map(|r| Ok(linalg::to_dense(d, &parse_vec(r, d, "generator row")?)))
                .collect::<Result<_>>()?;
            RMatrix::from_dense(&dense)
        })
        .collect::<Result<Vec<_>>>()?;
    SwModule::new(w, d, gens)
}
