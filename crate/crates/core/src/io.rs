//! JSON formats for circuits, matrix tuples, hitting sets and verdicts.
//!
//! Rationals are strings `"p/q"` (`"p"` when integral); integers are also
//! accepted on input. Parse errors carry the JSON path of the offending
//! value.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{format_scalar, parse_scalar, Matrix, Monomial, Scalar, SparsePoly};
use crate::branching::{Abp, AffineForm, Roabp, RoabpLayer, TracePower};
use crate::diagonal::{DiagonalCircuit, DiagonalTerm};
use crate::error::{Error, Result};
use crate::invariants::{Decision, MatrixTuple, Method, OrbitVerdict, OrbitWitness};
use crate::pit::{Certificate, HittingSet, PitVerdict, Provenance, Witness};

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
enum ScalarDoc {
    Text(String),
    Int(i64),
}

impl ScalarDoc {
    fn to_scalar(&self, path: &str) -> Result<Scalar> {
        match self {
            ScalarDoc::Int(v) => Ok(Scalar::from_integer((*v).into())),
            ScalarDoc::Text(s) => parse_scalar(s).map_err(|e| Error::Parse {
                path: path.to_string(),
                message: match e {
                    Error::Parse { message, .. } => message,
                    other => other.to_string(),
                },
            }),
        }
    }

    fn from_scalar(s: &Scalar) -> Self {
        ScalarDoc::Text(format_scalar(s))
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct AffineDoc {
    #[serde(default = "zero_doc")]
    c: ScalarDoc,
    #[serde(default)]
    lin: BTreeMap<String, ScalarDoc>,
}

fn zero_doc() -> ScalarDoc {
    ScalarDoc::Int(0)
}

impl AffineDoc {
    fn to_affine(&self, path: &str) -> Result<AffineForm> {
        let constant = self.c.to_scalar(&format!("{path}.c"))?;
        let mut form = AffineForm::constant(constant);
        for (k, v) in &self.lin {
            let vpath = format!("{path}.lin.{k}");
            let i: usize = k.parse().map_err(|_| Error::Parse {
                path: vpath.clone(),
                message: format!("variable index {k:?} is not a non-negative integer"),
            })?;
            form.add_linear(i, v.to_scalar(&vpath)?);
        }
        Ok(form)
    }

    fn from_affine(f: &AffineForm) -> Self {
        AffineDoc {
            c: ScalarDoc::from_scalar(f.constant_term()),
            lin: f
                .linear_terms()
                .map(|(i, a)| (i.to_string(), ScalarDoc::from_scalar(a)))
                .collect(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AbpDoc {
    #[allow(dead_code)]
    kind: String,
    nvars: usize,
    layers: Vec<Vec<Vec<AffineDoc>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RoabpDoc {
    #[allow(dead_code)]
    kind: String,
    nvars: usize,
    r: usize,
    layers: Vec<Vec<Vec<Vec<ScalarDoc>>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TracePowerDoc {
    #[allow(dead_code)]
    kind: String,
    nvars: usize,
    exponent: usize,
    matrix: Vec<Vec<AffineDoc>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TupleDoc {
    n: usize,
    r: usize,
    matrices: Vec<Vec<Vec<ScalarDoc>>>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    #[serde(rename = "L")]
    forms: Vec<AffineDoc>,
    #[serde(rename = "e")]
    exponents: Vec<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagonalDoc {
    n: usize,
    terms: Vec<TermDoc>,
}

/// Any of the three branching-program formats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Circuit {
    Abp(Abp),
    Roabp(Roabp),
    TracePower(TracePower),
}

impl Circuit {
    pub fn kind(&self) -> &'static str {
        match self {
            Circuit::Abp(_) => "abp",
            Circuit::Roabp(_) => "roabp",
            Circuit::TracePower(_) => "trace_power",
        }
    }

    pub fn expand(&self) -> SparsePoly {
        match self {
            Circuit::Abp(p) => p.expand(),
            Circuit::Roabp(p) => p.expand(),
            Circuit::TracePower(t) => t.expand(),
        }
    }

    pub fn nvars(&self) -> usize {
        match self {
            Circuit::Abp(p) => p.nvars(),
            Circuit::Roabp(p) => p.nvars(),
            Circuit::TracePower(t) => t.nvars(),
        }
    }
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        path: "$".into(),
        message: e.to_string(),
    })
}

fn decode<T: DeserializeOwned>(value: Value) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| Error::Parse {
        path: json_path(&e.path().to_string()),
        message: e.inner().to_string(),
    })
}

fn json_path(p: &str) -> String {
    if p == "." || p.is_empty() {
        "$".into()
    } else {
        format!("$.{p}")
    }
}

fn scalar_matrix(rows: &[Vec<ScalarDoc>], path: &str) -> Result<Matrix<Scalar>> {
    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, v)| v.to_scalar(&format!("{path}[{i}][{j}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows).map_err(|e| at(path, e))
}

fn affine_matrix(rows: &[Vec<AffineDoc>], path: &str) -> Result<Matrix<AffineForm>> {
    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, f)| f.to_affine(&format!("{path}[{i}][{j}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows).map_err(|e| at(path, e))
}

fn at(path: &str, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => Error::Parse {
            path: path.to_string(),
            message: other.to_string(),
        },
    }
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let value = parse_json(text)?;
    let kind = value
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse {
            path: "$.kind".into(),
            message: "expected one of \"abp\", \"roabp\", \"trace_power\"".into(),
        })?
        .to_string();
    match kind.as_str() {
        "abp" => {
            let doc: AbpDoc = decode(value)?;
            let layers = doc
                .layers
                .iter()
                .enumerate()
                .map(|(i, l)| affine_matrix(l, &format!("$.layers[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(Circuit::Abp(
                Abp::new(doc.nvars, layers).map_err(|e| at("$.layers", e))?,
            ))
        }
        "roabp" => {
            let doc: RoabpDoc = decode(value)?;
            if doc.r == 0 {
                return Err(Error::Parse {
                    path: "$.r".into(),
                    message: "degree bound must be positive".into(),
                });
            }
            if doc.nvars != doc.layers.len() {
                return Err(Error::Parse {
                    path: "$.nvars".into(),
                    message: format!(
                        "a ROABP reads one variable per layer: expected {}, got {}",
                        doc.layers.len(),
                        doc.nvars
                    ),
                });
            }
            let layers = doc
                .layers
                .iter()
                .enumerate()
                .map(|(i, l)| roabp_layer(l, doc.r, &format!("$.layers[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(Circuit::Roabp(
                Roabp::new(layers).map_err(|e| at("$.layers", e))?,
            ))
        }
        "trace_power" => {
            let doc: TracePowerDoc = decode(value)?;
            let m = affine_matrix(&doc.matrix, "$.matrix")?;
            Ok(Circuit::TracePower(
                TracePower::new(doc.nvars, doc.exponent, m).map_err(|e| at("$", e))?,
            ))
        }
        other => Err(Error::Parse {
            path: "$.kind".into(),
            message: format!(
                "unknown circuit kind {other:?}; expected \"abp\", \"roabp\" or \"trace_power\""
            ),
        }),
    }
}

fn roabp_layer(rows: &[Vec<Vec<ScalarDoc>>], r: usize, path: &str) -> Result<RoabpLayer> {
    let height = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    let mut coeffs = vec![Matrix::<Scalar>::zeros(height, width); r];
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(Error::Parse {
                path: format!("{path}[{i}]"),
                message: format!("expected {width} entries, got {}", row.len()),
            });
        }
        for (j, poly) in row.iter().enumerate() {
            let epath = format!("{path}[{i}][{j}]");
            if poly.len() > r {
                return Err(Error::Parse {
                    path: epath,
                    message: format!("{} coefficients exceed degree bound r = {r}", poly.len()),
                });
            }
            for (k, c) in poly.iter().enumerate() {
                coeffs[k].set(i, j, c.to_scalar(&format!("{epath}[{k}]"))?);
            }
        }
    }
    RoabpLayer::new(coeffs).map_err(|e| at(path, e))
}

fn affine_rows(m: &Matrix<AffineForm>) -> Vec<Vec<AffineDoc>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(AffineDoc::from_affine).collect())
        .collect()
}

pub fn scalar_json(s: &Scalar) -> Value {
    Value::String(format_scalar(s))
}

pub fn point_json(p: &[Scalar]) -> Value {
    Value::Array(p.iter().map(scalar_json).collect())
}

pub fn matrix_json(m: &Matrix<Scalar>) -> Value {
    Value::Array((0..m.rows()).map(|i| point_json(m.row(i))).collect())
}

pub fn circuit_json(c: &Circuit) -> Value {
    match c {
        Circuit::Abp(p) => json!({
            "kind": "abp",
            "nvars": p.nvars(),
            "layers": p.layers().iter().map(affine_rows).collect::<Vec<_>>(),
        }),
        Circuit::Roabp(p) => {
            let layers: Vec<Value> = p
                .layers()
                .iter()
                .map(|l| {
                    Value::Array(
                        (0..l.rows())
                            .map(|i| {
                                Value::Array(
                                    (0..l.cols())
                                        .map(|j| {
                                            let mut cs: Vec<&Scalar> =
                                                l.coeffs().iter().map(|c| c.get(i, j)).collect();
                                            while cs
                                                .last()
                                                .is_some_and(|c| num_traits::Zero::is_zero(*c))
                                            {
                                                cs.pop();
                                            }
                                            Value::Array(cs.into_iter().map(scalar_json).collect())
                                        })
                                        .collect(),
                                )
                            })
                            .collect(),
                    )
                })
                .collect();
            json!({
                "kind": "roabp",
                "nvars": p.nvars(),
                "r": p.degree_bound(),
                "layers": layers,
            })
        }
        Circuit::TracePower(t) => json!({
            "kind": "trace_power",
            "nvars": t.nvars(),
            "exponent": t.exponent(),
            "matrix": affine_rows(t.matrix()),
        }),
    }
}

pub fn parse_tuple(text: &str) -> Result<MatrixTuple> {
    let doc: TupleDoc = decode(parse_json(text)?)?;
    if doc.matrices.len() != doc.r {
        return Err(Error::Parse {
            path: "$.matrices".into(),
            message: format!(
                "expected r = {} matrices, got {}",
                doc.r,
                doc.matrices.len()
            ),
        });
    }
    let mut mats = Vec::with_capacity(doc.r);
    for (k, rows) in doc.matrices.iter().enumerate() {
        let path = format!("$.matrices[{k}]");
        let m = scalar_matrix(rows, &path)?;
        if m.rows() != doc.n || m.cols() != doc.n {
            return Err(Error::Parse {
                path,
                message: format!(
                    "expected a {n}x{n} matrix, got {}x{}",
                    m.rows(),
                    m.cols(),
                    n = doc.n
                ),
            });
        }
        mats.push(m);
    }
    MatrixTuple::new(mats).map_err(|e| at("$.matrices", e))
}

pub fn tuple_json(t: &MatrixTuple) -> Value {
    json!({
        "n": t.n(),
        "r": t.r(),
        "matrices": t.matrices().iter().map(matrix_json).collect::<Vec<_>>(),
    })
}

pub fn parse_diagonal(text: &str) -> Result<DiagonalCircuit> {
    let doc: DiagonalDoc = decode(parse_json(text)?)?;
    let terms = doc
        .terms
        .iter()
        .enumerate()
        .map(|(l, t)| {
            let path = format!("$.terms[{l}]");
            let forms = t
                .forms
                .iter()
                .enumerate()
                .map(|(j, f)| f.to_affine(&format!("{path}.L[{j}]")))
                .collect::<Result<Vec<_>>>()?;
            DiagonalTerm::new(forms, t.exponents.clone()).map_err(|e| at(&format!("{path}.e"), e))
        })
        .collect::<Result<Vec<_>>>()?;
    DiagonalCircuit::new(doc.n, terms).map_err(|e| at("$.terms", e))
}

pub fn diagonal_json(c: &DiagonalCircuit) -> Value {
    json!({
        "n": c.nvars(),
        "terms": c.terms().iter().map(|t| TermDoc {
            forms: t.forms().iter().map(AffineDoc::from_affine).collect(),
            exponents: t.exponents().to_vec(),
        }).collect::<Vec<_>>(),
    })
}

/// A JSON array of equal-length point arrays.
pub fn parse_hitting_set(text: &str, path_label: &str) -> Result<HittingSet> {
    let doc: Vec<Vec<ScalarDoc>> = decode(parse_json(text)?)?;
    let arity = doc.first().map_or(0, Vec::len);
    let points = doc
        .iter()
        .enumerate()
        .map(|(i, p)| {
            if p.len() != arity {
                return Err(Error::Parse {
                    path: format!("$[{i}]"),
                    message: format!("expected {arity} coordinates, got {}", p.len()),
                });
            }
            p.iter()
                .enumerate()
                .map(|(j, v)| v.to_scalar(&format!("$[{i}][{j}]")))
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    HittingSet::new(
        arity,
        points,
        Provenance::File {
            path: path_label.to_string(),
        },
    )
}

pub fn hitting_set_json(h: &HittingSet) -> Value {
    Value::Array(h.points().iter().map(|p| point_json(p)).collect())
}

fn monomial_json(m: &Monomial, nvars: usize) -> Value {
    json!(m.to_dense(nvars.max(m.arity())))
}

/// `{"nvars", "terms": [{"exponents", "coeff"}], "text"}` with terms in
/// increasing monomial order.
pub fn poly_json(f: &SparsePoly) -> Value {
    json!({
        "nvars": f.nvars(),
        "terms": f.terms().map(|(m, c)| json!({
            "exponents": monomial_json(m, f.nvars()),
            "coeff": scalar_json(c),
        })).collect::<Vec<_>>(),
        "text": f.to_string(),
    })
}

fn witness_json(w: &Witness, nvars: usize) -> Value {
    match w {
        Witness::Point { point, value } => json!({
            "kind": "point",
            "point": point_json(point),
            "value": scalar_json(value),
        }),
        Witness::Monomial {
            monomial,
            coefficient,
        } => json!({
            "kind": "monomial",
            "exponents": monomial_json(monomial, nvars),
            "coefficient": scalar_json(coefficient),
        }),
    }
}

pub fn pit_verdict_json(v: &PitVerdict, nvars: usize) -> Value {
    let mut out = json!({
        "decision": if v.is_zero { "zero" } else { "nonzero" },
        "witness": v.witness.as_ref().map_or(Value::Null, |w| witness_json(w, nvars)),
    });
    let obj = out.as_object_mut().expect("object literal");
    match &v.certificate {
        Certificate::Whitebox => {
            obj.insert("method".into(), json!("whitebox"));
        }
        Certificate::BlackboxDeterministic => {
            obj.insert("method".into(), json!("blackbox-deterministic"));
        }
        Certificate::Randomized { failure_bound } => {
            obj.insert("method".into(), json!("randomized"));
            obj.insert("failure_bound".into(), scalar_json(failure_bound));
            obj.insert(
                "confidence".into(),
                scalar_json(&(Scalar::from_integer(1.into()) - failure_bound)),
            );
        }
    }
    out
}

pub fn decision_name(d: Decision) -> &'static str {
    match d {
        Decision::Intersecting => "intersecting",
        Decision::Disjoint => "disjoint",
        Decision::Member => "member",
        Decision::NonMember => "non-member",
    }
}

pub fn orbit_verdict_json(v: &OrbitVerdict) -> Value {
    let witness = match &v.witness {
        None => Value::Null,
        Some(OrbitWitness::Separating {
            ell,
            point,
            monomial,
            value_a,
            value_b,
        }) => json!({
            "kind": "separating",
            "ell": ell,
            "point": point_json(point),
            "monomial": monomial.as_ref().map_or(Value::Null, |m| monomial_json(m, *ell)),
            "value_a": scalar_json(value_a),
            "value_b": scalar_json(value_b),
        }),
        Some(OrbitWitness::Conjugator { p }) => json!({
            "kind": "conjugator",
            "p": matrix_json(p),
        }),
    };
    let mut out = json!({
        "decision": decision_name(v.decision),
        "witness": witness,
    });
    let obj = out.as_object_mut().expect("object literal");
    match &v.method {
        Method::Whitebox => {
            obj.insert("method".into(), json!("whitebox"));
        }
        Method::Blackbox => {
            obj.insert("method".into(), json!("blackbox"));
        }
        Method::Randomized { failure_bound } => {
            obj.insert("method".into(), json!("randomized"));
            obj.insert("failure_bound".into(), scalar_json(failure_bound));
            obj.insert("confidence".into(), scalar_json(&v.confidence()));
        }
    }
    out
}
