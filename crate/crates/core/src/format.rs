//! Text formats: graph files, period-matrix files and structured reports.
//!
//! All documents are JSON. Rationals travel as `"p/q"` or integer strings,
//! floats as strings with 17 significant digits so that every field
//! round-trips bit-exactly.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, GraphError, PMGraph, Vertex, VertexId};
use crate::invariants::NonArchReport;
use crate::rational::{format_rational, parse_rational, RationalParseError};
use crate::theta::{ArchReport, QuadMethod, SiegelMatrix, ThetaError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad rational in field {field}: {source}")]
    Rational { field: String, source: RationalParseError },
    #[error("bad float {0:?}")]
    Float(String),
    #[error("bad complex literal {0:?}")]
    Complex(String),
    #[error("edge {edge} refers to unknown vertex {vertex}")]
    UnknownVertex { edge: String, vertex: String },
    #[error("expected {expected} entries, got {got}")]
    Count { expected: usize, got: usize },
    #[error("unexpected document kind {0:?}")]
    Kind(String),
    #[error("unknown quadrature method {0:?}")]
    Method(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexWire {
    id: String,
    genus: u32,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeWire {
    id: String,
    from: String,
    to: String,
    length: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphWire {
    vertices: Vec<VertexWire>,
    edges: Vec<EdgeWire>,
}

pub fn parse_graph(text: &str) -> Result<PMGraph, FormatError> {
    let wire: GraphWire = serde_json::from_str(text)?;
    let index: HashMap<&str, usize> = wire.vertices.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect();
    let lookup = |edge: &str, v: &str| {
        index
            .get(v)
            .map(|&i| VertexId(i))
            .ok_or_else(|| FormatError::UnknownVertex { edge: edge.to_owned(), vertex: v.to_owned() })
    };
    let mut edges = Vec::with_capacity(wire.edges.len());
    for e in &wire.edges {
        let length = parse_rational(&e.length)
            .map_err(|source| FormatError::Rational { field: format!("edges[{}].length", e.id), source })?;
        edges.push(Edge { name: e.id.clone(), from: lookup(&e.id, &e.from)?, to: lookup(&e.id, &e.to)?, length });
    }
    let vertices = wire.vertices.into_iter().map(|v| Vertex { name: v.id, genus: v.genus }).collect();
    Ok(PMGraph::new(vertices, edges)?)
}

pub fn write_graph(g: &PMGraph) -> String {
    let wire = GraphWire {
        vertices: g.vertices().iter().map(|v| VertexWire { id: v.name.clone(), genus: v.genus }).collect(),
        edges: g
            .edges()
            .iter()
            .map(|e| EdgeWire {
                id: e.name.clone(),
                from: g.vertex(e.from).name.clone(),
                to: g.vertex(e.to).name.clone(),
                length: format_rational(&e.length),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&wire).expect("graph serializes") + "\n"
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn parse_float(s: &str) -> Result<f64, FormatError> {
    let ok = !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit() || b"+-.eE".contains(&b));
    match s.parse::<f64>() {
        Ok(x) if ok && x.is_finite() => Ok(x),
        _ => Err(FormatError::Float(s.to_owned())),
    }
}

/// `"re+im i"` with 17 significant digits per part.
pub fn format_complex(z: Complex64) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

/// Accepts `a`, `bi`, `a+bi`, `a-bi` (whitespace ignored, `i` may stand
/// alone for ±1).
pub fn parse_complex(s: &str) -> Result<Complex64, FormatError> {
    let err = || FormatError::Complex(s.to_owned());
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err());
    }
    let Some(body) = compact.strip_suffix('i') else {
        return Ok(Complex64::new(parse_float(&compact).map_err(|_| err())?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| -> Result<f64, FormatError> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => parse_float(t).map_err(|_| err()),
        }
    };
    match split {
        Some(k) => {
            let re = parse_float(&body[..k]).map_err(|_| err())?;
            Ok(Complex64::new(re, imag(&body[k..])?))
        }
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TauWire {
    tau: Vec<String>,
}

/// Four complex entries, row-major; symmetry enforced.
pub fn parse_tau(text: &str) -> Result<SiegelMatrix, FormatError> {
    let wire: TauWire = serde_json::from_str(text)?;
    if wire.tau.len() != 4 {
        return Err(FormatError::Count { expected: 4, got: wire.tau.len() });
    }
    let z: Vec<Complex64> = wire.tau.iter().map(|s| parse_complex(s)).collect::<Result<_, _>>()?;
    Ok(SiegelMatrix::new([[z[0], z[1]], [z[2], z[3]]])?)
}

pub fn write_tau(tau: &SiegelMatrix) -> String {
    let wire = TauWire { tau: tau.entries().iter().flatten().map(|&z| format_complex(z)).collect() };
    serde_json::to_string_pretty(&wire).expect("tau serializes") + "\n"
}

/// A non-archimedean report plus the fiber type it was computed for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonArchDocument {
    pub fiber_type: Option<String>,
    pub report: NonArchReport,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NonArchWire {
    kind: String,
    fiber_type: Option<String>,
    genus: u32,
    delta0: String,
    delta1: String,
    r_kk: String,
    epsilon: String,
    phi: String,
    lambda: String,
    measure_from_fallback: bool,
}

impl NonArchDocument {
    pub fn to_json(&self) -> String {
        let r = &self.report;
        let wire = NonArchWire {
            kind: "nonarch".into(),
            fiber_type: self.fiber_type.clone(),
            genus: r.genus,
            delta0: format_rational(&r.delta0),
            delta1: format_rational(&r.delta1),
            r_kk: format_rational(&r.r_kk),
            epsilon: format_rational(&r.epsilon),
            phi: format_rational(&r.phi),
            lambda: format_rational(&r.lambda),
            measure_from_fallback: r.measure_from_fallback,
        };
        serde_json::to_string_pretty(&wire).expect("report serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let w: NonArchWire = serde_json::from_str(text)?;
        if w.kind != "nonarch" {
            return Err(FormatError::Kind(w.kind));
        }
        let rat = |field: &str, s: &str| {
            parse_rational(s).map_err(|source| FormatError::Rational { field: field.to_owned(), source })
        };
        Ok(NonArchDocument {
            fiber_type: w.fiber_type,
            report: NonArchReport {
                genus: w.genus,
                delta0: rat("delta0", &w.delta0)?,
                delta1: rat("delta1", &w.delta1)?,
                r_kk: rat("r_kk", &w.r_kk)?,
                epsilon: rat("epsilon", &w.epsilon)?,
                phi: rat("phi", &w.phi)?,
                lambda: rat("lambda", &w.lambda)?,
                measure_from_fallback: w.measure_from_fallback,
            },
        })
    }
}

pub fn method_name(m: QuadMethod) -> &'static str {
    match m {
        QuadMethod::MonteCarlo => "monte-carlo",
        QuadMethod::LatticeRule => "lattice-rule",
    }
}

pub fn parse_method(s: &str) -> Result<QuadMethod, FormatError> {
    match s {
        "monte-carlo" | "mc" => Ok(QuadMethod::MonteCarlo),
        "lattice-rule" | "lattice" => Ok(QuadMethod::LatticeRule),
        _ => Err(FormatError::Method(s.to_owned())),
    }
}

/// An archimedean report with everything needed to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchDocument {
    pub report: ArchReport,
    pub tau: [[Complex64; 2]; 2],
    pub samples: usize,
    pub seed: u64,
    pub method: QuadMethod,
    pub tol: f64,
    pub target_stderr: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArchWire {
    kind: String,
    tau: Vec<String>,
    log_delta2: String,
    log_h: String,
    log_h_stderr: String,
    delta_f: String,
    log_s: String,
    phi: String,
    phi_stderr: String,
    lambda: String,
    lambda_recombined: String,
    residual: String,
    residual_stderr: String,
    s_residual: String,
    accepted: u64,
    rejected: u64,
    samples: usize,
    seed: u64,
    method: String,
    tol: String,
    target_stderr: String,
}

impl ArchDocument {
    pub fn to_json(&self) -> String {
        let r = &self.report;
        let f = format_float;
        let wire = ArchWire {
            kind: "arch".into(),
            tau: self.tau.iter().flatten().map(|&z| format_complex(z)).collect(),
            log_delta2: f(r.log_delta2),
            log_h: f(r.log_h),
            log_h_stderr: f(r.log_h_stderr),
            delta_f: f(r.delta_f),
            log_s: f(r.log_s),
            phi: f(r.phi),
            phi_stderr: f(r.phi_stderr),
            lambda: f(r.lambda),
            lambda_recombined: f(r.lambda_recombined),
            residual: f(r.residual),
            residual_stderr: f(r.residual_stderr),
            s_residual: f(r.s_residual),
            accepted: r.accepted,
            rejected: r.rejected,
            samples: self.samples,
            seed: self.seed,
            method: method_name(self.method).into(),
            tol: f(self.tol),
            target_stderr: f(self.target_stderr),
        };
        serde_json::to_string_pretty(&wire).expect("report serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let w: ArchWire = serde_json::from_str(text)?;
        if w.kind != "arch" {
            return Err(FormatError::Kind(w.kind));
        }
        if w.tau.len() != 4 {
            return Err(FormatError::Count { expected: 4, got: w.tau.len() });
        }
        let z: Vec<Complex64> = w.tau.iter().map(|s| parse_complex(s)).collect::<Result<_, _>>()?;
        let f = |s: &str| parse_float(s);
        Ok(ArchDocument {
            report: ArchReport {
                log_delta2: f(&w.log_delta2)?,
                log_h: f(&w.log_h)?,
                log_h_stderr: f(&w.log_h_stderr)?,
                delta_f: f(&w.delta_f)?,
                log_s: f(&w.log_s)?,
                phi: f(&w.phi)?,
                phi_stderr: f(&w.phi_stderr)?,
                lambda: f(&w.lambda)?,
                lambda_recombined: f(&w.lambda_recombined)?,
                residual: f(&w.residual)?,
                residual_stderr: f(&w.residual_stderr)?,
                s_residual: f(&w.s_residual)?,
                accepted: w.accepted,
                rejected: w.rejected,
            },
            tau: [[z[0], z[1]], [z[2], z[3]]],
            samples: w.samples,
            seed: w.seed,
            method: parse_method(&w.method)?,
            tol: f(&w.tol)?,
            target_stderr: f(&w.target_stderr)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, ratio};

    const GRAPH: &str = r#"{
  "vertices": [
    {
      "id": "a",
      "genus": 1
    },
    {
      "id": "b",
      "genus": 1
    }
  ],
  "edges": [
    {
      "id": "e",
      "from": "a",
      "to": "b",
      "length": "3/2"
    }
  ]
}
"#;

    #[test]
    fn graph_file_is_bit_exact() {
        let g = parse_graph(GRAPH).unwrap();
        assert_eq!(g.edge(crate::graph::EdgeId(0)).length, ratio(3, 2));
        assert_eq!(write_graph(&g), GRAPH);
    }

    #[test]
    fn graph_file_errors() {
        assert!(matches!(parse_graph("{"), Err(FormatError::Json(_))));
        let bad_len = GRAPH.replace("3/2", "1.5");
        assert!(matches!(parse_graph(&bad_len), Err(FormatError::Rational { .. })));
        let bad_vertex = GRAPH.replace(r#""to": "b""#, r#""to": "z""#);
        assert!(matches!(parse_graph(&bad_vertex), Err(FormatError::UnknownVertex { .. })));
        let zero = GRAPH.replace("3/2", "0");
        assert!(matches!(parse_graph(&zero), Err(FormatError::Graph(GraphError::NonPositiveLength(_)))));
        let extra = GRAPH.replace(r#""genus": 1
    },
    {"#, r#""genus": 1, "x": 0
    },
    {"#);
        assert!(parse_graph(&extra).is_err());
    }

    #[test]
    fn complex_literals() {
        let cases = [
            ("1+2i", (1.0, 2.0)),
            ("1 - 2 i", (1.0, -2.0)),
            ("-0.5", (-0.5, 0.0)),
            ("3i", (0.0, 3.0)),
            ("-i", (0.0, -1.0)),
            ("2+i", (2.0, 1.0)),
            ("1e-3-2.5e+2i", (1e-3, -250.0)),
        ];
        for (s, (re, im)) in cases {
            assert_eq!(parse_complex(s).unwrap(), Complex64::new(re, im), "{s}");
        }
        for bad in ["", "i1", "1+2j", "nan", "1++2i", "inf+1i", "1+2ii"] {
            assert!(parse_complex(bad).is_err(), "{bad:?}");
        }
        let z = Complex64::new(0.1, -1.0 / 3.0);
        assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
    }

    #[test]
    fn tau_file() {
        let text = r#"{"tau": ["0.1+1.2i", "0.3+0.4i", "0.3+0.4i", "-0.2+0.9i"]}"#;
        let tau = parse_tau(text).unwrap();
        assert_eq!(parse_tau(&write_tau(&tau)).unwrap(), tau);
        let asym = r#"{"tau": ["0.1+1.2i", "0.3+0.4i", "0.31+0.4i", "-0.2+0.9i"]}"#;
        assert!(matches!(parse_tau(asym), Err(FormatError::Theta(ThetaError::NotSymmetric(_)))));
        assert!(matches!(parse_tau(r#"{"tau": ["1i"]}"#), Err(FormatError::Count { .. })));
    }

    #[test]
    fn nonarch_document_round_trip() {
        let doc = NonArchDocument {
            fiber_type: Some("VII(1,1,1)".into()),
            report: NonArchReport {
                genus: 2,
                delta0: q(3),
                delta1: q(0),
                r_kk: ratio(2, 3),
                epsilon: ratio(5, 9),
                phi: ratio(1, 9),
                lambda: ratio(3, 10),
                measure_from_fallback: false,
            },
        };
        let text = doc.to_json();
        assert!(text.contains(r#""phi": "1/9""#));
        assert_eq!(NonArchDocument::from_json(&text).unwrap(), doc);
    }
}
