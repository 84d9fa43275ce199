//! Semistable fiber types I–VII of genus-2 curves as polarized metric
//! graphs, their tabulated invariants, and the inverse classifier.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::graph::{GraphError, PMGraph};
use crate::invariants::{total_genus, NonArchReport};
use crate::rational::{format_rational, q, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("type {tag} takes {expected} parameter(s), got {got}")]
    Arity { tag: FiberTag, expected: usize, got: usize },
    #[error("type parameters must be positive, got {0}")]
    InvalidParams(String),
    #[error("unknown fiber type {0:?}")]
    UnknownTag(String),
    #[error("graph has genus {0}, classification needs genus 2")]
    NotGenusTwo(u32),
    #[error("genus-2 graph matches none of the types I-VII: {0}")]
    Unclassifiable(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FiberTag {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
}

impl FiberTag {
    pub const ALL: [FiberTag; 7] =
        [FiberTag::I, FiberTag::II, FiberTag::III, FiberTag::IV, FiberTag::V, FiberTag::VI, FiberTag::VII];

    pub fn arity(self) -> usize {
        match self {
            FiberTag::I => 0,
            FiberTag::II | FiberTag::III => 1,
            FiberTag::IV | FiberTag::V => 2,
            FiberTag::VI | FiberTag::VII => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FiberTag::I => "I",
            FiberTag::II => "II",
            FiberTag::III => "III",
            FiberTag::IV => "IV",
            FiberTag::V => "V",
            FiberTag::VI => "VI",
            FiberTag::VII => "VII",
        }
    }
}

impl fmt::Display for FiberTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FiberTag {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FiberTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| CatalogError::UnknownTag(s.to_owned()))
    }
}

/// A fiber type with its positive thickness parameters.
///
/// Parameter conventions: in IV(a,b) and VI(a,b,c) the first parameter is
/// the separating edge; b (and c) are loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberType {
    tag: FiberTag,
    params: Vec<Q>,
}

impl FiberType {
    pub fn new(tag: FiberTag, params: Vec<Q>) -> Result<Self, CatalogError> {
        if params.len() != tag.arity() {
            return Err(CatalogError::Arity { tag, expected: tag.arity(), got: params.len() });
        }
        if let Some(bad) = params.iter().find(|p| !p.is_positive()) {
            return Err(CatalogError::InvalidParams(format_rational(bad)));
        }
        Ok(FiberType { tag, params })
    }

    pub fn tag(&self) -> FiberTag {
        self.tag
    }

    pub fn params(&self) -> &[Q] {
        &self.params
    }

    /// Sorts parameters permuted by the graph's symmetries: all of them for
    /// V and VII, the two loops for VI.
    pub fn canonical(&self) -> FiberType {
        let mut params = self.params.clone();
        match self.tag {
            FiberTag::V | FiberTag::VII => params.sort(),
            FiberTag::VI => params[1..].sort(),
            _ => {}
        }
        FiberType { tag: self.tag, params }
    }
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(format_rational).collect();
            write!(f, "({})", ps.join(","))?;
        }
        Ok(())
    }
}

/// The reduction graph of a fiber type.
pub fn graph_of_type(t: &FiberType) -> PMGraph {
    let p = &t.params;
    let mut b = PMGraph::builder();
    match t.tag {
        FiberTag::I => {
            b.vertex(2);
        }
        FiberTag::II => {
            let u = b.vertex(1);
            let v = b.vertex(1);
            b.edge(u, v, p[0].clone());
        }
        FiberTag::III => {
            let v = b.vertex(1);
            b.edge(v, v, p[0].clone());
        }
        FiberTag::IV => {
            let u = b.vertex(1);
            let v = b.vertex(0);
            b.edge(u, v, p[0].clone());
            b.edge(v, v, p[1].clone());
        }
        FiberTag::V => {
            let v = b.vertex(0);
            b.edge(v, v, p[0].clone());
            b.edge(v, v, p[1].clone());
        }
        FiberTag::VI => {
            let u = b.vertex(0);
            let v = b.vertex(0);
            b.edge(u, u, p[1].clone());
            b.edge(u, v, p[0].clone());
            b.edge(v, v, p[2].clone());
        }
        FiberTag::VII => {
            let u = b.vertex(0);
            let v = b.vertex(0);
            for len in p {
                b.edge(u, v, len.clone());
            }
        }
    }
    b.build().expect("catalog shapes are connected with positive lengths")
}

/// The tabulated invariants of a fiber type.
pub fn closed_form(t: &FiberType) -> NonArchReport {
    let zero = Q::zero;
    let p = &t.params;
    let sixth = |x: &Q| x / q(6);
    let twelfth = |x: &Q| x / q(12);
    let (delta0, delta1, r_kk, epsilon, phi) = match t.tag {
        FiberTag::I => (zero(), zero(), zero(), zero(), zero()),
        FiberTag::II => {
            let a = &p[0];
            (zero(), a.clone(), q(2) * a, a.clone(), a.clone())
        }
        FiberTag::III => {
            let a = &p[0];
            (a.clone(), zero(), zero(), sixth(a), twelfth(a))
        }
        FiberTag::IV => {
            let (a, b) = (&p[0], &p[1]);
            (b.clone(), a.clone(), q(2) * a, a + sixth(b), a + twelfth(b))
        }
        FiberTag::V => {
            let s = &p[0] + &p[1];
            (s.clone(), zero(), zero(), sixth(&s), twelfth(&s))
        }
        FiberTag::VI => {
            let (a, bc) = (&p[0], &p[1] + &p[2]);
            (bc.clone(), a.clone(), q(2) * a, a + sixth(&bc), a + twelfth(&bc))
        }
        FiberTag::VII => {
            let (a, b, c) = (&p[0], &p[1], &p[2]);
            let s = a + b + c;
            let h = a * b * c / (a * b + b * c + c * a);
            (s.clone(), zero(), q(2) * &h, sixth(&s) + sixth(&h), twelfth(&s) - q(5) * twelfth(&h))
        }
    };
    let lambda = (&delta0 + q(2) * &delta1) / q(10);
    NonArchReport { genus: 2, delta0, delta1, r_kk, epsilon, phi, lambda, measure_from_fallback: false }
}

#[derive(Debug, Clone)]
struct Link {
    a: usize,
    b: usize,
    len: Q,
}

/// Merges the two edges at every genus-0 vertex of valence 2 (loops stay).
fn suppress(g: &PMGraph) -> (Vec<u32>, Vec<Link>, Vec<bool>) {
    let genus: Vec<u32> = g.vertices().iter().map(|v| v.genus).collect();
    let mut alive = vec![true; genus.len()];
    let mut links: Vec<Link> = g
        .edges()
        .iter()
        .map(|e| Link { a: e.from.0, b: e.to.0, len: e.length.clone() })
        .collect();
    loop {
        let candidate = (0..genus.len()).find(|&v| {
            if !alive[v] || genus[v] != 0 {
                return false;
            }
            let incident: Vec<&Link> = links.iter().filter(|l| l.a == v || l.b == v).collect();
            incident.len() == 2 && incident.iter().all(|l| l.a != l.b)
        });
        let Some(v) = candidate else { break };
        let (mine, rest): (Vec<Link>, Vec<Link>) = links.into_iter().partition(|l| l.a == v || l.b == v);
        let other = |l: &Link| if l.a == v { l.b } else { l.a };
        let merged = Link { a: other(&mine[0]), b: other(&mine[1]), len: &mine[0].len + &mine[1].len };
        links = rest;
        links.push(merged);
        alive[v] = false;
    }
    (genus, links, alive)
}

/// Identifies the fiber type of a genus-2 pm-graph, up to relabeling and
/// subdivision by genus-0 vertices.
pub fn classify(g: &PMGraph) -> Result<FiberType, CatalogError> {
    let genus_total = total_genus(g);
    if genus_total != 2 {
        return Err(CatalogError::NotGenusTwo(genus_total));
    }
    let (genus, links, alive) = suppress(g);
    let verts: Vec<usize> = (0..genus.len()).filter(|&v| alive[v]).collect();
    let loops_at = |v: usize| -> Vec<Q> {
        let mut ls: Vec<Q> = links.iter().filter(|l| l.a == v && l.b == v).map(|l| l.len.clone()).collect();
        ls.sort();
        ls
    };
    let between: Vec<Q> = links.iter().filter(|l| l.a != l.b).map(|l| l.len.clone()).collect();
    let fail = || CatalogError::Unclassifiable(describe(&genus, &links, &alive));
    let (tag, params) = match *verts.as_slice() {
        [v] => {
            let loops = loops_at(v);
            match (genus[v], loops.len()) {
                (2, 0) => (FiberTag::I, vec![]),
                (1, 1) => (FiberTag::III, loops),
                (0, 2) => (FiberTag::V, loops),
                _ => return Err(fail()),
            }
        }
        [u, v] => {
            let (lu, lv) = (loops_at(u), loops_at(v));
            let (gu, gv) = (genus[u], genus[v]);
            match (between.len(), lu.len(), lv.len()) {
                (1, 0, 0) if gu == 1 && gv == 1 => (FiberTag::II, between),
                (1, 0, 1) if gu == 1 && gv == 0 => (FiberTag::IV, vec![between[0].clone(), lv[0].clone()]),
                (1, 1, 0) if gu == 0 && gv == 1 => (FiberTag::IV, vec![between[0].clone(), lu[0].clone()]),
                (1, 1, 1) if gu == 0 && gv == 0 => {
                    (FiberTag::VI, vec![between[0].clone(), lu[0].clone(), lv[0].clone()])
                }
                (3, 0, 0) if gu == 0 && gv == 0 => (FiberTag::VII, between),
                _ => return Err(fail()),
            }
        }
        _ => return Err(fail()),
    };
    Ok(FiberType::new(tag, params)?.canonical())
}

fn describe(genus: &[u32], links: &[Link], alive: &[bool]) -> String {
    let vs: Vec<String> = (0..genus.len())
        .filter(|&v| alive[v])
        .map(|v| format!("v{}(q={})", v, genus[v]))
        .collect();
    let es: Vec<String> = links.iter().map(|l| format!("{}-{}:{}", l.a, l.b, format_rational(&l.len))).collect();
    format!("vertices [{}], edges [{}]", vs.join(" "), es.join(" "))
}
