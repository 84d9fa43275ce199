//! Polarized metric graphs and the objects that live on them.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::{format_rational, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("edge {0} has non-positive length")]
    NonPositiveLength(String),
    #[error("edge {edge} references unknown vertex {vertex}")]
    UnknownVertex { edge: String, vertex: String },
    #[error("duplicate id {0}")]
    DuplicateId(String),
    #[error("graph has no vertices")]
    Empty,
    #[error("unknown edge index {0}")]
    UnknownEdge(usize),
    #[error("offset {offset} outside edge {edge} of length {length}")]
    OffsetOutOfRange { edge: usize, offset: String, length: String },
    #[error("signed measure has nonzero total mass {0}")]
    NonZeroMass(String),
    #[error("measure has total mass {0}, expected 1")]
    NonProbabilityMeasure(String),
    #[error("measure shape does not match graph ({vertices} vertices, {edges} edges)")]
    MeasureShape { vertices: usize, edges: usize },
    #[error("g(x,x) on edge {edge} is not quadratic: interpolant predicts {predicted}, solve gives {actual}")]
    InterpolationMismatch { edge: usize, predicted: String, actual: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub genus: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub from: VertexId,
    pub to: VertexId,
    pub length: Q,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }
}

/// A connected metric graph with a genus weight on every vertex.
///
/// Loops and parallel edges are allowed. Construction validates
/// connectivity and positivity of every length; the value is immutable
/// afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PMGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl PMGraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut seen = HashSet::new();
        for name in vertices.iter().map(|v| &v.name).chain(edges.iter().map(|e| &e.name)) {
            if !seen.insert(name.as_str()) {
                return Err(GraphError::DuplicateId(name.clone()));
            }
        }
        for e in &edges {
            for end in [e.from, e.to] {
                if end.0 >= vertices.len() {
                    return Err(GraphError::UnknownVertex {
                        edge: e.name.clone(),
                        vertex: format!("#{}", end.0),
                    });
                }
            }
            if !e.length.is_positive() {
                return Err(GraphError::NonPositiveLength(e.name.clone()));
            }
        }
        let g = PMGraph { vertices, edges };
        if !g.is_connected_without(None) {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v.0]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v.name == name).map(VertexId)
    }

    /// Valence; a loop counts twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.from == v) + usize::from(e.to == v))
            .sum()
    }

    /// First Betti number |E| − |V| + 1.
    pub fn betti_number(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    pub fn total_length(&self) -> Q {
        self.edges.iter().map(|e| &e.length).sum()
    }

    /// Connectivity of the graph with one edge optionally removed.
    pub(crate) fn is_connected_without(&self, removed: Option<EdgeId>) -> bool {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut components = n;
        for (i, e) in self.edges.iter().enumerate() {
            if Some(EdgeId(i)) == removed {
                continue;
            }
            let (a, b) = (find(&mut parent, e.from.0), find(&mut parent, e.to.0));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        components == 1
    }

    /// An edge whose removal disconnects the graph. Loops never are.
    pub fn is_bridge(&self, e: EdgeId) -> bool {
        !self.edge(e).is_loop() && !self.is_connected_without(Some(e))
    }

    /// Same graph with edge `e` deleted, if what remains is connected.
    pub(crate) fn without_edge(&self, e: EdgeId) -> Option<PMGraph> {
        if !self.is_connected_without(Some(e)) {
            return None;
        }
        let mut edges = self.edges.clone();
        edges.remove(e.0);
        Some(PMGraph { vertices: self.vertices.clone(), edges })
    }

    /// Every edge length multiplied by `s > 0`.
    pub fn scaled(&self, s: &Q) -> PMGraph {
        assert!(s.is_positive(), "scale factor must be positive");
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { length: &e.length * s, ..e.clone() })
            .collect();
        PMGraph { vertices: self.vertices.clone(), edges }
    }

    /// Splits `e` at the given interior offset with a genus-0 vertex; the two
    /// halves replace `e` (first half keeps the id position).
    pub fn subdivide(&self, e: EdgeId, offset: &Q) -> Result<PMGraph, GraphError> {
        let edge = self.edges.get(e.0).ok_or(GraphError::UnknownEdge(e.0))?;
        if !offset.is_positive() || offset >= &edge.length {
            return Err(GraphError::OffsetOutOfRange {
                edge: e.0,
                offset: format_rational(offset),
                length: format_rational(&edge.length),
            });
        }
        let mut g = self.clone();
        let w = VertexId(g.vertices.len());
        g.vertices.push(Vertex { name: fresh_name(&g, "s"), genus: 0 });
        let tail = Edge {
            name: fresh_name(&g, "t"),
            from: w,
            to: edge.to,
            length: &edge.length - offset,
        };
        g.edges[e.0] = Edge { to: w, length: offset.clone(), ..edge.clone() };
        g.edges.push(tail);
        Ok(g)
    }

    pub(crate) fn check_point(&self, p: &GraphPoint) -> Result<(), GraphError> {
        match p {
            GraphPoint::Vertex(v) if v.0 < self.vertices.len() => Ok(()),
            GraphPoint::Vertex(v) => Err(GraphError::UnknownVertex {
                edge: "-".into(),
                vertex: format!("#{}", v.0),
            }),
            GraphPoint::OnEdge { edge, offset } => {
                let e = self.edges.get(edge.0).ok_or(GraphError::UnknownEdge(edge.0))?;
                if offset.is_positive() && offset < &e.length {
                    Ok(())
                } else {
                    Err(GraphError::OffsetOutOfRange {
                        edge: edge.0,
                        offset: format_rational(offset),
                        length: format_rational(&e.length),
                    })
                }
            }
        }
    }

    /// The canonical point at `offset` along `e` from its first endpoint.
    pub fn point(&self, e: EdgeId, offset: Q) -> Result<GraphPoint, GraphError> {
        let edge = self.edges.get(e.0).ok_or(GraphError::UnknownEdge(e.0))?;
        if offset.is_zero() {
            Ok(GraphPoint::Vertex(edge.from))
        } else if offset == edge.length {
            Ok(GraphPoint::Vertex(edge.to))
        } else {
            let p = GraphPoint::OnEdge { edge: e, offset };
            self.check_point(&p)?;
            Ok(p)
        }
    }
}

fn fresh_name(g: &PMGraph, prefix: &str) -> String {
    let taken: HashSet<&str> = g
        .vertices
        .iter()
        .map(|v| v.name.as_str())
        .chain(g.edges.iter().map(|e| e.name.as_str()))
        .collect();
    (0..)
        .map(|i| format!("{prefix}{i}"))
        .find(|n| !taken.contains(n.as_str()))
        .expect("unbounded name supply")
}

/// Incremental construction with automatic ids `v0, v1, …` and `e0, e1, …`.
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl GraphBuilder {
    pub fn vertex(&mut self, genus: u32) -> VertexId {
        let id = VertexId(self.vertices.len());
        self.vertices.push(Vertex { name: format!("v{}", id.0), genus });
        id
    }

    pub fn edge(&mut self, from: VertexId, to: VertexId, length: Q) -> EdgeId {
        let id = EdgeId(self.edges.len());
        self.edges.push(Edge { name: format!("e{}", id.0), from, to, length });
        id
    }

    pub fn build(self) -> Result<PMGraph, GraphError> {
        PMGraph::new(self.vertices, self.edges)
    }
}

/// A point of the metric graph. Vertices have exactly one representation:
/// edge offsets are strictly interior.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphPoint {
    Vertex(VertexId),
    OnEdge { edge: EdgeId, offset: Q },
}

impl fmt::Display for GraphPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphPoint::Vertex(v) => write!(f, "v#{}", v.0),
            GraphPoint::OnEdge { edge, offset } => {
                write!(f, "e#{}@{}", edge.0, format_rational(offset))
            }
        }
    }
}

/// Finite formal sum of points with rational coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphDivisor {
    terms: BTreeMap<GraphPoint, Q>,
}

impl GraphDivisor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn point(p: GraphPoint) -> Self {
        let mut d = Self::new();
        d.add(p, Q::from_integer(1.into()));
        d
    }

    pub fn add(&mut self, p: GraphPoint, coeff: Q) {
        let slot = self.terms.entry(p.clone()).or_insert_with(Q::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn with(mut self, p: GraphPoint, coeff: Q) -> Self {
        self.add(p, coeff);
        self
    }

    pub fn degree(&self) -> Q {
        self.terms.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GraphPoint, &Q)> {
        self.terms.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: &GraphPoint) -> Q {
        self.terms.get(p).cloned().unwrap_or_else(Q::zero)
    }

    pub fn scaled(&self, s: &Q) -> Self {
        let mut d = Self::new();
        for (p, c) in &self.terms {
            d.add(p.clone(), c * s);
        }
        d
    }

    pub fn points(&self) -> impl Iterator<Item = &GraphPoint> {
        self.terms.keys()
    }
}

/// Vertex point masses plus a constant density on each edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMeasure {
    pub vertex_mass: Vec<Q>,
    pub edge_density: Vec<Q>,
}

impl GraphMeasure {
    pub fn zero(g: &PMGraph) -> Self {
        GraphMeasure {
            vertex_mass: vec![Q::zero(); g.num_vertices()],
            edge_density: vec![Q::zero(); g.num_edges()],
        }
    }

    pub fn dirac(g: &PMGraph, v: VertexId) -> Self {
        let mut m = Self::zero(g);
        m.vertex_mass[v.0] = Q::from_integer(1.into());
        m
    }

    /// Normalized length measure on a single edge.
    pub fn uniform_on_edge(g: &PMGraph, e: EdgeId) -> Self {
        let mut m = Self::zero(g);
        m.edge_density[e.0] = g.edge(e).length.recip();
        m
    }

    pub fn check_shape(&self, g: &PMGraph) -> Result<(), GraphError> {
        if self.vertex_mass.len() == g.num_vertices() && self.edge_density.len() == g.num_edges() {
            Ok(())
        } else {
            Err(GraphError::MeasureShape { vertices: g.num_vertices(), edges: g.num_edges() })
        }
    }

    pub fn total_mass(&self, g: &PMGraph) -> Q {
        let atoms: Q = self.vertex_mass.iter().sum();
        let spread: Q = self
            .edge_density
            .iter()
            .zip(g.edges())
            .map(|(rho, e)| rho * &e.length)
            .sum();
        atoms + spread
    }

    pub fn is_nonnegative(&self) -> bool {
        self.vertex_mass.iter().chain(&self.edge_density).all(|x| !x.is_negative())
    }

    pub fn scaled(&self, s: &Q) -> Self {
        GraphMeasure {
            vertex_mass: self.vertex_mass.iter().map(|m| m * s).collect(),
            edge_density: self.edge_density.iter().map(|r| r * s).collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        GraphMeasure {
            vertex_mass: self.vertex_mass.iter().zip(&other.vertex_mass).map(|(a, b)| a + b).collect(),
            edge_density: self.edge_density.iter().zip(&other.edge_density).map(|(a, b)| a + b).collect(),
        }
    }
}

/// A graph subdivided so that a chosen set of points become vertices.
///
/// Original vertices keep their indices; each original edge is replaced by
/// its pieces in order along the edge.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub graph: PMGraph,
    /// For each refined edge: originating edge and the offset of its start.
    pub origin: Vec<(EdgeId, Q)>,
    /// Refined edges covering each original edge, in order.
    pub pieces: Vec<Vec<EdgeId>>,
    split: BTreeMap<(EdgeId, Q), VertexId>,
}

impl Refinement {
    pub fn new<'a>(
        g: &PMGraph,
        points: impl IntoIterator<Item = &'a GraphPoint>,
    ) -> Result<Self, GraphError> {
        let mut cuts: Vec<BTreeSet<Q>> = vec![BTreeSet::new(); g.num_edges()];
        for p in points {
            g.check_point(p)?;
            if let GraphPoint::OnEdge { edge, offset } = p {
                cuts[edge.0].insert(offset.clone());
            }
        }
        let mut vertices = g.vertices.clone();
        let mut edges = Vec::new();
        let mut origin = Vec::new();
        let mut pieces = Vec::new();
        let mut split = BTreeMap::new();
        for (i, e) in g.edges.iter().enumerate() {
            let mut start = Q::zero();
            let mut from = e.from;
            let mut mine = Vec::new();
            for cut in &cuts[i] {
                let w = VertexId(vertices.len());
                vertices.push(Vertex { name: format!("#cut{}", w.0), genus: 0 });
                split.insert((EdgeId(i), cut.clone()), w);
                mine.push(EdgeId(edges.len()));
                edges.push(Edge {
                    name: format!("#piece{}", edges.len()),
                    from,
                    to: w,
                    length: cut - &start,
                });
                origin.push((EdgeId(i), start));
                start = cut.clone();
                from = w;
            }
            mine.push(EdgeId(edges.len()));
            edges.push(Edge {
                name: format!("#piece{}", edges.len()),
                from,
                to: e.to,
                length: &e.length - &start,
            });
            origin.push((EdgeId(i), start));
            pieces.push(mine);
        }
        Ok(Refinement { graph: PMGraph { vertices, edges }, origin, pieces, split })
    }

    /// Vertex of the refined graph at an original point.
    pub fn vertex_of(&self, p: &GraphPoint) -> VertexId {
        match p {
            GraphPoint::Vertex(v) => *v,
            GraphPoint::OnEdge { edge, offset } => *self
                .split
                .get(&(*edge, offset.clone()))
                .expect("point was not part of the refinement"),
        }
    }

    pub fn pull_measure(&self, m: &GraphMeasure) -> GraphMeasure {
        let mut vertex_mass = m.vertex_mass.clone();
        vertex_mass.resize(self.graph.num_vertices(), Q::zero());
        let edge_density = self.origin.iter().map(|(e, _)| m.edge_density[e.0].clone()).collect();
        GraphMeasure { vertex_mass, edge_density }
    }

    /// Vertex masses of the refined graph carrying a divisor.
    pub fn pull_divisor(&self, d: &GraphDivisor) -> Vec<Q> {
        let mut mass = vec![Q::zero(); self.graph.num_vertices()];
        for (p, c) in d.iter() {
            mass[self.vertex_of(p).0] += c;
        }
        mass
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, ratio};

    fn theta_graph() -> PMGraph {
        let mut b = PMGraph::builder();
        let u = b.vertex(0);
        let v = b.vertex(0);
        for _ in 0..3 {
            b.edge(u, v, q(1));
        }
        b.build().unwrap()
    }

    #[test]
    fn validation() {
        let mut b = PMGraph::builder();
        let u = b.vertex(0);
        let v = b.vertex(0);
        b.edge(u, v, q(0));
        assert_eq!(b.build(), Err(GraphError::NonPositiveLength("e0".into())));

        let mut b = PMGraph::builder();
        b.vertex(1);
        b.vertex(1);
        assert_eq!(b.build(), Err(GraphError::Disconnected));
        assert_eq!(PMGraph::builder().build(), Err(GraphError::Empty));
    }

    #[test]
    fn degree_counts_loops_twice() {
        let mut b = PMGraph::builder();
        let v = b.vertex(0);
        b.edge(v, v, q(2));
        b.edge(v, v, q(3));
        let g = b.build().unwrap();
        assert_eq!(g.degree(v), 4);
        assert_eq!(g.betti_number(), 2);
        assert!(!g.is_bridge(EdgeId(0)));
    }

    #[test]
    fn bridges() {
        let mut b = PMGraph::builder();
        let u = b.vertex(0);
        let v = b.vertex(0);
        b.edge(u, u, q(1));
        b.edge(u, v, q(1));
        b.edge(v, v, q(1));
        let g = b.build().unwrap();
        assert!(g.is_bridge(EdgeId(1)));
        assert!(!theta_graph().is_bridge(EdgeId(0)));
    }

    #[test]
    fn points_canonicalize() {
        let g = theta_graph();
        assert_eq!(g.point(EdgeId(1), q(0)).unwrap(), GraphPoint::Vertex(VertexId(0)));
        assert_eq!(g.point(EdgeId(1), q(1)).unwrap(), GraphPoint::Vertex(VertexId(1)));
        assert!(matches!(g.point(EdgeId(1), ratio(1, 2)).unwrap(), GraphPoint::OnEdge { .. }));
        assert!(g.point(EdgeId(1), q(2)).is_err());
    }

    #[test]
    fn divisor_merges_and_drops_zero() {
        let p = GraphPoint::Vertex(VertexId(0));
        let d = GraphDivisor::point(p.clone()).with(p.clone(), q(-1));
        assert!(d.is_empty());
        let d = GraphDivisor::point(p.clone()).with(p, q(2));
        assert_eq!(d.degree(), q(3));
    }

    #[test]
    fn refinement_splits_in_order() {
        let g = theta_graph();
        let pts = [
            g.point(EdgeId(0), ratio(3, 4)).unwrap(),
            g.point(EdgeId(0), ratio(1, 4)).unwrap(),
        ];
        let r = Refinement::new(&g, &pts).unwrap();
        assert_eq!(r.graph.num_vertices(), 4);
        assert_eq!(r.graph.num_edges(), 5);
        assert_eq!(r.graph.total_length(), g.total_length());
        let lens: Vec<Q> = r.pieces[0].iter().map(|e| r.graph.edge(*e).length.clone()).collect();
        assert_eq!(lens, vec![ratio(1, 4), ratio(1, 2), ratio(1, 4)]);
        assert_eq!(r.graph.edge(r.pieces[0][0]).to, r.vertex_of(&pts[1]));
    }
}
