//! Continuous functions on a metric graph that are quadratic on pieces of
//! each edge.

use num_traits::Zero;

use crate::graph::{EdgeId, GraphPoint, PMGraph, Refinement};
use crate::rational::{q, Q};

/// `c2 t² + c1 t + c0`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Quadratic {
    pub c2: Q,
    pub c1: Q,
    pub c0: Q,
}

impl Quadratic {
    pub fn new(c2: Q, c1: Q, c0: Q) -> Self {
        Quadratic { c2, c1, c0 }
    }

    pub fn constant(c: Q) -> Self {
        Quadratic { c2: Q::zero(), c1: Q::zero(), c0: c }
    }

    pub fn eval(&self, t: &Q) -> Q {
        (&self.c2 * t + &self.c1) * t + &self.c0
    }

    pub fn derivative_at(&self, t: &Q) -> Q {
        q(2) * &self.c2 * t + &self.c1
    }

    /// Exact ∫ₐᵇ p(t) dt.
    pub fn integrate(&self, a: &Q, b: &Q) -> Q {
        let anti = |t: &Q| {
            let t2 = t * t;
            &self.c2 * &t2 * t / q(3) + &self.c1 * &t2 / q(2) + &self.c0 * t
        };
        anti(b) - anti(a)
    }

    /// `t ↦ p(t − s)`.
    pub fn shifted(&self, s: &Q) -> Quadratic {
        Quadratic {
            c2: self.c2.clone(),
            c1: &self.c1 - q(2) * &self.c2 * s,
            c0: &self.c2 * s * s - &self.c1 * s + &self.c0,
        }
    }

    pub fn add(&self, o: &Quadratic) -> Quadratic {
        Quadratic { c2: &self.c2 + &o.c2, c1: &self.c1 + &o.c1, c0: &self.c0 + &o.c0 }
    }

    pub fn scale(&self, s: &Q) -> Quadratic {
        Quadratic { c2: &self.c2 * s, c1: &self.c1 * s, c0: &self.c0 * s }
    }

    pub fn is_constant(&self) -> bool {
        self.c2.is_zero() && self.c1.is_zero()
    }

    /// Unique quadratic through three points with distinct abscissae.
    pub fn interpolate(pts: [(&Q, &Q); 3]) -> Quadratic {
        let [(x0, y0), (x1, y1), (x2, y2)] = pts;
        let mut out = Quadratic::default();
        for (xi, yi, xj, xk) in [(x0, y0, x1, x2), (x1, y1, x0, x2), (x2, y2, x0, x1)] {
            let w = yi / ((xi - xj) * (xi - xk));
            // w (t − xj)(t − xk)
            out = out.add(&Quadratic::new(w.clone(), -(&w * (xj + xk)), &w * xj * xk));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub start: Q,
    pub end: Q,
    pub poly: Quadratic,
}

/// Per-edge piecewise quadratic, in the offset coordinate of each edge,
/// together with the vertex values (needed for edgeless graphs and for the
/// continuity check).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewisePoly {
    pub vertex_values: Vec<Q>,
    pub pieces: Vec<Vec<Piece>>,
}

impl PiecewisePoly {
    pub fn zero(g: &PMGraph) -> Self {
        PiecewisePoly {
            vertex_values: vec![Q::zero(); g.num_vertices()],
            pieces: g
                .edges()
                .iter()
                .map(|e| vec![Piece { start: Q::zero(), end: e.length.clone(), poly: Quadratic::default() }])
                .collect(),
        }
    }

    /// One quadratic per edge.
    pub fn from_quadratics(g: &PMGraph, polys: Vec<Quadratic>) -> Self {
        debug_assert_eq!(polys.len(), g.num_edges());
        let mut vertex_values = vec![Q::zero(); g.num_vertices()];
        for (e, p) in g.edges().iter().zip(&polys) {
            vertex_values[e.from.0] = p.c0.clone();
            vertex_values[e.to.0] = p.eval(&e.length);
        }
        let pieces = g
            .edges()
            .iter()
            .zip(polys)
            .map(|(e, poly)| vec![Piece { start: Q::zero(), end: e.length.clone(), poly }])
            .collect();
        PiecewisePoly { vertex_values, pieces }
    }

    pub fn constant(g: &PMGraph, c: &Q) -> Self {
        let mut f = Self::zero(g);
        f.vertex_values.iter_mut().for_each(|v| *v = c.clone());
        f.pieces.iter_mut().flatten().for_each(|p| p.poly = Quadratic::constant(c.clone()));
        f
    }

    /// The quadratic of an edge that is covered by a single piece.
    pub fn quadratic(&self, e: EdgeId) -> Option<&Quadratic> {
        match self.pieces[e.0].as_slice() {
            [only] => Some(&only.poly),
            _ => None,
        }
    }

    pub fn eval(&self, p: &GraphPoint) -> Q {
        match p {
            GraphPoint::Vertex(v) => self.vertex_values[v.0].clone(),
            GraphPoint::OnEdge { edge, offset } => {
                let pieces = &self.pieces[edge.0];
                let piece = pieces
                    .iter()
                    .find(|pc| &pc.start <= offset && offset <= &pc.end)
                    .expect("offset inside edge");
                piece.poly.eval(offset)
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let vertex_values = self.vertex_values.iter().zip(&other.vertex_values).map(|(a, b)| a + b).collect();
        let pieces = self
            .pieces
            .iter()
            .zip(&other.pieces)
            .map(|(a, b)| merge_pieces(a, b))
            .collect();
        PiecewisePoly { vertex_values, pieces }
    }

    pub fn scale(&self, s: &Q) -> Self {
        PiecewisePoly {
            vertex_values: self.vertex_values.iter().map(|v| v * s).collect(),
            pieces: self
                .pieces
                .iter()
                .map(|ps| {
                    ps.iter()
                        .map(|p| Piece { start: p.start.clone(), end: p.end.clone(), poly: p.poly.scale(s) })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn add_constant(&self, c: &Q) -> Self {
        let mut f = self.clone();
        f.vertex_values.iter_mut().for_each(|v| *v += c);
        f.pieces.iter_mut().flatten().for_each(|p| p.poly.c0 += c);
        f
    }

    /// Values agree at every piece boundary and at every vertex.
    pub fn is_continuous(&self, g: &PMGraph) -> bool {
        g.edges().iter().zip(&self.pieces).all(|(e, ps)| {
            let first = ps.first().expect("nonempty");
            let last = ps.last().expect("nonempty");
            first.poly.eval(&first.start) == self.vertex_values[e.from.0]
                && last.poly.eval(&last.end) == self.vertex_values[e.to.0]
                && ps.windows(2).all(|w| w[0].poly.eval(&w[0].end) == w[1].poly.eval(&w[1].start))
        })
    }

    /// Constant on the whole graph, with value returned.
    pub fn constant_value(&self) -> Option<Q> {
        let c = self.vertex_values.first()?.clone();
        let flat = self.vertex_values.iter().all(|v| *v == c)
            && self.pieces.iter().flatten().all(|p| p.poly.is_constant() && p.poly.c0 == c);
        flat.then_some(c)
    }

    /// Collapses the per-edge pieces of a function defined on a refinement
    /// back onto the original edges, merging neighbours with equal
    /// coefficients.
    pub fn from_refinement(r: &Refinement, refined: &PiecewisePoly, original_vertices: usize) -> Self {
        let vertex_values = refined.vertex_values[..original_vertices].to_vec();
        let pieces = r
            .pieces
            .iter()
            .map(|sub| {
                let mut out: Vec<Piece> = Vec::new();
                for e in sub {
                    let shift = &r.origin[e.0].1;
                    for p in &refined.pieces[e.0] {
                        let piece = Piece {
                            start: &p.start + shift,
                            end: &p.end + shift,
                            poly: p.poly.shifted(shift),
                        };
                        match out.last_mut() {
                            Some(prev) if prev.poly == piece.poly => prev.end = piece.end,
                            _ => out.push(piece),
                        }
                    }
                }
                out
            })
            .collect();
        PiecewisePoly { vertex_values, pieces }
    }
}

fn merge_pieces(a: &[Piece], b: &[Piece]) -> Vec<Piece> {
    let mut cuts: Vec<Q> = a.iter().chain(b).flat_map(|p| [p.start.clone(), p.end.clone()]).collect();
    cuts.sort();
    cuts.dedup();
    let find = |ps: &[Piece], lo: &Q, hi: &Q| -> Quadratic {
        ps.iter()
            .find(|p| &p.start <= lo && hi <= &p.end)
            .expect("pieces cover the edge")
            .poly
            .clone()
    };
    let mut out: Vec<Piece> = Vec::new();
    for w in cuts.windows(2) {
        let poly = find(a, &w[0], &w[1]).add(&find(b, &w[0], &w[1]));
        match out.last_mut() {
            Some(prev) if prev.poly == poly => prev.end = w[1].clone(),
            _ => out.push(Piece { start: w[0].clone(), end: w[1].clone(), poly }),
        }
    }
    out
}
