#![allow(dead_code)]

pub mod resistor;

use genus2_core::catalog::{FiberTag, FiberType};
use genus2_core::graph::{EdgeId, GraphPoint, PMGraph, VertexId};
use genus2_core::rational::ratio;
use genus2_core::Q;
use proptest::prelude::*;

/// Positive rational with bounded numerator and denominator.
pub fn positive_rational(max_num: i64, max_den: i64) -> impl Strategy<Value = Q> {
    (1..=max_num, 1..=max_den).prop_map(|(n, d)| ratio(n, d))
}

/// Connected graph on 1..=`max_vertices` vertices: a random spanning tree
/// plus up to `max_extra` extra edges (loops allowed), genera in {0, 1}.
pub fn connected_graph(max_vertices: usize, max_extra: usize) -> impl Strategy<Value = PMGraph> {
    (1..=max_vertices)
        .prop_flat_map(move |n| {
            let genera = proptest::collection::vec(0u32..=1, n);
            let parents: Vec<_> = (1..n).map(|i| (0..i, positive_rational(9, 4)).boxed()).collect();
            let extra = proptest::collection::vec((0..n, 0..n, positive_rational(9, 4)), 0..=max_extra);
            (genera, parents, extra)
        })
        .prop_map(|(genera, parents, extra)| {
            let mut b = PMGraph::builder();
            let vs: Vec<VertexId> = genera.iter().map(|&q| b.vertex(q)).collect();
            for (i, (p, len)) in parents.into_iter().enumerate() {
                b.edge(vs[p], vs[i + 1], len);
            }
            for (u, v, len) in extra {
                b.edge(vs[u], vs[v], len);
            }
            b.build().expect("spanning tree keeps the graph connected")
        })
}

/// A point selected by two numbers: `k == 0` picks a vertex, otherwise the
/// point at fraction k/9 along an edge.
pub fn pick_point(g: &PMGraph, selector: usize, k: u8) -> GraphPoint {
    if g.num_edges() == 0 || k == 0 {
        return GraphPoint::Vertex(VertexId(selector % g.num_vertices()));
    }
    let e = EdgeId(selector % g.num_edges());
    let offset = &g.edge(e).length * ratio(i64::from(k % 9), 9);
    g.point(e, offset).expect("offset within edge")
}

pub fn point_selector() -> impl Strategy<Value = (usize, u8)> {
    (0usize..64, 0u8..9)
}

/// Fiber type with parameters p/q, p and q at most `bound`.
pub fn fiber_type(bound: i64) -> impl Strategy<Value = FiberType> {
    proptest::sample::select(FiberTag::ALL.to_vec()).prop_flat_map(move |tag| {
        proptest::collection::vec(positive_rational(bound, bound), tag.arity())
            .prop_map(move |ps| FiberType::new(tag, ps).expect("positive parameters"))
    })
}

pub fn fiber_type_of(tag: FiberTag, bound: i64) -> impl Strategy<Value = FiberType> {
    proptest::collection::vec(positive_rational(bound, bound), tag.arity())
        .prop_map(move |ps| FiberType::new(tag, ps).expect("positive parameters"))
}
