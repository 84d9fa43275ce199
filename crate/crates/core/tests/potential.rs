mod common;

use common::resistor::Chain;
use common::{connected_graph, pick_point, point_selector, positive_rational};
use genus2_core::catalog::{graph_of_type, FiberTag, FiberType};
use genus2_core::graph::{EdgeId, GraphDivisor, GraphMeasure, GraphPoint, PMGraph, VertexId};
use genus2_core::invariants::admissible_measure;
use genus2_core::potential::{effective_resistance, green_function, solve_poisson};
use genus2_core::rational::{q, ratio, to_f64};
use genus2_core::Q;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Some probability measure mixing vertex mass and edge density.
fn mixed_measure(g: &PMGraph) -> GraphMeasure {
    let mut mu = GraphMeasure::zero(g);
    if g.num_edges() == 0 {
        mu.vertex_mass[0] = Q::one();
        return mu;
    }
    mu.vertex_mass[g.num_vertices() - 1] = ratio(1, 2);
    let e = EdgeId(g.num_edges() - 1);
    mu.edge_density[e.0] = ratio(1, 2) / &g.edge(e).length;
    mu
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn resistance_is_a_metric(
        g in connected_graph(4, 3),
        a in point_selector(), b in point_selector(), c in point_selector(),
    ) {
        let x = pick_point(&g, a.0, a.1);
        let y = pick_point(&g, b.0, b.1);
        let z = pick_point(&g, c.0, c.1);
        let rxy = effective_resistance(&g, &x, &y).unwrap();
        let ryx = effective_resistance(&g, &y, &x).unwrap();
        let rxz = effective_resistance(&g, &x, &z).unwrap();
        let ryz = effective_resistance(&g, &y, &z).unwrap();
        prop_assert_eq!(&rxy, &ryx);
        prop_assert!(rxy >= Q::zero());
        prop_assert_eq!(rxy.is_zero(), x == y);
        prop_assert!(rxz <= &rxy + &ryz);
    }

    #[test]
    fn poisson_solution_ignores_subdivision(
        g in connected_graph(4, 3),
        sel in 0usize..64, k in 1i64..9,
        src in point_selector(),
    ) {
        let e = EdgeId(sel % g.num_edges().max(1));
        prop_assume!(g.num_edges() > 0);
        let cut = &g.edge(e).length * ratio(k, 9);
        let fine = g.subdivide(e, &cut).unwrap();
        let x = pick_point(&g, src.0, src.1);
        prop_assume!(!matches!(x, GraphPoint::OnEdge { edge, .. } if edge == e));
        let d = GraphDivisor::point(x.clone()).with(GraphPoint::Vertex(VertexId(0)), -Q::one());
        let mu = GraphMeasure::zero(&g);
        let coarse_f = solve_poisson(&g, &d, &mu, VertexId(0)).unwrap();
        let fine_f = solve_poisson(&fine, &d, &GraphMeasure::zero(&fine), VertexId(0)).unwrap();
        for v in g.vertex_ids() {
            let p = GraphPoint::Vertex(v);
            prop_assert_eq!(coarse_f.eval(&p), fine_f.eval(&p));
        }
        // the new vertex sits where the cut was
        let w = GraphPoint::Vertex(VertexId(g.num_vertices()));
        prop_assert_eq!(coarse_f.eval(&g.point(e, cut).unwrap()), fine_f.eval(&w));
    }

    #[test]
    fn green_function_is_symmetric(
        g in connected_graph(3, 2),
        pairs in proptest::collection::vec((point_selector(), point_selector()), 20),
    ) {
        let mu = mixed_measure(&g);
        for (a, b) in pairs {
            let x = pick_point(&g, a.0, a.1);
            let y = pick_point(&g, b.0, b.1);
            let gxy = green_function(&g, &mu, &y).unwrap().eval(&x);
            let gyx = green_function(&g, &mu, &x).unwrap().eval(&y);
            prop_assert_eq!(gxy, gyx, "x = {}, y = {}", x, y);
        }
    }

    #[test]
    fn laplacian_of_green_function_is_recovered(
        g in connected_graph(4, 3),
        sel in point_selector(),
    ) {
        let mu = mixed_measure(&g);
        let y = pick_point(&g, sel.0, sel.1);
        let f = green_function(&g, &mu, &y).unwrap();
        prop_assert!(f.is_continuous(&g));
        let integral = genus2_core::potential::integrate(&g, &f, &GraphDivisor::new(), &mu);
        prop_assert!(integral.is_zero());
        // -f'' equals the density part of δ_y − μ
        let mut outgoing = vec![Q::zero(); g.num_vertices()];
        for (i, e) in g.edges().iter().enumerate() {
            let pieces = &f.pieces[i];
            for p in pieces {
                prop_assert_eq!(&p.poly.c2 * q(2), mu.edge_density[i].clone());
            }
            for w in pieces.windows(2) {
                let at = &w[0].end;
                let jump = w[0].poly.derivative_at(at) - w[1].poly.derivative_at(at);
                let expected = match &y {
                    GraphPoint::OnEdge { edge, offset } if edge.0 == i && offset == at => Q::one(),
                    _ => Q::zero(),
                };
                prop_assert_eq!(jump, expected);
            }
            outgoing[e.from.0] += pieces[0].poly.derivative_at(&Q::zero());
            let last = pieces.last().unwrap();
            outgoing[e.to.0] -= last.poly.derivative_at(&last.end);
        }
        for v in g.vertex_ids() {
            let point_mass = if y == GraphPoint::Vertex(v) { Q::one() } else { Q::zero() };
            prop_assert_eq!(-outgoing[v.0].clone(), point_mass - &mu.vertex_mass[v.0]);
        }
    }

    #[test]
    fn resistance_scales_linearly(
        g in connected_graph(4, 3),
        s in positive_rational(7, 5),
        a in point_selector(), b in point_selector(),
    ) {
        let x = pick_point(&g, a.0, a.1);
        let y = pick_point(&g, b.0, b.1);
        let big = g.scaled(&s);
        let scale_point = |p: &GraphPoint| match p {
            GraphPoint::Vertex(v) => GraphPoint::Vertex(*v),
            GraphPoint::OnEdge { edge, offset } => GraphPoint::OnEdge { edge: *edge, offset: offset * &s },
        };
        let r = effective_resistance(&g, &x, &y).unwrap();
        let rs = effective_resistance(&big, &scale_point(&x), &scale_point(&y)).unwrap();
        prop_assert_eq!(rs, r * &s);
    }
}

/// Discrete chains with `n` resistors per edge reproduce g_μ to within 5/n.
fn check_against_chain(t: &FiberType, n: usize) {
    let g = graph_of_type(t);
    let mu = admissible_measure(&g).unwrap().measure;
    let chain = Chain::new(&g, n);
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for (i, j) in [(0, 3), (1, 7), (2, 5), (5, 5), (9, 1), (4, 8), (10, 6), (3, 10), (6, 0), (8, 2)] {
        let e1 = EdgeId(i % g.num_edges());
        let e2 = EdgeId((i + j) % g.num_edges());
        let y = chain.node_at(e2, j, 10);
        let x = chain.node_at(e1, i, 10);
        let discrete = chain.green(&g, &mu, y);
        let yp = g.point(e2, &g.edge(e2).length * ratio(j as i64, 10)).unwrap();
        let xp = g.point(e1, &g.edge(e1).length * ratio(i as i64, 10)).unwrap();
        let exact = to_f64(&green_function(&g, &mu, &yp).unwrap().eval(&xp));
        worst = worst.max((discrete[chain.index(x)] - exact).abs());
        pairs += 1;
    }
    assert_eq!(pairs, 10);
    assert!(worst < 5.0 / n as f64, "{t} at n = {n}: max error {worst}");
}

#[test]
fn resistor_chain_agrees() {
    let types = [
        FiberType::new(FiberTag::II, vec![q(1)]).unwrap(),
        FiberType::new(FiberTag::III, vec![q(1)]).unwrap(),
        FiberType::new(FiberTag::VII, vec![q(1), q(1), q(1)]).unwrap(),
        FiberType::new(FiberTag::VI, vec![ratio(1, 2), q(2), ratio(3, 2)]).unwrap(),
    ];
    for t in &types {
        for n in [50, 100] {
            check_against_chain(t, n);
        }
    }
}

#[test]
fn spec_examples() {
    let mut b = PMGraph::builder();
    let v = b.vertex(1);
    b.edge(v, v, q(4));
    let circle = b.build().unwrap();
    let x = GraphPoint::Vertex(VertexId(0));
    let y = circle.point(EdgeId(0), q(2)).unwrap();
    assert_eq!(effective_resistance(&circle, &x, &y).unwrap(), q(1));
}
