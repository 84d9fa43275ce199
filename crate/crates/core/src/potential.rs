//! Laplace equation on metric graphs, effective resistance and Green's
//! functions, all in exact arithmetic.
//!
//! Sign convention: Δf = −f″·dx − Σ_p (sum of outgoing slopes at p)·δ_p.
//! With it Δ(r(·, y) for unit current) is a positive atom where current
//! enters and Δ_x g_μ(x, y) = δ_y − μ.

use num_traits::{One, Zero};

use crate::graph::{GraphDivisor, GraphError, GraphMeasure, GraphPoint, PMGraph, Refinement, VertexId};
use crate::linalg::{self, Solution};
use crate::poly::{PiecewisePoly, Quadratic};
use crate::rational::{format_rational, q, Q};

/// Potential on a graph whose sources are all at vertices.
///
/// `mass[v]` are atoms, `density[e]` constant edge densities; total mass must
/// already be zero.
fn solve_vertex_sources(g: &PMGraph, mass: &[Q], density: &[Q], base: VertexId) -> PiecewisePoly {
    let n = g.num_vertices();
    // Node equation: Σ_e (f_p − f_other)/ℓ = m(p) + Σ_e ρ ℓ / 2 over edge ends at p.
    let mut lap = vec![vec![Q::zero(); n]; n];
    let mut rhs = mass.to_vec();
    for (e, rho) in g.edges().iter().zip(density) {
        let half = rho * &e.length / q(2);
        rhs[e.from.0] += &half;
        rhs[e.to.0] += &half;
        if e.is_loop() {
            continue;
        }
        let c = e.length.recip();
        let (u, v) = (e.from.0, e.to.0);
        lap[u][u] += &c;
        lap[v][v] += &c;
        lap[u][v] -= &c;
        lap[v][u] -= &c;
    }
    // Pin f(base) = 0 by replacing its row.
    lap[base.0] = (0..n).map(|j| if j == base.0 { Q::one() } else { Q::zero() }).collect();
    rhs[base.0] = Q::zero();
    let values = match linalg::solve(lap, rhs, n) {
        Solution::Unique(x) => x,
        other => unreachable!("grounded Laplacian of a connected graph is invertible: {other:?}"),
    };
    let polys = g
        .edges()
        .iter()
        .zip(density)
        .map(|(e, rho)| {
            // f″ = −ρ, f(0) = f_u, f(ℓ) = f_v
            let c2 = -rho / q(2);
            let (fu, fv) = (&values[e.from.0], &values[e.to.0]);
            let c1 = (fv - fu) / &e.length - &c2 * &e.length;
            Quadratic::new(c2, c1, fu.clone())
        })
        .collect();
    let mut f = PiecewisePoly::from_quadratics(g, polys);
    f.vertex_values = values;
    f
}

/// Solves Δf = σ for σ = `divisor` + `measure` (total mass 0), normalized by
/// f(`base`) = 0.
pub fn solve_poisson(
    g: &PMGraph,
    divisor: &GraphDivisor,
    measure: &GraphMeasure,
    base: VertexId,
) -> Result<PiecewisePoly, GraphError> {
    measure.check_shape(g)?;
    let total = divisor.degree() + measure.total_mass(g);
    if !total.is_zero() {
        return Err(GraphError::NonZeroMass(format_rational(&total)));
    }
    let r = Refinement::new(g, divisor.points())?;
    let fine = r.pull_measure(measure);
    let mass: Vec<Q> = fine
        .vertex_mass
        .iter()
        .zip(r.pull_divisor(divisor))
        .map(|(a, b)| a + b)
        .collect();
    let f = solve_vertex_sources(&r.graph, &mass, &fine.edge_density, base);
    Ok(PiecewisePoly::from_refinement(&r, &f, g.num_vertices()))
}

/// Effective resistance between two points, edge lengths as resistances.
pub fn effective_resistance(g: &PMGraph, x: &GraphPoint, y: &GraphPoint) -> Result<Q, GraphError> {
    g.check_point(x)?;
    g.check_point(y)?;
    if x == y {
        return Ok(Q::zero());
    }
    let d = GraphDivisor::point(x.clone()).with(y.clone(), -Q::one());
    let f = solve_poisson(g, &d, &GraphMeasure::zero(g), VertexId(0))?;
    Ok(f.eval(x) - f.eval(y))
}

/// Σ dᵢ eⱼ r(xᵢ, yⱼ).
pub fn resistance_pairing(g: &PMGraph, d: &GraphDivisor, e: &GraphDivisor) -> Result<Q, GraphError> {
    let mut points: Vec<GraphPoint> = d.points().chain(e.points()).cloned().collect();
    points.sort();
    points.dedup();
    let r = Refinement::new(g, &points)?;
    let fine = &r.graph;
    let base = VertexId(0);
    let zero_density = vec![Q::zero(); fine.num_edges()];
    // Column p: potential of δ_p − δ_base grounded at base.
    let columns: Vec<Vec<Q>> = points
        .iter()
        .map(|p| {
            let mut mass = vec![Q::zero(); fine.num_vertices()];
            mass[r.vertex_of(p).0] += Q::one();
            mass[base.0] -= Q::one();
            solve_vertex_sources(fine, &mass, &zero_density, base).vertex_values
        })
        .collect();
    let idx = |p: &GraphPoint| points.binary_search(p).expect("collected above");
    let mut total = Q::zero();
    for (x, a) in d.iter() {
        let (i, vx) = (idx(x), r.vertex_of(x).0);
        for (y, b) in e.iter() {
            let (j, vy) = (idx(y), r.vertex_of(y).0);
            let rxy = &columns[i][vx] + &columns[j][vy] - &columns[i][vy] - &columns[j][vx];
            total += a * b * rxy;
        }
    }
    Ok(total)
}

fn check_probability(g: &PMGraph, mu: &GraphMeasure) -> Result<(), GraphError> {
    mu.check_shape(g)?;
    let mass = mu.total_mass(g);
    if mass.is_one() {
        Ok(())
    } else {
        Err(GraphError::NonProbabilityMeasure(format_rational(&mass)))
    }
}

/// g_μ(·, y): Δ g = δ_y − μ with ∫ g dμ = 0.
pub fn green_function(g: &PMGraph, mu: &GraphMeasure, y: &GraphPoint) -> Result<PiecewisePoly, GraphError> {
    check_probability(g, mu)?;
    let f = solve_poisson(g, &GraphDivisor::point(y.clone()), &mu.scaled(&-Q::one()), VertexId(0))?;
    let c = integrate(g, &f, &GraphDivisor::new(), mu);
    Ok(f.add_constant(&-c))
}

/// x ↦ g_μ(x, x), interpolated from three offsets per edge and checked at
/// a fourth.
pub fn diagonal_green(g: &PMGraph, mu: &GraphMeasure) -> Result<PiecewisePoly, GraphError> {
    check_probability(g, mu)?;
    let on_diagonal = |p: &GraphPoint| -> Result<Q, GraphError> { Ok(green_function(g, mu, p)?.eval(p)) };
    let vertex_values = g
        .vertex_ids()
        .map(|v| on_diagonal(&GraphPoint::Vertex(v)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut polys = Vec::with_capacity(g.num_edges());
    for id in g.edge_ids() {
        let e = g.edge(id);
        let len = &e.length;
        let (t0, t1, t2) = (Q::zero(), len / q(3), len.clone());
        let y0 = vertex_values[e.from.0].clone();
        let y1 = on_diagonal(&g.point(id, t1.clone())?)?;
        let y2 = vertex_values[e.to.0].clone();
        let fit = Quadratic::interpolate([(&t0, &y0), (&t1, &y1), (&t2, &y2)]);
        let tc = len * q(3) / q(4);
        let actual = on_diagonal(&g.point(id, tc.clone())?)?;
        let predicted = fit.eval(&tc);
        if predicted != actual {
            return Err(GraphError::InterpolationMismatch {
                edge: id.0,
                predicted: format_rational(&predicted),
                actual: format_rational(&actual),
            });
        }
        polys.push(fit);
    }
    let mut f = PiecewisePoly::from_quadratics(g, polys);
    f.vertex_values = vertex_values;
    Ok(f)
}

/// ∫ f d(divisor + measure).
pub fn integrate(g: &PMGraph, f: &PiecewisePoly, divisor: &GraphDivisor, measure: &GraphMeasure) -> Q {
    let atoms: Q = divisor.iter().map(|(p, c)| c * f.eval(p)).sum();
    let vertex_atoms: Q = measure.vertex_mass.iter().zip(&f.vertex_values).map(|(m, v)| m * v).sum();
    let spread: Q = g
        .edge_ids()
        .zip(&measure.edge_density)
        .filter(|(_, rho)| !rho.is_zero())
        .map(|(e, rho)| {
            let along: Q = f.pieces[e.0].iter().map(|p| p.poly.integrate(&p.start, &p.end)).sum();
            rho * along
        })
        .sum();
    atoms + vertex_atoms + spread
}
