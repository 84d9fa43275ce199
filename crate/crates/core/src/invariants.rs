//! Zhang's invariants of a polarized metric graph.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::graph::{GraphDivisor, GraphError, GraphMeasure, GraphPoint, PMGraph};
use crate::linalg::{self, Solution};
use crate::poly::PiecewisePoly;
use crate::potential::{diagonal_green, effective_resistance, green_function, integrate, resistance_pairing};
use crate::rational::{format_rational, q, ratio, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph has total genus 0")]
    GenusZero,
    #[error("invariant needs genus at least 2, graph has genus {0}")]
    GenusTooSmall(u32),
    #[error("no measure of vertex-mass + edge-density shape is admissible: {0}")]
    AdmissibilityFailure(String),
    #[error("phi disagrees between formulas: integral {integral}, resistance {resistance}")]
    FormulaMismatch { integral: String, resistance: String },
}

pub type Result<T> = std::result::Result<T, InvariantError>;

/// b₁ + Σ q(v).
pub fn total_genus(g: &PMGraph) -> u32 {
    g.betti_number() as u32 + g.vertices().iter().map(|v| v.genus).sum::<u32>()
}

/// K = Σ_v (2q(v) − 2 + deg v)·v.
pub fn canonical_divisor(g: &PMGraph) -> GraphDivisor {
    let mut k = GraphDivisor::new();
    for v in g.vertex_ids() {
        let coeff = 2 * i64::from(g.vertex(v).genus) - 2 + g.degree(v) as i64;
        k.add(GraphPoint::Vertex(v), q(coeff));
    }
    k
}

/// Total length of non-separating (δ₀) and separating (δ₁) edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeCounts {
    pub delta0: Q,
    pub delta1: Q,
}

impl NodeCounts {
    pub fn delta(&self) -> Q {
        &self.delta0 + &self.delta1
    }
}

pub fn node_counts(g: &PMGraph) -> NodeCounts {
    let (mut delta0, mut delta1) = (Q::zero(), Q::zero());
    for e in g.edge_ids() {
        if g.is_bridge(e) {
            delta1 += &g.edge(e).length;
        } else {
            delta0 += &g.edge(e).length;
        }
    }
    NodeCounts { delta0, delta1 }
}

/// The admissible measure together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleMeasure {
    pub measure: GraphMeasure,
    /// True when the closed-form candidate failed verification and the
    /// linear solve produced the measure.
    pub from_fallback: bool,
}

/// x ↦ g_μ(x, x) + g_μ(K, x). Constant exactly when μ is admissible.
pub fn constancy_function(g: &PMGraph, mu: &GraphMeasure) -> Result<PiecewisePoly> {
    let k = canonical_divisor(g);
    let mut f = diagonal_green(g, mu)?;
    for (p, c) in k.iter() {
        f = f.add(&green_function(g, mu, p)?.scale(c));
    }
    Ok(f)
}

/// (1/g)(Σ q(v)δ_v + Σ_e dx/(ℓ(e) + R(e))), R(e) the resistance between the
/// ends of e in Γ∖e; bridges carry no density.
pub fn candidate_measure(g: &PMGraph) -> Result<GraphMeasure> {
    let genus = total_genus(g);
    if genus == 0 {
        return Err(InvariantError::GenusZero);
    }
    let inv_g = q(i64::from(genus)).recip();
    let mut mu = GraphMeasure::zero(g);
    for v in g.vertex_ids() {
        mu.vertex_mass[v.0] = q(i64::from(g.vertex(v).genus)) * &inv_g;
    }
    for id in g.edge_ids() {
        let e = g.edge(id);
        let rest = if e.is_loop() {
            Some(Q::zero())
        } else {
            match g.without_edge(id) {
                Some(h) => Some(effective_resistance(&h, &GraphPoint::Vertex(e.from), &GraphPoint::Vertex(e.to))?),
                None => None,
            }
        };
        if let Some(r) = rest {
            mu.edge_density[id.0] = (&e.length + r).recip() * &inv_g;
        }
    }
    Ok(mu)
}

/// Solves for the admissible measure directly.
///
/// Writing j_ν(x) = ∫ r(x, z) dν(z), admissibility of μ is the linear
/// condition g·j_μ(x) − ½ Σ K(v) r(v, x) = const. For a probability
/// measure ν, j_ν(x) = g_ν(x,x) + ∫ g_ν(z,z) dν(z), so each basis measure
/// (a vertex atom, or the normalized length on one edge) contributes a
/// per-edge quadratic and the unknowns (atoms, edge masses, constant) satisfy
/// an exact linear system.
pub fn admissible_measure_by_linear_solve(g: &PMGraph) -> Result<GraphMeasure> {
    let genus = total_genus(g);
    if genus == 0 {
        return Err(InvariantError::GenusZero);
    }
    let nv = g.num_vertices();
    let ne = g.num_edges();
    let potential = |nu: &GraphMeasure| -> Result<PiecewisePoly> {
        let d = diagonal_green(g, nu)?;
        let shift = integrate(g, &d, &GraphDivisor::new(), nu);
        Ok(d.add_constant(&shift))
    };
    let mut basis = Vec::with_capacity(nv + ne);
    for v in g.vertex_ids() {
        basis.push(potential(&GraphMeasure::dirac(g, v))?);
    }
    for e in g.edge_ids() {
        basis.push(potential(&GraphMeasure::uniform_on_edge(g, e))?);
    }
    let k = canonical_divisor(g);
    let mut r_k = PiecewisePoly::zero(g);
    for (p, c) in k.iter() {
        let GraphPoint::Vertex(v) = p else { unreachable!("canonical divisor sits on vertices") };
        r_k = r_k.add(&basis[v.0].scale(c));
    }
    let half_rk = r_k.scale(&ratio(-1, 2));
    let gq = q(i64::from(genus));

    // Unknowns: basis weights (nv + ne), then the constant.
    let ncols = nv + ne + 1;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let row_from = |pick: &dyn Fn(&PiecewisePoly) -> Q, constant: Q| -> Vec<Q> {
        let mut row: Vec<Q> = basis.iter().map(|b| &gq * pick(b)).collect();
        row.push(constant);
        row
    };
    for v in g.vertex_ids() {
        rows.push(row_from(&|b: &PiecewisePoly| b.vertex_values[v.0].clone(), -Q::one()));
        rhs.push(-half_rk.vertex_values[v.0].clone());
    }
    for e in g.edge_ids() {
        let coeff = |f: &PiecewisePoly, which: usize| -> Q {
            let p = f.quadratic(e).expect("diagonal Green's functions are single quadratics");
            if which == 2 { p.c2.clone() } else { p.c1.clone() }
        };
        for which in [2, 1] {
            rows.push(row_from(&|b: &PiecewisePoly| coeff(b, which), Q::zero()));
            rhs.push(-coeff(&half_rk, which));
        }
    }
    let mut mass_row = vec![Q::one(); nv + ne];
    mass_row.push(Q::zero());
    rows.push(mass_row);
    rhs.push(Q::one());

    let weights = match linalg::solve(rows, rhs, ncols) {
        Solution::Unique(x) => x,
        Solution::Underdetermined { .. } => {
            return Err(InvariantError::AdmissibilityFailure("linear system is underdetermined".into()))
        }
        Solution::Inconsistent => {
            return Err(InvariantError::AdmissibilityFailure("linear system is inconsistent".into()))
        }
    };
    let mut mu = GraphMeasure::zero(g);
    mu.vertex_mass.clone_from_slice(&weights[..nv]);
    for e in g.edge_ids() {
        mu.edge_density[e.0] = &weights[nv + e.0] / &g.edge(e).length;
    }
    Ok(mu)
}

fn is_admissible(g: &PMGraph, mu: &GraphMeasure) -> Result<bool> {
    Ok(mu.total_mass(g).is_one() && constancy_function(g, mu)?.constant_value().is_some())
}

/// The unique probability measure making g_μ(x,x) + g_μ(K,x) constant.
pub fn admissible_measure(g: &PMGraph) -> Result<AdmissibleMeasure> {
    let candidate = candidate_measure(g)?;
    if is_admissible(g, &candidate)? {
        return Ok(AdmissibleMeasure { measure: candidate, from_fallback: false });
    }
    let solved = admissible_measure_by_linear_solve(g)?;
    if !is_admissible(g, &solved)? {
        return Err(InvariantError::AdmissibilityFailure("solved measure fails verification".into()));
    }
    Ok(AdmissibleMeasure { measure: solved, from_fallback: true })
}

fn require_genus_two_or_more(g: &PMGraph) -> Result<u32> {
    match total_genus(g) {
        0 => Err(InvariantError::GenusZero),
        n if n < 2 => Err(InvariantError::GenusTooSmall(n)),
        n => Ok(n),
    }
}

/// Everything the invariants share: genus, K, μ and x ↦ g_μ(x,x).
struct Ingredients {
    genus: u32,
    k: GraphDivisor,
    mu: AdmissibleMeasure,
    diag: PiecewisePoly,
}

impl Ingredients {
    fn new(g: &PMGraph) -> Result<Self> {
        let genus = require_genus_two_or_more(g)?;
        let mu = admissible_measure(g)?;
        let diag = diagonal_green(g, &mu.measure)?;
        Ok(Ingredients { genus, k: canonical_divisor(g), mu, diag })
    }

    /// ∫ g_μ(x,x) (a·μ + b·δ_K).
    fn diag_integral(&self, g: &PMGraph, a: i64, b: i64) -> Q {
        integrate(g, &self.diag, &self.k.scaled(&q(b)), &self.mu.measure.scaled(&q(a)))
    }

    fn epsilon(&self, g: &PMGraph) -> Q {
        let gg = i64::from(self.genus);
        self.diag_integral(g, 2 * gg - 2, 1)
    }

    fn phi_integral(&self, g: &PMGraph) -> Q {
        let gg = i64::from(self.genus);
        (self.diag_integral(g, 10 * gg + 2, -1) - g.total_length()) / q(4)
    }
}

pub fn epsilon_invariant(g: &PMGraph) -> Result<Q> {
    let ing = Ingredients::new(g)?;
    Ok(ing.epsilon(g))
}

/// −δ/4 − (3/8) r(K,K) + 2ε, the genus-2 resistance expression for φ.
pub fn phi_by_resistance(g: &PMGraph, epsilon: &Q) -> Result<Q> {
    let k = canonical_divisor(g);
    let rkk = resistance_pairing(g, &k, &k)?;
    Ok(-g.total_length() / q(4) - q(3) * rkk / q(8) + q(2) * epsilon)
}

fn phi_checked(g: &PMGraph, ing: &Ingredients) -> Result<Q> {
    let integral = ing.phi_integral(g);
    if ing.genus == 2 {
        let resistance = phi_by_resistance(g, &ing.epsilon(g))?;
        if resistance != integral {
            return Err(InvariantError::FormulaMismatch {
                integral: format_rational(&integral),
                resistance: format_rational(&resistance),
            });
        }
    }
    Ok(integral)
}

/// φ = −δ/4 + ¼ ∫ g_μ(x,x)((10g+2)μ − δ_K), cross-checked in genus 2.
pub fn phi_invariant(g: &PMGraph) -> Result<Q> {
    let ing = Ingredients::new(g)?;
    phi_checked(g, &ing)
}

fn lambda_from(genus: u32, phi: &Q, epsilon: &Q, delta: &Q) -> Q {
    let gg = i64::from(genus);
    q(gg - 1) * phi / q(6 * (2 * gg + 1)) + (epsilon + delta) / q(12)
}

/// λ = (g−1)/(6(2g+1))·φ + (ε + δ)/12.
pub fn lambda_invariant(g: &PMGraph) -> Result<Q> {
    let ing = Ingredients::new(g)?;
    let phi = phi_checked(g, &ing)?;
    Ok(lambda_from(ing.genus, &phi, &ing.epsilon(g), &g.total_length()))
}

/// The full non-archimedean row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonArchReport {
    pub genus: u32,
    pub delta0: Q,
    pub delta1: Q,
    pub r_kk: Q,
    pub epsilon: Q,
    pub phi: Q,
    pub lambda: Q,
    /// Set when the admissible measure came from the linear solve rather
    /// than the closed-form candidate.
    pub measure_from_fallback: bool,
}

impl NonArchReport {
    /// Field-by-field equality of the invariants, ignoring provenance.
    pub fn same_values(&self, other: &Self) -> bool {
        self.genus == other.genus
            && self.delta0 == other.delta0
            && self.delta1 == other.delta1
            && self.r_kk == other.r_kk
            && self.epsilon == other.epsilon
            && self.phi == other.phi
            && self.lambda == other.lambda
    }

    pub fn scaled(&self, s: &Q) -> Self {
        NonArchReport {
            delta0: &self.delta0 * s,
            delta1: &self.delta1 * s,
            r_kk: &self.r_kk * s,
            epsilon: &self.epsilon * s,
            phi: &self.phi * s,
            lambda: &self.lambda * s,
            ..self.clone()
        }
    }
}

pub fn nonarch_report(g: &PMGraph) -> Result<NonArchReport> {
    let ing = Ingredients::new(g)?;
    let counts = node_counts(g);
    let phi = phi_checked(g, &ing)?;
    let epsilon = ing.epsilon(g);
    let r_kk = resistance_pairing(g, &ing.k, &ing.k)?;
    let lambda = lambda_from(ing.genus, &phi, &epsilon, &counts.delta());
    Ok(NonArchReport {
        genus: ing.genus,
        delta0: counts.delta0,
        delta1: counts.delta1,
        r_kk,
        epsilon,
        phi,
        lambda,
        measure_from_fallback: ing.mu.from_fallback,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::graph::VertexId;

    fn point_graph(genus: u32) -> PMGraph {
        let mut b = PMGraph::builder();
        b.vertex(genus);
        b.build().unwrap()
    }

    fn theta(a: Q, b_: Q, c: Q) -> PMGraph {
        let mut b = PMGraph::builder();
        let u = b.vertex(0);
        let v = b.vertex(0);
        b.edge(u, v, a);
        b.edge(u, v, b_);
        b.edge(u, v, c);
        b.build().unwrap()
    }

    fn segment(a: Q) -> PMGraph {
        let mut b = PMGraph::builder();
        let u = b.vertex(1);
        let v = b.vertex(1);
        b.edge(u, v, a);
        b.build().unwrap()
    }

    fn circle(a: Q) -> PMGraph {
        let mut b = PMGraph::builder();
        let v = b.vertex(1);
        b.edge(v, v, a);
        b.build().unwrap()
    }

    fn vx(i: usize) -> GraphPoint {
        GraphPoint::Vertex(VertexId(i))
    }

    #[test]
    fn genus_examples() {
        assert_eq!(total_genus(&point_graph(2)), 2);
        assert_eq!(total_genus(&theta(q(1), q(1), q(1))), 2);
        assert_eq!(total_genus(&circle(q(1))), 2);
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_divisor(&point_graph(2)), GraphDivisor::new().with(vx(0), q(2)));
        let both = GraphDivisor::point(vx(0)).with(vx(1), q(1));
        assert_eq!(canonical_divisor(&theta(q(1), q(1), q(1))), both);
        assert_eq!(canonical_divisor(&segment(q(1))), both);
    }

    #[test]
    fn node_count_examples() {
        let s = node_counts(&segment(q(3)));
        assert_eq!((s.delta0, s.delta1), (q(0), q(3)));
        let t = node_counts(&theta(q(1), q(2), q(3)));
        assert_eq!((t.delta0, t.delta1), (q(6), q(0)));
        let p = node_counts(&point_graph(2));
        assert_eq!((p.delta0, p.delta1), (q(0), q(0)));
    }

    #[test]
    fn admissible_examples() {
        let mu = admissible_measure(&segment(q(3))).unwrap();
        assert!(!mu.from_fallback);
        assert_eq!(mu.measure.vertex_mass, vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(mu.measure.edge_density, vec![q(0)]);

        let a = ratio(7, 2);
        let mu = admissible_measure(&circle(a.clone())).unwrap().measure;
        assert_eq!(mu.vertex_mass, vec![ratio(1, 2)]);
        assert_eq!(mu.edge_density, vec![(q(2) * a).recip()]);

        let mu = admissible_measure(&theta(q(1), q(1), q(1))).unwrap().measure;
        assert_eq!(mu.vertex_mass, vec![q(0), q(0)]);
        assert_eq!(mu.edge_density, vec![ratio(1, 3); 3]);
    }

    #[test]
    fn constancy_value_for_segment() {
        let g = segment(q(3));
        let mu = admissible_measure(&g).unwrap().measure;
        assert_eq!(constancy_function(&g, &mu).unwrap().constant_value(), Some(ratio(3, 4)));
    }

    #[test]
    fn linear_solve_matches_candidate() {
        for g in [segment(q(2)), circle(ratio(5, 3)), theta(q(1), q(2), q(4)), point_graph(2)] {
            assert_eq!(admissible_measure_by_linear_solve(&g).unwrap(), candidate_measure(&g).unwrap());
        }
    }

    #[test]
    fn genus_zero_rejected() {
        let mut b = PMGraph::builder();
        let u = b.vertex(0);
        let v = b.vertex(0);
        b.edge(u, v, q(1));
        let tree = b.build().unwrap();
        assert_eq!(admissible_measure(&tree), Err(InvariantError::GenusZero));
        let genus_one = {
            let mut b = PMGraph::builder();
            let v = b.vertex(0);
            b.edge(v, v, q(1));
            b.build().unwrap()
        };
        assert_eq!(phi_invariant(&genus_one), Err(InvariantError::GenusTooSmall(1)));
        // genus 1 still has an admissible measure: uniform on the circle
        assert_eq!(admissible_measure(&genus_one).unwrap().measure.edge_density, vec![q(1)]);
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_invariant(&segment(q(3))).unwrap(), q(3));
        assert_eq!(epsilon_invariant(&circle(q(2))).unwrap(), ratio(1, 3));
        assert_eq!(epsilon_invariant(&theta(q(1), q(1), q(1))).unwrap(), ratio(5, 9));
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_invariant(&theta(q(1), q(1), q(1))).unwrap(), ratio(1, 9));
        assert_eq!(phi_invariant(&circle(q(12))).unwrap(), q(1));
        assert_eq!(phi_invariant(&point_graph(2)).unwrap(), q(0));
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_invariant(&segment(q(1))).unwrap(), ratio(1, 5));
        assert_eq!(lambda_invariant(&theta(q(1), q(1), q(1))).unwrap(), ratio(3, 10));
        assert_eq!(lambda_invariant(&point_graph(2)).unwrap(), q(0));
    }

    #[test]
    fn genus_three_graph_has_invariants() {
        // K4-like: three loops on a genus-0 vertex
        let mut b = PMGraph::builder();
        let v = b.vertex(0);
        for len in [1, 2, 3] {
            b.edge(v, v, q(len));
        }
        let g = b.build().unwrap();
        assert_eq!(total_genus(&g), 3);
        let mu = admissible_measure(&g).unwrap();
        assert_eq!(mu.measure.total_mass(&g), q(1));
        let report = nonarch_report(&g).unwrap();
        assert_eq!(report.genus, 3);
        assert_eq!(report.r_kk, q(0));
    }
}
