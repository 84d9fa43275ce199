//! Floating-point resistor-chain discretization: every edge becomes `n`
//! equal resistors, measures are lumped onto the chain nodes, and the
//! Green's function is the solution of the discrete Poisson problem.

use genus2_core::graph::{EdgeId, GraphMeasure, PMGraph};
use genus2_core::rational::to_f64;

/// A position on the chain: edge and step index `0..=n` from its first
/// endpoint.
#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub edge: usize,
    pub step: usize,
}

pub struct Chain {
    n: usize,
    vertices: usize,
    ends: Vec<(usize, usize)>,
}

impl Chain {
    pub fn new(g: &PMGraph, n: usize) -> Self {
        assert!(n >= 2);
        let ends = g.edges().iter().map(|e| (e.from.0, e.to.0)).collect();
        Chain { n, vertices: g.num_vertices(), ends }
    }

    pub fn len(&self) -> usize {
        self.vertices + self.ends.len() * (self.n - 1)
    }

    pub fn index(&self, p: Node) -> usize {
        let (from, to) = self.ends[p.edge];
        match p.step {
            0 => from,
            s if s == self.n => to,
            s => self.vertices + p.edge * (self.n - 1) + (s - 1),
        }
    }

    /// Discrete g_μ(·, y) at every chain node.
    pub fn green(&self, g: &PMGraph, mu: &GraphMeasure, y: Node) -> Vec<f64> {
        let size = self.len();
        let mut lap = vec![vec![0.0; size]; size];
        let mut mass = vec![0.0; size];
        for (v, m) in mu.vertex_mass.iter().enumerate() {
            mass[v] += to_f64(m);
        }
        for (i, e) in g.edges().iter().enumerate() {
            let h = to_f64(&e.length) / self.n as f64;
            let rho = to_f64(&mu.edge_density[i]);
            for s in 0..self.n {
                let a = self.index(Node { edge: i, step: s });
                let b = self.index(Node { edge: i, step: s + 1 });
                let c = 1.0 / h;
                lap[a][a] += c;
                lap[b][b] += c;
                lap[a][b] -= c;
                lap[b][a] -= c;
                mass[a] += rho * h / 2.0;
                mass[b] += rho * h / 2.0;
            }
        }
        let mut rhs: Vec<f64> = mass.iter().map(|m| -m).collect();
        rhs[self.index(y)] += 1.0;
        lap[0] = vec![0.0; size];
        lap[0][0] = 1.0;
        rhs[0] = 0.0;
        let mut f = gauss(lap, rhs);
        let mean: f64 = f.iter().zip(&mass).map(|(x, m)| x * m).sum();
        f.iter_mut().for_each(|x| *x -= mean);
        f
    }

    pub fn node_at(&self, e: EdgeId, fraction_num: usize, fraction_den: usize) -> Node {
        assert_eq!(self.n % fraction_den, 0, "fraction must land on a chain node");
        Node { edge: e.0, step: fraction_num * (self.n / fraction_den) }
    }
}

fn gauss(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col];
        assert!(p.abs() > 1e-300, "singular discrete Laplacian");
        for row in col + 1..n {
            let factor = a[row][col] / p;
            if factor != 0.0 {
                let pivot_row = a[col][col..].to_vec();
                for (x, p) in a[row][col..].iter_mut().zip(&pivot_row) {
                    *x -= factor * p;
                }
                b[row] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}
