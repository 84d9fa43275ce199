//! Averages over the unit 4-torus.
//!
//! Sample `i` is a pure function of `(seed, method, N, i)`, and partial sums
//! are merged in chunk order, so results are bit-identical with or without
//! parallel workers.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::ThetaError;

const CHUNK: usize = 2048;
const LATTICE_SHIFTS: usize = 16;
const MIN_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadMethod {
    MonteCarlo,
    /// Rank-1 Korobov lattice with independent random shifts; the error
    /// estimate comes from the spread of the shifted means.
    LatticeRule,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    pub samples: usize,
    pub seed: u64,
    pub method: QuadMethod,
    pub target_stderr: f64,
    pub parallel: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            samples: 1_000_000,
            seed: 0,
            method: QuadMethod::MonteCarlo,
            target_stderr: 1e-3,
            parallel: true,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), ThetaError> {
        if self.samples < MIN_SAMPLES {
            return Err(ThetaError::InvalidConfig(format!(
                "need at least {MIN_SAMPLES} samples, got {}",
                self.samples
            )));
        }
        if !(self.target_stderr > 0.0 && self.target_stderr.is_finite()) {
            return Err(ThetaError::InvalidConfig(format!("bad target stderr {}", self.target_stderr)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub accepted: u64,
    /// Samples whose integrand was rejected (non-finite).
    pub rejected: u64,
}

/// Running count / mean / sum of squared deviations, merged pairwise.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
    rejected: u64,
}

impl Moments {
    fn push(&mut self, x: Option<f64>) {
        match x {
            Some(x) if x.is_finite() => {
                self.n += 1;
                let d = x - self.mean;
                self.mean += d / self.n as f64;
                self.m2 += d * (x - self.mean);
            }
            _ => self.rejected += 1,
        }
    }

    fn merge(self, o: Moments) -> Moments {
        if self.n == 0 {
            return Moments { rejected: self.rejected + o.rejected, ..o };
        }
        if o.n == 0 {
            return Moments { rejected: self.rejected + o.rejected, ..self };
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * o.n as f64 / n as f64,
            m2: self.m2 + o.m2 + d * d * (self.n as f64) * (o.n as f64) / n as f64,
            rejected: self.rejected + o.rejected,
        }
    }
}

fn accumulate<F>(count: usize, parallel: bool, chunk_moments: F) -> Moments
where
    F: Fn(usize, std::ops::Range<usize>) -> Moments + Sync,
{
    let chunks = count.div_ceil(CHUNK);
    let run = |c: usize| chunk_moments(c, c * CHUNK..((c + 1) * CHUNK).min(count));
    let parts: Vec<Moments> = if parallel {
        (0..chunks).into_par_iter().map(run).collect()
    } else {
        (0..chunks).map(run).collect()
    };
    parts.into_iter().fold(Moments::default(), Moments::merge)
}

/// Mean of `f` over [0,1)⁴. `f` returns `None` to reject a sample.
pub fn torus_average<F>(q: &QuadratureConfig, f: F) -> Result<QuadEstimate, ThetaError>
where
    F: Fn([f64; 4]) -> Option<f64> + Sync,
{
    q.validate()?;
    match q.method {
        QuadMethod::MonteCarlo => {
            let m = accumulate(q.samples, q.parallel, |chunk, range| {
                let mut rng = ChaCha8Rng::seed_from_u64(q.seed);
                rng.set_stream(chunk as u64);
                let mut m = Moments::default();
                for _ in range {
                    let p: [f64; 4] = [rng.gen(), rng.gen(), rng.gen(), rng.gen()];
                    m.push(f(p));
                }
                m
            });
            if m.n < 2 {
                return Err(ThetaError::InvalidConfig("every sample was rejected".into()));
            }
            let var = m.m2 / (m.n - 1) as f64;
            Ok(QuadEstimate { mean: m.mean, stderr: (var / m.n as f64).sqrt(), accepted: m.n, rejected: m.rejected })
        }
        QuadMethod::LatticeRule => {
            let points = q.samples / LATTICE_SHIFTS;
            let gen = korobov_vector(points);
            let mut shift_rng = ChaCha8Rng::seed_from_u64(q.seed);
            shift_rng.set_stream(u64::MAX);
            let shifts: Vec<[f64; 4]> = (0..LATTICE_SHIFTS)
                .map(|_| [shift_rng.gen(), shift_rng.gen(), shift_rng.gen(), shift_rng.gen()])
                .collect();
            let mut means = Vec::with_capacity(LATTICE_SHIFTS);
            let mut total = Moments::default();
            for s in &shifts {
                let m = accumulate(points, q.parallel, |_, range| {
                    let mut m = Moments::default();
                    for i in range {
                        let p = std::array::from_fn(|j| {
                            let base = ((i as u128 * gen[j] as u128) % points as u128) as f64 / points as f64;
                            (base + s[j]).fract()
                        });
                        m.push(f(p));
                    }
                    m
                });
                if m.n == 0 {
                    return Err(ThetaError::InvalidConfig("every sample of a shift was rejected".into()));
                }
                means.push(m.mean);
                total = total.merge(m);
            }
            let k = means.len() as f64;
            let mean = means.iter().sum::<f64>() / k;
            let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (k - 1.0);
            Ok(QuadEstimate { mean, stderr: (var / k).sqrt(), accepted: total.n, rejected: total.rejected })
        }
    }
}

/// Generating vector (1, a, a², a³) mod n with `a` chosen from a fixed
/// candidate list by the P₂ figure of merit.
fn korobov_vector(n: usize) -> [u64; 4] {
    let n64 = n as u64;
    let gcd = |mut a: u64, mut b: u64| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let golden = 0.618_033_988_749_894_9_f64;
    let mut best = ([1, 1, 1, 1], f64::INFINITY);
    for k in 1..=24u32 {
        let a = 2 + ((f64::from(k) * golden).fract() * (n64.saturating_sub(3)) as f64) as u64;
        if a >= n64 || gcd(a, n64) != 1 {
            continue;
        }
        let v = [1, a, a * a % n64, (a * a % n64) * a % n64];
        let score = p2(&v, n);
        if score < best.1 {
            best = (v, score);
        }
    }
    best.0
}

/// P₂ criterion of a rank-1 lattice (smaller is better).
fn p2(v: &[u64; 4], n: usize) -> f64 {
    let b2 = |x: f64| x * x - x + 1.0 / 6.0;
    let sum: f64 = (0..n)
        .map(|i| {
            v.iter()
                .map(|&z| {
                    let x = ((i as u128 * z as u128) % n as u128) as f64 / n as f64;
                    1.0 + 2.0 * PI * PI * b2(x)
                })
                .product::<f64>()
        })
        .sum();
    sum / n as f64 - 1.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(method: QuadMethod, seed: u64) -> QuadratureConfig {
        QuadratureConfig { samples: 20_000, seed, method, target_stderr: 1e-3, parallel: true }
    }

    #[test]
    fn constant_integrand() {
        for method in [QuadMethod::MonteCarlo, QuadMethod::LatticeRule] {
            let est = torus_average(&cfg(method, 3), |_| Some(1.0)).unwrap();
            assert_eq!(est.mean, 1.0);
            assert_eq!(est.stderr, 0.0);
        }
    }

    #[test]
    fn polynomial_integrand() {
        // ∫ x₁x₂ + x₃² + x₄ over [0,1)⁴ = 1/4 + 1/3 + 1/2
        let exact = 0.25 + 1.0 / 3.0 + 0.5;
        for method in [QuadMethod::MonteCarlo, QuadMethod::LatticeRule] {
            let est = torus_average(&cfg(method, 11), |p| Some(p[0] * p[1] + p[2] * p[2] + p[3])).unwrap();
            assert!((est.mean - exact).abs() < 5.0 * est.stderr.max(1e-6), "{method:?}: {est:?}");
        }
    }

    #[test]
    fn parallel_is_bit_identical_to_serial() {
        for method in [QuadMethod::MonteCarlo, QuadMethod::LatticeRule] {
            let f = |p: [f64; 4]| Some((p[0] * 7.0).sin() + p[3].ln());
            let par = torus_average(&cfg(method, 5), f).unwrap();
            let ser = torus_average(&QuadratureConfig { parallel: false, ..cfg(method, 5) }, f).unwrap();
            assert_eq!(par, ser);
        }
    }

    #[test]
    fn rejections_are_counted() {
        let est = torus_average(&cfg(QuadMethod::MonteCarlo, 1), |p| if p[0] < 0.5 { None } else { Some(2.0) })
            .unwrap();
        assert_eq!(est.accepted + est.rejected, 20_000);
        assert!(est.rejected > 9_000 && est.rejected < 11_000);
        assert_eq!(est.mean, 2.0);
    }

    #[test]
    fn too_few_samples() {
        let q = QuadratureConfig { samples: 10, ..cfg(QuadMethod::MonteCarlo, 0) };
        assert!(matches!(torus_average(&q, |_| Some(0.0)), Err(ThetaError::InvalidConfig(_))));
    }
}
