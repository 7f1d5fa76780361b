//! Test-side oracles, independent of the library's query paths.
#![allow(dead_code)] // each test binary uses its own slice of the oracles

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Raw interaction list used by the oracles: `(u, v, t1, t2)` half-open.
pub type RawInteractions = Vec<(usize, usize, u64, u64)>;

/// Presence by direct linear scan of the interaction multiset.
pub fn scan_presence(interactions: &RawInteractions, u: usize, v: usize, t: u64) -> bool {
    interactions
        .iter()
        .any(|&(a, b, t1, t2)| ((a == u && b == v) || (a == v && b == u)) && t1 <= t && t < t2)
}

/// Journey existence by exhaustive expansion of time-respecting walks
/// over (node, tick) states, zero latency. Works straight off the
/// interaction list.
pub fn walk_reachable(
    interactions: &RawInteractions,
    n: usize,
    src: usize,
    dst: usize,
    t_start: u64,
    t_end: u64,
) -> bool {
    if src == dst {
        return true;
    }
    let mut visited = vec![vec![false; t_end as usize + 1]; n];
    let mut stack = vec![(src, t_start)];
    while let Some((node, at)) = stack.pop() {
        if node == dst {
            return true;
        }
        for next in 0..n {
            if next == node {
                continue;
            }
            for t in at..t_end {
                if scan_presence(interactions, node, next, t) && !visited[next][t as usize] {
                    visited[next][t as usize] = true;
                    stack.push((next, t));
                }
            }
        }
    }
    false
}

/// A random TVG instance within the desk-scale oracle envelope.
pub fn random_instance(rng: &mut ChaCha8Rng) -> (usize, u64, RawInteractions) {
    let n = rng.random_range(2..=8usize);
    let max_t = 10u64;
    let m = rng.random_range(0..=20usize);
    let mut interactions = Vec::with_capacity(m);
    for _ in 0..m {
        let u = rng.random_range(0..n);
        let mut v = rng.random_range(0..n);
        while v == u {
            v = rng.random_range(0..n);
        }
        let t1 = rng.random_range(0..max_t);
        let t2 = rng.random_range(t1 + 1..=max_t);
        interactions.push((u, v, t1, t2));
    }
    (n, max_t, interactions)
}

/// Independently coded plain bounded-confidence reference: complete
/// topology, static tolerance, full edge sweep per tick in an order
/// shuffled by the shared seeded stream.
pub struct PlainBcm {
    pub opinions: Vec<f64>,
    pub eps: f64,
    pub mu: f64,
    rng: ChaCha8Rng,
    edges: Vec<(usize, usize)>,
}

impl PlainBcm {
    pub fn new(opinions: Vec<f64>, eps: f64, mu: f64, seed: u64) -> Self {
        let n = opinions.len();
        let mut edges = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j));
            }
        }
        PlainBcm {
            opinions,
            eps,
            mu,
            rng: ChaCha8Rng::seed_from_u64(seed),
            edges,
        }
    }

    /// Initial opinions exactly as the scalar scenario mode draws them.
    pub fn uniform_opinions(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.random::<f64>()).collect()
    }

    pub fn step(&mut self) {
        let mut order = self.edges.clone();
        order.shuffle(&mut self.rng);
        for (i, j) in order {
            let (x_i, x_j) = (self.opinions[i], self.opinions[j]);
            if (x_i - x_j).abs() < self.eps {
                self.opinions[i] = (x_i + self.mu * (x_j - x_i)).clamp(0.0, 1.0);
                self.opinions[j] = (x_j + self.mu * (x_i - x_j)).clamp(0.0, 1.0);
            }
        }
    }

    pub fn cluster_count(&self, delta: f64) -> usize {
        let mut xs = self.opinions.clone();
        xs.sort_by(f64::total_cmp);
        if xs.is_empty() {
            return 0;
        }
        1 + xs.windows(2).filter(|w| w[1] - w[0] >= delta).count()
    }
}
