//! Shared test helpers: an implementation-independent series oracle for
//! the walk unitary, and randomized graph generators.

#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;
use pairwalk::graph::{Graph, Perturbation};
use pairwalk::Matrix;
use rand::Rng;

/// Applies `exp(-itL)` by truncated Taylor series, independent of the
/// spectral path under test. The truncation order K is chosen so the
/// remainder bound `(t * ||L||)^(K+1) / (K+1)!` drops below 1e-10.
pub fn taylor_evolve(l: &Matrix, t: f64, x: &[Complex64]) -> Vec<Complex64> {
    let n = l.n();
    assert_eq!(x.len(), n);
    let mut row_sum_norm = 0.0f64;
    for i in 0..n {
        let s: f64 = (0..n).map(|j| l.get(i, j).abs()).sum();
        row_sum_norm = row_sum_norm.max(s);
    }
    let r = t.abs() * row_sum_norm;

    let mut y = x.to_vec();
    let mut term = x.to_vec();
    let mut bound = 1.0f64; // r^k / k! after the k-th update
    let mut k = 1usize;
    loop {
        let mut next = vec![Complex64::ZERO; n];
        for i in 0..n {
            let mut acc = Complex64::ZERO;
            for j in 0..n {
                acc += l.get(i, j) * term[j];
            }
            next[i] = acc * Complex64::new(0.0, -t) / k as f64;
        }
        term = next;
        for i in 0..n {
            y[i] += term[i];
        }
        bound *= r / k as f64;
        let next_bound = bound * r / (k + 1) as f64;
        if next_bound < 1e-10 && k as f64 > r {
            break;
        }
        k += 1;
        assert!(k < 100_000, "series did not terminate");
    }
    y
}

/// Weights used by the random generators: exactly representable halves,
/// so graph arithmetic in the tests stays exact.
pub const TEST_WEIGHTS: [f64; 5] = [0.5, 1.0, 1.5, 2.0, -1.0];

/// Random graph with edge probability 1/2 and weights from
/// [`TEST_WEIGHTS`].
pub fn random_graph<R: Rng>(rng: &mut R, n: usize) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(0.5) {
                let w = TEST_WEIGHTS[rng.random_range(0..TEST_WEIGHTS.len())];
                g.add_edge(u, v, w).expect("fresh edge");
            }
        }
    }
    g
}

/// Rewrites `b`'s neighbourhood outside `{a,b}` to equal `a`'s, making the
/// two vertices twins.
pub fn force_twins(g: &Graph, a: usize, b: usize) -> Graph {
    let mut h = g.clone();
    for v in 0..g.vertex_count() {
        if v == a || v == b {
            continue;
        }
        let delta = h.weight(a, v) - h.weight(b, v);
        if delta != 0.0 {
            h = h
                .perturb(&Perturbation::new(b, v, delta).expect("distinct"))
                .expect("in range");
        }
    }
    assert!(h.are_twins(a, b).expect("valid pair"));
    h
}

/// Random twin-bearing graph: returns the graph and the twin pair.
pub fn random_twin_graph<R: Rng>(rng: &mut R, n: usize) -> (Graph, usize, usize) {
    assert!(n >= 2);
    let g = random_graph(rng, n);
    let a = rng.random_range(0..n);
    let b = loop {
        let b = rng.random_range(0..n);
        if b != a {
            break b;
        }
    };
    (force_twins(&g, a, b), a, b)
}
