#![allow(dead_code)]

use dynavg::{InputSet, Signal, WeightedDigraph};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

/// A Hamiltonian cycle plus a few random cycles, each with its own weight.
/// Sums of weighted cycles are always weight-balanced, and the Hamiltonian
/// cycle makes the result strongly connected.
pub fn random_balanced_sc<R: Rng>(rng: &mut R, n: usize) -> WeightedDigraph {
    let mut a = DMatrix::zeros(n, n);
    let mut add_cycle = |nodes: &[usize], w: f64| {
        for k in 0..nodes.len() {
            let (from, to) = (nodes[k], nodes[(k + 1) % nodes.len()]);
            a[(from, to)] += w;
        }
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    add_cycle(&order, rng.random_range(0.2..2.0));
    for _ in 0..rng.random_range(0..=n) {
        let len = rng.random_range(2..=n);
        order.shuffle(rng);
        add_cycle(&order[..len], rng.random_range(0.2..2.0));
    }
    WeightedDigraph::from_adjacency(a).unwrap()
}

/// Unconstrained random digraph with edge probability `p`.
pub fn random_digraph<R: Rng>(rng: &mut R, n: usize, p: f64) -> WeightedDigraph {
    let a = DMatrix::from_fn(n, n, |i, j| {
        if i != j && rng.random_bool(p) {
            rng.random_range(0.1..3.0)
        } else {
            0.0
        }
    });
    WeightedDigraph::from_adjacency(a).unwrap()
}

/// Reachability by repeated relaxation (transitive closure).
pub fn reachability(g: &WeightedDigraph) -> Vec<Vec<bool>> {
    let n = g.n();
    let mut r: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j || g.weight(i, j) > 0.0).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

pub fn oracle_strongly_connected(g: &WeightedDigraph) -> bool {
    reachability(g).iter().all(|row| row.iter().all(|&b| b))
}

/// Number of mutual-reachability classes.
pub fn oracle_scc_count(g: &WeightedDigraph) -> usize {
    let r = reachability(g);
    let n = g.n();
    let mut seen = vec![false; n];
    let mut count = 0;
    for i in 0..n {
        if !seen[i] {
            count += 1;
            for j in 0..n {
                if r[i][j] && r[j][i] {
                    seen[j] = true;
                }
            }
        }
    }
    count
}

pub fn oracle_balanced(g: &WeightedDigraph, tol: f64) -> bool {
    let n = g.n();
    (0..n).all(|i| {
        let out: f64 = (0..n).map(|j| g.weight(i, j)).sum();
        let inn: f64 = (0..n).map(|j| g.weight(j, i)).sum();
        (out - inn).abs() <= tol
    })
}

pub fn uniform_grid(t0: f64, t1: f64, h: f64) -> Vec<f64> {
    let n = ((t1 - t0) / h).round() as usize;
    (0..=n).map(|k| t0 + k as f64 * h).collect()
}

/// A random signal with an analytic derivative.
pub fn random_smooth_signal<R: Rng>(rng: &mut R) -> Signal {
    let a = rng.random_range(-3.0..3.0);
    let f = rng.random_range(0.1..3.0);
    let p = rng.random_range(-3.0..3.0);
    match rng.random_range(0..8) {
        0 => Signal::sine(a, f, p),
        1 => Signal::cosine(a, f, p),
        2 => Signal::atan(a, f, p),
        3 => Signal::tanh(a, f, p),
        4 => Signal::reciprocal_power(a, rng.random_range(0.5..3.0), rng.random_range(1..=3)),
        5 => Signal::exp_decay(a, f),
        6 => Signal::ramp(a),
        _ => Signal::sum(vec![Signal::constant(p), Signal::sine(a, f, 0.0)]),
    }
}

/// `n` inputs: a sinusoid each plus a constant offset.
pub fn random_inputs<R: Rng>(rng: &mut R, n: usize) -> InputSet {
    let signals = (0..n)
        .map(|_| {
            Signal::sum(vec![
                Signal::constant(rng.random_range(-5.0..5.0)),
                Signal::sine(rng.random_range(0.0..2.0), rng.random_range(0.1..2.0), rng.random_range(-3.0..3.0)),
            ])
        })
        .collect();
    InputSet::new(signals).unwrap()
}

pub fn random_vec<R: Rng>(rng: &mut R, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-scale..scale)).collect()
}
