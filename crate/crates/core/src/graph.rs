//! Weighted digraphs, their out-Laplacian and the structural/spectral
//! quantities the convergence guarantees are stated in terms of.
//!
//! Edge convention: an edge `(from, to)` is drawn as the arrow
//! `from -> to` and stored as `a[from][to] = w`, so agent `from` listens to
//! agent `to` (the sender). Row `i` of the Laplacian therefore sums over the
//! agents that `i` receives from. Nodes are 1-based at the API boundary and
//! 0-based internally.

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-sum tolerance used when checking `L·1 = 0`.
pub const ROW_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDigraph {
    weights: DMatrix<f64>,
}

/// An edge as written in configs: 1-based `(from, to, weight)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge(pub usize, pub usize, pub f64);

impl WeightedDigraph {
    /// Builds a digraph from 1-based edges. Duplicates are rejected, not summed.
    pub fn from_edges(n: usize, edges: &[Edge]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut weights = DMatrix::zeros(n, n);
        for &Edge(from, to, w) in edges {
            for index in [from, to] {
                if index == 0 || index > n {
                    return Err(Error::NodeOutOfRange { index, n });
                }
            }
            if from == to {
                return Err(Error::SelfLoop(from));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::NonPositiveWeight { from, to, weight: w });
            }
            let slot = &mut weights[(from - 1, to - 1)];
            if *slot != 0.0 {
                return Err(Error::DuplicateEdge { from, to });
            }
            *slot = w;
        }
        Ok(WeightedDigraph { weights })
    }

    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Result<Self> {
        Self::from_edges(n, &[])
    }

    /// Wraps an adjacency matrix, checking the same invariants as [`Self::from_edges`].
    pub fn from_adjacency(weights: DMatrix<f64>) -> Result<Self> {
        let n = weights.nrows();
        if weights.ncols() != n {
            return Err(Error::DimensionMismatch {
                what: "adjacency matrix",
                expected: n,
                found: weights.ncols(),
            });
        }
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        for i in 0..n {
            for j in 0..n {
                let w = weights[(i, j)];
                if i == j && w != 0.0 {
                    return Err(Error::SelfLoop(i + 1));
                }
                if w < 0.0 || !w.is_finite() {
                    return Err(Error::NonPositiveWeight {
                        from: i + 1,
                        to: j + 1,
                        weight: w,
                    });
                }
            }
        }
        Ok(WeightedDigraph { weights })
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    pub fn adjacency(&self) -> &DMatrix<f64> {
        &self.weights
    }

    /// Weight of edge `(from, to)`, 0-based.
    pub fn weight(&self, from: usize, to: usize) -> f64 {
        self.weights[(from, to)]
    }

    /// 1-based edge list in row-major order.
    pub fn edges(&self) -> Vec<Edge> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let w = self.weights[(i, j)];
                if w > 0.0 {
                    out.push(Edge(i + 1, j + 1, w));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.weights.iter().filter(|w| **w > 0.0).count()
    }

    pub fn out_degree(&self, i: usize) -> f64 {
        self.weights.row(i).sum()
    }

    pub fn in_degree(&self, i: usize) -> f64 {
        self.weights.column(i).sum()
    }

    pub fn d_max_out(&self) -> f64 {
        (0..self.n())
            .map(|i| self.out_degree(i))
            .fold(0.0, f64::max)
    }

    /// `L = D_out - A`. The diagonal is set to the negated off-diagonal row
    /// sum, so every row sums to zero up to one rounding per entry.
    pub fn laplacian(&self) -> LaplacianMatrix {
        let n = self.n();
        let mut l = -self.weights.clone();
        for i in 0..n {
            let off: f64 = (0..n).filter(|&j| j != i).map(|j| l[(i, j)]).sum();
            l[(i, i)] = -off;
        }
        LaplacianMatrix(l)
    }

    /// True iff every column of `L` sums to zero within `tol`.
    pub fn is_weight_balanced(&self, tol: f64) -> bool {
        self.laplacian().max_abs_column_sum() <= tol
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.scc_count() == 1
    }

    /// Number of strongly connected components (Tarjan).
    pub fn scc_count(&self) -> usize {
        tarjan_components(self).len()
    }

    /// Strongly connected components as 1-based node lists.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        let mut comps = tarjan_components(self);
        for c in comps.iter_mut() {
            for v in c.iter_mut() {
                *v += 1;
            }
            c.sort_unstable();
        }
        comps.sort();
        comps
    }

    pub fn spectral_summary(&self) -> Result<SpectralData> {
        let n = self.n();
        if n < 2 {
            return Err(Error::TooFewNodes(n));
        }
        let l = self.laplacian();
        let sym = l.symmetric_part();
        let mut eigenvalues_sym: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
        eigenvalues_sym.sort_by(f64::total_cmp);

        let eigenvalues_l = general_eigenvalues(&l.0)?;
        let threshold = 1e-9 * (1.0 + l.0.norm());
        let re_lambda_2 = eigenvalues_l
            .iter()
            .map(|z| z.re)
            .filter(|re| *re > threshold)
            .fold(f64::INFINITY, f64::min);

        Ok(SpectralData {
            lambda_hat_2: eigenvalues_sym[1],
            re_lambda_2: if re_lambda_2.is_finite() { re_lambda_2 } else { 0.0 },
            d_max_out: self.d_max_out(),
            eigenvalues_l,
            eigenvalues_sym,
        })
    }
}

/// Eigenvalues of a general real matrix via a bounded real Schur iteration.
/// Retries with a looser convergence threshold before giving up.
pub fn general_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    let scale = 1.0 + m.norm();
    for eps in [f64::EPSILON, 1e-14 * scale, 1e-12 * scale] {
        if let Some(schur) = m.clone().try_schur(eps, 10_000) {
            return Ok(schur.complex_eigenvalues().iter().copied().collect());
        }
    }
    Err(Error::param("matrix", "eigenvalue iteration did not converge"))
}

fn tarjan_components(g: &WeightedDigraph) -> Vec<Vec<usize>> {
    struct State<'a> {
        g: &'a WeightedDigraph,
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }

    fn visit(s: &mut State, v: usize) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for w in 0..s.g.n() {
            if s.g.weight(v, w) <= 0.0 {
                continue;
            }
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                _ => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            while let Some(w) = s.stack.pop() {
                s.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            s.out.push(comp);
        }
    }

    let n = g.n();
    let mut s = State {
        g,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::with_capacity(n),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.out
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix(pub DMatrix<f64>);

impl LaplacianMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    /// `(L + Lᵀ) / 2`.
    pub fn symmetric_part(&self) -> DMatrix<f64> {
        (&self.0 + self.0.transpose()) * 0.5
    }

    pub fn max_abs_row_sum(&self) -> f64 {
        self.0.row_iter().map(|r| r.sum().abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_column_sum(&self) -> f64 {
        self.0.column_iter().map(|c| c.sum().abs()).fold(0.0, f64::max)
    }

    /// `out[i] = Σ_j L_ij x_j`. The diagonal term is added last, in the
    /// order the diagonal was built, so `L·1` is exactly zero.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        let n = self.n();
        for i in 0..n {
            let mut acc = 0.0;
            for j in (0..n).filter(|&j| j != i) {
                acc += self.0[(i, j)] * x[j];
            }
            out[i] = acc + self.0[(i, i)] * x[i];
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    /// Second-smallest eigenvalue of `Sym(L)`.
    pub lambda_hat_2: f64,
    /// Smallest real part among the eigenvalues of `L` that are not the structural zero.
    pub re_lambda_2: f64,
    pub d_max_out: f64,
    pub eigenvalues_l: Vec<Complex<f64>>,
    /// Ascending.
    pub eigenvalues_sym: Vec<f64>,
}

/// The six-node topologies used throughout the simulation studies, all with unit weights.
///
/// * `fig1a`: directed ring 1→2→3→4→5→6→1
/// * `fig1b`: two directed 3-cycles 1→2→6→1 and 3→5→4→3
/// * `fig1c`: a single bidirectional pair 2↔3
/// * `fig1d`: the 3-cycle 1→2→6→1
/// * `fig1e`: the 3-cycle 3→4→5→3 plus 5↔6
pub fn preset(name: &str) -> Result<WeightedDigraph> {
    let edges: &[(usize, usize)] = match name {
        "fig1a" => &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1)],
        "fig1b" => &[(1, 2), (2, 6), (6, 1), (3, 5), (5, 4), (4, 3)],
        "fig1c" => &[(2, 3), (3, 2)],
        "fig1d" => &[(1, 2), (2, 6), (6, 1)],
        "fig1e" => &[(3, 4), (4, 5), (5, 3), (5, 6), (6, 5)],
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    let edges: Vec<Edge> = edges.iter().map(|&(f, t)| Edge(f, t, 1.0)).collect();
    WeightedDigraph::from_edges(6, &edges)
}

pub const PRESET_NAMES: [&str; 5] = ["fig1a", "fig1b", "fig1c", "fig1d", "fig1e"];
