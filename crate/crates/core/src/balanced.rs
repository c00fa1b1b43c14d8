//! Balanced digraphs: the edge form of the Laplacian quadratic form, the
//! pairwise-difference vectors, and convex decompositions of weighted
//! digraphs into unweighted ones.
//!
//! [`balanced_decomposition`] walks the polytope of balanced weightings.
//! Pushing weight around a cycle of the fractional support (orientation
//! ignored, arcs signed by traversal direction) keeps every vertex balanced,
//! so repeated pushes reach an integral balanced digraph `z`. Extending the
//! ray from `z` through the current weighting to the cube boundary fixes at
//! least one more arc, which bounds the part count by
//! `#fractional arcs + 1`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::fmt::{g17, json_number, json_string};
use crate::dgf::write_dgf;
use crate::graph::{convex_combination, Digraph};
use crate::rnr::{alpha_beta, balanced_alpha};

/// Weights within this distance of 0 or 1 are treated as integral.
pub const SNAP_TOL: f64 = 1e-12;

fn check_dim(g: &Digraph, x: &[f64]) -> Result<()> {
    if x.len() != g.order() {
        return Err(Error::DimensionMismatch {
            expected: g.order(),
            found: x.len(),
        });
    }
    Ok(())
}

/// `x^T L x`.
pub fn quadratic_form(g: &Digraph, x: &[f64]) -> Result<f64> {
    check_dim(g, x)?;
    let l = g.laplacian();
    let n = g.order();
    let mut total = 0.0;
    for i in 0..n {
        let row: f64 = (0..n).map(|j| l.get(i, j) * x[j]).sum();
        total += x[i] * row;
    }
    Ok(total)
}

/// `1/2 sum_{(i,j)} w(i,j) (x_i - x_j)^2`; equals [`quadratic_form`] on balanced digraphs.
pub fn edge_quadratic_form(g: &Digraph, x: &[f64]) -> Result<f64> {
    check_dim(g, x)?;
    Ok(0.5 * g.arcs().map(|(i, j, w)| w * (x[i] - x[j]).powi(2)).sum::<f64>())
}

/// `|x_i - x_j|` over pairs `i < j` in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct NablaVector {
    n: usize,
    pub entries: Vec<f64>,
}

impl NablaVector {
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        assert!(i != j && j < self.n, "pair out of range");
        // pairs before row i: sum_{r<i} (n - 1 - r)
        let offset = i * (2 * self.n - i - 1) / 2;
        self.entries[offset + (j - i - 1)]
    }
}

pub fn nabla(x: &[f64]) -> Result<NablaVector> {
    let n = x.len();
    if n < 2 {
        return Err(Error::OrderTooSmall { n, min: 2 });
    }
    let entries = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (x[i] - x[j]).abs()))
        .collect();
    Ok(NablaVector { n, entries })
}

const ORTHO_TOL: f64 = 1e-10;

/// `||nabla(x) - nabla(y)||^2` for orthonormal zero-mean `x`, `y`.
pub fn nabla_gap(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    let n = x.len() as f64;
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    let checks = [
        ("mean of x", x.iter().sum::<f64>() / n),
        ("mean of y", y.iter().sum::<f64>() / n),
        ("|x|^2 - 1", dot(x, x) - 1.0),
        ("|y|^2 - 1", dot(y, y) - 1.0),
        ("x . y", dot(x, y)),
    ];
    for (what, v) in checks {
        if v.abs() > ORTHO_TOL {
            return Err(Error::NotOrthonormal(format!("{what} = {v:e}")));
        }
    }
    let (nx, ny) = (nabla(x)?, nabla(y)?);
    Ok(nx
        .entries
        .iter()
        .zip(&ny.entries)
        .map(|(a, b)| (a - b).powi(2))
        .sum())
}

/// `alpha(G) + alpha(complement G)` for a balanced digraph.
pub fn alpha_sum_check(g: &Digraph) -> Result<f64> {
    if !g.is_balanced_default() {
        return Err(Error::NotBalanced);
    }
    Ok(balanced_alpha(g)? + balanced_alpha(&g.complement())?)
}

/// Convex combination of unweighted digraphs.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub parts: Vec<(f64, Digraph)>,
}

impl Decomposition {
    pub fn coefficients(&self) -> Vec<f64> {
        self.parts.iter().map(|(c, _)| *c).collect()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn reconstruct(&self) -> Result<Digraph> {
        convex_combination(&self.parts)
    }

    /// Largest entrywise deviation of the recombined weights from `source`.
    pub fn reconstruction_error(&self, source: &Digraph) -> Result<f64> {
        let n = source.order();
        let mut acc = vec![0.0; n * n];
        for (c, g) in &self.parts {
            if g.order() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.order(),
                });
            }
            for (a, w) in acc.iter_mut().zip(g.weights()) {
                *a += c * w;
            }
        }
        Ok(acc
            .iter()
            .zip(source.weights())
            .map(|(a, w)| (a - w).abs())
            .fold(0.0, f64::max))
    }

    pub fn to_json(&self, source: &Digraph) -> Result<String> {
        let coeffs: Vec<String> = self.parts.iter().map(|(c, _)| g17(*c)).collect();
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|(_, g)| json_string(&write_dgf(g)))
            .collect();
        Ok(format!(
            "{{\"coefficients\":[{}],\"parts\":[{}],\"reconstruction_error\":{}}}",
            coeffs.join(","),
            parts.join(","),
            json_number(self.reconstruction_error(source)?)
        ))
    }
}

fn threshold(g: &Digraph, level: f64) -> Digraph {
    let w = g
        .weights()
        .iter()
        .map(|&x| if x >= level && x > 0.0 { 1.0 } else { 0.0 })
        .collect();
    Digraph::from_weights(g.order(), w).expect("0/1 weights")
}

/// Splits `g` by its distinct weight levels `v_1 > ... > v_k`: the empty
/// digraph with coefficient `1 - v_1`, then `{w >= v_j}` with `v_j - v_{j+1}`.
pub fn level_set_decomposition(g: &Digraph) -> Decomposition {
    let mut levels: Vec<f64> = g.weights().iter().copied().filter(|&x| x > 0.0).collect();
    levels.sort_by(|a, b| b.total_cmp(a));
    levels.dedup();
    let mut parts = Vec::with_capacity(levels.len() + 1);
    let top = levels.first().copied().unwrap_or(0.0);
    if 1.0 - top > 0.0 {
        parts.push((1.0 - top, Digraph::empty(g.order())));
    }
    for (j, &v) in levels.iter().enumerate() {
        let next = levels.get(j + 1).copied().unwrap_or(0.0);
        let c = v - next;
        if c > 0.0 {
            parts.push((c, threshold(g, v)));
        }
    }
    Decomposition { parts }
}

fn snap(x: f64) -> f64 {
    if x.abs() <= SNAP_TOL {
        0.0
    } else if (x - 1.0).abs() <= SNAP_TOL {
        1.0
    } else {
        x.clamp(0.0, 1.0)
    }
}

fn is_fractional(x: f64) -> bool {
    x > 0.0 && x < 1.0
}

/// Working state: row-major weights of order `n`.
struct Weights {
    n: usize,
    w: Vec<f64>,
}

impl Weights {
    fn fractional(&self) -> Vec<usize> {
        (0..self.w.len()).filter(|&k| is_fractional(self.w[k])).collect()
    }

    /// A cycle of the fractional support, orientation ignored, as
    /// `(arc index, +1 forward / -1 backward)` pairs.
    fn find_cycle(&self) -> Option<Vec<(usize, f64)>> {
        let n = self.n;
        let frac = self.fractional();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for &k in &frac {
            let (i, j) = (k / n, k % n);
            adj[i].push((j, k));
            adj[j].push((i, k));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let start = (0..n).find(|&v| !adj[v].is_empty())?;
        let mut search = CycleSearch {
            adj: &adj,
            state: vec![Visit::New; n],
            stack: Vec::new(),
            stack_arcs: Vec::new(),
        };
        let (verts, arcs) = search.dfs(start, None)?;
        Some(
            verts
                .iter()
                .zip(arcs)
                .map(|(&v, k)| (k, if k / n == v { 1.0 } else { -1.0 }))
                .collect(),
        )
    }

    /// Moves `step` along the signed cycle, then snaps near-integral weights.
    fn push(&mut self, cycle: &[(usize, f64)], step: f64, pinned: usize) {
        for &(k, s) in cycle {
            self.w[k] = snap(self.w[k] + s * step);
        }
        self.w[pinned] = self.w[pinned].round();
    }

    /// Integral balanced digraph reached by repeated forward pushes.
    fn walk_to_vertex(&self) -> Result<Vec<f64>> {
        let mut v = Weights {
            n: self.n,
            w: self.w.clone(),
        };
        loop {
            if v.fractional().is_empty() {
                return Ok(v.w);
            }
            let cycle = v.find_cycle().ok_or_else(|| {
                Error::Internal("fractional support without a cycle; input not balanced".into())
            })?;
            let (room, pinned) = cycle
                .iter()
                .map(|&(k, s)| (if s > 0.0 { 1.0 - v.w[k] } else { v.w[k] }, k))
                .min_by(|a, b| a.0.total_cmp(&b.0))
                .expect("nonempty cycle");
            v.push(&cycle, room, pinned);
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Visit {
    New,
    Open,
    Done,
}

struct CycleSearch<'a> {
    adj: &'a [Vec<(usize, usize)>],
    state: Vec<Visit>,
    stack: Vec<usize>,
    stack_arcs: Vec<usize>,
}

impl CycleSearch<'_> {
    /// Returns the cycle vertices `v_0..v_{m-1}` and the arcs joining `v_i` to `v_{i+1}`.
    fn dfs(&mut self, u: usize, via: Option<usize>) -> Option<(Vec<usize>, Vec<usize>)> {
        self.state[u] = Visit::Open;
        self.stack.push(u);
        for &(v, k) in &self.adj[u] {
            if Some(k) == via {
                continue;
            }
            match self.state[v] {
                Visit::Open => {
                    let pos = self.stack.iter().position(|&x| x == v).expect("open vertex");
                    let verts = self.stack[pos..].to_vec();
                    let mut arcs = self.stack_arcs[pos..].to_vec();
                    arcs.push(k);
                    return Some((verts, arcs));
                }
                Visit::New => {
                    self.stack_arcs.push(k);
                    if let Some(c) = self.dfs(v, Some(k)) {
                        return Some(c);
                    }
                    self.stack_arcs.pop();
                }
                Visit::Done => {}
            }
        }
        self.stack.pop();
        self.state[u] = Visit::Done;
        None
    }
}

fn lexicographic(a: &Digraph, b: &Digraph) -> Ordering {
    a.weights()
        .iter()
        .zip(b.weights())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Convex combination of unweighted balanced digraphs reproducing a
/// weighted balanced digraph. Parts are merged and sorted by arc bitstring.
pub fn balanced_decomposition(g: &Digraph) -> Result<Decomposition> {
    if !g.is_balanced_default() {
        return Err(Error::NotBalanced);
    }
    let n = g.order();
    let mut cur = Weights {
        n,
        w: g.weights().iter().map(|&x| snap(x)).collect(),
    };
    let mut raw: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut remaining = 1.0;
    loop {
        let frac = cur.fractional();
        if frac.is_empty() {
            raw.push((remaining, cur.w));
            break;
        }
        let z = cur.walk_to_vertex()?;
        // extend the ray z -> cur until some fractional arc leaves (0, 1)
        let (tau, pinned) = frac
            .iter()
            .map(|&k| {
                let d = cur.w[k] - z[k];
                let room = if d > 0.0 { (1.0 - cur.w[k]) / d } else { cur.w[k] / -d };
                (room, k)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .expect("fractional arcs present");
        let mu = tau / (1.0 + tau);
        raw.push((remaining * mu, z.clone()));
        remaining *= 1.0 - mu;
        for &k in &frac {
            cur.w[k] = snap(cur.w[k] + tau * (cur.w[k] - z[k]));
        }
        cur.w[pinned] = cur.w[pinned].round();
    }

    let mut parts: Vec<(f64, Digraph)> = Vec::with_capacity(raw.len());
    for (c, w) in raw {
        let d = Digraph::from_weights(n, w)?;
        match parts.iter_mut().find(|(_, p)| *p == d) {
            Some((acc, _)) => *acc += c,
            None => parts.push((c, d)),
        }
    }
    parts.retain(|(c, _)| *c > 0.0);
    parts.sort_by(|a, b| lexicographic(&a.1, &b.1));
    Ok(Decomposition { parts })
}

/// `(alpha(sum c_k g_k), sum c_k alpha(g_k))`; concavity says `lhs >= rhs`.
pub fn concavity_check(parts: &[(f64, Digraph)]) -> Result<(f64, f64)> {
    let combined = convex_combination(parts)?;
    let lhs = alpha_beta(&combined)?.0;
    let mut rhs = 0.0;
    for (c, g) in parts {
        rhs += c * alpha_beta(g)?.0;
    }
    Ok((lhs, rhs))
}
