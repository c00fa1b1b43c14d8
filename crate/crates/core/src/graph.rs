//! Weighted simple digraphs with arc weights in `[0, 1]`.
//!
//! Vertices are 0-indexed. A digraph is immutable once built; combinators
//! return new values.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Absolute tolerance used by [`Digraph::is_balanced_default`].
pub const BALANCE_TOL: f64 = 1e-9;

/// Largest order whose arc set fits in a `u64` arc code.
pub const MAX_CODE_ORDER: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct Digraph {
    n: usize,
    w: Vec<f64>,
}

impl Digraph {
    /// Empty digraph (no arcs) of order `n`.
    pub fn empty(n: usize) -> Self {
        Digraph {
            n,
            w: vec![0.0; n * n],
        }
    }

    /// Complete digraph: every off-diagonal arc with weight 1.
    pub fn complete(n: usize) -> Self {
        let mut w = vec![1.0; n * n];
        for i in 0..n {
            w[i * n + i] = 0.0;
        }
        Digraph { n, w }
    }

    /// Directed cycle `0 -> 1 -> ... -> n-1 -> 0`. For `n == 2` this is the 2-cycle.
    pub fn dicycle(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::OrderTooSmall { n, min: 2 });
        }
        let arcs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_arcs(n, &arcs)
    }

    /// Builds a digraph from a row-major `n*n` weight array.
    pub fn from_weights(n: usize, w: Vec<f64>) -> Result<Self> {
        if w.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: w.len(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                let x = w[i * n + j];
                if i == j {
                    if x != 0.0 {
                        return Err(Error::LoopArc(i));
                    }
                } else if !(0.0..=1.0).contains(&x) {
                    return Err(Error::InvalidWeight { i, j, weight: x });
                }
            }
        }
        Ok(Digraph { n, w })
    }

    /// Builds an unweighted digraph from a list of arcs.
    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let weighted: Vec<_> = arcs.iter().map(|&(i, j)| (i, j, 1.0)).collect();
        Self::from_weighted_arcs(n, &weighted)
    }

    pub fn from_weighted_arcs(n: usize, arcs: &[(usize, usize, f64)]) -> Result<Self> {
        let mut w = vec![0.0; n * n];
        let mut seen = vec![false; n * n];
        for &(i, j, x) in arcs {
            for v in [i, j] {
                if v >= n {
                    return Err(Error::IndexOutOfRange { index: v, n });
                }
            }
            if i == j {
                return Err(Error::LoopArc(i));
            }
            if seen[i * n + j] {
                return Err(Error::DuplicateArc(i, j));
            }
            seen[i * n + j] = true;
            w[i * n + j] = x;
        }
        Self::from_weights(n, w)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Weight of arc `i -> j`. Panics if either index is out of range.
    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n, "vertex index out of range");
        self.w[i * self.n + j]
    }

    /// Row-major weight array.
    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    /// Arcs with nonzero weight, in row-major order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n;
        self.w
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0.0)
            .map(move |(k, &x)| (k / n, k % n, x))
    }

    pub fn arc_count(&self) -> usize {
        self.w.iter().filter(|&&x| x != 0.0).count()
    }

    /// True iff every weight is exactly 0 or 1.
    pub fn is_unweighted(&self) -> bool {
        self.w.iter().all(|&x| x == 0.0 || x == 1.0)
    }

    pub fn out_degree(&self, v: usize) -> f64 {
        self.w[v * self.n..(v + 1) * self.n].iter().sum()
    }

    pub fn in_degree(&self, v: usize) -> f64 {
        (0..self.n).map(|i| self.w[i * self.n + v]).sum()
    }

    /// `(out-degree, in-degree)` of vertex `v`.
    pub fn degrees(&self, v: usize) -> Result<(f64, f64)> {
        if v >= self.n {
            return Err(Error::IndexOutOfRange {
                index: v,
                n: self.n,
            });
        }
        Ok((self.out_degree(v), self.in_degree(v)))
    }

    /// `L = D - A` with `D` the diagonal of out-degrees.
    pub fn laplacian(&self) -> Laplacian {
        let n = self.n;
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            let mut d = 0.0;
            for j in 0..n {
                let x = self.w[i * n + j];
                if i != j {
                    m[(i, j)] = -x;
                    d += x;
                }
            }
            m[(i, i)] = d;
        }
        Laplacian(m)
    }

    /// Off-diagonal weights replaced by `1 - w`.
    pub fn complement(&self) -> Digraph {
        let n = self.n;
        let mut w = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    w[i * n + j] = 1.0 - self.w[i * n + j];
                }
            }
        }
        Digraph { n, w }
    }

    pub fn is_balanced(&self, tol: f64) -> bool {
        (0..self.n).all(|v| (self.out_degree(v) - self.in_degree(v)).abs() <= tol)
    }

    pub fn is_balanced_default(&self) -> bool {
        self.is_balanced(BALANCE_TOL)
    }

    /// True iff `d+(v) = d-(v) = r` for every vertex and a common `r`.
    pub fn regular_degree(&self) -> Option<f64> {
        if self.n == 0 {
            return None;
        }
        let r = self.out_degree(0);
        (0..self.n)
            .all(|v| self.out_degree(v) == r && self.in_degree(v) == r)
            .then_some(r)
    }

    /// Disjoint union plus every arc from a vertex of `self` to a vertex of `other`.
    pub fn directed_join(&self, other: &Digraph) -> Digraph {
        let mut g = self.disjoint_union(other);
        let n = g.n;
        for i in 0..self.n {
            for j in self.n..n {
                g.w[i * n + j] = 1.0;
            }
        }
        g
    }

    pub fn disjoint_union(&self, other: &Digraph) -> Digraph {
        let (n1, n2) = (self.n, other.n);
        let n = n1 + n2;
        let mut w = vec![0.0; n * n];
        for i in 0..n1 {
            w[i * n..i * n + n1].copy_from_slice(&self.w[i * n1..(i + 1) * n1]);
        }
        for i in 0..n2 {
            let row = (n1 + i) * n + n1;
            w[row..row + n2].copy_from_slice(&other.w[i * n2..(i + 1) * n2]);
        }
        Digraph { n, w }
    }

    /// Relabels vertices: vertex `v` of `self` becomes vertex `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Digraph> {
        let n = self.n;
        if perm.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: perm.len(),
            });
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::IndexOutOfRange { index: p, n });
            }
            seen[p] = true;
        }
        let mut w = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                w[perm[i] * n + perm[j]] = self.w[i * n + j];
            }
        }
        Ok(Digraph { n, w })
    }

    /// Arc bitstring of an unweighted digraph packed into a `u64`.
    ///
    /// Off-diagonal pairs are taken in row-major order, the first pair being
    /// the most significant bit, so numeric order equals lexicographic order
    /// of the bitstring. Returns `None` for weighted digraphs or orders above
    /// [`MAX_CODE_ORDER`].
    pub fn arc_code(&self) -> Option<u64> {
        if self.n > MAX_CODE_ORDER || !self.is_unweighted() {
            return None;
        }
        let bits = code_bits(self.n);
        let mut code = 0u64;
        let mut k = 0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    if self.w[i * self.n + j] == 1.0 {
                        code |= 1 << (bits - 1 - k);
                    }
                    k += 1;
                }
            }
        }
        Some(code)
    }

    pub fn from_arc_code(n: usize, code: u64) -> Result<Digraph> {
        if n > MAX_CODE_ORDER {
            return Err(Error::InvalidCode(format!("order {n} too large")));
        }
        let bits = code_bits(n);
        if bits < 64 && code >> bits != 0 {
            return Err(Error::InvalidCode(format!("{code:x}")));
        }
        let mut w = vec![0.0; n * n];
        let mut k = 0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    if code >> (bits - 1 - k) & 1 == 1 {
                        w[i * n + j] = 1.0;
                    }
                    k += 1;
                }
            }
        }
        Ok(Digraph { n, w })
    }
}

/// Number of off-diagonal pairs, i.e. bits in an arc code.
pub fn code_bits(n: usize) -> usize {
    n * n.saturating_sub(1)
}

/// Zero-padded lowercase hex rendering of an arc code.
pub fn code_to_hex(n: usize, code: u64) -> String {
    let width = code_bits(n).div_ceil(4).max(1);
    format!("{code:0width$x}")
}

pub fn hex_to_code(n: usize, hex: &str) -> Result<u64> {
    let code =
        u64::from_str_radix(hex, 16).map_err(|_| Error::InvalidCode(hex.to_string()))?;
    let bits = code_bits(n);
    if bits < 64 && code >> bits != 0 {
        return Err(Error::InvalidCode(hex.to_string()));
    }
    Ok(code)
}

/// Weighted sum `sum c_k g_k` of same-order digraphs with convex coefficients.
pub fn convex_combination(parts: &[(f64, Digraph)]) -> Result<Digraph> {
    let Some((_, first)) = parts.first() else {
        return Err(Error::EmptyInput);
    };
    let n = first.n;
    let mut total = 0.0;
    for (c, g) in parts {
        if g.n != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.n,
            });
        }
        if !c.is_finite() || *c < 0.0 {
            return Err(Error::InvalidCoefficients(format!("coefficient {c}")));
        }
        total += c;
    }
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidCoefficients(format!("coefficients sum to {total}")));
    }
    let mut w = vec![0.0; n * n];
    for (c, g) in parts {
        for (acc, x) in w.iter_mut().zip(&g.w) {
            *acc += c * x;
        }
    }
    // Rounding can push a full-weight arc a few ulps past 1.
    for x in &mut w {
        *x = x.clamp(0.0, 1.0);
    }
    Ok(Digraph { n, w })
}

/// Digraph Laplacian `D - A`; rows sum to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Laplacian(DMatrix<f64>);

impl Laplacian {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }
}
