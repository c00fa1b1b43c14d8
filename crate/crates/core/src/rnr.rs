//! Restricted numerical range of a digraph Laplacian.
//!
//! Everything is computed on the restricted Laplacian `M = Q^T L Q`, where
//! the columns of `Q` are an orthonormal basis of the complement of the
//! all-ones vector. The real extent of `W(M)` gives the algebraic
//! connectivity `alpha` and its counterpart `beta`; a sweep of rotated
//! Hermitian parts traces the boundary.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::graph::Digraph;
use crate::numkernel::{
    eig_general, eig_hermitian, frobenius, hermitian_eigenvalues, hermitian_part, support,
    Complex, Point,
};
use crate::par::Execution;

pub const DEFAULT_SWEEP: usize = 720;
pub const DEFAULT_NORMAL_TOL: f64 = 1e-10;
pub const DEFAULT_POLYGONAL_TOL: f64 = 1e-6;
pub const MIN_SWEEP: usize = 8;

/// Reported extents are rounded to multiples of `2^-40` so that exact
/// values such as integers print without solver noise.
pub const REPORT_QUANTUM: f64 = 1.0 / (1u64 << 40) as f64;

pub fn tidy(x: f64) -> f64 {
    let q = (x / REPORT_QUANTUM).round() * REPORT_QUANTUM;
    if q == 0.0 {
        0.0
    } else {
        q
    }
}

fn require_order(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::OrderTooSmall { n, min: 2 });
    }
    Ok(())
}

/// `n x (n-1)` matrix with orthonormal columns orthogonal to the all-ones vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Restrictor {
    q: DMatrix<f64>,
}

impl Restrictor {
    /// First `n-1` columns of the Householder reflector that maps `e/sqrt(n)`
    /// to `-e_n`.
    pub fn householder(n: usize) -> Result<Self> {
        require_order(n)?;
        let s = 1.0 / (n as f64).sqrt();
        let mut u = nalgebra::DVector::from_element(n, s);
        u[n - 1] += 1.0;
        let scale = 2.0 / u.norm_squared();
        let q = DMatrix::from_fn(n, n - 1, |i, j| {
            let delta = if i == j { 1.0 } else { 0.0 };
            delta - scale * u[i] * u[j]
        });
        Ok(Restrictor { q })
    }

    /// Validates an arbitrary candidate: `q^T q = I` and `q^T e = 0` within 1e-12.
    pub fn from_matrix(q: DMatrix<f64>) -> Result<Self> {
        let n = q.nrows();
        require_order(n)?;
        if q.ncols() != n - 1 {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                found: q.ncols(),
            });
        }
        let gram = q.transpose() * &q;
        let dev = (gram - DMatrix::identity(n - 1, n - 1)).amax();
        if dev > 1e-12 {
            return Err(Error::InvalidRestrictor(format!("columns not orthonormal ({dev:e})")));
        }
        let col_sums = q.row_sum().amax();
        if col_sums > 1e-12 {
            return Err(Error::InvalidRestrictor(format!(
                "columns not orthogonal to e ({col_sums:e})"
            )));
        }
        Ok(Restrictor { q })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn order(&self) -> usize {
        self.q.nrows()
    }
}

/// `q^T L q`.
pub fn restricted_laplacian(g: &Digraph, q: &Restrictor) -> Result<DMatrix<f64>> {
    if g.order() != q.order() {
        return Err(Error::DimensionMismatch {
            expected: q.order(),
            found: g.order(),
        });
    }
    let l = g.laplacian().into_matrix();
    Ok(q.q.transpose() * l * &q.q)
}

/// `(alpha, beta)`: extreme eigenvalues of the Hermitian part of the restricted Laplacian.
pub fn alpha_beta(g: &Digraph) -> Result<(f64, f64)> {
    let q = Restrictor::householder(g.order())?;
    alpha_beta_with(g, &q)
}

pub fn alpha_beta_with(g: &Digraph, q: &Restrictor) -> Result<(f64, f64)> {
    let m = restricted_laplacian(g, q)?;
    Ok(extent_of(&m))
}

pub(crate) fn extent_of(m: &DMatrix<f64>) -> (f64, f64) {
    let h = (m + m.transpose()) * 0.5;
    let ev = hermitian_eigenvalues(&h);
    (ev[0], ev[ev.len() - 1])
}

/// Laplacian spread `beta - alpha`.
pub fn spread(g: &Digraph) -> Result<f64> {
    let (a, b) = alpha_beta(g)?;
    Ok(b - a)
}

/// Algebraic connectivity of a balanced digraph as the second-smallest
/// eigenvalue of the Hermitian part of `L`.
pub fn balanced_alpha(g: &Digraph) -> Result<f64> {
    require_order(g.order())?;
    if !g.is_balanced_default() {
        return Err(Error::NotBalanced);
    }
    let h = hermitian_part(g.laplacian().matrix())?;
    Ok(hermitian_eigenvalues(&h)[1])
}

/// Sampled boundary of `W_r(L)`: for each angle the support value and a
/// boundary point attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryCurve {
    pub thetas: Vec<f64>,
    pub supports: Vec<f64>,
    pub points: Vec<Point>,
}

impl BoundaryCurve {
    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    /// `(min, max)` real part over the sampled points.
    pub fn real_extent(&self) -> (f64, f64) {
        self.points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.re), hi.max(p.re))
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,support,re,im\n");
        for k in 0..self.len() {
            let p = self.points[k];
            out.push_str(&format!(
                "{},{},{},{}\n",
                g17(self.thetas[k]),
                g17(self.supports[k]),
                g17(p.re),
                g17(p.im)
            ));
        }
        out
    }
}

fn sample_angles(m: usize) -> Vec<f64> {
    (0..m).map(|k| 2.0 * PI * k as f64 / m as f64).collect()
}

/// Hermitian part of `e^{-i theta} M`, i.e. `cos(theta) S - i sin(theta) K`
/// with `S`, `K` the symmetric and skew parts of `M`.
fn rotated_hermitian(sym: &DMatrix<f64>, skew: &DMatrix<f64>, theta: f64) -> DMatrix<Complex> {
    let (s, c) = theta.sin_cos();
    DMatrix::from_fn(sym.nrows(), sym.ncols(), |i, j| {
        Complex::new(c * sym[(i, j)], -s * skew[(i, j)])
    })
}

fn split_parts(m: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let mt = m.transpose();
    ((m + &mt) * 0.5, (m - mt) * 0.5)
}

/// Boundary sweep of `W(m)` for a real square matrix `m`.
pub fn sweep_matrix(m: &DMatrix<f64>, samples: usize, exec: Execution) -> Result<BoundaryCurve> {
    if samples < MIN_SWEEP {
        return Err(Error::InvalidArgument(format!(
            "sweep resolution {samples} below {MIN_SWEEP}"
        )));
    }
    let (sym, skew) = split_parts(m);
    let mc = m.map(|x| Complex::new(x, 0.0));
    let thetas = sample_angles(samples);
    let rows = exec.try_map(&thetas, |&theta| -> Result<(f64, Point)> {
        let h = rotated_hermitian(&sym, &skew, theta);
        let eig = eig_hermitian(&h)?;
        let last = eig.values.len() - 1;
        let v = eig.vectors.column(last);
        let p = (v.adjoint() * &mc * v)[(0, 0)];
        Ok((eig.values[last], p))
    })?;
    let (supports, points) = rows.into_iter().unzip();
    Ok(BoundaryCurve {
        thetas,
        supports,
        points,
    })
}

/// Boundary of `W_r(L)` sampled at `m` equally spaced angles.
pub fn boundary_sweep(g: &Digraph, m: usize) -> Result<BoundaryCurve> {
    boundary_sweep_with(g, m, Execution::default())
}

pub fn boundary_sweep_with(g: &Digraph, m: usize, exec: Execution) -> Result<BoundaryCurve> {
    let q = Restrictor::householder(g.order())?;
    let r = restricted_laplacian(g, &q)?;
    sweep_matrix(&r, m, exec)
}

/// Visits every index in `0..m`, coarse stride first so that a violation is
/// usually found within the first few samples.
fn coarse_first(m: usize) -> impl Iterator<Item = usize> {
    let stride = 16.min(m);
    (0..stride).flat_map(move |off| (off..m).step_by(stride))
}

/// Checks `h_W(theta) <= h_hull(theta) + tol` on every sampled angle, where
/// `h_hull` is the support of the eigenvalue hull of `m`.
pub(crate) fn matrix_is_polygonal(m: &DMatrix<f64>, samples: usize, tol: f64) -> Result<bool> {
    let eigs = eig_general(m)?.values;
    let (sym, skew) = split_parts(m);
    for k in coarse_first(samples) {
        let theta = 2.0 * PI * k as f64 / samples as f64;
        let h = rotated_hermitian(&sym, &skew, theta);
        let ev = hermitian_eigenvalues(&h);
        if ev[ev.len() - 1] - support(&eigs, theta) > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff `W_r(L)` coincides with the convex hull of the restricted
/// spectrum at every sampled supporting direction.
pub fn is_polygonal(g: &Digraph, m: usize, tol: f64) -> Result<bool> {
    let q = Restrictor::householder(g.order())?;
    let r = restricted_laplacian(g, &q)?;
    matrix_is_polygonal(&r, m.max(MIN_SWEEP), tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolygonalClass {
    Normal,
    RestrictedNormal,
    PseudoNormal,
    NonPolygonal,
}

impl PolygonalClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PolygonalClass::Normal => "Normal",
            PolygonalClass::RestrictedNormal => "RestrictedNormal",
            PolygonalClass::PseudoNormal => "PseudoNormal",
            PolygonalClass::NonPolygonal => "NonPolygonal",
        }
    }

    pub fn is_polygonal(self) -> bool {
        self != PolygonalClass::NonPolygonal
    }
}

impl fmt::Display for PolygonalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolygonalClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Normal" => Ok(PolygonalClass::Normal),
            "RestrictedNormal" => Ok(PolygonalClass::RestrictedNormal),
            "PseudoNormal" => Ok(PolygonalClass::PseudoNormal),
            "NonPolygonal" => Ok(PolygonalClass::NonPolygonal),
            other => Err(Error::Parse {
                line: 0,
                msg: format!("unknown class '{other}'"),
            }),
        }
    }
}

/// Thresholds for [`classify_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassifyConfig {
    /// Relative Frobenius bound on the commutator `A A^T - A^T A`.
    pub normal_tol: f64,
    pub polygonal_tol: f64,
    pub sweep: usize,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            normal_tol: DEFAULT_NORMAL_TOL,
            polygonal_tol: DEFAULT_POLYGONAL_TOL,
            sweep: DEFAULT_SWEEP,
        }
    }
}

fn is_normal(a: &DMatrix<f64>, tol: f64) -> bool {
    let at = a.transpose();
    let comm = a * &at - &at * a;
    let scale = frobenius(a).powi(2).max(1.0);
    frobenius(&comm) <= tol * scale
}

pub fn classify(g: &Digraph) -> Result<PolygonalClass> {
    classify_with(g, &ClassifyConfig::default())
}

pub fn classify_with(g: &Digraph, cfg: &ClassifyConfig) -> Result<PolygonalClass> {
    let q = Restrictor::householder(g.order())?;
    classify_restricted(g, &q, cfg)
}

pub(crate) fn classify_restricted(
    g: &Digraph,
    q: &Restrictor,
    cfg: &ClassifyConfig,
) -> Result<PolygonalClass> {
    let l = g.laplacian().into_matrix();
    if is_normal(&l, cfg.normal_tol) {
        return Ok(PolygonalClass::Normal);
    }
    let m = restricted_laplacian(g, q)?;
    if is_normal(&m, cfg.normal_tol) {
        return Ok(PolygonalClass::RestrictedNormal);
    }
    if matrix_is_polygonal(&m, cfg.sweep, cfg.polygonal_tol)? {
        Ok(PolygonalClass::PseudoNormal)
    } else {
        Ok(PolygonalClass::NonPolygonal)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RnrSummary {
    pub alpha: f64,
    pub beta: f64,
    pub spread: f64,
    pub class: PolygonalClass,
}

impl RnrSummary {
    pub fn to_json(&self) -> String {
        format!(
            "{{\"alpha\":{},\"beta\":{},\"spread\":{},\"class\":\"{}\"}}",
            g17(self.alpha),
            g17(self.beta),
            g17(self.spread),
            self.class
        )
    }
}

pub fn summarize(g: &Digraph) -> Result<RnrSummary> {
    summarize_with(g, &ClassifyConfig::default())
}

pub fn summarize_with(g: &Digraph, cfg: &ClassifyConfig) -> Result<RnrSummary> {
    let q = Restrictor::householder(g.order())?;
    let (alpha, beta) = alpha_beta_with(g, &q)?;
    let (alpha, beta) = (tidy(alpha), tidy(beta));
    let class = classify_restricted(g, &q, cfg)?;
    Ok(RnrSummary {
        alpha,
        beta,
        spread: beta - alpha,
        class,
    })
}

/// Degree bound `1/2 max(3 d+ + d-) - 1/2 min(d+ - d-)` on the spread of a
/// nonnegatively weighted digraph.
pub fn wu_bound(g: &Digraph) -> f64 {
    let n = g.order();
    let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
    for v in 0..n {
        let (dout, din) = (g.out_degree(v), g.in_degree(v));
        hi = hi.max(3.0 * dout + din);
        lo = lo.min(dout - din);
    }
    0.5 * hi - 0.5 * lo
}

/// Maximum of [`wu_bound`] over unweighted digraphs of order `n`.
pub fn wu_cap(n: usize) -> f64 {
    2.5 * (n as f64 - 1.0)
}
