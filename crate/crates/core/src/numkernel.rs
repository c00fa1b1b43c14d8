//! Small dense matrix services: Hermitian parts, eigen-decompositions,
//! planar convex hulls, support functions and spectrum comparison.
//!
//! The eigen-solvers delegate to nalgebra; this module pins their accuracy
//! contract and sorts/validates the results.

use nalgebra::{ComplexField, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

pub type Complex = nalgebra::Complex<f64>;

/// A point of the complex plane, `(re, im)`.
pub type Point = Complex;

const MAX_SWEEPS_PER_ORDER: usize = 10_000;

/// Multiset of eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub values: Vec<Complex>,
}

impl Spectrum {
    pub fn new(values: Vec<Complex>) -> Self {
        Spectrum { values }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Spectrum {
            values: values.iter().map(|&x| Complex::new(x, 0.0)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Spectrum with the extra values appended.
    pub fn with(mut self, extra: impl IntoIterator<Item = Complex>) -> Self {
        self.values.extend(extra);
        self
    }

    pub fn conjugate(&self) -> Spectrum {
        Spectrum {
            values: self.values.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|z| z.im).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Replaces each cluster of values (single linkage at `radius`) by its
    /// mean. A defective eigenvalue of multiplicity `k` comes back split by
    /// about `eps^(1/k)`, while the cluster mean stays accurate to `O(eps)`.
    pub fn merge_clusters(&self, radius: f64) -> Spectrum {
        let n = self.values.len();
        let mut label: Vec<usize> = (0..n).collect();
        fn root(label: &mut [usize], mut i: usize) -> usize {
            while label[i] != i {
                label[i] = label[label[i]];
                i = label[i];
            }
            i
        }
        for i in 0..n {
            for j in i + 1..n {
                if (self.values[i] - self.values[j]).norm() <= radius {
                    let (a, b) = (root(&mut label, i), root(&mut label, j));
                    label[a.max(b)] = a.min(b);
                }
            }
        }
        let roots: Vec<usize> = (0..n).map(|i| root(&mut label, i)).collect();
        let values = (0..n)
            .map(|i| {
                let members: Vec<Complex> = (0..n)
                    .filter(|&j| roots[j] == roots[i])
                    .map(|j| self.values[j])
                    .collect();
                members.iter().sum::<Complex>() / members.len() as f64
            })
            .collect();
        Spectrum { values }
    }
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T: ComplexField> {
    pub values: Vec<f64>,
    pub vectors: DMatrix<T>,
}

fn ensure_square<T: ComplexField>(m: &DMatrix<T>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// `(m + m*) / 2`.
pub fn hermitian_part<T: ComplexField>(m: &DMatrix<T>) -> Result<DMatrix<T>> {
    ensure_square(m)?;
    let mut h = m + m.adjoint();
    h.scale_mut(nalgebra::convert::<f64, T::RealField>(0.5));
    Ok(h)
}

/// Frobenius norm.
pub fn frobenius<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    m.iter().map(|z| z.clone().modulus_squared()).sum::<f64>().sqrt()
}

fn hermitian_deviation<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..=i {
            let d = m[(i, j)].clone() - m[(j, i)].clone().conjugate();
            dev = dev.max(d.modulus());
        }
    }
    dev
}

/// Full eigen-decomposition of a Hermitian (real symmetric or complex) matrix.
pub fn eig_hermitian<T: ComplexField<RealField = f64>>(
    m: &DMatrix<T>,
) -> Result<HermitianEigen<T>> {
    let n = ensure_square(m)?;
    if m.iter().any(|z| !z.clone().is_finite()) {
        return Err(Error::NonFinite);
    }
    let dev = hermitian_deviation(m);
    if dev > 1e-12 * frobenius(m).max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    if n == 0 {
        return Ok(HermitianEigen {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, MAX_SWEEPS_PER_ORDER * n)
        .ok_or(Error::ConvergenceFailure)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])].clone());
    Ok(HermitianEigen { values, vectors })
}

/// Ascending eigenvalues of a Hermitian matrix; only the lower triangle is read
/// and no symmetry check is made.
pub fn hermitian_eigenvalues<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Eigenvalues of a general real square matrix.
pub fn eig_general(m: &DMatrix<f64>) -> Result<Spectrum> {
    let n = ensure_square(m)?;
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    if n == 0 {
        return Ok(Spectrum::new(Vec::new()));
    }
    let a = faer::Mat::<f64>::from_fn(n, n, |i, j| m[(i, j)]);
    let values: Vec<Complex> = a
        .eigenvalues()
        .map_err(|_| Error::ConvergenceFailure)?
        .into_iter()
        .map(|z| Complex::new(z.re, z.im))
        .collect();
    if values.len() != n || values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::ConvergenceFailure);
    }
    Ok(Spectrum::new(values))
}

/// Support function `h(theta) = max_p Re(e^{-i theta} p)`.
pub fn support(points: &[Point], theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    points
        .iter()
        .map(|p| p.re * c + p.im * s)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Convex polygon with counterclockwise vertices; one or two vertices
/// encode a point or a segment.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon2D {
    pub vertices: Vec<Point>,
}

impl Polygon2D {
    pub fn support(&self, theta: f64) -> f64 {
        support(&self.vertices, theta)
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn is_segment(&self) -> bool {
        self.vertices.len() == 2
    }

    /// Smallest signed distance from `p` to the edge lines, positive inside.
    /// Degenerate polygons have no interior and return `-inf`.
    pub fn inner_margin(&self, p: Point) -> f64 {
        let k = self.vertices.len();
        if k < 3 {
            return f64::NEG_INFINITY;
        }
        (0..k)
            .map(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % k];
                let e = b - a;
                (e.re * (p.im - a.im) - e.im * (p.re - a.re)) / e.norm()
            })
            .fold(f64::INFINITY, f64::min)
    }
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Minimal counterclockwise hull (Andrew's monotone chain). Points closer
/// than 1e-12 are merged and collinear boundary points are dropped.
pub fn convex_hull(points: &[Point]) -> Result<Polygon2D> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut pts: Vec<Point> = Vec::with_capacity(points.len());
    for &p in points {
        if !pts.iter().any(|q| (q - p).norm() <= 1e-12) {
            pts.push(p);
        }
    }
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    if pts.len() <= 2 {
        return Ok(Polygon2D { vertices: pts });
    }
    let scale = pts.iter().map(|p| p.norm()).fold(1.0, f64::max);
    let eps = 1e-12 * scale * scale;

    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= eps
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= eps
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Ok(Polygon2D { vertices: lower })
}

/// True iff the two multisets can be paired within `tol`.
///
/// Greedy nearest-neighbour pairing is tried first; if it fails, an exact
/// bipartite matching on the `tol`-graph decides.
pub fn spectra_match(a: &Spectrum, b: &Spectrum, tol: f64) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::CardinalityMismatch(a.len(), b.len()));
    }
    let n = a.len();
    let mut used = vec![false; n];
    let mut greedy_ok = true;
    for x in &a.values {
        let best = (0..n)
            .filter(|&j| !used[j])
            .min_by(|&i, &j| (b.values[i] - x).norm().total_cmp(&(b.values[j] - x).norm()));
        match best {
            Some(j) if (b.values[j] - x).norm() <= tol => used[j] = true,
            _ => {
                greedy_ok = false;
                break;
            }
        }
    }
    if greedy_ok {
        return Ok(true);
    }
    let adj: Vec<Vec<usize>> = a
        .values
        .iter()
        .map(|x| (0..n).filter(|&j| (b.values[j] - x).norm() <= tol).collect())
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let mut visited = vec![false; n];
        if !augment(i, &adj, &mut owner, &mut visited) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn augment(
    i: usize,
    adj: &[Vec<usize>],
    owner: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    for &j in &adj[i] {
        if visited[j] {
            continue;
        }
        visited[j] = true;
        if owner[j].is_none_or(|k| augment(k, adj, owner, visited)) {
            owner[j] = Some(i);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merged_clusters_recover_defective_eigenvalues() {
        // Jordan block at 2 plus a simple eigenvalue 5
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1e-20, 2.0, 0.0, 0.0, 0.0, 5.0]);
        let mut perturbed = m.clone();
        perturbed[(1, 0)] = 1e-16;
        let raw = eig_general(&perturbed).unwrap();
        let merged = raw.merge_clusters(1e-5);
        let expect = Spectrum::from_real(&[2.0, 2.0, 5.0]);
        assert!(!spectra_match(&raw, &expect, 1e-10).unwrap());
        assert!(spectra_match(&merged, &expect, 1e-12).unwrap());
        let distinct = Spectrum::from_real(&[0.0, 1.0]);
        assert_eq!(distinct.merge_clusters(1e-5), distinct);
    }
    use crate::graph::Digraph;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn hermitian_part_of_c3_laplacian() {
        let l = Digraph::dicycle(3).unwrap().laplacian().into_matrix();
        let h = hermitian_part(&l).unwrap();
        let expect = DMatrix::from_row_slice(
            3,
            3,
            &[1.0, -0.5, -0.5, -0.5, 1.0, -0.5, -0.5, -0.5, 1.0],
        );
        assert_eq!(h, expect);
        assert_eq!(hermitian_part(&expect).unwrap(), expect);
        let skew = &l - l.transpose();
        assert_eq!(hermitian_part(&skew).unwrap(), DMatrix::zeros(3, 3));
        assert!(matches!(
            hermitian_part(&DMatrix::<f64>::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn eig_hermitian_examples() {
        let l = Digraph::dicycle(3).unwrap().laplacian().into_matrix();
        let e = eig_hermitian(&hermitian_part(&l).unwrap()).unwrap();
        // 1 - cos(2 pi j / 3) for j = 0, 1, 2
        let expect = [0.0, 1.5, 1.5];
        for (v, x) in e.values.iter().zip(expect) {
            assert!((v - x).abs() < 1e-12);
        }
        let z = eig_hermitian(&DMatrix::<f64>::zeros(4, 4)).unwrap();
        assert_eq!(z.values, vec![0.0; 4]);
        let d = eig_hermitian(&DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            7.0, 0.0, 2.0,
        ])))
        .unwrap();
        assert_eq!(d.values, vec![0.0, 2.0, 7.0]);
        assert!(matches!(eig_hermitian(&l), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn eig_hermitian_complex_residual() {
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(2.0, 0.0),
                c(1.0, -1.0),
                c(0.0, 0.5),
                c(1.0, 1.0),
                c(-1.0, 0.0),
                c(0.3, 0.0),
                c(0.0, -0.5),
                c(0.3, 0.0),
                c(0.5, 0.0),
            ],
        );
        let e = eig_hermitian(&m).unwrap();
        for k in 0..3 {
            let v = e.vectors.column(k);
            let r = &m * v - v * c(e.values[k], 0.0);
            assert!(r.norm() < 1e-11 * frobenius(&m).max(1.0));
        }
        let u = e.vectors.adjoint() * &e.vectors;
        assert!((u - DMatrix::identity(3, 3)).norm() < 1e-11);
        let trace: f64 = (0..3).map(|i| m[(i, i)].re).sum();
        assert!((e.values.iter().sum::<f64>() - trace).abs() < 1e-10);
    }

    #[test]
    fn eig_general_examples() {
        let l = Digraph::dicycle(4).unwrap().laplacian().into_matrix();
        let s = eig_general(&l).unwrap();
        let expect = Spectrum::new(vec![c(0.0, 0.0), c(1.0, -1.0), c(2.0, 0.0), c(1.0, 1.0)]);
        assert!(spectra_match(&s, &expect, 1e-10).unwrap());

        let t = DMatrix::from_row_slice(2, 2, &[2.0, 5.0, 0.0, 3.0]);
        let s = eig_general(&t).unwrap();
        assert!(spectra_match(&s, &Spectrum::from_real(&[2.0, 3.0]), 1e-12).unwrap());

        assert!(matches!(
            eig_general(&DMatrix::from_element(2, 2, f64::NAN)),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn eig_general_pick_five() {
        // circulant with first row (2, -1, -1, 0, 0)
        let mut l = DMatrix::zeros(5, 5);
        for i in 0..5 {
            l[(i, i)] = 2.0;
            l[(i, (i + 1) % 5)] = -1.0;
            l[(i, (i + 2) % 5)] = -1.0;
        }
        let s = eig_general(&l).unwrap();
        let expect = Spectrum::new(vec![
            c(0.0, 0.0),
            c(2.5, 1.538842),
            c(2.5, -1.538842),
            c(2.5, 0.363271),
            c(2.5, -0.363271),
        ]);
        assert!(spectra_match(&s, &expect, 1e-6).unwrap());
        assert!(spectra_match(&s, &s.conjugate(), 1e-8).unwrap());
    }

    #[test]
    fn hull_examples() {
        let quad = convex_hull(&[c(0.0, 0.0), c(1.0, -1.0), c(2.0, 0.0), c(1.0, 1.0)]).unwrap();
        assert_eq!(quad.vertices.len(), 4);
        assert_eq!(quad.vertices[0], c(0.0, 0.0));
        // counterclockwise: positive signed area
        let k = quad.vertices.len();
        let area: f64 = (0..k)
            .map(|i| {
                let (a, b) = (quad.vertices[i], quad.vertices[(i + 1) % k]);
                a.re * b.im - b.re * a.im
            })
            .sum();
        assert!((area / 2.0 - 2.0).abs() < 1e-12);

        let p = convex_hull(&[c(3.0, 0.0); 5]).unwrap();
        assert!(p.is_point());
        let s = convex_hull(&[c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0)]).unwrap();
        assert_eq!(s.vertices, vec![c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(convex_hull(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn support_examples() {
        for &theta in &[0.0, 0.7, PI, 4.0] {
            assert!((support(&[c(3.0, 0.0)], theta) - 3.0 * f64::cos(theta)).abs() < 1e-15);
        }
        assert_eq!(support(&[c(0.0, 0.0), c(4.0, 0.0)], 0.0), 4.0);
        let quad = convex_hull(&[c(0.0, 0.0), c(1.0, -1.0), c(2.0, 0.0), c(1.0, 1.0)]).unwrap();
        assert!(quad.support(PI).abs() < 1e-15);
    }

    #[test]
    fn inner_margin_of_square() {
        let q = convex_hull(&[c(0.0, 0.0), c(2.0, 0.0), c(2.0, 2.0), c(0.0, 2.0)]).unwrap();
        assert!((q.inner_margin(c(1.0, 1.0)) - 1.0).abs() < 1e-15);
        assert!(q.inner_margin(c(3.0, 1.0)) < 0.0);
    }

    #[test]
    fn match_examples() {
        let a = Spectrum::from_real(&[0.0, 1.0, 2.0]);
        let b = Spectrum::from_real(&[2.0, 0.0, 1.0]);
        assert!(spectra_match(&a, &b, 1e-12).unwrap());
        assert!(!spectra_match(&Spectrum::from_real(&[0.0]), &Spectrum::from_real(&[1e-3]), 1e-6)
            .unwrap());
        assert!(matches!(
            spectra_match(&a, &Spectrum::from_real(&[0.0]), 1.0),
            Err(Error::CardinalityMismatch(3, 1))
        ));
    }

    #[test]
    fn match_recovers_from_bad_greedy_choice() {
        // greedy pairs 0.0 with 0.4 and leaves 1.0 unmatched against -0.4
        let a = Spectrum::from_real(&[0.0, 1.0]);
        let b = Spectrum::from_real(&[0.4, -0.4]);
        assert!(!spectra_match(&a, &b, 0.5).unwrap());
        let a = Spectrum::from_real(&[0.1, 0.5]);
        let b = Spectrum::from_real(&[0.3, 0.0]);
        // greedy: 0.1 -> 0.0, 0.5 -> 0.3 ok; reversed ordering stresses fallback
        assert!(spectra_match(&a, &b, 0.25).unwrap());
        let a = Spectrum::from_real(&[0.2, 0.0]);
        let b = Spectrum::from_real(&[0.1, 0.35]);
        // greedy sends 0.2 -> 0.1, then 0.0 cannot reach 0.35; exact matching finds 0.2->0.35, 0.0->0.1
        assert!(spectra_match(&a, &b, 0.16).unwrap());
    }
}
