//! Named digraph families with their closed-form spectra and spreads.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::numkernel::{convex_hull, Complex, Point, Polygon2D, Spectrum};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    /// Directed cycle `C_n`, `n >= 2`.
    Dicycle(usize),
    Complete(usize),
    Empty(usize),
    /// `k`-imploding star: empty digraph on `n - k` vertices joined into `K_k`.
    ImplodingStar { n: usize, k: usize },
    /// Circulant regular tournament `A = P + ... + P^{(p-1)/2}`, odd `p >= 3`.
    PickTournament(usize),
    /// `K_2` joined into the empty digraph on `n - 2` vertices; spread `n`.
    PolygonalExtremal(usize),
    /// `(K_2 -> T_p) -> empty_t`; pseudo-normal with spread `2 + p + t`.
    PseudoNormal { p: usize, t: usize },
    /// `K_1` disjoint from `K_{n-1}`; balanced with spread `n - 1`.
    BalancedExtremal(usize),
}

impl FamilySpec {
    /// Parses a command-line family name and its integer parameters.
    pub fn parse(kind: &str, params: &[usize]) -> Result<Self> {
        let bad = || {
            Error::InvalidFamily(format!(
                "'{kind}' does not take {} parameter(s)",
                params.len()
            ))
        };
        let spec = match (kind, params) {
            ("cycle" | "dicycle", &[n]) => FamilySpec::Dicycle(n),
            ("complete", &[n]) => FamilySpec::Complete(n),
            ("empty", &[n]) => FamilySpec::Empty(n),
            ("star" | "imploding-star", &[n, k]) => FamilySpec::ImplodingStar { n, k },
            ("pick" | "tournament", &[p]) => FamilySpec::PickTournament(p),
            ("polygonal-extremal", &[n]) => FamilySpec::PolygonalExtremal(n),
            ("pseudo-normal", &[p, t]) => FamilySpec::PseudoNormal { p, t },
            ("balanced-extremal", &[n]) => FamilySpec::BalancedExtremal(n),
            (
                "cycle" | "dicycle" | "complete" | "empty" | "star" | "imploding-star" | "pick"
                | "tournament" | "polygonal-extremal" | "pseudo-normal" | "balanced-extremal",
                _,
            ) => return Err(bad()),
            _ => return Err(Error::InvalidFamily(format!("unknown family '{kind}'"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let err = |msg: String| Err(Error::InvalidFamily(msg));
        match *self {
            FamilySpec::Dicycle(n) if n < 2 => err(format!("dicycle needs n >= 2, got {n}")),
            FamilySpec::Complete(0) | FamilySpec::Empty(0) => err("order must be positive".into()),
            FamilySpec::ImplodingStar { n, k } if n == 0 || k > n => {
                err(format!("imploding star needs 0 <= k <= n and n >= 1, got n={n} k={k}"))
            }
            FamilySpec::PickTournament(p) if p < 3 || p % 2 == 0 => {
                err(format!("Pick tournament needs odd p >= 3, got {p}"))
            }
            FamilySpec::PolygonalExtremal(n) if n < 4 => {
                err(format!("polygonal extremal digraph needs n >= 4, got {n}"))
            }
            FamilySpec::PseudoNormal { p, t } if p < 3 || p % 2 == 0 || t < 2 || t > p => err(
                format!("pseudo-normal family needs odd p >= 3 and 2 <= t <= p, got p={p} t={t}"),
            ),
            FamilySpec::BalancedExtremal(n) if n < 2 => {
                err(format!("balanced extremal digraph needs n >= 2, got {n}"))
            }
            _ => Ok(()),
        }
    }

    pub fn order(&self) -> usize {
        match *self {
            FamilySpec::Dicycle(n)
            | FamilySpec::Complete(n)
            | FamilySpec::Empty(n)
            | FamilySpec::ImplodingStar { n, .. }
            | FamilySpec::PolygonalExtremal(n)
            | FamilySpec::BalancedExtremal(n)
            | FamilySpec::PickTournament(n) => n,
            FamilySpec::PseudoNormal { p, t } => 2 + p + t,
        }
    }
}

fn pick_tournament(p: usize) -> Digraph {
    let half = (p - 1) / 2;
    let arcs: Vec<_> = (0..p)
        .flat_map(|i| (1..=half).map(move |s| (i, (i + s) % p)))
        .collect();
    Digraph::from_arcs(p, &arcs).expect("circulant arcs are simple")
}

pub fn generate(spec: &FamilySpec) -> Result<Digraph> {
    spec.validate()?;
    let g = match *spec {
        FamilySpec::Dicycle(n) => Digraph::dicycle(n)?,
        FamilySpec::Complete(n) => Digraph::complete(n),
        FamilySpec::Empty(n) => Digraph::empty(n),
        FamilySpec::ImplodingStar { n, k } => {
            Digraph::empty(n - k).directed_join(&Digraph::complete(k))
        }
        FamilySpec::PickTournament(p) => pick_tournament(p),
        FamilySpec::PolygonalExtremal(n) => {
            Digraph::complete(2).directed_join(&Digraph::empty(n - 2))
        }
        FamilySpec::PseudoNormal { p, t } => Digraph::complete(2)
            .directed_join(&pick_tournament(p))
            .directed_join(&Digraph::empty(t)),
        FamilySpec::BalancedExtremal(n) => {
            Digraph::empty(1).disjoint_union(&Digraph::complete(n - 1))
        }
    };
    Ok(g)
}

/// Closed-form spread of `C_n`.
pub fn cycle_spread_formula(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::OrderTooSmall { n, min: 2 });
    }
    let nf = n as f64;
    let c = (2.0 * PI / nf).cos();
    Ok(if n.is_multiple_of(2) {
        1.0 + c
    } else {
        c - (PI * (nf - 1.0) / nf).cos()
    })
}

/// Vertices `1 - e^{2 pi i j / n}`, `j = 1..n-1`, of the dicycle's range.
pub fn dicycle_rnr_vertices(n: usize) -> Result<Vec<Point>> {
    if n < 2 {
        return Err(Error::OrderTooSmall { n, min: 2 });
    }
    Ok((1..n)
        .map(|j| Complex::new(1.0, 0.0) - Complex::from_polar(1.0, 2.0 * PI * j as f64 / n as f64))
        .collect())
}

/// Laplacian spectrum of the Pick tournament of order `p`.
pub fn pick_spectrum(p: usize) -> Result<Spectrum> {
    FamilySpec::PickTournament(p).validate()?;
    let half = (p - 1) / 2;
    let values = (0..p)
        .map(|j| {
            let s: Complex = (1..=half)
                .map(|s| Complex::from_polar(1.0, 2.0 * PI * (j * s) as f64 / p as f64))
                .sum();
            Complex::new(half as f64, 0.0) - s
        })
        .collect();
    Ok(Spectrum::new(values))
}

/// `1/2 cot(pi / 2p)`: the largest imaginary part in the Pick spectrum.
pub fn pick_max_imag(p: usize) -> f64 {
    0.5 / (PI / (2.0 * p as f64)).tan()
}

/// Quadrilateral and ellipse whose union's hull is the range of the
/// pseudo-normal family member `(p, t)`. Axis lengths are full lengths.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoNormalGeometry {
    /// Counterclockwise from the origin.
    pub quad: [Point; 4],
    pub ellipse_center: Point,
    pub ellipse_foci: (f64, f64),
    pub minor_axis: f64,
    pub major_axis: f64,
}

impl PseudoNormalGeometry {
    pub fn quad_polygon(&self) -> Polygon2D {
        convex_hull(&self.quad).expect("four points")
    }

    /// Boundary point at parameter `phi`; the major axis lies on the real line.
    pub fn ellipse_point(&self, phi: f64) -> Point {
        let (s, c) = phi.sin_cos();
        self.ellipse_center
            + Complex::new(0.5 * self.major_axis * c, 0.5 * self.minor_axis * s)
    }

    /// Copy with both axes multiplied by `factor`.
    pub fn scaled_ellipse(&self, factor: f64) -> PseudoNormalGeometry {
        PseudoNormalGeometry {
            minor_axis: self.minor_axis * factor,
            major_axis: self.major_axis * factor,
            ..self.clone()
        }
    }
}

pub fn pseudo_normal_geometry(p: usize, t: usize) -> Result<PseudoNormalGeometry> {
    FamilySpec::PseudoNormal { p, t }.validate()?;
    let (pf, tf) = (p as f64, t as f64);
    let n = 2.0 + pf + tf;
    let h = pick_max_imag(p);
    let mid = pf / 2.0 + tf;
    let minor2 = 2.0 * pf * tf / n;
    Ok(PseudoNormalGeometry {
        quad: [
            Complex::new(0.0, 0.0),
            Complex::new(mid, -h),
            Complex::new(n, 0.0),
            Complex::new(mid, h),
        ],
        ellipse_center: Complex::new(mid, 0.0),
        ellipse_foci: (tf, pf + tf),
        minor_axis: minor2.sqrt(),
        major_axis: (pf * pf + minor2).sqrt(),
    })
}

/// True iff `samples` equally spaced ellipse boundary points all lie inside
/// the quadrilateral with margin at least 1e-9.
pub fn verify_containment(geom: &PseudoNormalGeometry, samples: usize) -> Result<bool> {
    if samples < 100 {
        return Err(Error::InvalidArgument(format!(
            "containment check needs at least 100 samples, got {samples}"
        )));
    }
    let quad = geom.quad_polygon();
    Ok((0..samples).all(|k| {
        let phi = 2.0 * PI * k as f64 / samples as f64;
        quad.inner_margin(geom.ellipse_point(phi)) >= 1e-9
    }))
}
