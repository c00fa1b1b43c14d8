//! Acceptance suite: one pass/fail line per criterion. Exits nonzero if any fails.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rnr_spread::balanced::{
    balanced_decomposition, concavity_check, edge_quadratic_form, level_set_decomposition, nabla_gap,
    quadratic_form,
};
use rnr_spread::families::{generate, pseudo_normal_geometry, verify_containment, FamilySpec};
use rnr_spread::graph::code_bits;
use rnr_spread::numkernel::{eig_general, spectra_match, Complex};
use rnr_spread::rnr::{alpha_beta_with, boundary_sweep, restricted_laplacian, summarize};
use rnr_spread::survey::{balanced_codes, is_regular_tournament, spread_scan};
use rnr_spread::{alpha_beta, classify, spread, Digraph, Execution, PolygonalClass, Restrictor};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(elapsed: Duration, budget: Duration) -> Result<(), String> {
    ensure(elapsed < budget, || format!("took {elapsed:.2?}, budget {budget:?}"))
}

fn dicycle_spreads() -> Outcome {
    let start = Instant::now();
    for n in 3..=12usize {
        let s = spread(&Digraph::dicycle(n).unwrap()).map_err(|e| e.to_string())?;
        let nf = n as f64;
        let expect = if n % 2 == 0 {
            1.0 + (2.0 * PI / nf).cos()
        } else {
            (2.0 * PI / nf).cos() - (PI * (nf - 1.0) / nf).cos()
        };
        ensure((s - expect).abs() <= 1e-9, || format!("n={n}: spread {s} vs {expect}"))?;
    }
    within_budget(start.elapsed(), Duration::from_secs(1))?;
    Ok("n = 3..12 match the closed forms within 1e-9".into())
}

fn degenerate_ranges() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=8 {
        for k in 0..=n {
            let g = Digraph::empty(n - k).directed_join(&Digraph::complete(k));
            let curve = boundary_sweep(&g, 720).map_err(|e| e.to_string())?;
            for p in &curve.points {
                let d = ((p.re - k as f64).powi(2) + p.im.powi(2)).sqrt();
                worst = worst.max(d);
                ensure(d <= 1e-7, || format!("star n={n} k={k}: point {p} off by {d:e}"))?;
            }
        }
    }
    for p in [3usize, 5, 7, 9] {
        let g = Digraph::from_arcs(
            p,
            &(0..p)
                .flat_map(|i| (1..=(p - 1) / 2).map(move |s| (i, (i + s) % p)))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let (a, b) = alpha_beta(&g).map_err(|e| e.to_string())?;
        let half = p as f64 / 2.0;
        ensure((a - half).abs() <= 1e-9 && (b - half).abs() <= 1e-9, || {
            format!("pick p={p}: alpha {a}, beta {b}")
        })?;
        let q = Restrictor::householder(p).unwrap();
        let m = restricted_laplacian(&g, &q).unwrap();
        let im = eig_general(&m).map_err(|e| e.to_string())?.max_imag();
        let expect = 0.5 / (PI / (2.0 * p as f64)).tan();
        ensure((im - expect).abs() <= 1e-8, || format!("pick p={p}: max |Im| {im} vs {expect}"))?;
    }
    Ok(format!("stars n <= 8 within {worst:.1e} of (k, 0); Pick p in {{3,5,7,9}} exact"))
}

fn extremal_constructions() -> Outcome {
    for n in 4..=12 {
        let g = Digraph::complete(2).directed_join(&Digraph::empty(n - 2));
        let s = spread(&g).map_err(|e| e.to_string())?;
        ensure((s - n as f64).abs() <= 1e-9, || format!("K2 -> E_{}: spread {s}", n - 2))?;
        let c = classify(&g).map_err(|e| e.to_string())?;
        ensure(c == PolygonalClass::RestrictedNormal, || format!("K2 -> E_{}: class {c}", n - 2))?;
    }
    let mut failures = Vec::new();
    for n in 2..=12 {
        let g = Digraph::empty(1).disjoint_union(&Digraph::complete(n - 1));
        let s = spread(&g).map_err(|e| e.to_string())?;
        if (s - (n as f64 - 1.0)).abs() > 1e-9 {
            failures.push(format!("K1 + K{}: spread {s}, expected {}", n - 1, n - 1));
        }
    }
    if failures.is_empty() {
        Ok("K2 -> E_(n-2) spread n, RestrictedNormal (n=4..12); K1 + K_(n-1) spread n-1 (n=2..12)".into())
    } else {
        Err(failures.join("; "))
    }
}

fn pseudo_normal_suite() -> Outcome {
    let start = Instant::now();
    for (p, t) in [(3usize, 2usize), (3, 3), (5, 2), (5, 5)] {
        let g = Digraph::complete(2)
            .directed_join(&generate(&FamilySpec::PickTournament(p)).unwrap())
            .directed_join(&Digraph::empty(t));
        let s = summarize(&g).map_err(|e| e.to_string())?;
        let expect = (2 + p + t) as f64;
        ensure((s.spread - expect).abs() <= 1e-8, || format!("(p,t)=({p},{t}): spread {}", s.spread))?;
        ensure(s.class == PolygonalClass::PseudoNormal, || {
            format!("(p,t)=({p},{t}): class {}", s.class)
        })?;
        let geom = pseudo_normal_geometry(p, t).map_err(|e| e.to_string())?;
        let inside = verify_containment(&geom, 1000).map_err(|e| e.to_string())?;
        ensure(inside, || format!("(p,t)=({p},{t}): ellipse leaves the quadrilateral"))?;
    }
    within_budget(start.elapsed(), Duration::from_secs(10))?;
    Ok("spread 2+p+t, PseudoNormal, 1000 ellipse samples strictly inside".into())
}

fn order_five_scan() -> Outcome {
    let start = Instant::now();
    let scan = spread_scan(5, Execution::Parallel).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(scan.count == 1 << 20, || format!("visited {}", scan.count))?;
    ensure(scan.max_spread >= 5.034, || format!("max spread {}", scan.max_spread))?;
    ensure(scan.max_wu_excess <= 1e-9, || format!("spread exceeds degree bound by {:e}", scan.max_wu_excess))?;
    ensure(scan.max_spread <= 10.0, || format!("max spread {} above 10", scan.max_spread))?;
    within_budget(elapsed, Duration::from_secs(600))?;
    let arg = Digraph::from_arc_code(5, scan.argmax).unwrap();
    Ok(format!(
        "2^20 digraphs in {elapsed:.1?}: max spread {:.6} (degree bound there {}), max spread - bound {:.3e}",
        scan.max_spread,
        rnr_spread::rnr::wu_bound(&arg),
        scan.max_wu_excess
    ))
}

fn balanced_survey() -> Outcome {
    let mut summary = Vec::new();
    for n in 2..=6usize {
        let codes: Vec<u64> = if n <= 5 {
            let naive: Vec<u64> = (0..1u64 << code_bits(n))
                .filter(|&c| Digraph::from_arc_code(n, c).unwrap().is_balanced(0.0))
                .collect();
            ensure(naive == balanced_codes(n), || format!("n={n}: backtracking disagrees with naive filter"))?;
            naive
        } else {
            balanced_codes(n)
        };
        let q = Restrictor::householder(n).unwrap();
        let spreads = Execution::Parallel
            .try_map(&codes, |&c| {
                alpha_beta_with(&Digraph::from_arc_code(n, c).unwrap(), &q).map(|(a, b)| b - a)
            })
            .map_err(|e| e.to_string())?;
        let nf = n as f64;
        for (&c, &s) in codes.iter().zip(&spreads) {
            ensure(s <= nf - 1.0 + 1e-9, || format!("n={n} code {c:x}: spread {s} > n-1"))?;
            ensure(!(s > 1e-6 && s < 1.0 - 1e-6), || format!("n={n} code {c:x}: spread {s} in gap"))?;
        }
        if n == 3 || n == 5 {
            let complete = Digraph::complete(n).arc_code().unwrap();
            let mut zero = 0;
            let mut tournaments = 0;
            for (&c, &s) in codes.iter().zip(&spreads) {
                let g = Digraph::from_arc_code(n, c).unwrap();
                let regular = is_regular_tournament(&g);
                let trivial = c == 0 || c == complete;
                tournaments += usize::from(regular);
                if s <= 1e-9 {
                    zero += 1;
                    ensure(regular || trivial, || format!("n={n} code {c:x}: spread 0 but not a regular tournament"))?;
                } else {
                    ensure(!regular && !trivial, || format!("n={n} code {c:x}: expected spread 0, got {s}"))?;
                }
            }
            summary.push(format!("n={n}: {tournaments} regular tournaments + empty/complete = {zero} spread-0"));
        }
        summary.push(format!("n={n}: {} balanced", codes.len()));
    }
    Ok(summary.join(", "))
}

fn property_suites() -> Outcome {
    let mut rng = common::rng(7);
    for trial in 0..200 {
        let n = 2 + trial % 7;
        let g = common::random_digraph(&mut rng, n, 0.5);
        let q = Restrictor::householder(n).unwrap();
        let full = eig_general(g.laplacian().matrix()).map_err(|e| e.to_string())?;
        let restricted = eig_general(&restricted_laplacian(&g, &q).unwrap()).map_err(|e| e.to_string())?;
        let with_zero = restricted.with([Complex::new(0.0, 0.0)]).merge_clusters(1e-3);
        let full = full.merge_clusters(1e-3);
        ensure(spectra_match(&full, &with_zero, 1e-8).unwrap(), || format!("spectra differ for {g:?}"))?;

        let u = common::random_orthogonal(&mut rng, n - 1);
        let q2 = Restrictor::from_matrix(q.matrix() * u).map_err(|e| e.to_string())?;
        let (a1, b1) = alpha_beta_with(&g, &q).unwrap();
        let (a2, b2) = alpha_beta_with(&g, &q2).unwrap();
        ensure((a1 - a2).abs() <= 1e-9 && (b1 - b2).abs() <= 1e-9, || "restrictor dependence".into())?;

        let (ac, _) = alpha_beta(&g.complement()).unwrap();
        ensure((a1 + alpha_beta(&g.complement()).unwrap().1 - n as f64).abs() <= 1e-9, || {
            "duality alpha + beta(complement) != n".into()
        })?;
        ensure((ac + b1 - n as f64).abs() <= 1e-9, || "duality alpha(complement) + beta != n".into())?;
    }
    for trial in 0..200 {
        let n = 2 + trial % 7;
        let g = common::random_weighted_balanced(&mut rng, n);
        let x: Vec<f64> = (0..n).map(|_| rand::Rng::random_range(&mut rng, -2.0..2.0)).collect();
        let lhs = quadratic_form(&g, &x).unwrap();
        let rhs = edge_quadratic_form(&g, &x).unwrap();
        ensure((lhs - rhs).abs() <= 1e-10, || format!("quadratic forms {lhs} vs {rhs}"))?;
    }
    let mut min_gap = f64::INFINITY;
    for trial in 0..1000 {
        let n = 3 + trial % 10;
        let (x, y) = common::orthonormal_pair(&mut rng, n);
        let gap = nabla_gap(&x, &y).map_err(|e| e.to_string())?;
        min_gap = min_gap.min(gap);
        ensure(gap >= 2.0 - 1e-9, || format!("gap {gap} < 2 at n={n}"))?;
    }
    Ok(format!("spectra, restrictor invariance, duality, quadratic form; min gap {min_gap:.4}"))
}

fn decomposition_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = common::rng(11);
    let mut max_parts = 0;
    for trial in 0..500 {
        let n = 2 + trial % 6;
        let g = common::random_weighted_balanced(&mut rng, n);
        let fractional = g.weights().iter().filter(|&&w| w > 0.0 && w < 1.0).count();
        let d = balanced_decomposition(&g).map_err(|e| e.to_string())?;
        let err = d.reconstruction_error(&g).unwrap();
        ensure(err <= 1e-10, || format!("trial {trial}: reconstruction error {err:e}"))?;
        for (_, p) in &d.parts {
            ensure(p.is_unweighted() && p.is_balanced(0.0), || format!("trial {trial}: bad part"))?;
        }
        ensure(d.len() <= fractional + 1, || {
            format!("trial {trial}: {} parts for {fractional} fractional arcs", d.len())
        })?;
        max_parts = max_parts.max(d.len());
        let ls = level_set_decomposition(&g);
        let err = ls.reconstruction_error(&g).unwrap();
        ensure(err <= 1e-14, || format!("trial {trial}: level-set error {err:e}"))?;
        let (lhs, rhs) = concavity_check(&d.parts).map_err(|e| e.to_string())?;
        ensure(lhs >= rhs - 1e-9, || format!("trial {trial}: concavity {lhs} < {rhs}"))?;
        let s = spread(&g).unwrap();
        ensure(s <= n as f64 - 1.0 + 1e-8, || format!("trial {trial}: spread {s}"))?;
    }
    within_budget(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("500 digraphs, n = 2..7, at most {max_parts} parts"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("dicycle spreads", dicycle_spreads),
        ("degenerate ranges", degenerate_ranges),
        ("extremal constructions", extremal_constructions),
        ("pseudo-normal family", pseudo_normal_suite),
        ("order-5 exhaustive scan", order_five_scan),
        ("balanced survey", balanced_survey),
        ("property suites", property_suites),
        ("decomposition suite", decomposition_suite),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {} [{name}]: PASS ({t:.2?}) {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL ({t:.2?}) {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
