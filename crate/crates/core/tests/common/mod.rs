//! Random digraph generators shared by the integration tests.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use rnr_spread::{convex_combination, Digraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_digraph(rng: &mut impl Rng, n: usize, density: f64) -> Digraph {
    let arcs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .collect();
    let chosen: Vec<(usize, usize)> = arcs.into_iter().filter(|_| rng.random_bool(density)).collect();
    Digraph::from_arcs(n, &chosen).unwrap()
}

/// Unweighted balanced digraph built from arc-disjoint random cycles.
pub fn random_balanced(rng: &mut impl Rng, n: usize) -> Digraph {
    let mut w = vec![0.0; n * n];
    let attempts = rng.random_range(0..=2 * n);
    for _ in 0..attempts {
        let len = rng.random_range(2..=n);
        let mut verts: Vec<usize> = (0..n).collect();
        verts.shuffle(rng);
        verts.truncate(len);
        let cycle: Vec<(usize, usize)> = (0..len).map(|k| (verts[k], verts[(k + 1) % len])).collect();
        if cycle.iter().all(|&(i, j)| w[i * n + j] == 0.0) {
            for (i, j) in cycle {
                w[i * n + j] = 1.0;
            }
        }
    }
    Digraph::from_weights(n, w).unwrap()
}

/// Convex combination of random unweighted balanced digraphs.
pub fn random_weighted_balanced(rng: &mut impl Rng, n: usize) -> Digraph {
    let k = rng.random_range(2..=4);
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let parts: Vec<(f64, Digraph)> = raw
        .iter()
        .map(|c| (c / total, random_balanced(rng, n)))
        .collect();
    convex_combination(&parts).unwrap()
}

pub fn random_weighted(rng: &mut impl Rng, n: usize) -> Digraph {
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random_bool(0.6) {
                w[i * n + j] = rng.random_range(0.0..=1.0);
            }
        }
    }
    Digraph::from_weights(n, w).unwrap()
}

/// Orthonormal pair of zero-mean vectors.
pub fn orthonormal_pair(rng: &mut impl Rng, n: usize) -> (Vec<f64>, Vec<f64>) {
    let center = |mut v: Vec<f64>| {
        let m = v.iter().sum::<f64>() / n as f64;
        v.iter_mut().for_each(|x| *x -= m);
        v
    };
    let normalize = |mut v: Vec<f64>| {
        let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= s);
        v
    };
    let gauss = |rng: &mut dyn rand::RngCore| -> Vec<f64> {
        (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
    };
    let x = normalize(center(gauss(rng)));
    let mut y = center(gauss(rng));
    let d: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
    y.iter_mut().zip(&x).for_each(|(b, a)| *b -= d * a);
    let y = normalize(center(y));
    (x, y)
}

/// Random orthogonal `k x k` matrix from Gram-Schmidt on a random square.
pub fn random_orthogonal(rng: &mut impl Rng, k: usize) -> nalgebra::DMatrix<f64> {
    let a = nalgebra::DMatrix::from_fn(k, k, |_, _| rng.random_range(-1.0..1.0));
    a.qr().q()
}
