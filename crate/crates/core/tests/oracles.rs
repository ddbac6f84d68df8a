//! Cross-checks against independent dense and brute-force evaluations.
//!
//! The matrix oracles work on the real symmetric embedding
//! `[[Re H, −Im H], [Im H, Re H]]` with nalgebra's real eigensolver, so they
//! share no code path with the complex routines under test.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use renyi_converse_core::entropy::{coherent_information_renyi, relative_entropy, renyi_relative};
use renyi_converse_core::linalg::CMatrix;
use renyi_converse_core::protocols::{concentrate_simulate, schumacher_exact_small, schumacher_mass};
use renyi_converse_core::qstate::random::{random_density_with, random_probabilities, rng};
use renyi_converse_core::qstate::{fidelity, BipartiteSplit, DensityMatrix, SubsystemDims};

fn realify(h: &CMatrix) -> DMatrix<f64> {
    let n = h.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = h[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// `f(H)` through the real embedding.
fn apply(h: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let n = h.nrows();
    let eig = SymmetricEigen::new(realify(h));
    let lam = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| if x > 1e-13 { f(x) } else { 0.0 }));
    let m = &eig.eigenvectors * lam * eig.eigenvectors.transpose();
    CMatrix::from_fn(n, n, |i, j| Complex64::new(m[(i, j)], m[(i + n, j)]))
}

fn tr(m: &CMatrix) -> f64 {
    m.trace().re
}

fn petz(rho: &CMatrix, sigma: &CMatrix, alpha: f64) -> f64 {
    let q = tr(&(apply(rho, |x| x.powf(alpha)) * apply(sigma, |x| x.powf(1.0 - alpha))));
    q.log2() / (alpha - 1.0)
}

fn umegaki(rho: &CMatrix, sigma: &CMatrix) -> f64 {
    tr(&(rho * (apply(rho, f64::log2) - apply(sigma, f64::log2))))
}

fn trace_out_b(m: &CMatrix, da: usize, db: usize) -> CMatrix {
    CMatrix::from_fn(da, da, |i, j| (0..db).map(|b| m[(i * db + b, j * db + b)]).sum())
}

fn states(seed: u64, dims: SubsystemDims) -> (DensityMatrix, DensityMatrix) {
    let mut r = rng(seed);
    let d = dims.total_dim();
    let rho = random_density_with(dims.clone(), d, &mut r).unwrap();
    let sigma = random_density_with(dims, d, &mut r).unwrap();
    (rho, sigma)
}

#[test]
fn petz_divergence_matches_dense() {
    for seed in 0..40 {
        let d = 2 + seed as usize % 4;
        let (rho, sigma) = states(seed, SubsystemDims::single("A", d).unwrap());
        for alpha in [0.0001, 0.3, 0.5, 0.8, 1.2, 1.5, 2.0] {
            let ours = renyi_relative(&rho, &sigma, alpha).unwrap().value();
            let dense = petz(rho.matrix(), sigma.matrix(), alpha);
            assert!((ours - dense).abs() < 1e-9, "seed {seed} α {alpha}: {ours} vs {dense}");
        }
        let ours = relative_entropy(&rho, &sigma).unwrap().value();
        assert!((ours - umegaki(rho.matrix(), sigma.matrix())).abs() < 1e-9);
    }
}

#[test]
fn fidelity_matches_dense() {
    for seed in 0..40 {
        let (rho, sigma) = states(seed, SubsystemDims::single("A", 2 + seed as usize % 4).unwrap());
        let root = apply(sigma.matrix(), f64::sqrt);
        let dense = tr(&apply(&(&root * rho.matrix() * &root), f64::sqrt));
        assert!((fidelity(&rho, &sigma).unwrap() - dense).abs() < 1e-10);
    }
}

#[test]
fn coherent_information_matches_dense() {
    for seed in 0..30 {
        let (da, db) = [(2, 2), (2, 3), (3, 2)][seed as usize % 3];
        let dims = SubsystemDims::ab(da, db).unwrap();
        let rank = 1 + seed as usize % (da * db);
        let rho = random_density_with(dims.clone(), rank, &mut rng(seed)).unwrap();
        let split = BipartiteSplit::new(&dims, &["A"]).unwrap();
        for alpha in [0.5, 0.75, 1.25, 2.0] {
            let x = trace_out_b(&apply(rho.matrix(), |v| v.powf(alpha)), da, db);
            let dense = alpha / (alpha - 1.0) * tr(&apply(&x, |v| v.powf(1.0 / alpha))).log2();
            let ours = coherent_information_renyi(&rho, &split, alpha).unwrap();
            assert!((ours - dense).abs() < 1e-9, "seed {seed} α {alpha}: {ours} vs {dense}");
        }
    }
}

/// Every string probability of `p^{⊗n}`, with its counts key.
fn strings(p: &[f64], n: u32) -> Vec<(f64, Vec<u32>)> {
    let d = p.len();
    (0..d.pow(n))
        .map(|mut x| {
            let mut counts = vec![0u32; d];
            let mut prob = 1.0;
            for _ in 0..n {
                counts[x % d] += 1;
                prob *= p[x % d];
                x /= d;
            }
            (prob, counts)
        })
        .collect()
}

#[test]
fn schumacher_matches_sorted_strings() {
    for seed in 0..12 {
        let d = 2 + seed as usize % 2;
        let n = if d == 2 { 12 } else { 7 };
        let p = random_probabilities(d, &mut rng(seed));
        let mut probs: Vec<f64> = strings(&p, n).into_iter().map(|s| s.0).collect();
        probs.sort_by(|a, b| b.total_cmp(a));
        for rate in [0.1, 0.37, 0.5, 0.81] {
            let keep = (n as f64 * rate).exp2().floor() as usize;
            let brute: f64 = probs[..keep].iter().sum();
            let ours = schumacher_mass(&p, n as u64, rate).unwrap().eta;
            assert!((ours - brute).abs() < 1e-12, "seed {seed} R {rate}: {ours} vs {brute}");
        }
    }
}

#[test]
fn ten_copies_at_half_rate_by_brute_force() {
    let mut probs: Vec<f64> = strings(&[0.9, 0.1], 10).into_iter().map(|s| s.0).collect();
    probs.sort_by(|a, b| b.total_cmp(a));
    let brute: f64 = probs[..32].iter().sum();
    assert!((schumacher_mass(&[0.9, 0.1], 10, 0.5).unwrap().eta - brute).abs() < 1e-14);
}

#[test]
fn concentration_matches_grouped_strings() {
    for seed in 0..10 {
        let p = random_probabilities(2 + seed as usize % 2, &mut rng(seed));
        let n = 9;
        let mut groups: BTreeMap<Vec<u32>, (f64, f64)> = BTreeMap::new();
        for (prob, counts) in strings(&p, n) {
            let e = groups.entry(counts).or_default();
            e.0 += 1.0;
            e.1 += prob;
        }
        for log_l in [0.0, 2.0, 4.5, 7.0] {
            let l = f64::exp2(log_l).floor();
            let fid: f64 = groups.values().map(|(m, q)| q * (m / l).sqrt().min(1.0)).sum();
            let success: f64 = groups.values().filter(|(m, _)| *m >= l).map(|(_, q)| q).sum();
            let ours = concentrate_simulate(&p, n as u64, log_l).unwrap();
            assert!((ours.fidelity_lower - fid).abs() < 1e-12);
            assert!((ours.success_prob.unwrap() - success).abs() < 1e-12);
        }
    }
}

#[test]
fn exact_small_sits_between_mass_and_its_root() {
    for seed in 0..20 {
        let rho = random_density_with(SubsystemDims::single("A", 2).unwrap(), 2, &mut rng(seed)).unwrap();
        let n = 1 + seed % 6;
        let rate = (seed as f64 * 0.37) % 1.0;
        let r = schumacher_exact_small(&rho, n, rate).unwrap();
        let f = r.fidelity_exact.unwrap();
        assert!(f >= r.eta - 1e-9 && f <= r.fidelity_lower + 1e-9, "seed {seed}: {f} vs η {}", r.eta);
    }
}
