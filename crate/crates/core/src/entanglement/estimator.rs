//! Feasible-point minimization of `S_α(ρ‖σ)` over separable `σ`.
//!
//! `σ = Σ_i p_i |â_i⟩⟨â_i| ⊗ |b̂_i⟩⟨b̂_i|` with `p_i = w_i² / Σ w²` and
//! `â = a/‖a‖`, so every parameter value is a valid separable state. The
//! objective `log Tr ρ^α σ^{1−α} / (α−1)` is minimized by gradient descent
//! with Barzilai–Borwein steps and Armijo backtracking; the gradient in `σ`
//! comes from the Daleckii–Krein formula for `D(σ^{1−α})`.

use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;
use rand::Rng;

use super::{rree_lower, ProductTerm, SeparableDecomposition};
use crate::entropy::{gpow, renyi_entropy, renyi_relative, RenyiOrder};
use crate::linalg::{self, c, CMatrix, CVector};
use crate::numeric::derive_seed;
use crate::qstate::random::{gaussian_vector, rng};
use crate::qstate::{BipartiteSplit, DensityMatrix, SubsystemDims};
use crate::{Error, Result};

/// Armijo sufficient-decrease constant.
const ARMIJO: f64 = 1e-4;
/// Backtracking halvings before a line search counts as failed.
const MAX_HALVINGS: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct RreeConfig {
    /// Product terms in the witness; `None` means `(d_A d_B)²`.
    pub terms_count: Option<usize>,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Weight of `I/d` mixed into the seeded restart.
    pub seed_mix: f64,
}

impl Default for RreeConfig {
    fn default() -> Self {
        Self { terms_count: None, restarts: 4, max_iters: 300, seed: 0, seed_mix: 1e-6 }
    }
}

/// Result of [`rree_estimate`]. `upper_estimate` is `S_α(ρ‖σ)` for the
/// assembled `witness`, so it upper-bounds `E_α`.
#[derive(Debug, Clone)]
pub struct RreeEstimate {
    pub alpha: RenyiOrder,
    pub upper_estimate: f64,
    /// `max{I_α(A⟩B), I_α(B⟩A)}`.
    pub analytic_lower: f64,
    /// `S_{2−α}(A)` when `ρ` is pure.
    pub analytic_upper: Option<f64>,
    pub witness: SeparableDecomposition,
    /// `(iteration, objective)` of the best restart; nonincreasing.
    pub optimizer_trace: Vec<(usize, f64)>,
    /// `α < 1`: the lower bound is not known to be tight there.
    pub weak_regime: bool,
}

/// Final state of one restart.
#[derive(Debug, Clone)]
pub struct RestartOutcome {
    pub index: usize,
    pub terms: Vec<ProductTerm>,
    pub value: f64,
    pub trace: Vec<(usize, f64)>,
    /// The very first line search exhausted its halvings.
    pub first_step_failed: bool,
}

#[derive(Debug, Clone)]
struct Params {
    w: Vec<f64>,
    a: Vec<CVector>,
    b: Vec<CVector>,
}

impl Params {
    fn normalize(&mut self) {
        let total: f64 = self.w.iter().map(|w| w * w).sum();
        let scale = total.sqrt();
        for w in &mut self.w {
            *w /= scale;
        }
        for v in self.a.iter_mut().chain(self.b.iter_mut()) {
            let n = v.norm();
            v.unscale_mut(n);
        }
    }

    fn probabilities(&self) -> Vec<f64> {
        let total: f64 = self.w.iter().map(|w| w * w).sum();
        self.w.iter().map(|w| w * w / total).collect()
    }

    fn axpy(&self, t: f64, g: &Params) -> Params {
        Params {
            w: self.w.iter().zip(&g.w).map(|(x, d)| x - t * d).collect(),
            a: self.a.iter().zip(&g.a).map(|(x, d)| x - d.scale(t)).collect(),
            b: self.b.iter().zip(&g.b).map(|(x, d)| x - d.scale(t)).collect(),
        }
    }

    fn dot(&self, other: &Params) -> f64 {
        let mut s: f64 = self.w.iter().zip(&other.w).map(|(x, y)| x * y).sum();
        for (x, y) in self.a.iter().zip(&other.a).chain(self.b.iter().zip(&other.b)) {
            s += x.dotc(y).re;
        }
        s
    }

    fn diff(&self, other: &Params) -> Params {
        self.axpy(1.0, other)
    }

    fn terms(&self) -> Vec<ProductTerm> {
        let p = self.probabilities();
        p.into_iter()
            .zip(self.a.iter().zip(&self.b))
            .map(|(weight, (a, b))| ProductTerm { weight, a_vec: a.normalize(), b_vec: b.normalize() })
            .collect()
    }
}

/// `(x^s − y^s)/(x − y)`, stable for `x ≈ y`; both arguments positive.
fn divided_difference(x: f64, y: f64, s: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    let t = hi / lo - 1.0;
    if t == 0.0 {
        return s * lo.powf(s - 1.0);
    }
    lo.powf(s - 1.0) * (s * t.ln_1p()).exp_m1() / t
}

struct Evaluation {
    value: f64,
    q: f64,
    mu: Vec<f64>,
    vectors: CMatrix,
    rotated: CMatrix,
}

/// A prepared estimation problem. Restarts are independent, so callers may
/// run [`RreeProblem::run_restart`] concurrently and pass the outcomes, in
/// index order, to [`RreeProblem::finish`].
#[derive(Debug, Clone)]
pub struct RreeProblem {
    rho: DensityMatrix,
    rho_alpha: CMatrix,
    alpha: f64,
    left: SubsystemDims,
    right: SubsystemDims,
    analytic_lower: f64,
    analytic_upper: Option<f64>,
    terms_count: usize,
    seed_terms: Vec<ProductTerm>,
    config: RreeConfig,
}

impl RreeProblem {
    pub fn new(rho: &DensityMatrix, split: &BipartiteSplit, alpha: f64, config: &RreeConfig) -> Result<Self> {
        if !(0.0..=2.0).contains(&alpha) || alpha == 1.0 {
            return Err(Error::AlphaOutOfRange { alpha, range: "[0, 1) ∪ (1, 2]" });
        }
        if config.restarts == 0 || config.max_iters == 0 {
            return Err(Error::InvalidArgument("restarts and max_iters must be positive".into()));
        }
        let ordered = rho.split_ordered(split)?;
        let (left, right) = split.side_dims(rho.dims())?;
        let d = ordered.dim();
        let terms_count = config.terms_count.unwrap_or(d * d);
        if terms_count == 0 {
            return Err(Error::InvalidArgument("terms_count must be positive".into()));
        }
        let analytic_lower = rree_lower(&ordered, &BipartiteSplit::explicit(
            ordered.dims(),
            &left.labels().collect::<Vec<_>>(),
            &right.labels().collect::<Vec<_>>(),
        )?, alpha)?;
        let analytic_upper = if ordered.is_pure() {
            Some(renyi_entropy(&ordered.partial_trace(&left.labels().collect::<Vec<_>>())?, 2.0 - alpha)?)
        } else {
            None
        };
        let seed_terms = product_projection(&ordered, left.total_dim(), right.total_dim());
        Ok(Self {
            rho_alpha: ordered.power(alpha),
            rho: ordered,
            alpha,
            left,
            right,
            analytic_lower,
            analytic_upper,
            terms_count,
            seed_terms,
            config: config.clone(),
        })
    }

    pub fn restarts(&self) -> usize {
        self.config.restarts
    }

    fn dims(&self) -> (usize, usize) {
        (self.left.total_dim(), self.right.total_dim())
    }

    fn random_params<R: Rng>(&self, count: usize, rng: &mut R) -> Params {
        let (da, db) = self.dims();
        let mut p = Params { w: Vec::new(), a: Vec::new(), b: Vec::new() };
        for _ in 0..count {
            p.w.push(0.5 + rng.random::<f64>());
            p.a.push(gaussian_vector(da, rng));
            p.b.push(gaussian_vector(db, rng));
        }
        p.normalize();
        p
    }

    /// `(1 − ε) σ₀ + ε I/d` in product form, padded with faint random terms.
    fn seeded_params<R: Rng>(&self, rng: &mut R) -> Option<Params> {
        let (da, db) = self.dims();
        let eps = self.config.seed_mix;
        let needed = self.seed_terms.len() + if eps > 0.0 { da * db } else { 0 };
        if needed > self.terms_count {
            return None;
        }
        let mut p = Params { w: Vec::new(), a: Vec::new(), b: Vec::new() };
        for t in &self.seed_terms {
            p.w.push(((1.0 - eps) * t.weight).sqrt());
            p.a.push(t.a_vec.clone());
            p.b.push(t.b_vec.clone());
        }
        if eps > 0.0 {
            let w = (eps / (da * db) as f64).sqrt();
            for i in 0..da {
                for j in 0..db {
                    let mut a = CVector::zeros(da);
                    a[i] = c(1.0, 0.0);
                    let mut b = CVector::zeros(db);
                    b[j] = c(1.0, 0.0);
                    p.w.push(w);
                    p.a.push(a);
                    p.b.push(b);
                }
            }
        }
        let filler = self.random_params(self.terms_count - needed, rng);
        let faint = (eps.max(1e-12) * 1e-3).sqrt();
        p.w.extend(filler.w.iter().map(|_| faint / ((self.terms_count - needed).max(1) as f64).sqrt()));
        p.a.extend(filler.a);
        p.b.extend(filler.b);
        p.normalize();
        Some(p)
    }

    fn assemble(&self, params: &Params) -> CMatrix {
        let d = self.rho.dim();
        let probs = params.probabilities();
        let mut sigma = CMatrix::zeros(d, d);
        for (i, &p) in probs.iter().enumerate() {
            let x = linalg::kron_vec(&params.a[i].normalize(), &params.b[i].normalize());
            sigma += linalg::outer(&x).scale(p);
        }
        linalg::hermitize(&sigma)
    }

    fn evaluate(&self, params: &Params) -> Evaluation {
        let sigma = self.assemble(params);
        let eig = linalg::herm_eigen(&sigma);
        let cut = eig.cutoff();
        let mu: Vec<f64> = eig.values.iter().map(|&m| m.max(0.0)).collect();
        let rotated = eig.vectors.adjoint() * &self.rho_alpha * &eig.vectors;
        let s = 1.0 - self.alpha;
        let d = mu.len() as f64;
        let mut q = 0.0;
        let mut outside = 0.0;
        for (j, &m) in mu.iter().enumerate() {
            let r = rotated[(j, j)].re;
            if m > cut {
                q += gpow(m, s) * r;
            } else {
                outside += r;
            }
        }
        let value = if self.alpha > 1.0 && outside > d * 1e-12 {
            f64::INFINITY
        } else if q > 0.0 {
            q.log2() / (self.alpha - 1.0)
        } else if q == 0.0 {
            f64::INFINITY
        } else {
            f64::NAN
        };
        Evaluation { value, q, mu, vectors: eig.vectors, rotated }
    }

    fn gradient(&self, params: &Params, ev: &Evaluation) -> Params {
        let (da, db) = self.dims();
        let s = 1.0 - self.alpha;
        let floor = ev.mu.iter().copied().fold(0.0, f64::max) * 1e-14;
        let mu: Vec<f64> = ev.mu.iter().map(|&m| m.max(floor).max(f64::MIN_POSITIVE)).collect();
        let n = mu.len();
        let mut inner = CMatrix::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                inner[(j, k)] = ev.rotated[(j, k)] * divided_difference(mu[j], mu[k], s);
            }
        }
        let scale = 1.0 / (ev.q * (self.alpha - 1.0) * core::f64::consts::LN_2);
        let g = (&ev.vectors * inner * ev.vectors.adjoint()).scale(scale);

        let probs = params.probabilities();
        let total_w: f64 = params.w.iter().map(|w| w * w).sum();
        let mut out = Params { w: Vec::new(), a: Vec::new(), b: Vec::new() };
        let mut gi = Vec::with_capacity(probs.len());
        for i in 0..probs.len() {
            let (na, nb) = (params.a[i].norm(), params.b[i].norm());
            let ah = params.a[i].unscale(na);
            let bh = params.b[i].unscale(nb);
            let x = linalg::kron_vec(&ah, &bh);
            let u = &g * &x;
            let h = x.dotc(&u).re;
            let mut ma = CVector::zeros(da);
            let mut mb = CVector::zeros(db);
            for k in 0..da {
                for l in 0..db {
                    let ukl = u[k * db + l];
                    ma[k] += bh[l].conj() * ukl;
                    mb[l] += ah[k].conj() * ukl;
                }
            }
            out.a.push((ma - ah.scale(h)).scale(2.0 * probs[i] / na));
            out.b.push((mb - bh.scale(h)).scale(2.0 * probs[i] / nb));
            gi.push(h);
        }
        let mean: f64 = probs.iter().zip(&gi).map(|(p, g)| p * g).sum();
        out.w = params.w.iter().zip(&gi).map(|(w, g)| 2.0 * w / total_w * (g - mean)).collect();
        out
    }

    /// Gradient of the objective, exposed for finite-difference checks.
    #[doc(hidden)]
    pub fn objective_and_gradient(&self, terms: &[ProductTerm]) -> (f64, Vec<f64>) {
        let params = Params {
            w: terms.iter().map(|t| t.weight.sqrt()).collect(),
            a: terms.iter().map(|t| t.a_vec.clone()).collect(),
            b: terms.iter().map(|t| t.b_vec.clone()).collect(),
        };
        let ev = self.evaluate(&params);
        let g = self.gradient(&params, &ev);
        let mut flat = g.w.clone();
        for v in g.a.iter().chain(&g.b) {
            for z in v.iter() {
                flat.push(z.re);
                flat.push(z.im);
            }
        }
        (ev.value, flat)
    }

    /// Objective at an unnormalized parameter vector laid out as in
    /// [`RreeProblem::objective_and_gradient`].
    #[doc(hidden)]
    pub fn objective_at(&self, flat: &[f64], count: usize) -> f64 {
        let (da, db) = self.dims();
        let w = flat[..count].to_vec();
        let mut pos = count;
        let mut take = |len: usize| {
            let v = CVector::from_fn(len, |i, _| c(flat[pos + 2 * i], flat[pos + 2 * i + 1]));
            pos += 2 * len;
            v
        };
        let a = (0..count).map(|_| take(da)).collect();
        let b = (0..count).map(|_| take(db)).collect();
        self.evaluate(&Params { w, a, b }).value
    }

    /// Run restart `index`. Restart 0 starts from the mixed product
    /// projection of `ρ`; the others from random product ensembles.
    pub fn run_restart(&self, index: usize) -> Result<RestartOutcome> {
        let mut rng = rng(derive_seed(self.config.seed, index as u64));
        let mut params = if index == 0 {
            self.seeded_params(&mut rng).unwrap_or_else(|| self.random_params(self.terms_count, &mut rng))
        } else {
            self.random_params(self.terms_count, &mut rng)
        };
        let mut ev = self.evaluate(&params);
        if ev.value.is_nan() {
            return Err(Error::OptimizerDiverged("objective is NaN at the starting point".into()));
        }
        let mut trace = alloc::vec![(0, ev.value)];
        let mut first_step_failed = false;
        if !ev.value.is_finite() {
            return Ok(RestartOutcome { index, terms: params.terms(), value: ev.value, trace, first_step_failed });
        }
        let mut grad = self.gradient(&params, &ev);
        let mut step = 1.0;
        let mut prev: Option<(Params, Params)> = None;
        for iter in 1..=self.config.max_iters {
            let gnorm2 = grad.dot(&grad);
            if !(gnorm2 > 1e-24) {
                break;
            }
            if let Some((dp, dg)) = &prev {
                let sy = dp.dot(dg);
                if sy > 0.0 {
                    step = (dp.dot(dp) / sy).clamp(1e-10, 1e6);
                }
            }
            let mut t = step;
            let mut accepted = None;
            for _ in 0..MAX_HALVINGS {
                let trial = params.axpy(t, &grad);
                let tv = self.evaluate(&trial);
                if tv.value.is_nan() {
                    return Err(Error::OptimizerDiverged("objective became NaN".into()));
                }
                if tv.value <= ev.value - ARMIJO * t * gnorm2 {
                    accepted = Some((trial, tv));
                    break;
                }
                t *= 0.5;
            }
            let Some((mut next, next_ev)) = accepted else {
                first_step_failed = iter == 1;
                break;
            };
            next.normalize();
            let next_grad = self.gradient(&next, &next_ev);
            let decrease = ev.value - next_ev.value;
            prev = Some((next.diff(&params), next_grad.diff(&grad)));
            params = next;
            ev = next_ev;
            grad = next_grad;
            trace.push((iter, ev.value));
            if decrease <= 1e-13 * ev.value.abs().max(1.0) {
                break;
            }
        }
        Ok(RestartOutcome { index, terms: params.terms(), value: ev.value, trace, first_step_failed })
    }

    fn decomposition(&self, terms: &[ProductTerm]) -> Result<SeparableDecomposition> {
        let kept: Vec<ProductTerm> = terms.iter().filter(|t| t.weight > 1e-15).cloned().collect();
        let total: f64 = kept.iter().map(|t| t.weight).sum();
        let kept = kept.into_iter().map(|t| ProductTerm { weight: t.weight / total, ..t }).collect();
        SeparableDecomposition::new(self.left.clone(), self.right.clone(), kept)
    }

    fn exact_value(&self, witness: &SeparableDecomposition) -> Result<f64> {
        Ok(renyi_relative(&self.rho, &witness.assemble()?, self.alpha)?.value())
    }

    /// Pick the best of every restart and the unmixed product projection,
    /// re-evaluating each candidate exactly from its assembled witness.
    pub fn finish(&self, outcomes: Vec<RestartOutcome>) -> Result<RreeEstimate> {
        if outcomes.iter().all(|o| o.first_step_failed) && !outcomes.is_empty() {
            return Err(Error::OptimizerDiverged("line search failed on the first step of every restart".into()));
        }
        let mut best: Option<(f64, SeparableDecomposition, Vec<(usize, f64)>)> = None;
        let seed = self.decomposition(&self.seed_terms)?;
        let seed_value = self.exact_value(&seed)?;
        if seed_value.is_finite() {
            best = Some((seed_value, seed, Vec::new()));
        }
        let mut best_trace: Option<Vec<(usize, f64)>> = None;
        let mut best_restart = f64::INFINITY;
        for o in outcomes {
            if o.value < best_restart {
                best_restart = o.value;
                best_trace = Some(o.trace.clone());
            }
            let witness = self.decomposition(&o.terms)?;
            let v = self.exact_value(&witness)?;
            if v.is_nan() {
                return Err(Error::OptimizerDiverged("witness evaluates to NaN".into()));
            }
            if v.is_finite() && best.as_ref().is_none_or(|(b, _, _)| v < *b) {
                best = Some((v, witness, Vec::new()));
            }
        }
        let (upper_estimate, witness, _) = best.ok_or(Error::SupportIncompatible)?;
        let mut optimizer_trace = best_trace.unwrap_or_default();
        if let Some(&(last_iter, last)) = optimizer_trace.last() {
            if upper_estimate < last {
                optimizer_trace.push((last_iter + 1, upper_estimate));
            }
        }
        Ok(RreeEstimate {
            alpha: RenyiOrder::new(self.alpha)?,
            upper_estimate,
            analytic_lower: self.analytic_lower,
            analytic_upper: self.analytic_upper,
            witness,
            optimizer_trace,
            weak_regime: self.alpha < 1.0,
        })
    }
}

/// `ρ` dephased in a product basis: the Schmidt bases when `ρ` is pure, the
/// local eigenbases otherwise. Always a separable state containing `supp ρ`.
fn product_projection(rho: &DensityMatrix, da: usize, db: usize) -> Vec<ProductTerm> {
    let mut terms = Vec::new();
    if rho.is_pure() {
        let v = rho.eigen().vectors.column(0).into_owned();
        let m = CMatrix::from_fn(da, db, |i, j| v[i * db + j]);
        let svd = m.svd(true, true);
        let (u, vt) = (svd.u.unwrap_or_default(), svd.v_t.unwrap_or_default());
        for (k, &s) in svd.singular_values.iter().enumerate() {
            if s * s > 1e-15 {
                let a = u.column(k).into_owned();
                // M = U S V†, so the right Schmidt vector is the k-th row of V†
                let b = CVector::from_fn(db, |j, _| vt[(k, j)]);
                terms.push(ProductTerm { weight: s * s, a_vec: a, b_vec: b });
            }
        }
    } else {
        let ra = linalg::herm_eigen(&linalg::trace_out_second(rho.matrix(), da, db));
        let rb = linalg::herm_eigen(&linalg::trace_out_first(rho.matrix(), da, db));
        for i in 0..da {
            for j in 0..db {
                let a = ra.vectors.column(i).into_owned();
                let b = rb.vectors.column(j).into_owned();
                let x = linalg::kron_vec(&a, &b);
                let q = x.dotc(&(rho.matrix() * &x)).re;
                if q > 1e-15 {
                    terms.push(ProductTerm { weight: q, a_vec: a, b_vec: b });
                }
            }
        }
    }
    let total: f64 = terms.iter().map(|t| t.weight).sum();
    for t in &mut terms {
        t.weight /= total;
    }
    terms
}

/// Sequential [`RreeProblem`] driver.
pub fn rree_estimate(rho: &DensityMatrix, split: &BipartiteSplit, alpha: f64, config: &RreeConfig) -> Result<RreeEstimate> {
    let problem = RreeProblem::new(rho, split, alpha, config)?;
    let outcomes = (0..problem.restarts()).map(|i| problem.run_restart(i)).collect::<Result<Vec<_>>>()?;
    problem.finish(outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::random::{random_density, random_separable};
    use crate::qstate::PureState;

    fn split_of(rho: &DensityMatrix) -> BipartiteSplit {
        BipartiteSplit::new(rho.dims(), &["A"]).unwrap()
    }

    #[test]
    fn divided_difference_limits() {
        assert!((divided_difference(2.0, 2.0, -0.5) - (-0.5 * 2f64.powf(-1.5))).abs() < 1e-15);
        let (x, y, s) = (0.3, 0.2, -0.7);
        let direct = (x.powf(s) - y.powf(s)) / (x - y);
        assert!((divided_difference(x, y, s) - direct).abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let rho = random_density(SubsystemDims::ab(2, 2).unwrap(), 3, 4).unwrap();
        for alpha in [0.5, 1.5, 2.0] {
            let config = RreeConfig { terms_count: Some(5), ..RreeConfig::default() };
            let problem = RreeProblem::new(&rho, &split_of(&rho), alpha, &config).unwrap();
            let mut r = rng(9);
            let params = problem.random_params(5, &mut r);
            let terms: Vec<ProductTerm> = params.terms();
            let (_, grad) = problem.objective_and_gradient(&terms);
            let mut flat: Vec<f64> = terms.iter().map(|t| t.weight.sqrt()).collect();
            for v in terms.iter().map(|t| &t.a_vec).chain(terms.iter().map(|t| &t.b_vec)) {
                for z in v.iter() {
                    flat.push(z.re);
                    flat.push(z.im);
                }
            }
            let h = 1e-6;
            for k in 0..flat.len() {
                let mut up = flat.clone();
                up[k] += h;
                let mut down = flat.clone();
                down[k] -= h;
                let fd = (problem.objective_at(&up, 5) - problem.objective_at(&down, 5)) / (2.0 * h);
                assert!((fd - grad[k]).abs() < 1e-6, "α={alpha} k={k}: fd {fd} vs {}", grad[k]);
            }
        }
    }

    #[test]
    fn bell_state_collapses() {
        let phi = PureState::maximally_entangled(2).unwrap().density();
        let est = rree_estimate(&phi, &split_of(&phi), 2.0, &RreeConfig::default()).unwrap();
        assert!((est.upper_estimate - 1.0).abs() < 1e-4);
        assert_eq!(est.analytic_upper.map(|u| (u - 1.0).abs() < 1e-12), Some(true));
        assert!(est.optimizer_trace.windows(2).all(|w| w[1].1 <= w[0].1));
    }

    #[test]
    fn separable_input_gives_zero() {
        let mut r = rng(21);
        let rho = random_separable(2, 2, 4, &mut r).unwrap();
        let est = rree_estimate(&rho, &split_of(&rho), 1.5, &RreeConfig::default()).unwrap();
        assert!(est.upper_estimate <= 1e-6, "{}", est.upper_estimate);
    }

    #[test]
    fn witness_reproduces_estimate() {
        let rho = random_density(SubsystemDims::ab(2, 2).unwrap(), 2, 17).unwrap();
        let est = rree_estimate(&rho, &split_of(&rho), 1.25, &RreeConfig::default()).unwrap();
        let v = renyi_relative(&rho, &est.witness.assemble().unwrap(), 1.25).unwrap().value();
        assert!((v - est.upper_estimate).abs() < 1e-9);
        assert!(est.upper_estimate >= est.analytic_lower - 1e-9);
    }

    #[test]
    fn rejects_alpha_one() {
        let phi = PureState::maximally_entangled(2).unwrap().density();
        assert!(matches!(
            rree_estimate(&phi, &split_of(&phi), 1.0, &RreeConfig::default()),
            Err(Error::AlphaOutOfRange { .. })
        ));
    }
}
