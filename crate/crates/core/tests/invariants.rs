use proptest::prelude::*;
use renyi_converse_core::converse::ConverseProblem;
use renyi_converse_core::entropy::{
    coherent_information_renyi, renyi_entropy, renyi_relative, sibson_minimizer, sibson_objective,
};
use renyi_converse_core::protocols::{concentrate_simulate, schumacher_mass, SpectrumTypeClass};
use renyi_converse_core::qstate::random::{random_density_with, random_probabilities, random_pure_with, rng};
use renyi_converse_core::qstate::{fidelity, BipartiteSplit, DensityMatrix, SubsystemDims};

use num_bigint::BigUint;

const ORDERS: [f64; 8] = [0.0, 0.3, 0.5, 0.9, 1.0, 1.5, 2.0, f64::INFINITY];

fn state(seed: u64, d: usize, full_rank: bool) -> DensityMatrix {
    let mut r = rng(seed);
    let rank = if full_rank { d } else { 1 + (seed as usize % d) };
    random_density_with(SubsystemDims::single("A", d).unwrap(), rank, &mut r).unwrap()
}

fn bipartite(seed: u64, da: usize, db: usize) -> DensityMatrix {
    let dims = SubsystemDims::ab(da, db).unwrap();
    let rank = 1 + (seed as usize % (da * db));
    random_density_with(dims, rank, &mut rng(seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropy_is_bounded_and_nonincreasing_in_order(seed in any::<u64>(), d in 2usize..6) {
        let rho = state(seed, d, false);
        let mut last = f64::INFINITY;
        for alpha in ORDERS {
            let s = renyi_entropy(&rho, alpha).unwrap();
            prop_assert!(s >= -1e-12 && s <= (d as f64).log2() + 1e-12);
            prop_assert!(s <= last + 1e-10, "S_{alpha} = {s} > {last}");
            last = s;
        }
    }

    #[test]
    fn entropy_is_additive(seed in any::<u64>(), d1 in 2usize..4, d2 in 2usize..4) {
        let a = state(seed, d1, false);
        let b = state(seed ^ 0x5555, d2, false).relabeled(&[("A", "B")]).unwrap();
        let ab = a.tensor(&b);
        for alpha in ORDERS {
            let sum = renyi_entropy(&a, alpha).unwrap() + renyi_entropy(&b, alpha).unwrap();
            prop_assert!((renyi_entropy(&ab, alpha).unwrap() - sum).abs() < 1e-9);
        }
    }

    #[test]
    fn divergence_is_nonnegative_and_nondecreasing(seed in any::<u64>(), d in 2usize..5) {
        let rho = state(seed, d, false);
        let sigma = state(seed.wrapping_add(1), d, true);
        let mut last = f64::NEG_INFINITY;
        for alpha in [0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0] {
            let v = renyi_relative(&rho, &sigma, alpha).unwrap().value();
            prop_assert!(v >= -1e-9);
            prop_assert!(v >= last - 1e-9, "alpha {alpha}: {v} < {last}");
            last = v;
        }
        let full = state(seed, d, true);
        for alpha in [0.5, 1.0, 1.5, 2.0] {
            prop_assert!(renyi_relative(&full, &full, alpha).unwrap().value().abs() < 1e-9);
        }
    }

    #[test]
    fn fidelity_is_symmetric_and_bounded(seed in any::<u64>(), d in 2usize..5) {
        let rho = state(seed, d, false);
        let sigma = state(seed.wrapping_mul(3), d, false);
        let f = fidelity(&rho, &sigma).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-9).contains(&f));
        prop_assert!((f - fidelity(&sigma, &rho).unwrap()).abs() < 1e-8, "{f} vs {}", fidelity(&sigma, &rho).unwrap());
        prop_assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn coherent_information_of_pure_state(seed in any::<u64>(), da in 2usize..4, db in 2usize..4) {
        let psi = random_pure_with(SubsystemDims::ab(da, db).unwrap(), &mut rng(seed));
        let split = BipartiteSplit::new(psi.dims(), &["A"]).unwrap();
        let a = psi.marginal(&["A"]).unwrap();
        for alpha in [0.5, 0.9, 1.25, 1.5, 2.0] {
            let i = coherent_information_renyi(&psi.density(), &split, alpha).unwrap();
            prop_assert!((i - renyi_entropy(&a, 1.0 / alpha).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn sibson_point_is_optimal(seed in any::<u64>(), alpha in prop::sample::select(vec![0.5, 0.8, 1.3, 2.0])) {
        let rho = bipartite(seed, 2, 3);
        let split = BipartiteSplit::new(rho.dims(), &["A"]).unwrap();
        let (star, value) = sibson_minimizer(&rho, &split, alpha).unwrap();
        // the minimum of S_α(ρ‖σ_A ⊗ I) is I_α(A⟩B)
        let at_star = sibson_objective(&rho, &split, &star, alpha).unwrap().value();
        prop_assert!((at_star - value).abs() < 1e-8, "{at_star} vs {value}");
        for k in 0..4 {
            let other = state(seed.wrapping_add(k), 2, true);
            prop_assert!(sibson_objective(&rho, &split, &other, alpha).unwrap().value() >= at_star - 1e-9);
        }
    }

    #[test]
    fn multiplicities_sum_to_all_strings(seed in any::<u64>(), d in 2usize..5, n in 1u64..40) {
        let p = random_probabilities(d, &mut rng(seed));
        let t = SpectrumTypeClass::new(&p, n).unwrap();
        prop_assert_eq!(t.total_multiplicity(), BigUint::from(d).pow(n as u32));
        prop_assert!((t.total_mass() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn kept_mass_grows_with_rate(seed in any::<u64>(), d in 2usize..4, n in 1u64..30) {
        let p = random_probabilities(d, &mut rng(seed));
        let max = (d as f64).log2();
        let mut last = 0.0;
        for i in 0..=16 {
            let r = schumacher_mass(&p, n, max * i as f64 / 16.0).unwrap();
            prop_assert!((0.0..=1.0).contains(&r.eta));
            prop_assert!(r.eta >= last - 1e-12);
            prop_assert!((r.fidelity_lower - r.eta.sqrt()).abs() < 1e-15);
            last = r.eta;
        }
        prop_assert_eq!(last, 1.0);
    }

    #[test]
    fn concentration_fidelity_dominates_success(seed in any::<u64>(), n in 1u64..200, rate in 0.0f64..1.2) {
        let p = random_probabilities(2, &mut rng(seed));
        let r = concentrate_simulate(&p, n, rate * n as f64).unwrap();
        let success = r.success_prob.unwrap();
        prop_assert!(success <= r.fidelity_lower + 1e-12 && r.fidelity_lower <= 1.0);
    }

    #[test]
    fn converse_exponent_is_affine_in_copies(seed in any::<u64>(), n in 1u64..500, rate in 0.0f64..1.0) {
        let p = random_probabilities(2, &mut rng(seed));
        let one = ConverseProblem::schumacher_spectrum(p.clone(), 1, rate).unwrap().evaluate(0.75).unwrap();
        let many = ConverseProblem::schumacher_spectrum(p, n, rate * n as f64).unwrap().evaluate(0.75).unwrap();
        prop_assert!((one.exponent_per_copy - many.exponent_per_copy).abs() < 1e-12);
        prop_assert_eq!(many.log_fidelity_bound, n as f64 * many.exponent_per_copy);
    }
}
