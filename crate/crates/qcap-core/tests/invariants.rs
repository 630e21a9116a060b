//! Cross-module invariants, checked on random instances.
//!
//! Instances are built from a proptest-chosen seed so shrinking reports a
//! seed that regenerates the failing matrix.

use proptest::prelude::*;
use qcap_core::bounds::{fidelity_upper_bound, sc_exponent_from_values};
use qcap_core::channel::QuantumChannel;
use qcap_core::divergence::{rel_entropy, sandwiched_renyi, Order};
use qcap_core::linalg::{herm_eig, kron, partial_trace, partial_transpose, permute_subsystems, trace_norm};
use qcap_core::ppt::{
    is_ppt_prime, max_entangled_overlap, project_ppt_prime_with, rains_rel_entropy,
    rains_rel_entropy_from, InnerConfig, ProjectionConfig,
};
use qcap_core::state::DensityOperator;
use qcap_core::{random, ComplexMatrix, HermitianOperator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn state(d: usize, rank: usize, r: &mut ChaCha8Rng) -> DensityOperator {
    DensityOperator::new(random::density(d, rank, r), vec![d]).unwrap()
}

fn order_of(k: u8) -> Order {
    match k % 4 {
        0 => Order::LimitOne,
        1 => Order::Renyi(1.3),
        2 => Order::Renyi(2.0),
        _ => Order::Renyi(5.0),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigendecomposition_reconstructs(seed: u64, n in 1usize..=16, scale in 1e-3f64..1e3) {
        let m = random::hermitian(n, &mut rng(seed)).scale(scale);
        let e = herm_eig(&m);
        let norm = m.as_matrix().frobenius_norm();
        let recon = (e.reconstruct().as_matrix() - m.as_matrix()).frobenius_norm();
        prop_assert!(recon <= 1e-9 * norm.max(1.0), "reconstruction error {recon:e}");
        let gram = e.vectors.adjoint().matmul(&e.vectors);
        let ortho = (&gram - &ComplexMatrix::identity(n)).frobenius_norm();
        prop_assert!(ortho <= 1e-9, "‖V†V − I‖ = {ortho:e}");
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn trace_norm_bounds_trace(seed: u64, n in 1usize..=8) {
        let h = random::hermitian(n, &mut rng(seed));
        prop_assert!(trace_norm(&h) + 1e-12 >= h.trace_re().abs());
        let sum_abs: f64 = herm_eig(&h).values.iter().map(|v| v.abs()).sum();
        prop_assert!((trace_norm(&h) - sum_abs).abs() <= 1e-10 * sum_abs.max(1.0));
    }

    #[test]
    fn partial_transpose_is_an_isometric_involution(seed: u64, da in 1usize..=3, db in 1usize..=3) {
        let n = da * db;
        let m = random::ginibre(n, n, &mut rng(seed));
        let t = partial_transpose(&m, [da, db]).unwrap();
        prop_assert!((t.trace() - m.trace()).norm() <= 1e-12);
        prop_assert!((t.frobenius_norm() - m.frobenius_norm()).abs() <= 1e-12);
        prop_assert!(partial_transpose(&t, [da, db]).unwrap().max_abs_diff(&m) == 0.0);
    }

    #[test]
    fn random_channels_are_cptp(seed: u64, d_in in 1usize..=3, d_out in 1usize..=3, k in 1usize..=4) {
        let mut r = rng(seed);
        let n = QuantumChannel::random(d_in, d_out, k, &mut r);
        let v = n.validate();
        prop_assert!(v.valid, "{v:?}");
        let choi = n.choi().op().as_matrix().clone();
        let ptr = partial_trace(&choi, [d_in, d_out], 0).unwrap();
        let id = ComplexMatrix::identity(d_in).scale(1.0 / d_in as f64);
        prop_assert!(ptr.max_abs_diff(&id) <= 1e-10);
        let rho = state(d_in, d_in, &mut r);
        let out = n.apply(&rho, 0).unwrap();
        prop_assert!((out.op().trace_re() - 1.0).abs() <= 1e-10);
        prop_assert!(herm_eig(out.op()).min_value() >= -1e-10);
    }

    #[test]
    fn data_processing(seed: u64, k: u8, d_in in 2usize..=3, d_out in 1usize..=3, kraus in 1usize..=3) {
        let mut r = rng(seed);
        let n = QuantumChannel::random(d_in, d_out, kraus, &mut r);
        let rank = r.random_range(1..=d_in);
        let rho = state(d_in, rank, &mut r);
        let sigma = state(d_in, d_in, &mut r);
        let order = order_of(k);
        let before = sandwiched_renyi(&rho, sigma.op(), order).unwrap().value;
        let after = sandwiched_renyi(
            &n.apply(&rho, 0).unwrap(),
            n.apply(&sigma, 0).unwrap().op(),
            order,
        )
        .unwrap()
        .value;
        prop_assert!(after <= before + 1e-7, "{order}: {after} > {before}");
    }

    #[test]
    fn renyi_increases_with_order(seed: u64, d in 2usize..=4) {
        let mut r = rng(seed);
        let rank = r.random_range(1..=d);
        let rho = state(d, rank, &mut r);
        let sigma = state(d, d, &mut r);
        let mut prev = rel_entropy(&rho, sigma.op()).unwrap().value;
        for a in [1.01, 1.2, 1.5, 2.0, 3.0, 8.0] {
            let v = sandwiched_renyi(&rho, sigma.op(), Order::Renyi(a)).unwrap().value;
            prop_assert!(v >= prev - 1e-7, "α = {a}: {v} < {prev}");
            prev = v;
        }
    }

    #[test]
    fn tensoring_a_common_state_changes_nothing(seed: u64, k: u8) {
        let mut r = rng(seed);
        let (rho, sigma, tau) = (state(2, 1, &mut r), state(2, 2, &mut r), state(3, 3, &mut r));
        let order = order_of(k);
        let a = sandwiched_renyi(&rho, sigma.op(), order).unwrap().value;
        let b = sandwiched_renyi(&rho.tensor(&tau), sigma.tensor(&tau).op(), order).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0));
    }

    #[test]
    fn quasi_convex_in_first_argument(seed: u64, k: u8, lambda in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let (r1, r2, sigma) = (state(3, 2, &mut r), state(3, 1, &mut r), state(3, 3, &mut r));
        let order = order_of(k);
        let v = |x: &DensityOperator| sandwiched_renyi(x, sigma.op(), order).unwrap().value;
        let mix = r1.mix(&r2, lambda).unwrap();
        prop_assert!(v(&mix) <= v(&r1).max(v(&r2)) + 1e-7);
    }

    #[test]
    fn projection_lands_in_ppt_prime(seed: u64, scale in 0.01f64..5.0) {
        let x = random::hermitian(4, &mut rng(seed)).scale(scale);
        let p = project_ppt_prime_with(&x, [2, 2], &ProjectionConfig::default()).unwrap();
        let m = is_ppt_prime(p.element.op(), [2, 2]).unwrap();
        prop_assert!(m.member, "{m:?}");
        prop_assert!(max_entangled_overlap(&p.element, 2).unwrap() <= 0.5 + 1e-8);
    }

    #[test]
    fn fidelity_bound_monotone(
        alpha in 1.001f64..10.0,
        m1 in 0.0f64..6.0, dm in 0.0f64..3.0,
        r1 in 0.0f64..3.0, dr in 0.0f64..3.0,
    ) {
        let f = |m, r| fidelity_upper_bound(m, r, alpha).unwrap();
        prop_assert!(f(m1 + dm, r1) <= f(m1, r1) + 1e-15);
        prop_assert!(f(m1, r1 + dr) + 1e-15 >= f(m1, r1));
        prop_assert!((0.0..=1.0).contains(&f(m1, r1)));
    }

    #[test]
    fn exponent_nondecreasing_in_rate(
        values in proptest::collection::vec(0.0f64..2.0, 3),
        rate in 0.0f64..4.0, step in 0.0f64..2.0,
    ) {
        let grid: Vec<(f64, f64)> = [1.5, 2.0, 4.0].into_iter().zip(values).collect();
        let lo = sc_exponent_from_values(rate, &grid).unwrap().value;
        let hi = sc_exponent_from_values(rate + step, &grid).unwrap().value;
        prop_assert!(hi + 1e-15 >= lo);
    }
}

fn quick_inner() -> InnerConfig {
    InnerConfig {
        restarts: 1,
        ..InnerConfig::default()
    }
}

fn two_qubit(r: &mut ChaCha8Rng) -> DensityOperator {
    let rank = r.random_range(1..=4);
    DensityOperator::new(random::density(4, rank, r), vec![2, 2]).unwrap()
}

#[test]
fn rains_subadditive_on_pairs() {
    let mut r = rng(31);
    let cfg = quick_inner();
    for _ in 0..2 {
        let (rho, sigma) = (two_qubit(&mut r), two_qubit(&mut r));
        let a = rains_rel_entropy(&rho, Order::LimitOne, &cfg, &mut r).unwrap();
        let b = rains_rel_entropy(&sigma, Order::LimitOne, &cfg, &mut r).unwrap();
        // Regroup A1 B1 A2 B2 as (A1 A2)(B1 B2).
        let dims = [2, 2, 2, 2];
        let perm = [0, 2, 1, 3];
        let joint = permute_subsystems(rho.tensor(&sigma).op().as_matrix(), &dims, &perm).unwrap();
        let joint = DensityOperator::new(HermitianOperator::from_hermitian_part(&joint), vec![4, 4]).unwrap();
        let start = permute_subsystems(
            &kron(a.tau_star.op().as_matrix(), b.tau_star.op().as_matrix()),
            &dims,
            &perm,
        )
        .unwrap();
        let cfg0 = InnerConfig { restarts: 0, ..cfg.clone() };
        let j = rains_rel_entropy_from(
            &joint,
            Order::LimitOne,
            &cfg0,
            &[HermitianOperator::from_hermitian_part(&start)],
            [4, 4],
        )
        .unwrap();
        assert!(j.value <= a.value + b.value + 2e-3, "{} > {} + {}", j.value, a.value, b.value);
    }
}

#[test]
fn rains_increases_with_order() {
    let mut r = rng(32);
    let cfg = quick_inner();
    for _ in 0..3 {
        let rho = two_qubit(&mut r);
        let mut prev = rains_rel_entropy(&rho, Order::LimitOne, &cfg, &mut r).unwrap().value;
        for a in [1.5, 2.0, 3.0] {
            let v = rains_rel_entropy(&rho, Order::Renyi(a), &cfg, &mut r).unwrap().value;
            assert!(v >= prev - 2e-3, "α = {a}: {v} < {prev}");
            prev = v;
        }
    }
}
