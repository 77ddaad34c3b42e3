//! Randomized invariants. Each proptest case draws a seed and feeds it to
//! the shared samplers, so a failing case is reproducible from its seed.

use b3tower::distribution::Distribution;
use b3tower::linalg::{generic_rank, reduce_mod_frame};
use b3tower::models::{build_example_family, build_model, ExampleM, ModelName};
use b3tower::prolong::{prolong_dual, prolong_fiber_line, prolong_projective, prolong_svc_cone, ProlongationResult};
use b3tower::sampling::rng;
use b3tower::structure::{check_b3_123, check_b3_13, check_b3_23, B3_13Mode};
use b3tower::Scalar;
use proptest::prelude::*;

mod common;

macro_rules! seeded {
    ($($name:ident => $prop:path),* $(,)?) => {
        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]
            $(
                #[test]
                fn $name(seed in any::<u64>()) {
                    prop_assert!($prop(&mut rng(seed)), "seed {}", seed);
                }
            )*
        }
    };
}

seeded! {
    scalar_ring_laws => common::scalar_ring_laws,
    leibniz_and_mixed_partials => common::leibniz_and_mixed_partials,
    evaluation_commutes_with_arithmetic => common::evaluation_commutes_with_arithmetic,
    jacobi_for_vector_fields => common::jacobi_vector_fields,
    reduce_mod_frame_is_idempotent => common::reduce_mod_frame_is_idempotent,
    pointwise_rank_bounded_by_generic => common::pointwise_rank_bounded_by_generic,
    substitution_is_functorial => common::substitution_is_functorial,
    jacobi_for_poisson_bracket => common::jacobi_poisson,
    hamiltonian_is_lie_morphism => common::hamiltonian_is_lie_morphism,
    membership_certificate_reconstructs => common::membership_certificate_reconstructs,
    four_fold_identity => common::four_fold_identity,
    growth_invariant_under_frame_change => common::growth_invariant_under_frame_change,
    certificates_are_splitting_equivariant => common::certificates_are_splitting_equivariant,
    theta3_replacement_invariant => common::theta3_replacement_invariant,
}

#[test]
fn generic_rank_matches_almost_every_point() {
    let mut hits = 0;
    for seed in 0..100 {
        let mut r = rng(seed);
        let frame = common::random_frame(&mut r, 3);
        let g = generic_rank(&frame).unwrap();
        if common::pointwise_rank(&mut r, &frame) == Some(g) {
            hits += 1;
        }
    }
    assert!(hits >= 99, "{hits}/100");
}

fn stages(d: &Distribution) -> Vec<ProlongationResult> {
    let ze = prolong_projective(d).unwrap();
    let wf = prolong_fiber_line(&ze).unwrap();
    let sl = prolong_dual(d).unwrap();
    let cone = prolong_svc_cone(&sl).unwrap();
    vec![ze, wf, sl, cone]
}

fn inputs() -> Vec<Distribution> {
    let x6 = Scalar::coord("x6");
    vec![
        build_model(ModelName::F3).unwrap().distribution,
        build_example_family(&ExampleM::Formal).unwrap(),
        build_example_family(&ExampleM::Polynomial(x6.mul(&x6).add(&Scalar::int(3)))).unwrap(),
    ]
}

#[test]
fn prolonged_flags_are_nested() {
    for d in inputs() {
        for r in stages(&d) {
            let d = &r.distribution;
            let growth = d.growth();
            for k in 1..growth.len() {
                let lower = d.flag_level(k);
                let upper = d.flag_level(k + 1);
                for v in lower.frame() {
                    assert!(reduce_mod_frame(v, upper.frame()).unwrap().0.is_zero(), "{:?} level {k}", r.kind);
                }
            }
        }
    }
}

#[test]
fn passing_structures_have_their_rank_ladder() {
    for d in inputs() {
        for r in stages(&d) {
            let s = &r.splitting;
            let (overall, ladder): (bool, &[usize]) = match r.distribution.rank() {
                3 if r.distribution.chart().dim() == 8 => (check_b3_23(s).unwrap().overall, &[3, 5, 7, 8]),
                3 => (check_b3_123(s).unwrap().overall, &[3, 5, 7, 8, 9]),
                _ => (check_b3_13(s, B3_13Mode::Generalized).unwrap().overall, &[4, 6, 8]),
            };
            assert!(overall, "{:?}", r.kind);
            assert_eq!(r.distribution.growth(), ladder, "{:?}", r.kind);
        }
    }
}

/// Rescaling L1 by a function moves [ℓ2, ℓ3] off L2 by −ℓ3(f)ℓ2.
#[test]
fn b3_13_conditions_depend_on_the_generators() {
    use b3tower::distribution::Splitting;
    let m = build_model(ModelName::F13).unwrap();
    let f = Scalar::coord("s21");
    let mut frame = m.frame.clone();
    for &i in &m.splitting.parts[0].1 {
        frame[i] = frame[i].scale(&f);
    }
    let d = Distribution::new(&m.chart, frame).unwrap();
    let s = Splitting::new(d, m.splitting.parts.clone()).unwrap();
    let cert = check_b3_13(&s, B3_13Mode::Generalized).unwrap();
    assert!(!cert.condition("[ℓ2, ℓ3] ∈ L2").unwrap().passed);
    assert!(check_b3_13(&m.splitting, B3_13Mode::Generalized).unwrap().overall);
}
