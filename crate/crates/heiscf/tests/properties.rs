//! Randomized cross-module invariants: group axioms, inversion
//! identities, model commutation, digit extraction, and the
//! expansion/reconstruction machinery on arbitrary rational inputs.

use heiscf::cf::{
    self, approx_error, convergents, cool_residual, expand, expand_exact, qn2_structure_holds,
    reconstruct, tilde_entry_identities_hold, tildefrac_identities_hold, RationalSiegel,
};
use heiscf::heis::HPoint;
use heiscf::lattice::{self, DomainKind, LatticePoint};
use heiscf::siegel::{SiegelPoint, UMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = BigRational> {
    (-9999i64..10_000, 1i64..10_000)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn point() -> impl Strategy<Value = HPoint<BigRational>> {
    (rational(), rational(), rational()).prop_map(|(x, y, t)| HPoint::new(x, y, t))
}

fn nonzero_point() -> impl Strategy<Value = HPoint<BigRational>> {
    point().prop_filter("identity has no inverse under inversion", |h| {
        !h.is_identity()
    })
}

fn small_point() -> impl Strategy<Value = HPoint<BigRational>> {
    // coordinates in (−1/2, 1/2): digit-extraction inputs after γ₀
    (-499i64..500, -499i64..500, -499i64..500).prop_map(|(x, y, t)| {
        HPoint::new(
            BigRational::new(BigInt::from(x), BigInt::from(1000)),
            BigRational::new(BigInt::from(y), BigInt::from(1000)),
            BigRational::new(BigInt::from(t), BigInt::from(1000)),
        )
    })
}

fn domain_kind() -> impl Strategy<Value = DomainKind> {
    prop_oneof![Just(DomainKind::Cube), Just(DomainKind::Dirichlet)]
}

fn lattice_point() -> impl Strategy<Value = LatticePoint> {
    (-5i64..6, -5i64..6, -5i64..6).prop_map(|(x, y, t)| LatticePoint::from_i64(x, y, t))
}

/// Digits far enough from the identity to drive a contracting continued
/// fraction (gauge⁴ ≥ 81).
fn contracting_digit() -> impl Strategy<Value = LatticePoint> {
    (-4i64..5, -4i64..5, -12i64..13)
        .prop_map(|(x, y, t)| LatticePoint::from_i64(x, y, t))
        .prop_filter("needs gauge4 ≥ 81", |g| g.gauge4() >= BigInt::from(81))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_associativity_and_inverses(a in point(), b in point(), c in point()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&a.inv()).is_identity());
        prop_assert!(a.inv().mul(&a).is_identity());
        prop_assert_eq!(a.inv().inv(), a);
    }

    #[test]
    fn gauge_distance_is_left_invariant(g in point(), a in point(), b in point()) {
        prop_assert_eq!(g.mul(&a).dist4(&g.mul(&b)), a.dist4(&b));
        prop_assert_eq!(a.dist4(&a), BigRational::zero());
    }

    #[test]
    fn inversion_is_a_gauge_involution(h in nonzero_point()) {
        let inv = h.koranyi_inv().unwrap();
        prop_assert_eq!(inv.koranyi_inv().unwrap(), h.clone());
        prop_assert_eq!(inv.gauge4() * h.gauge4(), BigRational::one());
    }

    #[test]
    fn inversion_distorts_distance_by_both_gauges(
        a in nonzero_point(),
        b in nonzero_point(),
    ) {
        let (ia, ib) = (a.koranyi_inv().unwrap(), b.koranyi_inv().unwrap());
        prop_assert_eq!(
            ia.dist4(&ib) * a.gauge4() * b.gauge4(),
            a.dist4(&b)
        );
    }

    #[test]
    fn siegel_model_commutes_with_the_group(a in point(), b in point()) {
        let (sa, sb) = (SiegelPoint::from_hpoint(&a), SiegelPoint::from_hpoint(&b));
        let product = sa.mul(&sb);
        prop_assert_eq!(product.to_hpoint(), a.mul(&b));
        prop_assert_eq!(sa.gauge4(), a.gauge4());
        prop_assert_eq!(sa.to_hpoint(), a);
    }

    #[test]
    fn translation_matrices_are_unitary_and_compose(a in point(), b in point()) {
        let (ua, ub) = (UMatrix::embed(&a), UMatrix::embed(&b));
        prop_assert!(ua.is_unitary());
        prop_assert_eq!(ua.det(), heiscf::gaussian::GaussianRational::one());
        prop_assert_eq!(ua.mul(&ub), UMatrix::embed(&a.mul(&b)));
        let sb = SiegelPoint::from_hpoint(&b);
        prop_assert_eq!(ua.proj_act(&sb).unwrap().to_hpoint(), a.mul(&b));
    }

    #[test]
    fn nearest_digit_quotient_lies_in_the_domain(h in point(), kind in domain_kind()) {
        let near = lattice::nearest(kind, &h);
        // remainder is exactly digit⁻¹ · h
        prop_assert_eq!(
            near.digit.to_hpoint::<BigRational>().mul(&near.remainder),
            h.clone()
        );
        prop_assert!(lattice::in_domain(kind, &near.remainder));
    }

    #[test]
    fn nearest_digit_is_equivariant(
        h in point(),
        g in lattice_point(),
        kind in domain_kind(),
    ) {
        let base = lattice::nearest(kind, &h);
        let shifted = lattice::nearest(kind, &g.to_hpoint::<BigRational>().mul(&h));
        prop_assert_eq!(shifted.digit, g.mul(&base.digit));
        prop_assert_eq!(shifted.remainder, base.remainder);
    }
}

proptest! {
    // expansion-based properties run the whole pipeline; fewer cases
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn expansion_reconstructs_exactly(h in point(), kind in domain_kind()) {
        let e = expand(&h, kind, 10_000).unwrap();
        prop_assert!(e.seq.finite, "rational expansions terminate");
        prop_assert_eq!(reconstruct(&e.seq).unwrap(), h);
    }

    #[test]
    fn integer_vector_chain_agrees_with_geometric_expansion(
        h in small_point(),
        kind in domain_kind(),
    ) {
        let geometric = expand(&h, kind, 10_000).unwrap();
        let integer = expand_exact(&RationalSiegel::from_hpoint(&h), kind, 100_000).unwrap();
        prop_assert_eq!(&geometric.seq, &integer.seq);
        // denominator norms at least halve with every digit
        for w in integer.denominator_norms.windows(2) {
            prop_assert!(BigInt::from(2) * &w[1] <= w[0]);
        }
    }

    #[test]
    fn convergents_match_prefix_reconstruction(h in small_point(), kind in domain_kind()) {
        let e = expand(&h, kind, 10_000).unwrap();
        let states = cf::convergent_states(&e.seq.digits);
        for state in states.iter().skip(1) {
            let prefix = cf::DigitSeq {
                gamma0: e.seq.gamma0.clone(),
                digits: e.seq.digits[..state.n].to_vec(),
                finite: true,
            };
            prop_assert_eq!(
                cf::convergent_value(&e.seq.gamma0, state).unwrap(),
                reconstruct(&prefix).unwrap()
            );
        }
    }

    #[test]
    fn convergent_matrices_satisfy_all_structure(h in small_point(), kind in domain_kind()) {
        let e = expand(&h, kind, 10_000).unwrap();
        for state in convergents(e.seq.digits.iter().cloned()) {
            let m = state.matrix();
            prop_assert!(m.is_unitary());
            prop_assert!(m.has_column_structure());
            prop_assert!(qn2_structure_holds(&state).unwrap());
            prop_assert!(tilde_entry_identities_hold(&state));
            prop_assert!(tildefrac_identities_hold(&state));
        }
    }

    #[test]
    fn error_certificates_are_exact_and_bounded(h in small_point(), kind in domain_kind()) {
        let e = expand(&h, kind, 10_000).unwrap();
        prop_assume!(!e.seq.digits.is_empty());
        for n in 1..=e.seq.len().min(12) {
            let cert = approx_error(&e, n).unwrap();
            prop_assert_eq!(&cert.dist4, &cert.product_over_norm);
            prop_assert!(cert.dist4 <= cert.bound4);
        }
        let state = convergents(e.seq.digits.iter().cloned())
            .nth(e.seq.len().min(12))
            .unwrap();
        prop_assert!(cool_residual(&state, &e).is_zero());
    }

    #[test]
    fn contracting_words_have_nonzero_denominators_and_contract(
        word in prop::collection::vec(contracting_digit(), 1..6),
    ) {
        let states = cf::convergent_states(&word);
        let mut previous: Option<HPoint<BigRational>> = None;
        for state in states.iter().skip(1) {
            let value = state.value().unwrap().to_hpoint();
            if let Some(prev) = previous {
                let n = state.n - 1;
                prop_assert!(
                    value.dist4(&prev) <= cf::pringsheim_bound4(n),
                    "consecutive approximants {} and {} too far apart",
                    n,
                    n + 1
                );
            }
            previous = Some(value);
        }
    }
}
