use std::collections::BTreeSet;

use gitmilnor_core::lambda::sorted_grid;
use gitmilnor_core::linalg::span_of_multiples;
use gitmilnor_core::milnor::{
    associated_form, expected_hilbert_function, gradient_point, hilbert_function, is_regular_sequence,
    socle_degree, socle_monomial_report,
};
use gitmilnor_core::poly::polar_pair;
use gitmilnor_core::rational::int;
use gitmilnor_core::stability::{
    align_initials, binary_oracle, find_gradient_destabilizer, form_state, torus_verdict, transfer_form_to_grad,
    transfer_grad_to_form, SearchConfig, StabilityStatus,
};
use gitmilnor_core::{Error, ExponentVector, OnePs, Polynomial};
use proptest::prelude::*;

fn arb_form(n: usize, degree: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    let monomials = ExponentVector::all_of_degree(n, degree);
    let len = monomials.len();
    proptest::collection::vec((0..len, -3i64..=3), 1..=max_terms).prop_filter_map("zero form", move |terms| {
        let f = Polynomial::from_terms(
            n,
            terms.into_iter().map(|(i, c)| (monomials[i].clone(), int(c))),
        )
        .ok()?;
        (!f.is_zero()).then_some(f)
    })
}

fn arb_sorted_lambda(n: usize, bound: i64) -> impl Strategy<Value = OnePs> {
    let grid = sorted_grid(n, bound);
    (0..grid.len()).prop_map(move |i| grid[i].clone())
}

fn arb_regular(n: usize, d: u32) -> impl Strategy<Value = Vec<Polynomial>> {
    proptest::collection::vec(arb_form(n, d, 4), n)
        .prop_filter("regular sequence", |g| is_regular_sequence(g).map(|w| w.regular).unwrap_or(false))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn hilbert_function_of_regular_sequence(g in arb_regular(2, 3)) {
        let nu = socle_degree(2, 3);
        let h = hilbert_function(&g, nu + 1).unwrap();
        let mut expected = expected_hilbert_function(2, 3);
        expected.push(0);
        prop_assert_eq!(&h, &expected);
        let top: Vec<usize> = h[..=nu as usize].to_vec();
        let mut rev = top.clone();
        rev.reverse();
        prop_assert_eq!(top, rev);
    }

    #[test]
    fn associated_form_is_apolar(g in arb_regular(3, 2)) {
        let a = associated_form(&g).unwrap();
        let piece = span_of_multiples(&g, socle_degree(3, 2)).unwrap();
        for b in piece.basis() {
            prop_assert_eq!(polar_pair(&a.dual_form, &b).unwrap(), int(0));
        }
    }

    #[test]
    fn socle_monomial_dominates(g in arb_regular(2, 3), lambda in arb_sorted_lambda(2, 6)) {
        prop_assert!(socle_monomial_report(&g, &lambda).unwrap().dominates);
    }

    #[test]
    fn alignment_makes_initials_distinct(f in arb_form(3, 3, 6), lambda in arb_sorted_lambda(3, 4)) {
        match align_initials(&f, &lambda) {
            Ok(t) => {
                let moved = f.apply_substitution(&t).unwrap();
                let initials: BTreeSet<ExponentVector> = moved
                    .gradient()
                    .iter()
                    .map(|p| lambda.initial_monomial(p).unwrap())
                    .collect();
                let pivots: BTreeSet<ExponentVector> =
                    gradient_point(&f).unwrap().pivot_set(&lambda).unwrap().monomials.into_iter().collect();
                prop_assert_eq!(initials.len(), 3);
                prop_assert_eq!(initials, pivots);
            }
            Err(Error::DegenerateGradient { .. }) => {}
            Err(e) => prop_assert!(false, "{e:?}"),
        }
    }

    #[test]
    fn forward_transfer_is_total(f in arb_form(3, 3, 4), lambda in arb_sorted_lambda(3, 4)) {
        if lambda.min_weight(&f).unwrap() > 0 {
            match transfer_form_to_grad(&f, &lambda) {
                Ok(t) => prop_assert!(t.hm_weight > 0),
                Err(Error::DegenerateGradient { .. }) => {}
                Err(e) => prop_assert!(false, "{e:?}"),
            }
        }
    }

    #[test]
    fn backward_transfer_is_total(f in arb_form(3, 3, 6), lambda in arb_sorted_lambda(3, 4)) {
        let Ok(w) = gradient_point(&f) else { return Ok(()) };
        if w.hm_weight(&lambda).unwrap() > 0 {
            let t = transfer_grad_to_form(&f, &lambda).unwrap();
            let moved = f.substitute(&t.frame).unwrap();
            prop_assert!(t.one_ps.min_weight(&moved).unwrap() > 0);
            prop_assert_eq!(
                torus_verdict(&form_state(&moved).unwrap()).unwrap().status,
                StabilityStatus::Unstable
            );
        }
    }

    #[test]
    fn binary_consistency(f in arb_form(2, 4, 5)) {
        let oracle = binary_oracle(&f).unwrap();
        let cfg = SearchConfig { frame_budget: 2, ..Default::default() };
        match find_gradient_destabilizer(&f, &cfg) {
            Ok(v) => prop_assert_eq!(v.is_unstable(), oracle.status == StabilityStatus::Unstable),
            Err(Error::DegenerateGradient { .. }) => {
                prop_assert_eq!(oracle.status, StabilityStatus::Unstable)
            }
            Err(e) => prop_assert!(false, "{e:?}"),
        }
    }
}
