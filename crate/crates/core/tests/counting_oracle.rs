//! Oracle equivalence for the counting engine: the table-based fast paths
//! must agree with direct nested-loop enumeration on small random inputs.

mod common;

use common::*;
use lincount::counting::{
    additive_energy, count_solutions, count_solutions_family, count_system_solutions,
    difference_set, dilated_sum, sumset, RepFunction,
};
use lincount::model::rational;
use lincount::{IntSet, LinearForm, LinearSystem};
use num_bigint::BigInt;
use proptest::prelude::*;

fn small_set() -> impl Strategy<Value = IntSet> {
    prop::collection::vec(-30i64..=30, 0..=12).prop_map(IntSet::new)
}

fn coeff() -> impl Strategy<Value = i64> {
    prop_oneof![(-5i64..=-1), (1i64..=5)]
}

fn small_form() -> impl Strategy<Value = LinearForm> {
    prop::collection::vec(coeff(), 3..=5).prop_map(|c| LinearForm::new(&c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn count_matches_brute_force(form in small_form(), s in small_set()) {
        let fast = count_solutions(&form, &s).unwrap().count;
        let slow = brute_count_same(form.coefficients(), &s);
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn family_count_matches_brute_force(
        form in small_form(),
        sets in prop::collection::vec(prop::collection::vec(-20i64..=20, 0..=8), 5),
    ) {
        let k = form.arity();
        let sets: Vec<IntSet> = sets.into_iter().take(k).map(IntSet::new).collect();
        let refs: Vec<&IntSet> = sets.iter().collect();
        let fast = count_solutions_family(&form, &refs).unwrap().count;
        prop_assert_eq!(fast, brute_count(form.coefficients(), &refs));
    }

    #[test]
    fn trivial_bound_holds(form in small_form(), s in small_set()) {
        let report = count_solutions(&form, &s).unwrap();
        let k = form.arity();
        let bound = (s.len() as u64).pow(k as u32 - 1);
        prop_assert!(report.count <= bound.max(u64::from(s.is_empty() && report.count == 0)));
    }

    #[test]
    fn report_respects_coordinatewise_bound(
        form in small_form(),
        sets in prop::collection::vec(prop::collection::vec(-20i64..=20, 0..=8), 5),
    ) {
        let k = form.arity();
        let sets: Vec<IntSet> = sets.into_iter().take(k).map(IntSet::new).collect();
        let refs: Vec<&IntSet> = sets.iter().collect();
        let report = count_solutions_family(&form, &refs).unwrap();
        let full: u128 = report.set_sizes.iter().map(|&s| s as u128).product();
        let bound = report
            .set_sizes
            .iter()
            .map(|&s| if s == 0 { 0 } else { full / s as u128 })
            .min()
            .unwrap();
        prop_assert!(report.count as u128 <= bound);
    }

    #[test]
    fn dilation_invariance(form in small_form(), s in small_set()) {
        // T_a(S, ..., S) = T_{1,...,1}(a_1 S, ..., a_k S)
        let k = form.arity();
        let base = count_solutions(&form, &s).unwrap().count;
        let ones = LinearForm::new(&vec![1; k]).unwrap();
        let dilated: Vec<IntSet> = form
            .coefficients()
            .iter()
            .map(|&a| s.dilate(a).unwrap())
            .collect();
        let refs: Vec<&IntSet> = dilated.iter().collect();
        let via_dilation = count_solutions_family(&ones, &refs).unwrap().count;
        prop_assert_eq!(base, via_dilation);
    }

    #[test]
    fn energy_matches_brute_force(a in small_set(), b in small_set()) {
        let fast = additive_energy(&a, &b).unwrap();
        prop_assert_eq!(fast, brute_energy(&a, &b));
        prop_assert_eq!(fast, additive_energy(&b, &a).unwrap());
    }

    #[test]
    fn energy_is_second_moment_of_rep(a in small_set(), b in small_set()) {
        let r = RepFunction::of_pair((1, 1), &a, &b).unwrap();
        let second_moment: u64 = r.support().map(|(_, m)| m * m).sum();
        prop_assert_eq!(additive_energy(&a, &b).unwrap(), second_moment);
        prop_assert_eq!(r.total(), (a.len() * b.len()) as u64);
    }

    #[test]
    fn sumsets_match_brute_force(a in small_set(), b in small_set()) {
        let got_sum = sumset(&a, &b).unwrap();
        let want_sum = brute_sumset(&a, &b);
        prop_assert_eq!(got_sum.elements(), want_sum.as_slice());
        let neg_b = b.dilate(-1).unwrap_or_default();
        let got_diff = difference_set(&a, &b).unwrap();
        let want_diff = brute_sumset(&a, &neg_b);
        prop_assert_eq!(got_diff.elements(), want_diff.as_slice());
    }

    #[test]
    fn sumsets_agree_across_span_paths(raw in prop::collection::vec(-40i64..=40, 1..=10)) {
        // same values, shifted far apart: the wide span forces the hash path
        let near = IntSet::new(raw.clone());
        let far = IntSet::new(raw.iter().map(|&x| x * (1 << 30)));
        let near_sum = sumset(&near, &near).unwrap();
        let far_sum = sumset(&far, &far).unwrap();
        prop_assert_eq!(near_sum.len(), far_sum.len());
        let rescaled: Vec<i64> = far_sum.iter().map(|x| x / (1 << 30)).collect();
        prop_assert_eq!(near_sum.elements(), rescaled.as_slice());
    }

    #[test]
    fn dilated_sum_matches_dilate_then_sum(s in small_set(), l1 in coeff(), l2 in coeff()) {
        let direct = dilated_sum(l1, l2, &s).unwrap();
        let via_sets = sumset(&s.dilate(l1).unwrap(), &s.dilate(l2).unwrap()).unwrap();
        prop_assert_eq!(direct, via_sets);
    }

    #[test]
    fn single_row_system_equals_form_count(
        coeffs in prop::collection::vec(coeff(), 3..=4),
        s in prop::collection::vec(-15i64..=15, 0..=10),
    ) {
        let s = IntSet::new(s);
        let form = LinearForm::new(&coeffs).unwrap();
        let system = LinearSystem::new(vec![coeffs.clone()]).unwrap();
        let via_form = count_solutions(&form, &s).unwrap();
        let via_system = count_system_solutions(&system, &s).unwrap();
        prop_assert_eq!(via_form.count, via_system.count);
        prop_assert_eq!(via_form.density, via_system.density);
    }

    #[test]
    fn system_count_matches_brute_force(
        m_param in 2i64..=6,
        s in prop::collection::vec(-10i64..=10, 0..=9),
    ) {
        let s = IntSet::new(s);
        let rows = vec![vec![1, 1, -1, 0], vec![1, m_param, 0, -1]];
        let system = LinearSystem::new(rows.clone()).unwrap();
        let fast = count_system_solutions(&system, &s).unwrap().count;
        prop_assert_eq!(fast, brute_system_count(&rows, &s));
    }

    #[test]
    fn dilate_composes(s in small_set(), c1 in coeff(), c2 in coeff()) {
        let nested = s.dilate(c2).unwrap().dilate(c1).unwrap();
        let flat = s.dilate(c1 * c2).unwrap();
        prop_assert_eq!(&nested, &flat);
        prop_assert_eq!(nested.len(), s.len());
    }

    #[test]
    fn normalize_form_is_idempotent(c in prop::collection::vec(coeff(), 3..=6)) {
        let once = LinearForm::new(&c).unwrap();
        let twice = LinearForm::new(once.coefficients()).unwrap();
        prop_assert_eq!(once, twice);
    }
}

#[test]
fn spec_count_values() {
    // frozen values, each re-derived by the brute-force oracle
    let cases: &[(&[i64], &[i64], u64)] = &[
        (&[1, 1, 1], &[-1, 0, 1], 7),
        (&[1, -2, 1], &[-2, -1, 0, 1, 2], 13),
        (&[1, 2, -3], &[-1, 0, 1], 3),
    ];
    for &(coeffs, elems, expected) in cases {
        let form = LinearForm::new(coeffs).unwrap();
        let s = IntSet::new(elems.iter().copied());
        assert_eq!(brute_count_same(coeffs, &s), expected);
        assert_eq!(count_solutions(&form, &s).unwrap().count, expected);
    }
}

#[test]
fn three_piece_family_count_from_spec() {
    // the M = 60 cross count for (1, 2, 3), also reachable via the engine
    let form = LinearForm::new(&[1, 2, 3]).unwrap();
    let c = lincount::construct::three_piece(&form, 60).unwrap();
    let refs: Vec<&IntSet> = c.components.iter().collect();
    assert_eq!(count_solutions_family(&form, &refs).unwrap().count, 331);
    assert_eq!(brute_count(form.coefficients(), &refs), 331);
}

#[test]
fn density_uses_exact_rationals() {
    let form = LinearForm::new(&[1, 1, 1]).unwrap();
    let s = IntSet::new([-1, 0, 1]);
    let report = count_solutions(&form, &s).unwrap();
    assert_eq!(report.density, rational(7, 9));
    assert_eq!(report.density.denom(), &BigInt::from(9));
}
