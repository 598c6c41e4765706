//! Bailey-pair audit: all seventeen seeds against the defining relation,
//! closure under the transforms, limit and weighted-sum identities, and
//! end-to-end derivation replays of the descending multi-sums.

mod common;

use common::fe;
use nahmforge_core::{
    replay_descending, series_equal, verify_lemma_sum, verify_limit_identity, BaileyPair,
    PairTag, PuiseuxSeries, ReplayTarget,
};

#[test]
fn all_seventeen_seeds_satisfy_relation() {
    let order = fe(30, 1);
    for tag in PairTag::all() {
        BaileyPair::seed(tag)
            .verify(6, order)
            .unwrap_or_else(|e| panic!("{e}"));
    }
}

#[test]
fn s1_preserves_relation() {
    let order = fe(30, 1);
    for tag in [PairTag::C1, PairTag::C3, PairTag::G4Star, PairTag::G5, PairTag::W1] {
        BaileyPair::seed(tag)
            .s1()
            .verify(5, order)
            .unwrap_or_else(|e| panic!("{e}"));
    }
}

#[test]
fn shift_preserves_relation() {
    let order = fe(30, 1);
    for tag in [PairTag::C4Star, PairTag::C7Star, PairTag::G4StarStar, PairTag::C3] {
        BaileyPair::seed(tag)
            .shift()
            .unwrap()
            .verify(5, order)
            .unwrap_or_else(|e| panic!("{e}"));
    }
    // undefined at a = 1
    assert!(BaileyPair::seed(PairTag::C1).shift().is_err());
    assert!(BaileyPair::seed(PairTag::G4).shift().is_err());
}

#[test]
fn iterated_transforms_stay_closed() {
    let order = fe(30, 1);
    // a full pipeline stage: seed, iterate, shift, iterate again
    let p = BaileyPair::seed(PairTag::C4Star).s1().shift().unwrap().s1();
    p.verify(4, order).unwrap_or_else(|e| panic!("{e}"));
}

#[test]
fn limit_identity_on_seeds() {
    let order = fe(25, 1);
    for tag in [PairTag::C1, PairTag::C3, PairTag::C5, PairTag::G5] {
        verify_limit_identity(&BaileyPair::seed(tag), order).unwrap_or_else(|e| panic!("{e}"));
    }
}

#[test]
fn lemma_sum_on_seeds() {
    let order = fe(25, 1);
    for tag in [PairTag::W1, PairTag::C1, PairTag::G4Star] {
        verify_lemma_sum(&BaileyPair::seed(tag), order).unwrap_or_else(|e| panic!("{e}"));
    }
}

#[test]
fn w2_alpha0_is_nonstandard() {
    let order = fe(8, 1);
    let p = BaileyPair::seed(PairTag::W2);
    let a0 = p.alpha(0, order).unwrap();
    // alpha_0 = beta_0 = 1 + q^{1/2} + q, deliberately not 1
    let mut want = PuiseuxSeries::one(order);
    want = want.add(&PuiseuxSeries::monomial(fe(1, 2), nahmforge_core::rat_int(1), order).unwrap());
    want = want.add(&PuiseuxSeries::monomial(fe(1, 1), nahmforge_core::rat_int(1), order).unwrap());
    assert!(series_equal(&a0, &want).is_equal());
    assert!(series_equal(&p.beta(0, order).unwrap(), &want).is_equal());
}

#[test]
fn replay_2_1a_small_ranks() {
    for r in [2usize, 3] {
        replay_descending(ReplayTarget::D2_1a { r }, fe(25, 1)).unwrap_or_else(|e| panic!("r={r}: {e}"));
    }
}

#[test]
fn replay_2_1b_both_cases() {
    // j = r exercises the direct pipeline; j < r exercises the mid-shift
    replay_descending(ReplayTarget::D2_1b { r: 2, j: 2 }, fe(22, 1)).unwrap();
    replay_descending(ReplayTarget::D2_1b { r: 2, j: 1 }, fe(22, 1)).unwrap();
    replay_descending(ReplayTarget::D2_1b { r: 3, j: 2 }, fe(20, 1)).unwrap();
}

#[test]
fn replay_2_2b_both_cases() {
    replay_descending(ReplayTarget::D2_2b { r: 2, j: 2 }, fe(22, 1)).unwrap();
    replay_descending(ReplayTarget::D2_2b { r: 2, j: 1 }, fe(22, 1)).unwrap();
}

#[test]
fn replay_2_3a_small_ranks() {
    // this family needs rank at least 3
    replay_descending(ReplayTarget::D2_3a { r: 3 }, fe(22, 1)).unwrap();
    assert!(replay_descending(ReplayTarget::D2_3a { r: 2 }, fe(10, 1)).is_err());
}
