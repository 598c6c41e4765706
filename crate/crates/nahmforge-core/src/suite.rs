//! Identity-suite orchestration shared by the batch driver and the
//! acceptance gate: enumerate the catalogued sum-equals-product identities
//! over a rank range, build each sum side, and compare exactly against the
//! catalogued product side.

use crate::error::Result;
use crate::nahm::{
    build_capparelli, build_family, build_sum_c, eval_descending, eval_nahm, eval_wang_gen,
    DescendingFamily, DescendingSumSpec, NahmFamily,
};
use crate::products::{build_rhs, RhsEquation};
use crate::series::{series_equal, FracExponent, PuiseuxSeries, Rat, SeriesCompare};
use num_traits::One;

/// All catalogued identities with ranks in `r_min..=r_max` (every valid
/// index j included; the rank-independent partition identity is listed
/// once when the range contains rank 2).
pub fn identity_catalogue(r_min: usize, r_max: usize) -> Vec<RhsEquation> {
    use RhsEquation::*;
    let mut out = Vec::new();
    for r in r_min.max(2)..=r_max {
        out.push(R1_7 { r });
        out.extend((1..=r).map(|j| R1_8 { r, j }));
        out.push(R1_9 { r });
        out.extend((1..=r).map(|j| R1_10 { r, j }));
        out.push(R1_11 { r });
        out.extend((1..=r).map(|j| R1_12 { r, j }));
        out.push(R1_13 { r });
        out.extend((1..=r).map(|j| R1_14 { r, j }));
        out.push(Wang1_1 { r });
        out.extend((1..=r).map(|j| Wang1_2 { r, j }));
        if r >= 3 {
            out.push(SumC { r });
        }
        out.push(D2_1a { r });
        out.extend((1..=r).map(|j| D2_1b { r, j }));
        out.push(D2_1c { r });
        out.extend((1..=r).map(|j| D2_1d { r, j }));
        out.push(D2_2a { r });
        out.extend((1..=r).map(|j| D2_2b { r, j }));
        if r >= 3 {
            out.push(D2_3a { r });
            out.push(D2_3b { r });
        }
        out.push(D2_4a { r });
        out.extend((1..=r).map(|j| D2_4b { r, j }));
    }
    if (r_min..=r_max).contains(&2) {
        out.push(Capparelli);
    }
    out
}

/// Build the sum side of a catalogued identity, truncated at `order`.
pub fn lhs_series(eq: &RhsEquation, order: FracExponent) -> Result<PuiseuxSeries> {
    use RhsEquation::*;
    let family = |f: NahmFamily, r: usize, j: usize| -> Result<PuiseuxSeries> {
        eval_nahm(&build_family(f, r, j)?, order, false)
    };
    let descending = |f: DescendingFamily, r: usize, j: usize| -> Result<PuiseuxSeries> {
        eval_descending(&DescendingSumSpec { family: f, r, j }, order)
    };
    match *eq {
        R1_7 { r } => family(NahmFamily::T1_1_1, r, 0),
        R1_8 { r, j } => family(NahmFamily::T1_1_1, r, j),
        R1_9 { r } => family(NahmFamily::T1_1_2, r, 0),
        R1_10 { r, j } => family(NahmFamily::T1_1_2, r, j),
        R1_11 { r } => family(NahmFamily::T1_2, r, 0),
        R1_12 { r, j } => family(NahmFamily::T1_2, r, j),
        R1_13 { r } => family(NahmFamily::T1_3, r, 0),
        R1_14 { r, j } => family(NahmFamily::T1_3, r, j),
        SumC { r } => {
            let (s1, s2, shift) = build_sum_c(r)?;
            let first = eval_nahm(&s1, order, false)?;
            let second = eval_nahm(&s2, order, false)?
                .shifted_scaled(shift, &Rat::one())
                .truncate(order);
            Ok(first.add(&second))
        }
        Wang1_1 { r } => eval_wang_gen(1, r, 0, order),
        Wang1_2 { r, j } => eval_wang_gen(2, r, j, order),
        Capparelli => eval_nahm(&build_capparelli(), order, false),
        D2_1a { r } => descending(DescendingFamily::D2_1a, r, 0),
        D2_1b { r, j } => descending(DescendingFamily::D2_1b, r, j),
        D2_1c { r } => descending(DescendingFamily::D2_1c, r, 0),
        D2_1d { r, j } => descending(DescendingFamily::D2_1d, r, j),
        D2_2a { r } => descending(DescendingFamily::D2_2a, r, 0),
        D2_2b { r, j } => descending(DescendingFamily::D2_2b, r, j),
        D2_3a { r } => descending(DescendingFamily::D2_3a, r, 0),
        D2_3b { r } => descending(DescendingFamily::D2_3b, r, 0),
        D2_4a { r } => descending(DescendingFamily::D2_4a, r, 0),
        D2_4b { r, j } => descending(DescendingFamily::D2_4b, r, j),
    }
}

/// Verify one catalogued identity exactly at the given order.
pub fn verify_identity(eq: &RhsEquation, order: FracExponent) -> Result<SeriesCompare> {
    let lhs = lhs_series(eq, order)?;
    let rhs = build_rhs(eq, order)?;
    Ok(series_equal(&lhs, &rhs))
}
