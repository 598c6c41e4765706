//! Modularity analysis of generalized eta quotients.
//!
//! Implements the classical criterion of Robins for generalized eta
//! quotients: given a quotient `f = prod eta_{delta,g}^{r_{delta,g}}` and a
//! period `N`, compute the weight sum `w(f)`, the orders at the cusps
//! infinity and zero, and the least rescaling factors `t`, `N0` such that
//! `f(t tau)` is a modular function on `Gamma_1(t N0 N)`.
//!
//! Also houses the catalogued proof quotients for the built-in Nahm-sum
//! families (labelled 4.1-f1 through 4.4) together with a crosscheck that
//! re-expands each quotient as an exact Puiseux series and compares it to
//! the corresponding Nahm sum.
//!
//! Conventions:
//! - `Ord_inf(f) = sum delta * P2(g/delta) * r_{delta,g}`, which is twice
//!   the leading q-exponent of the quotient (the eta factors here are the
//!   "squared" generalized eta functions of [`crate::products::gen_eta`]).
//! - `Ord_0(f) = sum (N/delta) * P2(0) * r_{delta,g}`, evaluated with
//!   `P2(0) = 1/6` for every class, as in the printed criterion.
//! - The criterion is stated for integer `delta` dividing `N`; the 4.3/4.4
//!   quotient catalogue needs the verbatim extension to rational `delta`
//!   (`delta = 2r - 1/2` with `N = 4r - 1`, and so on). We therefore only
//!   enforce `delta | N` when every period in the quotient is an integer.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::nahm::{build_family, eval_nahm, NahmFamily};
use crate::products::{p2, GenEtaSpec};
use crate::series::{rat, rat_int, rat_to_string, series_equal, FracExponent, Rat};

/// Spec-facing alias: a generalized eta quotient as a factor list.
pub type EtaQuotientSpec = GenEtaSpec;

fn fe(n: i64, d: i64) -> FracExponent {
    FracExponent::new(n, d)
}

/// The catalogued quotients entering the level computations, one per
/// summand: the split families 4.1 and 4.2 have two summands each (f1/f2,
/// g1/g2), the half-period families 4.3 and 4.4 are single quotients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProofQuotient {
    T4_1F1,
    T4_1F2,
    T4_2G1,
    T4_2G2,
    T4_3,
    T4_4,
}

impl std::fmt::Display for ProofQuotient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ProofQuotient::T4_1F1 => "4.1-f1",
            ProofQuotient::T4_1F2 => "4.1-f2",
            ProofQuotient::T4_2G1 => "4.2-g1",
            ProofQuotient::T4_2G2 => "4.2-g2",
            ProofQuotient::T4_3 => "4.3",
            ProofQuotient::T4_4 => "4.4",
        };
        write!(f, "{s}")
    }
}

impl ProofQuotient {
    pub fn all() -> [ProofQuotient; 6] {
        [
            ProofQuotient::T4_1F1,
            ProofQuotient::T4_1F2,
            ProofQuotient::T4_2G1,
            ProofQuotient::T4_2G2,
            ProofQuotient::T4_3,
            ProofQuotient::T4_4,
        ]
    }

    /// The quotient family (4.1 through 4.4) this summand belongs to.
    pub fn family(self) -> QuotientFamily {
        match self {
            ProofQuotient::T4_1F1 | ProofQuotient::T4_1F2 => QuotientFamily::T4_1,
            ProofQuotient::T4_2G1 | ProofQuotient::T4_2G2 => QuotientFamily::T4_2,
            ProofQuotient::T4_3 => QuotientFamily::T4_3,
            ProofQuotient::T4_4 => QuotientFamily::T4_4,
        }
    }
}

/// The four catalogued quotient families and their bookkeeping constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuotientFamily {
    T4_1,
    T4_2,
    T4_3,
    T4_4,
}

impl std::fmt::Display for QuotientFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            QuotientFamily::T4_1 => "4.1",
            QuotientFamily::T4_2 => "4.2",
            QuotientFamily::T4_3 => "4.3",
            QuotientFamily::T4_4 => "4.4",
        };
        write!(f, "{s}")
    }
}

impl QuotientFamily {
    pub fn all() -> [QuotientFamily; 4] {
        [
            QuotientFamily::T4_1,
            QuotientFamily::T4_2,
            QuotientFamily::T4_3,
            QuotientFamily::T4_4,
        ]
    }

    /// The period `N` used in the catalogued analysis for rank `r`.
    pub fn period_n(self, r: usize) -> u64 {
        let r = r as u64;
        match self {
            QuotientFamily::T4_1 => 16 * r - 4,
            QuotientFamily::T4_2 => 16 * r - 12,
            QuotientFamily::T4_3 => 4 * r - 1,
            QuotientFamily::T4_4 => 4 * r - 3,
        }
    }

    /// The printed rescaling factor `t` for rank `r`.
    pub fn printed_t(self, r: usize) -> u64 {
        let r = r as u64;
        match self {
            QuotientFamily::T4_1 => 32 * r - 8,
            QuotientFamily::T4_2 => 32 * r - 24,
            QuotientFamily::T4_3 => 32 * r - 8,
            QuotientFamily::T4_4 => 16 * r - 12,
        }
    }

    /// The printed cusp-zero factor `N0` for rank `r`.
    pub fn printed_n0(self, _r: usize) -> u64 {
        match self {
            QuotientFamily::T4_1 => 4,
            QuotientFamily::T4_2 => 2,
            QuotientFamily::T4_3 | QuotientFamily::T4_4 => 16,
        }
    }

    /// The published congruence level for rank `r`: `128(4r-1)^2` for the
    /// families 4.1/4.3 and `64(4r-3)^2` for 4.2/4.4.
    pub fn published_level(self, r: usize) -> u64 {
        let r = r as u64;
        match self {
            QuotientFamily::T4_1 | QuotientFamily::T4_3 => 128 * (4 * r - 1) * (4 * r - 1),
            QuotientFamily::T4_2 | QuotientFamily::T4_4 => 64 * (4 * r - 3) * (4 * r - 3),
        }
    }

    /// The class index `k_j`: `k_0` is the catalogued top value, `k_j = j`
    /// for `1 <= j <= r`.
    pub fn k_index(self, r: usize, j: usize) -> i64 {
        let r = r as i64;
        if j == 0 {
            match self {
                QuotientFamily::T4_1 | QuotientFamily::T4_3 => 2 * r - 1,
                QuotientFamily::T4_2 | QuotientFamily::T4_4 => 2 * r - 2,
            }
        } else {
            j as i64
        }
    }

    /// The Nahm-sum family whose members equal the quotient (sum).
    pub fn nahm_family(self) -> NahmFamily {
        match self {
            QuotientFamily::T4_1 => NahmFamily::T1_1_1,
            QuotientFamily::T4_2 => NahmFamily::T1_1_2,
            QuotientFamily::T4_3 => NahmFamily::T1_2,
            QuotientFamily::T4_4 => NahmFamily::T1_3,
        }
    }
}

/// Exact report of the modularity criterion for one quotient.
#[derive(Clone, Debug, PartialEq)]
pub struct RobinsReport {
    /// Weight sum `w(f) = sum_{g = 0 mod delta} r_{delta,0}`.
    pub w: Rat,
    /// `Ord_inf(f) = sum delta P2(g/delta) r_{delta,g}`.
    pub ord_inf: Rat,
    /// `Ord_0(f) = sum (N/delta) P2(0) r_{delta,g}`.
    pub ord_zero: Rat,
    /// Least positive integer with `t * ord_inf` an even integer.
    pub t: u64,
    /// Least positive integer with `N0 * ord_zero` an even integer.
    pub n0: u64,
    /// The period the quotient is analyzed at.
    pub n: u64,
    /// `t * N0 * N`.
    pub level: u64,
    /// True iff `w = 0`: then `f(t tau)` is modular on `Gamma_1(level)`.
    pub modular: bool,
}

impl RobinsReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "w": rat_to_string(&self.w),
            "ord_inf": rat_to_string(&self.ord_inf),
            "ord_zero": rat_to_string(&self.ord_zero),
            "t": self.t,
            "N0": self.n0,
            "N": self.n,
            "level": self.level,
            "modular": self.modular,
        })
    }
}

/// Least positive integer `t` such that `t * x` is an even integer.
fn least_even_multiplier(x: &Rat) -> u64 {
    if x.is_zero() {
        return 1;
    }
    let m = x.numer().abs();
    let two_d = x.denom() * 2u32;
    let t = &two_d / m.gcd(&two_d);
    t.try_into().expect("rescaling factor fits in u64")
}

/// Run the modularity criterion on an eta quotient at period `n`.
///
/// When every `delta` in the quotient is an integer, each must divide `n`;
/// quotients with rational periods skip the divisibility check (the
/// catalogued 4.3/4.4 analyses rely on this extension).
pub fn robins_analyze(spec: &GenEtaSpec, n: u64) -> Result<RobinsReport> {
    if n == 0 {
        return Err(Error::Domain("period N must be positive".into()));
    }
    let n_rat = Rat::from_integer(n.into());
    let all_integer = spec
        .factors
        .iter()
        .all(|f| f.delta.is_integer() && f.delta.numer() > 0);
    let mut w = Rat::zero();
    let mut ord_inf = Rat::zero();
    let mut ord_zero = Rat::zero();
    for f in &spec.factors {
        let d = f.delta.to_rat();
        if !d.is_positive() {
            return Err(Error::Domain("eta period delta must be positive".into()));
        }
        if all_integer {
            let dn: u64 = f
                .delta
                .numer()
                .try_into()
                .map_err(|_| Error::Domain("delta too large".into()))?;
            if n % dn != 0 {
                return Err(Error::Domain(format!(
                    "delta = {dn} does not divide N = {n}"
                )));
            }
        }
        let mut gr = f.g.to_rat();
        gr -= (&gr / &d).floor() * &d;
        if gr.is_zero() {
            w += &f.power;
        }
        ord_inf += &d * p2(&(&gr / &d)) * &f.power;
        ord_zero += &n_rat / &d * rat(1, 6) * &f.power;
    }
    let t = least_even_multiplier(&ord_inf);
    let n0 = least_even_multiplier(&ord_zero);
    let modular = w.is_zero();
    Ok(RobinsReport {
        w,
        ord_inf,
        ord_zero,
        t,
        n0,
        n,
        level: t * n0 * n,
        modular,
    })
}

/// Build one catalogued proof quotient for rank `r` and member `0 <= j <= r`.
pub fn build_proof_quotients(which: ProofQuotient, r: usize, j: usize) -> Result<GenEtaSpec> {
    if r < 2 {
        return Err(Error::Domain("rank must be at least 2".into()));
    }
    if j > r {
        return Err(Error::Domain(format!("member j = {j} out of range 0..={r}")));
    }
    let k = which.family().k_index(r, j);
    let ri = r as i64;
    let one = rat_int(1);
    let half = rat(1, 2);
    let spec = match which {
        ProofQuotient::T4_1F1 => GenEtaSpec::default()
            .with(fe(16 * ri - 4, 1), fe(4 * k, 1), one.clone())
            .with(fe(16 * ri - 4, 1), fe(0, 1), half.clone())
            .with(fe(4, 1), fe(1, 1), -one)
            .with(fe(4, 1), fe(0, 1), -half),
        ProofQuotient::T4_1F2 => GenEtaSpec::default()
            .with(fe(8 * ri - 2, 1), fe(2 * k, 1), one.clone())
            .with(fe(16 * ri - 4, 1), fe(8 * ri - 4 * k - 2, 1), one.clone())
            .with(fe(8 * ri - 2, 1), fe(0, 1), rat(3, 2))
            .with(fe(8 * ri - 2, 1), fe(4 * ri - 2 * k - 1, 1), -one)
            .with(fe(4, 1), fe(2, 1), -rat_int(1))
            .with(fe(4, 1), fe(0, 1), -half.clone())
            .with(fe(4 * ri - 1, 1), fe(0, 1), -half.clone())
            .with(fe(16 * ri - 4, 1), fe(0, 1), -half),
        ProofQuotient::T4_2G1 => GenEtaSpec::default()
            .with(fe(16 * ri - 12, 1), fe(4 * k, 1), one.clone())
            .with(fe(16 * ri - 12, 1), fe(0, 1), half.clone())
            .with(fe(4, 1), fe(1, 1), -one)
            .with(fe(4, 1), fe(0, 1), -half),
        ProofQuotient::T4_2G2 => GenEtaSpec::default()
            .with(fe(8 * ri - 6, 1), fe(2 * k, 1), one.clone())
            .with(fe(16 * ri - 12, 1), fe(8 * ri - 4 * k - 6, 1), one.clone())
            .with(fe(8 * ri - 6, 1), fe(0, 1), rat(3, 2))
            .with(fe(8 * ri - 6, 1), fe(4 * ri - 2 * k - 3, 1), -one)
            .with(fe(4, 1), fe(2, 1), -rat_int(1))
            .with(fe(4, 1), fe(0, 1), -half.clone())
            .with(fe(4 * ri - 3, 1), fe(0, 1), -half.clone())
            .with(fe(16 * ri - 12, 1), fe(0, 1), -half),
        ProofQuotient::T4_3 => GenEtaSpec::default()
            .with(fe(4 * ri - 1, 2), fe(k, 1), one.clone())
            .with(fe(4 * ri - 1, 2), fe(0, 1), half.clone())
            .with(fe(2, 1), fe(1, 2), -one)
            .with(fe(2, 1), fe(0, 1), -half),
        ProofQuotient::T4_4 => GenEtaSpec::default()
            .with(fe(4 * ri - 3, 2), fe(k, 1), one.clone())
            .with(fe(4 * ri - 3, 2), fe(0, 1), half.clone())
            .with(fe(2, 1), fe(1, 2), -one)
            .with(fe(2, 1), fe(0, 1), -half),
    };
    Ok(spec)
}

/// Analyze one quotient summand at its catalogued period.
pub fn analyze_proof_quotient(which: ProofQuotient, r: usize, j: usize) -> Result<RobinsReport> {
    let spec = build_proof_quotients(which, r, j)?;
    robins_analyze(&spec, which.family().period_n(r))
}

/// Re-expand the quotient (sum) of a family exactly and compare it to the
/// matching Nahm sum with its constant included, up to `order`.
pub fn crosscheck_quotient_vs_nahm(
    family: QuotientFamily,
    r: usize,
    j: usize,
    order: FracExponent,
) -> Result<()> {
    let nahm_spec = build_family(family.nahm_family(), r, j)?;
    let lhs = eval_nahm(&nahm_spec, order, true)?;
    let rhs = match family {
        QuotientFamily::T4_1 => {
            let f1 = build_proof_quotients(ProofQuotient::T4_1F1, r, j)?.eval(order)?;
            let f2 = build_proof_quotients(ProofQuotient::T4_1F2, r, j)?.eval(order)?;
            f1.add(&f2)
        }
        QuotientFamily::T4_2 => {
            let g1 = build_proof_quotients(ProofQuotient::T4_2G1, r, j)?.eval(order)?;
            let g2 = build_proof_quotients(ProofQuotient::T4_2G2, r, j)?.eval(order)?;
            g1.add(&g2)
        }
        QuotientFamily::T4_3 => build_proof_quotients(ProofQuotient::T4_3, r, j)?.eval(order)?,
        QuotientFamily::T4_4 => build_proof_quotients(ProofQuotient::T4_4, r, j)?.eval(order)?,
    };
    let cmp = series_equal(&lhs, &rhs);
    if cmp.is_equal() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "quotient family {family}, r = {r}, j = {j}: {cmp}"
        )))
    }
}
