//! Generalized Nahm sums: spec types, validation, and exact evaluation.
//!
//! This module provides:
//! - [`NahmSpec`]: the quadruple (A, b, c, d) with an optional alternating-sign
//!   coordinate, plus [`NahmSpec::validate_symmetrizable`]
//! - [`build_family`]: the four built-in matrix/vector families
//! - [`build_capparelli`] and [`build_sum_c`]: the two special constructions
//! - [`eval_nahm`]: exact truncated-series evaluation with provably complete
//!   lattice enumeration (float bounds only ever widen the search region and
//!   every candidate is re-checked in exact arithmetic)
//! - [`eval_nahm_numeric`]: floating complex evaluation with a tail estimate
//! - [`eval_descending`]: the constrained descending multi-sums
//! - [`eval_wang_gen`]: direct evaluation of the auxiliary unconstrained sums

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::series::{rat, rat_int, FracExponent, PuiseuxSeries, Rat};

/// A generalized Nahm-sum descriptor: exponent ½ nᵀ A D n + nᵀ b (+ c)
/// with Pochhammer denominators (q^{d_i}; q^{d_i})_{n_i} and an optional
/// coordinate contributing a factor (−1)^{n_i}.
#[derive(Clone, Debug, PartialEq)]
pub struct NahmSpec {
    /// Rank r >= 1.
    pub r: usize,
    /// r x r rational matrix A.
    pub a: Vec<Vec<Rat>>,
    /// Length-r rational vector b.
    pub b: Vec<Rat>,
    /// Rational constant c.
    pub c: Rat,
    /// Length-r positive-integer symmetrizer diagonal d.
    pub d: Vec<i64>,
    /// Optional 1-based coordinate index i adding a factor (−1)^{n_i}.
    pub sign_coord: Option<usize>,
}

/// The four built-in modular families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NahmFamily {
    /// Symmetrizer (2,…,2,1); last diagonal entry of AD equal to r−1.
    T1_1_1,
    /// Symmetrizer (2,…,2,1); last diagonal entry of AD equal to r−1/2.
    T1_1_2,
    /// Symmetrizer (1,…,1,2); last diagonal entry of AD equal to 2(r−1).
    T1_2,
    /// Symmetrizer (1,…,1,2); last diagonal entry 2r−1 and sign coordinate r.
    T1_3,
}

impl fmt::Display for NahmFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NahmFamily::T1_1_1 => "T1.1-1",
            NahmFamily::T1_1_2 => "T1.1-2",
            NahmFamily::T1_2 => "T1.2",
            NahmFamily::T1_3 => "T1.3",
        };
        write!(f, "{s}")
    }
}

impl NahmSpec {
    /// The symmetrized matrix AD = A · diag(d).
    pub fn ad_matrix(&self) -> Vec<Vec<Rat>> {
        (0..self.r)
            .map(|i| {
                (0..self.r)
                    .map(|j| &self.a[i][j] * rat_int(self.d[j]))
                    .collect()
            })
            .collect()
    }

    /// True iff AD is exactly symmetric and positive definite (all leading
    /// principal minors > 0, exact rational arithmetic).
    pub fn validate_symmetrizable(&self) -> bool {
        if self.r == 0
            || self.a.len() != self.r
            || self.b.len() != self.r
            || self.d.len() != self.r
            || self.d.iter().any(|&di| di < 1)
            || self.a.iter().any(|row| row.len() != self.r)
        {
            return false;
        }
        let ad = self.ad_matrix();
        for i in 0..self.r {
            for j in 0..i {
                if ad[i][j] != ad[j][i] {
                    return false;
                }
            }
        }
        for k in 1..=self.r {
            if !leading_minor(&ad, k).is_positive() {
                return false;
            }
        }
        true
    }

    /// Serialize to the JSON schema
    /// `{"r":int,"A":[["num/den",...]],"b":[...],"c":"num/den","d":[int,...],"sign_coord":int|null}`.
    pub fn to_json(&self) -> serde_json::Value {
        use crate::series::rat_to_string;
        serde_json::json!({
            "r": self.r,
            "A": self.a.iter().map(|row| row.iter().map(rat_to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "b": self.b.iter().map(rat_to_string).collect::<Vec<_>>(),
            "c": rat_to_string(&self.c),
            "d": self.d,
            "sign_coord": self.sign_coord,
        })
    }

    /// Parse the JSON schema produced by [`Self::to_json`].
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        use crate::series::rat_parse;
        let r = v["r"]
            .as_u64()
            .ok_or_else(|| Error::Parse("missing r".into()))? as usize;
        let parse_vec = |val: &serde_json::Value, what: &str| -> Result<Vec<Rat>> {
            val.as_array()
                .ok_or_else(|| Error::Parse(format!("missing {what}")))?
                .iter()
                .map(|x| {
                    rat_parse(
                        x.as_str()
                            .ok_or_else(|| Error::Parse(format!("bad entry in {what}")))?,
                    )
                })
                .collect()
        };
        let a = v["A"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing A".into()))?
            .iter()
            .map(|row| parse_vec(row, "A row"))
            .collect::<Result<Vec<_>>>()?;
        let b = parse_vec(&v["b"], "b")?;
        let c = rat_parse(
            v["c"]
                .as_str()
                .ok_or_else(|| Error::Parse("missing c".into()))?,
        )?;
        let d = v["d"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing d".into()))?
            .iter()
            .map(|x| x.as_i64().ok_or_else(|| Error::Parse("bad d entry".into())))
            .collect::<Result<Vec<_>>>()?;
        let sign_coord = v["sign_coord"].as_u64().map(|x| x as usize);
        Ok(NahmSpec {
            r,
            a,
            b,
            c,
            d,
            sign_coord,
        })
    }
}

fn leading_minor(m: &[Vec<Rat>], k: usize) -> Rat {
    // exact determinant of the leading k x k block via Gaussian elimination
    let mut mat: Vec<Vec<Rat>> = (0..k).map(|i| m[i][..k].to_vec()).collect();
    let mut det = Rat::one();
    for col in 0..k {
        let pivot = (col..k).find(|&row| !mat[row][col].is_zero());
        let Some(p) = pivot else {
            return Rat::zero();
        };
        if p != col {
            mat.swap(p, col);
            det = -det;
        }
        let pv = mat[col][col].clone();
        det *= &pv;
        for row in col + 1..k {
            let f = &mat[row][col] / &pv;
            if f.is_zero() {
                continue;
            }
            for cc in col..k {
                let sub = &f * &mat[col][cc];
                mat[row][cc] -= sub;
            }
        }
    }
    det
}

/// Construct AD, b_j, c_j, d for one of the built-in families.
///
/// Ranges: r >= 2 and 0 <= j <= r. The internally stored A is AD · D^{-1}.
pub fn build_family(family: NahmFamily, r: usize, j: usize) -> Result<NahmSpec> {
    if r < 2 || j > r {
        return Err(Error::Domain(format!(
            "family {family} requires r >= 2 and 0 <= j <= r, got r={r}, j={j}"
        )));
    }
    let ri = r as i64;
    let ji = j as i64;
    let (ad, d): (Vec<Vec<Rat>>, Vec<i64>) = match family {
        NahmFamily::T1_1_1 | NahmFamily::T1_1_2 => {
            let mut ad = vec![vec![Rat::zero(); r]; r];
            ad[0][0] = rat_int(2);
            ad[0][r - 1] = rat_int(1);
            ad[r - 1][0] = rat_int(1);
            for i in 2..r {
                for k in 2..r {
                    ad[i - 1][k - 1] = rat_int(4 * (i.min(k) as i64 - 1));
                }
                ad[i - 1][r - 1] = rat_int(2 * (i as i64 - 1));
                ad[r - 1][i - 1] = rat_int(2 * (i as i64 - 1));
            }
            ad[r - 1][r - 1] = if family == NahmFamily::T1_1_1 {
                rat_int(ri - 1)
            } else {
                rat(2 * ri - 1, 2)
            };
            let mut d = vec![2i64; r];
            d[r - 1] = 1;
            (ad, d)
        }
        NahmFamily::T1_2 | NahmFamily::T1_3 => {
            let mut ad = vec![vec![Rat::zero(); r]; r];
            ad[0][0] = rat_int(1);
            ad[0][r - 1] = rat_int(1);
            ad[r - 1][0] = rat_int(1);
            for i in 2..r {
                for k in 2..r {
                    ad[i - 1][k - 1] = rat_int(2 * (i.min(k) as i64 - 1));
                }
                ad[i - 1][r - 1] = rat_int(2 * (i as i64 - 1));
                ad[r - 1][i - 1] = rat_int(2 * (i as i64 - 1));
            }
            ad[r - 1][r - 1] = if family == NahmFamily::T1_2 {
                rat_int(2 * (ri - 1))
            } else {
                rat_int(2 * ri - 1)
            };
            let mut d = vec![1i64; r];
            d[r - 1] = 2;
            (ad, d)
        }
    };
    let (b, c): (Vec<Rat>, Rat) = match family {
        NahmFamily::T1_1_1 => {
            if j == 0 {
                (vec![Rat::zero(); r], rat(5 - 4 * ri, 32 * ri - 8))
            } else {
                let mut b = vec![Rat::zero(); r];
                b[0] = rat_int(1);
                for i in (j + 1)..r {
                    b[i - 1] = rat_int(2 * (i as i64 - ji));
                }
                b[r - 1] = rat_int(ri - ji);
                let t = 4 * ri - 4 * ji - 1;
                (b, rat(t * t, 32 * ri - 8))
            }
        }
        NahmFamily::T1_1_2 => {
            if j == 0 {
                let mut b = vec![Rat::zero(); r];
                b[r - 1] = rat(-1, 2);
                (b, rat(7 - 4 * ri, 32 * ri - 24))
            } else {
                let mut b = vec![Rat::zero(); r];
                b[0] = rat_int(1);
                for i in (j + 1)..r {
                    b[i - 1] = rat_int(2 * (i as i64 - ji));
                }
                b[r - 1] = rat_int(ri - ji - 1);
                let t = 4 * ri - 4 * ji - 3;
                (b, rat(t * t, 32 * ri - 24))
            }
        }
        NahmFamily::T1_2 => {
            if j == 0 {
                let mut b = vec![Rat::zero(); r];
                b[0] = rat_int(1);
                for i in 2..=r {
                    b[i - 1] = rat_int(i as i64 - 1);
                }
                (b, rat(8 * ri * ri - 14 * ri + 5, 32 * ri - 8))
            } else {
                let mut b = vec![Rat::zero(); r];
                for i in (j + 1)..=r {
                    b[i - 1] = rat_int(i as i64 - ji);
                }
                let rj = ri - ji;
                (b, rat(8 * rj * rj + 4 * ji - 6 * ri + 1, 32 * ri - 8))
            }
        }
        NahmFamily::T1_3 => {
            if j == 0 {
                let mut b = vec![Rat::zero(); r];
                b[0] = rat_int(1);
                for i in 2..=r {
                    b[i - 1] = rat_int(i as i64 - 1);
                }
                (b, rat(4 * ri * ri - 11 * ri + 7, 16 * ri - 12))
            } else {
                let mut b = vec![Rat::zero(); r];
                for i in (j + 1)..r {
                    b[i - 1] = rat_int(i as i64 - ji);
                }
                b[r - 1] = rat_int(ri - ji - 1);
                let rj = ri - ji;
                (b, rat(4 * rj * rj + 6 * ji - 7 * ri + 3, 16 * ri - 12))
            }
        }
    };
    // A = AD * D^{-1}
    let a: Vec<Vec<Rat>> = ad
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(k, v)| v / rat_int(d[k]))
                .collect()
        })
        .collect();
    Ok(NahmSpec {
        r,
        a,
        b,
        c,
        d,
        sign_coord: if family == NahmFamily::T1_3 {
            Some(r)
        } else {
            None
        },
    })
}

/// The rank-2 spec whose sum side matches one of Capparelli's partition
/// identities: A = [[4,2],[6,4]], b = 0, c = −1/24, d = (1,3).
pub fn build_capparelli() -> NahmSpec {
    NahmSpec {
        r: 2,
        a: vec![
            vec![rat_int(4), rat_int(2)],
            vec![rat_int(6), rat_int(4)],
        ],
        b: vec![Rat::zero(), Rat::zero()],
        c: rat(-1, 24),
        d: vec![1, 3],
        sign_coord: None,
    }
}

/// The two specs of the combined-sum identity for r >= 3: both share the
/// first family's matrix A and symmetrizer (2,…,2,1), with
/// b = (0,…,0,1) and b~ = (1,2,4,…,2(r−2),r); the second sum carries an
/// additive exponent shift (r−3)/2. Both c's are zero because the series
/// identity carries no constant; the numeric constants belong to the
/// modular-evaluation context.
pub fn build_sum_c(r: usize) -> Result<(NahmSpec, NahmSpec, FracExponent)> {
    if r < 3 {
        return Err(Error::Domain(format!("combined sum requires r >= 3, got {r}")));
    }
    let base = build_family(NahmFamily::T1_1_1, r, 0)?;
    let mut b1 = vec![Rat::zero(); r];
    b1[r - 1] = rat_int(1);
    let mut b2 = vec![Rat::zero(); r];
    b2[0] = rat_int(1);
    for i in 2..r {
        b2[i - 1] = rat_int(2 * (i as i64 - 1));
    }
    b2[r - 1] = rat_int(r as i64);
    let spec1 = NahmSpec {
        b: b1,
        c: Rat::zero(),
        ..base.clone()
    };
    let spec2 = NahmSpec {
        b: b2,
        c: Rat::zero(),
        ..base
    };
    Ok((spec1, spec2, FracExponent::new(r as i64 - 3, 2)))
}

/// Options controlling exact Nahm-sum evaluation.
#[derive(Clone, Copy, Debug, Default)]
pub struct EvalOptions {
    /// Widen every per-coordinate enumeration cap by this much (the sentinel
    /// completeness test re-runs with +2 and expects identical output).
    pub cap_margin: i64,
}

/// Exact truncated-series evaluation of the generalized Nahm sum.
pub fn eval_nahm(spec: &NahmSpec, order: FracExponent, include_c: bool) -> Result<PuiseuxSeries> {
    eval_nahm_with(spec, order, include_c, EvalOptions::default())
}

/// As [`eval_nahm`], with explicit enumeration options.
pub fn eval_nahm_with(
    spec: &NahmSpec,
    order: FracExponent,
    include_c: bool,
    opts: EvalOptions,
) -> Result<PuiseuxSeries> {
    if !spec.validate_symmetrizable() {
        return Err(Error::Domain(
            "Nahm spec must have AD exactly symmetric positive definite".into(),
        ));
    }
    let r = spec.r;
    let ad = spec.ad_matrix();
    // Effective exponent budget for ½nᵀADn + nᵀb (c only shifts).
    let order_rat = order.to_rat();
    let budget = if include_c {
        &order_rat - &spec.c
    } else {
        order_rat.clone()
    };
    let budget_f = rat_to_f64(&budget).max(0.0);
    // Per-coordinate cap from the PD form: ½ λ_min |n|² − |b| |n| < budget.
    let lam = min_eigenvalue(&ad);
    let bnorm = spec
        .b
        .iter()
        .map(|x| rat_to_f64(x).abs())
        .fold(0.0f64, |a, x| a + x * x)
        .sqrt();
    let lam_safe = lam / 1.1;
    let radius = ((bnorm + (bnorm * bnorm + 2.0 * lam_safe * budget_f).sqrt()) / lam_safe).ceil()
        as i64
        + 2
        + opts.cap_margin;
    let caps = vec![radius.max(0); r];
    // When all cross terms are nonnegative, per-coordinate minimum
    // contributions give an exact tail lower bound for pruning.
    let nonneg_cross = (0..r).all(|i| (0..r).all(|k| i == k || !ad[i][k].is_negative()));
    let mut tail_min = vec![Rat::zero(); r + 1];
    if nonneg_cross {
        for i in (0..r).rev() {
            let mut mi = Rat::zero();
            for n in 0..=caps[i] {
                let nn = rat_int(n);
                let v = rat(1, 2) * &ad[i][i] * &nn * &nn + &spec.b[i] * &nn;
                if v < mi {
                    mi = v;
                }
            }
            tail_min[i] = &tail_min[i + 1] + mi;
        }
    } else {
        // No useful tail bound; rely on the exact per-point acceptance test.
        let huge = rat_int(-1_000_000_000);
        for i in 0..r {
            tail_min[i] = huge.clone();
        }
    }

    let mut memo = PochhammerInverses::new(order);
    let mut acc = PuiseuxSeries::zero(order);
    let mut n = vec![0i64; r];
    let unit = PuiseuxSeries::one(order);
    recurse_nahm(
        spec, &ad, &caps, &tail_min, &budget, order, include_c, nonneg_cross, &mut memo, &unit,
        &Rat::zero(), &mut n, 0, &mut acc,
    )?;
    Ok(acc)
}

#[allow(clippy::too_many_arguments)]
fn recurse_nahm(
    spec: &NahmSpec,
    ad: &[Vec<Rat>],
    caps: &[i64],
    tail_min: &[Rat],
    budget: &Rat,
    order: FracExponent,
    include_c: bool,
    nonneg_cross: bool,
    memo: &mut PochhammerInverses,
    partial_series: &PuiseuxSeries,
    partial_exp: &Rat,
    n: &mut Vec<i64>,
    level: usize,
    acc: &mut PuiseuxSeries,
) -> Result<()> {
    let r = spec.r;
    if level == r {
        if partial_exp < budget {
            let mut e = partial_exp.clone();
            if include_c {
                e += &spec.c;
            }
            let sign = match spec.sign_coord {
                Some(i) if n[i - 1] % 2 == 1 => rat_int(-1),
                _ => Rat::one(),
            };
            let shift = FracExponent::from_rat(&e);
            acc_add(acc, &partial_series.shifted_scaled(shift, &sign), order);
        }
        return Ok(());
    }
    let mut prev_exp: Option<Rat> = None;
    for ni in 0..=caps[level] {
        n[level] = ni;
        let nn = rat_int(ni);
        // exponent terms added by this coordinate
        let mut delta = rat(1, 2) * &ad[level][level] * &nn * &nn + &spec.b[level] * &nn;
        for k in 0..level {
            delta += &ad[k][level] * rat_int(n[k]) * &nn;
        }
        let p = partial_exp + &delta;
        let over = nonneg_cross && &p + &tail_min[level + 1] >= *budget;
        if over {
            if let Some(prev) = &prev_exp {
                if p >= *prev && ni >= 1 {
                    break; // exponent is now increasing; all later ni are worse
                }
            }
        }
        prev_exp = Some(p.clone());
        if over {
            continue;
        }
        let series = partial_series.mul(memo.inverse_pochhammer(spec.d[level], ni)?);
        recurse_nahm(
            spec, ad, caps, tail_min, budget, order, include_c, nonneg_cross, memo, &series, &p,
            n, level + 1, acc,
        )?;
    }
    n[level] = 0;
    Ok(())
}

fn acc_add(acc: &mut PuiseuxSeries, term: &PuiseuxSeries, order: FracExponent) {
    // keep the accumulator order pinned at the requested order
    *acc = acc.add(term).truncate(order);
}

/// Memoized inverted finite Pochhammer symbols 1/(q^a; q^s)_n (and shifted
/// variants) at a fixed truncation order.
pub struct PochhammerInverses {
    order: FracExponent,
    map: HashMap<(FracExponent, i8, FracExponent, u64), PuiseuxSeries>,
}

impl PochhammerInverses {
    /// New memo table at the given order.
    pub fn new(order: FracExponent) -> Self {
        PochhammerInverses {
            order,
            map: HashMap::new(),
        }
    }

    /// 1/(q^d; q^d)_n.
    pub fn inverse_pochhammer(&mut self, d: i64, n: i64) -> Result<&PuiseuxSeries> {
        self.inverse_general(FracExponent::int(d), 1, FracExponent::int(d), n as u64)
    }

    /// 1/(s q^e; q^t)_n, memoized.
    pub fn inverse_general(
        &mut self,
        e: FracExponent,
        sign: i8,
        t: FracExponent,
        n: u64,
    ) -> Result<&PuiseuxSeries> {
        let key = (e, sign, t, n);
        if !self.map.contains_key(&key) {
            let p = PuiseuxSeries::pochhammer_finite(e, sign, t, n, self.order)?;
            let inv = p.invert()?;
            self.map.insert(key, inv);
        }
        Ok(&self.map[&key])
    }

    /// The truncation order this table was built for.
    pub fn order(&self) -> FracExponent {
        self.order
    }
}

fn rat_to_f64(r: &Rat) -> f64 {
    r.numer().to_f64().unwrap_or(f64::MAX) / r.denom().to_f64().unwrap_or(1.0)
}

/// Smallest eigenvalue of a symmetric rational matrix, via float Jacobi
/// rotations (used only to widen enumeration boxes; exactness is preserved
/// because every candidate point is re-checked exactly).
fn min_eigenvalue(m: &[Vec<Rat>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .map(|row| row.iter().map(rat_to_f64).collect())
        .collect();
    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p][q] * a[p][q];
            }
        }
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-18 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).fold(f64::INFINITY, f64::min)
}

/// Floating complex evaluation of the Nahm sum at `q = exp(2 pi i tau)`,
/// including the `q^c` prefactor. Fractional powers are computed directly
/// from tau (principal-branch safe). Returns (value, crude tail estimate).
pub fn eval_nahm_numeric_tau(spec: &NahmSpec, tau: Complex64, n_cap: i64) -> Result<(Complex64, f64)> {
    if tau.im <= 0.0 {
        return Err(Error::Domain("tau must lie in the upper half plane".into()));
    }
    if !spec.validate_symmetrizable() {
        return Err(Error::Domain(
            "Nahm spec must have AD exactly symmetric positive definite".into(),
        ));
    }
    let r = spec.r;
    let ad = spec.ad_matrix();
    let adf: Vec<Vec<f64>> = ad
        .iter()
        .map(|row| row.iter().map(rat_to_f64).collect())
        .collect();
    let bf: Vec<f64> = spec.b.iter().map(rat_to_f64).collect();
    let cf = rat_to_f64(&spec.c);
    let two_pi_i_tau = Complex64::new(0.0, 2.0 * std::f64::consts::PI) * tau;
    let qabs = (-2.0 * std::f64::consts::PI * tau.im).exp();

    // denominator Pochhammers 1/(q^d; q^d)_n, complex
    let mut denom: HashMap<(i64, i64), Complex64> = HashMap::new();
    for &d in &spec.d {
        let qd = (two_pi_i_tau * d as f64).exp();
        let mut acc = Complex64::new(1.0, 0.0);
        denom.insert((d, 0), acc);
        for n in 1..=n_cap {
            acc *= Complex64::new(1.0, 0.0) - qd.powi(n as i32);
            denom.insert((d, n), acc);
        }
    }

    let mut sum = Complex64::new(0.0, 0.0);
    let mut n = vec![0i64; r];
    let mut min_boundary_exp = f64::INFINITY;
    loop {
        // exponent ½nᵀADn + nᵀb + c as float (for the value we use exact
        // rational exponent via floats of the same quantities; tau-based
        // exponentiation keeps the branch principal)
        let mut e = cf;
        for i in 0..r {
            e += bf[i] * n[i] as f64;
            for k in 0..r {
                e += 0.5 * adf[i][k] * (n[i] * n[k]) as f64;
            }
        }
        let mut term = (two_pi_i_tau * e).exp();
        for i in 0..r {
            term /= denom[&(spec.d[i], n[i])];
        }
        if let Some(i) = spec.sign_coord {
            if n[i - 1] % 2 == 1 {
                term = -term;
            }
        }
        sum += term;
        if n.iter().any(|&ni| ni == n_cap) {
            min_boundary_exp = min_boundary_exp.min(e);
        }
        // odometer increment
        let mut level = 0;
        loop {
            if level == r {
                let tail = if min_boundary_exp.is_finite() {
                    qabs.powf(min_boundary_exp.max(0.0)) * (n_cap as f64 + 1.0).powi(r as i32)
                } else {
                    0.0
                };
                return Ok((sum, tail));
            }
            n[level] += 1;
            if n[level] > n_cap {
                n[level] = 0;
                level += 1;
            } else {
                break;
            }
        }
    }
}

/// As [`eval_nahm_numeric_tau`] but taking `q` directly (|q| < 1); tau is
/// recovered with the principal branch of the logarithm.
pub fn eval_nahm_numeric(spec: &NahmSpec, q: Complex64, n_cap: i64) -> Result<(Complex64, f64)> {
    if q.norm() >= 1.0 {
        return Err(Error::Domain("|q| must be < 1".into()));
    }
    if q.norm() == 0.0 {
        // only n = 0 survives; q^c -> limit handled as 1 when c = 0
        return Ok((Complex64::new(1.0, 0.0), 0.0));
    }
    let tau = q.ln() / Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    eval_nahm_numeric_tau(spec, tau, n_cap)
}

/// Family tags for the constrained descending multi-sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DescendingFamily {
    /// Plain squares over (q;q)/(q;q²) denominators.
    D2_1a,
    /// Indexed variant with (q³;q²) tail, 1 <= j <= r.
    D2_1b,
    /// Squares plus a binomial(N,2) in the last coordinate.
    D2_1c,
    /// Indexed variant of the binomial family, 1 <= j <= r.
    D2_1d,
    /// Alternating family with doubled squares and an extra last-square.
    D2_2a,
    /// Alternating indexed family, 1 <= j <= r.
    D2_2b,
    /// Three-term-numerator family, r >= 3.
    D2_3a,
    /// Half-integer-exponent numerator family, r >= 3.
    D2_3b,
    /// Doubled-squares family without the extra last-square.
    D2_4a,
    /// Indexed doubled-squares family, 1 <= j <= r.
    D2_4b,
}

impl fmt::Display for DescendingFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DescendingFamily::D2_1a => "2.1a",
            DescendingFamily::D2_1b => "2.1b",
            DescendingFamily::D2_1c => "2.1c",
            DescendingFamily::D2_1d => "2.1d",
            DescendingFamily::D2_2a => "2.2a",
            DescendingFamily::D2_2b => "2.2b",
            DescendingFamily::D2_3a => "2.3a",
            DescendingFamily::D2_3b => "2.3b",
            DescendingFamily::D2_4a => "2.4a",
            DescendingFamily::D2_4b => "2.4b",
        };
        write!(f, "{s}")
    }
}

/// A descending multi-sum instance (family, rank, optional index j).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DescendingSumSpec {
    pub family: DescendingFamily,
    pub r: usize,
    pub j: usize,
}

impl DescendingSumSpec {
    /// Validate the (family, r, j) ranges.
    pub fn validate(&self) -> Result<()> {
        use DescendingFamily::*;
        let needs_j = matches!(self.family, D2_1b | D2_1d | D2_2b | D2_4b);
        if self.r < 2 {
            return Err(Error::Domain("descending sums require r >= 2".into()));
        }
        if matches!(self.family, D2_3a | D2_3b) && self.r < 3 {
            return Err(Error::Domain(format!(
                "family {} requires r >= 3",
                self.family
            )));
        }
        if needs_j {
            if self.j < 1 || self.j > self.r {
                return Err(Error::Domain(format!(
                    "family {} requires 1 <= j <= r",
                    self.family
                )));
            }
        } else if self.j != 0 {
            return Err(Error::Domain(format!(
                "family {} takes no index j",
                self.family
            )));
        }
        Ok(())
    }
}

/// Exact evaluation of a constrained descending multi-sum over
/// N_1 >= N_2 >= … >= N_{r-1} >= 0.
pub fn eval_descending(spec: &DescendingSumSpec, order: FracExponent) -> Result<PuiseuxSeries> {
    spec.validate()?;
    let m = spec.r - 1; // number of summation variables
    let mut memo = PochhammerInverses::new(order);
    let mut acc = PuiseuxSeries::zero(order);
    // Outer bound: every family's exponent is at least N1^2 - 2 N1 - 1.
    let order_f = order.to_rat();
    let mut n1 = 0i64;
    loop {
        let lower = rat_int(n1 * n1 - 2 * n1 - 1);
        if n1 > 2 && lower >= order_f {
            break;
        }
        let mut ns = vec![0i64; m];
        ns[0] = n1;
        descend(spec, &mut ns, 1, order, &mut memo, &mut acc)?;
        n1 += 1;
    }
    Ok(acc)
}

fn descend(
    spec: &DescendingSumSpec,
    ns: &mut Vec<i64>,
    level: usize,
    order: FracExponent,
    memo: &mut PochhammerInverses,
    acc: &mut PuiseuxSeries,
) -> Result<()> {
    let m = spec.r - 1;
    if level == m {
        add_descending_term(spec, ns, order, memo, acc)?;
        return Ok(());
    }
    for v in 0..=ns[level - 1] {
        ns[level] = v;
        descend(spec, ns, level + 1, order, memo, acc)?;
    }
    ns[level] = 0;
    Ok(())
}

fn add_descending_term(
    spec: &DescendingSumSpec,
    ns: &[i64],
    order: FracExponent,
    memo: &mut PochhammerInverses,
    acc: &mut PuiseuxSeries,
) -> Result<()> {
    use DescendingFamily::*;
    let m = spec.r - 1;
    let last = ns[m - 1];
    let s2: i64 = ns.iter().map(|x| x * x).sum();
    let s1: i64 = ns.iter().sum();
    let j = spec.j;
    let fe_int = FracExponent::int;

    // exponent (as FracExponent), numerator polynomial terms (exp, coeff),
    // sign, difference-factor base (1 for (q;q), 2 for (q^2;q^2)).
    let (exp, diff_base): (FracExponent, i64) = match spec.family {
        D2_1a => (fe_int(s2), 1),
        D2_1b => {
            let head: i64 = ns[..j.min(m)].iter().take(j.saturating_sub(1)).sum();
            let tail: i64 = ns[j.saturating_sub(1).min(m)..].iter().sum();
            // N_1 + … + N_{j-1} + 2(N_j + … + N_{r-1})
            (fe_int(s2 + head + 2 * tail), 1)
        }
        D2_1c => (fe_int(s2 + last * (last - 1) / 2), 1),
        D2_1d => {
            let head: i64 = ns[..j.min(m)].iter().take(j.saturating_sub(1)).sum();
            let tail: i64 = ns[j.saturating_sub(1).min(m)..].iter().sum();
            (fe_int(s2 + head + 2 * tail + last * (last - 1) / 2), 1)
        }
        D2_2a => (fe_int(2 * (s2 + s1) + last * last), 2),
        D2_2b => {
            let tail: i64 = ns[j - 1..].iter().sum();
            (fe_int(2 * (s2 + tail) + last * last - 2 * last), 2)
        }
        D2_3a => (fe_int(s2 + last), 1),
        D2_3b => {
            let head: i64 = ns[..m - 1].iter().sum();
            (fe_int(s2 + head + 2 * last), 1)
        }
        D2_4a => (fe_int(2 * (s2 + s1)), 2),
        D2_4b => {
            let tail: i64 = ns[j - 1..].iter().sum();
            (fe_int(2 * (s2 + tail)), 2)
        }
    };

    // cheap rejection: exponent alone (numerator can lower it by at most 1)
    if exp.sub(FracExponent::int(1)) >= order {
        return Ok(());
    }

    // denominator: difference factors
    let mut series = PuiseuxSeries::one(order);
    for w in ns.windows(2) {
        series = series.mul(memo.inverse_general(
            fe_int(diff_base),
            1,
            fe_int(diff_base),
            (w[0] - w[1]) as u64,
        )?);
    }
    // tail factors
    let lastu = last as u64;
    match spec.family {
        D2_1a | D2_3a => {
            series = series.mul(memo.inverse_general(fe_int(1), 1, fe_int(1), lastu)?);
            series = series.mul(memo.inverse_general(fe_int(1), 1, fe_int(2), lastu)?);
        }
        D2_1c => {
            series = series.mul(memo.inverse_general(fe_int(1), 1, fe_int(1), lastu)?);
            series = series.mul(memo.inverse_general(fe_int(1), 1, fe_int(2), lastu)?);
        }
        D2_1b | D2_1d => {
            series = series.mul(memo.inverse_general(fe_int(1), 1, fe_int(1), lastu)?);
            series = series.mul(memo.inverse_general(fe_int(3), 1, fe_int(2), lastu)?);
        }
        D2_2a | D2_4a => {
            series = series.mul(memo.inverse_general(fe_int(4), 1, fe_int(4), lastu)?);
            series = series.mul(memo.inverse_general(fe_int(3), -1, fe_int(2), lastu)?);
        }
        D2_2b | D2_4b => {
            series = series.mul(memo.inverse_general(fe_int(4), 1, fe_int(4), lastu)?);
            series = series.mul(memo.inverse_general(fe_int(1), -1, fe_int(2), lastu)?);
        }
        D2_3b => {
            series = series.mul(memo.inverse_general(
                FracExponent::new(1, 2),
                -1,
                fe_int(1),
                lastu + 1,
            )?);
            series = series.mul(memo.inverse_general(fe_int(2), 1, fe_int(2), lastu)?);
        }
    }

    // numerator polynomial and sign
    let sign = match spec.family {
        D2_2a | D2_2b => {
            if last % 2 == 1 {
                rat_int(-1)
            } else {
                Rat::one()
            }
        }
        _ => Rat::one(),
    };
    match spec.family {
        D2_3a => {
            // (1 + q^{-1} - q^{N-1})
            let mut num = PuiseuxSeries::one(order);
            num = num.add(&PuiseuxSeries::monomial(fe_int(-1), rat_int(1), order)?);
            let e = fe_int(last - 1);
            if e < order {
                num = num.add(&PuiseuxSeries::monomial(e, rat_int(-1), order)?);
            }
            series = series.mul(&num);
        }
        D2_3b => {
            // (1 + q + q^{N+1/2})
            let mut num = PuiseuxSeries::one(order);
            num = num.add(&PuiseuxSeries::monomial(fe_int(1), rat_int(1), order)?);
            let e = FracExponent::new(2 * last + 1, 2);
            if e < order {
                num = num.add(&PuiseuxSeries::monomial(e, rat_int(1), order)?);
            }
            series = series.mul(&num);
        }
        _ => {}
    }

    *acc = acc.add(&series.shifted_scaled(exp, &sign)).truncate(order);
    Ok(())
}

/// Direct evaluation of the auxiliary unconstrained sums over n in N^r with
/// exponent ½ n₁² + n₁ N_{r−1} + Σ N_i² plus family-specific linear terms,
/// where N_i = n_{i+1} + … + n_r, and denominators
/// (q;q)_{n_1} … (q;q)_{n_{r−1}} (q²;q²)_{n_r}.
///
/// `which` selects the variant: 1 adds n₁ + N_1 + … + N_{r−1} (no j);
/// 2 adds N_j + … + N_{r−1} for 1 <= j <= r.
pub fn eval_wang_gen(which: u8, r: usize, j: usize, order: FracExponent) -> Result<PuiseuxSeries> {
    if r < 2 {
        return Err(Error::Domain("requires r >= 2".into()));
    }
    match which {
        1 => {
            if j != 0 {
                return Err(Error::Domain("variant 1 takes no index j".into()));
            }
        }
        2 => {
            if j < 1 || j > r {
                return Err(Error::Domain("variant 2 requires 1 <= j <= r".into()));
            }
        }
        _ => return Err(Error::Domain("variant must be 1 or 2".into())),
    }
    let mut memo = PochhammerInverses::new(order);
    let order_rat = order.to_rat();
    // caps: ½ n₁² < order; for i >= 2, n_i <= N_1 and N_1² < order.
    let cap1 = (2.0 * rat_to_f64(&order_rat)).sqrt().ceil() as i64 + 2;
    let cap = (rat_to_f64(&order_rat)).sqrt().ceil() as i64 + 2;
    let mut n = vec![0i64; r];
    let mut acc = PuiseuxSeries::zero(order);
    wang_gen_recurse(
        which, r, j, order, &order_rat, cap1, cap, &mut n, 0, &mut memo, &mut acc,
    )?;
    Ok(acc)
}

#[allow(clippy::too_many_arguments)]
fn wang_gen_recurse(
    which: u8,
    r: usize,
    j: usize,
    order: FracExponent,
    order_rat: &Rat,
    cap1: i64,
    cap: i64,
    n: &mut Vec<i64>,
    level: usize,
    memo: &mut PochhammerInverses,
    acc: &mut PuiseuxSeries,
) -> Result<()> {
    if level == r {
        // N_i = n_{i+1} + … + n_r for 1 <= i <= r-1
        let mut nn = vec![0i64; r]; // nn[i] = N_{i+1}… use nn[i-1] = N_i
        let mut suffix = 0i64;
        for i in (1..r).rev() {
            suffix += n[i];
            nn[i - 1] = suffix;
        }
        let s2: i64 = nn[..r - 1].iter().map(|x| x * x).sum();
        let extra: i64 = match which {
            1 => n[0] + nn[..r - 1].iter().sum::<i64>(),
            _ => nn[j - 1..r - 1].iter().sum::<i64>(),
        };
        let last_n = nn[r - 2]; // N_{r-1} = n_r
        let exp_num = n[0] * n[0] + 2 * (n[0] * last_n + s2 + extra);
        let exp = FracExponent::new(exp_num, 2);
        if exp >= order {
            return Ok(());
        }
        let mut series = PuiseuxSeries::one(order);
        for item in n.iter().take(r - 1) {
            series = series.mul(memo.inverse_general(
                FracExponent::int(1),
                1,
                FracExponent::int(1),
                *item as u64,
            )?);
        }
        series = series.mul(memo.inverse_general(
            FracExponent::int(2),
            1,
            FracExponent::int(2),
            n[r - 1] as u64,
        )?);
        *acc = acc
            .add(&series.shifted_scaled(exp, &Rat::one()))
            .truncate(order);
        return Ok(());
    }
    let this_cap = if level == 0 { cap1 } else { cap };
    for v in 0..=this_cap {
        n[level] = v;
        // partial lower bound: ½ n₁² plus squares of fully determined N's is
        // not yet available mid-recursion; rely on the cheap exact leaf test.
        wang_gen_recurse(
            which, r, j, order, order_rat, cap1, cap, n, level + 1, memo, acc,
        )?;
    }
    n[level] = 0;
    Ok(())
}
