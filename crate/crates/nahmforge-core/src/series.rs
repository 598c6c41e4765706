//! Exact truncated Puiseux-series arithmetic over the rationals.
//!
//! This module is the substrate every other module computes in:
//! - [`FracExponent`]: an exact fractional exponent k/D
//! - [`PuiseuxSeries`]: a truncated formal series in q^{1/D} with exact
//!   rational coefficients and an explicit truncation order
//! - Pochhammer products: [`PuiseuxSeries::pochhammer_finite`],
//!   [`PuiseuxSeries::pochhammer_infinite`], and the signed-base variants
//! - Equality with first-mismatch reporting: [`series_equal`]
//!
//! Conventions:
//! - A series is exact for all exponents strictly below its order and unknown
//!   at or above it.
//! - Binary operations produce order `min(order_a, order_b)`; valuation
//!   bonuses are deliberately ignored (callers request a larger order
//!   instead).
//! - Coefficients are arbitrary-precision rationals; no stored zeros.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::BigRational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar (always reduced, denominator > 0).
pub type Rat = BigRational;

/// Convenience constructor for a rational n/d.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Convenience constructor for an integer rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parse a rational from "num/den" or "num" text.
pub fn rat_parse(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let num: BigInt = n
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator {n:?}")))?;
    let den: BigInt = d
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator {d:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(Rat::new(num, den))
}

/// Render a rational as "num/den" (or "num" if integral).
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// An exact fractional exponent `num/den` with `den >= 1`, always reduced.
///
/// All comparisons and arithmetic are exact (128-bit cross multiplication).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FracExponent {
    num: i64,
    den: i64,
}

impl FracExponent {
    /// Build `num/den`, reducing to lowest terms; `den` must be nonzero.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "FracExponent denominator must be nonzero");
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = num.gcd(&den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        FracExponent { num, den }
    }

    /// The integer exponent `n`.
    pub fn int(n: i64) -> Self {
        FracExponent { num: n, den: 1 }
    }

    /// Exponent zero.
    pub fn zero() -> Self {
        FracExponent { num: 0, den: 1 }
    }

    /// Numerator (of the reduced form).
    pub fn numer(&self) -> i64 {
        self.num
    }

    /// Denominator (of the reduced form, always >= 1).
    pub fn denom(&self) -> i64 {
        self.den
    }

    /// Exact sum.
    pub fn add(self, other: Self) -> Self {
        let d = lcm64(self.den, other.den);
        FracExponent::new(
            self.num * (d / self.den) + other.num * (d / other.den),
            d,
        )
    }

    /// Exact difference.
    pub fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }

    /// Negation.
    pub fn neg(self) -> Self {
        FracExponent {
            num: -self.num,
            den: self.den,
        }
    }

    /// Multiply by an integer.
    pub fn mul_int(self, k: i64) -> Self {
        FracExponent::new(self.num * k, self.den)
    }

    /// Multiply by another fractional exponent (used for exponent rescaling).
    pub fn mul(self, other: Self) -> Self {
        FracExponent::new(self.num * other.num, self.den * other.den)
    }

    /// Exact rational value as a [`Rat`].
    pub fn to_rat(&self) -> Rat {
        rat(self.num, self.den)
    }

    /// Build from a [`Rat`] (must fit in i64 components).
    pub fn from_rat(r: &Rat) -> Self {
        use num_traits::ToPrimitive;
        let num = r.numer().to_i64().expect("exponent numerator overflow");
        let den = r.denom().to_i64().expect("exponent denominator overflow");
        FracExponent::new(num, den)
    }

    /// True iff the exponent is an integer.
    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    /// Floating-point value (for numeric modules only).
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for FracExponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FracExponent {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.num as i128 * other.den as i128;
        let rhs = other.num as i128 * self.den as i128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for FracExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn lcm64(a: i64, b: i64) -> i64 {
    a / a.gcd(&b) * b
}

/// A truncated formal Puiseux series: a sparse map from integer key `k` to the
/// rational coefficient of `q^{k/D}`, exact for all exponents below `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxSeries {
    d: i64,
    coeffs: BTreeMap<i64, Rat>,
    order: FracExponent,
}

impl PuiseuxSeries {
    /// The zero series, known up to `order`.
    pub fn zero(order: FracExponent) -> Self {
        PuiseuxSeries {
            d: 1,
            coeffs: BTreeMap::new(),
            order,
        }
    }

    /// The constant series `c`, known up to `order` (which must be positive
    /// for the constant to be representable; callers at order <= 0 get the
    /// empty series).
    pub fn constant(c: Rat, order: FracExponent) -> Self {
        let mut s = PuiseuxSeries::zero(order);
        if !c.is_zero() && FracExponent::zero() < order {
            s.coeffs.insert(0, c);
        }
        s
    }

    /// The constant series 1.
    pub fn one(order: FracExponent) -> Self {
        PuiseuxSeries::constant(Rat::one(), order)
    }

    /// A single-term series `c * q^e` with truncation order `order`.
    /// Errors if `e >= order` (nothing would be representable).
    pub fn monomial(e: FracExponent, c: Rat, order: FracExponent) -> Result<Self> {
        if e >= order {
            return Err(Error::EmptySeries {
                exponent: e,
                order,
            });
        }
        let mut s = PuiseuxSeries {
            d: e.denom(),
            coeffs: BTreeMap::new(),
            order,
        };
        if !c.is_zero() {
            s.coeffs.insert(e.numer(), c);
        }
        Ok(s)
    }

    /// Common exponent denominator D.
    pub fn exponent_denominator(&self) -> i64 {
        self.d
    }

    /// Truncation order.
    pub fn order(&self) -> FracExponent {
        self.order
    }

    /// Number of stored nonzero terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    /// Iterate terms in increasing exponent order as (exponent, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (FracExponent, &Rat)> {
        let d = self.d;
        self.coeffs
            .iter()
            .map(move |(k, c)| (FracExponent::new(*k, d), c))
    }

    /// Coefficient at exponent `e` (zero if absent; exponents at or above the
    /// order are unknown and also reported as zero — use [`Self::order`] to
    /// guard).
    pub fn coeff(&self, e: FracExponent) -> Rat {
        // e = k/self.d requires self.d divisible by e.den after reduction.
        if self.d % e.denom() != 0 {
            return Rat::zero();
        }
        let k = e.numer() * (self.d / e.denom());
        self.coeffs.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    /// Smallest exponent with a nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<FracExponent> {
        self.coeffs
            .keys()
            .next()
            .map(|k| FracExponent::new(*k, self.d))
    }

    /// True iff no nonzero coefficient is stored (zero to the order).
    pub fn is_zero_series(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// First integer key (in denominator `d`) NOT strictly below `order`.
    fn key_limit(order: FracExponent, d: i64) -> i64 {
        // smallest K with K/d >= order  <=>  K = ceil(order.num * d / order.den)
        let num = order.numer() as i128 * d as i128;
        let den = order.denom() as i128;
        let k = if num >= 0 {
            (num + den - 1) / den
        } else {
            -((-num) / den)
        };
        k as i64
    }

    fn drop_unrepresentable(&mut self) {
        let limit = Self::key_limit(self.order, self.d);
        self.coeffs = std::mem::take(&mut self.coeffs)
            .into_iter()
            .filter(|(k, c)| *k < limit && !c.is_zero())
            .collect();
    }

    /// Rebase to a common denominator that is a multiple of the current one.
    fn rebased(&self, new_d: i64) -> Self {
        debug_assert!(new_d % self.d == 0);
        if new_d == self.d {
            return self.clone();
        }
        let f = new_d / self.d;
        PuiseuxSeries {
            d: new_d,
            coeffs: self.coeffs.iter().map(|(k, c)| (k * f, c.clone())).collect(),
            order: self.order,
        }
    }

    /// Reduce D by the gcd of all stored keys (keeps values identical).
    pub fn compact(&mut self) {
        let mut g = self.d;
        for k in self.coeffs.keys() {
            g = g.gcd(k);
            if g == 1 {
                return;
            }
        }
        if g > 1 {
            self.d /= g;
            self.coeffs = std::mem::take(&mut self.coeffs)
                .into_iter()
                .map(|(k, c)| (k / g, c))
                .collect();
        }
    }

    /// Sum; result order is min(order_a, order_b).
    pub fn add(&self, other: &Self) -> Self {
        let d = lcm64(self.d, other.d);
        let mut a = self.rebased(d);
        let b = other.rebased(d);
        a.order = a.order.min(b.order);
        for (k, c) in b.coeffs {
            let entry = a.coeffs.entry(k).or_insert_with(Rat::zero);
            *entry += c;
            if entry.is_zero() {
                a.coeffs.remove(&k);
            }
        }
        a.drop_unrepresentable();
        a
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        PuiseuxSeries {
            d: self.d,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c.clone())).collect(),
            order: self.order,
        }
    }

    /// Scale all coefficients by a rational constant.
    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return PuiseuxSeries::zero(self.order);
        }
        PuiseuxSeries {
            d: self.d,
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect(),
            order: self.order,
        }
    }

    /// Product. The result order is min(order_a, order_b), lowered further
    /// when a factor has negative valuation: unknown terms of one factor at
    /// or above its order meet known terms of the other at its valuation, so
    /// the product is only exact below min(order_a + min(v_b, 0),
    /// order_b + min(v_a, 0)).
    pub fn mul(&self, other: &Self) -> Self {
        let d = lcm64(self.d, other.d);
        let a = self.rebased(d);
        let b = other.rebased(d);
        let va = self.valuation().unwrap_or(self.order).min(FracExponent::zero());
        let vb = other
            .valuation()
            .unwrap_or(other.order)
            .min(FracExponent::zero());
        let order = a
            .order
            .min(b.order)
            .min(a.order.add(vb))
            .min(b.order.add(va));
        let limit = Self::key_limit(order, d);
        let mut coeffs: BTreeMap<i64, Rat> = BTreeMap::new();
        let b_terms: Vec<(&i64, &Rat)> = b.coeffs.iter().collect();
        for (ka, ca) in &a.coeffs {
            for (kb, cb) in &b_terms {
                let k = ka + **kb;
                if k >= limit {
                    break;
                }
                let entry = coeffs.entry(k).or_insert_with(Rat::zero);
                *entry += ca * *cb;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        PuiseuxSeries { d, coeffs, order }
    }

    /// `c * q^e * self`, with order shifted to order + e: exact knowledge of
    /// the series below its order is exact knowledge of the shifted series
    /// below order + e, in both directions.
    pub fn shifted_scaled(&self, e: FracExponent, c: &Rat) -> Self {
        if c.is_zero() {
            return PuiseuxSeries::zero(self.order.add(e));
        }
        let d = lcm64(self.d, e.denom());
        let a = self.rebased(d);
        let de = e.numer() * (d / e.denom());
        let order = a.order.add(e);
        let limit = Self::key_limit(order, d);
        let coeffs = a
            .coeffs
            .iter()
            .map(|(k, v)| (k + de, v * c))
            .filter(|(k, _)| *k < limit)
            .collect();
        PuiseuxSeries { d, coeffs, order }
    }

    /// Truncate to a (smaller) order.
    pub fn truncate(&self, new_order: FracExponent) -> Self {
        let mut s = self.clone();
        s.order = s.order.min(new_order);
        s.drop_unrepresentable();
        s
    }

    /// Multiplicative inverse. The input must have a nonzero leading
    /// coefficient at its minimal exponent v; the result has minimal exponent
    /// -v and order `order - 2v`.
    pub fn invert(&self) -> Result<Self> {
        let v_key = *self.coeffs.keys().next().ok_or(Error::NonInvertible)?;
        let d = self.d;
        let v = FracExponent::new(v_key, d);
        let c0 = self.coeffs[&v_key].clone();
        // u = self / (c0 q^v) - 1, with integer keys (k - v_key) over d.
        let u: Vec<(i64, Rat)> = self
            .coeffs
            .iter()
            .filter(|(k, _)| **k != v_key)
            .map(|(k, c)| (k - v_key, c / &c0))
            .collect();
        // w = 1/(1+u) is supported on the monoid generated by u's keys; work
        // densely on the stride gcd to keep the table small.
        let w_order = self.order.sub(v); // exponents (over d) where w is known
        let limit = Self::key_limit(w_order, d);
        let out_order = self.order.sub(v).sub(v);
        let mut out = PuiseuxSeries {
            d,
            coeffs: BTreeMap::new(),
            order: out_order,
        };
        let inv_c0 = Rat::one() / &c0;
        if u.is_empty() || limit <= 0 {
            // pure monomial: inverse is c0^{-1} q^{-v}
            let out_limit = Self::key_limit(out_order, d);
            if -v_key < out_limit {
                out.coeffs.insert(-v_key, inv_c0);
            }
            return Ok(out);
        }
        let mut g = 0i64;
        for (k, _) in &u {
            g = g.gcd(k);
        }
        debug_assert!(g >= 1);
        let n = ((limit - 1) / g) as usize; // indices 0..=n correspond to keys 0, g, 2g, ...
        let mut w: Vec<Rat> = vec![Rat::zero(); n + 1];
        w[0] = Rat::one();
        for i in 1..=n {
            let mut acc = Rat::zero();
            for (k, c) in &u {
                let j = k / g;
                if j as usize > i {
                    break;
                }
                acc += c * &w[i - j as usize];
            }
            w[i] = -acc;
        }
        let out_limit = Self::key_limit(out_order, d);
        for (i, wi) in w.into_iter().enumerate() {
            if wi.is_zero() {
                continue;
            }
            let k = -v_key + (i as i64) * g;
            if k < out_limit {
                out.coeffs.insert(k, wi * &inv_c0);
            }
        }
        Ok(out)
    }

    /// Integer power via repeated squaring; negative powers invert first.
    pub fn pow(&self, n: i64) -> Result<Self> {
        if n == 0 {
            return Ok(PuiseuxSeries::one(self.order));
        }
        let (mut base, mut e) = if n < 0 {
            (self.invert()?, (-n) as u64)
        } else {
            (self.clone(), n as u64)
        };
        let mut result = PuiseuxSeries::one(base.order);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    /// Exact coefficientwise square root; requires constant term exactly 1
    /// (callers extract monomial prefactors first).
    pub fn sqrt(&self) -> Result<Self> {
        match self.valuation() {
            Some(v) if v == FracExponent::zero() && self.coeffs[&0].is_one() => {}
            Some(v) => {
                return Err(Error::SqrtNonUnit {
                    exponent: v,
                    coeff: rat_to_string(&self.coeff(v)),
                })
            }
            None => {
                return Err(Error::SqrtNonUnit {
                    exponent: self.order,
                    coeff: "0".into(),
                })
            }
        }
        let d = self.d;
        let u: Vec<(i64, Rat)> = self
            .coeffs
            .iter()
            .filter(|(k, _)| **k != 0)
            .map(|(k, c)| (*k, c.clone()))
            .collect();
        let limit = Self::key_limit(self.order, d);
        let mut out = PuiseuxSeries {
            d,
            coeffs: BTreeMap::new(),
            order: self.order,
        };
        if u.is_empty() || limit <= 0 {
            if limit > 0 {
                out.coeffs.insert(0, Rat::one());
            }
            return Ok(out);
        }
        let mut g = 0i64;
        for (k, _) in &u {
            g = g.gcd(k);
        }
        let n = ((limit - 1) / g) as usize;
        let mut s: Vec<Rat> = vec![Rat::zero(); n + 1];
        s[0] = Rat::one();
        let half = rat(1, 2);
        for i in 1..=n {
            // (sum over j of s_j s_{i-j}) = a_i  =>  2 s_i = a_i - sum_{0<j<i}
            let mut acc = self
                .coeffs
                .get(&((i as i64) * g))
                .cloned()
                .unwrap_or_else(Rat::zero);
            for j in 1..i {
                acc -= &s[j] * &s[i - j];
            }
            s[i] = acc * &half;
        }
        for (i, si) in s.into_iter().enumerate() {
            if !si.is_zero() {
                out.coeffs.insert((i as i64) * g, si);
            }
        }
        Ok(out)
    }

    /// Substitute q -> q^factor for a positive rational factor: every
    /// exponent (and the order) is multiplied by `factor`.
    pub fn scale_exponents(&self, factor: FracExponent) -> Result<Self> {
        if factor <= FracExponent::zero() {
            return Err(Error::Domain("exponent scale factor must be positive".into()));
        }
        let d = self.d * factor.denom();
        let mut out = PuiseuxSeries {
            d,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| (k * factor.numer(), c.clone()))
                .collect(),
            order: self.order.mul(factor),
        };
        out.compact();
        Ok(out)
    }

    /// Finite Pochhammer product `prod_{i=0}^{n-1} (1 - s * q^{e + i t})`
    /// with `s = base_sign`.
    pub fn pochhammer_finite(
        base_exp: FracExponent,
        base_sign: i8,
        step: FracExponent,
        n: u64,
        order: FracExponent,
    ) -> Result<Self> {
        if step <= FracExponent::zero() {
            return Err(Error::Domain("pochhammer step must be positive".into()));
        }
        let mut acc = PuiseuxSeries::one(order);
        for i in 0..n {
            let e = base_exp.add(step.mul_int(i as i64));
            acc = acc.mul(&factor_series(e, base_sign, order)?);
        }
        Ok(acc)
    }

    /// Infinite Pochhammer product `prod_{i>=0} (1 - s * q^{e + i t})`,
    /// exact to `order`. Errors if `e < 0` (divergent).
    pub fn pochhammer_infinite(
        base_exp: FracExponent,
        base_sign: i8,
        step: FracExponent,
        order: FracExponent,
    ) -> Result<Self> {
        Self::signed_pochhammer_infinite(base_sign, base_exp, 1, step, order)
    }

    /// General signed infinite product for `(x; y)_infty` with `x = sx * q^ex`
    /// and `y = sy * q^ey`: `prod_{n>=0} (1 - sx * sy^n * q^{ex + n ey})`.
    ///
    /// This covers bases and moduli like `(-q^a; -q^m)_infty` needed by the
    /// alternating triple products. Errors if `ex < 0` or `ey <= 0`.
    pub fn signed_pochhammer_infinite(
        sx: i8,
        ex: FracExponent,
        sy: i8,
        ey: FracExponent,
        order: FracExponent,
    ) -> Result<Self> {
        if ey <= FracExponent::zero() {
            return Err(Error::Domain("pochhammer step must be positive".into()));
        }
        if ex < FracExponent::zero() {
            return Err(Error::DivergentProduct(ex));
        }
        let mut acc = PuiseuxSeries::one(order);
        let mut n: i64 = 0;
        loop {
            let e = ex.add(ey.mul_int(n));
            if e >= order {
                break;
            }
            // sign of the factor base: sx * sy^n
            let s = if sy < 0 && n % 2 == 1 { -sx } else { sx };
            acc = acc.mul(&factor_series(e, s, order)?);
            if acc.is_zero_series() {
                break;
            }
            n += 1;
        }
        Ok(acc)
    }

    /// Convenience wrapper for `(x; -q^m)_infty` with `x = sx q^ex`:
    /// expands `prod (1 - x (-1)^n q^{mn})` factor by factor.
    pub fn alt_pochhammer_infinite(
        sx: i8,
        ex: FracExponent,
        m: FracExponent,
        order: FracExponent,
    ) -> Result<Self> {
        Self::signed_pochhammer_infinite(sx, ex, -1, m, order)
    }

    /// Serialize to the JSON schema
    /// `{"D": int, "order_num": int, "order_den": int, "terms": [[k, "num/den"], ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "D": self.d,
            "order_num": self.order.numer(),
            "order_den": self.order.denom(),
            "terms": self
                .coeffs
                .iter()
                .map(|(k, c)| serde_json::json!([k, rat_to_string(c)]))
                .collect::<Vec<_>>(),
        })
    }

    /// Parse the JSON schema produced by [`Self::to_json`].
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let d = v["D"]
            .as_i64()
            .ok_or_else(|| Error::Parse("missing D".into()))?;
        if d < 1 {
            return Err(Error::Parse("D must be >= 1".into()));
        }
        let on = v["order_num"]
            .as_i64()
            .ok_or_else(|| Error::Parse("missing order_num".into()))?;
        let od = v["order_den"]
            .as_i64()
            .ok_or_else(|| Error::Parse("missing order_den".into()))?;
        let order = FracExponent::new(on, od);
        let mut coeffs = BTreeMap::new();
        for t in v["terms"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing terms".into()))?
        {
            let k = t[0]
                .as_i64()
                .ok_or_else(|| Error::Parse("bad term key".into()))?;
            let c = rat_parse(
                t[1].as_str()
                    .ok_or_else(|| Error::Parse("bad term coefficient".into()))?,
            )?;
            if !c.is_zero() {
                coeffs.insert(k, c);
            }
        }
        let mut s = PuiseuxSeries { d, coeffs, order };
        s.drop_unrepresentable();
        Ok(s)
    }
}

/// One Pochhammer factor `1 - s q^e` as a series (factors at or above the
/// order degenerate to the constant 1).
fn factor_series(e: FracExponent, s: i8, order: FracExponent) -> Result<PuiseuxSeries> {
    let mut acc = PuiseuxSeries::one(order);
    if e < order {
        let c = if s >= 0 { rat_int(-1) } else { rat_int(1) };
        let m = PuiseuxSeries::monomial(e, c, order)?;
        acc = acc.add(&m);
    }
    Ok(acc)
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        } else {
            let mut first = true;
            for (e, c) in self.terms() {
                let neg = c.is_negative();
                let mag = c.abs();
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                    first = false;
                } else if neg {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
                if e == FracExponent::zero() {
                    write!(f, "{}", rat_to_string(&mag))?;
                } else {
                    if !mag.is_one() {
                        write!(f, "{}*", rat_to_string(&mag))?;
                    }
                    if e == FracExponent::int(1) {
                        write!(f, "q")?;
                    } else if e.is_integer() && e.numer() > 0 {
                        write!(f, "q^{}", e)?;
                    } else {
                        write!(f, "q^({})", e)?;
                    }
                }
            }
        }
        write!(f, " + O(q^({}))", self.order)
    }
}

/// Outcome of a coefficientwise comparison below the common order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesCompare {
    /// All coefficients agree below min(order_a, order_b).
    Equal {
        /// The order up to which equality was certified.
        checked_order: FracExponent,
    },
    /// First disagreement found.
    Mismatch {
        exponent: FracExponent,
        lhs: Rat,
        rhs: Rat,
    },
}

impl SeriesCompare {
    /// True iff the comparison found no mismatch.
    pub fn is_equal(&self) -> bool {
        matches!(self, SeriesCompare::Equal { .. })
    }
}

impl fmt::Display for SeriesCompare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesCompare::Equal { checked_order } => {
                write!(f, "equal below order {}", checked_order)
            }
            SeriesCompare::Mismatch { exponent, lhs, rhs } => write!(
                f,
                "mismatch at q^({}): lhs={} rhs={}",
                exponent,
                rat_to_string(lhs),
                rat_to_string(rhs)
            ),
        }
    }
}

/// Compare two series coefficientwise for all exponents below
/// min(order_a, order_b), reporting the smallest mismatching exponent.
pub fn series_equal(a: &PuiseuxSeries, b: &PuiseuxSeries) -> SeriesCompare {
    let order = a.order().min(b.order());
    let a = a.truncate(order);
    let b = b.truncate(order);
    let mut exps: Vec<FracExponent> = a.terms().map(|(e, _)| e).collect();
    exps.extend(b.terms().map(|(e, _)| e));
    exps.sort();
    exps.dedup();
    for e in exps {
        let ca = a.coeff(e);
        let cb = b.coeff(e);
        if ca != cb {
            return SeriesCompare::Mismatch {
                exponent: e,
                lhs: ca,
                rhs: cb,
            };
        }
    }
    SeriesCompare::Equal {
        checked_order: order,
    }
}
