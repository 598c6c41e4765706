//! Infinite products and theta-style building blocks:
//!
//! - [`jacobi_triple_product`] / [`jacobi_triple_sum`]: both sides of the
//!   triple-product identity with rational exponents and signed arguments
//! - [`theta_h`] / [`theta_g`]: unary theta functions as products, with
//!   lattice-sum counterparts for cross-checking, and index reduction
//! - [`euler_sum`]: the sum side of Euler's identity
//!   `sum_n z^n q^{n(n-1)/2} / (q;q)_n = (-z; q)_inf`
//! - [`gen_eta`] and [`GenEtaSpec`]: generalized eta functions (squared
//!   convention at the fixed points) and rational-power eta quotients
//! - [`RhsEquation`] / [`build_rhs`]: the catalogued product sides of the
//!   identity suite

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::series::{rat, rat_int, FracExponent, PuiseuxSeries, Rat};

fn fe(n: i64, d: i64) -> FracExponent {
    FracExponent::new(n, d)
}

/// `(s q^e; S q^t)_inf` — one signed infinite Pochhammer factor.
pub fn pp(
    s: i8,
    e: FracExponent,
    step_sign: i8,
    t: FracExponent,
    order: FracExponent,
) -> Result<PuiseuxSeries> {
    PuiseuxSeries::signed_pochhammer_infinite(s, e, step_sign, t, order)
}

/// The product side `(q^m, z q^{m/2}, q^{m/2}/z; q^m)_inf` with `z = s q^e`.
///
/// Requires `|e| < m/2` only in the sense that all base exponents must be
/// nonnegative; callers should reduce first (see [`theta_g`]).
pub fn jacobi_triple_product(
    z_exp: FracExponent,
    z_sign: i8,
    modulus: FracExponent,
    order: FracExponent,
) -> Result<PuiseuxSeries> {
    let half = modulus.mul(fe(1, 2));
    let a = pp(1, modulus, 1, modulus, order)?;
    let b = pp(z_sign, half.add(z_exp), 1, modulus, order)?;
    let c = pp(z_sign, half.sub(z_exp), 1, modulus, order)?;
    Ok(a.mul(&b).mul(&c))
}

/// The sum side `sum_{n in Z} (-1)^n q^{m n^2 / 2} z^n` with `z = s q^e`,
/// truncated at `order`.
pub fn jacobi_triple_sum(
    z_exp: FracExponent,
    z_sign: i8,
    modulus: FracExponent,
    order: FracExponent,
) -> Result<PuiseuxSeries> {
    if modulus <= FracExponent::zero() {
        return Err(Error::Domain("triple-product modulus must be positive".into()));
    }
    let mut acc = PuiseuxSeries::zero(order);
    let order_rat = order.to_rat();
    let m = modulus.to_rat();
    let e = z_exp.to_rat();
    for dir in [1i64, -1] {
        let mut n = if dir == 1 { 0i64 } else { -1 };
        loop {
            let nr = rat_int(n);
            let expo = rat(1, 2) * &m * &nr * &nr + &e * &nr;
            if expo >= order_rat && n.abs() > 2 {
                break;
            }
            if expo < order_rat {
                let mut c = if n.rem_euclid(2) == 1 { rat_int(-1) } else { Rat::one() };
                if z_sign < 0 && n.rem_euclid(2) == 1 {
                    c = -c;
                }
                let mono =
                    PuiseuxSeries::monomial(FracExponent::from_rat(&expo), c, order)?;
                acc = acc.add(&mono);
            }
            n += dir;
        }
    }
    Ok(acc)
}

/// Reduce a theta index j modulo 2m into [0, m], returning (reduced j, sign)
/// where sign applies to the alternating theta g (h is sign-free).
fn reduce_theta_index(j: FracExponent, m: FracExponent) -> (FracExponent, i8) {
    let two_m = m.mul_int(2);
    let mut jr = j.to_rat();
    let tm = two_m.to_rat();
    let mr = m.to_rat();
    let mut sign = 1i8;
    while jr >= tm {
        jr -= &tm;
        sign = -sign;
    }
    while jr.is_negative() {
        jr += &tm;
        sign = -sign;
    }
    // now 0 <= jr < 2m; use j -> -j symmetry to land in [0, m]
    if jr > mr {
        jr = &tm - &jr;
        sign = -sign;
        // g_{-j} = g_j undoes one flip: g_{j'} with j' = 2m - jr came from
        // g_{jr - 2m} = -g_{jr}, and g_{jr-2m} = g_{2m-jr}; net one sign flip.
    }
    (FracExponent::from_rat(&jr), sign)
}

/// `h_{j,m} = sum_k q^{m (k + j/2m)^2} = q^{j^2/4m} (-q^{m-j}, -q^{m+j}, q^{2m}; q^{2m})_inf`
/// as a product, with the index reduced by `h_j = h_{-j} = h_{2m+j}`.
pub fn theta_h(j: FracExponent, m: FracExponent, order: FracExponent) -> Result<PuiseuxSeries> {
    if m <= FracExponent::zero() {
        return Err(Error::Domain("theta parameter m must be positive".into()));
    }
    let (jr, _) = reduce_theta_index(j, m);
    let two_m = m.mul_int(2);
    let pref_rat = jr.to_rat() * jr.to_rat() / (rat_int(4) * m.to_rat());
    let pref = FracExponent::from_rat(&pref_rat);
    let prod = pp(-1, m.sub(jr), 1, two_m, order.sub(pref))?
        .mul(&pp(-1, m.add(jr), 1, two_m, order.sub(pref))?)
        .mul(&pp(1, two_m, 1, two_m, order.sub(pref))?);
    Ok(prod.shifted_scaled(pref, &Rat::one()).truncate(order))
}

/// `g_{j,m} = sum_k (-1)^k q^{m (k + j/2m)^2} = q^{j^2/4m} (q^{m+j}, q^{m-j}, q^{2m}; q^{2m})_inf`
/// as a product, with the index reduced by `g_j = g_{-j} = -g_{2m+j}`.
pub fn theta_g(j: FracExponent, m: FracExponent, order: FracExponent) -> Result<PuiseuxSeries> {
    if m <= FracExponent::zero() {
        return Err(Error::Domain("theta parameter m must be positive".into()));
    }
    let (jr, sign) = reduce_theta_index(j, m);
    let two_m = m.mul_int(2);
    let pref_rat = jr.to_rat() * jr.to_rat() / (rat_int(4) * m.to_rat());
    let pref = FracExponent::from_rat(&pref_rat);
    let prod = pp(1, m.add(jr), 1, two_m, order.sub(pref))?
        .mul(&pp(1, m.sub(jr), 1, two_m, order.sub(pref))?)
        .mul(&pp(1, two_m, 1, two_m, order.sub(pref))?);
    Ok(prod
        .shifted_scaled(pref, &rat_int(sign as i64))
        .truncate(order))
}

/// Lattice-sum form of `h_{j,m}` (independent cross-check for [`theta_h`]).
pub fn theta_h_sum(j: FracExponent, m: FracExponent, order: FracExponent) -> Result<PuiseuxSeries> {
    theta_sum_impl(j, m, order, false)
}

/// Lattice-sum form of `g_{j,m}` (independent cross-check for [`theta_g`]).
pub fn theta_g_sum(j: FracExponent, m: FracExponent, order: FracExponent) -> Result<PuiseuxSeries> {
    theta_sum_impl(j, m, order, true)
}

fn theta_sum_impl(
    j: FracExponent,
    m: FracExponent,
    order: FracExponent,
    alternating: bool,
) -> Result<PuiseuxSeries> {
    if m <= FracExponent::zero() {
        return Err(Error::Domain("theta parameter m must be positive".into()));
    }
    let mr = m.to_rat();
    let shift = j.to_rat() / (rat_int(2) * &mr);
    let order_rat = order.to_rat();
    let mut acc = PuiseuxSeries::zero(order);
    for dir in [1i64, -1] {
        let mut k = if dir == 1 { 0i64 } else { -1 };
        loop {
            let x = rat_int(k) + &shift;
            let expo = &mr * &x * &x;
            if expo >= order_rat && k.abs() > 2 {
                break;
            }
            if expo < order_rat {
                let c = if alternating && k.rem_euclid(2) == 1 {
                    rat_int(-1)
                } else {
                    Rat::one()
                };
                acc = acc.add(&PuiseuxSeries::monomial(
                    FracExponent::from_rat(&expo),
                    c,
                    order,
                )?);
            }
            k += dir;
        }
    }
    Ok(acc)
}

/// The sum side of Euler's identity:
/// `sum_{n >= 0} z^n q^{n(n-1)/2} / (q;q)_n` with `z = s q^e`.
pub fn euler_sum(z_exp: FracExponent, z_sign: i8, order: FracExponent) -> Result<PuiseuxSeries> {
    let order_rat = order.to_rat();
    let e = z_exp.to_rat();
    let mut acc = PuiseuxSeries::zero(order);
    let mut poch = PuiseuxSeries::one(order);
    let mut n = 0i64;
    loop {
        let nr = rat_int(n);
        let expo = rat(1, 2) * &nr * (&nr - Rat::one()) + &e * &nr;
        if expo >= order_rat && n > 2 {
            break;
        }
        if expo < order_rat {
            let sgn = if z_sign < 0 && n % 2 == 1 {
                rat_int(-1)
            } else {
                Rat::one()
            };
            let term = poch
                .invert()?
                .shifted_scaled(FracExponent::from_rat(&expo), &sgn);
            acc = acc.add(&term).truncate(order);
        }
        n += 1;
        poch = poch.mul(&PuiseuxSeries::pochhammer_finite(
            fe(n, 1),
            1,
            fe(1, 1),
            1,
            order,
        )?);
    }
    Ok(acc)
}

/// The second Bernoulli-style sawtooth `P2(t) = {t}^2 - {t} + 1/6`.
pub fn p2(t: &Rat) -> Rat {
    let frac = t - t.floor();
    &frac * &frac - &frac + rat(1, 6)
}

/// A generalized eta function `eta_{delta, g}` as a truncated series,
/// with the leading exponent `(delta/2) P2(g/delta)` included.
///
/// Conventions: g is reduced modulo delta; the fixed classes use squared
/// products — `eta_{delta,0} = q^{delta/12} (q^delta; q^delta)_inf^2` and
/// `eta_{delta,delta/2} = q^{-delta/24} (q^{delta/2}; q^delta)_inf^2`.
pub fn gen_eta(delta: FracExponent, g: FracExponent, order: FracExponent) -> Result<PuiseuxSeries> {
    let (pref, unit) = gen_eta_parts(delta, g, order)?;
    Ok(unit.shifted_scaled(pref, &Rat::one()).truncate(order))
}

/// Leading exponent and unit part (constant term 1) of `eta_{delta, g}`.
fn gen_eta_parts(
    delta: FracExponent,
    g: FracExponent,
    order: FracExponent,
) -> Result<(FracExponent, PuiseuxSeries)> {
    if delta <= FracExponent::zero() {
        return Err(Error::Domain("eta period delta must be positive".into()));
    }
    let d = delta.to_rat();
    let mut gr = g.to_rat();
    gr -= (&gr / &d).floor() * &d; // reduce g into [0, delta)
    let pref_rat = rat(1, 2) * &d * p2(&(&gr / &d));
    let pref = FracExponent::from_rat(&pref_rat);
    let unit_order = order.sub(pref);
    let unit = if gr.is_zero() {
        pp(1, delta, 1, delta, unit_order)?.pow(2)?
    } else if rat_int(2) * &gr == d {
        pp(1, delta.mul(fe(1, 2)), 1, delta, unit_order)?.pow(2)?
    } else {
        let ge = FracExponent::from_rat(&gr);
        pp(1, ge, 1, delta, unit_order)?.mul(&pp(1, delta.sub(ge), 1, delta, unit_order)?)
    };
    Ok((pref, unit))
}

/// One factor `eta_{delta, g}^{power}` of a generalized eta quotient;
/// `power` must be an integer multiple of 1/2.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaFactor {
    pub delta: FracExponent,
    pub g: FracExponent,
    pub power: Rat,
}

/// A product of generalized eta factors with rational (half-integer) powers.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct GenEtaSpec {
    pub factors: Vec<EtaFactor>,
}

impl GenEtaSpec {
    /// Builder: push one factor with integer-pair power `num/2`.
    pub fn with(mut self, delta: FracExponent, g: FracExponent, power: Rat) -> Self {
        self.factors.push(EtaFactor { delta, g, power });
        self
    }

    /// Evaluate the quotient as a truncated Puiseux series, including the
    /// leading fractional power of q. Half powers use a series square root
    /// of the unit part.
    pub fn eval(&self, order: FracExponent) -> Result<PuiseuxSeries> {
        let mut lead = Rat::zero();
        for f in &self.factors {
            let d = f.delta.to_rat();
            let mut gr = f.g.to_rat();
            gr -= (&gr / &d).floor() * &d;
            lead += rat(1, 2) * &d * p2(&(&gr / &d)) * &f.power;
        }
        let lead_fe = FracExponent::from_rat(&lead);
        let unit_order = order.sub(lead_fe);
        let mut acc = PuiseuxSeries::one(unit_order);
        for f in &self.factors {
            let two_p = rat_int(2) * &f.power;
            if !two_p.is_integer() {
                return Err(Error::Domain(
                    "eta-quotient powers must be multiples of 1/2".into(),
                ));
            }
            let two_p: i64 = two_p
                .to_integer()
                .try_into()
                .map_err(|_| Error::Domain("eta power too large".into()))?;
            let (_, unit) = gen_eta_parts(f.delta, f.g, unit_order)?;
            let half = unit.sqrt()?;
            acc = acc.mul(&half.pow(two_p)?);
        }
        Ok(acc.shifted_scaled(lead_fe, &Rat::one()).truncate(order))
    }

    /// The leading q-exponent `sum (delta/2) P2(g/delta) * power`.
    pub fn ord_infinity(&self) -> Rat {
        let mut lead = Rat::zero();
        for f in &self.factors {
            let d = f.delta.to_rat();
            let mut gr = f.g.to_rat();
            gr -= (&gr / &d).floor() * &d;
            lead += rat(1, 2) * &d * p2(&(&gr / &d)) * &f.power;
        }
        lead
    }
}

/// Catalogued product sides of the identity suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhsEquation {
    /// First split product pair for the (2,…,2,1)-symmetrizer family, j = 0.
    R1_7 { r: usize },
    /// Indexed split pair, 1 <= j <= r.
    R1_8 { r: usize, j: usize },
    /// Second-kind split pair, j = 0.
    R1_9 { r: usize },
    /// Second-kind indexed split pair, 1 <= j <= r.
    R1_10 { r: usize, j: usize },
    /// Single-quotient product, half-integer modulus 2r - 1/2, j = 0.
    R1_11 { r: usize },
    /// Indexed, 1 <= j <= r.
    R1_12 { r: usize, j: usize },
    /// Single-quotient product, modulus 2r - 3/2, j = 0.
    R1_13 { r: usize },
    /// Indexed, 1 <= j <= r.
    R1_14 { r: usize, j: usize },
    /// Combined-sum split pair, r >= 3.
    SumC { r: usize },
    /// Auxiliary unconstrained sum, variant 1 (middle exponent corrected).
    Wang1_1 { r: usize },
    /// Auxiliary unconstrained sum, variant 2, 1 <= j <= r.
    Wang1_2 { r: usize, j: usize },
    /// The rank-2 partition-identity product.
    Capparelli,
    D2_1a { r: usize },
    D2_1b { r: usize, j: usize },
    D2_1c { r: usize },
    D2_1d { r: usize, j: usize },
    D2_2a { r: usize },
    D2_2b { r: usize, j: usize },
    D2_3a { r: usize },
    D2_3b { r: usize },
    D2_4a { r: usize },
    D2_4b { r: usize, j: usize },
}

impl std::fmt::Display for RhsEquation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use RhsEquation::*;
        match *self {
            R1_7 { r } => write!(f, "1.7 (r={r})"),
            R1_8 { r, j } => write!(f, "1.8 (r={r}, j={j})"),
            R1_9 { r } => write!(f, "1.9 (r={r})"),
            R1_10 { r, j } => write!(f, "1.10 (r={r}, j={j})"),
            R1_11 { r } => write!(f, "1.11 (r={r})"),
            R1_12 { r, j } => write!(f, "1.12 (r={r}, j={j})"),
            R1_13 { r } => write!(f, "1.13 (r={r})"),
            R1_14 { r, j } => write!(f, "1.14 (r={r}, j={j})"),
            SumC { r } => write!(f, "sum-C (r={r})"),
            Wang1_1 { r } => write!(f, "aux-1 (r={r})"),
            Wang1_2 { r, j } => write!(f, "aux-2 (r={r}, j={j})"),
            Capparelli => write!(f, "capparelli"),
            D2_1a { r } => write!(f, "2.1a (r={r})"),
            D2_1b { r, j } => write!(f, "2.1b (r={r}, j={j})"),
            D2_1c { r } => write!(f, "2.1c (r={r})"),
            D2_1d { r, j } => write!(f, "2.1d (r={r}, j={j})"),
            D2_2a { r } => write!(f, "2.2a (r={r})"),
            D2_2b { r, j } => write!(f, "2.2b (r={r}, j={j})"),
            D2_3a { r } => write!(f, "2.3a (r={r})"),
            D2_3b { r } => write!(f, "2.3b (r={r})"),
            D2_4a { r } => write!(f, "2.4a (r={r})"),
            D2_4b { r, j } => write!(f, "2.4b (r={r}, j={j})"),
        }
    }
}

/// `(q^{a1}, q^{a2}, q^{a3}; q^m)_inf` with all-positive bases.
fn triple_pos(a: [FracExponent; 3], m: FracExponent, order: FracExponent) -> Result<PuiseuxSeries> {
    Ok(pp(1, a[0], 1, m, order)?
        .mul(&pp(1, a[1], 1, m, order)?)
        .mul(&pp(1, a[2], 1, m, order)?))
}

/// Signed triple `(s1 q^{a1}, s2 q^{a2}, s3 q^{a3}; S q^m)_inf`.
fn triple_signed(
    a: [(i8, FracExponent); 3],
    step_sign: i8,
    m: FracExponent,
    order: FracExponent,
) -> Result<PuiseuxSeries> {
    Ok(pp(a[0].0, a[0].1, step_sign, m, order)?
        .mul(&pp(a[1].0, a[1].1, step_sign, m, order)?)
        .mul(&pp(a[2].0, a[2].1, step_sign, m, order)?))
}

/// `1 / (q, q^3, q^4; q^4)_inf`.
fn inv_p4a(order: FracExponent) -> Result<PuiseuxSeries> {
    triple_pos([fe(1, 1), fe(3, 1), fe(4, 1)], fe(4, 1), order)?.invert()
}

/// `1 / (q^2, q^2, q^4; q^4)_inf`.
fn inv_p4b(order: FracExponent) -> Result<PuiseuxSeries> {
    triple_pos([fe(2, 1), fe(2, 1), fe(4, 1)], fe(4, 1), order)?.invert()
}

/// `1 / (q^{1/2}, q^{3/2}, q^2; q^2)_inf`.
fn inv_phalf(order: FracExponent) -> Result<PuiseuxSeries> {
    triple_pos([fe(1, 2), fe(3, 2), fe(2, 1)], fe(2, 1), order)?.invert()
}

/// Build the product side of a catalogued identity, truncated at `order`.
pub fn build_rhs(eq: &RhsEquation, order: FracExponent) -> Result<PuiseuxSeries> {
    use RhsEquation::*;
    let check = |r: usize, j: usize, jmax: usize| -> Result<(i64, i64)> {
        if r < 2 {
            return Err(Error::Domain("identities require r >= 2".into()));
        }
        if j > jmax {
            return Err(Error::Domain(format!("index j={j} out of range (max {jmax})")));
        }
        Ok((r as i64, j as i64))
    };
    match *eq {
        R1_7 { r } => {
            let (r, _) = check(r, 0, 0)?;
            let t1 = triple_pos(
                [fe(8 * r - 4, 1), fe(8 * r, 1), fe(16 * r - 4, 1)],
                fe(16 * r - 4, 1),
                order,
            )?
            .mul(&inv_p4a(order)?);
            let sh = fe(r - 1, 2);
            let t2 = triple_signed(
                [(-1, fe(1, 1)), (1, fe(4 * r - 2, 1)), (-1, fe(4 * r - 1, 1))],
                -1,
                fe(4 * r - 1, 1),
                order.sub(sh),
            )?
            .mul(&inv_p4b(order.sub(sh))?)
            .shifted_scaled(sh, &Rat::one());
            Ok(t1.add(&t2).truncate(order))
        }
        R1_8 { r, j } => {
            if j < 1 {
                return Err(Error::Domain("requires 1 <= j <= r".into()));
            }
            let (r, j) = check(r, j, r)?;
            let t1 = triple_signed(
                [
                    (1, fe(2 * j, 1)),
                    (-1, fe(4 * r - 2 * j - 1, 1)),
                    (-1, fe(4 * r - 1, 1)),
                ],
                -1,
                fe(4 * r - 1, 1),
                order,
            )?
            .mul(&inv_p4b(order)?);
            let sh = fe(3 * r - 2 * j - 1, 2);
            let t2 = triple_pos(
                [fe(4 * j, 1), fe(16 * r - 4 * j - 4, 1), fe(16 * r - 4, 1)],
                fe(16 * r - 4, 1),
                order.sub(sh),
            )?
            .mul(&inv_p4a(order.sub(sh))?)
            .shifted_scaled(sh, &Rat::one());
            Ok(t1.add(&t2).truncate(order))
        }
        R1_9 { r } => {
            let (r, _) = check(r, 0, 0)?;
            let t1 = triple_pos(
                [fe(8 * r - 8, 1), fe(8 * r - 4, 1), fe(16 * r - 12, 1)],
                fe(16 * r - 12, 1),
                order,
            )?
            .mul(&inv_p4a(order)?);
            let sh = fe(2 * r - 3, 4);
            let t2 = triple_signed(
                [(-1, fe(1, 1)), (1, fe(4 * r - 4, 1)), (-1, fe(4 * r - 3, 1))],
                -1,
                fe(4 * r - 3, 1),
                order.sub(sh),
            )?
            .mul(&inv_p4b(order.sub(sh))?)
            .shifted_scaled(sh, &Rat::one());
            Ok(t1.add(&t2).truncate(order))
        }
        R1_10 { r, j } => {
            if j < 1 {
                return Err(Error::Domain("requires 1 <= j <= r".into()));
            }
            let (r, j) = check(r, j, r)?;
            let t1 = triple_signed(
                [
                    (1, fe(2 * j, 1)),
                    (-1, fe(4 * r - 3 - 2 * j, 1)),
                    (-1, fe(4 * r - 3, 1)),
                ],
                -1,
                fe(4 * r - 3, 1),
                order,
            )?
            .mul(&inv_p4b(order)?);
            let sh = fe(6 * r - 4 * j - 5, 4);
            let t2 = triple_pos(
                [fe(4 * j, 1), fe(16 * r - 4 * j - 12, 1), fe(16 * r - 12, 1)],
                fe(16 * r - 12, 1),
                order.sub(sh),
            )?
            .mul(&inv_p4a(order.sub(sh))?)
            .shifted_scaled(sh, &Rat::one());
            Ok(t1.add(&t2).truncate(order))
        }
        R1_11 { r } => {
            let (r, _) = check(r, 0, 0)?;
            Ok(triple_pos(
                [fe(1, 2), fe(2 * r - 1, 1), fe(4 * r - 1, 2)],
                fe(4 * r - 1, 2),
                order,
            )?
            .mul(&inv_phalf(order)?)
            .truncate(order))
        }
        R1_12 { r, j } => {
            if j < 1 {
                return Err(Error::Domain("requires 1 <= j <= r".into()));
            }
            let (r, j) = check(r, j, r)?;
            Ok(triple_pos(
                [fe(j, 1), fe(4 * r - 2 * j - 1, 2), fe(4 * r - 1, 2)],
                fe(4 * r - 1, 2),
                order,
            )?
            .mul(&inv_phalf(order)?)
            .truncate(order))
        }
        R1_13 { r } => {
            let (r, _) = check(r, 0, 0)?;
            Ok(triple_pos(
                [fe(1, 2), fe(2 * r - 2, 1), fe(4 * r - 3, 2)],
                fe(4 * r - 3, 2),
                order,
            )?
            .mul(&inv_phalf(order)?)
            .truncate(order))
        }
        R1_14 { r, j } => {
            if j < 1 {
                return Err(Error::Domain("requires 1 <= j <= r".into()));
            }
            let (r, j) = check(r, j, r)?;
            Ok(triple_pos(
                [fe(j, 1), fe(4 * r - 2 * j - 3, 2), fe(4 * r - 3, 2)],
                fe(4 * r - 3, 2),
                order,
            )?
            .mul(&inv_phalf(order)?)
            .truncate(order))
        }
        SumC { r } => {
            if r < 3 {
                return Err(Error::Domain("combined sum requires r >= 3".into()));
            }
            let (r, _) = check(r, 0, 0)?;
            let t1 = triple_pos(
                [fe(8 * r + 4, 1), fe(8 * r - 8, 1), fe(16 * r - 4, 1)],
                fe(16 * r - 4, 1),
                order,
            )?
            .mul(&inv_p4a(order)?);
            let sh = fe(r - 3, 2);
            let t2 = triple_signed(
                [(-1, fe(3, 1)), (1, fe(4 * r - 4, 1)), (-1, fe(4 * r - 1, 1))],
                -1,
                fe(4 * r - 1, 1),
                order.sub(sh),
            )?
            .mul(&inv_p4b(order.sub(sh))?)
            .shifted_scaled(sh, &Rat::one());
            Ok(t1.add(&t2).truncate(order))
        }
        Wang1_1 { r } => {
            let (r, _) = check(r, 0, 0)?;
            Ok(pp(-1, fe(1, 2), 1, fe(1, 1), order)?
                .mul(&triple_pos(
                    [fe(1, 2), fe(2 * r - 1, 1), fe(4 * r - 1, 2)],
                    fe(4 * r - 1, 2),
                    order,
                )?)
                .mul(&pp(1, fe(1, 1), 1, fe(1, 1), order)?.invert()?)
                .truncate(order))
        }
        Wang1_2 { r, j } => {
            if j < 1 {
                return Err(Error::Domain("requires 1 <= j <= r".into()));
            }
            let (r, j) = check(r, j, r)?;
            Ok(pp(-1, fe(1, 2), 1, fe(1, 1), order)?
                .mul(&triple_pos(
                    [fe(j, 1), fe(4 * r - 2 * j - 1, 2), fe(4 * r - 1, 2)],
                    fe(4 * r - 1, 2),
                    order,
                )?)
                .mul(&pp(1, fe(1, 1), 1, fe(1, 1), order)?.invert()?)
                .truncate(order))
        }
        Capparelli => {
            let mut acc = PuiseuxSeries::one(order);
            for e in [2i64, 3, 4, 6] {
                acc = acc.mul(&pp(-1, fe(e, 1), 1, fe(6, 1), order)?);
            }
            Ok(acc)
        }
        D2_1a { r } => {
            let (r, _) = check(r, 0, 0)?;
            Ok(triple_pos(
                [fe(4 * r - 2, 1), fe(4 * r, 1), fe(8 * r - 2, 1)],
                fe(8 * r - 2, 1),
                order,
            )?
            .mul(&pp(1, fe(1, 1), 1, fe(1, 1), order)?.invert()?)
            .truncate(order))
        }
        D2_1b { r, j } => {
            if j < 1 {
                return Err(Error::Domain("requires 1 <= j <= r".into()));
            }
            let (r, j) = check(r, j, r)?;
            Ok(triple_pos(
                [fe(2 * j, 1), fe(8 * r - 2 * j - 2, 1), fe(8 * r - 2, 1)],
                fe(8 * r - 2, 1),
                order,
            )?
            .mul(&pp(1, fe(2, 1), 1, fe(1, 1), order)?.invert()?)
            .truncate(order))
        }
        D2_1c { r } => {
            let (r, _) = check(r, 0, 0)?;
            Ok(triple_pos(
                [fe(4 * r - 4, 1), fe(4 * r - 2, 1), fe(8 * r - 6, 1)],
                fe(8 * r - 6, 1),
                order,
            )?
            .mul(&pp(1, fe(1, 1), 1, fe(1, 1), order)?.invert()?)
            .truncate(order))
        }
        D2_1d { r, j } => {
            if j < 1 {
                return Err(Error::Domain("requires 1 <= j <= r".into()));
            }
            let (r, j) = check(r, j, r)?;
            Ok(triple_pos(
                [fe(2 * j, 1), fe(8 * r - 2 * j - 6, 1), fe(8 * r - 6, 1)],
                fe(8 * r - 6, 1),
                order,
            )?
            .mul(&pp(1, fe(2, 1), 1, fe(1, 1), order)?.invert()?)
            .truncate(order))
        }
        D2_2a { r } => {
            let (r, _) = check(r, 0, 0)?;
            let num = triple_pos(
                [fe(1, 1), fe(4 * r - 4, 1), fe(4 * r - 3, 1)],
                fe(4 * r - 3, 1),
                order,
            )?;
            let den = PuiseuxSeries::pochhammer_finite(fe(1, 1), 1, fe(1, 1), 1, order)?
                .mul(&pp(1, fe(4, 1), 1, fe(2, 1), order)?);
            Ok(num.mul(&den.invert()?).truncate(order))
        }
        D2_2b { r, j } => {
            if j < 1 {
                return Err(Error::Domain("requires 1 <= j <= r".into()));
            }
            let (r, j) = check(r, j, r)?;
            Ok(triple_pos(
                [fe(2 * j, 1), fe(4 * r - 2 * j - 3, 1), fe(4 * r - 3, 1)],
                fe(4 * r - 3, 1),
                order,
            )?
            .mul(&pp(1, fe(2, 1), 1, fe(2, 1), order)?.invert()?)
            .truncate(order))
        }
        D2_3a { r } => {
            if r < 3 {
                return Err(Error::Domain("requires r >= 3".into()));
            }
            let (r, _) = check(r, 0, 0)?;
            Ok(triple_pos(
                [fe(4 * r + 2, 1), fe(4 * r - 4, 1), fe(8 * r - 2, 1)],
                fe(8 * r - 2, 1),
                order,
            )?
            .mul(&pp(1, fe(1, 1), 1, fe(1, 1), order)?.invert()?)
            .truncate(order))
        }
        D2_3b { r } => {
            if r < 3 {
                return Err(Error::Domain("requires r >= 3".into()));
            }
            let (r, _) = check(r, 0, 0)?;
            Ok(triple_pos(
                [fe(3, 2), fe(2 * r - 2, 1), fe(4 * r - 1, 2)],
                fe(4 * r - 1, 2),
                order,
            )?
            .mul(&pp(1, fe(1, 1), 1, fe(1, 1), order)?.invert()?)
            .truncate(order))
        }
        D2_4a { r } => {
            let (r, _) = check(r, 0, 0)?;
            let num = triple_pos(
                [fe(1, 1), fe(4 * r - 2, 1), fe(4 * r - 1, 1)],
                fe(4 * r - 1, 1),
                order,
            )?;
            let den = PuiseuxSeries::pochhammer_finite(fe(1, 1), 1, fe(1, 1), 1, order)?
                .mul(&pp(1, fe(4, 1), 1, fe(2, 1), order)?);
            Ok(num.mul(&den.invert()?).truncate(order))
        }
        D2_4b { r, j } => {
            if j < 1 {
                return Err(Error::Domain("requires 1 <= j <= r".into()));
            }
            let (r, j) = check(r, j, r)?;
            Ok(triple_pos(
                [fe(2 * j, 1), fe(4 * r - 2 * j - 1, 1), fe(4 * r - 1, 1)],
                fe(4 * r - 1, 1),
                order,
            )?
            .mul(&pp(1, fe(2, 1), 1, fe(2, 1), order)?.invert()?)
            .truncate(order))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::series_equal;

    #[test]
    fn triple_product_basic() {
        let order = fe(20, 1);
        let lhs = jacobi_triple_sum(fe(0, 1), -1, fe(2, 1), order).unwrap();
        let rhs = jacobi_triple_product(fe(0, 1), -1, fe(2, 1), order).unwrap();
        assert!(series_equal(&lhs, &rhs).is_equal());
    }

    #[test]
    fn p2_values() {
        assert_eq!(p2(&Rat::zero()), rat(1, 6));
        assert_eq!(p2(&rat(1, 2)), rat(-1, 12));
        assert_eq!(p2(&rat(7, 2)), rat(-1, 12));
        assert_eq!(p2(&rat(-1, 3)), p2(&rat(2, 3)));
    }
}
