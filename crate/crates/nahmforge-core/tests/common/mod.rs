//! Shared independent oracles for integration tests: dense polynomial
//! products and partition counters implemented without the series engine.

#![allow(dead_code)]

use nahmforge_core::{rat_int, FracExponent, PuiseuxSeries, Rat};

/// Dense truncated polynomial over i128 coefficients; index = exponent in
/// units of 1/grid_den of a q-power.
#[derive(Clone, Debug)]
pub struct DensePoly {
    pub coeffs: Vec<i128>,
}

impl DensePoly {
    pub fn one(len: usize) -> Self {
        let mut coeffs = vec![0; len];
        coeffs[0] = 1;
        DensePoly { coeffs }
    }

    /// Multiply in place by (1 - sign * x^e), truncating at the fixed length.
    pub fn mul_factor(&mut self, e: usize, sign: i128) {
        let n = self.coeffs.len();
        if e >= n {
            return;
        }
        for k in (0..n - e).rev() {
            let v = self.coeffs[k] * sign;
            self.coeffs[k + e] -= v;
        }
    }

    /// Convert to a PuiseuxSeries with exponent grid 1/grid_den and the
    /// given order (in q-units numerator over grid_den).
    pub fn to_series(&self, grid_den: i64, order: FracExponent) -> PuiseuxSeries {
        let mut acc = PuiseuxSeries::zero(order);
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c != 0 {
                let e = FracExponent::new(k as i64, grid_den);
                if e < order {
                    let m = PuiseuxSeries::monomial(e, big(*c), order).unwrap();
                    acc = acc.add(&m);
                }
            }
        }
        acc
    }
}

pub fn big(v: i128) -> Rat {
    // i128 -> Rat via string to avoid precision concerns
    use std::str::FromStr;
    Rat::from_str(&v.to_string()).unwrap()
}

/// Number of partitions of n (independent dynamic-programming oracle).
pub fn partition_count(n: usize) -> i128 {
    partitions_with_max_part(n, n)
}

/// Number of partitions of n into parts of size at most m.
pub fn partitions_with_max_part(n: usize, m: usize) -> i128 {
    let mut dp = vec![0i128; n + 1];
    dp[0] = 1;
    for part in 1..=m {
        for total in part..=n {
            dp[total] += dp[total - part];
        }
    }
    dp[n]
}

/// Number of partitions of n into distinct odd parts.
pub fn distinct_odd_partitions(n: usize) -> i128 {
    let mut dp = vec![0i128; n + 1];
    dp[0] = 1;
    let mut part = 1;
    while part <= n {
        for total in (part..=n).rev() {
            dp[total] += dp[total - part];
        }
        part += 2;
    }
    dp[n]
}

pub fn fe(n: i64, d: i64) -> FracExponent {
    FracExponent::new(n, d)
}

pub fn qpow(e: FracExponent, order: FracExponent) -> PuiseuxSeries {
    PuiseuxSeries::monomial(e, rat_int(1), order).unwrap()
}
