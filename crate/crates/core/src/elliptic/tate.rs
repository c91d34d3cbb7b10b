//! The Tate parameter at a prime of multiplicative reduction and the ramified
//! decomposition data derived from it.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::{CurveQ, ReductionType};
use crate::arith::{ipow, pow_mod};
use crate::error::{Error, Result};
use crate::padic::val_big;

/// Coefficients of `t * j(t) = 1 + 744 t + 196884 t^2 + ...` up to `t^(len-1)`.
pub fn j_series(len: usize) -> Vec<BigInt> {
    let mul = |f: &[BigInt], g: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); len];
        for (i, a) in f.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in g.iter().enumerate().take(len - i) {
                out[i + j] += a * b;
            }
        }
        out
    };
    let mut e4 = vec![BigInt::zero(); len];
    e4[0] = BigInt::one();
    for (n, slot) in e4.iter_mut().enumerate().skip(1) {
        let sigma3: u64 = (1..=n as u64).filter(|d| n as u64 % d == 0).map(|d| d * d * d).sum();
        *slot = BigInt::from(240u64 * sigma3);
    }
    let e4_cubed = mul(&mul(&e4, &e4), &e4);
    // prod (1 - t^n)^24
    let mut eta = vec![BigInt::zero(); len];
    eta[0] = BigInt::one();
    for n in 1..len {
        for _ in 0..24 {
            for k in (n..len).rev() {
                let prev = eta[k - n].clone();
                eta[k] -= prev;
            }
        }
    }
    // invert eta (constant term 1)
    let mut inv = vec![BigInt::zero(); len];
    inv[0] = BigInt::one();
    for k in 1..len {
        let s: BigInt = (1..=k).map(|i| &eta[i] * &inv[k - i]).sum();
        inv[k] = -s;
    }
    mul(&e4_cubed, &inv)
}

/// `theta = unit * q^valuation + O(q^precision)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TatePeriod {
    pub q: u64,
    pub valuation: u32,
    #[serde(serialize_with = "as_string")]
    pub unit: BigInt,
    pub precision: u32,
}

fn as_string<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl fmt::Display for TatePeriod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * {}^{} + O({}^{})", self.unit, self.q, self.valuation, self.q, self.precision)
    }
}

/// The Tate parameter of `curve` at a prime `q` of multiplicative reduction,
/// to absolute precision `q^precision`.
pub fn tate_period(curve: &CurveQ, q: u64, precision: u32) -> Result<TatePeriod> {
    let qb = BigInt::from(q);
    if curve.has_good_reduction(q) || curve.c4_mod(q) == 0 {
        return Err(Error::Hypothesis(format!("reduction at {q} is not multiplicative")));
    }
    let m = val_big(curve.discriminant(), q, u32::MAX);
    if precision <= m {
        return Err(Error::Precision(format!("precision {precision} must exceed the valuation {m}")));
    }
    if precision > 4000 {
        return Err(Error::Precision(format!("precision {precision} is over budget")));
    }
    let modulus = qb.pow(precision);
    let c4 = curve.c4();
    let c4_cubed = (c4 * c4 * c4).mod_floor(&modulus);
    let inv = c4_cubed
        .modinv(&modulus)
        .ok_or_else(|| Error::Hypothesis("c4 is not a unit".into()))?;
    // s = 1/j = disc / c4^3, and theta solves theta = s * J(theta).
    let s = (curve.discriminant() * inv).mod_floor(&modulus);
    let terms = (precision / m + 2) as usize;
    let series = j_series(terms);
    let mut theta = s.clone();
    for _ in 0..terms {
        let mut acc = BigInt::zero();
        for c in series.iter().rev() {
            acc = (acc * &theta + c).mod_floor(&modulus);
        }
        theta = (&s * acc).mod_floor(&modulus);
    }
    let unit = theta / qb.pow(m);
    let unit = unit.mod_floor(&qb.pow(precision - m));
    Ok(TatePeriod { q, valuation: m, unit, precision })
}

/// `(eps, b1, b2)` describing the decomposition group at a multiplicative prime `q`
/// acting on `E[p^n]`: `eps` is +1 for split and -1 for nonsplit reduction,
/// `p^b2` is the `p`-part of the valuation of the Tate parameter (capped at `n`) and
/// `b1 <= b2` is the largest `s` for which the parameter is a `p^s`-th power.
pub fn mult_params(curve: &CurveQ, q: u64, p: u64, n: u32) -> Result<(i8, u32, u32)> {
    let eps = match curve.reduction_type(q) {
        ReductionType::SplitMultiplicative => 1,
        ReductionType::NonsplitMultiplicative => -1,
        other => return Err(Error::Hypothesis(format!("reduction at {q} is {other}"))),
    };
    let tp = tate_period(curve, q, val_big(curve.discriminant(), q, u32::MAX) + 1)?;
    let m = tp.valuation as u64;
    let b2 = n.min(val_big(&BigInt::from(m), p, n));
    let unit = (tp.unit % BigInt::from(q)).to_u64().unwrap();
    let vq1 = val_big(&BigInt::from(q - 1), p, u32::MAX);
    let mut b1 = 0;
    while b1 < b2 {
        let s = b1 + 1;
        if pow_mod(unit, (q - 1) / ipow(p, s.min(vq1)), q) != 1 {
            break;
        }
        b1 = s;
    }
    Ok((eps, b1, b2))
}
