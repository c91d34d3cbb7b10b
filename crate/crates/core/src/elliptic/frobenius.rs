//! Frobenius conjugacy classes modulo `N` and the integral Frobenius matrix.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::torsion::{frobenius_mu, frobenius_mu_from};
use super::CurveQ;
use crate::arith::{self, inv_mod, ipow, reduce};
use crate::conjugacy::{classify, ClassLabel};
use crate::error::{Error, Result};
use crate::mat2::{crt_join, Mat2};
use crate::padic::val;

/// Per-prime Frobenius data; `mu[l]` is `min(v_l(b_q), cap)` for the cap it was computed with.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusData {
    pub curve: String,
    pub q: u64,
    pub a_q: i64,
    pub mu: BTreeMap<u64, u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_q: Option<i64>,
}

impl FrobeniusData {
    pub fn new(curve: &CurveQ, q: u64) -> Result<Self> {
        Ok(Self { curve: curve.key(), q, a_q: curve.a_q(q)?, mu: BTreeMap::new(), delta_q: None })
    }

    pub fn disc(&self) -> i128 {
        self.a_q as i128 * self.a_q as i128 - 4 * self.q as i128
    }

    /// True when the stored value answers a query with this cap without field work.
    pub fn mu_settled(&self, l: u64, cap: u32) -> bool {
        match self.mu.get(&l) {
            Some(&s) => s >= cap || s >= val(self.disc(), l, 2 * cap + 1) / 2,
            None => val(self.disc(), l, 2) < 2,
        }
    }

    /// Makes `mu[l]` valid for `cap`, resuming from any stored lower bound.
    pub fn ensure_mu(&mut self, curve: &CurveQ, l: u64, cap: u32, seed: u64) -> Result<bool> {
        if self.mu_settled(l, cap) {
            self.mu.entry(l).or_insert(0);
            return Ok(false);
        }
        let known = self.mu.get(&l).copied().unwrap_or(0);
        let v = frobenius_mu_from(curve, self.q, l, known, cap, seed)?;
        self.mu.insert(l, v);
        Ok(true)
    }

    pub fn mu_capped(&self, l: u64, cap: u32) -> Result<u32> {
        self.mu
            .get(&l)
            .map(|&s| s.min(cap))
            .ok_or_else(|| Error::InvalidParameter(format!("no depth recorded for {l}")))
    }

    /// A matrix in the Frobenius class modulo `p^n`: trace `a_q`, determinant `q`, depth `mu`.
    pub fn class_matrix_pn(&self, p: u64, n: u32) -> Result<Mat2> {
        if p == 2 {
            return Err(Error::InvalidParameter("modulus must be odd".into()));
        }
        let mu = self.mu_capped(p, n)?;
        let m = ipow(p, n);
        let half = arith::mul_mod(reduce(self.a_q as i128, m), inv_mod(2, m).unwrap(), m);
        let pm = ipow(p, mu);
        let off = arith::mul_mod(reduce(self.disc() / pm as i128, m), inv_mod(4, m).unwrap(), m);
        Ok(Mat2::new(half as i128, off as i128, (pm % m) as i128, half as i128, m))
    }

    pub fn class_matrix(&self, modulus: u64) -> Result<Mat2> {
        let parts = arith::factor(modulus)
            .into_iter()
            .map(|(p, n)| self.class_matrix_pn(p, n))
            .collect::<Result<Vec<_>>>()?;
        crt_join(&parts)
    }
}

/// Frobenius data at `q` with depths valid for every prime power dividing `modulus`.
pub fn frobenius_data(curve: &CurveQ, q: u64, modulus: u64, seed: u64) -> Result<FrobeniusData> {
    let mut data = FrobeniusData::new(curve, q)?;
    for (p, n) in arith::factor(modulus) {
        data.ensure_mu(curve, p, n, seed)?;
    }
    Ok(data)
}

/// The Frobenius conjugacy class at `q` modulo `p^n`.
pub fn frobenius_class(curve: &CurveQ, q: u64, p: u64, n: u32, seed: u64) -> Result<ClassLabel> {
    let mut data = FrobeniusData::new(curve, q)?;
    data.ensure_mu(curve, p, n, seed)?;
    classify(&data.class_matrix_pn(p, n)?)
}

/// A matrix in the Frobenius class modulo `modulus` and the class of each prime-power part.
pub fn frobenius_class_n(curve: &CurveQ, q: u64, modulus: u64, seed: u64) -> Result<(Mat2, Vec<ClassLabel>)> {
    let data = frobenius_data(curve, q, modulus, seed)?;
    let g = data.class_matrix(modulus)?;
    let labels = crate::mat2::crt_split(&g).iter().map(classify).collect::<Result<Vec<_>>>()?;
    Ok((g, labels))
}

/// `(Delta_q, b_q, delta_q)`: the discriminant of the endomorphism ring, its conductor
/// relative to `a_q^2 - 4q`, and the parity marker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaData {
    pub a_q: i64,
    pub disc_q: i64,
    pub b_q: u64,
    pub delta: u8,
}

pub fn delta_q(curve: &CurveQ, q: u64, seed: u64) -> Result<DeltaData> {
    let a = curve.a_q(q)?;
    let disc = a * a - 4 * q as i64;
    if disc == 0 {
        return Err(Error::Hypothesis(format!("a_q^2 = 4q at {q}")));
    }
    let mut square_part: u64 = 1;
    let mut core: i64 = disc.signum();
    for (l, e) in arith::factor(disc.unsigned_abs()) {
        square_part *= ipow(l, e / 2);
        if e % 2 == 1 {
            core *= l as i64;
        }
    }
    // Fundamental discriminant and the conductor of Z[pi] relative to it.
    let conductor = if core.rem_euclid(4) == 1 { square_part } else { square_part / 2 };
    let mut b_q: u64 = 1;
    for (l, e) in arith::factor(conductor) {
        b_q *= ipow(l, frobenius_mu(curve, q, l, e, seed)?);
    }
    let disc_q = disc / (b_q * b_q) as i64;
    let delta = if disc_q.rem_euclid(4) == 0 { 0 } else { 1 };
    Ok(DeltaData { a_q: a, disc_q, b_q, delta })
}

/// The integral Frobenius matrix `[[(a+b d)/2, b], [b (D-d)/4, (a-b d)/2]]`.
pub fn duke_toth_integral(data: &DeltaData) -> [i128; 4] {
    let (a, b, dd, d) = (data.a_q as i128, data.b_q as i128, data.disc_q as i128, data.delta as i128);
    [(a + b * d) / 2, b, b * (dd - d) / 4, (a - b * d) / 2]
}

pub fn duke_toth_matrix(curve: &CurveQ, q: u64, modulus: u64, seed: u64) -> Result<Mat2> {
    let [a, b, c, d] = duke_toth_integral(&delta_q(curve, q, seed)?);
    Ok(Mat2::new(a, b, c, d, modulus))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x011() -> CurveQ {
        "X0(11)".parse().unwrap()
    }

    #[test]
    fn endomorphism_data() {
        let e = x011();
        let d = delta_q(&e, 8689, 0).unwrap();
        assert_eq!((d.a_q, d.b_q, d.disc_q, d.delta), (90, 7, -544, 0));
        assert_eq!(duke_toth_integral(&d), [45, 7, -952, 45]);
    }

    #[test]
    fn classes() {
        let e = x011();
        let (_, labels) = frobenius_class_n(&e, 313, 63, 0).unwrap();
        let text: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
        assert_eq!(text, ["II(4,0) mod 9", "III(1,5) mod 7"]);
        let (g, _) = frobenius_class_n(&e, 2, 63, 0).unwrap();
        let reference = Mat2::new(-1, 1, -1, -1, 63);
        for (x, y) in crate::mat2::crt_split(&g).iter().zip(crate::mat2::crt_split(&reference)) {
            assert_eq!(classify(x).unwrap(), classify(&y).unwrap());
        }
        let e37: CurveQ = "X0+(37)".parse().unwrap();
        let (g, _) = frobenius_class_n(&e37, 73, 4425, 0).unwrap();
        let reference = Mat2::new(0, 1, -73, -1, 4425);
        for (x, y) in crate::mat2::crt_split(&g).iter().zip(crate::mat2::crt_split(&reference)) {
            assert_eq!(classify(x).unwrap(), classify(&y).unwrap());
        }
        let dt = duke_toth_matrix(&e, 8689, 63, 0).unwrap();
        let (g, _) = frobenius_class_n(&e, 8689, 63, 0).unwrap();
        for (x, y) in crate::mat2::crt_split(&g).iter().zip(crate::mat2::crt_split(&dt)) {
            assert_eq!(classify(x).unwrap(), classify(&y).unwrap());
        }
    }
}
