//! Elliptic curves over `Q`: models, reduction, point counts and the local data
//! that feed the factorization types.

pub mod field;
pub mod frobenius;
pub mod tate;
pub mod torsion;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, legendre};
use crate::error::{Error, Result};
use crate::padic::{hensel_root, val_big, PValued};

pub use frobenius::{delta_q, duke_toth_matrix, frobenius_class, frobenius_class_n, FrobeniusData};
pub use tate::{mult_params, tate_period, TatePeriod};
pub use torsion::{frobenius_matrix_oracle, frobenius_mu};

/// Largest prime accepted by [`CurveQ::count_points`] unless raised explicitly.
pub const DEFAULT_MAX_Q: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionType {
    Good,
    SplitMultiplicative,
    NonsplitMultiplicative,
    Additive,
}

impl fmt::Display for ReductionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionType::Good => "good",
            ReductionType::SplitMultiplicative => "split-mult",
            ReductionType::NonsplitMultiplicative => "nonsplit-mult",
            ReductionType::Additive => "additive",
        })
    }
}

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveQ {
    a: [BigInt; 5],
    b2: BigInt,
    b4: BigInt,
    b6: BigInt,
    c4: BigInt,
    c6: BigInt,
    disc: BigInt,
}

impl CurveQ {
    pub fn new(a: [BigInt; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = &a;
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        let c4 = &b2 * &b2 - 24 * &b4;
        let c6: BigInt = 36 * &b2 * &b4 - &b2 * &b2 * &b2 - 216 * &b6;
        let disc: BigInt = 9 * &b2 * &b4 * &b6 - &b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6;
        if disc.is_zero() {
            return Err(Error::InvalidParameter("singular curve".into()));
        }
        Ok(Self { a, b2, b4, b6, c4, c6, disc })
    }

    pub fn from_ints(a: [i64; 5]) -> Result<Self> {
        Self::new(a.map(BigInt::from))
    }

    pub fn ainvs(&self) -> &[BigInt; 5] {
        &self.a
    }

    pub fn c4(&self) -> &BigInt {
        &self.c4
    }

    pub fn c6(&self) -> &BigInt {
        &self.c6
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    /// `j = c4^3 / disc` as a numerator and positive denominator (not reduced).
    pub fn j_invariant(&self) -> (BigInt, BigInt) {
        let num = &self.c4 * &self.c4 * &self.c4;
        if self.disc.is_negative() {
            (-num, -self.disc.clone())
        } else {
            (num, self.disc.clone())
        }
    }

    /// Text key `[a1,a2,a3,a4,a6]`.
    pub fn key(&self) -> String {
        let parts: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        format!("[{}]", parts.join(","))
    }

    /// The reduced global minimal model.
    pub fn minimal_model(&self) -> Result<CurveQ> {
        let mut u = BigInt::one();
        let mut d = self.disc.abs();
        let mut p: u64 = 2;
        while BigInt::from(p).pow(12) <= d {
            if arith::is_prime(p) {
                let pb = BigInt::from(p);
                let mut k = val_big(&self.disc, p, 1000) / 12;
                k = k.min(val_big(&self.c4, p, 1000) / 4).min(val_big(&self.c6, p, 1000) / 6);
                while k > 0 {
                    let trial = &u * pb.pow(k);
                    if from_c4c6(&self.c4, &self.c6, &trial).is_some() {
                        u = trial;
                        d /= pb.pow(12 * k);
                        break;
                    }
                    k -= 1;
                }
            }
            p += 1;
        }
        let a = from_c4c6(&self.c4, &self.c6, &u)
            .ok_or_else(|| Error::InvalidParameter("no integral model with these invariants".into()))?;
        CurveQ::new(a)
    }

    fn a_mod(&self, q: u64) -> [u64; 5] {
        let qb = BigInt::from(q);
        self.a.clone().map(|x| x.mod_floor(&qb).to_u64().unwrap())
    }

    fn b_mod(&self, q: u64) -> (u64, u64, u64) {
        let qb = BigInt::from(q);
        let r = |x: &BigInt| x.mod_floor(&qb).to_u64().unwrap();
        (r(&self.b2), r(&self.b4), r(&self.b6))
    }

    pub fn c4_mod(&self, q: u64) -> u64 {
        self.c4.mod_floor(&BigInt::from(q)).to_u64().unwrap()
    }

    pub fn c6_mod(&self, q: u64) -> u64 {
        self.c6.mod_floor(&BigInt::from(q)).to_u64().unwrap()
    }

    pub fn has_good_reduction(&self, q: u64) -> bool {
        !(&self.disc % BigInt::from(q)).is_zero()
    }

    /// Reduction type at `q`; the model is assumed minimal at `q`.
    pub fn reduction_type(&self, q: u64) -> ReductionType {
        if self.has_good_reduction(q) {
            return ReductionType::Good;
        }
        if self.c4_mod(q) == 0 {
            return ReductionType::Additive;
        }
        let split = if q >= 5 {
            let minus_c6 = (q - self.c6_mod(q)) % q;
            legendre(minus_c6 as i128, q) == 1
        } else {
            self.tangent_cone_splits(q)
        };
        if split {
            ReductionType::SplitMultiplicative
        } else {
            ReductionType::NonsplitMultiplicative
        }
    }

    /// Whether the tangent lines at the node of the reduction mod a small `q` are rational.
    fn tangent_cone_splits(&self, q: u64) -> bool {
        let [a1, a2, a3, a4, a6] = self.a_mod(q).map(|x| x as i64);
        let qi = q as i64;
        let m = |x: i64| x.rem_euclid(qi);
        let f = |x: i64, y: i64| m(y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6);
        let fx = |x: i64, y: i64| m(a1 * y - 3 * x * x - 2 * a2 * x - a4);
        let fy = |x: i64, y: i64| m(2 * y + a1 * x + a3);
        for x0 in 0..qi {
            for y0 in 0..qi {
                if f(x0, y0) == 0 && fx(x0, y0) == 0 && fy(x0, y0) == 0 {
                    // Quadratic part Y^2 + a1 XY - (3 x0 + a2) X^2: count rational slopes.
                    let c = m(3 * x0 + a2);
                    let roots = (0..qi).filter(|&t| m(t * t + a1 * t - c) == 0).count();
                    return roots == 2;
                }
            }
        }
        false
    }

    /// `(#E(F_q), a_q)` by a character sum over `x`; requires good reduction and `q <= max_q`.
    pub fn count_points_bounded(&self, q: u64, max_q: u64) -> Result<(u64, i64)> {
        if q > max_q {
            return Err(Error::SizeGuard(format!("q = {q} exceeds the point-counting bound {max_q}")));
        }
        if !arith::is_prime(q) {
            return Err(Error::InvalidParameter(format!("{q} is not prime")));
        }
        if !self.has_good_reduction(q) {
            return Err(Error::Hypothesis(format!("bad reduction at {q}")));
        }
        let count = if q == 2 {
            let [a1, a2, a3, a4, a6] = self.a_mod(2);
            let affine = (0..2u64)
                .flat_map(|x| (0..2u64).map(move |y| (x, y)))
                .filter(|&(x, y)| (y * y + a1 * x * y + a3 * y + x * x * x + a2 * x * x + a4 * x + a6) % 2 == 0)
                .count() as u64;
            affine + 1
        } else {
            let (b2, b4, b6) = self.b_mod(q);
            let mut chi = vec![-1i8; q as usize];
            chi[0] = 0;
            for y in 1..=(q / 2) {
                chi[((y * y) % q) as usize] = 1;
            }
            let mut total: i64 = 0;
            for x in 0..q {
                // 4x^3 + b2 x^2 + 2 b4 x + b6 by Horner, all below q^2.
                let mut v = 4 % q;
                v = (v * x + b2) % q;
                v = (v * x + 2 * b4) % q;
                v = (v * x + b6) % q;
                total += chi[v as usize] as i64;
            }
            (q as i64 + 1 + total) as u64
        };
        let a = q as i64 + 1 - count as i64;
        assert!((a as i128) * (a as i128) <= 4 * q as i128, "Hasse bound violated at {q}");
        Ok((count, a))
    }

    pub fn count_points(&self, q: u64) -> Result<(u64, i64)> {
        self.count_points_bounded(q, DEFAULT_MAX_Q)
    }

    pub fn a_q(&self, q: u64) -> Result<i64> {
        Ok(self.count_points(q)?.1)
    }

    /// Primes of bad reduction, by trial division of the discriminant.
    pub fn bad_primes(&self) -> Result<Vec<u64>> {
        let mut d = self.disc.abs();
        let mut out = Vec::new();
        let mut p: u64 = 2;
        while !d.is_one() && p < 1_000_000 {
            if BigInt::from(p) * BigInt::from(p) > d {
                break;
            }
            let pb = BigInt::from(p);
            if (&d % &pb).is_zero() {
                out.push(p);
                while (&d % &pb).is_zero() {
                    d /= &pb;
                }
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if !d.is_one() {
            let r = d
                .to_u64()
                .filter(|&r| arith::is_prime(r))
                .ok_or_else(|| Error::SizeGuard(format!("cannot factor discriminant cofactor {d}")))?;
            out.push(r);
            out.sort_unstable();
        }
        Ok(out)
    }

    /// Semistable iff every bad prime has multiplicative reduction (on a minimal model).
    pub fn is_semistable(&self) -> Result<bool> {
        Ok(self
            .bad_primes()?
            .iter()
            .all(|&q| self.reduction_type(q) != ReductionType::Additive))
    }

    /// Product of the bad primes, which is the conductor for semistable curves.
    pub fn semistable_conductor(&self) -> Result<u64> {
        if !self.is_semistable()? {
            return Err(Error::Hypothesis("curve is not semistable".into()));
        }
        Ok(self.bad_primes()?.iter().product())
    }

    /// `(A, B)` of the short model `y^2 = x^3 + A x + B` over `F_q`, `q >= 5`.
    pub fn short_model_mod(&self, q: u64) -> Result<(u64, u64)> {
        if q < 5 {
            return Err(Error::InvalidParameter(format!("no short model in characteristic {q}")));
        }
        let qb = BigInt::from(q);
        let a = (BigInt::from(-27) * &self.c4).mod_floor(&qb).to_u64().unwrap();
        let b = (BigInt::from(-54) * &self.c6).mod_floor(&qb).to_u64().unwrap();
        Ok((a, b))
    }
}

/// Cremona's reconstruction of a reduced model from `(c4 / u^4, c6 / u^6)`, if integral.
fn from_c4c6(c4: &BigInt, c6: &BigInt, u: &BigInt) -> Option<[BigInt; 5]> {
    let u4 = u.pow(4);
    let u6 = u.pow(6);
    if !(c4 % &u4).is_zero() || !(c6 % &u6).is_zero() {
        return None;
    }
    let (c4, c6) = (c4 / u4, c6 / u6);
    let mut b2 = (-&c6).mod_floor(&BigInt::from(12));
    if b2 > BigInt::from(6) {
        b2 -= 12;
    }
    let exact = |n: BigInt, d: i64| -> Option<BigInt> {
        let (q, r) = n.div_rem(&BigInt::from(d));
        r.is_zero().then_some(q)
    };
    let b4 = exact(&b2 * &b2 - &c4, 24)?;
    let b6 = exact(-(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - &c6, 216)?;
    let a1 = b2.mod_floor(&BigInt::from(2));
    let a3 = b6.mod_floor(&BigInt::from(2));
    let a2 = exact(&b2 - &a1, 4)?;
    let a4 = exact(&b4 - &a1 * &a3, 2)?;
    let a6 = exact(&b6 - &a3, 4)?;
    Some([a1, a2, a3, a4, a6])
}

impl fmt::Display for CurveQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

impl FromStr for CurveQ {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "X0(11)" => return CurveQ::from_ints([0, -1, 1, -10, -20]),
            "X0+(37)" => return CurveQ::from_ints([0, 0, 1, -1, 0]),
            _ => {}
        }
        let inner = t.trim_start_matches('[').trim_end_matches(']');
        let parts: Vec<&str> = inner.split([',', ' ']).filter(|x| !x.is_empty()).collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!("curve {s:?} needs five coefficients or a known name")));
        }
        let mut a: [BigInt; 5] = Default::default();
        for (slot, part) in a.iter_mut().zip(parts) {
            *slot = part.parse().map_err(|_| Error::Parse(format!("bad coefficient {part:?}")))?;
        }
        CurveQ::new(a)
    }
}

/// `#E(F_{q^d})` from `a_q` via the power sums of the Frobenius roots.
pub fn count_points_ext(a_q: i64, q: u64, d: u32) -> BigInt {
    let (a, qb) = (BigInt::from(a_q), BigInt::from(q));
    let (mut s_prev, mut s) = (BigInt::from(2), a.clone());
    for _ in 1..d {
        let next = &a * &s - &qb * &s_prev;
        s_prev = std::mem::replace(&mut s, next);
    }
    if d == 0 {
        s = s_prev;
    }
    qb.pow(d) + 1 - s
}

/// The unit root of `x^2 - a_p x + p` modulo `p^n` for a good ordinary prime `p`.
pub fn unit_root(curve: &CurveQ, p: u64, n: u32) -> Result<PValued> {
    let a = curve.a_q(p)?;
    if a.rem_euclid(p as i64) == 0 {
        return Err(Error::Hypothesis(format!("reduction at {p} is not ordinary")));
    }
    let f = [BigInt::from(p), BigInt::from(-a), BigInt::one()];
    let root = hensel_root(&f, &BigInt::from(a.rem_euclid(p as i64)), p, n)?;
    let r = root.residue(n)?;
    Ok(PValued::new(r.to_i128().unwrap(), p, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x011() -> CurveQ {
        "X0(11)".parse().unwrap()
    }

    #[test]
    fn invariants() {
        let e = x011();
        assert_eq!(e.c4(), &BigInt::from(496));
        assert_eq!(e.c6(), &BigInt::from(20008));
        assert_eq!(e.discriminant(), &BigInt::from(-161051));
        assert_eq!(e.minimal_model().unwrap(), e);
        let e37: CurveQ = "X0+(37)".parse().unwrap();
        assert_eq!(e37.discriminant(), &BigInt::from(37));
        assert_eq!(e37.minimal_model().unwrap(), e37);
        // a_i scaled by 2^i: the same curve on a non-minimal model
        let big = CurveQ::from_ints([0, -4, 8, -160, -1280]).unwrap();
        assert_eq!(big.minimal_model().unwrap(), e);
        let big = CurveQ::from_ints([0, 0, 27, -81, 0]).unwrap();
        assert_eq!(big.minimal_model().unwrap(), e37);
    }

    #[test]
    fn point_counts() {
        let e = x011();
        assert_eq!(e.a_q(8689).unwrap(), 90);
        assert_eq!(e.a_q(7).unwrap(), -2);
        assert_eq!(e.a_q(3).unwrap(), -1);
        assert_eq!(e.a_q(2).unwrap(), -2);
        let e37: CurveQ = "X0+(37)".parse().unwrap();
        assert_eq!(e37.count_points(4391).unwrap().0, 4425);
        assert_eq!(e37.a_q(73).unwrap(), -1);
        assert!(matches!(e.count_points(11), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn extension_counts() {
        assert_eq!(count_points_ext(5, 13, 1), BigInt::from(13 + 1 - 5));
        assert_eq!(count_points_ext(0, 13, 2), BigInt::from(14 * 14));
        assert_eq!(count_points_ext(90, 8689, 2), BigInt::from(8689i64 * 8689 + 1 - (90 * 90 - 2 * 8689)));
    }

    #[test]
    fn reduction_types() {
        let e = x011();
        assert_eq!(e.reduction_type(11), ReductionType::SplitMultiplicative);
        assert_eq!(e.reduction_type(7), ReductionType::Good);
        let f = CurveQ::from_ints([0, 0, 0, -1, 0]).unwrap();
        assert_eq!(f.reduction_type(2), ReductionType::Additive);
        assert_eq!(e.bad_primes().unwrap(), vec![11]);
        assert_eq!(e.semistable_conductor().unwrap(), 11);
    }

    #[test]
    fn unit_roots() {
        let e = x011();
        assert_eq!(unit_root(&e, 3, 2).unwrap().value(), 2);
        assert_eq!(unit_root(&e, 7, 1).unwrap().value(), 5);
        let r = unit_root(&e, 7, 3).unwrap();
        // x^2 + 2x + 7 vanishes at the root mod 7^3
        let x = r.value() as i128;
        assert_eq!((x * x + 2 * x + 7).rem_euclid(343), 0);
    }
}
