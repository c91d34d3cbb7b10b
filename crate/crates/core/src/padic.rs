//! Residues modulo odd prime powers and truncated p-adic numbers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{self, ipow, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// `min(v_p(x), cap)`, with `cap` standing in for the valuation of zero.
pub fn val(x: i128, p: u64, cap: u32) -> u32 {
    match arith::vp(x, p) {
        Some(v) => v.min(cap),
        None => cap,
    }
}

/// Same as [`val`] for big integers.
pub fn val_big(x: &BigInt, p: u64, cap: u32) -> u32 {
    if x.is_zero() {
        return cap;
    }
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    while v < cap {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            break;
        }
        x = q;
        v += 1;
    }
    v
}

/// A residue modulo `p^n` for an odd prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PValued {
    value: u64,
    p: u64,
    n: u32,
}

impl PValued {
    pub fn new(value: i128, p: u64, n: u32) -> Self {
        assert!(n >= 1, "exponent must be positive");
        let m = ipow(p, n);
        Self { value: arith::reduce(value, m), p, n }
    }

    pub fn value(&self) -> u64 {
        self.value
    }
    pub fn prime(&self) -> u64 {
        self.p
    }
    pub fn exponent(&self) -> u32 {
        self.n
    }
    pub fn modulus(&self) -> u64 {
        ipow(self.p, self.n)
    }

    pub fn is_unit(&self) -> bool {
        self.value % self.p != 0
    }

    /// Valuation capped at `n`.
    pub fn valuation(&self) -> u32 {
        val(self.value as i128, self.p, self.n)
    }

    fn require_unit(&self) -> Result<()> {
        if self.is_unit() {
            Ok(())
        } else {
            Err(Error::NotUnit { value: self.value, modulus: self.modulus() })
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        Self { value: pow_mod(self.value, e, self.modulus()), ..*self }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { value: mul_mod(self.value, other.value, self.modulus()), ..*self }
    }

    pub fn inverse(&self) -> Result<Self> {
        self.require_unit()?;
        let m = self.modulus();
        Ok(Self { value: arith::inv_mod(self.value, m).unwrap(), ..*self })
    }

    /// Reduction to a smaller exponent.
    pub fn reduce_to(&self, n: u32) -> Self {
        assert!(n >= 1 && n <= self.n);
        Self::new(self.value as i128, self.p, n)
    }

    /// Order of the residue modulo `p`.
    pub fn residue_order(&self) -> Result<u64> {
        self.require_unit()?;
        Ok(arith::order_mod(self.value % self.p, self.p, self.p - 1))
    }
}

impl fmt::Display for PValued {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus())
    }
}

/// Multiplicative order of a unit modulo `p^n`.
pub fn unit_order(alpha: &PValued) -> Result<u64> {
    alpha.require_unit()?;
    let exponent = arith::phi_prime_power(alpha.p, alpha.n);
    Ok(arith::order_mod(alpha.value, alpha.modulus(), exponent))
}

/// `min(v(alpha^o - 1), n)` where `o` is the order of `alpha` modulo `p`.
pub fn v_alpha(alpha: &PValued) -> Result<u32> {
    let o = alpha.residue_order()?;
    let m = alpha.modulus();
    let x = pow_mod(alpha.value, o, m);
    Ok(val(x as i128 - 1, alpha.p, alpha.n))
}

/// Square root modulo an odd prime by Tonelli-Shanks.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1).unwrap();
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Square root of a unit modulo `p^k`, lifted from a root modulo `p`.
fn sqrt_unit(u: u64, p: u64, k: u32) -> Option<u64> {
    let m = ipow(p, k);
    let mut r = sqrt_mod_prime(u % p, p)?;
    // Newton on x^2 - u; each step at least doubles the precision.
    let mut prec = 1;
    while prec < k {
        let r2 = mul_mod(r, r, m);
        let num = arith::sub_mod(r2, u, m);
        let den = arith::inv_mod(mul_mod(2, r, m), m)?;
        r = arith::sub_mod(r, mul_mod(num, den, m), m);
        prec *= 2;
    }
    debug_assert_eq!(mul_mod(r, r, m), u % m);
    Some(r)
}

/// A square root of `x` modulo `p^n`, if one exists.
pub fn sqrt_mod(x: &PValued) -> Option<PValued> {
    if x.value == 0 {
        return Some(*x);
    }
    let v = x.valuation();
    if v % 2 == 1 {
        return None;
    }
    let pv = ipow(x.p, v);
    let u = x.value / pv;
    let r = sqrt_unit(u % ipow(x.p, x.n - v), x.p, x.n - v)?;
    Some(PValued::new(r as i128 * ipow(x.p, v / 2) as i128, x.p, x.n))
}

/// The root of unity of order dividing `p-1` congruent to `alpha` modulo `p`.
pub fn teichmuller(alpha: &PValued) -> Result<PValued> {
    alpha.require_unit()?;
    let m = alpha.modulus();
    let mut w = alpha.value;
    loop {
        let next = pow_mod(w, alpha.p, m);
        if next == w {
            return Ok(PValued { value: w, ..*alpha });
        }
        w = next;
    }
}

fn big_pow(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

fn eval_poly(f: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in f.iter().rev() {
        acc = (acc * x + c).mod_floor(m);
    }
    acc
}

fn derivative(f: &[BigInt]) -> Vec<BigInt> {
    f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

fn big_inv(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Newton lifting of a simple root. `f` lists coefficients from the constant term up.
pub fn hensel_root(f: &[BigInt], x0: &BigInt, p: u64, precision: u32) -> Result<TruncatedPadic> {
    let pb = BigInt::from(p);
    if !eval_poly(f, x0, &pb).is_zero() {
        return Err(Error::InvalidParameter("starting value is not a root modulo p".into()));
    }
    let df = derivative(f);
    let m = big_pow(p, precision);
    let mut x = x0.mod_floor(&m);
    let mut prec = 1u32;
    while prec < precision {
        prec = (2 * prec).min(precision);
        let d = eval_poly(&df, &x, &m);
        let dinv = big_inv(&d, &m).ok_or(Error::DerivativeNotUnit)?;
        x = (&x - eval_poly(f, &x, &m) * dinv).mod_floor(&m);
    }
    if big_inv(&eval_poly(&df, &x, &pb), &pb).is_none() {
        return Err(Error::DerivativeNotUnit);
    }
    Ok(TruncatedPadic::from_integer(&x, p, precision))
}

/// An element `p^valuation * unit + O(p^(valuation + precision))`.
///
/// When `unit` is zero the value is the zero marker `O(p^valuation)` and
/// `precision` is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedPadic {
    p: u64,
    unit: BigInt,
    valuation: i64,
    precision: u32,
}

impl TruncatedPadic {
    /// The exact zero known to absolute precision `abs`.
    pub fn zero(p: u64, abs: i64) -> Self {
        Self { p, unit: BigInt::zero(), valuation: abs, precision: 0 }
    }

    /// An integer known modulo `p^abs`.
    pub fn from_integer(x: &BigInt, p: u64, abs: u32) -> Self {
        let m = big_pow(p, abs);
        let r = x.mod_floor(&m);
        if r.is_zero() {
            return Self::zero(p, abs as i64);
        }
        let v = val_big(&r, p, abs);
        let unit = r / big_pow(p, v);
        Self { p, unit, valuation: v as i64, precision: abs - v }
    }

    /// `num/den` with `relative` digits of precision.
    pub fn from_rational(num: &BigInt, den: &BigInt, p: u64, relative: u32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        if num.is_zero() {
            return Err(Error::Precision("exact zero has no relative precision".into()));
        }
        let vn = strip(num, p);
        let vd = strip(den, p);
        let m = big_pow(p, relative);
        let unit = (vn.1 * big_inv(&vd.1, &m).unwrap()).mod_floor(&m);
        Ok(Self { p, unit, valuation: vn.0 as i64 - vd.0 as i64, precision: relative })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }
    pub fn is_zero_marker(&self) -> bool {
        self.unit.is_zero()
    }
    pub fn valuation(&self) -> i64 {
        self.valuation
    }
    /// Relative precision (zero for the zero marker).
    pub fn precision(&self) -> u32 {
        self.precision
    }
    pub fn absolute_precision(&self) -> i64 {
        self.valuation + self.precision as i64
    }
    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    /// The value as an integer residue modulo `p^abs`; requires nonnegative valuation
    /// and enough known digits.
    pub fn residue(&self, abs: u32) -> Result<BigInt> {
        if self.absolute_precision() < abs as i64 {
            return Err(Error::Precision(format!(
                "need {} digits, have {}",
                abs,
                self.absolute_precision()
            )));
        }
        if self.is_zero_marker() || self.valuation >= abs as i64 {
            return Ok(BigInt::zero());
        }
        if self.valuation < 0 {
            return Err(Error::Precision("negative valuation has no integral residue".into()));
        }
        let m = big_pow(self.p, abs);
        Ok((&self.unit * big_pow(self.p, self.valuation as u32)).mod_floor(&m))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero_marker() || other.is_zero_marker() {
            return Self::zero(self.p, self.valuation + other.valuation);
        }
        let r = self.precision.min(other.precision);
        let m = big_pow(self.p, r);
        Self {
            p: self.p,
            unit: (&self.unit * &other.unit).mod_floor(&m),
            valuation: self.valuation + other.valuation,
            precision: r,
        }
    }

    pub fn neg(&self) -> Self {
        if self.is_zero_marker() {
            return self.clone();
        }
        let m = big_pow(self.p, self.precision);
        Self { unit: (-&self.unit).mod_floor(&m), ..self.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let abs = self.absolute_precision().min(other.absolute_precision());
        let terms: Vec<&Self> = [self, other].into_iter().filter(|x| !x.is_zero_marker()).collect();
        let vmin = match terms.iter().map(|t| t.valuation).min() {
            Some(v) if v < abs => v,
            _ => return Self::zero(self.p, abs),
        };
        let width = (abs - vmin) as u32;
        let m = big_pow(self.p, width);
        let mut s = BigInt::zero();
        for t in terms {
            s += &t.unit * big_pow(self.p, (t.valuation - vmin) as u32);
        }
        let s = s.mod_floor(&m);
        if s.is_zero() {
            return Self::zero(self.p, abs);
        }
        let e = val_big(&s, self.p, width);
        Self {
            p: self.p,
            unit: s / big_pow(self.p, e),
            valuation: vmin + e as i64,
            precision: width - e,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero_marker() {
            return Err(Error::Precision("inverse of an element with no known digits".into()));
        }
        let m = big_pow(self.p, self.precision);
        Ok(Self {
            p: self.p,
            unit: big_inv(&self.unit, &m).unwrap(),
            valuation: -self.valuation,
            precision: self.precision,
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        if self.is_zero_marker() {
            return Self::zero(self.p, self.valuation * e.max(1) as i64);
        }
        let m = big_pow(self.p, self.precision);
        Self {
            unit: self.unit.modpow(&BigInt::from(e), &m),
            valuation: self.valuation * e as i64,
            ..self.clone()
        }
    }

    /// Multiplies by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { valuation: self.valuation + k, ..self.clone() }
    }

    /// Drops digits so that the relative precision is at most `r`.
    pub fn truncate(&self, r: u32) -> Self {
        if self.is_zero_marker() || self.precision <= r {
            return self.clone();
        }
        let m = big_pow(self.p, r);
        Self { unit: self.unit.mod_floor(&m), precision: r, ..self.clone() }
    }

    /// Base-p digits of the unit part, least significant first.
    pub fn digits(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.precision as usize);
        let p = BigInt::from(self.p);
        let mut u = self.unit.clone();
        for _ in 0..self.precision {
            let (q, r) = u.div_rem(&p);
            out.push(r.to_u64().unwrap());
            u = q;
        }
        out
    }
}

fn strip(x: &BigInt, p: u64) -> (u32, BigInt) {
    let pb = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&pb);
        if !r.is_zero() {
            return (v, x);
        }
        x = q;
        v += 1;
    }
}

impl fmt::Display for TruncatedPadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero_marker() {
            return write!(f, "O({}^{})", self.p, self.valuation);
        }
        let unit = if self.unit.is_negative() { -&self.unit } else { self.unit.clone() };
        write!(
            f,
            "{} * {}^{} + O({}^{})",
            unit,
            self.p,
            self.valuation,
            self.p,
            self.absolute_precision()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capped_valuations() {
        assert_eq!(val(15, 3, 2), 1);
        assert_eq!(val(0, 5, 4), 4);
        assert_eq!(val(-1188, 3, 2), 2);
    }

    #[test]
    fn orders_and_depths() {
        assert_eq!(unit_order(&PValued::new(2, 5, 4)).unwrap(), 500);
        assert_eq!(unit_order(&PValued::new(32, 5, 4)).unwrap(), 100);
        assert_eq!(unit_order(&PValued::new(1, 7, 3)).unwrap(), 1);
        assert_eq!(v_alpha(&PValued::new(2, 5, 4)).unwrap(), 1);
        assert_eq!(v_alpha(&PValued::new(32, 5, 4)).unwrap(), 2);
        assert_eq!(v_alpha(&PValued::new(1, 3, 2)).unwrap(), 2);
        assert!(unit_order(&PValued::new(10, 5, 2)).is_err());
    }

    #[test]
    fn square_roots() {
        let r = sqrt_mod(&PValued::new(4, 7, 1)).unwrap().value();
        assert!(r == 2 || r == 5);
        assert!(sqrt_mod(&PValued::new(3, 7, 1)).is_none());
        let r = sqrt_mod(&PValued::new(2, 7, 2)).unwrap().value();
        // oracle: square every residue mod 49
        let roots: Vec<u64> = (0..49).filter(|x| x * x % 49 == 2).collect();
        assert_eq!(roots, vec![10, 39]);
        assert!(roots.contains(&r));
        assert!(sqrt_mod(&PValued::new(7, 7, 2)).is_none());
        assert_eq!(sqrt_mod(&PValued::new(9 * 2, 3, 4)).map(|r| r.pow(2).value()), None);
        let x = PValued::new(9 * 7, 3, 4);
        assert_eq!(sqrt_mod(&x).unwrap().pow(2), x);
    }

    #[test]
    fn teichmuller_lifts() {
        assert_eq!(teichmuller(&PValued::new(1, 5, 4)).unwrap().value(), 1);
        for (a, p, n) in [(2, 5, 4), (3, 7, 2)] {
            let m = ipow(p, n);
            let w = teichmuller(&PValued::new(a, p, n)).unwrap();
            let oracle: Vec<u64> =
                (1..m).filter(|&x| pow_mod(x, p - 1, m) == 1 && x % p == a as u64 % p).collect();
            assert_eq!(oracle, vec![w.value()]);
        }
    }

    #[test]
    fn newton_lifting() {
        // x^2 - x - 1 has a double root mod 5, so Newton cannot start there
        let f: Vec<BigInt> = [-1, -1, 1].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(hensel_root(&f, &BigInt::from(3), 5, 4), Err(Error::DerivativeNotUnit));
        let r = hensel_root(&f, &BigInt::from(4), 11, 4).unwrap();
        let x = r.residue(4).unwrap();
        assert!(eval_poly(&f, &x, &BigInt::from(11u32.pow(4))).is_zero());
        assert_eq!(x.clone() % 11, BigInt::from(4));
        let g: Vec<BigInt> = vec![BigInt::from(-17), BigInt::one()];
        assert_eq!(hensel_root(&g, &BigInt::from(17), 5, 3).unwrap().residue(3).unwrap(), BigInt::from(17));
        // unit root of x^2 + x + 3 at 3
        let h: Vec<BigInt> = [3, 1, 1].iter().map(|&c| BigInt::from(c)).collect();
        let r = hensel_root(&h, &BigInt::from(2), 3, 2).unwrap().residue(2).unwrap();
        assert_eq!(r, BigInt::from(2));
        let other = (BigInt::from(-1) - &r).mod_floor(&BigInt::from(9));
        assert_eq!((&r * &other).mod_floor(&BigInt::from(9)), BigInt::from(3));
    }

    #[test]
    fn truncated_arithmetic() {
        let a = TruncatedPadic::from_integer(&BigInt::from(230), 5, 4);
        assert_eq!(a.valuation(), 1);
        assert_eq!(a.digits(), vec![1, 4, 1]);
        let b = TruncatedPadic::from_integer(&BigInt::from(20), 5, 4);
        let d = b.sub(&a);
        assert_eq!(d.valuation(), 1);
        let inv = a.inv().unwrap();
        let one = inv.mul(&a);
        assert_eq!(one.valuation(), 0);
        assert_eq!(one.unit(), &BigInt::one());
        let z = a.sub(&a);
        assert!(z.is_zero_marker());
        assert!(z.inv().is_err());
        let q = TruncatedPadic::from_rational(&BigInt::from(3), &BigInt::from(50), 5, 6).unwrap();
        assert_eq!(q.valuation(), -2);
        assert_eq!(q.mul(&TruncatedPadic::from_integer(&BigInt::from(50), 5, 8)).residue(4).unwrap(), BigInt::from(3));
    }
}
