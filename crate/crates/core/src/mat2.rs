//! 2x2 matrices over `Z/m`.

use std::fmt;
use std::str::FromStr;

use crate::arith::{self, add_mod, ipow, mul_mod, sub_mod};
use crate::error::{Error, Result};
use crate::padic::val;

/// A 2x2 matrix `[[a, b], [c, d]]` with entries reduced modulo `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    m: u64,
}

/// Exponents of the Smith normal form `diag(p^e1, p^e2)`, capped at `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SmithForm {
    pub e1: u32,
    pub e2: u32,
}

impl Mat2 {
    pub fn new(a: i128, b: i128, c: i128, d: i128, m: u64) -> Self {
        assert!(m >= 1);
        let r = |x| arith::reduce(x, m);
        Self { a: r(a), b: r(b), c: r(c), d: r(d), m }
    }

    pub fn identity(m: u64) -> Self {
        Self::new(1, 0, 0, 1, m)
    }

    pub fn scalar(s: i128, m: u64) -> Self {
        Self::new(s, 0, 0, s, m)
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn entries(&self) -> [u64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.m == other.m {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(self.m, other.m))
        }
    }

    /// Product without the modulus check; callers guarantee equal moduli.
    #[inline]
    pub fn mul_unchecked(&self, o: &Self) -> Self {
        let m = self.m;
        let dot = |x: u64, y: u64, z: u64, w: u64| add_mod(mul_mod(x, y, m), mul_mod(z, w, m), m);
        Self {
            a: dot(self.a, o.a, self.b, o.c),
            b: dot(self.a, o.b, self.b, o.d),
            c: dot(self.c, o.a, self.d, o.c),
            d: dot(self.c, o.b, self.d, o.d),
            m,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(self.m);
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    pub fn det(&self) -> u64 {
        sub_mod(mul_mod(self.a, self.d, self.m), mul_mod(self.b, self.c, self.m), self.m)
    }

    pub fn trace(&self) -> u64 {
        add_mod(self.a, self.d, self.m)
    }

    pub fn is_invertible(&self) -> bool {
        arith::gcd(self.det(), self.m) == 1
    }

    pub fn inverse(&self) -> Result<Self> {
        let di = arith::inv_mod(self.det(), self.m).ok_or(Error::NotInvertible(self.m))?;
        let m = self.m;
        Ok(Self {
            a: mul_mod(self.d, di, m),
            b: mul_mod(m - self.b % m, di, m) % m,
            c: mul_mod(m - self.c % m, di, m) % m,
            d: mul_mod(self.a, di, m),
            m,
        })
    }

    pub fn sub_identity(&self) -> Self {
        Self { a: sub_mod(self.a, 1, self.m), d: sub_mod(self.d, 1, self.m), ..*self }
    }

    pub fn sub_scalar(&self, s: u64) -> Self {
        Self { a: sub_mod(self.a, s, self.m), d: sub_mod(self.d, s, self.m), ..*self }
    }

    /// `g * (x, y)^T`.
    #[inline]
    pub fn apply(&self, x: u64, y: u64) -> (u64, u64) {
        let m = self.m;
        (
            add_mod(mul_mod(self.a, x, m), mul_mod(self.b, y, m), m),
            add_mod(mul_mod(self.c, x, m), mul_mod(self.d, y, m), m),
        )
    }

    /// Reduction to a divisor of the modulus.
    pub fn reduce(&self, m: u64) -> Self {
        assert_eq!(self.m % m, 0, "{m} does not divide {}", self.m);
        Self::new(self.a as i128, self.b as i128, self.c as i128, self.d as i128, m)
    }

    /// Signed representatives in `(-m/2, m/2]`, handy for display.
    pub fn signed_entries(&self) -> [i128; 4] {
        let m = self.m as i128;
        self.entries().map(|x| {
            let x = x as i128;
            if 2 * x > m {
                x - m
            } else {
                x
            }
        })
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]] mod {}", self.a, self.b, self.c, self.d, self.m)
    }
}

/// Parses `[[a,b],[c,d]] mod m` (whitespace and signs allowed).
impl FromStr for Mat2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (body, m) = match compact.split_once("mod") {
            Some((body, m)) => {
                let m: u64 = m.parse().map_err(|_| Error::Parse(format!("bad modulus in {s:?}")))?;
                (body.to_string(), Some(m))
            }
            None => (compact.clone(), None),
        };
        let nums: Vec<&str> = body
            .trim_matches(|c| c == '[' || c == ']')
            .split([',', '[', ']'])
            .filter(|t| !t.is_empty())
            .collect();
        if nums.len() != 4 || !body.starts_with("[[") || !body.ends_with("]]") {
            return Err(Error::Parse(format!("expected [[a,b],[c,d]], got {s:?}")));
        }
        let mut e = [0i128; 4];
        for (slot, t) in e.iter_mut().zip(&nums) {
            *slot = t.parse().map_err(|_| Error::Parse(format!("bad entry {t:?}")))?;
        }
        let m = m.ok_or_else(|| Error::Parse(format!("missing 'mod m' in {s:?}")))?;
        if m == 0 {
            return Err(Error::Parse("modulus must be positive".into()));
        }
        Ok(Mat2::new(e[0], e[1], e[2], e[3], m))
    }
}

/// Splits `m` as `p^n`, if it is a prime power.
pub fn prime_power(m: u64) -> Option<(u64, u32)> {
    match arith::factor(m).as_slice() {
        [(p, n)] => Some((*p, *n)),
        _ => None,
    }
}

fn require_prime_power(g: &Mat2) -> Result<(u64, u32)> {
    prime_power(g.m).ok_or_else(|| Error::InvalidParameter(format!("{} is not a prime power", g.m)))
}

/// Largest `mu <= n` with `g` scalar modulo `p^mu`.
pub fn mu_depth(g: &Mat2) -> Result<u32> {
    let (p, n) = require_prime_power(g)?;
    Ok(mu_depth_pn(g, p, n))
}

pub fn mu_depth_pn(g: &Mat2, p: u64, n: u32) -> u32 {
    let ad = g.a as i128 - g.d as i128;
    val(ad, p, n).min(val(g.b as i128, p, n)).min(val(g.c as i128, p, n))
}

pub fn smith(g: &Mat2) -> Result<SmithForm> {
    let (p, n) = require_prime_power(g)?;
    Ok(smith_pn(g, p, n))
}

/// Smith exponents over `Z/p^n`, computed by one elimination step.
pub fn smith_pn(g: &Mat2, p: u64, n: u32) -> SmithForm {
    let m = g.m;
    let vals = g.entries().map(|x| val(x as i128, p, n));
    let e1 = *vals.iter().min().unwrap();
    if e1 >= n {
        return SmithForm { e1: n, e2: n };
    }
    // Move the pivot to the top-left by row/column swaps.
    let [a, b, c, d] = g.entries();
    let (a, b, c, d) = match vals.iter().position(|&v| v == e1).unwrap() {
        0 => (a, b, c, d),
        1 => (b, a, d, c),
        2 => (c, d, a, b),
        _ => (d, c, b, a),
    };
    let pe = ipow(p, e1);
    let unit = a / pe;
    let uinv = arith::inv_mod(unit % m, m).expect("pivot has a unit cofactor");
    // d - c * b / a, with c / p^e1 exact since e1 is minimal.
    let cb = mul_mod(mul_mod(c / pe, b, m), uinv, m);
    let dprime = sub_mod(d, cb, m);
    SmithForm { e1, e2: val(dprime as i128, p, n) }
}

/// Splits a matrix mod `N` into its prime-power components, ascending by prime.
pub fn crt_split(g: &Mat2) -> Vec<Mat2> {
    arith::factor(g.m).into_iter().map(|(p, e)| g.reduce(ipow(p, e))).collect()
}

/// Inverse of [`crt_split`] for pairwise coprime moduli.
pub fn crt_join(parts: &[Mat2]) -> Result<Mat2> {
    let mut acc = Mat2::identity(1);
    for part in parts {
        let (m1, m2) = (acc.m, part.m);
        if arith::gcd(m1, m2) != 1 {
            return Err(Error::InvalidParameter(format!("moduli {m1} and {m2} are not coprime")));
        }
        let m = m1 * m2;
        let i1 = arith::inv_mod(m1 % m2, m2).unwrap_or(0);
        let join = |x: u64, y: u64| -> u64 {
            // x + m1 * ((y - x) * m1^{-1} mod m2)
            let t = mul_mod(sub_mod(y, x % m2, m2), i1, m2);
            x + m1 * t
        };
        acc = Mat2 {
            a: join(acc.a, part.a),
            b: join(acc.b, part.b),
            c: join(acc.c, part.c),
            d: join(acc.d, part.d),
            m,
        };
    }
    Ok(acc)
}

/// A multiple of every element order in `GL_2(Z/m)`.
pub fn group_exponent_bound(m: u64) -> u64 {
    arith::factor(m).into_iter().fold(1, |acc, (p, e)| arith::lcm(acc, (p * p - 1) * ipow(p, e)))
}

/// Exact multiplicative order of an invertible matrix.
pub fn matrix_order(g: &Mat2) -> Result<u64> {
    if !g.is_invertible() {
        return Err(Error::NotInvertible(g.m));
    }
    let id = Mat2::identity(g.m);
    let mut ord = group_exponent_bound(g.m);
    debug_assert_eq!(g.pow(ord), id);
    for (r, _) in arith::factor(ord) {
        while ord % r == 0 && g.pow(ord / r) == id {
            ord /= r;
        }
    }
    Ok(ord)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_algebra() {
        let g = Mat2::new(2, 6, 3, 2, 9);
        assert_eq!(Mat2::identity(9).mul(&g).unwrap(), g);
        assert_eq!(g.det(), 4);
        assert_eq!(g.pow(1), g);
        assert!(g.mul(&Mat2::identity(7)).is_err());
        let h = Mat2::new(1, 2, 3, 7, 9);
        assert_eq!(h.mul(&h.inverse().unwrap()).unwrap(), Mat2::identity(9));
    }

    #[test]
    fn depth_examples() {
        assert_eq!(mu_depth(&Mat2::scalar(3, 27)).unwrap(), 3);
        assert_eq!(mu_depth(&Mat2::new(2, 20, 5, 2, 625)).unwrap(), 1);
        assert_eq!(mu_depth(&Mat2::new(0, 1, -313, -1, 9)).unwrap(), 0);
    }

    #[test]
    fn smith_examples() {
        assert_eq!(smith(&Mat2::new(0, 0, 0, 0, 27)).unwrap(), SmithForm { e1: 3, e2: 3 });
        assert_eq!(smith(&Mat2::new(3, 0, 0, 9, 27)).unwrap(), SmithForm { e1: 1, e2: 2 });
        // Capped determinant valuation would wrongly report e2 = 3 - 1 here.
        assert_eq!(smith(&Mat2::new(3, 0, 0, 0, 27)).unwrap(), SmithForm { e1: 1, e2: 3 });
    }

    #[test]
    fn crt_round_trip() {
        let g = Mat2::new(2, 42, 21, 20, 63);
        let parts = crt_split(&g);
        assert_eq!(parts, vec![Mat2::new(2, 6, 3, 2, 9), Mat2::new(2, 0, 0, 6, 7)]);
        assert_eq!(crt_join(&parts).unwrap(), g);
        assert_eq!(crt_split(&Mat2::identity(63)), vec![Mat2::identity(9), Mat2::identity(7)]);
    }

    #[test]
    fn orders() {
        assert_eq!(matrix_order(&Mat2::identity(9)).unwrap(), 1);
        assert_eq!(matrix_order(&Mat2::new(0, -3, 1, -1, 7)).unwrap(), 48);
        assert_eq!(matrix_order(&Mat2::new(0, -1, 1, 0, 9)).unwrap(), 4);
        assert!(matrix_order(&Mat2::new(3, 0, 0, 1, 9)).is_err());
    }

    #[test]
    fn text_format() {
        let g: Mat2 = "[[2, 230], [5, 2]] mod 625".parse().unwrap();
        assert_eq!(g, Mat2::new(2, 230, 5, 2, 625));
        assert_eq!(g.to_string().parse::<Mat2>().unwrap(), g);
        let h: Mat2 = "[[-1,1],[-1,-1]] mod 63".parse().unwrap();
        assert_eq!(h.a, 62);
        assert!("[[1,2],[3]] mod 5".parse::<Mat2>().is_err());
        assert!("[[1,2],[3,4]]".parse::<Mat2>().is_err());
    }
}
