//! Arithmetic in `F_{q^d} = F_q[x]/(f)` for a prime `q` and the smallest monic
//! irreducible `f` of degree `d` in the order of [`irreducible`].

use num_bigint::BigUint;
use rand::Rng;

use crate::arith::{inv_mod, mul_mod};
use crate::error::{Error, Result};

/// A polynomial over `F_q`, lowest degree first, without trailing zeros.
pub type Poly = Vec<u64>;

fn trim(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn poly_sub(f: &[u64], g: &[u64], q: u64) -> Poly {
    let mut out = vec![0; f.len().max(g.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        *o = (a + q - b) % q;
    }
    trim(out)
}

fn poly_mul(f: &[u64], g: &[u64], q: u64) -> Poly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u128; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            acc[i + j] += a as u128 * b as u128;
        }
    }
    trim(acc.into_iter().map(|x| (x % q as u128) as u64).collect())
}

/// `(f div g, f mod g)`; `g` must be nonzero.
fn poly_divrem(f: &[u64], g: &[u64], q: u64) -> (Poly, Poly) {
    let mut r: Poly = trim(f.to_vec());
    let dg = g.len() - 1;
    if r.len() <= dg {
        return (Vec::new(), r);
    }
    let lead_inv = inv_mod(g[dg], q).expect("nonzero leading coefficient");
    let mut quo = vec![0; r.len() - dg];
    while r.len() > dg {
        let shift = r.len() - 1 - dg;
        let c = mul_mod(*r.last().unwrap(), lead_inv, q);
        quo[shift] = c;
        for (i, &b) in g.iter().enumerate() {
            let t = mul_mod(c, b, q);
            r[shift + i] = (r[shift + i] + q - t) % q;
        }
        r = trim(r);
    }
    (trim(quo), r)
}

fn poly_gcd(f: &[u64], g: &[u64], q: u64) -> Poly {
    let (mut a, mut b) = (trim(f.to_vec()), trim(g.to_vec()));
    while !b.is_empty() {
        let (_, r) = poly_divrem(&a, &b, q);
        a = b;
        b = r;
    }
    a
}

fn poly_powmod(base: &[u64], e: &BigUint, f: &[u64], q: u64) -> Poly {
    let mut result: Poly = vec![1];
    let base = poly_divrem(base, f, q).1;
    for i in (0..e.bits()).rev() {
        result = poly_divrem(&poly_mul(&result, &result, q), f, q).1;
        if e.bit(i) {
            result = poly_divrem(&poly_mul(&result, &base, q), f, q).1;
        }
    }
    result
}

/// Ben-Or test: `f` (monic, degree `d`) is irreducible iff `gcd(f, x^(q^i) - x) = 1`
/// for `1 <= i <= d/2`.
pub fn is_irreducible(f: &[u64], q: u64) -> bool {
    let d = f.len() - 1;
    let x: Poly = vec![0, 1];
    let qb = BigUint::from(q);
    let mut xp = x.clone();
    for _ in 0..d / 2 {
        xp = poly_powmod(&xp, &qb, f, q);
        let g = poly_gcd(f, &poly_sub(&xp, &x, q), q);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// The first monic irreducible polynomial of degree `d` when the lower coefficients
/// are read as the base-`q` digits of `0, 1, 2, ...` (constant term least significant).
pub fn irreducible(q: u64, d: usize) -> Poly {
    if d == 1 {
        return vec![0, 1];
    }
    let mut k: u128 = 0;
    loop {
        let mut f = vec![0u64; d + 1];
        f[d] = 1;
        let mut r = k;
        for c in f.iter_mut().take(d) {
            *c = (r % q as u128) as u64;
            r /= q as u128;
        }
        if f[0] != 0 && is_irreducible(&f, q) {
            return f;
        }
        k += 1;
    }
}

/// An element of [`Field`]: exactly `d` coefficients, lowest degree first.
pub type Fe = Vec<u64>;

#[derive(Clone, Debug)]
pub struct Field {
    q: u64,
    d: usize,
    modulus: Poly,
    order: BigUint,
}

impl Field {
    pub fn new(q: u64, d: usize) -> Result<Self> {
        if q < 3 || !crate::arith::is_prime(q) {
            return Err(Error::InvalidParameter(format!("{q} is not an odd prime")));
        }
        if d == 0 {
            return Err(Error::InvalidParameter("degree must be positive".into()));
        }
        Ok(Self { q, d, modulus: irreducible(q, d), order: BigUint::from(q).pow(d as u32) })
    }

    pub fn characteristic(&self) -> u64 {
        self.q
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> Fe {
        vec![0; self.d]
    }

    pub fn one(&self) -> Fe {
        self.from_u64(1)
    }

    pub fn from_u64(&self, c: u64) -> Fe {
        let mut e = self.zero();
        e[0] = c % self.q;
        e
    }

    pub fn from_i64(&self, c: i64) -> Fe {
        self.from_u64(c.rem_euclid(self.q as i64) as u64)
    }

    fn pad(&self, mut p: Poly) -> Fe {
        p.resize(self.d, 0);
        p
    }

    pub fn is_zero(&self, a: &Fe) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &Fe, b: &Fe) -> Fe {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.q).collect()
    }

    pub fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        a.iter().zip(b).map(|(&x, &y)| (x + self.q - y) % self.q).collect()
    }

    pub fn neg(&self, a: &Fe) -> Fe {
        a.iter().map(|&x| (self.q - x) % self.q).collect()
    }

    pub fn scale(&self, a: &Fe, c: u64) -> Fe {
        a.iter().map(|&x| mul_mod(x, c % self.q, self.q)).collect()
    }

    pub fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        let prod = poly_mul(&trim(a.clone()), &trim(b.clone()), self.q);
        self.pad(poly_divrem(&prod, &self.modulus, self.q).1)
    }

    pub fn sqr(&self, a: &Fe) -> Fe {
        self.mul(a, a)
    }

    /// Inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: &Fe) -> Result<Fe> {
        let q = self.q;
        let (mut r0, mut r1) = (self.modulus.clone(), trim(a.clone()));
        if r1.is_empty() {
            return Err(Error::InvalidParameter("zero has no inverse".into()));
        }
        let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (quo, rem) = poly_divrem(&r0, &r1, q);
            let s2 = poly_sub(&s0, &poly_mul(&quo, &s1, q), q);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since the modulus is irreducible.
        let c = inv_mod(r0[0], q).expect("unit gcd");
        let out: Poly = s0.iter().map(|&x| mul_mod(x, c, q)).collect();
        Ok(self.pad(poly_divrem(&out, &self.modulus, q).1))
    }

    pub fn pow(&self, a: &Fe, e: &BigUint) -> Fe {
        let mut result = self.one();
        for i in (0..e.bits()).rev() {
            result = self.sqr(&result);
            if e.bit(i) {
                result = self.mul(&result, a);
            }
        }
        result
    }

    /// The `q`-power Frobenius.
    pub fn frobenius(&self, a: &Fe) -> Fe {
        if self.d == 1 {
            return a.clone();
        }
        self.pow(a, &BigUint::from(self.q))
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> Fe {
        (0..self.d).map(|_| rng.gen_range(0..self.q)).collect()
    }

    pub fn is_square(&self, a: &Fe) -> bool {
        if self.is_zero(a) {
            return true;
        }
        let e = (&self.order - 1u32) >> 1;
        self.pow(a, &e) == self.one()
    }

    /// A square root by Tonelli-Shanks, or `None` for non-squares.
    pub fn sqrt<R: Rng>(&self, a: &Fe, rng: &mut R) -> Option<Fe> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        if !self.is_square(a) {
            return None;
        }
        if self.d == 1 {
            return crate::padic::sqrt_mod_prime(a[0], self.q).map(|r| self.from_u64(r));
        }
        let one = self.one();
        let qm1 = &self.order - 1u32;
        let s = qm1.trailing_zeros().unwrap_or(0);
        let t = &qm1 >> s;
        let z = loop {
            let z = self.random(rng);
            if !self.is_zero(&z) && !self.is_square(&z) {
                break z;
            }
        };
        let mut m = s;
        let mut c = self.pow(&z, &t);
        let mut tt = self.pow(a, &t);
        let mut r = self.pow(a, &((&t + 1u32) >> 1));
        while tt != one {
            let mut i = 0;
            let mut x = tt.clone();
            while x != one {
                x = self.sqr(&x);
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = self.sqr(&b);
            }
            m = i;
            c = self.sqr(&b);
            tt = self.mul(&tt, &c);
            r = self.mul(&r, &b);
        }
        Some(r)
    }
}
