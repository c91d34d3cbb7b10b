//! Double coset types: the value type, closed forms for cyclic and ramified
//! decomposition groups, and the tensor product over coprime moduli.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::arith::{self, ipow, lcm, mul_mod};
use crate::conjugacy::{classify, ClassKind, ClassLabel};
use crate::error::{Error, Result};
use crate::mat2::{crt_split, matrix_order, Mat2};
use crate::padic::{self, teichmuller, val, PValued, TruncatedPadic};

/// A multiset of terms `count x (b, c)`: `count` double cosets (primes) whose
/// D-orbit has size `b` and I-orbit size `c` (ramification `c`, residue degree `b/c`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DCType {
    terms: BTreeMap<(u64, u64), u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    pub count: u64,
    pub b: u64,
    pub c: u64,
}

impl DCType {
    pub fn new() -> Self {
        Self::default()
    }

    /// The one-term type `1 x (1,1)`, neutral for [`tensor`].
    pub fn unit() -> Self {
        let mut d = Self::new();
        d.add(1, 1, 1).unwrap();
        d
    }

    pub fn from_terms(terms: &[(u64, u64, u64)]) -> Result<Self> {
        let mut d = Self::new();
        for &(count, b, c) in terms {
            d.add(count, b, c)?;
        }
        Ok(d)
    }

    /// Adds `count x (b, c)`; zero counts are ignored.
    pub fn add(&mut self, count: u64, b: u64, c: u64) -> Result<()> {
        if b == 0 || c == 0 || b % c != 0 {
            return Err(Error::InvalidParameter(format!("term ({b},{c}) needs c | b")));
        }
        if count == 0 {
            return Ok(());
        }
        let slot = self.terms.entry((b, c)).or_insert(0);
        *slot = slot
            .checked_add(count)
            .ok_or_else(|| Error::InvalidParameter("multiplicity overflow".into()))?;
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        self.terms.iter().map(|(&(b, c), &count)| Term { count, b, c })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `sum count * b`, the index of the point stabilizer.
    pub fn mass(&self) -> u128 {
        self.terms().map(|t| t.count as u128 * t.b as u128).sum()
    }

    /// Number of primes, `sum count`.
    pub fn prime_count(&self) -> u64 {
        self.terms().map(|t| t.count).sum()
    }

    pub fn is_unramified(&self) -> bool {
        self.terms().all(|t| t.c == 1)
    }

    /// Smallest residue degree `b/c` among the terms.
    pub fn min_residue_degree(&self) -> Option<u64> {
        self.terms().map(|t| t.b / t.c).min()
    }

    /// `(count, e, f)` triples: `count` primes of ramification `e` and residue degree `f`.
    pub fn to_factorization(&self) -> Vec<(u64, u64, u64)> {
        self.terms().map(|t| (t.count, t.c, t.b / t.c)).collect()
    }
}

/// Tensor product of types over coprime moduli.
pub fn tensor(d1: &DCType, d2: &DCType) -> DCType {
    let mut out = DCType::new();
    for s in d1.terms() {
        for t in d2.terms() {
            let b = lcm(s.b, t.b);
            let c = lcm(s.c, t.c);
            let count = s.count as u128 * s.b as u128 * t.count as u128 * t.b as u128 / b as u128;
            let count = u64::try_from(count).expect("tensor multiplicity overflows u64");
            out.add(count, b, c).expect("lcm preserves divisibility");
        }
    }
    out
}

pub fn tensor_all<'a>(types: impl IntoIterator<Item = &'a DCType>) -> DCType {
    types.into_iter().fold(DCType::unit(), |acc, d| tensor(&acc, d))
}

impl fmt::Display for DCType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unramified = self.is_unramified();
        for (i, t) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if unramified {
                write!(f, "{} x {}", t.count, t.b)?;
            } else {
                write!(f, "{} x ({},{})", t.count, t.b, t.c)?;
            }
        }
        Ok(())
    }
}

impl FromStr for DCType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |t: &str| Error::Parse(format!("bad double coset term {t:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let compact = compact.replace('\u{d7}', "x");
        let mut d = DCType::new();
        for part in compact.split('+') {
            let (count, rest) = part.split_once('x').ok_or_else(|| err(part))?;
            let count: u64 = count.parse().map_err(|_| err(part))?;
            let (b, c) = match rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
                Some(inner) => {
                    let (b, c) = inner.split_once(',').ok_or_else(|| err(part))?;
                    (b.parse().map_err(|_| err(part))?, c.parse().map_err(|_| err(part))?)
                }
                None => (rest.parse().map_err(|_| err(part))?, 1),
            };
            d.add(count, b, c)?;
        }
        Ok(d)
    }
}

impl Serialize for DCType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.len()))?;
        for t in self.terms() {
            seq.serialize_element(&t)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for DCType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<Term>::deserialize(d)?;
        let mut out = DCType::new();
        for t in terms {
            out.add(t.count, t.b, t.c).map_err(de::Error::custom)?;
        }
        Ok(out)
    }
}

/// Accumulates terms whose multiplicities are `coef * p^e / k` and must be integral.
struct Builder {
    p: u64,
    out: DCType,
    what: &'static str,
}

impl Builder {
    fn new(p: u64, what: &'static str) -> Self {
        Self { p, out: DCType::new(), what }
    }

    fn term(&mut self, coef: i128, e: i64, k: u64, b: u64, c: u64) -> Result<()> {
        if coef == 0 {
            return Ok(());
        }
        if coef < 0 {
            return Err(Error::NonIntegral(format!("{}: negative multiplicity", self.what)));
        }
        let (mut num, mut den) = (coef as u128, k as u128);
        if e >= 0 {
            num *= (self.p as u128).pow(e as u32);
        } else {
            den *= (self.p as u128).pow((-e) as u32);
        }
        if num % den != 0 {
            return Err(Error::NonIntegral(format!("{}: {num}/{den} for ({b},{c})", self.what)));
        }
        self.out.add((num / den) as u64, b, c)
    }

    fn finish(self) -> DCType {
        self.out
    }
}

fn check_std_args(p: u64, n: u32, ks: &[u64], a: u32, b: u32) -> Result<()> {
    if a > b || b > n {
        return Err(Error::InvalidParameter(format!("need 0 <= a <= b <= n, got a={a}, b={b}, n={n}")));
    }
    if ks.iter().any(|&k| k == 0 || k % p == 0) {
        return Err(Error::InvalidParameter(format!("orders {ks:?} must be prime to {p}")));
    }
    Ok(())
}

/// `DCT(k0; a)`: all orbits of size `k0 p^(n-a)`.
pub fn std_dct(p: u64, n: u32, k0: u64, a: u32) -> Result<DCType> {
    check_std_args(p, n, &[k0], a, a)?;
    let (n_, a_) = (n as i64, a as i64);
    let mut t = Builder::new(p, "DCT(k0;a)");
    t.term((p * p - 1) as i128, n_ + a_ - 2, k0, k0 * ipow(p, n - a), 1)?;
    Ok(t.finish())
}

/// `DCT(k0; a, b)`; equals `DCT(k0; a)` when `a = b`.
pub fn std_dct_ab(p: u64, n: u32, k0: u64, a: u32, b: u32) -> Result<DCType> {
    check_std_args(p, n, &[k0], a, b)?;
    if a == b {
        return std_dct(p, n, k0, a);
    }
    let (n_, a_) = (n as i64, a as i64);
    let p1 = (p - 1) as i128;
    let mut t = Builder::new(p, "DCT(k0;a,b)");
    t.term(p1, n_ + a_ - 1, k0, k0 * ipow(p, n - b), 1)?;
    for u in (n - b + 1)..(n - a) {
        t.term(p1 * p1, n_ + a_ - 2, k0, k0 * ipow(p, u), 1)?;
    }
    t.term(p1, n_ + a_ - 1, k0, k0 * ipow(p, n - a), 1)?;
    Ok(t.finish())
}

/// `DCT(k1, k2; a)` for distinct orders `k1`, `k2`.
pub fn std_dct2(p: u64, n: u32, k1: u64, k2: u64, a: u32) -> Result<DCType> {
    std_dct2_ab(p, n, k1, k2, a, a)
}

/// `DCT(k1, k2; a, b)` for distinct orders `k1`, `k2`.
pub fn std_dct2_ab(p: u64, n: u32, k1: u64, k2: u64, a: u32, b: u32) -> Result<DCType> {
    check_std_args(p, n, &[k1, k2], a, b)?;
    if k1 == k2 {
        return Err(Error::InvalidParameter("k1 and k2 must differ".into()));
    }
    let k3 = lcm(k1, k2);
    let (n_, a_, b_) = (n as i64, a as i64, b as i64);
    let p1 = (p - 1) as i128;
    let pn = ipow(p, n) as i128;
    let pn1 = ipow(p, n - 1) as i128;
    let at = |k: u64, e: u32| k * ipow(p, e);
    let mut t = Builder::new(p, "DCT(k1,k2;a,b)");
    if a == b {
        if k2 % k1 == 0 || k1 % k2 == 0 {
            let (small, big) = if k2 % k1 == 0 { (k1, k2) } else { (k2, k1) };
            t.term(p1, a_ - 1, small, at(small, n - a), 1)?;
            t.term(p1 * (pn + pn1 - 1), a_ - 1, big, at(big, n - a), 1)?;
        } else {
            t.term(p1, a_ - 1, k1, at(k1, n - a), 1)?;
            t.term(p1, a_ - 1, k2, at(k2, n - a), 1)?;
            t.term(p1 * (pn + pn1 - 2), a_ - 1, k3, at(k3, n - a), 1)?;
        }
        return Ok(t.finish());
    }
    let mid = (n - b + 1)..(n - a);
    let pnba = ipow(p, n - b + a) as i128;
    if k2 % k1 == 0 {
        t.term(p1, a_ - 1, k1, at(k1, n - a), 1)?;
        t.term(p1, n_ + a_ - 1, k2, at(k2, n - b), 1)?;
        for u in mid {
            t.term(p1 * p1, n_ + a_ - 2, k2, at(k2, u), 1)?;
        }
        t.term(p1 * (pn - 1), a_ - 1, k2, at(k2, n - a), 1)?;
    } else if k1 % k2 == 0 {
        t.term(p1, b_ - 1, k2, at(k2, n - b), 1)?;
        t.term(p1 * (pnba - 1), b_ - 1, k1, at(k1, n - b), 1)?;
        for u in mid {
            t.term(p1 * p1, n_ + a_ - 2, k1, at(k1, u), 1)?;
        }
        t.term(p1, n_ + a_ - 1, k1, at(k1, n - a), 1)?;
    } else {
        t.term(p1, a_ - 1, k1, at(k1, n - a), 1)?;
        t.term(p1, b_ - 1, k2, at(k2, n - b), 1)?;
        t.term(p1 * (pnba - 1), b_ - 1, k3, at(k3, n - b), 1)?;
        for u in mid {
            t.term(p1 * p1, n_ + a_ - 2, k3, at(k3, u), 1)?;
        }
        t.term(p1 * (pn - 1), a_ - 1, k3, at(k3, n - a), 1)?;
    }
    Ok(t.finish())
}

/// `z^mu(alpha) = (w - alpha)^2 / p^mu` with `w` the Teichmuller lift of `alpha`,
/// treating the residue of `alpha` as an exact integer. The result is known to at
/// least `precision` absolute digits.
pub fn z_mu(alpha: &PValued, mu: u32, precision: u32) -> Result<TruncatedPadic> {
    let p = alpha.prime();
    if !alpha.is_unit() {
        return Err(Error::NotUnit { value: alpha.value(), modulus: alpha.modulus() });
    }
    let work = precision.max(1) + mu;
    if (work as f64) * (p as f64).log2() > 62.0 {
        return Err(Error::Precision(format!("{work} digits of {p} exceed the working range")));
    }
    let lifted = PValued::new(alpha.value() as i128, p, work);
    let w = teichmuller(&lifted)?;
    let diff = w.value() as i128 - alpha.value() as i128;
    let d = TruncatedPadic::from_integer(&diff.into(), p, work);
    Ok(d.mul(&d).shift(-(mu as i64)))
}

/// Capped valuations consumed by the unramified dispatch; only the ones the class needs are set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct UValues {
    pub u1: Option<i64>,
    pub u2: Option<i64>,
    pub u3: Option<i64>,
    pub u4: Option<i64>,
}

/// `min(v(p^k * beta - z^mu(alpha)), n)` for `beta` a residue modulo `p^(n-k)`.
fn u_shifted(alpha: &PValued, mu: u32, k: u32, beta: u64, v_alpha: u32) -> Result<i64> {
    let (p, n) = (alpha.prime(), alpha.exponent());
    let n_ = n as i64;
    let x = (k + val(beta as i128, p, n - k)) as i64;
    let vz = 2 * v_alpha as i64 - mu as i64;
    // v_alpha is capped at n, so vz >= n only tells us z vanishes mod p^n.
    let vz_known = if v_alpha >= n { n_.max(vz) } else { vz };
    if x.min(n_) != vz_known.min(n_) {
        return Ok(x.min(vz_known).min(n_));
    }
    if x >= n_ {
        return Ok(n_);
    }
    let z = z_mu(alpha, mu, n)?;
    let m = ipow(p, n);
    let zr = z.residue(n)?;
    let zr: u64 = u64::try_from(&zr).map_err(|_| Error::Precision("residue overflow".into()))?;
    let lhs = mul_mod(ipow(p, k) % m, beta, m);
    Ok(val(lhs as i128 - zr as i128, p, n) as i64)
}

pub fn u_values(label: &ClassLabel) -> Result<UValues> {
    let (p, n) = (label.p, label.n);
    let alpha = PValued::new(label.alpha() as i128, p, n);
    let mut u = UValues::default();
    match label.kind {
        ClassKind::DepthParabolic { mu, nu, beta, .. } => {
            u.u1 = Some(u_shifted(&alpha, mu, nu, beta, padic::v_alpha(&alpha)?)?);
        }
        ClassKind::DepthSplit { mu, beta, .. } | ClassKind::DepthNonsplit { mu, beta, .. } => {
            u.u2 = Some(u_shifted(&alpha, mu, mu, beta, padic::v_alpha(&alpha)?)?);
        }
        ClassKind::Parabolic { beta, .. } => {
            u.u3 = Some(u_shifted(&alpha, 0, 1, beta, padic::v_alpha(&alpha)?)?);
            if p == 3 {
                let m = ipow(3, n) as i128;
                let a = alpha.value() as i128;
                let eps: i128 = if a % 3 == 1 { 1 } else { -1 };
                let x = (6 * beta as i128 - 2 * a * a - 2 * eps * a + 1).rem_euclid(m);
                let y = (2 * a + eps).rem_euclid(m);
                let v1 = 2 * val(x, 3, n) as i64 - 1;
                let v2 = 2 * val(y, 3, n) as i64;
                u.u4 = Some(v1.min(v2).min(2 * n as i64 - 2));
            }
        }
        _ => {}
    }
    Ok(u)
}

fn cap(x: i64, n: u32) -> u32 {
    x.clamp(0, n as i64) as u32
}

/// Double coset type of `<g> \ G / Gamma` for `g` in the given class.
pub fn unramified_dct(label: &ClassLabel) -> Result<DCType> {
    label.validate()?;
    let (p, n) = (label.p, label.n);
    let alpha = PValued::new(label.alpha() as i128, p, n);
    let o = alpha.residue_order()?;
    let va = padic::v_alpha(&alpha)?;
    let uv = u_values(label)?;
    match label.kind {
        ClassKind::Central { .. } => std_dct(p, n, o, va),
        ClassKind::DepthParabolic { mu, .. } => {
            let u1 = uv.u1.unwrap();
            if va <= mu {
                std_dct_ab(p, n, o, va, cap(u1 + mu as i64 - va as i64, n))
            } else {
                std_dct_ab(p, n, o, mu, cap(u1, n))
            }
        }
        ClassKind::DepthNilpotent { mu, .. } => {
            if va <= mu {
                std_dct(p, n, o, va)
            } else {
                std_dct_ab(p, n, o, mu, cap(2 * va as i64 - mu as i64, n))
            }
        }
        ClassKind::DepthSplit { mu, .. } | ClassKind::DepthNonsplit { mu, .. } => {
            if va != mu {
                std_dct(p, n, o, va.min(mu))
            } else {
                std_dct_ab(p, n, o, mu, cap(uv.u2.unwrap(), n))
            }
        }
        ClassKind::Parabolic { beta, .. } => {
            let unit_beta = n >= 2 && beta % p != 0;
            if p != 3 || !unit_beta {
                std_dct_ab(p, n, o, 0, cap(uv.u3.unwrap(), n))
            } else {
                let u4 = uv.u4.unwrap();
                if u4 % 2 == 0 {
                    std_dct(p, n, o, cap(u4 / 2, n))
                } else {
                    std_dct_ab(p, n, o, cap((u4 - 1) / 2, n), cap((u4 + 1) / 2, n))
                }
            }
        }
        ClassKind::Split { alpha: x, beta: y } => {
            let ax = PValued::new(x as i128, p, n);
            let ay = PValued::new(y as i128, p, n);
            let (mut ox, mut vx) = (ax.residue_order()?, padic::v_alpha(&ax)?);
            let (mut oy, mut vy) = (ay.residue_order()?, padic::v_alpha(&ay)?);
            if vx > vy {
                std::mem::swap(&mut ox, &mut oy);
                std::mem::swap(&mut vx, &mut vy);
            }
            if ox == oy {
                std_dct_ab(p, n, ox, vx, vy)
            } else {
                std_dct2_ab(p, n, ox, oy, vx, vy)
            }
        }
        ClassKind::Nonsplit { .. } => {
            let og = matrix_order(&label.representative_unchecked())?;
            let w = crate::conjugacy::coset_space_size(p, n);
            if w % og != 0 {
                return Err(Error::NonIntegral(format!("|W| = {w} not divisible by order {og}")));
            }
            DCType::from_terms(&[(w / og, og, 1)])
        }
    }
}

/// Type of `<g>` for `g` invertible modulo an odd `N`, via the CRT factors.
pub fn unramified_dct_n(g: &Mat2) -> Result<DCType> {
    if g.modulus() % 2 == 0 {
        return Err(Error::InvalidParameter("modulus must be odd".into()));
    }
    if !g.is_invertible() {
        return Err(Error::NotInvertible(g.modulus()));
    }
    let mut acc = DCType::unit();
    for part in crt_split(g) {
        acc = tensor(&acc, &unramified_dct(&classify(&part)?)?);
    }
    Ok(acc)
}

/// Type of the pair `(D, I)` with `D = <[[alpha,0],[0,eps]], [[1,p^b1],[0,1]]>` and
/// `I = <[[1,p^b2],[0,1]]>`.
pub fn mult_dct(p: u64, n: u32, alpha: u64, eps: i8, b1: u32, b2: u32) -> Result<DCType> {
    if !(b1 <= b2 && b2 <= n) {
        return Err(Error::InvalidParameter(format!("need 0 <= b1 <= b2 <= n, got {b1}, {b2}")));
    }
    if eps != 1 && eps != -1 {
        return Err(Error::InvalidParameter("eps must be +1 or -1".into()));
    }
    let a = PValued::new(alpha as i128, p, n);
    let ob = a.residue_order()?;
    let oa = padic::unit_order(&a)?;
    let va = padic::v_alpha(&a)?;
    let oe: u64 = if eps == 1 { 1 } else { 2 };
    let obp = lcm(ob, oe);
    let (n_, va_, b1_) = (n as i64, va as i64, b1 as i64);
    let p1 = (p - 1) as i128;
    let pw = |e: i64| -> u64 { ipow(p, e.max(0) as u32) };
    let ic = |e: i64| pw(e.max(0));
    let mut t = Builder::new(p, "mult");
    t.term(p1, va_ - 1, ob, oa, 1)?;
    if b1 == 0 {
        for u in (va_ + 1)..n_ {
            t.term(p1 * p1, n_ + va_ - u - 2, obp, obp * pw(n_ - va_), ic(n_ - b2 as i64 - u))?;
        }
        for u in 1..=va_.min(n_ - 1) {
            t.term(p1 * p1, n_ - 2, obp, obp * pw(n_ - u), ic(n_ - b2 as i64 - u))?;
        }
        t.term(p1, n_ - 1, oe, oe * pw(n_), pw(n_ - b2 as i64))?;
    } else if b1 < va {
        let pb1 = pw(b1_) as i128;
        t.term(p1 * (pb1 - 1), n_ - 1, obp, obp * pw(n_ - b1_), pw(n_ - b2 as i64))?;
        t.term(p1, n_ - 1, oe, oe * pw(n_ - b1_), pw(n_ - b2 as i64))?;
        for u in 1..(va_ - b1_) {
            t.term(p1 * p1, n_ + b1_ - 2, obp, obp * pw(n_ - b1_ - u), ic(n_ - b2 as i64 - u))?;
        }
        for u in (va_ - b1_)..(n_ - b1_) {
            t.term(p1 * p1, n_ + va_ - u - 2, obp, obp * pw(n_ - va_), ic(n_ - b2 as i64 - u))?;
        }
        t.term(p1 * (pb1 - 1), va_ - 1, obp, obp * pw(n_ - va_), 1)?;
    } else {
        let b2_ = b2 as i64;
        for u in 0..(n_ - b2_) {
            t.term(p1 * p1, n_ + va_ - u - 2, obp, obp * pw(n_ - va_), pw(n_ - b2_ - u))?;
        }
        t.term(p1 * (pw(b2_) as i128 - 1), va_ - 1, obp, obp * pw(n_ - va_), 1)?;
        for u in 1..=(b1_ - va_) {
            t.term(p1 * p1, n_ + va_ - 2, obp, obp * pw(n_ - va_ - u), pw(n_ - b2_))?;
        }
        t.term(p1 * (pw(va_ - 1) as i128 - 1), n_ - 1, obp, obp * pw(n_ - b1_), pw(n_ - b2_))?;
        t.term(p1, n_ - 1, oe, oe * pw(n_ - b1_), pw(n_ - b2_))?;
    }
    Ok(t.finish())
}

/// Type of the pair `(D, I)` for a good ordinary prime with unit root `alpha`:
/// `D` is generated by `diag(alpha, 1/alpha)` and the upper-triangular group
/// `I = {[[a, b], [0, 1]]}`.
pub fn ord_dct(p: u64, n: u32, alpha: u64) -> Result<DCType> {
    let a = PValued::new(alpha as i128, p, n);
    let ob = a.residue_order()?;
    let va = padic::v_alpha(&a)?;
    let (n_, va_) = (n as i64, va as i64);
    let p1 = (p - 1) as i128;
    let pw = |e: i64| ipow(p, e as u32);
    let inertia = (p - 1) * pw(n_ - 1);
    let mut t = Builder::new(p, "ord");
    t.term(p1, va_ - 1, ob, ob * pw(2 * n_ - va_), pw(n_))?;
    for u in 1..(n_ - va_) {
        t.term(p1, va_ - 1, ob, ob * (p - 1) * pw(2 * n_ - 1 - va_ - u), inertia)?;
    }
    t.term(pw(va_.min(n_ - 1)) as i128 - 1, 0, ob, ob * inertia, inertia)?;
    t.term(1, 0, 1, inertia, inertia)?;
    Ok(t.finish())
}

/// Generators of the decomposition and inertia groups used by [`mult_dct`].
pub fn mult_groups(p: u64, n: u32, alpha: u64, eps: i8, b1: u32, b2: u32) -> (Vec<Mat2>, Vec<Mat2>) {
    let m = ipow(p, n);
    let d = vec![
        Mat2::new(alpha as i128, 0, 0, eps as i128, m),
        Mat2::new(1, ipow(p, b1) as i128, 0, 1, m),
    ];
    let i = vec![Mat2::new(1, ipow(p, b2) as i128, 0, 1, m)];
    (d, i)
}

/// Generators of the decomposition and inertia groups used by [`ord_dct`].
pub fn ord_groups(p: u64, n: u32, alpha: u64) -> (Vec<Mat2>, Vec<Mat2>) {
    let m = ipow(p, n);
    let r = arith::primitive_root(p, n);
    let ainv = arith::inv_mod(alpha % m, m).expect("alpha must be a unit");
    let d = vec![
        Mat2::new(alpha as i128, 0, 0, ainv as i128, m),
        Mat2::new(r as i128, 0, 0, 1, m),
        Mat2::new(1, 1, 0, 1, m),
    ];
    let i = vec![Mat2::new(r as i128, 0, 0, 1, m), Mat2::new(1, 1, 0, 1, m)];
    (d, i)
}
