//! Conjugacy classes of `GL_2(Z/p^n)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::{self, ipow, legendre, mul_mod, sub_mod};
use crate::error::{Error, Result};
use crate::mat2::{mu_depth_pn, prime_power, Mat2};
use crate::padic::{sqrt_mod, val, PValued};

/// The shape of a conjugacy class together with its parameters.
///
/// `alpha` is always a residue modulo `p^n`. The ranges of `beta` depend on the
/// kind: modulo `p^(n-nu)` for [`ClassKind::DepthParabolic`], modulo `p^(n-mu)` for
/// the split/nonsplit depth kinds and modulo `p^(n-1)` for [`ClassKind::Parabolic`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassKind {
    /// `alpha * 1`.
    Central { alpha: u64 },
    /// `[[alpha, beta p^nu], [p^mu, alpha]]` with `1 <= mu < nu < n`.
    DepthParabolic { mu: u32, nu: u32, alpha: u64, beta: u64 },
    /// `[[alpha, 0], [p^mu, alpha]]`.
    DepthNilpotent { mu: u32, alpha: u64 },
    /// `[[alpha, beta p^mu], [p^mu, alpha]]` with `beta` a non-square unit.
    DepthNonsplit { mu: u32, alpha: u64, beta: u64 },
    /// `[[alpha, beta p^mu], [p^mu, alpha]]` with `beta` a square unit.
    DepthSplit { mu: u32, alpha: u64, beta: u64 },
    /// `[[alpha, beta p], [1, alpha]]`: repeated eigenvalue mod `p`, not scalar.
    Parabolic { alpha: u64, beta: u64 },
    /// `diag(alpha, beta)` with distinct residues mod `p`.
    Split { alpha: u64, beta: u64 },
    /// Companion matrix `[[0, alpha], [1, beta]]` of an irreducible polynomial.
    Nonsplit { alpha: u64, beta: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassLabel {
    pub p: u64,
    pub n: u32,
    #[serde(flatten)]
    pub kind: ClassKind,
}

/// `|GL_2(Z/p^n)| = (p-1)^2 (p+1) p^(4n-3)`.
pub fn group_order(p: u64, n: u32) -> u64 {
    (p - 1) * (p - 1) * (p + 1) * ipow(p, 4 * n - 3)
}

/// Number of primitive column vectors mod `p^n`, `(p^2-1) p^(2n-2)`.
pub fn coset_space_size(p: u64, n: u32) -> u64 {
    (p * p - 1) * ipow(p, 2 * n - 2)
}

fn half(x: u64, m: u64) -> u64 {
    mul_mod(x, (m + 1) / 2, m)
}

/// Classifies an invertible matrix over `Z/p^n`.
pub fn classify(g: &Mat2) -> Result<ClassLabel> {
    let (p, n) = prime_power(g.modulus())
        .filter(|(p, _)| *p > 2)
        .ok_or_else(|| Error::InvalidParameter(format!("{} is not an odd prime power", g.modulus())))?;
    if !g.is_invertible() {
        return Err(Error::NotInvertible(g.modulus()));
    }
    Ok(ClassLabel { p, n, kind: classify_pn(g, p, n) })
}

pub(crate) fn classify_pn(g: &Mat2, p: u64, n: u32) -> ClassKind {
    let m = ipow(p, n);
    let sigma = g.trace();
    let tau = g.det();
    let mu = mu_depth_pn(g, p, n);
    let alpha = half(sigma, m);
    if mu >= n {
        return ClassKind::Central { alpha: g.a };
    }
    if mu == 0 {
        let disc = sub_mod(mul_mod(sigma, sigma, m), mul_mod(4, tau, m), m);
        if disc % p == 0 {
            let mb = ipow(p, n - 1);
            // disc / (4p) as a residue mod p^(n-1)
            let q = (disc / p) % mb;
            let beta = if mb == 1 { 0 } else { mul_mod(q, arith::inv_mod(4 % mb, mb).unwrap(), mb) };
            return ClassKind::Parabolic { alpha, beta };
        }
        return match sqrt_mod(&PValued::new(disc as i128, p, n)) {
            Some(r) => {
                let r = r.value();
                let x = half(sub_mod(sigma, r, m), m);
                let y = half((sigma + r) % m, m);
                ClassKind::Split { alpha: x.min(y), beta: x.max(y) }
            }
            None => ClassKind::Nonsplit { alpha: (m - tau) % m, beta: sigma },
        };
    }
    // g = alpha + p^mu * A' with A' non-scalar mod p and trace zero.
    let pm = ipow(p, mu);
    let mr = ipow(p, n - mu);
    let amd = sub_mod(g.a, g.d, m) / pm % mr;
    let b = g.b / pm % mr;
    let c = g.c / pm % mr;
    let disc = (mul_mod(amd, amd, mr) + mul_mod(4, mul_mod(b, c, mr), mr)) % mr;
    let nu = mu + val(disc as i128, p, n - mu);
    if nu >= n {
        return ClassKind::DepthNilpotent { mu, alpha };
    }
    let mb = ipow(p, n - nu);
    let shifted = disc / ipow(p, nu - mu) % mb;
    let beta = mul_mod(shifted, arith::inv_mod(4 % mb, mb).unwrap(), mb);
    if nu > mu {
        ClassKind::DepthParabolic { mu, nu, alpha, beta }
    } else if legendre(beta as i128, p) == 1 {
        ClassKind::DepthSplit { mu, alpha, beta }
    } else {
        ClassKind::DepthNonsplit { mu, alpha, beta }
    }
}

impl ClassLabel {
    pub fn modulus(&self) -> u64 {
        ipow(self.p, self.n)
    }

    /// Checks the parameter ranges of the label.
    pub fn validate(&self) -> Result<()> {
        let (p, n) = (self.p, self.n);
        let bad = |what: &str| Err(Error::InvalidParameter(format!("{what} in {self}")));
        if p < 3 || !arith::is_prime(p) || n == 0 {
            return bad("modulus must be an odd prime power");
        }
        let m = ipow(p, n);
        let unit = |x: u64, md: u64| x < md && x % p != 0;
        match self.kind {
            ClassKind::Central { alpha } => {
                if !unit(alpha, m) {
                    return bad("alpha must be a unit");
                }
            }
            ClassKind::DepthParabolic { mu, nu, alpha, beta } => {
                if !(1 <= mu && mu < nu && nu < n) {
                    return bad("need 1 <= mu < nu < n");
                }
                if !unit(alpha, m) || !unit(beta, ipow(p, n - nu)) {
                    return bad("alpha, beta must be units");
                }
            }
            ClassKind::DepthNilpotent { mu, alpha } => {
                if !(1 <= mu && mu < n) || !unit(alpha, m) {
                    return bad("need 1 <= mu < n and alpha a unit");
                }
            }
            ClassKind::DepthNonsplit { mu, alpha, beta } | ClassKind::DepthSplit { mu, alpha, beta } => {
                if !(1 <= mu && mu < n) || !unit(alpha, m) || !unit(beta, ipow(p, n - mu)) {
                    return bad("need 1 <= mu < n and alpha, beta units");
                }
                let want = if matches!(self.kind, ClassKind::DepthSplit { .. }) { 1 } else { -1 };
                if legendre(beta as i128, p) != want {
                    return bad("beta has the wrong square class");
                }
            }
            ClassKind::Parabolic { alpha, beta } => {
                if !unit(alpha, m) || beta >= ipow(p, n - 1) {
                    return bad("alpha must be a unit and beta < p^(n-1)");
                }
            }
            ClassKind::Split { alpha, beta } => {
                if !unit(alpha, m) || !unit(beta, m) || alpha % p == beta % p || alpha > beta {
                    return bad("need units alpha < beta, distinct mod p");
                }
            }
            ClassKind::Nonsplit { alpha, beta } => {
                let disc = (mul_mod(beta, beta, m) + mul_mod(4, alpha, m)) % m;
                if alpha >= m || beta >= m || disc % p == 0 || legendre(disc as i128, p) == 1 {
                    return bad("beta^2 + 4 alpha must be a non-square unit");
                }
            }
        }
        Ok(())
    }

    /// The normal-form representative of the class.
    pub fn representative(&self) -> Result<Mat2> {
        self.validate()?;
        Ok(self.representative_unchecked())
    }

    pub(crate) fn representative_unchecked(&self) -> Mat2 {
        let m = self.modulus();
        let pw = |e: u32| ipow(self.p, e) as i128;
        let (a, b, c, d): (i128, i128, i128, i128) = match self.kind {
            ClassKind::Central { alpha } => (alpha as i128, 0, 0, alpha as i128),
            ClassKind::DepthParabolic { mu, nu, alpha, beta } => {
                (alpha as i128, beta as i128 * pw(nu), pw(mu), alpha as i128)
            }
            ClassKind::DepthNilpotent { mu, alpha } => (alpha as i128, 0, pw(mu), alpha as i128),
            ClassKind::DepthNonsplit { mu, alpha, beta } | ClassKind::DepthSplit { mu, alpha, beta } => {
                (alpha as i128, beta as i128 * pw(mu), pw(mu), alpha as i128)
            }
            ClassKind::Parabolic { alpha, beta } => (alpha as i128, beta as i128 * self.p as i128, 1, alpha as i128),
            ClassKind::Split { alpha, beta } => (alpha as i128, 0, 0, beta as i128),
            ClassKind::Nonsplit { alpha, beta } => (0, alpha as i128, 1, beta as i128),
        };
        Mat2::new(a, b, c, d, m)
    }

    /// Number of elements in the class.
    pub fn class_size(&self) -> BigUint {
        BigUint::from(self.class_size_u64())
    }

    pub(crate) fn class_size_u64(&self) -> u64 {
        let (p, n) = (self.p, self.n);
        match self.kind {
            ClassKind::Central { .. } => 1,
            ClassKind::DepthParabolic { mu, .. } | ClassKind::DepthNilpotent { mu, .. } => {
                (p * p - 1) * ipow(p, 2 * (n - mu) - 2)
            }
            ClassKind::DepthNonsplit { mu, .. } => (p - 1) * ipow(p, 2 * (n - mu) - 1),
            ClassKind::DepthSplit { mu, .. } => (p + 1) * ipow(p, 2 * (n - mu) - 1),
            ClassKind::Parabolic { .. } => (p * p - 1) * ipow(p, 2 * n - 2),
            ClassKind::Split { .. } => (p + 1) * ipow(p, 2 * n - 1),
            ClassKind::Nonsplit { .. } => (p - 1) * ipow(p, 2 * n - 1),
        }
    }

    /// The scalar part `alpha` for kinds that have one.
    pub fn alpha(&self) -> u64 {
        match self.kind {
            ClassKind::Central { alpha }
            | ClassKind::DepthParabolic { alpha, .. }
            | ClassKind::DepthNilpotent { alpha, .. }
            | ClassKind::DepthNonsplit { alpha, .. }
            | ClassKind::DepthSplit { alpha, .. }
            | ClassKind::Parabolic { alpha, .. }
            | ClassKind::Split { alpha, .. }
            | ClassKind::Nonsplit { alpha, .. } => alpha,
        }
    }
}

/// Every conjugacy class of `GL_2(Z/p^n)` exactly once.
pub fn enumerate_classes(p: u64, n: u32) -> impl Iterator<Item = ClassLabel> {
    let m = ipow(p, n);
    let units: Vec<u64> = (1..m).filter(|x| x % p != 0).collect();
    let units_mod = |e: u32| (1..ipow(p, e)).filter(move |x| x % p != 0);
    let mut out = Vec::new();
    let mut push = |kind| out.push(ClassLabel { p, n, kind });
    for &alpha in &units {
        push(ClassKind::Central { alpha });
    }
    for mu in 1..n {
        for nu in mu + 1..n {
            for &alpha in &units {
                for beta in units_mod(n - nu) {
                    push(ClassKind::DepthParabolic { mu, nu, alpha, beta });
                }
            }
        }
    }
    for mu in 1..n {
        for &alpha in &units {
            push(ClassKind::DepthNilpotent { mu, alpha });
        }
    }
    for mu in 1..n {
        for &alpha in &units {
            for beta in units_mod(n - mu) {
                if legendre(beta as i128, p) == -1 {
                    push(ClassKind::DepthNonsplit { mu, alpha, beta });
                }
            }
        }
    }
    for mu in 1..n {
        for &alpha in &units {
            for beta in units_mod(n - mu) {
                if legendre(beta as i128, p) == 1 {
                    push(ClassKind::DepthSplit { mu, alpha, beta });
                }
            }
        }
    }
    for &alpha in &units {
        for beta in 0..ipow(p, n - 1) {
            push(ClassKind::Parabolic { alpha, beta });
        }
    }
    for (i, &alpha) in units.iter().enumerate() {
        for &beta in &units[i + 1..] {
            if alpha % p != beta % p {
                push(ClassKind::Split { alpha, beta });
            }
        }
    }
    for &alpha in &units {
        for beta in 0..m {
            let disc = (mul_mod(beta, beta, m) + mul_mod(4, alpha, m)) % m;
            if legendre(disc as i128, p) == -1 {
                push(ClassKind::Nonsplit { alpha, beta });
            }
        }
    }
    out.into_iter()
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ClassKind::Central { alpha } => write!(f, "I({alpha})"),
            ClassKind::DepthParabolic { mu, nu, alpha, beta } => write!(f, "I'_{{{mu},{nu}}}({alpha},{beta})"),
            ClassKind::DepthNilpotent { mu, alpha } => write!(f, "I'_{{{mu}}}({alpha})"),
            ClassKind::DepthNonsplit { mu, alpha, beta } => write!(f, "I^-_{{{mu}}}({alpha},{beta})"),
            ClassKind::DepthSplit { mu, alpha, beta } => write!(f, "I^+_{{{mu}}}({alpha},{beta})"),
            ClassKind::Parabolic { alpha, beta } => write!(f, "II({alpha},{beta})"),
            ClassKind::Split { alpha, beta } => write!(f, "III({alpha},{beta})"),
            ClassKind::Nonsplit { alpha, beta } => write!(f, "IV({alpha},{beta})"),
        }?;
        write!(f, " mod {}", self.modulus())
    }
}

impl FromStr for ClassLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse(format!("bad class label {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (head, m) = compact.split_once("mod").ok_or_else(err)?;
        let m: u64 = m.parse().map_err(|_| err())?;
        let (p, n) = prime_power(m).ok_or_else(err)?;
        let open = head.find('(').ok_or_else(err)?;
        let name = &head[..open];
        let args: Vec<u64> = head[open + 1..]
            .strip_suffix(')')
            .ok_or_else(err)?
            .split(',')
            .map(|t| t.parse().map_err(|_| err()))
            .collect::<Result<_>>()?;
        let subs: Vec<u32> = match name.find("_{") {
            Some(i) => name[i + 2..]
                .strip_suffix('}')
                .ok_or_else(err)?
                .split(',')
                .map(|t| t.parse().map_err(|_| err()))
                .collect::<Result<_>>()?,
            None => Vec::new(),
        };
        let base = name.split("_{").next().unwrap();
        let kind = match (base, subs.as_slice(), args.as_slice()) {
            ("I", [], [a]) => ClassKind::Central { alpha: *a },
            ("I'", [mu, nu], [a, b]) => ClassKind::DepthParabolic { mu: *mu, nu: *nu, alpha: *a, beta: *b },
            ("I'", [mu], [a]) => ClassKind::DepthNilpotent { mu: *mu, alpha: *a },
            ("I^-", [mu], [a, b]) => ClassKind::DepthNonsplit { mu: *mu, alpha: *a, beta: *b },
            ("I^+", [mu], [a, b]) => ClassKind::DepthSplit { mu: *mu, alpha: *a, beta: *b },
            ("II", [], [a, b]) => ClassKind::Parabolic { alpha: *a, beta: *b },
            ("III", [], [a, b]) => ClassKind::Split { alpha: *a.min(b), beta: *a.max(b) },
            ("IV", [], [a, b]) => ClassKind::Nonsplit { alpha: *a, beta: *b },
            _ => return Err(err()),
        };
        let label = ClassLabel { p, n, kind };
        label.validate()?;
        Ok(label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(s: &str) -> ClassLabel {
        s.parse().unwrap()
    }

    #[test]
    fn worked_classifications() {
        assert_eq!(classify(&Mat2::new(32, 20, 5, 32, 625)).unwrap(), label("I^+_{1}(32,4) mod 625"));
        assert_eq!(classify(&Mat2::new(0, 1, -313, -1, 9)).unwrap(), label("II(4,0) mod 9"));
        assert_eq!(classify(&Mat2::new(2, 0, 0, 6, 7)).unwrap(), label("III(2,6) mod 7"));
        assert_eq!(classify(&Mat2::new(2, 6, 3, 2, 9)).unwrap(), label("I^-_{1}(2,2) mod 9"));
    }

    #[test]
    fn representatives() {
        assert_eq!(label("I^+_{1}(2,4) mod 625").representative().unwrap(), Mat2::new(2, 20, 5, 2, 625));
        assert_eq!(label("I(3) mod 7").representative().unwrap(), Mat2::scalar(3, 7));
        assert_eq!(label("IV(4,1) mod 7").representative().unwrap(), Mat2::new(0, 4, 1, 1, 7));
        assert!(ClassLabel { p: 7, n: 1, kind: ClassKind::Split { alpha: 2, beta: 9 } }.representative().is_err());
    }

    #[test]
    fn sizes() {
        assert_eq!(label("I(2) mod 9").class_size(), BigUint::from(1u32));
        assert_eq!(label("I^-_{1}(2,2) mod 9").class_size(), BigUint::from(6u32));
        assert_eq!(label("III(2,6) mod 7").class_size(), BigUint::from(56u32));
        assert_eq!(label("I^+_{1}(32,4) mod 625").class_size(), BigUint::from(18750u32));
    }

    #[test]
    fn totals() {
        for (p, n, total) in [(3, 1, 48u64), (7, 1, 2016), (3, 2, 3888)] {
            let s: u64 = enumerate_classes(p, n).map(|l| l.class_size_u64()).sum();
            assert_eq!(s, total);
            assert_eq!(group_order(p, n), total);
        }
        assert_eq!(coset_space_size(7, 1), 48);
        assert_eq!(coset_space_size(3, 2), 72);
        assert_eq!(coset_space_size(5, 4), 375_000);
        assert_eq!(750 * 500, coset_space_size(5, 4));
    }

    #[test]
    fn label_text_round_trip() {
        for s in ["I'_{1,2}(4,2) mod 27", "II(4,0) mod 9", "I'_{1}(4) mod 9", "IV(4,1) mod 7"] {
            assert_eq!(label(s).to_string(), s);
        }
    }
}
