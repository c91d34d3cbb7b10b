//! Brute-force ground truth on small moduli: orbit enumeration on primitive
//! vectors, fixed-point profiles, the determinant polynomials of matrix powers and
//! the conjugacy partition of the whole group.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::Zero;
use petgraph::unionfind::UnionFind;

use crate::arith::{self, gcd, ipow};
use crate::dct::DCType;
use crate::error::{Error, Result};
use crate::mat2::{matrix_order, prime_power, smith_pn, Mat2};
use crate::padic::{val_big, TruncatedPadic};

/// Caps on the brute-force work.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_points: u64,
    pub max_steps: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_points: 1_000_000, max_steps: 100_000_000 }
    }
}

fn is_primitive(x: u64, y: u64, m: u64) -> bool {
    gcd(gcd(x, y), m) == 1
}

/// All primitive column vectors modulo `m`.
pub fn enumerate_w(m: u64) -> Result<Vec<(u64, u64)>> {
    enumerate_w_with(m, Limits::default())
}

pub fn enumerate_w_with(m: u64, limits: Limits) -> Result<Vec<(u64, u64)>> {
    if m < 2 {
        return Err(Error::InvalidParameter("modulus must be at least 2".into()));
    }
    if (m as u128) * (m as u128) > limits.max_points as u128 {
        return Err(Error::SizeGuard(format!("{m}^2 vectors exceed {}", limits.max_points)));
    }
    Ok((0..m)
        .flat_map(|x| (0..m).map(move |y| (x, y)))
        .filter(|&(x, y)| is_primitive(x, y, m))
        .collect())
}

/// Component of each primitive vector (indexed by `x*m + y`) under the group generated by `gens`.
fn components(gens: &[Mat2], m: u64, w: &[(u64, u64)], limits: Limits) -> Result<Vec<usize>> {
    let steps = w.len() as u64 * gens.len().max(1) as u64;
    if steps > limits.max_steps {
        return Err(Error::SizeGuard(format!("{steps} action steps exceed {}", limits.max_steps)));
    }
    let size = (m * m) as usize;
    let mut uf = UnionFind::<usize>::new(size);
    for g in gens {
        if g.modulus() != m {
            return Err(Error::ModulusMismatch(g.modulus(), m));
        }
        if !g.is_invertible() {
            return Err(Error::NotInvertible(m));
        }
        for &(x, y) in w {
            let (u, v) = g.apply(x, y);
            uf.union((x * m + y) as usize, (u * m + v) as usize);
        }
    }
    Ok(uf.into_labeling())
}

/// The type of the pair `(D, I)` acting on primitive vectors: one term per D-orbit
/// with `b` the orbit size and `c` the I-orbit size of its members.
pub fn orbit_type(decomposition: &[Mat2], inertia: &[Mat2], m: u64) -> Result<DCType> {
    orbit_type_with(decomposition, inertia, m, Limits::default())
}

pub fn orbit_type_with(decomposition: &[Mat2], inertia: &[Mat2], m: u64, limits: Limits) -> Result<DCType> {
    let w = enumerate_w_with(m, limits)?;
    let d_lab = components(decomposition, m, &w, limits)?;
    let i_lab = components(inertia, m, &w, limits)?;
    let mut d_size: BTreeMap<usize, u64> = BTreeMap::new();
    let mut i_size: BTreeMap<usize, u64> = BTreeMap::new();
    for &(x, y) in &w {
        let k = (x * m + y) as usize;
        *d_size.entry(d_lab[k]).or_default() += 1;
        *i_size.entry(i_lab[k]).or_default() += 1;
    }
    let mut inertia_of: BTreeMap<usize, u64> = BTreeMap::new();
    for &(x, y) in &w {
        let k = (x * m + y) as usize;
        let c = i_size[&i_lab[k]];
        match inertia_of.insert(d_lab[k], c) {
            Some(prev) if prev != c => {
                return Err(Error::InvalidParameter(format!(
                    "inertia orbits of sizes {prev} and {c} inside one decomposition orbit"
                )))
            }
            _ => {}
        }
    }
    let mut out = DCType::new();
    for (root, b) in d_size {
        out.add(1, b, inertia_of[&root])?;
    }
    Ok(out)
}

/// Orbit type of the cyclic group `<g>` with trivial inertia.
pub fn cyclic_orbit_type(g: &Mat2) -> Result<DCType> {
    cyclic_orbit_type_with(g, Limits::default())
}

pub fn cyclic_orbit_type_with(g: &Mat2, limits: Limits) -> Result<DCType> {
    orbit_type_with(std::slice::from_ref(g), &[], g.modulus(), limits)
}

/// `lambda_k(g)`, the number of primitive vectors whose `<g>`-orbit has size exactly `k`.
///
/// Computed from the Smith forms of `g^d - 1` and Mobius inversion, then checked
/// against direct fixed-point counting.
pub fn lambda_profile(g: &Mat2) -> Result<BTreeMap<u64, u64>> {
    let m = g.modulus();
    let (p, n) = prime_power(m).ok_or_else(|| Error::InvalidParameter(format!("{m} is not a prime power")))?;
    let w = enumerate_w(m)?;
    let order = matrix_order(g)?;
    let divisors = arith::divisors(order);
    let mut fixed: BTreeMap<u64, i64> = BTreeMap::new();
    for &d in &divisors {
        let s = smith_pn(&g.pow(d).sub_identity(), p, n);
        let l0 = s.e1.min(n) + s.e2.min(n);
        let l1 = s.e1.min(n - 1) + s.e2.min(n - 1);
        let from_smith = ipow(p, l0) - ipow(p, l1);
        let h = g.pow(d);
        let direct = w.iter().filter(|&&(x, y)| h.apply(x, y) == (x, y)).count() as u64;
        if from_smith != direct {
            return Err(Error::InvalidParameter(format!(
                "fixed points of g^{d}: Smith form gives {from_smith}, counting gives {direct}"
            )));
        }
        fixed.insert(d, direct as i64);
    }
    let mut out = BTreeMap::new();
    for &k in &divisors {
        let lam: i64 = arith::divisors(k).iter().map(|&d| arith::mobius(k / d) * fixed[&d]).sum();
        if lam < 0 {
            return Err(Error::InvalidParameter(format!("negative orbit count at k = {k}")));
        }
        if lam > 0 {
            out.insert(k, lam as u64);
        }
    }
    Ok(out)
}

/// `sum_k (lambda_k / k) x k`.
pub fn lambda_type(profile: &BTreeMap<u64, u64>) -> Result<DCType> {
    let mut out = DCType::new();
    for (&k, &lam) in profile {
        if lam % k != 0 {
            return Err(Error::NonIntegral(format!("lambda_{k} = {lam}")));
        }
        out.add(lam / k, k, 1)?;
    }
    Ok(out)
}

/// Polynomials `r`, `s` with `[[alpha, x], [p^mu, alpha]]^k = [[r, x s], [p^mu s, r]]`,
/// coefficients lowest degree first.
pub fn rs_polys(alpha: &BigInt, mu: u32, k: u32, p: u64) -> (Vec<BigInt>, Vec<BigInt>) {
    let pm = BigInt::from(p).pow(mu);
    let mut r = Vec::new();
    let mut s = Vec::new();
    for i in 0..=(k / 2) {
        let pmi = pm.pow(i);
        r.push(binomial(BigInt::from(k), BigInt::from(2 * i)) * alpha.pow(k - 2 * i) * &pmi);
        if 2 * i < k {
            s.push(binomial(BigInt::from(k), BigInt::from(2 * i + 1)) * alpha.pow(k - 2 * i - 1) * &pmi);
        }
    }
    (r, s)
}

fn poly_mul(f: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn poly_eval(f: &[BigInt], x: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// `t(x) = det(g^k - 1) = (r - 1)^2 - p^mu x s^2` over the integers.
pub fn t_poly_exact(alpha: &BigInt, mu: u32, k: u32, p: u64) -> Vec<BigInt> {
    let (mut r, s) = rs_polys(alpha, mu, k, p);
    r[0] -= 1;
    let rr = poly_mul(&r, &r);
    let ss = poly_mul(&s, &s);
    let pm = BigInt::from(p).pow(mu);
    let mut t = rr;
    t.resize(t.len().max(ss.len() + 1), BigInt::zero());
    for (i, c) in ss.iter().enumerate() {
        t[i + 1] -= &pm * c;
    }
    while t.len() > 1 && t.last().is_some_and(|c| c.is_zero()) {
        t.pop();
    }
    t
}

/// [`t_poly_exact`] with coefficients reduced modulo `p^precision`.
pub fn t_poly(alpha: &BigInt, mu: u32, k: u32, p: u64, precision: u32) -> Vec<BigInt> {
    let m = BigInt::from(p).pow(precision);
    t_poly_exact(alpha, mu, k, p)
        .into_iter()
        .map(|c| ((c % &m) + &m) % &m)
        .collect()
}

/// `min(v(t(beta)), cap)`.
pub fn t_eval_valuation(alpha: &BigInt, mu: u32, k: u32, beta: &BigInt, p: u64, cap: u32) -> u32 {
    val_big(&poly_eval(&t_poly_exact(alpha, mu, k, p), beta), p, cap)
}

/// The root of `t` of largest valuation, found by scanning `x = p^e y` over
/// `0 <= e <= max_val` and units `y` modulo `p^digits` and keeping the unique
/// candidate where `t` has largest valuation.
pub fn max_valuation_root(t: &[BigInt], p: u64, max_val: u32, digits: u32) -> Result<TruncatedPadic> {
    if (p as f64).powi(digits as i32) * (max_val + 1) as f64 > 1e7 {
        return Err(Error::SizeGuard(format!("{p}^{digits} candidates")));
    }
    let cap = 64 * (max_val + digits + 8);
    let modulus = ipow(p, digits);
    let mut best: Option<(u32, u32, u64)> = None;
    let mut tied = false;
    for e in 0..=max_val {
        let pe = BigInt::from(p).pow(e);
        for y in (1..modulus).filter(|y| y % p != 0) {
            let v = val_big(&poly_eval(t, &(&pe * y)), p, cap);
            match best {
                Some((bv, _, _)) if v < bv => {}
                Some((bv, _, _)) if v == bv => tied = true,
                _ => {
                    best = Some((v, e, y));
                    tied = false;
                }
            }
        }
    }
    let (_, e, y) = best.ok_or_else(|| Error::InvalidParameter("no candidates".into()))?;
    if tied {
        return Err(Error::Precision("largest valuation attained twice; increase digits".into()));
    }
    Ok(TruncatedPadic::from_integer(&(BigInt::from(p).pow(e) * y), p, e + digits))
}

/// `z^mu(alpha)` straight from its definition as the largest-valuation root of
/// `t` for `k` the residue order of `alpha`.
pub fn z_mu_oracle(alpha: u64, mu: u32, p: u64, max_val: u32, digits: u32) -> Result<TruncatedPadic> {
    let k = arith::order_mod(alpha % p, p, p - 1) as u32;
    let t = t_poly_exact(&BigInt::from(alpha), mu, k, p);
    max_valuation_root(&t, p, max_val, digits)
}

/// Conjugacy classes of `GL_2(Z/m)` by union-find under conjugation by generators.
pub fn brute_conjugacy_partition(p: u64, n: u32) -> Result<Vec<Vec<Mat2>>> {
    let m = ipow(p, n);
    let size = m.checked_pow(4).filter(|&s| s <= 1_000_000).ok_or_else(|| {
        Error::SizeGuard(format!("{m}^4 matrices"))
    })?;
    let r = arith::primitive_root(p, n) as i128;
    let gens = [Mat2::new(r, 0, 0, 1, m), Mat2::new(1, 1, 0, 1, m), Mat2::new(0, 1, 1, 0, m)];
    let invs: Vec<Mat2> = gens.iter().map(|g| g.inverse().unwrap()).collect();
    let index = |g: &Mat2| {
        let [a, b, c, d] = g.entries();
        (((a * m + b) * m + c) * m + d) as usize
    };
    let mut mats = Vec::new();
    for i in 0..size {
        let (a, b, c, d) = (i / (m * m * m), (i / (m * m)) % m, (i / m) % m, i % m);
        let g = Mat2::new(a as i128, b as i128, c as i128, d as i128, m);
        if g.is_invertible() {
            mats.push(g);
        }
    }
    let mut uf = UnionFind::<usize>::new(size as usize);
    for g in &mats {
        for (h, hi) in gens.iter().zip(&invs) {
            let conj = h.mul_unchecked(g).mul_unchecked(hi);
            uf.union(index(g), index(&conj));
        }
    }
    let mut classes: BTreeMap<usize, Vec<Mat2>> = BTreeMap::new();
    for g in mats {
        classes.entry(uf.find_mut(index(&g))).or_default().push(g);
    }
    Ok(classes.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugacy::coset_space_size;
    use crate::dct::ord_groups;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(enumerate_w(3).unwrap().len(), 8);
        assert_eq!(enumerate_w(9).unwrap().len(), 72);
        assert_eq!(enumerate_w(25).unwrap().len(), 600);
        assert_eq!(enumerate_w(63).unwrap().len() as u64, 72 * 48);
        assert!(matches!(enumerate_w(2000), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn orbit_examples() {
        let g: crate::ClassLabel = "I^+_{1}(32,4) mod 625".parse().unwrap();
        let g = g.representative().unwrap();
        assert_eq!(cyclic_orbit_type(&g).unwrap().to_string(), "750 x 500");
        assert_eq!(orbit_type(&[], &[], 9).unwrap().to_string(), "72 x 1");
        let (d, i) = ord_groups(3, 2, 2);
        assert_eq!(orbit_type(&d, &i, 9).unwrap().to_string(), "1 x (6,6) + 1 x (12,6) + 1 x (54,9)");
    }

    #[test]
    fn lambda_examples() {
        let id = Mat2::identity(25);
        assert_eq!(lambda_profile(&id).unwrap(), BTreeMap::from([(1, 600)]));
        let g = Mat2::scalar(2, 9);
        assert_eq!(lambda_profile(&g).unwrap(), BTreeMap::from([(6, 72)]));
        let g = Mat2::new(2, 5, 5, 2, 625);
        let prof = lambda_profile(&g).unwrap();
        assert_eq!(lambda_type(&prof).unwrap().to_string(), "625 x 100 + 625 x 500");
        assert_eq!(prof.values().sum::<u64>(), coset_space_size(5, 4));
    }

    #[test]
    fn t_polynomial() {
        let t = t_poly_exact(&BigInt::from(2), 1, 4, 5);
        assert_eq!(t, big(&[225, -1520, 2350, -2000, 625]));
        // 1/5 and 9/5 are roots: 5^4 t(x/5) vanishes at x = 1, 9.
        for x in [1i64, 9] {
            let scaled: BigInt = t
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(x).pow(i as u32) * BigInt::from(5).pow(4 - i as u32))
                .sum();
            assert!(scaled.is_zero());
        }
        // residue order of 2 mod 5 is 4, so k = 3 gives a unit determinant
        assert_eq!(t_eval_valuation(&BigInt::from(2), 1, 3, &BigInt::from(1), 5, 10), 0);
    }

    #[test]
    fn z_oracle() {
        let z = z_mu_oracle(2, 1, 5, 3, 3).unwrap();
        assert_eq!(z.valuation(), 1);
        assert_eq!(z.residue(4).unwrap(), BigInt::from(230));
        let z = z_mu_oracle(2, 1, 3, 3, 3).unwrap();
        assert_eq!(z.residue(2).unwrap(), BigInt::from(3));
    }

    #[test]
    fn conjugacy_partition() {
        let parts = brute_conjugacy_partition(3, 1).unwrap();
        assert_eq!(parts.len(), 8);
        assert_eq!(parts.iter().map(Vec::len).sum::<usize>(), 48);
    }
}
