//! Torsion points over extensions of `F_q` and the action of Frobenius on them.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::{Fe, Field};
use super::{count_points_ext, CurveQ};
use crate::arith::{self, ipow, order_mod};
use crate::error::{Error, Result};
use crate::mat2::{group_exponent_bound, Mat2};
use crate::padic::val_big;

/// Random samples allowed when searching for a torsion basis.
pub const SAMPLE_BUDGET: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Infinity,
    Affine(Fe, Fe),
}

/// `y^2 = x^3 + A x + B` over a finite field of characteristic at least 5.
pub struct ShortCurve {
    pub field: Field,
    a: Fe,
    b: Fe,
}

impl ShortCurve {
    pub fn new(field: Field, a: u64, b: u64) -> Self {
        let (a, b) = (field.from_u64(a), field.from_u64(b));
        Self { field, a, b }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => {
                let k = &self.field;
                let rhs = k.add(&k.mul(&k.add(&k.sqr(x), &self.a), x), &self.b);
                k.sqr(y) == rhs
            }
        }
    }

    pub fn neg(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x.clone(), self.field.neg(y)),
        }
    }

    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let k = &self.field;
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if k.is_zero(&k.add(y1, y2)) {
                return Point::Infinity;
            }
            let num = k.add(&k.scale(&k.sqr(x1), 3), &self.a);
            k.mul(&num, &k.inv(&k.scale(y1, 2)).expect("nonzero"))
        } else {
            k.mul(&k.sub(y2, y1), &k.inv(&k.sub(x2, x1)).expect("distinct x"))
        };
        let x3 = k.sub(&k.sub(&k.sqr(&lambda), x1), x2);
        let y3 = k.sub(&k.mul(&lambda, &k.sub(x1, &x3)), y1);
        Point::Affine(x3, y3)
    }

    pub fn mul(&self, p: &Point, n: &BigUint) -> Point {
        let mut acc = Point::Infinity;
        for i in (0..n.bits()).rev() {
            acc = self.add(&acc, &acc);
            if n.bit(i) {
                acc = self.add(&acc, p);
            }
        }
        acc
    }

    pub fn mul_u64(&self, p: &Point, n: u64) -> Point {
        self.mul(p, &BigUint::from(n))
    }

    /// The `q`-power Frobenius on coordinates.
    pub fn frobenius(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(self.field.frobenius(x), self.field.frobenius(y)),
        }
    }

    pub fn random_point(&self, rng: &mut ChaCha8Rng) -> Point {
        let k = &self.field;
        loop {
            let x = k.random(rng);
            let rhs = k.add(&k.mul(&k.add(&k.sqr(&x), &self.a), &x), &self.b);
            if let Some(y) = k.sqrt(&rhs, rng) {
                return Point::Affine(x, y);
            }
        }
    }

    /// `e` with `l^e P = O`, for `P` of `l`-power order.
    fn log_order(&self, p: &Point, l: u64) -> u32 {
        let mut e = 0;
        let mut r = p.clone();
        while r != Point::Infinity {
            r = self.mul_u64(&r, l);
            e += 1;
        }
        e
    }

    /// `c` with `c P = X`, where `P` has order `l^a`, or `None` if `X` is not in `<P>`.
    fn discrete_log(&self, x: &Point, p: &Point, l: u64, a: u32) -> Option<BigUint> {
        if a == 0 {
            return (*x == Point::Infinity).then(BigUint::zero);
        }
        let lb = BigUint::from(l);
        let gamma = self.mul(p, &lb.pow(a - 1));
        let mut c = BigUint::zero();
        for k in 0..a {
            let rest = self.add(x, &self.neg(&self.mul(p, &c)));
            let h = self.mul(&rest, &lb.pow(a - 1 - k));
            let mut probe = Point::Infinity;
            let mut digit = None;
            for dgt in 0..l {
                if probe == h {
                    digit = Some(dgt);
                    break;
                }
                probe = self.add(&probe, &gamma);
            }
            c += BigUint::from(digit?) * lb.pow(k);
        }
        (self.mul(p, &c) == *x).then_some(c)
    }
}

fn short_curve(curve: &CurveQ, q: u64, d: usize) -> Result<ShortCurve> {
    let (a, b) = curve.short_model_mod(q)?;
    Ok(ShortCurve::new(Field::new(q, d)?, a, b))
}

/// A basis of `E[l^j]` inside the `l`-Sylow subgroup of a group of order `order`,
/// or `None` when that subgroup cannot contain `E[l^j]`.
fn torsion_basis(
    e: &ShortCurve,
    order: &BigUint,
    l: u64,
    j: u32,
    rng: &mut ChaCha8Rng,
) -> Result<Option<(Point, Point)>> {
    let v = val_big(&BigInt::from(order.clone()), l, u32::MAX);
    if v < 2 * j {
        return Ok(None);
    }
    let lb = BigUint::from(l);
    let cofactor = order / lb.pow(v);
    let mut p1 = Point::Infinity;
    let mut a = 0u32;
    for _ in 0..SAMPLE_BUDGET {
        let r = e.mul(&e.random_point(rng), &cofactor);
        let er = e.log_order(&r, l);
        if er > a {
            p1 = r;
            a = er;
            if v - a < j {
                return Ok(None);
            }
            continue;
        }
        let b = v - a;
        let x = e.mul(&r, &lb.pow(b));
        let Some(c) = e.discrete_log(&x, &p1, l, a) else { continue };
        if !(&c % lb.pow(b)).is_zero() {
            continue;
        }
        let q1 = e.add(&r, &e.neg(&e.mul(&p1, &(c / lb.pow(b)))));
        let y = e.mul(&q1, &lb.pow(b - 1));
        if y == Point::Infinity {
            continue;
        }
        let gamma = e.mul(&p1, &lb.pow(a - 1));
        let mut probe = gamma.clone();
        let mut dependent = false;
        for _ in 1..l {
            if probe == y {
                dependent = true;
                break;
            }
            probe = e.add(&probe, &gamma);
        }
        if dependent {
            continue;
        }
        return Ok(Some((e.mul(&p1, &lb.pow(a - j)), e.mul(&q1, &lb.pow(b - j)))));
    }
    Err(Error::Budget(format!("no basis of E[{l}^{j}] after {SAMPLE_BUDGET} samples")))
}

/// Residues `t` modulo `l^j` with `2t = a` and `t^2 = q`.
fn scalar_candidates(a: i64, q: u64, l: u64, j: u32) -> Vec<u64> {
    let m = ipow(l, j);
    (0..m)
        .filter(|&t| {
            (2 * t as i128 - a as i128).rem_euclid(m as i128) == 0
                && (t as i128 * t as i128 - q as i128).rem_euclid(m as i128) == 0
        })
        .collect()
}

fn acts_as_scalar(curve: &CurveQ, q: u64, a: i64, l: u64, j: u32, rng: &mut ChaCha8Rng) -> Result<bool> {
    let m = ipow(l, j);
    for t in scalar_candidates(a, q, l, j) {
        if arith::gcd(t, l) != 1 {
            continue;
        }
        let d = order_mod(t, m, arith::phi_prime_power(l, j));
        let order = count_points_ext(a, q, d as u32);
        let order = order.to_biguint().expect("positive group order");
        if val_big(&BigInt::from(order.clone()), l, 2 * j) < 2 * j {
            continue;
        }
        let e = short_curve(curve, q, d as usize)?;
        let Some((p, r)) = torsion_basis(&e, &order, l, j, rng)? else { continue };
        if e.frobenius(&p) == e.mul_u64(&p, t) && e.frobenius(&r) == e.mul_u64(&r, t) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Largest `j <= cap` such that Frobenius at `q` acts on `E[l^j]` as a scalar.
pub fn frobenius_mu(curve: &CurveQ, q: u64, l: u64, cap: u32, seed: u64) -> Result<u32> {
    frobenius_mu_from(curve, q, l, 0, cap, seed)
}

/// As [`frobenius_mu`] given that the answer is already known to be at least `known`.
pub fn frobenius_mu_from(curve: &CurveQ, q: u64, l: u64, known: u32, cap: u32, seed: u64) -> Result<u32> {
    if l == q || !arith::is_prime(l) {
        return Err(Error::InvalidParameter(format!("need a prime l different from q = {q}")));
    }
    let a = curve.a_q(q)?;
    let disc = a as i128 * a as i128 - 4 * q as i128;
    let bound = crate::padic::val(disc, l, 2 * cap + 1) / 2;
    let top = cap.min(bound);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ q.rotate_left(17) ^ l);
    let mut mu = known.min(top);
    while mu < top {
        if !acts_as_scalar(curve, q, a, l, mu + 1, &mut rng)? {
            break;
        }
        mu += 1;
    }
    Ok(mu)
}

/// The matrix of Frobenius on an explicit basis of `E[l^j]`, found by brute force
/// over the smallest extension containing the full torsion.
pub fn frobenius_matrix_oracle(curve: &CurveQ, q: u64, l: u64, j: u32, seed: u64) -> Result<Mat2> {
    let m = ipow(l, j);
    if m > 49 {
        return Err(Error::SizeGuard(format!("l^j = {m} is too large for enumeration")));
    }
    let a = curve.a_q(q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ q);
    for d in arith::divisors(group_exponent_bound(m)) {
        let order = count_points_ext(a, q, d as u32).to_biguint().expect("positive group order");
        if val_big(&BigInt::from(order.clone()), l, 2 * j) < 2 * j {
            continue;
        }
        let e = short_curve(curve, q, d as usize)?;
        let Some((p, r)) = torsion_basis(&e, &order, l, j, &mut rng)? else { continue };
        let mut combos = Vec::with_capacity((m * m) as usize);
        let mut row = Point::Infinity;
        for x in 0..m {
            let mut pt = row.clone();
            for y in 0..m {
                combos.push(((x, y), pt.clone()));
                pt = e.add(&pt, &r);
            }
            row = e.add(&row, &p);
        }
        let locate = |target: &Point| combos.iter().find(|(_, pt)| pt == target).map(|(c, _)| *c);
        let (fa, fc) = locate(&e.frobenius(&p)).ok_or_else(|| Error::InvalidParameter("image outside span".into()))?;
        let (fb, fd) = locate(&e.frobenius(&r)).ok_or_else(|| Error::InvalidParameter("image outside span".into()))?;
        return Ok(Mat2::new(fa as i128, fb as i128, fc as i128, fd as i128, m));
    }
    Err(Error::Budget(format!("no extension of F_{q} of exponent-dividing degree contains E[{m}]")))
}
