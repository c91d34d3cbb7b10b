//! Factorization types of rational primes in `Q(E[N])`, Dedekind zeta
//! coefficients and type distributions over `GL_2(Z/N)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, ipow};
use crate::cache::FrobeniusCache;
use crate::conjugacy::{coset_space_size, enumerate_classes, group_order};
use crate::dct::{mult_dct, ord_dct, tensor, unramified_dct, unramified_dct_n, DCType};
use crate::elliptic::{mult_params, unit_root, CurveQ, FrobeniusData, ReductionType, DEFAULT_MAX_Q};
use crate::error::{Error, Result};

/// Largest upper bound accepted by [`Setting::zeta_coefficients`].
pub const MAX_ZETA_BOUND: u64 = 50_000_000;

#[derive(Clone, Copy, Debug)]
pub struct Options<'a> {
    pub seed: u64,
    pub max_q: u64,
    pub cache: Option<&'a FrobeniusCache>,
}

impl Default for Options<'_> {
    fn default() -> Self {
        Self { seed: 0, max_q: DEFAULT_MAX_Q, cache: None }
    }
}

fn check_modulus(modulus: u64) -> Result<()> {
    if modulus < 3 || modulus % 2 == 0 {
        return Err(Error::InvalidParameter(format!("modulus must be odd and > 1, got {modulus}")));
    }
    Ok(())
}

/// A curve (in minimal form) together with the torsion level `N`.
#[derive(Clone, Debug)]
pub struct Setting<'a> {
    curve: CurveQ,
    modulus: u64,
    bad: Vec<u64>,
    opts: Options<'a>,
}

impl<'a> Setting<'a> {
    pub fn new(curve: &CurveQ, modulus: u64, opts: Options<'a>) -> Result<Self> {
        check_modulus(modulus)?;
        let curve = curve.minimal_model()?;
        let bad = curve.bad_primes()?;
        Ok(Self { curve, modulus, bad, opts })
    }

    pub fn curve(&self) -> &CurveQ {
        &self.curve
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Checks the verifiable global hypotheses: semistability, `N` coprime to the
    /// conductor, and ordinary reduction at every prime dividing `N`.
    pub fn check_hypotheses(&self) -> Result<()> {
        for &q in &self.bad {
            if self.curve.reduction_type(q) == ReductionType::Additive {
                return Err(Error::Hypothesis(format!("additive reduction at {q}")));
            }
        }
        for (p, _) in arith::factor(self.modulus) {
            if self.bad.contains(&p) {
                return Err(Error::Hypothesis(format!("{p} divides both N and the conductor")));
            }
            if self.curve.a_q(p)?.rem_euclid(p as i64) == 0 {
                return Err(Error::Hypothesis(format!("reduction at {p} is not ordinary")));
            }
        }
        Ok(())
    }

    /// Frobenius data at `q` with depths valid for `N`, read from and written to the cache.
    pub fn frobenius(&self, q: u64) -> Result<FrobeniusData> {
        if q > self.opts.max_q {
            return Err(Error::SizeGuard(format!("q = {q} exceeds max-q {}", self.opts.max_q)));
        }
        let key = self.curve.key();
        let cached = self.opts.cache.and_then(|c| c.get(&key, q));
        let fresh = cached.is_none();
        let mut data = match cached {
            Some(d) => d,
            None => FrobeniusData::new(&self.curve, q)?,
        };
        let before = data.mu.clone();
        for (p, n) in arith::factor(self.modulus) {
            data.ensure_mu(&self.curve, p, n, self.opts.seed)?;
        }
        if let Some(cache) = self.opts.cache {
            if fresh || data.mu != before {
                cache.put(data.clone())?;
            }
        }
        Ok(data)
    }

    pub fn factorization_type(&self, q: u64) -> Result<DCType> {
        if !arith::is_prime(q) {
            return Err(Error::InvalidParameter(format!("{q} is not prime")));
        }
        let n_q = arith::vp(self.modulus as i128, q).unwrap_or(0);
        if n_q > 0 {
            if self.bad.contains(&q) {
                return Err(Error::Hypothesis(format!("{q} divides both N and the conductor")));
            }
            let rest = self.modulus / ipow(q, n_q);
            let outside = if rest > 1 {
                let data = self.frobenius(q)?;
                unramified_dct_n(&data.class_matrix(rest)?)?
            } else {
                DCType::unit()
            };
            let alpha = unit_root(&self.curve, q, n_q)?;
            return Ok(tensor(&outside, &ord_dct(q, n_q, alpha.value())?));
        }
        if self.bad.contains(&q) {
            let mut acc = DCType::unit();
            for (p, n) in arith::factor(self.modulus) {
                let (eps, b1, b2) = mult_params(&self.curve, q, p, n)?;
                let m = ipow(p, n);
                let alpha = arith::reduce(eps as i128 * q as i128, m);
                acc = tensor(&acc, &mult_dct(p, n, alpha, eps, b1, b2)?);
            }
            return Ok(acc);
        }
        let data = self.frobenius(q)?;
        unramified_dct_n(&data.class_matrix(self.modulus)?)
    }

    pub fn per_prime_report(&self, q: u64, order: u32) -> Result<PrimeReport> {
        let dct = self.factorization_type(q)?;
        let a_q = if self.bad.contains(&q) { None } else { Some(self.curve.a_q(q)?) };
        Ok(PrimeReport {
            q,
            reduction: self.curve.reduction_type(q).to_string(),
            a_q,
            display: dct.to_string(),
            min_degree: dct.min_residue_degree(),
            prime_count: dct.prime_count(),
            euler: euler_factor(&dct, order),
            dct,
        })
    }

    /// Nonzero coefficients `z_n` for `lower <= n <= bound`.
    pub fn zeta_coefficients(&self, lower: u64, bound: u64) -> Result<ZetaTable> {
        self.zeta_coefficients_with_progress(lower, bound, &|_, _| {})
    }

    /// As [`Setting::zeta_coefficients`], calling `progress(done, total)` as primes finish.
    pub fn zeta_coefficients_with_progress(
        &self,
        lower: u64,
        bound: u64,
        progress: &(dyn Fn(usize, usize) + Sync),
    ) -> Result<ZetaTable> {
        if bound > MAX_ZETA_BOUND {
            return Err(Error::SizeGuard(format!("bound {bound} exceeds {MAX_ZETA_BOUND}")));
        }
        let lower = lower.max(1);
        let primes = arith::primes_up_to(bound);
        let done = AtomicUsize::new(0);
        let factors: Vec<Vec<BigUint>> = primes
            .par_iter()
            .map(|&q| {
                let order = max_power(q, bound);
                let f = euler_factor(&self.factorization_type(q)?, order);
                progress(done.fetch_add(1, Ordering::Relaxed) + 1, primes.len());
                Ok(f)
            })
            .collect::<Result<_>>()?;
        let index: BTreeMap<u64, usize> = primes.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let spf = arith::smallest_prime_factors(bound as usize);
        let mut coefficients = BTreeMap::new();
        for n in lower..=bound {
            let mut z = BigUint::one();
            let mut m = n;
            while m > 1 {
                let q = spf[m as usize] as u64;
                let mut k = 0;
                while m % q == 0 {
                    m /= q;
                    k += 1;
                }
                let c = &factors[index[&q]][k];
                if c.is_zero() {
                    z = BigUint::zero();
                    break;
                }
                z *= c;
            }
            if !z.is_zero() {
                coefficients.insert(n, z);
            }
        }
        Ok(ZetaTable { lower, bound, coefficients })
    }

    /// Counts of each factorization type over good primes `q <= bound` not dividing `N`.
    pub fn frobenius_sample(&self, bound: u64) -> Result<BTreeMap<DCType, u64>> {
        let primes: Vec<u64> = arith::primes_up_to(bound)
            .into_iter()
            .filter(|q| self.modulus % q != 0 && !self.bad.contains(q))
            .collect();
        let types: Vec<DCType> =
            primes.par_iter().map(|&q| self.factorization_type(q)).collect::<Result<_>>()?;
        let mut counts = BTreeMap::new();
        for t in types {
            *counts.entry(t).or_insert(0) += 1;
        }
        Ok(counts)
    }
}

fn max_power(q: u64, bound: u64) -> u32 {
    let mut k = 0;
    let mut x = 1u64;
    while x.saturating_mul(q) <= bound {
        x *= q;
        k += 1;
    }
    k
}

pub fn factorization_type(curve: &CurveQ, modulus: u64, q: u64, opts: Options<'_>) -> Result<DCType> {
    Setting::new(curve, modulus, opts)?.factorization_type(q)
}

/// Coefficients `[1, z_q, ..., z_{q^order}]` of `prod (1 - x^f)^(-count)` over the
/// terms of `d`, with `f = b / c` the residue degree.
pub fn euler_factor(d: &DCType, order: u32) -> Vec<BigUint> {
    let len = order as usize + 1;
    let mut acc = vec![BigUint::zero(); len];
    acc[0] = BigUint::one();
    for (count, _, f) in d.to_factorization() {
        let f = f as usize;
        let mut series = vec![BigUint::zero(); len];
        let mut binom = BigUint::one();
        let mut j = 0usize;
        while j * f < len {
            series[j * f] = binom.clone();
            j += 1;
            binom = binom * BigUint::from(count + j as u64 - 1) / BigUint::from(j as u64);
        }
        let mut next = vec![BigUint::zero(); len];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, s) in series.iter().enumerate().take(len - i) {
                if !s.is_zero() {
                    next[i + k] += a * s;
                }
            }
        }
        acc = next;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaTable {
    pub lower: u64,
    pub bound: u64,
    pub coefficients: BTreeMap<u64, BigUint>,
}

impl ZetaTable {
    pub fn get(&self, n: u64) -> BigUint {
        self.coefficients.get(&n).cloned().unwrap_or_default()
    }

    /// `{"n": "z_n", ...}` in ascending order of `n`.
    pub fn to_json(&self) -> String {
        let body: Vec<String> = self
            .coefficients
            .iter()
            .map(|(n, z)| format!("\"{n}\":{}", json_big(z)))
            .collect();
        format!("{{{}}}", body.join(","))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,z_n\n");
        for (n, z) in &self.coefficients {
            out.push_str(&format!("{n},{z}\n"));
        }
        out
    }
}

/// Integers that fit in a u64 are written as JSON numbers, larger ones as strings.
pub fn json_big(x: &BigUint) -> serde_json::Value {
    match x.to_u64() {
        Some(v) => v.into(),
        None => x.to_string().into(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeReport {
    pub q: u64,
    pub reduction: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_q: Option<i64>,
    #[serde(rename = "type")]
    pub display: String,
    pub min_degree: Option<u64>,
    pub prime_count: u64,
    #[serde(serialize_with = "big_list")]
    pub euler: Vec<BigUint>,
    #[serde(skip)]
    pub dct: DCType,
}

fn big_list<S: serde::Serializer>(xs: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&json_big(x))?;
    }
    seq.end()
}

impl fmt::Display for PrimeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "q = {} ({})", self.q, self.reduction)?;
        if let Some(a) = self.a_q {
            writeln!(f, "a_q = {a}")?;
        }
        writeln!(f, "type: {}", self.display)?;
        writeln!(f, "primes above q: {}", self.prime_count)?;
        if let Some(m) = self.min_degree {
            writeln!(f, "minimal residue degree: {m}")?;
        }
        let euler: Vec<String> = self.euler.iter().map(|x| x.to_string()).collect();
        write!(f, "euler factor: [{}]", euler.join(", "))
    }
}

/// `mass / total` as an exact fraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Density {
    pub mass: BigUint,
    pub total: BigUint,
}

impl Density {
    pub fn reduced(&self) -> (BigUint, BigUint) {
        let g = self.mass.gcd(&self.total);
        if g.is_zero() {
            return (BigUint::zero(), BigUint::one());
        }
        (&self.mass / &g, &self.total / &g)
    }

    /// Percentage rounded half-up to `decimals` places, e.g. `35.9712%`.
    pub fn percent(&self, decimals: u32) -> String {
        let scale = BigUint::from(10u32).pow(decimals + 2);
        let num = &self.mass * scale * 2u32 + &self.total;
        let scaled = num / (&self.total * 2u32);
        let digits = scaled.to_string();
        let d = decimals as usize;
        let padded = format!("{:0>width$}", digits, width = d + 1);
        let (int, frac) = padded.split_at(padded.len() - d);
        if d == 0 {
            format!("{int}%")
        } else {
            format!("{int}.{frac}%")
        }
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.reduced();
        write!(f, "{a}/{b}")
    }
}

/// Conjugacy-class mass of each factorization type over `GL_2(Z/N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDistribution {
    pub modulus: u64,
    pub group_order: BigUint,
    pub masses: BTreeMap<DCType, BigUint>,
}

impl TypeDistribution {
    pub fn density(&self, d: &DCType) -> Density {
        Density { mass: self.masses.get(d).cloned().unwrap_or_default(), total: self.group_order.clone() }
    }

    pub fn total_mass(&self) -> BigUint {
        self.masses.values().sum()
    }

    /// Rows `type,mass,density` with the density as a reduced fraction.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("type,mass,density\n");
        for (d, mass) in &self.masses {
            let density = Density { mass: mass.clone(), total: self.group_order.clone() };
            out.push_str(&format!("{},{},{}\n", csv_field(&d.to_string()), mass, density));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .masses
            .iter()
            .map(|(d, mass)| {
                let density = Density { mass: mass.clone(), total: self.group_order.clone() };
                serde_json::json!({
                    "type": d.to_string(),
                    "mass": json_big(mass),
                    "density": density.to_string(),
                })
            })
            .collect();
        serde_json::json!({
            "modulus": self.modulus,
            "group_order": json_big(&self.group_order),
            "types": rows,
        })
    }

    /// Mass of each minimal residue degree.
    pub fn min_degrees(&self) -> MinDegreeReport {
        let mut masses: BTreeMap<u64, BigUint> = BTreeMap::new();
        for (d, mass) in &self.masses {
            let f = d.min_residue_degree().unwrap_or(0);
            *masses.entry(f).or_default() += mass;
        }
        MinDegreeReport { modulus: self.modulus, group_order: self.group_order.clone(), masses }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn prime_power_distribution(p: u64, n: u32) -> Result<BTreeMap<DCType, BigUint>> {
    let classes: Vec<_> = enumerate_classes(p, n).collect();
    let typed: Vec<(DCType, BigUint)> = classes
        .par_iter()
        .map(|c| Ok((unramified_dct(c)?, c.class_size())))
        .collect::<Result<_>>()?;
    let mut out: BTreeMap<DCType, BigUint> = BTreeMap::new();
    for (d, size) in typed {
        *out.entry(d).or_default() += size;
    }
    Ok(out)
}

/// Aggregates class masses per prime power and combines the factors by tensoring types.
pub fn distribution(modulus: u64) -> Result<TypeDistribution> {
    check_modulus(modulus)?;
    let mut masses: BTreeMap<DCType, BigUint> = BTreeMap::from([(DCType::unit(), BigUint::one())]);
    let mut order = BigUint::one();
    for (p, n) in arith::factor(modulus) {
        if ipow(p, n) > 100_000 {
            return Err(Error::SizeGuard(format!("{p}^{n} is too large to enumerate")));
        }
        order *= BigUint::from(group_order(p, n));
        let local = prime_power_distribution(p, n)?;
        let mut next: BTreeMap<DCType, BigUint> = BTreeMap::new();
        for (d1, m1) in &masses {
            for (d2, m2) in &local {
                *next.entry(tensor(d1, d2)).or_default() += m1 * m2;
            }
        }
        masses = next;
    }
    Ok(TypeDistribution { modulus, group_order: order, masses })
}

/// Degree of `Q(E[N])` under maximal image: the number of primitive vectors mod `N`.
pub fn field_degree(modulus: u64) -> u64 {
    arith::factor(modulus).into_iter().map(|(p, n)| coset_space_size(p, n)).product()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinDegreeReport {
    pub modulus: u64,
    pub group_order: BigUint,
    pub masses: BTreeMap<u64, BigUint>,
}

impl MinDegreeReport {
    pub fn density(&self, f: u64) -> Density {
        Density { mass: self.masses.get(&f).cloned().unwrap_or_default(), total: self.group_order.clone() }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,mass,density,percent\n");
        for f in self.masses.keys() {
            let d = self.density(*f);
            out.push_str(&format!("{f},{},{d},{}\n", d.mass, d.percent(4)));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .masses
            .keys()
            .map(|&f| {
                let d = self.density(f);
                serde_json::json!({
                    "degree": f,
                    "mass": json_big(&d.mass),
                    "density": d.to_string(),
                    "percent": d.percent(4),
                })
            })
            .collect();
        serde_json::json!({
            "modulus": self.modulus,
            "group_order": json_big(&self.group_order),
            "degrees": rows,
        })
    }
}

pub fn min_degree_report(modulus: u64) -> Result<MinDegreeReport> {
    Ok(distribution(modulus)?.min_degrees())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x011() -> CurveQ {
        "X0(11)".parse().unwrap()
    }

    #[test]
    fn types_at_bad_and_level_primes() {
        let s = Setting::new(&x011(), 63, Options::default()).unwrap();
        s.check_hypotheses().unwrap();
        let expect = |q: u64, text: &str| {
            let d = s.factorization_type(q).unwrap();
            assert_eq!(d, text.parse::<DCType>().unwrap(), "q = {q}: {d}");
            assert_eq!(d.mass(), 3456);
        };
        expect(11, "6 x (6,1) + 12 x (6,3) + 36 x (9,9) + 6 x (42,7) + 12 x (42,21) + 36 x (63,63)");
        expect(3, "18 x (48,6) + 6 x (432,9)");
        expect(2, "144 x 24");
        expect(313, "36 x 1 + 24 x 3 + 126 x 6 + 36 x 9 + 126 x 18");
    }

    #[test]
    fn euler_factors() {
        let s = Setting::new(&x011(), 63, Options::default()).unwrap();
        let e11 = euler_factor(&s.factorization_type(11).unwrap(), 3);
        assert_eq!(e11, [1u32, 72, 2652, 66552].map(BigUint::from));
        let e7 = euler_factor(&s.factorization_type(7).unwrap(), 2);
        assert_eq!(e7, [1u32, 18, 171].map(BigUint::from));
        let trivial = euler_factor(&DCType::from_terms(&[(1, 1, 1)]).unwrap(), 4);
        assert!(trivial.iter().all(|x| x.is_one()));
    }

    #[test]
    fn small_table() {
        let s = Setting::new(&x011(), 63, Options::default()).unwrap();
        let t = s.zeta_coefficients(1, 121).unwrap();
        assert_eq!(t.to_json(), r#"{"1":1,"7":18,"11":72,"49":171,"77":1296,"121":2652}"#);
    }

    #[test]
    fn rejects_bad_settings() {
        let e: CurveQ = "[0,0,0,-1,0]".parse().unwrap();
        let s = Setting::new(&e, 63, Options::default()).unwrap();
        assert!(matches!(s.check_hypotheses(), Err(Error::Hypothesis(_))));
        assert!(Setting::new(&x011(), 42, Options::default()).is_err());
        let s = Setting::new(&x011(), 33, Options::default()).unwrap();
        assert!(matches!(s.factorization_type(11), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn distribution_mod_7() {
        let d = distribution(7).unwrap();
        assert_eq!(d.total_mass(), BigUint::from(2016u32));
        assert_eq!(d.group_order, BigUint::from(2016u32));
        let r = d.min_degrees();
        let total: BigUint = r.masses.values().sum();
        assert_eq!(total, r.group_order);
        assert_eq!(field_degree(63), 3456);
    }

    #[test]
    fn percent_rendering() {
        let d = Density { mass: BigUint::from(1u32), total: BigUint::from(3u32) };
        assert_eq!(d.percent(4), "33.3333%");
        assert_eq!(d.percent(2), "33.33%");
        let d = Density { mass: BigUint::from(2u32), total: BigUint::from(3u32) };
        assert_eq!(d.percent(0), "67%");
        assert_eq!(d.to_string(), "2/3");
    }
}
