//! Exact arithmetic in cyclotomic fields `Q(ζ_L)`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^(φ(L)-1)` reduced
//! modulo the `L`-th cyclotomic polynomial, so two elements of the same field
//! are equal iff their coefficient vectors are identical. Field data (the
//! reduction modulus) is built once per conductor and leaked into a
//! process-wide registry; every [`CycNum`] carries a `&'static` handle to it.

mod interval;
pub mod poly;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

pub use interval::Interval;

use crate::rational::Rational;
use crate::Error;

/// Data shared by all elements of `Q(ζ_L)`.
pub struct CycField {
    conductor: u32,
    degree: usize,
    /// `Φ_L`, lowest degree first, monic.
    phi: Vec<i64>,
    /// Nonzero coefficients of `Φ_L` below the leading term.
    phi_terms: Vec<(usize, i64)>,
    cos_table: OnceLock<Vec<Interval>>,
}

impl CycField {
    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[i64] {
        &self.phi
    }

    /// Reduce a polynomial of arbitrary length modulo `Φ_L`.
    fn reduce(&self, mut p: Vec<Rational>) -> Vec<Rational> {
        let d = self.degree;
        if p.len() > d {
            for k in (d..p.len()).rev() {
                if p[k].is_zero() {
                    continue;
                }
                let c = std::mem::take(&mut p[k]);
                for &(i, a) in &self.phi_terms {
                    let t = c.mul_int(a);
                    p[k - d + i] -= &t;
                }
            }
            p.truncate(d);
        } else {
            p.resize(d, Rational::ZERO);
        }
        p
    }
}

impl fmt::Debug for CycField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.conductor)
    }
}

static FIELDS: OnceLock<RwLock<HashMap<u32, &'static CycField>>> = OnceLock::new();

/// The field `Q(ζ_L)`, built on first use.
pub fn field(conductor: u32) -> &'static CycField {
    assert!(conductor >= 1, "conductor must be positive");
    let reg = FIELDS.get_or_init(Default::default);
    if let Some(f) = reg.read().expect("field registry poisoned").get(&conductor) {
        return f;
    }
    // Built outside the write lock: construction recurses into the divisors.
    let phi = build_cyclotomic(conductor);
    let degree = phi.len() - 1;
    let phi_terms = phi[..degree]
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (i, c))
        .collect();
    let built = CycField {
        conductor,
        degree,
        phi,
        phi_terms,
        cos_table: OnceLock::new(),
    };
    let mut w = reg.write().expect("field registry poisoned");
    w.entry(conductor).or_insert_with(|| Box::leak(Box::new(built)))
}

fn build_cyclotomic(n: u32) -> Vec<i64> {
    if n == 1 {
        return vec![-1, 1];
    }
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in poly::divisors(n) {
        if d < n {
            p = poly::exact_div_monic(&p, field(d).modulus());
        }
    }
    p
}

/// `Φ_L` with integer coefficients, lowest degree first.
pub fn cyclotomic_polynomial(conductor: u32) -> Vec<i64> {
    field(conductor).phi.clone()
}

/// An element of `Q(ζ_L)` in reduced power-basis form.
#[derive(Clone)]
pub struct CycNum {
    field: &'static CycField,
    coeffs: Vec<Rational>,
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor == other.field.conductor && self.coeffs == other.coeffs
    }
}

impl Eq for CycNum {}

impl Hash for CycNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.conductor.hash(state);
        self.coeffs.hash(state);
    }
}

/// A structural total order (conductor, then coefficients); used only for
/// deterministic output, it has nothing to do with the real ordering.
impl Ord for CycNum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .conductor
            .cmp(&other.field.conductor)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for CycNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl CycNum {
    pub fn zero(conductor: u32) -> Self {
        let field = field(conductor);
        CycNum {
            field,
            coeffs: vec![Rational::ZERO; field.degree],
        }
    }

    pub fn one(conductor: u32) -> Self {
        Self::from_rational(conductor, Rational::ONE)
    }

    pub fn from_int(conductor: u32, n: i64) -> Self {
        Self::from_rational(conductor, Rational::from_int(n))
    }

    pub fn from_rational(conductor: u32, r: Rational) -> Self {
        let mut z = Self::zero(conductor);
        z.coeffs[0] = r;
        z
    }

    /// `Σ coeffs[k] ζ^k` for a coefficient vector of any length.
    pub fn from_poly(conductor: u32, coeffs: Vec<Rational>) -> Self {
        let field = field(conductor);
        CycNum {
            field,
            coeffs: field.reduce(coeffs),
        }
    }

    /// `ζ_L^(j mod L)`.
    pub fn zeta_power(conductor: u32, j: i64) -> Self {
        let e = j.rem_euclid(conductor as i64) as usize;
        let mut p = vec![Rational::ZERO; e + 1];
        p[e] = Rational::ONE;
        Self::from_poly(conductor, p)
    }

    pub fn field(&self) -> &'static CycField {
        self.field
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Rational::is_zero)
    }

    /// The rational value, if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Rational::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn assert_same_field(&self, other: &Self) {
        assert_eq!(
            self.field.conductor, other.field.conductor,
            "mixed conductors; embed into a common field first"
        );
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycNum {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiply by `ζ^k` (cheap: a shift followed by reduction).
    pub fn mul_zeta_power(&self, k: i64) -> Self {
        let l = self.field.conductor as i64;
        let k = k.rem_euclid(l) as usize;
        if k == 0 {
            return self.clone();
        }
        let mut p = vec![Rational::ZERO; k + self.coeffs.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            p[i + k] = c.clone();
        }
        Self::from_poly(self.field.conductor, p)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.conductor());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn inv(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let l = self.conductor();
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(l, r.inv()?));
        }
        let mut nz = self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero());
        if let (Some((k, c)), None) = (nz.next(), nz.next()) {
            // c ζ^k  ->  c^-1 ζ^-k
            return Ok(Self::zeta_power(l, -(k as i64)).scale(&c.inv()?));
        }
        // Extended Euclid against Φ_L; `a` is a unit since Φ_L is irreducible.
        let modulus: Vec<Rational> = self.field.phi.iter().map(|&c| Rational::from_int(c)).collect();
        let mut a = self.coeffs.clone();
        poly::trim(&mut a);
        let (mut r0, mut r1) = (modulus, a);
        let (mut s0, mut s1) = (Vec::<Rational>::new(), vec![Rational::ONE]);
        while !r1.is_empty() {
            let (q, r) = poly::divrem(&r0, &r1);
            let s2 = poly::sub(&s0, &poly::mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        debug_assert_eq!(r0.len(), 1, "gcd with Φ_L must be a constant");
        let c = r0[0].inv()?;
        Ok(Self::from_poly(l, s0).scale(&c))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, Error> {
        if self.conductor() != other.conductor() {
            return Err(Error::ConductorMismatch(self.conductor(), other.conductor()));
        }
        Ok(self * &other.inv()?)
    }

    /// The same element of `Q(ζ_L) ⊂ Q(ζ_L2)` expressed with conductor `L2`.
    pub fn embed(&self, conductor: u32) -> Result<Self, Error> {
        let l = self.conductor();
        if !conductor.is_multiple_of(l) {
            return Err(Error::NotASubfield { from: l, to: conductor });
        }
        if conductor == l {
            return Ok(self.clone());
        }
        let s = (conductor / l) as usize;
        let mut p = vec![Rational::ZERO; (self.coeffs.len() - 1) * s + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            p[k * s] = c.clone();
        }
        Ok(Self::from_poly(conductor, p))
    }

    /// Complex conjugation `ζ ↦ ζ^(L-1)`.
    pub fn conj(&self) -> Self {
        let l = self.conductor() as usize;
        if self.as_rational().is_some() {
            return self.clone();
        }
        let mut p = vec![Rational::ZERO; l];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                p[(l - k) % l] += c;
            }
        }
        Self::from_poly(l as u32, p)
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// `i = ζ_L^(L/4)`; requires `4 | L`.
    pub fn imaginary_unit(conductor: u32) -> Result<Self, Error> {
        if !conductor.is_multiple_of(4) {
            return Err(Error::NoImaginaryUnit(conductor));
        }
        Ok(Self::zeta_power(conductor, conductor as i64 / 4))
    }

    /// `(re, im)` with `self = re + i·im` and both parts real.
    pub fn real_imag_parts(&self) -> Result<(Self, Self), Error> {
        let l = self.conductor();
        if !l.is_multiple_of(4) {
            return Err(Error::NoImaginaryUnit(l));
        }
        let c = self.conj();
        let half = Rational::new(1, 2);
        let re = (self + &c).scale(&half);
        // (a - conj a) / (2i) = -(i/2)(a - conj a)
        let im = (self - &c).mul_zeta_power(l as i64 / 4).scale(&Rational::new(-1, 2));
        Ok((re, im))
    }

    /// Certified enclosure of the real part of the embedding `ζ_L ↦ e^(2πi/L)`.
    pub fn re_interval(&self) -> Interval {
        interval::real_part(self)
    }

    /// Certified enclosure of the imaginary part of the embedding.
    pub fn im_interval(&self) -> Interval {
        interval::imag_part(self)
    }

    /// Exact sign of a real element under the embedding `ζ_L ↦ e^(2πi/L)`.
    pub fn real_sign(&self) -> Result<Ordering, Error> {
        if !self.is_real() {
            return Err(Error::NotReal);
        }
        Ok(interval::sign_of_real(self))
    }

    /// Equality of field elements that may live in different cyclotomic
    /// fields. Decided by certified enclosures when they separate, otherwise
    /// by embedding both sides into the compositum.
    pub fn same_value(&self, other: &Self) -> bool {
        if self.conductor() == other.conductor() {
            return self == other;
        }
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => return a == b,
            // Canonical form: a non-constant coefficient vector is irrational.
            (Some(_), None) | (None, Some(_)) => return false,
            _ => {}
        }
        if !self.re_interval().overlaps(&other.re_interval()) || !self.im_interval().overlaps(&other.im_interval()) {
            return false;
        }
        let l = poly::lcm(self.conductor(), other.conductor());
        self.embed(l).expect("divides lcm") == other.embed(l).expect("divides lcm")
    }
}

impl Add for &CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        self.assert_same_field(rhs);
        CycNum {
            field: self.field,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self.assert_same_field(rhs);
        CycNum {
            field: self.field,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        self.assert_same_field(rhs);
        if let Some(r) = rhs.as_rational() {
            return self.scale(r);
        }
        if let Some(r) = self.as_rational() {
            return rhs.scale(r);
        }
        let d = self.coeffs.len();
        let mut p = vec![Rational::ZERO; 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    p[i + j] += &(a * b);
                }
            }
        }
        CycNum {
            field: self.field,
            coeffs: self.field.reduce(p),
        }
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for CycNum {
            type Output = CycNum;
            fn $f(self, rhs: CycNum) -> CycNum {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let c = if c.is_integer() {
                c.numer().to_string()
            } else {
                c.to_string()
            };
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z{}", self.conductor())?,
                _ => write!(f, "{c}*z{}^{k}", self.conductor())?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct CycNumJson {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl Serialize for CycNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycNumJson {
            conductor: self.conductor(),
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = CycNumJson::deserialize(d)?;
        if j.conductor == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        let deg = poly::euler_phi(j.conductor) as usize;
        if j.coeffs.len() != deg {
            return Err(D::Error::custom(format!(
                "conductor {} needs exactly {deg} coefficients, got {}",
                j.conductor,
                j.coeffs.len()
            )));
        }
        Ok(CycNum {
            field: field(j.conductor),
            coeffs: j.coeffs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn z(l: u32, j: i64) -> CycNum {
        CycNum::zeta_power(l, j)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // First cyclotomic polynomial with a coefficient of absolute value 2.
        assert!(cyclotomic_polynomial(105).contains(&-2));
        for l in 1..=60 {
            assert_eq!(cyclotomic_polynomial(l).len() as u32 - 1, poly::euler_phi(l));
        }
    }

    #[test]
    fn zeta_powers() {
        assert_eq!(z(4, 2), CycNum::from_int(4, -1));
        assert_eq!(z(5, 5), CycNum::one(5));
        assert_eq!(z(5, -1), z(5, 4));
        let minus: Vec<_> = [-1, -1, -1, -1].iter().map(|&c| q(c, 1)).collect();
        assert_eq!(z(5, 4).coeffs(), &minus[..]);
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&z(4, 1) * &z(4, 1), CycNum::from_int(4, -1));
        let s = &(&z(5, 1) + &z(5, 2)) + &(&z(5, 3) + &z(5, 4));
        assert_eq!(s, CycNum::from_int(5, -1));
        let a = &CycNum::from_int(5, 3) + &z(5, 1);
        assert!((&a * &a.inv().unwrap()).is_one());
        assert!(matches!(CycNum::zero(5).inv(), Err(Error::DivisionByZero)));
        assert!(matches!(
            CycNum::one(5).checked_div(&CycNum::zero(5)),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn embedding_examples() {
        assert_eq!(z(4, 1).embed(8).unwrap(), z(8, 2));
        assert_eq!(CycNum::one(3).embed(12).unwrap(), CycNum::one(12));
        let a = (&z(3, 1) + &CycNum::one(3)).embed(12).unwrap();
        assert_eq!(a, &z(12, 4) + &CycNum::one(12));
        // Φ_12 = x^4 - x^2 + 1, so ζ_12^4 = ζ_12^2 - 1 and a = ζ_12^2.
        assert_eq!(a, z(12, 2));
        assert!(matches!(z(4, 1).embed(6), Err(Error::NotASubfield { .. })));
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(z(4, 1).conj(), -&z(4, 1));
        assert_eq!(
            CycNum::from_rational(7, q(3, 5)).conj(),
            CycNum::from_rational(7, q(3, 5))
        );
        let a = &CycNum::from_int(5, 2) + &z(5, 3);
        assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn real_imag_examples() {
        let (re, im) = z(4, 1).real_imag_parts().unwrap();
        assert_eq!((re, im), (CycNum::zero(4), CycNum::one(4)));
        let (re, im) = CycNum::one(4).real_imag_parts().unwrap();
        assert_eq!((re, im), (CycNum::one(4), CycNum::zero(4)));
        let (re, im) = z(12, 1).real_imag_parts().unwrap();
        assert!((&(&re * &re) + &(&im * &im)).is_one());
        assert_eq!(re, (&z(12, 1) + &z(12, 11)).scale(&q(1, 2)));
        assert!(re.is_real() && im.is_real());
        assert!(matches!(z(6, 1).real_imag_parts(), Err(Error::NoImaginaryUnit(6))));
    }

    #[test]
    fn cross_field_equality() {
        let i4 = z(4, 1);
        let i20 = z(20, 5);
        assert!(i4.same_value(&i20));
        assert!(!i4.same_value(&z(20, 1)));
        let half = CycNum::from_rational(12, q(1, 2));
        let (re6, _) = z(12, 2).real_imag_parts().unwrap(); // cos(π/3)
        assert!(re6.same_value(&half));
        assert!(re6.same_value(&CycNum::from_rational(20, q(1, 2))));
        // cos(2π/5) and cos(π/6) live in different fields and differ.
        let (c5, _) = z(20, 4).real_imag_parts().unwrap();
        let (c12, _) = z(12, 1).real_imag_parts().unwrap();
        assert!(!c5.same_value(&c12));
    }

    #[test]
    fn json_shape() {
        let a = &CycNum::from_rational(4, q(1, 2)) + &z(4, 1);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"conductor":4,"coeffs":["1/2","1/1"]}"#);
        let b: CycNum = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        assert!(serde_json::from_str::<CycNum>(r#"{"conductor":4,"coeffs":["1/1"]}"#).is_err());
    }

    const CONDUCTORS: [u32; 6] = [1, 4, 5, 8, 12, 20];

    fn arb_pair() -> impl Strategy<Value = (CycNum, CycNum, CycNum)> {
        prop::sample::select(&CONDUCTORS[..]).prop_flat_map(|l| {
            let d = poly::euler_phi(l) as usize;
            let v = || prop::collection::vec((-6i64..7, 1i64..5), d);
            (v(), v(), v()).prop_map(move |(a, b, c)| {
                let mk = |v: Vec<(i64, i64)>| CycNum::from_poly(l, v.into_iter().map(|(n, d)| q(n, d)).collect());
                (mk(a), mk(b), mk(c))
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms((a, b, c) in arb_pair()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            // Canonical form: equality as field elements is coefficient equality.
            prop_assert_eq!((&a - &b).is_zero(), a.coeffs() == b.coeffs());
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn conj_is_an_involutive_automorphism((a, b, _c) in arb_pair()) {
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
            prop_assert_eq!(a.conj().conj(), a);
        }

        #[test]
        fn embed_is_an_injective_homomorphism((a, b, _c) in arb_pair()) {
            let l2 = a.conductor() * 3;
            let (ea, eb) = (a.embed(l2).unwrap(), b.embed(l2).unwrap());
            prop_assert_eq!((&a * &b).embed(l2).unwrap(), &ea * &eb);
            prop_assert_eq!((&a + &b).embed(l2).unwrap(), &ea + &eb);
            prop_assert_eq!(ea.is_zero(), a.is_zero());
        }

        #[test]
        fn roots_of_unity_have_unit_modulus(l in prop::sample::select(vec![4u32, 8, 12, 20, 28, 36]), j in -50i64..50) {
            let (re, im) = z(l, j).real_imag_parts().unwrap();
            prop_assert!((&(&re * &re) + &(&im * &im)).is_one());
        }
    }
}
