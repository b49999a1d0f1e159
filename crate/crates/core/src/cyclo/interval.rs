//! Certified enclosures of the complex embedding `ζ_L ↦ e^(2πi/L)`.
//!
//! Two tiers: a cached table of `f64` enclosures of `cos`/`sin(2πk/L)` with
//! outward-rounded interval arithmetic for the common case, and a fixed-point
//! big-integer evaluation with increasing precision when the fast tier cannot
//! decide a sign. The fixed-point tier computes `π` by Machin's formula and
//! the trigonometric values by Taylor series with explicit remainder bounds,
//! so every enclosure is rigorous.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::CycNum;
use crate::rational::{big_one, ceil_div, floor_div, Rational};

/// Closed interval of reals with outward-rounded `f64` endpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[allow(clippy::should_implement_trait)]
impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    const WHOLE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    fn point_widened(x: f64) -> Self {
        if !x.is_finite() {
            return Self::WHOLE;
        }
        Interval {
            lo: x.next_down(),
            hi: x.next_up(),
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        if r.is_zero() {
            return Self::ZERO;
        }
        let x = r.to_f64();
        if r.f64_is_tight() {
            Self::point_widened(x)
        } else if x.is_finite() {
            let e = x.abs() * 1e-12;
            Interval {
                lo: (x - e).next_down(),
                hi: (x + e).next_up(),
            }
        } else {
            Self::WHOLE
        }
    }

    pub fn add(self, o: Interval) -> Interval {
        Interval {
            lo: (self.lo + o.lo).next_down(),
            hi: (self.hi + o.hi).next_up(),
        }
    }

    pub fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn sub(self, o: Interval) -> Interval {
        self.add(o.neg())
    }

    pub fn mul(self, o: Interval) -> Interval {
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        if p.iter().any(|x| x.is_nan()) {
            return Self::WHOLE;
        }
        let lo = p.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = p.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval {
            lo: lo.next_down(),
            hi: hi.next_up(),
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && self.hi >= 0.0
    }

    pub fn overlaps(&self, o: &Interval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn sign(&self) -> Option<Ordering> {
        if self.lo > 0.0 {
            Some(Ordering::Greater)
        } else if self.hi < 0.0 {
            Some(Ordering::Less)
        } else if self.lo == 0.0 && self.hi == 0.0 {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Fixed-point enclosure `[lo, hi] · 2^-prec`.
#[derive(Clone, Debug)]
struct Fx {
    lo: BigInt,
    hi: BigInt,
}

struct FxCtx {
    prec: u32,
    unit: BigInt,
}

impl FxCtx {
    fn new(prec: u32) -> Self {
        FxCtx {
            prec,
            unit: big_one() << prec,
        }
    }

    fn exact(&self, n: i64) -> Fx {
        let v = BigInt::from(n) << self.prec;
        Fx { lo: v.clone(), hi: v }
    }

    /// Enclosure of `num / den` for `den > 0`.
    fn ratio(&self, num: &BigInt, den: &BigInt) -> Fx {
        let n = num << self.prec;
        Fx {
            lo: floor_div(&n, den),
            hi: ceil_div(&n, den),
        }
    }

    fn add(&self, a: &Fx, b: &Fx) -> Fx {
        Fx {
            lo: &a.lo + &b.lo,
            hi: &a.hi + &b.hi,
        }
    }

    fn sub(&self, a: &Fx, b: &Fx) -> Fx {
        Fx {
            lo: &a.lo - &b.hi,
            hi: &a.hi - &b.lo,
        }
    }

    fn mul(&self, a: &Fx, b: &Fx) -> Fx {
        let p = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let lo = p.iter().min().expect("nonempty");
        let hi = p.iter().max().expect("nonempty");
        Fx {
            lo: floor_div(lo, &self.unit),
            hi: ceil_div(hi, &self.unit),
        }
    }

    /// Multiply by an exact rational.
    fn scale(&self, a: &Fx, r: &Rational) -> Fx {
        let (n, d) = (r.numer(), r.denom());
        let (x, y) = (&a.lo * &n, &a.hi * &n);
        let (lo, hi) = if n.is_negative() { (y, x) } else { (x, y) };
        Fx {
            lo: floor_div(&lo, &d),
            hi: ceil_div(&hi, &d),
        }
    }

    fn div_int(&self, a: &Fx, k: u64) -> Fx {
        let k = BigInt::from(k);
        Fx {
            lo: floor_div(&a.lo, &k),
            hi: ceil_div(&a.hi, &k),
        }
    }

    fn widen(&self, a: &Fx, e: &BigInt) -> Fx {
        Fx {
            lo: &a.lo - e,
            hi: &a.hi + e,
        }
    }

    /// `atan(1/n)` by its alternating series.
    fn atan_inv(&self, n: u64) -> Fx {
        let n2 = BigInt::from(n * n);
        let mut pow = BigInt::from(n);
        let mut sum = self.exact(0);
        let mut k = 0u64;
        loop {
            let term = self.div_int(&self.ratio(&big_one(), &pow), 2 * k + 1);
            if term.hi <= BigInt::from(1) {
                // Remainder of an alternating series is bounded by the first
                // omitted term.
                return self.widen(&sum, &term.hi);
            }
            sum = if k.is_multiple_of(2) {
                self.add(&sum, &term)
            } else {
                self.sub(&sum, &term)
            };
            pow *= &n2;
            k += 1;
        }
    }

    fn pi(&self) -> Fx {
        let a = self.atan_inv(5);
        let b = self.atan_inv(239);
        let a16 = Fx {
            lo: &a.lo * 16,
            hi: &a.hi * 16,
        };
        let b4 = Fx {
            lo: &b.lo * 4,
            hi: &b.hi * 4,
        };
        self.sub(&a16, &b4)
    }

    /// Taylor series of cos (`start = 0`) or sin (`start = 1`) for a
    /// nonnegative argument below 2.
    fn taylor(&self, x: &Fx, start: u64) -> Fx {
        let x2 = self.mul(x, x);
        let mut term = if start == 0 { self.exact(1) } else { x.clone() };
        let mut sum = self.exact(0);
        let mut n = start;
        let mut sign = true;
        loop {
            sum = if sign {
                self.add(&sum, &term)
            } else {
                self.sub(&sum, &term)
            };
            sign = !sign;
            term = self.div_int(&self.mul(&term, &x2), (n + 1) * (n + 2));
            n += 2;
            if term.hi <= BigInt::from(1) {
                // Lagrange remainder: |R| ≤ |x|^(n)/n!, enclosed by `term`.
                let e = term.hi.abs().max(term.lo.abs()) + 1;
                return self.widen(&sum, &e);
            }
        }
    }

    /// `(cos, sin)` of `2πk/L`.
    fn cos_sin(&self, pi: &Fx, k: u64, l: u64) -> (Fx, Fx) {
        let k = k % l;
        // Reduce to an angle in [0, π/2] with sign bookkeeping.
        // 2πk/L = 2π t, t = k/L in [0,1).
        let (k1, sin_sign) = if 2 * k > l { (l - k, -1) } else { (k, 1) }; // t in [0, 1/2]
        let (k2, cos_sign) = if 4 * k1 > l { (l - 2 * k1, -1) } else { (2 * k1, 1) };
        // angle = π * k2 / L with k2/L in [0, 1/2]
        let angle = self.scale(pi, &Rational::new(k2 as i64, l as i64));
        let c = self.taylor(&angle, 0);
        let s = self.taylor(&angle, 1);
        let neg = |a: Fx| Fx { lo: -a.hi, hi: -a.lo };
        let c = if cos_sign < 0 { neg(c) } else { c };
        let s = if sin_sign < 0 { neg(s) } else { s };
        (c, s)
    }

    fn to_interval(&self, a: &Fx) -> Interval {
        let scale = 2f64.powi(-(self.prec as i32));
        let lo = a.lo.to_f64().unwrap_or(f64::NEG_INFINITY) * scale;
        let hi = a.hi.to_f64().unwrap_or(f64::INFINITY) * scale;
        Interval {
            lo: lo.next_down(),
            hi: hi.next_up(),
        }
    }
}

const TABLE_PREC: u32 = 96;

fn pi_cached(prec: u32) -> Fx {
    static CACHE: OnceLock<Mutex<HashMap<u32, Fx>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().expect("pi cache poisoned").get(&prec) {
        return p.clone();
    }
    let p = FxCtx::new(prec).pi();
    cache.lock().expect("pi cache poisoned").insert(prec, p.clone());
    p
}

/// `[cos(2πk/L), sin(2πk/L)]` enclosures interleaved, `k < φ(L)`.
fn table(a: &CycNum) -> &'static [Interval] {
    let f = a.field;
    f.cos_table.get_or_init(|| {
        let ctx = FxCtx::new(TABLE_PREC);
        let pi = pi_cached(TABLE_PREC);
        let l = f.conductor as u64;
        let mut out = Vec::with_capacity(2 * f.degree);
        for k in 0..f.degree as u64 {
            let (c, s) = ctx.cos_sin(&pi, k, l);
            out.push(ctx.to_interval(&c));
            out.push(ctx.to_interval(&s));
        }
        out
    })
}

fn eval(a: &CycNum, part: usize) -> Interval {
    let t = table(a);
    let mut acc = Interval::ZERO;
    for (k, c) in a.coeffs.iter().enumerate() {
        if !c.is_zero() {
            acc = acc.add(Interval::from_rational(c).mul(t[2 * k + part]));
        }
    }
    acc
}

pub(super) fn real_part(a: &CycNum) -> Interval {
    eval(a, 0)
}

pub(super) fn imag_part(a: &CycNum) -> Interval {
    eval(a, 1)
}

fn fixed_real_part(a: &CycNum, prec: u32) -> Fx {
    let ctx = FxCtx::new(prec);
    let pi = pi_cached(prec);
    let l = a.conductor() as u64;
    let mut acc = ctx.exact(0);
    for (k, c) in a.coeffs.iter().enumerate() {
        if !c.is_zero() {
            let (cos, _) = ctx.cos_sin(&pi, k as u64, l);
            acc = ctx.add(&acc, &ctx.scale(&cos, c));
        }
    }
    acc
}

/// Sign of a real element; terminates because nonzero values are eventually
/// separated from zero as the precision doubles.
pub(super) fn sign_of_real(a: &CycNum) -> Ordering {
    if a.is_zero() {
        return Ordering::Equal;
    }
    if let Some(s) = real_part(a).sign() {
        if s != Ordering::Equal {
            return s;
        }
    }
    let mut prec = 128;
    loop {
        let e = fixed_real_part(a, prec);
        if e.lo > BigInt::zero() {
            return Ordering::Greater;
        }
        if e.hi < BigInt::zero() {
            return Ordering::Less;
        }
        prec *= 2;
    }
}
