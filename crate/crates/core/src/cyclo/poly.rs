//! Integer and rational polynomial helpers used to build and reduce modulo
//! cyclotomic polynomials. Coefficients are stored lowest degree first.

use crate::rational::Rational;

pub fn divisors(n: u32) -> Vec<u32> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn euler_phi(mut n: u32) -> u32 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

/// Exact division of monic integer polynomials; panics if the division is not
/// exact (never happens for the cyclotomic tower).
pub(crate) fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    assert_eq!(den[dn], 1, "divisor must be monic");
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn];
        q[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] = rem[k + i]
                    .checked_sub(c.checked_mul(d).expect("coefficient overflow"))
                    .expect("coefficient overflow");
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "inexact polynomial division");
    q
}

/// Drop trailing zero coefficients (the zero polynomial becomes empty).
pub(crate) fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Rational::is_zero) {
        p.pop();
    }
}

/// Quotient and remainder of rational polynomials; `b` must be nonzero and
/// trimmed.
pub(crate) fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = b.len() - 1;
    let lead_inv = b[db].inv().expect("divisor is nonzero");
    let mut rem = a.to_vec();
    trim(&mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut q = vec![Rational::ZERO; rem.len() - db];
    while rem.len() > db {
        let k = rem.len() - 1 - db;
        let c = &rem[rem.len() - 1] * &lead_inv;
        for (i, bi) in b.iter().enumerate() {
            if !bi.is_zero() {
                rem[k + i] = &rem[k + i] - &(&c * bi);
            }
        }
        q[k] = c;
        trim(&mut rem);
    }
    (q, rem)
}

pub(crate) fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::ZERO; a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += &(ai * bj);
            }
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out: Vec<Rational> = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x - y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => -y,
            (None, None) => unreachable!(),
        })
        .collect();
    trim(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_and_totient_tables() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(20), 8);
        assert_eq!(euler_phi(2884), 1224);
        assert_eq!(lcm(4, 6), 12);
    }

    #[test]
    fn rational_divrem_reconstructs() {
        let q = |v: &[i64]| v.iter().map(|&c| Rational::from_int(c)).collect::<Vec<_>>();
        let a = q(&[5, 0, 3, 1]);
        let b = q(&[1, 2]);
        let (quo, rem) = divrem(&a, &b);
        let mut back = mul(&quo, &b);
        back.resize(a.len(), Rational::ZERO);
        for (i, r) in rem.iter().enumerate() {
            back[i] += r;
        }
        assert_eq!(back, a);
    }
}
