//! Real reflection groups of degree at most four in standard position.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::{gmpn_generators, realify, MatrixGroup, DEFAULT_CAP};
use crate::cyclo::poly::lcm;
use crate::cyclo::CycNum;
use crate::linalg::MatrixF;
use crate::rational::Rational;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Irreducible {
    A(u8),
    B(u8),
    D4,
    F4,
    H(u8),
    I2(u32),
}

impl Irreducible {
    pub fn degree(self) -> usize {
        match self {
            Irreducible::A(n) | Irreducible::B(n) | Irreducible::H(n) => n as usize,
            Irreducible::D4 | Irreducible::F4 => 4,
            Irreducible::I2(_) => 2,
        }
    }

    /// Smallest conductor over which the generators below are written.
    pub fn conductor(self) -> u32 {
        match self {
            Irreducible::A(2) => 12,
            Irreducible::A(4) | Irreducible::H(_) => 20,
            Irreducible::I2(k) => lcm(4, k),
            _ => 1,
        }
    }

    /// Order of the group, from the classification.
    pub fn order(self) -> usize {
        match self {
            Irreducible::A(n) => (1..=n as usize + 1).product(),
            Irreducible::B(n) => (1..=n as usize).product::<usize>() << n,
            Irreducible::D4 => 192,
            Irreducible::F4 => 1152,
            Irreducible::H(3) => 120,
            Irreducible::H(_) => 14400,
            Irreducible::I2(k) => 2 * k as usize,
        }
    }

    fn reflections(self) -> Vec<MatrixF> {
        let l = self.conductor();
        let q = |n: i64, d: i64| CycNum::from_rational(l, Rational::new(n, d));
        let int_roots = |rows: &[&[i64]]| -> Vec<Vec<CycNum>> {
            rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect()
        };
        let roots = match self {
            Irreducible::A(1) => int_roots(&[&[1]]),
            Irreducible::A(2) => return dihedral(3),
            // A3 = D3.
            Irreducible::A(3) => int_roots(&[&[1, -1, 0], &[0, 1, -1], &[0, 1, 1]]),
            Irreducible::A(4) => {
                // The fourth root (a, a, a, a + 1) with a = (√5 - 1)/4 has
                // norm² 2 and meets e3 - e4 at 120 degrees.
                let a = (&sqrt5(l) - &q(1, 1)).scale(&Rational::new(1, 4));
                let mut roots = int_roots(&[&[1, -1, 0, 0], &[0, 1, -1, 0], &[0, 0, 1, -1]]);
                roots.push(vec![a.clone(), a.clone(), a.clone(), &a + &q(1, 1)]);
                roots
            }
            Irreducible::B(2) => int_roots(&[&[1, -1], &[0, 1]]),
            Irreducible::B(3) => int_roots(&[&[1, -1, 0], &[0, 1, -1], &[0, 0, 1]]),
            Irreducible::B(4) => int_roots(&[&[1, -1, 0, 0], &[0, 1, -1, 0], &[0, 0, 1, -1], &[0, 0, 0, 1]]),
            Irreducible::D4 => int_roots(&[&[1, -1, 0, 0], &[0, 1, -1, 0], &[0, 0, 1, -1], &[0, 0, 1, 1]]),
            Irreducible::F4 => {
                let mut roots = int_roots(&[&[0, 1, -1, 0], &[0, 0, 1, -1], &[0, 0, 0, 1]]);
                roots.push(vec![q(1, 2), q(-1, 2), q(-1, 2), q(-1, 2)]);
                roots
            }
            Irreducible::H(n) => {
                // (√5 - 1)/4 = cos(2π/5) and (1 + √5)/4 = cos(π/5).
                let s = sqrt5(l);
                let c1 = (&s - &q(1, 1)).scale(&Rational::new(1, 4));
                let c2 = -&(&s + &q(1, 1)).scale(&Rational::new(1, 4));
                let half = q(-1, 2);
                let z = q(0, 1);
                if n == 3 {
                    let mut roots = int_roots(&[&[0, 0, 1], &[0, 1, 0]]);
                    roots.push(vec![c1, c2, half]);
                    roots
                } else {
                    let mut roots = int_roots(&[&[0, 0, 0, 1], &[0, 0, 1, 0]]);
                    roots.push(vec![z.clone(), c1.clone(), half.clone(), c2.clone()]);
                    roots.push(vec![c1, c2, half, z]);
                    roots
                }
            }
            Irreducible::I2(k) => return dihedral(k),
            other => unreachable!("not a shipped irreducible: {other:?}"),
        };
        roots.iter().map(|r| reflection(r)).collect()
    }
}

impl fmt::Display for Irreducible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Irreducible::A(n) => write!(f, "A{n}"),
            Irreducible::B(n) => write!(f, "B{n}"),
            Irreducible::D4 => f.write_str("D4"),
            Irreducible::F4 => f.write_str("F4"),
            Irreducible::H(n) => write!(f, "H{n}"),
            Irreducible::I2(k) => write!(f, "I2({k})"),
        }
    }
}

impl FromStr for Irreducible {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownLabel(s.to_string());
        if let Some(k) = s.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
            let k: u32 = k.parse().map_err(|_| unknown())?;
            if k < 2 {
                return Err(Error::InvalidParameters(format!("I2({k}) needs k >= 2")));
            }
            return Ok(Irreducible::I2(k));
        }
        Ok(match s {
            "A1" => Irreducible::A(1),
            "A2" => Irreducible::A(2),
            "A3" => Irreducible::A(3),
            "A4" => Irreducible::A(4),
            "B2" => Irreducible::B(2),
            "B3" => Irreducible::B(3),
            "B4" => Irreducible::B(4),
            "D4" => Irreducible::D4,
            "F4" => Irreducible::F4,
            "H3" => Irreducible::H(3),
            "H4" => Irreducible::H(4),
            _ => return Err(unknown()),
        })
    }
}

/// `√5 = ζ5 - ζ5² - ζ5³ + ζ5⁴` expressed over a conductor divisible by 5.
fn sqrt5(l: u32) -> CycNum {
    let z = |j: i64| CycNum::zeta_power(l, j * (l / 5) as i64);
    &(&(&z(1) - &z(2)) - &z(3)) + &z(4)
}

/// `I - 2 r rᵀ / (r·r)`.
fn reflection(r: &[CycNum]) -> MatrixF {
    let l = r[0].conductor();
    let n = r.len();
    let norm = r.iter().fold(CycNum::zero(l), |acc, x| &acc + &(x * x));
    let f = CycNum::from_int(l, 2).checked_div(&norm).expect("root is nonzero");
    let mut m = MatrixF::identity(n, l);
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j) - &(&f * &(&r[i] * &r[j]));
            m.set(i, j, v);
        }
    }
    m
}

/// Dihedral group of order 2k generated by `diag(1, -1)` and the reflection
/// in the line at angle π/k.
fn dihedral(k: u32) -> Vec<MatrixF> {
    let l = lcm(4, k);
    let (c, s) = CycNum::zeta_power(l, (l / k) as i64).real_imag_parts().expect("4 | l");
    let o = CycNum::one(l);
    let z = CycNum::zero(l);
    vec![
        MatrixF::new(2, 2, vec![o.clone(), z.clone(), z, -&o]).expect("2x2"),
        MatrixF::new(2, 2, vec![c.clone(), s.clone(), s, -&c]).expect("2x2"),
    ]
}

/// A product of irreducibles in consecutive coordinate blocks, followed by
/// `pad` trivially acted coordinates. Written like `B3xA1`, `I2(5)xI2(7)`,
/// `H3x1`, `1x1x1x1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CatalogLabel {
    pub factors: Vec<Irreducible>,
    pub pad: usize,
}

impl CatalogLabel {
    pub fn degree(&self) -> usize {
        self.factors.iter().map(|f| f.degree()).sum::<usize>() + self.pad
    }

    pub fn conductor(&self) -> u32 {
        self.factors.iter().fold(1, |acc, f| lcm(acc, f.conductor()))
    }

    /// Contains an irreducible factor of degree three or four.
    pub fn big_factor(&self) -> bool {
        self.factors.iter().any(|f| f.degree() >= 3)
    }

    pub fn order(&self) -> usize {
        self.factors.iter().map(|f| f.order()).product()
    }
}

impl fmt::Display for CatalogLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(ToString::to_string)
            .chain(std::iter::repeat_n("1".to_string(), self.pad))
            .collect();
        f.write_str(&parts.join("x"))
    }
}

impl FromStr for CatalogLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut label = CatalogLabel {
            factors: Vec::new(),
            pad: 0,
        };
        if s.is_empty() {
            return Err(Error::UnknownLabel(s.into()));
        }
        for part in s.split('x') {
            if part == "1" {
                label.pad += 1;
            } else if label.pad > 0 {
                return Err(Error::Parse(format!("trivial padding must come last in {s:?}")));
            } else {
                label.factors.push(part.parse().map_err(|e| match e {
                    Error::UnknownLabel(_) => Error::UnknownLabel(s.into()),
                    e => e,
                })?);
            }
        }
        Ok(label)
    }
}

impl Serialize for CatalogLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CatalogLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Either a catalog reflection group or a realified `G(m,p,n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Catalog(CatalogLabel),
    Gmpn { m: u32, p: u32, n: usize },
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Catalog(l) => l.fmt(f),
            GroupSpec::Gmpn { m, p, n } => write!(f, "G({m},{p},{n})"),
        }
    }
}

pub fn parse_group_spec(s: &str) -> Result<GroupSpec> {
    let s = s.trim();
    if let Some(args) = s.strip_prefix("G(").and_then(|r| r.strip_suffix(')')) {
        let nums: Vec<&str> = args.split(',').map(str::trim).collect();
        let bad = || Error::Parse(format!("expected G(m,p,n), got {s:?}"));
        if nums.len() != 3 {
            return Err(bad());
        }
        let m = nums[0].parse().map_err(|_| bad())?;
        let p = nums[1].parse().map_err(|_| bad())?;
        let n = nums[2].parse().map_err(|_| bad())?;
        return Ok(GroupSpec::Gmpn { m, p, n });
    }
    Ok(GroupSpec::Catalog(s.parse()?))
}

impl GroupSpec {
    /// Closed group; `G(m,p,n)` is realified.
    pub fn build(&self) -> Result<Arc<MatrixGroup>> {
        match self {
            GroupSpec::Catalog(l) => catalog_group(l),
            GroupSpec::Gmpn { m, p, n } => {
                let gens = gmpn_generators(*m, *p, *n)?
                    .iter()
                    .map(realify)
                    .collect::<Result<Vec<_>>>()?;
                let l = lcm(4, *m);
                let g = MatrixGroup::closure_in(2 * n, l, gens, DEFAULT_CAP)?;
                Ok(Arc::new(g.with_name(Some(self.to_string()))))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub label: CatalogLabel,
    pub degree: usize,
    pub conductor_required: u32,
    pub big_factor: bool,
}

impl From<CatalogLabel> for CatalogEntry {
    fn from(label: CatalogLabel) -> Self {
        CatalogEntry {
            degree: label.degree(),
            conductor_required: label.conductor(),
            big_factor: label.big_factor(),
            label,
        }
    }
}

fn cache() -> &'static Mutex<HashMap<CatalogLabel, Arc<MatrixGroup>>> {
    static CACHE: OnceLock<Mutex<HashMap<CatalogLabel, Arc<MatrixGroup>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The closed catalog group, with factors acting on consecutive coordinate
/// blocks in label order. Results are memoized for the process lifetime.
pub fn catalog_group(label: &CatalogLabel) -> Result<Arc<MatrixGroup>> {
    if let Some(g) = cache().lock().expect("cache lock").get(label) {
        return Ok(g.clone());
    }
    let n = label.degree();
    if n == 0 {
        return Err(Error::UnknownLabel(String::new()));
    }
    let l = label.conductor();
    let mut gens = Vec::new();
    let mut offset = 0;
    for f in &label.factors {
        let d = f.degree();
        for r in f.reflections() {
            let r = r.embed(l)?;
            let mut g = MatrixF::identity(n, l);
            for i in 0..d {
                for j in 0..d {
                    g.set(offset + i, offset + j, r.get(i, j).clone());
                }
            }
            gens.push(g);
        }
        offset += d;
    }
    let g = MatrixGroup::closure_in(n, l, gens, DEFAULT_CAP)?.with_name(Some(label.to_string()));
    let g = Arc::new(g);
    cache().lock().expect("cache lock").insert(label.clone(), g.clone());
    Ok(g)
}

/// All degree-4 reflection groups assembled from the shipped irreducibles,
/// padded with trivial coordinates, with dihedral factors `I2(k)` for
/// `3 <= k <= k_max`. `I2(2)` is left out since it is `A1xA1`, and `A2`, `B2`
/// appear as `I2(3)`, `I2(4)`. Factors are listed by descending degree.
pub fn enumerate_degree4_catalog(k_max: u32) -> Vec<CatalogEntry> {
    use Irreducible::*;
    let label = |factors: Vec<Irreducible>| {
        let pad = 4 - factors.iter().map(|f| f.degree()).sum::<usize>();
        CatalogEntry::from(CatalogLabel { factors, pad })
    };
    let dihedral: Vec<Irreducible> = (3..=k_max).map(I2).collect();
    let mut out = Vec::new();
    for f in [A(4), B(4), D4, F4, H(4)] {
        out.push(label(vec![f]));
    }
    for f in [A(3), B(3), H(3)] {
        out.push(label(vec![f, A(1)]));
        out.push(label(vec![f]));
    }
    for (i, &a) in dihedral.iter().enumerate() {
        for &b in &dihedral[i..] {
            out.push(label(vec![a, b]));
        }
    }
    for &a in &dihedral {
        out.push(label(vec![a, A(1), A(1)]));
        out.push(label(vec![a, A(1)]));
        out.push(label(vec![a]));
    }
    for k in (0..=4).rev() {
        out.push(label(vec![A(1); k]));
    }
    out
}
