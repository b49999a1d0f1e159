//! Planes in `R^4 = C^2`: the family `{x=0}, {y=0}, {y=ζ^j x}`, phases of
//! vectors, and the orthogonal-splitting dichotomy for reflection groups.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::reflection_arrangement;
use crate::cyclo::poly::lcm;
use crate::cyclo::CycNum;
use crate::groups::MatrixGroup;
use crate::linalg::{interval_det, interval_vec, CInterval, MatrixF, Subspace};
use crate::rational::Rational;
use crate::{Error, Result};

fn coordinate_plane(conductor: u32, first: bool) -> Subspace {
    let rows: [&[i64]; 2] = if first {
        [&[1, 0, 0, 0], &[0, 1, 0, 0]]
    } else {
        [&[0, 0, 1, 0], &[0, 0, 0, 1]]
    };
    Subspace::from_spanning(4, conductor, MatrixF::from_int_rows(conductor, &rows).row_vecs()).expect("well formed")
}

/// `{y = 0}`, the first complex coordinate line, i.e. `span(e1, e2)`.
pub fn y_zero(conductor: u32) -> Subspace {
    coordinate_plane(conductor, true)
}

/// `{x = 0}`, i.e. `span(e3, e4)`.
pub fn x_zero(conductor: u32) -> Subspace {
    coordinate_plane(conductor, false)
}

/// The `m + 2` planes `{x=0}`, `{y=0}` and `{y = ζ_m^j x}` in closed form,
/// over `Q(ζ_L)` with `L = lcm(4, m)`.
pub struct ZetaPlanes {
    m: u32,
    conductor: u32,
    planes: OnceLock<Vec<Subspace>>,
    enclosures: OnceLock<Vec<Vec<Vec<CInterval>>>>,
}

impl ZetaPlanes {
    pub fn new(m: u32) -> Self {
        assert!(m >= 1, "m must be positive");
        ZetaPlanes {
            m,
            conductor: lcm(4, m),
            planes: OnceLock::new(),
            enclosures: OnceLock::new(),
        }
    }

    /// Process-wide shared instance for `m`.
    pub fn shared(m: u32) -> Arc<ZetaPlanes> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<ZetaPlanes>>>> = OnceLock::new();
        let mut cache = CACHE.get_or_init(Default::default).lock().expect("cache lock");
        cache.entry(m).or_insert_with(|| Arc::new(ZetaPlanes::new(m))).clone()
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// `{y = ζ^j x}` with canonical basis `(1, 0, c, s), (0, 1, -s, c)` where
    /// `ζ^j = c + is`.
    pub fn build_plane(m: u32, j: u32) -> Subspace {
        let l = lcm(4, m);
        let (c, s) = CycNum::zeta_power(l, (j * (l / m)) as i64)
            .real_imag_parts()
            .expect("4 | l");
        let o = CycNum::one(l);
        let z = CycNum::zero(l);
        Subspace::from_spanning(
            4,
            l,
            vec![vec![o.clone(), z.clone(), c.clone(), s.clone()], vec![z, o, -&s, c]],
        )
        .expect("well formed")
    }

    fn graph_planes(&self) -> &[Subspace] {
        self.planes.get_or_init(|| {
            (0..self.m)
                .into_par_iter()
                .map(|j| Self::build_plane(self.m, j))
                .collect()
        })
    }

    pub fn plane(&self, j: u32) -> Subspace {
        self.graph_planes()[(j % self.m) as usize].clone()
    }

    pub fn x_zero(&self) -> Subspace {
        x_zero(self.conductor)
    }

    pub fn y_zero(&self) -> Subspace {
        y_zero(self.conductor)
    }

    /// `{x=0}`, `{y=0}`, then `{y = ζ^j x}` for `j = 0..m`.
    pub fn all_planes(&self) -> Vec<Subspace> {
        let mut v = vec![self.x_zero(), self.y_zero()];
        v.extend_from_slice(self.graph_planes());
        v
    }

    fn enclosures(&self) -> &[Vec<Vec<CInterval>>] {
        self.enclosures.get_or_init(|| {
            self.graph_planes()
                .par_iter()
                .map(|p| p.basis().iter().map(|v| interval_vec(v)).collect())
                .collect()
        })
    }

    /// Number of `j` in `0..m` with `p ∩ {y = ζ^j x} ≠ {0}`, for a plane `p`
    /// meeting both `{x=0}` and `{y=0}` nontrivially. Pairs whose stacked
    /// basis has a certainly nonzero determinant are dismissed without exact
    /// arithmetic; the rest are decided exactly in the compositum field.
    pub fn meet_count(&self, p: &Subspace) -> Result<usize> {
        if p.ambient() != 4 || p.dim() != 2 {
            return Err(Error::PlanePrecondition(format!(
                "expected a plane in R^4, got dimension {} in R^{}",
                p.dim(),
                p.ambient()
            )));
        }
        let l = p.conductor();
        if !p.meets_nontrivially(&x_zero(l))? {
            return Err(Error::PlanePrecondition(
                "plane does not meet {x=0} nontrivially".into(),
            ));
        }
        if !p.meets_nontrivially(&y_zero(l))? {
            return Err(Error::PlanePrecondition(
                "plane does not meet {y=0} nontrivially".into(),
            ));
        }
        let p_iv: Vec<Vec<CInterval>> = p.basis().iter().map(|v| interval_vec(v)).collect();
        let big = lcm(l, self.conductor);
        let p_big = OnceLock::new();
        let mut count = 0;
        for (j, iv) in self.enclosures().iter().enumerate() {
            let stacked: Vec<Vec<CInterval>> = p_iv.iter().chain(iv).cloned().collect();
            if interval_det(&stacked).excludes_zero() {
                continue;
            }
            let pb: &Subspace = p_big.get_or_init(|| p.embed(big).expect("divides lcm"));
            let zj = self.graph_planes()[j].embed(big)?;
            if pb.meets_nontrivially(&zj)? {
                count += 1;
            }
        }
        Ok(count)
    }
}

/// See [`ZetaPlanes::meet_count`].
pub fn plane_meet_count(p: &Subspace, m: u32) -> Result<usize> {
    ZetaPlanes::shared(m).meet_count(p)
}

/// The phase of `y/x` for a vector of `R^4 = C^2`. Since `|y/x|` is usually
/// irrational the ratio itself is kept together with its squared modulus;
/// phases are compared with [`same_phase`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhaseValue {
    Undefined,
    Defined { ratio: CycNum, modulus_sq: CycNum },
}

impl PhaseValue {
    pub fn is_defined(&self) -> bool {
        matches!(self, PhaseValue::Defined { .. })
    }
}

/// `y(u)/x(u)` with `x = u1 + i u2`, `y = u3 + i u4`; undefined when either
/// coordinate vanishes.
pub fn phase_ratio(u: &[CycNum]) -> Result<PhaseValue> {
    if u.len() != 4 {
        return Err(Error::Dimension(format!(
            "phase needs a vector of R^4, got length {}",
            u.len()
        )));
    }
    let l0 = u[0].conductor();
    if let Some(bad) = u.iter().find(|e| e.conductor() != l0) {
        return Err(Error::ConductorMismatch(l0, bad.conductor()));
    }
    let l = lcm(4, l0);
    let u: Vec<CycNum> = u.iter().map(|e| e.embed(l)).collect::<Result<_>>()?;
    let i = CycNum::imaginary_unit(l)?;
    let x = &u[0] + &(&i * &u[1]);
    let y = &u[2] + &(&i * &u[3]);
    if x.is_zero() || y.is_zero() {
        return Ok(PhaseValue::Undefined);
    }
    let ratio = y.checked_div(&x)?;
    let modulus_sq = &ratio * &ratio.conj();
    Ok(PhaseValue::Defined { ratio, modulus_sq })
}

/// Exact phase equality: `z1 · conj(z2)` is a positive real number.
pub fn same_phase(a: &PhaseValue, b: &PhaseValue) -> Result<bool> {
    match (a, b) {
        (PhaseValue::Undefined, PhaseValue::Undefined) => Ok(true),
        (PhaseValue::Defined { ratio: z1, .. }, PhaseValue::Defined { ratio: z2, .. }) => {
            let l = lcm(z1.conductor(), z2.conductor());
            let w = &z1.embed(l)? * &z2.embed(l)?.conj();
            Ok(w.is_real() && w.real_sign()? == std::cmp::Ordering::Greater)
        }
        _ => Ok(false),
    }
}

fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(-10..=10), rng.gen_range(1..=10))
}

fn nonzero_pair<R: Rng>(rng: &mut R) -> (Rational, Rational) {
    loop {
        let (a, b) = (small_rational(rng), small_rational(rng));
        if !a.is_zero() || !b.is_zero() {
            return (a, b);
        }
    }
}

/// A random plane `span(v, w)` with `v ∈ {y=0}`, `w ∈ {x=0}` both nonzero,
/// coordinates of height at most 10. Returns `(v, w, plane)`.
pub fn sample_coordinate_plane<R: Rng>(rng: &mut R, conductor: u32) -> (Vec<CycNum>, Vec<CycNum>, Subspace) {
    let c = |r: Rational| CycNum::from_rational(conductor, r);
    let z = || CycNum::zero(conductor);
    let (a, b) = nonzero_pair(rng);
    let (p, q) = nonzero_pair(rng);
    let v = vec![c(a), c(b), z(), z()];
    let w = vec![z(), z(), c(p), c(q)];
    let plane = Subspace::from_spanning(4, conductor, vec![v.clone(), w.clone()]).expect("well formed");
    (v, w, plane)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaneClass {
    V1,
    V2,
    MeetsBoth,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneVerdict {
    pub plane: Subspace,
    pub class: PlaneClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DichotomyReport {
    pub holds: bool,
    pub v1: usize,
    pub v2: usize,
    pub meets_both: usize,
    pub planes: Vec<PlaneVerdict>,
}

/// For a reflection group preserving `V1 = span(e1,e2)` and
/// `V2 = span(e3,e4)`: every plane of its reflection arrangement equals `V1`,
/// equals `V2`, or meets each of them in a line.
pub fn structural_dichotomy_check(w: &MatrixGroup) -> Result<DichotomyReport> {
    let arr = reflection_arrangement(w)?;
    if w.ambient() != 4 {
        return Err(Error::FactorStructure(format!(
            "ambient dimension {} is not 4",
            w.ambient()
        )));
    }
    for g in w.generators() {
        let off = (0..2).any(|i| (2..4).any(|j| !g.get(i, j).is_zero() || !g.get(j, i).is_zero()));
        if off {
            return Err(Error::FactorStructure(
                "a generator mixes the blocks span(e1,e2) and span(e3,e4)".into(),
            ));
        }
    }
    let l = w.conductor();
    let (v1, v2) = (y_zero(l), x_zero(l));
    let planes: Vec<PlaneVerdict> = arr
        .of_dim(2)
        .map(|p| {
            let class = if *p == v1 {
                PlaneClass::V1
            } else if *p == v2 {
                PlaneClass::V2
            } else if p.intersect(&v1).expect("same ambient").dim() == 1
                && p.intersect(&v2).expect("same ambient").dim() == 1
            {
                PlaneClass::MeetsBoth
            } else {
                PlaneClass::Neither
            };
            PlaneVerdict {
                plane: p.clone(),
                class,
            }
        })
        .collect();
    let count = |c: PlaneClass| planes.iter().filter(|v| v.class == c).count();
    Ok(DichotomyReport {
        holds: count(PlaneClass::Neither) == 0,
        v1: count(PlaneClass::V1),
        v2: count(PlaneClass::V2),
        meets_both: count(PlaneClass::MeetsBoth),
        planes,
    })
}
