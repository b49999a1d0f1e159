use std::fmt;

use serde::{Deserialize, Serialize};

use super::MatrixF;
use crate::cyclo::CycNum;
use crate::{Error, Result};

/// Reduced row echelon form in place. Pivots are chosen by leftmost column,
/// then lowest row index, and normalised to 1; zero rows are dropped.
/// Returns the pivot columns.
pub(crate) fn rref(rows: &mut Vec<Vec<CycNum>>, ncols: usize) -> Vec<usize> {
    rows.retain(|r| r.iter().any(|e| !e.is_zero()));
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        if !rows[r][col].is_one() {
            let inv = rows[r][col].inv().expect("pivot is nonzero");
            for e in rows[r][col..].iter_mut() {
                if !e.is_zero() {
                    *e = &*e * &inv;
                }
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, rest) = tail.split_first_mut().expect("row r exists");
        for other in head.iter_mut().chain(rest.iter_mut()) {
            let f = other[col].clone();
            if f.is_zero() {
                continue;
            }
            for (o, p) in other[col..].iter_mut().zip(&pivot_row[col..]) {
                if !p.is_zero() {
                    *o = &*o - &(&f * p);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Rank by fraction-free elimination: no inversions, only products.
pub(crate) fn rank_of_rows(mut rows: Vec<Vec<CycNum>>, ncols: usize) -> usize {
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pv = &pivot_row[col];
        for other in tail.iter_mut() {
            let f = other[col].clone();
            if f.is_zero() {
                continue;
            }
            for j in col..ncols {
                let a = if other[j].is_zero() {
                    other[j].clone()
                } else {
                    pv * &other[j]
                };
                let b = if pivot_row[j].is_zero() {
                    pivot_row[j].clone()
                } else {
                    &f * &pivot_row[j]
                };
                other[j] = &a - &b;
            }
        }
        r += 1;
    }
    r
}

/// Null space of the row span of an RREF matrix, one vector per free column.
fn null_vectors(rref_rows: &[Vec<CycNum>], pivots: &[usize], ncols: usize, conductor: u32) -> Vec<Vec<CycNum>> {
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![CycNum::zero(conductor); ncols];
            v[free] = CycNum::one(conductor);
            for (row, &p) in rref_rows.iter().zip(pivots) {
                v[p] = -&row[free];
            }
            v
        })
        .collect()
}

/// A linear subspace of `F^n` stored by its canonical RREF basis. Two
/// subspaces over the same field are equal as sets iff they compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    conductor: u32,
    basis: Vec<Vec<CycNum>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize, conductor: u32) -> Self {
        Subspace {
            ambient,
            conductor,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize, conductor: u32) -> Self {
        Self::from_spanning(ambient, conductor, MatrixF::identity(ambient, conductor).row_vecs())
            .expect("identity rows are well formed")
    }

    /// Canonical form of the span of `rows`.
    pub fn from_spanning(ambient: usize, conductor: u32, mut rows: Vec<Vec<CycNum>>) -> Result<Self> {
        for r in &rows {
            if r.len() != ambient {
                return Err(Error::Dimension(format!(
                    "vector of length {} in ambient dimension {ambient}",
                    r.len()
                )));
            }
            if let Some(e) = r.iter().find(|e| e.conductor() != conductor) {
                return Err(Error::ConductorMismatch(conductor, e.conductor()));
            }
        }
        let pivots = rref(&mut rows, ambient);
        Ok(Subspace {
            ambient,
            conductor,
            basis: rows,
            pivots,
        })
    }

    /// Kernel (right null space) of `m`.
    pub fn kernel(m: &MatrixF) -> Subspace {
        let mut rows = m.row_vecs();
        let pivots = rref(&mut rows, m.cols());
        let null = null_vectors(&rows, &pivots, m.cols(), m.conductor());
        Self::from_spanning(m.cols(), m.conductor(), null).expect("null vectors are well formed")
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<CycNum>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::Dimension(format!(
                "ambient dimensions {} and {} differ",
                self.ambient, other.ambient
            )));
        }
        if self.conductor != other.conductor {
            return Err(Error::ConductorMismatch(self.conductor, other.conductor));
        }
        Ok(())
    }

    pub fn contains_vector(&self, v: &[CycNum]) -> bool {
        debug_assert_eq!(v.len(), self.ambient);
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let f = r[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, b) in r.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x = &*x - &(&f * b);
                }
            }
        }
        r.iter().all(CycNum::is_zero)
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check(other)?;
        Ok(other.dim() <= self.dim() && other.basis.iter().all(|v| self.contains_vector(v)))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        if self.is_zero() || other.is_full() {
            return Ok(self.clone());
        }
        if other.is_zero() || self.is_full() {
            return Ok(other.clone());
        }
        let (small, big) = if self.dim() <= other.dim() {
            (self, other)
        } else {
            (other, self)
        };
        if big.contains(small)? {
            return Ok(small.clone());
        }
        if small.dim() == 1 {
            return Ok(Self::zero(self.ambient, self.conductor));
        }
        if self.dim() + other.dim() <= self.ambient {
            let stacked: Vec<_> = self.basis.iter().chain(&other.basis).cloned().collect();
            if rank_of_rows(stacked, self.ambient) == self.dim() + other.dim() {
                return Ok(Self::zero(self.ambient, self.conductor));
            }
        }
        let mut rows = self.annihilator_rows();
        rows.extend(other.annihilator_rows());
        let pivots = rref(&mut rows, self.ambient);
        let null = null_vectors(&rows, &pivots, self.ambient, self.conductor);
        Self::from_spanning(self.ambient, self.conductor, null)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        if self.contains(other)? {
            return Ok(self.clone());
        }
        if other.contains(self)? {
            return Ok(other.clone());
        }
        let rows = self.basis.iter().chain(&other.basis).cloned().collect();
        Self::from_spanning(self.ambient, self.conductor, rows)
    }

    /// `dim(self ∩ other) ≥ 1`.
    pub fn meets_nontrivially(&self, other: &Subspace) -> Result<bool> {
        self.check(other)?;
        if self.dim() + other.dim() > self.ambient {
            return Ok(true);
        }
        let stacked: Vec<_> = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(rank_of_rows(stacked, self.ambient) < self.dim() + other.dim())
    }

    /// Rows spanning `{x : x·b = 0 for all basis vectors b}` (bilinear, no
    /// conjugation), read directly off the RREF.
    pub fn annihilator_rows(&self) -> Vec<Vec<CycNum>> {
        null_vectors(&self.basis, &self.pivots, self.ambient, self.conductor)
    }

    pub fn annihilator(&self) -> Subspace {
        Self::from_spanning(self.ambient, self.conductor, self.annihilator_rows())
            .expect("annihilator rows are well formed")
    }

    pub fn embed(&self, conductor: u32) -> Result<Subspace> {
        let basis = self
            .basis
            .iter()
            .map(|r| r.iter().map(|e| e.embed(conductor)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        // Embedding is injective and preserves 0/1, so the RREF stays canonical.
        Ok(Subspace {
            ambient: self.ambient,
            conductor,
            basis,
            pivots: self.pivots.clone(),
        })
    }

    /// Set equality for subspaces whose canonical forms may live in different
    /// cyclotomic fields (RREF is unique, so entries must agree as numbers).
    pub fn same_set(&self, other: &Subspace) -> bool {
        if self.conductor == other.conductor {
            return self == other;
        }
        self.ambient == other.ambient
            && self.pivots == other.pivots
            && self
                .basis
                .iter()
                .flatten()
                .zip(other.basis.iter().flatten())
                .all(|(a, b)| a.same_value(b))
    }

    /// Whether `g` maps this subspace into itself.
    pub fn is_invariant_under(&self, g: &MatrixF) -> Result<bool> {
        for v in &self.basis {
            if !self.contains_vector(&g.mul_vec(v)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether every vector is fixed by `g`.
    pub fn is_fixed_by(&self, g: &MatrixF) -> Result<bool> {
        for v in &self.basis {
            if g.mul_vec(v)? != *v {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Standard bilinear orthogonality of two subspaces.
    pub fn is_orthogonal_to(&self, other: &Subspace) -> Result<bool> {
        self.check(other)?;
        Ok(self.basis.iter().all(|u| {
            other.basis.iter().all(|v| {
                u.iter()
                    .zip(v)
                    .fold(CycNum::zero(self.conductor), |acc, (a, b)| &acc + &(a * b))
                    .is_zero()
            })
        }))
    }

    /// Order used for stable, diffable output: dimension, then basis.
    pub fn output_cmp(&self, other: &Subspace) -> std::cmp::Ordering {
        self.dim()
            .cmp(&other.dim())
            .then_with(|| self.conductor.cmp(&other.conductor))
            .then_with(|| self.basis.cmp(&other.basis))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}", self.dim(), self.ambient)?;
        for r in &self.basis {
            let row: Vec<String> = r.iter().map(|e| e.to_string()).collect();
            write!(f, "; [{}]", row.join(", "))?;
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceJson {
    ambient: usize,
    conductor: u32,
    basis: Vec<Vec<CycNum>>,
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SubspaceJson {
            ambient: self.ambient,
            conductor: self.conductor,
            basis: self.basis.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = SubspaceJson::deserialize(d)?;
        Subspace::from_spanning(j.ambient, j.conductor, j.basis).map_err(serde::de::Error::custom)
    }
}
