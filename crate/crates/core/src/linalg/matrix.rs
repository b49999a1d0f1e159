use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclo::CycNum;
use crate::{Error, Result};

/// Dense row-major matrix over a single cyclotomic field.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixF {
    rows: usize,
    cols: usize,
    conductor: u32,
    data: Vec<CycNum>,
}

impl MatrixF {
    pub fn new(rows: usize, cols: usize, data: Vec<CycNum>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("matrix must be at least 1x1".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        let conductor = data[0].conductor();
        if let Some(bad) = data.iter().find(|e| e.conductor() != conductor) {
            return Err(Error::ConductorMismatch(conductor, bad.conductor()));
        }
        Ok(MatrixF {
            rows,
            cols,
            conductor,
            data,
        })
    }

    pub fn zeros(rows: usize, cols: usize, conductor: u32) -> Self {
        MatrixF {
            rows,
            cols,
            conductor,
            data: vec![CycNum::zero(conductor); rows * cols],
        }
    }

    pub fn identity(n: usize, conductor: u32) -> Self {
        let mut m = Self::zeros(n, n, conductor);
        for i in 0..n {
            m.data[i * n + i] = CycNum::one(conductor);
        }
        m
    }

    /// Convenience constructor from small integer rows.
    pub fn from_int_rows(conductor: u32, rows: &[&[i64]]) -> Self {
        let cols = rows[0].len();
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                r.iter().map(|&x| CycNum::from_int(conductor, x))
            })
            .collect();
        Self::new(rows.len(), cols, data).expect("valid integer matrix")
    }

    pub fn from_rows(rows: Vec<Vec<CycNum>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[CycNum] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNum {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycNum) {
        assert_eq!(v.conductor(), self.conductor, "entry conductor mismatch");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[CycNum] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<CycNum>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.conductor != other.conductor {
            return Err(Error::ConductorMismatch(self.conductor, other.conductor));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        self.check_field(other)?;
        let zero = CycNum::zero(self.conductor);
        let mut data = vec![zero; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let a_one = a.is_one();
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let slot = &mut data[i * other.cols + j];
                    *slot = if a_one { &*slot + b } else { &*slot + &(a * b) };
                }
            }
        }
        Ok(MatrixF {
            rows: self.rows,
            cols: other.cols,
            conductor: self.conductor,
            data,
        })
    }

    pub fn mul_vec(&self, v: &[CycNum]) -> Result<Vec<CycNum>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(CycNum::zero(self.conductor), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension("subtraction of differently shaped matrices".into()));
        }
        self.check_field(other)?;
        Ok(MatrixF {
            rows: self.rows,
            cols: self.cols,
            conductor: self.conductor,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn transpose(&self) -> Self {
        let data = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        MatrixF {
            rows: self.cols,
            cols: self.rows,
            conductor: self.conductor,
            data,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// `g - I`, whose kernel is the fixed space of `g`.
    pub fn minus_identity(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("fixed spaces need a square matrix".into()));
        }
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = &m.data[i * self.cols + i] - &CycNum::one(self.conductor);
            m.data[i * self.cols + i] = v;
        }
        Ok(m)
    }

    pub fn embed(&self, conductor: u32) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|e| e.embed(conductor))
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixF {
            rows: self.rows,
            cols: self.cols,
            conductor,
            data,
        })
    }

    /// Block-diagonal matrix with `self` in the upper left and `other` below.
    pub fn block_diag(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        let mut m = Self::zeros(r, c, self.conductor);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[i * c + j] = self.get(i, j).clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.data[(i + self.rows) * c + j + self.cols] = other.get(i, j).clone();
            }
        }
        Ok(m)
    }

    /// Rank by fraction-free elimination (no field inversions).
    pub fn rank(&self) -> usize {
        super::subspace::rank_of_rows(self.row_vecs(), self.cols)
    }
}

impl fmt::Debug for MatrixF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "MatrixF {}x{} over Q(zeta_{}) [",
            self.rows, self.cols, self.conductor
        )?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<CycNum>,
}

impl Serialize for MatrixF {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.data.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixF {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        MatrixF::new(j.rows, j.cols, j.entries).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::realify;

    fn rot90() -> MatrixF {
        MatrixF::from_int_rows(1, &[&[0, -1], &[1, 0]])
    }

    #[test]
    fn identity_is_neutral() {
        let m = MatrixF::from_int_rows(1, &[&[1, 2, 0, 0], &[3, 4, 0, 1], &[0, 0, 5, 6], &[7, 0, 0, 8]]);
        assert_eq!(MatrixF::identity(4, 1).mul(&m).unwrap(), m);
        assert_eq!(m.mul(&MatrixF::identity(4, 1)).unwrap(), m);
    }

    #[test]
    fn quarter_turns_compose_to_minus_identity() {
        let r = rot90().mul(&rot90()).unwrap();
        assert_eq!(r, MatrixF::from_int_rows(1, &[&[-1, 0], &[0, -1]]));
    }

    #[test]
    fn realified_order_three_element() {
        let z3 = CycNum::zeta_power(12, 4);
        let g = MatrixF::new(2, 2, vec![z3, CycNum::zero(12), CycNum::zero(12), CycNum::one(12)]).unwrap();
        let r = realify(&g).unwrap();
        assert!(!r.is_identity());
        let cube = r.mul(&r).unwrap().mul(&r).unwrap();
        assert!(cube.is_identity());
    }

    #[test]
    fn shape_errors() {
        let a = MatrixF::identity(2, 1);
        let b = MatrixF::identity(3, 1);
        assert!(matches!(a.mul(&b), Err(Error::Dimension(_))));
        assert!(matches!(a.sub(&b), Err(Error::Dimension(_))));
        assert!(matches!(
            a.mul(&MatrixF::identity(2, 4)),
            Err(Error::ConductorMismatch(1, 4))
        ));
        assert!(MatrixF::new(2, 2, vec![CycNum::one(1)]).is_err());
    }

    #[test]
    fn transpose_and_rank() {
        let m = MatrixF::from_int_rows(1, &[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(m.transpose().rows(), 3);
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(m.rank(), 1);
        assert_eq!(MatrixF::identity(4, 5).rank(), 4);
    }

    #[test]
    fn json_roundtrip() {
        let m = rot90();
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.starts_with(r#"{"rows":2,"cols":2,"entries":[{"conductor":1,"coeffs":["0/1"]}"#));
        assert_eq!(serde_json::from_str::<MatrixF>(&s).unwrap(), m);
    }
}
