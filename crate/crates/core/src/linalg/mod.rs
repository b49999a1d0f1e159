//! Exact linear algebra over a single cyclotomic field.

mod matrix;
mod subspace;

pub use matrix::MatrixF;
pub use subspace::Subspace;

use crate::cyclo::{CycNum, Interval};

/// Certified enclosure of a complex number as a box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CInterval {
    pub re: Interval,
    pub im: Interval,
}

#[allow(clippy::should_implement_trait)]
impl CInterval {
    pub const ZERO: CInterval = CInterval {
        re: Interval::ZERO,
        im: Interval::ZERO,
    };

    pub fn of(x: &CycNum) -> Self {
        if let Some(r) = x.as_rational() {
            return CInterval {
                re: Interval::from_rational(r),
                im: Interval::ZERO,
            };
        }
        CInterval {
            re: x.re_interval(),
            im: x.im_interval(),
        }
    }

    pub fn add(self, o: Self) -> Self {
        CInterval {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    pub fn sub(self, o: Self) -> Self {
        CInterval {
            re: self.re.sub(o.re),
            im: self.im.sub(o.im),
        }
    }

    pub fn mul(self, o: Self) -> Self {
        CInterval {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    /// True when the enclosed value is certainly nonzero.
    pub fn excludes_zero(&self) -> bool {
        !self.re.contains_zero() || !self.im.contains_zero()
    }
}

pub fn interval_vec(v: &[CycNum]) -> Vec<CInterval> {
    v.iter().map(CInterval::of).collect()
}

pub fn interval_dot(a: &[CInterval], b: &[CInterval]) -> CInterval {
    a.iter().zip(b).fold(CInterval::ZERO, |acc, (x, y)| acc.add(x.mul(*y)))
}

/// Determinant enclosure by cofactor expansion along the first row; fine for
/// the 4x4 and smaller matrices this crate deals with.
pub fn interval_det(m: &[Vec<CInterval>]) -> CInterval {
    match m.len() {
        0 => CInterval {
            re: Interval { lo: 1.0, hi: 1.0 },
            im: Interval::ZERO,
        },
        1 => m[0][0],
        2 => m[0][0].mul(m[1][1]).sub(m[0][1].mul(m[1][0])),
        n => {
            let mut acc = CInterval::ZERO;
            for j in 0..n {
                let minor: Vec<Vec<CInterval>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| *x).collect())
                    .collect();
                let term = m[0][j].mul(interval_det(&minor));
                acc = if j % 2 == 0 { acc.add(term) } else { acc.sub(term) };
            }
            acc
        }
    }
}
