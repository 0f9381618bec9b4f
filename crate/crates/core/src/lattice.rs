//! Integer feasibility and vertical-slice queries on planar polyhedra.
//!
//! Every query reduces to columns: the slice of a polyhedron at an integer
//! `x = z` is an interval of `x'`, and the recession cone tells which finite
//! window of columns is representative of all of them.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poly2::{int, ConeClass, HPoly, IVec2, MWDecomp, Poly2Error, Rat};

pub const DEFAULT_SCAN_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("integer search would scan more than {limit} columns")]
    ScanLimitExceeded { limit: u64 },
    #[error("recession cone has a vertical direction; height is infinite")]
    VerticalRecession,
    #[error("height is only defined here for zero, ray or line recession cones")]
    ConeNotThin,
    #[error(transparent)]
    Poly(#[from] Poly2Error),
}

/// A closed interval of the real line; either end may be infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Option<Rat>,
    hi: Option<Rat>,
    empty: bool,
}

impl Interval {
    pub fn full() -> Self {
        Interval { lo: None, hi: None, empty: false }
    }

    pub fn empty() -> Self {
        Interval { lo: None, hi: None, empty: true }
    }

    pub fn new(lo: Option<Rat>, hi: Option<Rat>) -> Self {
        let mut iv = Interval { lo, hi, empty: false };
        iv.normalize();
        iv
    }

    pub fn closed(lo: Rat, hi: Rat) -> Self {
        Interval::new(Some(lo), Some(hi))
    }

    pub fn lo(&self) -> Option<&Rat> {
        self.lo.as_ref()
    }

    pub fn hi(&self) -> Option<&Rat> {
        self.hi.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn is_bounded(&self) -> bool {
        self.empty || (self.lo.is_some() && self.hi.is_some())
    }

    pub fn contains(&self, x: &Rat) -> bool {
        !self.empty
            && self.lo.as_ref().is_none_or(|l| l <= x)
            && self.hi.as_ref().is_none_or(|h| x <= h)
    }

    pub fn raise_lo(&mut self, bound: Rat) {
        if self.lo.as_ref().is_none_or(|l| *l < bound) {
            self.lo = Some(bound);
        }
        self.normalize();
    }

    pub fn lower_hi(&mut self, bound: Rat) {
        if self.hi.as_ref().is_none_or(|h| bound < *h) {
            self.hi = Some(bound);
        }
        self.normalize();
    }

    /// Intersects with `{x : coeff·x <= rhs}`.
    pub fn restrict(&mut self, coeff: &BigInt, rhs: &BigInt) {
        if self.empty {
            return;
        }
        if coeff.is_zero() {
            if rhs.is_negative() {
                *self = Interval::empty();
            }
            return;
        }
        let bound = Rat::new(rhs.clone(), coeff.clone());
        if coeff.is_positive() {
            self.lower_hi(bound);
        } else {
            self.raise_lo(bound);
        }
    }

    /// Integers inside the interval as an inclusive range; `None` ends are unbounded.
    pub fn integer_range(&self) -> Option<(Option<BigInt>, Option<BigInt>)> {
        if self.empty {
            return None;
        }
        let lo = self.lo.as_ref().map(|l| l.ceil().to_integer());
        let hi = self.hi.as_ref().map(|h| h.floor().to_integer());
        match (&lo, &hi) {
            (Some(l), Some(h)) if l > h => None,
            _ => Some((lo, hi)),
        }
    }

    fn normalize(&mut self) {
        if self.empty {
            self.lo = None;
            self.hi = None;
        } else if let (Some(l), Some(h)) = (&self.lo, &self.hi) {
            if l > h {
                *self = Interval::empty();
            }
        }
    }
}

/// Number of points of `(1/p)ℤ` in a slice, or the supremum of such counts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Height {
    Finite(BigInt),
    Infinite,
}

impl Height {
    pub fn finite(n: impl Into<BigInt>) -> Self {
        Height::Finite(n.into())
    }

    pub fn value(&self) -> Option<&BigInt> {
        match self {
            Height::Finite(n) => Some(n),
            Height::Infinite => None,
        }
    }
}

impl std::fmt::Display for Height {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Height::Finite(n) => write!(f, "{n}"),
            Height::Infinite => write!(f, "inf"),
        }
    }
}

/// The integer of smallest absolute value in `iv`, preferring the
/// nonnegative one on ties.
pub fn integer_point_1d(iv: &Interval) -> Option<BigInt> {
    let (lo, hi) = iv.integer_range()?;
    let zero = BigInt::zero();
    if lo.as_ref().is_some_and(|l| *l > zero) {
        lo
    } else if hi.as_ref().is_some_and(|h| *h < zero) {
        hi
    } else {
        Some(zero)
    }
}

/// The slice `{x' : (z, x') ∈ p}`.
pub fn column(p: &HPoly, z: &BigInt) -> Interval {
    let mut iv = Interval::full();
    for c in &p.constraints {
        iv.restrict(&c.a2, &(&c.b - &c.a1 * z));
        if iv.is_empty() {
            break;
        }
    }
    iv
}

pub fn count_fractions(iv: &Interval, p: &BigInt) -> Height {
    if iv.is_empty() {
        return Height::finite(0);
    }
    let (Some(lo), Some(hi)) = (iv.lo(), iv.hi()) else {
        return Height::Infinite;
    };
    let scale = int(p.clone());
    let first = (lo * &scale).ceil().to_integer();
    let last = (hi * &scale).floor().to_integer();
    Height::Finite((last - first + BigInt::one()).max(BigInt::zero()))
}

/// Inclusive integer range; `None` ends are unbounded.
type ColumnRange = (Option<BigInt>, Option<BigInt>);

/// Integer columns that represent every column of `p` up to integer
/// translation. The range is unbounded only for two-dimensional cones.
fn representative_columns(p: &HPoly, d: Option<&MWDecomp>) -> Result<Option<ColumnRange>, LatticeError> {
    let Some((zlo, zhi)) = p.x_projection().integer_range() else {
        return Ok(None);
    };
    if zlo.is_some() && zhi.is_some() {
        return Ok(Some((zlo, zhi)));
    }
    let owned;
    let d = match d {
        Some(d) => d,
        None => {
            owned = p.decompose()?;
            &owned
        }
    };
    let one = BigInt::one();
    Ok(Some(match &d.cone {
        // Beyond the vertices, column z + a is column z shifted by the
        // integer b, so one period of columns past the vertices suffices.
        ConeClass::Ray(v) if v.x1.is_positive() => {
            let end = d.max_vertex_x1().ceil().to_integer() + &v.x1 - &one;
            (zlo, Some(end))
        }
        ConeClass::Ray(v) => {
            let start = d.min_vertex_x1().floor().to_integer() + &v.x1 + &one;
            (Some(start), zhi)
        }
        // Every column is a translate of one of the first |a|.
        ConeClass::Line(v) => (Some(BigInt::zero()), Some(v.x1.abs() - &one)),
        _ => (zlo, zhi),
    }))
}

/// Integers of `[lo, hi]` ordered by distance from the point of the range
/// nearest to zero; upward first on ties.
pub struct OutwardColumns {
    center: BigInt,
    lo: Option<BigInt>,
    hi: Option<BigInt>,
    offset: BigInt,
    upward: bool,
}

impl OutwardColumns {
    pub fn new(lo: Option<BigInt>, hi: Option<BigInt>) -> Self {
        let mut center = BigInt::zero();
        if let Some(l) = &lo {
            center = center.max(l.clone());
        }
        if let Some(h) = &hi {
            center = center.min(h.clone());
        }
        OutwardColumns { center, lo, hi, offset: BigInt::zero(), upward: true }
    }
}

impl Iterator for OutwardColumns {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        loop {
            let up = &self.center + &self.offset;
            let down = &self.center - &self.offset;
            let up_ok = self.hi.as_ref().is_none_or(|h| up <= *h);
            let down_ok = self.lo.as_ref().is_none_or(|l| down >= *l);
            if !up_ok && !down_ok {
                return None;
            }
            if self.upward {
                self.upward = false;
                if self.offset.is_zero() {
                    self.offset += 1;
                    self.upward = true;
                }
                if up_ok {
                    return Some(up);
                }
            } else {
                self.upward = true;
                self.offset += 1;
                if down_ok {
                    return Some(down);
                }
            }
        }
    }
}

/// Supremum over integer `z` of the number of points of `(1/pp)ℤ` in the
/// slice of `p` at `z`. `d` must be the decomposition of `p`.
pub fn height(p: &HPoly, d: &MWDecomp, pp: &BigInt) -> Result<Height, LatticeError> {
    let vertical = [IVec2::new(0, 1), IVec2::new(0, -1)];
    match &d.cone {
        ConeClass::Zero => {}
        ConeClass::Ray(v) | ConeClass::Line(v) if v.x1.is_zero() => {
            return Err(LatticeError::VerticalRecession)
        }
        ConeClass::Ray(_) | ConeClass::Line(_) => {}
        c if vertical.iter().any(|v| c.contains(v)) => return Err(LatticeError::VerticalRecession),
        _ => return Err(LatticeError::ConeNotThin),
    }
    let Some((lo, hi)) = representative_columns(p, Some(d))? else {
        return Ok(Height::finite(0));
    };
    let mut best = Height::finite(0);
    for z in OutwardColumns::new(lo, hi) {
        best = best.max(count_fractions(&column(p, &z), pp));
    }
    Ok(best)
}

/// Some integer point of `p`, or `None` when `p` has none.
///
/// Bounded projections are scanned column by column. Ray and line cones
/// reduce to a finite window of columns by periodicity. Two-dimensional
/// cones always contain integer points because column widths grow without
/// bound; the scan then runs outward until one is found.
pub fn integer_point_2d(p: &HPoly, scan_limit: u64) -> Result<Option<(BigInt, BigInt)>, LatticeError> {
    let Some((lo, hi)) = representative_columns(p, None)? else {
        return Ok(None);
    };
    for (visited, z) in (1u64..).zip(OutwardColumns::new(lo, hi)) {
        if visited > scan_limit {
            return Err(LatticeError::ScanLimitExceeded { limit: scan_limit });
        }
        if let Some(y) = integer_point_1d(&column(p, &z)) {
            return Ok(Some((z, y)));
        }
    }
    Ok(None)
}
