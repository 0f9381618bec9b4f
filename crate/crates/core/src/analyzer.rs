//! The termination decision procedure for one-variable loops.
//!
//! A loop has an infinite trace iff it has a cycle or a self-avoiding trace.
//! Cycles are complete at length two, so two small integer feasibility
//! checks settle them. Self-avoiding traces are decided from the recession
//! cone of the transition polyhedron, with a case label recording
//! which branch decided.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{
    column, height, integer_point_1d, integer_point_2d, Height, Interval, LatticeError,
    DEFAULT_SCAN_LIMIT,
};
use crate::poly2::{ConeClass, Constraint, HPoly, IVec2, MWDecomp, Poly2Error};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyzerError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("verdict is not non-terminating; no witness trace exists")]
    NotNonTerminating,
    #[error("witness trace could not be extended past state {state}")]
    ExtensionFailed { state: BigInt },
}

impl From<Poly2Error> for AnalyzerError {
    fn from(e: Poly2Error) -> Self {
        AnalyzerError::Lattice(LatticeError::Poly(e))
    }
}

/// Which recession-cone shape decided the self-avoiding question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConeCase {
    /// Two non-collinear generators.
    Wedge,
    /// A single ray.
    Ray,
    /// A line through the origin.
    Line,
    /// Zero cone, half-plane or plane.
    Degenerate,
}

impl ConeCase {
    fn code(self) -> &'static str {
        match self {
            ConeCase::Wedge => "5.2",
            ConeCase::Ray => "5.3",
            ConeCase::Line => "5.4",
            ConeCase::Degenerate => "5.5",
        }
    }

    fn max_case(self) -> u8 {
        match self {
            ConeCase::Wedge => 6,
            ConeCase::Ray | ConeCase::Line => 10,
            ConeCase::Degenerate => 2,
        }
    }
}

/// Stable label of the branch that produced a verdict. Renders as
/// `L5.2.1` … `L5.5.2`, `CYCLE` or `EMPTY`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    Empty,
    Cycle,
    Branch { cone: ConeCase, case: u8 },
}

impl CaseLabel {
    pub fn branch(cone: ConeCase, case: u8) -> Self {
        assert!((1..=cone.max_case()).contains(&case), "case {case} out of range for {cone:?}");
        CaseLabel::Branch { cone, case }
    }

    /// True for the two branches that need the reachability conjecture.
    pub fn is_conjecture_case(self) -> bool {
        matches!(
            self,
            CaseLabel::Branch { cone: ConeCase::Ray, case: 3 }
                | CaseLabel::Branch { cone: ConeCase::Line, case: 2 }
        )
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseLabel::Empty => f.write_str("EMPTY"),
            CaseLabel::Cycle => f.write_str("CYCLE"),
            CaseLabel::Branch { cone, case } => write!(f, "L{}.{}", cone.code(), case),
        }
    }
}

fn label(cone: ConeCase, case: u8) -> CaseLabel {
    CaseLabel::branch(cone, case)
}

/// A cycle of length one or two: `(s, s)` or both `(s1, s2)` and `(s2, s1)`
/// are integer transitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    pub states: Vec<BigInt>,
}

impl CycleWitness {
    pub fn verify(&self, p: &HPoly) -> bool {
        let n = self.states.len();
        (1..=2).contains(&n)
            && (0..n).all(|i| p.contains_int(&self.states[i], &self.states[(i + 1) % n]))
    }
}

/// How a self-avoiding trace continues from its seed transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceKind {
    /// `x -> x + (b - a)` for the seed `(a, b)`; valid because the diagonal
    /// direction lies in the recession cone.
    Shift,
    /// Greedy extension, each step strictly increasing `|x|`.
    Grow(Growth),
    /// `x_{i+1} = lo - x_i` and `hi - x_i` alternately, for loops whose
    /// integer points are `lo <= x + x' <= hi`.
    Alternate { lo: BigInt, hi: BigInt },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Growth {
    /// Positive states, strictly increasing.
    Increasing,
    /// Negative states, strictly decreasing.
    Decreasing,
    /// Signs alternate while the absolute value increases.
    Alternating,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceSeed {
    pub start: (BigInt, BigInt),
    pub kind: TraceKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Cycle(CycleWitness),
    Trace(TraceSeed),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Terminating { label: CaseLabel },
    NonTerminating { label: CaseLabel, witness: Witness },
    /// Terminates iff the reachability conjecture holds for the embedded
    /// weak Collatz mapping.
    Unknown { label: CaseLabel },
}

impl Verdict {
    pub fn label(&self) -> CaseLabel {
        match self {
            Verdict::Terminating { label }
            | Verdict::NonTerminating { label, .. }
            | Verdict::Unknown { label } => *label,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Terminating { .. } => "terminating",
            Verdict::NonTerminating { .. } => "non-terminating",
            Verdict::Unknown { .. } => "unknown",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.name(), self.label())
    }
}

/// Which open regions of the plane a cone meets.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RegionFlags {
    /// `0 < x1 < x2`
    pub meets_i_plus: bool,
    /// `x2 < x1 < 0`
    pub meets_i_minus: bool,
    /// `0 < x1 = x2`
    pub meets_delta_plus: bool,
    /// `x1 = x2 < 0`
    pub meets_delta_minus: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    IPlus,
    IMinus,
}

pub fn cone_regions(c: &ConeClass) -> RegionFlags {
    // cl(I+) = {x1 >= 0, x2 >= x1}; cl(I-) = {x1 <= 0, x2 <= x1}
    let meets_open = |normals: [IVec2; 2], inside: fn(&IVec2) -> bool| {
        match c.intersect(&ConeClass::from_normals(normals)) {
            ConeClass::Zero => false,
            ConeClass::Ray(r) => inside(&r),
            // A two-dimensional subcone of cl(I±) has interior inside I±.
            _ => true,
        }
    };
    RegionFlags {
        meets_i_plus: meets_open([IVec2::new(-1, 0), IVec2::new(1, -1)], |r| {
            r.x1.is_positive() && r.x1 < r.x2
        }),
        meets_i_minus: meets_open([IVec2::new(1, 0), IVec2::new(-1, 1)], |r| {
            r.x1.is_negative() && r.x2 < r.x1
        }),
        meets_delta_plus: c.contains(&IVec2::new(1, 1)),
        meets_delta_minus: c.contains(&IVec2::new(-1, -1)),
    }
}

/// Outcome of the self-avoiding-trace case analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SelfAvoiding {
    Yes(CaseLabel, TraceSeed),
    No(CaseLabel),
    /// "No" provided the reachability conjecture holds.
    ConjectureNo(CaseLabel),
}

impl SelfAvoiding {
    pub fn label(&self) -> CaseLabel {
        match self {
            SelfAvoiding::Yes(l, _) | SelfAvoiding::No(l) | SelfAvoiding::ConjectureNo(l) => *l,
        }
    }
}

const MAX_RESTARTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Analyzer {
    pub scan_limit: u64,
}

impl Default for Analyzer {
    fn default() -> Self {
        Analyzer { scan_limit: DEFAULT_SCAN_LIMIT }
    }
}

impl Analyzer {
    pub fn new(scan_limit: u64) -> Self {
        Analyzer { scan_limit }
    }

    /// Smallest-magnitude integer `s` with `(s, s)` in `p`.
    pub fn cycle1(&self, p: &HPoly) -> Option<BigInt> {
        let mut diagonal = Interval::full();
        for c in &p.constraints {
            diagonal.restrict(&(&c.a1 + &c.a2), &c.b);
        }
        integer_point_1d(&diagonal)
    }

    /// Integers `(s1, s2)` with both `(s1, s2)` and `(s2, s1)` in `p`.
    pub fn cycle2(&self, p: &HPoly) -> Result<Option<(BigInt, BigInt)>, AnalyzerError> {
        Ok(integer_point_2d(&p.intersect(&p.swap()), self.scan_limit)?)
    }

    pub fn find_cycle(&self, p: &HPoly) -> Result<Option<CycleWitness>, AnalyzerError> {
        if let Some(s) = self.cycle1(p) {
            return Ok(Some(CycleWitness { states: vec![s] }));
        }
        Ok(self.cycle2(p)?.map(|(a, b)| {
            let states = if a == b { vec![a] } else { vec![a, b] };
            CycleWitness { states }
        }))
    }

    pub fn has_cycle(&self, p: &HPoly) -> Result<bool, AnalyzerError> {
        Ok(self.find_cycle(p)?.is_some())
    }

    /// An integer point of `p` in `region` with `|x| >= min_abs`.
    pub fn region_point(
        &self,
        p: &HPoly,
        region: Region,
        min_abs: &BigInt,
    ) -> Result<Option<(BigInt, BigInt)>, AnalyzerError> {
        let rows = match region {
            // x >= k, x' >= x + 1
            Region::IPlus => [Constraint::new(-1, 0, -min_abs), Constraint::new(1, -1, -1)],
            // x <= -k, x' <= x - 1
            Region::IMinus => [Constraint::new(1, 0, -min_abs), Constraint::new(-1, 1, -1)],
        };
        self.point_with(p, rows)
    }

    pub fn region_feasible(&self, p: &HPoly, region: Region) -> Result<bool, AnalyzerError> {
        Ok(self.region_point(p, region, &BigInt::one())?.is_some())
    }

    fn point_with(
        &self,
        p: &HPoly,
        rows: [Constraint; 2],
    ) -> Result<Option<(BigInt, BigInt)>, AnalyzerError> {
        Ok(integer_point_2d(&p.intersect(&HPoly::new(rows.to_vec())), self.scan_limit)?)
    }

    /// Seed transition for greedy growth with every state at least `min_abs` in magnitude.
    fn growth_seed(
        &self,
        p: &HPoly,
        growth: Growth,
        min_abs: &BigInt,
    ) -> Result<Option<(BigInt, BigInt)>, AnalyzerError> {
        match growth {
            Growth::Increasing => self.region_point(p, Region::IPlus, min_abs),
            Growth::Decreasing => self.region_point(p, Region::IMinus, min_abs),
            Growth::Alternating => {
                // x >= k, x' <= -x - 1
                let plus = [Constraint::new(-1, 0, -min_abs), Constraint::new(1, 1, -1)];
                if let Some(pt) = self.point_with(p, plus)? {
                    return Ok(Some(pt));
                }
                // x <= -k, x' >= -x + 1
                let minus = [Constraint::new(1, 0, -min_abs), Constraint::new(-1, -1, -1)];
                self.point_with(p, minus)
            }
        }
    }

    fn grow(&self, p: &HPoly, l: CaseLabel, growth: Growth) -> Result<SelfAvoiding, AnalyzerError> {
        match self.growth_seed(p, growth, &BigInt::one())? {
            Some(start) => Ok(SelfAvoiding::Yes(l, TraceSeed { start, kind: TraceKind::Grow(growth) })),
            None => Err(AnalyzerError::ExtensionFailed { state: BigInt::zero() }),
        }
    }

    fn shift(&self, p: &HPoly, l: CaseLabel, no: CaseLabel, regions: &[Region]) -> Result<SelfAvoiding, AnalyzerError> {
        for &r in regions {
            if let Some(start) = self.region_point(p, r, &BigInt::one())? {
                return Ok(SelfAvoiding::Yes(l, TraceSeed { start, kind: TraceKind::Shift }));
            }
        }
        Ok(SelfAvoiding::No(no))
    }

    /// Case analysis on the recession cone of a nonempty loop without cycles.
    /// `d` must be the decomposition of `p`.
    pub fn decide_self_avoiding(&self, p: &HPoly, d: &MWDecomp) -> Result<SelfAvoiding, AnalyzerError> {
        use ConeCase::*;
        match &d.cone {
            ConeClass::Zero => Ok(SelfAvoiding::No(label(Degenerate, 2))),
            c @ (ConeClass::Plane | ConeClass::HalfPlane { .. }) => {
                let growth = if cone_regions(c).meets_i_plus { Growth::Increasing } else { Growth::Decreasing };
                self.grow(p, label(Degenerate, 1), growth)
            }
            ConeClass::Ray(v) => self.ray_case(p, d, v),
            ConeClass::Line(v) => self.line_case(p, d, v),
            c @ ConeClass::Pointed2(..) => {
                let flags = cone_regions(c);
                if flags.meets_i_plus {
                    self.grow(p, label(Wedge, 1), Growth::Increasing)
                } else if flags.meets_i_minus {
                    self.grow(p, label(Wedge, 1), Growth::Decreasing)
                } else if flags.meets_delta_plus {
                    self.shift(p, label(Wedge, 3), label(Wedge, 6), &[Region::IPlus])
                } else if flags.meets_delta_minus {
                    self.shift(p, label(Wedge, 5), label(Wedge, 4), &[Region::IMinus])
                } else {
                    Ok(SelfAvoiding::No(label(Wedge, 2)))
                }
            }
        }
    }

    fn ray_case(&self, p: &HPoly, d: &MWDecomp, v: &IVec2) -> Result<SelfAvoiding, AnalyzerError> {
        use ConeCase::Ray;
        let (a, b) = (&v.x1, &v.x2);
        if a.signum() != b.signum() {
            return Ok(SelfAvoiding::No(label(Ray, 2)));
        }
        if a.abs() > b.abs() {
            return Ok(SelfAvoiding::No(label(Ray, 6)));
        }
        if a.is_one() && b.is_one() {
            return self.shift(p, label(Ray, 7), label(Ray, 8), &[Region::IPlus]);
        }
        if (-a).is_one() && (-b).is_one() {
            return self.shift(p, label(Ray, 9), label(Ray, 10), &[Region::IMinus]);
        }
        let period = a.abs();
        let h = thin_height(p, d, &period)?;
        if h >= period {
            let growth = if a.is_positive() { Growth::Increasing } else { Growth::Decreasing };
            self.grow(p, label(Ray, 1), growth)
        } else if h.is_zero() {
            Ok(SelfAvoiding::No(label(Ray, 5)))
        } else if h.is_one() {
            Ok(SelfAvoiding::No(label(Ray, 4)))
        } else {
            Ok(SelfAvoiding::ConjectureNo(label(Ray, 3)))
        }
    }

    fn line_case(&self, p: &HPoly, d: &MWDecomp, v: &IVec2) -> Result<SelfAvoiding, AnalyzerError> {
        use ConeCase::Line;
        let (a, b) = (&v.x1, &v.x2);
        if a.is_zero() {
            return Ok(SelfAvoiding::No(label(Line, 10)));
        }
        if *a > b.abs() {
            return Ok(SelfAvoiding::No(label(Line, 5)));
        }
        if a == b {
            return self.shift(p, label(Line, 6), label(Line, 7), &[Region::IPlus, Region::IMinus]);
        }
        if *a == -b {
            // All columns are integer translates of column 0: lo <= x + x' <= hi.
            let Some((Some(lo), Some(hi))) = column(p, &BigInt::zero()).integer_range() else {
                return Ok(SelfAvoiding::No(label(Line, 9)));
            };
            if &hi - &lo + 1 < BigInt::from(2) {
                return Ok(SelfAvoiding::No(label(Line, 9)));
            }
            let s1 = (BigInt::from(2) * lo.abs()).max(BigInt::one());
            let start = (s1.clone(), &lo - &s1);
            return Ok(SelfAvoiding::Yes(
                label(Line, 8),
                TraceSeed { start, kind: TraceKind::Alternate { lo, hi } },
            ));
        }
        let h = thin_height(p, d, a)?;
        if h >= *a {
            let growth = if b.is_positive() { Growth::Increasing } else { Growth::Alternating };
            self.grow(p, label(Line, 1), growth)
        } else if h.is_zero() {
            Ok(SelfAvoiding::No(label(Line, 4)))
        } else if h.is_one() {
            Ok(SelfAvoiding::No(label(Line, 3)))
        } else {
            Ok(SelfAvoiding::ConjectureNo(label(Line, 2)))
        }
    }

    pub fn decide(&self, p: &HPoly, assume_conjecture: bool) -> Result<Verdict, AnalyzerError> {
        if p.is_empty() {
            return Ok(Verdict::Terminating { label: CaseLabel::Empty });
        }
        if let Some(c) = self.find_cycle(p)? {
            return Ok(Verdict::NonTerminating { label: CaseLabel::Cycle, witness: Witness::Cycle(c) });
        }
        let d = p.decompose()?;
        Ok(match self.decide_self_avoiding(p, &d)? {
            SelfAvoiding::Yes(label, seed) => Verdict::NonTerminating { label, witness: Witness::Trace(seed) },
            SelfAvoiding::No(label) => Verdict::Terminating { label },
            SelfAvoiding::ConjectureNo(label) if assume_conjecture => Verdict::Terminating { label },
            SelfAvoiding::ConjectureNo(label) => Verdict::Unknown { label },
        })
    }

    /// A trace of `len` states of a non-terminating loop; every transition
    /// is checked against `p`.
    pub fn witness_trace(&self, p: &HPoly, v: &Verdict, len: usize) -> Result<Vec<BigInt>, AnalyzerError> {
        let Verdict::NonTerminating { witness, .. } = v else {
            return Err(AnalyzerError::NotNonTerminating);
        };
        let trace = match witness {
            Witness::Cycle(c) => c.states.iter().cycle().take(len).cloned().collect(),
            Witness::Trace(seed) => match &seed.kind {
                TraceKind::Shift => {
                    let step = &seed.start.1 - &seed.start.0;
                    let mut x = seed.start.0.clone();
                    let mut out = Vec::with_capacity(len);
                    for _ in 0..len {
                        out.push(x.clone());
                        x += &step;
                    }
                    out
                }
                TraceKind::Alternate { lo, hi } => {
                    let mut x = seed.start.0.clone();
                    let mut out = Vec::with_capacity(len);
                    for i in 0..len {
                        out.push(x.clone());
                        x = if i % 2 == 0 { lo - &x } else { hi - &x };
                    }
                    out
                }
                TraceKind::Grow(g) => self.greedy_trace(p, &seed.start, *g, len)?,
            },
        };
        for w in trace.windows(2) {
            if !p.contains_int(&w[0], &w[1]) {
                return Err(AnalyzerError::ExtensionFailed { state: w[0].clone() });
            }
        }
        Ok(trace)
    }

    fn greedy_trace(
        &self,
        p: &HPoly,
        start: &(BigInt, BigInt),
        growth: Growth,
        len: usize,
    ) -> Result<Vec<BigInt>, AnalyzerError> {
        let mut trace = vec![start.0.clone(), start.1.clone()];
        let mut restarts = 0;
        while trace.len() < len {
            let x = trace.last().expect("trace is never empty");
            if let Some(y) = successor(p, x, growth) {
                trace.push(y);
                continue;
            }
            // Stuck below the threshold where growth is always possible;
            // reseed further out.
            restarts += 1;
            let reach = trace.iter().map(|s| s.abs()).max().unwrap_or_default() + 1;
            let seed = match self.growth_seed(p, growth, &reach)? {
                Some(seed) if restarts <= MAX_RESTARTS => seed,
                _ => return Err(AnalyzerError::ExtensionFailed { state: x.clone() }),
            };
            trace = vec![seed.0, seed.1];
        }
        trace.truncate(len);
        Ok(trace)
    }
}

fn thin_height(p: &HPoly, d: &MWDecomp, period: &BigInt) -> Result<BigInt, AnalyzerError> {
    match height(p, d, period)? {
        Height::Finite(h) => Ok(h),
        Height::Infinite => unreachable!("ray and line cones without a vertical direction have bounded columns"),
    }
}

/// The successor of `x` closest to it that keeps growing `|x|` in the
/// direction `growth` prescribes.
fn successor(p: &HPoly, x: &BigInt, growth: Growth) -> Option<BigInt> {
    let mut col = column(p, x);
    let one = BigInt::one();
    let take_low = match growth {
        Growth::Increasing => {
            col.raise_lo((x + &one).into());
            true
        }
        Growth::Decreasing => {
            col.lower_hi((x - &one).into());
            false
        }
        Growth::Alternating if x.is_positive() => {
            col.lower_hi((-x - &one).into());
            false
        }
        Growth::Alternating if x.is_negative() => {
            col.raise_lo((-x + &one).into());
            true
        }
        Growth::Alternating => return None,
    };
    let (lo, hi) = col.integer_range()?;
    if take_low { lo } else { hi }
}

pub fn cycle1(p: &HPoly) -> Option<BigInt> {
    Analyzer::default().cycle1(p)
}

pub fn cycle2(p: &HPoly) -> Result<Option<(BigInt, BigInt)>, AnalyzerError> {
    Analyzer::default().cycle2(p)
}

pub fn has_cycle(p: &HPoly) -> Result<bool, AnalyzerError> {
    Analyzer::default().has_cycle(p)
}

pub fn region_feasible(p: &HPoly, region: Region) -> Result<bool, AnalyzerError> {
    Analyzer::default().region_feasible(p, region)
}

pub fn decide_self_avoiding(p: &HPoly, d: &MWDecomp) -> Result<SelfAvoiding, AnalyzerError> {
    Analyzer::default().decide_self_avoiding(p, d)
}

pub fn decide(p: &HPoly, assume_conjecture: bool) -> Result<Verdict, AnalyzerError> {
    Analyzer::default().decide(p, assume_conjecture)
}

pub fn witness_trace(p: &HPoly, v: &Verdict, len: usize) -> Result<Vec<BigInt>, AnalyzerError> {
    Analyzer::default().witness_trace(p, v, len)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn successor_line() -> HPoly {
        HPoly::from_rows(&[(1, -1, -1), (-1, 1, 1)])
    }

    fn example_loop() -> HPoly {
        HPoly::from_rows(&[(4, -3, 2), (-4, 3, -1), (-1, 0, -3)])
    }

    fn fig1a() -> HPoly {
        HPoly::from_rows(&[(2, 1, 4), (1, -1, 2), (-3, -2, 4), (-1, 3, 5)])
    }

    fn identity() -> HPoly {
        HPoly::from_rows(&[(1, -1, 0), (-1, 1, 0)])
    }

    fn anti_diagonal() -> HPoly {
        HPoly::from_rows(&[(1, 1, 1), (-1, -1, -1)])
    }

    #[test]
    fn labels_render_stably() {
        assert_eq!(label(ConeCase::Ray, 3).to_string(), "L5.3.3");
        assert_eq!(label(ConeCase::Wedge, 1).to_string(), "L5.2.1");
        assert_eq!(CaseLabel::Cycle.to_string(), "CYCLE");
        assert_eq!(CaseLabel::Empty.to_string(), "EMPTY");
        assert!(label(ConeCase::Line, 2).is_conjecture_case());
        assert!(!label(ConeCase::Line, 3).is_conjecture_case());
    }

    #[test]
    #[should_panic]
    fn label_case_range_is_checked() {
        label(ConeCase::Degenerate, 3);
    }

    #[test]
    fn one_cycles() {
        assert_eq!(cycle1(&identity()), Some(b(0)));
        assert_eq!(cycle1(&successor_line()), None);
        assert_eq!(cycle1(&fig1a()), Some(b(0)));
    }

    #[test]
    fn two_cycles() {
        assert_eq!(cycle2(&anti_diagonal()).unwrap(), Some((b(0), b(1))));
        assert_eq!(cycle2(&example_loop()).unwrap(), None);
        assert_eq!(cycle2(&identity()).unwrap(), Some((b(0), b(0))));
    }

    #[test]
    fn cycle_existence() {
        assert!(has_cycle(&fig1a()).unwrap());
        assert!(!has_cycle(&successor_line()).unwrap());
        assert!(!has_cycle(&example_loop()).unwrap());
    }

    #[test]
    fn regions_of_cones() {
        let f = cone_regions(&ConeClass::Ray(IVec2::new(3, 4)));
        assert_eq!(f, RegionFlags { meets_i_plus: true, ..Default::default() });
        let f = cone_regions(&ConeClass::Line(IVec2::new(1, 1)));
        assert_eq!(
            f,
            RegionFlags { meets_delta_plus: true, meets_delta_minus: true, ..Default::default() }
        );
        let f = cone_regions(&ConeClass::pointed(IVec2::new(1, 1), IVec2::new(1, -1)));
        assert_eq!(f, RegionFlags { meets_delta_plus: true, ..Default::default() });
        let f = cone_regions(&ConeClass::Plane);
        assert!(f.meets_i_plus && f.meets_i_minus && f.meets_delta_plus && f.meets_delta_minus);
        let f = cone_regions(&ConeClass::Ray(IVec2::new(0, 1)));
        assert_eq!(f, RegionFlags::default());
        let f = cone_regions(&ConeClass::pointed(IVec2::new(0, 1), IVec2::new(1, 1)));
        assert!(f.meets_i_plus && f.meets_delta_plus && !f.meets_i_minus);
    }

    #[test]
    fn region_feasibility() {
        assert!(region_feasible(&example_loop(), Region::IPlus).unwrap());
        assert!(!region_feasible(&HPoly::from_rows(&[(1, 1, 0), (-1, -1, 0)]), Region::IPlus).unwrap());
        assert!(region_feasible(&HPoly::plane(), Region::IMinus).unwrap());
    }

    #[test]
    fn self_avoiding_cases() {
        let p = successor_line();
        let d = p.decompose().unwrap();
        assert_eq!(decide_self_avoiding(&p, &d).unwrap().label(), label(ConeCase::Line, 6));

        let p = example_loop();
        let d = p.decompose().unwrap();
        assert_eq!(
            decide_self_avoiding(&p, &d).unwrap(),
            SelfAvoiding::ConjectureNo(label(ConeCase::Ray, 3))
        );

        let thin = HPoly::from_rows(&[(4, -3, 1), (-4, 3, -1), (-1, 0, -3)]);
        let d = thin.decompose().unwrap();
        assert_eq!(decide_self_avoiding(&thin, &d).unwrap(), SelfAvoiding::No(label(ConeCase::Ray, 4)));
    }

    #[test]
    fn verdicts() {
        let v = decide(&successor_line(), false).unwrap();
        assert_eq!(v.to_string(), "non-terminating L5.4.6");
        assert_eq!(decide(&successor_line(), true).unwrap(), v);

        assert_eq!(decide(&example_loop(), false).unwrap(), Verdict::Unknown { label: label(ConeCase::Ray, 3) });
        assert_eq!(
            decide(&example_loop(), true).unwrap(),
            Verdict::Terminating { label: label(ConeCase::Ray, 3) }
        );
        assert_eq!(
            decide(&identity(), false).unwrap(),
            Verdict::NonTerminating {
                label: CaseLabel::Cycle,
                witness: Witness::Cycle(CycleWitness { states: vec![b(0)] })
            }
        );
        let empty = HPoly::from_rows(&[(1, 0, 0), (-1, 0, -1)]);
        assert_eq!(decide(&empty, false).unwrap(), Verdict::Terminating { label: CaseLabel::Empty });
    }

    #[test]
    fn traces() {
        let p = successor_line();
        let v = decide(&p, false).unwrap();
        assert_eq!(witness_trace(&p, &v, 5).unwrap(), [1, 2, 3, 4, 5].map(b).to_vec());

        let p = anti_diagonal();
        let v = decide(&p, false).unwrap();
        assert_eq!(witness_trace(&p, &v, 4).unwrap(), [0, 1, 0, 1].map(b).to_vec());

        // -1 <= x + x' <= 0; swap-symmetric strips always have 2-cycles, so
        // the alternation branch is exercised directly
        let p = HPoly::from_rows(&[(1, 1, 0), (-1, -1, 1)]);
        let d = p.decompose().unwrap();
        let SelfAvoiding::Yes(label_, seed) = decide_self_avoiding(&p, &d).unwrap() else {
            panic!("expected a self-avoiding trace");
        };
        assert_eq!(label_, label(ConeCase::Line, 8));
        let v = Verdict::NonTerminating { label: label_, witness: Witness::Trace(seed) };
        assert_eq!(witness_trace(&p, &v, 5).unwrap(), [2, -3, 3, -4, 4].map(b).to_vec());

        let v = decide(&example_loop(), false).unwrap();
        assert_eq!(witness_trace(&example_loop(), &v, 5), Err(AnalyzerError::NotNonTerminating));
    }

    #[test]
    fn alternation_from_zero_offset_stays_self_avoiding() {
        // 0 <= x + x' <= 1: starting at 2|lo| = 0 would revisit 0
        let p = HPoly::from_rows(&[(1, 1, 1), (-1, -1, 0)]);
        let d = p.decompose().unwrap();
        let SelfAvoiding::Yes(l, seed) = decide_self_avoiding(&p, &d).unwrap() else {
            panic!("expected a self-avoiding trace");
        };
        let v = Verdict::NonTerminating { label: l, witness: Witness::Trace(seed) };
        let t = witness_trace(&p, &v, 20).unwrap();
        assert!(t.windows(2).all(|w| w[0].abs() < w[1].abs() || w[0].abs() == w[1].abs() && w[0] > w[1]));
        let mut seen = t.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), t.len());
    }

    #[test]
    fn growth_traces_for_thick_loops() {
        let thick = HPoly::from_rows(&[(4, -3, 2), (-4, 3, 0), (-1, 0, -3)]);
        let v = decide(&thick, false).unwrap();
        assert_eq!(v.label(), label(ConeCase::Ray, 1));
        let t = witness_trace(&thick, &v, 50).unwrap();
        assert_eq!(t.len(), 50);
        assert!(t.windows(2).all(|w| w[0] < w[1]));

        // x' = 1 - 2x: alternating growth along a line
        let p = HPoly::from_rows(&[(2, 1, 1), (-2, -1, -1)]);
        let v = decide(&p, false).unwrap();
        assert_eq!(v.label(), label(ConeCase::Line, 1));
        let t = witness_trace(&p, &v, 30).unwrap();
        assert!(t.windows(2).all(|w| w[0].abs() < w[1].abs() && w[0].signum() != w[1].signum()));
    }

    #[test]
    fn growth_restarts_past_stuck_prefix() {
        // Wedge toward I-, stuck near zero: x' <= 0 with x <= 5
        let p = HPoly::from_rows(&[(0, 1, 0), (1, 0, 5)]);
        let v = decide(&p, false).unwrap();
        assert!(matches!(v, Verdict::NonTerminating { .. }));
        let t = witness_trace(&p, &v, 40).unwrap();
        assert_eq!(t.len(), 40);
    }
}
