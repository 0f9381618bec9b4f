//! Exact rational geometry of transition polyhedra in the plane.
//!
//! A transition polyhedron is stored in H-representation as integer rows
//! `a1·x + a2·x' <= b`. Everything here is exact: emptiness by variable
//! elimination, vertices by pairwise boundary intersection, and the
//! recession cone by classifying the homogeneous system `a1·v1 + a2·v2 <= 0`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::Interval;

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Poly2Error {
    #[error("polyhedron is empty")]
    EmptyPolyhedron,
    #[error("zero vector has no primitive direction")]
    ZeroVector,
}

pub fn rat(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rat {
    Rat::new(num.into(), den.into())
}

pub fn int(n: impl Into<BigInt>) -> Rat {
    Rat::from_integer(n.into())
}

/// A rational point of the plane, `(x, x')`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec2 {
    pub x1: Rat,
    pub x2: Rat,
}

impl Vec2 {
    pub fn new(x1: Rat, x2: Rat) -> Self {
        Vec2 { x1, x2 }
    }

    pub fn from_ints(x1: impl Into<BigInt>, x2: impl Into<BigInt>) -> Self {
        Vec2 { x1: int(x1), x2: int(x2) }
    }

    pub fn is_zero(&self) -> bool {
        self.x1.is_zero() && self.x2.is_zero()
    }

    pub fn swapped(&self) -> Vec2 {
        Vec2::new(self.x2.clone(), self.x1.clone())
    }
}

impl From<&IVec2> for Vec2 {
    fn from(v: &IVec2) -> Self {
        Vec2::new(int(v.x1.clone()), int(v.x2.clone()))
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x1, self.x2)
    }
}

/// An integer vector; used for cone generators and constraint normals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IVec2 {
    pub x1: BigInt,
    pub x2: BigInt,
}

impl IVec2 {
    pub fn new(x1: impl Into<BigInt>, x2: impl Into<BigInt>) -> Self {
        IVec2 { x1: x1.into(), x2: x2.into() }
    }

    pub fn is_zero(&self) -> bool {
        self.x1.is_zero() && self.x2.is_zero()
    }

    pub fn dot(&self, other: &IVec2) -> BigInt {
        &self.x1 * &other.x1 + &self.x2 * &other.x2
    }

    pub fn dot_rat(&self, p: &Vec2) -> Rat {
        int(self.x1.clone()) * &p.x1 + int(self.x2.clone()) * &p.x2
    }

    /// z-component of the 3D cross product.
    pub fn cross(&self, other: &IVec2) -> BigInt {
        &self.x1 * &other.x2 - &self.x2 * &other.x1
    }

    pub fn neg(&self) -> IVec2 {
        IVec2::new(-&self.x1, -&self.x2)
    }

    /// Counter-clockwise rotation by a quarter turn.
    pub fn perp(&self) -> IVec2 {
        IVec2::new(-&self.x2, self.x1.clone())
    }

    pub fn swapped(&self) -> IVec2 {
        IVec2::new(self.x2.clone(), self.x1.clone())
    }

    pub fn add(&self, other: &IVec2) -> IVec2 {
        IVec2::new(&self.x1 + &other.x1, &self.x2 + &other.x2)
    }

    /// Divides out the gcd of the components. The zero vector is returned unchanged.
    pub fn reduced(&self) -> IVec2 {
        let g = self.x1.gcd(&self.x2);
        if g.is_zero() {
            return self.clone();
        }
        IVec2::new(&self.x1 / &g, &self.x2 / &g)
    }

    pub fn is_primitive(&self) -> bool {
        self.x1.gcd(&self.x2).is_one()
    }
}

impl fmt::Display for IVec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x1, self.x2)
    }
}

/// The unique primitive integer vector on the open ray through `v`.
pub fn primitive(v: &Vec2) -> Result<IVec2, Poly2Error> {
    if v.is_zero() {
        return Err(Poly2Error::ZeroVector);
    }
    let l = v.x1.denom().lcm(v.x2.denom());
    let scaled = IVec2::new(
        v.x1.numer() * (&l / v.x1.denom()),
        v.x2.numer() * (&l / v.x2.denom()),
    );
    Ok(scaled.reduced())
}

/// One row `a1·x + a2·x' <= b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub a1: BigInt,
    pub a2: BigInt,
    pub b: BigInt,
}

impl Constraint {
    pub fn new(a1: impl Into<BigInt>, a2: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Constraint { a1: a1.into(), a2: a2.into(), b: b.into() }
    }

    pub fn normal(&self) -> IVec2 {
        IVec2::new(self.a1.clone(), self.a2.clone())
    }

    pub fn lhs(&self, pt: &Vec2) -> Rat {
        self.normal().dot_rat(pt)
    }

    pub fn holds(&self, pt: &Vec2) -> bool {
        self.lhs(pt) <= int(self.b.clone())
    }

    pub fn holds_int(&self, x: &BigInt, y: &BigInt) -> bool {
        &self.a1 * x + &self.a2 * y <= self.b
    }

    pub fn swapped(&self) -> Constraint {
        Constraint::new(self.a2.clone(), self.a1.clone(), self.b.clone())
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.a1, self.a2, self.b)
    }
}

/// Transition polyhedron in H-representation. Redundant and duplicate rows
/// are kept as given.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct HPoly {
    pub constraints: Vec<Constraint>,
}

impl HPoly {
    pub fn new(constraints: Vec<Constraint>) -> Self {
        HPoly { constraints }
    }

    /// No rows: the whole plane.
    pub fn plane() -> Self {
        HPoly::default()
    }

    pub fn from_rows(rows: &[(i64, i64, i64)]) -> Self {
        HPoly::new(rows.iter().map(|&(a1, a2, b)| Constraint::new(a1, a2, b)).collect())
    }

    pub fn with(mut self, c: Constraint) -> Self {
        self.constraints.push(c);
        self
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn contains(&self, pt: &Vec2) -> bool {
        self.constraints.iter().all(|c| c.holds(pt))
    }

    pub fn contains_int(&self, x: &BigInt, y: &BigInt) -> bool {
        self.constraints.iter().all(|c| c.holds_int(x, y))
    }

    /// Projection onto the first coordinate, by eliminating `x'`.
    pub fn x_projection(&self) -> Interval {
        let mut iv = Interval::full();
        let (mut lower, mut upper) = (Vec::new(), Vec::new());
        for c in &self.constraints {
            match c.a2.sign() {
                num_bigint::Sign::Plus => upper.push(c),
                num_bigint::Sign::Minus => lower.push(c),
                num_bigint::Sign::NoSign => iv.restrict(&c.a1, &c.b),
            }
        }
        // x' >= (a1_l·x - b_l)/α and x' <= (b_u - a1_u·x)/β combine to
        // (β·a1_l + α·a1_u)·x <= α·b_u + β·b_l.
        for l in &lower {
            let alpha = -&l.a2;
            for u in &upper {
                let beta = &u.a2;
                let coeff = beta * &l.a1 + &alpha * &u.a1;
                let rhs = &alpha * &u.b + beta * &l.b;
                iv.restrict(&coeff, &rhs);
            }
        }
        iv
    }

    pub fn is_empty(&self) -> bool {
        self.x_projection().is_empty()
    }

    /// Rows of both polyhedra; the point set is the intersection.
    pub fn intersect(&self, other: &HPoly) -> HPoly {
        let mut constraints = self.constraints.clone();
        constraints.extend(other.constraints.iter().cloned());
        HPoly::new(constraints)
    }

    /// Exchanges the roles of `x` and `x'`.
    pub fn swap(&self) -> HPoly {
        HPoly::new(self.constraints.iter().map(Constraint::swapped).collect())
    }

    pub fn recession_cone(&self) -> Result<ConeClass, Poly2Error> {
        if self.is_empty() {
            return Err(Poly2Error::EmptyPolyhedron);
        }
        Ok(ConeClass::from_normals(self.constraints.iter().map(Constraint::normal)))
    }

    pub fn decompose(&self) -> Result<MWDecomp, Poly2Error> {
        let cone = self.recession_cone()?;
        let mut vertices = match &cone {
            ConeClass::Plane => vec![Vec2::from_ints(0, 0)],
            ConeClass::HalfPlane { .. } | ConeClass::Line(_) => self.lineality_anchors(),
            _ => self.pointed_vertices(),
        };
        vertices.sort();
        vertices.dedup();
        debug_assert!(!vertices.is_empty());
        let vertex_bound = vertices
            .iter()
            .flat_map(|v| [v.x1.abs(), v.x2.abs()])
            .max()
            .unwrap_or_else(Rat::zero);
        Ok(MWDecomp { vertices, cone, vertex_bound })
    }

    fn pointed_vertices(&self) -> Vec<Vec2> {
        let rows: Vec<&Constraint> =
            self.constraints.iter().filter(|c| !c.normal().is_zero()).collect();
        let mut out = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            for s in &rows[i + 1..] {
                if let Some(pt) = boundary_intersection(r, s) {
                    if self.contains(&pt) {
                        out.push(pt);
                    }
                }
            }
        }
        out
    }

    /// Canonical points on the boundary lines when every nonzero normal is
    /// collinear (half-plane or strip). One point per distinct boundary line,
    /// taken at `x = 0` unless the line is vertical.
    fn lineality_anchors(&self) -> Vec<Vec2> {
        let rows: Vec<&Constraint> =
            self.constraints.iter().filter(|c| !c.normal().is_zero()).collect();
        let n = rows[0].normal().reduced();
        let mut hi: Option<Rat> = None;
        let mut lo: Option<Rat> = None;
        for r in rows {
            // (a1, a2) = s·n with integer s != 0.
            let s = if n.x1.is_zero() { &r.a2 / &n.x2 } else { &r.a1 / &n.x1 };
            let bound = rat(r.b.clone(), s.clone());
            if s.is_positive() {
                hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
            } else {
                lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
            }
        }
        [lo, hi]
            .into_iter()
            .flatten()
            .map(|c| {
                if n.x2.is_zero() {
                    Vec2::new(c / int(n.x1.clone()), Rat::zero())
                } else {
                    Vec2::new(Rat::zero(), c / int(n.x2.clone()))
                }
            })
            .collect()
    }
}

fn boundary_intersection(r: &Constraint, s: &Constraint) -> Option<Vec2> {
    let det = &r.a1 * &s.a2 - &r.a2 * &s.a1;
    if det.is_zero() {
        return None;
    }
    let x = rat(&r.b * &s.a2 - &r.a2 * &s.b, det.clone());
    let y = rat(&r.a1 * &s.b - &r.b * &s.a1, det);
    Some(Vec2::new(x, y))
}

impl fmt::Display for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.constraints.iter().map(|c| format!("[{c}]")).collect();
        write!(f, "{{{}}}", rows.join(", "))
    }
}

/// Direction of a line, normalised so the first component is positive,
/// or the vector is `(0, 1)`.
fn canonical_line(v: &IVec2) -> IVec2 {
    let v = v.reduced();
    if v.x1.is_negative() || (v.x1.is_zero() && v.x2.is_negative()) {
        v.neg()
    } else {
        v
    }
}

/// The class of a closed convex cone in the plane, with primitive integer
/// generators in canonical form. Two equal cones always compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConeClass {
    Zero,
    Ray(IVec2),
    /// Both `v` and `-v`; `v` normalised by [`canonical_line`].
    Line(IVec2),
    /// Closed half-plane bounded by the line through `boundary`, containing
    /// `interior_witness` strictly inside.
    HalfPlane { boundary: IVec2, interior_witness: IVec2 },
    /// `nonneg(v1, v2)` with `v2` counter-clockwise from `v1`.
    Pointed2(IVec2, IVec2),
    Plane,
}

const AXES: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

impl ConeClass {
    /// Classifies `{v : n·v <= 0 for every n}`.
    pub fn from_normals(normals: impl IntoIterator<Item = IVec2>) -> ConeClass {
        let mut ns: Vec<IVec2> =
            normals.into_iter().filter(|n| !n.is_zero()).map(|n| n.reduced()).collect();
        ns.sort();
        ns.dedup();
        let Some(first) = ns.first().cloned() else {
            return ConeClass::Plane;
        };
        if ns.iter().all(|n| n.cross(&first).is_zero()) {
            let boundary = canonical_line(&first.perp());
            if ns.iter().any(|n| *n == first.neg()) {
                return ConeClass::Line(boundary);
            }
            let interior_witness = AXES
                .iter()
                .map(|&(a, b)| IVec2::new(a, b))
                .find(|w| first.dot(w).is_negative())
                .expect("some axis direction is strictly inside any half-plane");
            return ConeClass::HalfPlane { boundary, interior_witness };
        }
        // Normals span the plane, so the cone is pointed and its extreme rays
        // lie on constraint boundaries.
        let mut rays: Vec<IVec2> = ns
            .iter()
            .flat_map(|n| [n.perp(), n.perp().neg()])
            .filter(|r| ns.iter().all(|n| !n.dot(r).is_positive()))
            .collect();
        rays.sort();
        rays.dedup();
        match rays.len() {
            0 => ConeClass::Zero,
            1 => ConeClass::Ray(rays.pop().unwrap()),
            2 => ConeClass::pointed(rays[0].clone(), rays[1].clone()),
            n => unreachable!("pointed planar cone with {n} extreme rays"),
        }
    }

    /// Builds `nonneg(a, b)` for non-collinear `a`, `b`, ordering them counter-clockwise.
    pub fn pointed(a: IVec2, b: IVec2) -> ConeClass {
        let (a, b) = (a.reduced(), b.reduced());
        match a.cross(&b).sign() {
            num_bigint::Sign::Plus => ConeClass::Pointed2(a, b),
            num_bigint::Sign::Minus => ConeClass::Pointed2(b, a),
            num_bigint::Sign::NoSign => panic!("pointed cone needs non-collinear generators"),
        }
    }

    /// An H-representation `{v : n·v <= 0}` of this cone.
    pub fn normals(&self) -> Vec<IVec2> {
        match self {
            ConeClass::Zero => AXES.iter().map(|&(a, b)| IVec2::new(a, b)).collect(),
            ConeClass::Ray(v) => vec![v.perp(), v.perp().neg(), v.neg()],
            ConeClass::Line(v) => vec![v.perp(), v.perp().neg()],
            ConeClass::HalfPlane { boundary, interior_witness } => {
                let n = boundary.perp();
                if n.dot(interior_witness).is_negative() {
                    vec![n]
                } else {
                    vec![n.neg()]
                }
            }
            ConeClass::Pointed2(v1, v2) => {
                let n1 = if v1.perp().dot(v2).is_negative() { v1.perp() } else { v1.perp().neg() };
                let n2 = if v2.perp().dot(v1).is_negative() { v2.perp() } else { v2.perp().neg() };
                vec![n1, n2]
            }
            ConeClass::Plane => Vec::new(),
        }
    }

    pub fn contains(&self, v: &IVec2) -> bool {
        self.normals().iter().all(|n| !n.dot(v).is_positive())
    }

    pub fn contains_rat(&self, v: &Vec2) -> bool {
        self.normals().iter().all(|n| !n.dot_rat(v).is_positive())
    }

    /// Generators whose conic hull is this cone.
    pub fn generators(&self) -> Vec<IVec2> {
        match self {
            ConeClass::Zero => Vec::new(),
            ConeClass::Ray(v) => vec![v.clone()],
            ConeClass::Line(v) => vec![v.clone(), v.neg()],
            ConeClass::HalfPlane { boundary, interior_witness } => {
                vec![boundary.clone(), boundary.neg(), interior_witness.clone()]
            }
            ConeClass::Pointed2(v1, v2) => vec![v1.clone(), v2.clone()],
            ConeClass::Plane => vec![IVec2::new(0, 1), IVec2::new(1, 0), IVec2::new(-1, -1)],
        }
    }

    pub fn intersect(&self, other: &ConeClass) -> ConeClass {
        ConeClass::from_normals(self.normals().into_iter().chain(other.normals()))
    }

    /// Image under `(v1, v2) -> (v2, v1)`.
    pub fn swapped(&self) -> ConeClass {
        ConeClass::from_normals(self.normals().iter().map(IVec2::swapped))
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConeClass::Zero => "zero",
            ConeClass::Ray(_) => "ray",
            ConeClass::Line(_) => "line",
            ConeClass::HalfPlane { .. } => "half-plane",
            ConeClass::Pointed2(..) => "pointed",
            ConeClass::Plane => "plane",
        }
    }
}

impl fmt::Display for ConeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeClass::Zero | ConeClass::Plane => write!(f, "{}", self.name()),
            ConeClass::Ray(v) | ConeClass::Line(v) => write!(f, "{} {}", self.name(), v),
            ConeClass::HalfPlane { boundary, interior_witness } => {
                write!(f, "half-plane boundary {boundary} interior {interior_witness}")
            }
            ConeClass::Pointed2(a, b) => write!(f, "pointed {a} {b}"),
        }
    }
}

/// `P = conv(vertices) + cone`.
///
/// For polyhedra without true vertices (half-planes, strips, the plane) the
/// vertex list holds canonical anchor points on the boundary lines instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MWDecomp {
    pub vertices: Vec<Vec2>,
    pub cone: ConeClass,
    /// Largest absolute coordinate over all vertices.
    pub vertex_bound: Rat,
}

impl MWDecomp {
    pub fn min_vertex_x1(&self) -> &Rat {
        self.vertices.iter().map(|v| &v.x1).min().expect("nonempty vertex list")
    }

    pub fn max_vertex_x1(&self) -> &Rat {
        self.vertices.iter().map(|v| &v.x1).max().expect("nonempty vertex list")
    }
}
