//! Convex lattice polygons and the linear orders used to sweep them.
//!
//! A [`LatticePolygon`] plays the role of the degree of a curve in a toric
//! surface. Everything here is exact integer arithmetic.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::LatticePath;

/// A point of the integer lattice `Z²`. Also used for integer vectors.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Self) -> i64 {
        self.x * other.x + self.y * other.y
    }

    /// `self ∧ other`, the z-component of the cross product.
    pub fn cross(self, other: Self) -> i64 {
        self.x * other.y - self.y * other.x
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// Lattice length of the vector: the gcd of its coordinates.
    pub fn lattice_length(self) -> i64 {
        self.x.gcd(&self.y)
    }

    /// The primitive vector in the same direction. Zero maps to zero.
    pub fn primitive(self) -> Self {
        let g = self.lattice_length();
        if g == 0 {
            self
        } else {
            Self::new(self.x / g, self.y / g)
        }
    }

    pub fn is_primitive(self) -> bool {
        self.lattice_length() == 1
    }

    /// True when both coordinates are even, i.e. the lattice length is even.
    pub fn is_even(self) -> bool {
        self.x % 2 == 0 && self.y % 2 == 0
    }
}

impl From<[i64; 2]> for LatticePoint {
    fn from([x, y]: [i64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<LatticePoint> for [i64; 2] {
    fn from(p: LatticePoint) -> Self {
        [p.x, p.y]
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((x, y): (i64, i64)) -> Self {
        Self { x, y }
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl Add for LatticePoint {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for LatticePoint {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for LatticePoint {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Twice the signed area of the triangle `a, b, c` (positive when counterclockwise).
pub fn orient(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> i64 {
    (b - a).cross(c - a)
}

/// Twice the (unsigned) area of the lattice triangle.
pub fn triangle_double_area(t: [LatticePoint; 3]) -> i64 {
    orient(t[0], t[1], t[2]).abs()
}

/// Number of lattice points strictly inside the triangle, by Pick's theorem.
pub fn triangle_interior_points(t: [LatticePoint; 3]) -> i64 {
    let boundary: i64 = (0..3).map(|i| (t[(i + 1) % 3] - t[i]).lattice_length()).sum();
    (triangle_double_area(t) - boundary + 2) / 2
}

/// The sweep order `λ(w) = ⟨u,w⟩ + ε⟨v,w⟩` for an infinitesimal `ε > 0`.
///
/// Points are compared lexicographically on `(⟨u,w⟩, ⟨v,w⟩)`, so the order
/// is exact and injective on `Z²` whenever `u` and `v` are not parallel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "OrderRepr", into = "OrderRepr")]
pub struct LinearOrder {
    primary: LatticePoint,
    tiebreak: LatticePoint,
}

#[derive(Serialize, Deserialize)]
struct OrderRepr {
    primary: LatticePoint,
    tiebreak: LatticePoint,
}

impl TryFrom<OrderRepr> for LinearOrder {
    type Error = Error;
    fn try_from(r: OrderRepr) -> Result<Self> {
        LinearOrder::new(r.primary, r.tiebreak)
    }
}

impl From<LinearOrder> for OrderRepr {
    fn from(o: LinearOrder) -> Self {
        OrderRepr { primary: o.primary, tiebreak: o.tiebreak }
    }
}

impl Default for LinearOrder {
    /// `λ(x,y) = x − εy`.
    fn default() -> Self {
        Self { primary: LatticePoint::new(1, 0), tiebreak: LatticePoint::new(0, -1) }
    }
}

impl fmt::Display for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}/{},{}", self.primary.x, self.primary.y, self.tiebreak.x, self.tiebreak.y)
    }
}

impl std::str::FromStr for LinearOrder {
    type Err = Error;
    /// `"a,b/c,d"`: primary `(a,b)`, tiebreak `(c,d)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("order {s:?} is not of the form a,b/c,d"));
        let vec = |part: &str| -> Result<LatticePoint> {
            let mut it = part.split(',').map(|t| t.trim().parse::<i64>().map_err(|_| bad()));
            match (it.next(), it.next(), it.next()) {
                (Some(x), Some(y), None) => Ok(LatticePoint::new(x?, y?)),
                _ => Err(bad()),
            }
        };
        let (a, b) = s.split_once('/').ok_or_else(bad)?;
        LinearOrder::new(vec(a)?, vec(b)?)
    }
}

impl LinearOrder {
    pub fn new(primary: impl Into<LatticePoint>, tiebreak: impl Into<LatticePoint>) -> Result<Self> {
        let (primary, tiebreak) = (primary.into(), tiebreak.into());
        if primary.is_zero() || tiebreak.is_zero() {
            return Err(Error::ZeroOrderVector);
        }
        Ok(Self { primary, tiebreak })
    }

    pub fn primary(&self) -> LatticePoint {
        self.primary
    }

    pub fn tiebreak(&self) -> LatticePoint {
        self.tiebreak
    }

    pub fn key(&self, p: LatticePoint) -> (i64, i64) {
        (self.primary.dot(p), self.tiebreak.dot(p))
    }

    pub fn compare(&self, a: LatticePoint, b: LatticePoint) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }

    pub fn less(&self, a: LatticePoint, b: LatticePoint) -> bool {
        self.compare(a, b) == Ordering::Less
    }

    /// True iff all pairwise comparisons among distinct entries of `pts` are strict.
    pub fn is_injective_on(&self, pts: &[LatticePoint]) -> bool {
        self.first_collision(pts).is_none()
    }

    fn first_collision(&self, pts: &[LatticePoint]) -> Option<(LatticePoint, LatticePoint)> {
        let mut keyed: Vec<_> = pts.iter().map(|&p| (self.key(p), p)).collect();
        keyed.sort();
        keyed.windows(2).find(|w| w[0].0 == w[1].0).map(|w| (w[0].1, w[1].1))
    }

    pub(crate) fn check_injective(&self, pts: &[LatticePoint]) -> Result<()> {
        match self.first_collision(pts) {
            Some((a, b)) => Err(Error::NonInjectiveOrder(a, b)),
            None => Ok(()),
        }
    }
}

/// Outward primitive normals of the sides of a polygon, weighted by lattice length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricDegree {
    pub entries: Vec<(LatticePoint, i64)>,
}

impl ToricDegree {
    pub fn sum(&self) -> LatticePoint {
        self.entries.iter().fold(LatticePoint::ORIGIN, |acc, &(d, m)| acc + LatticePoint::new(d.x * m, d.y * m))
    }

    /// Entries sorted by direction, for comparisons that ignore side order.
    pub fn sorted(&self) -> Vec<(LatticePoint, i64)> {
        let mut e = self.entries.clone();
        e.sort();
        e
    }
}

/// A strictly convex lattice polygon with counterclockwise vertices.
///
/// The vertex list is rotated so that the lexicographically smallest vertex
/// comes first, which makes equal polygons compare and hash equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PolygonRepr", into = "PolygonRepr")]
pub struct LatticePolygon {
    vertices: Vec<LatticePoint>,
}

#[derive(Serialize, Deserialize)]
struct PolygonRepr {
    vertices: Vec<LatticePoint>,
}

impl TryFrom<PolygonRepr> for LatticePolygon {
    type Error = Error;
    fn try_from(r: PolygonRepr) -> Result<Self> {
        LatticePolygon::new(r.vertices)
    }
}

impl From<LatticePolygon> for PolygonRepr {
    fn from(p: LatticePolygon) -> Self {
        PolygonRepr { vertices: p.vertices }
    }
}

impl LatticePolygon {
    /// Builds a polygon from its vertices given in either cyclic orientation.
    pub fn new<P: Into<LatticePoint>>(vertices: impl IntoIterator<Item = P>) -> Result<Self> {
        let mut v: Vec<LatticePoint> = vertices.into_iter().map(Into::into).collect();
        if v.len() < 3 {
            return Err(Error::TooFewVertices(v.len()));
        }
        let n = v.len();
        let signed: i64 = (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum();
        if signed == 0 {
            return Err(Error::DegeneratePolygon);
        }
        if signed < 0 {
            v.reverse();
        }
        for i in 0..n {
            let (a, b, c) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
            if orient(a, b, c) <= 0 {
                return Err(Error::NotStrictlyConvex(b));
            }
        }
        // A star-shaped winding (e.g. a pentagram) also turns left everywhere.
        let hull = convex_hull(&v);
        let start = v.iter().position(|&p| p == hull[0]);
        let same_cycle = hull.len() == n && start.is_some_and(|s| (0..n).all(|i| v[(s + i) % n] == hull[i]));
        if !same_cycle {
            return Err(Error::NotStrictlyConvex(v[0]));
        }
        let start = (0..n).min_by_key(|&i| v[i]).unwrap();
        v.rotate_left(start);
        Ok(Self { vertices: v })
    }

    /// Convex hull of a point set. Fails when the points are collinear.
    pub fn hull_of(points: &[LatticePoint]) -> Result<Self> {
        let hull = convex_hull(points);
        if hull.len() < 3 {
            return Err(Error::DegeneratePolygon);
        }
        Self::new(hull)
    }

    /// `Δ_d`, the triangle with vertices `(0,0)`, `(d,0)`, `(0,d)`.
    pub fn projective(d: i64) -> Self {
        Self::new([(0, 0), (d, 0), (0, d)]).expect("d must be positive")
    }

    /// The rectangle `[0,a]×[0,b]`.
    pub fn rectangle(a: i64, b: i64) -> Self {
        Self::new([(0, 0), (a, 0), (a, b), (0, b)]).expect("sides must be positive")
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    /// Sides as `(start, end)` pairs in counterclockwise order.
    pub fn sides(&self) -> impl Iterator<Item = (LatticePoint, LatticePoint)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.sides().all(|(a, b)| orient(a, b, p) >= 0)
    }

    pub fn on_boundary(&self, p: LatticePoint) -> bool {
        self.contains(p) && self.sides().any(|(a, b)| orient(a, b, p) == 0)
    }

    pub fn bounding_box(&self) -> (LatticePoint, LatticePoint) {
        let xs = self.vertices.iter().map(|p| p.x);
        let ys = self.vertices.iter().map(|p| p.y);
        (
            LatticePoint::new(xs.clone().min().unwrap(), ys.clone().min().unwrap()),
            LatticePoint::new(xs.max().unwrap(), ys.max().unwrap()),
        )
    }

    /// All lattice points of the closed polygon, row by row (`y`, then `x`).
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        let (lo, hi) = self.bounding_box();
        let mut out = Vec::new();
        for y in lo.y..=hi.y {
            for x in lo.x..=hi.x {
                let p = LatticePoint::new(x, y);
                if self.contains(p) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// `(s, l)`: boundary and interior lattice point counts.
    pub fn counts(&self) -> (usize, usize) {
        let s: i64 = self.sides().map(|(a, b)| (b - a).lattice_length()).sum();
        let total = self.lattice_points().len();
        (s as usize, total - s as usize)
    }

    pub fn double_area(&self) -> i64 {
        self.sides().map(|(a, b)| a.cross(b)).sum()
    }

    /// One entry per side: the outward primitive normal times the side's lattice length.
    pub fn toric_degree(&self) -> ToricDegree {
        let entries = self
            .sides()
            .map(|(a, b)| {
                let e = b - a;
                let len = e.lattice_length();
                (LatticePoint::new(e.y / len, -e.x / len), len)
            })
            .collect();
        ToricDegree { entries }
    }

    /// True when every vertex cone is unimodular, i.e. the toric surface is smooth.
    pub fn is_smooth(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let (a, b, c) = (self.vertices[(i + n - 1) % n], self.vertices[i], self.vertices[(i + 1) % n]);
            (a - b).primitive().cross((c - b).primitive()).abs() == 1
        })
    }

    /// The λ-minimal and λ-maximal vertices `(p, q)`.
    pub fn extremal_vertices(&self, order: &LinearOrder) -> Result<(LatticePoint, LatticePoint)> {
        order.check_injective(&self.lattice_points())?;
        let p = *self.vertices.iter().min_by(|a, b| order.compare(**a, **b)).unwrap();
        let q = *self.vertices.iter().max_by(|a, b| order.compare(**a, **b)).unwrap();
        Ok((p, q))
    }

    /// The two unit-step boundary chains from `p` to `q`: `α₊` runs clockwise
    /// around the boundary and `α₋` counterclockwise.
    pub fn boundary_chains(&self, order: &LinearOrder) -> Result<(LatticePath, LatticePath)> {
        let (p, q) = self.extremal_vertices(order)?;
        let ip = self.vertices.iter().position(|&v| v == p).unwrap();
        let iq = self.vertices.iter().position(|&v| v == q).unwrap();
        let minus = self.ccw_walk(ip, iq);
        let mut plus = self.ccw_walk(iq, ip);
        plus.reverse();
        Ok((LatticePath::new(plus), LatticePath::new(minus)))
    }

    /// Unit-step walk along the boundary from vertex `from` to vertex `to`, counterclockwise.
    fn ccw_walk(&self, from: usize, to: usize) -> Vec<LatticePoint> {
        let n = self.vertices.len();
        let mut out = vec![self.vertices[from]];
        let mut i = from;
        while i != to {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            let step = (b - a).primitive();
            let mut cur = a;
            while cur != b {
                cur = cur + step;
                out.push(cur);
            }
            i = (i + 1) % n;
        }
        out
    }
}

/// Convex hull (counterclockwise, no collinear points) by the monotone chain.
pub fn convex_hull(points: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<LatticePoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<LatticePoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}
