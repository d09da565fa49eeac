//! Tropical polynomials in two variables and their plane curves.
//!
//! All coordinates and coefficients are exact rationals. The dual
//! subdivision comes from the upper faces of the lifted support
//! `{(j, a_j)}`, found by brute force over triples of support points.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticePolygon};
use crate::subdivision::{Cell, CellKind, DualSubdivision};

pub type Rational = BigRational;

fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|_| Error::Parse(format!("bad rational {s:?}")))
}

/// A point of `Q²`, serialized as a pair of rational strings.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[String; 2]", into = "[String; 2]")]
pub struct RationalPoint {
    pub x: Rational,
    pub y: Rational,
}

impl RationalPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(int(x), int(y))
    }

    pub fn offset(&self, v: LatticePoint, t: &Rational) -> Self {
        Self::new(&self.x + t * int(v.x), &self.y + t * int(v.y))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (self.x.to_f64().unwrap_or(f64::NAN), self.y.to_f64().unwrap_or(f64::NAN))
    }
}

impl TryFrom<[String; 2]> for RationalPoint {
    type Error = Error;
    fn try_from([x, y]: [String; 2]) -> Result<Self> {
        Ok(Self::new(parse_rational(&x)?, parse_rational(&y)?))
    }
}

impl From<RationalPoint> for [String; 2] {
    fn from(p: RationalPoint) -> Self {
        [p.x.to_string(), p.y.to_string()]
    }
}

impl fmt::Debug for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `max_{j∈A}(⟨j,x⟩ + a_j)`, stored as the map `j ↦ a_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PolyRepr", into = "PolyRepr")]
pub struct TropicalPolynomial {
    terms: BTreeMap<LatticePoint, Rational>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: LatticePoint,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    terms: Vec<TermRepr>,
}

impl TryFrom<PolyRepr> for TropicalPolynomial {
    type Error = Error;
    fn try_from(r: PolyRepr) -> Result<Self> {
        let terms = r.terms.into_iter().map(|t| Ok((t.exp, parse_rational(&t.coeff)?))).collect::<Result<Vec<_>>>()?;
        TropicalPolynomial::new(terms)
    }
}

impl From<TropicalPolynomial> for PolyRepr {
    fn from(p: TropicalPolynomial) -> Self {
        PolyRepr { terms: p.terms.into_iter().map(|(exp, c)| TermRepr { exp, coeff: c.to_string() }).collect() }
    }
}

impl TropicalPolynomial {
    /// Repeated exponents are combined tropically, keeping the larger coefficient.
    pub fn new(terms: impl IntoIterator<Item = (LatticePoint, Rational)>) -> Result<Self> {
        let mut map: BTreeMap<LatticePoint, Rational> = BTreeMap::new();
        for (j, a) in terms {
            match map.get(&j) {
                Some(old) if *old >= a => {}
                _ => {
                    map.insert(j, a);
                }
            }
        }
        if map.is_empty() {
            return Err(Error::EmptySupport);
        }
        Ok(Self { terms: map })
    }

    pub fn from_integers<P: Into<LatticePoint>>(terms: impl IntoIterator<Item = (P, i64)>) -> Result<Self> {
        Self::new(terms.into_iter().map(|(j, a)| (j.into(), int(a))))
    }

    pub fn terms(&self) -> &BTreeMap<LatticePoint, Rational> {
        &self.terms
    }

    pub fn support(&self) -> Vec<LatticePoint> {
        self.terms.keys().copied().collect()
    }

    pub fn coefficient(&self, j: LatticePoint) -> Option<&Rational> {
        self.terms.get(&j)
    }

    fn monomial(j: LatticePoint, a: &Rational, x: &RationalPoint) -> Rational {
        &x.x * int(j.x) + &x.y * int(j.y) + a
    }

    pub fn eval(&self, x: &RationalPoint) -> Rational {
        self.terms.iter().map(|(&j, a)| Self::monomial(j, a, x)).max().expect("nonempty support")
    }

    /// Exponents whose monomials attain the maximum at `x`.
    pub fn maximizers(&self, x: &RationalPoint) -> Vec<LatticePoint> {
        let values: Vec<_> = self.terms.iter().map(|(&j, a)| (j, Self::monomial(j, a, x))).collect();
        let top = values.iter().map(|v| &v.1).max().expect("nonempty support").clone();
        values.into_iter().filter(|v| v.1 == top).map(|v| v.0).collect()
    }

    pub fn newton_polygon(&self) -> Result<LatticePolygon> {
        LatticePolygon::hull_of(&self.support()).map_err(|_| Error::DegenerateSupport)
    }
}

/// An upper face of the lifted support: the plane `t = α·x + β·y + c` and
/// the support points lying on it.
#[derive(Clone, Debug)]
struct Face {
    points: Vec<LatticePoint>,
    alpha: Rational,
    beta: Rational,
    c: Rational,
}

impl Face {
    fn height(&self, p: LatticePoint) -> Rational {
        &self.alpha * int(p.x) + &self.beta * int(p.y) + &self.c
    }
}

fn upper_faces(f: &TropicalPolynomial) -> Vec<Face> {
    let pts: Vec<(LatticePoint, &Rational)> = f.terms.iter().map(|(&j, a)| (j, a)).collect();
    let mut seen = BTreeSet::new();
    let mut faces = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                let (p0, a0) = pts[i];
                let (u, v) = (pts[j].0 - p0, pts[k].0 - p0);
                let det = u.cross(v);
                if det == 0 {
                    continue;
                }
                let (da, db) = (pts[j].1 - a0, pts[k].1 - a0);
                let alpha = (&da * int(v.y) - &db * int(u.y)) / int(det);
                let beta = (&db * int(u.x) - &da * int(v.x)) / int(det);
                let c = a0 - &alpha * int(p0.x) - &beta * int(p0.y);
                let face = Face { points: Vec::new(), alpha, beta, c };
                let mut on = Vec::new();
                let mut upper = true;
                for &(p, a) in &pts {
                    let h = face.height(p);
                    if *a > h {
                        upper = false;
                        break;
                    }
                    if *a == h {
                        on.push(p);
                    }
                }
                if upper && seen.insert(on.clone()) {
                    faces.push(Face { points: on, ..face });
                }
            }
        }
    }
    faces.sort_by(|a, b| a.points.cmp(&b.points));
    faces
}

/// The regular subdivision of the Newton polygon induced by the coefficients.
/// Support points lying on a face of the lift are kept as nodes even when
/// they are not corners of a cell.
pub fn dual_subdivision(f: &TropicalPolynomial) -> Result<DualSubdivision> {
    let ambient = f.newton_polygon()?;
    let faces = upper_faces(f);
    let cells = faces.iter().map(|fc| Cell::from_points(&fc.points)).collect();
    let extra: Vec<_> = faces.iter().flat_map(|fc| fc.points.iter().copied()).collect();
    Ok(DualSubdivision::with_nodes(ambient, cells, extra))
}

/// Replaces the coefficients by the smallest concave function on `Δ∩Z²`
/// lying above them. Lattice points of the Newton polygon missing from the
/// support are filled in.
pub fn canonicalize(f: &TropicalPolynomial) -> TropicalPolynomial {
    match f.newton_polygon() {
        Ok(poly) => {
            let faces = upper_faces(f);
            let terms = poly
                .lattice_points()
                .into_iter()
                .map(|p| (p, faces.iter().map(|fc| fc.height(p)).min().expect("2-dimensional support has a face")))
                .collect();
            TropicalPolynomial { terms }
        }
        Err(_) if f.terms.len() == 1 => f.clone(),
        Err(_) => canonicalize_collinear(f),
    }
}

fn canonicalize_collinear(f: &TropicalPolynomial) -> TropicalPolynomial {
    let pts: Vec<_> = f.terms.iter().collect();
    let origin = *pts[0].0;
    let dir = (*pts[pts.len() - 1].0 - origin).primitive();
    let param = |p: LatticePoint| {
        let d = p - origin;
        if dir.x != 0 {
            d.x / dir.x
        } else {
            d.y / dir.y
        }
    };
    let mut lifted: Vec<(i64, Rational)> = pts.iter().map(|(&p, a)| (param(p), (*a).clone())).collect();
    lifted.sort_by_key(|l| l.0);
    let mut hull: Vec<(i64, Rational)> = Vec::new();
    for q in lifted {
        while hull.len() >= 2 {
            let (a, b) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
            // Drop b if it is on or below the chord from a to q.
            let lhs = (&b.1 - &a.1) * int(q.0 - a.0);
            let rhs = (&q.1 - &a.1) * int(b.0 - a.0);
            if lhs <= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(q);
    }
    let mut terms = BTreeMap::new();
    for w in hull.windows(2) {
        let ((t0, a0), (t1, a1)) = (&w[0], &w[1]);
        for t in *t0..=*t1 {
            let value = a0 + (a1 - a0) * int(t - t0) / int(t1 - t0);
            terms.insert(origin + LatticePoint::new(dir.x * t, dir.y * t), value);
        }
    }
    TropicalPolynomial { terms }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveVertex {
    pub point: RationalPoint,
    /// A 4-valent point dual to a parallelogram: two edges crossing, not a vertex
    /// of the parametrizing graph.
    pub crossing: bool,
    /// The dual cell.
    pub cell: Cell,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveEdge {
    pub from: usize,
    pub to: usize,
    /// Primitive, pointing from `from` to `to`.
    pub direction: LatticePoint,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRay {
    pub from: usize,
    pub direction: LatticePoint,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneTropicalCurve {
    pub vertices: Vec<CurveVertex>,
    pub edges: Vec<CurveEdge>,
    pub rays: Vec<CurveRay>,
}

impl PlaneTropicalCurve {
    /// `Σ w·v` over edges and rays leaving vertex `i`.
    pub fn imbalance(&self, i: usize) -> LatticePoint {
        let mut sum = LatticePoint::default();
        for e in &self.edges {
            let wv = LatticePoint::new(e.direction.x * e.weight, e.direction.y * e.weight);
            if e.from == i {
                sum = sum + wv;
            }
            if e.to == i {
                sum = sum - wv;
            }
        }
        for r in self.rays.iter().filter(|r| r.from == i) {
            sum = sum + LatticePoint::new(r.direction.x * r.weight, r.direction.y * r.weight);
        }
        sum
    }

    /// Rays grouped by direction with summed weights, sorted.
    pub fn degree(&self) -> Vec<(LatticePoint, i64)> {
        let mut by_dir: BTreeMap<LatticePoint, i64> = BTreeMap::new();
        for r in &self.rays {
            *by_dir.entry(r.direction).or_default() += r.weight;
        }
        by_dir.into_iter().collect()
    }
}

/// Balancing at every vertex, crossings included.
pub fn check_balancing(curve: &PlaneTropicalCurve) -> bool {
    (0..curve.vertices.len()).all(|i| curve.imbalance(i).is_zero())
}

/// The corner locus of `f`, read off its dual subdivision.
pub fn curve_of(f: &TropicalPolynomial) -> Result<PlaneTropicalCurve> {
    let ambient = f.newton_polygon()?;
    let faces = upper_faces(f);
    let cells: Vec<Cell> = faces.iter().map(|fc| Cell::from_points(&fc.points)).collect();
    let mut vertices = Vec::with_capacity(faces.len());
    for (fc, cell) in faces.iter().zip(&cells) {
        let point = RationalPoint::new(-fc.alpha.clone(), -fc.beta.clone());
        let mut top = f.maximizers(&point);
        top.sort();
        assert_eq!(top, fc.points, "monomials of a cell must tie at its dual vertex");
        assert_eq!(f.eval(&point), fc.c);
        vertices.push(CurveVertex { point, crossing: cell.kind() == CellKind::Parallelogram, cell: cell.clone() });
    }

    // Corners only: sides of a regular subdivision meet face to face.
    let sub = DualSubdivision::new(ambient, cells);
    let mut edges = Vec::new();
    let mut rays = Vec::new();
    for e in sub.edges() {
        let v = e.vector();
        let weight = v.lattice_length();
        let normal = LatticePoint::new(-v.y / weight, v.x / weight);
        match e.cells.as_slice() {
            [(c1, _), (c2, _)] => {
                let (p, q) = (&vertices[*c1].point, &vertices[*c2].point);
                let along = (&q.x - &p.x) * int(normal.x) + (&q.y - &p.y) * int(normal.y);
                debug_assert!(!along.is_zero());
                let direction = if along.is_positive() { normal } else { -normal };
                edges.push(CurveEdge { from: *c1, to: *c2, direction, weight });
            }
            [(c, s)] => {
                // Outward normal of the cell side, which lies on the boundary.
                let cell = &sub.cells[*c];
                let n = cell.vertices.len();
                let side = cell.vertices[(s + 1) % n] - cell.vertices[*s];
                let len = side.lattice_length();
                rays.push(CurveRay { from: *c, direction: LatticePoint::new(side.y / len, -side.x / len), weight });
            }
            _ => {
                return Err(Error::MalformedSubdivision(format!(
                    "edge {}-{} borders {} cells",
                    e.a,
                    e.b,
                    e.cells.len()
                )))
            }
        }
    }
    Ok(PlaneTropicalCurve { vertices, edges, rays })
}

/// `w₁·w₂·|det(v₁,v₂)|` for primitive `v₁`, `v₂`.
pub fn vertex_multiplicity(v1: LatticePoint, w1: i64, v2: LatticePoint, w2: i64) -> Result<i64> {
    for v in [v1, v2] {
        if !v.is_primitive() {
            return Err(Error::NotPrimitive(v));
        }
    }
    let det = v1.cross(v2);
    if det == 0 {
        return Err(Error::ParallelDirections(v1, v2));
    }
    Ok(w1 * w2 * det.abs())
}

/// `(r − x)/2 + 1` for a subdivision into triangles and parallelograms,
/// with `r` triangles and `x` edges on the boundary.
pub fn genus_of_simple(s: &DualSubdivision) -> Result<i64> {
    if !s.is_simple() {
        return Err(Error::NotSimple);
    }
    let r = s.triangle_count() as i64;
    let x = s.boundary_edges().len() as i64;
    if (r - x) % 2 != 0 {
        return Err(Error::MalformedSubdivision(format!("{r} triangles and {x} boundary edges have different parity")));
    }
    Ok((r - x) / 2 + 1)
}
