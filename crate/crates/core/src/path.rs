//! λ-increasing lattice paths and their multiplicities.
//!
//! A path from `p` to `q` splits the polygon into the region `Δ₊` between the
//! path and the clockwise boundary chain `α₊`, and `Δ₋` on the other side.
//! The side multiplicity peels triangles off that region one at a time: at
//! the first locally convex corner it either cuts the corner (a trivalent
//! vertex, weighted by twice the triangle's area) or reflects the corner
//! through the chord (a parallelogram, i.e. two edges crossing).

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{triangle_double_area, LatticePoint, LatticePolygon, LinearOrder};
use crate::par::{map_with_state, Execution};
use crate::subdivision::{Cell, DualSubdivision};

/// A lattice path, stored by its vertices `γ(0), …, γ(n)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePath {
    points: Vec<LatticePoint>,
}

impl LatticePath {
    pub fn new(points: Vec<LatticePoint>) -> Self {
        Self { points }
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    /// Number of steps `n`.
    pub fn steps(&self) -> usize {
        self.points.len().saturating_sub(1)
    }

    /// The step vectors `γ(j) − γ(j−1)`, `j = 1..n`.
    pub fn step_vectors(&self) -> Vec<LatticePoint> {
        self.points.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn is_increasing(&self, order: &LinearOrder) -> bool {
        self.points.windows(2).all(|w| order.less(w[0], w[1]))
    }
}

impl fmt::Debug for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.points.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl From<Vec<LatticePoint>> for LatticePath {
    fn from(points: Vec<LatticePoint>) -> Self {
        Self::new(points)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Plus, Side::Minus];

    /// Whether the turn `γ(k−1) → γ(k) → γ(k+1)` is a convex corner of this side's region.
    /// `Δ₊` lies to the left of the path, `Δ₋` to the right; straight turns are never convex.
    pub fn is_convex_turn(self, incoming: LatticePoint, outgoing: LatticePoint) -> bool {
        let c = incoming.cross(outgoing);
        match self {
            Side::Plus => c > 0,
            Side::Minus => c < 0,
        }
    }
}

/// Smallest `k` in `1..n` with a convex corner of `side` at `pts[k]`.
pub fn first_convex_corner(pts: &[LatticePoint], side: Side) -> Option<usize> {
    (1..pts.len().saturating_sub(1)).find(|&k| side.is_convex_turn(pts[k] - pts[k - 1], pts[k + 1] - pts[k]))
}

/// `γ(k−1) + γ(k+1) − γ(k)`.
pub fn reflected_corner(pts: &[LatticePoint], k: usize) -> LatticePoint {
    pts[k - 1] + pts[k + 1] - pts[k]
}

/// A tropical curve read off a path: its dual subdivision and multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodedCurve {
    pub subdivision: DualSubdivision,
    /// The path steps, i.e. the subdivision edges dual to the marked edges of the curve.
    pub marked_edges: Vec<(LatticePoint, LatticePoint)>,
    pub multiplicity: u64,
}

/// Export form of a decoded curve: `{"cells":[{"vertices":[[x,y],..]},..],"multiplicity":m}`.
#[derive(Clone, Debug, Serialize)]
pub struct CurveExport<'a> {
    pub cells: &'a [Cell],
    pub multiplicity: u64,
}

impl DecodedCurve {
    pub fn export(&self) -> CurveExport<'_> {
        CurveExport { cells: &self.subdivision.cells, multiplicity: self.multiplicity }
    }
}

/// Per-path multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathMultiplicity {
    pub path: LatticePath,
    pub plus: u64,
    pub minus: u64,
}

impl PathMultiplicity {
    pub fn total(&self) -> u64 {
        self.plus * self.minus
    }
}

pub(crate) type Memo<V> = HashMap<Vec<LatticePoint>, V>;

/// A polygon together with a sweep order: the extremal vertices, the two
/// boundary chains and the lattice points sorted by the order.
#[derive(Clone, Debug)]
pub struct PathCounter {
    polygon: LatticePolygon,
    order: LinearOrder,
    start: LatticePoint,
    end: LatticePoint,
    plus: LatticePath,
    minus: LatticePath,
    ranked: Vec<LatticePoint>,
    execution: Execution,
}

impl PathCounter {
    pub fn new(polygon: &LatticePolygon, order: LinearOrder) -> Result<Self> {
        let mut ranked = polygon.lattice_points();
        order.check_injective(&ranked)?;
        ranked.sort_by(|a, b| order.compare(*a, *b));
        let (start, end) = polygon.extremal_vertices(&order)?;
        let (plus, minus) = polygon.boundary_chains(&order)?;
        debug_assert!(plus.is_increasing(&order) && minus.is_increasing(&order));
        Ok(Self { polygon: polygon.clone(), order, start, end, plus, minus, ranked, execution: Execution::default() })
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn polygon(&self) -> &LatticePolygon {
        &self.polygon
    }

    pub fn order(&self) -> &LinearOrder {
        &self.order
    }

    pub fn execution(&self) -> Execution {
        self.execution
    }

    pub fn endpoints(&self) -> (LatticePoint, LatticePoint) {
        (self.start, self.end)
    }

    pub fn chain(&self, side: Side) -> &LatticePath {
        match side {
            Side::Plus => &self.plus,
            Side::Minus => &self.minus,
        }
    }

    /// Number of steps `s + g − 1` for genus `g`.
    pub fn steps_for_genus(&self, genus: i64) -> Result<usize> {
        let (s, _) = self.polygon.counts();
        let steps = s as i64 + genus - 1;
        if steps < 1 {
            return Err(Error::InvalidGenus { genus, steps });
        }
        Ok(steps as usize)
    }

    pub(crate) fn contains(&self, p: LatticePoint) -> bool {
        self.polygon.contains(p)
    }

    /// Checks that `path` is a λ-increasing lattice path in the polygon from `p` to `q`.
    pub fn validate(&self, path: &LatticePath) -> Result<()> {
        let pts = path.points();
        if pts.len() < 2 {
            return Err(Error::InvalidPath("needs at least one step".into()));
        }
        if pts[0] != self.start || pts[pts.len() - 1] != self.end {
            return Err(Error::InvalidPath(format!("must run from {} to {}", self.start, self.end)));
        }
        if let Some(p) = pts.iter().find(|p| !self.contains(**p)) {
            return Err(Error::InvalidPath(format!("{p} is outside the polygon")));
        }
        if !path.is_increasing(&self.order) {
            return Err(Error::InvalidPath("not increasing".into()));
        }
        Ok(())
    }

    /// All λ-increasing paths of exactly `steps` steps from `p` to `q`, in
    /// lexicographic order of the ranks of their intermediate points.
    pub fn enumerate(&self, steps: usize) -> Vec<LatticePath> {
        let inner = &self.ranked[1..self.ranked.len() - 1];
        let want = steps.saturating_sub(1);
        let mut out = Vec::new();
        if steps == 0 || want > inner.len() {
            return out;
        }
        let mut current = vec![self.start];
        choose(inner, 0, want, &mut current, &mut |chosen| {
            let mut pts = chosen.to_vec();
            pts.push(self.end);
            out.push(LatticePath::new(pts));
        });
        out
    }

    /// Side multiplicity `μ±(γ)`.
    pub fn mu_side(&self, path: &LatticePath, side: Side) -> u64 {
        let mut memo = Memo::new();
        self.mu_side_memo(path.points(), side, &mut memo)
    }

    /// `μ(γ) = μ₊(γ)·μ₋(γ)`.
    pub fn mu(&self, path: &LatticePath) -> u64 {
        self.mu_side(path, Side::Plus) * self.mu_side(path, Side::Minus)
    }

    pub(crate) fn mu_side_memo(&self, pts: &[LatticePoint], side: Side, memo: &mut Memo<i64>) -> u64 {
        let value = self.skeleton(pts, side, &|t| triangle_double_area(t), memo);
        u64::try_from(value).expect("side multiplicity is nonnegative")
    }

    /// The shared recursion behind `μ±` and `ν±`: `weight(T)·v(γ′) + v(γ″)`.
    /// The memo must be dedicated to one `(side, weight)` pair.
    pub(crate) fn skeleton(
        &self,
        pts: &[LatticePoint],
        side: Side,
        weight: &dyn Fn([LatticePoint; 3]) -> i64,
        memo: &mut Memo<i64>,
    ) -> i64 {
        let target = self.chain(side).points();
        if pts == target {
            return 1;
        }
        if pts.len() < target.len() {
            return 0;
        }
        if let Some(&v) = memo.get(pts) {
            return v;
        }
        let value = match first_convex_corner(pts, side) {
            None => 0,
            Some(k) => {
                let mut total = 0;
                let w = weight([pts[k - 1], pts[k], pts[k + 1]]);
                if w != 0 {
                    let mut cut = pts.to_vec();
                    cut.remove(k);
                    total += w * self.skeleton(&cut, side, weight, memo);
                }
                let r = reflected_corner(pts, k);
                debug_assert!(self.order.less(pts[k - 1], r) && self.order.less(r, pts[k + 1]));
                if self.contains(r) {
                    let mut refl = pts.to_vec();
                    refl[k] = r;
                    total += self.skeleton(&refl, side, weight, memo);
                }
                total
            }
        };
        memo.insert(pts.to_vec(), value);
        value
    }

    /// `μ₊`, `μ₋` for every path in the batch, in input order.
    pub fn multiplicities(&self, paths: &[LatticePath]) -> Vec<PathMultiplicity> {
        map_with_state(
            self.execution,
            paths,
            || (Memo::new(), Memo::new()),
            |(mp, mm), path| PathMultiplicity {
                path: path.clone(),
                plus: self.mu_side_memo(path.points(), Side::Plus, mp),
                minus: self.mu_side_memo(path.points(), Side::Minus, mm),
            },
        )
    }

    /// `N_trop(g, Δ)`: paths of `s+g−1` steps counted with multiplicity `μ`.
    pub fn count(&self, genus: i64) -> Result<u64> {
        let paths = self.enumerate(self.steps_for_genus(genus)?);
        Ok(self.multiplicities(&paths).iter().map(PathMultiplicity::total).sum())
    }

    /// The curves encoded by a path: one per pair of successful leaves of the
    /// plus- and minus-side recursion trees.
    pub fn decode(&self, path: &LatticePath) -> Vec<DecodedCurve> {
        let mut leaves = [Vec::new(), Vec::new()];
        for (i, side) in Side::BOTH.into_iter().enumerate() {
            let mut acc = Vec::new();
            self.decode_side(path.points(), side, &mut acc, 1, &mut leaves[i]);
        }
        let marked: Vec<_> = path.points().windows(2).map(|w| (w[0], w[1])).collect();
        let mut out = Vec::new();
        for (plus_cells, plus_mult) in &leaves[0] {
            for (minus_cells, minus_mult) in &leaves[1] {
                let cells: Vec<Cell> = plus_cells.iter().chain(minus_cells).cloned().collect();
                out.push(DecodedCurve {
                    subdivision: DualSubdivision::new(self.polygon.clone(), cells),
                    marked_edges: marked.clone(),
                    multiplicity: plus_mult * minus_mult,
                });
            }
        }
        out
    }

    fn decode_side(
        &self,
        pts: &[LatticePoint],
        side: Side,
        acc: &mut Vec<Cell>,
        mult: u64,
        out: &mut Vec<(Vec<Cell>, u64)>,
    ) {
        let target = self.chain(side).points();
        if pts == target {
            out.push((acc.clone(), mult));
            return;
        }
        if pts.len() < target.len() {
            return;
        }
        let Some(k) = first_convex_corner(pts, side) else {
            return;
        };
        let t = [pts[k - 1], pts[k], pts[k + 1]];
        let mut cut = pts.to_vec();
        cut.remove(k);
        acc.push(Cell::triangle(t));
        self.decode_side(&cut, side, acc, mult * triangle_double_area(t) as u64, out);
        acc.pop();
        let r = reflected_corner(pts, k);
        if self.contains(r) {
            let mut refl = pts.to_vec();
            refl[k] = r;
            acc.push(Cell::from_points(&[t[0], t[1], t[2], r]));
            self.decode_side(&refl, side, acc, mult, out);
            acc.pop();
        }
    }
}

/// Calls `emit` with `current` extended by every increasing choice of `want` items from `pool[from..]`.
fn choose<F: FnMut(&[LatticePoint])>(
    pool: &[LatticePoint],
    from: usize,
    want: usize,
    current: &mut Vec<LatticePoint>,
    emit: &mut F,
) {
    if want == 0 {
        emit(current);
        return;
    }
    // Leave enough points for the remaining picks.
    for i in from..=pool.len() - want {
        current.push(pool[i]);
        choose(pool, i + 1, want - 1, current, emit);
        current.pop();
    }
}

/// All λ-increasing paths of `steps` steps between the λ-extremal vertices.
pub fn enumerate_paths(polygon: &LatticePolygon, order: &LinearOrder, steps: usize) -> Result<Vec<LatticePath>> {
    Ok(PathCounter::new(polygon, *order)?.enumerate(steps))
}

pub fn mu_side(polygon: &LatticePolygon, order: &LinearOrder, path: &LatticePath, side: Side) -> Result<u64> {
    let pc = PathCounter::new(polygon, *order)?;
    pc.validate(path)?;
    Ok(pc.mu_side(path, side))
}

pub fn mu(polygon: &LatticePolygon, order: &LinearOrder, path: &LatticePath) -> Result<u64> {
    let pc = PathCounter::new(polygon, *order)?;
    pc.validate(path)?;
    Ok(pc.mu(path))
}

/// `N_trop(g, Δ)` computed with the sweep order `order`.
pub fn count(polygon: &LatticePolygon, genus: i64, order: &LinearOrder) -> Result<u64> {
    PathCounter::new(polygon, *order)?.count(genus)
}

pub fn decode(polygon: &LatticePolygon, order: &LinearOrder, path: &LatticePath) -> Result<Vec<DecodedCurve>> {
    let pc = PathCounter::new(polygon, *order)?;
    pc.validate(path)?;
    Ok(pc.decode(path))
}
