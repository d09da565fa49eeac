//! Real and signed counts: sign classes, the signed path recursion `μ^R`,
//! the Welschinger path recursion `ν^R`, and the curve-level real
//! multiplicity used to cross-check `μ^R`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dual_graph::{DualNode, MarkedDualGraph};
use crate::error::{Error, Result};
use crate::lattice::{triangle_double_area, triangle_interior_points, LatticePoint, LatticePolygon, LinearOrder};
use crate::par::map_with_state;
use crate::path::{first_convex_corner, reflected_corner, LatticePath, Memo, PathCounter, Side};

/// An element `(X, Y)` of `Z₂²`: the coordinatewise signs of a point, with
/// `0` for `+` and `1` for `−`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Quadrant(u8);

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant(0), Quadrant(1), Quadrant(2), Quadrant(3)];
    pub const POSITIVE: Quadrant = Quadrant(0);

    pub fn new(x: u8, y: u8) -> Self {
        Quadrant(((x & 1) << 1) | (y & 1))
    }

    /// A lattice vector reduced mod 2.
    pub fn of_vector(v: LatticePoint) -> Self {
        Self::new(v.x.rem_euclid(2) as u8, v.y.rem_euclid(2) as u8)
    }

    pub fn x(self) -> u8 {
        self.0 >> 1
    }

    pub fn y(self) -> u8 {
        self.0 & 1
    }

    pub fn plus(self, other: Self) -> Self {
        Quadrant(self.0 ^ other.0)
    }

    fn bit(self) -> u8 {
        1 << self.0
    }
}

impl fmt::Debug for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x(), self.y())
    }
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |b| if b == 0 { '+' } else { '-' };
        write!(f, "{}{}", s(self.x()), s(self.y()))
    }
}

impl FromStr for Quadrant {
    type Err = Error;
    /// Tokens `++`, `+-`, `-+`, `--`: sign of x, then sign of y.
    fn from_str(s: &str) -> Result<Self> {
        let bit = |c| match c {
            '+' => Ok(0),
            '-' => Ok(1),
            _ => Err(Error::Parse(format!("bad quadrant token {s:?}"))),
        };
        let mut chars = s.trim().chars();
        match (chars.next(), chars.next(), chars.next()) {
            (Some(a), Some(b), None) => Ok(Quadrant::new(bit(a)?, bit(b)?)),
            _ => Err(Error::Parse(format!("bad quadrant token {s:?}"))),
        }
    }
}

/// Parses a comma-separated list of quadrant tokens.
pub fn parse_signs(s: &str) -> Result<Vec<Quadrant>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect()
}

/// A class of `Z₂²` modulo the subgroup generated by a lattice vector mod 2.
/// Two elements when the vector has odd lattice length, one when even.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignClass {
    mask: u8,
}

impl SignClass {
    /// The class of `rep` for edges parallel to `step`.
    pub fn of(step: LatticePoint, rep: Quadrant) -> Result<Self> {
        if step.is_zero() {
            return Err(Error::ZeroStep);
        }
        let d = Quadrant::of_vector(step);
        Ok(SignClass { mask: rep.bit() | rep.plus(d).bit() })
    }

    /// Every class for `step`, ordered by smallest member.
    pub fn all_for(step: LatticePoint) -> Result<Vec<Self>> {
        let mut out: Vec<Self> = Vec::new();
        for q in Quadrant::ALL {
            let c = Self::of(step, q)?;
            if !out.contains(&c) {
                out.push(c);
            }
        }
        Ok(out)
    }

    pub fn mask(self) -> u8 {
        self.mask
    }

    pub fn len(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    pub fn contains(self, q: Quadrant) -> bool {
        self.mask & q.bit() != 0
    }

    pub fn members(self) -> impl Iterator<Item = Quadrant> {
        Quadrant::ALL.into_iter().filter(move |q| self.contains(*q))
    }

    /// Members shared with `other`, as a raw bit mask.
    fn common(self, other: Self) -> u8 {
        self.mask & other.mask
    }

    /// Whether this is a class of `Z₂²/⟨step⟩`.
    pub fn is_valid_for(self, step: LatticePoint) -> bool {
        self.members().next().is_some_and(|q| Self::of(step, q) == Ok(self))
    }
}

impl fmt::Debug for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members()).finish()
    }
}

pub fn sign_class_of(step: LatticePoint, representative: Quadrant) -> Result<SignClass> {
    SignClass::of(step, representative)
}

fn first_member(mask: u8) -> Quadrant {
    Quadrant(mask.trailing_zeros() as u8)
}

/// A path with one sign class per step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPath {
    pub path: LatticePath,
    pub signs: Vec<SignClass>,
}

impl SignedPath {
    pub fn new(path: LatticePath, signs: Vec<SignClass>) -> Result<Self> {
        let steps = path.step_vectors();
        if steps.len() != signs.len() {
            return Err(Error::SignCount { expected: steps.len(), got: signs.len() });
        }
        for (&step, &c) in steps.iter().zip(&signs) {
            if step.is_zero() {
                return Err(Error::ZeroStep);
            }
            if !c.is_valid_for(step) {
                return Err(Error::InvalidSignClass { step, mask: c.mask });
            }
        }
        Ok(Self { path, signs })
    }

    /// Step `j` gets the class of `quadrants[j]`.
    pub fn from_quadrants(path: LatticePath, quadrants: &[Quadrant]) -> Result<Self> {
        let steps = path.step_vectors();
        if steps.len() != quadrants.len() {
            return Err(Error::SignCount { expected: steps.len(), got: quadrants.len() });
        }
        let signs = steps.iter().zip(quadrants).map(|(&s, &q)| SignClass::of(s, q)).collect::<Result<_>>()?;
        Ok(Self { path, signs })
    }
}

/// `b(T)`: zero if a side of `T` has even lattice length, else `(−1)^{#Int T}`.
pub fn welschinger_triangle_weight(t: [LatticePoint; 3]) -> i64 {
    let sides = [t[1] - t[0], t[2] - t[1], t[0] - t[2]];
    if sides.iter().any(|s| s.is_even()) {
        0
    } else if triangle_interior_points(t) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Vertex sign `(−1)^{(m−1)/2}` for odd multiplicity `m = 2·Area(T)`, and 0 for even `m`.
///
/// This agrees with [`welschinger_triangle_weight`] when all sides have
/// lattice length one, but not in general: a triangle with side lengths
/// 3, 1, 1 and no interior points has `m = 3` and sign −1 here, +1 there.
pub fn vertex_welschinger_sign(t: [LatticePoint; 3]) -> Result<i64> {
    let m = triangle_double_area(t);
    if m == 0 {
        return Err(Error::ParallelDirections(t[1] - t[0], t[2] - t[0]));
    }
    Ok(if m % 2 == 0 {
        0
    } else if ((m - 1) / 2) % 2 == 0 {
        1
    } else {
        -1
    })
}

type RealMemo = HashMap<(Vec<LatticePoint>, Vec<SignClass>), u64>;

/// Result of merging two signed steps at a triangle corner.
enum Merge {
    /// `a(T) = 0`.
    Vanish,
    /// One admissible sign for the merged step, with factor `a(T)`.
    Single(u64, SignClass),
    /// Two admissible signs, each counted once.
    Split([SignClass; 2]),
}

/// Sign rule for cutting the corner between steps `first` and `second`
/// carrying classes `s1`, `s2`; the merged step is `first + second`.
fn merge_steps(first: LatticePoint, second: LatticePoint, s1: SignClass, s2: SignClass) -> Merge {
    let merged = first + second;
    let evens = [first.is_even(), second.is_even(), merged.is_even()];
    let common = s1.common(s2);
    match evens {
        [false, false, false] => {
            // The two classes meet in exactly one element z; the merged class avoids it.
            let z = first_member(common);
            let c = SignClass::of(merged, z.plus(Quadrant::of_vector(first))).expect("nonzero");
            debug_assert!(!c.contains(z));
            Merge::Single(1, c)
        }
        [true, true, true] => {
            if s1 == s2 {
                Merge::Single(4, s1)
            } else {
                Merge::Vanish
            }
        }
        _ if common == 0 => Merge::Vanish,
        [false, false, true] => {
            // Same odd class on both steps: the even merged step may take either member.
            let mut m = s1.members();
            let (a, b) = (m.next().unwrap(), m.next().unwrap());
            Merge::Split([SignClass::of(merged, a).unwrap(), SignClass::of(merged, b).unwrap()])
        }
        _ => Merge::Single(2, SignClass::of(merged, first_member(common)).expect("nonzero")),
    }
}

impl PathCounter {
    /// `μ^R±(γ, σ)`.
    pub fn mu_real_side(&self, signed: &SignedPath, side: Side) -> u64 {
        let mut memo = RealMemo::new();
        self.real_rec(signed.path.points(), &signed.signs, side, &mut memo)
    }

    pub fn mu_real(&self, signed: &SignedPath) -> u64 {
        self.mu_real_side(signed, Side::Plus) * self.mu_real_side(signed, Side::Minus)
    }

    fn real_rec(&self, pts: &[LatticePoint], signs: &[SignClass], side: Side, memo: &mut RealMemo) -> u64 {
        let target = self.chain(side).points();
        if pts == target {
            return 1;
        }
        if pts.len() < target.len() {
            return 0;
        }
        let key = (pts.to_vec(), signs.to_vec());
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let value = match first_convex_corner(pts, side) {
            None => 0,
            Some(k) => {
                let mut total = 0;
                let (first, second) = (pts[k] - pts[k - 1], pts[k + 1] - pts[k]);
                // Step k is signs[k-1], step k+1 is signs[k].
                let (s1, s2) = (signs[k - 1], signs[k]);
                let mut cut = pts.to_vec();
                cut.remove(k);
                let mut eval_cut = |c: SignClass| {
                    let mut cs = Vec::with_capacity(signs.len() - 1);
                    cs.extend_from_slice(&signs[..k - 1]);
                    cs.push(c);
                    cs.extend_from_slice(&signs[k + 1..]);
                    self.real_rec(&cut, &cs, side, memo)
                };
                total += match merge_steps(first, second, s1, s2) {
                    Merge::Vanish => 0,
                    Merge::Single(a, c) => a * eval_cut(c),
                    Merge::Split([c1, c2]) => eval_cut(c1) + eval_cut(c2),
                };
                let r = reflected_corner(pts, k);
                if self.contains(r) {
                    let mut refl = pts.to_vec();
                    refl[k] = r;
                    let mut rs = signs.to_vec();
                    rs.swap(k - 1, k);
                    total += self.real_rec(&refl, &rs, side, memo);
                }
                total
            }
        };
        memo.insert(key, value);
        value
    }

    /// Number of real curves through points in the quadrants `quadrants`
    /// (one per marked point), summed over paths with multiplicity `μ^R`.
    pub fn real_signed_count(&self, genus: i64, quadrants: &[Quadrant]) -> Result<u64> {
        let steps = self.steps_for_genus(genus)?;
        if quadrants.len() != steps {
            return Err(Error::SignCount { expected: steps, got: quadrants.len() });
        }
        let paths = self.enumerate(steps);
        let values = map_with_state(
            self.execution(),
            &paths,
            || (RealMemo::new(), RealMemo::new()),
            |(mp, mm), path| {
                let sp = SignedPath::from_quadrants(path.clone(), quadrants).expect("valid steps");
                let plus = self.real_rec(sp.path.points(), &sp.signs, Side::Plus, mp);
                if plus == 0 {
                    return 0;
                }
                plus * self.real_rec(sp.path.points(), &sp.signs, Side::Minus, mm)
            },
        );
        Ok(values.into_iter().sum())
    }

    /// `ν^R±(γ)`.
    pub fn nu_real_side(&self, path: &LatticePath, side: Side) -> i64 {
        let mut memo = Memo::new();
        self.skeleton(path.points(), side, &welschinger_triangle_weight, &mut memo)
    }

    /// `ν^R(γ) = ν^R₊(γ)·ν^R₋(γ)`.
    pub fn nu_real(&self, path: &LatticePath) -> i64 {
        self.nu_real_side(path, Side::Plus) * self.nu_real_side(path, Side::Minus)
    }

    /// Per-path `ν^R` values for a batch, in input order.
    pub fn nu_values(&self, paths: &[LatticePath]) -> Vec<i64> {
        map_with_state(
            self.execution(),
            paths,
            || (Memo::new(), Memo::new()),
            |(mp, mm), path| {
                let plus = self.skeleton(path.points(), Side::Plus, &welschinger_triangle_weight, mp);
                if plus == 0 {
                    return 0;
                }
                plus * self.skeleton(path.points(), Side::Minus, &welschinger_triangle_weight, mm)
            },
        )
    }

    /// Curves counted with the tropical Welschinger sign, via `ν^R`.
    pub fn welschinger_count(&self, genus: i64) -> Result<i64> {
        let paths = self.enumerate(self.steps_for_genus(genus)?);
        Ok(self.nu_values(&paths).into_iter().sum())
    }
}

pub fn mu_real_side(polygon: &LatticePolygon, order: &LinearOrder, signed: &SignedPath, side: Side) -> Result<u64> {
    let pc = PathCounter::new(polygon, *order)?;
    pc.validate(&signed.path)?;
    Ok(pc.mu_real_side(signed, side))
}

pub fn real_signed_count(
    polygon: &LatticePolygon,
    genus: i64,
    order: &LinearOrder,
    quadrants: &[Quadrant],
) -> Result<u64> {
    PathCounter::new(polygon, *order)?.real_signed_count(genus, quadrants)
}

pub fn nu_real_side(polygon: &LatticePolygon, order: &LinearOrder, path: &LatticePath, side: Side) -> Result<i64> {
    let pc = PathCounter::new(polygon, *order)?;
    pc.validate(path)?;
    Ok(pc.nu_real_side(path, side))
}

pub fn welschinger_count(polygon: &LatticePolygon, genus: i64, order: &LinearOrder) -> Result<i64> {
    PathCounter::new(polygon, *order)?.welschinger_count(genus)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum TreeNode {
    Internal,
    Leaf(SignClass),
    End,
    Gone,
}

/// One component of the cut curve as a tree whose leaves carry signs.
#[derive(Clone, Debug)]
struct SignedTree {
    kind: Vec<TreeNode>,
    /// `(neighbor, edge vector)` lists.
    adj: Vec<Vec<(usize, LatticePoint)>>,
}

impl SignedTree {
    fn leaf_sign(&self, n: usize) -> Option<SignClass> {
        match self.kind[n] {
            TreeNode::Leaf(s) => Some(s),
            _ => None,
        }
    }

    /// Trivalent vertices with two signed leaves, as `(C, A, B, D)` with `A < B`.
    fn candidates(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::new();
        for c in 0..self.kind.len() {
            if self.kind[c] != TreeNode::Internal {
                continue;
            }
            let mut leaves: Vec<usize> =
                self.adj[c].iter().map(|e| e.0).filter(|&n| self.leaf_sign(n).is_some()).collect();
            leaves.sort();
            if leaves.len() == 2 {
                let d = self.adj[c].iter().map(|e| e.0).find(|n| !leaves.contains(n)).unwrap();
                out.push((c, leaves[0], leaves[1], d));
            }
        }
        out.sort_by_key(|&(c, a, b, _)| (a, b, c));
        out
    }

    fn vector(&self, from: usize, to: usize) -> LatticePoint {
        self.adj[from].iter().find(|e| e.0 == to).unwrap().1
    }

    fn with_merge(&self, c: usize, a: usize, b: usize, sign: SignClass) -> Self {
        let mut t = self.clone();
        t.kind[a] = TreeNode::Gone;
        t.kind[b] = TreeNode::Gone;
        t.kind[c] = TreeNode::Leaf(sign);
        t.adj[c].retain(|e| e.0 != a && e.0 != b);
        t.adj[a].clear();
        t.adj[b].clear();
        t
    }

    fn multiplicity(&self, pick: &mut dyn FnMut(usize) -> usize) -> Result<u64> {
        let cands = self.candidates();
        if cands.is_empty() {
            if self.kind.contains(&TreeNode::Internal) {
                return Err(Error::IncompatibleGraph(
                    "a trivalent vertex is never reached by two marked leaves".into(),
                ));
            }
            return Ok(1);
        }
        let (c, a, b, d) = cands[pick(cands.len()).min(cands.len() - 1)];
        let (va, vb, vd) = (self.vector(a, c), self.vector(b, c), self.vector(c, d));
        let (sa, sb) = (self.leaf_sign(a).unwrap(), self.leaf_sign(b).unwrap());
        let (odd_a, odd_b) = (!va.is_even(), !vb.is_even());

        if odd_a && odd_b && Quadrant::of_vector(va) == Quadrant::of_vector(vb) {
            // The third edge is even; equal phases split into two choices of sign.
            if sa != sb {
                return Ok(0);
            }
            let mut total = 0;
            for q in sa.members() {
                total += self.with_merge(c, a, b, SignClass::of(vd, q)?).multiplicity(pick)?;
            }
            Ok(total)
        } else if odd_a && odd_b {
            // Compatible phases pair the six representatives off across the three edges,
            // so the new class is the one missing the element shared by A and B.
            let shared = sa.members().find(|q| sb.contains(*q)).expect("distinct odd classes meet");
            let sd = SignClass::of(vd, shared.plus(Quadrant::of_vector(va)))?;
            self.with_merge(c, a, b, sd).multiplicity(pick)
        } else if odd_a != odd_b {
            let (odd, even) = if odd_a { (sa, sb) } else { (sb, sa) };
            let point = even.members().next().unwrap();
            if !odd.contains(point) {
                return Ok(0);
            }
            Ok(2 * self.with_merge(c, a, b, SignClass::of(vd, point)?).multiplicity(pick)?)
        } else {
            if sa != sb {
                return Ok(0);
            }
            Ok(4 * self.with_merge(c, a, b, sa).multiplicity(pick)?)
        }
    }
}

/// Real multiplicity of a tropical curve through a signed configuration:
/// the product over the cut components of the leaf-merging recursion.
/// `signs[i]` is the class at the marked point with index `i`.
pub fn curve_real_multiplicity(graph: &MarkedDualGraph, signs: &[SignClass]) -> Result<u64> {
    curve_real_multiplicity_with(graph, signs, &mut |_| 0)
}

/// As [`curve_real_multiplicity`], with `pick(n)` choosing which of the `n`
/// eligible leaf pairs (sorted by leaf indices) to merge next.
pub fn curve_real_multiplicity_with(
    graph: &MarkedDualGraph,
    signs: &[SignClass],
    pick: &mut dyn FnMut(usize) -> usize,
) -> Result<u64> {
    graph.check_pruning()?;
    for (_, e) in graph.marked_edges() {
        let i = e.marked.unwrap();
        let s = *signs.get(i).ok_or(Error::SignCount { expected: i + 1, got: signs.len() })?;
        if !s.is_valid_for(e.vector) {
            return Err(Error::InvalidSignClass { step: e.vector, mask: s.mask() });
        }
    }
    let mut total = 1;
    for comp in graph.components() {
        let mut tree = SignedTree { kind: Vec::new(), adj: Vec::new() };
        let mut local = HashMap::new();
        for &n in &comp.nodes {
            local.insert(n, tree.kind.len());
            tree.kind.push(match graph.nodes[n] {
                DualNode::End => TreeNode::End,
                _ => TreeNode::Internal,
            });
            tree.adj.push(Vec::new());
        }
        for &ei in &comp.edges {
            let e = &graph.edges[ei];
            let (a, b) = (local[&e.nodes[0]], local[&e.nodes[1]]);
            tree.adj[a].push((b, e.vector));
            tree.adj[b].push((a, e.vector));
        }
        for &(ei, n) in &comp.cut_ends {
            let e = &graph.edges[ei];
            let leaf = tree.kind.len();
            tree.kind.push(TreeNode::Leaf(signs[e.marked.unwrap()]));
            tree.adj.push(vec![(local[&n], e.vector)]);
            tree.adj[local[&n]].push((leaf, e.vector));
        }
        // Smooth out crossing strands so every internal node is trivalent.
        for &n in &comp.nodes {
            if let DualNode::Strand { .. } = graph.nodes[n] {
                let s = local[&n];
                let [(x, v), (y, _)] = [tree.adj[s][0], tree.adj[s][1]];
                tree.adj[x].iter_mut().filter(|e| e.0 == s).for_each(|e| e.0 = y);
                tree.adj[y].iter_mut().filter(|e| e.0 == s).for_each(|e| *e = (x, v));
                tree.adj[s].clear();
                tree.kind[s] = TreeNode::Gone;
            }
        }
        total *= tree.multiplicity(pick)?;
        if total == 0 {
            return Ok(0);
        }
    }
    Ok(total)
}
