//! Lattice subdivisions of a polygon, shared by the path decoder and the
//! tropical-polynomial side.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::lattice::{convex_hull, orient, LatticePoint, LatticePolygon};

/// A 2-cell of a subdivision, stored by its corners in counterclockwise order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub vertices: Vec<LatticePoint>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellKind {
    Triangle,
    Parallelogram,
    Other,
}

impl Cell {
    /// Cell spanned by the given points (their convex hull corners, counterclockwise).
    pub fn from_points(points: &[LatticePoint]) -> Self {
        let mut vertices = convex_hull(points);
        if let Some(start) = (0..vertices.len()).min_by_key(|&i| vertices[i]) {
            vertices.rotate_left(start);
        }
        Self { vertices }
    }

    pub fn triangle(t: [LatticePoint; 3]) -> Self {
        Self::from_points(&t)
    }

    pub fn kind(&self) -> CellKind {
        let v = &self.vertices;
        match v.len() {
            3 => CellKind::Triangle,
            4 if v[0] + v[2] == v[1] + v[3] => CellKind::Parallelogram,
            _ => CellKind::Other,
        }
    }

    pub fn double_area(&self) -> i64 {
        let n = self.vertices.len();
        (0..n).map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n])).sum()
    }

    pub fn sides(&self) -> impl Iterator<Item = (LatticePoint, LatticePoint)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }
}

/// An edge of a subdivision, after splitting cell sides at every subdivision node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivisionEdge {
    /// Endpoints with `a < b`.
    pub a: LatticePoint,
    pub b: LatticePoint,
    /// `(cell index, side index within the cell)` for each adjacent cell.
    pub cells: Vec<(usize, usize)>,
}

impl SubdivisionEdge {
    pub fn vector(&self) -> LatticePoint {
        self.b - self.a
    }

    pub fn lattice_length(&self) -> i64 {
        self.vector().lattice_length()
    }

    pub fn is_interior(&self) -> bool {
        self.cells.len() == 2
    }
}

/// A subdivision of a lattice polygon into lattice polygons.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualSubdivision {
    pub ambient: LatticePolygon,
    pub cells: Vec<Cell>,
    /// Lattice points that are vertices of the subdivision. Contains every
    /// cell corner, plus any non-corner points lying on a face of the lift.
    pub nodes: BTreeSet<LatticePoint>,
}

impl DualSubdivision {
    pub fn new(ambient: LatticePolygon, cells: Vec<Cell>) -> Self {
        let nodes = cells.iter().flat_map(|c| c.vertices.iter().copied()).collect();
        Self { ambient, cells, nodes }
    }

    pub fn with_nodes(
        ambient: LatticePolygon,
        cells: Vec<Cell>,
        extra: impl IntoIterator<Item = LatticePoint>,
    ) -> Self {
        let mut s = Self::new(ambient, cells);
        s.nodes.extend(extra);
        s
    }

    pub fn triangle_count(&self) -> usize {
        self.cells.iter().filter(|c| c.kind() == CellKind::Triangle).count()
    }

    pub fn parallelogram_count(&self) -> usize {
        self.cells.iter().filter(|c| c.kind() == CellKind::Parallelogram).count()
    }

    /// Only triangles and parallelograms.
    pub fn is_simple(&self) -> bool {
        self.cells.iter().all(|c| c.kind() != CellKind::Other)
    }

    /// Every cell is a triangle of area ½.
    pub fn is_unimodular(&self) -> bool {
        self.cells.iter().all(|c| c.kind() == CellKind::Triangle && c.double_area() == 1)
    }

    pub fn cells_double_area(&self) -> i64 {
        self.cells.iter().map(Cell::double_area).sum()
    }

    /// All edges, each cell side split at the subdivision nodes lying on it.
    /// Sorted by endpoints.
    pub fn edges(&self) -> Vec<SubdivisionEdge> {
        let mut map: BTreeMap<(LatticePoint, LatticePoint), Vec<(usize, usize)>> = BTreeMap::new();
        for (ci, cell) in self.cells.iter().enumerate() {
            for (si, (a, b)) in cell.sides().enumerate() {
                let step = (b - a).primitive();
                let mut prev = a;
                let mut cur = a;
                while cur != b {
                    cur = cur + step;
                    if cur == b || self.nodes.contains(&cur) {
                        let key = if prev < cur { (prev, cur) } else { (cur, prev) };
                        map.entry(key).or_default().push((ci, si));
                        prev = cur;
                    }
                }
            }
        }
        map.into_iter().map(|((a, b), cells)| SubdivisionEdge { a, b, cells }).collect()
    }

    /// Edges lying on the boundary of the ambient polygon.
    pub fn boundary_edges(&self) -> Vec<SubdivisionEdge> {
        self.edges().into_iter().filter(|e| self.edge_on_boundary(e.a, e.b)).collect()
    }

    pub fn edge_on_boundary(&self, a: LatticePoint, b: LatticePoint) -> bool {
        self.ambient.sides().any(|(u, v)| orient(u, v, a) == 0 && orient(u, v, b) == 0)
    }

    /// Checks that the cells tile the ambient polygon: every cell sits inside
    /// it, areas add up, each interior edge borders exactly two cells from
    /// opposite sides, and every other edge lies on the boundary.
    pub fn tiles_ambient(&self) -> bool {
        if self.cells_double_area() != self.ambient.double_area() {
            return false;
        }
        if self.cells.iter().any(|c| c.double_area() <= 0 || !c.vertices.iter().all(|&v| self.ambient.contains(v))) {
            return false;
        }
        self.edges().iter().all(|e| match e.cells.as_slice() {
            [_] => self.edge_on_boundary(e.a, e.b),
            [(c1, s1), (c2, s2)] => {
                // Opposite traversal directions means the cells lie on opposite sides.
                let d1 = side_direction(&self.cells[*c1], *s1);
                let d2 = side_direction(&self.cells[*c2], *s2);
                d1.primitive() == -d2.primitive() && !self.edge_on_boundary(e.a, e.b)
            }
            _ => false,
        })
    }
}

fn side_direction(cell: &Cell, side: usize) -> LatticePoint {
    let n = cell.vertices.len();
    cell.vertices[(side + 1) % n] - cell.vertices[side]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    #[test]
    fn cell_kinds() {
        assert_eq!(Cell::triangle([pt(0, 0), pt(1, 0), pt(0, 1)]).kind(), CellKind::Triangle);
        let par = Cell::from_points(&[pt(0, 0), pt(1, 0), pt(2, 1), pt(1, 1)]);
        assert_eq!(par.kind(), CellKind::Parallelogram);
        assert_eq!(par.double_area(), 2);
        let trap = Cell::from_points(&[pt(0, 0), pt(2, 0), pt(1, 1), pt(0, 1)]);
        assert_eq!(trap.kind(), CellKind::Other);
    }

    #[test]
    fn square_split_into_two_triangles() {
        let sq = LatticePolygon::rectangle(1, 1);
        let s = DualSubdivision::new(
            sq,
            vec![Cell::triangle([pt(0, 0), pt(1, 0), pt(1, 1)]), Cell::triangle([pt(0, 0), pt(1, 1), pt(0, 1)])],
        );
        assert!(s.tiles_ambient());
        assert_eq!(s.edges().len(), 5);
        assert_eq!(s.boundary_edges().len(), 4);
        assert!(s.is_unimodular());
    }

    #[test]
    fn overlapping_cells_do_not_tile() {
        let sq = LatticePolygon::rectangle(1, 1);
        let s = DualSubdivision::new(
            sq,
            vec![Cell::triangle([pt(0, 0), pt(1, 0), pt(1, 1)]), Cell::triangle([pt(0, 0), pt(1, 0), pt(0, 1)])],
        );
        assert!(!s.tiles_ambient());
    }

    #[test]
    fn sides_split_at_nodes() {
        let d2 = LatticePolygon::projective(2);
        let s = DualSubdivision::with_nodes(d2.clone(), vec![Cell::from_points(d2.vertices())], d2.lattice_points());
        assert_eq!(s.edges().len(), 6);
        assert!(s.tiles_ambient());
    }
}
