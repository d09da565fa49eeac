//! The combinatorial curve dual to a decoded subdivision, with the edges that
//! pass through the marked points singled out.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::path::DecodedCurve;
use crate::subdivision::CellKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DualNode {
    /// A trivalent vertex, dual to a triangle.
    Trivalent { cell: usize },
    /// One of the two straight strands through a crossing, dual to a
    /// parallelogram. Strand 0 joins sides 0 and 2, strand 1 sides 1 and 3.
    Strand { cell: usize, strand: u8 },
    /// The point at infinity of an end, dual to a boundary edge.
    End,
}

impl DualNode {
    pub fn valence(self) -> usize {
        match self {
            DualNode::Trivalent { .. } => 3,
            DualNode::Strand { .. } => 2,
            DualNode::End => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualEdge {
    pub nodes: [usize; 2],
    /// The dual subdivision edge as a vector. Its lattice length is the weight.
    pub vector: LatticePoint,
    /// Index of the marked point on this edge, i.e. of the path step it is dual to.
    pub marked: Option<usize>,
}

impl DualEdge {
    pub fn weight(&self) -> i64 {
        self.vector.lattice_length()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedDualGraph {
    pub nodes: Vec<DualNode>,
    pub edges: Vec<DualEdge>,
}

/// A connected piece of the graph left after cutting every marked edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub nodes: Vec<usize>,
    /// Unmarked edges inside the component.
    pub edges: Vec<usize>,
    /// `(marked edge, node of this component it was cut from)`.
    pub cut_ends: Vec<(usize, usize)>,
}

impl MarkedDualGraph {
    pub fn trivalent_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, DualNode::Trivalent { .. })).count()
    }

    pub fn crossing_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, DualNode::Strand { strand: 0, .. })).count()
    }

    pub fn end_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, DualNode::End)).count()
    }

    pub fn marked_edges(&self) -> impl Iterator<Item = (usize, &DualEdge)> {
        self.edges.iter().enumerate().filter(|(_, e)| e.marked.is_some())
    }

    /// The pieces left after deleting the interiors of the marked edges.
    pub fn components(&self) -> Vec<Component> {
        let mut parent: Vec<usize> = (0..self.nodes.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in self.edges.iter().filter(|e| e.marked.is_none()) {
            let (a, b) = (find(&mut parent, e.nodes[0]), find(&mut parent, e.nodes[1]));
            parent[a] = b;
        }
        let mut groups: BTreeMap<usize, Component> = BTreeMap::new();
        for n in 0..self.nodes.len() {
            let r = find(&mut parent, n);
            groups
                .entry(r)
                .or_insert_with(|| Component { nodes: vec![], edges: vec![], cut_ends: vec![] })
                .nodes
                .push(n);
        }
        for (i, e) in self.edges.iter().enumerate() {
            for &n in &e.nodes {
                let r = find(&mut parent, n);
                let comp = groups.get_mut(&r).unwrap();
                if e.marked.is_some() {
                    comp.cut_ends.push((i, n));
                } else if n == e.nodes[0] {
                    comp.edges.push(i);
                }
            }
        }
        groups.into_values().collect()
    }

    /// Checks that every piece left after cutting the marked edges is a tree
    /// with exactly one end at infinity.
    pub fn check_pruning(&self) -> Result<()> {
        for (i, c) in self.components().iter().enumerate() {
            if c.edges.len() + 1 != c.nodes.len() {
                return Err(Error::IncompatibleGraph(format!("component {i} contains a cycle")));
            }
            let ends = c.nodes.iter().filter(|&&n| self.nodes[n] == DualNode::End).count();
            if ends != 1 {
                return Err(Error::IncompatibleGraph(format!("component {i} has {ends} ends")));
            }
        }
        Ok(())
    }
}

/// Builds the marked dual graph of a decoded curve.
pub fn marked_dual_graph(curve: &DecodedCurve) -> Result<MarkedDualGraph> {
    let sub = &curve.subdivision;
    let mut nodes = Vec::new();
    // First node index of each cell.
    let mut cell_node = Vec::with_capacity(sub.cells.len());
    for (ci, cell) in sub.cells.iter().enumerate() {
        cell_node.push(nodes.len());
        match cell.kind() {
            CellKind::Triangle => nodes.push(DualNode::Trivalent { cell: ci }),
            CellKind::Parallelogram => {
                nodes.push(DualNode::Strand { cell: ci, strand: 0 });
                nodes.push(DualNode::Strand { cell: ci, strand: 1 });
            }
            CellKind::Other => {
                return Err(Error::MalformedSubdivision(format!("cell {ci} is not a triangle or parallelogram")))
            }
        }
    }
    let slot = |ci: usize, side: usize| match sub.cells[ci].kind() {
        CellKind::Parallelogram => cell_node[ci] + side % 2,
        _ => cell_node[ci],
    };

    let mut edges = Vec::new();
    let mut index = BTreeMap::new();
    for e in sub.edges() {
        let ends = match e.cells.as_slice() {
            [(c1, s1), (c2, s2)] => [slot(*c1, *s1), slot(*c2, *s2)],
            [(c, s)] => {
                if !sub.edge_on_boundary(e.a, e.b) {
                    return Err(Error::MalformedSubdivision(format!(
                        "edge {}-{} has one cell but is interior",
                        e.a, e.b
                    )));
                }
                nodes.push(DualNode::End);
                [slot(*c, *s), nodes.len() - 1]
            }
            _ => {
                return Err(Error::MalformedSubdivision(format!(
                    "edge {}-{} borders {} cells",
                    e.a,
                    e.b,
                    e.cells.len()
                )))
            }
        };
        index.insert((e.a, e.b), edges.len());
        edges.push(DualEdge { nodes: ends, vector: e.b - e.a, marked: None });
    }

    for (i, &(a, b)) in curve.marked_edges.iter().enumerate() {
        let key = if a < b { (a, b) } else { (b, a) };
        let Some(&ei) = index.get(&key) else {
            return Err(Error::MalformedSubdivision(format!("marked step {a}-{b} is not an edge")));
        };
        if edges[ei].marked.replace(i).is_some() {
            return Err(Error::MalformedSubdivision(format!("step {a}-{b} marked twice")));
        }
    }

    let mut degree = vec![0usize; nodes.len()];
    for e in &edges {
        degree[e.nodes[0]] += 1;
        degree[e.nodes[1]] += 1;
    }
    if let Some(n) = (0..nodes.len()).find(|&n| degree[n] != nodes[n].valence()) {
        return Err(Error::MalformedSubdivision(format!(
            "dual node {n} has {} edges, expected {}",
            degree[n],
            nodes[n].valence()
        )));
    }
    Ok(MarkedDualGraph { nodes, edges })
}
