//! Checkerboard (Tait) graphs with signed, lettered edges.
//!
//! At every crossing the two black quadrant faces give an edge of `T1` and
//! the two white ones give the dual edge of `T2`. The edge across the
//! quadrants merged by the A-splicing (quadrants 1 and 3) is positive, its
//! dual is negative. Both edges carry letter α at a positive crossing and β
//! at a negative one.

use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::diagram::{Color, PlaneMap, Sign};
use crate::error::Result;
use crate::union_find::UnionFind;
use crate::LinkDiagram;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    Alpha,
    Beta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeSign {
    Positive,
    Negative,
}

impl EdgeSign {
    pub fn flip(self) -> EdgeSign {
        match self {
            EdgeSign::Positive => EdgeSign::Negative,
            EdgeSign::Negative => EdgeSign::Positive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeLabel {
    pub letter: Letter,
    pub sign: EdgeSign,
}

impl EdgeLabel {
    /// Contribution of this edge to η: +1 for α+, −1 for β−, else 0.
    pub fn eta(self) -> i32 {
        match (self.letter, self.sign) {
            (Letter::Alpha, EdgeSign::Positive) => 1,
            (Letter::Beta, EdgeSign::Negative) => -1,
            _ => 0,
        }
    }

    /// The label after a crossing change: α+ ↔ β−, α− ↔ β+.
    pub fn changed(self) -> EdgeLabel {
        EdgeLabel {
            letter: match self.letter {
                Letter::Alpha => Letter::Beta,
                Letter::Beta => Letter::Alpha,
            },
            sign: self.sign.flip(),
        }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = match self.letter {
            Letter::Alpha => 'α',
            Letter::Beta => 'β',
        };
        let s = match self.sign {
            EdgeSign::Positive => '+',
            EdgeSign::Negative => '-',
        };
        write!(f, "{l}{s}")
    }
}

/// One edge per crossing. `quadrants[i]` is the quadrant whose face is
/// vertex `ends[i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TaitEdge {
    pub crossing: usize,
    pub ends: [usize; 2],
    pub quadrants: [u8; 2],
    pub label: EdgeLabel,
}

impl TaitEdge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaitGraph {
    color: Color,
    /// Face index of each vertex.
    faces: Vec<usize>,
    /// Indexed by crossing.
    edges: Vec<TaitEdge>,
}

impl TaitGraph {
    pub fn color(&self) -> Color {
        self.color
    }

    pub fn vertex_count(&self) -> usize {
        self.faces.len()
    }

    pub fn vertex_face(&self, v: usize) -> usize {
        self.faces[v]
    }

    pub fn vertex_of_face(&self, face: usize) -> Option<usize> {
        self.faces.iter().position(|&f| f == face)
    }

    pub fn edges(&self) -> &[TaitEdge] {
        &self.edges
    }

    pub fn edge(&self, crossing: usize) -> &TaitEdge {
        &self.edges[crossing]
    }

    pub fn count_sign(&self, sign: EdgeSign) -> usize {
        self.edges.iter().filter(|e| e.label.sign == sign).count()
    }

    pub fn is_monochrome(&self) -> bool {
        let pos = self.count_sign(EdgeSign::Positive);
        pos == 0 || pos == self.edges.len()
    }

    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.vertex_count());
        for e in &self.edges {
            uf.union(e.ends[0], e.ends[1]);
        }
        uf.sets() <= 1
    }

    /// Whether the edge at `crossing` lies on a cycle made only of edges of
    /// its own sign.
    pub fn in_monochrome_cycle(&self, crossing: usize) -> bool {
        let e = &self.edges[crossing];
        if e.is_loop() {
            return true;
        }
        let mut uf = UnionFind::new(self.vertex_count());
        for f in &self.edges {
            if f.crossing != crossing && f.label.sign == e.label.sign {
                uf.union(f.ends[0], f.ends[1]);
            }
        }
        uf.same(e.ends[0], e.ends[1])
    }

    /// Spanning-tree count by the matrix-tree theorem, using fraction-free
    /// elimination on the reduced Laplacian. Loops are ignored.
    pub fn spanning_tree_count(&self) -> BigInt {
        let n = self.vertex_count();
        if n <= 1 {
            return BigInt::one();
        }
        let m = n - 1;
        let mut a = vec![vec![BigInt::zero(); m]; m];
        for e in self.edges.iter().filter(|e| !e.is_loop()) {
            let [u, v] = e.ends;
            for (x, y) in [(u, v), (v, u)] {
                if x < m {
                    a[x][x] += 1;
                    if y < m {
                        a[x][y] -= 1;
                    }
                }
            }
        }
        bareiss_determinant(a)
    }

    /// DOT rendering; vertices are named by face index.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph {name:?} {{\n");
        for &f in &self.faces {
            let _ = writeln!(out, "  f{f};");
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  f{} -- f{} [label=\"{}\", crossing={}];",
                self.faces[e.ends[0]], self.faces[e.ends[1]], e.label, e.crossing
            );
        }
        out.push_str("}\n");
        out
    }
}

fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * prev
}

/// The two Tait graphs of a connected diagram, over the black (`t1`) and
/// white (`t2`) faces of its plane map.
#[derive(Debug, Clone)]
pub struct TaitPair {
    map: PlaneMap,
    t1: TaitGraph,
    t2: TaitGraph,
}

impl TaitPair {
    pub fn new(map: PlaneMap) -> Self {
        let d = map.diagram();
        let mut vertex = vec![usize::MAX; map.face_count()];
        let mut black = Vec::new();
        let mut white = Vec::new();
        for (f, v) in vertex.iter_mut().enumerate() {
            let list = match map.color(f) {
                Color::Black => &mut black,
                Color::White => &mut white,
            };
            *v = list.len();
            list.push(f);
        }
        let mut e1 = Vec::with_capacity(d.crossing_count());
        let mut e2 = Vec::with_capacity(d.crossing_count());
        for c in 0..d.crossing_count() {
            let letter = match d.sign(c) {
                Sign::Positive => Letter::Alpha,
                Sign::Negative => Letter::Beta,
            };
            let edge = |quadrants: [u8; 2], sign: EdgeSign| TaitEdge {
                crossing: c,
                ends: quadrants.map(|k| vertex[map.quadrant_face(c, k)]),
                quadrants,
                label: EdgeLabel { letter, sign },
            };
            let a_pair = edge([1, 3], EdgeSign::Positive);
            let b_pair = edge([0, 2], EdgeSign::Negative);
            if map.color(map.quadrant_face(c, 1)) == Color::Black {
                e1.push(a_pair);
                e2.push(b_pair);
            } else {
                e1.push(b_pair);
                e2.push(a_pair);
            }
        }
        let t1 = TaitGraph {
            color: Color::Black,
            faces: black,
            edges: e1,
        };
        let t2 = TaitGraph {
            color: Color::White,
            faces: white,
            edges: e2,
        };
        TaitPair { map, t1, t2 }
    }

    /// Tait graphs of a connected diagram with the default marked arc.
    pub fn of(d: &LinkDiagram) -> Result<Self> {
        Ok(Self::new(PlaneMap::new(d)?))
    }

    pub fn map(&self) -> &PlaneMap {
        &self.map
    }

    pub fn t1(&self) -> &TaitGraph {
        &self.t1
    }

    pub fn t2(&self) -> &TaitGraph {
        &self.t2
    }

    /// The positive and the negative edge at `crossing`, as
    /// `(graph, edge)` pairs.
    pub fn signed_edges(&self, crossing: usize) -> [(&TaitGraph, &TaitEdge); 2] {
        let (a, b) = (&self.t1, &self.t2);
        if a.edges[crossing].label.sign == EdgeSign::Positive {
            [(a, &a.edges[crossing]), (b, &b.edges[crossing])]
        } else {
            [(b, &b.edges[crossing]), (a, &a.edges[crossing])]
        }
    }

    /// Labels after changing `crossing`; the graphs themselves are unchanged.
    /// Quadrant data of the changed pair refers to the original crossing.
    pub fn with_crossing_changed(&self, crossing: usize) -> TaitPair {
        let mut out = self.clone();
        for g in [&mut out.t1, &mut out.t2] {
            let e = &mut g.edges[crossing];
            e.label = e.label.changed();
        }
        out
    }

    /// Number of crossings whose positive edge lies on a positive cycle and
    /// whose negative edge lies on a negative cycle, minus one; that is, the
    /// predicted change of width and genus under a crossing change, in
    /// {-1, 0, 1}.
    pub fn predicted_change(&self, crossing: usize) -> i32 {
        let hits = self
            .signed_edges(crossing)
            .iter()
            .filter(|(g, e)| g.in_monochrome_cycle(e.crossing))
            .count() as i32;
        hits - 1
    }
}
