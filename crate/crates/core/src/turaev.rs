//! All-A and all-B splicings, the ribbon graphs they induce, and the genus of
//! the Turaev surface.
//!
//! The genus is computed by bouquet reduction of the Tait graphs, checked
//! against the closed form for the reduction and against the boundary walk
//! of the ribbon graph.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::diagram::surgery::Smoothing;
use crate::diagram::{PlaneMap, Slot};
use crate::error::{Error, Result};
use crate::tait::{EdgeSign, TaitGraph, TaitPair};
use crate::union_find::UnionFind;
use crate::LinkDiagram;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Splice {
    A,
    B,
}

impl Splice {
    pub fn smoothing(self) -> Smoothing {
        match self {
            Splice::A => Smoothing::A,
            Splice::B => Smoothing::B,
        }
    }

    pub fn other(self) -> Splice {
        match self {
            Splice::A => Splice::B,
            Splice::B => Splice::A,
        }
    }

    /// The quadrants merged into a channel by this splicing.
    fn channel(self) -> [u8; 2] {
        match self {
            Splice::A => [1, 3],
            Splice::B => [0, 2],
        }
    }

    /// The edge sign kept by bouquet reduction for this splicing.
    fn kept_sign(self) -> EdgeSign {
        match self {
            Splice::A => EdgeSign::Positive,
            Splice::B => EdgeSign::Negative,
        }
    }
}

/// A step of a splicing circle through a crossing: it enters at `entry` and
/// leaves at the partner slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Turn {
    pub crossing: usize,
    pub entry: u8,
    pub exit: u8,
}

/// The circles of a diagram with every crossing spliced the same way.
#[derive(Debug, Clone)]
pub struct SplicingState {
    pub choice: Splice,
    /// Circles through crossings, as turn sequences.
    pub circles: Vec<Vec<Turn>>,
    /// Crossingless circles.
    pub free_circles: usize,
}

impl SplicingState {
    pub fn circle_count(&self) -> usize {
        self.circles.len() + self.free_circles
    }
}

/// Circle count by union-find over slots: each slot is joined to its arc
/// partner and to its splicing partner.
pub fn circle_count(d: &LinkDiagram, choice: Splice) -> usize {
    let n = d.crossing_count();
    let mut uf = UnionFind::new(4 * n);
    let sm = choice.smoothing();
    for c in 0..n {
        for p in 0..4u8 {
            let s = Slot::new(c, p);
            let t = d.link(s);
            uf.union(4 * c + p as usize, 4 * t.crossing + t.pos as usize);
            uf.union(4 * c + p as usize, 4 * c + sm.partner(p) as usize);
        }
    }
    uf.sets() + d.unknot_count()
}

/// Traces the circles of the all-`choice` splicing.
pub fn splice_all(d: &LinkDiagram, choice: Splice) -> SplicingState {
    let n = d.crossing_count();
    let sm = choice.smoothing();
    let mut seen = vec![[false; 4]; n];
    let mut circles = Vec::new();
    for c in 0..n {
        for p in 0..4u8 {
            if seen[c][p as usize] {
                continue;
            }
            let mut turns = Vec::new();
            let mut entry = Slot::new(c, p);
            while !seen[entry.crossing][entry.pos as usize] {
                let exit = sm.partner(entry.pos);
                seen[entry.crossing][entry.pos as usize] = true;
                seen[entry.crossing][exit as usize] = true;
                turns.push(Turn {
                    crossing: entry.crossing,
                    entry: entry.pos,
                    exit,
                });
                entry = d.link(Slot::new(entry.crossing, exit));
            }
            circles.push(turns);
        }
    }
    SplicingState {
        choice,
        circles,
        free_circles: d.unknot_count(),
    }
}

/// A graph with a rotation system. Half-edge `2c + j` is the end of edge `c`
/// at the `j`-th turn of crossing `c`.
#[derive(Debug, Clone)]
pub struct RibbonGraph {
    pub choice: Splice,
    /// Cyclic half-edge order around each vertex.
    pub rotation: Vec<Vec<usize>>,
    /// Vertex of each half-edge.
    pub vertex_of: Vec<usize>,
    pub faces: Vec<Vec<usize>>,
}

impl RibbonGraph {
    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.vertex_of.len() / 2
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    pub fn genus(&self) -> Result<i64> {
        let chi = self.euler_characteristic();
        if chi > 2 || (2 - chi) % 2 != 0 {
            return Err(Error::Invariant(format!(
                "ribbon graph has Euler characteristic {chi}"
            )));
        }
        Ok((2 - chi) / 2)
    }

    /// DOT rendering; the tail and head labels of an edge give its position
    /// in the rotation at each end.
    pub fn to_dot(&self, name: &str) -> String {
        let mut port = vec![0usize; self.vertex_of.len()];
        for rot in &self.rotation {
            for (i, &h) in rot.iter().enumerate() {
                port[h] = i;
            }
        }
        let mut out = format!("graph {name:?} {{\n");
        for v in 0..self.vertex_count() {
            let _ = writeln!(out, "  v{v} [label=\"{}\"];", self.rotation[v].len());
        }
        for c in 0..self.edge_count() {
            let (h, k) = (2 * c, 2 * c + 1);
            let _ = writeln!(
                out,
                "  v{} -- v{} [label=\"{c}\", taillabel=\"{}\", headlabel=\"{}\"];",
                self.vertex_of[h], self.vertex_of[k], port[h], port[k]
            );
        }
        out.push_str("}\n");
        out
    }
}

/// The ribbon graph of the all-`choice` splicing of a non-split diagram.
///
/// Each circle is contracted to a vertex and its edges are ordered along the
/// circle, oriented counterclockwise at even nesting depth and clockwise at
/// odd depth. Depth is measured from the region holding face 0 of the plane
/// map, which plays the unbounded region.
pub fn ribbon_graph(map: &PlaneMap, choice: Splice) -> Result<RibbonGraph> {
    let d = map.diagram();
    let n = d.crossing_count();
    let state = splice_all(d, choice);

    // Regions of the spliced plane are unions of faces glued along channels.
    let mut regions = UnionFind::new(map.face_count());
    let [c1, c2] = choice.channel();
    for c in 0..n {
        regions.union(map.quadrant_face(c, c1), map.quadrant_face(c, c2));
    }

    // The two regions beside each circle, as (left, right) in trace order.
    let mut sides = Vec::with_capacity(state.circles.len());
    for turns in &state.circles {
        let t = turns[0];
        let (pocket, left_is_pocket) = if t.exit == (t.entry + 1) % 4 {
            (t.entry, false)
        } else {
            (t.exit, true)
        };
        let pocket_region = regions.find(map.quadrant_face(t.crossing, pocket));
        let channel_region = regions.find(map.quadrant_face(t.crossing, pocket + 1));
        sides.push(if left_is_pocket {
            (pocket_region, channel_region)
        } else {
            (channel_region, pocket_region)
        });
    }

    // Regions and circles form a tree; walk it from the outer region.
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); map.face_count()];
    for (i, &(l, r)) in sides.iter().enumerate() {
        adj[l].push((i, r));
        adj[r].push((i, l));
    }
    let root = regions.find(0);
    let mut depth = vec![usize::MAX; map.face_count()];
    depth[root] = 0;
    let mut reversed = vec![false; state.circles.len()];
    let mut queue = VecDeque::from([root]);
    let mut visited_circles = 0;
    while let Some(x) = queue.pop_front() {
        for &(circle, y) in &adj[x] {
            if depth[y] != usize::MAX {
                continue;
            }
            depth[y] = depth[x] + 1;
            visited_circles += 1;
            // Counterclockwise means the inside (region y) is on the left.
            let want_inside_left = depth[x] % 2 == 0;
            reversed[circle] = (sides[circle].0 == y) != want_inside_left;
            queue.push_back(y);
        }
    }
    if visited_circles != state.circles.len() {
        return Err(Error::Invariant(
            "splicing circles do not form a nesting tree".into(),
        ));
    }

    // The turn through slot 0 is end 0 of its edge.
    let half_edge = |t: &Turn| 2 * t.crossing + usize::from(t.entry != 0 && t.exit != 0);
    let mut rotation = Vec::with_capacity(state.circles.len());
    let mut vertex_of = vec![usize::MAX; 2 * n];
    for (v, turns) in state.circles.iter().enumerate() {
        let mut order: Vec<usize> = turns.iter().map(half_edge).collect();
        if reversed[v] {
            order.reverse();
        }
        for &h in &order {
            vertex_of[h] = v;
        }
        rotation.push(order);
    }

    let mut next = vec![usize::MAX; 2 * n];
    for rot in &rotation {
        for (i, &h) in rot.iter().enumerate() {
            next[h] = rot[(i + 1) % rot.len()];
        }
    }
    let mut seen = vec![false; 2 * n];
    let mut faces = Vec::new();
    for start in 0..2 * n {
        if seen[start] {
            continue;
        }
        let mut face = Vec::new();
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            face.push(h);
            h = next[h ^ 1];
        }
        faces.push(face);
    }
    Ok(RibbonGraph {
        choice,
        rotation,
        vertex_of,
        faces,
    })
}

/// Vertices and loops of the bouquet left after deleting the edges not of
/// `keep` and contracting the non-loop kept edges one at a time.
pub fn bouquet_reduce(g: &TaitGraph, keep: EdgeSign) -> (usize, usize) {
    let mut edges: Vec<[usize; 2]> = g
        .edges()
        .iter()
        .filter(|e| e.label.sign == keep)
        .map(|e| e.ends)
        .collect();
    let mut vertices = g.vertex_count();
    while let Some(i) = edges.iter().position(|[u, v]| u != v) {
        let [keep_v, gone] = edges.swap_remove(i);
        for e in edges.iter_mut() {
            for end in e.iter_mut() {
                if *end == gone {
                    *end = keep_v;
                }
            }
        }
        vertices -= 1;
    }
    (vertices, edges.len())
}

/// The closed form of [`bouquet_reduce`]: components of the kept subgraph
/// and its cycle rank.
pub fn bouquet_closed_form(g: &TaitGraph, keep: EdgeSign) -> (usize, usize) {
    let mut uf = UnionFind::new(g.vertex_count());
    let mut kept = 0;
    for e in g.edges().iter().filter(|e| e.label.sign == keep) {
        uf.union(e.ends[0], e.ends[1]);
        kept += 1;
    }
    let comps = uf.sets();
    (comps, kept + comps - g.vertex_count())
}

/// Cellulation data of one non-split part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartSurface {
    pub v: usize,
    pub e: usize,
    pub f: usize,
    pub genus: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuraevSurface {
    /// One entry per split component; crossingless circles give spheres with
    /// `V = F = 1`, `E = 0`.
    pub parts: Vec<PartSurface>,
    pub circles_a: usize,
    pub circles_b: usize,
}

impl TuraevSurface {
    pub fn v(&self) -> usize {
        self.parts.iter().map(|p| p.v).sum()
    }

    pub fn e(&self) -> usize {
        self.parts.iter().map(|p| p.e).sum()
    }

    pub fn f(&self) -> usize {
        self.parts.iter().map(|p| p.f).sum()
    }

    pub fn chi(&self) -> i64 {
        self.parts.iter().map(|p| 2 - 2 * p.genus).sum()
    }

    pub fn genera(&self) -> Vec<i64> {
        self.parts.iter().map(|p| p.genus).collect()
    }

    /// Genus of a non-split diagram.
    pub fn genus(&self) -> Option<i64> {
        match self.parts.as_slice() {
            [p] => Some(p.genus),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "V": self.v(),
            "E": self.e(),
            "F": self.f(),
            "chi": self.chi(),
            "genus": self.genera(),
            "circles_A": self.circles_a,
            "circles_B": self.circles_b,
        })
    }
}

/// Genus of one non-split part with crossings, cross-checked three ways.
pub fn part_surface(d: &LinkDiagram) -> Result<PartSurface> {
    let pair = TaitPair::of(d)?;
    let (v, f) = bouquet_counts(&pair)?;
    let e = d.crossing_count();
    let twice = 2 + e as i64 - v as i64 - f as i64;
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::Invariant(format!(
            "V = {v}, E = {e}, F = {f} give a non-integral genus"
        )));
    }
    let genus = twice / 2;

    let (ca, cb) = (circle_count(d, Splice::A), circle_count(d, Splice::B));
    if (ca, cb) != (v, f) {
        return Err(Error::Invariant(format!(
            "bouquet counts ({v}, {f}) disagree with splicing circles ({ca}, {cb})"
        )));
    }
    for choice in [Splice::A, Splice::B] {
        let r = ribbon_graph(pair.map(), choice)?;
        let faces_expected = match choice {
            Splice::A => f,
            Splice::B => v,
        };
        if r.face_count() != faces_expected || r.genus()? != genus {
            return Err(Error::Invariant(format!(
                "ribbon graph {choice:?} has V = {}, F = {}, genus {}; bouquet genus is {genus}",
                r.vertex_count(),
                r.face_count(),
                r.genus()?
            )));
        }
    }
    Ok(PartSurface { v, e, f, genus })
}

/// `(V, F)` from bouquet reduction of `T1` keeping positive edges and `T2`
/// keeping negative edges.
pub fn bouquet_counts(pair: &TaitPair) -> Result<(usize, usize)> {
    let mut out = [0; 2];
    for (slot, (g, choice)) in out
        .iter_mut()
        .zip([(pair.t1(), Splice::A), (pair.t2(), Splice::B)])
    {
        let keep = choice.kept_sign();
        let (vx, loops) = bouquet_reduce(g, keep);
        if (vx, loops) != bouquet_closed_form(g, keep) {
            return Err(Error::Invariant(format!(
                "bouquet reduction of the {:?} graph gave ({vx}, {loops}), closed form {:?}",
                g.color(),
                bouquet_closed_form(g, keep)
            )));
        }
        *slot = vx + loops;
    }
    Ok((out[0], out[1]))
}

pub fn turaev_surface(d: &LinkDiagram) -> Result<TuraevSurface> {
    let mut parts = Vec::new();
    for part in d.split_components() {
        if part.crossing_count() == 0 {
            parts.push(PartSurface {
                v: 1,
                e: 0,
                f: 1,
                genus: 0,
            });
        } else {
            parts.push(part_surface(&part)?);
        }
    }
    Ok(TuraevSurface {
        parts,
        circles_a: circle_count(d, Splice::A),
        circles_b: circle_count(d, Splice::B),
    })
}

/// Turaev genus of a non-split diagram.
pub fn turaev_genus(d: &LinkDiagram) -> Result<i64> {
    let s = turaev_surface(d)?;
    s.genus()
        .ok_or_else(|| Error::NotConnected(format!("{} split components", s.parts.len())))
}

/// `Σ (2 − 2g)` over split components.
pub fn euler_characteristic(d: &LinkDiagram) -> Result<i64> {
    Ok(turaev_surface(d)?.chi())
}

/// Predicted `genus(d with crossing changed) − genus(d)`.
pub fn predict_genus_change(d: &LinkDiagram, crossing: usize) -> Result<i32> {
    if crossing >= d.crossing_count() {
        return Err(Error::UnknownCrossing(crossing));
    }
    Ok(TaitPair::of(d)?.predicted_change(crossing))
}
