use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{LinkDiagram, Slot};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

/// A face of the plane map, as the cyclic list of crossing corners on its
/// boundary. Corner `Slot { crossing, pos: k }` is quadrant `k`: the local
/// region between positions `k` and `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub corners: Vec<Slot>,
}

pub(crate) struct Faces {
    pub quad_face: Vec<[usize; 4]>,
    pub faces: Vec<Face>,
}

/// Traces the faces of the 4-valent map. Walking out of a crossing through
/// position `k` keeps quadrant `k` on the left; arriving at position `p` of
/// the next crossing, the walk leaves again through `p - 1`.
pub(crate) fn trace_faces(d: &LinkDiagram) -> Faces {
    let n = d.crossing_count();
    let mut quad_face = vec![[usize::MAX; 4]; n];
    let mut faces = Vec::new();
    for c in 0..n {
        for k in 0..4u8 {
            if quad_face[c][k as usize] != usize::MAX {
                continue;
            }
            let id = faces.len();
            let mut corners = Vec::new();
            let mut corner = Slot::new(c, k);
            while quad_face[corner.crossing][corner.pos as usize] == usize::MAX {
                quad_face[corner.crossing][corner.pos as usize] = id;
                corners.push(corner);
                corner = d.link(corner).rot(3);
            }
            faces.push(Face { corners });
        }
    }
    Faces { quad_face, faces }
}

/// The 4-valent plane graph of a connected diagram: crossings as vertices,
/// traced faces, a checkerboard coloring and a marked arc.
///
/// The face on the left of the marked arc is `q` and is colored black; the
/// face on its right is `r`.
#[derive(Debug, Clone)]
pub struct PlaneMap {
    diagram: LinkDiagram,
    quad_face: Vec<[usize; 4]>,
    faces: Vec<Face>,
    colors: Vec<Color>,
    marked: u32,
    q: usize,
    r: usize,
}

impl PlaneMap {
    /// Builds the map with the default marked arc (the smallest label).
    pub fn new(d: &LinkDiagram) -> Result<Self> {
        let arc = *d
            .arcs()
            .first()
            .ok_or_else(|| Error::NotConnected("no crossings".into()))?;
        Self::with_marked_arc(d, arc)
    }

    pub fn with_marked_arc(d: &LinkDiagram, marked: u32) -> Result<Self> {
        Self::build(d, marked, Color::Black)
    }

    /// As [`with_marked_arc`](Self::with_marked_arc) but with the colors
    /// swapped, so the face right of the marked arc is black.
    pub fn with_colors_swapped(d: &LinkDiagram, marked: u32) -> Result<Self> {
        Self::build(d, marked, Color::White)
    }

    fn build(d: &LinkDiagram, marked: u32, left_color: Color) -> Result<Self> {
        if d.crossing_count() == 0 || d.split_count() != 1 {
            return Err(Error::NotConnected(format!(
                "{} crossings in {} split components",
                d.crossing_count(),
                d.split_count()
            )));
        }
        let (tail, _) = d.arc_ends(marked)?;
        let Faces { quad_face, faces } = trace_faces(d);

        let left = quad_face[tail.crossing][tail.pos as usize];
        let right = quad_face[tail.crossing][tail.rot(3).pos as usize];

        // Quadrants k-1 and k lie on the two sides of the arc at position k.
        let mut colors: Vec<Option<Color>> = vec![None; faces.len()];
        colors[left] = Some(left_color);
        let mut queue = VecDeque::from([left]);
        while let Some(f) = queue.pop_front() {
            let here = colors[f].expect("queued faces are colored");
            for corner in &faces[f].corners {
                for neighbor in [corner.rot(1), corner.rot(3)] {
                    let g = quad_face[neighbor.crossing][neighbor.pos as usize];
                    match colors[g] {
                        None => {
                            colors[g] = Some(here.other());
                            queue.push_back(g);
                        }
                        Some(c) if c == here => {
                            return Err(Error::Coloring {
                                crossing: corner.crossing,
                            })
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        let colors: Vec<Color> = colors
            .into_iter()
            .map(|c| c.expect("a connected map colors every face"))
            .collect();

        let (q, r) = if left_color == Color::Black {
            (left, right)
        } else {
            (right, left)
        };
        Ok(PlaneMap {
            diagram: d.clone(),
            quad_face,
            faces,
            colors,
            marked,
            q,
            r,
        })
    }

    pub fn diagram(&self) -> &LinkDiagram {
        &self.diagram
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Face containing quadrant `k` of crossing `c`.
    pub fn quadrant_face(&self, crossing: usize, quadrant: u8) -> usize {
        self.quad_face[crossing][quadrant as usize % 4]
    }

    pub fn color(&self, face: usize) -> Color {
        self.colors[face]
    }

    pub fn marked_arc(&self) -> u32 {
        self.marked
    }

    /// The black face incident to the marked arc.
    pub fn q(&self) -> usize {
        self.q
    }

    /// The white face incident to the marked arc.
    pub fn r(&self) -> usize {
        self.r
    }

    /// A label-based description of a face, independent of face numbering:
    /// the sorted arcs on its boundary, each with `true` when the face lies
    /// on the arc's left.
    pub fn face_key(&self, face: usize) -> Vec<(u32, bool)> {
        let d = &self.diagram;
        let mut key: Vec<(u32, bool)> = self.faces[face]
            .corners
            .iter()
            .map(|&corner| {
                // The boundary leaves this corner along position `pos`, face on its left.
                let arc = d.label(corner);
                (arc, !d.is_entry(corner))
            })
            .collect();
        key.sort_unstable();
        key
    }
}
