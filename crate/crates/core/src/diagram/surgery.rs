//! Local surgery on diagrams: splicing a crossing away, inserting kinks and
//! finger moves, and closing braids.
//!
//! Surgery works on bare slot connections. Each crossing keeps its
//! counterclockwise slot order with the under-strand through slots 0 and 2;
//! orientation and arc labels are recomputed by [`Surgery::into_diagram`].

use super::{LinkDiagram, Slot};
use crate::error::{Error, Result};

/// How a removed crossing reconnects its four slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothing {
    /// Joins slots 0-1 and 2-3, merging quadrants 1 and 3.
    A,
    /// Joins slots 1-2 and 3-0, merging quadrants 0 and 2.
    B,
}

impl Smoothing {
    pub fn partner(self, pos: u8) -> u8 {
        match (self, pos % 4) {
            (Smoothing::A, 0) => 1,
            (Smoothing::A, 1) => 0,
            (Smoothing::A, 2) => 3,
            (Smoothing::A, _) => 2,
            (Smoothing::B, 0) => 3,
            (Smoothing::B, 3) => 0,
            (Smoothing::B, 1) => 2,
            (Smoothing::B, _) => 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Surgery {
    link: Vec<[Slot; 4]>,
    alive: Vec<bool>,
    /// Preferred entry slot (1 or 3) of each over-strand.
    over_in: Vec<u8>,
    free_loops: usize,
}

impl Surgery {
    pub fn from_diagram(d: &LinkDiagram) -> Self {
        Surgery {
            link: d.link.clone(),
            alive: vec![true; d.crossing_count()],
            over_in: d.over_in.clone(),
            free_loops: d.unknot_count(),
        }
    }

    fn get(&self, s: Slot) -> Slot {
        self.link[s.crossing][s.pos as usize]
    }

    fn connect(&mut self, a: Slot, b: Slot) {
        self.link[a.crossing][a.pos as usize] = b;
        self.link[b.crossing][b.pos as usize] = a;
    }

    fn add_crossing(&mut self) -> usize {
        self.link.push([Slot::new(0, 0); 4]);
        self.alive.push(true);
        self.over_in.push(3);
        self.link.len() - 1
    }

    /// Removes `crossing`, reconnecting its slots by `smoothing`. Closed
    /// curves that no longer meet any crossing become free circles.
    pub fn smooth(&mut self, crossing: usize, smoothing: Smoothing) -> Result<()> {
        if !self.alive.get(crossing).copied().unwrap_or(false) {
            return Err(Error::UnknownCrossing(crossing));
        }
        let mut used = [false; 4];
        for p in 0..4u8 {
            let start = self.get(Slot::new(crossing, p));
            if start.crossing == crossing || used[p as usize] {
                continue;
            }
            // Follow the new strand from the external slot `start` through the
            // crossing until it leaves again.
            let mut s = Slot::new(crossing, p);
            let end = loop {
                used[s.pos as usize] = true;
                let t = Slot::new(crossing, smoothing.partner(s.pos));
                used[t.pos as usize] = true;
                let next = self.get(t);
                if next.crossing != crossing {
                    break next;
                }
                s = next;
            };
            self.connect(start, end);
        }
        // Whatever is left only connects to the crossing itself.
        for p in 0..4u8 {
            if used[p as usize] {
                continue;
            }
            let mut s = Slot::new(crossing, p);
            while !used[s.pos as usize] {
                used[s.pos as usize] = true;
                let t = Slot::new(crossing, smoothing.partner(s.pos));
                used[t.pos as usize] = true;
                s = self.get(t);
            }
            self.free_loops += 1;
        }
        self.alive[crossing] = false;
        Ok(())
    }

    /// Adds a kink on the arc leaving `dart`, inside the face on the left of
    /// the arc as it leaves. With `along_under` the kink's under-strand is
    /// the one continuing the arc from `dart`.
    pub fn kink(&mut self, dart: Slot, along_under: bool) {
        let u = dart;
        let v = self.get(u);
        let k = self.add_crossing();
        // Compass directions at the new crossing, counterclockwise S, E, N, W;
        // the loop joins E and N.
        let [s, e, n, w] = if along_under {
            // The under-strand runs W -> E.
            [3u8, 0, 1, 2]
        } else {
            [0u8, 1, 2, 3]
        };
        self.connect(u, Slot::new(k, w));
        self.connect(Slot::new(k, e), Slot::new(k, n));
        self.connect(Slot::new(k, s), v);
    }

    /// Pushes a finger of the arc leaving `x` across the arc leaving `y`.
    /// Both darts must border the same face on their left. Creates two
    /// crossings, with the finger on top when `x_over`.
    pub fn finger(&mut self, x: Slot, y: Slot, x_over: bool) {
        let (u, v) = (x, self.get(x));
        let (u2, v2) = (y, self.get(y));
        let c1 = self.add_crossing();
        let c2 = self.add_crossing();
        // Counterclockwise S, E, N, W at both crossings; the finger runs
        // S -> N at c1 and N -> S at c2.
        let [s, e, n, w] = if x_over {
            [3u8, 0, 1, 2]
        } else {
            [0u8, 1, 2, 3]
        };
        let at = |c: usize, p: u8| Slot::new(c, p);
        self.connect(u, at(c1, s));
        self.connect(at(c1, n), at(c2, n));
        self.connect(at(c2, s), v);
        self.connect(u2, at(c2, e));
        self.connect(at(c2, w), at(c1, e));
        self.connect(at(c1, w), v2);
    }

    /// Orients every component and assigns contiguous labels, keeping the
    /// existing orientation of the first passage met on each component.
    /// Surviving crossings keep their relative order.
    pub fn into_diagram(self) -> Result<LinkDiagram> {
        let index: Vec<Option<usize>> = {
            let mut next = 0;
            self.alive
                .iter()
                .map(|&a| {
                    a.then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        };
        let n = index.iter().flatten().count();
        let mut labels = vec![[0u32; 4]; self.link.len()];
        let mut entered = vec![[false; 4]; self.link.len()];
        let mut next_label = 1u32;

        for c in (0..self.link.len()).filter(|&c| self.alive[c]) {
            for start in [Slot::new(c, 0), Slot::new(c, self.over_in[c])] {
                if entered[c][start.pos as usize] || entered[c][start.across().pos as usize] {
                    continue;
                }
                let mut entries = Vec::new();
                let mut s = start;
                loop {
                    entries.push(s);
                    s = self.get(s.across());
                    if s == start {
                        break;
                    }
                }
                let k = entries.len();
                for (i, &e) in entries.iter().enumerate() {
                    entered[e.crossing][e.pos as usize] = true;
                    let label = next_label + i as u32;
                    labels[e.crossing][e.pos as usize] = label;
                    let prev_exit = entries[(i + k - 1) % k].across();
                    labels[prev_exit.crossing][prev_exit.pos as usize] = label;
                }
                next_label += k as u32;
            }
        }

        let mut crossings = Vec::with_capacity(n);
        for c in (0..self.link.len()).filter(|&c| self.alive[c]) {
            let l = labels[c];
            crossings.push(if entered[c][0] {
                l
            } else {
                [l[2], l[3], l[0], l[1]]
            });
        }
        LinkDiagram::new(crossings, self.free_loops)
    }
}

/// The closure of a braid word. Generator `i > 0` is the positive crossing
/// between strands `i` and `i + 1` (strands numbered from 1); `-i` is its
/// inverse. Strands untouched by the word close up into free circles.
pub fn braid_closure(strands: usize, word: &[i32]) -> Result<LinkDiagram> {
    let mut s = Surgery {
        link: Vec::new(),
        alive: Vec::new(),
        over_in: Vec::new(),
        free_loops: 0,
    };
    let mut bottom: Vec<Option<Slot>> = vec![None; strands];
    let mut top: Vec<Option<Slot>> = vec![None; strands];
    for &g in word {
        let i = g.unsigned_abs() as usize;
        if g == 0 || i >= strands {
            return Err(Error::Invariant(format!(
                "braid generator {g} out of range for {strands} strands"
            )));
        }
        let (l, r) = (i - 1, i);
        let c = s.add_crossing();
        // Counterclockwise from the incoming under-strand: bottom-right, top-right,
        // top-left, bottom-left for a positive generator.
        let (br, tr, tl, bl) = if g > 0 {
            (0u8, 1, 2, 3)
        } else {
            (1u8, 2, 3, 0)
        };
        s.over_in[c] = if g > 0 { 3 } else { 1 };
        for (strand, slot) in [(l, bl), (r, br)] {
            let here = Slot::new(c, slot);
            match top[strand] {
                Some(prev) => s.connect(prev, here),
                None => bottom[strand] = Some(here),
            }
        }
        top[l] = Some(Slot::new(c, tl));
        top[r] = Some(Slot::new(c, tr));
    }
    for strand in 0..strands {
        match (top[strand], bottom[strand]) {
            (Some(t), Some(b)) => s.connect(t, b),
            _ => s.free_loops += 1,
        }
    }
    // Strands whose top and bottom belong to different permutation cycles are
    // already joined through the connections made above.
    s.into_diagram()
}
