//! Oriented link diagrams in PD notation and the plane map they determine.
//!
//! A crossing is a tuple `X(a,b,c,d)` listing the four incident arcs
//! counterclockwise, starting from the incoming under-strand `a`. The
//! under-strand therefore runs `a -> c`. Each link component carries a
//! contiguous block of arc labels, and its orientation follows increasing
//! labels (wrapping from the block maximum back to its minimum). The
//! over-strand runs `d -> b` at a positive crossing and `b -> d` at a
//! negative one.
//!
//! Crossingless components are carried as a separate count and written as
//! `U` tokens, e.g. `PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]+U`.

mod parse;
mod plane;
pub mod surgery;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::union_find::UnionFind;

pub use plane::{Color, Face, PlaneMap};

/// One of the four positions of a crossing, numbered counterclockwise from
/// the incoming under-strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub crossing: usize,
    pub pos: u8,
}

impl Slot {
    pub fn new(crossing: usize, pos: u8) -> Self {
        Slot {
            crossing,
            pos: pos % 4,
        }
    }

    /// The slot `k` steps counterclockwise from this one.
    pub fn rot(self, k: u8) -> Self {
        Slot::new(self.crossing, (self.pos + k) % 4)
    }

    /// The slot on the other side of the crossing along the same strand.
    pub fn across(self) -> Self {
        self.rot(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
        })
    }
}

/// A validated oriented link diagram.
///
/// Values are immutable; every transformation returns a new diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<[u32; 4]>,
    unknots: usize,
    /// `link[c][p]` is the slot at the other end of the arc leaving slot (c, p).
    link: Vec<[Slot; 4]>,
    /// Position (1 or 3) through which the over-strand enters each crossing.
    over_in: Vec<u8>,
    /// Arc labels of each crossed component in traversal order, starting at
    /// the smallest label.
    components: Vec<Vec<u32>>,
}

impl LinkDiagram {
    /// Validates PD tuples plus a number of crossingless unknot components.
    pub fn new(crossings: Vec<[u32; 4]>, unknots: usize) -> Result<Self> {
        if crossings.is_empty() && unknots == 0 {
            return Err(Error::Empty);
        }

        let mut occurrences: BTreeMap<u32, Vec<Slot>> = BTreeMap::new();
        for (c, tuple) in crossings.iter().enumerate() {
            for (p, &arc) in tuple.iter().enumerate() {
                occurrences
                    .entry(arc)
                    .or_default()
                    .push(Slot::new(c, p as u8));
            }
        }
        for (&arc, slots) in &occurrences {
            if slots.len() != 2 {
                return Err(Error::ArcMultiplicity {
                    arc,
                    count: slots.len(),
                });
            }
        }

        let mut link = vec![[Slot::new(0, 0); 4]; crossings.len()];
        for slots in occurrences.values() {
            let (a, b) = (slots[0], slots[1]);
            link[a.crossing][a.pos as usize] = b;
            link[b.crossing][b.pos as usize] = a;
        }

        let label = |s: Slot| crossings[s.crossing][s.pos as usize];
        let mut entered = vec![[false; 4]; crossings.len()];
        let mut components = Vec::new();

        // Components that pass under somewhere are oriented by their under-passages.
        for c in 0..crossings.len() {
            if entered[c][0] || entered[c][2] {
                continue;
            }
            let entries = walk_component(&link, Slot::new(c, 0));
            for &s in &entries {
                if s.pos == 2 {
                    return Err(Error::Orientation {
                        crossing: s.crossing,
                        reason: format!(
                            "arc {} runs into the outgoing under position; the under-strand must enter at the first tuple entry",
                            label(s)
                        ),
                    });
                }
                entered[s.crossing][s.pos as usize] = true;
            }
            let labels: Vec<u32> = entries.iter().map(|&s| label(s)).collect();
            components.push(check_numbering(&labels)?);
        }

        // Components lying over everything they meet are oriented by their labels.
        for c in 0..crossings.len() {
            if entered[c][1] || entered[c][3] {
                continue;
            }
            let forward = walk_component(&link, Slot::new(c, 3));
            let labels: Vec<u32> = forward.iter().map(|&s| label(s)).collect();
            let entries = match check_numbering(&labels) {
                Ok(_) => forward,
                Err(err) => {
                    let backward = walk_component(&link, Slot::new(c, 1));
                    let labels: Vec<u32> = backward.iter().map(|&s| label(s)).collect();
                    if check_numbering(&labels).is_err() {
                        return Err(err);
                    }
                    backward
                }
            };
            for &s in &entries {
                entered[s.crossing][s.pos as usize] = true;
            }
            let labels: Vec<u32> = entries.iter().map(|&s| label(s)).collect();
            components.push(check_numbering(&labels)?);
        }
        components.sort_by_key(|arcs| arcs[0]);

        let over_in = entered
            .iter()
            .map(|e| if e[3] { 3 } else { 1 })
            .collect::<Vec<_>>();

        let diagram = LinkDiagram {
            crossings,
            unknots,
            link,
            over_in,
            components,
        };
        diagram.check_planar()?;
        Ok(diagram)
    }

    /// Parses PD text; see the module documentation for the grammar.
    pub fn parse(text: &str) -> Result<Self> {
        parse::parse(text)
    }

    /// The crossingless unknot, `U`.
    pub fn unknot() -> Self {
        LinkDiagram::new(Vec::new(), 1).expect("unknot is valid")
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Number of crossingless (`U`) components.
    pub fn unknot_count(&self) -> usize {
        self.unknots
    }

    /// Number of link components, crossingless ones included.
    pub fn component_count(&self) -> usize {
        self.components.len() + self.unknots
    }

    /// Arc labels of each component that meets a crossing, in traversal order.
    pub fn components(&self) -> &[Vec<u32>] {
        &self.components
    }

    pub fn is_knot(&self) -> bool {
        self.component_count() == 1
    }

    /// All arc labels in increasing order.
    pub fn arcs(&self) -> Vec<u32> {
        let mut arcs: Vec<u32> = self.components.iter().flatten().copied().collect();
        arcs.sort_unstable();
        arcs
    }

    pub fn arc_count(&self) -> usize {
        2 * self.crossings.len()
    }

    pub fn label(&self, slot: Slot) -> u32 {
        self.crossings[slot.crossing][slot.pos as usize]
    }

    /// The slot at the far end of the arc leaving `slot`.
    pub fn link(&self, slot: Slot) -> Slot {
        self.link[slot.crossing][slot.pos as usize]
    }

    /// Whether the oriented strand enters its crossing through `slot`.
    pub fn is_entry(&self, slot: Slot) -> bool {
        match slot.pos {
            0 => true,
            2 => false,
            p => p == self.over_in[slot.crossing],
        }
    }

    /// `(tail, head)` of an arc: the slot it leaves and the slot it enters.
    pub fn arc_ends(&self, arc: u32) -> Result<(Slot, Slot)> {
        for (c, tuple) in self.crossings.iter().enumerate() {
            for p in 0..4u8 {
                if tuple[p as usize] == arc {
                    let s = Slot::new(c, p);
                    let t = self.link(s);
                    return Ok(if self.is_entry(s) { (t, s) } else { (s, t) });
                }
            }
        }
        Err(Error::UnknownArc(arc))
    }

    pub fn sign(&self, crossing: usize) -> Sign {
        if self.over_in[crossing] == 3 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    /// Crossing signs in crossing order.
    pub fn signs(&self) -> Vec<Sign> {
        (0..self.crossings.len()).map(|c| self.sign(c)).collect()
    }

    pub fn writhe(&self) -> i32 {
        self.signs().iter().map(|s| s.value()).sum()
    }

    /// Whether over and under passages alternate along every component.
    pub fn is_alternating(&self) -> bool {
        (0..self.crossings.len()).all(|c| {
            (0..4u8).all(|p| {
                let s = Slot::new(c, p);
                let t = self.link(s);
                (s.pos % 2) != (t.pos % 2)
            })
        })
    }

    /// The same diagram with the over- and under-strands at `crossing` swapped.
    pub fn crossing_change(&self, crossing: usize) -> Result<LinkDiagram> {
        if crossing >= self.crossings.len() {
            return Err(Error::UnknownCrossing(crossing));
        }
        let mut crossings = self.crossings.clone();
        let [a, b, c, d] = crossings[crossing];
        crossings[crossing] = if self.over_in[crossing] == 3 {
            [d, a, b, c]
        } else {
            [b, c, d, a]
        };
        LinkDiagram::new(crossings, self.unknots)
    }

    /// Every crossing changed.
    pub fn mirror(&self) -> LinkDiagram {
        let crossings = self
            .crossings
            .iter()
            .zip(&self.over_in)
            .map(|(&[a, b, c, d], &over)| {
                if over == 3 {
                    [d, a, b, c]
                } else {
                    [b, c, d, a]
                }
            })
            .collect();
        LinkDiagram::new(crossings, self.unknots).expect("mirror of a valid diagram is valid")
    }

    /// The diagram with the orientation of component `index` reversed.
    pub fn reverse_component(&self, index: usize) -> Result<LinkDiagram> {
        let arcs = self
            .components
            .get(index)
            .ok_or_else(|| Error::Invariant(format!("no component {index}")))?;
        let lo = arcs[0];
        let hi = lo + arcs.len() as u32 - 1;
        let flip = |x: u32| {
            if (lo..=hi).contains(&x) {
                lo + hi - x
            } else {
                x
            }
        };
        let crossings = self
            .crossings
            .iter()
            .map(|&[a, b, c, d]| {
                let t = [flip(a), flip(b), flip(c), flip(d)];
                if (lo..=hi).contains(&a) {
                    [t[2], t[3], t[0], t[1]]
                } else {
                    t
                }
            })
            .collect();
        LinkDiagram::new(crossings, self.unknots)
    }

    /// The diagram with every component reversed.
    pub fn reverse_all(&self) -> LinkDiagram {
        let mut d = self.clone();
        for i in 0..self.components.len() {
            d = d.reverse_component(i).expect("reversal preserves validity");
        }
        d
    }

    /// Crossing indices grouped by connected piece of the diagram, ordered by
    /// smallest crossing index.
    pub fn crossing_parts(&self) -> Vec<Vec<usize>> {
        let n = self.crossings.len();
        let mut uf = UnionFind::new(n);
        for c in 0..n {
            for p in 0..4u8 {
                uf.union(c, self.link(Slot::new(c, p)).crossing);
            }
        }
        let mut parts: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut first: Vec<Option<usize>> = vec![None; n];
        for c in 0..n {
            let root = uf.find(c);
            let key = *first[root].get_or_insert(c);
            parts.entry(key).or_default().push(c);
        }
        parts.into_values().collect()
    }

    /// Number of split components, crossingless circles included.
    pub fn split_count(&self) -> usize {
        self.crossing_parts().len() + self.unknots
    }

    pub fn is_split(&self) -> bool {
        self.split_count() > 1
    }

    /// The split components: one diagram per connected piece (keeping its
    /// arc labels), followed by one `U` per crossingless circle.
    pub fn split_components(&self) -> Vec<LinkDiagram> {
        let mut out: Vec<LinkDiagram> = self
            .crossing_parts()
            .into_iter()
            .map(|part| {
                let crossings = part.iter().map(|&c| self.crossings[c]).collect();
                LinkDiagram::new(crossings, 0).expect("a split piece of a valid diagram is valid")
            })
            .collect();
        out.extend((0..self.unknots).map(|_| LinkDiagram::unknot()));
        out
    }

    /// A representative independent of labeling: arcs are relabeled
    /// `1..=2n` starting from every possible arc, and the relabeling with the
    /// lexicographically least sorted crossing list wins. From a start arc,
    /// its component is numbered along its orientation, then each component
    /// first met (as the other strand at a crossing) is numbered from its
    /// incoming arc there. Split parts are chosen greedily, least first.
    pub fn canonical(&self) -> LinkDiagram {
        let mut head = BTreeMap::new();
        let mut component_of = BTreeMap::new();
        for (c, tuple) in self.crossings.iter().enumerate() {
            for p in 0..4u8 {
                let slot = Slot::new(c, p);
                if self.is_entry(slot) {
                    head.insert(tuple[p as usize], slot);
                }
            }
        }
        for (i, arcs) in self.components.iter().enumerate() {
            for &a in arcs {
                component_of.insert(a, i);
            }
        }
        let mut relabel: BTreeMap<u32, u32> = BTreeMap::new();
        while relabel.len() < self.arc_count() {
            let (_, best) = self
                .arcs()
                .into_iter()
                .filter(|a| !relabel.contains_key(a))
                .map(|start| {
                    let mut trial = relabel.clone();
                    self.label_part(start, &head, &component_of, &mut trial);
                    let mut key: Vec<[u32; 4]> = self
                        .crossings
                        .iter()
                        .filter(|t| !relabel.contains_key(&t[0]) && trial.contains_key(&t[0]))
                        .map(|t| t.map(|x| trial[&x]))
                        .collect();
                    key.sort_unstable();
                    (key, trial)
                })
                .min_by(|x, y| x.0.cmp(&y.0))
                .expect("an unlabeled arc remains");
            relabel = best;
        }
        let mut crossings: Vec<[u32; 4]> = self
            .crossings
            .iter()
            .map(|t| t.map(|x| relabel[&x]))
            .collect();
        crossings.sort_unstable();
        LinkDiagram::new(crossings, self.unknots).expect("relabeling preserves validity")
    }

    fn label_part(
        &self,
        start: u32,
        head: &BTreeMap<u32, Slot>,
        component_of: &BTreeMap<u32, usize>,
        relabel: &mut BTreeMap<u32, u32>,
    ) {
        let mut order = Vec::new();
        let label_component =
            |from: u32, relabel: &mut BTreeMap<u32, u32>, order: &mut Vec<u32>| {
                let arcs = &self.components[component_of[&from]];
                let i = arcs
                    .iter()
                    .position(|&a| a == from)
                    .expect("arc in its component");
                for &a in arcs[i..].iter().chain(&arcs[..i]) {
                    relabel.insert(a, relabel.len() as u32 + 1);
                    order.push(a);
                }
            };
        label_component(start, relabel, &mut order);
        let mut scan = 0;
        while scan < order.len() {
            let slot = head[&order[scan]];
            for other in [slot.rot(1), slot.rot(3)] {
                let b = self.label(other);
                if self.is_entry(other) && !relabel.contains_key(&b) {
                    label_component(b, relabel, &mut order);
                }
            }
            scan += 1;
        }
    }

    /// Canonical text: [`canonical`](Self::canonical) labels, printed.
    pub fn canonical_text(&self) -> String {
        self.canonical().to_string()
    }

    fn check_planar(&self) -> Result<()> {
        let faces = plane::trace_faces(self);
        for (i, part) in self.crossing_parts().iter().enumerate() {
            let v = part.len() as i64;
            let e = 2 * v;
            let f = faces
                .faces
                .iter()
                .filter(|face| part.binary_search(&face.corners[0].crossing).is_ok())
                .count() as i64;
            if v - e + f != 2 {
                return Err(Error::NonPlanar {
                    part: i,
                    euler: v - e + f,
                });
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for LinkDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LinkDiagram::parse(s)
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut tokens = Vec::new();
        if !self.crossings.is_empty() {
            let mut sorted = self.crossings.clone();
            sorted.sort_unstable();
            let body: Vec<String> = sorted
                .iter()
                .map(|[a, b, c, d]| format!("X({a},{b},{c},{d})"))
                .collect();
            tokens.push(format!("PD[{}]", body.join(",")));
        }
        tokens.extend((0..self.unknots).map(|_| "U".to_string()));
        f.write_str(&tokens.join("+"))
    }
}

/// Entry slots of the component through `entry`, in traversal order.
fn walk_component(link: &[[Slot; 4]], entry: Slot) -> Vec<Slot> {
    let mut out = Vec::new();
    let mut s = entry;
    loop {
        out.push(s);
        let exit = s.across();
        s = link[exit.crossing][exit.pos as usize];
        if s == entry {
            return out;
        }
    }
}

/// Checks that the labels met along a component are one contiguous,
/// increasing block (with a single wrap) and returns them starting at the
/// minimum.
fn check_numbering(labels: &[u32]) -> Result<Vec<u32>> {
    let (start, &lo) = labels
        .iter()
        .enumerate()
        .min_by_key(|&(_, &x)| x)
        .expect("components are nonempty");
    let rotated: Vec<u32> = labels[start..]
        .iter()
        .chain(&labels[..start])
        .copied()
        .collect();
    for (i, &x) in rotated.iter().enumerate() {
        if x != lo + i as u32 {
            return Err(Error::Numbering {
                arc: lo,
                reason: format!(
                    "expected arc {} after arc {} along the orientation, found arc {x}",
                    lo + i as u32,
                    rotated[i - 1]
                ),
            });
        }
    }
    Ok(rotated)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]";

    #[test]
    fn trefoil_validates() {
        let d = LinkDiagram::parse(TREFOIL).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.components()[0], vec![1, 2, 3, 4, 5, 6]);
        // This is the left-handed trefoil: over-strands run b -> d.
        assert!(d.signs().iter().all(|&s| s == Sign::Negative));
        assert!(d.mirror().signs().iter().all(|&s| s == Sign::Positive));
        assert!(d.is_alternating());
    }

    #[test]
    fn kink() {
        let d = LinkDiagram::parse("PD[X(1,1,2,2)]").unwrap();
        assert_eq!(d.arc_count(), 2);
        assert_eq!(d.sign(0), Sign::Positive);
        assert_eq!(d.arc_ends(1).unwrap(), (Slot::new(0, 1), Slot::new(0, 0)));
        assert_eq!(d.arc_ends(2).unwrap(), (Slot::new(0, 2), Slot::new(0, 3)));
    }

    #[test]
    fn unknot_token() {
        let d = LinkDiagram::parse("U").unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.split_count(), 1);
        assert_eq!(d.to_string(), "U");
    }

    #[test]
    fn rejects_bad_multiplicity() {
        let err = LinkDiagram::parse("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,7)]").unwrap_err();
        assert!(matches!(err, Error::ArcMultiplicity { .. }), "{err}");
    }

    #[test]
    fn rejects_reversed_under_strand() {
        let err = LinkDiagram::parse("PD[X(2,4,1,5),X(3,6,4,1),X(5,2,6,3)]").unwrap_err();
        assert!(matches!(err, Error::Orientation { .. }), "{err}");
    }

    #[test]
    fn rejects_non_contiguous_numbering() {
        let err = LinkDiagram::parse(
            "PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]"
                .replace('6', "9")
                .as_str(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Numbering { .. }), "{err}");
    }

    #[test]
    fn rejects_non_planar_tuple_order() {
        // The trefoil with its first tuple listed clockwise.
        let err = LinkDiagram::parse("PD[X(1,5,2,4),X(3,6,4,1),X(5,2,6,3)]").unwrap_err();
        assert!(matches!(err, Error::NonPlanar { .. }), "{err}");
    }

    #[test]
    fn crossing_change_flips_only_that_sign() {
        let d = LinkDiagram::parse(TREFOIL).unwrap();
        let e = d.crossing_change(1).unwrap();
        assert_eq!(
            e.signs(),
            vec![Sign::Negative, Sign::Positive, Sign::Negative]
        );
        assert_eq!(e.crossing_change(1).unwrap(), d);
        assert!(!e.is_alternating());
    }

    #[test]
    fn split_parts_and_canonical_labels() {
        let d = LinkDiagram::parse("PD[X(7,10,8,11),X(9,12,10,7),X(11,8,12,9)]+U").unwrap();
        let parts = d.split_components();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[1].to_string(), "U");
        assert_eq!(d.canonical_text(), format!("{TREFOIL}+U"));
    }

    #[test]
    fn reversing_one_component_of_hopf_link_flips_signs() {
        let hopf = LinkDiagram::parse("PD[X(4,1,3,2),X(2,3,1,4)]").unwrap();
        assert_eq!(hopf.component_count(), 2);
        let s = hopf.signs();
        assert_eq!(
            hopf.reverse_component(0).unwrap().signs(),
            s.iter().map(|x| x.flip()).collect::<Vec<_>>()
        );
        assert_eq!(hopf.reverse_all().signs(), s);
    }
}
