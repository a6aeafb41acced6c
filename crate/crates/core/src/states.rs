//! Kauffman states as spanning-tree pairs, their Alexander/Maslov bigradings,
//! η and the width of a knot diagram.
//!
//! All gradings are stored doubled so they stay integral.

use std::collections::{BTreeMap, VecDeque};
use std::sync::OnceLock;

use num_traits::ToPrimitive;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::diagram::{PlaneMap, Sign};
use crate::error::{Error, Result};
use crate::poly::Laurent;
use crate::tait::{EdgeSign, TaitGraph, TaitPair};
use crate::union_find::UnionFind;
use crate::LinkDiagram;

/// Default limit on the number of enumerated states.
pub const STATE_CAP: u64 = 10_000_000;

const BUNDLED_GRADINGS: &str = include_str!("../data/local_gradings.csv");

/// Position of a quadrant relative to the two oriented strands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Front,
    Back,
    Left,
    Right,
}

impl Role {
    /// Role of quadrant `k` at a crossing of the given sign.
    pub fn of(sign: Sign, quadrant: u8) -> Role {
        const POS: [Role; 4] = [Role::Right, Role::Front, Role::Left, Role::Back];
        const NEG: [Role; 4] = [Role::Back, Role::Right, Role::Front, Role::Left];
        match sign {
            Sign::Positive => POS[quadrant as usize % 4],
            Sign::Negative => NEG[quadrant as usize % 4],
        }
    }
}

#[derive(Debug, Deserialize)]
struct GradingRow {
    sign: String,
    quadrant: Role,
    alexander2: i32,
    maslov2: i32,
}

/// Local (doubled) Alexander and Maslov contributions of a dot, per crossing
/// sign and quadrant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalGradings {
    /// `[sign][quadrant] = (2A, 2M)`, sign index 0 for positive.
    table: [[(i32, i32); 4]; 2],
}

fn sign_index(sign: Sign) -> usize {
    match sign {
        Sign::Positive => 0,
        Sign::Negative => 1,
    }
}

impl LocalGradings {
    /// The bundled table, parsed and validated once.
    pub fn bundled() -> &'static LocalGradings {
        static TABLE: OnceLock<LocalGradings> = OnceLock::new();
        TABLE.get_or_init(|| {
            LocalGradings::from_csv(BUNDLED_GRADINGS).expect("bundled grading table is valid")
        })
    }

    /// Parses a `sign,quadrant,alexander2,maslov2` table (lines starting
    /// with `#` are comments) and validates it.
    pub fn from_csv(text: &str) -> Result<LocalGradings> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut seen: [[Option<(i32, i32)>; 4]; 2] = [[None; 4]; 2];
        for row in reader.deserialize::<GradingRow>() {
            let row = row.map_err(|e| Error::GradingTable(e.to_string()))?;
            let sign = match row.sign.as_str() {
                "+" => Sign::Positive,
                "-" => Sign::Negative,
                other => return Err(Error::GradingTable(format!("unknown sign {other:?}"))),
            };
            let k = (0..4u8)
                .find(|&k| Role::of(sign, k) == row.quadrant)
                .expect("every role occurs at every crossing");
            let cell = &mut seen[sign_index(sign)][k as usize];
            if cell.is_some() {
                return Err(Error::GradingTable(format!(
                    "duplicate row for {} {:?}",
                    row.sign, row.quadrant
                )));
            }
            *cell = Some((row.alexander2, row.maslov2));
        }
        let mut table = [[(0, 0); 4]; 2];
        for (s, row) in seen.iter().enumerate() {
            for (k, cell) in row.iter().enumerate() {
                table[s][k] = cell.ok_or_else(|| {
                    Error::GradingTable(format!("missing row for sign index {s}, quadrant {k}"))
                })?;
            }
        }
        let g = LocalGradings { table };
        g.validate()?;
        Ok(g)
    }

    /// Each Tait edge must contribute the same `2(A - M)` whichever of its two
    /// quadrants holds the dot, and that value must be its η weight.
    fn validate(&self) -> Result<()> {
        for sign in [Sign::Positive, Sign::Negative] {
            for (pair, edge_sign) in [
                ([1u8, 3], EdgeSign::Positive),
                ([0u8, 2], EdgeSign::Negative),
            ] {
                let label = crate::tait::EdgeLabel {
                    letter: match sign {
                        Sign::Positive => crate::tait::Letter::Alpha,
                        Sign::Negative => crate::tait::Letter::Beta,
                    },
                    sign: edge_sign,
                };
                for k in pair {
                    let (a, m) = self.get(sign, k);
                    if a - m != label.eta() {
                        return Err(Error::GradingTable(format!(
                            "{sign} crossing, quadrant {:?}: 2(A-M) = {} but the {label} edge needs {}",
                            Role::of(sign, k),
                            a - m,
                            label.eta()
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Doubled `(A, M)` contribution of a dot in quadrant `k`.
    pub fn get(&self, sign: Sign, quadrant: u8) -> (i32, i32) {
        self.table[sign_index(sign)][quadrant as usize % 4]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KauffmanState {
    /// Crossings whose `T1` edge is in `t1`.
    pub t1_edges: Vec<usize>,
    /// Crossings whose `T2` edge is in `t2`.
    pub t2_edges: Vec<usize>,
    /// Dot quadrant per crossing.
    pub dots: Vec<u8>,
    /// Doubled Alexander filtration level.
    pub a2: i32,
    /// Doubled Maslov grading.
    pub m2: i32,
    pub eta: i32,
}

/// Spanning trees of `g` as sorted crossing lists, by include/exclude
/// backtracking over the edges.
pub fn spanning_trees(g: &TaitGraph, cap: u64) -> Result<Vec<Vec<usize>>> {
    let n = g.vertex_count();
    let edges = g.edges();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(n.saturating_sub(1));
    let comp: Vec<usize> = (0..n).collect();
    grow(edges, 0, &comp, &mut chosen, n, cap, &mut out)?;
    Ok(out)
}

fn grow(
    edges: &[crate::tait::TaitEdge],
    i: usize,
    comp: &[usize],
    chosen: &mut Vec<usize>,
    n: usize,
    cap: u64,
    out: &mut Vec<Vec<usize>>,
) -> Result<()> {
    if chosen.len() + 1 == n || n == 0 {
        if out.len() as u64 >= cap {
            return Err(Error::TooManyStates(cap));
        }
        out.push(chosen.clone());
        return Ok(());
    }
    if i == edges.len() {
        return Ok(());
    }
    let [u, v] = edges[i].ends;
    let (cu, cv) = (comp[u], comp[v]);
    if cu != cv {
        let merged: Vec<usize> = comp.iter().map(|&c| if c == cv { cu } else { c }).collect();
        chosen.push(edges[i].crossing);
        grow(edges, i + 1, &merged, chosen, n, cap, out)?;
        chosen.pop();
    }
    // Skip edge i only if the remaining edges can still connect everything.
    let mut uf = UnionFind::new(n);
    for (x, &c) in comp.iter().enumerate() {
        uf.union(x, c);
    }
    for e in &edges[i + 1..] {
        uf.union(e.ends[0], e.ends[1]);
    }
    if uf.sets() == 1 {
        grow(edges, i + 1, comp, chosen, n, cap, out)?;
    }
    Ok(())
}

/// Orients the tree edges away from `root` and returns, per listed crossing,
/// the quadrant holding the head.
fn tree_heads(g: &TaitGraph, tree: &[usize], root: usize) -> Result<Vec<(usize, u8)>> {
    let n = g.vertex_count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &c in tree {
        let [u, v] = g.edge(c).ends;
        adj[u].push(c);
        adj[v].push(c);
    }
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    let mut heads = Vec::with_capacity(tree.len());
    while let Some(x) = queue.pop_front() {
        for &c in &adj[x] {
            let e = g.edge(c);
            let side = if e.ends[0] == x { 1 } else { 0 };
            let y = e.ends[side];
            if !seen[y] {
                seen[y] = true;
                heads.push((c, e.quadrants[side]));
                queue.push_back(y);
            }
        }
    }
    if heads.len() != tree.len() || seen.iter().any(|&s| !s) || tree.len() + 1 != n {
        return Err(Error::Invariant(format!(
            "edges {tree:?} do not form a spanning tree of the {:?} Tait graph",
            g.color()
        )));
    }
    Ok(heads)
}

/// Every Kauffman state of a knot diagram with the marked arc of `pair`.
pub fn enumerate_states(
    pair: &TaitPair,
    gradings: &LocalGradings,
    cap: u64,
) -> Result<Vec<KauffmanState>> {
    let map = pair.map();
    let d = map.diagram();
    if !d.is_knot() {
        return Err(Error::NotAKnot(d.component_count()));
    }
    let (t1, t2) = (pair.t1(), pair.t2());
    if !t1.is_connected() || !t2.is_connected() {
        return Err(Error::NotConnected("disconnected Tait graph".into()));
    }
    let expected = t1.spanning_tree_count();
    if expected.to_u64().is_none_or(|n| n > cap) {
        return Err(Error::TooManyStates(cap));
    }
    let root1 = t1
        .vertex_of_face(map.q())
        .ok_or_else(|| Error::Invariant("Q is not a black face".into()))?;
    let root2 = t2
        .vertex_of_face(map.r())
        .ok_or_else(|| Error::Invariant("R is not a white face".into()))?;
    let n = d.crossing_count();
    let signs = d.signs();

    let trees = spanning_trees(t1, cap)?;
    let mut states = Vec::with_capacity(trees.len());
    for tree in trees {
        let mut in_t1 = vec![false; n];
        for &c in &tree {
            in_t1[c] = true;
        }
        let t2_edges: Vec<usize> = (0..n).filter(|&c| !in_t1[c]).collect();
        let mut dots = vec![u8::MAX; n];
        for (c, q) in tree_heads(t1, &tree, root1)?
            .into_iter()
            .chain(tree_heads(t2, &t2_edges, root2)?)
        {
            dots[c] = q;
        }
        let (mut a2, mut m2, mut eta) = (0, 0, 0);
        for c in 0..n {
            let (a, m) = gradings.get(signs[c], dots[c]);
            a2 += a;
            m2 += m;
            let g = if in_t1[c] { t1 } else { t2 };
            eta += g.edge(c).label.eta();
        }
        if a2 - m2 != eta {
            return Err(Error::Invariant(format!(
                "state {dots:?}: 2(A - M) = {} but η = {eta}",
                a2 - m2
            )));
        }
        states.push(KauffmanState {
            t1_edges: tree,
            t2_edges,
            dots,
            a2,
            m2,
            eta,
        });
    }
    if expected != states.len().into() {
        return Err(Error::Invariant(format!(
            "enumerated {} states but the matrix-tree count is {expected}",
            states.len()
        )));
    }
    Ok(states)
}

/// All dot assignments by exhaustive search over the `4^n` quadrant choices:
/// one dot per crossing, none in `Q` or `R`, every other face used once.
/// Meant as an oracle for small diagrams.
pub fn brute_force_dots(map: &PlaneMap) -> Vec<Vec<u8>> {
    let n = map.diagram().crossing_count();
    let mut out = Vec::new();
    let mut used = vec![false; map.face_count()];
    used[map.q()] = true;
    used[map.r()] = true;
    let mut dots = vec![0u8; n];
    fn rec(map: &PlaneMap, c: usize, used: &mut [bool], dots: &mut [u8], out: &mut Vec<Vec<u8>>) {
        if c == dots.len() {
            out.push(dots.to_vec());
            return;
        }
        for k in 0..4u8 {
            let f = map.quadrant_face(c, k);
            if !used[f] {
                used[f] = true;
                dots[c] = k;
                rec(map, c + 1, used, dots, out);
                used[f] = false;
            }
        }
    }
    rec(map, 0, &mut used, &mut dots, &mut out);
    out
}

/// Number of states per doubled `(A, M)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BigradingTable {
    entries: BTreeMap<(i32, i32), u64>,
}

fn half(v: i32) -> Value {
    if v % 2 == 0 {
        json!(v / 2)
    } else {
        json!(v as f64 / 2.0)
    }
}

impl BigradingTable {
    pub fn from_states(states: &[KauffmanState]) -> Self {
        let mut entries = BTreeMap::new();
        for s in states {
            *entries.entry((s.a2, s.m2)).or_insert(0) += 1;
        }
        BigradingTable { entries }
    }

    /// Builds a table from undoubled `(A, M, count)` triples.
    pub fn from_counts(counts: impl IntoIterator<Item = (i32, i32, u64)>) -> Self {
        BigradingTable {
            entries: counts
                .into_iter()
                .map(|(a, m, n)| ((2 * a, 2 * m), n))
                .collect(),
        }
    }

    /// `((2A, 2M), count)` in increasing order.
    pub fn entries(&self) -> impl Iterator<Item = ((i32, i32), u64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn count(&self, a2: i32, m2: i32) -> u64 {
        self.entries.get(&(a2, m2)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Doubled maximum of `A - M`, i.e. the largest η.
    pub fn max_diagonal2(&self) -> Option<i32> {
        self.entries.keys().map(|(a, m)| a - m).max()
    }

    /// Doubled minimum of `A - M`.
    pub fn min_diagonal2(&self) -> Option<i32> {
        self.entries.keys().map(|(a, m)| a - m).min()
    }

    pub fn width(&self) -> Option<i32> {
        Some((self.max_diagonal2()? - self.min_diagonal2()?) / 2 + 1)
    }

    /// `Σ (−1)^M · count · x^A`. Needs integral gradings.
    pub fn graded_euler_characteristic(&self) -> Result<Laurent> {
        let mut p = Laurent::zero();
        for (&(a2, m2), &n) in &self.entries {
            if a2 % 2 != 0 || m2 % 2 != 0 {
                return Err(Error::Invariant(format!(
                    "half-integral grading ({a2}/2, {m2}/2) in a knot table"
                )));
            }
            let sign = if (m2 / 2).rem_euclid(2) == 0 { 1 } else { -1 };
            p.add_term(sign * n as i64, a2 / 2);
        }
        Ok(p)
    }

    pub fn to_json(&self) -> Value {
        let table: Vec<Value> = self
            .entries
            .iter()
            .map(|(&(a, m), &n)| json!({"A": half(a), "M": half(m), "count": n}))
            .collect();
        json!({
            "Delta": self.max_diagonal2().map(half),
            "delta": self.min_diagonal2().map(half),
            "width": self.width(),
            "table": table,
        })
    }

    /// Alexander rows (increasing downward) against Maslov columns.
    pub fn to_text(&self) -> String {
        let a_vals: Vec<i32> = {
            let mut v: Vec<i32> = self.entries.keys().map(|k| k.0).collect();
            v.dedup();
            v
        };
        let mut m_vals: Vec<i32> = self.entries.keys().map(|k| k.1).collect();
        m_vals.sort_unstable();
        m_vals.dedup();
        let fmt_half = |v: i32| {
            if v % 2 == 0 {
                (v / 2).to_string()
            } else {
                format!("{}/2", v)
            }
        };
        let mut header = vec!["A\\M".to_string()];
        header.extend(m_vals.iter().map(|&m| fmt_half(m)));
        let mut rows = vec![header];
        for &a in &a_vals {
            let mut row = vec![fmt_half(a)];
            for &m in &m_vals {
                let n = self.count(a, m);
                row.push(if n == 0 { String::new() } else { n.to_string() });
            }
            rows.push(row);
        }
        let widths: Vec<usize> = (0..rows[0].len())
            .map(|j| rows.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for r in rows {
            let cells: Vec<String> = r
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:>w$}"))
                .collect();
            out.push_str(cells.join(" | ").trim_end());
            out.push('\n');
        }
        out
    }
}

/// States of a knot diagram for the given marked arc.
pub fn states_with_marked_arc(d: &LinkDiagram, arc: u32) -> Result<Vec<KauffmanState>> {
    let pair = TaitPair::new(PlaneMap::with_marked_arc(d, arc)?);
    enumerate_states(&pair, LocalGradings::bundled(), STATE_CAP)
}

pub fn bigrading_table(d: &LinkDiagram) -> Result<BigradingTable> {
    let pair = TaitPair::of(d)?;
    let states = enumerate_states(&pair, LocalGradings::bundled(), STATE_CAP)?;
    Ok(BigradingTable::from_states(&states))
}

/// `(max η − min η)/2 + 1` over the states for the given marked arc.
pub fn width_with_marked_arc(d: &LinkDiagram, arc: u32) -> Result<i32> {
    let states = states_with_marked_arc(d, arc)?;
    eta_width(&states)
}

fn eta_width(states: &[KauffmanState]) -> Result<i32> {
    let max = states.iter().map(|s| s.eta).max();
    let min = states.iter().map(|s| s.eta).min();
    match (max, min) {
        (Some(hi), Some(lo)) => Ok((hi - lo) / 2 + 1),
        _ => Err(Error::Invariant("diagram has no Kauffman states".into())),
    }
}

/// Width of a connected knot diagram with crossings.
pub fn width(d: &LinkDiagram) -> Result<i32> {
    let arc = *d
        .arcs()
        .first()
        .ok_or_else(|| Error::NotConnected("no crossings".into()))?;
    width_with_marked_arc(d, arc)
}

/// Predicted `width(d with crossing changed) − width(d)`.
pub fn predict_width_change(d: &LinkDiagram, crossing: usize) -> Result<i32> {
    if crossing >= d.crossing_count() {
        return Err(Error::UnknownCrossing(crossing));
    }
    Ok(TaitPair::of(d)?.predicted_change(crossing))
}

#[cfg(test)]
mod tests {
    use super::*;

    const RIGHT_TREFOIL: &str = "PD[X(1,5,2,4),X(3,1,4,6),X(5,3,6,2)]";

    #[test]
    fn bundled_table_validates() {
        let g = LocalGradings::bundled();
        assert_eq!(g.get(Sign::Positive, 1), (1, 0));
        assert_eq!(g.get(Sign::Negative, 0), (1, 2));
    }

    #[test]
    fn corrupted_table_is_rejected() {
        let bad = BUNDLED_GRADINGS.replace("+,back,-1,-2", "+,back,-1,0");
        assert!(matches!(
            LocalGradings::from_csv(&bad),
            Err(Error::GradingTable(_))
        ));
        let missing = BUNDLED_GRADINGS.replace("-,left,0,0\n", "");
        assert!(matches!(
            LocalGradings::from_csv(&missing),
            Err(Error::GradingTable(_))
        ));
    }

    #[test]
    fn right_trefoil_states() {
        let d = LinkDiagram::parse(RIGHT_TREFOIL).unwrap();
        assert!(d.signs().iter().all(|&s| s == Sign::Positive));
        let t = bigrading_table(&d).unwrap();
        assert_eq!(t.total(), 3);
        assert!(t.entries().all(|((a, m), _)| a - m == 2));
        assert_eq!(t.width(), Some(1));
        let p = t.graded_euler_characteristic().unwrap();
        assert!(p.equals_up_to_unit(&crate::poly::torus_alexander(2, 3)));
    }

    #[test]
    fn left_trefoil_eta() {
        let d = LinkDiagram::parse(RIGHT_TREFOIL).unwrap().mirror();
        let states = enumerate_states(
            &TaitPair::of(&d).unwrap(),
            LocalGradings::bundled(),
            STATE_CAP,
        )
        .unwrap();
        assert!(states.iter().all(|s| s.eta == -2));
    }

    #[test]
    fn kink_has_one_state() {
        let d = LinkDiagram::parse("PD[X(1,1,2,2)]").unwrap();
        let t = bigrading_table(&d).unwrap();
        assert_eq!(t.total(), 1);
        assert_eq!(t.width(), Some(1));
        assert_eq!(
            t.graded_euler_characteristic().unwrap(),
            Laurent::monomial(1, 0)
        );
    }

    #[test]
    fn tree_states_match_brute_force() {
        for pd in [
            RIGHT_TREFOIL,
            "PD[X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)]",
        ] {
            let d = LinkDiagram::parse(pd).unwrap();
            for arc in d.arcs() {
                let map = PlaneMap::with_marked_arc(&d, arc).unwrap();
                let mut brute = brute_force_dots(&map);
                let pair = TaitPair::new(map);
                let mut trees: Vec<Vec<u8>> =
                    enumerate_states(&pair, LocalGradings::bundled(), STATE_CAP)
                        .unwrap()
                        .into_iter()
                        .map(|s| s.dots)
                        .collect();
                brute.sort();
                trees.sort();
                assert_eq!(trees, brute);
            }
        }
    }

    #[test]
    fn link_is_rejected() {
        let d = LinkDiagram::parse("PD[X(4,1,3,2),X(2,3,1,4)]").unwrap();
        assert!(matches!(width(&d), Err(Error::NotAKnot(2))));
    }

    #[test]
    fn cap_is_enforced() {
        let d = LinkDiagram::parse("PD[X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)]").unwrap();
        let pair = TaitPair::of(&d).unwrap();
        assert!(matches!(
            enumerate_states(&pair, LocalGradings::bundled(), 3),
            Err(Error::TooManyStates(3))
        ));
    }

    #[test]
    fn json_shape() {
        let t = BigradingTable::from_counts([(0, 0, 1), (1, 1, 2)]);
        let v = t.to_json();
        assert_eq!(v["width"], json!(1));
        assert_eq!(v["table"][1], json!({"A": 1, "M": 1, "count": 2}));
        assert_eq!(BigradingTable::from_states(&[]).width(), None);
    }
}
