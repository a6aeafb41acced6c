//! Named verification suites run by `verify`.

use std::fmt;
use std::str::FromStr;

use knotwidth::catalog::CatalogEntry;
use knotwidth::skein::skein_check;
use knotwidth::states::{self, brute_force_dots, enumerate_states, BigradingTable, STATE_CAP};
use knotwidth::turaev::{predict_genus_change, turaev_genus};
use knotwidth::{LinkDiagram, LocalGradings, PlaneMap, TaitPair};
use serde_json::{json, Value};

/// Diagrams up to this size also get the exhaustive dot-placement oracle.
const BRUTE_FORCE_MAX_CROSSINGS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    MarkedEdgeInvariance,
    EtaIdentity,
    WidthGenus,
    CrossingChange,
    GenusChange,
    Skein,
    EulerCharSymmetry,
    StateCountOracle,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::MarkedEdgeInvariance,
        Check::EtaIdentity,
        Check::WidthGenus,
        Check::CrossingChange,
        Check::GenusChange,
        Check::Skein,
        Check::EulerCharSymmetry,
        Check::StateCountOracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::MarkedEdgeInvariance => "marked-edge-invariance",
            Check::EtaIdentity => "eta-identity",
            Check::WidthGenus => "width-genus",
            Check::CrossingChange => "crossing-change",
            Check::GenusChange => "genus-change",
            Check::Skein => "skein",
            Check::EulerCharSymmetry => "euler-char-symmetry",
            Check::StateCountOracle => "state-count-oracle",
        }
    }

    fn needs_knot(self) -> bool {
        !matches!(self, Check::Skein)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Check::ALL.iter().map(|c| c.name()).collect();
                format!("unknown check {s:?}; expected one of {}", names.join(", "))
            })
    }
}

/// A minimal reproduction of one failed check.
#[derive(Debug, Clone)]
pub struct Failure {
    pub check: Check,
    pub name: String,
    pub pd: String,
    pub site: Option<usize>,
    pub detail: String,
}

impl Failure {
    pub fn to_json(&self) -> Value {
        json!({
            "check": self.check.name(),
            "name": self.name,
            "pd": self.pd,
            "site": self.site,
            "detail": self.detail,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Skip,
}

pub struct Context<'a> {
    pub gradings: &'a LocalGradings,
}

struct Run<'a> {
    check: Check,
    entry: &'a CatalogEntry,
    d: &'a LinkDiagram,
    failures: Vec<Failure>,
}

impl Run<'_> {
    fn fail(&mut self, site: Option<usize>, detail: impl Into<String>) {
        self.failures.push(Failure {
            check: self.check,
            name: self.entry.name().to_owned(),
            pd: self.d.to_string(),
            site,
            detail: detail.into(),
        });
    }

    fn expect<T>(&mut self, site: Option<usize>, r: knotwidth::Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(site, e.to_string());
                None
            }
        }
    }
}

/// Runs one check on one catalog entry. Sites refer to crossings of the
/// canonical diagram, which is what failures print.
pub fn run(ctx: &Context, check: Check, entry: &CatalogEntry) -> (Outcome, Vec<Failure>) {
    let d = entry.diagram.canonical();
    if d.crossing_count() == 0 || d.is_split() || (check.needs_knot() && !d.is_knot()) {
        return (Outcome::Skip, Vec::new());
    }
    let mut run = Run {
        check,
        entry,
        d: &d,
        failures: Vec::new(),
    };
    match check {
        Check::MarkedEdgeInvariance => marked_edge_invariance(ctx, &mut run),
        Check::EtaIdentity => eta_identity(ctx, &mut run),
        Check::WidthGenus => width_genus(&mut run),
        Check::CrossingChange => crossing_change(&mut run),
        Check::GenusChange => genus_change(&mut run),
        Check::Skein => skein(&mut run),
        Check::EulerCharSymmetry => euler_char_symmetry(ctx, &mut run),
        Check::StateCountOracle => state_count_oracle(ctx, &mut run),
    }
    let outcome = if run.failures.is_empty() {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    (outcome, run.failures)
}

fn states_for(
    ctx: &Context,
    d: &LinkDiagram,
    arc: u32,
) -> knotwidth::Result<Vec<states::KauffmanState>> {
    let pair = TaitPair::new(PlaneMap::with_marked_arc(d, arc)?);
    enumerate_states(&pair, ctx.gradings, STATE_CAP)
}

fn marked_edge_invariance(ctx: &Context, run: &mut Run) {
    let mut reference: Option<(u32, i32)> = None;
    for arc in run.d.arcs() {
        let Some(states) = run.expect(None, states_for(ctx, run.d, arc)) else {
            return;
        };
        let max = states.iter().map(|s| s.eta).max().unwrap_or(0);
        let min = states.iter().map(|s| s.eta).min().unwrap_or(0);
        let w = (max - min) / 2 + 1;
        match reference {
            None => reference = Some((arc, w)),
            Some((a0, w0)) if w0 != w => {
                run.fail(
                    None,
                    format!("width {w0} with arc {a0} but {w} with arc {arc}"),
                );
                return;
            }
            _ => {}
        }
    }
}

fn eta_identity(ctx: &Context, run: &mut Run) {
    let arc = run.d.arcs()[0];
    let Some(states) = run.expect(None, states_for(ctx, run.d, arc)) else {
        return;
    };
    if let Some(s) = states.iter().find(|s| s.a2 - s.m2 != s.eta) {
        let detail = format!(
            "dots {:?}: 2(A-M) = {} but eta = {}",
            s.dots,
            s.a2 - s.m2,
            s.eta
        );
        run.fail(None, detail);
    }
}

fn width_genus(run: &mut Run) {
    let (Some(w), Some(g)) = (
        run.expect(None, states::width(run.d)),
        run.expect(None, turaev_genus(run.d)),
    ) else {
        return;
    };
    let (w, g) = (i64::from(w), g);
    if w != g + 1 {
        run.fail(None, format!("width {w} but genus {g}"));
    }
    let record = &run.entry.record;
    if record.alternating == Some(true) && w != 1 {
        run.fail(None, format!("alternating entry has width {w}"));
    }
    if let Some(kw) = record.known_width.filter(|&kw| kw != w) {
        run.fail(None, format!("width {w} but the catalog records {kw}"));
    }
    if let Some(kg) = record.known_genus.filter(|&kg| kg != g) {
        run.fail(None, format!("genus {g} but the catalog records {kg}"));
    }
}

fn crossing_change(run: &mut Run) {
    let Some(w) = run.expect(None, states::width(run.d)) else {
        return;
    };
    for c in 0..run.d.crossing_count() {
        let site = Some(c);
        let Some(predicted) = run.expect(site, states::predict_width_change(run.d, c)) else {
            continue;
        };
        let changed = run.d.crossing_change(c).and_then(|e| states::width(&e));
        if let Some(w2) = run.expect(site, changed) {
            if w2 - w != predicted {
                run.fail(
                    site,
                    format!("width changed by {} but {predicted} was predicted", w2 - w),
                );
            }
        }
    }
}

fn genus_change(run: &mut Run) {
    let Some(g) = run.expect(None, turaev_genus(run.d)) else {
        return;
    };
    for c in 0..run.d.crossing_count() {
        let site = Some(c);
        let Some(predicted) = run.expect(site, predict_genus_change(run.d, c)) else {
            continue;
        };
        let changed = run.d.crossing_change(c).and_then(|e| turaev_genus(&e));
        if let Some(g2) = run.expect(site, changed) {
            if g2 - g != i64::from(predicted) {
                run.fail(
                    site,
                    format!("genus changed by {} but {predicted} was predicted", g2 - g),
                );
            }
        }
    }
}

fn skein(run: &mut Run) {
    for c in 0..run.d.crossing_count() {
        let Some(report) = run.expect(Some(c), skein_check(run.d, c)) else {
            continue;
        };
        if !report.is_exact() {
            let (x, g, w) = report.residuals();
            run.fail(
                Some(c),
                format!(
                    "residuals chi {x}, g {g}, w {w}; circle identities {}",
                    if report.circle_identities_hold() {
                        "hold"
                    } else {
                        "fail"
                    }
                ),
            );
        }
    }
}

fn euler_char_symmetry(ctx: &Context, run: &mut Run) {
    let arc = run.d.arcs()[0];
    let Some(states) = run.expect(None, states_for(ctx, run.d, arc)) else {
        return;
    };
    let Some(p) = run.expect(
        None,
        BigradingTable::from_states(&states).graded_euler_characteristic(),
    ) else {
        return;
    };
    if !p.is_symmetric() {
        run.fail(
            None,
            format!("graded Euler characteristic {p} is not symmetric"),
        );
    } else if p.eval_at_one().abs() != 1 {
        run.fail(
            None,
            format!(
                "graded Euler characteristic {p} is {} at 1",
                p.eval_at_one()
            ),
        );
    }
}

fn state_count_oracle(ctx: &Context, run: &mut Run) {
    let Some(pair) = run.expect(None, TaitPair::of(run.d)) else {
        return;
    };
    let (n1, n2) = (
        pair.t1().spanning_tree_count(),
        pair.t2().spanning_tree_count(),
    );
    if n1 != n2 {
        run.fail(None, format!("T1 has {n1} spanning trees but T2 has {n2}"));
        return;
    }
    let Some(states) = run.expect(None, enumerate_states(&pair, ctx.gradings, STATE_CAP)) else {
        return;
    };
    if n1 != states.len().into() {
        run.fail(
            None,
            format!("{} states but {n1} spanning trees", states.len()),
        );
        return;
    }
    if run.d.crossing_count() <= BRUTE_FORCE_MAX_CROSSINGS {
        let mut brute = brute_force_dots(pair.map());
        let mut found: Vec<Vec<u8>> = states.into_iter().map(|s| s.dots).collect();
        brute.sort();
        found.sort();
        if brute != found {
            run.fail(
                None,
                format!(
                    "{} tree states but {} exhaustive placements",
                    found.len(),
                    brute.len()
                ),
            );
        }
    }
}
