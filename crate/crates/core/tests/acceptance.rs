//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use knotwidth::catalog::Catalog;
use knotwidth::generate::random_knot_diagram;
use knotwidth::poly::torus_alexander;
use knotwidth::skein::{kink_chain_example, normalized_width, skein_check, width_via_skein};
use knotwidth::states::{self, enumerate_states, STATE_CAP};
use knotwidth::turaev::{predict_genus_change, turaev_genus, turaev_surface};
use knotwidth::{BigradingTable, LinkDiagram, LocalGradings, TaitPair};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (
    &'static str,
    Option<Duration>,
    Box<dyn Fn() -> Outcome + 'a>,
);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(context: &str) -> impl Fn(E) -> String + '_ {
    move |e| format!("{context}: {e}")
}

fn table_one() -> BigradingTable {
    BigradingTable::from_counts([
        (-3, -6, 1),
        (-2, -5, 2),
        (-2, -4, 1),
        (-1, -4, 3),
        (-1, -3, 3),
        (0, -3, 3),
        (0, -2, 4),
        (1, -2, 3),
        (1, -1, 3),
        (2, -1, 2),
        (2, 0, 1),
        (3, 0, 1),
    ])
}

fn criterion_1(catalog: &Catalog) -> Outcome {
    let d = &catalog
        .get("8_19")
        .ok_or("8_19 missing from catalog")?
        .diagram;
    let s = turaev_surface(d).map_err(err("surface"))?;
    check((s.v(), s.e(), s.f()) == (3, 8, 5), || {
        format!("V, E, F = {}, {}, {}", s.v(), s.e(), s.f())
    })?;
    check(s.chi() == 0 && s.genus() == Some(1), || {
        format!("chi {} genus {:?}", s.chi(), s.genus())
    })?;
    let pair = TaitPair::of(d).map_err(err("tait"))?;
    let states =
        enumerate_states(&pair, LocalGradings::bundled(), STATE_CAP).map_err(err("states"))?;
    check(states.len() == 27, || format!("{} states", states.len()))?;
    for g in [pair.t1(), pair.t2()] {
        check(g.spanning_tree_count() == 27.into(), || {
            format!("matrix-tree count {}", g.spanning_tree_count())
        })?;
    }
    let table = BigradingTable::from_states(&states);
    check(table.width() == Some(2), || {
        format!("width {:?}", table.width())
    })?;
    check(table == table_one(), || {
        format!("table differs:\n{}", table.to_text())
    })?;
    // The two highlighted states: (A, M) = (-2, -5) on the top diagonal and
    // one with η = 4 on the bottom diagonal.
    check(
        states.iter().any(|s| (s.a2, s.m2, s.eta) == (-4, -10, 6)),
        || "no state with A = -2, M = -5, η = 6".into(),
    )?;
    check(
        states.iter().any(|s| s.eta == 4 && s.a2 - s.m2 == 4),
        || "no state with η = 4".into(),
    )?;
    Ok("V=3 E=8 F=5 chi=0 g=1, 27 states, width 2, table matches".into())
}

fn criterion_2(catalog: &Catalog) -> Outcome {
    let mut n = 0;
    for e in catalog
        .entries
        .iter()
        .filter(|e| e.record.alternating == Some(true))
    {
        let d = &e.diagram;
        check(d.is_alternating(), || {
            format!("{} is not an alternating diagram", e.name())
        })?;
        let g = turaev_genus(d).map_err(err(e.name()))?;
        let w = states::width(d).map_err(err(e.name()))?;
        check((g, w) == (0, 1), || {
            format!("{}: genus {g}, width {w}", e.name())
        })?;
        n += 1;
    }
    Ok(format!("{n} alternating entries have genus 0 and width 1"))
}

fn width_genus(d: &LinkDiagram) -> Result<(i32, i64), String> {
    let w = states::width(d).map_err(|e| format!("{d}: {e}"))?;
    let g = turaev_genus(d).map_err(|e| format!("{d}: {e}"))?;
    Ok((w, g))
}

fn criterion_3(catalog: &Catalog) -> Outcome {
    for e in &catalog.entries {
        let (w, g) = width_genus(&e.diagram)?;
        check(w as i64 == g + 1, || {
            format!("{}: width {w}, genus {g}", e.name())
        })?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let random = 1000;
    let mut max_genus = 0;
    for _ in 0..random {
        let d = random_knot_diagram(&mut rng, catalog, 10).map_err(err("generator"))?;
        let (w, g) = width_genus(&d)?;
        check(w as i64 == g + 1, || format!("{d}: width {w}, genus {g}"))?;
        max_genus = max_genus.max(g);
    }
    Ok(format!(
        "{} catalog + {random} random diagrams (genus up to {max_genus})",
        catalog.len()
    ))
}

/// Which of the four cycle conditions holds at `c`: both, only the
/// positive edge, only the negative edge, neither.
fn cycle_case(d: &LinkDiagram, c: usize) -> Result<usize, String> {
    let pair = TaitPair::of(d).map_err(|e| format!("{d}: {e}"))?;
    let [(tp, ep), (tn, en)] = pair.signed_edges(c);
    Ok(
        match (
            tp.in_monochrome_cycle(ep.crossing),
            tn.in_monochrome_cycle(en.crossing),
        ) {
            (true, true) => 0,
            (true, false) => 1,
            (false, true) => 2,
            (false, false) => 3,
        },
    )
}

/// Checks both predictions for changing `c` in `d`, returning the case.
fn check_change(d: &LinkDiagram, c: usize, before: (i32, i64)) -> Result<usize, String> {
    let (w, g) = before;
    let changed = d.crossing_change(c).map_err(|e| e.to_string())?;
    let (w2, g2) = width_genus(&changed)?;
    let pw = states::predict_width_change(d, c).map_err(|e| e.to_string())?;
    let pg = predict_genus_change(d, c).map_err(|e| e.to_string())?;
    check((w2 - w).abs() <= 1, || {
        format!("{d} crossing {c}: width jumps by {}", w2 - w)
    })?;
    check(pw == w2 - w, || {
        format!("{d} crossing {c}: width change {} predicted {pw}", w2 - w)
    })?;
    check(pg as i64 == g2 - g, || {
        format!("{d} crossing {c}: genus change {} predicted {pg}", g2 - g)
    })?;
    cycle_case(d, c)
}

fn criterion_4(catalog: &Catalog) -> Outcome {
    // Sites of the catalog diagrams, and the same sites changed back from
    // the crossing-changed diagram.
    let mut forward = [0usize; 4];
    let mut reverse = [0usize; 4];
    for e in catalog
        .entries
        .iter()
        .filter(|e| e.diagram.crossing_count() <= 9)
    {
        let d = &e.diagram;
        let before = width_genus(d)?;
        for c in 0..d.crossing_count() {
            forward[check_change(d, c, before)?] += 1;
            let changed = d.crossing_change(c).map_err(err(e.name()))?;
            let after = width_genus(&changed)?;
            reverse[check_change(&changed, c, after)?] += 1;
        }
    }
    let all: Vec<usize> = (0..4).map(|i| forward[i] + reverse[i]).collect();
    check(all.iter().all(|&n| n > 0), || {
        format!("cases not all exercised: catalog {forward:?}, reversed {reverse:?}")
    })?;
    Ok(format!(
        "|dw| <= 1 everywhere; cases (both, +only, -only, neither): catalog {forward:?}, reversed {reverse:?}"
    ))
}

fn criterion_5(catalog: &Catalog) -> Outcome {
    let mut sites = 0;
    for e in &catalog.entries {
        for c in 0..e.diagram.crossing_count() {
            let r = skein_check(&e.diagram, c).map_err(err(e.name()))?;
            check(r.residuals() == (0, 0, 0), || {
                format!("{} crossing {c}: residuals {:?}", e.name(), r.residuals())
            })?;
            check(r.circle_identities_hold(), || {
                format!("{} crossing {c}: circle counts {:?}", e.name(), r.circles)
            })?;
            sites += 1;
        }
    }
    Ok(format!("{sites} sites exact"))
}

fn criterion_6() -> Outcome {
    let q = kink_chain_example();
    let w = |d: &LinkDiagram| normalized_width(d).map_err(|e| e.to_string());
    let got = [w(&q.minus)?, w(&q.infinity)?, w(&q.zero)?, w(&q.plus)?];
    check(got == [1, 1, 0, 1], || {
        format!("(L-, Linf, L0, L+) = {got:?}")
    })?;
    let plus = width_via_skein(&q.plus).map_err(err("skein width"))?;
    check(plus == -got[0] + got[2] + got[1] + 1 && plus == 1, || {
        format!("skein evaluation of L+ gave {plus}")
    })?;
    let states = states::bigrading_table(&q.plus).map_err(err("L+ states"))?;
    check(states.total() == 1, || {
        format!("L+ has {} states", states.total())
    })?;
    check(!q.plus.is_alternating(), || "L+ is alternating".into())?;
    check(
        q.minus.is_alternating() && q.infinity.is_alternating(),
        || "L- or Linf not alternating".into(),
    )?;
    let parts = q.zero.split_components();
    check(
        parts.len() == 2
            && parts
                .iter()
                .all(|p| p.is_alternating() && p.crossing_count() > 0),
        || format!("L0 = {} is not a union of two alternating diagrams", q.zero),
    )?;
    Ok(format!(
        "w(L-)=1 w(Linf)=1 w(L0)=0 w(L+)=1 for L+ = {}",
        q.plus
    ))
}

fn criterion_7(catalog: &Catalog) -> Outcome {
    for e in catalog.entries.iter().filter(|e| e.diagram.is_knot()) {
        let d = &e.diagram;
        let pair = TaitPair::of(d).map_err(err(e.name()))?;
        let table = states::bigrading_table(d).map_err(err(e.name()))?;
        for g in [pair.t1(), pair.t2()] {
            check(g.spanning_tree_count() == table.total().into(), || {
                format!(
                    "{}: {} states, matrix-tree {}",
                    e.name(),
                    table.total(),
                    g.spanning_tree_count()
                )
            })?;
        }
        let p = table.graded_euler_characteristic().map_err(err(e.name()))?;
        check(p.is_symmetric() && p.eval_at_one().abs() == 1, || {
            format!("{}: Euler characteristic {p}", e.name())
        })?;
        if e.name() == "8_19" {
            check(p == torus_alexander(3, 4), || format!("8_19: {p}"))?;
        }
    }
    Ok("state counts, symmetry, p(1) = ±1, 8_19 = x^3 - x^2 + 1 - x^-2 + x^-3".into())
}

fn criterion_8(catalog: &Catalog) -> Outcome {
    let mut runs = 0;
    for e in catalog
        .entries
        .iter()
        .filter(|e| e.diagram.is_knot() && e.diagram.crossing_count() <= 8)
    {
        let d = &e.diagram;
        let widths: Vec<i32> = d
            .arcs()
            .into_iter()
            .map(|arc| states::width_with_marked_arc(d, arc))
            .collect::<knotwidth::Result<_>>()
            .map_err(err(e.name()))?;
        check(widths.windows(2).all(|w| w[0] == w[1]), || {
            format!("{}: widths {widths:?}", e.name())
        })?;
        runs += widths.len();
    }
    Ok(format!("{runs} (diagram, arc) pairs"))
}

fn main() -> ExitCode {
    let catalog = Catalog::bundled();
    let criteria: Vec<Criterion> = vec![
        (
            "8_19 reproduction",
            Some(Duration::from_secs(1)),
            Box::new(|| criterion_1(&catalog)),
        ),
        (
            "alternating suite",
            Some(Duration::from_secs(10)),
            Box::new(|| criterion_2(&catalog)),
        ),
        (
            "width = genus + 1",
            Some(Duration::from_secs(120)),
            Box::new(|| criterion_3(&catalog)),
        ),
        (
            "crossing-change predictions",
            None,
            Box::new(|| criterion_4(&catalog)),
        ),
        ("skein exactness", None, Box::new(|| criterion_5(&catalog))),
        ("kink-chain skein example", None, Box::new(criterion_6)),
        (
            "state-complex sanity",
            None,
            Box::new(|| criterion_7(&catalog)),
        ),
        (
            "marked-arc invariance",
            None,
            Box::new(|| criterion_8(&catalog)),
        ),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, limit) {
            if elapsed > *limit {
                outcome = Err(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        match outcome {
            Ok(detail) => println!("PASS [{}] {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL [{}] {name} ({elapsed:.2?}): {reason}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
