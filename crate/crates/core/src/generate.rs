//! Random connected knot diagrams.
//!
//! A seed diagram (a catalog knot, a knotted braid closure or a single kink)
//! is grown by random kinks and finger moves inside random faces, then every
//! crossing is independently switched with probability one half. All moves
//! keep the diagram a connected knot diagram.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::catalog::Catalog;
use crate::diagram::surgery::{braid_closure, Surgery};
use crate::diagram::{PlaneMap, Slot};
use crate::error::Result;
use crate::LinkDiagram;

/// Draws a random knot diagram with between 1 and `max_crossings` crossings.
pub fn random_knot_diagram<R: Rng + ?Sized>(
    rng: &mut R,
    catalog: &Catalog,
    max_crossings: usize,
) -> Result<LinkDiagram> {
    let mut d = seed(rng, catalog, max_crossings)?;
    let target = rng.gen_range(d.crossing_count()..=max_crossings);
    while d.crossing_count() < target {
        let room = target - d.crossing_count();
        d = if room >= 2 && rng.gen_bool(0.6) {
            finger(rng, &d)?
        } else {
            kink(rng, &d)?
        };
    }
    for c in 0..d.crossing_count() {
        if rng.gen_bool(0.5) {
            d = d.crossing_change(c)?;
        }
    }
    Ok(d)
}

fn seed<R: Rng + ?Sized>(
    rng: &mut R,
    catalog: &Catalog,
    max_crossings: usize,
) -> Result<LinkDiagram> {
    match rng.gen_range(0..3) {
        0 => {
            let small: Vec<&LinkDiagram> = catalog
                .entries
                .iter()
                .map(|e| &e.diagram)
                .filter(|d| d.crossing_count() <= max_crossings && d.is_knot())
                .collect();
            if let Some(d) = small.choose(rng) {
                return Ok((*d).clone());
            }
        }
        1 if max_crossings >= 3 => {
            for _ in 0..20 {
                let strands = rng.gen_range(2..=3);
                let len = rng.gen_range(strands..=max_crossings.min(3 * strands + 1));
                let word: Vec<i32> = (0..len)
                    .map(|_| {
                        let g = rng.gen_range(1..strands) as i32;
                        if rng.gen_bool(0.5) {
                            g
                        } else {
                            -g
                        }
                    })
                    .collect();
                let d = braid_closure(strands, &word)?;
                if d.is_knot() && d.split_count() == 1 {
                    return Ok(d);
                }
            }
        }
        _ => {}
    }
    LinkDiagram::parse("PD[X(1,1,2,2)]")
}

fn random_dart<R: Rng + ?Sized>(rng: &mut R, d: &LinkDiagram) -> Slot {
    Slot::new(rng.gen_range(0..d.crossing_count()), rng.gen_range(0..4))
}

fn kink<R: Rng + ?Sized>(rng: &mut R, d: &LinkDiagram) -> Result<LinkDiagram> {
    let mut s = Surgery::from_diagram(d);
    s.kink(random_dart(rng, d), rng.gen_bool(0.5));
    s.into_diagram()
}

fn finger<R: Rng + ?Sized>(rng: &mut R, d: &LinkDiagram) -> Result<LinkDiagram> {
    let map = PlaneMap::new(d)?;
    let faces: Vec<_> = map
        .faces()
        .iter()
        .filter(|f| f.corners.len() >= 2)
        .collect();
    let Some(face) = faces.choose(rng) else {
        return kink(rng, d);
    };
    let mut corners = face.corners.clone();
    corners.shuffle(rng);
    let mut s = Surgery::from_diagram(d);
    s.finger(corners[0], corners[1], rng.gen_bool(0.5));
    s.into_diagram()
}
