//! Kauffman-state width and Turaev surface genus for planar link diagrams.
//!
//! A diagram is given in PD notation ([`LinkDiagram::parse`]). From it the
//! crate builds the 4-valent plane map and its checkerboard coloring
//! ([`PlaneMap`]), the two labeled Tait graphs ([`tait`]), the Kauffman
//! states with their Alexander/Maslov bigradings ([`states`]), the all-A and
//! all-B ribbon graphs and the Turaev surface genus ([`turaev`]), and the
//! normalized genus/width skein machinery for split link diagrams
//! ([`skein`]).
//!
//! Every quantity with two independent routes is computed both ways and the
//! routes are cross-checked: state counts against the matrix-tree
//! determinant, bouquet circle counts against union-find splicing, the
//! bouquet genus against the ribbon-graph boundary walk, and the state width
//! against the Turaev genus.

pub mod catalog;
pub mod diagram;
mod error;
pub mod generate;
pub mod poly;
pub mod skein;
pub mod states;
pub mod tait;
pub mod turaev;
mod union_find;

pub use diagram::{LinkDiagram, PlaneMap, Sign, Slot};
pub use error::{Error, Result};
pub use states::{BigradingTable, KauffmanState, LocalGradings};
pub use tait::{EdgeLabel, EdgeSign, Letter, TaitGraph, TaitPair};
pub use turaev::{RibbonGraph, Splice, SplicingState, TuraevSurface};
