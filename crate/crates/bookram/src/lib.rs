//! Ramsey graphs for book graphs: construction, verification, encoding,
//! and isomorph-free enumeration.
//!
//! The book graph `B_r` is `r` triangles sharing a common edge. A graph
//! contains `B_r` exactly when some edge has at least `r` common neighbors,
//! so the two-sided Ramsey question (does `g` avoid `B_r` while its
//! complement avoids `B_s`?) reduces to common-neighbor counts. This crate
//! builds the structured graphs that answer that question at scale
//! (block-circulant and Paley-type constructions), verifies published
//! witnesses, emits SAT and integer-program instances for exhaustive
//! searches, and enumerates small critical graphs up to isomorphism.

pub mod circulant;
pub mod cli;
pub mod field;
pub mod graph;
pub mod ipenc;
pub mod search;
pub mod satenc;
pub mod witness;
