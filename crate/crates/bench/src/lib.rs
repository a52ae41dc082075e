//! Shared fixtures for the benchmarks.

use hyperrel_core::digraphs::{enumerate_tournaments, Tournament};
use hyperrel_core::relations::BooleanRelation;

pub fn five_tournaments() -> Vec<Tournament> {
    enumerate_tournaments(5, false).expect("n = 5 within guard")
}

pub fn dense_relation(n: usize) -> BooleanRelation {
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            // Deterministic mid-density pattern with mixed cycle lengths.
            if (i * 7 + j * 5 + i * j) % 3 == 0 && i != j {
                arcs.push((i, j));
            }
        }
    }
    BooleanRelation::from_arcs(n, &arcs).expect("size within guard")
}
