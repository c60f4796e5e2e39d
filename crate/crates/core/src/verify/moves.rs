//! How the V-complex changes from one stage to the previous, larger one.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::lattice::Point2;
use crate::triangulate::Triangulation;
use crate::weights::SignVector;

use super::complex::{sign_complex, InducedSubcomplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    Equal,
    /// One side is a single point, the other empty.
    PointVsEmpty,
    /// A new vertex joined by one edge.
    GlueInterval,
    /// A new vertex coned over one existing edge.
    GlueTriangle,
    /// A new vertex coned over a path of `edges >= 2` existing edges.
    GlueFan {
        edges: usize,
    },
    Other,
}

impl Move {
    /// Moves that preserve "empty or contractible" in both directions, except
    /// `PointVsEmpty` which swaps the two.
    pub fn is_listed(self) -> bool {
        !matches!(self, Move::Other)
    }
}

/// Classify `big` relative to `small`, where `big` should be `small` plus one
/// vertex and its star.
pub fn classify_move(small: &InducedSubcomplex, big: &InducedSubcomplex) -> Move {
    if small == big {
        return Move::Equal;
    }
    if small.is_empty() && big.active.len() == 1 && big.edges.is_empty() {
        return Move::PointVsEmpty;
    }
    let new: Vec<Point2> = big.active.difference(&small.active).copied().collect();
    if new.len() != 1 || !small.active.is_subset(&big.active) {
        return Move::Other;
    }
    let a = new[0];
    let mut rest = big.clone();
    rest.active.remove(&a);
    rest.edges.retain(|&(u, v)| u != a && v != a);
    rest.triangles.retain(|t| !t.contains(&a));
    if rest != *small {
        return Move::Other;
    }
    let link: BTreeSet<Point2> = big
        .edges
        .iter()
        .filter_map(|&(u, v)| {
            if u == a {
                Some(v)
            } else if v == a {
                Some(u)
            } else {
                None
            }
        })
        .collect();
    let mut deg: BTreeMap<Point2, usize> = link.iter().map(|&v| (v, 0)).collect();
    let mut link_edges = 0usize;
    for t in big.triangles.iter().filter(|t| t.contains(&a)) {
        for &v in t.iter().filter(|&&v| v != a) {
            *deg.get_mut(&v).expect("link vertex") += 1;
        }
        link_edges += 1;
    }
    match link.len() {
        0 => Move::Other,
        1 => Move::GlueInterval,
        k => {
            // a path: k - 1 edges, connected, degrees at most 2
            let ends = deg.values().filter(|&&d| d == 1).count();
            let is_path = link_edges == k - 1 && deg.values().all(|&d| (1..=2).contains(&d)) && ends == 2;
            match (is_path, link_edges) {
                (true, 1) => Move::GlueTriangle,
                (true, e) => Move::GlueFan { edges: e },
                _ => Move::Other,
            }
        }
    }
}

/// Moves from stage `i` to stage `i - 1` for `i = 1..=l`, for signs given on
/// `V_0`.
pub fn stage_moves(t: &Triangulation, s: &SignVector) -> Vec<Move> {
    let complexes: Vec<InducedSubcomplex> = (0..t.stages()).map(|i| sign_complex(&t.triangles_at(i), s)).collect();
    (1..t.stages()).map(|i| classify_move(&complexes[i], &complexes[i - 1])).collect()
}
