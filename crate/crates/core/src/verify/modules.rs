//! Literal module comparison `M_b = {m : m(v) >= -b_v}` on a box.

use std::collections::BTreeSet;

use crate::lattice::{convex_hull, Functional3, Point2};
use crate::weights::WeightVector;

pub fn module_points(b: &WeightVector, radius: i64) -> BTreeSet<Functional3> {
    let mut out = BTreeSet::new();
    for m1 in -radius..=radius {
        for m2 in -radius..=radius {
            for m3 in -radius..=radius {
                let m = Functional3::new(m1, m2, m3);
                if b.iter().all(|(v, bv)| m.eval(v) >= -bv) {
                    out.insert(m);
                }
            }
        }
    }
    out
}

/// Extreme points of the convex hull of a finite point set.
fn extreme_points(pts: &[Point2]) -> Vec<Point2> {
    match convex_hull(pts) {
        Ok(p) => p.vertices().to_vec(),
        Err(_) => {
            // empty, a point, or a segment
            let mut s: Vec<Point2> = pts.to_vec();
            s.sort();
            s.dedup();
            match (s.first(), s.last()) {
                (Some(&a), Some(&b)) if a != b => vec![a, b],
                (Some(&a), _) => vec![a],
                _ => vec![],
            }
        }
    }
}

/// Same box points and the same recession cone (the cones over both key
/// sets coincide). Box agreement confirms equality only up to the radius.
pub fn modules_equal(b1: &WeightVector, b2: &WeightVector, radius: i64) -> bool {
    let k1: Vec<Point2> = b1.keys().collect();
    let k2: Vec<Point2> = b2.keys().collect();
    extreme_points(&k1) == extreme_points(&k2) && module_points(b1, radius) == module_points(b2, radius)
}

/// A box point in exactly one of the two modules.
pub fn module_difference(b1: &WeightVector, b2: &WeightVector, radius: i64) -> Option<Functional3> {
    let (a, b) = (module_points(b1, radius), module_points(b2, radius));
    a.symmetric_difference(&b).next().copied()
}
