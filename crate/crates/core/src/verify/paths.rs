//! The constant-sign path criterion for convexly induced triangulations.

use std::collections::{BTreeMap, BTreeSet};

use crate::induction::InductionDatum;
use crate::lattice::{LatticePolygon, Point2};
use crate::weights::Sign;

use super::ext::VerifyError;

pub const DEFAULT_BRANCH_BOUND: usize = 1 << 20;

struct Graph {
    adj: BTreeMap<Point2, BTreeSet<Point2>>,
    boundary: BTreeSet<Point2>,
}

impl Graph {
    fn new(triangles: &[[Point2; 3]], p: &LatticePolygon) -> Self {
        let mut adj: BTreeMap<Point2, BTreeSet<Point2>> = BTreeMap::new();
        for t in triangles {
            for i in 0..3 {
                let (a, b) = (t[i], t[(i + 1) % 3]);
                adj.entry(a).or_default().insert(b);
                adj.entry(b).or_default().insert(a);
            }
        }
        let boundary = adj.keys().copied().filter(|&v| p.on_boundary(v)).collect();
        Graph { adj, boundary }
    }

    /// Every vertex reaches the boundary through vertices of its own sign.
    fn connected_to_boundary(&self, signs: &BTreeMap<Point2, Sign>) -> bool {
        for sign in [Sign::Plus, Sign::Minus] {
            let mut seen: BTreeSet<Point2> = self.boundary.iter().copied().filter(|v| signs[v] == sign).collect();
            let mut stack: Vec<Point2> = seen.iter().copied().collect();
            while let Some(v) = stack.pop() {
                for &w in &self.adj[&v] {
                    if signs[&w] == sign && seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
            if self.adj.keys().any(|v| signs[v] == sign && !seen.contains(v)) {
                return false;
            }
        }
        true
    }
}

/// For every sign assignment that is `+..+-..-` (both present) on the polygon
/// vertices and gives each induced vertex a sign occurring on its support,
/// every vertex has a monochromatic edge path to the boundary.
pub fn constant_sign_path_check(
    triangles: &[[Point2; 3]],
    p: &LatticePolygon,
    datum: &InductionDatum,
    bound: usize,
) -> Result<bool, VerifyError> {
    let g = Graph::new(triangles, p);
    let corners = p.vertices();
    let n = corners.len();
    let mut explored = 0usize;
    let steps = datum.steps();
    for start in 0..n {
        for plus in 1..n {
            let mut signs: BTreeMap<Point2, Sign> = BTreeMap::new();
            for k in 0..n {
                let s = if k < plus { Sign::Plus } else { Sign::Minus };
                signs.insert(corners[(start + k) % n], s);
            }
            for v in datum.base() {
                if !signs.contains_key(v) {
                    return Err(VerifyError::BaseNotVertex(*v));
                }
            }
            // depth-first over the induced steps
            let mut stack: Vec<(usize, BTreeMap<Point2, Sign>)> = vec![(0, signs)];
            while let Some((i, cur)) = stack.pop() {
                if i == steps.len() {
                    explored += 1;
                    if explored > bound {
                        return Err(VerifyError::ExplosionGuard { bound, explored });
                    }
                    if let Some(v) = g.adj.keys().find(|v| !cur.contains_key(v)) {
                        return Err(VerifyError::Uncovered(*v));
                    }
                    if !g.connected_to_boundary(&cur) {
                        return Ok(false);
                    }
                    continue;
                }
                let options: BTreeSet<Sign> = steps[i].support().map(|q| cur[&q]).collect();
                for s in options {
                    let mut next = cur.clone();
                    next.insert(steps[i].vertex, s);
                    stack.push((i + 1, next));
                }
            }
        }
    }
    Ok(true)
}
