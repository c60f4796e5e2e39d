//! Bundled example polygons, triangulations and induction data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::induction::{Coeff, InductionDatum, InductionStep};
use crate::lattice::{convex_hull, LatticePolygon, Point2};

fn pts(v: &[(i64, i64)]) -> Vec<Point2> {
    v.iter().map(|&(x, y)| Point2::new(x, y)).collect()
}

fn polygon(v: &[(i64, i64)]) -> LatticePolygon {
    LatticePolygon::new(pts(v)).expect("fixture polygon is valid")
}

/// The pentagon `(0,0), (4,0), (4,1), (3,2), (1,3)`.
pub fn pentagon() -> LatticePolygon {
    polygon(&[(0, 0), (4, 0), (4, 1), (3, 2), (1, 3)])
}

pub fn unit_square() -> LatticePolygon {
    polygon(&[(0, 0), (1, 0), (1, 1), (0, 1)])
}

pub fn unit_triangle() -> LatticePolygon {
    polygon(&[(0, 0), (1, 0), (0, 1)])
}

/// The minimal regular lattice hexagon around the origin.
pub fn hexagon() -> LatticePolygon {
    polygon(&[(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)])
}

/// A polygon with interior lattice points triangulated unimodularly and an
/// explicit datum for the interior vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedTriangulation {
    pub polygon: LatticePolygon,
    pub triangles: Vec<[Point2; 3]>,
    pub datum: InductionDatum,
}

fn step(v: Point2, refs: &[(Point2, i64, i64)]) -> InductionStep {
    InductionStep { vertex: v, coeffs: refs.iter().map(|&(p, a, b)| (p, Coeff::new(a, b))).collect() }
}

/// Star triangulation of the hexagon from its centre, centre weight `1/6` each.
pub fn hexagon_star() -> InducedTriangulation {
    let hex = hexagon();
    let v = hex.vertices().to_vec();
    let o = Point2::new(0, 0);
    let triangles = (0..6).map(|i| [o, v[i], v[(i + 1) % 6]]).collect();
    let refs: Vec<(Point2, i64, i64)> = v.iter().map(|&p| (p, 1, 6)).collect();
    let datum = InductionDatum::new(v.clone(), vec![step(o, &refs)]).expect("hexagon datum");
    InducedTriangulation { polygon: hex, triangles, datum }
}

/// The square `[0,2]^2` coned from its centre, centre weight `1/4` on each corner.
pub fn square_star() -> InducedTriangulation {
    let sq = polygon(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
    let c = Point2::new(1, 1);
    let v = sq.vertices().to_vec();
    let e: Vec<Point2> = pts(&[(1, 0), (2, 1), (1, 2), (0, 1)]);
    let mut triangles = Vec::new();
    for i in 0..4 {
        triangles.push([c, v[i], e[i]]);
        triangles.push([c, e[i], v[(i + 1) % 4]]);
    }
    let mut steps: Vec<InductionStep> = (0..4).map(|i| step(e[i], &[(v[i], 1, 2), (v[(i + 1) % 4], 1, 2)])).collect();
    let refs: Vec<(Point2, i64, i64)> = v.iter().map(|&p| (p, 1, 4)).collect();
    steps.push(step(c, &refs));
    let datum = InductionDatum::new(v, steps).expect("square datum");
    InducedTriangulation { polygon: sq, triangles, datum }
}

/// Labels `n1 .. n10` of the non-regular triangulation.
pub fn non_regular_points() -> [Point2; 10] {
    let v = pts(&[(0, 0), (2, 0), (-2, 6), (1, 0), (0, 3), (-1, 3), (0, 2), (0, 1), (1, 1), (-1, 4)]);
    v.try_into().expect("ten points")
}

/// A unimodular triangulation of `(0,0), (2,0), (-2,6)` that is not regular,
/// with `n7 = (n1+n2+n3)/3` and the remaining points as midpoints.
pub fn non_regular() -> InducedTriangulation {
    let n = non_regular_points();
    let at = |k: usize| n[k - 1];
    let tri: [(usize, usize, usize); 12] = [
        (1, 4, 9),
        (1, 9, 8),
        (4, 2, 9),
        (2, 5, 10),
        (2, 10, 9),
        (5, 3, 10),
        (3, 6, 8),
        (3, 8, 10),
        (6, 1, 8),
        (7, 8, 9),
        (7, 9, 10),
        (7, 10, 8),
    ];
    let triangles = tri.iter().map(|&(a, b, c)| [at(a), at(b), at(c)]).collect();
    let steps = vec![
        step(at(4), &[(at(1), 1, 2), (at(2), 1, 2)]),
        step(at(5), &[(at(2), 1, 2), (at(3), 1, 2)]),
        step(at(6), &[(at(1), 1, 2), (at(3), 1, 2)]),
        step(at(7), &[(at(1), 1, 3), (at(2), 1, 3), (at(3), 1, 3)]),
        step(at(8), &[(at(1), 1, 2), (at(7), 1, 2)]),
        step(at(9), &[(at(2), 1, 2), (at(7), 1, 2)]),
        step(at(10), &[(at(3), 1, 2), (at(7), 1, 2)]),
    ];
    let datum = InductionDatum::new(vec![at(1), at(2), at(3)], steps).expect("non-regular datum");
    InducedTriangulation { polygon: polygon(&[(0, 0), (2, 0), (-2, 6)]), triangles, datum }
}

/// Deterministic random lattice polygons with coordinates in `[0, size]`.
pub fn random_polygons(seed: u64, count: usize, size: i64) -> Vec<LatticePolygon> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let k = rng.gen_range(3..=7);
        let pts: Vec<Point2> = (0..k).map(|_| Point2::new(rng.gen_range(0..=size), rng.gen_range(0..=size))).collect();
        if let Ok(p) = convex_hull(&pts) {
            out.push(p);
        }
    }
    out
}

/// The 20 bundled random polygons.
pub fn random_fixtures() -> Vec<LatticePolygon> {
    random_polygons(0x5eed, 20, 4)
}

/// Every bundled polygon with a file-friendly name.
pub fn named() -> Vec<(String, LatticePolygon)> {
    let mut out: Vec<(String, LatticePolygon)> = vec![
        ("pentagon".into(), pentagon()),
        ("unit_square".into(), unit_square()),
        ("unit_triangle".into(), unit_triangle()),
        ("hexagon".into(), hexagon()),
        ("non_regular".into(), non_regular().polygon),
    ];
    for (i, p) in random_fixtures().into_iter().enumerate() {
        out.push((format!("random_{i:02}"), p));
    }
    out
}
