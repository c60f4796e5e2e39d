//! Induced subcomplexes of a planar triangulation and their homology.

use std::collections::{BTreeMap, BTreeSet};

use crate::lattice::{Functional3, Point2};
use crate::weights::{Sign, SignVector, WeightVector};

/// The full subcomplex of a triangulation on a set of active vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InducedSubcomplex {
    pub active: BTreeSet<Point2>,
    pub edges: BTreeSet<(Point2, Point2)>,
    pub triangles: BTreeSet<[Point2; 3]>,
}

fn sorted3(t: &[Point2; 3]) -> [Point2; 3] {
    let mut s = *t;
    s.sort();
    s
}

impl InducedSubcomplex {
    pub fn induced(triangles: &[[Point2; 3]], active: &BTreeSet<Point2>) -> Self {
        let mut c = InducedSubcomplex { active: active.clone(), ..Default::default() };
        for t in triangles {
            let s = sorted3(t);
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                if active.contains(&s[i]) && active.contains(&s[j]) {
                    c.edges.insert((s[i], s[j]));
                }
            }
            if s.iter().all(|v| active.contains(v)) {
                c.triangles.insert(s);
            }
        }
        c
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.active.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    pub fn components(&self) -> usize {
        let idx: BTreeMap<Point2, usize> = self.active.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut parent: Vec<usize> = (0..idx.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut count = idx.len();
        for (a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, idx[a]), find(&mut parent, idx[b]));
            if ra != rb {
                parent[ra] = rb;
                count -= 1;
            }
        }
        count
    }
}

/// `V_{D_b, m}` on the given triangles.
pub fn v_complex(triangles: &[[Point2; 3]], b: &WeightVector, m: Functional3) -> InducedSubcomplex {
    let mut active = BTreeSet::new();
    for t in triangles {
        for &v in t {
            let bv = b.get(v).unwrap_or_else(|| panic!("weight missing at {v}"));
            if m.eval(v) + bv < 0 {
                active.insert(v);
            }
        }
    }
    InducedSubcomplex::induced(triangles, &active)
}

/// The subcomplex on the `-` entries of a sign vector. Entries off the
/// triangulation are ignored.
pub fn sign_complex(triangles: &[[Point2; 3]], s: &SignVector) -> InducedSubcomplex {
    let present: BTreeSet<Point2> = triangles.iter().flatten().copied().collect();
    let active = s.iter().filter(|&(p, x)| x == Sign::Minus && present.contains(&p)).map(|(p, _)| p).collect();
    InducedSubcomplex::induced(triangles, &active)
}

/// `(b̃_{-1}, b̃_0, b̃_1)`; planar complexes have no higher homology.
pub fn reduced_betti(c: &InducedSubcomplex) -> (usize, usize, usize) {
    if c.is_empty() {
        return (1, 0, 0);
    }
    let comps = c.components();
    let b1 = comps as i64 - c.euler_characteristic();
    debug_assert!(b1 >= 0);
    (0, comps - 1, b1 as usize)
}

pub fn is_empty_or_contractible(c: &InducedSubcomplex) -> bool {
    c.is_empty() || (c.components() == 1 && c.euler_characteristic() == 1)
}

/// A triangulation with vertices indexed for bitmask queries (at most 128).
#[derive(Clone, Debug)]
pub struct StageComplex {
    vertices: Vec<Point2>,
    adj: Vec<u128>,
    edges: Vec<u128>,
    triangles: Vec<u128>,
}

pub const MAX_MASK_VERTICES: usize = 128;

impl StageComplex {
    pub fn new(triangles: &[[Point2; 3]]) -> Self {
        let set: BTreeSet<Point2> = triangles.iter().flatten().copied().collect();
        let vertices: Vec<Point2> = set.into_iter().collect();
        assert!(vertices.len() <= MAX_MASK_VERTICES, "stage has more than 128 vertices");
        let idx: BTreeMap<Point2, usize> = vertices.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut adj = vec![0u128; vertices.len()];
        let mut edges = BTreeSet::new();
        let mut tris = BTreeSet::new();
        for t in triangles {
            let k = t.map(|v| idx[&v]);
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                adj[k[i]] |= 1 << k[j];
                adj[k[j]] |= 1 << k[i];
                edges.insert((1u128 << k[i]) | (1u128 << k[j]));
            }
            tris.insert((1u128 << k[0]) | (1u128 << k[1]) | (1u128 << k[2]));
        }
        StageComplex { vertices, adj, edges: edges.into_iter().collect(), triangles: tris.into_iter().collect() }
    }

    /// Sorted vertex list; bit `i` of a mask refers to `vertices()[i]`.
    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    fn connected(&self, mask: u128) -> bool {
        let start = mask & mask.wrapping_neg();
        let (mut seen, mut frontier) = (start, start);
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = self.adj[v] & mask & !seen;
            seen |= new;
            frontier |= new;
        }
        seen == mask
    }

    fn chi(&self, mask: u128) -> i64 {
        let e = self.edges.iter().filter(|&&e| e & mask == e).count() as i64;
        let f = self.triangles.iter().filter(|&&t| t & mask == t).count() as i64;
        mask.count_ones() as i64 - e + f
    }

    pub fn contractible(&self, minus: u128) -> bool {
        minus == 0 || (self.connected(minus) && self.chi(minus) == 1)
    }

    pub fn betti(&self, minus: u128) -> (usize, usize, usize) {
        if minus == 0 {
            return (1, 0, 0);
        }
        let mut comps = 0usize;
        let mut rest = minus;
        while rest != 0 {
            let start = rest & rest.wrapping_neg();
            let (mut seen, mut frontier) = (start, start);
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let new = self.adj[v] & minus & !seen;
                seen |= new;
                frontier |= new;
            }
            rest &= !seen;
            comps += 1;
        }
        (0, comps - 1, (comps as i64 - self.chi(minus)) as usize)
    }

    pub fn subcomplex(&self, minus: u128, triangles: &[[Point2; 3]]) -> InducedSubcomplex {
        let active = self.vertices.iter().enumerate().filter(|(i, _)| minus >> i & 1 == 1).map(|(_, &p)| p).collect();
        InducedSubcomplex::induced(triangles, &active)
    }
}
