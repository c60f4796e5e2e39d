//! Property suites shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nccr_core::fixtures;
use nccr_core::hj::{c_values, d_expansion, digits_admissible, evaluate, hj_expand, q_table};
use nccr_core::induction::{
    induce, interval_datum, interval_pattern_holds, triangle_induce, triangle_pattern_holds, truncation_consistent,
    Corner, SignSequence,
};
use nccr_core::lattice::{convex_hull, CharacterGroup, Functional3, LatticePolygon, Point2};
use nccr_core::verify::{
    box_masks, cm_check, count_classes, cover_masks, endo_cm_check, ext_vanishing, projection_preserves_cm, CornerCut,
    StageComplex, Verdict, VerifyMode,
};
use nccr_core::weights::{Sign, WeightVector};

pub fn p(x: i64, y: i64) -> Point2 {
    Point2::new(x, y)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Violation count with the first few messages kept.
#[derive(Default, Debug)]
pub struct Tally {
    pub checked: usize,
    pub violations: usize,
    pub first: Vec<String>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first.len() < 5 {
                self.first.push(msg());
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.violations == 0
    }

    pub fn summary(&self) -> String {
        format!("{} checks, {} violations {:?}", self.checked, self.violations, self.first)
    }
}

pub fn box_functionals(r: i64) -> Vec<Functional3> {
    let mut out = Vec::with_capacity(((2 * r + 1) as usize).pow(3));
    for m1 in -r..=r {
        for m2 in -r..=r {
            for m3 in -r..=r {
                out.push(Functional3::new(m1, m2, m3));
            }
        }
    }
    out
}

pub fn coprime_pairs(nmax: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for n in 2..=nmax {
        for q in 1..n {
            if num_integer::gcd(n, q) == 1 {
                out.push((n, q));
            }
        }
    }
    out
}

/// Every continued-fraction identity on every coprime `(n, q)` with `n <= nmax`.
pub fn hj_suite(nmax: i64) -> Tally {
    let mut t = Tally::default();
    for (n, q) in coprime_pairs(nmax) {
        let e = hj_expand(n, q).expect("valid pair");
        let r = e.r() as i64;
        let tab = q_table(&e);
        let qq = |s: i64, u: i64| tab.q(s, u);
        let tag = || format!("(n,q)=({n},{q})");

        // expansion
        t.check(e.a.iter().all(|&a| a >= 2), || format!("{} a_j < 2", tag()));
        t.check(e.i_seq.len() as i64 == r + 2 && e.i_seq[0] == n && e.i_seq[1] == q, || {
            format!("{} i_seq ends", tag())
        });
        t.check(*e.i_seq.last().unwrap() == 0, || format!("{} i_(r+1) != 0", tag()));
        t.check(e.i_seq.windows(2).all(|w| w[0] > w[1]), || format!("{} i not decreasing", tag()));
        for j in 1..=r as usize {
            t.check(e.i_seq[j - 1] == e.a[j - 1] * e.i_seq[j] - e.i_seq[j + 1], || {
                format!("{} recursion at {j}", tag())
            });
        }
        t.check(evaluate(&e.a) == (n, q), || format!("{} evaluate", tag()));

        // table basics and both recursions
        for s in -1..=r + 2 {
            t.check(qq(s, s) == 0 && qq(s, s + 1) == 1 && qq(s, s - 1) == -1, || format!("{} initial at {s}", tag()));
            for u in -1..=r + 2 {
                t.check(qq(s, u + 1) == e.a_at(u) * qq(s, u) - qq(s, u - 1), || {
                    format!("{} t-recursion ({s},{u})", tag())
                });
                t.check(qq(s + 1, u) == e.a_at(s) * qq(s, u) - qq(s - 1, u), || {
                    format!("{} s-recursion ({s},{u})", tag())
                });
            }
        }
        // three-term identity
        for s in -1..=r + 2 {
            for k in -1..=r + 2 {
                for u in -1..=r + 2 {
                    let rhs = qq(s, k + 1) * qq(k, u) - qq(s, k) * qq(k + 1, u);
                    t.check(qq(s, u) == rhs, || format!("{} three-term ({s},{k},{u})", tag()));
                }
            }
        }
        // monotonicity on nested ranges
        for s in 0..=r + 1 {
            for u in s..=r + 1 {
                for s2 in s..=u {
                    for u2 in s2..=u {
                        if (s2, u2) != (s, u) {
                            let v = qq(s2, u2);
                            t.check(0 <= v && v < qq(s, u), || format!("{} monotone ({s2},{u2}) in ({s},{u})", tag()));
                        }
                    }
                }
            }
        }
        for j in 0..=r {
            t.check(e.i(j as usize) == qq(j, r + 1), || format!("{} i_t = q(t,r+1) at {j}", tag()));
        }
        // determinant invariance
        for s in 0..=r {
            let det = |l: i64| e.i(l as usize) * qq(s, l + 1) - e.i(l as usize + 1) * qq(s, l);
            let d0 = det(0);
            for l in 0..=r {
                t.check(det(l) == d0, || format!("{} determinant s={s} l={l}", tag()));
            }
        }
        // digits, tail bounds and c-values for every d
        for d in 0..n {
            let dx = d_expansion(d, &e).expect("in range");
            let sum: i64 = dx.iter().enumerate().map(|(k, &x)| e.i(k + 1) * x).sum();
            t.check(sum == d, || format!("{} d={d} sum", tag()));
            t.check(dx.iter().all(|&x| x >= 0), || format!("{} d={d} negative digit", tag()));
            for k in 0..=r as usize {
                let tail: i64 = (k + 1..=r as usize).map(|u| e.i(u) * dx[u - 1]).sum();
                t.check(tail < e.i(k), || format!("{} d={d} tail at {k}", tag()));
            }
            t.check(digits_admissible(&dx, &e), || format!("{} d={d} digits {dx:?}", tag()));
            for j in 1..=r + 1 {
                for k in 0..j {
                    let tail: i64 = (k + 1..j).map(|u| qq(u, j) * dx[u as usize - 1]).sum();
                    t.check(tail < qq(k, j), || format!("{} d={d} q-tail ({k},{j})", tag()));
                }
            }
            let c = c_values(&dx, &tab);
            t.check(c[0] == 0 && c[r as usize + 1] == d, || format!("{} d={d} c ends {c:?}", tag()));
            for l in 1..=r + 1 {
                for j in 1..=l {
                    let num = qq(j, l) as i128 * c[j as usize - 1] as i128 + c[l as usize] as i128;
                    let want = num_integer::Integer::div_floor(&num, &(qq(j - 1, l) as i128));
                    t.check(c[j as usize] as i128 == want, || format!("{} d={d} floor recursion ({j},{l})", tag()));
                }
            }
        }
    }
    t
}

pub fn corner(n: i64, q: i64) -> Corner {
    Corner::with_hull_chain(p(0, 0), p(0, 1), p(n, -q)).expect("corner")
}

pub fn truncation_suite(nmax: i64, triples: usize, seed: u64) -> Tally {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    for (n, q) in coprime_pairs(nmax) {
        let c = corner(n, q);
        for _ in 0..triples {
            let (a, b, d) = (rng.gen_range(-15..=15), rng.gen_range(-15..=15), rng.gen_range(-15..=15));
            t.check(truncation_consistent(&c, a, b, d), || format!("({n},{q}) on ({a},{b},{d})"));
        }
    }
    t
}

const DIRECTIONS: [(i64, i64); 8] = [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (3, -2), (-1, 3)];

/// Random interval chains, every sign sequence, every `m` in the box.
pub fn interval_suite(trials: usize, radius: i64, seed: u64) -> Tally {
    let mut rng = rng(seed);
    let ms = box_functionals(radius);
    let mut t = Tally::default();
    for _ in 0..trials {
        let g = rng.gen_range(2..=8);
        let (dx, dy) = *DIRECTIONS.choose(&mut rng).unwrap();
        let a = p(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        let chain: Vec<Point2> = (0..=g).map(|k| a.add(p(dx * k, dy * k))).collect();
        let mut order = chain[1..g as usize].to_vec();
        order.shuffle(&mut rng);
        let datum = interval_datum(chain[0], chain[g as usize], &order).expect("interval datum");
        let base = WeightVector::from_pairs(
            &[chain[0], chain[g as usize]],
            &[rng.gen_range(-10..=10), rng.gen_range(-10..=10)],
        );
        for choice in 0..1u32 << datum.len() {
            let signs = SignSequence(
                (0..datum.len()).map(|i| if choice >> i & 1 == 1 { Sign::Plus } else { Sign::Minus }).collect(),
            );
            let b = induce(&base, &datum, &signs).expect("interval induction");
            for &m in &ms {
                t.check(interval_pattern_holds(&b, &chain, m), || format!("{chain:?} {b:?} at {m:?}"));
            }
        }
    }
    t
}

/// Differences of floor-induced vectors on every corner with `n <= nmax`.
pub fn triangle_suite(nmax: i64, seeds: usize, radius: i64, seed: u64) -> Tally {
    let mut rng = rng(seed);
    let ms = box_functionals(radius);
    let mut t = Tally::default();
    for (n, q) in coprime_pairs(nmax) {
        let c = corner(n, q);
        let pts = c.points();
        let vector = |b: [i64; 3]| {
            let mid = triangle_induce(b[0], b[1], b[2], &c).expect("triangle induction");
            let mut values = vec![b[0], b[1]];
            values.extend(mid);
            values.push(b[2]);
            values
        };
        for _ in 0..seeds {
            let mut draw = || [rng.gen_range(-10..=10), rng.gen_range(-10..=10), rng.gen_range(-10..=10)];
            let (x, y) = (vector(draw()), vector(draw()));
            let diff: Vec<i64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
            let w = WeightVector::from_pairs(&pts, &diff);
            for &m in &ms {
                t.check(triangle_pattern_holds(&w, &c, m), || format!("({n},{q}) {diff:?} at {m:?}"));
            }
        }
    }
    t
}

/// A matrix `A` with entries in `[-bound, bound]`, `det A = ±1` and
/// `A w_i = target_i`.
pub fn gl2_witness(weights: &[Vec<i64>], target: &[(i64, i64)], bound: i64) -> Option<[[i64; 2]; 2]> {
    if weights.len() != target.len() || weights.iter().any(|w| w.len() != 2) {
        return None;
    }
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                for d in -bound..=bound {
                    if (a * d - b * c).abs() != 1 {
                        continue;
                    }
                    if weights
                        .iter()
                        .zip(target)
                        .all(|(w, &(x, y))| a * w[0] + b * w[1] == x && c * w[0] + d * w[1] == y)
                    {
                        return Some([[a, b], [c, d]]);
                    }
                }
            }
        }
    }
    None
}

pub fn random_polygon(rng: &mut ChaCha8Rng, size: i64) -> LatticePolygon {
    loop {
        let k = rng.gen_range(3..=7);
        let pts: Vec<Point2> = (0..k).map(|_| p(rng.gen_range(0..=size), rng.gen_range(0..=size))).collect();
        if let Ok(poly) = convex_hull(&pts) {
            return poly;
        }
    }
}

fn edge_point(rng: &mut ChaCha8Rng, from: Point2, to: Point2) -> Point2 {
    let d = to.sub(from);
    let g = d.content();
    let k = rng.gen_range(1..=g);
    from.add(p(d.x / g * k, d.y / g * k))
}

/// `(trials run, tally)` for random polygons, CM weights and corner cuts.
pub fn projection_suite(trials: usize, seed: u64) -> Tally {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    while t.checked < trials {
        let poly = random_polygon(&mut rng, 5);
        let v = poly.vertices().to_vec();
        let b = loop {
            let vals: Vec<i64> = v.iter().map(|_| rng.gen_range(-3..=3)).collect();
            let b = WeightVector::from_pairs(&v, &vals);
            if cm_check(&poly, &b).expect("weights on vertices").ok {
                break b;
            }
        };
        let k = rng.gen_range(0..v.len());
        let n = v.len();
        let cut = CornerCut {
            apex: v[k],
            on_pred: edge_point(&mut rng, v[k], v[(k + n - 1) % n]),
            on_succ: edge_point(&mut rng, v[k], v[(k + 1) % n]),
        };
        if cut.apply(&poly).is_err() {
            continue;
        }
        let r = projection_preserves_cm(&poly, &b, &cut);
        t.check(matches!(r, Ok(Some(true))), || format!("{poly} {b:?} {cut:?}: {r:?}"));
    }
    t
}

/// The first six-member collection on the hexagon (lexicographic over value
/// vectors in `{lo..=hi}^6`, containing zero) with pairwise distinct classes
/// and every difference CM.
pub fn hexagon_collection(lo: i64, hi: i64) -> Option<Vec<WeightVector>> {
    let hex = fixtures::hexagon();
    let v = hex.vertices().to_vec();
    let group = CharacterGroup::from_points(&v);
    let mut seen = BTreeSet::new();
    let mut cands: Vec<Vec<i64>> = Vec::new();
    let span = (hi - lo + 1) as u32;
    for code in 0..span.pow(6) {
        let vals: Vec<i64> = (0..6).map(|i| lo + (code / span.pow(i) % span) as i64).collect();
        if seen.insert(group.character_of_values(&vals)) {
            cands.push(vals);
        }
    }
    let zero = vec![0i64; 6];
    let cm = |a: &[i64], b: &[i64]| {
        let d: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        cm_check(&hex, &WeightVector::from_pairs(&v, &d)).unwrap().ok
    };
    let cands: Vec<Vec<i64>> = cands.into_iter().filter(|c| *c != zero && cm(c, &zero) && cm(&zero, c)).collect();
    let k = cands.len();
    let compat: Vec<Vec<bool>> = (0..k)
        .map(|i| (0..k).map(|j| i == j || (cm(&cands[i], &cands[j]) && cm(&cands[j], &cands[i]))).collect())
        .collect();
    fn grow(compat: &[Vec<bool>], chosen: &mut Vec<usize>, from: usize, want: usize) -> bool {
        if chosen.len() == want {
            return true;
        }
        for i in from..compat.len() {
            if chosen.iter().all(|&j| compat[i][j]) {
                chosen.push(i);
                if grow(compat, chosen, i + 1, want) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    if !grow(&compat, &mut chosen, 0, 5) {
        return None;
    }
    let mut out = vec![WeightVector::zero(&v)];
    out.extend(chosen.iter().map(|&i| WeightVector::from_pairs(&v, &cands[i])));
    Some(out)
}

/// The collection, endo-CM, class count and the star-induced ext verdict.
pub fn hexagon_certified(s: &[WeightVector]) -> Result<(), String> {
    let hex = fixtures::hexagon();
    if !endo_cm_check(&hex, s).map_err(|e| e.to_string())? {
        return Err("endo CM fails".into());
    }
    let count = count_classes(hex.vertices(), s).map_err(|e| e.to_string())?;
    if count != 6 {
        return Err(format!("{count} classes"));
    }
    let star = fixtures::hexagon_star();
    let induced = induce_all(s, &star.datum);
    let r = ext_vanishing(&star.triangles, &induced, VerifyMode::Chamber).map_err(|e| e.to_string())?;
    if r.verdict != Verdict::Certified {
        return Err(format!("{:?}: {:?}", r.verdict, r.failures.first()));
    }
    Ok(())
}

pub fn induce_all(s: &[WeightVector], datum: &nccr_core::induction::InductionDatum) -> Vec<WeightVector> {
    let signs = SignSequence::all(Sign::Minus, datum.len());
    s.iter().map(|b| induce(b, datum, &signs).expect("induction")).collect()
}

/// Chamber and box verdicts agree and every box pattern of every difference
/// lies in the chamber cover.
pub fn chamber_box_agree(triangles: &[[Point2; 3]], s: &[WeightVector], radius: i64) -> Result<String, String> {
    let chamber = ext_vanishing(triangles, s, VerifyMode::Chamber).map_err(|e| e.to_string())?;
    let boxed = ext_vanishing(triangles, s, VerifyMode::Box(radius)).map_err(|e| e.to_string())?;
    if chamber.verdict != boxed.verdict {
        return Err(format!("chamber {:?} vs box {:?}", chamber.verdict, boxed.verdict));
    }
    let complex = StageComplex::new(triangles);
    let pts = complex.vertices();
    let values: Vec<Vec<i64>> = s.iter().map(|b| b.values_on(pts).expect("weights on stage")).collect();
    let mut diffs = BTreeSet::new();
    for x in &values {
        for y in &values {
            diffs.insert(x.iter().zip(y).map(|(a, b)| b - a).collect::<Vec<i64>>());
        }
    }
    for d in &diffs {
        let cover: BTreeSet<u128> = cover_masks(pts, d).into_iter().collect();
        if let Some((mask, m)) = box_masks(pts, d, radius).into_iter().find(|(mask, _)| !cover.contains(mask)) {
            return Err(format!("box pattern {mask:b} at {m:?} missing from the cover of {d:?}"));
        }
    }
    Ok(format!("{:?}, {} differences", chamber.verdict, diffs.len()))
}

/// Compares `text` with `tests/golden/<file>`, rewriting it when
/// `UPDATE_GOLDEN` is set.
pub fn golden(file: &str, text: &str) {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(file);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, text).unwrap();
        return;
    }
    let want =
        std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e} (set UPDATE_GOLDEN=1)", path.display()));
    assert!(want == text, "{file} differs from the golden copy");
}

pub fn mode_name(mode: nccr_core::triangulate::Mode) -> String {
    format!("{mode:?}").to_lowercase()
}
