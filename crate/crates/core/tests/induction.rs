mod common;

use rand::seq::SliceRandom;
use rand::Rng;

use common::*;
use nccr_core::fixtures;
use nccr_core::induction::*;
use nccr_core::lattice::{Functional3, Point2};
use nccr_core::triangulate::{embed_rectangle, gulotta_sequence, induction_plan, SignConfig};
use nccr_core::weights::{sign_string, sign_vector, Sign, WeightVector};

/// Data of several shapes: intervals, triangle corners, star fixtures and the
/// pentagon plan.
fn data(rng: &mut rand_chacha::ChaCha8Rng) -> Vec<InductionDatum> {
    let mut out = Vec::new();
    for g in 2..=7 {
        let mut order: Vec<Point2> = (1..g).map(|k| p(k, 2 * k)).collect();
        order.shuffle(rng);
        out.push(interval_datum(p(0, 0), p(g, 2 * g), &order).unwrap());
    }
    for (n, q) in [(5, 3), (7, 5), (11, 4), (13, 8)] {
        let c = corner(n, q);
        out.push(InductionDatum::new(vec![c.v_m1, c.v_0, c.v_rp1], triangle_steps(&c).unwrap()).unwrap());
    }
    out.push(fixtures::hexagon_star().datum);
    out.push(fixtures::square_star().datum);
    out.push(fixtures::non_regular().datum);
    let (pp, p0, _, _) = embed_rectangle(&fixtures::pentagon());
    let (d, _) = induction_plan(&gulotta_sequence(&pp, &p0).unwrap(), &SignConfig::AllMinus).unwrap();
    out.push(d);
    out
}

fn random_signs(rng: &mut rand_chacha::ChaCha8Rng, len: usize) -> SignSequence {
    SignSequence((0..len).map(|_| if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus }).collect())
}

fn random_base(rng: &mut rand_chacha::ChaCha8Rng, d: &InductionDatum) -> WeightVector {
    let vals: Vec<i64> = d.base().iter().map(|_| rng.gen_range(-10..=10)).collect();
    WeightVector::from_pairs(d.base(), &vals)
}

#[test]
fn hexagon_centre_floor() {
    let star = fixtures::hexagon_star();
    let b = WeightVector::from_pairs(star.datum.base(), &[0, 1, 0, 1, 0, 1]);
    let out = induce(&b, &star.datum, &SignSequence(vec![Sign::Minus])).unwrap();
    assert_eq!(out.get(p(0, 0)), Some(0));
    let up = induce(&b, &star.datum, &SignSequence(vec![Sign::Plus])).unwrap();
    assert_eq!(up.get(p(0, 0)), Some(1));
}

#[test]
fn single_reference_copies_value() {
    let d = InductionDatum::new(
        vec![p(0, 0), p(1, 0)],
        vec![InductionStep { vertex: p(0, 0), coeffs: vec![(p(0, 0), Coeff::from_integer(1))] }],
    )
    .unwrap();
    let b = WeightVector::from_pairs(d.base(), &[7, -3]);
    for s in [Sign::Minus, Sign::Plus] {
        let out = induce(&b, &d, &SignSequence::all(s, d.len())).unwrap();
        assert_eq!(out, b);
        let traced = induce_traced(&b, &d, &SignSequence::all(s, d.len())).unwrap();
        assert!(box_functionals(4).iter().all(|&m| check_sign_membership(&traced, &d, m)));
    }
}

#[test]
fn monotone_and_affine_equivariant() {
    let mut rng = rng(1);
    for d in data(&mut rng) {
        for _ in 0..50 {
            let b = random_base(&mut rng, &d);
            let s = random_signs(&mut rng, d.len());
            let out = induce(&b, &d, &s).unwrap();
            let k = rng.gen_range(0..d.base().len());
            let mut raised = b.clone();
            raised.insert(d.base()[k], b.get(d.base()[k]).unwrap() + 1);
            let up = induce(&raised, &d, &s).unwrap();
            for (v, x) in out.iter() {
                assert!(up.get(v).unwrap() >= x, "monotone at {v}");
            }
            let m = Functional3::new(rng.gen_range(-5..=5), rng.gen_range(-5..=5), rng.gen_range(-5..=5));
            let shifted = b.add(&WeightVector::affine(d.base(), m)).unwrap();
            let lhs = induce(&shifted, &d, &s).unwrap();
            let keys: Vec<Point2> = out.keys().collect();
            let rhs = out.add(&WeightVector::affine(&keys, m)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn triangle_shift_example() {
    let c = corner(7, 5);
    let m = Functional3::new(1, -1, 2);
    let base = [3, -2, 5];
    let plain = triangle_induce(base[0], base[1], base[2], &c).unwrap();
    let sh = |v: Point2| m.eval(v) + 3;
    let shifted = triangle_induce(base[0] + sh(c.v_m1), base[1] + sh(c.v_0), base[2] + sh(c.v_rp1), &c).unwrap();
    for (j, v) in c.chain.iter().enumerate() {
        assert_eq!(shifted[j], plain[j] + sh(*v));
    }
}

#[test]
fn sign_membership_in_radius_ten_box() {
    let mut rng = rng(2);
    let ms = box_functionals(10);
    for d in data(&mut rng) {
        for _ in 0..3 {
            let b = random_base(&mut rng, &d);
            let traced = induce_traced(&b, &d, &random_signs(&mut rng, d.len())).unwrap();
            assert!(ms.iter().all(|&m| check_sign_membership(&traced, &d, m)));
        }
    }
}

#[test]
fn corrupted_entry_leaves_support_signs() {
    let d = interval_datum(p(0, 0), p(2, 0), &[p(1, 0)]).unwrap();
    let b = WeightVector::from_pairs(d.base(), &[0, 0]);
    let mut traced = induce_traced(&b, &d, &SignSequence(vec![Sign::Minus])).unwrap();
    traced.steps[0] += 2;
    let ms = box_functionals(3);
    assert!(ms.iter().any(|&m| !check_sign_membership(&traced, &d, m)));
}

#[test]
fn difference_witness_examples() {
    let d = interval_datum(p(0, 0), p(2, 0), &[p(1, 0)]).unwrap();
    let s = SignSequence(vec![Sign::Minus]);
    let b1 = induce_traced(&WeightVector::from_pairs(d.base(), &[0, 1]), &d, &s).unwrap();
    let b2 = induce_traced(&WeightVector::from_pairs(d.base(), &[1, 0]), &d, &s).unwrap();
    // entries 0 and 0; the base difference (-1, 1) averages to 0, a tie
    assert_eq!((b1.steps[0], b2.steps[0]), (0, 0));
    assert_eq!(difference_is_induced(&b1, &b2, &d).unwrap(), SignSequence(vec![Sign::Minus]));
    let up = SignSequence(vec![Sign::Plus]);
    let c1 = induce_traced(&WeightVector::from_pairs(d.base(), &[0, 1]), &d, &up).unwrap();
    let c2 = induce_traced(&WeightVector::from_pairs(d.base(), &[0, 0]), &d, &up).unwrap();
    // 1 - 0 against the difference average 1/2: the ceiling
    assert_eq!(difference_is_induced(&c1, &c2, &d).unwrap(), up);
    assert_eq!(difference_is_induced(&b1, &b1, &d).unwrap(), SignSequence(vec![Sign::Minus]));
}

#[test]
fn difference_witness_fuzz() {
    let mut rng = rng(3);
    let all = data(&mut rng);
    for _ in 0..10_000 {
        let d = all.choose(&mut rng).unwrap();
        let s = random_signs(&mut rng, d.len());
        let b1 = induce_traced(&random_base(&mut rng, d), d, &s).unwrap();
        let b2 = induce_traced(&random_base(&mut rng, d), d, &s).unwrap();
        let w = difference_is_induced(&b1, &b2, d).expect("witness exists");
        let diff = b1.base.sub(&b2.base).unwrap();
        assert_eq!(induce(&diff, d, &w).unwrap(), b1.values.sub(&b2.values).unwrap());
    }
}

#[test]
fn interval_box_example() {
    let chain = [p(0, 0), p(1, 0), p(2, 0), p(3, 0)];
    let ms = box_functionals(8);
    for order in [[p(1, 0), p(2, 0)], [p(2, 0), p(1, 0)]] {
        let d = interval_datum(p(0, 0), p(3, 0), &order).unwrap();
        for s in [[Sign::Minus, Sign::Plus], [Sign::Plus, Sign::Minus]] {
            let b = induce(&WeightVector::from_pairs(d.base(), &[0, 2]), &d, &SignSequence(s.to_vec())).unwrap();
            assert!(ms.iter().all(|&m| interval_pattern_holds(&b, &chain, m)));
        }
    }
}

#[test]
fn triangle_box_example() {
    let c = corner(5, 3);
    let pts = c.points();
    let vec_of = |b: [i64; 3]| {
        let mut v = vec![b[0], b[1]];
        v.extend(triangle_induce(b[0], b[1], b[2], &c).unwrap());
        v.push(b[2]);
        v
    };
    let (x, y) = (vec_of([0, 0, 2]), vec_of([0, 0, 4]));
    let diff: Vec<i64> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
    let w = WeightVector::from_pairs(&pts, &diff);
    assert!(box_functionals(10).iter().all(|&m| triangle_pattern_holds(&w, &c, m)));
    assert!(triangle_pattern_holds(&WeightVector::zero(&pts), &c, Functional3::new(3, -1, 2)));
}

#[test]
fn small_suites() {
    let t = truncation_suite(12, 50, 11);
    assert!(t.ok(), "{}", t.summary());
    let t = interval_suite(8, 4, 12);
    assert!(t.ok(), "{}", t.summary());
    let t = triangle_suite(9, 2, 4, 13);
    assert!(t.ok(), "{}", t.summary());
}

#[test]
fn square_sign_example() {
    let sq = fixtures::unit_square();
    let b = WeightVector::from_pairs(sq.vertices(), &[0, 1, 0, 1]);
    let s = sign_vector(&b, Functional3::new(0, 0, -1)).on(sq.vertices()).unwrap();
    assert_eq!(sign_string(&s), "-+-+");
    let zero = WeightVector::zero(sq.vertices());
    assert_eq!(sign_string(&sign_vector(&zero, Functional3::new(0, 0, -1)).on(sq.vertices()).unwrap()), "----");
    assert_eq!(sign_string(&sign_vector(&zero, Functional3::new(0, 0, 0)).on(sq.vertices()).unwrap()), "++++");
}
