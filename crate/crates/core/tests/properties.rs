use proptest::prelude::*;

use divcyl_core::analysis::{hyperplane_multiplicities, is_divisible, PointMultiset};
use divcyl_core::canon::{aut_order, canonical_key};
use divcyl_core::code::{code_from_points, weight_distribution};
use divcyl_core::cylinder::{construct_cylinder, recognize_cylinder};
use divcyl_core::geom::{bracket, inverse};
use divcyl_core::io::{format_point_set, parse_point_set};
use divcyl_core::{Field, Space};

const ORDERS: [u64; 9] = [2, 3, 4, 5, 7, 8, 9, 16, 27];

fn multiset(q: u64, v: usize, picks: &[(usize, u32)]) -> PointMultiset {
    let s = Space::new(&Field::with_order(q).unwrap(), v).unwrap();
    let np = s.num_points();
    PointMultiset::from_counts(&s, picks.iter().map(|&(p, c)| (p % np, c)))
}

fn invertible(f: &Field, v: usize, seed: &[u8]) -> Vec<Vec<u8>> {
    let q = f.q() as u8;
    let mut a: Vec<Vec<u8>> = (0..v).map(|i| (0..v).map(|j| seed[(i * v + j) % seed.len()] % q).collect()).collect();
    // Fall back to a unit upper triangular matrix.
    if inverse(f, &a).is_none() {
        for i in 0..v {
            for j in 0..v {
                a[i][j] = if i == j { 1 } else if j < i { 0 } else { a[i][j] };
            }
        }
    }
    a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(qi in 0..ORDERS.len(), a in 0u8..81, b in 0u8..81, c in 0u8..81) {
        let f = Field::with_order(ORDERS[qi]).unwrap();
        let q = f.q() as u8;
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        prop_assert_eq!(f.frobenius(a), f.pow(a, f.p() as u64));
    }

    #[test]
    fn hyperplane_sum(qi in 0..5usize, v in 2usize..5, picks in prop::collection::vec((0usize..1000, 1u32..4), 1..10)) {
        let q = ORDERS[qi];
        let m = multiset(q, v, &picks);
        let total: u64 = hyperplane_multiplicities(&m).iter().sum();
        prop_assert_eq!(total, m.n() * bracket(v as u32 - 1, q));
    }

    #[test]
    fn canonical_key_is_invariant(qi in 0..6usize, v in 2usize..5, picks in prop::collection::vec((0usize..1000, 1u32..3), 1..8), seed in prop::collection::vec(any::<u8>(), 16), frob in 0u32..3) {
        let q = ORDERS[qi];
        let m = multiset(q, v, &picks);
        let f = m.field().clone();
        let a = invertible(&f, v, &seed);
        let img = m.transform(&a, frob % f.h()).unwrap();
        prop_assert_eq!(canonical_key(&m, false).unwrap(), canonical_key(&img, false).unwrap());
        prop_assert_eq!(aut_order(&m, false).unwrap(), aut_order(&img, false).unwrap());
    }

    #[test]
    fn weights_match_hyperplanes(qi in 0..4usize, v in 2usize..4, picks in prop::collection::vec((0usize..1000, 1u32..3), 1..10)) {
        let q = ORDERS[qi];
        let m = multiset(q, v, &picks);
        let code = code_from_points(&m).unwrap();
        prop_assume!(code.spanning);
        let w = weight_distribution(&code.matrix).unwrap();
        prop_assert_eq!(w.total(), (q as u128).pow(v as u32));
        for x in hyperplane_multiplicities(&m) {
            prop_assert!(w.get((m.n() - x) as usize) >= q as u128 - 1);
        }
        let weighted: u128 = w.counts.iter().map(|(&k, &c)| k as u128 * c).sum();
        // Each coordinate is nonzero in a fraction (q-1)/q of the codewords.
        prop_assert_eq!(weighted, m.n() as u128 * (q as u128 - 1) * (q as u128).pow(v as u32 - 1));
    }

    #[test]
    fn cylinders_are_divisible_and_recognized(qi in 0..4usize, v in 2usize..4, r in 1usize..3, picks in prop::collection::vec(0usize..1000, 5)) {
        let q = ORDERS[qi];
        let s = Space::new(&Field::with_order(q).unwrap(), v).unwrap();
        let base = PointMultiset::from_points(&s, picks.iter().cycle().take(q as usize).map(|p| p % s.num_points()));
        let (cyl, _) = construct_cylinder(&base, r).unwrap();
        prop_assert!(is_divisible(&cyl, q.pow(r as u32)).unwrap().divisible);
        if cyl.is_set() {
            prop_assert!(recognize_cylinder(&cyl, r).unwrap().is_some());
        }
    }

    #[test]
    fn point_set_round_trip(qi in 0..7usize, v in 1usize..5, picks in prop::collection::vec((0usize..1000, 1u32..5), 0..12)) {
        let q = ORDERS[qi];
        let m = multiset(q, v, &picks);
        let text = format_point_set(&m);
        let back = parse_point_set(&text, None).unwrap();
        prop_assert_eq!(format_point_set(&back), text);
        prop_assert_eq!(back, m);
    }
}
