use std::collections::BTreeMap;

use proptest::prelude::*;

use srg_fusion::arith::{MultiPoly, Monomial, QuadraticValue, Rational, Symbol};
use srg_fusion::classify::table::symbolic_tensor_table;
use srg_fusion::fusion::{bm_check, fused_table, tensor_partitions};
use srg_fusion::partition::SetPartition;
use srg_fusion::product::{tensor_square_table, IndexPermutation};
use srg_fusion::scheme::{EigenData, Mode};

const GUARANTEED: [&str; 13] = [
    "2|3|47|58|69", "24|37|5|68|9", "23|4|56|7|89", "2|3|456|789", "258|369|4|7", "23|456|789", "258|369|47",
    "2|3|456789", "23|47|5689", "235689|4|7", "2347|5689", "23|456789", "235689|47",
];

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn positive() -> impl Strategy<Value = Rational> {
    (1i64..30, 1i64..6).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn qv() -> impl Strategy<Value = QuadraticValue> {
    (rational(), rational()).prop_map(|(a, b)| QuadraticValue::new(a, b, 5).unwrap())
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((rational(), [0u8..3, 0u8..3, 0u8..3, 0u8..3]), 0..5).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(c, e)| MultiPoly::term(Monomial([e[0], e[1], e[2], e[3], 0]), c))
            .sum()
    })
}

/// A primitive rank-3 table algebra: `r, t, c > 0`, `s = -1 - t`,
/// `k = c + r + r t`, `l = k (1 + r) t / c`.
fn eigen() -> impl Strategy<Value = EigenData> {
    (positive(), positive(), positive()).prop_map(|(r, t, c)| {
        let one = Rational::from_integer(1.into());
        let s = -(&one + &t);
        let k = &c + &r + &r * &t;
        let l = &k * (&one + &r) * &t / &c;
        let q = QuadraticValue::rational;
        EigenData::from_eigen(q(k), q(l), q(r), q(s), Mode::TableAlgebra).unwrap()
    })
}

fn partition() -> impl Strategy<Value = SetPartition> {
    (0..tensor_partitions().len()).prop_map(|i| tensor_partitions()[i].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadratic_ring_axioms(a in qv(), b in qv(), c in qv()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.checked_recip().unwrap()).is_one());
        }
    }

    #[test]
    fn polynomial_evaluation_is_a_homomorphism(p in poly(), q in poly(), x in prop::array::uniform4(qv())) {
        let asg: BTreeMap<Symbol, QuadraticValue> =
            [Symbol::K, Symbol::L, Symbol::R, Symbol::S].into_iter().zip(x).collect();
        let ev = |p: &MultiPoly| p.eval(&asg).unwrap();
        prop_assert_eq!(ev(&(&p * &q)), &ev(&p) * &ev(&q));
        prop_assert_eq!(ev(&(&p + &q)), &ev(&p) + &ev(&q));
        prop_assert_eq!(p.to_string().parse::<MultiPoly>().unwrap(), p);
    }

    #[test]
    fn partition_strings_round_trip(p in partition()) {
        prop_assert_eq!(p.to_string().parse::<SetPartition>().unwrap(), p);
    }

    #[test]
    fn permutations_preserve_refinement(p in partition(), q in partition()) {
        for g in [IndexPermutation::flip(), IndexPermutation::switch()] {
            prop_assert_eq!(p.refines(&q).unwrap(), g.act(&p).refines(&g.act(&q)).unwrap());
            prop_assert_eq!(g.act(&g.act(&p)), p.clone());
        }
    }

    #[test]
    fn flip_invariance(e in eigen(), p in partition()) {
        let t = tensor_square_table(&e.char_table());
        let flip = IndexPermutation::flip();
        prop_assert_eq!(bm_check(&t.table, &p).unwrap().is_fusion, bm_check(&t.table, &flip.act(&p)).unwrap().is_fusion);
    }

    #[test]
    fn switch_covariance(e in eigen(), p in partition()) {
        let t = tensor_square_table(&e.char_table());
        let u = tensor_square_table(&e.switched().char_table());
        let switch = IndexPermutation::switch();
        prop_assert_eq!(bm_check(&t.table, &p).unwrap().is_fusion, bm_check(&u.table, &switch.act(&p)).unwrap().is_fusion);
    }

    #[test]
    fn guaranteed_fusions_everywhere(e in eigen()) {
        let t = tensor_square_table(&e.char_table());
        let n = e.n();
        let n2 = &n * &n;
        for s in GUARANTEED {
            let p: SetPartition = s.parse().unwrap();
            let f = fused_table(&t.table, &p).unwrap();
            prop_assert_eq!(f.multiplicity_sum(), n2.clone());
            prop_assert!(f.rows[0].values.iter().all(QuadraticValue::is_positive));
            prop_assert_eq!(f.rows[0].values.iter().cloned().sum::<QuadraticValue>(), n2.clone());
            prop_assert!(f.multiplicities.iter().all(QuadraticValue::is_positive));
        }
    }

    #[test]
    fn fused_multiplicities_sum_to_order_squared(e in eigen(), p in partition()) {
        let t = tensor_square_table(&e.char_table());
        if let Ok(f) = fused_table(&t.table, &p) {
            let n = e.n();
            prop_assert_eq!(f.multiplicity_sum(), &n * &n);
        }
    }

    #[test]
    fn symbolic_table_matches_numeric(e in eigen()) {
        let numeric = tensor_square_table(&e.char_table()).rows();
        prop_assert_eq!(symbolic_tensor_table().evaluate(&e.k, &e.l, &e.r, &e.s), numeric);
    }
}
