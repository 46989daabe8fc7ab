//! Randomized invariants.

use std::sync::OnceLock;

use cubic_compose::corpus;
use cubic_compose::cubic::AbstractCubic;
use cubic_compose::equivalence::{meet, Partition};
use cubic_compose::field::{FieldElem, FieldSpec};
use cubic_compose::geometry::collinearity;
use cubic_compose::words::{self, DEFAULT_BUDGET};
use proptest::prelude::*;

fn field(q: u32) -> FieldSpec {
    FieldSpec::with_order(q).unwrap()
}

fn elem(f: &FieldSpec, i: u32) -> FieldElem {
    f.elements().nth((i % f.q()) as usize).unwrap()
}

fn diagonal() -> &'static AbstractCubic {
    static P: OnceLock<AbstractCubic> = OnceLock::new();
    P.get_or_init(|| collinearity(&corpus::diagonal_a_surface(&field(4))).unwrap())
}

proptest! {
    #[test]
    fn frobenius_is_additive_and_multiplicative(
        q in prop::sample::select(vec![4u32, 8, 9, 25, 27, 49, 64, 81]),
        a in any::<u32>(),
        b in any::<u32>(),
    ) {
        let f = field(q);
        let (a, b) = (elem(&f, a), elem(&f, b));
        let fr = |x| f.pow(x, f.p() as u64);
        prop_assert_eq!(fr(f.add(a, b)), f.add(fr(a), fr(b)));
        prop_assert_eq!(fr(f.mul(a, b)), f.mul(fr(a), fr(b)));
        prop_assert_eq!(f.pow(a, q as u64), a);
    }

    #[test]
    fn coefficient_roundtrip(q in prop::sample::select(vec![2u32, 16, 27, 125, 243]), a in any::<u32>()) {
        let f = field(q);
        let a = elem(&f, a);
        prop_assert_eq!(f.elem_from_coeffs(&f.coeffs(a)).unwrap(), a);
    }

    #[test]
    fn normal_form_is_stable(w in prop::collection::vec(0usize..9, 0..7)) {
        let p = diagonal();
        let nf = words::normal_form(&w, p, DEFAULT_BUDGET);
        prop_assert!(!nf.budget_hit);
        let again = words::normal_form(&nf.word, p, DEFAULT_BUDGET);
        prop_assert_eq!(&again.word, &nf.word);
        prop_assert!(nf.word.len() <= w.len());
        prop_assert_eq!(nf.word.len() % 2, w.len() % 2);
    }

    #[test]
    fn inverse_cancels(w in prop::collection::vec(0usize..9, 0..6)) {
        let p = diagonal();
        let ww = words::concat(&w, &words::inverse(&w));
        prop_assert!(words::normal_form(&ww, p, DEFAULT_BUDGET).word.is_empty());
        prop_assert!(words::free_reduce(&ww).is_empty());
    }

    #[test]
    fn rewriting_preserves_equality(w in prop::collection::vec(0usize..9, 1..6)) {
        let p = diagonal();
        for v in words::rewrite_neighbors(&w, p) {
            prop_assert!(words::words_equal(&w, &v, p, DEFAULT_BUDGET).unwrap());
        }
    }

    #[test]
    fn meet_is_the_common_refinement(
        a in prop::collection::vec(0usize..3, 8),
        b in prop::collection::vec(0usize..3, 8),
    ) {
        let (pa, pb) = (Partition::from_labels(&a), Partition::from_labels(&b));
        let m = meet(&pa, &pb).unwrap();
        prop_assert!(m.refines(&pa) && m.refines(&pb));
        for x in 0..8 {
            for y in 0..8 {
                prop_assert_eq!(m.same(x, y), a[x] == a[y] && b[x] == b[y]);
            }
        }
    }
}
