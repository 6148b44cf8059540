use proptest::prelude::*;
use sigcert::words::{half_shuffle, shuffle};
use sigcert::{Rational, TensorElem, Word};

fn arb_elem(alphabet: usize, min_len: usize, max_len: usize) -> impl Strategy<Value = TensorElem> {
    prop::collection::vec(
        (
            prop::collection::vec(1..=alphabet, min_len..=max_len),
            -4i64..=4,
            1i64..=3,
        ),
        1..4,
    )
    .prop_map(move |terms| {
        TensorElem::from_terms(
            alphabet,
            terms.into_iter().map(|(letters, n, d)| {
                (
                    Rational::new(n.into(), d.into()),
                    Word::new(alphabet, letters).unwrap(),
                )
            }),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shuffle_is_commutative(a in arb_elem(3, 0, 3), b in arb_elem(3, 0, 3)) {
        prop_assert_eq!(shuffle(&a, &b).unwrap(), shuffle(&b, &a).unwrap());
    }

    #[test]
    fn shuffle_is_associative(
        a in arb_elem(2, 0, 2),
        b in arb_elem(2, 0, 2),
        c in arb_elem(2, 0, 2),
    ) {
        let left = shuffle(&shuffle(&a, &b).unwrap(), &c).unwrap();
        let right = shuffle(&a, &shuffle(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn shuffle_splits_into_half_shuffles(a in arb_elem(3, 1, 3), b in arb_elem(3, 1, 3)) {
        let split = &half_shuffle(&a, &b).unwrap() + &half_shuffle(&b, &a).unwrap();
        prop_assert_eq!(shuffle(&a, &b).unwrap(), split);
    }

    #[test]
    fn products_are_graded(
        la in prop::collection::vec(1usize..=3, 0..4),
        lb in prop::collection::vec(1usize..=3, 1..4),
    ) {
        let (n, m) = (la.len(), lb.len());
        let a = TensorElem::from_word(Word::new(3, la).unwrap());
        let b = TensorElem::from_word(Word::new(3, lb).unwrap());
        for product in [shuffle(&a, &b).unwrap(), half_shuffle(&a, &b).unwrap()] {
            for (w, c) in product.terms() {
                prop_assert_eq!(w.len(), n + m);
                prop_assert!(c > &Rational::from_integer(0.into()));
            }
        }
    }

    #[test]
    fn text_round_trip(a in arb_elem(12, 0, 3)) {
        prop_assert_eq!(TensorElem::parse(&a.to_string(), 12).unwrap(), a);
    }
}
