mod common;

use std::sync::Arc;

use primelink::linking::{build_globalization, check_link_type_vanishing, linking_invariant, massey_coordinates_with, Assignment, LinkPresentation};
use primelink::magnus::{eps, magnus_eval, magnus_matrix, Generator, GroupWord, TruncatedSeries};
use primelink::unitriangular::{fiber_decompose, fiber_glue, ConvexShape, PartialMatrix};
use primelink::ResidueRing;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{magnus_oracle, to_dense};

fn ring_strategy() -> impl Strategy<Value = ResidueRing> {
    prop::sample::select(vec![2u64, 3, 4, 8, 9, 25]).prop_map(|q| ResidueRing::new(q).unwrap())
}

fn word_strategy(letters: usize) -> impl Strategy<Value = GroupWord> {
    prop::collection::vec((1..=letters, -3i64..=3), 0..8)
        .prop_map(|syl| GroupWord::from_syllables(syl.into_iter().map(|(k, e)| (Generator::tau(k), e))))
}

/// (ring, n, three random elements of U_n)
fn triple() -> impl Strategy<Value = (usize, [PartialMatrix; 3])> {
    (ring_strategy(), 1usize..=4, any::<u64>()).prop_map(|(ring, n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = Arc::new(ConvexShape::full(n));
        (n, [(); 3].map(|_| PartialMatrix::random(ring, shape.clone(), &mut rng)))
    })
}

/// An element of U_n with n >= 2 and two windows covering it.
fn windows() -> impl Strategy<Value = (usize, [PartialMatrix; 3], usize, usize)> {
    triple().prop_filter("n >= 2", |(n, _)| *n >= 2).prop_flat_map(|(n, m)| {
        (Just(n), Just(m), 1..n).prop_flat_map(move |(n, m, m1)| (Just(n), Just(m.clone()), Just(m1), (n - m1).max(1)..n))
    })
}

fn slots(n: usize, q: u64) -> LinkPresentation {
    let mut text = format!("params n={n} q={q}\n");
    for l in 1..=n {
        text.push_str(&format!("slot {l} tau=t{l}\n"));
    }
    LinkPresentation::parse(&text).unwrap()
}

proptest! {
    #[test]
    fn group_axioms((_, [a, b, c]) in triple()) {
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert!(a.mul(&a.inverse()).unwrap().is_identity());
        prop_assert!(a.inverse().mul(&a).unwrap().is_identity());
        prop_assert_eq!(a.pow(3).mul(&a.pow(-5)).unwrap(), a.pow(-2));
    }

    #[test]
    fn projections_are_homomorphisms((n, [a, b, _]) in triple()) {
        let ab = a.mul(&b).unwrap();
        for m in 1..n {
            prop_assert_eq!(ab.upper_left(m).unwrap(), a.upper_left(m).unwrap().mul(&b.upper_left(m).unwrap()).unwrap());
            prop_assert_eq!(ab.lower_right(m).unwrap(), a.lower_right(m).unwrap().mul(&b.lower_right(m).unwrap()).unwrap());
        }
        for r in 1..=n {
            let s = Arc::new(ConvexShape::filtration(n, r));
            prop_assert_eq!(ab.project(&s).unwrap(), a.project(&s).unwrap().mul(&b.project(&s).unwrap()).unwrap());
        }
    }

    #[test]
    fn center_commutes((n, [a, b, _]) in triple(), c in 0u64..64) {
        let v = PartialMatrix::elementary(a.ring(), a.shape().clone(), 1, n + 1, c).unwrap();
        prop_assert_eq!(v.mul(&a).unwrap(), a.mul(&v).unwrap());
        // commutators push the filtration depth up
        let comm = PartialMatrix::commutator(&a, &b).unwrap();
        prop_assert!(comm.filtration_depth() >= 2);
    }

    #[test]
    fn fiber_round_trip((n, [a, _, _], m1, m2) in windows()) {
        let (x, y) = fiber_decompose(&a, m1, m2).unwrap();
        let glued = fiber_glue(&x, &y, n).unwrap();
        prop_assert_eq!(glued.upper_left(m1).unwrap(), x);
        prop_assert_eq!(glued.lower_right(m2).unwrap(), y);
        // the two preimages differ by a matrix supported outside both windows
        let diff = glued.inverse().mul(&a).unwrap();
        prop_assert!(diff.upper_left(m1).unwrap().is_identity() && diff.lower_right(m2).unwrap().is_identity());
    }

    #[test]
    fn text_form_round_trips((_, [a, _, _]) in triple()) {
        prop_assert_eq!(PartialMatrix::from_text(&a.to_text().unwrap()).unwrap(), a);
    }

    #[test]
    fn words_display_and_parse(w in word_strategy(4)) {
        prop_assert_eq!(GroupWord::parse(&w.to_string()).unwrap(), w.clone());
        prop_assert!(w.mul(&w.inverse()).is_empty());
    }

    #[test]
    fn magnus_is_multiplicative(ring in ring_strategy(), w1 in word_strategy(3), w2 in word_strategy(3), d in 0usize..4) {
        let lhs = magnus_eval(&w1.mul(&w2), d, ring);
        prop_assert_eq!(lhs, magnus_eval(&w1, d, ring).mul(&magnus_eval(&w2, d, ring)).unwrap());
        prop_assert_eq!(magnus_eval(&w1.inverse(), d, ring), magnus_eval(&w1, d, ring).inverse_unit().unwrap());
    }

    #[test]
    fn magnus_matrix_matches_oracle(ring in ring_strategy(), w in word_strategy(4), idx in prop::collection::vec(1usize..=4, 1..=4)) {
        let index: Vec<Generator> = idx.into_iter().map(Generator::tau).collect();
        let m = magnus_matrix(&w, &index, ring).unwrap();
        prop_assert_eq!(to_dense(&m), magnus_oracle(&w, &index, ring.modulus()));
        prop_assert_eq!(m.entry(1, index.len() + 1), eps(&w, &index, ring));
    }

    #[test]
    fn series_ring_laws(ring in ring_strategy(), w1 in word_strategy(2), w2 in word_strategy(2), w3 in word_strategy(2)) {
        let [a, b, c] = [&w1, &w2, &w3].map(|w| magnus_eval(w, 3, ring));
        let one = TruncatedSeries::one(ring, 3);
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&one).unwrap(), a.clone());
        prop_assert_eq!(a.sub(&a).unwrap(), TruncatedSeries::zero(ring, 3));
    }

    #[test]
    fn evaluation_is_a_homomorphism(n in 1usize..=3, q in prop::sample::select(vec![2u64, 4]), w1 in word_strategy(3), w2 in word_strategy(3)) {
        let w1 = w1.substitute(|g| (g.as_str()[1..].parse::<usize>().unwrap() > n).then(GroupWord::empty));
        let w2 = w2.substitute(|g| (g.as_str()[1..].parse::<usize>().unwrap() > n).then(GroupWord::empty));
        let a = Assignment::normalized(&slots(n, q));
        prop_assert_eq!(a.eval_word(&w1.mul(&w2)).unwrap(), a.eval_word(&w1).unwrap().mul(&a.eval_word(&w2).unwrap()).unwrap());
    }

    #[test]
    fn linking_invariant_agrees_with_eps(n in 1usize..=3, q in prop::sample::select(vec![2u64, 4, 8]), w in word_strategy(3)) {
        let w = w.substitute(|g| (g.as_str()[1..].parse::<usize>().unwrap() > n).then(GroupWord::empty));
        let g = build_globalization(&slots(n, q)).globalization().unwrap();
        let index: Vec<Generator> = (1..=n).map(Generator::tau).collect();
        let ring = ResidueRing::new(q).unwrap();
        match linking_invariant(&g, &w) {
            Ok(v) => prop_assert_eq!(v, eps(&w, &index, ring)),
            Err(_) => prop_assert!(g.eval_word(&w).unwrap().filtration_depth() < n),
        }
    }

    #[test]
    fn corner_of_iterated_commutators_is_eps(n in 2usize..=3, q in prop::sample::select(vec![2u64, 4, 8]), ws in prop::collection::vec(word_strategy(3), 3)) {
        let ws: Vec<GroupWord> = ws.into_iter().map(|w| w.substitute(|g| (g.as_str()[1..].parse::<usize>().unwrap() > n).then(GroupWord::empty))).collect();
        let central = ws[1..n].iter().fold(ws[0].clone(), |acc, w| GroupWord::commutator(&acc, w));
        let g = build_globalization(&slots(n, q)).globalization().unwrap();
        let index: Vec<Generator> = (1..=n).map(Generator::tau).collect();
        prop_assert_eq!(linking_invariant(&g, &central).unwrap(), eps(&central, &index, ResidueRing::new(q).unwrap()));
    }

    #[test]
    fn vanishing_implies_globalization(c in 0i64..4, u in word_strategy(2), v in word_strategy(2)) {
        // every commutator is central in U_2
        let sigma = GroupWord::parse("[t1,t2]").unwrap().pow(c).mul(&GroupWord::commutator(&u, &v));
        let text = format!(
            "params n=2 q=2\nslot 1 tau=t1 sigma=s1\nslot 2 tau=t2\nsigma s1 = {sigma}\nrel linktype tau'=t2 alpha=1 tau=t1 sigma=s1\n"
        );
        let pres = LinkPresentation::parse(&text).unwrap();
        prop_assert!(check_link_type_vanishing(&pres).unwrap());
        prop_assert!(build_globalization(&pres).globalization().is_some());
    }

    #[test]
    fn massey_coordinates_are_additive(n in 2usize..=4, seed in any::<u64>()) {
        let pres = slots(n, 4);
        let g_bar = Assignment::normalized(&pres).project(&Arc::new(ConvexShape::filtration(n, n))).unwrap();
        let c = massey_coordinates_with(&g_bar, &pres, 16, seed).unwrap();
        prop_assert_eq!(c.samples_checked(), 16);
    }
}
