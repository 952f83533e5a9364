use proptest::prelude::*;

use palnil::autos::central::decompose_central;
use palnil::autos::palindromic::{elementary_witnesses, parity_criterion};
use palnil::autos::tame::tameness_necessary;
use palnil::autos::{compose_symbols, inverse, Endo, GeneratorSymbol};
use palnil::{embed, fox_derivative, Letter, NilElement, NilpotentGroup, Word};

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=rank, any::<bool>()), 0..=max_len).prop_map(move |ls| {
        Word::reduce(rank, ls.into_iter().map(|(i, s)| Letter::new(i, if s { 1 } else { -1 }))).unwrap()
    })
}

fn rank_step() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=3, 1usize..=5)
}

fn central_symbol(n: usize) -> impl Strategy<Value = GeneratorSymbol> {
    (1..=n, 1..n, 1..=n, 1..=n, any::<bool>(), -2i64..=2).prop_map(|(a, b, c, i, two, m)| {
        let b = if b >= a { b + 1 } else { b };
        let s = if two { GeneratorSymbol::phi2(a, b, i) } else { GeneratorSymbol::phi3(a, b, c, i) };
        s.pow(if m == 0 { 1 } else { m })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reverse_involution(w in word(3, 20)) {
        prop_assert_eq!(w.reverse().reverse(), w);
    }

    #[test]
    fn reverse_anti(u in word(3, 12), v in word(3, 12)) {
        let uv = u.concat(&v).unwrap();
        prop_assert_eq!(uv.reverse(), v.reverse().concat(&u.reverse()).unwrap());
    }

    #[test]
    fn inverse_laws(w in word(3, 20)) {
        prop_assert_eq!(w.inverse().inverse(), w.clone());
        prop_assert!(w.concat(&w.inverse()).unwrap().is_empty());
    }

    #[test]
    fn render_round_trip(w in word(4, 20)) {
        prop_assert_eq!(Word::parse(&w.to_string(), 4).unwrap(), w);
    }

    #[test]
    fn collect_is_homomorphism((n, k) in rank_step(), seed in any::<u64>()) {
        let g = NilpotentGroup::shared(n, k).unwrap();
        let mut r = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let u = palnil::verify::random_word(&mut r, n, 12);
        let v = palnil::verify::random_word(&mut r, n, 12);
        let uv = g.collect(&u.concat(&v).unwrap()).unwrap();
        prop_assert_eq!(uv, &g.collect(&u).unwrap() * &g.collect(&v).unwrap());
    }

    #[test]
    fn normal_form_round_trips(k in 1usize..=5, w in word(3, 16)) {
        let g = NilpotentGroup::shared(3, k).unwrap();
        let x = g.collect(&w).unwrap();
        prop_assert_eq!(g.parse(&x.to_string()).unwrap(), x.clone());
        prop_assert_eq!(g.collect(&x.to_word().unwrap()).unwrap(), x);
    }

    #[test]
    fn bar_is_reversal(k in 1usize..=5, w in word(2, 16)) {
        let g = NilpotentGroup::shared(2, k).unwrap();
        let x = g.collect(&w).unwrap();
        prop_assert_eq!(x.bar(), g.collect(&w.reverse()).unwrap());
        prop_assert_eq!(x.bar().bar(), x);
    }

    #[test]
    fn bar_anti_homomorphism(u in word(3, 10), v in word(3, 10)) {
        let g = NilpotentGroup::shared(3, 4).unwrap();
        let (a, b) = (g.collect(&u).unwrap(), g.collect(&v).unwrap());
        prop_assert_eq!((&a * &b).bar(), &b.bar() * &a.bar());
    }

    #[test]
    fn multilinearity(es in prop::collection::vec(-2i64..=2, 3), idx in prop::collection::vec(1usize..=3, 3)) {
        let g = NilpotentGroup::shared(3, 3).unwrap();
        let zs: Vec<NilElement> = idx.iter().zip(&es).map(|(&i, &e)| g.generator(i).pow(e)).collect();
        let plain: Vec<NilElement> = idx.iter().map(|&i| g.generator(i)).collect();
        let lhs = NilElement::left_normed(&zs).unwrap();
        let rhs = NilElement::left_normed(&plain).unwrap().pow(es.iter().product::<i64>());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn weight_matches_layers(w in word(2, 16)) {
        let g = NilpotentGroup::shared(2, 4).unwrap();
        let x = g.collect(&w).unwrap();
        let first = (1..=4).find(|&l| x.layer(l).iter().any(|c| *c != 0.into())).unwrap_or(5);
        prop_assert_eq!(x.weight(), first);
    }

    #[test]
    fn embed_multiplicative(u in word(3, 10), v in word(3, 10)) {
        let uv = u.concat(&v).unwrap();
        prop_assert_eq!(embed(&uv), &embed(&u) * &embed(&v));
    }

    #[test]
    fn fox_product_rule(u in word(3, 10), v in word(3, 10), j in 1usize..=3) {
        let uv = u.concat(&v).unwrap();
        let rhs = &fox_derivative(&u, j).unwrap() + &(&embed(&u) * &fox_derivative(&v, j).unwrap());
        prop_assert_eq!(fox_derivative(&uv, j).unwrap(), rhs);
    }

    #[test]
    fn fox_of_commutators(u in word(3, 8), v in word(3, 8), t in word(3, 4), j in 1usize..=3) {
        let c = u.commutator(&v).unwrap();
        prop_assert_eq!(fox_derivative(&c, j).unwrap().constant().clone(), 0.into());
        let d = fox_derivative(&c.commutator(&t).unwrap(), j).unwrap();
        prop_assert_eq!(d.constant().clone(), 0.into());
        for i in 1..=3 {
            prop_assert_eq!(d.linear(i).clone(), 0.into());
        }
    }

    #[test]
    fn ring_commutative_associative(a in word(3, 8), b in word(3, 8), c in word(3, 8)) {
        let (x, y, z) = (embed(&a), embed(&b), embed(&c));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
    }

    #[test]
    fn fox_ignores_cancelling_pairs(w in word(3, 12), at in 0usize..=12, i in 1usize..=3, j in 1usize..=3) {
        let mut letters = w.letters().to_vec();
        let at = at.min(letters.len());
        letters.insert(at, Letter::gen(i));
        letters.insert(at + 1, Letter::inv(i));
        let raw = Word::reduce(3, letters).unwrap();
        prop_assert_eq!(fox_derivative(&raw, j).unwrap(), fox_derivative(&w, j).unwrap());
    }

    #[test]
    fn lemma41(w in word(3, 12)) {
        let g = NilpotentGroup::shared(3, 2).unwrap();
        let x = g.generator(1);
        let a = g.collect(&w).unwrap();
        let t = &(&(&a * &x) * &a.bar()) * &x.inv();
        if t.is_identity() {
            prop_assert!(a.abelianization().iter().all(|c| *c == 0.into()));
        }
    }

    #[test]
    fn palindromic_parity(ws in prop::collection::vec(word(3, 8), 3), k in 1usize..=3) {
        let g = NilpotentGroup::shared(3, k).unwrap();
        let q: Vec<NilElement> = ws.iter().map(|w| g.collect(w).unwrap()).collect();
        let e = Endo::palindromic(&g, &q).unwrap();
        prop_assert!(parity_criterion(&e));
        prop_assert!(elementary_witnesses(&e).unwrap().is_some());
    }

    #[test]
    fn inverse_round_trip(syms in prop::collection::vec(central_symbol(3), 1..4)) {
        let g = NilpotentGroup::shared(3, 3).unwrap();
        let e = compose_symbols(&syms, &g).unwrap();
        let inv = inverse(&e).unwrap().inverse;
        prop_assert!(e.compose(&inv).unwrap().is_identity());
    }

    #[test]
    fn central_round_trip(syms in prop::collection::vec(central_symbol(3), 1..5)) {
        let g = NilpotentGroup::shared(3, 3).unwrap();
        let e = compose_symbols(&syms, &g).unwrap();
        let d = decompose_central(&e).unwrap();
        prop_assert!(d.residual_trivial);
        prop_assert_eq!(compose_symbols(&d.factors, &g).unwrap(), e);
    }

    #[test]
    fn tameness_lift_independent(syms in prop::collection::vec(central_symbol(3), 1..4)) {
        // tameness_necessary itself compares two different lifts.
        let g = NilpotentGroup::shared(3, 3).unwrap();
        prop_assert!(tameness_necessary(&compose_symbols(&syms, &g).unwrap()).is_ok());
    }
}
