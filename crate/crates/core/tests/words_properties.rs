use gyrolab::instances::{Integers, MobiusDisk, MobiusPoint, TableGyro};
use gyrolab::words::{
    closure_generate, eval_word, r_set, sign_pattern, tree_count, word_membership_witness,
    BracketTree, Sign, WordSpec,
};
use gyrolab::Gyrogroup;
use proptest::prelude::*;

fn gyro8() -> TableGyro {
    TableGyro::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/gyro8.json")).unwrap()
}

fn word(n: usize, m: u64, signs: u64, leaves: &[usize]) -> WordSpec {
    WordSpec::new(
        sign_pattern(n, signs),
        leaves.to_vec(),
        BracketTree::unrank(n, m).unwrap(),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn unrank_then_rank_is_identity(n in 1usize..=14, seed in any::<u64>()) {
        let m = seed % tree_count(n);
        let t = BracketTree::unrank(n, m).unwrap();
        prop_assert_eq!(t.index(), m);
        prop_assert_eq!(t.leaf_count(), n);
        let again = BracketTree::from_shape(t.shape().clone()).unwrap();
        prop_assert_eq!(again.index(), m);
    }

    #[test]
    fn display_form_parses_back(
        n in 1usize..=7,
        seed in any::<u64>(),
        signs in any::<u64>(),
        leaves in prop::collection::vec(0usize..4, 7),
    ) {
        let w = word(n, seed % tree_count(n), signs % (1 << n), &leaves[..n]);
        let parsed: WordSpec = w.to_string().parse().unwrap();
        prop_assert_eq!(parsed, w);
    }

    #[test]
    fn integer_words_are_signed_sums(
        n in 1usize..=6,
        seed in any::<u64>(),
        signs in any::<u64>(),
        gens in prop::collection::vec(-50i64..50, 3),
        leaves in prop::collection::vec(0usize..3, 6),
    ) {
        let g = Integers::new();
        let w = word(n, seed % tree_count(n), signs % (1 << n), &leaves[..n]);
        let expected: i64 = w
            .signs
            .iter()
            .zip(&w.leaves)
            .map(|(s, &i)| if *s == Sign::Plus { gens[i] } else { -gens[i] })
            .sum();
        prop_assert_eq!(eval_word(&g, &w, &gens).unwrap(), expected);
    }

    #[test]
    fn gyr_preserves_mobius_modulus(
        a in (-0.7f64..0.7, -0.7f64..0.7),
        b in (-0.7f64..0.7, -0.7f64..0.7),
        c in (-0.7f64..0.7, -0.7f64..0.7),
    ) {
        let g = MobiusDisk::new();
        let [a, b, c] = [a, b, c].map(|(x, y)| MobiusPoint::from_parts(x, y).unwrap());
        let image = g.gyr(&a, &b, &c).unwrap();
        prop_assert!((image.modulus() - c.modulus()).abs() < 1e-14);
    }
}

#[test]
fn witness_words_evaluate_to_their_target() {
    let g = MobiusDisk::new();
    let s = [
        MobiusPoint::from_parts(0.5, 0.0).unwrap(),
        MobiusPoint::from_parts(0.0, 0.5).unwrap(),
    ];
    let closure = closure_generate(&g, &s, 4, 1e-12).unwrap();
    for (i, target) in closure.elements.iter().enumerate().step_by(7) {
        let w = word_membership_witness(&g, target, &s, 4, 1e-9)
            .unwrap()
            .unwrap_or_else(|| panic!("element {i} has no witness"));
        assert!(w.len() <= closure.word_length[i].max(2));
        assert!(g.distance(&eval_word(&g, &w, &s).unwrap(), target) <= 1e-9);
    }
}

#[test]
fn integer_closure_is_an_interval_for_coprime_generators() {
    let g = Integers::new();
    let closure = closure_generate(&g, &[2, 3], 4, 0.0).unwrap();
    for k in -12..=12 {
        assert!(closure.contains(&g, &k, 0.0), "{k} missing");
    }
    assert!(!closure.contains(&g, &13, 0.0));
}

#[test]
fn proper_gyrogroup_has_disagreeing_bracketings() {
    let t = gyro8();
    let n = t.order();
    let plus = [Sign::Plus; 3];
    let mut found = None;
    'outer: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if r_set(&t, &plus, &[a, b, c], 0.0).unwrap().len() > 1 {
                    found = Some((a, b, c));
                    break 'outer;
                }
            }
        }
    }
    let (a, b, c) = found.expect("gyro8 is not associative");
    assert_ne!(t.op(t.op(a, b), c), t.op(a, t.op(b, c)));
}

#[test]
fn table_closure_reaches_the_whole_carrier() {
    let t = gyro8();
    let single = closure_generate(&t, &[1], 1, 0.0).unwrap();
    assert!(single.len() <= t.order() && single.elements[0] == 0);
    let all = closure_generate(&t, &(1..t.order()).collect::<Vec<_>>(), 1, 0.0).unwrap();
    assert_eq!(all.len(), t.order());
    assert!(!all.truncated);
}

#[test]
fn longer_word_caps_only_add_elements() {
    let g = MobiusDisk::new();
    let s = [
        MobiusPoint::from_parts(0.3, 0.1).unwrap(),
        MobiusPoint::from_parts(-0.2, 0.4).unwrap(),
    ];
    let mut previous = closure_generate(&g, &s, 1, 1e-12).unwrap();
    for cap in 2..=4 {
        let next = closure_generate(&g, &s, cap, 1e-12).unwrap();
        assert!(next.len() > previous.len());
        for e in &previous.elements {
            assert!(next.contains(&g, e, 1e-12), "cap {cap} lost an element");
        }
        previous = next;
    }
}
