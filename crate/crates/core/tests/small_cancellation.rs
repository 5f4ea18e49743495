use homfill_core::library::{complex_k, complex_ka, complex_l, group_a, group_q};
use homfill_core::oracle::EqualityOracle;
use homfill_core::small_cancellation::{c_prime_check, Ratio};
use homfill_core::word::Word;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn group_a_pieces() {
    let r = c_prime_check(&group_a(), Ratio::new(1, 6).unwrap());
    assert_eq!(r.max_piece, 20);
    assert_eq!(r.relator_lengths, vec![145, 121]);
    assert!(r.verdict);
    // The longest piece is a¹⁰b¹⁰ up to inversion and letter choice.
    assert_eq!(r.longest_piece.len(), 20);
}

#[test]
fn dehn_oracle_on_a() {
    let a = group_a();
    let o = EqualityOracle::dehn_c16(&a).unwrap();
    for r in a.relators() {
        assert!(o.is_trivial(r).unwrap());
        assert!(o.is_trivial(&r.inverse()).unwrap());
    }
    for n in 1..=20 {
        assert!(!o.is_trivial(&Word::new(vec![2; n])).unwrap(), "b^{n}");
        assert!(!o.is_trivial(&Word::new(vec![1; n])).unwrap(), "a^{n}");
    }
}

#[test]
fn random_relator_products_reduce_with_valid_traces() {
    let a = group_a();
    let o = EqualityOracle::dehn_c16(&a).unwrap();
    let d = o.dehn_reducer().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let mut w = Word::empty();
        for _ in 0..rng.gen_range(1..=3) {
            let len = rng.gen_range(0..6);
            let conj = Word::new((0..len).map(|_| [1, -1, 2, -2][rng.gen_range(0..4)]).collect());
            let r = &a.relators()[rng.gen_range(0..2)];
            let r = if rng.gen_bool(0.5) { r.clone() } else { r.inverse() };
            w = w.concat(&conj).concat(&r).concat(&conj.inverse());
        }
        let (red, trace) = d.reduce(&w);
        assert!(red.is_empty());
        assert!(d.replay(&w, &trace).unwrap().is_empty());
    }
}

#[test]
fn ka_is_acyclic() {
    let h = complex_ka().homology();
    assert!(h.is_acyclic());
    assert_eq!(complex_ka().euler_characteristic(), 1);
    for m in 1..=5 {
        let q = group_q(m).presentation_complex().homology();
        assert!(q.is_acyclic(), "Q({m})");
    }
}

#[test]
fn k_and_l_are_flag_without_cut_points() {
    let k = complex_k().unwrap();
    assert!(k.is_flag() && k.is_connected() && k.no_local_cut_points());
    assert_eq!(k.euler_characteristic(), 1);
    let l = complex_l().unwrap();
    assert!(l.is_flag() && l.is_connected() && l.no_local_cut_points());
    assert_eq!(l.euler_characteristic(), 1);
}
