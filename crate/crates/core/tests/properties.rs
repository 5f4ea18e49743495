use homfill_core::cayley::{relative_cayley_complex, CayleyBall};
use homfill_core::cube::{normal_cube_path, CubeBall};
use homfill_core::filling::{harea, HareaOptions};
use homfill_core::flag::FlagComplex;
use homfill_core::leary::salvetti_two_skeleton;
use homfill_core::oracle::{raag_normal_form, EqualityOracle};
use homfill_core::word::commutator;
use homfill_core::{Letter, Presentation, Word};
use proptest::prelude::*;

fn letters(ngens: usize, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    let n = ngens as i32;
    proptest::collection::vec((1..=n, any::<bool>()), 0..=max_len)
        .prop_map(|v| v.into_iter().map(|(g, inv)| if inv { -g } else { g }).collect())
}

fn flag_on(n: usize, mask: &[bool]) -> FlagComplex {
    let pairs: Vec<Vec<usize>> = (0..n).flat_map(|a| (a + 1..n).map(move |b| vec![a, b])).collect();
    let chosen = pairs.into_iter().zip(mask).filter(|(_, &k)| k).map(|(p, _)| p).collect();
    FlagComplex::from_indices((0..n).map(|i| format!("x{i}")).collect(), chosen, true).unwrap()
}

fn commute_matrix(l: &FlagComplex) -> Vec<Vec<bool>> {
    let n = l.nvertices();
    let mut c = vec![vec![false; n]; n];
    for (u, v) in l.edges() {
        c[u][v] = true;
        c[v][u] = true;
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn free_reduction_is_idempotent(w in letters(3, 16)) {
        let r = Word::new(w).free_reduce();
        prop_assert!(r.is_freely_reduced());
        prop_assert_eq!(r.free_reduce(), r.clone());
        prop_assert!(r.concat(&r.inverse()).free_reduce().is_empty());
    }

    #[test]
    fn presentation_complex_euler(rels in proptest::collection::vec(letters(3, 6), 0..4)) {
        let rels: Vec<Word> = rels.into_iter().map(|r| Word::new(r).cyclic_reduce()).filter(|r| !r.is_empty()).collect();
        let p = Presentation::new(vec!["a".into(), "b".into(), "c".into()], rels.clone()).unwrap();
        let x = p.presentation_complex();
        let h = x.homology();
        prop_assert_eq!(h.betti[0], 1);
        prop_assert_eq!(h.euler_characteristic(), x.euler_characteristic());
        prop_assert_eq!(x.euler_characteristic(), 1 - 3 + rels.len() as i64);
    }

    #[test]
    fn raag_normal_form_is_invariant(mask in proptest::collection::vec(any::<bool>(), 6), w in letters(4, 10), k in 0usize..10) {
        let l = flag_on(4, &mask);
        let c = commute_matrix(&l);
        let w = Word::new(w);
        let nf = raag_normal_form(&c, &w);
        prop_assert_eq!(raag_normal_form(&c, &nf), nf.clone());
        prop_assert!(nf.len() <= w.free_reduce().len());
        prop_assert!(raag_normal_form(&c, &w.concat(&w.inverse())).is_empty());
        let mut v = w.letters().to_vec();
        if k + 1 < v.len() {
            let (x, y) = (v[k].unsigned_abs() as usize - 1, v[k + 1].unsigned_abs() as usize - 1);
            if c[x][y] {
                v.swap(k, k + 1);
                prop_assert_eq!(raag_normal_form(&c, &Word::new(v)), nf);
            }
        }
    }

    #[test]
    fn salvetti_euler(mask in proptest::collection::vec(any::<bool>(), 10)) {
        let l = flag_on(5, &mask);
        let s = salvetti_two_skeleton(&l).unwrap();
        prop_assert_eq!(s.complex.euler_characteristic(), 1 - 5 + l.edges().len() as i64);
        prop_assert_eq!(s.complex.homology().betti[1], 5);
    }

    #[test]
    fn cube_ball_invariants(mask in proptest::collection::vec(any::<bool>(), 6)) {
        let l = flag_on(4, &mask);
        let b = CubeBall::build(&l, 2).unwrap();
        let f = b.f_vector();
        prop_assert_eq!(f[0], b.len());
        prop_assert_eq!(f[1], b.edges().len());
        for c in b.cubes() {
            prop_assert_eq!(c.vertices.len(), 1 << c.dim());
            prop_assert!(l.contains(&c.gens) || c.dim() <= 1);
        }
        prop_assert_eq!(b.two_skeleton().euler_characteristic(), f[0] as i64 - f[1] as i64 + f.get(2).copied().unwrap_or(0) as i64);
    }

    #[test]
    fn normal_paths_are_geodesic(mask in proptest::collection::vec(any::<bool>(), 6), w in letters(4, 2)) {
        let l = flag_on(4, &mask);
        let b = CubeBall::build(&l, 2 + b_dim(&l)).unwrap();
        let target = *b.walk(0, &Word::new(w)).unwrap().last().unwrap();
        let d = b.distance(0, target);
        let p = normal_cube_path(&b, 0, target).unwrap();
        prop_assert!(p.normal);
        prop_assert_eq!(p.dim_sum(), d);
        let g = p.carried_geodesic();
        prop_assert_eq!(b.walk(0, &g).unwrap().last().copied(), Some(target));
    }

    #[test]
    fn free_abelian_commutator_area(n in 1usize..4) {
        let p = Presentation::new(vec!["a".into(), "b".into()], vec![Word::new(vec![1, 2, -1, -2])]).unwrap();
        let o = EqualityOracle::free_abelian(2);
        let ball = CayleyBall::build(&p, &o, 2 * n + 1).unwrap();
        let x = relative_cayley_complex(&ball, p.relators()).unwrap().complex;
        let a = Word::new(vec![1; n]);
        let bw = Word::new(vec![2; n]);
        let c = n.div_ceil(2);
        let base = ball.trace(0, &Word::new([vec![1; c], vec![2; c]].concat())).unwrap()[2 * c];
        let loop_w = commutator(&a, &bw).inverse();
        let gamma = ball.walk_chain(base, &loop_w).unwrap();
        let cert = harea(&x, &gamma, &HareaOptions::default()).unwrap();
        prop_assert_eq!(cert.cost, (n * n) as u64);
    }
}

fn b_dim(l: &FlagComplex) -> usize {
    l.dimension().unwrap_or(0) + 1
}
