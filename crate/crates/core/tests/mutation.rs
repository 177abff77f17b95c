mod common;

use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

use slk::blowup::build_kn;
use slk::classify::{p2_gram, quadric_gram};
use slk::lattice::{Element, GramMatrix};
use slk::linalg::Integer;
use slk::mutation::{
    apply_gen, apply_word, eps, orbit_bfs, rho, rho_word, sigma, sigma_inv, BasedLattice, BraidGen, BraidWord,
    OrbitSearch,
};

use common::{random_surface_star, random_word, rng};

fn gram4(u: [i64; 6]) -> GramMatrix {
    GramMatrix::from_upper_i64(4, &u).unwrap()
}

#[test]
fn sigma_then_inverse_on_quadric() {
    let q = quadric_gram();
    assert_eq!(sigma_inv(&sigma(&q, 1).unwrap(), 1).unwrap(), q);
}

#[test]
fn single_display() {
    let w = BraidWord::from_display_order("e4 s1 S2 s1 s2").unwrap();
    assert_eq!(w.to_string(), "s2 s1 S2 s1 e4");
    assert_eq!(apply_word(&gram4([2, 1, 5, 0, 4, 2]), &w).unwrap(), gram4([2, 4, 2, 3, 3, 3]));
}

#[test]
fn m1_display() {
    let w = BraidWord::from_display_order("e2 e4 S1 s3 s2").unwrap();
    assert_eq!(apply_word(&gram4([2, 3, 5, 1, 3, 2]), &w).unwrap(), gram4([1, 2, 1, 3, 3, 3]));
}

#[test]
fn family_242_recursion() {
    let m = |t: i64| gram4([2, 2 + t, 4 + t, t, 2 + t, 2]);
    let w: BraidWord = "s1 e1".parse().unwrap();
    for t in -5..=5 {
        assert_eq!(apply_word(&m(t), &w).unwrap(), m(t + 2));
    }
}

#[test]
fn sigma_on_orthogonal_pair_swaps() {
    let g = GramMatrix::from_upper_i64(3, &[0, 2, 5]).unwrap();
    let b = BasedLattice::from_gram(&g).mutate(BraidGen::sigma(1)).unwrap();
    assert_eq!(b.basis()[0], Element::basis(3, 1));
    assert_eq!(b.basis()[1], Element::basis(3, 0));
}

#[test]
fn sigma_one_on_plane() {
    let p = p2_gram();
    let out = sigma(&p, 1).unwrap();
    assert_eq!(out, GramMatrix::from_upper_i64(3, &[-3, -6, 3]).unwrap());
    assert_eq!(BasedLattice::from_gram(&p).mutate(BraidGen::sigma(1)).unwrap().gram(), out);
}

#[test]
fn eps_is_involution() {
    let q = quadric_gram();
    assert_eq!(eps(&eps(&q, 2).unwrap(), 2).unwrap(), q);
    assert!(eps(&q, 5).is_err());
    assert!(eps(&q, 0).is_err());
}

#[test]
fn rotation() {
    let g = random_surface_star(&mut rng(7));
    let b = BasedLattice::from_gram(&g);
    let mut r = b.clone();
    for _ in 0..g.rank() {
        r = r.rotate();
    }
    let expected: Vec<Element> = b.basis().iter().map(|e| g.lattice().apply_serre(e).unwrap()).collect();
    assert_eq!(r.basis(), &expected[..]);
    assert_eq!(r.gram(), g);
    assert_eq!(b.rotate().gram(), rho(&g));
    assert_eq!(rho(&g), apply_word(&g, &rho_word(g.rank())).unwrap());
    assert_eq!(rho_word(4).to_display_order(), "s1 s2 s3");

    let id = BasedLattice::from_gram(&GramMatrix::identity(4)).rotate();
    let shifted: Vec<Element> = [3, 0, 1, 2].iter().map(|&i| Element::basis(4, i)).collect();
    assert_eq!(id.basis(), &shifted[..]);
}

#[test]
fn extended_index_reduces_through_rotation() {
    let g = quadric_gram();
    let b = BasedLattice::from_gram(&g);
    let direct = b.mutate(BraidGen::sigma(4)).unwrap();
    let via = b.rotate().mutate(BraidGen::sigma(1)).unwrap().rotate_inv();
    assert_eq!(direct.basis(), via.basis());
    assert_eq!(b.mutate(BraidGen::sigma(5)).unwrap().basis(), b.mutate(BraidGen::sigma(1)).unwrap().basis());
    assert_eq!(apply_gen(&g, BraidGen::sigma(0)).unwrap(), apply_gen(&g, BraidGen::sigma(4)).unwrap());
}

#[test]
fn word_parsing() {
    let w: BraidWord = "s1 S2 e3 s-1".parse().unwrap();
    assert_eq!(w.len(), 4);
    assert_eq!(w.to_string(), "s1 S2 e3 s-1");
    assert_eq!(w.inverse().to_string(), "S-1 e3 s2 S1");
    assert!("x1".parse::<BraidWord>().is_err());
    assert!("s".parse::<BraidWord>().is_err());
    assert_eq!(apply_word(&p2_gram(), &BraidWord::new()).unwrap(), p2_gram());
}

#[test]
fn markov_number_examples() {
    let q = BasedLattice::from_gram(&quadric_gram());
    assert_eq!(q.markov_number().unwrap(), Integer::from(4));
    let k2 = BasedLattice::from_gram(&build_kn(&2.into()).unwrap());
    // ranks (0, 1, 2, 1)
    assert_eq!(k2.markov_number().unwrap(), Integer::from(4));
    assert!(BasedLattice::from_gram(&GramMatrix::identity(3)).markov_number().is_err());
}

#[test]
fn helix_is_periodic_up_to_serre() {
    let g = build_kn(&1.into()).unwrap();
    let h = BasedLattice::from_gram(&g).helix();
    for k in -4..4 {
        assert_eq!(g.lattice().apply_serre(&h.element(k + 4)).unwrap(), h.element(k));
        assert_eq!(h.thread(k).gram().rank(), 4);
    }
    assert_eq!(h.thread(1).basis(), BasedLattice::from_gram(&g).basis());
}

#[test]
fn orbit_search() {
    let src = gram4([2, 1, 5, 0, 4, 2]);
    let dst = gram4([2, 4, 2, 3, 3, 3]);
    let OrbitSearch::Found(w) = orbit_bfs(&src, &dst, 1000, 1_000_000).unwrap() else { panic!() };
    assert!(w.len() <= 5);
    assert_eq!(apply_word(&src, &w).unwrap(), dst);
    assert_eq!(orbit_bfs(&src, &src, 1000, 10).unwrap(), OrbitSearch::Found(BraidWord::new()));

    let k1 = build_kn(&1.into()).unwrap();
    assert!(matches!(orbit_bfs(&quadric_gram(), &k1, 100, 20_000).unwrap(), OrbitSearch::NotFound { .. }));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn braid_relations_on_grams(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_surface_star(&mut r);
        let n = g.rank() as i64;
        let s = |g: &GramMatrix, i: i64| sigma(g, i).unwrap();
        for i in 1..n - 1 {
            prop_assert_eq!(s(&s(&s(&g, i), i + 1), i), s(&s(&s(&g, i + 1), i), i + 1));
        }
        for i in 1..n {
            for j in i + 2..n {
                prop_assert_eq!(s(&s(&g, i), j), s(&s(&g, j), i));
            }
        }
    }

    #[test]
    fn generators_are_invertible(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_surface_star(&mut r);
        for gen in BraidGen::standard_set(g.rank()) {
            let once = apply_gen(&g, gen).unwrap();
            prop_assert_eq!(apply_gen(&once, gen.inverse()).unwrap(), g.clone());
        }
        let len = r.gen_range(1..=12);
        let w = random_word(&mut r, g.rank(), len);
        prop_assert_eq!(apply_word(&apply_word(&g, &w).unwrap(), &w.inverse()).unwrap(), g);
    }

    #[test]
    fn element_and_matrix_actions_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_surface_star(&mut r);
        let len = r.gen_range(1..=8);
        let w = random_word(&mut r, g.rank(), len);
        let b = BasedLattice::from_gram(&g).apply_word(&w).unwrap();
        prop_assert_eq!(b.gram(), apply_word(&g, &w).unwrap());
        let m = b.gram().matrix().clone();
        prop_assert!((0..g.rank()).all(|i| m[(i, i)] == Integer::from(1)));
        prop_assert!((0..g.rank()).all(|i| (0..i).all(|j| m[(i, j)].is_zero())));
    }

    #[test]
    fn invariants_preserved(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_surface_star(&mut r);
        let b = BasedLattice::from_gram(&g);
        let before = b.markov_number().unwrap();
        for gen in BraidGen::standard_set(g.rank()) {
            let h = apply_gen(&g, gen).unwrap();
            prop_assert_eq!(h.lattice().surface_type(), g.lattice().surface_type());
            prop_assert_eq!(h.lattice().degree().unwrap(), g.lattice().degree().unwrap());
            if matches!(gen.kind, slk::mutation::GenKind::Eps) {
                prop_assert_eq!(b.mutate(gen).unwrap().markov_number().unwrap(), before.clone());
            }
        }
    }
}
