#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slk::blowup::build_kn;
use slk::classify::{p2_gram, quadric_gram};
use slk::lattice::{Element, GramMatrix};
use slk::mutation::{apply_word, BraidGen, BraidWord};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_word(rng: &mut (impl Rng + ?Sized), n: usize, len: usize) -> BraidWord {
    let gens = BraidGen::standard_set(n);
    (0..len).map(|_| *gens.choose(rng).expect("nonempty")).collect()
}

/// A surface* exceptional Gram matrix: a canonical representative moved by a
/// short random word. `K_3` is left out since `(s - 1)^2 = 0` there.
pub fn random_surface_star(rng: &mut (impl Rng + ?Sized)) -> GramMatrix {
    let base = match rng.gen_range(0..8usize) {
        0 => p2_gram(),
        1 => quadric_gram(),
        k => build_kn(&[0, 1, 2, 4, 5, 6][k - 2].into()).expect("n >= 0"),
    };
    let len = rng.gen_range(0..=6);
    let w = random_word(rng, base.rank(), len);
    apply_word(&base, &w).expect("valid word")
}

pub fn random_element(rng: &mut (impl Rng + ?Sized), n: usize, range: i64) -> Element {
    Element::from_i64(&(0..n).map(|_| rng.gen_range(-range..=range)).collect::<Vec<_>>())
}
