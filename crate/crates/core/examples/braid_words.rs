//! Mutations of exceptional bases by braid words.

use slk::lattice::GramMatrix;
use slk::mutation::{apply_word, rho_word, BasedLattice, BraidWord};

fn main() -> slk::Result<()> {
    let g = GramMatrix::from_upper_i64(4, &[2, 1, 5, 0, 4, 2])?;
    // tokens apply left to right
    let w: BraidWord = "s2 s1 S2 s1 e4".parse()?;
    println!("{}\n  --[{w}]-->\n{}", g, apply_word(&g, &w)?);
    println!("same word in composition order: {}", w.to_display_order());

    let rho = rho_word(4);
    println!("rho = {rho}; rho^4 on the gram: {}", apply_word(&g, &rho.then(&rho).then(&rho).then(&rho))? == g);

    // extended index: sigma_4 acts through the rotation
    let based = BasedLattice::from_gram(&g);
    let moved = based.apply_word(&"s4 S4".parse()?)?;
    println!("s4 S4 returns the basis: {}", moved.basis() == based.basis());
    let helix = based.helix();
    for k in -2..6 {
        println!("  E_{k} = {}", helix.element(k));
    }
    Ok(())
}
