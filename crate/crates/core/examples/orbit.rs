//! Bidirectional search for a braid word between two Gram matrices.

use slk::classify::{is_equivalent, Equivalence};
use slk::lattice::GramMatrix;
use slk::mutation::{orbit_bfs, OrbitSearch};

fn main() -> slk::Result<()> {
    let m1 = GramMatrix::from_upper_i64(4, &[2, 3, 5, 1, 3, 2])?;
    let k1 = GramMatrix::from_upper_i64(4, &[1, 2, 1, 3, 3, 3])?;
    match orbit_bfs(&m1, &k1, 1000, 1_000_000)? {
        OrbitSearch::Found(w) => println!("found {w} ({} letters)", w.len()),
        OrbitSearch::NotFound { explored } => println!("nothing within {explored} states"),
    }
    let quadric = GramMatrix::from_upper_i64(4, &[2, 2, 4, 0, 2, 2])?;
    let k2 = GramMatrix::from_upper_i64(4, &[2, 4, 2, 3, 3, 3])?;
    match is_equivalent(&quadric, &k2, 100_000)? {
        Equivalence::No(reason) => println!("quadric vs K_2: inequivalent ({reason})"),
        other => println!("quadric vs K_2: {other:?}"),
    }
    Ok(())
}
