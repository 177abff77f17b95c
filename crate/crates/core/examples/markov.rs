//! Rank-3 solutions: enumeration and reduction to (3, 3, 3).

use slk::diophantine::{markov_reduce, markov_solutions, Rank3Coeffs};

fn main() -> slk::Result<()> {
    let sols = markov_solutions(200);
    println!("{} solutions with |entries| <= 200", sols.len());
    for &(a, b, c) in sols.iter().filter(|&&(a, b, c)| a > 0 && a <= b && b <= c) {
        let (canon, w) = markov_reduce(&Rank3Coeffs::new(a, b, c))?;
        println!("({a}, {b}, {c}) -> {canon} by {w}");
    }
    Ok(())
}
