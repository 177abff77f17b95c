//! Classifies every rank-4 solution with entries in [-3, 3].

use std::collections::BTreeMap;

use slk::classify::classify;
use slk::diophantine::{enumerate_rank4, Rank4Coeffs};
use slk::mutation::apply_word;

fn main() -> slk::Result<()> {
    let bound = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let mut hist: BTreeMap<String, usize> = BTreeMap::new();
    for t in enumerate_rank4(bound) {
        let g = Rank4Coeffs::from_i64(t).gram();
        let v = classify(&g)?;
        assert_eq!(apply_word(&g, &v.witness)?, v.canonical_gram);
        *hist.entry(format!("{} via {:?}", v.class.tag, v.route)).or_default() += 1;
    }
    for (k, n) in hist {
        println!("{n:6}  {k}");
    }
    Ok(())
}
