//! Classification of rank-3 and rank-4 exceptional Gram matrices with
//! unipotent Serre operator, up to the signed braid group action, together
//! with braid-word witnesses.
//!
//! Rank 3: the zero solution, or the plane `(3, 3, 3)`.
//! Rank 4: the identity, the quadric `(2, 2, 4, 0, 2, 2)`, or one of the
//! `K_n = (n, 2n, n, 3, 3, 3)`, `n ≥ 0`.

use std::fmt;

use num_integer::Integer as _;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::blowup::build_kn;
use crate::diophantine::{is_rank4_solution, markov_reduce, markov_value, Rank3Coeffs, Rank4Coeffs};
use crate::error::{Error, Result};
use crate::lattice::{GramMatrix, SurfaceStructure, SurfaceType};
use crate::linalg::{IntMatrix, Integer};
use crate::mutation::{apply_word, orbit_bfs, BasedLattice, BraidGen, BraidWord, OrbitSearch, DEFAULT_MAX_ENTRY};

/// Node budget for the search fallback inside [`classify_rank4`].
pub const FALLBACK_MAX_NODES: usize = 2_000_000;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ClassTag {
    /// The zero solution: the identity Gram matrix.
    Trivial,
    /// The rank-3 solution `(3, 3, 3)`.
    P2,
    Quadric,
    NumBlowup(Integer),
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassTag::Trivial => f.write_str("Trivial"),
            ClassTag::P2 => f.write_str("P2"),
            ClassTag::Quadric => f.write_str("Quadric"),
            ClassTag::NumBlowup(n) => write!(f, "NumBlowup({n})"),
        }
    }
}

/// A canonical class with its orbit invariants.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CanonicalClass {
    pub tag: ClassTag,
    pub delta: Integer,
    /// `s ≡ 1 mod 2`.
    pub s_parity: bool,
}

impl CanonicalClass {
    pub fn trivial() -> Self {
        Self { tag: ClassTag::Trivial, delta: Integer::zero(), s_parity: true }
    }

    pub fn p2() -> Self {
        Self { tag: ClassTag::P2, delta: 9.into(), s_parity: false }
    }

    pub fn quadric() -> Self {
        Self { tag: ClassTag::Quadric, delta: 8.into(), s_parity: true }
    }

    pub fn num_blowup(n: Integer) -> Self {
        let delta = Integer::from(9) - &n * &n;
        Self { tag: ClassTag::NumBlowup(n), delta, s_parity: false }
    }

    /// The fixed representative of the class.
    pub fn canonical_gram(&self, rank: usize) -> GramMatrix {
        match &self.tag {
            ClassTag::Trivial => GramMatrix::identity(rank),
            ClassTag::P2 => p2_gram(),
            ClassTag::Quadric => quadric_gram(),
            ClassTag::NumBlowup(n) => build_kn(n).expect("n is non-negative"),
        }
    }
}

impl fmt::Display for CanonicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (delta = {}, s = 1 mod 2: {})", self.tag, self.delta, self.s_parity)
    }
}

/// Which part of the algorithm produced the witness.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Route {
    Trivial,
    Markov,
    DegreeZero,
    Case1,
    Case2,
    Search,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub class: CanonicalClass,
    /// Maps the input Gram matrix to `canonical_gram`.
    pub witness: BraidWord,
    pub canonical_gram: GramMatrix,
    pub route: Route,
}

/// Why the identity Gram matrix forms its own class.
pub const TRIVIAL_NOTE: &str =
    "identity Gram matrix: every mutation only permutes and re-signs the basis, so its orbit contains no other matrix";

pub fn p2_gram() -> GramMatrix {
    GramMatrix::from_upper_i64(3, &[3, 3, 3]).expect("exceptional")
}

pub fn quadric_gram() -> GramMatrix {
    GramMatrix::from_upper_i64(4, &[2, 2, 4, 0, 2, 2]).expect("exceptional")
}

/// `s ≡ 1 mod 2`, i.e. every entry of `s - 1` is even.
pub fn s_parity(m: &GramMatrix) -> bool {
    let n = m.rank();
    let id = IntMatrix::identity(n);
    (m.serre() - &id).entries().all(|x| x.is_even())
}

/// Orbit invariants of a Gram matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Invariants {
    pub surface_type: SurfaceType,
    pub delta: Option<Integer>,
    pub s_parity: bool,
}

pub fn invariants(m: &GramMatrix) -> Invariants {
    let l = m.lattice();
    Invariants { surface_type: l.surface_type(), delta: l.degree().ok(), s_parity: s_parity(m) }
}

pub fn classify_rank3(m: &GramMatrix) -> Result<Verdict> {
    let t = Rank3Coeffs::from_gram(m)?;
    if !markov_value(&t).is_zero() {
        return Err(Error::NotASolution(format!("{t} does not satisfy a^2+b^2+c^2=abc")));
    }
    let (canon, witness) = markov_reduce(&t)?;
    let (class, route) = if canon.is_zero() {
        (CanonicalClass::trivial(), Route::Trivial)
    } else {
        (CanonicalClass::p2(), Route::Markov)
    };
    let canonical_gram = class.canonical_gram(3);
    if apply_word(m, &witness)? != canonical_gram {
        return Err(Error::InternalInconsistency(format!("Markov witness for {t} does not verify")));
    }
    Ok(Verdict { class, witness, canonical_gram, route })
}

/// Shifts a rank-3 word to act on positions `2..=4` of a rank-4 basis.
fn shift_word(w: &BraidWord) -> BraidWord {
    w.gens().iter().map(|g| BraidGen { kind: g.kind, index: g.index + 1 }).collect()
}

/// A Gram matrix together with the word applied so far.
struct Walk {
    gram: GramMatrix,
    word: BraidWord,
}

impl Walk {
    fn new(m: &GramMatrix) -> Self {
        Self { gram: m.clone(), word: BraidWord::new() }
    }

    fn apply(&mut self, w: &BraidWord) -> Result<()> {
        self.gram = apply_word(&self.gram, w)?;
        self.word = self.word.then(w);
        Ok(())
    }

    fn apply_str(&mut self, w: &str) -> Result<()> {
        self.apply(&w.parse()?)
    }

    fn upper(&self) -> Vec<Integer> {
        self.gram.upper()
    }

    /// Markov-reduces the lower-right `(d, e, f)` block to `(3, 3, 3)`.
    fn reduce_block(&mut self) -> Result<()> {
        let u = self.upper();
        let t = Rank3Coeffs { a: u[3].clone(), b: u[4].clone(), c: u[5].clone() };
        let (_, w) = markov_reduce(&t)?;
        self.apply(&shift_word(&w))
    }
}

/// `(s - 1)^2 = 0`: reduce both Markov blocks and land on `K_3`.
fn degree_zero_route(m: &GramMatrix) -> Result<(CanonicalClass, BraidWord)> {
    let mut walk = Walk::new(m);
    walk.reduce_block()?;
    if walk.upper()[0].is_negative() {
        walk.apply_str("e1")?;
    }
    Ok((CanonicalClass::num_blowup(3.into()), walk.word))
}

/// Element-level state for the descent: basis in the coordinates of the
/// input lattice, with the structure element fixed once.
struct Descent {
    based: BasedLattice,
    st: SurfaceStructure,
    word: BraidWord,
}

impl Descent {
    fn ranks(&self) -> Vec<Integer> {
        self.based.basis().iter().map(|e| self.st.rank_of(e)).collect()
    }

    fn markov(&self) -> Integer {
        self.based.markov_number_with(&self.st)
    }

    fn apply(&mut self, w: &BraidWord) -> Result<()> {
        self.based = self.based.apply_word(w)?;
        self.word = self.word.then(w);
        Ok(())
    }

    fn normalize_signs(&mut self) -> Result<()> {
        let flips: BraidWord = self
            .ranks()
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_negative())
            .map(|(i, _)| BraidGen::eps(i as i64 + 1))
            .collect();
        self.apply(&flips)
    }

    /// One improving move: `ρ^k` followed by `σ_i` or `σ_i^{-1}`, scanning
    /// `k = 0..4`, `i = 1..4`, `σ` before `σ^{-1}`.
    fn improving_move(&self) -> Result<Option<BraidWord>> {
        let current = self.markov();
        let rho = crate::mutation::rho_word(4);
        let mut rotated = self.based.clone();
        let mut prefix = BraidWord::new();
        for _ in 0..4 {
            for i in 1..4 {
                for g in [BraidGen::sigma(i), BraidGen::sigma_inv(i)] {
                    if rotated.mutate(g)?.markov_number_with(&self.st) < current {
                        let mut w = prefix.clone();
                        w.push(g);
                        return Ok(Some(w));
                    }
                }
            }
            rotated = rotated.apply_word(&rho)?;
            prefix = prefix.then(&rho);
        }
        Ok(None)
    }
}

/// Surface* lattices: 𝓜-descent, then the two minimal cases.
fn surface_star_route(m: &GramMatrix) -> Result<(CanonicalClass, BraidWord, Route)> {
    let st = m.lattice().surface_structure()?;
    let mut d = Descent { based: BasedLattice::from_gram(m), st, word: BraidWord::new() };
    loop {
        d.normalize_signs()?;
        match d.improving_move()? {
            Some(w) => d.apply(&w)?,
            None => break,
        }
    }
    let ranks = d.ranks();
    let mut walk = Walk { gram: d.based.gram(), word: d.word };
    if let Some(i) = ranks.iter().position(Zero::is_zero) {
        // bring e_{i+1} to the front; ρ moves position n to 1
        let turns = (4 - i) % 4;
        for _ in 0..turns {
            walk.apply(&crate::mutation::rho_word(4))?;
        }
        walk.reduce_block()?;
        if walk.upper()[0].is_negative() {
            walk.apply_str("e1")?;
        }
        let n = walk.upper()[0].clone();
        return Ok((CanonicalClass::num_blowup(n), walk.word, Route::Case1));
    }
    for _ in 0..4 {
        let u = walk.upper();
        if u[0] == Integer::from(2) && u[5] == Integer::from(2) {
            let (class, w) = case2(&walk.gram)?;
            walk.apply(&w)?;
            return Ok((class, walk.word, Route::Case2));
        }
        walk.apply(&crate::mutation::rho_word(4))?;
    }
    Err(Error::InternalInconsistency(format!("descent stopped at {} matching neither case", walk.gram)))
}

/// Case 2: `⟨e_1, e_2⟩ = 2 = ⟨e_3, e_4⟩`.
fn case2(m: &GramMatrix) -> Result<(CanonicalClass, BraidWord)> {
    let mut walk = Walk::new(m);
    let u = walk.upper();
    if u[1] < u[3] {
        walk.apply_str("e1 e2")?;
    }
    let u = walk.upper();
    let t = u[3].clone();
    let shape = [&u[1] - &t, &u[2] - &t, &u[4] - &t].map(|x| x.to_i64());
    let t = t.to_i64().ok_or_else(|| Error::InternalInconsistency("Case 2 offset too large".into()))?;
    // (forward word M_t -> M_{t+step}, its inverse, step, finishing words)
    let (up, down, step) = match shape {
        [Some(2), Some(4), Some(2)] => ("s1 e1", "e1 S1", 2),
        [Some(1), Some(5), Some(4)] => ("s1 e1", "e1 S1", 1),
        [Some(4), Some(5), Some(1)] => ("e3 S3", "s3 e3", 1),
        _ => return Err(Error::InternalInconsistency(format!("unexpected Case 2 shape at {}", walk.gram))),
    };
    let target = if step == 2 { t.rem_euclid(2) } else { 0 };
    let moves = (target - t) / step;
    let w: BraidWord = if moves >= 0 { up } else { down }.parse()?;
    for _ in 0..moves.abs() {
        walk.apply(&w)?;
    }
    let (class, finish) = match (shape, target) {
        ([Some(2), _, _], 0) => (CanonicalClass::quadric(), ""),
        ([Some(2), _, _], _) => (CanonicalClass::num_blowup(1.into()), "s2 s3 S1 e4 e2"),
        ([Some(1), _, _], _) => (CanonicalClass::num_blowup(2.into()), "s2 s1 S2 s1 e4"),
        _ => (CanonicalClass::num_blowup(2.into()), "s2 S3 s2 s2 s1 e2 e1"),
    };
    walk.apply_str(finish)?;
    Ok((class, walk.word))
}

fn verify(m: &GramMatrix, class: CanonicalClass, witness: BraidWord, route: Route) -> Result<Verdict> {
    let canonical_gram = class.canonical_gram(m.rank());
    if apply_word(m, &witness)? != canonical_gram {
        return Err(Error::InternalInconsistency("witness does not reach the canonical matrix".into()));
    }
    let inv = invariants(m);
    let expected_delta = if class.tag == ClassTag::Trivial { Some(Integer::zero()) } else { Some(class.delta.clone()) };
    if inv.delta != expected_delta || inv.s_parity != class.s_parity {
        return Err(Error::InternalInconsistency("class invariants do not match".into()));
    }
    Ok(Verdict { class, witness, canonical_gram, route })
}

/// Candidate classes for a rank-4 solution, read off from its invariants.
fn candidates(inv: &Invariants) -> Vec<CanonicalClass> {
    let Some(delta) = &inv.delta else { return Vec::new() };
    let mut out = Vec::new();
    if *delta == Integer::from(8) && inv.s_parity {
        out.push(CanonicalClass::quadric());
    }
    let sq = Integer::from(9) - delta;
    if !sq.is_negative() {
        let n = sq.sqrt();
        if &n * &n == sq && !inv.s_parity {
            out.push(CanonicalClass::num_blowup(n));
        }
    }
    out
}

fn search_fallback(m: &GramMatrix, max_nodes: usize) -> Result<Verdict> {
    let inv = invariants(m);
    for class in candidates(&inv) {
        let target = class.canonical_gram(4);
        if let OrbitSearch::Found(witness) = orbit_bfs(m, &target, DEFAULT_MAX_ENTRY, max_nodes)? {
            return verify(m, class, witness, Route::Search);
        }
    }
    Err(Error::InternalInconsistency(format!("could not classify {m}")))
}

pub fn classify_rank4(m: &GramMatrix) -> Result<Verdict> {
    classify_rank4_with(m, FALLBACK_MAX_NODES)
}

/// [`classify_rank4`] with an explicit node budget for the search fallback.
pub fn classify_rank4_with(m: &GramMatrix, max_nodes: usize) -> Result<Verdict> {
    let t = Rank4Coeffs::from_gram(m)?;
    if !is_rank4_solution(&t) {
        return Err(Error::NotASolution(format!("{t} does not solve the rank-4 system")));
    }
    if m.is_identity() {
        return verify(m, CanonicalClass::trivial(), BraidWord::new(), Route::Trivial);
    }
    let attempt = match m.lattice().surface_type() {
        SurfaceType::Surface => degree_zero_route(m).and_then(|(class, w)| verify(m, class, w, Route::DegreeZero)),
        SurfaceType::SurfaceStar => surface_star_route(m).and_then(|(class, w, route)| verify(m, class, w, route)),
        SurfaceType::NotSurface => {
            return Err(Error::InternalInconsistency(format!("unipotent rank-4 lattice {m} is not of surface type")));
        }
    };
    attempt.or_else(|_| search_fallback(m, max_nodes))
}

/// Classifies a rank-3 or rank-4 Gram matrix.
pub fn classify(m: &GramMatrix) -> Result<Verdict> {
    match m.rank() {
        3 => classify_rank3(m),
        4 => classify_rank4(m),
        n => Err(Error::DimensionMismatch { expected: 4, found: n }),
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Equivalence {
    Yes(BraidWord),
    /// Names the orbit invariant that differs.
    No(&'static str),
    Unknown,
}

/// Decides whether two Gram matrices lie in one signed-braid orbit.
pub fn is_equivalent(m1: &GramMatrix, m2: &GramMatrix, max_nodes: usize) -> Result<Equivalence> {
    if m1.rank() != m2.rank() {
        return Ok(Equivalence::No("rank"));
    }
    let (i1, i2) = (invariants(m1), invariants(m2));
    if i1.surface_type != i2.surface_type {
        return Ok(Equivalence::No("surface_type"));
    }
    if i1.delta != i2.delta {
        return Ok(Equivalence::No("delta"));
    }
    if i1.s_parity != i2.s_parity {
        return Ok(Equivalence::No("s_parity"));
    }
    if let OrbitSearch::Found(w) = orbit_bfs(m1, m2, DEFAULT_MAX_ENTRY, max_nodes)? {
        return Ok(Equivalence::Yes(w));
    }
    if matches!(m1.rank(), 3 | 4) {
        if let (Ok(v1), Ok(v2)) = (classify(m1), classify(m2)) {
            if v1.class != v2.class {
                return Err(Error::InternalInconsistency(format!(
                    "equal invariants but classes {} and {}",
                    v1.class, v2.class
                )));
            }
            return Ok(Equivalence::Yes(v1.witness.then(&v2.witness.inverse())));
        }
    }
    Ok(Equivalence::Unknown)
}
