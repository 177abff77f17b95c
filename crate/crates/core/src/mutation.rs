//! The signed braid group action on exceptional bases and their Gram
//! matrices: mutations `σ_i`, `σ_i^{-1}`, sign changes `ε_i`, the rotation
//! `ρ`, helices, the Markov complexity and a bidirectional orbit search.

use std::collections::HashMap;
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Element, GramMatrix, SerreLattice, SurfaceStructure};
use crate::linalg::{IntMatrix, Integer, Matrix};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GenKind {
    Sigma,
    SigmaInv,
    Eps,
}

/// One generator of the signed braid group. Indices are 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct BraidGen {
    pub kind: GenKind,
    pub index: i64,
}

impl BraidGen {
    pub fn sigma(index: i64) -> Self {
        Self { kind: GenKind::Sigma, index }
    }

    pub fn sigma_inv(index: i64) -> Self {
        Self { kind: GenKind::SigmaInv, index }
    }

    pub fn eps(index: i64) -> Self {
        Self { kind: GenKind::Eps, index }
    }

    pub fn inverse(self) -> Self {
        let kind = match self.kind {
            GenKind::Sigma => GenKind::SigmaInv,
            GenKind::SigmaInv => GenKind::Sigma,
            GenKind::Eps => GenKind::Eps,
        };
        Self { kind, index: self.index }
    }

    /// `σ_1..σ_{n-1}, σ_1^{-1}..σ_{n-1}^{-1}, ε_1..ε_n`.
    pub fn standard_set(n: usize) -> Vec<BraidGen> {
        let n = n as i64;
        let sig = (1..n).map(Self::sigma);
        let inv = (1..n).map(Self::sigma_inv);
        let eps = (1..=n).map(Self::eps);
        sig.chain(inv).chain(eps).collect()
    }
}

impl fmt::Display for BraidGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            GenKind::Sigma => 's',
            GenKind::SigmaInv => 'S',
            GenKind::Eps => 'e',
        };
        write!(f, "{c}{}", self.index)
    }
}

impl FromStr for BraidGen {
    type Err = Error;

    fn from_str(tok: &str) -> Result<Self> {
        let mut chars = tok.chars();
        let kind = match chars.next() {
            Some('s') => GenKind::Sigma,
            Some('S') => GenKind::SigmaInv,
            Some('e') => GenKind::Eps,
            _ => return Err(Error::Parse(format!("bad braid token {tok:?}"))),
        };
        let index = chars.as_str().parse().map_err(|_| Error::Parse(format!("bad braid token {tok:?}")))?;
        Ok(Self { kind, index })
    }
}

/// A word in the signed braid group, stored in application order: the first
/// generator acts first.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct BraidWord(pub Vec<BraidGen>);

impl BraidWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn gens(&self) -> &[BraidGen] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, g: BraidGen) {
        self.0.push(g);
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &BraidWord) -> BraidWord {
        BraidWord(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord(self.0.iter().rev().map(|g| g.inverse()).collect())
    }

    /// Parses a word written as a composition of operators, so that the
    /// rightmost token acts first (`e4 s1 S2 s1 s2` means `ε₄σ₁σ₂⁻¹σ₁σ₂`).
    pub fn from_display_order(text: &str) -> Result<BraidWord> {
        let mut w: BraidWord = text.parse()?;
        w.0.reverse();
        Ok(w)
    }

    /// Renders in composition order, the inverse of [`Self::from_display_order`].
    pub fn to_display_order(&self) -> String {
        let mut rev = self.0.clone();
        rev.reverse();
        BraidWord(rev).to_string()
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        text.split_whitespace().map(str::parse).collect::<Result<Vec<_>>>().map(BraidWord)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromIterator<BraidGen> for BraidWord {
    fn from_iter<I: IntoIterator<Item = BraidGen>>(iter: I) -> Self {
        BraidWord(iter.into_iter().collect())
    }
}

// Gram-level tables, generic so the orbit search can run them on machine
// integers. `i` is 0-based here and `i + 1 < n`.

fn sigma_table<T: Clone + Num + Neg<Output = T>>(m: &Matrix<T>, i: usize) -> Matrix<T> {
    let n = m.rows();
    let h = m[(i, i + 1)].clone();
    let mut out = m.clone();
    for k in 0..n {
        for l in k + 1..n {
            out[(k, l)] = if k == i && l == i + 1 {
                -h.clone()
            } else if l == i {
                m[(k, i + 1)].clone() - h.clone() * m[(k, i)].clone()
            } else if l == i + 1 {
                m[(k, i)].clone()
            } else if k == i {
                m[(i + 1, l)].clone() - h.clone() * m[(i, l)].clone()
            } else if k == i + 1 {
                m[(i, l)].clone()
            } else {
                continue;
            };
        }
    }
    out
}

fn sigma_inv_table<T: Clone + Num + Neg<Output = T>>(m: &Matrix<T>, i: usize) -> Matrix<T> {
    let n = m.rows();
    let h = m[(i, i + 1)].clone();
    let mut out = m.clone();
    for k in 0..n {
        for l in k + 1..n {
            out[(k, l)] = if k == i && l == i + 1 {
                -h.clone()
            } else if l == i {
                m[(k, i + 1)].clone()
            } else if l == i + 1 {
                m[(k, i)].clone() - h.clone() * m[(k, i + 1)].clone()
            } else if k == i {
                m[(i + 1, l)].clone()
            } else if k == i + 1 {
                m[(i, l)].clone() - h.clone() * m[(i + 1, l)].clone()
            } else {
                continue;
            };
        }
    }
    out
}

fn eps_table<T: Clone + Num + Neg<Output = T>>(m: &Matrix<T>, i: usize) -> Matrix<T> {
    let n = m.rows();
    let mut out = m.clone();
    for k in 0..n {
        if k != i {
            out[(k, i)] = -m[(k, i)].clone();
            out[(i, k)] = -m[(i, k)].clone();
        }
    }
    out
}

fn rho_table<T: Clone + Num + Neg<Output = T>>(m: &Matrix<T>) -> Matrix<T> {
    (0..m.rows() - 1).rev().fold(m.clone(), |acc, i| sigma_table(&acc, i))
}

fn rho_inv_table<T: Clone + Num + Neg<Output = T>>(m: &Matrix<T>) -> Matrix<T> {
    (0..m.rows() - 1).fold(m.clone(), |acc, i| sigma_inv_table(&acc, i))
}

/// Reduces an extended mutation index to `1..=n`, where `n` stands for `σ_n`.
fn reduce_index(index: i64, n: usize) -> usize {
    let r = index.rem_euclid(n as i64) as usize;
    if r == 0 {
        n
    } else {
        r
    }
}

fn check_gen(g: BraidGen, n: usize) -> Result<()> {
    let ok = match g.kind {
        GenKind::Eps => g.index >= 1 && g.index <= n as i64,
        GenKind::Sigma | GenKind::SigmaInv => n >= 2,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: g.index, rank: n })
    }
}

fn apply_gen_table<T: Clone + Num + Neg<Output = T>>(m: &Matrix<T>, g: BraidGen) -> Result<Matrix<T>> {
    let n = m.rows();
    check_gen(g, n)?;
    Ok(match g.kind {
        GenKind::Eps => eps_table(m, g.index as usize - 1),
        GenKind::Sigma | GenKind::SigmaInv => {
            let inverse = g.kind == GenKind::SigmaInv;
            let i = reduce_index(g.index, n);
            let step = |x: &Matrix<T>, i: usize| if inverse { sigma_inv_table(x, i) } else { sigma_table(x, i) };
            if i < n {
                step(m, i - 1)
            } else {
                // σ_n = ρ^{-1} σ_1 ρ on Gram matrices
                rho_inv_table(&step(&rho_table(m), 0))
            }
        }
    })
}

fn to_gram(m: IntMatrix) -> GramMatrix {
    GramMatrix::new(m).expect("braid generators preserve exceptional Gram matrices")
}

pub fn sigma(m: &GramMatrix, i: i64) -> Result<GramMatrix> {
    apply_gen(m, BraidGen::sigma(i))
}

pub fn sigma_inv(m: &GramMatrix, i: i64) -> Result<GramMatrix> {
    apply_gen(m, BraidGen::sigma_inv(i))
}

pub fn eps(m: &GramMatrix, i: i64) -> Result<GramMatrix> {
    apply_gen(m, BraidGen::eps(i))
}

/// `ρ = σ_1 ⋯ σ_{n-1}` on Gram matrices.
pub fn rho(m: &GramMatrix) -> GramMatrix {
    if m.rank() < 2 {
        return m.clone();
    }
    to_gram(rho_table(m.matrix()))
}

pub fn apply_gen(m: &GramMatrix, g: BraidGen) -> Result<GramMatrix> {
    apply_gen_table(m.matrix(), g).map(to_gram)
}

pub fn apply_word(m: &GramMatrix, w: &BraidWord) -> Result<GramMatrix> {
    let mut cur = m.matrix().clone();
    for &g in w.gens() {
        cur = apply_gen_table(&cur, g)?;
    }
    Ok(to_gram(cur))
}

/// Word in application order realizing `ρ` on rank-`n` bases.
pub fn rho_word(n: usize) -> BraidWord {
    (1..n as i64).rev().map(BraidGen::sigma).collect()
}

/// An exceptional basis of a fixed ambient Serre lattice, in ambient
/// coordinates.
#[derive(Clone, Debug)]
pub struct BasedLattice {
    lattice: SerreLattice,
    serre: IntMatrix,
    basis: Vec<Element>,
}

impl BasedLattice {
    pub fn new(lattice: SerreLattice, basis: Vec<Element>) -> Result<Self> {
        let n = lattice.rank();
        if basis.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: basis.len() });
        }
        for b in &basis {
            if b.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: b.len() });
            }
        }
        let serre = lattice.serre_integer().ok_or(Error::NonIntegralSerre)?;
        let based = Self { lattice, serre, basis };
        let gram = based.gram_matrix();
        for i in 0..n {
            if !gram[(i, i)].is_one() {
                return Err(Error::NotExceptionalBasis(format!("<e{0}, e{0}> = {1}", i + 1, gram[(i, i)])));
            }
            for j in 0..i {
                if !gram[(i, j)].is_zero() {
                    return Err(Error::NotExceptionalBasis(format!("<e{}, e{}> = {}", i + 1, j + 1, gram[(i, j)])));
                }
            }
        }
        Ok(based)
    }

    /// The standard basis of the lattice defined by `g`.
    pub fn from_gram(g: &GramMatrix) -> Self {
        let n = g.rank();
        Self {
            lattice: g.lattice().clone(),
            serre: g.serre().clone(),
            basis: (0..n).map(|i| Element::basis(n, i)).collect(),
        }
    }

    pub fn lattice(&self) -> &SerreLattice {
        &self.lattice
    }

    pub fn basis(&self) -> &[Element] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn gram_matrix(&self) -> IntMatrix {
        let n = self.rank();
        IntMatrix::from_fn(n, n, |i, j| self.lattice.pair(&self.basis[i], &self.basis[j]))
    }

    pub fn gram(&self) -> GramMatrix {
        to_gram(self.gram_matrix())
    }

    fn apply_s(&self, v: &Element) -> Element {
        Element(self.serre.mul_vec(v.coords()))
    }

    fn apply_s_inv(&self, v: &Element) -> Element {
        // s^{-1} = M^{-T} M, and s^{-1} v is the unique x with s x = v
        let m = self.lattice.gram();
        let mv = m.mul_vec(v.coords());
        let mt = m.transpose();
        let x = crate::linalg::inverse(&mt).expect("nondegenerate").mul_vec(&crate::linalg::rat_vec(&mv));
        Element(x.into_iter().map(|q| q.to_integer()).collect())
    }

    fn mutate_pair(&self, i: usize, inverse: bool) -> Self {
        let (v, w) = (&self.basis[i], &self.basis[i + 1]);
        let h = self.lattice.pair(v, w);
        let mut basis = self.basis.clone();
        if inverse {
            basis[i] = w.clone();
            basis[i + 1] = v - &w.scale(&h);
        } else {
            basis[i] = w - &v.scale(&h);
            basis[i + 1] = v.clone();
        }
        Self { basis, ..self.clone() }
    }

    /// `ρ(E) = (s e_n, e_1, …, e_{n-1})`.
    pub fn rotate(&self) -> Self {
        let mut basis = Vec::with_capacity(self.rank());
        if let Some(last) = self.basis.last() {
            basis.push(self.apply_s(last));
            basis.extend_from_slice(&self.basis[..self.rank() - 1]);
        }
        Self { basis, ..self.clone() }
    }

    /// `ρ^{-1}(E) = (e_2, …, e_n, s^{-1} e_1)`.
    pub fn rotate_inv(&self) -> Self {
        let mut basis = Vec::with_capacity(self.rank());
        if let Some(first) = self.basis.first() {
            basis.extend_from_slice(&self.basis[1..]);
            basis.push(self.apply_s_inv(first));
        }
        Self { basis, ..self.clone() }
    }

    pub fn mutate(&self, g: BraidGen) -> Result<Self> {
        let n = self.rank();
        check_gen(g, n)?;
        Ok(match g.kind {
            GenKind::Eps => {
                let mut basis = self.basis.clone();
                let i = g.index as usize - 1;
                basis[i] = -&basis[i];
                Self { basis, ..self.clone() }
            }
            GenKind::Sigma | GenKind::SigmaInv => {
                let inverse = g.kind == GenKind::SigmaInv;
                let i = reduce_index(g.index, n);
                if i < n {
                    self.mutate_pair(i - 1, inverse)
                } else {
                    self.rotate().mutate_pair(0, inverse).rotate_inv()
                }
            }
        })
    }

    pub fn apply_word(&self, w: &BraidWord) -> Result<Self> {
        w.gens().iter().try_fold(self.clone(), |acc, &g| acc.mutate(g))
    }

    /// `𝓜(E) = Σ |r(e_i)|` for a fixed structure element.
    pub fn markov_number_with(&self, st: &SurfaceStructure) -> Integer {
        self.basis.iter().map(|e| st.rank_of(e).abs()).sum()
    }

    /// `𝓜(E)` with the canonical structure element of the lattice.
    pub fn markov_number(&self) -> Result<Integer> {
        let st = self.lattice.surface_structure()?;
        Ok(self.markov_number_with(&st))
    }

    pub fn helix(&self) -> Helix {
        Helix { base: self.clone() }
    }
}

/// The helix `(e_k)_{k ∈ Z}` generated by an exceptional basis through
/// `e_{k+n} = s^{-1} e_k`.
#[derive(Clone, Debug)]
pub struct Helix {
    base: BasedLattice,
}

impl Helix {
    /// `e_k`, 1-based so that `e_1, …, e_n` is the defining basis.
    pub fn element(&self, k: i64) -> Element {
        let n = self.base.rank() as i64;
        let q = (k - 1).div_euclid(n);
        let r = (k - 1).rem_euclid(n) as usize;
        let mut v = self.base.basis[r].clone();
        for _ in 0..q.abs() {
            v = if q > 0 { self.base.apply_s_inv(&v) } else { self.base.apply_s(&v) };
        }
        v
    }

    /// The thread `(e_k, …, e_{k+n-1})`.
    pub fn thread(&self, k: i64) -> BasedLattice {
        let n = self.base.rank() as i64;
        let basis = (k..k + n).map(|j| self.element(j)).collect();
        BasedLattice { basis, ..self.base.clone() }
    }
}

/// Result of [`orbit_bfs`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OrbitSearch {
    Found(BraidWord),
    NotFound { explored: usize },
}

pub const DEFAULT_MAX_ENTRY: i64 = 1_000_000;
pub const DEFAULT_MAX_NODES: usize = 10_000_000;

type Key = Box<[i64]>;

fn key_of(m: &Matrix<i128>) -> Key {
    let n = m.rows();
    let mut k = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            k.push(m[(i, j)] as i64);
        }
    }
    k.into_boxed_slice()
}

fn matrix_of(key: &[i64], n: usize) -> Matrix<i128> {
    let mut m = Matrix::<i128>::identity(n);
    let mut it = key.iter();
    for i in 0..n {
        for j in i + 1..n {
            m[(i, j)] = *it.next().expect("key length") as i128;
        }
    }
    m
}

struct Side {
    nodes: Vec<Key>,
    link: Vec<(u32, u16)>,
    index: HashMap<Key, u32>,
    frontier: Vec<u32>,
}

impl Side {
    fn new(start: Key) -> Self {
        let mut index = HashMap::new();
        index.insert(start.clone(), 0);
        Self { nodes: vec![start], link: vec![(0, u16::MAX)], index, frontier: vec![0] }
    }

    /// Generators along the path from the root to `node`, root side first.
    fn path(&self, mut node: u32) -> Vec<u16> {
        let mut out = Vec::new();
        while self.link[node as usize].1 != u16::MAX {
            let (parent, g) = self.link[node as usize];
            out.push(g);
            node = parent;
        }
        out.reverse();
        out
    }
}

/// Bidirectional breadth-first search for a word `w` with
/// `apply_word(source, w) = target`, over `σ_i^{±1}` (`1 ≤ i < n`) and `ε_i`.
/// States with an entry of absolute value above `max_entry` are pruned; the
/// search gives up after visiting `max_nodes` states.
pub fn orbit_bfs(source: &GramMatrix, target: &GramMatrix, max_entry: i64, max_nodes: usize) -> Result<OrbitSearch> {
    let n = source.rank();
    if target.rank() != n {
        return Err(Error::DimensionMismatch { expected: n, found: target.rank() });
    }
    if source == target {
        return Ok(OrbitSearch::Found(BraidWord::new()));
    }
    let to_small = |g: &GramMatrix| -> Option<Key> {
        g.upper().iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>().map(Vec::into_boxed_slice)
    };
    let (Some(s_key), Some(t_key)) = (to_small(source), to_small(target)) else {
        return Ok(OrbitSearch::NotFound { explored: 0 });
    };
    let gens = BraidGen::standard_set(n);
    let bound = max_entry.unsigned_abs() as i128;
    let mut sides = [Side::new(s_key), Side::new(t_key)];
    loop {
        let explored = sides[0].nodes.len() + sides[1].nodes.len();
        if sides[0].frontier.is_empty() || sides[1].frontier.is_empty() || explored >= max_nodes {
            return Ok(OrbitSearch::NotFound { explored });
        }
        let dir = usize::from(sides[1].frontier.len() < sides[0].frontier.len());
        let frontier = std::mem::take(&mut sides[dir].frontier);
        let mut next = Vec::new();
        for node in frontier {
            let m = matrix_of(&sides[dir].nodes[node as usize], n);
            for (gi, g) in gens.iter().enumerate() {
                // backward steps run the inverse generator
                let step = if dir == 0 { *g } else { g.inverse() };
                let image = apply_gen_table(&m, step)?;
                if image.entries().any(|x| x.abs() > bound) {
                    continue;
                }
                let key = key_of(&image);
                if sides[dir].index.contains_key(&key) {
                    continue;
                }
                let id = sides[dir].nodes.len() as u32;
                sides[dir].index.insert(key.clone(), id);
                sides[dir].nodes.push(key.clone());
                sides[dir].link.push((node, gi as u16));
                if let Some(&other) = sides[1 - dir].index.get(&key) {
                    let (fwd_node, bwd_node) = if dir == 0 { (id, other) } else { (other, id) };
                    let mut word: BraidWord = sides[0].path(fwd_node).into_iter().map(|i| gens[i as usize]).collect();
                    let mut back: Vec<BraidGen> =
                        sides[1].path(bwd_node).into_iter().map(|i| gens[i as usize]).collect();
                    back.reverse();
                    word.0.extend(back);
                    return Ok(OrbitSearch::Found(word));
                }
                next.push(id);
                if sides[0].nodes.len() + sides[1].nodes.len() >= max_nodes {
                    break;
                }
            }
        }
        sides[dir].frontier = next;
    }
}
