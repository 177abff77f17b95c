//! The Markov equation at rank 3, the two-equation system at rank 4, their
//! relation with unipotency of `s`, bounded enumeration of rank-4 solutions
//! and Markov descent at rank 3.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::GramMatrix;
use crate::linalg::{char_pencil, Integer};
use crate::mutation::{BraidGen, BraidWord};

/// Off-diagonal entries `(a, b, c)` of a rank-3 exceptional Gram matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Rank3Coeffs {
    pub a: Integer,
    pub b: Integer,
    pub c: Integer,
}

impl Rank3Coeffs {
    pub fn new(a: impl Into<Integer>, b: impl Into<Integer>, c: impl Into<Integer>) -> Self {
        Self { a: a.into(), b: b.into(), c: c.into() }
    }

    pub fn from_gram(g: &GramMatrix) -> Result<Self> {
        if g.rank() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: g.rank() });
        }
        let u = g.upper();
        Ok(Self { a: u[0].clone(), b: u[1].clone(), c: u[2].clone() })
    }

    pub fn gram(&self) -> GramMatrix {
        GramMatrix::from_upper(3, &[self.a.clone(), self.b.clone(), self.c.clone()]).expect("unitriangular")
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn max_abs(&self) -> Integer {
        [&self.a, &self.b, &self.c].into_iter().map(Signed::abs).max().expect("three entries")
    }
}

impl fmt::Display for Rank3Coeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Off-diagonal entries `(a, b, c, d, e, f)` of a rank-4 exceptional Gram
/// matrix, row by row.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Rank4Coeffs {
    pub a: Integer,
    pub b: Integer,
    pub c: Integer,
    pub d: Integer,
    pub e: Integer,
    pub f: Integer,
}

impl Rank4Coeffs {
    pub fn from_i64(t: [i64; 6]) -> Self {
        let [a, b, c, d, e, f] = t.map(Integer::from);
        Self { a, b, c, d, e, f }
    }

    pub fn from_gram(g: &GramMatrix) -> Result<Self> {
        if g.rank() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, found: g.rank() });
        }
        let [a, b, c, d, e, f]: [Integer; 6] = g.upper().try_into().expect("six entries");
        Ok(Self { a, b, c, d, e, f })
    }

    pub fn entries(&self) -> [&Integer; 6] {
        [&self.a, &self.b, &self.c, &self.d, &self.e, &self.f]
    }

    pub fn gram(&self) -> GramMatrix {
        let u: Vec<Integer> = self.entries().into_iter().cloned().collect();
        GramMatrix::from_upper(4, &u).expect("unitriangular")
    }

    /// `(f, e, c, d, b, a)`: the Gram matrix of `(e_4, e_3, e_2, e_1)` under the
    /// transposed form, i.e. the antitranspose of `M`.
    pub fn reversed(&self) -> Self {
        let [a, b, c, d, e, f] = self.entries().map(Clone::clone);
        Self { a: f, b: e, c, d, e: b, f: a }
    }
}

impl fmt::Display for Rank4Coeffs {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d, e, f] = self.entries();
        write!(fm, "({a}, {b}, {c}, {d}, {e}, {f})")
    }
}

/// `a² + b² + c² − abc`.
pub fn markov_value(t: &Rank3Coeffs) -> Integer {
    let (a, b, c) = (&t.a, &t.b, &t.c);
    a * a + b * b + c * c - a * b * c
}

/// `(q₁, q₂)` with
/// `q₁ = acdf − abd − ace − bcf − def + a² + b² + c² + d² + e² + f²` and
/// `q₂ = af − be + cd`.
pub fn rank4_values(t: &Rank4Coeffs) -> (Integer, Integer) {
    let [a, b, c, d, e, f] = t.entries();
    let q1 =
        a * c * d * f - a * b * d - a * c * e - b * c * f - d * e * f + a * a + b * b + c * c + d * d + e * e + f * f;
    let q2 = a * f - b * e + c * d;
    (q1, q2)
}

pub fn is_rank4_solution(t: &Rank4Coeffs) -> bool {
    let (q1, q2) = rank4_values(t);
    q1.is_zero() && q2.is_zero()
}

/// Checks that unipotency of `s` for the Gram matrix of `t` holds exactly
/// when `q₁ = q₂ = 0`, and that the pencil coefficients satisfy
/// `χ₁ = q₁ − 4` and `χ₂ = q₂² − 2q₁ + 6`.
pub fn unipotency_equivalence_check(t: &Rank4Coeffs) -> bool {
    let g = t.gram();
    let (q1, q2) = rank4_values(t);
    let chi = char_pencil(g.matrix()).expect("exceptional Gram matrices are unimodular");
    let chi1_ok = chi.coeff(1) == &q1 - Integer::from(4);
    let chi2_ok = chi.coeff(2) == &q2 * &q2 - Integer::from(2) * &q1 + Integer::from(6);
    let solves = q1.is_zero() && q2.is_zero();
    chi1_ok && chi2_ok && g.lattice().is_unipotent() == solves
}

/// `(q₁, q₂)` in machine arithmetic; `None` on overflow.
pub fn rank4_values_i64(t: [i64; 6]) -> Option<(i128, i128)> {
    let [a, b, c, d, e, f] = t.map(i128::from);
    let prod = |xs: &[i128]| xs.iter().try_fold(1i128, |acc, &x| acc.checked_mul(x));
    let terms = [
        prod(&[a, c, d, f])?,
        -prod(&[a, b, d])?,
        -prod(&[a, c, e])?,
        -prod(&[b, c, f])?,
        -prod(&[d, e, f])?,
        a * a,
        b * b,
        c * c,
        d * d,
        e * e,
        f * f,
    ];
    let q1 = terms.iter().try_fold(0i128, |acc, &x| acc.checked_add(x))?;
    Some((q1, a * f - b * e + c * d))
}

/// `(s − 1)^4 = 0` for the rank-4 Gram matrix with upper entries `t`,
/// computed in checked machine arithmetic; `None` on overflow.
#[allow(clippy::needless_range_loop)]
pub fn is_unipotent_i64(t: [i64; 6]) -> Option<bool> {
    let [a, b, c, d, e, f] = t.map(i128::from);
    let m = [[1, a, b, c], [0, 1, d, e], [0, 0, 1, f], [0, 0, 0, 1]];
    let mut inv = [[0i128; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1;
    }
    for j in 0..4 {
        for i in (0..j).rev() {
            let mut acc = 0i128;
            for k in i + 1..=j {
                acc = acc.checked_add(m[i][k].checked_mul(inv[k][j])?)?;
            }
            inv[i][j] = -acc;
        }
    }
    let mul = |x: &[[i128; 4]; 4], y: &[[i128; 4]; 4]| -> Option<[[i128; 4]; 4]> {
        let mut out = [[0i128; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    out[i][j] = out[i][j].checked_add(x[i][k].checked_mul(y[k][j])?)?;
                }
            }
        }
        Some(out)
    };
    let mut mt = [[0i128; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            mt[i][j] = m[j][i];
        }
    }
    let mut n = mul(&inv, &mt)?;
    for (i, row) in n.iter_mut().enumerate() {
        row[i] -= 1;
    }
    let n2 = mul(&n, &n)?;
    let n4 = mul(&n2, &n2)?;
    Some(n4.iter().flatten().all(|&x| x == 0))
}

/// All rank-4 solutions with every entry in `[-bound, bound]`, in
/// lexicographic order of `(a, b, c, d, e, f)`.
///
/// `q₂` is linear in `f`, so for `a ≠ 0` at most one `f` is tried; for
/// `a = 0` the prefix must satisfy `be = cd` before `f` is scanned.
pub fn enumerate_rank4(bound: u32) -> Vec<[i64; 6]> {
    let bd = i64::from(bound);
    let mut out = Vec::new();
    for a in -bd..=bd {
        for b in -bd..=bd {
            for c in -bd..=bd {
                for d in -bd..=bd {
                    for e in -bd..=bd {
                        let rhs = b * e - c * d;
                        let mut check = |f: i64| {
                            let t = [a, b, c, d, e, f];
                            if rank4_values_i64(t) == Some((0, 0)) {
                                out.push(t);
                            }
                        };
                        if a != 0 {
                            if rhs % a == 0 && (rhs / a).abs() <= bd {
                                check(rhs / a);
                            }
                        } else if rhs == 0 {
                            (-bd..=bd).for_each(&mut check);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Number of rank-4 solutions with entries in `[-bound, bound]`.
pub fn count_rank4(bound: u32) -> usize {
    enumerate_rank4(bound).len()
}

/// Apply `g` to the triple at the Gram level, tracking the word.
fn step3(t: &mut Rank3Coeffs, g: BraidGen, word: &mut BraidWord) {
    let (a, b, c) = (t.a.clone(), t.b.clone(), t.c.clone());
    *t = match (g.kind, g.index) {
        (crate::mutation::GenKind::Sigma, 1) => Rank3Coeffs { a: -&a, b: &c - &a * &b, c: b },
        (crate::mutation::GenKind::SigmaInv, 1) => Rank3Coeffs { a: -&a, b: c.clone(), c: &b - &a * &c },
        (crate::mutation::GenKind::Sigma, 2) => Rank3Coeffs { a: &b - &a * &c, b: a, c: -&c },
        (crate::mutation::GenKind::SigmaInv, 2) => Rank3Coeffs { a: b.clone(), b: &a - &b * &c, c: -&c },
        (crate::mutation::GenKind::Eps, 1) => Rank3Coeffs { a: -a, b: -b, c },
        (crate::mutation::GenKind::Eps, 2) => Rank3Coeffs { a: -a, b, c: -c },
        (crate::mutation::GenKind::Eps, 3) => Rank3Coeffs { a, b: -b, c: -c },
        _ => unreachable!("only rank-3 generators are used"),
    };
    word.push(g);
}

/// Makes every entry of a nonzero Markov solution positive with `ε` moves.
fn normalize_signs(t: &mut Rank3Coeffs, word: &mut BraidWord) {
    let neg = |x: &Integer| x.is_negative();
    match (neg(&t.a), neg(&t.b), neg(&t.c)) {
        (true, true, false) => step3(t, BraidGen::eps(1), word),
        (true, false, true) => step3(t, BraidGen::eps(2), word),
        (false, true, true) => step3(t, BraidGen::eps(3), word),
        _ => {}
    }
}

/// Reduces a solution of the Markov equation to `(3, 3, 3)`, or leaves the
/// zero solution alone. The returned word maps the Gram matrix of `t` to the
/// Gram matrix of the returned triple.
///
/// Each round applies the Vieta move on the entry of largest absolute value
/// (leftmost on ties) and restores positive signs.
pub fn markov_reduce(t: &Rank3Coeffs) -> Result<(Rank3Coeffs, BraidWord)> {
    if !markov_value(t).is_zero() {
        return Err(Error::NotASolution(format!("{t} does not satisfy a^2+b^2+c^2=abc")));
    }
    let mut word = BraidWord::new();
    let mut cur = t.clone();
    if cur.is_zero() {
        return Ok((cur, word));
    }
    normalize_signs(&mut cur, &mut word);
    let three = Integer::from(3);
    while !(cur.a == three && cur.b == three && cur.c == three) {
        let before = cur.max_abs();
        let g = if cur.a >= cur.b && cur.a >= cur.c {
            BraidGen::sigma_inv(2)
        } else if cur.b >= cur.c {
            BraidGen::sigma_inv(1)
        } else {
            BraidGen::sigma(1)
        };
        step3(&mut cur, g, &mut word);
        normalize_signs(&mut cur, &mut word);
        if cur.max_abs() >= before {
            return Err(Error::InternalInconsistency(format!("Markov descent stalled at {cur}")));
        }
    }
    Ok((cur, word))
}

/// Every solution of the Markov equation with all `|entries| ≤ bound`, sorted.
/// Positive solutions are generated from `(3, 3, 3)` by Vieta moves; the
/// others differ from a positive one by flipping the sign of two entries.
pub fn markov_solutions(bound: u64) -> Vec<(i64, i64, i64)> {
    let bd = bound.min(i64::MAX as u64 / 4) as i64;
    let mut positive = BTreeSet::new();
    let mut queue = VecDeque::new();
    if bd >= 3 {
        positive.insert((3, 3, 3));
        queue.push_back((3i64, 3i64, 3i64));
    }
    while let Some((a, b, c)) = queue.pop_front() {
        let flips = [
            b.checked_mul(c).map(|p| (p - a, b, c)),
            a.checked_mul(c).map(|p| (a, p - b, c)),
            a.checked_mul(b).map(|p| (a, b, p - c)),
        ];
        for next in flips.into_iter().flatten() {
            if next.0 <= bd && next.1 <= bd && next.2 <= bd && positive.insert(next) {
                queue.push_back(next);
            }
        }
    }
    let mut all: BTreeSet<(i64, i64, i64)> = BTreeSet::new();
    all.insert((0, 0, 0));
    for &(a, b, c) in &positive {
        all.extend([(a, b, c), (-a, -b, c), (-a, b, -c), (a, -b, -c)]);
    }
    all.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mutation::apply_word;

    #[test]
    fn markov_values() {
        assert!(markov_value(&Rank3Coeffs::new(3, 3, 3)).is_zero());
        assert!(markov_value(&Rank3Coeffs::new(0, 0, 0)).is_zero());
        assert!(markov_value(&Rank3Coeffs::new(3, 3, 6)).is_zero());
        assert_eq!(markov_value(&Rank3Coeffs::new(1, 0, 0)), 1.into());
    }

    #[test]
    fn rank4_value_examples() {
        let z = (Integer::zero(), Integer::zero());
        assert_eq!(rank4_values(&Rank4Coeffs::from_i64([2, 2, 4, 0, 2, 2])), z);
        for n in 0..20 {
            assert_eq!(rank4_values(&Rank4Coeffs::from_i64([n, 2 * n, n, 3, 3, 3])), z);
        }
        assert_eq!(rank4_values(&Rank4Coeffs::from_i64([1, 0, 0, 0, 0, 0])), (1.into(), 0.into()));
    }

    #[test]
    fn equivalence_examples() {
        assert!(unipotency_equivalence_check(&Rank4Coeffs::from_i64([2, 2, 4, 0, 2, 2])));
        assert!(unipotency_equivalence_check(&Rank4Coeffs::from_i64([1, 0, 0, 0, 0, 0])));
        assert!(unipotency_equivalence_check(&Rank4Coeffs::from_i64([-5, 3, 2, 1, -4, 5])));
        assert_eq!(is_unipotent_i64([2, 2, 4, 0, 2, 2]), Some(true));
        assert_eq!(is_unipotent_i64([1, 0, 0, 0, 0, 0]), Some(false));
    }

    #[test]
    fn enumeration_small_bounds() {
        assert_eq!(enumerate_rank4(0), vec![[0; 6]]);
        assert!(enumerate_rank4(4).contains(&[2, 2, 4, 0, 2, 2]));
        let counts: Vec<usize> = (0..=3).map(count_rank4).collect();
        assert_eq!(counts, vec![1, 1, 9, 153]);
    }

    #[test]
    fn reduction_examples() {
        let (canon, word) = markov_reduce(&Rank3Coeffs::new(3, 3, 3)).unwrap();
        assert_eq!((canon, word.len()), (Rank3Coeffs::new(3, 3, 3), 0));
        let (canon, word) = markov_reduce(&Rank3Coeffs::new(0, 0, 0)).unwrap();
        assert_eq!((canon, word.len()), (Rank3Coeffs::new(0, 0, 0), 0));
        let t = Rank3Coeffs::new(3, 3, 6);
        let (canon, word) = markov_reduce(&t).unwrap();
        assert_eq!(canon, Rank3Coeffs::new(3, 3, 3));
        assert!(word.len() <= 2);
        assert_eq!(apply_word(&t.gram(), &word).unwrap(), canon.gram());
        assert!(markov_reduce(&Rank3Coeffs::new(1, 1, 1)).is_err());
    }

    #[test]
    fn reduction_words_verify() {
        for (a, b, c) in markov_solutions(500) {
            let t = Rank3Coeffs::new(a, b, c);
            let (canon, word) = markov_reduce(&t).unwrap();
            assert_eq!(apply_word(&t.gram(), &word).unwrap(), canon.gram(), "{t}");
        }
    }

    #[test]
    fn small_markov_solutions() {
        let sols = markov_solutions(15);
        assert!(sols.contains(&(0, 0, 0)));
        assert!(sols.contains(&(3, 6, 15)));
        assert!(sols.contains(&(-3, -6, 15)));
        for (a, b, c) in sols {
            assert_eq!(a * a + b * b + c * c, a * b * c);
        }
    }
}
