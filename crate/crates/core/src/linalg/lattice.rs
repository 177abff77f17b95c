//! Integer lattice utilities: Hermite normal form, integer kernels,
//! saturation and unimodular completion.

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::{inverse, rank_rational, IntMatrix, Integer, Matrix, RatMatrix, Rational};
use crate::error::{Error, Result};

fn sub_multiple(rows: &mut [Vec<Integer>], target: usize, source: usize, q: &Integer) {
    if q.is_zero() {
        return;
    }
    let (src, dst) = if source < target {
        let (a, b) = rows.split_at_mut(target);
        (&a[source], &mut b[0])
    } else {
        let (a, b) = rows.split_at_mut(source);
        (&b[0], &mut a[target])
    };
    for (d, s) in dst.iter_mut().zip(src) {
        *d -= q * s;
    }
}

fn negate_row(row: &mut [Integer]) {
    for x in row {
        *x = -&*x;
    }
}

/// Row Hermite normal form with transform: returns `(h, u, rank)` where
/// `u` is unimodular, `u * m = h`, the first `rank` rows of `h` are in
/// echelon form with positive pivots and entries above each pivot reduced
/// into `[0, pivot)`, and the remaining rows are zero.
pub fn row_echelon_transform(m: &IntMatrix) -> (IntMatrix, IntMatrix, usize) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.to_rows();
    let mut u = IntMatrix::identity(rows).to_rows();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let pivot = (r..rows)
                .filter(|&i| !h[i][c].is_zero())
                .min_by(|&i, &j| h[i][c].abs().cmp(&h[j][c].abs()).then(i.cmp(&j)));
            let Some(p) = pivot else { break };
            h.swap(p, r);
            u.swap(p, r);
            let mut clean = true;
            for i in r + 1..rows {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                sub_multiple(&mut h, i, r, &q);
                sub_multiple(&mut u, i, r, &q);
                clean &= h[i][c].is_zero();
            }
            if clean {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            negate_row(&mut h[r]);
            negate_row(&mut u[r]);
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            sub_multiple(&mut h, i, r, &q);
            sub_multiple(&mut u, i, r, &q);
        }
        r += 1;
    }
    let to_matrix = |rows: Vec<Vec<Integer>>, c| {
        if rows.is_empty() {
            IntMatrix::zeros(0, c)
        } else {
            Matrix::from_rows(rows).expect("rectangular by construction")
        }
    };
    (to_matrix(h, cols), to_matrix(u, rows), r)
}

/// Nonzero rows of the row Hermite normal form of the given vectors.
pub fn hnf_rows(vectors: &[Vec<Integer>]) -> Vec<Vec<Integer>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(vectors.to_vec()).expect("vectors of equal length");
    let (h, _, rank) = row_echelon_transform(&m);
    (0..rank).map(|i| h.row(i).to_vec()).collect()
}

/// HNF basis of the integer right kernel `{x in Z^n : a x = 0}`.
/// The result is saturated by construction.
pub fn integer_kernel(a: &IntMatrix) -> Vec<Vec<Integer>> {
    let n = a.cols();
    if a.rows() == 0 {
        return IntMatrix::identity(n).to_rows();
    }
    let (_, u, rank) = row_echelon_transform(&a.transpose());
    let kernel: Vec<_> = (rank..n).map(|i| u.row(i).to_vec()).collect();
    hnf_rows(&kernel)
}

/// Scales a rational vector to a primitive integer vector on the same ray.
pub fn clear_denominators(v: &[Rational]) -> Vec<Integer> {
    let lcm = v.iter().fold(Integer::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Integer> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let content = ints.iter().fold(Integer::zero(), |acc, x| acc.gcd(x));
    if content.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &content).collect()
    }
}

/// HNF basis of `span_Q(vectors) ∩ Z^n`.
pub fn saturate(vectors: &[Vec<Rational>], ambient_rank: usize) -> Result<Vec<Vec<Integer>>> {
    if let Some(v) = vectors.iter().find(|v| v.len() != ambient_rank) {
        return Err(Error::DimensionMismatch { expected: ambient_rank, found: v.len() });
    }
    if vectors.is_empty() {
        return Ok(Vec::new());
    }
    let rat = RatMatrix::from_rows(vectors.to_vec())?;
    if rank_rational(&rat) < vectors.len() {
        return Err(Error::DependentVectors);
    }
    let ints: Vec<Vec<Integer>> = vectors.iter().map(|v| clear_denominators(v)).collect();
    let a = IntMatrix::from_rows(ints)?;
    let complement = integer_kernel(&a);
    if complement.is_empty() {
        return Ok(IntMatrix::identity(ambient_rank).to_rows());
    }
    Ok(integer_kernel(&IntMatrix::from_rows(complement)?))
}

/// Rational coordinates `x` with `sum_i x_i basis[i] = v`, if `v` lies in the
/// rational span of the (independent) basis.
pub fn coords_in_basis(basis: &[Vec<Integer>], v: &[Integer]) -> Option<Vec<Rational>> {
    let k = basis.len();
    let n = v.len();
    let aug = Matrix::from_fn(n, k + 1, |i, j| {
        Rational::from_integer(if j < k { basis[j][i].clone() } else { v[i].clone() })
    });
    let (r, pivots) = super::rref(&aug);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![Rational::zero(); k];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = r[(row, k)].clone();
    }
    Some(x)
}

/// For a primitive integer vector `v`, a unimodular matrix whose first row
/// is `v` together with a vector `w` satisfying `v · w = 1`. The remaining
/// rows of the returned inverse-transform span the orthogonal lattice of `v`.
///
/// Returns `(completion, w, orthogonal_basis)`, or `None` when `v` is not
/// primitive.
pub fn unimodular_completion(v: &[Integer]) -> Option<(IntMatrix, Vec<Integer>, Vec<Vec<Integer>>)> {
    let n = v.len();
    let column = Matrix::from_fn(n, 1, |i, _| v[i].clone());
    let (h, u, rank) = row_echelon_transform(&column);
    if rank != 1 || !h[(0, 0)].is_one() {
        return None;
    }
    let dual = u.row(0).to_vec();
    let orthogonal = hnf_rows(&(1..n).map(|i| u.row(i).to_vec()).collect::<Vec<_>>());
    let completion = inverse(&u).ok()?.to_integer()?.transpose();
    Some((completion, dual, orthogonal))
}
