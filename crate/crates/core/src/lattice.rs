//! Serre lattices: an integer nondegenerate bilinear form together with its
//! Serre operator `s = M^{-1} M^T`, the type predicates, the codimension
//! filtration and the numerical invariants built on top of it (structure
//! element, canonical class, degree, rank/degree/slope functions).

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    coords_in_basis, det, dot, hnf_rows, integer_kernel, inverse, kernel_basis, rank_rational, rat_vec, saturate,
    unimodular_completion, IntMatrix, Integer, RatMatrix, Rational,
};

/// An element of a lattice, as integer coordinates in the lattice basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Element(pub Vec<Integer>);

impl Element {
    pub fn from_i64(v: &[i64]) -> Self {
        Self(v.iter().map(|&x| Integer::from(x)).collect())
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![Integer::zero(); n])
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[i] = Integer::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[Integer] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Integer) -> Self {
        Self(self.0.iter().map(|x| x * c).collect())
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        Element(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        Element(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum SurfaceType {
    NotSurface,
    Surface,
    SurfaceStar,
}

impl fmt::Display for SurfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurfaceType::NotSurface => "not surface",
            SurfaceType::Surface => "surface",
            SurfaceType::SurfaceStar => "surface*",
        })
    }
}

/// Integer lattice `Z^n` with a nondegenerate bilinear form `<v, w> = v^T M w`
/// and its Serre operator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SerreLattice {
    gram: IntMatrix,
    serre: RatMatrix,
}

impl SerreLattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if det(&gram)?.is_zero() {
            return Err(Error::Singular);
        }
        let serre = &inverse(&gram)? * &gram.transpose().to_rational();
        Ok(Self { gram, serre })
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    /// The matrix of `s` acting on coordinate columns.
    pub fn serre_operator(&self) -> &RatMatrix {
        &self.serre
    }

    /// `s` as an integer matrix, when it is one.
    pub fn serre_integer(&self) -> Option<IntMatrix> {
        self.serre.to_integer()
    }

    fn check_len(&self, v: &Element) -> Result<()> {
        if v.len() == self.rank() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.rank(), found: v.len() })
        }
    }

    /// `<v, w> = v^T M w`.
    pub fn pairing(&self, v: &Element, w: &Element) -> Result<Integer> {
        self.check_len(v)?;
        self.check_len(w)?;
        Ok(self.pair(v, w))
    }

    pub(crate) fn pair(&self, v: &Element, w: &Element) -> Integer {
        self.gram.bilinear(&v.0, &w.0)
    }

    /// `{v, w} = <v, w> - <w, v>`.
    pub fn antisym(&self, v: &Element, w: &Element) -> Result<Integer> {
        Ok(self.pairing(v, w)? - self.pairing(w, v)?)
    }

    pub fn apply_serre(&self, v: &Element) -> Result<Element> {
        self.check_len(v)?;
        let image = self.serre.mul_vec(&rat_vec(&v.0));
        image
            .into_iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(Element)
            .ok_or(Error::NonIntegralSerre)
    }

    /// `s - 1`.
    pub fn nilpotent_part(&self) -> RatMatrix {
        &self.serre - &RatMatrix::identity(self.rank())
    }

    /// `(s - 1)^n = 0`.
    pub fn is_unipotent(&self) -> bool {
        self.nilpotent_part().pow(self.rank() as u32).is_zero()
    }

    pub fn surface_type(&self) -> SurfaceType {
        if !self.is_unipotent() {
            return SurfaceType::NotSurface;
        }
        let n = self.nilpotent_part();
        if rank_rational(&n) > 2 {
            SurfaceType::NotSurface
        } else if (&n * &n).is_zero() {
            SurfaceType::Surface
        } else {
            SurfaceType::SurfaceStar
        }
    }

    /// The canonical filtration `F^1 = ker (s-1)^2`, `F^2 = im (s-1)^2`,
    /// saturated in `Z^n`. Only defined for surface* lattices.
    pub fn codim_filtration(&self) -> Result<CodimFiltration> {
        if self.surface_type() != SurfaceType::SurfaceStar {
            return Err(Error::NotSurfaceStar);
        }
        let n = self.nilpotent_part();
        let n2 = &n * &n;
        let f1 = saturate(&kernel_basis(&n2), self.rank())?;
        let image = (0..self.rank()).map(|j| n2.col(j)).find(|c| c.iter().any(|x| !x.is_zero()));
        let image = image.ok_or_else(|| Error::InternalInconsistency("(s-1)^2 vanishes".into()))?;
        let f2 = saturate(&[image], self.rank())?.remove(0);
        CodimFiltration::new(self, f1, f2)
    }

    /// A structure element: an element whose class generates `K / F^1 K`.
    ///
    /// Obtained from the unimodular completion of the primitive functional
    /// cutting out `F^1`, which is the same as completing the HNF basis of
    /// `F^1` to a basis of `Z^n`.
    pub fn structure_element(&self, filt: &CodimFiltration) -> Result<Element> {
        let (_, dual, _) = unimodular_completion(&filt.functional)
            .ok_or_else(|| Error::InternalInconsistency("rank functional not primitive".into()))?;
        Ok(Element(dual))
    }

    /// `omega~ = (s - 1) o`.
    pub fn canonical_element(&self, o: &Element) -> Result<Element> {
        Ok(&self.apply_serre(o)? - o)
    }

    /// `r(v)`: the coefficient of `o` in `v = r o + v^1`.
    pub fn rank_of(&self, filt: &CodimFiltration, o: &Element, v: &Element) -> Result<Integer> {
        self.check_len(v)?;
        let denom = filt.functional_value(o);
        if denom.abs() != Integer::one() {
            return Err(Error::InvalidFiltration("element is not a structure element".into()));
        }
        Ok(filt.functional_value(v) * denom)
    }

    /// `d(v) = -<v, omega~>`.
    pub fn degree_of(&self, filt: &CodimFiltration, o: &Element, v: &Element) -> Result<Integer> {
        let _ = self.rank_of(filt, o, o)?;
        let omega = self.canonical_element(o)?;
        Ok(-self.pairing(v, &omega)?)
    }

    /// The slope `eta_v`: image of `v^1 / r(v)` in `Num(K) ⊗ Q`, in the
    /// coordinates of [`NumLattice::basis`].
    pub fn slope(&self, filt: &CodimFiltration, o: &Element, v: &Element) -> Result<Vec<Rational>> {
        let r = self.rank_of(filt, o, v)?;
        if r.is_zero() {
            return Err(Error::ZeroRank);
        }
        let v1 = v - &o.scale(&r);
        let num = self.num_lattice(filt)?;
        let coords = num.coords(&v1)?;
        let r = Rational::from_integer(r);
        Ok(coords.into_iter().map(|c| c / &r).collect())
    }

    /// `Num(K) = F^1 K / F^2 K` with the intersection form `-<-,->`.
    pub fn num_lattice(&self, filt: &CodimFiltration) -> Result<NumLattice> {
        let p = filt.f2.clone();
        let c =
            coords_in_basis(&filt.f1, &p).ok_or_else(|| Error::InvalidFiltration("F^2 not contained in F^1".into()))?;
        if c.iter().any(|x| !x.is_integer()) {
            return Err(Error::InvalidFiltration("F^1 basis is not saturated".into()));
        }
        let c: Vec<Integer> = c.into_iter().map(|x| x.to_integer()).collect();
        let (completion, _, _) = unimodular_completion(&c)
            .ok_or_else(|| Error::InvalidFiltration("F^2 generator is not primitive in F^1".into()))?;
        let n = self.rank();
        let adapted = &completion * &IntMatrix::from_rows(filt.f1.clone())?;
        let basis: Vec<Element> = (1..adapted.rows()).map(|i| Element(adapted.row(i).to_vec())).collect();
        let k = basis.len();
        let intersection_gram = IntMatrix::from_fn(k, k, |i, j| -self.pair(&basis[i], &basis[j]));
        debug_assert_eq!(k + 2, n);
        Ok(NumLattice { basis, f2: Element(p), intersection_gram })
    }

    /// `delta_F = (omega, omega)` computed with the given filtration.
    pub fn degree_with(&self, filt: &CodimFiltration) -> Result<Integer> {
        let o = self.structure_element(filt)?;
        let omega = self.canonical_element(&o)?;
        Ok(-self.pair(&omega, &omega))
    }

    /// The degree `delta(K)`: `(omega, omega)` for surface* lattices, zero
    /// for lattices of plain surface type.
    pub fn degree(&self) -> Result<Integer> {
        match self.surface_type() {
            SurfaceType::NotSurface => Err(Error::NotSurface),
            SurfaceType::Surface => Ok(Integer::zero()),
            SurfaceType::SurfaceStar => self.degree_with(&self.codim_filtration()?),
        }
    }

    /// Filtration, structure element and canonical element bundled together.
    pub fn surface_structure(&self) -> Result<SurfaceStructure> {
        let filt = self.codim_filtration()?;
        SurfaceStructure::new(self, filt)
    }
}

/// A three-step filtration `Z^n ⊃ F^1 ⊃ F^2 ⊃ 0` given by saturated bases.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CodimFiltration {
    f1: Vec<Vec<Integer>>,
    f2: Vec<Integer>,
    /// Primitive functional whose kernel is `F^1`.
    functional: Vec<Integer>,
}

impl CodimFiltration {
    /// Validates the three codimension-filtration conditions against `lattice`.
    pub fn new(lattice: &SerreLattice, f1: Vec<Vec<Integer>>, f2: Vec<Integer>) -> Result<Self> {
        let n = lattice.rank();
        if f1.len() + 1 != n {
            return Err(Error::InvalidFiltration(format!("F^1 has rank {}, expected {}", f1.len(), n - 1)));
        }
        if f2.len() != n || f2.iter().all(Zero::is_zero) {
            return Err(Error::InvalidFiltration("F^2 must be a nonzero vector".into()));
        }
        let f1 = saturate(&f1.iter().map(|v| rat_vec(v)).collect::<Vec<_>>(), n)
            .map_err(|_| Error::InvalidFiltration("F^1 basis is dependent".into()))?;
        let f2 = saturate(&[rat_vec(&f2)], n)?.remove(0);
        let mut functional = integer_kernel(&IntMatrix::from_rows(f1.clone())?);
        if functional.len() != 1 {
            return Err(Error::InvalidFiltration("F^1 is not a hyperplane".into()));
        }
        let functional = functional.remove(0);
        let filt = Self { f1, f2, functional };
        filt.validate(lattice)?;
        Ok(filt)
    }

    fn validate(&self, lattice: &SerreLattice) -> Result<()> {
        let n = lattice.rank();
        let nil = lattice.nilpotent_part();
        if !self.contains_f1(&self.f2) {
            return Err(Error::InvalidFiltration("F^2 not contained in F^1".into()));
        }
        // (s-1) F^0 ⊆ F^1  <=>  phi (s-1) = 0
        let phi = rat_vec(&self.functional);
        for j in 0..n {
            if !dot(&phi, &nil.col(j)).is_zero() {
                return Err(Error::InvalidFiltration("(s-1)F^0 not in F^1".into()));
            }
        }
        for v in &self.f1 {
            let image = nil.mul_vec(&rat_vec(v));
            if !self.rational_in_f2(&image) {
                return Err(Error::InvalidFiltration("(s-1)F^1 not in F^2".into()));
            }
        }
        if !nil.mul_vec(&rat_vec(&self.f2)).iter().all(Zero::is_zero) {
            return Err(Error::InvalidFiltration("(s-1)F^2 != 0".into()));
        }
        let p = Element(self.f2.clone());
        for v in &self.f1 {
            if !lattice.pair(&Element(v.clone()), &p).is_zero() {
                return Err(Error::InvalidFiltration("<F^1, F^2> != 0".into()));
            }
        }
        Ok(())
    }

    pub fn f1(&self) -> &[Vec<Integer>] {
        &self.f1
    }

    pub fn f2(&self) -> &[Integer] {
        &self.f2
    }

    /// The primitive functional cutting out `F^1` (first nonzero entry positive).
    pub fn rank_functional(&self) -> &[Integer] {
        &self.functional
    }

    pub(crate) fn functional_value(&self, v: &Element) -> Integer {
        dot(&self.functional, &v.0)
    }

    pub fn contains_f1(&self, v: &[Integer]) -> bool {
        dot(&self.functional, v).is_zero()
    }

    pub fn contains_f2(&self, v: &[Integer]) -> bool {
        self.rational_in_f2(&rat_vec(v))
    }

    fn rational_in_f2(&self, v: &[Rational]) -> bool {
        // v is parallel to f2
        let p = rat_vec(&self.f2);
        (0..v.len()).all(|i| (0..v.len()).all(|j| &v[i] * &p[j] == &v[j] * &p[i]))
    }
}

/// `Num(K) = F^1 K / F^2 K`, represented by `n - 2` elements of `F^1 K`
/// that together with the generator of `F^2 K` form a basis of `F^1 K`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NumLattice {
    pub basis: Vec<Element>,
    pub f2: Element,
    /// Symmetric intersection form `(x, y) = -<x, y>` on `basis`.
    pub intersection_gram: IntMatrix,
}

impl NumLattice {
    /// Coordinates of the image of `v ∈ F^1` in `basis`.
    pub fn coords(&self, v: &Element) -> Result<Vec<Rational>> {
        let mut full: Vec<Vec<Integer>> = self.basis.iter().map(|b| b.0.clone()).collect();
        full.push(self.f2.0.clone());
        let c = coords_in_basis(&full, &v.0).ok_or_else(|| Error::NotInFiltration("element is not in F^1".into()))?;
        Ok(c[..self.basis.len()].to_vec())
    }

    /// `(x, y)` for coordinate vectors in `basis`.
    pub fn intersect(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let g = self.intersection_gram.to_rational();
        g.bilinear(x, y)
    }
}

/// Filtration plus a fixed structure element `o` and canonical element
/// `omega~ = (s - 1) o`; gives the rank and degree functions.
#[derive(Clone, Debug)]
pub struct SurfaceStructure {
    pub filt: CodimFiltration,
    pub o: Element,
    pub omega: Element,
}

impl SurfaceStructure {
    pub fn new(lattice: &SerreLattice, filt: CodimFiltration) -> Result<Self> {
        let o = lattice.structure_element(&filt)?;
        let omega = lattice.canonical_element(&o)?;
        Ok(Self { filt, o, omega })
    }

    /// `r(v)`; `o` satisfies `phi(o) = 1`, so this is just the functional.
    pub fn rank_of(&self, v: &Element) -> Integer {
        self.filt.functional_value(v)
    }

    pub fn degree_of(&self, lattice: &SerreLattice, v: &Element) -> Integer {
        -lattice.pair(v, &self.omega)
    }
}

/// Off-diagonal entries above the diagonal, row by row.
pub(crate) fn upper_entries(m: &IntMatrix) -> Vec<Integer> {
    let n = m.rows();
    let mut out = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(m[(i, j)].clone());
        }
    }
    out
}

/// Inverse of an upper unitriangular integer matrix by back-substitution.
fn unitriangular_inverse(m: &IntMatrix) -> IntMatrix {
    let n = m.rows();
    let mut inv = IntMatrix::identity(n);
    for j in 0..n {
        for i in (0..j).rev() {
            let mut acc = Integer::zero();
            for k in i + 1..=j {
                acc += &m[(i, k)] * &inv[(k, j)];
            }
            inv[(i, j)] = -acc;
        }
    }
    inv
}

/// The Gram matrix of an exceptional basis: upper unitriangular.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GramMatrix {
    lattice: SerreLattice,
    serre: IntMatrix,
}

impl GramMatrix {
    pub fn new(m: IntMatrix) -> Result<Self> {
        m.require_square()?;
        let n = m.rows();
        for i in 0..n {
            if !m[(i, i)].is_one() || (0..i).any(|j| !m[(i, j)].is_zero()) {
                return Err(Error::NotExceptional);
            }
        }
        let serre = &unitriangular_inverse(&m) * &m.transpose();
        let lattice = SerreLattice { serre: serre.to_rational(), gram: m };
        Ok(Self { lattice, serre })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(IntMatrix::from_i64(rows)?)
    }

    /// Builds the rank-`n` Gram matrix from its upper off-diagonal entries,
    /// row by row (`(a, b, c)` at rank 3, `(a, b, c, d, e, f)` at rank 4).
    pub fn from_upper(n: usize, upper: &[Integer]) -> Result<Self> {
        let expected = n * n.saturating_sub(1) / 2;
        if upper.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: upper.len() });
        }
        let mut m = IntMatrix::identity(n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                m[(i, j)] = it.next().expect("length checked").clone();
            }
        }
        Self::new(m)
    }

    pub fn from_upper_i64(n: usize, upper: &[i64]) -> Result<Self> {
        Self::from_upper(n, &upper.iter().map(|&x| Integer::from(x)).collect::<Vec<_>>())
    }

    pub fn identity(n: usize) -> Self {
        Self::new(IntMatrix::identity(n)).expect("identity is exceptional")
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn matrix(&self) -> &IntMatrix {
        self.lattice.gram()
    }

    pub fn lattice(&self) -> &SerreLattice {
        &self.lattice
    }

    pub fn into_lattice(self) -> SerreLattice {
        self.lattice
    }

    /// `s`, which is integral for exceptional Gram matrices.
    pub fn serre(&self) -> &IntMatrix {
        &self.serre
    }

    /// Entry `(i, j)`, 0-based.
    pub fn entry(&self, i: usize, j: usize) -> &Integer {
        &self.matrix()[(i, j)]
    }

    pub fn upper(&self) -> Vec<Integer> {
        upper_entries(self.matrix())
    }

    pub fn is_identity(&self) -> bool {
        self.matrix().is_identity()
    }
}

impl fmt::Display for GramMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.matrix().fmt(f)
    }
}

/// Hermite normal form basis of a sublattice spanned by `vectors`.
pub fn lattice_basis(vectors: &[Element]) -> Vec<Element> {
    hnf_rows(&vectors.iter().map(|v| v.0.clone()).collect::<Vec<_>>()).into_iter().map(Element).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> GramMatrix {
        GramMatrix::from_upper_i64(3, &[3, 3, 3]).unwrap()
    }

    fn quadric() -> GramMatrix {
        GramMatrix::from_upper_i64(4, &[2, 2, 4, 0, 2, 2]).unwrap()
    }

    fn kn(n: i64) -> GramMatrix {
        GramMatrix::from_upper_i64(4, &[n, 2 * n, n, 3, 3, 3]).unwrap()
    }

    fn e(n: usize, i: usize) -> Element {
        Element::basis(n, i)
    }

    #[test]
    fn pairing_examples() {
        let q = quadric();
        assert_eq!(q.lattice().pairing(&e(4, 0), &e(4, 3)).unwrap(), 4.into());
        for i in 0..4 {
            assert_eq!(q.lattice().pairing(&e(4, i), &e(4, i)).unwrap(), 1.into());
        }
        assert_eq!(p2().lattice().pairing(&e(3, 1), &e(3, 0)).unwrap(), 0.into());
        assert!(q.lattice().pairing(&e(3, 0), &e(4, 0)).is_err());
    }

    #[test]
    fn serre_operator_examples() {
        assert!(GramMatrix::identity(4).serre().is_identity());
        let s = p2().serre().clone();
        let nil = &s - &IntMatrix::identity(3);
        assert!(nil.pow(3).is_zero());
        let s = quadric().serre().clone();
        let nil = &s - &IntMatrix::identity(4);
        assert!(nil.pow(3).is_zero());
        assert_eq!(rank_rational(&nil.to_rational()), 2);
    }

    #[test]
    fn unipotency_examples() {
        assert!(p2().lattice().is_unipotent());
        assert!(GramMatrix::identity(3).lattice().is_unipotent());
        assert!(!GramMatrix::from_upper_i64(3, &[1, 0, 0]).unwrap().lattice().is_unipotent());
    }

    #[test]
    fn surface_types() {
        assert_eq!(quadric().lattice().surface_type(), SurfaceType::SurfaceStar);
        assert_eq!(GramMatrix::identity(4).lattice().surface_type(), SurfaceType::Surface);
        assert_eq!(kn(3).lattice().surface_type(), SurfaceType::Surface);
        let bad = GramMatrix::from_upper_i64(3, &[1, 0, 0]).unwrap();
        assert_eq!(bad.lattice().surface_type(), SurfaceType::NotSurface);
    }

    #[test]
    fn filtration_shapes() {
        for g in [p2(), kn(1), quadric()] {
            let n = g.rank();
            let filt = g.lattice().codim_filtration().unwrap();
            assert_eq!(filt.f1().len(), n - 1);
            assert!(filt.contains_f1(filt.f2()));
        }
        assert_eq!(kn(3).lattice().codim_filtration(), Err(Error::NotSurfaceStar));
    }

    #[test]
    fn p2_point_class_pairs_as_ranks() {
        let g = p2();
        let filt = g.lattice().codim_filtration().unwrap();
        let p = Element(filt.f2().to_vec());
        let row: Vec<Integer> = (0..3).map(|j| g.lattice().pair(&p, &e(3, j))).collect();
        let row_abs: Vec<Integer> = row.iter().map(Signed::abs).collect();
        assert_eq!(row_abs, crate::linalg::int_vec(&[1, 2, 1]));
    }

    #[test]
    fn structure_element_generates_quotient() {
        let g = p2();
        let st = g.lattice().surface_structure().unwrap();
        assert_eq!(st.rank_of(&st.o), Integer::one());
        assert!(g.lattice().pair(&st.o, &st.omega).is_zero());
        assert!(!st.omega.is_zero());
        // the standard basis vector e3 = [O] is also a structure element
        assert_eq!(st.rank_of(&e(3, 2)).abs(), Integer::one());
        let k2 = kn(2);
        let st = k2.lattice().surface_structure().unwrap();
        assert_eq!(k2.lattice().rank_of(&st.filt, &st.o, &st.o).unwrap().abs(), Integer::one());
    }

    #[test]
    fn identity_has_zero_canonical_element() {
        let g = GramMatrix::identity(3);
        assert!(g.lattice().canonical_element(&e(3, 0)).unwrap().is_zero());
    }

    #[test]
    fn degrees() {
        assert_eq!(quadric().lattice().degree().unwrap(), 8.into());
        for n in 0..6 {
            assert_eq!(kn(n).lattice().degree().unwrap(), (9 - n * n).into());
        }
        assert_eq!(p2().lattice().degree().unwrap(), 9.into());
        let bad = GramMatrix::from_upper_i64(3, &[1, 0, 0]).unwrap();
        assert_eq!(bad.lattice().degree(), Err(Error::NotSurface));
    }

    #[test]
    fn rank_degree_functions() {
        let g = p2();
        let l = g.lattice();
        let st = l.surface_structure().unwrap();
        assert_eq!(l.rank_of(&st.filt, &st.o, &st.o).unwrap(), 1.into());
        assert_eq!(l.degree_of(&st.filt, &st.o, &st.o).unwrap(), 0.into());
        let v = &e(3, 2) - &e(3, 1);
        let v = &v - &st.o.scale(&st.rank_of(&v));
        assert_eq!(st.rank_of(&v), 0.into());
        assert_eq!(l.degree_of(&st.filt, &st.o, &v).unwrap(), -l.pair(&v, &st.omega));
    }

    #[test]
    fn slopes() {
        let g = quadric();
        let l = g.lattice();
        let st = l.surface_structure().unwrap();
        assert!(l.slope(&st.filt, &st.o, &st.o).unwrap().iter().all(Zero::is_zero));
        let num = l.num_lattice(&st.filt).unwrap();
        let w = &num.basis[0];
        let v = &st.o.scale(&2.into()) + w;
        let slope = l.slope(&st.filt, &st.o, &v).unwrap();
        assert_eq!(slope, vec![Rational::new(1.into(), 2.into()), Rational::zero()]);
        assert_eq!(l.slope(&st.filt, &st.o, w), Err(Error::ZeroRank));
    }

    #[test]
    fn num_lattice_is_symmetric_nondegenerate() {
        for g in [quadric(), kn(1), kn(2), p2()] {
            let l = g.lattice();
            let filt = l.codim_filtration().unwrap();
            let num = l.num_lattice(&filt).unwrap();
            let ig = &num.intersection_gram;
            assert_eq!(*ig, ig.transpose());
            assert!(!det(ig).unwrap().is_zero());
        }
    }

    #[test]
    fn antisymmetrization_examples() {
        let g = kn(2);
        let l = g.lattice();
        let st = l.surface_structure().unwrap();
        assert!(l.antisym(&st.o, &st.o).unwrap().is_zero());
        let num = l.num_lattice(&st.filt).unwrap();
        let (a, b) = (&num.basis[0], &num.basis[1]);
        assert!(l.antisym(a, b).unwrap().is_zero());
        assert_eq!(l.antisym(&st.o, a).unwrap(), -st.degree_of(l, a));
    }

    #[test]
    fn rejects_non_exceptional() {
        assert_eq!(GramMatrix::from_i64(&[&[1, 0], &[1, 1]]), Err(Error::NotExceptional));
        assert_eq!(GramMatrix::from_i64(&[&[2, 0], &[0, 1]]), Err(Error::NotExceptional));
        assert!(SerreLattice::new(IntMatrix::from_i64(&[&[1, 1], &[1, 1]]).unwrap()).is_err());
    }
}
