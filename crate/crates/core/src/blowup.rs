//! Numerical blowup and blowdown of Serre lattices carrying a codimension
//! filtration, and the lattices `K_n` obtained by blowing up the lattice of
//! the projective plane at `n` times the point class.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{CodimFiltration, Element, GramMatrix, SerreLattice, SurfaceType};
use crate::linalg::{coords_in_basis, dot, integer_kernel, IntMatrix, Integer};

/// A Serre lattice of surface type together with a chosen codimension
/// filtration.
#[derive(Clone, Debug)]
pub struct FilteredLattice {
    pub lattice: SerreLattice,
    pub filt: CodimFiltration,
}

impl FilteredLattice {
    pub fn new(lattice: SerreLattice, f1: Vec<Vec<Integer>>, f2: Vec<Integer>) -> Result<Self> {
        if lattice.surface_type() == SurfaceType::NotSurface {
            return Err(Error::NotSurface);
        }
        let filt = CodimFiltration::new(&lattice, f1, f2)?;
        Ok(Self { lattice, filt })
    }

    /// The unique filtration of a surface* lattice.
    pub fn canonical(lattice: SerreLattice) -> Result<Self> {
        let filt = lattice.codim_filtration()?;
        Ok(Self { lattice, filt })
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// `δ_F`.
    pub fn degree(&self) -> Result<Integer> {
        self.lattice.degree_with(&self.filt)
    }

    /// The generator of `F^2 K`.
    pub fn point_class(&self) -> Element {
        Element(self.filt.f2().to_vec())
    }

    /// `⟨o, z⟩` for the structure element fixed by the filtration.
    pub fn structure_pairing(&self, z: &Element) -> Result<Integer> {
        let o = self.lattice.structure_element(&self.filt)?;
        self.lattice.pairing(&o, z)
    }
}

/// Blows up `fl` at `z ∈ F^2 K`.
///
/// The result lives on `Z f ⊕ K` with coordinates `(f, y)`, so that when
/// the standard basis of `K` is exceptional with Gram `M`, the standard basis
/// of the result is `(f, e_1, …, e_n)` with the Gram matrix `M` bordered by
/// the row `(1, ⟨z, e_1⟩, …, ⟨z, e_n⟩)`.
pub fn blowup(fl: &FilteredLattice, z: &Element) -> Result<FilteredLattice> {
    let n = fl.rank();
    if z.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: z.len() });
    }
    if !z.is_zero() && !fl.filt.contains_f2(z.coords()) {
        return Err(Error::NotInFiltration(format!("{z} is not in F^2")));
    }
    let m = fl.lattice.gram();
    let row: Vec<Integer> = (0..n).map(|j| dot(z.coords(), &m.col(j))).collect();
    let gram = IntMatrix::from_fn(n + 1, n + 1, |i, j| match (i, j) {
        (0, 0) => Integer::one(),
        (0, j) => row[j - 1].clone(),
        (_, 0) => Integer::zero(),
        (i, j) => m[(i - 1, j - 1)].clone(),
    });
    let lift = |v: &[Integer]| -> Vec<Integer> { std::iter::once(Integer::zero()).chain(v.iter().cloned()).collect() };
    let mut f1: Vec<Vec<Integer>> = vec![Element::basis(n + 1, 0).0];
    f1.extend(fl.filt.f1().iter().map(|v| lift(v)));
    let f2 = lift(fl.filt.f2());
    let lattice = SerreLattice::new(gram)?;
    let filt = CodimFiltration::new(&lattice, f1, f2)?;
    Ok(FilteredLattice { lattice, filt })
}

/// Output of [`blowdown`].
#[derive(Clone, Debug)]
pub struct Blowdown {
    /// `K̄ = {y : ⟨y, f⟩ = 0}` in the coordinates of `basis`.
    pub lattice: FilteredLattice,
    /// The basis of `K̄`, in ambient coordinates.
    pub basis: Vec<Element>,
    /// `z = (s − 1) f`, in the coordinates of `basis`.
    pub z: Element,
    /// `z` in ambient coordinates.
    pub z_ambient: Element,
}

/// Blows down `fl` along an exceptional `f ∈ F^1 K`.
pub fn blowdown(fl: &FilteredLattice, f: &Element) -> Result<Blowdown> {
    let l = &fl.lattice;
    let ff = l.pairing(f, f)?;
    if !ff.is_one() {
        return Err(Error::NotExceptionalBasis(format!("<f, f> = {ff}, expected 1")));
    }
    if !fl.filt.contains_f1(f.coords()) {
        return Err(Error::NotInFiltration(format!("{f} is not in F^1")));
    }
    // y ↦ ⟨y, f⟩ = y · (M f)
    let functional = l.gram().mul_vec(f.coords());
    let basis: Vec<Element> =
        integer_kernel(&IntMatrix::from_rows(vec![functional])?).into_iter().map(Element).collect();
    let rows: Vec<Vec<Integer>> = basis.iter().map(|b| b.0.clone()).collect();
    let coords = |v: &Element| -> Result<Element> {
        let c = coords_in_basis(&rows, v.coords())
            .ok_or_else(|| Error::InternalInconsistency(format!("{v} not in the orthogonal of f")))?;
        c.into_iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(Element)
            .ok_or_else(|| Error::InternalInconsistency("orthogonal basis is not saturated".into()))
    };
    let k = basis.len();
    let gram = IntMatrix::from_fn(k, k, |i, j| l.pair(&basis[i], &basis[j]));
    let small = SerreLattice::new(gram)?;
    let phi = fl.filt.rank_functional();
    let phi_row: Vec<Integer> = basis.iter().map(|b| dot(phi, b.coords())).collect();
    let f1 = integer_kernel(&IntMatrix::from_rows(vec![phi_row])?);
    let f2 = coords(&fl.point_class())?;
    let z_ambient = &l.apply_serre(f)? - f;
    let z = coords(&z_ambient)?;
    let filt = CodimFiltration::new(&small, f1, f2.0)?;
    Ok(Blowdown { lattice: FilteredLattice { lattice: small, filt }, basis, z, z_ambient })
}

/// `[[1, n, 2n, n], [0, 1, 3, 3], [0, 0, 1, 3], [0, 0, 0, 1]]`.
pub fn build_kn(n: &Integer) -> Result<GramMatrix> {
    if n.is_negative() {
        return Err(Error::NegativeParameter(n.to_string()));
    }
    let three = Integer::from(3);
    let upper = [n.clone(), n * 2, n.clone(), three.clone(), three.clone(), three];
    GramMatrix::from_upper(4, &upper)
}

/// The lattice of the projective plane with its standard exceptional basis
/// and canonical filtration.
pub fn p2() -> FilteredLattice {
    let g = GramMatrix::from_upper_i64(3, &[3, 3, 3]).expect("exceptional");
    FilteredLattice::canonical(g.into_lattice()).expect("surface* lattice")
}

/// The generator `p` of `F^2` of the plane, signed so that
/// `⟨p, e_j⟩ = (1, 2, 1)`.
pub fn p2_point_class() -> Element {
    let fl = p2();
    let p = fl.point_class();
    if fl.lattice.pair(&p, &Element::basis(3, 0)).is_negative() {
        -&p
    } else {
        p
    }
}
