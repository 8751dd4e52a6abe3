//! Divisible torsion groups of the shape (Q/Z)^r plus a finite part.
//!
//! These house the values A_Γ ⊗ Q/Z: the divisible rank is the free rank
//! of the coinvariants and elements are rational vectors taken modulo Z.

use crate::abelian::{AbHom, FinAbGroup};
use crate::matrix::{kernel_basis, same_lattice, smith_normal_form, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

#[derive(Clone)]
pub struct QZModule {
    pub divisible_rank: usize,
    pub finite: Arc<FinAbGroup>,
}

impl fmt::Display for QZModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.divisible_rank, self.finite.is_trivial()) {
            (0, true) => write!(f, "0"),
            (0, false) => write!(f, "{}", self.finite),
            (1, true) => write!(f, "Q/Z"),
            (r, true) => write!(f, "(Q/Z)^{}", r),
            (1, false) => write!(f, "Q/Z + {}", self.finite),
            (r, false) => write!(f, "(Q/Z)^{} + {}", r, self.finite),
        }
    }
}

impl QZModule {
    pub fn trivial() -> Self {
        QZModule { divisible_rank: 0, finite: Arc::new(FinAbGroup::trivial()) }
    }

    pub fn divisible(rank: usize) -> Self {
        QZModule { divisible_rank: rank, finite: Arc::new(FinAbGroup::trivial()) }
    }

    pub fn is_trivial(&self) -> bool {
        self.divisible_rank == 0 && self.finite.is_trivial()
    }

    pub fn zero_element(&self) -> QZElement {
        QZElement {
            rational: vec![BigRational::zero(); self.divisible_rank],
            finite: self.finite.zero(),
        }
    }

    pub fn reduce(&self, e: &QZElement) -> QZElement {
        QZElement {
            rational: e.rational.iter().map(frac_mod_one).collect(),
            finite: self.finite.reduce(&e.finite),
        }
    }

    pub fn elements_equal(&self, a: &QZElement, b: &QZElement) -> bool {
        let ra = self.reduce(a);
        let rb = self.reduce(b);
        ra.rational == rb.rational && ra.finite == rb.finite
    }

    /// Order of an element: lcm of coordinate denominators and finite order.
    pub fn element_order(&self, e: &QZElement) -> BigInt {
        let mut ord = BigInt::one();
        for q in &e.rational {
            ord = ord.lcm(frac_mod_one(q).denom());
        }
        if let Some(o) = self.finite.element_order(&e.finite) {
            ord = ord.lcm(&o);
        }
        ord
    }
}

/// An element: rational coordinates modulo Z plus a finite-part element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QZElement {
    pub rational: Vec<BigRational>,
    pub finite: Vec<BigInt>,
}

pub fn frac_mod_one(q: &BigRational) -> BigRational {
    let f = q.fract();
    if f.is_negative() { f + BigRational::one() } else { f }
}

/// A ⊗ Q/Z: torsion dies, so only the free rank survives.
pub fn qz_tensor(a: &FinAbGroup) -> QZModule {
    QZModule::divisible(a.free_rank())
}

/// Kernel of the map (Q/Z)^r → (Q/Z)^s induced by an integer matrix:
/// divisible rank is the nullity over Q and the finite invariant factors
/// are the nontrivial elementary divisors.
pub fn qz_hom_kernel(f: &IntMatrix) -> QZModule {
    let snf = smith_normal_form(f);
    let diag = snf.diagonal();
    let nullity = f.cols() - diag.iter().filter(|d| !d.is_zero()).count();
    let factors: Vec<BigInt> = diag.into_iter().filter(|d| !d.is_zero() && !d.is_one()).collect();
    QZModule {
        divisible_rank: nullity,
        finite: Arc::new(FinAbGroup::from_invariant_factors(&factors)),
    }
}

/// A homomorphism A → (Q/Z)^r given by a rational matrix taken modulo Z.
/// Well-definedness (relators map into Z^r) is checked at construction.
#[derive(Clone)]
pub struct QZMap {
    pub source: Arc<FinAbGroup>,
    pub target_rank: usize,
    /// target_rank × source.ngens rational entries.
    pub entries: Vec<Vec<BigRational>>,
}

impl QZMap {
    pub fn new(
        source: Arc<FinAbGroup>,
        target_rank: usize,
        entries: Vec<Vec<BigRational>>,
    ) -> crate::Result<Self> {
        assert_eq!(entries.len(), target_rank);
        for row in &entries {
            assert_eq!(row.len(), source.ngens());
        }
        let m = QZMap { source, target_rank, entries };
        for rel in m.source.relations().columns() {
            if !m.apply(&rel).iter().all(|q| frac_mod_one(q).is_zero()) {
                return Err(crate::Error::IllDefinedHom);
            }
        }
        Ok(m)
    }

    pub fn zero(source: Arc<FinAbGroup>, target_rank: usize) -> Self {
        let n = source.ngens();
        QZMap { source, target_rank, entries: vec![vec![BigRational::zero(); n]; target_rank] }
    }

    pub fn apply(&self, coords: &[BigInt]) -> Vec<BigRational> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(coords)
                    .map(|(q, c)| q * BigRational::from(c.clone()))
                    .fold(BigRational::zero(), |a, b| a + b)
            })
            .map(|q| frac_mod_one(&q))
            .collect()
    }

    /// Common denominator of all entries.
    pub fn denominator(&self) -> BigInt {
        let mut d = BigInt::one();
        for row in &self.entries {
            for q in row {
                d = d.lcm(q.denom());
            }
        }
        d
    }

    /// Integer matrix P with entries = denominator * entries.
    pub fn cleared(&self) -> (IntMatrix, BigInt) {
        let d = self.denominator();
        let m = IntMatrix::from_fn(self.target_rank, self.source.ngens(), |i, j| {
            let q = &self.entries[i][j] * BigRational::from(d.clone());
            assert!(q.is_integer());
            q.to_integer()
        });
        (m, d)
    }

    /// Kernel sublattice of Z^{source.ngens}: {x : map(x) ∈ Z^r}.
    pub fn kernel_lattice(&self) -> IntMatrix {
        let (p, d) = self.cleared();
        // {x : P x ≡ 0 mod d} plus the source relations.
        let dmat = IntMatrix::identity(self.target_rank).scale(&d);
        crate::matrix::congruence_kernel(&p, &dmat).hstack(self.source.relations())
    }

    /// Image of the map as a sublattice of (1/D)Z^r containing Z^r,
    /// returned as integer columns after scaling by D.
    pub fn image_lattice_scaled(&self, scale: &BigInt) -> IntMatrix {
        let (p, d) = self.cleared();
        assert!((scale % &d).is_zero(), "scale must clear all denominators");
        let factor = scale / &d;
        let img = p.scale(&factor);
        img.hstack(&IntMatrix::identity(self.target_rank).scale(scale))
    }

    /// Composition with an integer-matrix map (Q/Z)^r → (Q/Z)^s.
    pub fn then_integer(&self, m: &IntMatrix) -> QZMap {
        assert_eq!(m.cols(), self.target_rank);
        let entries = (0..m.rows())
            .map(|i| {
                (0..self.source.ngens())
                    .map(|j| {
                        (0..self.target_rank)
                            .map(|k| BigRational::from(m.at(i, k).clone()) * &self.entries[k][j])
                            .fold(BigRational::zero(), |a, b| a + b)
                    })
                    .collect()
            })
            .collect();
        QZMap { source: self.source.clone(), target_rank: m.rows(), entries }
    }

    /// Precomposition with a hom of presented groups.
    pub fn precompose(&self, f: &AbHom) -> QZMap {
        assert_eq!(f.target().ngens(), self.source.ngens());
        let entries = (0..self.target_rank)
            .map(|i| {
                (0..f.source().ngens())
                    .map(|j| {
                        (0..self.source.ngens())
                            .map(|k| {
                                &self.entries[i][k]
                                    * BigRational::from(f.matrix().at(k, j).clone())
                            })
                            .fold(BigRational::zero(), |a, b| a + b)
                    })
                    .collect()
            })
            .collect();
        QZMap { source: f.source().clone(), target_rank: self.target_rank, entries }
    }
}

/// Exactness of  X --q--> (Q/Z)^r --F--> (Q/Z)^s  at the middle node:
/// ker F must have no divisible part and must equal the image of q.
pub fn exact_at_qz_node(q: &QZMap, f: &IntMatrix) -> bool {
    assert_eq!(f.cols(), q.target_rank);
    if !kernel_basis(f).is_zero() && kernel_basis(f).cols() > 0 {
        return false;
    }
    // Λ_F = {x ∈ Q^r : F x ∈ Z^s}; scale both lattices by a common D.
    let snf = smith_normal_form(f);
    let diag = snf.diagonal();
    let mut d0 = BigInt::one();
    for d in &diag {
        if !d.is_zero() {
            d0 = d0.lcm(d);
        }
    }
    let d_all = d0.lcm(&q.denominator());
    // Λ_F basis columns: v_i * (D/d_i) for pivot columns (d_i ≠ 0), after
    // scaling by D; nullity columns are excluded (checked empty above).
    let mut cols = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        if !d.is_zero() {
            let c = snf.v.column(i);
            let k = &d_all / d;
            cols.push(c.iter().map(|x| x * &k).collect());
        }
    }
    let lam = IntMatrix::from_columns(q.target_rank, &cols)
        .hstack(&IntMatrix::identity(q.target_rank).scale(&d_all));
    let img = q.image_lattice_scaled(&d_all);
    same_lattice(&lam, &img)
}

/// Exactness of (Q/Z)^a --F--> (Q/Z)^b --G--> (Q/Z)^c --> 0 at b and c,
/// via Pontryagin duality: the transposed integer sequence
/// 0 → Z^c → Z^b → Z^a must be exact.
pub fn exact_qz_tail(f: &IntMatrix, g: &IntMatrix) -> bool {
    let ft = f.transpose();
    let gt = g.transpose();
    // surjectivity of G  <=>  Gᵗ injective
    if kernel_basis(&gt).cols() > 0 {
        return false;
    }
    // exactness at b  <=>  ker Fᵗ = im Gᵗ as sublattices of Z^b
    same_lattice(&kernel_basis(&ft), &gt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_examples() {
        assert_eq!(qz_tensor(&FinAbGroup::free(1)).divisible_rank, 1);
        assert!(qz_tensor(&FinAbGroup::cyclic(8)).is_trivial());
        let g = FinAbGroup::from_invariant_factors(&[
            BigInt::zero(),
            BigInt::zero(),
            BigInt::from(3),
        ]);
        assert_eq!(qz_tensor(&g).divisible_rank, 2);
    }

    #[test]
    fn tensor_ignores_torsion() {
        // qz_tensor(A) = qz_tensor(A/torsion)
        let a = FinAbGroup::new(
            3,
            IntMatrix::from_rows(&[&[2, 0], &[0, 6], &[0, 0]]),
        );
        let tf = FinAbGroup::free(a.free_rank());
        assert_eq!(qz_tensor(&a).divisible_rank, qz_tensor(&tf).divisible_rank);
    }

    #[test]
    fn hom_kernel_examples() {
        // x2 : Q/Z -> Q/Z
        let k = qz_hom_kernel(&IntMatrix::from_rows(&[&[2]]));
        assert_eq!(k.divisible_rank, 0);
        assert_eq!(k.finite.invariant_factors(), vec![BigInt::from(2)]);
        // zero map Q/Z -> Q/Z
        let k = qz_hom_kernel(&IntMatrix::from_rows(&[&[0]]));
        assert_eq!(k.divisible_rank, 1);
        assert!(k.finite.is_trivial());
        // (2 3) : (Q/Z)^2 -> Q/Z: Smith form (1 0)
        let k = qz_hom_kernel(&IntMatrix::from_rows(&[&[2, 3]]));
        assert_eq!(k.divisible_rank, 1);
        assert!(k.finite.is_trivial());
    }

    #[test]
    fn qz_map_well_defined() {
        use std::sync::Arc;
        let z2 = Arc::new(FinAbGroup::cyclic(2));
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        assert!(QZMap::new(z2.clone(), 1, vec![vec![half]]).is_ok());
        let third = BigRational::new(BigInt::one(), BigInt::from(3));
        assert!(QZMap::new(z2, 1, vec![vec![third]]).is_err());
    }

    #[test]
    fn element_order_mixed() {
        let m = QZModule { divisible_rank: 1, finite: Arc::new(FinAbGroup::cyclic(4)) };
        let e = QZElement {
            rational: vec![BigRational::new(BigInt::one(), BigInt::from(3))],
            finite: vec![BigInt::from(2)],
        };
        assert_eq!(m.element_order(&e), BigInt::from(6));
    }
}
