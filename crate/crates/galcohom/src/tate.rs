//! Tate cohomology of modules and bounded complexes via the standard
//! resolution.
//!
//! The degree-n cochain group of a complex A is
//!     C^n(Γ,A) = ⊕_k Hom_{Z[Γ]}(P_{n−k}, A^k),
//! a direct sum of copies of the A^k indexed by resolution basis tuples.
//! With the sign-modified resolution differential ∂̃_m = (−1)^{m+1}∂_m the
//! hyperdifferential collapses to
//!     (dc)^k = f^{k−1}∘c^{k−1} + (−1)^n c^k∘∂_{n+1−k},
//! one global sign per degree.

use crate::abelian::{AbHom, FinAbGroup, Subquotient};
use crate::complex::BoundedComplex;
use crate::gmodule::GammaModule;
use crate::matrix::IntMatrix;
use crate::resolution::StandardResolution;
use crate::Result;
use num_bigint::BigInt;
use num_traits::Zero;
use std::sync::Arc;

pub const DEFAULT_DEPTH: i64 = 4;

/// Layout of C^n(Γ,A): one block per complex degree k.
pub struct CochainLayout {
    pub degree: i64,
    /// (complex degree k, basis tuple count, module gens, coordinate offset)
    pub blocks: Vec<(i64, usize, usize, usize)>,
    pub total: usize,
}

impl CochainLayout {
    pub fn block_offset(&self, k: i64) -> usize {
        self.blocks.iter().find(|b| b.0 == k).map(|b| b.3).expect("degree in layout")
    }
}

pub struct TateContext {
    pub resolution: Arc<StandardResolution>,
}

impl TateContext {
    pub fn new(group: Arc<crate::group::FiniteGroup>, depth: i64) -> Self {
        TateContext { resolution: Arc::new(StandardResolution::new(group, depth)) }
    }

    pub fn layout(&self, a: &BoundedComplex, n: i64) -> CochainLayout {
        let mut blocks = Vec::new();
        let mut total = 0;
        for k in a.degrees() {
            let term = self.resolution.term(n - k);
            let u = a.term(k).unwrap().underlying().ngens();
            blocks.push((k, term.basis_count, u, total));
            total += term.basis_count * u;
        }
        CochainLayout { degree: n, blocks, total }
    }

    /// The cochain group C^n as a presented abelian group (block-diagonal
    /// relations, one relation block per basis tuple).
    pub fn cochain_group(&self, a: &BoundedComplex, n: i64) -> Arc<FinAbGroup> {
        let layout = self.layout(a, n);
        let mut rel_cols: Vec<Vec<BigInt>> = Vec::new();
        for (k, tuples, u, offset) in &layout.blocks {
            let rels = a.term(*k).unwrap().underlying().relations();
            for t in 0..*tuples {
                for j in 0..rels.cols() {
                    let mut col = vec![BigInt::zero(); layout.total];
                    for i in 0..*u {
                        col[offset + t * u + i] = rels.at(i, j).clone();
                    }
                    rel_cols.push(col);
                }
            }
        }
        Arc::new(FinAbGroup::new(layout.total, IntMatrix::from_columns(layout.total, &rel_cols)))
    }

    /// The hyperdifferential d^n : C^n → C^{n+1}.
    pub fn differential(&self, a: &BoundedComplex, n: i64) -> Result<AbHom> {
        for k in a.degrees() {
            self.resolution.check_depth(n - k)?;
            self.resolution.check_depth(n + 1 - k)?;
        }
        let src_layout = self.layout(a, n);
        let dst_layout = self.layout(a, n + 1);
        let mut mat = IntMatrix::zero(dst_layout.total, src_layout.total);
        let global_sign = if n.rem_euclid(2) == 0 { 1i64 } else { -1 };
        for (k, dst_tuples, u, dst_off) in &dst_layout.blocks {
            let term = a.term(*k).unwrap();
            // pullback part: (−1)^n c^k ∘ ∂_{n+1−k}
            if src_layout.blocks.iter().any(|b| b.0 == *k) {
                let src_off = src_layout.block_offset(*k);
                let diff = self.resolution.differential(n + 1 - k);
                for t in 0..*dst_tuples {
                    for e in &diff[t] {
                        let am = term.action_matrix(e.gamma);
                        let s = BigInt::from(global_sign * e.sign as i64);
                        for i in 0..*u {
                            for j in 0..*u {
                                if !am.at(i, j).is_zero() {
                                    let r = dst_off + t * u + i;
                                    let c = src_off + e.basis * u + j;
                                    let v = mat.at(r, c).clone() + &s * am.at(i, j);
                                    mat.set(r, c, v);
                                }
                            }
                        }
                    }
                }
            }
            // postcomposition part: f^{k−1} ∘ c^{k−1}; P_{n−(k−1)} = P_{n+1−k},
            // same tuple space, blockwise f.
            if let Some(f) = a.diff(k - 1) {
                let src_off = src_layout.block_offset(k - 1);
                let uk1 = a.term(k - 1).unwrap().underlying().ngens();
                for t in 0..*dst_tuples {
                    for i in 0..*u {
                        for j in 0..uk1 {
                            if !f.matrix().at(i, j).is_zero() {
                                let r = dst_off + t * u + i;
                                let c = src_off + t * uk1 + j;
                                let v = mat.at(r, c).clone() + f.matrix().at(i, j);
                                mat.set(r, c, v);
                            }
                        }
                    }
                }
            }
        }
        let src = self.cochain_group(a, n);
        let dst = self.cochain_group(a, n + 1);
        Ok(AbHom::new_unchecked(src, dst, mat))
    }

    pub fn hypercohomology(&self, a: &BoundedComplex, n: i64) -> Result<TateGroup> {
        let d_in = self.differential(a, n - 1)?;
        let d_out = self.differential(a, n)?;
        let sq = Subquotient::new(&d_in, &d_out);
        Ok(TateGroup { degree: n, sq })
    }

    pub fn cohomology(&self, m: &GammaModule, n: i64) -> Result<TateGroup> {
        let a = BoundedComplex::concentrated(0, m.clone());
        self.hypercohomology(&a, n)
    }

    /// The map on Tate groups induced by a chain map (one hom per degree,
    /// all equivariant).
    pub fn induced_map(
        &self,
        a: &BoundedComplex,
        b: &BoundedComplex,
        maps: &[AbHom],
        ha: &TateGroup,
        hb: &TateGroup,
    ) -> AbHom {
        assert_eq!(ha.degree, hb.degree);
        let n = ha.degree;
        let la = self.layout(a, n);
        let lb = self.layout(b, n);
        let mut mat = IntMatrix::zero(lb.total, la.total);
        for (bi, (k, tuples, u, off_a)) in la.blocks.iter().enumerate() {
            let f = &maps[bi];
            let off_b = lb.block_offset(*k);
            let ub = lb.blocks.iter().find(|x| x.0 == *k).unwrap().2;
            let _ = u;
            for t in 0..*tuples {
                for i in 0..ub {
                    for j in 0..f.matrix().cols() {
                        if !f.matrix().at(i, j).is_zero() {
                            mat.set(off_b + t * ub + i, off_a + t * f.matrix().cols() + j, f.matrix().at(i, j).clone());
                        }
                    }
                }
            }
        }
        // Map ha generators: rep → cochain map → class in hb.
        let cols: Vec<Vec<BigInt>> = (0..ha.group().ngens())
            .map(|j| {
                let mut unit = vec![BigInt::zero(); ha.group().ngens()];
                unit[j] = num_traits::One::one();
                let rep = ha.sq.representative(&unit);
                hb.sq.class_of(&mat.mul_vec(&rep))
            })
            .collect();
        AbHom::new(
            ha.group().clone(),
            hb.group().clone(),
            IntMatrix::from_columns(hb.group().ngens(), &cols),
        )
        .expect("induced map on cohomology is well defined")
    }

    /// Connecting map H^n(A₃) → H^{n+1}(A₁) of a short exact sequence of
    /// modules (concentrated complexes): lift the cocycle through π
    /// coordinatewise, differentiate, pull back through ι.
    pub fn connecting(
        &self,
        inj: &AbHom,
        surj: &AbHom,
        h3: &TateGroup,
        h1: &TateGroup,
        a2: &GammaModule,
    ) -> AbHom {
        assert_eq!(h1.degree, h3.degree + 1);
        let n = h3.degree;
        let c2 = BoundedComplex::concentrated(0, a2.clone());
        let d2 = self.differential(&c2, n).expect("depth checked by callers");
        let u1 = inj.source().ngens();
        let u2 = a2.underlying().ngens();
        let u3 = surj.target().ngens();
        let cols: Vec<Vec<BigInt>> = (0..h3.group().ngens())
            .map(|j| {
                let mut unit = vec![BigInt::zero(); h3.group().ngens()];
                unit[j] = num_traits::One::one();
                let rep = h3.sq.representative(&unit);
                // lift coordinatewise through surj
                let tuples = rep.len() / u3;
                let mut lifted = Vec::with_capacity(tuples * u2);
                for t in 0..tuples {
                    let val = &rep[t * u3..(t + 1) * u3];
                    let pre = surj.preimage(val).expect("surjection admits preimages");
                    lifted.extend(pre);
                }
                let dl = d2.apply(&lifted);
                // pull back through inj coordinatewise
                let tuples2 = dl.len() / u2;
                let mut pulled = Vec::with_capacity(tuples2 * u1);
                for t in 0..tuples2 {
                    let val = &dl[t * u2..(t + 1) * u2];
                    let pre = inj.preimage(val).expect("d of a lift lands in the subobject");
                    pulled.extend(pre);
                }
                h1.sq.class_of(&pulled)
            })
            .collect();
        AbHom::new(
            h3.group().clone(),
            h1.group().clone(),
            IntMatrix::from_columns(h1.group().ngens(), &cols),
        )
        .expect("connecting map is well defined")
    }
}

/// A computed Tate cohomology group: the value together with cocycle
/// representatives for each canonical generator (through the subquotient).
pub struct TateGroup {
    pub degree: i64,
    pub sq: Subquotient,
}

impl TateGroup {
    pub fn group(&self) -> &Arc<FinAbGroup> {
        &self.sq.group
    }

    /// Representative cocycle of a class, in cochain coordinates.
    pub fn representative(&self, class: &[BigInt]) -> Vec<BigInt> {
        self.sq.representative(class)
    }

    pub fn class_of(&self, cocycle: &[BigInt]) -> Vec<BigInt> {
        self.sq.class_of(cocycle)
    }
}

/// Convenience entry points matching the operation names.
pub fn tate_cohomology(m: &GammaModule, n: i64, depth: i64) -> Result<TateGroup> {
    let ctx = TateContext::new(m.group().clone(), depth);
    ctx.cohomology(m, n)
}

pub fn tate_hypercohomology(a: &BoundedComplex, n: i64, depth: i64) -> Result<TateGroup> {
    let ctx = TateContext::new(a.group().clone(), depth);
    ctx.hypercohomology(a, n)
}

/// Independent oracle for H^{−2}(Γ, Z) = H₁(Γ, Z) = Γ^ab: the abelianization
/// presented on all group elements with relations g + h − gh.
pub fn abelianization(g: &crate::group::FiniteGroup) -> FinAbGroup {
    let n = g.order();
    let mut cols = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let mut col = vec![BigInt::zero(); n];
            col[a] += 1;
            col[b] += 1;
            col[g.mul(a, b)] -= 1;
            cols.push(col);
        }
    }
    FinAbGroup::new(n, IntMatrix::from_columns(n, &cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use num_traits::One;

    fn depth() -> i64 {
        DEFAULT_DEPTH
    }

    #[test]
    fn h0_of_trivial_z_mod_2() {
        // H^0(Z/2, Z) = Z/2
        let g = FiniteGroup::cyclic(2);
        let m = GammaModule::trivial_action(g, Arc::new(FinAbGroup::free(1)));
        let h = tate_cohomology(&m, 0, depth()).unwrap();
        assert_eq!(h.group().invariant_factors(), vec![BigInt::from(2)]);
    }

    #[test]
    fn h_minus1_of_sign_z() {
        // H^{-1}(Z/2, Z sign) = Z/2
        let g = FiniteGroup::cyclic(2);
        let z = Arc::new(FinAbGroup::free(1));
        let m = GammaModule::new(
            g,
            z,
            vec![IntMatrix::identity(1), IntMatrix::from_rows(&[&[-1]])],
        )
        .unwrap();
        let h = tate_cohomology(&m, -1, depth()).unwrap();
        assert_eq!(h.group().invariant_factors(), vec![BigInt::from(2)]);
    }

    #[test]
    fn h_minus2_of_s3_is_abelianization() {
        let g = FiniteGroup::symmetric3();
        let m = GammaModule::trivial_action(g.clone(), Arc::new(FinAbGroup::free(1)));
        let h = tate_cohomology(&m, -2, depth()).unwrap();
        let oracle = abelianization(&g);
        assert_eq!(h.group().invariant_factors(), oracle.invariant_factors());
        assert_eq!(h.group().invariant_factors(), vec![BigInt::from(2)]);
    }

    #[test]
    fn depth_error_is_explicit() {
        let g = FiniteGroup::cyclic(2);
        let m = GammaModule::trivial_action(g, Arc::new(FinAbGroup::free(1)));
        assert!(matches!(
            tate_cohomology(&m, 5, 4),
            Err(crate::Error::ResolutionDepth { .. })
        ));
    }

    #[test]
    fn cyclic_cohomology_of_z_alternates() {
        // Ĥ^even(Z/n, Z) = Z/n, Ĥ^odd = 0.
        for n in [2u64, 3, 4] {
            let g = FiniteGroup::cyclic(n as usize);
            let m = GammaModule::trivial_action(g, Arc::new(FinAbGroup::free(1)));
            for deg in -3i64..=3 {
                let h = tate_cohomology(&m, deg, depth()).unwrap();
                if deg.rem_euclid(2) == 0 {
                    assert_eq!(h.group().invariant_factors(), vec![BigInt::from(n)], "deg {}", deg);
                } else {
                    assert!(h.group().is_trivial(), "deg {} of Z/{}", deg, n);
                }
            }
        }
    }

    #[test]
    fn free_module_is_acyclic() {
        let g = FiniteGroup::symmetric3();
        let m = GammaModule::regular(g);
        for deg in -2i64..=2 {
            let h = tate_cohomology(&m, deg, depth()).unwrap();
            assert!(h.group().is_trivial(), "H^{} of Z[S3] nonzero", deg);
        }
    }

    #[test]
    fn acyclic_two_term_complex() {
        // [Z --id--> Z] in degrees -1, 0 is acyclic.
        let g = FiniteGroup::cyclic(2);
        let z = Arc::new(FinAbGroup::free(1));
        let m = GammaModule::trivial_action(g.clone(), z.clone());
        let f = AbHom::identity(z);
        let a = BoundedComplex::two_term(-1, m.clone(), m, f).unwrap();
        for n in -2i64..=2 {
            let h = tate_hypercohomology(&a, n, depth()).unwrap();
            assert!(h.group().is_trivial(), "H^{} of the cone nonzero", n);
        }
    }

    #[test]
    fn quasi_isomorphic_to_z_mod_2() {
        // [Z --x2--> Z] in degrees -1, 0 over Γ = Z/2 computes the Tate
        // cohomology of Z/2: H^0 = Z/2, H^{-1} = Z/2.
        let g = FiniteGroup::cyclic(2);
        let z = Arc::new(FinAbGroup::free(1));
        let m = GammaModule::trivial_action(g.clone(), z.clone());
        let f = AbHom::new(z.clone(), z.clone(), IntMatrix::from_rows(&[&[2]])).unwrap();
        let a = BoundedComplex::two_term(-1, m.clone(), m.clone(), f).unwrap();
        let m2 = GammaModule::trivial_action(g, Arc::new(FinAbGroup::cyclic(2)));
        for n in -2i64..=2 {
            let hyper = tate_hypercohomology(&a, n, depth()).unwrap();
            let plain = tate_cohomology(&m2, n, depth()).unwrap();
            assert_eq!(
                hyper.group().invariant_factors(),
                plain.group().invariant_factors(),
                "degree {}",
                n
            );
        }
    }

    #[test]
    fn concentrated_complex_agrees_with_module() {
        let g = FiniteGroup::cyclic(4);
        let m = GammaModule::from_character(g.clone(), 8, &[1, 3, 1, 3]).unwrap();
        let a = BoundedComplex::concentrated(0, m.clone());
        for n in -2i64..=2 {
            let h1 = tate_cohomology(&m, n, depth()).unwrap();
            let h2 = tate_hypercohomology(&a, n, depth()).unwrap();
            assert_eq!(h1.group().invariant_factors(), h2.group().invariant_factors());
        }
    }

    #[test]
    fn differential_squares_to_zero() {
        let g = FiniteGroup::symmetric3();
        // sign character: transpositions [021],[102],[210] act by -1
        let m = GammaModule::from_character(g.clone(), 4, &[1, 3, 3, 1, 1, 3]).unwrap();
        let ctx = TateContext::new(g, depth());
        let a = BoundedComplex::concentrated(0, m);
        for n in -3i64..=2 {
            let d1 = ctx.differential(&a, n).unwrap();
            let d2 = ctx.differential(&a, n + 1).unwrap();
            let comp = d2.compose(&d1);
            assert!(comp.equals(&AbHom::zero(comp.source().clone(), comp.target().clone())));
        }
    }

    #[test]
    fn annihilated_by_group_order() {
        let g = FiniteGroup::symmetric3();
        let m = GammaModule::from_character(g.clone(), 9, &[1, 8, 8, 1, 1, 8]).unwrap();
        for n in -2i64..=2 {
            let h = tate_cohomology(&m, n, depth()).unwrap();
            for d in h.group().invariant_factors() {
                assert!((BigInt::from(6) % d).is_zero());
            }
        }
    }

    #[test]
    fn long_exact_sequence_of_modules() {
        // 0 → Z --x2--> Z → Z/2 → 0 over Z/2 (trivial action): the connecting
        // H^n(Z/2) → H^{n+1}(Z) makes the sequence exact.
        let g = FiniteGroup::cyclic(2);
        let z = Arc::new(FinAbGroup::free(1));
        let z2 = Arc::new(FinAbGroup::cyclic(2));
        let mz = GammaModule::trivial_action(g.clone(), z.clone());
        let mz2 = GammaModule::trivial_action(g.clone(), z2.clone());
        let inj = AbHom::new(z.clone(), z.clone(), IntMatrix::from_rows(&[&[2]])).unwrap();
        let surj = AbHom::new(z.clone(), z2, IntMatrix::identity(1)).unwrap();
        let ctx = TateContext::new(g, depth());
        let ca = BoundedComplex::concentrated(0, mz.clone());
        let cc = BoundedComplex::concentrated(0, mz2.clone());

        for n in -2i64..=1 {
            let h1a = ctx.cohomology(&mz, n).unwrap();
            let h1b = ctx.cohomology(&mz, n).unwrap();
            let h1c = ctx.cohomology(&mz2, n).unwrap();
            let h2a = ctx.cohomology(&mz, n + 1).unwrap();
            let f = ctx.induced_map(&ca, &ca, &[inj.clone()], &h1a, &h1b);
            let p = ctx.induced_map(&ca, &cc, &[surj.clone()], &h1b, &h1c);
            let del = ctx.connecting(&inj, &surj, &h1c, &h2a, &mz);
            assert!(crate::abelian::exact_at(&f, &p), "exactness at H^{}(middle)", n);
            assert!(crate::abelian::exact_at(&p, &del), "exactness at H^{}(quotient)", n);
        }
    }

    #[test]
    fn oracle_abelianization_of_klein_four() {
        let g = FiniteGroup::klein_four();
        let ab = abelianization(&g);
        assert_eq!(ab.invariant_factors(), vec![BigInt::from(2), BigInt::from(2)]);
        let one = BigInt::one();
        let _ = one;
    }
}
