//! Restriction and corestriction as explicit cochain maps between the
//! standard-resolution complexes of Γ and of a subgroup Δ.
//!
//! With a section s of Δ\Γ → Γ:
//!   cor, n ≥ 0:  cor(c)(g_0,…,g_n) = Σ_x s(x)⁻¹ c(s(x)g_i s(xg_i)⁻¹)_i
//!   cor, n < 0:  cor(c)(g_1,…,g_m) = g c(h_1,…,h_m) if g_i = g h_i, else 0
//!   res, n ≥ 0:  plain restriction of the equivariant map to Δ-tuples
//!   res, n < 0:  res(c)(h_1,…,h_m) = Σ_{x ∈ (Δ\Γ)^m} c(h_i s(x_i))_i
//!
//! Both commute with the differentials and, on cohomology, are independent
//! of the section; cor ∘ res is multiplication by the index.

use crate::abelian::AbHom;
use crate::gmodule::GammaModule;
use crate::group::Subgroup;
use crate::matrix::IntMatrix;
use crate::resolution::StandardResolution;
use crate::tate::{TateContext, TateGroup};
use crate::{complex::BoundedComplex, Result};
use num_bigint::BigInt;
use num_traits::Zero;

/// Everything needed to move cochains between Γ and Δ for one module.
pub struct ResCor {
    pub sub: Subgroup,
    /// Section of Δ\Γ: one representative per right coset, reps[0] = e.
    pub section: Vec<usize>,
    pub ctx_g: TateContext,
    pub ctx_d: TateContext,
    pub m: GammaModule,
    pub m_res: GammaModule,
}

impl ResCor {
    pub fn new(m: &GammaModule, sub: &Subgroup, depth: i64) -> Result<ResCor> {
        if !std::sync::Arc::ptr_eq(sub.parent(), m.group()) {
            return Err(crate::Error::NotSubgroup);
        }
        let section = sub.right_coset_reps();
        Self::with_section(m, sub, section, depth)
    }

    pub fn with_section(
        m: &GammaModule,
        sub: &Subgroup,
        section: Vec<usize>,
        depth: i64,
    ) -> Result<ResCor> {
        let m_res = m.restrict(sub);
        let ctx_g = TateContext::new(m.group().clone(), depth);
        let ctx_d = TateContext::new(m_res.group().clone(), depth);
        Ok(ResCor { sub: sub.clone(), section, ctx_g, ctx_d, m: m.clone(), m_res })
    }

    fn coset_of(&self, g: usize) -> usize {
        let p = self.sub.parent();
        self.section
            .iter()
            .position(|&r| {
                // Δ·r = Δ·g  ⟺  g r⁻¹ ∈ Δ
                self.sub.contains(p.mul(g, p.inv(r)))
            })
            .expect("sections cover all cosets")
    }

    /// Index of an element of Δ inside the subgroup's own group.
    fn delta_index(&self, d: usize) -> usize {
        self.sub.elements().binary_search(&d).expect("element of Δ")
    }

    fn delta_parent(&self, i: usize) -> usize {
        self.sub.elements()[i]
    }

    /// res^n : C^n(Γ, M) → C^n(Δ, M) as a hom of cochain groups.
    pub fn restriction_cochain(&self, n: i64) -> Result<AbHom> {
        self.ctx_g.resolution.check_depth(n)?;
        let cg = self.cg(n);
        let cd = self.cd(n);
        let u = self.m.underlying().ngens();
        let res_g: &StandardResolution = &self.ctx_g.resolution;
        let res_d: &StandardResolution = &self.ctx_d.resolution;
        let term_d = res_d.term(n);
        let mut mat = IntMatrix::zero(term_d.basis_count * u, res_g.term(n).basis_count * u);
        let parent = self.sub.parent().clone();
        if n >= 0 {
            // value at a Δ-basis tuple is the value at the same Γ-tuple
            for t in 0..term_d.basis_count {
                let dt = res_d.index_tuple(n, t);
                let gt: Vec<usize> = dt.iter().map(|&i| self.delta_parent(i)).collect();
                let gb = res_g.tuple_index(&gt);
                for i in 0..u {
                    mat.set(t * u + i, gb * u + i, num_traits::One::one());
                }
            }
        } else {
            // sum over all coset tuples x: c(h_1 s(x_1), ..., h_m s(x_m)),
            // evaluated at Δ-basis tuples (h_1 = e).
            let m = (-n) as usize;
            let ncosets = self.section.len();
            for t in 0..term_d.basis_count {
                let dt = res_d.index_tuple(n, t);
                // full Δ-tuple with h_1 = identity
                let mut h = Vec::with_capacity(m);
                h.push(parent.identity());
                h.extend(dt.iter().map(|&i| self.delta_parent(i)));
                let mut xs = vec![0usize; m];
                loop {
                    let full: Vec<usize> =
                        (0..m).map(|i| parent.mul(h[i], self.section[xs[i]])).collect();
                    let (g0, gb) = res_g.normalize(&full);
                    let am = self.m.action_matrix(g0);
                    for i in 0..u {
                        for j in 0..u {
                            if !am.at(i, j).is_zero() {
                                let v = mat.at(t * u + i, gb * u + j).clone() + am.at(i, j);
                                mat.set(t * u + i, gb * u + j, v);
                            }
                        }
                    }
                    // next coset tuple
                    let mut k = 0;
                    loop {
                        if k == m {
                            break;
                        }
                        xs[k] += 1;
                        if xs[k] < ncosets {
                            break;
                        }
                        xs[k] = 0;
                        k += 1;
                    }
                    if k == m {
                        break;
                    }
                }
            }
        }
        Ok(AbHom::new_unchecked(cg, cd, mat))
    }

    /// cor^n : C^n(Δ, M) → C^n(Γ, M).
    pub fn corestriction_cochain(&self, n: i64) -> Result<AbHom> {
        self.ctx_g.resolution.check_depth(n)?;
        let cg = self.cg(n);
        let cd = self.cd(n);
        let u = self.m.underlying().ngens();
        let res_g: &StandardResolution = &self.ctx_g.resolution;
        let res_d: &StandardResolution = &self.ctx_d.resolution;
        let term_g = res_g.term(n);
        let mut mat = IntMatrix::zero(term_g.basis_count * u, res_d.term(n).basis_count * u);
        let parent = self.sub.parent().clone();
        if n >= 0 {
            let nn = n as usize;
            for t in 0..term_g.basis_count {
                let gt_free = res_g.index_tuple(n, t);
                // full Γ-tuple (g_0 = e, g_1, ..., g_n)
                let mut g = Vec::with_capacity(nn + 1);
                g.push(parent.identity());
                g.extend_from_slice(&gt_free);
                for x in 0..self.section.len() {
                    let sx = self.section[x];
                    // Δ-tuple entries s(x) g_i s(x·g_i)⁻¹
                    let dt: Vec<usize> = g
                        .iter()
                        .map(|&gi| {
                            let sg = parent.mul(sx, gi);
                            let c = self.coset_of(sg);
                            parent.mul(sg, parent.inv(self.section[c]))
                        })
                        .collect();
                    // first entry is s(x)s(x)⁻¹ = e: already a Δ-basis tuple
                    debug_assert_eq!(dt[0], parent.identity());
                    let db = res_d.tuple_index(
                        &dt[1..].iter().map(|&d| self.delta_index(d)).collect::<Vec<_>>(),
                    );
                    let am = self.m.action_matrix(parent.inv(sx));
                    for i in 0..u {
                        for j in 0..u {
                            if !am.at(i, j).is_zero() {
                                let v = mat.at(t * u + i, db * u + j).clone() + am.at(i, j);
                                mat.set(t * u + i, db * u + j, v);
                            }
                        }
                    }
                }
            }
        } else {
            // nonzero only on tuples entirely inside Δ
            for t in 0..term_g.basis_count {
                let gt = res_g.index_tuple(n, t);
                // full tuple (e, g_2, ..., g_m); with g_1 = e the witness
                // g must lie in Δ, so the condition is g_i ∈ Δ for all i.
                if gt.iter().all(|&gi| self.sub.contains(gi)) {
                    let db = res_d.tuple_index(
                        &gt.iter().map(|&d| self.delta_index(d)).collect::<Vec<_>>(),
                    );
                    for i in 0..u {
                        mat.set(t * u + i, db * u + i, num_traits::One::one());
                    }
                }
            }
        }
        Ok(AbHom::new_unchecked(cd, cg, mat))
    }

    fn cg(&self, n: i64) -> std::sync::Arc<crate::abelian::FinAbGroup> {
        let a = BoundedComplex::concentrated(0, self.m.clone());
        self.ctx_g.cochain_group(&a, n)
    }

    fn cd(&self, n: i64) -> std::sync::Arc<crate::abelian::FinAbGroup> {
        let a = BoundedComplex::concentrated(0, self.m_res.clone());
        self.ctx_d.cochain_group(&a, n)
    }

    pub fn cohomology_g(&self, n: i64) -> Result<TateGroup> {
        self.ctx_g.cohomology(&self.m, n)
    }

    pub fn cohomology_d(&self, n: i64) -> Result<TateGroup> {
        self.ctx_d.cohomology(&self.m_res, n)
    }

    /// Induced restriction on cohomology.
    pub fn restriction(&self, hg: &TateGroup, hd: &TateGroup) -> Result<AbHom> {
        let r = self.restriction_cochain(hg.degree)?;
        Ok(induce(&r, hg, hd))
    }

    /// Induced corestriction on cohomology.
    pub fn corestriction(&self, hd: &TateGroup, hg: &TateGroup) -> Result<AbHom> {
        let c = self.corestriction_cochain(hd.degree)?;
        Ok(induce(&c, hd, hg))
    }
}

/// Push a cochain-level map to the induced map on computed cohomology.
pub fn induce(chain_map: &AbHom, src: &TateGroup, dst: &TateGroup) -> AbHom {
    let cols: Vec<Vec<BigInt>> = (0..src.group().ngens())
        .map(|j| {
            let mut unit = vec![BigInt::zero(); src.group().ngens()];
            unit[j] = num_traits::One::one();
            let rep = src.representative(&unit);
            dst.class_of(&chain_map.apply(&rep))
        })
        .collect();
    AbHom::new(
        src.group().clone(),
        dst.group().clone(),
        IntMatrix::from_columns(dst.group().ngens(), &cols),
    )
    .expect("induced map on cohomology is well defined")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{AbHom, FinAbGroup};
    use crate::group::FiniteGroup;
    use std::sync::Arc;

    const DEPTH: i64 = 3;

    fn check_chain_map(rc: &ResCor, n: i64) {
        let a_g = BoundedComplex::concentrated(0, rc.m.clone());
        let a_d = BoundedComplex::concentrated(0, rc.m_res.clone());
        let dg = rc.ctx_g.differential(&a_g, n).unwrap();
        let dd = rc.ctx_d.differential(&a_d, n).unwrap();
        let res_n = rc.restriction_cochain(n).unwrap();
        let res_n1 = rc.restriction_cochain(n + 1).unwrap();
        assert!(res_n1.compose(&dg).equals(&dd.compose(&res_n)), "res chain map fails at {}", n);
        let cor_n = rc.corestriction_cochain(n).unwrap();
        let cor_n1 = rc.corestriction_cochain(n + 1).unwrap();
        assert!(cor_n1.compose(&dd).equals(&dg.compose(&cor_n)), "cor chain map fails at {}", n);
    }

    #[test]
    fn chain_maps_commute_with_differentials() {
        let g = FiniteGroup::cyclic(4);
        let m = GammaModule::from_character(g.clone(), 8, &[1, 3, 1, 3]).unwrap();
        let sub = g.generated_subgroup(&[2]);
        let rc = ResCor::new(&m, &sub, DEPTH).unwrap();
        for n in -2i64..=1 {
            check_chain_map(&rc, n);
        }
    }

    #[test]
    fn chain_maps_nonabelian() {
        let g = FiniteGroup::symmetric3();
        let m = GammaModule::from_character(g.clone(), 4, &[1, 3, 3, 1, 1, 3]).unwrap();
        let sub = g.generated_subgroup(&[3]); // order 3
        let rc = ResCor::new(&m, &sub, DEPTH).unwrap();
        for n in -2i64..=1 {
            check_chain_map(&rc, n);
        }
    }

    #[test]
    fn full_subgroup_gives_identity() {
        let g = FiniteGroup::cyclic(3);
        let m = GammaModule::trivial_action(g.clone(), Arc::new(FinAbGroup::cyclic(9)));
        let rc = ResCor::new(&m, &g.full_subgroup(), DEPTH).unwrap();
        for n in [-1i64, 0, 1] {
            let hg = rc.cohomology_g(n).unwrap();
            let hd = rc.cohomology_d(n).unwrap();
            let r = rc.restriction(&hg, &hd).unwrap();
            let c = rc.corestriction(&hd, &hg).unwrap();
            assert!(c.compose(&r).equals(&AbHom::identity(hg.group().clone())));
        }
    }

    #[test]
    fn cor_res_is_index() {
        // Γ = Z/4 ⊃ Δ = Z/2, H^0(Γ, Z) = Z/4: cor∘res = ×2.
        let g = FiniteGroup::cyclic(4);
        let m = GammaModule::trivial_action(g.clone(), Arc::new(FinAbGroup::free(1)));
        let sub = g.generated_subgroup(&[2]);
        let rc = ResCor::new(&m, &sub, DEPTH).unwrap();
        let hg = rc.cohomology_g(0).unwrap();
        assert_eq!(hg.group().invariant_factors(), vec![BigInt::from(4)]);
        let hd = rc.cohomology_d(0).unwrap();
        let r = rc.restriction(&hg, &hd).unwrap();
        let c = rc.corestriction(&hd, &hg).unwrap();
        let two = AbHom::identity(hg.group().clone()).scale(&BigInt::from(2));
        assert!(c.compose(&r).equals(&two));
    }

    #[test]
    fn cor_res_is_index_in_other_degrees() {
        let g = FiniteGroup::cyclic(6);
        let m = GammaModule::from_character(g.clone(), 4, &[1, 3, 1, 3, 1, 3]).unwrap();
        let sub = g.generated_subgroup(&[2]); // index 2
        let rc = ResCor::new(&m, &sub, DEPTH).unwrap();
        for n in [-2i64, -1, 0, 1] {
            let hg = rc.cohomology_g(n).unwrap();
            let hd = rc.cohomology_d(n).unwrap();
            let r = rc.restriction(&hg, &hd).unwrap();
            let c = rc.corestriction(&hd, &hg).unwrap();
            let idx = AbHom::identity(hg.group().clone()).scale(&BigInt::from(2));
            assert!(c.compose(&r).equals(&idx), "cor∘res ≠ [Γ:Δ] in degree {}", n);
        }
    }

    #[test]
    fn section_independence_on_cohomology() {
        let g = FiniteGroup::cyclic(4);
        let m = GammaModule::from_character(g.clone(), 8, &[1, 3, 1, 3]).unwrap();
        let sub = g.generated_subgroup(&[2]);
        let sec1 = sub.right_coset_reps();
        // alternative section: translate nonidentity reps by a Δ-element
        let mut sec2 = sec1.clone();
        for r in sec2.iter_mut() {
            if *r != g.identity() {
                *r = g.mul(2, *r);
            }
        }
        let rc1 = ResCor::with_section(&m, &sub, sec1, DEPTH).unwrap();
        let rc2 = ResCor::with_section(&m, &sub, sec2, DEPTH).unwrap();
        for n in [-2i64, -1, 0, 1] {
            let hg = rc1.cohomology_g(n).unwrap();
            let hd = rc1.cohomology_d(n).unwrap();
            let r1 = rc1.restriction(&hg, &hd).unwrap();
            let r2 = rc2.restriction(&hg, &hd).unwrap();
            assert!(r1.equals(&r2), "res section-dependent in degree {}", n);
            let c1 = rc1.corestriction(&hd, &hg).unwrap();
            let c2 = rc2.corestriction(&hd, &hg).unwrap();
            assert!(c1.equals(&c2), "cor section-dependent in degree {}", n);
        }
    }

    #[test]
    fn res_minus_one_is_relative_norm() {
        // H^{-1}(Γ,A) → A_{Γ,T} followed by N_{Δ\Γ} agrees with res followed
        // by H^{-1}(Δ,A) → A_{Δ,T}; C^{-1} ≅ M makes representatives direct.
        let g = FiniteGroup::cyclic(4);
        let m = GammaModule::from_character(g.clone(), 8, &[1, 3, 1, 3]).unwrap();
        let sub = g.generated_subgroup(&[2]);
        let rc = ResCor::new(&m, &sub, DEPTH).unwrap();
        let hg = rc.cohomology_g(-1).unwrap();
        let hd = rc.cohomology_d(-1).unwrap();
        let r = rc.restriction(&hg, &hd).unwrap();
        let (_, proj_g) = m.coinvariants();
        let (co_d, proj_d) = m.restrict(&sub).coinvariants();
        let nrel = m.relative_norm(&sub);
        for j in 0..hg.group().ngens() {
            let mut unit = vec![BigInt::zero(); hg.group().ngens()];
            unit[j] = num_traits::One::one();
            let rep_g = hg.representative(&unit); // lives in C^{-1} ≅ M
            let rep_d = hd.representative(&r.apply(&unit));
            let lhs = proj_d.apply(&rep_d);
            let rhs = nrel.apply(&proj_g.apply(&rep_g));
            assert!(co_d.elements_equal(&lhs, &rhs));
        }
    }
}
