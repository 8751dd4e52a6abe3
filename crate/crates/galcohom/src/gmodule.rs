//! Modules over a finite group: a presented abelian group together with an
//! action by automorphisms, plus coinvariants, invariants and norm maps.

use crate::abelian::{AbHom, FinAbGroup};
use crate::group::{FiniteGroup, Subgroup};
use crate::matrix::IntMatrix;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::sync::Arc;

#[derive(Clone)]
pub struct GammaModule {
    group: Arc<FiniteGroup>,
    underlying: Arc<FinAbGroup>,
    /// One matrix per group element, acting on generator coordinates.
    action: Vec<IntMatrix>,
}

impl std::fmt::Debug for GammaModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GammaModule({} over group of order {})", self.underlying, self.group.order())
    }
}

impl GammaModule {
    /// Checked constructor: identity acts trivially, the action is
    /// multiplicative, and every matrix preserves the relation lattice.
    pub fn new(
        group: Arc<FiniteGroup>,
        underlying: Arc<FinAbGroup>,
        action: Vec<IntMatrix>,
    ) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::BadDatum("one action matrix per group element required".into()));
        }
        let m = GammaModule { group, underlying, action };
        let n = m.underlying.ngens();
        for g in m.group.elements() {
            let mat = &m.action[g];
            if mat.rows() != n || mat.cols() != n {
                return Err(Error::BadDatum("action matrix has wrong shape".into()));
            }
            // well-defined on the presentation
            for rel in m.underlying.relations().columns() {
                if !m.underlying.is_zero_element(&mat.mul_vec(&rel)) {
                    return Err(Error::IllDefinedHom);
                }
            }
        }
        let e = m.group.identity();
        if !m.hom_equal(&m.action[e], &IntMatrix::identity(n)) {
            return Err(Error::BadDatum("identity must act trivially".into()));
        }
        for g in m.group.elements() {
            for h in m.group.elements() {
                let gh = m.group.mul(g, h);
                if !m.hom_equal(&m.action[g].mul(&m.action[h]), &m.action[gh]) {
                    return Err(Error::BadDatum(format!(
                        "action is not multiplicative at ({}, {})",
                        m.group.label(g),
                        m.group.label(h)
                    )));
                }
            }
        }
        Ok(m)
    }

    fn hom_equal(&self, a: &IntMatrix, b: &IntMatrix) -> bool {
        (0..a.cols()).all(|j| self.underlying.elements_equal(&a.column(j), &b.column(j)))
    }

    pub fn trivial_action(group: Arc<FiniteGroup>, underlying: Arc<FinAbGroup>) -> Self {
        let n = underlying.ngens();
        let action = (0..group.order()).map(|_| IntMatrix::identity(n)).collect();
        GammaModule { group, underlying, action }
    }

    /// Z/d with the action of a character chi: Γ → (Z/d)^×, given by its
    /// value on each element.
    pub fn from_character(group: Arc<FiniteGroup>, modulus: u64, values: &[i64]) -> Result<Self> {
        let underlying = Arc::new(FinAbGroup::cyclic(modulus));
        let action: Vec<IntMatrix> = values
            .iter()
            .map(|&v| IntMatrix::from_fn(1, 1, |_, _| BigInt::from(v)))
            .collect();
        Self::new(group, underlying, action)
    }

    /// The regular module Z[Γ] (free on the group elements, left translation).
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let underlying = Arc::new(FinAbGroup::free(n));
        let action = group
            .elements()
            .map(|g| {
                IntMatrix::from_fn(n, n, |i, j| {
                    if i == group.mul(g, j) { BigInt::one() } else { BigInt::zero() }
                })
            })
            .collect();
        GammaModule { group, underlying, action }
    }

    /// Z[Γ]/⟨Σγ⟩ with the regular action: the cocharacter module of the
    /// norm-one quotient torus R_{E/F} G_m / G_m.
    pub fn regular_mod_norm(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let norm_col = vec![BigInt::one(); n];
        let underlying = Arc::new(FinAbGroup::new(n, IntMatrix::from_columns(n, &[norm_col])));
        let action = group
            .elements()
            .map(|g| {
                IntMatrix::from_fn(n, n, |i, j| {
                    if i == group.mul(g, j) { BigInt::one() } else { BigInt::zero() }
                })
            })
            .collect();
        GammaModule { group, underlying, action }
    }

    /// (Z/d)[Γ/H] (or Z[Γ/H] for d = 0): free on the left cosets of H with
    /// the translation action, coefficients mod d.
    pub fn coset_permutation_module(group: Arc<FiniteGroup>, sub: &crate::group::Subgroup, d: u64) -> Self {
        let reps = sub.left_coset_reps();
        let n = reps.len();
        let factors = vec![BigInt::from(d); n];
        let underlying = Arc::new(if d == 0 {
            FinAbGroup::free(n)
        } else {
            FinAbGroup::from_invariant_factors(&factors)
        });
        let coset_of = |g: usize| -> usize {
            reps.iter()
                .position(|&r| sub.contains(group.mul(group.inv(r), g)))
                .expect("left cosets partition the group")
        };
        let action = group
            .elements()
            .map(|g| {
                IntMatrix::from_fn(n, n, |i, j| {
                    if i == coset_of(group.mul(g, reps[j])) { BigInt::one() } else { BigInt::zero() }
                })
            })
            .collect();
        GammaModule { group, underlying, action }
    }

    pub fn direct_sum(a: &GammaModule, b: &GammaModule) -> Self {
        assert!(Arc::ptr_eq(&a.group, &b.group), "modules over different groups");
        let na = a.underlying.ngens();
        let nb = b.underlying.ngens();
        let ra = a.underlying.relations();
        let rb = b.underlying.relations();
        let rels = IntMatrix::from_fn(na + nb, ra.cols() + rb.cols(), |i, j| {
            if i < na && j < ra.cols() {
                ra.at(i, j).clone()
            } else if i >= na && j >= ra.cols() {
                rb.at(i - na, j - ra.cols()).clone()
            } else {
                BigInt::zero()
            }
        });
        let underlying = Arc::new(FinAbGroup::new(na + nb, rels));
        let action = a
            .group
            .elements()
            .map(|g| {
                IntMatrix::from_fn(na + nb, na + nb, |i, j| {
                    if i < na && j < na {
                        a.action[g].at(i, j).clone()
                    } else if i >= na && j >= na {
                        b.action[g].at(i - na, j - na).clone()
                    } else {
                        BigInt::zero()
                    }
                })
            })
            .collect();
        GammaModule { group: a.group.clone(), underlying, action }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn underlying(&self) -> &Arc<FinAbGroup> {
        &self.underlying
    }

    pub fn action_matrix(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    pub fn action_hom(&self, g: usize) -> AbHom {
        AbHom::new_unchecked(self.underlying.clone(), self.underlying.clone(), self.action[g].clone())
    }

    /// Coinvariants M_Γ = M / ⟨γm − m⟩ with the projection from M.
    pub fn coinvariants(&self) -> (Arc<FinAbGroup>, AbHom) {
        let n = self.underlying.ngens();
        let mut rels = self.underlying.relations().clone();
        for g in self.group.elements() {
            if g == self.group.identity() {
                continue;
            }
            let diff = self.action[g].sub(&IntMatrix::identity(n));
            rels = rels.hstack(&diff);
        }
        let co = Arc::new(FinAbGroup::new(n, rels));
        let proj = AbHom::new_unchecked(self.underlying.clone(), co.clone(), IntMatrix::identity(n));
        (co, proj)
    }

    /// Invariants M^Γ = ∩ ker(γ − 1) with the inclusion into M.
    pub fn invariants(&self) -> (Arc<FinAbGroup>, AbHom) {
        let n = self.underlying.ngens();
        let others: Vec<usize> =
            self.group.elements().filter(|&g| g != self.group.identity()).collect();
        if others.is_empty() {
            let inc = AbHom::identity(self.underlying.clone());
            return (self.underlying.clone(), inc);
        }
        // Stack the maps (γ − 1) into one hom M → M^{#others}.
        let mut stacked = IntMatrix::zero(0, n);
        let mut target_rels = IntMatrix::zero(0, 0);
        for &g in &others {
            stacked = stacked.vstack(&self.action[g].sub(&IntMatrix::identity(n)));
            let r = self.underlying.relations();
            let old_rows = target_rels.rows();
            let old_cols = target_rels.cols();
            target_rels = IntMatrix::from_fn(old_rows + n, old_cols + r.cols(), |i, j| {
                if i < old_rows && j < old_cols {
                    target_rels.at(i, j).clone()
                } else if i >= old_rows && j >= old_cols {
                    r.at(i - old_rows, j - old_cols).clone()
                } else {
                    BigInt::zero()
                }
            });
        }
        let target = Arc::new(FinAbGroup::new(stacked.rows(), target_rels));
        let f = AbHom::new_unchecked(self.underlying.clone(), target, stacked);
        f.kernel()
    }

    /// The norm Σ_γ γ as an endomorphism of M.
    pub fn norm_map(&self) -> AbHom {
        let n = self.underlying.ngens();
        let mut m = IntMatrix::zero(n, n);
        for g in self.group.elements() {
            m = m.add(&self.action[g]);
        }
        AbHom::new_unchecked(self.underlying.clone(), self.underlying.clone(), m)
    }

    /// Relative norm N_{Δ\Γ} : M_Γ → M_Δ, the coset sum Σ s(x) descended to
    /// coinvariants. Independent of the choice of section.
    pub fn relative_norm(&self, sub: &Subgroup) -> AbHom {
        let reps = sub.right_coset_reps();
        self.relative_norm_with_section(sub, &reps)
    }

    /// Same map computed from an explicit section (one representative per
    /// right coset Δγ); used to test section independence.
    pub fn relative_norm_with_section(&self, sub: &Subgroup, reps: &[usize]) -> AbHom {
        let n = self.underlying.ngens();
        let mut m = IntMatrix::zero(n, n);
        for &r in reps {
            m = m.add(&self.action[r]);
        }
        let (co_g, _) = self.coinvariants();
        let (co_d, _) = self.restrict(sub).coinvariants();
        AbHom::new(co_g, co_d, m).expect("relative norm descends to coinvariants")
    }

    /// Restriction of the module to a subgroup (as a group in its own right).
    pub fn restrict(&self, sub: &Subgroup) -> GammaModule {
        let (g, emb) = sub.as_group();
        let action = emb.iter().map(|&e| self.action[e].clone()).collect();
        GammaModule { group: g, underlying: self.underlying.clone(), action }
    }

    /// Hom(M, Q/Z) of a finite module with the contragredient action
    /// (γf)(x) = f(γ⁻¹ x), presented on the dual canonical generators.
    pub fn qz_dual(&self) -> Result<GammaModule> {
        if !self.underlying.is_finite() {
            return Err(Error::InfiniteModule);
        }
        let gens = self.underlying.canonical_generators();
        let k = gens.len();
        let factors: Vec<BigInt> = gens.iter().map(|(d, _)| d.clone()).collect();
        let dual = Arc::new(FinAbGroup::from_invariant_factors(&factors));
        // Action of γ in canonical coordinates of M.
        let mut action = Vec::with_capacity(self.group.order());
        for g in self.group.elements() {
            let ginv = self.group.inv(g);
            // B = action(γ⁻¹) written on canonical generators.
            let mut b = IntMatrix::zero(k, k);
            for (j, (_, gen)) in gens.iter().enumerate() {
                let img = self.action[ginv].mul_vec(gen);
                let cc = self.underlying.canonical_coords(&img);
                for i in 0..k {
                    b.set(i, j, cc[i].clone());
                }
            }
            // (γf_i)(e_j) = f_i(B e_j) = B[i,j]/d_i, so γf_i = Σ_j (B[i,j]·d_j/d_i) f_j.
            let mut dmat = IntMatrix::zero(k, k);
            for i in 0..k {
                for j in 0..k {
                    let num = b.at(i, j) * &factors[j];
                    let (q, r) = num.div_mod_floor(&factors[i]);
                    assert!(r.is_zero(), "dual action entry must be integral");
                    dmat.set(j, i, q);
                }
            }
            action.push(dmat);
        }
        GammaModule::new(self.group.clone(), dual, action)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sign_module_on_z() -> GammaModule {
        let g = FiniteGroup::cyclic(2);
        let z = Arc::new(FinAbGroup::free(1));
        let action = vec![IntMatrix::identity(1), IntMatrix::from_rows(&[&[-1]])];
        GammaModule::new(g, z, action).unwrap()
    }

    fn neg_on_z8() -> GammaModule {
        let g = FiniteGroup::cyclic(2);
        GammaModule::from_character(g, 8, &[1, 7]).unwrap()
    }

    fn swap_on_z2() -> GammaModule {
        // Z/2 swapping two copies of Z
        let g = FiniteGroup::cyclic(2);
        let z2 = Arc::new(FinAbGroup::free(2));
        let swap = IntMatrix::from_rows(&[&[0, 1], &[1, 0]]);
        GammaModule::new(g, z2, vec![IntMatrix::identity(2), swap]).unwrap()
    }

    #[test]
    fn invalid_action_rejected() {
        let g = FiniteGroup::cyclic(2);
        let z4 = Arc::new(FinAbGroup::cyclic(4));
        // 2 is not invertible mod 4
        let bad = vec![IntMatrix::identity(1), IntMatrix::from_rows(&[&[2]])];
        assert!(GammaModule::new(g, z4, bad).is_err());
    }

    #[test]
    fn coinvariants_examples() {
        // swap on Z^2 -> Z
        let (c, _) = swap_on_z2().coinvariants();
        assert_eq!(c.free_rank(), 1);
        assert!(c.invariant_factors().is_empty());
        // -1 on Z/8 -> Z/2
        let (c, _) = neg_on_z8().coinvariants();
        assert_eq!(c.invariant_factors(), vec![BigInt::from(2)]);
    }

    #[test]
    fn invariants_examples() {
        // -1 on Z -> 0
        let (i, _) = sign_module_on_z().invariants();
        assert!(i.is_trivial());
        // -1 on Z/8 -> {0,4}
        let (i, inc) = neg_on_z8().invariants();
        assert_eq!(i.invariant_factors(), vec![BigInt::from(2)]);
        let gen = inc.apply(&i.canonical_generators()[0].1);
        assert!(neg_on_z8().underlying().elements_equal(&gen, &[BigInt::from(4)]));
        // swap on Z^2 -> diagonal Z
        let (i, inc) = swap_on_z2().invariants();
        assert_eq!(i.free_rank(), 1);
        let gen = inc.apply(&i.canonical_generators()[0].1);
        assert_eq!(gen[0], gen[1]);
    }

    #[test]
    fn norm_examples() {
        // trivial group: identity
        let t = GammaModule::trivial_action(FiniteGroup::trivial(), Arc::new(FinAbGroup::free(1)));
        assert!(t.norm_map().equals(&AbHom::identity(t.underlying().clone())));
        // -1 on Z: zero map
        let s = sign_module_on_z();
        assert!(s.norm_map().equals(&AbHom::zero(s.underlying().clone(), s.underlying().clone())));
    }

    #[test]
    fn relative_norm_index_two_in_z4() {
        let g = FiniteGroup::cyclic(4);
        let m = GammaModule::trivial_action(g.clone(), Arc::new(FinAbGroup::free(1)));
        let sub = g.generated_subgroup(&[2]);
        let n = m.relative_norm(&sub);
        // x2 : Z -> Z on coinvariants of a trivial module
        assert_eq!(n.matrix().at(0, 0), &BigInt::from(2));
    }

    #[test]
    fn relative_norm_section_independent() {
        let g = FiniteGroup::cyclic(4);
        let m = neg_on_z8_over(g.clone());
        let sub = g.generated_subgroup(&[2]);
        let reps1 = sub.right_coset_reps();
        // another section: multiply each nonidentity rep by a subgroup element
        let mut reps2 = reps1.clone();
        for r in reps2.iter_mut() {
            if *r != g.identity() {
                *r = g.mul(2, *r);
            }
        }
        let n1 = m.relative_norm_with_section(&sub, &reps1);
        let n2 = m.relative_norm_with_section(&sub, &reps2);
        assert!(n1.equals(&n2));
    }

    fn neg_on_z8_over(g: Arc<FiniteGroup>) -> GammaModule {
        // c1 acts by 3 on Z/8 (an order-2 automorphism... 3^2 = 9 = 1 mod 8)
        GammaModule::from_character(g, 8, &[1, 3, 1, 3]).unwrap()
    }

    #[test]
    fn nested_relative_norms_compose() {
        let g = FiniteGroup::cyclic(8);
        let m = GammaModule::from_character(g.clone(), 16, &[1, 15, 1, 15, 1, 15, 1, 15]).unwrap();
        let mid = g.generated_subgroup(&[2]);
        let small = g.generated_subgroup(&[4]);
        let n_total = m.relative_norm(&small);
        let n1 = m.relative_norm(&mid);
        // relative norm from mid down to small, inside mid as its own group
        let rm = m.restrict(&mid);
        let (_, emb) = mid.as_group();
        let small_in_mid = rm.group().generated_subgroup(
            &small.elements().iter().map(|e| emb.iter().position(|x| x == e).unwrap()).collect::<Vec<_>>(),
        );
        let n2 = rm.relative_norm(&small_in_mid);
        assert!(n2.compose(&n1).equals(&n_total));
    }

    #[test]
    fn norm_factors_through_invariants() {
        let m = neg_on_z8();
        let n = m.norm_map();
        let (inv, inc) = m.invariants();
        // image of norm lies in invariants: preimage through inc exists
        for j in 0..m.underlying().ngens() {
            let img = n.matrix().column(j);
            let pre = AbHom::new_unchecked(inv.clone(), m.underlying().clone(), inc.matrix().clone())
                .preimage(&img);
            assert!(pre.is_some());
        }
    }

    #[test]
    fn qz_dual_of_mu8_style_module() {
        // Z/8 with multiplication action of (Z/8)^x: dual is again Z/8 with
        // the inverse-multiplication action (same matrices here since every
        // unit squares to 1 mod 8).
        let g = FiniteGroup::klein_four();
        let m = GammaModule::from_character(g.clone(), 8, &[1, 3, 5, 7]).unwrap();
        let d = m.qz_dual().unwrap();
        assert_eq!(d.underlying().invariant_factors(), vec![BigInt::from(8)]);
        for gi in g.elements() {
            assert!(d.hom_equal(d.action_matrix(gi), m.action_matrix(gi)));
        }
    }

    #[test]
    fn qz_dual_double_dual() {
        let g = FiniteGroup::cyclic(2);
        let m = GammaModule::from_character(g, 8, &[1, 7]).unwrap();
        let dd = m.qz_dual().unwrap().qz_dual().unwrap();
        assert_eq!(dd.underlying().invariant_factors(), m.underlying().invariant_factors());
        for gi in m.group().elements() {
            assert!(m.hom_equal(dd.action_matrix(gi), m.action_matrix(gi)));
        }
    }

    #[test]
    fn qz_dual_requires_finite() {
        assert!(sign_module_on_z().qz_dual().is_err());
    }

    #[test]
    fn qz_dual_trivial_and_split() {
        let g = FiniteGroup::cyclic(2);
        let m = GammaModule::trivial_action(
            g,
            Arc::new(FinAbGroup::from_invariant_factors(&[BigInt::from(2), BigInt::from(6)])),
        );
        let d = m.qz_dual().unwrap();
        assert_eq!(
            d.underlying().invariant_factors(),
            vec![BigInt::from(2), BigInt::from(6)]
        );
    }
}
