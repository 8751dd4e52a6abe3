//! The nine-term homology window attached to a short exact sequence of
//! Γ-modules:
//!
//!   H₁(Γ,B′) → H₁(Γ,B) → H₁(Γ,B″)
//!     —δ₁→ (B′)_{Γ,T} → B_{Γ,T} → (B″)_{Γ,T}
//!     —δ₀→ (B′⊗Q/Z)_Γ → (B⊗Q/Z)_Γ → (B″⊗Q/Z)_Γ → 0
//!
//! H₁ is computed as Tate Ĥ^{−2}; δ₁ is the cohomological connecting map
//! transported through the explicit H^{−1} description; δ₀ is the rational
//! lifting recipe of `lowdeg::connecting_delta`. Exactness is verified at
//! every node and reported.

use crate::abelian::{exact_at, torsion_part, AbHom, FinAbGroup};
use crate::complex::BoundedComplex;
use crate::lowdeg::{compare_h_minus1, connecting_delta, explicit_h_minus1, ConnectingDelta, ShortExact};
use crate::matrix::{same_lattice, IntMatrix, Solver};
use crate::qz::{exact_at_qz_node, exact_qz_tail, QZModule};
use crate::tate::TateContext;
use crate::Result;
use num_bigint::BigInt;
use num_traits::Zero;
use std::sync::Arc;

pub struct HinichSequence {
    /// H₁ of B′, B, B″ (as abstract groups).
    pub h1: [Arc<FinAbGroup>; 3],
    pub h1_maps: [AbHom; 2],
    /// δ₁ : H₁(Γ,B″) → (B′)_{Γ,Tors}
    pub delta1: AbHom,
    /// torsion parts of the coinvariants of B′, B, B″
    pub tors: [Arc<FinAbGroup>; 3],
    pub tors_maps: [AbHom; 2],
    /// δ₀ : (B″)_{Γ,Tors} → (B′ ⊗ Q/Z)_Γ
    pub delta0: ConnectingDelta,
    /// the three divisible groups (A ⊗ Q/Z)_Γ
    pub qz: [QZModule; 3],
    /// induced integer matrices on the divisible parts
    pub qz_maps: [IntMatrix; 2],
    /// per-node exactness, in sequence order (7 interior nodes + surjectivity)
    pub exactness: Vec<(String, bool)>,
}

impl HinichSequence {
    pub fn is_exact(&self) -> bool {
        self.exactness.iter().all(|(_, ok)| *ok)
    }
}

/// Map (A)_{Γ,Tors} → (B)_{Γ,Tors} induced by an equivariant hom A → B
/// (which descends to coinvariants and preserves torsion).
fn torsion_coinv_map(
    f: &AbHom,
    co_src: &Arc<FinAbGroup>,
    tors_src: &(Arc<FinAbGroup>, AbHom),
    co_tgt: &Arc<FinAbGroup>,
    tors_tgt: &(Arc<FinAbGroup>, AbHom),
) -> AbHom {
    let _ = co_src;
    let solver = Solver::new(&tors_tgt.1.matrix().hstack(co_tgt.relations()));
    let cols: Vec<Vec<BigInt>> = (0..tors_src.0.ngens())
        .map(|j| {
            let mut unit = vec![BigInt::zero(); tors_src.0.ngens()];
            unit[j] = num_traits::One::one();
            let in_coinv = f.matrix().mul_vec(&tors_src.1.apply(&unit));
            let sol = solver.solve(&in_coinv).expect("torsion maps to torsion");
            sol[..tors_tgt.0.ngens()].to_vec()
        })
        .collect();
    AbHom::new(
        tors_src.0.clone(),
        tors_tgt.0.clone(),
        IntMatrix::from_columns(tors_tgt.0.ngens(), &cols),
    )
    .expect("induced torsion map is well defined")
}

pub fn hinich_sequence(ses: &ShortExact, depth: i64) -> Result<HinichSequence> {
    let ctx = TateContext::new(ses.a1.group().clone(), depth.max(3));

    // H₁ = Ĥ^{−2}
    let t1 = ctx.cohomology(&ses.a1, -2)?;
    let t2 = ctx.cohomology(&ses.a2, -2)?;
    let t3 = ctx.cohomology(&ses.a3, -2)?;
    let c1 = BoundedComplex::concentrated(0, ses.a1.clone());
    let c2 = BoundedComplex::concentrated(0, ses.a2.clone());
    let c3 = BoundedComplex::concentrated(0, ses.a3.clone());
    let h1_i = ctx.induced_map(&c1, &c2, &[ses.inj.clone()], &t1, &t2);
    let h1_p = ctx.induced_map(&c2, &c3, &[ses.surj.clone()], &t2, &t3);

    // δ₁: Tate connecting Ĥ^{−2}(B″) → Ĥ^{−1}(B′), then the explicit
    // identification Ĥ^{−1}(B′) ≅ ker N/I ↪ (B′_Γ)_Tors.
    let hm1 = ctx.cohomology(&ses.a1, -1)?;
    let conn = ctx.connecting(&ses.inj, &ses.surj, &t3, &hm1, &ses.a2);
    let ex1 = explicit_h_minus1(&ses.a1);
    let cmp = compare_h_minus1(&ses.a1, &ex1, &hm1)?;
    let cmp_inv = cmp.inverse().expect("comparison is an isomorphism");

    // coinvariants and torsion parts
    let (co1, _) = ses.a1.coinvariants();
    let (co2, _) = ses.a2.coinvariants();
    let (co3, _) = ses.a3.coinvariants();
    let tors1 = torsion_part(&co1);
    let tors2 = torsion_part(&co2);
    let tors3 = torsion_part(&co3);

    // δ₁ lands in (B′_Γ)_Tors; ex1.into_torsion targets torsion_part of co1,
    // which is the same presented group (torsion_part is deterministic), so
    // rebase the target Arc to keep everything pointer-compatible.
    let delta1_raw = ex1.into_torsion.compose(&cmp_inv).compose(&conn);
    let delta1 = AbHom::new(t3.group().clone(), tors1.0.clone(), delta1_raw.matrix().clone())
        .expect("delta1 well defined");

    let ti = torsion_coinv_map(&ses.inj, &co1, &tors1, &co2, &tors2);
    let tp = torsion_coinv_map(&ses.surj, &co2, &tors2, &co3, &tors3);

    // δ₀ and the divisible tail
    let delta0 = connecting_delta(ses)?;
    // rebase delta0 source to tors3 (same presentation by determinism)
    debug_assert_eq!(delta0.source.ngens(), tors3.0.ngens());
    let qz1 = crate::qz::qz_tensor(&co1);
    let qz2 = crate::qz::qz_tensor(&co2);
    let qz3 = crate::qz::qz_tensor(&co3);
    let f1 = AbHom::new_unchecked(co1.clone(), co2.clone(), ses.inj.matrix().clone()).tf_matrix();
    let f2 = AbHom::new_unchecked(co2.clone(), co3.clone(), ses.surj.matrix().clone()).tf_matrix();

    // exactness at every node
    let mut exactness = Vec::new();
    exactness.push(("H1(B)".to_string(), exact_at(&h1_i, &h1_p)));
    exactness.push(("H1(B'')".to_string(), exact_at(&h1_p, &delta1)));
    exactness.push(("(B')_T".to_string(), exact_at(&delta1, &ti)));
    exactness.push(("B_T".to_string(), exact_at(&ti, &tp)));
    // at (B'')_T: im(tp) = ker(δ₀)
    let ker_d0 = delta0.map.kernel_lattice();
    exactness.push(("(B'')_T".to_string(), same_lattice(&tp.image_lattice(), &ker_d0)));
    // at (B'⊗Q/Z)_Γ: im(δ₀) = ker(f1 on Q/Z)
    exactness.push(("(B'⊗Q/Z)".to_string(), exact_at_qz_node(&delta0.map, &f1)));
    // tail: (B'⊗Q/Z) → (B⊗Q/Z) → (B''⊗Q/Z) → 0
    exactness.push(("QZ tail".to_string(), exact_qz_tail(&f1, &f2)));

    Ok(HinichSequence {
        h1: [t1.group().clone(), t2.group().clone(), t3.group().clone()],
        h1_maps: [h1_i, h1_p],
        delta1,
        tors: [tors1.0, tors2.0, tors3.0],
        tors_maps: [ti, tp],
        delta0,
        qz: [qz1, qz2, qz3],
        qz_maps: [f1, f2],
        exactness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmodule::GammaModule;
    use crate::group::FiniteGroup;
    use crate::qz::frac_mod_one;
    use num_rational::BigRational;
    use num_traits::One;

    #[test]
    fn z_x2_z_over_z2() {
        // 0 → Z → Z → Z/2 → 0 with trivial Z/2-action.
        let g = FiniteGroup::cyclic(2);
        let z = Arc::new(FinAbGroup::free(1));
        let z2 = Arc::new(FinAbGroup::cyclic(2));
        let a1 = GammaModule::trivial_action(g.clone(), z.clone());
        let a2 = GammaModule::trivial_action(g.clone(), z.clone());
        let a3 = GammaModule::trivial_action(g.clone(), z2.clone());
        let inj = AbHom::new(z.clone(), z.clone(), IntMatrix::from_rows(&[&[2]])).unwrap();
        let surj = AbHom::new(z.clone(), z2, IntMatrix::identity(1)).unwrap();
        let ses = ShortExact::new(a1, a2, a3, inj, surj).unwrap();
        let h = hinich_sequence(&ses, 3).unwrap();
        assert!(h.is_exact(), "exactness report: {:?}", h.exactness);
        // frozen terms: H₁(Z/2,Z) = Z/2, H₁(Z/2,Z/2) = Z/2, torsion window
        // (0, 0, Z/2), divisible tail Q/Z → Q/Z → 0.
        assert_eq!(h.h1[0].invariant_factors(), vec![BigInt::from(2)]);
        assert_eq!(h.h1[1].invariant_factors(), vec![BigInt::from(2)]);
        assert_eq!(h.h1[2].invariant_factors(), vec![BigInt::from(2)]);
        assert!(h.tors[0].is_trivial());
        assert!(h.tors[1].is_trivial());
        assert_eq!(h.tors[2].invariant_factors(), vec![BigInt::from(2)]);
        assert_eq!(h.qz[0].divisible_rank, 1);
        assert_eq!(h.qz[1].divisible_rank, 1);
        assert_eq!(h.qz[2].divisible_rank, 0);
        // δ₀ sends the generator to 1/2
        let v = h.delta0.map.apply(&[BigInt::one()]);
        assert_eq!(frac_mod_one(&v[0]), BigRational::new(BigInt::one(), BigInt::from(2)));
        // the Q/Z-level map is multiplication by 2
        assert_eq!(h.qz_maps[0], IntMatrix::from_rows(&[&[2]]));
    }

    #[test]
    fn split_sequence_has_zero_connecting_maps() {
        let g = FiniteGroup::cyclic(2);
        let z4 = Arc::new(FinAbGroup::cyclic(4));
        let z = Arc::new(FinAbGroup::free(1));
        let sum = Arc::new(FinAbGroup::from_invariant_factors(&[BigInt::from(4), BigInt::zero()]));
        let a1 = GammaModule::trivial_action(g.clone(), z4.clone());
        let a2 = GammaModule::trivial_action(g.clone(), sum.clone());
        let a3 = GammaModule::trivial_action(g.clone(), z.clone());
        let inj = AbHom::new(z4, sum.clone(), IntMatrix::from_rows(&[&[1], &[0]])).unwrap();
        let surj = AbHom::new(sum, z, IntMatrix::from_rows(&[&[0, 1]])).unwrap();
        let ses = ShortExact::new(a1, a2, a3, inj, surj).unwrap();
        let h = hinich_sequence(&ses, 3).unwrap();
        assert!(h.is_exact(), "{:?}", h.exactness);
        let zero1 = AbHom::zero(h.delta1.source().clone(), h.delta1.target().clone());
        assert!(h.delta1.equals(&zero1));
        for j in 0..h.delta0.source.ngens() {
            let mut unit = vec![BigInt::zero(); h.delta0.source.ngens()];
            unit[j] = BigInt::one();
            assert!(h.delta0.map.apply(&unit).iter().all(|q| frac_mod_one(q).is_zero()));
        }
    }

    #[test]
    fn sign_module_sequence() {
        // 0 → Z --x3--> Z → Z/3 → 0 with the sign action of Z/2 twisted in:
        // exercise a nontrivial action and odd torsion.
        let g = FiniteGroup::cyclic(2);
        let z = Arc::new(FinAbGroup::free(1));
        let z3 = Arc::new(FinAbGroup::cyclic(3));
        let sign = vec![IntMatrix::identity(1), IntMatrix::from_rows(&[&[-1]])];
        let a1 = GammaModule::new(g.clone(), z.clone(), sign.clone()).unwrap();
        let a2 = GammaModule::new(g.clone(), z.clone(), sign).unwrap();
        let a3 = GammaModule::from_character(g.clone(), 3, &[1, 2]).unwrap();
        let inj = AbHom::new(z.clone(), z.clone(), IntMatrix::from_rows(&[&[3]])).unwrap();
        let surj = AbHom::new(z, z3, IntMatrix::identity(1)).unwrap();
        let ses = ShortExact::new(a1, a2, a3, inj, surj).unwrap();
        let h = hinich_sequence(&ses, 3).unwrap();
        assert!(h.is_exact(), "{:?}", h.exactness);
    }
}
