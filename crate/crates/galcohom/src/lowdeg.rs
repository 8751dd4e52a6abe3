//! Explicit degree −1 and 0 descriptions, the map ξ_Γ into (A ⊗ Q/Z)_Γ,
//! and the connecting map δ : (A₃)_{Γ,Tors} → (A₁ ⊗ Q/Z)_Γ of a short
//! exact sequence.

use crate::abelian::{exact_at, AbHom, FinAbGroup};
use crate::gmodule::GammaModule;
use crate::matrix::{IntMatrix, Solver};
use crate::qz::{QZMap, QZModule};
use crate::tate::TateGroup;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::sync::Arc;

/// H^0(Γ,M) presented as M^Γ / N_Γ M, with the witness data needed to
/// compare against the resolution computation and to feed ξ_Γ.
pub struct ExplicitH0 {
    pub group: Arc<FinAbGroup>,
    /// M^Γ with its inclusion into M.
    pub invariants: Arc<FinAbGroup>,
    pub inclusion: AbHom,
    /// projection M^Γ → H^0
    pub projection: AbHom,
}

/// H^{-1}(Γ,M) presented as ker N_Γ / I_Γ M, together with the natural
/// inclusion into M_{Γ,Tors}.
pub struct ExplicitHMinus1 {
    pub group: Arc<FinAbGroup>,
    /// generators of ker N as columns in M-coordinates
    pub ker_gens: IntMatrix,
    /// the inclusion H^{-1} → (M_Γ)_Tors
    pub into_torsion: AbHom,
}

pub fn explicit_h0(m: &GammaModule) -> ExplicitH0 {
    let (inv, inc) = m.invariants();
    // Norm lands in invariants; express each norm image in M^Γ coordinates.
    let solver = Solver::new(&inc.matrix().hstack(m.underlying().relations()));
    let cols: Vec<Vec<BigInt>> = (0..m.underlying().ngens())
        .map(|j| {
            let nj = m.norm_map().matrix().column(j);
            let sol = solver.solve(&nj).expect("norm image is invariant");
            sol[..inv.ngens()].to_vec()
        })
        .collect();
    let norm_into_inv = AbHom::new(
        m.underlying().clone(),
        inv.clone(),
        IntMatrix::from_columns(inv.ngens(), &cols),
    )
    .expect("norm corestricted to invariants");
    let (h0, projection) = norm_into_inv.cokernel();
    ExplicitH0 { group: h0, invariants: inv, inclusion: inc, projection }
}

pub fn explicit_h_minus1(m: &GammaModule) -> ExplicitHMinus1 {
    let n = m.norm_map();
    let (_, ker_inc) = n.kernel();
    let ker_gens = ker_inc.matrix().clone();
    // I_Γ M columns
    let ngens = m.underlying().ngens();
    let mut ig = m.underlying().relations().clone();
    for g in m.group().elements() {
        if g == m.group().identity() {
            continue;
        }
        ig = ig.hstack(&m.action_matrix(g).sub(&IntMatrix::identity(ngens)));
    }
    // H^{-1} = ker N / I_Γ M: subquotient inside M with relations I_Γ M.
    let amb = Arc::new(FinAbGroup::new(ngens, ig.clone()));
    let rels = crate::matrix::congruence_kernel(&ker_gens, &ig);
    let group = Arc::new(FinAbGroup::new(ker_gens.cols(), rels));
    // inclusion into (M_Γ)_Tors
    let (co, _) = m.coinvariants();
    let (tors, tinc) = crate::abelian::torsion_part(&co);
    let solver = Solver::new(&tinc.matrix().hstack(co.relations()));
    let cols: Vec<Vec<BigInt>> = ker_gens
        .columns()
        .map(|c| {
            let sol = solver.solve(&c).expect("kernel of norm is torsion in coinvariants");
            sol[..tors.ngens()].to_vec()
        })
        .collect();
    let into_torsion =
        AbHom::new(group.clone(), tors, IntMatrix::from_columns(tinc.source().ngens(), &cols))
            .expect("H^{-1} includes into coinvariant torsion");
    let _ = amb;
    ExplicitHMinus1 { group, ker_gens, into_torsion }
}

/// Comparison isomorphism between the explicit H^0 and the resolution
/// computation (C^0 ≅ M makes representatives direct M-elements).
pub fn compare_h0(_m: &GammaModule, ex: &ExplicitH0, h: &TateGroup) -> Result<AbHom> {
    let cols: Vec<Vec<BigInt>> = (0..ex.group.ngens())
        .map(|j| {
            // generator j of H0: representative in M^Γ then in M
            let mut unit = vec![BigInt::zero(); ex.group.ngens()];
            unit[j] = BigInt::one();
            let in_m = ex.inclusion.apply(&unit);
            h.class_of(&in_m)
        })
        .collect();
    let iso = AbHom::new(
        ex.group.clone(),
        h.group().clone(),
        IntMatrix::from_columns(h.group().ngens(), &cols),
    )?;
    if !iso.is_isomorphism() {
        return Err(Error::NotExact("explicit H^0 does not match the resolution".into()));
    }
    Ok(iso)
}

pub fn compare_h_minus1(m: &GammaModule, ex: &ExplicitHMinus1, h: &TateGroup) -> Result<AbHom> {
    let _ = m;
    let cols: Vec<Vec<BigInt>> = (0..ex.group.ngens())
        .map(|j| h.class_of(&ex.ker_gens.column(j)))
        .collect();
    let iso = AbHom::new(
        ex.group.clone(),
        h.group().clone(),
        IntMatrix::from_columns(h.group().ngens(), &cols),
    )?;
    if !iso.is_isomorphism() {
        return Err(Error::NotExact("explicit H^{-1} does not match the resolution".into()));
    }
    Ok(iso)
}

/// ξ_Γ : H^0(Γ,M) → (M ⊗ Q/Z)_Γ, sending the class of x ∈ M^Γ to the class
/// of |Γ|⁻¹·x in the divisible group (M_Γ)_tf ⊗ Q/Z.
pub fn xi_map(m: &GammaModule, ex: &ExplicitH0) -> Result<QZMap> {
    let (co, proj) = m.coinvariants();
    let rank = co.free_rank();
    let order = BigInt::from(m.group().order());
    let entries: Vec<Vec<BigRational>> = (0..rank)
        .map(|r| {
            (0..ex.group.ngens())
                .map(|j| {
                    let mut unit = vec![BigInt::zero(); ex.group.ngens()];
                    unit[j] = BigInt::one();
                    let x = ex.inclusion.apply(&unit);
                    let tf = co.tf_coords(&proj.apply(&x));
                    BigRational::new(tf[r].clone(), order.clone())
                })
                .collect()
        })
        .collect();
    QZMap::new(ex.group.clone(), rank, entries)
}

pub fn xi_target(m: &GammaModule) -> QZModule {
    let (co, _) = m.coinvariants();
    crate::qz::qz_tensor(&co)
}

/// A short exact sequence of Γ-modules with checked exactness.
pub struct ShortExact {
    pub a1: GammaModule,
    pub a2: GammaModule,
    pub a3: GammaModule,
    pub inj: AbHom,
    pub surj: AbHom,
}

impl ShortExact {
    pub fn new(
        a1: GammaModule,
        a2: GammaModule,
        a3: GammaModule,
        inj: AbHom,
        surj: AbHom,
    ) -> Result<Self> {
        if !inj.is_injective() {
            return Err(Error::NotExact("first map is not injective".into()));
        }
        if !surj.is_surjective() {
            return Err(Error::NotExact("second map is not surjective".into()));
        }
        if !exact_at(&inj, &surj) {
            return Err(Error::NotExact("image ≠ kernel at the middle term".into()));
        }
        // equivariance of both maps
        for g in a1.group().elements() {
            let lhs = inj.matrix().mul(a1.action_matrix(g));
            let rhs = a2.action_matrix(g).mul(inj.matrix());
            for j in 0..lhs.cols() {
                if !a2.underlying().elements_equal(&lhs.column(j), &rhs.column(j)) {
                    return Err(Error::NotExact("injection is not equivariant".into()));
                }
            }
            let lhs = surj.matrix().mul(a2.action_matrix(g));
            let rhs = a3.action_matrix(g).mul(surj.matrix());
            for j in 0..lhs.cols() {
                if !a3.underlying().elements_equal(&lhs.column(j), &rhs.column(j)) {
                    return Err(Error::NotExact("surjection is not equivariant".into()));
                }
            }
        }
        Ok(ShortExact { a1, a2, a3, inj, surj })
    }
}

/// The connecting map δ : (A₃)_{Γ,Tors} → (A₁ ⊗ Q/Z)_Γ.
///
/// On a torsion class [a₃]: with n the order of the class, solve
/// n·a₃ = Σ_γ (γ a_{3,γ} − a_{3,γ}), lift everything to A₂, and read off
/// a₁ = n·a₂ − Σ(γ a_{2,γ} − a_{2,γ}) ∈ A₁; δ[a₃] = [n⁻¹ a₁].
pub struct ConnectingDelta {
    /// source: (A₃_Γ)_Tors
    pub source: Arc<FinAbGroup>,
    pub source_inc: AbHom,
    pub map: QZMap,
    pub target: QZModule,
}

pub fn connecting_delta(ses: &ShortExact) -> Result<ConnectingDelta> {
    let (co3, proj3) = ses.a3.coinvariants();
    let (tors3, tinc3) = crate::abelian::torsion_part(&co3);
    let (co1, proj1) = ses.a1.coinvariants();
    let rank = co1.free_rank();

    let u3 = ses.a3.underlying().ngens();
    // Columns of the I_Γ A₃ span: (γ−1)e_j for all γ, j; remember γ and j.
    let mut ig_cols: Vec<(usize, usize, Vec<BigInt>)> = Vec::new();
    for g in ses.a3.group().elements() {
        if g == ses.a3.group().identity() {
            continue;
        }
        let d = ses.a3.action_matrix(g).sub(&IntMatrix::identity(u3));
        for j in 0..u3 {
            ig_cols.push((g, j, d.column(j)));
        }
    }
    let ig = IntMatrix::from_columns(u3, &ig_cols.iter().map(|c| c.2.clone()).collect::<Vec<_>>());
    // n·a₃ ∈ I_Γ A₃ + relations(A₃): solve with the relation columns too.
    let full = ig.hstack(ses.a3.underlying().relations());
    let solver = Solver::new(&full);

    let mut entries: Vec<Vec<BigRational>> = vec![Vec::new(); rank];
    for jgen in 0..tors3.ngens() {
        let mut unit = vec![BigInt::zero(); tors3.ngens()];
        unit[jgen] = BigInt::one();
        // a₃ as an A₃ element
        let a3 = tinc3.apply(&unit);
        let class = proj3.preimage_class(&a3);
        let n = co3.element_order(&class).expect("torsion class has finite order");
        let na3: Vec<BigInt> = a3.iter().map(|x| x * &n).collect();
        let sol = solver.solve(&na3).ok_or_else(|| {
            Error::NotExact("n·a₃ not in I_Γ A₃: torsion order computation failed".into())
        })?;
        // lift a₃ and the a_{3,γ} through the surjection
        let a2 = ses.surj.preimage(&a3).expect("surjective");
        let u2 = ses.a2.underlying().ngens();
        let mut acc = vec![BigInt::zero(); u2];
        for (k, (g, j, _)) in ig_cols.iter().enumerate() {
            let coef = &sol[k];
            if coef.is_zero() {
                continue;
            }
            // a_{3,γ} contribution: coef · e_j, lifted
            let mut e = vec![BigInt::zero(); u3];
            e[*j] = BigInt::one();
            let lift = ses.surj.preimage(&e).expect("surjective");
            let moved = ses.a2.action_matrix(*g).mul_vec(&lift);
            for i in 0..u2 {
                acc[i] += coef * (&moved[i] - &lift[i]);
            }
        }
        let z: Vec<BigInt> = (0..u2).map(|i| &a2[i] * &n - &acc[i]).collect();
        let a1 = ses.inj.preimage(&z).ok_or_else(|| {
            Error::NotExact("lifted difference does not come from the subobject".into())
        })?;
        let tf = co1.tf_coords(&proj1.apply(&a1));
        for r in 0..rank {
            entries[r].push(BigRational::new(tf[r].clone(), n.clone()));
        }
    }
    let map = QZMap::new(tors3.clone(), rank, entries)?;
    Ok(ConnectingDelta { source: tors3, source_inc: tinc3, map, target: crate::qz::qz_tensor(&co1) })
}

trait PreimageClass {
    fn preimage_class(&self, y: &[BigInt]) -> Vec<BigInt>;
}

impl PreimageClass for AbHom {
    /// For a projection with identity matrix this is just the coordinates.
    fn preimage_class(&self, y: &[BigInt]) -> Vec<BigInt> {
        self.apply(y)
    }
}
