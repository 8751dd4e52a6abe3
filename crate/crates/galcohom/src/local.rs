//! Local output formulas: nonarchimedean H^1 and H^2_ab, the real case in
//! terms of Tate cohomology of the order-≤2 decomposition group, and the
//! degree ≥ 3 wrapper.

use crate::abelian::{torsion_part, AbHom, FinAbGroup};
use crate::gmodule::GammaModule;
use crate::group::Subgroup;
use crate::qz::{qz_tensor, QZModule};
use crate::tate::{tate_cohomology, TateGroup};
use crate::{Error, Result};
use std::sync::Arc;

/// H^1(F_v, G) ≅ (M_Γ)_Tors at a nonarchimedean place.
pub fn local_h1_nonarch(m: &GammaModule) -> (Arc<FinAbGroup>, AbHom) {
    let (co, _) = m.coinvariants();
    torsion_part(&co)
}

/// H^2_ab(F_v, G) ≅ (M ⊗ Q/Z)_Γ at a nonarchimedean place.
pub fn local_h2_nonarch(m: &GammaModule) -> QZModule {
    let (co, _) = m.coinvariants();
    qz_tensor(&co)
}

/// H^n(R, T^{-1}→T^0) ≅ H^{n-2}(Γ(v̄), M) for a real place; the stabilizer
/// must have order at most 2.
pub fn local_real(m: &GammaModule, stab: &Subgroup, n: i64, depth: i64) -> Result<TateGroup> {
    if stab.order() > 2 {
        return Err(Error::NotArchimedean(stab.order()));
    }
    let restricted = m.restrict(stab);
    tate_cohomology(&restricted, n - 2, depth)
}

/// H^i_ab(F, G) ≅ ∏_{v real} H^{i-2}(Γ(v̄), M) for i ≥ 3: returns the list
/// of local factors (one per real orbit).
pub fn h_ab_high(
    m: &GammaModule,
    real_stabs: &[Subgroup],
    i: i64,
    depth: i64,
) -> Result<Vec<Arc<FinAbGroup>>> {
    assert!(i >= 3);
    real_stabs
        .iter()
        .map(|s| local_real(m, s, i, depth).map(|t| t.group().clone()))
        .collect()
}
