//! Global output formulas: the fiber products F¹_S and F²_S, the structured
//! H¹ (finite core plus residual descriptors), and the archimedean local
//! data that feeds the right-hand legs.

use crate::abelian::{torsion_part, AbHom, FinAbGroup};
use crate::datum::{ArchModeSpec, ArithmeticDatum};
use crate::fiber::{FiberProductSet, PointedSetMap, RightLeg};
use crate::lowdeg::{explicit_h0, explicit_h_minus1, xi_map};
use crate::matrix::{congruence_kernel, kernel_basis, smith_normal_form, IntMatrix, Solver};
use crate::places::{induced_module, localization, InducedModule, PlaceKind};
use crate::qz::QZMap;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::str::FromStr;
use std::sync::Arc;

/// Shared per-datum computations.
pub struct GlobalContext {
    pub ind: InducedModule,
    /// (M[S_E]₀)_Γ with its torsion part
    pub co0: Arc<FinAbGroup>,
    pub proj0: AbHom,
    pub tors0: Arc<FinAbGroup>,
    pub tors0_inc: AbHom,
    /// per orbit: localization (M[S_E]₀)_Γ → M_{Γ(v̄)}
    pub locs: Vec<AbHom>,
    /// per orbit: torsion part of M_{Γ(v̄)} with inclusion
    pub local_tors: Vec<(Arc<FinAbGroup>, AbHom)>,
    pub real_orbits: Vec<usize>,
}

impl GlobalContext {
    pub fn new(d: &ArithmeticDatum) -> Result<GlobalContext> {
        let ind = induced_module(&d.module, &d.places)?;
        let (co0, proj0) = ind.ms0.coinvariants();
        let (tors0, tors0_inc) = torsion_part(&co0);
        let mut locs = Vec::new();
        let mut local_tors = Vec::new();
        for o in 0..d.places.orbits().len() {
            let l = localization(&d.module, &ind, o);
            let (lc, _) = d.module.restrict(d.places.orbits()[o].stabilizer()).coinvariants();
            let lt = torsion_part(&lc);
            locs.push(l);
            local_tors.push(lt);
        }
        let real_orbits = d
            .places
            .orbits()
            .iter()
            .enumerate()
            .filter(|(_, o)| o.kind == PlaceKind::Real)
            .map(|(i, _)| i)
            .collect();
        Ok(GlobalContext { ind, co0, proj0, tors0, tors0_inc, locs, local_tors, real_orbits })
    }

    /// Localization restricted to the torsion part, valued in the torsion
    /// part of the local coinvariants.
    pub fn loc_on_torsion(&self, orbit: usize) -> AbHom {
        let l = &self.locs[orbit];
        let (lt, lt_inc) = &self.local_tors[orbit];
        let solver = Solver::new(&lt_inc.matrix().hstack(l.target().relations()));
        let cols: Vec<Vec<BigInt>> = (0..self.tors0.ngens())
            .map(|j| {
                let mut unit = vec![BigInt::zero(); self.tors0.ngens()];
                unit[j] = BigInt::one();
                let img = l.apply(&self.tors0_inc.apply(&unit));
                let sol = solver.solve(&img).expect("torsion localizes to torsion");
                sol[..lt.ngens()].to_vec()
            })
            .collect();
        AbHom::new(self.tors0.clone(), lt.clone(), IntMatrix::from_columns(lt.ngens(), &cols))
            .expect("localization restricts to torsion")
    }

    /// Direct sum of the torsion parts over a list of orbits, with the
    /// stacked localization from tors0.
    pub fn stacked_torsion_localization(&self, orbits: &[usize]) -> (Arc<FinAbGroup>, AbHom) {
        let blocks: Vec<Arc<FinAbGroup>> =
            orbits.iter().map(|&o| self.local_tors[o].0.clone()).collect();
        let sum = direct_sum_group(&blocks);
        let maps: Vec<AbHom> = orbits.iter().map(|&o| self.loc_on_torsion(o)).collect();
        let total: usize = blocks.iter().map(|b| b.ngens()).sum();
        let mut mat = IntMatrix::zero(total, self.tors0.ngens());
        let mut off = 0;
        for (b, m) in blocks.iter().zip(&maps) {
            for i in 0..b.ngens() {
                for j in 0..self.tors0.ngens() {
                    mat.set(off + i, j, m.matrix().at(i, j).clone());
                }
            }
            off += b.ngens();
        }
        let hom = AbHom::new(self.tors0.clone(), sum.clone(), mat)
            .expect("stacked localization is well defined");
        (sum, hom)
    }
}

pub fn direct_sum_group(blocks: &[Arc<FinAbGroup>]) -> Arc<FinAbGroup> {
    let total: usize = blocks.iter().map(|b| b.ngens()).sum();
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    let mut off = 0;
    for b in blocks {
        for rel in b.relations().columns() {
            let mut c = vec![BigInt::zero(); total];
            for (i, v) in rel.iter().enumerate() {
                c[off + i] = v.clone();
            }
            cols.push(c);
        }
        off += b.ngens();
    }
    Arc::new(FinAbGroup::new(total, IntMatrix::from_columns(total, &cols)))
}

/// The archimedean right leg of the degree-1 fiber products, per real orbit:
/// either the abelianized default H^{-1}(Γ(v̄),M) with its inclusion, or a
/// user-supplied pointed set.
pub enum ArchLeg {
    Group { group: Arc<FinAbGroup>, psi: AbHom },
    Set(PointedSetMap),
}

/// Build the archimedean legs. `use_user_modes` distinguishes h1_global
/// (honors arch_mode) from H¹_ab (always the abelianized groups).
pub fn arch_legs(
    d: &ArithmeticDatum,
    ctx: &GlobalContext,
    use_user_modes: bool,
) -> Result<Vec<ArchLeg>> {
    let mut legs = Vec::new();
    for &o in &ctx.real_orbits {
        let orbit = &d.places.orbits()[o];
        let restricted = d.module.restrict(orbit.stabilizer());
        let mode = d.arch_mode.get(&orbit.label);
        let user = match (use_user_modes, mode) {
            (true, Some(ArchModeSpec::UserSupplied { elements, base, psi })) => {
                Some((elements, base, psi))
            }
            (true, Some(ArchModeSpec::Named(n))) if n != "abelianized-default" => {
                return Err(Error::BadDatum(format!("unknown arch mode '{}'", n)))
            }
            _ => None,
        };
        match user {
            None => {
                let ex = explicit_h_minus1(&restricted);
                legs.push(ArchLeg::Group { group: ex.group.clone(), psi: ex.into_torsion });
            }
            Some((elements, base, psi)) => {
                if psi.len() != *elements {
                    return Err(Error::BadDatum("psi must list one image per element".into()));
                }
                let (lt, lt_inc) = &ctx.local_tors[o];
                let (lc, _) = restricted.coinvariants();
                let solver = Solver::new(&lt_inc.matrix().hstack(lc.relations()));
                let mut images = Vec::new();
                for (i, row) in psi.iter().enumerate() {
                    let mut coords = Vec::new();
                    for (j, v) in row.iter().enumerate() {
                        coords.push(BigInt::from_str(v).map_err(|e| Error::Parse {
                            path: format!("arch_mode.{}.psi[{}][{}]", orbit.label, i, j),
                            message: e.to_string(),
                        })?);
                    }
                    if coords.len() != d.module.underlying().ngens() {
                        return Err(Error::BadDatum(
                            "psi images must be module coordinate vectors".into(),
                        ));
                    }
                    let sol = solver.solve(&coords).ok_or_else(|| {
                        Error::BadDatum("psi image is not torsion in the local coinvariants".into())
                    })?;
                    images.push(sol[..lt.ngens()].to_vec());
                }
                if !lt.is_zero_element(&images[*base]) {
                    return Err(Error::BadDatum("psi must send the base point to 0".into()));
                }
                legs.push(ArchLeg::Set(PointedSetMap { size: *elements, base: *base, images }));
            }
        }
    }
    Ok(legs)
}

/// Combine per-orbit legs into one leg over the direct-sum middle.
fn combine_legs(legs: Vec<ArchLeg>, blocks: &[Arc<FinAbGroup>]) -> Result<RightLeg> {
    let all_groups = legs.iter().all(|l| matches!(l, ArchLeg::Group { .. }));
    let sum = direct_sum_group(blocks);
    if all_groups {
        let groups: Vec<Arc<FinAbGroup>> = legs
            .iter()
            .map(|l| match l {
                ArchLeg::Group { group, .. } => group.clone(),
                _ => unreachable!(),
            })
            .collect();
        let src = direct_sum_group(&groups);
        let total_r: usize = groups.iter().map(|g| g.ngens()).sum();
        let mut mat = IntMatrix::zero(sum.ngens(), total_r);
        let mut roff = 0;
        let mut moff = 0;
        for (leg, block) in legs.iter().zip(blocks) {
            let ArchLeg::Group { group, psi } = leg else { unreachable!() };
            for i in 0..block.ngens() {
                for j in 0..group.ngens() {
                    mat.set(moff + i, roff + j, psi.matrix().at(i, j).clone());
                }
            }
            roff += group.ngens();
            moff += block.ngens();
        }
        let map = AbHom::new(src.clone(), sum, mat)?;
        Ok(RightLeg::Group { group: src, map })
    } else {
        // enumerate the product of the element sets
        let mut sizes = Vec::new();
        let mut bases = Vec::new();
        let mut element_images: Vec<Vec<Vec<BigInt>>> = Vec::new();
        for (leg, block) in legs.iter().zip(blocks) {
            match leg {
                ArchLeg::Set(s) => {
                    sizes.push(s.size);
                    bases.push(s.base);
                    element_images.push(s.images.clone());
                }
                ArchLeg::Group { group, psi } => {
                    let elems = group.enumerate_elements();
                    sizes.push(elems.len());
                    bases.push(
                        elems
                            .iter()
                            .position(|e| group.is_zero_element(e))
                            .expect("zero element present"),
                    );
                    element_images.push(elems.iter().map(|e| psi.apply(e)).collect());
                }
            }
            let _ = block;
        }
        let total: usize = sizes.iter().product();
        if total > 200_000 {
            return Err(Error::TooLarge(format!("archimedean product of {} elements", total)));
        }
        let mut images = Vec::with_capacity(total);
        let mut base_index = 0;
        for flat in 0..total {
            let mut rem = flat;
            let mut coords = Vec::new();
            let mut is_base = true;
            for (k, &sz) in sizes.iter().enumerate() {
                let idx = rem % sz;
                rem /= sz;
                if idx != bases[k] {
                    is_base = false;
                }
                coords.extend(element_images[k][idx].clone());
            }
            if is_base {
                base_index = flat;
            }
            images.push(coords);
        }
        Ok(RightLeg::Set(PointedSetMap { size: total, base: base_index, images }))
    }
}

/// F¹_S(M): fiber product of (M[S_E]₀)_{Γ,T} → ⊕_real M_{Γ(v̄),T} ← ⊕_real H^{-1}(Γ(v̄),M).
pub fn f1_s(d: &ArithmeticDatum, ctx: &GlobalContext) -> Result<FiberProductSet> {
    let (_, left) = ctx.stacked_torsion_localization(&ctx.real_orbits);
    let blocks: Vec<Arc<FinAbGroup>> =
        ctx.real_orbits.iter().map(|&o| ctx.local_tors[o].0.clone()).collect();
    let legs = arch_legs(d, ctx, false)?;
    let right = combine_legs(legs, &blocks)?;
    FiberProductSet::new(left, right)
}

/// The degree-1 residual descriptor: one finite group per conjugacy class of
/// cyclic subgroups, M_{C,Tors}, one copy per place outside S.
pub struct ResidualDescriptor {
    pub class: String,
    pub h1: Arc<FinAbGroup>,
    pub h2_divisible_rank: usize,
}

pub fn residual_descriptors(d: &ArithmeticDatum) -> Vec<ResidualDescriptor> {
    d.group
        .cyclic_subgroups_up_to_conjugacy()
        .into_iter()
        .map(|c| {
            let rm = d.module.restrict(&c);
            let (co, _) = rm.coinvariants();
            let (t, _) = torsion_part(&co);
            ResidualDescriptor {
                class: c.describe(),
                h1: t,
                h2_divisible_rank: co.free_rank(),
            }
        })
        .collect()
}

/// The structured global H¹: finite fiber-product core, residual classes,
/// and per-element local components at every place of S.
pub struct StructuredH1 {
    pub core: FiberProductSet,
    pub residual: Vec<ResidualDescriptor>,
    /// local_components[e][o] = coordinates in the torsion part of the local
    /// coinvariants at orbit o, for core element e.
    pub local_components: Vec<Vec<Vec<BigInt>>>,
}

pub fn h1_global(d: &ArithmeticDatum, ctx: &GlobalContext) -> Result<StructuredH1> {
    for &o in &ctx.real_orbits {
        let label = &d.places.orbits()[o].label;
        if d.field_type == crate::datum::FieldType::Number && !d.arch_mode.contains_key(label) {
            // default applies implicitly; only user data can be missing if
            // explicitly demanded by the datum (named but unknown handled in
            // arch_legs)
        }
    }
    let (_, left) = ctx.stacked_torsion_localization(&ctx.real_orbits);
    let blocks: Vec<Arc<FinAbGroup>> =
        ctx.real_orbits.iter().map(|&o| ctx.local_tors[o].0.clone()).collect();
    let legs = arch_legs(d, ctx, true)?;
    let right = combine_legs(legs, &blocks)?;
    let core = FiberProductSet::new(left, right)?;
    let residual = residual_descriptors(d);
    // local components: finite orbits via localization of the left part,
    // real orbits from the matched middle value (the fiber condition).
    let mut local_components = Vec::with_capacity(core.elements.len());
    let loc_t: Vec<AbHom> = (0..d.places.orbits().len()).map(|o| ctx.loc_on_torsion(o)).collect();
    for (le, _ri) in &core.elements {
        let mut per_orbit = Vec::new();
        for (o, _) in d.places.orbits().iter().enumerate() {
            let v = loc_t[o].apply(le);
            per_orbit.push(ctx.local_tors[o].0.reduce(&v));
        }
        local_components.push(per_orbit);
    }
    Ok(StructuredH1 { core, residual, local_components })
}

/// The degree-2 fiber product F²_S: divisible rank plus the finite summand.
pub struct F2Report {
    pub divisible_rank: usize,
    pub finite: Arc<FinAbGroup>,
    pub residual: Vec<ResidualDescriptor>,
}

pub fn f2_s(d: &ArithmeticDatum, ctx: &GlobalContext) -> Result<F2Report> {
    // Left: (co0)_tf ⊗ Q/Z; middle: ⊕_real (M_{Γ(v̄)})_tf ⊗ Q/Z.
    let a = ctx.co0.free_rank();
    let mut l_rows = 0usize;
    let mut l_blocks = Vec::new();
    for &o in &ctx.real_orbits {
        let tf = ctx.locs[o].tf_matrix();
        l_rows += tf.rows();
        l_blocks.push(tf);
    }
    let mut l = IntMatrix::zero(l_rows, a);
    let mut off = 0;
    for b in &l_blocks {
        for i in 0..b.rows() {
            for j in 0..a {
                l.set(off + i, j, b.at(i, j).clone());
            }
        }
        off += b.rows();
    }
    // Right: ⊕_real H^0(Γ(v̄), M) with blockwise ξ.
    let mut h_blocks = Vec::new();
    let mut xi_rows: Vec<Vec<BigRational>> = vec![Vec::new(); l_rows];
    let mut row_off = 0;
    for (&o, lb) in ctx.real_orbits.iter().zip(&l_blocks) {
        let restricted = d.module.restrict(d.places.orbits()[o].stabilizer());
        let ex = explicit_h0(&restricted);
        let xi = xi_map(&restricted, &ex)?;
        // pad previous columns with zeros, add this block's entries
        let prev_cols: usize = h_blocks.iter().map(|b: &Arc<FinAbGroup>| b.ngens()).sum();
        for r in 0..l_rows {
            while xi_rows[r].len() < prev_cols {
                xi_rows[r].push(BigRational::zero());
            }
        }
        for r in 0..lb.rows() {
            for c in 0..ex.group.ngens() {
                xi_rows[row_off + r].push(xi.entries[r][c].clone());
            }
        }
        for r in 0..l_rows {
            let want = prev_cols + ex.group.ngens();
            while xi_rows[r].len() < want {
                xi_rows[r].push(BigRational::zero());
            }
        }
        h_blocks.push(ex.group.clone());
        row_off += lb.rows();
    }
    let h = direct_sum_group(&h_blocks);
    let xi_total = QZMap::new(h.clone(), l_rows, xi_rows)?;
    let (rank, finite) = fiber_qz_structure(&l, &h, &xi_total)?;
    Ok(F2Report { divisible_rank: rank, finite, residual: residual_descriptors(d) })
}

/// Structure of ker[(Q/Z)^a ⊕ H → (Q/Z)^b], (x,h) ↦ Lx − ξ(h):
/// divisible rank = nullity of L; the finite part is computed after
/// splitting off the rational kernel of L.
pub fn fiber_qz_structure(
    l: &IntMatrix,
    h: &Arc<FinAbGroup>,
    xi: &QZMap,
) -> Result<(usize, Arc<FinAbGroup>)> {
    let a = l.cols();
    let w = kernel_basis(l);
    let r = w.cols();
    // Complete the saturated kernel to a basis: in coordinates x' = U_w x the
    // kernel is the first r coordinates.
    let (lbar, _uw) = if r == 0 {
        (l.clone(), IntMatrix::identity(a))
    } else {
        let snf_w = smith_normal_form(&w);
        for d in snf_w.diagonal() {
            assert!(d.is_one(), "kernel basis is saturated");
        }
        let uw = snf_w.u.clone();
        // L in x' coordinates: L ∘ U_w⁻¹; first r columns vanish.
        let lu = l.mul(&snf_w.u_inv);
        let lbar = IntMatrix::from_fn(l.rows(), a - r, |i, j| lu.at(i, j + r).clone());
        (lbar, uw)
    };
    let a2 = a - r;
    // generators of the finite group ker[(Q/Z)^{a2} ⊕ H → (Q/Z)^b]
    let snf = smith_normal_form(&lbar);
    let diag = snf.diagonal();
    assert!(diag.iter().all(|d| !d.is_zero()), "reduced map must be injective over Q");
    // (a) kernel of lbar alone: V e_i / d_i
    let mut gens: Vec<(Vec<BigRational>, Vec<BigInt>)> = Vec::new();
    for (i, dd) in diag.iter().enumerate() {
        if dd.is_one() {
            continue;
        }
        let col = snf.v.column(i);
        let q: Vec<BigRational> =
            col.iter().map(|x| BigRational::new(x.clone(), dd.clone())).collect();
        gens.push((q, h.zero()));
    }
    // (b) H₀ = {h : ξ(h) ∈ im lbar}: rows of U beyond the rank give the
    // obstruction map into (Q/Z)^{b - a2}.
    let b = l.rows();
    if h.ngens() > 0 {
        let mut obs_rows = Vec::new();
        for i in a2..b {
            let row: Vec<BigRational> = (0..h.ngens())
                .map(|j| {
                    (0..b)
                        .map(|k| BigRational::from(snf.u.at(i, k).clone()) * &xi.entries[k][j])
                        .fold(BigRational::zero(), |x, y| x + y)
                })
                .collect();
            obs_rows.push(row);
        }
        let obs = QZMap { source: h.clone(), target_rank: b - a2, entries: obs_rows };
        let h0_gens = if b == a2 {
            IntMatrix::identity(h.ngens())
        } else {
            let (p, den) = obs.cleared();
            congruence_kernel(&p, &IntMatrix::identity(b - a2).scale(&den))
        };
        // lift each generator: x with lbar x ≡ ξ(h0) mod Z^b
        for j in 0..h0_gens.cols() {
            let hh = h0_gens.column(j);
            let target = xi.apply(&hh);
            // solve in SNF coordinates: z_i = (U·target)_i / d_i
            let ut: Vec<BigRational> = (0..b)
                .map(|i| {
                    (0..b)
                        .map(|k| BigRational::from(snf.u.at(i, k).clone()) * &target[k])
                        .fold(BigRational::zero(), |x, y| x + y)
                })
                .collect();
            let mut z = vec![BigRational::zero(); a2];
            for i in 0..a2 {
                z[i] = &ut[i] / BigRational::from(diag[i].clone());
            }
            let x: Vec<BigRational> = (0..a2)
                .map(|i| {
                    (0..a2)
                        .map(|k| BigRational::from(snf.v.at(i, k).clone()) * &z[k])
                        .fold(BigRational::zero(), |u, v| u + v)
                })
                .collect();
            gens.push((x, hh));
        }
    }
    // common denominator and embedding into (Z/N)^{a2} ⊕ H
    let mut nden = BigInt::one();
    for (q, _) in &gens {
        for v in q {
            nden = nden.lcm(v.denom());
        }
    }
    if let Some(e) = h.exponent() {
        if !e.is_zero() {
            nden = nden.lcm(&e);
        }
    }
    let nh = h.ngens();
    let amb_blocks = vec![
        Arc::new(FinAbGroup::from_invariant_factors(&vec![nden.clone(); a2])),
        h.clone(),
    ];
    let amb = direct_sum_group(&amb_blocks);
    let cols: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|(q, hh)| {
            let mut c = Vec::with_capacity(a2 + nh);
            for v in q {
                let scaled = v * BigRational::from(nden.clone());
                assert!(scaled.is_integer());
                c.push(scaled.to_integer());
            }
            c.extend(hh.iter().cloned());
            c
        })
        .collect();
    let gmat = IntMatrix::from_columns(a2 + nh, &cols);
    let rels = congruence_kernel(&gmat, amb.relations());
    let finite = Arc::new(FinAbGroup::new(gens.len(), rels));
    Ok((r, finite))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::builder_paper_example;

    #[test]
    fn paper_f1_core_is_z2_plus_z8() {
        let d = builder_paper_example();
        let ctx = GlobalContext::new(&d).unwrap();
        let f1 = f1_s(&d, &ctx).unwrap();
        // right leg bijective, so the fiber collapses onto the left group
        assert_eq!(f1.size(), 16);
        let (g, _) = f1.group.as_ref().unwrap();
        assert_eq!(g.invariant_factors(), vec![BigInt::from(2), BigInt::from(8)]);
        assert!(f1.consistent());
    }

    #[test]
    fn paper_h1_core_and_residuals() {
        let d = builder_paper_example();
        let ctx = GlobalContext::new(&d).unwrap();
        let h = h1_global(&d, &ctx).unwrap();
        assert_eq!(h.core.size(), 16);
        // residual classes: 1 ↦ Z/8, <3> ↦ Z/2, <5> ↦ Z/4, <7> ↦ Z/2
        let by_class: std::collections::BTreeMap<String, Vec<BigInt>> = h
            .residual
            .iter()
            .map(|r| (r.class.clone(), r.h1.invariant_factors()))
            .collect();
        assert_eq!(by_class["1"], vec![BigInt::from(8)]);
        assert_eq!(by_class["<3>"], vec![BigInt::from(2)]);
        assert_eq!(by_class["<5>"], vec![BigInt::from(4)]);
        assert_eq!(by_class["<7>"], vec![BigInt::from(2)]);
    }

    #[test]
    fn h1_local_components_match_fiber_condition() {
        // at real orbits the recorded component equals the matched ψ-image
        let d = builder_paper_example();
        let ctx = GlobalContext::new(&d).unwrap();
        let h = h1_global(&d, &ctx).unwrap();
        let RightLeg::Group { group, map } = &h.core.right else { panic!("default is a group") };
        let relems = group.enumerate_elements();
        // the single real orbit is index 2 and its block is the whole middle
        for (k, (_, ri)) in h.core.elements.iter().enumerate() {
            let psi_img = map.apply(&relems[*ri]);
            let mid = h.core.middle.reduce(&psi_img);
            assert_eq!(h.local_components[k][2], mid);
        }
    }

    #[test]
    fn hasse_principle_shape_for_zero_module() {
        // M = 0: the core is the product of the archimedean sets.
        let mut d = builder_paper_example();
        d.module = GammaModule::trivial_action(
            d.group.clone(),
            Arc::new(FinAbGroup::trivial()),
        );
        let ctx = GlobalContext::new(&d).unwrap();
        let h = h1_global(&d, &ctx).unwrap();
        assert_eq!(h.core.size(), 1); // H^{-1}(<7>, 0) = 0: product of one point
        for r in &h.residual {
            assert!(r.h1.is_trivial());
        }
    }

    #[test]
    fn user_supplied_arch_mode() {
        let mut d = builder_paper_example();
        // replace the default by an explicit 2-element pointed set with the
        // same images (0 and the generator of M/2M): core size unchanged.
        d.arch_mode.insert(
            "v7".into(),
            crate::datum::ArchModeSpec::UserSupplied {
                elements: 2,
                base: 0,
                psi: vec![vec!["0".into()], vec!["1".into()]],
            },
        );
        let ctx = GlobalContext::new(&d).unwrap();
        let h = h1_global(&d, &ctx).unwrap();
        assert_eq!(h.core.size(), 16);
        assert!(h.core.group.is_none()); // pointed-set leg: no group structure
    }

    #[test]
    fn f2_of_paper_datum() {
        // M is finite, so the left Q/Z side is trivial: no divisible part,
        // and the fiber reduces to ker ξ on H^0(<7>, M) — here trivial
        // because ξ lands in 0 forcing... compute and sanity-check shape.
        let d = builder_paper_example();
        let ctx = GlobalContext::new(&d).unwrap();
        let f2 = f2_s(&d, &ctx).unwrap();
        assert_eq!(f2.divisible_rank, 0);
        // residual: (M ⊗ Q/Z)_C = 0 for all classes (M finite)
        for r in &f2.residual {
            assert_eq!(r.h2_divisible_rank, 0);
        }
    }

    #[test]
    fn fiber_qz_structure_kernel_only() {
        // L = (2) : Q/Z → Q/Z, H = 0: kernel = Z/2.
        let l = IntMatrix::from_rows(&[&[2]]);
        let h = Arc::new(FinAbGroup::trivial());
        let xi = QZMap::zero(h.clone(), 1);
        let (r, fin) = fiber_qz_structure(&l, &h, &xi).unwrap();
        assert_eq!(r, 0);
        assert_eq!(fin.invariant_factors(), vec![BigInt::from(2)]);
        // zero map: divisible rank 1
        let l = IntMatrix::from_rows(&[&[0]]);
        let (r, fin) = fiber_qz_structure(&l, &h, &xi).unwrap();
        assert_eq!(r, 1);
        assert!(fin.is_trivial());
    }

    #[test]
    fn fiber_qz_structure_with_right_leg() {
        // L = id : Q/Z → Q/Z, H = Z/2 with ξ(h) = h/2: fiber = graph ≅ Z/2.
        let l = IntMatrix::identity(1);
        let h = Arc::new(FinAbGroup::cyclic(2));
        let xi = QZMap::new(
            h.clone(),
            1,
            vec![vec![BigRational::new(BigInt::one(), BigInt::from(2))]],
        )
        .unwrap();
        let (r, fin) = fiber_qz_structure(&l, &h, &xi).unwrap();
        assert_eq!(r, 0);
        assert_eq!(fin.invariant_factors(), vec![BigInt::from(2)]);
    }
}
