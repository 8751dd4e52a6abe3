//! Finite Γ-sets of places, induced modules M[S] and M[S]₀, localization
//! maps, and the S-decomposition attached to an equivariant map φ.

use crate::abelian::{AbHom, FinAbGroup};
use crate::gmodule::GammaModule;
use crate::group::{FiniteGroup, Subgroup};
use crate::matrix::IntMatrix;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::sync::Arc;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PlaceKind {
    Finite,
    Real,
    Complex,
}

#[derive(Clone)]
pub struct PlaceOrbit {
    pub label: String,
    pub kind: PlaceKind,
    stabilizer: Subgroup,
    /// Left coset representatives γ·Stab; reps[0] is the base point.
    coset_reps: Vec<usize>,
}

impl PlaceOrbit {
    pub fn new(label: String, kind: PlaceKind, stabilizer: Subgroup) -> Result<Self> {
        match kind {
            PlaceKind::Complex if stabilizer.order() != 1 => {
                return Err(Error::BadDatum(format!(
                    "complex orbit {} must have trivial stabilizer",
                    label
                )))
            }
            PlaceKind::Real if stabilizer.order() > 2 => {
                return Err(Error::BadDatum(format!(
                    "real orbit {} must have stabilizer of order at most 2",
                    label
                )))
            }
            _ => {}
        }
        let coset_reps = stabilizer.left_coset_reps();
        Ok(PlaceOrbit { label, kind, stabilizer, coset_reps })
    }

    pub fn stabilizer(&self) -> &Subgroup {
        &self.stabilizer
    }

    pub fn size(&self) -> usize {
        self.coset_reps.len()
    }

    pub fn coset_reps(&self) -> &[usize] {
        &self.coset_reps
    }

    /// Rotate the representative list so a different place becomes the base
    /// point. Results must not depend on the choice; this is what the
    /// re-basing tests exercise.
    pub fn rebased(&self, new_base: usize) -> PlaceOrbit {
        let mut reps = self.coset_reps.clone();
        let k = new_base % reps.len();
        reps.rotate_left(k);
        PlaceOrbit {
            label: self.label.clone(),
            kind: self.kind,
            stabilizer: self.stabilizer.clone(),
            coset_reps: reps,
        }
    }
}

#[derive(Clone)]
pub struct PlaceSet {
    group: Arc<FiniteGroup>,
    orbits: Vec<PlaceOrbit>,
    /// Flat index: place p = offsets[o] + coset index.
    offsets: Vec<usize>,
    count: usize,
}

impl PlaceSet {
    pub fn new(group: Arc<FiniteGroup>, orbits: Vec<PlaceOrbit>) -> Result<Self> {
        for o in &orbits {
            if !Arc::ptr_eq(o.stabilizer.parent(), &group) {
                return Err(Error::BadDatum("orbit stabilizer over a different group".into()));
            }
        }
        let mut offsets = Vec::with_capacity(orbits.len());
        let mut count = 0;
        for o in &orbits {
            offsets.push(count);
            count += o.size();
        }
        Ok(PlaceSet { group, orbits, offsets, count })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn orbits(&self) -> &[PlaceOrbit] {
        &self.orbits
    }

    pub fn place_count(&self) -> usize {
        self.count
    }

    pub fn orbit_of(&self, place: usize) -> (usize, usize) {
        let o = match self.offsets.binary_search(&place) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        (o, place - self.offsets[o])
    }

    pub fn place_index(&self, orbit: usize, coset: usize) -> usize {
        self.offsets[orbit] + coset
    }

    /// Index of γ · place.
    pub fn act(&self, g: usize, place: usize) -> usize {
        let (o, c) = self.orbit_of(place);
        let orbit = &self.orbits[o];
        let target = self.group.mul(g, orbit.coset_reps[c]);
        let c2 = orbit
            .coset_reps
            .iter()
            .position(|&r| {
                let d = self.group.mul(self.group.inv(r), target);
                orbit.stabilizer.contains(d)
            })
            .expect("left cosets partition the group");
        self.place_index(o, c2)
    }

    /// Stabilizer of an arbitrary place (conjugate of the orbit stabilizer).
    pub fn stabilizer_of_place(&self, place: usize) -> Subgroup {
        let (o, c) = self.orbit_of(place);
        self.orbits[o].stabilizer.conjugate(self.orbits[o].coset_reps[c])
    }

    pub fn place_label(&self, place: usize) -> String {
        let (o, c) = self.orbit_of(place);
        if c == 0 {
            self.orbits[o].label.clone()
        } else if c == 1 {
            format!("{}'", self.orbits[o].label)
        } else {
            format!("{}'{}", self.orbits[o].label, c)
        }
    }

    pub fn subset(&self, orbit_indices: &[usize]) -> PlaceSet {
        let orbits = orbit_indices.iter().map(|&i| self.orbits[i].clone()).collect();
        PlaceSet::new(self.group.clone(), orbits).expect("subset of a valid place set")
    }
}

/// M[S] with its augmentation to M, and M[S]₀ with the distinguished basis
/// m·(w − w_anchor) where the anchor is the last place in flat order.
pub struct InducedModule {
    pub places: PlaceSet,
    pub ms: GammaModule,
    pub ms0: GammaModule,
    /// M[S] → M, sum of coordinates.
    pub augmentation: AbHom,
    /// M[S]₀ → M[S].
    pub inclusion0: AbHom,
    pub anchor: usize,
}

/// M[S] alone; valid for an empty place set (the zero module).
pub fn induced_ms(m: &GammaModule, places: &PlaceSet) -> GammaModule {
    assert!(Arc::ptr_eq(m.group(), places.group()));
    let u = m.underlying().ngens();
    let p = places.place_count();
    let n = p * u;
    let relm = m.underlying().relations();
    let rels = IntMatrix::from_fn(n, p * relm.cols(), |i, j| {
        let (pi, ui) = (i / u, i % u);
        let (pj, rj) = (j / relm.cols().max(1), j % relm.cols().max(1));
        if pi == pj { relm.at(ui, rj).clone() } else { BigInt::zero() }
    });
    let underlying = Arc::new(FinAbGroup::new(n, rels));
    let action: Vec<IntMatrix> = places
        .group()
        .elements()
        .map(|g| {
            let am = m.action_matrix(g);
            let mut mat = IntMatrix::zero(n, n);
            for q in 0..p {
                let q2 = places.act(g, q);
                for i in 0..u {
                    for j in 0..u {
                        if !am.at(i, j).is_zero() {
                            mat.set(q2 * u + i, q * u + j, am.at(i, j).clone());
                        }
                    }
                }
            }
            mat
        })
        .collect();
    GammaModule::new(places.group().clone(), underlying, action)
        .expect("induced action is valid by construction")
}

pub fn induced_module(m: &GammaModule, places: &PlaceSet) -> Result<InducedModule> {
    if places.place_count() == 0 {
        return Err(Error::EmptyPlaceSet);
    }
    let ms = induced_ms(m, places);
    let u = m.underlying().ngens();
    let p = places.place_count();
    let anchor = p - 1;

    let aug_mat =
        IntMatrix::from_fn(u, p * u, |i, j| if j % u == i { BigInt::one() } else { BigInt::zero() });
    let augmentation = AbHom::new(ms.underlying().clone(), m.underlying().clone(), aug_mat)?;

    // M[S]0 on generators g_{q,i} = e_{q,i} - e_{anchor,i} for q != anchor.
    let n0 = (p - 1) * u;
    let relm = m.underlying().relations();
    let rels0 = IntMatrix::from_fn(n0, (p - 1) * relm.cols(), |i, j| {
        let (pi, ui) = (i / u, i % u);
        let (pj, rj) = (j / relm.cols().max(1), j % relm.cols().max(1));
        if pi == pj { relm.at(ui, rj).clone() } else { BigInt::zero() }
    });
    let underlying0 = Arc::new(FinAbGroup::new(n0, rels0));
    let inc_mat = IntMatrix::from_fn(p * u, n0, |i, j| {
        let (pi, ui) = (i / u, i % u);
        let (pj, uj) = (j / u, j % u);
        if ui != uj {
            BigInt::zero()
        } else if pi == pj {
            BigInt::one()
        } else if pi == anchor {
            -BigInt::one()
        } else {
            BigInt::zero()
        }
    });
    // γ·g_{q,i} = (γm_i)·g_{γq} − (γm_i)·g_{γ·anchor}, anchor terms dropped.
    let action0: Vec<IntMatrix> = places
        .group()
        .elements()
        .map(|g| {
            let am = m.action_matrix(g);
            let ga = places.act(g, anchor);
            let mut mat = IntMatrix::zero(n0, n0);
            for q in 0..(p - 1) {
                let gq = places.act(g, q);
                for i in 0..u {
                    for j in 0..u {
                        if am.at(i, j).is_zero() {
                            continue;
                        }
                        if gq != anchor {
                            let v = mat.at(gq * u + i, q * u + j).clone() + am.at(i, j);
                            mat.set(gq * u + i, q * u + j, v);
                        }
                        if ga != anchor {
                            let v = mat.at(ga * u + i, q * u + j).clone() - am.at(i, j);
                            mat.set(ga * u + i, q * u + j, v);
                        }
                    }
                }
            }
            mat
        })
        .collect();
    let ms0 = GammaModule::new(places.group().clone(), underlying0, action0)?;
    let inclusion0 = AbHom::new(ms0.underlying().clone(), ms.underlying().clone(), inc_mat)?;
    Ok(InducedModule { places: places.clone(), ms, ms0, augmentation, inclusion0, anchor })
}

impl InducedModule {
    /// Element of M[S]₀ given by m·(w₁ − w₂), in generator coordinates.
    pub fn difference_element(&self, m_coords: &[BigInt], w1: usize, w2: usize) -> Vec<BigInt> {
        let u = m_coords.len();
        let p = self.places.place_count();
        let mut v = vec![BigInt::zero(); (p - 1) * u];
        for (i, c) in m_coords.iter().enumerate() {
            if w1 != self.anchor {
                v[w1 * u + i] += c;
            }
            if w2 != self.anchor {
                v[w2 * u + i] -= c;
            }
        }
        v
    }
}

/// Localization l_w̄ at the base place of an orbit:
/// (M[S]₀)_Γ → M_{Γ(w̄)},  l_w(Σ a_{w'}[w']) = Σ_σ σ(a_{σ⁻¹w̄})
/// over representatives σ of Γ(w̄)\Γ.
pub fn localization(m: &GammaModule, ind: &InducedModule, orbit: usize) -> AbHom {
    let reps = ind.places.orbits()[orbit].stabilizer().right_coset_reps();
    localization_with_section(m, ind, orbit, &reps)
}

pub fn localization_with_section(
    m: &GammaModule,
    ind: &InducedModule,
    orbit: usize,
    reps: &[usize],
) -> AbHom {
    let on_ms = localization_ambient_matrix(m, ind, orbit, reps);
    let on_ms0 = on_ms.mul(ind.inclusion0.matrix());
    let (co_src, _) = ind.ms0.coinvariants();
    let stab = ind.places.orbits()[orbit].stabilizer();
    let (co_tgt, _) = m.restrict(stab).coinvariants();
    AbHom::new(co_src, co_tgt, on_ms0).expect("localization factors through coinvariants")
}

fn localization_ambient_matrix(
    m: &GammaModule,
    ind: &InducedModule,
    orbit: usize,
    reps: &[usize],
) -> IntMatrix {
    let u = m.underlying().ngens();
    let p = ind.places.place_count();
    let w = ind.places.place_index(orbit, 0);
    let mut on_ms = IntMatrix::zero(u, p * u);
    for &s in reps {
        let src = ind.places.act(ind.places.group().inv(s), w);
        let am = m.action_matrix(s);
        for i in 0..u {
            for j in 0..u {
                if !am.at(i, j).is_zero() {
                    let v = on_ms.at(i, src * u + j).clone() + am.at(i, j);
                    on_ms.set(i, src * u + j, v);
                }
            }
        }
    }
    on_ms
}

/// Localization on all of M[S] at coinvariant level; restricted to a single
/// orbit this is the degree-0 Shapiro isomorphism (M[orbit])_Γ ≅ M_{Γ(w̄)}.
pub fn localization_ms(m: &GammaModule, ind: &InducedModule, orbit: usize) -> AbHom {
    let reps = ind.places.orbits()[orbit].stabilizer().right_coset_reps();
    let on_ms = localization_ambient_matrix(m, ind, orbit, &reps);
    let (co_src, _) = ind.ms.coinvariants();
    let stab = ind.places.orbits()[orbit].stabilizer();
    let (co_tgt, _) = m.restrict(stab).coinvariants();
    AbHom::new(co_src, co_tgt, on_ms).expect("localization factors through coinvariants")
}

/// An equivariant map of place sets, stored on base points.
#[derive(Clone, Debug)]
pub struct PlaceMap {
    pub image_of_base: Vec<usize>,
}

impl PlaceMap {
    pub fn apply(&self, source: &PlaceSet, target: &PlaceSet, place: usize) -> usize {
        let (o, c) = source.orbit_of(place);
        let g = source.orbits()[o].coset_reps()[c];
        target.act(g, self.image_of_base[o])
    }
}

/// For each source orbit pick a target place whose stabilizer contains the
/// source base-point stabilizer; first admissible target in flat order.
pub fn build_phi(source: &PlaceSet, target: &PlaceSet) -> Result<PlaceMap> {
    let mut image_of_base = Vec::with_capacity(source.orbits().len());
    for o in source.orbits() {
        let h = o.stabilizer();
        let found = (0..target.place_count())
            .find(|&p| target.stabilizer_of_place(p).contains_subgroup(h));
        match found {
            Some(p) => image_of_base.push(p),
            None => return Err(Error::NoAdmissibleTarget(h.order())),
        }
    }
    Ok(PlaceMap { image_of_base })
}

/// Pushforward φ_*: M[S]₀ → M[S']₀, Σ m_w·w ↦ Σ m_w·φ(w).
pub fn phi_pushforward(
    m: &GammaModule,
    src: &InducedModule,
    dst: &InducedModule,
    phi: &PlaceMap,
) -> AbHom {
    let u = m.underlying().ngens();
    let ps = src.places.place_count();
    let pd = dst.places.place_count();
    let mut amb = IntMatrix::zero(pd * u, ps * u);
    for q in 0..ps {
        let t = phi.apply(&src.places, &dst.places, q);
        for i in 0..u {
            let v = amb.at(t * u + i, q * u + i).clone() + BigInt::one();
            amb.set(t * u + i, q * u + i, v);
        }
    }
    // Restrict to M[S]0; the image has zero coefficient sum, so dropping the
    // anchor block expresses it over the M[S']0 basis e_q − e_anchor.
    let on0 = amb.mul(src.inclusion0.matrix());
    let reduced = IntMatrix::from_fn((pd - 1) * u, (ps - 1) * u, |i, j| on0.at(i, j).clone());
    AbHom::new(src.ms0.underlying().clone(), dst.ms0.underlying().clone(), reduced)
        .expect("pushforward is well defined")
}

/// The mutually inverse isomorphisms M[S]₀ ⊕ M[S^∁] ≅ M[V]₀ attached to
/// φ: S^∁ → S: forward (x, y) ↦ x − φ_*(y) + y, backward
/// z ↦ (z_S + φ_*(z_{S^∁}), z_{S^∁}).
pub struct SDecomposition {
    pub forward: AbHom,
    pub backward: AbHom,
    /// Direct sum M[S]₀ ⊕ M[S^∁], the source of `forward`.
    pub sum: Arc<FinAbGroup>,
    pub s_part_gens: usize,
}

pub fn s_decomposition(
    m: &GammaModule,
    v: &PlaceSet,
    s_orbits: &[usize],
    phi: &PlaceMap,
) -> Result<SDecomposition> {
    let u = m.underlying().ngens();
    let comp_orbits: Vec<usize> =
        (0..v.orbits().len()).filter(|i| !s_orbits.contains(i)).collect();
    let s_set = v.subset(s_orbits);
    let c_set = v.subset(&comp_orbits);
    let ind_v = induced_module(m, v)?;
    let ind_s = induced_module(m, &s_set)?;
    let mc = induced_ms(m, &c_set);

    let s_to_v: Vec<usize> = (0..s_set.place_count())
        .map(|p| {
            let (o, c) = s_set.orbit_of(p);
            v.place_index(s_orbits[o], c)
        })
        .collect();
    let c_to_v: Vec<usize> = (0..c_set.place_count())
        .map(|p| {
            let (o, c) = c_set.orbit_of(p);
            v.place_index(comp_orbits[o], c)
        })
        .collect();

    let n_s0 = ind_s.ms0.underlying().ngens();
    let n_c = mc.underlying().ngens();
    let n_sum = n_s0 + n_c;
    let n_v0 = ind_v.ms0.underlying().ngens();

    let rs = ind_s.ms0.underlying().relations();
    let rc = mc.underlying().relations();
    let sum_rels = IntMatrix::from_fn(n_sum, rs.cols() + rc.cols(), |i, j| {
        if i < n_s0 && j < rs.cols() {
            rs.at(i, j).clone()
        } else if i >= n_s0 && j >= rs.cols() {
            rc.at(i - n_s0, j - rs.cols()).clone()
        } else {
            BigInt::zero()
        }
    });
    let sum = Arc::new(FinAbGroup::new(n_sum, sum_rels));

    // forward, assembled in the ambient M[V] and then restricted to the
    // zero-sum basis (anchor block drops).
    let pv = v.place_count();
    let mut amb = IntMatrix::zero(pv * u, n_sum);
    let s_anchor_v = s_to_v[ind_s.anchor];
    for q in 0..(s_set.place_count() - 1) {
        for i in 0..u {
            let col = q * u + i;
            add_to(&mut amb, s_to_v[q] * u + i, col, 1);
            add_to(&mut amb, s_anchor_v * u + i, col, -1);
        }
    }
    for c in 0..c_set.place_count() {
        for i in 0..u {
            let col = n_s0 + c * u + i;
            add_to(&mut amb, c_to_v[c] * u + i, col, 1);
            let sp = phi.apply(&c_set, &s_set, c);
            add_to(&mut amb, s_to_v[sp] * u + i, col, -1);
        }
    }
    let fwd = IntMatrix::from_fn(n_v0, n_sum, |i, j| amb.at(i, j).clone());
    let forward = AbHom::new(sum.clone(), ind_v.ms0.underlying().clone(), fwd)?;

    // backward on ambient basis elements e_{p,i} - e_{v_anchor,i}.
    let mut back = IntMatrix::zero(n_sum, n_v0);
    let v_anchor = ind_v.anchor;
    for p in 0..(pv - 1) {
        for i in 0..u {
            let col = p * u + i;
            for (place, sign) in [(p, 1i64), (v_anchor, -1i64)] {
                if let Some(cp) = c_to_v.iter().position(|&x| x == place) {
                    add_to(&mut back, n_s0 + cp * u + i, col, sign);
                    let sp = phi.apply(&c_set, &s_set, cp);
                    if sp != ind_s.anchor {
                        add_to(&mut back, sp * u + i, col, sign);
                    }
                } else {
                    let sp = s_to_v.iter().position(|&x| x == place).expect("place in S or S^c");
                    if sp != ind_s.anchor {
                        add_to(&mut back, sp * u + i, col, sign);
                    }
                }
            }
        }
    }
    let backward = AbHom::new(ind_v.ms0.underlying().clone(), sum.clone(), back)?;
    Ok(SDecomposition { forward, backward, sum, s_part_gens: n_s0 })
}

fn add_to(m: &mut IntMatrix, row: usize, col: usize, sign: i64) {
    let v = m.at(row, col).clone() + BigInt::from(sign);
    m.set(row, col, v);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::torsion_part;

    fn z2_free_orbit() -> (Arc<FiniteGroup>, PlaceSet) {
        let g = FiniteGroup::cyclic(2);
        let orbit = PlaceOrbit::new("w".into(), PlaceKind::Finite, g.trivial_subgroup()).unwrap();
        let s = PlaceSet::new(g.clone(), vec![orbit]).unwrap();
        (g, s)
    }

    #[test]
    fn regular_orbit_gives_regular_module() {
        let (_, s) = z2_free_orbit();
        let m = GammaModule::trivial_action(s.group().clone(), Arc::new(FinAbGroup::free(1)));
        let ind = induced_module(&m, &s).unwrap();
        assert_eq!(ind.ms.underlying().free_rank(), 2);
        assert_eq!(ind.ms.action_matrix(1), &IntMatrix::from_rows(&[&[0, 1], &[1, 0]]));
        // M[S]0 = Z with the sign action
        assert_eq!(ind.ms0.underlying().free_rank(), 1);
        assert_eq!(ind.ms0.action_matrix(1), &IntMatrix::from_rows(&[&[-1]]));
    }

    #[test]
    fn empty_place_set() {
        let g = FiniteGroup::cyclic(2);
        let s = PlaceSet::new(g.clone(), vec![]).unwrap();
        let m = GammaModule::trivial_action(g.clone(), Arc::new(FinAbGroup::free(1)));
        let ms = induced_ms(&m, &s);
        assert!(ms.underlying().is_trivial());
        assert!(matches!(induced_module(&m, &s), Err(Error::EmptyPlaceSet)));
    }

    #[test]
    fn localization_formula_on_free_orbit() {
        let (_, s) = z2_free_orbit();
        let m = GammaModule::trivial_action(s.group().clone(), Arc::new(FinAbGroup::free(1)));
        let ind = induced_module(&m, &s).unwrap();
        let l = localization(&m, &ind, 0);
        // class of (1, -1): a_w + σ·a_{σw} = 1 - 1 = 0
        let g0 = ind.difference_element(&[BigInt::one()], 0, 1);
        assert!(l.target().is_zero_element(&l.apply(&g0)));
    }

    #[test]
    fn localization_trivial_group_is_evaluation() {
        let g = FiniteGroup::trivial();
        let o1 = PlaceOrbit::new("a".into(), PlaceKind::Finite, g.trivial_subgroup()).unwrap();
        let o2 = PlaceOrbit::new("b".into(), PlaceKind::Finite, g.trivial_subgroup()).unwrap();
        let s = PlaceSet::new(g.clone(), vec![o1, o2]).unwrap();
        let m = GammaModule::trivial_action(g.clone(), Arc::new(FinAbGroup::cyclic(4)));
        let ind = induced_module(&m, &s).unwrap();
        let l = localization(&m, &ind, 0);
        let e = ind.difference_element(&[BigInt::one()], 0, 1);
        assert!(l.target().elements_equal(&l.apply(&e), &[BigInt::one()]));
    }

    #[test]
    fn localization_section_independence() {
        let g = FiniteGroup::klein_four();
        let m = GammaModule::from_character(g.clone(), 8, &[1, 3, 5, 7]).unwrap();
        let orbit = PlaceOrbit::new("v".into(), PlaceKind::Finite, g.generated_subgroup(&[1])).unwrap();
        let s = PlaceSet::new(g.clone(), vec![orbit]).unwrap();
        let ind = induced_module(&m, &s).unwrap();
        let stab = ind.places.orbits()[0].stabilizer().clone();
        let reps1 = stab.right_coset_reps();
        let mut reps2 = reps1.clone();
        for r in reps2.iter_mut() {
            if *r != g.identity() {
                *r = g.mul(1, *r);
            }
        }
        let l1 = localization_with_section(&m, &ind, 0, &reps1);
        let l2 = localization_with_section(&m, &ind, 0, &reps2);
        assert!(l1.equals(&l2));
    }

    #[test]
    fn shapiro_degree_zero() {
        // (M[single orbit])_Γ ≅ M_{Γ(w̄)} via localization, for every orbit
        // shape over Z/4.
        let g = FiniteGroup::cyclic(4);
        let m = GammaModule::from_character(g.clone(), 8, &[1, 3, 1, 3]).unwrap();
        for stab_gen in [0usize, 2, 1] {
            let stab = g.generated_subgroup(&[stab_gen]);
            let orbit = PlaceOrbit::new("w".into(), PlaceKind::Finite, stab).unwrap();
            let s = PlaceSet::new(g.clone(), vec![orbit]).unwrap();
            let ind = induced_module(&m, &s).unwrap();
            let l = localization_ms(&m, &ind, 0);
            assert!(l.is_isomorphism(), "Shapiro fails for stabilizer <{}>", stab_gen);
        }
    }

    #[test]
    fn build_phi_first_admissible_and_error() {
        let g = FiniteGroup::klein_four();
        let s_orbit = |gen: usize| {
            PlaceOrbit::new(format!("v{}", gen), PlaceKind::Finite, g.generated_subgroup(&[gen]))
                .unwrap()
        };
        let target = PlaceSet::new(g.clone(), vec![s_orbit(1), s_orbit(2)]).unwrap();
        let src = PlaceSet::new(
            g.clone(),
            vec![PlaceOrbit::new("u".into(), PlaceKind::Finite, g.trivial_subgroup()).unwrap()],
        )
        .unwrap();
        let phi = build_phi(&src, &target).unwrap();
        assert_eq!(phi.image_of_base, vec![0]);
        let src_full = PlaceSet::new(
            g.clone(),
            vec![PlaceOrbit::new("u".into(), PlaceKind::Finite, g.full_subgroup()).unwrap()],
        )
        .unwrap();
        assert!(matches!(build_phi(&src_full, &target), Err(Error::NoAdmissibleTarget(4))));
    }

    #[test]
    fn phi_equivariance() {
        let g = FiniteGroup::klein_four();
        let target = PlaceSet::new(
            g.clone(),
            vec![
                PlaceOrbit::new("v".into(), PlaceKind::Finite, g.generated_subgroup(&[1])).unwrap(),
            ],
        )
        .unwrap();
        let src = PlaceSet::new(
            g.clone(),
            vec![
                PlaceOrbit::new("u".into(), PlaceKind::Finite, g.generated_subgroup(&[1])).unwrap(),
            ],
        )
        .unwrap();
        let phi = build_phi(&src, &target).unwrap();
        for gi in g.elements() {
            for p in 0..src.place_count() {
                let lhs = phi.apply(&src, &target, src.act(gi, p));
                let rhs = target.act(gi, phi.apply(&src, &target, p));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn s_decomposition_three_places() {
        // Γ = Z/2, V = fixed place ∪ free orbit, S = {fixed}, M = Z/2 trivial:
        // (M[V]0)_{Γ,Tors} ≅ Z/2, carried by the complement summand.
        let g = FiniteGroup::cyclic(2);
        let o_fixed = PlaceOrbit::new("w0".into(), PlaceKind::Finite, g.full_subgroup()).unwrap();
        let o_free = PlaceOrbit::new("w1".into(), PlaceKind::Finite, g.trivial_subgroup()).unwrap();
        let v = PlaceSet::new(g.clone(), vec![o_fixed, o_free]).unwrap();
        let m = GammaModule::trivial_action(g.clone(), Arc::new(FinAbGroup::cyclic(2)));

        let comp = v.subset(&[1]);
        let s_set = v.subset(&[0]);
        let phi = build_phi(&comp, &s_set).unwrap();
        let d = s_decomposition(&m, &v, &[0], &phi).unwrap();
        assert!(d
            .forward
            .compose(&d.backward)
            .equals(&AbHom::identity(d.forward.target().clone())));
        assert!(d.backward.compose(&d.forward).equals(&AbHom::identity(d.sum.clone())));

        let ind_v = induced_module(&m, &v).unwrap();
        let (co, _) = ind_v.ms0.coinvariants();
        let (tors, _) = torsion_part(&co);
        assert_eq!(tors.invariant_factors(), vec![BigInt::from(2)]);

        // the complement summand alone carries the torsion
        let mc = induced_ms(&m, &comp);
        let (coc, _) = mc.coinvariants();
        let (torsc, _) = torsion_part(&coc);
        assert_eq!(torsc.invariant_factors(), vec![BigInt::from(2)]);
    }

    #[test]
    fn s_decomposition_zero_module() {
        let g = FiniteGroup::cyclic(2);
        let o1 = PlaceOrbit::new("a".into(), PlaceKind::Finite, g.full_subgroup()).unwrap();
        let o2 = PlaceOrbit::new("b".into(), PlaceKind::Finite, g.trivial_subgroup()).unwrap();
        let v = PlaceSet::new(g.clone(), vec![o1, o2]).unwrap();
        let m = GammaModule::trivial_action(g.clone(), Arc::new(FinAbGroup::trivial()));
        let comp = v.subset(&[1]);
        let s_set = v.subset(&[0]);
        let phi = build_phi(&comp, &s_set).unwrap();
        let d = s_decomposition(&m, &v, &[0], &phi).unwrap();
        assert!(d.sum.is_trivial());
        assert!(d.forward.target().is_trivial());
    }

    #[test]
    fn s_decomposition_inverse_on_richer_datum() {
        let g = FiniteGroup::klein_four();
        let m = GammaModule::from_character(g.clone(), 8, &[1, 3, 5, 7]).unwrap();
        let mk = |gen: usize, name: &str| {
            PlaceOrbit::new(name.into(), PlaceKind::Finite, g.generated_subgroup(&[gen])).unwrap()
        };
        let v = PlaceSet::new(g.clone(), vec![mk(1, "v3"), mk(2, "v5"), mk(3, "v7"), mk(0, "u")])
            .unwrap();
        let comp = v.subset(&[3]);
        let s_set = v.subset(&[0, 1, 2]);
        let phi = build_phi(&comp, &s_set).unwrap();
        let d = s_decomposition(&m, &v, &[0, 1, 2], &phi).unwrap();
        assert!(d
            .forward
            .compose(&d.backward)
            .equals(&AbHom::identity(d.forward.target().clone())));
        assert!(d.backward.compose(&d.forward).equals(&AbHom::identity(d.sum.clone())));
    }

    #[test]
    fn rebase_keeps_coinvariants() {
        let g = FiniteGroup::klein_four();
        let m = GammaModule::from_character(g.clone(), 8, &[1, 3, 5, 7]).unwrap();
        let orbit =
            PlaceOrbit::new("v".into(), PlaceKind::Finite, g.generated_subgroup(&[1])).unwrap();
        let s1 = PlaceSet::new(g.clone(), vec![orbit.clone()]).unwrap();
        let s2 = PlaceSet::new(g.clone(), vec![orbit.rebased(1)]).unwrap();
        let i1 = induced_module(&m, &s1).unwrap();
        let i2 = induced_module(&m, &s2).unwrap();
        let (c1, _) = i1.ms0.coinvariants();
        let (c2, _) = i2.ms0.coinvariants();
        assert_eq!(c1.invariant_factors(), c2.invariant_factors());
        assert_eq!(c1.free_rank(), c2.free_rank());
    }
}
