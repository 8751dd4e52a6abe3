//! Base change of a datum along a subgroup Γ′ ≤ Γ and the induced maps on
//! the Tate-Shafarevich groups: restriction through the relative norm
//! N_{Γ′\Γ} and corestriction through the natural projection, with
//! Cor ∘ Res = [Γ : Γ′].

use crate::abelian::AbHom;
use crate::datum::ArithmeticDatum;
use crate::group::Subgroup;
use crate::h1::GlobalContext;
use crate::matrix::{IntMatrix, Solver};
use crate::places::{PlaceKind, PlaceOrbit, PlaceSet};
use crate::sha::{sha1, sha2, tf_coords_rational, Sha1Report, Sha2Report};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::sync::Arc;

/// The datum seen over a subgroup: each orbit refines into Γ′-orbits whose
/// stabilizers are the intersections of the conjugated stabilizers with Γ′.
pub fn restrict_datum(d: &ArithmeticDatum, sub: &Subgroup) -> Result<ArithmeticDatum> {
    Ok(restrict_datum_with_bases(d, sub)?.0)
}

/// Restriction plus, for each restricted orbit, the original flat place
/// index of its base point (used to translate coordinates between levels).
pub fn restrict_datum_with_bases(
    d: &ArithmeticDatum,
    sub: &Subgroup,
) -> Result<(ArithmeticDatum, Vec<usize>)> {
    if !Arc::ptr_eq(sub.parent(), &d.group) {
        return Err(Error::NotSubgroup);
    }
    let (g2, emb) = sub.as_group();
    let action = emb.iter().map(|&e| d.module.action_matrix(e).clone()).collect();
    let module =
        crate::gmodule::GammaModule::new(g2.clone(), d.module.underlying().clone(), action)?;
    let mut orbits = Vec::new();
    let mut bases = Vec::new();
    for (oi, o) in d.places.orbits().iter().enumerate() {
        let size = o.size();
        let mut seen = vec![false; size];
        let mut part = 0;
        for c in 0..size {
            if seen[c] {
                continue;
            }
            let mut stack = vec![c];
            seen[c] = true;
            while let Some(p) = stack.pop() {
                for &s in sub.elements() {
                    let target = d.group.mul(s, o.coset_reps()[p]);
                    let q = o
                        .coset_reps()
                        .iter()
                        .position(|&r| {
                            o.stabilizer().contains(d.group.mul(d.group.inv(r), target))
                        })
                        .unwrap();
                    if !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
            let rep = o.coset_reps()[c];
            let conj = o.stabilizer().conjugate(rep);
            let inter = conj.intersect(sub);
            let elems2: Vec<usize> = inter
                .elements()
                .iter()
                .map(|e| emb.iter().position(|x| x == e).unwrap())
                .collect();
            let stab2 = Subgroup::new(g2.clone(), elems2)?;
            orbits.push(PlaceOrbit::new(
                format!("{}@{}", o.label, part),
                if o.kind == PlaceKind::Real && inter.order() <= 2 {
                    o.kind
                } else {
                    PlaceKind::Finite
                },
                stab2,
            )?);
            bases.push(d.places.place_index(oi, c));
            part += 1;
        }
    }
    let places = PlaceSet::new(g2.clone(), orbits)?;
    let datum = ArithmeticDatum {
        group: g2,
        module,
        places,
        field_type: d.field_type,
        arch_mode: Default::default(),
        predicted_sha2_order: None,
    };
    Ok((datum, bases))
}

pub struct BaseChange {
    pub restricted: ArithmeticDatum,
    pub res_sha1: AbHom,
    pub cor_sha1: AbHom,
    pub res_sha2: AbHom,
    pub cor_sha2: AbHom,
    /// Cor∘Res = ×[Γ:Γ′] verified on both degrees
    pub index_identity: bool,
}

/// Induced maps on Sha¹/Sha² for both directions at once.
///
/// The restricted datum must itself satisfy coverage (it does whenever the
/// original does, because stabilizer intersections still cover the cyclic
/// subgroups of Γ′ that occur — this is re-validated, not assumed).
pub fn base_change(
    d: &ArithmeticDatum,
    ctx: &GlobalContext,
    sub: &Subgroup,
    depth: i64,
) -> Result<BaseChange> {
    let (restricted, bases) = restrict_datum_with_bases(d, sub)?;
    let ctx2 = GlobalContext::new(&restricted)?;
    let s1 = sha1(d, ctx, depth)?;
    let s2 = sha2(d, ctx)?;
    let t1 = sha1(&restricted, &ctx2, depth)?;
    let t2 = sha2(&restricted, &ctx2)?;

    // restricted place -> original place
    let (_, emb) = sub.as_group();
    let mut r_to_o = vec![usize::MAX; restricted.places.place_count()];
    for (ro, orb) in restricted.places.orbits().iter().enumerate() {
        for (j, &rep) in orb.coset_reps().iter().enumerate() {
            let gamma = emb[rep];
            r_to_o[restricted.places.place_index(ro, j)] = d.places.act(gamma, bases[ro]);
        }
    }
    // original place -> restricted place
    let mut perm = vec![usize::MAX; d.places.place_count()];
    for (rq, &oq) in r_to_o.iter().enumerate() {
        perm[oq] = rq;
    }
    assert!(perm.iter().all(|&x| x != usize::MAX), "place translation is a bijection");

    let u = d.module.underlying().ngens();
    let trans = build_translation(ctx, &ctx2, &perm, u);
    let trans_back = build_translation(&ctx2, ctx, &r_to_o, u);

    // res = relative norm Σ s(x) over Γ′\Γ followed by the translation
    let n0 = ctx.co0.ngens();
    let mut norm = IntMatrix::zero(n0, n0);
    for &r in &sub.right_coset_reps() {
        norm = norm.add(ctx.ind.ms0.action_matrix(r));
    }
    let res_co = trans.mul(&norm);

    let res_sha1 = induced_on_sha1(&s1, ctx, &t1, &ctx2, &res_co)?;
    let cor_sha1 = induced_on_sha1(&t1, &ctx2, &s1, ctx, &trans_back)?;
    let res_sha2 = induced_on_sha2(&s2, ctx, &t2, &ctx2, &res_co)?;
    let cor_sha2 = induced_on_sha2(&t2, &ctx2, &s2, ctx, &trans_back)?;

    let idx = BigInt::from(sub.index() as u64);
    let id1 = AbHom::identity(s1.group.clone()).scale(&idx);
    let id2 = AbHom::identity(s2.group.clone()).scale(&idx);
    let index_identity =
        cor_sha1.compose(&res_sha1).equals(&id1) && cor_sha2.compose(&res_sha2).equals(&id2);
    Ok(BaseChange { restricted, res_sha1, cor_sha1, res_sha2, cor_sha2, index_identity })
}

/// Express the M[S]₀ basis of `from` in the basis of `to` through a place
/// permutation: e_p − e_anchor ↦ e_{perm(p)} − e_{perm(anchor)}.
fn build_translation(
    from: &GlobalContext,
    to: &GlobalContext,
    perm: &[usize],
    u: usize,
) -> IntMatrix {
    let pf = from.ind.places.place_count();
    let pt = to.ind.places.place_count();
    assert_eq!(pf, pt);
    let mut amb = IntMatrix::zero(pt * u, (pf - 1) * u);
    for q in 0..(pf - 1) {
        for i in 0..u {
            let col = q * u + i;
            let r1 = perm[q] * u + i;
            let v = amb.at(r1, col).clone() + BigInt::one();
            amb.set(r1, col, v);
            let r2 = perm[from.ind.anchor] * u + i;
            let v = amb.at(r2, col).clone() - BigInt::one();
            amb.set(r2, col, v);
        }
    }
    // both anchors are the last place, so the target generators are the
    // ambient places 0..pt-1 in order and the anchor row is redundant
    IntMatrix::from_fn((pt - 1) * u, (pf - 1) * u, |i, j| amb.at(i, j).clone())
}

fn induced_on_sha1(
    src: &Sha1Report,
    src_ctx: &GlobalContext,
    dst: &Sha1Report,
    dst_ctx: &GlobalContext,
    co_map: &IntMatrix,
) -> Result<AbHom> {
    // map each presentation generator of the source Sha group (as a co0
    // element) and express it in the destination Sha group
    let dst_incl_in_co = dst_ctx.tors0_inc.matrix().mul(dst.inclusion.matrix());
    let solver = Solver::new(&dst_incl_in_co.hstack(dst_ctx.co0.relations()));
    let src_in_co = src_ctx.tors0_inc.matrix().mul(src.inclusion.matrix());
    let cols: Vec<Vec<BigInt>> = (0..src.group.ngens())
        .map(|j| {
            let img = co_map.mul_vec(&src_in_co.column(j));
            let sol = solver
                .solve(&img)
                .ok_or_else(|| Error::NotExact("sha image leaves the destination kernel".into()))?;
            Ok(sol[..dst.group.ngens()].to_vec())
        })
        .collect::<Result<_>>()?;
    AbHom::new(src.group.clone(), dst.group.clone(), IntMatrix::from_columns(dst.group.ngens(), &cols))
}

fn induced_on_sha2(
    src: &Sha2Report,
    src_ctx: &GlobalContext,
    dst: &Sha2Report,
    dst_ctx: &GlobalContext,
    co_map: &IntMatrix,
) -> Result<AbHom> {
    // Source generator coordinates: the presentation of the kernel-form Sha²
    // is ⊕ Z/d_i on the canonical generators, so presentation generators and
    // canonical generators coincide (generators_q lists them in order).
    assert_eq!(src.generators_q.len(), src.group.ngens());
    let dst_tfs: Vec<Vec<BigRational>> = dst
        .generators_q
        .iter()
        .map(|g| tf_coords_rational(&dst_ctx.co0, g))
        .collect();
    let _ = src_ctx;
    let r = dst_ctx.co0.free_rank();
    let cols: Vec<Vec<BigInt>> = src
        .generators_q
        .iter()
        .map(|g| {
            let img: Vec<BigRational> = (0..co_map.rows())
                .map(|i| {
                    (0..co_map.cols())
                        .map(|j| BigRational::from(co_map.at(i, j).clone()) * &g[j])
                        .fold(BigRational::zero(), |x, y| x + y)
                })
                .collect();
            let img_tf = tf_coords_rational(&dst_ctx.co0, &img);
            // solve Σ c_k dst_tf_k ≡ img_tf mod Z^r over integers c
            let mut den = BigInt::one();
            for v in img_tf.iter().chain(dst_tfs.iter().flatten()) {
                den = den.lcm(v.denom());
            }
            let mut mat = IntMatrix::zero(r, dst_tfs.len() + r);
            for (k, t) in dst_tfs.iter().enumerate() {
                for i in 0..r {
                    let sc = &t[i] * BigRational::from(den.clone());
                    mat.set(i, k, sc.to_integer());
                }
            }
            for i in 0..r {
                mat.set(i, dst_tfs.len() + i, den.clone());
            }
            let rhs: Vec<BigInt> = img_tf
                .iter()
                .map(|v| (v * BigRational::from(den.clone())).to_integer())
                .collect();
            let sol = crate::matrix::solve(&mat, &rhs)
                .ok_or_else(|| Error::NotExact("sha2 image leaves the destination kernel".into()))?;
            Ok(sol[..dst_tfs.len()].to_vec())
        })
        .collect::<Result<_>>()?;
    AbHom::new(src.group.clone(), dst.group.clone(), IntMatrix::from_columns(dst.group.ngens(), &cols))
}
