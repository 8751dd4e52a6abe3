//! Translation between homogeneous and inhomogeneous cochains.
//!
//! Internally every cochain is stored on the Z[Γ]-basis tuples
//! (1, h₁, …, h_k) of the standard resolution. The inhomogeneous
//! coordinates reindex these by h_i = g₁g₂⋯g_i; both directions are pure
//! permutations of the coordinate blocks.

use crate::abelian::AbHom;
use crate::complex::BoundedComplex;
use crate::gmodule::GammaModule;
use crate::matrix::IntMatrix;
use crate::resolution::StandardResolution;
use crate::tate::TateContext;
use crate::Result;
use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    HomogeneousToInhomogeneous,
    InhomogeneousToHomogeneous,
}

/// The tuple permutation: inhomogeneous (g₁,…,g_k) ↦ homogeneous free part
/// (g₁, g₁g₂, …, g₁⋯g_k).
fn partial_products(res: &StandardResolution, tuple: &[usize]) -> Vec<usize> {
    let g = res.group();
    let mut acc = g.identity();
    tuple
        .iter()
        .map(|&x| {
            acc = g.mul(acc, x);
            acc
        })
        .collect()
}

/// chain_model_convert: a bijective coordinate change on C^n(Γ, M).
pub fn chain_model_convert(
    ctx: &TateContext,
    m: &GammaModule,
    n: i64,
    dir: Direction,
) -> Result<AbHom> {
    ctx.resolution.check_depth(n)?;
    let a = BoundedComplex::concentrated(0, m.clone());
    let c = ctx.cochain_group(&a, n);
    let u = m.underlying().ngens();
    let term = ctx.resolution.term(n);
    let mut mat = IntMatrix::zero(term.basis_count * u, term.basis_count * u);
    for t in 0..term.basis_count {
        let inhom = ctx.resolution.index_tuple(n, t);
        let hom = partial_products(&ctx.resolution, &inhom);
        let hb = ctx.resolution.tuple_index(&hom);
        // value of the inhomogeneous cochain at t = value of the homogeneous
        // cochain at the partial-products tuple.
        let (row_block, col_block) = match dir {
            Direction::HomogeneousToInhomogeneous => (t, hb),
            Direction::InhomogeneousToHomogeneous => (hb, t),
        };
        for i in 0..u {
            mat.set(row_block * u + i, col_block * u + i, num_traits::One::one());
        }
    }
    Ok(AbHom::new_unchecked(c.clone(), c, mat))
}

/// The plain pullback differential c ↦ c ∘ ∂_{n+1} without the alternating
/// degree sign used by the Tate complex; this is the form the classical
/// displayed formulas take, and differs from the engine differential only
/// by a global sign per degree.
pub fn plain_differential(ctx: &TateContext, m: &GammaModule, n: i64) -> Result<AbHom> {
    let a = BoundedComplex::concentrated(0, m.clone());
    let d = ctx.differential(&a, n)?;
    if n.rem_euclid(2) == 0 {
        Ok(d)
    } else {
        Ok(d.scale(&BigInt::from(-1)))
    }
}

/// Hand-coded inhomogeneous differentials in low degrees, for cross-checking
/// the engine against the classical formulas:
///   C^{-3} → C^{-2}: (dc)(g) = Σ_h h⁻¹c(h,g) − c(h,h⁻¹g) + c(g,g⁻¹h)
///   C^{-2} → C^{-1}: dc      = Σ_h h⁻¹c(h) − c(h)
///   C^{-1} → C^0:    dc      = Σ_h h·c
///   C^0   → C^1:     (dc)(g) = g·c − c
///   C^1   → C^2:     (dc)(g,h) = g·c(h) − c(gh) + c(g)
pub fn classical_inhomogeneous_differential(
    ctx: &TateContext,
    m: &GammaModule,
    n: i64,
) -> Result<AbHom> {
    assert!((-3..=1).contains(&n), "classical table covers degrees -3..=1");
    ctx.resolution.check_depth(n + 1)?;
    let a = BoundedComplex::concentrated(0, m.clone());
    let src = ctx.cochain_group(&a, n);
    let dst = ctx.cochain_group(&a, n + 1);
    let u = m.underlying().ngens();
    let g = ctx.resolution.group().clone();
    let o = g.order();
    let mut mat = IntMatrix::zero(dst.ngens(), src.ngens());
    let mut add = |row_block: usize, col_block: usize, gamma: usize, sign: i64| {
        let am = m.action_matrix(gamma);
        for i in 0..u {
            for j in 0..u {
                if !am.at(i, j).is_zero() {
                    let v = mat.at(row_block * u + i, col_block * u + j).clone()
                        + am.at(i, j) * BigInt::from(sign);
                    mat.set(row_block * u + i, col_block * u + j, v);
                }
            }
        }
    };
    match n {
        -3 => {
            // target tuples (g), source tuples (a,b)
            for gg in 0..o {
                for h in 0..o {
                    add(gg, ctx.resolution.tuple_index(&[h, gg]), g.inv(h), 1);
                    add(gg, ctx.resolution.tuple_index(&[h, g.mul(g.inv(h), gg)]), g.identity(), -1);
                    add(gg, ctx.resolution.tuple_index(&[gg, g.mul(g.inv(gg), h)]), g.identity(), 1);
                }
            }
        }
        -2 => {
            for h in 0..o {
                add(0, h, g.inv(h), 1);
                add(0, h, g.identity(), -1);
            }
        }
        -1 => {
            for h in 0..o {
                add(0, 0, h, 1);
            }
        }
        0 => {
            for gg in 0..o {
                add(gg, 0, gg, 1);
                add(gg, 0, g.identity(), -1);
            }
        }
        1 => {
            for gg in 0..o {
                for h in 0..o {
                    add(ctx.resolution.tuple_index(&[gg, h]), h, gg, 1);
                    add(ctx.resolution.tuple_index(&[gg, h]), g.mul(gg, h), g.identity(), -1);
                    add(ctx.resolution.tuple_index(&[gg, h]), gg, g.identity(), 1);
                }
            }
        }
        _ => unreachable!(),
    }
    Ok(AbHom::new_unchecked(src, dst, mat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FinAbGroup;
    use crate::group::FiniteGroup;
    use std::sync::Arc;

    #[test]
    fn degree_zero_and_one_are_identity_permutations() {
        // k ≤ 1: the partial-product reindexing is trivial.
        let g = FiniteGroup::cyclic(3);
        let m = GammaModule::trivial_action(g.clone(), Arc::new(FinAbGroup::cyclic(4)));
        let ctx = TateContext::new(g, 3);
        for n in [-1i64, 0, 1, -2] {
            let c = chain_model_convert(&ctx, &m, n, Direction::HomogeneousToInhomogeneous).unwrap();
            if n == 1 || n == -2 {
                // single-coordinate tuples: still the identity
                assert!(c.equals(&AbHom::identity(c.source().clone())));
            } else {
                assert!(c.equals(&AbHom::identity(c.source().clone())));
            }
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let g = FiniteGroup::symmetric3();
        let m = GammaModule::from_character(g.clone(), 4, &[1, 3, 3, 1, 1, 3]).unwrap();
        let ctx = TateContext::new(g, 3);
        for n in [-3i64, -2, 2] {
            let fwd = chain_model_convert(&ctx, &m, n, Direction::HomogeneousToInhomogeneous).unwrap();
            let bwd = chain_model_convert(&ctx, &m, n, Direction::InhomogeneousToHomogeneous).unwrap();
            assert!(bwd.compose(&fwd).equals(&AbHom::identity(fwd.source().clone())), "deg {}", n);
            assert!(fwd.compose(&bwd).equals(&AbHom::identity(fwd.source().clone())), "deg {}", n);
        }
    }

    #[test]
    fn conversion_is_a_chain_isomorphism() {
        // d_inhom ∘ convert = convert ∘ d_hom where d_inhom is the transported
        // differential; checked by transporting and comparing to the classical
        // displayed formulas in degrees -3..1.
        for order in [2usize, 4] {
            let g = FiniteGroup::cyclic(order);
            let m = GammaModule::from_character(
                g.clone(),
                8,
                &(0..order).map(|i| if i % 2 == 0 { 1 } else { 3 }).collect::<Vec<_>>(),
            )
            .unwrap();
            let ctx = TateContext::new(g, 4);
            for n in -3i64..=1 {
                let d_plain = plain_differential(&ctx, &m, n).unwrap();
                let conv_n =
                    chain_model_convert(&ctx, &m, n, Direction::InhomogeneousToHomogeneous).unwrap();
                let conv_n1 =
                    chain_model_convert(&ctx, &m, n + 1, Direction::HomogeneousToInhomogeneous)
                        .unwrap();
                let transported = conv_n1.compose(&d_plain).compose(&conv_n);
                let classical = classical_inhomogeneous_differential(&ctx, &m, n).unwrap();
                assert!(transported.equals(&classical), "degree {} for |Γ|={}", n, order);
            }
        }
    }

    #[test]
    fn random_negative_degree_round_trip_exhaustive_small_groups() {
        for order in [2usize, 3, 6] {
            let g = FiniteGroup::cyclic(order);
            let m = GammaModule::trivial_action(g.clone(), Arc::new(FinAbGroup::cyclic(5)));
            let ctx = TateContext::new(g, 3);
            let fwd =
                chain_model_convert(&ctx, &m, -2, Direction::HomogeneousToInhomogeneous).unwrap();
            let bwd =
                chain_model_convert(&ctx, &m, -2, Direction::InhomogeneousToHomogeneous).unwrap();
            assert!(bwd.compose(&fwd).equals(&AbHom::identity(fwd.source().clone())));
        }
    }
}
