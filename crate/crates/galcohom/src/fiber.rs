//! Fiber products of a finite abelian group with a finite pointed set (or a
//! second group) over a common target, materialized elementwise, with the
//! group structure recorded when both legs are homomorphisms.

use crate::abelian::{AbHom, FinAbGroup};
use crate::matrix::IntMatrix;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use std::sync::Arc;

const ENUMERATION_CAP: u64 = 200_000;

/// A finite pointed set with a map into a presented group, the shape of a
/// user-supplied archimedean H^1(F_v, G).
#[derive(Clone)]
pub struct PointedSetMap {
    pub size: usize,
    pub base: usize,
    /// image of each element, in target coordinates
    pub images: Vec<Vec<BigInt>>,
}

/// Right leg of a fiber product.
#[derive(Clone)]
pub enum RightLeg {
    Group { group: Arc<FinAbGroup>, map: AbHom },
    Set(PointedSetMap),
}

impl RightLeg {
    pub fn size(&self) -> Result<u64> {
        match self {
            RightLeg::Group { group, .. } => group
                .order()
                .and_then(|o| o.to_string().parse::<u64>().ok())
                .ok_or_else(|| Error::TooLarge("infinite right leg".into())),
            RightLeg::Set(s) => Ok(s.size as u64),
        }
    }

    pub fn is_group(&self) -> bool {
        matches!(self, RightLeg::Group { .. })
    }
}

/// The fiber product of  L --l--> Mid <--ψ-- R.
pub struct FiberProductSet {
    pub left: Arc<FinAbGroup>,
    pub middle: Arc<FinAbGroup>,
    pub left_map: AbHom,
    pub right: RightLeg,
    /// All compatible pairs: (left element coords, right element index).
    pub elements: Vec<(Vec<BigInt>, usize)>,
    /// Index of the base point (0, base).
    pub base: usize,
    /// When the right leg is a group: the fiber product as a group, with
    /// its inclusion into L ⊕ R.
    pub group: Option<(Arc<FinAbGroup>, AbHom)>,
}

impl FiberProductSet {
    pub fn new(left_map: AbHom, right: RightLeg) -> Result<FiberProductSet> {
        let left = left_map.source().clone();
        let middle = left_map.target().clone();
        let lsize = left
            .order()
            .and_then(|o| o.to_string().parse::<u64>().ok())
            .ok_or_else(|| Error::TooLarge("left side of the fiber product is infinite".into()))?;
        let rsize = right.size()?;
        if lsize.saturating_mul(rsize) > ENUMERATION_CAP {
            return Err(Error::TooLarge(format!(
                "fiber product enumeration of {}x{} elements",
                lsize, rsize
            )));
        }
        let lelems = left.enumerate_elements();
        let rimages: Vec<Vec<BigInt>> = match &right {
            RightLeg::Group { group, map } => {
                group.enumerate_elements().iter().map(|e| map.apply(e)).collect()
            }
            RightLeg::Set(s) => s.images.clone(),
        };
        let mut elements = Vec::new();
        let mut base = None;
        let base_r = match &right {
            RightLeg::Group { .. } => 0,
            RightLeg::Set(s) => s.base,
        };
        for le in &lelems {
            let li = left_map.apply(le);
            for (ri, rim) in rimages.iter().enumerate() {
                if middle.elements_equal(&li, rim) {
                    if left.is_zero_element(le) && ri == base_r {
                        base = Some(elements.len());
                    }
                    elements.push((left.reduce(le), ri));
                }
            }
        }
        let base = base.ok_or_else(|| {
            Error::BadDatum("fiber product base point missing: ψ(base) ≠ 0".into())
        })?;
        let group = match &right {
            RightLeg::Group { group: rg, map: rmap } => {
                // kernel of (l, −ψ) : L ⊕ R → Mid
                let nl = left.ngens();
                let nr = rg.ngens();
                let rl = left.relations();
                let rr = rg.relations();
                let sum_rels = IntMatrix::from_fn(nl + nr, rl.cols() + rr.cols(), |i, j| {
                    if i < nl && j < rl.cols() {
                        rl.at(i, j).clone()
                    } else if i >= nl && j >= rl.cols() {
                        rr.at(i - nl, j - rl.cols()).clone()
                    } else {
                        BigInt::zero()
                    }
                });
                let sum = Arc::new(FinAbGroup::new(nl + nr, sum_rels));
                let diff = IntMatrix::from_fn(middle.ngens(), nl + nr, |i, j| {
                    if j < nl {
                        left_map.matrix().at(i, j).clone()
                    } else {
                        -rmap.matrix().at(i, j - nl)
                    }
                });
                let dh = AbHom::new(sum, middle.clone(), diff)?;
                Some(dh.kernel())
            }
            RightLeg::Set(_) => None,
        };
        Ok(FiberProductSet { left, middle, left_map, right, elements, base, group })
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// When both legs are groups the elementwise count must match the group
    /// order; used as an internal cross-check.
    pub fn consistent(&self) -> bool {
        match &self.group {
            None => true,
            Some((g, _)) => g.order() == Some(BigInt::from(self.elements.len() as u64)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> Arc<FinAbGroup> {
        Arc::new(FinAbGroup::cyclic(n))
    }

    #[test]
    fn group_fiber_product_of_reductions() {
        // Z/4 → Z/2 ← Z/4: pairs (a,b) with a ≡ b mod 2: order 8
        let z4 = z(4);
        let z2 = z(2);
        let l = AbHom::new(z4.clone(), z2.clone(), IntMatrix::identity(1)).unwrap();
        let r = AbHom::new(z4.clone(), z2.clone(), IntMatrix::identity(1)).unwrap();
        let fp = FiberProductSet::new(l, RightLeg::Group { group: z4.clone(), map: r }).unwrap();
        assert_eq!(fp.size(), 8);
        assert!(fp.consistent());
        let (g, _) = fp.group.as_ref().unwrap();
        assert_eq!(g.order(), Some(BigInt::from(8)));
    }

    #[test]
    fn set_fiber_product() {
        // left Z/2 → Z/2 identity; right: 3-element pointed set mapping to
        // (0, 1, 0): pairs: (0, e0), (0, e2), (1, e1): 3 elements.
        let z2 = z(2);
        let l = AbHom::identity(z2.clone());
        let set = PointedSetMap {
            size: 3,
            base: 0,
            images: vec![vec![BigInt::zero()], vec![BigInt::from(1)], vec![BigInt::zero()]],
        };
        let fp = FiberProductSet::new(l, RightLeg::Set(set)).unwrap();
        assert_eq!(fp.size(), 3);
        assert!(fp.group.is_none());
        let (bcoords, bidx) = &fp.elements[fp.base];
        assert!(bcoords.iter().all(|c| c.is_zero()));
        assert_eq!(*bidx, 0);
    }

    #[test]
    fn bijective_right_leg_collapses() {
        // right leg bijective onto middle: fiber ≅ left
        let z8 = z(8);
        let z2 = z(2);
        let l = AbHom::new(z8.clone(), z2.clone(), IntMatrix::identity(1)).unwrap();
        let r = AbHom::identity(z2.clone());
        let fp = FiberProductSet::new(l, RightLeg::Group { group: z2.clone(), map: r }).unwrap();
        assert_eq!(fp.size(), 8);
        let (g, _) = fp.group.as_ref().unwrap();
        assert_eq!(g.invariant_factors(), vec![BigInt::from(8)]);
    }

    #[test]
    fn base_point_must_map_to_zero() {
        let z2 = z(2);
        let l = AbHom::identity(z2.clone());
        let set = PointedSetMap { size: 1, base: 0, images: vec![vec![BigInt::from(1)]] };
        assert!(FiberProductSet::new(l, RightLeg::Set(set)).is_err());
    }
}
