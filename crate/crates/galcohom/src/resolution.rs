//! The standard homogeneous free resolution of Z over Z[Γ], spliced with
//! its Z-dual into a bi-infinite acyclic complex of free Z[Γ]-modules.
//!
//! Term P_n is Z[Γ^{n+1}] for n ≥ 0 and Z[Γ^{-n}] for n < 0, with the
//! diagonal action. A Z[Γ]-basis is the set of tuples whose first entry is
//! the identity; this module works exclusively with those basis tuples.
//!
//! Differentials (homological, P_n → P_{n-1}):
//!   n ≥ 1:  deletion with alternating signs,
//!   n = 0:  the splice a ↦ Σ_s s (augmentation followed by the diagonal),
//!   n ≤ -1: insertion of every group element at every position with
//!           alternating signs.

use crate::group::FiniteGroup;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// One summand of a differential image: sign · γ · (basis tuple).
#[derive(Clone, Debug)]
pub struct DiffEntry {
    pub sign: i8,
    pub gamma: usize,
    pub basis: usize,
}

pub struct Term {
    pub degree: i64,
    /// Number of free coordinates of a basis tuple (tuple length − 1).
    pub arity: usize,
    /// Z[Γ]-rank: |Γ|^arity.
    pub basis_count: usize,
}

pub struct StandardResolution {
    group: Arc<FiniteGroup>,
    depth: i64,
    terms: Mutex<HashMap<i64, Arc<Term>>>,
    diffs: Mutex<HashMap<i64, Arc<Vec<Vec<DiffEntry>>>>>,
}

impl StandardResolution {
    pub fn new(group: Arc<FiniteGroup>, depth: i64) -> Self {
        StandardResolution {
            group,
            depth,
            terms: Mutex::new(HashMap::new()),
            diffs: Mutex::new(HashMap::new()),
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn depth(&self) -> i64 {
        self.depth
    }

    pub fn check_depth(&self, degree: i64) -> crate::Result<()> {
        if degree.abs() > self.depth {
            Err(crate::Error::ResolutionDepth { degree, depth: self.depth })
        } else {
            Ok(())
        }
    }

    pub fn arity(degree: i64) -> usize {
        if degree >= 0 { degree as usize } else { (-degree - 1) as usize }
    }

    pub fn term(&self, degree: i64) -> Arc<Term> {
        let mut terms = self.terms.lock().unwrap();
        terms
            .entry(degree)
            .or_insert_with(|| {
                let arity = Self::arity(degree);
                let basis_count = self.group.order().pow(arity as u32);
                Arc::new(Term { degree, arity, basis_count })
            })
            .clone()
    }

    /// Index of a basis tuple (free coordinates only, leading identity
    /// implicit), mixed radix over the group order.
    pub fn tuple_index(&self, tuple: &[usize]) -> usize {
        let o = self.group.order();
        tuple.iter().fold(0, |acc, &g| acc * o + g)
    }

    pub fn index_tuple(&self, degree: i64, mut index: usize) -> Vec<usize> {
        let arity = Self::arity(degree);
        let o = self.group.order();
        let mut t = vec![0; arity];
        for i in (0..arity).rev() {
            t[i] = index % o;
            index /= o;
        }
        t
    }

    /// Normalize a full tuple (arbitrary first entry) to γ · basis.
    pub fn normalize(&self, full: &[usize]) -> (usize, usize) {
        let g = full[0];
        let ginv = self.group.inv(g);
        let basis: Vec<usize> = full[1..].iter().map(|&x| self.group.mul(ginv, x)).collect();
        (g, self.tuple_index(&basis))
    }

    /// The plain (unsigned) differential ∂_m : P_m → P_{m-1}, tabulated on
    /// basis tuples of P_m.
    pub fn differential(&self, m: i64) -> Arc<Vec<Vec<DiffEntry>>> {
        if let Some(d) = self.diffs.lock().unwrap().get(&m) {
            return d.clone();
        }
        let d = Arc::new(self.build_differential(m));
        self.diffs.lock().unwrap().insert(m, d.clone());
        d
    }

    fn build_differential(&self, m: i64) -> Vec<Vec<DiffEntry>> {
        let o = self.group.order();
        let e = self.group.identity();
        let src = self.term(m);
        let mut out = Vec::with_capacity(src.basis_count);
        for b in 0..src.basis_count {
            let free = self.index_tuple(m, b);
            let mut full = Vec::with_capacity(free.len() + 1);
            full.push(e);
            full.extend_from_slice(&free);
            let mut entries = Vec::new();
            if m >= 1 {
                // delete position i, sign (-1)^i
                for i in 0..full.len() {
                    let mut t: Vec<usize> = full.clone();
                    t.remove(i);
                    let (g, idx) = self.normalize(&t);
                    entries.push(DiffEntry {
                        sign: if i % 2 == 0 { 1 } else { -1 },
                        gamma: g,
                        basis: idx,
                    });
                }
            } else if m == 0 {
                // splice: (e) ↦ Σ_s (s) = Σ_s s·(e)
                for s in 0..o {
                    entries.push(DiffEntry { sign: 1, gamma: s, basis: 0 });
                }
            } else {
                // insert h at position j, sign (-1)^j, summed over h
                for j in 0..=full.len() {
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    for h in 0..o {
                        let mut t = full.clone();
                        t.insert(j, h);
                        let (g, idx) = self.normalize(&t);
                        entries.push(DiffEntry { sign, gamma: g, basis: idx });
                    }
                }
            }
            out.push(entries);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::IntMatrix;
    use num_bigint::BigInt;
    use num_traits::Zero;

    /// Differential as an integer matrix on the underlying Z-modules
    /// Z[Γ^k] (all full tuples), to check ∂∂ = 0 across the splice.
    fn full_matrix(res: &StandardResolution, m: i64) -> IntMatrix {
        let g = res.group().clone();
        let o = g.order();
        let src = res.term(m);
        let dst = res.term(m - 1);
        let rows = dst.basis_count * o;
        let cols = src.basis_count * o;
        let diff = res.differential(m);
        let mut mat = IntMatrix::zero(rows, cols);
        for b in 0..src.basis_count {
            for g0 in 0..o {
                let col = b * o + g0;
                for e in &diff[b] {
                    let gg = g.mul(g0, e.gamma);
                    let row = e.basis * o + gg;
                    let v = mat.at(row, col).clone() + BigInt::from(e.sign);
                    mat.set(row, col, v);
                }
            }
        }
        mat
    }

    #[test]
    fn boundary_squares_to_zero_across_the_splice() {
        for order in [2usize, 3, 4] {
            let g = FiniteGroup::cyclic(order);
            let res = StandardResolution::new(g, 3);
            for m in [-2i64, -1, 0, 1, 2] {
                let d1 = full_matrix(&res, m);
                let d0 = full_matrix(&res, m - 1);
                assert!(d0.mul(&d1).is_zero(), "∂∂ ≠ 0 at degree {} for |Γ|={}", m, order);
            }
        }
    }

    #[test]
    fn splice_matches_norm() {
        let g = FiniteGroup::cyclic(3);
        let res = StandardResolution::new(g, 2);
        let d = res.differential(0);
        assert_eq!(d[0].len(), 3);
        assert!(d[0].iter().all(|e| e.sign == 1 && e.basis == 0));
    }

    #[test]
    fn depth_guard() {
        let g = FiniteGroup::cyclic(2);
        let res = StandardResolution::new(g, 2);
        assert!(res.check_depth(2).is_ok());
        assert!(matches!(
            res.check_depth(-3),
            Err(crate::Error::ResolutionDepth { degree: -3, depth: 2 })
        ));
    }
}
