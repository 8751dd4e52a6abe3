//! Bounded cohomological complexes of Γ-modules.

use crate::abelian::AbHom;
use crate::gmodule::GammaModule;
use crate::{Error, Result};

pub struct BoundedComplex {
    /// Terms A^k for k = lo, lo+1, ..., in cohomological order.
    terms: Vec<GammaModule>,
    lo: i64,
    /// Differentials f^k : A^k → A^{k+1}.
    diffs: Vec<AbHom>,
}

impl BoundedComplex {
    /// Checked constructor: shapes line up, differentials are equivariant,
    /// consecutive differentials compose to zero.
    pub fn new(lo: i64, terms: Vec<GammaModule>, diffs: Vec<AbHom>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::BadDatum("complex needs at least one term".into()));
        }
        if diffs.len() + 1 != terms.len() {
            return Err(Error::BadDatum("complex needs one differential per adjacent pair".into()));
        }
        for (k, f) in diffs.iter().enumerate() {
            let src = &terms[k];
            let tgt = &terms[k + 1];
            if f.source().ngens() != src.underlying().ngens()
                || f.target().ngens() != tgt.underlying().ngens()
            {
                return Err(Error::BadDatum("differential shape mismatch".into()));
            }
            // equivariance: f ∘ γ = γ ∘ f
            for g in src.group().elements() {
                let lhs = f.matrix().mul(src.action_matrix(g));
                let rhs = tgt.action_matrix(g).mul(f.matrix());
                for j in 0..lhs.cols() {
                    if !tgt.underlying().elements_equal(&lhs.column(j), &rhs.column(j)) {
                        return Err(Error::BadDatum("differential is not equivariant".into()));
                    }
                }
            }
        }
        for k in 0..diffs.len().saturating_sub(1) {
            let comp = diffs[k + 1].compose(&diffs[k]);
            let zero = AbHom::zero(comp.source().clone(), comp.target().clone());
            if !comp.equals(&zero) {
                return Err(Error::BadDatum("differentials do not compose to zero".into()));
            }
        }
        Ok(BoundedComplex { terms, lo, diffs })
    }

    /// A single module placed in one degree.
    pub fn concentrated(degree: i64, m: GammaModule) -> Self {
        BoundedComplex { terms: vec![m], lo: degree, diffs: vec![] }
    }

    /// Two-term complex [src → tgt] in degrees (lo, lo+1).
    pub fn two_term(lo: i64, src: GammaModule, tgt: GammaModule, f: AbHom) -> Result<Self> {
        Self::new(lo, vec![src, tgt], vec![f])
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi()
    }

    pub fn term(&self, k: i64) -> Option<&GammaModule> {
        if k < self.lo || k > self.hi() {
            None
        } else {
            Some(&self.terms[(k - self.lo) as usize])
        }
    }

    pub fn diff(&self, k: i64) -> Option<&AbHom> {
        if k < self.lo || k >= self.hi() {
            None
        } else {
            Some(&self.diffs[(k - self.lo) as usize])
        }
    }

    pub fn group(&self) -> &std::sync::Arc<crate::group::FiniteGroup> {
        self.terms[0].group()
    }
}
