//! Everything computed once per polytope and shared by reports and checks.

use crate::equiv::{self, EquivClasses, InessentialSpace};
use crate::error::Result;
use crate::kpoly::Calculus;
use crate::masslin::{self, MassLinearSpace};
use crate::polytope::Polytope;
use crate::rat::Rat;
use crate::structure::{self, FacetFlags, ProductVerdict};

#[derive(Clone, Debug)]
pub struct Analysis {
    pub polytope: Polytope,
    pub calculus: Calculus,
    pub space: MassLinearSpace,
    pub classes: EquivClasses,
    pub inessential: InessentialSpace,
    pub flags: FacetFlags,
    pub product: ProductVerdict,
}

impl Analysis {
    pub fn new(p: Polytope) -> Result<Analysis> {
        let calculus = Calculus::new(&p)?;
        let space = masslin::mass_linear_space(&p, &calculus);
        let classes = equiv::equivalence_classes(&p)?;
        let inessential = equiv::inessential_space(&p, &classes)?;
        let flags = structure::facet_predicates(&p, &calculus)?;
        let product = structure::product_recognition(&p);
        Ok(Analysis { polytope: p, calculus, space, classes, inessential, flags, product })
    }

    pub fn essential_dim(&self) -> usize {
        self.space.dim() - self.inessential.dim()
    }

    /// The basis of mass linear functions plus one generic combination of it.
    pub fn sample_functions(&self) -> Vec<Vec<Rat>> {
        let mut out: Vec<Vec<Rat>> = self.space.basis.iter().map(|b| b.h.clone()).collect();
        if self.space.dim() > 1 {
            let coeffs: Vec<Rat> = (0..self.space.dim()).map(|k| Rat::from_integer((2 * k as i64 + 3).into())).collect();
            out.push(self.space.combine(&coeffs, self.polytope.dim(), self.polytope.nfacets()).h);
        }
        out
    }
}
