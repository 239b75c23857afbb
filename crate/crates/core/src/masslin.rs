//! Mass linear functions: linear `H` whose pairing with the center of mass is
//! a linear function `sum gamma_i kappa_i` of the support numbers.
//!
//! `<H, c> = sum gamma_i kappa_i` is the polynomial identity
//! `mu_H = (sum gamma_i kappa_i) V`, and `H = sum gamma_i eta_i` is forced, so
//! the space is the kernel of `beta -> sum beta_i (mu_{eta_i} - kappa_i V)`.

use crate::error::{Error, Result};
use crate::kpoly::{Calculus, KPoly};
use crate::linalg::{self, Matrix};
use crate::polytope::{Face, Polytope};
use crate::rat::{self, Rat};
use num_traits::Zero;
use serde_json::{json, Value};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct MassLinearPair {
    pub h: Vec<Rat>,
    pub gamma: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MassLinearSpace {
    pub basis: Vec<MassLinearPair>,
}

impl MassLinearSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The coefficient vector of `h`, if `h` is mass linear.
    pub fn gamma_of(&self, h: &[Rat]) -> Option<Vec<Rat>> {
        let n = h.len();
        let nf = self.basis.first().map(|b| b.gamma.len());
        if h.iter().all(|x| x.is_zero()) {
            return Some(vec![Rat::zero(); nf.unwrap_or(0)]);
        }
        let nf = nf?;
        let cols: Matrix = (0..n).map(|r| self.basis.iter().map(|b| b.h[r].clone()).collect()).collect();
        let t = linalg::solve(&cols, h)?;
        let mut gamma = vec![Rat::zero(); nf];
        for (tk, b) in t.iter().zip(&self.basis) {
            for (g, bg) in gamma.iter_mut().zip(&b.gamma) {
                *g += tk * bg;
            }
        }
        Some(gamma)
    }

    /// Linear combination of the basis.
    pub fn combine(&self, coeffs: &[Rat], n: usize, nf: usize) -> MassLinearPair {
        let mut h = vec![Rat::zero(); n];
        let mut gamma = vec![Rat::zero(); nf];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            for (x, y) in h.iter_mut().zip(&b.h) {
                *x += c * y;
            }
            for (x, y) in gamma.iter_mut().zip(&b.gamma) {
                *x += c * y;
            }
        }
        MassLinearPair { h, gamma }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim_mass_linear": self.dim(),
            "basis": self.basis.iter().map(|b| json!({
                "H": rat::vec_to_json(&b.h),
                "gamma": rat::vec_to_json(&b.gamma),
            })).collect::<Vec<_>>(),
        })
    }
}

/// `sum_i c_i eta_i`.
pub fn combine_conormals(p: &Polytope, c: &[Rat]) -> Vec<Rat> {
    let mut h = vec![Rat::zero(); p.dim()];
    for (ci, eta) in c.iter().zip(p.conormals()) {
        if !ci.is_zero() {
            for (x, y) in h.iter_mut().zip(eta) {
                *x += ci * y;
            }
        }
    }
    h
}

/// `mu_{eta_i} - kappa_i V` for every facet.
fn defect_polys(p: &Polytope, calc: &Calculus) -> Vec<KPoly> {
    (0..p.nfacets())
        .map(|i| {
            let mut q = calc.moment(p.conormal(i));
            let kv = calc.volume.mul(&KPoly::var(p.nfacets(), i));
            q.add_scaled(&kv, &-Rat::from_integer(1.into()));
            q
        })
        .collect()
}

pub fn mass_linear_space(p: &Polytope, calc: &Calculus) -> MassLinearSpace {
    let polys = defect_polys(p, calc);
    let mut index: BTreeMap<&Vec<u8>, usize> = BTreeMap::new();
    for q in &polys {
        for (e, _) in q.terms() {
            let next = index.len();
            index.entry(e).or_insert(next);
        }
    }
    let nf = p.nfacets();
    let mut rows: Matrix = vec![vec![Rat::zero(); nf]; index.len()];
    for (i, q) in polys.iter().enumerate() {
        for (e, c) in q.terms() {
            rows[index[e]][i] = c.clone();
        }
    }
    let kernel = linalg::nullspace(&rows, nf);
    // present the basis in reduced echelon form so it is canonical
    let kernel = if kernel.is_empty() {
        kernel
    } else {
        let (r, piv) = linalg::rref(&kernel);
        r.into_iter().take(piv.len()).collect()
    };
    let basis = kernel
        .into_iter()
        .map(|beta| MassLinearPair { h: combine_conormals(p, &beta), gamma: beta })
        .collect();
    MassLinearSpace { basis }
}

/// Direct check of `mu_H = (sum gamma_i kappa_i) V` as polynomials.
pub fn satisfies_identity(calc: &Calculus, h: &[Rat], gamma: &[Rat]) -> bool {
    let lhs = calc.moment(h);
    let rhs = calc.volume.mul(&KPoly::linear(gamma));
    lhs == rhs
}

pub fn is_mass_linear(space: &MassLinearSpace, h: &[Rat]) -> Option<Vec<Rat>> {
    space.gamma_of(h)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryPartition {
    pub symmetric: Vec<usize>,
    pub asymmetric: Vec<usize>,
}

pub fn partition_of(gamma: &[Rat]) -> SymmetryPartition {
    let (asymmetric, symmetric): (Vec<usize>, Vec<usize>) = (0..gamma.len()).partition(|&i| !gamma[i].is_zero());
    SymmetryPartition { symmetric, asymmetric }
}

pub fn symmetric_partition(space: &MassLinearSpace, h: &[Rat]) -> Result<SymmetryPartition> {
    let gamma = space.gamma_of(h).ok_or(Error::NotMassLinear)?;
    Ok(partition_of(&gamma))
}

#[derive(Clone, Debug)]
pub struct SymmetricFaceRestriction {
    pub face: Face,
    /// `H` restricted to the face, in face coordinates.
    pub h: Vec<Rat>,
    /// Coefficients of the restricted function on the face polytope.
    pub gamma: Vec<Rat>,
    /// The same coefficients expressed against the ambient support numbers.
    pub ambient_gamma: Vec<Rat>,
}

/// Restricts a mass linear `H` to the face `F_I` cut out by symmetric facets
/// and checks that the coefficients on the face match the ambient ones.
pub fn restrict_to_symmetric_face(p: &Polytope, space: &MassLinearSpace, h: &[Rat], face: &[usize]) -> Result<SymmetricFaceRestriction> {
    let gamma = space.gamma_of(h).ok_or(Error::NotMassLinear)?;
    for &i in face {
        p.check_index(i)?;
        if !gamma[i].is_zero() {
            return Err(Error::AsymmetricFaceRequested(i));
        }
    }
    let f = p.face(face)?;
    let nf = p.nfacets();
    let Some(fp) = f.polytope.as_ref() else {
        return Ok(SymmetricFaceRestriction { face: f, h: Vec::new(), gamma: Vec::new(), ambient_gamma: vec![Rat::zero(); nf] });
    };
    let hf: Vec<Rat> = (0..fp.dim())
        .map(|k| (0..p.dim()).map(|r| &f.frame[r][k] * &h[r]).sum())
        .collect();
    let fcalc = Calculus::new(fp)?;
    let fspace = mass_linear_space(fp, &fcalc);
    let fgamma = fspace
        .gamma_of(&hf)
        .ok_or_else(|| Error::Counterexample("restriction to a symmetric face is not mass linear".into()))?;
    let mut ambient = vec![Rat::zero(); nf];
    for (g, form) in fgamma.iter().zip(&f.support_forms) {
        for j in 0..nf {
            if !face.contains(&j) {
                ambient[j] += g * &form[j];
            }
        }
    }
    if ambient != gamma {
        return Err(Error::Counterexample(format!(
            "face coefficients {} disagree with ambient {}",
            rat::show_vec(&ambient),
            rat::show_vec(&gamma)
        )));
    }
    Ok(SymmetricFaceRestriction { face: f, h: hf, gamma: fgamma, ambient_gamma: ambient })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build;
    use crate::rat::{frac, int};

    fn space(p: &Polytope) -> MassLinearSpace {
        mass_linear_space(p, &Calculus::new(p).unwrap())
    }

    #[test]
    fn simplex_space_is_everything() {
        for k in 1..=3 {
            let p = build::simplex(k).unwrap();
            assert_eq!(space(&p).dim(), k);
        }
    }

    #[test]
    fn square_midpoint_coefficients() {
        let sq = build::product_of_simplices(&[1, 1]).unwrap();
        let s = space(&sq);
        assert_eq!(s.gamma_of(&[int(1), int(0)]).unwrap(), vec![frac(-1, 2), frac(1, 2), int(0), int(0)]);
    }

    #[test]
    fn y12_coefficients() {
        let y = build::y_family_int(1, 2, &[0, 0, 1, 0, 4]).unwrap();
        let s = space(&y);
        assert_eq!(s.dim(), 2);
        let g = s.gamma_of(&[int(1), int(0), int(0)]).unwrap();
        assert_eq!(g, vec![frac(-2, 3), frac(1, 3), frac(1, 3), int(0), int(0)]);
        let h45: Vec<Rat> = vec![int(-1), int(-2), int(-2)];
        assert_eq!(s.gamma_of(&h45).unwrap(), vec![int(0), int(0), int(0), int(1), int(-1)]);
        assert!(s.gamma_of(&[int(0), int(1), int(0)]).is_none());
    }

    #[test]
    fn restriction_to_triangular_facet() {
        let y = build::y_family_int(1, 2, &[0, 0, 1, 0, 4]).unwrap();
        let s = space(&y);
        let r = restrict_to_symmetric_face(&y, &s, &[int(1), int(0), int(0)], &[3]).unwrap();
        assert_eq!(r.gamma, vec![frac(-2, 3), frac(1, 3), frac(1, 3)]);
        assert_eq!(
            restrict_to_symmetric_face(&y, &s, &[int(1), int(0), int(0)], &[0]).unwrap_err(),
            Error::AsymmetricFaceRequested(0)
        );
    }

    #[test]
    fn restriction_to_quadrilateral_keeps_base_coefficients() {
        let y = build::y_family_int(1, 2, &[0, 0, 1, 0, 4]).unwrap();
        let s = space(&y);
        let h45: Vec<Rat> = vec![int(-1), int(-2), int(-2)];
        let r = restrict_to_symmetric_face(&y, &s, &h45, &[0]).unwrap();
        assert_eq!(r.ambient_gamma, vec![int(0), int(0), int(0), int(1), int(-1)]);
        let pos4 = r.face.facets.iter().position(|&j| j == 3).unwrap();
        let pos5 = r.face.facets.iter().position(|&j| j == 4).unwrap();
        assert_eq!(r.gamma[pos4], int(1));
        assert_eq!(r.gamma[pos5], int(-1));
    }

    #[test]
    fn hexagon_has_no_mass_linear_functions() {
        let mut p = build::simplex_with(2, vec![int(0), int(0), int(3)]).unwrap();
        for face in [[0, 1], [0, 2], [1, 2]] {
            p = build::blowup(&p, &face, Some(int(1))).unwrap();
        }
        assert_eq!(space(&p).dim(), 0);
    }
}
