//! Volume, moments and center of mass as exact polynomials in the support numbers.
//!
//! Every vertex is a linear function of `kappa` on the chamber, so a
//! triangulation whose combinatorics only depend on the face lattice gives the
//! volume and first moments as single polynomials on the whole chamber.

mod poly;

pub use poly::KPoly;

use crate::combin::{contains, mask_of, FacetSet};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::polytope::Polytope;
use crate::rat::{self, Rat};
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

/// `v(kappa) = matrix * kappa_I` for the vertex `F_I`.
#[derive(Clone, Debug)]
pub struct VertexAffineMap {
    pub facets: Vec<usize>,
    pub matrix: Matrix,
}

impl VertexAffineMap {
    /// Coordinate `r` of the vertex as a linear form in all `N` support numbers.
    pub fn coordinate_form(&self, r: usize, nfacets: usize) -> Vec<Rat> {
        let mut f = vec![Rat::zero(); nfacets];
        for (k, &i) in self.facets.iter().enumerate() {
            f[i] = self.matrix[r][k].clone();
        }
        f
    }
}

pub fn vertex_maps(p: &Polytope) -> Vec<VertexAffineMap> {
    p.vertices()
        .iter()
        .map(|v| VertexAffineMap { facets: v.facets.clone(), matrix: v.inverse.clone() })
        .collect()
}

/// How the cone apex of each face is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Apex {
    /// Lexicographically smallest vertex index set (the default).
    First,
    /// Lexicographically largest; used to cross-check triangulation invariance.
    Last,
}

#[derive(Clone, Debug)]
pub struct Triangulation {
    /// Each simplex lists `n+1` vertex positions into `Polytope::vertices`.
    pub simplices: Vec<Vec<usize>>,
    /// Orientation of each simplex at the reference support numbers.
    pub signs: Vec<i8>,
}

/// Cone-over-boundary triangulation: each face is coned from its apex over the
/// triangulations of its facets that avoid the apex.
pub fn triangulate(p: &Polytope, apex: Apex) -> Triangulation {
    let mut memo: HashMap<FacetSet, Vec<Vec<usize>>> = HashMap::new();
    let simplices = triangulate_face(p, 0, p.dim(), apex, &mut memo);
    let signs = simplices
        .iter()
        .map(|s| {
            let d = simplex_det_at(p, s);
            if d.is_positive() {
                1
            } else if d.is_negative() {
                -1
            } else {
                0
            }
        })
        .collect();
    Triangulation { simplices, signs }
}

fn triangulate_face(
    p: &Polytope,
    mask: FacetSet,
    dim: usize,
    apex: Apex,
    memo: &mut HashMap<FacetSet, Vec<Vec<usize>>>,
) -> Vec<Vec<usize>> {
    if let Some(s) = memo.get(&mask) {
        return s.clone();
    }
    let verts: Vec<usize> = p.faces().vertices_of(mask).collect();
    let out = if dim == 0 {
        vec![vec![verts[0]]]
    } else {
        let a = match apex {
            Apex::First => verts[0],
            Apex::Last => *verts.last().expect("nonempty face"),
        };
        let amask = p.vertices()[a].mask;
        let mut out = Vec::new();
        for j in 0..p.nfacets() {
            if contains(mask, j) || contains(amask, j) {
                continue;
            }
            let sub = mask | (1u64 << j);
            if p.faces().is_empty_face(sub) {
                continue;
            }
            for s in triangulate_face(p, sub, dim - 1, apex, memo) {
                let mut t = Vec::with_capacity(s.len() + 1);
                t.push(a);
                t.extend(s);
                out.push(t);
            }
        }
        out
    };
    memo.insert(mask, out.clone());
    out
}

fn simplex_det_at(p: &Polytope, s: &[usize]) -> Rat {
    let v0 = &p.vertices()[s[0]].point;
    let m: Matrix = s[1..]
        .iter()
        .map(|&k| p.vertices()[k].point.iter().zip(v0).map(|(a, b)| a - b).collect())
        .collect();
    crate::linalg::det(&m)
}

/// Determinant of a matrix of linear forms, expanded along rows with the
/// minors over column subsets shared.
fn det_of_forms(rows: &[Vec<Vec<Rat>>], nvars: usize) -> KPoly {
    let n = rows.len();
    let full = (1usize << n) - 1;
    let mut minors: Vec<Option<KPoly>> = vec![None; 1 << n];
    minors[0] = Some(KPoly::constant(nvars, Rat::one()));
    let mut order: Vec<usize> = (1..=full).collect();
    order.sort_by_key(|m| m.count_ones());
    for mask in order {
        let r = n - mask.count_ones() as usize;
        let mut acc = KPoly::zero(nvars);
        let mut pos = 0;
        for c in 0..n {
            if mask & (1 << c) == 0 {
                continue;
            }
            let sub = minors[mask & !(1 << c)].as_ref().expect("smaller minors first");
            let term = sub.mul_linear(&rows[r][c]);
            if pos % 2 == 0 {
                acc.add_assign(&term);
            } else {
                acc.add_scaled(&term, &-Rat::one());
            }
            pos += 1;
        }
        minors[mask] = Some(acc);
    }
    minors[full].take().expect("full minor")
}

/// Volume and the first moments `mu_{e_j}` as polynomials in the support numbers.
#[derive(Clone, Debug)]
pub struct Calculus {
    pub volume: KPoly,
    pub moments: Vec<KPoly>,
}

impl Calculus {
    pub fn new(p: &Polytope) -> Result<Calculus> {
        Self::with_apex(p, Apex::First)
    }

    pub fn with_apex(p: &Polytope, apex: Apex) -> Result<Calculus> {
        let n = p.dim();
        let nf = p.nfacets();
        let maps = vertex_maps(p);
        let forms: Vec<Vec<Vec<Rat>>> = maps
            .iter()
            .map(|m| (0..n).map(|r| m.coordinate_form(r, nf)).collect())
            .collect();
        let tri = triangulate(p, apex);
        let mut volume = KPoly::zero(nf);
        // weight of each vertex in the moment sum
        let mut weights: Vec<KPoly> = vec![KPoly::zero(nf); maps.len()];
        for (s, &sign) in tri.simplices.iter().zip(&tri.signs) {
            if sign == 0 {
                return Err(Error::Counterexample("degenerate simplex in triangulation".into()));
            }
            let rows: Vec<Vec<Vec<Rat>>> = s[1..]
                .iter()
                .map(|&k| {
                    (0..n)
                        .map(|c| forms[k][c].iter().zip(&forms[s[0]][c]).map(|(a, b)| a - b).collect())
                        .collect()
                })
                .collect();
            let mut d = det_of_forms(&rows, nf);
            if sign < 0 {
                d = d.scale(&-Rat::one());
            }
            volume.add_assign(&d);
            for &k in s {
                weights[k].add_assign(&d);
            }
        }
        let fact: Rat = (1..=n as i64).map(rat::int).product();
        let volume = volume.scale(&(Rat::one() / &fact));
        let mscale = Rat::one() / (&fact * rat::int(n as i64 + 1));
        let mut moments = Vec::with_capacity(n);
        for j in 0..n {
            let mut m = KPoly::zero(nf);
            for (w, f) in weights.iter().zip(&forms) {
                m.add_assign(&w.mul_linear(&f[j]));
            }
            moments.push(m.scale(&mscale));
        }
        if !volume.is_homogeneous(n) || moments.iter().any(|m| !m.is_homogeneous(n + 1)) {
            return Err(Error::Counterexample("volume or moment polynomial has the wrong degree".into()));
        }
        if !volume.eval(p.support()).is_positive() {
            return Err(Error::Counterexample("nonpositive volume at the reference point".into()));
        }
        Ok(Calculus { volume, moments })
    }

    /// `mu_u = sum u_j mu_{e_j}`.
    pub fn moment(&self, u: &[Rat]) -> KPoly {
        let mut m = KPoly::zero(self.volume.nvars());
        for (uj, mj) in u.iter().zip(&self.moments) {
            m.add_scaled(mj, uj);
        }
        m
    }

    /// Center of mass at `kappa`, which must lie in the chamber of `p`.
    pub fn center(&self, p: &Polytope, kappa: &[Rat]) -> Result<Vec<Rat>> {
        if !p.chamber_contains(kappa) {
            return Err(Error::OutsideChamber);
        }
        let v = self.volume.eval(kappa);
        Ok(self.moments.iter().map(|m| m.eval(kappa) / &v).collect())
    }
}

pub fn volume_poly(p: &Polytope) -> Result<KPoly> {
    Ok(Calculus::new(p)?.volume)
}

pub fn moment_poly(p: &Polytope, u: &[Rat]) -> Result<KPoly> {
    if u.len() != p.dim() {
        return Err(Error::LengthMismatch { expected: p.dim(), found: u.len() });
    }
    Ok(Calculus::new(p)?.moment(u))
}

pub fn center_of_mass(p: &Polytope, kappa: &[Rat]) -> Result<Vec<Rat>> {
    Calculus::new(p)?.center(p, kappa)
}

#[derive(Clone, Debug)]
pub struct DerivativeIdentity {
    pub derivative: KPoly,
    /// Volume of the face as a polynomial in the ambient support numbers;
    /// `None` when the face is empty.
    pub face_volume: Option<KPoly>,
    /// `derivative = k_f * face_volume`.
    pub k_f: Option<Rat>,
}

/// Compares the mixed partial derivative of the volume with the volume of the
/// corresponding face computed on its own.
pub fn derivative_identity(p: &Polytope, volume: &KPoly, indices: &[usize]) -> Result<DerivativeIdentity> {
    for &i in indices {
        p.check_index(i)?;
    }
    if mask_of(indices).count_ones() as usize != indices.len() {
        return Err(Error::RepeatedIndex);
    }
    let mut derivative = volume.clone();
    for &i in indices {
        derivative = derivative.partial(i);
    }
    if p.face_empty(indices) {
        if !derivative.is_zero() {
            return Err(Error::Counterexample(format!(
                "derivative along empty intersection {indices:?} is nonzero"
            )));
        }
        return Ok(DerivativeIdentity { derivative, face_volume: None, k_f: None });
    }
    let face = p.face(indices)?;
    let face_volume = match &face.polytope {
        None => KPoly::constant(p.nfacets(), Rat::one()),
        Some(fp) => volume_poly(fp)?.compose_linear(&face.support_forms, p.nfacets()),
    };
    let k_f = derivative.ratio_to(&face_volume).filter(|k| k.is_positive()).ok_or_else(|| {
        Error::Counterexample(format!("derivative along {indices:?} is not a positive multiple of the face volume"))
    })?;
    Ok(DerivativeIdentity { derivative, face_volume: Some(face_volume), k_f: Some(k_f) })
}
