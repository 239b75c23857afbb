//! Simple polytopes `{x : <eta_i, x> <= kappa_i}` with exact vertex enumeration,
//! face lattice queries, facet restriction and chamber membership.

use crate::combin::{combinations, contains, indices_of, mask_of, FacetSet};
use crate::error::{Error, Result};
use crate::intlin::unimodular_completion;
use crate::linalg::{self, Matrix};
use crate::rat::{self, dot, Rat};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// JSON form of a polytope.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolytopeDoc {
    pub dim: usize,
    #[serde(with = "rat::serde_mat")]
    pub conormals: Vec<Vec<Rat>>,
    #[serde(with = "rat::serde_vec")]
    pub support: Vec<Rat>,
    #[serde(default)]
    pub lattice: bool,
}

#[derive(Clone, Debug)]
pub struct Vertex {
    /// Sorted indices of the `n` facets through the vertex.
    pub facets: Vec<usize>,
    pub mask: FacetSet,
    pub point: Vec<Rat>,
    /// `point = inverse * support[facets]`, valid on the whole chamber.
    pub inverse: Matrix,
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub facets: Vec<usize>,
    pub mask: FacetSet,
    pub ends: [usize; 2],
}

#[derive(Clone, Debug)]
pub struct FaceLattice {
    /// Sorted lexicographically by facet index set.
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl FaceLattice {
    pub fn is_empty_face(&self, mask: FacetSet) -> bool {
        !self.vertices.iter().any(|v| v.mask & mask == mask)
    }

    pub fn vertices_of(&self, mask: FacetSet) -> impl Iterator<Item = usize> + '_ {
        self.vertices
            .iter()
            .enumerate()
            .filter(move |(_, v)| v.mask & mask == mask)
            .map(|(k, _)| k)
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|e| {
                if e.ends[0] == v {
                    Some(e.ends[1])
                } else if e.ends[1] == v {
                    Some(e.ends[0])
                } else {
                    None
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    conormals: Vec<Vec<Rat>>,
    support: Vec<Rat>,
    lattice: bool,
    scales: Vec<Rat>,
    faces: FaceLattice,
}

/// A facet viewed as a polytope of one dimension less.
#[derive(Clone, Debug)]
pub struct FacetRestriction {
    pub polytope: Polytope,
    /// Parent index of each facet of `polytope`.
    pub facets: Vec<usize>,
    /// `w` with `<eta_i, w> = 1`.
    pub section: Vec<Rat>,
    /// `n x (n-1)` matrix; facet coordinates `y` sit at `kappa_i w + frame y`.
    pub frame: Matrix,
    /// Support numbers of `polytope` as linear forms in the parent's support numbers.
    pub support_forms: Matrix,
}

/// A face `F_I`, reached through a chain of facet restrictions.
#[derive(Clone, Debug)]
pub struct Face {
    pub index_set: Vec<usize>,
    /// `None` when the face is a vertex.
    pub polytope: Option<Polytope>,
    /// Ambient index of each facet of the face polytope.
    pub facets: Vec<usize>,
    /// Face support numbers as linear forms in the ambient support numbers.
    pub support_forms: Matrix,
    /// Ambient directions of the face coordinates (`n x dim f`).
    pub frame: Matrix,
}

fn unit(n: usize, i: usize) -> Vec<Rat> {
    let mut e = vec![Rat::zero(); n];
    e[i] = Rat::one();
    e
}

impl Polytope {
    /// Validates raw data. Outside lattice mode each conormal is rescaled to a
    /// primitive integer vector (with its support number scaled alike); the
    /// factors are kept in [`Polytope::scales`].
    pub fn new(dim: usize, conormals: Vec<Vec<Rat>>, support: Vec<Rat>, lattice: bool) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let n_facets = conormals.len();
        if support.len() != n_facets {
            return Err(Error::SupportLength { expected: n_facets, found: support.len() });
        }
        for (i, c) in conormals.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::DimensionMismatch { facet: i, expected: dim, found: c.len() });
            }
        }
        if n_facets < dim + 1 {
            return Err(Error::TooFewFacets { needed: dim + 1, found: n_facets });
        }
        if n_facets > 64 {
            return Err(Error::TooManyFacets(n_facets));
        }
        let mut conormals = conormals;
        let mut support = support;
        let mut scales = Vec::with_capacity(n_facets);
        for i in 0..n_facets {
            let s = rat::primitive_scale(&conormals[i]).ok_or(Error::ZeroConormal(i))?;
            if lattice {
                if !rat::is_primitive_integer(&conormals[i]) {
                    return Err(Error::NotPrimitive(i));
                }
                scales.push(Rat::one());
            } else {
                for x in conormals[i].iter_mut() {
                    *x *= &s;
                }
                support[i] *= &s;
                scales.push(s);
            }
        }
        let faces = enumerate(dim, &conormals, &support)?;
        Ok(Polytope { dim, conormals, support, lattice, scales, faces })
    }

    pub fn from_doc(doc: &PolytopeDoc) -> Result<Self> {
        Self::new(doc.dim, doc.conormals.clone(), doc.support.clone(), doc.lattice)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PolytopeDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_doc(&doc)
    }

    pub fn to_doc(&self) -> PolytopeDoc {
        PolytopeDoc {
            dim: self.dim,
            conormals: self.conormals.clone(),
            support: self.support.clone(),
            lattice: self.lattice,
        }
    }

    /// Convenience constructor from small integer data.
    pub fn from_ints(conormals: &[&[i64]], support: &[i64], lattice: bool) -> Result<Self> {
        let dim = conormals.first().map_or(0, |c| c.len());
        let c = conormals.iter().map(|r| r.iter().map(|&x| rat::int(x)).collect()).collect();
        let s = support.iter().map(|&x| rat::int(x)).collect();
        Self::new(dim, c, s, lattice)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nfacets(&self) -> usize {
        self.conormals.len()
    }

    pub fn conormals(&self) -> &[Vec<Rat>] {
        &self.conormals
    }

    pub fn conormal(&self, i: usize) -> &[Rat] {
        &self.conormals[i]
    }

    pub fn support(&self) -> &[Rat] {
        &self.support
    }

    pub fn lattice(&self) -> bool {
        self.lattice
    }

    /// Factor by which each input conormal was multiplied during normalization.
    pub fn scales(&self) -> &[Rat] {
        &self.scales
    }

    pub fn faces(&self) -> &FaceLattice {
        &self.faces
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.faces.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.faces.edges
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.nfacets() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, nfacets: self.nfacets() })
        }
    }

    /// True iff no vertex lies on every facet in `indices`.
    pub fn face_empty(&self, indices: &[usize]) -> bool {
        self.faces.is_empty_face(mask_of(indices))
    }

    pub fn facets_meeting(&self, i: usize) -> Vec<usize> {
        (0..self.nfacets())
            .filter(|&j| j != i && !self.faces.is_empty_face(mask_of(&[i, j])))
            .collect()
    }

    pub fn is_smooth(&self) -> bool {
        self.conormals.iter().all(|c| rat::is_integral(c))
            && self.faces.vertices.iter().all(|v| {
                let m: Matrix = v.facets.iter().map(|&i| self.conormals[i].clone()).collect();
                linalg::det(&m).abs().is_one()
            })
    }

    /// Same conormals with new support numbers, if they lie in this chamber.
    pub fn with_support(&self, kappa: &[Rat]) -> Result<Polytope> {
        let points = self.chamber_points(kappa).ok_or(Error::OutsideChamber)?;
        let mut p = self.clone();
        p.support = kappa.to_vec();
        for (v, pt) in p.faces.vertices.iter_mut().zip(points) {
            v.point = pt;
        }
        Ok(p)
    }

    pub fn chamber_contains(&self, kappa: &[Rat]) -> bool {
        self.chamber_points(kappa).is_some()
    }

    fn chamber_points(&self, kappa: &[Rat]) -> Option<Vec<Vec<Rat>>> {
        if kappa.len() != self.nfacets() {
            return None;
        }
        let mut out = Vec::with_capacity(self.faces.vertices.len());
        for v in &self.faces.vertices {
            let rhs: Vec<Rat> = v.facets.iter().map(|&i| kappa[i].clone()).collect();
            let pt = linalg::mat_vec(&v.inverse, &rhs);
            for (j, (eta, k)) in self.conormals.iter().zip(kappa).enumerate() {
                if !contains(v.mask, j) && dot(eta, &pt) >= *k {
                    return None;
                }
            }
            out.push(pt);
        }
        Some(out)
    }

    /// Smallest slack `kappa_j - <eta_j, v>` over vertices and facets not through them.
    pub fn min_slack(&self) -> Rat {
        let mut best: Option<Rat> = None;
        for v in &self.faces.vertices {
            for j in 0..self.nfacets() {
                if !contains(v.mask, j) {
                    let s = &self.support[j] - dot(&self.conormals[j], &v.point);
                    if best.as_ref().is_none_or(|b| s < *b) {
                        best = Some(s);
                    }
                }
            }
        }
        best.unwrap_or_else(Rat::one)
    }

    /// A random support vector in the same chamber: a small rational
    /// perturbation plus a random translation and positive rescaling.
    pub fn random_chamber_point<R: Rng>(&self, rng: &mut R) -> Vec<Rat> {
        let n = self.nfacets();
        let slack = self.min_slack();
        let mut scale = slack / rat::int(4 * (self.dim as i64 + 1));
        loop {
            let xi: Vec<Rat> = (0..self.dim).map(|_| rat::frac(rng.gen_range(-6..=6), rng.gen_range(1..=4))).collect();
            let t = rat::frac(rng.gen_range(1..=12), rng.gen_range(1..=6));
            let kappa: Vec<Rat> = (0..n)
                .map(|i| {
                    let d = rat::frac(rng.gen_range(-8..=8), 8) * &scale;
                    (&self.support[i] + d) * &t + dot(&self.conormals[i], &xi)
                })
                .collect();
            if self.chamber_contains(&kappa) {
                return kappa;
            }
            scale /= rat::int(2);
        }
    }

    /// The facet `i` as an `(n-1)`-dimensional polytope. Coordinates come from a
    /// unimodular completion of `eta_i`, so lattice mode is kept whenever the
    /// projected conormals stay primitive.
    pub fn facet_subpolytope(&self, i: usize) -> Result<FacetRestriction> {
        self.check_index(i)?;
        if self.dim < 2 {
            return Err(Error::DimensionUnsupported(self.dim));
        }
        if self.face_empty(&[i]) {
            return Err(Error::EmptyFace);
        }
        let n = self.dim;
        let eta = rat::to_integers(&self.conormals[i]).ok_or(Error::NoLatticeSection(i))?;
        let u = unimodular_completion(&eta).ok_or(Error::NoLatticeSection(i))?;
        let u: Matrix = u.iter().map(|r| rat::from_integers(r)).collect();
        let section: Vec<Rat> = (0..n).map(|r| u[r][0].clone()).collect();
        let frame: Matrix = (0..n).map(|r| u[r][1..].to_vec()).collect();
        let facets = self.facets_meeting(i);
        let mut conormals = Vec::with_capacity(facets.len());
        let mut support = Vec::with_capacity(facets.len());
        let mut forms = Vec::with_capacity(facets.len());
        for &j in &facets {
            let c: Vec<Rat> = (0..n - 1).map(|k| (0..n).map(|r| &frame[r][k] * &self.conormals[j][r]).sum()).collect();
            let shift = dot(&self.conormals[j], &section);
            support.push(&self.support[j] - &shift * &self.support[i]);
            let mut f = unit(self.nfacets(), j);
            f[i] = -shift;
            forms.push(f);
            conormals.push(c);
        }
        let lattice = self.lattice && conormals.iter().all(|c| rat::is_primitive_integer(c));
        let polytope = Polytope::new(n - 1, conormals, support, lattice)?;
        for (f, s) in forms.iter_mut().zip(polytope.scales()) {
            for x in f.iter_mut() {
                *x *= s;
            }
        }
        Ok(FacetRestriction { polytope, facets, section, frame, support_forms: forms })
    }

    /// The face `F_I` obtained by restricting to the facets of `order` in turn.
    pub fn face(&self, order: &[usize]) -> Result<Face> {
        let mut seen = 0u64;
        for &i in order {
            self.check_index(i)?;
            if contains(seen, i) {
                return Err(Error::RepeatedIndex);
            }
            seen |= 1u64 << i;
        }
        if self.face_empty(order) {
            return Err(Error::EmptyFace);
        }
        let n_amb = self.nfacets();
        let mut face = Face {
            index_set: indices_of(seen),
            polytope: Some(self.clone()),
            facets: (0..n_amb).collect(),
            support_forms: (0..n_amb).map(|i| unit(n_amb, i)).collect(),
            frame: (0..self.dim).map(|i| unit(self.dim, i)).collect(),
        };
        for &i in order {
            let cur = face.polytope.take().expect("nonempty face");
            let local = face.facets.iter().position(|&j| j == i).ok_or(Error::EmptyFace)?;
            if cur.dim() == 1 {
                face.facets.clear();
                face.support_forms.clear();
                face.frame = vec![Vec::new(); self.dim];
                continue;
            }
            let r = cur.facet_subpolytope(local)?;
            let forms: Matrix = r
                .support_forms
                .iter()
                .map(|f| {
                    (0..n_amb)
                        .map(|a| f.iter().zip(&face.support_forms).map(|(c, g)| c * &g[a]).sum())
                        .collect()
                })
                .collect();
            face.facets = r.facets.iter().map(|&k| face.facets[k]).collect();
            face.support_forms = forms;
            face.frame = linalg::mat_mul(&face.frame, &r.frame);
            face.polytope = Some(r.polytope);
        }
        Ok(face)
    }
}

/// Exhaustive vertex enumeration with the boundedness, simplicity and facet checks.
fn enumerate(n: usize, conormals: &[Vec<Rat>], support: &[Rat]) -> Result<FaceLattice> {
    let n_facets = conormals.len();
    if linalg::rank(conormals) < n {
        return Err(Error::Unbounded);
    }
    // A nonzero recession direction would include an extreme ray, cut out by
    // n-1 independent conormals.
    for subset in combinations(n_facets, n - 1) {
        let rows: Matrix = subset.iter().map(|&i| conormals[i].clone()).collect();
        let ns = linalg::nullspace(&rows, n);
        if ns.len() != 1 {
            continue;
        }
        let d = &ns[0];
        let signs: Vec<Rat> = conormals.iter().map(|c| dot(c, d)).collect();
        if signs.iter().all(|s| !s.is_positive()) || signs.iter().all(|s| !s.is_negative()) {
            return Err(Error::Unbounded);
        }
    }
    let mut found: BTreeMap<Vec<Rat>, Matrix> = BTreeMap::new();
    for subset in combinations(n_facets, n) {
        let rows: Matrix = subset.iter().map(|&i| conormals[i].clone()).collect();
        let Some(inv) = linalg::inverse(&rows) else { continue };
        let rhs: Vec<Rat> = subset.iter().map(|&i| support[i].clone()).collect();
        let pt = linalg::mat_vec(&inv, &rhs);
        if found.contains_key(&pt) {
            continue;
        }
        if conormals.iter().zip(support).all(|(c, k)| dot(c, &pt) <= *k) {
            found.insert(pt, inv);
        }
    }
    if found.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    let points: Vec<&Vec<Rat>> = found.keys().collect();
    let diffs: Matrix = points[1..]
        .iter()
        .map(|p| p.iter().zip(points[0]).map(|(a, b)| a - b).collect())
        .collect();
    if linalg::rank(&diffs) < n {
        return Err(Error::EmptyPolytope);
    }
    let mut vertices = Vec::with_capacity(found.len());
    for (pt, _) in found {
        let tight: Vec<usize> = (0..n_facets).filter(|&j| dot(&conormals[j], &pt) == support[j]).collect();
        if tight.len() > n {
            return Err(Error::NotSimple { count: tight.len() });
        }
        let rows: Matrix = tight.iter().map(|&i| conormals[i].clone()).collect();
        let inverse = linalg::inverse(&rows).ok_or(Error::NotSimple { count: tight.len() })?;
        vertices.push(Vertex { mask: mask_of(&tight), facets: tight, point: pt, inverse });
    }
    vertices.sort_by(|a, b| a.facets.cmp(&b.facets));
    let covered = vertices.iter().fold(0u64, |m, v| m | v.mask);
    if let Some(i) = (0..n_facets).find(|&i| !contains(covered, i)) {
        return Err(Error::EmptyFacet(i));
    }
    let mut edges = Vec::new();
    for a in 0..vertices.len() {
        for b in a + 1..vertices.len() {
            let common = vertices[a].mask & vertices[b].mask;
            if common.count_ones() as usize == n - 1 {
                edges.push(Edge { facets: indices_of(common), mask: common, ends: [a, b] });
            }
        }
    }
    let mut degree = vec![0usize; vertices.len()];
    for e in &edges {
        degree[e.ends[0]] += 1;
        degree[e.ends[1]] += 1;
    }
    if degree.iter().any(|&d| d != n) {
        return Err(Error::NotSimple { count: n + 1 });
    }
    Ok(FaceLattice { vertices, edges })
}
