//! Facet predicates, bundle and expansion structure of equivalence classes,
//! product-of-simplices recognition and the classification of mass linear
//! functions in dimensions 2 and 3.

use crate::build;
use crate::combin::{self, mask_of};
use crate::equiv::{EquivClasses, InessentialSpace};
use crate::error::{Error, Result};
use crate::kpoly::Calculus;
use crate::linalg::{self, Matrix};
use crate::masslin::{partition_of, MassLinearSpace};
use crate::polytope::Polytope;
use crate::rat::{self, Rat};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use std::collections::HashSet;

pub fn is_pervasive(p: &Polytope, i: usize) -> bool {
    p.facets_meeting(i).len() + 1 == p.nfacets()
}

/// The conormals of the facets meeting `F_i` lie in a hyperplane.
pub fn is_flat(p: &Polytope, i: usize) -> bool {
    let rows: Matrix = p.facets_meeting(i).into_iter().map(|j| p.conormal(j).to_vec()).collect();
    linalg::rank(&rows) < p.dim()
}

/// Every vertex off `F_i` is joined by an edge to a vertex of `F_i`.
pub fn is_powerful(p: &Polytope, i: usize) -> bool {
    let faces = p.faces();
    (0..faces.vertices.len()).all(|v| {
        combin::contains(faces.vertices[v].mask, i)
            || faces.neighbors(v).into_iter().any(|w| combin::contains(faces.vertices[w].mask, i))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetFlags {
    pub pervasive: Vec<bool>,
    pub flat: Vec<bool>,
    pub powerful: Vec<bool>,
}

impl FacetFlags {
    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.pervasive.len())
                .map(|i| json!({"facet": i + 1, "pervasive": self.pervasive[i], "flat": self.flat[i], "powerful": self.powerful[i]}))
                .collect(),
        )
    }
}

/// All three predicates; flatness is computed from the conormals and again
/// from the degree of the volume in `kappa_i`, and the two must agree.
pub fn facet_predicates(p: &Polytope, calc: &Calculus) -> Result<FacetFlags> {
    let nf = p.nfacets();
    let mut flags = FacetFlags { pervasive: Vec::with_capacity(nf), flat: Vec::with_capacity(nf), powerful: Vec::with_capacity(nf) };
    for i in 0..nf {
        let flat = is_flat(p, i);
        let linear = calc.volume.degree_in(i).unwrap_or(0) <= 1;
        if flat != linear {
            return Err(Error::Counterexample(format!(
                "facet {} is {}flat but the volume has degree {} in its support number",
                i + 1,
                if flat { "" } else { "not " },
                calc.volume.degree_in(i).unwrap_or(0)
            )));
        }
        flags.pervasive.push(is_pervasive(p, i));
        flags.flat.push(flat);
        flags.powerful.push(is_powerful(p, i));
    }
    Ok(flags)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureKind {
    BundleOverSimplex,
    Expansion,
}

/// The structure forced by an equivalence class `I`.
#[derive(Clone, Debug)]
pub struct ClassStructure {
    pub kind: StructureKind,
    pub class: Vec<usize>,
    /// `I` without its last element; `F_{I'}` is the fiber, or the expanded polytope.
    pub fiber_face: Vec<usize>,
    /// Facets outside the class (fiber facets, or fiber-type facets).
    pub other_facets: Vec<usize>,
    pub fiber_dim: usize,
    pub fiber_facet_count: usize,
    /// Columns: a basis of the span of the other conormals, then
    /// `-c_i eta_i` for every class member but the last.
    pub basis: Matrix,
    /// Coordinates of `sum_I c_i eta_i` in the first block of the basis.
    pub alpha: Vec<Rat>,
}

impl ClassStructure {
    pub fn to_json(&self) -> Value {
        let one = |v: &[usize]| v.iter().map(|i| i + 1).collect::<Vec<_>>();
        json!({
            "verdict": match self.kind {
                StructureKind::BundleOverSimplex => "bundle_over_simplex",
                StructureKind::Expansion => "expansion",
            },
            "class": one(&self.class),
            "fiber_face": one(&self.fiber_face),
            "other_facets": one(&self.other_facets),
            "fiber_dim": self.fiber_dim,
            "fiber_facets": self.fiber_facet_count,
            "basis_columns": linalg::transpose(&self.basis).iter().map(|c| rat::vec_to_json(c)).collect::<Vec<_>>(),
            "alpha": rat::vec_to_json(&self.alpha),
        })
    }
}

pub fn detect_class_structure(p: &Polytope, classes: &EquivClasses, class: &[usize]) -> Result<ClassStructure> {
    for &i in class {
        p.check_index(i)?;
    }
    if class.len() < 2 {
        return Err(Error::SingletonClass);
    }
    let mut sorted = class.to_vec();
    sorted.sort_unstable();
    if classes.class_containing(sorted[0]) != sorted.as_slice() {
        let j = sorted.iter().copied().find(|&j| !classes.equivalent(sorted[0], j)).unwrap_or(sorted[0]);
        return Err(Error::NotEquivalent(sorted[0], j));
    }
    let m = sorted.len();
    let n = p.dim();
    let fiber_face = sorted[..m - 1].to_vec();
    let others: Vec<usize> = (0..p.nfacets()).filter(|k| !sorted.contains(k)).collect();
    let face = p.face(&fiber_face)?;
    let (fiber_dim, fiber_facet_count) = face.polytope.as_ref().map_or((0, 0), |f| (f.dim(), f.nfacets()));
    let kind = if p.face_empty(&sorted) { StructureKind::BundleOverSimplex } else { StructureKind::Expansion };

    // coordinates in which the class conormals become (0, -e_k) and (alpha, sum e_k)
    let rest: Matrix = others.iter().map(|&k| p.conormal(k).to_vec()).collect();
    let (r, piv) = linalg::rref(&linalg::transpose(&rest));
    drop(r);
    let span: Vec<Vec<Rat>> = piv.iter().map(|&c| rest[c].clone()).collect();
    let weighted: Vec<Vec<Rat>> = sorted.iter().map(|&i| p.conormal(i).iter().map(|x| x * &classes.weights[i]).collect()).collect();
    let mut cols = span.clone();
    for w in &weighted[..m - 1] {
        cols.push(w.iter().map(|x| -x).collect());
    }
    if cols.len() != n {
        return Err(Error::Counterexample("class coordinates do not form a basis".into()));
    }
    let basis = linalg::transpose(&cols);
    let mut total = vec![Rat::zero(); n];
    for w in &weighted {
        for (t, x) in total.iter_mut().zip(w) {
            *t += x;
        }
    }
    let coords = linalg::solve(&basis, &total).ok_or_else(|| Error::Counterexample("class sum outside the span".into()))?;
    let d = span.len();
    if coords[d..].iter().any(|x| !x.is_zero()) {
        return Err(Error::Counterexample("class sum is not in the span of the other conormals".into()));
    }
    let alpha = coords[..d].to_vec();
    if kind == StructureKind::BundleOverSimplex {
        let verts = p.vertices();
        let mask = mask_of(&sorted);
        let fiber_verts = p.faces().vertices_of(mask_of(&fiber_face)).count();
        if verts.len() != fiber_verts * m || verts.iter().any(|v| (v.mask & mask).count_ones() as usize != m - 1) {
            return Err(Error::Counterexample("class with empty intersection is not a bundle".into()));
        }
    }
    Ok(ClassStructure { kind, class: sorted, fiber_face, other_facets: others, fiber_dim, fiber_facet_count, basis, alpha })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductKind {
    Exact,
    Combinatorial,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductVerdict {
    pub kind: ProductKind,
    /// Facet groups, one per simplex factor; empty for `None`.
    pub partition: Vec<Vec<usize>>,
    /// Every factor relation has equal coefficients.
    pub normalized: bool,
}

impl ProductVerdict {
    pub fn factor_dims(&self) -> Vec<usize> {
        self.partition.iter().map(|g| g.len() - 1).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": match self.kind {
                ProductKind::Exact => "product",
                ProductKind::Combinatorial => "combinatorial_product",
                ProductKind::None => "none",
            },
            "partition": self.partition.iter().map(|g| g.iter().map(|i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "factor_dims": self.factor_dims(),
            "normalized": self.normalized,
        })
    }
}

/// Facet groups making the face lattice that of a product of simplices.
///
/// In such a product every vertex misses exactly one facet per factor. The
/// missing set of the first vertex fixes one representative per factor; any
/// other facet `g` belongs to the factor of `f` iff swapping `f` for `g` again
/// gives a missing set.
pub fn combinatorial_product(p: &Polytope) -> Option<Vec<Vec<usize>>> {
    let nf = p.nfacets();
    let all: u64 = if nf == 64 { u64::MAX } else { (1u64 << nf) - 1 };
    let missing: HashSet<u64> = p.vertices().iter().map(|v| all & !v.mask).collect();
    if missing.len() != p.vertices().len() {
        return None;
    }
    let m0 = all & !p.vertices()[0].mask;
    let reps = combin::indices_of(m0);
    let mut groups: Vec<Vec<usize>> = reps.iter().map(|&f| vec![f]).collect();
    for g in (0..nf).filter(|&g| !combin::contains(m0, g)) {
        let hits: Vec<usize> = reps
            .iter()
            .enumerate()
            .filter(|(_, &f)| missing.contains(&((m0 & !(1u64 << f)) | (1u64 << g))))
            .map(|(k, _)| k)
            .collect();
        if hits.len() != 1 {
            return None;
        }
        groups[hits[0]].push(g);
    }
    let mut count: usize = 1;
    for grp in &groups {
        count = count.checked_mul(grp.len())?;
    }
    if count != p.vertices().len() {
        return None;
    }
    let masks: Vec<u64> = groups.iter().map(|g| mask_of(g)).collect();
    if !missing.iter().all(|&ms| masks.iter().all(|&gm| (ms & gm).count_ones() == 1)) {
        return None;
    }
    for grp in groups.iter_mut() {
        grp.sort_unstable();
    }
    groups.sort();
    Some(groups)
}

pub fn product_recognition(p: &Polytope) -> ProductVerdict {
    let Some(partition) = combinatorial_product(p) else {
        return ProductVerdict { kind: ProductKind::None, partition: Vec::new(), normalized: false };
    };
    let n = p.dim();
    let mut exact = true;
    let mut normalized = true;
    let mut rank_sum = 0;
    for grp in &partition {
        let rows: Matrix = grp.iter().map(|&i| p.conormal(i).to_vec()).collect();
        let r = linalg::rank(&rows);
        rank_sum += r;
        let cols = linalg::transpose(&rows);
        let ker = linalg::nullspace(&cols, grp.len());
        if r + 1 != grp.len() || ker.len() != 1 {
            exact = false;
            continue;
        }
        let rel = &ker[0];
        let positive = rel.iter().all(|x| x.is_positive()) || rel.iter().all(|x| x.is_negative());
        if !positive {
            exact = false;
        }
        if rel.iter().any(|x| x != &rel[0]) {
            normalized = false;
        }
    }
    if rank_sum != n {
        exact = false;
    }
    let kind = if exact { ProductKind::Exact } else { ProductKind::Combinatorial };
    ProductVerdict { kind, partition, normalized: exact && normalized }
}

/// Groups of a combinatorial product that are equivalence classes; each one
/// exhibits the polytope as a bundle over the corresponding simplex factor.
pub fn bundle_directions(verdict: &ProductVerdict, classes: &EquivClasses) -> Vec<usize> {
    (0..verdict.partition.len())
        .filter(|&k| {
            let g = &verdict.partition[k];
            g.len() > 1 && classes.class_containing(g[0]) == g.as_slice()
        })
        .collect()
}

/// Combinatorial check that `p` is `[0,1] x F_f` with ends `F_f` and `F_g`.
pub fn is_interval_product(p: &Polytope, f: usize, g: usize) -> bool {
    let faces = p.faces();
    let on = |v: usize, i: usize| combin::contains(faces.vertices[v].mask, i);
    let nv = faces.vertices.len();
    if !p.face_empty(&[f, g]) || (0..nv).any(|v| !on(v, f) && !on(v, g)) {
        return false;
    }
    let nf = (0..nv).filter(|&v| on(v, f)).count();
    nv == 2 * nf
        && (0..nv).all(|v| {
            let other = if on(v, f) { g } else { f };
            faces.neighbors(v).into_iter().filter(|&w| on(w, other)).count() == 1
        })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllMassCheck {
    pub full_mass_linear: bool,
    pub full_inessential: bool,
    pub product: bool,
    pub classes_empty: bool,
}

impl AllMassCheck {
    pub fn consistent(&self) -> bool {
        let v = [self.full_mass_linear, self.full_inessential, self.product, self.classes_empty];
        v.iter().all(|&b| b == v[0])
    }

    pub fn to_json(&self) -> Value {
        json!({
            "all_mass_linear": self.full_mass_linear,
            "all_inessential": self.full_inessential,
            "product_of_simplices": self.product,
            "classes_have_empty_intersection": self.classes_empty,
            "consistent": self.consistent(),
        })
    }
}

/// Four independent characterizations of polytopes on which every linear
/// function is mass linear.
pub fn theorem_allmass_check(
    p: &Polytope,
    space: &MassLinearSpace,
    iness: &InessentialSpace,
    classes: &EquivClasses,
    product: &ProductVerdict,
) -> AllMassCheck {
    AllMassCheck {
        full_mass_linear: space.dim() == p.dim(),
        full_inessential: iness.dim() == p.dim(),
        product: product.kind == ProductKind::Exact,
        classes_empty: classes.classes.iter().all(|c| p.face_empty(c)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolygonShape {
    Triangle,
    IntervalBundle,
    Product,
    Other,
}

impl PolygonShape {
    pub fn name(self) -> &'static str {
        match self {
            PolygonShape::Triangle => "triangle",
            PolygonShape::IntervalBundle => "bundle_over_simplex",
            PolygonShape::Product => "product",
            PolygonShape::Other => "none",
        }
    }
}

pub fn polygon_shape(p: &Polytope, classes: &EquivClasses) -> PolygonShape {
    match p.nfacets() {
        3 => PolygonShape::Triangle,
        4 if product_recognition(p).kind == ProductKind::Exact => PolygonShape::Product,
        4 if classes.classes.iter().any(|c| c.len() == 2 && p.face_empty(c)) => PolygonShape::IntervalBundle,
        _ => PolygonShape::Other,
    }
}

/// The cases of the low-dimensional classification, in the order they are listed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LowDimCase {
    Triangle,
    IntervalBundleOverInterval,
    Square,
    BundleOverInterval,
    Expansion,
    Simplex,
    IntervalBundleOverTriangle,
    TriangleBundleOverInterval,
    IntervalBundleOverSquare,
    Cube,
}

impl LowDimCase {
    pub fn name(self) -> &'static str {
        match self {
            LowDimCase::Triangle => "triangle",
            LowDimCase::IntervalBundleOverInterval => "interval_bundle_over_interval",
            LowDimCase::Square => "square",
            LowDimCase::BundleOverInterval => "bundle_over_interval",
            LowDimCase::Expansion => "one_fold_expansion",
            LowDimCase::Simplex => "simplex",
            LowDimCase::IntervalBundleOverTriangle => "interval_bundle_over_triangle",
            LowDimCase::TriangleBundleOverInterval => "triangle_bundle_over_interval",
            LowDimCase::IntervalBundleOverSquare => "interval_bundle_over_square",
            LowDimCase::Cube => "cube",
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            LowDimCase::Triangle => "triangle",
            LowDimCase::Expansion => "expansion",
            LowDimCase::Square | LowDimCase::Simplex | LowDimCase::Cube => "product",
            _ => "bundle_over_simplex",
        }
    }
}

/// Coordinates in which a triangle bundle over an interval is `Y_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct YNormalization {
    /// Original indices of the facets playing the roles of the five Y facets.
    pub facet_order: [usize; 5],
    /// Integral unimodular `L` with `L eta_{order[k]}` the k-th Y conormal.
    pub matrix: Matrix,
    pub a: [Rat; 2],
    pub canonical: [Rat; 2],
    pub invariant: Rat,
    pub kappa: Vec<Rat>,
}

impl YNormalization {
    pub fn to_json(&self) -> Value {
        json!({
            "facet_order": self.facet_order.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "matrix": self.matrix.iter().map(|r| rat::vec_to_json(r)).collect::<Vec<_>>(),
            "a": rat::vec_to_json(&self.a),
            "a_canonical": rat::vec_to_json(&self.canonical),
            "invariant": rat::to_json(&self.invariant),
            "kappa": rat::vec_to_json(&self.kappa),
        })
    }
}

/// `a1 a2 (a1 - a2)`.
pub fn y_invariant(a: &[Rat; 2]) -> Rat {
    &a[0] * &a[1] * (&a[0] - &a[1])
}

/// Lexicographically least point of the orbit of `(a1, a2, 0)` under
/// coordinate permutations (renormalized so the third entry is 0) and negation.
pub fn canonical_a(a: &[Rat; 2]) -> [Rat; 2] {
    let base = [a[0].clone(), a[1].clone(), Rat::zero()];
    let perms = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
    let mut best: Option<[Rat; 2]> = None;
    for perm in perms {
        let b: Vec<&Rat> = perm.iter().map(|&k| &base[k]).collect();
        let c = [b[0] - b[2], b[1] - b[2]];
        for cand in [c.clone(), [-&c[0], -&c[1]]] {
            if best.as_ref().is_none_or(|x| cand < *x) {
                best = Some(cand);
            }
        }
    }
    best.expect("orbit is nonempty")
}

pub fn y_normalization(p: &Polytope, classes: &EquivClasses) -> Option<YNormalization> {
    if p.dim() != 3 || p.nfacets() != 5 {
        return None;
    }
    let base = classes.classes.iter().find(|c| c.len() == 2 && p.face_empty(c))?;
    let fibers: Vec<usize> = (0..5).filter(|k| !base.contains(k)).collect();
    for (bp, bq) in [(base[0], base[1]), (base[1], base[0])] {
        let cols = [p.conormal(fibers[0]), p.conormal(fibers[1]), p.conormal(bp)];
        let b: Matrix = (0..3).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        let Some(inv) = linalg::inverse(&b) else { continue };
        let l: Matrix = inv.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        if !l.iter().all(|r| rat::is_integral(r)) {
            continue;
        }
        let order = [fibers[0], fibers[1], fibers[2], bp, bq];
        let images: Vec<Vec<Rat>> = order.iter().map(|&k| linalg::mat_vec(&l, p.conormal(k))).collect();
        let a = [images[4][0].clone(), images[4][1].clone()];
        if images[..4] != build::y_conormals(&a)[..4] || !images[4][2].is_one() {
            continue;
        }
        let kappa: Vec<Rat> = order.iter().map(|&k| p.support()[k].clone()).collect();
        if build::y_family(a.clone(), kappa.clone()).is_err() {
            continue;
        }
        return Some(YNormalization { facet_order: order, matrix: l, canonical: canonical_a(&a), invariant: y_invariant(&a), a, kappa });
    }
    None
}

#[derive(Clone, Debug)]
pub struct LowDimVerdict {
    pub case: LowDimCase,
    pub also_matches: Vec<LowDimCase>,
    pub gamma: Vec<Rat>,
    pub asymmetric: Vec<usize>,
    pub symmetric: Vec<usize>,
    pub inessential: bool,
    pub y: Option<YNormalization>,
}

impl LowDimVerdict {
    pub fn tag(&self) -> &'static str {
        if self.inessential {
            self.case.tag()
        } else {
            "Y_family"
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.tag(),
            "case": self.case.name(),
            "also_matches": self.also_matches.iter().map(|c| c.name()).collect::<Vec<_>>(),
            "gamma": rat::vec_to_json(&self.gamma),
            "asymmetric": self.asymmetric.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "symmetric": self.symmetric.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "inessential": self.inessential,
            "y_normalization": self.y.as_ref().map(|y| y.to_json()),
        })
    }
}

/// Does the asymmetric set `a` fit the claims of `case`?
fn case_holds(p: &Polytope, classes: &EquivClasses, a: &[usize], case: LowDimCase) -> bool {
    let nf = p.nfacets();
    let is_class = |s: &[usize]| !s.is_empty() && classes.class_containing(s[0]) == s;
    let same_class = |s: &[usize]| s.iter().all(|&i| classes.equivalent(s[0], i));
    let empty_pair_classes: Vec<&Vec<usize>> = classes.classes.iter().filter(|c| c.len() == 2 && p.face_empty(c)).collect();
    match case {
        LowDimCase::Triangle => nf == 3 && a.len() >= 2,
        LowDimCase::IntervalBundleOverInterval | LowDimCase::BundleOverInterval => a.len() == 2 && is_class(a) && p.face_empty(a),
        LowDimCase::Square | LowDimCase::Cube => {
            let v = product_recognition(p);
            a.len() == nf && v.kind == ProductKind::Exact && v.partition.iter().all(|g| g.len() == 2) && v.partition.len() == p.dim()
        }
        LowDimCase::Expansion => a.len() == 2 && same_class(a) && !p.face_empty(a),
        LowDimCase::Simplex => nf == 4,
        LowDimCase::IntervalBundleOverTriangle => nf == 5 && a.len() == 3 && is_class(a) && p.face_empty(a),
        LowDimCase::TriangleBundleOverInterval => {
            nf == 5
                && empty_pair_classes.iter().any(|c| {
                    let hit = c.iter().filter(|i| a.contains(i)).count();
                    hit == 0 || hit == 2
                })
        }
        LowDimCase::IntervalBundleOverSquare => {
            if nf != 6 || a.len() != 4 || combinatorial_product(p).is_none_or(|g| g.len() != 3) {
                return false;
            }
            let pairs: Vec<&&Vec<usize>> = empty_pair_classes.iter().filter(|c| c.iter().all(|i| a.contains(i))).collect();
            let rest: Vec<usize> = (0..nf).filter(|i| !a.contains(i)).collect();
            let parallel = p.conormal(rest[0]).iter().zip(p.conormal(rest[1])).all(|(x, y)| (x + y).is_zero());
            pairs.len() == 2 && p.face_empty(&rest) && parallel
        }
    }
}

const POLYGON_CASES: [LowDimCase; 3] = [LowDimCase::Triangle, LowDimCase::IntervalBundleOverInterval, LowDimCase::Square];
const SOLID_CASES: [LowDimCase; 7] = [
    LowDimCase::BundleOverInterval,
    LowDimCase::Expansion,
    LowDimCase::Simplex,
    LowDimCase::IntervalBundleOverTriangle,
    LowDimCase::TriangleBundleOverInterval,
    LowDimCase::IntervalBundleOverSquare,
    LowDimCase::Cube,
];

/// Classifies a nonzero mass linear `H` on a polygon or a smooth 3-polytope.
///
/// The assigned case follows the case analysis of the classification proof;
/// `also_matches` lists every other case whose claims the input satisfies.
pub fn classify_low_dim(
    p: &Polytope,
    space: &MassLinearSpace,
    classes: &EquivClasses,
    iness: &InessentialSpace,
    h: &[Rat],
) -> Result<LowDimVerdict> {
    let n = p.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::DimensionUnsupported(n));
    }
    if h.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: h.len() });
    }
    if n == 3 && !(p.lattice() && p.is_smooth()) {
        return Err(Error::NotSmooth);
    }
    let gamma = space.gamma_of(h).ok_or(Error::NotMassLinear)?;
    if h.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroFunction);
    }
    let part = partition_of(&gamma);
    let a = part.asymmetric.clone();
    let inessential = iness.contains(h);
    let fail = |msg: String| Err(Error::Counterexample(msg));
    if a.len() < 2 {
        return fail(format!("nonzero mass linear function with {} asymmetric facets", a.len()));
    }
    let (case, candidates) = if n == 2 {
        if !inessential {
            return fail("essential mass linear function on a polygon".into());
        }
        let case = match (p.nfacets(), a.len()) {
            (3, _) => LowDimCase::Triangle,
            (4, 2) => LowDimCase::IntervalBundleOverInterval,
            (4, 4) => LowDimCase::Square,
            _ => return fail(format!("polygon with {} edges and {} asymmetric edges", p.nfacets(), a.len())),
        };
        (case, &POLYGON_CASES[..])
    } else {
        let case = if a.len() == 2 {
            if p.face_empty(&a) {
                LowDimCase::BundleOverInterval
            } else {
                LowDimCase::Expansion
            }
        } else if let Some(&f) = a.iter().find(|&&i| !is_pervasive(p, i)) {
            match p.facets_meeting(f).len() {
                3 => LowDimCase::TriangleBundleOverInterval,
                4 if a.len() == 6 => LowDimCase::Cube,
                4 => LowDimCase::IntervalBundleOverSquare,
                k => return fail(format!("non-pervasive asymmetric facet {} has {k} edges", f + 1)),
            }
        } else if p.nfacets() == 4 {
            LowDimCase::Simplex
        } else if case_holds(p, classes, &a, LowDimCase::IntervalBundleOverTriangle) {
            LowDimCase::IntervalBundleOverTriangle
        } else {
            LowDimCase::TriangleBundleOverInterval
        };
        (case, &SOLID_CASES[..])
    };
    if !case_holds(p, classes, &a, case) {
        return fail(format!("assigned case {} does not hold for asymmetric facets {:?}", case.name(), a.iter().map(|i| i + 1).collect::<Vec<_>>()));
    }
    let also_matches: Vec<LowDimCase> = candidates.iter().copied().filter(|&c| c != case && case_holds(p, classes, &a, c)).collect();
    let y = if inessential {
        None
    } else {
        let y = y_normalization(p, classes).ok_or_else(|| Error::Counterexample("essential function but no triangle bundle structure".into()))?;
        if y.invariant.is_zero() {
            return fail(format!("essential function on Y with a = {}", rat::show_vec(&y.a)));
        }
        Some(y)
    };
    Ok(LowDimVerdict { case, also_matches, gamma, asymmetric: part.asymmetric, symmetric: part.symmetric, inessential, y })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::{equivalence_classes, inessential_space};
    use crate::masslin::mass_linear_space;
    use crate::rat::int;

    struct Setup {
        p: Polytope,
        calc: Calculus,
        space: MassLinearSpace,
        classes: EquivClasses,
        iness: InessentialSpace,
    }

    fn setup(p: Polytope) -> Setup {
        let calc = Calculus::new(&p).unwrap();
        let space = mass_linear_space(&p, &calc);
        let classes = equivalence_classes(&p).unwrap();
        let iness = inessential_space(&p, &classes).unwrap();
        Setup { p, calc, space, classes, iness }
    }

    fn y12() -> Polytope {
        build::y_family_int(1, 2, &[0, 0, 1, 0, 4]).unwrap()
    }

    #[test]
    fn y_flags() {
        let s = setup(y12());
        let f = facet_predicates(&s.p, &s.calc).unwrap();
        assert_eq!(f.pervasive, vec![true, true, true, false, false]);
        assert_eq!(f.flat[3..], [true, true]);
        assert_eq!(f.flat[..3], [false, false, false]);
    }

    #[test]
    fn simplex_flags() {
        let s = setup(build::simplex(3).unwrap());
        let f = facet_predicates(&s.p, &s.calc).unwrap();
        assert!(f.pervasive.iter().all(|&b| b));
        assert!(f.powerful.iter().all(|&b| b));
        assert!(f.flat.iter().all(|&b| !b));
    }

    #[test]
    fn y_is_a_triangle_bundle() {
        let s = setup(y12());
        let c = detect_class_structure(&s.p, &s.classes, &[3, 4]).unwrap();
        assert_eq!(c.kind, StructureKind::BundleOverSimplex);
        assert_eq!((c.fiber_dim, c.fiber_facet_count), (2, 3));
        assert_eq!(detect_class_structure(&s.p, &s.classes, &[0]).unwrap_err(), Error::SingletonClass);
    }

    #[test]
    fn expanded_hexagon_round_trip() {
        let mut hex = build::simplex_with(2, vec![int(0), int(0), int(3)]).unwrap();
        for face in [[0, 1], [0, 2], [1, 2]] {
            hex = build::blowup(&hex, &face, Some(int(1))).unwrap();
        }
        let s = setup(build::expansion(&hex, 0, 1).unwrap());
        let n = s.p.nfacets();
        let class = s.classes.class_containing(n - 1).to_vec();
        assert_eq!(class, vec![n - 2, n - 1]);
        let c = detect_class_structure(&s.p, &s.classes, &class).unwrap();
        assert_eq!(c.kind, StructureKind::Expansion);
        assert_eq!((c.fiber_dim, c.fiber_facet_count), (2, 6));
    }

    #[test]
    fn products() {
        let cube = build::product_of_simplices(&[1, 1, 1]).unwrap();
        let v = product_recognition(&cube);
        assert_eq!(v.kind, ProductKind::Exact);
        assert_eq!(v.factor_dims(), vec![1, 1, 1]);
        let y0 = build::y_family_int(0, 0, &[0, 0, 1, 0, 1]).unwrap();
        let v = product_recognition(&y0);
        assert_eq!(v.kind, ProductKind::Exact);
        let mut d = v.factor_dims();
        d.sort();
        assert_eq!(d, vec![1, 2]);
        assert_eq!(product_recognition(&y12()).kind, ProductKind::Combinatorial);
    }

    #[test]
    fn allmass() {
        let check = |p: Polytope| {
            let s = setup(p);
            let v = product_recognition(&s.p);
            theorem_allmass_check(&s.p, &s.space, &s.iness, &s.classes, &v)
        };
        let c = check(build::product_of_simplices(&[2, 1]).unwrap());
        assert!(c.full_mass_linear && c.consistent());
        let c = check(y12());
        assert!(!c.full_mass_linear && c.consistent());
    }

    #[test]
    fn canonical_orbit() {
        assert_eq!(canonical_a(&[int(1), int(2)]), [int(-2), int(-1)]);
        assert_eq!(canonical_a(&[int(2), int(1)]), canonical_a(&[int(1), int(2)]));
        assert_eq!(canonical_a(&[int(-1), int(1)]), canonical_a(&[int(1), int(2)]));
    }

    #[test]
    fn trapezoid_is_an_interval_bundle() {
        let p = Polytope::from_ints(&[&[-1, 0], &[0, -1], &[0, 1], &[1, 1]], &[0, 0, 2, 5], true).unwrap();
        let s = setup(p);
        assert_eq!(s.space.dim(), 1);
        let h = s.space.basis[0].h.clone();
        let v = classify_low_dim(&s.p, &s.space, &s.classes, &s.iness, &h).unwrap();
        assert_eq!(v.case, LowDimCase::IntervalBundleOverInterval);
        assert!(v.inessential);
        assert_eq!(v.asymmetric, vec![0, 3]);
    }

    #[test]
    fn y_essential_normalization() {
        let s = setup(y12());
        let v = classify_low_dim(&s.p, &s.space, &s.classes, &s.iness, &[int(1), int(0), int(0)]).unwrap();
        assert!(!v.inessential);
        assert_eq!(v.tag(), "Y_family");
        assert_eq!(v.case, LowDimCase::TriangleBundleOverInterval);
        let y = v.y.unwrap();
        assert_eq!(y.canonical, canonical_a(&[int(1), int(2)]));
        assert!(!y.invariant.is_zero());

        let v = classify_low_dim(&s.p, &s.space, &s.classes, &s.iness, &[int(-1), int(-2), int(-2)]).unwrap();
        assert_eq!(v.case, LowDimCase::BundleOverInterval);
        assert!(v.inessential);
    }

    #[test]
    fn interval_products_of_powerful_facets() {
        let cube = build::product_of_simplices(&[1, 1, 1]).unwrap();
        let v = product_recognition(&cube);
        let g = &v.partition[0];
        assert!(is_interval_product(&cube, g[0], g[1]));
    }
}
