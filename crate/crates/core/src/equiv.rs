//! Facet equivalence, the reflections it produces, inessential functions and
//! the reductions that strip inessential parts off a mass linear function.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::masslin::{combine_conormals, MassLinearSpace};
use crate::polytope::Polytope;
use crate::rat::{self, dot, Rat};
use crate::structure;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

/// A vector `xi` annihilating every conormal except `eta_i` and `eta_j`, scaled
/// so that `<eta_i, xi> = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub xi: Vec<Rat>,
    /// `-<eta_j, xi>`; equal to 1 when the pair is normalized.
    pub ratio: Rat,
}

impl Witness {
    pub fn normalized(&self) -> bool {
        self.ratio.is_one()
    }
}

pub fn facet_equivalent(p: &Polytope, i: usize, j: usize) -> Option<Witness> {
    if i == j || i >= p.nfacets() || j >= p.nfacets() {
        return None;
    }
    let rows: Matrix = (0..p.nfacets())
        .filter(|&k| k != i && k != j)
        .map(|k| p.conormal(k).to_vec())
        .collect();
    let ker = linalg::nullspace(&rows, p.dim());
    if ker.len() != 1 {
        return None;
    }
    let s = dot(p.conormal(i), &ker[0]);
    if s.is_zero() {
        return None;
    }
    let xi: Vec<Rat> = ker[0].iter().map(|x| x / &s).collect();
    let ratio = -dot(p.conormal(j), &xi);
    // boundedness forces the opposite sign
    if !ratio.is_positive() {
        return None;
    }
    Some(Witness { xi, ratio })
}

#[derive(Clone, Debug)]
pub struct EquivClasses {
    /// Sorted classes, ordered by smallest element.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub witnesses: BTreeMap<(usize, usize), Witness>,
    /// Relation coefficients `c_i` with `sum_{i in I} c_i eta_i` in the span of
    /// the other conormals, scaled so the first member of each class has 1.
    pub weights: Vec<Rat>,
}

impl EquivClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// True when every class relation has equal coefficients.
    pub fn normalized(&self) -> bool {
        self.weights.iter().all(|w| w.is_one())
    }

    pub fn equivalent(&self, i: usize, j: usize) -> bool {
        self.class_of[i] == self.class_of[j]
    }

    pub fn class_containing(&self, i: usize) -> &[usize] {
        &self.classes[self.class_of[i]]
    }

    pub fn to_json(&self) -> Value {
        let mut w = Map::new();
        for ((i, j), wit) in &self.witnesses {
            w.insert(format!("{},{}", i + 1, j + 1), rat::vec_to_json(&wit.xi));
        }
        json!({
            "classes": self.classes.iter().map(|c| c.iter().map(|i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "witnesses": w,
            "normalized": self.normalized(),
        })
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

pub fn equivalence_classes(p: &Polytope) -> Result<EquivClasses> {
    let nf = p.nfacets();
    let mut parent: Vec<usize> = (0..nf).collect();
    let mut witnesses = BTreeMap::new();
    for i in 0..nf {
        for j in i + 1..nf {
            if let Some(w) = facet_equivalent(p, i, j) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
                witnesses.insert((i, j), w);
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..nf {
        let r = find(&mut parent, i);
        by_root.entry(r).or_default().push(i);
    }
    let classes: Vec<Vec<usize>> = by_root.into_values().collect();
    let mut class_of = vec![0; nf];
    for (k, c) in classes.iter().enumerate() {
        for &i in c {
            class_of[i] = k;
        }
    }
    let mut weights = vec![Rat::one(); nf];
    for class in &classes {
        for a in 0..class.len() {
            for b in a + 1..class.len() {
                if !witnesses.contains_key(&(class[a], class[b])) {
                    return Err(Error::Counterexample(format!(
                        "equivalence is not transitive on facets {} and {}",
                        class[a] + 1,
                        class[b] + 1
                    )));
                }
            }
        }
        for &j in &class[1..] {
            weights[j] = Rat::one() / &witnesses[&(class[0], j)].ratio;
        }
        check_class(p, class, &weights)?;
    }
    Ok(EquivClasses { classes, class_of, witnesses, weights })
}

/// Rank test and relation test for one class.
fn check_class(p: &Polytope, class: &[usize], weights: &[Rat]) -> Result<()> {
    if class.len() < 2 {
        return Ok(());
    }
    let n = p.dim();
    let rest: Matrix = (0..p.nfacets()).filter(|k| !class.contains(k)).map(|k| p.conormal(k).to_vec()).collect();
    let r = linalg::rank(&rest);
    if r + class.len() != n + 1 {
        return Err(Error::Counterexample(format!(
            "class {:?} has complement rank {r}, expected {}",
            class.iter().map(|i| i + 1).collect::<Vec<_>>(),
            n + 1 - class.len()
        )));
    }
    // relations sum c_i eta_i in span(rest): columns are class conormals then rest
    let cols: Vec<&[Rat]> = class.iter().map(|&i| p.conormal(i)).chain(rest.iter().map(|v| v.as_slice())).collect();
    let m: Matrix = (0..n).map(|row| cols.iter().map(|c| c[row].clone()).collect()).collect();
    let ker = linalg::nullspace(&m, cols.len());
    let proj: Matrix = ker.iter().map(|v| v[..class.len()].to_vec()).collect();
    let expected: Vec<Rat> = class.iter().map(|&i| weights[i].clone()).collect();
    if linalg::rank(&proj) != 1 || !linalg::in_span(&proj, &expected) {
        return Err(Error::Counterexample(format!(
            "class {:?} fails the relation test",
            class.iter().map(|i| i + 1).collect::<Vec<_>>()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct InessentialSpace {
    /// `beta` vectors; each is its own coefficient vector `gamma`.
    pub betas: Vec<Vec<Rat>>,
    pub hs: Vec<Vec<Rat>>,
}

impl InessentialSpace {
    pub fn dim(&self) -> usize {
        self.betas.len()
    }

    pub fn contains(&self, h: &[Rat]) -> bool {
        h.iter().all(|x| x.is_zero()) || linalg::in_span(&self.hs, h)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim(),
            "basis": self.betas.iter().zip(&self.hs).map(|(b, h)| json!({
                "beta": rat::vec_to_json(b),
                "H": rat::vec_to_json(h),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Basis `c_j e_j - e_first` for each non-first member `j` of a class.
pub fn inessential_space(p: &Polytope, classes: &EquivClasses) -> Result<InessentialSpace> {
    let nf = p.nfacets();
    let mut betas = Vec::new();
    for class in &classes.classes {
        for &j in &class[1..] {
            let mut b = vec![Rat::zero(); nf];
            b[class[0]] = -Rat::one();
            b[j] = classes.weights[j].clone();
            betas.push(b);
        }
    }
    let hs: Vec<Vec<Rat>> = betas.iter().map(|b| combine_conormals(p, b)).collect();
    if !hs.is_empty() && linalg::rank(&hs) != hs.len() {
        return Err(Error::Counterexample("inessential functions are linearly dependent".into()));
    }
    Ok(InessentialSpace { betas, hs })
}

pub fn is_essential(space: &MassLinearSpace, iness: &InessentialSpace, h: &[Rat]) -> Result<bool> {
    space.gamma_of(h).ok_or(Error::NotMassLinear)?;
    Ok(!iness.contains(h))
}

/// The reflection exchanging two equivalent facets.
#[derive(Clone, Debug)]
pub struct RobustReflection {
    pub i: usize,
    pub j: usize,
    pub xi: Vec<Rat>,
    /// Matrix of `x -> x - <eta_i - eta_j', x> xi`.
    pub matrix: Matrix,
    /// `kappa_j` is divided by this before forming the translation.
    pub ratio: Rat,
}

impl RobustReflection {
    pub fn translation(&self, kappa: &[Rat]) -> Vec<Rat> {
        let t = &kappa[self.i] - &kappa[self.j] / &self.ratio;
        self.xi.iter().map(|x| x * &t).collect()
    }

    pub fn apply(&self, kappa: &[Rat], x: &[Rat]) -> Vec<Rat> {
        let mut y = linalg::mat_vec(&self.matrix, x);
        for (a, b) in y.iter_mut().zip(self.translation(kappa)) {
            *a += b;
        }
        y
    }

    fn maps_vertices(&self, p: &Polytope) -> bool {
        let swap = |k: usize| {
            if k == self.i {
                self.j
            } else if k == self.j {
                self.i
            } else {
                k
            }
        };
        let by_mask: BTreeMap<u64, &Vec<Rat>> = p.vertices().iter().map(|v| (v.mask, &v.point)).collect();
        p.vertices().iter().all(|v| {
            let target = crate::combin::mask_of(&v.facets.iter().map(|&k| swap(k)).collect::<Vec<_>>());
            by_mask.get(&target).is_some_and(|pt| **pt == self.apply(p.support(), &v.point))
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "facets": [self.i + 1, self.j + 1],
            "xi": rat::vec_to_json(&self.xi),
            "matrix": self.matrix.iter().map(|r| rat::vec_to_json(r)).collect::<Vec<_>>(),
            "ratio": rat::to_json(&self.ratio),
        })
    }
}

pub fn reflection_symmetry(p: &Polytope, i: usize, j: usize) -> Result<RobustReflection> {
    p.check_index(i)?;
    p.check_index(j)?;
    let w = facet_equivalent(p, i, j).ok_or(Error::NotEquivalent(i, j))?;
    let n = p.dim();
    let diff: Vec<Rat> = p.conormal(i).iter().zip(p.conormal(j)).map(|(a, b)| a - b / &w.ratio).collect();
    let matrix: Matrix = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let id = if r == c { Rat::one() } else { Rat::zero() };
                    id - &w.xi[r] * &diff[c]
                })
                .collect()
        })
        .collect();
    let refl = RobustReflection { i, j, xi: w.xi, matrix, ratio: w.ratio };
    if linalg::mat_mul(&refl.matrix, &refl.matrix) != identity(n) {
        return Err(Error::Counterexample("reflection is not an involution".into()));
    }
    if p.lattice() && refl.ratio.is_one() && !refl.matrix.iter().all(|r| rat::is_integral(r)) {
        return Err(Error::Counterexample("reflection does not preserve the lattice".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(((i as u64) << 32) ^ j as u64);
    let mut ok = refl.maps_vertices(p);
    for _ in 0..3 {
        let kappa = p.random_chamber_point(&mut rng);
        ok &= refl.maps_vertices(&p.with_support(&kappa)?);
    }
    if !ok {
        return Err(Error::Counterexample(format!("reflection of facets {} and {} does not preserve the polytope", i + 1, j + 1)));
    }
    Ok(refl)
}

fn identity(n: usize) -> Matrix {
    (0..n).map(|r| (0..n).map(|c| if r == c { Rat::one() } else { Rat::zero() }).collect()).collect()
}

/// `H = H_tilde + H_prime` with `H_prime` inessential.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub h_tilde: Vec<Rat>,
    pub h_prime: Vec<Rat>,
    pub gamma_tilde: Vec<Rat>,
    /// `(F, G, alpha)`: `alpha (eta_F - eta_G)` moved into `H_prime`.
    pub steps: Vec<(usize, usize, Rat)>,
}

impl Reduction {
    pub fn to_json(&self) -> Value {
        json!({
            "H_tilde": rat::vec_to_json(&self.h_tilde),
            "H_prime": rat::vec_to_json(&self.h_prime),
            "gamma_tilde": rat::vec_to_json(&self.gamma_tilde),
            "steps": self.steps.iter().map(|(f, g, a)| json!({"facet": f + 1, "opposite": g + 1, "alpha": rat::to_json(a)})).collect::<Vec<_>>(),
        })
    }
}

fn axpy(y: &mut [Rat], a: &Rat, x: &[Rat]) {
    for (u, v) in y.iter_mut().zip(x) {
        *u += a * v;
    }
}

/// Moves inessential parts into `H_prime` until every asymmetric facet of
/// `H_tilde` is pervasive. Each step splits off the bundle over an interval
/// cut out by the lowest asymmetric non-pervasive facet.
pub fn inessential_reduction(p: &Polytope, space: &MassLinearSpace, h: &[Rat]) -> Result<Reduction> {
    let mut gamma = space.gamma_of(h).ok_or(Error::NotMassLinear)?;
    let mut h_tilde = h.to_vec();
    let mut h_prime = vec![Rat::zero(); p.dim()];
    let mut steps = Vec::new();
    for _ in 0..=p.nfacets() {
        let Some(f) = (0..p.nfacets()).find(|&i| !gamma[i].is_zero() && !structure::is_pervasive(p, i)) else {
            return Ok(Reduction { h_tilde, h_prime, gamma_tilde: gamma, steps });
        };
        if !structure::is_flat(p, f) {
            return Err(Error::Counterexample(format!("asymmetric facet {} is neither pervasive nor flat", f + 1)));
        }
        let g = (0..p.nfacets())
            .find(|&k| k != f && p.face_empty(&[f, k]))
            .ok_or_else(|| Error::Counterexample("non-pervasive facet with no disjoint facet".into()))?;
        let w = facet_equivalent(p, f, g)
            .ok_or_else(|| Error::Counterexample(format!("flat facet {} is not equivalent to disjoint facet {}", f + 1, g + 1)))?;
        // normalized direction eta_F - eta_G / ratio keeps the step inessential
        let dir: Vec<Rat> = p.conormal(f).iter().zip(p.conormal(g)).map(|(a, b)| a - b / &w.ratio).collect();
        let alpha = dot(&h_tilde, &w.xi) / dot(&dir, &w.xi);
        axpy(&mut h_tilde, &-alpha.clone(), &dir);
        axpy(&mut h_prime, &alpha, &dir);
        gamma = space
            .gamma_of(&h_tilde)
            .ok_or_else(|| Error::Counterexample("reduced function is not mass linear".into()))?;
        if !gamma[f].is_zero() || !gamma[g].is_zero() {
            return Err(Error::Counterexample(format!("base facets {} and {} stay asymmetric", f + 1, g + 1)));
        }
        steps.push((f, g, alpha));
    }
    Err(Error::Counterexample("reduction did not terminate".into()))
}

/// Reduction that also guarantees a symmetric facet: after the pervasive
/// reduction, a class with empty intersection is split off as a bundle base,
/// otherwise all but one member of a class are made symmetric.
pub fn symmetric_facet_reduction(p: &Polytope, space: &MassLinearSpace, classes: &EquivClasses, h: &[Rat]) -> Result<Reduction> {
    let mut red = inessential_reduction(p, space, h)?;
    if red.gamma_tilde.iter().any(|g| g.is_zero()) {
        return Ok(red);
    }
    let class = classes
        .classes
        .iter()
        .find(|c| c.len() > 1)
        .ok_or_else(|| Error::Counterexample("every facet is asymmetric but all classes are singletons".into()))?
        .clone();
    let n = p.dim();
    let weighted: Vec<Vec<Rat>> = class
        .iter()
        .map(|&i| p.conormal(i).iter().map(|x| x * &classes.weights[i]).collect())
        .collect();
    let shift: Vec<Rat> = if p.face_empty(&class) {
        // H_tilde - sum alpha_i eta_i in the span of the other conormals, sum alpha_i = 0
        let rest: Matrix = (0..p.nfacets()).filter(|k| !class.contains(k)).map(|k| p.conormal(k).to_vec()).collect();
        let ann = linalg::nullspace(&rest, n);
        let mut rows: Matrix = ann.iter().map(|xi| weighted.iter().map(|e| dot(e, xi)).collect()).collect();
        let mut rhs: Vec<Rat> = ann.iter().map(|xi| dot(&red.h_tilde, xi)).collect();
        rows.push(vec![Rat::one(); class.len()]);
        rhs.push(Rat::zero());
        let alpha = linalg::solve(&rows, &rhs).ok_or_else(|| Error::Counterexample("bundle decomposition has no solution".into()))?;
        let mut s = vec![Rat::zero(); n];
        for (a, e) in alpha.iter().zip(&weighted) {
            axpy(&mut s, a, e);
        }
        s
    } else {
        let last = class.len() - 1;
        let mut s = vec![Rat::zero(); n];
        for (k, &i) in class[..last].iter().enumerate() {
            // the weighted support number is c_i kappa_i
            let g = &red.gamma_tilde[i] / &classes.weights[i];
            axpy(&mut s, &g, &weighted[k]);
            axpy(&mut s, &-g, &weighted[last]);
        }
        s
    };
    axpy(&mut red.h_tilde, &-Rat::one(), &shift);
    axpy(&mut red.h_prime, &Rat::one(), &shift);
    red.gamma_tilde = space
        .gamma_of(&red.h_tilde)
        .ok_or_else(|| Error::Counterexample("reduced function is not mass linear".into()))?;
    if red.gamma_tilde.iter().all(|g| !g.is_zero()) {
        return Err(Error::Counterexample("reduction left no symmetric facet".into()));
    }
    Ok(red)
}
