//! Constructors for simplices, products, the Y family, bundles over simplices,
//! expansions and blow-ups, plus a seeded corpus generator.

use crate::combin::{indices_of, mask_of};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::polytope::Polytope;
use crate::rat::{self, Rat};
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Conormals of the standard `k`-simplex: `-e_1, ..., -e_k, e_1 + ... + e_k`.
pub fn simplex_conormals(k: usize) -> Matrix {
    let mut rows: Matrix = (0..k)
        .map(|i| (0..k).map(|j| if i == j { -Rat::one() } else { Rat::zero() }).collect())
        .collect();
    rows.push(vec![Rat::one(); k]);
    rows
}

/// The standard simplex `{x >= 0, sum x <= 1}`.
pub fn simplex(k: usize) -> Result<Polytope> {
    let mut kappa = vec![Rat::zero(); k + 1];
    kappa[k] = Rat::one();
    simplex_with(k, kappa)
}

pub fn simplex_with(k: usize, kappa: Vec<Rat>) -> Result<Polytope> {
    if k == 0 {
        return Err(Error::ZeroDimension);
    }
    Polytope::new(k, simplex_conormals(k), kappa, true)
}

/// `P x Q` with conormals `(eta, 0)` then `(0, eta')`.
pub fn product(p: &Polytope, q: &Polytope) -> Result<Polytope> {
    let (a, b) = (p.dim(), q.dim());
    let mut conormals = Vec::new();
    for c in p.conormals() {
        let mut row = c.clone();
        row.extend(std::iter::repeat_n(Rat::zero(), b));
        conormals.push(row);
    }
    for c in q.conormals() {
        let mut row = vec![Rat::zero(); a];
        row.extend(c.iter().cloned());
        conormals.push(row);
    }
    let mut support = p.support().to_vec();
    support.extend(q.support().iter().cloned());
    Polytope::new(a + b, conormals, support, p.lattice() && q.lattice())
}

pub fn product_of_simplices(dims: &[usize]) -> Result<Polytope> {
    let mut it = dims.iter();
    let first = *it.next().ok_or(Error::ZeroDimension)?;
    let mut p = simplex(first)?;
    for &k in it {
        p = product(&p, &simplex(k)?)?;
    }
    Ok(p)
}

/// Conormals `-e1, -e2, e1+e2, -e3, e3 + a1 e1 + a2 e2`.
pub fn y_conormals(a: &[Rat; 2]) -> Matrix {
    let z = Rat::zero;
    let o = Rat::one;
    vec![
        vec![-o(), z(), z()],
        vec![z(), -o(), z()],
        vec![o(), o(), z()],
        vec![z(), z(), -o()],
        vec![a[0].clone(), a[1].clone(), o()],
    ]
}

/// Whether `kappa` satisfies the chamber inequalities of the Y family.
pub fn y_chamber(a: &[Rat; 2], kappa: &[Rat]) -> bool {
    if kappa.len() != 5 {
        return false;
    }
    let lambda: Rat = kappa[..3].iter().sum();
    let top = [Rat::zero(), a[0].clone(), a[1].clone()].into_iter().max().expect("nonempty");
    lambda.is_positive() && &kappa[3] + &kappa[4] > -&a[0] * &kappa[0] - &a[1] * &kappa[1] + top * lambda
}

/// A Delta_2 bundle over Delta_1; smooth (and in lattice mode) iff `a` is integral.
pub fn y_family(a: [Rat; 2], kappa: Vec<Rat>) -> Result<Polytope> {
    if !y_chamber(&a, &kappa) {
        return Err(Error::OutsideChamber);
    }
    let lattice = a.iter().all(|x| x.is_integer());
    Polytope::new(3, y_conormals(&a), kappa, lattice)
}

pub fn y_family_int(a1: i64, a2: i64, kappa: &[i64]) -> Result<Polytope> {
    y_family([rat::int(a1), rat::int(a2)], kappa.iter().map(|&x| rat::int(x)).collect())
}

/// Fiber conormals `(eta_j, 0)` followed by base conormals `(c_i, eta^_i)`
/// where `eta^_i` are the conormals of `Delta_k`.
pub fn bundle_over_simplex(fiber: &Polytope, k: usize, twists: &[Vec<Rat>], base_support: &[Rat]) -> Result<Polytope> {
    let m = fiber.dim();
    if k == 0 {
        return Err(Error::InvalidTwist("base simplex dimension must be positive".into()));
    }
    if twists.len() != k + 1 || twists.iter().any(|c| c.len() != m) {
        return Err(Error::InvalidTwist(format!("expected {} twist vectors of length {m}", k + 1)));
    }
    if base_support.len() != k + 1 {
        return Err(Error::InvalidTwist(format!("expected {} base support numbers", k + 1)));
    }
    let mut conormals = Vec::new();
    for c in fiber.conormals() {
        let mut row = c.clone();
        row.extend(std::iter::repeat_n(Rat::zero(), k));
        conormals.push(row);
    }
    for (c, h) in twists.iter().zip(simplex_conormals(k)) {
        let mut row = c.clone();
        row.extend(h);
        conormals.push(row);
    }
    let mut support = fiber.support().to_vec();
    support.extend(base_support.iter().cloned());
    let lattice = fiber.lattice() && twists.iter().all(|c| rat::is_integral(c));
    let p = Polytope::new(m + k, conormals, support, lattice).map_err(|_| Error::OutsideChamber)?;
    let nf = fiber.nfacets();
    let base: Vec<usize> = (nf..nf + k + 1).collect();
    if p.vertices().len() != fiber.vertices().len() * (k + 1) || !p.face_empty(&base) {
        return Err(Error::OutsideChamber);
    }
    Ok(p)
}

/// The `k`-fold expansion of `p` along `facet`: conormals `(eta_j, 0)` for the
/// other facets in order, then `(0, -e_i)`, then `(eta_facet, e_1 + ... + e_k)`.
pub fn expansion(p: &Polytope, facet: usize, k: usize) -> Result<Polytope> {
    p.check_index(facet)?;
    if k == 0 {
        return Err(Error::ZeroDimension);
    }
    let m = p.dim();
    let mut conormals = Vec::new();
    let mut support = Vec::new();
    for j in (0..p.nfacets()).filter(|&j| j != facet) {
        let mut row = p.conormal(j).to_vec();
        row.extend(std::iter::repeat_n(Rat::zero(), k));
        conormals.push(row);
        support.push(p.support()[j].clone());
    }
    for i in 0..k {
        let mut row = vec![Rat::zero(); m + k];
        row[m + i] = -Rat::one();
        conormals.push(row);
        support.push(Rat::zero());
    }
    let mut row = p.conormal(facet).to_vec();
    row.extend(std::iter::repeat_n(Rat::one(), k));
    conormals.push(row);
    support.push(p.support()[facet].clone());
    Polytope::new(m + k, conormals, support, p.lattice())
}

/// Largest admissible cut depth for blowing up `F_I`: every vertex off the face
/// must stay strictly inside the new half-space.
pub fn blowup_limit(p: &Polytope, face: &[usize]) -> Option<Rat> {
    let mask = mask_of(face);
    let eta0 = blowup_conormal(p, face);
    let k0: Rat = face.iter().map(|&i| &p.support()[i]).sum();
    p.vertices()
        .iter()
        .filter(|v| v.mask & mask != mask)
        .map(|v| &k0 - rat::dot(&eta0, &v.point))
        .min()
}

fn blowup_conormal(p: &Polytope, face: &[usize]) -> Vec<Rat> {
    let mut eta0 = vec![Rat::zero(); p.dim()];
    for &i in face {
        for (x, y) in eta0.iter_mut().zip(p.conormal(i)) {
            *x += y;
        }
    }
    eta0
}

/// Cuts off the face `F_I` with the new facet `<sum_{i in I} eta_i, x> <= sum kappa_i - eps`,
/// appended last. The default depth is a quarter of [`blowup_limit`].
pub fn blowup(p: &Polytope, face: &[usize], eps: Option<Rat>) -> Result<Polytope> {
    for &i in face {
        p.check_index(i)?;
    }
    if face.len() < 2 || mask_of(face).count_ones() as usize != face.len() {
        return Err(Error::EpsilonTooLarge("blow-up needs at least two distinct facets".into()));
    }
    if p.face_empty(face) {
        return Err(Error::EmptyFace);
    }
    let limit = blowup_limit(p, face).ok_or_else(|| Error::EpsilonTooLarge("face contains every vertex".into()))?;
    let eps = eps.unwrap_or_else(|| &limit / rat::int(4));
    if !eps.is_positive() || eps >= limit {
        return Err(Error::EpsilonTooLarge(format!("depth must lie in (0, {})", rat::show(&limit))));
    }
    let eta0 = blowup_conormal(p, face);
    let k0: Rat = face.iter().map(|&i| &p.support()[i]).sum::<Rat>() - &eps;
    let mut conormals = p.conormals().to_vec();
    conormals.push(eta0);
    let mut support = p.support().to_vec();
    support.push(k0);
    let lattice = p.lattice() && rat::is_primitive_integer(conormals.last().expect("pushed"));
    let q = Polytope::new(p.dim(), conormals, support, lattice).map_err(|e| Error::EpsilonTooLarge(e.to_string()))?;
    let mask = mask_of(face);
    let on_face = p.vertices().iter().filter(|v| v.mask & mask == mask).count();
    let expected = p.vertices().len() - on_face + on_face * face.len();
    if q.vertices().len() != expected {
        return Err(Error::EpsilonTooLarge("unexpected face lattice after the cut".into()));
    }
    Ok(q)
}

/// Parameters of a generated corpus. Generation is a pure function of this value.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CorpusSpec {
    pub dim: usize,
    pub max_facets: usize,
    /// Upper bound on blow-ups per chain and on nesting of bundles/expansions.
    pub ops: usize,
    pub seed: u64,
    pub count: usize,
    #[serde(default = "default_true")]
    pub smooth: bool,
}

fn default_true() -> bool {
    true
}

impl CorpusSpec {
    pub fn new(dim: usize, count: usize, seed: u64) -> Self {
        CorpusSpec { dim, max_facets: 2 * dim + 3, ops: 3, seed, count, smooth: true }
    }
}

/// Relabel facets.
pub fn permute_facets(p: &Polytope, perm: &[usize]) -> Result<Polytope> {
    let conormals = perm.iter().map(|&i| p.conormal(i).to_vec()).collect();
    let support = perm.iter().map(|&i| p.support()[i].clone()).collect();
    Polytope::new(p.dim(), conormals, support, p.lattice())
}

/// Moves the origin: `kappa_i -> kappa_i + <eta_i, xi>`.
pub fn translate(p: &Polytope, xi: &[Rat]) -> Result<Polytope> {
    let support = p.conormals().iter().zip(p.support()).map(|(c, k)| k + rat::dot(c, xi)).collect();
    Polytope::new(p.dim(), p.conormals().to_vec(), support, p.lattice())
}

/// Applies the linear map `eta -> l eta` on conormals (and the dual map on points).
pub fn transform_conormals(p: &Polytope, l: &Matrix, lattice: bool) -> Result<Polytope> {
    let conormals = p.conormals().iter().map(|c| crate::linalg::mat_vec(l, c)).collect();
    Polytope::new(p.dim(), conormals, p.support().to_vec(), lattice)
}

fn random_simplex<R: Rng>(rng: &mut R, k: usize) -> Polytope {
    let mut kappa: Vec<Rat> = (0..k).map(|_| rat::int(rng.gen_range(-2..=2))).collect();
    let s: Rat = kappa.iter().sum();
    kappa.push(rat::int(rng.gen_range(1..=4)) - s);
    simplex_with(k, kappa).expect("positive total keeps the simplex nondegenerate")
}

fn random_composition<R: Rng>(rng: &mut R, d: usize) -> Vec<usize> {
    let mut parts = Vec::new();
    let mut left = d;
    while left > 0 {
        let k = rng.gen_range(1..=left);
        parts.push(k);
        left -= k;
    }
    parts
}

fn random_product<R: Rng>(rng: &mut R, d: usize) -> Polytope {
    let parts = random_composition(rng, d);
    let mut p = random_simplex(rng, parts[0]);
    for &k in &parts[1..] {
        p = product(&p, &random_simplex(rng, k)).expect("products of valid polytopes are valid");
    }
    p
}

fn random_bundle<R: Rng>(rng: &mut R, d: usize, depth: usize) -> Option<Polytope> {
    if d < 2 {
        return None;
    }
    let k = rng.gen_range(1..d);
    let fiber = random_structured(rng, d - k, depth.saturating_sub(1));
    let m = fiber.dim();
    let twists: Vec<Vec<Rat>> = (0..=k)
        .map(|i| {
            (0..m)
                .map(|_| if i == 0 { Rat::zero() } else { rat::int(rng.gen_range(-2..=2)) })
                .collect()
        })
        .collect();
    let size = fiber.vertices().len() as i64 + 1;
    let mut scale = 1;
    while scale <= 64 {
        let mut base = vec![Rat::zero(); k + 1];
        base[k] = rat::int(size * scale + rng.gen_range(0..3));
        if let Ok(p) = bundle_over_simplex(&fiber, k, &twists, &base) {
            return Some(p);
        }
        scale *= 2;
    }
    None
}

fn random_expansion<R: Rng>(rng: &mut R, d: usize, depth: usize) -> Option<Polytope> {
    if d < 2 {
        return None;
    }
    let k = rng.gen_range(1..d);
    let base = random_structured(rng, d - k, depth.saturating_sub(1));
    let f = rng.gen_range(0..base.nfacets());
    expansion(&base, f, k).ok()
}

fn random_structured<R: Rng>(rng: &mut R, d: usize, depth: usize) -> Polytope {
    if d == 1 || depth == 0 {
        return random_product(rng, d);
    }
    let pick = rng.gen_range(0..3);
    let candidate = match pick {
        0 => random_bundle(rng, d, depth),
        1 => random_expansion(rng, d, depth),
        _ => None,
    };
    candidate.unwrap_or_else(|| random_product(rng, d))
}

fn random_blowups<R: Rng>(rng: &mut R, mut p: Polytope, ops: usize, max_facets: usize) -> Polytope {
    let n = p.dim();
    if n < 2 {
        return p;
    }
    let steps = rng.gen_range(1..=ops.max(1));
    for _ in 0..steps {
        if p.nfacets() >= max_facets {
            break;
        }
        let sizes: Vec<usize> = if n >= 3 { vec![n, n - 1] } else { vec![n] };
        let size = *sizes.choose(rng).expect("nonempty");
        let faces: Vec<Vec<usize>> = if size == n {
            p.vertices().iter().map(|v| v.facets.clone()).collect()
        } else {
            p.edges().iter().map(|e| e.facets.clone()).collect()
        };
        let face = faces.choose(rng).expect("polytopes have vertices").clone();
        if let Ok(q) = blowup(&p, &face, None) {
            p = q;
        }
    }
    p
}

fn random_y<R: Rng>(rng: &mut R) -> Polytope {
    let a = [rng.gen_range(-2..=2i64), rng.gen_range(-2..=2i64)];
    let lambda = rng.gen_range(1..=3i64);
    let top = 0.max(a[0]).max(a[1]);
    let h = top * lambda + rng.gen_range(1..=3);
    y_family_int(a[0], a[1], &[0, 0, lambda, 0, h]).expect("chosen inside the chamber")
}

fn finish<R: Rng>(rng: &mut R, p: Polytope, spec: &CorpusSpec) -> Polytope {
    let n = p.dim();
    let xi: Vec<Rat> = (0..n).map(|_| rat::int(rng.gen_range(-1..=1))).collect();
    let mut q = translate(&p, &xi).expect("translation keeps validity");
    let mut perm: Vec<usize> = (0..q.nfacets()).collect();
    perm.shuffle(rng);
    q = permute_facets(&q, &perm).expect("relabeling keeps validity");
    if !spec.smooth && n >= 2 {
        // a non-unimodular change of lattice keeps the combinatorics
        let mut l: Matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        l[0][0] = rat::int(rng.gen_range(2..=3));
        l[0][1] = rat::int(rng.gen_range(-1..=1));
        q = transform_conormals(&q, &l, false).expect("invertible change of coordinates");
    }
    q
}

/// Deterministic corpus: 40% blow-up chains, 30% bundles, 20% expansions,
/// 10% products. In dimension 3 every eighth entry (offset 3) is a member of
/// the Y family. Facets are relabeled at random and the origin moved.
pub fn random_corpus(spec: &CorpusSpec) -> Vec<Polytope> {
    (0..spec.count).map(|idx| corpus_item(spec, idx)).collect()
}

pub fn corpus_item(spec: &CorpusSpec, idx: usize) -> Polytope {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(idx as u64));
    let d = spec.dim.max(1);
    if d == 3 && idx % 8 == 3 {
        let y = random_y(&mut rng);
        if !spec.smooth {
            return finish(&mut rng, y, spec);
        }
        return y;
    }
    let roll = rng.gen_range(0..100);
    let depth = spec.ops.clamp(1, 2);
    let base = if roll < 40 {
        let start = if rng.gen_bool(0.5) {
            random_product(&mut rng, d)
        } else {
            random_structured(&mut rng, d, depth)
        };
        random_blowups(&mut rng, start, spec.ops, spec.max_facets)
    } else if roll < 70 {
        random_bundle(&mut rng, d, depth).unwrap_or_else(|| random_product(&mut rng, d))
    } else if roll < 90 {
        random_expansion(&mut rng, d, depth).unwrap_or_else(|| random_product(&mut rng, d))
    } else {
        random_product(&mut rng, d)
    };
    let base = if base.nfacets() > spec.max_facets.max(d + 1) { random_product(&mut rng, d) } else { base };
    finish(&mut rng, base, spec)
}

/// Facets of `F_I` listed as index sets, for picking blow-up centers.
pub fn face_index_sets(p: &Polytope, size: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for v in p.vertices() {
        for sub in crate::combin::combinations(v.facets.len(), size) {
            let set: Vec<usize> = sub.iter().map(|&k| v.facets[k]).collect();
            if !out.contains(&set) {
                out.push(set);
            }
        }
    }
    out.sort();
    out.retain(|s| indices_of(mask_of(s)).len() == size);
    out
}
