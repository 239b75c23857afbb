//! Property suites run over generated corpora. Each property has a
//! descriptive name and a short alias; a check either passes, does not apply
//! to the given polytope, or reports a counterexample.

use crate::analysis::Analysis;
use crate::build::{self, CorpusSpec};
use crate::combin;
use crate::equiv;
use crate::error::{Error, Result};
use crate::kpoly;
use crate::linalg::{self, Matrix};
use crate::masslin::{partition_of, satisfies_identity};
use crate::polytope::Polytope;
use crate::rat::{self, dot, int, Rat};
use crate::structure::{self, LowDimCase, PolygonShape, ProductKind};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

/// `Ok(true)` passed, `Ok(false)` not applicable, `Err` counterexample.
pub type Check = fn(&Analysis) -> std::result::Result<bool, String>;

#[derive(Clone, Copy)]
pub enum Suite {
    Corpus(Check),
    YGrid,
}

#[derive(Clone, Copy)]
pub struct Property {
    pub name: &'static str,
    pub alias: Option<&'static str>,
    pub summary: &'static str,
    pub default_corpus: &'static str,
    pub suite: Suite,
}

macro_rules! prop {
    ($name:expr, $alias:expr, $corpus:expr, $summary:expr, $check:expr) => {
        Property { name: $name, alias: $alias, summary: $summary, default_corpus: $corpus, suite: Suite::Corpus($check) }
    };
}

pub const PROPERTIES: &[Property] = &[
    prop!("derivative-identity", Some("prop2.3"), "dim3_smooth", "mixed partials of the volume are face volumes, zero on empty intersections", check_derivatives),
    prop!("symmetric-face-restriction", Some("prop2.10"), "dim3_smooth", "mass linear functions restrict to symmetric faces with matching coefficients", check_symmetric_faces),
    prop!("asymmetric-pervasive-or-flat", Some("prop2.11"), "dim3_smooth", "every asymmetric facet is pervasive or flat", check_pervasive_or_flat),
    prop!("rigid-without-pervasive-or-flat", Some("thm1.8"), "dim3_smooth", "no pervasive and no flat facets leaves no mass linear functions", check_rigid),
    prop!("inessential-without-pervasive", Some("prop1.9"), "dim3_smooth", "without pervasive facets every mass linear function is inessential", check_no_pervasive),
    prop!("inessential-coefficients", Some("prop1.18"), "dim3_smooth", "inessential functions have coefficients beta", check_inessential_coefficients),
    prop!("inessential-dimension", Some("lem3.6"), "dim3_smooth", "the inessential space has dimension N minus the number of classes", check_inessential_dimension),
    prop!("class-structure", Some("prop3.17"), "dim3_smooth", "each class is a bundle over a simplex or an expansion", check_class_structure),
    prop!("pervasive-reduction", Some("prop3.24"), "dim3_smooth", "removing inessential parts leaves only pervasive asymmetric facets", check_reduction),
    prop!("all-mass-linear-criteria", Some("thm1.10"), "dim4_default", "four characterizations of all functions being mass linear agree", check_allmass),
    prop!("polygon-classification", Some("prop4.2"), "dim2_default", "polygons with mass linear functions are triangles, interval bundles or squares", check_polygon),
    prop!("polygon-disjoint-edges", Some("cor4.3"), "dim2_default", "disjoint edges have opposite coefficients", check_disjoint_edges),
    prop!("two-asymmetric-equivalent", Some("prop4.4"), "dim3_smooth", "two asymmetric facets are equivalent", check_two_asymmetric),
    prop!("essential-implies-y", Some("thm1.4"), "dim3_smooth", "essential functions on smooth 3-polytopes only occur on Y_a with a1 a2 (a1 - a2) nonzero", check_essential_y),
    Property {
        name: "y-family-constraints",
        alias: Some("prop4.7"),
        summary: "mass linear functions on Y_a are cut out by three linear relations",
        default_corpus: "grid",
        suite: Suite::YGrid,
    },
    prop!("solid-classification", Some("prop4.13"), "dim3_smooth", "nonzero mass linear functions on smooth 3-polytopes fall in the listed cases", check_solid),
    prop!("solid-coefficient-sum", Some("lem4.15"), "dim3_smooth", "coefficients sum to zero on smooth 3-polytopes", check_coefficient_sum),
    prop!("asymmetric-powerful", Some("propA.2"), "dim3_smooth", "every asymmetric facet is powerful", check_powerful),
    prop!("no-symmetric-facet-product", Some("corA.7"), "dim4_smooth", "a function with no symmetric facet forces a product of simplices", check_no_symmetric),
    prop!("symmetric-facet-reduction", Some("thm1.11"), "dim4_smooth", "an inessential correction always produces a symmetric facet", check_symmetric_reduction),
    prop!("disjoint-powerful-product", None, "dim3_smooth", "two disjoint powerful facets make the polytope an interval times a facet", check_disjoint_powerful),
    prop!("product-bundle-direction", None, "dim3_smooth", "a smooth combinatorial product of two simplices is a bundle in some direction", check_bundle_direction),
];

pub fn find(name: &str) -> Result<&'static Property> {
    PROPERTIES
        .iter()
        .find(|p| p.name == name || p.alias == Some(name))
        .ok_or_else(|| Error::UnknownTheorem(name.to_string()))
}

/// `dimD_default` (mixed rational) or `dimD_smooth`.
pub fn preset(name: &str, count: Option<usize>, seed: u64) -> Result<CorpusSpec> {
    let bad = || Error::Parse(format!("unknown corpus preset {name:?}"));
    let rest = name.strip_prefix("dim").ok_or_else(bad)?;
    let (d, kind) = rest.split_once('_').ok_or_else(bad)?;
    let dim: usize = d.parse().map_err(|_| bad())?;
    if dim == 0 || dim > 6 {
        return Err(bad());
    }
    let smooth = match kind {
        "default" => false,
        "smooth" => true,
        _ => return Err(bad()),
    };
    let mut spec = CorpusSpec::new(dim, count.unwrap_or(if dim >= 4 { 100 } else { 200 }), seed);
    spec.smooth = smooth;
    Ok(spec)
}

#[derive(Clone, Debug)]
pub struct Failure {
    pub index: usize,
    pub message: String,
    pub polytope: Value,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub name: &'static str,
    pub alias: Option<&'static str>,
    pub checked: usize,
    pub applicable: usize,
    pub failures: Vec<Failure>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "property": self.name,
            "alias": self.alias,
            "checked": self.checked,
            "applicable": self.applicable,
            "passed": self.passed(),
            "failures": self.failures.iter().map(|f| json!({"index": f.index, "message": f.message, "polytope": f.polytope})).collect::<Vec<_>>(),
        })
    }
}

fn doc_json(p: &Polytope) -> Value {
    serde_json::to_value(p.to_doc()).unwrap_or(Value::Null)
}

/// Runs corpus properties over `corpus`, analyzing each polytope once.
/// Results are collected in corpus order, so output is deterministic.
pub fn run_corpus(props: &[&'static Property], corpus: &[Polytope]) -> Vec<Outcome> {
    let per_item: Vec<Vec<std::result::Result<bool, String>>> = corpus
        .par_iter()
        .map(|p| match Analysis::new(p.clone()) {
            Ok(a) => props
                .iter()
                .map(|prop| match prop.suite {
                    Suite::Corpus(check) => check(&a),
                    Suite::YGrid => Ok(false),
                })
                .collect(),
            Err(e) => vec![Err(format!("analysis failed: {e}")); props.len()],
        })
        .collect();
    props
        .iter()
        .enumerate()
        .map(|(k, prop)| {
            let mut out = Outcome { name: prop.name, alias: prop.alias, checked: corpus.len(), applicable: 0, failures: Vec::new() };
            for (idx, results) in per_item.iter().enumerate() {
                match &results[k] {
                    Ok(true) => out.applicable += 1,
                    Ok(false) => {}
                    Err(message) => {
                        out.applicable += 1;
                        out.failures.push(Failure { index: idx, message: message.clone(), polytope: doc_json(&corpus[idx]) });
                    }
                }
            }
            out
        })
        .collect()
}

pub fn run(prop: &'static Property, corpus: &[Polytope], grid: i64) -> Outcome {
    match prop.suite {
        Suite::Corpus(_) => run_corpus(&[prop], corpus).remove(0),
        Suite::YGrid => run_y_grid(prop, grid),
    }
}

fn smooth(a: &Analysis) -> bool {
    a.polytope.lattice() && a.polytope.is_smooth()
}

fn show_set(v: &[usize]) -> String {
    format!("{:?}", v.iter().map(|i| i + 1).collect::<Vec<_>>())
}

fn nonzero_functions(a: &Analysis) -> Vec<(Vec<Rat>, Vec<Rat>)> {
    a.sample_functions()
        .into_iter()
        .filter(|h| h.iter().any(|x| !x.is_zero()))
        .map(|h| {
            let g = a.space.gamma_of(&h).expect("sample functions are mass linear");
            (h, g)
        })
        .collect()
}

fn check_derivatives(a: &Analysis) -> std::result::Result<bool, String> {
    let p = &a.polytope;
    let exact = smooth(a);
    for k in 1..=p.dim() {
        for idx in combin::combinations(p.nfacets(), k) {
            let d = kpoly::derivative_identity(p, &a.calculus.volume, &idx).map_err(|e| e.to_string())?;
            if let Some(kf) = d.k_f {
                if exact && !kf.is_one() {
                    return Err(format!("face {} has constant {} on a smooth polytope", show_set(&idx), rat::show(&kf)));
                }
            }
        }
    }
    Ok(true)
}

fn check_symmetric_faces(a: &Analysis) -> std::result::Result<bool, String> {
    let p = &a.polytope;
    if p.dim() < 2 {
        return Ok(false);
    }
    let mut any = false;
    for (h, g) in nonzero_functions(a) {
        let sym = partition_of(&g).symmetric;
        let mut faces: Vec<Vec<usize>> = sym.iter().map(|&i| vec![i]).collect();
        if p.dim() >= 3 {
            for x in 0..sym.len() {
                for y in x + 1..sym.len() {
                    if !p.face_empty(&[sym[x], sym[y]]) {
                        faces.push(vec![sym[x], sym[y]]);
                    }
                }
            }
        }
        for f in faces {
            any = true;
            crate::masslin::restrict_to_symmetric_face(p, &a.space, &h, &f).map_err(|e| format!("face {}: {e}", show_set(&f)))?;
        }
    }
    Ok(any)
}

fn check_pervasive_or_flat(a: &Analysis) -> std::result::Result<bool, String> {
    let fns = nonzero_functions(a);
    for (_, g) in &fns {
        for i in partition_of(g).asymmetric {
            if !a.flags.pervasive[i] && !a.flags.flat[i] {
                return Err(format!("asymmetric facet {} is neither pervasive nor flat", i + 1));
            }
        }
    }
    Ok(!fns.is_empty())
}

fn check_rigid(a: &Analysis) -> std::result::Result<bool, String> {
    let nf = a.polytope.nfacets();
    if (0..nf).any(|i| a.flags.pervasive[i] || a.flags.flat[i]) {
        return Ok(false);
    }
    if a.space.dim() != 0 {
        return Err(format!("{} mass linear functions without pervasive or flat facets", a.space.dim()));
    }
    Ok(true)
}

fn check_no_pervasive(a: &Analysis) -> std::result::Result<bool, String> {
    if a.flags.pervasive.iter().any(|&b| b) {
        return Ok(false);
    }
    for b in &a.space.basis {
        if !a.inessential.contains(&b.h) {
            return Err(format!("essential function {} without pervasive facets", rat::show_vec(&b.h)));
        }
    }
    Ok(true)
}

fn check_inessential_coefficients(a: &Analysis) -> std::result::Result<bool, String> {
    let p = &a.polytope;
    let mut rng = ChaCha8Rng::seed_from_u64(p.nfacets() as u64);
    let points: Vec<Vec<Rat>> = (0..3).map(|_| p.random_chamber_point(&mut rng)).collect();
    for (beta, h) in a.inessential.betas.iter().zip(&a.inessential.hs) {
        if !satisfies_identity(&a.calculus, h, beta) {
            return Err(format!("inessential {} fails the polynomial identity", rat::show_vec(h)));
        }
        for kappa in &points {
            let c = a.calculus.center(p, kappa).map_err(|e| e.to_string())?;
            if dot(h, &c) != dot(beta, kappa) {
                return Err(format!("inessential {} fails at a chamber point", rat::show_vec(h)));
            }
        }
    }
    Ok(a.inessential.dim() > 0)
}

fn check_inessential_dimension(a: &Analysis) -> std::result::Result<bool, String> {
    let expected = a.polytope.nfacets() - a.classes.len();
    if a.inessential.dim() != expected {
        return Err(format!("inessential dimension {} but N - |classes| = {expected}", a.inessential.dim()));
    }
    for (beta, h) in a.inessential.betas.iter().zip(&a.inessential.hs) {
        if a.space.gamma_of(h).as_ref() != Some(beta) {
            return Err(format!("inessential {} is not mass linear with coefficients beta", rat::show_vec(h)));
        }
    }
    Ok(true)
}

fn check_class_structure(a: &Analysis) -> std::result::Result<bool, String> {
    let mut any = false;
    for c in a.classes.classes.iter().filter(|c| c.len() > 1) {
        any = true;
        structure::detect_class_structure(&a.polytope, &a.classes, c).map_err(|e| format!("class {}: {e}", show_set(c)))?;
    }
    Ok(any)
}

fn check_reduction(a: &Analysis) -> std::result::Result<bool, String> {
    let fns = nonzero_functions(a);
    for (h, g) in &fns {
        let r = equiv::inessential_reduction(&a.polytope, &a.space, h).map_err(|e| e.to_string())?;
        let before = partition_of(g).asymmetric.len();
        let after = partition_of(&r.gamma_tilde).asymmetric;
        if let Some(&i) = after.iter().find(|&&i| !a.flags.pervasive[i]) {
            return Err(format!("reduced function has non-pervasive asymmetric facet {}", i + 1));
        }
        if after.len() > before {
            return Err("reduction increased the number of asymmetric facets".into());
        }
        if !a.inessential.contains(&r.h_prime) {
            return Err("removed part is not inessential".into());
        }
    }
    Ok(!fns.is_empty())
}

fn check_allmass(a: &Analysis) -> std::result::Result<bool, String> {
    let c = structure::theorem_allmass_check(&a.polytope, &a.space, &a.inessential, &a.classes, &a.product);
    if !c.consistent() {
        return Err(format!("criteria disagree: {}", c.to_json()));
    }
    Ok(true)
}

fn check_polygon(a: &Analysis) -> std::result::Result<bool, String> {
    if a.polytope.dim() != 2 {
        return Ok(false);
    }
    let shape = structure::polygon_shape(&a.polytope, &a.classes);
    if (a.space.dim() > 0) != (shape != PolygonShape::Other) {
        return Err(format!("shape {} with {} mass linear functions", shape.name(), a.space.dim()));
    }
    for (h, _) in nonzero_functions(a) {
        structure::classify_low_dim(&a.polytope, &a.space, &a.classes, &a.inessential, &h).map_err(|e| e.to_string())?;
    }
    Ok(true)
}

fn check_disjoint_edges(a: &Analysis) -> std::result::Result<bool, String> {
    let p = &a.polytope;
    if p.dim() != 2 {
        return Ok(false);
    }
    for b in &a.space.basis {
        for i in 0..p.nfacets() {
            for j in i + 1..p.nfacets() {
                if !p.face_empty(&[i, j]) {
                    continue;
                }
                // read in the class-normalized conormals c_i eta_i
                let w = &a.classes.weights;
                let sum = if a.classes.equivalent(i, j) { &b.gamma[i] / &w[i] + &b.gamma[j] / &w[j] } else { &b.gamma[i] + &b.gamma[j] };
                if !sum.is_zero() {
                    return Err(format!("disjoint edges {} and {} have coefficients {} and {}", i + 1, j + 1, rat::show(&b.gamma[i]), rat::show(&b.gamma[j])));
                }
            }
        }
    }
    Ok(true)
}

fn check_two_asymmetric(a: &Analysis) -> std::result::Result<bool, String> {
    let mut any = false;
    for (_, g) in nonzero_functions(a) {
        let asym = partition_of(&g).asymmetric;
        if asym.len() == 2 {
            any = true;
            if !a.classes.equivalent(asym[0], asym[1]) {
                return Err(format!("asymmetric facets {} are not equivalent", show_set(&asym)));
            }
        }
    }
    Ok(any)
}

fn check_essential_y(a: &Analysis) -> std::result::Result<bool, String> {
    if a.polytope.dim() != 3 || !smooth(a) || a.essential_dim() == 0 {
        return Ok(false);
    }
    let y = structure::y_normalization(&a.polytope, &a.classes).ok_or("essential function but not a triangle bundle over an interval")?;
    if y.invariant.is_zero() {
        return Err(format!("essential function on Y with a = {}", rat::show_vec(&y.a)));
    }
    Ok(true)
}

fn check_solid(a: &Analysis) -> std::result::Result<bool, String> {
    if a.polytope.dim() != 3 || !smooth(a) {
        return Ok(false);
    }
    let fns = nonzero_functions(a);
    for (h, _) in &fns {
        structure::classify_low_dim(&a.polytope, &a.space, &a.classes, &a.inessential, h).map_err(|e| e.to_string())?;
    }
    Ok(!fns.is_empty())
}

fn check_coefficient_sum(a: &Analysis) -> std::result::Result<bool, String> {
    if a.polytope.dim() != 3 || !smooth(a) {
        return Ok(false);
    }
    for b in &a.space.basis {
        let s: Rat = b.gamma.iter().sum();
        if !s.is_zero() {
            return Err(format!("coefficients {} sum to {}", rat::show_vec(&b.gamma), rat::show(&s)));
        }
    }
    Ok(a.space.dim() > 0)
}

fn check_powerful(a: &Analysis) -> std::result::Result<bool, String> {
    let fns = nonzero_functions(a);
    for (_, g) in &fns {
        if let Some(i) = partition_of(g).asymmetric.into_iter().find(|&i| !a.flags.powerful[i]) {
            return Err(format!("asymmetric facet {} is not powerful", i + 1));
        }
    }
    Ok(!fns.is_empty())
}

fn check_no_symmetric(a: &Analysis) -> std::result::Result<bool, String> {
    let mut any = false;
    for (_, g) in nonzero_functions(a) {
        if g.iter().all(|x| !x.is_zero()) {
            any = true;
            if a.product.kind == ProductKind::None {
                return Err("no symmetric facet but not a combinatorial product of simplices".into());
            }
        }
    }
    Ok(any)
}

fn check_symmetric_reduction(a: &Analysis) -> std::result::Result<bool, String> {
    let fns = nonzero_functions(a);
    for (h, _) in &fns {
        let r = equiv::symmetric_facet_reduction(&a.polytope, &a.space, &a.classes, h).map_err(|e| e.to_string())?;
        if !a.inessential.contains(&r.h_prime) {
            return Err("removed part is not inessential".into());
        }
    }
    Ok(!fns.is_empty())
}

fn check_disjoint_powerful(a: &Analysis) -> std::result::Result<bool, String> {
    let p = &a.polytope;
    let mut any = false;
    for i in 0..p.nfacets() {
        for j in i + 1..p.nfacets() {
            if a.flags.powerful[i] && a.flags.powerful[j] && p.face_empty(&[i, j]) {
                any = true;
                if !structure::is_interval_product(p, i, j) {
                    return Err(format!("disjoint powerful facets {} and {} do not span an interval product", i + 1, j + 1));
                }
            }
        }
    }
    Ok(any)
}

fn check_bundle_direction(a: &Analysis) -> std::result::Result<bool, String> {
    if !smooth(a) || a.product.partition.len() != 2 {
        return Ok(false);
    }
    if structure::bundle_directions(&a.product, &a.classes).is_empty() {
        return Err(format!("product pattern {:?} is not a bundle in either direction", a.product.factor_dims()));
    }
    Ok(true)
}

/// The mass linear coefficient space of `Y_a` against the relations
/// `g1+g2+g3 = 0`, `g4+g5 = 0`, `a1 g1 + a2 g2 = 0`.
pub fn y_relation_check(a1: i64, a2: i64) -> std::result::Result<(), String> {
    let h = 5 + 2 * a1.max(a2).max(0);
    let p = build::y_family_int(a1, a2, &[0, 0, 1, 0, h]).map_err(|e| e.to_string())?;
    let an = Analysis::new(p).map_err(|e| e.to_string())?;
    let relations: Matrix = vec![
        vec![int(1), int(1), int(1), int(0), int(0)],
        vec![int(0), int(0), int(0), int(1), int(1)],
        vec![int(a1), int(a2), int(0), int(0), int(0)],
    ];
    let solutions = linalg::nullspace(&relations, 5);
    let gammas: Matrix = an.space.basis.iter().map(|b| b.gamma.clone()).collect();
    let same = gammas.len() == solutions.len() && solutions.iter().all(|s| linalg::in_span(&gammas, s));
    if !same {
        return Err(format!("a = ({a1},{a2}): coefficient space differs from the relation system"));
    }
    let expected_dim = if a1 == 0 && a2 == 0 { 3 } else { 2 };
    if an.space.dim() != expected_dim {
        return Err(format!("a = ({a1},{a2}): dimension {}", an.space.dim()));
    }
    let invariant = a1 * a2 * (a1 - a2);
    if (an.essential_dim() > 0) != (invariant != 0) {
        return Err(format!("a = ({a1},{a2}): essential dimension {} with invariant {invariant}", an.essential_dim()));
    }
    for (hh, _) in nonzero_functions(&an) {
        let v = structure::classify_low_dim(&an.polytope, &an.space, &an.classes, &an.inessential, &hh).map_err(|e| e.to_string())?;
        if let Some(y) = &v.y {
            if y.canonical != structure::canonical_a(&[int(a1), int(a2)]) {
                return Err(format!("a = ({a1},{a2}): normalized to {}", rat::show_vec(&y.a)));
            }
        }
        if v.case != LowDimCase::TriangleBundleOverInterval && !v.also_matches.contains(&LowDimCase::TriangleBundleOverInterval) && !v.inessential {
            return Err(format!("a = ({a1},{a2}): essential function outside the triangle bundle case"));
        }
    }
    Ok(())
}

fn run_y_grid(prop: &'static Property, grid: i64) -> Outcome {
    let pairs: Vec<(i64, i64)> = (-grid..=grid).flat_map(|x| (-grid..=grid).map(move |y| (x, y))).collect();
    let results: Vec<std::result::Result<(), String>> = pairs.par_iter().map(|&(x, y)| y_relation_check(x, y)).collect();
    let mut out = Outcome { name: prop.name, alias: prop.alias, checked: pairs.len(), applicable: pairs.len(), failures: Vec::new() };
    for (k, r) in results.into_iter().enumerate() {
        if let Err(message) = r {
            let (a1, a2) = pairs[k];
            let doc = build::y_family_int(a1, a2, &[0, 0, 1, 0, 5 + 2 * a1.max(a2).max(0)]).map(|p| doc_json(&p)).unwrap_or(Value::Null);
            out.failures.push(Failure { index: k, message, polytope: doc });
        }
    }
    out
}

/// A corpus built from a preset name.
pub fn corpus_from_preset(name: &str, count: Option<usize>, seed: u64) -> Result<Vec<Polytope>> {
    Ok(build::random_corpus(&preset(name, count, seed)?))
}
