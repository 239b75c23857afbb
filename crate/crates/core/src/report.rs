//! JSON and text reports shared by the command line tool and the C interface.

use crate::analysis::Analysis;
use crate::equiv;
use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::rat::{self, Rat};
use crate::structure::{self, LowDimVerdict, PolygonShape, ProductKind};
use crate::toric;
use num_traits::Zero;
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::fmt::Write;

/// JSON Schema (draft 2020-12) for every report; pick one with `#/$defs/<name>`.
pub const SCHEMA: &str = include_str!("../schemas/reports.schema.json");

/// Report names defined in [`SCHEMA`].
pub const SCHEMA_REPORTS: &[&str] = &["analysis", "mass_linear", "classify", "toric", "verify", "polytope", "corpus"];

/// Number of faces of each dimension `0..dim`.
pub fn f_vector(p: &Polytope) -> Vec<usize> {
    let n = p.dim();
    let mut seen: Vec<BTreeSet<u128>> = vec![BTreeSet::new(); n + 1];
    for v in p.vertices() {
        for sub in 0u32..(1 << n) {
            let mut mask = 0u128;
            let mut k = 0;
            for (b, &f) in v.facets.iter().enumerate() {
                if sub & (1 << b) != 0 {
                    mask |= 1 << f;
                    k += 1;
                }
            }
            seen[k].insert(mask);
        }
    }
    (0..n).map(|d| seen[n - d].len()).collect()
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn smooth(p: &Polytope) -> bool {
    p.lattice() && p.is_smooth()
}

/// Structure verdict for the polytope itself, with every witness found.
pub fn structure_report(a: &Analysis) -> Value {
    let p = &a.polytope;
    let class_structures: Vec<Value> = a
        .classes
        .classes
        .iter()
        .filter(|c| c.len() > 1)
        .map(|c| match structure::detect_class_structure(p, &a.classes, c) {
            Ok(s) => s.to_json(),
            Err(e) => json!({"verdict": "none", "class": one_based(c), "error": e.to_string()}),
        })
        .collect();
    let y = if smooth(p) { structure::y_normalization(p, &a.classes) } else { None };
    let polygon = (p.dim() == 2).then(|| structure::polygon_shape(p, &a.classes));
    let verdict = if polygon == Some(PolygonShape::Triangle) {
        "triangle"
    } else if a.product.kind == ProductKind::Exact {
        "product"
    } else if y.as_ref().is_some_and(|y| !y.invariant.is_zero()) {
        "Y_family"
    } else if let Some(first) = class_structures.iter().find(|s| s["verdict"] != "none") {
        if first["verdict"] == "expansion" {
            "expansion"
        } else {
            "bundle_over_simplex"
        }
    } else {
        "none"
    };
    json!({
        "verdict": verdict,
        "product": a.product.to_json(),
        "class_structures": class_structures,
        "polygon_shape": polygon.map(|s| s.name()),
        "y_normalization": y.map(|y| y.to_json()),
        "all_mass_linear": structure::theorem_allmass_check(p, &a.space, &a.inessential, &a.classes, &a.product).to_json(),
    })
}

pub fn toric_text(a: &Analysis) -> Result<String> {
    let shape = toric::isometry_shape(&a.polytope, &a.classes)?;
    let symp = toric::symp_report(&a.polytope, &a.space, &a.inessential, &a.product)?;
    let ints = |v: &[num_bigint::BigInt]| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "));
    let mut s = String::new();
    let _ = writeln!(s, "kernel basis: {}", shape.kernel_basis.iter().map(|b| ints(b)).collect::<Vec<_>>().join(" "));
    let _ = writeln!(s, "isometry factors: {}", shape.factors().join(" x "));
    match &shape.pi1_torsion {
        Some(t) => {
            let _ = writeln!(s, "fundamental group rank: 0, order {t}");
        }
        None => {
            let _ = writeln!(s, "fundamental group rank: {}", shape.pi1_rank);
        }
    }
    for (h, g) in &symp.integral_basis {
        let _ = writeln!(s, "integral mass linear: H = {}  gamma = {}", ints(h), ints(g));
    }
    let _ = writeln!(s, "torus injects: {}", symp.torus_injects);
    let _ = writeln!(s, "product of simplices: {}", symp.compressible);
    let _ = writeln!(s, "essential lattice function: {}", symp.essential_exists);
    Ok(s)
}

pub fn toric_report(a: &Analysis) -> Result<Value> {
    let shape = toric::isometry_shape(&a.polytope, &a.classes)?;
    let symp = toric::symp_report(&a.polytope, &a.space, &a.inessential, &a.product)?;
    Ok(toric::report_json(&shape, &symp))
}

/// The full report. Fails with a counterexample if the computed pieces
/// contradict each other.
pub fn analysis_report(a: &Analysis) -> Result<Value> {
    let p = &a.polytope;
    let expected = p.nfacets() - a.classes.len();
    if a.inessential.dim() != expected {
        return Err(Error::Counterexample(format!("inessential dimension {} differs from N - |classes| = {expected}", a.inessential.dim())));
    }
    if a.inessential.hs.iter().any(|h| a.space.gamma_of(h).is_none()) {
        return Err(Error::Counterexample("an inessential function is not mass linear".into()));
    }
    let fv = f_vector(p);
    Ok(json!({
        "polytope": serde_json::to_value(p.to_doc()).map_err(|e| Error::Parse(e.to_string()))?,
        "smooth": smooth(p),
        "simple": true,
        "face_counts": {"vertices": fv[0], "edges": fv.get(1).copied().unwrap_or(0), "facets": p.nfacets(), "f_vector": fv},
        "facet_flags": a.flags.to_json(),
        "classes": a.classes.to_json(),
        "mass_linear": a.space.to_json(),
        "inessential": a.inessential.to_json(),
        "dim_mass_linear": a.space.dim(),
        "essential_dim": a.essential_dim(),
        "structure": structure_report(a),
        "toric": if smooth(p) { toric_report(a)? } else { Value::Null },
    }))
}

pub fn analysis_text(a: &Analysis) -> Result<String> {
    let r = analysis_report(a)?;
    let p = &a.polytope;
    let mut s = String::new();
    let fv = f_vector(p);
    let _ = writeln!(s, "dimension {}, {} facets, f-vector {:?}, {}", p.dim(), p.nfacets(), fv, if smooth(p) { "smooth" } else if p.lattice() { "lattice, not smooth" } else { "rational" });
    let flag_list = |v: &[bool]| one_based(&(0..v.len()).filter(|&i| v[i]).collect::<Vec<_>>());
    let _ = writeln!(s, "pervasive facets: {:?}", flag_list(&a.flags.pervasive));
    let _ = writeln!(s, "flat facets: {:?}", flag_list(&a.flags.flat));
    let _ = writeln!(s, "powerful facets: {:?}", flag_list(&a.flags.powerful));
    let classes: Vec<Vec<usize>> = a.classes.classes.iter().map(|c| one_based(c)).collect();
    let _ = writeln!(s, "equivalence classes: {:?}{}", classes, if a.classes.normalized() { "" } else { " (conormals not normalized within classes)" });
    let _ = writeln!(s, "mass linear dimension: {}", a.space.dim());
    for b in &a.space.basis {
        let _ = writeln!(s, "  H = {}  gamma = {}", rat::show_vec(&b.h), rat::show_vec(&b.gamma));
    }
    let _ = writeln!(s, "inessential dimension: {}", a.inessential.dim());
    let _ = writeln!(s, "essential dimension: {}", a.essential_dim());
    let _ = writeln!(s, "structure: {}", r["structure"]["verdict"].as_str().unwrap_or("none"));
    let _ = writeln!(s, "product of simplices: {}", r["structure"]["product"]["verdict"].as_str().unwrap_or("none"));
    if let Some(y) = smooth(p).then(|| structure::y_normalization(p, &a.classes)).flatten() {
        let _ = writeln!(s, "triangle bundle over an interval with a = {}, canonical {}", rat::show_vec(&y.a), rat::show_vec(&y.canonical));
    }
    if smooth(p) {
        let shape = toric::isometry_shape(p, &a.classes)?;
        let _ = writeln!(s, "isometry factors: {}", shape.factors().join(" x "));
        let _ = writeln!(s, "fundamental group rank: {}", shape.pi1_rank);
    }
    Ok(s)
}

pub fn mass_linear_report(a: &Analysis, h: Option<&[Rat]>) -> Result<Value> {
    let mut v = a.space.to_json();
    if let Some(h) = h {
        if h.len() != a.polytope.dim() {
            return Err(Error::LengthMismatch { expected: a.polytope.dim(), found: h.len() });
        }
        let gamma = a.space.gamma_of(h);
        v["query"] = json!({
            "H": rat::vec_to_json(h),
            "mass_linear": gamma.is_some(),
            "gamma": gamma.as_ref().map(|g| rat::vec_to_json(g)),
            "essential": match equiv::is_essential(&a.space, &a.inessential, h) {
                Ok(e) => Value::Bool(e),
                Err(_) => Value::Null,
            },
        });
    }
    Ok(v)
}

/// Classifies `h`, or every sample function when `h` is absent.
pub fn classify(a: &Analysis, h: Option<&[Rat]>) -> Result<Vec<LowDimVerdict>> {
    let fns: Vec<Vec<Rat>> = match h {
        Some(h) => vec![h.to_vec()],
        None => a.sample_functions().into_iter().filter(|h| h.iter().any(|x| !x.is_zero())).collect(),
    };
    fns.iter().map(|h| structure::classify_low_dim(&a.polytope, &a.space, &a.classes, &a.inessential, h)).collect()
}

pub fn classify_report(a: &Analysis, verdicts: &[LowDimVerdict]) -> Value {
    json!({
        "structure": structure_report(a),
        "functions": a.sample_functions().len(),
        "verdicts": verdicts.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
    })
}
