//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the test
//! harness so the lines appear in order; exits nonzero if any criterion fails.

use num_traits::Signed;
use polymass::analysis::Analysis;
use polymass::build;
use polymass::equiv::equivalence_classes;
use polymass::kpoly::{center_of_mass, volume_poly, Calculus};
use polymass::linalg;
use polymass::polytope::Polytope;
use polymass::rat::{self, frac, int, Rat};
use polymass::toric;
use polymass::verify::{self, Suite};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

type Outcome = Result<String, String>;

struct Corpora {
    polygons: Vec<Analysis>,
    solids_smooth: Vec<Analysis>,
    solids_rational: Vec<Analysis>,
    four_smooth: Vec<Analysis>,
    four_rational: Vec<Analysis>,
    polygons_smooth: Vec<Analysis>,
}

impl Corpora {
    fn build() -> Corpora {
        let get = |name: &str| -> Vec<Analysis> {
            let polys = verify::corpus_from_preset(name, None, 1).expect("preset exists");
            polys.into_par_iter().map(|p| Analysis::new(p).expect("corpus polytopes analyze")).collect()
        };
        Corpora {
            polygons: get("dim2_default"),
            polygons_smooth: get("dim2_smooth"),
            solids_rational: get("dim3_default"),
            solids_smooth: get("dim3_smooth"),
            four_rational: get("dim4_default"),
            four_smooth: get("dim4_smooth"),
        }
    }

    fn all(&self) -> Vec<&Analysis> {
        [&self.polygons, &self.polygons_smooth, &self.solids_rational, &self.solids_smooth, &self.four_rational, &self.four_smooth]
            .into_iter()
            .flatten()
            .collect()
    }

    fn smooth(&self) -> Vec<&Analysis> {
        [&self.polygons_smooth, &self.solids_smooth, &self.four_smooth].into_iter().flatten().collect()
    }
}

/// Runs a property over analyses; returns the number of applicable items.
fn property(alias: &str, items: &[&Analysis]) -> Result<usize, String> {
    let Suite::Corpus(check) = verify::find(alias).expect("known property").suite else {
        panic!("{alias} is not a corpus property");
    };
    let results: Vec<Result<bool, String>> = items.par_iter().map(|a| check(a)).collect();
    let mut applicable = 0;
    for (k, r) in results.into_iter().enumerate() {
        match r {
            Ok(true) => applicable += 1,
            Ok(false) => {}
            Err(msg) => {
                let doc = serde_json::to_string(&items[k].polytope.to_doc()).unwrap_or_default();
                return Err(format!("{alias} fails on item {k}: {msg}; polytope {doc}"));
            }
        }
    }
    Ok(applicable)
}

fn refs(v: &[Analysis]) -> Vec<&Analysis> {
    v.iter().collect()
}

fn random_rat(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rat {
    let d = rng.gen_range(1..=7);
    frac(rng.gen_range(lo * d..=hi * d), d)
}

fn simplex_center() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for k in 1..=5usize {
        let base = build::simplex(k).map_err(|e| e.to_string())?;
        let calc = Calculus::new(&base).map_err(|e| e.to_string())?;
        let mut done = 0;
        while done < 10 {
            let kappa: Vec<Rat> = (0..=k).map(|_| random_rat(&mut rng, -5, 5)).collect();
            let total: Rat = kappa.iter().sum();
            if !total.is_positive() {
                continue;
            }
            let expected: Vec<Rat> = (0..k).map(|j| -&kappa[j] + &total / int(k as i64 + 1)).collect();
            let symbolic = calc.center(&base, &kappa).map_err(|e| e.to_string())?;
            let direct = center_of_mass(&build::simplex_with(k, kappa.clone()).map_err(|e| e.to_string())?, &kappa).map_err(|e| e.to_string())?;
            if symbolic != expected || direct != expected {
                return Err(format!("k = {k}, kappa = {}: got {}, expected {}", rat::show_vec(&kappa), rat::show_vec(&symbolic), rat::show_vec(&expected)));
            }
            done += 1;
            checked += 1;
        }
    }
    Ok(format!("{checked} exact evaluations for k = 1..5"))
}

/// A chamber point of `Y_a` with prescribed shift coordinates.
fn y_point(rng: &mut ChaCha8Rng, a: [i64; 2]) -> (Vec<Rat>, Rat, Rat) {
    let (k1, k2, k4) = (random_rat(rng, -3, 3), random_rat(rng, -3, 3), random_rat(rng, -3, 3));
    let lambda = random_rat(rng, 1, 4);
    let top = int(a[0].max(a[1]).max(0));
    let h = &top * &lambda + random_rat(rng, 1, 4);
    let k3 = &lambda - &k1 - &k2;
    let k5 = &h - &k4 - int(a[0]) * &k1 - int(a[1]) * &k2;
    (vec![k1, k2, k3, k4, k5], lambda, h)
}

fn y_closed_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut points = 0;
    let mut at_origin = 0;
    for a1 in -2..=2i64 {
        for a2 in -2..=2i64 {
            let a = [int(a1), int(a2)];
            for _ in 0..5 {
                let (kappa, lambda, h) = y_point(&mut rng, [a1, a2]);
                if !build::y_chamber(&a, &kappa) {
                    return Err(format!("sampled point outside the chamber for a = ({a1},{a2})"));
                }
                let p = build::y_family(a.clone(), kappa.clone()).map_err(|e| e.to_string())?;
                let base_kappa = vec![int(0), int(0), lambda.clone(), int(0), h.clone()];
                let base = build::y_family(a.clone(), base_kappa.clone()).map_err(|e| e.to_string())?;
                let v = volume_poly(&p).map_err(|e| e.to_string())?.eval(&kappa);
                let sa = int(a1 + a2);
                let v_expected = (int(3) * &h * &lambda * &lambda - &sa * &lambda * &lambda * &lambda) / int(6);
                if v != v_expected {
                    return Err(format!("a = ({a1},{a2}): volume {} but closed form {}", rat::show(&v), rat::show(&v_expected)));
                }
                let c = center_of_mass(&p, &kappa).map_err(|e| e.to_string())?;
                let c_base = center_of_mass(&base, &base_kappa).map_err(|e| e.to_string())?;
                for j in 0..2 {
                    let aj = int([a1, a2][j]);
                    let formula = &lambda / int(4) * (int(4) * &h - &lambda * (&aj + &sa)) / (int(3) * &h - &lambda * &sa);
                    if c_base[j] != formula || c[j] != &formula - &kappa[j] {
                        return Err(format!("a = ({a1},{a2}): c_{} differs from the closed form", j + 1));
                    }
                }
                if c[2] != &c_base[2] - &kappa[3] {
                    return Err(format!("a = ({a1},{a2}): third coordinate does not shift"));
                }
                points += 1;
            }
            // coefficient space against the three relations
            let an = Analysis::new(build::y_family_int(a1, a2, &[0, 0, 1, 0, 5 + 2 * a1.max(a2).max(0)]).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let relations = vec![
                vec![int(1), int(1), int(1), int(0), int(0)],
                vec![int(0), int(0), int(0), int(1), int(1)],
                vec![int(a1), int(a2), int(0), int(0), int(0)],
            ];
            let solutions = linalg::nullspace(&relations, 5);
            let gammas: Vec<Vec<Rat>> = an.space.basis.iter().map(|b| b.gamma.clone()).collect();
            if gammas.len() != solutions.len() || !solutions.iter().all(|s| linalg::in_span(&gammas, s)) {
                return Err(format!("a = ({a1},{a2}): coefficient space is not cut out by the relations"));
            }
            let independent = linalg::rank(&relations) == 3;
            let expected_dim = if independent { 2 } else { 3 };
            if an.space.dim() != expected_dim {
                return Err(format!("a = ({a1},{a2}): mass linear dimension {}", an.space.dim()));
            }
            if !independent {
                at_origin += 1;
            }
            let invariant = a1 * a2 * (a1 - a2);
            if (an.essential_dim() > 0) != (invariant != 0) {
                return Err(format!("a = ({a1},{a2}): essential dimension {} with a1 a2 (a1 - a2) = {invariant}", an.essential_dim()));
            }
        }
    }
    Ok(format!("{points} chamber points on 25 values of a; dimension 2 wherever the relations are independent ({at_origin} value with a = 0 has dimension 3)"))
}

fn derivative_identities(c: &Corpora) -> Outcome {
    let items = c.smooth();
    let n = property("derivative-identity", &items)?;
    if n < 100 {
        return Err(format!("only {n} smooth polytopes"));
    }
    Ok(format!("all faces of {n} smooth polytopes of dimension 2 to 4"))
}

fn inessential_dimension(c: &Corpora) -> Outcome {
    let items = c.all();
    let n = property("inessential-dimension", &items)?;
    Ok(format!("{n} polytopes"))
}

fn all_mass_linear(c: &Corpora) -> Outcome {
    let items = c.all();
    let n = property("all-mass-linear-criteria", &items)?;
    let all = items.iter().filter(|a| a.space.dim() == a.polytope.dim()).count();
    if n < 200 {
        return Err(format!("only {n} polytopes"));
    }
    Ok(format!("{n} polytopes, {all} with every function mass linear"))
}

fn polygons(c: &Corpora) -> Outcome {
    let items: Vec<&Analysis> = c.polygons.iter().chain(&c.polygons_smooth).collect();
    let n = property("polygon-classification", &items)?;
    property("polygon-disjoint-edges", &items)?;
    let with = items.iter().filter(|a| a.space.dim() > 0).count();
    if let Some(a) = items.iter().find(|a| a.essential_dim() > 0) {
        return Err(format!("essential function on polygon {}", serde_json::to_string(&a.polytope.to_doc()).unwrap_or_default()));
    }
    Ok(format!("{n} polygons, {with} with nonconstant mass linear functions"))
}

fn smooth_solids(c: &Corpora) -> Outcome {
    let items = refs(&c.solids_smooth);
    let essential = property("essential-implies-y", &items)?;
    let classified = property("solid-classification", &items)?;
    property("solid-coefficient-sum", &items)?;
    if items.len() < 200 {
        return Err(format!("only {} smooth 3-polytopes", items.len()));
    }
    let mut overlaps = 0;
    for a in &items {
        for v in polymass::report::classify(a, None).map_err(|e| e.to_string())? {
            overlaps += usize::from(!v.also_matches.is_empty());
        }
    }
    Ok(format!("{} polytopes, {classified} with nonzero mass linear functions, {essential} with essential ones, {overlaps} functions also fitting a second case", items.len()))
}

fn asymmetric_facets(c: &Corpora) -> Outcome {
    let items = c.all();
    let n = property("asymmetric-pervasive-or-flat", &items)?;
    property("asymmetric-powerful", &items)?;
    property("pervasive-reduction", &items)?;
    Ok(format!("{n} polytopes with nonzero mass linear functions"))
}

fn four_dimensional(c: &Corpora) -> Outcome {
    let items = refs(&c.four_smooth);
    let none_symmetric = property("no-symmetric-facet-product", &items)?;
    let reduced = property("symmetric-facet-reduction", &items)?;
    if items.len() < 100 || none_symmetric == 0 {
        return Err(format!("{} polytopes, {none_symmetric} functions without symmetric facets", items.len()));
    }
    Ok(format!("{} polytopes, {none_symmetric} with a function lacking symmetric facets, {reduced} reduced", items.len()))
}

fn toric_ranks() -> Outcome {
    for ((a1, a2), rank) in [((1, 2), 2), ((1, 1), 1), ((0, 0), 0)] {
        let p = build::y_family_int(a1, a2, &[0, 0, 1, 0, 6]).map_err(|e| e.to_string())?;
        let s = toric::isometry_shape(&p, &equivalence_classes(&p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        if s.pi1_rank != rank {
            return Err(format!("Y({a1},{a2}) has rank {}", s.pi1_rank));
        }
    }
    for k in 1..=5usize {
        let p = build::simplex(k).map_err(|e| e.to_string())?;
        let s = toric::isometry_shape(&p, &equivalence_classes(&p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        if s.pi1_rank != 0 || s.pi1_torsion != Some((k as i64 + 1).into()) {
            return Err(format!("simplex of dimension {k}: rank {}, torsion {:?}", s.pi1_rank, s.pi1_torsion));
        }
    }
    Ok("ranks 2, 1, 0 on the Y family; simplices of dimension 1..5 have rank 0 and torsion k+1".into())
}

/// Hit-or-miss volume in the vertex bounding box, in floating point.
fn monte_carlo_volume(p: &Polytope, samples: usize, seed: u64) -> f64 {
    let n = p.dim();
    let pts: Vec<Vec<f64>> = p.vertices().iter().map(|v| v.point.iter().map(rat::to_f64).collect()).collect();
    let lo: Vec<f64> = (0..n).map(|j| pts.iter().map(|q| q[j]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..n).map(|j| pts.iter().map(|q| q[j]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let eta: Vec<Vec<f64>> = p.conormals().iter().map(|c| c.iter().map(rat::to_f64).collect()).collect();
    let kappa: Vec<f64> = p.support().iter().map(rat::to_f64).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; n];
    let mut hits = 0usize;
    for _ in 0..samples {
        for j in 0..n {
            x[j] = rng.gen_range(lo[j]..hi[j]);
        }
        if eta.iter().zip(&kappa).all(|(e, k)| e.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() <= *k) {
            hits += 1;
        }
    }
    let box_volume: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    box_volume * hits as f64 / samples as f64
}

fn monte_carlo(c: &Corpora) -> Outcome {
    let picks: Vec<&Analysis> = c.polygons.iter().take(7).chain(c.solids_rational.iter().take(7)).chain(c.four_smooth.iter().take(6)).collect();
    let errors: Vec<(f64, f64)> = picks
        .par_iter()
        .enumerate()
        .map(|(k, a)| {
            let exact = rat::to_f64(&a.calculus.volume.eval(a.polytope.support()));
            let mc = monte_carlo_volume(&a.polytope, 1_000_000, 100 + k as u64);
            ((mc - exact).abs() / exact, exact)
        })
        .collect();
    let worst = errors.iter().map(|e| e.0).fold(0.0, f64::max);
    if let Some(k) = errors.iter().position(|e| e.0 >= 0.01) {
        return Err(format!("instance {k}: relative error {:.4}", errors[k].0));
    }
    Ok(format!("{} instances, worst relative error {:.4}", picks.len(), worst))
}

fn main() {
    let start = Instant::now();
    let corpora = Corpora::build();
    type Criterion<'a> = (&'static str, &'static str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("C1", "simplex center of mass", Box::new(simplex_center)),
        ("C2", "Y family closed forms and coefficient relations", Box::new(y_closed_forms)),
        ("C3", "volume derivatives are face volumes", Box::new(|| derivative_identities(&corpora))),
        ("C4", "inessential dimension N - |classes|", Box::new(|| inessential_dimension(&corpora))),
        ("C5", "four criteria for all functions mass linear agree", Box::new(|| all_mass_linear(&corpora))),
        ("C6", "polygon classification", Box::new(|| polygons(&corpora))),
        ("C7", "smooth 3-polytope classification", Box::new(|| smooth_solids(&corpora))),
        ("C8", "asymmetric facets are pervasive or flat, powerful, and reducible", Box::new(|| asymmetric_facets(&corpora))),
        ("C9", "4-polytopes without symmetric facets are products; reduction yields symmetric facets", Box::new(|| four_dimensional(&corpora))),
        ("C10", "isometry group fundamental group ranks", Box::new(toric_ranks)),
        ("C11", "volume polynomial against Monte Carlo", Box::new(|| monte_carlo(&corpora))),
    ];
    let mut failed = 0;
    for (id, title, run) in &criteria {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        match result {
            Ok(detail) => println!("PASS {id} {title}: {detail} [{:.1}s]", t.elapsed().as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id} {title}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}

