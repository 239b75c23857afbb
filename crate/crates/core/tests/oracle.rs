//! Exact volume and centroid oracles built from vertex coordinates alone
//! (shoelace in the plane, pyramids over facets in space), checked against
//! the polynomial calculus and used to freeze reference values.

use num_traits::{Signed, Zero};
use polymass::build;
use polymass::kpoly::Calculus;
use polymass::polytope::Polytope;
use polymass::rat::{self, frac, int, Rat};
use polymass::verify;
use std::cmp::Ordering;

/// Sorts planar points counterclockwise around their average.
fn sort_ccw(pts: &mut [[Rat; 2]]) {
    let m = pts.len() as i64;
    let o = [pts.iter().map(|p| &p[0]).sum::<Rat>() / int(m), pts.iter().map(|p| &p[1]).sum::<Rat>() / int(m)];
    let half = |u: &[Rat; 2]| u[1].is_negative() || (u[1].is_zero() && u[0].is_negative());
    pts.sort_by(|a, b| {
        let u = [&a[0] - &o[0], &a[1] - &o[1]];
        let v = [&b[0] - &o[0], &b[1] - &o[1]];
        half(&u).cmp(&half(&v)).then_with(|| {
            let cross = &u[0] * &v[1] - &u[1] * &v[0];
            if cross.is_positive() {
                Ordering::Less
            } else if cross.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        })
    });
}

/// Area and centroid of a convex polygon given by its vertices in any order.
fn shoelace(mut pts: Vec<[Rat; 2]>) -> (Rat, [Rat; 2]) {
    sort_ccw(&mut pts);
    let m = pts.len();
    let mut area2 = Rat::zero();
    let mut cx = Rat::zero();
    let mut cy = Rat::zero();
    for k in 0..m {
        let (a, b) = (&pts[k], &pts[(k + 1) % m]);
        let cross = &a[0] * &b[1] - &b[0] * &a[1];
        cx += (&a[0] + &b[0]) * &cross;
        cy += (&a[1] + &b[1]) * &cross;
        area2 += cross;
    }
    let area = &area2 / int(2);
    let six = &area * int(6);
    (area.clone(), [cx / &six, cy / &six])
}

fn oracle(p: &Polytope) -> (Rat, Vec<Rat>) {
    match p.dim() {
        2 => {
            let (a, c) = shoelace(p.vertices().iter().map(|v| [v.point[0].clone(), v.point[1].clone()]).collect());
            (a, c.to_vec())
        }
        3 => solid_oracle(p),
        d => panic!("no oracle in dimension {d}"),
    }
}

/// Pyramids from the vertex average over every facet.
fn solid_oracle(p: &Polytope) -> (Rat, Vec<Rat>) {
    let verts = p.vertices();
    let o: Vec<Rat> = (0..3).map(|j| verts.iter().map(|v| &v.point[j]).sum::<Rat>() / int(verts.len() as i64)).collect();
    let mut volume = Rat::zero();
    let mut moment = vec![Rat::zero(); 3];
    for i in 0..p.nfacets() {
        let eta = p.conormal(i);
        let k = (0..3).rev().find(|&k| !eta[k].is_zero()).expect("nonzero conormal");
        let keep: Vec<usize> = (0..3).filter(|&j| j != k).collect();
        let face: Vec<[Rat; 2]> = verts.iter().filter(|v| v.facets.contains(&i)).map(|v| [v.point[keep[0]].clone(), v.point[keep[1]].clone()]).collect();
        let (area, c2) = shoelace(face);
        let mut base = vec![Rat::zero(); 3];
        base[keep[0]] = c2[0].clone();
        base[keep[1]] = c2[1].clone();
        base[k] = (&p.support()[i] - &eta[keep[0]] * &c2[0] - &eta[keep[1]] * &c2[1]) / &eta[k];
        let height = &p.support()[i] - rat::dot(eta, &o);
        let pyramid = height * area.abs() / eta[k].abs() / int(3);
        for j in 0..3 {
            moment[j] += &pyramid * (&o[j] + (&base[j] - &o[j]) * frac(3, 4));
        }
        volume += pyramid;
    }
    let center = moment.iter().map(|m| m / &volume).collect();
    (volume, center)
}

fn library(p: &Polytope) -> (Rat, Vec<Rat>) {
    let calc = Calculus::new(p).unwrap();
    (calc.volume.eval(p.support()), calc.center(p, p.support()).unwrap())
}

fn named() -> Vec<(&'static str, Polytope)> {
    let cube = build::product_of_simplices(&[1, 1, 1]).unwrap();
    vec![
        ("y12", build::y_family_int(1, 2, &[0, 0, 1, 0, 6]).unwrap()),
        ("y_minus", build::y_family_int(-1, 2, &[1, -1, 2, 0, 9]).unwrap()),
        ("cube_blown_up", build::blowup(&cube, &[0, 2, 4], Some(frac(1, 3))).unwrap()),
        ("hexagon", Polytope::from_ints(&[&[1, 0], &[1, 1], &[0, 1], &[-1, 0], &[-1, -1], &[0, -1]], &[2, 3, 2, 1, 1, 1], true).unwrap()),
        ("trapezoid", Polytope::from_ints(&[&[0, -1], &[1, 0], &[0, 1], &[-1, 2]], &[0, 3, 1, 0], false).unwrap()),
        ("twisted_bundle", {
            let fiber = build::simplex(1).unwrap();
            build::bundle_over_simplex(&fiber, 2, &[vec![int(0)], vec![int(0)], vec![int(1)]], &[int(0), int(0), int(2)]).unwrap()
        }),
    ]
}

/// Reference values produced by the oracles above.
const FROZEN: &[(&str, &str, [&str; 3])] = &[
    ("y12", "5/2", ["1/3", "19/60", "151/60"]),
    ("y_minus", "32/3", ["-1/4", "25/16", "45/16"]),
    ("cube_blown_up", "161/162", ["971/1932", "971/1932", "971/1932"]),
    ("hexagon", "8", ["1/2", "1/2", ""]),
    ("trapezoid", "2", ["23/12", "5/12", ""]),
    ("twisted_bundle", "7/6", ["11/28", "15/28", "15/28"]),
];

fn parse(s: &str) -> Rat {
    s.parse().unwrap()
}

#[test]
fn oracle_agrees_on_named_polytopes() {
    for (name, p) in named() {
        assert_eq!(oracle(&p), library(&p), "{name}");
    }
}

#[test]
fn frozen_reference_values() {
    for (name, p) in named() {
        let (v, c) = library(&p);
        let (_, fv, fc) = FROZEN.iter().find(|f| f.0 == name).unwrap();
        assert_eq!(v, parse(fv), "{name} volume");
        let expected: Vec<Rat> = fc.iter().filter(|s| !s.is_empty()).map(|s| parse(s)).collect();
        assert_eq!(c, expected, "{name} center");
    }
}

#[test]
fn oracle_agrees_on_corpus() {
    for preset in ["dim2_default", "dim2_smooth", "dim3_default", "dim3_smooth"] {
        for (k, p) in verify::corpus_from_preset(preset, Some(40), 5).unwrap().iter().enumerate() {
            assert_eq!(oracle(p), library(p), "{preset} item {k}");
        }
    }
}

#[test]
fn oracle_agrees_away_from_reference_point() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
    for p in verify::corpus_from_preset("dim3_default", Some(15), 8).unwrap() {
        let calc = Calculus::new(&p).unwrap();
        let kappa = p.random_chamber_point(&mut rng);
        let moved = p.with_support(&kappa).unwrap();
        assert_eq!(oracle(&moved), (calc.volume.eval(&kappa), calc.center(&p, &kappa).unwrap()));
    }
}

#[test]
fn mass_linear_basis_is_linear_under_the_oracle() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
    let mut seen = 0;
    for preset in ["dim2_default", "dim3_smooth"] {
        for p in verify::corpus_from_preset(preset, Some(25), 4).unwrap() {
            let a = polymass::analysis::Analysis::new(p.clone()).unwrap();
            for b in &a.space.basis {
                for _ in 0..3 {
                    let kappa = p.random_chamber_point(&mut rng);
                    let (_, c) = oracle(&p.with_support(&kappa).unwrap());
                    assert_eq!(rat::dot(&b.h, &c), rat::dot(&b.gamma, &kappa));
                    seen += 1;
                }
            }
        }
    }
    assert!(seen > 50);
}
