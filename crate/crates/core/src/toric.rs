//! Lattice computations for smooth polytopes: the kernel torus of the
//! conormal map, the shape of the identity component of the isometry group
//! and the integrality criteria attached to mass linear functions.

use crate::equiv::{EquivClasses, InessentialSpace};
use crate::error::{Error, Result};
use crate::intlin::{self, IMatrix};
use crate::masslin::MassLinearSpace;
use crate::polytope::Polytope;
use crate::rat::{self, Rat};
use crate::structure::{ProductKind, ProductVerdict};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

fn require_smooth(p: &Polytope) -> Result<()> {
    if p.lattice() && p.is_smooth() {
        Ok(())
    } else {
        Err(Error::NotSmooth)
    }
}

fn int_json(v: &[BigInt]) -> Value {
    rat::vec_to_json(&rat::from_integers(v))
}

/// `n x N` integer matrix whose columns are the conormals.
fn conormal_matrix(p: &Polytope) -> IMatrix {
    let cols: Vec<Vec<BigInt>> = p.conormals().iter().map(|c| rat::to_integers(c).expect("lattice conormals are integral")).collect();
    (0..p.dim()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
}

/// `|classes| x N` matrix summing coordinates over each class.
fn class_sum_matrix(classes: &EquivClasses, nf: usize) -> IMatrix {
    classes
        .classes
        .iter()
        .map(|c| (0..nf).map(|i| if c.contains(&i) { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Hermite basis of `{b in Z^N : sum b_i eta_i = 0}`.
pub fn kernel_lattice(p: &Polytope) -> Result<IMatrix> {
    require_smooth(p)?;
    Ok(intlin::integer_kernel(&conormal_matrix(p), p.nfacets()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsomShape {
    pub class_sizes: Vec<usize>,
    pub kernel_basis: IMatrix,
    pub pi1_rank: usize,
    /// Order of the fundamental group when it is finite.
    pub pi1_torsion: Option<BigInt>,
}

impl IsomShape {
    pub fn factors(&self) -> Vec<String> {
        self.class_sizes.iter().map(|&k| if k == 1 { "S1".to_string() } else { format!("U({k})") }).collect()
    }
}

pub fn isometry_shape(p: &Polytope, classes: &EquivClasses) -> Result<IsomShape> {
    let kernel = kernel_lattice(p)?;
    let sums = class_sum_matrix(classes, p.nfacets());
    // image of each kernel vector under the class sums
    let image: IMatrix = kernel
        .iter()
        .map(|b| sums.iter().map(|row| row.iter().zip(b).map(|(x, y)| x * y).sum()).collect())
        .collect();
    let inv = intlin::smith_invariants(&image);
    let pi1_rank = classes.len() - inv.len();
    let pi1_torsion = (pi1_rank == 0).then(|| inv.iter().fold(BigInt::one(), |acc, x| acc * x));
    Ok(IsomShape { class_sizes: classes.classes.iter().map(|c| c.len()).collect(), kernel_basis: kernel, pi1_rank, pi1_torsion })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Triviality {
    Trivial,
    FiniteOrder(BigInt),
    InfiniteOrder,
}

impl Triviality {
    pub fn to_json(&self) -> Value {
        match self {
            Triviality::Trivial => json!({"verdict": "trivial", "order": 1}),
            Triviality::FiniteOrder(m) => json!({"verdict": "finite", "order": rat::int_json(m)}),
            Triviality::InfiniteOrder => json!({"verdict": "infinite", "order": null}),
        }
    }
}

/// Whether `H = sum beta_i eta_i` for integers `beta` with zero class sums,
/// and otherwise the least multiple of `H` for which this holds.
pub fn isom_triviality(p: &Polytope, classes: &EquivClasses, h: &[Rat]) -> Result<Triviality> {
    require_smooth(p)?;
    if h.len() != p.dim() {
        return Err(Error::LengthMismatch { expected: p.dim(), found: h.len() });
    }
    let hz = rat::to_integers(h).ok_or(Error::NonIntegral)?;
    let mut system = conormal_matrix(p);
    system.extend(class_sum_matrix(classes, p.nfacets()));
    let mut target = hz;
    target.extend(std::iter::repeat_n(BigInt::zero(), classes.len()));
    Ok(match intlin::lattice_multiplier(&system, &target) {
        Some(m) if m.is_one() => Triviality::Trivial,
        Some(m) => Triviality::FiniteOrder(m),
        None => Triviality::InfiniteOrder,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SympReport {
    /// Lattice basis of integral pairs `(H, gamma)` with `H` mass linear.
    pub integral_basis: Vec<(Vec<BigInt>, Vec<BigInt>)>,
    /// No nonzero lattice vector is mass linear.
    pub torus_injects: bool,
    /// The polytope is a product of simplices.
    pub compressible: bool,
    /// Some lattice vector is mass linear and essential.
    pub essential_exists: bool,
}

impl SympReport {
    pub fn to_json(&self) -> Value {
        json!({
            "integral_mass_linear": self.integral_basis.iter().map(|(h, g)| json!({"H": int_json(h), "gamma": int_json(g)})).collect::<Vec<_>>(),
            "torus_injects": self.torus_injects,
            "compressible": self.compressible,
            "essential_exists": self.essential_exists,
        })
    }
}

/// Integer points of the rational row span of `r`.
fn saturate(r: &IMatrix, cols: usize) -> IMatrix {
    let perp = intlin::integer_kernel(r, cols);
    intlin::integer_kernel(&perp, cols)
}

pub fn symp_report(
    p: &Polytope,
    space: &MassLinearSpace,
    iness: &InessentialSpace,
    product: &ProductVerdict,
) -> Result<SympReport> {
    require_smooth(p)?;
    let n = p.dim();
    let width = n + p.nfacets();
    let rows: IMatrix = space
        .basis
        .iter()
        .map(|b| {
            let row: Vec<Rat> = b.h.iter().chain(&b.gamma).cloned().collect();
            let d = rat::lcm_denominators(&row);
            rat::to_integers(&row.iter().map(|x| x * Rat::from_integer(d.clone())).collect::<Vec<_>>()).expect("cleared denominators")
        })
        .collect();
    let integral_basis = if rows.is_empty() {
        Vec::new()
    } else {
        saturate(&rows, width).into_iter().map(|r| (r[..n].to_vec(), r[n..].to_vec())).collect()
    };
    Ok(SympReport {
        integral_basis,
        torus_injects: space.dim() == 0,
        compressible: product.kind == ProductKind::Exact,
        essential_exists: space.dim() > iness.dim(),
    })
}

pub fn report_json(shape: &IsomShape, symp: &SympReport) -> Value {
    json!({
        "kernel_basis": shape.kernel_basis.iter().map(|b| int_json(b)).collect::<Vec<_>>(),
        "factors": shape.factors(),
        "pi1_rank": shape.pi1_rank,
        "pi1_torsion": shape.pi1_torsion.as_ref().map(rat::int_json),
        "flags": symp.to_json(),
    })
}
