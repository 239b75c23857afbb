use crate::error::{Error, Result};
use crate::rat::{self, Rat};
use num_traits::{One, Zero};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;

/// Sparse polynomial over the rationals in variables `kappa_1..kappa_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u8>, Rat>,
}

impl KPoly {
    pub fn zero(nvars: usize) -> Self {
        KPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Rat::one());
        p
    }

    /// The homogeneous linear form `sum coeffs_i kappa_i`.
    pub fn linear(coeffs: &[Rat]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; n];
                e[i] = 1;
                p.add_term(e, c.clone());
            }
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u8]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, exps: Vec<u8>, c: Rat) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(exps.len(), self.nvars);
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum()).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<usize> {
        self.terms.keys().map(|e| e[i] as usize).max()
    }

    pub fn is_homogeneous(&self, d: usize) -> bool {
        self.terms.keys().all(|e| e.iter().map(|&x| x as usize).sum::<usize>() == d)
    }

    pub fn add(&self, other: &KPoly) -> KPoly {
        let mut p = self.clone();
        p.add_assign(other);
        p
    }

    pub fn add_assign(&mut self, other: &KPoly) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &KPoly, s: &Rat) {
        if s.is_zero() {
            return;
        }
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c * s);
        }
    }

    pub fn sub(&self, other: &KPoly) -> KPoly {
        let mut p = self.clone();
        p.add_scaled(other, &-Rat::one());
        p
    }

    pub fn scale(&self, s: &Rat) -> KPoly {
        if s.is_zero() {
            return KPoly::zero(self.nvars);
        }
        KPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &KPoly) -> KPoly {
        let mut p = KPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u8> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    /// Product with the linear form `sum l_i kappa_i`.
    pub fn mul_linear(&self, l: &[Rat]) -> KPoly {
        let mut p = KPoly::zero(self.nvars);
        for (i, li) in l.iter().enumerate() {
            if li.is_zero() {
                continue;
            }
            for (e, c) in &self.terms {
                let mut e2 = e.clone();
                e2[i] += 1;
                p.add_term(e2, c * li);
            }
        }
        p
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        let maxdeg = self.terms.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0) as usize;
        let powers: Vec<Vec<Rat>> = x
            .iter()
            .map(|xi| {
                let mut v = vec![Rat::one()];
                for k in 1..=maxdeg {
                    let next = &v[k - 1] * xi;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut s = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= &powers[i][k as usize];
                }
            }
            s += t;
        }
        s
    }

    pub fn partial(&self, i: usize) -> KPoly {
        let mut p = KPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                p.add_term(e2, c * rat::int(e[i] as i64));
            }
        }
        p
    }

    /// Substitutes variable `k` by the linear form `forms[k]` in `new_nvars` variables.
    pub fn compose_linear(&self, forms: &[Vec<Rat>], new_nvars: usize) -> KPoly {
        let mut out = KPoly::zero(new_nvars);
        let mut cache: BTreeMap<(usize, u8), KPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut t = KPoly::constant(new_nvars, c.clone());
            for (k, &d) in e.iter().enumerate() {
                if d == 0 {
                    continue;
                }
                let pw = cache
                    .entry((k, d))
                    .or_insert_with(|| {
                        let mut q = KPoly::constant(new_nvars, Rat::one());
                        for _ in 0..d {
                            q = q.mul_linear(&forms[k]);
                        }
                        q
                    })
                    .clone();
                t = t.mul(&pw);
            }
            out.add_assign(&t);
        }
        out
    }

    /// `Some(k)` with `self = k * other`, provided `other` is nonzero.
    pub fn ratio_to(&self, other: &KPoly) -> Option<Rat> {
        let (e, c) = other.terms.iter().next()?;
        let k = self.coefficient(e) / c;
        if self.sub(&other.scale(&k)).is_zero() {
            Some(k)
        } else {
            None
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| json!({"exps": e, "coef": rat::to_json(c)}))
                .collect(),
        )
    }

    pub fn from_json(nvars: usize, v: &Value) -> Result<KPoly> {
        let items = v.as_array().ok_or_else(|| Error::Parse("polynomial must be an array".into()))?;
        let mut p = KPoly::zero(nvars);
        for item in items {
            let exps: Vec<u8> = serde_json::from_value(item["exps"].clone()).map_err(|e| Error::Parse(e.to_string()))?;
            if exps.len() != nvars {
                return Err(Error::LengthMismatch { expected: nvars, found: exps.len() });
            }
            let c = rat::from_json(&item["coef"]).map_err(Error::Parse)?;
            p.add_term(exps, c);
        }
        Ok(p)
    }
}

impl fmt::Display for KPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", rat::show(c))?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*k{}", i + 1)?,
                    _ => write!(f, "*k{}^{}", i + 1, k)?,
                }
            }
        }
        Ok(())
    }
}
