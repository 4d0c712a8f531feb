use std::fmt;

use serde::Serialize;

use crate::coeffield::{DualNumber, KElem};
use crate::error::{Error, Result};
use crate::rational::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Completeness {
    /// The subspace is the full specialization.
    Complete,
    /// Only a subspace of the specialization was certified.
    LowerBound,
}

/// A k-subspace of `k[ε]ⁿ`, kept in reduced row echelon form over the
/// `2n` coordinates `(a₁, b₁, …, a_n, b_n)` of `(a₁ + b₁ε, …)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsSubspace {
    ambient: usize,
    rows: Vec<Vec<KElem>>,
    completeness: Completeness,
}

fn flatten(v: &[DualNumber]) -> Vec<KElem> {
    v.iter().flat_map(|d| [d.a.clone(), d.b.clone()]).collect()
}

impl EpsSubspace {
    pub fn zero(ambient: usize) -> Self {
        Self { ambient, rows: Vec::new(), completeness: Completeness::Complete }
    }

    /// The k-span of `vectors`.
    pub fn span(ambient: usize, vectors: &[Vec<DualNumber>]) -> Result<Self> {
        let mut s = Self::zero(ambient);
        for v in vectors {
            s.insert(v)?;
        }
        Ok(s)
    }

    /// The k[ε]-submodule generated by `vectors` (each `v` together with `εv`).
    pub fn module_span(ambient: usize, vectors: &[Vec<DualNumber>]) -> Result<Self> {
        let mut s = Self::zero(ambient);
        for v in vectors {
            s.insert_module(v)?;
        }
        Ok(s)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn completeness(&self) -> Completeness {
        self.completeness
    }

    pub fn is_complete(&self) -> bool {
        self.completeness == Completeness::Complete
    }

    pub fn with_completeness(mut self, c: Completeness) -> Self {
        self.completeness = c;
        self
    }

    /// Adds `v` and `εv`; returns whether the dimension grew.
    pub fn insert_module(&mut self, v: &[DualNumber]) -> Result<bool> {
        let ev: Vec<DualNumber> = v.iter().map(|d| &DualNumber::eps() * d).collect();
        let a = self.insert(v)?;
        let b = self.insert(&ev)?;
        Ok(a || b)
    }

    /// Adds one vector; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[DualNumber]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::Structural(format!(
                "vector of length {} in k[eps]^{}",
                v.len(),
                self.ambient
            )));
        }
        let mut r = self.reduce(flatten(v));
        let Some(p) = r.iter().position(|c| !c.is_zero()) else { return Ok(false) };
        let inv = r[p].inv()?;
        for c in r.iter_mut() {
            *c = &*c * &inv;
        }
        for row in self.rows.iter_mut() {
            let f = row[p].clone();
            if !f.is_zero() {
                for (x, y) in row.iter_mut().zip(&r) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        self.rows.push(r);
        self.rows.sort_by_key(|row| row.iter().position(|c| !c.is_zero()));
        Ok(true)
    }

    fn reduce(&self, mut v: Vec<KElem>) -> Vec<KElem> {
        for row in &self.rows {
            let p = row.iter().position(|c| !c.is_zero()).expect("nonzero row");
            let f = v[p].clone();
            if !f.is_zero() {
                for (x, y) in v.iter_mut().zip(row) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[DualNumber]) -> bool {
        v.len() == self.ambient && self.reduce(flatten(v)).iter().all(KElem::is_zero)
    }

    /// Same subspace (completeness is ignored).
    pub fn same_space(&self, other: &EpsSubspace) -> bool {
        self.ambient == other.ambient && self.rows == other.rows
    }

    /// The echelon basis as vectors in `k[ε]ⁿ`.
    pub fn basis(&self) -> Vec<Vec<DualNumber>> {
        self.rows
            .iter()
            .map(|row| row.chunks(2).map(|c| DualNumber::new(c[0].clone(), c[1].clone())).collect())
            .collect()
    }

    /// Image under a k-linear map of `k[ε]ⁿ` given by a rational `n × n` matrix acting entrywise.
    pub fn map_matrix(&self, g: &[Vec<Q>]) -> Result<EpsSubspace> {
        let mut out = EpsSubspace::zero(self.ambient);
        for v in self.basis() {
            out.insert(&apply_matrix(g, &v)?)?;
        }
        Ok(out.with_completeness(self.completeness))
    }

    /// `A ⊕ B` in `k[ε]^{n+m}`.
    pub fn direct_sum(&self, other: &EpsSubspace) -> Result<EpsSubspace> {
        let n = self.ambient + other.ambient;
        let mut out = EpsSubspace::zero(n);
        for v in self.basis() {
            let mut w = v.clone();
            w.extend(std::iter::repeat_n(DualNumber::zero(), other.ambient));
            out.insert(&w)?;
        }
        for v in other.basis() {
            let mut w: Vec<DualNumber> = std::iter::repeat_n(DualNumber::zero(), self.ambient).collect();
            w.extend(v);
            out.insert(&w)?;
        }
        Ok(out)
    }
}

/// `g·v` for a rational matrix `g` acting on `k[ε]ⁿ`.
pub fn apply_matrix(g: &[Vec<Q>], v: &[DualNumber]) -> Result<Vec<DualNumber>> {
    if g.len() != v.len() || g.iter().any(|row| row.len() != v.len()) {
        return Err(Error::Structural("matrix and vector sizes differ".into()));
    }
    Ok(g.iter()
        .map(|row| {
            row.iter().zip(v).fold(DualNumber::zero(), |acc, (c, d)| &acc + &d.scale(&KElem::from_rational(c.clone())))
        })
        .collect())
}

impl fmt::Display for EpsSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vecs: Vec<String> = self
            .basis()
            .iter()
            .map(|v| format!("({})", v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "span{{{}}}", vecs.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(a: i64, b: i64) -> DualNumber {
        DualNumber::new(KElem::from_int(a), KElem::from_int(b))
    }

    #[test]
    fn module_span_of_a_graph() {
        let s = EpsSubspace::module_span(2, &[vec![d(1, 0), d(0, 1)]]).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[d(0, 1), d(0, 0)]));
        assert!(!s.contains(&[d(0, 1), d(0, 1)]));
    }

    #[test]
    fn echelon_form_is_canonical() {
        let a = EpsSubspace::span(2, &[vec![d(1, 1), d(0, 0)], vec![d(0, 1), d(0, 0)]]).unwrap();
        let b = EpsSubspace::span(2, &[vec![d(1, 0), d(0, 0)], vec![d(2, 3), d(0, 0)]]).unwrap();
        assert!(a.same_space(&b));
    }

    #[test]
    fn direct_sum_of_eps_lines() {
        let a = EpsSubspace::span(1, &[vec![d(0, 1)]]).unwrap();
        let s = a.direct_sum(&a).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[d(0, 5), d(0, -2)]));
    }
}
