//! Sparse multivariate polynomials over ℚ in the symbols th1, th2, ….
//!
//! Monomials are exponent vectors with trailing zeros trimmed, so the derived
//! `Ord` on `Vec<u32>` is the lex order with th1 most significant.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::{fmt_rational, Q};

pub type Mono = Vec<u32>;

fn trim(mut m: Mono) -> Mono {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for (i, e) in a.iter().enumerate() {
        out[i] += e;
    }
    for (i, e) in b.iter().enumerate() {
        out[i] += e;
    }
    out
}

/// `a / b` if `b` divides `a`.
fn mono_div(a: &Mono, b: &Mono) -> Option<Mono> {
    if b.len() > a.len() {
        return None;
    }
    let mut out = a.clone();
    for (i, e) in b.iter().enumerate() {
        if out[i] < *e {
            return None;
        }
        out[i] -= e;
    }
    Some(trim(out))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Self { terms }
    }

    /// The symbol th`index` (1-based).
    pub fn symbol(index: usize) -> Self {
        assert!(index >= 1, "symbols are numbered from 1");
        let mut m = vec![0; index];
        m[index - 1] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(m, Q::one());
        Self { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Mono, Q)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(trim(m), c);
        }
        p
    }

    fn add_term(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Q)> {
        self.terms.iter()
    }

    /// Largest monomial in lex order with its coefficient.
    pub fn leading(&self) -> Option<(&Mono, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn symbols(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (i, e) in m.iter().enumerate() {
                if *e > 0 {
                    out.insert(i + 1);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_mono(&self, m: &Mono) -> Poly {
        Poly { terms: self.terms.iter().map(|(k, c)| (trim(mono_mul(k, m)), c.clone())).collect() }
    }

    /// Exact quotient `self / d` when `d` divides `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let qm = mono_div(rm, &dm)?;
            let qc = rc / &dc;
            let step = Poly::from_terms([(qm, qc)]);
            rem = rem.sub(&d.mul(&step));
            quot = quot.add(&step);
        }
        Some(quot)
    }

    /// Componentwise minimum exponent over all monomials.
    pub fn mono_gcd(&self) -> Mono {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Vec::new() };
        let mut g = first.clone();
        for m in it {
            g.truncate(m.len());
            for (i, e) in m.iter().enumerate().take(g.len()) {
                g[i] = g[i].min(*e);
            }
        }
        trim(g)
    }

    pub fn div_mono(&self, m: &Mono) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (mono_div(k, m).expect("monomial divides every term"), c.clone()))
                .collect(),
        }
    }

    /// Partial derivative with respect to th`index`.
    pub fn partial(&self, index: usize) -> Poly {
        let i = index - 1;
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.len() > i && m[i] > 0 {
                let mut nm = m.clone();
                let e = nm[i];
                nm[i] -= 1;
                out.add_term(trim(nm), c * Q::from_integer(e.into()));
            }
        }
        out
    }

    /// If the polynomial only involves th`index` (or is constant), its dense
    /// coefficient list in that symbol, lowest degree first.
    fn univariate_in(&self, index: usize) -> Option<Vec<Q>> {
        let i = index - 1;
        let mut coeffs: Vec<Q> = Vec::new();
        for (m, c) in &self.terms {
            if m.iter().enumerate().any(|(j, e)| j != i && *e > 0) {
                return None;
            }
            let d = m.get(i).copied().unwrap_or(0) as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, Q::zero());
            }
            coeffs[d] = c.clone();
        }
        Some(coeffs)
    }

    fn from_univariate(index: usize, coeffs: &[Q]) -> Poly {
        Poly::from_terms(coeffs.iter().enumerate().map(|(d, c)| {
            let mut m = vec![0; index];
            m[index - 1] = d as u32;
            (m, c.clone())
        }))
    }

    /// Monic gcd when both polynomials involve at most one and the same symbol.
    pub(crate) fn univariate_gcd(&self, other: &Poly) -> Option<Poly> {
        let syms: BTreeSet<usize> = self.symbols().union(&other.symbols()).copied().collect();
        if syms.len() != 1 {
            return None;
        }
        let v = *syms.iter().next()?;
        let mut a = self.univariate_in(v)?;
        let mut b = other.univariate_in(v)?;
        strip(&mut a);
        strip(&mut b);
        while !b.is_empty() {
            let r = uni_rem(&a, &b);
            a = b;
            b = r;
        }
        if a.is_empty() {
            return None;
        }
        let lead = a.last().cloned()?;
        let monic: Vec<Q> = a.iter().map(|c| c / &lead).collect();
        Some(Poly::from_univariate(v, &monic))
    }
}

fn strip(a: &mut Vec<Q>) {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
}

fn uni_rem(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let lead = r.last().cloned().unwrap_or_else(Q::zero);
        let shift = r.len() - 1 - db;
        let f = lead / lb;
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &f * c;
        }
        r.pop();
        strip(&mut r);
    }
    r
}

fn fmt_mono(m: &Mono) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, e)| **e > 0)
        .map(|(i, e)| if *e == 1 { format!("th{}", i + 1) } else { format!("th{}^{}", i + 1, e) })
        .collect();
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono = fmt_mono(m);
            if mono.is_empty() {
                f.write_str(&fmt_rational(&abs))?;
            } else if abs.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), mono)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    #[test]
    fn exact_division() {
        let x = Poly::symbol(1);
        let y = Poly::symbol(2);
        let a = x.add(&y);
        let b = x.sub(&y);
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.add(&Poly::one()).div_exact(&a), None);
    }

    #[test]
    fn univariate_gcd_cancels_common_factor() {
        let x = Poly::symbol(1);
        let xm1 = x.sub(&Poly::one());
        let a = xm1.mul(&x.add(&Poly::constant(qi(2))));
        let b = xm1.mul(&x.add(&Poly::constant(qi(3))));
        assert_eq!(a.univariate_gcd(&b), Some(xm1));
    }

    #[test]
    fn display() {
        let x = Poly::symbol(1);
        let p = x.mul(&x).scale(&crate::rational::q(3, 2)).sub(&Poly::symbol(2)).add(&Poly::constant(qi(-1)));
        assert_eq!(p.to_string(), "3/2*th1^2 - th2 - 1");
    }
}
