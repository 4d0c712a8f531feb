//! Seeded samplers for the invariant suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeffield::KElem;
use crate::hahn::HahnSeries;
use crate::ordgroup::GroupElem;
use crate::rational::Q;

/// Which series a sampler draws: exponent box, denominators, coefficient symbols.
#[derive(Clone, Debug)]
pub struct Shape {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    /// Exponent denominators are drawn from `1..=den` (use 1 for ℤ coordinates).
    pub den: i64,
    pub max_terms: usize,
    /// Transcendentals allowed in coefficients.
    pub symbols: Vec<usize>,
    /// Every term sits in its own major coordinate (keeps inverses finite in rank ≥ 2).
    pub distinct_major: bool,
}

impl Shape {
    pub fn new(lo: &[i64], hi: &[i64]) -> Self {
        Self { lo: lo.to_vec(), hi: hi.to_vec(), den: 1, max_terms: 3, symbols: vec![], distinct_major: false }
    }

    pub fn rank(&self) -> usize {
        self.lo.len()
    }

    pub fn symbols(mut self, s: &[usize]) -> Self {
        self.symbols = s.to_vec();
        self
    }

    pub fn den(mut self, d: i64) -> Self {
        self.den = d;
        self
    }

    pub fn terms(mut self, n: usize) -> Self {
        self.max_terms = n;
        self
    }

    pub fn distinct_major(mut self) -> Self {
        self.distinct_major = true;
        self
    }
}

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        xs.choose(&mut self.rng).expect("nonempty choice")
    }

    /// A nonzero rational with small numerator and denominator.
    pub fn rational(&mut self) -> Q {
        let mut n = self.range(-4, 4);
        if n == 0 {
            n = 1;
        }
        Q::new(n.into(), self.range(1, 3).into())
    }

    /// A nonzero element of k: a rational, possibly times or plus a symbol.
    pub fn coeff(&mut self, symbols: &[usize]) -> KElem {
        let r = KElem::from_rational(self.rational());
        if symbols.is_empty() || self.coin(0.5) {
            return r;
        }
        let th = KElem::symbol(*self.pick(symbols));
        match self.range(0, 2) {
            0 => &r * &th,
            1 => &r + &th,
            _ => &r * &(&KElem::one() + &th).inv().expect("1 + th is nonzero"),
        }
    }

    pub fn exponent(&mut self, shape: &Shape) -> GroupElem {
        GroupElem::new(
            shape
                .lo
                .iter()
                .zip(&shape.hi)
                .map(|(l, h)| {
                    let d = self.range(1, shape.den.max(1));
                    Q::new(self.range(l * d, h * d).into(), d.into())
                })
                .collect(),
        )
    }

    /// An exact nonzero series of the given shape.
    pub fn series(&mut self, shape: &Shape) -> HahnSeries {
        loop {
            let n = self.range(1, shape.max_terms as i64) as usize;
            let mut terms: Vec<(GroupElem, KElem)> = Vec::new();
            for _ in 0..n {
                let g = self.exponent(shape);
                if shape.distinct_major && terms.iter().any(|(h, _)| h.coords()[0] == g.coords()[0]) {
                    continue;
                }
                terms.push((g, self.coeff(&shape.symbols)));
            }
            let x = HahnSeries::from_terms(shape.rank(), terms, None).expect("sampled exponents have the right rank");
            if !x.has_no_terms() {
                return x;
            }
        }
    }

    /// A random integer matrix of determinant ±1.
    pub fn unimodular(&mut self) -> Vec<Vec<Q>> {
        let mut m = [[1i64, 0], [0, 1]];
        for _ in 0..self.range(1, 4) {
            let k = self.range(-2, 2);
            let (i, j) = if self.coin(0.5) { (0, 1) } else { (1, 0) };
            // row i += k·row j
            for c in 0..2 {
                m[i][c] += k * m[j][c];
            }
        }
        if self.coin(0.3) {
            m.swap(0, 1);
        }
        m.iter().map(|r| r.iter().map(|x| Q::from_integer((*x).into())).collect()).collect()
    }
}
