//! Seeded random tensors for property checks.
//!
//! Coefficients are sparse Laurent polynomials with small rational
//! coefficients, exponents in `[-max_exp, max_exp]` and total absolute
//! degree at most `max_total`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exterior::{DiffForm, Kind, Multivector, SkewTensor};
use crate::homogeneity::combinations;
use crate::jacobi_calculus::SplitPair;
use crate::ring::{int, Chart, Field, Laurent};

/// Environment variable holding the seed for randomized checks.
pub const SEED_VAR: &str = "PJCALC_SEED";

/// Default seed when the environment does not provide one.
pub const DEFAULT_SEED: u64 = 0x5eed_c0ffee;

/// Reads the seed from [`SEED_VAR`], falling back to [`DEFAULT_SEED`].
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
    pub max_terms: usize,
    pub max_exp: i32,
    pub max_total: i32,
    /// Probability in percent that a basis tuple gets a nonzero coefficient.
    pub density: u32,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_terms: 2,
            max_exp: 2,
            max_total: 2,
            density: 45,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// A nonzero rational `a/b` with `|a| <= 4`, `1 <= b <= 3`.
    pub fn coefficient<C: Field>(&mut self) -> C {
        let mut a = 0;
        while a == 0 {
            a = self.rng.gen_range(-4..=4);
        }
        let b = self.rng.gen_range(1..=3);
        int::<C>(a) / int::<C>(b)
    }

    /// Random exponent vector over `vars` (other slots zero).
    fn exponents(&mut self, dim: usize, vars: &[usize]) -> Vec<i32> {
        let mut e = vec![0; dim];
        let mut budget = self.max_total;
        let mut order = vars.to_vec();
        order.shuffle(&mut self.rng);
        for v in order {
            if budget == 0 {
                break;
            }
            let hi = budget.min(self.max_exp);
            let x = self.rng.gen_range(-hi..=hi);
            e[v] = x;
            budget -= x.abs();
        }
        e
    }

    /// Random scalar in the variables `vars`; never zero when `nonzero`.
    pub fn scalar_in<C: Field>(&mut self, chart: &Chart, vars: &[usize], nonzero: bool) -> Laurent<C> {
        loop {
            let n = self.rng.gen_range(if nonzero { 1 } else { 0 }..=self.max_terms);
            let mut terms = Vec::with_capacity(n);
            for _ in 0..n {
                let e = self.exponents(chart.dim(), vars);
                terms.push((e, self.coefficient::<C>()));
            }
            let f = Laurent::from_terms(chart, terms);
            if !nonzero || !f.is_zero() {
                return f;
            }
        }
    }

    pub fn scalar<C: Field>(&mut self, chart: &Chart) -> Laurent<C> {
        let vars: Vec<usize> = (0..chart.dim()).collect();
        self.scalar_in(chart, &vars, false)
    }

    /// Polynomial (no negative exponents) in `vars`.
    pub fn polynomial_in<C: Field>(&mut self, chart: &Chart, vars: &[usize]) -> Laurent<C> {
        let mut terms = Vec::new();
        for _ in 0..=self.max_terms {
            let mut e = vec![0; chart.dim()];
            let mut budget = self.max_total;
            for &v in vars {
                let x = self.rng.gen_range(0..=budget);
                e[v] = x;
                budget -= x;
            }
            terms.push((e, self.coefficient::<C>()));
        }
        Laurent::from_terms(chart, terms)
    }

    /// A sparse skew tensor whose coefficient on tuple `I` is built by `coeff`.
    pub fn tensor_with<C: Field, K: Kind>(
        &mut self,
        chart: &Chart,
        degree: usize,
        mut coeff: impl FnMut(&mut Self, &[usize]) -> Laurent<C>,
    ) -> SkewTensor<C, K> {
        let mut terms = Vec::new();
        for idx in combinations(chart.dim(), degree) {
            if self.rng.gen_range(0..100) < self.density {
                let c = coeff(self, &idx);
                terms.push((idx, c));
            }
        }
        SkewTensor::from_terms(chart, degree, terms).expect("valid tuples")
    }

    pub fn tensor<C: Field, K: Kind>(&mut self, chart: &Chart, degree: usize) -> SkewTensor<C, K> {
        self.tensor_with(chart, degree, |s, _| s.scalar(chart))
    }

    pub fn multivector<C: Field>(&mut self, chart: &Chart, degree: usize) -> Multivector<C> {
        self.tensor(chart, degree)
    }

    pub fn form<C: Field>(&mut self, chart: &Chart, degree: usize) -> DiffForm<C> {
        self.tensor(chart, degree)
    }

    /// Random operator or form pair of degree `k`.
    pub fn split_pair<C: Field, K: Kind>(&mut self, chart: &Chart, degree: usize) -> SplitPair<C, K> {
        let first = self.tensor(chart, degree);
        let second = (degree > 0).then(|| self.tensor(chart, degree - 1));
        SplitPair::new(first, second).expect("consistent degrees")
    }

    /// `Delta`-homogeneous multivector of degree `1 - k` for `Delta = t@t`:
    /// the coefficient of `@_I` is `t^(1 - k + [t in I]) g(x)`.
    pub fn homogeneous_multivector<C: Field>(&mut self, chart: &Chart, k: usize) -> Multivector<C> {
        let t = chart.homogeneity_index().expect("homogeneity variable");
        self.homogeneous_tensor(chart, k, |idx| 1 - k as i32 + idx.contains(&t) as i32)
    }

    /// `Delta`-homogeneous `k`-form of degree 1: coefficient of `d_I` is
    /// `t^(1 - [t in I]) g(x)`.
    pub fn homogeneous_form<C: Field>(&mut self, chart: &Chart, k: usize) -> DiffForm<C> {
        let t = chart.homogeneity_index().expect("homogeneity variable");
        self.homogeneous_tensor(chart, k, |idx| 1 - idx.contains(&t) as i32)
    }

    fn homogeneous_tensor<C: Field, K: Kind>(
        &mut self,
        chart: &Chart,
        k: usize,
        t_exp: impl Fn(&[usize]) -> i32,
    ) -> SkewTensor<C, K> {
        let t = chart.homogeneity_index().expect("homogeneity variable");
        let slice_vars: Vec<usize> = (0..chart.dim()).filter(|&i| i != t).collect();
        self.tensor_with(chart, k, |s, idx| {
            let g = s.scalar_in::<C>(chart, &slice_vars, false);
            let tp = Laurent::variable_at(chart, t).pow(t_exp(idx)).expect("monomial");
            g * tp
        })
    }
}
