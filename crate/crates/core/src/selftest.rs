//! Randomized identity checks runnable from the command line.

use crate::homogeneity::HomogeneousSetup;
use crate::jacobi_calculus::{FirstOrderOp, FormPair};
use crate::ring::{sign, Chart};
use crate::sampling::Sampler;
use crate::{Multivector, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    /// Index of the first failing case.
    pub first_failure: Option<usize>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub seed: u64,
    pub cases: usize,
    /// Largest tensor degree drawn.
    pub max_degree: usize,
}

fn run(name: &'static str, cases: usize, mut case: impl FnMut(usize) -> crate::Result<bool>) -> CheckResult {
    let first_failure = (0..cases).find(|&i| !matches!(case(i), Ok(true)));
    CheckResult {
        name,
        cases,
        first_failure,
    }
}

pub fn run_all(cfg: Config) -> Vec<CheckResult> {
    let mut s = Sampler::new(cfg.seed);
    let chart = Chart::new(["x", "y", "z"]).expect("chart");
    let prod = Chart::with_homogeneity(["x", "y", "t"], "t").expect("chart");
    let setup = HomogeneousSetup::new(&prod).expect("setup");
    let top = cfg.max_degree;
    let deg = |s: &mut Sampler| s.below(top + 1);
    let mut out = Vec::new();

    out.push(run("schouten antisymmetry", cfg.cases, |_| {
        let (p, q) = (deg(&mut s), deg(&mut s));
        let a: Multivector = s.multivector(&chart, p);
        let b: Multivector = s.multivector(&chart, q);
        let lhs = a.sn_bracket(&b)?;
        let rhs = b.sn_bracket(&a)?.scale_const(&-sign::<Rational>((p + 1) * (q + 1)));
        Ok(lhs == rhs)
    }));

    out.push(run("schouten jacobi", cfg.cases, |_| {
        let (p, q, r) = (deg(&mut s), deg(&mut s), deg(&mut s));
        let a: Multivector = s.multivector(&chart, p);
        let b: Multivector = s.multivector(&chart, q);
        let c: Multivector = s.multivector(&chart, r);
        // [[a,[[b,c]]]] = [[[[a,b]],c]] + (-1)^((p-1)(q-1)) [[b,[[a,c]]]]
        let lhs = a.sn_bracket(&b.sn_bracket(&c)?)?;
        let t1 = a.sn_bracket(&b)?.sn_bracket(&c)?;
        let t2 = b.sn_bracket(&a.sn_bracket(&c)?)?;
        let t2 = t2.scale_const(&sign::<Rational>((p + 1) * (q + 1)));
        sum_matches(&lhs, &t1, &t2, Multivector::is_zero, |x, y| x.checked_add(y))
    }));

    out.push(run("jacobi bracket jacobi identity", cfg.cases, |_| {
        let (k, l, m) = (deg(&mut s), deg(&mut s), deg(&mut s));
        let a: FirstOrderOp<Rational> = s.split_pair(&chart, k);
        let b: FirstOrderOp<Rational> = s.split_pair(&chart, l);
        let c: FirstOrderOp<Rational> = s.split_pair(&chart, m);
        let lhs = a.sj_bracket(&b.sj_bracket(&c)?)?;
        let t1 = a.sj_bracket(&b)?.sj_bracket(&c)?;
        let t2 = b.sj_bracket(&a.sj_bracket(&c)?)?;
        let t2 = t2.scale_const(&sign::<Rational>((k + 1) * (l + 1)));
        sum_matches(&lhs, &t1, &t2, FirstOrderOp::is_zero, |x, y| x.checked_add(y))
    }));

    out.push(run("d squared", cfg.cases, |_| {
        let k = deg(&mut s);
        let a: crate::DiffForm = s.form(&chart, k);
        Ok(a.exterior_derivative().exterior_derivative().is_zero())
    }));

    out.push(run("d1 squared", cfg.cases, |_| {
        let k = deg(&mut s);
        let a: FormPair<Rational> = s.split_pair(&chart, k);
        Ok(a.jacobi_differential().jacobi_differential().is_zero())
    }));

    out.push(run("reduction is a bracket homomorphism", cfg.cases, |_| {
        let (p, q) = (deg(&mut s), deg(&mut s));
        let a = s.homogeneous_multivector::<Rational>(&prod, p);
        let b = s.homogeneous_multivector::<Rational>(&prod, q);
        let lhs = setup.reduce(&a, false)?.value.sj_bracket(&setup.reduce(&b, false)?.value)?;
        let rhs = setup.reduce(&a.sn_bracket(&b)?, false)?.value;
        Ok(lhs == rhs)
    }));

    out.push(run("poissonization inverts reduction", cfg.cases, |_| {
        let k = deg(&mut s);
        let a = s.homogeneous_multivector::<Rational>(&prod, k);
        Ok(setup.poissonize(&setup.reduce(&a, true)?.value)? == a)
    }));

    out.push(run("psi intertwines d and d1", cfg.cases, |_| {
        let k = deg(&mut s);
        let a = s.homogeneous_form::<Rational>(&prod, k);
        let lhs = setup.psi(&a.exterior_derivative(), false)?.value;
        let rhs = setup.psi(&a, false)?.value.jacobi_differential();
        Ok(lhs == rhs)
    }));

    out
}

/// `lhs == a + b`, where a zero term may carry a nominal degree that differs
/// from the others: brackets of two functions land in degree -1, which is
/// represented by a degree-0 zero.
fn sum_matches<T: PartialEq + Clone>(
    lhs: &T,
    a: &T,
    b: &T,
    is_zero: impl Fn(&T) -> bool,
    add: impl Fn(&T, &T) -> crate::Result<T>,
) -> crate::Result<bool> {
    let rhs = match (is_zero(a), is_zero(b)) {
        (true, _) => b.clone(),
        (_, true) => a.clone(),
        _ => add(a, b)?,
    };
    Ok(if is_zero(&rhs) { is_zero(lhs) } else { *lhs == rhs })
}
