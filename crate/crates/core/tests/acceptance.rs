//! Acceptance suite: one PASS/FAIL line per criterion, exact arithmetic
//! throughout. Runs as a plain binary so the report reads top to bottom.

#[path = "oracles/mod.rs"]
mod oracles;

use std::fmt::Display;
use std::path::Path;
use std::time::Instant;

use pjcalc::exterior::{pairing, Kind, SkewTensor};
use pjcalc::frontend::{run_source, Mode, Session, Value};
use pjcalc::homogeneity::{degree, Homogeneity};
use pjcalc::jacobi_calculus::SplitPair;
use pjcalc::ring::{Laurent, Point};
use pjcalc::sampling::{seed_from_env, Sampler};
use pjcalc::structures::{
    contact_reduce, default_test_functions, hamiltonian_poisson, invert_symplectic, is_poisson, nambu_check,
    reduced_poisson_bracket,
};
use pjcalc::{Chart, DiffForm, FirstOrderOp, FormPair, HomogeneousSetup, Multivector, Rational, Scalar};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&mut Ctx) -> Outcome);

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn sgn(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        q(1, 1)
    } else {
        q(-1, 1)
    }
}

/// Tensors whose sums may mix zeros of a nominal degree with nonzero terms:
/// a bracket landing in degree -1 is represented by a degree-0 zero.
trait Term: Clone + PartialEq + Display {
    fn zero_like(&self) -> bool;
    fn plus(&self, other: &Self) -> Option<Self>;
    fn times(&self, c: &Rational) -> Self;
}

impl<K: Kind> Term for SkewTensor<Rational, K> {
    fn zero_like(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Option<Self> {
        self.checked_add(other).ok()
    }
    fn times(&self, c: &Rational) -> Self {
        self.scale_const(c)
    }
}

impl<K: Kind> Term for SplitPair<Rational, K> {
    fn zero_like(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Option<Self> {
        self.checked_add(other).ok()
    }
    fn times(&self, c: &Rational) -> Self {
        self.scale_const(c)
    }
}

fn sum_equals<T: Term>(lhs: &T, terms: &[T]) -> bool {
    let mut acc: Option<T> = None;
    for t in terms.iter().filter(|t| !t.zero_like()) {
        acc = match acc {
            None => Some(t.clone()),
            Some(a) => match a.plus(t) {
                Some(s) => Some(s),
                None => return false,
            },
        };
    }
    match acc {
        Some(s) if !s.zero_like() => *lhs == s,
        _ => lhs.zero_like(),
    }
}

/// Runs `cases` cases; stops at the first failure with its description.
fn cases(n: usize, mut case: impl FnMut(usize) -> Result<(), String>) -> Result<usize, String> {
    for i in 0..n {
        case(i).map_err(|e| format!("case {i}: {e}"))?;
    }
    Ok(n)
}

fn ok_or<E: Display, T>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

struct Ctx {
    s: Sampler,
    /// Every value produced along the way, re-read by the frontend check.
    produced: Vec<Value>,
}

impl Ctx {
    fn keep(&mut self, v: impl Into<Value>) {
        self.produced.push(v.into());
    }
}

const RANDOM_CASES: usize = 200;
const MAX_DEGREE: usize = 3;

fn chart4() -> Chart {
    Chart::new(["x", "y", "z", "w"]).unwrap()
}

// 1. Bracket axioms.
fn criterion_1(cx: &mut Ctx) -> Outcome {
    let chart = chart4();
    let mut total = 0;

    // SN i: [[X, f]] = X(f)
    total += cases(RANDOM_CASES, |_| {
        let x: Multivector = cx.s.multivector(&chart, 1);
        let f: Scalar = cx.s.scalar(&chart);
        let lhs = ok_or(x.sn_bracket(&Multivector::scalar(f.clone())))?;
        let rhs = Multivector::scalar(ok_or(x.apply(&f))?);
        cx.keep(lhs.clone());
        ensure(lhs == rhs, || format!("SN i: X = {x}, f = {f}"))
    })?;

    // SN ii: graded antisymmetry
    total += cases(RANDOM_CASES, |_| {
        let (p, r) = (cx.s.below(MAX_DEGREE + 1), cx.s.below(MAX_DEGREE + 1));
        let a: Multivector = cx.s.multivector(&chart, p);
        let b: Multivector = cx.s.multivector(&chart, r);
        let lhs = ok_or(a.sn_bracket(&b))?;
        let rhs = ok_or(b.sn_bracket(&a))?.times(&-sgn((p as i64 - 1) * (r as i64 - 1)));
        cx.keep(lhs.clone());
        ensure(sum_equals(&lhs, &[rhs]), || format!("SN ii: P = {a}, Q = {b}"))
    })?;

    // SN iii: [[P, Q^R]] = [[P,Q]]^R + (-1)^((p-1)q) Q^[[P,R]]
    total += cases(RANDOM_CASES, |_| {
        let p = cx.s.below(MAX_DEGREE + 1);
        let qd = cx.s.below(MAX_DEGREE + 1);
        let rd = cx.s.below(MAX_DEGREE + 1 - qd);
        let a: Multivector = cx.s.multivector(&chart, p);
        let b: Multivector = cx.s.multivector(&chart, qd);
        let c: Multivector = cx.s.multivector(&chart, rd);
        let lhs = ok_or(a.sn_bracket(&ok_or(b.wedge(&c))?))?;
        let t1 = ok_or(ok_or(a.sn_bracket(&b))?.wedge(&c))?;
        let t2 = ok_or(b.wedge(&ok_or(a.sn_bracket(&c))?))?.times(&sgn((p as i64 - 1) * qd as i64));
        cx.keep(lhs.clone());
        ensure(sum_equals(&lhs, &[t1, t2]), || format!("SN iii: P = {a}, Q = {b}, R = {c}"))
    })?;

    // SN iv: cyclic graded Jacobi identity
    total += cases(RANDOM_CASES, |_| {
        let d: Vec<usize> = (0..3).map(|_| cx.s.below(MAX_DEGREE + 1)).collect();
        let t: Vec<Multivector> = d.iter().map(|&k| cx.s.multivector(&chart, k)).collect();
        let mut terms = Vec::new();
        for i in 0..3 {
            let (a, b, c) = (&t[i], &t[(i + 1) % 3], &t[(i + 2) % 3]);
            let s = sgn((d[i] as i64 - 1) * (d[(i + 2) % 3] as i64 - 1));
            terms.push(ok_or(a.sn_bracket(&ok_or(b.sn_bracket(c))?))?.times(&s));
        }
        let zero = Multivector::zero(&chart, 0);
        ensure(sum_equals(&zero, &terms), || format!("SN iv: {} | {} | {}", t[0], t[1], t[2]))
    })?;

    // the Leibniz-expansion oracle is the unique extension fixed by i-iii
    total += cases(RANDOM_CASES, |_| {
        let (p, r) = (cx.s.below(MAX_DEGREE + 1), cx.s.below(MAX_DEGREE + 1));
        let a: Multivector = cx.s.multivector(&chart, p);
        let b: Multivector = cx.s.multivector(&chart, r);
        let ours = ok_or(a.sn_bracket(&b))?;
        let reference = oracles::schouten(&a, &b);
        let agree = match &reference {
            None => ours.is_zero(),
            Some(r) => *r == ours,
        };
        ensure(agree, || format!("SN oracle: P = {a}, Q = {b}"))
    })?;

    // SJ i: extends the bracket of D^1 = vector fields + functions
    total += cases(RANDOM_CASES, |_| {
        let x: Multivector = cx.s.multivector(&chart, 1);
        let y: Multivector = cx.s.multivector(&chart, 1);
        let f: Scalar = cx.s.scalar(&chart);
        let g: Scalar = cx.s.scalar(&chart);
        let xf = ok_or(FirstOrderOp::from_parts(x.clone(), Multivector::scalar(f.clone())))?;
        let yg = ok_or(FirstOrderOp::from_parts(y.clone(), Multivector::scalar(g.clone())))?;
        let lhs = ok_or(xf.sj_bracket(&yg))?;
        // [X, Y]^i = X(Y^i) - Y(X^i)
        let mut lie = Vec::new();
        for i in 0..chart.dim() {
            let c = ok_or(x.apply(&y.coefficient(&[i])))? - ok_or(y.apply(&x.coefficient(&[i])))?;
            lie.push((i, c));
        }
        let lie = Multivector::vector_field(&chart, lie);
        let fun = ok_or(x.apply(&g))? - ok_or(y.apply(&f))?;
        let rhs = ok_or(FirstOrderOp::from_parts(lie, Multivector::scalar(fun)))?;
        cx.keep(lhs.clone());
        ensure(lhs == rhs, || format!("SJ i: {xf} | {yg}"))
    })?;

    // SJ ii: [[X + f, g]] = X(g) + f g
    total += cases(RANDOM_CASES, |_| {
        let x: Multivector = cx.s.multivector(&chart, 1);
        let f: Scalar = cx.s.scalar(&chart);
        let g: Scalar = cx.s.scalar(&chart);
        let xf = ok_or(FirstOrderOp::from_parts(x.clone(), Multivector::scalar(f.clone())))?;
        let lhs = ok_or(xf.sj_bracket(&FirstOrderOp::function(&g)))?;
        let rhs = FirstOrderOp::function(&(ok_or(x.apply(&g))? + &f * &g));
        ensure(lhs == rhs, || format!("SJ ii: {xf} | {g}"))
    })?;

    // SJ iii: graded antisymmetry
    total += cases(RANDOM_CASES, |_| {
        let (p, r) = (cx.s.below(MAX_DEGREE + 1), cx.s.below(MAX_DEGREE + 1));
        let a: FirstOrderOp = cx.s.split_pair(&chart, p);
        let b: FirstOrderOp = cx.s.split_pair(&chart, r);
        let lhs = ok_or(a.sj_bracket(&b))?;
        let rhs = ok_or(b.sj_bracket(&a))?.times(&-sgn((p as i64 - 1) * (r as i64 - 1)));
        cx.keep(lhs.clone());
        ensure(sum_equals(&lhs, &[rhs]), || format!("SJ iii: {a} | {b}"))
    })?;

    // SJ iv: Leibniz rule corrected by -(i_phi D)^E^F
    total += cases(RANDOM_CASES, |_| {
        let p = cx.s.below(MAX_DEGREE + 1);
        let qd = cx.s.below(MAX_DEGREE + 1);
        let rd = cx.s.below(MAX_DEGREE + 1 - qd);
        let a: FirstOrderOp = cx.s.split_pair(&chart, p);
        let b: FirstOrderOp = cx.s.split_pair(&chart, qd);
        let c: FirstOrderOp = cx.s.split_pair(&chart, rd);
        let lhs = ok_or(a.sj_bracket(&ok_or(b.wedge(&c))?))?;
        let t1 = ok_or(ok_or(a.sj_bracket(&b))?.wedge(&c))?;
        let t2 = ok_or(b.wedge(&ok_or(a.sj_bracket(&c))?))?.times(&sgn((p as i64 - 1) * qd as i64));
        // phi contracted into the last slot: I^D1 = (-1)^(p-1) D1^I
        let i_phi = FirstOrderOp::embed(&a.i_phi()).times(&sgn(p as i64 - 1));
        let t3 = ok_or(ok_or(i_phi.wedge(&b))?.wedge(&c))?.times(&q(-1, 1));
        cx.keep(lhs.clone());
        ensure(sum_equals(&lhs, &[t1, t2, t3]), || format!("SJ iv: {a} | {b} | {c}"))
    })?;

    // SJ v: cyclic graded Jacobi identity
    total += cases(RANDOM_CASES, |_| {
        let d: Vec<usize> = (0..3).map(|_| cx.s.below(MAX_DEGREE + 1)).collect();
        let t: Vec<FirstOrderOp> = d.iter().map(|&k| cx.s.split_pair(&chart, k)).collect();
        let mut terms = Vec::new();
        for i in 0..3 {
            let (a, b, c) = (&t[i], &t[(i + 1) % 3], &t[(i + 2) % 3]);
            let s = sgn((d[i] as i64 - 1) * (d[(i + 2) % 3] as i64 - 1));
            terms.push(ok_or(a.sj_bracket(&ok_or(b.sj_bracket(c))?))?.times(&s));
        }
        let zero = FirstOrderOp::zero(&chart, 0);
        ensure(sum_equals(&zero, &terms), || format!("SJ v: {} | {} | {}", t[0], t[1], t[2]))
    })?;

    Ok(format!("{total} randomized cases over 10 identities"))
}

// 2. d and d1 are differentials, with their product rules.
fn criterion_2(cx: &mut Ctx) -> Outcome {
    let chart = chart4();
    let mut total = 0;

    total += cases(RANDOM_CASES, |_| {
        let k = cx.s.below(MAX_DEGREE + 1);
        let a: DiffForm = cx.s.form(&chart, k);
        let da = a.exterior_derivative();
        cx.keep(da.clone());
        ensure(da.exterior_derivative().is_zero(), || format!("d d != 0 on {a}"))
    })?;

    total += cases(RANDOM_CASES, |_| {
        let k = cx.s.below(MAX_DEGREE + 1);
        let a: FormPair = cx.s.split_pair(&chart, k);
        let da = a.jacobi_differential();
        cx.keep(da.clone());
        ensure(da.jacobi_differential().is_zero(), || format!("d1 d1 != 0 on {a}"))
    })?;

    total += cases(RANDOM_CASES, |_| {
        let f: Scalar = cx.s.scalar(&chart);
        let d1f = FormPair::function(&f).jacobi_differential();
        ensure(d1f == FormPair::jet(&f), || format!("d1 f != j1 f for {f}"))
    })?;

    // d(a^b) = da^b + (-1)^p a^db
    total += cases(RANDOM_CASES, |_| {
        let p = cx.s.below(MAX_DEGREE + 1);
        let r = cx.s.below(MAX_DEGREE + 1 - p);
        let a: DiffForm = cx.s.form(&chart, p);
        let b: DiffForm = cx.s.form(&chart, r);
        let lhs = ok_or(a.wedge(&b))?.exterior_derivative();
        let t1 = ok_or(a.exterior_derivative().wedge(&b))?;
        let t2 = ok_or(a.wedge(&b.exterior_derivative()))?.times(&sgn(p as i64));
        ensure(sum_equals(&lhs, &[t1, t2]), || format!("d product rule: {a} | {b}"))
    })?;

    // d1(a^b) = d1a^b + (-1)^p a^d1b - phi^a^b
    total += cases(RANDOM_CASES, |_| {
        let p = cx.s.below(MAX_DEGREE);
        let r = cx.s.below(MAX_DEGREE - p);
        let a: FormPair = cx.s.split_pair(&chart, p);
        let b: FormPair = cx.s.split_pair(&chart, r);
        let phi = FormPair::unit(&chart);
        let lhs = ok_or(a.wedge(&b))?.jacobi_differential();
        let t1 = ok_or(a.jacobi_differential().wedge(&b))?;
        let t2 = ok_or(a.wedge(&b.jacobi_differential()))?.times(&sgn(p as i64));
        let t3 = ok_or(ok_or(phi.wedge(&a))?.wedge(&b))?.times(&q(-1, 1));
        cx.keep(lhs.clone());
        ensure(sum_equals(&lhs, &[t1, t2, t3]), || format!("d1 product rule: {a} | {b}"))
    })?;

    Ok(format!("{total} randomized cases over 5 identities"))
}

fn product_charts() -> Vec<HomogeneousSetup> {
    [vec!["x", "t"], vec!["x", "y", "t"]]
        .into_iter()
        .map(|vars| HomogeneousSetup::new(&Chart::with_homogeneity(vars, "t").unwrap()).unwrap())
        .collect()
}

/// A degree-1 homogeneous function `t g(x)` and its restriction `g`.
fn degree_one_function(s: &mut Sampler, setup: &HomogeneousSetup) -> (Scalar, Scalar) {
    let g: Scalar = s.scalar(setup.slice_chart());
    let full = setup.homogeneous_extension(&g).unwrap();
    (full, g)
}

// 3. The reduction preserves brackets of functions and of tensors.
fn criterion_3(cx: &mut Ctx) -> Outcome {
    let mut total = 0;
    for setup in product_charts() {
        let chart = setup.chart().clone();
        let top = MAX_DEGREE.min(chart.dim());
        total += cases(100, |_| {
            let (k, l) = (cx.s.below(top + 1), cx.s.below(top + 1));
            let p: Multivector = cx.s.homogeneous_multivector(&chart, k);
            let qq: Multivector = cx.s.homogeneous_multivector(&chart, l);
            let jp = ok_or(setup.reduce(&p, false))?;
            let jq = ok_or(setup.reduce(&qq, false))?;
            let jnp = ok_or(setup.reduce(&p, true))?;
            let jnq = ok_or(setup.reduce(&qq, true))?;
            ensure(!(jp.homogeneity_violated || jq.homogeneity_violated), || {
                format!("sampler produced a non-homogeneous tensor {p}")
            })?;
            let (jp, jq, jnp, jnq) = (jp.value, jq.value, jnp.value, jnq.value);

            // (a), on U and restricted to the slice
            let fs: Vec<(Scalar, Scalar)> = (0..k).map(|_| degree_one_function(&mut cx.s, &setup)).collect();
            let full: Vec<Scalar> = fs.iter().map(|f| f.0.clone()).collect();
            let slice: Vec<Scalar> = fs.iter().map(|f| f.1.clone()).collect();
            let on_p = oracles::multibracket(&p, &full);
            ensure(on_p == oracles::op_bracket(&jp, &full), || format!("(a) for J: P = {p}"))?;
            ensure(on_p == ok_or(jp.apply(&full))?, || format!("(a) library bracket: P = {p}"))?;
            let restricted = ok_or(ok_or(on_p.specialize(setup.t_index(), &q(1, 1)))?.transport(setup.slice_chart()))?;
            ensure(restricted == oracles::op_bracket(&jnp, &slice), || format!("(a) for J_N: P = {p}"))?;

            // (b)
            let pq = ok_or(p.sn_bracket(&qq))?;
            let lhs = ok_or(jp.sj_bracket(&jq))?;
            let rhs = ok_or(setup.reduce(&pq, false))?.value;
            ensure(sum_equals(&lhs, &[rhs]), || format!("(b) for J: P = {p}, Q = {qq}"))?;
            let lhs_n = ok_or(jnp.sj_bracket(&jnq))?;
            let rhs_n = ok_or(setup.reduce(&pq, true))?.value;
            ensure(sum_equals(&lhs_n, &[rhs_n]), || format!("(b) for J_N: P = {p}, Q = {qq}"))?;

            cx.keep(p);
            cx.keep(jp);
            cx.keep(jnp);
            cx.keep(lhs_n);
            Ok(())
        })?;
    }
    Ok(format!("{total} randomized pairs on 2 charts"))
}

// 4. Poissonization inverts the restricted reduction.
fn criterion_4(cx: &mut Ctx) -> Outcome {
    let mut total = 0;
    for setup in product_charts() {
        let chart = setup.chart().clone();
        let slice = setup.slice_chart().clone();
        let t = setup.t_index();
        for k in 0..=MAX_DEGREE.min(chart.dim()) {
            total += cases(100, |_| {
                let p: Multivector = cx.s.homogeneous_multivector(&chart, k);
                let d = ok_or(setup.reduce(&p, true))?.value;
                ensure(ok_or(setup.poissonize(&d))? == p, || format!("poissonize(J_N P) != P for {p}"))?;

                if k > slice.dim() + 1 {
                    return Ok(());
                }
                let e: FirstOrderOp = cx.s.split_pair(&slice, k);
                let back = ok_or(setup.poissonize(&e))?;
                ensure(ok_or(setup.reduce(&back, true))?.value == e, || format!("J_N(poissonize D) != D for {e}"))?;

                // t^(1-k) (P0 + t@t ^ P1), assembled term by term
                let mut expected = Multivector::zero(&chart, k);
                let scale = ok_or(Laurent::variable_at(&chart, t).pow(1 - k as i32))?;
                for (idx, c) in e.first().terms() {
                    let c = ok_or(c.transport(&chart))?;
                    let term = Multivector::basis(&chart, idx).scale(&(&scale * &c));
                    expected = ok_or(expected.checked_add(&term))?;
                }
                if let Some(p1) = e.second() {
                    let t_dt = Multivector::basis(&chart, &[t]).scale(&Laurent::variable_at(&chart, t));
                    for (idx, c) in p1.terms() {
                        let c = ok_or(c.transport(&chart))?;
                        let term = ok_or(t_dt.wedge(&Multivector::basis(&chart, idx)))?.scale(&(&scale * &c));
                        expected = ok_or(expected.checked_add(&term))?;
                    }
                }
                ensure(back == expected, || format!("poissonize({e}) = {back}, expected {expected}"))?;
                cx.keep(e);
                cx.keep(back);
                Ok(())
            })?;
        }
    }
    Ok(format!("{total} randomized cases, k = 0..3, 2 charts"))
}

// 5. The canonical Poisson structure on R^4.
fn criterion_5(cx: &mut Ctx) -> Outcome {
    let chart = Chart::new(["q1", "p1", "q2", "p2"]).unwrap();
    let v = |i| Laurent::variable_at(&chart, i);
    let basis = |i| Multivector::basis(&chart, &[i]);
    let lambda = ok_or(ok_or(basis(0).wedge(&basis(1)))?.checked_add(&ok_or(basis(2).wedge(&basis(3)))?))?;
    let half = q(1, 2);
    let delta = Multivector::vector_field(&chart, (0..4).map(|i| (i, v(i).scale(&half))));
    let h = (0..4).map(|i| v(i) * v(i)).fold(Laurent::zero(&chart), |a, b| a + b).scale(&half);

    let cert = ok_or(is_poisson(&lambda))?;
    ensure(cert.holds, || format!("[[L, L]] = {}", cert.obstruction))?;
    let deg = ok_or(degree(&lambda, &delta))?;
    ensure(deg == Homogeneity::Degree(q(-1, 1)), || format!("degree(L) = {deg}"))?;
    let ham = ok_or(hamiltonian_poisson(&lambda, &h))?;
    let expected = Multivector::vector_field(&chart, [(0, v(1)), (1, -v(0)), (2, v(3)), (3, -v(2))]);
    ensure(ham == expected, || format!("H_H = {ham}"))?;
    cx.keep(lambda);
    cx.keep(delta);
    cx.keep(h);
    cx.keep(ham);
    Ok("poisson, degree -1, Hamiltonian field".into())
}

// 6. Contact reduction of dt^dx.
fn criterion_6(cx: &mut Ctx) -> Outcome {
    let setup = HomogeneousSetup::new(&Chart::with_homogeneity(["x", "t"], "t").unwrap()).unwrap();
    let chart = setup.chart().clone();
    let slice = setup.slice_chart().clone();
    let omega = ok_or(DiffForm::basis(&chart, &[1]).wedge(&DiffForm::basis(&chart, &[0])))?;

    let deg = ok_or(degree(&omega, setup.delta()))?;
    ensure(deg == Homogeneity::Degree(q(1, 1)), || format!("degree(omega) = {deg}"))?;
    let lambda = ok_or(invert_symplectic(&omega))?;
    let cd = ok_or(contact_reduce(&omega, &setup))?;
    ensure(cd.eta == DiffForm::basis(&slice, &[0]), || format!("eta = {}", cd.eta))?;
    let pullback = ok_or(setup.psi(&omega, true))?.value.first().clone();
    ensure(cd.eta.exterior_derivative() == pullback, || "d eta != j* omega".into())?;
    ensure(cd.reeb == Multivector::basis(&slice, &[0]), || format!("reeb = {}", cd.reeb))?;

    let n = cases(50, |_| {
        let f: Scalar = cx.s.polynomial_in(&slice, &[0]);
        let g: Scalar = cx.s.polynomial_in(&slice, &[0]);
        let contact = ok_or(cd.bracket(&f, &g))?;
        let by_hand = &f * &g.partial(0) - &g * &f.partial(0);
        let poisson = ok_or(reduced_poisson_bracket(&lambda, &setup, &f, &g))?;
        ensure(contact == by_hand, || format!("contact side: {{{f}, {g}}} = {contact}"))?;
        ensure(poisson == by_hand, || format!("Poisson side: {{{f}, {g}}} = {poisson}"))?;
        cx.keep(contact);
        Ok(())
    })?;
    cx.keep(omega);
    cx.keep(lambda);
    cx.keep(cd.eta.clone());
    cx.keep(cd.reeb.clone());
    Ok(format!("eta = dx, reeb = @x, {n} bracket pairs"))
}

// 7. Psi intertwines d with d1.
fn criterion_7(cx: &mut Ctx) -> Outcome {
    let mut total = 0;
    for setup in product_charts() {
        let chart = setup.chart().clone();
        let top = (chart.dim() - 1).min(MAX_DEGREE);
        total += cases(100, |_| {
            let k = cx.s.below(top + 1);
            let a: DiffForm = cx.s.homogeneous_form(&chart, k);
            let da = a.exterior_derivative();
            for restrict in [false, true] {
                let lhs = ok_or(setup.psi(&da, restrict))?;
                let rhs = ok_or(setup.psi(&a, restrict))?;
                ensure(!lhs.homogeneity_violated && !rhs.homogeneity_violated, || {
                    format!("sampler produced a non-homogeneous form {a}")
                })?;
                let d1 = rhs.value.jacobi_differential();
                ensure(sum_equals(&lhs.value, &[d1]), || format!("Psi(d a) != d1 Psi(a), restrict {restrict}: {a}"))?;
                cx.keep(rhs.value);
            }
            Ok(())
        })?;
    }
    Ok(format!("{total} randomized forms on 2 charts, Psi and Psi_N"))
}

// 8. Nambu checks, validated against the brute-force fundamental identity.
fn criterion_8(cx: &mut Ctx) -> Outcome {
    let xyz = Chart::new(["x", "y", "z"]).unwrap();
    let top = ok_or(Multivector::basis(&xyz, &[0]).wedge(&Multivector::basis(&xyz, &[1, 2])))?;
    let family = default_test_functions(&xyz);
    let report = ok_or(nambu_check(&top, &family))?;
    ensure(report.holds, || "@x^@y^@z rejected".into())?;
    let oracle = oracles::fundamental_identity_counterexample(&FirstOrderOp::embed(&top), &oracles::coordinate_family(&xyz), &[]);
    ensure(oracle.is_none(), || "oracle rejects @x^@y^@z".into())?;
    cx.keep(top);

    let six = Chart::new(["x1", "x2", "x3", "x4", "x5", "x6"]).unwrap();
    let split = ok_or(Multivector::basis(&six, &[0, 1, 2]).checked_add(&Multivector::basis(&six, &[3, 4, 5])))?;
    let report = ok_or(nambu_check(&split, &default_test_functions(&six)))?;
    ensure(!report.holds, || "@1^@2^@3 + @4^@5^@6 accepted".into())?;
    let witness = report.witness.clone().ok_or("no witness")?;
    let shown: Vec<String> = witness.iter().map(ToString::to_string).collect();
    println!("    witness for @x1^@x2^@x3 + @x4^@x5^@x6: {}", shown.join(", "));
    let oracle = oracles::fundamental_identity_counterexample(
        &FirstOrderOp::embed(&split),
        &oracles::coordinate_family(&six),
        &[witness],
    );
    ensure(oracle.is_some(), || "oracle finds no counterexample for the split tensor".into())?;
    cx.keep(split);

    // homogeneous Nambu tensors on (x, y, z, t) and their reductions
    let setup = HomogeneousSetup::new(&Chart::with_homogeneity(["x", "y", "z", "t"], "t").unwrap()).unwrap();
    let chart = setup.chart().clone();
    let t = Laurent::variable_at(&chart, 3);
    let tinv = ok_or(t.pow(-1))?;
    let candidates = vec![
        Multivector::basis(&chart, &[0, 1, 2]).scale(&ok_or(t.pow(-2))?),
        Multivector::basis(&chart, &[0, 1, 3]).scale(&tinv),
        Multivector::basis(&chart, &[0, 3]),
        ok_or(Multivector::basis(&chart, &[0, 1]).checked_add(&Multivector::basis(&chart, &[1, 2])))?.scale(&tinv),
    ];
    let full_family = default_test_functions(&chart);
    let slice_family = default_test_functions(setup.slice_chart());
    let mut checked = 0;
    for p in candidates {
        ensure(ok_or(nambu_check(&p, &full_family))?.holds, || format!("{p} rejected"))?;
        let embedded = FirstOrderOp::embed(&p);
        let oracle = oracles::fundamental_identity_counterexample(&embedded, &oracles::coordinate_family(&chart), &[]);
        ensure(oracle.is_none(), || format!("oracle rejects {p}"))?;
        let jn = ok_or(setup.reduce(&p, true))?;
        ensure(!jn.homogeneity_violated, || format!("{p} is not homogeneous"))?;
        let jn = jn.value;
        ensure(ok_or(nambu_check(&jn, &slice_family))?.holds, || format!("J_N({p}) = {jn} rejected"))?;
        let oracle = oracles::fundamental_identity_counterexample(&jn, &oracles::coordinate_family(setup.slice_chart()), &[]);
        ensure(oracle.is_none(), || format!("oracle rejects J_N({p}) = {jn}"))?;
        cx.keep(p);
        cx.keep(jn);
        checked += 1;
    }
    Ok(format!("2 fixed examples, {checked} homogeneous tensors and their reductions"))
}

// 9. eta = i_Delta(dq^dp) on the unit circle.
fn criterion_9(cx: &mut Ctx) -> Outcome {
    let chart = Chart::new(["q", "p"]).unwrap();
    let half = q(1, 2);
    let delta = Multivector::vector_field(&chart, (0..2).map(|i| (i, Laurent::variable_at(&chart, i).scale(&half))));
    let omega = ok_or(DiffForm::basis(&chart, &[0]).wedge(&DiffForm::basis(&chart, &[1])))?;
    let eta = ok_or(omega.interior(&delta))?;
    let point = ok_or(Point::new(&chart, [("q", q(3, 5)), ("p", q(4, 5))]))?;
    let at = ok_or(eta.eval_at(&point))?;
    let tangent = Multivector::vector_field(
        &chart,
        [(0, Laurent::constant(&chart, q(-4, 5))), (1, Laurent::constant(&chart, q(3, 5)))],
    );
    let value = ok_or(pairing(&tangent, &at))?;
    ensure(value == Laurent::constant(&chart, q(1, 2)), || format!("eta(v) = {value}"))?;
    cx.keep(eta);
    cx.keep(at);
    cx.keep(value);
    Ok("eta(v) = 1/2".into())
}

/// Golden programs: `NAME.pj` with expected output and status per mode.
fn golden_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run_goldens() -> Result<Vec<i32>, String> {
    let mut codes = Vec::new();
    let mut entries: Vec<_> = std::fs::read_dir(golden_dir())
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "pj"))
        .collect();
    entries.sort();
    for path in entries {
        let src = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        for (mode, ext) in [(Mode::Run, "run"), (Mode::Check, "check")] {
            let expected_path = path.with_extension(format!("{ext}.out"));
            let expected = std::fs::read_to_string(&expected_path)
                .map_err(|e| format!("{}: {e}", expected_path.display()))?;
            let out = run_source(&src, mode);
            let actual = format!("{}[exit {}]\n", out.output, out.status.code());
            ensure(actual == expected, || format!("{} differs in {ext} mode", path.display()))?;
            if mode == Mode::Check {
                codes.push(out.status.code());
            }
        }
    }
    Ok(codes)
}

// 10. Frontend round trip and check exit codes.
fn criterion_10(cx: &mut Ctx) -> Outcome {
    let mut sessions: Vec<Session> = Vec::new();
    for (i, v) in cx.produced.iter().enumerate() {
        let chart = v.chart().ok_or("value without a chart")?;
        let session = match sessions.iter().position(|s| s.chart() == Some(chart)) {
            Some(j) => &sessions[j],
            None => {
                let mut s = Session::new();
                s.declare_chart(chart.clone());
                sessions.push(s);
                sessions.last().unwrap()
            }
        };
        let text = v.to_string();
        let back = session.parse_value(&text).map_err(|e| format!("value {i}: `{text}` does not parse: {e}"))?;
        ensure(back.same_as(v) && back.to_string() == text, || format!("value {i}: `{text}` reads back as `{back}`"))?;
    }
    let codes = run_goldens()?;
    for want in 0..=2 {
        ensure(codes.contains(&want), || format!("no golden program exits with {want}"))?;
    }
    Ok(format!("{} values round-tripped, {} golden programs", cx.produced.len(), codes.len()))
}

fn main() {
    let seed = seed_from_env();
    println!("acceptance suite, seed {seed:#x}");
    let mut cx = Ctx {
        s: Sampler::new(seed),
        produced: Vec::new(),
    };
    let criteria: [Criterion; 10] = [
        ("bracket axioms", criterion_1),
        ("d and d1 are differentials", criterion_2),
        ("reduction preserves brackets", criterion_3),
        ("poissonization is inverse to J_N", criterion_4),
        ("canonical Poisson structure on R^4", criterion_5),
        ("contact reduction of dt^dx", criterion_6),
        ("Psi intertwines d and d1", criterion_7),
        ("Nambu checks", criterion_8),
        ("pointwise contact form on the circle", criterion_9),
        ("frontend round trip and exit codes", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run(&mut cx);
        let ms = start.elapsed().as_millis();
        match result {
            Ok(detail) => println!("PASS criterion {:>2}: {name} ({detail}; {ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
