//! Homogeneity with respect to a vector field `Delta`, and the reduction of
//! `Delta`-homogeneous tensors on a product chart `N x R` (coordinate `t`,
//! `Delta = t@t`, slice `N = {t = 1}`) to operators and form pairs on `N`.
//!
//! The free structure `Delta = d/ds` is the same chart under `t = e^s`:
//! `e^(ns)` becomes `t^n` and `d/ds` becomes `t@t`, so every coefficient
//! stays Laurent.

use std::fmt;

use crate::error::{Error, Result};
use crate::exterior::{DiffForm, Kind, Multivector, SkewTensor};
use crate::jacobi_calculus::{FirstOrderOp, FormPair, SplitPair};
use crate::ring::{int, sign, Chart, Field, Laurent};

/// Outcome of a homogeneity test `L_Delta T = n T`.
#[derive(Clone, Debug, PartialEq)]
pub enum Homogeneity<C> {
    /// The zero tensor; every degree fits.
    Zero,
    Degree(C),
    NotHomogeneous,
}

impl<C: Field> Homogeneity<C> {
    pub fn degree(&self) -> Option<&C> {
        match self {
            Homogeneity::Degree(n) => Some(n),
            _ => None,
        }
    }

    /// True for `Degree(n)` and for the zero tensor.
    pub fn is(&self, n: &C) -> bool {
        match self {
            Homogeneity::Zero => true,
            Homogeneity::Degree(m) => m == n,
            Homogeneity::NotHomogeneous => false,
        }
    }
}

impl<C: Field + fmt::Display> fmt::Display for Homogeneity<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Homogeneity::Zero => f.write_str("zero-tensor"),
            Homogeneity::Degree(n) => write!(f, "{n}"),
            Homogeneity::NotHomogeneous => f.write_str("not homogeneous"),
        }
    }
}

/// Anything with a Lie derivative along a vector field and addressable
/// coefficients.
pub trait Graded<C: Field>: Sized + PartialEq {
    fn lie_along(&self, delta: &Multivector<C>) -> Result<Self>;
    fn scale_by(&self, c: &C) -> Self;
    /// Some coefficient that is nonzero, with a key locating it.
    fn first_coefficient(&self) -> Option<(CoeffKey, Laurent<C>)>;
    fn coefficient_at(&self, key: &CoeffKey) -> Laurent<C>;
}

/// Component number (for split pairs) and index tuple.
pub type CoeffKey = (u8, Vec<usize>);

impl<C: Field> Graded<C> for Laurent<C> {
    fn lie_along(&self, delta: &Multivector<C>) -> Result<Self> {
        delta.apply(self)
    }
    fn scale_by(&self, c: &C) -> Self {
        self.scale(c)
    }
    fn first_coefficient(&self) -> Option<(CoeffKey, Laurent<C>)> {
        (!self.is_zero()).then(|| ((0, vec![]), self.clone()))
    }
    fn coefficient_at(&self, _: &CoeffKey) -> Laurent<C> {
        self.clone()
    }
}

impl<C: Field> Graded<C> for Multivector<C> {
    fn lie_along(&self, delta: &Multivector<C>) -> Result<Self> {
        self.lie_derivative(delta)
    }
    fn scale_by(&self, c: &C) -> Self {
        self.scale_const(c)
    }
    fn first_coefficient(&self) -> Option<(CoeffKey, Laurent<C>)> {
        first_of(self, 0)
    }
    fn coefficient_at(&self, key: &CoeffKey) -> Laurent<C> {
        self.coefficient(&key.1)
    }
}

impl<C: Field> Graded<C> for DiffForm<C> {
    fn lie_along(&self, delta: &Multivector<C>) -> Result<Self> {
        self.lie_derivative(delta)
    }
    fn scale_by(&self, c: &C) -> Self {
        self.scale_const(c)
    }
    fn first_coefficient(&self) -> Option<(CoeffKey, Laurent<C>)> {
        first_of(self, 0)
    }
    fn coefficient_at(&self, key: &CoeffKey) -> Laurent<C> {
        self.coefficient(&key.1)
    }
}

/// `L_Delta D` for an operator is `[[Delta, D]]^1`.
impl<C: Field> Graded<C> for FirstOrderOp<C> {
    fn lie_along(&self, delta: &Multivector<C>) -> Result<Self> {
        if delta.degree() != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: delta.degree() as i64,
            });
        }
        FirstOrderOp::embed(delta).sj_bracket(self)
    }
    fn scale_by(&self, c: &C) -> Self {
        self.scale_const(c)
    }
    fn first_coefficient(&self) -> Option<(CoeffKey, Laurent<C>)> {
        split_first(self)
    }
    fn coefficient_at(&self, key: &CoeffKey) -> Laurent<C> {
        split_coefficient(self, key)
    }
}

/// Componentwise Lie derivative of a form pair.
impl<C: Field> Graded<C> for FormPair<C> {
    fn lie_along(&self, delta: &Multivector<C>) -> Result<Self> {
        self.try_map(|a| a.lie_derivative(delta))
    }
    fn scale_by(&self, c: &C) -> Self {
        self.scale_const(c)
    }
    fn first_coefficient(&self) -> Option<(CoeffKey, Laurent<C>)> {
        split_first(self)
    }
    fn coefficient_at(&self, key: &CoeffKey) -> Laurent<C> {
        split_coefficient(self, key)
    }
}

fn first_of<C: Field, K: Kind>(t: &SkewTensor<C, K>, tag: u8) -> Option<(CoeffKey, Laurent<C>)> {
    t.terms().next().map(|(idx, c)| ((tag, idx.clone()), c.clone()))
}

fn split_first<C: Field, K: Kind>(p: &SplitPair<C, K>) -> Option<(CoeffKey, Laurent<C>)> {
    first_of(p.first(), 0).or_else(|| p.second().and_then(|s| first_of(s, 1)))
}

fn split_coefficient<C: Field, K: Kind>(p: &SplitPair<C, K>, key: &CoeffKey) -> Laurent<C> {
    match key.0 {
        0 => p.first().coefficient(&key.1),
        _ => p.second_or_zero().coefficient(&key.1),
    }
}

/// The unique `n` with `L_Delta T = n T`, if any.
///
/// The candidate is read off one monomial of one nonzero coefficient and
/// then verified against the whole tensor.
pub fn degree<C: Field, T: Graded<C>>(t: &T, delta: &Multivector<C>) -> Result<Homogeneity<C>> {
    let Some((key, coeff)) = t.first_coefficient() else {
        return Ok(Homogeneity::Zero);
    };
    let lie = t.lie_along(delta)?;
    let (mono, c) = coeff.leading_term().expect("nonzero coefficient");
    let n = lie.coefficient_at(&key).coefficient(mono) / c.clone();
    Ok(if lie == t.scale_by(&n) {
        Homogeneity::Degree(n)
    } else {
        Homogeneity::NotHomogeneous
    })
}

/// A product chart `N x R` with `Delta` and `1_N = t`.
#[derive(Clone)]
pub struct HomogeneousSetup<C> {
    chart: Chart,
    slice: Chart,
    t: usize,
    delta: Multivector<C>,
    one_tilde: Laurent<C>,
}

impl<C: Field> HomogeneousSetup<C> {
    /// `Delta = t@t` on a chart with a homogeneity variable.
    pub fn new(chart: &Chart) -> Result<Self> {
        let t = chart.homogeneity_index().ok_or(Error::NoHomogeneityVariable)?;
        let delta = Multivector::vector_field(chart, [(t, Laurent::variable_at(chart, t))]);
        Self::with_delta(chart, delta)
    }

    /// General `Delta`; must be transversal to `t = 1` and make `t` degree 1.
    pub fn with_delta(chart: &Chart, delta: Multivector<C>) -> Result<Self> {
        let t = chart.homogeneity_index().ok_or(Error::NoHomogeneityVariable)?;
        chart.ensure_same(delta.chart())?;
        if delta.degree() != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: delta.degree() as i64,
            });
        }
        if delta.coefficient(&[t]).specialize(t, &C::one())?.is_zero() {
            return Err(Error::NotTransversal);
        }
        let one_tilde = Laurent::variable_at(chart, t);
        if !degree(&one_tilde, &delta)?.is(&C::one()) {
            return Err(Error::NotHomogeneous("t must be homogeneous of degree 1".into()));
        }
        Ok(HomogeneousSetup {
            chart: chart.clone(),
            slice: chart.slice()?,
            t,
            delta,
            one_tilde,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn slice_chart(&self) -> &Chart {
        &self.slice
    }

    pub fn delta(&self) -> &Multivector<C> {
        &self.delta
    }

    pub fn one_tilde(&self) -> &Laurent<C> {
        &self.one_tilde
    }

    pub fn t_index(&self) -> usize {
        self.t
    }

    fn t(&self) -> Laurent<C> {
        self.one_tilde.clone()
    }

    fn t_pow(&self, n: i64) -> Laurent<C> {
        self.t().pow(n as i32).expect("t is a unit")
    }

    fn ensure_product(&self) -> Result<()> {
        let canonical = Multivector::vector_field(&self.chart, [(self.t, self.t())]);
        if self.delta == canonical {
            Ok(())
        } else {
            Err(Error::DeltaNotProduct)
        }
    }

    /// `P = P0 + Delta ^ P1` with `P0`, `P1` free of `@t`.
    pub fn decompose(&self, p: &Multivector<C>) -> Result<(Multivector<C>, Multivector<C>)> {
        self.ensure_product()?;
        self.chart.ensure_same(p.chart())?;
        let t = self.t;
        let k = p.degree();
        let tinv = self.t_pow(-1);
        let p0 = p.retain_terms(|idx| !idx.contains(&t));
        let mut p1 = Vec::new();
        for (idx, c) in p.terms() {
            if let Some(pos) = idx.iter().position(|&i| i == t) {
                // e_I = (-1)^pos @t ^ e_{I\t}
                let mut rest = idx.clone();
                rest.remove(pos);
                let c = (c * &tinv).scale(&sign(pos));
                p1.push((rest, c));
            }
        }
        let p1 = match k {
            0 => Multivector::zero(&self.chart, 0),
            _ => Multivector::from_terms(&self.chart, k - 1, p1)?,
        };
        Ok((p0, p1))
    }

    /// `J(P) = P0 + I ^ P1` on the chart, or `J_N(P) = J(P)|_N`.
    pub fn reduce(&self, p: &Multivector<C>, restrict_to_slice: bool) -> Result<Reduced<FirstOrderOp<C>>> {
        let (p0, p1) = self.decompose(p)?;
        let op = FirstOrderOp::from_parts(p0, p1)?;
        let op = if restrict_to_slice {
            op.restrict_to_slice()?
        } else {
            op
        };
        let required = int::<C>(1) - int::<C>(p.degree() as i64);
        let homogeneity_violated = !degree(p, &self.delta)?.is(&required);
        Ok(Reduced {
            value: op,
            homogeneity_violated,
        })
    }

    /// Inverse of `J_N`: `t^(1-k) (P0 + t@t ^ P1)` with `P0`, `P1` extended
    /// independently of `t`.
    pub fn poissonize(&self, d: &FirstOrderOp<C>) -> Result<Multivector<C>> {
        self.ensure_product()?;
        self.slice.ensure_same(d.chart())?;
        let k = d.degree() as i64;
        let p0 = d.first().transport(&self.chart)?;
        let mut p = p0;
        if let Some(p1) = d.second() {
            let p1 = p1.transport(&self.chart)?;
            p = p.checked_add(&self.delta.wedge(&p1)?)?;
        }
        Ok(p.scale(&self.t_pow(1 - k)))
    }

    /// `Psi(a) = (a0, a1)` with `a = t (a0 + dt/t ^ a1)` and
    /// `i_Delta a0 = 0 = i_Delta a1`, or `Psi_N(a) = (j*a, j*(i_Delta a))`.
    pub fn psi(&self, alpha: &DiffForm<C>, restrict_to_slice: bool) -> Result<Reduced<FormPair<C>>> {
        self.ensure_product()?;
        self.chart.ensure_same(alpha.chart())?;
        let k = alpha.degree();
        let contracted = if k == 0 {
            DiffForm::zero(&self.chart, 0)
        } else {
            alpha.interior(&self.delta)?
        };
        let pair = if restrict_to_slice {
            let first = alpha.restrict_to_slice()?;
            FormPair::from_parts(first, contracted.restrict_to_slice()?)?
        } else {
            let tinv = self.t_pow(-1);
            let a1 = contracted.scale(&tinv);
            let dlog = DiffForm::differential(&self.t()).scale(&tinv);
            let a0 = if k == 0 {
                alpha.scale(&tinv)
            } else {
                alpha.scale(&tinv).checked_sub(&dlog.wedge(&a1)?)?
            };
            FormPair::from_parts(a0, a1)?
        };
        let homogeneity_violated = !degree(alpha, &self.delta)?.is(&C::one());
        Ok(Reduced {
            value: pair,
            homogeneity_violated,
        })
    }

    /// The degree-1 extension `t * f` of a function on the slice.
    pub fn homogeneous_extension(&self, f: &Laurent<C>) -> Result<Laurent<C>> {
        self.slice.ensure_same(f.chart())?;
        Ok(self.t() * f.transport(&self.chart)?)
    }

    /// Default function family for the bracket characterisation: degree-0
    /// functions `1, x_i, x_i x_j` and degree-1 functions `t, t x_i, t x_i x_j`.
    pub fn default_generators(&self) -> Vec<Laurent<C>> {
        let chart = &self.chart;
        let slice_vars: Vec<usize> = (0..chart.dim()).filter(|&i| i != self.t).collect();
        let mut deg0 = vec![Laurent::one(chart)];
        for &i in &slice_vars {
            deg0.push(Laurent::variable_at(chart, i));
        }
        for (a, &i) in slice_vars.iter().enumerate() {
            for &j in &slice_vars[a..] {
                deg0.push(Laurent::variable_at(chart, i) * Laurent::variable_at(chart, j));
            }
        }
        let deg1: Vec<Laurent<C>> = deg0.iter().map(|f| f * &self.t()).collect();
        deg0.into_iter().chain(deg1).collect()
    }
}

impl<C: Field> fmt::Debug for HomogeneousSetup<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HomogeneousSetup")
            .field("chart", &self.chart)
            .field("delta", &self.delta)
            .finish()
    }
}

/// A reduction result, flagged when the input violated the homogeneity
/// hypothesis (the map is still defined, but the bracket correspondence
/// no longer holds).
#[derive(Clone, Debug, PartialEq)]
pub struct Reduced<T> {
    pub value: T,
    pub homogeneity_violated: bool,
}

/// Result of the bracket characterisation of homogeneity.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketDegreeReport<C> {
    /// Implied degree; `Zero` when every bracket vanished.
    pub implied: Homogeneity<C>,
    pub tuples_checked: usize,
    pub nonzero_brackets: usize,
}

/// Tensors whose `k`-ary bracket on functions is defined.
pub trait BracketOnFunctions<C: Field> {
    fn arity(&self) -> usize;
    fn bracket(&self, fs: &[Laurent<C>]) -> Result<Laurent<C>>;
    /// Whether degree-0 test functions are admissible.
    fn accepts_invariants(&self) -> bool;
}

impl<C: Field> BracketOnFunctions<C> for Multivector<C> {
    fn arity(&self) -> usize {
        self.degree()
    }
    fn bracket(&self, fs: &[Laurent<C>]) -> Result<Laurent<C>> {
        self.bracket_of_functions(fs)
    }
    fn accepts_invariants(&self) -> bool {
        false
    }
}

impl<C: Field> BracketOnFunctions<C> for FirstOrderOp<C> {
    fn arity(&self) -> usize {
        self.degree()
    }
    fn bracket(&self, fs: &[Laurent<C>]) -> Result<Laurent<C>> {
        self.apply(fs)
    }
    fn accepts_invariants(&self) -> bool {
        true
    }
}

/// Homogeneity read off the `k`-ary bracket: `{f_1..f_k}_T` must be
/// homogeneous of degree `n + deg f_1 + .. + deg f_k` for homogeneous test
/// functions. Multivectors are probed with degree-1 functions only,
/// operators with degree-0 and degree-1 functions. Every nonzero bracket
/// must imply the same `n`.
///
/// This is a finite check over `generators`; it is cross-validated against
/// [`degree`] rather than used as a definition.
pub fn degree_via_brackets<C: Field, T: BracketOnFunctions<C>>(
    tensor: &T,
    setup: &HomogeneousSetup<C>,
    generators: &[Laurent<C>],
) -> Result<BracketDegreeReport<C>> {
    let delta = setup.delta();
    let mut family = Vec::new();
    for g in generators {
        if let Homogeneity::Degree(n) = degree(g, delta)? {
            let admissible = n == C::one() || (tensor.accepts_invariants() && n.is_zero());
            if admissible {
                family.push((g.clone(), n));
            }
        }
    }
    let k = tensor.arity();
    let mut implied: Option<C> = None;
    let mut report = BracketDegreeReport {
        implied: Homogeneity::Zero,
        tuples_checked: 0,
        nonzero_brackets: 0,
    };
    for combo in combinations(family.len(), k) {
        report.tuples_checked += 1;
        let fs: Vec<Laurent<C>> = combo.iter().map(|&i| family[i].0.clone()).collect();
        let shift = combo
            .iter()
            .fold(C::zero(), |acc, &i| acc + family[i].1.clone());
        let b = tensor.bracket(&fs)?;
        match degree(&b, delta)? {
            Homogeneity::Zero => {}
            Homogeneity::NotHomogeneous => {
                report.implied = Homogeneity::NotHomogeneous;
                return Ok(report);
            }
            Homogeneity::Degree(m) => {
                report.nonzero_brackets += 1;
                let n = m - shift;
                match &implied {
                    None => implied = Some(n),
                    Some(prev) if *prev == n => {}
                    Some(_) => {
                        report.implied = Homogeneity::NotHomogeneous;
                        return Ok(report);
                    }
                }
            }
        }
    }
    report.implied = implied.map_or(Homogeneity::Zero, Homogeneity::Degree);
    Ok(report)
}

/// All increasing `k`-subsets of `0..n`.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}
