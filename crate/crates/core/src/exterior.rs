//! Sparse skew tensors on a chart: multivector fields and differential forms.
//!
//! A tensor of degree `k` maps strictly increasing index tuples of length `k`
//! to nonzero Laurent coefficients. Both kinds share one representation,
//! [`SkewTensor`], distinguished by a zero-sized [`Kind`] marker.
//!
//! Interior products contract the first slot:
//! `i_v(e_1 ^ .. ^ e_k) = sum_j (-1)^(j-1) <v, e_j> e_1 ^ .. ^ ^e_j ^ .. ^ e_k`.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::ring::{Chart, Field, Laurent, Point};

/// Tensor kind marker.
pub trait Kind: Copy + Default + Eq + fmt::Debug + Send + Sync + 'static {
    type Dual: Kind<Dual = Self>;
    /// Prefix used when printing basis elements (`@x` or `dx`).
    const PREFIX: &'static str;
    const IS_FORM: bool;
}

#[derive(Clone, Copy, Default, PartialEq, Eq, Debug)]
pub struct Vectors;

#[derive(Clone, Copy, Default, PartialEq, Eq, Debug)]
pub struct Forms;

impl Kind for Vectors {
    type Dual = Forms;
    const PREFIX: &'static str = "@";
    const IS_FORM: bool = false;
}

impl Kind for Forms {
    type Dual = Vectors;
    const PREFIX: &'static str = "d";
    const IS_FORM: bool = true;
}

#[derive(Clone, PartialEq)]
pub struct SkewTensor<C, K> {
    chart: Chart,
    degree: usize,
    terms: BTreeMap<Vec<usize>, Laurent<C>>,
    kind: PhantomData<K>,
}

pub type Multivector<C> = SkewTensor<C, Vectors>;
pub type DiffForm<C> = SkewTensor<C, Forms>;

/// Sorts `idx` in place; returns the permutation parity, or `None` on a repeat.
fn sort_with_parity(idx: &mut [usize]) -> Option<usize> {
    let mut swaps = 0;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(swaps)
    }
}

/// Merges two increasing tuples; `None` if they share an index.
fn merge(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, usize)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j, mut inversions) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                inversions += a.len() - i;
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => return None,
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, inversions))
}

impl<C: Field, K: Kind> SkewTensor<C, K> {
    pub fn zero(chart: &Chart, degree: usize) -> Self {
        SkewTensor {
            chart: chart.clone(),
            degree,
            terms: BTreeMap::new(),
            kind: PhantomData,
        }
    }

    /// Degree-0 tensor with the given coefficient.
    pub fn scalar(f: Laurent<C>) -> Self {
        let mut out = Self::zero(f.chart(), 0);
        out.add_term(vec![], f);
        out
    }

    /// `e_{i1} ^ .. ^ e_{ik}` in the given (not necessarily sorted) order.
    pub fn basis(chart: &Chart, indices: &[usize]) -> Self {
        let mut out = Self::zero(chart, indices.len());
        out.add_term(indices.to_vec(), Laurent::one(chart));
        out
    }

    pub fn basis_by_names(chart: &Chart, names: &[&str]) -> Result<Self> {
        let idx = names
            .iter()
            .map(|n| chart.var_index(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::basis(chart, &idx))
    }

    pub fn from_terms(
        chart: &Chart,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, Laurent<C>)>,
    ) -> Result<Self> {
        let mut out = Self::zero(chart, degree);
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree as i64,
                    found: idx.len() as i64,
                });
            }
            if idx.iter().any(|&i| i >= chart.dim()) {
                return Err(Error::InvalidChart(format!("index out of range in {idx:?}")));
            }
            chart.ensure_same(c.chart())?;
            out.add_term(idx, c);
        }
        Ok(out)
    }

    /// Adds `c * e_idx`, normalising the order of `idx` (repeats vanish).
    fn add_term(&mut self, mut idx: Vec<usize>, c: Laurent<C>) {
        debug_assert_eq!(idx.len(), self.degree);
        if c.is_zero() {
            return;
        }
        let Some(parity) = sort_with_parity(&mut idx) else {
            return;
        };
        let c = if parity % 2 == 1 { -c } else { c };
        match self.terms.remove(&idx) {
            Some(existing) => {
                let sum = existing + c;
                if !sum.is_zero() {
                    self.terms.insert(idx, sum);
                }
            }
            None => {
                self.terms.insert(idx, c);
            }
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Laurent<C>)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, idx: &[usize]) -> Laurent<C> {
        self.terms
            .get(idx)
            .cloned()
            .unwrap_or_else(|| Laurent::zero(&self.chart))
    }

    /// The coefficient of a degree-0 tensor.
    pub fn as_scalar(&self) -> Option<Laurent<C>> {
        (self.degree == 0).then(|| self.coefficient(&[]))
    }

    fn ensure_compatible<K2>(&self, other: &SkewTensor<C, K2>) -> Result<()> {
        self.chart.ensure_same(&other.chart)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.ensure_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree as i64,
                found: other.degree as i64,
            });
        }
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.add_term(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn scale(&self, f: &Laurent<C>) -> Self {
        assert!(self.chart == *f.chart(), "scaling across charts");
        self.map_coefficients(|c| c * f)
    }

    pub fn scale_const(&self, c: &C) -> Self {
        self.map_coefficients(|x| x.scale(c))
    }

    fn map_coefficients(&self, f: impl Fn(&Laurent<C>) -> Laurent<C>) -> Self {
        let mut out = Self::zero(&self.chart, self.degree);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), f(c));
        }
        out
    }

    fn try_map_coefficients(&self, f: impl Fn(&Laurent<C>) -> Result<Laurent<C>>) -> Result<Self> {
        let mut out = Self::zero(&self.chart, self.degree);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.ensure_compatible(other)?;
        let mut out = Self::zero(&self.chart, self.degree + other.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((idx, inv)) = merge(a, b) {
                    let c = ca * cb;
                    out.add_term(idx, if inv % 2 == 1 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Interior product with a degree-1 tensor of the dual kind, first slot.
    pub fn interior(&self, v: &SkewTensor<C, K::Dual>) -> Result<Self> {
        self.ensure_compatible(v)?;
        if v.degree != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: v.degree as i64,
            });
        }
        if self.degree == 0 {
            return Ok(Self::zero(&self.chart, 0));
        }
        let mut out = Self::zero(&self.chart, self.degree - 1);
        for (idx, c) in &self.terms {
            for (pos, &i) in idx.iter().enumerate() {
                let vi = v.coefficient(&[i]);
                if vi.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(pos);
                let term = c * &vi;
                out.add_term(rest, if pos % 2 == 1 { -term } else { term });
            }
        }
        Ok(out)
    }

    /// Specialises every coefficient at `point` (constant-coefficient result).
    pub fn eval_at(&self, point: &Point<C>) -> Result<Self> {
        let chart = self.chart.clone();
        self.try_map_coefficients(|c| Ok(Laurent::constant(&chart, c.evaluate(point)?)))
    }

    pub fn specialize(&self, var: usize, value: &C) -> Result<Self> {
        self.try_map_coefficients(|c| c.specialize(var, value))
    }

    /// Moves the tensor to another chart, matching variables by name.
    pub fn transport(&self, target: &Chart) -> Result<Self> {
        if &self.chart == target {
            return Ok(self.clone());
        }
        let mut out = Self::zero(target, self.degree);
        for (idx, c) in &self.terms {
            let mapped = idx
                .iter()
                .map(|&i| {
                    let name = self.chart.name(i);
                    target
                        .index_of(name)
                        .ok_or_else(|| Error::UnknownVariable(name.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            out.add_term(mapped, c.transport(target)?);
        }
        Ok(out)
    }

    /// True when no index or coefficient involves variable `var`.
    pub fn depends_on(&self, var: usize) -> bool {
        self.terms
            .iter()
            .any(|(idx, c)| idx.contains(&var) || c.depends_on(var))
    }

    /// Coefficients depend on `var` (indices ignored).
    pub fn coefficients_depend_on(&self, var: usize) -> bool {
        self.terms.values().any(|c| c.depends_on(var))
    }

    pub(crate) fn retain_terms(&self, keep: impl Fn(&[usize]) -> bool) -> Self {
        let mut out = self.clone();
        out.terms.retain(|idx, _| keep(idx));
        out
    }
}

impl<C: Field> Multivector<C> {
    /// `sum_i a_i @x_i` from `(index, coefficient)` pairs.
    pub fn vector_field(chart: &Chart, components: impl IntoIterator<Item = (usize, Laurent<C>)>) -> Self {
        let mut out = Self::zero(chart, 1);
        for (i, c) in components {
            out.add_term(vec![i], c);
        }
        out
    }

    /// `X(f)` for a vector field `X`.
    pub fn apply(&self, f: &Laurent<C>) -> Result<Laurent<C>> {
        if self.degree != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: self.degree as i64,
            });
        }
        self.chart.ensure_same(f.chart())?;
        let comps: Vec<(usize, &Laurent<C>)> = self.terms.iter().map(|(k, c)| (k[0], c)).collect();
        Ok(f.apply_vector(&comps))
    }

    /// Right derivative with respect to the odd coordinate dual to `@x_i`.
    fn odd_derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.chart, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (idx, c) in &self.terms {
            if let Some(pos) = idx.iter().position(|&j| j == i) {
                let mut rest = idx.clone();
                rest.remove(pos);
                let moves = self.degree - 1 - pos;
                out.add_term(rest, if moves % 2 == 1 { -c.clone() } else { c.clone() });
            }
        }
        out
    }

    /// Partial derivative of every coefficient along `x_i`.
    fn coefficient_derivative(&self, i: usize) -> Self {
        self.map_coefficients(|c| c.partial(i))
    }

    /// Schouten-Nijenhuis bracket, degree `p + q - 1`.
    ///
    /// Realised as the canonical odd Poisson bracket on the chart:
    /// `[[P,Q]] = sum_i  dP/dth_i ^ d_i Q - (-1)^((p-1)(q-1)) dQ/dth_i ^ d_i P`,
    /// with right derivatives in the odd variables. On functions the bracket
    /// is zero (returned with degree 0).
    pub fn sn_bracket(&self, other: &Self) -> Result<Self> {
        self.ensure_compatible(other)?;
        let (p, q) = (self.degree, other.degree);
        let mut out = Self::zero(&self.chart, (p + q).saturating_sub(1));
        if p + q == 0 {
            return Ok(out);
        }
        let swap_odd = ((p as i64 - 1) * (q as i64 - 1)).rem_euclid(2) == 1;
        for i in 0..self.chart.dim() {
            if p > 0 {
                let a = self.odd_derivative(i);
                if !a.is_zero() {
                    let b = other.coefficient_derivative(i);
                    out = out.checked_add(&a.wedge(&b)?)?;
                }
            }
            if q > 0 {
                let a = other.odd_derivative(i);
                if !a.is_zero() {
                    let b = self.coefficient_derivative(i);
                    let term = a.wedge(&b)?;
                    out = if swap_odd {
                        out.checked_add(&term)?
                    } else {
                        out.checked_sub(&term)?
                    };
                }
            }
        }
        Ok(out)
    }

    /// `L_X P = [[X, P]]`.
    pub fn lie_derivative(&self, x: &Multivector<C>) -> Result<Self> {
        ensure_vector_field(x)?;
        x.sn_bracket(self)
    }

    /// `{f_1, .., f_k}_P = <P, df_1 ^ .. ^ df_k>`.
    pub fn bracket_of_functions(&self, fs: &[Laurent<C>]) -> Result<Laurent<C>> {
        if fs.len() != self.degree {
            return Err(Error::Arity {
                expected: self.degree,
                found: fs.len(),
            });
        }
        let mut w = DiffForm::scalar(Laurent::one(&self.chart));
        for f in fs {
            self.chart.ensure_same(f.chart())?;
            w = w.wedge(&DiffForm::differential(f))?;
        }
        pairing(self, &w)
    }

    /// Restriction to the slice `t = 1`; requires tangency (no `@t`).
    pub fn restrict_to_slice(&self) -> Result<Self> {
        let t = self.chart.homogeneity_index().ok_or(Error::NoHomogeneityVariable)?;
        if self.terms.keys().any(|idx| idx.contains(&t)) {
            return Err(Error::NotTangent(self.chart.name(t).to_string()));
        }
        self.specialize(t, &C::one())?.transport(&self.chart.slice()?)
    }
}

impl<C: Field> DiffForm<C> {
    pub fn differential(f: &Laurent<C>) -> Self {
        let chart = f.chart();
        let mut out = Self::zero(chart, 1);
        for i in 0..chart.dim() {
            out.add_term(vec![i], f.partial(i));
        }
        out
    }

    pub fn exterior_derivative(&self) -> Self {
        let mut out = Self::zero(&self.chart, self.degree + 1);
        for (idx, c) in &self.terms {
            for i in 0..self.chart.dim() {
                if idx.contains(&i) {
                    continue;
                }
                let d = c.partial(i);
                if d.is_zero() {
                    continue;
                }
                let mut full = Vec::with_capacity(idx.len() + 1);
                full.push(i);
                full.extend_from_slice(idx);
                out.add_term(full, d);
            }
        }
        out
    }

    /// Cartan: `L_X a = i_X da + d(i_X a)`.
    pub fn lie_derivative(&self, x: &Multivector<C>) -> Result<Self> {
        ensure_vector_field(x)?;
        let a = self.exterior_derivative().interior(x)?;
        if self.degree == 0 {
            return Ok(a);
        }
        a.checked_add(&self.interior(x)?.exterior_derivative())
    }

    /// Pullback to the slice `t = 1`: `dt` components are discarded.
    pub fn restrict_to_slice(&self) -> Result<Self> {
        let t = self.chart.homogeneity_index().ok_or(Error::NoHomogeneityVariable)?;
        self.retain_terms(|idx| !idx.contains(&t))
            .specialize(t, &C::one())?
            .transport(&self.chart.slice()?)
    }
}

fn ensure_vector_field<C: Field>(x: &Multivector<C>) -> Result<()> {
    if x.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: x.degree() as i64,
        });
    }
    Ok(())
}

/// Full contraction `<P, a>` of equal-degree tensors; dual bases pair to
/// `det(delta)`, which for increasing tuples is 1 on equal tuples.
pub fn pairing<C: Field>(p: &Multivector<C>, a: &DiffForm<C>) -> Result<Laurent<C>> {
    p.chart.ensure_same(&a.chart)?;
    if p.degree != a.degree {
        return Err(Error::DegreeMismatch {
            expected: p.degree as i64,
            found: a.degree as i64,
        });
    }
    let mut total = Laurent::zero(&p.chart);
    for (idx, c) in &p.terms {
        if let Some(d) = a.terms.get(idx) {
            total = total + c * d;
        }
    }
    Ok(total)
}

macro_rules! tensor_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<C: Field, K: Kind> $trait<&SkewTensor<C, K>> for &SkewTensor<C, K> {
            type Output = SkewTensor<C, K>;
            fn $method(self, rhs: &SkewTensor<C, K>) -> SkewTensor<C, K> {
                self.$checked(rhs).expect("tensor arithmetic: chart or degree mismatch")
            }
        }
        impl<C: Field, K: Kind> $trait<SkewTensor<C, K>> for SkewTensor<C, K> {
            type Output = SkewTensor<C, K>;
            fn $method(self, rhs: SkewTensor<C, K>) -> SkewTensor<C, K> {
                (&self).$method(&rhs)
            }
        }
    };
}

tensor_binop!(Add, add, checked_add);
tensor_binop!(Sub, sub, checked_sub);

impl<C: Field, K: Kind> Neg for &SkewTensor<C, K> {
    type Output = SkewTensor<C, K>;
    fn neg(self) -> SkewTensor<C, K> {
        self.map_coefficients(|c| -c)
    }
}

impl<C: Field, K: Kind> Neg for SkewTensor<C, K> {
    type Output = SkewTensor<C, K>;
    fn neg(self) -> SkewTensor<C, K> {
        -&self
    }
}

impl<C: Field + fmt::Display, K: Kind> SkewTensor<C, K> {
    fn fmt_basis(&self, idx: &[usize]) -> String {
        idx.iter()
            .map(|&i| format!("{}{}", K::PREFIX, self.chart.name(i)))
            .collect::<Vec<_>>()
            .join("^")
    }
}

/// Canonical text: `-1 @q^@p`, `(1 p + 1 q) dx`, `0 : deg 2`, `0 : deg 2 form`.
impl<C: Field + fmt::Display, K: Kind> fmt::Display for SkewTensor<C, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            if self.degree == 0 {
                return f.write_str("0");
            }
            let suffix = if K::IS_FORM { " form" } else { "" };
            return write!(f, "0 : deg {}{suffix}", self.degree);
        }
        for (n, (idx, c)) in self.terms.iter().enumerate() {
            let coeff = if c.len() == 1 {
                c.to_string()
            } else {
                format!("({c})")
            };
            let term = if idx.is_empty() {
                coeff
            } else {
                format!("{coeff} {}", self.fmt_basis(idx))
            };
            if n == 0 {
                f.write_str(&term)?;
            } else if let Some(rest) = term.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {term}")?;
            }
        }
        Ok(())
    }
}

impl<C: fmt::Debug, K: Kind> fmt::Debug for SkewTensor<C, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct(if K::IS_FORM { "DiffForm" } else { "Multivector" })
            .field("degree", &self.degree)
            .field("terms", &self.terms)
            .finish()
    }
}
