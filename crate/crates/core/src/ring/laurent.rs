use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{int, Chart, Field, Point};
use crate::error::{Error, Result};

/// Sparse multivariate Laurent polynomial over a chart.
///
/// Terms map an exponent vector (one entry per chart variable, negatives
/// allowed) to a nonzero coefficient. The map is kept canonical, so
/// structural equality is mathematical equality.
#[derive(Clone, PartialEq)]
pub struct Laurent<C> {
    chart: Chart,
    terms: BTreeMap<Vec<i32>, C>,
}

impl<C: Field> Laurent<C> {
    pub fn zero(chart: &Chart) -> Self {
        Laurent {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(chart: &Chart) -> Self {
        Self::constant(chart, C::one())
    }

    pub fn constant(chart: &Chart, c: C) -> Self {
        Self::monomial(chart, vec![0; chart.dim()], c)
    }

    pub fn from_int(chart: &Chart, n: i64) -> Self {
        Self::constant(chart, int(n))
    }

    pub fn monomial(chart: &Chart, exponents: Vec<i32>, c: C) -> Self {
        assert_eq!(exponents.len(), chart.dim(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponents, c);
        }
        Laurent {
            chart: chart.clone(),
            terms,
        }
    }

    /// The coordinate function at position `idx`.
    pub fn variable_at(chart: &Chart, idx: usize) -> Self {
        let mut e = vec![0; chart.dim()];
        e[idx] = 1;
        Self::monomial(chart, e, C::one())
    }

    pub fn variable(chart: &Chart, name: &str) -> Result<Self> {
        Ok(Self::variable_at(chart, chart.var_index(name)?))
    }

    pub fn from_terms(chart: &Chart, terms: impl IntoIterator<Item = (Vec<i32>, C)>) -> Self {
        let mut out = Self::zero(chart);
        for (e, c) in terms {
            assert_eq!(e.len(), chart.dim(), "exponent vector length");
            out.accumulate(e, c);
        }
        out
    }

    fn accumulate(&mut self, e: Vec<i32>, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &C)> {
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

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn constant_value(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The single term, when there is exactly one.
    pub fn as_monomial(&self) -> Option<(&Vec<i32>, &C)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Units of the Laurent ring are exactly the nonzero monomials.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading_term(&self) -> Option<(&Vec<i32>, &C)> {
        self.terms.iter().next()
    }

    pub fn coefficient(&self, exponents: &[i32]) -> C {
        self.terms.get(exponents).cloned().unwrap_or_else(C::zero)
    }

    pub fn depends_on(&self, idx: usize) -> bool {
        self.terms.keys().any(|e| e[idx] != 0)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self, negate: bool) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let c = if negate { -c.clone() } else { c.clone() };
            out.accumulate(e.clone(), c);
        }
        out
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.chart);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.accumulate(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.chart);
        }
        Laurent {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.clone(), x.clone() * c.clone()))
                .collect(),
        }
    }

    /// Integer power; negative powers exist only for monomials.
    pub fn pow(&self, n: i32) -> Result<Self> {
        if n < 0 {
            return self.inverse()?.pow(-n);
        }
        let mut acc = Self::one(&self.chart);
        let mut base = self.clone();
        let mut n = n as u32;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        Ok(acc)
    }

    pub fn inverse(&self) -> Result<Self> {
        match self.as_monomial() {
            Some((e, c)) => Ok(Self::monomial(
                &self.chart,
                e.iter().map(|x| -x).collect(),
                C::one() / c.clone(),
            )),
            None => Err(Error::NonInvertible(format!(
                "{} term(s); only nonzero monomials are units",
                self.terms.len()
            ))),
        }
    }

    /// Exact division by a unit.
    pub fn div_unit(&self, unit: &Self) -> Result<Self> {
        self.checked_mul(&unit.inverse()?)
    }

    pub fn partial(&self, idx: usize) -> Self {
        let mut out = Self::zero(&self.chart);
        for (e, c) in &self.terms {
            if e[idx] != 0 {
                let mut e2 = e.clone();
                e2[idx] -= 1;
                out.accumulate(e2, c.clone() * int(e[idx] as i64));
            }
        }
        out
    }

    pub fn partial_by_name(&self, name: &str) -> Result<Self> {
        Ok(self.partial(self.chart.var_index(name)?))
    }

    /// Substitutes `value` for the variable `idx`; the chart is unchanged and
    /// the result no longer depends on that variable.
    pub fn specialize(&self, idx: usize, value: &C) -> Result<Self> {
        let mut out = Self::zero(&self.chart);
        for (e, c) in &self.terms {
            let factor = power_of(value, e[idx]).ok_or_else(|| {
                Error::ZeroToNegativePower(self.chart.name(idx).to_string())
            })?;
            let mut e2 = e.clone();
            e2[idx] = 0;
            out.accumulate(e2, c.clone() * factor);
        }
        Ok(out)
    }

    pub fn specialize_by_name(&self, name: &str, value: &C) -> Result<Self> {
        self.specialize(self.chart.var_index(name)?, value)
    }

    pub fn evaluate(&self, point: &Point<C>) -> Result<C> {
        self.chart.ensure_same(point.chart())?;
        let mut total = C::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k != 0 {
                    let f = power_of(point.value(i), k).ok_or_else(|| {
                        Error::ZeroToNegativePower(self.chart.name(i).to_string())
                    })?;
                    v = v * f;
                }
            }
            total = total + v;
        }
        Ok(total)
    }

    /// Moves the polynomial to another chart, matching variables by name.
    /// Variables missing from `target` must not occur.
    pub fn transport(&self, target: &Chart) -> Result<Self> {
        if &self.chart == target {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self
            .chart
            .variables()
            .iter()
            .map(|v| target.index_of(v))
            .collect();
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; target.dim()];
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e2[j] = k,
                    None => return Err(Error::UnknownVariable(self.chart.name(i).to_string())),
                }
            }
            out.accumulate(e2, c.clone());
        }
        Ok(out)
    }

    /// Applies the derivation `sum_i coeffs[i] * d/dx_i`.
    pub fn apply_vector(&self, coeffs: &[(usize, &Self)]) -> Self {
        let mut out = Self::zero(&self.chart);
        for &(i, a) in coeffs {
            let d = self.partial(i);
            if !d.is_zero() {
                out = out.add_unchecked(&a.mul_unchecked(&d), false);
            }
        }
        out
    }
}

fn power_of<C: Field>(value: &C, k: i32) -> Option<C> {
    if k < 0 && value.is_zero() {
        return None;
    }
    let mut acc = C::one();
    for _ in 0..k.unsigned_abs() {
        acc = acc * value.clone();
    }
    Some(if k < 0 { C::one() / acc } else { acc })
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<C: Field> $trait<&Laurent<C>> for &Laurent<C> {
            type Output = Laurent<C>;
            fn $method(self, rhs: &Laurent<C>) -> Laurent<C> {
                assert!(
                    self.chart == rhs.chart,
                    "Laurent arithmetic across charts {} and {}",
                    self.chart,
                    rhs.chart
                );
                let f: fn(&Laurent<C>, &Laurent<C>) -> Laurent<C> = $body;
                f(self, rhs)
            }
        }
        impl<C: Field> $trait<Laurent<C>> for Laurent<C> {
            type Output = Laurent<C>;
            fn $method(self, rhs: Laurent<C>) -> Laurent<C> {
                (&self).$method(&rhs)
            }
        }
        impl<C: Field> $trait<&Laurent<C>> for Laurent<C> {
            type Output = Laurent<C>;
            fn $method(self, rhs: &Laurent<C>) -> Laurent<C> {
                (&self).$method(rhs)
            }
        }
        impl<C: Field> $trait<Laurent<C>> for &Laurent<C> {
            type Output = Laurent<C>;
            fn $method(self, rhs: Laurent<C>) -> Laurent<C> {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.add_unchecked(b, false));
binop!(Sub, sub, |a, b| a.add_unchecked(b, true));
binop!(Mul, mul, |a, b| a.mul_unchecked(b));

impl<C: Field> Neg for &Laurent<C> {
    type Output = Laurent<C>;
    fn neg(self) -> Laurent<C> {
        Laurent {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl<C: Field> Neg for Laurent<C> {
    type Output = Laurent<C>;
    fn neg(self) -> Laurent<C> {
        -&self
    }
}

impl<C: Field + fmt::Display> Laurent<C> {
    /// Canonical text for a single term: coefficient, then `v` / `v^e` factors.
    fn fmt_term(&self, e: &[i32], c: &C) -> String {
        let mut s = c.to_string();
        for (i, &k) in e.iter().enumerate() {
            match k {
                0 => {}
                1 => {
                    s.push(' ');
                    s.push_str(self.chart.name(i));
                }
                _ => {
                    s.push_str(&format!(" {}^{}", self.chart.name(i), k));
                }
            }
        }
        s
    }
}

/// Terms in ascending lexicographic exponent order, each with an explicit
/// coefficient: `1/2 q`, `-1 t^-1`, `1 p + 1 q`.
impl<C: Field + fmt::Display> fmt::Display for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            let t = self.fmt_term(e, c);
            if n == 0 {
                f.write_str(&t)?;
            } else if let Some(rest) = t.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {t}")?;
            }
        }
        Ok(())
    }
}

impl<C: fmt::Debug> fmt::Debug for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}
