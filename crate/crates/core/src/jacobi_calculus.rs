//! First-order polydifferential operators and their dual sections, stored
//! split along the identity operator `I` and the canonical 1-form `phi`:
//!
//! * `D = D0 + I ^ D1` with `D0` a `k`-vector and `D1` a `(k-1)`-vector,
//! * `a = a0 + phi ^ a1` with `a0` a `k`-form and `a1` a `(k-1)`-form.
//!
//! `I` and `phi` never appear as basis elements. In degree 0 the second
//! component is absent.

use std::fmt;

use crate::error::{Error, Result};
use crate::exterior::{pairing, DiffForm, Forms, Kind, Multivector, SkewTensor, Vectors};
use crate::ring::{int, sign, Chart, Field, Laurent, Point};

/// A pair `(first, second)` of skew tensors of degrees `k` and `k - 1`.
#[derive(Clone, PartialEq)]
pub struct SplitPair<C, K> {
    first: SkewTensor<C, K>,
    second: Option<SkewTensor<C, K>>,
}

/// `D = D0 + I ^ D1`, an element of `D^k`.
pub type FirstOrderOp<C> = SplitPair<C, Vectors>;
/// `a = a0 + phi ^ a1`, an element of `Theta^k`.
pub type FormPair<C> = SplitPair<C, Forms>;

impl<C: Field, K: Kind> SplitPair<C, K> {
    pub fn new(first: SkewTensor<C, K>, second: Option<SkewTensor<C, K>>) -> Result<Self> {
        let k = first.degree();
        match (&second, k) {
            (None, 0) => {}
            (None, _) => {
                return Err(Error::DegreeMismatch {
                    expected: k as i64 - 1,
                    found: -1,
                })
            }
            (Some(s), _) => {
                first.chart().ensure_same(s.chart())?;
                if s.degree() + 1 != k {
                    return Err(Error::DegreeMismatch {
                        expected: k as i64 - 1,
                        found: s.degree() as i64,
                    });
                }
            }
        }
        Ok(SplitPair { first, second })
    }

    /// `(first, second)` with the second component absent exactly in degree 0.
    pub fn from_parts(first: SkewTensor<C, K>, second: SkewTensor<C, K>) -> Result<Self> {
        if first.degree() == 0 {
            if !second.is_zero() {
                return Err(Error::DegreeMismatch {
                    expected: -1,
                    found: second.degree() as i64,
                });
            }
            return Self::new(first, None);
        }
        Self::new(first, Some(second))
    }

    pub fn zero(chart: &Chart, degree: usize) -> Self {
        SplitPair {
            first: SkewTensor::zero(chart, degree),
            second: degree.checked_sub(1).map(|d| SkewTensor::zero(chart, d)),
        }
    }

    /// The tensor `T` viewed as `(T, 0)`.
    pub fn embed(t: &SkewTensor<C, K>) -> Self {
        let chart = t.chart();
        SplitPair {
            first: t.clone(),
            second: t.degree().checked_sub(1).map(|d| SkewTensor::zero(chart, d)),
        }
    }

    /// `(0, 1)`: the identity operator `I` or the 1-form `phi`.
    pub fn unit(chart: &Chart) -> Self {
        SplitPair {
            first: SkewTensor::zero(chart, 1),
            second: Some(SkewTensor::scalar(Laurent::one(chart))),
        }
    }

    /// Degree-0 element carrying a function.
    pub fn function(f: &Laurent<C>) -> Self {
        Self::embed(&SkewTensor::scalar(f.clone()))
    }

    pub fn degree(&self) -> usize {
        self.first.degree()
    }

    pub fn chart(&self) -> &Chart {
        self.first.chart()
    }

    pub fn first(&self) -> &SkewTensor<C, K> {
        &self.first
    }

    pub fn second(&self) -> Option<&SkewTensor<C, K>> {
        self.second.as_ref()
    }

    /// Second component, as a typed zero of degree 0 when absent.
    pub fn second_or_zero(&self) -> SkewTensor<C, K> {
        self.second
            .clone()
            .unwrap_or_else(|| SkewTensor::zero(self.chart(), 0))
    }

    pub fn into_parts(self) -> (SkewTensor<C, K>, Option<SkewTensor<C, K>>) {
        (self.first, self.second)
    }

    pub fn is_zero(&self) -> bool {
        self.first.is_zero() && self.second.as_ref().is_none_or(|s| s.is_zero())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let first = self.first.checked_add(&other.first)?;
        let second = match (&self.second, &other.second) {
            (Some(a), Some(b)) => Some(a.checked_add(b)?),
            _ => None,
        };
        Ok(SplitPair { first, second })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|t| -t)
    }

    pub fn scale(&self, f: &Laurent<C>) -> Self {
        self.map(|t| t.scale(f))
    }

    pub fn scale_const(&self, c: &C) -> Self {
        self.map(|t| t.scale_const(c))
    }

    fn map(&self, f: impl Fn(&SkewTensor<C, K>) -> SkewTensor<C, K>) -> Self {
        SplitPair {
            first: f(&self.first),
            second: self.second.as_ref().map(f),
        }
    }

    pub(crate) fn try_map(&self, f: impl Fn(&SkewTensor<C, K>) -> Result<SkewTensor<C, K>>) -> Result<Self> {
        Ok(SplitPair {
            first: f(&self.first)?,
            second: self.second.as_ref().map(f).transpose()?,
        })
    }

    /// Wedge transported through the splitting:
    /// `(a0 ^ b0, a1 ^ b0 + (-1)^p a0 ^ b1)`.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        let p = self.degree();
        let first = self.first.wedge(&other.first)?;
        let chart = self.chart().clone();
        let second = match (p + other.degree()).checked_sub(1) {
            None => None,
            Some(d) => {
                let mut acc = SkewTensor::zero(&chart, d);
                if let Some(a1) = &self.second {
                    acc = acc.checked_add(&a1.wedge(&other.first)?)?;
                }
                if let Some(b1) = &other.second {
                    let t = self.first.wedge(b1)?;
                    acc = acc.checked_add(&t.scale_const(&sign(p)))?;
                }
                Some(acc)
            }
        };
        Ok(SplitPair { first, second })
    }

    pub fn eval_at(&self, point: &Point<C>) -> Result<Self> {
        self.try_map(|t| t.eval_at(point))
    }

    pub fn transport(&self, target: &Chart) -> Result<Self> {
        self.try_map(|t| t.transport(target))
    }
}

impl<C: Field> FirstOrderOp<C> {
    /// `i_phi D = D1` (zero in degree 0).
    pub fn i_phi(&self) -> Multivector<C> {
        self.second_or_zero()
    }

    /// Schouten-Jacobi bracket of `D^k x D^r -> D^(k+r-1)`, componentwise:
    ///
    /// ```text
    /// first  = [[P0,Q0]] + (k-1) P0^Q1 + (-1)^k (r-1) P1^Q0
    /// second = [[P1,Q0]] - (-1)^k [[P0,Q1]] + (k-r) P1^Q1
    /// ```
    pub fn sj_bracket(&self, other: &Self) -> Result<Self> {
        self.chart().ensure_same(other.chart())?;
        let (k, r) = (self.degree(), other.degree());
        let chart = self.chart().clone();
        let m = (k + r).saturating_sub(1);
        let (p0, q0) = (&self.first, &other.first);

        let mut first = p0.sn_bracket(q0)?;
        if let Some(q1) = &other.second {
            if k != 1 {
                first = first.checked_add(&p0.wedge(q1)?.scale_const(&int(k as i64 - 1)))?;
            }
        }
        if let Some(p1) = &self.second {
            if r != 1 {
                let c: C = sign::<C>(k) * int(r as i64 - 1);
                first = first.checked_add(&p1.wedge(q0)?.scale_const(&c))?;
            }
        }

        let second = if k + r >= 2 {
            let mut acc = Multivector::zero(&chart, m - 1);
            if let Some(p1) = &self.second {
                acc = acc.checked_add(&p1.sn_bracket(q0)?)?;
            }
            if let Some(q1) = &other.second {
                let b = p0.sn_bracket(q1)?;
                acc = acc.checked_add(&b.scale_const(&-sign::<C>(k)))?;
            }
            if let (Some(p1), Some(q1)) = (&self.second, &other.second) {
                if k != r {
                    acc = acc.checked_add(&p1.wedge(q1)?.scale_const(&int(k as i64 - r as i64)))?;
                }
            }
            Some(acc)
        } else {
            None
        };
        SplitPair::new(first, second)
    }

    /// `{f_1..f_k}_D = {f_1..f_k}_D0 + sum_i (-1)^(i+1) f_i {f_1..^f_i..f_k}_D1`.
    pub fn apply(&self, fs: &[Laurent<C>]) -> Result<Laurent<C>> {
        let k = self.degree();
        if fs.len() != k {
            return Err(Error::Arity {
                expected: k,
                found: fs.len(),
            });
        }
        let mut total = self.first.bracket_of_functions(fs)?;
        if let Some(d1) = &self.second {
            for i in 0..k {
                let rest: Vec<Laurent<C>> = fs
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, f)| f.clone())
                    .collect();
                let term = &fs[i] * &d1.bracket_of_functions(&rest)?;
                total = if i % 2 == 0 { total + term } else { total - term };
            }
        }
        Ok(total)
    }

    /// Restriction of both components to the slice `t = 1`.
    pub fn restrict_to_slice(&self) -> Result<Self> {
        self.try_map(|t| t.restrict_to_slice())
    }
}

impl<C: Field> FormPair<C> {
    /// `d1(a0, a1) = (d a0, -d a1 + a0)`.
    pub fn jacobi_differential(&self) -> Self {
        let first = self.first.exterior_derivative();
        let second = match &self.second {
            Some(a1) => -a1.exterior_derivative() + self.first.clone(),
            None => self.first.clone(),
        };
        SplitPair {
            first,
            second: Some(second),
        }
    }

    /// `j^1 f = d1 (f, _) = (df, f)`.
    pub fn jet(f: &Laurent<C>) -> Self {
        Self::function(f).jacobi_differential()
    }

    pub fn restrict_to_slice(&self) -> Result<Self> {
        self.try_map(|t| t.restrict_to_slice())
    }
}

/// Full contraction `<D, a> = <D0, a0> + <D1, a1>` (`phi(I) = 1`).
pub fn pair_split<C: Field>(d: &FirstOrderOp<C>, a: &FormPair<C>) -> Result<Laurent<C>> {
    let mut total = pairing(&d.first, &a.first)?;
    if let (Some(d1), Some(a1)) = (&d.second, &a.second) {
        total = total + pairing(d1, a1)?;
    }
    Ok(total)
}

impl<C: Field> From<DiffForm<C>> for FormPair<C> {
    fn from(a: DiffForm<C>) -> Self {
        Self::embed(&a)
    }
}

impl<C: Field> From<Multivector<C>> for FirstOrderOp<C> {
    fn from(p: Multivector<C>) -> Self {
        Self::embed(&p)
    }
}

/// `(first, second)`; an absent second component prints as `0 : deg -1`.
impl<C: Field + fmt::Display, K: Kind> fmt::Display for SplitPair<C, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, ", self.first)?;
        match &self.second {
            Some(s) => write!(f, "{s}")?,
            None if K::IS_FORM => f.write_str("0 : deg -1 form")?,
            None => f.write_str("0 : deg -1")?,
        }
        f.write_str(")")
    }
}

impl<C: fmt::Debug, K: Kind> fmt::Debug for SplitPair<C, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple(if K::IS_FORM { "FormPair" } else { "FirstOrderOp" })
            .field(&self.first)
            .field(&self.second)
            .finish()
    }
}
