use std::fmt;

use crate::error::Error;
use crate::exterior::SkewTensor;
use crate::ring::Chart;
use crate::{DiffForm, FirstOrderOp, FormPair, Multivector, Scalar};

/// A value bound in a session. Degree-0 tensors are always stored as
/// `Scalar`, so every value has exactly one representation.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Scalar(Scalar),
    Multivector(Multivector),
    Form(DiffForm),
    Op(FirstOrderOp),
    Pair(FormPair),
    /// The absent second component of a degree-0 operator or form pair.
    Absent { form: bool },
}

/// Errors raised while evaluating a statement.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Type(String),
}

pub(crate) fn type_error<T>(msg: impl Into<String>) -> Result<T, EvalError> {
    Err(EvalError::Type(msg.into()))
}

impl From<Multivector> for Value {
    fn from(t: Multivector) -> Self {
        match t.as_scalar() {
            Some(s) => Value::Scalar(s),
            None => Value::Multivector(t),
        }
    }
}

impl From<DiffForm> for Value {
    fn from(t: DiffForm) -> Self {
        match t.as_scalar() {
            Some(s) => Value::Scalar(s),
            None => Value::Form(t),
        }
    }
}

impl From<Scalar> for Value {
    fn from(s: Scalar) -> Self {
        Value::Scalar(s)
    }
}

impl From<FirstOrderOp> for Value {
    fn from(d: FirstOrderOp) -> Self {
        Value::Op(d)
    }
}

impl From<FormPair> for Value {
    fn from(a: FormPair) -> Self {
        Value::Pair(a)
    }
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Multivector(_) => "multivector",
            Value::Form(_) => "form",
            Value::Op(_) => "operator",
            Value::Pair(_) => "form pair",
            Value::Absent { .. } => "absent component",
        }
    }

    pub fn chart(&self) -> Option<&Chart> {
        match self {
            Value::Scalar(s) => Some(s.chart()),
            Value::Multivector(t) => Some(t.chart()),
            Value::Form(t) => Some(t.chart()),
            Value::Op(d) => Some(d.chart()),
            Value::Pair(a) => Some(a.chart()),
            Value::Absent { .. } => None,
        }
    }

    pub fn transport(&self, target: &Chart) -> Result<Value, Error> {
        Ok(match self {
            Value::Scalar(s) => Value::Scalar(s.transport(target)?),
            Value::Multivector(t) => Value::Multivector(t.transport(target)?),
            Value::Form(t) => Value::Form(t.transport(target)?),
            Value::Op(d) => Value::Op(d.transport(target)?),
            Value::Pair(a) => Value::Pair(a.transport(target)?),
            Value::Absent { form } => Value::Absent { form: *form },
        })
    }

    /// Equality after moving both values to a common chart.
    pub fn same_as(&self, other: &Value) -> bool {
        match unify(self.clone(), other.clone()) {
            Ok((a, b)) => a == b,
            Err(_) => false,
        }
    }

    /// View as a multivector; scalars become degree-0 multivectors.
    pub fn as_multivector(&self) -> Result<Multivector, EvalError> {
        match self {
            Value::Multivector(t) => Ok(t.clone()),
            Value::Scalar(s) => Ok(SkewTensor::scalar(s.clone())),
            other => type_error(format!("expected a multivector, found a {}", other.kind())),
        }
    }

    pub fn as_form(&self) -> Result<DiffForm, EvalError> {
        match self {
            Value::Form(t) => Ok(t.clone()),
            Value::Scalar(s) => Ok(SkewTensor::scalar(s.clone())),
            other => type_error(format!("expected a form, found a {}", other.kind())),
        }
    }

    pub fn as_scalar(&self) -> Result<Scalar, EvalError> {
        match self {
            Value::Scalar(s) => Ok(s.clone()),
            other => type_error(format!("expected a scalar, found a {}", other.kind())),
        }
    }

    /// View as an operator; multivectors and functions embed.
    pub fn as_op(&self) -> Result<FirstOrderOp, EvalError> {
        match self {
            Value::Op(d) => Ok(d.clone()),
            Value::Scalar(s) => Ok(FirstOrderOp::function(s)),
            Value::Multivector(t) => Ok(FirstOrderOp::embed(t)),
            other => type_error(format!("expected an operator, found a {}", other.kind())),
        }
    }

    /// View as a form pair; forms and functions embed.
    pub fn as_pair(&self) -> Result<FormPair, EvalError> {
        match self {
            Value::Pair(a) => Ok(a.clone()),
            Value::Scalar(s) => Ok(FormPair::function(s)),
            Value::Form(t) => Ok(FormPair::embed(t)),
            other => type_error(format!("expected a form pair, found a {}", other.kind())),
        }
    }

    pub fn neg(&self) -> Result<Value, EvalError> {
        Ok(match self {
            Value::Scalar(s) => Value::Scalar(-s),
            Value::Multivector(t) => Value::Multivector(-t),
            Value::Form(t) => Value::Form(-t),
            Value::Op(d) => Value::Op(d.neg()),
            Value::Pair(a) => Value::Pair(a.neg()),
            Value::Absent { .. } => return type_error("cannot negate an absent component"),
        })
    }

    pub fn add(&self, other: &Value, subtract: bool) -> Result<Value, EvalError> {
        let (a, b) = unify(self.clone(), other.clone())?;
        Ok(match (&a, &b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(if subtract {
                x.checked_sub(y)?
            } else {
                x.checked_add(y)?
            }),
            (Value::Multivector(x), Value::Multivector(y)) => {
                Value::from(if subtract { x.checked_sub(y)? } else { x.checked_add(y)? })
            }
            (Value::Form(x), Value::Form(y)) => Value::from(if subtract { x.checked_sub(y)? } else { x.checked_add(y)? }),
            (Value::Op(x), Value::Op(y)) => Value::Op(if subtract { x.checked_sub(y)? } else { x.checked_add(y)? }),
            (Value::Pair(x), Value::Pair(y)) => Value::Pair(if subtract { x.checked_sub(y)? } else { x.checked_add(y)? }),
            _ => {
                return type_error(format!("cannot add a {} and a {}", a.kind(), b.kind()));
            }
        })
    }

    /// Scalar multiplication; one factor must be a scalar.
    pub fn mul(&self, other: &Value) -> Result<Value, EvalError> {
        let (a, b) = unify(self.clone(), other.clone())?;
        let (s, t) = match (&a, &b) {
            (Value::Scalar(s), t) | (t, Value::Scalar(s)) => (s, t),
            _ => {
                return type_error(format!(
                    "cannot multiply a {} by a {}; use ^ for the wedge product",
                    a.kind(),
                    b.kind()
                ))
            }
        };
        Ok(match t {
            Value::Scalar(x) => Value::Scalar(x.checked_mul(s)?),
            Value::Multivector(x) => Value::from(x.scale(s)),
            Value::Form(x) => Value::from(x.scale(s)),
            Value::Op(x) => Value::Op(x.scale(s)),
            Value::Pair(x) => Value::Pair(x.scale(s)),
            Value::Absent { .. } => return type_error("cannot scale an absent component"),
        })
    }

    pub fn wedge(&self, other: &Value) -> Result<Value, EvalError> {
        let (a, b) = unify(self.clone(), other.clone())?;
        Ok(match (&a, &b) {
            (Value::Scalar(_), _) | (_, Value::Scalar(_)) => return a.mul(&b),
            (Value::Multivector(x), Value::Multivector(y)) => Value::from(x.wedge(y)?),
            (Value::Form(x), Value::Form(y)) => Value::from(x.wedge(y)?),
            (Value::Op(x), _) => Value::Op(x.wedge(&b.as_op()?)?),
            (_, Value::Op(y)) => Value::Op(a.as_op()?.wedge(y)?),
            (Value::Pair(x), _) => Value::Pair(x.wedge(&b.as_pair()?)?),
            (_, Value::Pair(y)) => Value::Pair(a.as_pair()?.wedge(y)?),
            _ => return type_error(format!("cannot wedge a {} with a {}", a.kind(), b.kind())),
        })
    }

    pub fn pow(&self, n: i32) -> Result<Value, EvalError> {
        Ok(Value::Scalar(self.as_scalar()?.pow(n)?))
    }

    /// Builds an operator or form pair from its two components.
    pub fn pair(first: Value, second: Value) -> Result<Value, EvalError> {
        let (first, second) = unify(first, second)?;
        Ok(match (first, second) {
            (Value::Scalar(f), Value::Absent { form: false }) => Value::Op(FirstOrderOp::function(&f)),
            (Value::Scalar(f), Value::Absent { form: true }) => Value::Pair(FormPair::function(&f)),
            (Value::Multivector(p0), p1) => {
                let p1 = p1.as_multivector()?;
                Value::Op(FirstOrderOp::new(p0, Some(p1))?)
            }
            (Value::Form(a0), a1) => {
                let a1 = a1.as_form()?;
                Value::Pair(FormPair::new(a0, Some(a1))?)
            }
            (Value::Scalar(_), other) => {
                return type_error(format!(
                    "a degree-0 first component needs an absent second component, found a {}",
                    other.kind()
                ))
            }
            (first, _) => return type_error(format!("a {} cannot be a pair component", first.kind())),
        })
    }
}

/// Moves two values to a common chart: a value on the slice `t = 1` is
/// extended independently of `t` when combined with a full-chart value.
pub fn unify(a: Value, b: Value) -> Result<(Value, Value), Error> {
    let (Some(ca), Some(cb)) = (a.chart(), b.chart()) else {
        return Ok((a, b));
    };
    if ca == cb {
        return Ok((a, b));
    }
    if ca.homogeneity_index().is_some() && ca.slice()? == *cb {
        let ca = ca.clone();
        return Ok((a, b.transport(&ca)?));
    }
    if cb.homogeneity_index().is_some() && cb.slice()? == *ca {
        let cb = cb.clone();
        return Ok((a.transport(&cb)?, b));
    }
    Err(Error::ChartMismatch {
        left: ca.to_string(),
        right: cb.to_string(),
    })
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(s) => write!(f, "{s}"),
            Value::Multivector(t) => write!(f, "{t}"),
            Value::Form(t) => write!(f, "{t}"),
            Value::Op(d) => write!(f, "{d}"),
            Value::Pair(a) => write!(f, "{a}"),
            Value::Absent { form: false } => f.write_str("0 : deg -1"),
            Value::Absent { form: true } => f.write_str("0 : deg -1 form"),
        }
    }
}
