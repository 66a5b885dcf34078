use std::collections::HashMap;
use std::fmt::Write as _;

use super::parser::{parse_expr, parse_program, CheckKind, Command, Expr, Program, Rhs, Stmt};
use super::value::{type_error, EvalError, Value};
use crate::error::Error;
use crate::exterior::{pairing, SkewTensor};
use crate::homogeneity::{degree, Graded, Homogeneity};
use crate::jacobi_calculus::pair_split;
use crate::ring::{Chart, Laurent};
use crate::structures::{
    contact_reduce, default_test_functions, hamiltonian_poisson, invert_symplectic, is_jacobi, is_poisson,
    nambu_check, ContactData,
};
use crate::{FirstOrderOp, HomogeneousSetup, Multivector, Rational};

/// Which statements produce output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Print the result of every command and `print` statement.
    Run,
    /// Print only `check` results and errors.
    Check,
}

/// Exit status of a program: the worst status of any statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass = 0,
    Fail = 1,
    Error = 2,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub status: Status,
}

/// Parses and executes a program. Syntax errors abort before anything runs.
pub fn run_source(src: &str, mode: Mode) -> Outcome {
    match parse_program(src) {
        Ok(program) => Session::new().execute(&program, mode),
        Err(e) => Outcome {
            output: format!("error: {e}\n"),
            status: Status::Error,
        },
    }
}

/// Bindings and the chart of a running program.
#[derive(Clone, Debug, Default)]
pub struct Session {
    chart: Option<Chart>,
    delta: Option<Multivector>,
    bindings: HashMap<String, Value>,
}

type Eval<T> = Result<T, EvalError>;

struct Emitted {
    lines: Vec<String>,
    status: Status,
    /// Check output is shown in both modes.
    is_check: bool,
}

impl Session {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn chart(&self) -> Option<&Chart> {
        self.chart.as_ref()
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.bindings.get(name)
    }

    /// Binds a value directly, bypassing the parser.
    pub fn bind(&mut self, name: &str, value: Value) {
        self.bindings.insert(name.to_string(), value);
    }

    pub fn declare_chart(&mut self, chart: Chart) {
        self.chart = Some(chart);
    }

    pub fn execute(&mut self, program: &Program, mode: Mode) -> Outcome {
        let mut output = String::new();
        let mut status = Status::Pass;
        for st in &program.statements {
            let emitted = self.statement(&st.stmt).unwrap_or_else(|e| Emitted {
                lines: vec![format!("error: line {}: {e}", st.line)],
                status: Status::Error,
                is_check: false,
            });
            status = status.max(emitted.status);
            if mode == Mode::Run || emitted.is_check || emitted.status == Status::Error {
                for l in emitted.lines {
                    let _ = writeln!(output, "{l}");
                }
            }
        }
        Outcome { output, status }
    }

    /// Evaluates an expression in the current session, e.g. to re-read
    /// printed output.
    pub fn parse_value(&self, text: &str) -> Result<Value, String> {
        let chart = self.chart.as_ref().ok_or("no chart declared")?;
        let names: Vec<String> = self.bindings.keys().cloned().collect();
        let expr = parse_expr(text, chart.variables(), &names).map_err(|e| e.to_string())?;
        self.eval(&expr).map_err(|e| e.to_string())
    }

    fn statement(&mut self, stmt: &Stmt) -> Eval<Emitted> {
        let quiet = |status| Emitted {
            lines: vec![],
            status,
            is_check: false,
        };
        match stmt {
            Stmt::Chart {
                variables, homogeneity, ..
            } => {
                let chart = match homogeneity {
                    Some(t) => Chart::with_homogeneity(variables.clone(), t.as_str())?,
                    None => Chart::new(variables.clone())?,
                };
                self.chart = Some(chart);
                Ok(quiet(Status::Pass))
            }
            Stmt::Delta(e) => {
                let delta = self.eval(e)?.as_multivector()?;
                if delta.degree() != 1 {
                    return type_error("delta must be a vector field");
                }
                let chart = self.full_chart()?;
                if chart.homogeneity_index().is_some() {
                    HomogeneousSetup::with_delta(&chart, delta.transport(&chart)?)?;
                }
                self.delta = Some(delta);
                Ok(quiet(Status::Pass))
            }
            Stmt::Assign { name, value } => {
                let v = match value {
                    Rhs::Expr(e) => self.eval(e)?,
                    Rhs::Command(c) => {
                        let (v, _) = self.command(c)?;
                        v.ok_or_else(|| EvalError::Type(format!("`{}` produces no value to bind", c.name)))?
                    }
                };
                self.bindings.insert(name.clone(), v);
                Ok(quiet(Status::Pass))
            }
            Stmt::Print(e) => Ok(Emitted {
                lines: vec![self.eval(e)?.to_string()],
                status: Status::Pass,
                is_check: false,
            }),
            Stmt::Run(c) => {
                let (v, mut lines) = self.command(c)?;
                if let Some(v) = v {
                    lines.insert(0, v.to_string());
                }
                Ok(Emitted {
                    lines,
                    status: Status::Pass,
                    is_check: false,
                })
            }
            Stmt::Check { kind, target } => Ok(self.check(*kind, target)),
        }
    }

    fn full_chart(&self) -> Eval<Chart> {
        self.chart
            .clone()
            .ok_or_else(|| EvalError::Type("no chart declared".into()))
    }

    fn slice_chart(&self) -> Eval<Chart> {
        Ok(self.full_chart()?.slice()?)
    }

    fn delta(&self) -> Eval<Multivector> {
        let chart = self.full_chart()?;
        if let Some(d) = &self.delta {
            return Ok(d.transport(&chart)?);
        }
        let t = chart.homogeneity_index().ok_or_else(|| {
            EvalError::Type("no homogeneity vector field; declare a homogeneity variable or use `delta`".into())
        })?;
        Ok(Multivector::vector_field(&chart, [(t, Laurent::variable_at(&chart, t))]))
    }

    fn setup(&self) -> Eval<HomogeneousSetup> {
        let chart = self.full_chart()?;
        Ok(HomogeneousSetup::with_delta(&chart, self.delta()?)?)
    }

    fn to_full(&self, v: &Value) -> Eval<Value> {
        Ok(v.transport(&self.full_chart()?)?)
    }

    fn to_slice(&self, v: &Value) -> Eval<Value> {
        v.transport(&self.slice_chart()?).map_err(|e| match e {
            Error::UnknownVariable(t) => Error::DependsOnHomogeneityVariable(t).into(),
            other => other.into(),
        })
    }

    /// Prefers the slice chart when the value does not involve `t`.
    fn maybe_slice(&self, v: &Value) -> Value {
        self.to_slice(v).unwrap_or_else(|_| v.clone())
    }

    pub fn eval(&self, e: &Expr) -> Eval<Value> {
        let chart = self.full_chart()?;
        Ok(match e {
            Expr::Num(r) => Value::Scalar(Laurent::constant(&chart, r.clone())),
            Expr::Var(v) => Value::Scalar(Laurent::variable(&chart, v)?),
            Expr::Name(n) => self
                .bindings
                .get(n)
                .cloned()
                .ok_or_else(|| EvalError::Type(format!("`{n}` is unbound (its definition failed)")))?,
            Expr::Vector(v) => Value::from(Multivector::basis_by_names(&chart, &[v])?),
            Expr::Covector(v) => Value::from(crate::DiffForm::basis_by_names(&chart, &[v])?),
            Expr::TypedZero { degree, form } => match (*degree, *form) {
                (-1, form) => Value::Absent { form },
                (0, _) => Value::Scalar(Laurent::zero(&chart)),
                (k, false) => Value::Multivector(SkewTensor::zero(&chart, k as usize)),
                (k, true) => Value::Form(SkewTensor::zero(&chart, k as usize)),
            },
            Expr::Neg(a) => self.eval(a)?.neg()?,
            Expr::Add(a, b) => self.eval(a)?.add(&self.eval(b)?, false)?,
            Expr::Sub(a, b) => self.eval(a)?.add(&self.eval(b)?, true)?,
            Expr::Mul(a, b) => self.eval(a)?.mul(&self.eval(b)?)?,
            Expr::Wedge(a, b) => self.eval(a)?.wedge(&self.eval(b)?)?,
            Expr::Pow(a, n) => self.eval(a)?.pow(*n)?,
            Expr::Pair(a, b) => Value::pair(self.eval(a)?, self.eval(b)?)?,
        })
    }

    fn args(&self, c: &Command, n: usize) -> Eval<Vec<Value>> {
        if c.args.len() != n {
            return Err(Error::Arity {
                expected: n,
                found: c.args.len(),
            }
            .into());
        }
        c.args.iter().map(|a| self.eval(a)).collect()
    }

    fn command(&self, c: &Command) -> Eval<(Option<Value>, Vec<String>)> {
        let value = |v: Value| Ok((Some(v), vec![]));
        let flagged = |v: Value, violated: bool, what: &str| {
            let note = violated.then(|| format!("# warning: input is not homogeneous of degree {what}"));
            Ok((Some(v), note.into_iter().collect()))
        };
        match c.name.as_str() {
            "snbracket" => {
                let [a, b] = two(self.args(c, 2)?);
                let (a, b) = super::value::unify(a, b)?;
                value(Value::from(a.as_multivector()?.sn_bracket(&b.as_multivector()?)?))
            }
            "sjbracket" => {
                let [a, b] = two(self.args(c, 2)?);
                let (a, b) = super::value::unify(a, b)?;
                value(Value::Op(a.as_op()?.sj_bracket(&b.as_op()?)?))
            }
            "wedge" => {
                let [a, b] = two(self.args(c, 2)?);
                value(a.wedge(&b)?)
            }
            "d" => match &self.args(c, 1)?[0] {
                Value::Scalar(f) => value(Value::from(crate::DiffForm::differential(f))),
                Value::Form(a) => value(Value::from(a.exterior_derivative())),
                other => type_error(format!("d needs a scalar or a form, found a {}", other.kind())),
            },
            "d1" => {
                let a = self.args(c, 1)?.remove(0).as_pair()?;
                value(Value::Pair(a.jacobi_differential()))
            }
            "lie" => {
                let [x, t] = two(self.args(c, 2)?);
                let (x, t) = super::value::unify(x, t)?;
                let x = x.as_multivector()?;
                value(match &t {
                    Value::Scalar(f) => Value::Scalar(x.apply(f)?),
                    Value::Multivector(p) => Value::from(p.lie_derivative(&x)?),
                    Value::Form(a) => Value::from(a.lie_derivative(&x)?),
                    Value::Op(d) => Value::Op(d.lie_along(&x)?),
                    Value::Pair(a) => Value::Pair(a.lie_along(&x)?),
                    Value::Absent { .. } => return type_error("cannot differentiate an absent component"),
                })
            }
            "pair" => {
                let [a, b] = two(self.args(c, 2)?);
                let (a, b) = super::value::unify(a, b)?;
                value(Value::Scalar(match (&a, &b) {
                    (Value::Op(_), _) | (_, Value::Pair(_)) => pair_split(&a.as_op()?, &b.as_pair()?)?,
                    _ => pairing(&a.as_multivector()?, &b.as_form()?)?,
                }))
            }
            "bracket" => {
                let mut args: Vec<Value> = c.args.iter().map(|a| self.eval(a)).collect::<Eval<_>>()?;
                let target = args.remove(0);
                let chart = target.chart().cloned().ok_or_else(|| EvalError::Type("bad bracket target".into()))?;
                let fs: Vec<Laurent<Rational>> = args
                    .iter()
                    .map(|f| {
                        let f = super::value::unify(target.clone(), f.clone())?.1;
                        f.transport(&chart)?.as_scalar()
                    })
                    .collect::<Eval<_>>()?;
                value(Value::Scalar(match &target {
                    Value::Op(d) => d.apply(&fs)?,
                    other => other.as_multivector()?.bracket_of_functions(&fs)?,
                }))
            }
            "degree" => {
                let v = self.args(c, 1)?.remove(0);
                let delta = self.delta()?;
                let v = self.to_full(&v)?;
                let h = match &v {
                    Value::Scalar(f) => degree(f, &delta)?,
                    Value::Multivector(p) => degree(p, &delta)?,
                    Value::Form(a) => degree(a, &delta)?,
                    Value::Op(d) => degree(d, &delta)?,
                    Value::Pair(a) => degree(a, &delta)?,
                    Value::Absent { .. } => return type_error("an absent component has no degree"),
                };
                match h {
                    Homogeneity::Degree(n) => {
                        value(Value::Scalar(Laurent::constant(&self.full_chart()?, n)))
                    }
                    other => Ok((None, vec![other.to_string()])),
                }
            }
            "decompose" | "J" | "JN" => {
                let p = self.to_full(&self.args(c, 1)?[0])?.as_multivector()?;
                let setup = self.setup()?;
                if c.name == "decompose" {
                    let (p0, p1) = setup.decompose(&p)?;
                    return value(Value::Op(FirstOrderOp::from_parts(p0, p1)?));
                }
                let r = setup.reduce(&p, c.name == "JN")?;
                flagged(Value::Op(r.value), r.homogeneity_violated, "1-k")
            }
            "poissonize" => {
                let d = self.to_slice(&self.args(c, 1)?[0])?.as_op()?;
                value(Value::from(self.setup()?.poissonize(&d)?))
            }
            "psi" | "psiN" => {
                let a = self.to_full(&self.args(c, 1)?[0])?.as_form()?;
                let r = self.setup()?.psi(&a, c.name == "psiN")?;
                flagged(Value::Pair(r.value), r.homogeneity_violated, "1")
            }
            "restrict" => match &self.to_full(&self.args(c, 1)?[0])? {
                Value::Scalar(f) => {
                    let chart = self.full_chart()?;
                    let t = chart.homogeneity_index().ok_or(Error::NoHomogeneityVariable)?;
                    value(Value::Scalar(f.specialize(t, &Rational::from_integer(1.into()))?.transport(&chart.slice()?)?))
                }
                Value::Multivector(p) => value(Value::from(p.restrict_to_slice()?)),
                Value::Form(a) => value(Value::from(a.restrict_to_slice()?)),
                Value::Op(d) => value(Value::Op(d.restrict_to_slice()?)),
                Value::Pair(a) => value(Value::Pair(a.restrict_to_slice()?)),
                Value::Absent { .. } => type_error("cannot restrict an absent component"),
            },
            "invert-symplectic" => {
                let w = self.args(c, 1)?.remove(0).as_form()?;
                value(Value::from(invert_symplectic(&w)?))
            }
            "hamiltonian" => {
                let [l, f] = two(self.args(c, 2)?);
                let (l, f) = super::value::unify(l, f)?;
                value(Value::from(hamiltonian_poisson(&l.as_multivector()?, &f.as_scalar()?)?))
            }
            "contact-reduce" => {
                let w = self.to_full(&self.args(c, 1)?[0])?.as_form()?;
                let cd = contact_reduce(&w, &self.setup()?)?;
                value(Value::from(cd.eta))
            }
            "reeb" => {
                let cd = self.contact_data(&self.args(c, 1)?[0])?;
                value(Value::from(cd.reeb))
            }
            "contact-hamiltonian" => {
                let [eta, f] = two(self.args(c, 2)?);
                let cd = self.contact_data(&eta)?;
                let f = f.transport(cd.chart())?.as_scalar()?;
                value(Value::from(cd.hamiltonian(&f)?))
            }
            "contact-bracket" => {
                let args = self.args(c, 3)?;
                let cd = self.contact_data(&args[0])?;
                let f = args[1].transport(cd.chart())?.as_scalar()?;
                let g = args[2].transport(cd.chart())?.as_scalar()?;
                value(Value::Scalar(cd.bracket(&f, &g)?))
            }
            "eval" => {
                let mut v = self.args(c, 1)?.remove(0);
                for (name, x) in &c.substitutions {
                    v = substitute(&v, name, x)?;
                }
                value(v)
            }
            other => type_error(format!("unknown command `{other}`")),
        }
    }

    fn contact_data(&self, eta: &Value) -> Eval<ContactData<Rational>> {
        let eta = self.maybe_slice(eta).as_form()?;
        Ok(ContactData::from_form(eta)?)
    }

    fn check(&self, kind: CheckKind, target: &Expr) -> Emitted {
        let label = match target {
            Expr::Name(n) => format!("check {} {n}", kind.name()),
            _ => format!("check {}", kind.name()),
        };
        match self.check_inner(kind, target) {
            Ok((true, details)) => Emitted {
                lines: std::iter::once(format!("{label}: pass")).chain(details).collect(),
                status: Status::Pass,
                is_check: true,
            },
            Ok((false, details)) => Emitted {
                lines: std::iter::once(format!("{label}: fail")).chain(details).collect(),
                status: Status::Fail,
                is_check: true,
            },
            Err(e) => Emitted {
                lines: vec![format!("{label}: error: {e}")],
                status: Status::Error,
                is_check: true,
            },
        }
    }

    fn check_inner(&self, kind: CheckKind, target: &Expr) -> Eval<(bool, Vec<String>)> {
        let v = self.eval(target)?;
        match kind {
            CheckKind::Poisson => {
                let cert = is_poisson(&v.as_multivector()?)?;
                let details = (!cert.holds).then(|| format!("  obstruction: {}", cert.obstruction));
                Ok((cert.holds, details.into_iter().collect()))
            }
            CheckKind::Jacobi => {
                let cert = is_jacobi(&v.as_op()?)?;
                let details = (!cert.holds).then(|| format!("  obstruction: {}", cert.obstruction));
                Ok((cert.holds, details.into_iter().collect()))
            }
            CheckKind::Nambu => {
                let chart = v.chart().cloned().ok_or_else(|| EvalError::Type("nothing to check".into()))?;
                let family = default_test_functions(&chart);
                let (holds, witness, residual) = match &v {
                    Value::Op(d) => {
                        let r = nambu_check(d, &family)?;
                        (r.holds, r.witness, r.residual.map(|x| x.to_string()))
                    }
                    other => {
                        let r = nambu_check(&other.as_multivector()?, &family)?;
                        (r.holds, r.witness, r.residual.map(|x| x.to_string()))
                    }
                };
                let mut details = Vec::new();
                if let Some(w) = witness {
                    let w: Vec<String> = w.iter().map(|f| f.to_string()).collect();
                    details.push(format!("  witness: {}", w.join(", ")));
                }
                if let Some(r) = residual {
                    details.push(format!("  residual: {r}"));
                }
                Ok((holds, details))
            }
            CheckKind::Contact => {
                let cd = match &v {
                    Value::Form(w) if w.degree() == 2 => contact_reduce(&self.to_full(&v)?.as_form()?, &self.setup()?),
                    Value::Form(_) => ContactData::from_form(self.maybe_slice(&v).as_form()?),
                    other => return type_error(format!("expected a form, found a {}", other.kind())),
                };
                // a violated condition is a failed check, not an evaluation error
                let cd = match cd {
                    Err(Error::ContactDegenerate(why) | Error::NotHomogeneous(why)) => {
                        return Ok((false, vec![format!("  reason: {why}")]))
                    }
                    other => other?,
                };
                Ok((
                    true,
                    vec![format!("  eta: {}", cd.eta), format!("  reeb: {}", cd.reeb)],
                ))
            }
        }
    }
}

fn two(v: Vec<Value>) -> [Value; 2] {
    let [a, b]: [Value; 2] = v.try_into().expect("arity checked");
    [a, b]
}

fn substitute(v: &Value, name: &str, x: &Rational) -> Eval<Value> {
    let chart = v.chart().cloned().ok_or_else(|| EvalError::Type("nothing to evaluate".into()))?;
    let idx = chart.var_index(name)?;
    Ok(match v {
        Value::Scalar(f) => Value::Scalar(f.specialize(idx, x)?),
        Value::Multivector(t) => Value::from(t.specialize(idx, x)?),
        Value::Form(t) => Value::from(t.specialize(idx, x)?),
        Value::Op(d) => Value::Op(d.try_map(|t| t.specialize(idx, x))?),
        Value::Pair(a) => Value::Pair(a.try_map(|t| t.specialize(idx, x))?),
        Value::Absent { .. } => v.clone(),
    })
}
