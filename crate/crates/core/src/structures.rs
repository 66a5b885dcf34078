//! Structure checks and the geometry derived from them: Poisson, Jacobi and
//! Nambu conditions, inversion of symplectic forms, and the contact
//! reduction of a homogeneous symplectic form to its slice.

use crate::error::{Error, Result};
use crate::exterior::{pairing, DiffForm, Kind, Multivector, SkewTensor};
use crate::homogeneity::{combinations, degree, HomogeneousSetup};
use crate::jacobi_calculus::FirstOrderOp;
use crate::linalg::Matrix;
use crate::ring::{Chart, Field, Laurent};

/// Outcome of a bracket condition: holds iff the obstruction is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate<T> {
    pub holds: bool,
    pub obstruction: T,
}

fn require_degree(found: usize, expected: usize) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(Error::DegreeMismatch {
            expected: expected as i64,
            found: found as i64,
        })
    }
}

/// `[[L, L]] = 0`.
pub fn is_poisson<C: Field>(lambda: &Multivector<C>) -> Result<Certificate<Multivector<C>>> {
    require_degree(lambda.degree(), 2)?;
    let obstruction = lambda.sn_bracket(lambda)?;
    Ok(Certificate {
        holds: obstruction.is_zero(),
        obstruction,
    })
}

/// `[[D, D]]^1 = 0`.
pub fn is_jacobi<C: Field>(d: &FirstOrderOp<C>) -> Result<Certificate<FirstOrderOp<C>>> {
    require_degree(d.degree(), 2)?;
    let obstruction = d.sj_bracket(d)?;
    Ok(Certificate {
        holds: obstruction.is_zero(),
        obstruction,
    })
}

/// Tensors carrying a graded bracket in which functions sit in degree 0.
pub trait NambuBracket<C: Field>: Sized + Clone {
    fn arity(&self) -> usize;
    fn chart(&self) -> &Chart;
    fn bracket(&self, other: &Self) -> Result<Self>;
    fn bracket_with_function(&self, f: &Laurent<C>) -> Result<Self>;
    fn is_zero(&self) -> bool;
}

impl<C: Field> NambuBracket<C> for Multivector<C> {
    fn arity(&self) -> usize {
        self.degree()
    }
    fn chart(&self) -> &Chart {
        Multivector::chart(self)
    }
    fn bracket(&self, other: &Self) -> Result<Self> {
        self.sn_bracket(other)
    }
    fn bracket_with_function(&self, f: &Laurent<C>) -> Result<Self> {
        self.sn_bracket(&Multivector::scalar(f.clone()))
    }
    fn is_zero(&self) -> bool {
        Multivector::is_zero(self)
    }
}

impl<C: Field> NambuBracket<C> for FirstOrderOp<C> {
    fn arity(&self) -> usize {
        self.degree()
    }
    fn chart(&self) -> &Chart {
        FirstOrderOp::chart(self)
    }
    fn bracket(&self, other: &Self) -> Result<Self> {
        self.sj_bracket(other)
    }
    fn bracket_with_function(&self, f: &Laurent<C>) -> Result<Self> {
        self.sj_bracket(&FirstOrderOp::function(f))
    }
    fn is_zero(&self) -> bool {
        FirstOrderOp::is_zero(self)
    }
}

/// Result of the finite Nambu check.
#[derive(Clone, Debug, PartialEq)]
pub struct NambuReport<C, T> {
    pub holds: bool,
    /// First tuple `(f_1 .. f_(k-1))` with a nonzero iterated bracket.
    pub witness: Option<Vec<Laurent<C>>>,
    pub residual: Option<T>,
    pub tuples_checked: usize,
}

/// Coordinates and their pairwise products (squares included).
pub fn default_test_functions<C: Field>(chart: &Chart) -> Vec<Laurent<C>> {
    let n = chart.dim();
    let mut out: Vec<Laurent<C>> = (0..n).map(|i| Laurent::variable_at(chart, i)).collect();
    for i in 0..n {
        for j in i..n {
            out.push(Laurent::variable_at(chart, i) * Laurent::variable_at(chart, j));
        }
    }
    out
}

/// Fundamental identity `[[ [[..[[P, f_1]], .., f_(k-1)]], P ]] = 0` over all
/// increasing `(k-1)`-tuples of `family`.
///
/// This is a necessary condition only: the identity is required for all
/// functions, and the family is finite.
pub fn nambu_check<C: Field, T: NambuBracket<C>>(
    tensor: &T,
    family: &[Laurent<C>],
) -> Result<NambuReport<C, T>> {
    let k = tensor.arity();
    if k < 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            found: k as i64,
        });
    }
    let mut tuples_checked = 0;
    for combo in combinations(family.len(), k - 1) {
        tuples_checked += 1;
        let mut x = tensor.clone();
        for &i in &combo {
            x = x.bracket_with_function(&family[i])?;
        }
        let residual = x.bracket(tensor)?;
        if !residual.is_zero() {
            return Ok(NambuReport {
                holds: false,
                witness: Some(combo.iter().map(|&i| family[i].clone()).collect()),
                residual: Some(residual),
                tuples_checked,
            });
        }
    }
    Ok(NambuReport {
        holds: true,
        witness: None,
        residual: None,
        tuples_checked,
    })
}

/// Antisymmetric coefficient matrix of a 2-tensor.
fn two_tensor_matrix<C: Field, K: Kind>(t: &SkewTensor<C, K>) -> Matrix<C> {
    let chart = t.chart();
    Matrix::from_fn(chart, chart.dim(), |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => t.coefficient(&[i, j]),
        std::cmp::Ordering::Greater => -t.coefficient(&[j, i]),
        std::cmp::Ordering::Equal => Laurent::zero(chart),
    })
}

/// The Poisson bivector of a symplectic form: matrix `-W^-1`, so that
/// `dq^dp` inverts to `@q^@p`.
pub fn invert_symplectic<C: Field>(omega: &DiffForm<C>) -> Result<Multivector<C>> {
    require_degree(omega.degree(), 2)?;
    let chart = omega.chart();
    let inv = two_tensor_matrix(omega).inverse(chart)?;
    let n = chart.dim();
    let mut terms = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            terms.push((vec![i, j], -inv.get(i, j).clone()));
        }
    }
    Multivector::from_terms(chart, 2, terms)
}

/// `H_f = L(., df)`, so that `@q^@p` and `H = (q^2 + p^2)/2` give
/// `p@q - q@p`. With this sign `H_f(g) = {g, f}`.
pub fn hamiltonian_poisson<C: Field>(lambda: &Multivector<C>, f: &Laurent<C>) -> Result<Multivector<C>> {
    require_degree(lambda.degree(), 2)?;
    Ok(-lambda.interior(&DiffForm::differential(f))?)
}

/// A contact form on the slice with its Reeb field.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactData<C> {
    pub eta: DiffForm<C>,
    pub d_eta: DiffForm<C>,
    pub reeb: Multivector<C>,
    /// `(d eta)^k ^ eta`, nonzero.
    pub volume: DiffForm<C>,
}

impl<C: Field> ContactData<C> {
    /// Builds the contact data of a 1-form on an odd-dimensional chart.
    pub fn from_form(eta: DiffForm<C>) -> Result<Self> {
        require_degree(eta.degree(), 1)?;
        let chart = eta.chart().clone();
        if chart.dim().is_multiple_of(2) {
            return Err(Error::ContactDegenerate(format!("even dimension {}", chart.dim())));
        }
        let d_eta = eta.exterior_derivative();
        let mut volume = eta.clone();
        for _ in 0..chart.dim() / 2 {
            volume = d_eta.wedge(&volume)?;
        }
        if volume.is_zero() {
            return Err(Error::ContactDegenerate("(d eta)^k ^ eta vanishes".into()));
        }
        let mut cd = ContactData {
            reeb: Multivector::zero(&chart, 1),
            eta,
            d_eta,
            volume,
        };
        let rhs = cd.eta.clone();
        cd.reeb = cd.solve_flat(&rhs)?;
        Ok(cd)
    }

    pub fn chart(&self) -> &Chart {
        self.eta.chart()
    }

    /// `flat(X) = <eta, X> eta - i_X d eta`.
    pub fn flat(&self, x: &Multivector<C>) -> Result<DiffForm<C>> {
        require_degree(x.degree(), 1)?;
        let c = pairing(x, &self.eta)?;
        self.eta.scale(&c).checked_sub(&self.d_eta.interior(x)?)
    }

    fn flat_matrix(&self) -> Matrix<C> {
        let chart = self.chart();
        let omega = two_tensor_matrix(&self.d_eta);
        // row: output covector slot j, column: input vector slot i
        Matrix::from_fn(chart, chart.dim(), |j, i| {
            self.eta.coefficient(&[i]) * self.eta.coefficient(&[j]) - omega.get(i, j).clone()
        })
    }

    fn solve_flat(&self, beta: &DiffForm<C>) -> Result<Multivector<C>> {
        let chart = self.chart();
        let rhs: Vec<Laurent<C>> = (0..chart.dim()).map(|j| beta.coefficient(&[j])).collect();
        let x = self.flat_matrix().solve(&rhs, chart)?;
        Ok(Multivector::vector_field(chart, x.into_iter().enumerate()))
    }

    /// `flat(H_f) = df - Gamma(f) eta + f eta`.
    pub fn hamiltonian(&self, f: &Laurent<C>) -> Result<Multivector<C>> {
        let gf = self.reeb.apply(f)?;
        let beta = DiffForm::differential(f).checked_add(&self.eta.scale(&(f - &gf)))?;
        self.solve_flat(&beta)
    }

    /// `{f, g} = H_f(g) - g Gamma(f)`.
    pub fn bracket(&self, f: &Laurent<C>, g: &Laurent<C>) -> Result<Laurent<C>> {
        let hf = self.hamiltonian(f)?;
        Ok(hf.apply(g)? - g * &self.reeb.apply(f)?)
    }
}

/// Contact reduction of a degree-1 homogeneous symplectic form:
/// `eta = j*(i_Delta omega)`, checked against `d eta = j* omega`.
pub fn contact_reduce<C: Field>(omega: &DiffForm<C>, setup: &HomogeneousSetup<C>) -> Result<ContactData<C>> {
    require_degree(omega.degree(), 2)?;
    setup.chart().ensure_same(omega.chart())?;
    if !degree(omega, setup.delta())?.is(&C::one()) {
        return Err(Error::NotHomogeneous("symplectic form must have degree 1".into()));
    }
    if !omega.exterior_derivative().is_zero() {
        return Err(Error::NotHomogeneous("form is not closed".into()));
    }
    invert_symplectic(omega)?;
    let pair = setup.psi(omega, true)?.value;
    let eta = pair.second_or_zero();
    let cd = ContactData::from_form(eta)?;
    if cd.d_eta != *pair.first() {
        return Err(Error::ContactDegenerate("d eta differs from the pullback of omega".into()));
    }
    Ok(cd)
}

/// `{t f, t g}_L` restricted to `t = 1`, for functions on the slice.
pub fn reduced_poisson_bracket<C: Field>(
    lambda: &Multivector<C>,
    setup: &HomogeneousSetup<C>,
    f: &Laurent<C>,
    g: &Laurent<C>,
) -> Result<Laurent<C>> {
    let ft = setup.homogeneous_extension(f)?;
    let gt = setup.homogeneous_extension(g)?;
    let b = lambda.bracket_of_functions(&[ft, gt])?;
    b.specialize(setup.t_index(), &C::one())?.transport(setup.slice_chart())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;
    type MV = Multivector<Q>;
    type DF = DiffForm<Q>;

    fn vf(c: &Chart, names: &[&str]) -> MV {
        MV::basis_by_names(c, names).unwrap()
    }

    fn var(c: &Chart, n: &str) -> Laurent<Q> {
        Laurent::variable(c, n).unwrap()
    }

    #[test]
    fn poisson_examples() {
        let c = Chart::new(["q", "p"]).unwrap();
        assert!(is_poisson(&vf(&c, &["q", "p"])).unwrap().holds);
        assert!(is_poisson(&vf(&c, &["q", "p"]).scale(&var(&c, "q"))).unwrap().holds);
        let c3 = Chart::new(["x", "y", "z"]).unwrap();
        // Lie-Poisson structure of e(2)
        let l = vf(&c3, &["y", "z"]).scale(&var(&c3, "x")) + vf(&c3, &["z", "x"]).scale(&var(&c3, "y"));
        assert!(is_poisson(&l).unwrap().holds);
        let l = vf(&c3, &["x", "y"]).scale(&var(&c3, "x")) + vf(&c3, &["y", "z"]).scale(&var(&c3, "y"));
        let cert = is_poisson(&l).unwrap();
        assert!(!cert.holds);
        assert_eq!(cert.obstruction.degree(), 3);
        assert!(is_poisson(&vf(&c3, &["x"])).is_err());
    }

    #[test]
    fn jacobi_examples() {
        let c = Chart::new(["x"]).unwrap();
        let d = FirstOrderOp::new(MV::zero(&c, 2), Some(vf(&c, &["x"]))).unwrap();
        assert!(is_jacobi(&d).unwrap().holds);
        assert!(is_jacobi(&FirstOrderOp::<Q>::unit(&c)).is_err());
    }

    #[test]
    fn nambu_examples() {
        let c3 = Chart::new(["x", "y", "z"]).unwrap();
        let p = vf(&c3, &["x", "y", "z"]);
        assert!(nambu_check(&p, &default_test_functions(&c3)).unwrap().holds);

        let c6 = Chart::new(["x1", "x2", "x3", "x4", "x5", "x6"]).unwrap();
        let p = vf(&c6, &["x1", "x2", "x3"]) + vf(&c6, &["x4", "x5", "x6"]);
        let rep = nambu_check(&p, &default_test_functions(&c6)).unwrap();
        assert!(!rep.holds);
        assert_eq!(rep.witness.unwrap().len(), 2);
    }

    #[test]
    fn symplectic_inversion() {
        let c = Chart::new(["q", "p"]).unwrap();
        let w = DF::basis_by_names(&c, &["q", "p"]).unwrap();
        assert_eq!(invert_symplectic(&w).unwrap(), vf(&c, &["q", "p"]));
        let bad = w.scale(&(var(&c, "q") + Laurent::one(&c)));
        assert!(matches!(invert_symplectic(&bad), Err(Error::NotInvertibleOverRing(_))));
        let scaled = w.scale(&var(&c, "q"));
        let l = invert_symplectic(&scaled).unwrap();
        assert_eq!(l, vf(&c, &["q", "p"]).scale(&var(&c, "q").pow(-1).unwrap()));
    }

    #[test]
    fn hamiltonian_of_oscillator() {
        let c = Chart::new(["q", "p"]).unwrap();
        let (q, p) = (var(&c, "q"), var(&c, "p"));
        let h = (&q * &q + &p * &p).scale(&Q::new(1.into(), 2.into()));
        let x = hamiltonian_poisson(&vf(&c, &["q", "p"]), &h).unwrap();
        assert_eq!(x, MV::vector_field(&c, [(0, p.clone()), (1, -q.clone())]));
        assert!(hamiltonian_poisson(&vf(&c, &["q", "p"]), &Laurent::from_int(&c, 5)).unwrap().is_zero());
    }

    #[test]
    fn contact_reduction_of_dt_dx() {
        let c = Chart::with_homogeneity(["x", "t"], "t").unwrap();
        let setup = HomogeneousSetup::new(&c).unwrap();
        let omega = DF::basis_by_names(&c, &["t", "x"]).unwrap();
        let cd = contact_reduce(&omega, &setup).unwrap();
        let n = setup.slice_chart();
        assert_eq!(cd.eta, DF::basis_by_names(n, &["x"]).unwrap());
        assert!(cd.d_eta.is_zero());
        assert_eq!(cd.reeb, vf(n, &["x"]));

        let x = var(n, "x");
        let f = &x * &x + Laurent::one(n);
        let g = x.pow(3).unwrap();
        assert_eq!(cd.hamiltonian(&f).unwrap(), MV::vector_field(n, [(0, f.clone())]));
        let expected = &f * &g.partial(0) - &g * &f.partial(0);
        assert_eq!(cd.bracket(&f, &g).unwrap(), expected);
        let lambda = invert_symplectic(&omega).unwrap();
        assert_eq!(reduced_poisson_bracket(&lambda, &setup, &f, &g).unwrap(), expected);
    }

    #[test]
    fn contact_reduction_rejects_wrong_degree() {
        let c = Chart::with_homogeneity(["x", "t"], "t").unwrap();
        let setup = HomogeneousSetup::new(&c).unwrap();
        let omega = DF::basis_by_names(&c, &["t", "x"]).unwrap().scale(&var(&c, "t"));
        assert!(matches!(contact_reduce(&omega, &setup), Err(Error::NotHomogeneous(_))));
    }

    #[test]
    fn standard_contact_form_in_three_dimensions() {
        let c = Chart::new(["x", "y", "z"]).unwrap();
        let eta = DF::basis_by_names(&c, &["z"]).unwrap()
            - DF::basis_by_names(&c, &["x"]).unwrap().scale(&var(&c, "y"));
        let cd = ContactData::from_form(eta.clone()).unwrap();
        assert_eq!(cd.reeb, vf(&c, &["z"]));
        assert!(cd.d_eta.interior(&cd.reeb).unwrap().is_zero());
        assert!(pairing(&cd.reeb, &cd.eta).unwrap().is_one());
        let f = var(&c, "x") * var(&c, "z");
        let h = cd.hamiltonian(&f).unwrap();
        let rhs = DiffForm::differential(&f) + cd.eta.scale(&(&f - &cd.reeb.apply(&f).unwrap()));
        assert_eq!(cd.flat(&h).unwrap(), rhs);
    }
}
