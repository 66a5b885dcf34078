//! Reference computations that share no code path with the library's
//! bracket implementations. They are deliberately naive.

#![allow(dead_code)]

use pjcalc::exterior::SkewTensor;
use pjcalc::ring::Laurent;
use pjcalc::{Chart, FirstOrderOp, Multivector, Rational, Scalar};

fn neg_one_pow(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::from_integer(1.into())
    } else {
        Rational::from_integer((-1).into())
    }
}

#[derive(Clone, Debug)]
enum Atom {
    Fun(Scalar),
    Dir(usize),
}

fn atom_degree(atoms: &[Atom]) -> i64 {
    atoms.iter().filter(|a| matches!(a, Atom::Dir(_))).count() as i64
}

fn wedge_atoms(chart: &Chart, atoms: &[Atom]) -> Multivector {
    let mut out = SkewTensor::scalar(Laurent::one(chart));
    for a in atoms {
        out = match a {
            Atom::Fun(f) => out.scale(f),
            Atom::Dir(i) => out.wedge(&SkewTensor::basis(chart, &[*i])).unwrap(),
        };
    }
    out
}

/// `None` stands for zero in degree -1.
type Partial = Option<Multivector>;

fn add(a: Partial, b: Partial) -> Partial {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.checked_add(&y).unwrap()),
    }
}

/// Bracket of two decomposables, expanded recursively with the graded
/// Leibniz rule in the second slot and graded antisymmetry, anchored at
/// `[[X, f]] = X(f)` and `[[@i, @j]] = 0`.
fn leibniz(chart: &Chart, a: &[Atom], b: &[Atom]) -> Partial {
    let (da, db) = (atom_degree(a), atom_degree(b));
    if da + db == 0 {
        return None;
    }
    if b.len() > 1 {
        let (b0, rest) = (&b[..1], &b[1..]);
        let t1 = leibniz(chart, a, b0).map(|x| x.wedge(&wedge_atoms(chart, rest)).unwrap());
        let s = neg_one_pow((da - 1) * atom_degree(b0));
        let t2 = leibniz(chart, a, rest).map(|x| wedge_atoms(chart, b0).wedge(&x).unwrap().scale_const(&s));
        return add(t1, t2);
    }
    if a.len() > 1 {
        let s = -neg_one_pow((da - 1) * (db - 1));
        return leibniz(chart, b, a).map(|x| x.scale_const(&s));
    }
    Some(match (&a[0], &b[0]) {
        (Atom::Dir(i), Atom::Fun(g)) => SkewTensor::scalar(g.partial(*i)),
        (Atom::Fun(f), Atom::Dir(i)) => SkewTensor::scalar(-f.partial(*i)),
        (Atom::Dir(_), Atom::Dir(_)) => SkewTensor::zero(chart, 1),
        (Atom::Fun(_), Atom::Fun(_)) => unreachable!(),
    })
}

fn decomposables(p: &Multivector) -> Vec<Vec<Atom>> {
    p.terms()
        .map(|(idx, c)| {
            std::iter::once(Atom::Fun(c.clone()))
                .chain(idx.iter().map(|&i| Atom::Dir(i)))
                .collect()
        })
        .collect()
}

/// Schouten bracket by bilinear expansion over decomposable terms.
/// Returns `None` when the result is zero.
pub fn schouten(p: &Multivector, q: &Multivector) -> Option<Multivector> {
    let chart = p.chart();
    let mut total = None;
    for a in decomposables(p) {
        for b in decomposables(q) {
            total = add(total, leibniz(chart, &a, &b));
        }
    }
    total.filter(|t| !t.is_zero())
}

/// Heap-free permutation generation with parity.
fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    if n == 0 {
        return vec![(vec![], true)];
    }
    let mut out = Vec::new();
    for (perm, even) in permutations(n - 1) {
        for pos in 0..=perm.len() {
            let mut p = perm.clone();
            p.insert(pos, n - 1);
            // inserting at `pos` passes over `len - pos` elements
            let flips = perm.len() - pos;
            out.push((p, even == (flips % 2 == 0)));
        }
    }
    out
}

/// `{f_1, .., f_k}_P = sum_I P_I det(d f_b / d x_{I_a})`.
pub fn multibracket(p: &Multivector, fs: &[Scalar]) -> Scalar {
    let chart = p.chart();
    let k = fs.len();
    assert_eq!(p.degree(), k);
    let mut total = Laurent::zero(chart);
    for (idx, c) in p.terms() {
        for (perm, even) in permutations(k) {
            let mut term = c.clone();
            for a in 0..k {
                term = term * fs[perm[a]].partial(idx[a]);
            }
            total = if even { total + term } else { total - term };
        }
    }
    total
}

/// `D(f_1..f_k) = {f}_D0 + sum_i (-1)^(i+1) f_i {f without i}_D1`.
pub fn op_bracket(d: &FirstOrderOp, fs: &[Scalar]) -> Scalar {
    let mut total = multibracket(d.first(), fs);
    if let Some(d1) = d.second() {
        for i in 0..fs.len() {
            let rest: Vec<Scalar> = fs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, f)| f.clone()).collect();
            let term = &fs[i] * &multibracket(d1, &rest);
            total = if i % 2 == 0 { total + term } else { total - term };
        }
    }
    total
}

/// Jacobiator `{{f,g},h} + {{g,h},f} + {{h,f},g}` of a binary bracket.
pub fn jacobiator(br: &dyn Fn(&Scalar, &Scalar) -> Scalar, f: &Scalar, g: &Scalar, h: &Scalar) -> Scalar {
    br(&br(f, g), h) + br(&br(g, h), f) + br(&br(h, f), g)
}

/// First triple of `family` violating the Jacobi identity of `br`.
pub fn jacobi_counterexample(
    br: &dyn Fn(&Scalar, &Scalar) -> Scalar,
    family: &[Scalar],
) -> Option<[Scalar; 3]> {
    for (i, f) in family.iter().enumerate() {
        for (j, g) in family.iter().enumerate().skip(i + 1) {
            for h in family.iter().skip(j + 1) {
                if !jacobiator(br, f, g, h).is_zero() {
                    return Some([f.clone(), g.clone(), h.clone()]);
                }
            }
        }
    }
    None
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Fundamental identity of a k-ary bracket:
/// `E(D(g)) = sum_i D(g_1 .. E(g_i) .. g_k)` with `E = D(f_1..f_(k-1), .)`.
/// Returns the first violating `(f, g)`; `preferred` tuples of `f` are
/// tried first.
pub fn fundamental_identity_counterexample(
    d: &FirstOrderOp,
    family: &[Scalar],
    preferred: &[Vec<Scalar>],
) -> Option<(Vec<Scalar>, Vec<Scalar>)> {
    let k = d.degree();
    let mut f_tuples: Vec<Vec<Scalar>> = preferred.to_vec();
    f_tuples.extend(subsets(family.len(), k - 1).into_iter().map(|s| s.iter().map(|&i| family[i].clone()).collect()));
    let g_idx_tuples = subsets(family.len(), k);
    let g_tuples: Vec<Vec<Scalar>> = g_idx_tuples
        .iter()
        .map(|s| s.iter().map(|&i| family[i].clone()).collect())
        .collect();
    let d_of_g: Vec<Scalar> = g_tuples.iter().map(|g| op_bracket(d, g)).collect();
    for f in &f_tuples {
        let e = |h: &Scalar| {
            let mut args = f.clone();
            args.push(h.clone());
            op_bracket(d, &args)
        };
        let e_of_family: Vec<Scalar> = family.iter().map(e).collect();
        for (g_idx, g) in g_idx_tuples.iter().enumerate() {
            let lhs = e(&d_of_g[g_idx]);
            let mut rhs = Laurent::zero(d.chart());
            for i in 0..k {
                let mut args = g_tuples[g_idx].clone();
                args[i] = e_of_family[g[i]].clone();
                rhs = rhs + op_bracket(d, &args);
            }
            if lhs != rhs {
                return Some((f.clone(), g_tuples[g_idx].clone()));
            }
        }
    }
    None
}

/// Coordinates and pairwise products.
pub fn coordinate_family(chart: &Chart) -> Vec<Scalar> {
    let n = chart.dim();
    let mut out: Vec<Scalar> = (0..n).map(|i| Laurent::variable_at(chart, i)).collect();
    for i in 0..n {
        for j in i..n {
            out.push(Laurent::variable_at(chart, i) * Laurent::variable_at(chart, j));
        }
    }
    out
}
