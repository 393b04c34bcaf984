//! Lie-algebra cochains on matrices over the Weyl algebra.
//!
//! Elements of `gl_N ⊗ gl_V ⊗ 𝕎` are finite sums over elementary matrix
//! pairs with Weyl coefficients. The antisymmetrization map `phi_n` turns
//! the cyclic cocycles into Lie-algebra cochains; `theta` packages the
//! normalized invariant cocycles whose top evaluation on
//! `p_1 ∧ q_1 ∧ … ∧ p_n ∧ q_n` is `N · dim V`. The Chern-Weil side
//! (projection, curvature, `ρ`) and the characteristic power series live
//! here as well.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::matrix::Matrix;
use crate::poly::{Monomial, Polynomial, VarSet};
use crate::scalar::{gauss, GaussianRational, Scalar};
use crate::series::log_sinh_t_over_t;
use crate::tau::TauEngine;
use crate::weyl::{inv_factorial, TwistedTrace, WeylContext};
use crate::{Error, Poly, Result};

/// Row and column indices of an elementary pair `E_{ij} ⊗ E_{kl}`.
pub type PairKey = (u16, u16, u16, u16);

/// An element of `gl_N ⊗ gl_V ⊗ 𝕎`: a sum of elementary matrix pairs
/// `E_{ij} ⊗ E_{kl}` with Weyl-algebra coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GlWElement {
    n_size: usize,
    v_size: usize,
    terms: BTreeMap<PairKey, Poly>,
}

impl GlWElement {
    pub fn zero(n_size: usize, v_size: usize) -> Self {
        GlWElement {
            n_size,
            v_size,
            terms: BTreeMap::new(),
        }
    }

    /// The unit `id_N ⊗ id_V ⊗ 1`.
    pub fn one(w: &WeylContext, n_size: usize, v_size: usize) -> Self {
        GlWElement::from_weyl(w.one(), n_size, v_size)
    }

    /// Embeds a Weyl element as `id_N ⊗ id_V ⊗ a`.
    pub fn from_weyl(a: Poly, n_size: usize, v_size: usize) -> Self {
        let mut out = GlWElement::zero(n_size, v_size);
        for i in 0..n_size {
            for k in 0..v_size {
                out.add_part(i, i, k, k, a.clone());
            }
        }
        out
    }

    /// A single elementary term `E_{ij} ⊗ E_{kl} ⊗ a`.
    pub fn elementary(n_size: usize, v_size: usize, i: usize, j: usize, k: usize, l: usize, a: Poly) -> Self {
        let mut out = GlWElement::zero(n_size, v_size);
        out.add_part(i, j, k, l, a);
        out
    }

    pub fn n_size(&self) -> usize {
        self.n_size
    }

    pub fn v_size(&self) -> usize {
        self.v_size
    }

    pub fn add_part(&mut self, i: usize, j: usize, k: usize, l: usize, a: Poly) {
        if a.is_zero() {
            return;
        }
        let key = (i as u16, j as u16, k as u16, l as u16);
        match self.terms.remove(&key) {
            Some(existing) => {
                let sum = &existing + &a;
                if !sum.is_zero() {
                    self.terms.insert(key, sum);
                }
            }
            None => {
                self.terms.insert(key, a);
            }
        }
    }

    pub fn iter_parts(&self) -> impl Iterator<Item = (&PairKey, &Poly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.n_size, self.v_size), (other.n_size, other.v_size));
        let mut out = self.clone();
        for (&(i, j, k, l), a) in &other.terms {
            out.add_part(i as usize, j as usize, k as usize, l as usize, a.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = GlWElement::zero(self.n_size, self.v_size);
        for (&(i, j, k, l), a) in &self.terms {
            out.add_part(i as usize, j as usize, k as usize, l as usize, a.scale(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    /// The associative product contracting both matrix factors and taking
    /// the star product of the Weyl parts.
    pub fn mul(&self, w: &WeylContext, other: &Self) -> Self {
        assert_eq!((self.n_size, self.v_size), (other.n_size, other.v_size));
        let mut out = GlWElement::zero(self.n_size, self.v_size);
        for (&(i, j, k, l), a) in &self.terms {
            for (&(i2, j2, k2, l2), b) in &other.terms {
                if j != i2 || l != k2 {
                    continue;
                }
                out.add_part(i as usize, j2 as usize, k as usize, l2 as usize, w.moyal(a, b));
            }
        }
        out
    }

    pub fn commutator(&self, w: &WeylContext, other: &Self) -> Self {
        self.mul(w, other).add(&other.mul(w, self).neg())
    }
}

/// All permutations of `0..k` with their signs.
pub fn permutations(k: usize) -> Vec<(i64, Vec<usize>)> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::with_capacity(k);
    let mut used = vec![false; k];
    fn rec(k: usize, current: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(i64, Vec<usize>)>) {
        if current.len() == k {
            let mut inversions = 0;
            for a in 0..k {
                for b in a + 1..k {
                    if current[a] > current[b] {
                        inversions += 1;
                    }
                }
            }
            out.push((if inversions % 2 == 0 { 1 } else { -1 }, current.clone()));
            return;
        }
        for v in 0..k {
            if !used[v] {
                used[v] = true;
                current.push(v);
                rec(k, current, used, out);
                current.pop();
                used[v] = false;
            }
        }
    }
    rec(k, &mut current, &mut used, &mut out);
    out
}

/// The antisymmetrization of a degree-`k` cochain on the Weyl algebra into
/// a module-valued Lie-algebra cochain:
/// `Σ_σ sgn(σ) f(a_0 ⊗ a_{σ(1)} ⊗ …) tr(M_0 M_{σ(1)} …) tr(M'_0 M'_{σ(1)} …)`.
pub fn phi_n_with<F>(k: usize, f: F, args: &[GlWElement], modarg: &GlWElement) -> Scalar
where
    F: Fn(&[Poly]) -> Scalar,
{
    assert_eq!(args.len(), k, "argument count must match cochain degree");
    let mut acc = Scalar::zero();
    for (sign, perm) in permutations(k) {
        let mut ordered: Vec<&GlWElement> = Vec::with_capacity(k + 1);
        ordered.push(modarg);
        for &p in &perm {
            ordered.push(&args[p]);
        }
        let mut contribution = Scalar::zero();
        cyclic_term_sum(&ordered, &mut Vec::new(), &mut contribution, &f);
        if sign < 0 {
            acc = &acc - &contribution;
        } else {
            acc = &acc + &contribution;
        }
    }
    acc
}

fn cyclic_term_sum<F>(
    ordered: &[&GlWElement],
    chosen: &mut Vec<(PairKey, Poly)>,
    acc: &mut Scalar,
    f: &F,
) where
    F: Fn(&[Poly]) -> Scalar,
{
    let pos = chosen.len();
    if pos == ordered.len() {
        let first = &chosen[0].0;
        let last = &chosen[pos - 1].0;
        if last.1 == first.0 && last.3 == first.2 {
            let slots: Vec<Poly> = chosen.iter().map(|(_, a)| a.clone()).collect();
            *acc = &*acc + &f(&slots);
        }
        return;
    }
    for (&key, a) in ordered[pos].iter_parts() {
        if pos > 0 {
            let prev = &chosen[pos - 1].0;
            if prev.1 != key.0 || prev.3 != key.2 {
                continue;
            }
        }
        chosen.push((key, a.clone()));
        cyclic_term_sum(ordered, chosen, acc, f);
        chosen.pop();
    }
}

/// `phi_n` applied to the cocycle `τ_k`.
pub fn phi_n(engine: &TauEngine, k: usize, args: &[GlWElement], modarg: &GlWElement) -> Scalar {
    phi_n_with(k, |slots| engine.tau_scalar(k, slots), args, modarg)
}

/// The invariant cocycle evaluated at the unit module element, normalized
/// by `(-1/ħ)^k` so the top value on `p_1 ∧ q_1 ∧ … ∧ p_n ∧ q_n` is
/// `N · dim V`.
pub fn theta(engine: &TauEngine, w: &WeylContext, twok: usize, args: &[GlWElement]) -> Scalar {
    assert!(twok.is_multiple_of(2), "theta has even degree");
    assert!(!args.is_empty() || twok == 0);
    let (n_size, v_size) = if args.is_empty() {
        (1, 1)
    } else {
        (args[0].n_size(), args[0].v_size())
    };
    let modarg = GlWElement::one(w, n_size, v_size);
    let raw = phi_n(engine, twok, args, &modarg);
    let k = (twok / 2) as i64;
    let norm = Scalar::term(gauss(if k % 2 == 0 { 1 } else { -1 }, 1, 0, 1), -k);
    &raw * &norm
}

/// An evaluation rule for a module-valued Lie-algebra cochain.
pub type CochainEval<'a> = Box<dyn Fn(&[GlWElement], &GlWElement) -> Scalar + 'a>;

/// A module-valued Lie-algebra cochain, evaluated on argument tuples and a
/// module element.
pub struct LieCochain<'a> {
    degree: usize,
    eval: CochainEval<'a>,
}

impl<'a> LieCochain<'a> {
    pub fn new<F>(degree: usize, eval: F) -> Self
    where
        F: Fn(&[GlWElement], &GlWElement) -> Scalar + 'a,
    {
        LieCochain {
            degree,
            eval: Box::new(eval),
        }
    }

    /// The cochain `phi_n(τ_k)`.
    pub fn from_tau(engine: &'a TauEngine, degree: usize) -> Self {
        LieCochain::new(degree, move |args, modarg| {
            phi_n(engine, degree, args, modarg)
        })
    }

    /// Embeds a scalar-valued cochain with trivial coefficients: the value
    /// is multiplied by the normalized trace of the module argument. The
    /// trace is linear and sends the unit to one, so evaluating the
    /// coboundary at the unit module argument reproduces the
    /// trivial-coefficient differential (the module terms see `[x, 1] = 0`).
    pub fn scalar_valued<F>(degree: usize, f: F) -> Self
    where
        F: Fn(&[GlWElement]) -> Scalar + 'a,
    {
        LieCochain::new(degree, move |args, modarg| {
            let dim = (modarg.n_size() * modarg.v_size()) as i64;
            let mut tr = Scalar::zero();
            for (&(i, j, k, l), a) in modarg.iter_parts() {
                if i == j && k == l {
                    tr = &tr + &a.constant_term();
                }
            }
            let eps = tr.mul_term(&gauss(1, dim, 0, 1), 0);
            &f(args) * &eps
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn eval(&self, args: &[GlWElement], modarg: &GlWElement) -> Scalar {
        assert_eq!(args.len(), self.degree);
        (self.eval)(args, modarg)
    }
}

/// The Lie-algebra coboundary with coefficients in the dual of the adjoint
/// module, optionally twisted: the module term evaluates the lower cochain
/// at `x_i ⋆ m - m ⋆ γ(x_i)`, and the bracket terms insert `[x_i, x_j]`.
pub fn lie_diff<'a>(
    w: &'a WeylContext,
    c: &'a LieCochain<'a>,
    twist: Option<&'a dyn Fn(&GlWElement) -> GlWElement>,
) -> LieCochain<'a> {
    let degree = c.degree() + 1;
    LieCochain::new(degree, move |args, modarg| {
        assert_eq!(args.len(), degree);
        let mut acc = Scalar::zero();
        for i in 0..degree {
            let rest: Vec<GlWElement> = args
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, x)| x.clone())
                .collect();
            let twisted = match twist {
                Some(t) => t(&args[i]),
                None => args[i].clone(),
            };
            let moved = args[i]
                .mul(w, modarg)
                .add(&modarg.mul(w, &twisted).neg());
            let term = c.eval(&rest, &moved);
            if i % 2 == 0 {
                acc = &acc + &term;
            } else {
                acc = &acc - &term;
            }
        }
        for i in 0..degree {
            for j in i + 1..degree {
                let bracket = args[i].commutator(w, &args[j]);
                let mut inserted = Vec::with_capacity(degree - 1);
                inserted.push(bracket);
                for (r, x) in args.iter().enumerate() {
                    if r != i && r != j {
                        inserted.push(x.clone());
                    }
                }
                let term = c.eval(&inserted, modarg);
                if (i + j + 1) % 2 == 0 {
                    acc = &acc + &term;
                } else {
                    acc = &acc - &term;
                }
            }
        }
        acc
    })
}

/// An element of the reference subalgebra: a pair of scalar matrices and a
/// quadratic Weyl part (stored as the ambient element, so the projection
/// restricted to the subalgebra is the identity).
#[derive(Clone, Debug, PartialEq)]
pub struct HElem {
    pub n_mat: Matrix<Scalar>,
    pub v_mat: Matrix<Scalar>,
    pub sp_part: Poly,
}

impl HElem {
    pub fn zero(w: &WeylContext, n_size: usize, v_size: usize) -> Self {
        HElem {
            n_mat: Matrix::from_fn(n_size, n_size, |_, _| Scalar::zero()),
            v_mat: Matrix::from_fn(v_size, v_size, |_, _| Scalar::zero()),
            sp_part: Poly::zero(w.vars()),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        HElem {
            n_mat: self.n_mat.add_mat(&other.n_mat),
            v_mat: self.v_mat.add_mat(&other.v_mat),
            sp_part: &self.sp_part + &other.sp_part,
        }
    }

    pub fn neg(&self) -> Self {
        HElem {
            n_mat: self.n_mat.neg_mat(),
            v_mat: self.v_mat.neg_mat(),
            sp_part: -&self.sp_part,
        }
    }

    /// Componentwise bracket; the quadratic parts use the star commutator.
    pub fn bracket(&self, w: &WeylContext, other: &Self) -> Self {
        HElem {
            n_mat: self
                .n_mat
                .mul_mat(&other.n_mat)
                .sub_mat(&other.n_mat.mul_mat(&self.n_mat)),
            v_mat: self
                .v_mat
                .mul_mat(&other.v_mat)
                .sub_mat(&other.v_mat.mul_mat(&self.v_mat)),
            sp_part: w.commutator(&self.sp_part, &other.sp_part),
        }
    }

    /// The ambient element `M ⊗ id ⊗ 1 + id ⊗ M' ⊗ 1 + id ⊗ id ⊗ a`.
    pub fn embed(&self, w: &WeylContext) -> GlWElement {
        let n_size = self.n_mat.rows();
        let v_size = self.v_mat.rows();
        let mut out = GlWElement::zero(n_size, v_size);
        for i in 0..n_size {
            for j in 0..n_size {
                let c = self.n_mat.get(i, j);
                if !c.is_zero() {
                    for k in 0..v_size {
                        out.add_part(i, j, k, k, Poly::constant(w.vars(), c.clone()));
                    }
                }
            }
        }
        for k in 0..v_size {
            for l in 0..v_size {
                let c = self.v_mat.get(k, l);
                if !c.is_zero() {
                    for i in 0..n_size {
                        out.add_part(i, i, k, l, Poly::constant(w.vars(), c.clone()));
                    }
                }
            }
        }
        out.add(&GlWElement::from_weyl(self.sp_part.clone(), n_size, v_size))
    }
}

fn degree_part(a: &Poly, d: u32) -> Poly {
    let mut out = Poly::zero(a.vars());
    for (m, c) in a.iter_terms() {
        if m.degree() == d as usize {
            out.add_term(m.clone(), c.clone());
        }
    }
    out
}

/// The standard projection onto the reference subalgebra: the two matrix
/// components collect the degree-zero Weyl part against the opposite
/// trace, and the quadratic component collects the degree-two part against
/// both traces.
pub fn pr(w: &WeylContext, g: &GlWElement) -> HElem {
    let n_size = g.n_size();
    let v_size = g.v_size();
    let mut out = HElem::zero(w, n_size, v_size);
    let n_inv = Scalar::from_ratio(1, n_size as i64);
    let v_inv = Scalar::from_ratio(1, v_size as i64);
    let nv_inv = Scalar::from_ratio(1, (n_size * v_size) as i64);
    for (&(i, j, k, l), a) in g.iter_parts() {
        let a0 = degree_part(a, 0).as_constant().unwrap_or_else(Scalar::zero);
        let a2 = degree_part(a, 2);
        if k == l && !a0.is_zero() {
            let cur = out.n_mat.get(i as usize, j as usize).clone();
            out.n_mat
                .set(i as usize, j as usize, &cur + &(&a0 * &v_inv));
        }
        if i == j && !a0.is_zero() {
            let cur = out.v_mat.get(k as usize, l as usize).clone();
            out.v_mat
                .set(k as usize, l as usize, &cur + &(&a0 * &n_inv));
        }
        if i == j && k == l && !a2.is_zero() {
            out.sp_part = &out.sp_part + &a2.scale(&nv_inv);
        }
    }
    out
}

/// The curvature of the projection: `C(u ∧ v) = [pr u, pr v] - pr([u, v])`.
pub fn cw_curvature(w: &WeylContext, u: &GlWElement, v: &GlWElement) -> HElem {
    let pu = pr(w, u);
    let pv = pr(w, v);
    pu.bracket(w, &pv).add(&pr(w, &u.commutator(w, v)).neg())
}

/// An invariant power series on the reference subalgebra, truncated at a
/// fixed order: for each polynomial degree up to the order it supplies
/// the polarized symmetric multilinear component.
pub struct InvariantSeries<'a> {
    order: usize,
    component: SeriesComponent<'a>,
}

/// A degree-indexed multilinear component of an invariant series.
pub type SeriesComponent<'a> = Box<dyn Fn(usize, &[HElem]) -> Scalar + 'a>;

impl<'a> InvariantSeries<'a> {
    pub fn new<F>(order: usize, component: F) -> Self
    where
        F: Fn(usize, &[HElem]) -> Scalar + 'a,
    {
        InvariantSeries {
            order,
            component: Box::new(component),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The degree-`q` polarized component on a `q`-tuple of subalgebra
    /// elements.
    pub fn component(&self, q: usize, args: &[HElem]) -> Result<Scalar> {
        if q > self.order {
            return Err(Error::Truncation(format!(
                "series truncated at order {}, degree {} requested",
                self.order, q
            )));
        }
        assert_eq!(args.len(), q);
        Ok((self.component)(q, args))
    }

    /// The series with components `tr(M_1 ⋯ M_q)` on the first matrix
    /// factor, symmetrized, and constant term `c`.
    pub fn n_trace_series(order: usize, constant: Scalar) -> Self {
        InvariantSeries::new(order, move |q, args: &[HElem]| {
            if q == 0 {
                return constant.clone();
            }
            let mut acc = Scalar::zero();
            let perms = permutations(q);
            let count = perms.len() as i64;
            for (_, perm) in perms {
                let mut prod = args[perm[0]].n_mat.clone();
                for &p in &perm[1..] {
                    prod = prod.mul_mat(&args[p].n_mat);
                }
                acc = &acc + &prod.trace();
            }
            acc.mul_term(&gauss(1, count, 0, 1), 0)
        })
    }
}

/// The Chern-Weil cocycle of an invariant series in degree
/// `q = (number of arguments)/2`:
/// `ρ(P)(v_1 ∧ … ∧ v_{2q}) = (1/q!) Σ sgn(σ) P(C(v_{σ(1)}, v_{σ(2)}), …)`
/// over permutations pairing the arguments in increasing order.
pub fn cw_rho(w: &WeylContext, p: &InvariantSeries, args: &[GlWElement]) -> Result<Scalar> {
    assert!(args.len().is_multiple_of(2), "ρ(P) takes an even tuple");
    let q = args.len() / 2;
    if q == 0 {
        return p.component(0, &[]);
    }
    if q > p.order() {
        return Err(Error::Truncation(format!(
            "series truncated at order {}, degree {} requested",
            p.order(),
            q
        )));
    }
    let mut acc = Scalar::zero();
    for (sign, perm) in permutations(2 * q) {
        if (0..q).any(|i| perm[2 * i] > perm[2 * i + 1]) {
            continue;
        }
        let curvatures: Vec<HElem> = (0..q)
            .map(|i| cw_curvature(w, &args[perm[2 * i]], &args[perm[2 * i + 1]]))
            .collect();
        let value = p.component(q, &curvatures)?;
        if sign < 0 {
            acc = &acc - &value;
        } else {
            acc = &acc + &value;
        }
    }
    Ok(acc.mul_term(&gauss(1, factorial_i64(q), 0, 1), 0))
}

fn factorial_i64(n: usize) -> i64 {
    (1..=n as i64).product::<i64>().max(1)
}

/// Truncates a polynomial to total degree at most `order`.
fn truncate_poly(a: &Polynomial<Scalar>, order: usize) -> Polynomial<Scalar> {
    let mut out = Polynomial::zero(a.vars());
    for (m, c) in a.iter_terms() {
        if m.degree() <= order {
            out.add_term(m.clone(), c.clone());
        }
    }
    out
}

/// `exp` of a polynomial with zero constant term, truncated by total
/// degree.
fn exp_truncated(a: &Polynomial<Scalar>, order: usize) -> Polynomial<Scalar> {
    assert!(a.constant_term().is_zero(), "exp needs a zero constant term");
    let mut out = Polynomial::one(a.vars());
    let mut power = Polynomial::one(a.vars());
    for m in 1..=order {
        power = truncate_poly(&(&power * a), order);
        if power.is_zero() {
            break;
        }
        out = &out + &power.scale(&inv_factorial(m));
    }
    out
}

/// The genus series of a square matrix, as a polynomial in the formal
/// scale variable: `exp(-1/2 Σ_j c_j tr((Y/2)^{2j}) t^{2j})` with the
/// coefficients `c_j` of `log(sinh(s)/s)`.
pub fn a_hat_series(y: &Matrix<Scalar>, order: usize) -> Polynomial<Scalar> {
    let tvars = VarSet::numbered("t", 1);
    let jmax = order / 2;
    let coeffs = log_sinh_t_over_t(jmax);
    let mut exponent = Polynomial::zero(&tvars);
    let y_sq = y.mul_mat(y);
    let mut y_pow = Matrix::<Scalar>::from_fn(y.rows(), y.rows(), |i, j| {
        if i == j {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    for j in 1..=jmax {
        y_pow = y_pow.mul_mat(&y_sq);
        let tr = y_pow.trace();
        let base = Scalar::term(
            GaussianRational::new(coeffs[j - 1].clone(), BigRational::zero()),
            0,
        );
        let factor = base
            .mul_term(&gauss(-1, 2, 0, 1), 0)
            .mul_term(&gauss(1, 1i64 << (2 * j), 0, 1), 0);
        let coeff = &tr * &factor;
        if !coeff.is_zero() {
            let mut term = Polynomial::zero(&tvars);
            term.add_term(Monomial(vec![2 * j as u16]), coeff);
            exponent = &exponent + &term;
        }
    }
    exp_truncated(&exponent, order)
}

/// The genus series with the matrix rescaled by `ħ`.
pub fn a_hat_hbar_series(y: &Matrix<Scalar>, order: usize) -> Polynomial<Scalar> {
    let scaled = y.scale_entries(&Scalar::hbar(1));
    a_hat_series(&scaled, order)
}

/// `tr(exp X)` truncated by power, as a polynomial in the scale variable.
pub fn ch_series(x: &Matrix<Scalar>, order: usize) -> Polynomial<Scalar> {
    ch_twisted_series(
        &Matrix::from_fn(x.rows(), x.rows(), |i, j| {
            if i == j {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        }),
        x,
        order,
    )
}

/// `tr(γ exp X)` truncated by power.
pub fn ch_twisted_series(gamma: &Matrix<Scalar>, x: &Matrix<Scalar>, order: usize) -> Polynomial<Scalar> {
    let tvars = VarSet::numbered("t", 1);
    let mut out = Polynomial::zero(&tvars);
    let mut x_pow = Matrix::<Scalar>::from_fn(x.rows(), x.rows(), |i, j| {
        if i == j {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    for m in 0..=order {
        let tr = gamma.mul_mat(&x_pow).trace();
        let c = &tr * &inv_factorial(m);
        if !c.is_zero() {
            let mut term = Polynomial::zero(&tvars);
            term.add_term(Monomial(vec![m as u16]), c);
            out = &out + &term;
        }
        if m < order {
            x_pow = x_pow.mul_mat(x);
        }
    }
    out
}

/// `J_γ(X) = Σ_i tr_γ(X^{⋆i}) / i!` truncated: the twisted trace of the
/// star exponential of a quadratic transversal element.
pub fn j_gamma_series(trace: &TwistedTrace, w: &WeylContext, x: &Poly, order: usize) -> Polynomial<Scalar> {
    let tvars = VarSet::numbered("t", 1);
    let mut out = Polynomial::zero(&tvars);
    let mut x_pow = w.one();
    for m in 0..=order {
        let tr = trace.eval(&x_pow);
        let c = &tr * &inv_factorial(m);
        if !c.is_zero() {
            let mut term = Polynomial::zero(&tvars);
            term.add_term(Monomial(vec![m as u16]), c);
            out = &out + &term;
        }
        if m < order {
            x_pow = w.moyal(&x_pow, x);
        }
    }
    out
}
