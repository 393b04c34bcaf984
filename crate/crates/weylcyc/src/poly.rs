//! Sparse multivariate polynomials over an exact coefficient ring.
//!
//! Polynomials are generic over the coefficient type through the [`Coeff`]
//! trait so the same engine serves Gaussian-rational matrices, the Laurent
//! scalars of the ground ring, and plain rationals. Monomials are kept in
//! graded-lexicographic order, which makes printing deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::{GaussianRational, Scalar};

/// Coefficient ring bound for [`Polynomial`].
///
/// Implementors are exact commutative rings containing the rationals.
pub trait Coeff:
    Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Zero + One + Neg<Output = Self>
{
    /// Embeds the rational `num/den` into the ring.
    fn from_i64_ratio(num: i64, den: i64) -> Self;
}

impl Coeff for Scalar {
    fn from_i64_ratio(num: i64, den: i64) -> Self {
        Scalar::from_ratio(num, den)
    }
}

impl Coeff for GaussianRational {
    fn from_i64_ratio(num: i64, den: i64) -> Self {
        Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }
}

impl Coeff for BigRational {
    fn from_i64_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

/// An ordered set of named generators shared by the polynomials built
/// over it. Two sets are interchangeable exactly when their name lists
/// agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    /// Builds a variable set from explicit names.
    pub fn new<S: Into<String>>(names: Vec<S>) -> Arc<Self> {
        Arc::new(VarSet { names: names.into_iter().map(Into::into).collect() })
    }

    /// `prefix1 .. prefixm`.
    pub fn numbered(prefix: &str, m: usize) -> Arc<Self> {
        VarSet::new((1..=m).map(|i| format!("{}{}", prefix, i)).collect::<Vec<_>>())
    }

    /// Weyl generators in symplectic-pair order: `p1, q1, .., pn, qn`.
    ///
    /// Index `2s-2` is `ps` and index `2s-1` is `qs`.
    pub fn weyl(n: usize) -> Arc<Self> {
        let mut names = Vec::with_capacity(2 * n);
        for s in 1..=n {
            names.push(format!("p{}", s));
            names.push(format!("q{}", s));
        }
        VarSet::new(names)
    }

    /// Number of generators.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// True for the empty generator set.
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Name of generator `i`.
    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// Index of a generator by name.
    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// All names, in order.
    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// Exponent vector of a monomial, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    /// The empty monomial 1 over `nvars` generators.
    pub fn unit(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    /// Total degree.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|e| *e as usize).sum()
    }

    /// Componentwise sum.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// True when every exponent vanishes.
    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over the coefficient ring `C`.
///
/// Zero coefficients are never stored, so the zero polynomial is the
/// empty term map and equality is structural. All arithmetic demands
/// matching generator contexts and panics on a mismatch; public entry
/// points that accept external input validate contexts beforehand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<C: Coeff> {
    vars: Arc<VarSet>,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Polynomial<C> {
    /// The zero polynomial.
    pub fn zero(vars: &Arc<VarSet>) -> Self {
        Polynomial { vars: Arc::clone(vars), terms: BTreeMap::new() }
    }

    /// A constant polynomial.
    pub fn constant(vars: &Arc<VarSet>, c: C) -> Self {
        let mut p = Polynomial::zero(vars);
        p.add_term(Monomial::unit(vars.len()), c);
        p
    }

    /// The unit polynomial 1.
    pub fn one(vars: &Arc<VarSet>) -> Self {
        Polynomial::constant(vars, C::one())
    }

    /// The generator `x_i`.
    pub fn var(vars: &Arc<VarSet>, i: usize) -> Self {
        assert!(i < vars.len(), "variable index out of range");
        let mut exps = vec![0u16; vars.len()];
        exps[i] = 1;
        let mut p = Polynomial::zero(vars);
        p.add_term(Monomial(exps), C::one());
        p
    }

    /// A single term `c * prod x_i^{e_i}` given by `(index, exponent)`
    /// pairs.
    pub fn monomial(vars: &Arc<VarSet>, pairs: &[(usize, u16)], c: C) -> Self {
        let mut exps = vec![0u16; vars.len()];
        for (i, e) in pairs {
            assert!(*i < vars.len(), "variable index out of range");
            exps[*i] += e;
        }
        let mut p = Polynomial::zero(vars);
        p.add_term(Monomial(exps), c);
        p
    }

    /// The generator context.
    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    /// Adds `c * m` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Iterates over `(monomial, coefficient)` pairs in graded-lex order.
    pub fn iter_terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    /// Number of stored terms.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of the empty monomial.
    pub fn constant_term(&self) -> C {
        self.terms
            .get(&Monomial::unit(self.vars.len()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().expect("nonempty");
                if m.is_unit() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Largest total degree in the designated variables; `None` for zero.
    pub fn degree_in(&self, indices: &[usize]) -> Option<usize> {
        self.terms
            .keys()
            .map(|m| indices.iter().map(|i| m.0[*i] as usize).sum())
            .max()
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        let mut out = Polynomial::zero(&self.vars);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a.clone() * c.clone());
        }
        out
    }

    /// The partial derivative with respect to generator `i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] = e - 1;
            out.add_term(Monomial(exps), c.clone() * C::from_i64_ratio(e as i64, 1));
        }
        out
    }

    /// The antiderivative with respect to generator `i`, with zero
    /// constant of integration.
    pub fn antiderivative(&self, i: usize) -> Self {
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            let mut exps = m.0.clone();
            exps[i] = e + 1;
            out.add_term(Monomial(exps), c.clone() * C::from_i64_ratio(1, (e + 1) as i64));
        }
        out
    }

    /// Sets the designated variables to zero, dropping every term that
    /// contains one of them.
    pub fn eval_zero(&self, indices: &[usize]) -> Self {
        let mut out = Polynomial::zero(&self.vars);
        'terms: for (m, c) in &self.terms {
            for i in indices {
                if m.0[*i] != 0 {
                    continue 'terms;
                }
            }
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// Substitutes `images[i]` for generator `i`. All images must share a
    /// context, which becomes the context of the result.
    pub fn substitute(&self, images: &[Polynomial<C>]) -> Polynomial<C> {
        assert_eq!(images.len(), self.vars.len(), "one image per generator required");
        let target = images
            .first()
            .map(|p| Arc::clone(&p.vars))
            .unwrap_or_else(|| Arc::clone(&self.vars));
        for img in images {
            assert_eq!(img.vars.names(), target.names(), "substitution images mix contexts");
        }
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(&target, c.clone());
            for (i, e) in m.0.iter().enumerate() {
                for _ in 0..*e {
                    term = &term * &images[i];
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Substitutes a single generator, leaving the others in place.
    pub fn substitute_var(&self, i: usize, image: &Polynomial<C>) -> Polynomial<C> {
        let images: Vec<Polynomial<C>> = (0..self.vars.len())
            .map(|j| if j == i { image.clone() } else { Polynomial::var(&self.vars, j) })
            .collect();
        self.substitute(&images)
    }

    /// Splits every term into the sub-monomial supported on `second` and
    /// the complementary sub-monomial, returning
    /// `(first_part, second_part, coefficient)` triples in the shared
    /// context.
    pub fn split_terms(&self, second: &[bool]) -> Vec<(Monomial, Monomial, C)> {
        assert_eq!(second.len(), self.vars.len());
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut a = vec![0u16; self.vars.len()];
                let mut b = vec![0u16; self.vars.len()];
                for (i, e) in m.0.iter().enumerate() {
                    if second[i] {
                        b[i] = *e;
                    } else {
                        a[i] = *e;
                    }
                }
                (Monomial(a), Monomial(b), c.clone())
            })
            .collect()
    }

    /// Integer power.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Polynomial::one(&self.vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn assert_same_ctx(&self, other: &Self) {
        assert_eq!(
            self.vars.names(),
            other.vars.names(),
            "polynomial contexts differ"
        );
    }
}

impl Polynomial<Scalar> {
    /// Multiplies every coefficient by the scalar `s`.
    pub fn scale_scalar(&self, s: &Scalar) -> Self {
        self.scale(s)
    }
}

impl<C: Coeff> Add for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: &Polynomial<C>) -> Polynomial<C> {
        self.assert_same_ctx(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: &Polynomial<C>) -> Polynomial<C> {
        self.assert_same_ctx(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coeff> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: &Polynomial<C>) -> Polynomial<C> {
        self.assert_same_ctx(rhs);
        let mut out = Polynomial::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coeff> Add for Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: Polynomial<C>) -> Polynomial<C> {
        &self + &rhs
    }
}

impl<C: Coeff> Sub for Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: Polynomial<C>) -> Polynomial<C> {
        &self - &rhs
    }
}

impl<C: Coeff> Mul for Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: Polynomial<C>) -> Polynomial<C> {
        &self * &rhs
    }
}

impl<C: Coeff> Neg for Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        -&self
    }
}

fn fmt_monomial(vars: &VarSet, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(vars.name(i).to_string()),
            e => parts.push(format!("{}^{}", vars.name(i), e)),
        }
    }
    parts.join("*")
}

impl<C: Coeff> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let ms = fmt_monomial(&self.vars, m);
            let cs = c.to_string();
            if ms.is_empty() {
                write!(f, "{}", cs)?;
            } else if cs == "1" {
                write!(f, "{}", ms)?;
            } else if cs == "-1" {
                write!(f, "-{}", ms)?;
            } else if cs.contains(' ') || cs.contains('+') {
                write!(f, "({})*{}", cs, ms)?;
            } else {
                write!(f, "{}*{}", cs, ms)?;
            }
        }
        Ok(())
    }
}
