//! Chain-level Hochschild and cyclic machinery.
//!
//! A [`Chain`] is a formal `Scalar`-linear combination of elementary tensors
//! `a_0 ⊗ … ⊗ a_k` with slots in an algebra described by an
//! [`AlgebraContext`]. All boundary-type operators act on chains; cochains
//! are evaluated against chains by linear extension, so the cochain-level
//! operators arise by precomposition and never need a representation of
//! their own.
//!
//! The operators support an optional grading (slots must be homogeneous,
//! which [`Chain::add_term`] enforces by decomposition) and an optional
//! twist by an algebra automorphism, covering the plain, graded, and
//! twisted complexes with one code path.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use crate::matrix::Matrix;
use crate::poly::{Coeff, Polynomial, VarSet};
use crate::scalar::Scalar;
use crate::weyl::WeylContext;
use crate::Poly;

/// The algebra data the chain operators need: a unital product, linear
/// structure over [`Scalar`], and an optional homological grading.
pub trait AlgebraContext {
    type Elem: Clone + PartialEq + Eq + Hash + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, a: &Self::Elem, c: &Scalar) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Homological degree of a homogeneous element. Ungraded algebras are
    /// concentrated in degree zero.
    fn grade(&self, _a: &Self::Elem) -> u32 {
        0
    }

    /// Decomposition into nonzero homogeneous parts.
    fn split_homogeneous(&self, a: &Self::Elem) -> Vec<Self::Elem> {
        if self.is_zero(a) {
            Vec::new()
        } else {
            vec![a.clone()]
        }
    }

    /// Expansion over a linear basis with the scalar coefficients pulled
    /// out, so chains can be compared multilinearly.
    fn monomial_decomposition(&self, a: &Self::Elem) -> Vec<(Scalar, Self::Elem)>;

    /// The coefficient of the unit in a fixed linear complement, used to
    /// reduce chains modulo degenerate terms. Linear, and equal to one on
    /// the unit itself.
    fn unit_coefficient(&self, a: &Self::Elem) -> Scalar;

    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.add(&ab, &self.scale(&ba, &-Scalar::one()))
    }
}

/// An algebra automorphism used to twist the cyclic operators, applied
/// slot-wise where the twisted formulas call for it.
pub type Twist<'t, E> = &'t dyn Fn(&E) -> E;

/// A formal linear combination of elementary tensors with a fixed number of
/// slots. Degree-`k` chains have `k + 1` slots.
#[derive(Debug)]
pub struct Chain<A: AlgebraContext> {
    slots: usize,
    terms: Vec<(Scalar, Vec<A::Elem>)>,
}

impl<A: AlgebraContext> Clone for Chain<A> {
    fn clone(&self) -> Self {
        Chain {
            slots: self.slots,
            terms: self.terms.clone(),
        }
    }
}

impl<A: AlgebraContext> Chain<A> {
    pub fn zero(slots: usize) -> Self {
        Chain {
            slots,
            terms: Vec::new(),
        }
    }

    /// A single elementary tensor. Slots are decomposed into homogeneous
    /// parts, so every stored term is slot-wise homogeneous.
    pub fn elementary(ctx: &A, coeff: Scalar, slots: Vec<A::Elem>) -> Self {
        let n = slots.len();
        let mut chain = Chain::zero(n);
        chain.add_term(ctx, coeff, slots);
        chain
    }

    /// Adds `coeff · (slots_0 ⊗ … ⊗ slots_k)`, decomposing each slot into
    /// homogeneous parts and dropping terms with a zero slot.
    pub fn add_term(&mut self, ctx: &A, coeff: Scalar, slots: Vec<A::Elem>) {
        assert_eq!(slots.len(), self.slots, "chain slot counts differ");
        if coeff.is_zero() {
            return;
        }
        let mut expansions: Vec<Vec<A::Elem>> = vec![Vec::new()];
        for slot in &slots {
            let parts = ctx.split_homogeneous(slot);
            if parts.is_empty() {
                return;
            }
            let mut next = Vec::with_capacity(expansions.len() * parts.len());
            for prefix in &expansions {
                for part in &parts {
                    let mut row = prefix.clone();
                    row.push(part.clone());
                    next.push(row);
                }
            }
            expansions = next;
        }
        for row in expansions {
            self.terms.push((coeff.clone(), row));
        }
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    /// Tensor degree: one less than the slot count.
    pub fn degree(&self) -> usize {
        self.slots - 1
    }

    pub fn terms(&self) -> &[(Scalar, Vec<A::Elem>)] {
        &self.terms
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.slots, other.slots, "chain slot counts differ");
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Chain {
            slots: self.slots,
            terms,
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Chain::zero(self.slots);
        }
        Chain {
            slots: self.slots,
            terms: self
                .terms
                .iter()
                .map(|(coeff, slots)| (coeff * c, slots.clone()))
                .collect(),
        }
    }

    pub fn negated(&self) -> Self {
        self.scaled(&-Scalar::one())
    }

    /// Canonical form: every slot is expanded over the algebra basis with
    /// the scalar coefficients pulled out in front, and equal basis tensors
    /// are collected. The result is zero exactly when the chain is.
    pub fn normalized(&self, ctx: &A) -> Self {
        let mut merged: HashMap<Vec<A::Elem>, Scalar> = HashMap::new();
        for (coeff, slots) in &self.terms {
            let mut expanded: Vec<(Scalar, Vec<A::Elem>)> = vec![(coeff.clone(), Vec::new())];
            for slot in slots {
                let parts = ctx.monomial_decomposition(slot);
                if parts.is_empty() {
                    expanded.clear();
                    break;
                }
                let mut next = Vec::with_capacity(expanded.len() * parts.len());
                for (c, prefix) in &expanded {
                    for (pc, basis) in &parts {
                        let mut row = prefix.clone();
                        row.push(basis.clone());
                        next.push((c * pc, row));
                    }
                }
                expanded = next;
            }
            for (c, row) in expanded {
                *merged.entry(row).or_insert_with(Scalar::zero) += &c;
            }
        }
        let mut terms: Vec<(Scalar, Vec<A::Elem>)> = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(slots, c)| (c, slots))
            .collect();
        terms.sort_by(|a, b| format!("{:?}", a.1).cmp(&format!("{:?}", b.1)));
        Chain {
            slots: self.slots,
            terms,
        }
    }

    /// Reduction modulo degenerate chains: every slot after the zeroth is
    /// replaced by its class in the quotient by the unit, using the
    /// context's linear complement. Terms with a slot that becomes zero
    /// drop out.
    pub fn reduce_degenerate(&self, ctx: &A) -> Self {
        let mut out = Chain::zero(self.slots);
        'terms: for (coeff, slots) in &self.terms {
            let mut reduced = Vec::with_capacity(slots.len());
            for (r, slot) in slots.iter().enumerate() {
                if r == 0 {
                    reduced.push(slot.clone());
                    continue;
                }
                let u = ctx.unit_coefficient(slot);
                let class = if u.is_zero() {
                    slot.clone()
                } else {
                    ctx.add(slot, &ctx.scale(&ctx.one(), &(&Scalar::zero() - &u)))
                };
                if ctx.is_zero(&class) {
                    continue 'terms;
                }
                reduced.push(class);
            }
            out.add_term(ctx, coeff.clone(), reduced);
        }
        out
    }

    pub fn is_zero_chain(&self, ctx: &A) -> bool {
        self.normalized(ctx).terms.is_empty()
    }

    pub fn equals(&self, ctx: &A, other: &Self) -> bool {
        self.slots == other.slots && self.plus(&other.negated()).is_zero_chain(ctx)
    }

    fn term_grade(ctx: &A, slots: &[A::Elem]) -> u32 {
        slots.iter().map(|s| ctx.grade(s)).sum()
    }

    /// The Hochschild boundary. The last face wraps the final slot around to
    /// the front, picking up the Koszul sign for moving it past the others
    /// and applying the twist when one is given.
    pub fn hochschild_b(&self, ctx: &A, twist: Option<Twist<A::Elem>>) -> Self {
        if self.slots <= 1 {
            return Chain::zero(0);
        }
        let k = self.slots - 1;
        let mut out = Chain::zero(self.slots - 1);
        for (coeff, slots) in &self.terms {
            for i in 0..k {
                let mut row = Vec::with_capacity(k);
                row.extend_from_slice(&slots[..i]);
                row.push(ctx.mul(&slots[i], &slots[i + 1]));
                row.extend_from_slice(&slots[i + 2..]);
                let sign = if i % 2 == 0 {
                    coeff.clone()
                } else {
                    -coeff.clone()
                };
                out.add_term(ctx, sign, row);
            }
            let rest_grade: u32 = Self::term_grade(ctx, &slots[..k]);
            let wrap_grade = ctx.grade(&slots[k]);
            let mut sign = coeff.clone();
            if (k + (wrap_grade * rest_grade) as usize) % 2 == 1 {
                sign = -sign;
            }
            let last = match twist {
                Some(t) => t(&slots[k]),
                None => slots[k].clone(),
            };
            let mut row = Vec::with_capacity(k);
            row.push(ctx.mul(&last, &slots[0]));
            row.extend_from_slice(&slots[1..k]);
            out.add_term(ctx, sign, row);
        }
        out
    }

    /// The cyclic rotation `t`: moves the last slot to the front with the
    /// sign `(-1)^k`, the Koszul factor, and the twist when one is given.
    pub fn cyclic_t(&self, ctx: &A, twist: Option<Twist<A::Elem>>) -> Self {
        let k = self.slots - 1;
        let mut out = Chain::zero(self.slots);
        for (coeff, slots) in &self.terms {
            let rest_grade: u32 = Self::term_grade(ctx, &slots[..k]);
            let wrap_grade = ctx.grade(&slots[k]);
            let mut sign = coeff.clone();
            if (k + (wrap_grade * rest_grade) as usize) % 2 == 1 {
                sign = -sign;
            }
            let last = match twist {
                Some(t) => t(&slots[k]),
                None => slots[k].clone(),
            };
            let mut row = Vec::with_capacity(self.slots);
            row.push(last);
            row.extend_from_slice(&slots[..k]);
            out.add_term(ctx, sign, row);
        }
        out
    }

    /// The boundary `B̄ = Σ_i (1 ⊗ t^i)` over all `slots` rotations,
    /// twisted when a twist is given.
    pub fn connes_b_bar(&self, ctx: &A, twist: Option<Twist<A::Elem>>) -> Self {
        let mut out = Chain::zero(self.slots + 1);
        let one = ctx.one();
        let mut rotated = self.clone();
        for _ in 0..self.slots {
            for (coeff, slots) in &rotated.terms {
                let mut row = Vec::with_capacity(self.slots + 1);
                row.push(one.clone());
                row.extend_from_slice(slots);
                out.add_term(ctx, coeff.clone(), row);
            }
            rotated = rotated.cyclic_t(ctx, twist);
        }
        out
    }

    /// The contraction `ι_a = Σ_{i=0}^{k} (-1)^{i+1} (… ⊗ a_i ⊗ a ⊗ …)`.
    pub fn contraction(&self, ctx: &A, a: &A::Elem) -> Self {
        let mut out = Chain::zero(self.slots + 1);
        for (coeff, slots) in &self.terms {
            for i in 0..self.slots {
                let mut row = Vec::with_capacity(self.slots + 1);
                row.extend_from_slice(&slots[..=i]);
                row.push(a.clone());
                row.extend_from_slice(&slots[i + 1..]);
                let sign = if i % 2 == 0 {
                    -coeff.clone()
                } else {
                    coeff.clone()
                };
                out.add_term(ctx, sign, row);
            }
        }
        out
    }

    /// The Lie action `L_a = Σ_i a_0 ⊗ … ⊗ [a, a_i] ⊗ … ⊗ a_k`.
    pub fn lie_action(&self, ctx: &A, a: &A::Elem) -> Self {
        let mut out = Chain::zero(self.slots);
        for (coeff, slots) in &self.terms {
            for i in 0..self.slots {
                let mut row = slots.clone();
                row[i] = ctx.commutator(a, &slots[i]);
                out.add_term(ctx, coeff.clone(), row);
            }
        }
        out
    }

    /// The shuffle product. The zeroth slots multiply (with a Koszul sign
    /// for carrying the second head past the first tail) and the tails are
    /// interleaved in all order-preserving ways; each crossing of slots of
    /// degrees `d`, `d'` contributes `(-1)^{d d' + 1}`, the Koszul sign
    /// times the one-per-crossing sign of the ungraded shuffle.
    pub fn shuffle(&self, ctx: &A, other: &Self) -> Self {
        let p = self.slots - 1;
        let q = other.slots - 1;
        let mut out = Chain::zero(p + q + 1);
        let patterns = interleavings(p, q);
        for (ca, sa) in &self.terms {
            let tail_a_grade: u32 = Self::term_grade(ctx, &sa[1..]);
            for (cb, sb) in &other.terms {
                let head = ctx.mul(&sa[0], &sb[0]);
                let mut base = ca * cb;
                if (ctx.grade(&sb[0]) * tail_a_grade) % 2 == 1 {
                    base = -base;
                }
                for pattern in &patterns {
                    let mut sign_flips = 0u32;
                    let mut row = Vec::with_capacity(p + q + 1);
                    row.push(head.clone());
                    let mut ai = 1;
                    let mut bi = 1;
                    let mut pending_b: Vec<u32> = Vec::new();
                    for &from_a in pattern {
                        if from_a {
                            let d = ctx.grade(&sa[ai]);
                            for db in &pending_b {
                                sign_flips += d * db + 1;
                            }
                            row.push(sa[ai].clone());
                            ai += 1;
                        } else {
                            pending_b.push(ctx.grade(&sb[bi]));
                            row.push(sb[bi].clone());
                            bi += 1;
                        }
                    }
                    let coeff = if sign_flips.is_multiple_of(2) {
                        base.clone()
                    } else {
                        -base.clone()
                    };
                    out.add_term(ctx, coeff, row);
                }
            }
        }
        out
    }
}

/// All order-preserving interleavings of `p` first-block and `q`
/// second-block items; `true` marks a first-block position.
fn interleavings(p: usize, q: usize) -> Vec<Vec<bool>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(p + q);
    fn rec(p: usize, q: usize, current: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if p == 0 && q == 0 {
            out.push(current.clone());
            return;
        }
        if p > 0 {
            current.push(true);
            rec(p - 1, q, current, out);
            current.pop();
        }
        if q > 0 {
            current.push(false);
            rec(p, q - 1, current, out);
            current.pop();
        }
    }
    rec(p, q, &mut current, &mut out);
    out
}

/// The Weyl algebra as an ungraded algebra context.
pub struct WeylAlgebraCtx<'a> {
    pub w: &'a WeylContext,
}

impl AlgebraContext for WeylAlgebraCtx<'_> {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Poly::zero(self.w.vars())
    }

    fn one(&self) -> Poly {
        self.w.one()
    }

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a + b
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.w.moyal(a, b)
    }

    fn scale(&self, a: &Poly, c: &Scalar) -> Poly {
        a.scale(c)
    }

    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }

    fn monomial_decomposition(&self, a: &Poly) -> Vec<(Scalar, Poly)> {
        poly_decomposition(a)
    }

    fn unit_coefficient(&self, a: &Poly) -> Scalar {
        a.constant_term()
    }
}

/// Splits a polynomial into `(coefficient, monic monomial)` pairs.
pub fn poly_decomposition(a: &Polynomial<Scalar>) -> Vec<(Scalar, Polynomial<Scalar>)> {
    a.iter_terms()
        .map(|(m, c)| {
            let mut monic = Polynomial::zero(a.vars());
            monic.add_term(m.clone(), Scalar::one());
            (c.clone(), monic)
        })
        .collect()
}

/// A commutative polynomial algebra as a context.
pub struct CommutativePolyCtx<C: Coeff> {
    pub vars: Arc<VarSet>,
    _marker: std::marker::PhantomData<C>,
}

impl<C: Coeff> CommutativePolyCtx<C> {
    pub fn new(vars: &Arc<VarSet>) -> Self {
        CommutativePolyCtx {
            vars: Arc::clone(vars),
            _marker: std::marker::PhantomData,
        }
    }
}

impl AlgebraContext for CommutativePolyCtx<Scalar> {
    type Elem = Polynomial<Scalar>;

    fn zero(&self) -> Self::Elem {
        Polynomial::zero(&self.vars)
    }

    fn one(&self) -> Self::Elem {
        Polynomial::one(&self.vars)
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a + b
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a * b
    }

    fn scale(&self, a: &Self::Elem, c: &Scalar) -> Self::Elem {
        a.scale(c)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }

    fn monomial_decomposition(&self, a: &Self::Elem) -> Vec<(Scalar, Self::Elem)> {
        poly_decomposition(a)
    }

    fn unit_coefficient(&self, a: &Self::Elem) -> Scalar {
        a.constant_term()
    }
}

/// Square matrices over an underlying context, with the product taken
/// through the inner algebra.
pub struct MatrixCtx<A: AlgebraContext> {
    pub inner: A,
    pub size: usize,
}

impl<A: AlgebraContext> MatrixCtx<A> {
    pub fn new(inner: A, size: usize) -> Self {
        MatrixCtx { inner, size }
    }

    /// Embeds an inner element as `a · E_{rc}` inside the zero matrix.
    pub fn embed(&self, a: &A::Elem, r: usize, c: usize) -> Matrix<A::Elem> {
        let mut m = self.zero();
        m.set(r, c, a.clone());
        m
    }
}

impl<A: AlgebraContext> AlgebraContext for MatrixCtx<A> {
    type Elem = Matrix<A::Elem>;

    fn zero(&self) -> Self::Elem {
        Matrix::from_fn(self.size, self.size, |_, _| self.inner.zero())
    }

    fn one(&self) -> Self::Elem {
        Matrix::from_fn(self.size, self.size, |i, j| {
            if i == j {
                self.inner.one()
            } else {
                self.inner.zero()
            }
        })
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        Matrix::from_fn(self.size, self.size, |i, j| {
            self.inner.add(a.get(i, j), b.get(i, j))
        })
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        Matrix::from_fn(self.size, self.size, |i, j| {
            let mut acc = self.inner.zero();
            for k in 0..self.size {
                acc = self.inner.add(&acc, &self.inner.mul(a.get(i, k), b.get(k, j)));
            }
            acc
        })
    }

    fn scale(&self, a: &Self::Elem, c: &Scalar) -> Self::Elem {
        Matrix::from_fn(self.size, self.size, |i, j| self.inner.scale(a.get(i, j), c))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        (0..self.size).all(|i| (0..self.size).all(|j| self.inner.is_zero(a.get(i, j))))
    }

    fn monomial_decomposition(&self, a: &Self::Elem) -> Vec<(Scalar, Self::Elem)> {
        let mut out = Vec::new();
        for i in 0..self.size {
            for j in 0..self.size {
                for (c, basis) in self.inner.monomial_decomposition(a.get(i, j)) {
                    out.push((c, self.embed(&basis, i, j)));
                }
            }
        }
        out
    }

    fn unit_coefficient(&self, a: &Self::Elem) -> Scalar {
        let mut acc = Scalar::zero();
        for i in 0..self.size {
            acc = &acc + &self.inner.unit_coefficient(a.get(i, i));
        }
        acc.mul_term(&crate::scalar::gauss(1, self.size as i64, 0, 1), 0)
    }
}
