//! Exterior-algebra-valued polynomials with Koszul signs.
//!
//! A [`GradedElement`] is a sum of terms `f * dz_{i_1} ^ .. ^ dz_{i_r}`
//! where `f` is a polynomial coefficient and the anticommuting generators
//! are tracked as bitmasks. The wedge product inserts the sign of the
//! permutation that merges two ordered index sets.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::poly::{Coeff, Polynomial, VarSet};

/// Sign `(-1)^k` as needed when interleaving ordered index masks: the
/// number of pairs `(a, b)` with `a` in `m1`, `b` in `m2`, `a > b`.
fn koszul_crossings(m1: u32, m2: u32) -> u32 {
    let mut count = 0;
    let mut a = m1;
    while a != 0 {
        let bit = a.trailing_zeros();
        let below = if bit == 0 { 0 } else { m2 & ((1u32 << bit) - 1) };
        count += below.count_ones();
        a &= a - 1;
    }
    count
}

/// Wedges two strictly increasing index masks; `None` when they overlap,
/// otherwise the merged mask and the Koszul sign.
pub fn wedge_masks(m1: u32, m2: u32) -> Option<(u32, i64)> {
    if m1 & m2 != 0 {
        return None;
    }
    let sign = if koszul_crossings(m1, m2).is_multiple_of(2) { 1 } else { -1 };
    Some((m1 | m2, sign))
}

/// Element of `Poly (x) Exterior(dz_1, .., dz_r)` with coefficients in
/// the polynomial ring over a shared [`VarSet`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedElement<C: Coeff> {
    vars: Arc<VarSet>,
    ext: Arc<VarSet>,
    terms: BTreeMap<u32, Polynomial<C>>,
}

impl<C: Coeff> GradedElement<C> {
    /// The zero element.
    pub fn zero(vars: &Arc<VarSet>, ext: &Arc<VarSet>) -> Self {
        assert!(ext.len() <= 32, "at most 32 exterior generators supported");
        GradedElement { vars: Arc::clone(vars), ext: Arc::clone(ext), terms: BTreeMap::new() }
    }

    /// A purely polynomial (degree-zero) element.
    pub fn from_poly(ext: &Arc<VarSet>, p: Polynomial<C>) -> Self {
        let mut g = GradedElement::zero(p.vars(), ext);
        g.add_term(0, p);
        g
    }

    /// A single term `p * dz(mask)`.
    pub fn term(ext: &Arc<VarSet>, mask: u32, p: Polynomial<C>) -> Self {
        let mut g = GradedElement::zero(p.vars(), ext);
        g.add_term(mask, p);
        g
    }

    /// The exterior generator `dz_i`.
    pub fn ext_var(vars: &Arc<VarSet>, ext: &Arc<VarSet>, i: usize) -> Self {
        assert!(i < ext.len(), "exterior index out of range");
        let mut g = GradedElement::zero(vars, ext);
        g.add_term(1u32 << i, Polynomial::one(vars));
        g
    }

    /// The polynomial generator context.
    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    /// The exterior generator context.
    pub fn ext(&self) -> &Arc<VarSet> {
        &self.ext
    }

    /// Adds `p * dz(mask)` in place.
    pub fn add_term(&mut self, mask: u32, p: Polynomial<C>) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(mask) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &p;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Iterates over `(mask, coefficient)` pairs.
    pub fn iter_terms(&self) -> impl Iterator<Item = (&u32, &Polynomial<C>)> {
        self.terms.iter()
    }

    /// True for the zero element.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exterior degree when homogeneous (`None` for zero or mixed).
    pub fn form_degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|m| m.count_ones() as usize);
        let first = degs.next()?;
        if degs.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Splits into exterior-homogeneous components, lowest degree first.
    pub fn homogeneous_components(&self) -> Vec<GradedElement<C>> {
        let mut by_degree: BTreeMap<usize, GradedElement<C>> = BTreeMap::new();
        for (mask, p) in &self.terms {
            by_degree
                .entry(mask.count_ones() as usize)
                .or_insert_with(|| GradedElement::zero(&self.vars, &self.ext))
                .add_term(*mask, p.clone());
        }
        by_degree.into_values().collect()
    }

    /// The degree-zero (purely polynomial) part.
    pub fn scalar_part(&self) -> Polynomial<C> {
        self.terms
            .get(&0)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(&self.vars))
    }

    /// `Some(p)` when the element has no exterior part at all.
    pub fn as_poly(&self) -> Option<Polynomial<C>> {
        if self.terms.keys().all(|m| *m == 0) {
            Some(self.scalar_part())
        } else {
            None
        }
    }

    /// Sum.
    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, p) in &rhs.terms {
            out.add_term(*m, p.clone());
        }
        out
    }

    /// Difference.
    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, p) in &rhs.terms {
            out.add_term(*m, -p);
        }
        out
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        let mut out = GradedElement::zero(&self.vars, &self.ext);
        for (m, p) in &self.terms {
            out.add_term(*m, -p);
        }
        out
    }

    /// Multiplies every coefficient by a ring element.
    pub fn scale(&self, c: &C) -> Self {
        let mut out = GradedElement::zero(&self.vars, &self.ext);
        for (m, p) in &self.terms {
            out.add_term(*m, p.scale(c));
        }
        out
    }

    /// Multiplies every coefficient by a polynomial.
    pub fn scale_poly(&self, p: &Polynomial<C>) -> Self {
        let mut out = GradedElement::zero(&self.vars, &self.ext);
        for (m, q) in &self.terms {
            out.add_term(*m, q * p);
        }
        out
    }

    /// Wedge product with commutative coefficient multiplication and
    /// Koszul signs on the exterior parts.
    pub fn wedge(&self, rhs: &Self) -> Self {
        let mut out = GradedElement::zero(&self.vars, &self.ext);
        for (m1, p1) in &self.terms {
            for (m2, p2) in &rhs.terms {
                if let Some((m, sign)) = wedge_masks(*m1, *m2) {
                    let prod = p1 * p2;
                    out.add_term(m, if sign < 0 { -&prod } else { prod });
                }
            }
        }
        out
    }

    /// Wedge product with a caller-supplied coefficient product, used
    /// when the polynomial part multiplies noncommutatively (fiberwise
    /// Moyal product of bundle sections).
    pub fn wedge_with(
        &self,
        rhs: &Self,
        mul: impl Fn(&Polynomial<C>, &Polynomial<C>) -> Polynomial<C>,
    ) -> Self {
        let mut out = GradedElement::zero(&self.vars, &self.ext);
        for (m1, p1) in &self.terms {
            for (m2, p2) in &rhs.terms {
                if let Some((m, sign)) = wedge_masks(*m1, *m2) {
                    let prod = mul(p1, p2);
                    out.add_term(m, if sign < 0 { -&prod } else { prod });
                }
            }
        }
        out
    }

    /// Exterior derivative `sum_j dz_j ^ d/dx_{base[j]}`, where `base[j]`
    /// is the polynomial generator paired with exterior generator `j`.
    pub fn exterior_derivative(&self, base: &[usize]) -> Self {
        assert_eq!(base.len(), self.ext.len(), "one base variable per exterior generator");
        let mut out = GradedElement::zero(&self.vars, &self.ext);
        for (mask, p) in &self.terms {
            for (j, xi) in base.iter().enumerate() {
                let dj = 1u32 << j;
                if mask & dj != 0 {
                    continue;
                }
                let dp = p.partial(*xi);
                if dp.is_zero() {
                    continue;
                }
                let (m, sign) = wedge_masks(dj, *mask).expect("disjoint masks");
                out.add_term(m, if sign < 0 { -&dp } else { dp });
            }
        }
        out
    }

    /// Applies a map to every polynomial coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Polynomial<C>) -> Polynomial<C>) -> Self {
        let mut out = GradedElement::zero(&self.vars, &self.ext);
        for (m, p) in &self.terms {
            out.add_term(*m, f(p));
        }
        out
    }
}

fn fmt_mask(ext: &VarSet, mask: u32) -> String {
    let mut parts = Vec::new();
    for i in 0..ext.len() {
        if mask & (1u32 << i) != 0 {
            parts.push(ext.name(i).to_string());
        }
    }
    parts.join("^")
}

impl<C: Coeff> fmt::Display for GradedElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mask, p) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *mask == 0 {
                write!(f, "{}", p)?;
            } else if p.as_constant().map(|c| c.to_string() == "1").unwrap_or(false) {
                write!(f, "{}", fmt_mask(&self.ext, *mask))?;
            } else {
                write!(f, "({})*{}", p, fmt_mask(&self.ext, *mask))?;
            }
        }
        Ok(())
    }
}
