//! The flat-model Weyl bundle over an affine symplectic space.
//!
//! Sections are polynomials in base coordinates `x1..x{2n}`, fiber
//! coordinates `y1..y{2n}`, and exterior generators `dx1..dx{2n}`, with the
//! fiberwise Moyal product on the `y`-variables and base coordinates
//! central. The connection `D = d + (1/hbar)[A, -]` built from the
//! fiber-linear one-form `A` with `(1/hbar)[A(d/dx^j), -] = -d/dy^j` is
//! flat, its flat sections are Taylor lifts of base polynomials, and
//! lifting intertwines the fiberwise product with the Moyal product on the
//! base.
//!
//! On top of the bundle sit the form-valued cochains `psi`: copies of `A`
//! are shuffled into a chain of sections and fed to the fiberwise cyclic
//! cocycle, producing differential forms whose exterior derivative is
//! computed by the Hochschild and cyclic boundaries of the chain. Wedging
//! with a closed form yields the density `chi`.

use std::sync::Arc;

use crate::aspanier::shuffles;
use crate::graded::GradedElement;
use crate::homalg::{poly_decomposition, AlgebraContext, Chain};
use crate::poly::{Polynomial, VarSet};
use crate::scalar::Scalar;
use crate::tau::TauEngine;
use crate::weyl::moyal_product_pairs;
use crate::{Error, Poly, PolyForm, Result};

/// The polynomial Weyl bundle over `R^{2n}` with its flat quantization
/// connection.
///
/// Base coordinates come first in the variable order (`x1..x{2n}`), fiber
/// coordinates second (`y1..y{2n}`); the exterior generators `dx1..dx{2n}`
/// pair with the base coordinates. Symplectic pairs are consecutive:
/// `(x1, x2)` is the first base pair and `(y1, y2)` the first fiber pair.
pub struct FlatModel {
    n: usize,
    vars: Arc<VarSet>,
    ext: Arc<VarSet>,
    fiber_pairs: Vec<(usize, usize)>,
    base_pairs: Vec<(usize, usize)>,
    engine: TauEngine,
}

impl FlatModel {
    pub fn new(n: usize) -> Self {
        let m = 2 * n;
        assert!(m <= 16, "exterior masks are stored in 32 bits");
        let mut names: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
        names.extend((1..=m).map(|i| format!("y{i}")));
        let vars = VarSet::new(names);
        let ext = VarSet::new((1..=m).map(|i| format!("dx{i}")).collect());
        let fiber_pairs: Vec<(usize, usize)> =
            (0..n).map(|s| (m + 2 * s, m + 2 * s + 1)).collect();
        let base_pairs: Vec<(usize, usize)> = (0..n).map(|s| (2 * s, 2 * s + 1)).collect();
        let engine = TauEngine::with_pairs(&vars, fiber_pairs.clone());
        FlatModel {
            n,
            vars,
            ext,
            fiber_pairs,
            base_pairs,
            engine,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The shared variable order: `x1..x{2n}` then `y1..y{2n}`.
    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    /// The exterior generators `dx1..dx{2n}`.
    pub fn ext(&self) -> &Arc<VarSet> {
        &self.ext
    }

    /// The cyclic-cocycle engine of the fiber Weyl algebra; base
    /// coordinates pass through it as passive parameters.
    pub fn engine(&self) -> &TauEngine {
        &self.engine
    }

    /// Base coordinate `x^{j+1}` (zero-indexed `j`).
    pub fn x(&self, j: usize) -> Poly {
        assert!(j < 2 * self.n);
        Polynomial::var(&self.vars, j)
    }

    /// Fiber coordinate `y^{j+1}` (zero-indexed `j`).
    pub fn y(&self, j: usize) -> Poly {
        assert!(j < 2 * self.n);
        Polynomial::var(&self.vars, 2 * self.n + j)
    }

    /// The unit section.
    pub fn one(&self) -> Poly {
        Polynomial::one(&self.vars)
    }

    /// A section with no exterior part.
    pub fn section(&self, p: Poly) -> PolyForm {
        GradedElement::from_poly(&self.ext, p)
    }

    /// The zero form-valued section.
    pub fn zero_form(&self) -> PolyForm {
        GradedElement::zero(&self.vars, &self.ext)
    }

    /// Fiberwise Moyal product: `y`-pairs interact, `x`-variables are
    /// central.
    pub fn fiber_product(&self, f: &Poly, g: &Poly) -> Poly {
        moyal_product_pairs(&self.fiber_pairs, f, g)
    }

    /// Moyal product on the base coordinates, used to state that lifting
    /// is multiplicative.
    pub fn base_product(&self, f: &Poly, g: &Poly) -> Poly {
        moyal_product_pairs(&self.base_pairs, f, g)
    }

    /// Product of form-valued sections: fiberwise Moyal on coefficients
    /// with the exterior algebra's signs.
    pub fn star(&self, a: &PolyForm, b: &PolyForm) -> PolyForm {
        a.wedge_with(b, |p, q| self.fiber_product(p, q))
    }

    /// Graded star commutator `a b - (-1)^{|a||b|} b a`, computed on the
    /// exterior-homogeneous components.
    pub fn star_commutator(&self, a: &PolyForm, b: &PolyForm) -> PolyForm {
        let mut out = self.zero_form();
        for pa in a.homogeneous_components() {
            let da = pa.form_degree().unwrap_or(0);
            for pb in b.homogeneous_components() {
                let db = pb.form_degree().unwrap_or(0);
                let fwd = self.star(&pa, &pb);
                let bwd = self.star(&pb, &pa);
                let term = if (da * db) % 2 == 0 {
                    fwd.sub(&bwd)
                } else {
                    fwd.add(&bwd)
                };
                out = out.add(&term);
            }
        }
        out
    }

    /// The connection one-form `A`: the unique fiber-linear form with
    /// `(1/hbar)[A(d/dx^j), -] = -d/dy^j`, namely
    /// `A = sum_s (y^{2s} dx^{2s-1} - y^{2s-1} dx^{2s})` in one-based
    /// labels.
    pub fn connection(&self) -> PolyForm {
        let m = 2 * self.n;
        let mut a = self.zero_form();
        for s in 0..self.n {
            a.add_term(1 << (2 * s), Polynomial::var(&self.vars, m + 2 * s + 1));
            a.add_term(1 << (2 * s + 1), -&Polynomial::var(&self.vars, m + 2 * s));
        }
        a
    }

    /// Exterior derivative in the base coordinates; fiber coordinates are
    /// treated as constants along the base.
    pub fn d(&self, s: &PolyForm) -> PolyForm {
        let base: Vec<usize> = (0..2 * self.n).collect();
        s.exterior_derivative(&base)
    }

    /// The flat connection `D = d + (1/hbar)[A, -]`.
    pub fn fedosov_d(&self, s: &PolyForm) -> PolyForm {
        let bracket = self.star_commutator(&self.connection(), s);
        self.d(s).add(&bracket.scale(&Scalar::hbar(-1)))
    }

    /// The curvature `dA + (1/(2 hbar))[A, A]` of the connection: a
    /// central scalar two-form.
    pub fn weyl_curvature(&self) -> PolyForm {
        let a = self.connection();
        let comm = self.star_commutator(&a, &a);
        let half_inv = &Scalar::from_ratio(1, 2) * &Scalar::hbar(-1);
        self.d(&a).add(&comm.scale(&half_inv))
    }

    /// Taylor lift of a base polynomial to a flat section: substitutes
    /// `x^j + y^j` for `x^j`. Errors when the input already involves fiber
    /// coordinates.
    pub fn lift(&self, f: &Poly) -> Result<Poly> {
        let m = 2 * self.n;
        let fiber_indices: Vec<usize> = (m..2 * m).collect();
        if f.degree_in(&fiber_indices).unwrap_or(0) > 0 {
            return Err(Error::DegreeMismatch(
                "lift expects a polynomial in the base coordinates only".into(),
            ));
        }
        let images: Vec<Poly> = (0..2 * m)
            .map(|j| {
                if j < m {
                    &Polynomial::var(&self.vars, j) + &Polynomial::var(&self.vars, m + j)
                } else {
                    Polynomial::var(&self.vars, j)
                }
            })
            .collect();
        Ok(f.substitute(&images))
    }

    /// The fiberwise cyclic cocycle on form-valued slots: exterior parts
    /// are wedged in slot order and the polynomial parts fed to the fiber
    /// cocycle, with base coordinates surviving as parameters. Requires an
    /// even degree and `degree + 1` slots.
    pub fn graded_tau(&self, degree: usize, slots: &[PolyForm]) -> Result<PolyForm> {
        if !degree.is_multiple_of(2) {
            return Err(Error::DegreeMismatch(format!(
                "cocycle degree {degree} is odd"
            )));
        }
        if slots.len() != degree + 1 {
            return Err(Error::DegreeMismatch(format!(
                "degree {degree} needs {} slots, found {}",
                degree + 1,
                slots.len()
            )));
        }
        let mut out = self.zero_form();
        let mut stack: Vec<(u32, i64, Vec<Poly>)> = vec![(0, 1, Vec::new())];
        for slot in slots {
            let mut next = Vec::new();
            for (mask_acc, sign_acc, polys) in &stack {
                for (mask, p) in slot.iter_terms() {
                    if let Some((mask_new, sign)) = crate::graded::wedge_masks(*mask_acc, *mask) {
                        let mut row = polys.clone();
                        row.push(p.clone());
                        next.push((mask_new, sign_acc * sign, row));
                    }
                }
            }
            stack = next;
        }
        for (mask, sign, polys) in stack {
            let mut val = self.engine.tau(degree, &polys);
            if sign < 0 {
                val = -&val;
            }
            out.add_term(mask, val);
        }
        Ok(out)
    }

    /// The form-valued cochain of form index `i` and cocycle degree
    /// `twok`: `i` copies of the connection form are shuffled past the
    /// chain's tail slots in all order-preserving ways with the sign of
    /// the permutation, the result is fed to [`Self::graded_tau`], and the
    /// total is scaled by `(1/hbar)^i`.
    ///
    /// Cocycle degrees above `2n` lie outside the cocycle tuple and give
    /// zero. Chains without terms evaluate to zero in any degree.
    pub fn psi(&self, i: usize, twok: usize, chain: &Chain<SectionCtx<'_>>) -> Result<PolyForm> {
        self.psi_with(i, twok, chain, &self.connection())
    }

    fn psi_with(
        &self,
        i: usize,
        twok: usize,
        chain: &Chain<SectionCtx<'_>>,
        a_form: &PolyForm,
    ) -> Result<PolyForm> {
        if !twok.is_multiple_of(2) {
            return Err(Error::DegreeMismatch(format!(
                "cocycle degree {twok} is odd"
            )));
        }
        if chain.terms().is_empty() {
            return Ok(self.zero_form());
        }
        if i > twok {
            return Err(Error::DegreeMismatch(format!(
                "form index {i} exceeds cocycle degree {twok}"
            )));
        }
        if chain.slots() != twok - i + 1 {
            return Err(Error::DegreeMismatch(format!(
                "form index {i} at cocycle degree {twok} needs {} slots, found {}",
                twok - i + 1,
                chain.slots()
            )));
        }
        if twok > 2 * self.n {
            return Ok(self.zero_form());
        }
        let mut out = self.zero_form();
        for (coeff, slots) in chain.terms() {
            let p = slots.len() - 1;
            for (sign, nu) in shuffles(p, i) {
                let mut row = vec![self.zero_form(); p + i + 1];
                row[0] = self.section(slots[0].clone());
                for (k, slot) in slots[1..].iter().enumerate() {
                    row[1 + nu[k]] = self.section(slot.clone());
                }
                for t in 0..i {
                    row[1 + nu[p + t]] = a_form.clone();
                }
                let val = self.graded_tau(twok, &row)?;
                let mut c = coeff * &Scalar::hbar(-(i as i64));
                if sign < 0 {
                    c = -c;
                }
                out = out.add(&val.scale(&c));
            }
        }
        Ok(out)
    }

    /// The density `alpha ^ psi^{2n-i}_{2n-2r}(chain)`: the integrand of
    /// the pairing of a degree-`i` form with a chain of sections, returned
    /// as a polynomial form rather than integrated.
    pub fn chi_density(
        &self,
        i: usize,
        r: usize,
        alpha: &PolyForm,
        chain: &Chain<SectionCtx<'_>>,
    ) -> Result<PolyForm> {
        let m = 2 * self.n;
        if 2 * r > i {
            return Err(Error::DegreeMismatch(format!(
                "component index 2r = {} exceeds form degree {i}",
                2 * r
            )));
        }
        if i > m {
            return Err(Error::DegreeMismatch(format!(
                "form degree {i} exceeds the base dimension {m}"
            )));
        }
        if !alpha.is_zero() && alpha.form_degree() != Some(i) {
            return Err(Error::DegreeMismatch(format!(
                "the multiplier form is not homogeneous of degree {i}"
            )));
        }
        let tail = self.psi(m - i, m - 2 * r, chain)?;
        Ok(alpha.wedge(&tail))
    }
}

/// The algebra of Weyl-bundle sections with no exterior part, under the
/// fiberwise Moyal product. Chains over this context feed [`FlatModel::psi`].
pub struct SectionCtx<'a> {
    pub model: &'a FlatModel,
}

impl AlgebraContext for SectionCtx<'_> {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Polynomial::zero(self.model.vars())
    }

    fn one(&self) -> Poly {
        Polynomial::one(self.model.vars())
    }

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a + b
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.model.fiber_product(a, b)
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

/// Form-valued sections as a graded algebra under the star product, with
/// the exterior degree as the homological grade. Chains over this context
/// exercise the graded Hochschild boundary.
pub struct FormSectionCtx<'a> {
    pub model: &'a FlatModel,
}

impl AlgebraContext for FormSectionCtx<'_> {
    type Elem = PolyForm;

    fn zero(&self) -> PolyForm {
        self.model.zero_form()
    }

    fn one(&self) -> PolyForm {
        self.model.section(Polynomial::one(self.model.vars()))
    }

    fn add(&self, a: &PolyForm, b: &PolyForm) -> PolyForm {
        a.add(b)
    }

    fn mul(&self, a: &PolyForm, b: &PolyForm) -> PolyForm {
        self.model.star(a, b)
    }

    fn scale(&self, a: &PolyForm, c: &Scalar) -> PolyForm {
        a.scale(c)
    }

    fn is_zero(&self, a: &PolyForm) -> bool {
        a.is_zero()
    }

    fn grade(&self, a: &PolyForm) -> u32 {
        a.form_degree().unwrap_or(0) as u32
    }

    fn split_homogeneous(&self, a: &PolyForm) -> Vec<PolyForm> {
        a.homogeneous_components()
    }

    fn monomial_decomposition(&self, a: &PolyForm) -> Vec<(Scalar, PolyForm)> {
        let mut out = Vec::new();
        for (mask, p) in a.iter_terms() {
            for (c, mono) in poly_decomposition(p) {
                out.push((c, GradedElement::term(a.ext(), *mask, mono)));
            }
        }
        out
    }

    fn unit_coefficient(&self, a: &PolyForm) -> Scalar {
        a.scalar_part().constant_term()
    }
}
