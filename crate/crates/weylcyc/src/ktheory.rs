//! Chern characters of idempotents and the pairing with cyclic cocycles.
//!
//! An [`Idempotent`] is a square matrix over the Weyl algebra (constants
//! included) that squares to itself under the entrywise star product. Its
//! Chern character is the chain with components `c_0 = e` and
//! `c_i = (-1)^i (2i)!/i! (e - 1/2) ⊗ e^{⊗2i}`; pairing a tuple of even
//! cochains against it extends each cochain over the matrix legs by the
//! trace.

use crate::matrix::Matrix;
use crate::scalar::{gauss, Scalar};
use crate::tau::{matrix_cochain_extension, TauEngine};
use crate::weyl::WeylContext;
use crate::{Error, Poly, Result};

/// Entrywise star-product matrix multiplication.
pub fn star_mat_mul(w: &WeylContext, a: &Matrix<Poly>, b: &Matrix<Poly>) -> Matrix<Poly> {
    assert_eq!(a.cols(), b.rows(), "inner dimensions must agree");
    Matrix::from_fn(a.rows(), b.cols(), |i, j| {
        let mut acc = w.zero();
        for r in 0..a.cols() {
            acc = &acc + &w.moyal(a.get(i, r), b.get(r, j));
        }
        acc
    })
}

/// A square matrix over the Weyl algebra squaring to itself under the
/// star product.
#[derive(Clone, Debug, PartialEq)]
pub struct Idempotent {
    mat: Matrix<Poly>,
}

impl Idempotent {
    pub fn new(w: &WeylContext, mat: Matrix<Poly>) -> Result<Self> {
        if mat.rows() != mat.cols() {
            return Err(Error::InvalidMatrix("idempotent must be square".into()));
        }
        let square = star_mat_mul(w, &mat, &mat);
        if square != mat {
            return Err(Error::InvalidMatrix(
                "matrix does not star-square to itself".into(),
            ));
        }
        Ok(Idempotent { mat })
    }

    /// A diagonal projector with the given 0/1 pattern, over constants.
    pub fn scalar_projector(w: &WeylContext, diag: &[bool]) -> Self {
        let r = diag.len();
        let mat = Matrix::from_fn(r, r, |i, j| {
            if i == j && diag[i] {
                w.one()
            } else {
                w.zero()
            }
        });
        Idempotent { mat }
    }

    pub fn matrix(&self) -> &Matrix<Poly> {
        &self.mat
    }

    pub fn size(&self) -> usize {
        self.mat.rows()
    }
}

/// A multilinear functional on cochain slots.
pub type SlotFunctional<'a> = Box<dyn Fn(&[Poly]) -> Scalar + 'a>;

/// A finite tuple of even-degree cochains `(φ_0, φ_2, …)` paired against
/// Chern characters.
pub struct TotCocycle<'a> {
    comps: Vec<(usize, SlotFunctional<'a>)>,
}

impl<'a> TotCocycle<'a> {
    pub fn new() -> Self {
        TotCocycle { comps: Vec::new() }
    }

    pub fn push<F>(&mut self, degree: usize, f: F)
    where
        F: Fn(&[Poly]) -> Scalar + 'a,
    {
        assert!(degree.is_multiple_of(2), "pairing components have even degree");
        self.comps.push((degree, Box::new(f)));
    }

    /// The tuple `(τ_0, τ_2, …, τ_{2k})` of a Weyl context.
    pub fn taus(engine: &'a TauEngine, k: usize) -> Self {
        let mut out = TotCocycle::new();
        for l in 0..=k {
            out.push(2 * l, move |slots| engine.tau_scalar(2 * l, slots));
        }
        out
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &SlotFunctional<'a>)> {
        self.comps.iter().map(|(d, f)| (*d, f))
    }
}

impl<'a> Default for TotCocycle<'a> {
    fn default() -> Self {
        TotCocycle::new()
    }
}

/// `(2i)!/i!` as an exact scalar.
fn chern_coefficient(i: usize) -> Scalar {
    let mut num: i64 = 1;
    for v in (i as i64 + 1)..=(2 * i as i64) {
        num *= v;
    }
    let sign = if i.is_multiple_of(2) { 1 } else { -1 };
    Scalar::term(gauss(sign * num, 1, 0, 1), 0)
}

/// The degree-`2i` component of the Chern character: the coefficient
/// `(-1)^i (2i)!/i!` together with the slots `(e - 1/2) ⊗ e^{⊗2i}`
/// (`c_0 = e` alone).
pub fn chern_component(w: &WeylContext, e: &Idempotent, i: usize) -> (Scalar, Vec<Matrix<Poly>>) {
    if i == 0 {
        return (Scalar::one(), vec![e.matrix().clone()]);
    }
    let r = e.size();
    let half = Matrix::from_fn(r, r, |a, b| {
        if a == b {
            w.one().scale(&Scalar::from_ratio(1, 2))
        } else {
            w.zero()
        }
    });
    let shifted = Matrix::from_fn(r, r, |a, b| e.matrix().get(a, b) - half.get(a, b));
    let mut slots = Vec::with_capacity(2 * i + 1);
    slots.push(shifted);
    for _ in 0..2 * i {
        slots.push(e.matrix().clone());
    }
    (chern_coefficient(i), slots)
}

/// The full Chern chain `(c_0, …, c_k)`.
pub fn chern_chain(
    w: &WeylContext,
    e: &Idempotent,
    k: usize,
) -> Vec<(Scalar, Vec<Matrix<Poly>>)> {
    (0..=k).map(|i| chern_component(w, e, i)).collect()
}

/// The pairing `⟨φ, e⟩ = Σ_l coeff_l · (φ_{2l} # tr)(c_l)`.
pub fn pair(w: &WeylContext, phi: &TotCocycle, e: &Idempotent) -> Scalar {
    let mut acc = Scalar::zero();
    for (degree, f) in phi.components() {
        let l = degree / 2;
        let (coeff, slots) = chern_component(w, e, l);
        let value = matrix_cochain_extension(&slots, Scalar::zero(), |polys| f(polys));
        acc = &acc + &(&value * &coeff);
    }
    acc
}

/// The difference pairing `⟨φ, P_1⟩ - ⟨φ, P_2⟩` for a formal difference
/// of projectors.
pub fn pair_difference(
    w: &WeylContext,
    phi: &TotCocycle,
    p1: &Idempotent,
    p2: &Idempotent,
) -> Scalar {
    &pair(w, phi, p1) - &pair(w, phi, p2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::{Chain, MatrixCtx, WeylAlgebraCtx};

    fn unit_idempotent(w: &WeylContext) -> Idempotent {
        Idempotent::new(w, Matrix::from_fn(1, 1, |_, _| w.one())).unwrap()
    }

    #[test]
    fn rejects_a_matrix_that_is_not_idempotent() {
        let w = WeylContext::new(1);
        let mat = Matrix::from_fn(1, 1, |_, _| w.p(1));
        assert!(matches!(
            Idempotent::new(&w, mat),
            Err(Error::InvalidMatrix(_))
        ));
    }

    #[test]
    fn chern_components_match_the_closed_formulas() {
        let w = WeylContext::new(1);
        let e = Idempotent::scalar_projector(&w, &[true, false]);
        let (c0_coeff, c0) = chern_component(&w, &e, 0);
        assert_eq!(c0_coeff, Scalar::one());
        assert_eq!(c0, vec![e.matrix().clone()]);
        let (c1_coeff, c1) = chern_component(&w, &e, 1);
        assert_eq!(c1_coeff, Scalar::from_int(-2));
        assert_eq!(c1.len(), 3);
        assert_eq!(
            *c1[0].get(0, 0),
            w.one().scale(&Scalar::from_ratio(1, 2))
        );
        assert_eq!(
            *c1[0].get(1, 1),
            w.one().scale(&Scalar::from_ratio(-1, 2))
        );
        assert_eq!(c1[1], *e.matrix());
        assert_eq!(c1[2], *e.matrix());
    }

    #[test]
    fn chern_chain_is_closed_under_b_plus_connes_b() {
        let w = WeylContext::new(1);
        let inner = WeylAlgebraCtx { w: &w };
        let ctx = MatrixCtx {
            inner,
            size: 2,
        };
        let mut e_mat = Matrix::from_fn(2, 2, |_, _| w.zero());
        e_mat.set(0, 0, w.one());
        e_mat.set(0, 1, w.one());
        let e = Idempotent::new(&w, e_mat).unwrap();
        let chain = chern_chain(&w, &e, 2);
        for i in 0..2 {
            let (low_coeff, low_slots) = &chain[i];
            let (high_coeff, high_slots) = &chain[i + 1];
            let mut low = Chain::zero(low_slots.len());
            low.add_term(&ctx, low_coeff.clone(), low_slots.clone());
            let mut high = Chain::zero(high_slots.len());
            high.add_term(&ctx, high_coeff.clone(), high_slots.clone());
            let total = high
                .hochschild_b(&ctx, None)
                .plus(&low.connes_b_bar(&ctx, None));
            assert!(
                total.reduce_degenerate(&ctx).is_zero_chain(&ctx),
                "b c_{} + B c_{} should vanish modulo degenerate chains",
                i + 1,
                i
            );
        }
    }

    #[test]
    fn pairing_the_counit_with_the_unit_is_one() {
        let w = WeylContext::new(1);
        let engine = TauEngine::for_weyl(&w);
        let phi = TotCocycle::taus(&engine, 0);
        let e = unit_idempotent(&w);
        assert_eq!(pair(&w, &phi, &e), Scalar::one());
    }

    #[test]
    fn pairing_counts_the_rank_of_scalar_projectors() {
        let w = WeylContext::new(1);
        let engine = TauEngine::for_weyl(&w);
        let phi = TotCocycle::taus(&engine, 1);
        let e = Idempotent::scalar_projector(&w, &[true, false]);
        assert_eq!(pair(&w, &phi, &e), Scalar::one());
        let f = Idempotent::scalar_projector(&w, &[true, true, false]);
        assert_eq!(pair(&w, &phi, &f), Scalar::from_int(2));
        assert_eq!(pair_difference(&w, &phi, &f, &e), Scalar::one());
    }

    #[test]
    fn pairing_with_the_zero_idempotent_vanishes() {
        let w = WeylContext::new(1);
        let engine = TauEngine::for_weyl(&w);
        let phi = TotCocycle::taus(&engine, 1);
        let zero = Idempotent::scalar_projector(&w, &[false, false]);
        assert!(pair(&w, &phi, &zero).is_zero());
    }

    #[test]
    fn pairing_is_invariant_under_scalar_conjugation() {
        let w = WeylContext::new(1);
        let engine = TauEngine::for_weyl(&w);
        let phi = TotCocycle::taus(&engine, 1);
        let e = Idempotent::scalar_projector(&w, &[true, false]);
        // g = [[1,1],[0,1]], g⁻¹ = [[1,-1],[0,1]]; g e g⁻¹ = [[1,-1],[0,0]].
        let mut conj = Matrix::from_fn(2, 2, |_, _| w.zero());
        conj.set(0, 0, w.one());
        conj.set(0, 1, w.one().scale(&-Scalar::one()));
        let ge = Idempotent::new(&w, conj).unwrap();
        assert_eq!(pair(&w, &phi, &ge), pair(&w, &phi, &e));
    }

    #[test]
    fn pairing_a_total_coboundary_with_an_idempotent_vanishes() {
        let w = WeylContext::new(1);
        let psi = |slots: &[Poly]| -> Scalar {
            assert_eq!(slots.len(), 2);
            let star = w.moyal(&slots[0], &slots[1]);
            let mut acc = star.constant_term();
            for (m, c) in slots[0].iter_terms() {
                acc = &acc + &(c.clone().mul_term(&gauss(m.degree() as i64, 1, 0, 1), 0));
            }
            &acc * &slots[1].constant_term()
        };
        let ctx = WeylAlgebraCtx { w: &w };
        let mut phi = TotCocycle::new();
        phi.push(0, |slots: &[Poly]| {
            let mut chain = Chain::zero(1);
            chain.add_term(&ctx, Scalar::one(), slots.to_vec());
            let mut acc = Scalar::zero();
            for (coeff, bslots) in chain.connes_b_bar(&ctx, None).terms() {
                acc = &acc + &(&psi(bslots) * coeff);
            }
            acc
        });
        phi.push(2, |slots: &[Poly]| {
            let mut chain = Chain::zero(3);
            chain.add_term(&ctx, Scalar::one(), slots.to_vec());
            let mut acc = Scalar::zero();
            for (coeff, bslots) in chain.hochschild_b(&ctx, None).terms() {
                acc = &acc + &(&psi(bslots) * coeff);
            }
            acc
        });
        for e in [
            Idempotent::scalar_projector(&w, &[true, false]),
            unit_idempotent(&w),
        ] {
            assert!(pair(&w, &phi, &e).is_zero());
        }
    }
}
