//! The cyclic cosimplicial complex of function tensors over a polynomial
//! model, the shuffle map `lambda` into differential forms, and the `chi`
//! map into cyclic cochains of a traced algebra.
//!
//! A cochain of degree `k` is a sum of tensors `f_0 ⊗ … ⊗ f_k` of
//! polynomials on `ℝ^m`, reusing [`Chain`] over [`CommutativePolyCtx`].
//! Cofaces insert the constant `1`, degeneracies multiply adjacent slots,
//! and two extra degeneracies contract the complex: evaluation of the
//! first slot at the origin contracts the full coboundary `delta`, and
//! the wrap-around merge contracts the truncated coboundary
//! `delta_prime`, which omits the last face.

use std::sync::Arc;

use crate::graded::GradedElement;
use crate::homalg::{AlgebraContext, Chain, CommutativePolyCtx};
use crate::liecw::permutations;
use crate::matrix::Matrix;
use crate::poly::{Polynomial, VarSet};
use crate::scalar::Scalar;
use crate::weyl::inv_factorial;
use crate::{Error, Poly, PolyForm, Result};

/// A degree-`k` function cochain: a `Scalar`-linear combination of
/// `(k+1)`-fold tensors of polynomials in the base variables.
pub type ASCochain = Chain<CommutativePolyCtx<Scalar>>;

/// The context for cochains on `ℝ^m`, with `m` commuting variables.
pub type ASCtx = CommutativePolyCtx<Scalar>;

/// The `i`-th coface: inserts the constant `1` as a new slot at
/// position `i`, with `0 ≤ i ≤ slots`.
pub fn coface(ctx: &ASCtx, f: &ASCochain, i: usize) -> Result<ASCochain> {
    if i > f.slots() {
        return Err(Error::DegreeMismatch(format!(
            "coface index {i} exceeds slot count {}",
            f.slots()
        )));
    }
    let mut out = ASCochain::zero(f.slots() + 1);
    for (coeff, slots) in f.terms() {
        let mut row = Vec::with_capacity(slots.len() + 1);
        row.extend_from_slice(&slots[..i]);
        row.push(ctx.one());
        row.extend_from_slice(&slots[i..]);
        out.add_term(ctx, coeff.clone(), row);
    }
    Ok(out)
}

/// The full coboundary `delta = Σ_{i=0}^{k+1} (-1)^i δ^i`, the alternating
/// sum over every insertion position.
pub fn as_delta(ctx: &ASCtx, f: &ASCochain) -> ASCochain {
    let mut out = ASCochain::zero(f.slots() + 1);
    for i in 0..=f.slots() {
        let face = coface(ctx, f, i).expect("coface index in range");
        let signed = if i % 2 == 0 { face } else { face.negated() };
        out = out.plus(&signed);
    }
    out
}

/// The truncated coboundary `delta' = Σ_{i=0}^{k} (-1)^i δ^i`, which omits
/// the insertion at the last position.
pub fn as_delta_prime(ctx: &ASCtx, f: &ASCochain) -> ASCochain {
    let mut out = ASCochain::zero(f.slots() + 1);
    for i in 0..f.slots() {
        let face = coface(ctx, f, i).expect("coface index in range");
        let signed = if i % 2 == 0 { face } else { face.negated() };
        out = out.plus(&signed);
    }
    out
}

/// The `i`-th degeneracy: multiplies slots `i` and `i+1` together, with
/// `0 ≤ i ≤ slots - 2`.
pub fn degeneracy(ctx: &ASCtx, f: &ASCochain, i: usize) -> Result<ASCochain> {
    if f.slots() < 2 || i > f.slots() - 2 {
        return Err(Error::DegreeMismatch(format!(
            "degeneracy index {i} out of range for {} slots",
            f.slots()
        )));
    }
    let mut out = ASCochain::zero(f.slots() - 1);
    for (coeff, slots) in f.terms() {
        let mut row = Vec::with_capacity(slots.len() - 1);
        row.extend_from_slice(&slots[..i]);
        row.push(&slots[i] * &slots[i + 1]);
        row.extend_from_slice(&slots[i + 2..]);
        out.add_term(ctx, coeff.clone(), row);
    }
    Ok(out)
}

/// The extra degeneracy contracting `delta`: evaluates the first slot at
/// the origin and drops it, `f_0 ⊗ f_1 ⊗ … ↦ f_0(0) · f_1 ⊗ …`.
pub fn base_contraction(ctx: &ASCtx, f: &ASCochain) -> Result<ASCochain> {
    if f.slots() < 2 {
        return Err(Error::DegreeMismatch(
            "base contraction needs at least two slots".into(),
        ));
    }
    let all: Vec<usize> = (0..ctx.vars.len()).collect();
    let mut out = ASCochain::zero(f.slots() - 1);
    for (coeff, slots) in f.terms() {
        let value = slots[0].eval_zero(&all).constant_term();
        out.add_term(ctx, coeff * &value, slots[1..].to_vec());
    }
    Ok(out)
}

/// Evaluation of a one-slot cochain at the origin, the augmentation that
/// completes the `base_contraction` homotopy in degree zero.
pub fn augmentation(ctx: &ASCtx, f: &ASCochain) -> Result<Scalar> {
    if f.slots() != 1 {
        return Err(Error::DegreeMismatch(format!(
            "augmentation needs one slot, got {}",
            f.slots()
        )));
    }
    let all: Vec<usize> = (0..ctx.vars.len()).collect();
    let mut out = Scalar::zero();
    for (coeff, slots) in f.terms() {
        out = &out + &(coeff * &slots[0].eval_zero(&all).constant_term());
    }
    Ok(out)
}

/// The extra degeneracy contracting `delta_prime`: rotates the first slot
/// past the others and merges it into the last,
/// `f_0 ⊗ … ⊗ f_{k+1} ↦ f_1 ⊗ … ⊗ f_k ⊗ (f_{k+1} f_0)`.
pub fn wrap_contraction(ctx: &ASCtx, f: &ASCochain) -> Result<ASCochain> {
    if f.slots() < 2 {
        return Err(Error::DegreeMismatch(
            "wrap contraction needs at least two slots".into(),
        ));
    }
    let mut out = ASCochain::zero(f.slots() - 1);
    for (coeff, slots) in f.terms() {
        let last = slots.len() - 1;
        let mut row = slots[1..last].to_vec();
        row.push(&slots[last] * &slots[0]);
        out.add_term(ctx, coeff.clone(), row);
    }
    Ok(out)
}

/// The bare cyclic rotation `f_0 ⊗ … ⊗ f_k ↦ f_1 ⊗ … ⊗ f_k ⊗ f_0`,
/// without the sign. This is the operator that satisfies the cosimplicial
/// compatibilities with cofaces and degeneracies on the nose.
pub fn cyclic_rotate(ctx: &ASCtx, f: &ASCochain) -> ASCochain {
    let mut out = ASCochain::zero(f.slots());
    for (coeff, slots) in f.terms() {
        let mut row = slots[1..].to_vec();
        row.push(slots[0].clone());
        out.add_term(ctx, coeff.clone(), row);
    }
    out
}

/// The signed cyclic operator `t = (-1)^k · rotate` on degree-`k`
/// cochains, the generator used by the norm and the `B` operator.
pub fn as_cyclic_t(ctx: &ASCtx, f: &ASCochain) -> ASCochain {
    let rotated = cyclic_rotate(ctx, f);
    if f.degree().is_multiple_of(2) {
        rotated
    } else {
        rotated.negated()
    }
}

/// The cyclic norm `N = Σ_{l=0}^{k} t^l` on degree-`k` cochains.
pub fn cyclic_norm(ctx: &ASCtx, f: &ASCochain) -> ASCochain {
    let mut out = ASCochain::zero(f.slots());
    let mut power = f.clone();
    for _ in 0..f.slots() {
        out = out.plus(&power);
        power = as_cyclic_t(ctx, &power);
    }
    out
}

/// The degree-lowering operator `B = N ∘ s_wrap ∘ (id - t)` of the mixed
/// complex, anticommuting with `delta`. On degree-zero cochains `id - t`
/// already vanishes, so the result is the zero cochain.
pub fn as_b(ctx: &ASCtx, f: &ASCochain) -> ASCochain {
    if f.slots() < 2 {
        return ASCochain::zero(f.slots());
    }
    let difference = f.plus(&as_cyclic_t(ctx, f).negated());
    let merged = wrap_contraction(ctx, &difference).expect("two or more slots");
    cyclic_norm(ctx, &merged)
}

/// The antisymmetrization `ε = (1/(k+1)!) Σ_σ sgn(σ) σ`, projecting onto
/// cochains that are alternating under every slot permutation.
pub fn antisymmetrize(ctx: &ASCtx, f: &ASCochain) -> ASCochain {
    let n = f.slots();
    let mut out = ASCochain::zero(n);
    for (sign, perm) in permutations(n) {
        for (coeff, slots) in f.terms() {
            let row: Vec<Poly> = perm.iter().map(|&j| slots[j].clone()).collect();
            let signed = if sign >= 0 {
                coeff.clone()
            } else {
                -coeff.clone()
            };
            out.add_term(ctx, signed, row);
        }
    }
    out.scaled(&inv_factorial(n))
}

/// Enumerates the `(p, q)`-shuffles of `{0, …, p+q-1}`: permutations `ν`
/// increasing on their first `p` values and on their last `q` values.
/// Returns `(sign, ν)` pairs with `ν` listed as images.
pub(crate) fn shuffles(p: usize, q: usize) -> Vec<(i64, Vec<usize>)> {
    let n = p + q;
    let mut subsets = Vec::new();
    let mut current = Vec::new();
    pick_subset(0, n, p, &mut current, &mut subsets);
    subsets
        .into_iter()
        .map(|first| {
            let chosen: Vec<bool> = {
                let mut mark = vec![false; n];
                for &v in &first {
                    mark[v] = true;
                }
                mark
            };
            let mut images = first.clone();
            images.extend((0..n).filter(|&v| !chosen[v]));
            let mut inversions = 0u64;
            for a in 0..n {
                for b in a + 1..n {
                    if images[a] > images[b] {
                        inversions += 1;
                    }
                }
            }
            let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
            (sign, images)
        })
        .collect()
}

fn pick_subset(
    start: usize,
    n: usize,
    remaining: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    for v in start..=n - remaining {
        current.push(v);
        pick_subset(v + 1, n, remaining - 1, current, out);
        current.pop();
    }
}

/// The shuffle map into forms of degree `k - 2r`: multiplies the slots at
/// the first `2r + 1` shuffled positions and wedges the differentials of
/// the rest, weighted by `1/((2r)!(k+1))`:
///
/// `λ_k^{k-2r}(f_0 ⊗ … ⊗ f_k)
///    = (1/((2r)!(k+1))) Σ_ν sgn(ν) f_{ν(0)} ⋯ f_{ν(2r)}
///      df_{ν(2r+1)} ∧ … ∧ df_{ν(k)}`.
///
/// The weight is pinned by two requirements: at the bottom of each series
/// (`k = 2r`, a plain product) and on the fully differentiated series
/// (`r = 0`) it is the usual `(k-2r)!/(k+1)!`, and along each series it
/// scales so that on cyclic cochains `λ ∘ delta = d ∘ λ` holds exactly.
/// The constant `(k-2r)!/(k+1)!` applied at every `(k, r)` fails the
/// second requirement: the components then obey
/// `λ(delta f) = ((k+1-2r)/(k+1)) · d λ(f)` instead.
pub fn lambda(ctx: &ASCtx, ext: &Arc<VarSet>, f: &ASCochain, r: usize) -> Result<PolyForm> {
    let k = f.degree();
    if 2 * r > k {
        return Err(Error::DegreeMismatch(format!(
            "lambda component 2r = {} exceeds degree {k}",
            2 * r
        )));
    }
    let base: Vec<usize> = (0..ctx.vars.len()).collect();
    let weight = {
        let series = inv_factorial(2 * r);
        let step = Scalar::from_ratio(1, (k + 1) as i64);
        &series * &step
    };
    let mut out = GradedElement::zero(&ctx.vars, ext);
    for (sign, nu) in shuffles(2 * r + 1, k - 2 * r) {
        for (coeff, slots) in f.terms() {
            let mut function = Polynomial::one(&ctx.vars);
            for &j in &nu[..=2 * r] {
                function = &function * &slots[j];
            }
            let mut form = GradedElement::from_poly(ext, function);
            for &j in &nu[2 * r + 1..] {
                let df = GradedElement::from_poly(ext, slots[j].clone())
                    .exterior_derivative(&base);
                form = form.wedge(&df);
            }
            let mut c = coeff * &weight;
            if sign < 0 {
                c = -c;
            }
            out = out.add(&form.scale(&c));
        }
    }
    Ok(out)
}

/// The total shuffle map `Σ_{2r ≤ k} λ_k^{k-2r}`, a single inhomogeneous
/// form whose degree-`(k-2r)` component is the `r`-th piece. On cyclic
/// cochains (`t f = f`) it intertwines the coboundary with the exterior
/// derivative; on arbitrary cochains the components with undifferentiated
/// blocks spoil that relation.
pub fn lambda_total(ctx: &ASCtx, ext: &Arc<VarSet>, f: &ASCochain) -> PolyForm {
    let mut out = GradedElement::zero(&ctx.vars, ext);
    let mut r = 0;
    while 2 * r <= f.degree() {
        let part = lambda(ctx, ext, f, r).expect("component in range");
        out = out.add(&part);
        r += 1;
    }
    out
}

/// The exterior derivative on polynomial forms, pairing the `i`-th
/// exterior generator with the `i`-th base variable.
pub fn form_d(omega: &PolyForm) -> PolyForm {
    let base: Vec<usize> = (0..omega.ext().len()).collect();
    omega.exterior_derivative(&base)
}

/// A unital algebra with a module action of the polynomial functions and
/// a linear trace functional.
pub trait TracedAlgebra {
    type Elem: Clone;

    fn one(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// The action of a polynomial function on an algebra element.
    fn act(&self, f: &Poly, a: &Self::Elem) -> Self::Elem;
    /// A linear functional with `trace(ab) = trace(ba)`.
    fn trace(&self, a: &Self::Elem) -> Scalar;
}

/// Square matrices with polynomial entries, acted on by the function
/// algebra entrywise, traced by the matrix trace followed by evaluation
/// at the origin.
pub struct MatrixFunctions {
    pub vars: Arc<VarSet>,
    pub size: usize,
}

impl TracedAlgebra for MatrixFunctions {
    type Elem = Matrix<Poly>;

    fn one(&self) -> Matrix<Poly> {
        Matrix::from_fn(self.size, self.size, |i, j| {
            if i == j {
                Polynomial::one(&self.vars)
            } else {
                Polynomial::zero(&self.vars)
            }
        })
    }

    fn mul(&self, a: &Matrix<Poly>, b: &Matrix<Poly>) -> Matrix<Poly> {
        Matrix::from_fn(self.size, self.size, |i, j| {
            let mut sum = Polynomial::zero(&self.vars);
            for l in 0..self.size {
                sum = &sum + &(a.get(i, l) * b.get(l, j));
            }
            sum
        })
    }

    fn act(&self, f: &Poly, a: &Matrix<Poly>) -> Matrix<Poly> {
        a.map(|entry| f * entry)
    }

    fn trace(&self, a: &Matrix<Poly>) -> Scalar {
        let all: Vec<usize> = (0..self.vars.len()).collect();
        let mut out = Scalar::zero();
        for i in 0..self.size {
            out = &out + &a.get(i, i).eval_zero(&all).constant_term();
        }
        out
    }
}

/// The evaluation of a function cochain against algebra elements:
/// `chi(f_0 ⊗ … ⊗ f_k)(a_0 ⊗ … ⊗ a_k) = trace((f_0·a_0) ⋯ (f_k·a_k))`.
pub fn chi<T: TracedAlgebra>(alg: &T, f: &ASCochain, args: &[T::Elem]) -> Result<Scalar> {
    if args.len() != f.slots() {
        return Err(Error::DegreeMismatch(format!(
            "chi expects {} arguments, got {}",
            f.slots(),
            args.len()
        )));
    }
    let mut out = Scalar::zero();
    for (coeff, slots) in f.terms() {
        let mut product = alg.one();
        for (slot, arg) in slots.iter().zip(args) {
            product = alg.mul(&product, &alg.act(slot, arg));
        }
        out = &out + &(coeff * &alg.trace(&product));
    }
    Ok(out)
}

/// Pairs a function cochain with a formal chain of algebra elements,
/// extending [`chi`] linearly over the chain's terms.
pub fn chi_chain<T, A>(alg: &T, f: &ASCochain, chain: &Chain<A>) -> Result<Scalar>
where
    T: TracedAlgebra,
    A: AlgebraContext<Elem = T::Elem>,
{
    let mut out = Scalar::zero();
    for (coeff, slots) in chain.terms() {
        out = &out + &(coeff * &chi(alg, f, slots)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::MatrixCtx;

    fn ctx2() -> ASCtx {
        CommutativePolyCtx::new(&VarSet::numbered("x", 2))
    }

    fn ext2(ctx: &ASCtx) -> Arc<VarSet> {
        let names: Vec<String> = ctx.vars.names().iter().map(|n| format!("d{n}")).collect();
        VarSet::new(names)
    }

    /// A pool of structurally varied polynomials in two variables.
    fn samples(ctx: &ASCtx) -> Vec<Poly> {
        let x1 = Polynomial::var(&ctx.vars, 0);
        let x2 = Polynomial::var(&ctx.vars, 1);
        let one = Polynomial::one(&ctx.vars);
        vec![
            &x1 + &one.scale(&Scalar::from_int(2)),
            &x2 * &x2,
            &(&x1 * &x2) + &x2.scale(&Scalar::i()),
            &one + &x1.scale(&Scalar::from_ratio(1, 3)),
            x2.scale(&Scalar::from_int(-1)),
        ]
    }

    fn sample_cochain(ctx: &ASCtx, degree: usize, offset: usize) -> ASCochain {
        let pool = samples(ctx);
        let mut chain = ASCochain::zero(degree + 1);
        for t in 0..2 {
            let row: Vec<Poly> = (0..=degree)
                .map(|j| pool[(offset + 2 * t + 3 * j) % pool.len()].clone())
                .collect();
            let coeff = if t == 0 {
                Scalar::one()
            } else {
                Scalar::from_ratio(1, 2)
            };
            chain.add_term(ctx, coeff, row);
        }
        chain
    }

    #[test]
    fn the_degree_zero_coboundary_is_a_difference_of_insertions() {
        let ctx = ctx2();
        let f = Polynomial::var(&ctx.vars, 0);
        let chain = ASCochain::elementary(&ctx, Scalar::one(), vec![f.clone()]);
        let delta = as_delta(&ctx, &chain);
        let mut expected = ASCochain::zero(2);
        expected.add_term(&ctx, Scalar::one(), vec![ctx.one(), f.clone()]);
        expected.add_term(&ctx, -Scalar::one(), vec![f, ctx.one()]);
        assert!(delta.equals(&ctx, &expected));
    }

    #[test]
    fn both_coboundaries_square_to_zero() {
        let ctx = ctx2();
        for degree in 0..=3 {
            let f = sample_cochain(&ctx, degree, degree);
            let dd = as_delta(&ctx, &as_delta(&ctx, &f));
            assert!(dd.is_zero_chain(&ctx), "delta^2 at degree {degree}");
            let dpdp = as_delta_prime(&ctx, &as_delta_prime(&ctx, &f));
            assert!(dpdp.is_zero_chain(&ctx), "delta'^2 at degree {degree}");
        }
    }

    #[test]
    fn degeneracies_merge_adjacent_slots() {
        let ctx = ctx2();
        let pool = samples(&ctx);
        let f = ASCochain::elementary(
            &ctx,
            Scalar::one(),
            vec![pool[0].clone(), pool[1].clone(), pool[2].clone()],
        );
        let merged = degeneracy(&ctx, &f, 0).unwrap();
        let expected = ASCochain::elementary(
            &ctx,
            Scalar::one(),
            vec![&pool[0] * &pool[1], pool[2].clone()],
        );
        assert!(merged.equals(&ctx, &expected));
        assert!(degeneracy(&ctx, &f, 2).is_err());
    }

    #[test]
    fn the_base_contraction_evaluates_the_first_slot_at_the_origin() {
        let ctx = ctx2();
        let pool = samples(&ctx);
        let f = ASCochain::elementary(
            &ctx,
            Scalar::one(),
            vec![pool[0].clone(), pool[1].clone()],
        );
        let contracted = base_contraction(&ctx, &f).unwrap();
        let expected =
            ASCochain::elementary(&ctx, Scalar::from_int(2), vec![pool[1].clone()]);
        assert!(contracted.equals(&ctx, &expected));
    }

    #[test]
    fn the_wrap_contraction_merges_the_first_slot_into_the_last() {
        let ctx = ctx2();
        let pool = samples(&ctx);
        let f = ASCochain::elementary(
            &ctx,
            Scalar::one(),
            vec![pool[0].clone(), pool[1].clone()],
        );
        let wrapped = wrap_contraction(&ctx, &f).unwrap();
        let expected =
            ASCochain::elementary(&ctx, Scalar::one(), vec![&pool[1] * &pool[0]]);
        assert!(wrapped.equals(&ctx, &expected));
    }

    #[test]
    fn the_base_contraction_is_a_homotopy_for_the_full_coboundary() {
        let ctx = ctx2();
        for degree in 1..=3 {
            let f = sample_cochain(&ctx, degree, degree + 1);
            let lhs = base_contraction(&ctx, &as_delta(&ctx, &f))
                .unwrap()
                .plus(&as_delta(&ctx, &base_contraction(&ctx, &f).unwrap()));
            assert!(lhs.equals(&ctx, &f), "contraction at degree {degree}");
        }
        let f = sample_cochain(&ctx, 0, 1);
        let contracted = base_contraction(&ctx, &as_delta(&ctx, &f)).unwrap();
        let augmented = ASCochain::elementary(
            &ctx,
            augmentation(&ctx, &f).unwrap(),
            vec![ctx.one()],
        );
        assert!(contracted.plus(&augmented).equals(&ctx, &f));
    }

    #[test]
    fn the_wrap_contraction_is_a_homotopy_for_the_truncated_coboundary() {
        let ctx = ctx2();
        for degree in 1..=3 {
            let f = sample_cochain(&ctx, degree, degree + 2);
            let lhs = wrap_contraction(&ctx, &as_delta_prime(&ctx, &f))
                .unwrap()
                .plus(&as_delta_prime(
                    &ctx,
                    &wrap_contraction(&ctx, &f).unwrap(),
                ));
            assert!(lhs.equals(&ctx, &f), "contraction at degree {degree}");
        }
        let f = sample_cochain(&ctx, 0, 3);
        let contracted = wrap_contraction(&ctx, &as_delta_prime(&ctx, &f)).unwrap();
        assert!(contracted.equals(&ctx, &f));
    }

    #[test]
    fn cofaces_and_degeneracies_satisfy_the_cosimplicial_identities() {
        let ctx = ctx2();
        for degree in 0..=3 {
            let f = sample_cochain(&ctx, degree, degree);
            let slots = f.slots();

            for i in 0..=slots {
                for j in i + 1..=slots + 1 {
                    let lhs = coface(&ctx, &coface(&ctx, &f, i).unwrap(), j).unwrap();
                    let rhs = coface(&ctx, &coface(&ctx, &f, j - 1).unwrap(), i).unwrap();
                    assert!(lhs.equals(&ctx, &rhs), "coface ({i},{j}) degree {degree}");
                }
            }

            if slots >= 3 {
                for i in 0..=slots - 3 {
                    for j in i..=slots - 3 {
                        let lhs =
                            degeneracy(&ctx, &degeneracy(&ctx, &f, i).unwrap(), j).unwrap();
                        let rhs = degeneracy(&ctx, &degeneracy(&ctx, &f, j + 1).unwrap(), i)
                            .unwrap();
                        assert!(lhs.equals(&ctx, &rhs), "degeneracy ({i},{j})");
                    }
                }
            }

            for j in 0..slots {
                for i in 0..=slots {
                    let lifted = coface(&ctx, &f, i).unwrap();
                    let lhs = degeneracy(&ctx, &lifted, j).unwrap();
                    let rhs = if i < j {
                        coface(&ctx, &degeneracy(&ctx, &f, j - 1).unwrap(), i).unwrap()
                    } else if i == j || i == j + 1 {
                        f.clone()
                    } else {
                        coface(&ctx, &degeneracy(&ctx, &f, j).unwrap(), i - 1).unwrap()
                    };
                    assert!(lhs.equals(&ctx, &rhs), "mixed ({i},{j}) degree {degree}");
                }
            }
        }
    }

    #[test]
    fn the_cyclic_rotation_is_compatible_with_faces_and_degeneracies() {
        let ctx = ctx2();
        for degree in 1..=3 {
            let f = sample_cochain(&ctx, degree - 1, degree);
            for i in 1..=f.slots() {
                let lhs = cyclic_rotate(&ctx, &coface(&ctx, &f, i).unwrap());
                let rhs = coface(&ctx, &cyclic_rotate(&ctx, &f), i - 1).unwrap();
                assert!(lhs.equals(&ctx, &rhs), "coface {i} degree {degree}");
            }
        }
        for degree in 2..=3 {
            let g = sample_cochain(&ctx, degree, degree + 1);
            for i in 1..=g.slots() - 2 {
                let lhs = cyclic_rotate(&ctx, &degeneracy(&ctx, &g, i).unwrap());
                let rhs = degeneracy(&ctx, &cyclic_rotate(&ctx, &g), i - 1).unwrap();
                assert!(lhs.equals(&ctx, &rhs), "degeneracy {i} degree {degree}");
            }
        }
    }

    #[test]
    fn the_signed_cyclic_operator_negates_a_transposition() {
        let ctx = ctx2();
        let pool = samples(&ctx);
        let f = ASCochain::elementary(
            &ctx,
            Scalar::one(),
            vec![pool[0].clone(), pool[1].clone()],
        );
        let t = as_cyclic_t(&ctx, &f);
        let expected = ASCochain::elementary(
            &ctx,
            -Scalar::one(),
            vec![pool[1].clone(), pool[0].clone()],
        );
        assert!(t.equals(&ctx, &expected));
    }

    #[test]
    fn the_signed_cyclic_operator_has_the_right_order() {
        let ctx = ctx2();
        for degree in 0..=3 {
            let f = sample_cochain(&ctx, degree, 2 * degree);
            let mut power = f.clone();
            for _ in 0..=degree {
                power = as_cyclic_t(&ctx, &power);
            }
            assert!(power.equals(&ctx, &f), "order at degree {degree}");
        }
    }

    #[test]
    fn the_mixed_complex_relations_hold() {
        let ctx = ctx2();
        for degree in 1..=3 {
            let f = sample_cochain(&ctx, degree, degree + 2);
            let anti = as_b(&ctx, &as_delta(&ctx, &f))
                .plus(&as_delta(&ctx, &as_b(&ctx, &f)));
            assert!(anti.is_zero_chain(&ctx), "delta B + B delta at {degree}");
            if degree >= 2 {
                let bb = as_b(&ctx, &as_b(&ctx, &f));
                assert!(bb.is_zero_chain(&ctx), "B^2 at {degree}");
            }
        }
        let constant = ASCochain::elementary(&ctx, Scalar::from_int(5), vec![ctx.one()]);
        assert!(as_b(&ctx, &constant).is_zero_chain(&ctx));
    }

    #[test]
    fn antisymmetrization_kills_a_symmetric_tensor_and_is_idempotent() {
        let ctx = ctx2();
        let pool = samples(&ctx);
        let f = ASCochain::elementary(
            &ctx,
            Scalar::one(),
            vec![pool[1].clone(), pool[1].clone()],
        );
        assert!(antisymmetrize(&ctx, &f).is_zero_chain(&ctx));

        for degree in 0..=3 {
            let g = sample_cochain(&ctx, degree, degree + 1);
            let once = antisymmetrize(&ctx, &g);
            let twice = antisymmetrize(&ctx, &once);
            assert!(twice.equals(&ctx, &once), "idempotent at degree {degree}");
        }
    }

    #[test]
    fn antisymmetrization_commutes_with_the_coboundary() {
        let ctx = ctx2();
        for degree in 0..=2 {
            let f = sample_cochain(&ctx, degree, degree + 3);
            let lhs = antisymmetrize(&ctx, &as_delta(&ctx, &f));
            let rhs = as_delta(&ctx, &antisymmetrize(&ctx, &f));
            assert!(lhs.equals(&ctx, &rhs), "chain map at degree {degree}");
        }
    }

    #[test]
    fn the_degree_one_shuffle_map_antisymmetrizes_the_leibniz_pairing() {
        let ctx = ctx2();
        let ext = ext2(&ctx);
        let pool = samples(&ctx);
        let f = ASCochain::elementary(
            &ctx,
            Scalar::one(),
            vec![pool[0].clone(), pool[2].clone()],
        );
        let form = lambda(&ctx, &ext, &f, 0).unwrap();
        let base = [0usize, 1];
        let d0 = GradedElement::from_poly(&ext, pool[0].clone()).exterior_derivative(&base);
        let d2 = GradedElement::from_poly(&ext, pool[2].clone()).exterior_derivative(&base);
        let expected = d2
            .scale_poly(&pool[0])
            .sub(&d0.scale_poly(&pool[2]))
            .scale(&Scalar::from_ratio(1, 2));
        assert!(form.sub(&expected).is_zero());
    }

    #[test]
    fn the_shuffle_map_sends_the_coboundary_of_a_function_to_its_differential() {
        let ctx = ctx2();
        let ext = ext2(&ctx);
        let pool = samples(&ctx);
        let f = ASCochain::elementary(&ctx, Scalar::one(), vec![pool[2].clone()]);
        let image = lambda(&ctx, &ext, &as_delta(&ctx, &f), 0).unwrap();
        let df = GradedElement::from_poly(&ext, pool[2].clone()).exterior_derivative(&[0, 1]);
        assert!(image.sub(&df).is_zero());
        let zeroth = lambda(&ctx, &ext, &f, 0).unwrap();
        assert!(form_d(&zeroth).sub(&df).is_zero());
    }

    #[test]
    fn shuffle_components_drop_differentiated_constant_slots() {
        let ctx = ctx2();
        let ext = ext2(&ctx);
        let f = ASCochain::elementary(
            &ctx,
            Scalar::one(),
            vec![ctx.one(), ctx.one(), Polynomial::var(&ctx.vars, 0)],
        );
        let top = lambda(&ctx, &ext, &f, 0).unwrap();
        assert!(top.is_zero(), "every pair of differentials hits a constant");
        let middle = lambda(&ctx, &ext, &f, 1).unwrap();
        let expected = GradedElement::from_poly(
            &ext,
            Polynomial::var(&ctx.vars, 0).scale(&Scalar::from_ratio(1, 6)),
        );
        assert!(middle.sub(&expected).is_zero());
        assert!(lambda(&ctx, &ext, &f, 2).is_err());
    }

    #[test]
    fn the_total_shuffle_map_intertwines_the_coboundary_with_d() {
        let ctx = ctx2();
        let ext = ext2(&ctx);
        for degree in 0..=3 {
            let f = cyclic_norm(&ctx, &sample_cochain(&ctx, degree, degree));
            let lhs = lambda_total(&ctx, &ext, &as_delta(&ctx, &f));
            let rhs = form_d(&lambda_total(&ctx, &ext, &f));
            assert!(lhs.sub(&rhs).is_zero(), "intertwining at degree {degree}");
        }

        let plain = sample_cochain(&ctx, 1, 1);
        let stray = lambda(&ctx, &ext, &as_delta(&ctx, &plain), 1).unwrap();
        assert!(
            !stray.is_zero(),
            "without cyclicity the undifferentiated component survives"
        );

        let ctx3 = CommutativePolyCtx::new(&VarSet::numbered("x", 3));
        let ext3 = ext2(&ctx3);
        let x1 = Polynomial::var(&ctx3.vars, 0);
        let x2 = Polynomial::var(&ctx3.vars, 1);
        let x3 = Polynomial::var(&ctx3.vars, 2);
        let pool = [
            &x1 + &x3,
            &x2 * &x3,
            &(&x1 * &x2) + &x3.scale(&Scalar::i()),
            &x3 * &x3,
        ];
        for degree in 1..=3 {
            let row: Vec<Poly> = (0..=degree).map(|j| pool[j % pool.len()].clone()).collect();
            let f = cyclic_norm(&ctx3, &ASCochain::elementary(&ctx3, Scalar::one(), row));
            let lhs = lambda_total(&ctx3, &ext3, &as_delta(&ctx3, &f));
            let rhs = form_d(&lambda_total(&ctx3, &ext3, &f));
            assert!(
                lhs.sub(&rhs).is_zero(),
                "three variable intertwining at degree {degree}"
            );
            if degree == 2 {
                let top_forms_appear = rhs
                    .iter_terms()
                    .any(|(mask, p)| mask.count_ones() == 3 && !p.is_zero());
                assert!(top_forms_appear, "the top form component must be exercised");
            }
        }
    }

    #[test]
    fn the_exterior_derivative_obeys_the_leibniz_rule_and_squares_to_zero() {
        let ctx = ctx2();
        let ext = ext2(&ctx);
        let x1 = Polynomial::var(&ctx.vars, 0);
        let x2 = Polynomial::var(&ctx.vars, 1);

        let omega = GradedElement::term(&ext, 0b10, x1.clone());
        let d_omega = form_d(&omega);
        let expected = GradedElement::term(&ext, 0b11, Polynomial::one(&ctx.vars));
        assert!(d_omega.sub(&expected).is_zero());

        let pool = samples(&ctx);
        let fg = GradedElement::from_poly(&ext, &pool[0] * &pool[2]);
        let leibniz = form_d(&GradedElement::from_poly(&ext, pool[0].clone()))
            .scale_poly(&pool[2])
            .add(&form_d(&GradedElement::from_poly(&ext, pool[2].clone())).scale_poly(&pool[0]));
        assert!(form_d(&fg).sub(&leibniz).is_zero());

        let mixed = GradedElement::from_poly(&ext, &x1 * &(&x2 * &x2))
            .add(&GradedElement::term(&ext, 0b01, &x1 * &x2));
        assert!(form_d(&form_d(&mixed)).is_zero());
    }

    fn traced2(ctx: &ASCtx) -> MatrixFunctions {
        MatrixFunctions {
            vars: Arc::clone(&ctx.vars),
            size: 2,
        }
    }

    fn elementary_matrix(alg: &MatrixFunctions, i: usize, j: usize) -> Matrix<Poly> {
        Matrix::from_fn(alg.size, alg.size, |a, b| {
            if (a, b) == (i, j) {
                Polynomial::one(&alg.vars)
            } else {
                Polynomial::zero(&alg.vars)
            }
        })
    }

    fn sample_matrices(alg: &MatrixFunctions) -> Vec<Matrix<Poly>> {
        let x1 = Polynomial::var(&alg.vars, 0);
        let x2 = Polynomial::var(&alg.vars, 1);
        let one = Polynomial::one(&alg.vars);
        vec![
            Matrix::from_rows(
                2,
                2,
                vec![one.clone(), x1.clone(), Polynomial::zero(&alg.vars), x2.clone()],
            ),
            Matrix::from_rows(
                2,
                2,
                vec![
                    x2.scale(&Scalar::i()),
                    one.clone(),
                    &x1 * &x2,
                    one.scale(&Scalar::from_ratio(1, 2)),
                ],
            ),
            Matrix::from_rows(
                2,
                2,
                vec![&x1 + &x2, Polynomial::zero(&alg.vars), x1.clone(), one],
            ),
        ]
    }

    #[test]
    fn chi_on_the_unit_cochain_is_the_trace_of_the_product() {
        let ctx = ctx2();
        let alg = traced2(&ctx);
        let f = ASCochain::elementary(&ctx, Scalar::one(), vec![ctx.one(), ctx.one()]);
        let mats = sample_matrices(&alg);
        let value = chi(&alg, &f, &[mats[0].clone(), mats[1].clone()]).unwrap();
        let product = alg.mul(&mats[0], &mats[1]);
        assert_eq!(value, alg.trace(&product));
    }

    #[test]
    fn chi_vanishes_when_a_slot_function_vanishes_at_the_origin() {
        let ctx = ctx2();
        let alg = traced2(&ctx);
        let f = ASCochain::elementary(
            &ctx,
            Scalar::one(),
            vec![Polynomial::var(&ctx.vars, 0), ctx.one()],
        );
        let e11 = elementary_matrix(&alg, 0, 0);
        let value = chi(&alg, &f, &[e11.clone(), e11]).unwrap();
        assert!(value.is_zero());
        assert!(chi(&alg, &f, &[alg.one()]).is_err());
    }

    #[test]
    fn chi_intertwines_the_hochschild_boundary_with_the_coboundary() {
        let ctx = ctx2();
        let alg = traced2(&ctx);
        let matrix_ctx = MatrixCtx::new(CommutativePolyCtx::<Scalar>::new(&ctx.vars), 2);
        let mats = sample_matrices(&alg);
        for degree in 0..=2 {
            let f = sample_cochain(&ctx, degree, degree + 1);
            let mut slots: Vec<Matrix<Poly>> = Vec::new();
            for j in 0..=degree + 1 {
                slots.push(mats[j % mats.len()].clone());
            }
            let arg_chain = Chain::elementary(&matrix_ctx, Scalar::one(), slots);
            let boundary = arg_chain.hochschild_b(&matrix_ctx, None);
            let lhs = chi_chain(&alg, &f, &boundary).unwrap();
            let rhs = chi_chain(&alg, &as_delta(&ctx, &f), &arg_chain).unwrap();
            assert_eq!(lhs, rhs, "intertwining at degree {degree}");
        }
    }

    #[test]
    fn chi_of_a_cyclic_cochain_kills_the_connes_boundary() {
        let ctx = ctx2();
        let alg = traced2(&ctx);
        let matrix_ctx = MatrixCtx::new(CommutativePolyCtx::<Scalar>::new(&ctx.vars), 2);
        let mats = sample_matrices(&alg);
        for degree in 1..=2 {
            let raw = sample_cochain(&ctx, degree, degree);
            let f = cyclic_norm(&ctx, &raw);
            assert!(
                as_cyclic_t(&ctx, &f).equals(&ctx, &f),
                "the norm produces a cyclic cochain"
            );
            let mut slots: Vec<Matrix<Poly>> = Vec::new();
            for j in 0..degree {
                slots.push(mats[j % mats.len()].clone());
            }
            let arg_chain = Chain::elementary(&matrix_ctx, Scalar::one(), slots);
            let lifted = arg_chain.connes_b_bar(&matrix_ctx, None);
            let value = chi_chain(&alg, &f, &lifted).unwrap();
            assert!(value.is_zero(), "B pairing at degree {degree}");
        }
    }

}
