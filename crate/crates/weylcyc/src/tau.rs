//! The cyclic cocycles `τ_k` on the Weyl algebra.
//!
//! Even degrees evaluate
//! `τ_{2k}(a) = (-1)^k μ ∫_{Δ^{2k}} Π_{i<j} exp(ħ(u_i - u_j + 1/2) α_{ij}) (1 ⊗ (ħα)^{∧k})(a) du`
//! with `u_0 = 0`; odd degrees use `(-1)^{k-1}` and let `(ħα)^{∧k}` act on
//! all `2k` slots. `α_{ij}` is the Poisson tensor acting on slots `i` and
//! `j`, `(ħα)^{∧k}` is the alternating sum over perfect matchings, and `μ`
//! evaluates every slot at the origin of the active variables.
//!
//! The engine differentiates only a designated set of variable pairs, so
//! the same code evaluates the cocycles of a full Weyl algebra, of an
//! invariant subalgebra (for the `#`-product with a twisted trace), and of
//! the fiber variables of a bundle section with passive base variables.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::matrix::Matrix;
use crate::poly::{Polynomial, VarSet};
use crate::scalar::{gauss, Scalar};
use crate::simplex::simplex_integral_value;
use crate::weyl::{moyal_product_pairs, TwistedTrace, WeylContext};
use crate::Poly;

/// All perfect matchings of `indices`, each with the sign of the slot
/// permutation `(i_1, j_1, …, i_k, j_k)`.
pub fn perfect_matchings(indices: &[usize]) -> Vec<(i64, Vec<(usize, usize)>)> {
    if indices.is_empty() {
        return vec![(1, Vec::new())];
    }
    let mut out = Vec::new();
    let first = indices[0];
    for r in 1..indices.len() {
        let partner = indices[r];
        let rest: Vec<usize> = indices[1..]
            .iter()
            .copied()
            .filter(|&x| x != partner)
            .collect();
        for (_, mut pairs) in perfect_matchings(&rest) {
            pairs.insert(0, (first, partner));
            let flat: Vec<usize> = pairs.iter().flat_map(|&(i, j)| [i, j]).collect();
            out.push((permutation_sign(&flat), pairs));
        }
    }
    out
}

fn permutation_sign(seq: &[usize]) -> i64 {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

type UPoly = Polynomial<Scalar>;

struct WorkTerm {
    u: UPoly,
    slots: Vec<Poly>,
}

/// Evaluator for the cocycles `τ_k` over a fixed variable set, with the
/// Poisson tensor taken in the designated `(p, q)` index pairs. Variables
/// outside the pairs pass through untouched and survive in the result.
pub struct TauEngine {
    vars: Arc<VarSet>,
    pairs: Vec<(usize, usize)>,
    active: Vec<usize>,
    memo: Mutex<HashMap<(usize, Vec<Poly>), Poly>>,
}

impl TauEngine {
    /// Engine over all pairs of a Weyl context.
    pub fn for_weyl(w: &WeylContext) -> Self {
        TauEngine::with_pairs(w.vars(), w.pairs().to_vec())
    }

    /// Engine over a designated subset of variable pairs.
    pub fn with_pairs(vars: &Arc<VarSet>, pairs: Vec<(usize, usize)>) -> Self {
        let mut active: Vec<usize> = pairs.iter().flat_map(|&(p, q)| [p, q]).collect();
        active.sort_unstable();
        TauEngine {
            vars: Arc::clone(vars),
            pairs,
            active,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    /// One application of the Poisson tensor to slots `i` and `j`,
    /// expanded over the active pairs.
    fn alpha_once(&self, slots: &[Poly], i: usize, j: usize) -> Vec<(i64, Vec<Poly>)> {
        let mut out = Vec::new();
        for &(p, q) in &self.pairs {
            let dp_i = slots[i].partial(p);
            if !dp_i.is_zero() {
                let dq_j = slots[j].partial(q);
                if !dq_j.is_zero() {
                    let mut row = slots.to_vec();
                    row[i] = dp_i;
                    row[j] = dq_j;
                    out.push((1, row));
                }
            }
            let dq_i = slots[i].partial(q);
            if !dq_i.is_zero() {
                let dp_j = slots[j].partial(p);
                if !dp_j.is_zero() {
                    let mut row = slots.to_vec();
                    row[i] = dq_i;
                    row[j] = dp_j;
                    out.push((-1, row));
                }
            }
        }
        out
    }

    /// `λ_{ij} = u_i - u_j + 1/2` with `u_0 = 0`, over the `u` variables.
    fn lambda(uvars: &Arc<VarSet>, i: usize, j: usize) -> UPoly {
        let mut l = Polynomial::constant(uvars, Scalar::from_ratio(1, 2));
        if i > 0 {
            l = &l + &Polynomial::var(uvars, i - 1);
        }
        l = &l - &Polynomial::var(uvars, j - 1);
        l
    }

    /// Evaluates `τ_degree` on an elementary tensor. The result is a
    /// polynomial in the passive variables (constant when every variable
    /// is active).
    pub fn tau(&self, degree: usize, slots: &[Poly]) -> Poly {
        assert_eq!(slots.len(), degree + 1, "τ_k takes k+1 slots");
        for s in slots {
            assert!(
                Arc::ptr_eq(s.vars(), &self.vars) || s.vars() == &self.vars,
                "slot context differs from engine context"
            );
        }
        let key = (degree, slots.to_vec());
        if let Some(hit) = self.memo.lock().unwrap().get(&key) {
            return hit.clone();
        }

        let (k, matched): (usize, Vec<usize>) = if degree.is_multiple_of(2) {
            (degree / 2, (1..=degree).collect())
        } else {
            (degree.div_ceil(2), (0..=degree).collect())
        };
        let negate = if degree.is_multiple_of(2) { k % 2 == 1 } else { (k - 1) % 2 == 1 };

        let m = degree;
        let uvars = VarSet::numbered("u", m);

        let mut state: Vec<WorkTerm> = Vec::new();
        for (msign, mpairs) in perfect_matchings(&matched) {
            let mut terms: Vec<(i64, Vec<Poly>)> = vec![(msign, slots.to_vec())];
            for &(i, j) in &mpairs {
                let mut next = Vec::new();
                for (sign, t) in &terms {
                    for (s2, row) in self.alpha_once(t, i, j) {
                        next.push((sign * s2, row));
                    }
                }
                terms = next;
                if terms.is_empty() {
                    break;
                }
            }
            for (sign, row) in terms {
                let c = Scalar::term(gauss(sign, 1, 0, 1), k as i64);
                state.push(WorkTerm {
                    u: Polynomial::constant(&uvars, c),
                    slots: row,
                });
            }
        }

        for i in 0..=m {
            for j in i + 1..=m {
                state = self.apply_exp_pair(state, &uvars, i, j);
            }
        }

        let mut acc = Poly::zero(&self.vars);
        for t in state {
            let mut passive = Poly::one(&self.vars);
            for s in &t.slots {
                passive = &passive * &s.eval_zero(&self.active);
                if passive.is_zero() {
                    break;
                }
            }
            if passive.is_zero() {
                continue;
            }
            let weight: Scalar = simplex_integral_value(&t.u, m);
            if weight.is_zero() {
                continue;
            }
            acc = &acc + &passive.scale(&weight);
        }
        if negate {
            acc = -&acc;
        }
        self.memo.lock().unwrap().insert(key, acc.clone());
        acc
    }

    /// Expands `exp(ħ λ_{ij} α_{ij})` on every working term.
    fn apply_exp_pair(
        &self,
        state: Vec<WorkTerm>,
        uvars: &Arc<VarSet>,
        i: usize,
        j: usize,
    ) -> Vec<WorkTerm> {
        let lambda = Self::lambda(uvars, i, j);
        let mut out = Vec::new();
        for term in state {
            let mut level: Vec<(UPoly, Vec<Poly>)> = vec![(term.u.clone(), term.slots.clone())];
            out.push(term);
            let mut order = 1i64;
            loop {
                let mut next: Vec<(UPoly, Vec<Poly>)> = Vec::new();
                for (u, slots) in &level {
                    let factor = lambda.scale(&Scalar::term(gauss(1, order, 0, 1), 1));
                    let scaled = u * &factor;
                    for (sign, row) in self.alpha_once(slots, i, j) {
                        let u_new = if sign >= 0 { scaled.clone() } else { -&scaled };
                        next.push((u_new, row));
                    }
                }
                if next.is_empty() {
                    break;
                }
                for (u, slots) in &next {
                    out.push(WorkTerm {
                        u: u.clone(),
                        slots: slots.clone(),
                    });
                }
                level = next;
                order += 1;
            }
        }
        out
    }

    /// `τ_degree` expecting a scalar result (every variable active).
    pub fn tau_scalar(&self, degree: usize, slots: &[Poly]) -> Scalar {
        self.tau(degree, slots)
            .as_constant()
            .expect("τ value has passive variables left")
    }

    /// The matrix extension: the cocycle applied over all cyclic index
    /// tuples of the entries.
    pub fn tau_matrix(&self, degree: usize, slots: &[Matrix<Poly>]) -> Poly {
        matrix_cochain_extension(slots, Poly::zero(&self.vars), |entries| {
            self.tau(degree, entries)
        })
    }
}

/// Extends a cochain on the base algebra to matrices over it by summing
/// over cyclic index tuples `f(a_0[i_0 i_1] ⊗ a_1[i_1 i_2] ⊗ … ⊗ a_m[i_m i_0])`.
pub fn matrix_cochain_extension<T, F>(slots: &[Matrix<Poly>], zero: T, f: F) -> T
where
    T: std::ops::Add<T, Output = T>,
    F: Fn(&[Poly]) -> T,
{
    let m = slots.len();
    assert!(m > 0);
    let size = slots[0].rows();
    for s in slots {
        assert_eq!(s.rows(), size);
        assert_eq!(s.cols(), size);
    }
    let mut acc = zero;
    let mut index = vec![0usize; m];
    loop {
        let mut entries = Vec::with_capacity(m);
        let mut vanishes = false;
        for r in 0..m {
            let e = slots[r].get(index[r], index[(r + 1) % m]);
            if e.is_zero() {
                vanishes = true;
                break;
            }
            entries.push(e.clone());
        }
        if !vanishes {
            acc = acc + f(&entries);
        }
        let mut pos = 0;
        loop {
            if pos == m {
                return acc;
            }
            index[pos] += 1;
            if index[pos] < size {
                break;
            }
            index[pos] = 0;
            pos += 1;
        }
    }
}

/// The `#`-product of a cocycle on the invariant subalgebra with a twisted
/// trace on the transversal variables: every slot monomial splits into its
/// invariant and transversal parts, the cocycle eats the invariant parts,
/// and the trace eats the star product of the transversal parts in slot
/// order.
pub fn sharp_with_trace(
    invariant_engine: &TauEngine,
    psi_degree: usize,
    trace: &TwistedTrace,
    w: &WeylContext,
    slots: &[Poly],
) -> Scalar {
    assert_eq!(slots.len(), psi_degree + 1, "cochain degree mismatch");
    let flags = trace.twist().transversal_flags();
    let splits: Vec<Vec<(Poly, Poly, Scalar)>> = slots
        .iter()
        .map(|s| {
            s.split_terms(&flags)
                .into_iter()
                .map(|(inv, trans, c)| {
                    let mut invariant = Polynomial::zero(w.vars());
                    invariant.add_term(inv, Scalar::one());
                    let mut transversal = Polynomial::zero(w.vars());
                    transversal.add_term(trans, Scalar::one());
                    (invariant, transversal, c)
                })
                .collect()
        })
        .collect();
    let trans_pairs = trace.twist().transversal_pairs();
    let mut acc = Scalar::zero();
    let mut choice = vec![0usize; slots.len()];
    'outer: loop {
        let mut coeff = Scalar::one();
        let mut inv_slots = Vec::with_capacity(slots.len());
        let mut trans_product = w.one();
        for (r, c) in choice.iter().enumerate() {
            let (inv, trans, term_c) = &splits[r][*c];
            coeff = &coeff * term_c;
            inv_slots.push(inv.clone());
            trans_product = moyal_product_pairs(&trans_pairs, &trans_product, trans);
        }
        let psi = invariant_engine
            .tau(psi_degree, &inv_slots)
            .as_constant()
            .expect("invariant part left passive variables");
        if !psi.is_zero() {
            let tr = trace.eval(&trans_product);
            acc = &acc + &(&(&coeff * &psi) * &tr);
        }
        let mut pos = 0;
        loop {
            if pos == slots.len() {
                break 'outer;
            }
            choice[pos] += 1;
            if choice[pos] < splits[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::{Chain, WeylAlgebraCtx};
    use crate::weyl::FiniteTwist;

    fn tau_of_chain(
        engine: &TauEngine,
        degree: usize,
        ctx: &WeylAlgebraCtx,
        chain: &Chain<WeylAlgebraCtx>,
    ) -> Scalar {
        let _ = ctx;
        let mut acc = Scalar::zero();
        for (c, slots) in chain.terms() {
            acc = &acc + &(c * &engine.tau_scalar(degree, slots));
        }
        acc
    }

    #[test]
    fn tau_zero_evaluates_at_the_origin() {
        let w = WeylContext::new(1);
        let engine = TauEngine::for_weyl(&w);
        let a = &(&w.p(1) * &w.q(1)) + &Poly::constant(w.vars(), Scalar::from_ratio(3, 4));
        assert_eq!(engine.tau_scalar(0, &[a]), Scalar::from_ratio(3, 4));
    }

    #[test]
    fn tau_two_golden_value() {
        let w = WeylContext::new(1);
        let engine = TauEngine::for_weyl(&w);
        let value = engine.tau_scalar(2, &[w.one(), w.p(1), w.q(1)]);
        assert_eq!(value, Scalar::term(gauss(-1, 2, 0, 1), 1));
    }

    #[test]
    fn tau_is_normalized() {
        let w = WeylContext::new(1);
        let engine = TauEngine::for_weyl(&w);
        let value = engine.tau_scalar(2, &[w.p(1), w.one(), w.q(1)]);
        assert!(value.is_zero());
    }

    #[test]
    fn tau_one_matches_the_boundary_of_tau_zero() {
        let w = WeylContext::new(1);
        let ctx = WeylAlgebraCtx { w: &w };
        let engine = TauEngine::for_weyl(&w);
        for (a, b) in [
            (w.p(1), w.q(1)),
            (w.p(1).pow(2), w.q(1).pow(2)),
            (&w.p(1) * &w.q(1), w.q(1).pow(3)),
        ] {
            let chain = Chain::elementary(&ctx, Scalar::one(), vec![a.clone(), b.clone()]);
            let lhs = tau_of_chain(&engine, 1, &ctx, &chain);
            let rhs = tau_of_chain(&engine, 0, &ctx, &chain.hochschild_b(&ctx, None));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn tau_three_matches_the_boundary_of_tau_two() {
        let w = WeylContext::new(2);
        let ctx = WeylAlgebraCtx { w: &w };
        let engine = TauEngine::for_weyl(&w);
        let chain = Chain::elementary(
            &ctx,
            Scalar::one(),
            vec![w.p(1), w.q(1), w.p(2), w.q(2)],
        );
        let lhs = tau_of_chain(&engine, 3, &ctx, &chain);
        assert_eq!(lhs, Scalar::term(gauss(-1, 6, 0, 1), 2));
        let rhs = tau_of_chain(&engine, 2, &ctx, &chain.hochschild_b(&ctx, None));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn connes_boundary_of_tau_two_matches_minus_the_hochschild_boundary_of_tau_zero() {
        let w = WeylContext::new(1);
        let ctx = WeylAlgebraCtx { w: &w };
        let engine = TauEngine::for_weyl(&w);
        let chain = Chain::elementary(&ctx, Scalar::one(), vec![w.p(1), w.q(1)]);
        let lhs = tau_of_chain(&engine, 2, &ctx, &chain.connes_b_bar(&ctx, None));
        assert_eq!(lhs, -Scalar::hbar(1));
        let rhs = tau_of_chain(&engine, 0, &ctx, &chain.hochschild_b(&ctx, None));
        assert_eq!(lhs, -rhs);
    }

    #[test]
    fn tau_two_is_invariant_and_basic_for_a_quadratic() {
        let w = WeylContext::new(1);
        let ctx = WeylAlgebraCtx { w: &w };
        let engine = TauEngine::for_weyl(&w);
        let a = &w.p(1) * &w.q(1);
        let chain = Chain::elementary(
            &ctx,
            Scalar::one(),
            vec![w.p(1).pow(2), w.q(1), &w.p(1) * &w.q(1)],
        );
        assert!(tau_of_chain(&engine, 2, &ctx, &chain.lie_action(&ctx, &a)).is_zero());
        let contracted = chain.hochschild_b(&ctx, None).contraction(&ctx, &a);
        assert!(tau_of_chain(&engine, 2, &ctx, &contracted).is_zero());
    }

    #[test]
    fn sharp_product_with_a_fully_transversal_trace_is_the_trace() {
        let w = WeylContext::new(1);
        let tw = FiniteTwist::scalar_i(1, 1);
        let trace = TwistedTrace::new(&tw).unwrap();
        let invariant_engine = TauEngine::with_pairs(w.vars(), Vec::new());
        let value = sharp_with_trace(&invariant_engine, 0, &trace, &w, &[w.one()]);
        assert_eq!(value, Scalar::term(trace.trace_of_one(), 0));
        let pq = &w.p(1) * &w.q(1);
        let direct = trace.eval(&pq);
        let sharped = sharp_with_trace(&invariant_engine, 0, &trace, &w, &[pq]);
        assert_eq!(sharped, direct);
    }
}
