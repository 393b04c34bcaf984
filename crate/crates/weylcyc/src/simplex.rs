//! Exact integration of polynomials over ordered simplices.
//!
//! The simplex of dimension `m` is the region
//! `0 <= u_1 <= u_2 <= .. <= u_m <= 1`. Integration proceeds by iterated
//! exact antiderivatives: integrate out `u_1` from `0` to `u_2`, then
//! `u_2` from `0` to `u_3`, and so on, finishing with `u_m` over `[0, 1]`.
//! Everything stays in the coefficient ring; there is no rounding.

use std::sync::Arc;

use crate::poly::{Coeff, Polynomial, VarSet};

/// The variable context `u1 .. um` used for simplex parameters.
pub fn u_vars(m: usize) -> Arc<VarSet> {
    VarSet::numbered("u", m)
}

/// Integrates `f` over the ordered simplex in the variables
/// `u_{1} .. u_{m}` (indices `0 .. m-1` of its context); any remaining
/// generators are carried along as parameters in the result.
///
/// For `m = 0` the integral is `f` itself (the empty simplex is a point).
pub fn simplex_integrate<C: Coeff>(f: &Polynomial<C>, m: usize) -> Polynomial<C> {
    let vars = f.vars().clone();
    assert!(m <= vars.len(), "simplex dimension exceeds variable count");
    let mut current = f.clone();
    for i in 0..m {
        let anti = current.antiderivative(i);
        let upper = if i + 1 < m {
            anti.substitute_var(i, &Polynomial::var(&vars, i + 1))
        } else {
            anti.substitute_var(i, &Polynomial::one(&vars))
        };
        // the antiderivative vanishes at u_i = 0, so the lower limit drops
        current = upper;
    }
    current
}

/// Integrates and extracts the constant value; panics if parameters
/// remain (callers integrate fully).
pub fn simplex_integral_value<C: Coeff>(f: &Polynomial<C>, m: usize) -> C {
    simplex_integrate(f, m)
        .as_constant()
        .expect("simplex integral left free parameters")
}

/// Closed-form value of the simplex integral of a monomial
/// `u_1^{e_1} .. u_m^{e_m}`:
/// `prod_{j=1..m} 1 / (e_1 + .. + e_j + j)`.
///
/// This is an independent cross-check of [`simplex_integrate`], derived
/// by integrating the variables in order.
pub fn monomial_simplex_value<C: Coeff>(exponents: &[usize]) -> C {
    let mut value = C::one();
    let mut partial = 0i64;
    for (j, e) in exponents.iter().enumerate() {
        partial += *e as i64;
        value = value * C::from_i64_ratio(1, partial + (j as i64) + 1);
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn volume_is_inverse_factorial() {
        for m in 0..=5 {
            let vars = u_vars(m.max(1));
            let one = Polynomial::<Scalar>::one(&vars);
            let vol = simplex_integral_value(&one, m);
            let mut fact = 1i64;
            for k in 1..=m {
                fact *= k as i64;
            }
            assert_eq!(vol, Scalar::from_ratio(1, fact), "dimension {}", m);
        }
    }

    #[test]
    fn linear_and_quadratic_examples() {
        let vars = u_vars(3);
        let u1 = Polynomial::<Scalar>::var(&vars, 0);
        let u2 = Polynomial::<Scalar>::var(&vars, 1);
        assert_eq!(simplex_integral_value(&u1, 2), Scalar::from_ratio(1, 6));
        assert_eq!(simplex_integral_value(&u2.pow(2), 3), Scalar::from_ratio(1, 20));
    }

    #[test]
    fn matches_closed_form_on_monomials() {
        let m = 4;
        let vars = u_vars(m);
        for e in [[0, 0, 0, 0], [1, 0, 2, 0], [2, 1, 0, 3], [1, 1, 1, 1], [4, 0, 0, 2]] {
            let mono = Polynomial::<Scalar>::monomial(
                &vars,
                &e.iter().enumerate().map(|(i, k)| (i, *k as u16)).collect::<Vec<_>>(),
                Scalar::one(),
            );
            let direct = simplex_integral_value(&mono, m);
            let closed = monomial_simplex_value::<Scalar>(&e.map(|k| k as usize));
            assert_eq!(direct, closed, "exponents {:?}", e);
        }
    }

    #[test]
    fn partial_integration_keeps_parameters() {
        let vars = u_vars(2);
        let u2 = Polynomial::<Scalar>::var(&vars, 1);
        // integrate only u1 over 0 <= u1 <= u2: the result is u2 itself
        let one = Polynomial::<Scalar>::one(&vars);
        let partial = simplex_integrate(&one, 1);
        // with m = 1 the last variable integrates over [0, 1]
        assert_eq!(partial, one);
        let f = simplex_integrate(&u2, 2);
        assert_eq!(f.as_constant(), Some(Scalar::from_ratio(1, 3)));
    }
}
