//! The polynomial Weyl algebra and its symplectic symmetries.
//!
//! Elements are polynomials in `p1, q1, .., pn, qn` over the ground ring
//! Q(i)[hbar, hbar^-1]; the Moyal-Weyl product is
//! `f * g = m(exp(hbar*alpha/2)(f (x) g))` with
//! `alpha = sum_s d/dp_s (x) d/dq_s - d/dq_s (x) d/dp_s`.
//! Each application of `alpha` lowers total degree by two, so the
//! exponential series terminates on polynomials and the product is exact.
//!
//! The module also provides the symplectic group action, the quadratic
//! realization of the symplectic Lie algebra, Cayley transforms, and the
//! twisted trace functional attached to a finite-order symplectic
//! automorphism.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::matrix::{is_symplectic, Matrix};
use crate::poly::VarSet;
use crate::scalar::{gauss, GaussianRational, Scalar};
use crate::{Error, Poly, QiMatrix, Result};

/// The rational `1 / (2^m * m!)` as an exact scalar.
fn inv_two_pow_factorial(m: usize) -> Scalar {
    let mut den = BigInt::one();
    for k in 1..=m {
        den *= BigInt::from(k);
    }
    den *= BigInt::from(2u32).pow(m as u32);
    Scalar::term(
        Complex::new(BigRational::new(BigInt::one(), den), BigRational::zero()),
        0,
    )
}

/// The rational `1 / m!` as an exact scalar.
pub fn inv_factorial(m: usize) -> Scalar {
    let mut den = BigInt::one();
    for k in 1..=m {
        den *= BigInt::from(k);
    }
    Scalar::term(
        Complex::new(BigRational::new(BigInt::one(), den), BigRational::zero()),
        0,
    )
}

/// Applies the Poisson bidifferential `alpha` once to a sum of simple
/// tensors `f (x) g`, restricted to the designated `(p, q)` variable
/// pairs.
pub fn alpha_step(pairs: &[(usize, usize)], terms: &[(Poly, Poly)]) -> Vec<(Poly, Poly)> {
    let mut out = Vec::new();
    for (f, g) in terms {
        for (pi, qi) in pairs {
            let fp = f.partial(*pi);
            let gq = g.partial(*qi);
            if !fp.is_zero() && !gq.is_zero() {
                out.push((fp, gq));
            }
            let fq = f.partial(*qi);
            let gp = g.partial(*pi);
            if !fq.is_zero() && !gp.is_zero() {
                out.push((-&fq, gp));
            }
        }
    }
    out
}

/// Moyal-Weyl product restricted to the designated `(p, q)` pairs; other
/// generators are treated as central parameters.
pub fn moyal_product_pairs(pairs: &[(usize, usize)], f: &Poly, g: &Poly) -> Poly {
    let mut result = f * g;
    let mut tensor = vec![(f.clone(), g.clone())];
    let mut m = 0usize;
    loop {
        tensor = alpha_step(pairs, &tensor);
        if tensor.is_empty() {
            break;
        }
        m += 1;
        let coeff = &Scalar::hbar(m as i64) * &inv_two_pow_factorial(m);
        for (a, b) in &tensor {
            result = &result + &(a * b).scale(&coeff);
        }
    }
    result
}

/// Poisson bracket restricted to the designated `(p, q)` pairs.
pub fn poisson_pairs(pairs: &[(usize, usize)], f: &Poly, g: &Poly) -> Poly {
    let mut out = Poly::zero(f.vars());
    for (a, b) in alpha_step(pairs, &[(f.clone(), g.clone())]) {
        out = &out + &(&a * &b);
    }
    out
}

/// Context for the Weyl algebra on `n` symplectic pairs.
#[derive(Clone, Debug)]
pub struct WeylContext {
    n: usize,
    vars: Arc<VarSet>,
    pairs: Vec<(usize, usize)>,
}

impl WeylContext {
    /// The Weyl algebra on generators `p1, q1, .., pn, qn`.
    pub fn new(n: usize) -> Self {
        let vars = VarSet::weyl(n);
        let pairs = (0..n).map(|s| (2 * s, 2 * s + 1)).collect();
        WeylContext { n, vars, pairs }
    }

    /// Number of symplectic pairs.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The generator context.
    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    /// The `(p_s, q_s)` variable-index pairs.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// The generator `p_s` (1-indexed).
    pub fn p(&self, s: usize) -> Poly {
        Poly::var(&self.vars, 2 * (s - 1))
    }

    /// The generator `q_s` (1-indexed).
    pub fn q(&self, s: usize) -> Poly {
        Poly::var(&self.vars, 2 * (s - 1) + 1)
    }

    /// The unit element.
    pub fn one(&self) -> Poly {
        Poly::one(&self.vars)
    }

    /// The zero element.
    pub fn zero(&self) -> Poly {
        Poly::zero(&self.vars)
    }

    /// The Moyal-Weyl product.
    pub fn moyal(&self, f: &Poly, g: &Poly) -> Poly {
        assert_eq!(
            f.vars().names(),
            self.vars.names(),
            "element does not belong to this Weyl algebra"
        );
        moyal_product_pairs(&self.pairs, f, g)
    }

    /// The Poisson bracket.
    pub fn poisson(&self, f: &Poly, g: &Poly) -> Poly {
        poisson_pairs(&self.pairs, f, g)
    }

    /// The star commutator `[f, g] = f*g - g*f`.
    pub fn commutator(&self, f: &Poly, g: &Poly) -> Poly {
        &self.moyal(f, g) - &self.moyal(g, f)
    }

    /// Action of a symplectic matrix: the algebra automorphism sending
    /// generator `y_i` to `sum_j S_{ji} y_j`.
    pub fn sp_act(&self, s: &QiMatrix, f: &Poly) -> Poly {
        assert_eq!(s.rows(), 2 * self.n, "matrix size must match the algebra");
        let images: Vec<Poly> = (0..2 * self.n)
            .map(|i| {
                let mut img = Poly::zero(&self.vars);
                for j in 0..2 * self.n {
                    let c = s.get(j, i);
                    if !c.is_zero() {
                        img = &img
                            + &Poly::var(&self.vars, j).scale(&Scalar::term(c.clone(), 0));
                    }
                }
                img
            })
            .collect();
        f.substitute(&images)
    }

    /// The quadratic Hamiltonian `q_X = (1/2) sum_{ij} (omega X)_{ij} y^i y^j`
    /// of a symplectic Lie algebra element, pinned by
    /// `(1/hbar)[q_X, y] = X y`.
    pub fn sp_to_quadratic(&self, x: &QiMatrix) -> Result<Poly> {
        if !crate::matrix::is_sp_element(x) {
            return Err(Error::InvalidMatrix(
                "not in the symplectic Lie algebra".to_string(),
            ));
        }
        let omega = crate::matrix::symplectic_gram(self.n);
        let s = omega.mul_mat(x);
        let mut out = Poly::zero(&self.vars);
        let half = gauss(1, 2, 0, 1);
        for i in 0..2 * self.n {
            for j in 0..2 * self.n {
                let c = s.get(i, j) * &half;
                if c.is_zero() {
                    continue;
                }
                out = &out
                    + &Poly::monomial(&self.vars, &[(i, 1), (j, 1)], Scalar::term(c, 0));
            }
        }
        Ok(out)
    }

    /// The Lie algebra embedding `X -> (1/hbar) q_X`. With the normalization
    /// of [`sp_to_quadratic`](Self::sp_to_quadratic), the star commutator of
    /// two images represents the reversed matrix bracket `[Y, X]`.
    pub fn sp_to_lie(&self, x: &QiMatrix) -> Result<Poly> {
        Ok(self.sp_to_quadratic(x)?.scale(&Scalar::hbar(-1)))
    }
}

/// The Cayley transform `(1 - g)(1 + g)^{-1}`.
pub fn cayley(g: &QiMatrix) -> Result<QiMatrix> {
    let id = Matrix::<GaussianRational>::identity(g.rows());
    let num = id.sub_mat(g);
    let den = id.add_mat(g);
    Ok(num.mul_mat(&den.inverse()?))
}

/// A finite-order symplectic automorphism of the Weyl algebra together
/// with the splitting of the symplectic vector space into its fixed part
/// (the first `n - l` pairs) and the transversal part (the last `l`
/// pairs).
#[derive(Clone, Debug)]
pub struct FiniteTwist {
    n: usize,
    l: usize,
    sp: QiMatrix,
    order: usize,
}

impl FiniteTwist {
    /// Builds a twist acting as the identity on the first `n - l` pairs
    /// and by the given symplectic `2l x 2l` block on the last `l` pairs.
    ///
    /// The block must be symplectic, of finite order, and fix no nonzero
    /// vector (so that the transversal part is honestly transversal).
    pub fn new(n: usize, l: usize, block: QiMatrix) -> Result<Self> {
        assert!(l <= n, "transversal pairs cannot exceed total pairs");
        if block.rows() != 2 * l || block.cols() != 2 * l {
            return Err(Error::InvalidMatrix(format!(
                "transversal block must be {0}x{0}",
                2 * l
            )));
        }
        if l > 0 && !is_symplectic(&block) {
            return Err(Error::InvalidMatrix("transversal block is not symplectic".into()));
        }
        let mut sp = Matrix::<GaussianRational>::identity(2 * n);
        for i in 0..2 * l {
            for j in 0..2 * l {
                sp.set(2 * (n - l) + i, 2 * (n - l) + j, block.get(i, j).clone());
            }
        }
        let order = sp
            .finite_order(64)
            .ok_or_else(|| Error::InvalidMatrix("twist is not of finite order <= 64".into()))?;
        if l > 0 {
            let id = Matrix::<GaussianRational>::identity(2 * l);
            if id.sub_mat(&block).det().is_zero() {
                return Err(Error::InvalidMatrix(
                    "transversal block fixes a nonzero vector".into(),
                ));
            }
        }
        Ok(FiniteTwist { n, l, sp, order })
    }

    /// The identity twist (every pair invariant).
    pub fn identity(n: usize) -> Self {
        FiniteTwist {
            n,
            l: 0,
            sp: Matrix::<GaussianRational>::identity(2 * n),
            order: 1,
        }
    }

    /// Multiplication by `i` on each of the last `l` complex lines:
    /// `p -> q, q -> -p` pairwise; order four.
    pub fn scalar_i(n: usize, l: usize) -> Self {
        let mut block = Matrix::<GaussianRational>::zeros(2 * l, 2 * l);
        for s in 0..l {
            block.set(2 * s + 1, 2 * s, GaussianRational::one());
            block.set(2 * s, 2 * s + 1, -GaussianRational::one());
        }
        FiniteTwist::new(n, l, block).expect("scalar i twist is valid")
    }

    /// Multiplication by `-1` on each of the last `l` pairs; order two.
    pub fn scalar_minus_one(n: usize, l: usize) -> Self {
        let block = Matrix::<GaussianRational>::identity(2 * l).neg_mat();
        FiniteTwist::new(n, l, block).expect("scalar -1 twist is valid")
    }

    /// Total number of pairs.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of transversal pairs.
    pub fn l(&self) -> usize {
        self.l
    }

    /// Multiplicative order of the twist.
    pub fn order(&self) -> usize {
        self.order
    }

    /// The full `2n x 2n` symplectic matrix.
    pub fn sp(&self) -> &QiMatrix {
        &self.sp
    }

    /// Variable-index pairs of the invariant part.
    pub fn invariant_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n - self.l).map(|s| (2 * s, 2 * s + 1)).collect()
    }

    /// Variable-index pairs of the transversal part.
    pub fn transversal_pairs(&self) -> Vec<(usize, usize)> {
        (self.n - self.l..self.n).map(|s| (2 * s, 2 * s + 1)).collect()
    }

    /// Per-variable flags marking the transversal generators.
    pub fn transversal_flags(&self) -> Vec<bool> {
        (0..2 * self.n).map(|i| i / 2 >= self.n - self.l).collect()
    }

    /// Applies the automorphism to a Weyl element.
    pub fn apply(&self, ctx: &WeylContext, f: &Poly) -> Poly {
        ctx.sp_act(&self.sp, f)
    }

    /// The complex `l x l` matrix `u` of the transversal action in the
    /// coordinates `z_s = q_s + i p_s`: `gamma(z_s) = sum_t u_{ts} z_t`.
    ///
    /// Reports [`Error::InvalidMatrix`] when the block is not complex
    /// linear for this complex structure.
    pub fn unitary_matrix(&self) -> Result<QiMatrix> {
        let l = self.l;
        let base = self.n - self.l;
        let mut u = Matrix::<GaussianRational>::zeros(l, l);
        let half = gauss(1, 2, 0, 1);
        let half_i = gauss(0, 1, 1, 2);
        for s in 0..l {
            let p_col = 2 * (base + s);
            let q_col = p_col + 1;
            for t in 0..l {
                let p_row = 2 * (base + t);
                let q_row = p_row + 1;
                // coefficient of y_m in gamma(z_s) is sp[m][q_col] + i sp[m][p_col]
                let c_p = self.sp.get(p_row, q_col) + &(self.sp.get(p_row, p_col) * &gauss(0, 1, 1, 1));
                let c_q = self.sp.get(q_row, q_col) + &(self.sp.get(q_row, p_col) * &gauss(0, 1, 1, 1));
                let a = &(&c_q * &half) - &(&c_p * &half_i);
                let b = &(&c_q * &half) + &(&c_p * &half_i);
                if !b.is_zero() {
                    return Err(Error::InvalidMatrix(
                        "transversal block is not complex linear".into(),
                    ));
                }
                u.set(t, s, a);
            }
        }
        Ok(u)
    }
}

/// Fedosov's twisted trace on the Weyl algebra of the transversal part:
/// a Gaussian-type functional satisfying
/// `tr(a * b) = tr(gamma(b) * a)` exactly, with
/// `tr(1) = det^{-1}(1 - gamma^{-1})`.
#[derive(Clone, Debug)]
pub struct TwistedTrace {
    twist: FiniteTwist,
    det_factor: GaussianRational,
    kernel: QiMatrix,
}

impl TwistedTrace {
    /// Builds the trace from a twist with `l >= 1` transversal pairs (for
    /// `l = 0` the trace degenerates to the identity on constants, which
    /// is also supported).
    pub fn new(twist: &FiniteTwist) -> Result<Self> {
        if twist.l == 0 {
            return Ok(TwistedTrace {
                twist: twist.clone(),
                det_factor: GaussianRational::one(),
                kernel: Matrix::zeros(0, 0),
            });
        }
        let u = twist.unitary_matrix()?;
        let u_inv = u.inverse()?;
        let id = Matrix::<GaussianRational>::identity(twist.l);
        let one_minus = id.sub_mat(&u_inv);
        let det = one_minus.det();
        if det.is_zero() {
            return Err(Error::InvalidMatrix(
                "1 is an eigenvalue of the transversal action".into(),
            ));
        }
        // The exponent kernel is -i * c(gamma^{-1})^{-1} where c is the
        // Cayley transform; the -i matches this crate's normalization of
        // the star product ([z, zbar] = 2 i hbar).
        let c = cayley(&u_inv)?;
        let kernel = c.inverse()?.scale_entries(&gauss(0, 1, -1, 1));
        Ok(TwistedTrace {
            twist: twist.clone(),
            det_factor: det.inv(),
            kernel,
        })
    }

    /// The underlying twist.
    pub fn twist(&self) -> &FiniteTwist {
        &self.twist
    }

    /// `tr(1)`, the determinant prefactor.
    pub fn trace_of_one(&self) -> GaussianRational {
        self.det_factor.clone()
    }

    /// Applies `d/dz_s = (1/2)(d/dq_s - i d/dp_s)` for transversal pair
    /// index `s` (0-based within the transversal block).
    fn d_z(&self, f: &Poly, s: usize) -> Poly {
        let base = self.twist.n - self.twist.l;
        let p = 2 * (base + s);
        let q = p + 1;
        let half = Scalar::from_ratio(1, 2);
        let minus_half_i = &Scalar::from_ratio(-1, 2) * &Scalar::i();
        &f.partial(q).scale(&half) + &f.partial(p).scale(&minus_half_i)
    }

    /// Applies `d/dzbar_t = (1/2)(d/dq_t + i d/dp_t)`.
    fn d_zbar(&self, f: &Poly, t: usize) -> Poly {
        let base = self.twist.n - self.twist.l;
        let p = 2 * (base + t);
        let q = p + 1;
        let half = Scalar::from_ratio(1, 2);
        let half_i = &half * &Scalar::i();
        &f.partial(q).scale(&half) + &f.partial(p).scale(&half_i)
    }

    /// One application of the kernel operator
    /// `sum_{s,t} G_{st} d/dz_s d/dzbar_t`.
    fn kernel_step(&self, f: &Poly) -> Poly {
        let l = self.twist.l;
        let mut out = Poly::zero(f.vars());
        for s in 0..l {
            for t in 0..l {
                let g = self.kernel.get(s, t);
                if g.is_zero() {
                    continue;
                }
                let d = self.d_zbar(&self.d_z(f, s), t);
                out = &out + &d.scale(&Scalar::term(g.clone(), 0));
            }
        }
        out
    }

    /// Evaluates the twisted trace on an element of the Weyl algebra of
    /// the transversal part. Invariant generators may appear and are
    /// treated as central parameters left in the result; the scalar
    /// value is the constant term after the transversal generators are
    /// evaluated at the origin.
    pub fn eval_poly(&self, a: &Poly) -> Poly {
        let transversal: Vec<usize> = self
            .twist
            .transversal_flags()
            .iter()
            .enumerate()
            .filter_map(|(i, t)| if *t { Some(i) } else { None })
            .collect();
        let mut acc = Poly::zero(a.vars());
        let mut current = a.clone();
        let mut m = 0usize;
        loop {
            let contribution = current.eval_zero(&transversal);
            let coeff = &Scalar::hbar(m as i64) * &inv_factorial(m);
            acc = &acc + &contribution.scale(&coeff);
            current = self.kernel_step(&current);
            if current.is_zero() {
                break;
            }
            m += 1;
        }
        acc.scale(&Scalar::term(self.det_factor.clone(), 0))
    }

    /// Evaluates the trace to a scalar; the argument must contain no
    /// invariant generators.
    pub fn eval(&self, a: &Poly) -> Scalar {
        let value = self.eval_poly(a);
        value
            .as_constant()
            .expect("twisted trace argument must be transversal")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moyal_on_generators() {
        let w = WeylContext::new(1);
        let p = w.p(1);
        let q = w.q(1);
        let half_hbar = &Scalar::from_ratio(1, 2) * &Scalar::hbar(1);
        assert_eq!(w.moyal(&p, &q), &(&p * &q) + &Poly::constant(w.vars(), half_hbar.clone()));
        assert_eq!(w.moyal(&q, &p), &(&p * &q) - &Poly::constant(w.vars(), half_hbar));
        assert_eq!(
            w.commutator(&p, &q),
            Poly::constant(w.vars(), Scalar::hbar(1))
        );
    }

    #[test]
    fn moyal_is_associative_on_a_nontrivial_triple() {
        let w = WeylContext::new(2);
        let a = &w.p(1).pow(2) * &w.q(2);
        let b = &(&w.q(1) * &w.p(2)) + &w.one();
        let c = &w.p(1) * &w.q(1).pow(2);
        let left = w.moyal(&w.moyal(&a, &b), &c);
        let right = w.moyal(&a, &w.moyal(&b, &c));
        assert_eq!(left, right);
    }

    #[test]
    fn quadratic_realization_reproduces_matrix_action() {
        let w = WeylContext::new(1);
        // X = [[1, 0], [0, -1]] and Y = [[0, 1], [0, 0]] in the (p, q) basis
        // both lie in sp(2); the row of the matrix gives the image of the
        // matching generator.
        let x = Matrix::from_gauss(2, 2, &[(1, 1, 0, 1), (0, 1, 0, 1), (0, 1, 0, 1), (-1, 1, 0, 1)]);
        let y = Matrix::from_gauss(2, 2, &[(0, 1, 0, 1), (1, 1, 0, 1), (0, 1, 0, 1), (0, 1, 0, 1)]);
        for m in [&x, &y] {
            let qm = w.sp_to_quadratic(m).unwrap();
            for (i, gen) in [w.p(1), w.q(1)].iter().enumerate() {
                let lhs = w.commutator(&qm, gen).scale(&Scalar::hbar(-1));
                let mut rhs = Poly::zero(w.vars());
                for j in 0..2 {
                    let c = m.get(i, j);
                    if !c.is_zero() {
                        rhs = &rhs + &Poly::var(w.vars(), j).scale(&Scalar::term(c.clone(), 0));
                    }
                }
                assert_eq!(lhs, rhs, "generator {}", i);
            }
        }
    }

    #[test]
    fn lie_embedding_reverses_brackets() {
        let w = WeylContext::new(1);
        let x = Matrix::from_gauss(2, 2, &[(1, 1, 0, 1), (0, 1, 0, 1), (0, 1, 0, 1), (-1, 1, 0, 1)]);
        let y = Matrix::from_gauss(2, 2, &[(0, 1, 0, 1), (1, 1, 0, 1), (0, 1, 0, 1), (0, 1, 0, 1)]);
        let reversed = y.mul_mat(&x).sub_mat(&x.mul_mat(&y));
        let lhs = w.commutator(&w.sp_to_lie(&x).unwrap(), &w.sp_to_lie(&y).unwrap());
        let rhs = w.sp_to_lie(&reversed).unwrap();
        assert_eq!(lhs, rhs);
        assert!(!lhs.is_zero());
    }

    #[test]
    fn scalar_i_twist_acts_as_rotation() {
        let w = WeylContext::new(1);
        let tw = FiniteTwist::scalar_i(1, 1);
        assert_eq!(tw.order(), 4);
        assert_eq!(tw.apply(&w, &w.p(1)), w.q(1));
        assert_eq!(tw.apply(&w, &w.q(1)), -&w.p(1));
        let u = tw.unitary_matrix().unwrap();
        assert_eq!(u.get(0, 0), &gauss(0, 1, 1, 1));
    }

    #[test]
    fn twisted_trace_of_one() {
        let tw = FiniteTwist::scalar_i(1, 1);
        let tr = TwistedTrace::new(&tw).unwrap();
        assert_eq!(tr.trace_of_one(), gauss(1, 2, -1, 2));
    }

    #[test]
    fn twisted_trace_identity_on_sample_pairs() {
        let w = WeylContext::new(1);
        let tw = FiniteTwist::scalar_i(1, 1);
        let tr = TwistedTrace::new(&tw).unwrap();
        let samples = [w.one(), w.p(1), w.q(1), &w.p(1) * &w.q(1), w.p(1).pow(2)];
        for a in &samples {
            for b in &samples {
                let lhs = tr.eval(&w.moyal(a, b));
                let rhs = tr.eval(&w.moyal(&tw.apply(&w, b), a));
                assert_eq!(lhs, rhs, "a = {}, b = {}", a, b);
            }
        }
    }
}
