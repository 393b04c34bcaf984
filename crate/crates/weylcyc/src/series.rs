//! Truncated univariate formal power series over the rationals.
//!
//! Used to expand the invariant power series of characteristic classes
//! (exponentials, logarithms, and `sinh(t)/t`) exactly to a requested
//! order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Power series truncated at a fixed order: coefficient `k` of `t^k` for
/// `k = 0 .. order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<BigRational>,
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl Series {
    /// The zero series truncated at `order`.
    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![BigRational::zero(); order + 1] }
    }

    /// The constant series 1.
    pub fn one(order: usize) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// Builds a series from explicit coefficients (padded or truncated to
    /// `order`).
    pub fn from_coeffs(order: usize, coeffs: Vec<BigRational>) -> Self {
        let mut c = coeffs;
        c.resize(order + 1, BigRational::zero());
        Series { coeffs: c }
    }

    /// Truncation order.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^k`.
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Sum.
    pub fn add(&self, rhs: &Series) -> Series {
        assert_eq!(self.order(), rhs.order());
        Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Difference.
    pub fn sub(&self, rhs: &Series) -> Series {
        assert_eq!(self.order(), rhs.order());
        Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Scales by a rational.
    pub fn scale(&self, c: &BigRational) -> Series {
        Series { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Truncated product.
    pub fn mul(&self, rhs: &Series) -> Series {
        let order = self.order();
        assert_eq!(order, rhs.order());
        let mut out = Series::zero(order);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j > order {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inv(&self) -> Series {
        let order = self.order();
        let c0 = self.coeff(0);
        assert!(!c0.is_zero(), "series with zero constant term has no inverse");
        let c0_inv = BigRational::one() / c0;
        // g = 1 - f/c0 has zero constant term; 1/f = (1/c0) sum g^m
        let g = Series::one(order).sub(&self.scale(&c0_inv));
        let mut out = Series::one(order);
        let mut g_pow = Series::one(order);
        for _ in 1..=order {
            g_pow = g_pow.mul(&g);
            out = out.add(&g_pow);
        }
        out.scale(&c0_inv)
    }

    /// Quotient `self / rhs`.
    pub fn div(&self, rhs: &Series) -> Series {
        self.mul(&rhs.inv())
    }

    /// Exponential; the constant term must vanish.
    pub fn exp(&self) -> Series {
        let order = self.order();
        assert!(self.coeff(0).is_zero(), "exp requires zero constant term");
        let mut out = Series::one(order);
        let mut power = Series::one(order);
        let mut factorial = BigRational::one();
        for m in 1..=order {
            power = power.mul(self);
            factorial *= BigRational::from(BigInt::from(m));
            out = out.add(&power.scale(&(BigRational::one() / factorial.clone())));
        }
        out
    }

    /// Logarithm; the constant term must be 1.
    pub fn log(&self) -> Series {
        let order = self.order();
        assert!(self.coeff(0).is_one(), "log requires constant term 1");
        let g = self.sub(&Series::one(order));
        let mut out = Series::zero(order);
        let mut power = Series::one(order);
        for m in 1..=order {
            power = power.mul(&g);
            let sign = if m % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale(&ratio(sign, m as i64)));
        }
        out
    }
}

/// The even series `sinh(t)/t = sum_k t^{2k} / (2k+1)!`.
pub fn sinh_t_over_t(order: usize) -> Series {
    let mut s = Series::zero(order);
    let mut fact = BigRational::one();
    let mut k = 0usize;
    loop {
        let exp = 2 * k;
        if exp > order {
            break;
        }
        // fact = (2k+1)! accumulated incrementally
        if k == 0 {
            fact = BigRational::one();
        } else {
            fact *= BigRational::from(BigInt::from(2 * k));
            fact *= BigRational::from(BigInt::from(2 * k + 1));
        }
        s = s.add(&Series::from_coeffs(
            order,
            {
                let mut v = vec![BigRational::zero(); exp + 1];
                v[exp] = BigRational::one() / fact.clone();
                v
            },
        ));
        k += 1;
    }
    s
}

/// Coefficients `c_j` of `log(sinh(t)/t) = sum_{j>=1} c_j t^{2j}`, up to
/// `t^(2*jmax)`.
pub fn log_sinh_t_over_t(jmax: usize) -> Vec<BigRational> {
    let order = 2 * jmax;
    let l = sinh_t_over_t(order).log();
    (1..=jmax).map(|j| l.coeff(2 * j)).collect()
}
