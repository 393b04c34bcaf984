//! The ground ring Q(i)[hbar, hbar^-1].
//!
//! A [`Scalar`] is a Laurent polynomial in the formal parameter `hbar`
//! whose coefficients are Gaussian rationals (complex numbers with
//! rational real and imaginary parts, kept exactly). Rational components
//! are always gcd-reduced with positive denominators; integer parts use
//! arbitrary precision.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Exact element of Q(i): a complex number with `BigRational` components.
pub type GaussianRational = Complex<BigRational>;

/// Builds a Gaussian rational from integer numerators and denominators of
/// the real and imaginary parts.
pub fn gauss(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> GaussianRational {
    Complex::new(
        BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
        BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
    )
}

/// Laurent polynomial in `hbar` over the Gaussian rationals.
///
/// Terms are stored sparsely by exponent; zero coefficients are never
/// kept, so the zero element is the empty term map and equality is
/// structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<i64, GaussianRational>,
}

impl Scalar {
    /// The zero scalar (empty term map).
    pub fn zero() -> Self {
        Scalar { terms: BTreeMap::new() }
    }

    /// The unit scalar 1.
    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    /// The imaginary unit i.
    pub fn i() -> Self {
        Scalar::term(gauss(0, 1, 1, 1), 0)
    }

    /// `hbar^exp`.
    pub fn hbar(exp: i64) -> Self {
        Scalar::term(Complex::one(), exp)
    }

    /// A single term `c * hbar^exp`.
    pub fn term(c: GaussianRational, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Scalar { terms }
    }

    /// An integer constant.
    pub fn from_int(n: i64) -> Self {
        Scalar::term(gauss(n, 1, 0, 1), 0)
    }

    /// The rational constant `num/den`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::term(gauss(num, den, 0, 1), 0)
    }

    /// Iterates over `(exponent, coefficient)` pairs in increasing
    /// exponent order.
    pub fn iter_terms(&self) -> impl Iterator<Item = (&i64, &GaussianRational)> {
        self.terms.iter()
    }

    /// True when the scalar has no terms.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of `hbar^exp` (zero when absent).
    pub fn coeff(&self, exp: i64) -> GaussianRational {
        self.terms.get(&exp).cloned().unwrap_or_else(Complex::zero)
    }

    /// The hbar-free part of the scalar, when the scalar is an honest
    /// constant; `None` when any term carries a nonzero hbar exponent.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        if self.terms.is_empty() {
            return Some(Complex::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&0) {
                return Some(c.clone());
            }
        }
        None
    }

    /// Multiplies in place by `c * hbar^exp`.
    pub fn mul_term(&self, c: &GaussianRational, exp: i64) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, a)| (e + exp, a * c))
            .collect();
        Scalar { terms }
    }

    /// The multiplicative inverse.
    ///
    /// Laurent units are exactly the single-term scalars with nonzero
    /// coefficient; anything else reports [`Error::NotAUnit`].
    pub fn inv(&self) -> Result<Scalar> {
        if self.terms.len() != 1 {
            return Err(Error::NotAUnit(self.to_string()));
        }
        let (exp, c) = self.terms.iter().next().expect("nonempty");
        Ok(Scalar::term(c.inv(), -exp))
    }

    /// Integer power; negative powers require a unit.
    pub fn pow(&self, k: i64) -> Result<Scalar> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut acc = Scalar::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        Ok(acc)
    }

    fn insert_add(terms: &mut BTreeMap<i64, GaussianRational>, exp: i64, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            Scalar::insert_add(&mut terms, *e, c.clone());
        }
        Scalar { terms }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            Scalar::insert_add(&mut terms, *e, -c.clone());
        }
        Scalar { terms }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut terms = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                Scalar::insert_add(&mut terms, e1 + e2, c1 * c2);
            }
        }
        Scalar { terms }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let terms = self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect();
        Scalar { terms }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (e, c) in &rhs.terms {
            Scalar::insert_add(&mut self.terms, *e, c.clone());
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (e, c) in &rhs.terms {
            Scalar::insert_add(&mut self.terms, *e, -c.clone());
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Formats a Gaussian rational as `a`, `bi`, or `(a+bi)`.
pub fn fmt_gauss(c: &GaussianRational) -> String {
    let re_zero = c.re.is_zero();
    let im_zero = c.im.is_zero();
    match (re_zero, im_zero) {
        (true, true) => "0".to_string(),
        (false, true) => fmt_rational(&c.re),
        (true, false) => {
            if c.im.is_one() {
                "i".to_string()
            } else if (-c.im.clone()).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", fmt_rational(&c.im))
            }
        }
        (false, false) => {
            let im = if c.im.is_one() {
                "i".to_string()
            } else if (-c.im.clone()).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", fmt_rational(&c.im))
            };
            if im.starts_with('-') {
                format!("({}{})", fmt_rational(&c.re), im)
            } else {
                format!("({}+{})", fmt_rational(&c.re), im)
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, c) in &self.terms {
            let cs = fmt_gauss(c);
            let (sign, body) = if let Some(stripped) = cs.strip_prefix('-') {
                ("-", stripped.to_string())
            } else {
                ("+", cs)
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            match *exp {
                0 => write!(f, "{}", body)?,
                1 => {
                    if body == "1" {
                        write!(f, "hbar")?;
                    } else {
                        write!(f, "{}*hbar", body)?;
                    }
                }
                e => {
                    if body == "1" {
                        write!(f, "hbar^{}", e)?;
                    } else {
                        write!(f, "{}*hbar^{}", body, e)?;
                    }
                }
            }
        }
        Ok(())
    }
}
