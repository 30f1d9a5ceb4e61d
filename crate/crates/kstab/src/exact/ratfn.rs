//! Exact rational functions `num(x) / den(x)`.
//!
//! These carry closed-form invariant expressions (for example a divisor
//! threshold as a function of a family parameter) and the integrands of the
//! numeric enclosure path. Construction reduces the fraction: a common
//! univariate polynomial factor is cancelled and, for rational coefficients,
//! numerator and denominator are rescaled to coprime integer-coefficient
//! polynomials with a positive leading denominator coefficient, so equal
//! functions print identically.

use super::poly::{Poly, Var};
use super::scalar::Scalar;
use super::ExactError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// A reduced exact rational function.
#[derive(Debug, Clone)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    /// Builds and reduces `num / den`; errors when `den` is the zero
    /// polynomial.
    pub fn new(num: Poly, den: Poly) -> Result<RationalFn, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFn {
                num: Poly::zero(),
                den: Poly::one(),
            });
        }
        // Constant denominators fold into the numerator.
        if let Ok(c) = den.eval_constant() {
            return Ok(RationalFn {
                num: num.scale(&c.recip()?),
                den: Poly::one(),
            });
        }
        let (mut num, mut den) = (num, den);
        if let Some(var) = common_single_var(&num, &den) {
            if let Some(g) = monic_gcd(&num, &den, var) {
                if g.degree_in(var) > 0 {
                    num = num.div_exact(&g, var)?;
                    den = den.div_exact(&g, var)?;
                }
            }
        }
        if let Some((n, d)) = integer_normalized(&num, &den) {
            num = n;
            den = d;
        }
        Ok(RationalFn { num, den })
    }

    /// A polynomial viewed as a rational function.
    pub fn from_poly(p: Poly) -> RationalFn {
        RationalFn {
            num: p,
            den: Poly::one(),
        }
    }

    /// The reduced numerator.
    pub fn num(&self) -> &Poly {
        &self.num
    }

    /// The reduced denominator.
    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// True when the denominator is constant (the function is a polynomial).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The underlying polynomial, when there is one.
    pub fn as_poly(&self) -> Option<Poly> {
        if self.is_polynomial() {
            let c = self.den.eval_constant().ok()?;
            Some(self.num.scale(&c.recip().ok()?))
        } else {
            None
        }
    }

    /// Evaluates at a point; errors when the denominator vanishes there.
    pub fn eval1(&self, var: Var, value: &Scalar) -> Result<Scalar, ExactError> {
        let d = self.den.eval1(var, value)?;
        if d.is_zero() {
            return Err(ExactError::DenominatorVanishes(format!(
                "{} at {} = {}",
                self.den,
                var.symbol(),
                value
            )));
        }
        self.num.eval1(var, value)?.try_div(&d)
    }

    /// Exact sum.
    pub fn add(&self, other: &RationalFn) -> Result<RationalFn, ExactError> {
        let num = (&self.num * &other.den).checked_add(&(&other.num * &self.den))?;
        RationalFn::new(num, &self.den * &other.den)
    }

    /// Exact difference.
    pub fn sub(&self, other: &RationalFn) -> Result<RationalFn, ExactError> {
        self.add(&other.neg())
    }

    /// Exact product.
    pub fn mul(&self, other: &RationalFn) -> Result<RationalFn, ExactError> {
        RationalFn::new(&self.num * &other.num, &self.den * &other.den)
    }

    /// Exact quotient; errors when `other` is identically zero.
    pub fn div(&self, other: &RationalFn) -> Result<RationalFn, ExactError> {
        if other.num.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        RationalFn::new(&self.num * &other.den, &self.den * &other.num)
    }

    /// Negation.
    pub fn neg(&self) -> RationalFn {
        RationalFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    /// Multiplies by a scalar.
    pub fn scale(&self, factor: &Scalar) -> Result<RationalFn, ExactError> {
        RationalFn::new(self.num.scale(factor), self.den.clone())
    }
}

impl PartialEq for RationalFn {
    /// Equality as functions: cross-multiplied polynomial identity.
    fn eq(&self, other: &Self) -> bool {
        (&self.num * &other.den) == (&other.num * &self.den)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// The single variable shared by both polynomials, when each uses at most
/// one variable and they agree.
fn common_single_var(a: &Poly, b: &Poly) -> Option<Var> {
    let mut vars = a.used_vars();
    vars.extend(b.used_vars());
    vars.dedup();
    match vars.as_slice() {
        [v] => Some(*v),
        _ => None,
    }
}

/// Monic univariate gcd by the Euclidean algorithm; `None` when coefficients
/// mix quadratic fields.
fn monic_gcd(a: &Poly, b: &Poly, var: Var) -> Option<Poly> {
    let mut x = a.to_univariate(var).ok()?;
    let mut y = b.to_univariate(var).ok()?;
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = uni_rem(&x, &y)?;
        x = y;
        y = r;
    }
    // Monicize.
    let lead = x.last()?.clone();
    let inv = lead.recip().ok()?;
    let coeffs: Vec<Scalar> = x.iter().map(|c| c.try_mul(&inv).unwrap()).collect();
    Some(uni_to_poly(&coeffs, var))
}

/// Remainder of univariate division with field coefficients.
fn uni_rem(a: &[Scalar], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let mut rem = a.to_vec();
    let dlead = b.last()?;
    let ddeg = b.len() - 1;
    while rem.len() > ddeg {
        let shift = rem.len() - 1 - ddeg;
        let factor = rem.last()?.try_div(dlead).ok()?;
        for (i, bc) in b.iter().enumerate() {
            let delta = factor.try_mul(bc).ok()?;
            rem[shift + i] = rem[shift + i].try_sub(&delta).ok()?;
        }
        trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    Some(rem)
}

fn trim(coeffs: &mut Vec<Scalar>) {
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
}

fn uni_to_poly(coeffs: &[Scalar], var: Var) -> Poly {
    let mut exps = [0u8; 3];
    let mut p = Poly::zero();
    for (k, c) in coeffs.iter().enumerate() {
        exps[var.index()] = k as u8;
        p = p
            .checked_add(&Poly::monomial(c.clone(), exps))
            .expect("single-field coefficients");
    }
    p
}

/// Rescales both polynomials by one rational factor so each has integer
/// coefficients, the two integer contents are coprime, and the denominator's
/// top coefficient is positive. `None` when a coefficient is irrational.
fn integer_normalized(num: &Poly, den: &Poly) -> Option<(Poly, Poly)> {
    let mut all: Vec<BigRational> = Vec::new();
    for (_, c) in num.terms().chain(den.terms()) {
        match c {
            Scalar::Rat(r) => all.push(r.clone()),
            Scalar::Quad { .. } => return None,
        }
    }
    let mut lcm = BigInt::one();
    for r in &all {
        lcm = lcm.lcm(r.denom());
    }
    let mut gcd = BigInt::zero();
    for r in &all {
        gcd = gcd.gcd(&(r.numer() * &lcm / r.denom()));
    }
    if gcd.is_zero() {
        gcd = BigInt::one();
    }
    let mut factor = BigRational::new(lcm, gcd);
    let den_scaled = den.scale_rat(&factor);
    let lead = den_scaled
        .terms()
        .last()
        .map(|(_, c)| c.clone())
        .unwrap_or_else(Scalar::zero);
    if lead.sign() < 0 {
        factor = -factor;
    }
    Some((num.scale_rat(&factor), den.scale_rat(&factor)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_poly, rat};

    #[test]
    fn reduction_cancels_common_factors() {
        let f = RationalFn::new(
            parse_poly("u^2-1").unwrap(),
            parse_poly("u-1").unwrap(),
        )
        .unwrap();
        assert!(f.is_polynomial());
        assert_eq!(f.as_poly().unwrap(), parse_poly("1+u").unwrap());
    }

    #[test]
    fn canonical_integer_rendering() {
        let f = RationalFn::new(
            parse_poly("4/3+2*t+1/2*t^2").unwrap(),
            parse_poly("1+t").unwrap(),
        )
        .unwrap();
        assert_eq!(f.to_string(), "(8+12*t+3*t^2)/(6+6*t)");
    }

    #[test]
    fn arithmetic_reduces() {
        // 1/(u-1) + 1/(u+1) = 2u/(u^2-1).
        let a = RationalFn::new(Poly::one(), parse_poly("u-1").unwrap()).unwrap();
        let b = RationalFn::new(Poly::one(), parse_poly("u+1").unwrap()).unwrap();
        let sum = a.add(&b).unwrap();
        let expected = RationalFn::new(
            parse_poly("2*u").unwrap(),
            parse_poly("u^2-1").unwrap(),
        )
        .unwrap();
        assert_eq!(sum, expected);
    }

    #[test]
    fn evaluation_rejects_poles() {
        let f = RationalFn::new(Poly::one(), parse_poly("u-1").unwrap()).unwrap();
        assert!(f.eval1(Var::U, &Scalar::from_int(1)).is_err());
        assert_eq!(
            f.eval1(Var::U, &Scalar::from_int(3)).unwrap(),
            Scalar::Rat(rat(1, 2))
        );
    }

    #[test]
    fn constant_denominators_fold_away() {
        let f = RationalFn::new(
            parse_poly("3-2*u").unwrap(),
            Poly::from_int(2),
        )
        .unwrap();
        assert!(f.is_polynomial());
        assert_eq!(f.as_poly().unwrap(), parse_poly("3/2-u").unwrap());
    }
}
