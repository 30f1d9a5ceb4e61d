//! Exact rational interval arithmetic.
//!
//! The numeric enclosure path bounds derivative magnitudes of its integrands
//! by evaluating polynomials over an interval with outward-rounding-free
//! rational endpoints: every bound is an exact rational, so the final
//! enclosure is mathematically guaranteed rather than floating-point
//! heuristic.

use super::poly::{Poly, Var};
use super::ExactError;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// A closed interval with exact rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QInterval {
    lo: BigRational,
    hi: BigRational,
}

impl QInterval {
    /// Builds an interval, swapping endpoints when given in reverse order.
    pub fn new(lo: BigRational, hi: BigRational) -> QInterval {
        if lo <= hi {
            QInterval { lo, hi }
        } else {
            QInterval { lo: hi, hi: lo }
        }
    }

    /// The degenerate interval `[x, x]`.
    pub fn point(x: BigRational) -> QInterval {
        QInterval { lo: x.clone(), hi: x }
    }

    /// Lower endpoint.
    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    /// Upper endpoint.
    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    /// Interval sum.
    pub fn add(&self, other: &QInterval) -> QInterval {
        QInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    /// Interval difference.
    pub fn sub(&self, other: &QInterval) -> QInterval {
        QInterval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    /// Interval product (min/max over the four endpoint products).
    pub fn mul(&self, other: &QInterval) -> QInterval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().expect("nonempty").clone();
        let hi = products.iter().max().expect("nonempty").clone();
        QInterval { lo, hi }
    }

    /// Interval power by repeated multiplication.
    pub fn pow(&self, n: u8) -> QInterval {
        let mut acc = QInterval::point(BigRational::from_integer(1.into()));
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// True when the interval contains zero.
    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// The largest absolute value attained on the interval.
    pub fn abs_max(&self) -> BigRational {
        self.lo.abs().max(self.hi.abs())
    }

    /// The smallest absolute value attained on the interval (zero when the
    /// interval straddles zero).
    pub fn abs_min(&self) -> BigRational {
        if self.contains_zero() {
            BigRational::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }
}

/// An interval guaranteed to contain the range of a rational-coefficient
/// polynomial in one variable over `[lo, hi]`, computed by interval Horner
/// evaluation.
pub fn poly_range(p: &Poly, var: Var, domain: &QInterval) -> Result<QInterval, ExactError> {
    let coeffs = p.to_univariate_rational(var)?;
    let mut acc = QInterval::point(BigRational::zero());
    for c in coeffs.iter().rev() {
        acc = acc.mul(domain).add(&QInterval::point(c.clone()));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_poly, rat};

    #[test]
    fn product_tracks_signs() {
        let a = QInterval::new(rat(-1, 1), rat(2, 1));
        let b = QInterval::new(rat(-3, 1), rat(1, 2));
        let p = a.mul(&b);
        assert_eq!(p.lo(), &rat(-6, 1));
        assert_eq!(p.hi(), &rat(3, 1));
    }

    #[test]
    fn horner_range_contains_sampled_values() {
        let p = parse_poly("69-78*u+22*u^2").unwrap();
        let domain = QInterval::new(rat(1, 1), rat(3, 2));
        let range = poly_range(&p, crate::exact::Var::U, &domain).unwrap();
        // Exact values at a few sample points must lie inside the range.
        for x in [rat(1, 1), rat(5, 4), rat(3, 2)] {
            let v = p
                .eval1(crate::exact::Var::U, &crate::exact::Scalar::Rat(x))
                .unwrap()
                .to_rational("sample")
                .unwrap();
            assert!(range.lo() <= &v && &v <= range.hi());
        }
    }

    #[test]
    fn abs_extrema() {
        let straddling = QInterval::new(rat(-2, 1), rat(1, 1));
        assert_eq!(straddling.abs_max(), rat(2, 1));
        assert_eq!(straddling.abs_min(), rat(0, 1));
        let negative = QInterval::new(rat(-3, 1), rat(-1, 2));
        assert_eq!(negative.abs_max(), rat(3, 1));
        assert_eq!(negative.abs_min(), rat(1, 2));
        assert!(!negative.contains_zero());
    }
}
