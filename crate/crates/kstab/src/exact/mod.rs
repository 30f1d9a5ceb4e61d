//! Exact scalar and function arithmetic.
//!
//! Everything in this module is exact: rationals of arbitrary precision,
//! elements of a single real quadratic extension `Q(sqrt(d))`, sparse
//! polynomials over those scalars, single-variable rational functions,
//! piecewise functions over algebraic breakpoints, and closed-form
//! integration. The one deliberately inexact operation, numeric integration
//! of rational-function integrands, returns a *verified enclosure*: an exact
//! rational interval guaranteed to contain the true value.

mod interval;
mod numeric;
mod piecewise;
mod poly;
mod ratfn;
mod roots;
mod scalar;

pub use interval::{poly_range, QInterval};
pub use numeric::{integrate_numeric, rational_bracket};
pub use piecewise::{integrate_piecewise, PieceFn, PiecewiseFn};
pub use poly::{integrate_poly, parse_poly, Poly, Var};
pub use ratfn::RationalFn;
pub use roots::{nonneg_on_interval, nonneg_on_ray, roots_in_interval};
pub use scalar::{parse_scalar, Scalar};

use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt;

/// Errors produced by the exact-arithmetic layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactError {
    /// Arithmetic between two distinct quadratic extensions was requested.
    MixedFields(u64, u64),
    /// The radicand of a quadratic scalar must be square-free and at least 2.
    BadRadicand(u64),
    /// A polynomial was used where a different variable set was required.
    WrongVariables(String),
    /// Root isolation is only implemented up to degree 2, by design.
    DegreeTooHigh(usize),
    /// The zero polynomial has no well-defined root list.
    ZeroPolynomial,
    /// Integration bounds must satisfy `lo <= hi`.
    BadInterval(String),
    /// A rational-function piece with a nonconstant denominator cannot be
    /// integrated in closed form; it must go through the numeric path.
    NeedsNumericPath,
    /// The denominator of a numeric integrand vanishes inside the domain.
    DenominatorVanishes(String),
    /// A division by zero (scalar, polynomial, or rational-function).
    DivisionByZero,
    /// An exact polynomial division left a remainder.
    NotDivisible(String),
    /// The adaptive enclosure failed to reach the requested width.
    NumericFailure(String),
    /// An exact sign certification was outside the supported degree range.
    CannotCertify(String),
    /// A parse error in the literal grammar, with a short diagnostic.
    Parse(String),
    /// An operation required rational values but received a quadratic one.
    NotRational(String),
    /// Breakpoints of a piecewise function must be strictly increasing, and
    /// continuous-flagged functions must agree at shared breakpoints.
    BadPiecewise(String),
}

impl fmt::Display for ExactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactError::MixedFields(d1, d2) => write!(
                f,
                "cannot mix elements of Q(sqrt({d1})) and Q(sqrt({d2})); computations must \
                 declare a single quadratic field"
            ),
            ExactError::BadRadicand(d) => {
                write!(f, "radicand {d} is not a square-free integer >= 2")
            }
            ExactError::WrongVariables(msg) => write!(f, "wrong variables: {msg}"),
            ExactError::DegreeTooHigh(d) => write!(
                f,
                "root isolation is limited to degree 2 by design; got degree {d}"
            ),
            ExactError::ZeroPolynomial => {
                write!(f, "the zero polynomial has no well-defined root list")
            }
            ExactError::BadInterval(msg) => write!(f, "bad interval: {msg}"),
            ExactError::NeedsNumericPath => write!(
                f,
                "piece has a nonconstant denominator; integrate it with the numeric enclosure path"
            ),
            ExactError::DenominatorVanishes(msg) => {
                write!(f, "denominator vanishes on the domain: {msg}")
            }
            ExactError::DivisionByZero => write!(f, "division by zero"),
            ExactError::NotDivisible(msg) => {
                write!(f, "exact polynomial division left a remainder: {msg}")
            }
            ExactError::NumericFailure(msg) => write!(f, "numeric enclosure failure: {msg}"),
            ExactError::CannotCertify(msg) => write!(f, "cannot certify sign: {msg}"),
            ExactError::Parse(msg) => write!(f, "parse error: {msg}"),
            ExactError::NotRational(msg) => write!(f, "expected a rational value: {msg}"),
            ExactError::BadPiecewise(msg) => write!(f, "bad piecewise function: {msg}"),
        }
    }
}

impl std::error::Error for ExactError {}

/// Convenience constructor for a `BigRational` from an integer pair.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Convenience constructor for an integral `BigRational`.
pub fn rat_int(num: i64) -> BigRational {
    BigRational::from(BigInt::from(num))
}
