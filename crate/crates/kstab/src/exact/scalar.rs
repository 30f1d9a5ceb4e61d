//! Exact scalars: arbitrary-precision rationals and real quadratic irrationals.
//!
//! A [`Scalar`] is either a reduced rational `p/q` or an element `a + b*sqrt(d)`
//! of a real quadratic field, with `a`, `b` rational, `b != 0`, and `d` a
//! square-free integer at least 2. Elements with `b = 0` normalize to the
//! rational representation, so equality is structural. Arithmetic between two
//! *different* quadratic fields is rejected: no composite field towers are
//! ever built, and every computation declares its field implicitly through
//! its inputs.

use super::ExactError;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// An exact scalar: a rational number or a real quadratic irrational.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    /// A reduced rational with positive denominator (enforced by `BigRational`).
    Rat(BigRational),
    /// `a + b*sqrt(d)` with `b != 0` and `d` square-free, `d >= 2`.
    Quad {
        a: BigRational,
        b: BigRational,
        d: u64,
    },
}

impl Scalar {
    /// The rational zero.
    pub fn zero() -> Self {
        Scalar::Rat(BigRational::zero())
    }

    /// The rational one.
    pub fn one() -> Self {
        Scalar::Rat(BigRational::one())
    }

    /// Builds a rational scalar from an integer pair (`den != 0`).
    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(BigRational::from(BigInt::from(n)))
    }

    /// Builds `a + b*sqrt(d)`, normalizing `b = 0` to the rational form and
    /// validating that `d` is square-free and at least 2.
    pub fn quad(a: BigRational, b: BigRational, d: u64) -> Result<Self, ExactError> {
        if b.is_zero() {
            return Ok(Scalar::Rat(a));
        }
        if d < 2 || !is_squarefree(d) {
            return Err(ExactError::BadRadicand(d));
        }
        Ok(Scalar::Quad { a, b, d })
    }

    /// `sqrt(d)` as a scalar (`d` square-free, `d >= 2`).
    pub fn sqrt(d: u64) -> Result<Self, ExactError> {
        Scalar::quad(BigRational::zero(), BigRational::one(), d)
    }

    /// True when the value is rational.
    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    /// True when the value is exactly zero.
    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_zero())
    }

    /// The rational payload, or an error naming `context` for diagnostics.
    pub fn to_rational(&self, context: &str) -> Result<BigRational, ExactError> {
        match self {
            Scalar::Rat(r) => Ok(r.clone()),
            Scalar::Quad { d, .. } => Err(ExactError::NotRational(format!(
                "{context} lies in Q(sqrt({d}))"
            ))),
        }
    }

    /// The radicand of the field this value generates (`None` for rationals).
    pub fn field(&self) -> Option<u64> {
        match self {
            Scalar::Rat(_) => None,
            Scalar::Quad { d, .. } => Some(*d),
        }
    }

    /// Checks that two scalars live in a common field and returns its radicand.
    fn join_field(&self, other: &Scalar) -> Result<Option<u64>, ExactError> {
        match (self.field(), other.field()) {
            (None, f) | (f, None) => Ok(f),
            (Some(d1), Some(d2)) if d1 == d2 => Ok(Some(d1)),
            (Some(d1), Some(d2)) => Err(ExactError::MixedFields(d1, d2)),
        }
    }

    fn parts(&self) -> (BigRational, BigRational) {
        match self {
            Scalar::Rat(r) => (r.clone(), BigRational::zero()),
            Scalar::Quad { a, b, .. } => (a.clone(), b.clone()),
        }
    }

    fn assemble(a: BigRational, b: BigRational, d: Option<u64>) -> Scalar {
        match d {
            Some(d) if !b.is_zero() => Scalar::Quad { a, b, d },
            _ => Scalar::Rat(a),
        }
    }

    /// Exact addition; errors when the fields differ.
    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ExactError> {
        let d = self.join_field(other)?;
        let (a1, b1) = self.parts();
        let (a2, b2) = other.parts();
        Ok(Scalar::assemble(a1 + a2, b1 + b2, d))
    }

    /// Exact subtraction; errors when the fields differ.
    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ExactError> {
        let d = self.join_field(other)?;
        let (a1, b1) = self.parts();
        let (a2, b2) = other.parts();
        Ok(Scalar::assemble(a1 - a2, b1 - b2, d))
    }

    /// Exact multiplication; errors when the fields differ.
    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ExactError> {
        let d = self.join_field(other)?;
        let (a1, b1) = self.parts();
        let (a2, b2) = other.parts();
        let rad = d.map(|d| BigRational::from(BigInt::from(d)));
        let a = match &rad {
            Some(r) => &a1 * &a2 + &b1 * &b2 * r,
            None => &a1 * &a2,
        };
        let b = &a1 * &b2 + &b1 * &a2;
        Ok(Scalar::assemble(a, b, d))
    }

    /// Exact division; errors on zero divisors or mixed fields.
    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ExactError> {
        self.try_mul(&other.recip()?)
    }

    /// Multiplicative inverse via conjugation: `1/(a+b*sqrt(d)) =
    /// (a-b*sqrt(d))/(a^2-d*b^2)`.
    pub fn recip(&self) -> Result<Scalar, ExactError> {
        match self {
            Scalar::Rat(r) => {
                if r.is_zero() {
                    Err(ExactError::DivisionByZero)
                } else {
                    Ok(Scalar::Rat(r.recip()))
                }
            }
            Scalar::Quad { a, b, d } => {
                let rad = BigRational::from(BigInt::from(*d));
                let norm = a * a - &rad * b * b;
                // The norm of a nonzero element of a real quadratic field is
                // nonzero because sqrt(d) is irrational.
                Ok(Scalar::assemble(a / &norm, -(b / &norm), Some(*d)))
            }
        }
    }

    /// Negation (field-preserving, never fails).
    pub fn neg(&self) -> Scalar {
        let (a, b) = self.parts();
        Scalar::assemble(-a, -b, self.field())
    }

    /// Multiplies by a rational factor.
    pub fn scale(&self, factor: &BigRational) -> Scalar {
        let (a, b) = self.parts();
        Scalar::assemble(a * factor, b * factor, self.field())
    }

    /// The exact sign of the value: -1, 0, or +1.
    pub fn sign(&self) -> i8 {
        match self {
            Scalar::Rat(r) => {
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Scalar::Quad { a, b, d } => {
                // b != 0 here, so the value is irrational and never 0.
                let sa = rational_sign(a);
                let sb = rational_sign(b);
                if sa == sb {
                    return sa;
                }
                if sa == 0 {
                    return sb;
                }
                if sb == 0 {
                    return sa;
                }
                // Signs differ: compare |a| with |b|*sqrt(d) via squares.
                let rad = BigRational::from(BigInt::from(*d));
                let cmp = (a * a).cmp(&(&rad * b * b));
                match cmp {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    // a^2 = d*b^2 is impossible for square-free d >= 2.
                    Ordering::Equal => unreachable!("sqrt({d}) cannot be rational"),
                }
            }
        }
    }

    /// Exact comparison within a common field.
    pub fn try_cmp(&self, other: &Scalar) -> Result<Ordering, ExactError> {
        let diff = self.try_sub(other)?;
        Ok(match diff.sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        })
    }

    /// An exact rational bracket `[lo, hi]` with `hi - lo <= width` containing
    /// the value. Rationals bracket themselves with zero width.
    pub fn bracket(&self, width: &BigRational) -> (BigRational, BigRational) {
        match self {
            Scalar::Rat(r) => (r.clone(), r.clone()),
            Scalar::Quad { a, b, d } => {
                // Bracket sqrt(d) to |b|-adjusted precision, then combine.
                let babs = b.abs();
                let target = width / &babs;
                let (slo, shi) = sqrt_bracket(*d, &target);
                let (x, y) = (a + b * &slo, a + b * &shi);
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            }
        }
    }
}

fn rational_sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// A rational bracket `[lo, hi]` around `sqrt(d)` with `hi - lo <= width`.
pub(crate) fn sqrt_bracket(d: u64, width: &BigRational) -> (BigRational, BigRational) {
    // Dyadic refinement: floor(sqrt(d * 4^k)) / 2^k under-approximates
    // sqrt(d) with error < 1/2^k.
    let mut k: u32 = 4;
    loop {
        let scaled = BigUint::from(d) << (2 * k);
        let root = scaled.sqrt();
        let den = BigInt::from(1u8) << k;
        let lo = BigRational::new(BigInt::from(root.clone()), den.clone());
        let hi = BigRational::new(BigInt::from(root + BigUint::one()), den);
        if &hi - &lo <= *width {
            return (lo, hi);
        }
        k += 8;
    }
}

/// True when `n` has no repeated prime factor.
pub(crate) fn is_squarefree(n: u64) -> bool {
    let mut m = n;
    let mut p: u64 = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Splits `n = s^2 * f` with `f` square-free; returns `(s, f)`.
pub(crate) fn squarefree_part(n: &BigUint) -> (BigUint, BigUint) {
    let mut s = BigUint::one();
    let mut f = BigUint::one();
    let mut m = n.clone();
    let mut p = BigUint::from(2u8);
    while &p * &p <= m {
        let mut count = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            count += 1;
        }
        if count > 0 {
            for _ in 0..count / 2 {
                s *= &p;
            }
            if count % 2 == 1 {
                f *= &p;
            }
        }
        p += BigUint::one();
    }
    // Remaining m is 1 or a prime appearing once.
    f *= m;
    (s, f)
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Rat(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl PartialOrd for Scalar {
    /// Exact comparison; `None` when the values live in different quadratic
    /// fields (no composite towers).
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{}", format_rational(r)),
            Scalar::Quad { a, b, d } => {
                let mut out = String::new();
                if !a.is_zero() {
                    out.push_str(&format_rational(a));
                }
                if b.is_positive() && !a.is_zero() {
                    out.push('+');
                }
                if b.is_negative() {
                    out.push('-');
                }
                let babs = b.abs();
                if !babs.is_one() {
                    out.push_str(&format_rational(&babs));
                    out.push('*');
                }
                out.push_str(&format!("sqrt({d})"));
                write!(f, "{out}")
            }
        }
    }
}

pub(crate) fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses a scalar literal.
///
/// Accepted forms mirror [`Scalar`]'s `Display` output: `p/q`, `p`,
/// `sqrt(d)`, and signed sums such as `3/2-1/14*sqrt(21)` or
/// `-2+sqrt(5)`. Whitespace is ignored.
pub fn parse_scalar(input: &str) -> Result<Scalar, ExactError> {
    let text: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if text.is_empty() {
        return Err(ExactError::Parse("empty scalar literal".into()));
    }
    let mut total = Scalar::zero();
    let mut rest = text.as_str();
    let mut leading = true;
    while !rest.is_empty() {
        let (sign, after_sign) = match rest.as_bytes()[0] {
            b'+' => (1i8, &rest[1..]),
            b'-' => (-1i8, &rest[1..]),
            _ if leading => (1i8, rest),
            _ => {
                return Err(ExactError::Parse(format!(
                    "expected '+' or '-' before \"{rest}\""
                )))
            }
        };
        leading = false;
        let (term, remainder) = parse_term(after_sign)?;
        let term = if sign < 0 { term.neg() } else { term };
        total = total.try_add(&term)?;
        rest = remainder;
    }
    Ok(total)
}

/// Parses one unsigned term: `p/q`, `p`, `sqrt(d)`, `p/q*sqrt(d)`.
fn parse_term(input: &str) -> Result<(Scalar, &str), ExactError> {
    if let Some(after) = input.strip_prefix("sqrt(") {
        let close = after
            .find(')')
            .ok_or_else(|| ExactError::Parse(format!("unclosed sqrt in \"{input}\"")))?;
        let d: u64 = after[..close]
            .parse()
            .map_err(|_| ExactError::Parse(format!("bad radicand in \"{input}\"")))?;
        return Ok((Scalar::sqrt(d)?, &after[close + 1..]));
    }
    let (coeff, rest) = parse_unsigned_rational(input)?;
    if let Some(after_star) = rest.strip_prefix('*') {
        if let Some(after) = after_star.strip_prefix("sqrt(") {
            let close = after
                .find(')')
                .ok_or_else(|| ExactError::Parse(format!("unclosed sqrt in \"{input}\"")))?;
            let d: u64 = after[..close]
                .parse()
                .map_err(|_| ExactError::Parse(format!("bad radicand in \"{input}\"")))?;
            let root = Scalar::sqrt(d)?;
            return Ok((root.scale(&coeff), &after[close + 1..]));
        }
        return Err(ExactError::Parse(format!(
            "expected sqrt(...) after '*' in \"{input}\""
        )));
    }
    Ok((Scalar::Rat(coeff), rest))
}

/// Parses an unsigned rational prefix `p` or `p/q`, returning the remainder.
fn parse_unsigned_rational(input: &str) -> Result<(BigRational, &str), ExactError> {
    let digits_end = input
        .find(|c: char| !c.is_ascii_digit())
        .unwrap_or(input.len());
    if digits_end == 0 {
        return Err(ExactError::Parse(format!(
            "expected a number at \"{input}\""
        )));
    }
    let numer: BigInt = input[..digits_end].parse().expect("digit run parses");
    let rest = &input[digits_end..];
    if let Some(after_slash) = rest.strip_prefix('/') {
        let den_end = after_slash
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(after_slash.len());
        if den_end == 0 {
            return Err(ExactError::Parse(format!(
                "expected a denominator at \"{rest}\""
            )));
        }
        let denom: BigInt = after_slash[..den_end].parse().expect("digit run parses");
        if denom.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        return Ok((BigRational::new(numer, denom), &after_slash[den_end..]));
    }
    Ok((BigRational::from(numer), rest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn quad_with_zero_irrational_part_normalizes() {
        let s = Scalar::quad(rat(3, 2), rat(0, 1), 21).unwrap();
        assert_eq!(s, Scalar::Rat(rat(3, 2)));
        assert!(s.is_rational());
    }

    #[test]
    fn radicand_must_be_squarefree() {
        assert!(Scalar::quad(rat(0, 1), rat(1, 1), 12).is_err());
        assert!(Scalar::quad(rat(0, 1), rat(1, 1), 1).is_err());
        assert!(Scalar::quad(rat(0, 1), rat(1, 1), 21).is_ok());
    }

    #[test]
    fn conjugate_product_is_the_norm() {
        // (a + b*sqrt(d)) * (a - b*sqrt(d)) = a^2 - d*b^2, exactly.
        let x = Scalar::quad(rat(3, 2), rat(-1, 14), 21).unwrap();
        let conj = Scalar::quad(rat(3, 2), rat(1, 14), 21).unwrap();
        let prod = x.try_mul(&conj).unwrap();
        // 9/4 - 21/196 = 441/196 - 21/196 = 420/196 = 15/7.
        assert_eq!(prod, Scalar::Rat(rat(15, 7)));
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let x = Scalar::sqrt(3).unwrap();
        let y = Scalar::sqrt(21).unwrap();
        assert!(matches!(
            x.try_add(&y),
            Err(ExactError::MixedFields(3, 21))
        ));
    }

    #[test]
    fn sign_handles_opposed_parts() {
        // 3/2 - sqrt(21)/14 > 0 because (3/2)^2 = 9/4 > 21/196.
        let x = Scalar::quad(rat(3, 2), rat(-1, 14), 21).unwrap();
        assert_eq!(x.sign(), 1);
        // 1 - sqrt(21)/4 < 0 because 1 < 21/16.
        let y = Scalar::quad(rat(1, 1), rat(-1, 4), 21).unwrap();
        assert_eq!(y.sign(), -1);
    }

    #[test]
    fn ordering_against_rationals() {
        // sqrt(21) is between 4 and 5.
        let s = Scalar::sqrt(21).unwrap();
        assert!(s > Scalar::from_int(4));
        assert!(s < Scalar::from_int(5));
    }

    #[test]
    fn bracket_contains_the_value() {
        let s = Scalar::quad(rat(3, 2), rat(-1, 14), 21).unwrap();
        let (lo, hi) = s.bracket(&rat(1, 1_000_000));
        assert!(&hi - &lo <= rat(1, 1_000_000));
        assert_eq!(Scalar::Rat(lo).try_cmp(&s).unwrap(), Ordering::Less);
        assert_eq!(Scalar::Rat(hi).try_cmp(&s).unwrap(), Ordering::Greater);
    }

    #[test]
    fn parse_round_trips_display() {
        for text in [
            "3/2-1/14*sqrt(21)",
            "-2+sqrt(5)",
            "sqrt(21)",
            "-7/9",
            "5",
            "0",
        ] {
            let value = parse_scalar(text).unwrap();
            assert_eq!(value.to_string(), text);
        }
        assert_eq!(parse_scalar(" 1/2 + 1/2 ").unwrap(), Scalar::Rat(rat(1, 1)));
        assert!(parse_scalar("sqrt(12)").is_err());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("").is_err());
    }

    #[test]
    fn squarefree_part_splits_squares() {
        let (s, f) = squarefree_part(&BigUint::from(12u32));
        assert_eq!(s, BigUint::from(2u32));
        assert_eq!(f, BigUint::from(3u32));
        let (s, f) = squarefree_part(&BigUint::from(49u32));
        assert_eq!(s, BigUint::from(7u32));
        assert_eq!(f, BigUint::from(1u32));
    }
}
