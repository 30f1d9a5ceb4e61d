//! Verified numeric integration: exact rational enclosures.
//!
//! Polynomial integrands are integrated in closed form. Rational-function
//! integrands go through an adaptive midpoint rule whose error term is
//! bounded *exactly*: the second derivative of `n/d` is `N2/d^3` with
//! `N2 = n''d^2 - 2n'd'd + 2nd'^2 - ndd''`, and both `N2` and `d` are ranged
//! over each subinterval by rational interval arithmetic. Quadratic
//! irrational endpoints are handled by integrating an inner rational
//! interval and bounding the two leftover slivers by `width * max |f|`.
//! The result is a pair of exact rationals guaranteed to contain the true
//! integral, with width at most the requested tolerance.

use super::interval::QInterval;
use super::poly::{integrate_poly, Poly, Var};
use super::ratfn::RationalFn;
use super::roots::roots_in_interval;
use super::scalar::Scalar;
use super::ExactError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Fixed-point scale (bits) for the interior accumulator. Rounding the
/// running sums to multiples of `2^-SCALE_BITS` keeps every addition an
/// integer operation; the rounding slack is absorbed into the enclosure.
const SCALE_BITS: u32 = 96;

/// Hard cap on processed subintervals before giving up.
const MAX_INTERVALS: usize = 500_000;

/// An exact rational bracket `[lo, hi]` of width at most `width` around a
/// scalar (rationals bracket themselves exactly).
pub fn rational_bracket(x: &Scalar, width: &BigRational) -> (BigRational, BigRational) {
    x.bracket(width)
}

/// Encloses the definite integral of a univariate rational function between
/// exact (possibly quadratic irrational) bounds.
///
/// Returns `(lo, hi)` with `lo <= integral <= hi` and `hi - lo <= eps`.
pub fn integrate_numeric(
    f: &RationalFn,
    lo: &Scalar,
    hi: &Scalar,
    eps: &BigRational,
) -> Result<(BigRational, BigRational), ExactError> {
    if !eps.is_positive() {
        return Err(ExactError::BadInterval(format!(
            "tolerance must be positive, got {eps}"
        )));
    }
    match lo.try_cmp(hi)? {
        Ordering::Greater => {
            return Err(ExactError::BadInterval(format!("[{lo}, {hi}]")));
        }
        Ordering::Equal => return Ok((BigRational::zero(), BigRational::zero())),
        Ordering::Less => {}
    }
    // Polynomial integrands are exact; only the bracketing of an irrational
    // value is approximate.
    if let Some(p) = f.as_poly() {
        let value = integrate_poly(&p, lo, hi)?;
        return Ok(value.bracket(eps));
    }
    let var = integrand_var(f)?;
    let num = f.num().to_univariate_rational(var)?;
    let den = f.den().to_univariate_rational(var)?;

    // Budget layout: the enclosure half-width splits into interior rule
    // error (1/2), two sliver bounds (1/8 each), and fixed-point slack.
    let half = eps / BigRational::from_integer(2.into());
    let interior_budget = &half / BigRational::from_integer(2.into());
    let sliver_budget = &half / BigRational::from_integer(8.into());

    // Outer rational hull of the true domain, for the pole check.
    let bracket_width = BigRational::new(1.into(), 64.into()).min(half.clone());
    let (outer_lo, _) = lo.bracket(&bracket_width);
    let (_, outer_hi) = hi.bracket(&bracket_width);
    let pole_check = roots_in_interval(
        f.den(),
        &Scalar::Rat(outer_lo.clone()),
        &Scalar::Rat(outer_hi.clone()),
    )?;
    if !pole_check.is_empty() {
        return Err(ExactError::DenominatorVanishes(format!(
            "{} has a root in [{outer_lo}, {outer_hi}]",
            f.den()
        )));
    }

    // Sliver bounds for irrational endpoints: width * max |f| over the hull
    // of each sliver, shrinking the bracket until the bound fits its budget.
    let (lo_in, left_err) = shrink_sliver(lo, &num, &den, &sliver_budget, false)?;
    let (hi_in, right_err) = shrink_sliver(hi, &num, &den, &sliver_budget, true)?;
    let sliver_error = left_err + right_err;
    if lo_in > hi_in {
        return Err(ExactError::NumericFailure(format!(
            "domain [{lo}, {hi}] is too narrow for the endpoint brackets"
        )));
    }

    // N2 = n''d^2 - 2n'd'd + 2nd'^2 - ndd'': numerator of f'' over d^3.
    let n2 = second_derivative_numerator(f, var)?;
    let n2coef = n2.to_univariate_rational(var)?;

    // Adaptive bisection with a proportional error budget: a subinterval of
    // length h may contribute at most interior_budget * h / H.
    let total_len = &hi_in - &lo_in;
    let mut acc_lo = BigInt::zero();
    let mut acc_hi = BigInt::zero();
    let mut stack = vec![(lo_in.clone(), hi_in.clone())];
    let mut processed = 0usize;
    while let Some((a, b)) = stack.pop() {
        processed += 1;
        if processed > MAX_INTERVALS {
            return Err(ExactError::NumericFailure(format!(
                "more than {MAX_INTERVALS} subintervals at tolerance {eps}"
            )));
        }
        let h = &b - &a;
        if h.is_zero() {
            continue;
        }
        let domain = QInterval::new(a.clone(), b.clone());
        let dmin = range_uni(&den, &domain).abs_min();
        let share = if total_len.is_zero() {
            interior_budget.clone()
        } else {
            &interior_budget * &h / &total_len
        };
        let err = if dmin.is_zero() {
            None
        } else {
            let n2max = range_uni(&n2coef, &domain).abs_max();
            Some(&h * &h * &h * n2max / (BigRational::from_integer(24.into()) * &dmin * &dmin * &dmin))
        };
        let m = (&a + &b) / BigRational::from_integer(2.into());
        match err {
            Some(e) if e <= share => {
                let value = &h * eval_uni(&num, &m) / eval_uni(&den, &m);
                let (vlo, _) = fixed_point(&(&value - &e));
                let (_, vhi) = fixed_point(&(&value + &e));
                acc_lo += vlo;
                acc_hi += vhi;
            }
            _ => {
                stack.push((a, m.clone()));
                stack.push((m, b));
            }
        }
    }
    let scale = BigInt::one() << SCALE_BITS;
    let interior_lo = BigRational::new(acc_lo, scale.clone());
    let interior_hi = BigRational::new(acc_hi, scale);
    let out_lo = interior_lo - &sliver_error;
    let out_hi = interior_hi + &sliver_error;
    if &out_hi - &out_lo > *eps {
        return Err(ExactError::NumericFailure(format!(
            "enclosure width {} exceeds tolerance {eps}",
            &out_hi - &out_lo
        )));
    }
    Ok((out_lo, out_hi))
}

/// The single variable of the integrand.
fn integrand_var(f: &RationalFn) -> Result<Var, ExactError> {
    let mut vars = f.num().used_vars();
    vars.extend(f.den().used_vars());
    vars.dedup();
    match vars.as_slice() {
        [] => Ok(Var::U),
        [v] => Ok(*v),
        _ => Err(ExactError::WrongVariables(format!(
            "numeric integration needs a univariate integrand, found {f}"
        ))),
    }
}

/// For an irrational endpoint, picks an inner rational endpoint so close
/// that the skipped sliver contributes at most `budget`; returns the inner
/// endpoint and an exact bound on the sliver contribution. Rational
/// endpoints pass through unchanged with a zero bound.
fn shrink_sliver(
    endpoint: &Scalar,
    num: &[BigRational],
    den: &[BigRational],
    budget: &BigRational,
    upper: bool,
) -> Result<(BigRational, BigRational), ExactError> {
    if let Scalar::Rat(r) = endpoint {
        return Ok((r.clone(), BigRational::zero()));
    }
    let mut width = budget.clone().min(BigRational::new(1.into(), 16.into()));
    for _ in 0..64 {
        let (blo, bhi) = endpoint.bracket(&width);
        let hull = QInterval::new(blo.clone(), bhi.clone());
        let dmin = range_uni(den, &hull).abs_min();
        if !dmin.is_zero() {
            let fmax = range_uni(num, &hull).abs_max() / dmin;
            let bound = (&bhi - &blo) * fmax;
            if bound <= *budget {
                // The inner endpoint must lie inside the true domain: for an
                // upper endpoint step down to the bracket floor, for a lower
                // endpoint step up to the bracket ceiling.
                let inner = if upper { blo } else { bhi };
                return Ok((inner, bound));
            }
        }
        width /= BigRational::from_integer(4.into());
    }
    Err(ExactError::NumericFailure(format!(
        "cannot bound the integrand near {endpoint}"
    )))
}

/// `N2` such that `(n/d)'' = N2 / d^3`.
fn second_derivative_numerator(f: &RationalFn, var: Var) -> Result<Poly, ExactError> {
    let n = f.num();
    let d = f.den();
    let n1 = n.derivative(var);
    let n2 = n1.derivative(var);
    let d1 = d.derivative(var);
    let d2 = d1.derivative(var);
    let term1 = n2.checked_mul(&d.checked_mul(d)?)?;
    let term2 = n1
        .checked_mul(&d1)?
        .checked_mul(d)?
        .scale(&Scalar::from_int(2));
    let term3 = n
        .checked_mul(&d1.checked_mul(&d1)?)?
        .scale(&Scalar::from_int(2));
    let term4 = n.checked_mul(d)?.checked_mul(&d2)?;
    term1.checked_sub(&term2)?.checked_add(&term3)?.checked_sub(&term4)
}

/// Horner evaluation of an ascending coefficient vector.
fn eval_uni(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Interval Horner range of an ascending coefficient vector.
fn range_uni(coeffs: &[BigRational], domain: &QInterval) -> QInterval {
    let mut acc = QInterval::point(BigRational::zero());
    for c in coeffs.iter().rev() {
        acc = acc.mul(domain).add(&QInterval::point(c.clone()));
    }
    acc
}

/// Floor/ceil of `x * 2^SCALE_BITS` as integers.
fn fixed_point(x: &BigRational) -> (BigInt, BigInt) {
    let scaled_num = x.numer() << SCALE_BITS;
    let floor = scaled_num.div_floor(x.denom());
    let exact = (&floor * x.denom()) == scaled_num;
    let ceil = if exact { floor.clone() } else { &floor + 1 };
    (floor, ceil)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_poly, rat};

    fn ratfn(num: &str, den: &str) -> RationalFn {
        RationalFn::new(parse_poly(num).unwrap(), parse_poly(den).unwrap()).unwrap()
    }

    #[test]
    fn log_two_enclosure() {
        // int_0^1 1/(1+u) du = ln 2 = 0.6931471805599453...
        let f = ratfn("1", "1+u");
        let eps = rat(1, 1_000_000);
        let (lo, hi) = integrate_numeric(
            &f,
            &Scalar::from_int(0),
            &Scalar::from_int(1),
            &eps,
        )
        .unwrap();
        assert!(&hi - &lo <= eps);
        let ln2_lo = rat(693_147_180, 1_000_000_000);
        let ln2_hi = rat(693_147_181, 1_000_000_000);
        assert!(lo <= ln2_hi && ln2_lo <= hi);
    }

    #[test]
    fn polynomial_path_is_exact() {
        let f = RationalFn::from_poly(parse_poly("54-99*u+60*u^2-12*u^3").unwrap());
        let eps = rat(1, 1_000_000_000);
        let (lo, hi) = integrate_numeric(
            &f,
            &Scalar::from_int(1),
            &Scalar::Rat(rat(3, 2)),
            &eps,
        )
        .unwrap();
        assert!(lo <= rat(7, 16) && rat(7, 16) <= hi);
        assert!(&hi - &lo <= eps);
    }

    #[test]
    fn poles_in_the_domain_are_rejected() {
        let f = ratfn("1", "1-u");
        assert!(matches!(
            integrate_numeric(
                &f,
                &Scalar::from_int(0),
                &Scalar::from_int(2),
                &rat(1, 1000)
            ),
            Err(ExactError::DenominatorVanishes(_))
        ));
    }

    #[test]
    fn irrational_upper_bound_polynomial() {
        // int_1^{sqrt(2)} 2u du = 2 - 1 = 1, exactly, via the closed form.
        let f = RationalFn::from_poly(parse_poly("2*u").unwrap());
        let (lo, hi) = integrate_numeric(
            &f,
            &Scalar::from_int(1),
            &Scalar::sqrt(2).unwrap(),
            &rat(1, 1_000_000),
        )
        .unwrap();
        assert!(lo <= rat(1, 1) && rat(1, 1) <= hi);
    }

    #[test]
    fn irrational_upper_bound_rational_integrand() {
        // int_1^{sqrt(2)} 1/u du = ln(2)/2 = 0.34657359...
        let f = ratfn("1", "u");
        let eps = rat(1, 100_000);
        let (lo, hi) = integrate_numeric(
            &f,
            &Scalar::from_int(1),
            &Scalar::sqrt(2).unwrap(),
            &eps,
        )
        .unwrap();
        assert!(&hi - &lo <= eps);
        let half_ln2_lo = rat(346_573_590, 1_000_000_000);
        let half_ln2_hi = rat(346_573_591, 1_000_000_000);
        assert!(lo <= half_ln2_hi && half_ln2_lo <= hi);
    }

    #[test]
    fn tolerance_must_be_positive() {
        let f = ratfn("1", "1+u");
        assert!(integrate_numeric(
            &f,
            &Scalar::from_int(0),
            &Scalar::from_int(1),
            &rat(0, 1)
        )
        .is_err());
    }
}
