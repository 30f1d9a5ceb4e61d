//! Exact root isolation and sign certification for low-degree polynomials.
//!
//! Root isolation is deliberately limited to degree 2: every wall and
//! threshold polynomial the decomposition engine produces is linear or
//! quadratic, and refusing higher degrees turns a modelling error into a
//! loud failure instead of a silent numeric root hunt. Quadratic roots are
//! returned as exact [`Scalar`]s, introducing a quadratic field only when
//! the discriminant is not a perfect square.

use super::poly::{Poly, Var};
use super::scalar::{squarefree_part, Scalar};
use super::ExactError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Infers the unique variable of a polynomial (`U` for constants).
fn single_var(p: &Poly) -> Result<Var, ExactError> {
    match p.used_vars().as_slice() {
        [] => Ok(Var::U),
        [v] => Ok(*v),
        _ => Err(ExactError::WrongVariables(format!(
            "expected a univariate polynomial, found {p}"
        ))),
    }
}

fn check_interval(lo: &Scalar, hi: &Scalar) -> Result<(), ExactError> {
    if lo.try_cmp(hi)? == Ordering::Greater {
        return Err(ExactError::BadInterval(format!("[{lo}, {hi}]")));
    }
    Ok(())
}

/// All distinct real roots of a rational-coefficient polynomial of degree at
/// most 2 inside `[lo, hi]`, in increasing order.
///
/// Degree 3 and above is refused with [`ExactError::DegreeTooHigh`]; the
/// zero polynomial is refused with [`ExactError::ZeroPolynomial`].
pub fn roots_in_interval(p: &Poly, lo: &Scalar, hi: &Scalar) -> Result<Vec<Scalar>, ExactError> {
    check_interval(lo, hi)?;
    if p.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    let var = single_var(p)?;
    let mut coeffs = p.to_univariate_rational(var)?;
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    let roots = real_roots(&coeffs)?;
    let mut inside = Vec::new();
    for r in roots {
        if lo.try_cmp(&r)? != Ordering::Greater && r.try_cmp(hi)? != Ordering::Greater {
            inside.push(r);
        }
    }
    Ok(inside)
}

/// Distinct real roots of an ascending rational coefficient vector,
/// increasing, degree at most 2.
fn real_roots(coeffs: &[BigRational]) -> Result<Vec<Scalar>, ExactError> {
    match coeffs.len() {
        0 => Err(ExactError::ZeroPolynomial),
        1 => Ok(Vec::new()),
        2 => Ok(vec![Scalar::Rat(-&coeffs[0] / &coeffs[1])]),
        3 => {
            let (c0, c1, c2) = (&coeffs[0], &coeffs[1], &coeffs[2]);
            let disc = c1 * c1 - BigRational::from_integer(4.into()) * c2 * c0;
            match disc.cmp(&BigRational::zero()) {
                Ordering::Less => Ok(Vec::new()),
                Ordering::Equal => Ok(vec![Scalar::Rat(
                    -c1 / (BigRational::from_integer(2.into()) * c2),
                )]),
                Ordering::Greater => {
                    let sqrt = sqrt_rational(&disc);
                    let two_c2 = Scalar::Rat(BigRational::from_integer(2.into()) * c2);
                    let minus_c1 = Scalar::Rat(-c1.clone());
                    let r1 = minus_c1.try_sub(&sqrt)?.try_div(&two_c2)?;
                    let r2 = minus_c1.try_add(&sqrt)?.try_div(&two_c2)?;
                    let mut roots = vec![r1, r2];
                    if roots[0].try_cmp(&roots[1])? == Ordering::Greater {
                        roots.swap(0, 1);
                    }
                    Ok(roots)
                }
            }
        }
        n => Err(ExactError::DegreeTooHigh(n - 1)),
    }
}

/// The exact square root of a positive rational as a [`Scalar`]:
/// `sqrt(p/q) = sqrt(p*q)/q`, with the square part of `p*q` extracted by
/// trial division so the remaining radicand is square-free.
fn sqrt_rational(r: &BigRational) -> Scalar {
    debug_assert!(r.is_positive());
    let pq = (r.numer() * r.denom()).to_biguint().expect("positive");
    let (square, free) = squarefree_part(&pq);
    let coeff = BigRational::new(BigInt::from(square), r.denom().clone());
    if free.is_one() {
        return Scalar::Rat(coeff);
    }
    let d: u64 = (&free).try_into().expect("square-free radicand fits in u64");
    Scalar::quad(BigRational::zero(), coeff, d).expect("square-free by construction")
}

/// Certifies `p >= 0` on `[lo, hi]` for degree at most 3, by exact
/// evaluation at both endpoints and at every interior critical point.
pub fn nonneg_on_interval(p: &Poly, lo: &Scalar, hi: &Scalar) -> Result<bool, ExactError> {
    check_interval(lo, hi)?;
    if p.is_zero() {
        return Ok(true);
    }
    let var = single_var(p)?;
    if p.degree_in(var) > 3 {
        return Err(ExactError::CannotCertify(format!(
            "interval sign checks are limited to degree 3, got {p}"
        )));
    }
    for x in [lo, hi] {
        if p.eval1(var, x)?.sign() < 0 {
            return Ok(false);
        }
    }
    if p.degree_in(var) >= 2 {
        let deriv = p.derivative(var);
        for c in roots_in_interval(&deriv, lo, hi)? {
            if p.eval1(var, &c)?.sign() < 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Certifies `p >= 0` on the ray `[lo, +infinity)`.
///
/// Strategy: shift to the ray origin and accept when all shifted
/// coefficients are nonnegative; otherwise decide degree <= 2 exactly; for
/// degree 3 retry the shift at a few points further out, certifying the
/// finite gap with [`nonneg_on_interval`].
pub fn nonneg_on_ray(p: &Poly, lo: &Scalar) -> Result<bool, ExactError> {
    if p.is_zero() {
        return Ok(true);
    }
    let var = single_var(p)?;
    if shifted_coeffs_nonneg(p, var, lo)? {
        return Ok(true);
    }
    let deg = p.degree_in(var) as usize;
    match deg {
        0 => Ok(p.eval_constant()?.sign() >= 0),
        1 => {
            let coeffs = p.to_univariate(var)?;
            Ok(coeffs[1].sign() > 0 && p.eval1(var, lo)?.sign() >= 0)
        }
        2 => {
            let coeffs = p.to_univariate(var)?;
            if coeffs[2].sign() < 0 || p.eval1(var, lo)?.sign() < 0 {
                return Ok(false);
            }
            // Opens upward and is nonnegative at lo: it stays nonnegative
            // unless the vertex lies right of lo and dips below zero.
            let vertex = coeffs[1]
                .try_div(&coeffs[2].scale(&super::rat(-2, 1)))
                .expect("nonzero leading coefficient");
            if vertex.try_cmp(lo)? != Ordering::Greater {
                return Ok(true);
            }
            Ok(p.eval1(var, &vertex)?.sign() >= 0)
        }
        3 => {
            // Quick accept failed at lo: certify [lo, c] exactly and retry
            // the coefficient test at increasingly distant shifts c.
            let mut offset = super::rat_int(1);
            for _ in 0..6 {
                let c = Scalar::Rat(lo.to_rational("ray origin")? + &offset);
                if shifted_coeffs_nonneg(p, var, &c)? {
                    return nonneg_on_interval(p, lo, &c);
                }
                offset = offset * super::rat_int(2);
            }
            Err(ExactError::CannotCertify(format!(
                "could not certify {p} >= 0 on [{lo}, +inf)"
            )))
        }
        d => Err(ExactError::CannotCertify(format!(
            "ray sign checks are limited to degree 3, got degree {d}"
        ))),
    }
}

/// True when all coefficients of `p(x + shift)` are nonnegative, which
/// certifies `p >= 0` on `[shift, +infinity)`.
fn shifted_coeffs_nonneg(p: &Poly, var: Var, shift: &Scalar) -> Result<bool, ExactError> {
    let shifted_arg = Poly::var(var).checked_add(&Poly::constant(shift.clone()))?;
    let shifted = p.subst_poly(var, &shifted_arg)?;
    let all_nonneg = shifted.terms().all(|(_, c)| c.sign() >= 0);
    Ok(all_nonneg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_poly, rat};

    fn sc(n: i64, d: i64) -> Scalar {
        Scalar::Rat(rat(n, d))
    }

    #[test]
    fn quadratic_with_irrational_roots_outside_interval() {
        // Roots are (39 +- sqrt(3))/22, both above 3/2.
        let p = parse_poly("69-78*u+22*u^2").unwrap();
        let roots = roots_in_interval(&p, &sc(1, 1), &sc(3, 2)).unwrap();
        assert!(roots.is_empty());
        let all = roots_in_interval(&p, &sc(0, 1), &sc(10, 1)).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(
            all[0],
            Scalar::quad(rat(39, 22), rat(-1, 22), 3).unwrap()
        );
        // Each root substitutes back to zero.
        for r in &all {
            assert!(p.eval1(Var::U, r).unwrap().is_zero());
        }
    }

    #[test]
    fn double_roots_are_reported_once() {
        let p = parse_poly("u^2").unwrap();
        assert_eq!(
            roots_in_interval(&p, &sc(-1, 1), &sc(1, 1)).unwrap(),
            vec![Scalar::zero()]
        );
    }

    #[test]
    fn linear_root() {
        let p = parse_poly("3-2*u").unwrap();
        assert_eq!(
            roots_in_interval(&p, &sc(0, 1), &sc(2, 1)).unwrap(),
            vec![sc(3, 2)]
        );
    }

    #[test]
    fn cubics_are_refused() {
        let p = parse_poly("u^3-u").unwrap();
        assert!(matches!(
            roots_in_interval(&p, &sc(0, 1), &sc(1, 1)),
            Err(ExactError::DegreeTooHigh(3))
        ));
    }

    #[test]
    fn zero_polynomial_is_refused() {
        assert!(matches!(
            roots_in_interval(&Poly::zero(), &sc(0, 1), &sc(1, 1)),
            Err(ExactError::ZeroPolynomial)
        ));
    }

    #[test]
    fn interval_nonnegativity_uses_critical_points() {
        // u^2 - u + 1/4 = (u - 1/2)^2 >= 0.
        let p = parse_poly("1/4-u+u^2").unwrap();
        assert!(nonneg_on_interval(&p, &sc(0, 1), &sc(1, 1)).unwrap());
        // u^2 - u dips below zero between its endpoints values 0 and 0.
        let q = parse_poly("u^2-u").unwrap();
        assert!(!nonneg_on_interval(&q, &sc(0, 1), &sc(1, 1)).unwrap());
        // Degree-3 witness: 3(2-u)(3-2u)^2 >= 0 on [1, 3/2].
        let c = parse_poly("54-99*u+60*u^2-12*u^3").unwrap();
        assert!(nonneg_on_interval(&c, &sc(1, 1), &sc(3, 2)).unwrap());
    }

    #[test]
    fn ray_nonnegativity() {
        // 3 + 3t - 3t^2 + t^3 = (t-1)^3 + 4 stays positive on [0, inf).
        let p = parse_poly("3+3*t-3*t^2+t^3").unwrap();
        assert!(nonneg_on_ray(&p, &Scalar::zero()).unwrap());
        // t^2 - 3t + 2 = (t-1)(t-2) is negative between its roots.
        let q = parse_poly("2-3*t+t^2").unwrap();
        assert!(!nonneg_on_ray(&q, &Scalar::zero()).unwrap());
        assert!(nonneg_on_ray(&q, &sc(2, 1)).unwrap());
        // A linear function with negative slope fails on any ray.
        let l = parse_poly("1-t").unwrap();
        assert!(!nonneg_on_ray(&l, &Scalar::zero()).unwrap());
    }
}
