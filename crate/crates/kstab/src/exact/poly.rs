//! Sparse exact polynomials in the variables `t`, `u`, `v`.
//!
//! `t` is a family parameter, `u` the primary sweep variable, and `v` the
//! fiber variable of an iterated decomposition. A single polynomial never
//! mixes `t` with `v`: the engine sweeps at most two parameters at a time,
//! and this invariant is enforced on every construction path.
//!
//! Coefficients are [`Scalar`]s, so a polynomial may carry quadratic
//! irrationals, though in practice irrational values enter through
//! integration bounds rather than coefficients.

use super::scalar::{format_rational, parse_scalar, Scalar};
use super::ExactError;
use num_rational::BigRational;
use num_traits::{One, Signed};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// A polynomial variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// Family parameter.
    T,
    /// Primary sweep parameter.
    U,
    /// Fiber parameter of an iterated decomposition.
    V,
}

impl Var {
    /// Position of the variable inside an exponent triple.
    pub fn index(self) -> usize {
        match self {
            Var::T => 0,
            Var::U => 1,
            Var::V => 2,
        }
    }

    /// The display symbol.
    pub fn symbol(self) -> char {
        match self {
            Var::T => 't',
            Var::U => 'u',
            Var::V => 'v',
        }
    }

    /// Parses a variable symbol.
    pub fn from_symbol(c: char) -> Option<Var> {
        match c {
            't' => Some(Var::T),
            'u' => Some(Var::U),
            'v' => Some(Var::V),
            _ => None,
        }
    }
}

/// A sparse polynomial over exact scalars, keyed by exponent triples
/// `[t, u, v]`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<[u8; 3], Scalar>,
}

impl Poly {
    /// The zero polynomial.
    pub fn zero() -> Poly {
        Poly::default()
    }

    /// The constant polynomial 1.
    pub fn one() -> Poly {
        Poly::constant(Scalar::one())
    }

    /// A constant polynomial.
    pub fn constant(value: Scalar) -> Poly {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert([0, 0, 0], value);
        }
        Poly { terms }
    }

    /// A constant polynomial from an integer.
    pub fn from_int(n: i64) -> Poly {
        Poly::constant(Scalar::from_int(n))
    }

    /// A constant polynomial from a rational.
    pub fn from_rat(r: BigRational) -> Poly {
        Poly::constant(Scalar::Rat(r))
    }

    /// The polynomial consisting of a single variable.
    pub fn var(v: Var) -> Poly {
        Poly::monomial(Scalar::one(), single_exp(v, 1))
    }

    /// A single term `coeff * t^e0 * u^e1 * v^e2`.
    pub fn monomial(coeff: Scalar, exps: [u8; 3]) -> Poly {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        normalized(terms)
    }

    /// Iterates over `(exponents, coefficient)` pairs in key order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u8; 3], &Scalar)> {
        self.terms.iter()
    }

    /// The coefficient of a monomial (zero when absent).
    pub fn coeff(&self, exps: [u8; 3]) -> Scalar {
        self.terms.get(&exps).cloned().unwrap_or_else(Scalar::zero)
    }

    /// True when the polynomial is identically zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no variable appears.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|k| k == &[0, 0, 0])
    }

    /// The constant value, or an error naming the variables still present.
    pub fn eval_constant(&self) -> Result<Scalar, ExactError> {
        if self.is_constant() {
            Ok(self.coeff([0, 0, 0]))
        } else {
            Err(ExactError::WrongVariables(format!(
                "expected a constant, found {self}"
            )))
        }
    }

    /// The variables that actually appear.
    pub fn used_vars(&self) -> Vec<Var> {
        let mut used = [false; 3];
        for exps in self.terms.keys() {
            for (i, e) in exps.iter().enumerate() {
                if *e > 0 {
                    used[i] = true;
                }
            }
        }
        [Var::T, Var::U, Var::V]
            .into_iter()
            .filter(|v| used[v.index()])
            .collect()
    }

    /// The degree in one variable.
    pub fn degree_in(&self, var: Var) -> u8 {
        self.terms
            .keys()
            .map(|exps| exps[var.index()])
            .max()
            .unwrap_or(0)
    }

    /// The total degree (0 for the zero polynomial).
    pub fn total_degree(&self) -> u8 {
        self.terms
            .keys()
            .map(|e| e[0] + e[1] + e[2])
            .max()
            .unwrap_or(0)
    }

    /// Exact addition; errors when coefficient fields differ.
    pub fn checked_add(&self, other: &Poly) -> Result<Poly, ExactError> {
        let mut terms = self.terms.clone();
        for (exps, coeff) in &other.terms {
            let entry = terms.entry(*exps).or_insert_with(Scalar::zero);
            *entry = entry.try_add(coeff)?;
        }
        Ok(normalized(terms))
    }

    /// Exact subtraction; errors when coefficient fields differ.
    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, ExactError> {
        self.checked_add(&-other)
    }

    /// Exact multiplication; errors when coefficient fields differ.
    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, ExactError> {
        let mut terms: BTreeMap<[u8; 3], Scalar> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exps = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                let prod = c1.try_mul(c2)?;
                let entry = terms.entry(exps).or_insert_with(Scalar::zero);
                *entry = entry.try_add(&prod)?;
            }
        }
        Ok(normalized(terms))
    }

    /// Multiplies every coefficient by a scalar.
    pub fn scale(&self, factor: &Scalar) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                (
                    *e,
                    c.try_mul(factor)
                        .expect("mixed quadratic fields in polynomial scaling"),
                )
            })
            .collect();
        normalized(terms)
    }

    /// Multiplies every coefficient by a rational.
    pub fn scale_rat(&self, factor: &BigRational) -> Poly {
        self.scale(&Scalar::Rat(factor.clone()))
    }

    /// Raises the polynomial to a small power.
    pub fn pow(&self, n: u8) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces `var` by another polynomial.
    pub fn subst_poly(&self, var: Var, replacement: &Poly) -> Result<Poly, ExactError> {
        let by_exp = self.split_by(var);
        let max = by_exp.keys().max().copied().unwrap_or(0);
        let mut acc = Poly::zero();
        for k in (0..=max).rev() {
            acc = acc.checked_mul(replacement)?;
            if let Some(q) = by_exp.get(&k) {
                acc = acc.checked_add(q)?;
            }
        }
        Ok(acc)
    }

    /// Replaces `var` by a scalar value.
    pub fn substitute(&self, var: Var, value: &Scalar) -> Result<Poly, ExactError> {
        self.subst_poly(var, &Poly::constant(value.clone()))
    }

    /// Evaluates a polynomial in at most one variable at a point.
    pub fn eval1(&self, var: Var, value: &Scalar) -> Result<Scalar, ExactError> {
        self.substitute(var, value)?.eval_constant()
    }

    /// Writes the polynomial as a map `exponent of var -> coefficient
    /// polynomial` (the coefficients no longer involve `var`).
    fn split_by(&self, var: Var) -> BTreeMap<u8, Poly> {
        let mut out: BTreeMap<u8, BTreeMap<[u8; 3], Scalar>> = BTreeMap::new();
        for (exps, coeff) in &self.terms {
            let k = exps[var.index()];
            let mut rest = *exps;
            rest[var.index()] = 0;
            out.entry(k).or_default().insert(rest, coeff.clone());
        }
        out.into_iter().map(|(k, m)| (k, normalized(m))).collect()
    }

    /// Ascending coefficients in `var`; errors when other variables appear.
    pub fn to_univariate(&self, var: Var) -> Result<Vec<Scalar>, ExactError> {
        let mut coeffs = vec![Scalar::zero(); self.degree_in(var) as usize + 1];
        for (exps, coeff) in &self.terms {
            let mut rest = *exps;
            rest[var.index()] = 0;
            if rest != [0, 0, 0] {
                return Err(ExactError::WrongVariables(format!(
                    "expected a polynomial in {} only, found {self}",
                    var.symbol()
                )));
            }
            coeffs[exps[var.index()] as usize] = coeff.clone();
        }
        Ok(coeffs)
    }

    /// Ascending rational coefficients in `var`; errors when other variables
    /// or irrational coefficients appear.
    pub fn to_univariate_rational(&self, var: Var) -> Result<Vec<BigRational>, ExactError> {
        self.to_univariate(var)?
            .into_iter()
            .map(|c| c.to_rational("polynomial coefficient"))
            .collect()
    }

    /// The formal derivative in one variable.
    pub fn derivative(&self, var: Var) -> Poly {
        let i = var.index();
        let terms = self
            .terms
            .iter()
            .filter(|(exps, _)| exps[i] > 0)
            .map(|(exps, coeff)| {
                let mut e = *exps;
                e[i] -= 1;
                let factor = BigRational::from_integer(exps[i].into());
                (e, coeff.scale(&factor))
            })
            .collect();
        normalized(terms)
    }

    /// The antiderivative in one variable with zero constant term.
    pub fn antiderivative(&self, var: Var) -> Poly {
        let i = var.index();
        let terms = self
            .terms
            .iter()
            .map(|(exps, coeff)| {
                let mut e = *exps;
                assert!(e[i] < u8::MAX, "polynomial degree overflow");
                e[i] += 1;
                let factor = BigRational::new(1.into(), (exps[i] as i64 + 1).into());
                (e, coeff.scale(&factor))
            })
            .collect();
        normalized(terms)
    }

    /// Integrates in `var` between two polynomial bounds, producing a
    /// polynomial in the remaining variables.
    pub fn integrate_sym(&self, var: Var, lo: &Poly, hi: &Poly) -> Result<Poly, ExactError> {
        let anti = self.antiderivative(var);
        anti.subst_poly(var, hi)?.checked_sub(&anti.subst_poly(var, lo)?)
    }

    /// Exact division by a divisor that is univariate in `var`; errors when
    /// the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly, var: Var) -> Result<Poly, ExactError> {
        let dcoeffs = divisor.to_univariate(var)?;
        let dlead = dcoeffs
            .last()
            .cloned()
            .ok_or(ExactError::DivisionByZero)?;
        let ddeg = dcoeffs.len() - 1;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        loop {
            let rdeg = rem.degree_in(var) as usize;
            if rem.is_zero() || rdeg < ddeg {
                break;
            }
            // Leading coefficient of the remainder in `var` (a polynomial in
            // the remaining variables).
            let by_exp = rem.split_by(var);
            let lead = by_exp.get(&(rdeg as u8)).cloned().unwrap_or_default();
            let factor = lead
                .scale(&dlead.recip()?)
                .checked_mul(&Poly::monomial(Scalar::one(), single_exp(var, (rdeg - ddeg) as u8)))?;
            quot = quot.checked_add(&factor)?;
            rem = rem.checked_sub(&factor.checked_mul(divisor)?)?;
        }
        if rem.is_zero() {
            Ok(quot)
        } else {
            Err(ExactError::NotDivisible(format!(
                "{self} by {divisor}"
            )))
        }
    }
}

fn single_exp(v: Var, e: u8) -> [u8; 3] {
    let mut exps = [0, 0, 0];
    exps[v.index()] = e;
    exps
}

/// Drops zero coefficients and enforces the `t`/`v` separation invariant.
fn normalized(mut terms: BTreeMap<[u8; 3], Scalar>) -> Poly {
    terms.retain(|_, c| !c.is_zero());
    let uses_t = terms.keys().any(|e| e[0] > 0);
    let uses_v = terms.keys().any(|e| e[2] > 0);
    assert!(
        !(uses_t && uses_v),
        "a polynomial cannot mix the family parameter t with the fiber parameter v"
    );
    Poly { terms }
}

/// Definite integral of a polynomial in at most one variable.
///
/// The bounds may be quadratic irrationals; the result then lives in the
/// same field.
pub fn integrate_poly(p: &Poly, lo: &Scalar, hi: &Scalar) -> Result<Scalar, ExactError> {
    let vars = p.used_vars();
    let var = match vars.as_slice() {
        [] => Var::U,
        [v] => *v,
        _ => {
            return Err(ExactError::WrongVariables(format!(
                "definite integration needs a univariate polynomial, found {p}"
            )))
        }
    };
    let anti = p.antiderivative(var);
    anti.eval1(var, hi)?.try_sub(&anti.eval1(var, lo)?)
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let terms = self.terms.iter().map(|(e, c)| (*e, c.neg())).collect();
        Poly { terms }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs)
            .expect("mixed quadratic fields in polynomial addition")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs)
            .expect("mixed quadratic fields in polynomial subtraction")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs)
            .expect("mixed quadratic fields in polynomial multiplication")
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        *self = &*self + rhs;
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Stable reading order: by total degree, then u before v before t.
        let mut entries: Vec<(&[u8; 3], &Scalar)> = self.terms.iter().collect();
        entries.sort_by_key(|(e, _)| (e[0] + e[1] + e[2], e[2], e[0], e[1]));
        let mut out = String::new();
        for (i, (exps, coeff)) in entries.iter().enumerate() {
            let vars = format_vars(exps);
            push_term(&mut out, i == 0, coeff, &vars);
        }
        write!(f, "{out}")
    }
}

fn format_vars(exps: &[u8; 3]) -> String {
    let mut out = String::new();
    for var in [Var::T, Var::U, Var::V] {
        let e = exps[var.index()];
        if e == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('*');
        }
        out.push(var.symbol());
        if e > 1 {
            out.push_str(&format!("^{e}"));
        }
    }
    out
}

fn push_term(out: &mut String, first: bool, coeff: &Scalar, vars: &str) {
    match coeff {
        Scalar::Rat(r) => {
            let mag = r.abs();
            if r.is_negative() {
                out.push('-');
            } else if !first {
                out.push('+');
            }
            if vars.is_empty() {
                out.push_str(&format_rational(&mag));
            } else {
                if !mag.is_one() {
                    out.push_str(&format_rational(&mag));
                    out.push('*');
                }
                out.push_str(vars);
            }
        }
        Scalar::Quad { .. } => {
            if !first {
                out.push('+');
            }
            if vars.is_empty() {
                out.push_str(&format!("({coeff})"));
            } else {
                out.push_str(&format!("({coeff})*{vars}"));
            }
        }
    }
}

/// Parses a polynomial such as `10-4*u-4*v`, `3/2*u^2`, or
/// `(3/2-1/14*sqrt(21))*u`.
///
/// A term is a product of factors joined by `*`; factors are rational
/// literals, `sqrt(d)`, parenthesized scalar literals, or variables with an
/// optional `^k` exponent. Terms are joined by `+` and `-`.
pub fn parse_poly(input: &str) -> Result<Poly, ExactError> {
    let text: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if text.is_empty() {
        return Err(ExactError::Parse("empty polynomial literal".into()));
    }
    let mut result = Poly::zero();
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
        let (term, remainder) = parse_poly_term(after_sign)?;
        let term = if sign < 0 { -&term } else { term };
        result = result.checked_add(&term)?;
        rest = remainder;
    }
    Ok(result)
}

/// Parses one unsigned term (a `*`-joined product of factors).
fn parse_poly_term(input: &str) -> Result<(Poly, &str), ExactError> {
    let (mut product, mut rest) = parse_poly_factor(input)?;
    while let Some(after_star) = rest.strip_prefix('*') {
        let (factor, remainder) = parse_poly_factor(after_star)?;
        product = product.checked_mul(&factor)?;
        rest = remainder;
    }
    Ok((product, rest))
}

/// Parses one factor: a number, `sqrt(d)`, `(scalar)`, or `var[^k]`.
fn parse_poly_factor(input: &str) -> Result<(Poly, &str), ExactError> {
    let first = input
        .chars()
        .next()
        .ok_or_else(|| ExactError::Parse("expected a factor, found end of input".into()))?;
    if let Some(var) = Var::from_symbol(first) {
        let rest = &input[1..];
        if let Some(after_caret) = rest.strip_prefix('^') {
            let digits_end = after_caret
                .find(|c: char| !c.is_ascii_digit())
                .unwrap_or(after_caret.len());
            let exp: u8 = after_caret[..digits_end]
                .parse()
                .map_err(|_| ExactError::Parse(format!("bad exponent in \"{input}\"")))?;
            return Ok((
                Poly::monomial(Scalar::one(), single_exp(var, exp)),
                &after_caret[digits_end..],
            ));
        }
        return Ok((Poly::var(var), rest));
    }
    if first == '(' {
        let close = matching_paren(input)?;
        let inner = parse_scalar(&input[1..close])?;
        return Ok((Poly::constant(inner), &input[close + 1..]));
    }
    if input.starts_with("sqrt(") {
        let close = matching_paren(&input[4..])? + 4;
        let d: u64 = input[5..close]
            .parse()
            .map_err(|_| ExactError::Parse(format!("bad radicand in \"{input}\"")))?;
        return Ok((Poly::constant(Scalar::sqrt(d)?), &input[close + 1..]));
    }
    if first.is_ascii_digit() {
        let end = input
            .find(|c: char| !c.is_ascii_digit() && c != '/')
            .unwrap_or(input.len());
        let value = parse_scalar(&input[..end])?;
        return Ok((Poly::constant(value), &input[end..]));
    }
    Err(ExactError::Parse(format!(
        "unexpected character '{first}' in \"{input}\""
    )))
}

/// Index of the `)` matching the `(` at the given start.
fn matching_paren(input: &str) -> Result<usize, ExactError> {
    let mut depth = 0usize;
    for (i, c) in input.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Ok(i);
                }
            }
            _ => {}
        }
    }
    Err(ExactError::Parse(format!("unbalanced parentheses in \"{input}\"")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn sc(n: i64, d: i64) -> Scalar {
        Scalar::Rat(rat(n, d))
    }

    #[test]
    fn linear_volume_integrates_exactly() {
        // int_0^1 (18 - 15u) du = 18 - 15/2 = 21/2.
        let p = parse_poly("18-15*u").unwrap();
        let value = integrate_poly(&p, &sc(0, 1), &sc(1, 1)).unwrap();
        assert_eq!(value, sc(21, 2));
    }

    #[test]
    fn cubic_volume_integrates_exactly() {
        // int_1^{3/2} 3(2-u)(3-2u)^2 du = 7/16.
        let two_minus_u = parse_poly("2-u").unwrap();
        let three_minus_2u = parse_poly("3-2*u").unwrap();
        let p = (&two_minus_u * &three_minus_2u.pow(2)).scale(&sc(3, 1));
        let value = integrate_poly(&p, &sc(1, 1), &sc(3, 2)).unwrap();
        assert_eq!(value, sc(7, 16));
    }

    #[test]
    fn substitution_composes_walls() {
        // Substituting v = 3 - 2u into 10 - 4u - 4v gives 4u - 2.
        let p = parse_poly("10-4*u-4*v").unwrap();
        let wall = parse_poly("3-2*u").unwrap();
        let composed = p.subst_poly(Var::V, &wall).unwrap();
        assert_eq!(composed, parse_poly("4*u-2").unwrap());
    }

    #[test]
    fn symbolic_iterated_integration() {
        // int_0^{2-u} (8 - 4u - 4v) dv = (8-4u)(2-u) - 2(2-u)^2 = 2(2-u)^2.
        let p = parse_poly("8-4*u-4*v").unwrap();
        let inner = p
            .integrate_sym(Var::V, &Poly::zero(), &parse_poly("2-u").unwrap())
            .unwrap();
        let expected = parse_poly("2-u").unwrap().pow(2).scale(&sc(2, 1));
        assert_eq!(inner, expected);
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "10-4*u-4*v",
            "8+12*t+3*t^2",
            "4*u-u^2",
            "-u+v",
            "1/2*u^2*v",
            "0",
            "3/2",
        ] {
            let p = parse_poly(text).unwrap();
            assert_eq!(p.to_string(), text);
            assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
        }
    }

    #[test]
    fn quad_coefficients_display_in_parens() {
        let p = parse_poly("(3/2-1/14*sqrt(21))*u+1").unwrap();
        assert_eq!(p.to_string(), "1+(3/2-1/14*sqrt(21))*u");
        assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn univariate_extraction_checks_variables() {
        let p = parse_poly("10-4*u-4*v").unwrap();
        assert!(p.to_univariate(Var::U).is_err());
        let q = parse_poly("3-2*u").unwrap();
        assert_eq!(
            q.to_univariate_rational(Var::U).unwrap(),
            vec![rat(3, 1), rat(-2, 1)]
        );
    }

    #[test]
    #[should_panic(expected = "cannot mix")]
    fn family_and_fiber_parameters_do_not_mix() {
        let _ = &Poly::var(Var::T) * &Poly::var(Var::V);
    }

    #[test]
    fn exact_division_finds_polynomial_quotients() {
        let num = parse_poly("u^2*v-v").unwrap();
        let den = parse_poly("u-1").unwrap();
        let quot = num.div_exact(&den, Var::U).unwrap();
        assert_eq!(quot, parse_poly("u*v+v").unwrap());
        assert!(parse_poly("u^2+1").unwrap().div_exact(&den, Var::U).is_err());
    }

    #[test]
    fn irrational_bounds_stay_exact() {
        // int_0^{sqrt(2)} 2u du = 2.
        let p = parse_poly("2*u").unwrap();
        let root2 = Scalar::sqrt(2).unwrap();
        let value = integrate_poly(&p, &Scalar::zero(), &root2).unwrap();
        assert_eq!(value, sc(2, 1));
    }
}
