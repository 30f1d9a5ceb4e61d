//! Piecewise rational functions over exact breakpoints.
//!
//! Volume functions and invariant integrands are polynomial on each chamber
//! of a decomposition and change shape at exact algebraic walls. A
//! [`PiecewiseFn`] stores one [`RationalFn`] per interval; integration is
//! closed-form when every piece is a polynomial and refuses otherwise, so a
//! caller must opt in to the numeric enclosure path explicitly.

use super::poly::{integrate_poly, Var};
use super::ratfn::RationalFn;
use super::scalar::Scalar;
use super::ExactError;
use std::cmp::Ordering;
use std::fmt;

/// One piece: a rational function on the interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PieceFn {
    lo: Scalar,
    hi: Scalar,
    f: RationalFn,
}

impl PieceFn {
    /// Builds a piece, requiring `lo < hi` (comparable exactly).
    pub fn new(lo: Scalar, hi: Scalar, f: RationalFn) -> Result<PieceFn, ExactError> {
        match lo.try_cmp(&hi)? {
            Ordering::Less => Ok(PieceFn { lo, hi, f }),
            _ => Err(ExactError::BadInterval(format!(
                "piece needs lo < hi, got [{lo}, {hi}]"
            ))),
        }
    }

    /// Lower endpoint.
    pub fn lo(&self) -> &Scalar {
        &self.lo
    }

    /// Upper endpoint.
    pub fn hi(&self) -> &Scalar {
        &self.hi
    }

    /// The function on this piece.
    pub fn f(&self) -> &RationalFn {
        &self.f
    }
}

/// A function given by consecutive pieces with strictly increasing,
/// contiguous breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseFn {
    pieces: Vec<PieceFn>,
}

impl PiecewiseFn {
    /// Builds a piecewise function from contiguous pieces.
    pub fn new(pieces: Vec<PieceFn>) -> Result<PiecewiseFn, ExactError> {
        if pieces.is_empty() {
            return Err(ExactError::BadPiecewise("no pieces".into()));
        }
        for pair in pieces.windows(2) {
            if pair[0].hi.try_cmp(&pair[1].lo)? != Ordering::Equal {
                return Err(ExactError::BadPiecewise(format!(
                    "pieces are not contiguous: [{}, {}] then [{}, {}]",
                    pair[0].lo, pair[0].hi, pair[1].lo, pair[1].hi
                )));
            }
        }
        Ok(PiecewiseFn { pieces })
    }

    /// Builds a piecewise function and verifies exact agreement of adjacent
    /// pieces at each interior breakpoint.
    pub fn new_continuous(pieces: Vec<PieceFn>, var: Var) -> Result<PiecewiseFn, ExactError> {
        let pw = PiecewiseFn::new(pieces)?;
        for pair in pw.pieces.windows(2) {
            let x = &pair[0].hi;
            let left = pair[0].f.eval1(var, x)?;
            let right = pair[1].f.eval1(var, x)?;
            if left.try_cmp(&right)? != Ordering::Equal {
                return Err(ExactError::BadPiecewise(format!(
                    "discontinuity at {x}: {left} vs {right}"
                )));
            }
        }
        Ok(pw)
    }

    /// The pieces in order.
    pub fn pieces(&self) -> &[PieceFn] {
        &self.pieces
    }

    /// The full domain `[lo, hi]`.
    pub fn domain(&self) -> (&Scalar, &Scalar) {
        (
            &self.pieces.first().expect("nonempty").lo,
            &self.pieces.last().expect("nonempty").hi,
        )
    }

    /// Evaluates at a point of the domain (pieces own their left endpoint,
    /// the last piece also its right one).
    pub fn eval1(&self, var: Var, x: &Scalar) -> Result<Scalar, ExactError> {
        for piece in &self.pieces {
            if piece.lo.try_cmp(x)? != Ordering::Greater
                && x.try_cmp(&piece.hi)? == Ordering::Less
            {
                return piece.f.eval1(var, x);
            }
        }
        let (lo, hi) = self.domain();
        if x.try_cmp(hi)? == Ordering::Equal {
            return self.pieces.last().expect("nonempty").f.eval1(var, x);
        }
        Err(ExactError::BadInterval(format!(
            "{x} lies outside the domain [{lo}, {hi}]"
        )))
    }
}

impl fmt::Display for PiecewiseFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, piece) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{} on [{}, {}]", piece.f, piece.lo, piece.hi)?;
        }
        Ok(())
    }
}

/// Closed-form integral of a piecewise function whose pieces are all
/// polynomials; a piece with a nonconstant denominator is refused with
/// [`ExactError::NeedsNumericPath`].
pub fn integrate_piecewise(f: &PiecewiseFn) -> Result<Scalar, ExactError> {
    let mut total = Scalar::zero();
    for piece in f.pieces() {
        let p = piece.f.as_poly().ok_or(ExactError::NeedsNumericPath)?;
        let value = integrate_poly(&p, &piece.lo, &piece.hi)?;
        total = total.try_add(&value)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_poly, rat, Poly};

    fn sc(n: i64, d: i64) -> Scalar {
        Scalar::Rat(rat(n, d))
    }

    fn poly_piece(lo: Scalar, hi: Scalar, text: &str) -> PieceFn {
        PieceFn::new(lo, hi, RationalFn::from_poly(parse_poly(text).unwrap())).unwrap()
    }

    #[test]
    fn two_piece_volume_integral() {
        // int_0^1 (18-15u) + int_1^{3/2} 3(2-u)(3-2u)^2 = 21/2 + 7/16 = 175/16.
        let cubic = parse_poly("54-99*u+60*u^2-12*u^3").unwrap();
        let pieces = vec![
            poly_piece(sc(0, 1), sc(1, 1), "18-15*u"),
            PieceFn::new(sc(1, 1), sc(3, 2), RationalFn::from_poly(cubic)).unwrap(),
        ];
        let f = PiecewiseFn::new(pieces).unwrap();
        assert_eq!(integrate_piecewise(&f).unwrap(), sc(175, 16));
    }

    #[test]
    fn nonconstant_denominator_needs_numeric_path() {
        let piece = PieceFn::new(
            sc(0, 1),
            sc(1, 1),
            RationalFn::new(Poly::one(), parse_poly("1+u").unwrap()).unwrap(),
        )
        .unwrap();
        let f = PiecewiseFn::new(vec![piece]).unwrap();
        assert!(matches!(
            integrate_piecewise(&f),
            Err(ExactError::NeedsNumericPath)
        ));
    }

    #[test]
    fn pieces_must_be_contiguous() {
        let pieces = vec![
            poly_piece(sc(0, 1), sc(1, 1), "1"),
            poly_piece(sc(2, 1), sc(3, 1), "1"),
        ];
        assert!(PiecewiseFn::new(pieces).is_err());
    }

    #[test]
    fn continuity_check_compares_exact_values() {
        let good = vec![
            poly_piece(sc(0, 1), sc(1, 1), "u"),
            poly_piece(sc(1, 1), sc(2, 1), "2-u"),
        ];
        assert!(PiecewiseFn::new_continuous(good, Var::U).is_ok());
        let bad = vec![
            poly_piece(sc(0, 1), sc(1, 1), "u"),
            poly_piece(sc(1, 1), sc(2, 1), "3-u"),
        ];
        assert!(PiecewiseFn::new_continuous(bad, Var::U).is_err());
    }

    #[test]
    fn evaluation_picks_the_right_piece() {
        let f = PiecewiseFn::new(vec![
            poly_piece(sc(0, 1), sc(1, 1), "u"),
            poly_piece(sc(1, 1), sc(2, 1), "2-u"),
        ])
        .unwrap();
        assert_eq!(f.eval1(Var::U, &sc(1, 2)).unwrap(), sc(1, 2));
        assert_eq!(f.eval1(Var::U, &sc(3, 2)).unwrap(), sc(1, 2));
        assert_eq!(f.eval1(Var::U, &sc(2, 1)).unwrap(), sc(0, 1));
        assert!(f.eval1(Var::U, &sc(5, 2)).is_err());
    }

    #[test]
    fn irrational_breakpoints_are_supported() {
        // int_1^{3/2 - sqrt(21)/14} 1 du is negative-width: rejected.
        let ustar = Scalar::quad(rat(3, 2), rat(-1, 14), 21).unwrap();
        assert!(PieceFn::new(ustar.clone(), sc(1, 1), RationalFn::from_poly(Poly::one())).is_err());
        // The other way round it is a valid piece.
        let piece = PieceFn::new(sc(1, 1), ustar, RationalFn::from_poly(Poly::one()));
        assert!(piece.is_ok());
    }
}
