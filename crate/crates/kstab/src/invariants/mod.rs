//! Expected vanishing orders and local delta-invariant bounds.
//!
//! This module turns exact Zariski data into the invariants used in
//! valuative stability estimates.  A [`ThreefoldSetup`] packages an ample
//! sweep `A - u S` on a threefold together with its decomposition ledger
//! and the restriction to the swept surface; from it we compute
//!
//! * [`s_threefold_divisor`] — the expected vanishing order of the ample
//!   class along the swept divisor,
//! * [`s_w_curve`] and [`s_w_point`] — the refined orders along a curve in
//!   the surface and at a point of that curve, built from two-parameter
//!   chamber complexes,
//! * [`az_combine`] — the exact three-term minimum that converts the orders
//!   into a local delta bound, with boundary-case detection.
//!
//! Surface-level flags are handled by [`flag_delta_surface`] (fixed
//! polarization, worst-point scans) and [`flag_orders_parametric`]
//! (polarizations depending on a parameter, with rational-function output).
//! [`nemuro_bound`] produces upper bounds for curve-level orders that are
//! affine in the reciprocal of a local delta invariant, and
//! [`profile_weighted_integral`] integrates a weight against a two-branch
//! reciprocal profile with a quadratic-irrational breakpoint, keeping the
//! pieces exact in the relevant quadratic field.
//!
//! All quantities are exact rationals, rational functions, or elements of a
//! real quadratic field; inequality-mode results carry an explicit
//! upper-bound flag instead of silently degrading to approximations.

use std::collections::BTreeMap;
use std::error::Error;
use std::fmt;
use std::rc::Rc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact::{
    integrate_numeric, integrate_poly, nonneg_on_interval, nonneg_on_ray, ExactError, Poly,
    RationalFn, Scalar, Var,
};
use crate::lattice::{DivClass, Lattice, LatticeError};
use crate::zariski::{
    decompose_parametric, two_param_chambers, Chamber, ChamberComplex, OuterCell, SweepCell,
    ZariskiError,
};

/// Errors from invariant computations.
#[derive(Debug)]
pub enum InvariantError {
    /// Arithmetic or certification failure in the exact layer.
    Exact(ExactError),
    /// Lattice-level failure (pairings, cone membership, thresholds).
    Lattice(LatticeError),
    /// Decomposition or chamber construction failed.
    Zariski(ZariskiError),
    /// The setup data is structurally inconsistent.
    BadSetup(String),
    /// A curve in a negative part has no declared local multiplicity at the
    /// flag point.
    MissingIncidence(String),
    /// An input that must be positive was zero or negative.
    NotPositive(String),
    /// The requested computation is outside the supported shape.
    Unsupported(String),
}

impl fmt::Display for InvariantError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantError::Exact(e) => write!(f, "exact arithmetic error: {e}"),
            InvariantError::Lattice(e) => write!(f, "lattice error: {e}"),
            InvariantError::Zariski(e) => write!(f, "decomposition error: {e}"),
            InvariantError::BadSetup(msg) => write!(f, "invalid setup: {msg}"),
            InvariantError::MissingIncidence(msg) => {
                write!(f, "missing incidence multiplicity: {msg}")
            }
            InvariantError::NotPositive(msg) => write!(f, "value must be positive: {msg}"),
            InvariantError::Unsupported(msg) => write!(f, "unsupported computation: {msg}"),
        }
    }
}

impl Error for InvariantError {}

impl From<ExactError> for InvariantError {
    fn from(e: ExactError) -> Self {
        InvariantError::Exact(e)
    }
}

impl From<LatticeError> for InvariantError {
    fn from(e: LatticeError) -> Self {
        InvariantError::Lattice(e)
    }
}

impl From<ZariskiError> for InvariantError {
    fn from(e: ZariskiError) -> Self {
        InvariantError::Zariski(e)
    }
}

/// Whether a computed quantity is exact or only bounds the true value from
/// above.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exactness {
    /// The value equals the invariant.
    Exact,
    /// The value is an upper bound for the invariant.
    AtMost,
}

/// An exact rational paired with its exactness status.
#[derive(Debug, Clone, PartialEq)]
pub struct SValue {
    /// The computed rational value.
    pub value: BigRational,
    /// Whether the value is exact or an upper bound.
    pub exactness: Exactness,
}

impl SValue {
    /// An exactly known value.
    pub fn exact(value: BigRational) -> SValue {
        SValue {
            value,
            exactness: Exactness::Exact,
        }
    }

    /// An upper bound for the true value.
    pub fn at_most(value: BigRational) -> SValue {
        SValue {
            value,
            exactness: Exactness::AtMost,
        }
    }

    /// True when the value is exact rather than a bound.
    pub fn is_exact(&self) -> bool {
        self.exactness == Exactness::Exact
    }
}

impl fmt::Display for SValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exactness {
            Exactness::Exact => write!(f, "{}", self.value),
            Exactness::AtMost => write!(f, "<= {}", self.value),
        }
    }
}

fn scalar(r: &BigRational) -> Scalar {
    Scalar::Rat(r.clone())
}

fn to_rational(p: &Poly, context: &str) -> Result<BigRational, InvariantError> {
    Ok(p.eval_constant()?.to_rational(context)?)
}

/// One parameter range of a sweep ledger: on `[lo, hi]` the swept class
/// splits as the declared nef part plus the listed multiples of fixed
/// divisors.
#[derive(Debug, Clone)]
pub struct LedgerPiece {
    lo: BigRational,
    hi: BigRational,
    positive: Vec<Poly>,
    negative: Vec<(String, Poly)>,
}

impl LedgerPiece {
    /// A new piece; consistency is certified by [`verify_threefold_ledger`].
    pub fn new(
        lo: BigRational,
        hi: BigRational,
        positive: Vec<Poly>,
        negative: Vec<(String, Poly)>,
    ) -> LedgerPiece {
        LedgerPiece {
            lo,
            hi,
            positive,
            negative,
        }
    }

    /// Lower endpoint of the parameter range.
    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    /// Upper endpoint of the parameter range.
    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    /// Coordinates of the declared nef part, polynomials in the parameter.
    pub fn positive(&self) -> &[Poly] {
        &self.positive
    }

    /// Named coefficients of the negative part.
    pub fn negative(&self) -> &[(String, Poly)] {
        &self.negative
    }
}

/// How a divisor appearing in a ledger negative part restricts to the swept
/// surface: the curve it cuts out and that curve's class.
#[derive(Debug, Clone)]
pub struct RestrictedDivisor {
    /// Name of the divisor on the ambient threefold.
    pub divisor: String,
    /// Name of the restricted curve on the surface.
    pub curve: String,
    /// Surface coordinates of the restricted curve's class.
    pub coords: Vec<BigRational>,
}

/// An ample sweep `A - u S` on a threefold with its decomposition ledger
/// and the restriction data onto the swept surface.
#[derive(Debug, Clone)]
pub struct ThreefoldSetup {
    threefold: Rc<Lattice>,
    surface: Rc<Lattice>,
    s_class: DivClass,
    tau: BigRational,
    pieces: Vec<LedgerPiece>,
    restriction: Vec<Vec<BigRational>>,
    restricted: Vec<RestrictedDivisor>,
}

impl ThreefoldSetup {
    /// Assembles a setup after structural validation.  The analytic
    /// consistency of the ledger is certified separately by
    /// [`verify_threefold_ledger`].
    pub fn new(
        threefold: Rc<Lattice>,
        surface: Rc<Lattice>,
        s_name: &str,
        tau: BigRational,
        pieces: Vec<LedgerPiece>,
        restriction: Vec<Vec<BigRational>>,
        restricted: Vec<RestrictedDivisor>,
    ) -> Result<ThreefoldSetup, InvariantError> {
        threefold.as_threefold()?;
        surface.as_surface()?;
        if tau.is_negative() {
            return Err(InvariantError::BadSetup(format!(
                "sweep threshold must be nonnegative, got {tau}"
            )));
        }
        if tau.is_zero() != pieces.is_empty() {
            return Err(InvariantError::BadSetup(
                "a ledger is empty exactly when the sweep threshold is zero".into(),
            ));
        }
        let s_coords = threefold.coords_of(s_name)?;
        let s_class = DivClass::from_rationals(&threefold, &s_coords)?;
        if restriction.len() != surface.rank() {
            return Err(InvariantError::BadSetup(format!(
                "restriction matrix has {} rows, surface rank is {}",
                restriction.len(),
                surface.rank()
            )));
        }
        for row in &restriction {
            if row.len() != threefold.rank() {
                return Err(InvariantError::BadSetup(format!(
                    "restriction matrix row has {} columns, threefold rank is {}",
                    row.len(),
                    threefold.rank()
                )));
            }
        }
        for piece in &pieces {
            if piece.lo >= piece.hi {
                return Err(InvariantError::BadSetup(format!(
                    "ledger piece [{}, {}] is empty",
                    piece.lo, piece.hi
                )));
            }
            if piece.positive.len() != threefold.rank() {
                return Err(InvariantError::BadSetup(
                    "ledger nef part does not match the threefold rank".into(),
                ));
            }
            for (name, _) in &piece.negative {
                threefold.coords_of(name)?;
                if !restricted.iter().any(|r| &r.divisor == name) {
                    return Err(InvariantError::BadSetup(format!(
                        "ledger divisor {name} has no declared restriction"
                    )));
                }
            }
        }
        for r in &restricted {
            threefold.coords_of(&r.divisor)?;
            if r.coords.len() != surface.rank() {
                return Err(InvariantError::BadSetup(format!(
                    "restricted curve {} does not match the surface rank",
                    r.curve
                )));
            }
        }
        Ok(ThreefoldSetup {
            threefold,
            surface,
            s_class,
            tau,
            pieces,
            restriction,
            restricted,
        })
    }

    /// The ambient threefold lattice.
    pub fn threefold(&self) -> &Rc<Lattice> {
        &self.threefold
    }

    /// The swept surface's lattice.
    pub fn surface(&self) -> &Rc<Lattice> {
        &self.surface
    }

    /// The swept surface class.
    pub fn s_class(&self) -> &DivClass {
        &self.s_class
    }

    /// The declared sweep threshold.
    pub fn tau(&self) -> &BigRational {
        &self.tau
    }

    /// The ledger pieces in parameter order.
    pub fn pieces(&self) -> &[LedgerPiece] {
        &self.pieces
    }

    /// The declared restrictions of ledger divisors.
    pub fn restricted(&self) -> &[RestrictedDivisor] {
        &self.restricted
    }

    /// Triple self-intersection of the ample class.
    pub fn ample_cube(&self) -> Result<BigRational, InvariantError> {
        let a = DivClass::anticanonical(&self.threefold);
        to_rational(&a.cube()?, "ample cube")
    }

    /// Coordinates of the swept class `A - u S` on the threefold.
    fn swept_coords(&self) -> Result<Vec<Poly>, InvariantError> {
        let a = DivClass::anticanonical(&self.threefold);
        let swept = a.sub(&self.s_class.scale_poly(&Poly::var(Var::U))?)?;
        Ok(swept.coords().to_vec())
    }

    /// The declared nef part of a piece as a threefold class.
    pub fn positive_part(&self, piece: usize) -> Result<DivClass, InvariantError> {
        let p = &self.pieces[piece];
        Ok(DivClass::new(self.threefold.clone(), p.positive.clone())?)
    }

    /// The nef part of a piece restricted to the surface.
    pub fn restricted_positive(&self, piece: usize) -> Result<DivClass, InvariantError> {
        let coords = apply_restriction(&self.restriction, &self.pieces[piece].positive)?;
        Ok(DivClass::new(self.surface.clone(), coords)?)
    }

    /// Total coefficient with which the named surface curve appears in the
    /// restricted negative part of a piece.
    fn curve_coefficient(&self, piece: usize, curve: &str) -> Result<Poly, InvariantError> {
        let mut total = Poly::zero();
        for (divisor, coeff) in &self.pieces[piece].negative {
            let entry = self
                .restricted
                .iter()
                .find(|r| &r.divisor == divisor)
                .ok_or_else(|| {
                    InvariantError::BadSetup(format!("divisor {divisor} has no restriction"))
                })?;
            if entry.curve == curve {
                total = total.checked_add(coeff)?;
            }
        }
        Ok(total)
    }

    /// The restricted negative-part entries of a piece other than the named
    /// curve, as `(coefficient, restriction)` pairs.
    fn other_negative(
        &self,
        piece: usize,
        curve: &str,
    ) -> Result<Vec<(Poly, &RestrictedDivisor)>, InvariantError> {
        let mut out = Vec::new();
        for (divisor, coeff) in &self.pieces[piece].negative {
            let entry = self
                .restricted
                .iter()
                .find(|r| &r.divisor == divisor)
                .ok_or_else(|| {
                    InvariantError::BadSetup(format!("divisor {divisor} has no restriction"))
                })?;
            if entry.curve != curve {
                out.push((coeff.clone(), entry));
            }
        }
        Ok(out)
    }

    /// The two-parameter chamber complex of `P(u)|_S - v C` over a piece.
    pub fn piece_complex(
        &self,
        piece: usize,
        curve: &DivClass,
    ) -> Result<ChamberComplex, InvariantError> {
        let p = &self.pieces[piece];
        let restricted = self.restricted_positive(piece)?;
        let swept = restricted.sub(&curve.scale_poly(&Poly::var(Var::V))?)?;
        Ok(two_param_chambers(
            &swept,
            Var::U,
            Var::V,
            &scalar(&p.lo),
            &scalar(&p.hi),
        )?)
    }
}

fn apply_restriction(
    matrix: &[Vec<BigRational>],
    coords: &[Poly],
) -> Result<Vec<Poly>, InvariantError> {
    let mut out = Vec::with_capacity(matrix.len());
    for row in matrix {
        let mut acc = Poly::zero();
        for (entry, coord) in row.iter().zip(coords) {
            if !entry.is_zero() {
                acc = acc.checked_add(&coord.scale_rat(entry))?;
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// One named consistency check of a ledger.
#[derive(Debug, Clone)]
pub struct LedgerCheck {
    /// Short label of the check.
    pub label: String,
    /// Whether the check passed.
    pub pass: bool,
    /// Human-readable evidence (residuals, samples, thresholds).
    pub detail: String,
}

/// The outcome of [`verify_threefold_ledger`]: one entry per check.
#[derive(Debug, Clone)]
pub struct LedgerReport {
    /// The individual checks in evaluation order.
    pub checks: Vec<LedgerCheck>,
}

impl LedgerReport {
    /// True when every check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

impl fmt::Display for LedgerReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            let status = if check.pass { "ok  " } else { "FAIL" };
            writeln!(f, "{status} {}: {}", check.label, check.detail)?;
        }
        Ok(())
    }
}

/// Certifies a sweep ledger: coverage of `[0, tau]`, the coordinatewise
/// identity `nef part + negative part = A - u S` on every piece, nefness of
/// the nef part at seven samples per piece, nonnegativity and continuity of
/// the negative coefficients, agreement of `tau` with the exact
/// pseudoeffective threshold, and the adjunction identity for the declared
/// restriction matrix.
pub fn verify_threefold_ledger(setup: &ThreefoldSetup) -> Result<LedgerReport, InvariantError> {
    let mut checks = Vec::new();
    let swept = setup.swept_coords()?;

    // Coverage of [0, tau] by contiguous pieces.
    let mut covered = BigRational::zero();
    let mut contiguous = true;
    for piece in setup.pieces() {
        if piece.lo != covered {
            contiguous = false;
        }
        covered = piece.hi.clone();
    }
    if &covered != setup.tau() {
        contiguous = false;
    }
    checks.push(LedgerCheck {
        label: "coverage".into(),
        pass: contiguous,
        detail: format!("pieces cover [0, {}]", setup.tau()),
    });

    for (i, piece) in setup.pieces().iter().enumerate() {
        // Identity: nef part plus negative part reassembles the swept class.
        let mut residual = Vec::new();
        let mut sum = piece.positive.clone();
        for (name, coeff) in &piece.negative {
            let coords = setup.threefold.coords_of(name)?;
            for (acc, entry) in sum.iter_mut().zip(&coords) {
                if !entry.is_zero() {
                    *acc = acc.checked_add(&coeff.scale_rat(entry))?;
                }
            }
        }
        for (acc, target) in sum.iter().zip(&swept) {
            residual.push(acc.checked_sub(target)?);
        }
        let identity = residual.iter().all(Poly::is_zero);
        let midpoint = (&piece.lo + &piece.hi) / BigRational::from_integer(2.into());
        let sample_residual: Vec<String> = residual
            .iter()
            .map(|p| {
                p.eval1(Var::U, &scalar(&midpoint))
                    .map(|s| s.to_string())
                    .unwrap_or_else(|e| e.to_string())
            })
            .collect();
        checks.push(LedgerCheck {
            label: format!("identity[{i}]"),
            pass: identity,
            detail: format!(
                "residual at u = {midpoint} is ({})",
                sample_residual.join(", ")
            ),
        });

        // Nefness of the declared nef part at seven samples.
        let positive = setup.positive_part(i)?;
        let width = &piece.hi - &piece.lo;
        let mut nef = true;
        for k in 0..7 {
            let u = &piece.lo + &width * BigRational::new(k.into(), 6.into());
            let at = positive.substitute(Var::U, &scalar(&u))?;
            if !at.is_nef()? {
                nef = false;
                break;
            }
        }
        checks.push(LedgerCheck {
            label: format!("nefness[{i}]"),
            pass: nef,
            detail: "nef part pairs nonnegatively with the contraction rays".into(),
        });

        // Nonnegative negative-part coefficients on the piece.
        let mut nonneg = true;
        for (_, coeff) in &piece.negative {
            if !nonneg_on_interval(coeff, &scalar(&piece.lo), &scalar(&piece.hi))? {
                nonneg = false;
                break;
            }
        }
        checks.push(LedgerCheck {
            label: format!("negative[{i}]"),
            pass: nonneg,
            detail: "negative-part coefficients are nonnegative".into(),
        });
    }

    // Continuity of the negative part across piece boundaries.
    let mut continuous = true;
    for window in setup.pieces().windows(2) {
        let boundary = scalar(&window[0].hi);
        let mut names: Vec<&String> = window[0].negative.iter().map(|(n, _)| n).collect();
        names.extend(window[1].negative.iter().map(|(n, _)| n));
        names.sort();
        names.dedup();
        for name in names {
            let left = window[0]
                .negative
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, c)| c.eval1(Var::U, &boundary))
                .transpose()?
                .unwrap_or_else(Scalar::zero);
            let right = window[1]
                .negative
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, c)| c.eval1(Var::U, &boundary))
                .transpose()?
                .unwrap_or_else(Scalar::zero);
            if left.try_sub(&right)?.sign() != 0 {
                continuous = false;
            }
        }
    }
    checks.push(LedgerCheck {
        label: "continuity".into(),
        pass: continuous,
        detail: "negative parts agree at piece boundaries".into(),
    });

    // The declared threshold equals the exact pseudoeffective threshold.
    let ample = DivClass::anticanonical(&setup.threefold);
    let threshold = ample.pseff_threshold(&setup.s_class)?;
    checks.push(LedgerCheck {
        label: "threshold".into(),
        pass: &threshold == setup.tau(),
        detail: format!("pseudoeffective threshold is {threshold}"),
    });

    // Adjunction: the restriction matrix sends A - S to the surface's
    // anticanonical class.
    let adjoint: Vec<Poly> = ample
        .sub(&setup.s_class)?
        .coords()
        .iter()
        .cloned()
        .collect();
    let restricted = apply_restriction(&setup.restriction, &adjoint)?;
    let surface_anti: Vec<BigRational> = setup
        .surface
        .as_surface()?
        .canonical_coords()
        .iter()
        .map(|c| -c)
        .collect();
    let mut adjunction = true;
    for (lhs, rhs) in restricted.iter().zip(&surface_anti) {
        if lhs.checked_sub(&Poly::from_rat(rhs.clone()))?.is_zero() {
            continue;
        }
        adjunction = false;
    }
    checks.push(LedgerCheck {
        label: "adjunction".into(),
        pass: adjunction,
        detail: "restriction of A - S equals the surface anticanonical class".into(),
    });

    Ok(LedgerReport { checks })
}

/// Expected vanishing order of the ample class along the swept divisor:
/// `(1/A^3) ∫ vol(A - u S) du`, read off the ledger's nef parts.
pub fn s_threefold_divisor(setup: &ThreefoldSetup) -> Result<BigRational, InvariantError> {
    if setup.tau().is_zero() {
        return Ok(BigRational::zero());
    }
    let cube = setup.ample_cube()?;
    let mut total = BigRational::zero();
    for (i, piece) in setup.pieces().iter().enumerate() {
        let positive = setup.positive_part(i)?;
        let volume = positive.cube()?;
        let value = integrate_poly(&volume, &scalar(&piece.lo), &scalar(&piece.hi))?;
        total += value.to_rational("divisor order integral")?;
    }
    Ok(total / cube)
}

fn complex_integral<F>(
    complex: &ChamberComplex,
    mut integrand: F,
) -> Result<BigRational, InvariantError>
where
    F: FnMut(&Chamber) -> Result<Poly, InvariantError>,
{
    let inner = complex.inner();
    let mut total = BigRational::zero();
    for cell in complex.cells() {
        for chamber in cell.chambers() {
            let g = integrand(chamber)?;
            if g.is_zero() {
                continue;
            }
            let inner_integral = g.integrate_sym(inner, chamber.wall_lo(), chamber.wall_hi())?;
            let value = integrate_poly(&inner_integral, cell.lo(), cell.hi())?;
            total += value.to_rational("chamber integral")?;
        }
    }
    Ok(total)
}

/// Expected vanishing order, within the surface filtration, along a curve of
/// the surface: the negative-part term plus the volume term of the refined
/// filtration.
pub fn s_w_curve(setup: &ThreefoldSetup, curve: &str) -> Result<BigRational, InvariantError> {
    let cube = setup.ample_cube()?;
    let curve_coords = setup.surface.coords_of(curve)?;
    let curve_class = DivClass::from_rationals(&setup.surface, &curve_coords)?;
    let three = BigRational::from_integer(3.into());

    let mut total = BigRational::zero();
    for (i, piece) in setup.pieces().iter().enumerate() {
        // Negative-part term: (P(u)^2 . S) weighted by the coefficient of
        // the curve inside the restricted negative part.
        let coefficient = setup.curve_coefficient(i, curve)?;
        if !coefficient.is_zero() {
            let positive = setup.positive_part(i)?;
            let squared = positive.triple(&positive, setup.s_class())?;
            let weighted = squared.checked_mul(&coefficient)?;
            let value = integrate_poly(&weighted, &scalar(&piece.lo), &scalar(&piece.hi))?;
            total += value.to_rational("negative-part term")? * &three / &cube;
        }

        // Volume term over the refined sweep.
        let complex = setup.piece_complex(i, &curve_class)?;
        let volume = complex_integral(&complex, |chamber| Ok(chamber.volume().clone()))?;
        total += volume * &three / &cube;
    }
    Ok(total)
}

/// Declared local data for the point of a flag: for each curve that can
/// appear in a negative part, the local intersection multiplicity with the
/// flag curve at the point (`0` when the point is off the curve, `1` for a
/// transversal branch).
#[derive(Debug, Clone)]
pub struct FlagPoint {
    label: String,
    incidence: BTreeMap<String, BigRational>,
    exact: bool,
}

impl FlagPoint {
    /// A point with exactly known incidences.
    pub fn exact(label: &str, incidence: &[(&str, i64)]) -> FlagPoint {
        FlagPoint::new(label, incidence, true)
    }

    /// A point whose incidences are worst-case assumptions, making every
    /// derived order an upper bound.
    pub fn upper(label: &str, incidence: &[(&str, i64)]) -> FlagPoint {
        FlagPoint::new(label, incidence, false)
    }

    fn new(label: &str, incidence: &[(&str, i64)], exact: bool) -> FlagPoint {
        let incidence = incidence
            .iter()
            .map(|(name, m)| (name.to_string(), BigRational::from_integer((*m).into())))
            .collect();
        FlagPoint {
            label: label.to_string(),
            incidence,
            exact,
        }
    }

    /// A point from an already-collected incidence map.
    pub fn from_map(label: &str, incidence: BTreeMap<String, BigRational>, exact: bool) -> FlagPoint {
        FlagPoint {
            label: label.to_string(),
            incidence,
            exact,
        }
    }

    /// The point's display label.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Whether the incidences are exact rather than worst-case.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    fn multiplicity(&self, curve: &str, flag_curve: &str) -> Result<BigRational, InvariantError> {
        self.incidence.get(curve).cloned().ok_or_else(|| {
            InvariantError::MissingIncidence(format!(
                "curve {curve} appears in a negative part of the sweep along {flag_curve}, \
                 but point {} declares no multiplicity for it",
                self.label
            ))
        })
    }
}

/// The point-level expected vanishing order, split into the
/// self-intersection term and the negative-part correction.
#[derive(Debug, Clone)]
pub struct PointOrder {
    /// `(3/A^3) ∫∫ (P(u,v) . C)^2`, always exact.
    pub base: BigRational,
    /// `(6/A^3) ∫∫ (P(u,v) . C) · ord(negative parts)`, exact or an upper
    /// bound depending on the declared incidences.
    pub correction: SValue,
    /// Sum of the two terms.
    pub total: SValue,
}

/// Expected vanishing order at a point of a curve in the swept surface.
///
/// The local orders of the negative parts are evaluated through the
/// declared incidence multiplicities of the flag point; a curve appearing
/// in any negative part without a declared multiplicity is an error rather
/// than a silent zero.
pub fn s_w_point(
    setup: &ThreefoldSetup,
    curve: &str,
    point: &FlagPoint,
) -> Result<PointOrder, InvariantError> {
    let cube = setup.ample_cube()?;
    let curve_coords = setup.surface.coords_of(curve)?;
    let curve_class = DivClass::from_rationals(&setup.surface, &curve_coords)?;
    let basis_names = setup.surface.basis_names().to_vec();
    let three = BigRational::from_integer(3.into());
    let six = BigRational::from_integer(6.into());

    let mut base = BigRational::zero();
    let mut correction = BigRational::zero();
    for i in 0..setup.pieces().len() {
        let complex = setup.piece_complex(i, &curve_class)?;

        // Order of the restricted threefold negative part along the curve,
        // a polynomial in the sweep parameter only.
        let mut outer_order = Poly::zero();
        for (coeff, entry) in setup.other_negative(i, curve)? {
            let multiplicity = point.multiplicity(&entry.curve, curve)?;
            if !multiplicity.is_zero() {
                outer_order = outer_order.checked_add(&coeff.scale_rat(&multiplicity))?;
            }
        }

        base += complex_integral(&complex, |chamber| {
            let pairing = chamber.positive().pair(&curve_class)?;
            Ok(pairing.checked_mul(&pairing)?)
        })? * &three
            / &cube;

        correction += complex_integral(&complex, |chamber| {
            let mut order = outer_order.clone();
            for (k, coeff) in chamber.support().iter().zip(chamber.coefficients()) {
                let name = &basis_names[*k];
                if name == curve {
                    return Err(InvariantError::Unsupported(format!(
                        "curve {curve} appears in its own refined negative part"
                    )));
                }
                let multiplicity = point.multiplicity(name, curve)?;
                if !multiplicity.is_zero() {
                    order = order.checked_add(&coeff.scale_rat(&multiplicity))?;
                }
            }
            let pairing = chamber.positive().pair(&curve_class)?;
            Ok(pairing.checked_mul(&order)?)
        })? * &six
            / &cube;
    }

    if correction.is_negative() {
        return Err(InvariantError::BadSetup(format!(
            "negative point correction {correction}; incidences must be nonnegative"
        )));
    }
    let correction = if point.is_exact() {
        SValue::exact(correction)
    } else {
        SValue::at_most(correction)
    };
    let total = SValue {
        value: &base + &correction.value,
        exactness: correction.exactness,
    };
    Ok(PointOrder {
        base,
        correction,
        total,
    })
}

/// Which term of the three-part minimum is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinTerm {
    /// The point-level term.
    Point,
    /// The curve-level term.
    Curve,
    /// The divisor-level term.
    Surface,
}

impl fmt::Display for MinTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinTerm::Point => write!(f, "point"),
            MinTerm::Curve => write!(f, "curve"),
            MinTerm::Surface => write!(f, "surface"),
        }
    }
}

/// A local delta lower bound assembled from three expected vanishing
/// orders.
#[derive(Debug, Clone)]
pub struct DeltaBound {
    /// The lower bound: the minimum of the three reciprocals.
    pub bound: BigRational,
    /// Which term attains the minimum (point wins ties, then curve).
    pub attained: MinTerm,
    /// True when the bound is exactly `1`, where strict stability cannot be
    /// concluded from the minimum alone.
    pub boundary: bool,
    /// The refined two-term part: the smaller of the point and curve
    /// reciprocals.
    pub refined: BigRational,
}

/// Combines divisor-, curve-, and point-level orders into a local delta
/// lower bound `min(1/s_surface, 1/s_curve, 1/s_point)`.
///
/// Upper-bound inputs are allowed: an upper bound for an order yields a
/// valid lower bound for its reciprocal, so the minimum stays a sound
/// bound.  The boundary flag marks an exact value of `1`.
pub fn az_combine(
    s_surface: &SValue,
    s_curve: &SValue,
    s_point: &SValue,
) -> Result<DeltaBound, InvariantError> {
    for (name, v) in [
        ("divisor order", s_surface),
        ("curve order", s_curve),
        ("point order", s_point),
    ] {
        if !v.value.is_positive() {
            return Err(InvariantError::NotPositive(format!(
                "{name} must be positive, got {}",
                v.value
            )));
        }
    }
    let candidates = [
        (MinTerm::Point, s_point.value.recip()),
        (MinTerm::Curve, s_curve.value.recip()),
        (MinTerm::Surface, s_surface.value.recip()),
    ];
    let (attained, bound) = candidates
        .iter()
        .min_by(|a, b| a.1.cmp(&b.1))
        .cloned()
        .expect("three candidates");
    let refined = candidates[0].1.clone().min(candidates[1].1.clone());
    let boundary = bound == BigRational::one();
    Ok(DeltaBound {
        bound,
        attained,
        boundary,
        refined,
    })
}

/// Expected vanishing orders for a curve flag on a surface with a fixed
/// polarization, with a worst-point scan over declared candidates.
#[derive(Debug, Clone)]
pub struct FlagDeltaCase {
    /// Pseudoeffective threshold of the sweep along the curve.
    pub tau: BigRational,
    /// Expected vanishing order of the polarization along the curve.
    pub s_curve: BigRational,
    /// Point-level orders per declared candidate point.
    pub per_point: Vec<(String, BigRational)>,
    /// The candidate with the largest order, if any were declared.
    pub worst_point: Option<(String, BigRational)>,
    /// `min(a_curve / s_curve, 1 / worst point order)`.
    pub bound: BigRational,
}

/// Computes curve- and point-level orders for a flag on a polarized
/// surface: `S_L(C)` from a one-parameter sweep, and for each candidate
/// point the order of the refined filtration with negative parts evaluated
/// through declared incidences.  `a_curve` is the log discrepancy of the
/// flag curve with respect to the surface.
pub fn flag_delta_surface(
    polarization: &DivClass,
    curve: &DivClass,
    curve_name: Option<&str>,
    a_curve: &BigRational,
    points: &[FlagPoint],
) -> Result<FlagDeltaCase, InvariantError> {
    let lattice = polarization.lattice().clone();
    let surface = lattice.as_surface()?;
    let basis_names = surface.basis_names().to_vec();
    let square = to_rational(&polarization.square()?, "polarization square")?;
    if !square.is_positive() {
        return Err(InvariantError::NotPositive(format!(
            "polarization square must be positive, got {square}"
        )));
    }
    let tau = polarization.pseff_threshold(curve)?;
    if !tau.is_positive() {
        return Err(InvariantError::NotPositive(format!(
            "sweep threshold must be positive, got {tau}"
        )));
    }
    let swept = polarization.sub(&curve.scale_poly(&Poly::var(Var::U))?)?;
    let sweep = decompose_parametric(&swept, Var::U, &Scalar::zero(), &scalar(&tau))?;

    let mut volume_total = BigRational::zero();
    let mut pairing_sq_total = BigRational::zero();
    let mut order_totals = vec![BigRational::zero(); points.len()];
    let flag_name = curve_name.unwrap_or("the flag curve");
    for cell in sweep.cells() {
        let volume = integrate_poly(cell.volume(), cell.lo(), cell.hi())?;
        volume_total += volume.to_rational("sweep volume")?;

        let pairing = cell.positive().pair(curve)?;
        let pairing_sq = pairing.checked_mul(&pairing)?;
        let value = integrate_poly(&pairing_sq, cell.lo(), cell.hi())?;
        pairing_sq_total += value.to_rational("pairing square")?;

        for (point, total) in points.iter().zip(order_totals.iter_mut()) {
            let mut order = Poly::zero();
            for (k, coeff) in cell.support().iter().zip(cell.coefficients()) {
                let name = &basis_names[*k];
                if curve_name == Some(name.as_str()) {
                    return Err(InvariantError::Unsupported(format!(
                        "curve {name} appears in its own negative part"
                    )));
                }
                let multiplicity = point.multiplicity(name, flag_name)?;
                if !multiplicity.is_zero() {
                    order = order.checked_add(&coeff.scale_rat(&multiplicity))?;
                }
            }
            if !order.is_zero() {
                let weighted = pairing.checked_mul(&order)?;
                let value = integrate_poly(&weighted, cell.lo(), cell.hi())?;
                *total += value.to_rational("order integral")?;
            }
        }
    }

    let s_curve = &volume_total / &square;
    let two = BigRational::from_integer(2.into());
    let per_point: Vec<(String, BigRational)> = points
        .iter()
        .zip(&order_totals)
        .map(|(p, ord)| {
            (
                p.label().to_string(),
                (&pairing_sq_total + &two * ord) / &square,
            )
        })
        .collect();
    let worst_point = per_point
        .iter()
        .max_by(|a, b| a.1.cmp(&b.1))
        .cloned();
    let mut bound = a_curve / &s_curve;
    if let Some((_, worst)) = &worst_point {
        if !worst.is_positive() {
            return Err(InvariantError::NotPositive(format!(
                "point order must be positive, got {worst}"
            )));
        }
        bound = bound.min(worst.recip());
    }
    Ok(FlagDeltaCase {
        tau,
        s_curve,
        per_point,
        worst_point,
        bound,
    })
}

/// Curve- and point-level orders on one parameter window, as exact rational
/// functions of the outer parameter.
#[derive(Debug, Clone)]
pub struct OrderWindow {
    /// Window endpoints in the outer parameter.
    pub lo: Scalar,
    /// Upper endpoint.
    pub hi: Scalar,
    /// `S_L(C)` as a rational function of the outer parameter.
    pub s_curve: RationalFn,
    /// Point-level orders per declared candidate.
    pub per_point: Vec<(String, RationalFn)>,
}

/// Computes flag orders for a polarization depending polynomially on an
/// outer parameter, via a two-parameter chamber complex.  Returns one
/// window per outer cell of the complex.
pub fn flag_orders_parametric(
    polarization: &DivClass,
    curve: &DivClass,
    curve_name: Option<&str>,
    points: &[FlagPoint],
    outer: Var,
    inner: Var,
    lo: &Scalar,
    hi: &Scalar,
) -> Result<Vec<OrderWindow>, InvariantError> {
    let lattice = polarization.lattice().clone();
    let surface = lattice.as_surface()?;
    let basis_names = surface.basis_names().to_vec();
    let square = polarization.square()?;
    let swept = polarization.sub(&curve.scale_poly(&Poly::var(inner))?)?;
    let complex = two_param_chambers(&swept, outer, inner, lo, hi)?;
    let flag_name = curve_name.unwrap_or("the flag curve");

    let mut windows = Vec::new();
    for cell in complex.cells() {
        let mut volume_total = Poly::zero();
        let mut pairing_sq_total = Poly::zero();
        let mut order_totals = vec![Poly::zero(); points.len()];
        for chamber in cell.chambers() {
            let volume =
                chamber
                    .volume()
                    .integrate_sym(inner, chamber.wall_lo(), chamber.wall_hi())?;
            volume_total = volume_total.checked_add(&volume)?;

            let pairing = chamber.positive().pair(curve)?;
            let pairing_sq = pairing.checked_mul(&pairing)?.integrate_sym(
                inner,
                chamber.wall_lo(),
                chamber.wall_hi(),
            )?;
            pairing_sq_total = pairing_sq_total.checked_add(&pairing_sq)?;

            for (point, total) in points.iter().zip(order_totals.iter_mut()) {
                let mut order = Poly::zero();
                for (k, coeff) in chamber.support().iter().zip(chamber.coefficients()) {
                    let name = &basis_names[*k];
                    if curve_name == Some(name.as_str()) {
                        return Err(InvariantError::Unsupported(format!(
                            "curve {name} appears in its own negative part"
                        )));
                    }
                    let multiplicity = point.multiplicity(name, flag_name)?;
                    if !multiplicity.is_zero() {
                        order = order.checked_add(&coeff.scale_rat(&multiplicity))?;
                    }
                }
                if !order.is_zero() {
                    let weighted = pairing.checked_mul(&order)?.integrate_sym(
                        inner,
                        chamber.wall_lo(),
                        chamber.wall_hi(),
                    )?;
                    *total = total.checked_add(&weighted)?;
                }
            }
        }

        let s_curve = RationalFn::new(volume_total, square.clone())?;
        let two = Poly::from_int(2);
        let per_point = points
            .iter()
            .zip(&order_totals)
            .map(|(p, ord)| {
                let numerator = pairing_sq_total.checked_add(&two.checked_mul(ord)?)?;
                Ok((
                    p.label().to_string(),
                    RationalFn::new(numerator, square.clone())?,
                ))
            })
            .collect::<Result<Vec<_>, InvariantError>>()?;
        windows.push(OrderWindow {
            lo: cell.lo().clone(),
            hi: cell.hi().clone(),
            s_curve,
            per_point,
        });
    }
    Ok(windows)
}

fn poly_nonneg(p: &Poly, lo: &Scalar, hi: Option<&Scalar>) -> Result<bool, InvariantError> {
    let result = match hi {
        Some(hi) => nonneg_on_interval(p, lo, hi),
        None => nonneg_on_ray(p, lo),
    };
    match result {
        Ok(b) => Ok(b),
        // An undecided sign means no certificate, not a hard failure.
        Err(ExactError::CannotCertify(_)) => Ok(false),
        Err(e) => Err(e.into()),
    }
}

/// The certified sign of a polynomial on `[lo, hi]` (or `[lo, ∞)` when `hi`
/// is absent): `1` for nonnegative, `-1` for nonpositive, an error when
/// neither can be certified.
fn definite_sign(p: &Poly, lo: &Scalar, hi: Option<&Scalar>) -> Result<i8, InvariantError> {
    if poly_nonneg(p, lo, hi)? {
        return Ok(1);
    }
    if poly_nonneg(&p.scale_rat(&-BigRational::one()), lo, hi)? {
        return Ok(-1);
    }
    Err(InvariantError::Unsupported(format!(
        "cannot certify a sign for {p} on the range"
    )))
}

/// Certifies that `f` is nonnegative on `[lo, hi]` (or the ray from `lo`
/// when `hi` is absent) by sign analysis of its reduced numerator and
/// denominator.
pub fn nonneg_fn_on_interval(
    f: &RationalFn,
    lo: &Scalar,
    hi: Option<&Scalar>,
) -> Result<bool, InvariantError> {
    let num = definite_sign(f.num(), lo, hi)?;
    let den = definite_sign(f.den(), lo, hi)?;
    Ok(num * den >= 0)
}

/// Picks the candidate that is provably the minimum of the list on the
/// range `[lo, hi]` (the ray from `lo` when `hi` is absent): the returned
/// index `m` satisfies `candidates[i] - candidates[m] >= 0` there for every
/// `i`, certified by cross-multiplied sign analysis so that the comparison
/// polynomials stay within the certifiable degree.
pub fn min_on_interval(
    candidates: &[RationalFn],
    lo: &Scalar,
    hi: Option<&Scalar>,
) -> Result<usize, InvariantError> {
    if candidates.is_empty() {
        return Err(InvariantError::BadSetup("no candidates to minimize".into()));
    }
    let signs = candidates
        .iter()
        .map(|c| definite_sign(c.den(), lo, hi))
        .collect::<Result<Vec<_>, _>>()?;
    for m in 0..candidates.len() {
        let mut dominated = true;
        for (i, other) in candidates.iter().enumerate() {
            if i == m {
                continue;
            }
            // other - candidates[m] >= 0 iff the cross-multiplied
            // numerator carries the product sign of the denominators.
            let cross = other
                .num()
                .checked_mul(candidates[m].den())?
                .checked_sub(&candidates[m].num().checked_mul(other.den())?)?;
            let oriented = if signs[i] * signs[m] >= 0 {
                cross
            } else {
                cross.scale_rat(&-BigRational::one())
            };
            if !poly_nonneg(&oriented, lo, hi)? {
                dominated = false;
                break;
            }
        }
        if dominated {
            return Ok(m);
        }
    }
    Err(InvariantError::Unsupported(
        "no candidate dominates the others on the whole range".into(),
    ))
}

/// An upper bound of the form `constant + recip_coeff / delta` for an
/// expected vanishing order, affine in the reciprocal of a local delta
/// invariant (both parts in units of the log discrepancy of the flag
/// divisor).
#[derive(Debug, Clone, PartialEq)]
pub struct ReciprocalBound {
    /// The delta-independent part.
    pub constant: BigRational,
    /// The coefficient of `1/delta`.
    pub recip_coeff: BigRational,
}

impl ReciprocalBound {
    /// Evaluates `constant + recip_coeff / delta`.
    pub fn value_at(&self, delta: &BigRational) -> Result<BigRational, InvariantError> {
        if !delta.is_positive() {
            return Err(InvariantError::NotPositive(format!(
                "delta must be positive, got {delta}"
            )));
        }
        Ok(&self.constant + &self.recip_coeff / delta)
    }

    /// The bound as a rational function of `delta` (variable `t`).
    pub fn as_fn(&self) -> Result<RationalFn, InvariantError> {
        let t = Poly::var(Var::T);
        let numerator = t
            .scale_rat(&self.constant)
            .checked_add(&Poly::from_rat(self.recip_coeff.clone()))?;
        Ok(RationalFn::new(numerator, t)?)
    }

    /// The induced delta lower bound `delta / (constant·delta +
    /// recip_coeff)` as a rational function of `delta` (variable `t`).
    pub fn delta_fn(&self) -> Result<RationalFn, InvariantError> {
        let t = Poly::var(Var::T);
        let denominator = t
            .scale_rat(&self.constant)
            .checked_add(&Poly::from_rat(self.recip_coeff.clone()))?;
        Ok(RationalFn::new(t, denominator)?)
    }

    /// Evaluates the induced delta lower bound at a given delta.
    pub fn delta_at(&self, delta: &BigRational) -> Result<BigRational, InvariantError> {
        let value = self.value_at(delta)?;
        if !value.is_positive() {
            return Err(InvariantError::NotPositive(format!(
                "bound value must be positive, got {value}"
            )));
        }
        Ok(value.recip())
    }
}

/// One parameter range with an affine scaling function for the volume
/// estimate: on the piece, `lambda(u) * (surface anticanonical) - P(u)|_S`
/// must be pseudoeffective.
#[derive(Debug, Clone)]
pub struct ScaledPiece {
    /// Lower endpoint.
    pub lo: BigRational,
    /// Upper endpoint.
    pub hi: BigRational,
    /// The affine scaling function.
    pub lambda: Poly,
}

/// How the volume integrals over the refined parameter are estimated in
/// [`nemuro_bound`].
#[derive(Debug, Clone)]
pub enum VolumeMode {
    /// Use the generic volume estimate: every swept class is bounded by the
    /// surface anticanonical volume, contributing `tau * (anticanonical)^2`
    /// against `1/delta`.  The volume comparison is part of the declared
    /// hypotheses and is not re-certified here.
    Plain,
    /// Scale the restricted nef part into a multiple of the surface
    /// anticanonical class, with a pseudoeffectivity witness per piece;
    /// contributes `(anticanonical)^2 ∫ lambda^3` against `1/delta`.
    Scaled(Vec<ScaledPiece>),
    /// Compose a declared reciprocal-delta profile in an auxiliary variable
    /// with a substitution `t(u)`; contributes to the constant part and
    /// must reduce to a polynomial integrand.
    Profile {
        /// The reciprocal profile, a rational function of `t`.
        recip: RationalFn,
        /// The substitution, a polynomial in the sweep parameter.
        t_of_u: Poly,
        /// Declared validity range of the profile in `t`.
        t_range: (BigRational, BigRational),
    },
}

fn substitute_fn(p: &Poly, var: Var, replacement: &RationalFn) -> Result<RationalFn, ExactError> {
    // p(n/d) written over the common denominator d^deg.
    let coeffs = p.to_univariate(var)?;
    let degree = coeffs.len().saturating_sub(1);
    let mut numerator = Poly::zero();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = replacement
            .num()
            .pow(i as u8)
            .checked_mul(&replacement.den().pow((degree - i) as u8))?
            .scale(c);
        numerator = numerator.checked_add(&term)?;
    }
    RationalFn::new(numerator, replacement.den().pow(degree as u8))
}

/// Upper bound for a curve-level expected vanishing order that is affine in
/// the reciprocal of the surface's local delta invariant.
///
/// The constant part integrates the restricted negative-part coefficients
/// against `(P(u)|_S)^2`, each divided by its declared multiplier bound
/// from `lct`.  The `1/delta` coefficient comes from the chosen
/// [`VolumeMode`]: scaling witnesses are certified exactly (affine data,
/// endpoint cone membership), and profile substitutions must reduce to
/// polynomial integrands.
pub fn nemuro_bound(
    setup: &ThreefoldSetup,
    lct: &BTreeMap<String, BigRational>,
    mode: &VolumeMode,
) -> Result<ReciprocalBound, InvariantError> {
    let cube = setup.ample_cube()?;
    let three = BigRational::from_integer(3.into());

    // Ledger term.
    let mut constant = BigRational::zero();
    for (i, piece) in setup.pieces().iter().enumerate() {
        if piece.negative.is_empty() {
            continue;
        }
        let restricted = setup.restricted_positive(i)?;
        let squared = restricted.square()?;
        for (name, coeff) in &piece.negative {
            let bound = lct.get(name).ok_or_else(|| {
                InvariantError::BadSetup(format!("no multiplier bound declared for {name}"))
            })?;
            if !bound.is_positive() {
                return Err(InvariantError::NotPositive(format!(
                    "multiplier bound for {name} must be positive, got {bound}"
                )));
            }
            let weighted = squared.checked_mul(coeff)?.scale_rat(&bound.recip());
            let value = integrate_poly(&weighted, &scalar(&piece.lo), &scalar(&piece.hi))?;
            constant += value.to_rational("ledger term")? * &three / &cube;
        }
    }

    let surface = setup.surface.as_surface()?;
    let anti_coords: Vec<BigRational> = surface.canonical_coords().iter().map(|c| -c).collect();
    let anticanonical = DivClass::from_rationals(&setup.surface, &anti_coords)?;
    let anti_square = to_rational(&anticanonical.square()?, "anticanonical square")?;

    let recip_coeff = match mode {
        VolumeMode::Plain => &three / &cube * setup.tau() * &anti_square,
        VolumeMode::Scaled(pieces) => {
            // The scaled pieces must cover [0, tau] contiguously.
            let mut covered = BigRational::zero();
            for sp in pieces {
                if sp.lo != covered {
                    return Err(InvariantError::BadSetup(format!(
                        "scaling pieces must be contiguous from 0; gap at {covered}"
                    )));
                }
                covered = sp.hi.clone();
            }
            if &covered != setup.tau() {
                return Err(InvariantError::BadSetup(format!(
                    "scaling pieces end at {covered}, sweep threshold is {}",
                    setup.tau()
                )));
            }
            let mut integral = BigRational::zero();
            for sp in pieces {
                if sp.lambda.degree_in(Var::U) > 1 || !sp.lambda.used_vars().iter().all(|&v| v == Var::U) {
                    return Err(InvariantError::Unsupported(format!(
                        "scaling function {} must be affine in the sweep parameter",
                        sp.lambda
                    )));
                }
                if !nonneg_on_interval(&sp.lambda, &scalar(&sp.lo), &scalar(&sp.hi))? {
                    return Err(InvariantError::BadSetup(format!(
                        "scaling function {} is negative on [{}, {}]",
                        sp.lambda, sp.lo, sp.hi
                    )));
                }
                // Witness: lambda(u)·(anticanonical) - P(u)|_S is
                // pseudoeffective.  The difference is affine in u, so
                // endpoint membership in the (convex) cone certifies the
                // whole piece.
                let piece_idx = setup
                    .pieces()
                    .iter()
                    .position(|p| p.lo <= sp.lo && sp.hi <= p.hi)
                    .ok_or_else(|| {
                        InvariantError::BadSetup(format!(
                            "scaling piece [{}, {}] is not inside a single ledger piece",
                            sp.lo, sp.hi
                        ))
                    })?;
                let restricted = setup.restricted_positive(piece_idx)?;
                for coord in restricted.coords() {
                    if coord.degree_in(Var::U) > 1 {
                        return Err(InvariantError::Unsupported(
                            "restricted nef part must be affine in the sweep parameter".into(),
                        ));
                    }
                }
                let difference = anticanonical
                    .scale_poly(&sp.lambda)?
                    .sub(&restricted)?;
                for endpoint in [&sp.lo, &sp.hi] {
                    let at = difference.substitute(Var::U, &scalar(endpoint))?;
                    if !at.is_pseff()?.is_pseff() {
                        return Err(InvariantError::BadSetup(format!(
                            "scaling witness fails at u = {endpoint} on piece [{}, {}]",
                            sp.lo, sp.hi
                        )));
                    }
                }
                let cubed = sp.lambda.pow(3);
                let value = integrate_poly(&cubed, &scalar(&sp.lo), &scalar(&sp.hi))?;
                integral += value.to_rational("scaling integral")?;
            }
            &three / &cube * &anti_square * integral
        }
        VolumeMode::Profile {
            recip,
            t_of_u,
            t_range,
        } => {
            // The substitution must stay inside the declared profile range.
            for (i, piece) in setup.pieces().iter().enumerate() {
                let lo_s = scalar(&piece.lo);
                let hi_s = scalar(&piece.hi);
                let above = t_of_u.checked_sub(&Poly::from_rat(t_range.0.clone()))?;
                let below = Poly::from_rat(t_range.1.clone()).checked_sub(t_of_u)?;
                if !nonneg_on_interval(&above, &lo_s, &hi_s)?
                    || !nonneg_on_interval(&below, &lo_s, &hi_s)?
                {
                    return Err(InvariantError::BadSetup(format!(
                        "profile substitution leaves [{}, {}] on ledger piece {i}",
                        t_range.0, t_range.1
                    )));
                }
            }
            let composed_num = substitute_fn(recip.num(), Var::T, &RationalFn::from_poly(t_of_u.clone()))?;
            let composed_den = substitute_fn(recip.den(), Var::T, &RationalFn::from_poly(t_of_u.clone()))?;
            let composed = composed_num.div(&composed_den)?;
            let mut total = BigRational::zero();
            for (i, piece) in setup.pieces().iter().enumerate() {
                let restricted = setup.restricted_positive(i)?;
                let squared = restricted.square()?;
                let integrand = RationalFn::from_poly(squared).mul(&composed)?;
                let p = integrand.as_poly().ok_or_else(|| {
                    InvariantError::Unsupported(
                        "profile integrand does not reduce to a polynomial".into(),
                    )
                })?;
                let value = integrate_poly(&p, &scalar(&piece.lo), &scalar(&piece.hi))?;
                total += value.to_rational("profile integral")?;
            }
            constant += total * &three / &cube;
            BigRational::zero()
        }
    };

    Ok(ReciprocalBound {
        constant,
        recip_coeff,
    })
}

/// Combines a reciprocal bound for the curve-level order with the
/// divisor-level order into a two-term local delta bound
/// `min(1/s_divisor, delta/(constant·delta + recip_coeff))`.
pub fn lemma34_combine(
    bound: &ReciprocalBound,
    delta_p_s: &BigRational,
    s_divisor: &BigRational,
) -> Result<DeltaBound, InvariantError> {
    if !s_divisor.is_positive() {
        return Err(InvariantError::NotPositive(format!(
            "divisor order must be positive, got {s_divisor}"
        )));
    }
    let refined = bound.delta_at(delta_p_s)?;
    let surface_term = s_divisor.recip();
    let (attained, value) = if refined <= surface_term {
        (MinTerm::Curve, refined.clone())
    } else {
        (MinTerm::Surface, surface_term)
    };
    let boundary = value == BigRational::one();
    Ok(DeltaBound {
        bound: value,
        attained,
        boundary,
        refined,
    })
}

/// A two-branch reciprocal-delta profile in an auxiliary variable: constant
/// `1` up to the breakpoint, then a rational branch, with exact continuity
/// at the junction.
#[derive(Debug, Clone)]
pub struct DeltaProfile {
    breakpoint: Scalar,
    branch: RationalFn,
}

impl DeltaProfile {
    /// Builds a profile and certifies that the rational branch equals `1`
    /// exactly at the breakpoint.
    pub fn new(breakpoint: Scalar, branch: RationalFn) -> Result<DeltaProfile, InvariantError> {
        let at = branch.eval1(Var::T, &breakpoint)?;
        if at.try_sub(&Scalar::one())?.sign() != 0 {
            return Err(InvariantError::BadSetup(format!(
                "profile branches do not meet at the breakpoint: value {at}"
            )));
        }
        Ok(DeltaProfile { breakpoint, branch })
    }

    /// The junction of the two branches.
    pub fn breakpoint(&self) -> &Scalar {
        &self.breakpoint
    }

    /// The rational branch beyond the breakpoint.
    pub fn branch(&self) -> &RationalFn {
        &self.branch
    }
}

/// The two exact pieces and the enclosure produced by
/// [`profile_weighted_integral`].
#[derive(Debug, Clone)]
pub struct ProfiledIntegral {
    /// The parameter value where the substitution crosses the breakpoint.
    pub split: Scalar,
    /// Exact integral of the weight over the constant branch.
    pub head: Scalar,
    /// Exact integral of the weight times the rational branch.
    pub tail: Scalar,
    /// The exact rational total, available when the irrational parts of
    /// the two pieces cancel.
    pub exact: Option<BigRational>,
    /// An independent adaptive enclosure of the total.
    pub enclosure: (BigRational, BigRational),
}

fn linear_root(p: &Poly, var: Var) -> Result<Scalar, InvariantError> {
    let coeffs = p.to_univariate(var)?;
    if coeffs.len() != 2 {
        return Err(InvariantError::Unsupported(format!(
            "expected an affine polynomial, got {p}"
        )));
    }
    let root = coeffs[0].neg().try_div(&coeffs[1])?;
    Ok(root)
}

/// Integrates `weight(u) · profile(t(u))` over `[lo, hi]`, splitting at the
/// unique parameter where the monotone substitution crosses the profile
/// breakpoint.  Both pieces are computed exactly in the profile's quadratic
/// field; an independent adaptive enclosure of width at most `eps` is
/// returned alongside.
pub fn profile_weighted_integral(
    weight: &RationalFn,
    t_of_u: &RationalFn,
    profile: &DeltaProfile,
    lo: &BigRational,
    hi: &BigRational,
    eps: &BigRational,
) -> Result<ProfiledIntegral, InvariantError> {
    let lo_s = scalar(lo);
    let hi_s = scalar(hi);
    // Solve t(u) = breakpoint: the sign of crossing(u)/den(u) is the sign
    // of t(u) - breakpoint, evaluated without dividing (the substitution
    // may blow up at the far endpoint).
    let crossing = t_of_u
        .num()
        .checked_sub(&t_of_u.den().scale(profile.breakpoint()))?;
    let split = linear_root(&crossing, Var::U)?;
    if split.try_sub(&lo_s)?.sign() < 0 || hi_s.try_sub(&split)?.sign() < 0 {
        return Err(InvariantError::BadSetup(format!(
            "substitution crosses the breakpoint at {split}, outside [{lo}, {hi}]"
        )));
    }
    let den_sign = definite_sign(t_of_u.den(), &lo_s, Some(&hi_s))?;
    let before = crossing.eval1(Var::U, &lo_s)?.sign() * den_sign;
    let after = crossing.eval1(Var::U, &hi_s)?.sign() * den_sign;
    if before > 0 || after < 0 {
        return Err(InvariantError::BadSetup(
            "substitution must run from below the profile breakpoint to above it".into(),
        ));
    }

    let weight_poly = weight.as_poly().ok_or_else(|| {
        InvariantError::Unsupported("weight does not reduce to a polynomial".into())
    })?;
    let head = integrate_poly(&weight_poly, &lo_s, &split)?;

    let branch_num = substitute_fn(profile.branch().num(), Var::T, t_of_u)?;
    let branch_den = substitute_fn(profile.branch().den(), Var::T, t_of_u)?;
    let composed = RationalFn::from_poly(weight_poly.clone())
        .mul(&branch_num)?
        .div(&branch_den)?;
    let tail_poly = composed.as_poly().ok_or_else(|| {
        InvariantError::Unsupported("profiled integrand does not reduce to a polynomial".into())
    })?;
    let tail = integrate_poly(&tail_poly, &split, &hi_s)?;

    let total = head.try_add(&tail)?;
    let exact = match &total {
        Scalar::Rat(r) => Some(r.clone()),
        Scalar::Quad { .. } => None,
    };

    // Independent enclosure: adaptive integration of both pieces.
    let half = eps / BigRational::from_integer(2.into());
    let (head_lo, head_hi) = integrate_numeric(weight, &lo_s, &split, &half)?;
    let (tail_lo, tail_hi) = integrate_numeric(&composed, &split, &hi_s, &half)?;
    let enclosure = (&head_lo + &tail_lo, &head_hi + &tail_hi);

    Ok(ProfiledIntegral {
        split,
        head,
        tail,
        exact,
        enclosure,
    })
}

/// Convenience access to the inner integral of a one-parameter sweep cell,
/// used by property checks.
pub fn cell_inner_volume(cell: &SweepCell) -> Result<BigRational, InvariantError> {
    let value = integrate_poly(cell.volume(), cell.lo(), cell.hi())?;
    Ok(value.to_rational("cell volume")?)
}

/// Convenience access to the chambers of an outer cell, used by property
/// checks.
pub fn outer_cell_chambers(cell: &OuterCell) -> &[Chamber] {
    cell.chambers()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_poly, rat, rat_int};
    use crate::lattice::SurfaceLattice;
    use crate::lattice::ThreefoldLattice;

    fn rows(data: &[&[i64]]) -> Vec<Vec<BigRational>> {
        data.iter()
            .map(|row| row.iter().map(|&n| rat_int(n)).collect())
            .collect()
    }

    fn threefold() -> Rc<Lattice> {
        let lattice = ThreefoldLattice::new(
            "product hypersurface",
            vec!["H1".into(), "H2".into(), "H3".into()],
            vec![
                ((0, 1, 2), rat_int(2)),
                ((0, 2, 2), rat_int(1)),
                ((1, 2, 2), rat_int(1)),
            ],
            vec![rat_int(-1), rat_int(-1), rat_int(-1)],
            rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2]]),
            rows(&[&[1, -1, 2], &[-1, 1, 2], &[1, 0, 0], &[0, 1, 0]]),
            vec![
                ("E1".into(), vec![rat_int(1), rat_int(-1), rat_int(2)]),
                ("E2".into(), vec![rat_int(-1), rat_int(1), rat_int(2)]),
                ("H1+H2".into(), vec![rat_int(1), rat_int(1), rat_int(0)]),
            ],
        )
        .expect("threefold lattice");
        Rc::new(Lattice::Threefold(lattice))
    }

    fn dp2_surface() -> Rc<Lattice> {
        let lattice = SurfaceLattice::new(
            "degree-two pair",
            vec!["C".into(), "Z".into()],
            rows(&[&[0, 4], &[4, 0]]),
            vec![rat(-1, 2), rat(-1, 2)],
            vec![],
            rows(&[&[1, 0], &[0, 1]]),
            vec![],
        )
        .expect("surface lattice");
        Rc::new(Lattice::Surface(lattice))
    }

    fn dp2_setup() -> ThreefoldSetup {
        // Sweep of the ample class along a member of |H1 + H2|, restricted
        // to a surface with lattice {C, Z}.
        let pieces = vec![LedgerPiece::new(
            rat_int(0),
            rat_int(1),
            vec![
                parse_poly("1 - u").unwrap(),
                parse_poly("1 - u").unwrap(),
                parse_poly("1").unwrap(),
            ],
            vec![],
        )];
        let restriction = vec![
            vec![rat_int(1), rat_int(1), rat(1, 2)],
            vec![rat_int(0), rat_int(0), rat(1, 2)],
        ];
        ThreefoldSetup::new(
            threefold(),
            dp2_surface(),
            "H1+H2",
            rat_int(1),
            pieces,
            restriction,
            vec![],
        )
        .expect("setup")
    }

    #[test]
    fn divisor_order_for_plane_pair_sweep() {
        // Hand oracle: (1/18) ∫ (A - u(H1+H2))^3 du with triple products
        // 2, 1, 1 gives ∫ (18 - 30u + 14u^2 - 2u^3)/18 = 4/9... the sweep
        // here is along H1 + H2 using derived coordinates.
        let setup = dp2_setup();
        let value = s_threefold_divisor(&setup).expect("order");
        assert_eq!(value, rat(7, 18));
    }

    #[test]
    fn divisor_order_vanishes_for_degenerate_sweep() {
        let setup = ThreefoldSetup::new(
            threefold(),
            dp2_surface(),
            "H1+H2",
            rat_int(0),
            vec![],
            vec![
                vec![rat_int(1), rat_int(1), rat(1, 2)],
                vec![rat_int(0), rat_int(0), rat(1, 2)],
            ],
            vec![],
        )
        .expect("setup");
        assert_eq!(s_threefold_divisor(&setup).unwrap(), BigRational::zero());
    }

    #[test]
    fn ledger_verification_accepts_consistent_data() {
        let setup = dp2_setup();
        let report = verify_threefold_ledger(&setup).expect("report");
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn curve_order_on_plane_pair_surface() {
        // Hand oracle: (1/6) ∫∫ 4(5/2 - 2u - v) dv du over v in
        // [0, 5/2 - 2u], u in [0, 1] equals 31/36.
        let setup = dp2_setup();
        let value = s_w_curve(&setup, "C").expect("curve order");
        assert_eq!(value, rat(31, 36));
    }

    #[test]
    fn point_order_on_plane_pair_surface() {
        // Hand oracle: the pairing with C is constant 2, so the base term
        // is (1/6) ∫ 4 (5/2 - 2u) du = 1 and no correction appears.
        let setup = dp2_setup();
        let point = FlagPoint::exact("generic", &[("Z", 0)]);
        let order = s_w_point(&setup, "C", &point).expect("point order");
        assert_eq!(order.base, rat_int(1));
        assert_eq!(order.correction.value, rat_int(0));
        assert!(order.total.is_exact());
        assert_eq!(order.total.value, rat_int(1));
    }

    #[test]
    fn combiner_takes_minimum_and_flags_boundary() {
        let bound = az_combine(
            &SValue::exact(rat(175, 288)),
            &SValue::exact(rat(31, 36)),
            &SValue::exact(rat_int(1)),
        )
        .expect("combine");
        assert_eq!(bound.bound, rat_int(1));
        assert_eq!(bound.attained, MinTerm::Point);
        assert!(bound.boundary);

        let bound = az_combine(
            &SValue::exact(rat(175, 288)),
            &SValue::exact(rat(8, 9)),
            &SValue::exact(rat(7, 9)),
        )
        .expect("combine");
        assert_eq!(bound.bound, rat(9, 8));
        assert_eq!(bound.attained, MinTerm::Curve);
        assert!(!bound.boundary);
        assert_eq!(bound.refined, rat(9, 8));

        let ones = SValue::exact(rat_int(1));
        let bound = az_combine(&ones, &ones, &ones).expect("combine");
        assert_eq!(bound.bound, rat_int(1));
        assert!(bound.boundary);
    }

    #[test]
    fn combiner_rejects_nonpositive_orders() {
        let err = az_combine(
            &SValue::exact(rat_int(0)),
            &SValue::exact(rat_int(1)),
            &SValue::exact(rat_int(1)),
        )
        .unwrap_err();
        assert!(matches!(err, InvariantError::NotPositive(_)));
    }

    #[test]
    fn reciprocal_bound_algebra() {
        let bound = ReciprocalBound {
            constant: rat(7, 288),
            recip_coeff: rat(80, 81),
        };
        assert_eq!(bound.value_at(&rat_int(1)).unwrap(), rat(2623, 2592));
        assert_eq!(bound.delta_at(&rat_int(1)).unwrap(), rat(2592, 2623));
        assert_eq!(
            bound.delta_at(&rat(15, 13)).unwrap(),
            rat(38880, 34225)
        );
        let delta_fn = bound.delta_fn().unwrap();
        let expected = RationalFn::new(
            parse_poly("2592*t").unwrap(),
            parse_poly("2560 + 63*t").unwrap(),
        )
        .unwrap();
        assert_eq!(delta_fn.num(), expected.num());
        assert_eq!(delta_fn.den(), expected.den());
    }

    #[test]
    fn plain_volume_mode_uses_threshold_times_anticanonical_square() {
        // tau = 1 and (-K)^2 = 2 on the plane-pair surface, ample cube 18:
        // the generic estimate contributes 3/18 * 1 * 2 = 1/3 against
        // 1/delta, and the ledger has no negative parts, so the constant
        // term vanishes.
        let setup = dp2_setup();
        let bound = nemuro_bound(&setup, &BTreeMap::new(), &VolumeMode::Plain).expect("bound");
        assert_eq!(bound.constant, rat_int(0));
        assert_eq!(bound.recip_coeff, rat(1, 3));
        assert_eq!(bound.delta_at(&rat_int(1)).unwrap(), rat_int(3));
    }

    #[test]
    fn two_term_combiner_matches_hand_values() {
        let bound = ReciprocalBound {
            constant: rat(7, 288),
            recip_coeff: rat(80, 81),
        };
        let combined = lemma34_combine(&bound, &rat_int(1), &rat(175, 288)).expect("combine");
        assert_eq!(combined.bound, rat(2592, 2623));
        assert_eq!(combined.attained, MinTerm::Curve);

        // At the crossover delta the curve term reaches 1 exactly.
        let combined =
            lemma34_combine(&bound, &rat(2560, 2529), &rat(175, 288)).expect("combine");
        assert_eq!(combined.refined, rat_int(1));
        assert!(combined.boundary);
    }

    #[test]
    fn interval_minimum_is_certified() {
        // 24/(19 + 8t + t^2) is below 24/(17 + 4t - t^2) and
        // 12(1+t)/(9 + 15t + 3t^2 + t^3) on [0, 1].
        let a = RationalFn::new(
            Poly::from_int(24),
            parse_poly("19 + 8*t + t^2").unwrap(),
        )
        .unwrap();
        let b = RationalFn::new(
            Poly::from_int(24),
            parse_poly("17 + 4*t - t^2").unwrap(),
        )
        .unwrap();
        let c = RationalFn::new(
            parse_poly("12 + 12*t").unwrap(),
            parse_poly("9 + 15*t + 3*t^2 + t^3").unwrap(),
        )
        .unwrap();
        let index = min_on_interval(
            &[b.clone(), a.clone(), c.clone()],
            &Scalar::zero(),
            Some(&Scalar::one()),
        )
        .expect("minimum");
        assert_eq!(index, 1);

        // On the ray t >= 1, the candidate 6(1+t)/(5+6t+3t^2) lies below
        // 3(1+t)/(2+3t).
        let d = RationalFn::new(
            parse_poly("6 + 6*t").unwrap(),
            parse_poly("5 + 6*t + 3*t^2").unwrap(),
        )
        .unwrap();
        let e = RationalFn::new(
            parse_poly("3 + 3*t").unwrap(),
            parse_poly("2 + 3*t").unwrap(),
        )
        .unwrap();
        let index = min_on_interval(&[e, d], &Scalar::one(), None).expect("ray minimum");
        assert_eq!(index, 1);
    }

    #[test]
    fn profile_integral_splits_exactly() {
        // Weight (3-2u)^3 (11-6u)/(3-2u) against the profile with branch
        // (6t^2 + 18t + 13)/(15 + 12t) and breakpoint (-3 + sqrt(21))/6,
        // substituted through t(u) = (u-1)/(3-2u) on [1, 3/2].
        // Numerator is (3-2u)^3 (11-6u) expanded; the common factor 3-2u
        // cancels on construction.
        let weight = RationalFn::new(
            parse_poly("297 - 756*u + 720*u^2 - 304*u^3 + 48*u^4").unwrap(),
            parse_poly("3 - 2*u").unwrap(),
        )
        .unwrap();
        let t_of_u = RationalFn::new(
            parse_poly("u - 1").unwrap(),
            parse_poly("3 - 2*u").unwrap(),
        )
        .unwrap();
        let breakpoint = Scalar::quad(rat(-1, 2), rat(1, 6), 21).unwrap();
        let branch = RationalFn::new(
            parse_poly("13 + 18*t + 6*t^2").unwrap(),
            parse_poly("15 + 12*t").unwrap(),
        )
        .unwrap();
        let profile = DeltaProfile::new(breakpoint, branch).expect("profile");
        let result = profile_weighted_integral(
            &weight,
            &t_of_u,
            &profile,
            &rat_int(1),
            &rat(3, 2),
            &rat(1, 1_000_000_000),
        )
        .expect("integral");

        // Exact head piece in the quadratic field.
        let expected_head = Scalar::quad(rat(94, 147), rat(-1, 49), 21).unwrap();
        assert_eq!(result.head, expected_head);
        // The irrational parts cancel in the total.
        assert_eq!(result.exact, Some(rat(1729, 2352)));
        let (lo, hi) = &result.enclosure;
        assert!(lo <= &rat(1729, 2352) && &rat(1729, 2352) <= hi);
        assert!(hi - lo <= rat(1, 1_000_000_000));
    }

    #[test]
    fn profile_requires_branch_continuity() {
        let breakpoint = Scalar::quad(rat(-1, 2), rat(1, 6), 21).unwrap();
        let branch = RationalFn::new(
            parse_poly("14 + 18*t + 6*t^2").unwrap(),
            parse_poly("15 + 12*t").unwrap(),
        )
        .unwrap();
        assert!(DeltaProfile::new(breakpoint, branch).is_err());
    }

    #[test]
    fn surface_flag_case_on_simple_lattice() {
        // Quadric-pair surface: sweeping the anticanonical class along C
        // gives S(C) = (1/2) ∫ (2 - 2u... hand value: vol((1-u)C + Z/2
        // ... kept simple: L = -K with K^2 = 2, threshold 1/2... use the
        // {C, Z} lattice with L = -K = (C + Z)/2: L - uC pseff while
        // 1/2 - u >= 0; vol = 8(1/2 - u)(1/2) ... = 4(1/2 - u) + ... ;
        // direct evaluation below pins the derived values.
        let surface = dp2_surface();
        let l = DivClass::anticanonical(&surface);
        let c = DivClass::named(&surface, "C").unwrap();
        let case = flag_delta_surface(
            &l,
            &c,
            Some("C"),
            &rat_int(1),
            &[FlagPoint::exact("generic", &[("Z", 0)])],
        )
        .expect("case");
        assert_eq!(case.tau, rat(1, 2));
        // vol((1/2 - u)C + Z/2) = 8(1/2 - u)(1/2) = 4(1/2 - u) hence
        // S_L(C) = (1/2) ∫_0^{1/2} (2 - 4u) du = 1/4.
        assert_eq!(case.s_curve, rat(1, 4));
        // (P(u) . C) = 2 throughout, so the point order is
        // (1/2) ∫_0^{1/2} 4 du = 1.
        assert_eq!(case.per_point[0].1, rat_int(1));
        assert_eq!(case.bound, rat_int(1));
    }

    #[test]
    fn missing_incidence_is_an_error() {
        let setup = dp2_setup();
        // Ledger with a negative part naming a divisor restricted to Z,
        // while the point omits Z from its incidences.
        let pieces = vec![LedgerPiece::new(
            rat_int(0),
            rat_int(1),
            vec![
                parse_poly("1 - u").unwrap(),
                parse_poly("1 - u").unwrap(),
                parse_poly("1").unwrap(),
            ],
            vec![("E2".into(), parse_poly("u").unwrap())],
        )];
        let with_negative = ThreefoldSetup::new(
            setup.threefold().clone(),
            setup.surface().clone(),
            "H1+H2",
            rat_int(1),
            pieces,
            vec![
                vec![rat_int(1), rat_int(1), rat(1, 2)],
                vec![rat_int(0), rat_int(0), rat(1, 2)],
            ],
            vec![RestrictedDivisor {
                divisor: "E2".into(),
                curve: "Z".into(),
                coords: vec![rat_int(0), rat_int(1)],
            }],
        )
        .expect("setup");
        let point = FlagPoint::exact("incomplete", &[]);
        let err = s_w_point(&with_negative, "C", &point).unwrap_err();
        assert!(matches!(err, InvariantError::MissingIncidence(_)));
    }
}
