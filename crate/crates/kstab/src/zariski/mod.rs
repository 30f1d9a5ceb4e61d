//! Zariski decompositions on surfaces, pointwise and in families.
//!
//! A pseudoeffective class `D` on a surface splits uniquely as `D = P + N`
//! with `P` nef, `N` an effective combination of curves whose Gram matrix is
//! negative definite, and `P` orthogonal to every curve in `N`. The volume
//! of `D` is then `P^2`.
//!
//! Three levels of the same computation live here:
//!
//! * [`decompose`] — one class with constant rational coordinates, returning
//!   the decomposition together with a [`DecompositionCertificate`] whose
//!   facts (nef pairings, orthogonality, alternating principal minors,
//!   nonnegative coefficients) are verified before the result is returned;
//! * [`decompose_parametric`] — a class with coordinates polynomial in one
//!   sweep parameter, returning certified cells on which the support is
//!   constant and all data vary polynomially;
//! * [`two_param_chambers`] — a two-parameter family `A(s) - w * C`,
//!   returning outer cells in `s` and, inside each, inner chambers whose
//!   walls are polynomials in `s`, up to the pseudoeffective threshold.
//!
//! Walls are located by exact root isolation, every sign condition is
//! certified on the closed cell (affine-in-inner-variable conditions are
//! checked along both walls), and chamber data are exact polynomials.

use crate::exact::{
    nonneg_on_interval, roots_in_interval, ExactError, PieceFn, PiecewiseFn, Poly, RationalFn,
    Scalar, Var,
};
use crate::lattice::{determinant, solve, DivClass, LatticeError, SurfaceLattice};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::VecDeque;
use std::fmt;

/// Errors from the decomposition engines.
#[derive(Debug, Clone, PartialEq)]
pub enum ZariskiError {
    /// The class admits no Zariski decomposition in the declared cone data
    /// (support not negative definite, a negative coefficient, or a
    /// positive part that fails the nef test).
    NotDecomposable(String),
    /// A sweep cell could not be certified.
    Certification(String),
    /// An inner chamber wall is not polynomial in the outer parameter.
    NonPolynomialWall(String),
    /// Chamber data exceeded the supported degree.
    DegreeTooHigh(String),
    /// Malformed sweep input (wrong variables, empty interval, ...).
    BadSweep(String),
    /// A lattice-level error bubbled up.
    Lattice(LatticeError),
    /// An exact-arithmetic error bubbled up.
    Exact(ExactError),
}

impl fmt::Display for ZariskiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZariskiError::NotDecomposable(msg) => write!(f, "no Zariski decomposition: {msg}"),
            ZariskiError::Certification(msg) => write!(f, "cell certification failed: {msg}"),
            ZariskiError::NonPolynomialWall(msg) => {
                write!(f, "non-polynomial chamber wall: {msg}")
            }
            ZariskiError::DegreeTooHigh(msg) => write!(f, "chamber degree too high: {msg}"),
            ZariskiError::BadSweep(msg) => write!(f, "bad sweep: {msg}"),
            ZariskiError::Lattice(e) => write!(f, "{e}"),
            ZariskiError::Exact(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ZariskiError {}

impl From<LatticeError> for ZariskiError {
    fn from(e: LatticeError) -> Self {
        ZariskiError::Lattice(e)
    }
}

impl From<ExactError> for ZariskiError {
    fn from(e: ExactError) -> Self {
        ZariskiError::Exact(e)
    }
}

/// The verified facts backing one pointwise decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionCertificate {
    /// `P . g` for every declared pseudoeffective-cone generator, in the
    /// order of [`SurfaceLattice::pseff_generators`]; all nonnegative.
    pub nef_pairings: Vec<BigRational>,
    /// `P . C_j` for every support curve; all zero.
    pub orthogonality: Vec<BigRational>,
    /// Leading principal minors of the support Gram matrix; the `k`-th has
    /// sign `(-1)^k`, witnessing negative definiteness.
    pub principal_minors: Vec<BigRational>,
    /// The coefficients of the support curves in `N`; all nonnegative.
    pub coefficients: Vec<BigRational>,
}

/// A pointwise Zariski decomposition `D = P + N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    positive: DivClass,
    support: Vec<usize>,
    coefficients: Vec<BigRational>,
    certificate: DecompositionCertificate,
}

impl Decomposition {
    /// The nef positive part `P`.
    pub fn positive(&self) -> &DivClass {
        &self.positive
    }

    /// Indices of the support curves of `N` in the lattice basis.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Coefficients of `N` parallel to [`Decomposition::support`].
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    /// The negative part `N` as a class.
    pub fn negative(&self) -> DivClass {
        let lattice = self.positive.lattice().clone();
        let n = lattice.rank();
        let mut coords = vec![Poly::zero(); n];
        for (&i, a) in self.support.iter().zip(&self.coefficients) {
            coords[i] = Poly::from_rat(a.clone());
        }
        DivClass::new(lattice, coords).expect("support indices validated")
    }

    pub fn certificate(&self) -> &DecompositionCertificate {
        &self.certificate
    }

    /// The volume `P^2` of the decomposed class.
    pub fn volume(&self) -> Result<BigRational, ZariskiError> {
        let square = self.positive.square()?;
        Ok(square
            .eval_constant()
            .map_err(ZariskiError::Exact)?
            .to_rational("volume")
            .map_err(ZariskiError::Exact)?)
    }
}

/// Solves the support system `sum_j a_j (C_j . C_k) = D . C_k` and checks
/// that the support Gram matrix is negative definite, returning the
/// coefficients and the leading principal minors.
fn solve_support(
    surface: &SurfaceLattice,
    support: &[usize],
    rhs: &[BigRational],
) -> Result<(Vec<BigRational>, Vec<BigRational>), ZariskiError> {
    let gram = surface.gram();
    let sub: Vec<Vec<BigRational>> = support
        .iter()
        .map(|&j| support.iter().map(|&k| gram[j][k].clone()).collect())
        .collect();
    let mut minors = Vec::with_capacity(support.len());
    for k in 1..=support.len() {
        let leading: Vec<Vec<BigRational>> =
            sub[..k].iter().map(|row| row[..k].to_vec()).collect();
        let det = determinant(&leading);
        let expected_positive = k % 2 == 0;
        if det.is_zero() || det.is_positive() != expected_positive {
            return Err(ZariskiError::NotDecomposable(format!(
                "support {{{}}} is not negative definite",
                support
                    .iter()
                    .map(|&j| surface.basis_names()[j].clone())
                    .collect::<Vec<_>>()
                    .join(", ")
            )));
        }
        minors.push(det);
    }
    let coeffs = solve(&sub, rhs).ok_or_else(|| {
        ZariskiError::NotDecomposable("singular support system".into())
    })?;
    Ok((coeffs, minors))
}

/// The Zariski decomposition of a class with constant rational coordinates
/// on a surface lattice, with a verified certificate.
pub fn decompose(d: &DivClass) -> Result<Decomposition, ZariskiError> {
    let lattice = d.lattice().clone();
    let surface = lattice.as_surface()?;
    let coords = d.constant_coords()?;
    let gram = surface.gram();
    let generators = surface.pseff_generators();
    // Pairings of the original class with every basis curve.
    let d_pairings: Vec<BigRational> = (0..surface.rank())
        .map(|k| crate::lattice::dot(&coords, &gram[k].iter().cloned().collect::<Vec<_>>()))
        .collect();
    let mut support: Vec<usize> = Vec::new();
    let (coefficients, minors) = loop {
        let rhs: Vec<BigRational> = support.iter().map(|&k| d_pairings[k].clone()).collect();
        let (coeffs, minors) = if support.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            solve_support(surface, &support, &rhs)?
        };
        // Pairings of P = D - sum a_j C_j with every negative curve.
        let mut violating: Vec<usize> = Vec::new();
        for &i in surface.neg_curves() {
            if support.contains(&i) {
                continue;
            }
            let mut pairing = d_pairings[i].clone();
            for (&j, a) in support.iter().zip(&coeffs) {
                pairing -= a * &gram[j][i];
            }
            if pairing.is_negative() {
                violating.push(i);
            }
        }
        if violating.is_empty() {
            break (coeffs, minors);
        }
        support.extend(violating);
        support.sort_unstable();
    };
    if let Some(bad) = coefficients.iter().find(|a| a.is_negative()) {
        return Err(ZariskiError::NotDecomposable(format!(
            "negative coefficient {bad} in the negative part"
        )));
    }
    // Assemble P and verify the certificate facts.
    let mut p_coords = coords.clone();
    for (&j, a) in support.iter().zip(&coefficients) {
        for (x, g) in p_coords.iter_mut().zip(&basis_vector(surface.rank(), j)) {
            *x -= a * g;
        }
    }
    let orthogonality: Vec<BigRational> = support
        .iter()
        .map(|&j| crate::lattice::quadratic_form(gram, &p_coords, &basis_vector(surface.rank(), j)))
        .collect();
    if orthogonality.iter().any(|x| !x.is_zero()) {
        return Err(ZariskiError::NotDecomposable(
            "positive part is not orthogonal to the support".into(),
        ));
    }
    let nef_pairings: Vec<BigRational> = generators
        .iter()
        .map(|g| crate::lattice::quadratic_form(gram, &p_coords, g))
        .collect();
    if let Some(bad) = nef_pairings.iter().find(|x| x.is_negative()) {
        return Err(ZariskiError::NotDecomposable(format!(
            "positive part pairs negatively ({bad}) with a declared generator; \
             the class may not be pseudoeffective"
        )));
    }
    let square = crate::lattice::quadratic_form(gram, &p_coords, &p_coords);
    if square.is_negative() {
        return Err(ZariskiError::NotDecomposable(
            "positive part has negative self-intersection".into(),
        ));
    }
    let positive = DivClass::from_rationals(&lattice, &p_coords)?;
    Ok(Decomposition {
        positive,
        support,
        coefficients: coefficients.clone(),
        certificate: DecompositionCertificate {
            nef_pairings,
            orthogonality,
            principal_minors: minors,
            coefficients,
        },
    })
}

fn basis_vector(n: usize, i: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n];
    v[i] = BigRational::one();
    v
}

/// One cell of a one-parameter sweep: on `[lo, hi]` the support is constant
/// and positive part, coefficients, and volume are polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    lo: Scalar,
    hi: Scalar,
    support: Vec<usize>,
    coefficients: Vec<Poly>,
    positive: DivClass,
    volume: Poly,
}

impl SweepCell {
    pub fn lo(&self) -> &Scalar {
        &self.lo
    }

    pub fn hi(&self) -> &Scalar {
        &self.hi
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Coefficient polynomials of the support curves, parallel to
    /// [`SweepCell::support`].
    pub fn coefficients(&self) -> &[Poly] {
        &self.coefficients
    }

    pub fn positive(&self) -> &DivClass {
        &self.positive
    }

    /// The volume polynomial `P(s)^2` on this cell.
    pub fn volume(&self) -> &Poly {
        &self.volume
    }
}

/// A certified one-parameter family of Zariski decompositions.
#[derive(Debug, Clone, PartialEq)]
pub struct ParametricDecomposition {
    var: Var,
    cells: Vec<SweepCell>,
}

impl ParametricDecomposition {
    pub fn var(&self) -> Var {
        self.var
    }

    pub fn cells(&self) -> &[SweepCell] {
        &self.cells
    }

    /// The cell containing `x` (cells own their left endpoint; the last
    /// cell also owns its right endpoint).
    pub fn cell_containing(&self, x: &Scalar) -> Option<&SweepCell> {
        self.cells
            .iter()
            .find(|cell| *x >= cell.lo && *x < cell.hi)
            .or_else(|| {
                self.cells
                    .last()
                    .filter(|cell| *x >= cell.lo && *x <= cell.hi)
            })
    }

    /// The volume as a piecewise function of the sweep parameter.
    pub fn volume_piecewise(&self) -> Result<PiecewiseFn, ExactError> {
        let pieces = self
            .cells
            .iter()
            .map(|cell| {
                PieceFn::new(
                    cell.lo.clone(),
                    cell.hi.clone(),
                    RationalFn::from_poly(cell.volume.clone()),
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        PiecewiseFn::new_continuous(pieces, self.var)
    }
}

/// A rational number strictly between two exactly-ordered scalars.
fn rational_between(a: &Scalar, b: &Scalar) -> Result<BigRational, ZariskiError> {
    if *a >= *b {
        return Err(ZariskiError::BadSweep(format!(
            "cannot sample between {a} and {b}"
        )));
    }
    if let (Scalar::Rat(x), Scalar::Rat(y)) = (a, b) {
        return Ok((x + y) / BigRational::from_integer(2.into()));
    }
    let mut eps = BigRational::new(1.into(), 4.into());
    for _ in 0..128 {
        let (_, a_hi) = a.bracket(&eps);
        let (b_lo, _) = b.bracket(&eps);
        if a_hi < b_lo {
            return Ok((&a_hi + &b_lo) / BigRational::from_integer(2.into()));
        }
        eps /= BigRational::from_integer(4.into());
    }
    Err(ZariskiError::BadSweep(format!(
        "could not separate {a} and {b}"
    )))
}

/// Symbolic support coefficients: the (constant) support Gram matrix is
/// inverted once and applied to the polynomial pairings of `d` with the
/// support curves, so each coefficient is a polynomial in the parameters.
fn symbolic_coefficients(
    surface: &SurfaceLattice,
    support: &[usize],
    d: &DivClass,
) -> Result<Vec<Poly>, ZariskiError> {
    if support.is_empty() {
        return Ok(Vec::new());
    }
    let gram = surface.gram();
    let sub: Vec<Vec<BigRational>> = support
        .iter()
        .map(|&j| support.iter().map(|&k| gram[j][k].clone()).collect())
        .collect();
    // Columns of the inverse, one solve per unit vector.
    let k = support.len();
    let mut inverse_cols = Vec::with_capacity(k);
    for i in 0..k {
        let col = solve(&sub, &basis_vector(k, i)).ok_or_else(|| {
            ZariskiError::NotDecomposable("singular support system".into())
        })?;
        inverse_cols.push(col);
    }
    // rhs_k = d . C_{support[k]} as a polynomial.
    let lattice = d.lattice();
    let mut rhs = Vec::with_capacity(k);
    for &j in support {
        let curve = DivClass::basis_element(lattice, j)?;
        rhs.push(d.pair(&curve)?);
    }
    let mut coeffs = Vec::with_capacity(k);
    for j in 0..k {
        let mut a = Poly::zero();
        for (i, r) in rhs.iter().enumerate() {
            a = a.checked_add(&r.scale_rat(&inverse_cols[i][j]))?;
        }
        coeffs.push(a);
    }
    Ok(coeffs)
}

/// All sign conditions certifying a cell with the given support: the
/// support coefficients and the pairings of `P` with every declared
/// pseudoeffective generator.
fn certifying_polys(
    surface: &SurfaceLattice,
    positive: &DivClass,
    coefficients: &[Poly],
) -> Result<Vec<Poly>, ZariskiError> {
    let mut polys: Vec<Poly> = coefficients.to_vec();
    let lattice = positive.lattice();
    for gen in surface.pseff_generators() {
        let g = DivClass::from_rationals(lattice, &gen)?;
        polys.push(positive.pair(&g)?);
    }
    Ok(polys)
}

/// Builds the symbolic cell data for one support: coefficients, positive
/// part, volume, and certifying polynomials. Curves whose coefficient is
/// identically zero are dropped from the support first.
fn lift_support(
    surface: &SurfaceLattice,
    support: Vec<usize>,
    d: &DivClass,
) -> Result<(Vec<usize>, Vec<Poly>, DivClass, Poly, Vec<Poly>), ZariskiError> {
    let mut support = support;
    let coefficients = loop {
        let coeffs = symbolic_coefficients(surface, &support, d)?;
        let zeros: Vec<usize> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| a.is_zero())
            .map(|(i, _)| i)
            .collect();
        if zeros.is_empty() {
            break coeffs;
        }
        for &i in zeros.iter().rev() {
            support.remove(i);
        }
    };
    let lattice = d.lattice();
    let mut positive = d.clone();
    for (&j, a) in support.iter().zip(&coefficients) {
        let curve = DivClass::basis_element(lattice, j)?;
        positive = positive.sub(&curve.scale_poly(a)?)?;
    }
    let volume = positive.square()?;
    let certifying = certifying_polys(surface, &positive, &coefficients)?;
    Ok((support, coefficients, positive, volume, certifying))
}

/// A certified one-parameter sweep of Zariski decompositions of `d` (whose
/// coordinates are polynomials in `var`) over `[lo, hi]`.
///
/// Cell walls are the exact roots of the support coefficients and nef
/// pairings; on each cell every such condition is certified nonnegative.
pub fn decompose_parametric(
    d: &DivClass,
    var: Var,
    lo: &Scalar,
    hi: &Scalar,
) -> Result<ParametricDecomposition, ZariskiError> {
    let lattice = d.lattice().clone();
    let surface = lattice.as_surface()?;
    if *lo >= *hi {
        return Err(ZariskiError::BadSweep(format!(
            "interval [{lo}, {hi}] is empty"
        )));
    }
    for coord in d.coords() {
        if coord.used_vars().iter().any(|&v| v != var) {
            return Err(ZariskiError::BadSweep(format!(
                "coordinates must be polynomials in {} only",
                var.symbol()
            )));
        }
    }
    let mut cells: Vec<SweepCell> = Vec::new();
    let mut cursor = lo.clone();
    while cursor < *hi {
        let cell = next_cell(surface, d, var, &cursor, hi)?;
        cursor = cell.hi.clone();
        cells.push(cell);
    }
    Ok(ParametricDecomposition { var, cells })
}

/// Builds and certifies the sweep cell starting at `cursor`.
fn next_cell(
    surface: &SurfaceLattice,
    d: &DivClass,
    var: Var,
    cursor: &Scalar,
    hi: &Scalar,
) -> Result<SweepCell, ZariskiError> {
    let mut last_err = ZariskiError::Certification(format!("no sample tried after {cursor}"));
    let mut gap = hi.try_sub(cursor).map_err(ZariskiError::Exact)?;
    let half = Scalar::Rat(BigRational::new(1.into(), 2.into()));
    for _ in 0..24 {
        gap = gap.try_mul(&half).map_err(ZariskiError::Exact)?;
        let upper = cursor.try_add(&gap).map_err(ZariskiError::Exact)?;
        let sample = Scalar::Rat(rational_between(cursor, &upper)?);
        let pointwise = match decompose(&d.substitute(var, &sample)?) {
            Ok(p) => p,
            Err(e) => {
                last_err = e;
                continue;
            }
        };
        let (support, coefficients, positive, volume, certifying) =
            lift_support(surface, pointwise.support().to_vec(), d)?;
        // The cell extends to the smallest root of a certifying condition
        // strictly beyond the cursor, or to the end of the sweep.
        let mut wall = hi.clone();
        for poly in &certifying {
            if poly.is_zero() || poly.is_constant() {
                continue;
            }
            for root in roots_in_interval(poly, cursor, hi)? {
                if root > *cursor && root < wall {
                    wall = root;
                }
            }
        }
        let mut ok = true;
        for poly in &certifying {
            if !nonneg_on_interval(poly, cursor, &wall)? {
                ok = false;
                break;
            }
        }
        if !ok {
            last_err = ZariskiError::Certification(format!(
                "support at sample {sample} does not certify on [{cursor}, {wall}]"
            ));
            continue;
        }
        return Ok(SweepCell {
            lo: cursor.clone(),
            hi: wall,
            support,
            coefficients,
            positive,
            volume,
        });
    }
    Err(last_err)
}

/// One inner chamber of a two-parameter family: between the polynomial
/// walls `w_lo(s) <= w <= w_hi(s)` the support is constant and all data are
/// polynomials in both parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Chamber {
    wall_lo: Poly,
    wall_hi: Poly,
    support: Vec<usize>,
    coefficients: Vec<Poly>,
    positive: DivClass,
    volume: Poly,
}

impl Chamber {
    /// The lower wall as a polynomial in the outer parameter.
    pub fn wall_lo(&self) -> &Poly {
        &self.wall_lo
    }

    /// The upper wall as a polynomial in the outer parameter.
    pub fn wall_hi(&self) -> &Poly {
        &self.wall_hi
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn coefficients(&self) -> &[Poly] {
        &self.coefficients
    }

    pub fn positive(&self) -> &DivClass {
        &self.positive
    }

    pub fn volume(&self) -> &Poly {
        &self.volume
    }
}

/// One outer cell: for `s` in `[lo, hi]` the inner sweep runs from `0` to
/// the polynomial threshold, crossing the listed chambers in order.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterCell {
    lo: Scalar,
    hi: Scalar,
    threshold: Poly,
    chambers: Vec<Chamber>,
}

impl OuterCell {
    pub fn lo(&self) -> &Scalar {
        &self.lo
    }

    pub fn hi(&self) -> &Scalar {
        &self.hi
    }

    /// The inner pseudoeffective threshold as a polynomial in the outer
    /// parameter.
    pub fn threshold(&self) -> &Poly {
        &self.threshold
    }

    pub fn chambers(&self) -> &[Chamber] {
        &self.chambers
    }

    /// The chamber containing inner value `w` at outer value `s` (chambers
    /// own their lower wall; the last also owns the threshold).
    pub fn chamber_at(&self, outer: Var, s: &Scalar, w: &Scalar) -> Option<&Chamber> {
        let value = |p: &Poly| p.eval1(outer, s).ok();
        let mut found = None;
        for chamber in &self.chambers {
            let lo = value(&chamber.wall_lo)?;
            let hi = value(&chamber.wall_hi)?;
            if *w >= lo && *w < hi {
                return Some(chamber);
            }
            if *w == hi {
                found = Some(chamber);
            }
        }
        found
    }
}

/// A certified two-parameter chamber decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct ChamberComplex {
    outer: Var,
    inner: Var,
    cells: Vec<OuterCell>,
}

impl ChamberComplex {
    pub fn outer(&self) -> Var {
        self.outer
    }

    pub fn inner(&self) -> Var {
        self.inner
    }

    pub fn cells(&self) -> &[OuterCell] {
        &self.cells
    }

    /// The outer cell containing `s`.
    pub fn cell_containing(&self, s: &Scalar) -> Option<&OuterCell> {
        self.cells
            .iter()
            .find(|cell| *s >= cell.lo && *s < cell.hi)
            .or_else(|| {
                self.cells
                    .last()
                    .filter(|cell| *s >= cell.lo && *s <= cell.hi)
            })
    }
}

/// Degree cap on chamber-engine outputs; data beyond this signals a sweep
/// the engine was not designed for.
const MAX_CHAMBER_DEGREE: u8 = 4;

fn check_degrees(label: &str, polys: &[&Poly]) -> Result<(), ZariskiError> {
    for p in polys {
        for var in [Var::T, Var::U, Var::V] {
            if p.degree_in(var) > MAX_CHAMBER_DEGREE {
                return Err(ZariskiError::DegreeTooHigh(format!(
                    "{label} has degree {} in {}",
                    p.degree_in(var),
                    var.symbol()
                )));
            }
        }
    }
    Ok(())
}

/// The chamber structure of the two-parameter family `d = A(s) - w * C`
/// for `s` in `[lo, hi]` and `w` from `0` to the pseudoeffective threshold
/// of `A(s)` along `C`.
///
/// `d`'s coordinates must be polynomials in `outer` and `inner`, affine in
/// `inner` with constant inner coefficient (the fixed direction `C`).
/// Inner walls must be polynomial in the outer parameter; otherwise a
/// [`ZariskiError::NonPolynomialWall`] is returned.
pub fn two_param_chambers(
    d: &DivClass,
    outer: Var,
    inner: Var,
    lo: &Scalar,
    hi: &Scalar,
) -> Result<ChamberComplex, ZariskiError> {
    let lattice = d.lattice().clone();
    let surface = lattice.as_surface()?;
    if *lo >= *hi {
        return Err(ZariskiError::BadSweep(format!(
            "interval [{lo}, {hi}] is empty"
        )));
    }
    for coord in d.coords() {
        if coord.used_vars().iter().any(|&v| v != outer && v != inner) {
            return Err(ZariskiError::BadSweep(format!(
                "coordinates must be polynomials in {} and {} only",
                outer.symbol(),
                inner.symbol()
            )));
        }
        if coord.degree_in(inner) > 1 {
            return Err(ZariskiError::BadSweep(format!(
                "coordinates must be affine in {}",
                inner.symbol()
            )));
        }
    }
    // The inner direction C = -d(d)/d(inner) must be a constant class.
    let direction_coords: Vec<Poly> = d.coords().iter().map(|c| -&c.derivative(inner)).collect();
    if direction_coords.iter().any(|c| !c.is_constant()) {
        return Err(ZariskiError::BadSweep(format!(
            "the coefficient of {} must be a constant class",
            inner.symbol()
        )));
    }
    let direction = DivClass::new(lattice.clone(), direction_coords)?;
    let base = d.substitute(inner, &Scalar::zero())?;

    let mut queue: VecDeque<(Scalar, Scalar)> = VecDeque::new();
    queue.push_back((lo.clone(), hi.clone()));
    let mut cells: Vec<OuterCell> = Vec::new();
    let mut budget = 512usize;
    while let Some((a, b)) = queue.pop_front() {
        budget = budget.checked_sub(1).ok_or_else(|| {
            ZariskiError::Certification("outer subdivision did not terminate".into())
        })?;
        match process_outer_cell(surface, d, &base, &direction, outer, inner, &a, &b)? {
            CellOutcome::Done(cell) => cells.push(cell),
            CellOutcome::Split(x) => {
                queue.push_back((a, x.clone()));
                queue.push_back((x, b));
            }
        }
    }
    cells.sort_by(|x, y| {
        x.lo.try_cmp(&y.lo)
            .expect("outer cell endpoints are comparable")
    });
    let cells = merge_cells(cells);
    Ok(ChamberComplex {
        outer,
        inner,
        cells,
    })
}

enum CellOutcome {
    Done(OuterCell),
    Split(Scalar),
}

/// Merges adjacent outer cells whose symbolic data agree.
fn merge_cells(cells: Vec<OuterCell>) -> Vec<OuterCell> {
    let mut merged: Vec<OuterCell> = Vec::new();
    for cell in cells {
        if let Some(prev) = merged.last_mut() {
            if prev.hi == cell.lo
                && prev.threshold == cell.threshold
                && prev.chambers == cell.chambers
            {
                prev.hi = cell.hi;
                continue;
            }
        }
        merged.push(cell);
    }
    merged
}

/// Processes one outer interval: samples the inner sweep, lifts it
/// symbolically, and either certifies the cell or reports a split point.
#[allow(clippy::too_many_arguments)]
fn process_outer_cell(
    surface: &SurfaceLattice,
    d: &DivClass,
    base: &DivClass,
    direction: &DivClass,
    outer: Var,
    inner: Var,
    a: &Scalar,
    b: &Scalar,
) -> Result<CellOutcome, ZariskiError> {
    let mut last_err =
        ZariskiError::Certification(format!("no inner sweep succeeded on [{a}, {b}]"));
    // Sample points move toward the left endpoint on retry, in case the
    // previous sample landed exactly on a degeneracy.
    let mut left = a.clone();
    let mut right = b.clone();
    for _ in 0..12 {
        let mid = Scalar::Rat(rational_between(&left, &right)?);
        right = mid.clone();
        let attempt = attempt_outer_cell(surface, d, base, direction, outer, inner, a, b, &mid);
        match attempt {
            Ok(outcome) => return Ok(outcome),
            Err(e @ ZariskiError::NonPolynomialWall(_)) | Err(e @ ZariskiError::DegreeTooHigh(_)) => {
                return Err(e)
            }
            Err(e) => last_err = e,
        }
        left = a.clone();
    }
    Err(last_err)
}

/// One attempt at building the outer cell `[a, b]` from the sample `s0`.
#[allow(clippy::too_many_arguments)]
fn attempt_outer_cell(
    surface: &SurfaceLattice,
    d: &DivClass,
    base: &DivClass,
    direction: &DivClass,
    outer: Var,
    inner: Var,
    a: &Scalar,
    b: &Scalar,
    s0: &Scalar,
) -> Result<CellOutcome, ZariskiError> {
    // Inner sweep at the sample.
    let threshold_at = |s: &Scalar| -> Result<BigRational, ZariskiError> {
        let at = base.substitute(outer, s)?;
        Ok(at.pseff_threshold(direction)?)
    };
    let t0 = threshold_at(s0)?;
    if !t0.is_positive() {
        return Err(ZariskiError::BadSweep(format!(
            "inner threshold vanishes at {s0}"
        )));
    }
    let d_at_s0 = d.substitute(outer, s0)?;
    let sweep = decompose_parametric(&d_at_s0, inner, &Scalar::zero(), &Scalar::Rat(t0.clone()))?;

    // Lift each inner cell symbolically over both parameters.
    let mut chambers_data = Vec::new();
    for cell in sweep.cells() {
        let (support, coefficients, positive, volume, certifying) =
            lift_support(surface, cell.support().to_vec(), d)?;
        check_degrees(
            "chamber data",
            &[&volume]
                .into_iter()
                .chain(&coefficients)
                .chain(positive.coords())
                .collect::<Vec<_>>(),
        )?;
        chambers_data.push((support, coefficients, positive, volume, certifying, cell.hi().clone()));
    }

    // Interior walls: lift each sample wall to a polynomial in the outer
    // parameter via the certifying condition that vanishes there.
    let mut walls: Vec<Poly> = vec![Poly::zero()];
    for i in 0..chambers_data.len() - 1 {
        let wall_sample = &chambers_data[i].5;
        let mut candidates: Vec<Poly> = Vec::new();
        for q in chambers_data[i].4.iter().chain(chambers_data[i + 1].4.iter()) {
            if q.is_zero() {
                continue;
            }
            let at_sample = q
                .substitute(outer, s0)?
                .eval1(inner, wall_sample)
                .map_err(ZariskiError::Exact)?;
            if !at_sample.is_zero() {
                continue;
            }
            let wall = solve_wall(q, outer, inner)?;
            if !candidates.contains(&wall) {
                candidates.push(wall);
            }
        }
        match candidates.len() {
            1 => walls.push(candidates.pop().expect("checked length")),
            0 => {
                return Err(ZariskiError::Certification(format!(
                    "no certifying condition vanishes at the sampled wall {wall_sample}"
                )))
            }
            _ => {
                // Distinct wall branches meet at the sample: degenerate.
                return Err(ZariskiError::Certification(format!(
                    "walls cross at the sample {s0}"
                )))
            }
        }
    }

    // The inner threshold as a polynomial: fitted through exact thresholds
    // at rational samples, then verified as a root curve of the last
    // chamber's volume.
    let s1 = Scalar::Rat(rational_between(s0, b)?);
    let t1 = threshold_at(&s1)?;
    let last_volume = chambers_data.last().expect("at least one chamber").3.clone();
    let threshold = fit_threshold(
        outer,
        &[(s0.clone(), t0.clone()), (s1.clone(), t1.clone())],
        &last_volume,
        inner,
    )
    .or_else(|_| {
        let s2 = Scalar::Rat(rational_between(a, s0)?);
        let t2 = threshold_at(&s2)?;
        fit_threshold(
            outer,
            &[
                (s0.clone(), t0.clone()),
                (s1.clone(), t1.clone()),
                (s2, t2),
            ],
            &last_volume,
            inner,
        )
    })?;
    walls.push(threshold.clone());
    check_degrees("walls", &walls.iter().collect::<Vec<_>>())?;

    // Split candidates: where consecutive walls collide, and where a
    // certifying condition changes sign along a wall.
    let mut split: Option<Scalar> = None;
    let mut consider = |root: Scalar| {
        if root > *a && root < *b {
            match &split {
                Some(s) if *s <= root => {}
                _ => split = Some(root),
            }
        }
    };
    for pair in walls.windows(2) {
        let diff = pair[1].checked_sub(&pair[0])?;
        if diff.is_zero() || diff.is_constant() {
            continue;
        }
        for root in roots_in_interval(&diff, a, b)? {
            consider(root);
        }
    }
    for (k, data) in chambers_data.iter().enumerate() {
        for q in &data.4 {
            if q.is_zero() {
                continue;
            }
            for wall in [&walls[k], &walls[k + 1]] {
                let along = q.subst_poly(inner, wall)?;
                if along.is_zero() || along.is_constant() {
                    continue;
                }
                if let Ok(roots) = roots_in_interval(&along, a, b) {
                    for root in roots {
                        consider(root);
                    }
                }
            }
        }
    }
    if let Some(x) = split {
        return Ok(CellOutcome::Split(x));
    }

    // Certification on the closed cell: walls are ordered and every
    // certifying condition (affine in the inner variable) is nonnegative
    // along both walls of its chamber.
    for pair in walls.windows(2) {
        let diff = pair[1].checked_sub(&pair[0])?;
        if !nonneg_on_interval(&diff, a, b)? {
            return Err(ZariskiError::Certification(
                "inner walls are out of order".into(),
            ));
        }
    }
    for (k, data) in chambers_data.iter().enumerate() {
        for q in &data.4 {
            if q.degree_in(inner) > 1 {
                return Err(ZariskiError::Certification(format!(
                    "condition of degree {} in {} cannot be certified",
                    q.degree_in(inner),
                    inner.symbol()
                )));
            }
            for wall in [&walls[k], &walls[k + 1]] {
                let along = q.subst_poly(inner, wall)?;
                if !nonneg_on_interval(&along, a, b)? {
                    return Err(ZariskiError::Certification(format!(
                        "condition {q} is negative on a wall of chamber {k}"
                    )));
                }
            }
        }
    }

    let chambers = chambers_data
        .into_iter()
        .enumerate()
        .map(|(k, (support, coefficients, positive, volume, _, _))| Chamber {
            wall_lo: walls[k].clone(),
            wall_hi: walls[k + 1].clone(),
            support,
            coefficients,
            positive,
            volume,
        })
        .collect();
    Ok(CellOutcome::Done(OuterCell {
        lo: a.clone(),
        hi: b.clone(),
        threshold,
        chambers,
    }))
}

/// Solves `q(s, w) = 0` for the inner variable: `q` must be affine in it
/// and the wall `-q0/q1` must be a polynomial in the outer parameter.
fn solve_wall(q: &Poly, outer: Var, inner: Var) -> Result<Poly, ZariskiError> {
    if q.degree_in(inner) != 1 {
        return Err(ZariskiError::NonPolynomialWall(format!(
            "condition {q} is not affine in {}",
            inner.symbol()
        )));
    }
    let q1 = q.derivative(inner);
    let q0 = q.substitute(inner, &Scalar::zero())?;
    (-&q0).div_exact(&q1, outer).map_err(|_| {
        ZariskiError::NonPolynomialWall(format!(
            "root of {q} in {} is not polynomial in {}",
            inner.symbol(),
            outer.symbol()
        ))
    })
}

/// Fits the threshold polynomial through exact sample values and verifies
/// that the last chamber's volume vanishes identically along it.
fn fit_threshold(
    outer: Var,
    samples: &[(Scalar, BigRational)],
    last_volume: &Poly,
    inner: Var,
) -> Result<Poly, ZariskiError> {
    // Lagrange interpolation through the sample points.
    let x = Poly::var(outer);
    let mut fitted = Poly::zero();
    for (i, (si, ti)) in samples.iter().enumerate() {
        let mut term = Poly::from_rat(ti.clone());
        for (j, (sj, _)) in samples.iter().enumerate() {
            if i == j {
                continue;
            }
            let denom = si.try_sub(sj).map_err(ZariskiError::Exact)?;
            let factor = x
                .checked_sub(&Poly::constant(sj.clone()))?
                .scale(&denom.recip().map_err(ZariskiError::Exact)?);
            term = term.checked_mul(&factor)?;
        }
        fitted = fitted.checked_add(&term)?;
    }
    let residual = last_volume.subst_poly(inner, &fitted)?;
    if residual.is_zero() {
        Ok(fitted)
    } else {
        Err(ZariskiError::NonPolynomialWall(
            "fitted inner threshold is not a root curve of the boundary volume".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_poly, rat, rat_int};
    use crate::lattice::{Lattice, Relation};
    use std::rc::Rc;

    fn rv(values: &[i64]) -> Vec<BigRational> {
        values.iter().map(|&v| rat_int(v)).collect()
    }

    /// Rank-3 surface with a length-2 fiber `C`, two disjoint (-2)-curves
    /// meeting it, and anticanonical class `2C + e1 + e2`.
    fn weak_dp4() -> Rc<Lattice> {
        let gram = vec![
            rv(&[0, 1, 1]),
            rv(&[1, -2, 0]),
            rv(&[1, 0, -2]),
        ];
        let lat = SurfaceLattice::new(
            "weak-dp4",
            vec!["C".into(), "e1".into(), "e2".into()],
            gram,
            rv(&[-2, -1, -1]),
            vec![1, 2],
            vec![rv(&[1, 0, 0])],
            Vec::new(),
        )
        .unwrap();
        Rc::new(Lattice::Surface(lat))
    }

    /// Rank-5 surface presented by 8 generating curves.
    fn dp5_resolution() -> Rc<Lattice> {
        let gram: Vec<Vec<BigRational>> = [
            [-2, 0, 0, 0, 0, 1, 1, 1],
            [0, -1, 0, 0, 1, 1, 0, 0],
            [0, 0, -1, 0, 1, 0, 1, 0],
            [0, 0, 0, -1, 1, 0, 0, 1],
            [0, 1, 1, 1, -1, 0, 0, 0],
            [1, 1, 0, 0, 0, -1, 0, 0],
            [1, 0, 1, 0, 0, 0, -1, 0],
            [1, 0, 0, 1, 0, 0, 0, -1],
        ]
        .iter()
        .map(|row| row.iter().map(|&v| rat_int(v)).collect())
        .collect();
        let names = ["l0", "l1", "l2", "l3", "e0", "e1", "e2", "e3"]
            .map(String::from)
            .to_vec();
        let lat = SurfaceLattice::new(
            "dp5-resolution",
            names,
            gram,
            rv(&[0, -1, -1, -1, -2, 0, 0, 0]),
            (0..8).collect(),
            Vec::new(),
            vec![Relation {
                lhs: rv(&[0, 1, 0, 0, 1, 0, 0, 0]),
                rhs: rv(&[1, 0, 0, 0, 0, 0, 1, 1]),
            }],
        )
        .unwrap();
        Rc::new(Lattice::Surface(lat))
    }

    #[test]
    fn pointwise_decomposition_with_certificate() {
        let lat = weak_dp4();
        // (3 - u)C + e1 + e2 - vC at (u, v) = (1, 3/2).
        let d = DivClass::from_rationals(&lat, &[rat(1, 2), rat_int(1), rat_int(1)]).unwrap();
        let dec = decompose(&d).unwrap();
        assert_eq!(dec.support(), &[1, 2]);
        assert_eq!(dec.coefficients(), &[rat(3, 4), rat(3, 4)]);
        let p = dec.positive().constant_coords().unwrap();
        assert_eq!(p, vec![rat(1, 2), rat(1, 4), rat(1, 4)]);
        assert_eq!(dec.volume().unwrap(), rat(1, 4));
        let cert = dec.certificate();
        assert!(cert.orthogonality.iter().all(|x| x.is_zero()));
        assert!(cert.nef_pairings.iter().all(|x| !x.is_negative()));
        // Support Gram is diag(-2, -2): minors -2 and 4.
        assert_eq!(cert.principal_minors, vec![rat_int(-2), rat_int(4)]);
    }

    #[test]
    fn non_pseff_classes_are_rejected() {
        let lat = weak_dp4();
        // -C pairs nonnegatively with nothing effective.
        let d = DivClass::from_rationals(&lat, &[rat_int(-1), rat_int(0), rat_int(0)]).unwrap();
        assert!(matches!(
            decompose(&d),
            Err(ZariskiError::NotDecomposable(_))
        ));
    }

    #[test]
    fn one_parameter_sweep_finds_both_cells() {
        // -K - u*e1 on the resolution surface, u in [0, 2]: the (-2)-curve
        // l0 enters immediately, l1 enters at u = 1.
        let lat = dp5_resolution();
        let e1 = DivClass::basis_element(&lat, 5).unwrap();
        let d = DivClass::anticanonical(&lat)
            .sub(&e1.scale_poly(&Poly::var(Var::U)).unwrap())
            .unwrap();
        let sweep =
            decompose_parametric(&d, Var::U, &Scalar::zero(), &Scalar::from(2i64)).unwrap();
        let cells = sweep.cells();
        assert_eq!(cells.len(), 2);
        assert_eq!(cells[0].support(), &[0]);
        assert_eq!(cells[0].coefficients(), &[parse_poly("1/2*u").unwrap()]);
        assert_eq!(*cells[0].hi(), Scalar::from(1i64));
        assert_eq!(cells[1].support(), &[0, 1]);
        assert_eq!(
            cells[1].coefficients(),
            &[parse_poly("1/2*u").unwrap(), parse_poly("u-1").unwrap()]
        );
        // P . e1 drops from (2+u)/2 to (4-u)/2 across the wall.
        let p0 = cells[0].positive().pair(&e1).unwrap();
        let p1 = cells[1].positive().pair(&e1).unwrap();
        assert_eq!(p0, parse_poly("1+1/2*u").unwrap());
        assert_eq!(p1, parse_poly("2-1/2*u").unwrap());
        // Volume is continuous across the wall.
        sweep.volume_piecewise().unwrap();
    }

    #[test]
    fn two_parameter_chambers_match_the_known_structure() {
        // (3-u)C + e1 + e2 - vC for u in [0,1], v in [0, 3-u].
        let lat = weak_dp4();
        let u = Poly::var(Var::U);
        let v = Poly::var(Var::V);
        let c_coord = parse_poly("3-u")
            .unwrap()
            .checked_sub(&v)
            .unwrap();
        let d = DivClass::new(lat.clone(), vec![c_coord, Poly::one(), Poly::one()]).unwrap();
        let complex =
            two_param_chambers(&d, Var::U, Var::V, &Scalar::zero(), &Scalar::from(1i64)).unwrap();
        assert_eq!(complex.cells().len(), 1);
        let cell = &complex.cells()[0];
        assert_eq!(*cell.threshold(), parse_poly("3-u").unwrap());
        let chambers = cell.chambers();
        assert_eq!(chambers.len(), 2);
        assert!(chambers[0].support().is_empty());
        assert_eq!(*chambers[0].wall_hi(), parse_poly("1-u").unwrap());
        assert_eq!(*chambers[0].volume(), parse_poly("8-4*u-4*v").unwrap());
        assert_eq!(chambers[1].support(), &[1, 2]);
        let half_excess = parse_poly("1/2*u+1/2*v-1/2").unwrap();
        assert_eq!(
            chambers[1].coefficients(),
            &[half_excess.clone(), half_excess]
        );
        assert_eq!(
            *chambers[1].volume(),
            parse_poly("9-6*u-6*v+u^2+2*u*v+v^2").unwrap()
        );
        let _ = u;
    }

    #[test]
    fn chamber_lookup_agrees_with_pointwise_decomposition() {
        let lat = weak_dp4();
        let v = Poly::var(Var::V);
        let c_coord = parse_poly("3-u").unwrap().checked_sub(&v).unwrap();
        let d = DivClass::new(lat.clone(), vec![c_coord, Poly::one(), Poly::one()]).unwrap();
        let complex =
            two_param_chambers(&d, Var::U, Var::V, &Scalar::zero(), &Scalar::from(1i64)).unwrap();
        let (su, sv) = (Scalar::Rat(rat(1, 3)), Scalar::Rat(rat(5, 3)));
        let cell = complex.cell_containing(&su).unwrap();
        let chamber = cell.chamber_at(Var::U, &su, &sv).unwrap();
        let symbolic = chamber
            .positive()
            .substitute(Var::U, &su)
            .unwrap()
            .substitute(Var::V, &sv)
            .unwrap();
        let pointwise = decompose(
            &d.substitute(Var::U, &su)
                .unwrap()
                .substitute(Var::V, &sv)
                .unwrap(),
        )
        .unwrap();
        assert_eq!(
            symbolic.constant_coords().unwrap(),
            pointwise.positive().constant_coords().unwrap()
        );
    }
}
