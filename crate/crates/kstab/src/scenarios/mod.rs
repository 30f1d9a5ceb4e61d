//! Self-contained computation scenarios and the bundled registry.
//!
//! A [`Scenario`] is a JSON-serializable description of one geometric
//! setup: an intersection lattice with named classes, curves and points
//! with declared incidences, sweep ledgers restricting a threefold
//! polarization to a surface, parametric polarization families, and a
//! list of requested computations with optional expected values.
//!
//! [`validate_fixture`] certifies the declared data before anything is
//! computed: Gram symmetry, anticanonical degrees, kernel relations,
//! dual graphs, ledger identities, and (for singular surfaces described
//! twice) the pushforward compatibility between a resolution and its
//! contraction.  [`run_scenario`] then executes the requests through the
//! library and checks every result against its expectation.
//!
//! The bundled registry ([`list_fixtures`], [`load_fixture`]) ships the
//! reference inputs replayed by the `verify-paper` command.

use std::collections::BTreeMap;
use std::error::Error;
use std::fmt;
use std::rc::Rc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{parse_poly, parse_scalar, ExactError, Poly, RationalFn, Scalar, Var};
use crate::invariants::{
    az_combine, flag_delta_surface, flag_orders_parametric, lemma34_combine, min_on_interval,
    nemuro_bound, profile_weighted_integral, s_threefold_divisor, s_w_curve, s_w_point,
    verify_threefold_ledger, DeltaProfile, Exactness, FlagDeltaCase, FlagPoint, InvariantError,
    LedgerPiece, OrderWindow, RestrictedDivisor, ScaledPiece, SValue, ThreefoldSetup, VolumeMode,
};
use crate::lattice::{
    DivClass, Lattice, LatticeError, Relation as LinearRelation, SurfaceLattice, ThreefoldLattice,
};

mod fixtures;

/// How far past a ray's endpoint formulas are probed when no upper
/// endpoint is given.  Chamber structures for the bundled families are
/// eventually stable, so any span works; minima on rays are still
/// certified symbolically for the whole ray.
const RAY_SPAN: i64 = 8;

/// Errors from parsing, resolving, or executing a scenario.
#[derive(Debug)]
pub enum ScenarioError {
    /// A scenario document or an embedded literal failed to parse.
    Parse(String),
    /// A requested fixture id is not in the bundled registry.
    UnknownFixture(String),
    /// A name used by a computation is not declared in the scenario.
    UnknownName(String),
    /// The scenario data is structurally unusable for the request.
    BadScenario(String),
    /// An arithmetic or certification failure in the exact layer.
    Exact(ExactError),
    /// A failure in the intersection-lattice layer.
    Lattice(LatticeError),
    /// A failure in the invariant layer.
    Invariant(InvariantError),
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::Parse(msg) => write!(f, "parse error: {msg}"),
            ScenarioError::UnknownFixture(id) => write!(f, "unknown fixture `{id}`"),
            ScenarioError::UnknownName(name) => write!(f, "unknown name: {name}"),
            ScenarioError::BadScenario(msg) => write!(f, "bad scenario: {msg}"),
            ScenarioError::Exact(e) => write!(f, "{e}"),
            ScenarioError::Lattice(e) => write!(f, "{e}"),
            ScenarioError::Invariant(e) => write!(f, "{e}"),
        }
    }
}

impl Error for ScenarioError {
    fn source(&self) -> Option<&(dyn Error + 'static)> {
        match self {
            ScenarioError::Exact(e) => Some(e),
            ScenarioError::Lattice(e) => Some(e),
            ScenarioError::Invariant(e) => Some(e),
            _ => None,
        }
    }
}

impl From<ExactError> for ScenarioError {
    fn from(e: ExactError) -> ScenarioError {
        ScenarioError::Exact(e)
    }
}

impl From<LatticeError> for ScenarioError {
    fn from(e: LatticeError) -> ScenarioError {
        ScenarioError::Lattice(e)
    }
}

impl From<InvariantError> for ScenarioError {
    fn from(e: InvariantError) -> ScenarioError {
        ScenarioError::Invariant(e)
    }
}

fn bad(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::BadScenario(msg.into())
}

fn parse_poly_ctx(text: &str, what: &str) -> Result<Poly, ScenarioError> {
    parse_poly(text).map_err(|e| ScenarioError::Parse(format!("{what} `{text}`: {e}")))
}

fn parse_scalar_ctx(text: &str, what: &str) -> Result<Scalar, ScenarioError> {
    parse_scalar(text).map_err(|e| ScenarioError::Parse(format!("{what} `{text}`: {e}")))
}

fn parse_rat_ctx(text: &str, what: &str) -> Result<BigRational, ScenarioError> {
    Ok(parse_scalar_ctx(text, what)?.to_rational(what)?)
}

fn parse_rat_list(texts: &[String], what: &str) -> Result<Vec<BigRational>, ScenarioError> {
    texts.iter().map(|t| parse_rat_ctx(t, what)).collect()
}

fn var_from_name(name: &str) -> Result<Var, ScenarioError> {
    match name {
        "t" => Ok(Var::T),
        "u" => Ok(Var::U),
        "v" => Ok(Var::V),
        other => Err(ScenarioError::Parse(format!(
            "unknown parameter name `{other}` (use t, u, or v)"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Result values and expectations
// ---------------------------------------------------------------------------

/// A computed or expected value: an exact number (rational or quadratic),
/// a rational function of one parameter, a boolean certificate, or a
/// keyword such as the name of a minimizing term.
#[derive(Debug, Clone)]
pub enum ResultValue {
    /// An exact scalar.
    Number(Scalar),
    /// A rational function, stored in canonical form.
    Function(RationalFn),
    /// A boolean certificate.
    Flag(bool),
    /// A keyword (for example the term attaining a minimum).
    Word(String),
}

impl PartialEq for ResultValue {
    fn eq(&self, other: &ResultValue) -> bool {
        match (self, other) {
            (ResultValue::Number(a), ResultValue::Number(b)) => {
                matches!(a.try_sub(b), Ok(d) if d.sign() == 0)
            }
            // Cross-multiplied comparison: reduced forms can differ in how a
            // constant factor is split between numerator and denominator.
            (ResultValue::Function(a), ResultValue::Function(b)) => {
                match (a.num().checked_mul(b.den()), b.num().checked_mul(a.den())) {
                    (Ok(left), Ok(right)) => left == right,
                    _ => false,
                }
            }
            (ResultValue::Flag(a), ResultValue::Flag(b)) => a == b,
            (ResultValue::Word(a), ResultValue::Word(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for ResultValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResultValue::Number(s) => write!(f, "{s}"),
            ResultValue::Function(r) => write!(f, "{r}"),
            ResultValue::Flag(b) => write!(f, "{b}"),
            ResultValue::Word(w) => write!(f, "{w}"),
        }
    }
}

/// Parses a value literal: `true`/`false`, a scalar such as `31/36` or
/// `-1/2+1/6*sqrt(21)`, a rational function such as
/// `(63*t + 2560)/(2592*t)`, a bare polynomial, or a keyword.
pub fn parse_value(text: &str) -> Result<ResultValue, ScenarioError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(ScenarioError::Parse("empty value literal".into()));
    }
    if t == "true" {
        return Ok(ResultValue::Flag(true));
    }
    if t == "false" {
        return Ok(ResultValue::Flag(false));
    }
    if let Some(body) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        if let Some(split) = body.find(")/(") {
            let num = parse_poly_ctx(&body[..split], "value numerator")?;
            let den = parse_poly_ctx(&body[split + 3..], "value denominator")?;
            return Ok(ResultValue::Function(RationalFn::new(num, den)?));
        }
        let num = parse_poly_ctx(body, "value")?;
        return Ok(ResultValue::Function(RationalFn::from_poly(num)));
    }
    if let Ok(s) = parse_scalar(t) {
        return Ok(ResultValue::Number(s));
    }
    if let Ok(p) = parse_poly(t) {
        return Ok(ResultValue::Function(RationalFn::from_poly(p)));
    }
    if !t.is_empty() && t.chars().all(|c| c.is_ascii_alphabetic()) {
        return Ok(ResultValue::Word(t.to_string()));
    }
    Err(ScenarioError::Parse(format!(
        "cannot interpret value literal `{t}`"
    )))
}

/// The relation an expected value is checked under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// Exact equality; the computed value must also be exact.
    #[serde(rename = "=")]
    Eq,
    /// The computed value is at most the expected one; an upper bound
    /// for the computed value certifies this too.
    #[serde(rename = "<=")]
    Le,
    /// The computed value is at least the expected one; this requires
    /// the computed value to be exact, since an upper bound cannot
    /// certify a lower bound.
    #[serde(rename = ">=")]
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        };
        write!(f, "{text}")
    }
}

fn as_number(value: &ResultValue) -> Option<Scalar> {
    match value {
        ResultValue::Number(s) => Some(s.clone()),
        ResultValue::Function(r) => {
            let num = r.num().eval_constant().ok()?;
            let den = r.den().eval_constant().ok()?;
            num.try_div(&den).ok()
        }
        _ => None,
    }
}

/// Checks a computed value against an expectation, honoring exactness:
/// equality and `>=` demand an exact computation, while `<=` is
/// satisfied by an upper bound as well.
pub fn satisfies(
    computed: &ResultValue,
    exactness: Exactness,
    relation: Relation,
    expected: &ResultValue,
) -> Result<bool, ScenarioError> {
    if let (Some(a), Some(b)) = (as_number(computed), as_number(expected)) {
        let sign = a.try_sub(&b)?.sign();
        return Ok(match relation {
            Relation::Eq => sign == 0 && exactness == Exactness::Exact,
            Relation::Le => sign <= 0,
            Relation::Ge => sign >= 0 && exactness == Exactness::Exact,
        });
    }
    match (computed, expected) {
        (ResultValue::Function(_), ResultValue::Function(_)) => match relation {
            Relation::Eq => Ok(exactness == Exactness::Exact && computed == expected),
            _ => Err(bad(
                "order comparisons between rational functions are not supported",
            )),
        },
        (ResultValue::Flag(a), ResultValue::Flag(b)) => match relation {
            Relation::Eq => Ok(a == b),
            _ => Err(bad("flags support only equality")),
        },
        (ResultValue::Word(a), ResultValue::Word(b)) => match relation {
            Relation::Eq => Ok(a == b),
            _ => Err(bad("keywords support only equality")),
        },
        _ => Ok(false),
    }
}

// ---------------------------------------------------------------------------
// Scenario data model
// ---------------------------------------------------------------------------

fn default_true() -> bool {
    true
}

fn one_literal() -> String {
    "1".into()
}

fn anticanonical_literal() -> String {
    "-K".into()
}

fn default_eps() -> String {
    "1/1000000000".into()
}

/// Whether a lattice carries a surface pairing or threefold triples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    /// Rank-n surface lattice with a Gram matrix.
    Surface,
    /// Rank-n threefold lattice with triple intersection numbers.
    Threefold,
}

/// One `coefficient * class` term of a declared relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    /// A basis name, a derived-class name, or `-K`.
    pub class: String,
    /// Rational coefficient literal.
    pub coeff: String,
}

/// A declared identity `sum(lhs) = sum(rhs)` between named classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSpec {
    /// Left-hand side terms.
    pub lhs: Vec<TermSpec>,
    /// Right-hand side terms.
    pub rhs: Vec<TermSpec>,
}

/// One triple intersection number of a threefold lattice.  Unlisted
/// triples are zero; symmetry is filled in automatically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleSpec {
    /// The three basis classes (repetition allowed).
    pub classes: [String; 3],
    /// Rational value literal.
    pub value: String,
}

/// A named class given by coordinates over the basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivedSpec {
    /// The class's name.
    pub name: String,
    /// Rational coordinates over the basis.
    pub class: Vec<String>,
}

/// An intersection lattice: basis names, the pairing data, the canonical
/// class, and the cone data needed for Zariski decompositions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    /// Label used in diagnostics and cross-references.
    pub name: String,
    /// Surface (Gram matrix) or threefold (triples).
    pub kind: LatticeKind,
    /// Basis class names.
    pub basis: Vec<String>,
    /// Gram matrix rows (surfaces only), rational literals.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<String>>>,
    /// Nonzero triple intersections (threefolds only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub triples: Vec<TripleSpec>,
    /// Coordinates of the canonical class.
    pub canonical: Vec<String>,
    /// Basis names of irreducible curves with negative self-intersection.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub neg_curves: Vec<String>,
    /// Extremal rays of the curve cone (threefolds only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mori_rays: Vec<Vec<String>>,
    /// Extra pseudoeffective generators beyond the negative curves.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eff_generators: Vec<Vec<String>>,
    /// Named classes derived from the basis.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derived: Vec<DerivedSpec>,
    /// Numerically trivial combinations (surface kernel relations);
    /// validated by pairing against every basis class.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<RelationSpec>,
    /// Coordinatewise identities between named classes.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub identities: Vec<RelationSpec>,
    /// Expected anticanonical self-intersection (surfaces).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_square: Option<String>,
    /// Expected anticanonical triple self-intersection (threefolds).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_cube: Option<String>,
}

impl LatticeSpec {
    /// Coordinates of a named class: `-K`, a basis name, or a derived
    /// class name.
    fn named_coords(&self, name: &str) -> Result<Option<Vec<BigRational>>, ScenarioError> {
        if name == "-K" {
            let ks = parse_rat_list(&self.canonical, "canonical class")?;
            return Ok(Some(ks.iter().map(|k| -k).collect()));
        }
        if let Some(i) = self.basis.iter().position(|b| b == name) {
            let mut v = vec![BigRational::zero(); self.basis.len()];
            v[i] = BigRational::one();
            return Ok(Some(v));
        }
        match self.derived.iter().find(|d| d.name == name) {
            Some(d) => Ok(Some(parse_rat_list(&d.class, "derived class")?)),
            None => Ok(None),
        }
    }

    /// Resolves a sum of terms to coordinates over the basis.
    fn combo(&self, terms: &[TermSpec]) -> Result<Vec<BigRational>, ScenarioError> {
        let mut acc = vec![BigRational::zero(); self.basis.len()];
        for term in terms {
            let coords = self.named_coords(&term.class)?.ok_or_else(|| {
                ScenarioError::UnknownName(format!(
                    "class `{}` in lattice `{}`",
                    term.class, self.name
                ))
            })?;
            let c = parse_rat_ctx(&term.coeff, "term coefficient")?;
            for (a, x) in acc.iter_mut().zip(&coords) {
                *a += &c * x;
            }
        }
        Ok(acc)
    }

    /// Builds the lattice.
    pub fn build(&self) -> Result<Rc<Lattice>, ScenarioError> {
        let canonical = parse_rat_list(&self.canonical, "canonical class")?;
        let eff = self
            .eff_generators
            .iter()
            .map(|g| parse_rat_list(g, "effective generator"))
            .collect::<Result<Vec<_>, _>>()?;
        match self.kind {
            LatticeKind::Surface => {
                if !self.triples.is_empty() || !self.mori_rays.is_empty() {
                    return Err(bad(format!(
                        "surface lattice `{}` cannot declare triples or mori rays",
                        self.name
                    )));
                }
                let rows = self.gram.as_ref().ok_or_else(|| {
                    bad(format!("surface lattice `{}` needs a gram matrix", self.name))
                })?;
                let gram = rows
                    .iter()
                    .map(|r| parse_rat_list(r, "gram entry"))
                    .collect::<Result<Vec<_>, _>>()?;
                let neg = self
                    .neg_curves
                    .iter()
                    .map(|n| {
                        self.basis.iter().position(|b| b == n).ok_or_else(|| {
                            ScenarioError::UnknownName(format!(
                                "negative curve `{n}` in lattice `{}`",
                                self.name
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let relations = self
                    .relations
                    .iter()
                    .map(|r| {
                        Ok(LinearRelation {
                            lhs: self.combo(&r.lhs)?,
                            rhs: self.combo(&r.rhs)?,
                        })
                    })
                    .collect::<Result<Vec<_>, ScenarioError>>()?;
                Ok(Rc::new(Lattice::Surface(SurfaceLattice::new(
                    self.name.clone(),
                    self.basis.clone(),
                    gram,
                    canonical,
                    neg,
                    eff,
                    relations,
                )?)))
            }
            LatticeKind::Threefold => {
                if self.gram.is_some() || !self.neg_curves.is_empty() {
                    return Err(bad(format!(
                        "threefold lattice `{}` cannot declare a gram matrix or negative curves",
                        self.name
                    )));
                }
                let triples = self
                    .triples
                    .iter()
                    .map(|t| {
                        let mut idx = [0usize; 3];
                        for (slot, class) in idx.iter_mut().zip(&t.classes) {
                            *slot = self.basis.iter().position(|b| b == class).ok_or_else(|| {
                                ScenarioError::UnknownName(format!(
                                    "class `{class}` in lattice `{}`",
                                    self.name
                                ))
                            })?;
                        }
                        let value = parse_rat_ctx(&t.value, "triple intersection")?;
                        Ok(((idx[0], idx[1], idx[2]), value))
                    })
                    .collect::<Result<Vec<_>, ScenarioError>>()?;
                let mori = self
                    .mori_rays
                    .iter()
                    .map(|r| parse_rat_list(r, "extremal ray"))
                    .collect::<Result<Vec<_>, _>>()?;
                let derived = self
                    .derived
                    .iter()
                    .map(|d| Ok((d.name.clone(), parse_rat_list(&d.class, "derived class")?)))
                    .collect::<Result<Vec<_>, ScenarioError>>()?;
                Ok(Rc::new(Lattice::Threefold(ThreefoldLattice::new(
                    self.name.clone(),
                    self.basis.clone(),
                    triples,
                    canonical,
                    mori,
                    eff,
                    derived,
                )?)))
            }
        }
    }
}

/// A named curve class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    /// The curve's name.
    pub name: String,
    /// Lattice the class lives on; defaults to the main lattice.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<String>,
    /// Rational coordinates.
    pub class: Vec<String>,
}

/// A named point on a curve, with declared incidence multiplicities
/// against other curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    /// The point's name.
    pub name: String,
    /// The curve carrying the point.
    pub on: String,
    /// Multiplicity of each named curve at the point.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub incidence: BTreeMap<String, String>,
    /// Whether the incidences are exact; worst-case assumptions make
    /// every derived order an upper bound.
    #[serde(default = "default_true")]
    pub exact: bool,
}

/// One flag case on a surface: a sweep along a curve with candidate
/// points, combined into a local bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagCaseSpec {
    /// The curve swept along.
    pub curve: String,
    /// Polarization to sweep; defaults to the anticanonical class.
    #[serde(default = "anticanonical_literal")]
    pub polarization: String,
    /// Log discrepancy of the curve (1 on a smooth surface).
    #[serde(default = "one_literal")]
    pub a_curve: String,
    /// Names of declared candidate points on the curve.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<String>,
}

/// One negative-part entry of a ledger piece.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NegativeSpec {
    /// Name of the subtracted divisor on the ambient lattice.
    pub divisor: String,
    /// Polynomial coefficient in the sweep parameter `u`.
    pub coefficient: String,
}

/// One piece of a sweep ledger: on `[lo, hi]` the nef part has the given
/// coordinates and the named divisors are subtracted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    /// Lower endpoint, a rational literal.
    pub lo: String,
    /// Upper endpoint.
    pub hi: String,
    /// Nef-part coordinates, polynomials in `u`.
    pub positive: Vec<String>,
    /// Subtracted divisors with polynomial coefficients.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub negative: Vec<NegativeSpec>,
}

/// The restriction of an ambient divisor to the swept surface, recorded
/// with the curve it restricts to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictedSpec {
    /// Name of the ambient divisor.
    pub divisor: String,
    /// Name of the curve the divisor cuts on the surface.
    pub curve: String,
    /// Surface coordinates of the restricted class.
    pub class: Vec<String>,
}

/// A sweep ledger: the anticanonical class minus `u` times a named
/// surface, decomposed piecewise, together with the restriction map to
/// that surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Name the computations refer to this sweep by.
    pub name: String,
    /// The surface's own intersection lattice.
    pub surface: LatticeSpec,
    /// Name of the swept class on the main lattice.
    pub s_class: String,
    /// Pseudoeffective threshold of the sweep (revalidated).
    pub tau: String,
    /// The decomposition pieces covering `[0, tau]`.
    pub pieces: Vec<PieceSpec>,
    /// Restriction matrix: one row of main-lattice coefficients per
    /// surface basis class.
    pub restriction: Vec<Vec<String>>,
    /// Restrictions of ambient divisors appearing in negative parts.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub restricted: Vec<RestrictedSpec>,
    /// Curves named on the surface lattice.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<CurveSpec>,
    /// Points on surface curves, for point-level orders.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointSpec>,
}

/// A polarization depending polynomially on an outer parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    /// Name the computations refer to this family by.
    pub name: String,
    /// Lattice the family lives on; defaults to the main lattice.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<String>,
    /// The outer parameter name (`t` or `v`; `u` is the sweep variable).
    pub var: String,
    /// Coordinates as polynomials in the outer parameter.
    pub coords: Vec<String>,
    /// Lower end of the declared parameter box.
    pub lo: String,
    /// Upper end of the box; absent for an unbounded ray.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<String>,
}

/// A vertex of a dual graph: a curve name with its self-intersection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    /// The curve's basis name.
    pub name: String,
    /// Self-intersection, `-1` or `-2`.
    pub kind: i64,
}

/// The dual graph of a curve configuration; validated against the Gram
/// matrix (edges are simple transverse intersections).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    /// One vertex per basis curve.
    pub vertices: Vec<VertexSpec>,
    /// Unordered intersection edges.
    pub edges: Vec<[String; 2]>,
}

/// A link from a singular surface to its minimal resolution, with the
/// contracted curves and the correspondence of the remaining basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientSpec {
    /// Fixture id of the resolution scenario.
    pub resolution: String,
    /// Names of the contracted curves upstairs.
    pub contracted: Vec<String>,
    /// Pairs `[downstairs name, upstairs name]` covering the whole
    /// downstairs basis.
    pub correspondence: Vec<[String; 2]>,
}

/// A scaled-comparison piece: on `[lo, hi]` the witness
/// `lambda * (-K_S) - (restricted nef part)` must be pseudoeffective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaledPieceSpec {
    /// Lower endpoint.
    pub lo: String,
    /// Upper endpoint.
    pub hi: String,
    /// The comparison factor, a polynomial in `u`.
    pub lambda: String,
}

/// A delta-profile volume estimate composed with a reparametrization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    /// Numerator of the reciprocal bound, a polynomial in `t`.
    pub recip_num: String,
    /// Denominator of the reciprocal bound.
    pub recip_den: String,
    /// The reparametrization `t(u)`, a polynomial in `u`.
    pub t_of_u: String,
    /// Lower end of the admissible `t` range.
    pub t_lo: String,
    /// Upper end of the admissible `t` range.
    pub t_hi: String,
}

/// How swept volumes are bounded inside a local-bound computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ModeSpec {
    /// Bound every swept volume by the surface anticanonical volume.
    #[serde(rename = "plain")]
    Plain,
    /// Bound by `(lambda(u))^3` times the anticanonical volume, with a
    /// certified pseudoeffective witness per piece.
    #[serde(rename = "scaled")]
    Scaled(Vec<ScaledPieceSpec>),
    /// Bound through a reciprocal profile composed with `t(u)`.
    #[serde(rename = "profile")]
    Profile(ProfileSpec),
}

// ---------------------------------------------------------------------------
// Computations
// ---------------------------------------------------------------------------

/// Which part of a point-order computation to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointPart {
    /// Base plus correction.
    #[default]
    Total,
    /// The squared-pairing part.
    Base,
    /// The incidence correction.
    Correction,
}

/// Which part of a combined bound to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundPart {
    /// The full minimum.
    #[default]
    Bound,
    /// The two-term refinement before the divisor term.
    Refined,
    /// Which term attains the minimum.
    Attained,
    /// Whether the bound sits exactly at `1`.
    Boundary,
}

/// Which part of a local volume-comparison bound to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NemuroPart {
    /// The additive ledger constant.
    Constant,
    /// The coefficient of the reciprocal term.
    Coefficient,
    /// The bound as a rational function of the surface delta.
    Function,
    /// The implied delta lower bound as a rational function.
    DeltaFunction,
}

/// Which part of a profiled tail integral to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailPart {
    /// Where the reparametrization crosses the profile breakpoint.
    Split,
    /// The closed-form head integral (up to the crossing).
    Head,
    /// The exact total, when head and tail cancel to a rational.
    Exact,
    /// The exact total plus a declared constant.
    Chain,
}

/// Arguments naming just a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRef {
    /// The sweep's name.
    pub sweep: String,
}

/// Arguments naming a sweep and a curve on its surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepCurveArgs {
    /// The sweep's name.
    pub sweep: String,
    /// Basis name of the flag curve on the surface.
    pub curve: String,
}

/// Arguments for a point-level order over a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPointArgs {
    /// The sweep's name.
    pub sweep: String,
    /// Basis name of the flag curve.
    pub curve: String,
    /// Declared point name.
    pub point: String,
    /// Which part to report.
    #[serde(default)]
    pub part: PointPart,
}

/// Arguments for the three-term combined local bound over a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AzArgs {
    /// The sweep's name.
    pub sweep: String,
    /// Basis name of the flag curve.
    pub curve: String,
    /// Declared point name.
    pub point: String,
    /// Which part to report.
    #[serde(default)]
    pub part: BoundPart,
}

/// Arguments for a pseudoeffective threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdArgs {
    /// The swept class.
    pub class: String,
    /// The direction subtracted from it.
    pub along: String,
    /// Lattice both live on; defaults to the main lattice.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<String>,
}

/// Arguments naming a declared flag case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseRef {
    /// The case's curve.
    pub curve: String,
}

/// Arguments naming a flag case and one of its points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CasePointArgs {
    /// The case's curve.
    pub curve: String,
    /// The point's name.
    pub point: String,
}

/// Arguments for the minimum over all declared flag cases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDeltaArgs {}

/// Arguments for a local volume-comparison bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NemuroArgs {
    /// The sweep's name.
    pub sweep: String,
    /// Log canonical thresholds of the pairs cut by the subtracted
    /// divisors, keyed by the ledger's divisor names.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub lct: BTreeMap<String, String>,
    /// The volume estimate to use.
    pub mode: ModeSpec,
    /// Which part to report.
    pub part: NemuroPart,
}

/// Arguments combining a volume-comparison bound with a surface delta.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombineArgs {
    /// The sweep's name.
    pub sweep: String,
    /// Log canonical thresholds, as in [`NemuroArgs`].
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub lct: BTreeMap<String, String>,
    /// The volume estimate to use.
    pub mode: ModeSpec,
    /// The surface delta to substitute.
    pub delta: String,
    /// Which part to report.
    #[serde(default)]
    pub part: BoundPart,
}

/// Arguments selecting one window of a parametric sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowArgs {
    /// The family's name.
    pub family: String,
    /// Basis name of the flag curve.
    pub curve: String,
    /// A declared point; absent for the curve-level order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    /// Window lower endpoint in the outer parameter.
    pub lo: String,
    /// Window upper endpoint; absent for a ray.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<String>,
}

/// Arguments evaluating a window order at one parameter value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowValueArgs {
    /// The family's name.
    pub family: String,
    /// Basis name of the flag curve.
    pub curve: String,
    /// A declared point; absent for the curve-level order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    /// Window lower endpoint.
    pub lo: String,
    /// Window upper endpoint; absent for a ray.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<String>,
    /// Where to evaluate.
    pub at: String,
}

/// One candidate of a certified minimum: a reciprocal order
/// `a / S(...)` from a family window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateSpec {
    /// The family's name.
    pub family: String,
    /// Basis name of the flag curve.
    pub curve: String,
    /// A declared point; absent for the curve-level order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    /// Numerator of the reciprocal (a log discrepancy).
    #[serde(default = "one_literal")]
    pub a: String,
}

/// Arguments for a certified minimum of reciprocal orders over a window
/// or a ray.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifiedMinArgs {
    /// The candidates to compare.
    pub candidates: Vec<CandidateSpec>,
    /// Window lower endpoint.
    pub lo: String,
    /// Window upper endpoint; absent certifies the minimum on the ray.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<String>,
}

/// Arguments for a profile-weighted integral with an irrational
/// breakpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileTailArgs {
    /// Weight numerator, a polynomial in `u`.
    pub weight_num: String,
    /// Weight denominator.
    pub weight_den: String,
    /// Constant factor applied to the weight.
    #[serde(default = "one_literal")]
    pub scale: String,
    /// Numerator of the reparametrization `t(u)`.
    pub t_of_u_num: String,
    /// Denominator of the reparametrization.
    pub t_of_u_den: String,
    /// Profile breakpoint (may be quadratic-irrational).
    pub breakpoint: String,
    /// Numerator of the profile branch below the breakpoint.
    pub branch_num: String,
    /// Denominator of the branch.
    pub branch_den: String,
    /// Integration lower endpoint.
    pub lo: String,
    /// Integration upper endpoint.
    pub hi: String,
    /// Constant added for the `chain` part.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub add: Option<String>,
    /// Width of the certifying numeric enclosure.
    #[serde(default = "default_eps")]
    pub eps: String,
    /// Which part to report.
    pub part: TailPart,
}

/// Arguments naming one class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassRef {
    /// The class's name.
    pub class: String,
    /// Lattice it lives on; defaults to the main lattice.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<String>,
}

/// Arguments naming three classes on the main lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleArgs {
    /// First class.
    pub a: String,
    /// Second class.
    pub b: String,
    /// Third class.
    pub c: String,
}

/// A requested computation.  Serialized with the operation name as the
/// single key, for example `{"s_w_curve": {"sweep": "H1", "curve": "e1"}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum OpSpec {
    /// Expected vanishing order of the swept divisor on the threefold.
    #[serde(rename = "s_threefold")]
    SThreefold(SweepRef),
    /// Runs the full ledger certification and reports pass/fail.
    #[serde(rename = "ledger_check")]
    LedgerCheck(SweepRef),
    /// Curve-level order of the restricted filtration.
    #[serde(rename = "s_w_curve")]
    SWCurve(SweepCurveArgs),
    /// Point-level order of the doubly restricted filtration.
    #[serde(rename = "s_w_point")]
    SWPoint(SweepPointArgs),
    /// Three-term minimum bound from divisor, curve, and point orders.
    #[serde(rename = "az_combine")]
    AzCombine(AzArgs),
    /// Pseudoeffective threshold of one class along another.
    #[serde(rename = "pseff_threshold")]
    PseffThreshold(ThresholdArgs),
    /// Curve-level order of a declared surface flag case.
    #[serde(rename = "case_curve")]
    CaseCurve(CaseRef),
    /// Point-level order of a declared surface flag case.
    #[serde(rename = "case_point")]
    CasePoint(CasePointArgs),
    /// Largest point-level order among a case's declared points.
    #[serde(rename = "case_worst")]
    CaseWorst(CaseRef),
    /// The case's combined bound `min(a / S(curve), 1 / worst point)`.
    #[serde(rename = "case_bound")]
    CaseBound(CaseRef),
    /// Minimum of the combined bounds over all declared flag cases.
    #[serde(rename = "surface_delta")]
    SurfaceDelta(SurfaceDeltaArgs),
    /// Local volume-comparison bound over a sweep.
    #[serde(rename = "nemuro")]
    Nemuro(NemuroArgs),
    /// Volume-comparison bound combined with a surface delta.
    #[serde(rename = "lemma34_combine")]
    Lemma34(CombineArgs),
    /// Curve- or point-level order of a parametric family, as a
    /// rational function on one window.
    #[serde(rename = "window_orders")]
    WindowOrders(WindowArgs),
    /// A window order evaluated at one parameter value.
    #[serde(rename = "window_value")]
    WindowValue(WindowValueArgs),
    /// Certified minimum of reciprocal orders over a window or ray.
    #[serde(rename = "certified_min")]
    CertifiedMin(CertifiedMinArgs),
    /// Profile-weighted integral with an exact head and enclosure tail.
    #[serde(rename = "profile_tail")]
    ProfileTail(ProfileTailArgs),
    /// Triple self-intersection of a class.
    #[serde(rename = "cube")]
    Cube(ClassRef),
    /// Triple intersection of three classes.
    #[serde(rename = "triple")]
    Triple(TripleArgs),
}

impl OpSpec {
    /// The operation's serialized name.
    pub fn kind(&self) -> &'static str {
        match self {
            OpSpec::SThreefold(_) => "s_threefold",
            OpSpec::LedgerCheck(_) => "ledger_check",
            OpSpec::SWCurve(_) => "s_w_curve",
            OpSpec::SWPoint(_) => "s_w_point",
            OpSpec::AzCombine(_) => "az_combine",
            OpSpec::PseffThreshold(_) => "pseff_threshold",
            OpSpec::CaseCurve(_) => "case_curve",
            OpSpec::CasePoint(_) => "case_point",
            OpSpec::CaseWorst(_) => "case_worst",
            OpSpec::CaseBound(_) => "case_bound",
            OpSpec::SurfaceDelta(_) => "surface_delta",
            OpSpec::Nemuro(_) => "nemuro",
            OpSpec::Lemma34(_) => "lemma34_combine",
            OpSpec::WindowOrders(_) => "window_orders",
            OpSpec::WindowValue(_) => "window_value",
            OpSpec::CertifiedMin(_) => "certified_min",
            OpSpec::ProfileTail(_) => "profile_tail",
            OpSpec::Cube(_) => "cube",
            OpSpec::Triple(_) => "triple",
        }
    }
}

/// An expected value with the relation it is checked under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectSpec {
    /// The relation.
    pub relation: Relation,
    /// The expected value literal.
    pub value: String,
}

/// A named computation with an optional expectation and provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Computation {
    /// Name reported for this entry.
    pub name: String,
    /// The operation to run.
    pub op: OpSpec,
    /// The expected value, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<ExpectSpec>,
    /// Where the expected value comes from: `stated` for values quoted
    /// from the source argument, `derived` for values established by an
    /// independent calculation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

/// A complete scenario document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Unique identifier.
    pub id: String,
    /// One-line description of the configuration.
    pub description: String,
    /// The main intersection lattice.
    pub lattice: LatticeSpec,
    /// Additional lattices (for example a blowup of the main surface).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aux_lattices: Vec<LatticeSpec>,
    /// Named curve classes.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<CurveSpec>,
    /// Named points with incidences.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointSpec>,
    /// Declared surface flag cases.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<FlagCaseSpec>,
    /// Sweep ledgers against the main (threefold) lattice.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ledger: Vec<SweepSpec>,
    /// Parametric polarization families.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub family: Vec<FamilySpec>,
    /// Dual graph of the basis configuration, if declared.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_graph: Option<GraphSpec>,
    /// Link to a resolution fixture, if this surface is singular.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<QuotientSpec>,
    /// The computations to run.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub compute: Vec<Computation>,
}

impl Scenario {
    /// Parses a scenario from JSON, rejecting unknown keys.
    pub fn from_json(text: &str) -> Result<Scenario, ScenarioError> {
        serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))
    }

    /// Serializes the scenario as pretty-printed JSON with stable field
    /// order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialization is infallible")
    }
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

/// A scenario with its lattices built, resolving names for the
/// computation engine.
pub struct Workspace<'a> {
    scenario: &'a Scenario,
    main: Rc<Lattice>,
    aux: BTreeMap<String, Rc<Lattice>>,
}

impl<'a> Workspace<'a> {
    /// Builds the main and auxiliary lattices.
    pub fn new(scenario: &'a Scenario) -> Result<Workspace<'a>, ScenarioError> {
        let main = scenario.lattice.build()?;
        let mut aux = BTreeMap::new();
        for spec in &scenario.aux_lattices {
            aux.insert(spec.name.clone(), spec.build()?);
        }
        Ok(Workspace {
            scenario,
            main,
            aux,
        })
    }

    /// The main lattice.
    pub fn main(&self) -> &Rc<Lattice> {
        &self.main
    }

    /// Resolves a lattice by name; `None` or the main lattice's own
    /// name yield the main lattice, anything else an auxiliary one.
    pub fn lattice(&self, name: Option<&str>) -> Result<&Rc<Lattice>, ScenarioError> {
        match name {
            None => Ok(&self.main),
            Some(n) if n == self.scenario.lattice.name => Ok(&self.main),
            Some(n) => self
                .aux
                .get(n)
                .ok_or_else(|| ScenarioError::UnknownName(format!("lattice `{n}`"))),
        }
    }

    fn lattice_spec(&self, name: Option<&str>) -> Result<&'a LatticeSpec, ScenarioError> {
        match name {
            None => Ok(&self.scenario.lattice),
            Some(n) if n == self.scenario.lattice.name => Ok(&self.scenario.lattice),
            Some(n) => self
                .scenario
                .aux_lattices
                .iter()
                .find(|l| l.name == n)
                .ok_or_else(|| ScenarioError::UnknownName(format!("lattice `{n}`"))),
        }
    }

    /// Resolves a class name on a lattice: `-K`, a declared curve, a
    /// basis name, or a derived class.
    pub fn class(&self, lattice: Option<&str>, name: &str) -> Result<DivClass, ScenarioError> {
        let lat = self.lattice(lattice)?;
        if name == "-K" {
            return Ok(DivClass::anticanonical(lat));
        }
        let owner = lattice.unwrap_or(&self.scenario.lattice.name);
        for curve in &self.scenario.curves {
            let home = curve.lattice.as_deref().unwrap_or(&self.scenario.lattice.name);
            if home == owner && curve.name == name {
                let coords = parse_rat_list(&curve.class, "curve class")?;
                return Ok(DivClass::from_rationals(lat, &coords)?);
            }
        }
        let spec = self.lattice_spec(lattice)?;
        if let Some(coords) = spec.named_coords(name)? {
            return Ok(DivClass::from_rationals(lat, &coords)?);
        }
        Err(ScenarioError::UnknownName(format!(
            "class `{name}` on lattice `{}`",
            lat.label()
        )))
    }

    fn sweep_spec(&self, name: &str) -> Result<&'a SweepSpec, ScenarioError> {
        self.scenario
            .ledger
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| ScenarioError::UnknownName(format!("sweep `{name}`")))
    }

    /// Builds the setup for a named sweep.
    pub fn sweep(&self, name: &str) -> Result<(ThreefoldSetup, &'a SweepSpec), ScenarioError> {
        let spec = self.sweep_spec(name)?;
        let surface = spec.surface.build()?;
        let tau = parse_rat_ctx(&spec.tau, "sweep threshold")?;
        let mut pieces = Vec::new();
        for piece in &spec.pieces {
            let lo = parse_rat_ctx(&piece.lo, "piece endpoint")?;
            let hi = parse_rat_ctx(&piece.hi, "piece endpoint")?;
            let positive = piece
                .positive
                .iter()
                .map(|p| parse_poly_ctx(p, "nef coordinate"))
                .collect::<Result<Vec<_>, _>>()?;
            let negative = piece
                .negative
                .iter()
                .map(|n| {
                    Ok((
                        n.divisor.clone(),
                        parse_poly_ctx(&n.coefficient, "negative coefficient")?,
                    ))
                })
                .collect::<Result<Vec<_>, ScenarioError>>()?;
            pieces.push(LedgerPiece::new(lo, hi, positive, negative));
        }
        let restriction = spec
            .restriction
            .iter()
            .map(|row| parse_rat_list(row, "restriction row"))
            .collect::<Result<Vec<_>, _>>()?;
        let restricted = spec
            .restricted
            .iter()
            .map(|r| {
                Ok(RestrictedDivisor {
                    divisor: r.divisor.clone(),
                    curve: r.curve.clone(),
                    coords: parse_rat_list(&r.class, "restricted class")?,
                })
            })
            .collect::<Result<Vec<_>, ScenarioError>>()?;
        let setup = ThreefoldSetup::new(
            self.main.clone(),
            surface,
            &spec.s_class,
            tau,
            pieces,
            restriction,
            restricted,
        )?;
        Ok((setup, spec))
    }

    fn point_spec(
        &self,
        sweep: Option<&'a SweepSpec>,
        name: &str,
    ) -> Result<&'a PointSpec, ScenarioError> {
        if let Some(sw) = sweep {
            if let Some(p) = sw.points.iter().find(|p| p.name == name) {
                return Ok(p);
            }
        }
        self.scenario
            .points
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| ScenarioError::UnknownName(format!("point `{name}`")))
    }

    fn flag_point(spec: &PointSpec) -> Result<FlagPoint, ScenarioError> {
        let mut incidence = BTreeMap::new();
        for (curve, mult) in &spec.incidence {
            incidence.insert(curve.clone(), parse_rat_ctx(mult, "incidence multiplicity")?);
        }
        Ok(FlagPoint::from_map(&spec.name, incidence, spec.exact))
    }

    fn flag_spec(&self, curve: &str) -> Result<&'a FlagCaseSpec, ScenarioError> {
        self.scenario
            .flags
            .iter()
            .find(|f| f.curve == curve)
            .ok_or_else(|| ScenarioError::UnknownName(format!("flag case along `{curve}`")))
    }

    /// Runs a declared surface flag case.
    pub fn flag_case(&self, curve: &str) -> Result<FlagDeltaCase, ScenarioError> {
        let spec = self.flag_spec(curve)?;
        let polarization = self.class(None, &spec.polarization)?;
        let class = self.class(None, curve)?;
        let name = self
            .main
            .basis_names()
            .iter()
            .any(|b| b == curve)
            .then_some(curve);
        let a_curve = parse_rat_ctx(&spec.a_curve, "curve log discrepancy")?;
        let points = spec
            .points
            .iter()
            .map(|p| Self::flag_point(self.point_spec(None, p)?))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(flag_delta_surface(
            &polarization,
            &class,
            name,
            &a_curve,
            &points,
        )?)
    }

    fn family_spec(&self, name: &str) -> Result<&'a FamilySpec, ScenarioError> {
        self.scenario
            .family
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| ScenarioError::UnknownName(format!("family `{name}`")))
    }

    /// Computes the order functions of a family on one window.  Rays
    /// (`hi` absent) are probed over a bounded span past `lo`.
    pub fn family_window(
        &self,
        family: &str,
        curve: &str,
        lo: &str,
        hi: Option<&str>,
    ) -> Result<(OrderWindow, Var), ScenarioError> {
        let fam = self.family_spec(family)?;
        let outer = var_from_name(&fam.var)?;
        if outer == Var::U {
            return Err(bad(format!(
                "family `{family}`: the parameter `u` is reserved for the inner sweep"
            )));
        }
        let lat = self.lattice(fam.lattice.as_deref())?;
        let coords = fam
            .coords
            .iter()
            .map(|c| parse_poly_ctx(c, "family coordinate"))
            .collect::<Result<Vec<_>, _>>()?;
        for coord in &coords {
            if coord.used_vars().iter().any(|v| *v != outer) {
                return Err(bad(format!(
                    "family `{family}`: coordinates must use only `{}`",
                    fam.var
                )));
            }
        }
        let polarization = DivClass::new(lat.clone(), coords)?;
        let class = self.class(fam.lattice.as_deref(), curve)?;
        let name = lat
            .basis_names()
            .iter()
            .any(|b| b == curve)
            .then_some(curve);
        let points = self
            .scenario
            .points
            .iter()
            .filter(|p| p.on == curve)
            .map(Self::flag_point)
            .collect::<Result<Vec<_>, _>>()?;
        let lo_s = parse_scalar_ctx(lo, "window endpoint")?;
        let hi_s = match hi {
            Some(h) => parse_scalar_ctx(h, "window endpoint")?,
            None => lo_s.try_add(&Scalar::Rat(BigRational::from_integer(RAY_SPAN.into())))?,
        };
        let mut windows =
            flag_orders_parametric(&polarization, &class, name, &points, outer, Var::U, &lo_s, &hi_s)?;
        if windows.len() != 1 {
            let cells = windows
                .iter()
                .map(|w| format!("[{}, {}]", w.lo, w.hi))
                .collect::<Vec<_>>()
                .join(", ");
            return Err(bad(format!(
                "the window crosses structural walls (cells {cells}); request each cell separately"
            )));
        }
        Ok((windows.pop().expect("length checked"), outer))
    }

    fn window_point_fn(window: &OrderWindow, point: &str) -> Result<RationalFn, ScenarioError> {
        window
            .per_point
            .iter()
            .find(|(name, _)| name == point)
            .map(|(_, f)| f.clone())
            .ok_or_else(|| {
                ScenarioError::UnknownName(format!("point `{point}` on the flag curve"))
            })
    }

    /// Certifies the minimum among reciprocal orders of family windows.
    /// Returns the minimum as a rational function and the label of the
    /// winning candidate.
    pub fn certified_min(
        &self,
        args: &CertifiedMinArgs,
    ) -> Result<(RationalFn, String), ScenarioError> {
        if args.candidates.is_empty() {
            return Err(bad("a certified minimum needs at least one candidate"));
        }
        let lo_s = parse_scalar_ctx(&args.lo, "window endpoint")?;
        let hi_s = args
            .hi
            .as_deref()
            .map(|h| parse_scalar_ctx(h, "window endpoint"))
            .transpose()?;
        let mut recips = Vec::new();
        let mut labels = Vec::new();
        for cand in &args.candidates {
            let (window, _) =
                self.family_window(&cand.family, &cand.curve, &args.lo, args.hi.as_deref())?;
            let order = match &cand.point {
                None => window.s_curve,
                Some(p) => Self::window_point_fn(&window, p)?,
            };
            let a = parse_scalar_ctx(&cand.a, "log discrepancy")?;
            recips.push(RationalFn::new(order.den().scale(&a), order.num().clone())?);
            labels.push(match &cand.point {
                None => format!("{}/{}", cand.family, cand.curve),
                Some(p) => format!("{}/{}/{}", cand.family, cand.curve, p),
            });
        }
        let winner = min_on_interval(&recips, &lo_s, hi_s.as_ref())?;
        Ok((recips[winner].clone(), labels[winner].clone()))
    }

    fn volume_mode(&self, spec: &ModeSpec) -> Result<VolumeMode, ScenarioError> {
        match spec {
            ModeSpec::Plain => Ok(VolumeMode::Plain),
            ModeSpec::Scaled(pieces) => {
                let pieces = pieces
                    .iter()
                    .map(|p| {
                        Ok(ScaledPiece {
                            lo: parse_rat_ctx(&p.lo, "scaled piece endpoint")?,
                            hi: parse_rat_ctx(&p.hi, "scaled piece endpoint")?,
                            lambda: parse_poly_ctx(&p.lambda, "comparison factor")?,
                        })
                    })
                    .collect::<Result<Vec<_>, ScenarioError>>()?;
                Ok(VolumeMode::Scaled(pieces))
            }
            ModeSpec::Profile(p) => Ok(VolumeMode::Profile {
                recip: RationalFn::new(
                    parse_poly_ctx(&p.recip_num, "profile numerator")?,
                    parse_poly_ctx(&p.recip_den, "profile denominator")?,
                )?,
                t_of_u: parse_poly_ctx(&p.t_of_u, "reparametrization")?,
                t_range: (
                    parse_rat_ctx(&p.t_lo, "profile range")?,
                    parse_rat_ctx(&p.t_hi, "profile range")?,
                ),
            }),
        }
    }

    fn lct_map(&self, lct: &BTreeMap<String, String>) -> Result<BTreeMap<String, BigRational>, ScenarioError> {
        lct.iter()
            .map(|(k, v)| Ok((k.clone(), parse_rat_ctx(v, "log canonical threshold")?)))
            .collect()
    }
}

/// The result of one computation: a value, its exactness, and optional
/// human-readable detail (for example the winning candidate of a
/// minimum).
#[derive(Debug, Clone)]
pub struct Outcome {
    /// The computed value.
    pub value: ResultValue,
    /// Whether the value is exact or an upper bound.
    pub exactness: Exactness,
    /// Extra context for reports.
    pub detail: Option<String>,
}

fn num_outcome(value: BigRational) -> Outcome {
    Outcome {
        value: ResultValue::Number(Scalar::Rat(value)),
        exactness: Exactness::Exact,
        detail: None,
    }
}

fn scalar_outcome(value: Scalar) -> Outcome {
    Outcome {
        value: ResultValue::Number(value),
        exactness: Exactness::Exact,
        detail: None,
    }
}

fn sv_outcome(value: SValue) -> Outcome {
    Outcome {
        value: ResultValue::Number(Scalar::Rat(value.value)),
        exactness: value.exactness,
        detail: None,
    }
}

fn fn_outcome(value: RationalFn) -> Outcome {
    Outcome {
        value: ResultValue::Function(value),
        exactness: Exactness::Exact,
        detail: None,
    }
}

fn poly_rat(p: &Poly, what: &str) -> Result<BigRational, ScenarioError> {
    Ok(p.eval_constant()?.to_rational(what)?)
}

/// Executes one operation against a workspace.
pub fn run_computation(ws: &Workspace<'_>, op: &OpSpec) -> Result<Outcome, ScenarioError> {
    match op {
        OpSpec::Cube(args) => {
            let class = ws.class(args.lattice.as_deref(), &args.class)?;
            Ok(num_outcome(poly_rat(&class.cube()?, "triple self-intersection")?))
        }
        OpSpec::Triple(args) => {
            let a = ws.class(None, &args.a)?;
            let b = ws.class(None, &args.b)?;
            let c = ws.class(None, &args.c)?;
            Ok(num_outcome(poly_rat(&a.triple(&b, &c)?, "triple intersection")?))
        }
        OpSpec::PseffThreshold(args) => {
            let class = ws.class(args.lattice.as_deref(), &args.class)?;
            let along = ws.class(args.lattice.as_deref(), &args.along)?;
            Ok(num_outcome(class.pseff_threshold(&along)?))
        }
        OpSpec::LedgerCheck(args) => {
            let (setup, _) = ws.sweep(&args.sweep)?;
            let report = verify_threefold_ledger(&setup)?;
            let pass = report.passed();
            Ok(Outcome {
                value: ResultValue::Flag(pass),
                exactness: Exactness::Exact,
                detail: (!pass).then(|| report.to_string()),
            })
        }
        OpSpec::SThreefold(args) => {
            let (setup, _) = ws.sweep(&args.sweep)?;
            Ok(num_outcome(s_threefold_divisor(&setup)?))
        }
        OpSpec::SWCurve(args) => {
            let (setup, _) = ws.sweep(&args.sweep)?;
            Ok(num_outcome(s_w_curve(&setup, &args.curve)?))
        }
        OpSpec::SWPoint(args) => {
            let (setup, spec) = ws.sweep(&args.sweep)?;
            let point = Workspace::flag_point(ws.point_spec(Some(spec), &args.point)?)?;
            let order = s_w_point(&setup, &args.curve, &point)?;
            Ok(match args.part {
                PointPart::Total => sv_outcome(order.total),
                PointPart::Base => num_outcome(order.base),
                PointPart::Correction => sv_outcome(order.correction),
            })
        }
        OpSpec::AzCombine(args) => {
            let (setup, spec) = ws.sweep(&args.sweep)?;
            let s_div = SValue::exact(s_threefold_divisor(&setup)?);
            let s_curve = SValue::exact(s_w_curve(&setup, &args.curve)?);
            let point = Workspace::flag_point(ws.point_spec(Some(spec), &args.point)?)?;
            let order = s_w_point(&setup, &args.curve, &point)?;
            let bound = az_combine(&s_div, &s_curve, &order.total)?;
            Ok(match args.part {
                BoundPart::Bound => num_outcome(bound.bound),
                BoundPart::Refined => num_outcome(bound.refined),
                BoundPart::Attained => Outcome {
                    value: ResultValue::Word(bound.attained.to_string()),
                    exactness: Exactness::Exact,
                    detail: None,
                },
                BoundPart::Boundary => Outcome {
                    value: ResultValue::Flag(bound.boundary),
                    exactness: Exactness::Exact,
                    detail: None,
                },
            })
        }
        OpSpec::CaseCurve(args) => Ok(num_outcome(ws.flag_case(&args.curve)?.s_curve)),
        OpSpec::CasePoint(args) => {
            let case = ws.flag_case(&args.curve)?;
            let value = case
                .per_point
                .iter()
                .find(|(name, _)| name == &args.point)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| {
                    ScenarioError::UnknownName(format!(
                        "point `{}` in the case along `{}`",
                        args.point, args.curve
                    ))
                })?;
            let exact = ws.point_spec(None, &args.point)?.exact;
            Ok(Outcome {
                value: ResultValue::Number(Scalar::Rat(value)),
                exactness: if exact { Exactness::Exact } else { Exactness::AtMost },
                detail: None,
            })
        }
        OpSpec::CaseWorst(args) => {
            let case = ws.flag_case(&args.curve)?;
            let (name, value) = case.worst_point.ok_or_else(|| {
                bad(format!("the case along `{}` declares no points", args.curve))
            })?;
            let exact = ws.point_spec(None, &name)?.exact;
            Ok(Outcome {
                value: ResultValue::Number(Scalar::Rat(value)),
                exactness: if exact { Exactness::Exact } else { Exactness::AtMost },
                detail: Some(format!("attained by `{name}`")),
            })
        }
        OpSpec::CaseBound(args) => Ok(num_outcome(ws.flag_case(&args.curve)?.bound)),
        OpSpec::SurfaceDelta(_) => {
            let mut best: Option<(String, BigRational)> = None;
            for flag in &ws.scenario.flags {
                let case = ws.flag_case(&flag.curve)?;
                if best.as_ref().map_or(true, |(_, b)| case.bound < *b) {
                    best = Some((flag.curve.clone(), case.bound));
                }
            }
            let (name, value) = best.ok_or_else(|| bad("no flag cases declared"))?;
            Ok(Outcome {
                value: ResultValue::Number(Scalar::Rat(value)),
                exactness: Exactness::Exact,
                detail: Some(format!("attained by the sweep along `{name}`")),
            })
        }
        OpSpec::Nemuro(args) => {
            let (setup, _) = ws.sweep(&args.sweep)?;
            let lct = ws.lct_map(&args.lct)?;
            let mode = ws.volume_mode(&args.mode)?;
            let bound = nemuro_bound(&setup, &lct, &mode)?;
            Ok(match args.part {
                NemuroPart::Constant => num_outcome(bound.constant),
                NemuroPart::Coefficient => num_outcome(bound.recip_coeff),
                NemuroPart::Function => fn_outcome(bound.as_fn()?),
                NemuroPart::DeltaFunction => fn_outcome(bound.delta_fn()?),
            })
        }
        OpSpec::Lemma34(args) => {
            let (setup, _) = ws.sweep(&args.sweep)?;
            let lct = ws.lct_map(&args.lct)?;
            let mode = ws.volume_mode(&args.mode)?;
            let bound = nemuro_bound(&setup, &lct, &mode)?;
            let s_div = s_threefold_divisor(&setup)?;
            let delta = parse_rat_ctx(&args.delta, "surface delta")?;
            let combined = lemma34_combine(&bound, &delta, &s_div)?;
            Ok(match args.part {
                BoundPart::Bound => num_outcome(combined.bound),
                BoundPart::Refined => num_outcome(combined.refined),
                BoundPart::Attained => Outcome {
                    value: ResultValue::Word(combined.attained.to_string()),
                    exactness: Exactness::Exact,
                    detail: None,
                },
                BoundPart::Boundary => Outcome {
                    value: ResultValue::Flag(combined.boundary),
                    exactness: Exactness::Exact,
                    detail: None,
                },
            })
        }
        OpSpec::WindowOrders(args) => {
            let (window, _) =
                ws.family_window(&args.family, &args.curve, &args.lo, args.hi.as_deref())?;
            let order = match &args.point {
                None => window.s_curve,
                Some(p) => Workspace::window_point_fn(&window, p)?,
            };
            Ok(fn_outcome(order))
        }
        OpSpec::WindowValue(args) => {
            let (window, var) =
                ws.family_window(&args.family, &args.curve, &args.lo, args.hi.as_deref())?;
            let order = match &args.point {
                None => window.s_curve,
                Some(p) => Workspace::window_point_fn(&window, p)?,
            };
            let at = parse_scalar_ctx(&args.at, "evaluation point")?;
            Ok(scalar_outcome(order.eval1(var, &at)?))
        }
        OpSpec::CertifiedMin(args) => {
            let (minimum, label) = ws.certified_min(args)?;
            Ok(Outcome {
                value: ResultValue::Function(minimum),
                exactness: Exactness::Exact,
                detail: Some(format!("attained by {label}")),
            })
        }
        OpSpec::ProfileTail(args) => {
            let scale = parse_scalar_ctx(&args.scale, "weight scale")?;
            let weight = RationalFn::new(
                parse_poly_ctx(&args.weight_num, "weight numerator")?,
                parse_poly_ctx(&args.weight_den, "weight denominator")?,
            )?
            .scale(&scale)?;
            let t_of_u = RationalFn::new(
                parse_poly_ctx(&args.t_of_u_num, "reparametrization numerator")?,
                parse_poly_ctx(&args.t_of_u_den, "reparametrization denominator")?,
            )?;
            let profile = DeltaProfile::new(
                parse_scalar_ctx(&args.breakpoint, "profile breakpoint")?,
                RationalFn::new(
                    parse_poly_ctx(&args.branch_num, "branch numerator")?,
                    parse_poly_ctx(&args.branch_den, "branch denominator")?,
                )?,
            )?;
            let lo = parse_rat_ctx(&args.lo, "integration endpoint")?;
            let hi = parse_rat_ctx(&args.hi, "integration endpoint")?;
            let eps = parse_rat_ctx(&args.eps, "enclosure width")?;
            let result = profile_weighted_integral(&weight, &t_of_u, &profile, &lo, &hi, &eps)?;
            Ok(match args.part {
                TailPart::Split => scalar_outcome(result.split),
                TailPart::Head => scalar_outcome(result.head),
                TailPart::Exact => num_outcome(result.exact.ok_or_else(|| {
                    bad("the weighted integral did not reduce to a rational value")
                })?),
                TailPart::Chain => {
                    let base = result.exact.ok_or_else(|| {
                        bad("the weighted integral did not reduce to a rational value")
                    })?;
                    let add = match &args.add {
                        Some(a) => parse_rat_ctx(a, "chained constant")?,
                        None => BigRational::zero(),
                    };
                    num_outcome(base + add)
                }
            })
        }
    }
}

/// The record of one executed computation.
#[derive(Debug, Clone)]
pub struct RunRecord {
    /// The computation's declared name.
    pub name: String,
    /// The operation's serialized name.
    pub op: &'static str,
    /// The outcome, when the computation succeeded.
    pub outcome: Option<Outcome>,
    /// The error, when it failed.
    pub error: Option<String>,
    /// The expectation's relation, if any.
    pub relation: Option<Relation>,
    /// The expected value literal, if any.
    pub expected: Option<String>,
    /// Declared provenance of the expectation.
    pub provenance: Option<String>,
    /// Whether the record passes (no error, expectation satisfied).
    pub pass: bool,
}

/// The outcome of validating and running a whole scenario.
#[derive(Debug)]
pub struct ScenarioRun {
    /// The scenario's id.
    pub id: String,
    /// The structural validation report.
    pub validation: ValidationReport,
    /// One record per requested computation.
    pub records: Vec<RunRecord>,
}

impl ScenarioRun {
    /// True when validation and every computation record passed.
    pub fn passed(&self) -> bool {
        self.validation.passed() && self.records.iter().all(|r| r.pass)
    }

    /// True when some computation failed to run (as opposed to running
    /// and missing its expectation).
    pub fn had_computation_error(&self) -> bool {
        self.records.iter().any(|r| r.error.is_some())
    }
}

fn run_record(ws: &Workspace<'_>, comp: &Computation) -> RunRecord {
    let relation = comp.expect.as_ref().map(|e| e.relation);
    let expected = comp.expect.as_ref().map(|e| e.value.clone());
    let mut record = RunRecord {
        name: comp.name.clone(),
        op: comp.op.kind(),
        outcome: None,
        error: None,
        relation,
        expected,
        provenance: comp.provenance.clone(),
        pass: false,
    };
    match run_computation(ws, &comp.op) {
        Ok(outcome) => {
            match &comp.expect {
                None => record.pass = true,
                Some(expect) => {
                    match parse_value(&expect.value).and_then(|want| {
                        satisfies(&outcome.value, outcome.exactness, expect.relation, &want)
                    }) {
                        Ok(ok) => record.pass = ok,
                        Err(e) => record.error = Some(e.to_string()),
                    }
                }
            }
            record.outcome = Some(outcome);
        }
        Err(e) => record.error = Some(e.to_string()),
    }
    record
}

/// Validates a scenario and executes its computations.  The resolver
/// supplies other fixtures for cross-references (resolution links).
pub fn run_scenario(scenario: &Scenario, resolve: &dyn Fn(&str) -> Option<Scenario>) -> ScenarioRun {
    let validation = validate_fixture(scenario, resolve);
    let workspace = Workspace::new(scenario);
    let records = scenario
        .compute
        .iter()
        .map(|comp| match &workspace {
            Ok(ws) => run_record(ws, comp),
            Err(e) => RunRecord {
                name: comp.name.clone(),
                op: comp.op.kind(),
                outcome: None,
                error: Some(e.to_string()),
                relation: comp.expect.as_ref().map(|x| x.relation),
                expected: comp.expect.as_ref().map(|x| x.value.clone()),
                provenance: comp.provenance.clone(),
                pass: false,
            },
        })
        .collect();
    ScenarioRun {
        id: scenario.id.clone(),
        validation,
        records,
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// One structural check with its result.
#[derive(Debug, Clone)]
pub struct ValidationEntry {
    /// Short label of the check.
    pub label: String,
    /// Whether it passed.
    pub pass: bool,
    /// Evidence or the failure reason.
    pub detail: String,
}

/// The outcome of validating a scenario's declared data.
#[derive(Debug, Default)]
pub struct ValidationReport {
    /// The individual checks in evaluation order.
    pub entries: Vec<ValidationEntry>,
}

impl ValidationReport {
    /// True when every check passed.
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    fn ok(&mut self, label: impl Into<String>, detail: impl Into<String>) {
        self.entries.push(ValidationEntry {
            label: label.into(),
            pass: true,
            detail: detail.into(),
        });
    }

    fn fail(&mut self, label: impl Into<String>, detail: impl Into<String>) {
        self.entries.push(ValidationEntry {
            label: label.into(),
            pass: false,
            detail: detail.into(),
        });
    }

    fn push_result(&mut self, label: impl Into<String>, result: Result<String, String>) {
        match result {
            Ok(detail) => self.ok(label, detail),
            Err(detail) => self.fail(label, detail),
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for entry in &self.entries {
            let status = if entry.pass { "ok  " } else { "FAIL" };
            if entry.detail.is_empty() {
                writeln!(f, "{status} {}", entry.label)?;
            } else {
                writeln!(f, "{status} {}: {}", entry.label, entry.detail)?;
            }
        }
        Ok(())
    }
}

fn gram_pair(gram: &[Vec<BigRational>], a: &[BigRational], b: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                acc += ai * &gram[i][j] * bj;
            }
        }
    }
    acc
}

fn validate_lattice(spec: &LatticeSpec, report: &mut ValidationReport) -> Option<Rc<Lattice>> {
    let tag = format!("lattice `{}`", spec.name);
    let lattice = match spec.build() {
        Ok(l) => {
            report.ok(format!("{tag}: builds"), format!("rank {}", l.rank()));
            l
        }
        Err(e) => {
            report.fail(format!("{tag}: builds"), e.to_string());
            return None;
        }
    };

    if let Some(rows) = &spec.gram {
        let result = (|| -> Result<String, String> {
            let gram = rows
                .iter()
                .map(|r| parse_rat_list(r, "gram entry"))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            for (i, row) in gram.iter().enumerate() {
                for (j, entry) in row.iter().enumerate() {
                    if *entry != gram[j][i] {
                        return Err(format!("asymmetric at ({i}, {j})"));
                    }
                }
            }
            Ok(format!("{} rows", gram.len()))
        })();
        report.push_result(format!("{tag}: gram symmetry"), result);
    }

    if let Some(expected) = spec.k_square.as_deref().or(spec.k_cube.as_deref()) {
        let result = (|| -> Result<String, String> {
            let anticanonical = DivClass::anticanonical(&lattice);
            let degree = match spec.kind {
                LatticeKind::Surface => anticanonical.square(),
                LatticeKind::Threefold => anticanonical.cube(),
            }
            .map_err(|e| e.to_string())?;
            let value = poly_rat(&degree, "anticanonical degree").map_err(|e| e.to_string())?;
            let want = parse_rat_ctx(expected, "declared degree").map_err(|e| e.to_string())?;
            if value == want {
                Ok(format!("degree {value}"))
            } else {
                Err(format!("computed {value}, declared {want}"))
            }
        })();
        report.push_result(format!("{tag}: anticanonical degree"), result);
    }

    if spec.kind == LatticeKind::Surface {
        let result = (|| -> Result<String, String> {
            let surface = lattice.as_surface().map_err(|e| e.to_string())?;
            let gram = surface.gram();
            for (i, name) in spec.basis.iter().enumerate() {
                let negative = gram[i][i].is_negative();
                let declared = spec.neg_curves.iter().any(|n| n == name);
                if negative != declared {
                    return Err(format!(
                        "`{name}` has self-intersection {} but is{} declared negative",
                        gram[i][i],
                        if declared { "" } else { " not" }
                    ));
                }
            }
            Ok(format!("{} declared", spec.neg_curves.len()))
        })();
        report.push_result(format!("{tag}: negative curves"), result);

        if !spec.relations.is_empty() {
            let result = (|| -> Result<String, String> {
                let surface = lattice.as_surface().map_err(|e| e.to_string())?;
                let gram = surface.gram();
                for (k, relation) in spec.relations.iter().enumerate() {
                    let lhs = spec.combo(&relation.lhs).map_err(|e| e.to_string())?;
                    let rhs = spec.combo(&relation.rhs).map_err(|e| e.to_string())?;
                    let diff: Vec<BigRational> =
                        lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
                    for (i, name) in spec.basis.iter().enumerate() {
                        let mut unit = vec![BigRational::zero(); spec.basis.len()];
                        unit[i] = BigRational::one();
                        let pairing = gram_pair(gram, &diff, &unit);
                        if !pairing.is_zero() {
                            return Err(format!(
                                "relation {k} pairs to {pairing} against `{name}`"
                            ));
                        }
                    }
                }
                Ok(format!("{} in the kernel", spec.relations.len()))
            })();
            report.push_result(format!("{tag}: linear relations"), result);
        }
    }

    if !spec.identities.is_empty() {
        let result = (|| -> Result<String, String> {
            for (k, identity) in spec.identities.iter().enumerate() {
                let lhs = spec.combo(&identity.lhs).map_err(|e| e.to_string())?;
                let rhs = spec.combo(&identity.rhs).map_err(|e| e.to_string())?;
                if lhs != rhs {
                    return Err(format!("identity {k} fails coordinatewise"));
                }
            }
            Ok(format!("{} hold", spec.identities.len()))
        })();
        report.push_result(format!("{tag}: class identities"), result);
    }

    Some(lattice)
}

fn validate_graph(spec: &LatticeSpec, graph: &GraphSpec, report: &mut ValidationReport) {
    let result = (|| -> Result<String, String> {
        if graph.vertices.len() != spec.basis.len() {
            return Err(format!(
                "{} vertices for {} basis classes",
                graph.vertices.len(),
                spec.basis.len()
            ));
        }
        for name in &spec.basis {
            if !graph.vertices.iter().any(|v| &v.name == name) {
                return Err(format!("basis class `{name}` has no vertex"));
            }
        }
        for vertex in &graph.vertices {
            if vertex.kind != -1 && vertex.kind != -2 {
                return Err(format!(
                    "vertex `{}` has kind {}, expected -1 or -2",
                    vertex.name, vertex.kind
                ));
            }
        }
        Ok(format!("{} vertices", graph.vertices.len()))
    })();
    report.push_result("dual graph: vertices", result);

    let result = (|| -> Result<String, String> {
        let rows = spec.gram.as_ref().ok_or("no gram matrix")?;
        let gram = rows
            .iter()
            .map(|r| parse_rat_list(r, "gram entry"))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let index = |name: &str| -> Result<usize, String> {
            spec.basis
                .iter()
                .position(|b| b == name)
                .ok_or_else(|| format!("unknown curve `{name}`"))
        };
        for vertex in &graph.vertices {
            let i = index(&vertex.name)?;
            if gram[i][i] != BigRational::from_integer(vertex.kind.into()) {
                return Err(format!(
                    "vertex `{}` declares kind {}, pairing gives {}",
                    vertex.name, vertex.kind, gram[i][i]
                ));
            }
        }
        let mut adjacency = vec![vec![false; spec.basis.len()]; spec.basis.len()];
        for [a, b] in &graph.edges {
            let (i, j) = (index(a)?, index(b)?);
            if i == j {
                return Err(format!("loop edge at `{a}`"));
            }
            adjacency[i][j] = true;
            adjacency[j][i] = true;
        }
        for i in 0..spec.basis.len() {
            for j in 0..i {
                let expected = if adjacency[i][j] {
                    BigRational::one()
                } else {
                    BigRational::zero()
                };
                if gram[i][j] != expected {
                    return Err(format!(
                        "`{}` . `{}` = {}, but the graph {} an edge",
                        spec.basis[i],
                        spec.basis[j],
                        gram[i][j],
                        if adjacency[i][j] { "declares" } else { "has no" }
                    ));
                }
            }
        }
        Ok(format!("{} edges", graph.edges.len()))
    })();
    report.push_result("dual graph: edges match pairings", result);
}

fn validate_names(ws: &Workspace<'_>, report: &mut ValidationReport) {
    let scenario = ws.scenario;
    if !scenario.curves.is_empty() {
        let result = (|| -> Result<String, String> {
            for curve in &scenario.curves {
                ws.class(curve.lattice.as_deref(), &curve.name)
                    .map_err(|e| format!("curve `{}`: {e}", curve.name))?;
            }
            Ok(format!("{} resolve", scenario.curves.len()))
        })();
        report.push_result("curves: classes resolve", result);
    }
    if !scenario.points.is_empty() {
        let result = (|| -> Result<String, String> {
            for point in &scenario.points {
                Workspace::flag_point(point).map_err(|e| format!("point `{}`: {e}", point.name))?;
            }
            Ok(format!("{} parse", scenario.points.len()))
        })();
        report.push_result("points: incidences parse", result);
    }
    if !scenario.flags.is_empty() {
        let result = (|| -> Result<String, String> {
            for flag in &scenario.flags {
                ws.class(None, &flag.curve)
                    .map_err(|e| format!("case along `{}`: {e}", flag.curve))?;
                for point in &flag.points {
                    let spec = ws
                        .point_spec(None, point)
                        .map_err(|e| format!("case along `{}`: {e}", flag.curve))?;
                    if spec.on != flag.curve {
                        return Err(format!(
                            "point `{point}` lies on `{}`, not on `{}`",
                            spec.on, flag.curve
                        ));
                    }
                }
            }
            Ok(format!("{} cases", scenario.flags.len()))
        })();
        report.push_result("flag cases: references resolve", result);
    }
    if !scenario.compute.is_empty() {
        let result = (|| -> Result<String, String> {
            let mut checked = 0usize;
            for comp in &scenario.compute {
                if let Some(expect) = &comp.expect {
                    parse_value(&expect.value)
                        .map_err(|e| format!("`{}`: {e}", comp.name))?;
                    checked += 1;
                }
            }
            Ok(format!("{checked} literals"))
        })();
        report.push_result("compute: expected values parse", result);
    }
}

fn validate_sweep(ws: &Workspace<'_>, spec: &SweepSpec, report: &mut ValidationReport) {
    validate_lattice(&spec.surface, report);
    let tag = format!("sweep `{}`", spec.name);
    let setup = match ws.sweep(&spec.name) {
        Ok((setup, _)) => {
            report.ok(format!("{tag}: builds"), format!("{} pieces", spec.pieces.len()));
            setup
        }
        Err(e) => {
            report.fail(format!("{tag}: builds"), e.to_string());
            return;
        }
    };
    match verify_threefold_ledger(&setup) {
        Ok(ledger) => {
            for check in ledger.checks {
                report.entries.push(ValidationEntry {
                    label: format!("{tag}: {}", check.label),
                    pass: check.pass,
                    detail: check.detail,
                });
            }
        }
        Err(e) => report.fail(format!("{tag}: ledger certification"), e.to_string()),
    }
    if !spec.points.is_empty() {
        let result = (|| -> Result<String, String> {
            for point in &spec.points {
                Workspace::flag_point(point).map_err(|e| format!("point `{}`: {e}", point.name))?;
            }
            Ok(format!("{} parse", spec.points.len()))
        })();
        report.push_result(format!("{tag}: point incidences"), result);
    }
}

fn validate_family(ws: &Workspace<'_>, spec: &FamilySpec, report: &mut ValidationReport) {
    let tag = format!("family `{}`", spec.name);
    let result = (|| -> Result<String, String> {
        let var = var_from_name(&spec.var).map_err(|e| e.to_string())?;
        if var == Var::U {
            return Err("the parameter `u` is reserved for the inner sweep".into());
        }
        let lattice = ws.lattice(spec.lattice.as_deref()).map_err(|e| e.to_string())?;
        if spec.coords.len() != lattice.rank() {
            return Err(format!(
                "{} coordinates for rank {}",
                spec.coords.len(),
                lattice.rank()
            ));
        }
        for coord in &spec.coords {
            let poly = parse_poly_ctx(coord, "family coordinate").map_err(|e| e.to_string())?;
            if poly.used_vars().iter().any(|v| *v != var) {
                return Err(format!("coordinate `{coord}` uses a foreign parameter"));
            }
        }
        let lo = parse_rat_ctx(&spec.lo, "family box").map_err(|e| e.to_string())?;
        if let Some(hi) = &spec.hi {
            let hi = parse_rat_ctx(hi, "family box").map_err(|e| e.to_string())?;
            if hi <= lo {
                return Err(format!("empty box [{lo}, {hi}]"));
            }
        }
        Ok(format!("over `{}`", spec.var))
    })();
    report.push_result(format!("{tag}: coordinates"), result);
}

fn validate_quotient(
    scenario: &Scenario,
    quotient: &QuotientSpec,
    resolve: &dyn Fn(&str) -> Option<Scenario>,
    report: &mut ValidationReport,
) {
    let upstairs = match resolve(&quotient.resolution) {
        Some(s) => {
            report.ok(
                "quotient: resolution fixture",
                format!("`{}`", quotient.resolution),
            );
            s
        }
        None => {
            report.fail(
                "quotient: resolution fixture",
                format!("`{}` not found", quotient.resolution),
            );
            return;
        }
    };
    let result = (|| -> Result<String, String> {
        let up_spec = &upstairs.lattice;
        // When the scenario is a threefold sweep, the quotient link
        // describes the sweep surface rather than the ambient lattice.
        let down_spec = scenario
            .ledger
            .first()
            .map(|sweep| &sweep.surface)
            .unwrap_or(&scenario.lattice);
        let up_gram = up_spec
            .gram
            .as_ref()
            .ok_or("resolution lattice has no gram matrix")?
            .iter()
            .map(|r| parse_rat_list(r, "gram entry"))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let down_gram = down_spec
            .gram
            .as_ref()
            .ok_or("this lattice has no gram matrix")?
            .iter()
            .map(|r| parse_rat_list(r, "gram entry"))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let up_index = |name: &str| -> Result<usize, String> {
            up_spec
                .basis
                .iter()
                .position(|b| b == name)
                .ok_or_else(|| format!("`{name}` is not an upstairs basis class"))
        };
        let down_index = |name: &str| -> Result<usize, String> {
            down_spec
                .basis
                .iter()
                .position(|b| b == name)
                .ok_or_else(|| format!("`{name}` is not a downstairs basis class"))
        };

        // The contracted curves must be disjoint (-2)-curves upstairs.
        let minus_two = BigRational::from_integer((-2).into());
        let contracted = quotient
            .contracted
            .iter()
            .map(|n| up_index(n))
            .collect::<Result<Vec<_>, _>>()?;
        for (pos, &c) in contracted.iter().enumerate() {
            if up_gram[c][c] != minus_two {
                return Err(format!(
                    "contracted `{}` has self-intersection {}",
                    quotient.contracted[pos], up_gram[c][c]
                ));
            }
            for &d in &contracted[..pos] {
                if !up_gram[c][d].is_zero() {
                    return Err("contracted curves are not disjoint".into());
                }
            }
        }

        // The correspondence must cover the downstairs basis exactly once
        // and avoid the contracted curves.
        if quotient.correspondence.len() != down_spec.basis.len() {
            return Err(format!(
                "{} pairs for {} downstairs classes",
                quotient.correspondence.len(),
                down_spec.basis.len()
            ));
        }
        let mut pairs = Vec::new();
        let mut seen = vec![false; down_spec.basis.len()];
        for [down_name, up_name] in &quotient.correspondence {
            let d = down_index(down_name)?;
            if seen[d] {
                return Err(format!("`{down_name}` is mapped twice"));
            }
            seen[d] = true;
            let u = up_index(up_name)?;
            if contracted.contains(&u) {
                return Err(format!("`{up_name}` is contracted"));
            }
            pairs.push((d, u));
        }

        // Pushforward compatibility: downstairs pairings equal upstairs
        // pairings corrected by the contracted (-2)-curves; the
        // anticanonical class (orthogonal to the contracted curves)
        // participates as an extra row.
        let up_k: Vec<BigRational> = parse_rat_list(&up_spec.canonical, "canonical class")
            .map_err(|e| e.to_string())?
            .iter()
            .map(|k| -k)
            .collect();
        let down_k: Vec<BigRational> = parse_rat_list(&down_spec.canonical, "canonical class")
            .map_err(|e| e.to_string())?
            .iter()
            .map(|k| -k)
            .collect();
        let unit = |n: usize, i: usize| -> Vec<BigRational> {
            let mut v = vec![BigRational::zero(); n];
            v[i] = BigRational::one();
            v
        };
        let mut rows: Vec<(String, Vec<BigRational>, Vec<BigRational>)> = pairs
            .iter()
            .map(|&(d, u)| {
                (
                    down_spec.basis[d].clone(),
                    unit(down_spec.basis.len(), d),
                    unit(up_spec.basis.len(), u),
                )
            })
            .collect();
        rows.push(("-K".into(), down_k, up_k));
        let half = BigRational::new(1.into(), 2.into());
        for (i, (name_a, down_a, up_a)) in rows.iter().enumerate() {
            for (name_b, down_b, up_b) in &rows[..=i] {
                let down_pairing = gram_pair(&down_gram, down_a, down_b);
                let mut up_pairing = gram_pair(&up_gram, up_a, up_b);
                for &c in &contracted {
                    let unit_c = unit(up_spec.basis.len(), c);
                    up_pairing += gram_pair(&up_gram, up_a, &unit_c)
                        * gram_pair(&up_gram, up_b, &unit_c)
                        * &half;
                }
                if down_pairing != up_pairing {
                    return Err(format!(
                        "`{name_a}` . `{name_b}` = {down_pairing} downstairs but {up_pairing} through the resolution"
                    ));
                }
            }
        }
        Ok(format!(
            "{} classes through {} contractions",
            pairs.len(),
            contracted.len()
        ))
    })();
    report.push_result("quotient: pushforward pairings", result);
}

/// Certifies a scenario's declared data: lattice construction, Gram
/// symmetry, anticanonical degrees, negative-curve declarations, kernel
/// relations and identities, dual graphs, ledger certification for every
/// sweep, family coordinates, resolution links, and expected-value
/// literals.
pub fn validate_fixture(
    scenario: &Scenario,
    resolve: &dyn Fn(&str) -> Option<Scenario>,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    validate_lattice(&scenario.lattice, &mut report);
    for aux in &scenario.aux_lattices {
        validate_lattice(aux, &mut report);
    }
    if let Some(graph) = &scenario.dual_graph {
        validate_graph(&scenario.lattice, graph, &mut report);
    }
    match Workspace::new(scenario) {
        Ok(ws) => {
            validate_names(&ws, &mut report);
            for sweep in &scenario.ledger {
                validate_sweep(&ws, sweep, &mut report);
            }
            for family in &scenario.family {
                validate_family(&ws, family, &mut report);
            }
        }
        Err(e) => report.fail("workspace: construction", e.to_string()),
    }
    if let Some(quotient) = &scenario.quotient {
        validate_quotient(scenario, quotient, resolve, &mut report);
    }
    report
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

/// Identifiers of the bundled fixtures, sorted.
pub fn list_fixtures() -> Vec<String> {
    let mut ids: Vec<String> = fixtures::all().into_iter().map(|s| s.id).collect();
    ids.sort();
    ids
}

/// Loads one bundled fixture by id.
pub fn load_fixture(id: &str) -> Result<Scenario, ScenarioError> {
    fixtures::all()
        .into_iter()
        .find(|s| s.id == id)
        .ok_or_else(|| ScenarioError::UnknownFixture(id.to_string()))
}

/// Resolver over the bundled registry, for cross-fixture links.
pub fn bundled(id: &str) -> Option<Scenario> {
    fixtures::all().into_iter().find(|s| s.id == id)
}

/// Loads and runs one bundled fixture.
pub fn run_fixture(id: &str) -> Result<ScenarioRun, ScenarioError> {
    let scenario = load_fixture(id)?;
    Ok(run_scenario(&scenario, &bundled))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn failure_lines(run: &ScenarioRun) -> String {
        let mut lines = String::new();
        for entry in &run.validation.entries {
            if !entry.pass {
                lines.push_str(&format!("validation {}: {}\n", entry.label, entry.detail));
            }
        }
        for record in &run.records {
            if !record.pass {
                let got = record
                    .outcome
                    .as_ref()
                    .map(|o| o.value.to_string())
                    .unwrap_or_default();
                lines.push_str(&format!(
                    "compute {}: got `{got}` expected `{} {}` error {:?}\n",
                    record.name,
                    record.relation.map(|r| r.to_string()).unwrap_or_default(),
                    record.expected.clone().unwrap_or_default(),
                    record.error
                ));
            }
        }
        lines
    }

    fn assert_fixture_passes(id: &str) {
        let run = run_fixture(id).expect("fixture loads");
        assert!(run.passed(), "fixture {id} failed:\n{}", failure_lines(&run));
    }

    #[test]
    fn registry_lists_and_loads_every_fixture() {
        let ids = list_fixtures();
        assert_eq!(ids.len(), 15);
        for id in &ids {
            assert!(load_fixture(id).is_ok(), "fixture {id} must load");
        }
        assert!(matches!(
            load_fixture("no-such-fixture"),
            Err(ScenarioError::UnknownFixture(_))
        ));
    }

    #[test]
    fn every_fixture_round_trips_through_json() {
        for id in list_fixtures() {
            let scenario = load_fixture(&id).unwrap();
            let text = scenario.to_json();
            let again = Scenario::from_json(&text).expect("bundled fixture reparses");
            assert_eq!(scenario, again, "fixture {id} must round-trip");
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let scenario = load_fixture("dp4-lemma3.9").unwrap();
        let mut value: serde_json::Value = serde_json::from_str(&scenario.to_json()).unwrap();
        value
            .as_object_mut()
            .unwrap()
            .insert("surprise".into(), serde_json::json!(1));
        let text = serde_json::to_string(&value).unwrap();
        assert!(matches!(
            Scenario::from_json(&text),
            Err(ScenarioError::Parse(_))
        ));
    }

    #[test]
    fn value_literals_round_trip() {
        for text in [
            "31/36",
            "-1/2+1/6*sqrt(21)",
            "(63*t + 2560)/(2592*t)",
            "2 - u",
            "true",
            "curve",
        ] {
            let value = parse_value(text).unwrap();
            let again = parse_value(&value.to_string()).unwrap();
            assert_eq!(value, again, "literal `{text}` must round-trip");
        }
    }

    #[test]
    fn expectation_relations_respect_exactness() {
        let value = parse_value("31/36").unwrap();
        let same = parse_value("31/36").unwrap();
        let smaller = parse_value("5/6").unwrap();
        assert!(satisfies(&value, Exactness::Exact, Relation::Eq, &same).unwrap());
        assert!(!satisfies(&value, Exactness::AtMost, Relation::Eq, &same).unwrap());
        assert!(satisfies(&value, Exactness::AtMost, Relation::Le, &same).unwrap());
        assert!(!satisfies(&value, Exactness::AtMost, Relation::Ge, &same).unwrap());
        assert!(satisfies(&value, Exactness::Exact, Relation::Ge, &smaller).unwrap());
        assert!(satisfies(&smaller, Exactness::Exact, Relation::Le, &same).unwrap());
        assert!(!satisfies(&value, Exactness::Exact, Relation::Le, &smaller).unwrap());
    }

    #[test]
    fn every_fixture_validates() {
        for id in list_fixtures() {
            let scenario = load_fixture(&id).unwrap();
            let report = validate_fixture(&scenario, &bundled);
            assert!(report.passed(), "fixture {id} failed validation:\n{report}");
        }
    }

    #[test]
    fn threefold_fixture_replays_its_expectations() {
        assert_fixture_passes("threefold-3.3");
    }

    #[test]
    fn pencil_of_bidegree_one_fixture_passes() {
        assert_fixture_passes("dp2-lemma3.8");
    }

    #[test]
    fn fiber_sweep_fixture_passes() {
        assert_fixture_passes("dp4-lemma3.9");
    }

    #[test]
    fn tangent_fiber_sweep_fixture_passes() {
        assert_fixture_passes("weak-dp4-lemma3.10");
    }

    #[test]
    fn triple_point_sweep_fixture_passes() {
        assert_fixture_passes("dp4-lemma3.11");
    }

    #[test]
    fn quotient_sweep_fixtures_pass() {
        assert_fixture_passes("dp5-a1-section4");
        assert_fixture_passes("dp5-2a1-section4");
    }

    #[test]
    fn resolution_case_tables_pass() {
        assert_fixture_passes("dp5-a1-resolution");
        assert_fixture_passes("dp5-2a1-resolution");
    }

    #[test]
    fn parametric_conic_fixture_passes() {
        assert_fixture_passes("dp4-conic-parametric");
    }

    #[test]
    fn graph_fixtures_validate() {
        for id in [
            "dp5-graph-a1",
            "dp5-graph-2a1",
            "dp5-graph-a2",
            "dp5-graph-a3",
            "dp5-graph-smooth",
        ] {
            assert_fixture_passes(id);
        }
    }

    #[test]
    fn corrupted_ledger_fails_validation() {
        let mut scenario = load_fixture("threefold-3.3").unwrap();
        let sweep = scenario
            .ledger
            .iter_mut()
            .find(|s| s.name == "H1")
            .expect("the fixture declares the H1 sweep");
        sweep.pieces[1].negative[0].divisor = "E1".into();
        let report = validate_fixture(&scenario, &bundled);
        assert!(
            !report.passed(),
            "a swapped negative divisor must fail the ledger identity"
        );
    }

    #[test]
    fn wrong_quotient_correspondence_fails_validation() {
        let mut scenario = load_fixture("dp5-a1-section4").unwrap();
        let quotient = scenario.quotient.as_mut().expect("fixture links a resolution");
        for pair in quotient.correspondence.iter_mut() {
            if pair[1] == "e0" {
                pair[1] = "e1".into();
            } else if pair[1] == "e1" {
                pair[1] = "e0".into();
            }
        }
        let report = validate_fixture(&scenario, &bundled);
        assert!(
            !report.passed(),
            "a swapped correspondence must fail the pushforward pairings"
        );
    }
}
