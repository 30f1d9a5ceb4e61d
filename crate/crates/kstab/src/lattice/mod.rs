//! Intersection lattices of surfaces and threefolds, and divisor classes.
//!
//! A lattice is finite numerical data: a family of generating divisor
//! classes with their pairwise (surface) or triple (threefold) intersection
//! numbers, a canonical class, the irreducible classes of negative
//! self-intersection, and declared generators of the pseudoeffective cone.
//! Everything downstream — Zariski decompositions, volumes, invariant
//! integrals — is computed from this data alone.
//!
//! Divisor classes ([`DivClass`]) have *polynomial* coordinates, so a single
//! class can represent a whole family such as `-K - u*S`; pairings then
//! return polynomials in the sweep parameters.
//!
//! Cone membership is decided by exact linear programming and always comes
//! with checkable evidence: a nonnegative combination of the declared
//! generators (plus a numerically-trivial kernel correction), or a
//! separating functional proving non-membership.

mod linalg;
mod lp;

pub use linalg::{determinant, dot, kernel_basis, mat_vec, rank, solve};
pub use lp::{feasible, maximize, Feasibility, Optimum};

use crate::exact::{ExactError, Poly, Scalar, Var};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::fmt;
use std::rc::Rc;

/// Errors from lattice construction and cone queries.
#[derive(Debug, Clone, PartialEq)]
pub enum LatticeError {
    /// Two classes from different lattice instances were combined.
    Mismatch(String),
    /// A coordinate vector has the wrong length, or a matrix is malformed.
    Dimension(String),
    /// An operation needed constant rational coordinates.
    NonConstant(String),
    /// A class outside the pseudoeffective cone where membership was needed.
    NotPseff(String),
    /// A threshold maximization was unbounded.
    Unbounded(String),
    /// A named class is not declared in the lattice.
    UnknownClass(String),
    /// Construction-time validation failed.
    Invalid(String),
    /// An exact-arithmetic error bubbled up.
    Exact(ExactError),
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::Mismatch(msg) => write!(f, "lattice mismatch: {msg}"),
            LatticeError::Dimension(msg) => write!(f, "dimension error: {msg}"),
            LatticeError::NonConstant(msg) => {
                write!(f, "operation needs constant rational coordinates: {msg}")
            }
            LatticeError::NotPseff(msg) => write!(f, "not pseudoeffective: {msg}"),
            LatticeError::Unbounded(msg) => write!(f, "unbounded threshold: {msg}"),
            LatticeError::UnknownClass(msg) => write!(f, "unknown class: {msg}"),
            LatticeError::Invalid(msg) => write!(f, "invalid lattice data: {msg}"),
            LatticeError::Exact(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for LatticeError {}

impl From<ExactError> for LatticeError {
    fn from(e: ExactError) -> Self {
        LatticeError::Exact(e)
    }
}

/// A declared linear equivalence between two nonnegative combinations of
/// the generating classes (both sides as coordinate vectors).
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub lhs: Vec<BigRational>,
    pub rhs: Vec<BigRational>,
}

/// The intersection lattice of a surface.
///
/// `basis` is a generating family of curve classes, not necessarily
/// independent: `gram` is its pairing matrix, and the kernel of `gram`
/// records the numerically trivial combinations. `neg_curves` are the
/// indices of the irreducible curves of negative self-intersection;
/// together with `eff_generators` they generate the pseudoeffective cone,
/// and the nef cone is its dual.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceLattice {
    label: String,
    basis: Vec<String>,
    gram: Vec<Vec<BigRational>>,
    canonical_class: Vec<BigRational>,
    neg_curves: Vec<usize>,
    eff_generators: Vec<Vec<BigRational>>,
    linear_relations: Vec<Relation>,
}

impl SurfaceLattice {
    /// Validates and builds a surface lattice. `canonical_class` holds the
    /// coordinates of the canonical class `K` itself.
    pub fn new(
        label: impl Into<String>,
        basis: Vec<String>,
        gram: Vec<Vec<BigRational>>,
        canonical_class: Vec<BigRational>,
        neg_curves: Vec<usize>,
        eff_generators: Vec<Vec<BigRational>>,
        linear_relations: Vec<Relation>,
    ) -> Result<SurfaceLattice, LatticeError> {
        let label = label.into();
        let n = basis.len();
        if gram.len() != n || gram.iter().any(|row| row.len() != n) {
            return Err(LatticeError::Dimension(format!(
                "gram matrix must be {n}x{n}"
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::Invalid(format!(
                        "gram matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        if canonical_class.len() != n {
            return Err(LatticeError::Dimension(
                "canonical class length mismatch".into(),
            ));
        }
        for &i in &neg_curves {
            if i >= n {
                return Err(LatticeError::Dimension(format!(
                    "negative-curve index {i} out of range"
                )));
            }
            if !gram[i][i].is_negative() {
                return Err(LatticeError::Invalid(format!(
                    "declared negative curve {} has self-intersection {}",
                    basis[i], gram[i][i]
                )));
            }
        }
        if eff_generators.iter().any(|g| g.len() != n) {
            return Err(LatticeError::Dimension(
                "effective-cone generator length mismatch".into(),
            ));
        }
        for rel in &linear_relations {
            if rel.lhs.len() != n || rel.rhs.len() != n {
                return Err(LatticeError::Dimension(
                    "relation coordinate length mismatch".into(),
                ));
            }
            let diff: Vec<BigRational> = rel
                .lhs
                .iter()
                .zip(&rel.rhs)
                .map(|(a, b)| a - b)
                .collect();
            if !mat_vec(&gram, &diff).iter().all(Zero::is_zero) {
                return Err(LatticeError::Invalid(format!(
                    "declared relation is not numerically trivial in {label}"
                )));
            }
        }
        Ok(SurfaceLattice {
            label,
            basis,
            gram,
            canonical_class,
            neg_curves,
            eff_generators,
            linear_relations,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }

    pub fn gram(&self) -> &[Vec<BigRational>] {
        &self.gram
    }

    pub fn canonical_coords(&self) -> &[BigRational] {
        &self.canonical_class
    }

    pub fn neg_curves(&self) -> &[usize] {
        &self.neg_curves
    }

    pub fn eff_generator_coords(&self) -> &[Vec<BigRational>] {
        &self.eff_generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.linear_relations
    }

    /// A basis of the numerically trivial combinations of the generators.
    pub fn kernel(&self) -> Vec<Vec<BigRational>> {
        kernel_basis(&self.gram)
    }

    /// The full declared generating set of the pseudoeffective cone:
    /// negative curves first, then the extra generators, deduplicated.
    pub fn pseff_generators(&self) -> Vec<Vec<BigRational>> {
        let n = self.rank();
        let mut gens: Vec<Vec<BigRational>> = Vec::new();
        for &i in &self.neg_curves {
            let mut e = vec![BigRational::zero(); n];
            e[i] = BigRational::from_integer(1.into());
            gens.push(e);
        }
        for g in &self.eff_generators {
            if !gens.contains(g) {
                gens.push(g.clone());
            }
        }
        gens
    }
}

/// The intersection lattice of a threefold: a basis of divisor classes
/// with their full symmetric triple-intersection tensor, the canonical
/// class, the pairing of each basis class with each extremal curve ray,
/// generators of the pseudoeffective cone of divisors, and named derived
/// classes.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreefoldLattice {
    label: String,
    basis: Vec<String>,
    triple: Vec<Vec<Vec<BigRational>>>,
    canonical_class: Vec<BigRational>,
    mori_rays: Vec<Vec<BigRational>>,
    eff_generators: Vec<Vec<BigRational>>,
    derived_classes: Vec<(String, Vec<BigRational>)>,
}

impl ThreefoldLattice {
    /// Validates and builds a threefold lattice from sparse symmetric
    /// triple-intersection entries (missing entries are zero).
    pub fn new(
        label: impl Into<String>,
        basis: Vec<String>,
        triple_entries: Vec<((usize, usize, usize), BigRational)>,
        canonical_class: Vec<BigRational>,
        mori_rays: Vec<Vec<BigRational>>,
        eff_generators: Vec<Vec<BigRational>>,
        derived_classes: Vec<(String, Vec<BigRational>)>,
    ) -> Result<ThreefoldLattice, LatticeError> {
        let n = basis.len();
        let mut triple = vec![vec![vec![BigRational::zero(); n]; n]; n];
        for ((i, j, k), value) in triple_entries {
            if i >= n || j >= n || k >= n {
                return Err(LatticeError::Dimension(format!(
                    "triple-intersection index ({i}, {j}, {k}) out of range"
                )));
            }
            // Fill all permutations of the (multi-)index.
            let perms = [
                (i, j, k),
                (i, k, j),
                (j, i, k),
                (j, k, i),
                (k, i, j),
                (k, j, i),
            ];
            for (a, b, c) in perms {
                triple[a][b][c] = value.clone();
            }
        }
        if canonical_class.len() != n {
            return Err(LatticeError::Dimension(
                "canonical class length mismatch".into(),
            ));
        }
        if mori_rays.iter().any(|r| r.len() != n)
            || eff_generators.iter().any(|g| g.len() != n)
            || derived_classes.iter().any(|(_, c)| c.len() != n)
        {
            return Err(LatticeError::Dimension(
                "ray, generator, or derived-class length mismatch".into(),
            ));
        }
        Ok(ThreefoldLattice {
            label: label.into(),
            basis,
            triple,
            canonical_class,
            mori_rays,
            eff_generators,
            derived_classes,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }

    pub fn canonical_coords(&self) -> &[BigRational] {
        &self.canonical_class
    }

    /// Pairing vectors `(D_1 . R, ..., D_n . R)` of the extremal rays.
    pub fn mori_rays(&self) -> &[Vec<BigRational>] {
        &self.mori_rays
    }

    pub fn eff_generator_coords(&self) -> &[Vec<BigRational>] {
        &self.eff_generators
    }

    pub fn derived_classes(&self) -> &[(String, Vec<BigRational>)] {
        &self.derived_classes
    }

    /// The triple intersection number of three basis classes.
    pub fn triple_entry(&self, i: usize, j: usize, k: usize) -> &BigRational {
        &self.triple[i][j][k]
    }
}

/// A surface or threefold lattice.
#[derive(Debug, Clone, PartialEq)]
pub enum Lattice {
    Surface(SurfaceLattice),
    Threefold(ThreefoldLattice),
}

impl Lattice {
    pub fn rank(&self) -> usize {
        match self {
            Lattice::Surface(s) => s.rank(),
            Lattice::Threefold(t) => t.rank(),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Lattice::Surface(s) => s.label(),
            Lattice::Threefold(t) => t.label(),
        }
    }

    pub fn basis_names(&self) -> &[String] {
        match self {
            Lattice::Surface(s) => s.basis_names(),
            Lattice::Threefold(t) => t.basis_names(),
        }
    }

    pub fn as_surface(&self) -> Result<&SurfaceLattice, LatticeError> {
        match self {
            Lattice::Surface(s) => Ok(s),
            Lattice::Threefold(t) => Err(LatticeError::Invalid(format!(
                "{} is a threefold lattice, expected a surface",
                t.label()
            ))),
        }
    }

    pub fn as_threefold(&self) -> Result<&ThreefoldLattice, LatticeError> {
        match self {
            Lattice::Threefold(t) => Ok(t),
            Lattice::Surface(s) => Err(LatticeError::Invalid(format!(
                "{} is a surface lattice, expected a threefold",
                s.label()
            ))),
        }
    }

    /// Coordinates of a named class: a basis element, or for threefolds a
    /// declared derived class.
    pub fn coords_of(&self, name: &str) -> Result<Vec<BigRational>, LatticeError> {
        if let Some(i) = self.basis_names().iter().position(|b| b == name) {
            let mut coords = vec![BigRational::zero(); self.rank()];
            coords[i] = BigRational::from_integer(1.into());
            return Ok(coords);
        }
        if let Lattice::Threefold(t) = self {
            if let Some((_, c)) = t.derived_classes.iter().find(|(n, _)| n == name) {
                return Ok(c.clone());
            }
        }
        Err(LatticeError::UnknownClass(format!(
            "{name} in lattice {}",
            self.label()
        )))
    }
}

/// Evidence that a class lies in the pseudoeffective cone: nonnegative
/// coefficients on the declared generators plus a numerically trivial
/// kernel correction, reassembling the class coordinatewise.
#[derive(Debug, Clone, PartialEq)]
pub struct PseffCertificate {
    /// Coefficients parallel to [`SurfaceLattice::pseff_generators`] (or the
    /// threefold's effective generators).
    pub generator_coeffs: Vec<BigRational>,
    /// Coefficients parallel to the Gram-kernel basis (empty for
    /// threefolds).
    pub kernel_coeffs: Vec<BigRational>,
}

/// Evidence that a class is *not* pseudoeffective: a functional with
/// `phi(D) > 0` and `phi(g) <= 0` on every declared generator.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparatingFunctional {
    pub coeffs: Vec<BigRational>,
}

/// The verified outcome of a pseudoeffectivity test.
#[derive(Debug, Clone, PartialEq)]
pub enum PseffDecision {
    Pseff(PseffCertificate),
    NotPseff(SeparatingFunctional),
}

impl PseffDecision {
    pub fn is_pseff(&self) -> bool {
        matches!(self, PseffDecision::Pseff(_))
    }
}

/// A divisor class: polynomial coordinates with respect to the generating
/// family of a shared lattice instance.
#[derive(Debug, Clone, PartialEq)]
pub struct DivClass {
    lattice: Rc<Lattice>,
    coords: Vec<Poly>,
}

impl DivClass {
    /// Builds a class, checking the coordinate length.
    pub fn new(lattice: Rc<Lattice>, coords: Vec<Poly>) -> Result<DivClass, LatticeError> {
        if coords.len() != lattice.rank() {
            return Err(LatticeError::Dimension(format!(
                "expected {} coordinates for {}, got {}",
                lattice.rank(),
                lattice.label(),
                coords.len()
            )));
        }
        Ok(DivClass { lattice, coords })
    }

    /// A class with constant rational coordinates.
    pub fn from_rationals(
        lattice: &Rc<Lattice>,
        coords: &[BigRational],
    ) -> Result<DivClass, LatticeError> {
        DivClass::new(
            lattice.clone(),
            coords.iter().map(|r| Poly::from_rat(r.clone())).collect(),
        )
    }

    /// The `i`-th generating class.
    pub fn basis_element(lattice: &Rc<Lattice>, i: usize) -> Result<DivClass, LatticeError> {
        if i >= lattice.rank() {
            return Err(LatticeError::Dimension(format!(
                "basis index {i} out of range in {}",
                lattice.label()
            )));
        }
        let mut coords = vec![Poly::zero(); lattice.rank()];
        coords[i] = Poly::one();
        DivClass::new(lattice.clone(), coords)
    }

    /// A named class (basis element or declared derived class).
    pub fn named(lattice: &Rc<Lattice>, name: &str) -> Result<DivClass, LatticeError> {
        let coords = lattice.coords_of(name)?;
        DivClass::from_rationals(lattice, &coords)
    }

    /// The canonical class `K`.
    pub fn canonical(lattice: &Rc<Lattice>) -> DivClass {
        let coords = match lattice.as_ref() {
            Lattice::Surface(s) => s.canonical_coords(),
            Lattice::Threefold(t) => t.canonical_coords(),
        };
        DivClass::from_rationals(lattice, coords).expect("canonical class validated on construction")
    }

    /// The anticanonical class `-K`.
    pub fn anticanonical(lattice: &Rc<Lattice>) -> DivClass {
        DivClass::canonical(lattice).neg()
    }

    pub fn lattice(&self) -> &Rc<Lattice> {
        &self.lattice
    }

    pub fn coords(&self) -> &[Poly] {
        &self.coords
    }

    fn check_same(&self, other: &DivClass) -> Result<(), LatticeError> {
        if Rc::ptr_eq(&self.lattice, &other.lattice) {
            Ok(())
        } else {
            Err(LatticeError::Mismatch(format!(
                "classes live in different lattice instances ({} vs {})",
                self.lattice.label(),
                other.lattice.label()
            )))
        }
    }

    pub fn add(&self, other: &DivClass) -> Result<DivClass, LatticeError> {
        self.check_same(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<_, _>>()?;
        DivClass::new(self.lattice.clone(), coords)
    }

    pub fn sub(&self, other: &DivClass) -> Result<DivClass, LatticeError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DivClass {
        DivClass {
            lattice: self.lattice.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    /// Multiplies every coordinate by a polynomial.
    pub fn scale_poly(&self, factor: &Poly) -> Result<DivClass, LatticeError> {
        let coords = self
            .coords
            .iter()
            .map(|c| c.checked_mul(factor))
            .collect::<Result<_, _>>()?;
        DivClass::new(self.lattice.clone(), coords)
    }

    /// Multiplies every coordinate by a scalar.
    pub fn scale(&self, factor: &Scalar) -> DivClass {
        DivClass {
            lattice: self.lattice.clone(),
            coords: self.coords.iter().map(|c| c.scale(factor)).collect(),
        }
    }

    /// Substitutes a value for a parameter in every coordinate.
    pub fn substitute(&self, var: Var, value: &Scalar) -> Result<DivClass, LatticeError> {
        let coords = self
            .coords
            .iter()
            .map(|c| c.substitute(var, value))
            .collect::<Result<_, _>>()?;
        Ok(DivClass {
            lattice: self.lattice.clone(),
            coords,
        })
    }

    /// Substitutes a polynomial for a parameter in every coordinate.
    pub fn subst_poly(&self, var: Var, replacement: &Poly) -> Result<DivClass, LatticeError> {
        let coords = self
            .coords
            .iter()
            .map(|c| c.subst_poly(var, replacement))
            .collect::<Result<_, _>>()?;
        Ok(DivClass {
            lattice: self.lattice.clone(),
            coords,
        })
    }

    /// True when every coordinate is constant.
    pub fn is_constant(&self) -> bool {
        self.coords.iter().all(Poly::is_constant)
    }

    /// Constant rational coordinates, or an error describing the parameter
    /// dependence.
    pub fn constant_coords(&self) -> Result<Vec<BigRational>, LatticeError> {
        self.coords
            .iter()
            .map(|c| {
                Ok(c.eval_constant()?
                    .to_rational("divisor coordinate")?)
            })
            .collect()
    }

    /// The intersection pairing on a surface lattice (a polynomial in the
    /// sweep parameters).
    pub fn pair(&self, other: &DivClass) -> Result<Poly, LatticeError> {
        self.check_same(other)?;
        let surface = self.lattice.as_surface()?;
        let gram = surface.gram();
        let mut total = Poly::zero();
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() || gram[i][j].is_zero() {
                    continue;
                }
                total = total.checked_add(&a.checked_mul(b)?.scale_rat(&gram[i][j]))?;
            }
        }
        Ok(total)
    }

    /// The self-intersection on a surface lattice.
    pub fn square(&self) -> Result<Poly, LatticeError> {
        self.pair(self)
    }

    /// The triple intersection number on a threefold lattice.
    pub fn triple(&self, b: &DivClass, c: &DivClass) -> Result<Poly, LatticeError> {
        self.check_same(b)?;
        self.check_same(c)?;
        let threefold = self.lattice.as_threefold()?;
        let mut total = Poly::zero();
        for (i, x) in self.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x.checked_mul(y)?;
                for (k, z) in c.coords.iter().enumerate() {
                    let t = threefold.triple_entry(i, j, k);
                    if z.is_zero() || t.is_zero() {
                        continue;
                    }
                    total = total.checked_add(&xy.checked_mul(z)?.scale_rat(t))?;
                }
            }
        }
        Ok(total)
    }

    /// The triple self-intersection on a threefold lattice.
    pub fn cube(&self) -> Result<Poly, LatticeError> {
        self.triple(self, self)
    }

    /// Exact nef test for a constant class: nonnegative pairing with every
    /// negative curve and every declared effective generator (surface), or
    /// with every extremal ray (threefold).
    pub fn is_nef(&self) -> Result<bool, LatticeError> {
        let coords = self.constant_coords()?;
        match self.lattice.as_ref() {
            Lattice::Surface(s) => {
                for gen in s.pseff_generators() {
                    let pairing = quadratic_form(s.gram(), &coords, &gen);
                    if pairing.is_negative() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Lattice::Threefold(t) => {
                for ray in t.mori_rays() {
                    if dot(&coords, ray).is_negative() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Exact pseudoeffectivity test with a verified certificate either way.
    ///
    /// A surface class is written as a nonnegative combination of the
    /// declared generators plus a free combination of the Gram kernel (the
    /// numerically trivial directions); the reassembled coordinates are
    /// checked against the class before returning.
    pub fn is_pseff(&self) -> Result<PseffDecision, LatticeError> {
        let coords = self.constant_coords()?;
        let (gens, kernel) = match self.lattice.as_ref() {
            Lattice::Surface(s) => (s.pseff_generators(), s.kernel()),
            Lattice::Threefold(t) => (t.eff_generator_coords().to_vec(), Vec::new()),
        };
        let n = coords.len();
        let columns = pseff_columns(&gens, &kernel, None);
        let a = columns_to_rows(&columns, n);
        match feasible(&a, &coords) {
            Feasibility::Feasible(x) => {
                let cert = split_certificate(&x, gens.len(), kernel.len());
                verify_certificate(&cert, &gens, &kernel, &coords)?;
                Ok(PseffDecision::Pseff(cert))
            }
            Feasibility::Infeasible(y) => {
                // y^T gen <= 0 for all generators and y^T D > 0.
                Ok(PseffDecision::NotPseff(SeparatingFunctional { coeffs: y }))
            }
        }
    }

    /// The largest `s >= 0` such that `self - s * direction` stays
    /// pseudoeffective, as an exact rational.
    pub fn pseff_threshold(&self, direction: &DivClass) -> Result<BigRational, LatticeError> {
        self.check_same(direction)?;
        let coords = self.constant_coords()?;
        let dir = direction.constant_coords()?;
        let (gens, kernel) = match self.lattice.as_ref() {
            Lattice::Surface(s) => (s.pseff_generators(), s.kernel()),
            Lattice::Threefold(t) => (t.eff_generator_coords().to_vec(), Vec::new()),
        };
        let n = coords.len();
        let columns = pseff_columns(&gens, &kernel, Some(&dir));
        let a = columns_to_rows(&columns, n);
        let mut objective = vec![BigRational::zero(); columns.len()];
        *objective.last_mut().expect("threshold column") = BigRational::from_integer(1.into());
        match maximize(&a, &coords, &objective) {
            Optimum::Optimal { value, .. } => Ok(value),
            Optimum::Unbounded => Err(LatticeError::Unbounded(format!(
                "threshold of {} along the given direction",
                self.lattice.label()
            ))),
            Optimum::Infeasible(_) => Err(LatticeError::NotPseff(
                "the class itself is not pseudoeffective".into(),
            )),
        }
    }
}

/// `x^T G y` for a rational Gram matrix.
pub fn quadratic_form(
    gram: &[Vec<BigRational>],
    x: &[BigRational],
    y: &[BigRational],
) -> BigRational {
    dot(x, &mat_vec(gram, y))
}

/// LP columns for pseudoeffectivity: generators, split kernel pairs, and an
/// optional threshold direction column.
fn pseff_columns(
    gens: &[Vec<BigRational>],
    kernel: &[Vec<BigRational>],
    direction: Option<&[BigRational]>,
) -> Vec<Vec<BigRational>> {
    let mut columns: Vec<Vec<BigRational>> = gens.to_vec();
    for k in kernel {
        columns.push(k.clone());
        columns.push(k.iter().map(|x| -x.clone()).collect());
    }
    if let Some(d) = direction {
        columns.push(d.to_vec());
    }
    columns
}

fn columns_to_rows(columns: &[Vec<BigRational>], n: usize) -> Vec<Vec<BigRational>> {
    (0..n)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect()
}

fn split_certificate(x: &[BigRational], ngens: usize, nkernel: usize) -> PseffCertificate {
    let generator_coeffs = x[..ngens].to_vec();
    let kernel_coeffs = (0..nkernel)
        .map(|j| &x[ngens + 2 * j] - &x[ngens + 2 * j + 1])
        .collect();
    PseffCertificate {
        generator_coeffs,
        kernel_coeffs,
    }
}

/// Reassembles a certificate coordinatewise and checks it against the class.
pub fn verify_certificate(
    cert: &PseffCertificate,
    gens: &[Vec<BigRational>],
    kernel: &[Vec<BigRational>],
    coords: &[BigRational],
) -> Result<(), LatticeError> {
    if cert.generator_coeffs.iter().any(Signed::is_negative) {
        return Err(LatticeError::Invalid(
            "certificate has a negative generator coefficient".into(),
        ));
    }
    let mut assembled = vec![BigRational::zero(); coords.len()];
    for (lambda, gen) in cert.generator_coeffs.iter().zip(gens) {
        for (a, g) in assembled.iter_mut().zip(gen) {
            *a += lambda * g;
        }
    }
    for (mu, k) in cert.kernel_coeffs.iter().zip(kernel) {
        for (a, g) in assembled.iter_mut().zip(k) {
            *a += mu * g;
        }
    }
    if assembled != coords {
        return Err(LatticeError::Invalid(
            "certificate does not reassemble the class".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_poly, rat, rat_int};

    fn rv(values: &[i64]) -> Vec<BigRational> {
        values.iter().map(|&v| rat_int(v)).collect()
    }

    /// The rank-3 threefold lattice with triple intersections
    /// H1.H2.H3 = 2, H1.H3^2 = H2.H3^2 = 1.
    fn threefold() -> Rc<Lattice> {
        let lat = ThreefoldLattice::new(
            "threefold",
            vec!["H1".into(), "H2".into(), "H3".into()],
            vec![
                ((0, 1, 2), rat_int(2)),
                ((0, 2, 2), rat_int(1)),
                ((1, 2, 2), rat_int(1)),
            ],
            rv(&[-1, -1, -1]),
            vec![rv(&[1, 0, 0]), rv(&[0, 1, 0]), rv(&[0, 0, 2])],
            vec![
                rv(&[1, -1, 2]),
                rv(&[-1, 1, 2]),
                rv(&[1, 0, 0]),
                rv(&[0, 1, 0]),
            ],
            vec![
                ("E1".into(), rv(&[1, -1, 2])),
                ("E2".into(), rv(&[-1, 1, 2])),
            ],
        )
        .unwrap();
        Rc::new(Lattice::Threefold(lat))
    }

    /// A rank-5 surface presented by 8 generating curves (kernel rank 3).
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
    fn triple_form_reproduces_the_sweep_polynomial() {
        let lat = threefold();
        let d = DivClass::new(
            lat.clone(),
            vec![
                parse_poly("1-u").unwrap(),
                Poly::one(),
                Poly::one(),
            ],
        )
        .unwrap();
        assert_eq!(d.cube().unwrap(), parse_poly("18-15*u").unwrap());
        let h3 = DivClass::named(&lat, "H3").unwrap();
        assert!(h3.cube().unwrap().is_zero());
        let minus_k = DivClass::anticanonical(&lat);
        assert_eq!(minus_k.cube().unwrap(), Poly::from_int(18));
    }

    #[test]
    fn anticanonical_square_is_five() {
        let lat = dp5_resolution();
        let minus_k = DivClass::anticanonical(&lat);
        assert_eq!(minus_k.square().unwrap(), Poly::from_int(5));
    }

    #[test]
    fn threefold_nef_and_pseff() {
        let lat = threefold();
        let minus_k = DivClass::anticanonical(&lat);
        assert!(minus_k.is_nef().unwrap());
        assert!(minus_k.is_pseff().unwrap().is_pseff());
        // -K - (3/2 + 1/10) H1 leaves the pseudoeffective cone.
        let h1 = DivClass::named(&lat, "H1").unwrap();
        let too_far = minus_k.sub(&h1.scale(&Scalar::Rat(rat(8, 5)))).unwrap();
        match too_far.is_pseff().unwrap() {
            PseffDecision::NotPseff(phi) => {
                // The functional separates: positive on the class.
                let coords = too_far.constant_coords().unwrap();
                assert!(dot(&phi.coeffs, &coords).is_positive());
            }
            PseffDecision::Pseff(_) => panic!("expected not pseudoeffective"),
        }
    }

    #[test]
    fn thresholds_match_the_cone_geometry() {
        let lat = threefold();
        let minus_k = DivClass::anticanonical(&lat);
        let h1 = DivClass::named(&lat, "H1").unwrap();
        let h3 = DivClass::named(&lat, "H3").unwrap();
        assert_eq!(minus_k.pseff_threshold(&h1).unwrap(), rat(3, 2));
        assert_eq!(minus_k.pseff_threshold(&h3).unwrap(), rat(1, 1));
        // An effective generator has threshold 1 along itself.
        let e1 = DivClass::named(&lat, "E1").unwrap();
        assert_eq!(e1.pseff_threshold(&e1).unwrap(), rat(1, 1));
    }

    #[test]
    fn surface_pseff_certificate_reassembles() {
        let lat = dp5_resolution();
        let minus_k = DivClass::anticanonical(&lat);
        match minus_k.is_pseff().unwrap() {
            PseffDecision::Pseff(cert) => {
                // Anticanonical class needs the kernel: its coordinates are
                // not a plain nonnegative combination in general, but the
                // verification inside is_pseff already reassembled it.
                assert_eq!(cert.generator_coeffs.len(), 8);
                assert_eq!(cert.kernel_coeffs.len(), 3);
            }
            PseffDecision::NotPseff(_) => panic!("-K must be pseudoeffective"),
        }
        // tau = pseff_threshold(-K, l0-direction) stays rational and the
        // class at tau + 1/1000 is outside the cone.
        let l0 = DivClass::basis_element(&lat, 0).unwrap();
        let tau = minus_k.pseff_threshold(&l0).unwrap();
        let beyond = minus_k
            .sub(&l0.scale(&Scalar::Rat(&tau + rat(1, 1000))))
            .unwrap();
        assert!(!beyond.is_pseff().unwrap().is_pseff());
        let at_tau = minus_k.sub(&l0.scale(&Scalar::Rat(tau))).unwrap();
        assert!(at_tau.is_pseff().unwrap().is_pseff());
    }

    #[test]
    fn mismatched_lattices_are_rejected() {
        let a = threefold();
        let b = threefold();
        let ka = DivClass::anticanonical(&a);
        let kb = DivClass::anticanonical(&b);
        assert!(matches!(ka.add(&kb), Err(LatticeError::Mismatch(_))));
    }
}
