//! Exact-arithmetic engine for divisor computations on surfaces and threefolds.
//!
//! The crate is organised in six layers, from the arithmetic kernel up to the
//! command-line surface:
//!
//! * [`exact`] — rationals, real quadratic extensions, sparse polynomials,
//!   rational functions, piecewise functions, exact root isolation for low
//!   degrees, and verified numeric integration enclosures.
//! * [`lattice`] — divisor-class lattices: Gram pairings, triple products,
//!   nefness and pseudo-effectivity with exact linear-programming certificates.
//! * [`zariski`] — Zariski decomposition of pseudo-effective classes, pointwise
//!   and parametrically in one or two parameters, with chamber complexes and
//!   exact volume polynomials.
//! * [`invariants`] — Fujita S-invariants, restricted-filtration invariants on
//!   flags (surface, curve, point), correction terms, and the min-combiners
//!   producing delta-invariant lower bounds.
//! * [`scenarios`] — bundled, validated fixture data: curve configurations,
//!   intersection tables, ledgers, and expected values.
//! * [`cli`] — scenario-file parsing, the command surface, and deterministic
//!   machine-readable reports.

pub mod cli;
pub mod exact;
pub mod invariants;
pub mod lattice;
pub mod scenarios;
pub mod zariski;
