//! The bundled fixture registry.
//!
//! Every scenario here is plain data: intersection lattices entered row
//! by row, sweep ledgers with their restriction matrices, declared flag
//! points, and the expected value of each requested computation.  The
//! structural parts (Gram symmetry, degrees, kernel relations, ledger
//! identities, resolution links) are certified by
//! [`validate_fixture`](super::validate_fixture) before anything runs,
//! so the numbers below are backed by checks rather than trusted.

use super::{
    AzArgs, BoundPart, CandidateSpec, CasePointArgs, CaseRef, CertifiedMinArgs, ClassRef,
    CombineArgs, Computation, CurveSpec, DerivedSpec, ExpectSpec, FamilySpec, FlagCaseSpec,
    GraphSpec, LatticeKind, LatticeSpec, ModeSpec, NegativeSpec, NemuroArgs, NemuroPart, OpSpec,
    PieceSpec, PointPart, PointSpec, ProfileSpec, ProfileTailArgs, QuotientSpec, Relation,
    RelationSpec, RestrictedSpec, ScaledPieceSpec, Scenario, SurfaceDeltaArgs, SweepCurveArgs,
    SweepPointArgs, SweepRef, SweepSpec, TailPart, TermSpec, ThresholdArgs, TripleArgs,
    TripleSpec, VertexSpec,
};

/// Builds every bundled fixture.
pub(super) fn all() -> Vec<Scenario> {
    vec![
        threefold(),
        pencil_sweep(),
        fiber_sweep(),
        tangent_fiber_sweep(),
        triple_point_sweep(),
        a1_quotient_sweep(),
        two_a1_quotient_sweep(),
        a1_resolution(),
        two_a1_resolution(),
        conic_family(),
        graph_a1(),
        graph_2a1(),
        graph_a2(),
        graph_a3(),
        graph_smooth(),
    ]
}

// ---------------------------------------------------------------------------
// Small constructors
// ---------------------------------------------------------------------------

fn s(text: &str) -> String {
    text.into()
}

fn ss(items: &[&str]) -> Vec<String> {
    items.iter().map(|t| t.to_string()).collect()
}

fn grid(rows: &[&[&str]]) -> Vec<Vec<String>> {
    rows.iter().map(|r| ss(r)).collect()
}

fn term(class: &str, coeff: &str) -> TermSpec {
    TermSpec {
        class: s(class),
        coeff: s(coeff),
    }
}

fn relation(lhs: &[(&str, &str)], rhs: &[(&str, &str)]) -> RelationSpec {
    RelationSpec {
        lhs: lhs.iter().map(|(c, k)| term(c, k)).collect(),
        rhs: rhs.iter().map(|(c, k)| term(c, k)).collect(),
    }
}

fn derived(name: &str, class: &[&str]) -> DerivedSpec {
    DerivedSpec {
        name: s(name),
        class: ss(class),
    }
}

fn surface_lattice(
    name: &str,
    basis: &[&str],
    gram: &[&[&str]],
    canonical: &[&str],
    neg: &[&str],
    eff: &[&[&str]],
    k_square: &str,
) -> LatticeSpec {
    LatticeSpec {
        name: s(name),
        kind: LatticeKind::Surface,
        basis: ss(basis),
        gram: Some(grid(gram)),
        triples: Vec::new(),
        canonical: ss(canonical),
        neg_curves: ss(neg),
        mori_rays: Vec::new(),
        eff_generators: grid(eff),
        derived: Vec::new(),
        relations: Vec::new(),
        identities: Vec::new(),
        k_square: Some(s(k_square)),
        k_cube: None,
    }
}

fn curve(name: &str, lattice: Option<&str>, class: &[&str]) -> CurveSpec {
    CurveSpec {
        name: s(name),
        lattice: lattice.map(s),
        class: ss(class),
    }
}

fn point(name: &str, on: &str, incidence: &[(&str, &str)], exact: bool) -> PointSpec {
    PointSpec {
        name: s(name),
        on: s(on),
        incidence: incidence
            .iter()
            .map(|(c, m)| (s(c), s(m)))
            .collect(),
        exact,
    }
}

fn flag(curve: &str, points: &[&str]) -> FlagCaseSpec {
    FlagCaseSpec {
        curve: s(curve),
        polarization: s("-K"),
        a_curve: s("1"),
        points: ss(points),
    }
}

fn piece(lo: &str, hi: &str, positive: &[&str], negative: &[(&str, &str)]) -> PieceSpec {
    PieceSpec {
        lo: s(lo),
        hi: s(hi),
        positive: ss(positive),
        negative: negative
            .iter()
            .map(|(d, c)| NegativeSpec {
                divisor: s(d),
                coefficient: s(c),
            })
            .collect(),
    }
}

fn restricted(divisor: &str, curve: &str, class: &[&str]) -> RestrictedSpec {
    RestrictedSpec {
        divisor: s(divisor),
        curve: s(curve),
        class: ss(class),
    }
}

fn vertex(name: &str, kind: i64) -> VertexSpec {
    VertexSpec { name: s(name), kind }
}

fn edges(pairs: &[(&str, &str)]) -> Vec<[String; 2]> {
    pairs.iter().map(|(a, b)| [s(a), s(b)]).collect()
}

fn check(name: &str, op: OpSpec, rel: Relation, value: &str, provenance: &str) -> Computation {
    Computation {
        name: s(name),
        op,
        expect: Some(ExpectSpec {
            relation: rel,
            value: s(value),
        }),
        provenance: Some(s(provenance)),
    }
}

fn scenario(id: &str, description: &str, lattice: LatticeSpec) -> Scenario {
    Scenario {
        id: s(id),
        description: s(description),
        lattice,
        aux_lattices: Vec::new(),
        curves: Vec::new(),
        points: Vec::new(),
        flags: Vec::new(),
        ledger: Vec::new(),
        family: Vec::new(),
        dual_graph: None,
        quotient: None,
        compute: Vec::new(),
    }
}

// ---------------------------------------------------------------------------
// Shared lattices and sweeps
// ---------------------------------------------------------------------------

/// The ambient threefold: three hyperplane-type generators with
/// `H1.H2.H3 = 2`, `H1.H3^2 = H2.H3^2 = 1`, and all other triples zero.
fn threefold_lattice() -> LatticeSpec {
    LatticeSpec {
        name: s("X"),
        kind: LatticeKind::Threefold,
        basis: ss(&["H1", "H2", "H3"]),
        gram: None,
        triples: vec![
            TripleSpec {
                classes: [s("H1"), s("H2"), s("H3")],
                value: s("2"),
            },
            TripleSpec {
                classes: [s("H1"), s("H3"), s("H3")],
                value: s("1"),
            },
            TripleSpec {
                classes: [s("H2"), s("H3"), s("H3")],
                value: s("1"),
            },
        ],
        canonical: ss(&["-1", "-1", "-1"]),
        neg_curves: Vec::new(),
        mori_rays: grid(&[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "2"]]),
        eff_generators: grid(&[
            &["1", "-1", "2"],
            &["-1", "1", "2"],
            &["1", "0", "0"],
            &["0", "1", "0"],
        ]),
        derived: vec![
            derived("E1", &["1", "-1", "2"]),
            derived("E2", &["-1", "1", "2"]),
            derived("H1+H2", &["1", "1", "0"]),
        ],
        relations: Vec::new(),
        identities: vec![relation(
            &[("E1", "1"), ("E2", "1")],
            &[("H3", "4")],
        )],
        k_square: None,
        k_cube: Some(s("18")),
    }
}

/// Degree-5 surface lattice presented on the minimal resolution of one
/// `A1` point: seven generating curves, two of them fractional classes.
fn a1_surface() -> LatticeSpec {
    let mut lat = surface_lattice(
        "S-a1",
        &["l1", "l2", "l3", "l4", "e1", "e2", "e3"],
        &[
            &["-1", "1", "0", "0", "1", "0", "0"],
            &["1", "-1", "0", "0", "0", "1", "1"],
            &["0", "0", "-1/2", "1/2", "1/2", "1", "0"],
            &["0", "0", "1/2", "-1/2", "1/2", "0", "1"],
            &["1", "0", "1/2", "1/2", "-1/2", "0", "0"],
            &["0", "1", "1", "0", "0", "-1", "0"],
            &["0", "1", "0", "1", "0", "0", "-1"],
        ],
        &["-2", "-1", "0", "0", "-2", "0", "0"],
        &["l1", "l2", "l3", "l4", "e1", "e2", "e3"],
        &[],
        "5",
    );
    lat.relations = vec![relation(
        &[("l3", "1"), ("l4", "1")],
        &[("l1", "1"), ("l2", "1")],
    )];
    lat.identities = vec![relation(
        &[("-K", "1")],
        &[("l1", "2"), ("l2", "1"), ("e1", "2")],
    )];
    lat
}

/// Degree-5 surface lattice presented on the minimal resolution of two
/// `A1` points: five generating curves.
fn two_a1_surface() -> LatticeSpec {
    let mut lat = surface_lattice(
        "S-2a1",
        &["l1", "l2", "l3", "e1", "e2"],
        &[
            &["-1", "1", "0", "1", "0"],
            &["1", "-1", "0", "0", "1"],
            &["0", "0", "0", "1/2", "1/2"],
            &["1", "0", "1/2", "-1/2", "0"],
            &["0", "1", "1/2", "0", "-1/2"],
        ],
        &["-2", "-1", "0", "-2", "0"],
        &["l1", "l2", "e1", "e2"],
        &[&["0", "0", "1", "0", "0"]],
        "5",
    );
    lat.relations = vec![
        relation(&[("l3", "2")], &[("l1", "1"), ("l2", "1")]),
        relation(&[("l1", "1"), ("e1", "2")], &[("l2", "1"), ("e2", "2")]),
    ];
    lat.identities = vec![relation(
        &[("-K", "1")],
        &[("l1", "2"), ("l2", "1"), ("e1", "2")],
    )];
    lat
}

/// The first-factor sweep ledger: nef down to `u = 1`, then one divisor
/// peels off until the threshold `3/2`.
fn h1_pieces() -> Vec<PieceSpec> {
    vec![
        piece("0", "1", &["1 - u", "1", "1"], &[]),
        piece("1", "3/2", &["0", "2 - u", "3 - 2*u"], &[("E2", "u - 1")]),
    ]
}

fn a1_sweep() -> SweepSpec {
    SweepSpec {
        name: s("H1"),
        surface: a1_surface(),
        s_class: s("H1"),
        tau: s("3/2"),
        pieces: h1_pieces(),
        restriction: grid(&[
            &["0", "1", "1"],
            &["0", "1", "0"],
            &["0", "0", "0"],
            &["0", "0", "0"],
            &["0", "0", "2"],
            &["0", "0", "0"],
            &["0", "0", "0"],
        ]),
        restricted: vec![restricted("E2", "Z", &["3", "1", "0", "0", "4", "0", "0"])],
        curves: Vec::new(),
        points: vec![point("P", "e1", &[("Z", "1"), ("l1", "1")], true)],
    }
}

fn two_a1_sweep() -> SweepSpec {
    SweepSpec {
        name: s("H1"),
        surface: two_a1_surface(),
        s_class: s("H1"),
        tau: s("3/2"),
        pieces: h1_pieces(),
        restriction: grid(&[
            &["0", "1", "1"],
            &["0", "1", "0"],
            &["0", "0", "0"],
            &["0", "0", "2"],
            &["0", "0", "0"],
        ]),
        restricted: vec![restricted("E2", "Z", &["3", "1", "0", "4", "0"])],
        curves: Vec::new(),
        points: vec![point("P", "e1", &[("Z", "1"), ("l1", "1")], true)],
    }
}

/// The third-factor sweep ledger: nef on the whole range `[0, 1]`.
fn h3_sweep(surface: LatticeSpec, restriction: &[&[&str]], points: Vec<PointSpec>) -> SweepSpec {
    SweepSpec {
        name: s("H3"),
        surface,
        s_class: s("H3"),
        tau: s("1"),
        pieces: vec![piece("0", "1", &["1", "1", "1 - u"], &[])],
        restriction: grid(restriction),
        restricted: Vec::new(),
        curves: Vec::new(),
        points,
    }
}

fn dp4_section_surface() -> LatticeSpec {
    surface_lattice(
        "S-dp4",
        &["C", "Z"],
        &[&["0", "2"], &["2", "0"]],
        &["-1", "-1"],
        &[],
        &[&["1", "0"], &["0", "1"]],
        "4",
    )
}

fn dp2_section_surface() -> LatticeSpec {
    surface_lattice(
        "S-dp2",
        &["C", "Z"],
        &[&["0", "4"], &["4", "0"]],
        &["-1/2", "-1/2"],
        &[],
        &[&["1", "0"], &["0", "1"]],
        "2",
    )
}

// ---------------------------------------------------------------------------
// The threefold fixture
// ---------------------------------------------------------------------------

fn threefold() -> Scenario {
    let mut sc = scenario(
        "threefold-3.3",
        "Smooth divisor of class (1,1,2) in P1 x P1 x P2: triple intersections, \
         the three anticanonical sweep ledgers, volume-comparison bounds, and \
         the profiled tail integral",
        threefold_lattice(),
    );
    sc.ledger = vec![
        a1_sweep(),
        h3_sweep(
            dp4_section_surface(),
            &[&["1/2", "1/2", "1"], &["1/2", "1/2", "0"]],
            Vec::new(),
        ),
        SweepSpec {
            name: s("H1+H2"),
            surface: dp2_section_surface(),
            s_class: s("H1+H2"),
            tau: s("1"),
            pieces: vec![piece("0", "1", &["1 - u", "1 - u", "1"], &[])],
            restriction: grid(&[&["1", "1", "1/2"], &["0", "0", "1/2"]]),
            restricted: Vec::new(),
            curves: Vec::new(),
            points: Vec::new(),
        },
    ];

    let scaled_mode = ModeSpec::Scaled(vec![
        ScaledPieceSpec {
            lo: s("0"),
            hi: s("1"),
            lambda: s("1"),
        },
        ScaledPieceSpec {
            lo: s("1"),
            hi: s("3/2"),
            lambda: s("7/3 - 4/3*u"),
        },
    ]);
    let profile_mode = ModeSpec::Profile(ProfileSpec {
        recip_num: s("19 + 8*t + t^2"),
        recip_den: s("24"),
        t_of_u: s("1 - u"),
        t_lo: s("0"),
        t_hi: s("1"),
    });
    let scaled_lct: std::collections::BTreeMap<String, String> =
        [(s("E2"), s("1"))].into_iter().collect();
    let tail_args = |part: TailPart, add: Option<&str>| ProfileTailArgs {
        weight_num: s("297 - 756*u + 720*u^2 - 304*u^3 + 48*u^4"),
        weight_den: s("3 - 2*u"),
        scale: s("1/6"),
        t_of_u_num: s("u - 1"),
        t_of_u_den: s("3 - 2*u"),
        breakpoint: s("-1/2 + 1/6*sqrt(21)"),
        branch_num: s("13 + 18*t + 6*t^2"),
        branch_den: s("15 + 12*t"),
        lo: s("1"),
        hi: s("3/2"),
        add: add.map(s),
        eps: s("1/1000000000"),
        part,
    };

    sc.compute = vec![
        check(
            "anticanonical-cube",
            OpSpec::Cube(ClassRef {
                class: s("-K"),
                lattice: None,
            }),
            Relation::Eq,
            "18",
            "derived",
        ),
        check(
            "triple-h1-h2-h3",
            OpSpec::Triple(TripleArgs {
                a: s("H1"),
                b: s("H2"),
                c: s("H3"),
            }),
            Relation::Eq,
            "2",
            "stated",
        ),
        check(
            "triple-h1-h3-h3",
            OpSpec::Triple(TripleArgs {
                a: s("H1"),
                b: s("H3"),
                c: s("H3"),
            }),
            Relation::Eq,
            "1",
            "stated",
        ),
        check(
            "threshold-h1",
            OpSpec::PseffThreshold(ThresholdArgs {
                class: s("-K"),
                along: s("H1"),
                lattice: None,
            }),
            Relation::Eq,
            "3/2",
            "stated",
        ),
        check(
            "threshold-h3",
            OpSpec::PseffThreshold(ThresholdArgs {
                class: s("-K"),
                along: s("H3"),
                lattice: None,
            }),
            Relation::Eq,
            "1",
            "stated",
        ),
        check(
            "threshold-h1-plus-h2",
            OpSpec::PseffThreshold(ThresholdArgs {
                class: s("-K"),
                along: s("H1+H2"),
                lattice: None,
            }),
            Relation::Eq,
            "1",
            "stated",
        ),
        check(
            "ledger-h1",
            OpSpec::LedgerCheck(SweepRef { sweep: s("H1") }),
            Relation::Eq,
            "true",
            "derived",
        ),
        check(
            "ledger-h3",
            OpSpec::LedgerCheck(SweepRef { sweep: s("H3") }),
            Relation::Eq,
            "true",
            "derived",
        ),
        check(
            "ledger-h1-plus-h2",
            OpSpec::LedgerCheck(SweepRef {
                sweep: s("H1+H2"),
            }),
            Relation::Eq,
            "true",
            "derived",
        ),
        check(
            "s-divisor-h1",
            OpSpec::SThreefold(SweepRef { sweep: s("H1") }),
            Relation::Eq,
            "175/288",
            "derived",
        ),
        check(
            "s-divisor-h3",
            OpSpec::SThreefold(SweepRef { sweep: s("H3") }),
            Relation::Eq,
            "4/9",
            "stated",
        ),
        check(
            "s-divisor-h1-plus-h2",
            OpSpec::SThreefold(SweepRef {
                sweep: s("H1+H2"),
            }),
            Relation::Eq,
            "7/18",
            "stated",
        ),
        check(
            "local-h3-profile-constant",
            OpSpec::Nemuro(NemuroArgs {
                sweep: s("H3"),
                lct: Default::default(),
                mode: profile_mode.clone(),
                part: NemuroPart::Constant,
            }),
            Relation::Eq,
            "143/144",
            "stated",
        ),
        check(
            "local-h3-profile-coefficient",
            OpSpec::Nemuro(NemuroArgs {
                sweep: s("H3"),
                lct: Default::default(),
                mode: profile_mode,
                part: NemuroPart::Coefficient,
            }),
            Relation::Eq,
            "0",
            "derived",
        ),
        check(
            "local-h3-plain-coefficient",
            OpSpec::Nemuro(NemuroArgs {
                sweep: s("H3"),
                lct: Default::default(),
                mode: ModeSpec::Plain,
                part: NemuroPart::Coefficient,
            }),
            Relation::Eq,
            "2/3",
            "derived",
        ),
        check(
            "local-h3-plain-constant",
            OpSpec::Nemuro(NemuroArgs {
                sweep: s("H3"),
                lct: Default::default(),
                mode: ModeSpec::Plain,
                part: NemuroPart::Constant,
            }),
            Relation::Eq,
            "0",
            "derived",
        ),
        check(
            "local-h1-scaled-constant",
            OpSpec::Nemuro(NemuroArgs {
                sweep: s("H1"),
                lct: scaled_lct.clone(),
                mode: scaled_mode.clone(),
                part: NemuroPart::Constant,
            }),
            Relation::Eq,
            "7/288",
            "stated",
        ),
        check(
            "local-h1-scaled-coefficient",
            OpSpec::Nemuro(NemuroArgs {
                sweep: s("H1"),
                lct: scaled_lct.clone(),
                mode: scaled_mode.clone(),
                part: NemuroPart::Coefficient,
            }),
            Relation::Eq,
            "80/81",
            "stated",
        ),
        check(
            "local-h1-scaled-function",
            OpSpec::Nemuro(NemuroArgs {
                sweep: s("H1"),
                lct: scaled_lct.clone(),
                mode: scaled_mode.clone(),
                part: NemuroPart::Function,
            }),
            Relation::Eq,
            "(63*t + 2560)/(2592*t)",
            "derived",
        ),
        check(
            "local-h1-scaled-delta-function",
            OpSpec::Nemuro(NemuroArgs {
                sweep: s("H1"),
                lct: scaled_lct.clone(),
                mode: scaled_mode.clone(),
                part: NemuroPart::DeltaFunction,
            }),
            Relation::Eq,
            "(2592*t)/(2560 + 63*t)",
            "stated",
        ),
        check(
            "combined-h1-at-one",
            OpSpec::Lemma34(CombineArgs {
                sweep: s("H1"),
                lct: scaled_lct.clone(),
                mode: scaled_mode.clone(),
                delta: s("1"),
                part: BoundPart::Bound,
            }),
            Relation::Eq,
            "2592/2623",
            "derived",
        ),
        check(
            "combined-h1-at-fifteen-thirteenths",
            OpSpec::Lemma34(CombineArgs {
                sweep: s("H1"),
                lct: scaled_lct.clone(),
                mode: scaled_mode.clone(),
                delta: s("15/13"),
                part: BoundPart::Bound,
            }),
            Relation::Eq,
            "38880/34225",
            "derived",
        ),
        check(
            "combined-h1-critical-refined",
            OpSpec::Lemma34(CombineArgs {
                sweep: s("H1"),
                lct: scaled_lct.clone(),
                mode: scaled_mode.clone(),
                delta: s("2560/2529"),
                part: BoundPart::Refined,
            }),
            Relation::Eq,
            "1",
            "derived",
        ),
        check(
            "combined-h1-critical-boundary",
            OpSpec::Lemma34(CombineArgs {
                sweep: s("H1"),
                lct: scaled_lct,
                mode: scaled_mode,
                delta: s("2560/2529"),
                part: BoundPart::Boundary,
            }),
            Relation::Eq,
            "true",
            "derived",
        ),
        check(
            "tail-split",
            OpSpec::ProfileTail(tail_args(TailPart::Split, None)),
            Relation::Eq,
            "3/2 - 1/14*sqrt(21)",
            "derived",
        ),
        check(
            "tail-head",
            OpSpec::ProfileTail(tail_args(TailPart::Head, None)),
            Relation::Eq,
            "47/441 - 1/294*sqrt(21)",
            "derived",
        ),
        check(
            "tail-exact",
            OpSpec::ProfileTail(tail_args(TailPart::Exact, None)),
            Relation::Eq,
            "247/2016",
            "stated",
        ),
        check(
            "tail-chain",
            OpSpec::ProfileTail(tail_args(TailPart::Chain, Some("247/288"))),
            Relation::Eq,
            "247/252",
            "stated",
        ),
    ];
    sc
}

// ---------------------------------------------------------------------------
// The four section sweeps
// ---------------------------------------------------------------------------

fn sweep_records(
    sweep: &str,
    curve: &str,
    point_name: &str,
    s_divisor: (&str, &str),
    s_curve: (&str, &str),
    base: (&str, &str),
    correction: (Relation, &str, &str),
    total: (Relation, &str, &str),
    bound: (&str, &str),
    attained: (&str, &str),
    boundary: &str,
) -> Vec<Computation> {
    vec![
        check(
            "ledger",
            OpSpec::LedgerCheck(SweepRef { sweep: s(sweep) }),
            Relation::Eq,
            "true",
            "derived",
        ),
        check(
            "s-divisor",
            OpSpec::SThreefold(SweepRef { sweep: s(sweep) }),
            Relation::Eq,
            s_divisor.0,
            s_divisor.1,
        ),
        check(
            "s-curve",
            OpSpec::SWCurve(SweepCurveArgs {
                sweep: s(sweep),
                curve: s(curve),
            }),
            Relation::Eq,
            s_curve.0,
            s_curve.1,
        ),
        check(
            "point-base",
            OpSpec::SWPoint(SweepPointArgs {
                sweep: s(sweep),
                curve: s(curve),
                point: s(point_name),
                part: PointPart::Base,
            }),
            Relation::Eq,
            base.0,
            base.1,
        ),
        check(
            "point-correction",
            OpSpec::SWPoint(SweepPointArgs {
                sweep: s(sweep),
                curve: s(curve),
                point: s(point_name),
                part: PointPart::Correction,
            }),
            correction.0,
            correction.1,
            correction.2,
        ),
        check(
            "point-total",
            OpSpec::SWPoint(SweepPointArgs {
                sweep: s(sweep),
                curve: s(curve),
                point: s(point_name),
                part: PointPart::Total,
            }),
            total.0,
            total.1,
            total.2,
        ),
        check(
            "combined-bound",
            OpSpec::AzCombine(AzArgs {
                sweep: s(sweep),
                curve: s(curve),
                point: s(point_name),
                part: BoundPart::Bound,
            }),
            Relation::Eq,
            bound.0,
            bound.1,
        ),
        check(
            "combined-attained",
            OpSpec::AzCombine(AzArgs {
                sweep: s(sweep),
                curve: s(curve),
                point: s(point_name),
                part: BoundPart::Attained,
            }),
            Relation::Eq,
            attained.0,
            attained.1,
        ),
        check(
            "combined-boundary",
            OpSpec::AzCombine(AzArgs {
                sweep: s(sweep),
                curve: s(curve),
                point: s(point_name),
                part: BoundPart::Boundary,
            }),
            Relation::Eq,
            boundary,
            "derived",
        ),
    ]
}

fn pencil_sweep() -> Scenario {
    let mut sc = scenario(
        "dp2-lemma3.8",
        "Sweep of the sum of the two rulings, restricted to a degree-2 \
         section cut by a bidegree pencil",
        threefold_lattice(),
    );
    sc.ledger = vec![SweepSpec {
        name: s("H1+H2"),
        surface: dp2_section_surface(),
        s_class: s("H1+H2"),
        tau: s("1"),
        pieces: vec![piece("0", "1", &["1 - u", "1 - u", "1"], &[])],
        restriction: grid(&[&["1", "1", "1/2"], &["0", "0", "1/2"]]),
        restricted: Vec::new(),
        curves: Vec::new(),
        points: vec![point("P", "C", &[("Z", "0")], true)],
    }];
    sc.compute = sweep_records(
        "H1+H2",
        "C",
        "P",
        ("7/18", "stated"),
        ("31/36", "stated"),
        ("1", "stated"),
        (Relation::Eq, "0", "derived"),
        (Relation::Eq, "1", "stated"),
        ("1", "stated"),
        ("point", "derived"),
        "true",
    );
    sc
}

fn fiber_sweep() -> Scenario {
    let mut sc = scenario(
        "dp4-lemma3.9",
        "Sweep of the second-ruling fiber class, restricted to a smooth \
         degree-4 section with a transverse flag",
        threefold_lattice(),
    );
    sc.ledger = vec![h3_sweep(
        dp4_section_surface(),
        &[&["1/2", "1/2", "1"], &["1/2", "1/2", "0"]],
        vec![point("P", "C", &[("Z", "0")], true)],
    )];
    sc.compute = sweep_records(
        "H3",
        "C",
        "P",
        ("4/9", "stated"),
        ("7/9", "stated"),
        ("1", "stated"),
        (Relation::Eq, "0", "derived"),
        (Relation::Eq, "1", "stated"),
        ("1", "stated"),
        ("point", "derived"),
        "true",
    );
    sc
}

fn tangent_fiber_sweep() -> Scenario {
    let mut sc = scenario(
        "weak-dp4-lemma3.10",
        "Sweep of the fiber class restricted to a weak degree-4 section \
         whose flag curve meets two (-2)-curves",
        threefold_lattice(),
    );
    let surface = surface_lattice(
        "S-weak-dp4",
        &["C", "e1", "e2"],
        &[
            &["0", "1", "1"],
            &["1", "-2", "0"],
            &["1", "0", "-2"],
        ],
        &["-2", "-1", "-1"],
        &["e1", "e2"],
        &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]],
        "4",
    );
    sc.ledger = vec![h3_sweep(
        surface,
        &[
            &["1", "1", "1"],
            &["1/2", "1/2", "0"],
            &["1/2", "1/2", "0"],
        ],
        vec![point("P", "C", &[("e1", "0"), ("e2", "0")], true)],
    )];
    sc.compute = sweep_records(
        "H3",
        "C",
        "P",
        ("4/9", "stated"),
        ("8/9", "stated"),
        ("7/9", "derived"),
        (Relation::Eq, "0", "derived"),
        (Relation::Eq, "7/9", "stated"),
        ("9/8", "derived"),
        ("curve", "derived"),
        "false",
    );
    sc
}

fn triple_point_sweep() -> Scenario {
    let mut sc = scenario(
        "dp4-lemma3.11",
        "Sweep of the fiber class restricted to a degenerate degree-4 \
         section carrying a triple intersection point",
        threefold_lattice(),
    );
    let surface = surface_lattice(
        "S-degenerate-dp4",
        &["C", "C'", "Z"],
        &[
            &["-1", "1", "4"],
            &["1", "-1", "0"],
            &["4", "0", "-4"],
        ],
        &["-3/2", "-1/2", "-1/2"],
        &["C", "C'", "Z"],
        &[],
        "4",
    );
    sc.ledger = vec![h3_sweep(
        surface,
        &[
            &["3/4", "3/4", "1"],
            &["1/4", "1/4", "1"],
            &["1/4", "1/4", "0"],
        ],
        vec![point("P", "C", &[("C'", "0"), ("Z", "1")], false)],
    )];
    sc.compute = sweep_records(
        "H3",
        "C",
        "P",
        ("4/9", "stated"),
        ("1", "stated"),
        ("5/6", "derived"),
        (Relation::Le, "1/36", "derived"),
        (Relation::Le, "31/36", "stated"),
        ("1", "stated"),
        ("curve", "derived"),
        "true",
    );
    sc
}

// ---------------------------------------------------------------------------
// The first-factor sweeps on the two singular degree-5 sections
// ---------------------------------------------------------------------------

fn quotient_records() -> Vec<Computation> {
    sweep_records(
        "H1",
        "e1",
        "P",
        ("175/288", "derived"),
        ("137/144", "stated"),
        ("59/96", "derived"),
        (Relation::Eq, "71/288", "stated"),
        (Relation::Eq, "31/36", "stated"),
        ("144/137", "derived"),
        ("curve", "derived"),
        "false",
    )
}

fn a1_quotient_sweep() -> Scenario {
    let mut sc = scenario(
        "dp5-a1-section4",
        "First-factor sweep restricted to a degree-5 section with one A1 \
         point, presented on its minimal resolution",
        threefold_lattice(),
    );
    sc.ledger = vec![a1_sweep()];
    sc.quotient = Some(QuotientSpec {
        resolution: s("dp5-a1-resolution"),
        contracted: ss(&["l0"]),
        correspondence: vec![
            [s("l1"), s("l1")],
            [s("l2"), s("e0")],
            [s("l3"), s("e2")],
            [s("l4"), s("e3")],
            [s("e1"), s("e1")],
            [s("e2"), s("l2")],
            [s("e3"), s("l3")],
        ],
    });
    sc.compute = quotient_records();
    sc
}

fn two_a1_quotient_sweep() -> Scenario {
    let mut sc = scenario(
        "dp5-2a1-section4",
        "First-factor sweep restricted to a degree-5 section with two A1 \
         points, presented on its minimal resolution",
        threefold_lattice(),
    );
    sc.ledger = vec![two_a1_sweep()];
    sc.quotient = Some(QuotientSpec {
        resolution: s("dp5-2a1-resolution"),
        contracted: ss(&["e1", "e2"]),
        correspondence: vec![
            [s("l1"), s("l3")],
            [s("l2"), s("l4")],
            [s("l3"), s("l1")],
            [s("e1"), s("l2")],
            [s("e2"), s("l5")],
        ],
    });
    sc.compute = quotient_records();
    sc
}

// ---------------------------------------------------------------------------
// Flag case tables on the two resolutions
// ---------------------------------------------------------------------------

fn a1_resolution_lattice() -> LatticeSpec {
    let mut lat = surface_lattice(
        "dp5-res-a1",
        &["l0", "l1", "l2", "l3", "e0", "e1", "e2", "e3"],
        &[
            &["-2", "0", "0", "0", "0", "1", "1", "1"],
            &["0", "-1", "0", "0", "1", "1", "0", "0"],
            &["0", "0", "-1", "0", "1", "0", "1", "0"],
            &["0", "0", "0", "-1", "1", "0", "0", "1"],
            &["0", "1", "1", "1", "-1", "0", "0", "0"],
            &["1", "1", "0", "0", "0", "-1", "0", "0"],
            &["1", "0", "1", "0", "0", "0", "-1", "0"],
            &["1", "0", "0", "1", "0", "0", "0", "-1"],
        ],
        &["0", "-1", "-1", "-1", "-2", "0", "0", "0"],
        &["l0", "l1", "l2", "l3", "e0", "e1", "e2", "e3"],
        &[],
        "5",
    );
    lat.relations = vec![relation(
        &[("l1", "1"), ("e0", "1")],
        &[("l0", "1"), ("e2", "1"), ("e3", "1")],
    )];
    lat
}

fn a1_resolution_graph() -> GraphSpec {
    GraphSpec {
        vertices: vec![
            vertex("l0", -2),
            vertex("l1", -1),
            vertex("l2", -1),
            vertex("l3", -1),
            vertex("e0", -1),
            vertex("e1", -1),
            vertex("e2", -1),
            vertex("e3", -1),
        ],
        edges: edges(&[
            ("l0", "e1"),
            ("l0", "e2"),
            ("l0", "e3"),
            ("l1", "e0"),
            ("l1", "e1"),
            ("l2", "e0"),
            ("l2", "e2"),
            ("l3", "e0"),
            ("l3", "e3"),
        ]),
    }
}

fn case_curve(name: &str, curve: &str, rel: Relation, value: &str, prov: &str) -> Computation {
    check(
        name,
        OpSpec::CaseCurve(CaseRef { curve: s(curve) }),
        rel,
        value,
        prov,
    )
}

fn case_point(
    name: &str,
    curve: &str,
    point: &str,
    rel: Relation,
    value: &str,
    prov: &str,
) -> Computation {
    check(
        name,
        OpSpec::CasePoint(CasePointArgs {
            curve: s(curve),
            point: s(point),
        }),
        rel,
        value,
        prov,
    )
}

fn case_bound(name: &str, curve: &str, value: &str) -> Computation {
    check(
        name,
        OpSpec::CaseBound(CaseRef { curve: s(curve) }),
        Relation::Eq,
        value,
        "derived",
    )
}

fn a1_resolution() -> Scenario {
    let mut sc = scenario(
        "dp5-a1-resolution",
        "Minimal resolution of the degree-5 surface with one A1 point: \
         the flag case table behind its delta invariant",
        a1_resolution_lattice(),
    );
    sc.curves = vec![curve("c5", None, &["0", "1", "0", "0", "0", "1", "0", "0"])];
    sc.points = vec![
        point("p-l0-e1", "l0", &[("e1", "1"), ("e2", "0"), ("e3", "0")], true),
        point("p-l0-gen", "l0", &[("e1", "0"), ("e2", "0"), ("e3", "0")], true),
        point("p-e0", "e0", &[("l1", "1"), ("l2", "0"), ("l3", "0")], false),
        point(
            "p-l1-gen",
            "l1",
            &[("e0", "0"), ("e1", "0"), ("l0", "0")],
            true,
        ),
        point(
            "p-l1-e1",
            "l1",
            &[("e0", "0"), ("e1", "1"), ("l0", "0")],
            true,
        ),
        point("p-e1", "e1", &[("l0", "0"), ("l1", "1")], false),
        point("p-c5", "c5", &[("l0", "0"), ("e0", "0")], true),
    ];
    sc.flags = vec![
        flag("l0", &["p-l0-e1", "p-l0-gen"]),
        flag("e0", &["p-e0"]),
        flag("l1", &["p-l1-gen", "p-l1-e1"]),
        flag("e1", &["p-e1"]),
        flag("c5", &["p-c5"]),
    ];
    sc.compute = vec![
        check(
            "threshold-l0",
            OpSpec::PseffThreshold(ThresholdArgs {
                class: s("-K"),
                along: s("l0"),
                lattice: None,
            }),
            Relation::Eq,
            "2",
            "stated",
        ),
        case_curve("order-l0", "l0", Relation::Eq, "17/15", "stated"),
        case_point("order-l0-node", "l0", "p-l0-e1", Relation::Eq, "1", "stated"),
        case_point("order-l0-generic", "l0", "p-l0-gen", Relation::Eq, "11/15", "stated"),
        check(
            "worst-l0",
            OpSpec::CaseWorst(CaseRef { curve: s("l0") }),
            Relation::Eq,
            "1",
            "derived",
        ),
        case_bound("bound-l0", "l0", "15/17"),
        case_curve("order-e0", "e0", Relation::Eq, "13/15", "stated"),
        case_point("order-e0-point", "e0", "p-e0", Relation::Le, "13/15", "stated"),
        case_bound("bound-e0", "e0", "15/13"),
        case_curve("order-l1", "l1", Relation::Eq, "13/15", "stated"),
        case_point("order-l1-generic", "l1", "p-l1-gen", Relation::Eq, "11/15", "stated"),
        case_point("order-l1-node", "l1", "p-l1-e1", Relation::Eq, "1", "stated"),
        case_bound("bound-l1", "l1", "1"),
        case_curve("order-e1", "e1", Relation::Eq, "1", "stated"),
        case_point("order-e1-point", "e1", "p-e1", Relation::Le, "13/15", "stated"),
        case_bound("bound-e1", "e1", "1"),
        case_curve("order-c5", "c5", Relation::Eq, "11/15", "stated"),
        case_point("order-c5-point", "c5", "p-c5", Relation::Eq, "23/30", "stated"),
        case_bound("bound-c5", "c5", "30/23"),
        check(
            "surface-delta",
            OpSpec::SurfaceDelta(SurfaceDeltaArgs {}),
            Relation::Eq,
            "15/17",
            "stated",
        ),
    ];
    sc
}

fn two_a1_resolution_lattice() -> LatticeSpec {
    surface_lattice(
        "dp5-res-2a1",
        &["l1", "l2", "l3", "l4", "l5", "e1", "e2"],
        &[
            &["-1", "0", "0", "0", "0", "1", "1"],
            &["0", "-1", "1", "0", "0", "1", "0"],
            &["0", "1", "-1", "1", "0", "0", "0"],
            &["0", "0", "1", "-1", "1", "0", "0"],
            &["0", "0", "0", "1", "-1", "0", "1"],
            &["1", "1", "0", "0", "0", "-2", "0"],
            &["1", "0", "0", "0", "1", "0", "-2"],
        ],
        &["-1", "-1", "-1", "-1", "-1", "-1", "-1"],
        &["l1", "l2", "l3", "l4", "l5", "e1", "e2"],
        &[],
        "5",
    )
}

fn two_a1_resolution_graph() -> GraphSpec {
    GraphSpec {
        vertices: vec![
            vertex("l1", -1),
            vertex("l2", -1),
            vertex("l3", -1),
            vertex("l4", -1),
            vertex("l5", -1),
            vertex("e1", -2),
            vertex("e2", -2),
        ],
        edges: edges(&[
            ("l1", "e1"),
            ("l1", "e2"),
            ("l2", "l3"),
            ("l2", "e1"),
            ("l3", "l4"),
            ("l4", "l5"),
            ("l5", "e2"),
        ]),
    }
}

fn two_a1_resolution() -> Scenario {
    let mut sc = scenario(
        "dp5-2a1-resolution",
        "Minimal resolution of the degree-5 surface with two A1 points: \
         the flag case table behind its delta invariant",
        two_a1_resolution_lattice(),
    );
    sc.curves = vec![curve("c5", None, &["0", "1", "1", "0", "0", "0", "0"])];
    sc.points = vec![
        point(
            "p-l1",
            "l1",
            &[("e1", "1"), ("e2", "0"), ("l2", "0"), ("l5", "0")],
            false,
        ),
        point(
            "p-e1",
            "e1",
            &[("l1", "1"), ("l2", "0"), ("e2", "0")],
            false,
        ),
        point("p-l2", "l2", &[("l3", "1"), ("e1", "0")], false),
        point(
            "p-l3",
            "l3",
            &[("l4", "1"), ("l2", "0"), ("e1", "0")],
            false,
        ),
        point("p-c5", "c5", &[("e1", "0"), ("l4", "0")], true),
    ];
    sc.flags = vec![
        flag("l1", &["p-l1"]),
        flag("e1", &["p-e1"]),
        flag("l2", &["p-l2"]),
        flag("l3", &["p-l3"]),
        flag("c5", &["p-c5"]),
    ];
    sc.compute = vec![
        check(
            "threshold-l1",
            OpSpec::PseffThreshold(ThresholdArgs {
                class: s("-K"),
                along: s("l1"),
                lattice: None,
            }),
            Relation::Eq,
            "3",
            "stated",
        ),
        case_curve("order-l1", "l1", Relation::Eq, "19/15", "stated"),
        case_point("order-l1-point", "l1", "p-l1", Relation::Le, "17/15", "stated"),
        case_bound("bound-l1", "l1", "15/19"),
        case_curve("order-e1", "e1", Relation::Eq, "17/15", "stated"),
        case_point("order-e1-point", "e1", "p-e1", Relation::Le, "19/15", "stated"),
        case_bound("bound-e1", "e1", "15/19"),
        case_curve("order-l2", "l2", Relation::Eq, "1", "stated"),
        case_point("order-l2-point", "l2", "p-l2", Relation::Le, "13/15", "stated"),
        case_bound("bound-l2", "l2", "1"),
        case_curve("order-l3", "l3", Relation::Eq, "13/15", "stated"),
        case_point("order-l3-point", "l3", "p-l3", Relation::Le, "13/15", "stated"),
        case_bound("bound-l3", "l3", "15/13"),
        case_curve("order-c5", "c5", Relation::Eq, "11/15", "stated"),
        case_point("order-c5-point", "c5", "p-c5", Relation::Eq, "23/30", "stated"),
        case_bound("bound-c5", "c5", "30/23"),
        check(
            "surface-delta",
            OpSpec::SurfaceDelta(SurfaceDeltaArgs {}),
            Relation::Eq,
            "15/19",
            "stated",
        ),
    ];
    sc
}

// ---------------------------------------------------------------------------
// The parametric degree-4 families
// ---------------------------------------------------------------------------

fn conic_surface() -> LatticeSpec {
    surface_lattice(
        "dp4-conic",
        &["e1", "l12", "l13", "l14", "l15", "B"],
        &[
            &["-1", "1", "1", "1", "1", "1"],
            &["1", "-1", "0", "0", "0", "0"],
            &["1", "0", "-1", "0", "0", "0"],
            &["1", "0", "0", "-1", "0", "0"],
            &["1", "0", "0", "0", "-1", "0"],
            &["1", "0", "0", "0", "0", "-1"],
        ],
        &["-3/2", "-1/2", "-1/2", "-1/2", "-1/2", "-1/2"],
        &["e1", "l12", "l13", "l14", "l15", "B"],
        &[
            &["1", "0", "0", "0", "0", "0"],
            &["0", "1", "0", "0", "0", "0"],
            &["0", "0", "1", "0", "0", "0"],
            &["0", "0", "0", "1", "0", "0"],
            &["0", "0", "0", "0", "1", "0"],
            &["0", "0", "0", "0", "0", "1"],
            &["1/2", "-1/2", "1/2", "1/2", "1/2", "-1/2"],
            &["1/2", "1/2", "-1/2", "1/2", "1/2", "-1/2"],
            &["1/2", "1/2", "1/2", "-1/2", "1/2", "-1/2"],
            &["1/2", "1/2", "1/2", "1/2", "-1/2", "-1/2"],
            &["1/2", "1/2", "1/2", "-1/2", "-1/2", "1/2"],
            &["1/2", "1/2", "-1/2", "1/2", "-1/2", "1/2"],
            &["1/2", "1/2", "-1/2", "-1/2", "1/2", "1/2"],
            &["1/2", "-1/2", "1/2", "1/2", "-1/2", "1/2"],
            &["1/2", "-1/2", "1/2", "-1/2", "1/2", "1/2"],
            &["1/2", "-1/2", "-1/2", "1/2", "1/2", "1/2"],
        ],
        "4",
    )
}

fn blowup_surface() -> LatticeSpec {
    surface_lattice(
        "dp4-blowup",
        &["Ct", "E", "l"],
        &[&["-1", "1", "1"], &["1", "-1", "1"], &["1", "1", "-1"]],
        &["-1", "-1", "-1"],
        &["Ct", "E", "l"],
        &[],
        "3",
    )
}

fn window_op(
    family: &str,
    curve: &str,
    point: Option<&str>,
    lo: &str,
    hi: Option<&str>,
) -> OpSpec {
    OpSpec::WindowOrders(super::WindowArgs {
        family: s(family),
        curve: s(curve),
        point: point.map(s),
        lo: s(lo),
        hi: hi.map(s),
    })
}

fn window_value_op(
    family: &str,
    curve: &str,
    point: Option<&str>,
    lo: &str,
    hi: Option<&str>,
    at: &str,
) -> OpSpec {
    OpSpec::WindowValue(super::WindowValueArgs {
        family: s(family),
        curve: s(curve),
        point: point.map(s),
        lo: s(lo),
        hi: hi.map(s),
        at: s(at),
    })
}

fn candidate(family: &str, curve: &str, point: Option<&str>, a: &str) -> CandidateSpec {
    CandidateSpec {
        family: s(family),
        curve: s(curve),
        point: point.map(s),
        a: s(a),
    }
}

fn conic_family() -> Scenario {
    let mut sc = scenario(
        "dp4-conic-parametric",
        "Degree-4 del Pezzo with three parametric polarization families: \
         window order functions, junction values, and certified minima",
        conic_surface(),
    );
    sc.aux_lattices = vec![blowup_surface()];
    sc.family = vec![
        FamilySpec {
            name: s("smooth"),
            lattice: None,
            var: s("t"),
            coords: ss(&[
                "3/2 + 1/2*t",
                "1/2 + 1/2*t",
                "1/2 + 1/2*t",
                "1/2 + 1/2*t",
                "1/2 + 1/2*t",
                "1/2 - 1/2*t",
            ]),
            lo: s("0"),
            hi: None,
        },
        FamilySpec {
            name: s("reducible"),
            lattice: None,
            var: s("t"),
            coords: ss(&["3/2 + t", "1/2", "1/2", "1/2", "1/2", "1/2 + t"]),
            lo: s("0"),
            hi: Some(s("1")),
        },
        FamilySpec {
            name: s("blowup"),
            lattice: Some(s("dp4-blowup")),
            var: s("t"),
            coords: ss(&["1 + t", "2 + t", "1"]),
            lo: s("0"),
            hi: None,
        },
    ];
    sc.points = vec![
        point(
            "pB",
            "e1",
            &[("B", "1"), ("l12", "0"), ("l13", "0"), ("l14", "0"), ("l15", "0")],
            true,
        ),
        point(
            "pl",
            "e1",
            &[("B", "0"), ("l12", "1"), ("l13", "0"), ("l14", "0"), ("l15", "0")],
            true,
        ),
        point(
            "pgen",
            "e1",
            &[("B", "0"), ("l12", "0"), ("l13", "0"), ("l14", "0"), ("l15", "0")],
            true,
        ),
        point("Q", "E", &[("Ct", "1"), ("l", "0")], true),
    ];
    let club = vec![
        candidate("smooth", "e1", Some("pB"), "1"),
        candidate("smooth", "e1", Some("pgen"), "1"),
        candidate("blowup", "E", None, "2"),
        candidate("blowup", "E", Some("Q"), "1"),
    ];
    let spade = vec![
        candidate("reducible", "e1", Some("pB"), "1"),
        candidate("reducible", "e1", Some("pl"), "1"),
        candidate("reducible", "e1", Some("pgen"), "1"),
    ];
    sc.compute = vec![
        check(
            "line-order-low",
            window_op("smooth", "e1", None, "0", Some("1")),
            Relation::Eq,
            "(17 + 4*t - t^2)/(24)",
            "stated",
        ),
        check(
            "line-order-high",
            window_op("smooth", "e1", None, "1", None),
            Relation::Eq,
            "(2 + 3*t)/(3 + 3*t)",
            "stated",
        ),
        check(
            "branch-point-low",
            window_op("smooth", "e1", Some("pB"), "0", Some("1")),
            Relation::Eq,
            "(19 + 8*t + t^2)/(24)",
            "stated",
        ),
        check(
            "generic-point-low",
            window_op("smooth", "e1", Some("pgen"), "0", Some("1")),
            Relation::Eq,
            "(9 + 15*t + 3*t^2 + t^3)/(12 + 12*t)",
            "stated",
        ),
        check(
            "branch-point-high",
            window_op("smooth", "e1", Some("pB"), "1", None),
            Relation::Eq,
            "(5 + 6*t + 3*t^2)/(6 + 6*t)",
            "stated",
        ),
        check(
            "generic-point-high",
            window_op("smooth", "e1", Some("pgen"), "1", None),
            Relation::Eq,
            "(5 + 6*t + 3*t^2)/(6 + 6*t)",
            "stated",
        ),
        check(
            "blowup-curve-order",
            window_op("blowup", "E", None, "0", Some("1")),
            Relation::Eq,
            "(8 + 12*t + 3*t^2)/(6 + 6*t)",
            "stated",
        ),
        check(
            "blowup-point-order",
            window_op("blowup", "E", Some("Q"), "0", Some("1")),
            Relation::Eq,
            "(4 + 6*t + 3*t^2)/(6 + 6*t)",
            "stated",
        ),
        check(
            "reducible-line-order",
            window_op("reducible", "e1", None, "0", Some("1")),
            Relation::Eq,
            "(17 + 30*t + 12*t^2)/(24 + 24*t)",
            "stated",
        ),
        check(
            "reducible-branch-point",
            window_op("reducible", "e1", Some("pB"), "0", Some("1")),
            Relation::Eq,
            "(19 + 30*t + 12*t^2)/(24 + 24*t)",
            "stated",
        ),
        check(
            "reducible-line-point",
            window_op("reducible", "e1", Some("pl"), "0", Some("1")),
            Relation::Eq,
            "(19 + 24*t)/(24 + 24*t)",
            "stated",
        ),
        check(
            "reducible-generic-point",
            window_op("reducible", "e1", Some("pgen"), "0", Some("1")),
            Relation::Eq,
            "(18 + 24*t)/(24 + 24*t)",
            "stated",
        ),
        check(
            "certified-min-low",
            OpSpec::CertifiedMin(CertifiedMinArgs {
                candidates: club.clone(),
                lo: s("0"),
                hi: Some(s("1")),
            }),
            Relation::Eq,
            "(24)/(19 + 8*t + t^2)",
            "stated",
        ),
        check(
            "certified-min-high",
            OpSpec::CertifiedMin(CertifiedMinArgs {
                candidates: club,
                lo: s("1"),
                hi: None,
            }),
            Relation::Eq,
            "(6 + 6*t)/(5 + 6*t + 3*t^2)",
            "stated",
        ),
        check(
            "certified-min-reducible",
            OpSpec::CertifiedMin(CertifiedMinArgs {
                candidates: spade,
                lo: s("0"),
                hi: Some(s("1")),
            }),
            Relation::Eq,
            "(24 + 24*t)/(19 + 30*t + 12*t^2)",
            "stated",
        ),
        check(
            "junction-from-below",
            window_value_op("smooth", "e1", Some("pB"), "0", Some("1"), "1"),
            Relation::Eq,
            "7/6",
            "derived",
        ),
        check(
            "junction-from-above",
            window_value_op("smooth", "e1", Some("pB"), "1", None, "1"),
            Relation::Eq,
            "7/6",
            "derived",
        ),
        check(
            "branch-point-at-zero",
            window_value_op("smooth", "e1", Some("pB"), "0", Some("1"), "0"),
            Relation::Eq,
            "19/24",
            "derived",
        ),
        check(
            "line-order-at-zero",
            window_value_op("smooth", "e1", None, "0", Some("1"), "0"),
            Relation::Eq,
            "17/24",
            "derived",
        ),
    ];
    sc
}

// ---------------------------------------------------------------------------
// Dual-graph fixtures
// ---------------------------------------------------------------------------

fn graph_a1() -> Scenario {
    let mut sc = scenario(
        "dp5-graph-a1",
        "Dual graph of the negative-curve configuration on the resolved \
         degree-5 surface with one A1 point",
        a1_resolution_lattice(),
    );
    sc.dual_graph = Some(a1_resolution_graph());
    sc
}

fn graph_2a1() -> Scenario {
    let mut sc = scenario(
        "dp5-graph-2a1",
        "Dual graph of the negative-curve configuration on the resolved \
         degree-5 surface with two A1 points",
        two_a1_resolution_lattice(),
    );
    sc.dual_graph = Some(two_a1_resolution_graph());
    sc
}

fn graph_a2() -> Scenario {
    let mut sc = scenario(
        "dp5-graph-a2",
        "Dual graph of the negative-curve chain on the resolved degree-5 \
         surface with one A2 point",
        surface_lattice(
            "dp5-res-a2",
            &["e4", "l14", "r1", "r2", "e3", "l12"],
            &[
                &["-1", "1", "0", "0", "0", "0"],
                &["1", "-1", "1", "0", "0", "0"],
                &["0", "1", "-2", "1", "0", "0"],
                &["0", "0", "1", "-2", "1", "1"],
                &["0", "0", "0", "1", "-1", "0"],
                &["0", "0", "0", "1", "0", "-1"],
            ],
            &["-2", "-3", "-2", "-1", "0", "0"],
            &["e4", "l14", "r1", "r2", "e3", "l12"],
            &[],
            "5",
        ),
    );
    sc.dual_graph = Some(GraphSpec {
        vertices: vec![
            vertex("e4", -1),
            vertex("l14", -1),
            vertex("r1", -2),
            vertex("r2", -2),
            vertex("e3", -1),
            vertex("l12", -1),
        ],
        edges: edges(&[
            ("e4", "l14"),
            ("l14", "r1"),
            ("r1", "r2"),
            ("r2", "e3"),
            ("r2", "l12"),
        ]),
    });
    sc
}

fn graph_a3() -> Scenario {
    let mut sc = scenario(
        "dp5-graph-a3",
        "Dual graph of the negative-curve chain on the resolved degree-5 \
         surface with one A3 point",
        surface_lattice(
            "dp5-res-a3",
            &["l12", "r1", "r2", "r3", "e4"],
            &[
                &["-1", "0", "1", "0", "0"],
                &["0", "-2", "1", "0", "0"],
                &["1", "1", "-2", "1", "0"],
                &["0", "0", "1", "-2", "1"],
                &["0", "0", "0", "1", "-1"],
            ],
            &["-3", "-2", "-4", "-3", "-2"],
            &["l12", "r1", "r2", "r3", "e4"],
            &[],
            "5",
        ),
    );
    sc.dual_graph = Some(GraphSpec {
        vertices: vec![
            vertex("l12", -1),
            vertex("r1", -2),
            vertex("r2", -2),
            vertex("r3", -2),
            vertex("e4", -1),
        ],
        edges: edges(&[
            ("l12", "r2"),
            ("r1", "r2"),
            ("r2", "r3"),
            ("r3", "e4"),
        ]),
    });
    sc
}

/// Index sets behind the ten lines of the smooth degree-5 surface: four
/// exceptional classes `{i}` and six strict transforms `{i, j}`.  Two
/// lines meet exactly when one set contains the other or the pair sets
/// are disjoint.
fn petersen_sets() -> Vec<(String, Vec<usize>)> {
    let mut sets = Vec::new();
    for i in 1..=4usize {
        sets.push((format!("e{i}"), vec![i]));
    }
    for i in 1..=4usize {
        for j in (i + 1)..=4usize {
            sets.push((format!("l{i}{j}"), vec![i, j]));
        }
    }
    sets
}

fn petersen_meet(a: &[usize], b: &[usize]) -> bool {
    let common = a.iter().filter(|i| b.contains(i)).count();
    match (a.len(), b.len()) {
        (1, 1) => false,
        (2, 2) => common == 0,
        _ => common == 1,
    }
}

fn graph_smooth() -> Scenario {
    let sets = petersen_sets();
    let names: Vec<&str> = sets.iter().map(|(n, _)| n.as_str()).collect();
    let gram: Vec<Vec<String>> = sets
        .iter()
        .map(|(_, a)| {
            sets.iter()
                .map(|(_, b)| {
                    if a == b {
                        s("-1")
                    } else if petersen_meet(a, b) {
                        s("1")
                    } else {
                        s("0")
                    }
                })
                .collect()
        })
        .collect();
    let mut lattice = LatticeSpec {
        name: s("dp5-smooth"),
        kind: LatticeKind::Surface,
        basis: ss(&names),
        gram: Some(gram),
        triples: Vec::new(),
        canonical: vec![s("-1/2"); sets.len()],
        neg_curves: ss(&names),
        mori_rays: Vec::new(),
        eff_generators: Vec::new(),
        derived: Vec::new(),
        relations: Vec::new(),
        identities: Vec::new(),
        k_square: Some(s("5")),
        k_cube: None,
    };
    lattice.relations = vec![
        relation(
            &[("l12", "1"), ("e1", "1"), ("e2", "1")],
            &[("l34", "1"), ("e3", "1"), ("e4", "1")],
        ),
        relation(
            &[("l13", "1"), ("e1", "1"), ("e3", "1")],
            &[("l24", "1"), ("e2", "1"), ("e4", "1")],
        ),
        relation(
            &[("l14", "1"), ("e1", "1"), ("e4", "1")],
            &[("l23", "1"), ("e2", "1"), ("e3", "1")],
        ),
    ];
    let mut edge_list = Vec::new();
    for (i, (name_a, a)) in sets.iter().enumerate() {
        for (name_b, b) in sets.iter().skip(i + 1) {
            if petersen_meet(a, b) {
                edge_list.push([name_a.clone(), name_b.clone()]);
            }
        }
    }
    let mut sc = scenario(
        "dp5-graph-smooth",
        "Petersen intersection graph of the ten lines on the smooth \
         degree-5 del Pezzo surface",
        lattice,
    );
    sc.dual_graph = Some(GraphSpec {
        vertices: names.iter().map(|n| vertex(n, -1)).collect(),
        edges: edge_list,
    });
    sc
}
