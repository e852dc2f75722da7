//! Named self-checks covering every library invariant.
//!
//! Each check is a small, deterministic verification of one documented
//! property, runnable from the command line (`selftest`) or from tests.
//! Failures surface as [`Error`] values: a failed check means either a
//! broken invariant ([`Error::Internal`]) or a precondition that no longer
//! holds on the built-in data.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::catalog;
use crate::coc::{
    check_h_equals_chi_bar, inner_local_system, transgress_gerbe, verify_holonomy, BundleCocycle,
};
use crate::cyclo::{Cyclo, CycloCtx};
use crate::deloc::{
    delocalized, delocalized_untwisted_rational, isotypic_projector_ranks, sectors as deloc_sectors,
};
use crate::error::{Error, Result};
use crate::gpd::{
    check_fiber_product_universal, enumerate_nat_isos, equalizer, FiniteGroup, FiniteGroupoid,
    GroupoidMap,
};
use crate::grpcohom::{
    characters, check_connecting_bijective, cohomology_qmodz, cohomology_z, zxg, QmodZCohomology,
};
use crate::linalg::{echelon_of, rank_sparse, Echelon, SparseMat};
use crate::loops::{
    check_fiberwise_group, check_loop_morphism_criterion, check_loop_preserves_fiber_product,
    inertia_loop_comparison, loop_groupoid, sectors as loop_sectors,
};
use crate::qmodz::QmodZ;
use crate::schema;
use crate::simp::SimplicialComplex;
use crate::zcomplex::{
    adjunction_sides, spectral_sequence_dims, verify_gauge_equivalence, LocalSystem,
    TwistedComplex, UElement, ZElement,
};

pub struct Check {
    pub name: &'static str,
    pub run: fn() -> Result<()>,
}

/// The full registry, in dependency order (foundations first).
pub fn checks() -> Vec<Check> {
    vec![
        Check { name: "catalog-validates", run: catalog_validates },
        Check { name: "fraction-canonical-forms", run: fraction_canonical_forms },
        Check { name: "cyclotomic-field-arithmetic", run: cyclotomic_field_arithmetic },
        Check { name: "echelon-normal-forms", run: echelon_normal_forms },
        Check { name: "group-structure-tables", run: group_structure_tables },
        Check { name: "schema-round-trip", run: schema_round_trip },
        Check { name: "fiber-product-universal", run: fiber_product_universal },
        Check { name: "equalizer-two-isomorphic", run: equalizer_two_isomorphic },
        Check { name: "inertia-matches-loops", run: inertia_matches_loops },
        Check { name: "loop-conjugation-model", run: loop_conjugation_model },
        Check { name: "loop-fiberwise-group", run: loop_fiberwise_group },
        Check { name: "loop-preserves-pullbacks", run: loop_preserves_pullbacks },
        Check { name: "bar-coboundary-squares-to-zero", run: bar_coboundary_squares_to_zero },
        Check { name: "group-cohomology-tables", run: group_cohomology_tables },
        Check { name: "connecting-map-bijective", run: connecting_map_bijective },
        Check { name: "holonomy-three-routes", run: holonomy_three_routes },
        Check { name: "holonomy-equals-averaged-carry", run: holonomy_equals_averaged_carry },
        Check { name: "transgressed-local-system", run: transgressed_local_system },
        Check { name: "betti-three-routes", run: betti_three_routes },
        Check { name: "subdivision-invariance", run: subdivision_invariance },
        Check { name: "quotient-needs-regularity", run: quotient_needs_regularity },
        Check { name: "delocalized-route-agreement", run: delocalized_route_agreement },
        Check { name: "delocalized-pinned-values", run: delocalized_pinned_values },
        Check { name: "twisted-dims-against-oracle", run: twisted_dims_against_oracle },
        Check { name: "twisted-collapse-on-sphere", run: twisted_collapse_on_sphere },
        Check { name: "gauge-trivial-twists", run: gauge_trivial_twists },
        Check { name: "local-system-holonomy", run: local_system_holonomy },
        Check { name: "duality-adjunction", run: duality_adjunction },
    ]
}

/// Runs every check, reporting each outcome to `report`; returns the first
/// failure after finishing the sweep.
pub fn run_all(mut report: impl FnMut(&'static str, &Result<()>)) -> Result<()> {
    let mut first_failure = None;
    for check in checks() {
        let outcome = (check.run)();
        report(check.name, &outcome);
        if let Err(e) = outcome {
            first_failure.get_or_insert(e);
        }
    }
    match first_failure {
        None => Ok(()),
        Some(e) => Err(e),
    }
}

fn expect(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::internal(msg))
    }
}

fn xorshift(state: &mut u64) -> u64 {
    let mut x = *state;
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    *state = x;
    x
}

fn rational(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn seeded_rationals(n: usize, state: &mut u64) -> Vec<BigRational> {
    (0..n).map(|_| rational((xorshift(state) % 13) as i64 - 6)).collect()
}

// ---------------------------------------------------------------------------
// Foundations
// ---------------------------------------------------------------------------

fn catalog_validates() -> Result<()> {
    catalog::validate_all()
}

fn fraction_canonical_forms() -> Result<()> {
    expect(QmodZ::new(7, 4) == QmodZ::new(3, 4), "values are reduced modulo 1")?;
    expect(QmodZ::new(-1, 4) == QmodZ::new(3, 4), "representatives live in [0, 1)")?;
    expect(QmodZ::new(2, 4).to_string() == "1/2", "fractions print reduced")?;
    expect(QmodZ::parse("5/3")? == QmodZ::new(2, 3), "parsing reduces modulo 1")?;
    expect(QmodZ::new(3, 9).order() == 3, "order is the reduced denominator")?;
    let sum = QmodZ::new(1, 6) + QmodZ::new(1, 3);
    expect(sum == QmodZ::new(1, 2), "addition is exact")?;
    Ok(())
}

fn cyclotomic_field_arithmetic() -> Result<()> {
    let ctx = CycloCtx::new(12);
    let z = Cyclo::root_power(&ctx, 1);
    let mut p = Cyclo::rational(BigRational::one());
    for _ in 0..12 {
        p = p * z.clone();
    }
    expect(p == Cyclo::rational(BigRational::one()), "the root of unity has order 12")?;
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    for _ in 0..8 {
        // A root power plus a rational ≥ 2 can never vanish (the only
        // rational root powers are ±1).
        let k = (xorshift(&mut state) % 12) as u32;
        let a = Cyclo::root_power(&ctx, k)
            + Cyclo::rational(rational((xorshift(&mut state) % 5) as i64 + 2));
        let inv = crate::field::Field::inv(&a);
        expect(a * inv == Cyclo::rational(BigRational::one()), "field inverses multiply to 1")?;
    }
    expect(
        Cyclo::from_qmodz(&ctx, QmodZ::new(1, 5)).is_err(),
        "orders not dividing the conductor are rejected",
    )?;
    let v = Cyclo::from_qmodz(&ctx, QmodZ::new(1, 4))?;
    expect(v == Cyclo::root_power(&ctx, 3), "q | N embeds as a root power")?;
    Ok(())
}

fn echelon_normal_forms() -> Result<()> {
    let mut state = 0xfeed_5eed_0123_4567u64;
    let mut m = SparseMat::<BigRational>::new(6, 8);
    for r in 0..6 {
        for c in 0..8 {
            let v = (xorshift(&mut state) % 5) as i64 - 2;
            if v != 0 {
                m.push(r, c, rational(v));
            }
        }
    }
    let ech = echelon_of(&m);
    expect(ech.rank() == rank_sparse(&m), "echelon rank equals elimination rank")?;
    expect(
        ech.kernel_basis().len() == 8 - ech.rank(),
        "kernel dimension complements the rank",
    )?;
    for v in ech.kernel_basis() {
        let mut image = vec![BigRational::zero(); 6];
        for (r, c, value) in &m.entries {
            image[*r] += value * &v[*c];
        }
        expect(
            image.iter().all(|x| x == &BigRational::zero()),
            "kernel vectors are annihilated by the matrix",
        )?;
    }
    for r in 0..6 {
        let mut row = vec![BigRational::zero(); 8];
        for (rr, c, value) in &m.entries {
            if *rr == r {
                row[*c] += value;
            }
        }
        ech.reduce_in_place(&mut row);
        expect(
            row.iter().all(|x| x == &BigRational::zero()),
            "matrix rows reduce to zero against their own echelon",
        )?;
    }
    // Coordinates: express recovers coefficients over an independent set.
    let b1: Vec<BigRational> = vec![rational(1), rational(0), rational(2)];
    let b2: Vec<BigRational> = vec![rational(0), rational(1), rational(-1)];
    let mut span = Echelon::with_transform(3, 2);
    span.insert_dense(b1.clone());
    span.insert_dense(b2.clone());
    let target: Vec<BigRational> =
        (0..3).map(|i| rational(4) * &b1[i] + rational(-3) * &b2[i]).collect();
    expect(
        span.express(&target) == Some(vec![rational(4), rational(-3)]),
        "express recovers exact coordinates",
    )?;
    Ok(())
}

fn group_structure_tables() -> Result<()> {
    for name in catalog::group_names() {
        let g = catalog::group(&name).unwrap();
        let n = g.order();
        expect(n % g.exponent() == 0 || g.exponent() % 1 == 0, "exponent is defined")?;
        expect(n % g.abelianization_order() == 0, "|Γ_ab| divides |Γ|")?;
        let classes = g.conjugacy_classes();
        let covered: usize = classes.iter().map(|c| c.len()).sum();
        expect(covered == n, "conjugacy classes partition the group")?;
        for c in &classes {
            expect(
                c.len() * g.centralizer(c[0]).len() == n,
                "orbit-stabilizer: |class|·|centralizer| = |Γ|",
            )?;
        }
    }
    Ok(())
}

fn schema_round_trip() -> Result<()> {
    for name in ["BZ3", "BS3", "Z2-swap", "BZ2+BZ3"] {
        let gpd = catalog::groupoid(name).unwrap();
        let doc = schema::emit_groupoid(&gpd);
        let back = schema::parse_groupoid(&doc)?;
        expect(gpd.same_presentation(&back), format!("round trip changed `{name}`"))?;
        let again = schema::canonical_json(&schema::emit_groupoid(&back));
        expect(
            schema::canonical_json(&doc) == again,
            format!("re-emission of `{name}` is not byte-identical"),
        )?;
    }
    let lm = loop_groupoid(&catalog::groupoid("BZ3").unwrap())?;
    let back = schema::parse_groupoid(&schema::emit_groupoid(&lm.gpd))?;
    expect(lm.gpd.same_presentation(&back), "loop groupoid round trip")?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Groupoid limits and loops
// ---------------------------------------------------------------------------

fn doubling_map() -> Result<GroupoidMap> {
    let a = FiniteGroupoid::one_object(&FiniteGroup::cyclic(2));
    let c = FiniteGroupoid::one_object(&FiniteGroup::cyclic(4));
    GroupoidMap::from_group_hom(&a, &c, &[0, 2])
}

fn fiber_product_universal() -> Result<()> {
    let f = doubling_map()?;
    let t = FiniteGroupoid::one_object(&FiniteGroup::cyclic(2));
    check_fiber_product_universal(&f, &f, &t)?;
    check_fiber_product_universal(&f, &f, &FiniteGroupoid::discrete("pt", &["*"]))?;
    Ok(())
}

fn equalizer_two_isomorphic() -> Result<()> {
    let f = doubling_map()?;
    let trivial = GroupoidMap::from_group_hom(&f.dom, &f.cod, &[0, 0])?;
    let eq = equalizer(&f, &trivial)?;
    eq.gpd.validate()?;
    eq.to_dom.validate()?;
    let left = GroupoidMap::composed(&f, &eq.to_dom);
    let right = GroupoidMap::composed(&trivial, &eq.to_dom);
    expect(
        !enumerate_nat_isos(&left, &right).is_empty(),
        "the two composites through the equalizer are 2-isomorphic",
    )?;
    Ok(())
}

fn inertia_matches_loops() -> Result<()> {
    for name in ["BZ4", "BS3", "Z2-swap", "BZ2+BZ3", "pt2"] {
        let base = catalog::groupoid(name).unwrap();
        let (_, _, _, report) = inertia_loop_comparison(&base)?;
        expect(report.is_equivalence(), format!("comparison fails on `{name}`: {report}"))?;
    }
    Ok(())
}

fn loop_conjugation_model() -> Result<()> {
    for name in ["S3", "Q8"] {
        let g = catalog::group(name).unwrap();
        let lm = loop_groupoid(&FiniteGroupoid::one_object(&g))?;
        expect(lm.gpd.object_count() == g.order(), "one loop object per element")?;
        let (_, reps) = loop_sectors(&lm);
        expect(
            reps.len() == g.conjugacy_classes().len(),
            format!("sector count of L(B{name}) must be the class count"),
        )?;
        for (o, &(_, elt)) in lm.obj_tags.iter().enumerate() {
            expect(
                lm.gpd.aut(o).len() == g.centralizer(elt).len(),
                "isotropy groups are centralizers",
            )?;
        }
    }
    Ok(())
}

fn loop_fiberwise_group() -> Result<()> {
    let base = catalog::groupoid("BD4").unwrap();
    let lm = loop_groupoid(&base)?;
    check_loop_morphism_criterion(&lm)?;
    check_fiberwise_group(&lm)?;
    Ok(())
}

fn loop_preserves_pullbacks() -> Result<()> {
    let f = doubling_map()?;
    let rep = check_loop_preserves_fiber_product(&f, &f)?;
    expect(rep.is_equivalence(), format!("doubling square: {rep}"))?;
    let pt = FiniteGroupoid::discrete("pt", &["*"]);
    let cst = GroupoidMap::constant(&pt, &f.cod, 0);
    let rep = check_loop_preserves_fiber_product(&cst, &f)?;
    expect(rep.is_equivalence(), format!("point against doubling: {rep}"))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Group cohomology and transgression
// ---------------------------------------------------------------------------

fn bar_coboundary_squares_to_zero() -> Result<()> {
    let mut state = 0x0123_4567_89ab_cdefu64;
    for g in [FiniteGroup::cyclic(4), FiniteGroup::symmetric_3()] {
        for d in 1..=2 {
            let len = g.order().pow(d as u32);
            let table: Vec<QmodZ> =
                (0..len).map(|_| QmodZ::new((xorshift(&mut state) % 12) as i64, 12)).collect();
            let once = zxg::bar_delta_table(&g, d, &table);
            let twice = zxg::bar_delta_table(&g, d + 1, &once);
            expect(twice.iter().all(|v| v.is_zero()), "δ² = 0 with fraction coefficients")?;
            let table: Vec<BigInt> =
                (0..len).map(|_| BigInt::from((xorshift(&mut state) % 7) as i64 - 3)).collect();
            let once = zxg::bar_delta_table(&g, d, &table);
            let twice = zxg::bar_delta_table(&g, d + 1, &once);
            expect(
                twice.iter().all(|v| Zero::is_zero(v)),
                "δ² = 0 with integer coefficients",
            )?;
        }
    }
    Ok(())
}

fn group_cohomology_tables() -> Result<()> {
    for n in [2usize, 3, 4] {
        let g = FiniteGroup::cyclic(n);
        for k in 0..=4 {
            let h = cohomology_z(&g, k)?;
            let (want_rank, want_torsion): (usize, Vec<u64>) = match k {
                0 => (1, vec![]),
                _ if k % 2 == 0 => (0, vec![n as u64]),
                _ => (0, vec![]),
            };
            expect(
                h.rank == want_rank && h.torsion == want_torsion,
                format!("H^{k}(Z/{n}; Z) must alternate Z, 0, Z/n"),
            )?;
        }
    }
    for name in ["S3", "Q8", "V4", "Z6"] {
        let g = catalog::group(name).unwrap();
        match cohomology_qmodz(&g, 1)? {
            QmodZCohomology::Finite(h) => {
                let order: u64 = h.torsion.iter().product();
                expect(
                    h.rank == 0 && order == g.abelianization_order() as u64,
                    format!("|H¹({name}; Q/Z)| must equal |Γ_ab|"),
                )?;
            }
            QmodZCohomology::Divisible => {
                return Err(Error::internal("H¹ of a finite group cannot be divisible"))
            }
        }
    }
    Ok(())
}

fn connecting_map_bijective() -> Result<()> {
    for n in [2usize, 5, 6, 8] {
        check_connecting_bijective(&FiniteGroup::cyclic(n))?;
    }
    Ok(())
}

fn holonomy_three_routes() -> Result<()> {
    let g = FiniteGroup::cyclic(4);
    let phi: Vec<QmodZ> = (0..4).map(|x| QmodZ::new(x as i64, 4)).collect();
    let report = verify_holonomy(16, &g, &phi)?;
    expect(report.all_equal, "transgression, character, and integration agree")?;
    // Small enough that the explicit loop-groupoid transgression also runs.
    let report = verify_holonomy(8, &g, &phi)?;
    expect(report.all_equal, "routes agree on the small fiber")?;
    expect(report.pipeline_checked, "the loop-groupoid pipeline runs at this size")?;
    Ok(())
}

fn holonomy_equals_averaged_carry() -> Result<()> {
    for n in 2..=6usize {
        let base = FiniteGroupoid::one_object(&FiniteGroup::cyclic(n));
        let lm = loop_groupoid(&base)?;
        for phi in characters(&FiniteGroup::cyclic(n)) {
            check_h_equals_chi_bar(&lm, &BundleCocycle::new(&base, phi)?)?;
        }
    }
    Ok(())
}

fn transgressed_local_system() -> Result<()> {
    let beta = catalog::twist("v4-sym").unwrap();
    let lm = loop_groupoid(&beta.gpd)?;
    let tau = transgress_gerbe(&lm, &beta)?;
    let system = inner_local_system(&lm, &tau)?;
    expect(system.len() == 4, "V4 has four sectors")?;
    for sc in &system {
        let (_, elt) = lm.obj_tags[sc.rep];
        let is_identity = lm.base.is_identity(elt);
        expect(
            sc.is_trivial() == is_identity,
            "the symplectic twist is nondegenerate away from the identity sector",
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Simplicial models
// ---------------------------------------------------------------------------

fn betti_three_routes() -> Result<()> {
    let t = SimplicialComplex::torus_seven();
    let by_rank = t.betti_all::<BigRational>();
    expect(by_rank == vec![1, 2, 1], "field-rank route on the 7-vertex torus")?;
    let mut by_snf = Vec::new();
    for k in 0..=t.dim() {
        let rank_k = if k == t.dim() {
            0
        } else {
            crate::linalg::snf_sparse(&t.coboundary_int(k)).len()
        };
        let rank_prev =
            if k == 0 { 0 } else { crate::linalg::snf_sparse(&t.coboundary_int(k - 1)).len() };
        by_snf.push(t.size(k) - rank_k - rank_prev);
    }
    expect(by_snf == vec![1, 2, 1], "integer normal-form route")?;
    let by_basis: Vec<usize> =
        crate::simp::cohomology_bases::<BigRational>(&t).iter().map(|b| b.dim).collect();
    expect(by_basis == vec![1, 2, 1], "representative-basis route")?;
    Ok(())
}

fn subdivision_invariance() -> Result<()> {
    let oct = SimplicialComplex::octahedron();
    let sd = oct.barycentric_subdivision();
    expect(sd.complex.counts() == vec![26, 72, 48], "subdivision sizes of the octahedron")?;
    expect(
        sd.complex.betti_all::<BigRational>() == oct.betti_all::<BigRational>(),
        "subdivision preserves cohomology",
    )?;
    Ok(())
}

fn quotient_needs_regularity() -> Result<()> {
    let raw = catalog::gamma_complex("interval-swap").unwrap();
    match deloc_sectors(&raw) {
        Err(Error::Precondition { name, .. }) if name == "action-regular" => {}
        Err(other) => return Err(other),
        Ok(_) => {
            return Err(Error::internal("an irregular action must be rejected before splitting"))
        }
    }
    let reg = raw.regularize()?;
    deloc_sectors(&reg)?;
    let (quotient, _) = reg.complex.quotient_by_action(&reg.action)?;
    expect(
        quotient.betti_all::<BigRational>() == vec![1, 0],
        "the interval modulo its flip is contractible",
    )?;
    // The flip fixes the midpoint, so the delocalized total gains a second
    // point sector on top of the contractible quotient.
    expect(
        delocalized_untwisted_rational(&reg)? == vec![2, 0],
        "identity and flip sectors each contribute one dimension",
    )?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Delocalized cohomology
// ---------------------------------------------------------------------------

fn delocalized_route_agreement() -> Result<()> {
    for name in ["point-S3", "s2-rot", "circle6-rot"] {
        let kx = catalog::gamma_complex(name).unwrap().regularize()?;
        let rep = delocalized(&kx, None)?;
        let ranks = isotypic_projector_ranks(&kx, None)?;
        let rational = delocalized_untwisted_rational(&kx)?;
        expect(
            rep.total == ranks && rep.total == rational,
            format!("trace, projector, and quotient routes disagree on `{name}`"),
        )?;
    }
    Ok(())
}

fn delocalized_pinned_values() -> Result<()> {
    let s2 = catalog::gamma_complex("s2-rot").unwrap().regularize()?;
    let rep = delocalized(&s2, None)?;
    expect(rep.total == vec![3, 0, 1], "half-turn sphere quotient dimensions")?;

    let point = catalog::gamma_complex("point-Q8").unwrap().regularize()?;
    let rep = delocalized(&point, None)?;
    let classes = FiniteGroup::quaternion_8().conjugacy_classes().len();
    expect(
        rep.total.iter().sum::<usize>() == classes,
        "untwisted point total counts conjugacy classes",
    )?;

    let v4 = catalog::gamma_complex("point-V4").unwrap().regularize()?;
    let beta = catalog::twist("v4-sym").unwrap();
    let rep = delocalized(&v4, Some(&beta))?;
    expect(
        rep.total.iter().sum::<usize>() == 1,
        "the nondegenerate twist collapses the point to one dimension",
    )?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Twisted complexes
// ---------------------------------------------------------------------------

fn twisted_dims_against_oracle() -> Result<()> {
    let s3 = SimplicialComplex::sphere_boundary(3);
    let tc = TwistedComplex::new(s3.clone(), vec![BigRational::zero(); s3.size(3)], None)?;
    let dims = tc.twisted_cohomology()?;
    expect(dims == tc.untwisted_direct_sum_dims()?, "untwisted dims match the direct sum")?;
    expect(dims == spectral_sequence_dims(&tc)?, "untwisted dims match the filtration page")?;
    expect(tc.periodic_cohomology()? == (1, 1), "periodic untwisted sphere dims")?;
    Ok(())
}

fn twisted_collapse_on_sphere() -> Result<()> {
    let s3 = SimplicialComplex::sphere_boundary(3);
    let lam = catalog::fundamental_twist(&s3, 1)?;
    let tc = TwistedComplex::new(s3, lam, None)?;
    let dims = tc.twisted_cohomology()?;
    expect(dims[0] == 1 && dims[1..].iter().all(|&d| d == 0), "one unit survives the twist")?;
    expect(dims == spectral_sequence_dims(&tc)?, "twisted dims match the filtration page")?;
    expect(tc.periodic_cohomology()? == (0, 0), "twisted periodic dims vanish")?;
    Ok(())
}

fn gauge_trivial_twists() -> Result<()> {
    let s3 = SimplicialComplex::sphere_boundary(3);
    let mut state = 0xabcd_ef01_2345_6789u64;
    for _ in 0..2 {
        let mu = seeded_rationals(s3.size(2), &mut state);
        verify_gauge_equivalence(&s3, &mu)?;
    }
    Ok(())
}

fn local_system_holonomy() -> Result<()> {
    let circle = catalog::complex("circle6").unwrap();
    let mut theta = vec![QmodZ::ZERO; circle.size(1)];
    theta[0] = QmodZ::new(1, 2);
    let system = LocalSystem::new(&circle, theta)?;
    let tc = TwistedComplex::new(circle.clone(), vec![], Some(system))?;
    let dims = tc.twisted_cohomology()?;
    expect(dims[0] == 0 && dims[1] == 0, "nontrivial holonomy kills the circle cohomology")?;

    let trivial = LocalSystem::new(&circle, vec![QmodZ::ZERO; circle.size(1)])?;
    let tc = TwistedComplex::new(circle, vec![], Some(trivial))?;
    let dims = tc.twisted_cohomology()?;
    expect(dims[0] == 1 && dims[1] == 1, "the trivial system reproduces plain cohomology")?;

    let torus = SimplicialComplex::torus_seven();
    let mut theta = vec![QmodZ::ZERO; torus.size(1)];
    theta[0] = QmodZ::new(1, 2);
    match LocalSystem::new(&torus, theta) {
        Err(Error::Precondition { name, .. }) if name == "system-flat" => Ok(()),
        Err(other) => Err(other),
        Ok(_) => Err(Error::internal("a non-flat system must be rejected")),
    }
}

fn duality_adjunction() -> Result<()> {
    let s3 = SimplicialComplex::sphere_boundary(3);
    let cycle = s3.fundamental_cycle::<BigRational>()?;
    let lam = catalog::fundamental_twist(&s3, 2)?;
    let mut state = 0x5151_a3b6_77c9_0e11u64;
    for round in 0..6 {
        // Alternate the two legs of the differential: the coboundary leg
        // (q = dim − p − 1, matching powers) and the twist leg (p = 0,
        // q = 0, powers off by one).
        let (n, p, m, q) = if round % 2 == 0 {
            let p = (xorshift(&mut state) % 3) as usize;
            (1usize, p, 1usize, 3 - p - 1)
        } else {
            (1usize, 0usize, 2usize, 0usize)
        };
        let u = UElement { n, p, omega: seeded_rationals(s3.size(p), &mut state) };
        let z = ZElement { m, q, alpha: seeded_rationals(s3.size(q), &mut state) };
        let (lhs, rhs) = adjunction_sides(&s3, &cycle, &lam, &u, &z);
        expect(lhs == rhs, format!("adjunction fails on seeded round {round}"))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_passes() {
        let mut failures = Vec::new();
        run_all(|name, outcome| {
            if let Err(e) = outcome {
                failures.push(format!("{name}: {e}"));
            }
        })
        .unwrap_or_else(|_| panic!("failed checks: {}", failures.join("; ")));
    }

    #[test]
    fn check_names_are_unique() {
        let mut names: Vec<&str> = checks().iter().map(|c| c.name).collect();
        let before = names.len();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), before);
    }
}
