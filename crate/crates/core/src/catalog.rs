//! Named built-in examples shared by the command-line tool, the self-test
//! suite, and the benchmarks: groups, groupoids, simplicial complexes,
//! group actions on complexes, and twists.
//!
//! Every builder goes through the same validating constructors as
//! user-supplied documents, so [`validate_all`] exercising the full list
//! is a meaningful health check rather than a formality.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::coc::Gerbe;
use crate::deloc::GammaComplex;
use crate::error::{Error, Result};
use crate::gpd::{FiniteGroup, FiniteGroupoid};
use crate::qmodz::QmodZ;
use crate::simp::SimplicialComplex;

// ---------------------------------------------------------------------------
// Groups
// ---------------------------------------------------------------------------

pub fn group_names() -> Vec<String> {
    let mut names: Vec<String> = (1..=12).map(|n| format!("Z{n}")).collect();
    names.extend(["V4", "S3", "D4", "Q8"].map(String::from));
    names
}

/// Built-in groups: `Z1`..`Z12` (cyclic), `V4` (Klein four), `S3`, `D4`
/// (dihedral of order 8), `Q8` (quaternion).
pub fn group(name: &str) -> Option<FiniteGroup> {
    if let Some(rest) = name.strip_prefix('Z') {
        if let Ok(n) = rest.parse::<usize>() {
            if (1..=12).contains(&n) {
                return Some(FiniteGroup::cyclic(n));
            }
        }
        return None;
    }
    match name {
        "V4" => Some(FiniteGroup::klein_four()),
        "S3" => Some(FiniteGroup::symmetric_3()),
        "D4" => Some(FiniteGroup::dihedral_8()),
        "Q8" => Some(FiniteGroup::quaternion_8()),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Groupoids
// ---------------------------------------------------------------------------

pub fn groupoid_names() -> Vec<String> {
    let mut names = vec!["pt".to_string(), "pt2".to_string()];
    names.extend(group_names().into_iter().map(|g| format!("B{g}")));
    names.extend(["Z2-swap", "Z4-rot", "S3-regular", "BZ2+BZ3"].map(String::from));
    names
}

/// Built-in groupoids: `pt`/`pt2` (discrete), `B<group>` (one object),
/// `Z2-swap` and `Z4-rot` and `S3-regular` (action groupoids), `BZ2+BZ3`
/// (disjoint union).
pub fn groupoid(name: &str) -> Option<Arc<FiniteGroupoid>> {
    if let Some(gname) = name.strip_prefix('B') {
        if !name.contains('+') {
            return group(gname).map(|g| FiniteGroupoid::one_object(&g));
        }
    }
    match name {
        "pt" => Some(FiniteGroupoid::discrete("pt", &["*"])),
        "pt2" => Some(FiniteGroupoid::discrete("pt2", &["a", "b"])),
        "Z2-swap" => {
            let g = FiniteGroup::cyclic(2);
            let points = vec!["a".to_string(), "b".to_string()];
            let action = vec![vec![0, 1], vec![1, 0]];
            Some(FiniteGroupoid::action_groupoid("Z2-swap", &g, &points, &action).unwrap())
        }
        "Z4-rot" => {
            let g = FiniteGroup::cyclic(4);
            let points: Vec<String> = (0..4).map(|i| format!("p{i}")).collect();
            let action: Vec<Vec<usize>> =
                (0..4).map(|k| (0..4).map(|x| (x + k) % 4).collect()).collect();
            Some(FiniteGroupoid::action_groupoid("Z4-rot", &g, &points, &action).unwrap())
        }
        "S3-regular" => {
            let g = FiniteGroup::symmetric_3();
            let points: Vec<String> = (0..6).map(|i| g.label(i).to_string()).collect();
            let action: Vec<Vec<usize>> =
                (0..6).map(|h| (0..6).map(|x| g.mul(h, x)).collect()).collect();
            Some(FiniteGroupoid::action_groupoid("S3-regular", &g, &points, &action).unwrap())
        }
        "BZ2+BZ3" => {
            let a = FiniteGroupoid::one_object(&FiniteGroup::cyclic(2));
            let b = FiniteGroupoid::one_object(&FiniteGroup::cyclic(3));
            Some(FiniteGroupoid::disjoint_union(&a, &b))
        }
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Simplicial complexes
// ---------------------------------------------------------------------------

pub fn complex_names() -> Vec<String> {
    ["point", "interval", "circle6", "s2", "s3", "torus7", "octahedron"]
        .map(String::from)
        .to_vec()
}

/// Built-in complexes: `point`, `interval`, `circle6` (hexagon), `s2`
/// (boundary of the 3-simplex), `s3` (boundary of the 4-simplex),
/// `torus7` (7-vertex torus), `octahedron`.
pub fn complex(name: &str) -> Option<SimplicialComplex> {
    match name {
        "point" => Some(SimplicialComplex::point()),
        "interval" => Some(SimplicialComplex::interval()),
        "circle6" => Some(circle6()),
        "s2" => Some(SimplicialComplex::sphere_boundary(2)),
        "s3" => Some(SimplicialComplex::sphere_boundary(3)),
        "torus7" => Some(SimplicialComplex::torus_seven()),
        "octahedron" => Some(SimplicialComplex::octahedron()),
        _ => None,
    }
}

fn circle6() -> SimplicialComplex {
    let vertices: Vec<String> = (0..6).map(|i| format!("c{i}")).collect();
    let edges: Vec<Vec<usize>> = (0..6)
        .map(|i| {
            let (a, b) = (i, (i + 1) % 6);
            vec![a.min(b), a.max(b)]
        })
        .collect();
    SimplicialComplex::from_simplices(vertices, &edges).unwrap()
}

/// `k` times the 3-cocycle dual to the fundamental cycle of an oriented
/// top dimension-3 complex: its evaluation against the fundamental cycle
/// is exactly `k`.
pub fn fundamental_twist(kx: &SimplicialComplex, k: i64) -> Result<Vec<BigRational>> {
    if kx.dim() != 3 {
        return Err(Error::precondition(
            "twist-dimension",
            format!("a built-in twist needs a 3-dimensional complex, this one has dimension {}", kx.dim()),
        ));
    }
    let cycle = kx.fundamental_cycle::<BigRational>()?;
    let mut lam = vec![BigRational::zero(); kx.size(3)];
    lam[0] = BigRational::from_integer(k.into()) * cycle[0].clone();
    Ok(lam)
}

// ---------------------------------------------------------------------------
// Group actions on complexes
// ---------------------------------------------------------------------------

pub fn gamma_complex_names() -> Vec<String> {
    let mut names: Vec<String> =
        ["Z2", "Z3", "Z4", "V4", "S3", "D4", "Q8"].iter().map(|g| format!("point-{g}")).collect();
    names.extend(
        ["s2-rot", "s2-antipodal", "torus7-z7", "interval-swap", "circle6-rot"]
            .map(String::from),
    );
    names
}

/// Built-in group actions: `point-<G>` (trivial action), `s2-rot`
/// (half-turn of the octahedron about the polar axis), `s2-antipodal`
/// (free — the quotient is the projective plane), `torus7-z7` (free
/// translation), `interval-swap` (endpoint swap; not regular until
/// subdivided), `circle6-rot` (free rotation).
///
/// Actions are returned raw; callers that decompose into fixed-point
/// sectors or quotients regularize first.
pub fn gamma_complex(name: &str) -> Option<GammaComplex> {
    if let Some(gname) = name.strip_prefix("point-") {
        let g = group(gname)?;
        let action = vec![vec![0]; g.order()];
        return Some(GammaComplex::new(name, g, SimplicialComplex::point(), action).unwrap());
    }
    match name {
        "s2-rot" => {
            // Octahedron vertices: +x −x +y −y +z −z. Half-turn about the
            // z axis fixes the poles and swaps each equatorial pair.
            let g = FiniteGroup::cyclic(2);
            let action = vec![vec![0, 1, 2, 3, 4, 5], vec![1, 0, 3, 2, 4, 5]];
            Some(GammaComplex::new(name, g, SimplicialComplex::octahedron(), action).unwrap())
        }
        "s2-antipodal" => {
            let g = FiniteGroup::cyclic(2);
            let action = vec![vec![0, 1, 2, 3, 4, 5], vec![1, 0, 3, 2, 5, 4]];
            Some(GammaComplex::new(name, g, SimplicialComplex::octahedron(), action).unwrap())
        }
        "torus7-z7" => {
            let g = FiniteGroup::cyclic(7);
            let action: Vec<Vec<usize>> =
                (0..7).map(|k| (0..7).map(|v| (v + k) % 7).collect()).collect();
            Some(GammaComplex::new(name, g, SimplicialComplex::torus_seven(), action).unwrap())
        }
        "interval-swap" => {
            let g = FiniteGroup::cyclic(2);
            let action = vec![vec![0, 1], vec![1, 0]];
            Some(GammaComplex::new(name, g, SimplicialComplex::interval(), action).unwrap())
        }
        "circle6-rot" => {
            let g = FiniteGroup::cyclic(6);
            let action: Vec<Vec<usize>> =
                (0..6).map(|k| (0..6).map(|v| (v + k) % 6).collect()).collect();
            Some(GammaComplex::new(name, g, circle6(), action).unwrap())
        }
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Twists
// ---------------------------------------------------------------------------

pub fn twist_names() -> Vec<String> {
    vec!["v4-sym".to_string()]
}

/// Built-in gerbe cocycles: `v4-sym`, the nondegenerate symplectic
/// discrete torsion on the Klein four-group, β(a, b) = a₁b₂/2.
pub fn twist(name: &str) -> Option<Gerbe> {
    match name {
        "v4-sym" => {
            let g = FiniteGroup::klein_four();
            let gpd = FiniteGroupoid::one_object(&g);
            Some(Gerbe::from_rule(&gpd, |a, b| QmodZ::new(((a / 2) * (b % 2)) as i64, 2)))
        }
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Health check
// ---------------------------------------------------------------------------

/// Runs every built-in through its module validator.
pub fn validate_all() -> Result<()> {
    for name in group_names() {
        group(&name)
            .ok_or_else(|| Error::internal(format!("catalog lists unknown group `{name}`")))?
            .validate()?;
    }
    for name in groupoid_names() {
        groupoid(&name)
            .ok_or_else(|| Error::internal(format!("catalog lists unknown groupoid `{name}`")))?
            .validate()?;
    }
    for name in complex_names() {
        complex(&name)
            .ok_or_else(|| Error::internal(format!("catalog lists unknown complex `{name}`")))?
            .validate()?;
    }
    for name in gamma_complex_names() {
        // `GammaComplex::new` validates; reaching here means it passed.
        gamma_complex(&name)
            .ok_or_else(|| Error::internal(format!("catalog lists unknown action `{name}`")))?;
    }
    for name in twist_names() {
        twist(&name)
            .ok_or_else(|| Error::internal(format!("catalog lists unknown twist `{name}`")))?
            .check_cocycle()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_built_in_validates() {
        validate_all().unwrap();
    }

    #[test]
    fn lookups_cover_exactly_the_advertised_names() {
        assert!(group("Z13").is_none());
        assert!(group("Z0").is_none());
        assert!(groupoid("BZ13").is_none());
        assert!(complex("s4").is_none());
        assert!(gamma_complex("point-Z13").is_none());
        assert_eq!(group("Z8").unwrap().order(), 8);
        assert_eq!(groupoid("BQ8").unwrap().morphism_count(), 8);
        assert_eq!(groupoid("S3-regular").unwrap().object_count(), 6);
        assert_eq!(complex("circle6").unwrap().counts(), vec![6, 6]);
    }

    #[test]
    fn raw_actions_have_the_documented_regularity() {
        assert!(gamma_complex("s2-rot").unwrap().is_regular());
        assert!(gamma_complex("s2-antipodal").unwrap().is_regular());
        assert!(gamma_complex("torus7-z7").unwrap().is_regular());
        assert!(!gamma_complex("interval-swap").unwrap().is_regular());
    }

    #[test]
    fn fundamental_twist_pairs_to_k() {
        let s3 = SimplicialComplex::sphere_boundary(3);
        let lam = fundamental_twist(&s3, 5).unwrap();
        let cycle = s3.fundamental_cycle::<BigRational>().unwrap();
        let pairing = crate::simp::evaluate_cycle(&cycle, &lam);
        assert_eq!(pairing, BigRational::from_integer(5.into()));
        assert!(fundamental_twist(&SimplicialComplex::torus_seven(), 1).is_err());
    }
}
