//! Delocalized cohomology of finite global quotients, with inner twists.
//!
//! A `GammaComplex` is a finite group acting simplicially on a finite
//! complex. After regularization (two barycentric subdivisions), the
//! delocalized cohomology decomposes over conjugacy classes [g]: the
//! sector of [g] is the ε_g-isotypic part of H*(K^g; ℚ) under the
//! centralizer action, where the character ε_g : C(g) → ℚ/ℤ is transgressed
//! from a 2-cocycle on the group. Dimensions are computed exactly by the
//! character-projector trace over a cyclotomic field and cross-checkable
//! against explicit projector ranks and, untwisted, against rational
//! cohomology of quotient complexes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::coc::Gerbe;
use crate::cyclo::{Cyclo, CycloCtx};
use crate::error::{Error, Result};
use crate::gpd::group::FiniteGroup;
use crate::linalg::rank_dense;
use crate::qmodz::QmodZ;
use crate::simp::{cohomology_bases, pullback_cochain, CohomologyBasis, SimplicialComplex};

/// A finite group acting simplicially on a finite complex (on the left).
#[derive(Clone)]
pub struct GammaComplex {
    pub name: String,
    pub group: FiniteGroup,
    pub complex: SimplicialComplex,
    /// Per group element, the vertex permutation v ↦ g·v.
    pub action: Vec<Vec<usize>>,
}

impl GammaComplex {
    pub fn new(
        name: impl Into<String>,
        group: FiniteGroup,
        complex: SimplicialComplex,
        action: Vec<Vec<usize>>,
    ) -> Result<GammaComplex> {
        let kx = GammaComplex { name: name.into(), group, complex, action };
        kx.validate()?;
        Ok(kx)
    }

    pub fn validate(&self) -> Result<()> {
        self.group.validate()?;
        self.complex.validate()?;
        if self.action.len() != self.group.order() {
            return Err(Error::precondition(
                "action-shape",
                "one vertex permutation per group element is required",
            ));
        }
        for (g, p) in self.action.iter().enumerate() {
            if !self.complex.is_automorphism(p) {
                return Err(Error::precondition(
                    "action-simplicial",
                    format!("element {} does not act simplicially", self.group.label(g)),
                ));
            }
        }
        let e = self.group.identity();
        if (0..self.complex.vertex_count()).any(|v| self.action[e][v] != v) {
            return Err(Error::precondition("action-identity", "identity must act trivially"));
        }
        for g in 0..self.group.order() {
            for h in 0..self.group.order() {
                let gh = self.group.mul(g, h);
                for v in 0..self.complex.vertex_count() {
                    if self.action[gh][v] != self.action[g][self.action[h][v]] {
                        return Err(Error::precondition(
                            "action-homomorphism",
                            format!(
                                "({}·{})·v ≠ {}·({}·v)",
                                self.group.label(g),
                                self.group.label(h),
                                self.group.label(g),
                                self.group.label(h)
                            ),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Setwise simplex stabilizers fix pointwise.
    pub fn is_regular(&self) -> bool {
        for p in &self.action {
            for list in &self.complex.simplices {
                for s in list {
                    let mut img: Vec<usize> = s.iter().map(|&v| p[v]).collect();
                    img.sort_unstable();
                    if img == *s && s.iter().any(|&v| p[v] != v) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Two barycentric subdivisions with the transported action. Any
    /// simplicial action becomes regular after this.
    pub fn regularize(&self) -> Result<GammaComplex> {
        let sd1 = self.complex.barycentric_subdivision();
        let act1: Vec<Vec<usize>> =
            self.action.iter().map(|p| sd1.transport(&self.complex, p)).collect();
        let sd2 = sd1.complex.barycentric_subdivision();
        let act2: Vec<Vec<usize>> =
            act1.iter().map(|p| sd2.transport(&sd1.complex, p)).collect();
        let kx = GammaComplex::new(
            format!("{}/sd2", self.name),
            self.group.clone(),
            sd2.complex,
            act2,
        )?;
        if !kx.is_regular() {
            return Err(Error::internal(
                "double subdivision failed to regularize the action",
            ));
        }
        Ok(kx)
    }
}

/// One conjugacy-class sector of a regular Γ-complex: the fixed complex
/// K^g with its centralizer action.
pub struct Sector {
    pub class_rep: usize,
    pub class_size: usize,
    /// Elements of the centralizer C(g), ascending.
    pub centralizer: Vec<usize>,
    pub fixed: SimplicialComplex,
    /// Fixed-complex vertex -> ambient vertex.
    pub ambient_vertex: Vec<usize>,
    /// C(g) acting on the fixed complex, aligned with `centralizer`.
    pub fixed_action: Vec<Vec<usize>>,
}

/// Splits a regular Γ-complex into its conjugacy-class sectors, in
/// class-representative order.
pub fn sectors(kx: &GammaComplex) -> Result<Vec<Sector>> {
    if !kx.is_regular() {
        return Err(Error::precondition(
            "action-regular",
            "sectors require a regular action; call regularize first",
        ));
    }
    let mut out = Vec::new();
    for class in kx.group.conjugacy_classes() {
        let rep = class[0];
        let keep: Vec<bool> =
            (0..kx.complex.vertex_count()).map(|v| kx.action[rep][v] == v).collect();
        let (fixed, ambient_vertex) = kx.complex.full_subcomplex(&keep);
        let mut new_of_old = vec![usize::MAX; kx.complex.vertex_count()];
        for (nv, &ov) in ambient_vertex.iter().enumerate() {
            new_of_old[ov] = nv;
        }
        let centralizer = kx.group.centralizer(rep);
        let mut fixed_action = Vec::with_capacity(centralizer.len());
        for &h in &centralizer {
            let perm: Vec<usize> = ambient_vertex
                .iter()
                .map(|&ov| {
                    let img = kx.action[h][ov];
                    let nv = new_of_old[img];
                    assert_ne!(nv, usize::MAX, "centralizer must preserve the fixed complex");
                    nv
                })
                .collect();
            fixed_action.push(perm);
        }
        out.push(Sector {
            class_rep: rep,
            class_size: class.len(),
            centralizer,
            fixed,
            ambient_vertex,
            fixed_action,
        });
    }
    Ok(out)
}

/// Checks that a 2-cocycle lives on the one-object groupoid of exactly
/// this group.
fn check_twist_base(group: &FiniteGroup, beta: &Gerbe) -> Result<()> {
    let gpd = &beta.gpd;
    if gpd.object_count() != 1 || gpd.morphism_count() != group.order() {
        return Err(Error::precondition(
            "twist-base",
            "the twist must be a 2-cocycle on the acting group",
        ));
    }
    for a in 0..group.order() {
        for b in 0..group.order() {
            if gpd.comp(a, b) != group.mul(a, b) {
                return Err(Error::precondition(
                    "twist-base",
                    "the twist's composition table differs from the acting group",
                ));
            }
        }
    }
    Ok(())
}

/// The inner character ε_g(h) = β(h,g) + β(hg,h⁻¹) − β(h,h⁻¹) on the
/// centralizer, for a normalized 2-cocycle β on the group. Returned values
/// are aligned with `centralizer`.
pub fn sector_character(
    group: &FiniteGroup,
    beta: &Gerbe,
    rep: usize,
    centralizer: &[usize],
) -> Result<Vec<QmodZ>> {
    check_twist_base(group, beta)?;
    if !beta.is_normalized() {
        return Err(Error::precondition(
            "gerbe-normalized",
            "the twist must be normalized; gauge-normalize first",
        ));
    }
    let eps: Vec<QmodZ> = centralizer
        .iter()
        .map(|&h| {
            let hinv = group.inv(h);
            beta.value(h, rep) + beta.value(group.mul(h, rep), hinv) - beta.value(h, hinv)
        })
        .collect();
    // Transgression restricted to a centralizer is a character.
    let pos: std::collections::HashMap<usize, usize> =
        centralizer.iter().enumerate().map(|(i, &h)| (h, i)).collect();
    for (i, &h1) in centralizer.iter().enumerate() {
        for (j, &h2) in centralizer.iter().enumerate() {
            let k = pos[&group.mul(h1, h2)];
            if eps[k] != eps[i] + eps[j] {
                return Err(Error::internal(
                    "transgressed values on a centralizer must be multiplicative",
                ));
            }
        }
    }
    Ok(eps)
}

/// Cohomology bases of one fixed complex together with the induced
/// centralizer representation on each degree.
pub struct SectorData {
    pub sector: Sector,
    pub bases: Vec<CohomologyBasis<BigRational>>,
    /// rho[k][i] is the matrix of h_i = centralizer[i] acting on H^k,
    /// i.e. the pullback along h_i⁻¹ expressed in the basis.
    pub rho: Vec<Vec<Vec<Vec<BigRational>>>>,
    pub eps: Vec<QmodZ>,
}

fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut out = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                let s = &a[i][k] * &b[k][j];
                out[i][j] = &out[i][j] + &s;
            }
        }
    }
    out
}

fn sector_data(group: &FiniteGroup, s: Sector, beta: Option<&Gerbe>) -> Result<SectorData> {
    let eps = match beta {
        Some(b) => sector_character(group, b, s.class_rep, &s.centralizer)?,
        None => vec![QmodZ::new(0, 1); s.centralizer.len()],
    };
    if s.fixed.is_empty() {
        return Ok(SectorData { sector: s, bases: Vec::new(), rho: Vec::new(), eps });
    }
    let bases = cohomology_bases::<BigRational>(&s.fixed);
    let pos: std::collections::HashMap<usize, usize> =
        s.centralizer.iter().enumerate().map(|(i, &h)| (h, i)).collect();
    let mut rho: Vec<Vec<Vec<Vec<BigRational>>>> = Vec::with_capacity(bases.len());
    for basis in &bases {
        let mut per_h = Vec::with_capacity(s.centralizer.len());
        for &h in &s.centralizer {
            let inv_pos = pos[&group.inv(h)];
            let vmap = &s.fixed_action[inv_pos];
            let b = basis.dim;
            let mut m = vec![vec![BigRational::zero(); b]; b];
            for (j, rep) in basis.reps.iter().enumerate() {
                let pulled = pullback_cochain(&s.fixed, &s.fixed, vmap, basis.degree, rep);
                let coords = basis.coords(&pulled)?;
                for i in 0..b {
                    m[i][j] = coords[i].clone();
                }
            }
            per_h.push(m);
        }
        // The assignment h ↦ ρ(h) must be a genuine representation.
        let e_pos = pos[&group.identity()];
        let b = basis.dim;
        for i in 0..b {
            for j in 0..b {
                let expect = if i == j { BigRational::one() } else { BigRational::zero() };
                if per_h[e_pos][i][j] != expect {
                    return Err(Error::internal("identity must act as the identity matrix"));
                }
            }
        }
        for (i, &h1) in s.centralizer.iter().enumerate() {
            for (j, &h2) in s.centralizer.iter().enumerate() {
                let k = pos[&group.mul(h1, h2)];
                if mat_mul(&per_h[i], &per_h[j]) != per_h[k] {
                    return Err(Error::internal(
                        "induced centralizer action must be multiplicative",
                    ));
                }
            }
        }
        rho.push(per_h);
    }
    Ok(SectorData { sector: s, bases, rho, eps })
}

/// Per-sector result: isotypic dimensions by degree.
pub struct SectorReport {
    pub class_rep: usize,
    pub class_size: usize,
    pub centralizer_order: usize,
    pub fixed_counts: Vec<usize>,
    pub dims: Vec<usize>,
}

pub struct DelocalizedReport {
    /// Σ over sectors, degree by degree (length = ambient dim + 1).
    pub total: Vec<usize>,
    pub sectors: Vec<SectorReport>,
    pub twisted: bool,
}

/// Delocalized (twisted) cohomology dimensions of a regular Γ-complex.
///
/// For each conjugacy class [g] and degree k, the dimension of the
/// ε_g-isotypic part of H^k(K^g; ℚ) is the projector trace
/// (1/|C(g)|) Σ_{h∈C(g)} ζ(−ε_g(h))·tr ρ_k(h), an algebraic integer that
/// is checked to be a nonnegative rational integer. Sectors are computed
/// in parallel and merged in class-representative order.
pub fn delocalized(kx: &GammaComplex, beta: Option<&Gerbe>) -> Result<DelocalizedReport> {
    if let Some(b) = beta {
        check_twist_base(&kx.group, b)?;
    }
    let degrees = kx.complex.dim() + 1;
    let ctx = CycloCtx::new(kx.group.exponent() as u32);
    let sector_list = sectors(kx)?;
    let datas: Vec<SectorData> = sector_list
        .into_par_iter()
        .map(|s| sector_data(&kx.group, s, beta))
        .collect::<Result<Vec<_>>>()?;
    let mut total = vec![0usize; degrees];
    let mut reports = Vec::with_capacity(datas.len());
    for data in &datas {
        let csize = data.sector.centralizer.len();
        let inv_order = Cyclo::rational(BigRational::new(BigInt::one(), BigInt::from(csize as i64)));
        let mut dims = vec![0usize; degrees];
        for (k, basis) in data.bases.iter().enumerate() {
            let mut acc = Cyclo::rational(BigRational::zero());
            for i in 0..csize {
                let trace = (0..basis.dim)
                    .fold(BigRational::zero(), |t, d| t + &data.rho[k][i][d][d]);
                let phase = Cyclo::from_qmodz(&ctx, -data.eps[i])?;
                acc = acc + phase * Cyclo::rational(trace);
            }
            let value = acc * inv_order.clone();
            let r = value.as_rational().ok_or_else(|| {
                Error::internal("isotypic trace must be rational")
            })?;
            if !r.is_integer() || r.is_negative() {
                return Err(Error::internal(format!(
                    "isotypic dimension must be a nonnegative integer, got {r}"
                )));
            }
            dims[k] = r.to_integer().try_into().expect("small dimension");
            total[k] += dims[k];
        }
        reports.push(SectorReport {
            class_rep: data.sector.class_rep,
            class_size: data.sector.class_size,
            centralizer_order: csize,
            fixed_counts: data.sector.fixed.counts(),
            dims,
        });
    }
    Ok(DelocalizedReport { total, sectors: reports, twisted: beta.is_some() })
}

/// Independent route: explicit isotypic projectors over the cyclotomic
/// field, verified idempotent, with dimensions read off as matrix ranks.
pub fn isotypic_projector_ranks(kx: &GammaComplex, beta: Option<&Gerbe>) -> Result<Vec<usize>> {
    if let Some(b) = beta {
        check_twist_base(&kx.group, b)?;
    }
    let degrees = kx.complex.dim() + 1;
    let ctx = CycloCtx::new(kx.group.exponent() as u32);
    let sector_list = sectors(kx)?;
    let mut total = vec![0usize; degrees];
    for s in sector_list {
        let data = sector_data(&kx.group, s, beta)?;
        let csize = data.sector.centralizer.len();
        let inv_order = Cyclo::rational(BigRational::new(BigInt::one(), BigInt::from(csize as i64)));
        for (k, basis) in data.bases.iter().enumerate() {
            let b = basis.dim;
            let mut p = vec![vec![Cyclo::rational(BigRational::zero()); b]; b];
            for i in 0..csize {
                let phase = Cyclo::from_qmodz(&ctx, -data.eps[i])?;
                for r in 0..b {
                    for c in 0..b {
                        let term = phase.clone()
                            * Cyclo::rational(data.rho[k][i][r][c].clone())
                            * inv_order.clone();
                        p[r][c] = p[r][c].clone() + term;
                    }
                }
            }
            // P must be idempotent.
            for r in 0..b {
                for c in 0..b {
                    let mut dot = Cyclo::rational(BigRational::zero());
                    for m in 0..b {
                        dot = dot + p[r][m].clone() * p[m][c].clone();
                    }
                    if dot != p[r][c] {
                        return Err(Error::internal("isotypic projector must be idempotent"));
                    }
                }
            }
            total[k] += rank_dense::<Cyclo>(&p);
        }
    }
    Ok(total)
}

/// Untwisted dual route: each sector contributes the rational cohomology
/// of the quotient complex K^g / C(g).
pub fn delocalized_untwisted_rational(kx: &GammaComplex) -> Result<Vec<usize>> {
    let degrees = kx.complex.dim() + 1;
    let sector_list = sectors(kx)?;
    let totals: Vec<Vec<usize>> = sector_list
        .into_par_iter()
        .map(|s| -> Result<Vec<usize>> {
            let mut dims = vec![0usize; degrees];
            if s.fixed.is_empty() {
                return Ok(dims);
            }
            let (q, _) = s.fixed.quotient_by_action(&s.fixed_action)?;
            for (k, b) in q.betti_all::<BigRational>().into_iter().enumerate() {
                dims[k] += b;
            }
            Ok(dims)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = vec![0usize; degrees];
    for dims in totals {
        for (k, d) in dims.into_iter().enumerate() {
            total[k] += d;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coc::{inner_local_system, transgress_gerbe};
    use crate::gpd::FiniteGroupoid;
    use crate::loops::loop_groupoid;

    fn trivial_action(group: &FiniteGroup, complex: &SimplicialComplex) -> Vec<Vec<usize>> {
        let id: Vec<usize> = (0..complex.vertex_count()).collect();
        vec![id; group.order()]
    }

    fn point_with(group: FiniteGroup) -> GammaComplex {
        let pt = SimplicialComplex::point();
        let action = trivial_action(&group, &pt);
        GammaComplex::new(format!("point-{}", group.name), group, pt, action).unwrap()
    }

    fn octahedron_rotation() -> GammaComplex {
        let oct = SimplicialComplex::octahedron();
        GammaComplex::new(
            "s2-rot",
            FiniteGroup::cyclic(2),
            oct,
            vec![vec![0, 1, 2, 3, 4, 5], vec![1, 0, 3, 2, 4, 5]],
        )
        .unwrap()
    }

    fn torus_translation() -> GammaComplex {
        let t = SimplicialComplex::torus_seven();
        let g = FiniteGroup::cyclic(7);
        let action: Vec<Vec<usize>> =
            (0..7).map(|k| (0..7).map(|v| (v + k) % 7).collect()).collect();
        GammaComplex::new("torus7-z7", g, t, action).unwrap()
    }

    fn v4_symplectic_twist() -> Gerbe {
        let g = FiniteGroup::klein_four();
        let gpd = FiniteGroupoid::one_object(&g);
        Gerbe::from_rule(&gpd, |a, b| QmodZ::new(((a / 2) * (b % 2)) as i64, 2))
    }

    #[test]
    fn point_sectors_count_conjugacy_classes() {
        for group in [
            FiniteGroup::cyclic(4),
            FiniteGroup::klein_four(),
            FiniteGroup::symmetric_3(),
            FiniteGroup::dihedral_8(),
            FiniteGroup::quaternion_8(),
        ] {
            let classes = group.conjugacy_classes().len();
            let kx = point_with(group).regularize().unwrap();
            let rep = delocalized(&kx, None).unwrap();
            assert_eq!(rep.total, vec![classes]);
            assert_eq!(rep.sectors.len(), classes);
            assert_eq!(delocalized_untwisted_rational(&kx).unwrap(), vec![classes]);
            assert_eq!(isotypic_projector_ranks(&kx, None).unwrap(), vec![classes]);
        }
    }

    #[test]
    fn nondegenerate_twist_on_a_point_collapses_to_one() {
        let kx = point_with(FiniteGroup::klein_four()).regularize().unwrap();
        let beta = v4_symplectic_twist();
        beta.check_cocycle().unwrap();
        let rep = delocalized(&kx, Some(&beta)).unwrap();
        assert_eq!(rep.total, vec![1]);
        // Only the identity sector survives; the three symplectic pairings
        // are nontrivial characters.
        let alive: Vec<usize> =
            rep.sectors.iter().filter(|s| s.dims[0] > 0).map(|s| s.class_rep).collect();
        assert_eq!(alive, vec![0]);
        assert_eq!(isotypic_projector_ranks(&kx, Some(&beta)).unwrap(), vec![1]);
    }

    #[test]
    fn rotation_quotient_of_the_sphere() {
        let kx = octahedron_rotation().regularize().unwrap();
        assert_eq!(kx.complex.counts(), vec![146, 432, 288]);
        let rep = delocalized(&kx, None).unwrap();
        assert_eq!(rep.total, vec![3, 0, 1]);
        // Identity sector: H*(S²)^{Z/2} = H*(S²/rot) = H*(S²).
        assert_eq!(rep.sectors[0].dims, vec![1, 0, 1]);
        // Rotation sector: two fixed poles with trivial centralizer action.
        assert_eq!(rep.sectors[1].dims, vec![2, 0, 0]);
        assert_eq!(delocalized_untwisted_rational(&kx).unwrap(), vec![3, 0, 1]);
    }

    #[test]
    fn free_torus_translation_leaves_only_the_identity_sector() {
        let kx = torus_translation().regularize().unwrap();
        assert_eq!(kx.complex.counts(), vec![252, 756, 504]);
        let rep = delocalized(&kx, None).unwrap();
        assert_eq!(rep.total, vec![1, 2, 1], "T²/ℤ7 ≅ T², other sectors empty");
        for s in &rep.sectors[1..] {
            assert_eq!(s.fixed_counts, Vec::<usize>::new());
        }
        assert_eq!(delocalized_untwisted_rational(&kx).unwrap(), vec![1, 2, 1]);
    }

    #[test]
    fn sector_characters_match_the_loop_transgression() {
        let g = FiniteGroup::klein_four();
        let beta = v4_symplectic_twist();
        let gpd = FiniteGroupoid::one_object(&g);
        let lm = loop_groupoid(&gpd).unwrap();
        let tau = transgress_gerbe(&lm, &beta).unwrap();
        let system = inner_local_system(&lm, &tau).unwrap();
        for sc in &system {
            let (_, rep_elt) = lm.obj_tags[sc.rep];
            let centralizer = g.centralizer(rep_elt);
            let eps = sector_character(&g, &beta, rep_elt, &centralizer).unwrap();
            for (m, &val) in sc.aut.iter().zip(&sc.eps) {
                let (_, h) = lm.mor_tags[*m];
                let i = centralizer.iter().position(|&x| x == h).unwrap();
                assert_eq!(eps[i], val, "direct formula vs loop-groupoid transgression");
            }
        }
    }

    #[test]
    fn irregular_actions_are_rejected_until_regularized() {
        let swap = GammaComplex::new(
            "interval-swap",
            FiniteGroup::cyclic(2),
            SimplicialComplex::interval(),
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        assert!(!swap.is_regular());
        assert!(sectors(&swap).is_err());
        let reg = swap.regularize().unwrap();
        let rep = delocalized(&reg, None).unwrap();
        // Identity sector: interval/swap ≃ point. Swap sector: the midpoint.
        assert_eq!(rep.total, vec![2, 0]);
        assert_eq!(delocalized_untwisted_rational(&reg).unwrap(), vec![2, 0]);
    }

    #[test]
    fn action_validation_rejects_non_actions() {
        let c2 = FiniteGroup::cyclic(2);
        let t = SimplicialComplex::interval();
        // Not a homomorphism: the generator squares to a swap.
        let err = GammaComplex::new("bad", c2.clone(), t.clone(), vec![vec![1, 0], vec![1, 0]]);
        assert!(err.is_err());
        // Not simplicial on the octahedron: swapping +x with +y sends the
        // triangle {−x,+y,+z} to {−x,+x,+z}, which is not a face.
        let oct = SimplicialComplex::octahedron();
        let err = GammaComplex::new(
            "bad2",
            c2,
            oct,
            vec![vec![0, 1, 2, 3, 4, 5], vec![2, 1, 0, 3, 4, 5]],
        );
        assert!(err.is_err());
    }
}
