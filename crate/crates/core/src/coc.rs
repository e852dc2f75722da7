//! Degree-1 and degree-2 groupoid cocycles with values in Q/Z, their
//! transgression to the loop groupoid, the central extension model, the
//! induced inner local system on sectors, and the fiber-holonomy
//! verification for twists pulled back from a quotient circle direction.
//!
//! Conventions. A 2-cochain is a function on composable pairs, written
//! β(g, f) for g∘f defined; its coboundary is
//! δβ(h, g, f) = β(g, f) − β(h∘g, f) + β(h, g∘f) − β(h, g).
//! Transgression of a normalized 2-cocycle to the loop groupoid is
//!
//!   τβ((x, γ), μ) = β(μ, γ) + β(μ∘γ, μ⁻¹) − β(μ, μ⁻¹),
//!
//! the vertical component of conjugating the canonical lift of γ by the
//! canonical lift of μ in the central extension determined by β.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gpd::{FiniteGroup, FiniteGroupoid, Mor, Product};
use crate::grpcohom::{self, zxg};
use crate::loops::{sectors, LoopModel};
use crate::qmodz::QmodZ;

/// Exhaustive-check budget: above this many composable triples (resp.
/// pairs) the cocycle checks switch to seeded sampling.
const EXHAUSTIVE_TRIPLES: usize = 2_000_000;
const SAMPLE_ROUNDS: usize = 20_000;

fn xorshift(state: &mut u64) -> u64 {
    let mut x = *state;
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    *state = x;
    x
}

// ---------------------------------------------------------------------------
// Degree-1 cocycles (flat bundles)
// ---------------------------------------------------------------------------

/// A Q/Z-valued function on morphisms satisfying Φ(g∘f) = Φ(g) + Φ(f).
#[derive(Clone, Debug)]
pub struct BundleCocycle {
    pub gpd: Arc<FiniteGroupoid>,
    pub values: Vec<QmodZ>,
}

impl BundleCocycle {
    pub fn new(gpd: &Arc<FiniteGroupoid>, values: Vec<QmodZ>) -> Result<BundleCocycle> {
        if values.len() != gpd.morphism_count() {
            return Err(Error::precondition("bundle-shape", "one value per morphism"));
        }
        let c = BundleCocycle { gpd: gpd.clone(), values };
        c.check_cocycle()?;
        Ok(c)
    }

    pub fn check_cocycle(&self) -> Result<()> {
        for (g, f, gf) in self.gpd.composable_pairs() {
            if self.values[gf] != self.values[g] + self.values[f] {
                return Err(Error::precondition(
                    "bundle-cocycle",
                    format!(
                        "additivity fails on ({}, {})",
                        self.gpd.morphisms[g].label, self.gpd.morphisms[f].label
                    ),
                ));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Degree-2 cocycles (gerbes)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct Gerbe {
    pub gpd: Arc<FiniteGroupoid>,
    /// Defined exactly on composable pairs (g, f).
    pub values: HashMap<(usize, usize), QmodZ>,
}

impl Gerbe {
    pub fn new(gpd: &Arc<FiniteGroupoid>, values: HashMap<(usize, usize), QmodZ>) -> Result<Gerbe> {
        for &(g, f) in values.keys() {
            if gpd.compose(g, f).is_none() {
                return Err(Error::precondition(
                    "gerbe-shape",
                    "value assigned to a non-composable pair",
                ));
            }
        }
        if values.len() != gpd.composable_count() {
            return Err(Error::precondition(
                "gerbe-shape",
                format!(
                    "need one value per composable pair ({} given, {} pairs)",
                    values.len(),
                    gpd.composable_count()
                ),
            ));
        }
        Ok(Gerbe { gpd: gpd.clone(), values })
    }

    /// Constructs from a rule, evaluating it on every composable pair.
    pub fn from_rule(
        gpd: &Arc<FiniteGroupoid>,
        rule: impl Fn(usize, usize) -> QmodZ,
    ) -> Gerbe {
        let values =
            gpd.composable_pairs().map(|(g, f, _)| ((g, f), rule(g, f))).collect();
        Gerbe { gpd: gpd.clone(), values }
    }

    pub fn value(&self, g: usize, f: usize) -> QmodZ {
        self.values[&(g, f)]
    }

    /// δβ = 0, exhaustively when the composable-triple count is small and
    /// by seeded sampling otherwise.
    pub fn check_cocycle(&self) -> Result<()> {
        let gpd = &self.gpd;
        let mut by_src: Vec<Vec<usize>> = vec![Vec::new(); gpd.object_count()];
        for m in 0..gpd.morphism_count() {
            by_src[gpd.src(m)].push(m);
        }
        let triples: usize =
            gpd.composable_pairs().map(|(g, _, _)| by_src[gpd.dst(g)].len()).sum();
        let check = |h: usize, g: usize, f: usize| -> Result<()> {
            let hg = gpd.comp(h, g);
            let gf = gpd.comp(g, f);
            let d = self.value(g, f) - self.value(hg, f) + self.value(h, gf) - self.value(h, g);
            if !d.is_zero() {
                return Err(Error::precondition(
                    "gerbe-cocycle",
                    format!(
                        "coboundary is {d} on ({}, {}, {})",
                        gpd.morphisms[h].label, gpd.morphisms[g].label, gpd.morphisms[f].label
                    ),
                ));
            }
            Ok(())
        };
        if triples <= EXHAUSTIVE_TRIPLES {
            for (g, f, _) in gpd.composable_pairs() {
                for &h in &by_src[gpd.dst(g)] {
                    check(h, g, f)?;
                }
            }
        } else {
            let mut state = 0x6f3c_1d94_a55a_9e21u64;
            let nm = gpd.morphism_count() as u64;
            let mut tried = 0usize;
            while tried < SAMPLE_ROUNDS {
                let f = (xorshift(&mut state) % nm) as usize;
                let gs = &by_src[gpd.dst(f)];
                let g = gs[(xorshift(&mut state) % gs.len() as u64) as usize];
                let hs = &by_src[gpd.dst(g)];
                let h = hs[(xorshift(&mut state) % hs.len() as u64) as usize];
                check(h, g, f)?;
                tried += 1;
            }
        }
        Ok(())
    }

    /// β(f, id) = β(id, f) = 0 everywhere.
    pub fn is_normalized(&self) -> bool {
        (0..self.gpd.morphism_count()).all(|f| {
            let s = self.gpd.identity_of(self.gpd.src(f));
            let d = self.gpd.identity_of(self.gpd.dst(f));
            self.value(f, s).is_zero() && self.value(d, f).is_zero()
        })
    }

    /// β + δc for a 1-cochain c (one value per morphism).
    pub fn shift_by_coboundary(&self, c: &[QmodZ]) -> Gerbe {
        Gerbe::from_rule(&self.gpd, |g, f| {
            let gf = self.gpd.comp(g, f);
            self.value(g, f) + c[f] - c[gf] + c[g]
        })
    }

    /// Gauge normalization: subtracts δc for c(f) = β(id at src f, same),
    /// which kills all identity values of a cocycle. Returns the shifted
    /// cocycle and the gauge used.
    pub fn gauge_normalize(&self) -> (Gerbe, Vec<QmodZ>) {
        let c: Vec<QmodZ> = (0..self.gpd.morphism_count())
            .map(|f| {
                let e = self.gpd.identity_of(self.gpd.src(f));
                -self.value(e, e)
            })
            .collect();
        (self.shift_by_coboundary(&c), c)
    }
}

/// The central extension groupoid of a normalized gerbe: morphisms are
/// pairs (f, k/M) for M the least common order of the values, composing by
/// (g, w)∘(f, z) = (g∘f, w + z + β(g, f)).
pub fn extension_groupoid(gerbe: &Gerbe) -> Result<(Arc<FiniteGroupoid>, i64)> {
    if !gerbe.is_normalized() {
        return Err(Error::precondition(
            "gerbe-normalized",
            "extension model needs β(f, id) = β(id, f) = 0; gauge-normalize first",
        ));
    }
    let base = &gerbe.gpd;
    let mut m = 1i64;
    for v in gerbe.values.values() {
        m = num_integer::lcm(m, v.denom());
    }
    let count = base
        .morphism_count()
        .checked_mul(m as usize)
        .filter(|&c| c <= 500_000)
        .ok_or_else(|| {
            Error::precondition("size-guard", "extension groupoid would be too large")
        })?;
    let midx = |f: usize, k: i64| -> usize { f * m as usize + k as usize };
    let morphisms: Vec<Mor> = (0..base.morphism_count())
        .flat_map(|f| {
            (0..m).map(move |k| (f, k))
        })
        .map(|(f, k)| Mor {
            label: format!("({},{}/{m})", base.morphisms[f].label, k),
            src: base.src(f),
            dst: base.dst(f),
        })
        .collect();
    debug_assert_eq!(morphisms.len(), count);
    let mut compose = HashMap::new();
    for (g, f, gf) in base.composable_pairs() {
        let b = gerbe.value(g, f);
        for w in 0..m {
            for z in 0..m {
                let total = QmodZ::new(w, m) + QmodZ::new(z, m) + b;
                let k = total.numer() * (m / total.denom());
                compose.insert((midx(g, w), midx(f, z)), midx(gf, k));
            }
        }
    }
    let ident = (0..base.object_count()).map(|x| midx(base.identity_of(x), 0)).collect();
    let inv = (0..base.morphism_count())
        .flat_map(|f| (0..m).map(move |z| (f, z)))
        .map(|(f, z)| {
            let fi = base.inverse(f);
            // (f, z)⁻¹ = (f⁻¹, −z − β(f⁻¹, f)).
            let v = -(QmodZ::new(z, m) + gerbe.value(fi, f));
            midx(fi, v.numer() * (m / v.denom()))
        })
        .collect();
    let gpd = Arc::new(FiniteGroupoid::from_parts(
        format!("Ext({})", base.name),
        base.objects.clone(),
        morphisms,
        compose,
        ident,
        inv,
    ));
    Ok((gpd, m))
}

// ---------------------------------------------------------------------------
// Transgression
// ---------------------------------------------------------------------------

/// Transgression of a normalized 2-cocycle: one Q/Z value per loop-groupoid
/// morphism. Verifies the result is a 1-cocycle on LX (exhaustively when
/// feasible, by seeded sampling otherwise) and that identities map to 0.
pub fn transgress_gerbe(lm: &LoopModel, gerbe: &Gerbe) -> Result<Vec<QmodZ>> {
    if !Arc::ptr_eq(&gerbe.gpd, &lm.base) && !gerbe.gpd.same_presentation(&lm.base) {
        return Err(Error::precondition("transgression-base", "gerbe lives on a different base"));
    }
    if !gerbe.is_normalized() {
        return Err(Error::precondition(
            "gerbe-normalized",
            "transgression formula needs a normalized cocycle; gauge-normalize first",
        ));
    }
    let base = &lm.base;
    let tau: Vec<QmodZ> = lm
        .mor_tags
        .iter()
        .map(|&(o, mu)| {
            let gamma = lm.loop_of(o);
            let mu_inv = base.inverse(mu);
            let mu_gamma = base.comp(mu, gamma);
            gerbe.value(mu, gamma) + gerbe.value(mu_gamma, mu_inv) - gerbe.value(mu, mu_inv)
        })
        .collect();
    for x in 0..lm.gpd.object_count() {
        let e = lm.gpd.identity_of(x);
        if !tau[e].is_zero() {
            return Err(Error::internal("transgression of an identity is nonzero"));
        }
    }
    let pairs = lm.gpd.composable_count();
    if pairs <= EXHAUSTIVE_TRIPLES {
        for (g, f, gf) in lm.gpd.composable_pairs() {
            if tau[gf] != tau[g] + tau[f] {
                return Err(Error::internal("transgression is not a 1-cocycle"));
            }
        }
    } else {
        let mut state = 0x51ab_3c7e_22d1_90f3u64;
        let nm = lm.gpd.morphism_count() as u64;
        let mut by_src: Vec<Vec<usize>> = vec![Vec::new(); lm.gpd.object_count()];
        for mor in 0..lm.gpd.morphism_count() {
            by_src[lm.gpd.src(mor)].push(mor);
        }
        for _ in 0..SAMPLE_ROUNDS {
            let f = (xorshift(&mut state) % nm) as usize;
            let gs = &by_src[lm.gpd.dst(f)];
            let g = gs[(xorshift(&mut state) % gs.len() as u64) as usize];
            let gf = lm.gpd.comp(g, f);
            if tau[gf] != tau[g] + tau[f] {
                return Err(Error::internal("transgression is not a 1-cocycle"));
            }
        }
    }
    Ok(tau)
}

/// Transgression of a 1-cocycle: the function h(x, γ) = Φ(γ) on loop
/// objects, checked to be constant on sectors.
pub fn transgress_bundle(lm: &LoopModel, phi: &BundleCocycle) -> Result<Vec<QmodZ>> {
    if !Arc::ptr_eq(&phi.gpd, &lm.base) && !phi.gpd.same_presentation(&lm.base) {
        return Err(Error::precondition("transgression-base", "cocycle lives on a different base"));
    }
    let h: Vec<QmodZ> = lm.obj_tags.iter().map(|&(_, g)| phi.values[g]).collect();
    for m in 0..lm.gpd.morphism_count() {
        if h[lm.gpd.src(m)] != h[lm.gpd.dst(m)] {
            return Err(Error::internal("descended function is not constant on sectors"));
        }
    }
    Ok(h)
}

/// Order of a loop γ inside its automorphism group.
fn loop_order(base: &FiniteGroupoid, gamma: usize) -> i64 {
    let e = base.identity_of(base.src(gamma));
    let mut p = gamma;
    let mut m = 1i64;
    while p != e {
        p = base.comp(p, gamma);
        m += 1;
    }
    m
}

/// Checks h = χ̄ pointwise: χ is the integral coboundary of the canonical
/// lift of Φ on each automorphism group, and χ̄(γ) averages χ(γ^j, γ) over
/// the cyclic subgroup generated by γ.
pub fn check_h_equals_chi_bar(lm: &LoopModel, phi: &BundleCocycle) -> Result<()> {
    let base = &lm.base;
    let h = transgress_bundle(lm, phi)?;
    for (o, &(x, gamma)) in lm.obj_tags.iter().enumerate() {
        let m = loop_order(base, gamma);
        // χ(a, b) = lift Φ(a) + lift Φ(b) − lift Φ(a∘b) on Aut(x).
        let mut sum = 0i64;
        let mut p = base.identity_of(x);
        for _ in 0..m {
            let pg = base.comp(p, gamma);
            let chi = phi.values[p].lift() + phi.values[gamma].lift() - phi.values[pg].lift();
            assert!(chi.is_integer(), "the carry of a 1-cocycle must be integral");
            sum += chi.to_integer();
            p = pg;
        }
        let chibar = QmodZ::new(sum, m);
        if chibar != h[o] {
            return Err(Error::internal(format!(
                "holonomy disagrees with averaged carry at {}",
                lm.gpd.objects[o]
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Inner local systems
// ---------------------------------------------------------------------------

/// The character a transgressed gerbe induces on the isotropy of each
/// sector representative.
#[derive(Clone, Debug)]
pub struct SectorCharacter {
    /// Loop object representing the sector.
    pub rep: usize,
    /// Isotropy morphisms at the representative.
    pub aut: Vec<usize>,
    /// Character values, aligned with `aut`.
    pub eps: Vec<QmodZ>,
}

impl SectorCharacter {
    pub fn is_trivial(&self) -> bool {
        self.eps.iter().all(|v| v.is_zero())
    }
}

/// Restricts a transgressed 1-cocycle to the isotropy groups of sector
/// representatives, verifying multiplicativity and conjugation invariance.
pub fn inner_local_system(lm: &LoopModel, tau: &[QmodZ]) -> Result<Vec<SectorCharacter>> {
    let (_, reps) = sectors(lm);
    let mut out = Vec::with_capacity(reps.len());
    for &rep in &reps {
        let aut = lm.gpd.aut(rep);
        let eps: Vec<QmodZ> = aut.iter().map(|&m| tau[m]).collect();
        for (i, &a) in aut.iter().enumerate() {
            for (j, &b) in aut.iter().enumerate() {
                let ab = lm.gpd.comp(a, b);
                let k = aut.iter().position(|&m| m == ab).unwrap();
                if eps[k] != eps[i] + eps[j] {
                    return Err(Error::internal("sector character is not multiplicative"));
                }
            }
        }
        out.push(SectorCharacter { rep, aut, eps });
    }
    // Conjugation invariance: transporting isotropy along any morphism of
    // the loop groupoid preserves the values.
    for m in 0..lm.gpd.morphism_count() {
        let s = lm.gpd.src(m);
        for &a in &lm.gpd.aut(s) {
            let conj = lm.gpd.comp(lm.gpd.comp(m, a), lm.gpd.inverse(m));
            if tau[conj] != tau[a] {
                return Err(Error::internal("sector character is not conjugation-invariant"));
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// The product twist and fiber holonomy
// ---------------------------------------------------------------------------

/// The product group Z/n × Γ with the 2-cocycle
/// β((a, γ), (b, γ′)) = b·φ(γ), b taken in {0..n−1}, as a gerbe on its
/// one-object groupoid. Requires the order of φ to divide n.
pub fn build_e_phi(
    n: usize,
    gamma: &FiniteGroup,
    phi: &[QmodZ],
) -> Result<(Product, Arc<FiniteGroupoid>, Gerbe)> {
    check_character(gamma, phi)?;
    let ord = character_order(phi);
    if n as i64 % ord != 0 {
        return Err(Error::precondition(
            "twist-order",
            format!("fiber order {n} is not a multiple of the twist order {ord}"),
        ));
    }
    let prod = Product::new(&FiniteGroup::cyclic(n), gamma);
    let gpd = FiniteGroupoid::one_object(&prod.group);
    let gerbe = Gerbe::from_rule(&gpd, |g, f| {
        // One-object base: morphism index = group element index.
        let (_a1, g1) = prod.split(g);
        let (b2, _g2) = prod.split(f);
        phi[g1].scale(b2 as i64)
    });
    Ok((prod, gpd, gerbe))
}

/// φ is a homomorphism Γ -> Q/Z.
pub fn check_character(gamma: &FiniteGroup, phi: &[QmodZ]) -> Result<()> {
    if phi.len() != gamma.order() {
        return Err(Error::precondition("character-shape", "one value per element"));
    }
    if !phi[gamma.identity()].is_zero() {
        return Err(Error::precondition("character-hom", "identity must map to 0"));
    }
    for a in 0..gamma.order() {
        for b in 0..gamma.order() {
            if phi[gamma.mul(a, b)] != phi[a] + phi[b] {
                return Err(Error::precondition(
                    "character-hom",
                    format!(
                        "additivity fails on ({}, {})",
                        gamma.label(a),
                        gamma.label(b)
                    ),
                ));
            }
        }
    }
    Ok(())
}

/// Least m with m·φ = 0.
pub fn character_order(phi: &[QmodZ]) -> i64 {
    phi.iter().fold(1i64, |acc, v| num_integer::lcm(acc, v.denom()))
}

/// One fiber element's worth of holonomy data for a single group element.
#[derive(Clone, Debug)]
pub struct HolonomyEntry {
    pub element: String,
    /// Route 1: transgression of the product twist, evaluated against the
    /// fiber direction (the generator with w(t,0) = w(t,1)·g orientation,
    /// i.e. the inverse generator of Z/n).
    pub transgressed: QmodZ,
    /// Route 2: the character itself.
    pub character: QmodZ,
    /// Route 3: averaged integral carry of the integrated connecting
    /// cocycle (χ̄ of π_! of the lifted coboundary of e_φ).
    pub integrated: QmodZ,
}

#[derive(Clone, Debug)]
pub struct HolonomyReport {
    pub fiber_order: usize,
    pub entries: Vec<HolonomyEntry>,
    pub all_equal: bool,
    /// Whether the full loop-groupoid pipeline was additionally run (only
    /// for small total orders) and agreed.
    pub pipeline_checked: bool,
}

/// Verifies, for every γ ∈ Γ, that three independently computed values
/// agree exactly: the transgression of the product twist against the fiber
/// direction, the character φ(γ), and the averaged carry of the integrated
/// connecting cocycle. The first route uses the closed β formula directly
/// (componentwise in Z/n × Γ), so no large multiplication table is built;
/// when n·|Γ| is small the full loop-groupoid transgression is also run
/// and compared.
pub fn verify_holonomy(n: usize, gamma: &FiniteGroup, phi: &[QmodZ]) -> Result<HolonomyReport> {
    check_character(gamma, phi)?;
    let ord = character_order(phi);
    if n as i64 % ord != 0 {
        return Err(Error::precondition(
            "twist-order",
            format!("fiber order {n} is not a multiple of the twist order {ord}"),
        ));
    }
    // β((a,γ),(b,γ′)) = b·φ(γ) evaluated componentwise.
    let beta = |g1: usize, b2: usize| phi[g1].scale(b2 as i64);
    let kappa = zxg::integrated_bockstein_table(gamma, phi)?;
    let mut entries = Vec::with_capacity(gamma.order());
    let mut all_equal = true;
    for s in 0..gamma.order() {
        // Loop ℓ = (0, σ); fiber direction μ = (n−1, e); μ⁻¹ = (1, e);
        // μ∘ℓ = (n−1, σ). τβ(ℓ, μ) = β(μ, ℓ) + β(μℓ, μ⁻¹) − β(μ, μ⁻¹).
        let e = gamma.identity();
        let t = beta(e, 0) + beta(s, 1) - beta(e, 1);
        let transgressed = t;
        let character = phi[s];
        let integrated = grpcohom::chi_bar(gamma, &|a, b| kappa[a][b], s);
        if transgressed != character || integrated != character {
            all_equal = false;
        }
        entries.push(HolonomyEntry {
            element: gamma.label(s).to_string(),
            transgressed,
            character,
            integrated,
        });
    }
    // Full pipeline cross-check at small sizes.
    let mut pipeline_checked = false;
    if n * gamma.order() <= 48 {
        let (prod, gpd, gerbe) = build_e_phi(n, gamma, phi)?;
        gerbe.check_cocycle()?;
        let lm = crate::loops::loop_groupoid(&gpd)?;
        let tau = transgress_gerbe(&lm, &gerbe)?;
        let mu = prod.pair(n - 1, gamma.identity());
        for s in 0..gamma.order() {
            let ell = prod.pair(0, s);
            let o = lm.obj_lookup[&(0, ell)];
            let m = lm.mor_lookup[&(o, mu)];
            if tau[m] != entries[s].transgressed {
                return Err(Error::internal(
                    "groupoid transgression disagrees with the closed formula",
                ));
            }
        }
        pipeline_checked = true;
    }
    Ok(HolonomyReport { fiber_order: n, entries, all_equal, pipeline_checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grpcohom::characters;
    use crate::loops::loop_groupoid;

    fn bg(g: &FiniteGroup) -> Arc<FiniteGroupoid> {
        FiniteGroupoid::one_object(g)
    }

    fn carry_gerbe(g: &FiniteGroup, phi: &[QmodZ]) -> Gerbe {
        // The integral carry of φ, scaled into Q/Z by the order of φ: a
        // normalized 2-cocycle with Q/Z values.
        let ord = character_order(phi);
        let gpd = bg(g);
        Gerbe::from_rule(&gpd, |a, b| {
            let lift = phi[a].lift() + phi[b].lift() - phi[g.mul(a, b)].lift();
            assert!(lift.is_integer());
            QmodZ::new(lift.to_integer(), ord)
        })
    }

    #[test]
    fn gauge_normalization_kills_identity_values() {
        let g = FiniteGroup::cyclic(4);
        // A cocycle that is not normalized: shift a normalized one by a
        // coboundary with c(id) ≠ 0.
        let phi = characters(&g).into_iter().find(|p| !p[1].is_zero()).unwrap();
        let base = carry_gerbe(&g, &phi);
        base.check_cocycle().unwrap();
        assert!(base.is_normalized());
        let c: Vec<QmodZ> = (0..4).map(|i| QmodZ::new(i as i64 + 1, 8)).collect();
        let shifted = base.shift_by_coboundary(&c);
        shifted.check_cocycle().unwrap();
        assert!(!shifted.is_normalized());
        let (renorm, _) = shifted.gauge_normalize();
        renorm.check_cocycle().unwrap();
        assert!(renorm.is_normalized());
    }

    #[test]
    fn extension_groupoid_realizes_transgression_as_conjugation() {
        let g = FiniteGroup::cyclic(4);
        let phi = characters(&g).into_iter().find(|p| p[1].denom() == 4).unwrap();
        let gerbe = carry_gerbe(&g, &phi);
        let gpd = gerbe.gpd.clone();
        let (ext, m) = extension_groupoid(&gerbe).unwrap();
        ext.validate().unwrap();
        let lm = loop_groupoid(&gpd).unwrap();
        let tau = transgress_gerbe(&lm, &gerbe).unwrap();
        // Conjugating the canonical lift (γ, 0) by (μ, 0) must land on
        // (μγμ⁻¹, τ((x,γ),μ)).
        let midx = |f: usize, k: i64| f * m as usize + k as usize;
        for lmm in 0..lm.gpd.morphism_count() {
            let (o, mu) = lm.mor_tags[lmm];
            let gamma = lm.loop_of(o);
            let lifted_gamma = midx(gamma, 0);
            let lifted_mu = midx(mu, 0);
            let conj =
                ext.comp(ext.comp(lifted_mu, lifted_gamma), ext.inverse(lifted_mu));
            let expect_gamma = gpd.comp(gpd.comp(mu, gamma), gpd.inverse(mu));
            let z = tau[lmm];
            assert_eq!(conj, midx(expect_gamma, z.numer() * (m / z.denom())));
        }
    }

    #[test]
    fn commutator_pairing_for_abelian_normalized_cocycles() {
        // On a one-object abelian base with normalized β:
        // τβ(γ, μ) = β(μ, γ) − β(γ, μ) exactly.
        let g = FiniteGroup::klein_four();
        let mut gerbes: Vec<Gerbe> =
            characters(&g).iter().map(|phi| carry_gerbe(&g, phi)).collect();
        // A genuinely non-symmetric bilinear cocycle, so τ is nonzero.
        let gpd = bg(&g);
        gerbes.push(Gerbe::from_rule(&gpd, |a, b| QmodZ::new(((a / 2) * (b % 2)) as i64, 2)));
        let mut saw_nonzero = false;
        for gerbe in gerbes {
            gerbe.check_cocycle().unwrap();
            assert!(gerbe.is_normalized());
            let gpd = gerbe.gpd.clone();
            let lm = loop_groupoid(&gpd).unwrap();
            let tau = transgress_gerbe(&lm, &gerbe).unwrap();
            for m in 0..lm.gpd.morphism_count() {
                let (o, mu) = lm.mor_tags[m];
                let gamma = lm.loop_of(o);
                assert_eq!(tau[m], gerbe.value(mu, gamma) - gerbe.value(gamma, mu));
                saw_nonzero |= !tau[m].is_zero();
            }
        }
        assert!(saw_nonzero, "at least one transgression must be nontrivial");
    }

    #[test]
    fn bundle_transgression_and_chi_bar() {
        for g in [FiniteGroup::cyclic(6), FiniteGroup::symmetric_3()] {
            let gpd = bg(&g);
            let lm = loop_groupoid(&gpd).unwrap();
            for phi in characters(&g) {
                let bundle = BundleCocycle::new(&gpd, phi.clone()).unwrap();
                let h = transgress_bundle(&lm, &bundle).unwrap();
                for (o, &(_, gam)) in lm.obj_tags.iter().enumerate() {
                    assert_eq!(h[o], phi[gam]);
                }
                check_h_equals_chi_bar(&lm, &bundle).unwrap();
            }
        }
    }

    #[test]
    fn inner_local_system_characters() {
        let g = FiniteGroup::quaternion_8();
        let phi = characters(&g).into_iter().find(|p| p.iter().any(|v| !v.is_zero())).unwrap();
        let gerbe = carry_gerbe(&g, &phi);
        let gpd = gerbe.gpd.clone();
        let lm = loop_groupoid(&gpd).unwrap();
        let tau = transgress_gerbe(&lm, &gerbe).unwrap();
        let sys = inner_local_system(&lm, &tau).unwrap();
        assert_eq!(sys.len(), g.conjugacy_classes().len());
        // The identity sector always carries the trivial character.
        let id_sector = sys
            .iter()
            .find(|s| lm.loop_of(s.rep) == g.identity())
            .expect("identity sector exists");
        assert!(id_sector.is_trivial());
    }

    #[test]
    fn holonomy_theorem_small() {
        let gamma = FiniteGroup::cyclic(3);
        let phi = characters(&gamma).into_iter().find(|p| p[1].denom() == 3).unwrap();
        let rep = verify_holonomy(3, &gamma, &phi).unwrap();
        assert!(rep.all_equal);
        assert!(rep.pipeline_checked);
        for e in &rep.entries {
            assert_eq!(e.transgressed, e.character);
            assert_eq!(e.integrated, e.character);
        }
    }

    #[test]
    fn holonomy_theorem_beyond_pipeline_sizes() {
        let gamma = FiniteGroup::cyclic(6);
        let phi = characters(&gamma).into_iter().find(|p| p[1].denom() == 6).unwrap();
        let rep = verify_holonomy(12, &gamma, &phi).unwrap();
        assert!(rep.all_equal);
        assert!(!rep.pipeline_checked);
        assert_eq!(rep.entries[1].transgressed, QmodZ::new(1, 6));
    }

    #[test]
    fn holonomy_rejects_wrong_fiber_order() {
        let gamma = FiniteGroup::cyclic(3);
        let phi = characters(&gamma).into_iter().find(|p| p[1].denom() == 3).unwrap();
        assert!(verify_holonomy(4, &gamma, &phi).is_err());
    }
}
