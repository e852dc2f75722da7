//! Bar cochains on Z × Γ that are affine of degree <= 1 in each integer
//! slot, stored exactly: a degree-d cochain is
//!
//!   c((n₁,γ₁),…,(n_d,γ_d)) = Σ_m (Π_{i∈m} n_i) · F_m(γ₁,…,γ_d)
//!
//! over subsets m of the slots, each `F_m` a finite table over Γ^d. The
//! class is closed under the bar coboundary (merging (n_i + n_{i+1})
//! splits a mask into two), which is what makes slant integration along
//! the integer factor exactly computable.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::gpd::FiniteGroup;
use crate::qmodz::QmodZ;

/// Coefficient values: an abelian group with integer scaling.
pub trait ZMod: Clone + PartialEq + std::fmt::Debug {
    fn zmod_zero() -> Self;
    fn zmod_is_zero(&self) -> bool;
    fn zmod_add(&self, o: &Self) -> Self;
    fn zmod_neg(&self) -> Self;
    fn zmod_scale(&self, k: i64) -> Self;
}

impl ZMod for QmodZ {
    fn zmod_zero() -> Self {
        QmodZ::ZERO
    }
    fn zmod_is_zero(&self) -> bool {
        QmodZ::is_zero(self)
    }
    fn zmod_add(&self, o: &Self) -> Self {
        *self + *o
    }
    fn zmod_neg(&self) -> Self {
        -*self
    }
    fn zmod_scale(&self, k: i64) -> Self {
        self.scale(k)
    }
}

impl ZMod for BigRational {
    fn zmod_zero() -> Self {
        BigRational::from_integer(0.into())
    }
    fn zmod_is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn zmod_add(&self, o: &Self) -> Self {
        self + o
    }
    fn zmod_neg(&self) -> Self {
        -self
    }
    fn zmod_scale(&self, k: i64) -> Self {
        self * BigRational::from_integer(k.into())
    }
}

impl ZMod for BigInt {
    fn zmod_zero() -> Self {
        BigInt::from(0)
    }
    fn zmod_is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn zmod_add(&self, o: &Self) -> Self {
        self + o
    }
    fn zmod_neg(&self) -> Self {
        -self
    }
    fn zmod_scale(&self, k: i64) -> Self {
        self * BigInt::from(k)
    }
}

/// Index of a Γ-tuple, first slot most significant.
pub fn tuple_index(q: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &g| acc * q + g)
}

/// Inverse of [`tuple_index`].
pub fn index_tuple(q: usize, d: usize, mut idx: usize) -> Vec<usize> {
    let mut out = vec![0usize; d];
    for i in (0..d).rev() {
        out[i] = idx % q;
        idx /= q;
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiCochain<V> {
    /// |Γ|.
    pub q: usize,
    pub degree: usize,
    /// Bitmask of integer-linear slots -> table over Γ^degree.
    pub parts: BTreeMap<u64, Vec<V>>,
}

impl<V: ZMod> MultiCochain<V> {
    pub fn zero(q: usize, degree: usize) -> Self {
        MultiCochain { q, degree, parts: BTreeMap::new() }
    }

    fn table_len(&self) -> usize {
        self.q.pow(self.degree as u32)
    }

    fn part_mut(&mut self, mask: u64) -> &mut Vec<V> {
        let len = self.table_len();
        self.parts.entry(mask).or_insert_with(|| vec![V::zmod_zero(); len])
    }

    /// Drops all-zero tables (canonical form for equality tests).
    pub fn prune(mut self) -> Self {
        self.parts.retain(|_, t| t.iter().any(|v| !v.zmod_is_zero()));
        self
    }

    /// Value at explicit arguments.
    pub fn eval(&self, args: &[(i64, usize)]) -> V {
        assert_eq!(args.len(), self.degree);
        let gidx = tuple_index(self.q, &args.iter().map(|a| a.1).collect::<Vec<_>>());
        let mut acc = V::zmod_zero();
        for (&mask, table) in &self.parts {
            let mut coeff = 1i64;
            for i in 0..self.degree {
                if mask >> i & 1 == 1 {
                    coeff *= args[i].0;
                }
            }
            if coeff != 0 {
                acc = acc.zmod_add(&table[gidx].zmod_scale(coeff));
            }
        }
        acc
    }

    /// Bar coboundary (trivial coefficients, full complex).
    pub fn delta(&self, g: &FiniteGroup) -> MultiCochain<V> {
        let d = self.degree;
        let q = self.q;
        let mut out = MultiCochain::<V>::zero(q, d + 1);
        let out_len = q.pow((d + 1) as u32);
        for (&mask, table) in &self.parts {
            // Face 0: drop the first argument; slots shift up by one.
            {
                let t = out.part_mut(mask << 1);
                for idx in 0..out_len {
                    let rest = idx % q.pow(d as u32);
                    let v = &table[rest];
                    if !v.zmod_is_zero() {
                        t[idx] = t[idx].zmod_add(v);
                    }
                }
            }
            // Merge faces k = 1..d, sign (-1)^k: slots k-1 and k of the
            // output merge into slot k-1 of the input.
            for k in 1..=d {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let low_mask = mask & ((1u64 << (k - 1)) - 1);
                let high_mask = (mask >> (k - 1) << k) & !((1u64 << k) - 1);
                let base = low_mask | high_mask;
                let out_masks: Vec<u64> = if mask >> (k - 1) & 1 == 1 {
                    // The merged slot carried its integer: (n_{k-1} + n_k)
                    // splits into the two output slots.
                    let base = base & !(1u64 << (k - 1)) & !(1u64 << k);
                    vec![base | 1 << (k - 1), base | 1 << k]
                } else {
                    vec![base]
                };
                for idx in 0..out_len {
                    let a = index_tuple(q, d + 1, idx);
                    let mut b = Vec::with_capacity(d);
                    b.extend_from_slice(&a[..k - 1]);
                    b.push(g.mul(a[k - 1], a[k]));
                    b.extend_from_slice(&a[k + 1..]);
                    let v = table[tuple_index(q, &b)].zmod_scale(sign);
                    if v.zmod_is_zero() {
                        continue;
                    }
                    for &om in &out_masks {
                        let t = out.part_mut(om);
                        t[idx] = t[idx].zmod_add(&v);
                    }
                }
            }
            // Face d+1: drop the last argument, sign (-1)^{d+1}.
            {
                let sign = if (d + 1) % 2 == 0 { 1 } else { -1 };
                let t = out.part_mut(mask);
                for idx in 0..out_len {
                    let prefix = idx / q;
                    let v = table[prefix].zmod_scale(sign);
                    if !v.zmod_is_zero() {
                        t[idx] = t[idx].zmod_add(&v);
                    }
                }
            }
        }
        out.prune()
    }

    /// Slant integration along the integer factor: for degree d >= 1,
    ///
    ///   (π_! c)(γ₁,…,γ_{d-1}) = Σ_{i=0}^{d-1} (-1)^i
    ///        c((0,γ₁),…,(0,γ_i),(1,e),(0,γ_{i+1}),…,(0,γ_{d-1}))
    ///
    /// returning a plain bar cochain table on Γ^{d-1}.
    pub fn integrate(&self, g: &FiniteGroup) -> Vec<V> {
        let d = self.degree;
        assert!(d >= 1, "integration needs degree >= 1");
        let q = self.q;
        let out_len = q.pow((d - 1) as u32);
        let empty = self.parts.get(&0);
        let mut out = vec![V::zmod_zero(); out_len];
        for idx in 0..out_len {
            let gs = index_tuple(q, d - 1, idx);
            for i in 0..d {
                let mut tuple = Vec::with_capacity(d);
                tuple.extend_from_slice(&gs[..i]);
                tuple.push(g.identity());
                tuple.extend_from_slice(&gs[i..]);
                let tidx = tuple_index(q, &tuple);
                // Only the empty mask and the singleton {i} survive at a
                // 0/1 integer vector supported on slot i.
                let mut v = V::zmod_zero();
                if let Some(t) = empty {
                    v = v.zmod_add(&t[tidx]);
                }
                if let Some(t) = self.parts.get(&(1u64 << i)) {
                    v = v.zmod_add(&t[tidx]);
                }
                if i % 2 == 1 {
                    v = v.zmod_neg();
                }
                out[idx] = out[idx].zmod_add(&v);
            }
        }
        out
    }
}

/// The degree-2 cocycle e_φ((n₁,γ₁),(n₂,γ₂)) = n₂·φ(γ₁) attached to a
/// character φ: Γ -> Q/Z.
pub fn e_phi(g: &FiniteGroup, phi: &[QmodZ]) -> MultiCochain<QmodZ> {
    let q = g.order();
    let mut c = MultiCochain::zero(q, 2);
    {
        let t = c.part_mut(0b10);
        for g1 in 0..q {
            for g2 in 0..q {
                t[tuple_index(q, &[g1, g2])] = phi[g1];
            }
        }
    }
    c.prune()
}

/// Connecting homomorphism at the cochain level: lift a Q/Z-valued cocycle
/// to rational tables, take the coboundary, and certify integrality. Errors
/// on non-cocycles (integrality fails exactly then).
pub fn bockstein(g: &FiniteGroup, c: &MultiCochain<QmodZ>) -> Result<MultiCochain<BigInt>> {
    let lifted = MultiCochain {
        q: c.q,
        degree: c.degree,
        parts: c
            .parts
            .iter()
            .map(|(&m, t)| (m, t.iter().map(|v| v.lift_big()).collect()))
            .collect(),
    };
    let d = lifted.delta(g);
    let mut parts = BTreeMap::new();
    for (m, t) in d.parts {
        let mut out = Vec::with_capacity(t.len());
        for v in t {
            if !v.is_integer() {
                return Err(Error::precondition(
                    "bockstein-cocycle",
                    "input is not a cocycle mod 1, so no integral lift of its coboundary exists",
                ));
            }
            out.push(v.to_integer());
        }
        parts.insert(m, out);
    }
    Ok(MultiCochain { q: c.q, degree: c.degree + 1, parts }.prune())
}

/// Plain (unnormalized) bar coboundary of a full table on Γ^d with trivial
/// coefficients; used to cross-check the integration identities.
pub fn bar_delta_table<V: ZMod>(g: &FiniteGroup, d: usize, table: &[V]) -> Vec<V> {
    let q = g.order();
    assert_eq!(table.len(), q.pow(d as u32));
    let out_len = q.pow((d + 1) as u32);
    let mut out = vec![V::zmod_zero(); out_len];
    for idx in 0..out_len {
        let a = index_tuple(q, d + 1, idx);
        let mut acc = table[tuple_index(q, &a[1..])].clone();
        for k in 1..=d {
            let mut b = Vec::with_capacity(d);
            b.extend_from_slice(&a[..k - 1]);
            b.push(g.mul(a[k - 1], a[k]));
            b.extend_from_slice(&a[k + 1..]);
            let sign = if k % 2 == 0 { 1 } else { -1 };
            acc = acc.zmod_add(&table[tuple_index(q, &b)].zmod_scale(sign));
        }
        let sign = if (d + 1) % 2 == 0 { 1 } else { -1 };
        acc = acc.zmod_add(&table[tuple_index(q, &a[..d])].zmod_scale(sign));
        out[idx] = acc;
    }
    out
}

/// Extension trait shims used above.
trait LiftBig {
    fn lift_big(&self) -> BigRational;
}

impl LiftBig for QmodZ {
    fn lift_big(&self) -> BigRational {
        BigRational::new(BigInt::from(self.numer()), BigInt::from(self.denom()))
    }
}

/// Carries of a character along the integer slot: bockstein(e_φ) followed
/// by integration yields exactly the carry table κ_φ(γ₁, γ₂).
pub fn integrated_bockstein_table(g: &FiniteGroup, phi: &[QmodZ]) -> Result<Vec<Vec<i64>>> {
    let d = bockstein(g, &e_phi(g, phi))?;
    let flat = d.integrate(g);
    let q = g.order();
    Ok((0..q)
        .map(|a| {
            (0..q)
                .map(|b| {
                    flat[tuple_index(q, &[a, b])].to_i64().expect("carry fits i64")
                })
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grpcohom::{carry_cocycle, characters};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn e_phi_is_a_cocycle_and_integrates_to_minus_phi() {
        let g = FiniteGroup::cyclic(6);
        for phi in characters(&g) {
            let c = e_phi(&g, &phi);
            assert!(c.delta(&g).parts.is_empty(), "e_phi must be a 2-cocycle");
            let flat = c.integrate(&g);
            for x in 0..g.order() {
                assert_eq!(flat[x], -phi[x]);
            }
        }
    }

    #[test]
    fn bockstein_of_e_phi_is_the_carry_cocycle() {
        for g in [FiniteGroup::cyclic(4), FiniteGroup::cyclic(6), FiniteGroup::klein_four()] {
            for phi in characters(&g) {
                let table = integrated_bockstein_table(&g, &phi).unwrap();
                let kappa = carry_cocycle(&g, &phi);
                for a in 0..g.order() {
                    for b in 0..g.order() {
                        assert_eq!(table[a][b], kappa[a][b]);
                    }
                }
            }
        }
    }

    #[test]
    fn bockstein_rejects_non_cocycles() {
        let g = FiniteGroup::cyclic(4);
        let mut c = MultiCochain::zero(g.order(), 2);
        // A random-ish Q/Z table with no cocycle structure.
        let t = c.part_mut(0);
        t[tuple_index(4, &[1, 2])] = QmodZ::new(1, 3);
        assert!(bockstein(&g, &c).is_err());
    }

    #[test]
    fn integration_anticommutes_with_coboundary() {
        let g = FiniteGroup::cyclic(3);
        let q = g.order();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for degree in [1usize, 2, 3] {
            for _ in 0..5 {
                let mut c = MultiCochain::zero(q, degree);
                for mask in 0u64..(1 << degree) {
                    let table = c.part_mut(mask);
                    for v in table.iter_mut() {
                        *v = QmodZ::new(rng.gen_range(0..12), 12);
                    }
                }
                let lhs = c.delta(&g).integrate(&g);
                let rhs: Vec<QmodZ> = bar_delta_table(&g, degree - 1, &c.integrate(&g))
                    .iter()
                    .map(|v| -*v)
                    .collect();
                assert_eq!(lhs, rhs, "degree {degree}");
            }
        }
    }

    #[test]
    fn eval_matches_tables() {
        let g = FiniteGroup::cyclic(5);
        let phi = &characters(&g)[1];
        let c = e_phi(&g, phi);
        for n2 in -3i64..=3 {
            for g1 in 0..5 {
                for g2 in 0..5 {
                    assert_eq!(c.eval(&[(9, g1), (n2, g2)]), phi[g1].scale(n2));
                }
            }
        }
    }
}
