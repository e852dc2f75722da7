//! Group cohomology of a finite group with trivial coefficients Z, Q and
//! Q/Z, computed from the normalized bar complex (cochains vanish whenever
//! an argument is the identity, so dim C^n = (|Γ|-1)^n).
//!
//! Integral answers are presented as rank plus invariant factors via Smith
//! normal form. Q/Z answers use the connecting identification with integral
//! cohomology one degree up, guarded at runtime by the vanishing of the
//! rational cohomology it requires. Degree-zero Q/Z cohomology is the full
//! divisible group and is reported as such rather than as a finite group.

pub mod zxg;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gpd::FiniteGroup;
use crate::linalg::{rank_sparse, snf_sparse, solve_integer, SparseMat};
use crate::qmodz::QmodZ;

/// Cap on the number of rows of any coboundary matrix we will build.
const BAR_GUARD: usize = 5_000_000;

/// A finitely generated abelian group: free rank plus invariant factors
/// (each dividing the next, all > 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinAb {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl FinAb {
    pub fn trivial() -> FinAb {
        FinAb { rank: 0, torsion: vec![] }
    }

    pub fn order(&self) -> Option<u64> {
        if self.rank > 0 {
            return None;
        }
        Some(self.torsion.iter().product())
    }
}

impl std::fmt::Display for FinAb {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Basis bookkeeping for the normalized bar complex: tuples over the
/// non-identity elements, indexed positionally.
pub struct BarBasis {
    /// Non-identity elements in index order.
    pub els: Vec<usize>,
    /// Position of each group element in `els` (identity -> None).
    pos: Vec<Option<usize>>,
}

impl BarBasis {
    pub fn new(g: &FiniteGroup) -> BarBasis {
        let els: Vec<usize> = (0..g.order()).filter(|&x| x != g.identity()).collect();
        let mut pos = vec![None; g.order()];
        for (i, &x) in els.iter().enumerate() {
            pos[x] = Some(i);
        }
        BarBasis { els, pos }
    }

    pub fn dim(&self, n: usize) -> usize {
        self.els.len().pow(n as u32)
    }

    /// Index of a tuple of group elements; None if any is the identity.
    pub fn index(&self, tuple: &[usize]) -> Option<usize> {
        let q = self.els.len();
        let mut idx = 0usize;
        for &x in tuple {
            idx = idx * q + self.pos[x]?;
        }
        Some(idx)
    }

    /// The tuple of group elements with the given index in degree n.
    pub fn tuple(&self, n: usize, mut idx: usize) -> Vec<usize> {
        let q = self.els.len();
        let mut out = vec![0usize; n];
        for i in (0..n).rev() {
            out[i] = self.els[idx % q];
            idx /= q;
        }
        out
    }
}

/// The coboundary C^n -> C^{n+1} of the normalized bar complex with trivial
/// coefficients, as a sparse integer matrix (rows = degree n+1 basis).
pub fn coboundary_matrix(g: &FiniteGroup, n: usize) -> Result<SparseMat<BigInt>> {
    let basis = BarBasis::new(g);
    let rows = basis.dim(n + 1);
    let cols = basis.dim(n);
    if rows > BAR_GUARD {
        return Err(Error::precondition(
            "cohomology-size",
            format!("bar complex needs {rows} rows in degree {} (cap {BAR_GUARD})", n + 1),
        ));
    }
    let mut acc: HashMap<(usize, usize), i64> = HashMap::new();
    for row in 0..rows {
        let t = basis.tuple(n + 1, row);
        // Face 0: drop the first argument.
        if let Some(col) = basis.index(&t[1..]) {
            *acc.entry((row, col)).or_insert(0) += 1;
        }
        // Faces 1..n: merge adjacent arguments, sign (-1)^i.
        for i in 0..n {
            let mut s = Vec::with_capacity(n);
            s.extend_from_slice(&t[..i]);
            s.push(g.mul(t[i], t[i + 1]));
            s.extend_from_slice(&t[i + 2..]);
            if let Some(col) = basis.index(&s) {
                *acc.entry((row, col)).or_insert(0) += if (i + 1) % 2 == 0 { 1 } else { -1 };
            }
        }
        // Face n+1: drop the last argument, sign (-1)^{n+1}.
        if let Some(col) = basis.index(&t[..n]) {
            *acc.entry((row, col)).or_insert(0) += if (n + 1) % 2 == 0 { 1 } else { -1 };
        }
    }
    let mut m = SparseMat::new(rows, cols);
    let mut entries: Vec<((usize, usize), i64)> =
        acc.into_iter().filter(|(_, v)| *v != 0).collect();
    entries.sort_unstable_by_key(|&(k, _)| k);
    for ((r, c), v) in entries {
        m.entries.push((r, c, BigInt::from(v)));
    }
    Ok(m)
}

fn to_rational(m: &SparseMat<BigInt>) -> SparseMat<BigRational> {
    SparseMat {
        rows: m.rows,
        cols: m.cols,
        entries: m
            .entries
            .iter()
            .map(|(r, c, v)| (*r, *c, BigRational::from_integer(v.clone())))
            .collect(),
    }
}

/// H^n(Γ; Z) with trivial action, as rank and invariant factors.
pub fn cohomology_z(g: &FiniteGroup, n: usize) -> Result<FinAb> {
    let basis = BarBasis::new(g);
    if n == 0 {
        return Ok(FinAb { rank: 1, torsion: vec![] });
    }
    let d_n = coboundary_matrix(g, n)?;
    let rank_n = rank_sparse(&to_rational(&d_n));
    let d_prev = coboundary_matrix(g, n - 1)?;
    let factors = snf_sparse(&d_prev);
    let rank_prev = factors.len();
    let rank = basis.dim(n) - rank_n - rank_prev;
    let torsion: Vec<u64> = factors
        .iter()
        .filter(|f| f.abs() > BigInt::from(1))
        .map(|f| f.abs().to_u64().expect("invariant factor fits u64"))
        .collect();
    Ok(FinAb { rank, torsion })
}

/// dim_Q H^n(Γ; Q).
pub fn betti_q(g: &FiniteGroup, n: usize) -> Result<usize> {
    let basis = BarBasis::new(g);
    if n == 0 {
        return Ok(1);
    }
    let rank_n = rank_sparse(&to_rational(&coboundary_matrix(g, n)?));
    let rank_prev = rank_sparse(&to_rational(&coboundary_matrix(g, n - 1)?));
    Ok(basis.dim(n) - rank_n - rank_prev)
}

/// H^n(Γ; Q/Z) with trivial action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum QmodZCohomology {
    /// Degree 0: the full divisible group Q/Z.
    Divisible,
    Finite(FinAb),
}

impl std::fmt::Display for QmodZCohomology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QmodZCohomology::Divisible => write!(f, "Q/Z"),
            QmodZCohomology::Finite(a) => write!(f, "{a}"),
        }
    }
}

/// H^n(Γ; Q/Z). For n >= 1 this is computed through the connecting
/// isomorphism onto H^{n+1}(Γ; Z), which requires the rational cohomology
/// in degrees n and n+1 to vanish; both facts are asserted at runtime
/// rather than assumed.
pub fn cohomology_qmodz(g: &FiniteGroup, n: usize) -> Result<QmodZCohomology> {
    if n == 0 {
        return Ok(QmodZCohomology::Divisible);
    }
    let bq_n = betti_q(g, n)?;
    let hz = cohomology_z(g, n + 1)?;
    if bq_n != 0 || hz.rank != 0 {
        return Err(Error::internal(format!(
            "rational cohomology does not vanish (betti_q({n}) = {bq_n}, free rank H^{} = {})",
            n + 1,
            hz.rank
        )));
    }
    Ok(QmodZCohomology::Finite(FinAb { rank: 0, torsion: hz.torsion }))
}

// ---------------------------------------------------------------------------
// Characters and the carry 2-cocycle
// ---------------------------------------------------------------------------

/// All homomorphisms Γ -> Q/Z, each as a value table indexed by element.
/// Enumerated by depth-first extension over the subgroup closure, so the
/// count is |Hom(Γ, Q/Z)| = |Γ^{ab}| with no representation theory assumed.
pub fn characters(g: &FiniteGroup) -> Vec<Vec<QmodZ>> {
    let mut out = Vec::new();
    let mut partial: Vec<Option<QmodZ>> = vec![None; g.order()];
    partial[g.identity()] = Some(QmodZ::ZERO);
    extend_character(g, &mut partial, &mut out);
    out.sort();
    out
}

fn extend_character(g: &FiniteGroup, partial: &mut Vec<Option<QmodZ>>, out: &mut Vec<Vec<QmodZ>>) {
    // Close the assigned region under multiplication, checking consistency.
    let mut partial = partial.clone();
    loop {
        let mut changed = false;
        let known: Vec<usize> = (0..g.order()).filter(|&x| partial[x].is_some()).collect();
        for &a in &known {
            for &b in &known {
                let ab = g.mul(a, b);
                let v = partial[a].unwrap() + partial[b].unwrap();
                match partial[ab] {
                    None => {
                        partial[ab] = Some(v);
                        changed = true;
                    }
                    Some(w) if w != v => return, // inconsistent branch
                    _ => {}
                }
            }
        }
        if !changed {
            break;
        }
    }
    let Some(next) = (0..g.order()).find(|&x| partial[x].is_none()) else {
        out.push(partial.iter().map(|v| v.unwrap()).collect());
        return;
    };
    // The image of `next` must be a root of unity of order dividing ord(next).
    let m = g.element_order(next) as i64;
    for k in 0..m {
        let mut branch = partial.clone();
        branch[next] = Some(QmodZ::new(k, m));
        extend_character(g, &mut branch, out);
    }
}

/// The carry 2-cocycle of a character: κ(a, b) = q(a) + q(b) - q(ab) where
/// q is the canonical [0,1) lift. Integer-valued; realizes the connecting
/// map Hom(Γ, Q/Z) -> H^2(Γ; Z) at the cochain level.
pub fn carry_cocycle(g: &FiniteGroup, phi: &[QmodZ]) -> Vec<Vec<i64>> {
    let lift = |x: usize| phi[x].lift();
    (0..g.order())
        .map(|a| {
            (0..g.order())
                .map(|b| {
                    let r = lift(a) + lift(b) - lift(g.mul(a, b));
                    assert!(r.is_integer(), "carry defect must be integral");
                    r.to_integer().to_i64().expect("carry fits i64")
                })
                .collect()
        })
        .collect()
}

/// Evaluation of the inverse connecting map on a 2-cocycle χ with values in
/// Z: χ̄(x) = (1/m) Σ_{j=0}^{m-1} χ(x^j, x) mod 1, where m = ord(x).
/// Constant on conjugacy classes when χ is a cocycle.
pub fn chi_bar(g: &FiniteGroup, chi: &dyn Fn(usize, usize) -> i64, x: usize) -> QmodZ {
    let m = g.element_order(x) as i64;
    let mut sum = 0i64;
    let mut p = g.identity();
    for _ in 0..m {
        sum += chi(p, x);
        p = g.mul(p, x);
    }
    QmodZ::new(sum, m)
}

/// Verifies δχ = 0 for a 2-cochain table.
pub fn is_two_cocycle(g: &FiniteGroup, chi: &dyn Fn(usize, usize) -> i64) -> bool {
    let n = g.order();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                // (δχ)(a,b,c) = χ(b,c) - χ(ab,c) + χ(a,bc) - χ(a,b)
                if chi(b, c) - chi(g.mul(a, b), c) + chi(a, g.mul(b, c)) - chi(a, b) != 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// Connecting-map bijectivity check at the cochain level: the carry
/// cocycles of distinct characters must lie in distinct integral
/// cohomology classes (difference not an integral coboundary), and the
/// class count must exhaust H^2(Γ; Z).
pub fn check_connecting_bijective(g: &FiniteGroup) -> Result<()> {
    let chars = characters(g);
    let basis = BarBasis::new(g);
    let d1 = coboundary_matrix(g, 1)?;
    // Dense copy of δ^1 for integral solving (normalized degree-2 rows).
    let mut dense = vec![vec![BigInt::zero(); d1.cols]; d1.rows];
    for (r, c, v) in &d1.entries {
        dense[*r][*c] = v.clone();
    }
    let as_vector = |table: &Vec<Vec<i64>>| -> Vec<BigInt> {
        (0..basis.dim(2))
            .map(|row| {
                let t = basis.tuple(2, row);
                BigInt::from(table[t[0]][t[1]])
            })
            .collect()
    };
    let tables: Vec<Vec<Vec<i64>>> = chars.iter().map(|p| carry_cocycle(g, p)).collect();
    for t in &tables {
        if !is_two_cocycle(g, &|a, b| t[a][b]) {
            return Err(Error::internal("carry table is not a 2-cocycle"));
        }
    }
    for i in 0..tables.len() {
        for j in 0..i {
            let vi = as_vector(&tables[i]);
            let vj = as_vector(&tables[j]);
            let diff: Vec<BigInt> = vi.iter().zip(&vj).map(|(a, b)| a - b).collect();
            if solve_integer(&dense, &diff).is_some() {
                return Err(Error::internal(
                    "distinct characters produced cohomologous carry cocycles",
                ));
            }
        }
    }
    let h2 = cohomology_z(g, 2)?;
    let order = h2.order().ok_or_else(|| Error::internal("H^2 must be finite"))?;
    if order != chars.len() as u64 {
        return Err(Error::internal(format!(
            "character count {} does not exhaust |H^2| = {order}",
            chars.len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(rank: usize, torsion: &[u64]) -> FinAb {
        FinAb { rank, torsion: torsion.to_vec() }
    }

    #[test]
    fn cyclic_integral_cohomology() {
        for m in [2usize, 3, 4, 6] {
            let g = FiniteGroup::cyclic(m);
            assert_eq!(cohomology_z(&g, 0).unwrap(), fin(1, &[]));
            assert_eq!(cohomology_z(&g, 1).unwrap(), fin(0, &[]));
            assert_eq!(cohomology_z(&g, 2).unwrap(), fin(0, &[m as u64]));
            assert_eq!(cohomology_z(&g, 3).unwrap(), fin(0, &[]));
            if m <= 4 {
                assert_eq!(cohomology_z(&g, 4).unwrap(), fin(0, &[m as u64]));
            }
        }
    }

    #[test]
    fn symmetric_and_klein_cohomology() {
        let s3 = FiniteGroup::symmetric_3();
        assert_eq!(cohomology_z(&s3, 1).unwrap(), fin(0, &[]));
        assert_eq!(cohomology_z(&s3, 2).unwrap(), fin(0, &[2]));
        assert_eq!(cohomology_z(&s3, 3).unwrap(), fin(0, &[]));
        assert_eq!(cohomology_z(&s3, 4).unwrap(), fin(0, &[6]));

        let v4 = FiniteGroup::klein_four();
        assert_eq!(cohomology_z(&v4, 2).unwrap(), fin(0, &[2, 2]));
        assert_eq!(cohomology_z(&v4, 3).unwrap(), fin(0, &[2]));
    }

    #[test]
    fn quaternion_cohomology_is_periodic() {
        let q8 = FiniteGroup::quaternion_8();
        assert_eq!(cohomology_z(&q8, 1).unwrap(), fin(0, &[]));
        assert_eq!(cohomology_z(&q8, 2).unwrap(), fin(0, &[2, 2]));
        assert_eq!(cohomology_z(&q8, 3).unwrap(), fin(0, &[]));
    }

    #[test]
    fn rational_cohomology_vanishes_positively() {
        for g in [FiniteGroup::cyclic(6), FiniteGroup::symmetric_3()] {
            assert_eq!(betti_q(&g, 0).unwrap(), 1);
            for n in 1..=3 {
                assert_eq!(betti_q(&g, n).unwrap(), 0, "degree {n}");
            }
        }
    }

    #[test]
    fn qmodz_cohomology() {
        let z4 = FiniteGroup::cyclic(4);
        assert_eq!(cohomology_qmodz(&z4, 0).unwrap(), QmodZCohomology::Divisible);
        assert_eq!(cohomology_qmodz(&z4, 1).unwrap(), QmodZCohomology::Finite(fin(0, &[4])));
        // H^2(Z/2; Q/Z) = H^3(Z/2; Z) = 0 — the naive "(1/m)Z" reading fails here.
        let z2 = FiniteGroup::cyclic(2);
        assert_eq!(cohomology_qmodz(&z2, 2).unwrap(), QmodZCohomology::Finite(fin(0, &[])));
    }

    #[test]
    fn characters_count_and_values() {
        let s3 = FiniteGroup::symmetric_3();
        let chars = characters(&s3);
        assert_eq!(chars.len(), 2); // ab(S3) = Z/2
        let z6 = FiniteGroup::cyclic(6);
        assert_eq!(characters(&z6).len(), 6);
        let q8 = FiniteGroup::quaternion_8();
        assert_eq!(characters(&q8).len(), 4);
        // Each is a homomorphism.
        for phi in &chars {
            for a in 0..s3.order() {
                for b in 0..s3.order() {
                    assert_eq!(phi[s3.mul(a, b)], phi[a] + phi[b]);
                }
            }
        }
    }

    #[test]
    fn carry_cocycle_and_chi_bar_invert() {
        for g in [FiniteGroup::cyclic(5), FiniteGroup::cyclic(6), FiniteGroup::klein_four()] {
            for phi in characters(&g) {
                let table = carry_cocycle(&g, &phi);
                assert!(is_two_cocycle(&g, &|a, b| table[a][b]));
                for x in 0..g.order() {
                    assert_eq!(chi_bar(&g, &|a, b| table[a][b], x), phi[x]);
                }
            }
        }
    }

    #[test]
    fn connecting_map_bijective_for_cyclic() {
        for m in [2usize, 3, 4, 6] {
            check_connecting_bijective(&FiniteGroup::cyclic(m)).unwrap();
        }
    }
}
