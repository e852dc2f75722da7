//! The polynomial z-extension of a cochain complex, twisted by a degree-3
//! cocycle.
//!
//! For a finite complex K and a rational 3-cocycle λ with λ∪λ = 0, the
//! total complex has degree-m slice ⊕_j z^j C^{m−2j}(K) (z of degree 2)
//! and differential d_λ(z^j x) = z^j δx + j z^{j−1} λ∪x. The module
//! computes its cohomology dimensions exactly, the 2-periodic variant
//! (δ + λ∪ on even/odd cochains), the duality pairing against u-power
//! elements, gauge equivalences for exact twists, and a two-page
//! spectral-sequence cross-route. Coefficients may optionally carry a
//! flat ℚ/ℤ local system realized over a cyclotomic field.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::cyclo::{Cyclo, CycloCtx};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{rank_sparse, SparseMat};
use crate::qmodz::QmodZ;
use crate::simp::{
    apply_coboundary, cohomology_bases, cup, evaluate_cycle, SimplicialComplex,
};

/// How many z-powers beyond the complex dimension are reported.
pub const Z_CAP: usize = 3;

/// A flat ℚ/ℤ-valued edge cochain: transports live in the cyclotomic
/// field of order `order`.
pub struct LocalSystem {
    pub theta: Vec<QmodZ>,
    pub order: u32,
}

impl LocalSystem {
    pub fn new(kx: &SimplicialComplex, theta: Vec<QmodZ>) -> Result<LocalSystem> {
        if theta.len() != kx.size(1) {
            return Err(Error::precondition(
                "system-shape",
                "one transport value per edge is required",
            ));
        }
        // Flatness: δθ = 0 exactly on every triangle.
        for (t, tri) in kx.simplices.get(2).map(|v| v.as_slice()).unwrap_or(&[]).iter().enumerate() {
            let e01 = kx.index_of(1, &[tri[0], tri[1]]).unwrap();
            let e02 = kx.index_of(1, &[tri[0], tri[2]]).unwrap();
            let e12 = kx.index_of(1, &[tri[1], tri[2]]).unwrap();
            let hol = theta[e12] - theta[e02] + theta[e01];
            if !hol.is_zero() {
                return Err(Error::precondition(
                    "system-flat",
                    format!("holonomy {hol} around triangle {t}"),
                ));
            }
        }
        let mut order: i64 = 1;
        for v in &theta {
            order = num_integer::lcm(order, v.denom());
        }
        Ok(LocalSystem { theta, order: order as u32 })
    }
}

pub struct TwistedComplex {
    pub complex: SimplicialComplex,
    /// Rational 3-cocycle; empty when the complex has no 3-simplices.
    pub lambda: Vec<BigRational>,
    pub system: Option<LocalSystem>,
    /// Largest total degree reported: dim K + 2·Z_CAP.
    pub m_max: usize,
}

impl TwistedComplex {
    pub fn new(
        complex: SimplicialComplex,
        lambda: Vec<BigRational>,
        system: Option<LocalSystem>,
    ) -> Result<TwistedComplex> {
        complex.validate()?;
        if lambda.len() != complex.size(3) {
            return Err(Error::precondition(
                "twist-shape",
                "the twist must assign one rational to every 3-simplex",
            ));
        }
        let dl = apply_coboundary(&complex, 3, &lambda);
        if let Some(pos) = dl.iter().position(|v| !v.is_zero()) {
            return Err(Error::precondition(
                "twist-cocycle",
                format!("δλ is {} on 4-simplex {pos}", dl[pos]),
            ));
        }
        let sq = cup(&complex, 3, &lambda, 3, &lambda);
        if let Some(pos) = sq.iter().position(|v| !v.is_zero()) {
            return Err(Error::precondition(
                "twist-square",
                format!("λ∪λ is {} on 6-simplex {pos}", sq[pos]),
            ));
        }
        let m_max = complex.dim() + 2 * Z_CAP;
        Ok(TwistedComplex { complex, lambda, system, m_max })
    }

    /// The (j, p) summands z^j C^p of total degree m, ascending in j.
    pub fn blocks(&self, m: usize) -> Vec<(usize, usize)> {
        let d = self.complex.dim();
        let mut out = Vec::new();
        for j in 0..=m / 2 {
            let p = m - 2 * j;
            if p <= d {
                out.push((j, p));
            }
        }
        out
    }

    pub fn total_dim(&self, m: usize) -> usize {
        self.blocks(m).iter().map(|&(_, p)| self.complex.size(p)).sum()
    }

    /// The degree-m differential as a block matrix over F.
    fn differential<F: Field>(
        &self,
        m: usize,
        embed: &impl Fn(&BigRational) -> F,
        transport: &impl Fn(usize, usize) -> F,
    ) -> SparseMat<F> {
        let kx = &self.complex;
        let cols_blocks = self.blocks(m);
        let rows_blocks = self.blocks(m + 1);
        let col_off = offsets(kx, &cols_blocks);
        let row_off = offsets(kx, &rows_blocks);
        let row_of = |j: usize, p: usize| -> Option<usize> {
            rows_blocks.iter().position(|&b| b == (j, p)).map(|i| row_off[i])
        };
        let mut mat =
            SparseMat::new(self.total_dim(m + 1), self.total_dim(m));
        for (bi, &(j, p)) in cols_blocks.iter().enumerate() {
            let co = col_off[bi];
            // Coboundary part z^j δx.
            if let Some(ro) = row_of(j, p + 1) {
                for (r, tau) in kx.simplices[p + 1].iter().enumerate() {
                    for skip in 0..tau.len() {
                        let face: Vec<usize> = tau
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| *i != skip)
                            .map(|(_, v)| *v)
                            .collect();
                        let c = kx.index_of(p, &face).expect("face-closed complex");
                        let sign = if skip % 2 == 0 { F::one() } else { -F::one() };
                        let coeff = if skip == 0 {
                            // The omitted-vertex-0 face is based at tau[1].
                            sign * transport(tau[0], tau[1])
                        } else {
                            sign
                        };
                        mat.push(ro + r, co + c, coeff);
                    }
                }
            }
            // Twist part j z^{j-1} λ∪x.
            if j >= 1 && p + 3 <= kx.dim() {
                if let Some(ro) = row_of(j - 1, p + 3) {
                    let jf = F::from_int(j as i64);
                    for (r, tau) in kx.simplices[p + 3].iter().enumerate() {
                        let front = kx.index_of(3, &tau[0..=3]).unwrap();
                        if self.lambda[front].is_zero() {
                            continue;
                        }
                        let back = kx.index_of(p, &tau[3..]).unwrap();
                        let coeff = jf.clone()
                            * embed(&self.lambda[front])
                            * transport(tau[0], tau[3]);
                        mat.push(ro + r, co + back, coeff);
                    }
                }
            }
        }
        mat
    }

    /// Exact cohomology dimensions for total degrees 0..=m_max, after
    /// verifying d² = 0 on every basis vector.
    pub fn twisted_cohomology(&self) -> Result<Vec<usize>> {
        match &self.system {
            None => self.cohomology_with(&|r: &BigRational| r.clone(), &|_, _| {
                BigRational::from_integer(BigInt::from(1))
            }),
            Some(sys) => {
                let ctx = CycloCtx::new(sys.order.max(1));
                let kx = &self.complex;
                let theta = sys.theta.clone();
                self.cohomology_with(
                    &|r: &BigRational| Cyclo::rational(r.clone()),
                    &move |a, b| {
                        let e = kx.index_of(1, &[a, b]).expect("transport edge");
                        Cyclo::from_qmodz(&ctx, theta[e]).expect("flat system order")
                    },
                )
            }
        }
    }

    fn cohomology_with<F: Field + Send + Sync>(
        &self,
        embed: &(impl Fn(&BigRational) -> F + Sync),
        transport: &(impl Fn(usize, usize) -> F + Sync),
    ) -> Result<Vec<usize>> {
        let mats: Vec<SparseMat<F>> =
            (0..=self.m_max + 1).map(|m| self.differential(m, embed, transport)).collect();
        for m in 0..=self.m_max {
            verify_square_zero(&mats[m], &mats[m + 1], &format!("degree {m}"))?;
        }
        let ranks: Vec<usize> = mats.par_iter().map(rank_sparse::<F>).collect();
        Ok((0..=self.m_max)
            .map(|m| {
                self.total_dim(m) - ranks[m] - if m == 0 { 0 } else { ranks[m - 1] }
            })
            .collect())
    }

    /// The 2-periodic model: δ + λ∪ between even and odd cochains.
    /// Returns (dim even, dim odd).
    pub fn periodic_cohomology(&self) -> Result<(usize, usize)> {
        match &self.system {
            None => self.periodic_with(&|r: &BigRational| r.clone(), &|_, _| {
                BigRational::from_integer(BigInt::from(1))
            }),
            Some(sys) => {
                let ctx = CycloCtx::new(sys.order.max(1));
                let kx = &self.complex;
                let theta = sys.theta.clone();
                self.periodic_with(
                    &|r: &BigRational| Cyclo::rational(r.clone()),
                    &move |a, b| {
                        let e = kx.index_of(1, &[a, b]).expect("transport edge");
                        Cyclo::from_qmodz(&ctx, theta[e]).expect("flat system order")
                    },
                )
            }
        }
    }

    fn periodic_with<F: Field>(
        &self,
        embed: &impl Fn(&BigRational) -> F,
        transport: &impl Fn(usize, usize) -> F,
    ) -> Result<(usize, usize)> {
        let ev = self.periodic_matrix(0, embed, transport);
        let od = self.periodic_matrix(1, embed, transport);
        verify_square_zero(&ev, &od, "even to odd")?;
        verify_square_zero(&od, &ev, "odd to even")?;
        let (rev, rod) = (rank_sparse::<F>(&ev), rank_sparse::<F>(&od));
        let dim_ev: usize =
            (0..=self.complex.dim()).step_by(2).map(|p| self.complex.size(p)).sum();
        let dim_od: usize =
            (1..=self.complex.dim().max(1)).step_by(2).map(|p| self.complex.size(p)).sum();
        Ok((dim_ev - rev - rod, dim_od - rod - rev))
    }

    /// δ + λ∪ from the given parity into the other.
    fn periodic_matrix<F: Field>(
        &self,
        parity: usize,
        embed: &impl Fn(&BigRational) -> F,
        transport: &impl Fn(usize, usize) -> F,
    ) -> SparseMat<F> {
        let kx = &self.complex;
        let d = kx.dim();
        let src: Vec<usize> = (0..=d).filter(|p| p % 2 == parity).collect();
        let dst: Vec<usize> = (0..=d).filter(|p| p % 2 != parity).collect();
        let src_off = degree_offsets(kx, &src);
        let dst_off = degree_offsets(kx, &dst);
        let pos_dst = |p: usize| dst.iter().position(|&q| q == p).map(|i| dst_off[i]);
        let total_src: usize = src.iter().map(|&p| kx.size(p)).sum();
        let total_dst: usize = dst.iter().map(|&p| kx.size(p)).sum();
        let mut mat = SparseMat::new(total_dst, total_src);
        for (bi, &p) in src.iter().enumerate() {
            let co = src_off[bi];
            if let Some(ro) = pos_dst(p + 1) {
                for (r, tau) in kx.simplices.get(p + 1).map(|v| v.as_slice()).unwrap_or(&[]).iter().enumerate() {
                    for skip in 0..tau.len() {
                        let face: Vec<usize> = tau
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| *i != skip)
                            .map(|(_, v)| *v)
                            .collect();
                        let c = kx.index_of(p, &face).expect("face-closed complex");
                        let sign = if skip % 2 == 0 { F::one() } else { -F::one() };
                        let coeff = if skip == 0 { sign * transport(tau[0], tau[1]) } else { sign };
                        mat.push(ro + r, co + c, coeff);
                    }
                }
            }
            if p + 3 <= d {
                if let Some(ro) = pos_dst(p + 3) {
                    for (r, tau) in kx.simplices[p + 3].iter().enumerate() {
                        let front = kx.index_of(3, &tau[0..=3]).unwrap();
                        if self.lambda[front].is_zero() {
                            continue;
                        }
                        let back = kx.index_of(p, &tau[3..]).unwrap();
                        let coeff = embed(&self.lambda[front]) * transport(tau[0], tau[3]);
                        mat.push(ro + r, co + back, coeff);
                    }
                }
            }
        }
        mat
    }

    /// Direct-sum oracle for λ = 0: degree m collects H^{m−2j}(K; system).
    pub fn untwisted_direct_sum_dims(&self) -> Result<Vec<usize>> {
        let betti: Vec<usize> = match &self.system {
            None => self.complex.betti_all::<BigRational>(),
            Some(sys) => {
                let ctx = CycloCtx::new(sys.order.max(1));
                let kx = &self.complex;
                let theta = &sys.theta;
                let transport = |a: usize, b: usize| {
                    let e = kx.index_of(1, &[a, b]).expect("transport edge");
                    Cyclo::from_qmodz(&ctx, theta[e]).expect("flat system order")
                };
                let ranks: Vec<usize> = (0..=kx.dim())
                    .map(|p| rank_sparse::<Cyclo>(&single_degree_coboundary(kx, p, &transport)))
                    .collect();
                (0..=kx.dim())
                    .map(|p| kx.size(p) - ranks[p] - if p == 0 { 0 } else { ranks[p - 1] })
                    .collect()
            }
        };
        Ok((0..=self.m_max)
            .map(|m| {
                self.blocks(m)
                    .iter()
                    .map(|&(_, p)| betti.get(p).copied().unwrap_or(0))
                    .sum()
            })
            .collect())
    }
}

fn offsets(kx: &SimplicialComplex, blocks: &[(usize, usize)]) -> Vec<usize> {
    let mut off = Vec::with_capacity(blocks.len());
    let mut acc = 0usize;
    for &(_, p) in blocks {
        off.push(acc);
        acc += kx.size(p);
    }
    off
}

fn degree_offsets(kx: &SimplicialComplex, degrees: &[usize]) -> Vec<usize> {
    let mut off = Vec::with_capacity(degrees.len());
    let mut acc = 0usize;
    for &p in degrees {
        off.push(acc);
        acc += kx.size(p);
    }
    off
}

/// Coboundary in a single degree with local-system transport on the
/// omitted-vertex-0 face.
fn single_degree_coboundary<F: Field>(
    kx: &SimplicialComplex,
    p: usize,
    transport: &impl Fn(usize, usize) -> F,
) -> SparseMat<F> {
    let rows = kx.size(p + 1);
    let cols = kx.size(p);
    let mut mat = SparseMat::new(rows, cols);
    for (r, tau) in kx.simplices.get(p + 1).map(|v| v.as_slice()).unwrap_or(&[]).iter().enumerate() {
        for skip in 0..tau.len() {
            let face: Vec<usize> =
                tau.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| *v).collect();
            let c = kx.index_of(p, &face).expect("face-closed complex");
            let sign = if skip % 2 == 0 { F::one() } else { -F::one() };
            let coeff = if skip == 0 { sign * transport(tau[0], tau[1]) } else { sign };
            mat.push(r, c, coeff);
        }
    }
    mat
}

/// Applies a sparse matrix to a dense vector.
pub fn apply_sparse<F: Field>(m: &SparseMat<F>, v: &[F]) -> Vec<F> {
    assert_eq!(m.cols, v.len());
    let mut out = vec![F::zero(); m.rows];
    for (r, c, val) in &m.entries {
        if v[*c].is_zero() {
            continue;
        }
        let s = val.clone() * v[*c].clone();
        out[*r] = out[*r].clone() + s;
    }
    out
}

/// Verifies on every basis vector that `second ∘ first` is zero.
fn verify_square_zero<F: Field>(
    first: &SparseMat<F>,
    second: &SparseMat<F>,
    what: &str,
) -> Result<()> {
    assert_eq!(second.cols, first.rows);
    // Group the first matrix by column and push each image through.
    let mut by_col: Vec<Vec<(usize, F)>> = vec![Vec::new(); first.cols];
    for (r, c, v) in &first.entries {
        by_col[*c].push((*r, v.clone()));
    }
    for col in by_col {
        let mut img = vec![F::zero(); first.rows];
        for (r, v) in col {
            img[r] = img[r].clone() + v;
        }
        let twice = apply_sparse(second, &img);
        if twice.iter().any(|v| !v.is_zero()) {
            return Err(Error::internal(format!(
                "differential fails to square to zero ({what})"
            )));
        }
    }
    Ok(())
}

/// Two-page spectral-sequence route: E₁ = H*(K)[z] with differential
/// z^j [x] ↦ j z^{j−1} [λ]∪[x]; for dim K ≤ 4 the page after that is
/// final, so its dimensions must equal the twisted cohomology.
pub fn spectral_sequence_dims(tc: &TwistedComplex) -> Result<Vec<usize>> {
    if tc.system.is_some() {
        return Err(Error::precondition(
            "spectral-coefficients",
            "the spectral route is implemented for trivial coefficients",
        ));
    }
    let d = tc.complex.dim();
    if d > 4 {
        return Err(Error::precondition(
            "spectral-range",
            "later pages may act when the complex has dimension above 4",
        ));
    }
    let bases = cohomology_bases::<BigRational>(&tc.complex);
    // Rank of cup-with-[λ]: H^p -> H^{p+3}, for each p.
    let mut cup_rank = vec![0usize; d + 1];
    for p in 0..=d {
        if p + 3 > d || bases[p].dim == 0 || bases[p + 3].dim == 0 {
            continue;
        }
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for rep in &bases[p].reps {
            let image = cup(&tc.complex, 3, &tc.lambda, p, rep);
            rows.push(bases[p + 3].coords(&image)?);
        }
        cup_rank[p] = crate::linalg::rank_dense::<BigRational>(&rows);
    }
    let dims = (0..=tc.m_max)
        .map(|m| {
            tc.blocks(m)
                .iter()
                .map(|&(j, p)| {
                    let h = bases[p].dim;
                    let incoming = if p >= 3 { cup_rank[p - 3] } else { 0 };
                    let outgoing = if j >= 1 { cup_rank[p] } else { 0 };
                    h - outgoing - incoming
                })
                .sum()
        })
        .collect();
    Ok(dims)
}

/// The gauge intertwiner 1 − μ∪T for an exact twist λ = δμ: verifies the
/// cochain conditions, that it intertwines d_0 with d_{δμ} on every basis
/// vector of every degree, and that the twisted dimensions equal the
/// untwisted ones.
pub fn verify_gauge_equivalence(
    complex: &SimplicialComplex,
    mu: &[BigRational],
) -> Result<()> {
    if mu.len() != complex.size(2) {
        return Err(Error::precondition(
            "gauge-shape",
            "the gauge cochain must assign one rational to every 2-simplex",
        ));
    }
    let musq = cup(complex, 2, mu, 2, mu);
    if musq.iter().any(|v| !v.is_zero()) {
        return Err(Error::precondition("gauge-square", "μ∪μ must vanish"));
    }
    let lambda = apply_coboundary(complex, 2, mu);
    let lm = cup(complex, 3, &lambda, 2, mu);
    let ml = cup(complex, 2, mu, 3, &lambda);
    if lm != ml {
        return Err(Error::precondition("gauge-commutation", "λ∪μ must equal μ∪λ"));
    }
    let twisted = TwistedComplex::new(complex.clone(), lambda, None)?;
    let untwisted =
        TwistedComplex::new(complex.clone(), vec![BigRational::zero(); complex.size(3)], None)?;
    let embed = |r: &BigRational| r.clone();
    let one = |_: usize, _: usize| BigRational::from_integer(BigInt::from(1));
    for m in 0..=twisted.m_max {
        let d0 = untwisted.differential::<BigRational>(m, &embed, &one);
        let dl = twisted.differential::<BigRational>(m, &embed, &one);
        let phi_m = gauge_matrix(&twisted, mu, m);
        let phi_m1 = gauge_matrix(&twisted, mu, m + 1);
        // Φ d_0 = d_λ Φ columnwise.
        for col in 0..d0.cols {
            let mut e = vec![BigRational::zero(); d0.cols];
            e[col] = BigRational::from_integer(BigInt::from(1));
            let lhs = apply_sparse(&phi_m1, &apply_sparse(&d0, &e));
            let rhs = apply_sparse(&dl, &apply_sparse(&phi_m, &e));
            if lhs != rhs {
                return Err(Error::internal(format!(
                    "gauge transform fails to intertwine in degree {m}"
                )));
            }
        }
    }
    let a = twisted.twisted_cohomology()?;
    let b = untwisted.twisted_cohomology()?;
    if a != b {
        return Err(Error::internal(
            "gauge-equivalent twists produced different dimensions",
        ));
    }
    Ok(())
}

/// Matrix of 1 − μ∪T on total degree m: z^j x ↦ z^j x − j z^{j−1} μ∪x.
fn gauge_matrix(
    tc: &TwistedComplex,
    mu: &[BigRational],
    m: usize,
) -> SparseMat<BigRational> {
    let kx = &tc.complex;
    let blocks = tc.blocks(m);
    let off = offsets(kx, &blocks);
    let pos = |j: usize, p: usize| blocks.iter().position(|&b| b == (j, p)).map(|i| off[i]);
    let total = tc.total_dim(m);
    let mut mat = SparseMat::new(total, total);
    for (bi, &(j, p)) in blocks.iter().enumerate() {
        let co = off[bi];
        for i in 0..kx.size(p) {
            mat.push(co + i, co + i, BigRational::from_integer(BigInt::from(1)));
        }
        if j >= 1 && p + 2 <= kx.dim() {
            if let Some(ro) = pos(j - 1, p + 2) {
                let jf = BigRational::from_integer(BigInt::from(j as i64));
                for (r, tau) in kx.simplices[p + 2].iter().enumerate() {
                    let front = kx.index_of(2, &tau[0..=2]).unwrap();
                    if mu[front].is_zero() {
                        continue;
                    }
                    let back = kx.index_of(p, &tau[2..]).unwrap();
                    let coeff = -(jf.clone() * &mu[front]);
                    mat.push(ro + r, co + back, coeff);
                }
            }
        }
    }
    mat
}

// ---------------------------------------------------------------------------
// Duality pairing
// ---------------------------------------------------------------------------

/// A u-power element u^n ω with ω a p-cochain.
#[derive(Clone)]
pub struct UElement {
    pub n: usize,
    pub p: usize,
    pub omega: Vec<BigRational>,
}

/// A z-power element z^m α with α a q-cochain.
#[derive(Clone)]
pub struct ZElement {
    pub m: usize,
    pub q: usize,
    pub alpha: Vec<BigRational>,
}

/// ⟨u^n ω, z^m α⟩ = δ_{m,n}·m!·⟨ω∪α, [K]⟩; degree mismatches pair to 0.
pub fn duality_pairing(
    kx: &SimplicialComplex,
    cycle: &[BigRational],
    u: &UElement,
    z: &ZElement,
) -> BigRational {
    if u.n != z.m || u.p + z.q != kx.dim() {
        return BigRational::zero();
    }
    let mut fact = BigInt::from(1);
    for i in 2..=z.m {
        fact *= BigInt::from(i as i64);
    }
    let prod = cup(kx, u.p, &u.omega, z.q, &z.alpha);
    BigRational::from_integer(fact) * evaluate_cycle(cycle, &prod)
}

/// d_λ on a z-element: z^m δα + m z^{m−1} λ∪α.
pub fn z_differential(
    kx: &SimplicialComplex,
    lambda: &[BigRational],
    z: &ZElement,
) -> Vec<ZElement> {
    let mut out = Vec::new();
    if z.q + 1 <= kx.dim() {
        out.push(ZElement { m: z.m, q: z.q + 1, alpha: apply_coboundary(kx, z.q, &z.alpha) });
    }
    if z.m >= 1 && z.q + 3 <= kx.dim() {
        let mf = BigRational::from_integer(BigInt::from(z.m as i64));
        let la = cup(kx, 3, lambda, z.q, &z.alpha);
        out.push(ZElement {
            m: z.m - 1,
            q: z.q + 3,
            alpha: la.into_iter().map(|v| &mf * v).collect(),
        });
    }
    out
}

/// The dual differential making the pairing adjunction exact:
/// d′(u^n ω_p) = u^n δω + (−1)^{p+1} u^{n+1} (ω ∪ λ).
pub fn u_differential(
    kx: &SimplicialComplex,
    lambda: &[BigRational],
    u: &UElement,
) -> Vec<UElement> {
    let mut out = Vec::new();
    if u.p + 1 <= kx.dim() {
        out.push(UElement { n: u.n, p: u.p + 1, omega: apply_coboundary(kx, u.p, &u.omega) });
    }
    if u.p + 3 <= kx.dim() {
        let sign = if u.p % 2 == 0 { -1 } else { 1 };
        let s = BigRational::from_integer(BigInt::from(sign));
        let wl = cup(kx, u.p, &u.omega, 3, lambda);
        out.push(UElement {
            n: u.n + 1,
            p: u.p + 3,
            omega: wl.into_iter().map(|v| &s * v).collect(),
        });
    }
    out
}

/// Checks ⟨d′ω, α⟩ = (−1)^{|ω|+1} ⟨ω, d_λ α⟩ for one pair; returns both
/// sides.
pub fn adjunction_sides(
    kx: &SimplicialComplex,
    cycle: &[BigRational],
    lambda: &[BigRational],
    u: &UElement,
    z: &ZElement,
) -> (BigRational, BigRational) {
    let lhs = u_differential(kx, lambda, u)
        .iter()
        .fold(BigRational::zero(), |acc, t| acc + duality_pairing(kx, cycle, t, z));
    let sign = if u.p % 2 == 0 { BigRational::from_integer(BigInt::from(-1)) } else { BigRational::from_integer(BigInt::from(1)) };
    let rhs = z_differential(kx, lambda, z)
        .iter()
        .fold(BigRational::zero(), |acc, t| acc + duality_pairing(kx, cycle, u, t));
    (lhs, sign * rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn rand_vec(n: usize, state: &mut u64) -> Vec<BigRational> {
        (0..n)
            .map(|_| {
                let mut x = *state;
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                *state = x;
                q((x % 13) as i64 - 6)
            })
            .collect()
    }

    fn s3() -> SimplicialComplex {
        SimplicialComplex::sphere_boundary(3)
    }

    /// k times the cocycle dual to the fundamental cycle.
    fn top_generator(kx: &SimplicialComplex, k: i64) -> Vec<BigRational> {
        let cycle = kx.fundamental_cycle::<BigRational>().unwrap();
        let mut lam = vec![BigRational::zero(); kx.size(3)];
        lam[0] = q(k) * cycle[0].clone();
        lam
    }

    #[test]
    fn point_dims_are_z_powers() {
        let tc = TwistedComplex::new(SimplicialComplex::point(), vec![], None).unwrap();
        assert_eq!(tc.m_max, 6);
        assert_eq!(tc.twisted_cohomology().unwrap(), vec![1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(tc.untwisted_direct_sum_dims().unwrap(), vec![1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(tc.periodic_cohomology().unwrap(), (1, 0));
    }

    #[test]
    fn untwisted_sphere_matches_direct_sum_oracle() {
        let tc = TwistedComplex::new(s3(), vec![BigRational::zero(); 5], None).unwrap();
        assert_eq!(tc.m_max, 9);
        let dims = tc.twisted_cohomology().unwrap();
        let oracle = tc.untwisted_direct_sum_dims().unwrap();
        assert_eq!(dims, oracle);
        assert_eq!(dims, vec![1, 0, 1, 1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(tc.periodic_cohomology().unwrap(), (1, 1));
        assert_eq!(spectral_sequence_dims(&tc).unwrap(), dims);
    }

    #[test]
    fn twisted_sphere_collapses() {
        let untwisted =
            TwistedComplex::new(s3(), vec![BigRational::zero(); 5], None).unwrap();
        let base = untwisted.twisted_cohomology().unwrap();
        for k in 1..=3 {
            let tc = TwistedComplex::new(s3(), top_generator(&s3(), k), None).unwrap();
            let dims = tc.twisted_cohomology().unwrap();
            assert_eq!(dims, vec![1, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
            assert_eq!(tc.periodic_cohomology().unwrap(), (0, 0));
            assert_eq!(spectral_sequence_dims(&tc).unwrap(), dims);
            // Strictly below the untwisted dimensions in the twisted range.
            let total_twisted: usize = dims.iter().sum();
            let total_untwisted: usize = base.iter().sum();
            assert!(total_twisted < total_untwisted);
            // The stabilized tail agrees with the periodic model.
            let (ev, od) = tc.periodic_cohomology().unwrap();
            for m in tc.m_max - 3..=tc.m_max {
                assert_eq!(dims[m], if m % 2 == 0 { ev } else { od });
            }
        }
    }

    #[test]
    fn torus_dims_are_shifted_betti_sums() {
        let t = SimplicialComplex::torus_seven();
        let tc = TwistedComplex::new(t, vec![], None).unwrap();
        let dims = tc.twisted_cohomology().unwrap();
        assert_eq!(dims, tc.untwisted_direct_sum_dims().unwrap());
        assert_eq!(dims, vec![1, 2, 2, 2, 2, 2, 2, 2, 2]);
        assert_eq!(tc.periodic_cohomology().unwrap(), (2, 2));
        assert_eq!(spectral_sequence_dims(&tc).unwrap(), dims);
    }

    #[test]
    fn twist_validation_rejects_bad_input() {
        // Wrong shape.
        assert!(TwistedComplex::new(s3(), vec![q(1)], None).is_err());
        // A non-cocycle on the solid simplex: single 3-face indicator has
        // nonzero coboundary.
        let solid = SimplicialComplex::from_simplices(
            (0..5).map(|i| i.to_string()).collect(),
            &[vec![0, 1, 2, 3, 4]],
        )
        .unwrap();
        let mut lam = vec![BigRational::zero(); solid.size(3)];
        lam[0] = q(1);
        let err = TwistedComplex::new(solid, lam, None);
        assert!(err.is_err());
    }

    #[test]
    fn exact_twists_are_gauge_trivial_on_the_sphere() {
        let kx = s3();
        let mut state = 0xabcdef12345u64;
        for _ in 0..3 {
            let mu = rand_vec(kx.size(2), &mut state);
            verify_gauge_equivalence(&kx, &mu).unwrap();
        }
    }

    #[test]
    fn local_system_on_a_circle_kills_constants() {
        // A hexagon with holonomy 1/2 around the loop: twisted H^0 = 0.
        let n = 6;
        let verts: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let gens: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                let mut e = vec![i, (i + 1) % n];
                e.sort_unstable();
                e
            })
            .collect();
        let circle = SimplicialComplex::from_simplices(verts, &gens).unwrap();
        let mut theta = vec![QmodZ::new(0, 1); circle.size(1)];
        // Put the entire holonomy on one edge.
        theta[0] = QmodZ::new(1, 2);
        let sys = LocalSystem::new(&circle, theta).unwrap();
        let tc = TwistedComplex::new(circle.clone(), vec![], Some(sys)).unwrap();
        let dims = tc.twisted_cohomology().unwrap();
        let oracle = tc.untwisted_direct_sum_dims().unwrap();
        assert_eq!(dims, oracle);
        assert_eq!(&dims[0..2], &[0, 0], "nontrivial holonomy kills H^0 and H^1");
        // The trivial system recovers the circle.
        let trivial = TwistedComplex::new(circle, vec![], None).unwrap();
        assert_eq!(&trivial.twisted_cohomology().unwrap()[0..2], &[1, 1]);
    }

    #[test]
    fn flatness_is_required() {
        let t = SimplicialComplex::torus_seven();
        let mut theta = vec![QmodZ::new(0, 1); t.size(1)];
        theta[0] = QmodZ::new(1, 3);
        assert!(LocalSystem::new(&t, theta).is_err());
    }

    #[test]
    fn duality_pairing_and_adjunction() {
        let kx = s3();
        let cycle = kx.fundamental_cycle::<BigRational>().unwrap();
        // Unit normalization: the dual top cocycle pairs to 1 with u^0·1.
        let one = UElement { n: 0, p: 0, omega: vec![q(1); kx.size(0)] };
        let gen3 = ZElement { m: 0, q: 3, alpha: top_generator(&kx, 1) };
        assert_eq!(duality_pairing(&kx, &cycle, &one, &gen3), q(1));
        // Degree mismatch pairs to zero.
        let shifted = ZElement { m: 1, ..gen3.clone() };
        assert!(duality_pairing(&kx, &cycle, &one, &shifted).is_zero());
        // The m! factor.
        let u2 = UElement { n: 2, p: 0, omega: vec![q(1); kx.size(0)] };
        let z2 = ZElement { m: 2, q: 3, alpha: top_generator(&kx, 1) };
        assert_eq!(duality_pairing(&kx, &cycle, &u2, &z2), q(2));
        // Adjunction on seeded random pairs, exercising both legs.
        let mut state = 0x5eed5eed5eedu64;
        for round in 0..12 {
            let lambda = rand_vec(kx.size(3), &mut state);
            let p = round % 3;
            let n = round % 2;
            let q_deg = if round % 2 == 0 {
                kx.dim() - p - 1
            } else {
                if p > 0 { continue; } 0
            };
            let m = if round % 2 == 0 { n } else { n + 1 };
            let u = UElement { n, p, omega: rand_vec(kx.size(p), &mut state) };
            let z = ZElement { m, q: q_deg, alpha: rand_vec(kx.size(q_deg), &mut state) };
            let (lhs, rhs) = adjunction_sides(&kx, &cycle, &lambda, &u, &z);
            assert_eq!(lhs, rhs, "adjunction must hold exactly");
        }
    }
}
