//! Exact cyclotomic arithmetic: the field Q[t]/Phi_N(t) with t a primitive
//! N-th root of unity.
//!
//! Used for character-twisted multiplicity computations, where values of
//! Q/Z-valued characters embed as roots of unity via p/q |-> t^(pN/q).
//! All coefficients are exact rationals; Phi_N is irreducible over Q, so the
//! quotient is a field and extended-Euclid inversion always succeeds on
//! nonzero elements.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::qmodz::QmodZ;

/// Shared context: the order N and the monic minimal polynomial Phi_N.
#[derive(Debug, PartialEq, Eq)]
pub struct CycloCtx {
    pub order: u32,
    /// Coefficients of Phi_N, lowest degree first, monic.
    pub modulus: Vec<BigRational>,
}

impl CycloCtx {
    pub fn new(order: u32) -> Arc<CycloCtx> {
        assert!(order >= 1);
        Arc::new(CycloCtx { order, modulus: cyclotomic_polynomial(order) })
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }
}

/// Computes Phi_n by dividing x^n - 1 by the cyclotomic polynomials of the
/// proper divisors of n.
fn cyclotomic_polynomial(n: u32) -> Vec<BigRational> {
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    let mut memo: Vec<Vec<BigRational>> = Vec::new();
    for m in 1..=n {
        if n % m != 0 {
            memo.push(Vec::new());
            continue;
        }
        // x^m - 1
        let mut poly = vec![q(0); (m + 1) as usize];
        poly[0] = q(-1);
        poly[m as usize] = q(1);
        for d in 1..m {
            if m % d == 0 {
                poly = poly_div_exact(&poly, &memo[(d - 1) as usize]);
            }
        }
        memo.push(poly);
    }
    memo.pop().unwrap()
}

fn poly_trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Exact polynomial division (panics on nonzero remainder).
fn poly_div_exact(num: &[BigRational], den: &[BigRational]) -> Vec<BigRational> {
    let (q, r) = poly_divmod(num, den);
    assert!(r.is_empty(), "polynomial division not exact");
    q
}

fn poly_divmod(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let den = poly_trim(den.to_vec());
    assert!(!den.is_empty(), "division by zero polynomial");
    let mut rem = poly_trim(num.to_vec());
    let dd = den.len() - 1;
    let lead_inv = den[dd].recip();
    let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(dd)];
    while rem.len() > dd {
        let k = rem.len() - 1 - dd;
        let f = &rem[rem.len() - 1] * &lead_inv;
        quot[k] = f.clone();
        for i in 0..=dd {
            let s = &f * &den[i];
            rem[k + i] -= s;
        }
        rem = poly_trim(rem);
        if rem.is_empty() {
            break;
        }
    }
    (poly_trim(quot), rem)
}

/// Element of Q[t]/Phi_N(t). A `ctx` of `None` denotes a rational constant,
/// compatible with any order (this lets `Field::zero`/`one` be context-free).
#[derive(Clone, Debug)]
pub struct Cyclo {
    ctx: Option<Arc<CycloCtx>>,
    /// Coefficients, lowest degree first, length <= deg Phi_N.
    coeffs: Vec<BigRational>,
}

impl Cyclo {
    pub fn rational(r: BigRational) -> Cyclo {
        if r.is_zero() {
            Cyclo { ctx: None, coeffs: vec![] }
        } else {
            Cyclo { ctx: None, coeffs: vec![r] }
        }
    }

    fn zero_elem() -> Cyclo {
        Cyclo { ctx: None, coeffs: vec![] }
    }

    /// t^k in the given context, reduced mod Phi_N.
    pub fn root_power(ctx: &Arc<CycloCtx>, k: u32) -> Cyclo {
        let k = (k % ctx.order) as usize;
        let mut p = vec![BigRational::zero(); k + 1];
        p[k] = BigRational::one();
        let (_, r) = poly_divmod(&p, &ctx.modulus);
        Cyclo { ctx: Some(ctx.clone()), coeffs: r }
    }

    /// Embeds p/q in Q/Z as the root of unity t^(p*N/q). Fails unless q | N.
    pub fn from_qmodz(ctx: &Arc<CycloCtx>, v: QmodZ) -> Result<Cyclo> {
        let n = ctx.order as i64;
        if n % v.denom() != 0 {
            return Err(Error::precondition(
                "root-of-unity-order",
                format!("value {v} has order {} which does not divide N = {n}", v.denom()),
            ));
        }
        Ok(Cyclo::root_power(ctx, (v.numer() * (n / v.denom())) as u32))
    }

    /// The rational value if this element is a constant, else None.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn unify_ctx<'a>(&'a self, o: &'a Cyclo) -> Option<&'a Arc<CycloCtx>> {
        match (&self.ctx, &o.ctx) {
            (Some(a), Some(b)) => {
                assert_eq!(a.order, b.order, "mixed cyclotomic orders");
                Some(a)
            }
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (None, None) => None,
        }
    }

    fn zip_with(&self, o: &Cyclo, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Cyclo {
        let n = self.coeffs.len().max(o.coeffs.len());
        let zero = BigRational::zero();
        let coeffs = (0..n)
            .map(|i| f(self.coeffs.get(i).unwrap_or(&zero), o.coeffs.get(i).unwrap_or(&zero)))
            .collect();
        Cyclo { ctx: self.unify_ctx(o).cloned(), coeffs: poly_trim(coeffs) }
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl std::ops::Add for Cyclo {
    type Output = Cyclo;
    fn add(self, o: Cyclo) -> Cyclo {
        self.zip_with(&o, |a, b| a + b)
    }
}

impl std::ops::Sub for Cyclo {
    type Output = Cyclo;
    fn sub(self, o: Cyclo) -> Cyclo {
        self.zip_with(&o, |a, b| a - b)
    }
}

impl std::ops::Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl std::ops::Mul for Cyclo {
    type Output = Cyclo;
    fn mul(self, o: Cyclo) -> Cyclo {
        if self.is_zero() || o.is_zero() {
            return Cyclo::zero_elem();
        }
        let mut prod =
            vec![BigRational::from_integer(0.into()); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        let ctx = self.unify_ctx(&o).cloned();
        let coeffs = match &ctx {
            Some(ctx) if prod.len() > ctx.degree() => poly_divmod(&prod, &ctx.modulus).1,
            _ => poly_trim(prod),
        };
        Cyclo { ctx, coeffs }
    }
}

impl Zero for Cyclo {
    fn zero() -> Self {
        Cyclo::zero_elem()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Cyclo {
    fn one() -> Self {
        Cyclo::rational(BigRational::from_integer(1.into()))
    }
}

impl crate::field::Field for Cyclo {
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        if let (None, Some(r)) = (&self.ctx, self.as_rational()) {
            return Cyclo::rational(r.recip());
        }
        if self.coeffs.len() == 1 {
            return Cyclo { ctx: self.ctx.clone(), coeffs: vec![self.coeffs[0].recip()] };
        }
        let ctx = self.ctx.as_ref().expect("non-constant element without context");
        // Extended Euclid in Q[t]: s*self + t*Phi = gcd (a nonzero constant).
        let (mut r0, mut r1) = (self.coeffs.clone(), ctx.modulus.clone());
        let (mut s0, mut s1) =
            (vec![BigRational::from_integer(1.into())], Vec::<BigRational>::new());
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let qs1 = poly_mul(&q, &s1);
            let s = poly_sub(&s0, &qs1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        assert_eq!(r0.len(), 1, "modulus not coprime to element");
        let scale = r0[0].recip();
        let coeffs: Vec<BigRational> = s0.iter().map(|c| c * &scale).collect();
        let coeffs = poly_divmod(&coeffs, &ctx.modulus).1;
        Cyclo { ctx: Some(ctx.clone()), coeffs }
    }
    fn from_int(k: i64) -> Self {
        Cyclo::rational(BigRational::from_integer(BigInt::from(k)))
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut p = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            p[i + j] += x * y;
        }
    }
    poly_trim(p)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    poly_trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![q(-1), q(1)]);
        assert_eq!(cyclotomic_polynomial(2), vec![q(1), q(1)]);
        assert_eq!(cyclotomic_polynomial(4), vec![q(1), q(0), q(1)]);
        assert_eq!(cyclotomic_polynomial(3), vec![q(1), q(1), q(1)]);
        assert_eq!(cyclotomic_polynomial(6), vec![q(1), q(-1), q(1)]);
        assert_eq!(cyclotomic_polynomial(12), vec![q(1), q(0), q(-1), q(0), q(1)]);
    }

    #[test]
    fn primitive_root_relations() {
        let c4 = CycloCtx::new(4);
        let i = Cyclo::root_power(&c4, 1);
        assert_eq!(i.clone() * i.clone(), Cyclo::from_int(-1));
        assert_eq!(i.clone() * i.clone() * i.clone() * i.clone(), Cyclo::one());

        let c3 = CycloCtx::new(3);
        let w = Cyclo::root_power(&c3, 1);
        let sum = Cyclo::one() + w.clone() + w.clone() * w.clone();
        assert!(sum.is_zero());
    }

    #[test]
    fn inversion() {
        let c12 = CycloCtx::new(12);
        let z = Cyclo::root_power(&c12, 1);
        let a = z + Cyclo::from_int(2);
        assert_eq!(a.clone() * a.inv(), Cyclo::one());
        assert_eq!(Cyclo::from_int(5).inv() * Cyclo::from_int(5), Cyclo::one());
    }

    #[test]
    fn qmodz_embedding() {
        let c6 = CycloCtx::new(6);
        let half = Cyclo::from_qmodz(&c6, QmodZ::new(1, 2)).unwrap();
        assert_eq!(half, Cyclo::from_int(-1)); // t^3 = -1 for primitive 6th root
        assert!(Cyclo::from_qmodz(&c6, QmodZ::new(1, 4)).is_err());
    }

    #[test]
    fn rational_detection() {
        let c5 = CycloCtx::new(5);
        let z = Cyclo::root_power(&c5, 1);
        // 1 + z + z^2 + z^3 + z^4 = 0 and z^5 = 1.
        let mut sum = Cyclo::one();
        let mut p = Cyclo::one();
        for _ in 0..4 {
            p = p * z.clone();
            sum = sum + p.clone();
        }
        assert_eq!(sum.as_rational(), Some(q(0)));
        assert_eq!((p * z.clone()).as_rational(), Some(q(1)));
        assert_eq!(z.as_rational(), None);
    }
}
