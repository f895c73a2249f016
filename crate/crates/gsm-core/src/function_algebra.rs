//! Exactly closed calculus on the family `P(x) exp(-a|x|^2)` over `R^{p+1}`,
//! where `P` is a polynomial with coefficients in `C_{p+q}`.
//!
//! The six operators the rest of the crate needs — partial derivatives, the
//! paravector Dirac operator `D_x = sum_i e_i d/dx_i`, the Laplacian,
//! coordinate multiplication, the unitary Fourier transform and the heat
//! semigroup `exp(t Delta/2)` — all keep results inside this family, so no
//! quadrature is involved in any of them. Hermite polynomials use the
//! physicists' convention `H_{m+1} = 2 s H_m - 2 m H_{m-1}`, which is the one
//! with orthogonality constant `sqrt(pi) 2^k k!` against `exp(-s^2)`.

use crate::clifford::{Multivector, Signature};
use crate::{Error, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Exponent vector `k in N_0^{p+1}` of a monomial `x^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(k: Vec<u32>) -> Self {
        Self(k)
    }

    pub fn zeros(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    /// Unit index along one axis.
    pub fn unit(nvars: usize, axis: usize) -> Self {
        let mut k = vec![0; nvars];
        k[axis] = 1;
        Self(k)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    /// Total degree `|k|`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Multi-index factorial `k! = prod k_i!`.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&k| factorial(k)).product()
    }

    pub fn incremented(&self, axis: usize) -> Self {
        let mut k = self.0.clone();
        k[axis] += 1;
        Self(k)
    }

    pub fn decremented(&self, axis: usize) -> Option<Self> {
        if self.0[axis] == 0 {
            return None;
        }
        let mut k = self.0.clone();
        k[axis] -= 1;
        Some(Self(k))
    }

    pub fn added(&self, other: &Self) -> Self {
        Self(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

/// Graded-lexicographic order: first by total degree, then lexicographic.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

pub fn factorial(k: u32) -> f64 {
    (1..=k as u64).map(|v| v as f64).product()
}

/// All multi-indices in `nvars` variables with `|k| <= max_total`, in
/// graded-lex order.
pub fn multi_indices_up_to(nvars: usize, max_total: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0u32; nvars];
    for total in 0..=max_total {
        fill(&mut out, &mut current, 0, total);
    }
    out.sort();
    return out;

    fn fill(out: &mut Vec<MultiIndex>, current: &mut Vec<u32>, axis: usize, remaining: u32) {
        if axis + 1 == current.len() {
            current[axis] = remaining;
            out.push(MultiIndex::new(current.clone()));
            return;
        }
        for v in 0..=remaining {
            current[axis] = v;
            fill(out, current, axis + 1, remaining - v);
        }
        current[axis] = 0;
    }
}

/// Polynomial in `x_0 .. x_p` with `C_{p+q}`-valued coefficients, stored as
/// monomial -> coefficient. Coefficients conventionally multiply from the
/// right of the (scalar, hence commuting) monomials.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordPolynomial {
    sig: Signature,
    terms: BTreeMap<MultiIndex, Multivector>,
}

impl CliffordPolynomial {
    pub fn zero(sig: Signature) -> Self {
        Self {
            sig,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(sig: Signature, c: Multivector) -> Self {
        let mut p = Self::zero(sig);
        p.add_term(MultiIndex::zeros(sig.p() + 1), c);
        p
    }

    pub fn monomial(sig: Signature, k: MultiIndex, c: Multivector) -> Self {
        let mut p = Self::zero(sig);
        p.add_term(k, c);
        p
    }

    /// Scalar monomial `x^k`.
    pub fn scalar_monomial(sig: Signature, k: MultiIndex) -> Self {
        Self::monomial(sig, k, Multivector::real_scalar(sig, 1.0))
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn nvars(&self) -> usize {
        self.sig.p() + 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Multivector)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|k| k.total()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, k: MultiIndex, c: Multivector) {
        assert_eq!(k.nvars(), self.nvars(), "multi-index arity mismatch");
        assert_eq!(c.sig(), self.sig, "coefficient signature mismatch");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = &*e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.sig, other.sig);
        let mut out = self.clone();
        for (k, c) in other.terms.iter() {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        if factor == Complex64::new(0.0, 0.0) {
            return Self::zero(self.sig);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.scale(factor);
        }
        out
    }

    /// Left-multiplies every coefficient by a constant multivector.
    pub fn left_mul(&self, m: &Multivector) -> Self {
        let mut out = Self::zero(self.sig);
        for (k, c) in self.terms.iter() {
            out.add_term(k.clone(), m * c);
        }
        out
    }

    /// Right-multiplies every coefficient by a constant multivector.
    pub fn right_mul(&self, m: &Multivector) -> Self {
        let mut out = Self::zero(self.sig);
        for (k, c) in self.terms.iter() {
            out.add_term(k.clone(), c * m);
        }
        out
    }

    /// Partial derivative `d/dx_i`.
    pub fn partial(&self, axis: usize) -> Self {
        let mut out = Self::zero(self.sig);
        for (k, c) in self.terms.iter() {
            if let Some(down) = k.decremented(axis) {
                out.add_term(down, c.scale_real(k.get(axis) as f64));
            }
        }
        out
    }

    /// Multiplication by the coordinate `x_axis`.
    pub fn mul_x(&self, axis: usize) -> Self {
        let mut out = Self::zero(self.sig);
        for (k, c) in self.terms.iter() {
            out.add_term(k.incremented(axis), c.clone());
        }
        out
    }

    /// Product of two polynomials; coefficients multiply in factor order.
    pub fn mul_poly(&self, other: &Self) -> Self {
        assert_eq!(self.sig, other.sig);
        let mut out = Self::zero(self.sig);
        for (ka, ca) in self.terms.iter() {
            for (kb, cb) in other.terms.iter() {
                out.add_term(ka.added(kb), ca * cb);
            }
        }
        out
    }

    /// Substitutes `x -> -x`, flipping odd-degree terms.
    pub fn parity(&self) -> Self {
        let mut out = Self::zero(self.sig);
        for (k, c) in self.terms.iter() {
            let sign = if k.total() % 2 == 0 { 1.0 } else { -1.0 };
            out.add_term(k.clone(), c.scale_real(sign));
        }
        out
    }

    pub fn evaluate(&self, x: &[f64]) -> Multivector {
        assert_eq!(x.len(), self.nvars());
        let mut acc = Multivector::zero(self.sig);
        for (k, c) in self.terms.iter() {
            let mut m = 1.0;
            for (i, &e) in k.components().iter().enumerate() {
                m *= x[i].powi(e as i32);
            }
            acc = &acc + &c.scale_real(m);
        }
        acc
    }

    /// Applies the Hermitian conjugation to every coefficient.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zero(self.sig);
        for (k, c) in self.terms.iter() {
            out.add_term(k.clone(), c.hermitian_conjugate());
        }
        out
    }

    /// True when every coefficient is a (complex) scalar.
    pub fn has_scalar_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.max_grade() == 0)
    }
}

/// A member of the closed family: `poly(x) * exp(-rate |x|^2)`.
/// `rate = 0` denotes a plain polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteGaussian {
    poly: CliffordPolynomial,
    rate: f64,
}

impl HermiteGaussian {
    pub fn new(poly: CliffordPolynomial, rate: f64) -> Self {
        assert!(rate >= 0.0 && rate.is_finite(), "rate must be >= 0");
        Self { poly, rate }
    }

    /// Pure Gaussian `exp(-rate |x|^2)`.
    pub fn gaussian(sig: Signature, rate: f64) -> Self {
        Self::new(
            CliffordPolynomial::constant(sig, Multivector::real_scalar(sig, 1.0)),
            rate,
        )
    }

    /// Monomial Gaussian `x^k exp(-rate |x|^2)`.
    pub fn monomial_gaussian(sig: Signature, k: MultiIndex, rate: f64) -> Self {
        Self::new(CliffordPolynomial::scalar_monomial(sig, k), rate)
    }

    pub fn sig(&self) -> Signature {
        self.poly.sig()
    }

    pub fn poly(&self) -> &CliffordPolynomial {
        &self.poly
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn evaluate(&self, x: &[f64]) -> Multivector {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        self.poly.evaluate(x).scale_real((-self.rate * r2).exp())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.rate, other.rate, "rates must match to add");
        Self::new(self.poly.add(&other.poly), self.rate)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.rate, other.rate, "rates must match to subtract");
        Self::new(self.poly.sub(&other.poly), self.rate)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(self.poly.scale(factor), self.rate)
    }

    pub fn right_mul(&self, m: &Multivector) -> Self {
        Self::new(self.poly.right_mul(m), self.rate)
    }

    pub fn left_mul(&self, m: &Multivector) -> Self {
        Self::new(self.poly.left_mul(m), self.rate)
    }

    /// Exact partial derivative:
    /// `d/dx_i (P e^{-a|x|^2}) = (dP/dx_i - 2 a x_i P) e^{-a|x|^2}`.
    pub fn partial_derivative(&self, axis: usize) -> Self {
        let p = self
            .poly
            .partial(axis)
            .add(&self.poly.mul_x(axis).scale(Complex64::new(-2.0 * self.rate, 0.0)));
        Self::new(p, self.rate)
    }

    /// Paravector Dirac operator `D_x = sum_{i=0}^{p} e_i d/dx_i` (with
    /// `e_0 = 1`), multiplying coefficients from the left.
    pub fn dirac_dx(&self) -> Self {
        let sig = self.sig();
        let mut acc = self.partial_derivative(0);
        for i in 1..=sig.p() {
            let e_i = Multivector::generator(sig, i);
            acc = acc.add(&self.partial_derivative(i).left_mul(&e_i));
        }
        acc
    }

    /// Conjugate Dirac operator `bar(D_x) = d/dx_0 - sum_{i>=1} e_i d/dx_i`.
    pub fn dirac_dx_conj(&self) -> Self {
        let sig = self.sig();
        let mut acc = self.partial_derivative(0);
        for i in 1..=sig.p() {
            let e_i = Multivector::generator(sig, i);
            acc = acc.sub(&self.partial_derivative(i).left_mul(&e_i));
        }
        acc
    }

    /// Laplacian `sum_i d^2/dx_i^2`, exact within the family.
    pub fn laplacian(&self) -> Self {
        let mut acc: Option<Self> = None;
        for i in 0..self.poly.nvars() {
            let second = self.partial_derivative(i).partial_derivative(i);
            acc = Some(match acc {
                None => second,
                Some(a) => a.add(&second),
            });
        }
        acc.unwrap()
    }

    /// Multiplication by the coordinate `x_axis`.
    pub fn mul_x(&self, axis: usize) -> Self {
        Self::new(self.poly.mul_x(axis), self.rate)
    }

    /// Left multiplication by the paravector variable,
    /// `x f = sum_i e_i x_i f`.
    pub fn mul_paravector_x(&self) -> Self {
        let sig = self.sig();
        let mut acc = self.mul_x(0);
        for i in 1..=sig.p() {
            let e_i = Multivector::generator(sig, i);
            acc = acc.add(&self.mul_x(i).left_mul(&e_i));
        }
        acc
    }

    /// Substitutes `x -> -x`.
    pub fn parity(&self) -> Self {
        Self::new(self.poly.parity(), self.rate)
    }

    /// Coefficient-wise Hermitian conjugation (monomials are real).
    pub fn dagger(&self) -> Self {
        Self::new(self.poly.dagger(), self.rate)
    }

    /// Pointwise product `self * other` (coefficients multiply in order).
    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.poly.mul_poly(&other.poly), self.rate + other.rate)
    }

    /// Unitary Fourier transform
    /// `f^(xi) = (2 pi)^{-(p+1)/2} int exp(-i<xi,x>) f(x) dx`, computed
    /// exactly: the Gaussian maps to a Gaussian of rate `1/(4a)` and each
    /// monomial factor becomes `i d/dxi` on the transform.
    pub fn fourier_transform(&self) -> Result<Self> {
        let a = self.rate;
        if a <= 0.0 {
            return Err(Error::NotInFamily(a));
        }
        let sig = self.sig();
        let d = self.poly.nvars();
        let base_coeff = (2.0 * a).powf(-(d as f64) / 2.0);
        let base = Self::gaussian(sig, 1.0 / (4.0 * a)).scale(Complex64::new(base_coeff, 0.0));
        let mut out = Self::new(CliffordPolynomial::zero(sig), 1.0 / (4.0 * a));
        for (k, c) in self.poly.terms() {
            let mut g = base.clone();
            for axis in 0..d {
                for _ in 0..k.get(axis) {
                    g = g
                        .partial_derivative(axis)
                        .scale(Complex64::new(0.0, 1.0));
                }
            }
            out = out.add(&g.right_mul(c));
        }
        Ok(out)
    }

    /// Heat semigroup `exp(t Delta_x / 2)` as the Fourier multiplier
    /// `exp(-t |xi|^2 / 2)`; exact within the family for every `t > 0`
    /// (a Gaussian of rate `a` flows to rate `a / (1 + 2 a t)`).
    pub fn heat_semigroup(&self, t: f64) -> Result<Self> {
        if self.rate <= 0.0 {
            return Err(Error::NotInFamily(self.rate));
        }
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::HeatTime(t));
        }
        let hat = self.fourier_transform()?;
        let damped = Self::new(hat.poly, hat.rate + t / 2.0);
        // F^2 is the parity operator, so F^{-1} = parity . F.
        Ok(damped.fourier_transform()?.parity())
    }
}

/// One-dimensional physicists' Hermite polynomial coefficients
/// (`coeffs[j]` multiplies `s^j`).
pub fn hermite_coeffs_1d(k: u32) -> Vec<f64> {
    let mut prev = vec![1.0];
    if k == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 2.0];
    for m in 1..k {
        let mut next = vec![0.0; m as usize + 2];
        for (j, &c) in cur.iter().enumerate() {
            next[j + 1] += 2.0 * c;
        }
        for (j, &c) in prev.iter().enumerate() {
            next[j] -= 2.0 * m as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Tensorized Hermite polynomial
/// `H_k(x) = H_{k_0}(x_0) ... H_{k_p}(x_p)` as a scalar-coefficient
/// polynomial.
pub fn hermite_polynomial(sig: Signature, k: &MultiIndex) -> CliffordPolynomial {
    assert_eq!(k.nvars(), sig.p() + 1);
    let mut out = CliffordPolynomial::constant(sig, Multivector::real_scalar(sig, 1.0));
    for axis in 0..k.nvars() {
        let coeffs = hermite_coeffs_1d(k.get(axis));
        let mut axis_poly = CliffordPolynomial::zero(sig);
        for (j, &c) in coeffs.iter().enumerate() {
            if c != 0.0 {
                let mut v = vec![0u32; k.nvars()];
                v[axis] = j as u32;
                axis_poly.add_term(MultiIndex::new(v), Multivector::real_scalar(sig, c));
            }
        }
        out = out.mul_poly(&axis_poly);
    }
    out
}

/// Hermite function `phi_k(x) = H_k(x) exp(-|x|^2/2)`.
pub fn phi_k(sig: Signature, k: &MultiIndex) -> HermiteGaussian {
    HermiteGaussian::new(hermite_polynomial(sig, k), 0.5)
}

/// `int_R s^m exp(-c s^2) ds` (zero for odd `m`).
fn gaussian_moment_1d(m: u32, c: f64) -> f64 {
    if m % 2 == 1 {
        return 0.0;
    }
    let half = (std::f64::consts::PI / c).sqrt();
    let mut v = half;
    let mut j = 0u32;
    while j + 2 <= m {
        // int s^{j+2} e^{-c s^2} = (j+1)/(2c) int s^j e^{-c s^2}
        v *= (j + 1) as f64 / (2.0 * c);
        j += 2;
    }
    v
}

/// Exact Gaussian moment `int_{R^{p+1}} x^k exp(-c |x|^2) dx`.
pub fn gaussian_moment(k: &MultiIndex, c: f64) -> f64 {
    k.components()
        .iter()
        .map(|&m| gaussian_moment_1d(m, c))
        .product()
}

/// Clifford-valued `L^2(R^{p+1}, dx)` pairing `int f^dag g dx`, evaluated
/// in closed form from Gaussian moments.
pub fn lebesgue_inner_product_clifford(
    f: &HermiteGaussian,
    g: &HermiteGaussian,
) -> Result<Multivector> {
    if f.rate() <= 0.0 {
        return Err(Error::NotInFamily(f.rate()));
    }
    if g.rate() <= 0.0 {
        return Err(Error::NotInFamily(g.rate()));
    }
    let prod = f.dagger().mul(g);
    let c = prod.rate();
    let mut acc = Multivector::zero(f.sig());
    for (k, coeff) in prod.poly().terms() {
        let m = gaussian_moment(k, c);
        if m != 0.0 {
            acc = &acc + &coeff.scale_real(m);
        }
    }
    Ok(acc)
}

/// Scalar `L^2(R^{p+1}, dx)` inner product `int Sc(f^dag g) dx`.
pub fn lebesgue_inner_product(f: &HermiteGaussian, g: &HermiteGaussian) -> Result<Complex64> {
    Ok(lebesgue_inner_product_clifford(f, g)?.scalar_part())
}
