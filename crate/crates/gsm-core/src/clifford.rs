//! Dense arithmetic for the complexified Clifford algebra `C_{p+q}`.
//!
//! A multivector is stored as `2^n` complex coefficients indexed by blade
//! bitmask: bit `i` set means generator `e_{i+1}` is present, mask `0` is
//! the scalar part. The geometric product sign of `e_A e_B` is the parity
//! of the swaps needed to merge the two index lists, times `(-1)^{|A & B|}`
//! from the contraction rule `e_i^2 = -1`.

use crate::{Error, Result};
use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

/// Maximum number of generators kept at desk scale (`2^12` coefficients).
pub const MAX_GENERATORS: usize = 12;

/// Split signature of `C_{p+q}`: `p + 1` paravector directions and `q`
/// slice directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    p: usize,
    q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::Capability("signature needs q >= 1".into()));
        }
        if p + q > MAX_GENERATORS {
            return Err(Error::Capability(format!(
                "n = p + q = {} exceeds the supported maximum {}",
                p + q,
                MAX_GENERATORS
            )));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Total generator count `n = p + q`.
    pub fn n(&self) -> usize {
        self.p + self.q
    }

    /// Number of blade coefficients, `2^n`.
    pub fn dim(&self) -> usize {
        1 << self.n()
    }
}

/// Swap-count parity for merging blade `a` past blade `b`.
fn reorder_sign(a: usize, b: usize) -> f64 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sign of `e_A e_B` including the `e_i^2 = -1` contractions.
fn product_sign(a: usize, b: usize) -> f64 {
    let mut s = reorder_sign(a, b);
    if (a & b).count_ones() & 1 == 1 {
        s = -s;
    }
    s
}

/// Sign picked up by a grade-`k` blade under Clifford conjugation,
/// `(-1)^{k(k+1)/2}`.
fn conjugation_sign(mask: usize) -> f64 {
    let k = mask.count_ones() as usize;
    if (k * (k + 1) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// An element of `C_{p+q}` with dense complex blade coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector {
    sig: Signature,
    coeff: Vec<Complex64>,
}

impl Multivector {
    pub fn zero(sig: Signature) -> Self {
        Self {
            sig,
            coeff: vec![Complex64::new(0.0, 0.0); sig.dim()],
        }
    }

    pub fn scalar(sig: Signature, value: Complex64) -> Self {
        let mut mv = Self::zero(sig);
        mv.coeff[0] = value;
        mv
    }

    pub fn real_scalar(sig: Signature, value: f64) -> Self {
        Self::scalar(sig, Complex64::new(value, 0.0))
    }

    /// Unit blade `e_A` for a bitmask `A`.
    pub fn basis_blade(sig: Signature, mask: usize) -> Self {
        assert!(mask < sig.dim(), "blade mask out of range");
        let mut mv = Self::zero(sig);
        mv.coeff[mask] = Complex64::new(1.0, 0.0);
        mv
    }

    /// Generator `e_i`, `1 <= i <= n`.
    pub fn generator(sig: Signature, i: usize) -> Self {
        assert!(i >= 1 && i <= sig.n(), "generator index out of range");
        Self::basis_blade(sig, 1 << (i - 1))
    }

    /// Real 1-vector `sum_i v_i e_{offset+i+1}`.
    pub fn one_vector(sig: Signature, offset: usize, v: &[f64]) -> Self {
        assert!(offset + v.len() <= sig.n());
        let mut mv = Self::zero(sig);
        for (i, &c) in v.iter().enumerate() {
            mv.coeff[1 << (offset + i)] = Complex64::new(c, 0.0);
        }
        mv
    }

    /// Paravector `x_0 + sum_{i=1}^{p} x_i e_i` from coordinates in `R^{p+1}`.
    pub fn paravector(sig: Signature, x: &[f64]) -> Self {
        assert_eq!(x.len(), sig.p() + 1, "paravector needs p + 1 coordinates");
        let mut mv = Self::zero(sig);
        mv.coeff[0] = Complex64::new(x[0], 0.0);
        for i in 1..x.len() {
            mv.coeff[1 << (i - 1)] = Complex64::new(x[i], 0.0);
        }
        mv
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn coeff(&self, mask: usize) -> Complex64 {
        self.coeff[mask]
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeff
    }

    pub fn set_coeff(&mut self, mask: usize, value: Complex64) {
        self.coeff[mask] = value;
    }

    /// Scalar part `Sc(a)`, the coefficient at mask 0.
    pub fn scalar_part(&self) -> Complex64 {
        self.coeff[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// Geometric product with a signature check.
    pub fn geometric_product(&self, other: &Self) -> Result<Self> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(self.sig.n(), other.sig.n()));
        }
        let dim = self.sig.dim();
        let mut out = Self::zero(self.sig);
        for (a, ca) in self.coeff.iter().enumerate() {
            if ca.re == 0.0 && ca.im == 0.0 {
                continue;
            }
            for b in 0..dim {
                let cb = other.coeff[b];
                if cb.re == 0.0 && cb.im == 0.0 {
                    continue;
                }
                out.coeff[a ^ b] += product_sign(a, b) * ca * cb;
            }
        }
        Ok(out)
    }

    /// Clifford conjugation `bar(a)`: grade `k` picks up `(-1)^{k(k+1)/2}`.
    pub fn clifford_conjugate(&self) -> Self {
        let mut out = self.clone();
        for (mask, c) in out.coeff.iter_mut().enumerate() {
            *c *= conjugation_sign(mask);
        }
        out
    }

    /// Hermitian conjugation `a^dag = sum conj(a_A) bar(e_A)`.
    pub fn hermitian_conjugate(&self) -> Self {
        let mut out = self.clone();
        for (mask, c) in out.coeff.iter_mut().enumerate() {
            *c = c.conj() * conjugation_sign(mask);
        }
        out
    }

    /// Sesquilinear inner product `(a, b) = Sc(a^dag b)`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(self.sig.n(), other.sig.n()));
        }
        // Sc(a^dag b) reduces to a coefficient-wise pairing: the mask-A term
        // of a^dag b lands on the scalar only when both factors sit on e_A,
        // and bar(e_A) e_A = (-1)^{k(k+1)/2} (-1)^{swaps} ... = +1 always.
        let mut acc = Complex64::new(0.0, 0.0);
        for (mask, ca) in self.coeff.iter().enumerate() {
            let sign = conjugation_sign(mask) * product_sign(mask, mask);
            acc += sign * ca.conj() * other.coeff[mask];
        }
        Ok(acc)
    }

    /// Norm `|a| = sqrt(sum_A |a_A|^2) = sqrt(Sc(a^dag a))`.
    pub fn norm(&self) -> f64 {
        self.coeff.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Grade projection onto `k`-vectors.
    pub fn grade(&self, k: usize) -> Self {
        let mut out = Self::zero(self.sig);
        for (mask, c) in self.coeff.iter().enumerate() {
            if mask.count_ones() as usize == k {
                out.coeff[mask] = *c;
            }
        }
        out
    }

    /// Largest grade carrying a nonzero coefficient (0 for the zero element).
    pub fn max_grade(&self) -> usize {
        self.coeff
            .iter()
            .enumerate()
            .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
            .map(|(mask, _)| mask.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Inverse of a nonzero paravector, `x^{-1} = bar(x) / |x|^2`.
    pub fn paravector_inverse(&self) -> Result<Self> {
        if self.max_grade() > 1 {
            return Err(Error::Capability(
                "paravector inverse needs a grade {0,1} element".into(),
            ));
        }
        let n2 = self.norm();
        if n2 == 0.0 {
            return Err(Error::ZeroParavector);
        }
        // For a real paravector x bar(x) = |x|^2; complex coefficients are
        // supported through the same formula when x bar(x) is scalar.
        let xbar = self.clifford_conjugate();
        let prod = self.geometric_product(&xbar)?;
        let s = prod.scalar_part();
        if s.norm() == 0.0 {
            return Err(Error::ZeroParavector);
        }
        Ok(xbar.scale(Complex64::new(1.0, 0.0) / s))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for c in out.coeff.iter_mut() {
            *c *= factor;
        }
        out
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Integer power via repeated products (`a^0 = 1`).
    pub fn powi(&self, k: usize) -> Self {
        let mut acc = Self::real_scalar(self.sig, 1.0);
        for _ in 0..k {
            acc = acc.geometric_product(self).expect("same signature");
        }
        acc
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.sig, rhs.sig, "signature mismatch");
        let mut out = self.clone();
        for (c, r) in out.coeff.iter_mut().zip(rhs.coeff.iter()) {
            *c += r;
        }
        out
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.sig, rhs.sig, "signature mismatch");
        let mut out = self.clone();
        for (c, r) in out.coeff.iter_mut().zip(rhs.coeff.iter()) {
            *c -= r;
        }
        out
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale_real(-1.0)
    }
}

impl Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.geometric_product(rhs).expect("signature mismatch")
    }
}

/// A point `bx = x + y` of `R^{p+q+1}` split into its paravector part
/// `x in R^{p+1}` and slice part `y in R^q`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitPoint {
    sig: Signature,
    x: Vec<f64>,
    y: Vec<f64>,
}

impl SplitPoint {
    pub fn new(sig: Signature, x: Vec<f64>, y: Vec<f64>) -> Self {
        assert_eq!(x.len(), sig.p() + 1, "x needs p + 1 coordinates");
        assert_eq!(y.len(), sig.q(), "y needs q coordinates");
        Self { sig, x, y }
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Radial coordinate `r = |y|`.
    pub fn r(&self) -> f64 {
        self.y.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Unit direction `omega = y / |y|`; `None` on the plane `y = 0` where
    /// the direction is not determined.
    pub fn omega(&self) -> Option<Vec<f64>> {
        let r = self.r();
        if r == 0.0 {
            None
        } else {
            Some(self.y.iter().map(|v| v / r).collect())
        }
    }

    /// Embeds the point as the grade {0,1} multivector `x + y`.
    pub fn embed(&self) -> Multivector {
        let mut mv = Multivector::paravector(self.sig, &self.x);
        for (i, &c) in self.y.iter().enumerate() {
            mv.set_coeff(1 << (self.sig.p() + i), Complex64::new(c, 0.0));
        }
        mv
    }

    /// The slice part `y` as a 1-vector multivector.
    pub fn y_vector(&self) -> Multivector {
        Multivector::one_vector(self.sig, self.sig.p(), &self.y)
    }

    /// Direction `omega` as a unit 1-vector multivector (`None` at `y = 0`).
    pub fn omega_vector(&self) -> Option<Multivector> {
        self.omega()
            .map(|w| Multivector::one_vector(self.sig, self.sig.p(), &w))
    }

    /// Restriction to the plane `y = 0` keeping the same `x`.
    pub fn restriction(&self) -> Self {
        Self::new(self.sig, self.x.clone(), vec![0.0; self.sig.q()])
    }

    /// Point with only the slice part, `(0, y)`.
    pub fn slice_only(&self) -> Self {
        Self::new(self.sig, vec![0.0; self.sig.p() + 1], self.y.clone())
    }

    /// Scales the whole point, `k * bx`.
    pub fn scaled(&self, k: f64) -> Self {
        Self::new(
            self.sig,
            self.x.iter().map(|v| k * v).collect(),
            self.y.iter().map(|v| k * v).collect(),
        )
    }

    /// Scales only the slice part, `x + k y`.
    pub fn y_scaled(&self, k: f64) -> Self {
        Self::new(
            self.sig,
            self.x.clone(),
            self.y.iter().map(|v| k * v).collect(),
        )
    }
}

/// Embeds `xi in R^{p+1}` as the paravector `xi_0 + sum xi_i e_i`.
pub fn paravector_from_xi(sig: Signature, xi: &[f64]) -> Multivector {
    Multivector::paravector(sig, xi)
}
