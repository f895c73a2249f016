//! Grid-friendly evaluator for CK-extensions of `P(x) exp(-|x|^2/4)` with
//! scalar coefficients (the `psi_k` family and transforms of Hermite
//! functions), for `p <= 1`.
//!
//! Functions are expanded per axis in normalized oscillator functions
//! `Phi_j(x) = H_j(u) exp(-u^2/2) / sqrt(2^j j! sqrt(pi))`, `u = x/sqrt(2)`,
//! in which the operators the Laplacian series needs are banded with O(1)
//! entries:
//!
//! ```text
//! x  Phi_j = sqrt(j+1) Phi_{j+1} + sqrt(j) Phi_{j-1}
//! d  Phi_j = ( sqrt(j) Phi_{j-1} - sqrt(j+1) Phi_{j+1} ) / 2
//! dd Phi_j = ( sqrt((j+1)(j+2)) Phi_{j+2} - (2j+1) Phi_j
//!              + sqrt(j(j-1)) Phi_{j-2} ) / 4
//! ```
//!
//! and the basis values are uniformly bounded, so the even/odd radial
//! series can be summed in coefficient space with controlled scales. Each
//! radial coordinate `r` of a tensor rule shares one summed coefficient
//! table, cached by the bit pattern of `r`.

use crate::clifford::{Multivector, Signature, SplitPoint};
use crate::function_algebra::HermiteGaussian;
use crate::{Error, Result};
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, RwLock};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense tensor of oscillator coefficients over one or two axes.
#[derive(Debug, Clone)]
struct Tensor {
    dims: Vec<usize>,
    data: Vec<Complex64>,
}

impl Tensor {
    fn zeros(dims: Vec<usize>) -> Self {
        let len = dims.iter().product();
        Self {
            dims,
            data: vec![ZERO; len],
        }
    }

    fn stride(&self, axis: usize) -> usize {
        self.dims[axis + 1..].iter().product()
    }

    fn norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    fn scale(&mut self, f: f64) {
        for c in self.data.iter_mut() {
            *c *= f;
        }
    }

    fn flat_of(&self, j0: usize, j1: usize) -> usize {
        match self.dims.len() {
            1 => j0,
            _ => j0 * self.dims[1] + j1,
        }
    }

    fn indices(&self, flat: usize) -> (usize, usize) {
        match self.dims.len() {
            1 => (flat, 0),
            _ => (flat / self.dims[1], flat % self.dims[1]),
        }
    }

    /// `self += f * other`, growing `self` (with slack) when `other` is
    /// larger along some axis.
    fn accumulate(&mut self, f: Complex64, other: &Tensor) {
        let needs_growth = self
            .dims
            .iter()
            .zip(other.dims.iter())
            .any(|(s, o)| o > s);
        if needs_growth {
            let dims: Vec<usize> = self
                .dims
                .iter()
                .zip(other.dims.iter())
                .map(|(s, o)| if o > s { (o + 63) & !63usize } else { *s })
                .collect();
            let mut grown = Tensor::zeros(dims);
            for (flat, &c) in self.data.iter().enumerate() {
                if c != ZERO {
                    let (j0, j1) = self.indices(flat);
                    let idx = grown.flat_of(j0, j1);
                    grown.data[idx] = c;
                }
            }
            *self = grown;
        }
        for (flat, &c) in other.data.iter().enumerate() {
            if c != ZERO {
                let (j0, j1) = other.indices(flat);
                let idx = self.flat_of(j0, j1);
                self.data[idx] += f * c;
            }
        }
    }

    /// `-Laplacian` in the oscillator basis; grows every axis by 2.
    fn neg_laplacian(&self) -> Tensor {
        let dims: Vec<usize> = self.dims.iter().map(|d| d + 2).collect();
        let mut out = Tensor::zeros(dims);
        for axis in 0..self.dims.len() {
            let out_stride = out.stride(axis);
            let in_stride = self.stride(axis);
            for (flat, &c) in self.data.iter().enumerate() {
                if c == ZERO {
                    continue;
                }
                let j = (flat / in_stride) % self.dims[axis];
                let rest_hi = flat / (in_stride * self.dims[axis]);
                let rest_lo = flat % in_stride;
                let base = rest_hi * out_stride * out.dims[axis] + rest_lo;
                let jf = j as f64;
                out.data[base + (j + 2) * out_stride] -=
                    c * (((jf + 1.0) * (jf + 2.0)).sqrt() / 4.0);
                out.data[base + j * out_stride] += c * ((2.0 * jf + 1.0) / 4.0);
                if j >= 2 {
                    out.data[base + (j - 2) * out_stride] -= c * ((jf * (jf - 1.0)).sqrt() / 4.0);
                }
            }
        }
        out
    }

    /// `d/dx_axis`; grows that axis by 1.
    fn partial(&self, axis: usize) -> Tensor {
        let mut dims = self.dims.clone();
        dims[axis] += 1;
        let mut out = Tensor::zeros(dims);
        let out_stride = out.stride(axis);
        let in_stride = self.stride(axis);
        for (flat, &c) in self.data.iter().enumerate() {
            if c == ZERO {
                continue;
            }
            let j = (flat / in_stride) % self.dims[axis];
            let rest_hi = flat / (in_stride * self.dims[axis]);
            let rest_lo = flat % in_stride;
            let base = rest_hi * out_stride * out.dims[axis] + rest_lo;
            let jf = j as f64;
            if j >= 1 {
                out.data[base + (j - 1) * out_stride] += c * (jf.sqrt() / 2.0);
            }
            out.data[base + (j + 1) * out_stride] -= c * ((jf + 1.0).sqrt() / 2.0);
        }
        out
    }

    /// Multiplication by the coordinate `x_axis`; grows that axis by 1.
    fn mul_x(&self, axis: usize) -> Tensor {
        let mut dims = self.dims.clone();
        dims[axis] += 1;
        let mut out = Tensor::zeros(dims);
        let out_stride = out.stride(axis);
        let in_stride = self.stride(axis);
        for (flat, &c) in self.data.iter().enumerate() {
            if c == ZERO {
                continue;
            }
            let j = (flat / in_stride) % self.dims[axis];
            let rest_hi = flat / (in_stride * self.dims[axis]);
            let rest_lo = flat % in_stride;
            let base = rest_hi * out_stride * out.dims[axis] + rest_lo;
            let jf = j as f64;
            out.data[base + (j + 1) * out_stride] += c * (jf + 1.0).sqrt();
            if j >= 1 {
                out.data[base + (j - 1) * out_stride] += c * jf.sqrt();
            }
        }
        out
    }

    /// Shrinks to the smallest box holding every coefficient above
    /// `floor * max`, so evaluation skips accumulated dust.
    fn compress(&self, floor: f64) -> Tensor {
        let max = self
            .data
            .iter()
            .map(|c| c.norm_sqr())
            .fold(0.0f64, f64::max)
            .sqrt();
        let cut = max * floor;
        let mut dims = vec![1usize; self.dims.len()];
        for (flat, c) in self.data.iter().enumerate() {
            if c.norm() > cut {
                let (j0, j1) = self.indices(flat);
                dims[0] = dims[0].max(j0 + 1);
                if dims.len() > 1 {
                    dims[1] = dims[1].max(j1 + 1);
                }
            }
        }
        let mut out = Tensor::zeros(dims);
        for flat in 0..out.data.len() {
            let (j0, j1) = out.indices(flat);
            out.data[flat] = self.data[self.flat_of(j0, j1)];
        }
        out
    }

    /// Contracts against per-axis basis value tables.
    fn eval(&self, tables: &[Vec<f64>]) -> Complex64 {
        match self.dims.len() {
            1 => {
                let t = &tables[0];
                let mut acc = ZERO;
                for (j, &c) in self.data.iter().enumerate() {
                    acc += c * t[j];
                }
                acc
            }
            2 => {
                let (t0, t1) = (&tables[0], &tables[1]);
                let d1 = self.dims[1];
                let mut acc = ZERO;
                for j0 in 0..self.dims[0] {
                    let row = &self.data[j0 * d1..(j0 + 1) * d1];
                    let mut inner = ZERO;
                    for (j1, &c) in row.iter().enumerate() {
                        inner += c * t1[j1];
                    }
                    acc += inner * t0[j0];
                }
                acc
            }
            _ => unreachable!(),
        }
    }
}

/// Normalized oscillator values `Phi_j(x)`, `j < count`.
fn oscillator_values(x: f64, count: usize) -> Vec<f64> {
    let u = x / 2.0f64.sqrt();
    let mut out = Vec::with_capacity(count);
    let h0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * u * u).exp();
    out.push(h0);
    if count > 1 {
        out.push(2.0f64.sqrt() * u * h0);
    }
    for j in 1..count.saturating_sub(1) {
        let jf = j as f64;
        let next = u * (2.0 / (jf + 1.0)).sqrt() * out[j] - (jf / (jf + 1.0)).sqrt() * out[j - 1];
        out.push(next);
    }
    out
}

/// Summed radial data at one `r`: the even scalar part and the `p + 1`
/// paravector components of the odd part.
struct RadialData {
    even: Tensor,
    odd: Vec<Tensor>,
}

/// Evaluator for `CK[f0]` with `f0 = P(x) exp(-|x|^2/4)`, scalar
/// coefficients, `p <= 1`.
pub struct CkSeriesEvaluator {
    sig: Signature,
    base: Tensor,
    tol: f64,
    max_terms: usize,
    cache: RwLock<HashMap<u64, Arc<RadialData>>>,
}

impl CkSeriesEvaluator {
    /// Fails when `f0` is outside the supported class (rate != 1/4,
    /// non-scalar coefficients, or `p > 1`).
    pub fn new(f0: &HermiteGaussian) -> Result<Self> {
        let sig = f0.sig();
        if sig.p() > 1 {
            return Err(Error::Capability(
                "series evaluator supports p <= 1".into(),
            ));
        }
        if (f0.rate() - 0.25).abs() > 1e-15 {
            return Err(Error::NotInFamily(f0.rate()));
        }
        if !f0.poly().has_scalar_coefficients() {
            return Err(Error::Capability(
                "series evaluator needs scalar coefficients".into(),
            ));
        }
        let nvars = sig.p() + 1;
        // exp(-|x|^2/4) = pi^{(p+1)/4} Phi_0 x ... x Phi_0
        let seed = std::f64::consts::PI.powf(nvars as f64 / 4.0);
        let mut base = Tensor::zeros(vec![1; nvars]);
        for (k, c) in f0.poly().terms() {
            let mut t = Tensor::zeros(vec![1; nvars]);
            t.data[0] = Complex64::new(seed, 0.0);
            for axis in 0..nvars {
                for _ in 0..k.get(axis) {
                    t = t.mul_x(axis);
                }
            }
            base.accumulate(c.scalar_part(), &t);
        }
        Ok(Self {
            sig,
            base,
            tol: 1e-14,
            max_terms: 400,
            cache: RwLock::new(HashMap::new()),
        })
    }

    fn radial(&self, r: f64) -> Arc<RadialData> {
        let key = r.to_bits();
        if let Some(hit) = self.cache.read().expect("cache lock").get(&key) {
            return hit.clone();
        }
        let data = Arc::new(self.sum_radial(r));
        self.cache
            .write()
            .expect("cache lock")
            .insert(key, data.clone());
        data
    }

    /// Sums the even/odd Laplacian series in coefficient space for one `r`.
    /// Iterates the scaled terms `u~_m = (-Delta)^m f0 rho^{2m} / (2m)!`
    /// whose norms stay bounded; point evaluation restores `(r/rho)^{2m}`.
    fn sum_radial(&self, r: f64) -> RadialData {
        let nvars = self.sig.p() + 1;
        let one = Complex64::new(1.0, 0.0);
        let mut even = Tensor::zeros(vec![1; nvars]);
        even.accumulate(one, &self.base);
        let mut odd: Vec<Tensor> = (0..nvars).map(|_| Tensor::zeros(vec![1; nvars])).collect();

        if r > 0.0 {
            let rho = r.max(1.0);
            let ratio = r / rho;
            let mut u = self.base.clone();
            let mut ratio_odd = ratio;
            let mut max_term = self.base.norm();
            let mut quiet = 0usize;
            let mut converged = false;
            for m in 0..self.max_terms {
                let mf = m as f64;
                let mut step = 0.0f64;
                for (axis, acc) in odd.iter_mut().enumerate() {
                    let v = u.partial(axis);
                    let f = ratio_odd * rho / (2.0 * mf + 1.0);
                    acc.accumulate(Complex64::new(f, 0.0), &v);
                    step = step.max(v.norm() * f.abs());
                }
                let mut next = u.neg_laplacian();
                next.scale(rho * rho / ((2.0 * mf + 1.0) * (2.0 * mf + 2.0)));
                u = next;
                let f_even = ratio_odd * ratio;
                even.accumulate(Complex64::new(f_even, 0.0), &u);
                step = step.max(u.norm() * f_even);
                ratio_odd *= ratio * ratio;

                max_term = max_term.max(step);
                let scale = 1.0 + even.norm();
                if step <= self.tol * scale {
                    quiet += 1;
                    if quiet >= 3 {
                        converged = true;
                        break;
                    }
                } else {
                    quiet = 0;
                }
                if m >= 2 && step <= 16.0 * f64::EPSILON * (max_term + scale) {
                    converged = true;
                    break;
                }
            }
            assert!(
                converged,
                "radial series for r = {r} did not converge within {} terms",
                self.max_terms
            );
        }
        RadialData {
            even: even.compress(1e-18),
            odd: odd.iter().map(|t| t.compress(1e-18)).collect(),
        }
    }

    /// Evaluates `CK[f0]` at a point.
    pub fn eval(&self, bx: &SplitPoint) -> Multivector {
        assert_eq!(bx.sig(), self.sig);
        let r = bx.r();
        let data = self.radial(r);
        let nvars = self.sig.p() + 1;
        let mut j_max = data.even.dims.clone();
        for t in &data.odd {
            for (a, d) in t.dims.iter().enumerate() {
                j_max[a] = j_max[a].max(*d);
            }
        }
        let tables: Vec<Vec<f64>> = (0..nvars)
            .map(|a| oscillator_values(bx.x()[a], j_max[a]))
            .collect();
        let even = data.even.eval(&tables);
        let mut out = Multivector::scalar(self.sig, even);
        if let Some(omega) = bx.omega_vector() {
            let mut paravector = Multivector::zero(self.sig);
            for (axis, t) in data.odd.iter().enumerate() {
                let v = t.eval(&tables);
                let mask = if axis == 0 { 0 } else { 1 << (axis - 1) };
                paravector.set_coeff(mask, v);
            }
            out = &out + &(&omega * &paravector);
        }
        out
    }
}
