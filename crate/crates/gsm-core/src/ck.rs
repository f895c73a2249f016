//! The generalized partial-slice Cauchy-Kovalevskaya extension and its
//! exponential kernel.
//!
//! `CK[f0](bx) = exp(y D_x) f0(x)` extends data on `R^{p+1}` to a function
//! on `R^{p+q+1}` annihilated by `D_x + omega d/dr` on every half-plane
//! slice. Because `(y D_x)^2 = -r^2 Laplacian` on the whole coefficient
//! family, the series splits into an even part in powers of the Laplacian
//! and an odd part carrying a single left factor `omega D_x`; both are used
//! here. For polynomial data the series terminates; for Gaussian-weighted
//! data two independent routes are provided (a truncated Laplacian series
//! and a frequency-space integral against the kernel) that must agree.
//!
//! The kernel `e(bx, xi) = CK[exp(i<., xi>)]` has the closed form
//! `(cosh(|y||xi|) + i y xi sinhc(|y||xi|)) exp(i<x, xi>)`, coded with
//! `sinhc(t) = sinh(t)/t` so the slice-degenerate cases `y = 0`, `xi = 0`
//! need no special handling.

use crate::clifford::{Multivector, Signature, SplitPoint};
use crate::function_algebra::{CliffordPolynomial, HermiteGaussian, MultiIndex};
use crate::quadrature::hermite_nodes;
use crate::{Error, Result};
use num_complex::Complex64;

/// `sinh(t)/t`, by a 6-term Taylor series below 1e-4 where the direct
/// quotient would cancel.
pub fn sinhc(t: f64) -> f64 {
    if t.abs() < 1e-4 {
        let t2 = t * t;
        // sum_{j=0}^{5} t^{2j} / (2j+1)!
        let mut term = 1.0;
        let mut acc = 1.0;
        for j in 1..6u32 {
            term *= t2 / ((2 * j) as f64 * (2 * j + 1) as f64);
            acc += term;
        }
        acc
    } else {
        t.sinh() / t
    }
}

/// Relative deviation `|a - b| / max(|a|, |b|)` of two multivectors.
pub fn relative_deviation(a: &Multivector, b: &Multivector) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// The exponential kernel `e(bx, xi)`, written in the numerically stable
/// form `(cosh(t) + i (y xi) sinhc(t)) exp(i<x, xi>)` with `t = |y||xi|`
/// and `y xi` the Clifford product of the slice 1-vector and the
/// frequency paravector.
pub fn kernel_e(bx: &SplitPoint, xi: &[f64]) -> Multivector {
    let sig = bx.sig();
    assert_eq!(xi.len(), sig.p() + 1, "xi must live in R^{{p+1}}");
    let t = bx.r() * xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    let dot: f64 = bx.x().iter().zip(xi.iter()).map(|(a, b)| a * b).sum();
    let phase = Complex64::from_polar(1.0, dot);

    let y_xi = &bx.y_vector() * &Multivector::paravector(sig, xi);
    let mut mv = Multivector::scalar(sig, Complex64::new(t.cosh(), 0.0));
    mv = &mv + &y_xi.scale(Complex64::new(0.0, sinhc(t)));
    mv.scale(phase)
}

/// One identity check of the kernel suite.
#[derive(Debug, Clone)]
pub struct KernelCheck {
    pub name: &'static str,
    pub deviation: f64,
}

/// Deviations of the four kernel identities at one `(bx, xi)`.
#[derive(Debug, Clone)]
pub struct KernelIdentityReport {
    pub checks: Vec<KernelCheck>,
}

impl KernelIdentityReport {
    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().map(|c| c.deviation).fold(0.0, f64::max)
    }

    pub fn pass(&self, tol: f64) -> bool {
        self.max_deviation() <= tol
    }

    /// Name of the worst identity, for failure messages.
    pub fn worst(&self) -> &'static str {
        self.checks
            .iter()
            .max_by(|a, b| a.deviation.total_cmp(&b.deviation))
            .map(|c| c.name)
            .unwrap_or("none")
    }
}

/// Checks the kernel's product, conjugation, modulus and power identities
/// at a single point.
pub fn kernel_identity_suite(bx: &SplitPoint, xi: &[f64]) -> KernelIdentityReport {
    let sig = bx.sig();
    let neg_xi: Vec<f64> = xi.iter().map(|v| -v).collect();
    let xi2: Vec<f64> = xi.iter().map(|v| 2.0 * v).collect();

    let e_full = kernel_e(bx, xi);
    let e_x = kernel_e(&bx.restriction(), xi);
    let e_y = kernel_e(&bx.slice_only(), xi);
    let neg_x = SplitPoint::new(
        sig,
        bx.x().iter().map(|v| -v).collect(),
        vec![0.0; sig.q()],
    );

    let mut checks = Vec::new();
    let mut push = |name: &'static str, a: &Multivector, b: &Multivector| {
        checks.push(KernelCheck {
            name,
            deviation: relative_deviation(a, b),
        });
    };

    // e(bx, xi) = e(x, xi) e(y, xi) = e(y, xi) e(x, xi)
    push("split-product", &e_full, &(&e_x * &e_y));
    push("split-product-commuted", &e_full, &(&e_y * &e_x));

    // e(bx, xi)^dag = e(-x, xi) e(y, xi) = e(x, -xi) e(y, xi)
    let dag = e_full.hermitian_conjugate();
    push(
        "conjugate-reflected-x",
        &dag,
        &(&kernel_e(&neg_x, xi) * &e_y),
    );
    push(
        "conjugate-reflected-xi",
        &dag,
        &(&kernel_e(&bx.restriction(), &neg_xi) * &e_y),
    );

    // e^dag e = e(y,xi)^dag e(y,xi) = e(2y, xi) = e(y, 2xi)
    let modulus = &dag * &e_full;
    push(
        "modulus-slice-only",
        &modulus,
        &(&e_y.hermitian_conjugate() * &e_y),
    );
    push(
        "modulus-doubled-y",
        &modulus,
        &kernel_e(&bx.slice_only().y_scaled(2.0), xi),
    );
    push("modulus-doubled-xi", &modulus, &kernel_e(&bx.slice_only(), &xi2));

    // e(bx, xi)^k = e(k bx, xi) = e(bx, k xi), k in {2, 3}
    for k in [2usize, 3] {
        let pow = e_full.powi(k);
        let scaled_point = kernel_e(&bx.scaled(k as f64), xi);
        let scaled_xi: Vec<f64> = xi.iter().map(|v| k as f64 * v).collect();
        let name_pt: &'static str = if k == 2 { "power-2-scaled-point" } else { "power-3-scaled-point" };
        let name_xi: &'static str = if k == 2 { "power-2-scaled-xi" } else { "power-3-scaled-xi" };
        push(name_pt, &pow, &scaled_point);
        push(name_xi, &pow, &kernel_e(bx, &scaled_xi));
    }

    KernelIdentityReport { checks }
}

/// CK-extension of a polynomial: `sum_m (y D_x)^m f0 / m!` evaluated at
/// `bx`. The series terminates because each `D_x` lowers the degree.
pub fn ck_polynomial(f0: &CliffordPolynomial, bx: &SplitPoint) -> Multivector {
    let x = bx.x();
    let y_mv = bx.y_vector();
    let mut g = HermiteGaussian::new(f0.clone(), 0.0);
    let mut acc = g.evaluate(x);
    let mut m = 1.0;
    while !g.poly().is_zero() {
        g = g.dirac_dx().left_mul(&y_mv).scale(Complex64::new(1.0 / m, 0.0));
        acc = &acc + &g.evaluate(x);
        m += 1.0;
    }
    acc
}

/// Degree and slice direction of a Fueter polynomial `P_{eta,k}`.
#[derive(Debug, Clone)]
pub struct FueterPolynomialSpec {
    k: MultiIndex,
    eta: Vec<f64>,
}

impl FueterPolynomialSpec {
    /// `eta` must be a unit 1-vector in `R^q`.
    pub fn new(k: MultiIndex, eta: Vec<f64>) -> Self {
        let n2: f64 = eta.iter().map(|v| v * v).sum();
        assert!(
            (n2 - 1.0).abs() < 1e-12,
            "eta must be a unit vector, |eta|^2 = {n2}"
        );
        Self { k, eta }
    }

    /// Direction taken from a point's `omega` (any direction at `r = 0`,
    /// where the polynomial no longer depends on it).
    pub fn from_point(k: MultiIndex, bx: &SplitPoint) -> Self {
        let eta = bx.omega().unwrap_or_else(|| {
            let mut e = vec![0.0; bx.sig().q()];
            e[0] = 1.0;
            e
        });
        Self::new(k, eta)
    }

    pub fn k(&self) -> &MultiIndex {
        &self.k
    }
}

/// Lexicographic next-permutation over a multiset; returns false once the
/// sequence is the last (descending) arrangement.
fn next_permutation(seq: &mut [usize]) -> bool {
    if seq.len() < 2 {
        return false;
    }
    let mut i = seq.len() - 1;
    while i > 0 && seq[i - 1] >= seq[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = seq.len() - 1;
    while seq[j] <= seq[i - 1] {
        j -= 1;
    }
    seq.swap(i - 1, j);
    seq[i..].reverse();
    true
}

/// Fueter variables `z_l = x_l + r eta e_l` for a given direction.
pub fn fueter_variables(sig: Signature, eta: &[f64], x: &[f64], r: f64) -> Vec<Multivector> {
    let eta_mv = Multivector::one_vector(sig, sig.p(), eta);
    (0..=sig.p())
        .map(|l| {
            let e_l = if l == 0 {
                Multivector::real_scalar(sig, 1.0)
            } else {
                Multivector::generator(sig, l)
            };
            &Multivector::real_scalar(sig, x[l]) + &(&eta_mv.scale_real(r) * &e_l)
        })
        .collect()
}

/// Fueter polynomial `P_{eta,k}(x, r)`: the average over all distinct
/// arrangements of the degree multiset of the ordered products of Fueter
/// variables, `1/|k|! sum_sigma z_{sigma(1)} ... z_{sigma(|k|)}`.
pub fn fueter_polynomial(sig: Signature, spec: &FueterPolynomialSpec, x: &[f64], r: f64) -> Multivector {
    assert_eq!(x.len(), sig.p() + 1);
    let k = &spec.k;
    let total = k.total() as usize;
    if total == 0 {
        return Multivector::real_scalar(sig, 1.0);
    }
    let z = fueter_variables(sig, &spec.eta, x, r);
    let mut alignment: Vec<usize> = Vec::with_capacity(total);
    for (axis, &count) in k.components().iter().enumerate() {
        alignment.extend(std::iter::repeat(axis).take(count as usize));
    }
    let mut acc = Multivector::zero(sig);
    loop {
        let mut prod = Multivector::real_scalar(sig, 1.0);
        for &axis in &alignment {
            prod = &prod * &z[axis];
        }
        acc = &acc + &prod;
        if !next_permutation(&mut alignment) {
            break;
        }
    }
    acc.scale_real(1.0 / crate::function_algebra::factorial(total as u32))
}

/// Evaluation route for the CK-extension of Gaussian-weighted data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CkRoute {
    /// Frequency-space integral of `e(bx, xi)` against the exact transform.
    Fourier,
    /// Truncated even/odd Laplacian series.
    DeltaSeries,
}

/// Tolerance and order controls for [`ck_hermite_gaussian`].
#[derive(Debug, Clone, Copy)]
pub struct CkCtrl {
    /// Relative tolerance for the series stopping rule.
    pub tol: f64,
    /// Hard cap on Laplacian-series terms.
    pub max_terms: usize,
    /// Per-axis node count of the frequency-space rule.
    pub xi_order: usize,
}

impl Default for CkCtrl {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_terms: 200,
            xi_order: 60,
        }
    }
}

/// CK-extension of `f0 = P(x) exp(-a|x|^2)` at one point, by the chosen
/// route. The two routes are independent implementations and agree within
/// the control tolerance on their common validity region (`|y| <= 4` for
/// the frequency route at default orders).
pub fn ck_hermite_gaussian(
    f0: &HermiteGaussian,
    bx: &SplitPoint,
    route: CkRoute,
    ctrl: &CkCtrl,
) -> Result<Multivector> {
    if f0.rate() <= 0.0 {
        return Err(Error::NotInFamily(f0.rate()));
    }
    match route {
        CkRoute::DeltaSeries => ck_delta_series(f0, bx, ctrl),
        CkRoute::Fourier => ck_fourier(f0, bx, ctrl),
    }
}

fn ck_delta_series(f0: &HermiteGaussian, bx: &SplitPoint, ctrl: &CkCtrl) -> Result<Multivector> {
    let x = bx.x();
    let r = bx.r();
    let mut acc = f0.evaluate(x);
    if r == 0.0 {
        return Ok(acc);
    }
    let omega = bx.omega_vector().expect("r > 0");
    // Scaled iterates u~_m = (-Delta)^m f0 * rho^{2m} / (2m)! keep every
    // intermediate bounded; the point terms restore (r/rho)^{2m}.
    let rho = r.max(1.0);
    let ratio = r / rho;
    let mut u = f0.clone();
    let mut ratio_odd = ratio;
    let mut max_term = acc.norm();
    let mut quiet = 0usize;
    let mut last_rel = f64::INFINITY;
    for m in 0..ctrl.max_terms {
        let mf = m as f64;
        let v = u.dirac_dx().scale(Complex64::new(rho / (2.0 * mf + 1.0), 0.0));
        let odd = (&omega * &v.evaluate(x)).scale_real(ratio_odd);
        acc = &acc + &odd;

        u = u
            .laplacian()
            .scale(Complex64::new(-rho * rho / ((2.0 * mf + 1.0) * (2.0 * mf + 2.0)), 0.0));
        let even = u.evaluate(x).scale_real(ratio_odd * ratio);
        acc = &acc + &even;
        ratio_odd *= ratio * ratio;

        let step = odd.norm().max(even.norm());
        max_term = max_term.max(step);
        last_rel = step / (1.0 + acc.norm());
        if step <= ctrl.tol * (1.0 + acc.norm()) {
            quiet += 1;
            if quiet >= 3 {
                return Ok(acc);
            }
        } else {
            quiet = 0;
        }
        // Floating-point floor: once terms sit at roundoff of the largest
        // intermediate, more terms cannot improve the sum.
        if m >= 2 && step <= 16.0 * f64::EPSILON * (max_term + acc.norm()) {
            return Ok(acc);
        }
    }
    Err(Error::SeriesNotConverged {
        max_terms: ctrl.max_terms,
        residual: last_rel,
    })
}

fn ck_fourier(f0: &HermiteGaussian, bx: &SplitPoint, ctrl: &CkCtrl) -> Result<Multivector> {
    let sig = f0.sig();
    let dim = sig.p() + 1;
    if dim > 3 {
        return Err(Error::Capability(format!(
            "frequency-route quadrature supports p <= 2, got p = {}",
            sig.p()
        )));
    }
    let hat = f0.fourier_transform()?;
    let c = hat.rate();
    let s = c.sqrt();
    let (nodes, weights) = hermite_nodes(ctrl.xi_order)?;
    // CK[f0](bx) = (2 pi)^{-(p+1)/2} int e(bx, xi) f0^(xi) dxi, with the
    // transform's Gaussian integrated by the substitution xi = t / sqrt(c).
    let mut acc = Multivector::zero(sig);
    let mut idx = vec![0usize; dim];
    let count = nodes.len().pow(dim as u32);
    let mut xi = vec![0.0; dim];
    for _ in 0..count {
        let mut w = 1.0;
        for (a, &i) in idx.iter().enumerate() {
            xi[a] = nodes[i] / s;
            w *= weights[i];
        }
        let g = &kernel_e(bx, &xi) * &hat.poly().evaluate(&xi);
        acc = &acc + &g.scale_real(w);
        for a in (0..dim).rev() {
            idx[a] += 1;
            if idx[a] < nodes.len() {
                break;
            }
            idx[a] = 0;
        }
    }
    let prefactor = (2.0 * std::f64::consts::PI).powf(-(dim as f64) / 2.0) / s.powi(dim as i32);
    Ok(acc.scale_real(prefactor))
}

/// Finite-difference residual `|D_x f + omega df/dr|` at `bx` with central
/// differences of step `h` along each `x`-axis and along the ray through
/// `omega`. Small for generalized partial-slice monogenic functions.
pub fn monogenicity_residual<F>(f: F, bx: &SplitPoint, h: f64) -> Result<f64>
where
    F: Fn(&SplitPoint) -> Multivector,
{
    let sig = bx.sig();
    let r = bx.r();
    if r <= h {
        return Err(Error::Geometry { r, h });
    }
    let omega = bx.omega().expect("r > 0");
    let omega_mv = bx.omega_vector().expect("r > 0");
    let mut acc = Multivector::zero(sig);
    for axis in 0..=sig.p() {
        let mut xp = bx.x().to_vec();
        let mut xm = bx.x().to_vec();
        xp[axis] += h;
        xm[axis] -= h;
        let fp = f(&SplitPoint::new(sig, xp, bx.y().to_vec()));
        let fm = f(&SplitPoint::new(sig, xm, bx.y().to_vec()));
        let diff = (&fp - &fm).scale_real(0.5 / h);
        if axis == 0 {
            acc = &acc + &diff;
        } else {
            acc = &acc + &(&Multivector::generator(sig, axis) * &diff);
        }
    }
    let ray = |rr: f64| -> SplitPoint {
        SplitPoint::new(
            sig,
            bx.x().to_vec(),
            omega.iter().map(|w| rr * w).collect(),
        )
    };
    let radial = (&f(&ray(r + h)) - &f(&ray(r - h))).scale_real(0.5 / h);
    acc = &acc + &(&omega_mv * &radial);
    Ok(acc.norm())
}

/// Finite Taylor reconstruction `sum_k P_k(bx) d_k f0(0)`; equal to the
/// CK-extension for polynomial data.
pub fn taylor_reconstruction(f0: &CliffordPolynomial, bx: &SplitPoint) -> Multivector {
    let sig = f0.sig();
    let mut acc = Multivector::zero(sig);
    for (k, c) in f0.terms() {
        let spec = FueterPolynomialSpec::from_point(k.clone(), bx);
        let p = fueter_polynomial(sig, &spec, bx.x(), bx.r());
        // d_k f0(0) = k! c_k, multiplying from the right
        acc = &acc + &(&p * &c.scale_real(k.factorial()));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sig(p: usize, q: usize) -> Signature {
        Signature::new(p, q).unwrap()
    }

    fn random_point(s: Signature, rng: &mut ChaCha8Rng, rmin: f64, rmax: f64) -> SplitPoint {
        let x: Vec<f64> = (0..=s.p()).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let mut y: Vec<f64> = (0..s.q()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r == 0.0 {
            y[0] = rmin.max(0.5);
        } else {
            let target = rng.gen_range(rmin..rmax);
            for v in y.iter_mut() {
                *v *= target / r;
            }
        }
        SplitPoint::new(s, x, y)
    }

    #[test]
    fn sinhc_is_smooth_at_zero() {
        assert_eq!(sinhc(0.0), 1.0);
        assert_relative_eq!(sinhc(1e-5), 1.0 + 1e-10 / 6.0, max_relative = 1e-15);
        assert_relative_eq!(sinhc(0.5), 0.5f64.sinh() / 0.5, max_relative = 1e-15);
    }

    #[test]
    fn kernel_degenerate_cases() {
        let s = sig(1, 2);
        // y = 0: plain plane wave
        let bx = SplitPoint::new(s, vec![0.4, -0.2], vec![0.0, 0.0]);
        let xi = [1.1, 0.7];
        let e = kernel_e(&bx, &xi);
        let dot = 0.4f64 * 1.1 - 0.2 * 0.7;
        assert_relative_eq!(e.scalar_part().re, dot.cos(), max_relative = 1e-14);
        assert_relative_eq!(e.scalar_part().im, dot.sin(), max_relative = 1e-14);
        assert_eq!(e.max_grade(), 0);

        // xi = 0: the constant 1
        let bx = SplitPoint::new(s, vec![0.4, -0.2], vec![0.3, 0.9]);
        let e = kernel_e(&bx, &[0.0, 0.0]);
        assert!((&e - &Multivector::real_scalar(s, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn kernel_closed_form_in_the_plane_case() {
        // (p,q) = (0,1): e = e^{i x0 xi} (cosh(y xi) + i e1 sinh(y xi))
        let s = sig(0, 1);
        let (x0, y, xi) = (0.7, 0.9, -1.3);
        let bx = SplitPoint::new(s, vec![x0], vec![y]);
        let e = kernel_e(&bx, &[xi]);
        let phase = Complex64::from_polar(1.0, x0 * xi);
        let expect_scalar = phase * (y * xi).cosh();
        let expect_e1 = Complex64::new(0.0, 1.0) * phase * (y * xi).sinh();
        assert_relative_eq!(e.scalar_part().re, expect_scalar.re, max_relative = 1e-13);
        assert_relative_eq!(e.scalar_part().im, expect_scalar.im, max_relative = 1e-13);
        assert_relative_eq!(e.coeff(0b1).re, expect_e1.re, max_relative = 1e-13);
        assert_relative_eq!(e.coeff(0b1).im, expect_e1.im, max_relative = 1e-13);
    }

    #[test]
    fn kernel_matches_truncated_exponential_series() {
        // oracle: sum_m (y D_x)^m e^{i<x,xi>} / m! with
        // (y D_x)^m e^{i<x,xi>} = (y_mv (i xi_mv))^m e^{i<x,xi>}
        let s = sig(1, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let bx = random_point(s, &mut rng, 0.2, 1.2);
            let xi: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.2..1.2)).collect();
            let dot: f64 = bx.x().iter().zip(&xi).map(|(a, b)| a * b).sum();
            let phase = Complex64::from_polar(1.0, dot);
            let step = (&bx.y_vector() * &Multivector::paravector(s, &xi))
                .scale(Complex64::new(0.0, 1.0));
            let mut term = Multivector::real_scalar(s, 1.0);
            let mut series = Multivector::real_scalar(s, 1.0);
            for m in 1..=40 {
                term = (&term * &step).scale_real(1.0 / m as f64);
                series = &series + &term;
            }
            series = series.scale(phase);
            let e = kernel_e(&bx, &xi);
            assert!(
                relative_deviation(&e, &series) < 1e-10,
                "kernel vs series at {:?}",
                bx
            );
        }
    }

    #[test]
    fn kernel_identities_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for (p, q) in [(0, 1), (0, 2), (1, 1), (1, 2), (2, 1)] {
            let s = sig(p, q);
            for _ in 0..25 {
                let bx = random_point(s, &mut rng, 0.0, 1.5);
                let xi: Vec<f64> = (0..=p).map(|_| rng.gen_range(-1.5..1.5)).collect();
                let report = kernel_identity_suite(&bx, &xi);
                assert!(
                    report.pass(1e-10),
                    "(p,q)=({p},{q}) identity {} deviated {:.2e}",
                    report.worst(),
                    report.max_deviation()
                );
            }
        }
    }

    #[test]
    fn kernel_identities_at_y_zero_reduce_to_scalars() {
        let s = sig(1, 1);
        let bx = SplitPoint::new(s, vec![0.3, -0.8], vec![0.0]);
        let report = kernel_identity_suite(&bx, &[0.9, 0.4]);
        assert!(report.pass(1e-12));
    }

    #[test]
    fn ck_of_coordinate_is_fueter_variable() {
        let s = sig(1, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let bx = random_point(s, &mut rng, 0.3, 1.5);
        let eta = bx.omega().unwrap();
        let z = fueter_variables(s, &eta, bx.x(), bx.r());
        for l in 0..=s.p() {
            let f0 = CliffordPolynomial::scalar_monomial(s, MultiIndex::unit(2, l));
            let ck = ck_polynomial(&f0, &bx);
            assert!((&ck - &z[l]).norm() < 1e-14);
        }
        // constants extend to themselves
        let one = CliffordPolynomial::constant(s, Multivector::real_scalar(s, 1.0));
        assert!((&ck_polynomial(&one, &bx) - &Multivector::real_scalar(s, 1.0)).norm() == 0.0);
    }

    /// `<x, xi>^k` as a scalar polynomial via multinomial expansion.
    fn inner_power(s: Signature, xi: &[f64], k: u32) -> CliffordPolynomial {
        let mut poly = CliffordPolynomial::constant(s, Multivector::real_scalar(s, 1.0));
        let mut linear = CliffordPolynomial::zero(s);
        for (i, &c) in xi.iter().enumerate() {
            linear.add_term(MultiIndex::unit(xi.len(), i), Multivector::real_scalar(s, c));
        }
        for _ in 0..k {
            poly = poly.mul_poly(&linear);
        }
        poly
    }

    #[test]
    fn ck_of_plane_wave_powers() {
        // CK[<x,xi>^k](bx) = (<x,xi> + y xi)^k
        let s = sig(1, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for k in 0..=4u32 {
            let bx = random_point(s, &mut rng, 0.2, 1.4);
            let xi: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let f0 = inner_power(s, &xi, k);
            let ck = ck_polynomial(&f0, &bx);
            let dot: f64 = bx.x().iter().zip(&xi).map(|(a, b)| a * b).sum();
            let base = &Multivector::real_scalar(s, dot)
                + &(&bx.y_vector() * &Multivector::paravector(s, &xi));
            let expect = base.powi(k as usize);
            assert!(
                relative_deviation(&ck, &expect) < 1e-13,
                "k = {k}: dev = {:.2e}",
                relative_deviation(&ck, &expect)
            );
        }
    }

    #[test]
    fn fueter_polynomial_plane_case_closed_form() {
        // p = 0: P_k(x0, r) = (x0 + r eta)^k / k!
        let s = sig(0, 2);
        let eta = vec![0.6, 0.8];
        for k in 0..=5u32 {
            let spec = FueterPolynomialSpec::new(MultiIndex::new(vec![k]), eta.clone());
            let p = fueter_polynomial(s, &spec, &[0.7], 1.3);
            let base = &Multivector::real_scalar(s, 0.7)
                + &Multivector::one_vector(s, 0, &[1.3 * 0.6, 1.3 * 0.8]);
            let expect = base
                .powi(k as usize)
                .scale_real(1.0 / crate::function_algebra::factorial(k));
            assert!((&p - &expect).norm() < 1e-13 * (1.0 + expect.norm()));
        }
    }

    #[test]
    fn ck_monomial_equals_scaled_fueter() {
        // CK[x^k] = k! P_k for |k| <= 5
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for (p, q) in [(0usize, 1usize), (1, 1), (1, 2)] {
            let s = sig(p, q);
            for k in crate::function_algebra::multi_indices_up_to(p + 1, 5) {
                let bx = random_point(s, &mut rng, 0.2, 1.5);
                let f0 = CliffordPolynomial::scalar_monomial(s, k.clone());
                let ck = ck_polynomial(&f0, &bx);
                let spec = FueterPolynomialSpec::from_point(k.clone(), &bx);
                let fueter = fueter_polynomial(s, &spec, bx.x(), bx.r()).scale_real(k.factorial());
                assert!(
                    relative_deviation(&ck, &fueter) < 1e-12,
                    "(p,q)=({p},{q}) k={:?}",
                    k.components()
                );
            }
        }
    }

    #[test]
    fn fueter_norm_identity_and_estimate() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let s = sig(1, 2);
        for k in crate::function_algebra::multi_indices_up_to(2, 4) {
            let bx = random_point(s, &mut rng, 0.3, 1.5);
            let spec = FueterPolynomialSpec::from_point(k.clone(), &bx);
            let p = fueter_polynomial(s, &spec, bx.x(), bx.r());
            // P_k bar(P_k) = |P_k|^2 for real-restriction data
            let prod = &p * &p.clifford_conjugate();
            let expect = Multivector::real_scalar(s, p.norm() * p.norm());
            assert!(
                (&prod - &expect).norm() <= 1e-12 * (1.0 + p.norm() * p.norm()),
                "k = {:?}",
                k.components()
            );
            // |P_k| <= prod |z_l|^{k_l} / k!
            let z = fueter_variables(s, &bx.omega().unwrap(), bx.x(), bx.r());
            let mut bound = 1.0 / k.factorial();
            for (l, &kl) in k.components().iter().enumerate() {
                bound *= z[l].norm().powi(kl as i32);
            }
            assert!(p.norm() <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn taylor_reconstruction_matches_ck() {
        let s = sig(1, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        // random complex Clifford coefficients up to degree 5
        let mut f0 = CliffordPolynomial::zero(s);
        for k in crate::function_algebra::multi_indices_up_to(2, 5) {
            let mut c = Multivector::zero(s);
            for mask in 0..s.dim() {
                c.set_coeff(
                    mask,
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                );
            }
            f0.add_term(k, c);
        }
        for _ in 0..5 {
            let bx = random_point(s, &mut rng, 0.2, 1.5);
            let ck = ck_polynomial(&f0, &bx);
            let taylor = taylor_reconstruction(&f0, &bx);
            assert!(relative_deviation(&ck, &taylor) < 1e-12);
        }
        // x0 x1 reconstructs through P_{(1,1)} alone
        let m11 = CliffordPolynomial::scalar_monomial(s, MultiIndex::new(vec![1, 1]));
        let bx = random_point(s, &mut rng, 0.4, 1.2);
        assert!(relative_deviation(&ck_polynomial(&m11, &bx), &taylor_reconstruction(&m11, &bx)) < 1e-13);
    }

    #[test]
    fn ck_gaussian_restriction_and_routes() {
        let s = sig(0, 1);
        let f0 = HermiteGaussian::monomial_gaussian(s, MultiIndex::new(vec![2]), 0.25);
        let ctrl = CkCtrl::default();
        // restriction y = 0 returns f0 exactly
        let bx0 = SplitPoint::new(s, vec![0.8], vec![0.0]);
        for route in [CkRoute::DeltaSeries, CkRoute::Fourier] {
            let v = ck_hermite_gaussian(&f0, &bx0, route, &ctrl).unwrap();
            let expect = f0.evaluate(&[0.8]);
            assert!(relative_deviation(&v, &expect) < 1e-10);
        }
        // cross-route agreement off the plane
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..10 {
            let bx = random_point(s, &mut rng, 0.2, 2.0);
            let a = ck_hermite_gaussian(&f0, &bx, CkRoute::DeltaSeries, &ctrl).unwrap();
            let b = ck_hermite_gaussian(&f0, &bx, CkRoute::Fourier, &ctrl).unwrap();
            assert!(relative_deviation(&a, &b) < 1e-8, "dev {:.2e}", relative_deviation(&a, &b));
        }
    }

    #[test]
    fn ck_gaussian_matches_holomorphic_continuation() {
        // (p,q) = (0,1): CK[e^{-x^2/4}] is e^{-z^2/4} continued to z = x + i y
        let s = sig(0, 1);
        let f0 = HermiteGaussian::gaussian(s, 0.25);
        let ctrl = CkCtrl::default();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..20 {
            let x = rng.gen_range(-2.0..2.0);
            let y = rng.gen_range(-2.0..2.0f64);
            if y.abs() < 1e-3 {
                continue;
            }
            let bx = SplitPoint::new(s, vec![x], vec![y]);
            let got = ck_hermite_gaussian(&f0, &bx, CkRoute::DeltaSeries, &ctrl).unwrap();
            let z = Complex64::new(x, y);
            let w = (-z * z / 4.0).exp();
            assert_relative_eq!(got.scalar_part().re, w.re, max_relative = 1e-10, epsilon = 1e-12);
            assert_relative_eq!(got.coeff(0b1).re, w.im, max_relative = 1e-10, epsilon = 1e-12);
        }
    }

    #[test]
    fn ck_series_error_paths() {
        let s = sig(0, 1);
        let poly = HermiteGaussian::monomial_gaussian(s, MultiIndex::new(vec![1]), 0.0);
        let bx = SplitPoint::new(s, vec![0.0], vec![1.0]);
        assert!(matches!(
            ck_hermite_gaussian(&poly, &bx, CkRoute::DeltaSeries, &CkCtrl::default()),
            Err(Error::NotInFamily(_))
        ));
        // starved term cap reports the achieved residual
        let f0 = HermiteGaussian::gaussian(s, 0.25);
        let far = SplitPoint::new(s, vec![0.0], vec![6.0]);
        let tight = CkCtrl {
            max_terms: 3,
            ..CkCtrl::default()
        };
        match ck_hermite_gaussian(&f0, &far, CkRoute::DeltaSeries, &tight) {
            Err(Error::SeriesNotConverged { residual, .. }) => assert!(residual > 0.0),
            other => panic!("expected series cap error, got {other:?}"),
        }
    }

    #[test]
    fn monogenicity_of_kernel_and_ck() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let h = 1e-4;
        for (p, q) in [(0usize, 1usize), (1, 1), (1, 2)] {
            let s = sig(p, q);
            for _ in 0..10 {
                let bx = random_point(s, &mut rng, 0.3, 1.5);
                let xi: Vec<f64> = (0..=p).map(|_| rng.gen_range(-1.2..1.2)).collect();
                let res = monogenicity_residual(|pt| kernel_e(pt, &xi), &bx, h).unwrap();
                let scale = 1.0 + kernel_e(&bx, &xi).norm();
                assert!(res <= 1e-6 * scale, "kernel residual {res:.2e}");

                let k = MultiIndex::new(vec![2; p + 1].into_iter().take(p + 1).collect());
                let f0 = CliffordPolynomial::scalar_monomial(s, k);
                let res = monogenicity_residual(|pt| ck_polynomial(&f0, pt), &bx, h).unwrap();
                let scale = 1.0 + ck_polynomial(&f0, &bx).norm();
                assert!(res <= 1e-6 * scale, "ck residual {res:.2e}");
            }
        }
        // constants have residual at rounding level
        let s = sig(1, 1);
        let bx = SplitPoint::new(s, vec![0.2, 0.4], vec![0.9]);
        let c = Multivector::real_scalar(s, 2.5);
        let res = monogenicity_residual(|_| c.clone(), &bx, h).unwrap();
        assert!(res < 1e-11);
        // geometry guard
        let near = SplitPoint::new(s, vec![0.0, 0.0], vec![1e-6]);
        assert!(matches!(
            monogenicity_residual(|_| c.clone(), &near, h),
            Err(Error::Geometry { .. })
        ));
    }
}
