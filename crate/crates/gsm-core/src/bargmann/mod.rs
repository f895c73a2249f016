//! The coherent-state (Segal-Bargmann) transform `U_{p,q}` onto the
//! Hilbert space of generalized partial-slice monogenic functions that are
//! square integrable for `d mu = c exp(-|y|^2)|y|^{1-q} dx dy`.
//!
//! Two independent routes compute `U_{p,q}[f]`:
//!
//! * the frequency-space integral
//!   `(2 pi)^{-(p+1)/2} int exp(-|xi|^2/2) e(bx, xi) f^(xi) dxi`
//!   by Gauss quadrature against the exact transform `f^`;
//! * the factorization `CK . exp(Delta_x/2)` using the exact heat
//!   semigroup and the CK Laplacian series.
//!
//! Both must agree, and `psi_k = CK[x^k exp(-|x|^2/4)]`, the image of the
//! Hermite basis up to the factor `2^{(p+1)/2}`, is an orthogonal basis of
//! the target space. The suites here check the transform's isometry, the
//! basis Gram matrix, and the position-momentum conjugation identity
//! `U . (X - iP) . U^{-1} = CK[x . ]` by tensor quadrature.

mod series;

pub use series::CkSeriesEvaluator;

use crate::ck::{ck_hermite_gaussian, kernel_e, relative_deviation, CkCtrl, CkRoute};
use crate::clifford::{Multivector, Signature, SplitPoint};
use crate::function_algebra::{
    lebesgue_inner_product, multi_indices_up_to, phi_k, HermiteGaussian, MultiIndex,
};
use crate::quadrature::{
    full_space_nodes, hermite_nodes, x_space_rule, y_space_rule, MeasureMu, QuadratureRule,
};
use crate::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::Arc;

const GRAM_CHUNK: usize = 1024;

/// Controls for transform evaluation.
#[derive(Debug, Clone, Copy)]
pub struct TransformCtrl {
    /// Per-axis node count of the frequency rule.
    pub xi_order: usize,
    /// Controls of the CK series route.
    pub series: CkCtrl,
    /// Largest `|y|` the frequency quadrature is validated for.
    pub region: f64,
}

impl Default for TransformCtrl {
    fn default() -> Self {
        Self {
            xi_order: 60,
            series: CkCtrl::default(),
            region: 4.0,
        }
    }
}

/// `U_{p,q}[f](bx)` by the frequency-space route:
/// `(2 pi)^{-(p+1)/2} int exp(-|xi|^2/2) e(bx, xi) f^(xi) dxi`.
pub fn segal_bargmann(
    f: &HermiteGaussian,
    bx: &SplitPoint,
    ctrl: &TransformCtrl,
) -> Result<Multivector> {
    let sig = f.sig();
    if f.rate() <= 0.0 {
        return Err(Error::NotInFamily(f.rate()));
    }
    if bx.r() > ctrl.region {
        return Err(Error::RegionExceeded(bx.r(), ctrl.region));
    }
    let dim = sig.p() + 1;
    if dim > 3 {
        return Err(Error::Capability(format!(
            "frequency quadrature supports p <= 2, got p = {}",
            sig.p()
        )));
    }
    let hat = f.fourier_transform()?;
    // total Gaussian rate of exp(-|xi|^2/2) * f^(xi)
    let c = 0.5 + hat.rate();
    let s = c.sqrt();
    let (nodes, weights) = hermite_nodes(ctrl.xi_order)?;
    let mut acc = Multivector::zero(sig);
    let mut idx = vec![0usize; dim];
    let mut xi = vec![0.0; dim];
    let count = nodes.len().pow(dim as u32);
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

/// `U_{p,q}[f](bx)` by the factorization `CK . exp(Delta_x/2)`.
pub fn segal_bargmann_ck_route(
    f: &HermiteGaussian,
    bx: &SplitPoint,
    ctrl: &TransformCtrl,
) -> Result<Multivector> {
    let flowed = f.heat_semigroup(1.0)?;
    ck_hermite_gaussian(&flowed, bx, CkRoute::DeltaSeries, &ctrl.series)
}

/// Where a [`GsmFunction`] came from.
#[derive(Debug, Clone)]
pub enum Provenance {
    /// `psi_k = CK[x^k exp(-|x|^2/4)]`.
    PsiK(MultiIndex),
    /// Transform of a named source function.
    TransformOf(String),
    /// CK-extension of a named boundary function.
    CkOf(String),
}

enum Backend {
    Series(Arc<CkSeriesEvaluator>),
    PointSeries { f0: HermiteGaussian, ctrl: CkCtrl },
}

/// A generalized partial-slice monogenic function with a pointwise
/// evaluator; cheap to clone and safe to share across workers.
pub struct GsmFunction {
    sig: Signature,
    provenance: Provenance,
    backend: Arc<Backend>,
}

impl Clone for GsmFunction {
    fn clone(&self) -> Self {
        Self {
            sig: self.sig,
            provenance: self.provenance.clone(),
            backend: self.backend.clone(),
        }
    }
}

impl GsmFunction {
    /// CK-extension of Gaussian-weighted data as an evaluable function.
    /// Uses the shared-radial series engine when the data qualifies
    /// (`rate = 1/4`, scalar coefficients, `p <= 1`), else falls back to
    /// the per-point series.
    pub fn ck_of(f0: HermiteGaussian, provenance: Provenance, ctrl: &CkCtrl) -> Self {
        let sig = f0.sig();
        let backend = match CkSeriesEvaluator::new(&f0) {
            Ok(ev) => Backend::Series(Arc::new(ev)),
            Err(_) => Backend::PointSeries {
                f0,
                ctrl: CkCtrl {
                    max_terms: ctrl.max_terms.max(400),
                    ..*ctrl
                },
            },
        };
        Self {
            sig,
            provenance,
            backend: Arc::new(backend),
        }
    }

    /// `psi_k = CK[x^k exp(-|x|^2/4)]`.
    pub fn psi_k(sig: Signature, k: &MultiIndex, ctrl: &CkCtrl) -> Self {
        let f0 = HermiteGaussian::monomial_gaussian(sig, k.clone(), 0.25);
        Self::ck_of(f0, Provenance::PsiK(k.clone()), ctrl)
    }

    /// `U_{p,q}[phi_k]` through the heat-then-CK factorization; equals
    /// `2^{-(p+1)/2} psi_k` by construction of the flow, which the suites
    /// verify against the frequency route separately.
    pub fn transform_of_phi(sig: Signature, k: &MultiIndex, ctrl: &CkCtrl) -> Result<Self> {
        let flowed = phi_k(sig, k).heat_semigroup(1.0)?;
        Ok(Self::ck_of(
            flowed,
            Provenance::TransformOf(format!("phi_{:?}", k.components())),
            ctrl,
        ))
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn eval(&self, bx: &SplitPoint) -> Multivector {
        match self.backend.as_ref() {
            Backend::Series(ev) => ev.eval(bx),
            Backend::PointSeries { f0, ctrl } => {
                ck_hermite_gaussian(f0, bx, CkRoute::DeltaSeries, ctrl)
                    .expect("CK series did not converge")
            }
        }
    }

    /// Computes the shared radial tables for a set of radii up front, in
    /// parallel, so grid evaluation threads do not duplicate the work.
    pub fn prewarm(&self, radii: &[f64]) {
        if let Backend::Series(_) = self.backend.as_ref() {
            let sig = self.sig;
            radii.par_iter().for_each(|&r| {
                let mut y = vec![0.0; sig.q()];
                y[0] = r;
                let bx = SplitPoint::new(sig, vec![0.0; sig.p() + 1], y);
                let _ = self.eval(&bx);
            });
        }
    }
}

/// Gram matrix of a family of functions against `d mu`, evaluated node by
/// node with a fixed-order chunked reduction.
pub fn mu_gram(
    funcs: &[GsmFunction],
    mu: &MeasureMu,
    x_rule: &QuadratureRule,
    y_rule: &QuadratureRule,
) -> Vec<Vec<Complex64>> {
    let sig = funcs[0].sig();
    let nodes = full_space_nodes(sig, x_rule, y_rule);
    let mut radii: Vec<f64> = (0..y_rule.len())
        .map(|j| y_rule.node(j).iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    radii.dedup();
    for f in funcs {
        f.prewarm(&radii);
    }

    let n = funcs.len();
    let chunks: Vec<Vec<Complex64>> = (0..nodes.len().div_ceil(GRAM_CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * GRAM_CHUNK;
            let hi = (lo + GRAM_CHUNK).min(nodes.len());
            let mut local = vec![Complex64::new(0.0, 0.0); n * n];
            let mut values: Vec<Multivector> = Vec::with_capacity(n);
            for (bx, w) in &nodes[lo..hi] {
                values.clear();
                for f in funcs {
                    values.push(f.eval(bx));
                }
                for k in 0..n {
                    for l in k..n {
                        let v = values[k]
                            .inner_product(&values[l])
                            .expect("same signature");
                        local[k * n + l] += *w * v;
                    }
                }
            }
            local
        })
        .collect();
    let mut total = vec![Complex64::new(0.0, 0.0); n * n];
    for chunk in &chunks {
        for (t, v) in total.iter_mut().zip(chunk.iter()) {
            *t += v;
        }
    }
    let c = mu.normalization();
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for k in 0..n {
        for l in k..n {
            let v = total[k * n + l] * c;
            gram[k][l] = v;
            gram[l][k] = v.conj();
        }
    }
    gram
}

/// Comparison of a measured `mu`-Gram matrix against its exact target.
#[derive(Debug, Clone)]
pub struct GramReport {
    pub indices: Vec<MultiIndex>,
    pub measured: Vec<Vec<Complex64>>,
    pub expected: Vec<Vec<f64>>,
    /// Largest relative error on the diagonal.
    pub max_diag_rel: f64,
    /// Largest off-diagonal magnitude scaled by `sqrt(B_kk B_ll)`.
    pub max_offdiag_scaled: f64,
    /// Largest scaled deviation over all entries.
    pub max_deviation: f64,
}

impl GramReport {
    pub fn pass(&self, tol: f64) -> bool {
        self.max_deviation <= tol
    }
}

fn compare_gram(
    indices: Vec<MultiIndex>,
    measured: Vec<Vec<Complex64>>,
    expected: Vec<Vec<f64>>,
) -> GramReport {
    let n = indices.len();
    let mut max_diag_rel = 0.0f64;
    let mut max_offdiag_scaled = 0.0f64;
    let mut max_deviation = 0.0f64;
    for k in 0..n {
        for l in 0..n {
            let scale = (expected[k][k] * expected[l][l]).sqrt();
            let dev = (measured[k][l] - Complex64::new(expected[k][l], 0.0)).norm() / scale;
            max_deviation = max_deviation.max(dev);
            if k == l {
                max_diag_rel = max_diag_rel.max(dev);
            } else {
                max_offdiag_scaled = max_offdiag_scaled.max(dev);
            }
        }
    }
    GramReport {
        indices,
        measured,
        expected,
        max_diag_rel,
        max_offdiag_scaled,
        max_deviation,
    }
}

/// Quadrature orders shared by the verification suites.
#[derive(Debug, Clone, Copy)]
pub struct SuiteOrders {
    pub x_order: usize,
    pub xi_order: usize,
    pub radial_order: usize,
    pub sphere_order: usize,
}

impl Default for SuiteOrders {
    fn default() -> Self {
        Self {
            x_order: 40,
            xi_order: 60,
            radial_order: 80,
            sphere_order: 16,
        }
    }
}

/// Isometry check: the `mu`-Gram of `{U[phi_k]}` must equal the
/// `L^2(dx)`-Gram of `{phi_k}`, whose entries are
/// `pi^{(p+1)/2} 2^{|k|} k! delta_{k,l}`.
pub fn verify_isometry(
    sig: Signature,
    max_degree: u32,
    orders: &SuiteOrders,
) -> Result<GramReport> {
    let mu = MeasureMu::new(sig.p(), sig.q())?;
    let x_rule = x_space_rule(sig, orders.x_order)?;
    let y_rule = y_space_rule(sig.q(), orders.radial_order, orders.sphere_order)?;
    let indices = multi_indices_up_to(sig.p() + 1, max_degree);
    let ctrl = CkCtrl::default();
    let funcs: Vec<GsmFunction> = indices
        .iter()
        .map(|k| GsmFunction::transform_of_phi(sig, k, &ctrl))
        .collect::<Result<_>>()?;
    let measured = mu_gram(&funcs, &mu, &x_rule, &y_rule);
    let expected: Vec<Vec<f64>> = indices
        .iter()
        .map(|k| {
            indices
                .iter()
                .map(|l| {
                    lebesgue_inner_product(&phi_k(sig, k), &phi_k(sig, l))
                        .expect("positive rates")
                        .re
                })
                .collect()
        })
        .collect();
    Ok(compare_gram(indices, measured, expected))
}

/// Basis check: `<psi_k, psi_l>_mu = 2^{p+1} pi^{(p+1)/2} 2^{|k|} k!
/// delta_{k,l}`, plus spot checks that right blade multiples stay
/// orthogonal.
#[derive(Debug, Clone)]
pub struct BasisReport {
    pub gram: GramReport,
    /// (description, scaled deviation) of blade-multiplied spot checks.
    pub blade_checks: Vec<(String, f64)>,
}

impl BasisReport {
    pub fn pass(&self, tol: f64) -> bool {
        self.gram.pass(tol) && self.blade_checks.iter().all(|(_, d)| *d <= tol)
    }

    pub fn max_deviation(&self) -> f64 {
        self.blade_checks
            .iter()
            .map(|(_, d)| *d)
            .fold(self.gram.max_deviation, f64::max)
    }
}

pub fn verify_basis_orthogonality(
    sig: Signature,
    max_degree: u32,
    orders: &SuiteOrders,
) -> Result<BasisReport> {
    let mu = MeasureMu::new(sig.p(), sig.q())?;
    let x_rule = x_space_rule(sig, orders.x_order)?;
    let y_rule = y_space_rule(sig.q(), orders.radial_order, orders.sphere_order)?;
    let indices = multi_indices_up_to(sig.p() + 1, max_degree);
    let ctrl = CkCtrl::default();
    let funcs: Vec<GsmFunction> = indices
        .iter()
        .map(|k| GsmFunction::psi_k(sig, k, &ctrl))
        .collect();
    let measured = mu_gram(&funcs, &mu, &x_rule, &y_rule);
    let scale = 2.0f64.powi(sig.p() as i32 + 1);
    let expected: Vec<Vec<f64>> = indices
        .iter()
        .map(|k| {
            indices
                .iter()
                .map(|l| {
                    scale
                        * lebesgue_inner_product(&phi_k(sig, k), &phi_k(sig, l))
                            .expect("positive rates")
                            .re
                })
                .collect()
        })
        .collect();
    let gamma0 = expected[0][0];
    let gamma1 = if indices.len() >= 2 { expected[1][1] } else { gamma0 };
    let two_plus = indices.len() >= 2;
    let gram = compare_gram(indices, measured, expected);

    // Right multiplication by blades permutes and phases coefficients, so
    // {psi_k e_A} stays orthogonal; spot-check a few pairs by quadrature.
    let mut blade_checks = Vec::new();
    if two_plus {
        let e1 = Multivector::generator(sig, 1);
        let psi0 = funcs[0].clone();
        let psi1 = funcs[1].clone();
        let mut cases: Vec<(String, GsmEvalBlade, GsmEvalBlade, f64)> = vec![
            (
                "norm of psi_0 e_1".into(),
                (psi0.clone(), e1.clone()),
                (psi0.clone(), e1.clone()),
                gamma0,
            ),
            (
                "psi_0 e_1 vs psi_1 e_1".into(),
                (psi0.clone(), e1.clone()),
                (psi1.clone(), e1.clone()),
                0.0,
            ),
        ];
        if sig.n() >= 2 {
            let e_n = Multivector::generator(sig, sig.n());
            cases.push((
                "psi_0 e_1 vs psi_0 e_n".into(),
                (psi0.clone(), e1.clone()),
                (psi0.clone(), e_n),
                0.0,
            ));
        }
        for (name, (fa, ba), (fb, bb), target) in cases {
            let got = crate::quadrature::mu_inner_product(
                |bx: &SplitPoint| &fa.eval(bx) * &ba,
                |bx: &SplitPoint| &fb.eval(bx) * &bb,
                sig,
                &mu,
                &x_rule,
                &y_rule,
            );
            let dev = (got - Complex64::new(target, 0.0)).norm() / (gamma0 * gamma1).sqrt().max(1.0);
            blade_checks.push((name, dev));
        }
    }
    Ok(BasisReport { gram, blade_checks })
}

type GsmEvalBlade = (GsmFunction, Multivector);

/// The combination `(X - iP) f = x f - D_x f` of the position and momentum
/// operators, exact in the family.
pub fn apply_x_minus_ip(f: &HermiteGaussian) -> HermiteGaussian {
    f.mul_paravector_x().sub(&f.dirac_dx())
}

/// Position-momentum conjugation check at sampled points:
/// `2^{(p+1)/2} U[(X - iP) phi_k](bx)` against `CK[x . x^k e^{-|x|^2/4}](bx)`.
#[derive(Debug, Clone)]
pub struct SchrodingerReport {
    pub k: MultiIndex,
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
}

pub fn verify_schrodinger_representation(
    sig: Signature,
    k: &MultiIndex,
    points: &[SplitPoint],
    ctrl: &TransformCtrl,
) -> Result<SchrodingerReport> {
    let lhs_input = apply_x_minus_ip(&phi_k(sig, k));
    let rhs_input = HermiteGaussian::monomial_gaussian(sig, k.clone(), 0.25).mul_paravector_x();
    let scale = 2.0f64.powf((sig.p() as f64 + 1.0) / 2.0);
    let mut deviations = Vec::with_capacity(points.len());
    for bx in points {
        let lhs = segal_bargmann(&lhs_input, bx, ctrl)?.scale_real(scale);
        let rhs = ck_hermite_gaussian(&rhs_input, bx, CkRoute::DeltaSeries, &ctrl.series)?;
        deviations.push(relative_deviation(&lhs, &rhs));
    }
    let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
    Ok(SchrodingerReport {
        k: k.clone(),
        deviations,
        max_deviation,
    })
}

/// Seeded sample points with `|x| <= 2` and `0.1 <= |y| <= 2`, inside the
/// quadrature validity region and away from the `y = 0` coordinate
/// singularity of `omega`.
pub fn sample_points(sig: Signature, count: usize, seed: u64) -> Vec<SplitPoint> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let bound = 2.0 / ((sig.p() + 1) as f64).sqrt();
    (0..count)
        .map(|_| {
            let x: Vec<f64> = (0..=sig.p()).map(|_| rng.gen_range(-bound..bound)).collect();
            let mut y: Vec<f64> = (0..sig.q()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let r: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            let target = rng.gen_range(0.1..2.0);
            if r == 0.0 {
                y[0] = target;
            } else {
                for v in y.iter_mut() {
                    *v *= target / r;
                }
            }
            SplitPoint::new(sig, x, y)
        })
        .collect()
}
