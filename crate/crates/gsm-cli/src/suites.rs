//! The named verification suites behind `gsm verify`.
//!
//! Each suite samples seeded points with the chacha8 generator, runs the
//! library checks at the configured orders, and returns one record per
//! identity with its worst observed deviation.

use crate::output::CheckRecord;
use gsm_core::bargmann::{
    sample_points, verify_basis_orthogonality, verify_isometry,
    verify_schrodinger_representation, SuiteOrders, TransformCtrl,
};
use gsm_core::ck::{
    ck_hermite_gaussian, ck_polynomial, fueter_polynomial, kernel_e, kernel_identity_suite,
    monogenicity_residual, relative_deviation, taylor_reconstruction, CkCtrl, CkRoute,
    FueterPolynomialSpec,
};
use gsm_core::clifford::{Multivector, Signature, SplitPoint};
use gsm_core::function_algebra::{
    multi_indices_up_to, CliffordPolynomial, HermiteGaussian, MultiIndex,
};
use gsm_core::quadrature::{half_line_plain_rule, sphere_area, y_space_rule, MeasureMu};
use gsm_core::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Shared suite configuration assembled from the CLI flags.
#[derive(Debug, Clone, Copy)]
pub struct RunCfg {
    pub sig: Signature,
    pub max_degree: u32,
    pub orders: SuiteOrders,
    pub tol: Option<f64>,
    pub seed: u64,
}

impl RunCfg {
    fn headline(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

fn random_mv(sig: Signature, rng: &mut ChaCha8Rng) -> Multivector {
    let mut mv = Multivector::zero(sig);
    for mask in 0..sig.dim() {
        mv.set_coeff(
            mask,
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        );
    }
    mv
}

fn random_point(sig: Signature, rng: &mut ChaCha8Rng, rmin: f64, rmax: f64) -> SplitPoint {
    let x: Vec<f64> = (0..=sig.p()).map(|_| rng.gen_range(-1.5..1.5)).collect();
    let mut y: Vec<f64> = (0..sig.q()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let r: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    let target = rng.gen_range(rmin.max(1e-3)..rmax);
    if r == 0.0 {
        y[0] = target;
    } else {
        for v in y.iter_mut() {
            *v *= target / r;
        }
    }
    SplitPoint::new(sig, x, y)
}

/// Algebra laws at the configured signature. Sample counts shrink with
/// the blade count so large algebras stay interactive.
pub fn clifford_suite(cfg: &RunCfg) -> Result<Vec<CheckRecord>> {
    let sig = cfg.sig;
    let n = sig.n();
    let samples = if n <= 6 {
        1000
    } else if n <= 9 {
        200
    } else {
        25
    };
    let tol = cfg.headline(1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let amp = 2.0f64.powf(n as f64 / 2.0);
    let (mut triangle, mut bound, mut assoc, mut anti, mut para) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..samples {
        let a = random_mv(sig, &mut rng);
        let b = random_mv(sig, &mut rng);
        let c = random_mv(sig, &mut rng);
        triangle = triangle.max((&a + &b).norm() - (a.norm() + b.norm()));
        let ab = &a * &b;
        bound = bound.max((ab.norm() - amp * a.norm() * b.norm()) / (amp * a.norm() * b.norm()));
        assoc = assoc.max(relative_deviation(&(&ab * &c), &(&a * &(&b * &c))));

        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let um = Multivector::one_vector(sig, 0, &u);
        let vm = Multivector::one_vector(sig, 0, &v);
        let dot: f64 = u.iter().zip(&v).map(|(x, y)| x * y).sum();
        let target = Multivector::real_scalar(sig, -2.0 * dot);
        anti = anti.max((&(&(&um * &vm) + &(&vm * &um)) - &target).norm() / (1.0 + target.norm()));

        let pv: Vec<f64> = (0..=sig.p()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let lambda = Multivector::paravector(sig, &pv);
        para = para.max(
            ((&lambda * &b).norm() - lambda.norm() * b.norm()).abs()
                / (lambda.norm() * b.norm()).max(1e-30),
        );
    }
    Ok(vec![
        CheckRecord::new("triangle inequality", "algebra.triangle", triangle.max(0.0), tol),
        CheckRecord::new("product norm bound", "algebra.product-bound", bound.max(0.0), tol),
        CheckRecord::new("associativity", "algebra.associativity", assoc, tol),
        CheckRecord::new("one-vector anticommutation", "algebra.anticommutation", anti, tol),
        CheckRecord::new(
            "paravector norm multiplicativity",
            "algebra.paravector-norm",
            para,
            tol,
        ),
    ])
}

/// The four exponential-kernel identities plus the finite-difference
/// monogenicity residual, at seeded points.
pub fn kernel_suite(cfg: &RunCfg) -> Result<Vec<CheckRecord>> {
    let sig = cfg.sig;
    let tol = cfg.headline(1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst: std::collections::BTreeMap<&'static str, f64> = Default::default();
    for _ in 0..200 {
        let bx = random_point(sig, &mut rng, 0.0, 1.5);
        let xi: Vec<f64> = (0..=sig.p()).map(|_| rng.gen_range(-1.5..1.5)).collect();
        for check in kernel_identity_suite(&bx, &xi).checks {
            let slot = worst.entry(check.name).or_insert(0.0);
            *slot = slot.max(check.deviation);
        }
    }
    let mut records: Vec<CheckRecord> = worst
        .iter()
        .map(|(name, dev)| CheckRecord::new(name, &format!("kernel.{name}"), *dev, tol))
        .collect();

    let mut residual = 0.0f64;
    for _ in 0..100 {
        let bx = random_point(sig, &mut rng, 0.3, 1.5);
        let xi: Vec<f64> = (0..=sig.p()).map(|_| rng.gen_range(-1.2..1.2)).collect();
        let res = monogenicity_residual(|pt| kernel_e(pt, &xi), &bx, 1e-4)?;
        residual = residual.max(res / (1.0 + kernel_e(&bx, &xi).norm()));
    }
    records.push(CheckRecord::new(
        "kernel monogenicity residual",
        "kernel.monogenicity",
        residual,
        1e-6,
    ));
    Ok(records)
}

/// CK-extension suite: Fueter-polynomial match, plane-wave closed form,
/// Taylor reconstruction, and dual-route agreement.
pub fn ck_suite(cfg: &RunCfg) -> Result<Vec<CheckRecord>> {
    let sig = cfg.sig;
    if sig.p() > 2 {
        return Err(Error::Capability(
            "ck suite quadrature route supports p <= 2".into(),
        ));
    }
    let exact_tol = cfg.headline(1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut fueter_dev = 0.0f64;
    for k in multi_indices_up_to(sig.p() + 1, 5) {
        let bx = random_point(sig, &mut rng, 0.2, 1.5);
        let f0 = CliffordPolynomial::scalar_monomial(sig, k.clone());
        let ck = ck_polynomial(&f0, &bx);
        let spec = FueterPolynomialSpec::from_point(k.clone(), &bx);
        let fueter = fueter_polynomial(sig, &spec, bx.x(), bx.r()).scale_real(k.factorial());
        fueter_dev = fueter_dev.max(relative_deviation(&ck, &fueter));
    }

    let mut plane_dev = 0.0f64;
    for k in 0..=4u32 {
        let bx = random_point(sig, &mut rng, 0.2, 1.5);
        let xi: Vec<f64> = (0..=sig.p()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut linear = CliffordPolynomial::zero(sig);
        for (i, &c) in xi.iter().enumerate() {
            linear.add_term(MultiIndex::unit(sig.p() + 1, i), Multivector::real_scalar(sig, c));
        }
        let mut f0 = CliffordPolynomial::constant(sig, Multivector::real_scalar(sig, 1.0));
        for _ in 0..k {
            f0 = f0.mul_poly(&linear);
        }
        let dot: f64 = bx.x().iter().zip(&xi).map(|(a, b)| a * b).sum();
        let base = &Multivector::real_scalar(sig, dot)
            + &(&bx.y_vector() * &Multivector::paravector(sig, &xi));
        plane_dev = plane_dev.max(relative_deviation(
            &ck_polynomial(&f0, &bx),
            &base.powi(k as usize),
        ));
    }

    let mut taylor_dev = 0.0f64;
    let mut f0 = CliffordPolynomial::zero(sig);
    for k in multi_indices_up_to(sig.p() + 1, 5) {
        f0.add_term(k, random_mv(sig, &mut rng));
    }
    for _ in 0..3 {
        let bx = random_point(sig, &mut rng, 0.2, 1.5);
        taylor_dev = taylor_dev.max(relative_deviation(
            &ck_polynomial(&f0, &bx),
            &taylor_reconstruction(&f0, &bx),
        ));
    }

    let ctrl = CkCtrl {
        xi_order: cfg.orders.xi_order,
        ..CkCtrl::default()
    };
    let mut route_dev = 0.0f64;
    for k in multi_indices_up_to(sig.p() + 1, 4) {
        let f0 = HermiteGaussian::monomial_gaussian(sig, k.clone(), 0.25);
        let bx = random_point(sig, &mut rng, 0.2, 2.0);
        let a = ck_hermite_gaussian(&f0, &bx, CkRoute::DeltaSeries, &ctrl)?;
        let b = ck_hermite_gaussian(&f0, &bx, CkRoute::Fourier, &ctrl)?;
        route_dev = route_dev.max(relative_deviation(&a, &b));
    }

    Ok(vec![
        CheckRecord::new("monomial extension vs Fueter", "ck.fueter-match", fueter_dev, exact_tol),
        CheckRecord::new("plane-wave closed form", "ck.plane-wave", plane_dev, exact_tol),
        CheckRecord::new("Taylor reconstruction", "ck.taylor", taylor_dev, exact_tol),
        CheckRecord::new("Laplacian-series vs frequency route", "ck.dual-route", route_dev, 1e-8),
    ])
}

/// Weighted radial and sphere quadrature identities.
pub fn quadrature_suite(cfg: &RunCfg) -> Result<Vec<CheckRecord>> {
    let q = cfg.sig.q();
    let area = sphere_area(q)?;
    let tol = cfg.headline(1e-8);
    let mut cosh_dev = 0.0f64;
    let mut odd_dev = 0.0f64;
    for &s in &[0.5f64, 1.0, 2.0] {
        let order = cfg.orders.radial_order.max((40.0 * s * s).ceil() as usize);
        let rule = half_line_plain_rule(order)?;
        let got = area * rule.integrate(|r| (-r[0] * r[0]).exp() * (2.0 * r[0] * s).cosh());
        let expect = std::f64::consts::PI.sqrt() / 2.0 * area * (s * s).exp();
        cosh_dev = cosh_dev.max(((got - expect) / expect).abs());

        let y_rule = y_space_rule(q, order, cfg.orders.sphere_order)?;
        for axis in 0..q {
            let odd = y_rule.integrate(|y| {
                let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                if r == 0.0 {
                    0.0
                } else {
                    (2.0 * r * s).sinh() / (r * s) * y[axis]
                }
            });
            odd_dev = odd_dev.max(odd.abs() / expect);
        }
    }

    let mu = MeasureMu::new(cfg.sig.p(), q)?;
    let rule = y_space_rule(q, cfg.orders.radial_order, cfg.orders.sphere_order)?;
    let mass_dev = (mu.normalization() * rule.integrate(|_| 1.0) - 1.0).abs();

    // self-convergence under doubling of either order
    let s = 1.3f64;
    let f = |y: &[f64]| {
        let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        (2.0 * r * s).cosh()
    };
    let v0 = rule.integrate(f);
    let double_r = y_space_rule(q, 2 * cfg.orders.radial_order, cfg.orders.sphere_order)?;
    let double_s = y_space_rule(q, cfg.orders.radial_order, 2 * cfg.orders.sphere_order)?;
    let conv = ((double_r.integrate(f) - v0) / v0)
        .abs()
        .max(((double_s.integrate(f) - v0) / v0).abs());

    Ok(vec![
        CheckRecord::new("radial cosh integral", "quadrature.radial-cosh", cosh_dev, tol),
        CheckRecord::new("odd slice integral vanishes", "quadrature.odd-vanishes", odd_dev, 1e-10),
        CheckRecord::new("marginal mass", "quadrature.marginal-mass", mass_dev, 1e-10),
        CheckRecord::new("self-convergence", "quadrature.self-convergence", conv, 1e-8),
    ])
}

fn gate_gram(sig: Signature) -> Result<()> {
    if sig.q() > 3 {
        return Err(Error::Capability("gram suites support q <= 3".into()));
    }
    if sig.p() > 1 {
        return Err(Error::Capability(
            "gram suites run the shared-radial evaluator, which supports p <= 1".into(),
        ));
    }
    Ok(())
}

/// Transform isometry: the weighted Gram of `{U[phi_k]}` against the
/// closed-form Gram of `{phi_k}`.
pub fn isometry_suite(cfg: &RunCfg) -> Result<Vec<CheckRecord>> {
    gate_gram(cfg.sig)?;
    let report = verify_isometry(cfg.sig, cfg.max_degree, &cfg.orders)?;
    let tol = cfg.headline(1e-6);
    let mut diag_target_dev = 0.0f64;
    for (i, k) in report.indices.iter().enumerate() {
        let expect = std::f64::consts::PI.powf((cfg.sig.p() as f64 + 1.0) / 2.0)
            * 2f64.powi(k.total() as i32)
            * k.factorial();
        diag_target_dev =
            diag_target_dev.max((report.measured[i][i].re - expect).abs() / expect);
    }
    Ok(vec![
        CheckRecord::new("gram matrices match", "isometry.gram", report.max_deviation, tol),
        CheckRecord::new("diagonal norms", "isometry.diagonal", diag_target_dev, tol),
        CheckRecord::new(
            "off-diagonal orthogonality",
            "isometry.offdiagonal",
            report.max_offdiag_scaled,
            1e-8,
        ),
    ])
}

/// Orthogonality and norms of the `psi_k` basis, with blade spot checks.
pub fn basis_suite(cfg: &RunCfg) -> Result<Vec<CheckRecord>> {
    gate_gram(cfg.sig)?;
    let report = verify_basis_orthogonality(cfg.sig, cfg.max_degree, &cfg.orders)?;
    let tol = cfg.headline(1e-6);
    let blade_dev = report
        .blade_checks
        .iter()
        .map(|(_, d)| *d)
        .fold(0.0, f64::max);
    Ok(vec![
        CheckRecord::new("basis gram matches", "basis.gram", report.gram.max_deviation, tol),
        CheckRecord::new("blade multiples stay orthogonal", "basis.blades", blade_dev, tol),
    ])
}

/// Position-momentum conjugation at seeded points for `|k| <= 2`.
pub fn schrodinger_suite(cfg: &RunCfg) -> Result<Vec<CheckRecord>> {
    let sig = cfg.sig;
    if sig.p() > 2 {
        return Err(Error::Capability(
            "schrodinger suite quadrature supports p <= 2".into(),
        ));
    }
    let tol = cfg.headline(1e-6);
    let ctrl = TransformCtrl {
        xi_order: cfg.orders.xi_order,
        ..TransformCtrl::default()
    };
    let points = sample_points(sig, 10, cfg.seed);
    let mut records = Vec::new();
    for k in multi_indices_up_to(sig.p() + 1, 2) {
        let rep = verify_schrodinger_representation(sig, &k, &points, &ctrl)?;
        records.push(CheckRecord::new(
            &format!("conjugation at k={:?}", k.components()),
            "schrodinger.conjugation",
            rep.max_deviation,
            tol,
        ));
    }
    Ok(records)
}
