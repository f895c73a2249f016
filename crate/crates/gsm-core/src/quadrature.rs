//! Deterministic Gauss quadrature for `x`-space, frequency space, and the
//! weighted measure `d mu = c exp(-|y|^2) |y|^{1-q} dx dy` on `R^{p+q+1}`.
//!
//! Rules are built from the three-term recurrence of the orthonormal
//! polynomials of the weight (Hermite for `exp(-s^2)`, Legendre for the
//! sphere's polar direction). Nodes come from sign-change bracketing plus
//! Newton refinement, weights from the Christoffel function
//! `w_i = 1 / sum_{k<n} p_k(x_i)^2`, which is stable down to the smallest
//! weights. The half-line rule with weight `exp(-r^2)` folds an even-order
//! Hermite rule, so the `r^{q-1}` Jacobian of `dy = r^{q-1} dr dsigma`
//! cancels the measure's `|y|^{1-q}` exactly.
//!
//! Integration loops run over fixed-size chunks summed in index order, so
//! results are bit-identical for any number of worker threads.

use crate::clifford::{Multivector, Signature, SplitPoint};
use crate::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;

/// Largest supported 1-D rule order. Beyond this the `exp(t^2)` weight
/// compensation of the plain-integral rules would overflow f64.
pub const MAX_ORDER: usize = 350;

const CHUNK: usize = 1024;

/// What a rule's nodes parametrize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainTag {
    /// Position space `R^{p+1}` with plain Lebesgue `dx`.
    XSpace,
    /// Frequency space `R^{p+1}` with plain Lebesgue `dxi`.
    XiSpace,
    /// Slice space `R^q` against the weight `exp(-|y|^2) |y|^{1-q}`.
    YSpace,
    /// Tensor rule over `R^{p+q+1}`.
    FullSpace,
}

/// Nodes and positive weights for one integral, flattened row-major.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    dim: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    domain: DomainTag,
}

impl QuadratureRule {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn domain(&self) -> DomainTag {
        self.domain
    }

    /// Deterministic weighted sum of a scalar integrand.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let chunks: Vec<f64> = (0..self.len().div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let lo = c * CHUNK;
                let hi = (lo + CHUNK).min(self.len());
                let mut acc = 0.0;
                for i in lo..hi {
                    acc += self.weight(i) * f(self.node(i));
                }
                acc
            })
            .collect();
        chunks.iter().sum()
    }
}

/// Orthonormal-polynomial value and derivative at `x` for a symmetric
/// three-term recurrence `beta_{k+1} p_{k+1} = x p_k - beta_k p_{k-1}`.
fn eval_orthonormal(x: f64, p0: f64, beta: &[f64], n: usize) -> (f64, f64) {
    let mut pm = 0.0f64;
    let mut pc = p0;
    let mut dm = 0.0f64;
    let mut dc = 0.0f64;
    for k in 0..n {
        let pn = (x * pc - beta[k] * pm) / beta[k + 1];
        let dn = (pc + x * dc - beta[k] * dm) / beta[k + 1];
        pm = pc;
        pc = pn;
        dm = dc;
        dc = dn;
    }
    (pc, dc)
}

/// Christoffel weight `1 / sum_{k<n} p_k(x)^2`.
fn christoffel_weight(x: f64, p0: f64, beta: &[f64], n: usize) -> f64 {
    let mut pm = 0.0f64;
    let mut pc = p0;
    let mut sum = pc * pc;
    for k in 0..n - 1 {
        let pn = (x * pc - beta[k] * pm) / beta[k + 1];
        pm = pc;
        pc = pn;
        sum += pc * pc;
    }
    1.0 / sum
}

/// Gauss nodes/weights for a symmetric weight from its recurrence data.
/// `grid` is an ascending list of abscissae fine enough to bracket every
/// sign change of `p_n`.
fn gauss_from_recurrence(n: usize, p0: f64, beta: &[f64], grid: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut prev_x = grid[0];
    let mut prev_v = eval_orthonormal(prev_x, p0, beta, n).0;
    for &x in &grid[1..] {
        let v = eval_orthonormal(x, p0, beta, n).0;
        if prev_v == 0.0 {
            nodes.push(prev_x);
        } else if prev_v * v < 0.0 {
            // Safeguarded Newton: keep the bracket, fall back to bisection
            // whenever the Newton step leaves it.
            let (mut lo, mut hi, mut flo) = (prev_x, x, prev_v);
            let mut root = 0.5 * (lo + hi);
            for _ in 0..100 {
                let (f, d) = eval_orthonormal(root, p0, beta, n);
                if f == 0.0 {
                    break;
                }
                if f * flo < 0.0 {
                    hi = root;
                } else {
                    lo = root;
                    flo = f;
                }
                let newton = root - f / d;
                let next = if d != 0.0 && newton > lo && newton < hi {
                    newton
                } else {
                    0.5 * (lo + hi)
                };
                if (next - root).abs() <= 4.0 * f64::EPSILON * (1.0 + root.abs()) {
                    root = next;
                    break;
                }
                root = next;
            }
            nodes.push(root);
        }
        prev_x = x;
        prev_v = v;
    }
    assert_eq!(nodes.len(), n, "found {} of {} quadrature nodes", nodes.len(), n);
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Symmetrize against roundoff: pair off mirrored roots, keep exact 0.
    for i in 0..n / 2 {
        let m = 0.5 * (nodes[i] - nodes[n - 1 - i]);
        nodes[i] = m;
        nodes[n - 1 - i] = -m;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let weights: Vec<f64> = nodes
        .iter()
        .map(|&x| christoffel_weight(x, p0, beta, n))
        .collect();
    (nodes, weights)
}

/// 1-D Gauss-Hermite nodes/weights for the weight `exp(-s^2)`.
pub fn hermite_nodes(order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if order == 0 || order > 2 * MAX_ORDER {
        return Err(Error::Capability(format!(
            "Gauss-Hermite order {order} outside 1..={}",
            2 * MAX_ORDER
        )));
    }
    let p0 = std::f64::consts::PI.powf(-0.25);
    let beta: Vec<f64> = (0..=order).map(|k| (k as f64 / 2.0).sqrt()).collect();
    // Roots live in (-sqrt(2n+1), sqrt(2n+1)); center spacing ~ pi/sqrt(2n),
    // so a uniform grid with 16n steps brackets every root.
    let span = (2.0 * order as f64 + 1.0).sqrt() + 1.0;
    let steps = (16 * order).max(400);
    let grid: Vec<f64> = (0..=steps)
        .map(|s| -span + 2.0 * span * s as f64 / steps as f64)
        .collect();
    Ok(gauss_from_recurrence(order, p0, &beta, &grid))
}

/// 1-D Gauss-Legendre nodes/weights on `[-1, 1]` with weight 1.
pub fn legendre_nodes(order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if order == 0 || order > 2 * MAX_ORDER {
        return Err(Error::Capability(format!(
            "Gauss-Legendre order {order} outside 1..={}",
            2 * MAX_ORDER
        )));
    }
    let p0 = 1.0 / 2.0f64.sqrt();
    let beta: Vec<f64> = (0..=order)
        .map(|k| {
            let k = k as f64;
            if k == 0.0 {
                0.0
            } else {
                k / (4.0 * k * k - 1.0).sqrt()
            }
        })
        .collect();
    // Roots cluster near +-1 like cos(j pi / n); bracket on a cosine grid.
    let steps = (16 * order).max(400);
    let grid: Vec<f64> = (0..=steps)
        .map(|s| -(std::f64::consts::PI * s as f64 / steps as f64).cos())
        .collect();
    Ok(gauss_from_recurrence(order, p0, &beta, &grid))
}

fn tensorize(axes_nodes: &[Vec<f64>], axes_weights: &[Vec<f64>], domain: DomainTag) -> QuadratureRule {
    let dim = axes_nodes.len();
    let count: usize = axes_nodes.iter().map(|v| v.len()).product();
    let mut nodes = Vec::with_capacity(count * dim);
    let mut weights = Vec::with_capacity(count);
    let mut idx = vec![0usize; dim];
    for _ in 0..count {
        let mut w = 1.0;
        for (a, &i) in idx.iter().enumerate() {
            nodes.push(axes_nodes[a][i]);
            w *= axes_weights[a][i];
        }
        weights.push(w);
        for a in (0..dim).rev() {
            idx[a] += 1;
            if idx[a] < axes_nodes[a].len() {
                break;
            }
            idx[a] = 0;
        }
    }
    QuadratureRule {
        dim,
        nodes,
        weights,
        domain,
    }
}

/// Tensorized Gauss-Hermite rule integrating against `exp(-|x|^2)` on
/// `R^dim`: exact for polynomials of degree `<= 2 order - 1` per axis.
pub fn gauss_hermite_rule(order: usize, dim: usize) -> Result<QuadratureRule> {
    if dim == 0 || dim > 3 {
        return Err(Error::Capability(format!(
            "tensor Gauss-Hermite supports dim 1..=3, got {dim}"
        )));
    }
    if order > MAX_ORDER {
        return Err(Error::Capability(format!(
            "order {order} exceeds maximum {MAX_ORDER}"
        )));
    }
    let (n, w) = hermite_nodes(order)?;
    let axes_n = vec![n; dim];
    let axes_w = vec![w; dim];
    Ok(tensorize(&axes_n, &axes_w, DomainTag::XiSpace))
}

/// Plain-integral rule on `R^dim` for integrands carrying their own
/// Gaussian decay `exp(-rate |x|^2)`: substitutes `x = t / sqrt(rate)` and
/// folds the weight compensation `exp(t^2)` into the weights, so
/// `sum w_i F(x_i) ~ int F(x) dx` exactly when `F = poly * exp(-rate|x|^2)`
/// of per-axis degree `<= 2 order - 1`.
pub fn plain_gauss_rule(order: usize, dim: usize, rate: f64, domain: DomainTag) -> Result<QuadratureRule> {
    if dim == 0 || dim > 3 {
        return Err(Error::Capability(format!(
            "tensor rule supports dim 1..=3, got {dim}"
        )));
    }
    if order > MAX_ORDER {
        return Err(Error::Capability(format!(
            "order {order} exceeds maximum {MAX_ORDER}"
        )));
    }
    if !(rate > 0.0) {
        return Err(Error::NotInFamily(rate));
    }
    let (n, w) = hermite_nodes(order)?;
    let s = rate.sqrt();
    let nodes: Vec<f64> = n.iter().map(|&t| t / s).collect();
    let weights: Vec<f64> = n
        .iter()
        .zip(w.iter())
        .map(|(&t, &wi)| wi * (t * t).exp() / s)
        .collect();
    let axes_n = vec![nodes; dim];
    let axes_w = vec![weights; dim];
    Ok(tensorize(&axes_n, &axes_w, domain))
}

/// `x`-space rule for `int F(x) dx` with `F` decaying like
/// `exp(-|x|^2 / 2)` (products of two transforms).
pub fn x_space_rule(sig: Signature, order: usize) -> Result<QuadratureRule> {
    plain_gauss_rule(order, sig.p() + 1, 0.5, DomainTag::XSpace)
}

/// Half-line rule for `int_0^inf g(r) exp(-r^2) dr`, built by folding an
/// even Gauss-Hermite rule onto its positive nodes.
pub fn half_line_gaussian_rule(radial_order: usize) -> Result<QuadratureRule> {
    if radial_order == 0 || radial_order > MAX_ORDER {
        return Err(Error::Capability(format!(
            "radial order {radial_order} outside 1..={MAX_ORDER}"
        )));
    }
    let (n, w) = hermite_nodes(2 * radial_order)?;
    let mut nodes = Vec::with_capacity(radial_order);
    let mut weights = Vec::with_capacity(radial_order);
    for (t, wi) in n.iter().zip(w.iter()) {
        if *t > 0.0 {
            nodes.push(*t);
            weights.push(*wi);
        }
    }
    nodes.reverse();
    weights.reverse();
    Ok(QuadratureRule {
        dim: 1,
        nodes,
        weights,
        domain: DomainTag::YSpace,
    })
}

/// Half-line rule for plain `int_0^inf F(r) dr` where `F` carries its own
/// `exp(-r^2)` factor (weights compensated by `exp(t^2)`).
pub fn half_line_plain_rule(radial_order: usize) -> Result<QuadratureRule> {
    let mut rule = half_line_gaussian_rule(radial_order)?;
    for (t, w) in rule.nodes.iter().zip(rule.weights.iter_mut()) {
        *w *= (t * t).exp();
    }
    Ok(rule)
}

/// Surface area `|S^{q-1}| = 2 pi^{q/2} / Gamma(q/2)` for `q <= 3`,
/// from the half-integer Gamma values.
pub fn sphere_area(q: usize) -> Result<f64> {
    match q {
        1 => Ok(2.0),
        2 => Ok(2.0 * std::f64::consts::PI),
        3 => Ok(4.0 * std::f64::consts::PI),
        _ => Err(Error::Capability(format!("sphere rules support q <= 3, got {q}"))),
    }
}

/// Antipodally symmetric cubature on the unit sphere `S^{q-1}` with
/// weights summing to `|S^{q-1}|`. `q = 1`: the two points `{+1, -1}` with
/// weight 1 each; `q = 2`: uniform (trapezoid) points on the circle;
/// `q = 3`: Gauss-Legendre in `cos(theta)` times uniform longitudes.
pub fn sphere_rule(q: usize, sphere_order: usize) -> Result<QuadratureRule> {
    if sphere_order == 0 || sphere_order > MAX_ORDER {
        return Err(Error::Capability(format!(
            "sphere order {sphere_order} outside 1..={MAX_ORDER}"
        )));
    }
    match q {
        1 => Ok(QuadratureRule {
            dim: 1,
            nodes: vec![1.0, -1.0],
            weights: vec![1.0, 1.0],
            domain: DomainTag::YSpace,
        }),
        2 => {
            // even count keeps the rule antipodally symmetric
            let m = (sphere_order.max(2) + 1) & !1usize;
            let w = 2.0 * std::f64::consts::PI / m as f64;
            let mut nodes = Vec::with_capacity(2 * m);
            for j in 0..m {
                let th = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                nodes.push(th.cos());
                nodes.push(th.sin());
            }
            Ok(QuadratureRule {
                dim: 2,
                nodes,
                weights: vec![w; m],
                domain: DomainTag::YSpace,
            })
        }
        3 => {
            let n_u = sphere_order.max(2);
            let n_phi = (2 * sphere_order).max(4) & !1usize;
            let (u, wu) = legendre_nodes(n_u)?;
            let wphi = 2.0 * std::f64::consts::PI / n_phi as f64;
            let mut nodes = Vec::with_capacity(3 * n_u * n_phi);
            let mut weights = Vec::with_capacity(n_u * n_phi);
            for (ui, wui) in u.iter().zip(wu.iter()) {
                let s = (1.0 - ui * ui).max(0.0).sqrt();
                for j in 0..n_phi {
                    let phi = 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64;
                    nodes.push(s * phi.cos());
                    nodes.push(s * phi.sin());
                    nodes.push(*ui);
                    weights.push(wui * wphi);
                }
            }
            Ok(QuadratureRule {
                dim: 3,
                nodes,
                weights,
                domain: DomainTag::YSpace,
            })
        }
        _ => Err(Error::Capability(format!("sphere rules support q <= 3, got {q}"))),
    }
}

/// Rule for `int_{R^q} g(y) exp(-|y|^2) / |y|^{q-1} dy`, factorized as
/// (half-line radial with weight `exp(-r^2)`) x (sphere rule); the
/// `r^{q-1}` Jacobian cancels against the measure.
pub fn y_space_rule(q: usize, radial_order: usize, sphere_order: usize) -> Result<QuadratureRule> {
    let radial = half_line_gaussian_rule(radial_order)?;
    let sphere = sphere_rule(q, sphere_order)?;
    let count = radial.len() * sphere.len();
    let mut nodes = Vec::with_capacity(count * q);
    let mut weights = Vec::with_capacity(count);
    for i in 0..radial.len() {
        let r = radial.node(i)[0];
        let wr = radial.weight(i);
        for j in 0..sphere.len() {
            for &c in sphere.node(j) {
                nodes.push(r * c);
            }
            weights.push(wr * sphere.weight(j));
        }
    }
    Ok(QuadratureRule {
        dim: q,
        nodes,
        weights,
        domain: DomainTag::YSpace,
    })
}

/// The Gaussian slice measure
/// `d mu = (2/sqrt(pi)) (1/|S|) exp(-|y|^2) |y|^{1-q} dx dy`.
#[derive(Debug, Clone, Copy)]
pub struct MeasureMu {
    p: usize,
    q: usize,
}

impl MeasureMu {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        sphere_area(q)?;
        Ok(Self { p, q })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn sphere_area(&self) -> f64 {
        sphere_area(self.q).expect("validated at construction")
    }

    /// Normalization `c = (2/sqrt(pi)) / |S|`; makes the `y`-marginal a
    /// probability measure.
    pub fn normalization(&self) -> f64 {
        2.0 / std::f64::consts::PI.sqrt() / self.sphere_area()
    }
}

/// Materialized tensor nodes of the full-space rule `x-rule (x) y-rule`,
/// ordered with `y` slowest. Weights do not include the measure
/// normalization `c`.
pub fn full_space_nodes(
    sig: Signature,
    x_rule: &QuadratureRule,
    y_rule: &QuadratureRule,
) -> Vec<(SplitPoint, f64)> {
    assert_eq!(x_rule.dim(), sig.p() + 1);
    assert_eq!(y_rule.dim(), sig.q());
    let mut out = Vec::with_capacity(x_rule.len() * y_rule.len());
    for j in 0..y_rule.len() {
        let y = y_rule.node(j).to_vec();
        let wy = y_rule.weight(j);
        for i in 0..x_rule.len() {
            let bx = SplitPoint::new(sig, x_rule.node(i).to_vec(), y.clone());
            out.push((bx, wy * x_rule.weight(i)));
        }
    }
    out
}

/// Clifford-valued pairing `int f^dag g d mu` by tensor quadrature with a
/// deterministic chunked reduction.
pub fn mu_inner_product_clifford<F, G>(
    f: F,
    g: G,
    sig: Signature,
    mu: &MeasureMu,
    x_rule: &QuadratureRule,
    y_rule: &QuadratureRule,
) -> Multivector
where
    F: Fn(&SplitPoint) -> Multivector + Sync,
    G: Fn(&SplitPoint) -> Multivector + Sync,
{
    let nodes = full_space_nodes(sig, x_rule, y_rule);
    let chunks: Vec<Multivector> = (0..nodes.len().div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(nodes.len());
            let mut acc = Multivector::zero(sig);
            for (bx, w) in &nodes[lo..hi] {
                let prod = f(bx)
                    .hermitian_conjugate()
                    .geometric_product(&g(bx))
                    .expect("same signature");
                acc = &acc + &prod.scale_real(*w);
            }
            acc
        })
        .collect();
    let mut total = Multivector::zero(sig);
    for c in &chunks {
        total = &total + c;
    }
    total.scale_real(mu.normalization())
}

/// Scalar pairing `int Sc(f^dag g) d mu`.
pub fn mu_inner_product<F, G>(
    f: F,
    g: G,
    sig: Signature,
    mu: &MeasureMu,
    x_rule: &QuadratureRule,
    y_rule: &QuadratureRule,
) -> Complex64
where
    F: Fn(&SplitPoint) -> Multivector + Sync,
    G: Fn(&SplitPoint) -> Multivector + Sync,
{
    let nodes = full_space_nodes(sig, x_rule, y_rule);
    let chunks: Vec<Complex64> = (0..nodes.len().div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(nodes.len());
            let mut acc = Complex64::new(0.0, 0.0);
            for (bx, w) in &nodes[lo..hi] {
                acc += *w * f(bx).inner_product(&g(bx)).expect("same signature");
            }
            acc
        })
        .collect();
    chunks.iter().sum::<Complex64>() * mu.normalization()
}
