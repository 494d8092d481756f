//! Regularized quadratic strongly convex stochastic optimization problems.
//!
//! The loss on raw data `x ∈ [-p_box, p_box]^dim_data` is
//!
//! ```text
//! L(θ, x) = ‖A₀θ − f₀(x)‖² + Σᵢ (‖Aᵢθ‖² + μᵢ)^{rᵢ} fᵢ(x)
//! ```
//!
//! and every computation here works on the lifted sample
//! `lift(x) = (f₀(x), f₁(x), …, f_v(x)) ∈ ℝ^{d+v}`, on which the loss takes
//! the canonical form
//!
//! ```text
//! 𝓛(θ, z) = ‖A₀θ − z_{1:d}‖² + Σᵢ (‖Aᵢθ‖² + μᵢ)^{rᵢ} z_{d+i}.
//! ```
//!
//! `∇_θ𝓛` is affine in `z`, so a mini-batch average of gradients equals the
//! gradient at the averaged lifted sample; [`Problem::grad_theta_into`] is
//! used that way on the trajectory hot path.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::DataSpec;
use crate::error::{Error, Result};
use crate::linalg::{dist, dot, norm, Matrix};

/// Feature map `f₀` from raw data to `ℝ^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeatureMap {
    /// `f₀(x) = W x + b` with `W` of shape `d × dim_data`.
    Affine { matrix: Matrix, offset: Vec<f64> },
    /// `f₀(x)_j = clamp(Σ_k c_k x_j^k, −clip, clip)` for `j < d`.
    ClippedPolynomial { coeffs: Vec<f64>, clip: f64 },
}

/// Nonnegative weight map `fᵢ` attached to a regularizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightMap {
    Constant { value: f64 },
    AbsCoord { coord: usize },
    /// `min(scale · x_coord², clip)`.
    ClippedQuadratic { coord: usize, scale: f64, clip: f64 },
}

impl WeightMap {
    fn eval(&self, x: &[f64]) -> f64 {
        match *self {
            WeightMap::Constant { value } => value,
            WeightMap::AbsCoord { coord } => x[coord].abs(),
            WeightMap::ClippedQuadratic { coord, scale, clip } => (scale * x[coord] * x[coord]).min(clip),
        }
    }

    /// `(inf, sup)` over the box `[-p, p]^dim_data`.
    fn range(&self, p: f64) -> (f64, f64) {
        match *self {
            WeightMap::Constant { value } => (value, value),
            WeightMap::AbsCoord { .. } => (0.0, p),
            WeightMap::ClippedQuadratic { scale, clip, .. } => (0.0, (scale * p * p).min(clip)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Regularizer {
    pub a: Matrix,
    pub mu: f64,
    pub r: f64,
    pub weight: WeightMap,
}

impl Regularizer {
    /// `g(θ) = (‖Aθ‖² + μ)^r`.
    pub fn value(&self, theta: &[f64]) -> f64 {
        (self.sq_norm(theta) + self.mu).powf(self.r)
    }

    #[inline]
    fn sq_norm(&self, theta: &[f64]) -> f64 {
        let d = self.a.cols();
        (0..self.a.rows())
            .map(|k| {
                let y: f64 = (0..d).map(|j| self.a.get(k, j) * theta[j]).sum();
                y * y
            })
            .sum()
    }

    /// `out += w · ∇g(θ)` with `∇g(θ) = 2r(‖Aθ‖²+μ)^{r−1} AᵀAθ`.
    #[inline]
    fn grad_acc(&self, theta: &[f64], w: f64, out: &mut [f64]) {
        if w == 0.0 {
            return;
        }
        let d = self.a.cols();
        let s = self.sq_norm(theta);
        let coeff = w * 2.0 * self.r * (s + self.mu).powf(self.r - 1.0);
        for k in 0..self.a.rows() {
            let y: f64 = (0..d).map(|j| self.a.get(k, j) * theta[j]).sum();
            let c = coeff * y;
            for (j, o) in out.iter_mut().enumerate() {
                *o += c * self.a.get(k, j);
            }
        }
    }

    /// Bound on the operator norm of the Hessian of `g`:
    /// `2r‖AᵀA‖μ^{r−1} + 4r(1−r)μ^{r−1}‖A‖²`.
    pub fn hessian_bound(&self) -> f64 {
        let a_norm = self.a.spectral_norm();
        let ata = self.a.gram().spectral_norm();
        let mu_pow = self.mu.powf(self.r - 1.0);
        2.0 * self.r * ata * mu_pow + 4.0 * self.r * (1.0 - self.r) * mu_pow * a_norm * a_norm
    }

    /// Constant `2r‖A‖^{2r}` with `|g(θ) − g(ϑ)| ≤ 2r‖A‖^{2r} max(‖θ‖,‖ϑ‖)^{2r−1} ‖θ − ϑ‖`.
    fn value_lipschitz_factor(&self) -> f64 {
        2.0 * self.r * self.a.spectral_norm().powf(2.0 * self.r)
    }
}

/// Problem description as it appears in configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub a0: Matrix,
    #[serde(default)]
    pub regularizers: Vec<Regularizer>,
    pub feature_map: FeatureMap,
    pub dim_data: usize,
    pub p_box: f64,
}

/// A validated problem instance.
#[derive(Debug, Clone)]
pub struct Problem {
    spec: ProblemSpec,
    dim_theta: usize,
    dim_reg: usize,
    r_frak: f64,
    r_cap: f64,
}

impl Problem {
    pub fn new(spec: ProblemSpec) -> Result<Self> {
        let d = spec.a0.rows();
        if spec.a0.cols() != d {
            return Err(Error::input(format!(
                "A0 must be square, got {}x{}",
                d,
                spec.a0.cols()
            )));
        }
        if spec.dim_data == 0 {
            return Err(Error::input("data dimension must be positive"));
        }
        if !(spec.p_box.is_finite() && spec.p_box > 0.0) {
            return Err(Error::domain("box radius must be positive"));
        }
        let smin = spec.a0.min_singular_value();
        if !(smin > 0.0) || spec.a0.spectral_norm() / smin > 1e14 {
            return Err(Error::Construction("A0 is singular".into()));
        }
        let mut dim_reg = 0;
        for (i, reg) in spec.regularizers.iter().enumerate() {
            if reg.a.cols() != d {
                return Err(Error::input(format!("regularizer {i}: A has {} columns, expected {d}", reg.a.cols())));
            }
            if i == 0 {
                dim_reg = reg.a.rows();
            } else if reg.a.rows() != dim_reg {
                return Err(Error::input(format!("regularizer {i}: all A_i must have {dim_reg} rows")));
            }
            if !(reg.mu.is_finite() && reg.mu > 0.0) {
                return Err(Error::domain(format!("regularizer {i}: mu must be positive")));
            }
            if !(0.5..0.75).contains(&reg.r) {
                return Err(Error::domain(format!("regularizer {i}: r = {} outside [1/2, 3/4)", reg.r)));
            }
            match reg.weight {
                WeightMap::Constant { value } => {
                    if !(value.is_finite() && value >= 0.0) {
                        return Err(Error::domain(format!("regularizer {i}: constant weight must be >= 0")));
                    }
                }
                WeightMap::AbsCoord { coord } => {
                    if coord >= spec.dim_data {
                        return Err(Error::input(format!("regularizer {i}: weight coordinate out of range")));
                    }
                }
                WeightMap::ClippedQuadratic { coord, scale, clip } => {
                    if coord >= spec.dim_data {
                        return Err(Error::input(format!("regularizer {i}: weight coordinate out of range")));
                    }
                    if !(scale >= 0.0 && clip > 0.0 && scale.is_finite() && clip.is_finite()) {
                        return Err(Error::domain(format!("regularizer {i}: clipped quadratic needs scale >= 0, clip > 0")));
                    }
                }
            }
        }
        match &spec.feature_map {
            FeatureMap::Affine { matrix, offset } => {
                if matrix.rows() != d || matrix.cols() != spec.dim_data || offset.len() != d {
                    return Err(Error::input(format!(
                        "affine feature map must be {d}x{} with offset of length {d}",
                        spec.dim_data
                    )));
                }
                if offset.iter().any(|v| !v.is_finite()) {
                    return Err(Error::input("affine offset has a non-finite entry"));
                }
            }
            FeatureMap::ClippedPolynomial { coeffs, clip } => {
                if spec.dim_data < d {
                    return Err(Error::input("clipped polynomial feature map needs dim_data >= d"));
                }
                if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::input("clipped polynomial needs finite coefficients"));
                }
                if !(clip.is_finite() && *clip > 0.0) {
                    return Err(Error::domain("clipped polynomial needs clip > 0"));
                }
            }
        }
        let r_frak = spec
            .regularizers
            .iter()
            .map(|r| 2.0 * r.r - 1.0)
            .fold(0.0_f64, f64::max);
        Ok(Problem {
            dim_theta: d,
            dim_reg,
            r_cap: r_frak.max(0.25),
            r_frak,
            spec,
        })
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn dim_theta(&self) -> usize {
        self.dim_theta
    }

    pub fn dim_data(&self) -> usize {
        self.spec.dim_data
    }

    pub fn dim_reg(&self) -> usize {
        self.dim_reg
    }

    pub fn num_regularizers(&self) -> usize {
        self.spec.regularizers.len()
    }

    /// Length `d + v` of a lifted sample.
    pub fn dim_lifted(&self) -> usize {
        self.dim_theta + self.num_regularizers()
    }

    pub fn a0(&self) -> &Matrix {
        &self.spec.a0
    }

    pub fn regularizers(&self) -> &[Regularizer] {
        &self.spec.regularizers
    }

    pub fn p_box(&self) -> f64 {
        self.spec.p_box
    }

    /// `𝔯 = 2·max rᵢ − 1` (zero without regularizers).
    pub fn r_frak(&self) -> f64 {
        self.r_frak
    }

    /// `max{𝔯, 1/4}`.
    pub fn r_cap(&self) -> f64 {
        self.r_cap
    }

    fn check_lifted(&self, theta: &[f64], z: &[f64]) -> Result<()> {
        if theta.len() != self.dim_theta {
            return Err(Error::input(format!("theta has length {}, expected {}", theta.len(), self.dim_theta)));
        }
        if z.len() != self.dim_lifted() {
            return Err(Error::input(format!("lifted sample has length {}, expected {}", z.len(), self.dim_lifted())));
        }
        Ok(())
    }

    fn check_weights(&self, z: &[f64]) -> Result<()> {
        if z[self.dim_theta..].iter().any(|&w| w < 0.0) {
            return Err(Error::domain("regularizer weight coordinate is negative"));
        }
        Ok(())
    }

    pub fn loss(&self, theta: &[f64], z: &[f64]) -> Result<f64> {
        self.check_lifted(theta, z)?;
        self.check_weights(z)?;
        let d = self.dim_theta;
        let a0 = &self.spec.a0;
        let mut total = 0.0;
        for k in 0..d {
            let res: f64 = (0..d).map(|j| a0.get(k, j) * theta[j]).sum::<f64>() - z[k];
            total += res * res;
        }
        for (i, reg) in self.spec.regularizers.iter().enumerate() {
            total += reg.value(theta) * z[d + i];
        }
        Ok(total)
    }

    /// Unchecked `out = ∇_θ𝓛(θ, z)`.
    #[inline]
    pub fn grad_theta_into(&self, theta: &[f64], z: &[f64], out: &mut [f64]) {
        let d = self.dim_theta;
        let a0 = &self.spec.a0;
        out.fill(0.0);
        for k in 0..d {
            let res: f64 = (0..d).map(|j| a0.get(k, j) * theta[j]).sum::<f64>() - z[k];
            let c = 2.0 * res;
            for (j, o) in out.iter_mut().enumerate() {
                *o += c * a0.get(k, j);
            }
        }
        for (i, reg) in self.spec.regularizers.iter().enumerate() {
            reg.grad_acc(theta, z[d + i], out);
        }
    }

    pub fn grad_theta(&self, theta: &[f64], z: &[f64]) -> Result<Vec<f64>> {
        self.check_lifted(theta, z)?;
        let mut out = vec![0.0; self.dim_theta];
        self.grad_theta_into(theta, z, &mut out);
        Ok(out)
    }

    /// `∇_z𝓛(θ, z) = (−2(A₀θ − z_{1:d}), g₁(θ), …, g_v(θ))`.
    pub fn grad_x(&self, theta: &[f64], z: &[f64]) -> Result<Vec<f64>> {
        self.check_lifted(theta, z)?;
        let d = self.dim_theta;
        let mut out = self.spec.a0.mul_vec(theta);
        for (o, zi) in out.iter_mut().zip(z) {
            *o = -2.0 * (*o - zi);
        }
        out.extend(self.spec.regularizers.iter().map(|r| r.value(theta)));
        debug_assert_eq!(out.len(), d + self.num_regularizers());
        Ok(out)
    }

    /// Unchecked lift into `out` (length `d + v`).
    #[inline]
    pub fn lift_into(&self, x: &[f64], out: &mut [f64]) {
        let d = self.dim_theta;
        match &self.spec.feature_map {
            FeatureMap::Affine { matrix, offset } => {
                matrix.mul_vec_into(x, &mut out[..d]);
                for (o, b) in out[..d].iter_mut().zip(offset) {
                    *o += b;
                }
            }
            FeatureMap::ClippedPolynomial { coeffs, clip } => {
                for j in 0..d {
                    // Horner
                    let v = coeffs.iter().rev().fold(0.0, |acc, c| acc * x[j] + c);
                    out[j] = v.clamp(-clip, *clip);
                }
            }
        }
        for (i, reg) in self.spec.regularizers.iter().enumerate() {
            out[d + i] = reg.weight.eval(x);
        }
    }

    pub fn lift(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.spec.dim_data {
            return Err(Error::input(format!("raw sample has length {}, expected {}", x.len(), self.spec.dim_data)));
        }
        if x.iter().any(|v| !(v.abs() <= self.spec.p_box)) {
            return Err(Error::domain("raw sample lies outside the data box"));
        }
        let mut out = vec![0.0; self.dim_lifted()];
        self.lift_into(x, &mut out);
        Ok(out)
    }

    /// Per-coordinate `[lo, hi]` enclosing the lifted image of the data box.
    pub fn lifted_box(&self) -> Vec<(f64, f64)> {
        let p = self.spec.p_box;
        let mut out = Vec::with_capacity(self.dim_lifted());
        match &self.spec.feature_map {
            FeatureMap::Affine { matrix, offset } => {
                for (j, b) in offset.iter().enumerate() {
                    let spread: f64 = (0..matrix.cols()).map(|k| matrix.get(j, k).abs()).sum::<f64>() * p;
                    out.push((b - spread, b + spread));
                }
            }
            FeatureMap::ClippedPolynomial { clip, .. } => {
                out.extend(std::iter::repeat((-clip, *clip)).take(self.dim_theta));
            }
        }
        out.extend(self.spec.regularizers.iter().map(|r| r.weight.range(p)));
        out
    }

    /// Analytic Lipschitz constant of `θ ↦ ∇_θ𝓛(θ, z)` over the lifted box.
    pub fn theta_lipschitz_bound(&self) -> f64 {
        let bx = self.lifted_box();
        let d = self.dim_theta;
        2.0 * self.spec.a0.gram().spectral_norm()
            + self
                .spec
                .regularizers
                .iter()
                .enumerate()
                .map(|(i, r)| r.hessian_bound() * bx[d + i].1)
                .sum::<f64>()
    }

    /// Analytic constant `K` with
    /// `‖∇_z𝓛(θ,z) − ∇_z𝓛(ϑ,z)‖ ≤ K‖θ−ϑ‖(1 + ‖θ‖^𝔕 + ‖ϑ‖^𝔕)`.
    pub fn x_growth_bound(&self) -> f64 {
        2.0 * self.spec.a0.spectral_norm()
            + self
                .spec
                .regularizers
                .iter()
                .map(|r| r.value_lipschitz_factor())
                .sum::<f64>()
    }
}

/// Certified constants for a problem on its data box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemConstants {
    pub kappa: f64,
    pub big_k: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub c_data: f64,
    pub rho: f64,
    pub anchor: Vec<f64>,
    pub theta_star_anchor: Vec<f64>,
    pub diagnostics: CertificateDiagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDiagnostics {
    pub k_theta_analytic: f64,
    pub k_x_analytic: f64,
    pub k_sampled: f64,
    pub kappa_sampled: f64,
    pub probes: usize,
}

/// Iteration cap of the anchor minimizer.
pub const ANCHOR_MAX_ITERS: usize = 1_000_000;
/// Default gradient-norm tolerance of the anchor minimizer.
pub const ANCHOR_TOL: f64 = 1e-10;

/// Minimizer of `θ ↦ 𝓛(θ, anchor)`.
///
/// Closed form `A₀⁻¹ anchor_{1:d}` without regularizers, otherwise gradient
/// descent with step `1/K_θ` started from that closed form.
pub fn solve_anchor_minimizer(problem: &Problem, anchor: &[f64], tol: f64) -> Result<Vec<f64>> {
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    if anchor.len() != problem.dim_lifted() {
        return Err(Error::input("anchor has the wrong dimension"));
    }
    problem.check_weights(anchor)?;
    let d = problem.dim_theta();
    let mut theta = problem.a0().solve(&anchor[..d])?;
    if problem.num_regularizers() == 0 {
        return Ok(theta);
    }
    let step = 1.0 / problem.theta_lipschitz_bound();
    let mut g = vec![0.0; d];
    let mut gnorm = f64::INFINITY;
    for _ in 0..ANCHOR_MAX_ITERS {
        problem.grad_theta_into(&theta, anchor, &mut g);
        gnorm = norm(&g);
        if gnorm <= tol {
            return Ok(theta);
        }
        if !gnorm.is_finite() {
            break;
        }
        for (t, gi) in theta.iter_mut().zip(&g) {
            *t -= step * gi;
        }
    }
    Err(Error::numerical(format!(
        "anchor minimizer did not converge; last gradient norm {gnorm:e}"
    )))
}

fn box_corners(bx: &[(f64, f64)]) -> Result<Vec<Vec<f64>>> {
    if bx.len() > 20 {
        return Err(Error::input("too many lifted coordinates to enumerate box corners"));
    }
    Ok((0..1usize << bx.len())
        .map(|mask| {
            bx.iter()
                .enumerate()
                .map(|(j, &(lo, hi))| if mask >> j & 1 == 1 { hi } else { lo })
                .collect()
        })
        .collect())
}

/// Computes and cross-checks the constants `κ, 𝒦, τ₁, τ₂, 𝔠, ρ`.
///
/// `κ = 2σ_min(A₀)²` and the analytic `𝒦 = max(K_θ, K_x)` are checked
/// against `probe_count` random pairs; if a sampled quotient ever exceeds the
/// analytic value, `𝒦` becomes `1.05 ×` the sampled maximum. A sampled
/// strong-convexity ratio below `κ − 1e−9` is reported as an error.
pub fn certify_constants(problem: &Problem, data: &DataSpec, probe_count: usize) -> Result<ProblemConstants> {
    if probe_count == 0 {
        return Err(Error::input("probe_count must be at least 1"));
    }
    data.validate()?;
    if data.dim_data != problem.dim_data() || data.p_box != problem.p_box() {
        return Err(Error::input("data spec does not match the problem's data box"));
    }
    let d = problem.dim_theta();
    let smin = problem.a0().min_singular_value();
    let kappa = 2.0 * smin * smin;
    let k_theta = problem.theta_lipschitz_bound();
    let k_x = problem.x_growth_bound();
    let tau2 = problem.r_cap();
    let bx = problem.lifted_box();

    let mut rng = ChaCha8Rng::seed_from_u64(data.seed ^ 0x5eed_c0de_ce71_f1ed);
    let mut kappa_sampled = f64::INFINITY;
    let mut k_sampled: f64 = 0.0;
    let mut c_sampled: f64 = 0.0;
    let mut raw = vec![0.0; problem.dim_data()];
    let mut lifted = vec![0.0; problem.dim_lifted()];
    for _ in 0..probe_count {
        let a: Vec<f64> = (0..d).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let b: Vec<f64> = (0..d).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let z: Vec<f64> = bx.iter().map(|&(lo, hi)| if hi > lo { rng.gen_range(lo..=hi) } else { lo }).collect();
        let diff: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        let dn = norm(&diff);
        if dn == 0.0 {
            continue;
        }
        let ga = problem.grad_theta(&a, &z)?;
        let gb = problem.grad_theta(&b, &z)?;
        let gdiff: Vec<f64> = ga.iter().zip(&gb).map(|(x, y)| x - y).collect();
        kappa_sampled = kappa_sampled.min(dot(&diff, &gdiff) / (dn * dn));
        k_sampled = k_sampled.max(norm(&gdiff) / dn);
        let xa = problem.grad_x(&a, &z)?;
        let xb = problem.grad_x(&b, &z)?;
        let growth = 1.0 + norm(&a).powf(tau2) + norm(&b).powf(tau2);
        k_sampled = k_sampled.max(dist(&xa, &xb) / (dn * growth));

        for v in raw.iter_mut() {
            *v = rng.gen_range(-data.p_box..=data.p_box);
        }
        problem.lift_into(&raw, &mut lifted);
        c_sampled = c_sampled.max(norm(&lifted));
    }
    if kappa_sampled < kappa - 1e-9 {
        return Err(Error::numerical(format!(
            "strong convexity certificate violated: sampled {kappa_sampled} < {kappa}"
        )));
    }
    let analytic = k_theta.max(k_x);
    // relative slack absorbs rounding in the sampled quotients
    let big_k = if k_sampled <= analytic * (1.0 + 1e-12) { analytic } else { 1.05 * k_sampled };

    let corners = box_corners(&bx)?;
    let c_box = corners.iter().map(|c| norm(c)).fold(0.0, f64::max);
    let c_data = 1.0_f64.max(c_box).max(c_sampled);

    let anchor = problem.lift(&vec![0.0; problem.dim_data()])?;
    let theta_star_anchor = solve_anchor_minimizer(problem, &anchor, ANCHOR_TOL)?;
    let mut sup_grad: f64 = 0.0;
    for corner in &corners {
        sup_grad = sup_grad.max(norm(&problem.grad_theta(&theta_star_anchor, corner)?));
    }
    Ok(ProblemConstants {
        kappa,
        big_k,
        tau1: 0.0,
        tau2,
        c_data,
        rho: 1.0 + sup_grad,
        anchor,
        theta_star_anchor,
        diagnostics: CertificateDiagnostics {
            k_theta_analytic: k_theta,
            k_x_analytic: k_x,
            k_sampled,
            kappa_sampled,
            probes: probe_count,
        },
    })
}

/// Problems used throughout tests, benches and the bundled configs.
pub mod catalog {
    use super::*;

    fn identity_map(d: usize, dim_data: usize) -> FeatureMap {
        let rows = (0..d)
            .map(|i| (0..dim_data).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        FeatureMap::Affine {
            matrix: Matrix::from_rows(rows).expect("identity rows"),
            offset: vec![0.0; d],
        }
    }

    /// `L(θ, x) = (a θ − x)²` on `[-p_box, p_box]`.
    pub fn scalar_quadratic(a: f64, p_box: f64) -> Problem {
        Problem::new(ProblemSpec {
            a0: Matrix::diagonal(&[a]),
            regularizers: vec![],
            feature_map: identity_map(1, 1),
            dim_data: 1,
            p_box,
        })
        .expect("valid catalog problem")
    }

    /// `d = 2`, `A₀ = diag(2, 1)`, identity features, no regularizers.
    pub fn diag_quadratic_2d() -> Problem {
        Problem::new(ProblemSpec {
            a0: Matrix::diagonal(&[2.0, 1.0]),
            regularizers: vec![],
            feature_map: identity_map(2, 2),
            dim_data: 2,
            p_box: 1.0,
        })
        .expect("valid catalog problem")
    }

    /// `d = 2`, `A₀ = diag(2, 1)`, offset features `x + (0.3, −0.2)` and one
    /// regularizer `(‖A₁θ‖² + 1)^{0.6} |x₂|` with `A₁ = [1, 0.5]`.
    pub fn regularized_2d() -> Problem {
        Problem::new(ProblemSpec {
            a0: Matrix::diagonal(&[2.0, 1.0]),
            regularizers: vec![Regularizer {
                a: Matrix::from_rows(vec![vec![1.0, 0.5]]).expect("row"),
                mu: 1.0,
                r: 0.6,
                weight: WeightMap::AbsCoord { coord: 1 },
            }],
            feature_map: FeatureMap::Affine {
                matrix: Matrix::identity(2),
                offset: vec![0.3, -0.2],
            },
            dim_data: 2,
            p_box: 1.0,
        })
        .expect("valid catalog problem")
    }

    /// `d = 4` with a dense `A₀`, clipped cubic features from six raw
    /// coordinates and two regularizers with distinct weight maps.
    pub fn mixed_4d() -> Problem {
        Problem::new(ProblemSpec {
            a0: Matrix::from_rows(vec![
                vec![1.5, 0.2, 0.0, -0.1],
                vec![0.1, 1.0, 0.3, 0.0],
                vec![0.0, -0.2, 1.2, 0.1],
                vec![0.2, 0.0, 0.1, 0.8],
            ])
            .expect("rows"),
            regularizers: vec![
                Regularizer {
                    a: Matrix::from_rows(vec![vec![1.0, 0.0, 0.5, 0.0], vec![0.0, 1.0, 0.0, -0.5]]).expect("rows"),
                    mu: 0.5,
                    r: 0.5,
                    weight: WeightMap::ClippedQuadratic {
                        coord: 4,
                        scale: 2.0,
                        clip: 1.5,
                    },
                },
                Regularizer {
                    a: Matrix::from_rows(vec![vec![0.3, 0.3, 0.3, 0.3], vec![1.0, -1.0, 0.0, 0.0]]).expect("rows"),
                    mu: 2.0,
                    r: 0.7,
                    weight: WeightMap::Constant { value: 0.8 },
                },
            ],
            feature_map: FeatureMap::ClippedPolynomial {
                coeffs: vec![0.1, 1.0, 0.0, -0.3],
                clip: 1.0,
            },
            dim_data: 6,
            p_box: 1.5,
        })
        .expect("valid catalog problem")
    }

    /// `d = 8` with a lower-triangular `A₀` and one regularizer.
    pub fn triangular_8d() -> Problem {
        let rows = (0..8)
            .map(|i| (0..8).map(|j| if i == j { 1.0 + 0.1 * i as f64 } else if j < i { 0.05 } else { 0.0 }).collect())
            .collect();
        let reg_rows = (0..3).map(|k| (0..8).map(|j| if j % 3 == k { 0.5 } else { 0.0 }).collect()).collect();
        Problem::new(ProblemSpec {
            a0: Matrix::from_rows(rows).expect("rows"),
            regularizers: vec![Regularizer {
                a: Matrix::from_rows(reg_rows).expect("rows"),
                mu: 0.25,
                r: 0.55,
                weight: WeightMap::AbsCoord { coord: 0 },
            }],
            feature_map: identity_map(8, 8),
            dim_data: 8,
            p_box: 1.0,
        })
        .expect("valid catalog problem")
    }
}
