//! Smooth, width-`ε` realizations of the mass-type point interactions.
//!
//! The singular interactions are approached by the Sturm–Liouville operator
//!
//! ```text
//! L^ε = −d/dx (1 + X₄V^ε) d/dx + X₂ dV^ε/dx,   V^ε(x) = exp(−x²/ε²) / (ε√π)
//! ```
//!
//! together with the position-dependent-mass profiles it comes from. This
//! module evaluates those profiles, extracts the effective boundary matrix of
//! `L^ε` by propagating through the defect, discretizes it for an independent
//! spectral check, and measures how the extracted matrix behaves as `ε → 0`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extensions::{boundary_matrix, BoundaryMatrix, ExtensionKind};
use crate::numerics::{propagate, quadrature, tridiag_eigs, Complex2x2, RealInterval};
use crate::scattering::free_propagator;

/// Coefficients are switched off beyond this many widths, where the Gaussian
/// is below `1e−27` of its peak.
pub const SUPPORT_WIDTHS: f64 = 8.0;

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("regularization width must be positive, got {eps}")))
    }
}

/// Normalized Gaussian `exp(−x²/ε²)/(ε√π)`.
pub fn v_eps(x: f64, eps: f64) -> f64 {
    (-(x / eps).powi(2)).exp() / (eps * PI.sqrt())
}

pub fn v_eps_prime(x: f64, eps: f64) -> f64 {
    -2.0 * x / (eps * eps) * v_eps(x, eps)
}

pub fn v_eps_second(x: f64, eps: f64) -> f64 {
    let e2 = eps * eps;
    (4.0 * x * x / (e2 * e2) - 2.0 / e2) * v_eps(x, eps)
}

/// Shape of a regularized inverse-mass profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProfileKind {
    /// `1/m = 2(1 + X₄V^ε)`.
    Bump { x4: f64 },
    /// `1/m = 1/m₀ + 2X₂∫₀ˣV^ε = 1/m₀ + X₂ erf(x/ε)`.
    Jump { x2: f64, m0: f64 },
}

/// An `ε`-regularized inverse-mass profile with `1/m > 0` everywhere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MassProfile {
    pub kind: ProfileKind,
    pub eps: f64,
}

impl MassProfile {
    pub fn bump(x4: f64, eps: f64) -> Result<Self> {
        check_eps(eps)?;
        if !x4.is_finite() {
            return Err(Error::invalid("X4 must be finite"));
        }
        // The minimum of 1 + X₄V^ε sits at the origin when X₄ < 0.
        let floor = 2.0 * (1.0 + x4.min(0.0) * v_eps(0.0, eps));
        if !(floor > 0.0) {
            return Err(Error::InvalidProfile { x: 0.0, value: floor });
        }
        Ok(Self { kind: ProfileKind::Bump { x4 }, eps })
    }

    /// Mass jump around inverse mass `1/m₀` at the origin.
    pub fn jump(x2: f64, eps: f64, m0: f64) -> Result<Self> {
        check_eps(eps)?;
        if !x2.is_finite() || !(m0 > 0.0) || !m0.is_finite() {
            return Err(Error::invalid(format!("invalid jump parameters X2 = {x2}, m0 = {m0}")));
        }
        // erf ranges over (−1, 1), so the infimum is 1/m₀ − |X₂|.
        let floor = 1.0 / m0 - x2.abs();
        if !(floor > 0.0) {
            let x = if x2 > 0.0 { f64::NEG_INFINITY } else { f64::INFINITY };
            return Err(Error::InvalidProfile { x, value: floor });
        }
        Ok(Self { kind: ProfileKind::Jump { x2, m0 }, eps })
    }

    /// Jump with the unit-fixing choice `m₀ = 1/2`, under which the
    /// asymptotic inverse masses are `2 ± X₂`.
    pub fn jump_unit(x2: f64, eps: f64) -> Result<Self> {
        Self::jump(x2, eps, 0.5)
    }

    pub fn param(&self) -> f64 {
        match self.kind {
            ProfileKind::Bump { x4 } => x4,
            ProfileKind::Jump { x2, .. } => x2,
        }
    }

    /// `(1/m, (1/m)′, (1/m)″)` at `x`.
    pub fn inverse_mass_derivatives(&self, x: f64) -> [f64; 3] {
        let eps = self.eps;
        match self.kind {
            ProfileKind::Bump { x4 } => {
                [2.0 * (1.0 + x4 * v_eps(x, eps)), 2.0 * x4 * v_eps_prime(x, eps), 2.0 * x4 * v_eps_second(x, eps)]
            }
            ProfileKind::Jump { x2, m0 } => {
                [1.0 / m0 + x2 * libm::erf(x / eps), 2.0 * x2 * v_eps(x, eps), 2.0 * x2 * v_eps_prime(x, eps)]
            }
        }
    }
}

/// `1/m(x)`.
pub fn inverse_mass(profile: &MassProfile, x: f64) -> Result<f64> {
    let value = profile.inverse_mass_derivatives(x)[0];
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidProfile { x, value })
    }
}

/// `∫(1/(2m) − 1) dx` for a bump profile; the bump strength `X₄` for every `ε`.
pub fn x4_recover(profile: &MassProfile) -> Result<f64> {
    if !matches!(profile.kind, ProfileKind::Bump { .. }) {
        return Err(Error::invalid("X4 recovery needs a bump profile"));
    }
    let r = SUPPORT_WIDTHS * profile.eps;
    let grid = RealInterval::with_spacing(-r, r, profile.eps / 2.0)?;
    quadrature(|x| 0.5 * profile.inverse_mass_derivatives(x)[0] - 1.0, &grid, 1e-14)
}

/// `L^ε` in the form `−(pψ′)′ + qψ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegularizedOperator {
    pub x2: f64,
    pub x4: f64,
    pub eps: f64,
    pub support_radius: f64,
}

impl RegularizedOperator {
    /// `1 + X₄V^ε`, exactly 1 outside the support.
    pub fn p(&self, x: f64) -> f64 {
        if x.abs() > self.support_radius {
            1.0
        } else {
            1.0 + self.x4 * v_eps(x, self.eps)
        }
    }

    /// `X₂ dV^ε/dx`, exactly 0 outside the support.
    pub fn q(&self, x: f64) -> f64 {
        if x.abs() > self.support_radius {
            0.0
        } else {
            self.x2 * v_eps_prime(x, self.eps)
        }
    }

    /// The singular interaction this operator is meant to approach, if the
    /// parameters select a single extension (or none).
    pub fn target(&self) -> Result<BoundaryMatrix> {
        match (self.x2 != 0.0, self.x4 != 0.0) {
            (false, false) => boundary_matrix(ExtensionKind::X1(0.0)),
            (true, false) => boundary_matrix(ExtensionKind::X2(self.x2)),
            (false, true) => boundary_matrix(ExtensionKind::X4(self.x4)),
            (true, true) => {
                Err(Error::invalid("no single-extension target for simultaneous X2 and X4; regularize them separately"))
            }
        }
    }
}

pub fn build_operator(x2: f64, x4: f64, eps: f64) -> Result<RegularizedOperator> {
    check_eps(eps)?;
    if !x2.is_finite() || !x4.is_finite() {
        return Err(Error::invalid("operator parameters must be finite"));
    }
    let p0 = 1.0 + x4.min(0.0) * v_eps(0.0, eps);
    if !(p0 > 0.0) {
        return Err(Error::invalid(format!("1 + X4 V(0) = {p0} is not positive")));
    }
    Ok(RegularizedOperator { x2, x4, eps, support_radius: SUPPORT_WIDTHS * eps })
}

/// Effective boundary matrix of `op` seen from outside `[−a, a]` at energy
/// `k²`.
///
/// Propagates the fundamental solutions across `[−a, a]` and strips the free
/// evolution on both sides: `M = P(k, a)⁻¹ · Φ(−a → a) · P(k, a)⁻¹`.
pub fn extract_bc(op: &RegularizedOperator, k: f64, a: f64, tol: f64) -> Result<BoundaryMatrix> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::invalid(format!("k must be positive, got {k}")));
    }
    if !(a >= op.support_radius) || !a.is_finite() {
        return Err(Error::invalid(format!("half-width {a} must cover the coefficient support {}", op.support_radius)));
    }
    let grid = RealInterval::with_spacing(-a, a, op.eps / 4.0)?;
    let p = |x: f64| op.p(x);
    let q = |x: f64| op.q(x);
    let c1 = propagate(p, q, k, [1.0, 0.0], &grid, tol)?;
    let c2 = propagate(p, q, k, [0.0, 1.0], &grid, tol)?;
    let phi = Complex2x2::real(c1[0], c2[0], c1[1], c2[1]);
    let free_inv =
        free_propagator(k, a)?.matrix.inverse().ok_or_else(|| Error::numerical("free propagator is singular"))?;
    Ok(BoundaryMatrix::custom(free_inv * phi * free_inv))
}

/// Exponent `α` of the kinetic ordering together with a mass profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EffPotentialSpec {
    pub alpha: f64,
    pub profile: MassProfile,
}

/// `V_α = (1/32)(1 + 4α)[(1 − 4α)(1/m)(1/m)′ + 4(1/m)″]`, derivatives in `x`.
pub fn effective_potential(spec: &EffPotentialSpec, x: f64) -> f64 {
    let [u, du, d2u] = spec.profile.inverse_mass_derivatives(x);
    let a = spec.alpha;
    (1.0 + 4.0 * a) * ((1.0 - 4.0 * a) * u * du + 4.0 * d2u) / 32.0
}

/// `(X₄/8)[2V″ + (X₄V + 1)V′]`, the mass-bump potential at `α = 0`.
pub fn x4_standard_form(x4: f64, eps: f64, x: f64) -> f64 {
    x4 / 8.0 * (2.0 * v_eps_second(x, eps) + (x4 * v_eps(x, eps) + 1.0) * v_eps_prime(x, eps))
}

/// `η(x) = ∫₀ˣ √(2m(y)) dy`, the coordinate in which the kinetic term has
/// unit mass `1/2`.
pub fn eta_map(profile: &MassProfile, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if x > 0.0 { (0.0, x, 1.0) } else { (x, 0.0, -1.0) };
    let grid = RealInterval::with_spacing(lo, hi, profile.eps / 2.0)?;
    let integrand = |y: f64| (2.0 / profile.inverse_mass_derivatives(y)[0]).sqrt();
    Ok(sign * quadrature(integrand, &grid, 1e-13)?)
}

/// Lowest `n_lowest` Dirichlet eigenvalues of `op` on `domain`, from the
/// flux-conserving three-point scheme on `n` interior nodes.
///
/// With `h = width/(n + 1)` the matrix has diagonal
/// `(p(x_{i−½}) + p(x_{i+½}))/h² + q(x_i)` and off-diagonal `−p(x_{i+½})/h²`.
pub fn discretize_and_eigs(
    op: &RegularizedOperator,
    domain: &RealInterval,
    n: usize,
    n_lowest: usize,
) -> Result<Vec<f64>> {
    if n < 50 {
        return Err(Error::invalid(format!("need at least 50 interior nodes, got {n}")));
    }
    let h = domain.width() / (n + 1) as f64;
    let h2 = h * h;
    let node = |i: usize| domain.lo() + i as f64 * h;
    let mid = |i: usize| domain.lo() + (i as f64 + 0.5) * h;
    let diagonal: Vec<f64> = (1..=n).map(|i| (op.p(mid(i - 1)) + op.p(mid(i))) / h2 + op.q(node(i))).collect();
    let offdiagonal: Vec<f64> = (1..n).map(|i| -op.p(mid(i)) / h2).collect();
    tridiag_eigs(&diagonal, &offdiagonal, n_lowest)
}

/// `(1 + 4α)/32 [(4α − 1)(1/m)′²/(1/m) + 4(1/m)″]`, derivatives in `x`.
///
/// This is what the ordering `−½ m^α D m^β D m^α` (`2α + β = −1`) becomes
/// after the change of variable to `η` and `ψ = (2m)^{1/4} φ`. It agrees
/// with [`effective_potential`] at `α = ±1/4` only.
pub fn transformed_potential(spec: &EffPotentialSpec, x: f64) -> f64 {
    let [u, du, d2u] = spec.profile.inverse_mass_derivatives(x);
    let a = spec.alpha;
    (1.0 + 4.0 * a) * ((4.0 * a - 1.0) * du * du / u + 4.0 * d2u) / 32.0
}

/// Dirichlet spectra of one ordered mass operator and of its two candidate
/// transforms in `η`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransformComparison {
    pub alpha: f64,
    pub half_width: f64,
    /// `−½ m^α D m^β D m^α` on `[−a, a]`.
    pub direct: Vec<f64>,
    /// `−d²/dη² + V_α` from [`effective_potential`].
    pub displayed: Vec<f64>,
    /// `−d²/dη² +` [`transformed_potential`].
    pub exact: Vec<f64>,
    /// Max relative eigenvalue deviation from `direct`.
    pub displayed_deviation: f64,
    pub exact_deviation: f64,
}

/// Compares the spectrum of the position-dependent-mass operator with the
/// spectra of the constant-mass operators in `η` carrying the effective
/// potential, on `n` interior nodes in each variable.
pub fn compare_transformed_spectra(
    spec: &EffPotentialSpec,
    half_width: f64,
    n: usize,
    n_lowest: usize,
) -> Result<TransformComparison> {
    if n < 50 {
        return Err(Error::invalid(format!("need at least 50 interior nodes, got {n}")));
    }
    if !spec.alpha.is_finite() {
        return Err(Error::invalid("alpha must be finite"));
    }
    let profile = spec.profile;
    let a = half_width;
    if !(a >= SUPPORT_WIDTHS * profile.eps) || !a.is_finite() {
        return Err(Error::invalid(format!("half-width {a} must cover the support 8ε")));
    }
    inverse_mass(&profile, 0.0)?;
    inverse_mass(&profile, -a)?;
    inverse_mass(&profile, a)?;
    let u = |x: f64| profile.inverse_mass_derivatives(x)[0];

    // H = ½ W A W with A = −D m^β D and W = m^α, both on the x grid.
    let alpha = spec.alpha;
    let h = 2.0 * a / (n + 1) as f64;
    let node = |i: usize| -a + i as f64 * h;
    let outer = |x: f64| u(x).powf(1.0 + 2.0 * alpha);
    let w: Vec<f64> = (0..=n + 1).map(|i| u(node(i)).powf(-alpha)).collect();
    let diagonal: Vec<f64> =
        (1..=n).map(|i| 0.5 * w[i] * w[i] * (outer(node(i) - h / 2.0) + outer(node(i) + h / 2.0)) / (h * h)).collect();
    let offdiagonal: Vec<f64> = (1..n).map(|i| -0.5 * w[i] * w[i + 1] * outer(node(i) + h / 2.0) / (h * h)).collect();
    let direct = tridiag_eigs(&diagonal, &offdiagonal, n_lowest)?;

    // x(η) from dx/dη = √(1/(2m)), RK4 with four substeps per node.
    let eta_lo = eta_map(&profile, -a)?;
    let eta_hi = eta_map(&profile, a)?;
    let h_eta = (eta_hi - eta_lo) / (n + 1) as f64;
    let slope = |x: f64| (0.5 * u(x)).sqrt();
    let mut xs = Vec::with_capacity(n);
    let mut x = -a;
    let sub = h_eta / 4.0;
    for _ in 0..n {
        for _ in 0..4 {
            let k1 = slope(x);
            let k2 = slope(x + 0.5 * sub * k1);
            let k3 = slope(x + 0.5 * sub * k2);
            let k4 = slope(x + sub * k3);
            x += sub * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        }
        xs.push(x);
    }
    let free_eigs = |v: &dyn Fn(f64) -> f64| {
        let diagonal: Vec<f64> = xs.iter().map(|&x| 2.0 / (h_eta * h_eta) + v(x)).collect();
        tridiag_eigs(&diagonal, &vec![-1.0 / (h_eta * h_eta); n - 1], n_lowest)
    };
    let displayed = free_eigs(&|x| effective_potential(spec, x))?;
    let exact = free_eigs(&|x| transformed_potential(spec, x))?;

    let deviation =
        |other: &[f64]| direct.iter().zip(other).map(|(d, o)| (d - o).abs() / d.abs().max(1.0)).fold(0.0, f64::max);
    Ok(TransformComparison {
        alpha,
        half_width: a,
        displayed_deviation: deviation(&displayed),
        exact_deviation: deviation(&exact),
        direct,
        displayed,
        exact,
    })
}

/// Distance of the extracted boundary matrix from its singular target along a
/// sequence of shrinking widths.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub x2: f64,
    pub x4: f64,
    pub k: f64,
    pub half_width: f64,
    /// Target matrix (real, row-major).
    pub target: [[f64; 2]; 2],
    pub eps_values: Vec<f64>,
    /// Max-entry distance from the target at each width.
    pub errors: Vec<f64>,
    pub determinants: Vec<f64>,
    /// Extracted matrices (real, row-major).
    pub matrices: Vec<[[f64; 2]; 2]>,
    /// Least-squares slope of `log error` against `log ε`; absent with fewer
    /// than two positive errors.
    pub estimated_order: Option<f64>,
}

impl ConvergenceReport {
    /// Successive ratios `errors[i] / errors[i+1]`.
    pub fn ratios(&self) -> Vec<f64> {
        self.errors.windows(2).map(|w| w[0] / w[1]).collect()
    }
}

fn real_rows(m: &Complex2x2) -> [[f64; 2]; 2] {
    [[m.a11.re, m.a12.re], [m.a21.re, m.a22.re]]
}

/// Runs [`extract_bc`] for each width and compares with the target extension.
pub fn convergence_study(x2: f64, x4: f64, eps_values: &[f64], k: f64, a: f64, tol: f64) -> Result<ConvergenceReport> {
    if eps_values.is_empty() {
        return Err(Error::invalid("need at least one width"));
    }
    if eps_values.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(Error::invalid("widths must be strictly descending"));
    }
    let widest = eps_values[0];
    if !(a >= SUPPORT_WIDTHS * widest) {
        return Err(Error::invalid(format!("half-width {a} must be at least {}", SUPPORT_WIDTHS * widest)));
    }
    let target = build_operator(x2, x4, widest)?.target()?;
    let mut errors = Vec::with_capacity(eps_values.len());
    let mut determinants = Vec::with_capacity(eps_values.len());
    let mut matrices = Vec::with_capacity(eps_values.len());
    for &eps in eps_values {
        let op = build_operator(x2, x4, eps)?;
        let m = extract_bc(&op, k, a, tol)?;
        errors.push(m.matrix().max_abs_diff(target.matrix()));
        determinants.push(m.det().re);
        matrices.push(real_rows(m.matrix()));
    }
    if errors.iter().any(|e| !e.is_finite()) {
        return Err(Error::numerical("non-finite error in convergence study"));
    }
    Ok(ConvergenceReport {
        x2,
        x4,
        k,
        half_width: a,
        target: real_rows(target.matrix()),
        estimated_order: log_slope(eps_values, &errors),
        eps_values: eps_values.to_vec(),
        errors,
        determinants,
        matrices,
    })
}

fn log_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs.iter().zip(ys).filter(|(_, &y)| y > 0.0).map(|(&x, &y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::find_roots;

    #[test]
    fn gaussian_examples() {
        assert!((v_eps(0.0, 1.0) - 0.564_189_583_547_756_3).abs() < 1e-15);
        assert_eq!(v_eps_prime(0.0, 0.3), 0.0);
        for eps in [0.05, 0.3, 2.0] {
            let r = SUPPORT_WIDTHS * eps;
            let grid = RealInterval::with_spacing(-r, r, eps / 2.0).unwrap();
            let total = quadrature(|x| v_eps(x, eps), &grid, 1e-14).unwrap();
            assert!((total - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn gaussian_derivatives_match_finite_differences() {
        let (eps, h) = (0.4, 1e-5);
        for x in [-0.7, -0.1, 0.25, 0.9] {
            let d1 = (v_eps(x + h, eps) - v_eps(x - h, eps)) / (2.0 * h);
            let d2 = (v_eps_prime(x + h, eps) - v_eps_prime(x - h, eps)) / (2.0 * h);
            assert!((d1 - v_eps_prime(x, eps)).abs() < 1e-8);
            assert!((d2 - v_eps_second(x, eps)).abs() < 1e-7);
        }
    }

    #[test]
    fn profile_examples() {
        let free = MassProfile::bump(0.0, 0.2).unwrap();
        for x in [-3.0, 0.0, 0.4] {
            assert_eq!(inverse_mass(&free, x).unwrap(), 2.0);
        }
        let jump = MassProfile::jump_unit(2.0 / 3.0, 0.1).unwrap();
        assert_eq!(inverse_mass(&jump, 0.0).unwrap(), 2.0);
        assert!((inverse_mass(&jump, 10.0).unwrap() - 8.0 / 3.0).abs() < 1e-15);
        assert!((inverse_mass(&jump, -10.0).unwrap() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_profiles_are_rejected() {
        assert!(matches!(MassProfile::jump_unit(2.0, 0.1), Err(Error::InvalidProfile { .. })));
        assert!(matches!(MassProfile::bump(-1.0, 0.1), Err(Error::InvalidProfile { .. })));
        assert!(MassProfile::bump(-0.1, 0.1).is_ok());
        assert!(MassProfile::bump(1.0, 0.0).is_err());
        assert!(build_operator(0.0, -1.0, 0.1).is_err());
    }

    #[test]
    fn x4_recovery_is_width_independent() {
        assert_eq!(x4_recover(&MassProfile::bump(0.0, 0.1).unwrap()).unwrap(), 0.0);
        for eps in [0.1, 0.05, 1.0] {
            let v = x4_recover(&MassProfile::bump(3.0, eps).unwrap()).unwrap();
            assert!((v - 3.0).abs() < 1e-10, "{eps}: {v}");
        }
        assert!(x4_recover(&MassProfile::jump_unit(0.5, 0.1).unwrap()).is_err());
    }

    #[test]
    fn operator_examples() {
        let free = build_operator(0.0, 0.0, 0.1).unwrap();
        assert_eq!((free.p(0.3), free.q(0.3)), (1.0, 0.0));
        let x2 = build_operator(2.0 / 3.0, 0.0, 0.1).unwrap();
        assert_eq!(x2.q(0.0), 0.0);
        assert_eq!(x2.q(0.05), -x2.q(-0.05));
        assert_eq!(x2.support_radius, 0.8);
        let x4 = build_operator(0.0, 1.0, 0.1).unwrap();
        assert!((x4.p(0.0) - 6.641_895_835_477_563).abs() < 1e-12);
        assert_eq!(x4.p(0.81), 1.0);
    }

    #[test]
    fn jump_coefficient_identity() {
        for (x2, eps) in [(2.0 / 3.0, 0.3), (-0.5, 0.1), (1.2, 0.05)] {
            let profile = MassProfile::jump_unit(x2, eps).unwrap();
            for i in -40..=40 {
                let x = i as f64 * eps / 10.0;
                let [_, _, d2u] = profile.inverse_mass_derivatives(x);
                assert!((0.5 * d2u - x2 * v_eps_prime(x, eps)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn jump_inverse_mass_derivative_matches_finite_difference() {
        let profile = MassProfile::jump_unit(0.7, 0.2).unwrap();
        let h = 1e-6;
        for x in [-0.3, 0.0, 0.15] {
            let fd = (inverse_mass(&profile, x + h).unwrap() - inverse_mass(&profile, x - h).unwrap()) / (2.0 * h);
            assert!((fd - profile.inverse_mass_derivatives(x)[1]).abs() < 1e-8);
        }
    }

    #[test]
    fn effective_potential_examples() {
        let bump = MassProfile::bump(1.0, 0.3).unwrap();
        let jump = MassProfile::jump_unit(2.0 / 3.0, 0.3).unwrap();
        for profile in [bump, jump] {
            let spec = EffPotentialSpec { alpha: -0.25, profile };
            assert_eq!(effective_potential(&spec, 0.2), 0.0);
        }
        let at_zero = effective_potential(&EffPotentialSpec { alpha: 0.0, profile: bump }, 0.0);
        assert!((at_zero - 0.25 * v_eps_second(0.0, 0.3)).abs() < 1e-12);
        for x in [-0.4, 0.0, 0.1, 0.5] {
            let v = effective_potential(&EffPotentialSpec { alpha: 0.25, profile: jump }, x);
            assert!((v - 0.5 * (2.0 / 3.0) * v_eps_prime(x, 0.3)).abs() < 1e-12);
        }
    }

    #[test]
    fn bump_potential_matches_standard_form() {
        for x4 in [0.5, 1.0, 2.0] {
            for eps in [0.1, 0.3] {
                let spec = EffPotentialSpec { alpha: 0.0, profile: MassProfile::bump(x4, eps).unwrap() };
                for i in -50..=50 {
                    let x = i as f64 * eps / 10.0;
                    let a = effective_potential(&spec, x);
                    let b = x4_standard_form(x4, eps, x);
                    assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()), "{x4} {eps} {x}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn transformed_potential_agrees_with_displayed_only_at_quarter() {
        let profile = MassProfile::jump_unit(0.5, 0.2).unwrap();
        for x in [-0.3, -0.05, 0.1, 0.4] {
            for alpha in [-0.25, 0.25] {
                let spec = EffPotentialSpec { alpha, profile };
                let (d, e) = (effective_potential(&spec, x), transformed_potential(&spec, x));
                assert!((d - e).abs() <= 1e-13 * d.abs().max(1.0), "alpha {alpha}, x {x}");
            }
            let spec = EffPotentialSpec { alpha: 0.0, profile };
            assert!((effective_potential(&spec, x) - transformed_potential(&spec, x)).abs() > 1e-3);
        }
    }

    #[test]
    fn transformed_spectra_track_the_ordered_operator() {
        let jump = MassProfile::jump_unit(2.0 / 3.0, 0.1).unwrap();
        let bump = MassProfile::bump(1.0, 0.1).unwrap();
        for (profile, alpha, exact_tol) in [(jump, 0.0, 1e-5), (jump, -0.5, 1e-5), (bump, -0.5, 1e-3)] {
            let spec = EffPotentialSpec { alpha, profile };
            let coarse = compare_transformed_spectra(&spec, 1.0, 400, 4).unwrap();
            let fine = compare_transformed_spectra(&spec, 1.0, 800, 4).unwrap();
            assert!(fine.exact_deviation < exact_tol, "{:?} {alpha}: {}", profile.kind, fine.exact_deviation);
            // Second order in the node spacing.
            let ratio = coarse.exact_deviation / fine.exact_deviation;
            assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
            // The displayed potential misses the ordering term and does not converge.
            assert!(fine.displayed_deviation > 0.05);
            assert!((fine.displayed_deviation - coarse.displayed_deviation).abs() < 1e-2 * fine.displayed_deviation);
        }
        let spec = EffPotentialSpec { alpha: -0.25, profile: jump };
        let c = compare_transformed_spectra(&spec, 1.0, 800, 4).unwrap();
        assert_eq!(c.displayed, c.exact);
        assert!(c.exact_deviation < 1e-5);
    }

    #[test]
    fn transform_comparison_rejects_bad_input() {
        let profile = MassProfile::bump(1.0, 0.2).unwrap();
        let spec = EffPotentialSpec { alpha: 0.0, profile };
        assert!(compare_transformed_spectra(&spec, 1.0, 400, 4).is_err());
        assert!(compare_transformed_spectra(&spec, 2.0, 10, 4).is_err());
        let spec = EffPotentialSpec { alpha: f64::NAN, profile };
        assert!(compare_transformed_spectra(&spec, 2.0, 400, 4).is_err());
    }

    #[test]
    fn eta_examples() {
        let free = MassProfile::bump(0.0, 0.1).unwrap();
        for x in [-2.0, 0.5, 3.0] {
            assert!((eta_map(&free, x).unwrap() - x).abs() < 1e-13);
        }
        let bump = MassProfile::bump(1.0, 0.1).unwrap();
        assert!(eta_map(&bump, 1.0).unwrap() < 1.0);

        // m₋ = 3/4, m₊ = 3/8: far-field slopes √(2m±).
        let jump = MassProfile::jump_unit(2.0 / 3.0, 0.1).unwrap();
        let slope = |x: f64| (eta_map(&jump, x + 0.5).unwrap() - eta_map(&jump, x).unwrap()) / 0.5;
        let (minus, plus) = (slope(-3.0), slope(3.0));
        assert!((minus / plus - 2.0_f64.sqrt()).abs() < 1e-12);
        assert!((plus.powi(2) * inverse_mass(&jump, 3.0).unwrap() / 2.0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eta_is_increasing() {
        let profile = MassProfile::jump_unit(-1.1, 0.2).unwrap();
        let values: Vec<f64> = (-20..=20).map(|i| eta_map(&profile, i as f64 * 0.1).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn free_operator_extracts_identity() {
        let op = build_operator(0.0, 0.0, 0.1).unwrap();
        for (k, a) in [(0.5, 1.0), (2.0, 3.0)] {
            let m = extract_bc(&op, k, a, 1e-10).unwrap();
            assert!(m.matrix().max_abs_diff(&Complex2x2::identity()) < 1e-9);
        }
        assert!(extract_bc(&op, 1.0, 0.5, 1e-10).is_err());
        assert!(extract_bc(&op, 0.0, 1.0, 1e-10).is_err());
    }

    #[test]
    fn extracted_matrices_are_unimodular() {
        let tol = 1e-10;
        for (x2, x4, eps) in [(2.0 / 3.0, 0.0, 0.1), (0.0, 1.0, 0.05), (-0.4, 0.7, 0.2)] {
            let op = build_operator(x2, x4, eps).unwrap();
            let m = extract_bc(&op, 1.3, 2.0, tol).unwrap();
            assert!((m.det() - 1.0).norm() < 10.0 * tol);
            assert!(m.matrix().is_real(1e-15));
        }
    }

    fn k_spread(x2: f64, x4: f64, eps: f64) -> f64 {
        let op = build_operator(x2, x4, eps).unwrap();
        let lo = extract_bc(&op, 0.5, 1.0, 1e-11).unwrap();
        let hi = extract_bc(&op, 2.0, 1.0, 1e-11).unwrap();
        lo.matrix().max_abs_diff(hi.matrix())
    }

    #[test]
    fn extracted_matrix_loses_energy_dependence() {
        for (x2, x4) in [(2.0 / 3.0, 0.0), (0.0, 1.0)] {
            let spreads: Vec<f64> = [0.1, 0.05, 0.025].iter().map(|&e| k_spread(x2, x4, e)).collect();
            assert!(spreads.windows(2).all(|w| w[1] < w[0]), "{spreads:?}");
        }
    }

    // Frozen from an independent adaptive 8th-order integration (rtol 1e-12)
    // of the same operator at k = 1, a = 1.
    #[test]
    fn bump_limit_is_transparent() {
        let m12: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&eps| extract_bc(&build_operator(0.0, 1.0, eps).unwrap(), 1.0, 1.0, 1e-11).unwrap().matrix().a12.re)
            .collect();
        for (got, want) in m12.iter().zip([-0.240, -0.145, -0.084]) {
            assert!((got - want).abs() < 2e-3, "{m12:?}");
        }
    }

    #[test]
    fn jump_limit_diagonal_and_growing_coupling() {
        let ms: Vec<[[f64; 2]; 2]> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&eps| {
                real_rows(extract_bc(&build_operator(2.0 / 3.0, 0.0, eps).unwrap(), 1.0, 1.0, 1e-11).unwrap().matrix())
            })
            .collect();
        for (m, want) in ms.iter().zip([-1.73, -3.52, -7.07]) {
            assert!((m[1][0] - want).abs() < 2e-2, "{ms:?}");
        }
        let last = ms[2];
        assert!((last[0][0] - 1.883).abs() < 1e-2 && (last[1][1] - 0.560).abs() < 1e-2, "{last:?}");
    }

    #[test]
    fn convergence_study_free_case() {
        let r = convergence_study(0.0, 0.0, &[0.2, 0.1, 0.05], 1.0, 2.0, 1e-10).unwrap();
        assert!(r.errors.iter().all(|&e| e < 1e-9));
        assert_eq!(r.target, [[1.0, 0.0], [0.0, 1.0]]);
    }

    #[test]
    fn convergence_study_validation() {
        assert!(convergence_study(0.5, 0.0, &[0.1, 0.2], 1.0, 2.0, 1e-10).is_err());
        assert!(convergence_study(0.5, 0.0, &[0.2, 0.1], 1.0, 1.0, 1e-10).is_err());
        assert!(convergence_study(0.5, 1.0, &[0.1], 1.0, 1.0, 1e-10).is_err());
        assert!(convergence_study(0.5, 0.0, &[], 1.0, 1.0, 1e-10).is_err());
    }

    #[test]
    fn log_slope_of_power_law() {
        let xs = [0.2, 0.1, 0.05];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x * x).collect();
        assert!((log_slope(&xs, &ys).unwrap() - 2.0).abs() < 1e-12);
        assert!(log_slope(&xs, &[0.0, 0.0, 1.0]).is_none());
    }

    #[test]
    fn free_box_ground_state() {
        let op = build_operator(0.0, 0.0, 0.1).unwrap();
        let domain = RealInterval::new(0.0, PI, 2).unwrap();
        let coarse = discretize_and_eigs(&op, &domain, 99, 1).unwrap()[0];
        let fine = discretize_and_eigs(&op, &domain, 199, 1).unwrap()[0];
        assert!((fine - 1.0).abs() < (coarse - 1.0).abs());
        // Second-order error: halving h quarters it.
        assert!(((coarse - 1.0) / (fine - 1.0) - 4.0).abs() < 1e-2);
        assert!(discretize_and_eigs(&op, &domain, 10, 1).is_err());
    }

    #[test]
    fn bump_box_richardson_ratio() {
        let op = build_operator(0.0, 1.0, 0.2).unwrap();
        let domain = RealInterval::new(-5.0, 5.0, 2).unwrap();
        let e: Vec<Vec<f64>> =
            [250, 500, 1000].iter().map(|&cells| discretize_and_eigs(&op, &domain, cells - 1, 3).unwrap()).collect();
        for (level, ((a, b), c)) in e[0].iter().zip(&e[1]).zip(&e[2]).enumerate() {
            let ratio = (a - b) / (b - c);
            assert!((ratio - 4.0).abs() < 0.05, "level {level}: {ratio}");
        }
    }

    #[test]
    fn jump_box_matches_shooting() {
        let op = build_operator(2.0 / 3.0, 0.0, 0.2).unwrap();
        let domain = RealInterval::new(-5.0, 5.0, 2).unwrap();
        let shoot_grid = RealInterval::with_spacing(-5.0, 5.0, 0.05).unwrap();
        let end = |k: f64| propagate(|x| op.p(x), |x| op.q(x), k, [0.0, 1.0], &shoot_grid, 1e-12).unwrap()[0];
        let scan = RealInterval::new(0.05, 1.6, 200).unwrap();
        let mut energies: Vec<f64> = find_roots(end, &scan, 1e-13).unwrap().iter().map(|k| k * k).collect();
        // Bound states E = −κ²: shoot −(pψ′)′ + (q + κ²)ψ = 0.
        let bound = |kappa: f64| {
            propagate(|x| op.p(x), |x| op.q(x) + kappa * kappa, 0.0, [0.0, 1.0], &shoot_grid, 1e-12).unwrap()[0]
        };
        let scan = RealInterval::new(0.01, 5.0, 200).unwrap();
        energies.extend(find_roots(bound, &scan, 1e-13).unwrap().iter().map(|k| -k * k));
        energies.sort_by(|a, b| a.total_cmp(b));
        assert!(energies[0] < 0.0 && energies.len() >= 5);
        let fd = discretize_and_eigs(&op, &domain, 1999, energies.len()).unwrap();
        for (e_shoot, e) in energies.iter().zip(&fd) {
            assert!((e_shoot - e).abs() < 1e-4 * (1.0 + e.abs()), "{e_shoot} vs {e}");
        }
    }
}
