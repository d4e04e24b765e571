//! Spectra of a ring of circumference `L` carrying one point defect.
//!
//! Following a state once around the ring gives `(ψ, ψ′) = M·P(kL)·(ψ, ψ′)`
//! at the defect, so the eigen-wavenumbers are the zeros of the secular
//! function `det(M·P(kL) − I)`. Without a defect the levels `k = 2πn/L` are
//! doubly degenerate (`±n`). Potential-like defects (X₁, X₄) shift one member
//! of each doublet and leave the other, which vanishes at the defect, in
//! place. Magnetic defects (X₂, X₃) split each doublet symmetrically about
//! the free level, the ring analogue of a Zeeman splitting.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extensions::{boundary_matrix, flux_to_x3, BoundaryMatrix, ExtensionKind, FluxParam, MassRatio};
use crate::numerics::{bisect, find_roots, golden_min, Complex2x2, RealInterval};

/// A ring with one defect.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleSpec {
    circumference: f64,
    bc: BoundaryMatrix,
}

impl CircleSpec {
    pub fn new(circumference: f64, bc: BoundaryMatrix) -> Result<Self> {
        if !(circumference > 0.0) || !circumference.is_finite() {
            return Err(Error::invalid(format!("circumference must be positive, got {circumference}")));
        }
        Ok(Self { circumference, bc })
    }

    pub fn circumference(&self) -> f64 {
        self.circumference
    }

    pub fn bc(&self) -> &BoundaryMatrix {
        &self.bc
    }
}

// P(kL) for −ψ″ = k²ψ; the k → 0 limit of sin(kL)/k is L.
fn ring_propagator(k: f64, len: f64) -> Complex2x2 {
    let (s, c) = (k * len).sin_cos();
    let s_over_k = if k == 0.0 { len } else { s / k };
    Complex2x2::real(c, s_over_k, -k * s, c)
}

/// `det(M·P(kL) − I)` for `k > 0`.
///
/// For a real unimodular `M` this is the real number `2 − tr(M·P(kL))`.
pub fn secular_value(spec: &CircleSpec, k: f64) -> Complex64 {
    (*spec.bc.matrix() * ring_propagator(k, spec.circumference)).sub_identity().det()
}

/// `M = e^{iθ}·R` with `R` real and unimodular. The secular function then
/// factors as `e^{iθ}·(2cos θ − tr(R·P))`, and the real bracket carries all
/// the zeros.
struct RealSecular {
    theta: f64,
    r: [f64; 4],
    len: f64,
}

impl RealSecular {
    fn new(spec: &CircleSpec) -> Result<Self> {
        let m = spec.bc.matrix();
        let det = m.det();
        if (det.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "ring spectra need a boundary matrix with |det| = 1, got |det| = {}",
                det.norm()
            )));
        }
        let theta = 0.5 * det.arg();
        let r = m.scale(Complex64::from_polar(1.0, -theta));
        if !r.is_real(1e-12 * r.max_abs().max(1.0)) {
            return Err(Error::invalid("ring spectra need a boundary matrix that is real up to a global phase"));
        }
        Ok(Self { theta, r: [r.a11.re, r.a12.re, r.a21.re, r.a22.re], len: spec.circumference })
    }

    fn eval(&self, k: f64) -> f64 {
        let (s, c) = (k * self.len).sin_cos();
        let [r11, r12, r21, r22] = self.r;
        let trace = r11 * c - r12 * k * s + r21 * s / k + r22 * c;
        2.0 * self.theta.cos() - trace
    }

    fn scale(&self, k: f64) -> f64 {
        let norm = self.r.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        2.0 + 2.0 * norm * (1.0 + k + 1.0 / k)
    }
}

/// Branch label of a ring level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelBranch {
    /// At a free level `2πn/L`.
    Unshifted,
    /// Moved away from the free levels by a potential-like defect.
    Shifted,
    /// Above the nearest free level, on a magnetic ring.
    Plus,
    /// Below the nearest free level, on a magnetic ring.
    Minus,
}

impl LevelBranch {
    pub fn as_str(&self) -> &'static str {
        match self {
            LevelBranch::Unshifted => "unshifted",
            LevelBranch::Shifted => "shifted",
            LevelBranch::Plus => "plus",
            LevelBranch::Minus => "minus",
        }
    }
}

/// One eigen-wavenumber of the ring.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectrumRoot {
    pub k: f64,
    /// `E = k²`.
    pub energy: f64,
    /// 1 or 2.
    pub multiplicity: u32,
    pub branch: LevelBranch,
    /// Index `n` of the nearest free level `2πn/L`.
    pub level: i64,
}

/// Positive-energy spectrum of a ring, ascending in `k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub circumference: f64,
    pub k_max: f64,
    pub roots: Vec<SpectrumRoot>,
}

impl SpectrumResult {
    /// Wavenumbers with each doublet listed twice.
    pub fn expanded_wavenumbers(&self) -> Vec<f64> {
        self.roots.iter().flat_map(|r| std::iter::repeat_n(r.k, r.multiplicity as usize)).collect()
    }
}

/// All eigen-wavenumbers of the ring in `(0, k_max]`.
///
/// Simple zeros of the secular function are bracketed on a grid of spacing
/// `min(π/8, π/(4L))` and refined by bisection. Pairs of zeros hiding inside
/// one grid cell are exposed by minimising the secular function across the
/// cell. Degenerate doublets touch zero without crossing it; they can only
/// occur where `M·P(kL) = I`, so every `k = πn/L` is tested directly and
/// reported with multiplicity 2 when the whole matrix `M·P − I` vanishes.
pub fn circle_spectrum(spec: &CircleSpec, k_max: f64) -> Result<SpectrumResult> {
    if !(k_max > 0.0) || !k_max.is_finite() {
        return Err(Error::invalid(format!("k_max must be positive, got {k_max}")));
    }
    let len = spec.circumference;
    let secular = RealSecular::new(spec)?;
    let f = |k: f64| secular.eval(k);
    let spacing = (PI / 8.0).min(PI / (4.0 * len)).min(k_max / 8.0);
    let k_lo = k_max * 1e-12;
    let grid = RealInterval::with_spacing(k_lo, k_max, spacing)?;
    let refine_tol = 4.0 * f64::EPSILON * k_max;

    let mut simple = find_roots(f, &grid, refine_tol)?;

    // Hidden pairs: a local extremum of f that crosses zero between grid points.
    let xs: Vec<f64> = grid.points().collect();
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut tangent_candidates = Vec::new();
    for i in 1..xs.len().saturating_sub(1) {
        let (fa, fb, fc) = (fs[i - 1], fs[i], fs[i + 1]);
        let same_sign = fa.signum() == fb.signum() && fb.signum() == fc.signum() && fb != 0.0;
        if !same_sign || fb.abs() > fa.abs() || fb.abs() > fc.abs() {
            continue;
        }
        let sign = fb.signum();
        let (xm, vm) = golden_min(|x| sign * f(x), xs[i - 1], xs[i + 1], 1e-3 * refine_tol);
        if vm < 0.0 {
            let fm = f(xm);
            simple.push(bisect(&f, xs[i - 1], xm, fa, refine_tol)?);
            simple.push(bisect(&f, xm, xs[i + 1], fm, refine_tol)?);
        } else if vm <= 1e-12 * secular.scale(xm) {
            tangent_candidates.push(xm);
        }
    }

    // Doublets where M·P(kL) = I.
    let mut doublets = Vec::new();
    let m = spec.bc.matrix();
    let n_max = (k_max * len / PI).floor() as i64;
    for n in 1..=n_max {
        let k = PI * n as f64 / len;
        let residual = (*m * ring_propagator(k, len)).sub_identity();
        if residual.max_abs() <= 1e-9 * m.max_abs().max(1.0) * (1.0 + k) {
            doublets.push(k);
        }
    }
    // Tangential zeros away from k = πn/L (parabolic M·P): multiplicity from
    // the nullity of M·P − I.
    let mut tangential = Vec::new();
    for k in tangent_candidates {
        if doublets.iter().any(|d| (d - k).abs() < 1e-6) {
            continue;
        }
        let residual = (*m * ring_propagator(k, len)).sub_identity();
        let mult = if residual.max_abs() <= 1e-6 * m.max_abs().max(1.0) { 2 } else { 1 };
        tangential.push((k, mult));
    }

    simple.retain(|k| !doublets.iter().any(|d| (d - k).abs() < 1e-7 * (1.0 + d)));
    simple.sort_by(|a, b| a.total_cmp(b));
    simple.dedup_by(|b, a| (*b - *a).abs() <= 10.0 * refine_tol);

    let magnetic = spec.bc.extension().is_some_and(|e| e.is_magnetic());
    let mut roots: Vec<SpectrumRoot> = simple
        .into_iter()
        .map(|k| (k, 1))
        .chain(doublets.into_iter().map(|k| (k, 2)))
        .chain(tangential)
        .filter(|(k, _)| *k > k_lo && *k <= k_max)
        .map(|(k, multiplicity)| {
            let (level, branch) = classify(k, len, multiplicity, magnetic);
            SpectrumRoot { k, energy: k * k, multiplicity, branch, level }
        })
        .collect();
    roots.sort_by(|a, b| a.k.total_cmp(&b.k));
    Ok(SpectrumResult { circumference: len, k_max, roots })
}

fn classify(k: f64, len: f64, multiplicity: u32, magnetic: bool) -> (i64, LevelBranch) {
    let nu = k * len / (2.0 * PI);
    let level = nu.round();
    let delta = nu - level;
    let branch = if delta.abs() <= 1e-9 * nu.max(1.0) {
        LevelBranch::Unshifted
    } else if multiplicity == 2 || !magnetic {
        LevelBranch::Shifted
    } else if delta > 0.0 {
        LevelBranch::Plus
    } else {
        LevelBranch::Minus
    };
    (level as i64, branch)
}

/// Physical parameters of the closed-form ring equations (`L = 2`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClosedForm {
    X1(f64),
    X2(MassRatio),
    X3(FluxParam),
    X4(f64),
}

/// Left-minus-right of the closed-form spectral equations on the `L = 2`
/// ring:
///
/// * X₁: `sin k (X₁ cos k − 2k sin k)`
/// * X₂: `cos 2k − 2√μ/(1 + μ)`
/// * X₃: `cos 2πγ − cos 2k`
/// * X₄: `sin k (X₄ k cos k − 2 sin k)`
pub fn closed_form_residual(form: ClosedForm, k: f64) -> f64 {
    match form {
        ClosedForm::X1(x1) => k.sin() * (x1 * k.cos() - 2.0 * k * k.sin()),
        ClosedForm::X2(mu) => (2.0 * k).cos() - mu_cosine(mu),
        ClosedForm::X3(gamma) => (2.0 * PI * gamma.value()).cos() - (2.0 * k).cos(),
        ClosedForm::X4(x4) => k.sin() * (x4 * k * k.cos() - 2.0 * k.sin()),
    }
}

fn mu_cosine(mu: MassRatio) -> f64 {
    let s = mu.value().sqrt();
    2.0 / (s + 1.0 / s)
}

/// Roots of [`closed_form_residual`] in `(0, k_max]` with multiplicities.
///
/// Uses the factorised structure: the `sin k` factor of X₁/X₄ contributes
/// `k = πn` directly, and `cos 2k = c` touches zero tangentially only for
/// `c = ±1`, in which case the doublets sit at `πn` or `π(n + ½)`.
pub fn closed_form_roots(form: ClosedForm, k_max: f64) -> Result<Vec<(f64, u32)>> {
    if !(k_max > 0.0) || !k_max.is_finite() {
        return Err(Error::invalid(format!("k_max must be positive, got {k_max}")));
    }
    let refine_tol = 4.0 * f64::EPSILON * k_max;
    let k_lo = k_max * 1e-12;
    let grid = RealInterval::with_spacing(k_lo, k_max, PI / 16.0)?;
    let n_max = (k_max / PI).floor() as i64;
    let multiples_of_pi = |offset: f64| -> Vec<f64> {
        (0..=n_max + 1).map(|n| PI * (n as f64 + offset)).filter(|&k| k > 0.0 && k <= k_max).collect()
    };
    let mut roots: Vec<f64> = match form {
        ClosedForm::X1(x1) => {
            let mut r = multiples_of_pi(0.0);
            r.extend(find_roots(|k: f64| x1 * k.cos() - 2.0 * k * k.sin(), &grid, refine_tol)?);
            r
        }
        ClosedForm::X4(x4) => {
            let mut r = multiples_of_pi(0.0);
            r.extend(find_roots(|k: f64| x4 * k * k.cos() - 2.0 * k.sin(), &grid, refine_tol)?);
            r
        }
        ClosedForm::X2(_) | ClosedForm::X3(_) => {
            let c = match form {
                ClosedForm::X2(mu) => mu_cosine(mu),
                ClosedForm::X3(g) => (2.0 * PI * g.value()).cos(),
                _ => unreachable!(),
            };
            if c >= 1.0 - 1e-15 {
                let r = multiples_of_pi(0.0);
                r.iter().chain(r.iter()).copied().collect()
            } else if c <= -1.0 + 1e-15 {
                let r = multiples_of_pi(0.5);
                r.iter().chain(r.iter()).copied().collect()
            } else {
                find_roots(|k: f64| (2.0 * k).cos() - c, &grid, refine_tol)?
            }
        }
    };
    // k = 0 solves tan k = X₄k/2 but is not a positive-energy level.
    roots.retain(|&k| k > k_lo);
    roots.sort_by(|a, b| a.total_cmp(b));
    let mut merged: Vec<(f64, u32)> = Vec::new();
    for k in roots {
        match merged.last_mut() {
            Some((last, mult)) if (k - *last).abs() <= 1e-9 * (1.0 + k) => *mult += 1,
            _ => merged.push((k, 1)),
        }
    }
    Ok(merged)
}

/// A pair of ring levels `±m` under a flux `γ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZeemanLevel {
    pub m: i64,
    /// The flux as given (not reduced).
    pub gamma: f64,
    /// Energy of the `m + γ` state.
    pub e_plus: f64,
    /// Energy of the `m − γ` state.
    pub e_minus: f64,
    pub splitting: f64,
}

/// Split doublets `E_± = ((2π/L)(m ± γ))²` for `1 ≤ m ≤ m_max`, read off the
/// computed X₃ ring spectrum.
///
/// At `L = 2π` this reduces to `E_± = (m ± γ)²` and `E_+ − E_− = 4mγ`. In
/// general the splitting is `(2π/L)²·4mγ`. The boundary matrix only sees
/// `γ mod 1`, so the energies use the reduced flux in `(−1/2, 1/2)`;
/// half-integer flux is rejected because `X₃` diverges there.
pub fn zeeman_levels(gamma: FluxParam, m_max: i64, circumference: f64) -> Result<Vec<ZeemanLevel>> {
    if m_max < 1 {
        return Err(Error::invalid(format!("m_max must be at least 1, got {m_max}")));
    }
    let reduced = gamma.reduced();
    let bc = boundary_matrix(ExtensionKind::X3(flux_to_x3(reduced)?))?;
    let spec = CircleSpec::new(circumference, bc)?;
    let unit = 2.0 * PI / circumference;
    let spectrum = circle_spectrum(&spec, unit * (m_max as f64 + 0.75))?;

    (1..=m_max)
        .map(|m| {
            let at_level: Vec<&SpectrumRoot> = spectrum.roots.iter().filter(|r| r.level == m).collect();
            let (lower, upper) = match at_level.as_slice() {
                [r] if r.multiplicity == 2 => (r.energy, r.energy),
                [a, b] => (a.energy.min(b.energy), a.energy.max(b.energy)),
                _ => {
                    return Err(Error::numerical(format!(
                        "expected a split doublet at level {m}, found {} roots",
                        at_level.len()
                    )))
                }
            };
            let (e_plus, e_minus) = if reduced.value() >= 0.0 { (upper, lower) } else { (lower, upper) };
            Ok(ZeemanLevel { m, gamma: gamma.value(), e_plus, e_minus, splitting: e_plus - e_minus })
        })
        .collect()
}

/// A doublet split symmetrically about a free level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SplitPair {
    pub level: i64,
    pub k_minus: f64,
    pub k_plus: f64,
    /// Energy difference of the pair.
    pub splitting: f64,
}

/// Degeneracy structure of a ring spectrum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegeneracyReport {
    /// Doublets (multiplicity-2 roots, or simple roots closer than `tol`).
    pub degenerate_pairs: usize,
    /// Pairs of roots placed symmetrically about a free level `2πn/L`.
    pub split_pairs: Vec<SplitPair>,
    pub max_split: f64,
    /// Simple roots sitting on a free level.
    pub unshifted: usize,
    /// Simple roots off the free levels.
    pub shifted: usize,
}

impl DegeneracyReport {
    /// Default resolution `1e−8·π/L`.
    pub fn default_tol(circumference: f64) -> f64 {
        1e-8 * PI / circumference
    }
}

/// Classifies a spectrum by its root geometry alone.
///
/// A split pair is two simple roots `a < 2πn/L < b` whose midpoint lies within
/// `tol` of the free level; this is the signature of a flux. A potential-like
/// defect instead leaves one root exactly on the level.
pub fn degeneracy_report(result: &SpectrumResult, tol: f64) -> Result<DegeneracyReport> {
    if !(tol > 0.0) {
        return Err(Error::invalid("degeneracy tolerance must be positive"));
    }
    let unit = 2.0 * PI / result.circumference;
    let roots = &result.roots;
    let mut degenerate_pairs = roots.iter().filter(|r| r.multiplicity == 2).count();
    degenerate_pairs +=
        roots.windows(2).filter(|w| w[0].multiplicity == 1 && w[1].multiplicity == 1 && w[1].k - w[0].k < tol).count();

    let on_level = |k: f64| {
        let n = (k / unit).round();
        n >= 1.0 && (k - n * unit).abs() <= tol
    };
    let simple: Vec<f64> = roots.iter().filter(|r| r.multiplicity == 1).map(|r| r.k).collect();
    let unshifted = simple.iter().filter(|&&k| on_level(k)).count();
    let shifted = simple.len() - unshifted;

    let mut split_pairs = Vec::new();
    let n_max = (result.k_max / unit).ceil() as i64;
    for n in 1..=n_max {
        let center = n as f64 * unit;
        let near: Vec<f64> =
            simple.iter().copied().filter(|&k| (k - center).abs() < 0.5 * unit && (k - center).abs() > tol).collect();
        let below = near.iter().copied().filter(|&k| k < center);
        for a in below {
            if let Some(b) = near.iter().copied().find(|&b| b > center && ((a + b) / 2.0 - center).abs() <= tol) {
                split_pairs.push(SplitPair { level: n, k_minus: a, k_plus: b, splitting: b * b - a * a });
            }
        }
    }
    let max_split = split_pairs.iter().map(|p| p.splitting).fold(0.0, f64::max);
    Ok(DegeneracyReport { degenerate_pairs, split_pairs, max_split, unshifted, shifted })
}
