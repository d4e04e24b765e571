//! Plane-wave scattering on the line through chains of point defects.
//!
//! Transfer matrices act on `(ψ, ψ′)`. Amplitudes are referred to the global
//! plane waves `e^{±ikx}`, so S-matrices of disjoint sub-chains compose with
//! the usual two-media formula regardless of where the defects sit.
//!
//! All Table-1 defects with real parameters connect identical free media on
//! both sides (for the mass-jump this is what the `λ = √μ` rescaling
//! achieves), so `T = |t|²` needs no velocity or mass weights.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extensions::{boundary_matrix, mass_ratio_to_x2, BoundaryMatrix, Branch, ExtensionKind, MassRatio};
use crate::numerics::{golden_max, golden_min, Complex2x2};

/// Transfer matrix on `(ψ, ψ′)` at wavenumber `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransferMatrix {
    pub matrix: Complex2x2,
    pub k: f64,
}

fn check_wavenumber(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("scattering requires a finite wavenumber k > 0, got {k}")))
    }
}

/// Free evolution of `−ψ″ = k²ψ` over a length `len`:
/// `[[cos kL, sin(kL)/k], [−k sin kL, cos kL]]`.
pub fn free_propagator(k: f64, len: f64) -> Result<TransferMatrix> {
    check_wavenumber(k)?;
    if !(len >= 0.0) || !len.is_finite() {
        return Err(Error::invalid(format!("propagation length must be finite and non-negative, got {len}")));
    }
    let (s, c) = (k * len).sin_cos();
    Ok(TransferMatrix { matrix: Complex2x2::real(c, s / k, -k * s, c), k })
}

/// A defect at a given position.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Defect {
    pub position: f64,
    pub bc: BoundaryMatrix,
}

/// Ordered defects on the line; positions strictly increasing.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DefectChain {
    defects: Vec<Defect>,
}

impl DefectChain {
    pub fn new(defects: Vec<Defect>) -> Result<Self> {
        if let Some(d) = defects.iter().find(|d| !d.position.is_finite()) {
            return Err(Error::invalid(format!("defect position must be finite, got {}", d.position)));
        }
        if let Some(w) = defects.windows(2).find(|w| w[1].position <= w[0].position) {
            return Err(Error::invalid(format!(
                "defect positions must be strictly increasing ({} then {})",
                w[0].position, w[1].position
            )));
        }
        Ok(Self { defects })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn defects(&self) -> &[Defect] {
        &self.defects
    }

    pub fn is_empty(&self) -> bool {
        self.defects.is_empty()
    }

    /// Concatenation of two chains; every defect of `other` must lie to the
    /// right of `self`.
    pub fn concat(&self, other: &DefectChain) -> Result<DefectChain> {
        let mut all = self.defects.clone();
        all.extend_from_slice(&other.defects);
        DefectChain::new(all)
    }

    /// Parses the JSON chain description: an array of
    /// `{"position", "kind": "x1"|"x2"|"x3"|"x4", "param"}` or
    /// `{"position", "kind": "x2", "mu"}` objects.
    pub fn from_json(text: &str) -> Result<Self> {
        let specs: Vec<DefectSpec> =
            serde_json::from_str(text).map_err(|e| Error::invalid(format!("malformed chain file: {e}")))?;
        let defects = specs.iter().map(DefectSpec::to_defect).collect::<Result<Vec<_>>>()?;
        DefectChain::new(defects)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DefectKindTag {
    X1,
    X2,
    X3,
    X4,
}

/// One entry of a chain file.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefectSpec {
    pub position: f64,
    pub kind: DefectKindTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
}

impl DefectSpec {
    pub fn to_defect(&self) -> Result<Defect> {
        let kind = match (self.kind, self.param, self.mu) {
            (_, Some(_), Some(_)) => return Err(Error::invalid("defect has both `param` and `mu`")),
            (DefectKindTag::X2, None, Some(mu)) => {
                ExtensionKind::X2(mass_ratio_to_x2(MassRatio::new(mu)?, Branch::Plus))
            }
            (_, None, Some(_)) => return Err(Error::invalid("`mu` is only accepted for x2 defects")),
            (_, None, None) => return Err(Error::invalid("defect needs a `param` (or `mu` for x2)")),
            (DefectKindTag::X1, Some(p), None) => ExtensionKind::X1(p),
            (DefectKindTag::X2, Some(p), None) => ExtensionKind::X2(p),
            (DefectKindTag::X3, Some(p), None) => ExtensionKind::X3(p),
            (DefectKindTag::X4, Some(p), None) => ExtensionKind::X4(p),
        };
        Ok(Defect { position: self.position, bc: boundary_matrix(kind)? })
    }
}

/// `M_n · P(x_n − x_{n−1}) · … · P(x₂ − x₁) · M₁`, mapping `(ψ, ψ′)` just
/// left of the first defect to just right of the last one.
pub fn chain_transfer(chain: &DefectChain, k: f64) -> Result<TransferMatrix> {
    check_wavenumber(k)?;
    let mut total = Complex2x2::identity();
    let mut prev: Option<f64> = None;
    for d in chain.defects() {
        if let Some(x) = prev {
            total = free_propagator(k, d.position - x)?.matrix * total;
        }
        total = *d.bc.matrix() * total;
        prev = Some(d.position);
    }
    Ok(TransferMatrix { matrix: total, k })
}

/// Scattering amplitudes: `r, t` for incidence from the left, `r′, t′` from
/// the right, all relative to global plane waves `e^{±ikx}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SMatrix {
    pub r: Complex64,
    pub t: Complex64,
    pub r_prime: Complex64,
    pub t_prime: Complex64,
}

impl SMatrix {
    pub fn identity() -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        Self { r: zero, t: one, r_prime: zero, t_prime: one }
    }

    pub fn transmission(&self) -> f64 {
        self.t.norm_sqr()
    }

    pub fn reflection(&self) -> f64 {
        self.r.norm_sqr()
    }

    /// As a matrix mapping incoming `(left, right)` to outgoing `(left, right)`:
    /// `[[r, t′], [t, r′]]`.
    pub fn as_matrix(&self) -> Complex2x2 {
        Complex2x2::new(self.r, self.t_prime, self.t, self.r_prime)
    }

    /// Largest deviation of `|r|² + |t|²` and `|r′|² + |t′|²` from one.
    pub fn unitarity_defect(&self) -> f64 {
        let left = self.r.norm_sqr() + self.t.norm_sqr() - 1.0;
        let right = self.r_prime.norm_sqr() + self.t_prime.norm_sqr() - 1.0;
        left.abs().max(right.abs())
    }

    /// Composition with a scatterer located entirely to the right.
    pub fn compose(&self, right: &SMatrix) -> SMatrix {
        let denom = 1.0 - self.r_prime * right.r;
        SMatrix {
            t: self.t * right.t / denom,
            r: self.r + self.t_prime * right.r * self.t / denom,
            t_prime: right.t_prime * self.t_prime / denom,
            r_prime: right.r_prime + right.t * self.r_prime * right.t_prime / denom,
        }
    }
}

// Columns are the plane waves e^{ikx}, e^{−ikx} and their derivatives at x.
fn plane_wave_basis(k: f64, x: f64) -> Complex2x2 {
    let ik = Complex64::new(0.0, k);
    let fwd = Complex64::from_polar(1.0, k * x);
    let bwd = fwd.conj();
    Complex2x2::new(fwd, bwd, ik * fwd, -ik * bwd)
}

/// S-matrix of a chain at wavenumber `k`, obtained by matching
/// `e^{ikx} + r e^{−ikx}` on the left to `t e^{ikx}` on the right (and the
/// mirror problem for `r′, t′`).
pub fn smatrix(chain: &DefectChain, k: f64) -> Result<SMatrix> {
    let transfer = chain_transfer(chain, k)?;
    let (first, last) = match (chain.defects().first(), chain.defects().last()) {
        (Some(a), Some(b)) => (a.position, b.position),
        _ => return Ok(SMatrix::identity()),
    };
    let out_basis = plane_wave_basis(k, last).inverse().ok_or_else(|| Error::numerical("singular plane-wave basis"))?;
    let q = out_basis * transfer.matrix * plane_wave_basis(k, first);
    if q.a22.norm() < f64::MIN_POSITIVE || !q.is_finite() {
        return Err(Error::numerical(format!("degenerate matching system at k = {k}")));
    }
    // det Q is the product of the defect determinants; using the closed-form
    // values keeps t = t′ exact for unimodular chains.
    let det = chain.defects().iter().fold(Complex64::new(1.0, 0.0), |acc, d| acc * d.bc.det());
    Ok(SMatrix { r: -q.a21 / q.a22, t: det / q.a22, r_prime: q.a12 / q.a22, t_prime: 1.0 / q.a22 })
}

/// One sample of a transmission curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TransmissionPoint {
    pub k: f64,
    pub transmission: f64,
    pub reflection: f64,
    /// `arg t` in `(−π, π]`.
    pub phase_t: f64,
}

/// `T = |t|²`, `R = |r|²` and `arg t` at each wavenumber of the grid, in
/// grid order.
pub fn transmission_curve(chain: &DefectChain, k_grid: &[f64]) -> Result<Vec<TransmissionPoint>> {
    k_grid
        .iter()
        .map(|&k| {
            let s = smatrix(chain, k)?;
            Ok(TransmissionPoint { k, transmission: s.transmission(), reflection: s.reflection(), phase_t: s.t.arg() })
        })
        .collect()
}

/// Uniform wavenumber grid on `[k_min, k_max]` with `samples` points.
pub fn k_grid(k_min: f64, k_max: f64, samples: usize) -> Result<Vec<f64>> {
    check_wavenumber(k_min)?;
    if !(k_max > k_min) || !k_max.is_finite() {
        return Err(Error::invalid(format!("k_max must exceed k_min, got [{k_min}, {k_max}]")));
    }
    if samples < 2 {
        return Err(Error::invalid("a wavenumber grid needs at least two samples"));
    }
    let step = (k_max - k_min) / (samples - 1) as f64;
    Ok((0..samples).map(|i| if i + 1 == samples { k_max } else { k_min + i as f64 * step }).collect())
}

/// How the two defects of an X₂ filter are paired.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FilterPairing {
    /// Both defects with ratio μ: a plateau between two equal jumps.
    #[default]
    Equal,
    /// Ratios μ then 1/μ, restoring the asymptotic mass on the far side.
    Inverse,
}

/// Two X₂ mass-jump defects at `0` and `spacing`.
pub fn filter_chain(mu: MassRatio, spacing: f64, pairing: FilterPairing) -> Result<DefectChain> {
    if !(spacing > 0.0) || !spacing.is_finite() {
        return Err(Error::invalid(format!("filter spacing must be positive, got {spacing}")));
    }
    let second = match pairing {
        FilterPairing::Equal => mu,
        FilterPairing::Inverse => mu.inverse(),
    };
    let defect = |position, m| -> Result<Defect> {
        Ok(Defect { position, bc: boundary_matrix(ExtensionKind::X2(mass_ratio_to_x2(m, Branch::Plus)))? })
    };
    DefectChain::new(vec![defect(0.0, mu)?, defect(spacing, second)?])
}

/// Extrema of a transmission curve, refined by golden-section search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FilterReport {
    /// Wavenumbers of the local transmission maxima.
    pub peaks: Vec<f64>,
    /// Refined transmission at each peak.
    pub peak_transmission: Vec<f64>,
    /// Smallest refined local minimum (or sampled minimum when there is none).
    pub min_t: f64,
    /// Largest refined local maximum (or sampled maximum when there is none).
    pub max_t: f64,
    /// Mean distance between adjacent peaks, when there are at least two.
    pub mean_peak_spacing: Option<f64>,
}

/// Locates and refines the interior extrema of `T(k)` sampled on `k_grid`.
///
/// A constant curve has no peaks; extrema closer than `1e−12` in `T` to their
/// neighbours are treated as flat.
pub fn analyze_transmission(chain: &DefectChain, k_grid: &[f64]) -> Result<FilterReport> {
    let curve = transmission_curve(chain, k_grid)?;
    let t = |k: f64| smatrix(chain, k).map(|s| s.transmission()).unwrap_or(f64::NAN);
    let mut peaks = Vec::new();
    let mut peak_t = Vec::new();
    let mut min_t = curve.iter().map(|p| p.transmission).fold(f64::INFINITY, f64::min);
    let mut max_t = curve.iter().map(|p| p.transmission).fold(f64::NEG_INFINITY, f64::max);
    const FLAT: f64 = 1e-12;
    for w in curve.windows(3) {
        let (a, b, c) = (w[0], w[1], w[2]);
        if b.transmission > a.transmission + FLAT && b.transmission >= c.transmission + FLAT {
            let (k, v) = golden_max(t, a.k, c.k, 1e-12);
            peaks.push(k);
            peak_t.push(v);
            max_t = max_t.max(v);
        } else if b.transmission + FLAT < a.transmission && b.transmission + FLAT <= c.transmission {
            let (_, v) = golden_min(t, a.k, c.k, 1e-12);
            min_t = min_t.min(v);
        }
    }
    let mean_peak_spacing =
        if peaks.len() >= 2 { Some((peaks[peaks.len() - 1] - peaks[0]) / (peaks.len() - 1) as f64) } else { None };
    Ok(FilterReport { peaks, peak_transmission: peak_t, min_t, max_t, mean_peak_spacing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extensions::{flux_to_x3, FluxParam};
    use std::f64::consts::{FRAC_PI_4, PI};

    fn single(kind: ExtensionKind) -> DefectChain {
        DefectChain::new(vec![Defect { position: 0.0, bc: boundary_matrix(kind).unwrap() }]).unwrap()
    }

    fn x2_mu(mu: f64) -> ExtensionKind {
        ExtensionKind::X2(mass_ratio_to_x2(MassRatio::new(mu).unwrap(), Branch::Plus))
    }

    #[test]
    fn free_propagator_examples() {
        assert_eq!(free_propagator(1.0, 0.0).unwrap().matrix, Complex2x2::identity());
        let half = free_propagator(1.0, PI).unwrap().matrix;
        assert!(half.max_abs_diff(&Complex2x2::real(-1.0, 0.0, 0.0, -1.0)) < 1e-15);
        let quarter = free_propagator(2.0, FRAC_PI_4).unwrap().matrix;
        assert!(quarter.max_abs_diff(&Complex2x2::real(0.0, 0.5, -2.0, 0.0)) < 1e-15);
        assert!(free_propagator(0.0, 1.0).is_err());
        assert!(free_propagator(1.0, -1.0).is_err());
    }

    #[test]
    fn chain_transfer_examples() {
        assert_eq!(chain_transfer(&DefectChain::empty(), 1.3).unwrap().matrix, Complex2x2::identity());
        let m = chain_transfer(&single(x2_mu(4.0)), 1.0).unwrap().matrix;
        assert!(m.max_abs_diff(&Complex2x2::real(2.0, 0.0, 0.0, 0.5)) < 1e-15);

        // Two δ(1) defects a distance π apart; explicit entry-by-entry product
        // of [[1,0],[1,1]] · [[-1,0],[0,-1]] · [[1,0],[1,1]].
        let d = |x| Defect { position: x, bc: boundary_matrix(ExtensionKind::X1(1.0)).unwrap() };
        let chain = DefectChain::new(vec![d(0.0), d(PI)]).unwrap();
        let m = chain_transfer(&chain, 1.0).unwrap().matrix;
        assert!(m.max_abs_diff(&Complex2x2::real(-1.0, 0.0, -2.0, -1.0)) < 1e-15);
    }

    #[test]
    fn positions_must_increase() {
        let bc = boundary_matrix(ExtensionKind::X1(1.0)).unwrap();
        let r = DefectChain::new(vec![Defect { position: 1.0, bc }, Defect { position: 1.0, bc }]);
        assert!(r.is_err());
    }

    #[test]
    fn smatrix_examples() {
        let s = smatrix(&DefectChain::empty(), 2.0).unwrap();
        assert_eq!(s, SMatrix::identity());
        let s = smatrix(&single(ExtensionKind::X1(0.0)), 2.0).unwrap();
        assert!(s.r.norm() < 1e-15 && (s.t - 1.0).norm() < 1e-15);

        let g = FluxParam::new(0.125).unwrap();
        let s = smatrix(&single(ExtensionKind::X3(flux_to_x3(g).unwrap())), 1.7).unwrap();
        assert!(s.r.norm() < 1e-15 && s.r_prime.norm() < 1e-15);
        assert!((s.t - Complex64::from_polar(1.0, FRAC_PI_4)).norm() < 1e-15);
        assert!((s.t_prime - Complex64::from_polar(1.0, -FRAC_PI_4)).norm() < 1e-15);

        for k in [0.1, 1.0, 7.5] {
            let s = smatrix(&single(x2_mu(4.0)), k).unwrap();
            assert!((s.transmission() - 0.64).abs() < 1e-14);
        }
        // 4/(4 + k²X₄²) at k = 1, X₄ = 2.
        let s = smatrix(&single(ExtensionKind::X4(2.0)), 1.0).unwrap();
        assert!((s.transmission() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn x4_transmission_decreases_with_k() {
        let chain = single(ExtensionKind::X4(2.0));
        let curve = transmission_curve(&chain, &k_grid(0.1, 5.0, 50).unwrap()).unwrap();
        for w in curve.windows(2) {
            assert!(w[1].transmission < w[0].transmission);
        }
        for p in &curve {
            assert!((p.transmission - 4.0 / (4.0 + 4.0 * p.k * p.k)).abs() < 1e-14);
        }
    }

    #[test]
    fn single_mass_jump_is_energy_independent() {
        let curve = transmission_curve(&single(x2_mu(4.0)), &k_grid(0.05, 30.0, 400).unwrap()).unwrap();
        let (lo, hi) = curve
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.transmission), hi.max(p.transmission)));
        assert!(hi - lo < 1e-13);
    }

    #[test]
    fn transparent_pair() {
        let d = |x| Defect { position: x, bc: boundary_matrix(ExtensionKind::X1(0.0)).unwrap() };
        let chain = DefectChain::new(vec![d(0.0), d(2.0)]).unwrap();
        for p in transmission_curve(&chain, &k_grid(0.1, 4.0, 30).unwrap()).unwrap() {
            assert!((p.transmission - 1.0).abs() < 1e-15);
        }
    }

    /// Independent Fabry–Pérot oracle for two identical real scatterers:
    /// T = T₁² / (1 + R₁² − 2R₁ cos φ), extremes T₁²/(1 ∓ R₁)².
    #[test]
    fn filter_extremes_match_fabry_perot() {
        let chain = filter_chain(MassRatio::new(4.0).unwrap(), 5.0, FilterPairing::Equal).unwrap();
        let report = analyze_transmission(&chain, &k_grid(0.1, 5.0, 2000).unwrap()).unwrap();
        let (t1, r1) = (0.64_f64, 0.36_f64);
        assert!((report.max_t - t1 * t1 / ((1.0 - r1) * (1.0 - r1))).abs() < 1e-12);
        assert!((report.min_t - t1 * t1 / ((1.0 + r1) * (1.0 + r1))).abs() < 1e-12);
        let spacing = report.mean_peak_spacing.unwrap();
        assert!((spacing - PI / 5.0).abs() < 1e-6);
        for w in report.peaks.windows(2) {
            assert!((w[1] - w[0] - PI / 5.0).abs() < 1e-6);
        }
    }

    #[test]
    fn inverse_pairing_restores_medium() {
        let mu = MassRatio::new(4.0).unwrap();
        let chain = filter_chain(mu, 5.0, FilterPairing::Inverse).unwrap();
        let second = chain.defects()[1].bc.matrix();
        assert!(second.max_abs_diff(&Complex2x2::real(0.5, 0.0, 0.0, 2.0)) < 1e-15);
        let report = analyze_transmission(&chain, &k_grid(0.1, 5.0, 2000).unwrap()).unwrap();
        assert!((report.max_t - 1.0).abs() < 1e-10);
    }

    #[test]
    fn chain_file_forms() {
        let text = r#"[
            {"position": 0.0, "kind": "x2", "mu": 4},
            {"position": 1.5, "kind": "x4", "param": 2},
            {"position": 2.0, "kind": "x3", "param": 0.5}
        ]"#;
        let chain = DefectChain::from_json(text).unwrap();
        assert_eq!(chain.defects().len(), 3);
        assert_eq!(chain.defects()[0].bc.extension(), Some(ExtensionKind::X2(2.0 / 3.0)));
        assert!(DefectChain::from_json("[]").unwrap().is_empty());
        for bad in [
            r#"[{"position": 0, "kind": "x1", "mu": 2}]"#,
            r#"[{"position": 0, "kind": "x5", "param": 2}]"#,
            r#"[{"position": 0, "kind": "x1"}]"#,
            r#"[{"position": 0, "kind": "x2", "param": 1, "mu": 2}]"#,
            r#"[{"position": 1, "kind": "x1", "param": 1}, {"position": 0, "kind": "x1", "param": 1}]"#,
            r#"[{"position": 0, "kind": "x2", "mu": -1}]"#,
            r#"{"position": 0}"#,
        ] {
            assert!(matches!(DefectChain::from_json(bad), Err(Error::InvalidInput(_))), "{bad}");
        }
    }

    fn arb_kind() -> impl proptest::strategy::Strategy<Value = ExtensionKind> {
        use proptest::prelude::*;
        prop_oneof![
            (-3.0..3.0f64).prop_map(ExtensionKind::X1),
            (-1.5..1.5f64).prop_map(ExtensionKind::X2),
            (-5.0..5.0f64).prop_map(ExtensionKind::X3),
            (-2.0..2.0f64).prop_map(ExtensionKind::X4),
        ]
    }

    fn build(kinds: &[ExtensionKind], gaps: &[f64]) -> DefectChain {
        let mut x = 0.0;
        let defects = kinds
            .iter()
            .zip(gaps)
            .map(|(k, g)| {
                x += g;
                Defect { position: x, bc: boundary_matrix(*k).unwrap() }
            })
            .collect();
        DefectChain::new(defects).unwrap()
    }

    proptest::proptest! {
        #[test]
        fn unitarity(
            kinds in proptest::collection::vec(arb_kind(), 1..5),
            gaps in proptest::collection::vec(0.1..3.0f64, 5),
            k in 0.05..4.0f64,
        ) {
            let chain = build(&kinds, &gaps);
            let s = smatrix(&chain, k).unwrap();
            proptest::prop_assert!(s.unitarity_defect() < 1e-12, "{:?}", s);
        }

        #[test]
        fn reciprocity_without_flux(
            kinds in proptest::collection::vec(arb_kind(), 1..5),
            gaps in proptest::collection::vec(0.1..3.0f64, 5),
            k in 0.05..4.0f64,
        ) {
            let kinds: Vec<_> = kinds.into_iter().filter(|k| !matches!(k, ExtensionKind::X3(_))).collect();
            proptest::prop_assume!(!kinds.is_empty());
            let chain = build(&kinds, &gaps);
            let s = smatrix(&chain, k).unwrap();
            let m = s.as_matrix();
            proptest::prop_assert!(m.max_abs_diff(&m.transpose()) < 1e-12);
        }

        #[test]
        fn flux_breaks_time_reversal(gamma in -0.45..0.45f64, k in 0.05..4.0f64) {
            let g = FluxParam::new(gamma).unwrap();
            let s = smatrix(&single(ExtensionKind::X3(flux_to_x3(g).unwrap())), k).unwrap();
            let diff = (s.t / s.t_prime).arg();
            let expected = Complex64::from_polar(1.0, 4.0 * PI * gamma).arg();
            proptest::prop_assert!((diff - expected).abs() < 1e-12);
        }

        #[test]
        fn composition(
            kinds in proptest::collection::vec(arb_kind(), 2..6),
            gaps in proptest::collection::vec(0.1..3.0f64, 6),
            split in 1usize..5,
            k in 0.05..4.0f64,
        ) {
            let chain = build(&kinds, &gaps);
            let split = split.min(kinds.len() - 1);
            let left = DefectChain::new(chain.defects()[..split].to_vec()).unwrap();
            let right = DefectChain::new(chain.defects()[split..].to_vec()).unwrap();
            let whole = smatrix(&chain, k).unwrap();
            let composed = smatrix(&left, k).unwrap().compose(&smatrix(&right, k).unwrap());
            proptest::prop_assert!(whole.as_matrix().max_abs_diff(&composed.as_matrix()) < 1e-12);
        }
    }
}
