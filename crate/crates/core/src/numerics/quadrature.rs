use super::RealInterval;
use crate::error::{Error, Result};

// 15-point Kronrod abscissae and weights on [-1, 1] (non-negative half).
const XK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const MAX_DEPTH: u32 = 48;

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut sum = WK[7] * f(c);
    for i in 0..7 {
        let dx = h * XK[i];
        sum += WK[i] * (f(c - dx) + f(c + dx));
    }
    sum * h
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let left = kronrod15(f, a, mid);
    let right = kronrod15(f, mid, b);
    let refined = left + right;
    if !refined.is_finite() {
        return Err(Error::numerical(format!("non-finite integrand on [{a}, {b}]")));
    }
    if (refined - whole).abs() <= tol {
        return Ok(refined);
    }
    if depth >= MAX_DEPTH || mid <= a || mid >= b {
        return Err(Error::numerical(format!("quadrature subdivision limit reached on [{a}, {b}]")));
    }
    Ok(adapt(f, a, mid, left, 0.5 * tol, depth + 1)? + adapt(f, mid, b, right, 0.5 * tol, depth + 1)?)
}

/// Adaptive integral of `f` over the interval.
///
/// The interval is first split into `grid_n − 1` equal panels, which must be
/// fine enough to see every narrow feature of `f`. Each panel is integrated
/// with a 15-point Kronrod rule and bisected until the panel estimate and the
/// sum of its two halves agree to within the panel's share of `tol`.
pub fn quadrature<F>(f: F, interval: &RealInterval, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::invalid("quadrature tolerance must be positive"));
    }
    let panels = interval.grid_n() - 1;
    let panel_tol = tol / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let a = interval.point(i);
        let b = interval.point(i + 1);
        let whole = kronrod15(&f, a, b);
        total += adapt(&f, a, b, whole, panel_tol, 0)?;
    }
    Ok(total)
}
