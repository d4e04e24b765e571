use super::RealInterval;
use crate::error::{Error, Result};

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

const MAX_STEPS: usize = 2_000_000;

fn rhs<P, Q>(p: &P, q: &Q, k2: f64, x: f64, y: [f64; 2]) -> Result<[f64; 2]>
where
    P: Fn(f64) -> f64,
    Q: Fn(f64) -> f64,
{
    let px = p(x);
    if !(px > 0.0) || !px.is_finite() {
        return Err(Error::SingularCoefficient { x, value: px });
    }
    Ok([y[1] / px, (q(x) - k2) * y[0]])
}

/// Integrates `−(p ψ′)′ + q ψ = k² ψ` across the interval in the flux
/// variables `(ψ, p ψ′)`, starting from `y0` at `interval.lo()`.
///
/// Dormand–Prince 5(4) with error-per-unit-step control: the local error of a
/// step of length `h` is held below `tol · h / width` (relative to
/// `1 + |y|`), which keeps the accumulated error of order `tol`. The step
/// never exceeds the grid spacing of `interval`, so narrow coefficient
/// features must be resolved by the caller's choice of `grid_n`.
pub fn propagate_flux<P, Q>(p: P, q: Q, k: f64, y0: [f64; 2], interval: &RealInterval, tol: f64) -> Result<[f64; 2]>
where
    P: Fn(f64) -> f64,
    Q: Fn(f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::invalid("ODE tolerance must be positive"));
    }
    for x in interval.points() {
        let v = p(x);
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::SingularCoefficient { x, value: v });
        }
    }
    let k2 = k * k;
    let (a, b) = (interval.lo(), interval.hi());
    let width = interval.width();
    let h_max = interval.spacing();
    let mut x = a;
    let mut y = y0;
    let mut h = h_max;
    let mut k_stage = [[0.0; 2]; 7];
    k_stage[0] = rhs(&p, &q, k2, x, y)?;

    for _ in 0..MAX_STEPS {
        if x >= b {
            return Ok(y);
        }
        let last = x + h >= b;
        if last {
            h = b - x;
        }
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k_stage.iter().enumerate().take(s) {
                ys[0] += h * A[s][j] * kj[0];
                ys[1] += h * A[s][j] * kj[1];
            }
            k_stage[s] = rhs(&p, &q, k2, x + C[s] * h, ys)?;
        }
        let mut y5 = y;
        let mut err = 0.0_f64;
        for c in 0..2 {
            let mut e = 0.0;
            for s in 0..7 {
                y5[c] += h * B5[s] * k_stage[s][c];
                e += h * (B5[s] - B4[s]) * k_stage[s][c];
            }
            let scale = tol * (h / width) * (1.0 + y[c].abs().max(y5[c].abs()));
            err = err.max(e.abs() / scale);
        }
        if !err.is_finite() {
            return Err(Error::numerical(format!("non-finite ODE state near x = {x}")));
        }
        if err <= 1.0 {
            x = if last { b } else { x + h };
            y = y5;
            // FSAL: the last stage is the derivative at the new point.
            k_stage[0] = k_stage[6];
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = (h * factor).min(h_max);
        if h <= f64::EPSILON * x.abs().max(1.0) {
            return Err(Error::numerical(format!("ODE step size underflow near x = {x}")));
        }
    }
    Err(Error::numerical("ODE step limit exceeded"))
}

/// Integrates `−(p ψ′)′ + q ψ = k² ψ` across the interval and returns
/// `(ψ, ψ′)` at `interval.hi()` given `(ψ, ψ′)` at `interval.lo()`.
///
/// Internally the state is `(ψ, p ψ′)`, which stays continuous through steep
/// regions of `p`.
pub fn propagate<P, Q>(p: P, q: Q, k: f64, y0: [f64; 2], interval: &RealInterval, tol: f64) -> Result<[f64; 2]>
where
    P: Fn(f64) -> f64,
    Q: Fn(f64) -> f64,
{
    let p_lo = p(interval.lo());
    let p_hi = p(interval.hi());
    for (x, v) in [(interval.lo(), p_lo), (interval.hi(), p_hi)] {
        if !(v > 0.0) {
            return Err(Error::SingularCoefficient { x, value: v });
        }
    }
    let end = propagate_flux(&p, &q, k, [y0[0], p_lo * y0[1]], interval, tol)?;
    Ok([end[0], end[1] / p_hi])
}
