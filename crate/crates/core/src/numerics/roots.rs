use super::RealInterval;
use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Every sign-change root of `f` on the interval, sorted ascending.
///
/// The interval is sampled on its grid; each cell whose endpoints have
/// opposite signs is refined by bisection until the bracket is narrower than
/// `refine_tol`. Grid points where `f` is exactly zero are reported as roots.
/// Roots closer than `10·refine_tol` are merged.
///
/// A cell that straddles a pole also changes sign. Such brackets are
/// discarded: after refinement `|f|` at a true root is no larger than at the
/// cell ends, while at a pole it blows up.
///
/// Tangential zeros (where `f` touches zero without changing sign) are not
/// guaranteed to be found.
pub fn find_roots<F>(f: F, interval: &RealInterval, refine_tol: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
{
    if !(refine_tol > 0.0) {
        return Err(Error::invalid("refine_tol must be positive"));
    }
    let mut roots = Vec::new();
    let mut prev_x = interval.point(0);
    let mut prev_f = f(prev_x);
    if prev_f == 0.0 {
        roots.push(prev_x);
    }
    for i in 1..interval.grid_n() {
        let x = interval.point(i);
        let fx = f(x);
        if fx == 0.0 {
            roots.push(x);
        } else if prev_f.is_finite() && fx.is_finite() && prev_f != 0.0 && prev_f.signum() != fx.signum() {
            let root = bisect(&f, prev_x, x, prev_f, refine_tol)?;
            let bound = prev_f.abs().max(fx.abs());
            if f(root).abs() <= bound {
                roots.push(root);
            }
        }
        prev_x = x;
        prev_f = fx;
    }
    roots.sort_by(|a, b| a.total_cmp(b));
    roots.dedup_by(|b, a| (*b - *a).abs() <= 10.0 * refine_tol);
    Ok(roots)
}

/// Bisection on a bracket `[a, b]` with `f(a) = fa` of opposite sign to
/// `f(b)`. Returns the midpoint of the final bracket.
pub fn bisect<F>(f: &F, mut a: f64, mut b: f64, mut fa: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    // 200 halvings exhaust any f64 bracket.
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if (b - a).abs() < tol || mid == a || mid == b {
            return Ok(mid);
        }
        let fm = f(mid);
        if !fm.is_finite() {
            return Err(Error::numerical(format!("non-finite function value at x = {mid}")));
        }
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
///
/// Returns `(x, f(x))`. The location is only resolved to about
/// `sqrt(f64::EPSILON)` relative for smooth minima; the value is much more
/// accurate.
pub fn golden_min<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
pub fn golden_max<F>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let (x, v) = golden_min(|x| -f(x), a, b, tol);
    (x, -v)
}
