use crate::error::{Error, Result};

/// Number of eigenvalues strictly below `x` (Sturm sequence count).
fn count_below(diagonal: &[f64], offdiagonal: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for i in 0..diagonal.len() {
        let off2 = if i == 0 { 0.0 } else { offdiagonal[i - 1] * offdiagonal[i - 1] };
        d = diagonal[i] - x - if i == 0 { 0.0 } else { off2 / d };
        if d == 0.0 {
            d = -f64::EPSILON * (diagonal[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `n_lowest` smallest eigenvalues of a real symmetric tridiagonal
/// matrix, ascending.
///
/// Each eigenvalue is isolated by bisection on the Sturm count inside the
/// Gershgorin bounds and refined to the resolution of `f64`.
pub fn tridiag_eigs(diagonal: &[f64], offdiagonal: &[f64], n_lowest: usize) -> Result<Vec<f64>> {
    let n = diagonal.len();
    if n == 0 {
        return Err(Error::invalid("empty tridiagonal matrix"));
    }
    if offdiagonal.len() + 1 != n {
        return Err(Error::invalid(format!("off-diagonal length {} does not match dimension {n}", offdiagonal.len())));
    }
    if n_lowest > n {
        return Err(Error::invalid(format!("requested {n_lowest} eigenvalues of a {n}×{n} matrix")));
    }
    if diagonal.iter().chain(offdiagonal).any(|v| !v.is_finite()) {
        return Err(Error::invalid("non-finite matrix entry"));
    }

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { offdiagonal[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { offdiagonal[i].abs() } else { 0.0 };
        lo = lo.min(diagonal[i] - left - right);
        hi = hi.max(diagonal[i] + left + right);
    }
    let pad = f64::EPSILON * lo.abs().max(hi.abs()).max(1.0);
    lo -= pad;
    hi += pad;

    let mut eigs = Vec::with_capacity(n_lowest);
    for j in 0..n_lowest {
        // Smallest x with count_below(x) > j.
        let mut a = eigs.last().copied().unwrap_or(lo).max(lo);
        let mut b = hi;
        for _ in 0..300 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if count_below(diagonal, offdiagonal, mid) > j {
                b = mid;
            } else {
                a = mid;
            }
        }
        eigs.push(0.5 * (a + b));
    }
    Ok(eigs)
}
