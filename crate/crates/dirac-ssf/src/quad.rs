//! Adaptive quadrature helpers used by the Weyl-term and phase-space
//! integrals.

/// Adaptive Simpson integration of `f` on `[a, b]` to absolute
/// tolerance `tol`. Recursion depth is capped; the cap is generous for
/// the smooth decaying integrands this crate produces.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let err = left + right - whole;
    if depth == 0 || err.abs() <= 15.0 * tol {
        return left + right + err / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Integral of `f` over `[a, inf)` via adaptive Simpson on dyadic
/// panels, stopping when a panel contributes less than `tol`.
pub fn adaptive_simpson_to_infinity(f: &dyn Fn(f64) -> f64, a: f64, tol: f64) -> f64 {
    let mut total = 0.0;
    let mut lo = a;
    let mut width = 1.0_f64.max(a.abs());
    for _ in 0..64 {
        let hi = lo + width;
        let piece = adaptive_simpson(f, lo, hi, tol);
        total += piece;
        if piece.abs() < tol && width > 8.0 {
            break;
        }
        lo = hi;
        width *= 2.0;
    }
    total
}

/// Tensor-product 2D integral over `[ax,bx] x [ay,by]`: adaptive
/// Simpson in x of adaptive Simpson in y.
pub fn adaptive_simpson_2d(
    f: &dyn Fn(f64, f64) -> f64,
    ax: f64,
    bx: f64,
    ay: f64,
    by: f64,
    tol: f64,
) -> f64 {
    let inner_tol = tol / (bx - ax).max(1.0);
    adaptive_simpson(
        &|x: f64| adaptive_simpson(&|y: f64| f(x, y), ay, by, inner_tol),
        ax,
        bx,
        tol,
    )
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration
/// on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-like initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn simpson_polynomial_exact() {
        let v = adaptive_simpson(&|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12);
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn simpson_gaussian() {
        let v = adaptive_simpson(&|x: f64| (-x * x).exp(), -8.0, 8.0, 1e-12);
        assert_abs_diff_eq!(v, std::f64::consts::PI.sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn semi_infinite_decay() {
        let v = adaptive_simpson_to_infinity(&|x: f64| (-x).exp(), 0.0, 1e-12);
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn two_dimensional_separable() {
        let v = adaptive_simpson_2d(&|x, y| x * y * y, 0.0, 1.0, 0.0, 3.0, 1e-10);
        assert_abs_diff_eq!(v, 0.5 * 9.0, epsilon = 1e-8);
    }

    #[test]
    fn gauss_legendre_integrates_high_degree() {
        let (x, w) = gauss_legendre(12);
        // Degree-22 polynomial is exact for 12-point rule.
        let v: f64 = x
            .iter()
            .zip(w.iter())
            .map(|(&xi, &wi)| wi * xi.powi(22))
            .sum();
        assert_abs_diff_eq!(v, 2.0 / 23.0, epsilon = 1e-13);
    }
}
