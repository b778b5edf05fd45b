//! Small least-squares and minimization helpers for slope fits and
//! Lorentzian pole extraction.

/// Solve the dense linear system `a x = b` (row-major, n x n) by
/// Gaussian elimination with partial pivoting. Intended for the tiny
/// normal-equation systems of the fitting code.
pub fn solve_dense(a: &[f64], b: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut m = a.to_vec();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let mut piv = col;
        for row in col + 1..n {
            if m[row * n + col].abs() > m[piv * n + col].abs() {
                piv = row;
            }
        }
        if m[piv * n + col].abs() < 1e-300 {
            return None;
        }
        if piv != col {
            for k in 0..n {
                m.swap(col * n + k, piv * n + k);
            }
            rhs.swap(col, piv);
        }
        let d = m[col * n + col];
        for row in col + 1..n {
            let factor = m[row * n + col] / d;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                m[row * n + k] -= factor * m[col * n + k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut s = rhs[col];
        for k in col + 1..n {
            s -= m[col * n + k] * x[k];
        }
        x[col] = s / m[col * n + col];
    }
    Some(x)
}

/// Linear least squares: columns of the design matrix are given as
/// slices of equal length. Returns coefficients minimizing
/// `|| design * c - y ||_2`, via normal equations.
pub fn linear_least_squares(columns: &[&[f64]], y: &[f64]) -> Option<Vec<f64>> {
    let p = columns.len();
    let n = y.len();
    for col in columns {
        assert_eq!(col.len(), n);
    }
    let mut ata = vec![0.0; p * p];
    let mut aty = vec![0.0; p];
    for i in 0..p {
        for j in 0..p {
            ata[i * p + j] = columns[i].iter().zip(columns[j]).map(|(a, b)| a * b).sum();
        }
        aty[i] = columns[i].iter().zip(y).map(|(a, b)| a * b).sum();
    }
    solve_dense(&ata, &aty, p)
}

/// Straight-line fit y = slope * x + intercept with the standard error
/// of the slope.
#[derive(Clone, Copy, Debug)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> LineFit {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    assert!(n >= 2.0);
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - mx) * (xi - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(xi, yi)| (xi - mx) * (yi - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let dof = (x.len().max(3) - 2) as f64;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| {
            let r = yi - (slope * xi + intercept);
            r * r
        })
        .sum();
    let slope_stderr = (ss_res / dof / sxx).sqrt();
    LineFit {
        slope,
        intercept,
        slope_stderr,
    }
}

/// Log-log slope of |y| against x: fits log|y| = s log x + c.
/// Points with |y| = 0 are skipped.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> LineFit {
    let pairs: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(_, yi)| yi.abs() > 0.0)
        .map(|(xi, yi)| (xi.ln(), yi.abs().ln()))
        .collect();
    let lx: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let ly: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    fit_line(&lx, &ly)
}

/// Nelder-Mead simplex minimization. Deterministic given the starting
/// point; adequate for the 2-parameter pole searches in this crate.
pub fn nelder_mead(
    f: &dyn Fn(&[f64]) -> f64,
    start: &[f64],
    initial_step: f64,
    tol: f64,
    max_iter: usize,
) -> Vec<f64> {
    let dim = start.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(start.to_vec());
    for i in 0..dim {
        let mut v = start.to_vec();
        v[i] += initial_step * v[i].abs().max(1.0) * 0.1;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    for _ in 0..max_iter {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let simplex_sorted: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let values_sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = simplex_sorted;
        values = values_sorted;

        if (values[dim] - values[0]).abs() <= tol * (values[0].abs() + tol) {
            break;
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|k| simplex[..dim].iter().map(|v| v[k]).sum::<f64>() / dim as f64)
            .collect();
        let worst = simplex[dim].clone();
        let reflect: Vec<f64> = (0..dim)
            .map(|k| centroid[k] + (centroid[k] - worst[k]))
            .collect();
        let fr = f(&reflect);
        if fr < values[0] {
            let expand: Vec<f64> = (0..dim)
                .map(|k| centroid[k] + 2.0 * (centroid[k] - worst[k]))
                .collect();
            let fe = f(&expand);
            if fe < fr {
                simplex[dim] = expand;
                values[dim] = fe;
            } else {
                simplex[dim] = reflect;
                values[dim] = fr;
            }
        } else if fr < values[dim - 1] {
            simplex[dim] = reflect;
            values[dim] = fr;
        } else {
            let contract: Vec<f64> = (0..dim)
                .map(|k| centroid[k] + 0.5 * (worst[k] - centroid[k]))
                .collect();
            let fc = f(&contract);
            if fc < values[dim] {
                simplex[dim] = contract;
                values[dim] = fc;
            } else {
                // Shrink toward the best vertex.
                for i in 1..=dim {
                    for k in 0..dim {
                        simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
                    }
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    simplex[best].clone()
}
