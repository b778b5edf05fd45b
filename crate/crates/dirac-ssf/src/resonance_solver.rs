//! Complex eigenvalue extraction and the numerical face of resonance
//! well-definedness: theta-stability filtering, symmetry partner
//! verification, and counting in regions and disks.

use crate::dirac_core::PhysicalConfig;
use crate::distortion::{essential_curve, DistortionParam, ScalingSpec};
use crate::fields::FieldConfig;
use crate::linalg::{self, CMat};
use crate::radial_model::{
    assemble_channel_operator, AssembledOperator, Method, RadialChannel, RadialError, RadialGrid,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A theta-stable complex eigenvalue attributed to a channel.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Resonance {
    pub z: Complex64,
    pub kappa: i32,
    pub degeneracy: u32,
    /// |z(theta_1) - z(theta_2)| from the stability filter.
    pub theta_residual: f64,
    /// Change of z under grid refinement (0 when only one grid was
    /// used).
    pub grid_residual: f64,
}

/// Counting domain: a rectangle in the complex plane away from the
/// essential-spectrum curves, or a real interval inside the gap.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub enum Region {
    Rectangle {
        re_min: f64,
        re_max: f64,
        im_min: f64,
        im_max: f64,
    },
    GapInterval {
        lo: f64,
        hi: f64,
    },
}

#[derive(Clone, Copy, Debug)]
pub struct RegionQuery {
    pub region: Region,
}

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error("matrix dimension {dim} exceeds the dense-solve cap {cap}; use solve_spectrum_windowed")]
    DimensionCap { dim: usize, cap: usize },
    #[error("linear algebra: {0}")]
    Linalg(#[from] linalg::LinalgError),
    #[error("radial model: {0}")]
    Radial(#[from] RadialError),
    #[error("region touches the essential-spectrum curve Gamma_theta0")]
    RegionTouchesCurve,
    #[error("region must avoid the gap edges +-mc^2")]
    RegionAcrossGapEdge,
    #[error("need at least two distinct theta values, got {0}")]
    NeedTwoThetas(usize),
}

pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Full complex spectrum of an assembled operator, ordered by
/// (Re, Im). Refuses matrices beyond the dense cap.
pub fn solve_spectrum(op: &AssembledOperator) -> Result<Vec<Complex64>, SolverError> {
    solve_spectrum_capped(op, DEFAULT_DENSE_CAP)
}

pub fn solve_spectrum_capped(
    op: &AssembledOperator,
    cap: usize,
) -> Result<Vec<Complex64>, SolverError> {
    if op.dim() > cap {
        return Err(SolverError::DimensionCap {
            dim: op.dim(),
            cap,
        });
    }
    Ok(linalg::eig_complex(&op.matrix)?)
}

/// Shift-invert subspace iteration: eigenvalues inside the disk
/// |z - center| <= radius, for matrices beyond the dense cap.
/// Residual tolerance 1e-10 relative to the matrix scale.
pub fn solve_spectrum_windowed(
    matrix: &CMat,
    center: Complex64,
    radius: f64,
    max_eigs: usize,
) -> Result<Vec<Complex64>, SolverError> {
    let n = matrix.n_rows;
    let mut shifted = matrix.clone();
    for i in 0..n {
        shifted[(i, i)] -= center;
    }
    let lu = linalg::lu_factor(&shifted)?;

    let block = (max_eigs + 8).min(n);
    // Deterministic pseudo-random start block.
    let mut v: Vec<Vec<Complex64>> = (0..block)
        .map(|k| {
            (0..n)
                .map(|i| {
                    let s = ((i * 2654435761 + k * 40503 + 12345) % 104729) as f64 / 104729.0;
                    c(s - 0.5, ((s * 7.0).fract()) - 0.5)
                })
                .collect()
        })
        .collect();
    orthonormalize(&mut v);

    let scale = matrix.data.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut ritz: Vec<Complex64> = Vec::new();
    for _iter in 0..200 {
        // Apply (A - center)^{-1} to the block.
        for col in v.iter_mut() {
            *col = lu.solve(col)?;
        }
        orthonormalize(&mut v);
        // Rayleigh-Ritz on the inverse operator.
        let m = v.len();
        let mut proj = CMat::zeros(m, m);
        let images: Vec<Vec<Complex64>> = v.iter().map(|col| lu.solve(col)).collect::<Result<_, _>>()?;
        for (j, img) in images.iter().enumerate() {
            for (i, basis) in v.iter().enumerate() {
                proj[(i, j)] = dot(basis, img);
            }
        }
        let mu = linalg::eig_complex(&proj)?;
        let mut new_ritz: Vec<Complex64> = mu
            .iter()
            .filter(|m| m.norm() > 1e-14)
            .map(|m| center + m.finv())
            .filter(|z| (z - center).norm() <= radius * 1.2)
            .collect();
        new_ritz.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        let converged = !new_ritz.is_empty()
            && ritz.len() == new_ritz.len()
            && ritz
                .iter()
                .zip(&new_ritz)
                .all(|(a, b)| (a - b).norm() <= 1e-10 * scale.max(1.0));
        ritz = new_ritz;
        if converged {
            break;
        }
    }
    Ok(ritz
        .into_iter()
        .filter(|z| (z - center).norm() <= radius)
        .collect())
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn orthonormalize(v: &mut Vec<Vec<Complex64>>) {
    let mut kept: Vec<Vec<Complex64>> = Vec::with_capacity(v.len());
    for col in v.drain(..) {
        let mut w = col;
        for prev in &kept {
            let coeff = dot(prev, &w);
            for (wi, pi) in w.iter_mut().zip(prev) {
                *wi -= coeff * pi;
            }
        }
        let norm = dot(&w, &w).re.sqrt();
        if norm > 1e-12 {
            for wi in w.iter_mut() {
                *wi /= norm;
            }
            kept.push(w);
        }
    }
    *v = kept;
}

/// Result of the theta-stability filter.
#[derive(Clone, Debug)]
pub struct FilterOutcome {
    pub resonances: Vec<Resonance>,
    /// Set when the tolerance is not clearly below the continuum
    /// spacing, making the filter unreliable.
    pub warning: Option<String>,
}

/// Keeps eigenvalues possessing a partner within `tol` across two
/// theta values: theta-stable points are resonances, theta-moving
/// points are rotated continuum. Band-edge cavity modes of the
/// truncated discretization sit on the real axis and can also be
/// theta-stable; callers should combine the output with a region
/// query that excludes the real continuum.
pub fn filter_resonances(
    eigs1: &[Complex64],
    theta1: Complex64,
    eigs2: &[Complex64],
    theta2: Complex64,
    tol: f64,
    channel: RadialChannel,
) -> FilterOutcome {
    assert!(theta1 != theta2, "stability filter needs distinct thetas");
    let mut resonances = Vec::new();
    for z1 in eigs1 {
        let best = eigs2
            .iter()
            .map(|z2| (z1 - z2).norm())
            .fold(f64::INFINITY, f64::min);
        if best <= tol {
            resonances.push(Resonance {
                z: *z1,
                kappa: channel.kappa,
                degeneracy: channel.degeneracy(),
                theta_residual: best,
                grid_residual: 0.0,
            });
        }
    }
    // Estimate the continuum spacing from the eigs1 gaps and warn if
    // the tolerance is not well below it.
    let mut sorted: Vec<f64> = eigs1.iter().map(|z| z.re).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let spacing = sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| *d > 1e-12)
        .fold(f64::INFINITY, f64::min);
    let warning = (tol >= spacing).then(|| {
        format!("filter tolerance {tol} is not below the continuum spacing {spacing}; filter unreliable")
    });
    // Cluster near-identical members (numerical multiplicity).
    resonances.sort_by(|a, b| (a.z.re, a.z.im).partial_cmp(&(b.z.re, b.z.im)).unwrap());
    FilterOutcome {
        resonances,
        warning,
    }
}

/// Validates a region query against Gamma_theta0 and the gap edges.
pub fn validate_region(
    q: &RegionQuery,
    theta0: Complex64,
    phys: &PhysicalConfig,
) -> Result<(), SolverError> {
    let mc2 = phys.mc2();
    match q.region {
        Region::GapInterval { lo, hi } => {
            if lo <= -mc2 || hi >= mc2 || lo >= hi {
                return Err(SolverError::RegionAcrossGapEdge);
            }
            Ok(())
        }
        Region::Rectangle {
            re_min,
            re_max,
            im_min,
            im_max,
        } => {
            let positive_side = re_min > mc2 && re_max > re_min;
            let negative_side = re_max < -mc2 && re_min < re_max;
            if !(positive_side || negative_side) {
                return Err(SolverError::RegionAcrossGapEdge);
            }
            // Sample the curve and require clearance.
            let mut lam = 0.0;
            while lam <= 100.0 * (mc2 * mc2 + re_max * re_max) {
                for z in [essential_curve(theta0, lam, phys).0, essential_curve(theta0, lam, phys).1] {
                    if z.re >= re_min && z.re <= re_max && z.im >= im_min && z.im <= im_max {
                        return Err(SolverError::RegionTouchesCurve);
                    }
                }
                lam = (lam + 0.01).max(lam * 1.02);
            }
            Ok(())
        }
    }
}

fn region_contains(region: &Region, z: Complex64) -> bool {
    match *region {
        Region::Rectangle {
            re_min,
            re_max,
            im_min,
            im_max,
        } => z.re >= re_min && z.re <= re_max && z.im >= im_min && z.im <= im_max,
        Region::GapInterval { lo, hi } => z.im.abs() <= 1e-7 && z.re >= lo && z.re <= hi,
    }
}

/// Degeneracy-weighted count of resonances inside the region.
pub fn count_in_region(res: &[Resonance], q: &RegionQuery) -> u64 {
    res.iter()
        .filter(|r| region_contains(&q.region, r.z))
        .map(|r| r.degeneracy as u64)
        .sum()
}

/// Degeneracy-weighted count in the disk |z - lambda0| <= rho.
pub fn count_in_disk(res: &[Resonance], lambda0: f64, rho: f64) -> u64 {
    res.iter()
        .filter(|r| (r.z - c(lambda0, 0.0)).norm() <= rho)
        .map(|r| r.degeneracy as u64)
        .sum()
}

/// Which symmetry transformation produced the partner resonance set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryMode {
    /// Partner spectrum should equal {-conj(z)}.
    MinusConjugate,
    /// Partner spectrum should equal {conj(z)}.
    Conjugate,
}

#[derive(Clone, Debug)]
pub struct SymmetryReport {
    pub matched: Vec<(Complex64, Complex64)>,
    pub unmatched_left: Vec<Complex64>,
    pub unmatched_right: Vec<Complex64>,
}

impl SymmetryReport {
    pub fn is_bijection(&self) -> bool {
        self.unmatched_left.is_empty() && self.unmatched_right.is_empty()
    }
}

/// Greedy bijection check between a resonance set and its transformed
/// partner set.
pub fn symmetry_partner_check(
    res_h: &[Complex64],
    res_partner: &[Complex64],
    mode: SymmetryMode,
    tol: f64,
) -> SymmetryReport {
    let expected: Vec<Complex64> = res_h
        .iter()
        .map(|z| match mode {
            SymmetryMode::MinusConjugate => -z.conj(),
            SymmetryMode::Conjugate => z.conj(),
        })
        .collect();
    let mut remaining: Vec<Complex64> = res_partner.to_vec();
    let mut matched = Vec::new();
    let mut unmatched_left = Vec::new();
    for (orig, want) in res_h.iter().zip(expected.iter()) {
        let best = remaining
            .iter()
            .enumerate()
            .map(|(i, z)| (i, (z - want).norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        match best {
            Some((i, d)) if d <= tol => {
                matched.push((*orig, remaining.remove(i)));
            }
            _ => unmatched_left.push(*orig),
        }
    }
    SymmetryReport {
        matched,
        unmatched_left,
        unmatched_right: remaining,
    }
}

/// Full per-channel pipeline: solve at each theta on the base grid,
/// filter for stability, then track survivors across refined grids,
/// extrapolating with the measured convergence order when three grids
/// are available.
#[allow(clippy::too_many_arguments)]
pub fn channel_resonances(
    ch: RadialChannel,
    grids: &[RadialGrid],
    thetas: &[Complex64],
    epsilon: f64,
    scaling: ScalingSpec,
    fields: &FieldConfig,
    phys: &PhysicalConfig,
    tol: f64,
) -> Result<Vec<Resonance>, SolverError> {
    if thetas.len() < 2 {
        return Err(SolverError::NeedTwoThetas(thetas.len()));
    }
    let solve = |theta: Complex64, grid: RadialGrid| -> Result<Vec<Complex64>, SolverError> {
        let param = DistortionParam::new(theta, epsilon)
            .map_err(|e| SolverError::Radial(RadialError::Distortion(e)))?;
        let op = assemble_channel_operator(
            ch,
            &Method::ComplexScaling {
                param,
                spec: scaling,
            },
            grid,
            fields,
            phys,
        )?;
        solve_spectrum(&op)
    };

    let base = grids[0];
    let eigs: Vec<Vec<Complex64>> = thetas
        .iter()
        .map(|&t| solve(t, base))
        .collect::<Result<_, _>>()?;
    let mut outcome = filter_resonances(&eigs[0], thetas[0], &eigs[1], thetas[1], tol, ch);
    // Additional thetas tighten the filter.
    for extra in eigs.iter().skip(2) {
        outcome.resonances.retain_mut(|r| {
            let best = extra
                .iter()
                .map(|z| (r.z - z).norm())
                .fold(f64::INFINITY, f64::min);
            r.theta_residual = r.theta_residual.max(best);
            best <= tol
        });
    }

    // Track through grid refinements at the first theta.
    let mut tracked: Vec<Vec<Complex64>> = outcome.resonances.iter().map(|r| vec![r.z]).collect();
    for &grid in &grids[1..] {
        let fine = solve(thetas[0], grid)?;
        for history in tracked.iter_mut() {
            let last = *history.last().unwrap();
            if let Some(best) = fine
                .iter()
                .min_by(|a, b| (*a - last).norm().partial_cmp(&(*b - last).norm()).unwrap())
            {
                history.push(*best);
            }
        }
    }
    for (r, history) in outcome.resonances.iter_mut().zip(&tracked) {
        match history.len() {
            1 => {}
            2 => {
                r.grid_residual = (history[1] - history[0]).norm();
                r.z = history[1];
            }
            _ => {
                let n = history.len();
                let (z0, z1, z2) = (history[n - 3], history[n - 2], history[n - 1]);
                let d1 = (z1 - z0).norm();
                let d2 = (z2 - z1).norm();
                r.grid_residual = d2;
                // Richardson extrapolation with the measured order,
                // assuming successive grid halving.
                if d2 > 1e-15 && d1 > d2 {
                    let rate = d1 / d2;
                    r.z = z2 + (z2 - z1) / (rate - 1.0);
                } else {
                    r.z = z2;
                }
            }
        }
    }
    outcome
        .resonances
        .sort_by(|a, b| (a.z.re, a.z.im).partial_cmp(&(b.z.re, b.z.im)).unwrap());
    Ok(outcome.resonances)
}
