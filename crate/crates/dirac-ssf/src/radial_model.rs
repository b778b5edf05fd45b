//! Desk-scale operator realization: partial-wave reduction of the
//! spherically symmetric Dirac operator to 2x2 radial blocks, with
//! exterior complex scaling or a complex absorbing potential, on a
//! staggered finite-difference grid.

use crate::dirac_core::PhysicalConfig;
use crate::distortion::{scaling_function, DistortionParam, ScalingSpec};
use crate::fields::{FieldConfig, FieldError, RadialProfile, V3};
use crate::linalg::CMat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Relativistic angular momentum channel; kappa != 0, 3D degeneracy
/// 2|kappa|.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RadialChannel {
    pub kappa: i32,
}

impl RadialChannel {
    pub fn new(kappa: i32) -> Self {
        assert!(kappa != 0, "kappa = 0 is not a Dirac channel");
        RadialChannel { kappa }
    }

    pub fn degeneracy(&self) -> u32 {
        2 * self.kappa.unsigned_abs()
    }
}

/// Radial grid: staggered nodes r_j = (j + 1/2) dr, j = 0..n-1, so the
/// kappa/r singularity never sits on a node.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub r_max: f64,
    pub n: usize,
}

impl RadialGrid {
    pub fn dr(&self) -> f64 {
        self.r_max / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dr()
    }
}

/// How the non-self-adjoint deformation is realized.
#[derive(Clone, Debug)]
pub enum Method {
    ComplexScaling {
        param: DistortionParam,
        spec: ScalingSpec,
    },
    Cap {
        /// CAP strength C0; the absorbing term is -i C0 psi(s) I2.
        strength: f64,
        /// Onset radius: the bump ramps from 0 at alpha0 to 1 at r_max.
        alpha0: f64,
    },
}

impl Method {
    pub fn theta(&self) -> Complex64 {
        match self {
            Method::ComplexScaling { param, .. } => param.theta,
            Method::Cap { .. } => c(0.0, 0.0),
        }
    }

    /// Self-adjoint reference realization (theta = 0).
    pub fn self_adjoint(scaling: ScalingSpec) -> Method {
        Method::ComplexScaling {
            param: DistortionParam::new(c(0.0, 0.0), 0.5).expect("theta 0 admissible"),
            spec: scaling,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RadialError {
    #[error("field validation: {0}")]
    Field(#[from] FieldError),
    #[error("fields are not spherical scalar potentials: {0}")]
    NonSpherical(&'static str),
    #[error("r_max = {r_max} must exceed the scaling radius K = {k}")]
    BoxTooSmall { r_max: f64, k: f64 },
    #[error("grid too coarse: {points_per_wavelength:.2} points per wavelength at the reference momentum (need >= 4)")]
    GridTooCoarse { points_per_wavelength: f64 },
    #[error("grid must have at least 64 points, got {0}")]
    GridTooSmall(usize),
    #[error("energy window [{0}, {1}] is empty or touches +-mc^2")]
    BadWindow(f64, f64),
    #[error("distortion: {0}")]
    Distortion(#[from] crate::distortion::DistortionError),
}

/// Validation report for spherically symmetric scalar fields.
#[derive(Clone, Debug)]
pub struct RadialFieldReport {
    /// Estimated decay exponent from a log-log fit (infinite when the
    /// tail underflows).
    pub delta_hat: f64,
    /// min over samples of 2mc^2 - |e(v+ - v-)|.
    pub mass_gap_margin: f64,
    /// Set when the decay hypothesis delta > 3 needed by the SSF
    /// theory cannot be confirmed.
    pub ssf_decay_warning: bool,
}

/// Confirms v_plus = v_minus spherical and A = 0, estimates the decay
/// exponent, and reports the mass-gap margin.
pub fn validate_radial_fields(
    fields: &FieldConfig,
    phys: &PhysicalConfig,
) -> Result<RadialFieldReport, RadialError> {
    let vp = fields
        .v_plus
        .radial()
        .ok_or(RadialError::NonSpherical("v_plus is not a radial profile"))?;
    let vm = fields
        .v_minus
        .radial()
        .ok_or(RadialError::NonSpherical("v_minus is not a radial profile"))?;
    for i in 0..200 {
        let r = 0.05 * i as f64;
        if (vp.eval(r) - vm.eval(r)).abs() > 1e-12 {
            return Err(RadialError::NonSpherical("non-spherical/non-scalar: v_plus != v_minus"));
        }
    }
    for i in 0..50 {
        let r = 0.3 * i as f64;
        let x = V3::new(r, 0.0, 0.0);
        if fields.a_field.eval(&x).norm() > 1e-14 {
            return Err(RadialError::NonSpherical("non-spherical/non-scalar: A != 0"));
        }
    }
    fields.check_mass_gap(phys.m, phys.c, phys.e)?;
    let delta_hat = fields.estimated_decay_exponent();
    Ok(RadialFieldReport {
        delta_hat,
        mass_gap_margin: 2.0 * phys.mc2(), // v+ = v- exactly
        ssf_decay_warning: delta_hat <= 3.0,
    })
}

/// All channels kappa with classical access to the energy window
/// inside the box: the centrifugal term (h c kappa / r)^2 must fit
/// under (lambda - e v(r))^2 - m^2 c^4 somewhere in (0, r_max].
pub fn channel_list(
    phys: &PhysicalConfig,
    window: (f64, f64),
    fields: &FieldConfig,
    r_max: f64,
) -> Result<Vec<RadialChannel>, RadialError> {
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(RadialError::BadWindow(lo, hi));
    }
    let profile = fields
        .v_plus
        .radial()
        .ok_or(RadialError::NonSpherical("channel list needs radial fields"))?;
    let mc2 = phys.mc2();
    let accessible = |kappa: i32| -> bool {
        let k = kappa.abs() as f64;
        let n_samples = 400;
        for i in 1..=n_samples {
            let r = r_max * i as f64 / n_samples as f64;
            let ev = phys.e * profile.eval(r);
            for lam in [lo, hi] {
                let kinetic = (lam - ev) * (lam - ev) - mc2 * mc2;
                let barrier = (phys.h * phys.c * k / r).powi(2);
                if kinetic >= barrier {
                    return true;
                }
            }
        }
        false
    };
    let mut out = Vec::new();
    let mut kappa = 1;
    loop {
        let any = [-kappa, kappa]
            .into_iter()
            .filter(|&k| accessible(k))
            .map(|k| RadialChannel::new(k))
            .collect::<Vec<_>>();
        if any.is_empty() {
            break;
        }
        // Negative kappa first for a deterministic ordering.
        for ch in any {
            out.push(ch);
        }
        kappa += 1;
        if kappa > 100_000 {
            break;
        }
    }
    out.sort_by_key(|ch| (ch.kappa.abs(), ch.kappa));
    Ok(out)
}

/// Discretized 2x2-block radial Dirac operator for one channel.
#[derive(Clone, Debug)]
pub struct AssembledOperator {
    pub matrix: CMat,
    pub channel: RadialChannel,
    pub grid: RadialGrid,
    pub h: f64,
    pub theta: Complex64,
}

impl AssembledOperator {
    pub fn dim(&self) -> usize {
        self.matrix.n_rows
    }

    /// Deviation from a real-symmetric matrix; zero for theta = 0,
    /// zero CAP strength, and real potentials.
    pub fn self_adjoint_defect(&self) -> f64 {
        let mut d = self.matrix.symmetry_defect();
        for v in &self.matrix.data {
            d = d.max(v.im.abs());
        }
        d
    }

    /// Matrix-market style text dump (coordinate format) for external
    /// verification.
    pub fn to_matrix_market(&self) -> String {
        let mut nnz = 0;
        for v in &self.matrix.data {
            if v.norm() != 0.0 {
                nnz += 1;
            }
        }
        let mut out = String::new();
        out.push_str("%%MatrixMarket matrix coordinate complex general\n");
        out.push_str(&format!(
            "% radial Dirac channel kappa={} n={} r_max={} h={}\n",
            self.channel.kappa, self.grid.n, self.grid.r_max, self.h
        ));
        out.push_str(&format!("{} {} {}\n", self.dim(), self.dim(), nnz));
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                let v = self.matrix[(i, j)];
                if v.norm() != 0.0 {
                    out.push_str(&format!("{} {} {:.16e} {:.16e}\n", i + 1, j + 1, v.re, v.im));
                }
            }
        }
        out
    }
}

/// 4th-order centered antisymmetric first-derivative stencil with
/// implicit zero ghost values (Dirichlet truncation keeps the matrix
/// exactly antisymmetric).
fn derivative_matrix(n: usize, dr: f64) -> Vec<(usize, usize, f64)> {
    let c1 = 8.0 / (12.0 * dr);
    let c2 = -1.0 / (12.0 * dr);
    let mut entries = Vec::with_capacity(4 * n);
    for j in 0..n {
        let mut push = |i: isize, w: f64| {
            if i >= 0 && (i as usize) < n {
                entries.push((j, i as usize, w));
            }
        };
        push(j as isize - 2, -c2);
        push(j as isize - 1, -c1);
        push(j as isize + 1, c1);
        push(j as isize + 2, c2);
    }
    entries
}

/// CAP bump profile: exp(1 - 1/(1 - s^2)) on |s| < 1, ramping from 0
/// at r = alpha0 (s = -1) to 1 at r = r_max (s = 0).
fn cap_profile(r: f64, alpha0: f64, r_max: f64) -> f64 {
    if r <= alpha0 {
        return 0.0;
    }
    let s = (r - r_max) / (r_max - alpha0);
    if s.abs() >= 1.0 {
        return 0.0;
    }
    (1.0 - 1.0 / (1.0 - s * s)).exp()
}

/// Assembles the channel operator
/// h_kappa = [[mc^2 + e v, c h (-d/dr + kappa/r)],
///            [c h (d/dr + kappa/r), -mc^2 + e v]]
/// with the radial variable moved onto the complex path r + theta g(r)
/// (complex scaling) or with an added absorbing term (CAP).
pub fn assemble_channel_operator(
    ch: RadialChannel,
    method: &Method,
    grid: RadialGrid,
    fields: &FieldConfig,
    phys: &PhysicalConfig,
) -> Result<AssembledOperator, RadialError> {
    if grid.n < 64 {
        return Err(RadialError::GridTooSmall(grid.n));
    }
    let profile = fields
        .v_plus
        .radial()
        .ok_or(RadialError::NonSpherical("assembly needs radial fields"))?
        .clone();

    if let Method::ComplexScaling { spec, .. } = method {
        if grid.r_max <= spec.k_radius {
            return Err(RadialError::BoxTooSmall {
                r_max: grid.r_max,
                k: spec.k_radius,
            });
        }
    }

    // Nyquist-style resolution check: the fastest oscillation the
    // model must carry sits at the reference energy scale set by the
    // rest energy and the well depth.
    let mc2 = phys.mc2();
    let depth = (0..200)
        .map(|i| (phys.e * profile.eval(grid.r_max * i as f64 / 200.0)).abs())
        .fold(0.0, f64::max);
    let e_ref = 2.0 * mc2 + depth;
    let k_ref = ((e_ref + depth) * (e_ref + depth) - mc2 * mc2).max(0.0).sqrt() / (phys.c * phys.h);
    let points_per_wavelength = 2.0 * std::f64::consts::PI / (k_ref * grid.dr()).max(1e-300);
    if points_per_wavelength < 4.0 {
        return Err(RadialError::GridTooCoarse {
            points_per_wavelength,
        });
    }

    let n = grid.n;
    let dr = grid.dr();
    let ch_factor = phys.c * phys.h;

    // Per-node complex path data: phi(r), phi'(r), phi''(r).
    let mut phi = vec![c(0.0, 0.0); n];
    let mut dphi = vec![c(1.0, 0.0); n];
    let mut ddphi = vec![c(0.0, 0.0); n];
    let mut cap = vec![0.0_f64; n];
    match method {
        Method::ComplexScaling { param, spec } => {
            let g = scaling_function(*spec);
            for j in 0..n {
                let r = grid.node(j);
                let (u, du, ddu) = g.radial(r);
                phi[j] = c(r, 0.0) + param.theta * u;
                dphi[j] = c(1.0, 0.0) + param.theta * du;
                ddphi[j] = param.theta * ddu;
            }
        }
        Method::Cap { strength, alpha0 } => {
            for j in 0..n {
                let r = grid.node(j);
                phi[j] = c(r, 0.0);
                cap[j] = strength * cap_profile(r, *alpha0, grid.r_max);
            }
        }
    }

    let theta = method.theta();
    let mut v_at = vec![c(0.0, 0.0); n];
    for j in 0..n {
        v_at[j] = if theta == c(0.0, 0.0) {
            c(profile.eval(phi[j].re), 0.0)
        } else {
            profile.eval_complex(phi[j]).map_err(RadialError::Field)?
        };
    }

    // Block layout: indices 0..n hold P, n..2n hold Q.
    let mut m = CMat::zeros(2 * n, 2 * n);
    for j in 0..n {
        let ev = v_at[j] * phys.e;
        m[(j, j)] += c(mc2, 0.0) + ev;
        m[(n + j, n + j)] += c(-mc2, 0.0) + ev;
        if cap[j] != 0.0 {
            m[(j, j)] += c(0.0, -cap[j]);
            m[(n + j, n + j)] += c(0.0, -cap[j]);
        }
        // kappa / phi(r) on both off-diagonal blocks.
        let centrifugal = c(ch.kappa as f64, 0.0) / phi[j] * ch_factor;
        m[(j, n + j)] += centrifugal;
        m[(n + j, j)] += centrifugal;
    }
    // Scaled derivative: (1/phi') d/dr - phi''/(2 phi'^2), acting as
    // -d_theta on the upper block and +d_theta on the lower block.
    for (row, col, w) in derivative_matrix(n, dr) {
        let upper = dphi[row].finv() * w * ch_factor;
        m[(row, n + col)] += -upper;
        m[(n + row, col)] += upper;
    }
    for j in 0..n {
        let curv = ddphi[j] / (dphi[j] * dphi[j]) * (0.5 * ch_factor);
        m[(j, n + j)] += curv;
        m[(n + j, j)] += -curv;
    }

    Ok(AssembledOperator {
        matrix: m,
        channel: ch,
        grid,
        h: phys.h,
        theta,
    })
}

/// Real-symmetric fast path at theta = 0: the eigenvalues of the
/// self-adjoint channel operator, ascending.
pub fn self_adjoint_eigenvalues(
    ch: RadialChannel,
    scaling: ScalingSpec,
    grid: RadialGrid,
    fields: &FieldConfig,
    phys: &PhysicalConfig,
) -> Result<Vec<f64>, RadialError> {
    let op = assemble_channel_operator(ch, &Method::self_adjoint(scaling), grid, fields, phys)?;
    let n = op.dim();
    let mut real = vec![0.0_f64; n * n];
    for j in 0..n {
        for i in 0..n {
            real[j * n + i] = op.matrix[(i, j)].re;
        }
    }
    crate::linalg::eig_real_symmetric(&real, n)
        .map_err(|e| RadialError::NonSpherical(Box::leak(format!("{e}").into_boxed_str())))
}

/// Discrete eigenvalues inside the spectral gap (-mc^2, mc^2), with a
/// margin keeping clear of the discretized band edges.
pub fn gap_eigenvalues(eigs: &[f64], phys: &PhysicalConfig, margin: f64) -> Vec<f64> {
    let mc2 = phys.mc2();
    eigs.iter()
        .copied()
        .filter(|&e| e > -mc2 + margin && e < mc2 - margin)
        .collect()
}
