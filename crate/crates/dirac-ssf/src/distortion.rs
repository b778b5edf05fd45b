//! The analytic distortion family: the scaling function g (identity
//! outside a compact set, zero near the origin), the map
//! phi_theta(x) = x + theta g(x), the rotated essential-spectrum
//! curves Gamma_theta, the sector swept by them, and the distorted
//! principal symbol.

use crate::dirac_core::{standard_dirac_matrices, PhysicalConfig, SymbolPoint, M4};
use crate::fields::{FieldConfig, FieldError, V3};
use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, thiserror::Error)]
pub enum DistortionError {
    #[error("sector aperture epsilon must lie in (0, 1), got {0}")]
    BadEpsilon(f64),
    #[error("|theta| = {theta_abs} exceeds the admissible radius {bound}")]
    ThetaTooLarge { theta_abs: f64, bound: f64 },
    #[error("Im theta = {0} must be nonnegative for resonance runs")]
    ThetaLowerHalf(f64),
    #[error("|theta| = {theta_abs} >= M = {m} risks non-invertible phi_theta")]
    ThetaBeyondInvertibility { theta_abs: f64, m: f64 },
    #[error("scaling radii must satisfy 0 < R0 < K_radius, got R0 = {r0}, K = {k}")]
    BadRadii { r0: f64, k: f64 },
    #[error("field continuation: {0}")]
    Field(#[from] FieldError),
    #[error("vector potential has no complex continuation; distorted symbol requires A = 0")]
    VectorPotentialUnsupported,
}

/// Maximal |theta| keeping the distortion admissible for sector
/// aperture epsilon: r_eps = eps / sqrt(1 + eps^2).
pub fn admissible_radius(epsilon: f64) -> Result<f64, DistortionError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(DistortionError::BadEpsilon(epsilon));
    }
    Ok(epsilon / (1.0 + epsilon * epsilon).sqrt())
}

/// Shape of the radial scaling function: zero inside B(0, R0), the
/// identity outside B(0, K_radius), quintic interpolation between.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct ScalingSpec {
    pub r0: f64,
    pub k_radius: f64,
}

impl ScalingSpec {
    pub fn new(r0: f64, k_radius: f64) -> Result<Self, DistortionError> {
        if !(r0 > 0.0 && r0 < k_radius) {
            return Err(DistortionError::BadRadii { r0, k: k_radius });
        }
        Ok(ScalingSpec { r0, k_radius })
    }
}

/// Complex distortion parameter theta inside the admissible disk of
/// aperture epsilon.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct DistortionParam {
    pub theta: Complex64,
    pub epsilon: f64,
}

impl DistortionParam {
    pub fn new(theta: Complex64, epsilon: f64) -> Result<Self, DistortionError> {
        let bound = admissible_radius(epsilon)?;
        if theta.norm() > bound + 1e-15 {
            return Err(DistortionError::ThetaTooLarge {
                theta_abs: theta.norm(),
                bound,
            });
        }
        Ok(DistortionParam { theta, epsilon })
    }

    /// Resonance runs additionally need theta in the upper half disk.
    pub fn validate_for_resonances(&self) -> Result<(), DistortionError> {
        if self.theta.im < 0.0 {
            return Err(DistortionError::ThetaLowerHalf(self.theta.im));
        }
        Ok(())
    }
}

/// Radial scaling function g(x) = gamma(|x|) x with precomputed
/// sup-norm of the gradient (the constant 1/M of the admissibility
/// condition).
#[derive(Clone, Debug)]
pub struct ScalingFunction {
    pub spec: ScalingSpec,
    m_inverse: f64,
}

/// Quintic smoothstep matching value and two derivatives at both ends.
fn smoothstep5(t: f64) -> (f64, f64, f64) {
    if t <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    if t >= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    let s = 10.0 * t.powi(3) - 15.0 * t.powi(4) + 6.0 * t.powi(5);
    let ds = 30.0 * t.powi(2) * (t - 1.0) * (t - 1.0);
    let dds = 60.0 * t * (2.0 * t - 1.0) * (t - 1.0);
    (s, ds, dds)
}

/// Builds the scaling function for a spec, reporting sup ||grad g||
/// from dense radial sampling.
pub fn scaling_function(spec: ScalingSpec) -> ScalingFunction {
    let mut sup = 1.0_f64; // the exterior region contributes exactly 1
    let samples = 20000;
    for i in 0..=samples {
        let r = spec.r0 + (spec.k_radius - spec.r0) * i as f64 / samples as f64;
        let (gamma, dgamma, _) = ScalingFunction::gamma_raw(&spec, r);
        // grad g = gamma I + (gamma'/r) x x^T: eigenvalues gamma
        // (twice) and gamma + gamma' r.
        sup = sup.max(gamma.abs()).max((gamma + dgamma * r).abs());
    }
    ScalingFunction {
        spec,
        m_inverse: sup,
    }
}

impl ScalingFunction {
    fn gamma_raw(spec: &ScalingSpec, r: f64) -> (f64, f64, f64) {
        let l = spec.k_radius - spec.r0;
        let t = (r - spec.r0) / l;
        let (s, ds, dds) = smoothstep5(t);
        (s, ds / l, dds / (l * l))
    }

    /// Interpolation factor gamma(r) with two derivatives: g(x) =
    /// gamma(|x|) x.
    pub fn gamma(&self, r: f64) -> (f64, f64, f64) {
        Self::gamma_raw(&self.spec, r)
    }

    /// Scalar radial scaling u(r) = gamma(r) r with two derivatives,
    /// used by the radial model: the distorted radius is r + theta u(r).
    pub fn radial(&self, r: f64) -> (f64, f64, f64) {
        let (g, dg, ddg) = self.gamma(r);
        (g * r, g + dg * r, 2.0 * dg + ddg * r)
    }

    pub fn eval(&self, x: &V3) -> V3 {
        let (g, _, _) = self.gamma(x.norm());
        x * g
    }

    /// Jacobian matrix of g at x.
    pub fn gradient(&self, x: &V3) -> Matrix3<f64> {
        let r = x.norm();
        if r == 0.0 {
            return Matrix3::zeros();
        }
        let (g, dg, _) = self.gamma(r);
        Matrix3::identity() * g + (x * x.transpose()) * (dg / r)
    }

    /// sup ||grad g|| = 1/M, reported from dense sampling.
    pub fn m_inverse(&self) -> f64 {
        self.m_inverse
    }
}

/// phi_theta(x) = x + theta g(x) and the determinant of its Jacobian.
pub fn distort_point(
    d: &DistortionParam,
    g: &ScalingFunction,
    x: &V3,
) -> Result<(Vector3<Complex64>, Complex64), DistortionError> {
    let m = 1.0 / g.m_inverse();
    if d.theta.norm() >= m {
        return Err(DistortionError::ThetaBeyondInvertibility {
            theta_abs: d.theta.norm(),
            m,
        });
    }
    let gval = g.eval(x);
    let phi = Vector3::new(
        c(x.x, 0.0) + d.theta * gval.x,
        c(x.y, 0.0) + d.theta * gval.y,
        c(x.z, 0.0) + d.theta * gval.z,
    );
    let r = x.norm();
    let (gamma, dgamma, _) = g.gamma(r);
    // det(I + theta grad g) with grad g = gamma I + (gamma'/r) x x^T:
    // tangential factor (1 + theta gamma) twice, radial factor
    // 1 + theta (gamma + gamma' r).
    let tangential = c(1.0, 0.0) + d.theta * gamma;
    let radial = c(1.0, 0.0) + d.theta * (gamma + dgamma * r);
    Ok((phi, tangential * tangential * radial))
}

/// The rotated essential-spectrum curve Gamma_theta at parameter
/// lambda >= 0: +- c sqrt(lambda/(1+theta)^2 + m^2 c^2), principal
/// square root.
pub fn essential_curve(
    theta: Complex64,
    lam: f64,
    phys: &PhysicalConfig,
) -> (Complex64, Complex64) {
    let one_plus = c(1.0, 0.0) + theta;
    let inside = c(lam, 0.0) / (one_plus * one_plus) + c(phys.m * phys.m * phys.c * phys.c, 0.0);
    let root = inside.sqrt(); // principal: Re >= 0
    let z = root * phys.c;
    (z, -z)
}

/// Membership in the sector S_theta0 swept by the curves Gamma_theta
/// strictly between Gamma_0 and Gamma_theta0.
///
/// A point z != +-mc^2 lies on Gamma_theta exactly when arg(1+theta) =
/// -arg w for w = sqrt(z^2 - m^2 c^4) (principal); every modulus
/// |1+theta| on that ray then realizes z. Membership thus reduces to:
/// the ray angle is strictly between 0 and arg(1+theta0), and the ray
/// reaches moduli beyond |1+theta0| while theta stays in the
/// admissible upper half-disk.
pub fn in_sector_s(
    z: Complex64,
    theta0: Complex64,
    epsilon: f64,
    phys: &PhysicalConfig,
) -> Result<bool, DistortionError> {
    let r_eps = admissible_radius(epsilon)?;
    let mc2 = phys.mc2();
    let w = (z * z - c(mc2 * mc2, 0.0)).sqrt();
    if w.norm() == 0.0 {
        return Ok(false);
    }
    let a = -w.arg();
    let a0 = (c(1.0, 0.0) + theta0).arg();
    if !(a > 0.0 && a < a0) {
        return Ok(false);
    }
    // Moduli t with |t e^{ia} - 1| <= r_eps and Im theta >= 0.
    let sin_a = a.sin();
    if sin_a > r_eps {
        return Ok(false);
    }
    let t_max = a.cos() + (r_eps * r_eps - sin_a * sin_a).sqrt();
    Ok(t_max > (c(1.0, 0.0) + theta0).norm())
}

/// The distorted principal symbol
/// h_theta(x, xi) = alpha . zeta_theta + m c^2 beta + V(phi_theta(x))
///                  - (c/2) sum_j alpha_j J^{-1} dJ/dx_j,
/// with zeta_{theta,j} = c sum_k xi_k (d_j phi_theta^{-1})_k at
/// phi_theta(x).
pub fn distorted_symbol(
    d: &DistortionParam,
    g: &ScalingFunction,
    p: &SymbolPoint,
    fields: &FieldConfig,
    phys: &PhysicalConfig,
) -> Result<M4, DistortionError> {
    let zeta = zeta_theta(d, g, p, phys)?;
    let set = standard_dirac_matrices();
    let mut h = set.beta * c(phys.mc2(), 0.0);
    for k in 0..3 {
        h += set.alpha[k] * zeta[k];
    }

    // Electric part evaluated on the complex radial path.
    if !fields.a_field.is_zero() {
        return Err(DistortionError::VectorPotentialUnsupported);
    }
    let r = p.x.norm();
    let (gamma, _, _) = g.gamma(r);
    let z_radius = c(r, 0.0) * (c(1.0, 0.0) + d.theta * gamma);
    let (vp, vm) = match (fields.v_plus.radial(), fields.v_minus.radial()) {
        (Some(pp), Some(pm)) => (pp.eval_complex(z_radius)?, pm.eval_complex(z_radius)?),
        _ => {
            if d.theta.im == 0.0 && d.theta.re == 0.0 {
                (
                    c(fields.v_plus.eval(&p.x), 0.0),
                    c(fields.v_minus.eval(&p.x), 0.0),
                )
            } else {
                return Err(DistortionError::Field(FieldError::NoComplexExtension(
                    z_radius,
                )));
            }
        }
    };
    h[(0, 0)] += vp * phys.e;
    h[(1, 1)] += vp * phys.e;
    h[(2, 2)] += vm * phys.e;
    h[(3, 3)] += vm * phys.e;

    // Jacobian term -(c/2) alpha_j J^{-1} dJ/dx_j, with dJ by centered
    // differences of the closed-form determinant.
    if d.theta != c(0.0, 0.0) {
        let step = 1e-5 * (1.0 + p.x.norm());
        for j in 0..3 {
            let mut xp = p.x;
            let mut xm = p.x;
            xp[j] += step;
            xm[j] -= step;
            let (_, jp) = distort_point(d, g, &xp)?;
            let (_, jm) = distort_point(d, g, &xm)?;
            let (_, j0) = distort_point(d, g, &p.x)?;
            let dj = (jp - jm) / (2.0 * step);
            h -= set.alpha[j] * (dj / j0 * (0.5 * phys.c));
        }
    }
    Ok(h)
}

/// The distorted momentum covector zeta_theta(x, xi).
pub fn zeta_theta(
    d: &DistortionParam,
    g: &ScalingFunction,
    p: &SymbolPoint,
    phys: &PhysicalConfig,
) -> Result<Vector3<Complex64>, DistortionError> {
    let m = 1.0 / g.m_inverse();
    if d.theta.norm() >= m {
        return Err(DistortionError::ThetaBeyondInvertibility {
            theta_abs: d.theta.norm(),
            m,
        });
    }
    let grad = g.gradient(&p.x);
    let mut jac = Matrix3::<Complex64>::zeros();
    for i in 0..3 {
        for j in 0..3 {
            jac[(i, j)] = c(if i == j { 1.0 } else { 0.0 }, 0.0) + d.theta * grad[(i, j)];
        }
    }
    let inv = jac.try_inverse().expect("Jacobian invertible for |theta| < M");
    // zeta_j = c sum_k xi_k [J^{-1}]_{kj}: the inverse-map derivative
    // (d_j phi^{-1}_k)(phi(x)) is the (k, j) entry of (d phi)^{-1}(x).
    let mut zeta = Vector3::<Complex64>::zeros();
    for j in 0..3 {
        for k in 0..3 {
            zeta[j] += c(p.xi[k], 0.0) * inv[(k, j)];
        }
        zeta[j] *= phys.c;
    }
    Ok(zeta)
}

/// Eigenvalues +- sqrt(zeta_theta^2 + m^2 c^4) of the free distorted
/// symbol, principal branch; flags proximity of the argument to the
/// branch cut.
#[derive(Clone, Copy, Debug)]
pub struct FreeDistortedEigs {
    pub plus: Complex64,
    pub minus: Complex64,
    pub near_branch_cut: bool,
}

pub fn free_distorted_eigenvalues(
    d: &DistortionParam,
    g: &ScalingFunction,
    p: &SymbolPoint,
    phys: &PhysicalConfig,
) -> Result<FreeDistortedEigs, DistortionError> {
    let zeta = zeta_theta(d, g, p, phys)?;
    let mc2 = phys.mc2();
    let inside = zeta.x * zeta.x + zeta.y * zeta.y + zeta.z * zeta.z + c(mc2 * mc2, 0.0);
    let near_branch_cut = inside.re < 0.0 && inside.im.abs() <= 1e-12 * inside.norm().max(1.0);
    let root = inside.sqrt();
    Ok(FreeDistortedEigs {
        plus: root,
        minus: -root,
        near_branch_cut,
    })
}
