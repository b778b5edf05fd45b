//! Electro-magnetic field data: scalar potentials v_plus/v_minus, a
//! vector potential, decay metadata, and the analytic continuation
//! hooks needed by the complex distortion.

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub type V3 = Vector3<f64>;

#[derive(Debug, thiserror::Error)]
pub enum FieldError {
    #[error("potential has no analytic continuation at complex radius {0}")]
    NoComplexExtension(Complex64),
    #[error("mass-gap condition |e(v+ - v-)| < 2mc^2 violated at |x| = {radius}: {value} >= {bound}")]
    MassGapViolated { radius: f64, value: f64, bound: f64 },
    #[error("non-spherical or non-scalar fields: {0}")]
    NonSpherical(&'static str),
}

/// Named spherically symmetric profiles with closed-form complex
/// continuation. All are functions of r^2 except the square well,
/// which extends only by vanishing beyond its edge.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "profile", rename_all = "kebab-case")]
pub enum RadialProfile {
    Zero,
    /// depth * exp(-r^2 / width^2)
    GaussianWell { depth: f64, width: f64 },
    /// depth on r < radius, zero outside
    SquareWell { depth: f64, radius: f64 },
    /// depth / (1 + r^2/scale^2)^power -- rational short-range decay
    YukawaLike { depth: f64, scale: f64, power: u32 },
}

impl RadialProfile {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            RadialProfile::Zero => 0.0,
            RadialProfile::GaussianWell { depth, width } => depth * (-r * r / (width * width)).exp(),
            RadialProfile::SquareWell { depth, radius } => {
                if r < radius {
                    depth
                } else {
                    0.0
                }
            }
            RadialProfile::YukawaLike { depth, scale, power } => {
                depth / (1.0 + r * r / (scale * scale)).powi(power as i32)
            }
        }
    }

    /// Evaluation along a complex radial path z (the distorted radius
    /// phi_theta(r)). Profiles analytic in r^2 continue directly; the
    /// square well continues only where it is identically zero.
    pub fn eval_complex(&self, z: Complex64) -> Result<Complex64, FieldError> {
        if z.im == 0.0 {
            return Ok(Complex64::new(self.eval(z.re), 0.0));
        }
        match *self {
            RadialProfile::Zero => Ok(Complex64::new(0.0, 0.0)),
            RadialProfile::GaussianWell { depth, width } => {
                Ok(depth * (-z * z / (width * width)).exp())
            }
            RadialProfile::SquareWell { radius, .. } => {
                if z.re > radius {
                    Ok(Complex64::new(0.0, 0.0))
                } else {
                    Err(FieldError::NoComplexExtension(z))
                }
            }
            RadialProfile::YukawaLike { depth, scale, power } => {
                let denom = (Complex64::new(1.0, 0.0) + z * z / (scale * scale)).powu(power);
                Ok(depth / denom)
            }
        }
    }

    /// Decay exponent: the largest delta with |v(r)| <= C <r>^-delta.
    pub fn decay_exponent(&self) -> f64 {
        match *self {
            RadialProfile::Zero | RadialProfile::GaussianWell { .. } | RadialProfile::SquareWell { .. } => {
                f64::INFINITY
            }
            RadialProfile::YukawaLike { power, .. } => 2.0 * power as f64,
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            RadialProfile::Zero => true,
            RadialProfile::GaussianWell { depth, .. }
            | RadialProfile::SquareWell { depth, .. }
            | RadialProfile::YukawaLike { depth, .. } => depth == 0.0,
        }
    }
}

type Scalar3D = Arc<dyn Fn(&V3) -> f64 + Send + Sync>;
type Vector3D = Arc<dyn Fn(&V3) -> V3 + Send + Sync>;

/// Scalar potential evaluator on R^3.
#[derive(Clone)]
pub enum ScalarPotential {
    Radial(RadialProfile),
    /// Arbitrary smooth evaluator; no complex continuation available.
    Custom(Scalar3D),
}

impl ScalarPotential {
    pub fn eval(&self, x: &V3) -> f64 {
        match self {
            ScalarPotential::Radial(p) => p.eval(x.norm()),
            ScalarPotential::Custom(f) => f(x),
        }
    }

    pub fn zero() -> Self {
        ScalarPotential::Radial(RadialProfile::Zero)
    }

    pub fn radial(&self) -> Option<&RadialProfile> {
        match self {
            ScalarPotential::Radial(p) => Some(p),
            ScalarPotential::Custom(_) => None,
        }
    }
}

impl std::fmt::Debug for ScalarPotential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScalarPotential::Radial(p) => write!(f, "Radial({p:?})"),
            ScalarPotential::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Vector potential evaluator on R^3.
#[derive(Clone)]
pub enum VectorPotential {
    Zero,
    Custom(Vector3D),
}

impl VectorPotential {
    pub fn eval(&self, x: &V3) -> V3 {
        match self {
            VectorPotential::Zero => V3::zeros(),
            VectorPotential::Custom(f) => f(x),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, VectorPotential::Zero)
    }
}

impl std::fmt::Debug for VectorPotential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VectorPotential::Zero => write!(f, "Zero"),
            VectorPotential::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Full electro-magnetic field data with decay and analyticity
/// metadata.
#[derive(Clone, Debug)]
pub struct FieldConfig {
    pub v_plus: ScalarPotential,
    pub v_minus: ScalarPotential,
    pub a_field: VectorPotential,
    /// Claimed decay exponent delta of (A_V).
    pub delta: f64,
    /// Radius inside which no analyticity of the continuation is
    /// required (the distortion vanishes there).
    pub r0: f64,
}

impl FieldConfig {
    pub fn free() -> Self {
        FieldConfig {
            v_plus: ScalarPotential::zero(),
            v_minus: ScalarPotential::zero(),
            a_field: VectorPotential::Zero,
            delta: f64::INFINITY,
            r0: 1.0,
        }
    }

    /// Spherical electric potential v_plus = v_minus = v(r), A = 0.
    pub fn spherical(profile: RadialProfile, r0: f64) -> Self {
        let delta = profile.decay_exponent();
        FieldConfig {
            v_plus: ScalarPotential::Radial(profile.clone()),
            v_minus: ScalarPotential::Radial(profile),
            a_field: VectorPotential::Zero,
            delta,
            r0,
        }
    }

    pub fn is_free(&self) -> bool {
        self.a_field.is_zero()
            && self.v_plus.radial().is_some_and(|p| p.is_zero())
            && self.v_minus.radial().is_some_and(|p| p.is_zero())
    }

    /// Checks the mass-gap condition |e(v+ - v-)| < 2mc^2 on a sample
    /// set of radii along several directions.
    pub fn check_mass_gap(&self, m: f64, c: f64, e: f64) -> Result<(), FieldError> {
        let bound = 2.0 * m * c * c;
        for &r in SAMPLE_RADII {
            for dir in sample_directions() {
                let x = dir * r;
                let value = (e * (self.v_plus.eval(&x) - self.v_minus.eval(&x))).abs();
                if value >= bound {
                    return Err(FieldError::MassGapViolated {
                        radius: r,
                        value,
                        bound,
                    });
                }
            }
        }
        Ok(())
    }

    /// Log-log estimate of the actual decay exponent from samples of
    /// max(|v+|, |v-|, |A|) on a log-spaced radius grid. Returns
    /// +infinity when the tail underflows (super-polynomial decay).
    pub fn estimated_decay_exponent(&self) -> f64 {
        let radii: Vec<f64> = (0..8).map(|k| 8.0 * 1.5_f64.powi(k)).collect();
        let mut lx = Vec::new();
        let mut ly = Vec::new();
        for &r in &radii {
            let x = V3::new(r, 0.0, 0.0);
            let mag = self
                .v_plus
                .eval(&x)
                .abs()
                .max(self.v_minus.eval(&x).abs())
                .max(self.a_field.eval(&x).norm());
            if mag > 1e-280 {
                lx.push(r.ln());
                ly.push(mag.ln());
            }
        }
        if lx.len() < 3 {
            return f64::INFINITY;
        }
        let fit = crate::fit::fit_line(&lx, &ly);
        // Super-polynomial tails produce blow-up slopes; report them
        // as infinite decay.
        if -fit.slope > 25.0 {
            return f64::INFINITY;
        }
        -fit.slope
    }
}

const SAMPLE_RADII: &[f64] = &[0.0, 0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0];

fn sample_directions() -> Vec<V3> {
    vec![
        V3::new(1.0, 0.0, 0.0),
        V3::new(0.0, 1.0, 0.0),
        V3::new(0.0, 0.0, 1.0),
        V3::new(0.577350269189626, 0.577350269189626, 0.577350269189626),
        V3::new(-0.577350269189626, 0.577350269189626, -0.577350269189626),
        V3::new(0.267261241912424, -0.534522483824849, 0.801783725737273),
    ]
}
