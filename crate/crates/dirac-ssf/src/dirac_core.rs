//! Exact 4x4 Dirac matrix algebra and pointwise symbol computations:
//! the electro-magnetic symbol D_nu(x, xi), its eigenvalue branches
//! H_nu^+- with the spectral projections, and the symmetry
//! conjugations used by the resonance partner checks.

use crate::fields::{FieldConfig, V3};
use crate::linalg::{self, CMat};
use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type M4 = Matrix4<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The alpha_1..alpha_3 and beta matrices of a Dirac representation.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracMatrixSet {
    pub alpha: [M4; 3],
    pub beta: M4,
}

/// Physical constants: semiclassical parameter h, mass m, speed of
/// light c, charge e < 0.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct PhysicalConfig {
    pub h: f64,
    pub m: f64,
    pub c: f64,
    pub e: f64,
}

impl PhysicalConfig {
    /// Natural units m = c = 1 with unit negative charge.
    pub fn natural(h: f64) -> Self {
        PhysicalConfig {
            h,
            m: 1.0,
            c: 1.0,
            e: -1.0,
        }
    }

    pub fn validate(&self) -> Result<(), DiracCoreError> {
        if !(self.h > 0.0 && self.h <= 1.0) {
            return Err(DiracCoreError::BadConfig("h must lie in (0, 1]"));
        }
        if self.m <= 0.0 || self.c <= 0.0 {
            return Err(DiracCoreError::BadConfig("m and c must be positive"));
        }
        if self.e >= 0.0 {
            return Err(DiracCoreError::BadConfig("charge e must be negative"));
        }
        Ok(())
    }

    /// Rest energy mc^2, the gap half-width of the free operator.
    pub fn mc2(&self) -> f64 {
        self.m * self.c * self.c
    }
}

/// A phase-space point (x, xi).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymbolPoint {
    pub x: V3,
    pub xi: V3,
}

#[derive(Debug, thiserror::Error)]
pub enum DiracCoreError {
    #[error("invalid physical configuration: {0}")]
    BadConfig(&'static str),
    #[error("mass-gap condition violated at x: |e(v+ - v-)| = {value} >= {bound}")]
    MassGap { value: f64, bound: f64 },
    #[error("projection denominator H - nu e (v+ + v-)/2 = {0} too close to zero")]
    SingularProjection(f64),
}

/// The standard (Dirac-Pauli) representation: Pauli matrices in the
/// off-diagonal blocks of alpha, diag(I2, -I2) for beta.
pub fn standard_dirac_matrices() -> DiracMatrixSet {
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    // Pauli sigma_1, sigma_2, sigma_3 placed in the off-diagonal blocks.
    let alpha1 = M4::from_row_slice(&[
        zero, zero, zero, one, //
        zero, zero, one, zero, //
        zero, one, zero, zero, //
        one, zero, zero, zero,
    ]);
    let alpha2 = M4::from_row_slice(&[
        zero,
        zero,
        zero,
        c(0.0, -1.0),
        zero,
        zero,
        c(0.0, 1.0),
        zero,
        zero,
        c(0.0, -1.0),
        zero,
        zero,
        c(0.0, 1.0),
        zero,
        zero,
        zero,
    ]);
    let alpha3 = M4::from_row_slice(&[
        zero, zero, one, zero, //
        zero, zero, zero, -one, //
        one, zero, zero, zero, //
        zero, -one, zero, zero,
    ]);
    let beta = M4::from_diagonal(&nalgebra::Vector4::new(one, one, -one, -one));
    DiracMatrixSet {
        alpha: [alpha1, alpha2, alpha3],
        beta,
    }
}

/// Operator (spectral) norm of a 4x4 complex matrix.
pub fn op_norm(m: &M4) -> f64 {
    let gram = m.adjoint() * m;
    let a = CMat::from_fn(4, 4, |i, j| gram[(i, j)]);
    let eigs = linalg::eig_hermitian(&a).expect("4x4 Hermitian eigensolve");
    eigs.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Largest operator-norm violation of the anti-commutation relations
/// {alpha_i, alpha_j} = 2 delta_ij I, {alpha_i, beta} = 0, beta^2 = I.
pub fn anticommutator_defect(set: &DiracMatrixSet) -> f64 {
    let id = M4::identity();
    let mut worst = 0.0_f64;
    for i in 0..3 {
        for j in 0..3 {
            let anti = set.alpha[i] * set.alpha[j] + set.alpha[j] * set.alpha[i];
            let target = if i == j { id * c(2.0, 0.0) } else { M4::zeros() };
            worst = worst.max(op_norm(&(anti - target)));
        }
        let anti_beta = set.alpha[i] * set.beta + set.beta * set.alpha[i];
        worst = worst.max(op_norm(&anti_beta));
    }
    worst.max(op_norm(&(set.beta * set.beta - id)))
}

/// Diagonal electric matrix e * diag(v+ I2, v- I2) at x.
fn electric_matrix(fields: &FieldConfig, x: &V3, e: f64) -> M4 {
    let vp = fields.v_plus.eval(x);
    let vm = fields.v_minus.eval(x);
    let mut m = M4::zeros();
    m[(0, 0)] = c(e * vp, 0.0);
    m[(1, 1)] = c(e * vp, 0.0);
    m[(2, 2)] = c(e * vm, 0.0);
    m[(3, 3)] = c(e * vm, 0.0);
    m
}

/// The symbol D_nu(x, xi) = alpha.(c xi - nu e A) + beta m c^2
/// + nu e diag(v+ I2, v- I2).
pub fn symbol(nu: u8, p: &SymbolPoint, fields: &FieldConfig, phys: &PhysicalConfig) -> M4 {
    assert!(nu <= 1, "nu is 0 (free) or 1 (interacting)");
    let set = standard_dirac_matrices();
    let nu_f = nu as f64;
    let a = fields.a_field.eval(&p.x);
    let momentum = phys.c * p.xi - nu_f * phys.e * a;
    let mut d = set.beta * c(phys.mc2(), 0.0);
    for k in 0..3 {
        d += set.alpha[k] * c(momentum[k], 0.0);
    }
    if nu == 1 {
        d += electric_matrix(fields, &p.x, phys.e);
    }
    d
}

fn branch_data(
    nu: u8,
    p: &SymbolPoint,
    fields: &FieldConfig,
    phys: &PhysicalConfig,
) -> Result<(f64, f64, f64), DiracCoreError> {
    let nu_f = nu as f64;
    let a = fields.a_field.eval(&p.x);
    let momentum = phys.c * p.xi - nu_f * phys.e * a;
    let vp = fields.v_plus.eval(&p.x);
    let vm = fields.v_minus.eval(&p.x);
    let gap_term = phys.mc2() + nu_f * 0.5 * phys.e * (vp - vm);
    if nu == 1 {
        let value = (phys.e * (vp - vm)).abs();
        let bound = 2.0 * phys.mc2();
        if value >= bound {
            return Err(DiracCoreError::MassGap { value, bound });
        }
    }
    let root = (momentum.norm_squared() + gap_term * gap_term).sqrt();
    let shift = nu_f * 0.5 * phys.e * (vp + vm);
    Ok((root, shift, gap_term))
}

/// The two eigenvalue branches H_nu^+-(x, xi), each of multiplicity
/// two.
pub fn symbol_eigenvalues(
    nu: u8,
    p: &SymbolPoint,
    fields: &FieldConfig,
    phys: &PhysicalConfig,
) -> Result<(f64, f64), DiracCoreError> {
    let (root, shift, _) = branch_data(nu, p, fields, phys)?;
    Ok((root + shift, -root + shift))
}

/// Spectral projections onto the two eigenvalue branches:
/// Pi^+- = (1 + (D - nu e v + nu (e/2)(v+ - v-) beta) / (H^+- - nu (e/2)(v+ + v-))) / 2.
pub fn symbol_projections(
    nu: u8,
    p: &SymbolPoint,
    fields: &FieldConfig,
    phys: &PhysicalConfig,
) -> Result<(M4, M4), DiracCoreError> {
    let (root, shift, gap_term) = branch_data(nu, p, fields, phys)?;
    let d = symbol(nu, p, fields, phys);
    let set = standard_dirac_matrices();
    let nu_f = nu as f64;
    let vp = fields.v_plus.eval(&p.x);
    let vm = fields.v_minus.eval(&p.x);
    let _ = gap_term;
    let numerator =
        d - electric_matrix(fields, &p.x, nu_f * phys.e) + set.beta * c(nu_f * 0.5 * phys.e * (vp - vm), 0.0);

    let mut projections = [M4::zeros(), M4::zeros()];
    for (slot, sign) in [(0_usize, 1.0_f64), (1, -1.0)] {
        let denom = sign * root + shift - shift;
        // denom = +-root; root >= gap_term > 0 under the mass gap.
        if denom.abs() < 1e-300 {
            return Err(DiracCoreError::SingularProjection(denom));
        }
        projections[slot] = (M4::identity() + numerator / c(denom, 0.0)) * c(0.5, 0.0);
    }
    Ok((projections[0], projections[1]))
}

/// Charge conjugation unitary U_c = i beta alpha_2.
pub fn charge_conjugation_matrix(set: &DiracMatrixSet) -> M4 {
    set.beta * set.alpha[1] * c(0.0, 1.0)
}

/// The conjugated representation alpha_1' = -alpha_1, alpha_2' =
/// alpha_2, alpha_3' = -alpha_3, beta' = beta, which again satisfies
/// the anti-commutation relations.
pub fn conjugated_matrix_set(set: &DiracMatrixSet) -> DiracMatrixSet {
    DiracMatrixSet {
        alpha: [-set.alpha[0], set.alpha[1], -set.alpha[2]],
        beta: set.beta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{RadialProfile, ScalarPotential, VectorPotential};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gaussian_fields() -> FieldConfig {
        FieldConfig {
            v_plus: ScalarPotential::Radial(RadialProfile::GaussianWell {
                depth: 1.5,
                width: 1.2,
            }),
            v_minus: ScalarPotential::Radial(RadialProfile::GaussianWell {
                depth: 0.9,
                width: 1.7,
            }),
            a_field: VectorPotential::Custom(std::sync::Arc::new(|x: &V3| {
                let r2 = x.norm_squared();
                V3::new(-x.y, x.x, 0.3 * x.z) * (-r2).exp()
            })),
            delta: f64::INFINITY,
            r0: 1.0,
        }
    }

    fn hermitian_eigs_oracle(m: &M4) -> Vec<f64> {
        let a = CMat::from_fn(4, 4, |i, j| m[(i, j)]);
        linalg::eig_hermitian(&a).unwrap()
    }

    #[test]
    fn standard_set_structure() {
        let set = standard_dirac_matrices();
        // beta = diag(1, 1, -1, -1).
        for i in 0..4 {
            let want = if i < 2 { 1.0 } else { -1.0 };
            assert_eq!(set.beta[(i, i)], c(want, 0.0));
        }
        // alpha1 has sigma_1 in the off-diagonal blocks.
        assert_eq!(set.alpha[0][(0, 3)], c(1.0, 0.0));
        assert_eq!(set.alpha[0][(1, 2)], c(1.0, 0.0));
        assert_eq!(set.alpha[0][(2, 1)], c(1.0, 0.0));
        assert_eq!(set.alpha[0][(3, 0)], c(1.0, 0.0));
        assert!(anticommutator_defect(&set) <= 1e-14);
        // Every matrix Hermitian with eigenvalues {+1, +1, -1, -1}.
        for m in set.alpha.iter().chain(std::iter::once(&set.beta)) {
            assert!(op_norm(&(m.adjoint() - m)) <= 1e-14);
            let eigs = hermitian_eigs_oracle(m);
            for (got, want) in eigs.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
                assert_abs_diff_eq!(got, &want, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn defect_oracle_shifted_alpha1() {
        // alpha1 -> alpha1 + 0.1 I: worst violation is
        // {a1', a1'} - 2I = 0.4 alpha1 + 0.02 I with norm 0.42.
        let mut set = standard_dirac_matrices();
        set.alpha[0] += M4::identity() * c(0.1, 0.0);
        assert_abs_diff_eq!(anticommutator_defect(&set), 0.42, epsilon = 1e-13);
    }

    #[test]
    fn defect_oracle_beta_replaced_by_alpha1() {
        // {alpha1, beta'} = {alpha1, alpha1} = 2I has norm 2.
        let mut set = standard_dirac_matrices();
        set.beta = set.alpha[0];
        assert_abs_diff_eq!(anticommutator_defect(&set), 2.0, epsilon = 1e-13);
    }

    #[test]
    fn free_symbol_at_rest() {
        let phys = PhysicalConfig::natural(1.0);
        let fields = FieldConfig::free();
        let p = SymbolPoint {
            x: V3::new(0.4, -0.7, 0.2),
            xi: V3::zeros(),
        };
        let d = symbol(0, &p, &fields, &phys);
        let set = standard_dirac_matrices();
        assert!(op_norm(&(d - set.beta)) <= 1e-14);
        let (hp, hm) = symbol_eigenvalues(0, &p, &fields, &phys).unwrap();
        assert_abs_diff_eq!(hp, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(hm, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn free_eigenvalues_momentum_three() {
        let phys = PhysicalConfig::natural(1.0);
        let fields = FieldConfig::free();
        let p = SymbolPoint {
            x: V3::zeros(),
            xi: V3::new(3.0, 0.0, 0.0),
        };
        let (hp, hm) = symbol_eigenvalues(0, &p, &fields, &phys).unwrap();
        assert_abs_diff_eq!(hp, 10.0_f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(hm, -(10.0_f64.sqrt()), epsilon = 1e-14);
    }

    #[test]
    fn equal_scalar_potentials_shift_the_free_symbol() {
        let phys = PhysicalConfig::natural(1.0);
        let v0 = 0.37;
        let fields = FieldConfig::spherical(
            RadialProfile::YukawaLike {
                depth: v0,
                scale: 1e6, // effectively constant near the origin
                power: 2,
            },
            1.0,
        );
        let p = SymbolPoint {
            x: V3::new(0.001, 0.0, 0.0),
            xi: V3::new(0.5, -0.2, 0.8),
        };
        let d1 = symbol(1, &p, &fields, &phys);
        let d0 = symbol(0, &p, &fields, &phys);
        let shift = d1 - d0;
        let expect = M4::identity() * c(phys.e * v0, 0.0);
        assert!(op_norm(&(shift - expect)) <= 1e-9);
    }

    #[test]
    fn eigenvalues_match_dense_oracle_on_gaussian_fields() {
        let phys = PhysicalConfig::natural(1.0);
        let fields = gaussian_fields();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let p = SymbolPoint {
                x: V3::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                xi: V3::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
            };
            let d = symbol(1, &p, &fields, &phys);
            assert!(op_norm(&(d.adjoint() - d)) <= 1e-13, "symbol must be Hermitian");
            let eigs = hermitian_eigs_oracle(&d);
            let (hp, hm) = symbol_eigenvalues(1, &p, &fields, &phys).unwrap();
            // Multiplicity two per branch.
            assert_abs_diff_eq!(eigs[0], hm, epsilon = 1e-10);
            assert_abs_diff_eq!(eigs[1], hm, epsilon = 1e-10);
            assert_abs_diff_eq!(eigs[2], hp, epsilon = 1e-10);
            assert_abs_diff_eq!(eigs[3], hp, epsilon = 1e-10);
        }
    }

    #[test]
    fn projection_laws_hold_at_random_points() {
        let phys = PhysicalConfig::natural(1.0);
        let fields = gaussian_fields();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let p = SymbolPoint {
                x: V3::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
                xi: V3::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0)),
            };
            let (pp, pm) = symbol_projections(1, &p, &fields, &phys).unwrap();
            let (hp, hm) = symbol_eigenvalues(1, &p, &fields, &phys).unwrap();
            let d = symbol(1, &p, &fields, &phys);
            assert!(op_norm(&(pp * pp - pp)) <= 1e-12);
            assert!(op_norm(&(pm * pm - pm)) <= 1e-12);
            assert!(op_norm(&(pp * pm)) <= 1e-12);
            assert!(op_norm(&(pp + pm - M4::identity())) <= 1e-12);
            assert!(op_norm(&(d * pp - pp * c(hp, 0.0))) <= 1e-9);
            assert!(op_norm(&(d * pm - pm * c(hm, 0.0))) <= 1e-9);
            // Rank two: trace of a projection equals its rank.
            assert_abs_diff_eq!((pp.trace()).re, 2.0, epsilon = 1e-10);
            assert_abs_diff_eq!((pm.trace()).re, 2.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn free_projection_at_rest_is_beta_eigenprojection() {
        let phys = PhysicalConfig::natural(1.0);
        let fields = FieldConfig::free();
        let p = SymbolPoint {
            x: V3::zeros(),
            xi: V3::zeros(),
        };
        let (pp, _) = symbol_projections(0, &p, &fields, &phys).unwrap();
        let mut want = M4::zeros();
        want[(0, 0)] = c(1.0, 0.0);
        want[(1, 1)] = c(1.0, 0.0);
        assert!(op_norm(&(pp - want)) <= 1e-14);
    }

    #[test]
    fn mass_gap_monotonicity_for_equal_potentials() {
        // v+ = v- keeps H+ - H- >= 2 m c^2 everywhere.
        let phys = PhysicalConfig::natural(1.0);
        let fields = FieldConfig::spherical(
            RadialProfile::GaussianWell {
                depth: -4.0,
                width: 1.0,
            },
            1.0,
        );
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let p = SymbolPoint {
                x: V3::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
                xi: V3::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0)),
            };
            let (hp, hm) = symbol_eigenvalues(1, &p, &fields, &phys).unwrap();
            assert!(hp - hm >= 2.0 * phys.mc2() - 1e-12);
        }
    }

    #[test]
    fn mass_gap_violation_rejected() {
        let phys = PhysicalConfig::natural(1.0);
        let fields = FieldConfig {
            v_plus: ScalarPotential::Radial(RadialProfile::GaussianWell {
                depth: 3.0,
                width: 2.0,
            }),
            v_minus: ScalarPotential::zero(),
            a_field: VectorPotential::Zero,
            delta: f64::INFINITY,
            r0: 1.0,
        };
        let p = SymbolPoint {
            x: V3::zeros(),
            xi: V3::zeros(),
        };
        assert!(symbol_eigenvalues(1, &p, &fields, &phys).is_err());
    }

    #[test]
    fn charge_conjugation_is_unitary() {
        let set = standard_dirac_matrices();
        let uc = charge_conjugation_matrix(&set);
        assert!(op_norm(&(uc.adjoint() * uc - M4::identity())) <= 1e-14);
        // Direct product oracle: i beta alpha2 is the real matrix with
        // +1 at (0,3) and (3,0), -1 at (1,2) and (2,1).
        let want = M4::from_row_slice(&[
            c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), //
            c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), //
            c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), //
            c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0),
        ]);
        assert!(op_norm(&(uc - want)) <= 1e-14);
    }

    #[test]
    fn conjugated_set_is_valid_and_involutive() {
        let set = standard_dirac_matrices();
        let conj = conjugated_matrix_set(&set);
        assert!(anticommutator_defect(&conj) <= 1e-14);
        assert_eq!(conjugated_matrix_set(&conj), set);
        assert_eq!(conj.alpha[0], -set.alpha[0]);
        assert_eq!(conj.alpha[1], set.alpha[1]);
        assert_eq!(conj.alpha[2], -set.alpha[2]);
        assert_eq!(conj.beta, set.beta);
    }
}
