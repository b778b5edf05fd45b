// Shared oracles for integration tests. The square-well radial
// problem is solved in closed form by matching interior regular
// waves to exterior outgoing waves at the well edge; zeros of the
// matching determinant are resonances, independent of any grid or
// scaling machinery in the library under test.

#[allow(dead_code)]

use dirac_ssf::bessel::{sph_j, sph_y};
use dirac_ssf::dirac_core::PhysicalConfig;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Orbital indices of the two components for channel kappa.
fn component_orbitals(kappa: i32) -> (u32, u32, f64) {
    if kappa > 0 {
        (kappa as u32, (kappa - 1) as u32, 1.0)
    } else {
        ((-kappa - 1) as u32, (-kappa) as u32, -1.0)
    }
}

/// (P, Q)/r at radius r for a constant-potential region with shifted
/// energy w = lambda - e v. Outgoing waves use the first Hankel
/// combination, regular waves the spherical Bessel j.
fn radial_wave(
    kappa: i32,
    w: Complex64,
    r: f64,
    phys: &PhysicalConfig,
    outgoing: bool,
) -> (Complex64, Complex64) {
    let mc2 = phys.mc2();
    // Branch: both factors principal, continuous from the physical
    // upper rim across the cut into the lower half plane.
    let k = ((w - mc2).sqrt() * (w + mc2).sqrt()) / phys.c;
    let (lp, lq, sgn) = component_orbitals(kappa);
    let x = k * r;
    let wave = |l: u32| -> Complex64 {
        if outgoing {
            sph_j(l, x) + Complex64::i() * sph_y(l, x)
        } else {
            sph_j(l, x)
        }
    };
    let p = wave(lp);
    let q = sgn * (phys.c * k / (w + mc2)) * wave(lq);
    (p, q)
}

/// Matching determinant whose zeros in the lower half plane are the
/// square-well resonances of channel kappa.
pub fn jost_determinant(
    lambda: Complex64,
    kappa: i32,
    depth: f64,
    radius: f64,
    phys: &PhysicalConfig,
) -> Complex64 {
    let ev = phys.e * depth;
    let (p_in, q_in) = radial_wave(kappa, lambda - ev, radius, phys, false);
    let (p_out, q_out) = radial_wave(kappa, lambda, radius, phys, true);
    p_in * q_out - q_in * p_out
}

/// Resonances of the square well in a rectangular window of the
/// lower half plane, found by scanning for |F| minima and polishing
/// with a complex secant iteration. Sorted by (Re, Im).
pub fn jost_resonances(
    kappa: i32,
    depth: f64,
    radius: f64,
    phys: &PhysicalConfig,
    re_range: (f64, f64),
    im_range: (f64, f64),
) -> Vec<Complex64> {
    let f = |z: Complex64| jost_determinant(z, kappa, depth, radius, phys);
    let (n_re, n_im) = (160usize, 80usize);
    let dre = (re_range.1 - re_range.0) / n_re as f64;
    let dim = (im_range.1 - im_range.0) / n_im as f64;
    let val = |i: usize, j: usize| {
        f(c(
            re_range.0 + dre * i as f64,
            im_range.0 + dim * j as f64,
        ))
        .norm()
    };
    let grid: Vec<Vec<f64>> = (0..=n_re)
        .map(|i| (0..=n_im).map(|j| val(i, j)).collect())
        .collect();
    let mut roots: Vec<Complex64> = Vec::new();
    for i in 1..n_re {
        for j in 1..n_im {
            let v = grid[i][j];
            let is_min = (-1i64..=1)
                .flat_map(|di| (-1i64..=1).map(move |dj| (di, dj)))
                .filter(|&(di, dj)| (di, dj) != (0, 0))
                .all(|(di, dj)| v <= grid[(i as i64 + di) as usize][(j as i64 + dj) as usize]);
            if !is_min {
                continue;
            }
            let seed = c(
                re_range.0 + dre * i as f64,
                im_range.0 + dim * j as f64,
            );
            if let Some(root) = secant(&f, seed, seed + c(dre * 0.1, dim * 0.1)) {
                let inside = root.re >= re_range.0
                    && root.re <= re_range.1
                    && root.im >= im_range.0
                    && root.im <= im_range.1;
                if inside && roots.iter().all(|r| (r - root).norm() > 1e-8) {
                    roots.push(root);
                }
            }
        }
    }
    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    roots
}

fn secant(
    f: &dyn Fn(Complex64) -> Complex64,
    mut z0: Complex64,
    mut z1: Complex64,
) -> Option<Complex64> {
    let mut f0 = f(z0);
    let mut f1 = f(z1);
    for _ in 0..80 {
        let denom = f1 - f0;
        if denom.norm() < 1e-300 {
            return None;
        }
        let z2 = z1 - f1 * (z1 - z0) / denom;
        if !z2.re.is_finite() || !z2.im.is_finite() {
            return None;
        }
        if (z2 - z1).norm() <= 1e-13 * (1.0 + z2.norm()) {
            return Some(z2);
        }
        z0 = z1;
        f0 = f1;
        z1 = z2;
        f1 = f(z2);
    }
    None
}
