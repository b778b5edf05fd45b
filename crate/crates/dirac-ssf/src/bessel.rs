//! Spherical Bessel functions for real and complex arguments.
//!
//! `j_l` uses Miller's downward recurrence (upward is unstable for
//! l > |z|); `y_l` uses the stable upward recurrence.

use num_complex::Complex64;

/// Spherical Bessel function of the first kind, complex argument.
pub fn sph_j(l: u32, z: Complex64) -> Complex64 {
    if z.norm() < 1e-8 {
        // Leading series term; adequate at this magnitude.
        let mut dfact = 1.0;
        for k in 0..l {
            dfact *= (2 * k + 3) as f64;
        }
        let zl = z.powu(l);
        return zl / dfact * (Complex64::new(1.0, 0.0) - z * z / (2.0 * (2.0 * l as f64 + 3.0)));
    }
    if l == 0 {
        return z.sin() / z;
    }
    let start = l + 20 + (1.5 * z.norm()) as u32;
    let mut fp = Complex64::new(0.0, 0.0);
    let mut fc = Complex64::new(1e-30, 0.0);
    let mut target = Complex64::new(0.0, 0.0);
    let mut f0 = Complex64::new(0.0, 0.0);
    for n in (1..=start).rev() {
        let fm = Complex64::new((2 * n + 1) as f64, 0.0) / z * fc - fp;
        fp = fc;
        fc = fm;
        if n - 1 == l {
            target = fc;
        }
        // Rescale to dodge overflow on long recurrences.
        let mag = fc.norm();
        if mag > 1e200 {
            fp /= mag;
            fc /= mag;
            target /= mag;
        }
        if n == 1 {
            f0 = fc;
        }
    }
    let j0 = z.sin() / z;
    target * j0 / f0
}

/// Spherical Bessel function of the second kind, complex argument.
pub fn sph_y(l: u32, z: Complex64) -> Complex64 {
    let y0 = -z.cos() / z;
    if l == 0 {
        return y0;
    }
    let y1 = -z.cos() / (z * z) - z.sin() / z;
    if l == 1 {
        return y1;
    }
    let mut ym = y0;
    let mut yc = y1;
    for n in 1..l {
        let yp = Complex64::new((2 * n + 1) as f64, 0.0) / z * yc - ym;
        ym = yc;
        yc = yp;
    }
    yc
}

pub fn sph_j_real(l: u32, x: f64) -> f64 {
    sph_j(l, Complex64::new(x, 0.0)).re
}

pub fn sph_y_real(l: u32, x: f64) -> f64 {
    sph_y(l, Complex64::new(x, 0.0)).re
}
