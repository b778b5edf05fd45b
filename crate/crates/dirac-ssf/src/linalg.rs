//! Dense eigensolvers and factorizations over the system LAPACK.
//!
//! Matrices are stored column-major to match the Fortran calling
//! convention, so LAPACK routines operate on the buffers in place
//! without transposition.

use num_complex::Complex64;
use std::os::raw::c_char;

#[link(name = "lapack")]
extern "C" {
    fn zgeev_(
        jobvl: *const c_char,
        jobvr: *const c_char,
        n: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        w: *mut Complex64,
        vl: *mut Complex64,
        ldvl: *const i32,
        vr: *mut Complex64,
        ldvr: *const i32,
        work: *mut Complex64,
        lwork: *const i32,
        rwork: *mut f64,
        info: *mut i32,
    );
    fn dsyev_(
        jobz: *const c_char,
        uplo: *const c_char,
        n: *const i32,
        a: *mut f64,
        lda: *const i32,
        w: *mut f64,
        work: *mut f64,
        lwork: *const i32,
        info: *mut i32,
    );
    fn zheev_(
        jobz: *const c_char,
        uplo: *const c_char,
        n: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        w: *mut f64,
        work: *mut Complex64,
        lwork: *const i32,
        rwork: *mut f64,
        info: *mut i32,
    );
    fn zgetrf_(
        m: *const i32,
        n: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        ipiv: *mut i32,
        info: *mut i32,
    );
    fn zgetrs_(
        trans: *const c_char,
        n: *const i32,
        nrhs: *const i32,
        a: *const Complex64,
        lda: *const i32,
        ipiv: *const i32,
        b: *mut Complex64,
        ldb: *const i32,
        info: *mut i32,
    );
}

/// Column-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    pub n_rows: usize,
    pub n_cols: usize,
    pub data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        CMat {
            n_rows,
            n_cols,
            data: vec![Complex64::new(0.0, 0.0); n_rows * n_cols],
        }
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = CMat::zeros(n_rows, n_cols);
        for j in 0..n_cols {
            for i in 0..n_rows {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        CMat::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Largest entry magnitude of self - self^T (plain transpose).
    pub fn symmetry_defect(&self) -> f64 {
        assert_eq!(self.n_rows, self.n_cols);
        let mut d = 0.0_f64;
        for j in 0..self.n_cols {
            for i in 0..j {
                d = d.max((self[(i, j)] - self[(j, i)]).norm());
            }
        }
        d
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.n_cols, x.len());
        let mut y = vec![Complex64::new(0.0, 0.0); self.n_rows];
        for j in 0..self.n_cols {
            let xj = x[j];
            if xj == Complex64::new(0.0, 0.0) {
                continue;
            }
            let col = &self.data[j * self.n_rows..(j + 1) * self.n_rows];
            for i in 0..self.n_rows {
                y[i] += col[i] * xj;
            }
        }
        y
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[j * self.n_rows + i]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[j * self.n_rows + i]
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LinalgError {
    #[error("LAPACK {routine} failed with info = {info}")]
    Lapack { routine: &'static str, info: i32 },
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),
}

/// Full complex spectrum of a general square matrix, sorted by (Re, Im).
pub fn eig_complex(a: &CMat) -> Result<Vec<Complex64>, LinalgError> {
    eig_complex_impl(a, false).map(|(w, _)| w)
}

/// Spectrum plus right eigenvectors (columns of the returned matrix,
/// in the same order as the unsorted LAPACK output is re-sorted).
pub fn eig_complex_vectors(a: &CMat) -> Result<(Vec<Complex64>, CMat), LinalgError> {
    let (w, v) = eig_complex_impl(a, true)?;
    Ok((w, v.expect("vectors requested")))
}

fn eig_complex_impl(
    a: &CMat,
    want_vectors: bool,
) -> Result<(Vec<Complex64>, Option<CMat>), LinalgError> {
    if a.n_rows != a.n_cols {
        return Err(LinalgError::NotSquare(a.n_rows, a.n_cols));
    }
    let n = a.n_rows as i32;
    if n == 0 {
        return Ok((vec![], want_vectors.then(|| CMat::zeros(0, 0))));
    }
    let mut work_a = a.data.clone();
    let mut w = vec![Complex64::new(0.0, 0.0); a.n_rows];
    let mut vr = if want_vectors {
        vec![Complex64::new(0.0, 0.0); a.n_rows * a.n_rows]
    } else {
        vec![Complex64::new(0.0, 0.0); 1]
    };
    let mut vl = [Complex64::new(0.0, 0.0); 1];
    let jobvl = b'N' as c_char;
    let jobvr = if want_vectors { b'V' } else { b'N' } as c_char;
    let ldvr = if want_vectors { n } else { 1 };
    let mut rwork = vec![0.0_f64; 2 * a.n_rows];
    let mut info = 0_i32;

    // Workspace query, then the real call.
    let mut opt = [Complex64::new(0.0, 0.0); 1];
    let query = -1_i32;
    unsafe {
        zgeev_(
            &jobvl,
            &jobvr,
            &n,
            work_a.as_mut_ptr(),
            &n,
            w.as_mut_ptr(),
            vl.as_mut_ptr(),
            &1,
            vr.as_mut_ptr(),
            &ldvr,
            opt.as_mut_ptr(),
            &query,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(LinalgError::Lapack {
            routine: "zgeev",
            info,
        });
    }
    let lwork = opt[0].re as i32;
    let mut work = vec![Complex64::new(0.0, 0.0); lwork as usize];
    unsafe {
        zgeev_(
            &jobvl,
            &jobvr,
            &n,
            work_a.as_mut_ptr(),
            &n,
            w.as_mut_ptr(),
            vl.as_mut_ptr(),
            &1,
            vr.as_mut_ptr(),
            &ldvr,
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(LinalgError::Lapack {
            routine: "zgeev",
            info,
        });
    }

    let mut order: Vec<usize> = (0..a.n_rows).collect();
    order.sort_by(|&i, &j| {
        (w[i].re, w[i].im)
            .partial_cmp(&(w[j].re, w[j].im))
            .expect("finite eigenvalues")
    });
    let sorted_w: Vec<Complex64> = order.iter().map(|&i| w[i]).collect();
    let vectors = want_vectors.then(|| {
        let mut v = CMat::zeros(a.n_rows, a.n_rows);
        for (new_j, &old_j) in order.iter().enumerate() {
            for i in 0..a.n_rows {
                v[(i, new_j)] = vr[old_j * a.n_rows + i];
            }
        }
        v
    });
    Ok((sorted_w, vectors))
}

/// Eigenvalues of a real symmetric matrix given column-major, ascending.
pub fn eig_real_symmetric(a: &[f64], n: usize) -> Result<Vec<f64>, LinalgError> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok(vec![]);
    }
    let mut work_a = a.to_vec();
    let mut w = vec![0.0_f64; n];
    let jobz = b'N' as c_char;
    let uplo = b'L' as c_char;
    let nn = n as i32;
    let mut info = 0_i32;
    let mut opt = [0.0_f64; 1];
    let query = -1_i32;
    unsafe {
        dsyev_(
            &jobz,
            &uplo,
            &nn,
            work_a.as_mut_ptr(),
            &nn,
            w.as_mut_ptr(),
            opt.as_mut_ptr(),
            &query,
            &mut info,
        );
    }
    if info != 0 {
        return Err(LinalgError::Lapack {
            routine: "dsyev",
            info,
        });
    }
    let lwork = opt[0] as i32;
    let mut work = vec![0.0_f64; lwork as usize];
    unsafe {
        dsyev_(
            &jobz,
            &uplo,
            &nn,
            work_a.as_mut_ptr(),
            &nn,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(LinalgError::Lapack {
            routine: "dsyev",
            info,
        });
    }
    Ok(w)
}

/// Eigenvalues of a complex Hermitian matrix, ascending.
pub fn eig_hermitian(a: &CMat) -> Result<Vec<f64>, LinalgError> {
    if a.n_rows != a.n_cols {
        return Err(LinalgError::NotSquare(a.n_rows, a.n_cols));
    }
    let n = a.n_rows;
    if n == 0 {
        return Ok(vec![]);
    }
    let mut work_a = a.data.clone();
    let mut w = vec![0.0_f64; n];
    let jobz = b'N' as c_char;
    let uplo = b'L' as c_char;
    let nn = n as i32;
    let mut rwork = vec![0.0_f64; 3 * n];
    let mut info = 0_i32;
    let mut opt = [Complex64::new(0.0, 0.0); 1];
    let query = -1_i32;
    unsafe {
        zheev_(
            &jobz,
            &uplo,
            &nn,
            work_a.as_mut_ptr(),
            &nn,
            w.as_mut_ptr(),
            opt.as_mut_ptr(),
            &query,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(LinalgError::Lapack {
            routine: "zheev",
            info,
        });
    }
    let lwork = opt[0].re as i32;
    let mut work = vec![Complex64::new(0.0, 0.0); lwork as usize];
    unsafe {
        zheev_(
            &jobz,
            &uplo,
            &nn,
            work_a.as_mut_ptr(),
            &nn,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(LinalgError::Lapack {
            routine: "zheev",
            info,
        });
    }
    Ok(w)
}

/// LU factorization of a complex square matrix, reusable for solves.
pub struct LuFactors {
    n: usize,
    lu: Vec<Complex64>,
    ipiv: Vec<i32>,
}

pub fn lu_factor(a: &CMat) -> Result<LuFactors, LinalgError> {
    if a.n_rows != a.n_cols {
        return Err(LinalgError::NotSquare(a.n_rows, a.n_cols));
    }
    let n = a.n_rows;
    let mut lu = a.data.clone();
    let mut ipiv = vec![0_i32; n];
    let nn = n as i32;
    let mut info = 0_i32;
    unsafe {
        zgetrf_(&nn, &nn, lu.as_mut_ptr(), &nn, ipiv.as_mut_ptr(), &mut info);
    }
    if info != 0 {
        return Err(LinalgError::Lapack {
            routine: "zgetrf",
            info,
        });
    }
    Ok(LuFactors { n, lu, ipiv })
}

impl LuFactors {
    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        assert_eq!(b.len(), self.n);
        let mut x = b.to_vec();
        let nn = self.n as i32;
        let nrhs = 1_i32;
        let trans = b'N' as c_char;
        let mut info = 0_i32;
        unsafe {
            zgetrs_(
                &trans,
                &nn,
                &nrhs,
                self.lu.as_ptr(),
                &nn,
                self.ipiv.as_ptr(),
                x.as_mut_ptr(),
                &nn,
                &mut info,
            );
        }
        if info != 0 {
            return Err(LinalgError::Lapack {
                routine: "zgetrs",
                info,
            });
        }
        Ok(x)
    }
}
