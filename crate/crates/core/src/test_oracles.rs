//! Reference computations for tests.
//!
//! Deliberately naive and independent of the library's factorizations. This
//! file is compiled into unit tests and included by path from integration
//! tests, so it must only depend on external crates.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

pub type Mat = DMatrix<Complex64>;
pub type Vect = DVector<Complex64>;

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| random_complex(rng))
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize) -> Vect {
    Vect::from_fn(n, |_, _| random_complex(rng))
}

pub fn naive_matmul(a: &Mat, b: &Mat) -> Mat {
    let mut out = Mat::zeros(a.nrows(), b.ncols());
    for i in 0..a.nrows() {
        for j in 0..b.ncols() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..a.ncols() {
                acc += a[(i, k)] * b[(k, j)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

pub fn naive_matvec(a: &Mat, x: &Vect) -> Vect {
    Vect::from_fn(a.nrows(), |i, _| {
        (0..a.ncols()).map(|k| a[(i, k)] * x[k]).sum()
    })
}

/// Laplace expansion along the first row.
pub fn cofactor_determinant(m: &Mat) -> Complex64 {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    match n {
        0 => Complex64::new(1.0, 0.0),
        1 => m[(0, 0)],
        _ => {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                let minor = Mat::from_fn(n - 1, n - 1, |r, c| {
                    let cc = if c < j { c } else { c + 1 };
                    m[(r + 1, cc)]
                });
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                acc += m[(0, j)] * cofactor_determinant(&minor) * sign;
            }
            acc
        }
    }
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi on its real symmetric
/// embedding `[[Re, −Im], [Im, Re]]`; each eigenvalue appears twice there.
pub fn hermitian_eigenvalues(h: &Mat) -> Vec<f64> {
    let n = h.nrows();
    let m = 2 * n;
    let mut a = vec![vec![0.0f64; m]; m];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = h[(i, j)].re;
            a[i + n][j + n] = h[(i, j)].re;
            a[i][j + n] = -h[(i, j)].im;
            a[i + n][j] = h[(i, j)].im;
        }
    }
    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..m {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for k in 0..m {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    let mut diag: Vec<f64> = (0..m).map(|i| a[i][i]).collect();
    diag.sort_by(f64::total_cmp);
    diag.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

/// Gaussian elimination with partial pivoting.
pub fn gauss_solve(a: &Mat, b: &Vect) -> Vect {
    let n = a.nrows();
    let mut m: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            let mut row: Vec<Complex64> = (0..n).map(|j| a[(i, j)]).collect();
            row.push(b[i]);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| m[x][col].norm().total_cmp(&m[y][col].norm()))
            .unwrap();
        m.swap(col, piv);
        for r in (col + 1)..n {
            let f = m[r][col] / m[col][col];
            for k in col..=n {
                let v = m[col][k];
                m[r][k] -= f * v;
            }
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut acc = m[i][n];
        for k in (i + 1)..n {
            acc -= m[i][k] * x[k];
        }
        x[i] = acc / m[i][i];
    }
    Vect::from_vec(x)
}

pub fn normal_equations_solve(a: &Mat, b: &Vect) -> Vect {
    let ah = a.adjoint();
    gauss_solve(&naive_matmul(&ah, a), &naive_matvec(&ah, b))
}

/// `a^p` by repeated multiplication.
pub fn repeated_power(a: &Mat, p: usize) -> Mat {
    let mut out = Mat::identity(a.nrows(), a.ncols());
    for _ in 0..p {
        out = naive_matmul(&out, a);
    }
    out
}

/// Columns `a^ℓ φ` for `ℓ = 0..len` by repeated multiplication.
pub fn krylov_matrix(a: &Mat, phi: &Vect, len: usize) -> Mat {
    let d = phi.len();
    let mut out = Mat::zeros(d, len);
    for l in 0..len {
        let v = naive_matvec(&repeated_power(a, l), phi);
        out.set_column(l, &v);
    }
    out
}

/// Rank by Gaussian elimination with full pivoting, relative threshold.
pub fn elimination_rank(m: &Mat, rel_tol: f64) -> usize {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<Complex64>> = (0..rows)
        .map(|i| (0..cols).map(|j| m[(i, j)]).collect())
        .collect();
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let mut rank = 0;
    let mut used_cols = vec![false; cols];
    for r in 0..rows {
        let mut best = (0usize, 0usize, 0.0f64);
        for i in r..rows {
            for j in 0..cols {
                if !used_cols[j] && a[i][j].norm() > best.2 {
                    best = (i, j, a[i][j].norm());
                }
            }
        }
        if best.2 <= rel_tol * scale {
            break;
        }
        a.swap(r, best.0);
        let pc = best.1;
        used_cols[pc] = true;
        for i in (r + 1)..rows {
            let f = a[i][pc] / a[r][pc];
            for j in 0..cols {
                let v = a[r][j];
                a[i][j] -= f * v;
            }
        }
        rank += 1;
    }
    rank
}

/// Every `k`-subset of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
