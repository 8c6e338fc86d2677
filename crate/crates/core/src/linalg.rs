//! Fixed-size dense helpers and a cyclic Jacobi eigensolver for the small
//! symmetric matrices of the reduced problems.

#![allow(clippy::needless_range_loop)]

pub type Mat<const N: usize> = [[f64; N]; N];

/// Eigenpairs sorted by ascending eigenvalue. `vectors[i][j]` is component `i`
/// of eigenvector `j` (eigenvectors are columns). Each eigenvector is signed
/// so that its largest-magnitude component is positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricEigen<const N: usize> {
    pub values: [f64; N],
    pub vectors: Mat<N>,
}

impl<const N: usize> SymmetricEigen<N> {
    pub fn vector(&self, j: usize) -> [f64; N] {
        std::array::from_fn(|i| self.vectors[i][j])
    }
}

pub fn identity<const N: usize>() -> Mat<N> {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }))
}

pub fn transpose<const N: usize>(a: &Mat<N>) -> Mat<N> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

pub fn matmul<const N: usize>(a: &Mat<N>, b: &Mat<N>) -> Mat<N> {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..N).map(|k| a[i][k] * b[k][j]).sum()))
}

pub fn mat_vec<const N: usize>(a: &Mat<N>, x: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| (0..N).map(|k| a[i][k] * x[k]).sum())
}

/// Largest absolute entrywise difference.
pub fn max_abs_diff<const N: usize>(a: &Mat<N>, b: &Mat<N>) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn is_symmetric<const N: usize>(a: &Mat<N>, tol: f64) -> bool {
    (0..N).all(|i| (0..N).all(|j| (a[i][j] - a[j][i]).abs() <= tol))
}

fn off_diagonal_sq<const N: usize>(a: &Mat<N>) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        for j in 0..N {
            if i != j {
                s += a[i][j] * a[i][j];
            }
        }
    }
    s
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Sweeps over all (p, q) pairs until the off-diagonal mass is negligible
/// against the Frobenius norm, which for these sizes means machine precision.
pub fn symmetric_eigen<const N: usize>(a: &Mat<N>) -> SymmetricEigen<N> {
    let mut a = *a;
    let mut v = identity::<N>();
    let frob_sq: f64 = a.iter().flatten().map(|x| x * x).sum();
    let target = frob_sq * (f64::EPSILON * f64::EPSILON) * 1e-4;

    for _sweep in 0..100 {
        if off_diagonal_sq(&a) <= target {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A <- J^T A J with J the (p, q) rotation
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values = std::array::from_fn(|j| a[order[j]][order[j]]);
    let mut vectors = [[0.0; N]; N];
    for (j, &src) in order.iter().enumerate() {
        let mut lead = 0;
        for i in 1..N {
            if v[i][src].abs() > v[lead][src].abs() {
                lead = i;
            }
        }
        let sign = if v[lead][src] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..N {
            vectors[i][j] = sign * v[i][src];
        }
    }
    SymmetricEigen { values, vectors }
}
