use crate::tensor::Mat3;

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns
/// of `vectors` (`vectors[k][i]` is component k of eigenvector i).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenDecomposition {
    pub values: [f64; 3],
    pub vectors: Mat3,
    pub sweeps: usize,
}

impl EigenDecomposition {
    pub fn vector(&self, i: usize) -> [f64; 3] {
        [self.vectors[0][i], self.vectors[1][i], self.vectors[2][i]]
    }
}

fn off_diagonal(a: &Mat3) -> f64 {
    (2.0 * (a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2))).sqrt()
}

/// Cyclic Jacobi rotations until the off-diagonal norm is at most
/// `1e-14‖A‖_F`.
pub fn dense_eigensolver(a: &Mat3) -> EigenDecomposition {
    let mut a = *a;
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let scale = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let mut sweeps = 0;
    while off_diagonal(&a) > 1e-14 * scale && sweeps < 64 {
        sweeps += 1;
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if a[p][q] == 0.0 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            for k in 0..3 {
                let (akp, akq) = (a[k][p], a[k][q]);
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let (apk, aqk) = (a[p][k], a[q][k]);
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            for row in v.iter_mut() {
                let (vp, vq) = (row[p], row[q]);
                row[p] = c * vp - s * vq;
                row[q] = s * vp + c * vq;
            }
        }
    }
    let mut order = [0, 1, 2];
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let mut values = [0.0; 3];
    let mut vectors = [[0.0; 3]; 3];
    for (n, &i) in order.iter().enumerate() {
        values[n] = a[i][i];
        for k in 0..3 {
            vectors[k][n] = v[k][i];
        }
    }
    EigenDecomposition { values, vectors, sweeps }
}

/// Permutation `p` minimizing `max_i |analytic[i] - numeric[p[i]]|`.
pub fn best_assignment(analytic: &[f64; 3], numeric: &[f64; 3]) -> [usize; 3] {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let cost = |p: &[usize; 3]| (0..3).map(|i| (analytic[i] - numeric[p[i]]).abs()).fold(0.0, f64::max);
    *PERMS
        .iter()
        .min_by(|a, b| cost(a).total_cmp(&cost(b)))
        .expect("non-empty")
}
