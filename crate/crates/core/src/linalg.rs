//! Jacobi eigensolvers for the small matrices used in this crate: the 3×3
//! real symmetric metric tensor and complex Hermitian density matrices of
//! dimension up to a few tens.

use crate::error::{Error, Result};
use num_complex::Complex64;

const SWEEP_TOL: f64 = 1e-30; // on the sum of squared off-diagonal moduli
const MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a real symmetric 3×3 matrix by cyclic Jacobi
/// rotations. Returns `(values, vectors)` sorted by descending eigenvalue;
/// `vectors[j]` is the unit eigenvector for `values[j]`, with its
/// largest-magnitude component made positive.
#[allow(clippy::needless_range_loop)]
pub fn sym_eigen_3(m: &[[f64; 3]; 3]) -> Result<([f64; 3], [[f64; 3]; 3])> {
    for row in m {
        for x in row {
            if !x.is_finite() {
                return Err(Error::NonFinite);
            }
        }
    }
    let mut a = *m;
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().max(1e-300);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]) * 2.0;
        if off <= SWEEP_TOL * scale {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = a[p][q];
            if apq == 0.0 {
                continue;
            }
            let tau = (a[q][q] - a[p][p]) / (2.0 * apq);
            let t = if tau >= 0.0 {
                1.0 / (tau + (1.0 + tau * tau).sqrt())
            } else {
                -1.0 / (-tau + (1.0 + tau * tau).sqrt())
            };
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = t * c;
            for i in 0..3 {
                let aip = a[i][p];
                let aiq = a[i][q];
                a[i][p] = c * aip - s * aiq;
                a[i][q] = s * aip + c * aiq;
            }
            for j in 0..3 {
                let apj = a[p][j];
                let aqj = a[q][j];
                a[p][j] = c * apj - s * aqj;
                a[q][j] = s * apj + c * aqj;
            }
            for i in 0..3 {
                let vip = v[i][p];
                let viq = v[i][q];
                v[i][p] = c * vip - s * viq;
                v[i][q] = s * vip + c * viq;
            }
        }
    }

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a[j][j].partial_cmp(&a[i][i]).unwrap());
    let mut values = [0.0; 3];
    let mut vectors = [[0.0; 3]; 3];
    for (slot, &j) in order.iter().enumerate() {
        values[slot] = a[j][j];
        let mut vec = [v[0][j], v[1][j], v[2][j]];
        let lead = (0..3).max_by(|&i, &l| vec[i].abs().partial_cmp(&vec[l].abs()).unwrap());
        if let Some(i) = lead {
            if vec[i] < 0.0 {
                vec.iter_mut().for_each(|x| *x = -*x);
            }
        }
        vectors[slot] = vec;
    }
    Ok((values, vectors))
}

/// Dense column-major complex Hermitian eigendecomposition by cyclic Jacobi
/// rotations with phase elimination. Returns eigenvalues in descending order
/// and the matching orthonormal eigenvectors as columns of `vecs`
/// (`vecs[i + dim * j]` is component `i` of eigenvector `j`).
pub fn herm_eigen(a: &[Complex64], dim: usize) -> Result<(Vec<f64>, Vec<Complex64>)> {
    if a.len() != dim * dim {
        return Err(Error::DimensionMismatch(a.len(), dim * dim));
    }
    let mut m = a.to_vec();
    let mut v = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        v[i + dim * i] = Complex64::new(1.0, 0.0);
    }
    let scale: f64 = m.iter().map(|z| z.norm_sqr()).sum::<f64>().max(1e-300);
    let at = |m: &[Complex64], i: usize, j: usize| m[i + dim * j];

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for j in 0..dim {
            for i in 0..j {
                off += at(&m, i, j).norm_sqr();
            }
        }
        if 2.0 * off <= SWEEP_TOL * scale {
            break;
        }
        for q in 0..dim {
            for p in 0..q {
                let z = at(&m, p, q);
                let zmod = z.norm();
                if zmod == 0.0 {
                    continue;
                }
                // Phase rotation makes the pivot real, then a real Jacobi
                // rotation annihilates it.
                let phase = z / zmod; // e^{i φ}
                let app = at(&m, p, p).re;
                let aqq = at(&m, q, q).re;
                let tau = (aqq - app) / (2.0 * zmod);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G columns: col p = c e_p − s e^{-iφ} e_q,
                //            col q = s e_p + c e^{-iφ} e_q.
                let gq = phase.conj();
                for i in 0..dim {
                    let mip = m[i + dim * p];
                    let miq = m[i + dim * q];
                    m[i + dim * p] = c * mip - s * gq * miq;
                    m[i + dim * q] = s * mip + c * gq * miq;
                }
                for j in 0..dim {
                    let mpj = m[p + dim * j];
                    let mqj = m[q + dim * j];
                    m[p + dim * j] = c * mpj - s * phase * mqj;
                    m[q + dim * j] = s * mpj + c * phase * mqj;
                }
                for i in 0..dim {
                    let vip = v[i + dim * p];
                    let viq = v[i + dim * q];
                    v[i + dim * p] = c * vip - s * gq * viq;
                    v[i + dim * q] = s * vip + c * gq * viq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| at(&m, j, j).re.partial_cmp(&at(&m, i, i).re).unwrap());
    let values: Vec<f64> = order.iter().map(|&j| at(&m, j, j).re).collect();
    let mut vecs = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (slot, &j) in order.iter().enumerate() {
        for i in 0..dim {
            vecs[i + dim * slot] = v[i + dim * j];
        }
    }
    Ok((values, vecs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sym3_diagonal() {
        let (vals, vecs) =
            sym_eigen_3(&[[2.0, 0.0, 0.0], [0.0, 5.0, 0.0], [0.0, 0.0, 3.0]]).unwrap();
        assert_relative_eq!(vals[0], 5.0);
        assert_relative_eq!(vals[1], 3.0);
        assert_relative_eq!(vals[2], 2.0);
        assert_relative_eq!(vecs[0][1], 1.0);
    }

    #[test]
    fn sym3_known_eigenvalues() {
        // [[2,1,0],[1,2,1],[0,1,2]] has eigenvalues 2 ± √2 and 2.
        let (vals, _) = sym_eigen_3(&[[2.0, 1.0, 0.0], [1.0, 2.0, 1.0], [0.0, 1.0, 2.0]]).unwrap();
        assert_relative_eq!(vals[0], 2.0 + 2f64.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(vals[1], 2.0, max_relative = 1e-13);
        assert_relative_eq!(vals[2], 2.0 - 2f64.sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn sym3_reconstructs() {
        let m = [[1.3, -0.2, 0.7], [-0.2, 2.1, 0.05], [0.7, 0.05, -0.4]];
        let (vals, vecs) = sym_eigen_3(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for e in 0..3 {
                    s += vals[e] * vecs[e][i] * vecs[e][j];
                }
                assert_relative_eq!(s, m[i][j], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn sym3_rejects_nan() {
        assert!(sym_eigen_3(&[[f64::NAN, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0],]).is_err());
    }

    fn rand_hermitian(dim: usize, seed: &mut u64) -> Vec<Complex64> {
        let mut next = || {
            // xorshift64*
            *seed ^= *seed << 13;
            *seed ^= *seed >> 7;
            *seed ^= *seed << 17;
            (*seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let z = if i == j {
                    Complex64::new(next(), 0.0)
                } else {
                    Complex64::new(next(), next())
                };
                m[i + dim * j] = z;
                m[j + dim * i] = z.conj();
            }
        }
        m
    }

    #[test]
    fn herm_eigen_reconstructs_and_is_unitary() {
        let mut seed = 0x9e3779b97f4a7c15;
        for dim in [2usize, 3, 4, 6, 8] {
            let m = rand_hermitian(dim, &mut seed);
            let (vals, vecs) = herm_eigen(&m, dim).unwrap();
            // Orthonormality.
            for a in 0..dim {
                for b in 0..dim {
                    let mut dot = Complex64::new(0.0, 0.0);
                    for i in 0..dim {
                        dot += vecs[i + dim * a].conj() * vecs[i + dim * b];
                    }
                    let expect = if a == b { 1.0 } else { 0.0 };
                    assert!((dot.re - expect).abs() < 1e-12 && dot.im.abs() < 1e-12);
                }
            }
            // Reconstruction.
            for i in 0..dim {
                for j in 0..dim {
                    let mut s = Complex64::new(0.0, 0.0);
                    for e in 0..dim {
                        s += vals[e] * vecs[i + dim * e] * vecs[j + dim * e].conj();
                    }
                    let d = s - m[i + dim * j];
                    assert!(d.norm() < 1e-11, "dim {dim}: residual {}", d.norm());
                }
            }
            // Descending order.
            for w in vals.windows(2) {
                assert!(w[0] >= w[1] - 1e-12);
            }
        }
    }

    #[test]
    fn herm_eigen_known_pauli_y() {
        let m = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 0.0),
        ];
        let (vals, _) = herm_eigen(&m, 2).unwrap();
        assert_relative_eq!(vals[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(vals[1], -1.0, epsilon = 1e-14);
    }
}
