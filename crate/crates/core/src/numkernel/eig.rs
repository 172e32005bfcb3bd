// Copyright 2026 The qubound Developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use super::{ComplexMatrix, C64};
use crate::config::VALIDATION_TOL;
use crate::{Error, Result};

const MAX_QL_ITERATIONS: usize = 100;

/// Spectral decomposition `A = V diag(λ) V†` of a Hermitian matrix.
///
/// Eigenvalues are ascending and the columns of `eigenvectors` are the
/// matching orthonormal eigenvectors.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::INFINITY)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(f64::NEG_INFINITY)
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column_vec(k)
    }

    /// `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .filter(|&k| fl[k] != 0.0)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * fl[k])
                .sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|l| l)
    }

    /// `max |V†V - I|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let v = &self.eigenvectors;
        v.dagger()
            .matmul(v)
            .map(|g| g.max_abs_diff(&ComplexMatrix::identity(self.dim())))
            .unwrap_or(f64::INFINITY)
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Input must be square with `max |A - A†| <= 1e-9`; it is replaced by
/// `(A + A†)/2` before decomposition.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !a.is_square() {
        return Err(Error::validation(format!(
            "hermitian_eig: square input (got {}x{})",
            a.rows(),
            a.cols()
        )));
    }
    let defect = a.hermitian_defect();
    if defect > VALIDATION_TOL {
        return Err(Error::validation(format!(
            "hermitian_eig: Hermitian within {VALIDATION_TOL:e} (defect {defect:e})"
        )));
    }
    let n = a.rows();
    let mut h = a.hermitian_part().into_vec();
    let mut q = ComplexMatrix::identity(n).into_vec();

    tridiagonalize(&mut h, &mut q, n);

    let mut diag: Vec<f64> = (0..n).map(|i| h[i * n + i].re).collect();
    let mut off = vec![0.0; n];
    // Rotate each column by a phase so the subdiagonal becomes real and
    // non-negative; the tridiagonal problem is then real symmetric.
    let mut phase = C64::new(1.0, 0.0);
    for i in 0..n.saturating_sub(1) {
        let e = h[(i + 1) * n + i];
        let mag = e.norm();
        off[i] = mag;
        phase = if mag > 0.0 { phase * (e / mag) } else { C64::new(1.0, 0.0) };
        for r in 0..n {
            q[r * n + i + 1] *= phase;
        }
    }

    tql_implicit(&mut diag, &mut off, &mut q, n)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));
    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| q[i * n + order[j]]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Householder reduction of the Hermitian matrix `h` (row-major, n x n) to
/// tridiagonal form, accumulating the unitary in `q` so that
/// `A = Q T Q†` on return (T left in `h`).
fn tridiagonalize(h: &mut [C64], q: &mut [C64], n: usize) {
    let zero = C64::new(0.0, 0.0);
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];
    for k in 0..n.saturating_sub(2) {
        let tail: f64 = (k + 2..n).map(|i| h[i * n + k].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = h[(k + 1) * n + k];
        let alpha = (tail + x0.norm_sqr()).sqrt();
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { C64::new(1.0, 0.0) };

        v.iter_mut().for_each(|x| *x = zero);
        for i in k + 1..n {
            v[i] = h[i * n + k];
        }
        v[k + 1] += phase * alpha;
        let vnorm2: f64 = v[k + 1..].iter().map(|x| x.norm_sqr()).sum();
        let tau = 2.0 / vnorm2;

        // Two-sided update h <- H h H with H = I - tau v v†.
        for i in 0..n {
            p[i] = h[i * n + k + 1..(i + 1) * n]
                .iter()
                .zip(&v[k + 1..])
                .map(|(a, b)| a * b)
                .sum::<C64>()
                * tau;
        }
        let kk: C64 = v[k + 1..]
            .iter()
            .zip(&p[k + 1..])
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            * (tau * 0.5);
        let w: Vec<C64> = (0..n).map(|i| p[i] - kk * v[i]).collect();
        for i in 0..n {
            for j in 0..n {
                if v[i] == zero && v[j] == zero {
                    continue;
                }
                h[i * n + j] -= v[i] * w[j].conj() + w[i] * v[j].conj();
            }
        }
        for i in k + 2..n {
            h[i * n + k] = zero;
            h[k * n + i] = zero;
        }

        // q <- q H
        for r in 0..n {
            let s: C64 = q[r * n + k + 1..(r + 1) * n]
                .iter()
                .zip(&v[k + 1..])
                .map(|(a, b)| a * b)
                .sum::<C64>()
                * tau;
            for j in k + 1..n {
                q[r * n + j] -= s * v[j].conj();
            }
        }
    }
}

/// Implicit QL with Wilkinson shifts on the real symmetric tridiagonal
/// matrix (`d` diagonal, `e[i]` coupling i and i+1). Rotations are applied to
/// the columns of `z`.
fn tql_implicit(d: &mut [f64], e: &mut [f64], z: &mut [C64], n: usize) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence(MAX_QL_ITERATIONS));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let zi = z[k * n + i];
                    let zi1 = z[k * n + i + 1];
                    z[k * n + i + 1] = zi * s + zi1 * c;
                    z[k * n + i] = zi * c - zi1 * s;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
