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

//! Seeded random instance generators.
//!
//! Every generator takes an explicit RNG. [`stream`] derives the RNG for a
//! `(master seed, trial index)` pair from a counter-based ChaCha stream, so a
//! trial's instance depends only on those two numbers and never on which
//! worker ran it or in what order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{DensityOperator, Effect, Projector, PureState};
use crate::numkernel::{vector, ComplexMatrix, C64};
use crate::{Error, Result};

pub type RngStream = ChaCha8Rng;

/// Independent stream number `index` under master seed `seed`.
pub fn stream(seed: u64, index: u64) -> RngStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Standard complex Gaussian, `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn gaussian_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    (0..d).map(|_| complex_gaussian(rng)).collect()
}

/// Haar-random unit vector: a normalized complex Gaussian vector.
pub fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<PureState> {
    if d == 0 {
        return Err(Error::validation("random_pure_state: d >= 1"));
    }
    loop {
        let v = gaussian_vector(d, rng);
        if let Some(u) = vector::normalized(&v) {
            return PureState::new(u);
        }
    }
}

/// Hilbert-Schmidt-induced random density operator `G G† / tr(G G†)` with
/// `G` a `d x rank` complex Gaussian matrix.
pub fn random_density<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> Result<DensityOperator> {
    check_rank("random_density", d, rank)?;
    let g = ComplexMatrix::from_vec(d, rank, gaussian_vector(d * rank, rng))?;
    DensityOperator::from_unnormalized(g.matmul(&g.dagger())?)
}

/// Unnormalized positive semidefinite `G G†`, `G` a `d x rank` Gaussian.
pub fn random_psd<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> Result<ComplexMatrix> {
    check_rank("random_psd", d, rank)?;
    let g = ComplexMatrix::from_vec(d, rank, gaussian_vector(d * rank, rng))?;
    Ok(g.matmul(&g.dagger())?.hermitian_part())
}

/// Gram-Schmidt on `count` Gaussian vectors, continuing an existing
/// orthonormal family. Equivalent to QR of a Gaussian matrix with the phase
/// convention that makes `R` have a positive diagonal, hence Haar.
fn extend_orthonormal<R: Rng + ?Sized>(
    d: usize,
    mut basis: Vec<Vec<C64>>,
    count: usize,
    rng: &mut R,
) -> Vec<Vec<C64>> {
    let target = basis.len() + count;
    while basis.len() < target {
        let mut v = gaussian_vector(d, rng);
        let n = vector::orthogonalize_against(&mut v, &basis);
        if n > 1e-8 {
            vector::scale(&mut v, C64::new(1.0 / n, 0.0));
            basis.push(v);
        }
    }
    basis
}

/// Haar-random unitary; columns are the orthonormalized Gaussian columns.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let cols = extend_orthonormal(d, Vec::new(), d, rng);
    ComplexMatrix::from_fn(d, d, |i, j| cols[j][i])
}

/// `V V†` with `V` the first `rank` columns of a Haar unitary.
pub fn random_projector<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> Result<Projector> {
    check_rank("random_projector", d, rank)?;
    let cols = extend_orthonormal(d, Vec::new(), rank, rng);
    Ok(Projector::from_parts(ComplexMatrix::projector_onto(d, &cols), rank))
}

/// `U diag(u) U†` with `u_i` uniform on `[0, 1]` and `U` Haar.
pub fn random_effect<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Effect> {
    let u = random_unitary(d, rng);
    let diag: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
    let m = u.matmul(&ComplexMatrix::from_diag(&diag))?.matmul(&u.dagger())?;
    Effect::new(m.hermitian_part())
}

fn check_rank(what: &str, d: usize, rank: usize) -> Result<()> {
    if rank == 0 || rank > d {
        return Err(Error::validation(format!("{what}: 1 <= rank <= d (rank {rank}, d {d})")));
    }
    Ok(())
}

/// Projectors that each nearly contain a fixed state, plus the failure
/// probability `ε_i = 1 - ⟨ψ|P_i|ψ⟩` of each one.
#[derive(Clone, Debug)]
pub struct ZenoFamily {
    pub projectors: Vec<Projector>,
    pub epsilons: Vec<f64>,
}

/// `n` projectors of rank `⌈d/2⌉`, each with `tr(P_i ψψ†) >= 1 - eps_max`.
///
/// Each range contains `cos φ |ψ⟩ + sin φ |u⟩` for a random unit `u ⊥ ψ` and
/// `φ` uniform on `[0, arcsin √eps_max]`, completed with Haar-random
/// orthonormal vectors. Completion can only increase the overlap with `ψ`.
pub fn zeno_family<R: Rng + ?Sized>(
    psi: &PureState,
    n: usize,
    eps_max: f64,
    rng: &mut R,
) -> Result<ZenoFamily> {
    if !(0.0..=0.5).contains(&eps_max) {
        return Err(Error::validation(format!(
            "zeno_family: 0 <= eps_max <= 1/2 (got {eps_max})"
        )));
    }
    let d = psi.dim();
    let rank = d.div_ceil(2);
    let phi_max = eps_max.sqrt().asin();
    let mut projectors = Vec::with_capacity(n);
    let mut epsilons = Vec::with_capacity(n);
    for _ in 0..n {
        let phi = if phi_max > 0.0 { rng.random_range(0.0..=phi_max) } else { 0.0 };
        let mut tilted = psi.amplitudes().to_vec();
        if d > 1 && phi > 0.0 {
            let u = extend_orthonormal(d, vec![psi.amplitudes().to_vec()], 1, rng).pop().unwrap();
            let (s, c) = phi.sin_cos();
            for (t, ui) in tilted.iter_mut().zip(&u) {
                *t = *t * c + ui * s;
            }
        }
        let cols = extend_orthonormal(d, vec![tilted], rank - 1, rng);
        let p = Projector::from_parts(ComplexMatrix::projector_onto(d, &cols), rank);
        let eps = 1.0 - p.probability(&psi.density())?;
        epsilons.push(eps.max(0.0));
        projectors.push(p);
    }
    Ok(ZenoFamily {
        projectors,
        epsilons,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{purify, reduce_to_system, von_neumann_entropy};

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let a = random_pure_state(3, &mut stream(7, 0)).unwrap();
        let b = random_pure_state(3, &mut stream(7, 0)).unwrap();
        let c = random_pure_state(3, &mut stream(7, 1)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let one = random_pure_state(1, &mut stream(1, 1)).unwrap();
        assert!((one.amplitudes()[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn haar_second_moment() {
        // E|<0|ψ>|² = 1/d for Haar ψ.
        let mut rng = stream(2024, 0);
        let samples = 10_000;
        let mean: f64 = (0..samples)
            .map(|_| random_pure_state(4, &mut rng).unwrap().amplitudes()[0].norm_sqr())
            .sum::<f64>()
            / samples as f64;
        assert!((mean - 0.25).abs() < 0.01, "{mean}");
    }

    #[test]
    fn density_rank_one_is_pure() {
        let rho = random_density(4, 1, &mut stream(3, 0)).unwrap();
        assert!(rho.as_pure().is_some());
        assert!(random_density(3, 4, &mut stream(3, 0)).is_err());
        assert!(random_density(3, 0, &mut stream(3, 0)).is_err());
    }

    #[test]
    fn density_eigenvalue_gap_matches_sampling_oracle() {
        // Independent oracle: for d = rank = 2 the HS-induced spectrum can be
        // sampled from the Gram matrix of two Gaussian vectors directly via
        // the closed-form 2x2 eigenvalues.
        let trials = 20_000;
        let mut rng = stream(99, 0);
        let mut gap_impl = 0.0;
        for _ in 0..trials {
            let rho = random_density(2, 2, &mut rng).unwrap();
            let eig = rho.spectrum().unwrap();
            gap_impl += eig.eigenvalues[1] - eig.eigenvalues[0];
        }
        let mut rng = stream(100, 0);
        let mut gap_oracle = 0.0;
        for _ in 0..trials {
            let g: Vec<C64> = (0..4).map(|_| complex_gaussian(&mut rng)).collect();
            // W = G G†, entries from columns g0=(g[0], g[2]), g1=(g[1], g[3]).
            let a = g[0].norm_sqr() + g[1].norm_sqr();
            let c = g[2].norm_sqr() + g[3].norm_sqr();
            let b = g[0] * g[2].conj() + g[1] * g[3].conj();
            let tr = a + c;
            let disc = ((a - c) * (a - c) + 4.0 * b.norm_sqr()).sqrt();
            gap_oracle += disc / tr;
        }
        let (gi, go) = (gap_impl / trials as f64, gap_oracle / trials as f64);
        assert!((gi - go).abs() < 0.02, "{gi} vs {go}");
    }

    #[test]
    fn projector_constructive_properties() {
        let mut rng = stream(5, 5);
        for d in 1..7 {
            for rank in 1..=d {
                let p = random_projector(d, rank, &mut rng).unwrap();
                let sq = p.matrix().matmul(p.matrix()).unwrap();
                assert!(sq.max_abs_diff(p.matrix()) <= 1e-10);
                assert!((p.matrix().trace().re - rank as f64).abs() <= 1e-10);
            }
        }
        let full = random_projector(3, 3, &mut rng).unwrap();
        assert!(full.matrix().max_abs_diff(&ComplexMatrix::identity(3)) <= 1e-10);
    }

    #[test]
    fn unitary_is_unitary() {
        let u = random_unitary(5, &mut stream(8, 8));
        let g = u.dagger().matmul(&u).unwrap();
        assert!(g.max_abs_diff(&ComplexMatrix::identity(5)) <= 1e-12);
    }

    #[test]
    fn zeno_family_postconditions() {
        let mut rng = stream(11, 0);
        let psi = random_pure_state(5, &mut rng).unwrap();
        let fam = zeno_family(&psi, 6, 1e-2, &mut rng).unwrap();
        for (p, &eps) in fam.projectors.iter().zip(&fam.epsilons) {
            assert_eq!(p.rank(), 3);
            let got = 1.0 - p.probability(&psi.density()).unwrap();
            assert!((got - eps).abs() < 1e-12);
            assert!(eps <= 1e-2 + 1e-12);
        }
        let exact = zeno_family(&psi, 4, 0.0, &mut rng).unwrap();
        assert!(exact.epsilons.iter().all(|&e| e < 1e-12));
        assert!(zeno_family(&psi, 1, 0.6, &mut rng).is_err());
    }

    #[test]
    fn purification_round_trip_random() {
        let mut rng = stream(12, 0);
        for trial in 0..1000 {
            let d = 2 + trial % 3;
            let rank = 1 + trial % d;
            let rho = random_density(d, rank, &mut rng).unwrap();
            let psi = purify(&rho).unwrap();
            let red = reduce_to_system(&psi, d).unwrap();
            assert!(red.max_abs_diff(rho.matrix()) <= 1e-8);
        }
    }

    #[test]
    fn entropy_unitary_invariant_and_bounded() {
        let mut rng = stream(13, 0);
        for _ in 0..200 {
            let d = 4;
            let rho = random_density(d, 3, &mut rng).unwrap();
            let u = random_unitary(d, &mut rng);
            let rotated = u.matmul(rho.matrix()).unwrap().matmul(&u.dagger()).unwrap();
            let rotated = DensityOperator::new(rotated).unwrap();
            let s = von_neumann_entropy(&rho).unwrap();
            assert!((s - von_neumann_entropy(&rotated).unwrap()).abs() <= 1e-9);
            assert!((0.0..=2.0 + 1e-12).contains(&s));
        }
    }
}
