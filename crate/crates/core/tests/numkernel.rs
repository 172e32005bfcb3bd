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


use proptest::prelude::*;

use qubound::numkernel::vector::{kron, norm};
use qubound::qstate::{purify, random_density, random_projector, random_psd, random_unitary, reduce_to_system, stream};
use qubound::{ComplexMatrix, Subsystem, C64};

fn random_hermitian(d: usize, seed: u64) -> ComplexMatrix {
    let mut rng = stream(seed, 0);
    let a = random_psd(d, d, &mut rng).unwrap();
    let b = random_psd(d, d, &mut rng).unwrap();
    a.try_sub(&b).unwrap()
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eig_reconstructs(d in 1usize..=12, seed in any::<u64>()) {
        let a = random_hermitian(d, seed);
        let eig = a.hermitian_eig().unwrap();
        let scale = a.max_abs().max(1.0);
        prop_assert!(eig.reconstruct().max_abs_diff(&a) <= 1e-10 * scale);
        prop_assert!(eig.orthonormality_defect() <= 1e-10);
    }

    #[test]
    fn spectrum_is_unitarily_invariant(d in 1usize..=8, seed in any::<u64>()) {
        let a = random_hermitian(d, seed);
        let u = random_unitary(d, &mut stream(seed, 1));
        let b = u.matmul(&a).unwrap().matmul(&u.dagger()).unwrap().hermitian_part();
        let la = sorted(a.hermitian_eig().unwrap().eigenvalues);
        let lb = sorted(b.hermitian_eig().unwrap().eigenvalues);
        for (x, y) in la.iter().zip(&lb) {
            prop_assert!((x - y).abs() <= 1e-9 * a.max_abs().max(1.0));
        }
    }

    #[test]
    fn trace_norm_triangle(d in 1usize..=8, s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = random_hermitian(d, s1);
        let b = random_hermitian(d, s2);
        let sum = a.try_add(&b).unwrap().trace_norm().unwrap();
        prop_assert!(sum <= a.trace_norm().unwrap() + b.trace_norm().unwrap() + 1e-9);
    }

    #[test]
    fn partial_trace_of_product(da in 1usize..=4, db in 1usize..=4, seed in any::<u64>()) {
        let mut rng = stream(seed, 2);
        let rho = random_density(da, da, &mut rng).unwrap();
        let sigma = random_density(db, db, &mut rng).unwrap();
        let joint = rho.matrix().tensor(sigma.matrix());
        let a = joint.partial_trace(da, db, Subsystem::A).unwrap();
        let b = joint.partial_trace(da, db, Subsystem::B).unwrap();
        prop_assert!(a.max_abs_diff(rho.matrix()) <= 1e-12);
        prop_assert!(b.max_abs_diff(sigma.matrix()) <= 1e-12);
    }

    #[test]
    fn purification_reduces_to_state(d in 1usize..=6, rank in 1usize..=6, seed in any::<u64>()) {
        let rho = random_density(d, rank.min(d), &mut stream(seed, 3)).unwrap();
        let psi = purify(&rho).unwrap();
        prop_assert!((norm(psi.amplitudes()) - 1.0).abs() <= 1e-12);
        let reduced = reduce_to_system(&psi, d).unwrap();
        prop_assert!(reduced.max_abs_diff(rho.matrix()) <= 1e-10);
    }

    #[test]
    fn random_projector_is_idempotent(d in 1usize..=8, seed in any::<u64>()) {
        let mut rng = stream(seed, 4);
        let rank = 1 + (seed % d as u64) as usize;
        let p = random_projector(d, rank, &mut rng).unwrap();
        let m = p.matrix();
        prop_assert!(m.matmul(m).unwrap().max_abs_diff(m) <= 1e-12);
        prop_assert!((m.trace().re - rank as f64).abs() <= 1e-12);
        prop_assert_eq!(p.rank(), rank);
    }

    #[test]
    fn kron_matches_tensor(da in 1usize..=3, db in 1usize..=3, seed in any::<u64>()) {
        let a = random_hermitian(da, seed);
        let b = random_hermitian(db, seed.wrapping_add(1));
        let u: Vec<C64> = (0..da).map(|i| C64::new(i as f64 + 0.5, -(i as f64))).collect();
        let v: Vec<C64> = (0..db).map(|i| C64::new(1.0, i as f64 * 0.25)).collect();
        let lhs = a.tensor(&b).mul_vec(&kron(&u, &v)).unwrap();
        let rhs = kron(&a.mul_vec(&u).unwrap(), &b.mul_vec(&v).unwrap());
        for (x, y) in lhs.iter().zip(&rhs) {
            prop_assert!((x - y).norm() <= 1e-9 * (1.0 + y.norm()));
        }
    }
}

#[test]
fn known_spectrum() {
    let pauli_y = ComplexMatrix::from_rows(&[
        vec![C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
        vec![C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
    ])
    .unwrap();
    let l = sorted(pauli_y.hermitian_eig().unwrap().eigenvalues);
    assert!((l[0] + 1.0).abs() < 1e-15 && (l[1] - 1.0).abs() < 1e-15);
    assert!((pauli_y.trace_norm().unwrap() - 2.0).abs() < 1e-14);
}

#[test]
fn non_hermitian_trace_norm_uses_singular_values() {
    // Nilpotent |0⟩⟨1| has a single singular value 1.
    let m = ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
    assert!((m.trace_norm().unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn shape_errors_are_reported() {
    let a = ComplexMatrix::zeros(2, 3);
    assert!(a.matmul(&a).is_err());
    assert!(ComplexMatrix::identity(4).partial_trace(3, 2, Subsystem::A).is_err());
}
