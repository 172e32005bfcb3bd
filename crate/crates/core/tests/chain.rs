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


use qubound::qstate::{random_density, random_projector, random_pure_state, stream, zeno_family};
use qubound::seqchain::{
    extract_angles, run_back_and_forth, run_chain, AngleResiduals, ChainInstance, MeasurementChain,
};
use qubound::{DensityOperator, Error, Projector, PureState};

fn random_pure_chain(seed: u64) -> MeasurementChain {
    let mut rng = stream(seed, 0);
    let d = 2 + (seed % 5) as usize;
    let n = 1 + (seed % 6) as usize;
    let psi = random_pure_state(d, &mut rng).unwrap();
    let ps = (0..n)
        .map(|i| random_projector(d, 1 + (i + seed as usize) % d, &mut rng).unwrap())
        .collect();
    MeasurementChain::pure(psi, ps).unwrap()
}

fn random_mixed_chain(seed: u64) -> MeasurementChain {
    let mut rng = stream(seed, 1);
    let d = 2 + (seed % 4) as usize;
    let rho = random_density(d, d, &mut rng).unwrap();
    let ps = (0..3).map(|_| random_projector(d, d - 1, &mut rng).unwrap()).collect();
    MeasurementChain::mixed(rho, ps).unwrap()
}

#[test]
fn angle_identities_hold_on_random_chains() {
    for seed in 0..300 {
        let trace = extract_angles(&random_pure_chain(seed)).unwrap();
        let r = AngleResiduals::from_trace(&trace).unwrap();
        for v in [&r.beta_product, &r.step_probability, &r.epsilon] {
            assert!(v.iter().all(|x| x.abs() <= 1e-9), "seed {seed}: {v:?}");
        }
        // One-sided: slack appears once P_i has rank above one.
        assert!(r.beta_previous.iter().all(|&x| x >= -1e-9), "seed {seed}: {:?}", r.beta_previous);
        let a = trace.angles.as_ref().unwrap();
        let product: f64 = a.theta.iter().map(|t| t.cos().powi(2)).product();
        assert!((product - trace.success_probability).abs() <= 1e-12);
        // The final state sits at angle β_N from ψ.
        let beta_n = *a.beta.last().unwrap();
        assert!((trace.trace_distance - 2.0 * beta_n.sin()).abs() <= 1e-9);
    }
}

#[test]
fn running_product_matches_operator_product() {
    for seed in 0..200 {
        for chain in [random_pure_chain(seed), random_mixed_chain(seed)] {
            let t = run_chain(&chain).unwrap();
            assert!((t.success_probability - t.success_direct).abs() <= 1e-12, "seed {seed}");
        }
    }
}

#[test]
fn purified_chain_agrees_with_mixed_chain() {
    for seed in 0..100 {
        let chain = random_mixed_chain(seed);
        let direct = run_chain(&chain).unwrap();
        let lifted = run_chain(&chain.purified().unwrap()).unwrap();
        assert!((direct.success_probability - lifted.success_probability).abs() <= 1e-10);
        for (a, b) in direct.epsilons.iter().zip(&lifted.epsilons) {
            assert!((a - b).abs() <= 1e-10);
        }
        // Tracing out the reference cannot increase trace distance.
        assert!(direct.trace_distance <= lifted.trace_distance + 1e-10);
    }
}

#[test]
fn identity_chain_is_undisturbed() {
    let rho = DensityOperator::from_diag(&[0.2, 0.3, 0.5]).unwrap();
    let chain = MeasurementChain::mixed(rho, vec![Projector::identity(3); 5]).unwrap();
    let t = run_chain(&chain).unwrap();
    assert!(t.epsilons.iter().all(|&e| e.abs() < 1e-15));
    assert!(t.trace_distance < 1e-14);
    assert!((t.success_probability - 1.0).abs() < 1e-14);
}

#[test]
fn orthogonal_step_reports_partial_probabilities() {
    let psi = PureState::basis(3, 0).unwrap();
    let keep = Projector::from_orthonormal(3, &[PureState::basis(3, 0).unwrap().amplitudes().to_vec()]).unwrap();
    let kill = Projector::from_orthonormal(3, &[PureState::basis(3, 2).unwrap().amplitudes().to_vec()]).unwrap();
    let chain = MeasurementChain::pure(psi, vec![keep.clone(), keep, kill]).unwrap();
    match run_chain(&chain) {
        Err(Error::VanishingBranch { step, partial_probabilities, .. }) => {
            assert_eq!(step, 3);
            assert_eq!(partial_probabilities.len(), 2);
            assert!(partial_probabilities.iter().all(|&p| (p - 1.0).abs() < 1e-15));
        }
        other => panic!("expected a vanishing branch, got {other:?}"),
    }
}

#[test]
fn zeno_family_stays_close() {
    let mut rng = stream(5, 0);
    let psi = random_pure_state(4, &mut rng).unwrap();
    let fam = zeno_family(&psi, 6, 0.01, &mut rng).unwrap();
    let chain = MeasurementChain::pure(psi, fam.projectors).unwrap();
    let t = run_chain(&chain).unwrap();
    assert!(t.epsilons.iter().all(|&e| e <= 0.01 + 1e-12));
    assert!(t.success_probability >= 1.0 - 4.0 * t.epsilon_sum() - 1e-12);
}

#[test]
fn back_and_forth_runs_2n_minus_1_steps() {
    let bf = run_back_and_forth(&random_pure_chain(4)).unwrap();
    assert_eq!(bf.trace.len(), 2 * bf.forward_epsilons.len() - 1);
}

#[test]
fn instance_json_round_trip() {
    let chain = random_mixed_chain(11);
    let inst = ChainInstance::from_chain(&chain);
    let text = serde_json::to_string(&inst).unwrap();
    let back: ChainInstance = serde_json::from_str(&text).unwrap();
    let a = run_chain(&inst.to_chain().unwrap()).unwrap();
    let b = run_chain(&back.to_chain().unwrap()).unwrap();
    assert!((a.success_probability - b.success_probability).abs() < 1e-15);
    assert!(matches!(back.to_pure_chain(), Err(Error::Precondition(_))));
    assert!(matches!(extract_angles(&back.to_chain().unwrap()), Err(Error::Precondition(_))));
}

#[test]
fn invalid_projector_json_is_rejected() {
    // Not idempotent.
    let bad = r#"{"rho": {"rows": 2, "cols": 2, "data": [[1,0],[0,0],[0,0],[0,0]]},
        "projectors": [{"rows": 2, "cols": 2, "data": [[0.5,0],[0,0],[0,0],[0,0]]}]}"#;
    assert!(serde_json::from_str::<ChainInstance>(bad).is_err());
    let good = bad.replace("[[0.5,0]", "[[1,0]");
    assert!(serde_json::from_str::<ChainInstance>(&good).is_ok());
}
