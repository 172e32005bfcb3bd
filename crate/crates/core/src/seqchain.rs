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

//! Running a sequence of two-outcome measurements `{P_i, I - P_i}` and
//! keeping the branch where every outcome is `P_i`.
//!
//! For a pure initial state `ψ` the run also records four angles per step:
//!
//! * `θ_i`: between `ψ_{i-1}` and `ψ_i` (`cos²θ_i` is the step probability),
//! * `α_i`: between `ψ` and `ψ'_i = P_iψ/‖P_iψ‖` (`sin²α_i = ε_i`),
//! * `β_i`: between `ψ` and `ψ_i`,
//! * `γ_i`: between `ψ_i` and `ψ'_i`.
//!
//! Mixed initial states are run directly on density operators; their angles
//! are only available through a purification (see [`MeasurementChain::purified`]).

use serde::{Deserialize, Serialize};

use crate::config::PROB_FLOOR;
use crate::numkernel::{vector, ComplexMatrix, C64};
use crate::qstate::{lift_projector, purify, DensityOperator, Projector, PureState};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub enum InitialState {
    Pure(PureState),
    Mixed(DensityOperator),
}

impl InitialState {
    pub fn dim(&self) -> usize {
        match self {
            InitialState::Pure(p) => p.dim(),
            InitialState::Mixed(r) => r.dim(),
        }
    }

    pub fn density(&self) -> DensityOperator {
        match self {
            InitialState::Pure(p) => p.density(),
            InitialState::Mixed(r) => r.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MeasurementChain {
    projectors: Vec<Projector>,
    initial: InitialState,
}

impl MeasurementChain {
    pub fn new(initial: InitialState, projectors: Vec<Projector>) -> Result<Self> {
        if projectors.is_empty() {
            return Err(Error::validation("MeasurementChain: length N >= 1"));
        }
        let d = initial.dim();
        if let Some(i) = projectors.iter().position(|p| p.dim() != d) {
            return Err(Error::validation(format!(
                "MeasurementChain: all projector dims equal state dim {d} (projector {} has {})",
                i + 1,
                projectors[i].dim()
            )));
        }
        Ok(MeasurementChain { projectors, initial })
    }

    pub fn pure(psi: PureState, projectors: Vec<Projector>) -> Result<Self> {
        Self::new(InitialState::Pure(psi), projectors)
    }

    pub fn mixed(rho: DensityOperator, projectors: Vec<Projector>) -> Result<Self> {
        Self::new(InitialState::Mixed(rho), projectors)
    }

    pub fn projectors(&self) -> &[Projector] {
        &self.projectors
    }

    pub fn initial(&self) -> &InitialState {
        &self.initial
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.initial.dim()
    }

    /// The same chain lifted to `R ⊗ A`: a purification of the initial state
    /// measured with `Q_i = I_R ⊗ P_i`.
    pub fn purified(&self) -> Result<MeasurementChain> {
        let d = self.dim();
        let psi = match &self.initial {
            InitialState::Pure(p) => purify(&p.density())?,
            InitialState::Mixed(r) => purify(r)?,
        };
        let lifted = self.projectors.iter().map(|p| lift_projector(p, d)).collect();
        MeasurementChain::pure(psi, lifted)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ChainOptions {
    pub prob_floor: f64,
    /// Keep `ρ_1 … ρ_N` in the trace.
    pub keep_intermediate: bool,
}

impl Default for ChainOptions {
    fn default() -> Self {
        ChainOptions {
            prob_floor: PROB_FLOOR,
            keep_intermediate: false,
        }
    }
}

/// Angles of a pure-state run, in radians within `[0, π/2]`. Index `i` holds
/// step `i + 1`; `β_0 = 0` is implicit.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Angles {
    pub theta: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
}

/// Record of one run along the all-`P_i` branch.
#[derive(Clone, Debug)]
pub struct ChainTrace {
    /// Conditional probability of outcome `P_i` given the previous outcomes.
    pub step_probabilities: Vec<f64>,
    /// `ε_i = tr ρ - tr(P_i ρ)` against the initial state.
    pub epsilons: Vec<f64>,
    /// Present for pure runs in which every `P_i ψ` is non-vanishing.
    pub angles: Option<Angles>,
    pub intermediate_states: Option<Vec<DensityOperator>>,
    pub final_state: DensityOperator,
    /// `tr(P_N⋯P_1 ρ P_1⋯P_N)`, taken as `tr ρ · Π stepProbabilities`.
    pub success_probability: f64,
    /// The same quantity evaluated directly from the operator product.
    pub success_direct: f64,
    /// `‖ρ - ρ_N‖_1`.
    pub trace_distance: f64,
    pub initial_trace: f64,
}

impl ChainTrace {
    pub fn len(&self) -> usize {
        self.step_probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.step_probabilities.is_empty()
    }

    pub fn epsilon_sum(&self) -> f64 {
        self.epsilons.iter().sum()
    }
}

/// Measures `{P, I - P}` on ρ and keeps outcome `P`.
///
/// Returns the normalized post-measurement state and `tr(Pρ)`.
pub fn apply_projector(p: &Projector, rho: &DensityOperator) -> Result<(DensityOperator, f64)> {
    apply_projector_with_floor(p, rho, PROB_FLOOR)
}

pub fn apply_projector_with_floor(
    p: &Projector,
    rho: &DensityOperator,
    floor: f64,
) -> Result<(DensityOperator, f64)> {
    let prob = p.probability(rho)?;
    if prob <= floor {
        return Err(Error::VanishingBranch {
            step: 1,
            probability: prob,
            floor,
            partial_probabilities: Vec::new(),
        });
    }
    let m = p.matrix().matmul(rho.matrix())?.matmul(p.matrix())?;
    Ok((DensityOperator::from_unnormalized(m)?, prob))
}

pub fn run_chain(chain: &MeasurementChain) -> Result<ChainTrace> {
    run_chain_with(chain, &ChainOptions::default())
}

pub fn run_chain_with(chain: &MeasurementChain, opts: &ChainOptions) -> Result<ChainTrace> {
    let order: Vec<usize> = (0..chain.len()).collect();
    run_sequence(chain, &order, opts)
}

/// Runs the chain and requires the angle record.
pub fn extract_angles(chain: &MeasurementChain) -> Result<ChainTrace> {
    extract_angles_with(chain, &ChainOptions::default())
}

pub fn extract_angles_with(chain: &MeasurementChain, opts: &ChainOptions) -> Result<ChainTrace> {
    let psi = match chain.initial() {
        InitialState::Pure(p) => p,
        InitialState::Mixed(_) => {
            return Err(Error::Precondition(
                "angle extraction needs a pure initial state; purify the chain first".into(),
            ))
        }
    };
    let trace = run_chain_with(chain, opts)?;
    if trace.angles.is_none() {
        let (step, prob) = chain
            .projectors()
            .iter()
            .enumerate()
            .map(|(i, p)| (i + 1, vector::norm_sqr(&p.apply(psi.amplitudes()).unwrap_or_default())))
            .find(|&(_, prob)| prob <= opts.prob_floor)
            .unwrap_or((0, 0.0));
        return Err(Error::VanishingBranch {
            step,
            probability: prob,
            floor: opts.prob_floor,
            partial_probabilities: trace.step_probabilities,
        });
    }
    Ok(trace)
}

/// A forward-then-backward run `P_1, …, P_N, P_{N-1}, …, P_1`.
#[derive(Clone, Debug)]
pub struct BackAndForthTrace {
    /// Trace over all `2N - 1` applications.
    pub trace: ChainTrace,
    /// `ε_1 … ε_N` of the distinct projectors.
    pub forward_epsilons: Vec<f64>,
    /// `D(ρ, ρ_N)` after the forward half alone.
    pub forward_trace_distance: f64,
}

pub fn run_back_and_forth(chain: &MeasurementChain) -> Result<BackAndForthTrace> {
    let opts = ChainOptions::default();
    let n = chain.len();
    let order: Vec<usize> = (0..n).chain((0..n.saturating_sub(1)).rev()).collect();
    let trace = run_sequence(chain, &order, &opts)?;
    let forward = run_chain_with(chain, &opts)?;
    Ok(BackAndForthTrace {
        forward_epsilons: forward.epsilons,
        forward_trace_distance: forward.trace_distance,
        trace,
    })
}

/// `v - ⟨u|v⟩u` and `⟨u|v⟩` for unit `u`.
fn split(u: &[C64], v: &[C64]) -> (Vec<C64>, C64) {
    let c = vector::inner(u, v);
    (v.iter().zip(u).map(|(vi, ui)| vi - ui * c).collect(), c)
}

/// Angle between the rays of unit vectors `u` and `v`. Taken from both the
/// overlap and the orthogonal residual so that small angles keep full
/// relative precision.
fn ray_angle(u: &[C64], v: &[C64]) -> f64 {
    let (r, c) = split(u, v);
    vector::norm(&r).atan2(c.norm())
}

fn run_sequence(chain: &MeasurementChain, order: &[usize], opts: &ChainOptions) -> Result<ChainTrace> {
    match chain.initial() {
        InitialState::Pure(psi) => run_pure(chain, psi, order, opts),
        InitialState::Mixed(rho) => run_mixed(chain, rho, order, opts),
    }
}

fn run_pure(
    chain: &MeasurementChain,
    psi: &PureState,
    order: &[usize],
    opts: &ChainOptions,
) -> Result<ChainTrace> {
    let psi0 = psi.amplitudes();
    let mut current = psi0.to_vec();
    let mut unnormalized = psi0.to_vec();
    let mut step_probabilities = Vec::with_capacity(order.len());
    let mut epsilons = Vec::with_capacity(order.len());
    let mut intermediate = opts.keep_intermediate.then(Vec::new);
    let mut angles = Some(Angles::default());

    for (step, &k) in order.iter().enumerate() {
        let p = &chain.projectors()[k];
        let next = p.apply(&current)?;
        let prob = vector::norm_sqr(&next);
        if prob <= opts.prob_floor {
            return Err(Error::VanishingBranch {
                step: step + 1,
                probability: prob,
                floor: opts.prob_floor,
                partial_probabilities: step_probabilities,
            });
        }
        let next: Vec<C64> = next.iter().map(|x| x / prob.sqrt()).collect();
        unnormalized = p.apply(&unnormalized)?;

        let direct = p.apply(psi0)?;
        let direct_prob = vector::norm_sqr(&direct);
        // ε = ‖(I - P)ψ‖², accurate where 1 - ‖Pψ‖² would cancel.
        let miss: Vec<C64> = psi0.iter().zip(&direct).map(|(a, b)| a - b).collect();
        let eps = vector::norm_sqr(&miss);
        epsilons.push(eps);

        if let Some(a) = angles.as_mut() {
            if direct_prob <= opts.prob_floor {
                angles = None;
            } else {
                let primed: Vec<C64> = direct.iter().map(|x| x / direct_prob.sqrt()).collect();
                a.theta.push(ray_angle(&current, &next));
                a.alpha.push(eps.sqrt().atan2(direct_prob.sqrt()));
                a.beta.push(ray_angle(psi0, &next));
                a.gamma.push(ray_angle(&primed, &next));
            }
        }

        step_probabilities.push(prob.min(1.0));
        current = next;
        if let Some(states) = intermediate.as_mut() {
            states.push(PureState::normalized(&current)?.density());
        }
    }

    let final_pure = PureState::normalized(&current)?;
    let (residual, _) = split(psi0, &current);
    Ok(ChainTrace {
        success_probability: step_probabilities.iter().product(),
        success_direct: vector::norm_sqr(&unnormalized),
        // For pure states ‖ψψ† - φφ†‖_1 = 2·sqrt(1 - |⟨ψ|φ⟩|²), the norm of
        // the component of φ orthogonal to ψ.
        trace_distance: 2.0 * vector::norm(&residual),
        final_state: final_pure.density(),
        step_probabilities,
        epsilons,
        angles,
        intermediate_states: intermediate,
        initial_trace: 1.0,
    })
}

fn run_mixed(
    chain: &MeasurementChain,
    rho: &DensityOperator,
    order: &[usize],
    opts: &ChainOptions,
) -> Result<ChainTrace> {
    let d = chain.dim();
    let initial_trace = rho.trace();
    let normalized = DensityOperator::from_unnormalized(rho.matrix().clone())?;
    let mut current = normalized.clone();
    let mut product = ComplexMatrix::identity(d);
    let mut step_probabilities = Vec::with_capacity(order.len());
    let mut epsilons = Vec::with_capacity(order.len());
    let mut intermediate = opts.keep_intermediate.then(Vec::new);

    for (step, &k) in order.iter().enumerate() {
        let p = &chain.projectors()[k];
        epsilons.push(p.complement().probability(rho)?.max(0.0));
        let (next, prob) = match apply_projector_with_floor(p, &current, opts.prob_floor) {
            Ok(v) => v,
            Err(Error::VanishingBranch { probability, floor, .. }) => {
                return Err(Error::VanishingBranch {
                    step: step + 1,
                    probability,
                    floor,
                    partial_probabilities: step_probabilities,
                })
            }
            Err(e) => return Err(e),
        };
        step_probabilities.push(prob.min(1.0));
        product = p.matrix().matmul(&product)?;
        current = next;
        if let Some(states) = intermediate.as_mut() {
            states.push(current.clone());
        }
    }

    // Products P_1⋯P_N⋯P_1 are formed as A†A with A = P_N⋯P_1.
    let gram = product.dagger().matmul(&product)?;
    let success_direct = rho.expectation(&gram)?;
    let diff = normalized.matrix() - current.matrix();
    Ok(ChainTrace {
        success_probability: initial_trace * step_probabilities.iter().product::<f64>(),
        success_direct,
        trace_distance: diff.hermitian_part().trace_norm()?,
        final_state: current,
        step_probabilities,
        epsilons,
        angles: None,
        intermediate_states: intermediate,
        initial_trace,
    })
}

/// Instance file: `{"rho": <matrix>, "projectors": [<matrix>, ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainInstance {
    pub rho: DensityOperator,
    pub projectors: Vec<Projector>,
}

impl ChainInstance {
    pub fn from_chain(chain: &MeasurementChain) -> Self {
        ChainInstance {
            rho: chain.initial.density(),
            projectors: chain.projectors.clone(),
        }
    }

    /// A pure chain when `rho` has rank one, otherwise a mixed one.
    pub fn to_chain(&self) -> Result<MeasurementChain> {
        match self.rho.as_pure() {
            Some(psi) => MeasurementChain::pure(psi, self.projectors.clone()),
            None => MeasurementChain::mixed(self.rho.clone(), self.projectors.clone()),
        }
    }

    /// Like [`ChainInstance::to_chain`] but refuses mixed states.
    pub fn to_pure_chain(&self) -> Result<MeasurementChain> {
        let psi = self.rho.as_pure().ok_or_else(|| {
            Error::Precondition(
                "angles are defined for pure initial states; rerun with --purify to measure \
                 a purification of this mixed state"
                    .into(),
            )
        })?;
        MeasurementChain::pure(psi, self.projectors.clone())
    }
}

/// Serialized form used by the `angles` command.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnglesReport {
    pub theta: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub step_prob: Vec<f64>,
    pub epsilons: Vec<f64>,
    pub success: f64,
    pub trace_distance: f64,
    pub residuals: AngleResiduals,
}

/// Per-step residuals of the trigonometric identities.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AngleResiduals {
    /// `cos β_i - cos α_i cos γ_i`.
    pub beta_product: Vec<f64>,
    /// `cos θ_i cos α_i cos γ_i + sin θ_i sin α_i - cos β_{i-1}` (non-negative).
    pub beta_previous: Vec<f64>,
    /// `cos²θ_i - stepProb_i`.
    pub step_probability: Vec<f64>,
    /// `sin²α_i - ε_i`.
    pub epsilon: Vec<f64>,
}

impl AngleResiduals {
    pub fn from_trace(trace: &ChainTrace) -> Option<Self> {
        let a = trace.angles.as_ref()?;
        let n = a.theta.len();
        let beta_prev = |i: usize| if i == 0 { 0.0 } else { a.beta[i - 1] };
        Some(AngleResiduals {
            beta_product: (0..n)
                .map(|i| a.beta[i].cos() - a.alpha[i].cos() * a.gamma[i].cos())
                .collect(),
            beta_previous: (0..n)
                .map(|i| {
                    a.theta[i].cos() * a.alpha[i].cos() * a.gamma[i].cos()
                        + a.theta[i].sin() * a.alpha[i].sin()
                        - beta_prev(i).cos()
                })
                .collect(),
            step_probability: (0..n)
                .map(|i| a.theta[i].cos().powi(2) - trace.step_probabilities[i])
                .collect(),
            epsilon: (0..n)
                .map(|i| a.alpha[i].sin().powi(2) - trace.epsilons[i])
                .collect(),
        })
    }
}

impl AnglesReport {
    pub fn from_trace(trace: &ChainTrace) -> Option<Self> {
        let residuals = AngleResiduals::from_trace(trace)?;
        let a = trace.angles.clone()?;
        Some(AnglesReport {
            theta: a.theta,
            alpha: a.alpha,
            beta: a.beta,
            gamma: a.gamma,
            step_prob: trace.step_probabilities.clone(),
            epsilons: trace.epsilons.clone(),
            success: trace.success_probability,
            trace_distance: trace.trace_distance,
            residuals,
        })
    }
}

/// Projector onto `cos t |0⟩ + sin t |1⟩` in a qubit.
pub fn qubit_direction_projector(t: f64) -> Projector {
    let v = [C64::new(t.cos(), 0.0), C64::new(t.sin(), 0.0)];
    Projector::rank_one(&PureState::normalized(&v).expect("unit vector"))
}

/// Qubit chain from `|0⟩` through projectors at angles `iπ/(2N)`,
/// `i = 1..=N`; success probability `cos^{2N}(π/(2N))`.
pub fn equiangular_chain(n: usize) -> Result<MeasurementChain> {
    let step = std::f64::consts::FRAC_PI_2 / n as f64;
    let projectors = (1..=n).map(|i| qubit_direction_projector(step * i as f64)).collect();
    MeasurementChain::pure(PureState::basis(2, 0)?, projectors)
}
