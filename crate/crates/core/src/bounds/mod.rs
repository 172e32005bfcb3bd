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

//! Inequality checkers.
//!
//! Each checker evaluates both sides of one inequality on a concrete
//! instance and returns a [`BoundReport`] whose `margin` is positive when
//! the inequality holds with slack. Operator inequalities `X ⪰ Y` are
//! checked through the smallest eigenvalue of `X - Y`.

mod hunt;
mod lemma2;

pub use hunt::{
    generate_and_check, hunt_violations, hunt_violations_with, sen_t1b_crossover, GeneratorConfig,
    HistogramBin, HuntSummary, Violation,
};
pub use lemma2::{
    appendix_b_w, check_appendix_b_w, check_lemma2, check_lemma2_angles, lemma2_a, lemma2_g,
    lemma2_minimizer_scan, lemma2_minimizer_x, minimizer_scan_suite, AngleVector, MinimizerScan,
    ScanSuite,
};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{VALIDATION_TOL, VIOLATION_TOL};
use crate::numkernel::{vector, ComplexMatrix, C64};
use crate::qstate::{DensityOperator, Effect, Projector, PureState};
use crate::seqchain::{run_chain, BackAndForthTrace, ChainTrace, MeasurementChain};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundId {
    T1a,
    T1b,
    Corollary1,
    Sen,
    Wilde4th,
    Lemma1Step,
    Lemma2Step,
    AppendixBW,
    HayashiNagaoka,
    PovmRepeat,
}

impl BoundId {
    pub const ALL: [BoundId; 10] = [
        BoundId::T1a,
        BoundId::T1b,
        BoundId::Corollary1,
        BoundId::Sen,
        BoundId::Wilde4th,
        BoundId::Lemma1Step,
        BoundId::Lemma2Step,
        BoundId::AppendixBW,
        BoundId::HayashiNagaoka,
        BoundId::PovmRepeat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundId::T1a => "T1A",
            BoundId::T1b => "T1B",
            BoundId::Corollary1 => "COROLLARY1",
            BoundId::Sen => "SEN",
            BoundId::Wilde4th => "WILDE4TH",
            BoundId::Lemma1Step => "LEMMA1_STEP",
            BoundId::Lemma2Step => "LEMMA2_STEP",
            BoundId::AppendixBW => "APPENDIX_B_W",
            BoundId::HayashiNagaoka => "HAYASHI_NAGAOKA",
            BoundId::PovmRepeat => "POVM_REPEAT",
        }
    }

    /// Violation threshold applied to `margin`.
    pub fn tolerance(self) -> f64 {
        VIOLATION_TOL
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase().replace('-', "_");
        let alias = match up.as_str() {
            "LEMMA1" => "LEMMA1_STEP",
            "LEMMA2" => "LEMMA2_STEP",
            "APPENDIXB" | "APPENDIX_B" => "APPENDIX_B_W",
            "HN" => "HAYASHI_NAGAOKA",
            other => other,
        };
        BoundId::ALL
            .into_iter()
            .find(|b| b.name() == alias)
            .ok_or_else(|| Error::validation(format!("unknown bound id {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Checked,
    /// The right-hand side is trivially satisfied (for instance negative).
    Vacuous,
    /// The instance does not meet the bound's precondition.
    Skipped,
}

/// One inequality instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound: BoundId,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs`, oriented so a positive value means the bound holds.
    pub margin: f64,
    pub satisfied: bool,
    pub status: Status,
    pub tolerance: f64,
    pub meta: BTreeMap<String, Value>,
}

impl BoundReport {
    pub fn new(bound: BoundId, lhs: f64, rhs: f64) -> Self {
        let tolerance = bound.tolerance();
        let margin = lhs - rhs;
        BoundReport {
            bound,
            lhs,
            rhs,
            margin,
            satisfied: margin >= -tolerance,
            status: Status::Checked,
            tolerance,
            meta: BTreeMap::new(),
        }
    }

    pub fn skipped(bound: BoundId, reason: &str) -> Self {
        let mut r = BoundReport::new(bound, 0.0, 0.0);
        r.status = Status::Skipped;
        r.meta.insert("skipReason".into(), json!(reason));
        r
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.meta.insert(key.to_string(), value.into());
        self
    }

    pub fn is_checked(&self) -> bool {
        self.status != Status::Skipped
    }

    /// Recomputes `margin` and `satisfied` after `lhs`/`rhs` were edited.
    pub fn refresh(&mut self) {
        self.margin = self.lhs - self.rhs;
        self.satisfied = self.margin >= -self.tolerance;
    }
}

fn chain_meta(r: BoundReport, trace: &ChainTrace) -> BoundReport {
    r.with("d", trace.final_state.dim())
        .with("N", trace.len())
        .with("sumEps", trace.epsilon_sum())
}

/// `D(ρ, ρ_N) <= 2 sqrt(Σ ε_i)`.
pub fn check_t1a(trace: &ChainTrace) -> BoundReport {
    let bound = 2.0 * trace.epsilon_sum().sqrt();
    chain_meta(BoundReport::new(BoundId::T1a, bound, trace.trace_distance), trace)
}

/// `tr(P_N⋯P_1 ρ P_1⋯P_N) >= 1 - 4 Σ ε_i`.
///
/// Reported as vacuous when the right side is negative. The metadata records
/// whether equality was observed and whether every `ε_i` vanished, so the
/// "equality only if all ε_i = 0" direction can be audited.
pub fn check_t1b(trace: &ChainTrace) -> BoundReport {
    let sum = trace.epsilon_sum();
    let mut r = BoundReport::new(BoundId::T1b, trace.success_probability, 1.0 - 4.0 * sum);
    if r.rhs < 0.0 {
        r.status = Status::Vacuous;
    }
    let equality = r.margin.abs() <= VIOLATION_TOL;
    let all_zero = trace.epsilons.iter().all(|&e| e <= VIOLATION_TOL);
    chain_meta(r, trace)
        .with("equalityObserved", equality)
        .with("allEpsZero", all_zero)
}

/// `tr(P_N⋯P_1 ρ P_1⋯P_N) >= tr ρ - 2 sqrt(Σ tr(P̄_i ρ))`.
pub fn check_sen(trace: &ChainTrace) -> BoundReport {
    let sum = trace.epsilon_sum();
    let mut r = BoundReport::new(
        BoundId::Sen,
        trace.success_probability,
        trace.initial_trace - 2.0 * sum.sqrt(),
    );
    if r.rhs < 0.0 {
        r.status = Status::Vacuous;
    }
    chain_meta(r, trace).with("t1bRhs", 1.0 - 4.0 * sum)
}

/// The fourth-root distance bound for the back-and-forth schedule:
/// `D(ρ, ρ_final) <= (Σ ε_i)^{1/4}`. The forward-only (1-a) margin is carried
/// alongside for comparison.
pub fn check_wilde4th(bf: &BackAndForthTrace) -> BoundReport {
    let sum: f64 = bf.forward_epsilons.iter().sum();
    let t1a_margin = 2.0 * sum.sqrt() - bf.forward_trace_distance;
    BoundReport::new(BoundId::Wilde4th, sum.powf(0.25), bf.trace.trace_distance)
        .with("N", bf.forward_epsilons.len())
        .with("sumEps", sum)
        .with("forwardTraceDistance", bf.forward_trace_distance)
        .with("forwardT1aBound", 2.0 * sum.sqrt())
        .with("forwardT1aMargin", t1a_margin)
}

/// `sin²β_i <= sin²β_{i-1} + sin²α_i` for each step of a pure run.
pub fn check_lemma1(trace: &ChainTrace) -> Result<Vec<BoundReport>> {
    let a = trace
        .angles
        .as_ref()
        .ok_or_else(|| Error::Precondition("lemma 1 needs a pure-state trace with angles".into()))?;
    Ok((0..a.beta.len())
        .map(|i| {
            let prev = if i == 0 { 0.0 } else { a.beta[i - 1].sin().powi(2) };
            BoundReport::new(
                BoundId::Lemma1Step,
                prev + a.alpha[i].sin().powi(2),
                a.beta[i].sin().powi(2),
            )
            .with("step", i + 1)
        })
        .collect())
}

/// `A = P_N⋯P_1` for projectors given in measurement order.
fn chain_operator(projectors: &[Projector]) -> Result<ComplexMatrix> {
    let d = projectors
        .first()
        .map(Projector::dim)
        .ok_or_else(|| Error::validation("corollary 1: at least one projector"))?;
    let mut a = ComplexMatrix::identity(d);
    for p in projectors {
        if p.dim() != d {
            return Err(Error::shape(format!(
                "corollary 1: projector dims {} vs {d}",
                p.dim()
            )));
        }
        a = p.matrix().matmul(&a)?;
    }
    Ok(a)
}

/// `P_1⋯P_N⋯P_1` built as `A†A` so it is Hermitian PSD to round-off.
pub fn sandwich_operator(projectors: &[Projector]) -> Result<ComplexMatrix> {
    let a = chain_operator(projectors)?;
    Ok(a.dagger().matmul(&a)?.hermitian_part())
}

/// `P_1⋯P_N⋯P_1 ⪰ I - 4 Σ (I - P_i)`, via the smallest eigenvalue of the
/// difference.
pub fn check_corollary1(projectors: &[Projector]) -> Result<BoundReport> {
    let sandwich = sandwich_operator(projectors)?;
    let d = sandwich.rows();
    let mut diff = &sandwich - &ComplexMatrix::identity(d);
    for p in projectors {
        diff.add_scaled(p.complement().matrix(), 4.0);
    }
    let min = diff.hermitian_part().min_eigenvalue()?;
    Ok(BoundReport::new(BoundId::Corollary1, min, 0.0)
        .with("d", d)
        .with("N", projectors.len()))
}

/// `|⟨ν|P_1⋯P_N⋯P_1|ν⟩/⟨ν|ν⟩ - success of the chain on ν/‖ν‖|`.
///
/// Zero up to round-off; links the operator form to the chain form.
pub fn corollary1_state_residual(projectors: &[Projector], nu: &[C64]) -> Result<f64> {
    let sandwich = sandwich_operator(projectors)?;
    let norm2 = vector::norm_sqr(nu);
    let quad = vector::inner(nu, &sandwich.mul_vec(nu)?).re / norm2;
    let psi = PureState::normalized(nu)?;
    let success = match run_chain(&MeasurementChain::pure(psi, projectors.to_vec())?) {
        Ok(t) => t.success_probability,
        Err(Error::VanishingBranch { .. }) => 0.0,
        Err(e) => return Err(e),
    };
    Ok((quad - success).abs())
}

/// `(S+T)^{-1/2} S (S+T)^{-1/2} ⪰ I - 2(I - S) - 4T` for `0 ⪯ S ⪯ I`,
/// `T ⪰ 0`. The inverse square root is taken on the support of `S + T`.
pub fn check_hayashi_nagaoka(s: &Effect, t: &ComplexMatrix) -> Result<BoundReport> {
    let d = s.dim();
    if t.rows() != d || t.cols() != d {
        return Err(Error::shape(format!(
            "hayashi-nagaoka: T is {}x{}, S is {d}x{d}",
            t.rows(),
            t.cols()
        )));
    }
    if !t.is_hermitian(VALIDATION_TOL) {
        return Err(Error::validation("hayashi-nagaoka: T Hermitian"));
    }
    let t = t.hermitian_part();
    let t_min = t.min_eigenvalue()?;
    if t_min < -VALIDATION_TOL {
        return Err(Error::validation(format!(
            "hayashi-nagaoka: T positive semidefinite (min eigenvalue {t_min:e})"
        )));
    }
    let id = ComplexMatrix::identity(d);
    let sum = (s.matrix() + &t).hermitian_part();
    let eig = sum.hermitian_eig()?;
    let cutoff = 1e-12 * eig.max().abs().max(1.0);
    let inv_sqrt = eig.map(|l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 });
    let lhs_op = inv_sqrt.matmul(s.matrix())?.matmul(&inv_sqrt)?;
    let mut diff = &lhs_op - &id;
    diff.add_scaled(&(&id - s.matrix()), 2.0);
    diff.add_scaled(&t, 4.0);
    let min = diff.hermitian_part().min_eigenvalue()?;
    Ok(BoundReport::new(BoundId::HayashiNagaoka, min, 0.0).with("d", d))
}

/// `tr(E^m ρ) >= 1 - m ε` with `ε = 1 - tr(E ρ)`.
pub fn check_povm_repeat(e: &Effect, rho: &DensityOperator, m: u32) -> Result<BoundReport> {
    if m == 0 {
        return Err(Error::validation("povm repeat: m >= 1"));
    }
    if e.dim() != rho.dim() {
        return Err(Error::shape("povm repeat: effect and state dimensions differ"));
    }
    let eps = 1.0 - rho.expectation(e.matrix())?;
    let lhs = rho.expectation(&e.power(m)?)?;
    Ok(BoundReport::new(BoundId::PovmRepeat, lhs, 1.0 - m as f64 * eps)
        .with("m", m)
        .with("eps", eps)
        .with("d", e.dim()))
}

/// Right-hand sides of the (1-b) and Sen bounds at `Σε = x`, in that order.
pub fn regime_rhs(sum_eps: f64) -> (f64, f64) {
    (1.0 - 4.0 * sum_eps, 1.0 - 2.0 * sum_eps.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::c64;
    use crate::qstate::{random_effect, random_projector, random_psd, stream};
    use crate::seqchain::{qubit_direction_projector, run_back_and_forth, extract_angles};
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    fn zero() -> PureState {
        PureState::basis(2, 0).unwrap()
    }

    fn qubit_trace(angles: &[f64]) -> ChainTrace {
        let ps = angles.iter().map(|&t| qubit_direction_projector(t)).collect();
        extract_angles(&MeasurementChain::pure(zero(), ps).unwrap()).unwrap()
    }

    #[test]
    fn bound_id_names_round_trip() {
        for b in BoundId::ALL {
            assert_eq!(b.name().parse::<BoundId>().unwrap(), b);
            assert_eq!(serde_json::to_value(b).unwrap(), json!(b.name()));
        }
        assert_eq!("lemma2".parse::<BoundId>().unwrap(), BoundId::Lemma2Step);
        assert!("nope".parse::<BoundId>().is_err());
    }

    #[test]
    fn t1a_equality_and_slack() {
        let r = check_t1a(&qubit_trace(&[0.0, 0.0]));
        assert_eq!(r.margin, 0.0);
        let r = check_t1a(&qubit_trace(&[FRAC_PI_4]));
        assert!(r.margin.abs() < 1e-12);
        assert!((r.rhs - 2f64.sqrt()).abs() < 1e-12);
        let r = check_t1a(&qubit_trace(&[FRAC_PI_8, FRAC_PI_4]));
        assert!((r.rhs - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!((r.lhs - 1.6080380709507174).abs() < 1e-12);
        assert!((r.margin - 0.19382450857762).abs() < 1e-10);
    }

    #[test]
    fn t1b_cases() {
        let r = check_t1b(&qubit_trace(&[0.0]));
        assert_eq!(r.margin, 0.0);
        assert_eq!(r.meta["equalityObserved"], json!(true));
        assert_eq!(r.meta["allEpsZero"], json!(true));
        // ε = 0.1 single step: success 0.9 against 0.6.
        let t = 0.1f64.sqrt().asin();
        let r = check_t1b(&qubit_trace(&[t]));
        assert!((r.lhs - 0.9).abs() < 1e-12);
        assert!((r.margin - 0.3).abs() < 1e-12);
        let r = check_t1b(&qubit_trace(&[FRAC_PI_4, 1.2]));
        assert_eq!(r.status, Status::Vacuous);
        assert!(r.satisfied);
    }

    #[test]
    fn sen_and_regime() {
        let (t1b, sen) = regime_rhs(0.25);
        assert!(t1b.abs() < 1e-15 && sen.abs() < 1e-15);
        let (t1b, sen) = regime_rhs(0.01);
        assert!((t1b - 0.96).abs() < 1e-15);
        assert!((sen - 0.8).abs() < 1e-15);
        let r = check_sen(&qubit_trace(&[0.0]));
        assert_eq!(r.margin, 0.0);
    }

    #[test]
    fn wilde_identity_and_comparison() {
        let chain = MeasurementChain::pure(zero(), vec![Projector::identity(2); 2]).unwrap();
        let r = check_wilde4th(&run_back_and_forth(&chain).unwrap());
        assert_eq!(r.lhs, 0.0);
        assert_eq!(r.rhs, 0.0);
        // At Σε = 0.01 the fourth root bound is 0.316 against 0.2 for (1-a).
        let s: f64 = 0.01;
        assert!((s.powf(0.25) - 0.31622776601683794).abs() < 1e-15);
        assert!((2.0 * s.sqrt() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn lemma1_qubit() {
        let reports = check_lemma1(&qubit_trace(&[FRAC_PI_8, FRAC_PI_4])).unwrap();
        assert_eq!(reports.len(), 2);
        assert!(reports.iter().all(|r| r.margin >= -1e-12));
        let reports = check_lemma1(&qubit_trace(&[0.0, 0.0])).unwrap();
        assert!(reports.iter().all(|r| r.margin.abs() < 1e-15));
    }

    #[test]
    fn corollary1_small_cases() {
        let r = check_corollary1(&vec![Projector::identity(3); 4]).unwrap();
        assert!(r.lhs.abs() < 1e-12);
        // N = 1: P - I + 4(I - P) = 3(I - P) has spectrum {0 on range P, 3 on its complement}.
        let p = qubit_direction_projector(0.7);
        let r = check_corollary1(std::slice::from_ref(&p)).unwrap();
        assert!(r.lhs.abs() < 1e-12);
        let mut rng = stream(1, 1);
        for _ in 0..200 {
            let ps: Vec<Projector> = (0..3).map(|_| random_projector(4, 2, &mut rng).unwrap()).collect();
            assert!(check_corollary1(&ps).unwrap().margin >= -1e-9);
            let nu: Vec<C64> = (0..4).map(|k| c64(k as f64 + 0.5, 0.3)).collect();
            assert!(corollary1_state_residual(&ps, &nu).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn hayashi_nagaoka_trivial_and_diagonal() {
        let s = Effect::new(ComplexMatrix::identity(3)).unwrap();
        let r = check_hayashi_nagaoka(&s, &ComplexMatrix::zeros(3, 3)).unwrap();
        assert!(r.lhs.abs() < 1e-12);

        // Commuting case: per entry s/(s+t) - 1 + 2(1-s) + 4t.
        let sv = [0.9, 0.2, 0.5, 0.0];
        let tv = [0.05, 0.7, 0.0, 0.3];
        let s = Effect::new(ComplexMatrix::from_diag(&sv)).unwrap();
        let r = check_hayashi_nagaoka(&s, &ComplexMatrix::from_diag(&tv)).unwrap();
        let oracle = sv
            .iter()
            .zip(&tv)
            .map(|(&s, &t)| {
                let lead = if s + t > 0.0 { s / (s + t) } else { 0.0 };
                lead - 1.0 + 2.0 * (1.0 - s) + 4.0 * t
            })
            .fold(f64::INFINITY, f64::min);
        assert!((r.lhs - oracle).abs() < 1e-12, "{} vs {oracle}", r.lhs);

        let mut rng = stream(2, 2);
        for _ in 0..300 {
            let s = random_effect(4, &mut rng).unwrap();
            let t = random_psd(4, 2, &mut rng).unwrap().scale_real(0.3);
            assert!(check_hayashi_nagaoka(&s, &t).unwrap().margin >= -1e-8);
        }
        let bad = ComplexMatrix::from_diag(&[-1.0, 0.0, 0.0, 0.0]);
        let s = random_effect(4, &mut rng).unwrap();
        assert!(matches!(check_hayashi_nagaoka(&s, &bad), Err(Error::Validation(_))));
    }

    #[test]
    fn povm_repeat_cases() {
        let rho = DensityOperator::from_diag(&[0.5, 0.5]).unwrap();
        let r = check_povm_repeat(&Effect::new(ComplexMatrix::identity(2)).unwrap(), &rho, 4).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-15 && (r.rhs - 1.0).abs() < 1e-15);
        let e = Effect::new(ComplexMatrix::identity(2).scale_real(0.9)).unwrap();
        let r = check_povm_repeat(&e, &rho, 3).unwrap();
        assert!((r.lhs - 0.729).abs() < 1e-12);
        assert!((r.rhs - 0.7).abs() < 1e-12);
        assert!(check_povm_repeat(&e, &rho, 0).is_err());
    }
}
