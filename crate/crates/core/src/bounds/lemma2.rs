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

//! The `a_k` recursion, the `g(x)` minimization behind it, and the `W`
//! quantity. All of these are trigonometric statements on angle vectors and
//! can be exercised without any quantum instance.

use rand::Rng;
use serde::Serialize;

use super::{BoundId, BoundReport};
use crate::seqchain::{Angles, ChainTrace};
use crate::{Error, Result};

/// `α_1..α_N`, `β_1..β_N` (with `β_0 = 0` implicit) and `θ_1..θ_N`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AngleVector {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub thetas: Vec<f64>,
}

impl AngleVector {
    pub fn from_angles(a: &Angles) -> Self {
        AngleVector {
            alphas: a.alpha.clone(),
            betas: a.beta.clone(),
            thetas: a.theta.clone(),
        }
    }

    /// Random vector with `Σ sin²α_i = total` and each `sin²β_j` drawn below
    /// `min(Σ_{i<=j} sin²α_i, 1/2)`. Thetas are left empty.
    pub fn random<R: Rng + ?Sized>(n: usize, total: f64, rng: &mut R) -> Self {
        let weights: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
        let wsum: f64 = weights.iter().sum();
        let alphas: Vec<f64> = weights.iter().map(|w| (total * w / wsum).sqrt().asin()).collect();
        let mut acc = 0.0;
        let betas = alphas
            .iter()
            .map(|a| {
                acc += a.sin().powi(2);
                (rng.random::<f64>() * acc.min(0.5)).sqrt().asin()
            })
            .collect();
        AngleVector {
            alphas,
            betas,
            thetas: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// `α_i`, 1-based.
    fn alpha(&self, i: usize) -> f64 {
        self.alphas[i - 1]
    }

    /// `β_k` with `β_0 = 0`.
    fn beta(&self, k: usize) -> Result<f64> {
        if k == 0 {
            return Ok(0.0);
        }
        self.betas
            .get(k - 1)
            .copied()
            .ok_or_else(|| Error::validation(format!("angle vector has no beta_{k}")))
    }

    /// `Σ_{i=a}^{b} sin²α_i`, zero when empty.
    fn s(&self, a: usize, b: usize) -> f64 {
        (a.max(1)..=b.min(self.len())).map(|i| self.alpha(i).sin().powi(2)).sum()
    }

    pub fn sum_sin2_alpha(&self) -> f64 {
        self.s(1, self.len())
    }
}

/// `a_k` for `0 <= k <= N-1`.
pub fn lemma2_a(k: usize, av: &AngleVector) -> Result<f64> {
    let n = av.len();
    if n == 0 || k >= n {
        return Err(Error::validation(format!("lemma2_a: need 0 <= k < N = {n}, got {k}")));
    }
    let beta = av.beta(k)?;
    let s_n = av.s(k + 1, n);
    let s_n1 = av.s(k + 1, n - 1);
    let num = av.alpha(n).cos() * beta.cos() - s_n.sqrt() * (beta.sin().powi(2) + s_n1).sqrt();
    Ok(num / (1.0 + s_n1))
}

/// `cos θ_k · a_k >= a_{k-1}` for `k = 1..N-1`, followed by the chained
/// consequence `Π cos θ_i >= a_0` (metadata `step = "chain"`).
///
/// Skipped when `Σ sin²α_i > 1/2`.
pub fn check_lemma2_angles(av: &AngleVector) -> Result<Vec<BoundReport>> {
    let n = av.len();
    let total = av.sum_sin2_alpha();
    if total > 0.5 {
        return Ok(vec![BoundReport::skipped(BoundId::Lemma2Step, "sum of sin^2 alpha exceeds 1/2")
            .with("sumEps", total)]);
    }
    if av.thetas.len() < n {
        return Err(Error::validation("check_lemma2: one theta per step"));
    }
    let a: Vec<f64> = (0..n).map(|k| lemma2_a(k, av)).collect::<Result<_>>()?;
    let mut out: Vec<BoundReport> = (1..n)
        .map(|k| {
            BoundReport::new(BoundId::Lemma2Step, av.thetas[k - 1].cos() * a[k], a[k - 1])
                .with("step", k)
                .with("N", n)
                .with("sumEps", total)
        })
        .collect();
    let prod: f64 = av.thetas[..n].iter().map(|t| t.cos()).product();
    out.push(
        BoundReport::new(BoundId::Lemma2Step, prod, a[0])
            .with("step", "chain")
            .with("N", n)
            .with("sumEps", total)
            .with("a0Floor", (1.0 - total) / (1.0 + total)),
    );
    Ok(out)
}

/// [`check_lemma2_angles`] on the angles of a pure-state trace.
pub fn check_lemma2(trace: &ChainTrace) -> Result<Vec<BoundReport>> {
    let angles = trace
        .angles
        .as_ref()
        .ok_or_else(|| Error::Precondition("lemma 2 needs a pure-state trace with angles".into()))?;
    if trace.epsilon_sum() > 0.5 {
        return Ok(vec![BoundReport::skipped(BoundId::Lemma2Step, "sum of epsilons exceeds 1/2")
            .with("sumEps", trace.epsilon_sum())]);
    }
    check_lemma2_angles(&AngleVector::from_angles(angles))
}

fn check_scan_index(k: usize, av: &AngleVector) -> Result<()> {
    if k == 0 || k >= av.len() {
        return Err(Error::validation(format!(
            "minimizer scan: need 1 <= k < N = {}, got {k}",
            av.len()
        )));
    }
    Ok(())
}

/// `g(x)` at step `k`, or `None` outside its domain (negative radicand or
/// `cos β_{k-1} - x sin α_k < 0`).
pub fn lemma2_g(x: f64, k: usize, av: &AngleVector) -> Result<Option<f64>> {
    check_scan_index(k, av)?;
    let n = av.len();
    let b = av.beta(k - 1)?;
    let (sb, cb) = b.sin_cos();
    let sa = av.alpha(k).sin();
    let can = av.alpha(n).cos();
    let rad = -(1.0 + av.s(k, n - 1)) * x * x + 2.0 * x * cb * sa + av.s(k + 1, n - 1) + sb * sb;
    if rad < 0.0 || cb - x * sa < 0.0 {
        return Ok(None);
    }
    let num = can * cb - x * can * sa - av.s(k + 1, n).sqrt() * rad.sqrt();
    Ok(Some(num / (1.0 + av.s(k + 1, n - 1))))
}

/// Closed-form stationary point of `g`, or `None` when `Σ_{i=k}^N sin²α_i`
/// vanishes and `g` is flat.
pub fn lemma2_minimizer_x(k: usize, av: &AngleVector) -> Result<Option<f64>> {
    check_scan_index(k, av)?;
    let n = av.len();
    let a = av.s(k, n);
    if a <= 0.0 {
        return Ok(None);
    }
    let b = av.beta(k - 1)?;
    let bb = b.sin().powi(2) + av.s(k, n - 1);
    let sa = av.alpha(k).sin();
    let num = b.cos() * sa * a + sa * av.alpha(n).cos() * a.sqrt() * bb.sqrt();
    Ok(Some(num / ((1.0 + av.s(k, n - 1)) * a)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MinimizerScan {
    pub k: usize,
    pub grid_size: usize,
    pub feasible_points: usize,
    pub grid_min: f64,
    pub grid_argmin: f64,
    pub a_prev: f64,
    pub x_star: Option<f64>,
    pub g_at_x_star: Option<f64>,
    /// `x*` lies in `[0, 1]` and in the domain of `g`.
    pub x_star_in_domain: bool,
}

impl MinimizerScan {
    /// `grid_min >= a_{k-1} - tol`.
    pub fn grid_holds(&self, tol: f64) -> bool {
        self.grid_min >= self.a_prev - tol
    }

    /// `|g(x*) - a_{k-1}|` when `x*` is usable.
    pub fn x_star_residual(&self) -> Option<f64> {
        match (self.x_star_in_domain, self.g_at_x_star) {
            (true, Some(g)) => Some((g - self.a_prev).abs()),
            _ => None,
        }
    }
}

/// Evaluates `g` on `grid` uniformly spaced points of `[0, 1]` and compares
/// the minimum with `a_{k-1}` and with the closed-form minimizer.
pub fn lemma2_minimizer_scan(k: usize, av: &AngleVector, grid: usize) -> Result<MinimizerScan> {
    check_scan_index(k, av)?;
    if grid < 2 {
        return Err(Error::validation("minimizer scan: grid of at least 2 points"));
    }
    let mut best = (f64::INFINITY, 0.0);
    let mut feasible = 0;
    for i in 0..grid {
        let x = i as f64 / (grid - 1) as f64;
        if let Some(g) = lemma2_g(x, k, av)? {
            feasible += 1;
            if g < best.0 {
                best = (g, x);
            }
        }
    }
    let x_star = lemma2_minimizer_x(k, av)?;
    let g_at_x_star = match x_star {
        Some(x) => lemma2_g(x, k, av)?,
        None => None,
    };
    let in_domain = matches!(x_star, Some(x) if (0.0..=1.0).contains(&x)) && g_at_x_star.is_some();
    Ok(MinimizerScan {
        k,
        grid_size: grid,
        feasible_points: feasible,
        grid_min: best.0,
        grid_argmin: best.1,
        a_prev: lemma2_a(k - 1, av)?,
        x_star,
        g_at_x_star,
        x_star_in_domain: in_domain,
    })
}

/// Aggregate of [`lemma2_minimizer_scan`] over random angle vectors.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanSuite {
    pub vectors: usize,
    pub grid: usize,
    pub seed: u64,
    /// Smallest `grid_min - a_{k-1}` seen.
    pub min_gap: f64,
    pub grid_holds: bool,
    pub x_star_in_domain: usize,
    /// Scans whose closed-form `x*` exceeded one.
    pub x_star_above_one: usize,
    pub max_x_star_residual: f64,
    /// Largest `|grid argmin - x*|` over in-domain cases.
    pub max_argmin_offset: f64,
}

/// Scans one random `(angle vector, k)` pair per stream index `0..vectors`.
/// Vectors have `N` in `2..=8` and `Σ sin²α_i` uniform in `(0, 1/2]`.
pub fn minimizer_scan_suite(vectors: usize, grid: usize, seed: u64, tol: f64) -> Result<ScanSuite> {
    let mut suite = ScanSuite {
        vectors,
        grid,
        seed,
        min_gap: f64::INFINITY,
        grid_holds: true,
        x_star_in_domain: 0,
        x_star_above_one: 0,
        max_x_star_residual: 0.0,
        max_argmin_offset: 0.0,
    };
    for i in 0..vectors {
        let mut rng = crate::qstate::stream(seed, i as u64);
        let n = rng.random_range(2..=8);
        let total = 0.5 * (1.0 - rng.random::<f64>());
        let av = AngleVector::random(n, total, &mut rng);
        let k = rng.random_range(1..n);
        let scan = lemma2_minimizer_scan(k, &av, grid)?;
        suite.min_gap = suite.min_gap.min(scan.grid_min - scan.a_prev);
        suite.grid_holds &= scan.grid_holds(tol);
        if matches!(scan.x_star, Some(x) if x > 1.0) {
            suite.x_star_above_one += 1;
        }
        if let Some(res) = scan.x_star_residual() {
            suite.x_star_in_domain += 1;
            suite.max_x_star_residual = suite.max_x_star_residual.max(res);
            let offset = (scan.grid_argmin - scan.x_star.unwrap_or(0.0)).abs();
            suite.max_argmin_offset = suite.max_argmin_offset.max(offset);
        }
    }
    Ok(suite)
}

/// `W` in its defining form and in the two-fraction rewrite
/// `x/(1 + √(1 - x/S)) - x/(1 + √(1 - x))`, `x = sin²α_N`, `S = Σ sin²α_i`.
pub fn appendix_b_w(alphas: &[f64]) -> Result<(f64, f64)> {
    let n = alphas.len();
    if n == 0 {
        return Err(Error::validation("appendix B: at least one angle"));
    }
    let s2: Vec<f64> = alphas.iter().map(|a| a.sin().powi(2)).collect();
    let s_n: f64 = s2.iter().sum();
    let s_n1 = s_n - s2[n - 1];
    let w = alphas[n - 1].cos() - (s_n * s_n1).sqrt() - (1.0 - s_n);
    let x = s2[n - 1];
    let rewrite = if x == 0.0 {
        0.0
    } else {
        x / (1.0 + (1.0 - x / s_n).max(0.0).sqrt()) - x / (1.0 + (1.0 - x).sqrt())
    };
    Ok((w, rewrite))
}

/// `W >= 0`, with the rewrite residual in `meta.rewriteResidual`. Skipped
/// when `Σ sin²α_i > 1/2`.
pub fn check_appendix_b_w(alphas: &[f64]) -> Result<BoundReport> {
    let total: f64 = alphas.iter().map(|a| a.sin().powi(2)).sum();
    if total > 0.5 {
        return Ok(BoundReport::skipped(BoundId::AppendixBW, "sum of sin^2 alpha exceeds 1/2")
            .with("sumEps", total));
    }
    let (w, rewrite) = appendix_b_w(alphas)?;
    Ok(BoundReport::new(BoundId::AppendixBW, w, 0.0)
        .with("N", alphas.len())
        .with("sumEps", total)
        .with("rewriteResidual", (w - rewrite).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::stream;

    fn av(alphas: &[f64], betas: &[f64]) -> AngleVector {
        AngleVector {
            alphas: alphas.to_vec(),
            betas: betas.to_vec(),
            thetas: vec![0.0; alphas.len()],
        }
    }

    #[test]
    fn last_a_is_cos_of_sum() {
        let v = av(&[0.1, 0.2, 0.3], &[0.05, 0.15, 0.25]);
        let a = lemma2_a(2, &v).unwrap();
        assert!((a - (0.15f64 + 0.3).cos()).abs() < 1e-14);
        assert!(lemma2_a(3, &v).is_err());
    }

    #[test]
    fn zero_alphas_collapse() {
        let v = av(&[0.0; 4], &[0.1, 0.2, 0.3, 0.4]);
        for k in 0..4 {
            let b = if k == 0 { 0.0 } else { v.betas[k - 1] };
            assert!((lemma2_a(k, &v).unwrap() - f64::cos(b)).abs() < 1e-15);
        }
        let scan = lemma2_minimizer_scan(2, &v, 101).unwrap();
        assert!((scan.grid_min - v.betas[0].cos()).abs() < 1e-15);
        assert!(scan.x_star.is_none());
    }

    #[test]
    fn a0_closed_form() {
        let v = av(&[0.2, 0.1, 0.3], &[0.1, 0.2, 0.3]);
        let s2: Vec<f64> = v.alphas.iter().map(|a| a.sin().powi(2)).collect();
        let sn: f64 = s2.iter().sum();
        let sn1 = sn - s2[2];
        let oracle = (v.alphas[2].cos() - (sn * sn1).sqrt()) / (1.0 + sn1);
        assert!((lemma2_a(0, &v).unwrap() - oracle).abs() < 1e-15);
        assert!(oracle >= (1.0 - sn) / (1.0 + sn));
    }

    #[test]
    fn zero_angles_have_zero_margin() {
        let reports = check_lemma2_angles(&av(&[0.0; 3], &[0.0; 3])).unwrap();
        assert_eq!(reports.len(), 3);
        for r in reports {
            assert!((r.lhs - 1.0).abs() < 1e-15 && (r.rhs - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn skipped_above_half() {
        let big = 0.6f64.sqrt().asin();
        let r = check_lemma2_angles(&av(&[big], &[big])).unwrap();
        assert_eq!(r[0].status, super::super::Status::Skipped);
        let r = check_appendix_b_w(&[big]).unwrap();
        assert_eq!(r.status, super::super::Status::Skipped);
    }

    #[test]
    fn scan_matches_closed_form() {
        let mut rng = stream(31, 0);
        let mut used = 0;
        for _ in 0..50 {
            let n = rng.random_range(2..=6);
            let total = rng.random_range(0.01..=0.5);
            let v = AngleVector::random(n, total, &mut rng);
            let k = rng.random_range(1..n);
            let scan = lemma2_minimizer_scan(k, &v, 4001).unwrap();
            assert!(scan.grid_holds(1e-6), "{scan:?}");
            if let Some(res) = scan.x_star_residual() {
                used += 1;
                assert!(res < 1e-9, "{scan:?}");
                assert!((scan.grid_argmin - scan.x_star.unwrap()).abs() <= 2.0 / 4000.0, "{scan:?}");
            }
        }
        assert!(used > 10);
    }

    #[test]
    fn w_single_angle_and_rewrite() {
        for a in [0.0, 0.1, 0.4, 0.7] {
            let (w, rewrite) = appendix_b_w(&[a]).unwrap();
            let oracle = f64::cos(a) * (1.0 - f64::cos(a));
            assert!((w - oracle).abs() < 1e-15);
            assert!((w - rewrite).abs() < 1e-12);
        }
        let (w, _) = appendix_b_w(&[0.0, 0.0]).unwrap();
        assert_eq!(w, 0.0);
        let mut rng = stream(5, 5);
        for _ in 0..2000 {
            let n = rng.random_range(1..=8);
            let v = AngleVector::random(n, rng.random_range(0.0..=0.5), &mut rng);
            let r = check_appendix_b_w(&v.alphas).unwrap();
            assert!(r.margin >= -1e-10);
            assert!(r.meta["rewriteResidual"].as_f64().unwrap() < 1e-9);
        }
    }
}
