//! Sequential two-multiplier solver for the SVM dual:
//! maximize `sum alpha_i - 1/2 sum alpha_i alpha_j y_i y_j K(x_i, x_j)`
//! subject to `0 <= alpha_i <= C` and `sum alpha_i y_i = 0`.
//!
//! Each step picks the training point with the largest KKT violation and a
//! partner maximizing the error gap (ties broken by a seeded shuffle), then
//! solves the two-variable subproblem analytically. A pass is a block of up
//! to n such steps; after every pass the bias and KKT state are recomputed
//! from scratch so the convergence test never relies on the drifting
//! incremental caches.

use super::kernel::{kernel_eval, KernelSpec};
use super::{FeatureVector, Label, Scaler, SvmConfig, SvmModel, TrainingSet};
use crate::error::{Error, Result};
use crate::rng::Rng;

/// Above this training size the Gram matrix is no longer precomputed and
/// kernel values are evaluated on the fly.
const GRAM_PRECOMPUTE_LIMIT: usize = 4096;

/// Hard safety bound on total passes; the primary stop conditions are
/// KKT satisfaction or `max_passes` consecutive passes without progress.
const PASS_HARD_CAP_FACTOR: usize = 100;

/// Pairwise updates per pass. Bounded so per-pass snapshots give training
/// curves a usable axis even when one greedy sweep would already converge.
const MAX_UPDATES_PER_PASS: usize = 64;

#[derive(Debug, Clone)]
pub struct SolverDiagnostics {
    /// Dual objective after every successful pairwise update; non-decreasing
    /// up to float noise.
    pub dual_objective_trace: Vec<f64>,
    /// Hinge slacks `max(0, 1 - y_i f(x_i))` of the final model, one per
    /// training point.
    pub slacks: Vec<f64>,
    pub max_kkt_violation: f64,
    /// Number of successful pairwise updates.
    pub n_iterations: usize,
    pub n_passes: usize,
    pub converged: bool,
}

/// Trains a model; see [`svm_train_traced`] for per-pass snapshots.
pub fn svm_train(
    data: &TrainingSet,
    kernel: &KernelSpec,
    cfg: &SvmConfig,
) -> Result<(SvmModel, SolverDiagnostics)> {
    let (model, diag, _) = train_impl(data, kernel, cfg, false)?;
    Ok((model, diag))
}

/// Like [`svm_train`], additionally returning one model snapshot per
/// optimization pass (used for training-curve reports).
pub fn svm_train_traced(
    data: &TrainingSet,
    kernel: &KernelSpec,
    cfg: &SvmConfig,
) -> Result<(SvmModel, SolverDiagnostics, Vec<SvmModel>)> {
    train_impl(data, kernel, cfg, true)
}

fn train_impl(
    data: &TrainingSet,
    kernel: &KernelSpec,
    cfg: &SvmConfig,
    keep_snapshots: bool,
) -> Result<(SvmModel, SolverDiagnostics, Vec<SvmModel>)> {
    cfg.validate()?;
    kernel.validate()?;
    if !data.has_both_classes() {
        return Err(Error::SingleClassTrainingSet);
    }

    let scaler = if cfg.standardize_for(kernel) {
        Some(Scaler::fit(data.vectors()))
    } else {
        None
    };
    let vectors: Vec<FeatureVector> = match &scaler {
        Some(s) => data
            .vectors()
            .iter()
            .map(|v| s.transform(v))
            .collect::<Result<_>>()?,
        None => data.vectors().to_vec(),
    };

    let mut state = Solver::new(&vectors, data.labels(), kernel, cfg)?;
    let mut snapshots = Vec::new();

    let mut passes_without_progress = 0;
    let mut n_passes = 0;
    let mut converged = false;
    let hard_cap = cfg.max_passes.saturating_mul(PASS_HARD_CAP_FACTOR);
    let mut max_violation;

    loop {
        let updates = state.run_pass()?;
        n_passes += 1;

        // Authoritative KKT state: decision values and canonical bias
        // recomputed from the current alphas.
        let (bias, violation) = state.resync()?;
        max_violation = violation;

        if keep_snapshots {
            snapshots.push(SvmModel::from_training(
                kernel.clone(),
                scaler.clone(),
                &vectors,
                &state.alphas,
                data.labels(),
                bias,
            ));
        }

        if violation <= cfg.kkt_tol {
            converged = true;
            break;
        }
        if updates == 0 {
            passes_without_progress += 1;
        } else {
            passes_without_progress = 0;
        }
        if passes_without_progress >= cfg.max_passes || n_passes >= hard_cap {
            break;
        }
    }

    let bias = state.bias_cache;
    let model = SvmModel::from_training(
        kernel.clone(),
        scaler,
        &vectors,
        &state.alphas,
        data.labels(),
        bias,
    );

    // Slacks from the final decision values (state.errors is in sync with
    // the canonical bias after resync()).
    let slacks = (0..state.n)
        .map(|i| {
            let f_i = state.errors[i] + state.y[i];
            (1.0 - state.y[i] * f_i).max(0.0)
        })
        .collect();

    let diagnostics = SolverDiagnostics {
        dual_objective_trace: state.trace,
        slacks,
        max_kkt_violation: max_violation,
        n_iterations: state.n_updates,
        n_passes,
        converged,
    };
    Ok((model, diagnostics, snapshots))
}

struct Solver<'a> {
    vectors: &'a [FeatureVector],
    y: Vec<f64>,
    kernel: &'a KernelSpec,
    c: f64,
    tol: f64,
    eps: f64,
    n: usize,
    gram: Option<Vec<f64>>,
    alphas: Vec<f64>,
    /// E_i = f(x_i) - y_i under the cached bias.
    errors: Vec<f64>,
    bias_cache: f64,
    objective: f64,
    trace: Vec<f64>,
    n_updates: usize,
    rng: Rng,
}

impl<'a> Solver<'a> {
    fn new(
        vectors: &'a [FeatureVector],
        labels: &[Label],
        kernel: &'a KernelSpec,
        cfg: &SvmConfig,
    ) -> Result<Self> {
        let n = vectors.len();
        let y: Vec<f64> = labels.iter().map(|l| l.to_f64()).collect();

        let gram = if n <= GRAM_PRECOMPUTE_LIMIT {
            let mut g = vec![0.0; n * n];
            for i in 0..n {
                for j in i..n {
                    let v = kernel_eval(kernel, &vectors[i], &vectors[j])?;
                    if !v.is_finite() {
                        return Err(Error::NonFinite(format!("kernel value at ({i}, {j})")));
                    }
                    g[i * n + j] = v;
                    g[j * n + i] = v;
                }
            }
            Some(g)
        } else {
            None
        };

        // f = 0 everywhere at alpha = 0, so E_i = -y_i.
        let errors = y.iter().map(|&yi| -yi).collect();
        Ok(Solver {
            vectors,
            y,
            kernel,
            c: cfg.c,
            tol: cfg.kkt_tol,
            eps: cfg.numeric_eps,
            n,
            gram,
            alphas: vec![0.0; n],
            errors,
            bias_cache: 0.0,
            objective: 0.0,
            trace: Vec::new(),
            n_updates: 0,
            rng: Rng::from_seed(cfg.rng_seed),
        })
    }

    fn k(&self, i: usize, j: usize) -> Result<f64> {
        if let Some(g) = &self.gram {
            return Ok(g[i * self.n + j]);
        }
        let v = kernel_eval(self.kernel, &self.vectors[i], &self.vectors[j])?;
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("kernel value at ({i}, {j})")));
        }
        Ok(v)
    }

    /// KKT violation of point i under the cached error view.
    fn violation(&self, i: usize) -> f64 {
        let r = self.y[i] * self.errors[i]; // y_i f_i - 1
        let mut v: f64 = 0.0;
        if self.alphas[i] < self.c && r < -self.tol {
            v = v.max(-r);
        }
        if self.alphas[i] > 0.0 && r > self.tol {
            v = v.max(r);
        }
        v
    }

    /// One pass: a bounded block of greedy pairwise updates. Returns how
    /// many succeeded.
    fn run_pass(&mut self) -> Result<usize> {
        let mut updates = 0;
        for _ in 0..self.n.min(MAX_UPDATES_PER_PASS) {
            let mut violators: Vec<(usize, f64)> = (0..self.n)
                .filter_map(|i| {
                    let v = self.violation(i);
                    (v > 0.0).then_some((i, v))
                })
                .collect();
            if violators.is_empty() {
                break;
            }
            violators.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

            let mut progressed = false;
            for &(i, _) in &violators {
                if self.try_update_from(i)? {
                    updates += 1;
                    self.n_updates += 1;
                    progressed = true;
                    break;
                }
            }
            if !progressed {
                break;
            }
        }
        Ok(updates)
    }

    /// Partner candidates for i: ranked by |E_i - E_j| descending, ties
    /// shuffled with the seeded generator.
    fn partner_order(&mut self, i: usize) -> Vec<usize> {
        let e_i = self.errors[i];
        let mut ranked: Vec<(usize, f64, u64)> = (0..self.n)
            .filter(|&j| j != i)
            .map(|j| (j, (e_i - self.errors[j]).abs(), 0))
            .collect();
        // Tag ties with random draws, then sort once: gap desc, tag asc.
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        let mut idx = 0;
        while idx < ranked.len() {
            let mut end = idx + 1;
            while end < ranked.len() && ranked[end].1 == ranked[idx].1 {
                end += 1;
            }
            if end - idx > 1 {
                for item in &mut ranked[idx..end] {
                    item.2 = self.rng.next_u64();
                }
                ranked[idx..end].sort_by_key(|item| item.2);
            }
            idx = end;
        }
        ranked.into_iter().map(|(j, _, _)| j).collect()
    }

    fn try_update_from(&mut self, i: usize) -> Result<bool> {
        for j in self.partner_order(i) {
            if self.update_pair(i, j)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Analytic solution of the two-variable subproblem; returns true when
    /// the pair actually moved.
    fn update_pair(&mut self, i: usize, j: usize) -> Result<bool> {
        let (y_i, y_j) = (self.y[i], self.y[j]);
        let (a_i_old, a_j_old) = (self.alphas[i], self.alphas[j]);
        let s = y_i * y_j;

        let (lo, hi) = if y_i != y_j {
            (
                (a_j_old - a_i_old).max(0.0),
                (self.c + a_j_old - a_i_old).min(self.c),
            )
        } else {
            (
                (a_i_old + a_j_old - self.c).max(0.0),
                (a_i_old + a_j_old).min(self.c),
            )
        };
        if hi - lo < self.eps {
            return Ok(false);
        }

        let k_ii = self.k(i, i)?;
        let k_jj = self.k(j, j)?;
        let k_ij = self.k(i, j)?;
        let eta = 2.0 * k_ij - k_ii - k_jj;

        let (e_i, e_j) = (self.errors[i], self.errors[j]);
        let a_j_new = if eta < 0.0 {
            (a_j_old - y_j * (e_i - e_j) / eta).clamp(lo, hi)
        } else {
            // Degenerate curvature (e.g. duplicate points): the subproblem
            // is linear along the constraint line, so the maximum sits at an
            // endpoint. Pick the better one by objective delta.
            let d_lo = self.pair_objective_delta(i, j, lo - a_j_old, k_ii, k_jj, k_ij);
            let d_hi = self.pair_objective_delta(i, j, hi - a_j_old, k_ii, k_jj, k_ij);
            if d_lo > d_hi {
                lo
            } else {
                hi
            }
        };

        let mut a_j_new = a_j_new;
        if a_j_new < self.eps {
            a_j_new = 0.0;
        } else if a_j_new > self.c - self.eps {
            a_j_new = self.c;
        }
        if (a_j_new - a_j_old).abs() < self.eps {
            return Ok(false);
        }

        let delta_j = a_j_new - a_j_old;
        let mut a_i_new = a_i_old + s * (a_j_old - a_j_new);
        if a_i_new < self.eps {
            a_i_new = 0.0;
        } else if a_i_new > self.c - self.eps {
            a_i_new = self.c;
        }
        // The L/H bounds keep this inside the box mathematically; the clamp
        // removes the last-ulp float drift.
        a_i_new = a_i_new.clamp(0.0, self.c);
        let delta_i = a_i_new - a_i_old;

        let delta_obj = self.pair_objective_delta(i, j, delta_j, k_ii, k_jj, k_ij);

        // Bias update for the incremental error cache (Platt's rule).
        let b_old = self.bias_cache;
        let b1 = b_old - e_i - y_i * delta_i * k_ii - y_j * delta_j * k_ij;
        let b2 = b_old - e_j - y_i * delta_i * k_ij - y_j * delta_j * k_jj;
        let b_new = if a_i_new > 0.0 && a_i_new < self.c {
            b1
        } else if a_j_new > 0.0 && a_j_new < self.c {
            b2
        } else {
            0.5 * (b1 + b2)
        };

        self.alphas[i] = a_i_new;
        self.alphas[j] = a_j_new;
        let db = b_new - b_old;
        for t in 0..self.n {
            let k_it = self.k(i, t)?;
            let k_jt = self.k(j, t)?;
            self.errors[t] += y_i * delta_i * k_it + y_j * delta_j * k_jt + db;
        }
        self.bias_cache = b_new;

        self.objective += delta_obj;
        self.trace.push(self.objective);
        Ok(true)
    }

    /// Change in the dual objective when alpha_j moves by `delta_j` (and
    /// alpha_i by the constraint-coupled amount), evaluated pre-update.
    fn pair_objective_delta(
        &self,
        i: usize,
        j: usize,
        delta_j: f64,
        k_ii: f64,
        k_jj: f64,
        k_ij: f64,
    ) -> f64 {
        let (y_i, y_j) = (self.y[i], self.y[j]);
        let s = y_i * y_j;
        let delta_i = -s * delta_j;
        // g_k = sum_l alpha_l y_l K_kl = f_k - b = (E_k + y_k) - b
        let g_i = self.errors[i] + y_i - self.bias_cache;
        let g_j = self.errors[j] + y_j - self.bias_cache;
        delta_i + delta_j
            - y_i * delta_i * g_i
            - y_j * delta_j * g_j
            - 0.5
                * (delta_i * delta_i * k_ii
                    + 2.0 * s * delta_i * delta_j * k_ij
                    + delta_j * delta_j * k_jj)
    }

    /// Recomputes decision values from scratch, derives the canonical bias
    /// (mean over boundary SVs, or the feasible-interval midpoint when none
    /// exist), resyncs the error cache, and returns (bias, max violation).
    #[allow(clippy::needless_range_loop)]
    fn resync(&mut self) -> Result<(f64, f64)> {
        let mut g = vec![0.0; self.n];
        for (l, &a_l) in self.alphas.iter().enumerate() {
            if a_l == 0.0 {
                continue;
            }
            let w = a_l * self.y[l];
            for t in 0..self.n {
                g[t] += w * self.k(l, t)?;
            }
        }

        let mut boundary_sum = 0.0;
        let mut boundary_count = 0usize;
        let mut lower = f64::NEG_INFINITY;
        let mut upper = f64::INFINITY;
        for i in 0..self.n {
            let r = self.y[i] - g[i];
            let a = self.alphas[i];
            if a > 0.0 && a < self.c {
                boundary_sum += r;
                boundary_count += 1;
            } else {
                // alpha = 0 wants y f >= 1; alpha = C wants y f <= 1. Each
                // gives a one-sided constraint on b.
                let is_lower = (a == 0.0 && self.y[i] > 0.0) || (a >= self.c && self.y[i] < 0.0);
                if is_lower {
                    lower = lower.max(r);
                } else {
                    upper = upper.min(r);
                }
            }
        }
        let bias = if boundary_count > 0 {
            boundary_sum / boundary_count as f64
        } else if lower.is_finite() && upper.is_finite() {
            0.5 * (lower + upper)
        } else if lower.is_finite() {
            lower
        } else if upper.is_finite() {
            upper
        } else {
            0.0
        };

        let mut max_violation: f64 = 0.0;
        for i in 0..self.n {
            let yf = self.y[i] * (g[i] + bias);
            let a = self.alphas[i];
            let v = if a == 0.0 {
                (1.0 - yf).max(0.0)
            } else if a >= self.c {
                (yf - 1.0).max(0.0)
            } else {
                (yf - 1.0).abs()
            };
            max_violation = max_violation.max(v);
        }

        for i in 0..self.n {
            self.errors[i] = g[i] + bias - self.y[i];
        }
        self.bias_cache = bias;
        Ok((bias, max_violation))
    }
}
