//! Derivative-free constrained minimization in the COBYLA family: linear
//! interpolation models over an (n+1)-point simplex, a two-stage linearized
//! trust-region subproblem, and a merit function that balances the objective
//! against the largest constraint violation. Inequality constraints are
//! feasible at nonnegative values.
//!
//! Per-iteration outline:
//!
//! 1. The vertex with the best merit anchors the simplex; linear models of
//!    the objective and every constraint interpolate the n+1 vertices.
//! 2. If the simplex is distorted (a vertex further than 2.1*delta from the
//!    anchor, or closer than 0.25*delta to the affine hull of the others),
//!    one geometry step replaces the worst offender at distance delta/2
//!    along the face normal, choosing the sign with the better predicted
//!    merit.
//! 3. Otherwise the trust-region step minimizes the model objective within
//!    radius delta subject to the linearized constraints ([`subproblem`]).
//!    The merit parameter mu is only ever raised: whenever the predicted
//!    merit reduction comes out nonpositive while the step reduces the
//!    predicted violation, mu is set to 1.5 times the smallest value that
//!    restores a positive prediction.
//! 4. The radius doubles after a very successful full-length step
//!    (merit ratio >= 0.75) and halves when a failed step (ratio < 0.1)
//!    cannot be blamed on geometry; shrinking past `rho_end` terminates.
//! 5. Valley acceleration: when the best vertex has drifted consistently
//!    (net displacement at least 40% of the path length over four
//!    iterations), the search rides that direction with doubling
//!    extrapolation steps while the merit improves and the constraint
//!    violation does not grow. Linear models crawl along curved valleys;
//!    the ride recovers the pace and every ride point still counts against
//!    the evaluation budget.

mod subproblem;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use subproblem::{trust_region_step, LinearizedConstraint};

const ALPHA: f64 = 0.25; // min vertex-to-face distance, in units of delta
const BETA: f64 = 2.1; // max vertex distance, in units of delta
const GEO_STEP: f64 = 0.5; // geometry step length, in units of delta
const SHORT_STEP: f64 = 0.5; // steps below this fraction of delta trigger radius logic
const RATIO_GOOD: f64 = 0.1;
const RATIO_GREAT: f64 = 0.75;
const GROW: f64 = 2.0;
const SHRINK: f64 = 0.5;
const RIDE_MIN_ITERS: usize = 4;
const RIDE_STRAIGHTNESS: f64 = 0.4;

/// Constraint values above `-FEASIBILITY_TOL` count as satisfied when
/// selecting the reported best point and setting the violation flag.
pub const FEASIBILITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Evaluation budget; every objective evaluation counts.
    pub max_evals: usize,
    /// Initial trust radius (radians, for circuit parameters).
    pub rho_begin: f64,
    /// Radius convergence threshold.
    pub rho_end: f64,
    /// Seeds the orientation of the initial simplex offsets.
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_evals: 300,
            rho_begin: 0.5,
            rho_end: 1e-4,
            seed: 0,
        }
    }
}

/// An inequality constraint: feasible iff `eval(x) >= 0`.
pub struct InequalityConstraint<'a> {
    pub label: String,
    pub eval: Box<dyn Fn(&[f64]) -> f64 + 'a>,
}

impl<'a> InequalityConstraint<'a> {
    pub fn new(label: impl Into<String>, eval: impl Fn(&[f64]) -> f64 + 'a) -> Self {
        Self {
            label: label.into(),
            eval: Box::new(eval),
        }
    }
}

/// One objective evaluation, in evaluation order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    /// 1-based evaluation index.
    pub index: usize,
    pub params: Vec<f64>,
    pub objective: f64,
    pub constraints: Vec<f64>,
}

impl Evaluation {
    pub fn violation(&self) -> f64 {
        self.constraints.iter().fold(0.0f64, |acc, &c| acc.max(-c))
    }

    pub fn satisfies_constraints(&self) -> bool {
        self.violation() <= FEASIBILITY_TOL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminationReason {
    EvalBudget,
    RadiusConverged,
}

/// Everything a minimize call produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationTrace {
    pub evaluations: Vec<Evaluation>,
    pub best_params: Vec<f64>,
    pub best_objective: f64,
    pub best_constraints: Vec<f64>,
    /// 1-based index of the best evaluation within `evaluations`.
    pub best_index: usize,
    pub termination: TerminationReason,
    /// True when no evaluation satisfied every constraint; the reported
    /// best is then the lowest objective over all evaluations.
    pub constraint_violated: bool,
}

/// The minimizer. Construct, optionally attach a monitor, then call
/// [`Cobyla::minimize`].
pub struct Cobyla<'a> {
    config: OptimizerConfig,
    monitor: Option<Box<dyn FnMut(&Evaluation) + 'a>>,
}

struct Vertex {
    x: DVector<f64>,
    f: f64,
    con: Vec<f64>,
}

impl Vertex {
    fn violation(&self) -> f64 {
        self.con.iter().fold(0.0f64, |acc, &c| acc.max(-c))
    }

    fn merit(&self, mu: f64) -> f64 {
        self.f + mu * self.violation()
    }
}

fn violation_of(con: &[f64]) -> f64 {
    con.iter().fold(0.0f64, |acc, &c| acc.max(-c))
}

impl<'a> Cobyla<'a> {
    pub fn new(config: OptimizerConfig) -> Self {
        Self {
            config,
            monitor: None,
        }
    }

    /// Register a callback invoked exactly once per objective evaluation,
    /// in evaluation order. Must be set before [`Cobyla::minimize`].
    pub fn attach_monitor(&mut self, monitor: impl FnMut(&Evaluation) + 'a) {
        self.monitor = Some(Box::new(monitor));
    }

    pub fn minimize(
        mut self,
        mut objective: impl FnMut(&[f64]) -> f64,
        constraints: &[InequalityConstraint],
        x0: &[f64],
    ) -> Result<OptimizationTrace> {
        let n = x0.len();
        let m = constraints.len();
        if n == 0 {
            return Err(Error::InvalidParameter("x0 must not be empty".into()));
        }
        if x0.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("x0 must be finite".into()));
        }
        if self.config.max_evals < n + 2 {
            return Err(Error::InvalidParameter(format!(
                "max_evals must be at least dimension + 2 = {}",
                n + 2
            )));
        }
        if !(0.0 < self.config.rho_end && self.config.rho_end <= self.config.rho_begin) {
            return Err(Error::InvalidParameter(
                "need 0 < rho_end <= rho_begin".into(),
            ));
        }

        let mut trace: Vec<Evaluation> = Vec::new();
        let mut evaluate = |x: &DVector<f64>,
                            trace: &mut Vec<Evaluation>,
                            monitor: &mut Option<Box<dyn FnMut(&Evaluation) + 'a>>|
         -> Result<(f64, Vec<f64>)> {
            let params: Vec<f64> = x.iter().copied().collect();
            let f = objective(&params);
            let con: Vec<f64> = constraints.iter().map(|c| (c.eval)(&params)).collect();
            if !f.is_finite() || con.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteObjective { params });
            }
            let record = Evaluation {
                index: trace.len() + 1,
                params,
                objective: f,
                constraints: con.clone(),
            };
            if let Some(cb) = monitor.as_mut() {
                cb(&record);
            }
            trace.push(record);
            Ok((f, con))
        };

        let mut delta = self.config.rho_begin;
        let mut mu = 0.0f64;
        let mut termination = TerminationReason::EvalBudget;

        // initial simplex: x0 plus +/-delta along each axis, signs seeded
        let mut sign_rng = crate::rng::stream(self.config.seed, 0x5e_ed);
        let x0v = DVector::from_column_slice(x0);
        let mut simplex: Vec<Vertex> = Vec::with_capacity(n + 1);
        {
            let (f, con) = evaluate(&x0v, &mut trace, &mut self.monitor)?;
            simplex.push(Vertex { x: x0v.clone(), f, con });
        }
        for j in 0..n {
            if trace.len() >= self.config.max_evals {
                break;
            }
            let mut x = x0v.clone();
            let sign = if rand::Rng::gen::<bool>(&mut sign_rng) {
                1.0
            } else {
                -1.0
            };
            x[j] += sign * delta;
            let (f, con) = evaluate(&x, &mut trace, &mut self.monitor)?;
            simplex.push(Vertex { x, f, con });
        }

        let mut failed_flag = false;
        let mut anchor = x0v.clone();
        let mut prev_best = x0v.clone();
        let mut path_len = 0.0f64;
        let mut since_anchor = 0usize;

        while trace.len() < self.config.max_evals && simplex.len() == n + 1 {
            // best vertex (lowest merit, ties to the lowest index) anchors
            let best = (0..=n)
                .min_by(|&a, &b| {
                    simplex[a]
                        .merit(mu)
                        .partial_cmp(&simplex[b].merit(mu))
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(0);
            if best != 0 {
                simplex.swap(0, best);
                failed_flag = false; // progress at the current radius
            }
            path_len += (&simplex[0].x - &prev_best).norm();
            prev_best = simplex[0].x.clone();
            since_anchor += 1;

            // edge matrix and interpolation models
            let b_mat = DMatrix::from_fn(n, n, |r, c| simplex[c + 1].x[r] - simplex[0].x[r]);
            let b_inv = b_mat.clone().try_inverse();
            let models = b_inv.as_ref().map(|_| {
                let lu = b_mat.transpose().lu();
                let g_f = lu
                    .solve(&DVector::from_fn(n, |j, _| simplex[j + 1].f - simplex[0].f))
                    .unwrap_or_else(|| DVector::zeros(n));
                let g_c: Vec<DVector<f64>> = (0..m)
                    .map(|i| {
                        lu.solve(&DVector::from_fn(n, |j, _| {
                            simplex[j + 1].con[i] - simplex[0].con[i]
                        }))
                        .unwrap_or_else(|| DVector::zeros(n))
                    })
                    .collect();
                (g_f, g_c)
            });

            let eta: Vec<f64> = (1..=n)
                .map(|j| (&simplex[j].x - &simplex[0].x).norm())
                .collect();
            let sigma: Option<Vec<f64>> = b_inv
                .as_ref()
                .map(|inv| (0..n).map(|j| 1.0 / inv.row(j).norm()).collect());
            let acceptable = match &sigma {
                Some(sig) => {
                    eta.iter().all(|&e| e <= BETA * delta)
                        && sig.iter().all(|&s| s >= ALPHA * delta)
                }
                None => false,
            };

            if !acceptable {
                // geometry step: move the worst offender to delta/2 from the
                // anchor along the normal of the opposite face
                let (jbad, dir) = match (&b_inv, &sigma) {
                    (Some(inv), Some(sig)) => {
                        let over: Vec<usize> = (0..n)
                            .filter(|&j| eta[j] > BETA * delta)
                            .collect();
                        let j = if over.is_empty() {
                            argmin(sig)
                        } else {
                            *over
                                .iter()
                                .max_by(|&&a, &&b| {
                                    eta[a].partial_cmp(&eta[b]).unwrap_or(std::cmp::Ordering::Equal)
                                })
                                .unwrap()
                        };
                        let row = inv.row(j).transpose();
                        (j, &row / row.norm())
                    }
                    _ => {
                        // singular simplex: displace the farthest vertex
                        // along a pseudo-inverse face normal
                        let j = argmax(&eta);
                        let pinv = b_mat
                            .clone()
                            .svd(true, true)
                            .pseudo_inverse(1e-12)
                            .unwrap_or_else(|_| DMatrix::zeros(n, n));
                        let row = pinv.row(j).transpose();
                        let norm = row.norm();
                        if norm > 0.0 {
                            (j, &row / norm)
                        } else {
                            let mut e = DVector::zeros(n);
                            e[j % n] = 1.0;
                            (j, e)
                        }
                    }
                };
                let step = &dir * (GEO_STEP * delta);
                let step = match &models {
                    Some((g_f, g_c)) => {
                        let predict = |d: &DVector<f64>| -> f64 {
                            let pf = simplex[0].f + g_f.dot(d);
                            let pv = (0..m)
                                .map(|i| -(simplex[0].con[i] + g_c[i].dot(d)))
                                .fold(0.0f64, f64::max);
                            pf + mu * pv
                        };
                        if predict(&step) <= predict(&(-&step)) {
                            step
                        } else {
                            -step
                        }
                    }
                    None => step,
                };
                let x_new = &simplex[0].x + step;
                let (f, con) = evaluate(&x_new, &mut trace, &mut self.monitor)?;
                simplex[jbad + 1] = Vertex { x: x_new, f, con };
                continue;
            }

            if failed_flag {
                // the last trust-region step failed and the refreshed simplex
                // is acceptable: the radius itself is too large here
                if delta * SHRINK < self.config.rho_end {
                    termination = TerminationReason::RadiusConverged;
                    break;
                }
                delta *= SHRINK;
                failed_flag = false;
                continue;
            }

            let (g_f, g_c) = models.as_ref().expect("acceptable implies invertible");
            let b_inv = b_inv.as_ref().expect("acceptable implies invertible");

            // valley ride: extrapolate along a consistent best-vertex drift
            if since_anchor >= RIDE_MIN_ITERS {
                let disp = &simplex[0].x - &anchor;
                let dl = disp.norm();
                if path_len > 0.0 && dl / path_len >= RIDE_STRAIGHTNESS && dl >= delta {
                    let mut disp = disp;
                    let base = simplex[0].x.clone();
                    let mut cur = simplex[0].merit(mu);
                    let v_cap = simplex[0].violation().max(FEASIBILITY_TOL);
                    while trace.len() < self.config.max_evals {
                        let x_new = &base + &disp;
                        let (f, con) = evaluate(&x_new, &mut trace, &mut self.monitor)?;
                        let merit_new = f + mu * violation_of(&con);
                        if merit_new < cur && violation_of(&con) <= v_cap {
                            let coords = b_inv * (&x_new - &simplex[0].x);
                            let jrep = argmax_abs(coords.as_slice());
                            simplex[jrep + 1] = Vertex { x: x_new, f, con };
                            disp *= 2.0;
                            cur = merit_new;
                        } else {
                            break;
                        }
                    }
                    anchor = simplex[0].x.clone();
                    path_len = 0.0;
                    since_anchor = 0;
                    continue;
                }
                if since_anchor >= 2 * RIDE_MIN_ITERS {
                    anchor = simplex[0].x.clone();
                    path_len = 0.0;
                    since_anchor = 0;
                }
            }

            // trust-region step on the linearized problem
            let lin: Vec<LinearizedConstraint> = (0..m)
                .map(|i| LinearizedConstraint {
                    value: simplex[0].con[i],
                    grad: g_c[i].clone(),
                })
                .collect();
            let d = trust_region_step(g_f, &lin, delta);
            let dn = d.norm();

            let v_now = simplex[0].violation();
            let v_pred = (0..m)
                .map(|i| -(simplex[0].con[i] + g_c[i].dot(&d)))
                .fold(0.0f64, f64::max);
            let f_pred = simplex[0].f + g_f.dot(&d);

            let mut short = dn < SHORT_STEP * delta;
            let mut pred_red = (simplex[0].f + mu * v_now) - (f_pred + mu * v_pred);
            if pred_red <= 0.0 {
                let dv = v_now - v_pred;
                if dv > f64::MIN_POSITIVE {
                    // raise mu just enough for a positive predicted reduction
                    mu = mu.max(1.5 * (f_pred - simplex[0].f) / dv);
                    pred_red = (simplex[0].f + mu * v_now) - (f_pred + mu * v_pred);
                }
                if pred_red <= 0.0 {
                    short = true; // the model offers no improvement here
                }
            }

            if short {
                if delta * SHRINK < self.config.rho_end {
                    termination = TerminationReason::RadiusConverged;
                    break;
                }
                delta *= SHRINK;
                continue;
            }

            let x_new = &simplex[0].x + &d;
            let (f, con) = evaluate(&x_new, &mut trace, &mut self.monitor)?;
            let actual = (simplex[0].f + mu * v_now) - (f + mu * violation_of(&con));
            let ratio = actual / pred_red;

            // drop the vertex carrying the largest coordinate of d in the
            // edge basis: keeps the simplex volume from collapsing
            let coords = b_inv * &d;
            let jrep = argmax_abs(coords.as_slice());
            simplex[jrep + 1] = Vertex { x: x_new, f, con };

            if ratio >= RATIO_GREAT && dn >= 0.9 * delta {
                delta *= GROW;
            } else if ratio < RATIO_GOOD {
                failed_flag = true;
            }
        }

        // reported best: lowest objective among constraint-satisfying
        // evaluations, else lowest objective overall with the flag raised
        let feasible_best = trace
            .iter()
            .filter(|e| e.satisfies_constraints())
            .min_by(|a, b| {
                a.objective
                    .partial_cmp(&b.objective)
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        let constraint_violated = feasible_best.is_none();
        let best = feasible_best
            .or_else(|| {
                trace.iter().min_by(|a, b| {
                    a.objective
                        .partial_cmp(&b.objective)
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
            })
            .expect("at least one evaluation");

        Ok(OptimizationTrace {
            best_params: best.params.clone(),
            best_objective: best.objective,
            best_constraints: best.constraints.clone(),
            best_index: best.index,
            termination,
            constraint_violated,
            evaluations: trace,
        })
    }
}

fn argmin(values: &[f64]) -> usize {
    let mut idx = 0;
    for (j, &v) in values.iter().enumerate() {
        if v < values[idx] {
            idx = j;
        }
    }
    idx
}

fn argmax(values: &[f64]) -> usize {
    let mut idx = 0;
    for (j, &v) in values.iter().enumerate() {
        if v > values[idx] {
            idx = j;
        }
    }
    idx
}

fn argmax_abs(values: &[f64]) -> usize {
    let mut idx = 0;
    for (j, &v) in values.iter().enumerate() {
        if v.abs() > values[idx].abs() {
            idx = j;
        }
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn config(max_evals: usize, rho_end: f64) -> OptimizerConfig {
        OptimizerConfig {
            max_evals,
            rho_begin: 0.5,
            rho_end,
            seed: 0,
        }
    }

    fn uniform(rng: &mut rand_chacha::ChaCha8Rng, lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|_| rng.gen_range(lo..hi)).collect()
    }

    #[test]
    fn quadratic_with_active_bound() {
        // minimize (x-1)^2 subject to x >= 2: optimum sits on the bound
        let mut rng = crate::rng::stream(1, 90);
        for _ in 0..10 {
            let x0 = uniform(&mut rng, -2.0, 4.0, 1);
            let trace = Cobyla::new(config(100, 1e-4))
                .minimize(
                    |x| (x[0] - 1.0).powi(2),
                    &[InequalityConstraint::new("x>=2", |x: &[f64]| x[0] - 2.0)],
                    &x0,
                )
                .unwrap();
            assert!(
                (trace.best_params[0] - 2.0).abs() <= 1e-4,
                "x0 {:?} ended at {:?}",
                x0,
                trace.best_params
            );
            assert!(!trace.constraint_violated);
        }
    }

    #[test]
    fn linear_on_unit_disk() {
        // minimize x+y on the unit disk: optimum at (-1/sqrt2, -1/sqrt2)
        let target = -std::f64::consts::FRAC_1_SQRT_2;
        let mut rng = crate::rng::stream(2, 90);
        for _ in 0..10 {
            let x0 = uniform(&mut rng, -1.0, 1.0, 2);
            let trace = Cobyla::new(config(300, 1e-4))
                .minimize(
                    |x| x[0] + x[1],
                    &[InequalityConstraint::new("disk", |x: &[f64]| {
                        1.0 - x[0] * x[0] - x[1] * x[1]
                    })],
                    &x0,
                )
                .unwrap();
            assert!(
                (trace.best_params[0] - target).abs() <= 1e-3
                    && (trace.best_params[1] - target).abs() <= 1e-3,
                "ended at {:?}",
                trace.best_params
            );
            assert!((trace.best_objective - (-std::f64::consts::SQRT_2)).abs() <= 2e-3);
        }
    }

    #[test]
    fn rosenbrock_within_budget() {
        let rosen = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
        let mut rng = crate::rng::stream(3, 90);
        for trial in 0..10 {
            let x0 = uniform(&mut rng, -2.0, 2.0, 2);
            let trace = Cobyla::new(config(2000, 1e-7))
                .minimize(rosen, &[], &x0)
                .unwrap();
            assert!(
                trace.best_objective <= 1e-4,
                "trial {trial} from {:?}: f = {:.3e}",
                x0,
                trace.best_objective
            );
        }
    }

    #[test]
    fn budget_is_respected_exactly() {
        // a slow function never converges by radius in 50 evals
        let rosen = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
        let mut count = 0usize;
        let mut orders = Vec::new();
        let mut opt = Cobyla::new(config(50, 1e-12));
        opt.attach_monitor(|e: &Evaluation| {
            count += 1;
            orders.push(e.index);
        });
        let trace = opt.minimize(rosen, &[], &[0.0, 0.0]).unwrap();
        assert_eq!(trace.evaluations.len(), 50);
        assert_eq!(count, 50);
        assert_eq!(orders, (1..=50).collect::<Vec<_>>());
        assert_eq!(trace.termination, TerminationReason::EvalBudget);
    }

    #[test]
    fn monitor_matches_trace_order() {
        let mut seen: Vec<Vec<f64>> = Vec::new();
        let mut opt = Cobyla::new(config(40, 1e-6));
        opt.attach_monitor(|e: &Evaluation| seen.push(e.params.clone()));
        let trace = opt
            .minimize(|x| x[0] * x[0] + x[1] * x[1], &[], &[1.0, -1.0])
            .unwrap();
        let from_trace: Vec<Vec<f64>> =
            trace.evaluations.iter().map(|e| e.params.clone()).collect();
        assert_eq!(seen, from_trace);
    }

    #[test]
    fn works_without_monitor() {
        let trace = Cobyla::new(config(60, 1e-6))
            .minimize(|x| (x[0] - 3.0).powi(2), &[], &[0.0])
            .unwrap();
        assert!(!trace.evaluations.is_empty());
        assert!((trace.best_params[0] - 3.0).abs() < 1e-4);
    }

    #[test]
    fn determinism_same_inputs_same_trace() {
        let run = || {
            Cobyla::new(config(120, 1e-6))
                .minimize(
                    |x| (x[0] + 0.3).powi(2) + 2.0 * (x[1] - 0.7).powi(2) + x[0] * x[1],
                    &[InequalityConstraint::new("c", |x: &[f64]| x[0] + 1.0)],
                    &[0.4, -0.9],
                )
                .unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a, b);
    }

    #[test]
    fn non_finite_objective_is_an_error() {
        // the minimizer of x^2 must walk into the NaN region below 0.25
        let result = Cobyla::new(config(50, 1e-6)).minimize(
            |x| {
                if x[0] < 0.25 {
                    f64::NAN
                } else {
                    x[0] * x[0]
                }
            },
            &[],
            &[1.5],
        );
        match result {
            Err(Error::NonFiniteObjective { params }) => assert!(params[0] < 0.25),
            other => panic!("expected NonFiniteObjective, got {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        let bad = OptimizerConfig {
            max_evals: 2,
            ..OptimizerConfig::default()
        };
        assert!(Cobyla::new(bad)
            .minimize(|x| x[0], &[], &[0.0])
            .is_err());
        let bad = OptimizerConfig {
            rho_end: 0.0,
            ..OptimizerConfig::default()
        };
        assert!(Cobyla::new(bad)
            .minimize(|x| x[0], &[], &[0.0])
            .is_err());
        assert!(Cobyla::new(OptimizerConfig::default())
            .minimize(|x| x[0], &[], &[f64::NAN])
            .is_err());
    }

    #[test]
    fn infeasible_problem_reports_violation() {
        // x >= 1 and -x >= 1 cannot both hold
        let trace = Cobyla::new(config(80, 1e-6))
            .minimize(
                |x: &[f64]| x[0] * x[0],
                &[
                    InequalityConstraint::new("hi", |x: &[f64]| x[0] - 1.0),
                    InequalityConstraint::new("lo", |x: &[f64]| -x[0] - 1.0),
                ],
                &[0.2],
            )
            .unwrap();
        assert!(trace.constraint_violated);
        // best is then the lowest objective over all evaluations
        let min_obj = trace
            .evaluations
            .iter()
            .map(|e| e.objective)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(trace.best_objective, min_obj);
    }

    #[test]
    fn two_sided_box_constraints() {
        let trace = Cobyla::new(config(200, 1e-6))
            .minimize(
                |x| x[0] + x[1],
                &[
                    InequalityConstraint::new("x", |x: &[f64]| x[0] - 0.3),
                    InequalityConstraint::new("y", |x: &[f64]| x[1] + 0.2),
                ],
                &[1.5, 1.5],
            )
            .unwrap();
        assert!((trace.best_params[0] - 0.3).abs() < 1e-3);
        assert!((trace.best_params[1] + 0.2).abs() < 1e-3);
    }

    #[test]
    fn trace_best_matches_reported_fields() {
        let trace = Cobyla::new(config(100, 1e-6))
            .minimize(|x| (x[0] - 1.0).powi(2) + x[1].powi(2), &[], &[2.0, 2.0])
            .unwrap();
        let at = &trace.evaluations[trace.best_index - 1];
        assert_eq!(at.params, trace.best_params);
        assert_eq!(at.objective, trace.best_objective);
    }
}
