//! The linearized trust-region subproblem:
//!
//!   minimize    g . d
//!   subject to  c_i + a_i . d >= 0   for every constraint i
//!               ||d|| <= delta
//!
//! solved in two stages, as linear-approximation methods require: first find
//! the smallest achievable maximum violation of the linearized constraints
//! inside the ball, then minimize the model objective among steps attaining
//! (up to a small relaxation) that violation level.
//!
//! Zero- and one-constraint cases have exact closed forms; the general case
//! runs a log-barrier Newton iteration over the ball and halfspaces.

use nalgebra::{DMatrix, DVector};

pub(crate) struct LinearizedConstraint {
    /// Constraint value at the trust-region center.
    pub value: f64,
    /// Model gradient of the constraint.
    pub grad: DVector<f64>,
}

/// Compute the trust-region step.
pub(crate) fn trust_region_step(
    g: &DVector<f64>,
    cons: &[LinearizedConstraint],
    delta: f64,
) -> DVector<f64> {
    match cons.len() {
        0 => unconstrained_step(g, delta),
        1 => single_constraint_step(g, &cons[0], delta),
        _ => barrier_step(g, cons, delta),
    }
}

fn unconstrained_step(g: &DVector<f64>, delta: f64) -> DVector<f64> {
    let gn = g.norm();
    if gn == 0.0 {
        DVector::zeros(g.len())
    } else {
        g * (-delta / gn)
    }
}

/// Exact solution with one halfspace: either the ball optimum already
/// satisfies the constraint, or the constraint is unreachable inside the
/// ball (step to the max-feasibility point), or the optimum lies on the
/// constraint plane restricted to the ball.
fn single_constraint_step(
    g: &DVector<f64>,
    con: &LinearizedConstraint,
    delta: f64,
) -> DVector<f64> {
    let a = &con.grad;
    let c0 = con.value;
    let an = a.norm();
    let d_free = unconstrained_step(g, delta);
    if an == 0.0 || c0 + a.dot(&d_free) >= 0.0 {
        return d_free;
    }
    if c0 + delta * an <= 0.0 {
        // even the best point in the ball violates: minimize the violation
        return a * (delta / an);
    }
    // constraint active: optimize over the disk {a.d = -c0} inside the ball
    let center = a * (-c0 / (an * an));
    let radius = (delta * delta - (c0 / an).powi(2)).max(0.0).sqrt();
    let g_tan = g - a * (g.dot(a) / (an * an));
    let gtn = g_tan.norm();
    if gtn > 0.0 {
        center - g_tan * (radius / gtn)
    } else {
        center
    }
}

/// Two-stage log-barrier Newton solve for m >= 2 constraints.
pub(crate) fn barrier_step(
    g: &DVector<f64>,
    cons: &[LinearizedConstraint],
    delta: f64,
) -> DVector<f64> {
    let n = g.len();
    let m = cons.len();
    let c0 = DVector::from_iterator(m, cons.iter().map(|c| c.value));
    let a = DMatrix::from_fn(m, n, |i, j| cons[i].grad[j]);
    let v0 = c0.iter().fold(0.0f64, |acc, &c| acc.max(-c));

    // stage 1: minimize the violation level t with slacks c_i + a_i.d + t
    let mut obj1 = DVector::zeros(n + 1);
    obj1[n] = 1.0;
    let mut z0 = DVector::zeros(n + 1);
    z0[n] = v0 + 0.5 * (1.0 + v0);
    let z1 = barrier_stage(&obj1, &c0, &a, 0.0, z0, n, delta);
    let d1 = z1.rows(0, n).into_owned();
    let v_star = z1[n].max(0.0);

    // stage 2: minimize g.d with every constraint relaxed by the achieved
    // violation level plus a margin that keeps the stage-1 point interior
    let margin = 1e-9 * (1.0 + v_star);
    let mut v_rel = v_star + margin;
    let shrink = (0.999 * delta / d1.norm().max(1e-300)).min(1.0);
    let d_start = &d1 * shrink;
    let worst = (0..m)
        .map(|i| -(c0[i] + a.row(i).transpose().dot(&d_start)))
        .fold(f64::NEG_INFINITY, f64::max);
    if worst + margin > v_rel {
        v_rel = worst + margin;
    }
    let z2 = barrier_stage(g, &c0, &a, v_rel, d_start, n, delta);
    z2.rows(0, n).into_owned()
}

/// Newton path-following on
///   obj . z  - sigma [ sum_i log(c_i + A z_d + z_t + shift)
///                      + log(z_t) (when present) + log(delta^2 - ||z_d||^2) ]
/// where z = (d, t) in stage 1 and z = d in stage 2.
fn barrier_stage(
    obj: &DVector<f64>,
    c0: &DVector<f64>,
    a: &DMatrix<f64>,
    shift: f64,
    z0: DVector<f64>,
    n: usize,
    delta: f64,
) -> DVector<f64> {
    let nz = obj.len();
    let has_t = nz > n;
    let m = c0.len();
    let mut z = z0;

    let slacks = |z: &DVector<f64>| -> DVector<f64> {
        let d = z.rows(0, n);
        let t = if has_t { z[n] } else { 0.0 };
        DVector::from_fn(m, |i, _| c0[i] + a.row(i).transpose().dot(&d) + t + shift)
    };
    let ball = |z: &DVector<f64>| -> f64 {
        let d = z.rows(0, n);
        delta * delta - d.dot(&d)
    };
    let strictly_feasible = |z: &DVector<f64>| -> bool {
        slacks(z).iter().all(|&s| s > 0.0) && ball(z) > 0.0 && (!has_t || z[n] > 0.0)
    };

    let scale = obj.norm().max(1.0) * delta.max(1e-12);
    let mut sigma = scale;
    for _ in 0..60 {
        sigma *= 0.25;
        for _ in 0..40 {
            let s = slacks(&z);
            let bl = ball(&z);
            let mut grad = obj.clone();
            let mut hess = DMatrix::<f64>::zeros(nz, nz);
            for i in 0..m {
                let mut ai = DVector::zeros(nz);
                for j in 0..n {
                    ai[j] = a[(i, j)];
                }
                if has_t {
                    ai[n] = 1.0;
                }
                grad -= &ai * (sigma / s[i]);
                hess += &ai * ai.transpose() * (sigma / (s[i] * s[i]));
            }
            if has_t {
                grad[n] -= sigma / z[n];
                hess[(n, n)] += sigma / (z[n] * z[n]);
            }
            let mut gb = DVector::zeros(nz);
            for j in 0..n {
                gb[j] = 2.0 * z[j];
            }
            grad += &gb * (sigma / bl);
            hess += &gb * gb.transpose() * (sigma / (bl * bl));
            for j in 0..n {
                hess[(j, j)] += 2.0 * sigma / bl;
            }
            for j in 0..nz {
                hess[(j, j)] += 1e-14 * scale;
            }
            let step = match hess.clone().cholesky() {
                Some(ch) => ch.solve(&(-&grad)),
                None => match hess.lu().solve(&(-&grad)) {
                    Some(s) => s,
                    None => return z,
                },
            };
            // backtrack into the strict interior
            let mut tlim = 1.0;
            let mut moved = false;
            for _ in 0..60 {
                let zt = &z + &step * tlim;
                if strictly_feasible(&zt) {
                    z = zt;
                    moved = true;
                    break;
                }
                tlim *= 0.5;
            }
            if !moved {
                break;
            }
            if (step.norm() * tlim) < 1e-14 * (1.0 + z.norm()) {
                break;
            }
        }
        if sigma < 1e-12 * scale {
            break;
        }
    }
    z
}
