//! Fixed-step RK4 integration of the Langmuir ODE
//!
//! ```text
//! dN_b/dt = k_on c(t) (N_p - N_b) - k_off N_b
//! ```
//!
//! driven by an OOK frame. Used only to validate the closed forms in
//! [`crate::kinetics`] and [`crate::response`]; the BER pipeline never calls
//! it.
//!
//! Every pulse edge is a step boundary: the step is shrunk per segment so the
//! segment length is an integer number of steps. The forcing is constant
//! inside each segment, so RK4 keeps its fourth-order accuracy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinetics::KineticParams;
use crate::modulation::OokFrame;
use crate::response::TrajectorySample;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdeRun {
    /// Requested (maximum) step, min.
    pub dt: f64,
    pub t_end: f64,
    pub trajectory: Vec<TrajectorySample>,
}

impl OdeRun {
    /// Value at `t`, linearly interpolated between steps. Exact at step
    /// boundaries, which include every pulse edge.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        let traj = &self.trajectory;
        let first = traj.first()?;
        let last = traj.last()?;
        if t < first.t || t > last.t {
            return None;
        }
        let idx = traj.partition_point(|s| s.t < t);
        let hit = traj.get(idx)?;
        let tol = 1e-12 * t.abs().max(1.0);
        if (hit.t - t).abs() <= tol {
            return Some(hit.y);
        }
        if idx > 0 && (traj[idx - 1].t - t).abs() <= tol {
            return Some(traj[idx - 1].y);
        }
        let lo = traj[idx - 1];
        let w = (t - lo.t) / (hit.t - lo.t);
        Some(lo.y + w * (hit.y - lo.y))
    }
}

fn breakpoints(frame: &OokFrame, t_end: f64) -> Vec<f64> {
    let mut points = vec![0.0, t_end];
    for i in 0..=frame.len() {
        points.push(frame.symbol_start(i));
        if i < frame.len() {
            points.push(frame.sample_time(i));
        }
    }
    points.retain(|&t| (0.0..=t_end).contains(&t));
    points.sort_by(f64::total_cmp);
    let mut merged: Vec<f64> = Vec::with_capacity(points.len());
    for t in points {
        match merged.last() {
            Some(&prev) if t - prev <= 1e-12 * t.abs().max(1.0) => {}
            _ => merged.push(t),
        }
    }
    merged
}

/// Integrates from `N_b(0) = 0` to `t_end` with steps no longer than `dt`.
///
/// Accuracy guideline: `dt <= tau_on / 100` gives relative errors far below
/// 1e-6. Larger steps are accepted so convergence can be studied.
pub fn integrate(frame: &OokFrame, params: &KineticParams, dt: f64, t_end: f64) -> Result<OdeRun> {
    params.validate()?;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::domain("dt", format!("must be finite and > 0, got {dt}")));
    }
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::domain("t_end", format!("must be finite and >= 0, got {t_end}")));
    }
    let n_p = params.n_p as f64;
    let edges = breakpoints(frame, t_end);
    let mut y = 0.0;
    let mut trajectory = vec![TrajectorySample { t: 0.0, y }];
    for pair in edges.windows(2) {
        let (start, stop) = (pair[0], pair[1]);
        let len = stop - start;
        let binding = params.k_on * frame.concentration_at(params.c0, start + 0.5 * len);
        let rhs = |n: f64| binding * (n_p - n) - params.k_off * n;
        let steps = (len / dt).ceil().max(1.0) as usize;
        let h = len / steps as f64;
        for j in 1..=steps {
            let k1 = rhs(y);
            let k2 = rhs(y + 0.5 * h * k1);
            let k3 = rhs(y + 0.5 * h * k2);
            let k4 = rhs(y + h * k3);
            y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            let t = if j == steps { stop } else { start + j as f64 * h };
            trajectory.push(TrajectorySample { t, y });
        }
    }
    Ok(OdeRun { dt, t_end, trajectory })
}
