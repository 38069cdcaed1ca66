//! The workload recursion `W_{n+1} = h(W_n, ξ_n)` with its family bookkeeping,
//! and the auxiliary sequences `Z_n` and `Y_n`.
//!
//! Tie conventions are load-bearing with deterministic inputs and follow the
//! model equations literally: the increment `X_n` admits the customer iff
//! `W_n < D_n`, while the branch selection and the served-customer counter
//! `N_n` use `W_n ≤ D_n`.

use serde::Serialize;

use crate::dist::QueueModel;
use crate::error::{Error, Result};
use crate::rng::{kind, VariateStream};

/// One driving input `ξ_n = (τ_n, σ_n, V_n, D_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepInput {
    pub tau: f64,
    pub sigma: f64,
    /// `+∞` for a customer who never balks.
    pub deadline: f64,
    pub vacation: f64,
}

impl StepInput {
    pub fn new(tau: f64, sigma: f64, deadline: f64, vacation: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!("tau > 0 (got {tau})")));
        }
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!("sigma >= 0 (got {sigma})")));
        }
        if !(deadline >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "deadline >= 0 (got {deadline})"
            )));
        }
        if !(vacation >= 0.0 && vacation.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "vacation >= 0 (got {vacation})"
            )));
        }
        Ok(Self {
            tau,
            sigma,
            deadline,
            vacation,
        })
    }
}

/// Draws the inputs of one replication from four counter-based streams, so
/// that `input(n)` is the same wherever and in whatever order it is asked for.
#[derive(Debug, Clone)]
pub struct InputStreams {
    model: QueueModel,
    arrival: VariateStream,
    service: VariateStream,
    patience: VariateStream,
    vacation: VariateStream,
}

impl InputStreams {
    pub fn new(model: &QueueModel, seed: u64, replication: u64) -> Self {
        Self {
            model: model.clone(),
            arrival: VariateStream::for_input(seed, replication, kind::ARRIVAL),
            service: VariateStream::for_input(seed, replication, kind::SERVICE),
            patience: VariateStream::for_input(seed, replication, kind::PATIENCE),
            vacation: VariateStream::for_input(seed, replication, kind::VACATION),
        }
    }

    pub fn input(&mut self, n: u64) -> StepInput {
        let mut tau = self.model.arrival.sample_from(self.arrival.uniforms_at(n));
        if tau <= 0.0 {
            // inversion of a continuous law can underflow to 0
            tau = f64::MIN_POSITIVE;
        }
        StepInput {
            tau,
            sigma: self.model.service.sample_from(self.service.uniforms_at(n)),
            deadline: self
                .model
                .patience
                .sample_from(self.patience.uniforms_at(n)),
            vacation: self
                .model
                .vacation
                .sample_from(self.vacation.uniforms_at(n)),
        }
    }
}

/// Which clause of the explicit recursion produced `W_{n+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    /// Served, next arrival before the departure: `W + σ − τ`.
    B1,
    /// Balked, next arrival before the workload drains: `W − τ`.
    B2,
    /// Served, departs before the next arrival, vacation follows: `[W + σ + V − τ]⁺`.
    B3,
    /// Balked after a family with a served customer; the vacation follows the
    /// last departure: `[W + V − τ]⁺`.
    B4,
    /// Balked, nobody in the family was served: `0`.
    B5,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::B1 => "B1",
            Branch::B2 => "B2",
            Branch::B3 => "B3",
            Branch::B4 => "B4",
            Branch::B5 => "B5",
        }
    }
}

/// Per-path state before customer `n` is processed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathState {
    pub n: u64,
    /// `W_n`.
    pub w: f64,
    /// Customers with `W_k ≤ D_k` since `family_start`, i.e. `N_n`'s running sum.
    pub served_in_family: u64,
    /// First customer of the current family (`M_n`).
    pub family_start: u64,
    /// Whether `X_{n−1} ≤ 0`. True initially: customer 0 opens a family.
    pub prev_x_nonpositive: bool,
    pub last_branch: Option<Branch>,
}

impl PathState {
    pub fn new(w0: f64) -> Self {
        Self {
            n: 0,
            w: w0,
            served_in_family: 0,
            family_start: 0,
            prev_x_nonpositive: true,
            last_branch: None,
        }
    }
}

/// `X_n = W_n + σ_n 1{W_n < D_n} − τ_n`.
pub fn x_of(state: &PathState, input: &StepInput) -> f64 {
    let admitted = if state.w < input.deadline {
        input.sigma
    } else {
        0.0
    };
    state.w + admitted - input.tau
}

/// One step of the workload recursion. Returns the state for customer `n + 1`;
/// its `family_start` and `served_in_family` describe the family of customer `n`.
pub fn step_w(state: &PathState, input: &StepInput) -> PathState {
    let x = x_of(state, input);
    let (family_start, mut served) = if state.prev_x_nonpositive {
        (state.n, 0)
    } else {
        (state.family_start, state.served_in_family)
    };
    let patient = state.w <= input.deadline;
    if patient {
        served += 1;
    }
    let w = state.w;
    let (next, branch) = if patient {
        let busy = w + input.sigma - input.tau;
        if busy > 0.0 {
            (busy, Branch::B1)
        } else {
            (
                (w + input.sigma + input.vacation - input.tau).max(0.0),
                Branch::B3,
            )
        }
    } else {
        let rest = w - input.tau;
        if rest > 0.0 {
            (rest, Branch::B2)
        } else if served > 0 {
            ((w + input.vacation - input.tau).max(0.0), Branch::B4)
        } else {
            (0.0, Branch::B5)
        }
    };
    PathState {
        n: state.n + 1,
        w: next,
        served_in_family: served,
        family_start,
        prev_x_nonpositive: x <= 0.0,
        last_branch: Some(branch),
    }
}

/// The past-independent map `φ` driving `Z_n`. The clause list leaves
/// `{z − τ ≤ 0, z > D}` unassigned; it maps to 0 like `B5`.
pub fn step_z(z: f64, input: &StepInput) -> f64 {
    if z <= input.deadline {
        let busy = z + input.sigma - input.tau;
        if busy > 0.0 {
            busy
        } else {
            (z + input.sigma + input.vacation - input.tau).max(0.0)
        }
    } else {
        (z - input.tau).max(0.0)
    }
}

/// `ψ(y) = [max(y + V, σ + D + V) − τ]⁺`, monotone in `y`.
pub fn step_y(y: f64, input: &StepInput) -> Result<f64> {
    if input.deadline.is_infinite() {
        return Err(Error::InfiniteDeadline);
    }
    Ok(
        ((y + input.vacation).max(input.sigma + input.deadline + input.vacation) - input.tau)
            .max(0.0),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceRecord {
    pub n: u64,
    pub input: StepInput,
    /// `X_n`.
    pub x: f64,
    /// `W_n`, `Z_n`, `Y_n` before step `n`.
    pub w: f64,
    pub z: f64,
    pub y: Option<f64>,
    pub branch: Branch,
    pub family_start: u64,
    pub served_in_family: u64,
}

/// Runs `W`, `Z` and (when `y0` is given) `Y` side by side on the same inputs.
pub fn run_sequences(
    model: &QueueModel,
    n_steps: usize,
    seed: u64,
    w0: f64,
    y0: Option<f64>,
) -> Result<Vec<SequenceRecord>> {
    if y0.is_some() && model.patience.is_infinite() {
        return Err(Error::InfiniteDeadline);
    }
    let mut inputs = InputStreams::new(model, seed, 0);
    let mut state = PathState::new(w0);
    let mut z = w0;
    let mut y = y0;
    let mut out = Vec::with_capacity(n_steps);
    for n in 0..n_steps as u64 {
        let input = inputs.input(n);
        let x = x_of(&state, &input);
        let next = step_w(&state, &input);
        out.push(SequenceRecord {
            n,
            input,
            x,
            w: state.w,
            z,
            y,
            branch: next.last_branch.expect("step_w always records a branch"),
            family_start: next.family_start,
            served_in_family: next.served_in_family,
        });
        state = next;
        z = step_z(z, &input);
        y = match y {
            Some(v) => Some(step_y(v, &input)?),
            None => None,
        };
    }
    Ok(out)
}

/// Just the workload sequence `W_0..W_{n-1}`, without per-step records.
pub fn workload_path(inputs: &mut InputStreams, n: usize, w0: f64) -> Vec<f64> {
    let mut state = PathState::new(w0);
    let mut out = Vec::with_capacity(n);
    for k in 0..n as u64 {
        out.push(state.w);
        state = step_w(&state, &inputs.input(k));
    }
    out
}
