//! Continuous-time event simulation of the physical queue.
//!
//! Independent of the recursion: it tracks absolute event times, a FIFO
//! buffer of admitted service requirements and the server phase. An arrival
//! that finds workload `W ≤ D` joins; the server takes exactly one vacation
//! whenever it empties after a service, and after a vacation it either serves
//! whoever queued up or idles until the next arrival. The vacation length is
//! the vacation variate of the latest arrival at the emptying instant.

use std::collections::VecDeque;

use crate::dist::QueueModel;
use crate::error::Result;
use crate::recursion::InputStreams;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Phase {
    Idle,
    Serving { until: f64 },
    Vacation { until: f64 },
}

/// Simulates `n_customers` arrivals and records the workload each one finds.
pub fn des_oracle(model: &QueueModel, n_customers: usize, seed: u64) -> Result<Vec<f64>> {
    des_oracle_from(model, n_customers, seed, 0.0)
}

/// Like [`des_oracle`], starting with `w0` units of residual vacation.
pub fn des_oracle_from(
    model: &QueueModel,
    n_customers: usize,
    seed: u64,
    w0: f64,
) -> Result<Vec<f64>> {
    let mut inputs = InputStreams::new(model, seed, 0);
    let mut phase = if w0 > 0.0 {
        Phase::Vacation { until: w0 }
    } else {
        Phase::Idle
    };
    let mut queue: VecDeque<f64> = VecDeque::new();
    let mut queued_work = 0.0;
    let mut last_vacation = 0.0;
    let mut now = 0.0;
    let mut found = Vec::with_capacity(n_customers);

    for n in 0..n_customers as u64 {
        let input = inputs.input(n);
        // run the server up to this arrival; phases ending exactly at `now`
        // finish first
        loop {
            match phase {
                Phase::Serving { until } if until <= now => {
                    phase = match queue.pop_front() {
                        Some(s) => {
                            queued_work -= s;
                            Phase::Serving { until: until + s }
                        }
                        None => Phase::Vacation {
                            until: until + last_vacation,
                        },
                    };
                }
                Phase::Vacation { until } if until <= now => {
                    phase = match queue.pop_front() {
                        Some(s) => {
                            queued_work -= s;
                            Phase::Serving { until: until + s }
                        }
                        None => Phase::Idle,
                    };
                }
                _ => break,
            }
        }
        if queue.is_empty() {
            queued_work = 0.0;
        }
        let residual = match phase {
            Phase::Idle => 0.0,
            Phase::Serving { until } | Phase::Vacation { until } => until - now,
        };
        let w = residual + queued_work;
        found.push(w);

        if w <= input.deadline {
            match phase {
                Phase::Idle => {
                    phase = Phase::Serving {
                        until: now + input.sigma,
                    }
                }
                _ => {
                    queue.push_back(input.sigma);
                    queued_work += input.sigma;
                }
            }
        }
        last_vacation = input.vacation;
        now += input.tau;
    }
    Ok(found)
}
