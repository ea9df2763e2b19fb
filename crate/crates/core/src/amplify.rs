//! Amplitude amplification of the valid-route subspace.
//!
//! Starting from the uniform superposition, each iteration applies the
//! validity phase oracle followed by the matching reflection about the
//! uniform state. Both use the same angle: pi gives textbook Grover search,
//! while the exact schedule shrinks the angle so the final rotation lands
//! on the valid subspace with probability one instead of overshooting.
//!
//! Writing `sin(theta)^2` for the valid fraction of basis states, one
//! iteration at angle `phi` rotates the state by `Theta` with
//! `sin(Theta / 2) = sin(phi / 2) * sin(theta)`, and the success probability
//! after `j` iterations at `phi = pi` is `sin((2j + 1) * theta)^2`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Control, RegisterLayout};
use crate::encoding::{
    decode_basis_index, uniform_prep, validity_phase_oracle_with_angle, EncodingError,
};
use crate::instance::TspInstance;
use crate::sim::{route_marginals, SimError, StateVector};

#[derive(Debug, Error)]
pub enum AmplifyError {
    #[error("success probability must lie strictly between 0 and 1, got {0}")]
    BadProbability(f64),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
}

/// Fraction of route basis states that encode a valid tour:
/// `(n-1)! / 2^(b * (n-1))`.
pub fn success_probability(n: usize) -> Result<f64, AmplifyError> {
    let layout = RegisterLayout::new(n)?;
    let permutations: f64 = (1..n).map(|k| k as f64).product();
    Ok(permutations / 2f64.powi(layout.route_width() as i32))
}

/// `(n-1)! / (n-1)^(n-1)`: the valid fraction a register with exactly
/// `n - 1` patterns per slot would have.
pub fn permutation_density(n: usize) -> f64 {
    let m = (n - 1) as f64;
    (1..n).map(|k| k as f64 / m).product()
}

/// Stirling approximation of [`permutation_density`]:
/// `sqrt(2 * pi * (n-1)) * e^(-(n-1))`.
pub fn stirling_estimate(n: usize) -> f64 {
    let m = (n - 1) as f64;
    (2.0 * PI * m).sqrt() * (-m).exp()
}

/// Success probability of standard (angle pi) amplification after
/// `iterations` rounds.
pub fn standard_success(p: f64, iterations: u32) -> f64 {
    let theta = p.sqrt().asin();
    ((2.0 * f64::from(iterations) + 1.0) * theta).sin().powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleMode {
    /// Round `pi / (4 * theta) - 1/2` iterations at angle pi.
    Standard,
    /// Phase-matched schedule that reaches the valid subspace exactly.
    Exact,
}

impl fmt::Display for ScheduleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Standard => "standard",
            Self::Exact => "exact",
        })
    }
}

/// Iteration count and oracle angle chosen for a given valid fraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplificationSchedule {
    pub p: f64,
    pub theta: f64,
    pub mode: ScheduleMode,
    pub iterations: u32,
    pub phase_angle: f64,
    pub predicted_success: f64,
}

/// Chooses iterations and angle for a valid fraction `p` strictly between
/// 0 and 1.
///
/// Standard mode stops near the success maximum at angle pi. Exact mode picks
/// the smallest iteration count `J` whose per-iteration rotation can still
/// reach the top, `J = ceil((pi / (2 * theta) - 1) / 2)`, then solves
/// `(2J + 1) * Theta / 2 = pi / 2` for the angle:
/// `phi = 2 * asin(sin(pi / (4J + 2)) / sin(theta))`.
pub fn make_schedule(p: f64, mode: ScheduleMode) -> Result<AmplificationSchedule, AmplifyError> {
    if !p.is_finite() || p <= 0.0 || p >= 1.0 {
        return Err(AmplifyError::BadProbability(p));
    }
    let theta = p.sqrt().asin();
    let (iterations, phase_angle, predicted_success) = match mode {
        ScheduleMode::Standard => {
            let j = (PI / (4.0 * theta) - 0.5).round().max(0.0) as u32;
            (j, PI, standard_success(p, j))
        }
        ScheduleMode::Exact => {
            // With p < 1 the ceiling argument is positive, so J >= 1 and the
            // arcsin argument sin(pi / (4J + 2)) / sin(theta) is at most 1.
            let j = ((PI / (2.0 * theta) - 1.0) / 2.0).ceil() as u32;
            let phi = 2.0 * ((PI / (4.0 * f64::from(j) + 2.0)).sin() / theta.sin()).asin();
            (j, phi, 1.0)
        }
    };
    Ok(AmplificationSchedule { p, theta, mode, iterations, phase_angle, predicted_success })
}

/// One amplification round: validity phase oracle, then the reflection about
/// the uniform superposition (Hadamards around a phase on the all-zero route
/// pattern), both at `phase_angle`.
pub fn grover_iteration(layout: &RegisterLayout, phase_angle: f64) -> Circuit {
    let mut diffusion = Circuit::new(layout.total_qubits());
    for qubit in layout.route_qubits() {
        diffusion.h(qubit);
    }
    diffusion.mcphase(layout.route_qubits().map(Control::neg).collect(), phase_angle);
    for qubit in layout.route_qubits() {
        diffusion.h(qubit);
    }
    validity_phase_oracle_with_angle(layout, phase_angle)
        .compose(&diffusion)
        .expect("widths agree by construction")
}

/// Final state of an amplification run plus the numbers that certify it.
#[derive(Debug, Clone)]
pub struct AmplificationOutcome {
    pub schedule: AmplificationSchedule,
    pub state: StateVector,
    /// Probability of measuring any valid route pattern.
    pub achieved_success: f64,
    /// Largest deviation of a valid pattern's probability from their mean.
    pub uniformity_deviation: f64,
    /// Widest angular spread among the valid patterns' amplitudes.
    pub phase_spread: f64,
    /// Probability mass left on states with any ancilla bit set.
    pub ancilla_leakage: f64,
}

/// Builds the schedule for the instance's register and simulates it.
pub fn amplify_valid(
    instance: &TspInstance,
    mode: ScheduleMode,
) -> Result<AmplificationOutcome, AmplifyError> {
    let schedule = make_schedule(success_probability(instance.n())?, mode)?;
    run_schedule(instance, &schedule)
}

/// Simulates `prep` followed by `schedule.iterations` amplification rounds.
pub fn run_schedule(
    instance: &TspInstance,
    schedule: &AmplificationSchedule,
) -> Result<AmplificationOutcome, AmplifyError> {
    let layout = RegisterLayout::new(instance.n())?;
    let mut state = StateVector::new(layout.total_qubits())?;
    state.run(&uniform_prep(&layout))?;
    let iteration = grover_iteration(&layout, schedule.phase_angle);
    for _ in 0..schedule.iterations {
        state.run(&iteration)?;
    }

    let mut achieved_success = 0.0;
    let mut ancilla_leakage = 0.0;
    let mut valid_probs = Vec::new();
    let mut valid_args = Vec::new();
    for marginal in route_marginals(&state, &layout)? {
        let slots = decode_basis_index(&layout, marginal.route_index)?;
        let valid = {
            let mut seen = vec![false; layout.num_labels()];
            slots.iter().all(|&l| l < layout.num_labels() && !std::mem::replace(&mut seen[l], true))
        };
        for branch in &marginal.branches {
            if branch.ancilla_bits != 0 {
                ancilla_leakage += branch.amplitude.norm_sqr();
            } else if valid {
                valid_args.push(branch.amplitude.arg());
            }
        }
        if valid {
            achieved_success += marginal.probability();
            valid_probs.push(marginal.probability());
        }
    }

    let mean = achieved_success / valid_probs.len() as f64;
    let uniformity_deviation = valid_probs.iter().fold(0.0f64, |acc, &p| acc.max((p - mean).abs()));
    let phase_spread = valid_args
        .split_first()
        .map(|(&first, rest)| {
            rest.iter().fold(0.0f64, |acc, &arg| {
                let delta = (arg - first).rem_euclid(2.0 * PI);
                acc.max(delta.min(2.0 * PI - delta))
            })
        })
        .unwrap_or(0.0);

    Ok(AmplificationOutcome {
        schedule: *schedule,
        state,
        achieved_success,
        uniformity_deviation,
        phase_spread,
        ancilla_leakage,
    })
}
