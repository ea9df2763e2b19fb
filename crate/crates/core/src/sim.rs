//! Dense statevector simulation of the gate IR.
//!
//! Amplitudes are stored little endian: bit `q` of a basis index is the value
//! of qubit `q`, so a `q`-qubit state holds `2^q` complex doubles. All gate
//! applications run in place with one sweep over the amplitude array. `X` and
//! `MCX` are exact permutations and `MCPHASE` is diagonal, so amplitudes that
//! start at exactly zero stay exactly zero under everything except `H`; the
//! marginal extraction below relies on that to report "nonzero branches"
//! without a fuzzy cutoff.

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, RegisterLayout};

/// Hard cap on simulated register width (16 MiB of amplitudes per state at
/// 24 qubits).
pub const QUBIT_CEILING: usize = 24;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("statevector needs between 1 and {max} qubits, got {got}")]
    WidthOutOfRange { got: usize, max: usize },
    #[error("circuit on {circuit} qubits cannot run on a {state}-qubit state")]
    WidthMismatch { circuit: usize, state: usize },
    #[error("basis index {index} out of range for {num_qubits} qubits")]
    BasisOutOfRange { index: usize, num_qubits: usize },
    #[error("qubit {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error(transparent)]
    BadGate(#[from] CircuitError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `num_qubits` qubits.
    pub fn new(num_qubits: usize) -> Result<Self, SimError> {
        Self::from_basis(num_qubits, 0)
    }

    /// A computational basis state.
    pub fn from_basis(num_qubits: usize, index: usize) -> Result<Self, SimError> {
        if num_qubits == 0 || num_qubits > QUBIT_CEILING {
            return Err(SimError::WidthOutOfRange { got: num_qubits, max: QUBIT_CEILING });
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(SimError::BasisOutOfRange { index, num_qubits });
        }
        let mut amps = vec![Complex64::ZERO; dim];
        amps[index] = Complex64::ONE;
        Ok(Self { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<(), SimError> {
        gate.validate(self.num_qubits)?;
        self.apply_unchecked(gate);
        Ok(())
    }

    /// Applies every gate of `circuit` in order.
    pub fn run(&mut self, circuit: &Circuit) -> Result<(), SimError> {
        if circuit.num_qubits() != self.num_qubits {
            return Err(SimError::WidthMismatch {
                circuit: circuit.num_qubits(),
                state: self.num_qubits,
            });
        }
        // Gates were validated when the circuit was built.
        for gate in circuit.gates() {
            self.apply_unchecked(gate);
        }
        Ok(())
    }

    fn apply_unchecked(&mut self, gate: &Gate) {
        match gate {
            Gate::H { target } => {
                let mask = 1usize << target;
                let s = std::f64::consts::FRAC_1_SQRT_2;
                for i in 0..self.amps.len() {
                    if i & mask == 0 {
                        let a = self.amps[i];
                        let b = self.amps[i | mask];
                        self.amps[i] = (a + b) * s;
                        self.amps[i | mask] = (a - b) * s;
                    }
                }
            }
            Gate::X { target } => {
                let mask = 1usize << target;
                for i in 0..self.amps.len() {
                    if i & mask == 0 {
                        self.amps.swap(i, i | mask);
                    }
                }
            }
            Gate::Mcx { controls, target } => {
                let (cmask, cval) = mask_value(controls);
                let mask = 1usize << target;
                for i in 0..self.amps.len() {
                    if i & mask == 0 && i & cmask == cval {
                        self.amps.swap(i, i | mask);
                    }
                }
            }
            Gate::McPhase { conditions, angle } => {
                let (pmask, pval) = mask_value(conditions);
                let factor = Complex64::from_polar(1.0, *angle);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & pmask == pval {
                        *amp *= factor;
                    }
                }
            }
        }
    }

    /// Probability of measuring `qubit` as `value`.
    pub fn subspace_probability(&self, qubit: usize, value: bool) -> Result<f64, SimError> {
        if qubit >= self.num_qubits {
            return Err(SimError::QubitOutOfRange { qubit, num_qubits: self.num_qubits });
        }
        let mask = 1usize << qubit;
        let want = if value { mask } else { 0 };
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == want)
            .map(|(_, amp)| amp.norm_sqr())
            .sum())
    }
}

fn mask_value(controls: &[crate::circuit::Control]) -> (usize, usize) {
    let mut mask = 0usize;
    let mut value = 0usize;
    for c in controls {
        mask |= 1 << c.qubit;
        if c.value {
            value |= 1 << c.qubit;
        }
    }
    (mask, value)
}

/// Ancilla branch of one route pattern: the parity/flag bits (little endian,
/// parity 0 lowest, flag highest) and their amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AncillaBranch {
    pub ancilla_bits: usize,
    pub amplitude: Complex64,
}

impl AncillaBranch {
    pub fn flag(&self, layout: &RegisterLayout) -> bool {
        self.ancilla_bits >> layout.num_labels() & 1 == 1
    }
}

/// Amplitude content of one route basis pattern across ancilla branches.
///
/// When the ancillas are classical functions of the route (the usual case for
/// the oracles here) there is exactly one branch; entangled or superposed
/// ancillas simply show up as several branches.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteMarginal {
    /// Raw route-register bits; decode with the encoding helpers.
    pub route_index: usize,
    pub branches: Vec<AncillaBranch>,
}

impl RouteMarginal {
    /// Total probability of this route pattern.
    pub fn probability(&self) -> f64 {
        self.branches.iter().map(|b| b.amplitude.norm_sqr()).sum()
    }

    /// The amplitude when exactly one ancilla branch is populated.
    pub fn unique_branch(&self) -> Option<&AncillaBranch> {
        match self.branches.as_slice() {
            [single] => Some(single),
            _ => None,
        }
    }
}

/// Groups a state by route pattern, listing the ancilla branches with
/// amplitude different from exact zero.
pub fn route_marginals(
    state: &StateVector,
    layout: &RegisterLayout,
) -> Result<Vec<RouteMarginal>, SimError> {
    if layout.total_qubits() != state.num_qubits() {
        return Err(SimError::WidthMismatch {
            circuit: layout.total_qubits(),
            state: state.num_qubits(),
        });
    }
    let route_bits = layout.route_width();
    let route_dim = 1usize << route_bits;
    let ancilla_dim = 1usize << (layout.num_labels() + 1);
    let mut marginals: Vec<RouteMarginal> = (0..route_dim)
        .map(|route_index| RouteMarginal { route_index, branches: Vec::new() })
        .collect();
    for ancilla_bits in 0..ancilla_dim {
        let base = ancilla_bits << route_bits;
        for (route_index, marginal) in marginals.iter_mut().enumerate() {
            let amplitude = state.amplitude(base | route_index);
            if amplitude != Complex64::ZERO {
                marginal.branches.push(AncillaBranch { ancilla_bits, amplitude });
            }
        }
    }
    Ok(marginals)
}
