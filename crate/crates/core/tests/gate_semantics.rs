//! Checks the simulator against an independent dense-matrix model: every
//! gate is rebuilt as an explicit `2^q x 2^q` unitary from its textbook
//! definition and multiplied out by hand.

use num_complex::Complex64;
use proptest::prelude::*;
use qtsp_core::circuit::{Circuit, Control, Gate};
use qtsp_core::sim::StateVector;

type Matrix = Vec<Vec<Complex64>>;

fn pattern_fires(pattern: &[Control], basis: usize) -> bool {
    pattern.iter().all(|c| (basis >> c.qubit & 1 == 1) == c.value)
}

// Rows are addressed by computed basis indices (`input ^ mask`), so plain
// index loops read closer to the matrix definitions than iterators would.
#[allow(clippy::needless_range_loop)]
fn gate_matrix(gate: &Gate, num_qubits: usize) -> Matrix {
    let dim = 1usize << num_qubits;
    let mut matrix = vec![vec![Complex64::ZERO; dim]; dim];
    match gate {
        Gate::H { target } => {
            let scale = std::f64::consts::FRAC_1_SQRT_2;
            for input in 0..dim {
                for output in 0..dim {
                    if (input ^ output) & !(1 << target) == 0 {
                        let sign = if input >> target & 1 == 1 && output >> target & 1 == 1 {
                            -1.0
                        } else {
                            1.0
                        };
                        matrix[output][input] = Complex64::new(scale * sign, 0.0);
                    }
                }
            }
        }
        Gate::X { target } => {
            for input in 0..dim {
                matrix[input ^ (1 << target)][input] = Complex64::ONE;
            }
        }
        Gate::Mcx { controls, target } => {
            for input in 0..dim {
                let output =
                    if pattern_fires(controls, input) { input ^ (1 << target) } else { input };
                matrix[output][input] = Complex64::ONE;
            }
        }
        Gate::McPhase { conditions, angle } => {
            for input in 0..dim {
                matrix[input][input] = if pattern_fires(conditions, input) {
                    Complex64::from_polar(1.0, *angle)
                } else {
                    Complex64::ONE
                };
            }
        }
    }
    matrix
}

fn apply_matrix(matrix: &Matrix, state: &[Complex64]) -> Vec<Complex64> {
    matrix.iter().map(|row| row.iter().zip(state).map(|(entry, amp)| entry * amp).sum()).collect()
}

fn gate_strategy(num_qubits: usize) -> impl Strategy<Value = Gate> {
    let qubits: Vec<usize> = (0..num_qubits).collect();
    prop_oneof![
        (0..num_qubits).prop_map(|target| Gate::H { target }),
        (0..num_qubits).prop_map(|target| Gate::X { target }),
        (proptest::sample::subsequence(qubits.clone(), 1..=num_qubits), any::<u32>()).prop_map(
            |(mut chosen, polarities)| {
                let target = chosen.pop().expect("subsequence is non-empty");
                let controls = chosen
                    .into_iter()
                    .enumerate()
                    .map(|(i, qubit)| Control { qubit, value: polarities >> i & 1 == 1 })
                    .collect();
                Gate::Mcx { controls, target }
            }
        ),
        (proptest::sample::subsequence(qubits, 1..=num_qubits), any::<u32>(), -7.0..7.0f64,)
            .prop_map(|(chosen, polarities, angle)| Gate::McPhase {
                conditions: chosen
                    .into_iter()
                    .enumerate()
                    .map(|(i, qubit)| Control { qubit, value: polarities >> i & 1 == 1 })
                    .collect(),
                angle,
            }),
    ]
}

fn circuit_strategy(num_qubits: usize) -> impl Strategy<Value = Circuit> {
    proptest::collection::vec(gate_strategy(num_qubits), 0..16).prop_map(move |gates| {
        let mut circuit = Circuit::new(num_qubits);
        for gate in gates {
            circuit.push(gate);
        }
        circuit
    })
}

/// Random width up to six qubits, a random circuit on it, and a random
/// starting basis state.
fn case_strategy() -> impl Strategy<Value = (usize, Circuit, usize)> {
    (1..=6usize).prop_flat_map(|q| (Just(q), circuit_strategy(q), 0..1usize << q))
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn simulator_agrees_with_dense_matrices((num_qubits, circuit, basis) in case_strategy()) {
        let mut simulated = StateVector::from_basis(num_qubits, basis).unwrap();
        let mut dense = vec![Complex64::ZERO; 1 << num_qubits];
        dense[basis] = Complex64::ONE;
        for gate in circuit.gates() {
            simulated.apply_gate(gate).unwrap();
            dense = apply_matrix(&gate_matrix(gate, num_qubits), &dense);
            for (s, d) in simulated.amplitudes().iter().zip(&dense) {
                prop_assert!((s - d).norm() <= 1e-12, "gate {gate:?}");
            }
        }
        prop_assert!((simulated.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn circuit_then_inverse_is_identity((num_qubits, circuit, basis) in case_strategy()) {
        let mut state = StateVector::from_basis(num_qubits, basis).unwrap();
        state.run(&circuit).unwrap();
        state.run(&circuit.inverse()).unwrap();
        for (index, amp) in state.amplitudes().iter().enumerate() {
            let expected = if index == basis { Complex64::ONE } else { Complex64::ZERO };
            prop_assert!((amp - expected).norm() <= 1e-9);
        }
    }

    #[test]
    fn polarity_lowering_preserves_semantics((num_qubits, circuit, basis) in case_strategy()) {
        let mut direct = StateVector::from_basis(num_qubits, basis).unwrap();
        direct.run(&circuit).unwrap();
        let mut lowered = StateVector::from_basis(num_qubits, basis).unwrap();
        lowered.run(&circuit.lower_polarities()).unwrap();
        for (a, b) in direct.amplitudes().iter().zip(lowered.amplitudes()) {
            prop_assert!((a - b).norm() <= 1e-12);
        }
    }
}
