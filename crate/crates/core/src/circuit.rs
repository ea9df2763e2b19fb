//! Gate-level intermediate representation for the time-register encoding.
//!
//! The register holds `T = n - 1` label slots of `b = ceil(log2(n - 1))`
//! qubits each (little endian within a slot), one parity ancilla per
//! non-start city, and a single validity flag:
//!
//! ```text
//! qubit 0 .. T*b-1          route register, slot t at [t*b, (t+1)*b)
//! qubit T*b .. T*b+n-2      parity ancillas, one per label
//! qubit T*b + n - 1         validity flag
//! ```
//!
//! Only four gate kinds exist. `H` and `X` are plain single-qubit gates.
//! `MCX` flips its target when every polarity control matches. `MCPHASE` is a
//! diagonal phase on a full condition pattern: it multiplies the amplitude of
//! every basis state matching the pattern by `e^(i*angle)`. Keeping the whole
//! pattern in the condition list (instead of singling out a target qubit)
//! lets a phase land on an all-zeros label pattern, and makes the census
//! arity of a label phase equal to the label width `b`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("register layout needs at least 3 cities, got {0}")]
    TooFewCities(usize),
    #[error("cannot compose circuits on {left} and {right} qubits")]
    QubitCountMismatch { left: usize, right: usize },
    #[error("{kind} gate touches qubit {qubit}, register has {num_qubits} qubits")]
    QubitOutOfRange { kind: GateKind, qubit: usize, num_qubits: usize },
    #[error("{kind} gate uses qubit {qubit} twice")]
    DuplicateQubit { kind: GateKind, qubit: usize },
    #[error("phase gate needs at least one condition qubit")]
    EmptyPhasePattern,
}

/// Static qubit map for an `n`-city instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegisterLayout {
    n: usize,
    t_slots: usize,
    bits_per_label: usize,
}

impl RegisterLayout {
    pub fn new(n: usize) -> Result<Self, CircuitError> {
        if n < 3 {
            return Err(CircuitError::TooFewCities(n));
        }
        let labels = n - 1;
        let bits_per_label = (labels - 1).ilog2() as usize + 1;
        Ok(Self { n, t_slots: labels, bits_per_label })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of time slots, `n - 1`.
    pub fn t_slots(&self) -> usize {
        self.t_slots
    }

    /// Qubits per label slot, `ceil(log2(n - 1))`.
    pub fn bits_per_label(&self) -> usize {
        self.bits_per_label
    }

    /// Number of distinct non-start labels, `n - 1`.
    pub fn num_labels(&self) -> usize {
        self.n - 1
    }

    /// Width of the route register, `T * b`.
    pub fn route_width(&self) -> usize {
        self.t_slots * self.bits_per_label
    }

    /// Bit `k` (little endian) of slot `t`.
    pub fn route_qubit(&self, t: usize, k: usize) -> usize {
        debug_assert!(t < self.t_slots && k < self.bits_per_label);
        t * self.bits_per_label + k
    }

    pub fn slot_qubits(&self, t: usize) -> Range<usize> {
        t * self.bits_per_label..(t + 1) * self.bits_per_label
    }

    pub fn route_qubits(&self) -> Range<usize> {
        0..self.route_width()
    }

    /// Parity ancilla for label `i`.
    pub fn parity_qubit(&self, i: usize) -> usize {
        debug_assert!(i < self.num_labels());
        self.route_width() + i
    }

    pub fn flag_qubit(&self) -> usize {
        self.route_width() + self.num_labels()
    }

    /// `T*b` route qubits + `n-1` parity ancillas + 1 flag.
    pub fn total_qubits(&self) -> usize {
        self.route_width() + self.num_labels() + 1
    }
}

/// A polarity-carrying condition: the qubit must read `value` to match.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Control {
    pub qubit: usize,
    pub value: bool,
}

impl Control {
    pub fn pos(qubit: usize) -> Self {
        Self { qubit, value: true }
    }

    pub fn neg(qubit: usize) -> Self {
        Self { qubit, value: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GateKind {
    H,
    X,
    Mcx,
    McPhase,
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Mcx => "MCX",
            GateKind::McPhase => "MCPHASE",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    H {
        target: usize,
    },
    X {
        target: usize,
    },
    /// Flip `target` when every control matches its polarity.
    Mcx {
        controls: Vec<Control>,
        target: usize,
    },
    /// Multiply amplitudes of basis states matching the whole condition
    /// pattern by `e^(i*angle)`.
    McPhase {
        conditions: Vec<Control>,
        angle: f64,
    },
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::H { .. } => GateKind::H,
            Gate::X { .. } => GateKind::X,
            Gate::Mcx { .. } => GateKind::Mcx,
            Gate::McPhase { .. } => GateKind::McPhase,
        }
    }

    /// Census arity: control count for MCX, condition-pattern width for
    /// MCPHASE, zero for the single-qubit kinds.
    pub fn census_arity(&self) -> usize {
        match self {
            Gate::H { .. } | Gate::X { .. } => 0,
            Gate::Mcx { controls, .. } => controls.len(),
            Gate::McPhase { conditions, .. } => conditions.len(),
        }
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::McPhase { conditions, angle } => {
                Gate::McPhase { conditions: conditions.clone(), angle: -angle }
            }
            other => other.clone(),
        }
    }

    fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H { target } | Gate::X { target } => vec![*target],
            Gate::Mcx { controls, target } => {
                let mut qs: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
                qs.push(*target);
                qs
            }
            Gate::McPhase { conditions, .. } => conditions.iter().map(|c| c.qubit).collect(),
        }
    }

    /// Checks index bounds and qubit distinctness against a register width.
    pub fn validate(&self, num_qubits: usize) -> Result<(), CircuitError> {
        if let Gate::McPhase { conditions, .. } = self {
            if conditions.is_empty() {
                return Err(CircuitError::EmptyPhasePattern);
            }
        }
        let mut qubits = self.qubits();
        for &qubit in &qubits {
            if qubit >= num_qubits {
                return Err(CircuitError::QubitOutOfRange { kind: self.kind(), qubit, num_qubits });
            }
        }
        qubits.sort_unstable();
        for pair in qubits.windows(2) {
            if pair[0] == pair[1] {
                return Err(CircuitError::DuplicateQubit { kind: self.kind(), qubit: pair[0] });
            }
        }
        Ok(())
    }
}

/// Gate count per `(kind, census arity)`.
pub type Census = BTreeMap<(GateKind, usize), u64>;

/// An ordered gate list on a fixed-width register.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits, gates: Vec::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn try_push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends a gate; panics on a malformed one (caller bug).
    pub fn push(&mut self, gate: Gate) {
        self.try_push(gate).expect("well-formed gate");
    }

    pub fn h(&mut self, target: usize) {
        self.push(Gate::H { target });
    }

    pub fn x(&mut self, target: usize) {
        self.push(Gate::X { target });
    }

    pub fn mcx(&mut self, controls: Vec<Control>, target: usize) {
        self.push(Gate::Mcx { controls, target });
    }

    pub fn mcphase(&mut self, conditions: Vec<Control>, angle: f64) {
        self.push(Gate::McPhase { conditions, angle });
    }

    /// `self` followed by `other` on the same register.
    pub fn compose(&self, other: &Circuit) -> Result<Circuit, CircuitError> {
        if self.num_qubits != other.num_qubits {
            return Err(CircuitError::QubitCountMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        let mut gates = Vec::with_capacity(self.gates.len() + other.gates.len());
        gates.extend_from_slice(&self.gates);
        gates.extend_from_slice(&other.gates);
        Ok(Circuit { num_qubits: self.num_qubits, gates })
    }

    /// Exact inverse: reversed order, phase angles negated.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    pub fn census(&self) -> Census {
        let mut census = Census::new();
        for gate in &self.gates {
            *census.entry((gate.kind(), gate.census_arity())).or_insert(0) += 1;
        }
        census
    }

    /// Rewrites every negative polarity into an X-conjugation pair, yielding
    /// an equivalent circuit whose multi-controlled gates are all-positive.
    /// Useful when a census should count the conjugation gates explicitly.
    pub fn lower_polarities(&self) -> Circuit {
        let mut lowered = Circuit::new(self.num_qubits);
        for gate in &self.gates {
            let (flips, positive): (Vec<usize>, Gate) = match gate {
                Gate::Mcx { controls, target } => (
                    controls.iter().filter(|c| !c.value).map(|c| c.qubit).collect(),
                    Gate::Mcx {
                        controls: controls.iter().map(|c| Control::pos(c.qubit)).collect(),
                        target: *target,
                    },
                ),
                Gate::McPhase { conditions, angle } => (
                    conditions.iter().filter(|c| !c.value).map(|c| c.qubit).collect(),
                    Gate::McPhase {
                        conditions: conditions.iter().map(|c| Control::pos(c.qubit)).collect(),
                        angle: *angle,
                    },
                ),
                single => (Vec::new(), single.clone()),
            };
            for &qubit in &flips {
                lowered.x(qubit);
            }
            lowered.push(positive);
            for &qubit in flips.iter().rev() {
                lowered.x(qubit);
            }
        }
        lowered
    }
}

/// Debug dump, one gate per line:
///
/// ```text
/// H 3
/// X 5
/// MCX 12 +8+9-10
/// MCPHASE +0+1-2 1.5707963267948966
/// ```
impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn signed(controls: &[Control]) -> String {
            controls
                .iter()
                .map(|c| format!("{}{}", if c.value { '+' } else { '-' }, c.qubit))
                .collect()
        }
        for gate in &self.gates {
            match gate {
                Gate::H { target } => writeln!(f, "H {target}")?,
                Gate::X { target } => writeln!(f, "X {target}")?,
                Gate::Mcx { controls, target } if controls.is_empty() => {
                    writeln!(f, "MCX {target}")?
                }
                Gate::Mcx { controls, target } => writeln!(f, "MCX {target} {}", signed(controls))?,
                Gate::McPhase { conditions, angle } => {
                    writeln!(f, "MCPHASE {} {angle}", signed(conditions))?
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_dimensions() {
        let l5 = RegisterLayout::new(5).unwrap();
        assert_eq!((l5.t_slots(), l5.bits_per_label()), (4, 2));
        assert_eq!(l5.route_width(), 8);
        assert_eq!(l5.total_qubits(), 13);

        let l3 = RegisterLayout::new(3).unwrap();
        assert_eq!((l3.t_slots(), l3.bits_per_label()), (2, 1));
        assert_eq!(l3.total_qubits(), 5);

        let l4 = RegisterLayout::new(4).unwrap();
        assert_eq!((l4.t_slots(), l4.bits_per_label()), (3, 2));
        assert_eq!(l4.total_qubits(), 10);

        let l6 = RegisterLayout::new(6).unwrap();
        assert_eq!((l6.t_slots(), l6.bits_per_label()), (5, 3));
        assert_eq!(l6.total_qubits(), 21);

        assert!(matches!(RegisterLayout::new(2), Err(CircuitError::TooFewCities(2))));
    }

    #[test]
    fn layout_qubit_map() {
        let l = RegisterLayout::new(5).unwrap();
        assert_eq!(l.route_qubit(0, 0), 0);
        assert_eq!(l.route_qubit(1, 0), 2);
        assert_eq!(l.route_qubit(3, 1), 7);
        assert_eq!(l.slot_qubits(2), 4..6);
        assert_eq!(l.parity_qubit(0), 8);
        assert_eq!(l.parity_qubit(3), 11);
        assert_eq!(l.flag_qubit(), 12);
    }

    #[test]
    fn gate_validation() {
        let mut c = Circuit::new(3);
        assert!(matches!(
            c.try_push(Gate::H { target: 3 }),
            Err(CircuitError::QubitOutOfRange { qubit: 3, .. })
        ));
        assert!(matches!(
            c.try_push(Gate::Mcx { controls: vec![Control::pos(1)], target: 1 }),
            Err(CircuitError::DuplicateQubit { qubit: 1, .. })
        ));
        assert!(matches!(
            c.try_push(Gate::Mcx { controls: vec![Control::pos(0), Control::neg(0)], target: 1 }),
            Err(CircuitError::DuplicateQubit { qubit: 0, .. })
        ));
        assert!(matches!(
            c.try_push(Gate::McPhase { conditions: vec![], angle: 1.0 }),
            Err(CircuitError::EmptyPhasePattern)
        ));
        assert!(c.try_push(Gate::Mcx { controls: vec![], target: 0 }).is_ok());
    }

    #[test]
    fn inverse_negates_phases_and_reverses_order() {
        let mut c = Circuit::new(2);
        c.h(0);
        c.mcphase(vec![Control::pos(0), Control::pos(1)], 0.75);
        c.x(1);
        let inv = c.inverse();
        assert_eq!(inv.gates()[0], Gate::X { target: 1 });
        assert_eq!(
            inv.gates()[1],
            Gate::McPhase { conditions: vec![Control::pos(0), Control::pos(1)], angle: -0.75 }
        );
        assert_eq!(inv.gates()[2], Gate::H { target: 0 });
        assert_eq!(inv.inverse(), c);
    }

    #[test]
    fn compose_concatenates_and_checks_width() {
        let mut a = Circuit::new(2);
        a.h(0);
        let mut b = Circuit::new(2);
        b.x(1);
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.len(), 2);
        assert_eq!(ab.gates()[0].kind(), GateKind::H);
        assert_eq!(ab.gates()[1].kind(), GateKind::X);

        let wide = Circuit::new(3);
        assert!(matches!(
            a.compose(&wide),
            Err(CircuitError::QubitCountMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn census_counts_by_kind_and_arity() {
        assert!(Circuit::new(4).census().is_empty());
        let mut c = Circuit::new(4);
        c.h(0);
        c.h(1);
        c.mcx(vec![Control::pos(0), Control::neg(1)], 2);
        c.mcphase(vec![Control::pos(0), Control::pos(1)], 0.5);
        c.mcphase(vec![Control::neg(2)], 0.25);
        let census = c.census();
        assert_eq!(census[&(GateKind::H, 0)], 2);
        assert_eq!(census[&(GateKind::Mcx, 2)], 1);
        assert_eq!(census[&(GateKind::McPhase, 2)], 1);
        assert_eq!(census[&(GateKind::McPhase, 1)], 1);

        // Census distributes over composition.
        let doubled = c.compose(&c).unwrap().census();
        for (key, count) in census {
            assert_eq!(doubled[&key], 2 * count);
        }
    }

    #[test]
    fn lowering_expands_negative_polarities() {
        let mut c = Circuit::new(3);
        c.mcx(vec![Control::neg(1), Control::pos(2)], 0);
        let lowered = c.lower_polarities();
        assert_eq!(
            lowered.gates(),
            &[
                Gate::X { target: 1 },
                Gate::Mcx { controls: vec![Control::pos(1), Control::pos(2)], target: 0 },
                Gate::X { target: 1 },
            ]
        );
        let census = lowered.census();
        assert_eq!(census[&(GateKind::X, 0)], 2);
        assert_eq!(census[&(GateKind::Mcx, 2)], 1);
    }

    #[test]
    fn dump_format_is_stable() {
        let mut c = Circuit::new(13);
        c.h(3);
        c.x(5);
        c.mcx(vec![Control::pos(8), Control::pos(9), Control::neg(10)], 12);
        c.mcphase(
            vec![Control::pos(0), Control::pos(1), Control::neg(2)],
            std::f64::consts::FRAC_PI_2,
        );
        assert_eq!(c.to_string(), "H 3\nX 5\nMCX 12 +8+9-10\nMCPHASE +0+1-2 1.5707963267948966\n");
    }
}
