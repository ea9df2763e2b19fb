//! Oracles binding a TSP instance to the time-register layout.
//!
//! A route basis state assigns one label per time slot. The validity oracle
//! marks permutations of the non-start cities: one comparator per (slot,
//! label) pair toggles that label's parity ancilla, and a final conjunction
//! over all parity ancillas raises the flag. Since every slot matches at most
//! one comparator, all `n - 1` parities can only be odd simultaneously when
//! every label appears exactly once, which also rules out the out-of-range
//! bit patterns that exist whenever `2^b > n - 1`.
//!
//! The cost oracle is diagonal: each start transition, adjacent slot pair and
//! return transition contributes a phase gate conditioned on the label bits
//! involved, rotating a matching amplitude by `edge_cost / lambda`. Labels
//! outside `0..n-1` contribute no phase. The gate set only depends on the
//! instance through the angles, so the census is instance independent when
//! zero-angle gates are kept.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, Control, RegisterLayout};
use crate::instance::TspInstance;

#[derive(Debug, Error)]
pub enum EncodingError {
    #[error("lambda must be a positive finite number, got {0}")]
    BadLambda(f64),
    #[error("layout is for {layout} cities, instance has {instance}")]
    LayoutMismatch { layout: usize, instance: usize },
    #[error("route index {index} out of range, register encodes {dim} patterns")]
    RouteIndexOutOfRange { index: usize, dim: usize },
    #[error("expected {expected} slot labels, got {got}")]
    WrongSlotCount { got: usize, expected: usize },
    #[error("slot label {label} does not fit in {bits} bits")]
    LabelTooWide { label: usize, bits: usize },
}

/// Parameters of the cost phase oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncodingConfig {
    /// Normalization constant; phases are `cost / lambda`.
    pub lambda: f64,
    /// Emit phase gates even when their angle is exactly zero, keeping the
    /// census at its instance-independent size.
    pub include_zero_angle_gates: bool,
}

impl EncodingConfig {
    pub fn new(lambda: f64) -> Result<Self, EncodingError> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(EncodingError::BadLambda(lambda));
        }
        Ok(Self { lambda, include_zero_angle_gates: false })
    }

    pub fn with_zero_angle_gates(mut self, include: bool) -> Self {
        self.include_zero_angle_gates = include;
        self
    }
}

/// Polarity pattern matching label `value` in slot `t` (little endian).
fn slot_pattern(layout: &RegisterLayout, t: usize, value: usize) -> Vec<Control> {
    (0..layout.bits_per_label())
        .map(|k| Control { qubit: layout.route_qubit(t, k), value: value >> k & 1 == 1 })
        .collect()
}

/// Hadamards every route qubit: the uniform superposition over all `2^(T*b)`
/// route patterns.
pub fn uniform_prep(layout: &RegisterLayout) -> Circuit {
    let mut circuit = Circuit::new(layout.total_qubits());
    for qubit in layout.route_qubits() {
        circuit.h(qubit);
    }
    circuit
}

/// Computes the per-label parities and the validity flag.
///
/// Ancillas are left holding the parities; they are uncomputed only by the
/// phase-oracle wrapper. Census: `(n-1)^2` MCX of arity `b` plus one MCX of
/// arity `n-1`.
pub fn validity_oracle(layout: &RegisterLayout) -> Circuit {
    let mut circuit = Circuit::new(layout.total_qubits());
    for t in 0..layout.t_slots() {
        for label in 0..layout.num_labels() {
            circuit.mcx(slot_pattern(layout, t, label), layout.parity_qubit(label));
        }
    }
    let parities = (0..layout.num_labels()).map(|i| Control::pos(layout.parity_qubit(i))).collect();
    circuit.mcx(parities, layout.flag_qubit());
    circuit
}

/// Diagonal validity marker: phases valid route patterns by `e^(i*angle)` and
/// returns every ancilla to zero (compute, phase the flag, uncompute).
pub fn validity_phase_oracle_with_angle(layout: &RegisterLayout, angle: f64) -> Circuit {
    let compute = validity_oracle(layout);
    let mut phase = Circuit::new(layout.total_qubits());
    phase.mcphase(vec![Control::pos(layout.flag_qubit())], angle);
    compute
        .compose(&phase)
        .and_then(|c| c.compose(&compute.inverse()))
        .expect("widths agree by construction")
}

/// [`validity_phase_oracle_with_angle`] at the standard angle pi.
pub fn validity_phase_oracle(layout: &RegisterLayout) -> Circuit {
    validity_phase_oracle_with_angle(layout, std::f64::consts::PI)
}

/// Diagonal cost oracle: rotates every route pattern by its in-range
/// round-trip cost over `lambda`.
///
/// Census with zero-angle gates kept: `2(n-1)` phases of arity `b` (start and
/// return edges) plus `(T-1)(n-1)^2` phases of arity `2b` (adjacent pairs).
pub fn cost_oracle(
    instance: &TspInstance,
    layout: &RegisterLayout,
    config: &EncodingConfig,
) -> Result<Circuit, EncodingError> {
    if layout.n() != instance.n() {
        return Err(EncodingError::LayoutMismatch { layout: layout.n(), instance: instance.n() });
    }
    if !config.lambda.is_finite() || config.lambda <= 0.0 {
        return Err(EncodingError::BadLambda(config.lambda));
    }
    let start = instance.start();
    let labels = layout.num_labels();
    let last = layout.t_slots() - 1;
    let mut circuit = Circuit::new(layout.total_qubits());
    let mut phase = |pattern: Vec<Control>, cost: f64| {
        let angle = cost / config.lambda;
        if angle != 0.0 || config.include_zero_angle_gates {
            circuit.mcphase(pattern, angle);
        }
    };
    for j in 0..labels {
        phase(slot_pattern(layout, 0, j), instance.cost(start, j));
    }
    for t in 0..last {
        for i in 0..labels {
            for j in 0..labels {
                let mut pattern = slot_pattern(layout, t, i);
                pattern.extend(slot_pattern(layout, t + 1, j));
                phase(pattern, instance.cost(i, j));
            }
        }
    }
    for j in 0..labels {
        phase(slot_pattern(layout, last, j), instance.cost(j, start));
    }
    Ok(circuit)
}

/// Slot labels encoded in a route basis index (little endian slots).
pub fn decode_basis_index(
    layout: &RegisterLayout,
    index: usize,
) -> Result<Vec<usize>, EncodingError> {
    let dim = 1usize << layout.route_width();
    if index >= dim {
        return Err(EncodingError::RouteIndexOutOfRange { index, dim });
    }
    let mask = (1usize << layout.bits_per_label()) - 1;
    Ok((0..layout.t_slots()).map(|t| index >> (t * layout.bits_per_label()) & mask).collect())
}

/// Route basis index whose slots hold `labels`.
pub fn encode_basis_index(
    layout: &RegisterLayout,
    labels: &[usize],
) -> Result<usize, EncodingError> {
    if labels.len() != layout.t_slots() {
        return Err(EncodingError::WrongSlotCount {
            got: labels.len(),
            expected: layout.t_slots(),
        });
    }
    let bits = layout.bits_per_label();
    let mut index = 0usize;
    for (t, &label) in labels.iter().enumerate() {
        if label >> bits != 0 {
            return Err(EncodingError::LabelTooWide { label, bits });
        }
        index |= label << (t * bits);
    }
    Ok(index)
}

/// Classical mirror of the two oracles for one route pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct TourRecord {
    pub slots: Vec<usize>,
    /// Whether the slots visit every non-start city exactly once.
    pub valid: bool,
    /// Round-trip cost over the in-range transitions; equals the full tour
    /// cost when every label is a real city.
    pub cost: f64,
    /// `cost / lambda`, the rotation the cost oracle applies.
    pub phase: f64,
}

/// Classifies a slot sequence exactly as the oracles see it: any label that
/// fits the slot width is accepted, labels `>= n - 1` contribute neither to
/// validity nor to cost.
pub fn classify(
    instance: &TspInstance,
    slots: &[usize],
    config: &EncodingConfig,
) -> Result<TourRecord, EncodingError> {
    let layout = RegisterLayout::new(instance.n()).expect("instance guarantees n >= 3");
    if slots.len() != layout.t_slots() {
        return Err(EncodingError::WrongSlotCount { got: slots.len(), expected: layout.t_slots() });
    }
    let bits = layout.bits_per_label();
    for &label in slots {
        if label >> bits != 0 {
            return Err(EncodingError::LabelTooWide { label, bits });
        }
    }
    let n = instance.n();
    let labels = n - 1;
    let start = instance.start();
    let mut counts = vec![0usize; labels];
    for &label in slots {
        if label < labels {
            counts[label] += 1;
        }
    }
    let valid = slots.iter().all(|&l| l < labels) && counts.iter().all(|&c| c == 1);
    let mut cost = 0.0;
    if slots[0] < labels {
        cost += instance.cost(start, slots[0]);
    }
    for pair in slots.windows(2) {
        if pair[0] < labels && pair[1] < labels {
            cost += instance.cost(pair[0], pair[1]);
        }
    }
    if slots[slots.len() - 1] < labels {
        cost += instance.cost(slots[slots.len() - 1], start);
    }
    Ok(TourRecord { slots: slots.to_vec(), valid, cost, phase: cost / config.lambda })
}

/// Classifies every route pattern, sorted by (valid desc, phase asc, slots
/// lex): the valid tours come first in cost order.
pub fn tour_table(
    instance: &TspInstance,
    config: &EncodingConfig,
) -> Result<Vec<TourRecord>, EncodingError> {
    let layout = RegisterLayout::new(instance.n()).expect("instance guarantees n >= 3");
    let dim = 1usize << layout.route_width();
    let mut records = Vec::with_capacity(dim);
    for index in 0..dim {
        let slots = decode_basis_index(&layout, index)?;
        records.push(classify(instance, &slots, config)?);
    }
    records.sort_by(|a, b| {
        b.valid
            .cmp(&a.valid)
            .then(a.phase.partial_cmp(&b.phase).expect("phases are finite"))
            .then(a.slots.cmp(&b.slots))
    });
    Ok(records)
}

/// One emitted table row; the tour is the full round trip in the source
/// document's labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TourTableRow {
    pub tour: Vec<usize>,
    pub cost: f64,
    pub phi: f64,
    pub valid: bool,
}

pub fn table_rows(instance: &TspInstance, records: &[TourRecord]) -> Vec<TourTableRow> {
    records
        .iter()
        .map(|r| TourTableRow {
            tour: instance.render_round_trip(&r.slots),
            cost: r.cost,
            phi: r.phase,
            valid: r.valid,
        })
        .collect()
}

/// CSV with header `tour,cost,phi,valid`; the tour field is quoted, numbers
/// keep full round-trip precision, validity is 1/0.
pub fn rows_to_csv(rows: &[TourTableRow]) -> String {
    let mut out = String::from("tour,cost,phi,valid\n");
    for row in rows {
        let tour: Vec<String> = row.tour.iter().map(usize::to_string).collect();
        out.push_str(&format!(
            "\"[{}]\",{},{},{}\n",
            tour.join(", "),
            row.cost,
            row.phi,
            u8::from(row.valid)
        ));
    }
    out
}

pub fn rows_to_json(rows: &[TourTableRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}
