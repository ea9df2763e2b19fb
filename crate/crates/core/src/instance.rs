//! Asymmetric TSP instances and the classical baselines the quantum encoding
//! is checked against.
//!
//! Internally the start city always carries the highest label `n - 1`; parsing
//! relabels the declared start by swapping it with `n - 1` and keeps the
//! mapping around so tours can be rendered with the caller's original labels.

use serde::Deserialize;
use thiserror::Error;

/// Default cap on brute-force enumeration, (n-1)! tours.
pub const BRUTE_FORCE_LIMIT: usize = 12;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("failed to parse instance document: {0}")]
    Parse(String),
    #[error("instance needs at least 3 cities, got {0}")]
    TooSmall(usize),
    #[error("declared n = {declared} but cost matrix has {rows} rows")]
    SizeMismatch { declared: usize, rows: usize },
    #[error("cost matrix must be square: row {row} has {got} entries, expected {n}")]
    NotSquare { row: usize, got: usize, n: usize },
    #[error("cost[{from}][{to}] = {value} is not a finite non-negative number")]
    BadCost { from: usize, to: usize, value: f64 },
    #[error("start city {start} out of range for {n} cities")]
    StartOutOfRange { start: usize, n: usize },
    #[error("sequence has {got} labels, expected {expected}")]
    WrongTourLength { got: usize, expected: usize },
    #[error("label {label} out of range, non-start cities are 0..={max}")]
    LabelOutOfRange { label: usize, max: usize },
    #[error("sequence is not a permutation of the non-start cities: {0:?}")]
    NotAPermutation(Vec<usize>),
    #[error("brute force enumeration capped at n = {limit}, instance has n = {n}")]
    TooLargeForBruteForce { n: usize, limit: usize },
    #[error("lambda must be a positive finite number, got {0}")]
    BadLambda(f64),
}

/// Directed cost matrix with the start city pinned at label `n - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TspInstance {
    n: usize,
    /// Flat row-major matrix, `cost[from * n + to]`, diagonal zero.
    cost: Vec<f64>,
    /// `original_labels[internal]` is the label the source document used.
    original_labels: Vec<usize>,
}

impl TspInstance {
    /// Builds an instance from a cost matrix and the document's start label.
    ///
    /// The diagonal is forced to zero and the start city is swapped into
    /// internal label `n - 1`.
    pub fn new(cost: Vec<Vec<f64>>, start: usize) -> Result<Self, InstanceError> {
        let n = cost.len();
        if n < 3 {
            return Err(InstanceError::TooSmall(n));
        }
        if start >= n {
            return Err(InstanceError::StartOutOfRange { start, n });
        }
        for (row, entries) in cost.iter().enumerate() {
            if entries.len() != n {
                return Err(InstanceError::NotSquare { row, got: entries.len(), n });
            }
        }
        for (from, entries) in cost.iter().enumerate() {
            for (to, &value) in entries.iter().enumerate() {
                if !value.is_finite() || value < 0.0 {
                    return Err(InstanceError::BadCost { from, to, value });
                }
            }
        }
        // Swap the declared start with n-1 so every downstream component can
        // assume the start city is the highest label.
        let mut original_labels: Vec<usize> = (0..n).collect();
        original_labels.swap(start, n - 1);
        let map = |label: usize| -> usize {
            if label == start {
                n - 1
            } else if label == n - 1 {
                start
            } else {
                label
            }
        };
        let mut flat = vec![0.0; n * n];
        for from in 0..n {
            for to in 0..n {
                if from != to {
                    flat[map(from) * n + map(to)] = cost[from][to];
                }
            }
        }
        Ok(Self { n, cost: flat, original_labels })
    }

    /// Parses a JSON object `{"n", "start", "cost"}` or a bare CSV matrix
    /// (`n` rows of `n` comma-separated reals, start assumed `n - 1`).
    pub fn parse(document: &str) -> Result<Self, InstanceError> {
        if document.trim_start().starts_with('{') {
            Self::from_json(document)
        } else {
            Self::from_csv(document)
        }
    }

    pub fn from_json(document: &str) -> Result<Self, InstanceError> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            n: usize,
            start: usize,
            cost: Vec<Vec<f64>>,
        }
        let doc: Doc =
            serde_json::from_str(document).map_err(|e| InstanceError::Parse(e.to_string()))?;
        if doc.cost.len() != doc.n {
            return Err(InstanceError::SizeMismatch { declared: doc.n, rows: doc.cost.len() });
        }
        Self::new(doc.cost, doc.start)
    }

    pub fn from_csv(document: &str) -> Result<Self, InstanceError> {
        let mut rows = Vec::new();
        for line in document.lines() {
            if line.trim().is_empty() {
                continue;
            }
            let row: Result<Vec<f64>, _> =
                line.split(',').map(|cell| cell.trim().parse::<f64>()).collect();
            rows.push(row.map_err(|e| InstanceError::Parse(format!("bad cell: {e}")))?);
        }
        let n = rows.len();
        if n == 0 {
            return Err(InstanceError::Parse("empty document".into()));
        }
        Self::new(rows, n - 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Internal label of the start city.
    pub fn start(&self) -> usize {
        self.n - 1
    }

    /// Edge cost between internal labels.
    pub fn cost(&self, from: usize, to: usize) -> f64 {
        self.cost[from * self.n + to]
    }

    /// Label the source document used for an internal label.
    pub fn original_label(&self, internal: usize) -> usize {
        self.original_labels[internal]
    }

    pub fn max_edge(&self) -> f64 {
        self.cost.iter().cloned().fold(0.0, f64::max)
    }

    /// Renders a slot sequence as the full round trip in original labels,
    /// e.g. `[4, 2, 3, 1, 0, 4]`.
    pub fn render_round_trip(&self, slots: &[usize]) -> Vec<usize> {
        let start = self.original_label(self.n - 1);
        let mut trip = Vec::with_capacity(slots.len() + 2);
        trip.push(start);
        trip.extend(slots.iter().map(|&l| self.original_label(l)));
        trip.push(start);
        trip
    }
}

/// A valid visiting order of the `n - 1` non-start cities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tour {
    order: Vec<usize>,
}

impl Tour {
    /// Validates that `order` is a permutation of `{0, .., n-2}`.
    pub fn new(order: Vec<usize>, n: usize) -> Result<Self, InstanceError> {
        if order.len() != n - 1 {
            return Err(InstanceError::WrongTourLength { got: order.len(), expected: n - 1 });
        }
        let mut seen = vec![false; n - 1];
        for &label in &order {
            if label >= n - 1 {
                return Err(InstanceError::LabelOutOfRange { label, max: n - 2 });
            }
            if seen[label] {
                return Err(InstanceError::NotAPermutation(order.clone()));
            }
            seen[label] = true;
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }
}

/// Round-trip cost of a slot sequence: start -> slots -> start.
///
/// The sequence does not have to visit every city (repeats allowed), but every
/// label must name a non-start city and the length must be `n - 1`.
pub fn tour_cost(instance: &TspInstance, slots: &[usize]) -> Result<f64, InstanceError> {
    let n = instance.n();
    if slots.len() != n - 1 {
        return Err(InstanceError::WrongTourLength { got: slots.len(), expected: n - 1 });
    }
    for &label in slots {
        if label >= n - 1 {
            return Err(InstanceError::LabelOutOfRange { label, max: n - 2 });
        }
    }
    Ok(round_trip_cost(instance, slots))
}

/// Cost fold without validation, for enumeration loops.
fn round_trip_cost(instance: &TspInstance, slots: &[usize]) -> f64 {
    let start = instance.start();
    let mut total = instance.cost(start, slots[0]);
    for pair in slots.windows(2) {
        total += instance.cost(pair[0], pair[1]);
    }
    total + instance.cost(slots[slots.len() - 1], start)
}

/// Exhaustive optimum over all `(n-1)!` tours; ties resolve to the
/// lexicographically smallest visiting order.
pub fn brute_force_optimum(instance: &TspInstance) -> Result<(Tour, f64), InstanceError> {
    brute_force_optimum_bounded(instance, BRUTE_FORCE_LIMIT)
}

/// [`brute_force_optimum`] with a caller-chosen cap on `n`.
pub fn brute_force_optimum_bounded(
    instance: &TspInstance,
    limit: usize,
) -> Result<(Tour, f64), InstanceError> {
    let (best, _) = enumerate_extremes(instance, limit)?;
    Ok(best)
}

/// Cost of the most expensive valid tour, the tight normalization bound.
pub fn longest_tour_cost(instance: &TspInstance) -> Result<f64, InstanceError> {
    let (_, worst) = enumerate_extremes(instance, BRUTE_FORCE_LIMIT)?;
    Ok(worst.1)
}

type ScoredTour = (Tour, f64);

fn enumerate_extremes(
    instance: &TspInstance,
    limit: usize,
) -> Result<(ScoredTour, ScoredTour), InstanceError> {
    let n = instance.n();
    if n > limit {
        return Err(InstanceError::TooLargeForBruteForce { n, limit });
    }
    let mut slots: Vec<usize> = (0..n - 1).collect();
    let mut best = (slots.clone(), round_trip_cost(instance, &slots));
    let mut worst = best.clone();
    // Lexicographic enumeration plus strict comparisons keeps the first (and
    // therefore lexicographically smallest) order among ties.
    while next_permutation(&mut slots) {
        let cost = round_trip_cost(instance, &slots);
        if cost < best.1 {
            best = (slots.clone(), cost);
        }
        if cost > worst.1 {
            worst = (slots.clone(), cost);
        }
    }
    let wrap = |(order, cost): (Vec<usize>, f64)| (Tour { order }, cost);
    Ok((wrap(best), wrap(worst)))
}

fn next_permutation(xs: &mut [usize]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// How the cost-phase normalization constant is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaMode {
    /// `max_edge * n`, cheap and always available.
    Loose,
    /// Cost of the longest valid tour, needs brute force.
    Tight,
    /// Caller-supplied positive value.
    Explicit(f64),
}

/// Resolves a normalization constant; all-zero instances fall back to 1 so
/// the phase oracle stays well defined.
pub fn lambda_bound(instance: &TspInstance, mode: LambdaMode) -> Result<f64, InstanceError> {
    let value = match mode {
        LambdaMode::Loose => instance.max_edge() * instance.n() as f64,
        LambdaMode::Tight => longest_tour_cost(instance)?,
        LambdaMode::Explicit(value) => {
            if !value.is_finite() || value <= 0.0 {
                return Err(InstanceError::BadLambda(value));
            }
            return Ok(value);
        }
    };
    Ok(if value > 0.0 { value } else { 1.0 })
}

/// Tight bound when brute force is feasible, loose otherwise.
pub fn lambda_auto(instance: &TspInstance) -> Result<f64, InstanceError> {
    if instance.n() <= BRUTE_FORCE_LIMIT {
        lambda_bound(instance, LambdaMode::Tight)
    } else {
        lambda_bound(instance, LambdaMode::Loose)
    }
}
