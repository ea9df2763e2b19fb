//! Gate censuses, hardware-cost estimates and scaling fits.
//!
//! The census of a circuit (how many gates of each kind and arity) is exact;
//! everything else here is a model on top of it. Multi-controlled gates are
//! priced linearly in their arity, phase gates pay an extra synthesis
//! surcharge of `ceil(log2(1 / epsilon))` T gates, and depth is gate count
//! unless disjoint slot pairs are allowed to run their transition phases in
//! parallel.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Census, CircuitError, GateKind, RegisterLayout};
use crate::encoding::{cost_oracle, uniform_prep, validity_oracle, EncodingConfig, EncodingError};
use crate::instance::{InstanceError, TspInstance};

#[derive(Debug, Error)]
pub enum ResourceError {
    #[error("scaling fit needs at least {need} city counts, got {got}")]
    TooFewPoints { got: usize, need: usize },
    #[error("scaling fit needs city counts of at least 4, got {0}")]
    CityCountTooSmall(usize),
    #[error("epsilon must lie in (0, 1), got {0}")]
    BadEpsilon(f64),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// Cost of one multi-controlled gate as a linear function of its arity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearCost {
    pub per_control: f64,
    pub offset: f64,
}

impl LinearCost {
    fn price(&self, arity: usize) -> f64 {
        self.per_control * arity as f64 + self.offset
    }
}

/// Pricing assumptions behind [`estimate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    /// CX gates per multi-controlled gate of a given arity.
    pub mcx_cx: LinearCost,
    /// T gates per multi-controlled gate of a given arity.
    pub mcx_t: LinearCost,
    /// Target precision for synthesizing each phase rotation; adds
    /// `ceil(log2(1 / epsilon))` T gates per phase gate.
    pub epsilon: f64,
    /// Let transition phases on disjoint slot pairs run simultaneously.
    pub parallel_slots: bool,
}

impl Default for CostModel {
    fn default() -> Self {
        Self {
            mcx_cx: LinearCost { per_control: 6.0, offset: 0.0 },
            mcx_t: LinearCost { per_control: 4.0, offset: 0.0 },
            epsilon: 1e-3,
            parallel_slots: false,
        }
    }
}

/// One census row in serialized reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub kind: String,
    pub arity: usize,
    pub count: u64,
}

/// Census rows sorted by kind, then arity.
pub fn census_entries(census: &Census) -> Vec<CensusEntry> {
    census
        .iter()
        .map(|(&(kind, arity), &count)| CensusEntry { kind: kind.to_string(), arity, count })
        .collect()
}

/// Validity oracle census without building the circuit:
/// `(n-1)^2` MCX of arity `b` plus the arity-`(n-1)` conjunction.
pub fn predicted_validity_counts(n: usize) -> Result<Census, ResourceError> {
    let layout = RegisterLayout::new(n)?;
    let labels = layout.num_labels() as u64;
    let mut census = Census::new();
    census.insert((GateKind::Mcx, layout.bits_per_label()), labels * labels);
    census.insert((GateKind::Mcx, layout.num_labels()), 1);
    Ok(census)
}

/// Cost oracle census with zero-angle gates kept: `2(n-1)` phases of arity
/// `b` and `(T-1)(n-1)^2` of arity `2b`.
pub fn predicted_cost_counts(n: usize) -> Result<Census, ResourceError> {
    let layout = RegisterLayout::new(n)?;
    let labels = layout.num_labels() as u64;
    let mut census = Census::new();
    census.insert((GateKind::McPhase, layout.bits_per_label()), 2 * labels);
    census.insert(
        (GateKind::McPhase, 2 * layout.bits_per_label()),
        (layout.t_slots() as u64 - 1) * labels * labels,
    );
    Ok(census)
}

/// State preparation census: one Hadamard per route qubit.
pub fn predicted_prep_counts(n: usize) -> Result<Census, ResourceError> {
    let layout = RegisterLayout::new(n)?;
    let mut census = Census::new();
    census.insert((GateKind::H, 0), layout.route_width() as u64);
    Ok(census)
}

/// Census plus modeled CX, T and depth totals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub census: Vec<CensusEntry>,
    pub cx_estimate: f64,
    pub t_estimate: f64,
    pub depth_estimate: f64,
    pub model: CostModel,
}

/// Prices a census under the model.
///
/// The layout is only consulted when `model.parallel_slots` is set: phase
/// gates spanning two slots (arity `2b`) are then scheduled
/// `floor(T / 2)` at a time instead of sequentially.
pub fn estimate(
    census: &Census,
    model: &CostModel,
    layout: Option<&RegisterLayout>,
) -> Result<ResourceReport, ResourceError> {
    if !(model.epsilon > 0.0 && model.epsilon < 1.0) {
        return Err(ResourceError::BadEpsilon(model.epsilon));
    }
    let synthesis_t = (1.0 / model.epsilon).log2().ceil();
    let mut cx_estimate = 0.0;
    let mut t_estimate = 0.0;
    let mut depth_estimate = 0.0;
    for (&(kind, arity), &count) in census {
        let count_f = count as f64;
        match kind {
            GateKind::H | GateKind::X => {}
            GateKind::Mcx => {
                cx_estimate += count_f * model.mcx_cx.price(arity);
                t_estimate += count_f * model.mcx_t.price(arity);
            }
            GateKind::McPhase => {
                cx_estimate += count_f * model.mcx_cx.price(arity);
                t_estimate += count_f * (model.mcx_t.price(arity) + synthesis_t);
            }
        }
        let lanes = match layout {
            Some(layout)
                if model.parallel_slots
                    && kind == GateKind::McPhase
                    && arity == 2 * layout.bits_per_label() =>
            {
                (layout.t_slots() / 2).max(1) as u64
            }
            _ => 1,
        };
        depth_estimate += count.div_ceil(lanes) as f64;
    }
    Ok(ResourceReport {
        n: layout.map(RegisterLayout::n),
        census: census_entries(census),
        cx_estimate,
        t_estimate,
        depth_estimate,
        model: *model,
    })
}

/// Which circuit family a scaling fit measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    UniformPrep,
    Validity,
    Cost,
}

/// One measured point of a scaling fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub n: usize,
    pub gates: u64,
}

/// Least-squares slope of `ln(gates)` against `ln(n - 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub oracle: OracleKind,
    pub exponent: f64,
    pub points: Vec<ScalingPoint>,
}

fn ones_instance(n: usize) -> Result<TspInstance, InstanceError> {
    let cost = (0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect()).collect();
    TspInstance::new(cost, n - 1)
}

/// Builds the oracle at every requested city count and fits the growth
/// exponent of its gate count.
///
/// The regressor is the label count `n - 1`: the gate counts are polynomials
/// in it, so the fitted slope recovers their degree. Needs at least five
/// city counts, all at least 4; cost oracles are built with zero-angle gates
/// kept, so the counts are instance independent.
pub fn scaling_fit(city_counts: &[usize], oracle: OracleKind) -> Result<ScalingFit, ResourceError> {
    const NEED: usize = 5;
    if city_counts.len() < NEED {
        return Err(ResourceError::TooFewPoints { got: city_counts.len(), need: NEED });
    }
    if let Some(&small) = city_counts.iter().find(|&&n| n < 4) {
        return Err(ResourceError::CityCountTooSmall(small));
    }
    let mut points = Vec::with_capacity(city_counts.len());
    for &n in city_counts {
        let layout = RegisterLayout::new(n)?;
        let gates = match oracle {
            OracleKind::UniformPrep => uniform_prep(&layout).len(),
            OracleKind::Validity => validity_oracle(&layout).len(),
            OracleKind::Cost => {
                let instance = ones_instance(n)?;
                let config = EncodingConfig::new(1.0)?.with_zero_angle_gates(true);
                cost_oracle(&instance, &layout, &config)?.len()
            }
        };
        points.push(ScalingPoint { n, gates: gates as u64 });
    }
    let xs: Vec<f64> = points.iter().map(|p| ((p.n - 1) as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| (p.gates as f64).ln()).collect();
    let x_mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let y_mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let covariance: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - x_mean) * (y - y_mean)).sum();
    let variance: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    Ok(ScalingFit { oracle, exponent: covariance / variance, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;

    #[test]
    fn worked_pricing_examples() {
        let model = CostModel::default();
        let mut census = Census::new();
        census.insert((GateKind::Mcx, 4), 1);
        let report = estimate(&census, &model, None).unwrap();
        assert_eq!(report.cx_estimate, 24.0);
        assert_eq!(report.t_estimate, 16.0);
        assert_eq!(report.depth_estimate, 1.0);
        assert_eq!(report.n, None);

        // Phase gates pay ceil(log2(1000)) = 10 extra T gates each.
        let mut census = Census::new();
        census.insert((GateKind::McPhase, 2), 8);
        let report = estimate(&census, &model, None).unwrap();
        assert_eq!(report.cx_estimate, 96.0);
        assert_eq!(report.t_estimate, 144.0);

        // Cliffords are free in both estimates but still occupy depth.
        let mut census = Census::new();
        census.insert((GateKind::H, 0), 16);
        census.insert((GateKind::X, 0), 3);
        let report = estimate(&census, &model, None).unwrap();
        assert_eq!(report.cx_estimate, 0.0);
        assert_eq!(report.t_estimate, 0.0);
        assert_eq!(report.depth_estimate, 19.0);
    }

    #[test]
    fn estimate_rejects_bad_epsilon() {
        let model = CostModel { epsilon: 0.0, ..CostModel::default() };
        assert!(matches!(
            estimate(&Census::new(), &model, None),
            Err(ResourceError::BadEpsilon(_))
        ));
    }

    #[test]
    fn predicted_counts_match_constructed_circuits() {
        for n in 3..=14 {
            let layout = RegisterLayout::new(n).unwrap();
            assert_eq!(
                predicted_validity_counts(n).unwrap(),
                validity_oracle(&layout).census(),
                "validity n={n}"
            );
            assert_eq!(
                predicted_prep_counts(n).unwrap(),
                uniform_prep(&layout).census(),
                "prep n={n}"
            );
            let instance = ones_instance(n).unwrap();
            let config = EncodingConfig::new(1.0).unwrap().with_zero_angle_gates(true);
            assert_eq!(
                predicted_cost_counts(n).unwrap(),
                cost_oracle(&instance, &layout, &config).unwrap().census(),
                "cost n={n}"
            );
        }
    }

    #[test]
    fn reference_pipeline_gate_totals() {
        let inst = reference::instance();
        let layout = RegisterLayout::new(5).unwrap();
        let config = EncodingConfig::new(reference::TIGHT_LAMBDA).unwrap();

        let multi_controlled = |census: &Census| -> u64 {
            census
                .iter()
                .filter(|((kind, _), _)| matches!(kind, GateKind::Mcx | GateKind::McPhase))
                .map(|(_, &count)| count)
                .sum()
        };

        let validity = validity_oracle(&layout);
        let with_zeros = cost_oracle(&inst, &layout, &config.with_zero_angle_gates(true)).unwrap();
        let pruned = cost_oracle(&inst, &layout, &config).unwrap();
        assert_eq!(multi_controlled(&validity.census()), 17);
        assert_eq!(multi_controlled(&with_zeros.census()), 56);
        assert_eq!(multi_controlled(&pruned.census()), 44);
        assert_eq!(multi_controlled(&validity.compose(&with_zeros).unwrap().census()), 73);
        assert_eq!(multi_controlled(&validity.compose(&pruned).unwrap().census()), 61);
    }

    #[test]
    fn parallel_slots_shorten_transition_depth() {
        let layout = RegisterLayout::new(5).unwrap();
        let census = predicted_cost_counts(5).unwrap();
        let sequential = estimate(&census, &CostModel::default(), Some(&layout)).unwrap();
        assert_eq!(sequential.depth_estimate, 56.0);
        assert_eq!(sequential.n, Some(5));

        let model = CostModel { parallel_slots: true, ..CostModel::default() };
        let parallel = estimate(&census, &model, Some(&layout)).unwrap();
        // 8 single-slot phases plus 48 transition phases in 2 lanes.
        assert_eq!(parallel.depth_estimate, 32.0);

        // Without a layout the flag has nothing to act on.
        let no_layout = estimate(&census, &model, None).unwrap();
        assert_eq!(no_layout.depth_estimate, 56.0);
    }

    #[test]
    fn estimates_grow_with_city_count() {
        let model = CostModel::default();
        let mut last = 0.0;
        for n in 4..=10 {
            let report = estimate(&predicted_validity_counts(n).unwrap(), &model, None).unwrap();
            assert!(report.cx_estimate > last, "n={n}");
            last = report.cx_estimate;
        }
    }

    #[test]
    fn scaling_fits_recover_polynomial_degrees() {
        let ns: Vec<usize> = (6..=14).collect();
        let cost = scaling_fit(&ns, OracleKind::Cost).unwrap();
        assert!(cost.exponent > 2.7 && cost.exponent < 3.1, "cost {}", cost.exponent);
        let validity = scaling_fit(&ns, OracleKind::Validity).unwrap();
        assert!(
            validity.exponent > 1.8 && validity.exponent < 2.2,
            "validity {}",
            validity.exponent
        );
    }

    #[test]
    fn prep_fit_matches_local_regression() {
        let ns: Vec<usize> = (6..=14).collect();
        let fit = scaling_fit(&ns, OracleKind::UniformPrep).unwrap();
        // Independent check: H count is (n-1) * ceil(log2(n-1)); the ceiling
        // staircase steepens the log-log slope well past 1.
        let points: Vec<(f64, f64)> = ns
            .iter()
            .map(|&n| {
                let bits = usize::BITS - (n - 2).leading_zeros();
                (((n - 1) as f64).ln(), (((n - 1) as u32 * bits) as f64).ln())
            })
            .collect();
        let x_mean = points.iter().map(|p| p.0).sum::<f64>() / points.len() as f64;
        let y_mean = points.iter().map(|p| p.1).sum::<f64>() / points.len() as f64;
        let slope = points.iter().map(|p| (p.0 - x_mean) * (p.1 - y_mean)).sum::<f64>()
            / points.iter().map(|p| (p.0 - x_mean).powi(2)).sum::<f64>();
        assert!((fit.exponent - slope).abs() < 1e-12);
        assert!(fit.exponent > 1.3 && fit.exponent < 1.5, "prep {}", fit.exponent);
    }

    #[test]
    fn scaling_fit_validates_inputs() {
        assert!(matches!(
            scaling_fit(&[6, 7, 8, 9], OracleKind::Validity),
            Err(ResourceError::TooFewPoints { got: 4, need: 5 })
        ));
        assert!(matches!(
            scaling_fit(&[3, 6, 7, 8, 9], OracleKind::Validity),
            Err(ResourceError::CityCountTooSmall(3))
        ));
    }

    #[test]
    fn report_serialization_round_trips() {
        let layout = RegisterLayout::new(5).unwrap();
        let census = predicted_validity_counts(5).unwrap();
        let report = estimate(&census, &CostModel::default(), Some(&layout)).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"kind\":\"MCX\""));
        let parsed: ResourceReport = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, report);
    }
}
