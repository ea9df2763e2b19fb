//! Quantum-circuit construction, simulation and verification for the
//! traveling salesperson problem on a time-register encoding.
//!
//! A tour of `n` cities starting from a fixed city is stored as `n - 1` time
//! slots of `ceil(log2(n - 1))` qubits, each slot naming the city visited at
//! that step. On top of that register the crate builds:
//!
//! - a uniform superposition over every slot assignment ([`encoding::uniform_prep`]),
//! - a reversible oracle flagging the assignments that are permutations of
//!   the non-start cities ([`encoding::validity_oracle`]),
//! - a diagonal oracle rotating each assignment by its normalized round-trip
//!   cost ([`encoding::cost_oracle`]),
//! - amplitude amplification of the valid subspace, either textbook or with
//!   a phase-matched schedule that succeeds with probability one
//!   ([`amplify::amplify_valid`]),
//! - gate censuses, hardware-cost estimates and scaling fits for all of the
//!   above ([`resources`]).
//!
//! Everything is verified against a dense state-vector simulator
//! ([`sim::StateVector`]) and classical baselines ([`instance`]); the
//! [`mod@reference`] module bundles a five-city instance with its published
//! phase table for end-to-end reproduction.
//!
//! ```
//! use qtsp_core::prelude::*;
//!
//! let instance = qtsp_core::reference::instance();
//! let (optimal, cost) = brute_force_optimum(&instance).unwrap();
//! assert_eq!(instance.render_round_trip(optimal.order()), [4, 2, 3, 1, 0, 4]);
//! assert!((cost - 1.12).abs() < 1e-9);
//!
//! let outcome = amplify_valid(&instance, ScheduleMode::Exact).unwrap();
//! assert!(outcome.achieved_success >= 1.0 - 1e-9);
//! ```

pub mod amplify;
pub mod circuit;
pub mod encoding;
pub mod instance;
pub mod reference;
pub mod resources;
pub mod sim;

/// The types and entry points most callers need.
pub mod prelude {
    pub use crate::amplify::{
        amplify_valid, make_schedule, success_probability, AmplificationOutcome,
        AmplificationSchedule, ScheduleMode,
    };
    pub use crate::circuit::{Census, Circuit, Control, Gate, GateKind, RegisterLayout};
    pub use crate::encoding::{
        classify, cost_oracle, tour_table, uniform_prep, validity_oracle, validity_phase_oracle,
        EncodingConfig, TourRecord,
    };
    pub use crate::instance::{
        brute_force_optimum, lambda_auto, lambda_bound, tour_cost, LambdaMode, Tour, TspInstance,
    };
    pub use crate::resources::{estimate, scaling_fit, CostModel, OracleKind, ResourceReport};
    pub use crate::sim::{route_marginals, StateVector};
}
