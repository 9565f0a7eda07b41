//! Myopic sensor control: for each admissible command, update the predicted
//! density against the ideal measurements the current estimate would produce
//! from that sensor position, score the result, and keep the cheapest command.

mod commands;
mod cost;
mod select;

use serde::{Deserialize, Serialize};

pub use commands::{admissible_commands, CommandGrid, ControlCommand, Region};
pub use cost::{
    cardinality_pmf, cardinality_variance, combine, component_state_error, evaluate_cost,
    map_cardinality_variance_cost, normalized_cardinality_error, normalized_state_error,
    peecs_cost, CostBreakdown, CostFunction,
};
pub use select::{
    build_pims, evaluate_command, pims_from_estimate, select_command, select_from,
    CommandEvaluation, ControlContext, Selection,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ControlError {
    #[error("no admissible commands")]
    NoCommands,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControlParams {
    pub cost: CostFunction,
    /// Weight of the cardinality term.
    pub eta: f64,
    pub grid: CommandGrid,
}

impl Default for ControlParams {
    fn default() -> Self {
        Self {
            cost: CostFunction::Peecs,
            eta: 0.5,
            grid: CommandGrid::default(),
        }
    }
}
