use std::cmp::Ordering;

use super::commands::{admissible_commands, ControlCommand, Region};
use super::cost::{evaluate_cost, CostBreakdown};
use super::{ControlError, ControlParams};
use crate::cbmember::{extract_estimate, update, MultiTargetEstimate, PredictedDensity};
use crate::models::{position, ClutterModel, MeasurementSet, ModelError, SensorModel, SensorState};

/// Ideal (noise-free, clutter-free, miss-free) measurements of `estimate`
/// seen from `candidate`.
pub fn pims_from_estimate(
    estimate: &MultiTargetEstimate,
    candidate: &SensorState,
    sensor_model: &SensorModel,
) -> Result<MeasurementSet, ModelError> {
    estimate
        .states
        .iter()
        .map(|s| sensor_model.ideal_measurement(candidate, position(s)))
        .collect()
}

pub fn build_pims(
    predicted: &PredictedDensity,
    candidate: &SensorState,
    sensor_model: &SensorModel,
    threshold: f64,
) -> Result<MeasurementSet, ModelError> {
    let estimate = extract_estimate(&predicted.components, threshold);
    pims_from_estimate(&estimate, candidate, sensor_model)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommandEvaluation {
    pub command: ControlCommand,
    pub cost: CostBreakdown,
    /// Set when the hypothetical update failed; the cost is then infinite.
    pub failed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub chosen: ControlCommand,
    pub cost: CostBreakdown,
    /// One entry per admissible command, in command order.
    pub evaluations: Vec<CommandEvaluation>,
}

/// Everything besides the predicted density that command selection reads.
#[derive(Debug, Clone, Copy)]
pub struct ControlContext<'a> {
    pub sensor: &'a SensorModel,
    pub clutter: &'a ClutterModel,
    pub params: &'a ControlParams,
    pub region: &'a Region,
    pub existence_threshold: f64,
}

/// Scores one candidate: hypothetical update of `predicted` against the PIMS
/// built at the candidate, cost read off the raw updated density.
pub fn evaluate_command(
    predicted: &PredictedDensity,
    estimate: &MultiTargetEstimate,
    command: &ControlCommand,
    ctx: &ControlContext<'_>,
) -> CommandEvaluation {
    let scored = pims_from_estimate(estimate, &command.target, ctx.sensor)
        .map_err(Into::into)
        .and_then(|pims| update(predicted, &pims, &command.target, ctx.sensor, ctx.clutter))
        .map(|updated| evaluate_cost(&updated.views(), ctx.params.cost, ctx.params.eta));
    match scored {
        Ok(cost) if !cost.total.is_nan() => CommandEvaluation {
            command: *command,
            cost,
            failed: false,
        },
        _ => CommandEvaluation {
            command: *command,
            cost: CostBreakdown::infinite(),
            failed: true,
        },
    }
}

/// Orders by cost, then stay before moves, then id. NaN counts as +inf.
fn rank(a: &CommandEvaluation, b: &CommandEvaluation) -> Ordering {
    let key = |e: &CommandEvaluation| {
        if e.cost.total.is_nan() {
            f64::INFINITY
        } else {
            e.cost.total
        }
    };
    key(a)
        .total_cmp(&key(b))
        .then(b.command.is_stay().cmp(&a.command.is_stay()))
        .then(a.command.id.cmp(&b.command.id))
}

/// Evaluates every command in `commands` and returns the cheapest.
pub fn select_from(
    predicted: &PredictedDensity,
    commands: &[ControlCommand],
    ctx: &ControlContext<'_>,
) -> Result<Selection, ControlError> {
    if commands.is_empty() {
        return Err(ControlError::NoCommands);
    }
    let estimate = extract_estimate(&predicted.components, ctx.existence_threshold);
    let evaluations: Vec<CommandEvaluation> = commands
        .iter()
        .map(|c| evaluate_command(predicted, &estimate, c, ctx))
        .collect();
    let best = evaluations
        .iter()
        .min_by(|a, b| rank(a, b))
        .copied()
        .expect("nonempty");
    Ok(Selection {
        chosen: best.command,
        cost: best.cost,
        evaluations,
    })
}

/// Builds the admissible set around `current` and selects from it.
pub fn select_command(
    predicted: &PredictedDensity,
    current: &SensorState,
    ctx: &ControlContext<'_>,
) -> Result<Selection, ControlError> {
    let commands = admissible_commands(current, &ctx.params.grid, ctx.region);
    select_from(predicted, &commands, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{CommandGrid, CostFunction};
    use crate::models::{DetectionProfile, RangeSensorModel};
    use crate::rfs::{BernoulliComponent, MultiBernoulliDensity, RandomSource};
    use smallvec::smallvec;

    const REGION: Region = Region {
        x: [0.0, 1000.0],
        y: [0.0, 1000.0],
    };

    fn range_model() -> SensorModel {
        SensorModel::Range(RangeSensorModel {
            sigma0: 1.0,
            beta: 5e-5,
            profile: DetectionProfile {
                r0: 320.0,
                h: 0.00025,
            },
        })
    }

    fn clutter() -> ClutterModel {
        ClutterModel {
            rate: 0.5,
            support: vec![[0.0, 1000.0 * 2f64.sqrt()]],
        }
    }

    fn confident_target() -> PredictedDensity {
        let mut rng = RandomSource::new(11);
        let states = (0..300).map(|_| {
            smallvec![
                600.0 + 20.0 * rng.standard_normal(),
                600.0 + 20.0 * rng.standard_normal(),
                0.0,
                0.0
            ]
        });
        PredictedDensity::from_density(MultiBernoulliDensity::new(vec![
            BernoulliComponent::from_states(0.9, states),
        ]))
    }

    fn ctx<'a>(sensor: &'a SensorModel, clutter: &'a ClutterModel, params: &'a ControlParams) -> ControlContext<'a> {
        ControlContext {
            sensor,
            clutter,
            params,
            region: &REGION,
            existence_threshold: 0.5,
        }
    }

    #[test]
    fn pims_examples() {
        let model = range_model();
        let empty = PredictedDensity::from_density(MultiBernoulliDensity::new(vec![
            BernoulliComponent::from_states(0.4, vec![smallvec![1.0, 2.0, 0.0, 0.0]]),
        ]));
        assert!(build_pims(&empty, &SensorState::new(0.0, 0.0), &model, 0.5).unwrap().is_empty());

        let one = PredictedDensity::from_density(MultiBernoulliDensity::new(vec![
            BernoulliComponent::from_states(0.9, vec![smallvec![300.0, 400.0, 0.0, 0.0]]),
            BernoulliComponent::from_states(0.8, vec![smallvec![100.0, 0.0, 0.0, 0.0]]),
        ]));
        let pims = build_pims(&one, &SensorState::new(0.0, 400.0), &model, 0.5).unwrap();
        assert_eq!(pims.len(), 2);
        assert!((pims[0][0] - 300.0).abs() < 1e-12);
        assert_eq!(pims, build_pims(&one, &SensorState::new(0.0, 400.0), &model, 0.5).unwrap());
    }

    #[test]
    fn single_command_always_chosen() {
        let (model, clut, params) = (range_model(), clutter(), ControlParams::default());
        let pred = confident_target();
        let only = ControlCommand {
            id: 5,
            target: SensorState::new(0.0, 0.0),
        };
        let sel = select_from(&pred, &[only], &ctx(&model, &clut, &params)).unwrap();
        assert_eq!(sel.chosen, only);
        assert!(select_from(&pred, &[], &ctx(&model, &clut, &params)).is_err());
    }

    #[test]
    fn equal_costs_prefer_stay() {
        let (model, clut, params) = (range_model(), clutter(), ControlParams::default());
        // Empty prediction: every command costs zero.
        let pred = PredictedDensity::default();
        let sel = select_command(&pred, &SensorState::new(500.0, 500.0), &ctx(&model, &clut, &params)).unwrap();
        assert!(sel.chosen.is_stay());
        assert_eq!(sel.evaluations.len(), 17);
    }

    #[test]
    fn moving_toward_target_never_worse_than_stay() {
        let (model, clut) = (range_model(), clutter());
        let params = ControlParams {
            cost: CostFunction::Peecs,
            eta: 0.5,
            grid: CommandGrid::default(),
        };
        let pred = confident_target();
        let c = ctx(&model, &clut, &params);
        // Start past the detection-profile knee: closer means p_D nearer 1.
        let sel = select_command(&pred, &SensorState::new(250.0, 250.0), &c).unwrap();
        let stay = sel.evaluations[0].cost.total;
        let nearest = sel
            .evaluations
            .iter()
            .min_by(|a, b| {
                let da = a.command.target.distance_to([600.0, 600.0]);
                let db = b.command.target.distance_to([600.0, 600.0]);
                da.total_cmp(&db)
            })
            .unwrap();
        assert!(nearest.cost.total <= stay);
        // The selected command is the brute-force minimum.
        let min = sel.evaluations.iter().map(|e| e.cost.total).fold(f64::INFINITY, f64::min);
        assert_eq!(sel.cost.total, min);
        for e in &sel.evaluations {
            assert!(!e.failed);
            let b = e.cost;
            assert!((b.total - (b.eta * b.cardinality_error + (1.0 - b.eta) * b.state_error)).abs() < 1e-12);
        }
    }

    #[test]
    fn ordering_only_matters_through_tie_break() {
        let (model, clut, params) = (range_model(), clutter(), ControlParams::default());
        let pred = confident_target();
        let c = ctx(&model, &clut, &params);
        let mut cmds = admissible_commands(&SensorState::new(200.0, 300.0), &params.grid, &REGION);
        let a = select_from(&pred, &cmds, &c).unwrap().chosen;
        cmds.reverse();
        let b = select_from(&pred, &cmds, &c).unwrap().chosen;
        assert_eq!(a, b);
    }
}
