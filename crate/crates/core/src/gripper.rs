//! Gripper built from a fast positioning stage in series with a floating
//! converter.
//!
//! A grasp runs in two phases. The stage first closes in on the object and
//! stops one step short of contact, leaving a small gap. The actuator then
//! drives the converter's balance point; the grip force follows the working
//! spring while the actuator only has to supply the converter's operating
//! force. The stage's lead screw is back-drivable, so a one-way latch (torque
//! diode) must ground the grip reaction.

use crate::converter::FloatingConverter;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Tolerance, N, on reaching the target grip force.
pub const GRIP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct GripperModel<T> {
    pub converter: FloatingConverter<T>,
    /// Stage travel limit, m.
    pub stage_travel: T,
    /// Distance per tick, m; also the balance-point increment while gripping.
    pub stage_step: T,
    /// Whether the torque diode grounds the reaction on the stage.
    pub latch_holds: bool,
    /// Largest force the actuator can deliver, N.
    pub actuator_force_cap: T,
    /// Object surface measured from the jaw's start position, m.
    pub object_position: T,
    pub object_rigid: bool,
}

/// Result of [`GripperModel::plan_grasp`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraspPlan<T> {
    /// Jaw-to-object distance left after positioning, m.
    pub gap_x: T,
    /// Balance-point displacement that produces the target grip, m.
    pub converter_stroke: T,
    pub positioning_ticks: usize,
    /// Stage position at the end of positioning, m.
    pub stage_position: T,
    pub target_grip: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Positioning,
    Gripping,
    Done,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Positioning => "positioning",
            Phase::Gripping => "gripping",
            Phase::Done => "done",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraspRow<T> {
    pub tick: usize,
    pub phase: Phase,
    pub jaw_position: T,
    pub grip_force: T,
    pub actuator_force: T,
    pub latch_engaged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraspTrace<T> {
    pub rows: Vec<GraspRow<T>>,
}

impl<T: Scalar> GraspTrace<T> {
    pub fn max_actuator_force(&self) -> T {
        self.rows.iter().fold(T::zero(), |m, r| m.max(r.actuator_force.abs()))
    }

    pub fn max_grip_force(&self) -> T {
        self.rows.iter().fold(T::zero(), |m, r| m.max(r.grip_force))
    }

    pub fn final_grip_force(&self) -> T {
        self.rows.last().map_or(T::zero(), |r| r.grip_force)
    }

    /// Peak grip force over peak actuator force; `None` when the actuator
    /// never had to push.
    pub fn amplification(&self) -> Option<T> {
        let a = self.max_actuator_force();
        (a > T::zero()).then(|| self.max_grip_force() / a)
    }
}

/// Number of whole stage steps that keep the jaw short of `distance`.
fn steps_short_of<T: Scalar>(distance: T, step: T) -> usize {
    let q = distance / step;
    let nearest = q.round();
    let n = if (q - nearest).abs() <= T::lit(1e-9) * nearest.max(T::one()) {
        nearest - T::one()
    } else {
        q.floor()
    };
    n.max(T::zero()).to_usize().unwrap_or(0)
}

/// Number of whole stage steps that fit within `travel`.
fn steps_within<T: Scalar>(travel: T, step: T) -> usize {
    let q = travel / step;
    let nearest = q.round();
    let n = if (q - nearest).abs() <= T::lit(1e-9) * nearest.max(T::one()) {
        nearest
    } else {
        q.floor()
    };
    n.max(T::zero()).to_usize().unwrap_or(0)
}

impl<T: Scalar> GripperModel<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.stage_step.is_finite() && self.stage_step > T::zero()) {
            return Err(Error::validation(format!(
                "stage step must be positive, got {}",
                self.stage_step
            )));
        }
        if !(self.stage_travel.is_finite() && self.stage_travel >= T::zero()) {
            return Err(Error::validation(format!(
                "stage travel must be >= 0, got {}",
                self.stage_travel
            )));
        }
        if !(self.actuator_force_cap.is_finite() && self.actuator_force_cap > T::zero()) {
            return Err(Error::validation(format!(
                "actuator force cap must be positive, got {}",
                self.actuator_force_cap
            )));
        }
        if !(self.object_position.is_finite() && self.object_position > T::zero()) {
            return Err(Error::validation(format!(
                "object position must be positive, got {}",
                self.object_position
            )));
        }
        if !self.object_rigid {
            return Err(Error::validation("only rigid objects are supported"));
        }
        Ok(())
    }

    /// Splits the approach into stage positioning and converter stroke.
    pub fn plan_grasp(&self, target_grip: T) -> Result<GraspPlan<T>> {
        self.validate()?;
        let left = self.converter.left();
        let stroke = left
            .displacement_for_force(target_grip)
            .ok_or_else(|| Error::UnreachableForce {
                target: target_grip.as_f64(),
                min: left.eval(T::zero()).as_f64(),
                max: left.eval(left.x_max()).as_f64(),
            })?;
        let reach = self.stage_travel + stroke;
        if self.object_position > reach {
            return Err(Error::UnreachableObject {
                position: self.object_position.as_f64(),
                reach: reach.as_f64(),
            });
        }
        let ticks = if self.object_position <= self.stage_travel {
            steps_short_of(self.object_position, self.stage_step)
        } else {
            steps_within(self.stage_travel, self.stage_step)
        };
        let stage_position = self.stage_step * T::from_count(ticks);
        Ok(GraspPlan {
            gap_x: self.object_position - stage_position,
            converter_stroke: stroke,
            positioning_ticks: ticks,
            stage_position,
            target_grip,
        })
    }

    /// Runs the grasp tick by tick.
    pub fn simulate_grasp(&self, plan: &GraspPlan<T>) -> Result<GraspTrace<T>> {
        self.validate()?;
        let converter = self.converter.clone().with_gap(plan.gap_x)?;
        let left = converter.left();
        let mut rows = Vec::with_capacity(plan.positioning_ticks + 2);
        let mut tick = 0;

        for i in 1..=plan.positioning_ticks {
            tick += 1;
            rows.push(GraspRow {
                tick,
                phase: Phase::Positioning,
                jaw_position: self.stage_step * T::from_count(i),
                grip_force: T::zero(),
                actuator_force: T::zero(),
                latch_engaged: false,
            });
        }

        let stroke = plan.converter_stroke;
        let mut last = GraspRow {
            tick,
            phase: Phase::Gripping,
            jaw_position: plan.stage_position,
            grip_force: left.force_at(T::zero())?,
            actuator_force: T::zero(),
            latch_engaged: false,
        };
        let mut grip_tick = 0;
        let mut u = T::zero();
        while u < stroke {
            grip_tick += 1;
            tick += 1;
            u = (self.stage_step * T::from_count(grip_tick)).min(stroke);
            let grip = left.force_at(u)?;
            if !self.latch_holds && grip > T::zero() {
                return Err(Error::BackdriveFault {
                    tick: grip_tick,
                    reaction: grip.as_f64(),
                });
            }
            let ideal = converter.operating_force(u)?;
            let required = ideal + converter.friction_band(converter.counter_force(u)?);
            if required.abs() > self.actuator_force_cap {
                return Err(Error::ActuatorStall {
                    tick: grip_tick,
                    required: required.as_f64(),
                    cap: self.actuator_force_cap.as_f64(),
                });
            }
            last = GraspRow {
                tick,
                phase: Phase::Gripping,
                jaw_position: plan.stage_position + u.min(plan.gap_x),
                grip_force: grip,
                actuator_force: required,
                latch_engaged: self.latch_holds && grip > T::zero(),
            };
            rows.push(last);
        }

        if (last.grip_force - plan.target_grip).abs() > T::lit(GRIP_TOL) {
            return Err(Error::Numerical(format!(
                "grip settled at {} N instead of {} N",
                last.grip_force, plan.target_grip
            )));
        }
        rows.push(GraspRow {
            tick: tick + 1,
            phase: Phase::Done,
            ..last
        });
        Ok(GraspTrace { rows })
    }
}
