//! JSON run configuration.
//!
//! Key names carry their unit (`_m`, `_n`, `_deg`, `_n_per_m`). Unknown keys
//! are rejected so a typo cannot silently fall back to a default.

use serde::Deserialize;

use floatconv::pulley::{self, DEFAULT_SAMPLES, DEFAULT_SPRING_STEPS};
use floatconv::{CounterElementF64, FloatingConverterF64, ForceCharacteristicF64, GripperModelF64, PulleyProfileF64};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub spring: SpringConfig,
    pub pulley: PulleyConfig,
    pub counter: CounterConfig,
    #[serde(default)]
    pub friction: FrictionConfig,
    #[serde(default)]
    pub gap_x_m: f64,
    pub gripper: Option<GripperConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpringConfig {
    Linear {
        k_n_per_m: f64,
        max_extension_m: f64,
    },
    Constant {
        force_n: f64,
        max_extension_m: f64,
    },
    PowerLaw {
        c: f64,
        d_m: f64,
        p: f64,
        max_extension_m: f64,
    },
    /// `[x_m, force_n]` pairs.
    Tabulated {
        points: Vec<[f64; 2]>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulleyConfig {
    pub circular_radius_m: f64,
    pub theta_max_deg: Option<f64>,
    pub samples: Option<usize>,
    pub r_min_m: Option<f64>,
    pub r_max_m: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CounterConfig {
    Weight { load_n: f64 },
    Spring { t0_n: f64, k2_n_per_m: f64 },
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrictionConfig {
    pub mu: f64,
    pub offset_n: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GripperConfig {
    pub stage_travel_m: f64,
    pub stage_step_m: f64,
    pub latch: bool,
    pub actuator_cap_n: f64,
    pub object_position_m: f64,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn spring(&self) -> floatconv::Result<ForceCharacteristicF64> {
        match &self.spring {
            SpringConfig::Linear {
                k_n_per_m,
                max_extension_m,
            } => ForceCharacteristicF64::linear(*k_n_per_m, *max_extension_m),
            SpringConfig::Constant {
                force_n,
                max_extension_m,
            } => ForceCharacteristicF64::constant(*force_n, *max_extension_m),
            SpringConfig::PowerLaw {
                c,
                d_m,
                p,
                max_extension_m,
            } => ForceCharacteristicF64::power_law(*c, *d_m, *p, *max_extension_m),
            SpringConfig::Tabulated { points } => {
                ForceCharacteristicF64::tabulated(points.iter().map(|p| (p[0], p[1])).collect())
            }
        }
    }

    pub fn counter(&self) -> floatconv::Result<CounterElementF64> {
        match self.counter {
            CounterConfig::Weight { load_n } => CounterElementF64::weight(load_n),
            CounterConfig::Spring { t0_n, k2_n_per_m } => CounterElementF64::spring(t0_n, k2_n_per_m),
        }
    }

    pub fn is_truncated(&self) -> bool {
        self.pulley.r_min_m.is_some() || self.pulley.r_max_m.is_some()
    }

    /// Synthesizes the pulley for the configured spring and counter, then
    /// applies the truncation bounds if any are set.
    pub fn profile(&self) -> floatconv::Result<PulleyProfileF64> {
        let spring = self.spring()?;
        let counter = self.counter()?;
        let radius = self.pulley.circular_radius_m;
        let theta_max = match self.pulley.theta_max_deg {
            Some(deg) => deg.to_radians(),
            None => spring.x_max() / radius,
        };
        let ideal = match counter {
            CounterElementF64::Weight { load } => pulley::synthesize_weight_counter_over(
                &spring,
                radius,
                load,
                self.pulley.samples.unwrap_or(DEFAULT_SAMPLES),
                theta_max,
            )?,
            CounterElementF64::Spring { .. } => {
                let steps = self
                    .pulley
                    .samples
                    .map_or(DEFAULT_SPRING_STEPS, |n| n.saturating_sub(1));
                pulley::synthesize_spring_counter_over(&spring, radius, &counter, steps, theta_max)?
            }
        };
        if self.is_truncated() {
            pulley::truncate_profile(
                &ideal,
                self.pulley.r_min_m.unwrap_or(0.0),
                self.pulley.r_max_m.unwrap_or(f64::INFINITY),
            )
        } else {
            Ok(ideal)
        }
    }

    pub fn converter(&self, profile: PulleyProfileF64) -> floatconv::Result<FloatingConverterF64> {
        FloatingConverterF64::new(self.spring()?, profile, self.counter()?)
            .with_gap(self.gap_x_m)?
            .with_friction(self.friction.mu, self.friction.offset_n)
    }

    pub fn gripper(&self, converter: FloatingConverterF64) -> Option<GripperModelF64> {
        self.gripper.as_ref().map(|g| GripperModelF64 {
            converter,
            stage_travel: g.stage_travel_m,
            stage_step: g.stage_step_m,
            latch_holds: g.latch,
            actuator_force_cap: g.actuator_cap_n,
            object_position: g.object_position_m,
            object_rigid: true,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "spring": {"type": "linear", "k_n_per_m": 100.0, "max_extension_m": 0.12},
        "pulley": {"circular_radius_m": 0.02},
        "counter": {"type": "weight", "load_n": 10.0}
    }"#;

    #[test]
    fn minimal_config_parses() {
        let c = RunConfig::from_json(MINIMAL).unwrap();
        assert_eq!(c.gap_x_m, 0.0);
        assert!(c.gripper.is_none());
        let p = c.profile().unwrap();
        assert_eq!(p.len(), DEFAULT_SAMPLES);
        assert!((p.slope().unwrap() - 0.004).abs() < 1e-15);
    }

    #[test]
    fn unknown_keys_are_named() {
        let text = MINIMAL.replace("\"load_n\"", "\"load_n\": 1.0, \"mass_kg\"");
        let err = RunConfig::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("mass_kg"), "{err}");
        let text = MINIMAL.replace("\"max_extension_m\": 0.12", "\"max_extension_m\": 0.12, \"k2\": 1");
        let err = RunConfig::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("k2"), "{err}");
        let text = MINIMAL.replace(
            "\"circular_radius_m\": 0.02",
            "\"circular_radius_m\": 0.02, \"extra\": 1",
        );
        assert!(RunConfig::from_json(&text).unwrap_err().to_string().contains("extra"));
    }

    #[test]
    fn missing_keys_are_named() {
        let text = MINIMAL.replace(", \"load_n\": 10.0", "");
        let err = RunConfig::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("load_n"), "{err}");
        let err = RunConfig::from_json(r#"{"spring": {"type": "linear", "k_n_per_m": 1, "max_extension_m": 1}}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("pulley"), "{err}");
    }

    #[test]
    fn spring_counter_and_tabulated() {
        let text = r#"{
            "spring": {"type": "tabulated", "points": [[0.0, 0.0], [0.05, 2.0], [0.1, 10.0]]},
            "pulley": {"circular_radius_m": 0.02, "samples": 257},
            "counter": {"type": "spring", "t0_n": 10.0, "k2_n_per_m": 20.0}
        }"#;
        let c = RunConfig::from_json(text).unwrap();
        assert_eq!(c.profile().unwrap().len(), 257);
    }
}
