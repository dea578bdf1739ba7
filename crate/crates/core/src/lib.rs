//! Synthesis and quasi-static simulation of floating displacement–force
//! converters.
//!
//! A floating converter places an elastic element `f(x)` in series with an
//! element realizing its inverse characteristic `-f(x)`. The junction between
//! the two can be moved with (ideally) zero operating force while the elastic
//! element's output force follows the displacement. Here the inverse element
//! is a non-circular pulley loaded by a dead weight or a secondary spring.
//!
//! The crate is organized bottom-up:
//!
//! - [`characteristics`]: force–displacement laws, their negation and stored energy.
//! - [`pulley`]: pulley profile synthesis, forward verification, payout and arc length.
//! - [`converter`]: operating force, sweeps, energy ledger and equilibrium search.
//! - [`gripper`]: a force-capped actuator driving the converter behind a positioning stage.
//! - [`export`]: CSV and SVG artifacts.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`). The aliases at the
//! crate root fix the scalar to `f64`, which is what the CLI uses.
//!
//! ```
//! use floatconv::{ForceCharacteristicF64, pulley};
//!
//! let spring = ForceCharacteristicF64::linear(100.0, 0.12).unwrap();
//! let profile = pulley::synthesize_weight_counter(&spring, 0.02, 10.0, 512).unwrap();
//! assert!((profile.slope().unwrap() - 0.004).abs() < 1e-15);
//! ```

pub mod characteristics;
pub mod converter;
pub mod error;
pub mod export;
pub mod gripper;
pub mod pulley;
mod quad;
pub mod scalar;

pub use characteristics::{ForceCharacteristic, Law};
pub use converter::{EnergyLedger, Equilibrium, FloatingConverter, SweepRow, SweepSummary, SweepTable};
pub use error::{Error, Result};
pub use export::SvgOptions;
pub use gripper::{GraspPlan, GraspRow, GraspTrace, GripperModel, Phase};
pub use pulley::{CounterElement, PulleyProfile};
pub use scalar::Scalar;

pub type ForceCharacteristicF64 = ForceCharacteristic<f64>;
pub type ForceCharacteristicF32 = ForceCharacteristic<f32>;
pub type PulleyProfileF64 = PulleyProfile<f64>;
pub type PulleyProfileF32 = PulleyProfile<f32>;
pub type CounterElementF64 = CounterElement<f64>;
pub type FloatingConverterF64 = FloatingConverter<f64>;
pub type FloatingConverterF32 = FloatingConverter<f32>;
pub type SweepTableF64 = SweepTable<f64>;
pub type GripperModelF64 = GripperModel<f64>;
pub type GraspTraceF64 = GraspTrace<f64>;
