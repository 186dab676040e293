//! Component models: atmosphere, propeller, motor, ESC and battery.

pub mod atmosphere;
pub mod battery;
pub mod esc;
pub mod motor;
pub mod propeller;
pub mod requirements;

pub use atmosphere::{air_density, Environment};
pub use battery::BatteryParams;
pub use esc::EscParams;
pub use motor::{MotorLimits, MotorParams};
pub use propeller::{AeroCoeffs, BladeCoeffs, PropellerParams};
pub use requirements::{DesignRequirements, OperatingPoint, RequirementsInput};
