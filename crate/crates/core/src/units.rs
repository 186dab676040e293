//! Unit conventions used at the I/O boundary.
//!
//! Everything inside the crate is SI. Hobbyist units (inches, "S" cell
//! counts, "C" discharge rates, grams) are converted here and nowhere else.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

/// Average LiPo cell voltage used for the "S" notation.
pub const VOLTS_PER_CELL: f64 = 4.0;

pub const METERS_PER_INCH: f64 = 0.0254;

/// Gravitational acceleration, m/s².
pub const GRAVITY: f64 = 9.8;

const CELL_TOLERANCE: f64 = 1e-9;

pub fn cells_to_volts(cells: u32) -> f64 {
    VOLTS_PER_CELL * f64::from(cells)
}

/// Result of converting a voltage into a cell count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct CellCount {
    pub cells: u32,
    /// False when the voltage was not a whole multiple of the cell voltage
    /// and `cells` is the nearest count.
    pub exact: bool,
}

pub fn volts_to_cells(volts: f64) -> CellCount {
    let raw = volts / VOLTS_PER_CELL;
    let nearest = raw.round().max(0.0);
    CellCount {
        cells: nearest as u32,
        exact: (raw - nearest).abs() <= CELL_TOLERANCE,
    }
}

pub fn inches_to_meters(inches: f64) -> f64 {
    inches * METERS_PER_INCH
}

pub fn meters_to_inches(meters: f64) -> f64 {
    meters / METERS_PER_INCH
}

pub fn grams_to_newtons(grams: f64) -> f64 {
    grams / 1000.0 * GRAVITY
}

pub fn newtons_to_grams(newtons: f64) -> f64 {
    newtons / GRAVITY * 1000.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_cells_is_48_volts() {
        assert_eq!(cells_to_volts(12), 48.0);
        assert_eq!(cells_to_volts(1), 4.0);
        assert_eq!(volts_to_cells(48.0), CellCount { cells: 12, exact: true });
    }

    #[test]
    fn non_multiple_voltage_is_flagged() {
        let c = volts_to_cells(22.2);
        assert_eq!(c.cells, 6);
        assert!(!c.exact);
    }

    #[test]
    fn inch_round_trip() {
        assert!((meters_to_inches(inches_to_meters(29.0)) - 29.0).abs() < 1e-12);
        assert!((inches_to_meters(29.0) - 0.7366).abs() < 1e-12);
    }
}
