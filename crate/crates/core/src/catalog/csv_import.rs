//! CSV import. Headers carry their unit as a suffix (`diameter_in`,
//! `weight_g`, `resistance_mohm`, ...); values are converted to the SI JSON
//! schema and then go through the same validation as JSON records.

use serde_json::{Map, Number, Value};

use super::{ComponentClass, Rejection};
use crate::error::{Error, Result};
use crate::units::{GRAVITY, METERS_PER_INCH, VOLTS_PER_CELL};

#[derive(Clone, Copy)]
enum Kind {
    Text,
    Float(f64),
    Int,
    /// Voltage given in volts for an integer cell-count field.
    VoltsToCells,
}

struct Column {
    header: &'static str,
    field: &'static str,
    top_level: bool,
    kind: Kind,
}

const fn top(header: &'static str, field: &'static str, kind: Kind) -> Column {
    Column {
        header,
        field,
        top_level: true,
        kind,
    }
}

const fn param(header: &'static str, field: &'static str, kind: Kind) -> Column {
    Column {
        header,
        field,
        top_level: false,
        kind,
    }
}

const GRAM_FORCE_N: f64 = GRAVITY / 1000.0;

const COMMON: &[Column] = &[
    top("id", "id", Kind::Text),
    top("source", "source", Kind::Text),
    top("price", "price", Kind::Float(1.0)),
    top("weight_n", "weight_n", Kind::Float(1.0)),
    top("weight_g", "weight_n", Kind::Float(GRAM_FORCE_N)),
    top("weight_kg", "weight_n", Kind::Float(GRAVITY)),
];

const PROPELLER: &[Column] = &[
    param("diameter_m", "diameter_m", Kind::Float(1.0)),
    param("diameter_mm", "diameter_m", Kind::Float(0.001)),
    param("diameter_in", "diameter_m", Kind::Float(METERS_PER_INCH)),
    param("pitch_m", "pitch_m", Kind::Float(1.0)),
    param("pitch_mm", "pitch_m", Kind::Float(0.001)),
    param("pitch_in", "pitch_m", Kind::Float(METERS_PER_INCH)),
    param("blades", "blades", Kind::Int),
];

const MOTOR: &[Column] = &[
    param("max_voltage_v", "max_voltage_v", Kind::Float(1.0)),
    param("max_cells_s", "max_voltage_v", Kind::Float(VOLTS_PER_CELL)),
    param("max_current_a", "max_current_a", Kind::Float(1.0)),
    param("kv_rpm_per_v", "kv_rpm_per_v", Kind::Float(1.0)),
    param("no_load_current_a", "no_load_current_a", Kind::Float(1.0)),
    param("no_load_voltage_v", "no_load_voltage_v", Kind::Float(1.0)),
    param("resistance_ohm", "resistance_ohm", Kind::Float(1.0)),
    param("resistance_mohm", "resistance_ohm", Kind::Float(0.001)),
    param("test_max_thrust_n", "test_max_thrust_n", Kind::Float(1.0)),
    param("test_max_thrust_g", "test_max_thrust_n", Kind::Float(GRAM_FORCE_N)),
];

const ESC: &[Column] = &[
    param("max_voltage_v", "max_voltage_v", Kind::Float(1.0)),
    param("max_cells_s", "max_voltage_v", Kind::Float(VOLTS_PER_CELL)),
    param("max_current_a", "max_current_a", Kind::Float(1.0)),
    param("resistance_ohm", "resistance_ohm", Kind::Float(1.0)),
    param("resistance_mohm", "resistance_ohm", Kind::Float(0.001)),
];

const BATTERY: &[Column] = &[
    param("cells_s", "cells", Kind::Int),
    param("voltage_v", "cells", Kind::VoltsToCells),
    param("capacity_mah", "capacity_mah", Kind::Float(1.0)),
    param("capacity_ah", "capacity_mah", Kind::Float(1000.0)),
    param("max_discharge_c", "max_discharge_c", Kind::Float(1.0)),
    param("resistance_ohm", "resistance_ohm", Kind::Float(1.0)),
    param("resistance_mohm", "resistance_ohm", Kind::Float(0.001)),
];

fn class_columns(class: ComponentClass) -> &'static [Column] {
    match class {
        ComponentClass::Propeller => PROPELLER,
        ComponentClass::Motor => MOTOR,
        ComponentClass::Esc => ESC,
        ComponentClass::Battery => BATTERY,
    }
}

fn convert(raw: &str, kind: Kind) -> std::result::Result<Value, String> {
    let number = |s: &str| s.parse::<f64>().map_err(|_| format!("{s:?} is not a number"));
    match kind {
        Kind::Text => Ok(Value::String(raw.to_owned())),
        Kind::Float(scale) => Number::from_f64(number(raw)? * scale)
            .map(Value::Number)
            .ok_or_else(|| format!("{raw:?} is not finite")),
        Kind::Int => raw
            .parse::<u32>()
            .map(|n| Value::Number(n.into()))
            .map_err(|_| format!("{raw:?} is not a nonnegative integer")),
        Kind::VoltsToCells => {
            let volts = number(raw)?;
            let cells = volts / VOLTS_PER_CELL;
            if cells < 1.0 || (cells - cells.round()).abs() > 1e-9 {
                return Err(format!("{volts} V is not a whole number of {VOLTS_PER_CELL} V cells"));
            }
            Ok(Value::Number((cells.round() as u32).into()))
        }
    }
}

/// Converted records with their 1-based line numbers, plus rejected rows.
pub type ImportedRows = (Vec<(usize, Value)>, Vec<Rejection>);

/// Converts CSV rows of one class into JSON records. Returns the records with
/// their 1-based line numbers and the rows that could not be converted.
/// Unknown or unit-less headers fail the whole file.
pub fn import_csv<R: std::io::Read>(reader: R, class: ComponentClass) -> Result<ImportedRows> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::domain(format!("CSV header: {e}")))?
        .clone();
    let specific = class_columns(class);
    let mut columns = Vec::with_capacity(headers.len());
    for h in headers.iter() {
        let col = COMMON
            .iter()
            .chain(specific)
            .find(|c| c.header.eq_ignore_ascii_case(h))
            .ok_or_else(|| {
                let known: Vec<&str> = COMMON.iter().chain(specific).map(|c| c.header).collect();
                Error::domain(format!(
                    "unknown {class} column {h:?}; columns need a unit suffix, one of: {}",
                    known.join(", ")
                ))
            })?;
        columns.push(col);
    }

    let mut records = Vec::new();
    let mut rejects = Vec::new();
    for (index, row) in rdr.records().enumerate() {
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                rejects.push(Rejection {
                    file: String::new(),
                    index,
                    line: e.position().map(|p| p.line() as usize),
                    id: None,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let line = row.position().map_or(index + 2, |p| p.line() as usize);
        let mut object = Map::new();
        let mut params = Map::new();
        let mut failure = None;
        for (col, raw) in columns.iter().zip(row.iter()) {
            if raw.is_empty() {
                continue;
            }
            match convert(raw, col.kind) {
                Ok(v) => {
                    let target = if col.top_level { &mut object } else { &mut params };
                    if target.insert(col.field.to_owned(), v).is_some() {
                        failure = Some(format!("{} given twice", col.field));
                    }
                }
                Err(e) => failure = Some(format!("{}: {e}", col.header)),
            }
        }
        let id = object.get("id").and_then(Value::as_str).map(str::to_owned);
        match failure {
            Some(reason) => rejects.push(Rejection {
                file: String::new(),
                index,
                line: Some(line),
                id,
                reason,
            }),
            None => {
                object.insert("params".into(), Value::Object(params));
                records.push((line, Value::Object(object)));
            }
        }
    }
    Ok((records, rejects))
}
