//! Product catalogs: schema, loading with per-record diagnostics, content
//! hashing and the selection rules.

mod csv_import;
mod select;

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};

use schemars::JsonSchema;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use csv_import::import_csv;
pub use select::{
    select_battery, select_esc, select_motor, select_propeller, BatteryPack, BatteryTarget, EscTarget, MotorTarget,
    PackLimits, PropellerTarget,
};

use crate::error::{Error, Result};
use crate::model::{BatteryParams, EscParams, MotorParams, PropellerParams};

pub const CATALOG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum ComponentClass {
    Propeller,
    Motor,
    Esc,
    Battery,
}

impl ComponentClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ComponentClass::Propeller => "propeller",
            ComponentClass::Motor => "motor",
            ComponentClass::Esc => "esc",
            ComponentClass::Battery => "battery",
        }
    }

    /// Class from a file stem such as `motors` or `esc_hv`.
    fn from_stem(stem: &str) -> Option<Self> {
        let s = stem.to_ascii_lowercase();
        [Self::Propeller, Self::Motor, Self::Esc, Self::Battery]
            .into_iter()
            .find(|c| s.starts_with(c.as_str()))
            .or_else(|| s.starts_with("batteries").then_some(Self::Battery))
    }
}

impl fmt::Display for ComponentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parameters that can check their own invariants.
pub trait ComponentParams: Clone + Serialize + DeserializeOwned {
    const CLASS: ComponentClass;
    fn validate(&self) -> Result<()>;
}

impl ComponentParams for PropellerParams {
    const CLASS: ComponentClass = ComponentClass::Propeller;
    fn validate(&self) -> Result<()> {
        PropellerParams::validate(self)
    }
}

impl ComponentParams for MotorParams {
    const CLASS: ComponentClass = ComponentClass::Motor;
    fn validate(&self) -> Result<()> {
        MotorParams::validate(self)
    }
}

impl ComponentParams for EscParams {
    const CLASS: ComponentClass = ComponentClass::Esc;
    fn validate(&self) -> Result<()> {
        EscParams::validate(self)
    }
}

impl ComponentParams for BatteryParams {
    const CLASS: ComponentClass = ComponentClass::Battery;
    fn validate(&self) -> Result<()> {
        BatteryParams::validate(self)
    }
}

/// One catalog product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
#[schemars(rename = "{P}Product")]
pub struct Product<P> {
    pub id: String,
    pub params: P,
    #[serde(alias = "weight_N")]
    pub weight_n: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub price: Option<f64>,
    #[serde(default)]
    pub source: String,
}

impl<P: ComponentParams> Product<P> {
    pub fn validate(&self) -> Result<()> {
        if self.id.trim().is_empty() {
            return Err(Error::domain("empty identifier"));
        }
        if !(self.weight_n.is_finite() && self.weight_n > 0.0) {
            return Err(Error::domain(format!("weight {} N must be positive", self.weight_n)));
        }
        if self.price.is_some_and(|p| !(p >= 0.0)) {
            return Err(Error::domain("price must be nonnegative"));
        }
        self.params.validate()
    }
}

/// A record that failed validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Rejection {
    pub file: String,
    pub index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub reason: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.file)?;
        if let Some(line) = self.line {
            write!(f, ":{line}")?;
        }
        write!(f, ": record {}", self.index)?;
        if let Some(id) = &self.id {
            write!(f, " ({id})")?;
        }
        write!(f, ": {}", self.reason)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ValidationReport {
    pub accepted: usize,
    pub rejected: Vec<Rejection>,
}

/// Validated records of every class.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Catalog {
    pub propellers: Vec<Product<PropellerParams>>,
    pub motors: Vec<Product<MotorParams>>,
    pub escs: Vec<Product<EscParams>>,
    pub batteries: Vec<Product<BatteryParams>>,
    pub hash: String,
    pub report: ValidationReport,
}

#[derive(Deserialize)]
struct RawFile {
    schema_version: u32,
    class: ComponentClass,
    records: Vec<serde_json::Value>,
}

const BUNDLED: [(&str, &str); 4] = [
    ("propellers.json", include_str!("../../data/catalog/propellers.json")),
    ("motors.json", include_str!("../../data/catalog/motors.json")),
    ("escs.json", include_str!("../../data/catalog/escs.json")),
    ("batteries.json", include_str!("../../data/catalog/batteries.json")),
];

impl Catalog {
    pub fn builder() -> CatalogBuilder {
        CatalogBuilder::default()
    }

    /// The sample catalog compiled into the crate.
    pub fn bundled() -> Result<Self> {
        let mut b = Self::builder();
        for (name, text) in BUNDLED {
            b.add_json(Path::new(name), text)?;
        }
        Ok(b.finish())
    }

    /// Loads every `*.json` and `*.csv` file in `dir`. JSON files name their
    /// class; CSV files take it from the file name (`motors.csv`, ...).
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let entries = std::fs::read_dir(dir).map_err(|e| Error::Catalog {
            path: dir.to_path_buf(),
            message: e.to_string(),
        })?;
        let mut paths: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("json" | "csv")))
            .collect();
        paths.sort();
        if paths.is_empty() {
            return Err(Error::Catalog {
                path: dir.to_path_buf(),
                message: "no .json or .csv catalog files".into(),
            });
        }
        let mut b = Self::builder();
        for path in paths {
            b.add_file(&path)?;
        }
        Ok(b.finish())
    }

    /// Loads a single catalog file.
    pub fn load_file(path: &Path) -> Result<Self> {
        let mut b = Self::builder();
        b.add_file(path)?;
        Ok(b.finish())
    }

    pub fn is_empty(&self) -> bool {
        self.propellers.is_empty() && self.motors.is_empty() && self.escs.is_empty() && self.batteries.is_empty()
    }

    pub fn counts(&self) -> [usize; 4] {
        [
            self.propellers.len(),
            self.motors.len(),
            self.escs.len(),
            self.batteries.len(),
        ]
    }

    /// Assembles a catalog from already-validated records (tests, synthetic
    /// data). Records are validated again and duplicates rejected.
    pub fn from_records(
        propellers: Vec<Product<PropellerParams>>,
        motors: Vec<Product<MotorParams>>,
        escs: Vec<Product<EscParams>>,
        batteries: Vec<Product<BatteryParams>>,
    ) -> Result<Self> {
        let mut b = Self::builder();
        b.extend("<memory>", propellers, |c| &mut c.propellers);
        b.extend("<memory>", motors, |c| &mut c.motors);
        b.extend("<memory>", escs, |c| &mut c.escs);
        b.extend("<memory>", batteries, |c| &mut c.batteries);
        let cat = b.finish();
        match cat.report.rejected.first() {
            Some(r) => Err(Error::Catalog {
                path: PathBuf::from("<memory>"),
                message: r.to_string(),
            }),
            None => Ok(cat),
        }
    }

    fn compute_hash(&self) -> String {
        #[derive(Serialize)]
        struct Canonical<'a> {
            propellers: Vec<&'a Product<PropellerParams>>,
            motors: Vec<&'a Product<MotorParams>>,
            escs: Vec<&'a Product<EscParams>>,
            batteries: Vec<&'a Product<BatteryParams>>,
        }
        fn sorted<P>(v: &[Product<P>]) -> Vec<&Product<P>> {
            let mut s: Vec<_> = v.iter().collect();
            s.sort_by(|a, b| a.id.cmp(&b.id));
            s
        }
        let canonical = Canonical {
            propellers: sorted(&self.propellers),
            motors: sorted(&self.motors),
            escs: sorted(&self.escs),
            batteries: sorted(&self.batteries),
        };
        let bytes = serde_json::to_vec(&canonical).expect("catalog serializes");
        hex::encode(Sha256::digest(bytes))
    }
}

#[derive(Debug, Default)]
pub struct CatalogBuilder {
    catalog: Catalog,
    ids: HashSet<String>,
}

impl CatalogBuilder {
    fn add_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Catalog {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => {
                let class = path
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .and_then(ComponentClass::from_stem)
                    .ok_or_else(|| Error::Catalog {
                        path: path.to_path_buf(),
                        message: "CSV file name must start with propeller, motor, esc or battery".into(),
                    })?;
                let (records, rejects) = import_csv(text.as_bytes(), class).map_err(|e| Error::Catalog {
                    path: path.to_path_buf(),
                    message: e.to_string(),
                })?;
                let file = path.display().to_string();
                self.catalog.report.rejected.extend(rejects.into_iter().map(|mut r| {
                    r.file.clone_from(&file);
                    r
                }));
                self.add_values(
                    &file,
                    class,
                    records.into_iter().map(|(line, v)| (Some(line), v)).collect(),
                );
                Ok(())
            }
            _ => self.add_json(path, &text),
        }
    }

    /// Adds a schema-v1 JSON document.
    pub fn add_json(&mut self, path: &Path, text: &str) -> Result<()> {
        let catalog_err = |message: String| Error::Catalog {
            path: path.to_path_buf(),
            message,
        };
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| catalog_err(e.to_string()))?;
        let found = value
            .get("schema_version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| catalog_err("missing schema_version".into()))?;
        if found != u64::from(CATALOG_SCHEMA_VERSION) {
            return Err(Error::SchemaVersion {
                found: u32::try_from(found).unwrap_or(u32::MAX),
                expected: CATALOG_SCHEMA_VERSION,
            });
        }
        let raw: RawFile = serde_json::from_value(value).map_err(|e| catalog_err(e.to_string()))?;
        debug_assert_eq!(raw.schema_version, CATALOG_SCHEMA_VERSION);
        let mut cursor = 0;
        let located = raw
            .records
            .into_iter()
            .map(|v| {
                let line = v
                    .get("id")
                    .and_then(serde_json::Value::as_str)
                    .and_then(|id| find_line(text, id, &mut cursor));
                (line, v)
            })
            .collect();
        self.add_values(&path.display().to_string(), raw.class, located);
        Ok(())
    }

    fn add_values(&mut self, file: &str, class: ComponentClass, values: Vec<(Option<usize>, serde_json::Value)>) {
        match class {
            ComponentClass::Propeller => self.push_values(file, values, |c| &mut c.propellers),
            ComponentClass::Motor => self.push_values(file, values, |c| &mut c.motors),
            ComponentClass::Esc => self.push_values(file, values, |c| &mut c.escs),
            ComponentClass::Battery => self.push_values(file, values, |c| &mut c.batteries),
        }
    }

    fn push_values<P: ComponentParams>(
        &mut self,
        file: &str,
        values: Vec<(Option<usize>, serde_json::Value)>,
        slot: fn(&mut Catalog) -> &mut Vec<Product<P>>,
    ) {
        for (index, (line, value)) in values.into_iter().enumerate() {
            let id = value.get("id").and_then(serde_json::Value::as_str).map(str::to_owned);
            let reject = |reason: String| Rejection {
                file: file.to_owned(),
                index,
                line,
                id: id.clone(),
                reason,
            };
            match serde_json::from_value::<Product<P>>(value) {
                Ok(product) => {
                    if let Err(r) = self.accept(product, slot) {
                        let r = reject(r);
                        self.catalog.report.rejected.push(r);
                    }
                }
                Err(e) => {
                    let r = reject(e.to_string());
                    self.catalog.report.rejected.push(r);
                }
            }
        }
    }

    fn extend<P: ComponentParams>(
        &mut self,
        file: &str,
        products: Vec<Product<P>>,
        slot: fn(&mut Catalog) -> &mut Vec<Product<P>>,
    ) {
        for (index, product) in products.into_iter().enumerate() {
            let id = Some(product.id.clone());
            if let Err(reason) = self.accept(product, slot) {
                self.catalog.report.rejected.push(Rejection {
                    file: file.to_owned(),
                    index,
                    line: None,
                    id,
                    reason,
                });
            }
        }
    }

    fn accept<P: ComponentParams>(
        &mut self,
        product: Product<P>,
        slot: fn(&mut Catalog) -> &mut Vec<Product<P>>,
    ) -> std::result::Result<(), String> {
        product.validate().map_err(|e| e.to_string())?;
        if !self.ids.insert(product.id.clone()) {
            return Err(format!("duplicate identifier {:?}", product.id));
        }
        slot(&mut self.catalog).push(product);
        self.catalog.report.accepted += 1;
        Ok(())
    }

    pub fn finish(mut self) -> Catalog {
        self.catalog.hash = self.catalog.compute_hash();
        self.catalog
    }
}

/// 1-based line of the next `"id"` literal after `cursor`.
fn find_line(text: &str, id: &str, cursor: &mut usize) -> Option<usize> {
    let needle = serde_json::to_string(id).ok()?;
    let pos = text[*cursor..].find(&needle)? + *cursor;
    *cursor = pos + needle.len();
    Some(text[..pos].matches('\n').count() + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_loads_clean() {
        let c = Catalog::bundled().unwrap();
        assert!(c.report.rejected.is_empty(), "{:?}", c.report.rejected);
        assert!(c.counts().iter().all(|n| *n >= 5));
        assert_eq!(c.hash.len(), 64);
    }

    #[test]
    fn bad_records_are_rejected_with_lines() {
        let text = r#"{
  "schema_version": 1,
  "class": "propeller",
  "records": [
    {"id": "good", "params": {"diameter_m": 0.5, "pitch_m": 0.15, "blades": 2}, "weight_n": 0.5},
    {"id": "one-blade", "params": {"diameter_m": 0.5, "pitch_m": 0.15, "blades": 1}, "weight_n": 0.5},
    {"id": "good", "params": {"diameter_m": 0.6, "pitch_m": 0.2, "blades": 2}, "weight_n": 0.6}
  ]
}"#;
        let mut b = Catalog::builder();
        b.add_json(Path::new("props.json"), text).unwrap();
        let c = b.finish();
        assert_eq!(c.propellers.len(), 1);
        assert_eq!(c.report.rejected.len(), 2);
        assert_eq!(c.report.rejected[0].line, Some(6));
        assert!(c.report.rejected[0].reason.contains("blade"));
        assert_eq!(c.report.rejected[1].line, Some(7));
        assert!(c.report.rejected[1].reason.contains("duplicate"));
    }

    #[test]
    fn schema_version_mismatch() {
        let mut b = Catalog::builder();
        let r = b.add_json(
            Path::new("x.json"),
            r#"{"schema_version": 2, "class": "esc", "records": []}"#,
        );
        assert!(matches!(r, Err(Error::SchemaVersion { found: 2, expected: 1 })));
    }

    #[test]
    fn hash_ignores_order() {
        let c = Catalog::bundled().unwrap();
        let mut rev = c.clone();
        rev.motors.reverse();
        rev.batteries.reverse();
        assert_eq!(rev.compute_hash(), c.hash);
        rev.motors[0].weight_n += 0.01;
        assert_ne!(rev.compute_hash(), c.hash);
    }

    #[test]
    fn class_from_file_stem() {
        assert_eq!(ComponentClass::from_stem("motors"), Some(ComponentClass::Motor));
        assert_eq!(
            ComponentClass::from_stem("batteries_tattu"),
            Some(ComponentClass::Battery)
        );
        assert_eq!(ComponentClass::from_stem("escs"), Some(ComponentClass::Esc));
        assert_eq!(ComponentClass::from_stem("notes"), None);
    }
}
