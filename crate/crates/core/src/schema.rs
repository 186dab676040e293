//! JSON Schema of every request and response body, as one document.
//!
//! Requests and responses are described separately because several types
//! read differently from how they are written: defaults make fields optional
//! on input, and derived fields such as air density only appear on output.

use schemars::generate::SchemaSettings;
use schemars::JsonSchema;
use serde_json::{json, Map, Value};

use crate::api::{EvaluateRequest, Failure};
use crate::baseline::ComparisonReport;
use crate::catalog::Catalog;
use crate::evaluator::{PerformanceReport, PropulsionSystem};
use crate::model::RequirementsInput;
use crate::optimizer::DesignResult;
use crate::stats::StatModels;

const DRAFT: &str = "https://json-schema.org/draft/2020-12/schema";

struct Side {
    generator: schemars::SchemaGenerator,
    roots: Map<String, Value>,
}

impl Side {
    fn new(name: &str, settings: SchemaSettings) -> Self {
        let mut settings = settings;
        settings.definitions_path = format!("/$defs/{name}/").into();
        settings.meta_schema = None;
        Self {
            generator: settings.into_generator(),
            roots: Map::new(),
        }
    }

    fn add<T: JsonSchema>(&mut self) -> &mut Self {
        let schema = self.generator.subschema_for::<T>();
        if schema.get("$ref").is_none() {
            self.roots.insert(T::schema_name().into_owned(), schema.to_value());
        }
        self
    }

    fn finish(mut self) -> Value {
        let mut defs = self.generator.take_definitions(true);
        defs.append(&mut self.roots);
        Value::Object(defs)
    }
}

/// The full document. Stable across runs, so it can be committed and diffed.
pub fn api_schema() -> Value {
    let mut requests = Side::new("request", SchemaSettings::draft2020_12().for_deserialize());
    requests
        .add::<RequirementsInput>()
        .add::<EvaluateRequest>()
        .add::<PropulsionSystem>();
    let mut responses = Side::new("response", SchemaSettings::draft2020_12().for_serialize());
    responses
        .add::<DesignResult>()
        .add::<PerformanceReport>()
        .add::<Catalog>()
        .add::<Failure>()
        .add::<ComparisonReport>()
        .add::<StatModels>();

    let req = |name: &str| json!({ "$ref": format!("#/$defs/request/{name}") });
    let res = |name: &str| json!({ "$ref": format!("#/$defs/response/{name}") });
    json!({
        "$schema": DRAFT,
        "title": "propsizer JSON API",
        "description": "Request and response bodies of the HTTP service. The CLI prints the same documents. All numbers are SI: meters, newtons, volts, amperes, ohms, mAh, RPM/V, C-rate, minutes.",
        "endpoints": {
            "GET /api/health": { "200": { "type": "string", "const": "ok" } },
            "GET /api/catalog": { "200": res("Catalog") },
            "GET /api/schema": { "200": { "description": "this document" } },
            "POST /api/optimize": {
                "request": req("RequirementsInput"),
                "200": res("DesignResult"),
                "400": res("Failure"),
                "422": res("Failure"),
            },
            "POST /api/evaluate": {
                "request": req("EvaluateRequest"),
                "200": res("PerformanceReport"),
                "400": res("Failure"),
                "422": res("Failure"),
            },
        },
        "$defs": {
            "request": requests.finish(),
            "response": responses.finish(),
        },
    })
}

/// [`api_schema`] rendered the way it is committed to the repository.
pub fn api_schema_json() -> String {
    crate::api::to_json(&api_schema())
}
