//! JSON shapes shared by the reports.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::model::{serialize_model, PreferenceModel, Relation, WorldSet};
use crate::semantics::Assignment;

/// A frame (no valuation) in model-file format, optionally with the
/// metavariable assignment that falsifies a schema on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrameWitnessJson {
    pub worlds: usize,
    pub model: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub assignment: BTreeMap<String, WorldSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub falsified_at: Option<WorldSet>,
}

impl FrameWitnessJson {
    pub fn frame(frame: &Relation) -> Self {
        FrameWitnessJson {
            worlds: frame.len(),
            model: serialize_model(&PreferenceModel::new(*frame)),
            assignment: BTreeMap::new(),
            falsified_at: None,
        }
    }

    pub fn falsifying(frame: &Relation, assignment: &Assignment, falsified_at: WorldSet) -> Self {
        FrameWitnessJson {
            assignment: assignment.clone(),
            falsified_at: Some(falsified_at),
            ..FrameWitnessJson::frame(frame)
        }
    }
}

/// A full model in model-file format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelWitnessJson {
    pub worlds: usize,
    pub model: String,
}

impl ModelWitnessJson {
    pub fn new(model: &PreferenceModel) -> Self {
        ModelWitnessJson { worlds: model.world_count(), model: serialize_model(model) }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}
