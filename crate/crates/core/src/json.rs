//! JSON records for classification results and invariant reports.
//!
//! Field order is fixed by the struct layout, so output is byte-for-byte
//! deterministic for a given input.

use serde::{Deserialize, Serialize};

use crate::family::{FamilyId, Params};
use crate::group::AffineMap;
use crate::invariants::InvariantReport;
use crate::normalize::ClassificationResult;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub schema_version: u32,
    pub family: FamilyId,
    pub params: Params,
    pub scale: f64,
    pub map: AffineMap,
    pub canonical_text: String,
    pub residual: f64,
}

impl From<&ClassificationResult> for ClassificationRecord {
    fn from(r: &ClassificationResult) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            family: r.family,
            params: r.params,
            scale: r.scale,
            map: r.witness,
            canonical_text: r.canonical.to_string(),
            residual: r.residual,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantRecord {
    pub schema_version: u32,
    pub cusp: Vec<f64>,
    pub isol: Vec<f64>,
    pub node: Vec<f64>,
    pub red: Vec<f64>,
    /// `[re, im]` pairs.
    pub sing_complex: Vec<[f64; 2]>,
    pub nonisolated_singular_locus: bool,
    pub red_continuum: bool,
    pub other_singular: Vec<f64>,
}

impl From<&InvariantReport> for InvariantRecord {
    fn from(r: &InvariantReport) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            cusp: r.cusp.clone(),
            isol: r.isol.clone(),
            node: r.node.clone(),
            red: r.red.clone(),
            sing_complex: r.sing_complex.iter().map(|z| [z.re, z.im]).collect(),
            nonisolated_singular_locus: r.nonisolated_singular_locus,
            red_continuum: r.red_continuum,
            other_singular: r.other_singular.clone(),
        }
    }
}

pub fn classification_to_json(r: &ClassificationResult) -> String {
    serde_json::to_string(&ClassificationRecord::from(r)).expect("record serializes")
}

pub fn invariants_to_json(r: &InvariantReport) -> String {
    serde_json::to_string(&InvariantRecord::from(r)).expect("record serializes")
}
