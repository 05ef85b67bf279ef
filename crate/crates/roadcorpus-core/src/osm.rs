//! Parsed OpenStreetMap primitives, the input to graph construction.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// A point with an OSM identifier.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OsmNode {
    pub id: u64,
    pub lat: f64,
    pub lon: f64,
}

/// An ordered node sequence with its raw tags. The ingest stage
/// guarantees `node_refs.len() >= 2` and that every ref resolves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OsmWay {
    pub id: u64,
    pub node_refs: Vec<u64>,
    pub tags: BTreeMap<String, String>,
}
