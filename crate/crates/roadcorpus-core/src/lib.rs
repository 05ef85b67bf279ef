//! Road-network model and query engine for OpenStreetMap-derived data.
//!
//! This crate holds everything that runs on in-memory data: spherical
//! geodesy, road-graph construction from parsed nodes and ways, spatial
//! queries (nearest roads, directional retrieval, density-aware
//! sampling), the text supervision generators, and the benchmark suite
//! generator plus its scorer. File formats, XML ingest and the CLI live
//! in the `roadcorpus` companion crate.
//!
//! The crate is `no_std` (with `alloc`). All floating-point math goes
//! through `libm`, so identical inputs produce identical bytes on every
//! platform, and all maps are B-trees, so iteration order never depends
//! on hashing. Determinism is a contract here, not an accident: every
//! randomized operation takes an explicit seed and derives per-domain
//! streams from it.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod corpus;
pub mod eval;
pub mod geo;
pub mod graph;
pub mod index;
pub mod osm;
pub mod packs;
pub mod sample;
pub mod spatial;
pub mod tags;
pub mod templates;
pub mod text;

#[doc(hidden)]
pub mod testkit;

pub use geo::{CompassDirection, GeoError, GeoPoint};
pub use graph::{NamedRoad, RoadMeta, RoadNetwork, RoadSegment, SegmentMeta};
pub use tags::{HighwayClass, NormalizedTags};

/// Mean earth radius in meters, shared by every distance and length
/// computation in the workspace.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;
