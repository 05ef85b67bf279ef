//! Road network construction: way splitting at junctions, chain
//! merging across attribute-identical joins, named-road grouping and
//! metadata aggregation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::geo::{haversine_m, BoundingBox, GeoPoint};
use crate::index::CellGrid;
use crate::osm::{OsmNode, OsmWay};
use crate::tags::{normalize_tags, HighwayClass, NormalizedTags};

/// Default spatial index cell size in meters.
pub const DEFAULT_INDEX_CELL_M: f64 = 500.0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphError {
    /// Construction produced zero segments.
    EmptyNetwork,
    /// Lookup of a road name that is not in the network.
    UnknownRoad,
    /// The extract spans the antimeridian or reaches beyond |lat| 85.
    AoiUnsupported,
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::EmptyNetwork => write!(f, "network has no segments"),
            GraphError::UnknownRoad => write!(f, "road name not present in network"),
            GraphError::AoiUnsupported => {
                write!(f, "AOI crosses the antimeridian or exceeds latitude 85")
            }
        }
    }
}

impl core::error::Error for GraphError {}

/// Attributes of one segment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentMeta {
    pub name: Option<String>,
    pub road_type: HighwayClass,
    pub maxspeed_kmh: Option<f64>,
    pub lanes: Option<u32>,
    pub length_m: f64,
}

/// A contiguous run of road with consistent attributes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoadSegment {
    pub seg_id: u32,
    pub geometry: Vec<GeoPoint>,
    pub meta: SegmentMeta,
    pub endpoint_node_ids: (u64, u64),
}

/// Aggregated attributes of a named road.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoadMeta {
    pub total_length_m: f64,
    pub road_type: HighwayClass,
    pub maxspeed_kmh: Option<f64>,
    pub lanes: Option<u32>,
    pub segment_count: usize,
}

/// All segments sharing one normalized name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedRoad {
    pub name: String,
    pub segment_ids: BTreeSet<u32>,
    pub meta: RoadMeta,
}

/// The immutable road network: segments, name groups, endpoint
/// adjacency and the spatial index.
#[derive(Clone, Debug)]
pub struct RoadNetwork {
    segments: Vec<RoadSegment>,
    roads: BTreeMap<String, NamedRoad>,
    node_adjacency: BTreeMap<u64, BTreeSet<u32>>,
    aoi_bbox: BoundingBox,
    index: CellGrid,
    index_cell_m: f64,
}

impl RoadNetwork {
    /// Rebuilds every derived structure (name groups, adjacency, bbox,
    /// spatial index) from a finished segment list. `seg_id`s must be
    /// dense and in positional order.
    pub fn from_segments(segments: Vec<RoadSegment>, index_cell_m: f64) -> Result<RoadNetwork, GraphError> {
        if segments.is_empty() {
            return Err(GraphError::EmptyNetwork);
        }
        debug_assert!(segments.iter().enumerate().all(|(i, s)| s.seg_id as usize == i));

        let aoi_bbox = BoundingBox::from_points(
            segments.iter().flat_map(|s| s.geometry.iter().copied()),
        )
        .ok_or(GraphError::EmptyNetwork)?;
        if aoi_bbox.max_abs_lat() > 85.0 || aoi_bbox.max_lon - aoi_bbox.min_lon > 180.0 {
            return Err(GraphError::AoiUnsupported);
        }

        let mut groups: BTreeMap<String, BTreeSet<u32>> = BTreeMap::new();
        let mut node_adjacency: BTreeMap<u64, BTreeSet<u32>> = BTreeMap::new();
        for seg in &segments {
            if let Some(name) = &seg.meta.name {
                groups.entry(name.clone()).or_default().insert(seg.seg_id);
            }
            node_adjacency.entry(seg.endpoint_node_ids.0).or_default().insert(seg.seg_id);
            node_adjacency.entry(seg.endpoint_node_ids.1).or_default().insert(seg.seg_id);
        }
        let roads = groups
            .into_iter()
            .map(|(name, segment_ids)| {
                let meta = aggregate_road_meta(&segment_ids, &segments);
                (name.clone(), NamedRoad { name, segment_ids, meta })
            })
            .collect();

        let index = CellGrid::build(&segments, aoi_bbox, index_cell_m);
        Ok(RoadNetwork { segments, roads, node_adjacency, aoi_bbox, index, index_cell_m })
    }

    pub fn segments(&self) -> &[RoadSegment] {
        &self.segments
    }

    pub fn segment(&self, seg_id: u32) -> &RoadSegment {
        &self.segments[seg_id as usize]
    }

    pub fn roads(&self) -> &BTreeMap<String, NamedRoad> {
        &self.roads
    }

    pub fn road(&self, name: &str) -> Option<&NamedRoad> {
        self.roads.get(name)
    }

    pub fn node_adjacency(&self) -> &BTreeMap<u64, BTreeSet<u32>> {
        &self.node_adjacency
    }

    pub fn aoi_bbox(&self) -> BoundingBox {
        self.aoi_bbox
    }

    pub fn index(&self) -> &CellGrid {
        &self.index
    }

    pub fn index_cell_m(&self) -> f64 {
        self.index_cell_m
    }

    pub fn total_length_m(&self) -> f64 {
        self.segments.iter().map(|s| s.meta.length_m).sum()
    }

    /// Every differently-named road sharing at least one node with
    /// `road_name`, with the shared coordinates. Duplicates collapse per
    /// (name, node); output sorted by name, then latitude, then
    /// longitude.
    pub fn connected_roads(&self, road_name: &str) -> Result<Vec<(String, GeoPoint)>, GraphError> {
        let road = self.roads.get(road_name).ok_or(GraphError::UnknownRoad)?;
        let mut hits: BTreeSet<(String, u64)> = BTreeSet::new();
        for &seg_id in &road.segment_ids {
            let seg = &self.segments[seg_id as usize];
            for node in [seg.endpoint_node_ids.0, seg.endpoint_node_ids.1] {
                for &other_id in self.node_adjacency.get(&node).into_iter().flatten() {
                    let other = &self.segments[other_id as usize];
                    match &other.meta.name {
                        Some(other_name) if other_name != road_name => {
                            hits.insert((other_name.clone(), node));
                        }
                        _ => {}
                    }
                }
            }
        }
        let mut out: Vec<(String, GeoPoint)> = hits
            .into_iter()
            .map(|(name, node)| (name, self.node_coordinate(node)))
            .collect();
        out.sort_by(|a, b| {
            a.0.cmp(&b.0)
                .then(a.1.lat.total_cmp(&b.1.lat))
                .then(a.1.lon.total_cmp(&b.1.lon))
        });
        Ok(out)
    }

    /// Coordinate of an endpoint node, read back from any incident
    /// segment's geometry.
    fn node_coordinate(&self, node: u64) -> GeoPoint {
        let seg_id = *self.node_adjacency[&node].iter().next().expect("adjacency entry");
        let seg = &self.segments[seg_id as usize];
        if seg.endpoint_node_ids.0 == node {
            seg.geometry[0]
        } else {
            *seg.geometry.last().expect("non-empty geometry")
        }
    }
}

/// Key on which adjacent chains may merge. Speed is compared bitwise,
/// which is exact for values produced by tag parsing.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct MergeKey {
    name: Option<String>,
    class: HighwayClass,
    maxspeed_bits: Option<u64>,
    lanes: Option<u32>,
}

impl MergeKey {
    fn of(tags: &NormalizedTags) -> MergeKey {
        MergeKey {
            name: tags.name.clone(),
            class: tags.highway_class.clone(),
            maxspeed_bits: tags.maxspeed_kmh.map(f64::to_bits),
            lanes: tags.lanes,
        }
    }
}

struct Piece {
    nodes: Vec<u64>,
    key_id: u32,
}

/// Builds the network from parsed nodes and ways.
///
/// Ways are split at every junction node (a node referenced by two or
/// more distinct ways, or appearing twice in one way), the resulting
/// chains are re-joined across nodes where exactly two chain ends with
/// identical merge keys meet, and each final chain becomes one segment.
/// Segment ids are assigned by ascending (smallest constituent way id,
/// position within that way), so the output is independent of input
/// ordering.
pub fn build_network(
    nodes: &[OsmNode],
    ways: &[OsmWay],
    index_cell_m: f64,
) -> Result<RoadNetwork, GraphError> {
    let mut coords: BTreeMap<u64, GeoPoint> = BTreeMap::new();
    for n in nodes {
        coords.entry(n.id).or_insert(GeoPoint::new(n.lat, n.lon));
    }

    // Deduplicate ways by id and drop any the ingest contract already
    // forbids (short or dangling), then order them so piece numbering
    // is deterministic regardless of caller ordering.
    let mut by_id: BTreeMap<u64, &OsmWay> = BTreeMap::new();
    for w in ways {
        if w.node_refs.len() >= 2 && w.node_refs.iter().all(|n| coords.contains_key(n)) {
            by_id.entry(w.id).or_insert(w);
        }
    }

    // A node is a junction when >= 2 distinct ways reference it or one
    // way references it twice.
    let mut way_count: BTreeMap<u64, u32> = BTreeMap::new();
    let mut junctions: BTreeSet<u64> = BTreeSet::new();
    for way in by_id.values() {
        let mut seen_in_way: BTreeSet<u64> = BTreeSet::new();
        for &node in &way.node_refs {
            if seen_in_way.insert(node) {
                let c = way_count.entry(node).or_insert(0);
                *c += 1;
                if *c >= 2 {
                    junctions.insert(node);
                }
            } else {
                junctions.insert(node);
            }
        }
    }

    // Split each way into pieces at interior junction occurrences.
    let mut keys: Vec<MergeKey> = Vec::new();
    let mut key_ids: BTreeMap<MergeKey, u32> = BTreeMap::new();
    let mut pieces: Vec<Piece> = Vec::new();
    for way in by_id.values() {
        let tags = normalize_tags(&way.tags);
        let key = MergeKey::of(&tags);
        let key_id = *key_ids.entry(key).or_insert_with(|| {
            keys.push(MergeKey::of(&tags));
            (keys.len() - 1) as u32
        });

        let refs = &way.node_refs;
        let mut start = 0usize;
        for i in 1..refs.len() {
            let cut = i == refs.len() - 1 || junctions.contains(&refs[i]);
            if cut {
                pieces.push(Piece { nodes: refs[start..=i].to_vec(), key_id });
                start = i;
            }
        }
    }

    // Join chains across nodes where exactly two piece ends of the same
    // key meet. Ends are indexed as piece*2 (start) and piece*2+1 (end).
    let mut ends_at_node: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for (i, piece) in pieces.iter().enumerate() {
        let first = *piece.nodes.first().expect(">=2 nodes");
        let last = *piece.nodes.last().expect(">=2 nodes");
        ends_at_node.entry(first).or_default().push(i as u32 * 2);
        ends_at_node.entry(last).or_default().push(i as u32 * 2 + 1);
    }
    let joinable = |node: u64, pieces: &[Piece]| -> Option<(u32, u32)> {
        let ends = ends_at_node.get(&node)?;
        if ends.len() != 2 {
            return None;
        }
        let (a, b) = (ends[0], ends[1]);
        if a / 2 == b / 2 || pieces[(a / 2) as usize].key_id != pieces[(b / 2) as usize].key_id {
            return None;
        }
        Some((a, b))
    };

    let mut consumed = alloc::vec![false; pieces.len()];
    let mut chains: Vec<(Vec<u64>, u32)> = Vec::new();
    for start_piece in 0..pieces.len() {
        if consumed[start_piece] {
            continue;
        }
        consumed[start_piece] = true;
        let key_id = pieces[start_piece].key_id;
        let mut nodes: Vec<u64> = pieces[start_piece].nodes.clone();

        // Extend forward from the tail, then backward from the head.
        for forward in [true, false] {
            loop {
                let here = if forward { *nodes.last().unwrap() } else { nodes[0] };
                let Some((a, b)) = joinable(here, &pieces) else { break };
                // Pick the end belonging to a not-yet-consumed piece.
                let next_end = if consumed[(a / 2) as usize] { b } else { a };
                let next_piece = (next_end / 2) as usize;
                if consumed[next_piece] {
                    break; // closed a ring
                }
                consumed[next_piece] = true;
                let mut add = pieces[next_piece].nodes.clone();
                // Entering at the piece's end means traversing it reversed.
                if next_end % 2 == 1 {
                    add.reverse();
                }
                debug_assert_eq!(add[0], here);
                if forward {
                    nodes.extend_from_slice(&add[1..]);
                } else {
                    let mut prefix: Vec<u64> = add;
                    prefix.reverse(); // now ends with `here`
                    prefix.pop();
                    prefix.extend_from_slice(&nodes);
                    nodes = prefix;
                }
            }
        }
        chains.push((nodes, key_id));
    }

    // Materialize segments, dropping zero-length chains.
    let mut segments: Vec<RoadSegment> = Vec::new();
    for (chain, key_id) in chains {
        let mut geometry: Vec<GeoPoint> = Vec::with_capacity(chain.len());
        for node in &chain {
            let p = coords[node];
            if geometry.last() != Some(&p) {
                geometry.push(p);
            }
        }
        if geometry.len() < 2 {
            continue;
        }
        let length_m: f64 = geometry.windows(2).map(|w| haversine_m(w[0], w[1])).sum();
        if length_m <= 0.0 {
            continue;
        }
        let key = &keys[key_id as usize];
        segments.push(RoadSegment {
            seg_id: segments.len() as u32,
            geometry,
            meta: SegmentMeta {
                name: key.name.clone(),
                road_type: key.class.clone(),
                maxspeed_kmh: key.maxspeed_bits.map(f64::from_bits),
                lanes: key.lanes,
                length_m,
            },
            endpoint_node_ids: (*chain.first().unwrap(), *chain.last().unwrap()),
        });
    }

    RoadNetwork::from_segments(segments, index_cell_m)
}

/// Length-weighted modal aggregation of segment metadata.
///
/// Attributes absent on a segment do not vote. Ties go to the larger
/// numeric value, and for road type to the higher class (motorway
/// first); equal-rank `other` classes break on their raw string.
pub fn aggregate_road_meta(segment_ids: &BTreeSet<u32>, segments: &[RoadSegment]) -> RoadMeta {
    let mut total_length_m = 0.0;
    let mut class_votes: BTreeMap<HighwayClass, f64> = BTreeMap::new();
    let mut speed_votes: BTreeMap<u64, f64> = BTreeMap::new();
    let mut lane_votes: BTreeMap<u32, f64> = BTreeMap::new();
    for &seg_id in segment_ids {
        let seg = &segments[seg_id as usize];
        let w = seg.meta.length_m;
        total_length_m += w;
        *class_votes.entry(seg.meta.road_type.clone()).or_insert(0.0) += w;
        if let Some(speed) = seg.meta.maxspeed_kmh {
            *speed_votes.entry(speed.to_bits()).or_insert(0.0) += w;
        }
        if let Some(lanes) = seg.meta.lanes {
            *lane_votes.entry(lanes).or_insert(0.0) += w;
        }
    }

    let road_type = class_votes
        .into_iter()
        .max_by(|(ca, wa), (cb, wb)| {
            wa.total_cmp(wb)
                .then(cb.rank().cmp(&ca.rank()))
                .then(cb.as_str().cmp(ca.as_str()))
        })
        .map(|(c, _)| c)
        .expect("non-empty segment set");
    // Keys are positive finite speeds, so bit order equals numeric order
    // and the last entry is the largest value; max_by prefers later
    // equal elements, so ties resolve to the larger value.
    let maxspeed_kmh = speed_votes
        .into_iter()
        .max_by(|(_, wa), (_, wb)| wa.total_cmp(wb))
        .map(|(bits, _)| f64::from_bits(bits));
    let lanes = lane_votes
        .into_iter()
        .max_by(|(_, wa), (_, wb)| wa.total_cmp(wb))
        .map(|(l, _)| l);

    RoadMeta {
        total_length_m,
        road_type,
        maxspeed_kmh,
        lanes,
        segment_count: segment_ids.len(),
    }
}
