//! Synthetic fixtures and independent reference routes used by the
//! test suites. Nothing here participates in production code paths:
//! the oracles re-derive results through different algorithms
//! (3-D vector geodesy, exhaustive scans, fixpoint merging) so the
//! fast paths can be checked against them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::Rng;

use crate::geo::{compass_of, haversine_m, initial_bearing_deg, CompassDirection, GeoPoint};
use crate::graph::{build_network, RoadNetwork};
use crate::osm::{OsmNode, OsmWay};
use crate::sample::rng_for;
use crate::tags::normalize_tags;
use crate::EARTH_RADIUS_M;

const DEG2RAD: f64 = core::f64::consts::PI / 180.0;

pub fn node(id: u64, lat: f64, lon: f64) -> OsmNode {
    OsmNode { id, lat, lon }
}

pub fn way(id: u64, refs: &[u64], tags: &[(&str, &str)]) -> OsmWay {
    OsmWay {
        id,
        node_refs: refs.to_vec(),
        tags: tags.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
    }
}

pub fn network_from(nodes: &[OsmNode], ways: &[OsmWay]) -> RoadNetwork {
    build_network(nodes, ways, 500.0).expect("synthetic network builds")
}

// ----------------------------------------------------------------------
// Vector-route geodesy (reference for haversine/bearing)

fn unit_vec(p: GeoPoint) -> [f64; 3] {
    let lat = p.lat * DEG2RAD;
    let lon = p.lon * DEG2RAD;
    [
        libm::cos(lat) * libm::cos(lon),
        libm::cos(lat) * libm::sin(lon),
        libm::sin(lat),
    ]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    libm::sqrt(dot(a, a))
}

/// Great-circle distance via the 3-D chord angle atan2(|a x b|, a.b).
pub fn oracle_distance_m(p1: GeoPoint, p2: GeoPoint) -> f64 {
    let a = unit_vec(p1);
    let b = unit_vec(p2);
    EARTH_RADIUS_M * libm::atan2(norm(cross(a, b)), dot(a, b))
}

/// Initial bearing via the local north/east tangent frame at `p1`.
pub fn oracle_bearing_deg(p1: GeoPoint, p2: GeoPoint) -> f64 {
    let a = unit_vec(p1);
    let b = unit_vec(p2);
    let k = [0.0, 0.0, 1.0];
    let mut east = cross(k, a);
    let en = norm(east);
    east = [east[0] / en, east[1] / en, east[2] / en];
    let north = cross(a, east);
    let ab = dot(a, b);
    let d = [b[0] - ab * a[0], b[1] - ab * a[1], b[2] - ab * a[2]];
    let theta = libm::atan2(dot(d, east), dot(d, north)) / DEG2RAD;
    let theta = if theta < 0.0 { theta + 360.0 } else { theta };
    if theta >= 360.0 {
        theta - 360.0
    } else {
        theta
    }
}

// ----------------------------------------------------------------------
// Exhaustive query references

/// Nearest named roads by scanning every segment, no index.
pub fn brute_force_nearest_roads(
    p: GeoPoint,
    network: &RoadNetwork,
    k: usize,
) -> Vec<(String, f64)> {
    let mut best: BTreeMap<&str, f64> = BTreeMap::new();
    for seg in network.segments() {
        let Some(name) = seg.meta.name.as_deref() else { continue };
        let d = crate::spatial::project_to_segment(p, seg).distance_m;
        best.entry(name)
            .and_modify(|cur| {
                if d < *cur {
                    *cur = d;
                }
            })
            .or_insert(d);
    }
    let mut ranked: Vec<(String, f64)> =
        best.into_iter().map(|(n, d)| (n.to_string(), d)).collect();
    ranked.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(k);
    ranked
}

/// Directional retrieval by exhaustive per-segment candidate testing:
/// every polyline vertex plus every in-edge projection foot, computed
/// here from scratch, filtered by radius and sector.
pub fn brute_force_directional(
    p: GeoPoint,
    network: &RoadNetwork,
    r_m: f64,
    k: usize,
) -> BTreeMap<CompassDirection, Vec<(String, f64)>> {
    let cos_lat = libm::cos(p.lat * DEG2RAD);
    let scale = EARTH_RADIUS_M * DEG2RAD;
    let mut per_dir: BTreeMap<CompassDirection, BTreeMap<&str, f64>> = BTreeMap::new();

    for seg in network.segments() {
        let Some(name) = seg.meta.name.as_deref() else { continue };
        let mut candidates: Vec<GeoPoint> = seg.geometry.clone();
        for edge in seg.geometry.windows(2) {
            let ax = (edge[0].lon - p.lon) * cos_lat * scale;
            let ay = (edge[0].lat - p.lat) * scale;
            let bx = (edge[1].lon - p.lon) * cos_lat * scale;
            let by = (edge[1].lat - p.lat) * scale;
            let dx = bx - ax;
            let dy = by - ay;
            let len2 = dx * dx + dy * dy;
            if len2 > 0.0 {
                let t = (-(ax * dx + ay * dy) / len2).clamp(0.0, 1.0);
                if t > 0.0 && t < 1.0 {
                    let fx = ax + t * dx;
                    let fy = ay + t * dy;
                    candidates.push(GeoPoint::new(
                        p.lat + fy / scale,
                        p.lon + fx / (cos_lat * scale),
                    ));
                }
            }
        }
        for c in candidates {
            let d = haversine_m(p, c);
            if d > r_m {
                continue;
            }
            let Ok(bearing) = initial_bearing_deg(p, c) else { continue };
            let dir = compass_of(bearing);
            let slot = per_dir.entry(dir).or_default();
            slot.entry(name)
                .and_modify(|cur| {
                    if d < *cur {
                        *cur = d;
                    }
                })
                .or_insert(d);
        }
    }

    per_dir
        .into_iter()
        .map(|(dir, best)| {
            let mut ranked: Vec<(String, f64)> =
                best.into_iter().map(|(n, d)| (n.to_string(), d)).collect();
            ranked.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
            ranked.truncate(k);
            (dir, ranked)
        })
        .collect()
}

// ----------------------------------------------------------------------
// Reference network construction (fixpoint merge)

/// A segment in comparable form: canonically oriented geometry bits
/// plus the merge-key fields.
pub type CanonicalSegment = (Vec<(u64, u64)>, Option<String>, String, Option<u64>, Option<u32>);

fn canonical_geometry(geometry: &[GeoPoint]) -> Vec<(u64, u64)> {
    let fwd: Vec<(u64, u64)> =
        geometry.iter().map(|p| (p.lat.to_bits(), p.lon.to_bits())).collect();
    let mut rev = fwd.clone();
    rev.reverse();
    if rev < fwd {
        rev
    } else {
        fwd
    }
}

/// Canonical comparable form of a built network's segments.
pub fn canonical_segments(network: &RoadNetwork) -> Vec<CanonicalSegment> {
    let mut out: Vec<CanonicalSegment> = network
        .segments()
        .iter()
        .map(|s| {
            (
                canonical_geometry(&s.geometry),
                s.meta.name.clone(),
                s.meta.road_type.as_str().to_string(),
                s.meta.maxspeed_kmh.map(f64::to_bits),
                s.meta.lanes,
            )
        })
        .collect();
    out.sort();
    out
}

/// Independent network construction: split at junctions found by
/// exhaustive node-degree inspection, then merge chains by rescanning
/// to a fixpoint. Returns the same canonical form as
/// [`canonical_segments`].
pub fn brute_force_build(nodes: &[OsmNode], ways: &[OsmWay]) -> Vec<CanonicalSegment> {
    let coords: BTreeMap<u64, GeoPoint> =
        nodes.iter().map(|n| (n.id, GeoPoint::new(n.lat, n.lon))).collect();
    let usable: Vec<&OsmWay> = {
        let mut by_id: BTreeMap<u64, &OsmWay> = BTreeMap::new();
        for w in ways {
            if w.node_refs.len() >= 2 && w.node_refs.iter().all(|n| coords.contains_key(n)) {
                by_id.entry(w.id).or_insert(w);
            }
        }
        by_id.into_values().collect()
    };

    // Node degree over distinct ways, plus intra-way repetition.
    let mut junction: BTreeMap<u64, bool> = BTreeMap::new();
    let mut touched_by: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for w in &usable {
        let mut counts: BTreeMap<u64, u32> = BTreeMap::new();
        for &n in &w.node_refs {
            *counts.entry(n).or_insert(0) += 1;
        }
        for (&n, &c) in &counts {
            touched_by.entry(n).or_default().push(w.id);
            if c >= 2 {
                junction.insert(n, true);
            }
        }
    }
    for (&n, ways) in &touched_by {
        if ways.len() >= 2 {
            junction.insert(n, true);
        }
    }

    #[derive(Clone)]
    struct Chain {
        nodes: Vec<u64>,
        key: (Option<String>, String, Option<u64>, Option<u32>),
    }

    let mut chains: Vec<Chain> = Vec::new();
    for w in &usable {
        let t = normalize_tags(&w.tags);
        let key = (
            t.name.clone(),
            t.highway_class.as_str().to_string(),
            t.maxspeed_kmh.map(f64::to_bits),
            t.lanes,
        );
        let refs = &w.node_refs;
        let mut start = 0usize;
        for i in 1..refs.len() {
            if i == refs.len() - 1 || junction.get(&refs[i]).copied().unwrap_or(false) {
                chains.push(Chain { nodes: refs[start..=i].to_vec(), key: key.clone() });
                start = i;
            }
        }
    }

    // Merge to a fixpoint: any node where exactly two chain ends of
    // equal key meet joins those chains.
    'merge: loop {
        let mut ends: BTreeMap<u64, Vec<(usize, bool)>> = BTreeMap::new();
        for (i, ch) in chains.iter().enumerate() {
            ends.entry(*ch.nodes.first().unwrap()).or_default().push((i, true));
            ends.entry(*ch.nodes.last().unwrap()).or_default().push((i, false));
        }
        for (_, incident) in ends {
            if incident.len() != 2 {
                continue;
            }
            let ((i, i_start), (j, j_start)) = (incident[0], incident[1]);
            if i == j || chains[i].key != chains[j].key {
                continue;
            }
            // Orient i to end at the shared node and j to start there.
            let mut left = chains[i].nodes.clone();
            if i_start {
                left.reverse();
            }
            let mut right = chains[j].nodes.clone();
            if !j_start {
                right.reverse();
            }
            assert_eq!(left.last(), right.first());
            left.extend_from_slice(&right[1..]);
            let key = chains[i].key.clone();
            let (hi, lo) = if i > j { (i, j) } else { (j, i) };
            chains.remove(hi);
            chains.remove(lo);
            chains.push(Chain { nodes: left, key });
            continue 'merge;
        }
        break;
    }

    let mut out: Vec<CanonicalSegment> = Vec::new();
    for ch in chains {
        let mut geometry: Vec<GeoPoint> = Vec::new();
        for n in &ch.nodes {
            let p = coords[n];
            if geometry.last() != Some(&p) {
                geometry.push(p);
            }
        }
        if geometry.len() < 2 {
            continue;
        }
        let length: f64 = geometry.windows(2).map(|w| haversine_m(w[0], w[1])).sum();
        if length <= 0.0 {
            continue;
        }
        out.push((canonical_geometry(&geometry), ch.key.0, ch.key.1, ch.key.2, ch.key.3));
    }
    out.sort();
    out
}

// ----------------------------------------------------------------------
// Synthetic cities

/// Random ways over an integer lattice: shared nodes produce junctions,
/// repeated walk nodes produce loops, and a small name pool forces both
/// merges and name collisions. Returns (nodes, ways).
pub fn lattice_city(seed: u64, n_ways: usize) -> (Vec<OsmNode>, Vec<OsmWay>) {
    let mut rng = rng_for(seed);
    let size: i64 = 12;
    let base = GeoPoint::new(-43.60, 172.50);
    let step = 0.004; // ~440 m

    let node_id = |r: i64, c: i64| (r * 1000 + c) as u64 + 1;
    let mut used: BTreeMap<u64, OsmNode> = BTreeMap::new();
    let mut ways: Vec<OsmWay> = Vec::new();

    let names = ["Alder Road", "Birch Street", "Cedar Avenue", "Dover Lane", "Elm Way"];
    let speeds = [None, Some("30"), Some("50"), Some("50 km/h"), Some("30 mph")];
    let lanes = [None, Some("1"), Some("2"), Some("4"), Some("2;3")];
    let classes = ["residential", "secondary", "tertiary", "primary_link"];

    for wi in 0..n_ways {
        let mut r = rng.gen_range(0..size);
        let mut c = rng.gen_range(0..size);
        let len = rng.gen_range(2..=6);
        let mut refs: Vec<u64> = Vec::with_capacity(len);
        refs.push(node_id(r, c));
        for _ in 1..len {
            match rng.gen_range(0..4) {
                0 if r > 0 => r -= 1,
                1 if r < size - 1 => r += 1,
                2 if c > 0 => c -= 1,
                _ if c < size - 1 => c += 1,
                _ => r = (r + 1).min(size - 1),
            }
            refs.push(node_id(r, c));
        }
        for &id in &refs {
            let rr = ((id - 1) / 1000) as i64;
            let cc = ((id - 1) % 1000) as i64;
            used.entry(id).or_insert_with(|| {
                node(id, base.lat + rr as f64 * step, base.lon + cc as f64 * step)
            });
        }
        let mut tags: Vec<(&str, &str)> =
            alloc::vec![("highway", classes[rng.gen_range(0..classes.len())])];
        if rng.gen_bool(0.8) {
            tags.push(("name", names[rng.gen_range(0..names.len())]));
        }
        if let Some(s) = speeds[rng.gen_range(0..speeds.len())] {
            tags.push(("maxspeed", s));
        }
        if let Some(l) = lanes[rng.gen_range(0..lanes.len())] {
            tags.push(("lanes", l));
        }
        ways.push(way(wi as u64 + 1, &refs, &tags));
    }

    (used.into_values().collect(), ways)
}

/// Disconnected random polylines with many distinct names, sized for
/// query-oracle sweeps. Returns a built network of ~`n_segments`.
pub fn scatter_city(seed: u64, n_segments: usize) -> RoadNetwork {
    let mut rng = rng_for(seed);
    let base = GeoPoint::new(-43.60, 172.50);
    let span = 0.25;
    let mut nodes: Vec<OsmNode> = Vec::new();
    let mut ways: Vec<OsmWay> = Vec::new();
    let mut next_node: u64 = 1;

    for wi in 0..n_segments {
        let n_pts = rng.gen_range(2..=4);
        let mut lat = base.lat + rng.gen::<f64>() * span;
        let mut lon = base.lon + rng.gen::<f64>() * span;
        let mut refs = Vec::with_capacity(n_pts);
        for _ in 0..n_pts {
            nodes.push(node(next_node, lat, lon));
            refs.push(next_node);
            next_node += 1;
            lat += (rng.gen::<f64>() - 0.5) * 0.004;
            lon += (rng.gen::<f64>() - 0.5) * 0.004;
        }
        let name = format!("Scatter Road {}", wi % (n_segments / 2).max(1));
        let named = rng.gen_bool(0.9);
        let mut tags: Vec<(&str, &str)> = alloc::vec![("highway", "residential")];
        if named {
            tags.push(("name", &name));
        }
        ways.push(way(wi as u64 + 1, &refs, &tags));
    }

    network_from(&nodes, &ways)
}

/// Eight straight named roads radiating from just outside a center
/// point, one per compass sector.
pub fn star_city() -> RoadNetwork {
    let center = GeoPoint::new(-43.55, 172.60);
    let m_per_deg = EARTH_RADIUS_M * DEG2RAD;
    let cos_lat = libm::cos(center.lat * DEG2RAD);
    let mut nodes = Vec::new();
    let mut ways = Vec::new();
    let names = [
        "North Star Road",
        "Northeast Star Road",
        "East Star Road",
        "Southeast Star Road",
        "South Star Road",
        "Southwest Star Road",
        "West Star Road",
        "Northwest Star Road",
    ];
    for (i, name) in names.iter().enumerate() {
        let theta = (i as f64 * 45.0) * DEG2RAD;
        // Radial arm from 300 m to 1500 m out.
        let (sin_t, cos_t) = (libm::sin(theta), libm::cos(theta));
        let a = GeoPoint::new(
            center.lat + 300.0 * cos_t / m_per_deg,
            center.lon + 300.0 * sin_t / (m_per_deg * cos_lat),
        );
        let b = GeoPoint::new(
            center.lat + 1500.0 * cos_t / m_per_deg,
            center.lon + 1500.0 * sin_t / (m_per_deg * cos_lat),
        );
        let id = i as u64 * 2;
        nodes.push(node(id + 1, a.lat, a.lon));
        nodes.push(node(id + 2, b.lat, b.lon));
        ways.push(way(i as u64 + 1, &[id + 1, id + 2], &[("highway", "residential"), ("name", name)]));
    }
    network_from(&nodes, &ways)
}

/// The center the star roads radiate from.
pub fn star_center() -> GeoPoint {
    GeoPoint::new(-43.55, 172.60)
}

/// Uniform random query point in (or slightly around) the AOI.
pub fn random_point(rng: &mut impl Rng, network: &RoadNetwork, margin: f64) -> GeoPoint {
    let bbox = network.aoi_bbox();
    let lat_span = bbox.max_lat - bbox.min_lat;
    let lon_span = bbox.max_lon - bbox.min_lon;
    GeoPoint::new(
        bbox.min_lat - margin * lat_span + rng.gen::<f64>() * lat_span * (1.0 + 2.0 * margin),
        bbox.min_lon - margin * lon_span + rng.gen::<f64>() * lon_span * (1.0 + 2.0 * margin),
    )
}
