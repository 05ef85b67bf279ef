//! OSM tag normalization: highway classes, speed limits, lane counts.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::text::normalize_name;

const MPH_TO_KMH: f64 = 1.609344;

/// Road class derived from the `highway` tag. Link variants fold into
/// their base class; anything outside the known set is kept verbatim.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HighwayClass {
    Motorway,
    Trunk,
    Primary,
    Secondary,
    Tertiary,
    Residential,
    Service,
    Unclassified,
    LivingStreet,
    Other(String),
}

impl HighwayClass {
    pub fn from_tag(raw: &str) -> HighwayClass {
        let base = raw.strip_suffix("_link").unwrap_or(raw);
        match base {
            "motorway" => HighwayClass::Motorway,
            "trunk" => HighwayClass::Trunk,
            "primary" => HighwayClass::Primary,
            "secondary" => HighwayClass::Secondary,
            "tertiary" => HighwayClass::Tertiary,
            "residential" => HighwayClass::Residential,
            "service" => HighwayClass::Service,
            "unclassified" => HighwayClass::Unclassified,
            "living_street" => HighwayClass::LivingStreet,
            _ => HighwayClass::Other(raw.to_owned()),
        }
    }

    /// Hierarchy rank, 0 = highest (motorway). Used as the tie-break
    /// when aggregating the modal road type of a named road.
    pub fn rank(&self) -> u8 {
        match self {
            HighwayClass::Motorway => 0,
            HighwayClass::Trunk => 1,
            HighwayClass::Primary => 2,
            HighwayClass::Secondary => 3,
            HighwayClass::Tertiary => 4,
            HighwayClass::Residential => 5,
            HighwayClass::Service => 6,
            HighwayClass::Unclassified => 7,
            HighwayClass::LivingStreet => 8,
            HighwayClass::Other(_) => 9,
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            HighwayClass::Motorway => "motorway",
            HighwayClass::Trunk => "trunk",
            HighwayClass::Primary => "primary",
            HighwayClass::Secondary => "secondary",
            HighwayClass::Tertiary => "tertiary",
            HighwayClass::Residential => "residential",
            HighwayClass::Service => "service",
            HighwayClass::Unclassified => "unclassified",
            HighwayClass::LivingStreet => "living_street",
            HighwayClass::Other(raw) => raw,
        }
    }
}

impl fmt::Display for HighwayClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The subset of way tags the pipeline consumes, in canonical form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedTags {
    pub name: Option<String>,
    pub highway_class: HighwayClass,
    pub maxspeed_kmh: Option<f64>,
    pub lanes: Option<u32>,
}

/// Normalizes a raw tag map. Total: unparseable values map to absent.
///
/// `maxspeed` accepts bare numbers (km/h), `"N km/h"` and `"N mph"`
/// (converted and rounded to the nearest integer km/h); symbolic values
/// (`walk`, `none`, zone tags) and non-positive numbers map to absent.
/// `lanes` takes the first parseable integer of `;`-separated lists.
pub fn normalize_tags(tags: &BTreeMap<String, String>) -> NormalizedTags {
    let name = tags.get("name").map(|n| normalize_name(n)).filter(|n| !n.is_empty());
    let highway_class = tags
        .get("highway")
        .map(|h| HighwayClass::from_tag(h.trim()))
        .unwrap_or_else(|| HighwayClass::Other(String::new()));
    let maxspeed_kmh = tags.get("maxspeed").and_then(|v| parse_maxspeed_kmh(v));
    let lanes = tags.get("lanes").and_then(|v| parse_lanes(v));
    NormalizedTags { name, highway_class, maxspeed_kmh, lanes }
}

fn parse_maxspeed_kmh(raw: &str) -> Option<f64> {
    let v = raw.trim();
    if v.is_empty() {
        return None;
    }
    let lower = v.to_lowercase();
    let (num_part, factor) = if let Some(stripped) = lower.strip_suffix("mph") {
        (stripped.trim_end().to_owned(), MPH_TO_KMH)
    } else if let Some(stripped) = lower.strip_suffix("km/h") {
        (stripped.trim_end().to_owned(), 1.0)
    } else if let Some(stripped) = lower.strip_suffix("kmh") {
        (stripped.trim_end().to_owned(), 1.0)
    } else {
        (lower, 1.0)
    };
    let n: f64 = num_part.trim().parse().ok()?;
    if !n.is_finite() || n <= 0.0 {
        return None;
    }
    let kmh = if factor == 1.0 { n } else { libm::round(n * factor) };
    if kmh > 0.0 { Some(kmh) } else { None }
}

fn parse_lanes(raw: &str) -> Option<u32> {
    raw.split(';')
        .filter_map(|part| part.trim().parse::<u32>().ok())
        .find(|&n| n >= 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn tag_map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn bare_maxspeed_is_kmh() {
        let t = normalize_tags(&tag_map(&[("highway", "residential"), ("maxspeed", "50")]));
        assert_eq!(t.maxspeed_kmh, Some(50.0));
    }

    #[test]
    fn mph_converts_and_rounds() {
        // 30 * 1.609344 = 48.28032 -> 48
        assert_eq!(parse_maxspeed_kmh("30 mph"), Some(48.0));
        // 70 * 1.609344 = 112.65408 -> 113
        assert_eq!(parse_maxspeed_kmh("70mph"), Some(113.0));
        assert_eq!(parse_maxspeed_kmh("50 km/h"), Some(50.0));
    }

    #[test]
    fn symbolic_and_invalid_speeds_absent() {
        for raw in ["walk", "none", "NZ:urban", "", "0", "-10", "abc"] {
            assert_eq!(parse_maxspeed_kmh(raw), None, "{raw:?}");
        }
    }

    #[test]
    fn lanes_take_first_parseable_integer() {
        assert_eq!(parse_lanes("2"), Some(2));
        assert_eq!(parse_lanes("2;3"), Some(2));
        assert_eq!(parse_lanes("abc;4"), Some(4));
        assert_eq!(parse_lanes("abc"), None);
        assert_eq!(parse_lanes("0"), None);
    }

    #[test]
    fn link_classes_fold_and_names_normalize() {
        let t = normalize_tags(&tag_map(&[
            ("lanes", "abc"),
            ("highway", "primary_link"),
            ("name", " Ilam  Road "),
        ]));
        assert_eq!(t.lanes, None);
        assert_eq!(t.highway_class, HighwayClass::Primary);
        assert_eq!(t.name.as_deref(), Some("Ilam Road"));
    }

    #[test]
    fn unknown_highway_kept_verbatim() {
        assert_eq!(HighwayClass::from_tag("footway"), HighwayClass::Other("footway".to_string()));
        assert_eq!(HighwayClass::from_tag("busway"), HighwayClass::Other("busway".to_string()));
        assert_eq!(HighwayClass::from_tag("trunk_link"), HighwayClass::Trunk);
    }

    #[test]
    fn normalize_is_fixed_point() {
        let t = normalize_tags(&tag_map(&[
            ("highway", "secondary"),
            ("name", "Papanui  Road"),
            ("maxspeed", "30 mph"),
            ("lanes", "2;3"),
        ]));
        // Render the normalized tags back into raw form and re-normalize.
        let rendered = tag_map(&[
            ("highway", t.highway_class.as_str()),
            ("name", t.name.as_ref().unwrap()),
            ("maxspeed", &t.maxspeed_kmh.unwrap().to_string()),
            ("lanes", &t.lanes.unwrap().to_string()),
        ]);
        assert_eq!(normalize_tags(&rendered), t);
    }

    #[test]
    fn rank_ordering_is_motorway_first() {
        let ranks: vec::Vec<u8> = [
            HighwayClass::Motorway,
            HighwayClass::Trunk,
            HighwayClass::Primary,
            HighwayClass::Secondary,
            HighwayClass::Tertiary,
        ]
        .iter()
        .map(|c| c.rank())
        .collect();
        assert!(ranks.windows(2).all(|w| w[0] < w[1]));
    }
}
