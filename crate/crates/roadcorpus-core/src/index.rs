//! Uniform cell grid over the AOI, the spatial index behind every
//! nearest-road query and the density weights behind sampling.
//!
//! A tree would be faster to build, but a fixed grid iterates in a
//! deterministic order and admits a simple exactness argument: walking
//! cells in growing Chebyshev rings around the query visits every
//! segment before the ring lower bound can exceed the segment's true
//! distance, so queries terminate only once the uncovered remainder of
//! the grid is provably farther than the current answer.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::geo::{BoundingBox, GeoPoint};
use crate::graph::RoadSegment;
use crate::EARTH_RADIUS_M;

const DEG2RAD: f64 = core::f64::consts::PI / 180.0;
/// Safety factor on ring lower bounds, absorbing the tiny gap between
/// along-parallel arcs and great-circle separations at city scale.
const RING_BOUND_FACTOR: f64 = 0.99;

#[derive(Clone, Debug)]
pub struct CellGrid {
    bbox: BoundingBox,
    rows: i64,
    cols: i64,
    cell_lat_deg: f64,
    cell_lon_deg: f64,
    /// Conservative smallest cell extent in meters across the grid.
    min_cell_m: f64,
    cells: BTreeMap<(i64, i64), Vec<u32>>,
}

impl CellGrid {
    /// Builds a grid of roughly `cell_m`-sized cells over `bbox` and
    /// registers each segment in every cell its edges' bounding boxes
    /// overlap (a superset of the cells the geometry touches).
    pub fn build(segments: &[RoadSegment], bbox: BoundingBox, cell_m: f64) -> CellGrid {
        let m_per_deg_lat = EARTH_RADIUS_M * DEG2RAD;
        let mid_lat = (bbox.min_lat + bbox.max_lat) / 2.0;
        let cos_mid = libm::cos(mid_lat * DEG2RAD).max(0.02);
        let cell_lat_deg = cell_m / m_per_deg_lat;
        let cell_lon_deg = cell_m / (m_per_deg_lat * cos_mid);

        let lat_span = (bbox.max_lat - bbox.min_lat).max(0.0);
        let lon_span = (bbox.max_lon - bbox.min_lon).max(0.0);
        let rows = (libm::ceil(lat_span / cell_lat_deg) as i64).max(1);
        let cols = (libm::ceil(lon_span / cell_lon_deg) as i64).max(1);

        // Narrowest east-west extent occurs at the extreme latitude.
        let cos_extreme = libm::cos(bbox.max_abs_lat() * DEG2RAD).max(0.02);
        let min_cell_m = cell_m.min(cell_lon_deg * m_per_deg_lat * cos_extreme);

        let mut grid = CellGrid {
            bbox,
            rows,
            cols,
            cell_lat_deg,
            cell_lon_deg,
            min_cell_m,
            cells: BTreeMap::new(),
        };

        let mut staged: BTreeMap<(i64, i64), BTreeSet<u32>> = BTreeMap::new();
        for seg in segments {
            for edge in seg.geometry.windows(2) {
                let (r0, c0) = grid.clamped_cell(edge[0]);
                let (r1, c1) = grid.clamped_cell(edge[1]);
                for r in r0.min(r1)..=r0.max(r1) {
                    for c in c0.min(c1)..=c0.max(c1) {
                        staged.entry((r, c)).or_default().insert(seg.seg_id);
                    }
                }
            }
        }
        grid.cells = staged
            .into_iter()
            .map(|(k, v)| (k, v.into_iter().collect()))
            .collect();
        grid
    }

    pub fn bbox(&self) -> BoundingBox {
        self.bbox
    }

    pub fn rows(&self) -> i64 {
        self.rows
    }

    pub fn cols(&self) -> i64 {
        self.cols
    }

    /// Cell containing a point inside the bbox, without clamping: the
    /// virtual coordinates of outside points fall outside `[0, rows) x
    /// [0, cols)`, which keeps ring lower bounds valid for any query.
    pub fn virtual_cell(&self, p: GeoPoint) -> (i64, i64) {
        let r = libm::floor((p.lat - self.bbox.min_lat) / self.cell_lat_deg) as i64;
        let c = libm::floor((p.lon - self.bbox.min_lon) / self.cell_lon_deg) as i64;
        (r, c)
    }

    fn clamped_cell(&self, p: GeoPoint) -> (i64, i64) {
        let (r, c) = self.virtual_cell(p);
        (r.clamp(0, self.rows - 1), c.clamp(0, self.cols - 1))
    }

    /// Geographic rectangle of a cell, clipped to the bbox.
    pub fn cell_rect(&self, row: i64, col: i64) -> (f64, f64, f64, f64) {
        let lat0 = self.bbox.min_lat + row as f64 * self.cell_lat_deg;
        let lon0 = self.bbox.min_lon + col as f64 * self.cell_lon_deg;
        let lat1 = (lat0 + self.cell_lat_deg).min(self.bbox.max_lat);
        let lon1 = (lon0 + self.cell_lon_deg).min(self.bbox.max_lon);
        (lat0, lat1.max(lat0), lon0, lon1.max(lon0))
    }

    pub fn segments_in_cell(&self, row: i64, col: i64) -> &[u32] {
        self.cells.get(&(row, col)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Distinct-segment count per non-empty cell, in row-major order.
    pub fn occupied_cells(&self) -> impl Iterator<Item = ((i64, i64), usize)> + '_ {
        self.cells.iter().map(|(k, v)| (*k, v.len()))
    }

    /// Any point in a cell of Chebyshev ring `k` around the query's
    /// virtual cell is at least this many meters from the query.
    pub fn ring_lower_bound_m(&self, k: i64) -> f64 {
        if k <= 1 {
            0.0
        } else {
            (k - 1) as f64 * self.min_cell_m * RING_BOUND_FACTOR
        }
    }

    /// Largest ring index around `center` that still intersects the grid.
    pub fn max_ring(&self, center: (i64, i64)) -> i64 {
        let dr = center.0.abs().max((self.rows - 1 - center.0).abs());
        let dc = center.1.abs().max((self.cols - 1 - center.1).abs());
        dr.max(dc)
    }

    /// Calls `f` with every occupied in-grid cell at Chebyshev distance
    /// exactly `k` from `center`, in deterministic order.
    pub fn for_ring(&self, center: (i64, i64), k: i64, mut f: impl FnMut((i64, i64), &[u32])) {
        let (cr, cc) = center;
        let visit = |r: i64, c: i64, f: &mut dyn FnMut((i64, i64), &[u32])| {
            if r >= 0 && r < self.rows && c >= 0 && c < self.cols {
                if let Some(v) = self.cells.get(&(r, c)) {
                    f((r, c), v);
                }
            }
        };
        if k == 0 {
            visit(cr, cc, &mut f);
            return;
        }
        for c in (cc - k)..=(cc + k) {
            visit(cr - k, c, &mut f);
            visit(cr + k, c, &mut f);
        }
        for r in (cr - k + 1)..=(cr + k - 1) {
            visit(r, cc - k, &mut f);
            visit(r, cc + k, &mut f);
        }
    }
}
