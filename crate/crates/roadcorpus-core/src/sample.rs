//! Deterministic randomness: seed derivation, density-aware point
//! sampling and exact largest-remainder apportionment.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geo::GeoPoint;
use crate::graph::RoadNetwork;
use crate::index::CellGrid;

/// Mixes a master seed with a domain tag, so independent consumers of
/// one run seed get disjoint streams. FNV-1a over the tag, finalized
/// with a SplitMix64 round.
pub fn derive_seed(master: u64, tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    splitmix64(master ^ h)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// RNG for a seed, on the default stream.
pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// RNG for a (seed, stream) pair; streams never overlap.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Exact largest-remainder apportionment of `total` over integer
/// weights: every count is the floor or ceiling of its exact quota, so
/// `|n_i - total * w_i / W| < 1`. Remainder ties break on the smaller
/// index. Zero weights receive zero.
pub fn largest_remainder_allocation(weights: &[u64], total: u64) -> Vec<u64> {
    let w_sum: u128 = weights.iter().map(|&w| u128::from(w)).sum();
    if w_sum == 0 {
        return alloc::vec![0; weights.len()];
    }
    let mut counts: Vec<u64> = Vec::with_capacity(weights.len());
    let mut remainders: Vec<(u128, usize)> = Vec::with_capacity(weights.len());
    let mut allocated: u64 = 0;
    for (i, &w) in weights.iter().enumerate() {
        let product = u128::from(total) * u128::from(w);
        let floor = (product / w_sum) as u64;
        counts.push(floor);
        allocated += floor;
        remainders.push((product % w_sum, i));
    }
    let mut short = (total - allocated) as usize;
    if short > 0 {
        // Largest remainder first; ties on the smaller cell index.
        remainders.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for &(rem, i) in &remainders {
            if short == 0 {
                break;
            }
            debug_assert!(rem > 0, "only fractional quotas are topped up");
            counts[i] += 1;
            short -= 1;
        }
    }
    counts
}

/// Draws `total_n` points over the AOI with per-cell counts
/// proportional to local segment density.
///
/// The AOI is tiled with `cell_km`-sized cells; a cell's weight is the
/// number of distinct segments whose geometry touches it (a segment may
/// weigh several cells). Counts come from largest-remainder
/// apportionment, and each cell draws its points from an RNG stream
/// keyed on (seed, row, col), so a cell's points do not depend on the
/// rest of the grid.
pub fn density_sample(
    network: &RoadNetwork,
    total_n: usize,
    cell_km: f64,
    seed: u64,
) -> Vec<GeoPoint> {
    debug_assert!(total_n >= 1 && cell_km > 0.0);
    let grid = CellGrid::build(network.segments(), network.aoi_bbox(), cell_km * 1000.0);
    let cells: Vec<((i64, i64), usize)> = grid.occupied_cells().collect();
    let weights: Vec<u64> = cells.iter().map(|&(_, n)| n as u64).collect();
    let counts = largest_remainder_allocation(&weights, total_n as u64);

    let mut points = Vec::with_capacity(total_n);
    for (((row, col), _), count) in cells.into_iter().zip(counts) {
        if count == 0 {
            continue;
        }
        let (lat0, lat1, lon0, lon1) = grid.cell_rect(row, col);
        let mut rng = rng_stream(seed, ((row as u64) << 32) | (col as u64 & 0xffff_ffff));
        for _ in 0..count {
            let u: f64 = rng.gen();
            let v: f64 = rng.gen();
            points.push(GeoPoint::new(lat0 + u * (lat1 - lat0), lon0 + v * (lon1 - lon0)));
        }
    }
    points
}
