//! Indexed spatial queries checked for exact agreement with
//! exhaustive scans, plus the geodesy property suite.

use proptest::prelude::*;
use rand::Rng;

use roadcorpus_core::geo::{compass_of, haversine_m, initial_bearing_deg, GeoPoint};
use roadcorpus_core::sample::{density_sample, largest_remainder_allocation, rng_for};
use roadcorpus_core::spatial::{directional_nearest, directional_nearest_k, nearest_roads};
use roadcorpus_core::testkit::{
    brute_force_directional, brute_force_nearest_roads, lattice_city, network_from,
    oracle_bearing_deg, oracle_distance_m, random_point, scatter_city, star_center, star_city,
};

#[test]
fn nearest_roads_equals_brute_force() {
    for (seed, n_segments) in [(1u64, 60), (2, 500), (3, 2000)] {
        let network = scatter_city(seed, n_segments);
        let mut rng = rng_for(seed + 100);
        for qi in 0..300 {
            let p = random_point(&mut rng, &network, 0.1);
            let fast = nearest_roads(p, &network, 10).unwrap();
            let slow = brute_force_nearest_roads(p, &network, 10);
            assert_eq!(fast, slow, "seed {seed} query {qi} at {p}");
        }
    }
}

#[test]
fn nearest_roads_on_junction_rich_network() {
    let (nodes, ways) = lattice_city(77, 200);
    let network = network_from(&nodes, &ways);
    let mut rng = rng_for(990);
    for _ in 0..200 {
        let p = random_point(&mut rng, &network, 0.2);
        assert_eq!(
            nearest_roads(p, &network, 5).unwrap(),
            brute_force_nearest_roads(p, &network, 5)
        );
    }
}

#[test]
fn directional_equals_brute_force() {
    for (seed, n_segments, r) in [(4u64, 200, 4000.0), (5, 1500, 2000.0), (6, 800, 8000.0)] {
        let network = scatter_city(seed, n_segments);
        let mut rng = rng_for(seed + 500);
        for qi in 0..150 {
            let p = random_point(&mut rng, &network, 0.05);
            let fast = directional_nearest_k(p, &network, r, 10);
            let slow = brute_force_directional(p, &network, r, 10);
            assert_eq!(fast.len(), slow.len(), "seed {seed} query {qi}");
            for (dir, want) in &slow {
                let got = &fast[dir];
                assert_eq!(got.len(), want.len(), "seed {seed} query {qi} dir {dir}");
                for (g, w) in got.iter().zip(want) {
                    assert_eq!(g.0, w.0, "seed {seed} query {qi} dir {dir}");
                    assert!((g.1 - w.1).abs() <= 1e-6 * w.1.max(1.0));
                }
            }
        }
    }
}

#[test]
fn star_network_fills_all_eight_sectors() {
    let network = star_city();
    let d = directional_nearest(star_center(), &network, 4000.0);
    assert_eq!(d.entries.len(), 8);
    for (dir, (name, dist)) in &d.entries {
        assert!(
            name.to_lowercase().starts_with(dir.word()),
            "{dir} resolved to {name}"
        );
        assert!((dist - 300.0).abs() < 5.0, "{dir}: {dist}");
    }
}

#[test]
fn directional_distances_dominate_rank1() {
    let network = scatter_city(9, 400);
    let mut rng = rng_for(42);
    for _ in 0..100 {
        let p = random_point(&mut rng, &network, 0.05);
        let rank1 = nearest_roads(p, &network, 1).unwrap()[0].1;
        for (_, (_, d)) in directional_nearest(p, &network, 4000.0).entries {
            assert!(d >= rank1 - 1e-9);
        }
    }
}

#[test]
fn geodesy_matches_vector_oracle() {
    let mut rng = rng_for(7);
    for _ in 0..20_000 {
        let p1 = GeoPoint::new(rng.gen_range(-84.0..84.0), rng.gen_range(-179.0..179.0));
        let p2 = GeoPoint::new(rng.gen_range(-84.0..84.0), rng.gen_range(-179.0..179.0));
        if p1 == p2 {
            continue;
        }
        let d = haversine_m(p1, p2);
        let d_oracle = oracle_distance_m(p1, p2);
        assert!(
            (d - d_oracle).abs() <= 1e-9 * d_oracle.max(1e-9),
            "{p1} {p2}: {d} vs {d_oracle}"
        );
        let b = initial_bearing_deg(p1, p2).unwrap();
        let b_oracle = oracle_bearing_deg(p1, p2);
        let diff = (b - b_oracle).abs();
        let diff = diff.min(360.0 - diff);
        assert!(diff <= 1e-6, "{p1} {p2}: {b} vs {b_oracle}");
    }
}

#[test]
fn density_allocation_stays_within_one_of_quota() {
    let mut rng = rng_for(11);
    for _ in 0..200 {
        let n_cells = rng.gen_range(1..40);
        let weights: Vec<u64> = (0..n_cells).map(|_| rng.gen_range(0..50)).collect();
        if weights.iter().sum::<u64>() == 0 {
            continue;
        }
        let total = rng.gen_range(1..500u64);
        let counts = largest_remainder_allocation(&weights, total);
        assert_eq!(counts.iter().sum::<u64>(), total);
        let w_sum: f64 = weights.iter().map(|&w| w as f64).sum();
        for (n, w) in counts.iter().zip(&weights) {
            let quota = total as f64 * *w as f64 / w_sum;
            assert!((*n as f64 - quota).abs() < 1.0);
        }
    }
}

#[test]
fn density_sample_is_deterministic_and_in_bounds() {
    let network = scatter_city(13, 300);
    let a = density_sample(&network, 500, 1.0, 99);
    let b = density_sample(&network, 500, 1.0, 99);
    assert_eq!(a, b);
    assert_eq!(a.len(), 500);
    for p in &a {
        assert!(network.aoi_bbox().contains(*p));
    }
}

proptest! {
    #[test]
    fn haversine_symmetry(
        lat1 in -84.0..84.0f64, lon1 in -179.0..179.0f64,
        lat2 in -84.0..84.0f64, lon2 in -179.0..179.0f64,
    ) {
        let p1 = GeoPoint::new(lat1, lon1);
        let p2 = GeoPoint::new(lat2, lon2);
        let d12 = haversine_m(p1, p2);
        let d21 = haversine_m(p2, p1);
        prop_assert!((d12 - d21).abs() <= 1e-9 * d12.max(1.0));
    }

    #[test]
    fn haversine_triangle_inequality(
        lat1 in -84.0..84.0f64, lon1 in -179.0..179.0f64,
        lat2 in -84.0..84.0f64, lon2 in -179.0..179.0f64,
        lat3 in -84.0..84.0f64, lon3 in -179.0..179.0f64,
    ) {
        let a = GeoPoint::new(lat1, lon1);
        let b = GeoPoint::new(lat2, lon2);
        let c = GeoPoint::new(lat3, lon3);
        let ab = haversine_m(a, b);
        let bc = haversine_m(b, c);
        let ac = haversine_m(a, c);
        prop_assert!(ac <= ab + bc + 1e-9 * ac.max(1.0));
    }

    #[test]
    fn reverse_bearing_is_opposite_sector(
        lat1 in -60.0..60.0f64, lon1 in -170.0..170.0f64,
        dist_km in 1.5..50.0f64, bearing in 0.0..360.0f64,
    ) {
        // Walk from p1 along an approximate course to get a pair more
        // than 1 km apart, then skip pairs near sector boundaries.
        let p1 = GeoPoint::new(lat1, lon1);
        let dlat = dist_km / 111.0 * (bearing.to_radians().cos());
        let dlon = dist_km / 111.0 * (bearing.to_radians().sin())
            / lat1.to_radians().cos().max(0.2);
        let p2 = GeoPoint::new((lat1 + dlat).clamp(-84.0, 84.0), lon1 + dlon);
        prop_assume!(haversine_m(p1, p2) > 1000.0);

        let fwd = initial_bearing_deg(p1, p2).unwrap();
        let rev = initial_bearing_deg(p2, p1).unwrap();
        let margin = |b: f64| {
            let within = (b + 22.5).rem_euclid(45.0);
            within.min(45.0 - within)
        };
        prop_assume!(margin(fwd) > 1.0 && margin(rev) > 1.0);
        prop_assert_eq!(compass_of(fwd).opposite(), compass_of(rev));
    }
}
