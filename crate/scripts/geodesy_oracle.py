#!/usr/bin/env python3
"""High-precision reference values for the geodesy unit tests.

Computes great-circle distances and initial bearings on a sphere of
radius 6,371,000 m using 50-digit arithmetic (mpmath), via the 3-D
vector route rather than the haversine/atan2 identities the library
uses. Run it to regenerate the frozen constants pasted into
crates/roadcorpus-core/src/geo.rs tests.

    python3 scripts/geodesy_oracle.py
"""

from mpmath import mp, mpf, sin, cos, sqrt, atan2, pi, fabs

mp.dps = 50
R = mpf(6_371_000)


def unit_vec(lat_deg, lon_deg):
    lat = mpf(lat_deg) * pi / 180
    lon = mpf(lon_deg) * pi / 180
    return (cos(lat) * cos(lon), cos(lat) * sin(lon), sin(lat))


def cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def norm(a):
    return sqrt(dot(a, a))


def distance_m(p1, p2):
    a = unit_vec(*p1)
    b = unit_vec(*p2)
    # angle via atan2(|a x b|, a . b): stable at all separations
    return R * atan2(norm(cross(a, b)), dot(a, b))


def bearing_deg(p1, p2):
    a = unit_vec(*p1)
    b = unit_vec(*p2)
    k = (mpf(0), mpf(0), mpf(1))
    # local north/east frame at a
    east = cross(k, a)
    east = tuple(c / norm(east) for c in east)
    north = cross(a, east)
    # direction of the great circle a->b in the tangent plane at a
    d = tuple(b[i] - dot(a, b) * a[i] for i in range(3))
    theta = atan2(dot(d, east), dot(d, north)) * 180 / pi
    return theta if theta >= 0 else theta + 360


CASES = [
    ((0.0, 0.0), (0.0, 1.0)),
    ((-43.5103, 172.6318), (-43.5321, 172.6362)),
    ((10.0, 10.0), (11.0, 11.0)),
    ((0.0, 0.0), (1.0, 0.0)),
    ((51.5074, -0.1278), (48.8566, 2.3522)),
    ((-33.8688, 151.2093), (-36.8485, 174.7633)),
    ((80.0, 10.0), (80.0, 170.0)),
]

if __name__ == "__main__":
    for p1, p2 in CASES:
        d = distance_m(p1, p2)
        print(f"{p1} -> {p2}")
        print(f"  distance_m = {mp.nstr(d, 17)}")
        if p1 != p2:
            print(f"  bearing_deg = {mp.nstr(bearing_deg(p1, p2), 17)}")
