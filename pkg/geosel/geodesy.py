from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from geosel.constants import EARTH_RADIUS_KM
from geosel.errors import InvalidCoordinateError

DistanceKm = float


def normalize_lon(lon_raw: float) -> float:
    if not math.isfinite(lon_raw):
        raise InvalidCoordinateError(f'non-finite longitude {lon_raw}')
    if -180.0 <= lon_raw < 180.0:
        return lon_raw
    lon = math.fmod(lon_raw, 360.0)
    if lon < -180.0:
        lon += 360.0
    elif lon >= 180.0:
        lon -= 360.0
    return lon


@dataclass(frozen=True)
class GeoPoint:
    lat: float
    lon: float

    def __post_init__(self):
        lat = float(self.lat)
        if not math.isfinite(lat) or not -90.0 <= lat <= 90.0:
            raise InvalidCoordinateError(f'latitude {self.lat} outside [-90, 90]')
        object.__setattr__(self, 'lat', lat)
        object.__setattr__(self, 'lon', normalize_lon(float(self.lon)))

    @property
    def is_pole(self) -> bool:
        return abs(self.lat) == 90.0


def _cos_lat(lat_rad: float, lat_deg: float) -> float:
    # every longitude names the same point at a pole
    if abs(lat_deg) == 90.0:
        return 0.0
    return math.cos(lat_rad)


def gcd(a: GeoPoint, b: GeoPoint) -> DistanceKm:
    lat1 = math.radians(a.lat)
    lat2 = math.radians(b.lat)
    half_dlat = math.sin((lat2 - lat1) / 2)
    half_dlon = math.sin(math.radians(b.lon - a.lon) / 2)
    h = half_dlat * half_dlat + \
        _cos_lat(lat1, a.lat) * _cos_lat(lat2, b.lat) * half_dlon * half_dlon
    h = min(1.0, max(0.0, h))
    return 2.0 * EARTH_RADIUS_KM * math.asin(math.sqrt(h))


def destination(origin: GeoPoint, bearing_deg: float, distance_km: DistanceKm) -> GeoPoint:
    if distance_km < 0 or not math.isfinite(distance_km):
        raise InvalidCoordinateError(f'invalid travel distance {distance_km}')
    delta = distance_km / EARTH_RADIUS_KM
    theta = math.radians(bearing_deg)
    lat1 = math.radians(origin.lat)
    lon1 = math.radians(origin.lon)
    sin_lat2 = math.sin(lat1) * math.cos(delta) + \
        math.cos(lat1) * math.sin(delta) * math.cos(theta)
    lat2 = math.asin(min(1.0, max(-1.0, sin_lat2)))
    lon2 = lon1 + math.atan2(
        math.sin(theta) * math.sin(delta) * math.cos(lat1),
        math.cos(delta) - math.sin(lat1) * sin_lat2,
    )
    lat_deg = min(90.0, max(-90.0, math.degrees(lat2)))
    return GeoPoint(lat_deg, math.degrees(lon2))


def to_unit_vectors(lats, lons) -> np.ndarray:
    lat = np.radians(np.asarray(lats, dtype=float))
    lon = np.radians(np.asarray(lons, dtype=float))
    cos_lat = np.cos(lat)
    return np.column_stack((cos_lat * np.cos(lon), cos_lat * np.sin(lon), np.sin(lat)))


def chord_for_distance(distance_km: DistanceKm) -> float:
    angle = min(math.pi, distance_km / EARTH_RADIUS_KM)
    return 2.0 * math.sin(angle / 2.0)
