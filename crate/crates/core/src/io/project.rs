//! Geographic to planar coordinates via a locally-scaled Mercator map.
//!
//! Plain Mercator stretches distances by 1/cos(latitude); scaling both axes
//! by cos(ref_lat) makes distances metric near the reference latitude,
//! which is what every planning formula here needs.

use crate::io::records::{ParseError, TurbineRecord, MAX_ABS_LATITUDE_DEG};
use crate::placement::Turbine;
use crate::wind::Point2D;
use std::f64::consts::PI;

/// WGS84 equatorial radius in meters.
pub const EARTH_RADIUS_M: f64 = 6378137.0;

/// Projects turbine records onto a planar frame. `ref_lat_deg` sets the
/// local scale; pick the layout's centroid latitude unless told otherwise.
pub fn mercator_project(
    records: &[TurbineRecord],
    ref_lat_deg: f64,
) -> Result<Vec<Turbine>, ParseError> {
    if ref_lat_deg.abs() >= MAX_ABS_LATITUDE_DEG {
        return Err(ParseError::LatitudeOutOfRange { code: "<ref_lat>".into(), lat: ref_lat_deg });
    }
    let scale = EARTH_RADIUS_M * ref_lat_deg.to_radians().cos();
    records
        .iter()
        .map(|r| {
            if r.lat_deg.abs() >= MAX_ABS_LATITUDE_DEG {
                return Err(ParseError::LatitudeOutOfRange { code: r.code.clone(), lat: r.lat_deg });
            }
            let lambda = r.lon_deg.to_radians();
            let phi = r.lat_deg.to_radians();
            Ok(Turbine {
                code: r.code.clone(),
                position: Point2D::new(scale * lambda, scale * (PI / 4.0 + phi / 2.0).tan().ln()),
            })
        })
        .collect()
}

/// Mean latitude of a layout, the default projection reference.
pub fn centroid_latitude(records: &[TurbineRecord]) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    records.iter().map(|r| r.lat_deg).sum::<f64>() / records.len() as f64
}

/// Great-circle distance on the sphere, used as the projection's oracle.
pub fn haversine_m(lon1_deg: f64, lat1_deg: f64, lon2_deg: f64, lat2_deg: f64) -> f64 {
    let (lat1, lat2) = (lat1_deg.to_radians(), lat2_deg.to_radians());
    let dlat = lat2 - lat1;
    let dlon = (lon2_deg - lon1_deg).to_radians();
    let a = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * a.sqrt().asin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn record(code: &str, lon: f64, lat: f64) -> TurbineRecord {
        TurbineRecord { code: code.into(), lon_deg: lon, lat_deg: lat }
    }

    #[test]
    fn origin_maps_to_origin() {
        let projected = mercator_project(&[record("O", 0.0, 0.0)], 0.0).unwrap();
        assert_relative_eq!(projected[0].position.x, 0.0, epsilon = 1e-9);
        assert_relative_eq!(projected[0].position.y, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn longitude_spacing_matches_closed_form() {
        let projected =
            mercator_project(&[record("A", -3.50, 54.0), record("B", -3.49, 54.0)], 54.0).unwrap();
        let dx = projected[1].position.x - projected[0].position.x;
        let expected = EARTH_RADIUS_M * (0.01_f64).to_radians() * 54.0_f64.to_radians().cos();
        assert_relative_eq!(dx, expected, epsilon = 1e-6);
        assert_relative_eq!(dx, 654.3, epsilon = 0.1);
        // Cross-check against the spherical oracle.
        let oracle = haversine_m(-3.50, 54.0, -3.49, 54.0);
        assert!((dx - oracle).abs() / oracle < 0.005);
    }

    #[test]
    fn polar_latitude_rejected() {
        assert!(matches!(
            mercator_project(&[record("X", 0.0, 89.9)], 54.0),
            Err(ParseError::LatitudeOutOfRange { .. })
        ));
        assert!(matches!(
            mercator_project(&[record("X", 0.0, 54.0)], 89.9),
            Err(ParseError::LatitudeOutOfRange { .. })
        ));
    }

    #[test]
    fn centroid_is_the_mean() {
        let recs = [record("A", 0.0, 54.0), record("B", 0.0, 54.2)];
        assert_relative_eq!(centroid_latitude(&recs), 54.1, epsilon = 1e-12);
    }

    proptest! {
        // Within a half-degree window the projection keeps the ordering of
        // pairwise distances (checked against the spherical oracle).
        #[test]
        fn distance_ordering_preserved(
            lons in prop::collection::vec(-3.75..-3.25_f64, 4),
            lats in prop::collection::vec(53.8..54.3_f64, 4),
        ) {
            let records: Vec<TurbineRecord> = lons
                .iter()
                .zip(lats.iter())
                .enumerate()
                .map(|(i, (&lon, &lat))| record(&format!("T{i}"), lon, lat))
                .collect();
            let ref_lat = centroid_latitude(&records);
            let projected = mercator_project(&records, ref_lat).unwrap();
            let mut planar = Vec::new();
            let mut sphere = Vec::new();
            for i in 0..4 {
                for j in (i + 1)..4 {
                    planar.push(projected[i].position.distance(projected[j].position));
                    sphere.push(haversine_m(
                        records[i].lon_deg, records[i].lat_deg,
                        records[j].lon_deg, records[j].lat_deg,
                    ));
                }
            }
            for a in 0..planar.len() {
                for b in 0..planar.len() {
                    // Skip near-ties: a 0.2% scale error can legitimately flip them.
                    if sphere[a] * 1.005 < sphere[b] {
                        prop_assert!(planar[a] < planar[b]);
                    }
                }
            }
        }
    }
}
