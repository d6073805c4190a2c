//! Distance from the origin to the numerical range of a unitary.
//!
//! For normal matrices the numerical range is the convex hull of the
//! spectrum, so the distance reduces to planar geometry on the eigenvalues.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const UNITARY_TOL: f64 = 1e-9;
/// Angular slack below which a spectral gap counts as a half-turn.
const GAP_SLACK: f64 = 1e-12;

/// `ν(U)`: distance from zero to the numerical range of a unitary `u`.
pub fn nu_distance(u: &ComplexMatrix) -> Result<f64> {
    if !u.is_unitary(UNITARY_TOL) {
        return Err(Error::pre("nu_distance requires a unitary matrix"));
    }
    let eigenvalues = u.eigenvalues()?;
    Ok(hull_distance_from_origin(&eigenvalues).min(1.0))
}

/// Distance from the origin to the convex hull of finitely many points.
pub fn hull_distance_from_origin(points: &[Complex64]) -> f64 {
    if points.is_empty() {
        return f64::INFINITY;
    }
    if origin_in_hull(points) {
        return 0.0;
    }
    // The nearest hull point lies on an edge, and every edge is one of
    // these chords.
    let mut best = points.iter().map(|p| p.norm()).fold(f64::INFINITY, f64::min);
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.min(segment_distance(*a, *b));
        }
    }
    best
}

fn origin_in_hull(points: &[Complex64]) -> bool {
    let scale = points.iter().map(|p| p.norm()).fold(0.0, f64::max);
    if points.iter().any(|p| p.norm() <= 1e-14 * scale.max(1.0)) {
        return true;
    }
    let mut angles: Vec<f64> = points.iter().map(|p| p.arg()).collect();
    angles.sort_by(f64::total_cmp);
    // Origin is outside the closed hull iff some open half-plane holds every
    // point, i.e. iff the largest angular gap exceeds π.
    let mut max_gap = angles[0] + 2.0 * PI - angles[angles.len() - 1];
    for w in angles.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    max_gap <= PI + GAP_SLACK
}

fn segment_distance(a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return a.norm();
    }
    // project the origin onto the line through a and b
    let t = (-(a.conj() * ab).re / len2).clamp(0.0, 1.0);
    (a + ab * t).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_has_distance_one() {
        assert!((nu_distance(&pauli::i2()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn antipodal_spectrum_contains_origin() {
        assert_eq!(nu_distance(&pauli::z()).unwrap(), 0.0);
    }

    #[test]
    fn quarter_turn() {
        let u = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(0.0, 1.0)]);
        let nu = nu_distance(&u).unwrap();
        assert!((nu - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_unitary() {
        let m = ComplexMatrix::from_real_diag(&[1.0, 0.5]);
        assert!(matches!(nu_distance(&m), Err(Error::Precondition(_))));
    }

    #[test]
    fn three_points_surrounding_origin() {
        let pts: Vec<Complex64> = (0..3)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 3.0))
            .collect();
        assert_eq!(hull_distance_from_origin(&pts), 0.0);
    }

    #[test]
    fn hull_vertex_nearest() {
        // Segment from 2 to 2+2i: nearest point is the vertex 2.
        let d = hull_distance_from_origin(&[c(2.0, 0.0), c(2.0, 2.0)]);
        assert!((d - 2.0).abs() < 1e-15);
    }
}
