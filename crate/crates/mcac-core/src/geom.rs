//! Planar points and invertible affine maps.
//!
//! Pixel coordinates put the origin at the top-left lattice point with y
//! increasing downward, matching raster conventions everywhere in the crate.

use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};

/// Determinant floor below which an affine map is treated as singular.
pub const DET_MIN: f64 = 1e-6;

/// A point in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn to_vector(self) -> Vector2<f64> {
        Vector2::new(self.x, self.y)
    }

    pub fn from_vector(v: Vector2<f64>) -> Self {
        Point2 { x: v.x, y: v.y }
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Invertible affine transform `z -> a z + b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub a: Matrix2<f64>,
    pub b: Vector2<f64>,
}

impl AffineMap {
    pub fn new(a: Matrix2<f64>, b: Vector2<f64>) -> Self {
        AffineMap { a, b }
    }

    pub fn identity() -> Self {
        AffineMap {
            a: Matrix2::identity(),
            b: Vector2::zeros(),
        }
    }

    pub fn det(&self) -> f64 {
        self.a[(0, 0)] * self.a[(1, 1)] - self.a[(0, 1)] * self.a[(1, 0)]
    }

    /// Applies the map to a point: `a z + b`.
    pub fn apply(&self, z: Point2) -> Point2 {
        Point2::from_vector(self.a * z.to_vector() + self.b)
    }

    /// Inverse map, rejecting determinants below [`DET_MIN`].
    pub fn inverse(&self) -> Result<AffineMap> {
        self.inverse_with(DET_MIN)
    }

    pub fn inverse_with(&self, det_min: f64) -> Result<AffineMap> {
        let det = self.det();
        if !det.is_finite() || det.abs() < det_min {
            return Err(Error::SingularMap {
                det,
                min: det_min,
            });
        }
        let inv = Matrix2::new(
            self.a[(1, 1)] / det,
            -self.a[(0, 1)] / det,
            -self.a[(1, 0)] / det,
            self.a[(0, 0)] / det,
        );
        Ok(AffineMap {
            a: inv,
            b: -(inv * self.b),
        })
    }

    /// Flattens (a, b) into `[a11, a12, a21, a22, b1, b2]`.
    pub fn to_params(&self) -> [f64; 6] {
        [
            self.a[(0, 0)],
            self.a[(0, 1)],
            self.a[(1, 0)],
            self.a[(1, 1)],
            self.b.x,
            self.b.y,
        ]
    }

    pub fn from_params(p: [f64; 6]) -> Self {
        AffineMap {
            a: Matrix2::new(p[0], p[1], p[2], p[3]),
            b: Vector2::new(p[4], p[5]),
        }
    }
}

/// Centroid of a point set; `None` when empty.
pub fn centroid(points: &[Point2]) -> Option<Point2> {
    if points.is_empty() {
        return None;
    }
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
    Some(Point2::new(sx / n, sy / n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_apply() {
        let m = AffineMap::identity();
        let z = Point2::new(3.0, 4.0);
        assert_eq!(m.apply(z), z);
    }

    #[test]
    fn pure_scaling() {
        let m = AffineMap::new(Matrix2::identity() * 2.0, Vector2::zeros());
        let q = m.apply(Point2::new(1.0, 1.0));
        assert_eq!((q.x, q.y), (2.0, 2.0));
    }

    #[test]
    fn diagonal_inverse_closed_form() {
        let m = AffineMap::new(Matrix2::new(2.0, 0.0, 0.0, 0.5), Vector2::new(1.0, 0.0));
        let inv = m.inverse().unwrap();
        assert!((inv.a[(0, 0)] - 0.5).abs() < 1e-15);
        assert!((inv.a[(1, 1)] - 2.0).abs() < 1e-15);
        assert!((inv.b.x + 0.5).abs() < 1e-15);
        assert!(inv.b.y.abs() < 1e-15);
    }

    #[test]
    fn identity_inverse_is_identity() {
        let inv = AffineMap::identity().inverse().unwrap();
        assert_eq!(inv, AffineMap::identity());
    }

    #[test]
    fn singular_map_rejected() {
        let m = AffineMap::new(Matrix2::new(1.0, 2.0, 0.5, 1.0), Vector2::zeros());
        assert!(matches!(m.inverse(), Err(Error::SingularMap { .. })));
    }

    #[test]
    fn random_round_trip_within_1e9() {
        use rand::Rng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let mut worst = 0.0_f64;
        let mut tried = 0;
        while tried < 100 {
            let m = AffineMap::new(
                Matrix2::new(
                    rng.random_range(-2.0..2.0),
                    rng.random_range(-2.0..2.0),
                    rng.random_range(-2.0..2.0),
                    rng.random_range(-2.0..2.0),
                ),
                Vector2::new(rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0)),
            );
            let det = m.det().abs();
            if !(0.2..=5.0).contains(&det) {
                continue;
            }
            tried += 1;
            let inv = m.inverse().unwrap();
            let z = Point2::new(rng.random_range(-30.0..30.0), rng.random_range(-30.0..30.0));
            let back = inv.apply(m.apply(z));
            worst = worst.max(back.distance(z));
        }
        assert!(worst <= 1e-9, "worst round-trip error {worst}");
    }

    use rand::SeedableRng;

    proptest! {
        #[test]
        fn affine_round_trip(
            a11 in -3.0..3.0f64, a12 in -3.0..3.0f64,
            a21 in -3.0..3.0f64, a22 in -3.0..3.0f64,
            bx in -100.0..100.0f64, by in -100.0..100.0f64,
            zx in -100.0..100.0f64, zy in -100.0..100.0f64,
        ) {
            let m = AffineMap::new(Matrix2::new(a11, a12, a21, a22), Vector2::new(bx, by));
            prop_assume!(m.det().abs() >= 0.05);
            let z = Point2::new(zx, zy);
            let back = m.inverse().unwrap().apply(m.apply(z));
            prop_assert!(back.distance(z) <= 1e-9);
        }
    }
}
