use super::Point;
use crate::error::{Error, Result};

/// Implicit interface description. Positive on the side the plane normal
/// points toward, and outside the circle.
#[derive(Debug, Clone, Copy)]
pub enum LevelSetShape {
    Plane { point: Point, normal: Point },
    Circle { center: Point, radius: f64 },
}

impl LevelSetShape {
    pub fn plane(point: Point, normal: Point) -> Result<Self> {
        let n = (normal[0] * normal[0] + normal[1] * normal[1]).sqrt();
        if n == 0.0 {
            return Err(Error::Geometry("plane normal must be nonzero".into()));
        }
        Ok(LevelSetShape::Plane {
            point,
            normal: [normal[0] / n, normal[1] / n],
        })
    }

    pub fn circle(center: Point, radius: f64) -> Result<Self> {
        if radius <= 0.0 {
            return Err(Error::Geometry("circle radius must be positive".into()));
        }
        Ok(LevelSetShape::Circle { center, radius })
    }

    /// Signed distance: plane distance, or r - radius for the circle.
    pub fn value(&self, p: Point) -> f64 {
        match *self {
            LevelSetShape::Plane { point, normal } => {
                (p[0] - point[0]) * normal[0] + (p[1] - point[1]) * normal[1]
            }
            LevelSetShape::Circle { center, radius } => {
                ((p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2)).sqrt() - radius
            }
        }
    }

    /// Unit gradient of the level set, pointing from the negative toward the
    /// positive side. At a circle center the direction is arbitrary.
    pub fn gradient(&self, p: Point) -> Point {
        match *self {
            LevelSetShape::Plane { normal, .. } => normal,
            LevelSetShape::Circle { center, .. } => {
                let d = [p[0] - center[0], p[1] - center[1]];
                let r = (d[0] * d[0] + d[1] * d[1]).sqrt();
                if r == 0.0 {
                    [1.0, 0.0]
                } else {
                    [d[0] / r, d[1] / r]
                }
            }
        }
    }
}

/// Signed level-set value at a point.
pub fn levelset_value(shape: &LevelSetShape, p: Point) -> f64 {
    shape.value(p)
}
