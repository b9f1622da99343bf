//! Upper half-plane primitives and the space of complete geodesics.
//!
//! Points carry the hyperbolic metric ds^2 = (dx^2 + dy^2)/y^2. A complete
//! geodesic is determined by its unordered endpoint pair on the extended
//! real line; the endpoint chart carries the natural area measure
//! (a - b)^{-2} da db. The cross ratio of a point against an endpoint pair
//! satisfies cr = 1/cosh d, which gives closed-form distances per chart
//! (vertical line vs. semicircle) and the Gaussian e^{-2d}.

use num_complex::Complex64;

use crate::error::{Result, WplabError};

/// Point of the upper half-plane; `y > 0`, both coordinates finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Self {
        debug_assert!(y > 0.0 && x.is_finite() && y.is_finite());
        Self { x, y }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }

    /// Hyperbolic distance to another point: cosh d = 1 + |z-w|^2/(2 y_z y_w).
    pub fn dist(self, other: HPoint) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let c = 1.0 + (dx * dx + dy * dy) / (2.0 * self.y * other.y);
        stable_acosh(c)
    }
}

/// arccosh that tolerates arguments slightly below 1 from rounding.
#[inline]
pub(crate) fn stable_acosh(c: f64) -> f64 {
    if c <= 1.0 {
        0.0
    } else {
        c.acosh()
    }
}

/// Unordered endpoint pair on R U {inf}; canonicalized so a < b with inf
/// treated as +inf. At most one endpoint is infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicEnds {
    a: f64,
    b: f64,
}

impl GeodesicEnds {
    /// Canonicalizing constructor. `f64::INFINITY` (either sign) denotes the
    /// boundary point at infinity.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let norm = |t: f64| if t == f64::NEG_INFINITY { f64::INFINITY } else { t };
        let (mut a, mut b) = (norm(a), norm(b));
        if a.is_infinite() && b.is_infinite() {
            return Err(WplabError::Invalid(
                "geodesic endpoints must be distinct (both at infinity)".into(),
            ));
        }
        if a == b {
            return Err(WplabError::Invalid(format!(
                "geodesic endpoints must be distinct (a = b = {a})"
            )));
        }
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        Ok(Self { a, b })
    }

    /// Smaller endpoint (finite unless the geodesic is a vertical line
    /// through a single finite point, which cannot happen: `a` is finite).
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Larger endpoint; `inf` for vertical lines.
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn is_vertical(&self) -> bool {
        self.b.is_infinite()
    }

    /// Key for order-insensitive deduplication at tolerance `tol`.
    pub(crate) fn quantized(&self, tol: f64) -> (i64, i64) {
        let q = |t: f64| {
            if t.is_infinite() {
                i64::MAX
            } else {
                (t / tol).round() as i64
            }
        };
        (q(self.a), q(self.b))
    }
}

/// Real 2x2 unit-determinant matrix acting on the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

pub const DET_TOL: f64 = 1e-12;

impl MoebiusMap {
    pub fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Result<Self> {
        let m = Self { m11, m12, m21, m22 };
        let det = m.det();
        if (det - 1.0).abs() > 1e-9 {
            return Err(WplabError::Invalid(format!(
                "matrix determinant {det} differs from 1"
            )));
        }
        Ok(m.renormalized())
    }

    /// Rescale so the determinant is 1 to machine precision.
    pub fn renormalized(self) -> Self {
        let s = self.det().sqrt();
        Self {
            m11: self.m11 / s,
            m12: self.m12 / s,
            m21: self.m21 / s,
            m22: self.m22 / s,
        }
    }

    pub fn identity() -> Self {
        Self { m11: 1.0, m12: 0.0, m21: 0.0, m22: 1.0 }
    }

    /// diag(e^{t/2}, e^{-t/2}): translation by t along the axis (0, inf).
    pub fn dilation(t: f64) -> Self {
        let e = (0.5 * t).exp();
        Self { m11: e, m12: 0.0, m21: 0.0, m22: 1.0 / e }
    }

    /// Elliptic rotation fixing i; rotates tangent vectors at i by `angle`.
    pub fn rotation_about_i(angle: f64) -> Self {
        let (s, c) = (0.5 * angle).sin_cos();
        Self { m11: c, m12: s, m21: -s, m22: c }
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    pub fn inverse(&self) -> Self {
        Self { m11: self.m22, m12: -self.m12, m21: -self.m21, m22: self.m11 }
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        Self {
            m11: self.m11 * rhs.m11 + self.m12 * rhs.m21,
            m12: self.m11 * rhs.m12 + self.m12 * rhs.m22,
            m21: self.m21 * rhs.m11 + self.m22 * rhs.m21,
            m22: self.m21 * rhs.m12 + self.m22 * rhs.m22,
        }
    }

    /// Sign-canonical representative of {M, -M} (same Moebius action).
    pub fn sign_canonical(&self) -> Self {
        let flip = self.m21 < 0.0
            || (self.m21 == 0.0 && (self.m11 < 0.0 || (self.m11 == 0.0 && self.m12 < 0.0)));
        if flip {
            Self { m11: -self.m11, m12: -self.m12, m21: -self.m21, m22: -self.m22 }
        } else {
            *self
        }
    }

    /// Action on interior points, evaluated in complex arithmetic.
    pub fn apply(&self, z: HPoint) -> HPoint {
        let zc = z.to_complex();
        let den = self.m21 * zc + self.m22;
        let w = (self.m11 * zc + self.m12) / den;
        HPoint::new(w.re, w.im)
    }

    pub fn apply_complex(&self, z: Complex64) -> Complex64 {
        (self.m11 * z + self.m12) / (self.m21 * z + self.m22)
    }

    /// Action on boundary points of the extended real line.
    pub fn apply_boundary(&self, x: f64) -> f64 {
        if x.is_infinite() {
            if self.m21 == 0.0 {
                f64::INFINITY
            } else {
                self.m11 / self.m21
            }
        } else {
            let den = self.m21 * x + self.m22;
            if den == 0.0 {
                f64::INFINITY
            } else {
                (self.m11 * x + self.m12) / den
            }
        }
    }

    pub fn apply_geodesic(&self, g: GeodesicEnds) -> GeodesicEnds {
        GeodesicEnds::new(self.apply_boundary(g.a()), self.apply_boundary(g.b()))
            .expect("Moebius maps preserve distinctness of endpoints")
    }
}

/// Cross ratio |cr(z, a, b)| = (a-b) Im z / (|z-a||z-b|); equals 1/cosh of
/// the distance from z to the geodesic, so it is 1 exactly on the geodesic.
/// For a vertical line the finite limit Im z / |z-a| is used.
pub fn cross_ratio(z: HPoint, g: GeodesicEnds) -> f64 {
    1.0 / cosh_dist_point_geodesic(z, g)
}

/// cosh of the distance from `z` to the complete geodesic with ends `g`.
#[inline]
pub fn cosh_dist_point_geodesic(z: HPoint, g: GeodesicEnds) -> f64 {
    if g.is_vertical() {
        let dx = z.x - g.a();
        (dx * dx + z.y * z.y).sqrt() / z.y
    } else {
        let za = ((z.x - g.a()) * (z.x - g.a()) + z.y * z.y).sqrt();
        let zb = ((z.x - g.b()) * (z.x - g.b()) + z.y * z.y).sqrt();
        za * zb / ((g.b() - g.a()) * z.y)
    }
}

/// Hyperbolic distance from a point to a complete geodesic; 0 iff the point
/// lies on it. For g = (0, inf) this satisfies sinh d = |x|/y.
pub fn dist_point_geodesic(z: HPoint, g: GeodesicEnds) -> f64 {
    stable_acosh(cosh_dist_point_geodesic(z, g))
}

/// The Gaussian e^{-2 d(z, g)} on the space of geodesics; lies in (0, 1]
/// and satisfies gaussian <= cross_ratio^2.
pub fn gaussian(z: HPoint, g: GeodesicEnds) -> f64 {
    gaussian_from_cosh(cosh_dist_point_geodesic(z, g))
}

/// e^{-2d} from cosh d, avoiding the intermediate acosh/exp round trip.
#[inline]
pub fn gaussian_from_cosh(c: f64) -> f64 {
    if c <= 1.0 {
        return 1.0;
    }
    // e^{-d} = 1/(cosh d + sinh d)
    let e = 1.0 / (c + (c * c - 1.0).sqrt());
    e * e
}

/// Density (a-b)^{-2} of the natural area measure on the geodesic space in
/// the endpoint chart. Only defined for finite endpoints.
pub fn geodesic_measure_density(g: GeodesicEnds) -> Result<f64> {
    if g.is_vertical() {
        return Err(WplabError::DensityChartExcludesInfinity);
    }
    let d = g.a() - g.b();
    Ok(1.0 / (d * d))
}
