//! Coordinate models of the complex hyperbolic plane.
//!
//! We use the Siegel domain `{(w1,w2) : |w1|^2 < w2 + conj(w2)}` with one
//! distinguished boundary point at infinity, horospherical coordinates
//! `(z, u, v)` with `u + iv = 2*conj(w2) - |w1|^2`, and homogeneous lifts in
//! C^3. The Hermitian form of signature (2,1) is
//!
//! ```text
//! <a,b> = a1*conj(b1) - a2*conj(b3) - a3*conj(b2)
//! ```
//!
//! chosen so that the affine lift `(w1, w2, 1)` is a negative vector exactly
//! on the interior of the Siegel domain and `(0,1,0)` is the null lift of
//! infinity. With the distance normalization below, totally real planes have
//! curvature -1/4 and complex geodesics curvature -1.

use crate::error::{Error, Result};
use crate::linalg::{cx, CMat3, CVec3, Cx, ONE, ZERO};
use crate::TOL_BOUNDARY;

/// Hermitian form: `herm(a, b) = a1 conj(b1) - a2 conj(b3) - a3 conj(b2)`.
///
/// Conjugate-symmetric, linear in the first argument.
pub fn herm(a: &CVec3, b: &CVec3) -> Cx {
    a.0[0] * b.0[0].conj() - a.0[1] * b.0[2].conj() - a.0[2] * b.0[1].conj()
}

/// Matrix of the form: `herm(a,b) = conj(b)^T J a`.
pub fn form_matrix() -> CMat3 {
    let mut m = CMat3::zeros();
    m.0[0][0] = ONE;
    m.0[1][2] = -ONE;
    m.0[2][1] = -ONE;
    m
}

/// Point of the Siegel domain or its finite boundary in affine coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiegelPoint {
    pub w1: Cx,
    pub w2: Cx,
}

impl SiegelPoint {
    pub fn new(w1: Cx, w2: Cx) -> Self {
        SiegelPoint { w1, w2 }
    }

    /// `|w1|^2 - 2 Re(w2)`; negative inside, zero on the finite boundary.
    pub fn defect(&self) -> f64 {
        self.w1.norm_sqr() - 2.0 * self.w2.re
    }

    pub fn is_interior(&self, tol: f64) -> bool {
        self.defect() < -tol
    }
}

/// Horospherical coordinates `(z, u, v)`. Horospheres centered at infinity
/// are the level sets of `u`; `u = 0` is the finite part of the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoroCoord {
    pub z: Cx,
    pub u: f64,
    pub v: f64,
}

impl HoroCoord {
    pub fn new(z: Cx, u: f64, v: f64) -> Self {
        HoroCoord { z, u, v }
    }

    pub fn from_real(x: f64, y: f64, u: f64, v: f64) -> Self {
        HoroCoord {
            z: cx(x, y),
            u,
            v,
        }
    }

    pub fn x(&self) -> f64 {
        self.z.re
    }

    pub fn y(&self) -> f64 {
        self.z.im
    }

    pub fn is_interior(&self, tol: f64) -> bool {
        self.u > tol
    }
}

/// `u + iv = 2 conj(w2) - |w1|^2` solved for `w2`.
pub fn horo_to_siegel(p: &HoroCoord) -> SiegelPoint {
    let zz = p.z.norm_sqr();
    SiegelPoint {
        w1: p.z,
        w2: cx((p.u + zz) * 0.5, -p.v * 0.5),
    }
}

pub fn siegel_to_horo(q: &SiegelPoint) -> HoroCoord {
    let uv = cx(2.0, 0.0) * q.w2.conj() - cx(q.w1.norm_sqr(), 0.0);
    HoroCoord {
        z: q.w1,
        u: uv.re,
        v: uv.im,
    }
}

/// Projective class of a nonzero vector in C^3.
///
/// Interior points have negative self-pairing, boundary points null
/// self-pairing. The stored lift is rescaled to unit max-norm so that long
/// orbit computations stay in range; rescaling does not change the point.
#[derive(Debug, Clone, Copy)]
pub struct ProjPoint {
    lift: CVec3,
}

impl ProjPoint {
    pub fn from_lift(v: CVec3) -> Self {
        let m = v.max_abs();
        assert!(m > 0.0, "zero vector is not a projective point");
        ProjPoint {
            lift: v.scale(cx(1.0 / m, 0.0)),
        }
    }

    /// Canonical lift (0,1,0) of the point at infinity.
    pub fn infinity() -> Self {
        ProjPoint {
            lift: CVec3::new(ZERO, ONE, ZERO),
        }
    }

    pub fn from_siegel(q: &SiegelPoint) -> Self {
        ProjPoint::from_lift(CVec3::new(q.w1, q.w2, ONE))
    }

    pub fn from_horo(p: &HoroCoord) -> Self {
        ProjPoint::from_siegel(&horo_to_siegel(p))
    }

    pub fn lift(&self) -> &CVec3 {
        &self.lift
    }

    pub fn self_pairing(&self) -> f64 {
        herm(&self.lift, &self.lift).re
    }

    /// Self-pairing of the lift rescaled to third coordinate 1 (the affine
    /// normalization); meaningful Siegel-scale quantity for finite points.
    fn affine_pairing(&self) -> Option<f64> {
        let c = self.lift.0[2];
        if c.norm() <= 1e-300 {
            return None;
        }
        let s = herm(&self.lift, &self.lift).re / c.norm_sqr();
        Some(s)
    }

    pub fn is_infinity(&self, tol: f64) -> bool {
        let scale = self.lift.max_abs();
        self.lift.0[0].norm() <= tol * scale && self.lift.0[2].norm() <= tol * scale
    }

    pub fn is_interior(&self, tol: f64) -> bool {
        match self.affine_pairing() {
            Some(s) => s < -tol,
            None => false,
        }
    }

    pub fn is_boundary(&self, tol: f64) -> bool {
        if self.is_infinity(tol) {
            return true;
        }
        match self.affine_pairing() {
            Some(s) => s.abs() <= tol,
            None => true,
        }
    }

    pub fn to_siegel(&self) -> Result<SiegelPoint> {
        let c = self.lift.0[2];
        if self.is_infinity(TOL_BOUNDARY) || c.norm() <= 1e-300 {
            return Err(Error::InfinityPoint);
        }
        Ok(SiegelPoint {
            w1: self.lift.0[0] / c,
            w2: self.lift.0[1] / c,
        })
    }

    pub fn to_horo(&self) -> Result<HoroCoord> {
        Ok(siegel_to_horo(&self.to_siegel()?))
    }

    /// Projective coincidence test, scale-invariant.
    pub fn same_point(&self, other: &ProjPoint, tol: f64) -> bool {
        // Cross products of lifts vanish iff proportional.
        let a = &self.lift.0;
        let b = &other.lift.0;
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in (i + 1)..3 {
                worst = worst.max((a[i] * b[j] - a[j] * b[i]).norm());
            }
        }
        worst <= tol * self.lift.max_abs() * other.lift.max_abs()
    }
}

/// Bergman-type distance: `cosh^2(d/2) = <p,q><q,p> / (<p,p><q,q>)`.
///
/// Both points must be interior. Symmetric, isometry-invariant.
pub fn dist(p: &ProjPoint, q: &ProjPoint) -> Result<f64> {
    let pp = herm(p.lift(), p.lift()).re;
    let qq = herm(q.lift(), q.lift()).re;
    if pp >= 0.0 {
        return Err(Error::BoundaryPoint { pairing: pp });
    }
    if qq >= 0.0 {
        return Err(Error::BoundaryPoint { pairing: qq });
    }
    let pq = herm(p.lift(), q.lift());
    let ratio = pq.norm_sqr() / (pp * qq);
    Ok(2.0 * ratio.max(1.0).sqrt().acosh())
}
