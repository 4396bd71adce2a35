//! Totally real planes, anti-holomorphic reflections, orthogonal projections,
//! and the SL(2,R) embedding stabilizing a totally real plane.
//!
//! The plane `Sigma_v = {(x, 0, u, v)}` is an isometrically embedded real
//! hyperbolic plane (of curvature -1/4 in the ambient normalization). The
//! orthogonal projection onto it is realized as the geodesic midpoint of a
//! point and its reflection through the plane; the reflection in turn is
//! complex conjugation of lifts transported by a vertical translation.

use crate::error::{Error, Result};
use crate::heisenberg::v_translation;
use crate::isometry::Isometry;
use crate::linalg::{cx, CMat3, Cx, Mat2};
use crate::siegel::{herm, HoroCoord, ProjPoint};
use crate::linalg::CVec3;

/// The totally real plane `Sigma_v = {(x, 0, u, v_offset)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TotallyRealPlane {
    pub v_offset: f64,
}

impl TotallyRealPlane {
    pub fn new(v_offset: f64) -> Self {
        TotallyRealPlane { v_offset }
    }

    /// Chart from the upper half plane: `xi + i eta -> (x=xi, u=eta^2, v)`.
    /// Doubles distances: `dist(chart(z1), chart(z2)) = 2 d_UHP(z1, z2)`.
    pub fn chart(&self, zeta: Cx) -> HoroCoord {
        HoroCoord::from_real(zeta.re, 0.0, zeta.im * zeta.im, self.v_offset)
    }

    /// Inverse chart for points on (or numerically near) the plane.
    pub fn chart_inv(&self, p: &HoroCoord) -> Cx {
        cx(p.x(), p.u.max(0.0).sqrt())
    }

    pub fn contains(&self, p: &HoroCoord, tol: f64) -> bool {
        p.y().abs() <= tol && (p.v - self.v_offset).abs() <= tol
    }
}

/// Anti-holomorphic involution `p -> M conj(p)` on lifts.
#[derive(Debug, Clone, Copy)]
pub struct AntiholInvolution {
    pub matrix: CMat3,
}

impl AntiholInvolution {
    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        let l = p.lift();
        let conj = CVec3::new(l.0[0].conj(), l.0[1].conj(), l.0[2].conj());
        ProjPoint::from_lift(self.matrix * conj)
    }
}

/// Reflection through `Sigma_v`: in horospherical coordinates
/// `(z, u, v) -> (conj z, u, 2 v_offset - v)`.
pub fn involution(plane: &TotallyRealPlane) -> AntiholInvolution {
    // V_{2 v_offset} composed with plain conjugation of lifts.
    AntiholInvolution {
        matrix: *v_translation(2.0 * plane.v_offset).matrix(),
    }
}

/// Orthogonal projection of an interior point onto the plane: the geodesic
/// midpoint of `p` and its reflection.
pub fn project(plane: &TotallyRealPlane, p: &ProjPoint) -> Result<ProjPoint> {
    let pp = herm(p.lift(), p.lift()).re;
    if pp >= 0.0 {
        return Err(Error::BoundaryPoint { pairing: pp });
    }
    midpoint_with_reflection(plane, p)
}

/// Projection extended to `Y`: interior points project as usual, finite
/// boundary points off the plane's ideal boundary land in the interior of
/// the plane. Used by the separation machinery which feeds it points with
/// arbitrarily small `u`.
pub fn project_extended(plane: &TotallyRealPlane, p: &ProjPoint) -> Result<ProjPoint> {
    let pp = herm(p.lift(), p.lift()).re;
    if pp < 0.0 {
        return midpoint_with_reflection(plane, p);
    }
    project_boundary(plane, p)
}

fn midpoint_with_reflection(plane: &TotallyRealPlane, p: &ProjPoint) -> Result<ProjPoint> {
    let q = involution(plane).apply(p);
    let pp = herm(p.lift(), p.lift()).re;
    let qq = herm(q.lift(), q.lift()).re;
    // Normalize both lifts to self-pairing -1.
    let pn = p.lift().scale(cx(1.0 / (-pp).sqrt(), 0.0));
    let qn = q.lift().scale(cx(1.0 / (-qq).sqrt(), 0.0));
    let pairing = herm(&pn, &qn);
    let rho = pairing.norm();
    if rho < 1e-14 {
        return Err(Error::DegeneratePairing);
    }
    // Align the mutual pairing to the negative real axis; |pairing| >= 1 for
    // interior points, so the sum is again a negative vector. herm is
    // conjugate-linear in its second slot: herm(p, lam q) = conj(lam) herm(p, q).
    let phase = -pairing / cx(rho, 0.0);
    let mid = pn + qn.scale(phase);
    Ok(ProjPoint::from_lift(mid))
}

/// Geodesic-limit extension of the projection to boundary points.
///
/// Points of the plane's own ideal boundary are fixed; any other boundary
/// point is pushed along the geodesic ray from a basepoint on the plane and
/// the projection is evaluated far out (parameter T = 40, well past the
/// scale where the limit has stabilized to ~1e-6).
pub fn project_boundary(plane: &TotallyRealPlane, xi: &ProjPoint) -> Result<ProjPoint> {
    project_boundary_at(plane, xi, 40.0)
}

/// Same as [`project_boundary`] with an explicit geodesic parameter, exposed
/// so tests can compare truncation levels.
pub fn project_boundary_at(plane: &TotallyRealPlane, xi: &ProjPoint, t: f64) -> Result<ProjPoint> {
    let ss = herm(xi.lift(), xi.lift()).re;
    let scale = xi.lift().max_abs();
    if ss.abs() > 1e-9 * scale * scale {
        return Err(Error::NotOnBoundary { pairing: ss });
    }
    if xi.is_infinity(1e-12) {
        return Ok(*xi);
    }
    if let Ok(h) = xi.to_horo() {
        if plane.contains(&HoroCoord { u: 0.0, ..h }, 1e-12) {
            return Ok(*xi);
        }
    }
    // Basepoint on the plane.
    let o = ProjPoint::from_horo(&plane.chart(cx(0.0, 1.0)));
    let on = o.lift().scale(cx(1.0 / (-o.self_pairing()).sqrt(), 0.0));
    let pairing = herm(&on, xi.lift());
    let rho = pairing.norm();
    if rho < 1e-14 {
        return Err(Error::DegeneratePairing);
    }
    // Phase-align and scale so that herm(o, xi') = -1/2; then
    // r(t) = o + (e^t - 1) xi' has dist(o, r(t)) = t.
    let lam = -pairing / cx(rho, 0.0); // herm(o, lam^conj-scaled xi) made real < 0
    let xin = xi.lift().scale(lam.conj() / cx(2.0 * rho, 0.0));
    let ray = on + xin.scale(cx(t.exp() - 1.0, 0.0));
    midpoint_with_reflection(plane, &ProjPoint::from_lift(ray))
}

/// The symmetric-square representation SL(2,R) -> SU(2,1) stabilizing
/// `Sigma_0`, conjugated to `Sigma_v` by a vertical translation.
///
/// Calibrated so that `[[1, r], [0, 1]]` maps to the horizontal translation
/// `H_r`, and the Moebius action on the upper half plane matches the action
/// on the plane through the chart.
pub fn embed_so21(m: &Mat2, plane: &TotallyRealPlane) -> Result<Isometry> {
    let defect = (m.det() - 1.0).abs();
    if defect > 1e-12 {
        return Err(Error::NonUnimodular { defect });
    }
    let [[a, b], [c, d]] = m.0;
    // Action on (s12, s11/2, s22) coordinates of symmetric 2x2 matrices.
    let sym = CMat3([
        [
            cx(a * d + b * c, 0.0),
            cx(2.0 * a * c, 0.0),
            cx(b * d, 0.0),
        ],
        [cx(a * b, 0.0), cx(a * a, 0.0), cx(b * b * 0.5, 0.0)],
        [
            cx(2.0 * c * d, 0.0),
            cx(2.0 * c * c, 0.0),
            cx(d * d, 0.0),
        ],
    ]);
    let v = plane.v_offset;
    if v == 0.0 {
        return Isometry::try_new(sym);
    }
    // Conjugate by V_v, written out entrywise to avoid extra rounding:
    // row 2 gains -(iv/2) row 3, column 3 gains +(iv/2) column 2 terms.
    let s = cx(0.0, 0.5 * v);
    let mut out = sym;
    for j in 0..3 {
        out.0[1][j] -= s * sym.0[2][j];
    }
    for i in 0..3 {
        out.0[i][2] += s * out.0[i][1];
    }
    Isometry::try_new(out)
}
