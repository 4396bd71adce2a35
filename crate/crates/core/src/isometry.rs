//! Isometries of the complex hyperbolic plane as matrices in SU(2,1).
//!
//! An isometry is stored as a 3x3 complex matrix preserving the Hermitian
//! form, normalized to determinant 1. Two matrices represent the same element
//! of PU(2,1) iff they differ by a scalar cube root of unity, so projective
//! comparisons minimize over those three scalars.

use crate::error::{Error, Result};
use crate::linalg::{cx, CMat3, Cx, ONE};
use crate::siegel::{form_matrix, ProjPoint};
use crate::{TOL_CLASSIFY, TOL_FORM};
use serde::Serialize;

/// Coarse dynamical type of an element of PU(2,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IsometryKind {
    Identity,
    Elliptic,
    Parabolic,
    Loxodromic,
}

/// Classification outcome with the trace diagnostics that produced it.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Classification {
    pub kind: IsometryKind,
    #[serde(serialize_with = "ser_cx")]
    pub trace: Cx,
    pub discriminant: f64,
}

fn ser_cx<S: serde::Serializer>(z: &Cx, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

/// Holomorphic isometry of the complex hyperbolic plane.
#[derive(Debug, Clone, Copy)]
pub struct Isometry {
    m: CMat3,
}

impl Isometry {
    /// Wrap a matrix that is expected to preserve the form: the matrix is
    /// rescaled to determinant 1 and the J-unitarity residual is checked.
    pub fn try_new(m: CMat3) -> Result<Self> {
        let det = m.det();
        if det.norm() < 1e-100 {
            return Err(Error::NotUnitary { residual: f64::INFINITY });
        }
        let m = m.scale(ONE / det.cbrt());
        let residual = form_residual(&m);
        if residual > TOL_FORM * (1.0 + m.max_abs().powi(2)) {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Isometry { m })
    }

    /// Wrap without the unitarity check (used for long products where the
    /// residual is allowed to drift at the scale of rounding).
    pub fn from_matrix_unchecked(m: CMat3) -> Self {
        Isometry { m }
    }

    pub fn identity() -> Self {
        Isometry {
            m: CMat3::identity(),
        }
    }

    pub fn matrix(&self) -> &CMat3 {
        &self.m
    }

    /// Inverse via the form: `M^{-1} = J M^* J` for J-unitary M.
    pub fn inverse(&self) -> Self {
        let j = form_matrix();
        Isometry {
            m: j * self.m.conj_transpose() * j,
        }
    }

    pub fn compose(&self, other: &Isometry) -> Self {
        Isometry { m: self.m * other.m }
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint::from_lift(self.m * *p.lift())
    }

    /// Max-norm of `M* J M - J`.
    pub fn form_residual(&self) -> f64 {
        form_residual(&self.m)
    }

    /// Rescale to determinant 1 (principal cube root).
    pub fn det_normalized(&self) -> Self {
        Isometry {
            m: self.m.scale(ONE / self.m.det().cbrt()),
        }
    }

    /// Distance to `other` as elements of PU(2,1): both are normalized to
    /// determinant 1 and the max-norm difference is minimized over the three
    /// scalar cube roots of unity.
    pub fn pu_distance(&self, other: &Isometry) -> f64 {
        let a = self.det_normalized().m;
        let b = other.det_normalized().m;
        let omega = cx(-0.5, 0.75f64.sqrt());
        let mut w = ONE;
        let mut best = f64::INFINITY;
        for _ in 0..3 {
            best = best.min(a.dist_max(&b.scale(w)));
            w *= omega;
        }
        best
    }

    pub fn is_pu_identity(&self, tol: f64) -> bool {
        self.pu_distance(&Isometry::identity()) <= tol
    }

    /// Trace discriminant `f(tau) = |tau|^4 - 8 Re(tau^3) + 18 |tau|^2 - 27`
    /// of the det-normalized matrix. Positive for loxodromic, negative for
    /// regular elliptic, zero on the parabolic/boundary-elliptic locus.
    pub fn discriminant(&self) -> f64 {
        let tau = self.det_normalized().m.trace();
        let t2 = tau.norm_sqr();
        t2 * t2 - 8.0 * (tau * tau * tau).re + 18.0 * t2 - 27.0
    }

    pub fn classify(&self, tol: f64) -> Classification {
        let n = self.det_normalized();
        let tau = n.m.trace();
        let f = n.discriminant();
        let kind = if f > tol {
            IsometryKind::Loxodromic
        } else if f < -tol {
            IsometryKind::Elliptic
        } else {
            borderline_kind(&n.m)
        };
        Classification {
            kind,
            trace: tau,
            discriminant: f,
        }
    }

    pub fn kind(&self) -> IsometryKind {
        self.classify(TOL_CLASSIFY).kind
    }
}

impl std::ops::Mul for Isometry {
    type Output = Isometry;
    fn mul(self, rhs: Isometry) -> Isometry {
        self.compose(&rhs)
    }
}

pub fn form_residual(m: &CMat3) -> f64 {
    let j = form_matrix();
    (m.conj_transpose() * j * *m).dist_max(&j)
}

/// Resolve the `f = 0` stratum by eigenstructure.
///
/// Floating-point eigenvalues of a nearly-defective matrix split at the cube
/// root of the perturbation, so the clustering tolerance is deliberately
/// loose; whether the matrix is actually diagonalizable is then decided by
/// the rank of `M - lambda I` via its largest 2x2 minor, which is a
/// well-conditioned question.
fn borderline_kind(m: &CMat3) -> IsometryKind {
    let scale = m.max_abs().max(1.0);
    let eig = m.eigenvalues();
    let cluster_tol = 1e-4 * scale.max(eig.iter().map(|e| e.norm()).fold(0.0, f64::max));

    // Pair up the two closest eigenvalues.
    let mut pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    pairs.sort_by(|a, b| {
        (eig[a.0] - eig[a.1])
            .norm()
            .partial_cmp(&(eig[b.0] - eig[b.1]).norm())
            .unwrap()
    });
    let (i, j) = pairs[0];
    let closest = (eig[i] - eig[j]).norm();
    let k = 3 - i - j;
    let triple = (eig[k] - eig[i]).norm().max((eig[k] - eig[j]).norm()) <= cluster_tol;

    if closest > cluster_tol {
        // Three separated eigenvalues at f ~ 0: decide by modulus.
        let off_unit = eig
            .iter()
            .map(|e| (e.norm() - 1.0).abs())
            .fold(0.0, f64::max);
        return if off_unit > 1e-6 {
            IsometryKind::Loxodromic
        } else {
            IsometryKind::Elliptic
        };
    }

    let lambda = if triple {
        (eig[0] + eig[1] + eig[2]) / cx(3.0, 0.0)
    } else {
        (eig[i] + eig[j]) / cx(2.0, 0.0)
    };
    let mut n = *m;
    for d in 0..3 {
        n.0[d][d] -= lambda;
    }

    if triple && n.max_abs() <= 1e-8 * scale {
        return IsometryKind::Identity;
    }
    // Largest 2x2 minor of N decides rank 1 vs rank 2.
    let mut minor = 0.0f64;
    for r0 in 0..3 {
        for r1 in (r0 + 1)..3 {
            for c0 in 0..3 {
                for c1 in (c0 + 1)..3 {
                    let det = n.0[r0][c0] * n.0[r1][c1] - n.0[r0][c1] * n.0[r1][c0];
                    minor = minor.max(det.norm());
                }
            }
        }
    }
    let rank2 = minor > 1e-8 * scale * scale;
    if triple {
        // Unipotent-type: any nonzero defect means parabolic.
        IsometryKind::Parabolic
    } else if rank2 {
        IsometryKind::Parabolic
    } else {
        IsometryKind::Elliptic
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::{h_translation, v_translation};
    use crate::linalg::Mat2;
    use crate::siegel::{dist, HoroCoord};
    use crate::totally_real::{embed_so21, TotallyRealPlane};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn rand_point(rng: &mut ChaCha8Rng) -> ProjPoint {
        ProjPoint::from_horo(&HoroCoord::from_real(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(0.1..10.0),
            rng.gen_range(-3.0..3.0),
        ))
    }

    fn rand_isometry(rng: &mut ChaCha8Rng) -> Isometry {
        let plane = TotallyRealPlane::new(0.0);
        let m = loop {
            let a: f64 = rng.gen_range(-1.5..1.5);
            let b = rng.gen_range(-1.5..1.5);
            let c = rng.gen_range(-1.5..1.5);
            if a.abs() > 0.2 {
                let d = (1.0 + b * c) / a;
                break Mat2::new(a, b, c, d);
            }
        };
        let g = embed_so21(&m, &plane).unwrap();
        let h = h_translation(rng.gen_range(-2.0..2.0));
        let v = v_translation(rng.gen_range(-2.0..2.0));
        h * g * v
    }

    #[test]
    fn identity_applies_trivially() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = rand_point(&mut rng);
        assert!(Isometry::identity().apply(&p).same_point(&p, 1e-14));
    }

    #[test]
    fn parabolic_fixes_infinity() {
        let inf = ProjPoint::infinity();
        let img = h_translation(3.0).apply(&inf);
        assert!(img.same_point(&inf, 1e-14));
    }

    #[test]
    fn apply_preserves_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let g = rand_isometry(&mut rng);
            let p = rand_point(&mut rng);
            let q = rand_point(&mut rng);
            let d0 = dist(&p, &q).unwrap();
            let d1 = dist(&g.apply(&p), &g.apply(&q)).unwrap();
            assert!((d0 - d1).abs() < 1e-10 * (1.0 + d0));
        }
    }

    #[test]
    fn inverse_via_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let g = rand_isometry(&mut rng);
            let prod = g.compose(&g.inverse());
            assert!(prod.pu_distance(&Isometry::identity()) < 1e-11);
        }
    }

    #[test]
    fn classify_basic_kinds() {
        assert_eq!(Isometry::identity().kind(), IsometryKind::Identity);
        assert_eq!(h_translation(1.0).kind(), IsometryKind::Parabolic);
        assert_eq!(v_translation(0.5).kind(), IsometryKind::Parabolic);
        let lox = embed_so21(&Mat2::new(2.0, 0.0, 0.0, 0.5), &TotallyRealPlane::new(0.0)).unwrap();
        assert_eq!(lox.kind(), IsometryKind::Loxodromic);
        let theta = 0.7f64;
        let rot = embed_so21(
            &Mat2::new(theta.cos(), -theta.sin(), theta.sin(), theta.cos()),
            &TotallyRealPlane::new(0.0),
        )
        .unwrap();
        assert_eq!(rot.kind(), IsometryKind::Elliptic);
    }

    #[test]
    fn classify_conjugation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let samples = [
            h_translation(2.0),
            v_translation(-1.0),
            embed_so21(&Mat2::new(2.0, 0.0, 0.0, 0.5), &TotallyRealPlane::new(0.0)).unwrap(),
            embed_so21(
                &Mat2::new(0.6f64.cos(), -0.6f64.sin(), 0.6f64.sin(), 0.6f64.cos()),
                &TotallyRealPlane::new(0.0),
            )
            .unwrap(),
        ];
        for g in samples {
            let want = g.kind();
            for _ in 0..25 {
                let h = rand_isometry(&mut rng);
                let conj = h * g * h.inverse();
                assert_eq!(conj.kind(), want, "kind changed under conjugation");
            }
        }
    }

    #[test]
    fn pu_distance_mod_cube_roots() {
        let g = h_translation(1.25);
        let omega = cx(-0.5, 0.75f64.sqrt());
        let scaled = Isometry::from_matrix_unchecked(g.matrix().scale(omega));
        assert!(g.pu_distance(&scaled) < 1e-12);
    }
}
