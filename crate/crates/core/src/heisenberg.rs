//! The Heisenberg group at infinity, horizontal/vertical translations, and
//! the quotient by a horizontal translation subgroup.
//!
//! The stabilizer of infinity acts simply transitively on each horosphere
//! with group law `(z1,v1)(z2,v2) = (z1+z2, v1+v2+2 Im(z1 conj(z2)))`. The
//! quotient of `Y = H^2_C u (boundary minus infinity)` by all horizontal
//! translations `H_r` is globally coordinatized by `(y, w, u)` with
//! `w = v + 2xy`; the plane `{x = 0}` is a global section of the quotient
//! map.

use crate::isometry::Isometry;
use crate::linalg::{cx, CMat3, Cx};
use crate::siegel::HoroCoord;

/// Element of the Heisenberg group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisElem {
    pub z: Cx,
    pub v: f64,
}

impl HeisElem {
    pub fn new(z: Cx, v: f64) -> Self {
        HeisElem { z, v }
    }

    pub fn identity() -> Self {
        HeisElem::new(cx(0.0, 0.0), 0.0)
    }

    pub fn inverse(&self) -> Self {
        HeisElem::new(-self.z, -self.v)
    }
}

/// Heisenberg product `(a.z + b.z, a.v + b.v + 2 Im(a.z conj(b.z)))`.
pub fn heis_mul(a: &HeisElem, b: &HeisElem) -> HeisElem {
    HeisElem {
        z: a.z + b.z,
        v: a.v + b.v + 2.0 * (a.z * b.z.conj()).im,
    }
}

/// Matrix of the Heisenberg translation by `(zeta, s)` acting on lifts.
///
/// Derived from the requirement that the horospherical action is
/// `(z, u, v) -> (z + zeta, u, v + s + 2 Im(zeta conj(z)))`; unit tests hold
/// the matrix to that contract at random points rather than trusting the
/// derivation.
pub fn heis_translation(g: &HeisElem) -> Isometry {
    let mut m = CMat3::identity();
    m.0[0][2] = g.z;
    m.0[1][0] = g.z.conj();
    m.0[1][2] = cx(g.z.norm_sqr() * 0.5, -g.v * 0.5);
    Isometry::try_new(m).expect("Heisenberg translations preserve the form")
}

/// Horizontal translation `H_r : (x,y,u,v) -> (x+r, y, u, v-2ry)`.
pub fn h_translation(r: f64) -> Isometry {
    heis_translation(&HeisElem::new(cx(r, 0.0), 0.0))
}

/// Vertical translation `V_t : (x,y,u,v) -> (x, y, u, v+t)`.
pub fn v_translation(t: f64) -> Isometry {
    heis_translation(&HeisElem::new(cx(0.0, 0.0), t))
}

/// Coordinates on the quotient of `Y` by the horizontal translations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuotientCoord {
    pub y: f64,
    pub w: f64,
    pub u: f64,
}

impl QuotientCoord {
    pub fn new(y: f64, w: f64, u: f64) -> Self {
        QuotientCoord { y, w, u }
    }
}

/// Quotient map `(x,y,u,v) -> (y, v + 2xy, u)`, constant on H_r-orbits.
pub fn quotient_map(p: &HoroCoord) -> QuotientCoord {
    QuotientCoord {
        y: p.y(),
        w: p.v + 2.0 * p.x() * p.y(),
        u: p.u,
    }
}

/// The section landing on the plane `{x = 0}`: inverse of `quotient_map`
/// restricted to that plane.
pub fn section_p(q: &QuotientCoord) -> HoroCoord {
    HoroCoord::from_real(0.0, q.y, q.u, q.w)
}

/// Action of the full Heisenberg translation in horospherical coordinates;
/// the independent formula the matrices are tested against.
pub fn heis_action_coords(g: &HeisElem, p: &HoroCoord) -> HoroCoord {
    HoroCoord {
        z: g.z + p.z,
        u: p.u,
        v: g.v + p.v + 2.0 * (g.z * p.z.conj()).im,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::siegel::ProjPoint;
    use crate::totally_real::{project_extended, TotallyRealPlane};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn rand_horo(rng: &mut ChaCha8Rng) -> HoroCoord {
        HoroCoord::from_real(
            rng.gen_range(-4.0..4.0),
            rng.gen_range(-4.0..4.0),
            rng.gen_range(0.01..50.0),
            rng.gen_range(-10.0..10.0),
        )
    }

    #[test]
    fn heis_mul_examples() {
        let e = HeisElem::identity();
        let g = HeisElem::new(cx(0.3, -0.7), 2.0);
        assert_eq!(heis_mul(&e, &g), g);
        let a = HeisElem::new(cx(1.0, 0.0), 0.0);
        let b = HeisElem::new(cx(0.0, 1.0), 0.0);
        let ab = heis_mul(&a, &b);
        assert!((ab.z - cx(1.0, 1.0)).norm() < 1e-15 && (ab.v + 2.0).abs() < 1e-15);
        let prod = heis_mul(&g, &g.inverse());
        assert!((prod.z.norm()) < 1e-15 && prod.v.abs() < 1e-15);
    }

    #[test]
    fn heis_mul_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..2000 {
            let g = |rng: &mut ChaCha8Rng| {
                HeisElem::new(
                    cx(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                    rng.gen_range(-2.0..2.0),
                )
            };
            let (a, b, c) = (g(&mut rng), g(&mut rng), g(&mut rng));
            let lhs = heis_mul(&heis_mul(&a, &b), &c);
            let rhs = heis_mul(&a, &heis_mul(&b, &c));
            assert!((lhs.z - rhs.z).norm() < 1e-12 && (lhs.v - rhs.v).abs() < 1e-12);
        }
    }

    #[test]
    fn h_translation_formula_example() {
        // H_2 applied to (x=1,y=3,u=5,v=7) -> (3,3,5,-5)
        let p = HoroCoord::from_real(1.0, 3.0, 5.0, 7.0);
        let img = h_translation(2.0)
            .apply(&ProjPoint::from_horo(&p))
            .to_horo()
            .unwrap();
        assert!((img.x() - 3.0).abs() < 1e-12);
        assert!((img.y() - 3.0).abs() < 1e-12);
        assert!((img.u - 5.0).abs() < 1e-12);
        assert!((img.v + 5.0).abs() < 1e-12);
    }

    #[test]
    fn matrix_action_matches_formula() {
        // The oracle that validates the matrix realizations.
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10_000 {
            let g = HeisElem::new(
                cx(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
                rng.gen_range(-3.0..3.0),
            );
            let p = rand_horo(&mut rng);
            let via_matrix = heis_translation(&g)
                .apply(&ProjPoint::from_horo(&p))
                .to_horo()
                .unwrap();
            let via_formula = heis_action_coords(&g, &p);
            let scale = 1.0 + p.z.norm() + p.u + p.v.abs() + g.z.norm() + g.v.abs();
            assert!((via_matrix.z - via_formula.z).norm() < 1e-10 * scale);
            assert!((via_matrix.u - via_formula.u).abs() < 1e-10 * scale);
            assert!((via_matrix.v - via_formula.v).abs() < 1e-10 * scale * scale);
        }
    }

    #[test]
    fn translations_commute_and_compose() {
        let h = h_translation(1.7);
        let v = v_translation(-2.3);
        assert!((h * v).pu_distance(&(v * h)) < 1e-12);
        let sum = h_translation(1.7 + 0.6);
        assert!((h_translation(0.6) * h).pu_distance(&sum) < 1e-12);
    }

    #[test]
    fn quotient_map_examples() {
        let q = quotient_map(&HoroCoord::from_real(2.0, 1.0, 3.0, 4.0));
        assert_eq!(q, QuotientCoord::new(1.0, 8.0, 3.0));
        let on_p = quotient_map(&HoroCoord::from_real(0.0, -1.5, 0.25, 6.0));
        assert_eq!(on_p, QuotientCoord::new(-1.5, 6.0, 0.25));
    }

    #[test]
    fn quotient_map_orbit_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let h5 = h_translation(5.0);
        for _ in 0..2000 {
            let p = rand_horo(&mut rng);
            let moved = h5.apply(&ProjPoint::from_horo(&p)).to_horo().unwrap();
            let q0 = quotient_map(&p);
            let q1 = quotient_map(&moved);
            assert!((q0.y - q1.y).abs() < 1e-10);
            assert!((q0.w - q1.w).abs() < 1e-9 * (1.0 + q0.w.abs()));
            assert!((q0.u - q1.u).abs() < 1e-10 * (1.0 + q0.u));
        }
    }

    #[test]
    fn section_round_trip_and_equivariance() {
        let q = QuotientCoord::new(1.0, 8.0, 3.0);
        let p = section_p(&q);
        assert_eq!(p, HoroCoord::from_real(0.0, 1.0, 3.0, 8.0));
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..10_000 {
            let q = QuotientCoord::new(
                rng.gen_range(-4.0..4.0),
                rng.gen_range(-10.0..10.0),
                rng.gen_range(0.0..20.0),
            );
            let back = quotient_map(&section_p(&q));
            assert!((back.y - q.y).abs() < 1e-12);
            assert!((back.w - q.w).abs() < 1e-12);
            assert!((back.u - q.u).abs() < 1e-12);
        }
        // V_t acts on the quotient by w -> w + t through the section.
        let t = 2.75;
        let vt = v_translation(t);
        for _ in 0..100 {
            let q = QuotientCoord::new(
                rng.gen_range(-4.0..4.0),
                rng.gen_range(-10.0..10.0),
                rng.gen_range(0.01..20.0),
            );
            let moved = vt
                .apply(&ProjPoint::from_horo(&section_p(&q)))
                .to_horo()
                .unwrap();
            let qm = quotient_map(&moved);
            assert!((qm.w - (q.w + t)).abs() < 1e-10);
            assert!((qm.y - q.y).abs() < 1e-12);
        }
    }

    /// Sampled version of the precompactness facts: the quotient image of a
    /// horoball-complement preimage has bounded w-extent, monotone in the
    /// height cut.
    #[test]
    fn horoball_complement_w_extent_bounded_and_monotone() {
        let plane = TotallyRealPlane::new(0.0);
        let mut extents = Vec::new();
        for h in [1.0, 2.0, 4.0] {
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            let u_cut = h * h;
            let mut w_max = 0.0f64;
            let mut members = 0usize;
            for _ in 0..10_000 {
                let q = QuotientCoord::new(
                    rng.gen_range(-3.0 * h..3.0 * h),
                    rng.gen_range(-3.0 * u_cut..3.0 * u_cut),
                    10f64.powf(rng.gen_range(-3.0..(1.0 + u_cut.log10()))),
                );
                let p = ProjPoint::from_horo(&section_p(&q));
                let proj = project_extended(&plane, &p).unwrap();
                let horo = proj.to_horo().unwrap();
                if horo.u <= u_cut {
                    members += 1;
                    w_max = w_max.max(q.w.abs());
                }
            }
            assert!(members > 100, "sampling produced too few members");
            // Bounded: nothing near the outer edge of the search box.
            assert!(w_max < 2.9 * u_cut, "w extent {} not bounded", w_max);
            extents.push(w_max);
        }
        assert!(extents[0] <= extents[1] + 1e-9 && extents[1] <= extents[2] + 1e-9);
    }
}
