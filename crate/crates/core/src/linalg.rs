//! Small dense linear algebra over C^3 and 2x2 real matrices.
//!
//! Everything here is deliberately hand-rolled: the whole artifact needs only
//! 3x3 complex and 2x2 real matrices, and keeping the arithmetic explicit
//! makes the numerical error budget easy to reason about.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

pub type Cx = Complex64;

pub const fn cx(re: f64, im: f64) -> Cx {
    Complex64::new(re, im)
}

pub const ONE: Cx = cx(1.0, 0.0);
pub const ZERO: Cx = cx(0.0, 0.0);

/// Column vector in C^3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CVec3(pub [Cx; 3]);

impl CVec3 {
    pub fn new(a: Cx, b: Cx, c: Cx) -> Self {
        CVec3([a, b, c])
    }

    pub fn scale(&self, s: Cx) -> Self {
        CVec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Add for CVec3 {
    type Output = CVec3;
    fn add(self, rhs: CVec3) -> CVec3 {
        CVec3([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
        ])
    }
}

impl Sub for CVec3 {
    type Output = CVec3;
    fn sub(self, rhs: CVec3) -> CVec3 {
        CVec3([
            self.0[0] - rhs.0[0],
            self.0[1] - rhs.0[1],
            self.0[2] - rhs.0[2],
        ])
    }
}

/// 3x3 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat3(pub [[Cx; 3]; 3]);

impl CMat3 {
    pub fn identity() -> Self {
        let mut m = [[ZERO; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = ONE;
        }
        CMat3(m)
    }

    pub fn zeros() -> Self {
        CMat3([[ZERO; 3]; 3])
    }

    pub fn conj_transpose(&self) -> Self {
        let mut m = [[ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = self.0[j][i].conj();
            }
        }
        CMat3(m)
    }

    pub fn scale(&self, s: Cx) -> Self {
        let mut m = self.0;
        for row in m.iter_mut() {
            for e in row.iter_mut() {
                *e *= s;
            }
        }
        CMat3(m)
    }

    pub fn trace(&self) -> Cx {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> Cx {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Adjugate (transposed cofactor matrix); `m * adj(m) = det(m) * I`.
    pub fn adjugate(&self) -> Self {
        let m = &self.0;
        let c = |a: Cx, b: Cx, cc: Cx, d: Cx| a * d - b * cc;
        CMat3([
            [
                c(m[1][1], m[1][2], m[2][1], m[2][2]),
                -c(m[0][1], m[0][2], m[2][1], m[2][2]),
                c(m[0][1], m[0][2], m[1][1], m[1][2]),
            ],
            [
                -c(m[1][0], m[1][2], m[2][0], m[2][2]),
                c(m[0][0], m[0][2], m[2][0], m[2][2]),
                -c(m[0][0], m[0][2], m[1][0], m[1][2]),
            ],
            [
                c(m[1][0], m[1][1], m[2][0], m[2][1]),
                -c(m[0][0], m[0][1], m[2][0], m[2][1]),
                c(m[0][0], m[0][1], m[1][0], m[1][1]),
            ],
        ])
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Entrywise max-norm distance.
    pub fn dist_max(&self, other: &CMat3) -> f64 {
        let mut d = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }

    /// Second elementary symmetric function of the eigenvalues.
    pub fn sigma2(&self) -> Cx {
        let t = self.trace();
        let mut tr_sq = ZERO;
        for i in 0..3 {
            for k in 0..3 {
                tr_sq += self.0[i][k] * self.0[k][i];
            }
        }
        (t * t - tr_sq) * cx(0.5, 0.0)
    }

    /// Eigenvalues via Cardano on the characteristic cubic.
    pub fn eigenvalues(&self) -> [Cx; 3] {
        cubic_roots(-self.trace(), self.sigma2(), -self.det())
    }
}

impl Mul for CMat3 {
    type Output = CMat3;
    fn mul(self, rhs: CMat3) -> CMat3 {
        let mut m = [[ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut s = ZERO;
                for k in 0..3 {
                    s += self.0[i][k] * rhs.0[k][j];
                }
                m[i][j] = s;
            }
        }
        CMat3(m)
    }
}

impl Mul<CVec3> for CMat3 {
    type Output = CVec3;
    fn mul(self, v: CVec3) -> CVec3 {
        let mut out = [ZERO; 3];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut s = ZERO;
            for k in 0..3 {
                s += self.0[i][k] * v.0[k];
            }
            *slot = s;
        }
        CVec3(out)
    }
}

/// Roots of z^3 + a z^2 + b z + c over C (Cardano, with the numerically
/// stable branch of the resolvent).
pub fn cubic_roots(a: Cx, b: Cx, c: Cx) -> [Cx; 3] {
    // Depressed cubic t^3 + p t + q with z = t - a/3.
    let third = cx(1.0 / 3.0, 0.0);
    let shift = a * third;
    let p = b - a * a * third;
    let q = c + a * (cx(2.0, 0.0) * a * a - cx(9.0, 0.0) * b) / cx(27.0, 0.0);

    let half_q = q * cx(0.5, 0.0);
    let disc = half_q * half_q + p * p * p / cx(27.0, 0.0);
    let sq = disc.sqrt();
    // Pick the sign that avoids cancellation in -q/2 +- sqrt(disc).
    let u3 = {
        let c1 = -half_q + sq;
        let c2 = -half_q - sq;
        if c1.norm() >= c2.norm() {
            c1
        } else {
            c2
        }
    };
    if u3.norm() == 0.0 {
        return [-shift; 3];
    }
    let u = u3.cbrt();
    let omega = cx(-0.5, 0.75f64.sqrt());
    let mut roots = [ZERO; 3];
    let mut uk = u;
    for r in roots.iter_mut() {
        // t = u - p/(3u)
        *r = uk - p / (cx(3.0, 0.0) * uk) - shift;
        uk *= omega;
    }
    roots
}

/// 2x2 real matrix, the SL(2,R) workhorse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        Mat2::new(1.0, 0.0, 0.0, 1.0)
    }

    pub fn det(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Inverse assuming det = 1.
    pub fn inv(&self) -> Self {
        Mat2::new(self.0[1][1], -self.0[0][1], -self.0[1][0], self.0[0][0])
    }

    /// Moebius action on the upper half plane (and its boundary).
    pub fn moebius(&self, z: Cx) -> Cx {
        let [[a, b], [c, d]] = self.0;
        (cx(a, 0.0) * z + cx(b, 0.0)) / (cx(c, 0.0) * z + cx(d, 0.0))
    }

    pub fn dist_max(&self, other: &Mat2) -> f64 {
        let mut d = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        d
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|x| x.abs())
            .fold(0.0, f64::max)
    }

    /// Max-norm distance to +/- other, the natural PSL(2,R) comparison.
    pub fn dist_proj(&self, other: &Mat2) -> f64 {
        self.dist_max(other).min(self.dist_max(&-*other))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, r: Mat2) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        let [[p, q], [s, t]] = r.0;
        Mat2::new(a * p + b * s, a * q + b * t, c * p + d * s, c * q + d * t)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2::new(
            -self.0[0][0],
            -self.0[0][1],
            -self.0[1][0],
            -self.0[1][1],
        )
    }
}

/// Hyperbolic distance in the upper half plane, curvature -1.
pub fn uhp_dist(z1: Cx, z2: Cx) -> f64 {
    let num = (z1 - z2).norm_sqr();
    let arg = 1.0 + num / (2.0 * z1.im * z2.im);
    arg.max(1.0).acosh()
}
