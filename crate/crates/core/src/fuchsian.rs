//! Cusped Fuchsian groups uniformizing one-cusp surfaces of genus g, with the
//! boundary relator normalized to a horizontal translation of prescribed
//! length, plus Ford fundamental-domain and horoball data.
//!
//! Genus 1 uses the explicit modular punctured torus. Higher genus glues a
//! regular ideal 4g-gon along the commutator pattern with shear-free
//! (midpoint-matched) side pairings; the construction verifies numerically
//! that all ideal vertices form a single cycle and that the cycle holonomy is
//! parabolic before normalizing.

use crate::error::{Error, Result};
use crate::linalg::{cx, Cx, Mat2};
use crate::words::{Alphabet, Letter, Word};

/// A one-cusp genus-g surface group in SL(2,R), boundary relator normalized
/// to `zeta -> zeta + r` (up to sign) fixing infinity.
#[derive(Debug, Clone)]
pub struct FuchsianGroup {
    pub genus: usize,
    /// Generators in the order `a1..ag, b1..bg`.
    pub gens: Vec<Mat2>,
    /// Cusp translation length of the boundary relator.
    pub r: f64,
}

impl FuchsianGroup {
    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.genus)
    }

    /// `prod_i [a_i, b_i]` as a word in this group's own letters.
    pub fn boundary_relator_word(&self) -> Word {
        self.alphabet().surface_relator()
    }

    pub fn eval_letter(&self, l: &Letter) -> Mat2 {
        let m = self.gens[l.gen];
        if l.inv {
            m.inv()
        } else {
            m
        }
    }

    pub fn eval(&self, w: &Word) -> Mat2 {
        let mut m = Mat2::identity();
        for l in &w.0 {
            m = m * self.eval_letter(l);
        }
        m
    }

    pub fn boundary_relator(&self) -> Mat2 {
        self.eval(&self.boundary_relator_word())
    }
}

/// The modular punctured torus: `A = [[1,1],[1,2]]`, `B = [[1,-1],[-1,2]]`,
/// conjugated so the commutator `[a,b]` fixes infinity and translates by `r`.
pub fn punctured_torus(r: f64) -> Result<FuchsianGroup> {
    assert!(r > 0.0, "cusp length must be positive");
    let a = Mat2::new(1.0, 1.0, 1.0, 2.0);
    let b = Mat2::new(1.0, -1.0, -1.0, 2.0);
    normalize_to_cusp(vec![a, b], 1, r)
}

/// Side pairings of a regular ideal 4g-gon in the commutator pattern,
/// normalized like [`punctured_torus`]. Pairings match the points nearest
/// the polygon center, which makes every gluing shear-free; single vertex
/// cycle and parabolicity of the cycle holonomy are verified numerically.
pub fn ideal_polygon_group(genus: usize, r: f64) -> Result<FuchsianGroup> {
    assert!(genus >= 1, "genus must be at least 1");
    assert!(r > 0.0, "cusp length must be positive");
    let n = 4 * genus;
    let vertices: Vec<Cx> = (0..n)
        .map(|j| Cx::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64))
        .collect();
    let midpoints: Vec<Cx> = (0..n)
        .map(|j| {
            let half_gap = std::f64::consts::PI / n as f64;
            let dir = std::f64::consts::PI * (2.0 * j as f64 + 1.0) / n as f64;
            let m = (1.0 - half_gap.sin()) / half_gap.cos();
            Cx::from_polar(m, dir)
        })
        .collect();

    // Pairing for block k: a_{k+1} maps side 4k+2 onto side 4k reversing the
    // boundary orientation; b_{k+1} maps side 4k+3 onto side 4k+1.
    let mut gens_disk = Vec::with_capacity(2 * genus);
    let side = |j: usize| (vertices[j % n], vertices[(j + 1) % n], midpoints[j % n]);
    for k in 0..genus {
        let (p0, p1, pm) = side(4 * k + 2);
        let (q0, q1, qm) = side(4 * k);
        gens_disk.push(moebius_three_point((p0, p1, pm), (q1, q0, qm)));
    }
    for k in 0..genus {
        let (p0, p1, pm) = side(4 * k + 3);
        let (q0, q1, qm) = side(4 * k + 1);
        gens_disk.push(moebius_three_point((p0, p1, pm), (q1, q0, qm)));
    }

    // Single vertex cycle: union-find over numerically matched vertex images.
    let mut class: Vec<usize> = (0..n).collect();
    fn find(class: &mut Vec<usize>, mut i: usize) -> usize {
        while class[i] != i {
            class[i] = class[class[i]];
            i = class[i];
        }
        i
    }
    let identify = |class: &mut Vec<usize>, g: &CM2, src: usize, dst_hint: &[Cx]| -> Result<usize> {
        let img = g.moebius(dst_hint[src]);
        let (j, err) = dst_hint
            .iter()
            .enumerate()
            .map(|(j, v)| (j, (img - v).norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if err > 1e-9 {
            return Err(Error::Construction(format!(
                "side pairing does not permute the ideal vertices (error {err:.2e})"
            )));
        }
        let (ra, rb) = (find(class, src), find(class, j));
        class[ra] = rb;
        Ok(j)
    };
    for k in 0..genus {
        for (gi, s) in [(k, 4 * k + 2), (genus + k, 4 * k + 3)] {
            let g = &gens_disk[gi];
            identify(&mut class, g, s % n, &vertices)?;
            identify(&mut class, g, (s + 1) % n, &vertices)?;
        }
    }
    let root0 = find(&mut class, 0);
    for i in 1..n {
        if find(&mut class, i) != root0 {
            return Err(Error::Construction(
                "ideal vertices split into more than one cycle".into(),
            ));
        }
    }

    // Transport to the upper half plane and realify.
    let cayley = CM2 {
        a: cx(0.0, 1.0),
        b: cx(0.0, 1.0),
        c: cx(-1.0, 0.0),
        d: cx(1.0, 0.0),
    };
    let cayley_inv = cayley.inverse();
    let mut gens = Vec::with_capacity(2 * genus);
    for g in &gens_disk {
        let h = cayley.mul(g).mul(&cayley_inv);
        let det = h.det();
        let s = det.sqrt();
        let hn = h.scale(ONE_C / s);
        let im = [hn.a, hn.b, hn.c, hn.d]
            .iter()
            .map(|z| z.im.abs())
            .fold(0.0, f64::max);
        let scale = [hn.a, hn.b, hn.c, hn.d]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if im > 1e-9 * (1.0 + scale) {
            return Err(Error::Construction(format!(
                "disk pairing did not conjugate into SL(2,R); imaginary residue {im:.2e}"
            )));
        }
        gens.push(Mat2::new(hn.a.re, hn.b.re, hn.c.re, hn.d.re));
    }

    normalize_to_cusp(gens, genus, r)
}

const ONE_C: Cx = cx(1.0, 0.0);

/// Conjugate/relabel/rescale so the boundary relator becomes the translation
/// `zeta -> zeta + r` fixing infinity.
fn normalize_to_cusp(mut gens: Vec<Mat2>, genus: usize, r: f64) -> Result<FuchsianGroup> {
    let alphabet = Alphabet::new(genus);
    let eval = |gens: &[Mat2], w: &Word| -> Mat2 {
        let mut m = Mat2::identity();
        for l in &w.0 {
            let g = gens[l.gen];
            m = m * if l.inv { g.inv() } else { g };
        }
        m
    };
    let relator = alphabet.surface_relator();

    let rel = eval(&gens, &relator);
    if (rel.trace().abs() - 2.0).abs() > 1e-9 {
        return Err(Error::Construction(format!(
            "boundary relator is not parabolic: |trace| = {}",
            rel.trace().abs()
        )));
    }
    if rel.dist_proj(&Mat2::identity()) < 1e-9 {
        return Err(Error::Construction("boundary relator is trivial".into()));
    }

    // Move the parabolic fixed point to infinity.
    let [[a, _b], [c, d]] = rel.0;
    if c.abs() > 1e-9 {
        let p = (a - d) / (2.0 * c);
        let q = Mat2::new(0.0, -1.0, 1.0, -p);
        let qi = q.inv();
        for g in gens.iter_mut() {
            *g = q * *g * qi;
        }
    }

    // Orient: translation amount must be positive; if not, relabel
    // (a_i, b_i) -> (b_{g+1-i}, a_{g+1-i}), which inverts the relator.
    let rel = eval(&gens, &relator);
    if rel.0[1][0].abs() > 1e-9 * rel.max_abs() {
        return Err(Error::Construction(
            "relator does not fix infinity after conjugation".into(),
        ));
    }
    let amount = rel.0[0][1] / rel.0[0][0];
    if amount.abs() < 1e-9 {
        return Err(Error::Construction("relator translation is zero".into()));
    }
    if amount < 0.0 {
        let mut relabeled = vec![Mat2::identity(); 2 * genus];
        for i in 0..genus {
            relabeled[i] = gens[2 * genus - 1 - i]; // a_i' = b_{g-i}
            relabeled[genus + i] = gens[genus - 1 - i]; // b_i' = a_{g-i}
        }
        gens = relabeled;
    }

    // Rescale the translation length to r.
    let rel = eval(&gens, &relator);
    let amount = rel.0[0][1] / rel.0[0][0];
    let lam = (r / amount).sqrt();
    let dmat = Mat2::new(lam, 0.0, 0.0, 1.0 / lam);
    let dinv = dmat.inv();
    for g in gens.iter_mut() {
        *g = dmat * *g * dinv;
    }

    let group = FuchsianGroup { genus, gens, r };
    let rel = group.boundary_relator();
    let target = Mat2::new(1.0, r, 0.0, 1.0);
    if rel.dist_proj(&target) > 1e-10 * (1.0 + r) {
        return Err(Error::Construction(format!(
            "relator normalization failed: residual {}",
            rel.dist_proj(&target)
        )));
    }
    Ok(group)
}

/// Minimal complex 2x2 helper for the disk-model construction.
#[derive(Debug, Clone, Copy)]
struct CM2 {
    a: Cx,
    b: Cx,
    c: Cx,
    d: Cx,
}

impl CM2 {
    fn mul(&self, o: &CM2) -> CM2 {
        CM2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    fn det(&self) -> Cx {
        self.a * self.d - self.b * self.c
    }

    fn inverse(&self) -> CM2 {
        let det = self.det();
        CM2 {
            a: self.d / det,
            b: -self.b / det,
            c: -self.c / det,
            d: self.a / det,
        }
    }

    fn scale(&self, s: Cx) -> CM2 {
        CM2 {
            a: self.a * s,
            b: self.b * s,
            c: self.c * s,
            d: self.d * s,
        }
    }

    fn moebius(&self, z: Cx) -> Cx {
        (self.a * z + self.b) / (self.c * z + self.d)
    }
}

/// Moebius map sending one ordered triple to another.
fn moebius_three_point(src: (Cx, Cx, Cx), dst: (Cx, Cx, Cx)) -> CM2 {
    // f(z) = cross ratio map sending (z1,z2,z3) to (0,1,inf).
    fn to_standard(t: (Cx, Cx, Cx)) -> CM2 {
        let (z1, z2, z3) = t;
        CM2 {
            a: z2 - z3,
            b: -z1 * (z2 - z3),
            c: z2 - z1,
            d: -z3 * (z2 - z1),
        }
    }
    to_standard(dst).inverse().mul(&to_standard(src))
}

/// One isometric circle `|c z + d| = 1` of a group element, together with the
/// word producing it.
#[derive(Debug, Clone)]
pub struct FordCircle {
    pub center: f64,
    pub radius: f64,
    pub word: Word,
    pub mat: Mat2,
}

/// Ford-style fundamental domain data: the strip between the two unbounded
/// sides `{Re = x0}`, `{Re = x0 + r}` minus the isometric-circle disks.
#[derive(Debug, Clone)]
pub struct FundamentalData {
    /// Left unbounded side; the right one is at `x0 + r`.
    pub x0: f64,
    pub r: f64,
    /// Deduplicated isometric circles from words up to the search depth,
    /// centers wrapped into one period.
    pub circles: Vec<FordCircle>,
    /// Indices of circles that contribute boundary arcs (the bounded sides);
    /// their union of disks equals the union over all circles inside the
    /// strip, so membership tests may restrict to these.
    pub visible: Vec<usize>,
    /// Max height (= max radius) over all collected circles.
    pub max_circle_height: f64,
}

pub const DEFAULT_FORD_DEPTH: usize = 6;

impl FundamentalData {
    /// Signed clearance of `zeta` from the circle family: positive iff
    /// outside every isometric circle (x-periodicity built in).
    pub fn circle_margin(&self, zeta: Cx) -> f64 {
        let mut worst = f64::INFINITY;
        for (ci, c) in self.circles.iter().enumerate() {
            let _ = ci;
            let dx = zeta.re - c.center;
            let dxw = dx - self.r * (dx / self.r).round();
            let d = (dxw * dxw + zeta.im * zeta.im).sqrt() - c.radius;
            worst = worst.min(d);
        }
        worst
    }

    /// Most violated circle at `zeta`, with the integer period shift that
    /// brings the circle to the point.
    fn worst_circle(&self, zeta: Cx) -> Option<(usize, i64, f64)> {
        let mut best: Option<(usize, i64, f64)> = None;
        for (i, c) in self.circles.iter().enumerate() {
            let dx = zeta.re - c.center;
            let m = (dx / self.r).round();
            let dxw = dx - self.r * m;
            let d = (dxw * dxw + zeta.im * zeta.im).sqrt() - c.radius;
            if best.is_none() || d < best.unwrap().2 {
                best = Some((i, m as i64, d));
            }
        }
        best
    }

    /// Membership in the Ford domain ignoring the strip condition (i.e. in
    /// the union of all horizontal translates of the closed domain).
    pub fn in_ford_mod_strip(&self, zeta: Cx, tol: f64) -> bool {
        self.circle_margin(zeta) >= -tol
    }

    /// Full Ford-domain membership margin: min of circle clearance and strip
    /// clearance.
    pub fn membership_margin(&self, zeta: Cx) -> f64 {
        let strip = (zeta.re - self.x0).min(self.x0 + self.r - zeta.re);
        strip.min(self.circle_margin(zeta))
    }

    /// A point comfortably in the interior of the domain.
    pub fn interior_point(&self) -> Cx {
        cx(
            self.x0 + 0.5 * self.r,
            (1.15 * self.max_circle_height).max(0.5 * self.r),
        )
    }
}

/// Collect, wrap, deduplicate and prune the isometric circles of all reduced
/// words up to `depth`.
pub fn fundamental_data(group: &FuchsianGroup, depth: usize) -> Result<FundamentalData> {
    let r = group.r;
    let x0 = -0.5 * r;
    let relator = group.boundary_relator_word();

    let mut circles: Vec<FordCircle> = Vec::new();
    let gens: Vec<usize> = (0..2 * group.genus).collect();
    crate::words::for_each_reduced_word(&gens, depth, |w| {
        let m = group.eval(w);
        let c = m.0[1][0];
        if c.abs() < 1e-9 {
            return; // fixes infinity, no isometric circle
        }
        let center = -m.0[1][1] / c;
        let radius = 1.0 / c.abs();
        if radius < 1e-7 * r {
            return;
        }
        // Wrap the center into [x0, x0 + r) by composing with relator powers.
        let k = ((center - x0) / r).floor();
        let center_w = center - k * r;
        let (word, mat) = if k == 0.0 {
            (w.clone(), m)
        } else {
            let shift = relator.pow(k as i64);
            (w.concat(&shift), m * group.eval(&shift))
        };
        // Dedup by geometry, keeping the shortest word.
        for c2 in circles.iter_mut() {
            if (c2.center - center_w).abs() < 1e-9 * (1.0 + r) && (c2.radius - radius).abs() < 1e-9
            {
                if word.len() < c2.word.len() {
                    *c2 = FordCircle {
                        center: center_w,
                        radius,
                        word,
                        mat,
                    };
                }
                return;
            }
        }
        circles.push(FordCircle {
            center: center_w,
            radius,
            word,
            mat,
        });
    });

    if circles.is_empty() {
        return Err(Error::FordDepth { depth });
    }
    circles.sort_by(|a, b| b.radius.partial_cmp(&a.radius).unwrap());
    let max_circle_height = circles[0].radius;

    // Prune circles whose boundary arc is strictly covered by other disks
    // (for half-disks anchored on the real axis, arc coverage implies disk
    // coverage). Periodic translates participate in the covering.
    let covered = |i: usize, circles: &[FordCircle]| -> bool {
        let ci = &circles[i];
        let samples = 64;
        'arc: for k in 0..=samples {
            let t = std::f64::consts::PI * k as f64 / samples as f64;
            let p = cx(ci.center + ci.radius * t.cos(), ci.radius * t.sin());
            for (j, cj) in circles.iter().enumerate() {
                if j == i {
                    continue;
                }
                let dx = p.re - cj.center;
                let dxw = dx - r * (dx / r).round();
                if (dxw * dxw + p.im * p.im).sqrt() < cj.radius - 1e-12 {
                    continue 'arc;
                }
            }
            return false; // found an uncovered arc point
        }
        true
    };
    let visible: Vec<usize> = (0..circles.len())
        .filter(|&i| !covered(i, &circles))
        .collect();

    // Closure check: along the real axis every point of one period must be
    // strictly under some disk, except tangency points of adjacent circles
    // (ideal vertices of the domain).
    let grid = 2048;
    for k in 0..grid {
        let x = x0 + r * (k as f64 + 0.5) / grid as f64;
        let inside = circles.iter().any(|c| {
            let dx = x - c.center;
            let dxw = dx - r * (dx / r).round();
            dxw.abs() < c.radius - 1e-9
        });
        if !inside {
            let near_endpoint = circles.iter().any(|c| {
                let for_ends = |e: f64| {
                    let dx = x - e;
                    (dx - r * (dx / r).round()).abs() < 1e-3 * r
                };
                for_ends(c.center - c.radius) || for_ends(c.center + c.radius)
            });
            if !near_endpoint {
                return Err(Error::FordDepth { depth });
            }
        }
    }

    Ok(FundamentalData {
        x0,
        r,
        circles,
        visible,
        max_circle_height,
    })
}

/// Greedy Ford reduction of a boundary-or-interior UHP point into the union
/// of horizontal translates of the Ford domain. Returns the applied word (in
/// the group's letters) and the number of non-peripheral letters used;
/// relator-power factors move along the cusp and are not charged.
pub struct FordReduction {
    pub word: Word,
    pub charged_letters: usize,
    pub landed: bool,
}

pub fn ford_reduce(
    group: &FuchsianGroup,
    fund: &FundamentalData,
    mut zeta: Cx,
    letter_budget: usize,
) -> FordReduction {
    let relator = group.boundary_relator_word();
    let mut word = Word::empty();
    let mut charged = 0usize;
    for _ in 0..256 {
        match fund.worst_circle(zeta) {
            None => break,
            Some((_, _, d)) if d >= -1e-12 => {
                return FordReduction {
                    word,
                    charged_letters: charged,
                    landed: true,
                };
            }
            Some((i, m, _)) => {
                // Element whose isometric circle sits at the wrapped position:
                // g . relator^{-m}; the relator powers are cusp moves.
                let c = &fund.circles[i];
                let step = if m == 0 {
                    c.word.clone()
                } else {
                    c.word.concat(&relator.pow(-m))
                };
                charged += c.word.len();
                if charged > letter_budget {
                    return FordReduction {
                        word,
                        charged_letters: charged,
                        landed: false,
                    };
                }
                let mat = group.eval(&step);
                zeta = mat.moebius(zeta);
                word = step.concat(&word);
            }
        }
    }
    let landed = fund.circle_margin(zeta) >= -1e-12;
    FordReduction {
        word,
        charged_letters: charged,
        landed,
    }
}

/// Three nested horoballs at infinity in the plane carrying the group:
/// `B = {eta > cut_outer}`, `b = {eta > cut_middle}`, `beta = {eta > cut_inner}`
/// with `cut_outer < cut_middle < cut_inner`, all above every bounded side.
#[derive(Debug, Clone, Copy)]
pub struct HoroballTriple {
    pub cut_outer: f64,
    pub cut_middle: f64,
    pub cut_inner: f64,
}

impl HoroballTriple {
    /// u-coordinate cuts in the ambient plane chart (`u = eta^2`).
    pub fn u_outer(&self) -> f64 {
        self.cut_outer * self.cut_outer
    }
    pub fn u_middle(&self) -> f64 {
        self.cut_middle * self.cut_middle
    }
    pub fn u_inner(&self) -> f64 {
        self.cut_inner * self.cut_inner
    }
}

/// Nested cuts at fixed ratios above the tallest bounded side. The ratios are
/// kept close to 1 so the separation offset (and with it the matrix entries
/// of the embedded factors) stays small enough for the 1e-12 unitarity
/// budget of the construction.
pub fn horoball_triple(fund: &FundamentalData) -> HoroballTriple {
    let h = fund.max_circle_height;
    HoroballTriple {
        cut_outer: 1.25 * h,
        cut_middle: 1.5 * h,
        cut_inner: 1.8 * h,
    }
}
