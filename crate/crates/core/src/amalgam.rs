//! The main construction: two cusped Fuchsian groups embedded as stabilizers
//! of parallel totally real planes, amalgamated along the shared horizontal
//! translation `d = H_r`.
//!
//! Factor 1 sits on `Sigma_0`, factor 2 on `Sigma_t` with the vertical offset
//! `t` chosen (by doubling) so that the quotient images of the two horoball
//! complements are separated in the `w = v + 2xy` coordinate. The boundary
//! relator of factor 1 maps to `d`; factor 2's generators are relabeled so
//! its boundary relator maps to `d^{-1}`, which makes the full genus-g
//! surface relation collapse to the identity.

use crate::error::{Error, Result};
use crate::fuchsian::{
    ford_reduce, fundamental_data, horoball_triple, ideal_polygon_group, punctured_torus,
    FuchsianGroup, FundamentalData, HoroballTriple, DEFAULT_FORD_DEPTH,
};
use crate::heisenberg::{h_translation, quotient_map, section_p, QuotientCoord};
use crate::isometry::{Isometry, IsometryKind};
use crate::linalg::Cx;
use crate::siegel::{HoroCoord, ProjPoint};
use crate::totally_real::{embed_so21, project_extended, TotallyRealPlane};
use crate::words::{Alphabet, Letter, Word};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Presentation bookkeeping for the genus `g1 + g2` surface split along the
/// separating curve `gamma = prod_{i<=g1} [a_i, b_i]`.
#[derive(Debug, Clone, Copy)]
pub struct SurfacePresentation {
    pub g1: usize,
    pub g2: usize,
}

impl SurfacePresentation {
    pub fn genus(&self) -> usize {
        self.g1 + self.g2
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.genus())
    }

    /// Full surface relator `prod_i [a_i, b_i]`.
    pub fn relator(&self) -> Word {
        self.alphabet().surface_relator()
    }

    /// The separating element: product of the first `g1` commutators.
    pub fn gamma(&self) -> Word {
        let g = self.genus();
        let mut w = Word::empty();
        for i in 0..self.g1 {
            w = w.concat(&Word::commutator(i, g + i));
        }
        w
    }

    /// Which factor an amalgam generator belongs to (0 or 1).
    pub fn factor_of_gen(&self, gen: usize) -> usize {
        let g = self.genus();
        let k = if gen < g { gen } else { gen - g };
        usize::from(k >= self.g1)
    }

    /// Boundary relator of factor `m` spelled in amalgam letters. Factor 1's
    /// evaluates to `d`, factor 2's to `d^{-1}`.
    pub fn factor_relator(&self, m: usize) -> Word {
        let g = self.genus();
        let mut w = Word::empty();
        let range = if m == 0 { 0..self.g1 } else { self.g1..g };
        for i in range {
            w = w.concat(&Word::commutator(i, g + i));
        }
        w
    }

    /// `+1` if the factor relator maps to `d`, `-1` if to `d^{-1}`.
    pub fn factor_relator_power(&self, m: usize) -> i64 {
        if m == 0 {
            1
        } else {
            -1
        }
    }

    /// Translate an amalgam generator index into (factor, generator index in
    /// that factor's own alphabet). Factor 2 generators are relabeled
    /// `(a_{g1+j}, b_{g1+j}) = (beta_{g2-j}, alpha_{g2-j})` so that its
    /// boundary relator inverts.
    pub fn to_factor_gen(&self, gen: usize) -> (usize, usize) {
        let g = self.genus();
        let (is_b, k) = if gen < g { (false, gen) } else { (true, gen - g) };
        if k < self.g1 {
            let fg = if is_b { self.g1 + k } else { k };
            (0, fg)
        } else {
            let j = k - self.g1; // 0-based position within factor 2
            let swapped = self.g2 - 1 - j;
            let fg = if is_b { swapped } else { self.g2 + swapped };
            (1, fg)
        }
    }

    /// Inverse of [`Self::to_factor_gen`], for converting factor-level words
    /// (e.g. Ford side pairings) into amalgam letters.
    pub fn from_factor_gen(&self, m: usize, fg: usize) -> usize {
        let g = self.genus();
        if m == 0 {
            if fg < self.g1 {
                fg
            } else {
                g + (fg - self.g1)
            }
        } else {
            let (is_alpha, idx) = if fg < self.g2 {
                (true, fg)
            } else {
                (false, fg - self.g2)
            };
            let j = self.g2 - 1 - idx;
            if is_alpha {
                g + self.g1 + j
            } else {
                self.g1 + j
            }
        }
    }

    pub fn map_factor_word(&self, m: usize, w: &Word) -> Word {
        Word::from_letters(
            w.0.iter()
                .map(|l| Letter::new(self.from_factor_gen(m, l.gen), l.inv)),
        )
    }
}

/// Separation measurement: sampled `w`-extent of each factor's horoball
/// complement preimage about its own plane. The sets are symmetric under the
/// reflection through the plane, so the margin at vertical offset `t` is
/// `t/2 - max(extent)`.
#[derive(Debug, Clone)]
pub struct SeparationData {
    pub w_extent: [f64; 2],
    pub samples_per_factor: usize,
    pub seed: u64,
}

impl SeparationData {
    pub fn margin(&self, t: f64) -> f64 {
        0.5 * t - self.w_extent[0].max(self.w_extent[1])
    }
}

/// One embedded factor.
#[derive(Debug, Clone)]
pub struct FactorData {
    pub group: FuchsianGroup,
    pub fund: FundamentalData,
    pub horoballs: HoroballTriple,
    pub plane: TotallyRealPlane,
    pub v_offset: f64,
}

impl FactorData {
    /// UHP chart coordinate of the extended projection onto this factor's
    /// plane.
    pub fn chart_of_projection(&self, p: &ProjPoint) -> Result<Cx> {
        let pr = project_extended(&self.plane, p)?;
        let h = pr.to_horo()?;
        Ok(self.plane.chart_inv(&h))
    }
}

/// Section of the quotient by the horizontal translations, blended between
/// the two factor hyperplanes over a band in the `w` coordinate.
#[derive(Debug, Clone, Copy)]
pub struct Section {
    pub w_lo: f64,
    pub w_hi: f64,
    pub blend_fraction: f64,
}

impl Section {
    /// Blend weight toward factor 2 as a C^2 function of `w` (quintic
    /// smoothstep).
    pub fn blend(&self, w: f64) -> f64 {
        let x = ((w - self.w_lo) / (self.w_hi - self.w_lo)).clamp(0.0, 1.0);
        x * x * x * (10.0 - 15.0 * x + 6.0 * x * x)
    }
}

/// The assembled representation.
#[derive(Debug, Clone)]
pub struct AmalgamRep {
    pub pres: SurfacePresentation,
    pub factors: [FactorData; 2],
    /// Cusp translation length; `d = H_r`.
    pub r: f64,
    /// Vertical offset `t = v2 - v1` between the factor planes.
    pub t: f64,
    pub d: Isometry,
    /// Separating level in the `w` coordinate.
    pub w_mid: f64,
    pub separation: SeparationData,
    pub section: Section,
    gen_images: Vec<Isometry>,
    gen_inverses: Vec<Isometry>,
}

/// Region labels for the two sides of the separating hypersurface
/// `{w = w_mid}`. `X1` is the side containing the second factor's plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    X1,
    X2,
    Boundary,
}

pub const T_MAX: f64 = 65536.0;
pub const DEFAULT_BLEND_FRACTION: f64 = 0.5;
const SEPARATION_SAMPLES: usize = 10_000;

/// Build the amalgam: factors of genus `g1`, `g2` with cusp length `r`,
/// planes separated by `t` (`None` = double from 1 until the sampled
/// separation margin reaches `margin`).
pub fn build(
    g1: usize,
    g2: usize,
    r: f64,
    t: Option<f64>,
    margin: f64,
    seed: u64,
) -> Result<AmalgamRep> {
    let pres = SurfacePresentation { g1, g2 };
    let make = |g: usize| -> Result<FuchsianGroup> {
        if g == 1 {
            punctured_torus(r)
        } else {
            ideal_polygon_group(g, r)
        }
    };
    let group1 = make(g1)?;
    let group2 = make(g2)?;
    let fund1 = fundamental_data(&group1, DEFAULT_FORD_DEPTH)?;
    let fund2 = fundamental_data(&group2, DEFAULT_FORD_DEPTH)?;
    let hb1 = horoball_triple(&fund1);
    let hb2 = horoball_triple(&fund2);

    let separation = SeparationData {
        w_extent: [
            sampled_w_extent(hb1.u_inner(), seed ^ 0x5e9a11),
            sampled_w_extent(hb2.u_inner(), seed ^ 0x5e9a22),
        ],
        samples_per_factor: SEPARATION_SAMPLES,
        seed,
    };

    let t = match t {
        Some(t) => {
            if separation.margin(t) < margin {
                return Err(Error::Separation { t_max: t, margin });
            }
            t
        }
        None => {
            let mut t = 1.0;
            while separation.margin(t) < margin {
                t *= 2.0;
                if t > T_MAX {
                    return Err(Error::Separation {
                        t_max: T_MAX,
                        margin,
                    });
                }
            }
            t
        }
    };

    let factors = [
        FactorData {
            group: group1,
            fund: fund1,
            horoballs: hb1,
            plane: TotallyRealPlane::new(0.0),
            v_offset: 0.0,
        },
        FactorData {
            group: group2,
            fund: fund2,
            horoballs: hb2,
            plane: TotallyRealPlane::new(t),
            v_offset: t,
        },
    ];

    // Embed the amalgam generators.
    let g = pres.genus();
    let mut gen_images = Vec::with_capacity(2 * g);
    for gen in 0..2 * g {
        let (m, fg) = pres.to_factor_gen(gen);
        gen_images.push(embed_so21(&factors[m].group.gens[fg], &factors[m].plane)?);
    }
    let gen_inverses: Vec<Isometry> = gen_images.iter().map(|i| i.inverse()).collect();

    let d = h_translation(r);
    let w_mid = 0.5 * t;
    let gap_lo = separation.w_extent[0];
    let gap_hi = t - separation.w_extent[1];
    let center = 0.5 * (gap_lo + gap_hi);
    let half = 0.5 * DEFAULT_BLEND_FRACTION * (gap_hi - gap_lo).max(1e-6);
    let section = Section {
        w_lo: center - half,
        w_hi: center + half,
        blend_fraction: DEFAULT_BLEND_FRACTION,
    };

    let rep = AmalgamRep {
        pres,
        factors,
        r,
        t,
        d,
        w_mid,
        separation,
        section,
        gen_images,
        gen_inverses,
    };

    // Construction self-checks.
    let gamma_img = rep.rho(&pres.gamma());
    if gamma_img.pu_distance(&rep.d) > 1e-10 * (1.0 + rep.d.matrix().max_abs()) {
        return Err(Error::Construction(format!(
            "rho(gamma) != H_r: distance {}",
            gamma_img.pu_distance(&rep.d)
        )));
    }
    let rel_img = rep.rho(&pres.relator());
    if !rel_img.is_pu_identity(1e-9 * (1.0 + rel_img.matrix().max_abs())) {
        return Err(Error::Construction(
            "surface relator does not map to the identity".into(),
        ));
    }
    if gamma_img.kind() != IsometryKind::Parabolic {
        return Err(Error::Construction(
            "separating element is not parabolic".into(),
        ));
    }
    Ok(rep)
}

/// Sampled `w`-extent of the set of points of `Y` whose extended projection
/// onto `Sigma_0` misses the horoball `{u > u_cut}`; the search box expands
/// until the outer shell is empty.
fn sampled_w_extent(u_cut: f64, seed: u64) -> f64 {
    let eta_cut = u_cut.sqrt();
    let plane = TotallyRealPlane::new(0.0);
    let mut half_w = 1.5 * u_cut + 1.0;
    for _round in 0..6 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut w_max = 0.0f64;
        for _ in 0..SEPARATION_SAMPLES {
            let q = QuotientCoord::new(
                rng.gen_range(-2.0 * eta_cut..2.0 * eta_cut),
                rng.gen_range(-half_w..half_w),
                10f64.powf(rng.gen_range(-3.0..(1.5 * u_cut).log10())),
            );
            let p = ProjPoint::from_horo(&section_p(&q));
            let Ok(pr) = project_extended(&plane, &p) else {
                continue;
            };
            let Ok(h) = pr.to_horo() else { continue };
            if h.u <= u_cut {
                w_max = w_max.max(q.w.abs());
            }
        }
        if w_max < 0.9 * half_w {
            return w_max;
        }
        half_w *= 2.0;
    }
    half_w
}

impl AmalgamRep {
    pub fn gamma_word(&self) -> Word {
        self.pres.gamma()
    }

    pub fn relator_word(&self) -> Word {
        self.pres.relator()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.pres.alphabet()
    }

    pub fn gen_image(&self, l: &Letter) -> &Isometry {
        if l.inv {
            &self.gen_inverses[l.gen]
        } else {
            &self.gen_images[l.gen]
        }
    }

    /// Evaluate the representation on a word.
    pub fn rho(&self, w: &Word) -> Isometry {
        let mut m = Isometry::identity();
        for l in &w.0 {
            m = m * *self.gen_image(l);
        }
        m
    }

    /// Which side of the separating hypersurface a point lies on.
    pub fn region(&self, p: &HoroCoord, tol: f64) -> Region {
        let w = quotient_map(p).w;
        if w > self.w_mid + tol {
            Region::X1
        } else if w < self.w_mid - tol {
            Region::X2
        } else {
            Region::Boundary
        }
    }

    /// Signed `w`-distance of the point to the separating level, positive if
    /// strictly inside `expect`.
    pub fn region_margin(&self, p: &HoroCoord, expect: Region) -> f64 {
        let w = quotient_map(p).w;
        match expect {
            Region::X1 => w - self.w_mid,
            Region::X2 => self.w_mid - w,
            Region::Boundary => -(w - self.w_mid).abs(),
        }
    }

    /// Horizontal shift placing the section fiber over factor `m`'s
    /// unbounded side.
    pub fn factor_shift(&self, m: usize, q: &QuotientCoord) -> Result<f64> {
        let f = &self.factors[m];
        let zeta = f.chart_of_projection(&ProjPoint::from_horo(&section_p(q)))?;
        Ok(f.fund.x0 - zeta.re)
    }

    /// Blended section shift at a quotient point.
    pub fn section_shift(&self, q: &QuotientCoord) -> Result<f64> {
        let beta = self.section.blend(q.w);
        let s = if beta <= 0.0 {
            self.factor_shift(0, q)?
        } else if beta >= 1.0 {
            self.factor_shift(1, q)?
        } else {
            (1.0 - beta) * self.factor_shift(0, q)? + beta * self.factor_shift(1, q)?
        };
        Ok(s)
    }

    /// The section point over a quotient coordinate: `H_shift` applied to
    /// the canonical fiber point on `{x = 0}`.
    pub fn section_point(&self, q: &QuotientCoord) -> Result<HoroCoord> {
        let s = self.section_shift(q)?;
        Ok(HoroCoord::from_real(s, q.y, q.u, q.w - 2.0 * s * q.y))
    }

    /// Position of `p` across its fiber, measured from the section; the
    /// fundamental slab between the section and its `d`-translate is
    /// `0 <= delta < r`.
    pub fn slab_coordinate(&self, p: &HoroCoord) -> Result<f64> {
        let q = quotient_map(p);
        Ok(p.x() - self.section_shift(&q)?)
    }

    /// Membership margin for the factor-`m` fundamental set `Phi_m`:
    /// positive iff the projection chart clears every isometric circle and
    /// the point lies strictly inside the slab between the section and its
    /// `d`-translate.
    pub fn phi_factor_margin(&self, m: usize, p: &HoroCoord) -> Result<f64> {
        let f = &self.factors[m];
        let q = quotient_map(p);
        let delta = p.x() - self.section_shift(&q)?;
        let slab = delta.min(self.r - delta);
        if slab < -1e-6 {
            return Ok(slab);
        }
        let zeta = f.chart_of_projection(&ProjPoint::from_horo(p))?;
        Ok(f.fund.circle_margin(zeta).min(slab))
    }

    /// Membership margin for `Phi = Phi_1 intersect Phi_2`.
    pub fn phi_margin(&self, p: &HoroCoord) -> Result<f64> {
        let m0 = self.phi_factor_margin(0, p)?;
        if m0 < -1e-6 {
            return Ok(m0);
        }
        Ok(m0.min(self.phi_factor_margin(1, p)?))
    }

    /// Membership margin for `Psi_m` (projection lands in the full Ford
    /// domain including the strip condition).
    pub fn psi_factor_margin(&self, m: usize, p: &HoroCoord) -> Result<f64> {
        let f = &self.factors[m];
        let zeta = f.chart_of_projection(&ProjPoint::from_horo(p))?;
        Ok(f.fund.membership_margin(zeta))
    }

    /// Amalgam normal form of a word.
    pub fn normal_form(&self, w: &Word) -> NormalForm {
        normal_form(&self.pres, w)
    }

    /// Greedy orbit reduction of an ambient point into `Phi`, interleaving
    /// factor Ford reductions with powers of `d`. Letters spent on factor
    /// side pairings are charged against `letter_budget`; boundary-relator
    /// powers (which map to powers of `d`) are free, matching the coverage
    /// contract "a word of bounded length composed with a power of d".
    pub fn reduce_to_phi(&self, p: &HoroCoord, letter_budget: usize) -> ReduceOutcome {
        let mut point = *p;
        let mut word = Word::empty();
        let mut charged = 0usize;
        for _ in 0..64 {
            // Slab-wrap via powers of d (free).
            let Ok(delta) = self.slab_coordinate(&point) else {
                return ReduceOutcome::Failed;
            };
            let k = (delta / self.r).floor() as i64;
            if k != 0 {
                let dk = d_power_word(&self.pres, -k);
                point = apply_to_horo(&self.rho(&dk), &point);
                word = dk.concat(&word);
            }
            match self.phi_margin(&point) {
                Ok(m) if m >= -1e-9 => {
                    return ReduceOutcome::Found {
                        word,
                        charged_letters: charged,
                    }
                }
                Err(_) => return ReduceOutcome::Failed,
                Ok(_) => {}
            }
            // Reduce through the factor whose Ford conditions are violated,
            // preferring the factor paired with the point's region (X2 pairs
            // with factor 1, X1 with factor 2).
            let mut progressed = false;
            let side_factor = usize::from(quotient_map(&point).w > self.w_mid);
            for &m in &[side_factor, 1 - side_factor] {
                let f = &self.factors[m];
                let Ok(zeta) = f.chart_of_projection(&ProjPoint::from_horo(&point)) else {
                    return ReduceOutcome::Failed;
                };
                if f.fund.circle_margin(zeta) >= -1e-9 {
                    continue;
                }
                let budget_left = letter_budget.saturating_sub(charged);
                let red = ford_reduce(&f.group, &f.fund, zeta, budget_left);
                if red.word.is_empty() {
                    continue;
                }
                charged += red.charged_letters;
                if charged > letter_budget {
                    return ReduceOutcome::Undecided;
                }
                let amalgam_word = self.pres.map_factor_word(m, &red.word);
                point = apply_to_horo(&self.rho(&amalgam_word), &point);
                word = amalgam_word.concat(&word);
                progressed = true;
                break;
            }
            if !progressed {
                return ReduceOutcome::Undecided;
            }
        }
        ReduceOutcome::Undecided
    }
}

/// Spell `d^k` as a word (powers of factor 1's boundary relator).
pub fn d_power_word(pres: &SurfacePresentation, k: i64) -> Word {
    pres.factor_relator(0).pow(k)
}

pub fn apply_to_horo(g: &Isometry, p: &HoroCoord) -> HoroCoord {
    g.apply(&ProjPoint::from_horo(p))
        .to_horo()
        .expect("finite points of Y stay finite under the group")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReduceOutcome {
    Found { word: Word, charged_letters: usize },
    Undecided,
    Failed,
}

/// Normal form in the amalgamated product: either a power of `d` (possibly
/// zero, the identity) or an alternating product of factor syllables with no
/// syllable in `<d>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalForm {
    Identity,
    DPower(i64),
    Alternating(Vec<(usize, Word)>),
}

impl NormalForm {
    pub fn is_identity(&self) -> bool {
        matches!(self, NormalForm::Identity | NormalForm::DPower(0))
    }

    pub fn syllable_count(&self) -> usize {
        match self {
            NormalForm::Identity | NormalForm::DPower(0) => 0,
            NormalForm::DPower(_) => 1,
            NormalForm::Alternating(s) => s.len(),
        }
    }
}

/// Detect whether a reduced factor syllable is a power of that factor's
/// boundary relator, combinatorially (never numerically). Returns the power
/// of `d` it represents.
fn d_power_of_syllable(pres: &SurfacePresentation, m: usize, w: &Word) -> Option<i64> {
    if w.is_empty() {
        return Some(0);
    }
    let rel = pres.factor_relator(m);
    if w.len() % rel.len() != 0 {
        return None;
    }
    let k = (w.len() / rel.len()) as i64;
    if *w == rel.pow(k) {
        Some(k * pres.factor_relator_power(m))
    } else if *w == rel.pow(-k) {
        Some(-k * pres.factor_relator_power(m))
    } else {
        None
    }
}

/// Spell `d^n` in factor `m`'s letters.
fn syllable_of_d_power(pres: &SurfacePresentation, m: usize, n: i64) -> Word {
    pres.factor_relator(m)
        .pow(n * pres.factor_relator_power(m))
}

pub fn normal_form(pres: &SurfacePresentation, w: &Word) -> NormalForm {
    // Split into factor syllables.
    let mut syll: Vec<(usize, Word)> = Vec::new();
    for &l in &w.0 {
        let m = pres.factor_of_gen(l.gen);
        match syll.last_mut() {
            Some((fm, sw)) if *fm == m => sw.push(l),
            _ => syll.push((m, Word(vec![l]))),
        }
    }

    loop {
        // Drop empties and merge adjacent same-factor syllables.
        let mut merged: Vec<(usize, Word)> = Vec::new();
        for (m, sw) in syll.into_iter().filter(|(_, sw)| !sw.is_empty()) {
            match merged.last_mut() {
                Some((pm, pw)) if *pm == m => *pw = pw.concat(&sw),
                _ => merged.push((m, sw)),
            }
        }
        syll = merged;
        syll.retain(|(_, sw)| !sw.is_empty());

        if syll.is_empty() {
            return NormalForm::Identity;
        }
        if syll.len() == 1 {
            if let Some(n) = d_power_of_syllable(pres, syll[0].0, &syll[0].1) {
                return if n == 0 {
                    NormalForm::Identity
                } else {
                    NormalForm::DPower(n)
                };
            }
            return NormalForm::Alternating(syll);
        }
        // Rewrite any <d>-syllable in the other factor's letters so it can
        // merge with a neighbor; each pass strictly shrinks the form.
        let mut changed = false;
        for i in 0..syll.len() {
            let (m, ref sw) = syll[i];
            if let Some(n) = d_power_of_syllable(pres, m, sw) {
                let other = 1 - m;
                syll[i] = (other, syllable_of_d_power(pres, other, n));
                changed = true;
                break;
            }
        }
        if !changed {
            return NormalForm::Alternating(syll);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::v_translation;
    use crate::linalg::cx;
    use std::sync::OnceLock;

    pub(crate) fn default_rep() -> &'static AmalgamRep {
        static REP: OnceLock<AmalgamRep> = OnceLock::new();
        REP.get_or_init(|| build(1, 1, 6.0, None, 0.5, 7).expect("default build"))
    }

    #[test]
    fn build_default_contracts() {
        let rep = default_rep();
        assert!(rep.separation.margin(rep.t) >= 0.5);
        assert!(rep.separation.margin(0.0) < 0.0);
        let gi = rep.rho(&rep.gamma_word());
        assert!(gi.pu_distance(&h_translation(6.0)) < 1e-10);
        assert_eq!(gi.kind(), IsometryKind::Parabolic);
        let rel = rep.rho(&rep.relator_word());
        assert!(rel.is_pu_identity(1e-9));
    }

    #[test]
    fn margin_monotone_in_t() {
        let rep = default_rep();
        let mut last = f64::NEG_INFINITY;
        for k in 0..12 {
            let t = 2f64.powi(k) * 0.5;
            let m = rep.separation.margin(t);
            assert!(m >= last);
            last = m;
        }
    }

    #[test]
    fn rho_word_algebra() {
        let rep = default_rep();
        let ab = rep.alphabet();
        assert!(rep.rho(&Word::empty()).is_pu_identity(1e-12));
        let w = ab.parse("a1 b2 a2^-1 b1").unwrap();
        let ww = w.concat(&w.inverse());
        assert!(rep.rho(&ww).is_pu_identity(1e-9));
    }

    #[test]
    fn factor_generators_preserve_their_planes() {
        let rep = default_rep();
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for gen in 0..4 {
            let (m, _) = rep.pres.to_factor_gen(gen);
            let plane = rep.factors[m].plane;
            let iso = rep.gen_image(&Letter::new(gen, false));
            for _ in 0..50 {
                let zeta = cx(rng.gen_range(-3.0..3.0), rng.gen_range(0.2..4.0));
                let img = iso
                    .apply(&ProjPoint::from_horo(&plane.chart(zeta)))
                    .to_horo()
                    .unwrap();
                assert!(plane.contains(&img, 1e-9 * (1.0 + img.u + img.z.norm())));
            }
        }
    }

    #[test]
    fn region_examples() {
        let rep = default_rep();
        let p2 = rep.factors[1].plane.chart(cx(0.3, 0.9));
        assert_eq!(rep.region(&p2, 1e-9), Region::X1);
        let p1 = rep.factors[0].plane.chart(cx(-0.2, 1.4));
        assert_eq!(rep.region(&p1, 1e-9), Region::X2);
        let moved = apply_to_horo(&rep.d, &p2);
        assert_eq!(rep.region(&moved, 1e-9), Region::X1);
        let lifted = apply_to_horo(&v_translation(rep.t), &p1);
        assert_eq!(rep.region(&lifted, 1e-9), Region::X1);
    }

    #[test]
    fn section_is_a_section() {
        let rep = default_rep();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..2000 {
            let q = QuotientCoord::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-3.0..rep.t + 3.0),
                10f64.powf(rng.gen_range(-2.0..1.5)),
            );
            let p = rep.section_point(&q).unwrap();
            let back = quotient_map(&p);
            assert!((back.y - q.y).abs() < 1e-9);
            assert!((back.w - q.w).abs() < 1e-8 * (1.0 + q.w.abs()));
            assert!((back.u - q.u).abs() < 1e-9);
        }
    }

    #[test]
    fn section_matches_factor_fibers_outside_band() {
        let rep = default_rep();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..300 {
            let below = rng.gen_bool(0.5);
            let w = if below {
                rng.gen_range(-2.0..rep.section.w_lo - 1e-6)
            } else {
                rng.gen_range(rep.section.w_hi + 1e-6..rep.t + 2.0)
            };
            let q = QuotientCoord::new(
                rng.gen_range(-1.5..1.5),
                w,
                10f64.powf(rng.gen_range(-1.0..1.2)),
            );
            let m = usize::from(!below);
            let p = rep.section_point(&q).unwrap();
            let zeta = rep.factors[m]
                .chart_of_projection(&ProjPoint::from_horo(&p))
                .unwrap();
            assert!(
                (zeta.re - rep.factors[m].fund.x0).abs() < 1e-8 * (1.0 + zeta.im),
                "fiber off the unbounded side by {}",
                (zeta.re - rep.factors[m].fund.x0).abs()
            );
        }
    }

    #[test]
    fn section_disjoint_from_d_translate() {
        let rep = default_rep();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..500 {
            let q = QuotientCoord::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..rep.t + 2.0),
                10f64.powf(rng.gen_range(-1.5..1.5)),
            );
            let p = rep.section_point(&q).unwrap();
            let dp = apply_to_horo(&rep.d, &p);
            let delta = rep.slab_coordinate(&dp).unwrap();
            assert!((delta - rep.r).abs() < 1e-8);
        }
    }

    #[test]
    fn section_continuous_across_band_edges() {
        let rep = default_rep();
        for edge in [rep.section.w_lo, rep.section.w_hi] {
            for y in [-1.0, 0.4] {
                for u in [0.5, 3.0] {
                    let s =
                        |w: f64| rep.section_shift(&QuotientCoord::new(y, w, u)).unwrap();
                    let eps = 1e-5;
                    let jump = (s(edge + eps) - s(edge - eps)).abs();
                    assert!(jump < 1e-8 + 4.0 * eps, "shift jumps by {jump} at band edge");
                }
            }
        }
    }

    #[test]
    fn normal_form_examples() {
        let rep = default_rep();
        let pres = rep.pres;
        let ab = rep.alphabet();
        assert_eq!(normal_form(&pres, &rep.gamma_word()), NormalForm::DPower(1));
        let r2 = pres.factor_relator(1);
        assert_eq!(normal_form(&pres, &r2), NormalForm::DPower(-1));
        assert_eq!(
            normal_form(&pres, &rep.relator_word()),
            NormalForm::Identity
        );
        let w = rep.gamma_word().pow(2).concat(&r2);
        assert_eq!(normal_form(&pres, &w), NormalForm::DPower(1));
        // a1 (d spelled in factor-2 letters) a1^-1 merges into a single
        // factor-1 syllable conjugate to d.
        let a1 = ab.parse("a1").unwrap();
        let w = a1.concat(&r2.inverse()).concat(&a1.inverse());
        match normal_form(&pres, &w) {
            NormalForm::Alternating(s) => {
                assert_eq!(s.len(), 1);
                assert_eq!(s[0].0, 0);
                assert_eq!(
                    s[0].1,
                    a1.concat(&pres.factor_relator(0)).concat(&a1.inverse())
                );
            }
            other => panic!("unexpected normal form {other:?}"),
        }
        // Stability: re-running on the flattened output is the identity map.
        let w = ab.parse("a1 b1 a2 b2 a2^-1 a1^-1").unwrap();
        let nf = normal_form(&pres, &w);
        if let NormalForm::Alternating(s) = &nf {
            let flat = s.iter().fold(Word::empty(), |acc, (_, sw)| acc.concat(sw));
            assert_eq!(normal_form(&pres, &flat), nf);
        } else {
            panic!("expected alternating form");
        }
    }

    #[test]
    fn phi_contains_factor_interior_points() {
        let rep = default_rep();
        for m in 0..2 {
            let f = &rep.factors[m];
            let zeta = f.fund.interior_point();
            let p = f.plane.chart(zeta);
            let margin = rep.phi_factor_margin(m, &p).unwrap();
            assert!(
                margin > 1e-3,
                "factor interior point not in Phi_{m}: {margin}"
            );
            let dp = apply_to_horo(&rep.d, &p);
            assert!(rep.phi_factor_margin(m, &dp).unwrap() < 0.0);
            let phim = rep.phi_margin(&p).unwrap();
            assert!(phim <= margin + 1e-12);
        }
    }

    #[test]
    fn psi_covered_by_d_translates_of_phi() {
        let rep = default_rep();
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let mut tested = 0;
        for _ in 0..4000 {
            if tested >= 300 {
                break;
            }
            let m = rng.gen_range(0..2usize);
            let p = HoroCoord::from_real(
                rng.gen_range(-9.0..9.0),
                rng.gen_range(-2.0..2.0),
                10f64.powf(rng.gen_range(-1.5..1.0)),
                rng.gen_range(-3.0..rep.t + 3.0),
            );
            if rep.psi_factor_margin(m, &p).unwrap() < 1e-3 {
                continue;
            }
            tested += 1;
            let delta = rep.slab_coordinate(&p).unwrap();
            let k = (delta / rep.r).floor() as i64;
            let moved = apply_to_horo(&rep.rho(&d_power_word(&rep.pres, -k)), &p);
            assert!(
                rep.phi_factor_margin(m, &moved).unwrap() > -1e-6,
                "Psi_{m} point not covered by d-translates of Phi_{m}"
            );
        }
        assert!(tested >= 200, "too few Psi samples ({tested})");
    }

    #[test]
    fn regions_partition_samples() {
        let rep = default_rep();
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        for _ in 0..5000 {
            let p = HoroCoord::from_real(
                rng.gen_range(-9.0..9.0),
                rng.gen_range(-3.0..3.0),
                10f64.powf(rng.gen_range(-3.0..3.0)),
                rng.gen_range(-5.0..rep.t + 5.0),
            );
            let r = rep.region(&p, 1e-9);
            if r != Region::Boundary {
                let opposite = if r == Region::X1 { Region::X2 } else { Region::X1 };
                assert!(rep.region_margin(&p, opposite) < 0.0);
            }
        }
    }

    #[test]
    fn build_with_explicit_t_and_failure() {
        let rep = build(1, 1, 6.0, Some(16.0), 0.5, 3).unwrap();
        assert!(rep.separation.margin(16.0) >= 0.5);
        assert!(matches!(
            build(1, 1, 6.0, Some(1.0), 0.5, 3),
            Err(Error::Separation { .. })
        ));
    }
}
