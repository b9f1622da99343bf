//! Coset-sum series over the group: the mean-squared inverse
//! exponential-distance function P_sigma, relative theta series for the
//! length differential, and the unfolding integrals that collapse
//! Weil-Petersson pairings to a single cylinder.
//!
//! A closed geodesic sigma lifts to a family of complete geodesics, one per
//! coset of its cyclic stabilizer. Distinct cosets have distinct axes, so
//! lifts are enumerated geometrically (breadth-first over the group, pruned
//! by distance to an evaluation window, deduplicated by canonical axis) and
//! summed in deterministic sorted order with compensated accumulation.
//!
//! Unfolding: the strip pullback of the cylinder differential (dt/t)^2 is
//! the constant 1, so integrals of a lifted Beltrami differential against a
//! theta series collapse to the zero Fourier mode of the lift on the target
//! cylinder. Each coset term of that zero mode is a rational integral
//! int u du / ((au+b)^2 (cu+d)^2) with a closed form, which makes the
//! pairing machinery exact up to series truncation.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Result, WplabError};
use crate::fuchsian::{
    axis, enumerate_elements_capped, length_from_trace, CurveClass, PuncturedTorusGroup, Word,
};
use crate::hyperbolic::{dist_point_geodesic, gaussian, GeodesicEnds, HPoint, MoebiusMap};
use crate::numeric::{Kahan, KahanC};

/// Truncated series value with an estimated absolute truncation error.
#[derive(Debug, Clone, Copy)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
    pub terms_used: usize,
}

/// A curve class together with its matrix, translation length, and the
/// normalizer conjugating its axis to (0, inf).
#[derive(Debug, Clone)]
pub struct CurveContext {
    pub curve: CurveClass,
    pub matrix: MoebiusMap,
    pub length: f64,
    pub normalizer: MoebiusMap,
    pub ends: GeodesicEnds,
}

impl CurveContext {
    pub fn new(group: &PuncturedTorusGroup, curve: CurveClass) -> Result<Self> {
        let mut m = group.matrix_of_word(&curve.word);
        if m.trace() < 0.0 {
            m = MoebiusMap { m11: -m.m11, m12: -m.m12, m21: -m.m21, m22: -m.m22 };
        }
        let length = length_from_trace(&m)?;
        let ends = axis(&m)?;
        let normalizer = axis_normalizer(&m)?;
        let ctx = Self { curve, matrix: m, length, normalizer, ends };
        debug_assert!({
            let d = ctx.normalizer.compose(&ctx.matrix).compose(&ctx.normalizer.inverse());
            (d.m11 - (0.5 * length).exp()).abs() < 1e-7 && d.m21.abs() < 1e-7 && d.m12.abs() < 1e-7
        });
        Ok(ctx)
    }

    /// Chart from the strip {0 < Im w < pi} to the half-plane: z = R^{-1}(e^w).
    pub fn from_strip(&self, w: Complex64) -> Complex64 {
        self.normalizer.inverse().apply_complex(w.exp())
    }

    /// d(from_strip)/dw at w.
    pub fn chart_derivative(&self, w: Complex64) -> Complex64 {
        let u = w.exp();
        let rinv = self.normalizer.inverse();
        let den = rinv.m21 * u + rinv.m22;
        u / (den * den)
    }

    /// Probe points along the core circle (Im w = pi/2) of the cylinder.
    pub fn core_probes(&self, n: usize) -> Vec<HPoint> {
        (0..n)
            .map(|k| {
                let w = Complex64::new(
                    self.length * k as f64 / (n - 1).max(1) as f64,
                    0.5 * std::f64::consts::PI,
                );
                let z = self.from_strip(w);
                HPoint::new(z.re, z.im)
            })
            .collect()
    }
}

/// Normalizer R with R(repelling) = 0, R(attracting) = inf, so that
/// R M R^{-1} = diag(e^{l/2}, e^{-l/2}).
fn axis_normalizer(m: &MoebiusMap) -> Result<MoebiusMap> {
    let t = m.trace().abs();
    if t <= 2.0 + 1e-12 {
        return Err(WplabError::NotHyperbolic { trace_abs: t });
    }
    if m.m21 == 0.0 {
        let p = m.m12 / (m.m22 - m.m11);
        return Ok(if m.m11.abs() > m.m22.abs() {
            // infinity attracting, p repelling
            MoebiusMap { m11: 1.0, m12: -p, m21: 0.0, m22: 1.0 }
        } else {
            // infinity repelling, p attracting
            MoebiusMap { m11: 0.0, m12: -1.0, m21: 1.0, m22: -p }
        });
    }
    let tr = m.trace();
    let disc = (tr * tr - 4.0).sqrt();
    let r1 = (m.m11 - m.m22 + disc) / (2.0 * m.m21);
    let r2 = (m.m11 - m.m22 - disc) / (2.0 * m.m21);
    // |c r + d| < 1 marks the repelling fixed point.
    let (rep, att) = if (m.m21 * r1 + m.m22).abs() < 1.0 { (r1, r2) } else { (r2, r1) };
    let det = rep - att;
    Ok(if det > 0.0 {
        let s = det.sqrt();
        MoebiusMap { m11: 1.0 / s, m12: -rep / s, m21: 1.0 / s, m22: -att / s }
    } else {
        let s = (-det).sqrt();
        MoebiusMap { m11: -1.0 / s, m12: rep / s, m21: 1.0 / s, m22: -att / s }
    })
}

/// One lifted copy of the closed geodesic.
#[derive(Debug, Clone)]
pub struct Lift {
    /// Group element carrying the base axis to this lift.
    pub mat: MoebiusMap,
    pub ends: GeodesicEnds,
    /// Distance from the enumeration window.
    pub window_dist: f64,
}

/// Parameters for geometric lift enumeration.
#[derive(Debug, Clone, Copy)]
pub struct LiftParams {
    /// Keep lifts within this distance of the window.
    pub cutoff: f64,
    /// Expand the search this far beyond the cutoff.
    pub margin: f64,
    pub max_lifts: usize,
}

impl Default for LiftParams {
    fn default() -> Self {
        Self { cutoff: 12.0, margin: 2.5, max_lifts: 600_000 }
    }
}

impl LiftParams {
    pub fn with_cutoff(cutoff: f64) -> Self {
        Self { cutoff, ..Self::default() }
    }
}

fn atan_key(ends: &GeodesicEnds) -> (f64, f64) {
    let f = |t: f64| if t.is_infinite() { std::f64::consts::FRAC_PI_2 } else { t.atan() };
    (f(ends.a()), f(ends.b()))
}

const KEY_GRID: f64 = 1e-8;
const KEY_TOL: f64 = 1e-9;

struct AxisSet {
    cells: HashMap<(i64, i64), Vec<(f64, f64)>>,
}

impl AxisSet {
    fn new() -> Self {
        Self { cells: HashMap::new() }
    }

    /// Insert if not already present (within tolerance); true when inserted.
    fn insert(&mut self, key: (f64, f64)) -> bool {
        let ci = (key.0 / KEY_GRID).round() as i64;
        let cj = (key.1 / KEY_GRID).round() as i64;
        for di in -1..=1 {
            for dj in -1..=1 {
                if let Some(v) = self.cells.get(&(ci + di, cj + dj)) {
                    if v.iter()
                        .any(|&(a, b)| (a - key.0).abs() < KEY_TOL && (b - key.1).abs() < KEY_TOL)
                    {
                        return false;
                    }
                }
            }
        }
        self.cells.entry((ci, cj)).or_default().push(key);
        true
    }
}

/// Enumerate the distinct lifted axes of `ctx.curve` within distance
/// `params.cutoff` of the window, by breadth-first search over the group.
pub fn enumerate_lifts(
    group: &PuncturedTorusGroup,
    ctx: &CurveContext,
    window: &[HPoint],
    params: &LiftParams,
) -> Result<Vec<Lift>> {
    let gens = [
        group.gen_a,
        group.gen_a.inverse(),
        group.gen_b,
        group.gen_b.inverse(),
    ];
    let wdist = |ends: &GeodesicEnds| -> f64 {
        window
            .iter()
            .map(|&z| dist_point_geodesic(z, *ends))
            .fold(f64::INFINITY, f64::min)
    };

    let mut seen = AxisSet::new();
    let mut kept: Vec<Lift> = Vec::new();
    let base = Lift {
        mat: MoebiusMap::identity(),
        ends: ctx.ends,
        window_dist: wdist(&ctx.ends),
    };
    seen.insert(atan_key(&base.ends));
    let mut frontier = vec![base.clone()];
    if base.window_dist <= params.cutoff {
        kept.push(base);
    }

    while !frontier.is_empty() {
        // Deterministic expansion order.
        frontier.sort_by(|p, q| {
            atan_key(&p.ends)
                .partial_cmp(&atan_key(&q.ends))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut next = Vec::new();
        for lift in &frontier {
            for g in &gens {
                // Endpoints from the accumulated matrix in one evaluation:
                // iterating the boundary action drifts near repelling fixed
                // points, which breaks axis deduplication.
                let mat = g.compose(&lift.mat);
                let ends = mat.apply_geodesic(ctx.ends);
                let key = atan_key(&ends);
                let d = wdist(&ends);
                if d > params.cutoff + params.margin {
                    continue;
                }
                if !seen.insert(key) {
                    continue;
                }
                let new = Lift { mat, ends, window_dist: d };
                if d <= params.cutoff {
                    kept.push(new.clone());
                    if kept.len() > params.max_lifts {
                        return Err(WplabError::EnumerationCap {
                            requested: kept.len(),
                            cap: params.max_lifts,
                        });
                    }
                }
                next.push(new);
            }
        }
        frontier = next;
    }

    kept.sort_by(|p, q| {
        atan_key(&p.ends)
            .partial_cmp(&atan_key(&q.ends))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(kept)
}

/// Geometric-decay tail estimate from the outermost distance bands.
fn band_tail(term_sizes: &[(f64, f64)], cutoff: f64) -> f64 {
    let band = |k: f64| -> f64 {
        term_sizes
            .iter()
            .filter(|&&(d, _)| d >= cutoff - k - 1.0 && d < cutoff - k)
            .map(|&(_, t)| t)
            .sum()
    };
    let t1 = band(1.0);
    let t0 = band(0.0);
    if t0 <= 0.0 {
        return 0.0;
    }
    let r = if t1 > 0.0 { (t0 / t1).min(0.9) } else { (-1.0f64).exp() };
    t0 * r / (1.0 - r)
}

/// Coset-sum data for a curve class, enumerated from reduced words of
/// length <= max_word_len and deduplicated by canonical axis, so no two
/// representatives differ by a power of the curve's matrix. The rep list
/// is deterministic given max_word_len.
#[derive(Debug, Clone)]
pub struct CosetSum {
    pub curve: CurveClass,
    pub max_word_len: usize,
    pub reps: Vec<MoebiusMap>,
    pub ends: Vec<GeodesicEnds>,
    /// Word length at which each lift first appeared (for tail estimates).
    pub first_len: Vec<usize>,
    pub ctx: CurveContext,
}

/// Build the coset sum by word enumeration.
pub fn coset_sum(
    group: &PuncturedTorusGroup,
    curve: &CurveClass,
    max_word_len: usize,
) -> Result<CosetSum> {
    let ctx = CurveContext::new(group, curve.clone())?;
    let words = enumerate_elements_capped(group, max_word_len, max_word_len.max(16))?;
    let sigma = &curve.word;
    let sigma_inv = sigma.inverse();
    let mut seen = AxisSet::new();
    let mut items: Vec<(MoebiusMap, GeodesicEnds, usize)> = Vec::new();
    seen.insert(atan_key(&ctx.ends));
    items.push((MoebiusMap::identity(), ctx.ends, 0));
    for (w, _) in &words {
        // Strip maximal trailing powers of the curve word: g and g sigma^k
        // give the same lift, and the unstripped matrices evaluate their
        // own fixed points with exponentially amplified rounding.
        let mut letters = w.0.as_slice();
        loop {
            if letters.len() >= sigma.len() && letters[letters.len() - sigma.len()..] == sigma.0[..]
            {
                letters = &letters[..letters.len() - sigma.len()];
            } else if letters.len() >= sigma_inv.len()
                && letters[letters.len() - sigma_inv.len()..] == sigma_inv.0[..]
            {
                letters = &letters[..letters.len() - sigma_inv.len()];
            } else {
                break;
            }
        }
        if letters.is_empty() {
            continue;
        }
        let m = group.matrix_of_word(&Word(letters.to_vec()));
        let ends = m.apply_geodesic(ctx.ends);
        if seen.insert(atan_key(&ends)) {
            items.push((m, ends, w.len()));
        }
    }
    items.sort_by(|p, q| {
        atan_key(&p.1)
            .partial_cmp(&atan_key(&q.1))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(CosetSum {
        curve: curve.clone(),
        max_word_len,
        reps: items.iter().map(|i| i.0).collect(),
        ends: items.iter().map(|i| i.1).collect(),
        first_len: items.iter().map(|i| i.2).collect(),
        ctx,
    })
}

/// P_sigma(z): sum of e^{-2 d(z, lift)} over the lifted axes, with a
/// geometric tail estimate from the word-length shells.
pub fn p_sigma(z: HPoint, cs: &CosetSum) -> SeriesValue {
    let mut acc = Kahan::new();
    let mut shells: HashMap<usize, f64> = HashMap::new();
    for (ends, &len) in cs.ends.iter().zip(&cs.first_len) {
        let t = gaussian(z, *ends);
        acc.add(t);
        *shells.entry(len).or_insert(0.0) += t;
    }
    let l = cs.max_word_len;
    let t0 = shells.get(&l).copied().unwrap_or(0.0);
    let t1 = shells.get(&(l.saturating_sub(1))).copied().unwrap_or(0.0);
    let tail = if t0 <= 0.0 {
        0.0
    } else {
        let r = if t1 > 0.0 { (t0 / t1).min(0.9) } else { 0.5 };
        t0 * r / (1.0 - r)
    };
    SeriesValue { value: acc.value(), tail_bound: tail, terms_used: cs.ends.len() }
}

/// P_sigma with the word length doubled until the relative change is below
/// `rel_tol`; errors with the partial value if the cap is reached first.
pub fn p_sigma_converged(
    group: &PuncturedTorusGroup,
    curve: &CurveClass,
    z: HPoint,
    rel_tol: f64,
    start_len: usize,
    cap: usize,
) -> Result<SeriesValue> {
    let mut len = start_len.max(2);
    let mut prev = p_sigma(z, &coset_sum(group, curve, len)?);
    loop {
        let next_len = (2 * len).min(cap);
        if next_len == len {
            if prev.tail_bound > rel_tol * prev.value {
                return Err(WplabError::SeriesConvergence {
                    partial: prev.value,
                    tail_bound: prev.tail_bound,
                    tolerance: rel_tol * prev.value,
                });
            }
            return Ok(prev);
        }
        let next = p_sigma(z, &coset_sum(group, curve, next_len)?);
        let change = (next.value - prev.value).abs();
        if change <= rel_tol * next.value {
            return Ok(SeriesValue { tail_bound: next.tail_bound.max(change), ..next });
        }
        len = next_len;
        prev = next;
    }
}

/// P for a weighted multicurve: the weighted sum of the per-curve series.
pub fn p_multicurve(z: HPoint, curves: &[(CosetSum, f64)]) -> Result<SeriesValue> {
    if curves.iter().any(|&(_, w)| w <= 0.0) {
        return Err(WplabError::Invalid("multicurve weights must be positive".into()));
    }
    let mut value = Kahan::new();
    let mut tail = 0.0;
    let mut terms = 0;
    for (cs, w) in curves {
        let s = p_sigma(z, cs);
        value.add(w * s.value);
        tail += w * s.tail_bound;
        terms += s.terms_used;
    }
    Ok(SeriesValue { value: value.value(), tail_bound: tail, terms_used: terms })
}

/// The L^1 norm of P_sigma over the surface, by unfolding to one period of
/// the cylinder: int_strip e^{-2 d(., core)} dA. The y-integrand reduces to
/// sec^4(y/2)/4 below the core line and mirror-symmetrically above, so the
/// quadrature is 1-D and smooth. Equals (4/3) l_sigma.
pub fn l1_norm_p_sigma(cs: &CosetSum) -> Result<f64> {
    l1_norm_unfolded(cs.ctx.length)
}

pub fn l1_norm_unfolded(length: f64) -> Result<f64> {
    let f = |y: f64| {
        let t = (0.5 * y).tan();
        let c = 1.0 / (1.0 + t * t); // cos^2(y/2)
        0.25 / (c * c)
    };
    let half = crate::numeric::adaptive_simpson(&f, 0.0, std::f64::consts::FRAC_PI_2, 1e-10);
    Ok(2.0 * half * length)
}

/// Relative theta series of a curve: the coset sum of pullbacks of the
/// cylinder differential (dt/t)^2, with terms 1/((az+b)(cz+d))^2 for the
/// composed matrices N = R_sigma * g.
#[derive(Debug, Clone)]
pub struct ThetaSeries {
    pub ctx: CurveContext,
    /// Composed matrices N = normalizer * lift, sorted deterministically.
    mats: Vec<MoebiusMap>,
    pub tail_bound: f64,
    pub cutoff: f64,
}

impl ThetaSeries {
    /// Build for evaluation near the given window.
    pub fn new(
        group: &PuncturedTorusGroup,
        ctx: &CurveContext,
        window: &[HPoint],
        params: &LiftParams,
    ) -> Result<Self> {
        let lifts = enumerate_lifts(group, ctx, window, params)?;
        // The term attached to the lift g(axis) is the pullback by A = g^{-1}
        // (left-coset sum); its magnitude is governed by d(z, g axis).
        let mats: Vec<MoebiusMap> =
            lifts.iter().map(|l| ctx.normalizer.compose(&l.mat.inverse())).collect();
        let sizes: Vec<(f64, f64)> = lifts
            .iter()
            .map(|l| (l.window_dist, 4.0 * (-2.0 * l.window_dist).exp()))
            .collect();
        let tail = band_tail(&sizes, params.cutoff);
        Ok(Self { ctx: ctx.clone(), mats, tail_bound: tail, cutoff: params.cutoff })
    }

    pub fn terms(&self) -> usize {
        self.mats.len()
    }

    /// The holomorphic quadratic differential (coset sum) at z.
    pub fn eval_qd(&self, z: Complex64) -> Complex64 {
        let mut acc = KahanC::new();
        for n in &self.mats {
            let w = (n.m11 * z + n.m12) * (n.m21 * z + n.m22);
            acc.add(1.0 / (w * w));
        }
        acc.value()
    }

    /// The harmonic Beltrami differential y^2 conj(theta) at z.
    pub fn eval_beltrami(&self, z: HPoint) -> Complex64 {
        let y2 = z.y * z.y;
        y2 * self.eval_qd(z.to_complex()).conj()
    }

    /// Zero Fourier mode of this series lifted to the cylinder of `target`:
    /// c0 = (1/l_target) sum_g int_seg u du/((au+b)^2(cu+d)^2) with
    /// N_g' = N_g * R_target^{-1}, over one period of the core line.
    pub fn zero_mode_on(&self, target: &CurveContext) -> Complex64 {
        let rinv = target.normalizer.inverse();
        let y0 = 0.5 * std::f64::consts::PI;
        let u0 = Complex64::new(0.0, y0).exp();
        let u1 = Complex64::new(target.length, y0).exp();
        let mut acc = KahanC::new();
        for n in &self.mats {
            let m = n.compose(&rinv);
            acc.add(rational_segment_integral(&m, u0, u1));
        }
        acc.value() / target.length
    }
}

/// int u du / ((a u + b)^2 (c u + d)^2) from u0 to u1 along any path in the
/// upper half-plane (the integrand is holomorphic off the real axis).
pub fn rational_segment_integral(m: &MoebiusMap, u0: Complex64, u1: Complex64) -> Complex64 {
    let (a, b, c, d) = (m.m11, m.m12, m.m21, m.m22);
    if c.abs() < 1e-300 {
        // int u/(au+b)^2 du = (ln(au+b) + b/(au+b)) / a^2, all over d^2
        let v0 = a * u0 + b;
        let v1 = a * u1 + b;
        let val = (v1 / v0).ln() + b / v1 - b / v0;
        return val / (a * a * d * d);
    }
    if a.abs() < 1e-300 {
        let v0 = c * u0 + d;
        let v1 = c * u1 + d;
        let val = (v1 / v0).ln() + d / v1 - d / v0;
        return val / (b * b * c * c);
    }
    let r1 = -b / a;
    let r2 = -d / c;
    let delta = r1 - r2;
    let aa = -(r1 + r2) / (delta * delta * delta);
    let bb = r1 / (delta * delta);
    let dd = r2 / (delta * delta);
    let f = |u: Complex64| -> Complex64 {
        aa * ((u - r1) / (u - r2)).ln() - bb / (u - r1) - dd / (u - r2)
    };
    (f(u1) - f(u0)) / (a * a * c * c)
}

/// A tangent vector to Teichmueller space as a complex combination of
/// relative theta-Beltrami differentials: nu(z) = sum_j w_j y^2 conj(Theta_j).
#[derive(Debug, Clone)]
pub struct BeltramiHandle {
    pub components: Vec<(Complex64, ThetaSeries)>,
}

impl BeltramiHandle {
    pub fn single(theta: ThetaSeries) -> Self {
        Self { components: vec![(Complex64::new(1.0, 0.0), theta)] }
    }

    pub fn combination(parts: Vec<(Complex64, ThetaSeries)>) -> Self {
        Self { components: parts }
    }

    pub fn eval(&self, z: HPoint) -> Complex64 {
        self.components.iter().map(|(w, th)| w * th.eval_beltrami(z)).sum()
    }

    /// Multiply by a complex scalar (i * nu rotates the tangent vector).
    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            components: self.components.iter().map(|(w, th)| (s * w, th.clone())).collect(),
        }
    }

    pub fn tail_bound(&self) -> f64 {
        self.components.iter().map(|(w, th)| w.norm() * th.tail_bound).sum()
    }

    /// Zero mode of the associated quadratic differential on the target
    /// cylinder: since nu = y^2 conj(sum conj(w_j) Theta_j), it is
    /// sum_j conj(w_j) c0(Theta_j on target).
    pub fn zero_mode_on(&self, target: &CurveContext) -> Complex64 {
        self.components
            .iter()
            .map(|(w, th)| w.conj() * th.zero_mode_on(target))
            .sum()
    }
}

/// The harmonic Beltrami differential representing the length differential
/// of the curve (up to the fixed normalization grad l = (2/pi) nu).
pub fn theta_beltrami(
    group: &PuncturedTorusGroup,
    curve: &CurveClass,
    window: &[HPoint],
    params: &LiftParams,
) -> Result<BeltramiHandle> {
    let ctx = CurveContext::new(group, curve.clone())?;
    Ok(BeltramiHandle::single(ThetaSeries::new(group, &ctx, window, params)?))
}

/// First variation of geodesic length: dl_sigma(nu) = l_sigma Re c0, where
/// c0 is the zero mode of nu's quadratic differential on sigma's cylinder.
pub fn first_variation(nu: &BeltramiHandle, sigma: &CurveContext) -> f64 {
    sigma.length * nu.zero_mode_on(sigma).re
}

/// WP pairing by unfolding to the cylinder of `b`:
/// <nu, nu_b> = (pi/2) l_b conj(c0^{nu on b}).
pub fn pairing_on_cylinder(nu: &BeltramiHandle, b: &CurveContext) -> Complex64 {
    0.5 * std::f64::consts::PI * b.length * nu.zero_mode_on(b).conj()
}

/// Pointwise bound constant: |nu_sigma| <= 4 P_sigma.
pub const THETA_GAUSSIAN_BOUND: f64 = 4.0;

/// Normalization between the theta-Beltrami representative and the WP
/// gradient of geodesic length: grad l_sigma = GRAD_FROM_THETA * nu_sigma.
pub const GRAD_FROM_THETA: f64 = 2.0 / std::f64::consts::PI;

/// Ratio band of P_sigma/l_sigma over a grid (the two-sided comparison of
/// the series against the length). Returns (min, max).
pub fn p_ratio_band(
    group: &PuncturedTorusGroup,
    curves: &[CurveClass],
    grid: &[HPoint],
    max_word_len: usize,
) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for c in curves {
        let cs = coset_sum(group, c, max_word_len)?;
        for &z in grid {
            let ratio = p_sigma(z, &cs).value / cs.ctx.length;
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
    }
    Ok((lo, hi))
}
