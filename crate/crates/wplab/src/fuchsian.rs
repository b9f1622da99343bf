//! Marked once-punctured-torus groups from Fenchel-Nielsen coordinates.
//!
//! The construction: gen_a = diag(e^{l/2}, e^{-l/2}); on the tau = 0 section
//! the symmetric condition tr B = tr AB together with the Markov relation
//! x^2 + y^2 + z^2 = xyz (x = tr A) fixes tr B = x/sqrt(x-2). gen_b is the
//! unique solution with lower-left entry 1 > 0; the twist premultiplies
//! gen_b by diag(e^{tau/2}, e^{-tau/2}), so a full twist tau = l realizes
//! the Dehn twist B -> AB. The commutator keeps trace -2 (cusp) since the
//! twist matrix commutes with gen_a.
//!
//! Simple closed curves are indexed by reduced slopes p/q (p = A-exponent,
//! q = B-exponent of the abelianization); the word of a nonnegative slope is
//! built by Stern-Brocot descent with mediant word = upper word + lower word
//! (so 1/0 -> A, 0/1 -> B, 1/1 -> AB), and negative slopes apply A -> A^{-1}.

use crate::error::{Result, WplabError};
use crate::hyperbolic::{GeodesicEnds, MoebiusMap};

/// Default hard cap for reduced-word enumeration (3^16 words bounds memory).
pub const DEFAULT_WORD_CAP: usize = 16;

/// Fenchel-Nielsen pair: length of the distinguished curve alpha and twist
/// (both in hyperbolic length units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FNPoint {
    pub l_alpha: f64,
    pub tau: f64,
}

impl FNPoint {
    pub fn new(l_alpha: f64, tau: f64) -> Result<Self> {
        if !(l_alpha > 0.0) || !l_alpha.is_finite() || !tau.is_finite() {
            return Err(WplabError::Invalid(format!(
                "invalid Fenchel-Nielsen point (l_alpha = {l_alpha}, tau = {tau})"
            )));
        }
        Ok(Self { l_alpha, tau })
    }
}

/// Generator letter of the rank-2 free group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    A,
    AInv,
    B,
    BInv,
}

impl Gen {
    pub fn inverse(self) -> Gen {
        match self {
            Gen::A => Gen::AInv,
            Gen::AInv => Gen::A,
            Gen::B => Gen::BInv,
            Gen::BInv => Gen::B,
        }
    }

    fn symbol(self) -> char {
        match self {
            Gen::A => 'A',
            Gen::AInv => 'a',
            Gen::B => 'B',
            Gen::BInv => 'b',
        }
    }
}

/// Reduced word in the generators (no adjacent cancellations).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Gen>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[1] != w[0].inverse())
    }

    /// Concatenate and freely reduce.
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &g in &other.0 {
            if out.last() == Some(&g.inverse()) {
                out.pop();
            } else {
                out.push(g);
            }
        }
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|g| g.inverse()).collect())
    }

    /// Exponent sums (A-total, B-total).
    pub fn abelianization(&self) -> (i64, i64) {
        let mut p = 0;
        let mut q = 0;
        for &g in &self.0 {
            match g {
                Gen::A => p += 1,
                Gen::AInv => p -= 1,
                Gen::B => q += 1,
                Gen::BInv => q -= 1,
            }
        }
        (p, q)
    }

    /// Swap A <-> A^{-1} (the automorphism realizing slope negation).
    pub fn negate_a(&self) -> Word {
        Word(
            self.0
                .iter()
                .map(|&g| match g {
                    Gen::A => Gen::AInv,
                    Gen::AInv => Gen::A,
                    other => other,
                })
                .collect(),
        )
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for g in &self.0 {
            write!(f, "{}", g.symbol())?;
        }
        Ok(())
    }
}

/// Reduced rational slope; q >= 0, sign carried by p, and 1/0 is the
/// distinguished curve alpha.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    pub p: i64,
    pub q: i64,
}

impl Slope {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        let (mut p, mut q) = (p, q);
        if q < 0 {
            p = -p;
            q = -q;
        }
        if p == 0 && q == 0 {
            return Err(WplabError::NonReducedSlope { p, q });
        }
        if gcd(p.unsigned_abs(), q.unsigned_abs()) != 1 {
            return Err(WplabError::NonReducedSlope { p, q });
        }
        if q == 0 {
            p = 1; // 1/0 and -1/0 are the same class
        }
        Ok(Self { p, q })
    }
}

impl std::fmt::Display for Slope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A free homotopy class of simple closed curves: reduced slope plus the
/// standard primitive word realizing it.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveClass {
    pub slope: Slope,
    pub word: Word,
}

/// Standard primitive word for a reduced slope (Stern-Brocot / Christoffel
/// construction). 1/0, 0/1, 1/1 map to A, B, AB.
pub fn primitive_class(slope: Slope) -> Result<CurveClass> {
    let word = if slope.p >= 0 {
        christoffel_word(slope.p as u64, slope.q as u64)?
    } else {
        christoffel_word((-slope.p) as u64, slope.q as u64)?.negate_a()
    };
    debug_assert!({
        let (p, q) = word.abelianization();
        p == slope.p && q == slope.q
    });
    Ok(CurveClass { slope, word })
}

fn christoffel_word(p: u64, q: u64) -> Result<Word> {
    if p == 1 && q == 0 {
        return Ok(Word(vec![Gen::A]));
    }
    if p == 0 && q == 1 {
        return Ok(Word(vec![Gen::B]));
    }
    // Descend the Stern-Brocot tree between 0/1 (low) and 1/0 (high).
    let (mut pl, mut ql, mut wl) = (0u64, 1u64, Word(vec![Gen::B]));
    let (mut ph, mut qh, mut wh) = (1u64, 0u64, Word(vec![Gen::A]));
    for _ in 0..128 {
        let pm = pl + ph;
        let qm = ql + qh;
        let wm = wh.concat(&wl);
        if pm == p && qm == q {
            return Ok(wm);
        }
        // target > mediant <=> p qm > pm q
        if p * qm > pm * q {
            pl = pm;
            ql = qm;
            wl = wm;
        } else {
            ph = pm;
            qh = qm;
            wh = wm;
        }
    }
    Err(WplabError::Invalid(format!(
        "slope {p}/{q} too deep in the Stern-Brocot tree"
    )))
}

/// Marked hyperbolic structure: two generators with parabolic commutator.
#[derive(Debug, Clone, PartialEq)]
pub struct PuncturedTorusGroup {
    pub gen_a: MoebiusMap,
    pub gen_b: MoebiusMap,
    pub fn_point: FNPoint,
}

/// Construct the marked group at a Fenchel-Nielsen point.
pub fn group_from_fn(p: FNPoint) -> PuncturedTorusGroup {
    let (b0, _, _) = section_b0(p.l_alpha);
    let e = (0.5 * p.tau).exp();
    let gen_b = MoebiusMap {
        m11: e * b0.m11,
        m12: e * b0.m12,
        m21: b0.m21 / e,
        m22: b0.m22 / e,
    };
    let g = PuncturedTorusGroup {
        gen_a: MoebiusMap::dilation(p.l_alpha),
        gen_b,
        fn_point: p,
    };
    let k = commutator_trace(&g);
    assert!(
        (k + 2.0).abs() < 1e-9,
        "commutator trace {k} differs from -2 (l = {}, tau = {})",
        p.l_alpha,
        p.tau
    );
    debug_assert!(g.markov_residual() < 1e-9);
    g
}

/// The tau = 0 generator B with tr B = tr AB = x/sqrt(x-2), plus its
/// derivative with respect to l and the trace y (for analytic length
/// derivatives downstream).
fn section_b0(l: f64) -> (MoebiusMap, [f64; 4], f64) {
    let lam = (0.5 * l).exp();
    let dlam = 0.5 * lam;
    let x = lam + 1.0 / lam;
    let dx = 0.5 * (lam - 1.0 / lam);
    let y = x / (x - 2.0).sqrt();
    let dy_dx = (x - 4.0) / (2.0 * (x - 2.0).powf(1.5));
    let dy = dy_dx * dx;

    let p = y / (lam + 1.0);
    let dp = dy / (lam + 1.0) - y * dlam / ((lam + 1.0) * (lam + 1.0));
    let s = y - p;
    let ds = dy - dp;
    let q = p * s - 1.0;
    let dq = dp * s + p * ds;

    let b0 = MoebiusMap { m11: p, m12: q, m21: 1.0, m22: s };
    (b0, [dp, dq, 0.0, ds], y)
}

/// Entry-wise derivatives of the generators with respect to (l_alpha, tau),
/// evaluated at the group's Fenchel-Nielsen point. Order: [d/dl, d/dtau],
/// each as row-major [m11, m12, m21, m22].
pub fn generator_derivatives(p: FNPoint) -> ([f64; 4], [f64; 4], [f64; 4], [f64; 4]) {
    let lam = (0.5 * p.l_alpha).exp();
    let da_dl = [0.5 * lam, 0.0, 0.0, -0.5 / lam];
    let da_dtau = [0.0; 4];

    let (b0, db0_dl, _) = section_b0(p.l_alpha);
    let e = (0.5 * p.tau).exp();
    // B = diag(e, 1/e) B0
    let db_dl = [e * db0_dl[0], e * db0_dl[1], db0_dl[2] / e, db0_dl[3] / e];
    let db_dtau = [
        0.5 * e * b0.m11,
        0.5 * e * b0.m12,
        -0.5 * b0.m21 / e,
        -0.5 * b0.m22 / e,
    ];
    (da_dl, da_dtau, db_dl, db_dtau)
}

impl PuncturedTorusGroup {
    pub fn generator(&self, g: Gen) -> MoebiusMap {
        match g {
            Gen::A => self.gen_a,
            Gen::AInv => self.gen_a.inverse(),
            Gen::B => self.gen_b,
            Gen::BInv => self.gen_b.inverse(),
        }
    }

    pub fn matrix_of_word(&self, w: &Word) -> MoebiusMap {
        let mut m = MoebiusMap::identity();
        for &g in &w.0 {
            m = m.compose(&self.generator(g));
        }
        m
    }

    /// Word matrix together with its derivative with respect to the given
    /// Fenchel-Nielsen coordinate (0 = l_alpha, 1 = tau), by the product rule.
    pub fn matrix_and_derivative(&self, w: &Word, coord: usize) -> (MoebiusMap, [f64; 4]) {
        let (da_dl, da_dtau, db_dl, db_dtau) = generator_derivatives(self.fn_point);
        let pick = |g: Gen| -> ([f64; 4], [f64; 4]) {
            // (matrix, derivative) per letter, inverses via adj rule:
            // d(M^{-1}) = [d22, -d12, -d21, d11] for unit determinant.
            let (m, d) = match g {
                Gen::A => (self.gen_a, if coord == 0 { da_dl } else { da_dtau }),
                Gen::B => (self.gen_b, if coord == 0 { db_dl } else { db_dtau }),
                Gen::AInv | Gen::BInv => {
                    let (m, d) = pick_base(self, g.inverse(), coord, da_dl, da_dtau, db_dl, db_dtau);
                    let minv = m.inverse();
                    let dinv = [d[3], -d[1], -d[2], d[0]];
                    return ([minv.m11, minv.m12, minv.m21, minv.m22], dinv);
                }
            };
            ([m.m11, m.m12, m.m21, m.m22], d)
        };
        fn pick_base(
            g: &PuncturedTorusGroup,
            gen: Gen,
            coord: usize,
            da_dl: [f64; 4],
            da_dtau: [f64; 4],
            db_dl: [f64; 4],
            db_dtau: [f64; 4],
        ) -> (MoebiusMap, [f64; 4]) {
            match gen {
                Gen::A => (g.gen_a, if coord == 0 { da_dl } else { da_dtau }),
                Gen::B => (g.gen_b, if coord == 0 { db_dl } else { db_dtau }),
                _ => unreachable!(),
            }
        }

        let mut prod = [1.0, 0.0, 0.0, 1.0];
        let mut dprod = [0.0; 4];
        for &g in &w.0 {
            let (m, dm) = pick(g);
            let new_prod = mat_mul(&prod, &m);
            let dp = mat_add(&mat_mul(&dprod, &m), &mat_mul(&prod, &dm));
            prod = new_prod;
            dprod = dp;
        }
        (
            MoebiusMap { m11: prod[0], m12: prod[1], m21: prod[2], m22: prod[3] },
            dprod,
        )
    }

    pub fn markov_residual(&self) -> f64 {
        let x = self.gen_a.trace();
        let y = self.gen_b.trace();
        let z = self.gen_a.compose(&self.gen_b).trace();
        (x * x + y * y + z * z - x * y * z).abs()
    }
}

fn mat_mul(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

fn mat_add(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

pub fn commutator_trace(g: &PuncturedTorusGroup) -> f64 {
    g.gen_a
        .compose(&g.gen_b)
        .compose(&g.gen_a.inverse())
        .compose(&g.gen_b.inverse())
        .trace()
}

/// All reduced words of length <= max_len with their matrices, in
/// deterministic lexicographic order (A < a < B < b at each position).
pub fn enumerate_elements(
    g: &PuncturedTorusGroup,
    max_len: usize,
) -> Result<Vec<(Word, MoebiusMap)>> {
    enumerate_elements_capped(g, max_len, DEFAULT_WORD_CAP)
}

pub fn enumerate_elements_capped(
    g: &PuncturedTorusGroup,
    max_len: usize,
    cap: usize,
) -> Result<Vec<(Word, MoebiusMap)>> {
    if max_len > cap {
        return Err(WplabError::EnumerationCap { requested: max_len, cap });
    }
    const ORDER: [Gen; 4] = [Gen::A, Gen::AInv, Gen::B, Gen::BInv];
    let mut out: Vec<(Word, MoebiusMap)> = Vec::new();
    let mut layer: Vec<(Word, MoebiusMap)> =
        vec![(Word::default(), MoebiusMap::identity())];
    for _ in 1..=max_len {
        let mut next = Vec::with_capacity(layer.len() * 3);
        for (w, m) in &layer {
            for &g2 in &ORDER {
                if w.0.last() == Some(&g2.inverse()) {
                    continue;
                }
                let mut nw = w.clone();
                nw.0.push(g2);
                let nm = m.compose(&g.generator(g2));
                next.push((nw, nm));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    Ok(out)
}

/// Translation length 2 arccosh(|tr|/2) of a hyperbolic element.
pub fn length_from_trace(m: &MoebiusMap) -> Result<f64> {
    let t = m.trace().abs();
    if t <= 2.0 + 1e-12 {
        return Err(WplabError::NotHyperbolic { trace_abs: t });
    }
    Ok(2.0 * (0.5 * t).acosh())
}

/// Fixed points of a hyperbolic element on the extended real line.
pub fn axis(m: &MoebiusMap) -> Result<GeodesicEnds> {
    let t = m.trace().abs();
    if t <= 2.0 + 1e-12 {
        return Err(WplabError::NotHyperbolic { trace_abs: t });
    }
    if m.m21 == 0.0 {
        // fixes infinity and m12/(m22 - m11)
        return GeodesicEnds::new(m.m12 / (m.m22 - m.m11), f64::INFINITY);
    }
    let tr = m.trace();
    let disc = (tr * tr - 4.0).sqrt();
    let r1 = (m.m11 - m.m22 + disc) / (2.0 * m.m21);
    let r2 = (m.m11 - m.m22 - disc) / (2.0 * m.m21);
    GeodesicEnds::new(r1, r2)
}

/// Length of the closed geodesic in the class of `curve` at the marked group.
pub fn curve_length(g: &PuncturedTorusGroup, curve: &CurveClass) -> Result<f64> {
    length_from_trace(&g.matrix_of_word(&curve.word))
}

/// d(length)/d(coordinate) by exact propagation through the construction:
/// l = 2 arccosh(|T|/2) gives dl = 2 sign(T) dT / sqrt(T^2 - 4).
pub fn curve_length_derivative(
    g: &PuncturedTorusGroup,
    curve: &CurveClass,
    coord: usize,
) -> Result<f64> {
    let (m, dm) = g.matrix_and_derivative(&curve.word, coord);
    let t = m.trace();
    if t.abs() <= 2.0 + 1e-12 {
        return Err(WplabError::NotHyperbolic { trace_abs: t.abs() });
    }
    let dt = dm[0] + dm[3];
    Ok(2.0 * t.signum() * dt / (t * t - 4.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::{dist_point_geodesic, HPoint};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn fnp(l: f64, tau: f64) -> FNPoint {
        FNPoint::new(l, tau).unwrap()
    }

    /// The symmetric square point: tr A = 3.
    fn square_point() -> FNPoint {
        fnp(2.0 * 1.5f64.acosh(), 0.0)
    }

    #[test]
    fn square_point_has_traces_3_3_3() {
        let g = group_from_fn(square_point());
        assert_relative_eq!(g.gen_a.trace(), 3.0, max_relative = 1e-12);
        assert_relative_eq!(g.gen_b.trace(), 3.0, max_relative = 1e-12);
        assert_relative_eq!(g.gen_a.compose(&g.gen_b).trace(), 3.0, max_relative = 1e-12);
    }

    #[test]
    fn trace_of_gen_a_is_2cosh_half_length() {
        for l in [0.3, 1.0, 2.5] {
            let g = group_from_fn(fnp(l, 0.0));
            assert_relative_eq!(g.gen_a.trace(), 2.0 * (0.5 * l).cosh(), max_relative = 1e-12);
        }
    }

    #[test]
    fn full_twist_is_dehn_twist_relabeling() {
        // spectra at (l, tau + l) match spectra at (l, tau) with B -> AB
        let l = 1.7;
        let tau = 0.43;
        let g1 = group_from_fn(fnp(l, tau));
        let g2 = group_from_fn(fnp(l, tau + l));
        let sample = ["A", "B", "AB", "ABB", "AAB", "ABab"];
        for s in sample {
            let w = parse_word(s);
            let relabeled = relabel_b_to_ab(&w);
            let t1 = g1.matrix_of_word(&relabeled).trace();
            let t2 = g2.matrix_of_word(&w).trace();
            assert_relative_eq!(t1, t2, max_relative = 1e-9);
        }
    }

    fn parse_word(s: &str) -> Word {
        Word(
            s.chars()
                .map(|c| match c {
                    'A' => Gen::A,
                    'a' => Gen::AInv,
                    'B' => Gen::B,
                    'b' => Gen::BInv,
                    _ => panic!("bad letter"),
                })
                .collect(),
        )
    }

    fn relabel_b_to_ab(w: &Word) -> Word {
        let mut out = Word::default();
        for &g in &w.0 {
            let piece = match g {
                Gen::B => parse_word("AB"),
                Gen::BInv => parse_word("ba"),
                other => Word(vec![other]),
            };
            out = out.concat(&piece);
        }
        out
    }

    #[test]
    fn enumerate_counts() {
        let g = group_from_fn(square_point());
        assert_eq!(enumerate_elements(&g, 1).unwrap().len(), 4);
        assert_eq!(enumerate_elements(&g, 2).unwrap().len(), 16);
        for (_, m) in enumerate_elements(&g, 4).unwrap() {
            assert_abs_diff_eq!(m.det(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn enumerate_cap_enforced() {
        let g = group_from_fn(square_point());
        assert!(matches!(
            enumerate_elements_capped(&g, 9, 8),
            Err(WplabError::EnumerationCap { .. })
        ));
    }

    #[test]
    fn primitive_conventions() {
        assert_eq!(primitive_class(Slope::new(1, 0).unwrap()).unwrap().word.to_string(), "A");
        assert_eq!(primitive_class(Slope::new(0, 1).unwrap()).unwrap().word.to_string(), "B");
        assert_eq!(primitive_class(Slope::new(1, 1).unwrap()).unwrap().word.to_string(), "AB");
    }

    #[test]
    fn slope_must_be_reduced() {
        assert!(matches!(Slope::new(2, 4), Err(WplabError::NonReducedSlope { .. })));
    }

    #[test]
    fn half_slope_matches_brute_force_trace() {
        // minimal |trace| over reduced words of length <= 3 whose
        // abelianization is +-(1, 2)
        let g = group_from_fn(square_point());
        let c = primitive_class(Slope::new(1, 2).unwrap()).unwrap();
        assert_eq!(c.word.len(), 3);
        let t_claimed = g.matrix_of_word(&c.word).trace().abs();
        let mut best = f64::INFINITY;
        for (w, m) in enumerate_elements(&g, 3).unwrap() {
            let ab = w.abelianization();
            if ab == (1, 2) || ab == (-1, -2) {
                best = best.min(m.trace().abs());
            }
        }
        assert_relative_eq!(t_claimed, best, max_relative = 1e-12);
        assert_relative_eq!(t_claimed, 6.0, max_relative = 1e-12);
    }

    #[test]
    fn length_from_trace_examples() {
        let l = length_from_trace(&MoebiusMap::dilation(2.0)).unwrap();
        assert_relative_eq!(l, 2.0, max_relative = 1e-13);
        let m = MoebiusMap { m11: 2.0, m12: 1.0, m21: 1.0, m22: 1.0 }; // trace 3
        assert_relative_eq!(length_from_trace(&m).unwrap(), 2.0 * 1.5f64.acosh(), max_relative = 1e-13);
        let parabolic = MoebiusMap { m11: 1.0, m12: 1.0, m21: 0.0, m22: 1.0 };
        assert!(matches!(length_from_trace(&parabolic), Err(WplabError::NotHyperbolic { .. })));
    }

    #[test]
    fn axis_examples() {
        let ax = axis(&MoebiusMap::dilation(2.0)).unwrap();
        assert_eq!((ax.a(), ax.b()), (0.0, f64::INFINITY));

        let t = MoebiusMap { m11: 1.0, m12: 1.0, m21: 0.0, m22: 1.0 };
        let conj = t.compose(&MoebiusMap::dilation(2.0)).compose(&t.inverse());
        let ax = axis(&conj).unwrap();
        assert_relative_eq!(ax.a(), 1.0, max_relative = 1e-12);
        assert!(ax.b().is_infinite());
    }

    #[test]
    fn axis_is_invariant_under_the_element() {
        let g = group_from_fn(fnp(1.3, 0.4));
        let m = g.matrix_of_word(&parse_word("ABab")).compose(&g.gen_a); // some hyperbolic
        let ax = axis(&m).unwrap();
        let z = HPoint::new(0.37, 1.9);
        let lhs = dist_point_geodesic(m.apply(z), ax);
        let rhs = dist_point_geodesic(z, ax);
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-9);
    }

    #[test]
    fn translation_along_axis_matches_length() {
        let g = group_from_fn(fnp(0.9, -0.3));
        for s in ["B", "AB", "ABB"] {
            let m = g.matrix_of_word(&parse_word(s));
            let ax = axis(&m).unwrap();
            let l = length_from_trace(&m).unwrap();
            // displacement of a point on the axis equals the translation length
            let ends = (ax.a(), ax.b());
            let z = if ends.1.is_infinite() {
                HPoint::new(ends.0, 1.0)
            } else {
                HPoint::new(0.5 * (ends.0 + ends.1), 0.5 * (ends.1 - ends.0))
            };
            assert_relative_eq!(z.dist(m.apply(z)), l, max_relative = 1e-9);
        }
    }

    #[test]
    fn analytic_length_derivatives_match_central_differences() {
        let p = fnp(1.9, 0.27);
        let g = group_from_fn(p);
        let h = 1e-5;
        for slope in [(0, 1), (1, 1), (1, 2), (-1, 1)] {
            let c = primitive_class(Slope::new(slope.0, slope.1).unwrap()).unwrap();
            for coord in [0usize, 1usize] {
                let exact = curve_length_derivative(&g, &c, coord).unwrap();
                let f = |t: f64| {
                    let q = if coord == 0 { fnp(p.l_alpha + t, p.tau) } else { fnp(p.l_alpha, p.tau + t) };
                    curve_length(&group_from_fn(q), &c).unwrap()
                };
                let fd = crate::numeric::deriv1_richardson(&f, 0.0, h);
                assert_abs_diff_eq!(exact, fd, epsilon = 1e-8 * (1.0 + exact.abs()));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn markov_relation_holds(l in 0.05f64..4.0, tau in -3.0f64..3.0) {
            let g = group_from_fn(fnp(l, tau));
            prop_assert!(g.markov_residual() < 1e-9 * (1.0 + g.gen_b.trace().powi(3).abs()));
        }

        #[test]
        fn alpha_length_is_twist_independent(l in 0.05f64..4.0, tau in -3.0f64..3.0) {
            let g = group_from_fn(fnp(l, tau));
            let la = length_from_trace(&g.gen_a).unwrap();
            prop_assert!((la - l).abs() < 1e-12 * (1.0 + l));
        }

        #[test]
        fn conjugation_preserves_trace(l in 0.3f64..3.0, tau in -1.0f64..1.0) {
            let g = group_from_fn(fnp(l, tau));
            let w = parse_word("AB");
            let m = g.matrix_of_word(&w);
            for s in ["A", "B", "ab", "BA"] {
                let c = g.matrix_of_word(&parse_word(s));
                let conj = c.compose(&m).compose(&c.inverse());
                prop_assert!((conj.trace() - m.trace()).abs() < 1e-9 * (1.0 + m.trace().abs()));
            }
        }

        #[test]
        fn length_of_square_doubles(l in 0.3f64..3.0, tau in -1.0f64..1.0) {
            let g = group_from_fn(fnp(l, tau));
            let m = g.gen_b;
            let l1 = length_from_trace(&m).unwrap();
            let l2 = length_from_trace(&m.compose(&m)).unwrap();
            prop_assert!((l2 - 2.0 * l1).abs() < 1e-10 * (1.0 + l2));
        }
    }
}
