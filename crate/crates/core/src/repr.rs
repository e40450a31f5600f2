//! Exact projector families and correlation evaluation.
//!
//! A limit family assigns a full flag (an invertible rational matrix whose
//! leading column blocks are the flag steps) to every boundary point. The
//! fundamental projector of a decorated geodesic has image at the backward
//! endpoint and kernel flag at the forward endpoint; correlation functions
//! are traces of reversed projector products, and ghost intersections are
//! the signed edge-pair sums of correlations.

use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boundary::{
    cyclic_orient, epsilon, epsilon_theta, BoundaryPoint, MobiusMap, OrientedGeodesic,
    ThetaGeodesic, ThetaSignature,
};
use crate::config::{Configuration, Edge};
use crate::error::GhostError;
use crate::ghost::{GhostElement, GhostMonomial};
use crate::matrix::QMatrix;
use crate::swap::SwapElement;

type Q = BigRational;

fn q_int(n: i64) -> Q {
    Q::from(BigInt::from(n))
}

/// How a family produces flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// Ambient dimension 2; the flag at `p/q` is spanned by `(p, q)`.
    Fuchsian,
    /// Jets of the moment curve `t -> (1, t, ..., t^(d-1))`, homogenized at
    /// infinity through the reversed-coordinate chart.
    Veronese,
    /// Seeded pseudorandom flags, memoized per point; transversality is
    /// only checked when a projector is built.
    Generic { seed: u64 },
}

/// An assignment of exact flags to boundary points, with memoized flags and
/// projectors. Cheap to share; all evaluation methods take `&self`.
pub struct LimitFamily {
    kind: FamilyKind,
    sig: ThetaSignature,
    dual: bool,
    flags: Mutex<HashMap<BoundaryPoint, Arc<QMatrix>>>,
    projectors: Mutex<HashMap<(BoundaryPoint, BoundaryPoint, usize), Arc<QMatrix>>>,
}

/// An idempotent exact matrix together with its decoration weight.
#[derive(Clone, Debug)]
pub struct Projector {
    matrix: Arc<QMatrix>,
    weight: usize,
}

impl Projector {
    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn is_idempotent(&self) -> bool {
        &(&*self.matrix * &self.matrix) == &*self.matrix
    }
}

impl LimitFamily {
    pub fn new(kind: FamilyKind, sig: ThetaSignature) -> Result<Self, GhostError> {
        if matches!(kind, FamilyKind::Fuchsian) && sig.ambient() != 2 {
            return Err(GhostError::InvalidSignature(
                "the fuchsian family lives in ambient dimension 2".into(),
            ));
        }
        Ok(LimitFamily {
            kind,
            sig,
            dual: false,
            flags: Mutex::new(HashMap::new()),
            projectors: Mutex::new(HashMap::new()),
        })
    }

    pub fn fuchsian() -> Self {
        LimitFamily::new(FamilyKind::Fuchsian, ThetaSignature::projective(2)).unwrap()
    }

    pub fn veronese(dim: usize) -> Self {
        LimitFamily::new(FamilyKind::Veronese, ThetaSignature::projective(dim)).unwrap()
    }

    pub fn veronese_with(sig: ThetaSignature) -> Self {
        LimitFamily::new(FamilyKind::Veronese, sig).unwrap()
    }

    pub fn generic(dim: usize, seed: u64) -> Self {
        LimitFamily::new(FamilyKind::Generic { seed }, ThetaSignature::projective(dim)).unwrap()
    }

    pub fn signature(&self) -> &ThetaSignature {
        &self.sig
    }

    pub fn dim(&self) -> usize {
        self.sig.ambient()
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn is_projective(&self) -> bool {
        self.sig.labels() == 1 && self.sig.weight(0) == 1
    }

    /// The dual family: flags become the reversed dual basis, so that
    /// correlations satisfy `T_G(dual) = T_{reverse(G)}(self)`.
    pub fn dual(&self) -> LimitFamily {
        LimitFamily {
            kind: self.kind.clone(),
            sig: self.sig.clone(),
            dual: !self.dual,
            flags: Mutex::new(HashMap::new()),
            projectors: Mutex::new(HashMap::new()),
        }
    }

    fn base_flag(&self, x: &BoundaryPoint) -> QMatrix {
        let d = self.dim();
        match &self.kind {
            FamilyKind::Fuchsian => {
                let p = Q::from(x.numer().clone());
                let q = Q::from(x.denom().clone());
                QMatrix::from_fn(2, 2, |i, j| match (i, j) {
                    (0, 0) => p.clone(),
                    (1, 0) => q.clone(),
                    (0, 1) => -q.clone(),
                    (1, 1) => p.clone(),
                    _ => unreachable!(),
                })
            }
            FamilyKind::Veronese => match x.value() {
                Some(t) => QMatrix::from_fn(d, d, |r, k| {
                    if r < k {
                        Q::zero()
                    } else {
                        // k-th derivative of t^r, divided by k!
                        let mut c = Q::one();
                        for s in 0..k {
                            c = c * q_int((r - s) as i64) / q_int((s + 1) as i64);
                        }
                        let mut p = Q::one();
                        for _ in 0..(r - k) {
                            p = p * &t;
                        }
                        c * p
                    }
                }),
                None => QMatrix::from_fn(d, d, |r, k| {
                    if r == d - 1 - k {
                        Q::one()
                    } else {
                        Q::zero()
                    }
                }),
            },
            FamilyKind::Generic { seed } => {
                let mut h = std::collections::hash_map::DefaultHasher::new();
                seed.hash(&mut h);
                x.to_string().hash(&mut h);
                let mut rng = ChaCha8Rng::seed_from_u64(h.finish());
                loop {
                    let m = QMatrix::from_fn(d, d, |_, _| {
                        Q::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(rng.gen_range(1i64..=3)))
                    });
                    if m.is_invertible() {
                        return m;
                    }
                }
            }
        }
    }

    /// The full flag at a boundary point.
    pub fn flag(&self, x: &BoundaryPoint) -> Arc<QMatrix> {
        if let Some(m) = self.flags.lock().unwrap().get(x) {
            return m.clone();
        }
        let mut m = self.base_flag(x);
        if self.dual {
            let inv_t = m.inverse().expect("flags are invertible").transpose();
            let d = self.dim();
            m = QMatrix::from_fn(d, d, |i, j| inv_t[(i, d - 1 - j)].clone());
        }
        let arc = Arc::new(m);
        self.flags
            .lock()
            .unwrap()
            .entry(x.clone())
            .or_insert(arc)
            .clone()
    }

    /// The fundamental projector of a decorated geodesic: image the flag
    /// step at the backward endpoint, kernel the complementary flag at the
    /// forward endpoint; the identity for phantom geodesics.
    pub fn projector(&self, g: &ThetaGeodesic) -> Result<Projector, GhostError> {
        let d = self.dim();
        if !self.sig.valid_label(g.label()) {
            return Err(GhostError::LabelOutOfRange {
                label: g.label(),
                labels: self.sig.labels(),
            });
        }
        let weight = self.sig.weight(g.label());
        if g.is_phantom() {
            return Ok(Projector {
                matrix: Arc::new(QMatrix::identity(d)),
                weight,
            });
        }
        let key = (g.src().clone(), g.dst().clone(), g.label());
        if let Some(m) = self.projectors.lock().unwrap().get(&key) {
            return Ok(Projector {
                matrix: m.clone(),
                weight,
            });
        }
        let k = weight;
        let img = self.flag(g.src()).leading_columns(k);
        let ker = self.flag(g.dst()).leading_columns(d - k);
        let n = img.hcat(&ker);
        let n_inv = n.inverse().map_err(|_| {
            GhostError::Transversality(g.src().to_string(), g.dst().to_string())
        })?;
        let mut selected = n.clone();
        for i in 0..d {
            for j in k..d {
                selected[(i, j)] = Q::zero();
            }
        }
        let p = Arc::new(&selected * &n_inv);
        self.projectors
            .lock()
            .unwrap()
            .entry(key)
            .or_insert(p.clone());
        Ok(Projector {
            matrix: p,
            weight,
        })
    }

    /// The ordered product of the projectors of a configuration. With the
    /// image-at-backward-endpoint convention, the tuple-order product is the
    /// one whose trace matches the multifraction pairing `(gᵢ⁺, g_{i+1}⁻)`.
    pub fn holonomy_product(&self, c: &Configuration) -> Result<QMatrix, GhostError> {
        let d = self.dim();
        let mut acc = QMatrix::identity(d);
        for g in c.geodesics() {
            let p = self.projector(g)?;
            acc = &acc * &*p.matrix;
        }
        Ok(acc)
    }

    /// The correlation value `T` of a configuration.
    pub fn correlation(&self, c: &Configuration) -> Result<Q, GhostError> {
        Ok(self.holonomy_product(c)?.trace())
    }

    /// `T` extended multiplicatively over monomials and linearly over
    /// terms, the Casimir evaluating to `1/dim`.
    pub fn correlation_element(&self, x: &GhostElement) -> Result<Q, GhostError> {
        let mut total = Q::zero();
        for (m, coeff) in x.terms() {
            total = total + coeff * &self.correlation_monomial(m)?;
        }
        Ok(total)
    }

    fn correlation_monomial(&self, m: &GhostMonomial) -> Result<Q, GhostError> {
        let mut v = Q::one();
        for c in m.factors() {
            v = v * self.correlation(c)?;
        }
        let inv_d = Q::new(BigInt::one(), BigInt::from(self.dim() as i64));
        for _ in 0..m.casimir_power() {
            v = v * &inv_d;
        }
        Ok(v)
    }

    /// The opposite ghost endomorphism of an edge: the projector product
    /// over the opposite tuple, taken in tuple order to match the
    /// correlation convention.
    pub fn opposite_endomorphism(
        &self,
        c: &Configuration,
        edge: &Edge,
    ) -> Result<QMatrix, GhostError> {
        let tuple = c.opposite(edge)?;
        let mut acc = QMatrix::identity(self.dim());
        for g in &tuple.0 {
            let p = self.projector(g)?;
            acc = &acc * &*p.matrix;
        }
        Ok(acc)
    }

    /// The ghost intersection `I(G, H)`: the signed sum over edge pairs of
    /// correlations of closed opposite tuples, with the Casimir correction
    /// in the geodesic-geodesic case. Equal to `T` of the bracket; computed
    /// here by its own edge sum so the identity stays a two-route check.
    pub fn intersection(&self, g: &Configuration, h: &Configuration) -> Result<Q, GhostError> {
        let pg = g.ghost_polygon();
        let ph = h.ghost_polygon();
        let sign = |rank: usize, e: &Edge| -> i64 {
            if rank == 1 || e.is_ghost() {
                -1
            } else {
                1
            }
        };
        let mut total = Q::zero();
        for b in pg.edges() {
            let b_opp = g.opposite(b).expect("own edge");
            for c in ph.edges() {
                let e = epsilon_theta(c.theta(), b.theta());
                if e.is_zero() {
                    continue;
                }
                let s = sign(g.rank(), b) * sign(h.rank(), c);
                let closed = h
                    .opposite(c)
                    .expect("own edge")
                    .concat(b_opp.clone())
                    .close()
                    .expect("non-empty");
                total = total + e * q_int(s) * self.correlation(&closed)?;
            }
        }
        if g.rank() == 1 && h.rank() == 1 {
            let (gg, hg) = (&g.geodesics()[0], &h.geodesics()[0]);
            let e = epsilon_theta(hg, gg);
            if !e.is_zero() {
                let w = q_int((gg.theta_weight(&self.sig) * hg.theta_weight(&self.sig)) as i64);
                let inv_d = Q::new(BigInt::one(), BigInt::from(self.dim() as i64));
                total = total - e * w * inv_d;
            }
        }
        Ok(total)
    }

    /// The factored projective form of the ghost intersection:
    /// `T_G T_H sum of signed correlations of edge pairs`. Defined for
    /// projective families when not both arguments are geodesics.
    pub fn intersection_factored(
        &self,
        g: &Configuration,
        h: &Configuration,
    ) -> Result<Q, GhostError> {
        if !self.is_projective() {
            return Err(GhostError::Precondition(
                "factored intersection needs a projective family".into(),
            ));
        }
        if g.rank() == 1 && h.rank() == 1 {
            return Err(GhostError::Precondition(
                "factored intersection needs a polygon on one side".into(),
            ));
        }
        let pg = g.ghost_polygon();
        let ph = h.ghost_polygon();
        let sign = |rank: usize, e: &Edge| -> i64 {
            if rank == 1 || e.is_ghost() {
                -1
            } else {
                1
            }
        };
        let mut inner = Q::zero();
        for b in pg.edges() {
            for c in ph.edges() {
                let e = epsilon_theta(c.theta(), b.theta());
                if e.is_zero() {
                    continue;
                }
                let s = sign(g.rank(), b) * sign(h.rank(), c);
                let pair = Configuration::new(vec![c.theta().clone(), b.theta().clone()])?;
                inner = inner + e * q_int(s) * self.correlation(&pair)?;
            }
        }
        Ok(self.correlation(g)? * self.correlation(h)? * inner)
    }

    /// Evaluation of swapping elements: pairs evaluate through the flags,
    /// the Casimir to `1/dim`; logarithm factors have no value.
    pub fn swap_evaluation(&self, x: &SwapElement) -> Result<Q, GhostError> {
        let mut total = Q::zero();
        for (m, coeff) in x.terms() {
            if m.has_logs() {
                return Err(GhostError::LogarithmNotEvaluable);
            }
            let mut v = coeff.clone();
            for (p, e) in m.pairs() {
                let val = self.pairing(p.upper(), p.lower())?;
                if val.is_zero() {
                    if e > 0 {
                        v = Q::zero();
                        break;
                    }
                    return Err(GhostError::Transversality(
                        p.upper().to_string(),
                        p.lower().to_string(),
                    ));
                }
                for _ in 0..e.unsigned_abs() {
                    if e > 0 {
                        v = v * &val;
                    } else {
                        v = v / &val;
                    }
                }
            }
            let inv_d = Q::new(BigInt::one(), BigInt::from(self.dim() as i64));
            for _ in 0..m.casimir_power() {
                v = v * &inv_d;
            }
            total = total + v;
        }
        Ok(total)
    }

    /// The pairing `<xi*(upper), xi(lower)>`: the determinant of the
    /// hyperplane flag at `upper` against the line at `lower`.
    pub fn pairing(&self, upper: &BoundaryPoint, lower: &BoundaryPoint) -> Result<Q, GhostError> {
        let d = self.dim();
        let up = self.flag(upper);
        let lo = self.flag(lower);
        let m = QMatrix::from_fn(d, d, |i, j| {
            if j < d - 1 {
                up[(i, j)].clone()
            } else {
                lo[(i, 0)].clone()
            }
        });
        Ok(det(&m))
    }
}

/// Exact determinant by fraction-free-ish Gaussian elimination.
fn det(m: &QMatrix) -> Q {
    let n = m.rows();
    let mut a = m.clone();
    let mut sign = Q::one();
    let mut result = Q::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !a[(r, col)].is_zero()) {
            Some(p) => p,
            None => return Q::zero(),
        };
        if pivot != col {
            for j in 0..n {
                let x = a[(pivot, j)].clone();
                let y = a[(col, j)].clone();
                a[(pivot, j)] = y;
                a[(col, j)] = x;
            }
            sign = -sign;
        }
        let p = a[(col, col)].clone();
        result = result * &p;
        for r in (col + 1)..n {
            if a[(r, col)].is_zero() {
                continue;
            }
            let f = &a[(r, col)] / &p;
            for j in col..n {
                let t = &a[(col, j)] * &f;
                a[(r, j)] = &a[(r, j)] - &t;
            }
        }
    }
    sign * result
}

/// The configuration of an ideal triangle's sides taken in the reversed
/// cyclic order, whose correlation is the triangle function.
pub fn triangle_configuration(
    v1: &BoundaryPoint,
    v2: &BoundaryPoint,
    v3: &BoundaryPoint,
    label: usize,
) -> Result<Configuration, GhostError> {
    if v1 == v2 || v2 == v3 || v1 == v3 {
        return Err(GhostError::Precondition(
            "ideal triangle needs pairwise distinct vertices".into(),
        ));
    }
    let a1 = ThetaGeodesic::new(OrientedGeodesic::new(v1.clone(), v2.clone()), label);
    let a2 = ThetaGeodesic::new(OrientedGeodesic::new(v2.clone(), v3.clone()), label);
    let a3 = ThetaGeodesic::new(OrientedGeodesic::new(v3.clone(), v1.clone()), label);
    Configuration::new(vec![a1, a3, a2])
}

/// The triangle function of an ideal triangle under a family.
pub fn triangle_function(
    f: &LimitFamily,
    v1: &BoundaryPoint,
    v2: &BoundaryPoint,
    v3: &BoundaryPoint,
) -> Result<Q, GhostError> {
    f.correlation(&triangle_configuration(v1, v2, v3, 0)?)
}

/// True when `h` meets `g1` no later than `g0` along its orientation; the
/// ordering hypothesis of the triple-bracket and sign lemmas. Geodesics not
/// crossing `h` in the interior impose no constraint.
pub fn admissible_sign_triple(
    g1: &OrientedGeodesic,
    g0: &OrientedGeodesic,
    h: &OrientedGeodesic,
) -> bool {
    // contact with h's backward endpoint is only allowed for g1, with the
    // forward endpoint only for g0
    for e in [g0.src(), g0.dst()] {
        if e == h.src() {
            return false;
        }
    }
    for e in [g1.src(), g1.dst()] {
        if e == h.dst() {
            return false;
        }
    }
    let e1 = epsilon(g1, h);
    let e0 = epsilon(g0, h);
    if e1.abs() != Q::one() || e0.abs() != Q::one() {
        return true;
    }
    if g1 == g0 || *g1 == g0.reverse() {
        return true;
    }
    // both cross in the interior: compare positions along h through the
    // endpoints on the positive side of h
    let side = |x: &BoundaryPoint| cyclic_orient(h.src(), x, h.dst());
    let pos1 = if side(g1.src()) == 1 { g1.src() } else { g1.dst() };
    let pos0 = if side(g0.src()) == 1 { g0.src() } else { g0.dst() };
    cyclic_orient(h.src(), pos1, pos0) == 1
}

/// The two closed forms of the triple bracket `[g1, [g0, h]]` under a
/// positive ordering, evaluated exactly.
#[derive(Clone, Debug)]
pub struct SignLemmaTerm {
    /// `eps1 eps0 (T<g1,h,g0> - T<g1,h> T<g0,h>)`.
    pub value: Q,
    /// `eps1 eps0 T<g1,h> T<g0,h> (T<gamma0,gamma1> - 1)`.
    pub factored: Q,
    pub eps1: Q,
    pub eps0: Q,
    /// Strict positivity is expected exactly when both crossings are
    /// interior.
    pub strict_expected: bool,
}

/// Evaluates the sign-lemma term for an admissible triple.
pub fn sign_lemma_term(
    f: &LimitFamily,
    g1: &ThetaGeodesic,
    g0: &ThetaGeodesic,
    h: &ThetaGeodesic,
) -> Result<SignLemmaTerm, GhostError> {
    if !epsilon_theta(g0, g1).is_zero() {
        return Err(GhostError::Precondition("eps(g0, g1) must vanish".into()));
    }
    if !admissible_sign_triple(g1.geodesic(), g0.geodesic(), h.geodesic()) {
        return Err(GhostError::Precondition(
            "h must meet g1 before g0".into(),
        ));
    }
    let eps1 = epsilon_theta(g1, h);
    let eps0 = epsilon_theta(g0, h);
    let t_g1hg0 = f.correlation(&Configuration::new(vec![
        g1.clone(),
        h.clone(),
        g0.clone(),
    ])?)?;
    let t_g1h = f.correlation(&Configuration::new(vec![g1.clone(), h.clone()])?)?;
    let t_g0h = f.correlation(&Configuration::new(vec![g0.clone(), h.clone()])?)?;
    let value = &eps1 * &eps0 * (&t_g1hg0 - &t_g1h * &t_g0h);

    let gamma0 = ThetaGeodesic::new(
        OrientedGeodesic::new(h.src().clone(), g0.dst().clone()),
        g0.label(),
    );
    let gamma1 = ThetaGeodesic::new(
        OrientedGeodesic::new(g1.src().clone(), h.dst().clone()),
        g1.label(),
    );
    let t_gamma = f.correlation(&Configuration::new(vec![gamma0, gamma1])?)?;
    let factored = &eps1 * &eps0 * &t_g1h * &t_g0h * (&t_gamma - Q::one());
    let strict_expected = (&eps1 * &eps0).abs() == Q::one();
    Ok(SignLemmaTerm {
        value,
        factored,
        eps1,
        eps0,
        strict_expected,
    })
}

/// Free generators of a boundary-acting group, all determinant-positive.
#[derive(Clone, Debug)]
pub struct GroupPresentation {
    gens: Vec<MobiusMap>,
}

impl GroupPresentation {
    pub fn new(gens: Vec<MobiusMap>) -> Result<Self, GhostError> {
        for g in &gens {
            if !g.det().is_positive() {
                return Err(GhostError::Precondition(
                    "group generators must have positive determinant".into(),
                ));
            }
        }
        Ok(GroupPresentation { gens })
    }

    pub fn trivial() -> Self {
        GroupPresentation { gens: Vec::new() }
    }

    pub fn generators(&self) -> &[MobiusMap] {
        &self.gens
    }

    /// All reduced words of exactly the given length.
    fn words_of_length(&self, len: usize) -> Vec<(MobiusMap, Option<(usize, bool)>)> {
        let mut current = vec![(MobiusMap::identity(), None)];
        for _ in 0..len {
            let mut next = Vec::new();
            for (m, last) in &current {
                for (i, g) in self.gens.iter().enumerate() {
                    for inv in [false, true] {
                        if let Some((li, linv)) = last {
                            if *li == i && *linv != inv {
                                continue; // immediate cancellation
                            }
                        }
                        let factor = if inv { g.inverse() } else { g.clone() };
                        next.push((m.compose(&factor), Some((i, inv))));
                    }
                }
            }
            current = next;
        }
        current
    }
}

/// Per-length diagnostics of an orbit sum.
#[derive(Clone, Debug)]
pub struct OrbitRow {
    pub length: usize,
    pub words: usize,
    pub skipped: usize,
    /// Sum of the terms at exactly this word length.
    pub layer_sum: Q,
    /// Cumulative sum over lengths up to this one.
    pub partial_sum: Q,
}

#[derive(Clone, Debug)]
pub struct OrbitSum {
    pub rows: Vec<OrbitRow>,
    pub total: Q,
}

/// Sums `I(G, w . H)` over reduced words `w` of length at most `max_len`,
/// reporting exact per-length partial sums. Evaluation failures for
/// individual words are skipped and counted.
pub fn orbit_sum(
    f: &LimitFamily,
    g: &Configuration,
    h: &Configuration,
    group: &GroupPresentation,
    max_len: usize,
) -> Result<OrbitSum, GhostError> {
    let mut rows = Vec::new();
    let mut running = Q::zero();
    for len in 0..=max_len {
        let words = group.words_of_length(len);
        if words.is_empty() && len > 0 {
            rows.push(OrbitRow {
                length: len,
                words: 0,
                skipped: 0,
                layer_sum: Q::zero(),
                partial_sum: running.clone(),
            });
            continue;
        }
        let mut layer = Q::zero();
        let mut skipped = 0usize;
        let count = words.len();
        for (w, _) in words {
            let moved = Configuration::new(
                h.geodesics()
                    .iter()
                    .map(|tg| crate::boundary::apply_mobius(&w, tg))
                    .collect(),
            )?;
            match f.intersection(g, &moved) {
                Ok(v) => layer = layer + v,
                Err(_) => skipped += 1,
            }
        }
        running = &running + &layer;
        rows.push(OrbitRow {
            length: len,
            words: count,
            skipped,
            layer_sum: layer,
            partial_sum: running.clone(),
        });
    }
    Ok(OrbitSum {
        total: running,
        rows,
    })
}
