//! The ghost algebra: rational linear combinations of monomials in
//! configurations and the Casimir generator, the edge-pair bracket with its
//! Leibniz extension, nested brackets, and the eight cancellation families
//! whose pairwise cancellations prove the Jacobi identity for triples with
//! no common vertex.
//!
//! Sign conventions: an edge contributes `+1` when visible and `-1` when it
//! is a ghost edge, and the unique edge of a rank-1 configuration counts as
//! ghost-indexed. With that convention a single edge-pair formula covers all
//! ranks, and the geodesic-geodesic bracket picks up its Casimir term.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::boundary::{
    epsilon, epsilon_theta, BoundaryPoint, OrientedGeodesic, ThetaGeodesic, ThetaSignature,
};
use crate::config::{Configuration, Edge, EdgeTuple};

type Q = BigRational;

/// A commutative monomial: a multiset of configuration generators and a
/// power of the Casimir generator. The Casimir is a tracked generator, not
/// the ring unit: it evaluates to `1/dim` under correlation and maps to the
/// central swapping generator under `pi`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GhostMonomial {
    factors: Vec<Configuration>,
    casimir: u32,
}

impl GhostMonomial {
    pub fn unit() -> Self {
        GhostMonomial {
            factors: Vec::new(),
            casimir: 0,
        }
    }

    pub fn casimir(power: u32) -> Self {
        GhostMonomial {
            factors: Vec::new(),
            casimir: power,
        }
    }

    pub fn from_configuration(c: Configuration) -> Self {
        GhostMonomial {
            factors: vec![c],
            casimir: 0,
        }
    }

    pub fn from_factors(mut factors: Vec<Configuration>, casimir: u32) -> Self {
        factors.sort();
        GhostMonomial { factors, casimir }
    }

    pub fn factors(&self) -> &[Configuration] {
        &self.factors
    }

    pub fn casimir_power(&self) -> u32 {
        self.casimir
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty() && self.casimir == 0
    }

    pub fn mul(&self, other: &GhostMonomial) -> GhostMonomial {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        factors.sort();
        GhostMonomial {
            factors,
            casimir: self.casimir + other.casimir,
        }
    }

    fn without_factor(&self, index: usize) -> GhostMonomial {
        let mut factors = self.factors.clone();
        factors.remove(index);
        GhostMonomial {
            factors,
            casimir: self.casimir,
        }
    }
}

impl fmt::Debug for GhostMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GhostMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let mut first = true;
        if self.casimir > 0 {
            if self.casimir == 1 {
                write!(f, "cas")?;
            } else {
                write!(f, "cas^{}", self.casimir)?;
            }
            first = false;
        }
        for c in &self.factors {
            if !first {
                write!(f, "*")?;
            }
            write!(f, "{c}")?;
            first = false;
        }
        Ok(())
    }
}

/// A finite rational combination of ghost monomials, normalized: no zero
/// coefficients are stored, so equality is structural.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct GhostElement {
    terms: BTreeMap<GhostMonomial, Q>,
}

impl GhostElement {
    pub fn zero() -> Self {
        GhostElement::default()
    }

    /// The ring unit (the empty monomial), not the Casimir generator.
    pub fn one() -> Self {
        GhostElement::from_monomial(GhostMonomial::unit(), Q::one())
    }

    /// The Casimir generator as an element.
    pub fn casimir() -> Self {
        GhostElement::from_monomial(GhostMonomial::casimir(1), Q::one())
    }

    pub fn from_configuration(c: Configuration) -> Self {
        GhostElement::from_monomial(GhostMonomial::from_configuration(c), Q::one())
    }

    pub fn from_monomial(m: GhostMonomial, coeff: Q) -> Self {
        let mut e = GhostElement::zero();
        e.add_term(m, coeff);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GhostMonomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &GhostMonomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: GhostMonomial, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let updated = o.get() + &coeff;
                if updated.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = updated;
                }
            }
        }
    }

    pub fn add(&self, other: &GhostElement) -> GhostElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &GhostElement) -> GhostElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GhostElement {
        GhostElement {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Q) -> GhostElement {
        if k.is_zero() {
            return GhostElement::zero();
        }
        GhostElement {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &GhostElement) -> GhostElement {
        let mut out = GhostElement::zero();
        for (m, cm) in &self.terms {
            for (n, cn) in &other.terms {
                out.add_term(m.mul(n), cm * cn);
            }
        }
        out
    }
}

impl fmt::Debug for GhostElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GhostElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{m}")?;
        }
        Ok(())
    }
}

/// Sign of an edge in the bracket formula: `-1` for ghost edges and for the
/// unique edge of a rank-1 configuration, `+1` for other visible edges.
fn edge_sign(rank: usize, edge: &Edge) -> i64 {
    if rank == 1 || edge.is_ghost() {
        -1
    } else {
        1
    }
}

fn q_int(n: i64) -> Q {
    Q::from(BigInt::from(n))
}

/// The bracket of two generators: the signed sum over edge pairs of the
/// closed opposite tuples, plus the Casimir term in the geodesic-geodesic
/// case.
pub fn bracket_generators(
    g: &Configuration,
    h: &Configuration,
    sig: &ThetaSignature,
) -> GhostElement {
    let pg = g.ghost_polygon();
    let ph = h.ghost_polygon();
    let mut out = GhostElement::zero();
    for b in pg.edges() {
        let b_opp = g.opposite(b).expect("edge of own polygon");
        for c in ph.edges() {
            let e = epsilon_theta(c.theta(), b.theta());
            if e.is_zero() {
                continue;
            }
            let sign = edge_sign(g.rank(), b) * edge_sign(h.rank(), c);
            let closed = h
                .opposite(c)
                .expect("edge of own polygon")
                .concat(b_opp.clone())
                .close()
                .expect("non-empty tuple");
            out.add_term(GhostMonomial::from_configuration(closed), e * q_int(sign));
        }
    }
    if g.rank() == 1 && h.rank() == 1 {
        let (gg, hg) = (&g.geodesics()[0], &h.geodesics()[0]);
        let e = epsilon_theta(hg, gg);
        if !e.is_zero() {
            let w = q_int((gg.theta_weight(sig) * hg.theta_weight(sig)) as i64);
            out.add_term(GhostMonomial::casimir(1), -e * w);
        }
    }
    out
}

/// The bracket extended to the polynomial algebra: bilinear, antisymmetric,
/// Leibniz in every monomial factor. Casimir factors are central.
pub fn bracket(x: &GhostElement, y: &GhostElement, sig: &ThetaSignature) -> GhostElement {
    let mut out = GhostElement::zero();
    for (m, cm) in x.terms() {
        for (n, cn) in y.terms() {
            let coeff = cm * cn;
            for i in 0..m.factors().len() {
                for j in 0..n.factors().len() {
                    let base = bracket_generators(&m.factors()[i], &n.factors()[j], sig);
                    if base.is_zero() {
                        continue;
                    }
                    let rest = m.without_factor(i).mul(&n.without_factor(j));
                    for (bm, bc) in base.terms() {
                        out.add_term(bm.mul(&rest), bc * &coeff);
                    }
                }
            }
        }
    }
    out
}

/// The right-nested bracket `[G1, [G2, [..., Gn]...]]`.
pub fn nested_bracket(elements: &[GhostElement], sig: &ThetaSignature) -> GhostElement {
    assert!(elements.len() >= 2, "nested bracket needs at least two elements");
    let mut acc = elements.last().unwrap().clone();
    for x in elements[..elements.len() - 1].iter().rev() {
        acc = bracket(x, &acc, sig);
    }
    acc
}

/// The cyclic sum `[A,[B,C]] + [B,[C,A]] + [C,[A,B]]`, which vanishes when
/// no point is a vertex of all three arguments.
pub fn jacobiator(
    a: &GhostElement,
    b: &GhostElement,
    c: &GhostElement,
    sig: &ThetaSignature,
) -> GhostElement {
    let mut out = bracket(a, &bracket(b, c, sig), sig);
    out = out.add(&bracket(b, &bracket(c, a, sig), sig));
    out.add(&bracket(c, &bracket(a, b, sig), sig))
}

/// True iff every visible edge of every configuration in `out` is a visible
/// edge of one of the inputs (the natural-map property of nested brackets).
pub fn output_edges_among_inputs(out: &GhostElement, inputs: &[&Configuration]) -> bool {
    let mut pool: Vec<&ThetaGeodesic> = Vec::new();
    for c in inputs {
        pool.extend(c.geodesics());
    }
    out.terms().all(|(m, _)| {
        m.factors()
            .iter()
            .all(|c| c.geodesics().iter().all(|g| pool.contains(&g)))
    })
}

/// The eight term families of the triple bracket `[A,[B,C]]`, split by where
/// the outer pairing lands in the inner bracket's polygon: inside B away
/// from b, inside C away from c, on an occurrence of a visible b or c, or on
/// one of the two joining ghost edges.
pub struct CancellationFamilies {
    pub p1: GhostElement,
    pub p2: GhostElement,
    pub q1: GhostElement,
    pub q2: GhostElement,
    pub r1: GhostElement,
    pub r2: GhostElement,
    pub s1: GhostElement,
    pub s2: GhostElement,
}

impl CancellationFamilies {
    /// Reassembles `[A,[B,C]]` from the families, following the rank split:
    /// a rank-1 middle or inner argument drops its P family and collapses
    /// its two occurrence families into one.
    pub fn assemble(&self, rank_b: usize, rank_c: usize) -> GhostElement {
        let mut total = self.s1.add(&self.s2);
        match (rank_b == 1, rank_c == 1) {
            (false, false) => {
                for f in [&self.p1, &self.p2, &self.q1, &self.q2, &self.r1, &self.r2] {
                    total = total.add(f);
                }
            }
            (true, false) => {
                for f in [&self.p2, &self.q1, &self.r1, &self.r2] {
                    total = total.add(f);
                }
            }
            (false, true) => {
                for f in [&self.p1, &self.q1, &self.q2, &self.r1] {
                    total = total.add(f);
                }
            }
            (true, true) => {
                total = total.add(&self.q1).add(&self.r1);
            }
        }
        total
    }
}

/// Computes the eight families for configurations `A`, `B`, `C`.
///
/// Each family is the literal sum over its index set, with opposite tuples
/// and intervals taken in the home polygons of `B` and `C`, never in the
/// inner bracket's result; termwise agreement of [`CancellationFamilies::assemble`]
/// with the directly computed nested bracket is therefore a real check of
/// the opposite-edge formulas.
pub fn cancellation_terms(
    a: &Configuration,
    b: &Configuration,
    c: &Configuration,
    _sig: &ThetaSignature,
) -> CancellationFamilies {
    let pa = a.ghost_polygon();
    let pb = b.ghost_polygon();
    let pc = c.ghost_polygon();
    let sa = |e: &Edge| edge_sign(a.rank(), e);
    let sb = |e: &Edge| edge_sign(b.rank(), e);
    let sc = |e: &Edge| edge_sign(c.rank(), e);
    let opp_a = |e: &Edge| a.opposite(e).expect("own edge");
    let opp_b = |e: &Edge| b.opposite(e).expect("own edge");
    let opp_c = |e: &Edge| c.opposite(e).expect("own edge");

    let mut fam = CancellationFamilies {
        p1: GhostElement::zero(),
        p2: GhostElement::zero(),
        q1: GhostElement::zero(),
        q2: GhostElement::zero(),
        r1: GhostElement::zero(),
        r2: GhostElement::zero(),
        s1: GhostElement::zero(),
        s2: GhostElement::zero(),
    };

    let add = |elem: &mut GhostElement, tuple: EdgeTuple, coeff: Q| {
        if coeff.is_zero() {
            return;
        }
        let cfg = tuple.close().expect("non-empty");
        elem.add_term(GhostMonomial::from_configuration(cfg), coeff);
    };

    for b_e in pb.edges() {
        for c_e in pc.edges() {
            let inner = epsilon_theta(c_e.theta(), b_e.theta());
            if inner.is_zero() {
                continue;
            }
            let inner_sign = sb(b_e) * sc(c_e);
            let b_opp = opp_b(b_e);
            let c_opp = opp_c(c_e);

            for a_e in pa.edges() {
                let a_opp = opp_a(a_e);
                let base = &inner * q_int(inner_sign * sa(a_e));

                // P1: outer pairing inside B, away from b
                for phi in pb.edges() {
                    if phi == b_e {
                        continue;
                    }
                    let outer = epsilon_theta(phi.theta(), a_e.theta());
                    if outer.is_zero() {
                        continue;
                    }
                    let tuple = b
                        .interval(phi, b_e)
                        .expect("own edges")
                        .concat(c_opp.clone())
                        .concat(b.interval(b_e, phi).expect("own edges"))
                        .concat(a_opp.clone());
                    add(
                        &mut fam.p1,
                        tuple,
                        &base * outer * q_int(edge_sign(b.rank(), phi)),
                    );
                }

                // P2: outer pairing inside C, away from c
                for phi in pc.edges() {
                    if phi == c_e {
                        continue;
                    }
                    let outer = epsilon_theta(phi.theta(), a_e.theta());
                    if outer.is_zero() {
                        continue;
                    }
                    let tuple = c
                        .interval(phi, c_e)
                        .expect("own edges")
                        .concat(b_opp.clone())
                        .concat(c.interval(c_e, phi).expect("own edges"))
                        .concat(a_opp.clone());
                    add(
                        &mut fam.p2,
                        tuple,
                        &base * outer * q_int(edge_sign(c.rank(), phi)),
                    );
                }

                // Q: outer pairing on an occurrence of a visible b
                if !b_e.is_ghost() {
                    let outer = epsilon_theta(b_e.theta(), a_e.theta());
                    if !outer.is_zero() {
                        let single = EdgeTuple(vec![b_e.theta().clone()]);
                        // final occurrence: b . c* . b* . a*
                        let t1 = single
                            .clone()
                            .concat(c_opp.clone())
                            .concat(b_opp.clone())
                            .concat(a_opp.clone());
                        add(&mut fam.q1, t1, &base * &outer);
                        // initial occurrence: b* . c* . b . a*
                        let t2 = b_opp
                            .clone()
                            .concat(c_opp.clone())
                            .concat(single)
                            .concat(a_opp.clone());
                        add(&mut fam.q2, t2, &base * &outer);
                    }
                }

                // R: outer pairing on an occurrence of a visible c
                if !c_e.is_ghost() {
                    let outer = epsilon_theta(c_e.theta(), a_e.theta());
                    if !outer.is_zero() {
                        let single = EdgeTuple(vec![c_e.theta().clone()]);
                        // final occurrence: c . b* . c* . a*
                        let t1 = single
                            .clone()
                            .concat(b_opp.clone())
                            .concat(c_opp.clone())
                            .concat(a_opp.clone());
                        add(&mut fam.r1, t1, &base * &outer);
                        // initial occurrence: c* . b* . c . a*
                        let t2 = c_opp
                            .clone()
                            .concat(b_opp.clone())
                            .concat(single)
                            .concat(a_opp.clone());
                        add(&mut fam.r2, t2, &base * &outer);
                    }
                }

                // S1: the joining ghost edge from c's backward endpoint to
                // b's forward endpoint, opposite c* . b*
                let u = ThetaGeodesic::new(
                    OrientedGeodesic::new(c_e.theta().src().clone(), b_e.theta().dst().clone()),
                    b_e.theta().label(),
                );
                let outer = epsilon(u.geodesic(), a_e.theta().geodesic());
                if !outer.is_zero() {
                    let tuple = c_opp.clone().concat(b_opp.clone()).concat(a_opp.clone());
                    add(&mut fam.s1, tuple, &base * outer * q_int(-1));
                }

                // S2: the joining ghost edge from b's backward endpoint to
                // c's forward endpoint, opposite b* . c*
                let u = ThetaGeodesic::new(
                    OrientedGeodesic::new(b_e.theta().src().clone(), c_e.theta().dst().clone()),
                    b_e.theta().label(),
                );
                let outer = epsilon(u.geodesic(), a_e.theta().geodesic());
                if !outer.is_zero() {
                    let tuple = b_opp.clone().concat(c_opp.clone()).concat(a_opp.clone());
                    add(&mut fam.s2, tuple, &base * outer * q_int(-1));
                }
            }
        }
    }
    fam
}

/// A set of points carrying a linking number on ordered pairs; the boundary
/// circle with ε is the canonical instance. The pair `(u, v)` denotes the
/// geodesic from `u` to `v`.
pub trait LinkingStructure {
    type Point: Clone;

    fn eps(
        &self,
        a: (&Self::Point, &Self::Point),
        b: (&Self::Point, &Self::Point),
    ) -> Q;
}

/// The boundary circle with its intersection number.
pub struct CircleLinking;

impl LinkingStructure for CircleLinking {
    type Point = BoundaryPoint;

    fn eps(
        &self,
        a: (&BoundaryPoint, &BoundaryPoint),
        b: (&BoundaryPoint, &BoundaryPoint),
    ) -> Q {
        epsilon(
            &OrientedGeodesic::new(a.0.clone(), a.1.clone()),
            &OrientedGeodesic::new(b.0.clone(), b.1.clone()),
        )
    }
}

/// Evaluates the three hexagonal identities on six points. The first holds
/// unconditionally; the two product identities are theorems only when no
/// point lies in all three pairs, so callers assert them under that
/// hypothesis and merely observe them otherwise.
pub fn hexagonal_check<L: LinkingStructure>(
    ls: &L,
    x_up: &L::Point,
    x_lo: &L::Point,
    y_up: &L::Point,
    y_lo: &L::Point,
    z_up: &L::Point,
    z_lo: &L::Point,
) -> (bool, bool, bool) {
    let e = |a: (&L::Point, &L::Point), b: (&L::Point, &L::Point)| ls.eps(a, b);
    let zz = (z_up, z_lo);
    let first = e((x_up, y_lo), zz) + e((y_up, x_lo), zz)
        == e((x_up, x_lo), zz) + e((y_up, y_lo), zz);

    let xx = (x_up, x_lo);
    let yy = (y_up, y_lo);
    let second = e(xx, yy) * e((x_up, y_lo), zz)
        + e(zz, xx) * e((z_up, x_lo), yy)
        + e(yy, zz) * e((y_up, z_lo), xx);
    let third = e(xx, yy) * e((y_up, x_lo), zz)
        + e(zz, xx) * e((x_up, z_lo), yy)
        + e(yy, zz) * e((z_up, y_lo), xx);
    (first, second.is_zero(), third.is_zero())
}

/// Spot-checks the three linking-number axioms for a structure on a sample
/// of pairwise distinct points; returns the first violated axiom (1..=3).
pub fn linking_axiom_violation<L: LinkingStructure>(
    ls: &L,
    pts: &[L::Point],
) -> Option<u8> {
    let n = pts.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let (x_up, x_lo, y_up, y_lo) = (&pts[i], &pts[j], &pts[k], &pts[l]);
                    let e1 = ls.eps((x_up, x_lo), (y_up, y_lo));
                    if (&e1 + ls.eps((x_up, x_lo), (y_lo, y_up))).is_zero() == false {
                        return Some(1);
                    }
                    if (&e1 + ls.eps((y_up, y_lo), (x_up, x_lo))).is_zero() == false {
                        return Some(1);
                    }
                    if [i, j, k, l].iter().collect::<std::collections::BTreeSet<_>>().len() == 4
                        && !(e1 * ls.eps((x_up, y_lo), (y_up, x_lo))).is_zero()
                    {
                        return Some(3);
                    }
                }
            }
        }
    }
    // cocycle: eps(zy, XY) + eps(zy, YZ) + eps(zy, ZX) = 0
    for zi in 0..n {
        for yi in 0..n {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let zy = (&pts[zi], &pts[yi]);
                        let s = ls.eps(zy, (&pts[a], &pts[b]))
                            + ls.eps(zy, (&pts[b], &pts[c]))
                            + ls.eps(zy, (&pts[c], &pts[a]));
                        if !s.is_zero() {
                            return Some(2);
                        }
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::OrientedGeodesic;

    fn pt(v: i64) -> BoundaryPoint {
        BoundaryPoint::from(v)
    }

    fn tg(a: i64, b: i64) -> ThetaGeodesic {
        ThetaGeodesic::projective(OrientedGeodesic::new(pt(a), pt(b)))
    }

    fn cfg(gs: Vec<ThetaGeodesic>) -> Configuration {
        Configuration::new(gs).unwrap()
    }

    fn sig2() -> ThetaSignature {
        ThetaSignature::projective(2)
    }

    fn elem(c: Configuration) -> GhostElement {
        GhostElement::from_configuration(c)
    }

    #[test]
    fn casimir_is_central() {
        let g = elem(cfg(vec![tg(0, 2), tg(1, 3)]));
        let cas = GhostElement::casimir();
        assert!(bracket(&cas, &g, &sig2()).is_zero());
        assert!(bracket(&g, &cas, &sig2()).is_zero());
    }

    #[test]
    fn geodesic_bracket_with_casimir_term() {
        // g = (0->2), h = (1->3): eps(h, g) = -1, so [g,h] = -<h,g> + cas
        let g = cfg(vec![tg(0, 2)]);
        let h = cfg(vec![tg(1, 3)]);
        let out = bracket_generators(&g, &h, &sig2());
        let pair = GhostMonomial::from_configuration(cfg(vec![tg(1, 3), tg(0, 2)]));
        assert_eq!(out.coefficient(&pair), q_int(-1));
        assert_eq!(out.coefficient(&GhostMonomial::casimir(1)), q_int(1));
        assert_eq!(out.num_terms(), 2);
    }

    #[test]
    fn non_crossing_geodesics_bracket_to_zero() {
        let g = cfg(vec![tg(0, 1)]);
        let h = cfg(vec![tg(2, 3)]);
        assert!(bracket_generators(&g, &h, &sig2()).is_zero());
    }

    #[test]
    fn polygon_geodesic_bracket_terms() {
        // G = <g1, g2> with g1 = (0->4), g2 = (1->2); h = (-1->3) crosses
        // only g1 and the ghost edge (1->4)
        let g1 = tg(0, 4);
        let g2 = tg(1, 2);
        let big_g = cfg(vec![g1.clone(), g2.clone()]);
        let h = cfg(vec![tg(-1, 3)]);
        let out = bracket_generators(&big_g, &h, &sig2());
        assert_eq!(out.num_terms(), 2);

        let hh = tg(-1, 3);
        let from_visible =
            GhostMonomial::from_configuration(cfg(vec![hh.clone(), g1.clone(), g2.clone(), g1.clone()]));
        let from_ghost = GhostMonomial::from_configuration(cfg(vec![hh.clone(), g2.clone(), g1.clone()]));
        let eps_h_g1 = epsilon_theta(&hh, &g1);
        let eps_h_zeta = epsilon(hh.geodesic(), &OrientedGeodesic::new(pt(1), pt(4)));
        assert_eq!(out.coefficient(&from_visible), -eps_h_g1);
        assert_eq!(out.coefficient(&from_ghost), eps_h_zeta);
    }

    #[test]
    fn bracket_is_antisymmetric() {
        let xs = [
            elem(cfg(vec![tg(0, 2)])),
            elem(cfg(vec![tg(0, 2), tg(1, 3)])),
            elem(cfg(vec![tg(1, 5), tg(2, 6), tg(-1, 3)])),
        ];
        for x in &xs {
            for y in &xs {
                let xy = bracket(x, y, &sig2());
                let yx = bracket(y, x, &sig2());
                assert!(xy.add(&yx).is_zero(), "[x,y] + [y,x] != 0");
            }
            assert!(bracket(x, x, &sig2()).is_zero());
        }
    }

    #[test]
    fn bracket_satisfies_leibniz() {
        let a = elem(cfg(vec![tg(0, 2)]));
        let b = elem(cfg(vec![tg(1, 4), tg(-2, 3)]));
        let c = elem(cfg(vec![tg(1, 3)]));
        let ab = a.mul(&b);
        let lhs = bracket(&ab, &c, &sig2());
        let rhs = a.mul(&bracket(&b, &c, &sig2())).add(&bracket(&a, &c, &sig2()).mul(&b));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_is_bilinear() {
        let a = elem(cfg(vec![tg(0, 2)]));
        let b = elem(cfg(vec![tg(1, 3)]));
        let c = elem(cfg(vec![tg(-1, 1), tg(0, 3)]));
        let k = BigRational::new(BigInt::from(3), BigInt::from(7));
        let lhs = bracket(&a.scale(&k).add(&b), &c, &sig2());
        let rhs = bracket(&a, &c, &sig2()).scale(&k).add(&bracket(&b, &c, &sig2()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn nested_bracket_vanishing_case() {
        // eps(g0, h) = 0 forces [g1, [g0, h]] = 0
        let g1 = elem(cfg(vec![tg(0, 2)]));
        let g0 = elem(cfg(vec![tg(5, 6)]));
        let h = elem(cfg(vec![tg(1, 3)]));
        let out = nested_bracket(&[g1, g0, h], &sig2());
        assert!(out.is_zero());
    }

    #[test]
    fn natural_map_edge_property() {
        let a = cfg(vec![tg(0, 4), tg(1, 6)]);
        let b = cfg(vec![tg(2, 5)]);
        let c = cfg(vec![tg(3, 7), tg(-1, 1)]);
        let out = nested_bracket(
            &[elem(a.clone()), elem(b.clone()), elem(c.clone())],
            &sig2(),
        );
        assert!(output_edges_among_inputs(&out, &[&a, &b, &c]));
    }

    #[test]
    fn jacobiator_trivial_cases() {
        let a = elem(cfg(vec![tg(0, 2), tg(1, 3)]));
        let b = elem(cfg(vec![tg(-1, 4)]));
        let cas = GhostElement::casimir();
        assert!(jacobiator(&a, &b, &cas, &sig2()).is_zero());
        assert!(jacobiator(&a, &a, &b, &sig2()).is_zero());
    }

    #[test]
    fn jacobiator_vanishes_for_disjoint_vertex_triples() {
        let a = cfg(vec![tg(0, 6), tg(1, 9)]);
        let b = cfg(vec![tg(2, 7)]);
        let c = cfg(vec![tg(3, 8), tg(4, 10), tg(5, 11)]);
        let out = jacobiator(&elem(a), &elem(b), &elem(c), &sig2());
        assert!(out.is_zero(), "jacobiator = {out}");
    }

    #[test]
    fn families_reassemble_triple_bracket() {
        let triples = [
            (
                cfg(vec![tg(0, 6), tg(1, 9)]),
                cfg(vec![tg(2, 7), tg(-2, 12)]),
                cfg(vec![tg(3, 8), tg(4, 10)]),
            ),
            (
                cfg(vec![tg(0, 6), tg(1, 9)]),
                cfg(vec![tg(2, 7)]),
                cfg(vec![tg(3, 8), tg(4, 10)]),
            ),
            (
                cfg(vec![tg(0, 6)]),
                cfg(vec![tg(2, 7), tg(-2, 12)]),
                cfg(vec![tg(3, 8)]),
            ),
            (
                cfg(vec![tg(0, 6)]),
                cfg(vec![tg(2, 7)]),
                cfg(vec![tg(3, 8)]),
            ),
        ];
        for (a, b, c) in triples {
            let fam = cancellation_terms(&a, &b, &c, &sig2());
            let assembled = fam.assemble(b.rank(), c.rank());
            let direct = nested_bracket(
                &[elem(a.clone()), elem(b.clone()), elem(c.clone())],
                &sig2(),
            );
            assert_eq!(
                assembled, direct,
                "assembly mismatch for ranks ({}, {}, {})",
                a.rank(),
                b.rank(),
                c.rank()
            );
        }
    }

    #[test]
    fn cancellation_identities() {
        let a = cfg(vec![tg(0, 6), tg(1, 9)]);
        let b = cfg(vec![tg(2, 7), tg(-2, 12)]);
        let c = cfg(vec![tg(3, 8), tg(4, 10)]);
        let sig = sig2();
        let f_abc = cancellation_terms(&a, &b, &c, &sig);
        let f_bca = cancellation_terms(&b, &c, &a, &sig);
        let f_cab = cancellation_terms(&c, &a, &b, &sig);
        assert!(f_abc.p1.add(&f_cab.p2).is_zero(), "first cancellation");
        assert!(f_abc.q1.add(&f_cab.r2).is_zero(), "second cancellation");
        assert!(f_abc.r1.add(&f_bca.q2).is_zero(), "second cancellation mirror");
        assert!(
            f_abc.s1.add(&f_bca.s1).add(&f_cab.s1).is_zero(),
            "hexagonal cancellation 1"
        );
        assert!(
            f_abc.s2.add(&f_bca.s2).add(&f_cab.s2).is_zero(),
            "hexagonal cancellation 2"
        );
    }

    #[test]
    fn hexagonal_identities_on_circle() {
        let ls = CircleLinking;
        let pts: Vec<BoundaryPoint> = vec![pt(0), pt(1), pt(2), pt(3), pt(4), pt(5)];
        let (a, b, c) = hexagonal_check(&ls, &pts[0], &pts[3], &pts[1], &pts[4], &pts[2], &pts[5]);
        assert!(a && b && c);
        // phantom Z pair: everything vanishes, identities hold as 0 = 0
        let (a, b, c) = hexagonal_check(&ls, &pts[0], &pts[3], &pts[1], &pts[4], &pts[2], &pts[2]);
        assert!(a && b && c);
    }

    #[test]
    fn circle_linking_axioms_on_sample() {
        let pts: Vec<BoundaryPoint> = vec![pt(-2), pt(0), pt(1), pt(3)];
        assert_eq!(linking_axiom_violation(&CircleLinking, &pts), None);
    }

    #[test]
    fn canonical_rendering_is_sorted_and_stable() {
        let g = cfg(vec![tg(0, 2)]);
        let h = cfg(vec![tg(1, 3)]);
        let out = bracket_generators(&g, &h, &sig2());
        assert_eq!(out.to_string(), "1*cas + -1*<(0->2)@0,(1->3)@0>");
    }
}
