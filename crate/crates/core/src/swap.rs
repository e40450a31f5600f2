//! The extended swapping algebra: Laurent monomials in pair generators
//! `(X, x)` with formal logarithm generators and a central Casimir, the
//! swapping Poisson bracket, the homomorphism `pi` from the ghost algebra,
//! and polygonal decompositions of multifractions.
//!
//! A pair `(X, x)` corresponds to the oriented geodesic from `x` to `X`:
//! the upper slot pairs with dual flags, the lower with vectors.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::boundary::{epsilon, BoundaryPoint, OrientedGeodesic};
use crate::config::Configuration;
use crate::error::GhostError;
use crate::ghost::GhostElement;

type Q = BigRational;

/// A pair generator `(X, x)`; `(x, x)` is the zero element of the algebra
/// and is never stored, so constructing one yields `None`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairGen {
    upper: BoundaryPoint,
    lower: BoundaryPoint,
}

impl PairGen {
    pub fn new(upper: BoundaryPoint, lower: BoundaryPoint) -> Option<Self> {
        if upper == lower {
            None
        } else {
            Some(PairGen { upper, lower })
        }
    }

    /// The pair `(g⁺, g⁻)` of a non-phantom geodesic.
    pub fn of_geodesic(g: &OrientedGeodesic) -> Option<Self> {
        PairGen::new(g.dst().clone(), g.src().clone())
    }

    pub fn upper(&self) -> &BoundaryPoint {
        &self.upper
    }

    pub fn lower(&self) -> &BoundaryPoint {
        &self.lower
    }

    /// The oriented geodesic from the lower to the upper point.
    pub fn geodesic(&self) -> OrientedGeodesic {
        OrientedGeodesic::new(self.lower.clone(), self.upper.clone())
    }

    fn swapped(&self) -> PairGen {
        PairGen {
            upper: self.lower.clone(),
            lower: self.upper.clone(),
        }
    }
}

impl fmt::Debug for PairGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.upper, self.lower)
    }
}

impl fmt::Display for PairGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.upper, self.lower)
    }
}

/// Linking number of two pair generators, inherited from the circle.
pub fn pair_epsilon(a: &PairGen, b: &PairGen) -> Q {
    epsilon(&a.geodesic(), &b.geodesic())
}

/// A Laurent monomial: pair generators with nonzero integer exponents,
/// logarithm generators with positive multiplicities, and a Casimir power.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SwapMonomial {
    pairs: BTreeMap<PairGen, i64>,
    logs: BTreeMap<OrientedGeodesic, u32>,
    casimir: u32,
}

impl SwapMonomial {
    pub fn unit() -> Self {
        SwapMonomial::default()
    }

    pub fn casimir(power: u32) -> Self {
        SwapMonomial {
            casimir: power,
            ..Default::default()
        }
    }

    pub fn log(g: OrientedGeodesic) -> Self {
        let mut m = SwapMonomial::unit();
        m.logs.insert(g, 1);
        m
    }

    pub fn is_unit(&self) -> bool {
        self.pairs.is_empty() && self.logs.is_empty() && self.casimir == 0
    }

    pub fn has_logs(&self) -> bool {
        !self.logs.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&PairGen, i64)> {
        self.pairs.iter().map(|(p, e)| (p, *e))
    }

    pub fn logs(&self) -> impl Iterator<Item = (&OrientedGeodesic, u32)> {
        self.logs.iter().map(|(g, m)| (g, *m))
    }

    pub fn casimir_power(&self) -> u32 {
        self.casimir
    }

    /// Multiplies by `(upper, lower)^exp`. Returns `Ok(false)` when the
    /// monomial was annihilated by a positive power of a zero pair.
    pub fn mul_pair(
        &mut self,
        upper: BoundaryPoint,
        lower: BoundaryPoint,
        exp: i64,
    ) -> Result<bool, GhostError> {
        if exp == 0 {
            return Ok(true);
        }
        if upper == lower {
            return if exp > 0 {
                Ok(false)
            } else {
                Err(GhostError::ZeroPairDivision(upper.to_string()))
            };
        }
        let p = PairGen { upper, lower };
        let e = self.pairs.entry(p.clone()).or_insert(0);
        *e += exp;
        if *e == 0 {
            self.pairs.remove(&p);
        }
        Ok(true)
    }

    pub fn mul(&self, other: &SwapMonomial) -> Result<Option<SwapMonomial>, GhostError> {
        let mut out = self.clone();
        for (p, e) in &other.pairs {
            if !out.mul_pair(p.upper.clone(), p.lower.clone(), *e)? {
                return Ok(None);
            }
        }
        for (g, m) in &other.logs {
            *out.logs.entry(g.clone()).or_insert(0) += m;
        }
        out.casimir += other.casimir;
        Ok(Some(out))
    }

    fn without_pair_once(&self, p: &PairGen) -> SwapMonomial {
        let mut out = self.clone();
        let e = out.pairs.get_mut(p).expect("pair present");
        *e -= 1;
        if *e == 0 {
            out.pairs.remove(p);
        }
        out
    }

    fn without_log_once(&self, g: &OrientedGeodesic) -> SwapMonomial {
        let mut out = self.clone();
        let m = out.logs.get_mut(g).expect("log present");
        *m -= 1;
        if *m == 0 {
            out.logs.remove(g);
        }
        out
    }

    /// Reversal: swaps the slots of every pair and reverses the logs.
    pub fn reverse(&self) -> SwapMonomial {
        SwapMonomial {
            pairs: self
                .pairs
                .iter()
                .map(|(p, e)| (p.swapped(), *e))
                .collect(),
            logs: self
                .logs
                .iter()
                .map(|(g, m)| (g.reverse(), *m))
                .collect(),
            casimir: self.casimir,
        }
    }
}

impl fmt::Debug for SwapMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SwapMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let mut first = true;
        let sep = |f: &mut fmt::Formatter<'_>, first: &mut bool| -> fmt::Result {
            if !*first {
                write!(f, "*")?;
            }
            *first = false;
            Ok(())
        };
        for (p, e) in &self.pairs {
            sep(f, &mut first)?;
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        for (g, m) in &self.logs {
            sep(f, &mut first)?;
            if *m == 1 {
                write!(f, "l[{g}]")?;
            } else {
                write!(f, "l[{g}]^{m}")?;
            }
        }
        if self.casimir > 0 {
            sep(f, &mut first)?;
            if self.casimir == 1 {
                write!(f, "cas")?;
            } else {
                write!(f, "cas^{}", self.casimir)?;
            }
        }
        Ok(())
    }
}

/// A normalized rational combination of swap monomials.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SwapElement {
    terms: BTreeMap<SwapMonomial, Q>,
}

impl SwapElement {
    pub fn zero() -> Self {
        SwapElement::default()
    }

    pub fn one() -> Self {
        SwapElement::from_monomial(SwapMonomial::unit(), Q::one())
    }

    pub fn casimir() -> Self {
        SwapElement::from_monomial(SwapMonomial::casimir(1), Q::one())
    }

    pub fn log(g: OrientedGeodesic) -> Self {
        SwapElement::from_monomial(SwapMonomial::log(g), Q::one())
    }

    pub fn from_monomial(m: SwapMonomial, coeff: Q) -> Self {
        let mut e = SwapElement::zero();
        e.add_term(m, coeff);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SwapMonomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &SwapMonomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: SwapMonomial, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn add(&self, other: &SwapElement) -> SwapElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SwapElement) -> SwapElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SwapElement {
        SwapElement {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Q) -> SwapElement {
        if k.is_zero() {
            return SwapElement::zero();
        }
        SwapElement {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &SwapElement) -> Result<SwapElement, GhostError> {
        let mut out = SwapElement::zero();
        for (m, cm) in &self.terms {
            for (n, cn) in &other.terms {
                if let Some(prod) = m.mul(n)? {
                    out.add_term(prod, cm * cn);
                }
            }
        }
        Ok(out)
    }

    /// Inverse of a single-monomial element with no logarithm factors.
    pub fn try_inverse(&self) -> Result<SwapElement, GhostError> {
        if self.terms.len() != 1 {
            return Err(GhostError::Other("only monomials are invertible".into()));
        }
        let (m, c) = self.terms.iter().next().unwrap();
        if m.has_logs() || m.casimir > 0 {
            return Err(GhostError::Other(
                "logarithm and Casimir factors are not invertible".into(),
            ));
        }
        let inv = SwapMonomial {
            pairs: m.pairs.iter().map(|(p, e)| (p.clone(), -e)).collect(),
            logs: BTreeMap::new(),
            casimir: 0,
        };
        Ok(SwapElement::from_monomial(inv, c.recip()))
    }

    pub fn reverse(&self) -> SwapElement {
        SwapElement {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.reverse(), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Debug for SwapElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SwapElement {
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

enum GenRef<'a> {
    Pair(&'a PairGen, i64),
    Log(&'a OrientedGeodesic, u32),
}

fn generators(m: &SwapMonomial) -> Vec<GenRef<'_>> {
    let mut v = Vec::with_capacity(m.pairs.len() + m.logs.len());
    for (p, e) in &m.pairs {
        v.push(GenRef::Pair(p, *e));
    }
    for (g, k) in &m.logs {
        v.push(GenRef::Log(g, *k));
    }
    v
}

/// Bracket of two generators, as a small element.
fn generator_bracket(u: &GenRef<'_>, v: &GenRef<'_>) -> Result<SwapElement, GhostError> {
    match (u, v) {
        (GenRef::Pair(a, _), GenRef::Pair(b, _)) => {
            // [(X,x),(Y,y)] = eps((Y,y),(X,x)) (X,y)(Y,x)
            let e = pair_epsilon(b, a);
            if e.is_zero() {
                return Ok(SwapElement::zero());
            }
            let mut m = SwapMonomial::unit();
            if !m.mul_pair(a.upper.clone(), b.lower.clone(), 1)? {
                return Ok(SwapElement::zero());
            }
            if !m.mul_pair(b.upper.clone(), a.lower.clone(), 1)? {
                return Ok(SwapElement::zero());
            }
            Ok(SwapElement::from_monomial(m, e))
        }
        (GenRef::Pair(a, _), GenRef::Log(h, _)) => {
            // [(Y,y), l_h] = (1/h) [(Y,y), (h⁺,h⁻)]
            let hp = match PairGen::of_geodesic(h) {
                Some(p) => p,
                None => return Ok(SwapElement::zero()), // phantom log is inert
            };
            let e = pair_epsilon(&hp, a);
            if e.is_zero() {
                return Ok(SwapElement::zero());
            }
            let mut m = SwapMonomial::unit();
            if !m.mul_pair(a.upper.clone(), hp.lower.clone(), 1)? {
                return Ok(SwapElement::zero());
            }
            if !m.mul_pair(hp.upper.clone(), a.lower.clone(), 1)? {
                return Ok(SwapElement::zero());
            }
            m.mul_pair(hp.upper.clone(), hp.lower.clone(), -1)?;
            Ok(SwapElement::from_monomial(m, e))
        }
        (GenRef::Log(_, _), GenRef::Pair(_, _)) => {
            let flipped = generator_bracket(v, u)?;
            Ok(flipped.neg())
        }
        (GenRef::Log(g, _), GenRef::Log(h, _)) => {
            // [l_g, l_h] = (1/gh)[g,h] + eps(g,h) cas
            let mut out = SwapElement::zero();
            let e_hg = epsilon(h, g);
            if !e_hg.is_zero() {
                let gp = PairGen::of_geodesic(g).expect("crossing geodesic is not phantom");
                let hp = PairGen::of_geodesic(h).expect("crossing geodesic is not phantom");
                let mut m = SwapMonomial::unit();
                let mut alive = m.mul_pair(gp.upper.clone(), hp.lower.clone(), 1)?;
                alive = alive && m.mul_pair(hp.upper.clone(), gp.lower.clone(), 1)?;
                if alive {
                    m.mul_pair(gp.upper.clone(), gp.lower.clone(), -1)?;
                    m.mul_pair(hp.upper.clone(), hp.lower.clone(), -1)?;
                    out.add_term(m, e_hg);
                }
            }
            let e_gh = epsilon(g, h);
            if !e_gh.is_zero() {
                out.add_term(SwapMonomial::casimir(1), e_gh);
            }
            Ok(out)
        }
    }
}

/// The swapping Poisson bracket, extended by the Leibniz rule over Laurent
/// exponents and logarithm multiplicities.
pub fn swap_bracket(x: &SwapElement, y: &SwapElement) -> Result<SwapElement, GhostError> {
    let mut out = SwapElement::zero();
    for (m, cm) in x.terms() {
        let m_gens = generators(m);
        for (n, cn) in y.terms() {
            let n_gens = generators(n);
            for u in &m_gens {
                let (m_rest, eu) = match u {
                    GenRef::Pair(p, e) => (m.without_pair_once(p), *e),
                    GenRef::Log(g, k) => (m.without_log_once(g), *k as i64),
                };
                for v in &n_gens {
                    let base = generator_bracket(u, v)?;
                    if base.is_zero() {
                        continue;
                    }
                    let (n_rest, ev) = match v {
                        GenRef::Pair(p, e) => (n.without_pair_once(p), *e),
                        GenRef::Log(g, k) => (n.without_log_once(g), *k as i64),
                    };
                    let rest = match m_rest.mul(&n_rest)? {
                        Some(r) => r,
                        None => continue,
                    };
                    let coeff = cm * cn * Q::from_integer((eu * ev).into());
                    for (bm, bc) in base.terms() {
                        if let Some(t) = bm.mul(&rest)? {
                            out.add_term(t, bc * &coeff);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A multifraction datum `[X, x; sigma]`.
#[derive(Clone, Debug)]
pub struct Multifraction {
    pub upper: Vec<BoundaryPoint>,
    pub lower: Vec<BoundaryPoint>,
    pub sigma: Vec<usize>,
}

impl Multifraction {
    pub fn new(
        upper: Vec<BoundaryPoint>,
        lower: Vec<BoundaryPoint>,
        sigma: Vec<usize>,
    ) -> Result<Self, GhostError> {
        if upper.len() != lower.len() || upper.len() != sigma.len() {
            return Err(GhostError::BadPermutation(
                "lengths of X, x and sigma differ".into(),
            ));
        }
        let mut seen = vec![false; sigma.len()];
        for &s in &sigma {
            if s >= sigma.len() || seen[s] {
                return Err(GhostError::BadPermutation(format!(
                    "{sigma:?} is not a permutation in one-line form"
                )));
            }
            seen[s] = true;
        }
        Ok(Multifraction {
            upper,
            lower,
            sigma,
        })
    }

    /// The element `prod (X_i, x_{sigma(i)}) / prod (X_i, x_i)`.
    pub fn element(&self) -> Result<SwapElement, GhostError> {
        let mut m = SwapMonomial::unit();
        for (i, &s) in self.sigma.iter().enumerate() {
            if !m.mul_pair(self.upper[i].clone(), self.lower[s].clone(), 1)? {
                return Ok(SwapElement::zero());
            }
        }
        for i in 0..self.sigma.len() {
            m.mul_pair(self.upper[i].clone(), self.lower[i].clone(), -1)?;
        }
        Ok(SwapElement::from_monomial(m, Q::one()))
    }

    /// Cycle decomposition into configurations: one configuration per cycle
    /// of `sigma`, fixed points giving rank-1 configurations whose
    /// multifraction factor is trivial.
    pub fn polygonal_decomposition(&self) -> Result<Vec<Configuration>, GhostError> {
        use crate::boundary::ThetaGeodesic;
        let n = self.sigma.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut t = start;
            loop {
                seen[t] = true;
                cycle.push(ThetaGeodesic::projective(OrientedGeodesic::new(
                    self.lower[t].clone(),
                    self.upper[t].clone(),
                )));
                t = self.sigma[t];
                if t == start {
                    break;
                }
            }
            out.push(Configuration::new(cycle)?);
        }
        Ok(out)
    }
}

/// The multifraction associated to a product of configurations, rank-1
/// factors contributing the trivial fraction.
pub fn multifraction_image(configs: &[Configuration]) -> Result<SwapElement, GhostError> {
    let mut out = SwapElement::one();
    for c in configs {
        if c.rank() >= 2 {
            out = out.mul(&pi_configuration(c)?)?;
        }
    }
    Ok(out)
}

fn pi_configuration(c: &Configuration) -> Result<SwapElement, GhostError> {
    let gs = c.geodesics();
    let p = gs.len();
    let mut m = SwapMonomial::unit();
    for i in 0..p {
        let next = &gs[(i + 1) % p];
        if !m.mul_pair(gs[i].dst().clone(), next.src().clone(), 1)? {
            return Ok(SwapElement::zero());
        }
    }
    for g in gs {
        if g.is_phantom() {
            return Err(GhostError::ZeroPairDivision(g.geodesic().to_string()));
        }
        m.mul_pair(g.dst().clone(), g.src().clone(), -1)?;
    }
    Ok(SwapElement::from_monomial(m, Q::one()))
}

/// The bracket-preserving homomorphism from the ghost algebra, defined in
/// the projective setting: rank-1 configurations map to logarithms, higher
/// ranks to their multifraction, and the Casimir to the central generator.
/// Mixed decorations are rejected.
pub fn pi(x: &GhostElement) -> Result<SwapElement, GhostError> {
    let mut label: Option<usize> = None;
    for (m, _) in x.terms() {
        for c in m.factors() {
            for g in c.geodesics() {
                match label {
                    None => label = Some(g.label()),
                    Some(l) if l == g.label() => {}
                    Some(_) => return Err(GhostError::NonProjective(g.label())),
                }
            }
        }
    }
    let mut out = SwapElement::zero();
    for (m, coeff) in x.terms() {
        let mut acc = SwapElement::from_monomial(SwapMonomial::casimir(m.casimir_power()), Q::one());
        for c in m.factors() {
            let factor = if c.rank() == 1 {
                SwapElement::log(c.geodesics()[0].geodesic().clone())
            } else {
                pi_configuration(c)?
            };
            acc = acc.mul(&factor)?;
        }
        for (am, ac) in acc.terms() {
            out.add_term(am.clone(), ac * coeff);
        }
    }
    Ok(out)
}

/// Convenience wrapper building a multifraction and its decomposition.
pub fn multifraction(
    upper: Vec<BoundaryPoint>,
    lower: Vec<BoundaryPoint>,
    sigma: Vec<usize>,
) -> Result<Multifraction, GhostError> {
    Multifraction::new(upper, lower, sigma)
}

/// Cycle decomposition of a multifraction into configurations.
pub fn polygonal_decomposition(m: &Multifraction) -> Result<Vec<Configuration>, GhostError> {
    m.polygonal_decomposition()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::ThetaGeodesic;
    use crate::ghost::{bracket, bracket_generators};
    use crate::boundary::ThetaSignature;

    fn pt(v: i64) -> BoundaryPoint {
        BoundaryPoint::from(v)
    }

    fn pair(a: i64, b: i64) -> PairGen {
        PairGen::new(pt(a), pt(b)).unwrap()
    }

    fn pair_elem(a: i64, b: i64) -> SwapElement {
        let mut m = SwapMonomial::unit();
        assert!(m.mul_pair(pt(a), pt(b), 1).unwrap());
        SwapElement::from_monomial(m, Q::one())
    }

    fn geo(a: i64, b: i64) -> OrientedGeodesic {
        OrientedGeodesic::new(pt(a), pt(b))
    }

    fn tg(a: i64, b: i64) -> ThetaGeodesic {
        ThetaGeodesic::projective(geo(a, b))
    }

    fn cfg(gs: Vec<ThetaGeodesic>) -> Configuration {
        Configuration::new(gs).unwrap()
    }

    #[test]
    fn zero_pair_is_rejected_and_annihilates() {
        assert!(PairGen::new(pt(1), pt(1)).is_none());
        let mut m = SwapMonomial::unit();
        assert!(!m.mul_pair(pt(1), pt(1), 2).unwrap());
        let mut m = SwapMonomial::unit();
        assert!(matches!(
            m.mul_pair(pt(1), pt(1), -1),
            Err(GhostError::ZeroPairDivision(_))
        ));
    }

    #[test]
    fn generator_bracket_cases() {
        // non-interleaved endpoints: eps = 0
        let a = pair_elem(1, 0); // geodesic 0 -> 1
        let b = pair_elem(3, 2); // geodesic 2 -> 3
        assert!(swap_bracket(&a, &b).unwrap().is_zero());
        // self bracket
        let out = swap_bracket(&a, &a).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn log_log_bracket_matches_expansion() {
        // crossing g = (0->2), h = (1->3):
        // [l_g, l_h] = eps(h,g) (g⁺,h⁻)(h⁺,g⁻)(g⁺,g⁻)^-1(h⁺,h⁻)^-1 + eps(g,h) cas
        let g = geo(0, 2);
        let h = geo(1, 3);
        let out = swap_bracket(&SwapElement::log(g.clone()), &SwapElement::log(h.clone())).unwrap();
        let e_hg = epsilon(&h, &g);
        let e_gh = epsilon(&g, &h);
        let mut m = SwapMonomial::unit();
        m.mul_pair(pt(2), pt(1), 1).unwrap();
        m.mul_pair(pt(3), pt(0), 1).unwrap();
        m.mul_pair(pt(2), pt(0), -1).unwrap();
        m.mul_pair(pt(3), pt(1), -1).unwrap();
        assert_eq!(out.coefficient(&m), e_hg);
        assert_eq!(out.coefficient(&SwapMonomial::casimir(1)), e_gh);
        assert_eq!(out.num_terms(), 2);
    }

    #[test]
    fn leibniz_with_negative_exponents() {
        // [a^-1, b] = -a^-2 [a, b]
        let a = pair(2, 0);
        let b = pair(3, 1);
        let mut inv = SwapMonomial::unit();
        inv.mul_pair(pt(2), pt(0), -1).unwrap();
        let a_inv = SwapElement::from_monomial(inv, Q::one());
        let b_el = SwapElement::from_monomial(
            {
                let mut m = SwapMonomial::unit();
                m.mul_pair(pt(3), pt(1), 1).unwrap();
                m
            },
            Q::one(),
        );
        let lhs = swap_bracket(&a_inv, &b_el).unwrap();
        let a_el = pair_elem(2, 0);
        let base = swap_bracket(&a_el, &b_el).unwrap();
        let mut a_minus2 = SwapMonomial::unit();
        a_minus2.mul_pair(pt(2), pt(0), -2).unwrap();
        let rhs = base
            .mul(&SwapElement::from_monomial(a_minus2, Q::one()))
            .unwrap()
            .neg();
        assert_eq!(lhs, rhs);
        let _ = a;
    }

    #[test]
    fn poisson_axioms_smoke() {
        let xs = [
            pair_elem(2, 0),
            pair_elem(3, 1),
            SwapElement::log(geo(0, 2)),
            SwapElement::log(geo(1, 4)),
            pair_elem(4, -1).mul(&pair_elem(3, 0)).unwrap(),
        ];
        for x in &xs {
            for y in &xs {
                let xy = swap_bracket(x, y).unwrap();
                let yx = swap_bracket(y, x).unwrap();
                assert!(xy.add(&yx).is_zero(), "antisymmetry");
                for z in &xs {
                    let j = swap_bracket(x, &swap_bracket(y, z).unwrap())
                        .unwrap()
                        .add(&swap_bracket(y, &swap_bracket(z, x).unwrap()).unwrap())
                        .add(&swap_bracket(z, &swap_bracket(x, y).unwrap()).unwrap());
                    assert!(j.is_zero(), "jacobi failed");
                }
            }
        }
    }

    #[test]
    fn leibniz_rule_for_products() {
        let a = pair_elem(2, 0);
        let b = pair_elem(4, 1);
        let c = SwapElement::log(geo(1, 3));
        let ab = a.mul(&b).unwrap();
        let lhs = swap_bracket(&ab, &c).unwrap();
        let rhs = a
            .mul(&swap_bracket(&b, &c).unwrap())
            .unwrap()
            .add(&swap_bracket(&a, &c).unwrap().mul(&b).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pi_of_rank_two_configuration() {
        // pi(<g1,g2>) = (g1⁺,g2⁻)(g2⁺,g1⁻) (g1⁺,g1⁻)^-1 (g2⁺,g2⁻)^-1
        let c = cfg(vec![tg(0, 2), tg(1, 3)]);
        let out = pi(&GhostElement::from_configuration(c)).unwrap();
        let mut m = SwapMonomial::unit();
        m.mul_pair(pt(2), pt(1), 1).unwrap();
        m.mul_pair(pt(3), pt(0), 1).unwrap();
        m.mul_pair(pt(2), pt(0), -1).unwrap();
        m.mul_pair(pt(3), pt(1), -1).unwrap();
        assert_eq!(out, SwapElement::from_monomial(m, Q::one()));
    }

    #[test]
    fn pi_cyclicity_is_structural() {
        let a = cfg(vec![tg(0, 2), tg(1, 3), tg(4, 5)]);
        let b = cfg(vec![tg(1, 3), tg(4, 5), tg(0, 2)]);
        assert_eq!(a, b);
        assert_eq!(
            pi(&GhostElement::from_configuration(a)).unwrap(),
            pi(&GhostElement::from_configuration(b)).unwrap()
        );
    }

    #[test]
    fn pi_rejects_mixed_labels() {
        let sig = ThetaSignature::new(vec![1, 2], 4).unwrap();
        let _ = sig;
        let c = cfg(vec![
        ThetaGeodesic::new(geo(0, 2), 0),
            ThetaGeodesic::new(geo(1, 3), 1),
        ]);
        assert!(matches!(
            pi(&GhostElement::from_configuration(c)),
            Err(GhostError::NonProjective(_))
        ));
    }

    #[test]
    fn pi_maps_phantom_visible_edges_to_errors() {
        let c = cfg(vec![tg(0, 0), tg(1, 3)]);
        assert!(matches!(
            pi(&GhostElement::from_configuration(c)),
            Err(GhostError::ZeroPairDivision(_))
        ));
    }

    #[test]
    fn pi_preserves_brackets() {
        let sig = ThetaSignature::projective(2);
        let cases = [
            (cfg(vec![tg(0, 2)]), cfg(vec![tg(1, 3)])),
            (cfg(vec![tg(0, 2), tg(1, 3)]), cfg(vec![tg(-1, 4)])),
            (
                cfg(vec![tg(0, 4), tg(1, 6)]),
                cfg(vec![tg(2, 5), tg(3, 7)]),
            ),
        ];
        for (g, h) in cases {
            let ghost = bracket_generators(&g, &h, &sig);
            let lhs = pi(&ghost).unwrap();
            let rhs = swap_bracket(
                &pi(&GhostElement::from_configuration(g)).unwrap(),
                &pi(&GhostElement::from_configuration(h)).unwrap(),
            )
            .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    // Reversal commutes with the bracket: eps(ḡ, h̄) = eps(g, h) forces
    // [Ḡ, H̄] = reverse([G, H]) on the nose, with no sign.
    #[test]
    fn reversal_commutes_with_bracket() {
        let sig = ThetaSignature::projective(2);
        let cases = [
            (cfg(vec![tg(0, 4), tg(1, 6)]), cfg(vec![tg(2, 5)])),
            (cfg(vec![tg(0, 2)]), cfg(vec![tg(1, 3)])),
            (
                cfg(vec![tg(0, 4), tg(1, 6)]),
                cfg(vec![tg(2, 5), tg(3, 7)]),
            ),
        ];
        for (g, h) in cases {
            let ge = GhostElement::from_configuration(g.clone());
            let he = GhostElement::from_configuration(h.clone());
            let lhs = pi(&bracket(
                &GhostElement::from_configuration(g.reverse()),
                &GhostElement::from_configuration(h.reverse()),
                &sig,
            ))
            .unwrap();
            let rhs = pi(&bracket(&ge, &he, &sig)).unwrap().reverse();
            assert_eq!(lhs, rhs);
            // and pi itself intertwines the reversals
            assert_eq!(
                pi(&GhostElement::from_configuration(g.reverse())).unwrap(),
                pi(&ge).unwrap().reverse()
            );
        }
    }

    #[test]
    fn polygonal_decomposition_round_trips() {
        // identity on one point: one rank-1 configuration, trivial fraction
        let m = Multifraction::new(vec![pt(1)], vec![pt(0)], vec![0]).unwrap();
        let d = m.polygonal_decomposition().unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].rank(), 1);
        assert_eq!(multifraction_image(&d).unwrap(), SwapElement::one());
        assert_eq!(m.element().unwrap(), SwapElement::one());

        // a single 3-cycle gives one rank-3 configuration
        let m = Multifraction::new(
            vec![pt(10), pt(11), pt(12)],
            vec![pt(0), pt(1), pt(2)],
            vec![1, 2, 0],
        )
        .unwrap();
        let d = m.polygonal_decomposition().unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].rank(), 3);
        assert_eq!(multifraction_image(&d).unwrap(), m.element().unwrap());

        // two 2-cycles give two rank-2 configurations
        let m = Multifraction::new(
            vec![pt(10), pt(11), pt(12), pt(13)],
            vec![pt(0), pt(1), pt(2), pt(3)],
            vec![1, 0, 3, 2],
        )
        .unwrap();
        let d = m.polygonal_decomposition().unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.iter().all(|c| c.rank() == 2));
        assert_eq!(multifraction_image(&d).unwrap(), m.element().unwrap());
    }

    #[test]
    fn malformed_permutation_rejected() {
        assert!(Multifraction::new(vec![pt(1)], vec![pt(0)], vec![1]).is_err());
        assert!(Multifraction::new(vec![pt(1), pt(2)], vec![pt(0), pt(3)], vec![0, 0]).is_err());
        assert!(Multifraction::new(vec![pt(1)], vec![pt(0), pt(3)], vec![0]).is_err());
    }

    #[test]
    fn hrel_identities() {
        // <g1,z0> <g0,h> = <g1,h,g0> with z0 the ghost edge (h⁻ -> g0⁺),
        // and <g1,h,g0> / (<g1,h><g0,h>) = <(g0⁺,h⁻),(h⁺,g1⁻)>
        let g1 = tg(0, 4);
        let g0 = tg(1, 5);
        let h = tg(2, 6);
        let z0 = ThetaGeodesic::projective(geo(2, 5));
        let lhs = multifraction_image(&[
            cfg(vec![g1.clone(), z0.clone()]),
            cfg(vec![g0.clone(), h.clone()]),
        ])
        .unwrap();
        let rhs = multifraction_image(&[cfg(vec![g1.clone(), h.clone(), g0.clone()])]).unwrap();
        assert_eq!(lhs, rhs);

        let num = multifraction_image(&[cfg(vec![g1.clone(), h.clone(), g0.clone()])]).unwrap();
        let den = multifraction_image(&[cfg(vec![g1.clone(), h.clone()])])
            .unwrap()
            .mul(&multifraction_image(&[cfg(vec![g0.clone(), h.clone()])]).unwrap())
            .unwrap();
        let lhs2 = num.mul(&den.try_inverse().unwrap()).unwrap();
        let gamma0 = ThetaGeodesic::projective(geo(2, 5)); // (g0⁺, h⁻) pair: src h⁻=2, dst g0⁺=5
        let gamma1 = ThetaGeodesic::projective(geo(0, 6)); // (h⁺, g1⁻) pair: src g1⁻=0, dst h⁺=6
        let rhs2 = multifraction_image(&[cfg(vec![gamma0, gamma1])]).unwrap();
        assert_eq!(lhs2, rhs2);
    }
}
