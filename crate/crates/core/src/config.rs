//! Configurations of decorated geodesics and their ghost polygons.
//!
//! A configuration is a cyclic tuple of geodesics; its ghost polygon
//! interleaves the original (visible) edges with the ghost edges joining
//! consecutive endpoints. Opposite tuples and intervals of edges are the
//! building blocks of every bracket term.

use std::collections::BTreeSet;
use std::fmt;

use crate::boundary::{BoundaryPoint, OrientedGeodesic, ThetaGeodesic};
use crate::error::GhostError;

/// A cyclic tuple of decorated geodesics, stored in its lexicographically
/// minimal rotation so that equality up to rotation is structural equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    geodesics: Vec<ThetaGeodesic>,
}

impl Configuration {
    pub fn new(geodesics: Vec<ThetaGeodesic>) -> Result<Self, GhostError> {
        if geodesics.is_empty() {
            return Err(GhostError::EmptyConfiguration);
        }
        Ok(Configuration {
            geodesics: canonical_rotation(geodesics),
        })
    }

    pub fn singleton(g: ThetaGeodesic) -> Self {
        Configuration { geodesics: vec![g] }
    }

    pub fn rank(&self) -> usize {
        self.geodesics.len()
    }

    /// The geodesics in the canonical rotation.
    pub fn geodesics(&self) -> &[ThetaGeodesic] {
        &self.geodesics
    }

    /// The reversed configuration `⌈ḡ_p, …, ḡ₁⌉`.
    pub fn reverse(&self) -> Configuration {
        let rev: Vec<ThetaGeodesic> = self.geodesics.iter().rev().map(|g| g.reverse()).collect();
        Configuration {
            geodesics: canonical_rotation(rev),
        }
    }

    /// Endpoints of all visible edges.
    pub fn vertices(&self) -> BTreeSet<BoundaryPoint> {
        let mut set = BTreeSet::new();
        for g in &self.geodesics {
            set.insert(g.src().clone());
            set.insert(g.dst().clone());
        }
        set
    }

    /// True iff every geodesic carries the given label.
    pub fn has_uniform_label(&self, label: usize) -> bool {
        self.geodesics.iter().all(|g| g.label() == label)
    }

    pub fn ghost_polygon(&self) -> GhostPolygon {
        GhostPolygon::of(self)
    }

    /// The opposite tuple of an edge of this configuration's polygon: the
    /// increasing run of visible edges facing it. A visible edge appears at
    /// both ends of its own opposite; a ghost edge's opposite runs once
    /// around; the unique edge of a rank-1 configuration is its own opposite.
    pub fn opposite(&self, edge: &Edge) -> Result<EdgeTuple, GhostError> {
        self.check_edge(edge)?;
        let p = self.rank();
        let gs = &self.geodesics;
        let tuple = match edge.kind {
            EdgeKind::Visible { index: i } => {
                if p == 1 {
                    vec![gs[0].clone()]
                } else {
                    let mut t = Vec::with_capacity(p + 1);
                    for k in 0..=p {
                        t.push(gs[(i + k) % p].clone());
                    }
                    t
                }
            }
            EdgeKind::Ghost { after: i } => {
                let mut t = Vec::with_capacity(p);
                for k in 1..=p {
                    t.push(gs[(i + k) % p].clone());
                }
                t
            }
        };
        Ok(EdgeTuple(tuple))
    }

    /// The interval `G(e1, e2)`: the increasing run of visible edges from
    /// `e1₊` to `e2₋` inclusive. When `e1 == e2` is a visible edge the run
    /// wraps all the way around and equals the opposite tuple.
    pub fn interval(&self, e1: &Edge, e2: &Edge) -> Result<EdgeTuple, GhostError> {
        self.check_edge(e1)?;
        self.check_edge(e2)?;
        if e1 == e2 {
            if let EdgeKind::Visible { .. } = e1.kind {
                return self.opposite(e1);
            }
        }
        let p = self.rank();
        let start = match e1.kind {
            EdgeKind::Visible { index } => index,
            EdgeKind::Ghost { after } => (after + 1) % p,
        };
        let end = match e2.kind {
            EdgeKind::Visible { index } => index,
            EdgeKind::Ghost { after } => after,
        };
        let len = (end + p - start) % p + 1;
        let mut t = Vec::with_capacity(len);
        for k in 0..len {
            t.push(self.geodesics[(start + k) % p].clone());
        }
        Ok(EdgeTuple(t))
    }

    fn check_edge(&self, edge: &Edge) -> Result<(), GhostError> {
        let expected = match edge.kind {
            EdgeKind::Visible { index } if index < self.rank() => self.visible_edge(index),
            EdgeKind::Ghost { after } if after < self.rank() && self.rank() >= 2 => {
                self.ghost_edge(after)
            }
            _ => return Err(GhostError::ForeignEdge),
        };
        if expected == *edge {
            Ok(())
        } else {
            Err(GhostError::ForeignEdge)
        }
    }

    fn visible_edge(&self, index: usize) -> Edge {
        Edge {
            theta: self.geodesics[index].clone(),
            kind: EdgeKind::Visible { index },
        }
    }

    /// The ghost edge between `g_i` and `g_{i+1}`, running from `g_{i+1}⁻`
    /// to `g_i⁺`. It inherits the label of `g_i`, whose forward endpoint it
    /// shares; labels on ghost edges only matter in projective evaluation.
    fn ghost_edge(&self, after: usize) -> Edge {
        let p = self.rank();
        let g = &self.geodesics[after];
        let next = &self.geodesics[(after + 1) % p];
        Edge {
            theta: ThetaGeodesic::new(
                OrientedGeodesic::new(next.src().clone(), g.dst().clone()),
                g.label(),
            ),
            kind: EdgeKind::Ghost { after },
        }
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.geodesics.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}

fn canonical_rotation(gs: Vec<ThetaGeodesic>) -> Vec<ThetaGeodesic> {
    let n = gs.len();
    if n <= 1 {
        return gs;
    }
    let mut best = 0usize;
    for cand in 1..n {
        for k in 0..n {
            let a = &gs[(cand + k) % n];
            let b = &gs[(best + k) % n];
            match a.cmp(b) {
                std::cmp::Ordering::Less => {
                    best = cand;
                    break;
                }
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        out.push(gs[(best + k) % n].clone());
    }
    out
}

/// Whether an edge of a ghost polygon is one of the original geodesics or an
/// inserted ghost edge. The ghost index is the parity: 0 visible, 1 ghost.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Visible { index: usize },
    Ghost { after: usize },
}

/// One edge of a ghost polygon, carrying its geodesic and its position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    theta: ThetaGeodesic,
    kind: EdgeKind,
}

impl Edge {
    pub fn theta(&self) -> &ThetaGeodesic {
        &self.theta
    }

    pub fn kind(&self) -> EdgeKind {
        self.kind
    }

    pub fn is_ghost(&self) -> bool {
        matches!(self.kind, EdgeKind::Ghost { .. })
    }

    /// Ghost index in Z/2: 0 for visible, 1 for ghost edges.
    pub fn ghost_index(&self) -> u8 {
        if self.is_ghost() {
            1
        } else {
            0
        }
    }
}

/// The ghost polygon of a configuration: visible and ghost edges alternating
/// in cyclic order. A rank-1 configuration degenerates to its single visible
/// edge with no ghosts.
#[derive(Clone, Debug)]
pub struct GhostPolygon {
    configuration: Configuration,
    edges: Vec<Edge>,
}

impl GhostPolygon {
    pub fn of(c: &Configuration) -> GhostPolygon {
        let p = c.rank();
        let mut edges = Vec::with_capacity(if p == 1 { 1 } else { 2 * p });
        for i in 0..p {
            edges.push(c.visible_edge(i));
            if p >= 2 {
                edges.push(c.ghost_edge(i));
            }
        }
        GhostPolygon {
            configuration: c.clone(),
            edges,
        }
    }

    pub fn configuration(&self) -> &Configuration {
        &self.configuration
    }

    /// All edges in cyclic order, visible first in each (visible, ghost)
    /// pair. Rank-1 polygons have the single visible edge.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn visible_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| !e.is_ghost())
    }

    pub fn ghost_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.is_ghost())
    }

    /// Drops the ghost edges, recovering the configuration.
    pub fn to_configuration(&self) -> Configuration {
        Configuration::new(
            self.visible_edges()
                .map(|e| e.theta().clone())
                .collect::<Vec<_>>(),
        )
        .expect("polygon has at least one visible edge")
    }
}

/// An ordered tuple of geodesics: an opposite configuration or interval,
/// not yet closed up to cyclic equivalence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeTuple(pub Vec<ThetaGeodesic>);

impl EdgeTuple {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation of tuples; associative.
    pub fn concat(mut self, other: EdgeTuple) -> EdgeTuple {
        self.0.extend(other.0);
        self
    }

    /// Closes the tuple into a configuration.
    pub fn close(self) -> Result<Configuration, GhostError> {
        Configuration::new(self.0)
    }
}
