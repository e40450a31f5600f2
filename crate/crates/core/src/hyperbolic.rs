//! Numeric barycenter and core diameter in the hyperboloid model.
//!
//! Points live on the sheet x0^2 - x1^2 - x2^2 = 1, x0 > 0 of Minkowski
//! 3-space; a geodesic is encoded by its spacelike pole `u` (normalized to
//! <u,u> = -1), and sinh of the distance from `x` to the geodesic is
//! |<x,u>|. The barycenter minimizes the sum of distances to the visible
//! edges by projected gradient descent with backtracking, with a Newton
//! polish once the iterate is in the smooth region.

use num_traits::ToPrimitive;

use crate::boundary::{BoundaryPoint, MobiusMap, OrientedGeodesic};
use crate::config::Configuration;
use crate::error::GhostError;

pub const GRAD_TOL: f64 = 1e-10;
pub const MAX_ITERS: usize = 10_000;

/// A point of the hyperbolic plane in hyperboloid coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HPoint(pub [f64; 3]);

impl HPoint {
    pub fn origin() -> Self {
        HPoint([1.0, 0.0, 0.0])
    }

    /// Coordinates (x, y) in the upper half-plane model.
    pub fn to_half_plane(self) -> (f64, f64) {
        let [x0, x1, x2] = self.0;
        let c = x0 - x1;
        (x2 / c, 1.0 / c)
    }
}

fn mink(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2]
}

fn renormalize(x: [f64; 3]) -> [f64; 3] {
    let n = mink(&x, &x);
    let s = 1.0 / n.sqrt();
    [x[0] * s, x[1] * s, x[2] * s]
}

/// Hyperbolic distance between two points of the sheet, computed from the
/// chord so that nearby points do not lose precision to cancellation:
/// -q(a - b) = 4 sinh^2(d/2).
pub fn distance(a: HPoint, b: HPoint) -> f64 {
    let d = [a.0[0] - b.0[0], a.0[1] - b.0[1], a.0[2] - b.0[2]];
    let chord2 = -mink(&d, &d);
    2.0 * (chord2.max(0.0).sqrt() / 2.0).asinh()
}

/// The unit spacelike pole of a non-phantom geodesic.
pub fn geodesic_pole(g: &OrientedGeodesic) -> Result<[f64; 3], GhostError> {
    if g.is_phantom() {
        return Err(GhostError::PhantomGeodesic);
    }
    let f = |b: &BoundaryPoint| {
        (
            b.numer().to_f64().expect("desk-scale coordinates"),
            b.denom().to_f64().expect("desk-scale coordinates"),
        )
    };
    let (pa, qa) = f(g.src());
    let (pb, qb) = f(g.dst());
    let u = [pa * pb + qa * qb, pa * pb - qa * qb, pa * qb + qa * pb];
    let det = pa * qb - qa * pb;
    Ok([u[0] / det.abs(), u[1] / det.abs(), u[2] / det.abs()])
}

/// Distance from a point to a geodesic with unit pole `u`.
pub fn distance_to_pole(x: HPoint, u: &[f64; 3]) -> f64 {
    mink(&x.0, u).abs().asinh()
}

/// Isometry action of a determinant-positive integer matrix on the sheet,
/// matching the boundary action on endpoints.
pub fn apply_isometry(m: &MobiusMap, x: HPoint) -> HPoint {
    let e: Vec<f64> = m
        .entries()
        .iter()
        .map(|v| v.to_f64().expect("desk-scale matrix"))
        .collect();
    let (a, b, c, d) = (e[0], e[1], e[2], e[3]);
    let det = a * d - b * c;
    // x as the symmetric matrix [[s, t], [t, w]] -> M S M^T / det
    let [x0, x1, x2] = x.0;
    let (s, t, w) = (x0 + x1, x2, x0 - x1);
    let s2 = a * (a * s + b * t) + b * (a * t + b * w);
    let t2 = c * (a * s + b * t) + d * (a * t + b * w);
    let w2 = c * (c * s + d * t) + d * (c * t + d * w);
    HPoint([
        (s2 + w2) / (2.0 * det),
        (s2 - w2) / (2.0 * det),
        t2 / det,
    ])
}

/// Result of the barycenter solve.
#[derive(Clone, Debug)]
pub struct Barycenter {
    pub point: HPoint,
    /// Norm of the minimal subgradient at the reported point.
    pub grad_norm: f64,
    pub iterations: usize,
    /// Value of the distance-sum objective at the reported point.
    pub objective: f64,
}

struct Objective {
    poles: Vec<[f64; 3]>,
}

impl Objective {
    fn value(&self, x: HPoint) -> f64 {
        self.poles
            .iter()
            .map(|u| mink(&x.0, u).abs().asinh())
            .sum()
    }

    /// Tangent-space basis at x, orthonormal for the Riemannian metric.
    fn tangent_basis(x: HPoint) -> ([f64; 3], [f64; 3]) {
        let project = |v: [f64; 3]| {
            let c = mink(&v, &x.0);
            [v[0] - c * x.0[0], v[1] - c * x.0[1], v[2] - c * x.0[2]]
        };
        let norm = |v: &[f64; 3]| (-mink(v, v)).sqrt();
        let mut e1 = project([0.0, 1.0, 0.0]);
        if norm(&e1) < 1e-9 {
            e1 = project([0.0, 0.0, 1.0]);
        }
        let n1 = norm(&e1);
        e1 = [e1[0] / n1, e1[1] / n1, e1[2] / n1];
        let mut e2 = project([0.0, 0.0, 1.0]);
        let c = -mink(&e2, &e1); // metric g = -<,> on tangent vectors
        e2 = [e2[0] - c * e1[0], e2[1] - c * e1[1], e2[2] - c * e1[2]];
        let n2 = norm(&e2);
        if n2 < 1e-12 {
            let mut f = project([1.0, 1.0, 0.0]);
            let c = -mink(&f, &e1);
            f = [f[0] - c * e1[0], f[1] - c * e1[1], f[2] - c * e1[2]];
            let nf = norm(&f);
            e2 = [f[0] / nf, f[1] / nf, f[2] / nf];
        } else {
            e2 = [e2[0] / n2, e2[1] / n2, e2[2] / n2];
        }
        (e1, e2)
    }

    fn gradient_parts(&self, x: HPoint, active_eps: f64) -> ([f64; 2], Vec<[f64; 2]>) {
        let (e1, e2) = Self::tangent_basis(x);
        let mut fixed = [0.0f64; 2];
        let mut active: Vec<[f64; 2]> = Vec::new();
        for u in &self.poles {
            let s = mink(&x.0, u);
            let du = [mink(&e1, u), mink(&e2, u)];
            // components in a g-orthonormal basis are directional derivatives
            let w = 1.0 / (1.0 + s * s).sqrt();
            let comp = [du[0] * w, du[1] * w];
            if s.abs() <= active_eps {
                active.push(comp);
            } else {
                let sg = s.signum();
                fixed[0] += sg * comp[0];
                fixed[1] += sg * comp[1];
            }
        }
        (fixed, active)
    }

    /// A subgradient usable as a descent direction: the fixed part plus a
    /// cheap approximate minimum-norm choice of active coefficients.
    fn min_subgradient(&self, x: HPoint, active_eps: f64) -> [f64; 2] {
        let (fixed, active) = self.gradient_parts(x, active_eps);
        if active.is_empty() {
            return fixed;
        }
        let mut coef = vec![0.0f64; active.len()];
        for _ in 0..60 {
            for (i, a) in active.iter().enumerate() {
                let mut g = fixed;
                for (j, b) in active.iter().enumerate() {
                    if j != i {
                        g[0] += coef[j] * b[0];
                        g[1] += coef[j] * b[1];
                    }
                }
                let denom = a[0] * a[0] + a[1] * a[1];
                if denom > 0.0 {
                    coef[i] = (-(g[0] * a[0] + g[1] * a[1]) / denom).clamp(-1.0, 1.0);
                }
            }
        }
        let mut g = fixed;
        for (c, a) in coef.iter().zip(&active) {
            g[0] += c * a[0];
            g[1] += c * a[1];
        }
        g
    }

    /// Exact norm of the minimum-norm subgradient: the distance from the
    /// fixed part to the zonotope spanned by the active terms.
    fn min_subgradient_norm(&self, x: HPoint, active_eps: f64) -> f64 {
        let (fixed, active) = self.gradient_parts(x, active_eps);
        zonotope_distance([-fixed[0], -fixed[1]], &active)
    }

    /// Exact Hessian of the objective in the tangent basis, valid away from
    /// the active set.
    fn hessian(&self, x: HPoint) -> [[f64; 2]; 2] {
        let (e1, e2) = Self::tangent_basis(x);
        let mut h = [[0.0f64; 2]; 2];
        for u in &self.poles {
            let s = mink(&x.0, u);
            let sg = s.signum();
            let p = [mink(&e1, u), mink(&e2, u)];
            let c1 = 1.0 / (1.0 + s * s).sqrt();
            let c3 = c1 * c1 * c1;
            for a in 0..2 {
                for b in 0..2 {
                    // phi'' = s'' / sqrt(1+s^2) - s (s')^2 / (1+s^2)^{3/2},
                    // with s'' = s along unit tangent directions
                    let second = if a == b { s * c1 } else { 0.0 };
                    h[a][b] += sg * (second - s * p[a] * p[b] * c3);
                }
            }
        }
        h
    }

    /// Minimizes the objective restricted to the geodesic with pole
    /// `poles[i]`, starting near `x`; the restriction is one-dimensional
    /// and convex, solved by bisection on the derivative.
    fn restricted_minimum(&self, x: HPoint, i: usize) -> Option<HPoint> {
        let u = &self.poles[i];
        // project x onto the geodesic: remove the u component, renormalize
        let s = mink(&x.0, u);
        let p0 = [x.0[0] + s * u[0], x.0[1] + s * u[1], x.0[2] + s * u[2]];
        if mink(&p0, &p0) <= 0.0 {
            return None;
        }
        let p0 = renormalize(p0);
        let w = mcross(&p0, u);
        let wn = (-mink(&w, &w)).sqrt();
        if !wn.is_finite() || wn < 1e-300 {
            return None;
        }
        let w = [w[0] / wn, w[1] / wn, w[2] / wn];
        let at = |t: f64| {
            let (ch, sh) = (t.cosh(), t.sinh());
            HPoint([
                ch * p0[0] + sh * w[0],
                ch * p0[1] + sh * w[1],
                ch * p0[2] + sh * w[2],
            ])
        };
        let deriv = |t: f64| {
            let (ch, sh) = (t.cosh(), t.sinh());
            let p = at(t);
            let dp = [
                sh * p0[0] + ch * w[0],
                sh * p0[1] + ch * w[1],
                sh * p0[2] + ch * w[2],
            ];
            let mut d = 0.0;
            for (j, uj) in self.poles.iter().enumerate() {
                if j == i {
                    continue;
                }
                let sj = mink(&p.0, uj);
                d += sj.signum() * mink(&dp, uj) / (1.0 + sj * sj).sqrt();
            }
            d
        };
        // bracket a sign change of the derivative
        let (mut lo, mut hi) = (-1.0f64, 1.0f64);
        let mut grow = 0;
        while deriv(lo) > 0.0 && grow < 60 {
            lo *= 2.0;
            grow += 1;
        }
        while deriv(hi) < 0.0 && grow < 120 {
            hi *= 2.0;
            grow += 1;
        }
        if deriv(lo) > 0.0 || deriv(hi) < 0.0 {
            return None;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if deriv(mid) <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(at(0.5 * (lo + hi)))
    }

    fn step(x: HPoint, e1: &[f64; 3], e2: &[f64; 3], d: [f64; 2]) -> HPoint {
        let v = [
            d[0] * e1[0] + d[1] * e2[0],
            d[0] * e1[1] + d[1] * e2[1],
            d[0] * e1[2] + d[1] * e2[2],
        ];
        let r = (-mink(&v, &v)).sqrt();
        if r < 1e-300 {
            return x;
        }
        let (ch, sh) = (r.cosh(), r.sinh());
        HPoint(renormalize([
            ch * x.0[0] + sh * v[0] / r,
            ch * x.0[1] + sh * v[1] / r,
            ch * x.0[2] + sh * v[2] / r,
        ]))
    }
}

/// Distance from a point to the zonotope `{sum c_i g_i : |c_i| <= 1}` in
/// the plane: zero iff the point lies inside.
fn zonotope_distance(target: [f64; 2], gens: &[[f64; 2]]) -> f64 {
    let norm = |v: [f64; 2]| (v[0] * v[0] + v[1] * v[1]).sqrt();
    let mut gs: Vec<[f64; 2]> = gens
        .iter()
        .copied()
        .filter(|g| norm(*g) > 1e-300)
        // normalize to the upper half-plane; the zonotope is symmetric
        .map(|g| {
            if g[1] < 0.0 || (g[1] == 0.0 && g[0] < 0.0) {
                [-g[0], -g[1]]
            } else {
                g
            }
        })
        .collect();
    if gs.is_empty() {
        return norm(target);
    }
    gs.sort_by(|a, b| {
        a[1].atan2(a[0])
            .partial_cmp(&b[1].atan2(b[0]))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    // walk the boundary: start at -sum g_i, flip one generator at a time in
    // angular order for the lower chain; the upper chain is the reflection
    let mut v = [0.0f64; 2];
    for g in &gs {
        v[0] -= g[0];
        v[1] -= g[1];
    }
    let mut chain = vec![v];
    for g in &gs {
        v[0] += 2.0 * g[0];
        v[1] += 2.0 * g[1];
        chain.push(v);
    }
    // the opposite chain continues from the end of this one, reflected
    let k = chain.len() - 1;
    let mut polygon = chain.clone();
    polygon.extend(chain[1..k].iter().map(|p| [-p[0], -p[1]]));

    // inside test for the convex polygon (counterclockwise or degenerate)
    let n = polygon.len();
    let mut inside = true;
    let mut orient = 0.0f64;
    for i in 0..n {
        let a = polygon[i];
        let b = polygon[(i + 1) % n];
        let cross = (b[0] - a[0]) * (target[1] - a[1]) - (b[1] - a[1]) * (target[0] - a[0]);
        if orient == 0.0 {
            orient = cross;
        }
        if cross * orient < 0.0 {
            inside = false;
            break;
        }
    }
    if inside && orient != 0.0 && n >= 3 {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for i in 0..n {
        let a = polygon[i];
        let b = polygon[(i + 1) % n];
        let ab = [b[0] - a[0], b[1] - a[1]];
        let at = [target[0] - a[0], target[1] - a[1]];
        let len2 = ab[0] * ab[0] + ab[1] * ab[1];
        let t = if len2 > 0.0 {
            ((at[0] * ab[0] + at[1] * ab[1]) / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let p = [a[0] + t * ab[0], a[1] + t * ab[1]];
        best = best.min(norm([target[0] - p[0], target[1] - p[1]]));
    }
    best
}

/// A vector Minkowski-orthogonal to both arguments.
fn mcross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    let ja = [a[0], -a[1], -a[2]];
    let jb = [b[0], -b[1], -b[2]];
    [
        ja[1] * jb[2] - ja[2] * jb[1],
        ja[2] * jb[0] - ja[0] * jb[2],
        ja[0] * jb[1] - ja[1] * jb[0],
    ]
}

/// Intersection point of two crossing geodesics, when their poles span a
/// timelike direction.
fn crossing_point(u: &[f64; 3], v: &[f64; 3]) -> Option<HPoint> {
    let w = mcross(u, v);
    let n = mink(&w, &w);
    if n <= 0.0 {
        return None;
    }
    let s = n.sqrt().recip() * w[0].signum();
    Some(HPoint([w[0] * s, w[1] * s, w[2] * s]))
}

/// The point minimizing the sum of distances to the visible edges.
///
/// Rejects configurations whose geodesics all agree up to orientation, and
/// configurations with phantom visible edges.
pub fn barycenter(c: &Configuration) -> Result<Barycenter, GhostError> {
    let geos: Vec<&OrientedGeodesic> = c.geodesics().iter().map(|g| g.geodesic()).collect();
    if geos.iter().any(|g| g.is_phantom()) {
        return Err(GhostError::PhantomGeodesic);
    }
    let generic = geos
        .iter()
        .any(|g| geos.iter().any(|h| **g != **h && **g != h.reverse()));
    if !generic {
        return Err(GhostError::NonGeneric);
    }
    let poles: Result<Vec<_>, _> = geos.iter().map(|g| geodesic_pole(g)).collect();
    let obj = Objective { poles: poles? };

    // Start from the best of the origin and all pairwise crossing points.
    let mut x = HPoint::origin();
    let mut fx = obj.value(x);
    for i in 0..obj.poles.len() {
        for j in (i + 1)..obj.poles.len() {
            if let Some(p) = crossing_point(&obj.poles[i], &obj.poles[j]) {
                let fp = obj.value(p);
                if fp < fx {
                    x = p;
                    fx = fp;
                }
            }
        }
    }

    let active_eps = 1e-12;
    let grad_norm = |obj: &Objective, x: HPoint| obj.min_subgradient_norm(x, active_eps);
    let mut iterations = 0;
    let mut stalled = false;
    while iterations < MAX_ITERS {
        iterations += 1;
        let gn_exact = grad_norm(&obj, x);
        if gn_exact <= GRAD_TOL {
            return Ok(Barycenter {
                point: x,
                grad_norm: gn_exact,
                iterations,
                objective: fx,
            });
        }
        let g = obj.min_subgradient(x, active_eps);
        let gn = (g[0] * g[0] + g[1] * g[1]).sqrt().max(gn_exact);
        let (e1, e2) = Objective::tangent_basis(x);

        // Newton polish in the smooth region. Near the float resolution of
        // the objective, descent is certified by the gradient norm.
        let smooth = obj
            .poles
            .iter()
            .all(|u| mink(&x.0, u).abs() > 1e3 * active_eps);
        if smooth && (gn < 1e-2 || stalled) {
            let h = obj.hessian(x);
            let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
            if det.abs() > 1e-14 && h[0][0] > 0.0 {
                let d = [
                    -(h[1][1] * g[0] - h[0][1] * g[1]) / det,
                    -(h[0][0] * g[1] - h[1][0] * g[0]) / det,
                ];
                let xn = Objective::step(x, &e1, &e2, d);
                let fn_ = obj.value(xn);
                let accept = if stalled {
                    grad_norm(&obj, xn) < 0.9 * gn
                } else {
                    fn_ <= fx
                };
                if accept {
                    x = xn;
                    fx = fn_;
                    continue;
                } else if stalled {
                    break;
                }
            } else if stalled {
                break;
            }
        }

        // Backtracking gradient step.
        let mut t = 1.0 / (1.0 + gn);
        let mut moved = false;
        for _ in 0..70 {
            let xn = Objective::step(x, &e1, &e2, [-t * g[0], -t * g[1]]);
            let fn_ = obj.value(xn);
            if fn_ <= fx - 0.25 * t * gn * gn {
                x = xn;
                fx = fn_;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            // the objective has hit its floating-point floor; switch the
            // acceptance test to the gradient norm
            if stalled {
                break;
            }
            stalled = true;
        }
    }
    // the minimizer may lie on one of the geodesics, where the objective is
    // not smooth; finish with the restriction to each nearby geodesic
    for i in 0..obj.poles.len() {
        if mink(&x.0, &obj.poles[i]).abs() > 1e-5 {
            continue;
        }
        if let Some(xr) = obj.restricted_minimum(x, i) {
            let fr = obj.value(xr);
            if fr <= fx + 1e-12 && grad_norm(&obj, xr) < grad_norm(&obj, x) {
                x = xr;
                fx = fr;
            }
        }
    }
    let gn = grad_norm(&obj, x);
    if gn <= GRAD_TOL {
        return Ok(Barycenter {
            point: x,
            grad_norm: gn,
            iterations,
            objective: fx,
        });
    }
    Err(GhostError::NoConvergence {
        iterations,
        grad_norm: gn,
    })
}

/// Max over visible edges of the distance from the barycenter to the edge.
pub fn core_diameter(c: &Configuration) -> Result<f64, GhostError> {
    let b = barycenter(c)?;
    let mut r: f64 = 0.0;
    for g in c.geodesics() {
        let u = geodesic_pole(g.geodesic())?;
        r = r.max(distance_to_pole(b.point, &u));
    }
    Ok(r)
}
