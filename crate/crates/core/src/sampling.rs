//! Seeded random generation of boundary data for invariant suites and
//! property checks; all draws flow from a single 64-bit seed so every
//! counterexample is reproducible.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boundary::{
    cyclically_oriented, epsilon, BoundaryPoint, OrientedGeodesic, ThetaGeodesic, ThetaSignature,
};
use crate::config::Configuration;
use crate::repr::admissible_sign_triple;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A boundary point with small rational coordinates; occasionally the
    /// point at infinity.
    pub fn point(&mut self) -> BoundaryPoint {
        if self.rng.gen_range(0..24) == 0 {
            return BoundaryPoint::infinity();
        }
        let p = self.rng.gen_range(-24i64..=24);
        let q = self.rng.gen_range(1i64..=8);
        BoundaryPoint::new(p, q)
    }

    pub fn distinct_points(&mut self, n: usize) -> Vec<BoundaryPoint> {
        let mut out: Vec<BoundaryPoint> = Vec::with_capacity(n);
        while out.len() < n {
            let p = self.point();
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out
    }

    /// A non-phantom oriented geodesic.
    pub fn geodesic(&mut self) -> OrientedGeodesic {
        loop {
            let a = self.point();
            let b = self.point();
            if a != b {
                return OrientedGeodesic::new(a, b);
            }
        }
    }

    pub fn theta_geodesic(&mut self, sig: &ThetaSignature) -> ThetaGeodesic {
        let label = self.rng.gen_range(0..sig.labels());
        ThetaGeodesic::new(self.geodesic(), label)
    }

    /// A pair of geodesics that cross in the interior.
    pub fn crossing_pair(&mut self) -> (OrientedGeodesic, OrientedGeodesic) {
        loop {
            let g = self.geodesic();
            let h = self.geodesic();
            if crate::boundary::separates(&g, &h) {
                return (g, h);
            }
        }
    }

    /// Four distinct points in positive cyclic order.
    pub fn oriented_quadruple(&mut self) -> [BoundaryPoint; 4] {
        loop {
            let pts = self.distinct_points(4);
            let perms: [[usize; 4]; 6] = [
                [0, 1, 2, 3],
                [0, 1, 3, 2],
                [0, 2, 1, 3],
                [0, 2, 3, 1],
                [0, 3, 1, 2],
                [0, 3, 2, 1],
            ];
            for p in perms {
                let q = [
                    pts[p[0]].clone(),
                    pts[p[1]].clone(),
                    pts[p[2]].clone(),
                    pts[p[3]].clone(),
                ];
                if cyclically_oriented(&q[0], &q[1], &q[2], &q[3]) {
                    return q;
                }
            }
        }
    }

    /// A configuration of the given rank with decorated geodesics drawn
    /// from a small shared pool, so shared endpoints and crossings both
    /// occur; visible edges are never phantom.
    pub fn configuration(&mut self, rank: usize, sig: &ThetaSignature) -> Configuration {
        let pool = self.distinct_points(2 * rank + 2);
        let mut gs = Vec::with_capacity(rank);
        for _ in 0..rank {
            loop {
                let a = pool[self.rng.gen_range(0..pool.len())].clone();
                let b = pool[self.rng.gen_range(0..pool.len())].clone();
                if a != b {
                    let label = self.rng.gen_range(0..sig.labels());
                    gs.push(ThetaGeodesic::new(OrientedGeodesic::new(a, b), label));
                    break;
                }
            }
        }
        Configuration::new(gs).expect("rank >= 1")
    }

    /// A configuration with rank drawn uniformly from `lo..=hi`.
    pub fn configuration_ranked(
        &mut self,
        lo: usize,
        hi: usize,
        sig: &ThetaSignature,
    ) -> Configuration {
        let rank = self.rng.gen_range(lo..=hi);
        self.configuration(rank, sig)
    }

    /// A configuration whose endpoints are pairwise distinct fresh points.
    pub fn configuration_generic(&mut self, rank: usize, sig: &ThetaSignature) -> Configuration {
        let pts = self.distinct_points(2 * rank);
        let gs = (0..rank)
            .map(|i| {
                let label = self.rng.gen_range(0..sig.labels());
                ThetaGeodesic::new(
                    OrientedGeodesic::new(pts[2 * i].clone(), pts[2 * i + 1].clone()),
                    label,
                )
            })
            .collect();
        Configuration::new(gs).expect("rank >= 1")
    }

    /// A triple of configurations with ranks in 1..=4 and no vertex common
    /// to all three, the hypothesis of the Jacobi theorem.
    pub fn jacobi_triple(
        &mut self,
        sig: &ThetaSignature,
    ) -> (Configuration, Configuration, Configuration) {
        loop {
            let (ra, rb, rc) = (
                self.rng.gen_range(1..=4),
                self.rng.gen_range(1..=4),
                self.rng.gen_range(1..=4),
            );
            let a = self.configuration(ra, sig);
            let b = self.configuration(rb, sig);
            let c = self.configuration(rc, sig);
            let va = a.vertices();
            let vb = b.vertices();
            let vc = c.vertices();
            let common = va
                .iter()
                .any(|p| vb.contains(p) && vc.contains(p));
            if !common {
                return (a, b, c);
            }
        }
    }

    /// An admissible triple `(g1, g0, h)` for the sign lemma: `eps(g0, g1)`
    /// vanishes and `h` meets `g1` first. Mixes interior crossings,
    /// endpoint contacts of the allowed kind, and disjoint geodesics.
    pub fn sign_lemma_triple(
        &mut self,
    ) -> (OrientedGeodesic, OrientedGeodesic, OrientedGeodesic) {
        loop {
            // six points in cyclic position: h-, a1, a0, h+, b0, b1
            let pts = self.distinct_points(6);
            let mut ordered = vec![pts[0].clone()];
            let mut rest: Vec<BoundaryPoint> = pts[1..].to_vec();
            // sort the rest by cyclic position after pts[0]
            rest.sort_by(|x, y| {
                if x == y {
                    return std::cmp::Ordering::Equal;
                }
                let o = crate::boundary::cyclic_orient(&ordered[0], x, y);
                if o >= 0 {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                }
            });
            ordered.extend(rest);
            let (hm, a1, a0, hp, b0, b1) = (
                ordered[0].clone(),
                ordered[1].clone(),
                ordered[2].clone(),
                ordered[3].clone(),
                ordered[4].clone(),
                ordered[5].clone(),
            );
            let h = OrientedGeodesic::new(hm.clone(), hp.clone());
            let flip = |g: OrientedGeodesic, rng: &mut ChaCha8Rng| {
                if rng.gen_bool(0.5) {
                    g.reverse()
                } else {
                    g
                }
            };
            let variant = self.rng.gen_range(0..5);
            let g1 = match variant {
                // interior crossing
                0 | 1 | 4 => OrientedGeodesic::new(a1.clone(), b1.clone()),
                // contact with h at its backward endpoint
                2 => OrientedGeodesic::new(a1.clone(), hm.clone()),
                // disjoint from h
                _ => OrientedGeodesic::new(b0.clone(), b1.clone()),
            };
            let g0 = match variant {
                0 | 2 | 3 => OrientedGeodesic::new(a0.clone(), b0.clone()),
                // contact with h at its forward endpoint
                1 => OrientedGeodesic::new(hp.clone(), b0.clone()),
                // disjoint
                _ => OrientedGeodesic::new(a1.clone(), a0.clone()),
            };
            let g1 = flip(g1, &mut self.rng);
            let g0 = flip(g0, &mut self.rng);
            if !epsilon(&g0, &g1).is_zero() {
                continue;
            }
            if admissible_sign_triple(&g1, &g0, &h) {
                return (g1, g0, h);
            }
        }
    }
}
