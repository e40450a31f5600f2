//! Named verification suites: each draws seeded samples, checks one family
//! of identities exactly, and reports counterexamples as witnesses.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use ghostpoly::ghost::{
    bracket_generators, cancellation_terms, hexagonal_check, jacobiator, CircleLinking,
    GhostElement,
};
use ghostpoly::repr::sign_lemma_term;
use ghostpoly::sampling::Sampler;
use ghostpoly::swap::{pi, swap_bracket};
use ghostpoly::{Configuration, ThetaGeodesic, ThetaSignature};

use crate::scene::Scene;

pub const SUITE_NAMES: &[&str] = &[
    "jacobi",
    "hexagonal",
    "pi-homomorphism",
    "opp-endo",
    "i-equals-t-bracket",
    "sign-lemma",
    "triangle-commute",
    "cancellations",
];

#[derive(Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub checked: usize,
    pub passed: bool,
    pub failures: Vec<String>,
}

const MAX_WITNESSES: usize = 10;

struct Run {
    checked: usize,
    failures: Vec<String>,
}

impl Run {
    fn new() -> Run {
        Run {
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < MAX_WITNESSES {
            self.failures.push(witness());
        }
    }
}

pub fn run_suite(scene: &Scene, suite: &str, samples: usize, seed: u64) -> Option<SuiteReport> {
    let mut s = Sampler::new(seed);
    let mut run = Run::new();
    match suite {
        "jacobi" => jacobi(&mut s, samples, &mut run),
        "hexagonal" => hexagonal(&mut s, samples, &mut run),
        "pi-homomorphism" => pi_homomorphism(&mut s, samples, &mut run),
        "opp-endo" => opp_endo(scene, &mut s, samples, &mut run),
        "i-equals-t-bracket" => i_equals_t(scene, &mut s, samples, &mut run),
        "sign-lemma" => sign_lemma(scene, &mut s, samples, &mut run),
        "triangle-commute" => triangle_commute(scene, &mut s, samples, &mut run),
        "cancellations" => cancellations(&mut s, samples, &mut run),
        _ => return None,
    }
    Some(SuiteReport {
        suite: suite.to_string(),
        seed,
        samples,
        checked: run.checked,
        passed: run.failures.is_empty(),
        failures: run.failures,
    })
}

fn mixed_signature() -> ThetaSignature {
    ThetaSignature::new(vec![1, 2], 4).expect("valid signature")
}

fn jacobi(s: &mut Sampler, samples: usize, run: &mut Run) {
    let sig = mixed_signature();
    for _ in 0..samples {
        let (a, b, c) = s.jacobi_triple(&sig);
        let j = jacobiator(
            &GhostElement::from_configuration(a.clone()),
            &GhostElement::from_configuration(b.clone()),
            &GhostElement::from_configuration(c.clone()),
            &sig,
        );
        run.check(j.is_zero(), || format!("A={a} B={b} C={c} jacobiator={j}"));
    }
}

fn hexagonal(s: &mut Sampler, samples: usize, run: &mut Run) {
    use rand::Rng;
    let ls = CircleLinking;
    let mut produced = 0usize;
    while produced < samples {
        let pool = s.distinct_points(6);
        let idx: Vec<usize> = (0..6).map(|_| s.rng().gen_range(0..6)).collect();
        let p: Vec<_> = idx.iter().map(|&i| pool[i].clone()).collect();
        let (first, second, third) = hexagonal_check(&ls, &p[0], &p[1], &p[2], &p[3], &p[4], &p[5]);
        run.check(first, || format!("first identity at {p:?}"));
        let disjoint = ![&p[0], &p[1]]
            .iter()
            .any(|x| [&p[2], &p[3]].contains(x) && [&p[4], &p[5]].contains(x));
        if disjoint {
            run.check(second && third, || format!("product identities at {p:?}"));
            produced += 1;
        }
    }
}

fn pi_homomorphism(s: &mut Sampler, samples: usize, run: &mut Run) {
    let sig = ThetaSignature::projective(2);
    for _ in 0..samples {
        let g = s.configuration_ranked(1, 4, &sig);
        let h = s.configuration_ranked(1, 4, &sig);
        let ghost = bracket_generators(&g, &h, &sig);
        let ok = match (
            pi(&ghost),
            pi(&GhostElement::from_configuration(g.clone())),
            pi(&GhostElement::from_configuration(h.clone())),
        ) {
            (Ok(lhs), Ok(pg), Ok(ph)) => match swap_bracket(&pg, &ph) {
                Ok(rhs) => lhs == rhs,
                Err(_) => false,
            },
            _ => false,
        };
        run.check(ok, || format!("G={g} H={h}"));
    }
}

fn opp_endo(scene: &Scene, s: &mut Sampler, samples: usize, run: &mut Run) {
    let f = &scene.family;
    let sig = f.signature().clone();
    for _ in 0..samples {
        let c = s.configuration_ranked(2, 4, &sig);
        let t = match f.correlation(&c) {
            Ok(t) => t,
            Err(e) => {
                run.check(false, || format!("C={c}: {e}"));
                continue;
            }
        };
        for e in c.ghost_polygon().edges() {
            if e.theta().is_phantom() {
                continue;
            }
            let ok = match (f.opposite_endomorphism(&c, e), f.projector(e.theta())) {
                (Ok(lhs), Ok(p)) => {
                    let d = f.dim();
                    let mut equal = true;
                    for r in 0..d {
                        for col in 0..d {
                            if lhs[(r, col)] != &t * &p.matrix()[(r, col)] {
                                equal = false;
                            }
                        }
                    }
                    equal
                }
                _ => false,
            };
            run.check(ok, || format!("C={c} edge={:?}", e.theta()));
        }
    }
}

fn i_equals_t(scene: &Scene, s: &mut Sampler, samples: usize, run: &mut Run) {
    let f = &scene.family;
    let sig = f.signature().clone();
    for _ in 0..samples {
        let g = s.configuration_ranked(1, 4, &sig);
        let h = s.configuration_ranked(1, 4, &sig);
        let br = bracket_generators(&g, &h, &sig);
        let ok = match (f.intersection(&g, &h), f.correlation_element(&br)) {
            (Ok(direct), Ok(via)) => direct == via,
            _ => false,
        };
        run.check(ok, || format!("G={g} H={h}"));
    }
}

fn sign_lemma(scene: &Scene, s: &mut Sampler, samples: usize, run: &mut Run) {
    let f = &scene.family;
    for _ in 0..samples {
        let (g1, g0, h) = s.sign_lemma_triple();
        let (g1, g0, h) = (
            ThetaGeodesic::projective(g1),
            ThetaGeodesic::projective(g0),
            ThetaGeodesic::projective(h),
        );
        match sign_lemma_term(f, &g1, &g0, &h) {
            Ok(term) => {
                let classified = if term.strict_expected {
                    term.value.is_positive()
                } else {
                    term.value.is_zero()
                };
                run.check(term.value == term.factored && classified, || {
                    format!(
                        "g1={g1} g0={g0} h={h} value={} factored={}",
                        term.value, term.factored
                    )
                });
            }
            Err(e) => run.check(false, || format!("g1={g1} g0={g0} h={h}: {e}")),
        }
    }
}

fn triangle_commute(scene: &Scene, s: &mut Sampler, samples: usize, run: &mut Run) {
    use ghostpoly::cyclic_orient;
    use ghostpoly::ghost::bracket;
    let f = &scene.family;
    let sig = f.signature().clone();
    let mut produced = 0usize;
    let mut attempts = 0usize;
    while produced < samples && attempts < samples * 200 {
        attempts += 1;
        let vs = s.distinct_points(3);
        let t0 = match ghostpoly::repr::triangle_configuration(&vs[0], &vs[1], &vs[2], 0) {
            Ok(t) => t,
            Err(_) => continue,
        };
        // spectator endpoints in the arc between vs[1] and vs[2] away from vs[0]
        let in_arc = |x: &ghostpoly::BoundaryPoint| {
            cyclic_orient(&vs[1], x, &vs[2]) != 0
                && cyclic_orient(&vs[1], x, &vs[2]) == cyclic_orient(&vs[1], x, &vs[0])
        };
        let mut endpoints = Vec::new();
        let mut tries = 0;
        while endpoints.len() < 3 && tries < 2000 {
            tries += 1;
            let p = s.point();
            if in_arc(&p) && !endpoints.contains(&p) {
                endpoints.push(p);
            }
        }
        if endpoints.len() < 3 {
            continue;
        }
        let g = ThetaGeodesic::projective(ghostpoly::OrientedGeodesic::new(
            endpoints[0].clone(),
            endpoints[1].clone(),
        ));
        let t0e = GhostElement::from_configuration(t0.clone());
        let ge = GhostElement::from_configuration(Configuration::singleton(g.clone()));
        let ok_g = match f.correlation_element(&bracket(&ge, &t0e, &sig)) {
            Ok(v) => v.is_zero(),
            Err(_) => false,
        };
        run.check(ok_g, || format!("[g, t] at t0={t0} g={g}"));

        let t1 =
            match ghostpoly::repr::triangle_configuration(&endpoints[0], &endpoints[1], &endpoints[2], 0) {
                Ok(t) => t,
                Err(_) => continue,
            };
        let t1e = GhostElement::from_configuration(t1.clone());
        let ok_tt = match f.correlation_element(&bracket(&t0e, &t1e, &sig)) {
            Ok(v) => v.is_zero(),
            Err(_) => false,
        };
        run.check(ok_tt, || format!("[t0, t1] at t0={t0} t1={t1}"));

        // t t̄ = 1 rides along
        let ok_unit = match (f.correlation(&t0), f.correlation(&t0.reverse())) {
            (Ok(a), Ok(b)) => a * b == BigRational::one(),
            _ => false,
        };
        run.check(ok_unit, || format!("t t̄ at {t0}"));
        produced += 1;
    }
}

fn cancellations(s: &mut Sampler, samples: usize, run: &mut Run) {
    let sig = mixed_signature();
    for _ in 0..samples {
        let (a, b, c) = s.jacobi_triple(&sig);
        let f_abc = cancellation_terms(&a, &b, &c, &sig);
        let f_bca = cancellation_terms(&b, &c, &a, &sig);
        let f_cab = cancellation_terms(&c, &a, &b, &sig);
        run.check(f_abc.p1.add(&f_cab.p2).is_zero(), || {
            format!("first cancellation at A={a} B={b} C={c}")
        });
        run.check(f_abc.q1.add(&f_cab.r2).is_zero(), || {
            format!("second cancellation at A={a} B={b} C={c}")
        });
        run.check(f_abc.r1.add(&f_bca.q2).is_zero(), || {
            format!("second cancellation (mirror) at A={a} B={b} C={c}")
        });
        run.check(
            f_abc.s1.add(&f_bca.s1).add(&f_cab.s1).is_zero(),
            || format!("hexagonal cancellation 1 at A={a} B={b} C={c}"),
        );
        run.check(
            f_abc.s2.add(&f_bca.s2).add(&f_cab.s2).is_zero(),
            || format!("hexagonal cancellation 2 at A={a} B={b} C={c}"),
        );
        let direct = ghostpoly::ghost::nested_bracket(
            &[
                GhostElement::from_configuration(a.clone()),
                GhostElement::from_configuration(b.clone()),
                GhostElement::from_configuration(c.clone()),
            ],
            &sig,
        );
        run.check(f_abc.assemble(b.rank(), c.rank()) == direct, || {
            format!("reassembly at A={a} B={b} C={c}")
        });
    }
}
