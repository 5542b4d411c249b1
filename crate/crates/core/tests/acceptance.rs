//! Acceptance suite: every closed-form identity and property battery the
//! library promises, checked exactly (zero tolerance) at desk scale.
//!
//! Run with `cargo test -p jetav --test acceptance -- --nocapture` to see
//! one pass/fail line per criterion.

use std::time::{Duration, Instant};

use jetav::avmod::{av_axiom_check, differentiability_check, minimal_diff_order};
use jetav::geometry::p1_atlas;
use jetav::jets::{aut_exp, aut_log, JetAutomorphism, JetDerivation};
use jetav::matrix::Matrix;
use jetav::repn::{rho_family, sigma_family, weight_rep};
use jetav::sample::Sampler;
use jetav::series::{SeriesCtx, TruncSeries};
use jetav::suites::{
    coproduct_suite, iso_suite, jet_av_suite, p1_suite, repn_suite, rudakov_suite, SuiteConfig,
};
use jetav::{
    jet_glue_matrix, rudakov_realization_check, FnRing, JetModule, Point, Rat, RingElem,
    RudakovModule,
};

const SEED: u64 = 2024;
const M_RANGE: [i64; 6] = [-2, -1, 0, 1, 2, 3];

fn announce(criterion: u32, name: &str, passed: bool, elapsed: Duration) {
    println!(
        "criterion {criterion:2} [{}] {name} ({} ms)",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_millis()
    );
    assert!(passed, "criterion {criterion} failed: {name}");
}

fn within(elapsed: Duration, budget_secs: u64, what: &str) {
    assert!(
        elapsed < Duration::from_secs(budget_secs),
        "{what} took {elapsed:?}, budget {budget_secs} s"
    );
}

fn ypow(ring: &std::sync::Arc<FnRing>, k: i64) -> RingElem {
    RingElem::var(ring, 0).pow_i(k).unwrap()
}

#[test]
fn criterion_01_rho_family_on_p1() {
    let start = Instant::now();
    let atlas = p1_atlas();
    let t = &atlas.transitions[0];
    let ring = t.overlap_from();
    let mut ok = true;
    for m in M_RANGE {
        let rep = rho_family(m);
        let glue = rep.integrate(&t.jet(6).unwrap()).unwrap();
        let scale = ypow(ring, -2 * m);
        let expected = Matrix::from_rows(vec![
            vec![scale.mul(&ypow(ring, -2)), scale.mul(&ypow(ring, -1)).neg()],
            vec![RingElem::zero(ring), scale.clone()],
        ]);
        ok &= glue == expected;
        // section transitions are the columns
        ok &= glue.at(0, 0) == &ypow(ring, -2 * m - 2) && glue.at(1, 0).is_zero();
        ok &= glue.at(1, 1) == &ypow(ring, -2 * m)
            && glue.at(0, 1) == &ypow(ring, -2 * m - 1).neg();
    }
    let elapsed = start.elapsed();
    within(elapsed, 5, "rho family chain");
    announce(1, "rho_m(phi_G) and section transitions, m in -2..3", ok, elapsed);
}

#[test]
fn criterion_02_sigma_family_on_p1() {
    let start = Instant::now();
    let atlas = p1_atlas();
    let t = &atlas.transitions[0];
    let ring = t.overlap_from();
    let mut ok = true;
    for m in M_RANGE {
        let rep = sigma_family(m);
        let glue = rep.integrate(&t.jet(6).unwrap()).unwrap();
        let expected = Matrix::from_rows(vec![
            vec![ypow(ring, -2 * m - 4), RingElem::zero(ring)],
            vec![RingElem::zero(ring), ypow(ring, -2 * m)],
        ]);
        ok &= glue == expected;
    }
    let elapsed = start.elapsed();
    within(elapsed, 5, "sigma family chain");
    announce(2, "sigma_m section transitions, m in -2..3", ok, elapsed);
}

#[test]
fn criterion_03_exponential_closed_form() {
    let start = Instant::now();
    let ctx = SeriesCtx::rational(1, 10);
    let mut ok = true;
    for alpha in [Rat::one(), Rat::from_int(-2), Rat::new(3, 5)] {
        let d = JetDerivation::single(
            TruncSeries::var(&ctx, 0).pow(2).unwrap().scale_rat(&alpha),
            0,
        );
        let exp = aut_exp(&d).unwrap();
        // independent route: X / (1 - aX) through the geometric inverse
        let geometric = TruncSeries::one(&ctx)
            .sub(&TruncSeries::var(&ctx, 0).scale_rat(&alpha))
            .unwrap()
            .unit_invert()
            .unwrap()
            .mul(&TruncSeries::var(&ctx, 0))
            .unwrap();
        ok &= exp.images()[0] == geometric;
    }
    let elapsed = start.elapsed();
    within(elapsed, 1, "exponential closed form");
    announce(3, "exp(a X^2 d/dX) = X/(1-aX) through order 10", ok, elapsed);
}

#[test]
fn criterion_04_iso_theorem() {
    let start = Instant::now();
    let cfg = SuiteConfig {
        order: 5,
        samples: 100,
        degree: 4,
        seed: SEED,
        ..SuiteConfig::default()
    };
    let report = iso_suite(&cfg).unwrap();
    let elapsed = start.elapsed();
    within(elapsed, 60, "iso suite");
    if !report.passed {
        eprintln!("{}", report.render_text());
    }
    announce(4, "phi/psi inverse pair and Lie homomorphism", report.passed, elapsed);
}

#[test]
fn criterion_05_charged_compatibility() {
    let start = Instant::now();
    let atlas = p1_atlas();
    let t = &atlas.transitions[0];
    let order = 6;
    let qctx = SeriesCtx::rational(1, order);
    let mut ok = true;
    for k in 1..=3u32 {
        let g = TruncSeries::var(&qctx, 0).pow(k).unwrap();
        let report = t.charged_compat_check(&g, 0, order).unwrap();
        ok &= report.passed;
    }
    let elapsed = start.elapsed();
    within(elapsed, 30, "charged compatibility");
    announce(5, "transported commutators vanish for g in {X, X^2, X^3}, N = 6", ok, elapsed);
}

#[test]
fn criterion_06_cocycle() {
    let start = Instant::now();
    let atlas = p1_atlas();
    let t = &atlas.transitions[0];
    let mut ok = t.jet_cocycle_check(6).unwrap().passed;
    for m in M_RANGE {
        for rep in [rho_family(m), sigma_family(m)] {
            let glue = jet_glue_matrix(&rep, t, 6).unwrap();
            let glue_rev = jet_glue_matrix(&rep, &t.reversed(), 6).unwrap();
            let moved = glue_rev.map(|e| e.substitute(t.maps(), t.overlap_from()).unwrap());
            ok &= glue.mul(&moved).is_identity() && moved.mul(&glue).is_identity();
        }
    }
    let elapsed = start.elapsed();
    announce(6, "transition-jet and glue-matrix cocycles at N = 6", ok, elapsed);
}

#[test]
fn criterion_07_coproduct_chain_rule() {
    let start = Instant::now();
    let cfg = SuiteConfig {
        order: 4,
        samples: 50,
        seed: SEED,
        ..SuiteConfig::default()
    };
    let report = coproduct_suite(&cfg).unwrap();
    if !report.passed {
        eprintln!("{}", report.render_text());
    }
    announce(
        7,
        "coefficient coproduct matches composition, |s| <= 4, n <= 2",
        report.passed,
        start.elapsed(),
    );
}

#[test]
fn criterion_08_bundle_axioms_and_formulas() {
    let start = Instant::now();
    let atlas = p1_atlas();
    let x_ring = atlas.chart("x").unwrap().ring().clone();
    let y_ring = atlas.chart("y").unwrap().ring().clone();
    let mut ok = true;
    for m in M_RANGE {
        for rep in [rho_family(m), sigma_family(m)] {
            for ring in [&x_ring, &y_ring] {
                let module = JetModule::new(rep.clone(), ring.clone());
                let report = av_axiom_check(&module, SEED, 100, 4).unwrap();
                if !report.passed {
                    eprintln!("{} in {:?}: {}", rep.name(), ring, report.render_text());
                }
                ok &= report.passed;
            }
        }
    }
    // displayed action formulas, including the (1/2) g f'' e1 term
    let mut s = Sampler::new(SEED);
    for m in M_RANGE {
        let module = JetModule::new(rho_family(m), x_ring.clone());
        let module_sigma = JetModule::new(sigma_family(m), x_ring.clone());
        for _ in 0..10 {
            let f = RingElem::from_poly(&x_ring, s.poly(1, 4));
            let g = RingElem::from_poly(&x_ring, s.poly(1, 4));
            let field = jetav::VectorField::single(f.clone(), 0);
            let out = module
                .action(&field, &[g.clone(), RingElem::zero(&x_ring)])
                .unwrap();
            ok &= out[0]
                == f.mul(&g.derive(0))
                    .add(&g.mul(&f.derive(0)).scale(&Rat::from_int(m + 1)))
                && out[1].is_zero();
            let out = module
                .action(&field, &[RingElem::zero(&x_ring), g.clone()])
                .unwrap();
            ok &= out[1]
                == f.mul(&g.derive(0)).add(&g.mul(&f.derive(0)).scale(&Rat::from_int(m)));
            ok &= out[0] == g.mul(&f.derive(0).derive(0)).scale(&Rat::new(1, 2));
            let out = module_sigma
                .action(&field, &[RingElem::zero(&x_ring), g.clone()])
                .unwrap();
            ok &= out[0]
                == g.mul(&f.derive(0).derive(0).derive(0)).scale(&Rat::new(1, 6));
        }
    }
    announce(8, "AV axioms and displayed action formulas for both families", ok, start.elapsed());
}

#[test]
fn criterion_09_rudakov_differentiability() {
    let start = Instant::now();
    let ring = FnRing::poly_ring(&["x"]);
    let p = Point::origin(&ring).unwrap();
    let mut ok = true;
    for m in [-1i64, 1] {
        for rep in [rho_family(m), sigma_family(m)] {
            let n_rep = rep.nilpotency_order();
            let module = RudakovModule::new(rep.clone(), p.clone(), 5).unwrap();
            let fail_at_one = differentiability_check(&module, 1, SEED, 20, 4).unwrap();
            ok &= !fail_at_one.passed;
            let (min_n, report) =
                minimal_diff_order(&module, n_rep, n_rep + 2, SEED, 20, 4).unwrap();
            if min_n.is_none() {
                eprintln!("{}: {}", rep.name(), report.render_text());
            }
            ok &= min_n.is_some();
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, 120, "rudakov differentiability");
    announce(9, "Rudakov modules differentiable in [N_rep, N_rep+2], not at 1", ok, elapsed);
}

#[test]
fn criterion_10_rudakov_realization() {
    let start = Instant::now();
    let ring = FnRing::poly_ring(&["x"]);
    let p = Point::origin(&ring).unwrap();
    let mut ok = true;
    for rep in [weight_rep(4), rho_family(1)] {
        let report = rudakov_realization_check(&rep, &p, 4, SEED, 30, 4, true).unwrap();
        if !report.passed {
            eprintln!("{}: {}", rep.name(), report.render_text());
        }
        ok &= report.passed;
        let mutated = rudakov_realization_check(&rep, &p, 4, SEED, 30, 4, false).unwrap();
        ok &= !mutated.passed;
    }
    announce(10, "delta-tensor realization matches; untwisted mutation fails", ok, start.elapsed());
}

#[test]
fn criterion_11_tensor_and_dual_gluing() {
    let start = Instant::now();
    let atlas = p1_atlas();
    let t = &atlas.transitions[0];
    let mut ok = true;
    for (m, k) in [(-2i64, 3i64), (0, 1), (1, -1), (2, 0)] {
        let r1 = rho_family(m);
        let r2 = sigma_family(k);
        let tensor = r1.tensor(&r2).unwrap();
        let lhs = jet_glue_matrix(&tensor, t, 6).unwrap();
        let rhs = jet_glue_matrix(&r1, t, 6)
            .unwrap()
            .kron(&jet_glue_matrix(&r2, t, 6).unwrap());
        ok &= lhs == rhs;
        let dual = r1.dual().unwrap();
        let lhs = jet_glue_matrix(&dual, t, 6).unwrap();
        let rhs = jet_glue_matrix(&r1, t, 6)
            .unwrap()
            .try_inverse()
            .unwrap()
            .transpose();
        ok &= lhs == rhs;
    }
    announce(11, "Kronecker gluing for tensors, inverse transpose for duals", ok, start.elapsed());
}

#[test]
fn criterion_12_group_algebra_coherence() {
    let start = Instant::now();
    let cfg = SuiteConfig {
        order: 4,
        samples: 100,
        seed: SEED,
        ..SuiteConfig::default()
    };
    let report = repn_suite(&cfg).unwrap();
    if !report.passed {
        eprintln!("{}", report.render_text());
    }
    let mut ok = report.passed;
    // log . exp = id on >= 50 pro-nilpotent derivations, n <= 2, N <= 5
    let mut s = Sampler::new(SEED);
    for n in [1usize, 2] {
        let ctx = SeriesCtx::rational(n, 5);
        for _ in 0..50 {
            let d = s.derivation_mlplus(&ctx, 0);
            ok &= aut_log(&aut_exp(&d).unwrap()).unwrap() == d;
            let u = s.unipotent_aut(&ctx, 0);
            ok &= aut_exp(&aut_log(&u).unwrap()).unwrap() == u;
        }
    }
    announce(12, "integration coherence and exp/log bijectivity", ok, start.elapsed());
}

#[test]
fn suites_pass_at_reduced_scale() {
    // the remaining named suites at a smaller sample count, as a smoke
    // gate that `verify all` stays green
    let cfg = SuiteConfig {
        order: 4,
        samples: 12,
        seed: SEED,
        cutoff: 3,
        ..SuiteConfig::default()
    };
    for (name, report) in [
        ("p1", p1_suite(&cfg).unwrap()),
        ("jet-av", jet_av_suite(&cfg).unwrap()),
        ("rudakov", rudakov_suite(&cfg).unwrap()),
    ] {
        if !report.passed {
            eprintln!("{}", report.render_text());
        }
        assert!(report.passed, "suite {name} failed");
    }
    let unknown = jetav::run_suite("unknown-suite", &cfg);
    assert!(unknown.is_err());
}
