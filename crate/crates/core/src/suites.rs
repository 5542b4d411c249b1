//! Named verification suites.
//!
//! Each suite runs one battery of exact identity checks on seeded random
//! data and returns a [`CheckReport`]. The CLI exposes them through
//! `verify <suite>`; the acceptance tests call them directly.

use std::sync::Arc;
use std::time::Instant;

use crate::avmod::{
    av_axiom_check, differentiability_check, glue_equivariance_check, jet_glue_matrix,
    minimal_diff_order, rudakov_realization_check, DeltaModule, JetModule,
    RudakovModule,
};
use crate::error::{Error, Result};
use crate::geometry::{p1_atlas, Chart, Point, Transition};
use crate::idx::{indices_up_to, MultiIndex};
use crate::jets::{aut_exp, aut_log, faa_di_bruno, JetAutomorphism, JetDerivation};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::rat::Rat;
use crate::report::CheckReport;
use crate::repn::{rho_family, sigma_family, trivial_rep, weight_rep, RepSpec};
use crate::ring::{FnRing, RingElem};
use crate::sample::Sampler;
use crate::series::{taylor_shift, SeriesCtx, TruncSeries};
use crate::smash::{anchor_of_smash, delta, diff_element, phi, psi, JetVF, SmashTerm, VectorField};

/// Configuration shared by every suite.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub order: u32,
    pub seed: u64,
    pub samples: u64,
    pub cutoff: u32,
    pub degree: u32,
    pub m_lo: i64,
    pub m_hi: i64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            order: 4,
            seed: 2024,
            samples: 100,
            cutoff: 4,
            degree: 4,
            m_lo: -2,
            m_hi: 3,
        }
    }
}

impl SuiteConfig {
    pub fn m_range(&self) -> impl Iterator<Item = i64> {
        self.m_lo..=self.m_hi
    }
}

pub const SUITE_NAMES: &[&str] = &[
    "algebra",
    "jets-group",
    "coproduct",
    "repn",
    "iso",
    "geometry",
    "jet-av",
    "rudakov",
    "p1",
];

/// Run one named suite; `all` runs every suite in order.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<CheckReport> {
    let start = Instant::now();
    let mut report = match name {
        "algebra" => algebra_suite(cfg),
        "jets-group" => jets_group_suite(cfg),
        "coproduct" => coproduct_suite(cfg),
        "repn" => repn_suite(cfg),
        "iso" => iso_suite(cfg),
        "geometry" => geometry_suite(cfg),
        "jet-av" => jet_av_suite(cfg),
        "rudakov" => rudakov_suite(cfg),
        "p1" => p1_suite(cfg),
        "all" => {
            let mut all = CheckReport::new("all").with_seed(cfg.seed);
            for sub in SUITE_NAMES {
                all.merge(run_suite(sub, cfg)?);
            }
            Ok(all)
        }
        other => Err(Error::UnknownName(format!("suite `{other}`"))),
    }?;
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

fn laurent_ring() -> Arc<FnRing> {
    FnRing::localized(&["y"], vec![Poly::var(1, 0)]).expect("y is nonzero")
}

// ---------------------------------------------------------------------------

/// Ring axioms for truncated series, inversion, composition associativity
/// and the Taylor-shift homomorphism.
pub fn algebra_suite(cfg: &SuiteConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new("algebra")
        .with_seed(cfg.seed)
        .with_samples(cfg.samples);
    let mut s = Sampler::new(cfg.seed);
    let rings = [FnRing::rationals(), laurent_ring()];
    let per_order = (cfg.samples / 3).max(8);
    for order in 1..=cfg.order.min(6) {
        for ring in &rings {
            for n in [1usize, 2] {
                let ctx = SeriesCtx::new(ring.clone(), n, order);
                for k in 0..per_order {
                    let a = s.series_from_degree(&ctx, 0, 1);
                    let b = s.series_from_degree(&ctx, 0, 1);
                    let c = s.series_from_degree(&ctx, 0, 1);
                    report.require(
                        format!("mul associative (n={n}, N={order}, sample {k})"),
                        a.mul(&b)?.mul(&c)? == a.mul(&b.mul(&c)?)?,
                        "associativity broken".to_string(),
                    );
                    report.require(
                        format!("mul commutative (n={n}, N={order}, sample {k})"),
                        a.mul(&b)? == b.mul(&a)?,
                        "commutativity broken".to_string(),
                    );
                    report.require(
                        format!("mul distributes (n={n}, N={order}, sample {k})"),
                        a.mul(&b.add(&c)?)? == a.mul(&b)?.add(&a.mul(&c)?)?,
                        "distributivity broken".to_string(),
                    );
                }
            }
        }
    }
    // inversion and composition associativity
    let ring = laurent_ring();
    for k in 0..cfg.samples.min(40) {
        let ctx = SeriesCtx::new(ring.clone(), 1, cfg.order);
        let mut f = s.series_from_degree(&ctx, 1, 1);
        f = f.add(&TruncSeries::constant(&ctx, s.unit(&ring)))?;
        let inv = f.unit_invert()?;
        report.require(
            format!("unit inversion, sample {k}"),
            f.mul(&inv)? == TruncSeries::one(&ctx),
            "f * f^-1 != 1".to_string(),
        );

        let any = s.series_from_degree(&ctx, 0, 1);
        let g = s.series_from_degree(&ctx, 1, 1);
        let h = s.series_from_degree(&ctx, 1, 1);
        let lhs = any.compose(&[g.clone()])?.compose(&[h.clone()])?;
        let rhs = any.compose(&[g.compose(&[h.clone()])?])?;
        report.require(
            format!("composition associative, sample {k}"),
            lhs == rhs,
            "(f.g).h != f.(g.h)".to_string(),
        );
    }
    // taylor shift is a ring homomorphism and evaluates back at X = 0
    for k in 0..cfg.samples.min(40) {
        let f = s.ring_elem(&ring, cfg.degree, 1);
        let g = s.ring_elem(&ring, cfg.degree, 1);
        let lhs = taylor_shift(&f.mul(&g), cfg.order);
        let rhs = taylor_shift(&f, cfg.order).mul(&taylor_shift(&g, cfg.order))?;
        report.require(
            format!("taylor shift multiplicative, sample {k}"),
            lhs == rhs,
            "shift(fg) != shift(f) shift(g)".to_string(),
        );
        report.require(
            format!("taylor shift at X=0, sample {k}"),
            taylor_shift(&f, cfg.order).at_zero() == f,
            "constant term mismatch".to_string(),
        );
    }
    Ok(report)
}

/// Jacobi identity, exponential/logarithm bijectivity, operator
/// contravariance, the conjugation action, and low-order BCH consistency.
pub fn jets_group_suite(cfg: &SuiteConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new("jets-group")
        .with_seed(cfg.seed)
        .with_samples(cfg.samples);
    let mut s = Sampler::new(cfg.seed);
    let order = cfg.order.min(5).max(4);
    let per_n = cfg.samples.max(20);
    for n in [1usize, 2] {
        let ctx = SeriesCtx::rational(n, order);
        for k in 0..per_n {
            let d1 = s.derivation_lplus(&ctx, 0);
            let d2 = s.derivation_lplus(&ctx, 0);
            let d3 = s.derivation_lplus(&ctx, 0);
            let jacobi = d1
                .bracket(&d2.bracket(&d3)?)?
                .add(&d2.bracket(&d3.bracket(&d1)?)?)?
                .add(&d3.bracket(&d1.bracket(&d2)?)?)?;
            report.require(
                format!("jacobi identity (n={n}, sample {k})"),
                jacobi.is_zero(),
                format!("{jacobi:?}"),
            );

            let d = s.derivation_mlplus(&ctx, 0);
            report.require(
                format!("log(exp(d)) = d (n={n}, sample {k})"),
                aut_log(&aut_exp(&d)?)? == d,
                "round trip failed".to_string(),
            );
            let u = s.unipotent_aut(&ctx, 0);
            report.require(
                format!("exp(log(F)) = F (n={n}, sample {k})"),
                aut_exp(&aut_log(&u)?)? == u,
                "round trip failed".to_string(),
            );

            let f = s.invertible_aut(&ctx, 0);
            let g = s.invertible_aut(&ctx, 0);
            report.require(
                format!("operator contravariant (n={n}, sample {k})"),
                f.compose(&g)?.to_operator() == g.to_operator().mul(&f.to_operator()),
                "op(F.G) != op(G) op(F)".to_string(),
            );

            // Ad is an action (contravariant for substitution composition)
            // and preserves brackets
            let d = s.derivation_lplus(&ctx, 0);
            let lhs = f.compose(&g)?.conjugate_derivation(&d)?;
            let rhs = g.conjugate_derivation(&f.conjugate_derivation(&d)?)?;
            report.require(
                format!("Ad(F.G) = Ad(G) Ad(F) (n={n}, sample {k})"),
                lhs == rhs,
                "conjugation action broken".to_string(),
            );
            let lhs = f.conjugate_derivation(&d1.bracket(&d2)?)?;
            let rhs = f
                .conjugate_derivation(&d1)?
                .bracket(&f.conjugate_derivation(&d2)?)?;
            report.require(
                format!("Ad(F)[d1,d2] = [Ad(F)d1, Ad(F)d2] (n={n}, sample {k})"),
                lhs == rhs,
                "conjugation not a Lie map".to_string(),
            );

            // BCH at low order: log(exp(d1).exp(d2)) - d1 - d2 - [d2,d1]/2
            // has filtration degree >= 4
            let b1 = s.derivation_mlplus(&ctx, 0);
            let b2 = s.derivation_mlplus(&ctx, 0);
            let composed = aut_exp(&b1)?.compose(&aut_exp(&b2)?)?;
            let log = aut_log(&composed)?;
            let bch = b1.add(&b2)?.add(&b2.bracket(&b1)?.scale_rat(&Rat::new(1, 2)))?;
            let residual = log.sub(&bch)?;
            report.require(
                format!("BCH through degree 3 (n={n}, sample {k})"),
                residual.in_mk_lplus(3),
                format!("residual {residual:?}"),
            );
        }
    }
    Ok(report)
}

/// Chain rule on coefficients: `A_{i,s}(F . G)` equals the partition sum
/// for every `|s| <= 4` and both variable counts.
pub fn coproduct_suite(cfg: &SuiteConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new("coproduct")
        .with_seed(cfg.seed)
        .with_samples(cfg.samples);
    let mut s = Sampler::new(cfg.seed);
    let order = cfg.order.min(4).max(2);
    let pairs = cfg.samples.max(50);
    for n in [1usize, 2] {
        let ctx = SeriesCtx::rational(n, order);
        for k in 0..pairs {
            let f = s.invertible_aut(&ctx, 0);
            let g = s.invertible_aut(&ctx, 0);
            let composed = f.compose(&g)?;
            for sdx in indices_up_to(n, order) {
                if sdx.degree() == 0 {
                    continue;
                }
                for i in 0..n {
                    let lhs = composed.coefficient(i, &sdx)?;
                    let rhs = faa_di_bruno(i, &sdx, &f, &g)?;
                    report.require(
                        format!("A[{i},{sdx:?}] chain rule (n={n}, sample {k})"),
                        lhs == rhs,
                        format!("composition {} != partition sum {}", lhs.render(), rhs.render()),
                    );
                }
            }
        }
    }
    Ok(report)
}

/// Representation coherence: integration is contravariantly multiplicative,
/// compatible with the exponential, conjugation-covariant, and bracket
/// preserving; weights integrate to powers of the linear part.
pub fn repn_suite(cfg: &SuiteConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new("repn")
        .with_seed(cfg.seed)
        .with_samples(cfg.samples);
    let mut s = Sampler::new(cfg.seed);
    let reps: Vec<RepSpec> = vec![
        rho_family(1),
        rho_family(-2),
        sigma_family(0),
        sigma_family(2),
        weight_rep(3),
        trivial_rep(1),
    ];
    let pairs = (cfg.samples / 2).max(50);
    for rep in &reps {
        report.merge(rep.validate());
        for (ring_name, ring) in [("Q", FnRing::rationals()), ("Q[y]_y", laurent_ring())] {
            let ctx = SeriesCtx::new(ring.clone(), rep.nvars(), cfg.order.max(rep.nilpotency_order()));
            for k in 0..pairs {
                let f = s.invertible_aut(&ctx, 1);
                let g = s.invertible_aut(&ctx, 1);
                let lhs = rep.integrate(&f.compose(&g)?)?;
                let rhs = rep.integrate(&g)?.mul(&rep.integrate(&f)?);
                report.require(
                    format!(
                        "integrate(F.G) = integrate(G) integrate(F) ({}, {ring_name}, sample {k})",
                        rep.name()
                    ),
                    lhs == rhs,
                    "multiplicativity failed".to_string(),
                );

                let d = s.derivation_mlplus(&ctx, 1);
                let lhs = rep.integrate(&aut_exp(&d)?)?;
                let rhs = rep.apply(&d)?.exp_nilpotent()?;
                report.require(
                    format!(
                        "integrate(exp(d)) = exp(apply(d)) ({}, {ring_name}, sample {k})",
                        rep.name()
                    ),
                    lhs == rhs,
                    "exponential compatibility failed".to_string(),
                );

                // conjugation covariance: integrating exp(Ad(g) eta) equals
                // conjugating the integrated exponential
                let lin = s.linear_aut(&ctx);
                let eta = s.derivation_mlplus(&ctx, 1);
                let lhs = rep.integrate(&aut_exp(&lin.conjugate_derivation(&eta)?)?)?;
                let r_lin = rep.integrate(&lin)?;
                let r_lin_inv = rep.integrate(&lin.invert()?)?;
                let rhs = r_lin
                    .mul(&rep.apply(&eta)?.exp_nilpotent()?)
                    .mul(&r_lin_inv);
                report.require(
                    format!("conjugation covariance ({}, {ring_name}, sample {k})", rep.name()),
                    lhs == rhs,
                    "Ad covariance failed".to_string(),
                );

                // apply is a Lie homomorphism on L+
                let d1 = s.derivation_lplus(&ctx, 1);
                let d2 = s.derivation_lplus(&ctx, 1);
                let lhs = rep.apply(&d1.bracket(&d2)?)?;
                let a = rep.apply(&d1)?;
                let b = rep.apply(&d2)?;
                let rhs = a.mul(&b).sub(&b.mul(&a));
                report.require(
                    format!("apply preserves brackets ({}, {ring_name}, sample {k})", rep.name()),
                    lhs == rhs,
                    "bracket image failed".to_string(),
                );
            }
        }
    }
    // determinant consistency for one-dimensional weights over Q
    let ctx = SeriesCtx::rational(1, cfg.order.max(2));
    for k in [-3i64, -1, 0, 2, 5] {
        let rep = weight_rep(k);
        for j in 0..10 {
            let f = s.invertible_aut(&ctx, 0);
            let a = f.linear_part().at(0, 0).as_rat().expect("rational");
            let got = rep.integrate(&f)?.at(0, 0).as_rat().expect("rational");
            report.require(
                format!("weight({k}) integrates to a^{k} (sample {j})"),
                got == a.pow_i(k)?,
                format!("{got} != {a}^{k}"),
            );
        }
    }
    Ok(report)
}

/// The chart-level isomorphism: `phi` is a Lie map, `psi` inverts it both
/// ways, the anchor is a Lie map with virtual kernel, and the
/// differentiability elements land where they must.
pub fn iso_suite(cfg: &SuiteConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new("iso")
        .with_seed(cfg.seed)
        .with_samples(cfg.samples);
    let mut s = Sampler::new(cfg.seed);
    let per_n = (cfg.samples / 2).max(50);
    for n in [1usize, 2] {
        let vars: Vec<String> = (0..n).map(|j| format!("x{}", j + 1)).collect();
        let var_refs: Vec<&str> = vars.iter().map(String::as_str).collect();
        let ring = FnRing::poly_ring(&var_refs);
        let order = cfg.order.min(5);
        for k in 0..per_n {
            let u = s.smash_term(&ring, cfg.degree, 2);
            let v = s.smash_term(&ring, cfg.degree, 2);

            // phi is a Lie algebra homomorphism
            let lhs = phi(&u.bracket(&v)?, order)?;
            let rhs = phi(&u, order)?.bracket(&phi(&v, order)?)?;
            report.require(
                format!("phi([u,v]) = [phi u, phi v] (n={n}, sample {k})"),
                lhs == rhs,
                format!("lhs {} != rhs {}", lhs.render(), rhs.render()),
            );

            // psi . phi = id on smash terms of degree within the order
            let w = s.smash_term(&ring, order.min(cfg.degree), 2);
            report.require(
                format!("psi(phi(u)) = u (n={n}, sample {k})"),
                psi(&phi(&w, order)?) == w,
                "round trip failed".to_string(),
            );

            // phi . psi = id on jets
            let ctx = SeriesCtx::new(ring.clone(), n, order);
            let jet = JetVF::new(
                s.vector_field(&ring, cfg.degree),
                s.derivation_lplus(&ctx, 0),
            )?;
            report.require(
                format!("phi(psi(v)) = v (n={n}, sample {k})"),
                phi(&psi(&jet), order)? == jet,
                "round trip failed".to_string(),
            );

            // anchor is a Lie map, and virtual jets form an ideal killed by it
            let lhs = anchor_of_smash(&u.bracket(&v)?);
            let rhs = anchor_of_smash(&u).bracket(&anchor_of_smash(&v));
            report.require(
                format!("anchor([u,v]) = [anchor u, anchor v] (n={n}, sample {k})"),
                lhs == rhs,
                "anchor not a Lie map".to_string(),
            );
            let virt = JetVF::from_virtual(s.derivation_lplus(&ctx, 0))?;
            let full = phi(&u, order)?;
            let bracket = full.bracket(&virt)?;
            report.require(
                format!("[jet, virtual] stays virtual (n={n}, sample {k})"),
                bracket.anchor().is_zero(),
                bracket.render(),
            );
        }
        // differentiability elements: zero anchor, and the phi image equals
        // delta(f)^N times the jet of the field
        for k in 0..per_n.min(30) {
            let order = cfg.order.min(5);
            let f = RingElem::from_poly(&ring, s.poly(n, 2));
            let eta = s.vector_field(&ring, 2);
            for n_diff in 1..=3u32 {
                let e = diff_element(&f, &eta, n_diff, order)?;
                report.require(
                    format!("diff element has zero anchor (n={n}, N={n_diff}, sample {k})"),
                    e.anchor().is_zero(),
                    e.render(),
                );
                let jet_eta = phi(
                    &SmashTerm::single(RingElem::one(&ring), eta.clone()),
                    order,
                )?;
                let expected = jet_eta.mul_series(&delta(&f, order).pow(n_diff)?)?;
                report.require(
                    format!("diff element is delta^N jet (n={n}, N={n_diff}, sample {k})"),
                    e == expected,
                    format!("lhs {} != rhs {}", e.render(), expected.render()),
                );
            }
        }
    }
    Ok(report)
}

/// A random invertible Mobius transition `x = (ay + b)/(cy + d)`.
fn random_mobius(s: &mut Sampler) -> Result<Transition> {
    loop {
        let (a, b, c, d) = (s.int(-3, 3), s.int(-3, 3), s.int(-2, 2), s.int(1, 3));
        if a * d - b * c == 0 || c == 0 {
            continue;
        }
        let y_chart = Chart::affine("y", &["y"]);
        let x_chart = Chart::affine("x", &["x"]);
        let ypoly = Poly::var(1, 0);
        let xpoly = Poly::var(1, 0);
        let den_y = ypoly.scale(&Rat::from_int(c)).add(&Poly::constant(1, Rat::from_int(d)));
        let den_x = Poly::constant(1, Rat::from_int(a)).sub(&xpoly.scale(&Rat::from_int(c)));
        let overlap_y = FnRing::localized(&["y"], vec![den_y.clone()])?;
        let overlap_x = FnRing::localized(&["x"], vec![den_x.clone()])?;
        let g_num = ypoly.scale(&Rat::from_int(a)).add(&Poly::constant(1, Rat::from_int(b)));
        let h_num = xpoly.scale(&Rat::from_int(d)).sub(&Poly::constant(1, Rat::from_int(b)));
        let g = RingElem::new(overlap_y.clone(), g_num, vec![1]);
        let h = RingElem::new(overlap_x.clone(), h_num, vec![1]);
        return Transition::new(y_chart, x_chart, overlap_y, overlap_x, vec![g], vec![h]);
    }
}

/// Transition machinery: validation, cocycles, the two routes to the
/// transformation law, anchor pushforward, and charged compatibility.
pub fn geometry_suite(cfg: &SuiteConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new("geometry")
        .with_seed(cfg.seed)
        .with_samples(cfg.samples);
    let mut s = Sampler::new(cfg.seed);
    let order = cfg.order.max(3);

    let mut transitions = vec![("p1", p1_atlas().transitions[0].clone())];
    for _ in 0..cfg.samples.min(10) {
        transitions.push(("mobius", random_mobius(&mut s)?));
    }
    for (label, t) in &transitions {
        report.merge(t.validate());
        for n in 1..=order.min(6) {
            report.merge(t.jet_cocycle_check(n)?);
        }

        let to_ctx = SeriesCtx::new(t.overlap_to().clone(), 1, order);
        let from_ctx = SeriesCtx::new(t.overlap_from().clone(), 1, order);
        let phi_g = t.jet(order)?;
        for k in 1..=order.min(3) {
            // the displayed transformation law agrees with conjugation
            let d_to = JetDerivation::single(TruncSeries::var(&to_ctx, 0).pow(k)?, 0);
            let via_law = t.transform_derivation(&d_to, order)?;
            let moved = JetDerivation::new(
                d_to.components()
                    .iter()
                    .map(|c| c.map_coeffs(&from_ctx, |r| r.substitute(t.maps(), t.overlap_from())))
                    .collect::<Result<_>>()?,
            )?;
            let via_ad = phi_g.conjugate_derivation(&moved)?;
            report.require(
                format!("Ltrans = Ad(phi_G) on X^{k} ({label})"),
                via_law == via_ad,
                format!("law {via_law:?} != conjugation {via_ad:?}"),
            );
        }

        // bracket preservation through the transformation law
        for k in 0..cfg.samples.min(10) {
            let d1 = s.derivation_lplus(&to_ctx, 0);
            let d2 = s.derivation_lplus(&to_ctx, 0);
            let lhs = t.transform_derivation(&d1.bracket(&d2)?, order)?;
            let rhs = t
                .transform_derivation(&d1, order)?
                .bracket(&t.transform_derivation(&d2, order)?)?;
            report.require(
                format!("transform preserves brackets ({label}, sample {k})"),
                lhs == rhs,
                "bracket transport failed".to_string(),
            );
        }

        // anchor of the transported partial equals the classical pushforward
        let partial = t.transform_partial(0, order)?;
        let pushforward = t.inverse_maps()[0]
            .derive(0)
            .substitute(t.maps(), t.overlap_from())?;
        report.require(
            format!("anchor of transported d/dx is the pushforward ({label})"),
            partial.anchor() == &VectorField::single(pushforward, 0),
            partial.render(),
        );

        // charged compatibility for monomials
        for k in 1..order.min(4) {
            let qctx = SeriesCtx::rational(1, order);
            let g = TruncSeries::var(&qctx, 0).pow(k)?;
            report.merge(t.charged_compat_check(&g, 0, order)?);
        }
    }
    Ok(report)
}

/// Jet-module axioms, gluing identities and equivariance for the built-in
/// families on the projective line.
pub fn jet_av_suite(cfg: &SuiteConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new("jet-av")
        .with_seed(cfg.seed)
        .with_samples(cfg.samples);
    let atlas = p1_atlas();
    let t = &atlas.transitions[0];
    let order = cfg.order.max(6);
    let x_ring = atlas.chart("x").expect("x chart").ring().clone();
    let y_ring = atlas.chart("y").expect("y chart").ring().clone();

    for m in cfg.m_range() {
        for rep in [rho_family(m), sigma_family(m)] {
            // axioms in both charts
            for (chart, ring) in [("x", &x_ring), ("y", &y_ring)] {
                let module = JetModule::new(rep.clone(), ring.clone());
                let sub = av_axiom_check(&module, cfg.seed, cfg.samples.max(100), cfg.degree)?;
                report.require(
                    format!("AV axioms for J^{} in chart {chart}", rep.name()),
                    sub.passed,
                    format!("{:?}", sub.findings.first()),
                );
                report.checks += sub.checks;
            }

            // glue matrices multiply to the identity across the transition
            let glue = jet_glue_matrix(&rep, t, order)?;
            let glue_rev = jet_glue_matrix(&rep, &t.reversed(), order)?;
            let moved = glue_rev.map(|e| {
                e.substitute(t.maps(), t.overlap_from())
                    .expect("overlap substitution")
            });
            report.require(
                format!("M(t) M(t^-1) = I for {}", rep.name()),
                glue.mul(&moved).is_identity() && moved.mul(&glue).is_identity(),
                glue.mul(&moved).render(RingElem::render),
            );

            // equivariance of action and transport
            let sub = glue_equivariance_check(&rep, t, order, cfg.seed, cfg.samples.min(25), 3)?;
            report.require(
                format!("glue equivariance for {}", rep.name()),
                sub.passed,
                format!("{:?}", sub.findings.first()),
            );
            report.checks += sub.checks;
        }
    }

    // tensor and duality match Kronecker products and inverse transposes
    for (m, k) in [(cfg.m_lo, cfg.m_hi), (0, 1), (1, -1)] {
        let r1 = rho_family(m);
        let r2 = sigma_family(k);
        let tensor = r1.tensor(&r2)?;
        let lhs = jet_glue_matrix(&tensor, t, order)?;
        let rhs = jet_glue_matrix(&r1, t, order)?.kron(&jet_glue_matrix(&r2, t, order)?);
        report.require(
            format!("glue(rho_{m} (x) sigma_{k}) = kron of glues"),
            lhs == rhs,
            "tensor gluing failed".to_string(),
        );
        let dual = r1.dual()?;
        let lhs = jet_glue_matrix(&dual, t, order)?;
        let rhs = jet_glue_matrix(&r1, t, order)?
            .try_inverse()?
            .transpose();
        report.require(
            format!("glue(rho_{m}*) is the inverse transpose"),
            lhs == rhs,
            "dual gluing failed".to_string(),
        );
    }
    Ok(report)
}

/// Rudakov modules: axioms, differentiability orders and the delta-tensor
/// realization with its mutation witness.
pub fn rudakov_suite(cfg: &SuiteConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new("rudakov")
        .with_seed(cfg.seed)
        .with_samples(cfg.samples);
    let ring = FnRing::poly_ring(&["x"]);
    let p = Point::origin(&ring).expect("origin");

    let delta_module = DeltaModule::new(p.clone(), cfg.cutoff);
    let sub = av_axiom_check(&delta_module, cfg.seed, cfg.samples.min(30), cfg.degree)?;
    report.require(
        "delta module satisfies the AV axioms",
        sub.passed,
        format!("{:?}", sub.findings.first()),
    );
    let sub = differentiability_check(&delta_module, 1, cfg.seed, cfg.samples.min(20), cfg.degree)?;
    report.require(
        "delta module is a D-module (differentiable at 1)",
        sub.passed,
        format!("{:?}", sub.findings.first()),
    );

    for m in [cfg.m_lo, 0, cfg.m_hi] {
        for rep in [rho_family(m), sigma_family(m)] {
            let module = RudakovModule::new(rep.clone(), p.clone(), cfg.cutoff)?;
            let sub = av_axiom_check(&module, cfg.seed, cfg.samples.min(30), cfg.degree)?;
            report.require(
                format!("AV axioms for the Rudakov module over {}", rep.name()),
                sub.passed,
                format!("{:?}", sub.findings.first()),
            );
            report.checks += sub.checks;

            let n_rep = rep.nilpotency_order();
            let sub =
                differentiability_check(&module, 1, cfg.seed, cfg.samples.min(20), cfg.degree)?;
            report.require(
                format!("Rudakov over {} is not a D-module (fails at 1)", rep.name()),
                !sub.passed,
                "unexpectedly differentiable at order 1".to_string(),
            );
            let (min_n, sub) = minimal_diff_order(
                &module,
                n_rep,
                n_rep + 2,
                cfg.seed,
                cfg.samples.min(20),
                cfg.degree,
            )?;
            report.require(
                format!(
                    "Rudakov over {} differentiable within [{}, {}]",
                    rep.name(),
                    n_rep,
                    n_rep + 2
                ),
                min_n.is_some(),
                format!("{:?}", sub.findings.first()),
            );
            if let Some(n) = min_n {
                report.note(format!(
                    "minimal differentiability order for {} is {n} (N_rep = {n_rep})",
                    rep.name()
                ));
            }
        }
    }

    // realization through delta functions, with and without the twist
    for rep in [weight_rep(4), rho_family(1), sigma_family(-1)] {
        let sub = rudakov_realization_check(
            &rep,
            &p,
            cfg.cutoff,
            cfg.seed,
            cfg.samples.max(30),
            cfg.degree,
            true,
        )?;
        report.require(
            format!("realization matches for {}", rep.name()),
            sub.passed,
            format!("{:?}", sub.findings.first()),
        );
        report.checks += sub.checks;
        let sub = rudakov_realization_check(
            &rep,
            &p,
            cfg.cutoff,
            cfg.seed,
            cfg.samples.max(30),
            cfg.degree,
            false,
        )?;
        report.require(
            format!("untwisted realization fails for {}", rep.name()),
            !sub.passed,
            "mutation unexpectedly passed".to_string(),
        );
    }
    Ok(report)
}

/// Reproduce the closed-form rank-2 families on the projective line.
pub fn p1_suite(cfg: &SuiteConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new("p1").with_seed(cfg.seed);
    let atlas = p1_atlas();
    let t = &atlas.transitions[0];
    let order = cfg.order.max(6);
    let ring = t.overlap_from().clone();
    let y = RingElem::var(&ring, 0);
    let ypow = |k: i64| y.pow_i(k).expect("y is a unit");
    report.merge(atlas.validate());

    // transition jet expansion: X -> y^-2 Y - y^-3 Y^2 + y^-4 Y^3 - ..
    let jet = t.jet(order)?;
    for k in 1..=order {
        let sign = if k % 2 == 1 { Rat::one() } else { -Rat::one() };
        let expected = ypow(-(k as i64 + 1)).scale(&sign);
        report.check(
            format!("phi_G coefficient of Y^{k}"),
            &expected,
            &jet.images()[0].coeff(&MultiIndex::new(vec![k])),
            RingElem::render,
        );
    }

    // the exponential example: exp(a X^2 d/dX) X = X/(1 - aX)
    let qctx = SeriesCtx::rational(1, 10.max(order));
    for alpha in [Rat::one(), Rat::from_int(-2), Rat::new(3, 5)] {
        let d = JetDerivation::single(
            TruncSeries::var(&qctx, 0).pow(2)?.scale_rat(&alpha),
            0,
        );
        let exp = aut_exp(&d)?;
        let geometric = TruncSeries::one(&qctx)
            .sub(&TruncSeries::var(&qctx, 0).scale_rat(&alpha))?
            .unit_invert()?
            .mul(&TruncSeries::var(&qctx, 0))?;
        report.check(
            format!("exp({alpha} X^2 d/dX) X = X/(1 - {alpha} X)"),
            &geometric,
            &exp.images()[0],
            |s| s.render(&["X".into()]),
        );
    }

    // Ltrans displayed values
    let to_ctx = SeriesCtx::new(t.overlap_to().clone(), 1, order);
    let from_ctx = SeriesCtx::new(ring.clone(), 1, order);
    let yvar = TruncSeries::var(&from_ctx, 0);
    let d1 = t.transform_derivation(
        &JetDerivation::single(TruncSeries::var(&to_ctx, 0), 0),
        order,
    )?;
    let expected1 = JetDerivation::single(
        yvar.add(&yvar.pow(2)?.scale(&ypow(-1)))?,
        0,
    );
    report.check(
        "X d/dX transports to Y d/dY + y^-1 Y^2 d/dY",
        &expected1,
        &d1,
        |d| format!("{d:?}"),
    );
    let d2 = t.transform_derivation(
        &JetDerivation::single(TruncSeries::var(&to_ctx, 0).pow(2)?, 0),
        order,
    )?;
    let expected2 = JetDerivation::single(yvar.pow(2)?.scale(&ypow(-2)), 0);
    report.check(
        "X^2 d/dX transports to y^-2 Y^2 d/dY",
        &expected2,
        &d2,
        |d| format!("{d:?}"),
    );
    let d3 = t.transform_derivation(
        &JetDerivation::single(TruncSeries::var(&to_ctx, 0).pow(3)?, 0),
        order,
    )?;
    report.check(
        "X^3 d/dX leading term is y^-4 Y^3 d/dY",
        &ypow(-4),
        &d3.component(0).coeff(&MultiIndex::new(vec![3])),
        RingElem::render,
    );

    // dtrans: d/dx = y^2 d/dy + 2y Y d/dY + Y^2 d/dY
    let partial = t.transform_partial(0, order)?;
    report.check(
        "d/dx anchor is y^2 d/dy",
        &VectorField::single(ypow(2), 0),
        partial.anchor(),
        VectorField::render,
    );
    let expected_virt = yvar
        .scale(&ypow(1).scale(&Rat::from_int(2)))
        .add(&yvar.pow(2)?)?;
    report.check(
        "d/dx virtual part is 2y Y d/dY + Y^2 d/dY",
        &expected_virt,
        partial.virtual_part().component(0),
        |s| s.render(&["Y".into()]),
    );

    // both families, every m in range
    let mut s = Sampler::new(cfg.seed);
    for m in cfg.m_range() {
        let rho = rho_family(m);
        let glue = jet_glue_matrix(&rho, t, order)?;
        let scale = ypow(-2 * m);
        let expected = Matrix::from_rows(vec![
            vec![scale.mul(&ypow(-2)), scale.mul(&ypow(-1)).neg()],
            vec![RingElem::zero(&ring), scale.clone()],
        ]);
        report.check(
            format!("rho_{m}(phi_G) = y^-2m [[y^-2, -y^-1], [0, 1]]"),
            &expected,
            &glue,
            |mx| mx.render(RingElem::render),
        );
        // section transitions read off the columns
        report.require(
            format!("e1^x = y^(-2m-2) e1^y for rho_{m}"),
            glue.at(0, 0) == &ypow(-2 * m - 2) && glue.at(1, 0).is_zero(),
            glue.render(RingElem::render),
        );
        report.require(
            format!("e2^x = y^(-2m) e2^y - y^(-2m-1) e1^y for rho_{m}"),
            glue.at(1, 1) == &ypow(-2 * m) && glue.at(0, 1) == &ypow(-2 * m - 1).neg(),
            glue.render(RingElem::render),
        );

        let sigma = sigma_family(m);
        let glue = jet_glue_matrix(&sigma, t, order)?;
        let expected = Matrix::from_rows(vec![
            vec![ypow(-2 * m - 4), RingElem::zero(&ring)],
            vec![RingElem::zero(&ring), ypow(-2 * m)],
        ]);
        report.check(
            format!("sigma_{m}(phi_G) = diag(y^(-2m-4), y^(-2m))"),
            &expected,
            &glue,
            |mx| mx.render(RingElem::render),
        );

        // glue cocycle for both families at this m
        for rep in [rho.clone(), sigma.clone()] {
            let glue = jet_glue_matrix(&rep, t, order)?;
            let glue_rev = jet_glue_matrix(&rep, &t.reversed(), order)?;
            let moved = glue_rev.map(|e| {
                e.substitute(t.maps(), t.overlap_from())
                    .expect("overlap substitution")
            });
            report.require(
                format!("glue cocycle for {}", rep.name()),
                glue.mul(&moved).is_identity(),
                "product is not the identity".to_string(),
            );
        }

        // the closed form on a generic group element: rho_m(aX + bX^2)
        // = a^m [[a, b/a], [0, 1]] and sigma_m(aX + bX^2 + cX^3)
        // = a^m [[a^2, c/a - b^2/a^2], [0, 1]]
        let ctx = SeriesCtx::rational(1, order.max(3));
        for _ in 0..5 {
            let a = s.nonzero_coeff();
            let b = s.coeff();
            let c = s.coeff();
            let img = TruncSeries::var(&ctx, 0)
                .scale_rat(&a)
                .add(&TruncSeries::var(&ctx, 0).pow(2)?.scale_rat(&b))?
                .add(&TruncSeries::var(&ctx, 0).pow(3)?.scale_rat(&c))?;
            let f = JetAutomorphism::from_images(vec![img])?;
            let am = a.pow_i(m)?;
            let got = rho.integrate(&f)?.map(|e| e.as_rat().expect("rational"));
            let expected = Matrix::from_rows(vec![
                vec![&am * &a, &am * &(b.clone() / a.clone())],
                vec![Rat::zero(), am.clone()],
            ]);
            report.check(
                format!("rho_{m}(aX + bX^2 + ..) closed form"),
                &expected,
                &got,
                |mx| mx.render(Rat::to_string),
            );
            let got = sigma.integrate(&f)?.map(|e| e.as_rat().expect("rational"));
            let top = c.clone() / a.clone()
                - (b.clone() * b.clone()) / (a.clone() * a.clone());
            let expected = Matrix::from_rows(vec![
                vec![&am * &(a.clone() * a.clone()), &am * &top],
                vec![Rat::zero(), am.clone()],
            ]);
            report.check(
                format!("sigma_{m}(aX + bX^2 + cX^3) closed form"),
                &expected,
                &got,
                |mx| mx.render(Rat::to_string),
            );
        }

        // displayed AV-action formulas in the x-chart
        let x_ring = atlas.chart("x").expect("x chart").ring().clone();
        let module = JetModule::new(rho.clone(), x_ring.clone());
        for _ in 0..5 {
            let f = RingElem::from_poly(&x_ring, s.poly(1, cfg.degree));
            let g = RingElem::from_poly(&x_ring, s.poly(1, cfg.degree));
            let field = VectorField::single(f.clone(), 0);
            let out = module.action(&field, &[g.clone(), RingElem::zero(&x_ring)])?;
            let e1_expected = f
                .mul(&g.derive(0))
                .add(&g.mul(&f.derive(0)).scale(&Rat::from_int(m + 1)));
            report.require(
                format!("rho_{m}: f d/dx . g e1 = (f g' + (m+1) g f') e1"),
                out[0] == e1_expected && out[1].is_zero(),
                format!("got ({}, {})", out[0].render(), out[1].render()),
            );
            let out = module.action(&field, &[RingElem::zero(&x_ring), g.clone()])?;
            let e2_expected = f
                .mul(&g.derive(0))
                .add(&g.mul(&f.derive(0)).scale(&Rat::from_int(m)));
            let e1_expected = g
                .mul(&f.derive(0).derive(0))
                .scale(&Rat::new(1, 2));
            report.require(
                format!("rho_{m}: f d/dx . g e2 = (f g' + m g f') e2 + (1/2) g f'' e1"),
                out[1] == e2_expected && out[0] == e1_expected,
                format!("got ({}, {})", out[0].render(), out[1].render()),
            );

            let module_sigma = JetModule::new(sigma.clone(), x_ring.clone());
            let out = module_sigma.action(&field, &[RingElem::zero(&x_ring), g.clone()])?;
            let e2_expected = f
                .mul(&g.derive(0))
                .add(&g.mul(&f.derive(0)).scale(&Rat::from_int(m)));
            let e1_expected = g
                .mul(&f.derive(0).derive(0).derive(0))
                .scale(&Rat::new(1, 6));
            report.require(
                format!("sigma_{m}: f d/dx . g e2 = (f g' + m g f') e2 + (1/6) g f''' e1"),
                out[1] == e2_expected && out[0] == e1_expected,
                format!("got ({}, {})", out[0].render(), out[1].render()),
            );
        }
    }
    Ok(report)
}
