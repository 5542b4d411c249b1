//! Charts, rational transitions and the induced jet transformations.
//!
//! A transition between charts carries mutually inverse rational maps
//! `x = G(y)`, `y = H(x)` over explicit overlap rings. The induced jet
//! automorphism `X_i -> G_i(y + Y) - G_i(y)` transports virtual jets and
//! differential operators between the charts; everything here is exact.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jets::{JetAutomorphism, JetDerivation};
use crate::matrix::{Matrix, RMatrix};
use crate::poly::Poly;
use crate::rat::Rat;
use crate::report::CheckReport;
use crate::ring::{FnRing, RingElem};
use crate::series::{taylor_shift, SeriesCtx, TruncSeries};
use crate::smash::{JetVF, VectorField};

/// An affine chart: a name and its localized coordinate ring.
#[derive(Clone)]
pub struct Chart {
    name: String,
    ring: Arc<FnRing>,
}

impl Chart {
    pub fn new(name: impl Into<String>, ring: Arc<FnRing>) -> Self {
        Chart {
            name: name.into(),
            ring,
        }
    }

    /// Chart with polynomial coordinate ring `Q[coords]`.
    pub fn affine(name: impl Into<String>, coords: &[&str]) -> Self {
        Chart::new(name, FnRing::poly_ring(coords))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> &Arc<FnRing> {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart({}, {:?})", self.name, self.ring)
    }
}

/// A rational point of a chart: all chart denominators are nonzero there.
#[derive(Clone, Debug)]
pub struct Point {
    ring: Arc<FnRing>,
    coords: Vec<Rat>,
}

impl Point {
    pub fn new(chart_ring: &Arc<FnRing>, coords: Vec<Rat>) -> Result<Self> {
        if coords.len() != chart_ring.nvars() {
            return Err(Error::MixedContext("point arity".into()));
        }
        for d in chart_ring.denominators() {
            if d.eval(&coords).is_zero() {
                return Err(Error::DenominatorVanishes(
                    d.render(chart_ring.var_names()),
                ));
            }
        }
        Ok(Point {
            ring: chart_ring.clone(),
            coords,
        })
    }

    pub fn origin(chart_ring: &Arc<FnRing>) -> Result<Self> {
        Point::new(chart_ring, vec![Rat::zero(); chart_ring.nvars()])
    }

    pub fn ring(&self) -> &Arc<FnRing> {
        &self.ring
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }
}

/// A coordinate change between two charts, with both directions explicit.
///
/// `maps` expresses the `to` coordinates in the `from` coordinates over
/// `overlap_from`; `inverse_maps` goes the other way over `overlap_to`.
#[derive(Clone)]
pub struct Transition {
    from: Chart,
    to: Chart,
    overlap_from: Arc<FnRing>,
    overlap_to: Arc<FnRing>,
    maps: Vec<RingElem>,
    inverse_maps: Vec<RingElem>,
}

impl Transition {
    pub fn new(
        from: Chart,
        to: Chart,
        overlap_from: Arc<FnRing>,
        overlap_to: Arc<FnRing>,
        maps: Vec<RingElem>,
        inverse_maps: Vec<RingElem>,
    ) -> Result<Self> {
        let n = from.nvars();
        if to.nvars() != n || maps.len() != n || inverse_maps.len() != n {
            return Err(Error::MixedContext("transition arity".into()));
        }
        if overlap_from.nvars() != n || overlap_to.nvars() != n {
            return Err(Error::MixedContext("overlap ring arity".into()));
        }
        for g in &maps {
            if !FnRing::same_ring(g.ring(), &overlap_from) {
                return Err(Error::MixedContext(
                    "transition maps must live over the from-side overlap ring".into(),
                ));
            }
        }
        for h in &inverse_maps {
            if !FnRing::same_ring(h.ring(), &overlap_to) {
                return Err(Error::MixedContext(
                    "inverse maps must live over the to-side overlap ring".into(),
                ));
            }
        }
        Ok(Transition {
            from,
            to,
            overlap_from,
            overlap_to,
            maps,
            inverse_maps,
        })
    }

    pub fn from_chart(&self) -> &Chart {
        &self.from
    }

    pub fn to_chart(&self) -> &Chart {
        &self.to
    }

    pub fn overlap_from(&self) -> &Arc<FnRing> {
        &self.overlap_from
    }

    pub fn overlap_to(&self) -> &Arc<FnRing> {
        &self.overlap_to
    }

    pub fn maps(&self) -> &[RingElem] {
        &self.maps
    }

    pub fn inverse_maps(&self) -> &[RingElem] {
        &self.inverse_maps
    }

    pub fn nvars(&self) -> usize {
        self.from.nvars()
    }

    /// The same transition traversed the other way.
    pub fn reversed(&self) -> Transition {
        Transition {
            from: self.to.clone(),
            to: self.from.clone(),
            overlap_from: self.overlap_to.clone(),
            overlap_to: self.overlap_from.clone(),
            maps: self.inverse_maps.clone(),
            inverse_maps: self.maps.clone(),
        }
    }

    /// The identity transition of a chart with itself.
    pub fn identity(chart: &Chart) -> Transition {
        let vars: Vec<RingElem> = (0..chart.nvars())
            .map(|j| RingElem::var(chart.ring(), j))
            .collect();
        Transition {
            from: chart.clone(),
            to: chart.clone(),
            overlap_from: chart.ring().clone(),
            overlap_to: chart.ring().clone(),
            maps: vars.clone(),
            inverse_maps: vars,
        }
    }

    /// Verify `H(G(y)) = y`, `G(H(x)) = x` and the jacobian identity
    /// exactly; failures become findings.
    pub fn validate(&self) -> CheckReport {
        let mut report = CheckReport::new(format!(
            "transition_validate({} -> {})",
            self.from.name, self.to.name
        ));
        let n = self.nvars();
        for j in 0..n {
            match self.inverse_maps[j].substitute(&self.maps, &self.overlap_from) {
                Ok(hg) => report.check(
                    format!("H_{j}(G(y)) = y_{j}"),
                    &RingElem::var(&self.overlap_from, j),
                    &hg,
                    RingElem::render,
                ),
                Err(e) => report.require(format!("H_{j}(G(y)) well-defined"), false, e.to_string()),
            }
            match self.maps[j].substitute(&self.inverse_maps, &self.overlap_to) {
                Ok(gh) => report.check(
                    format!("G_{j}(H(x)) = x_{j}"),
                    &RingElem::var(&self.overlap_to, j),
                    &gh,
                    RingElem::render,
                ),
                Err(e) => report.require(format!("G_{j}(H(x)) well-defined"), false, e.to_string()),
            }
        }
        match self.jacobian_at_maps() {
            Ok(jac_h) => {
                let jac_g = Matrix::from_fn(n, n, |i, l| self.maps[i].derive(l));
                let prod = jac_h.mul(&jac_g);
                report.check(
                    "dH/dx(G(y)) * dG/dy = I",
                    &Matrix::identity(n, &RingElem::zero(&self.overlap_from)),
                    &prod,
                    |m: &RMatrix| m.render(RingElem::render),
                );
            }
            Err(e) => report.require("jacobian of H at G defined", false, e.to_string()),
        }
        report
    }

    /// `(dH_j/dx_i)(G(y))` as a matrix over the from-side overlap ring,
    /// indexed `[j][i]`.
    fn jacobian_at_maps(&self) -> Result<RMatrix> {
        let n = self.nvars();
        let mut rows = Vec::with_capacity(n);
        for j in 0..n {
            let mut row = Vec::with_capacity(n);
            for i in 0..n {
                row.push(
                    self.inverse_maps[j]
                        .derive(i)
                        .substitute(&self.maps, &self.overlap_from)?,
                );
            }
            rows.push(row);
        }
        Ok(Matrix::from_rows(rows))
    }

    /// The jet automorphism `phi_G`: `X_i -> G_i(y + Y) - G_i(y)` over the
    /// from-side overlap ring.
    pub fn jet(&self, order: u32) -> Result<JetAutomorphism> {
        let ctx = SeriesCtx::new(self.overlap_from.clone(), self.nvars(), order);
        let images = self
            .maps
            .iter()
            .map(|g| {
                let jet = taylor_shift(g, order);
                jet.sub(&TruncSeries::constant(&ctx, g.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        JetAutomorphism::from_images(images)
    }

    /// Transport an element of `L+` written in the to-chart jet variables
    /// to the from-chart, by the transformation law
    /// `g(X) d/dX_p -> g(G(y+Y) - G(y)) dH_q/dx_p(G(y+Y)) d/dY_q`.
    ///
    /// This route is independent of [`JetAutomorphism::conjugate_derivation`]
    /// and is tested against it.
    pub fn transform_derivation(&self, d: &JetDerivation, order: u32) -> Result<JetDerivation> {
        if !d.is_in_lplus() {
            return Err(Error::NotInLplus(0));
        }
        let n = self.nvars();
        let ctx = SeriesCtx::new(self.overlap_from.clone(), n, order);
        let phi_g = self.jet(order)?;
        // dH_q/dx_p at G(y + Y): substitute, then Taylor expand
        let jac_h = self.jacobian_at_maps()?;
        let mut out = JetDerivation::zero(&ctx);
        for p in 0..n {
            let comp = d.component(p);
            if comp.is_zero() {
                continue;
            }
            // coefficients moved to the overlap, then X composed with phi_G
            let moved = comp.map_coeffs(&ctx, |c| c.substitute(&self.maps, &self.overlap_from))?;
            let composed = moved.compose(phi_g.images())?;
            for q in 0..n {
                let series_jac = taylor_shift(jac_h.at(q, p), order);
                let term = composed.mul(&series_jac)?;
                out = out.add(&JetDerivation::single(term, q))?;
            }
        }
        Ok(out)
    }

    /// Transport of the coordinate differential operator `d/dx_i`:
    /// anchor `sum_j dH_j/dx_i(G(y)) d/dy_j` plus the virtual correction
    /// `(dH_j/dx_i(G(y+Y)) - dH_j/dx_i(G(y))) d/dY_j`.
    pub fn transform_partial(&self, i: usize, order: u32) -> Result<JetVF> {
        let n = self.nvars();
        let ctx = SeriesCtx::new(self.overlap_from.clone(), n, order);
        let mut anchor = VectorField::zero(&self.overlap_from);
        let mut virt = JetDerivation::zero(&ctx);
        for j in 0..n {
            let h_ji = self.inverse_maps[j]
                .derive(i)
                .substitute(&self.maps, &self.overlap_from)?;
            let jet = taylor_shift(&h_ji, order);
            let delta = jet.sub(&TruncSeries::constant(&ctx, h_ji.clone()))?;
            anchor = anchor.add(&VectorField::single(h_ji, j));
            virt = virt.add(&JetDerivation::single(delta, j))?;
        }
        JetVF::new(anchor, virt)
    }

    /// Lemma-style compatibility check: the transported `d/dx_i` commutes
    /// with the transported virtual jet `g(X) d/dX_j` for every `i`.
    pub fn charged_compat_check(
        &self,
        g: &TruncSeries,
        j: usize,
        order: u32,
    ) -> Result<CheckReport> {
        let mut report = CheckReport::new(format!(
            "charged_compat({} -> {}, direction {j})",
            self.from.name, self.to.name
        ));
        if !g.has_zero_constant_term() {
            return Err(Error::NonzeroConstantTerm(0));
        }
        // embed g into the to-side overlap ring if needed
        let to_ctx = SeriesCtx::new(self.overlap_to.clone(), self.nvars(), order);
        let g_embedded = if FnRing::same_ring(g.ring(), &self.overlap_to) {
            g.clone()
        } else {
            g.map_coeffs(&to_ctx, |c| {
                c.as_rat()
                    .map(|r| RingElem::constant(&self.overlap_to, r))
                    .ok_or_else(|| Error::MixedContext("series ring".into()))
            })?
        };
        let transported = self.transform_derivation(&JetDerivation::single(g_embedded, j), order)?;
        let virtual_jet = JetVF::from_virtual(transported)?;
        for i in 0..self.nvars() {
            let partial = self.transform_partial(i, order)?;
            let commutator = partial.bracket(&virtual_jet)?;
            report.require(
                format!("[d/dx_{i}, g d/dX_{j}] transported commutator vanishes"),
                commutator.is_zero(),
                commutator.render(),
            );
        }
        Ok(report)
    }

    /// Pairwise cocycle: composing the jet of the transition with the
    /// transported jet of its reverse gives the identity automorphism.
    pub fn jet_cocycle_check(&self, order: u32) -> Result<CheckReport> {
        let mut report = CheckReport::new(format!(
            "jet_cocycle({} -> {})",
            self.from.name, self.to.name
        ));
        let phi_g = self.jet(order)?;
        let rev = self.reversed();
        let phi_h = rev.jet(order)?;
        let ctx = SeriesCtx::new(self.overlap_from.clone(), self.nvars(), order);
        let phi_h_moved = JetAutomorphism::from_images(
            phi_h
                .images()
                .iter()
                .map(|im| {
                    im.map_coeffs(&ctx, |c| c.substitute(&self.maps, &self.overlap_from))
                })
                .collect::<Result<Vec<_>>>()?,
        )?;
        let composed = phi_g.compose(&phi_h_moved)?;
        report.require(
            "phi_G . phi_H = id",
            composed.is_identity(),
            composed.render(&TruncSeries::default_names(self.nvars(), 'Y')),
        );
        let composed_other = phi_h_moved.compose(&phi_g)?;
        report.require(
            "phi_H . phi_G = id",
            composed_other.is_identity(),
            composed_other.render(&TruncSeries::default_names(self.nvars(), 'Y')),
        );
        Ok(report)
    }
}

impl fmt::Debug for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let renders: Vec<String> = self.maps.iter().map(RingElem::render).collect();
        write!(
            f,
            "Transition({} -> {}: {})",
            self.from.name,
            self.to.name,
            renders.join(", ")
        )
    }
}

/// A set of charts with pairwise transitions.
#[derive(Clone, Debug)]
pub struct Atlas {
    pub name: String,
    pub charts: Vec<Chart>,
    pub transitions: Vec<Transition>,
}

impl Atlas {
    pub fn chart(&self, name: &str) -> Option<&Chart> {
        self.charts.iter().find(|c| c.name() == name)
    }

    pub fn transition(&self, from: &str, to: &str) -> Option<&Transition> {
        self.transitions
            .iter()
            .find(|t| t.from_chart().name() == from && t.to_chart().name() == to)
    }

    /// Validate every transition, and the ring-level triple cocycle for
    /// every chart triple whose three pairwise transitions are all present.
    pub fn validate(&self) -> CheckReport {
        let mut report = CheckReport::new(format!("atlas_validate({})", self.name));
        for t in &self.transitions {
            report.merge(t.validate());
        }
        for t1 in &self.transitions {
            for t2 in &self.transitions {
                if t1.to_chart().name() != t2.from_chart().name()
                    || t1.from_chart().name() == t2.to_chart().name()
                {
                    continue;
                }
                let Some(direct) =
                    self.transition(t1.from_chart().name(), t2.to_chart().name())
                else {
                    continue;
                };
                // t2 maps expressed in t1.from coordinates
                for (j, m) in t2.maps().iter().enumerate() {
                    match m.substitute(t1.maps(), t1.overlap_from()) {
                        Ok(composed) => report.check(
                            format!(
                                "triple cocycle {} -> {} -> {}, coordinate {j}",
                                t1.from_chart().name(),
                                t1.to_chart().name(),
                                t2.to_chart().name()
                            ),
                            &direct.maps()[j],
                            &composed,
                            RingElem::render,
                        ),
                        Err(e) => report.note(format!(
                            "triple {} -> {} -> {} not checkable over this overlap: {e}",
                            t1.from_chart().name(),
                            t1.to_chart().name(),
                            t2.to_chart().name()
                        )),
                    }
                }
            }
        }
        report
    }
}

/// The projective line with charts `x` and `y` glued by `x = -1/y`.
pub fn p1_atlas() -> Atlas {
    let x_chart = Chart::affine("x", &["x"]);
    let y_chart = Chart::affine("y", &["y"]);
    let overlap_y = FnRing::localized(&["y"], vec![Poly::var(1, 0)]).expect("y is nonzero");
    let overlap_x = FnRing::localized(&["x"], vec![Poly::var(1, 0)]).expect("x is nonzero");
    let g = RingElem::new(overlap_y.clone(), Poly::one(1).neg(), vec![1]); // -1/y
    let h = RingElem::new(overlap_x.clone(), Poly::one(1).neg(), vec![1]); // -1/x
    let t = Transition::new(
        y_chart.clone(),
        x_chart.clone(),
        overlap_y,
        overlap_x,
        vec![g],
        vec![h],
    )
    .expect("p1 transition is well-formed");
    let t_rev = t.reversed();
    Atlas {
        name: "p1".into(),
        charts: vec![x_chart, y_chart],
        transitions: vec![t, t_rev],
    }
}
