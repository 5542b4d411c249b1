//! AV-module structures and their verification.
//!
//! Four concrete module families live here: jet modules over a chart,
//! Rudakov modules supported at a point, the delta-function D-module, and
//! the tensor realization `F_P (x) J^(W (x) K_tr)` used to cross-check the
//! Rudakov construction. The checkers exercise the Leibniz and bracket
//! axioms, glue equivariance, differentiability orders, and the agreement
//! of the two point-module constructions, all exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::idx::{indices_up_to, MultiIndex};
use crate::jets::JetDerivation;
use crate::matrix::{QMatrix, RMatrix};
use crate::poly::render_monomial;
use crate::rat::Rat;
use crate::report::CheckReport;
use crate::repn::{k_tr, RepSpec};
use crate::ring::{FnRing, RingElem};
use crate::sample::Sampler;
use crate::series::{taylor_shift, SeriesCtx, TruncSeries};
use crate::smash::{delta, VectorField};

/// Truncate a vector field at a point where it vanishes: the image of
/// `f d/dx_i` in `L+ / m^N L+` with rational coefficients.
pub fn localize_at_point(
    field: &VectorField,
    p: &crate::geometry::Point,
    order: u32,
) -> Result<JetDerivation> {
    let n = field.ring().nvars();
    let ctx = SeriesCtx::rational(n, order);
    let mut components = Vec::with_capacity(n);
    for f in field.components() {
        let jet = taylor_shift(f, order);
        let mut series = TruncSeries::zero(&ctx);
        for (idx, c) in jet.coeffs() {
            let value = c.eval(p.coords())?;
            if idx.is_zero() {
                if !value.is_zero() {
                    return Err(Error::NotVanishingAtP(f.render()));
                }
                continue;
            }
            series = series.add(&TruncSeries::monomial(
                &ctx,
                idx.clone(),
                RingElem::constant(&ctx.ring, value),
            ))?;
        }
        components.push(series);
    }
    JetDerivation::new(components)
}

/// A module with compatible actions of functions and vector fields over a
/// chart ring; the interface the generic checkers run against.
pub trait AvModule {
    type Elt: Clone + PartialEq;

    fn ring(&self) -> &Arc<FnRing>;
    fn zero_elt(&self) -> Self::Elt;
    /// A canonical nonzero element, used as a deterministic witness.
    fn one_elt(&self) -> Self::Elt;
    fn add(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn neg(&self, a: &Self::Elt) -> Self::Elt;
    fn is_zero(&self, a: &Self::Elt) -> bool;
    fn act_fn(&self, f: &RingElem, m: &Self::Elt) -> Result<Self::Elt>;
    fn act_field(&self, v: &VectorField, m: &Self::Elt) -> Result<Self::Elt>;
    fn sample(&self, s: &mut Sampler) -> Self::Elt;
    fn render(&self, a: &Self::Elt) -> String;

    fn sub(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        self.add(a, &self.neg(b))
    }
}

// ---------------------------------------------------------------------------
// jet modules

/// The jet module `J^W` trivialized over a chart: elements are coefficient
/// vectors over the chart ring.
#[derive(Clone)]
pub struct JetModule {
    rep: RepSpec,
    ring: Arc<FnRing>,
    /// Virtual jets are cut at this degree; the honest module uses the
    /// representation's nilpotency order. Lowering it below that corrupts
    /// the action and must break the bracket axiom.
    virtual_cut: u32,
}

impl JetModule {
    pub fn new(rep: RepSpec, ring: Arc<FnRing>) -> Self {
        let virtual_cut = rep.nilpotency_order();
        JetModule {
            rep,
            ring,
            virtual_cut,
        }
    }

    /// Mutant with the virtual action truncated at degree `cut`.
    pub fn corrupted(rep: RepSpec, ring: Arc<FnRing>, cut: u32) -> Self {
        JetModule {
            rep,
            ring,
            virtual_cut: cut,
        }
    }

    pub fn rep(&self) -> &RepSpec {
        &self.rep
    }

    /// Action of `sum_i f_i d/dx_i` on a section: base derivative plus the
    /// fiberwise action of the virtual jet of the field.
    pub fn action(&self, v: &VectorField, coeffs: &[RingElem]) -> Result<Vec<RingElem>> {
        if coeffs.len() != self.rep.dim() {
            return Err(Error::MixedContext("section length".into()));
        }
        let order = self.virtual_cut;
        let mut virt = JetDerivation::zero(&SeriesCtx::new(
            self.ring.clone(),
            self.ring.nvars(),
            order,
        ));
        let mut out = vec![RingElem::zero(&self.ring); coeffs.len()];
        for (i, f) in v.components().iter().enumerate() {
            for (k, g) in coeffs.iter().enumerate() {
                out[k] = out[k].add(&f.mul(&g.derive(i)));
            }
            virt = virt.add(&JetDerivation::single(delta(f, order), i))?;
        }
        let m = self.rep.apply(&virt)?;
        let virt_part = m.mul_vec(coeffs);
        Ok(out
            .into_iter()
            .zip(virt_part)
            .map(|(a, b)| a.add(&b))
            .collect())
    }
}

impl AvModule for JetModule {
    type Elt = Vec<RingElem>;

    fn ring(&self) -> &Arc<FnRing> {
        &self.ring
    }

    fn zero_elt(&self) -> Self::Elt {
        vec![RingElem::zero(&self.ring); self.rep.dim()]
    }

    fn one_elt(&self) -> Self::Elt {
        vec![RingElem::one(&self.ring); self.rep.dim()]
    }

    fn add(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
    }

    fn neg(&self, a: &Self::Elt) -> Self::Elt {
        a.iter().map(RingElem::neg).collect()
    }

    fn is_zero(&self, a: &Self::Elt) -> bool {
        a.iter().all(RingElem::is_zero)
    }

    fn act_fn(&self, f: &RingElem, m: &Self::Elt) -> Result<Self::Elt> {
        Ok(m.iter().map(|c| c.mul(f)).collect())
    }

    fn act_field(&self, v: &VectorField, m: &Self::Elt) -> Result<Self::Elt> {
        self.action(v, m)
    }

    fn sample(&self, s: &mut Sampler) -> Self::Elt {
        (0..self.rep.dim())
            .map(|_| s.ring_elem(&self.ring, 3, 1))
            .collect()
    }

    fn render(&self, a: &Self::Elt) -> String {
        let cells: Vec<String> = a.iter().map(RingElem::render).collect();
        format!("({})", cells.join(", "))
    }
}

/// The gluing matrix of `J^W` along a transition: the representation
/// integrated over the transition jet, a change of basis for sections.
pub fn jet_glue_matrix(
    rep: &RepSpec,
    t: &crate::geometry::Transition,
    order: u32,
) -> Result<RMatrix> {
    if order < rep.nilpotency_order() {
        return Err(Error::OrderTooSmall {
            needed: rep.nilpotency_order(),
            got: order,
        });
    }
    rep.integrate(&t.jet(order)?)
}

// ---------------------------------------------------------------------------
// point-supported modules

/// Element of a point-supported module: finitely many terms
/// `d^a (x) vector`, the vector of length `dim`.
#[derive(Clone, PartialEq)]
pub struct DerivElt {
    dim: usize,
    terms: BTreeMap<MultiIndex, Vec<Rat>>,
}

impl DerivElt {
    pub fn zero(dim: usize) -> Self {
        DerivElt {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(key: MultiIndex, v: Vec<Rat>) -> Self {
        let mut e = DerivElt::zero(v.len());
        e.add_term(key, v);
        e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Vec<Rat>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: MultiIndex, v: Vec<Rat>) {
        if v.iter().all(Rat::is_zero) {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                for (e, x) in existing.iter_mut().zip(&v) {
                    *e += x.clone();
                }
                if existing.iter().all(Rat::is_zero) {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, v);
            }
        }
    }

    pub fn add(&self, other: &DerivElt) -> DerivElt {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn neg(&self) -> DerivElt {
        DerivElt {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().map(|x| -x).collect()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &DerivElt) -> DerivElt {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rat) -> DerivElt {
        if k.is_zero() {
            return DerivElt::zero(self.dim);
        }
        DerivElt {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(key, v)| (key.clone(), v.iter().map(|x| x * k).collect()))
                .collect(),
        }
    }

    /// Multiply by `d^i` on the left: shift every key.
    pub fn shift(&self, i: usize, n: usize) -> DerivElt {
        DerivElt {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.add(&MultiIndex::unit(n, i)), v.clone()))
                .collect(),
        }
    }

    pub fn render(&self, var_names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let deriv_names: Vec<String> = var_names.iter().map(|v| format!("d/d{v}")).collect();
        self.terms
            .iter()
            .map(|(k, v)| {
                let mono = render_monomial(k, &deriv_names);
                let vec = v
                    .iter()
                    .map(Rat::to_string)
                    .collect::<Vec<_>>()
                    .join(", ");
                if mono.is_empty() {
                    format!("({vec})")
                } else {
                    format!("{mono} (x) ({vec})")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for DerivElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self
            .terms
            .keys()
            .next()
            .map_or(1, MultiIndex::len))
            .map(|j| format!("x{j}"))
            .collect();
        write!(f, "{}", self.render(&names))
    }
}

fn mat_vec(m: &QMatrix, v: &[Rat]) -> Vec<Rat> {
    m.mul_vec(&v.to_vec())
}

/// Convert a matrix over the trivial ring to a rational matrix.
fn rational_matrix(m: &RMatrix) -> QMatrix {
    m.map(|e| e.as_rat().expect("constant entry"))
}

/// The Rudakov module `R^W_P = K[d/dx] (x) W`: induced from evaluation at
/// `P` on functions and the `L+`-truncation on fields vanishing at `P`.
#[derive(Clone)]
pub struct RudakovModule {
    rep: RepSpec,
    point: crate::geometry::Point,
    sample_cutoff: u32,
}

impl RudakovModule {
    pub fn new(rep: RepSpec, point: crate::geometry::Point, sample_cutoff: u32) -> Result<Self> {
        if point.ring().nvars() != rep.nvars() {
            return Err(Error::MixedContext("point arity vs representation".into()));
        }
        Ok(RudakovModule {
            rep,
            point,
            sample_cutoff,
        })
    }

    pub fn rep(&self) -> &RepSpec {
        &self.rep
    }

    pub fn point(&self) -> &crate::geometry::Point {
        &self.point
    }

    fn nvars(&self) -> usize {
        self.point.ring().nvars()
    }

    /// `f . (d^a (x) w)` by commuting `f` past the derivatives:
    /// `f d^a = d_i (f d^(a-e_i)) - (df/dx_i) d^(a-e_i)`, and evaluation at
    /// the base.
    fn act_fn_term(&self, f: &RingElem, a: &MultiIndex, w: &[Rat]) -> Result<DerivElt> {
        if a.is_zero() {
            let value = f.eval(self.point.coords())?;
            return Ok(DerivElt::single(
                a.clone(),
                w.iter().map(|x| x * &value).collect(),
            ));
        }
        let i = a.exps().iter().position(|&e| e > 0).expect("nonzero");
        let down = a.checked_sub(&MultiIndex::unit(self.nvars(), i)).expect("positive");
        let t1 = self.act_fn_term(f, &down, w)?.shift(i, self.nvars());
        let t2 = self.act_fn_term(&f.derive(i), &down, w)?;
        Ok(t1.sub(&t2))
    }

    /// `(f d/dx_j) . (d^a (x) w)`: commute past derivatives, then split
    /// `f = f(P) + (f - f(P))` at the base; the constant part acts freely
    /// through `d_j`, the vanishing part through the truncated `L+` action.
    fn act_field_term(
        &self,
        f: &RingElem,
        j: usize,
        a: &MultiIndex,
        w: &[Rat],
    ) -> Result<DerivElt> {
        let n = self.nvars();
        if a.is_zero() {
            let fp = f.eval(self.point.coords())?;
            let mut out = DerivElt::zero(self.rep.dim());
            out.add_term(
                MultiIndex::unit(n, j),
                w.iter().map(|x| x * &fp).collect(),
            );
            let vanishing = f.sub(&RingElem::constant(f.ring(), fp));
            if !vanishing.is_zero() {
                let loc = localize_at_point(
                    &VectorField::single(vanishing, j),
                    &self.point,
                    self.rep.nilpotency_order(),
                )?;
                let m = rational_matrix(&self.rep.apply(&loc)?);
                out.add_term(MultiIndex::zero(n), mat_vec(&m, w));
            }
            return Ok(out);
        }
        let i = a.exps().iter().position(|&e| e > 0).expect("nonzero");
        let down = a.checked_sub(&MultiIndex::unit(n, i)).expect("positive");
        let t1 = self.act_field_term(f, j, &down, w)?.shift(i, n);
        let t2 = self.act_field_term(&f.derive(i), j, &down, w)?;
        Ok(t1.sub(&t2))
    }

    /// The free action of `d/dx_i`.
    pub fn act_partial(&self, i: usize, m: &DerivElt) -> DerivElt {
        m.shift(i, self.nvars())
    }
}

impl AvModule for RudakovModule {
    type Elt = DerivElt;

    fn ring(&self) -> &Arc<FnRing> {
        self.point.ring()
    }

    fn zero_elt(&self) -> DerivElt {
        DerivElt::zero(self.rep.dim())
    }

    fn one_elt(&self) -> DerivElt {
        DerivElt::single(
            MultiIndex::zero(self.nvars()),
            vec![Rat::one(); self.rep.dim()],
        )
    }

    fn add(&self, a: &DerivElt, b: &DerivElt) -> DerivElt {
        a.add(b)
    }

    fn neg(&self, a: &DerivElt) -> DerivElt {
        a.neg()
    }

    fn is_zero(&self, a: &DerivElt) -> bool {
        a.is_zero()
    }

    fn act_fn(&self, f: &RingElem, m: &DerivElt) -> Result<DerivElt> {
        let mut out = DerivElt::zero(self.rep.dim());
        for (a, w) in m.terms() {
            out = out.add(&self.act_fn_term(f, a, w)?);
        }
        Ok(out)
    }

    fn act_field(&self, v: &VectorField, m: &DerivElt) -> Result<DerivElt> {
        let mut out = DerivElt::zero(self.rep.dim());
        for (j, f) in v.components().iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (a, w) in m.terms() {
                out = out.add(&self.act_field_term(f, j, a, w)?);
            }
        }
        Ok(out)
    }

    fn sample(&self, s: &mut Sampler) -> DerivElt {
        let n = self.nvars();
        let mut out = DerivElt::zero(self.rep.dim());
        for a in indices_up_to(n, self.sample_cutoff) {
            if s.int(0, 2) == 0 {
                let v: Vec<Rat> = (0..self.rep.dim()).map(|_| s.coeff()).collect();
                out.add_term(a, v);
            }
        }
        out
    }

    fn render(&self, a: &DerivElt) -> String {
        a.render(self.point.ring().var_names())
    }
}

/// The D-module of delta functions at a point: `K[d/dx] (x) delta_P` with
/// `f delta_P = f(P) delta_P`, vector fields acting as the composite
/// operator `f . d_i`.
#[derive(Clone)]
pub struct DeltaModule {
    point: crate::geometry::Point,
    sample_cutoff: u32,
}

impl DeltaModule {
    pub fn new(point: crate::geometry::Point, sample_cutoff: u32) -> Self {
        DeltaModule {
            point,
            sample_cutoff,
        }
    }

    fn nvars(&self) -> usize {
        self.point.ring().nvars()
    }

    fn act_fn_term(&self, f: &RingElem, a: &MultiIndex) -> Result<DerivElt> {
        if a.is_zero() {
            let value = f.eval(self.point.coords())?;
            return Ok(DerivElt::single(a.clone(), vec![value]));
        }
        let i = a.exps().iter().position(|&e| e > 0).expect("nonzero");
        let down = a.checked_sub(&MultiIndex::unit(self.nvars(), i)).expect("positive");
        let t1 = self.act_fn_term(f, &down)?.shift(i, self.nvars());
        let t2 = self.act_fn_term(&f.derive(i), &down)?;
        Ok(t1.sub(&t2))
    }

    pub fn act_partial(&self, i: usize, m: &DerivElt) -> DerivElt {
        m.shift(i, self.nvars())
    }
}

impl AvModule for DeltaModule {
    type Elt = DerivElt;

    fn ring(&self) -> &Arc<FnRing> {
        self.point.ring()
    }

    fn zero_elt(&self) -> DerivElt {
        DerivElt::zero(1)
    }

    fn one_elt(&self) -> DerivElt {
        DerivElt::single(MultiIndex::zero(self.nvars()), vec![Rat::one()])
    }

    fn add(&self, a: &DerivElt, b: &DerivElt) -> DerivElt {
        a.add(b)
    }

    fn neg(&self, a: &DerivElt) -> DerivElt {
        a.neg()
    }

    fn is_zero(&self, a: &DerivElt) -> bool {
        a.is_zero()
    }

    fn act_fn(&self, f: &RingElem, m: &DerivElt) -> Result<DerivElt> {
        let mut out = DerivElt::zero(1);
        for (a, w) in m.terms() {
            out = out.add(&self.act_fn_term(f, a)?.scale(&w[0]));
        }
        Ok(out)
    }

    /// D-module axiom: `(f eta) m = f (eta m)`, so a field acts as the
    /// composite of the free derivative and the function action.
    fn act_field(&self, v: &VectorField, m: &DerivElt) -> Result<DerivElt> {
        let mut out = DerivElt::zero(1);
        for (j, f) in v.components().iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            out = out.add(&self.act_fn(f, &self.act_partial(j, m))?);
        }
        Ok(out)
    }

    fn sample(&self, s: &mut Sampler) -> DerivElt {
        let mut out = DerivElt::zero(1);
        for a in indices_up_to(self.nvars(), self.sample_cutoff) {
            if s.int(0, 2) == 0 {
                out.add_term(a, vec![s.coeff()]);
            }
        }
        out
    }

    fn render(&self, a: &DerivElt) -> String {
        a.render(self.point.ring().var_names())
    }
}

/// The tensor realization `F_P (x)_O J^(W')`: delta functions tensored
/// with a jet module, acting by the Leibniz rule across the factors. With
/// `W' = W (x) K_tr` this reproduces the Rudakov module; without the twist
/// it must not.
#[derive(Clone)]
pub struct RealizationModule {
    delta: DeltaModule,
    fiber: RepSpec,
    sample_cutoff: u32,
}

impl RealizationModule {
    /// `twist = true` tensors the fiber with the trace character.
    pub fn new(
        rep: &RepSpec,
        point: crate::geometry::Point,
        sample_cutoff: u32,
        twist: bool,
    ) -> Result<Self> {
        let fiber = if twist {
            rep.tensor(&k_tr(rep.nvars()))?
        } else {
            rep.clone()
        };
        Ok(RealizationModule {
            delta: DeltaModule::new(point, sample_cutoff),
            fiber,
            sample_cutoff,
        })
    }

    fn nvars(&self) -> usize {
        self.delta.nvars()
    }

    /// Distribute a delta-side element over the fiber vector.
    fn tensor_with(&self, d: &DerivElt, w: &[Rat]) -> DerivElt {
        let mut out = DerivElt::zero(self.fiber.dim());
        for (b, c) in d.terms() {
            out.add_term(b.clone(), w.iter().map(|x| x * &c[0]).collect());
        }
        out
    }
}

impl AvModule for RealizationModule {
    type Elt = DerivElt;

    fn ring(&self) -> &Arc<FnRing> {
        self.delta.ring()
    }

    fn zero_elt(&self) -> DerivElt {
        DerivElt::zero(self.fiber.dim())
    }

    fn one_elt(&self) -> DerivElt {
        DerivElt::single(
            MultiIndex::zero(self.nvars()),
            vec![Rat::one(); self.fiber.dim()],
        )
    }

    fn add(&self, a: &DerivElt, b: &DerivElt) -> DerivElt {
        a.add(b)
    }

    fn neg(&self, a: &DerivElt) -> DerivElt {
        a.neg()
    }

    fn is_zero(&self, a: &DerivElt) -> bool {
        a.is_zero()
    }

    /// Functions act through the delta factor (the tensor is over `O`).
    fn act_fn(&self, f: &RingElem, m: &DerivElt) -> Result<DerivElt> {
        let mut out = DerivElt::zero(self.fiber.dim());
        for (a, w) in m.terms() {
            let moved = self.delta.act_fn_term(f, a)?;
            out = out.add(&self.tensor_with(&moved, w));
        }
        Ok(out)
    }

    /// Leibniz across the tensor: the field acts on the delta factor as a
    /// differential operator, and on the jet factor through the virtual
    /// jet of the field, whose function coefficients fall back onto the
    /// delta factor.
    fn act_field(&self, v: &VectorField, m: &DerivElt) -> Result<DerivElt> {
        let n = self.nvars();
        let mut out = DerivElt::zero(self.fiber.dim());
        for (j, f) in v.components().iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (a, w) in m.terms() {
                // delta-factor action
                let delta_side = self
                    .delta
                    .act_fn_term(f, &a.add(&MultiIndex::unit(n, j)))?;
                out = out.add(&self.tensor_with(&delta_side, w));
                // jet-factor action: sum over virtual monomials
                let mut derivs: BTreeMap<MultiIndex, RingElem> = BTreeMap::new();
                derivs.insert(MultiIndex::zero(n), f.clone());
                for s in indices_up_to(n, self.fiber.nilpotency_order()) {
                    if !derivs.contains_key(&s) {
                        let i = s.exps().iter().position(|&e| e > 0).expect("nonzero");
                        let prev = s.checked_sub(&MultiIndex::unit(n, i)).expect("positive");
                        let d = derivs[&prev].derive(i);
                        derivs.insert(s.clone(), d);
                    }
                    if s.is_zero() {
                        continue;
                    }
                    let coeff_fn = derivs[&s].scale(&s.factorial().inv().expect("nonzero"));
                    if coeff_fn.is_zero() {
                        continue;
                    }
                    let rho_w = mat_vec(&self.fiber.generator(&s, j), w);
                    if rho_w.iter().all(Rat::is_zero) {
                        continue;
                    }
                    let delta_side = self.delta.act_fn_term(&coeff_fn, a)?;
                    out = out.add(&self.tensor_with(&delta_side, &rho_w));
                }
            }
        }
        Ok(out)
    }

    fn sample(&self, s: &mut Sampler) -> DerivElt {
        let mut out = DerivElt::zero(self.fiber.dim());
        for a in indices_up_to(self.nvars(), self.sample_cutoff) {
            if s.int(0, 2) == 0 {
                let v: Vec<Rat> = (0..self.fiber.dim()).map(|_| s.coeff()).collect();
                out.add_term(a, v);
            }
        }
        out
    }

    fn render(&self, a: &DerivElt) -> String {
        a.render(self.delta.point.ring().var_names())
    }
}

// ---------------------------------------------------------------------------
// checkers

/// Verify the AV-module axioms on seeded random data: Leibniz
/// compatibility, the bracket axiom, and associativity of the function
/// action.
pub fn av_axiom_check<M: AvModule>(
    module: &M,
    seed: u64,
    samples: u64,
    degree: u32,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("av_axioms")
        .with_seed(seed)
        .with_samples(samples);
    let mut s = Sampler::new(seed);
    let ring = module.ring().clone();
    let n = ring.nvars();
    for k in 0..samples {
        let m = if k == 0 {
            module.one_elt()
        } else {
            module.sample(&mut s)
        };
        let eta = VectorField::single(
            RingElem::from_poly(&ring, s.poly(n, degree)),
            s.index(n),
        );
        let mu = VectorField::single(
            RingElem::from_poly(&ring, s.poly(n, degree)),
            s.index(n),
        );
        let h = RingElem::from_poly(&ring, s.poly(n, degree));

        // Leibniz: eta(h m) = eta(h) m + h (eta m)
        let lhs = module.act_field(&eta, &module.act_fn(&h, &m)?)?;
        let rhs = module.add(
            &module.act_fn(&eta.apply(&h), &m)?,
            &module.act_fn(&h, &module.act_field(&eta, &m)?)?,
        );
        report.require(
            format!("Leibniz, sample {k}"),
            lhs == rhs,
            format!("lhs {} != rhs {}", module.render(&lhs), module.render(&rhs)),
        );

        // bracket: [eta, mu] m = eta(mu m) - mu(eta m)
        let lhs = module.act_field(&eta.bracket(&mu), &m)?;
        let rhs = module.sub(
            &module.act_field(&eta, &module.act_field(&mu, &m)?)?,
            &module.act_field(&mu, &module.act_field(&eta, &m)?)?,
        );
        report.require(
            format!("bracket axiom, sample {k}"),
            lhs == rhs,
            format!("lhs {} != rhs {}", module.render(&lhs), module.render(&rhs)),
        );

        // function action is associative and unital
        let h2 = RingElem::from_poly(&ring, s.poly(n, degree));
        let lhs = module.act_fn(&h.mul(&h2), &m)?;
        let rhs = module.act_fn(&h, &module.act_fn(&h2, &m)?)?;
        report.require(
            format!("A-associativity, sample {k}"),
            lhs == rhs,
            format!("lhs {} != rhs {}", module.render(&lhs), module.render(&rhs)),
        );
        let unit = module.act_fn(&RingElem::one(&ring), &m)?;
        report.require(format!("A-unit, sample {k}"), unit == m, module.render(&unit));
    }
    Ok(report)
}

/// Apply the order-`n` differentiability element
/// `sum_k (-1)^k C(n,k) f^k # f^(n-k) eta` through the module action and
/// require zero. Fields range over `d/dx_i` and `x_j d/dx_i`; the first
/// samples use the deterministic witness `f = x_i`.
pub fn differentiability_check<M: AvModule>(
    module: &M,
    n_diff: u32,
    seed: u64,
    samples: u64,
    degree: u32,
) -> Result<CheckReport> {
    let mut report = CheckReport::new(format!("differentiability(N={n_diff})"))
        .with_seed(seed)
        .with_samples(samples);
    let mut s = Sampler::new(seed);
    let ring = module.ring().clone();
    let n = ring.nvars();
    for k in 0..samples {
        let (f, m) = if k < n as u64 {
            (RingElem::var(&ring, k as usize), module.one_elt())
        } else {
            (
                RingElem::from_poly(&ring, s.nonzero_poly(n, degree)),
                module.sample(&mut s),
            )
        };
        let i = s.index(n);
        let eta = if s.int(0, 1) == 0 {
            VectorField::partial(&ring, i)
        } else {
            VectorField::single(RingElem::var(&ring, s.index(n)), i)
        };
        let mut acc = module.zero_elt();
        for j in 0..=n_diff {
            let coeff = Rat::binomial(n_diff, j)
                * if j % 2 == 0 { Rat::one() } else { -Rat::one() };
            let outer = f.pow_i(j as i64)?.scale(&coeff);
            let inner_field = eta.scale(&f.pow_i((n_diff - j) as i64)?);
            let term = module.act_fn(&outer, &module.act_field(&inner_field, &m)?)?;
            acc = module.add(&acc, &term);
        }
        report.require(
            format!("diff element vanishes, sample {k} (f = {})", f.render()),
            module.is_zero(&acc),
            module.render(&acc),
        );
        if !report.passed {
            break; // the smallest violated instance is enough
        }
    }
    Ok(report)
}

/// Search the smallest differentiability order in `[lo, hi]` and record
/// it; a finding if none passes.
pub fn minimal_diff_order<M: AvModule>(
    module: &M,
    lo: u32,
    hi: u32,
    seed: u64,
    samples: u64,
    degree: u32,
) -> Result<(Option<u32>, CheckReport)> {
    let mut report = CheckReport::new(format!("minimal_diff_order({lo}..{hi})")).with_seed(seed);
    for n in lo..=hi {
        let sub = differentiability_check(module, n, seed, samples, degree)?;
        report.checks += sub.checks;
        if sub.passed {
            report.note(format!("differentiable at order {n}"));
            return Ok((Some(n), report));
        }
    }
    report.require(
        format!("some order in [{lo}, {hi}] passes"),
        false,
        "none passed".to_string(),
    );
    Ok((None, report))
}

/// Equivariance of the jet-module action with the gluing matrix along a
/// transition: transporting a section and then acting equals acting and
/// then transporting, for seeded random fields and sections over the
/// overlap.
pub fn glue_equivariance_check(
    rep: &RepSpec,
    t: &crate::geometry::Transition,
    order: u32,
    seed: u64,
    samples: u64,
    degree: u32,
) -> Result<CheckReport> {
    let mut report = CheckReport::new(format!("glue_equivariance({})", rep.name()))
        .with_seed(seed)
        .with_samples(samples);
    let mut s = Sampler::new(seed);
    let order = order.max(rep.nilpotency_order());
    let glue = jet_glue_matrix(rep, t, order)?;
    let overlap_to = t.overlap_to().clone();
    let overlap_from = t.overlap_from().clone();
    let n = overlap_to.nvars();
    let module_x = JetModule::new(rep.clone(), overlap_to.clone());
    let module_y = JetModule::new(rep.clone(), overlap_from.clone());

    // classical pushforward of a field through the transition
    let jac_rows: Vec<Vec<RingElem>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    t.inverse_maps()[j]
                        .derive(i)
                        .substitute(t.maps(), &overlap_from)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let transport = |v: &[RingElem]| -> Result<Vec<RingElem>> {
        let moved = v
            .iter()
            .map(|c| c.substitute(t.maps(), &overlap_from))
            .collect::<Result<Vec<_>>>()?;
        Ok(glue.mul_vec(&moved))
    };

    for k in 0..samples {
        let section: Vec<RingElem> = (0..rep.dim())
            .map(|_| s.ring_elem(&overlap_to, degree, 1))
            .collect();
        let field_x = VectorField::single(
            RingElem::from_poly(&overlap_to, s.poly(n, degree)),
            s.index(n),
        );
        let mut field_y = VectorField::zero(&overlap_from);
        for (i, f) in field_x.components().iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let f_moved = f.substitute(t.maps(), &overlap_from)?;
            for j in 0..n {
                field_y = field_y.add(&VectorField::single(
                    f_moved.mul(&jac_rows[j][i]),
                    j,
                ));
            }
        }
        let lhs = transport(&module_x.action(&field_x, &section)?)?;
        let rhs = module_y.action(&field_y, &transport(&section)?)?;
        report.require(
            format!("equivariance, sample {k}"),
            lhs == rhs,
            format!(
                "transported action {} != action of transported {}",
                module_y.render(&lhs),
                module_y.render(&rhs)
            ),
        );
    }
    Ok(report)
}

/// Compare the Rudakov action with the delta-tensor realization on the
/// common basis, for seeded random functions and fields. `twist = false`
/// drops the trace character and must fail.
pub fn rudakov_realization_check(
    rep: &RepSpec,
    point: &crate::geometry::Point,
    cutoff: u32,
    seed: u64,
    samples: u64,
    degree: u32,
    twist: bool,
) -> Result<CheckReport> {
    let mut report = CheckReport::new(format!(
        "rudakov_realization({}, twist={twist})",
        rep.name()
    ))
    .with_seed(seed)
    .with_samples(samples);
    let rud = RudakovModule::new(rep.clone(), point.clone(), cutoff)?;
    let real = RealizationModule::new(rep, point.clone(), cutoff, twist)?;
    let ring = point.ring().clone();
    let n = ring.nvars();
    let mut s = Sampler::new(seed);
    for k in 0..samples {
        let (f, m) = if k < n as u64 {
            (RingElem::var(&ring, k as usize), rud.one_elt())
        } else {
            (
                RingElem::from_poly(&ring, s.poly(n, degree)),
                rud.sample(&mut s),
            )
        };
        let i = s.index(n);
        let field = VectorField::single(f.clone(), i);

        let lhs = rud.act_field(&field, &m)?;
        let rhs = real.act_field(&field, &m)?;
        report.require(
            format!("field action agrees, sample {k}"),
            lhs == rhs,
            format!(
                "rudakov {} != realization {}",
                rud.render(&lhs),
                real.render(&rhs)
            ),
        );

        let lhs = rud.act_fn(&f, &m)?;
        let rhs = real.act_fn(&f, &m)?;
        report.require(
            format!("function action agrees, sample {k}"),
            lhs == rhs,
            format!(
                "rudakov {} != realization {}",
                rud.render(&lhs),
                real.render(&rhs)
            ),
        );

        let j = s.index(n);
        let lhs = rud.act_partial(j, &m);
        let rhs = real
            .delta
            .act_partial(j, &m);
        report.require(
            format!("free derivative agrees, sample {k}"),
            lhs == rhs,
            "derivative mismatch".to_string(),
        );
        if !report.passed && !twist {
            break; // a single witness is what the mutation check needs
        }
    }
    Ok(report)
}
