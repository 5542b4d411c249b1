//! The smash Lie algebra `A # V` on a chart, truncated jets of vector
//! fields, and the isomorphism between them.
//!
//! Jets of vector fields are stored in the semidirect presentation
//! `V |x (A (x) L+)`: an anchor vector field plus a virtual part. The map
//! `phi` carries a smash term to this presentation; `psi` goes back by
//! expanding powers of `delta(x) = 1 (x) x - x (x) 1`. The two are tested
//! against each other, so neither presentation is trusted alone.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::idx::MultiIndex;
use crate::jets::JetDerivation;
use crate::poly::Poly;
use crate::rat::Rat;
use crate::ring::{FnRing, RingElem};
use crate::series::{taylor_shift, SeriesCtx, TruncSeries};

/// Vector field on a chart: coefficients of `d/dx_1 .. d/dx_n`.
#[derive(Clone, PartialEq)]
pub struct VectorField {
    components: Vec<RingElem>,
}

impl VectorField {
    pub fn new(components: Vec<RingElem>) -> Self {
        assert!(!components.is_empty(), "empty vector field");
        VectorField { components }
    }

    pub fn zero(ring: &Arc<FnRing>) -> Self {
        VectorField {
            components: (0..ring.nvars()).map(|_| RingElem::zero(ring)).collect(),
        }
    }

    /// `f d/dx_i`.
    pub fn single(f: RingElem, i: usize) -> Self {
        let ring = f.ring().clone();
        let mut v = VectorField::zero(&ring);
        v.components[i] = f;
        v
    }

    /// The coordinate field `d/dx_i`.
    pub fn partial(ring: &Arc<FnRing>, i: usize) -> Self {
        VectorField::single(RingElem::one(ring), i)
    }

    pub fn ring(&self) -> &Arc<FnRing> {
        self.components[0].ring()
    }

    pub fn components(&self) -> &[RingElem] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(RingElem::is_zero)
    }

    /// Apply as a derivation of the chart ring.
    pub fn apply(&self, f: &RingElem) -> RingElem {
        let mut acc = RingElem::zero(self.ring());
        for (i, c) in self.components.iter().enumerate() {
            acc = acc.add(&c.mul(&f.derive(i)));
        }
        acc
    }

    pub fn bracket(&self, other: &VectorField) -> VectorField {
        let components = (0..self.components.len())
            .map(|j| {
                self.apply(&other.components[j])
                    .sub(&other.apply(&self.components[j]))
            })
            .collect();
        VectorField { components }
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> VectorField {
        VectorField {
            components: self.components.iter().map(RingElem::neg).collect(),
        }
    }

    pub fn scale(&self, f: &RingElem) -> VectorField {
        VectorField {
            components: self.components.iter().map(|c| c.mul(f)).collect(),
        }
    }

    pub fn render(&self) -> String {
        let names = self.ring().var_names();
        let parts: Vec<String> = self
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({}) d/d{}", c.render(), names[i]))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Finite sum `sum f_k # eta_k` in the smash Lie algebra `A # V`.
#[derive(Clone)]
pub struct SmashTerm {
    ring: Arc<FnRing>,
    terms: Vec<(RingElem, VectorField)>,
}

impl SmashTerm {
    pub fn zero(ring: &Arc<FnRing>) -> Self {
        SmashTerm {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn single(f: RingElem, eta: VectorField) -> Self {
        let ring = f.ring().clone();
        SmashTerm {
            ring,
            terms: vec![(f, eta)],
        }
    }

    pub fn ring(&self) -> &Arc<FnRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[(RingElem, VectorField)] {
        &self.terms
    }

    /// Build from a raw term list, merging equal first factors once.
    pub fn from_terms(ring: &Arc<FnRing>, terms: Vec<(RingElem, VectorField)>) -> SmashTerm {
        SmashTerm {
            ring: ring.clone(),
            terms,
        }
        .merged()
    }

    pub fn add(&self, other: &SmashTerm) -> SmashTerm {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        SmashTerm {
            ring: self.ring.clone(),
            terms,
        }
        .merged()
    }

    pub fn sub(&self, other: &SmashTerm) -> SmashTerm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SmashTerm {
        SmashTerm {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(f, eta)| (f.clone(), eta.neg()))
                .collect(),
        }
    }

    /// Left A-module action: `a . (f # eta) = (af) # eta`.
    pub fn scale_left(&self, a: &RingElem) -> SmashTerm {
        SmashTerm {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(f, eta)| (a.mul(f), eta.clone()))
                .collect(),
        }
        .merged()
    }

    /// Merge terms with structurally equal first factor, drop zeros.
    fn merged(mut self) -> SmashTerm {
        let mut groups: BTreeMap<(Vec<u32>, Poly), (RingElem, VectorField)> = BTreeMap::new();
        for (f, eta) in self.terms.drain(..) {
            if f.is_zero() || eta.is_zero() {
                continue;
            }
            match groups.entry(f.structural_key()) {
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let merged = e.get().1.add(&eta);
                    e.get_mut().1 = merged;
                }
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert((f, eta));
                }
            }
        }
        let terms = groups
            .into_values()
            .filter(|(_, eta)| !eta.is_zero())
            .collect();
        SmashTerm {
            ring: self.ring,
            terms,
        }
    }

    /// The bracket `[f#eta, g#mu] = f eta(g) # mu - g mu(f) # eta
    /// + fg # [eta, mu]`, extended bilinearly.
    pub fn bracket(&self, other: &SmashTerm) -> Result<SmashTerm> {
        if !FnRing::same_ring(&self.ring, &other.ring) {
            return Err(Error::MixedContext("smash terms over different rings".into()));
        }
        let mut terms = Vec::with_capacity(3 * self.terms.len() * other.terms.len());
        for (f, eta) in &self.terms {
            for (g, mu) in &other.terms {
                terms.push((f.mul(&eta.apply(g)), mu.clone()));
                terms.push((g.mul(&mu.apply(f)), eta.neg()));
                terms.push((f.mul(g), eta.bracket(mu)));
            }
        }
        Ok(SmashTerm::from_terms(&self.ring, terms))
    }

    /// Canonical expansion over a common denominator: monomial of the first
    /// factor -> accumulated vector field. Equality of smash terms compares
    /// these expansions at the join of the denominators.
    fn expansion(&self, den: &[u32]) -> BTreeMap<MultiIndex, VectorField> {
        let mut map: BTreeMap<MultiIndex, VectorField> = BTreeMap::new();
        for (f, eta) in &self.terms {
            let mut num = f.numerator().clone();
            for (i, d) in self.ring.denominators().iter().enumerate() {
                num = num.mul(&d.pow(den[i] - f.den_exps()[i]));
            }
            for (idx, c) in num.terms() {
                let scaled = eta.scale(&RingElem::constant(&self.ring, c.clone()));
                map.entry(idx.clone())
                    .and_modify(|v| *v = v.add(&scaled))
                    .or_insert(scaled);
            }
        }
        map.retain(|_, v| !v.is_zero());
        map
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(f, eta)| format!("({}) # ({})", f.render(), eta.render()))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl PartialEq for SmashTerm {
    fn eq(&self, other: &Self) -> bool {
        if !FnRing::same_ring(&self.ring, &other.ring) {
            return false;
        }
        let k = self.ring.denominators().len();
        let mut den = vec![0u32; k];
        for (f, _) in self.terms.iter().chain(&other.terms) {
            for i in 0..k {
                den[i] = den[i].max(f.den_exps()[i]);
            }
        }
        self.expansion(&den) == other.expansion(&den)
    }
}

impl fmt::Debug for SmashTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// A truncated jet of vector fields on a chart, in the semidirect
/// presentation: anchor vector field plus virtual part in `A (x) L+`.
#[derive(Clone, PartialEq)]
pub struct JetVF {
    anchor: VectorField,
    virt: JetDerivation,
}

impl JetVF {
    pub fn new(anchor: VectorField, virt: JetDerivation) -> Result<Self> {
        let ring = anchor.ring();
        if !FnRing::same_ring(ring, &virt.ctx().ring) || virt.ctx().nvars != ring.nvars() {
            return Err(Error::MixedContext("jet anchor/virtual context".into()));
        }
        for (i, c) in virt.components().iter().enumerate() {
            if !c.has_zero_constant_term() {
                return Err(Error::NotInLplus(i));
            }
        }
        Ok(JetVF { anchor, virt })
    }

    pub fn zero(ring: &Arc<FnRing>, order: u32) -> Self {
        let ctx = SeriesCtx::new(ring.clone(), ring.nvars(), order);
        JetVF {
            anchor: VectorField::zero(ring),
            virt: JetDerivation::zero(&ctx),
        }
    }

    pub fn from_virtual(virt: JetDerivation) -> Result<Self> {
        let ring = virt.ctx().ring.clone();
        JetVF::new(VectorField::zero(&ring), virt)
    }

    pub fn ring(&self) -> &Arc<FnRing> {
        self.anchor.ring()
    }

    pub fn order(&self) -> u32 {
        self.virt.ctx().order
    }

    pub fn ctx(&self) -> &SeriesCtx {
        self.virt.ctx()
    }

    /// The `k = 0` part.
    pub fn anchor(&self) -> &VectorField {
        &self.anchor
    }

    /// The `k != 0` part, an element of `A (x) L+`.
    pub fn virtual_part(&self) -> &JetDerivation {
        &self.virt
    }

    pub fn is_zero(&self) -> bool {
        self.anchor.is_zero() && self.virt.is_zero()
    }

    /// Component `i` as a full series: anchor constant term plus virtual.
    pub fn full_component(&self, i: usize) -> TruncSeries {
        TruncSeries::constant(self.virt.ctx(), self.anchor.components()[i].clone())
            .add(self.virt.component(i))
            .expect("same ctx")
    }

    fn from_full_components(ctx: &SeriesCtx, comps: Vec<TruncSeries>) -> Result<JetVF> {
        let anchor = VectorField::new(comps.iter().map(TruncSeries::constant_term).collect());
        let virt = JetDerivation::new(
            comps
                .into_iter()
                .map(|c| {
                    let constant = TruncSeries::constant(ctx, c.constant_term());
                    c.sub(&constant)
                })
                .collect::<Result<_>>()?,
        )?;
        JetVF::new(anchor, virt)
    }

    pub fn add(&self, other: &JetVF) -> Result<JetVF> {
        JetVF::new(
            self.anchor.add(&other.anchor),
            self.virt.add(&other.virt)?,
        )
    }

    pub fn sub(&self, other: &JetVF) -> Result<JetVF> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> JetVF {
        JetVF {
            anchor: self.anchor.neg(),
            virt: self.virt.neg(),
        }
    }

    /// Module action of jets of functions: multiply every full component.
    pub fn mul_series(&self, s: &TruncSeries) -> Result<JetVF> {
        let ctx = self.virt.ctx().clone();
        let comps = (0..self.ring().nvars())
            .map(|i| self.full_component(i).mul(s))
            .collect::<Result<Vec<_>>>()?;
        JetVF::from_full_components(&ctx, comps)
    }

    /// Semidirect bracket: anchors bracket as vector fields, anchors act on
    /// the coefficients of the virtual parts, virtual parts bracket in
    /// `A (x) L+`.
    pub fn bracket(&self, other: &JetVF) -> Result<JetVF> {
        let anchor = self.anchor.bracket(&other.anchor);
        let act = |v: &VectorField, w: &JetDerivation| -> Result<JetDerivation> {
            let comps = w
                .components()
                .iter()
                .map(|c| {
                    let mut acc = TruncSeries::zero(w.ctx());
                    for (j, vc) in v.components().iter().enumerate() {
                        acc = acc.add(&c.derive_base(j).scale(vc))?;
                    }
                    Ok(acc)
                })
                .collect::<Result<Vec<_>>>()?;
            JetDerivation::new(comps)
        };
        let virt = act(&self.anchor, &other.virt)?
            .sub(&act(&other.anchor, &self.virt)?)?
            .add(&self.virt.bracket(&other.virt)?)?;
        JetVF::new(anchor, virt)
    }

    pub fn render(&self) -> String {
        let jet_names = TruncSeries::default_names(self.ring().nvars(), 'X');
        let virt_parts: Vec<String> = self
            .virt
            .components()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({}) d/d{}", c.render(&jet_names), jet_names[i]))
            .collect();
        match (self.anchor.is_zero(), virt_parts.is_empty()) {
            (true, true) => "0".into(),
            (false, true) => self.anchor.render(),
            (true, false) => virt_parts.join(" + "),
            (false, false) => format!("{} + {}", self.anchor.render(), virt_parts.join(" + ")),
        }
    }
}

impl fmt::Debug for JetVF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// `delta(f) = f(x + X) - f(x)`: the jet of `f` with its constant-in-X part
/// removed.
pub fn delta(f: &RingElem, order: u32) -> TruncSeries {
    let jet = taylor_shift(f, order);
    let ctx = jet.ctx().clone();
    jet.sub(&TruncSeries::constant(&ctx, f.clone()))
        .expect("same ctx")
}

/// The isomorphism `phi(g # f d/dx_i) = gf d/dx_i
/// + g (f(x+X) - f(x)) d/dX_i`, extended A-linearly.
pub fn phi(u: &SmashTerm, order: u32) -> Result<JetVF> {
    let ring = u.ring();
    let mut out = JetVF::zero(ring, order);
    for (g, eta) in u.terms() {
        for (i, f) in eta.components().iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let anchor = VectorField::single(g.mul(f), i);
            let virt = JetDerivation::single(delta(f, order).scale(g), i);
            out = out.add(&JetVF::new(anchor, virt)?)?;
        }
    }
    Ok(out)
}

/// The inverse isomorphism: the anchor goes to `g # d/dx_i`, and a virtual
/// monomial `g (x) X^k d/dX_i` expands through
/// `(g (x) 1)(1 (x) x - x (x) 1)^k d/dx_i`.
pub fn psi(v: &JetVF) -> SmashTerm {
    let ring = v.ring().clone();
    let mut terms = Vec::new();
    for (i, g) in v.anchor().components().iter().enumerate() {
        if !g.is_zero() {
            terms.push((g.clone(), VectorField::partial(&ring, i)));
        }
    }
    for (i, comp) in v.virtual_part().components().iter().enumerate() {
        for (k, g) in comp.coeffs() {
            // (1 (x) x - x (x) 1)^k = sum_{a <= k} (-1)^{|k-a|} C(k, a)
            //     x^(k-a) (x) x^a
            for a in k.divisors() {
                let diff = k.checked_sub(&a).expect("divisor");
                let mut binom = Rat::one();
                for j in 0..k.len() {
                    binom = binom * Rat::binomial(k.get(j), a.get(j));
                }
                let sign = if diff.degree() % 2 == 0 { binom } else { -binom };
                let first = g.mul(&RingElem::from_poly(&ring, Poly::monomial(diff, sign)));
                let field = VectorField::single(
                    RingElem::from_poly(&ring, Poly::monomial(a.clone(), Rat::one())),
                    i,
                );
                terms.push((first, field));
            }
        }
    }
    SmashTerm::from_terms(&ring, terms)
}

/// The multiplication map `g # eta -> g eta`.
pub fn anchor_of_smash(u: &SmashTerm) -> VectorField {
    let mut out = VectorField::zero(u.ring());
    for (g, eta) in u.terms() {
        out = out.add(&eta.scale(g));
    }
    out
}

/// The differentiability element
/// `sum_k (-1)^k C(N,k) f^k # f^(N-k) eta` of the smash algebra.
pub fn diff_element_smash(f: &RingElem, eta: &VectorField, n: u32) -> SmashTerm {
    let ring = f.ring();
    let mut out = SmashTerm::zero(ring);
    for k in 0..=n {
        let sign = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
        let coeff = Rat::binomial(n, k) * sign;
        let first = f.pow_i(k as i64).expect("nonnegative power").scale(&coeff);
        let field = eta.scale(&f.pow_i((n - k) as i64).expect("nonnegative power"));
        out = out.add(&SmashTerm::single(first, field));
    }
    out
}

/// The jet image of the differentiability element. Its anchor vanishes for
/// `N >= 1` and its full jet equals `delta(f)^N` times the jet of `eta`.
pub fn diff_element(f: &RingElem, eta: &VectorField, n: u32, order: u32) -> Result<JetVF> {
    phi(&diff_element_smash(f, eta, n), order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart_x() -> Arc<FnRing> {
        FnRing::poly_ring(&["x"])
    }

    fn xv(ring: &Arc<FnRing>) -> RingElem {
        RingElem::var(ring, 0)
    }

    #[test]
    fn smash_bracket_relations() {
        let ring = chart_x();
        let one = RingElem::one(&ring);
        let x = xv(&ring);
        // [1 # x d/dx, 1 # d/dx] = 1 # (-d/dx)
        let u = SmashTerm::single(one.clone(), VectorField::single(x.clone(), 0));
        let v = SmashTerm::single(one.clone(), VectorField::partial(&ring, 0));
        let b = u.bracket(&v).unwrap();
        let expected = SmashTerm::single(one.clone(), VectorField::partial(&ring, 0).neg());
        assert_eq!(b, expected);

        // [x # d/dx, 1 # x d/dx] = 0
        let u = SmashTerm::single(x.clone(), VectorField::partial(&ring, 0));
        let v = SmashTerm::single(one.clone(), VectorField::single(x.clone(), 0));
        assert_eq!(u.bracket(&v).unwrap(), SmashTerm::zero(&ring));

        // antisymmetry on a composite term
        let w = u.add(&v);
        assert_eq!(w.bracket(&w).unwrap(), SmashTerm::zero(&ring));
    }

    #[test]
    fn phi_of_basic_terms() {
        let ring = chart_x();
        let x = xv(&ring);
        // phi(x # x^2 d/dx) = x^3 d/dx + 2x^2 X d/dx + x X^2 d/dx
        let u = SmashTerm::single(
            x.clone(),
            VectorField::single(x.mul(&x), 0),
        );
        let jet = phi(&u, 2).unwrap();
        assert_eq!(
            jet.anchor(),
            &VectorField::single(x.pow_i(3).unwrap(), 0)
        );
        let ctx = jet.ctx();
        let expected_virt = TruncSeries::var(ctx, 0)
            .scale(&x.mul(&x).scale(&Rat::from_int(2)))
            .add(&TruncSeries::var(ctx, 0).pow(2).unwrap().scale(&x))
            .unwrap();
        assert_eq!(jet.virtual_part().component(0), &expected_virt);

        // f = 1 kills the virtual part
        let g = x.pow_i(2).unwrap();
        let u = SmashTerm::single(g.clone(), VectorField::partial(&ring, 0));
        let jet = phi(&u, 3).unwrap();
        assert!(jet.virtual_part().is_zero());
        assert_eq!(jet.anchor(), &VectorField::single(g, 0));
    }

    #[test]
    fn psi_of_first_virtual_monomial() {
        // psi(1 (x) X d/dx) = 1 # x d/dx - x # d/dx
        let ring = chart_x();
        let ctx = SeriesCtx::new(ring.clone(), 1, 3);
        let virt = JetDerivation::single(TruncSeries::var(&ctx, 0), 0);
        let jet = JetVF::from_virtual(virt).unwrap();
        let u = psi(&jet);
        let x = xv(&ring);
        let expected = SmashTerm::single(RingElem::one(&ring), VectorField::single(x.clone(), 0))
            .sub(&SmashTerm::single(x, VectorField::partial(&ring, 0)));
        assert_eq!(u, expected);
    }

    #[test]
    fn psi_phi_is_identity_on_polynomials() {
        let ring = chart_x();
        let x = xv(&ring);
        let one = RingElem::one(&ring);
        // 1 # x^3 d/dx round-trips exactly when the order covers the degree
        let u = SmashTerm::single(one.clone(), VectorField::single(x.pow_i(3).unwrap(), 0));
        assert_eq!(psi(&phi(&u, 3).unwrap()), u);

        let v = SmashTerm::single(
            x.pow_i(2).unwrap(),
            VectorField::single(x.pow_i(2).unwrap().add(&x), 0),
        );
        assert_eq!(psi(&phi(&v, 4).unwrap()), v);
    }

    #[test]
    fn phi_psi_is_identity_on_jets() {
        let ring = FnRing::localized(&["x"], vec![Poly::var(1, 0)]).unwrap();
        let ctx = SeriesCtx::new(ring.clone(), 1, 4);
        let x = RingElem::var(&ring, 0);
        let virt = JetDerivation::single(
            TruncSeries::var(&ctx, 0)
                .scale(&x.try_inv().unwrap())
                .add(&TruncSeries::var(&ctx, 0).pow(3).unwrap().scale(&x))
                .unwrap(),
            0,
        );
        let jet = JetVF::new(VectorField::single(x.pow_i(2).unwrap(), 0), virt).unwrap();
        let back = phi(&psi(&jet), 4).unwrap();
        assert_eq!(back, jet);
    }

    #[test]
    fn phi_is_a_lie_homomorphism() {
        let ring = chart_x();
        let x = xv(&ring);
        let one = RingElem::one(&ring);
        let u = SmashTerm::single(x.clone(), VectorField::single(x.mul(&x), 0));
        let v = SmashTerm::single(one, VectorField::single(x.clone(), 0));
        let order = 5;
        let lhs = phi(&u.bracket(&v).unwrap(), order).unwrap();
        let rhs = phi(&u, order)
            .unwrap()
            .bracket(&phi(&v, order).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn anchor_projection() {
        let ring = chart_x();
        let x = xv(&ring);
        let g = x.pow_i(2).unwrap();
        let u = SmashTerm::single(g.clone(), VectorField::single(x.clone(), 0));
        let jet = phi(&u, 3).unwrap();
        // anchor of phi(g # f d/dx) is gf d/dx
        assert_eq!(jet.anchor(), &VectorField::single(g.mul(&x), 0));
        assert_eq!(&anchor_of_smash(&u), jet.anchor());
        // virtual elements have zero anchor
        let ctx = SeriesCtx::new(ring.clone(), 1, 3);
        let virt = JetVF::from_virtual(JetDerivation::single(TruncSeries::var(&ctx, 0), 0)).unwrap();
        assert!(virt.anchor().is_zero());
    }

    #[test]
    fn anchor_is_a_lie_map() {
        let ring = chart_x();
        let x = xv(&ring);
        let u = SmashTerm::single(x.pow_i(2).unwrap(), VectorField::partial(&ring, 0));
        let v = SmashTerm::single(x.clone(), VectorField::single(x.pow_i(3).unwrap(), 0));
        let lhs = anchor_of_smash(&u.bracket(&v).unwrap());
        let rhs = anchor_of_smash(&u).bracket(&anchor_of_smash(&v));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn delta_examples() {
        let ring = chart_x();
        let x = xv(&ring);
        // delta(x) = X
        let ctx = SeriesCtx::new(ring.clone(), 1, 3);
        assert_eq!(delta(&x, 3), TruncSeries::var(&ctx, 0));
        // delta(x^2) = 2x X + X^2
        let ctx2 = SeriesCtx::new(ring.clone(), 1, 2);
        let expected = TruncSeries::var(&ctx2, 0)
            .scale(&x.scale(&Rat::from_int(2)))
            .add(&TruncSeries::var(&ctx2, 0).pow(2).unwrap())
            .unwrap();
        assert_eq!(delta(&x.mul(&x), 2), expected);
        // delta of a constant vanishes
        assert!(delta(&RingElem::constant(&ring, Rat::new(5, 3)), 4).is_zero());
    }

    #[test]
    fn differentiability_elements() {
        let ring = chart_x();
        let x = xv(&ring);
        let partial = VectorField::partial(&ring, 0);

        // N = 1: 1 # x d/dx - x # d/dx maps to X d/dX with zero anchor
        let ctx = SeriesCtx::new(ring.clone(), 1, 3);
        let e1 = diff_element(&x, &partial, 1, 3).unwrap();
        assert!(e1.anchor().is_zero());
        assert_eq!(
            e1.virtual_part(),
            &JetDerivation::single(TruncSeries::var(&ctx, 0), 0)
        );

        // N = 2 gives X^2 d/dX
        let e2 = diff_element(&x, &partial, 2, 3).unwrap();
        assert!(e2.anchor().is_zero());
        assert_eq!(
            e2.virtual_part(),
            &JetDerivation::single(TruncSeries::var(&ctx, 0).pow(2).unwrap(), 0)
        );

        // constants annihilate for N >= 1
        let c = RingElem::constant(&ring, Rat::from_int(7));
        assert!(diff_element(&c, &partial, 1, 3).unwrap().is_zero());

        // the full jet equals delta(f)^N times the jet of eta
        let f = x.pow_i(2).unwrap().add(&x);
        let eta = VectorField::single(x.clone(), 0);
        let n = 2u32;
        let order = 5;
        let lhs = diff_element(&f, &eta, n, order).unwrap();
        let jet_eta = phi(&SmashTerm::single(RingElem::one(&ring), eta), order).unwrap();
        let rhs = jet_eta.mul_series(&delta(&f, order).pow(n).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
