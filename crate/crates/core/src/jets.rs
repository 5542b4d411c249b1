//! The truncated Lie algebra of derivations of `K[[X_1..X_n]]` and the
//! truncated automorphism group.
//!
//! Conventions, fixed once and used everywhere:
//!
//! * `compose(f, g)` substitutes `g` into `f`: the images are `f_i(g)`. As
//!   algebra endomorphisms of `K[[X]]` this is "substitute by `g`, then by
//!   `f`", so the substitution operator of `compose(f, g)` is
//!   `op(g) * op(f)` and [`JetAutomorphism::to_operator`] is contravariant.
//! * `conjugate_derivation(f, d)` is `s_f . d . s_f^-1` where `s_f` is the
//!   substitution operator `h -> h(f)`. This is exactly the conjugation that
//!   realizes the transformation law of virtual jets on chart overlaps.

use std::fmt;

use crate::error::{Error, Result};
use crate::idx::{compositions, indices_up_to, MultiIndex};
use crate::matrix::{Matrix, RMatrix};
use crate::rat::Rat;
use crate::report::CheckReport;
use crate::ring::RingElem;
use crate::series::{SeriesCtx, TruncSeries};

/// A derivation of the truncated power-series algebra: component `i` is the
/// coefficient series of `d/dX_i`.
#[derive(Clone, PartialEq)]
pub struct JetDerivation {
    components: Vec<TruncSeries>,
}

impl JetDerivation {
    pub fn new(components: Vec<TruncSeries>) -> Result<Self> {
        let ctx = components
            .first()
            .ok_or_else(|| Error::MixedContext("empty derivation".into()))?
            .ctx()
            .clone();
        if components.len() != ctx.nvars {
            return Err(Error::MixedContext(
                "derivation needs one component per variable".into(),
            ));
        }
        for c in &components {
            ctx.require_compatible(c.ctx())?;
        }
        Ok(JetDerivation { components })
    }

    pub fn zero(ctx: &SeriesCtx) -> Self {
        JetDerivation {
            components: (0..ctx.nvars).map(|_| TruncSeries::zero(ctx)).collect(),
        }
    }

    /// The single-component derivation `g d/dX_j`.
    pub fn single(g: TruncSeries, j: usize) -> Self {
        let ctx = g.ctx().clone();
        let mut components: Vec<TruncSeries> =
            (0..ctx.nvars).map(|_| TruncSeries::zero(&ctx)).collect();
        components[j] = g;
        JetDerivation { components }
    }

    pub fn ctx(&self) -> &SeriesCtx {
        self.components[0].ctx()
    }

    pub fn components(&self) -> &[TruncSeries] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &TruncSeries {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(TruncSeries::is_zero)
    }

    /// Membership in `L+`: every component vanishes at the origin.
    pub fn is_in_lplus(&self) -> bool {
        self.components.iter().all(TruncSeries::has_zero_constant_term)
    }

    /// Lowest total degree appearing in any component; `None` when zero.
    pub fn filtration_degree(&self) -> Option<u32> {
        self.components.iter().filter_map(TruncSeries::valuation).min()
    }

    /// Membership in `m^k L+`: every component lies in `m^(k+1)`.
    pub fn in_mk_lplus(&self, k: u32) -> bool {
        self.components
            .iter()
            .all(|c| c.valuation().map_or(true, |v| v >= k + 1))
    }

    /// Apply the derivation to a series: `sum_i d_i * df/dX_i`.
    pub fn apply(&self, f: &TruncSeries) -> Result<TruncSeries> {
        self.ctx().require_compatible(f.ctx())?;
        let mut out = TruncSeries::zero(f.ctx());
        for (i, di) in self.components.iter().enumerate() {
            out = out.add(&di.mul(&f.derive(i))?)?;
        }
        Ok(out)
    }

    /// Lie bracket `[d1, d2]_i = d1(d2_i) - d2(d1_i)`.
    pub fn bracket(&self, other: &JetDerivation) -> Result<JetDerivation> {
        self.ctx().require_compatible(other.ctx())?;
        let mut components = Vec::with_capacity(self.components.len());
        for i in 0..self.components.len() {
            let a = self.apply(&other.components[i])?;
            let b = other.apply(&self.components[i])?;
            components.push(a.sub(&b)?);
        }
        JetDerivation::new(components)
    }

    pub fn add(&self, other: &JetDerivation) -> Result<JetDerivation> {
        self.ctx().require_compatible(other.ctx())?;
        JetDerivation::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect::<Result<_>>()?,
        )
    }

    pub fn sub(&self, other: &JetDerivation) -> Result<JetDerivation> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> JetDerivation {
        JetDerivation {
            components: self.components.iter().map(TruncSeries::neg).collect(),
        }
    }

    pub fn scale(&self, k: &RingElem) -> JetDerivation {
        JetDerivation {
            components: self.components.iter().map(|c| c.scale(k)).collect(),
        }
    }

    pub fn scale_rat(&self, k: &Rat) -> JetDerivation {
        JetDerivation {
            components: self.components.iter().map(|c| c.scale_rat(k)).collect(),
        }
    }

    pub fn render(&self, jet_names: &[String]) -> String {
        let parts: Vec<String> = self
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({}) d/d{}", c.render(jet_names), jet_names[i]))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Debug for JetDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            self.render(&TruncSeries::default_names(self.ctx().nvars, 'X'))
        )
    }
}

/// A truncated automorphism of `K[[X_1..X_n]]`: the images of the
/// generators, with zero constant terms and an invertible linear part.
#[derive(Clone, PartialEq)]
pub struct JetAutomorphism {
    images: Vec<TruncSeries>,
}

impl JetAutomorphism {
    pub fn from_images(images: Vec<TruncSeries>) -> Result<Self> {
        let ctx = images
            .first()
            .ok_or_else(|| Error::MixedContext("empty automorphism".into()))?
            .ctx()
            .clone();
        if images.len() != ctx.nvars {
            return Err(Error::MixedContext(
                "automorphism needs one image per variable".into(),
            ));
        }
        for (i, im) in images.iter().enumerate() {
            ctx.require_compatible(im.ctx())?;
            if !im.has_zero_constant_term() {
                return Err(Error::NonzeroConstantTerm(i));
            }
        }
        let aut = JetAutomorphism { images };
        if !aut.linear_part().det().is_unit() {
            return Err(Error::NonInvertibleLinearPart);
        }
        Ok(aut)
    }

    pub fn identity(ctx: &SeriesCtx) -> Self {
        JetAutomorphism {
            images: TruncSeries::identity_tuple(ctx),
        }
    }

    /// The linear automorphism with images `sum_j m[i][j] X_j`.
    pub fn from_linear(ctx: &SeriesCtx, m: &RMatrix) -> Result<Self> {
        let mut images = Vec::with_capacity(ctx.nvars);
        for i in 0..ctx.nvars {
            let mut im = TruncSeries::zero(ctx);
            for j in 0..ctx.nvars {
                im = im.add(&TruncSeries::var(ctx, j).scale(m.at(i, j)))?;
            }
            images.push(im);
        }
        JetAutomorphism::from_images(images)
    }

    pub fn ctx(&self) -> &SeriesCtx {
        self.images[0].ctx()
    }

    pub fn images(&self) -> &[TruncSeries] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &TruncSeries {
        &self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        *self == JetAutomorphism::identity(self.ctx())
    }

    /// Matrix of degree-one coefficients `(A_{i,eps_j})`.
    pub fn linear_part(&self) -> RMatrix {
        let ctx = self.ctx();
        Matrix::from_fn(ctx.nvars, ctx.nvars, |i, j| {
            self.images[i].coeff(&MultiIndex::unit(ctx.nvars, j))
        })
    }

    pub fn has_identity_linear_part(&self) -> bool {
        self.linear_part()
            .is_identity()
    }

    /// Substitution composition: the images are `f_i(g)`.
    pub fn compose(&self, g: &JetAutomorphism) -> Result<JetAutomorphism> {
        self.ctx().require_compatible(g.ctx())?;
        let images = self
            .images
            .iter()
            .map(|f| f.compose(&g.images))
            .collect::<Result<Vec<_>>>()?;
        Ok(JetAutomorphism { images })
    }

    /// Compositional inverse, by degree-by-degree correction seeded with the
    /// inverse of the linear part.
    pub fn invert(&self) -> Result<JetAutomorphism> {
        let ctx = self.ctx();
        let lin_inv = self
            .linear_part()
            .try_inverse()
            .map_err(|_| Error::NonInvertibleLinearPart)?;
        let mut g = JetAutomorphism::from_linear(ctx, &lin_inv)?;
        let id = TruncSeries::identity_tuple(ctx);
        for _ in 0..=ctx.order {
            // error E = F(G) - id; each pass removes the lowest degree of E
            let fg = self.compose(&g)?;
            let errs: Vec<TruncSeries> = fg
                .images
                .iter()
                .zip(&id)
                .map(|(a, b)| a.sub(b))
                .collect::<Result<_>>()?;
            if errs.iter().all(TruncSeries::is_zero) {
                return Ok(g);
            }
            let mut new_images = Vec::with_capacity(ctx.nvars);
            for i in 0..ctx.nvars {
                let mut correction = TruncSeries::zero(ctx);
                for j in 0..ctx.nvars {
                    correction = correction.add(&errs[j].scale(lin_inv.at(i, j)))?;
                }
                new_images.push(g.images[i].sub(&correction)?);
            }
            g = JetAutomorphism { images: new_images };
        }
        // the loop always converges within `order` passes
        Ok(g)
    }

    /// Matrix of the substitution operator `h -> h(F)` on the monomial
    /// basis of `K[X]/m^(N+1)` in graded-lex order. Contravariant:
    /// `to_operator(compose(f, g)) = to_operator(g) * to_operator(f)`.
    pub fn to_operator(&self) -> RMatrix {
        let ctx = self.ctx();
        let basis = indices_up_to(ctx.nvars, ctx.order);
        let index_of = |idx: &MultiIndex| basis.binary_search(idx).expect("basis member");
        let mut m = Matrix::zero(basis.len(), basis.len(), &RingElem::zero(&ctx.ring));
        // powers of each image, reused across columns
        let mut powers: Vec<Vec<TruncSeries>> = Vec::with_capacity(ctx.nvars);
        for im in &self.images {
            let mut row = vec![TruncSeries::one(ctx)];
            for k in 1..=ctx.order as usize {
                let next = row[k - 1].mul(im).expect("same ctx");
                row.push(next);
            }
            powers.push(row);
        }
        for (col, s) in basis.iter().enumerate() {
            let mut val = TruncSeries::one(ctx);
            for (i, &e) in s.exps().iter().enumerate() {
                if e > 0 {
                    val = val.mul(&powers[i][e as usize]).expect("same ctx");
                }
            }
            for (idx, c) in val.coeffs() {
                *m.at_mut(index_of(idx), col) = c.clone();
            }
        }
        m
    }

    /// Coefficient `A_{i,s} = s! [X^s] F_i`.
    pub fn coefficient(&self, i: usize, s: &MultiIndex) -> Result<RingElem> {
        if s.degree() > self.ctx().order {
            return Err(Error::OutOfOrder {
                degree: s.degree(),
                order: self.ctx().order,
            });
        }
        Ok(self.images[i].coeff(s).scale(&s.factorial()))
    }

    /// Conjugated derivation `s_F . d . s_F^-1`, computed on generators:
    /// component `j` is `d((F^-1)_j)` composed with `F`.
    pub fn conjugate_derivation(&self, d: &JetDerivation) -> Result<JetDerivation> {
        self.ctx().require_compatible(d.ctx())?;
        if !d.is_in_lplus() {
            for (i, c) in d.components().iter().enumerate() {
                if !c.has_zero_constant_term() {
                    return Err(Error::NotInLplus(i));
                }
            }
        }
        let inv = self.invert()?;
        let mut components = Vec::with_capacity(self.images.len());
        for j in 0..self.images.len() {
            let applied = d.apply(&inv.images[j])?;
            components.push(applied.compose(&self.images)?);
        }
        JetDerivation::new(components)
    }

    pub fn render(&self, jet_names: &[String]) -> String {
        self.images
            .iter()
            .enumerate()
            .map(|(i, im)| format!("{} -> {}", jet_names[i], im.render(jet_names)))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl fmt::Debug for JetAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            self.render(&TruncSeries::default_names(self.ctx().nvars, 'X'))
        )
    }
}

/// Exponential of a derivation in `m L+` (every component in `m^2`): the
/// automorphism with images `exp(d)(X_i)`. The series is finite because `d`
/// raises valuation.
pub fn aut_exp(d: &JetDerivation) -> Result<JetAutomorphism> {
    if !d.in_mk_lplus(1) {
        return Err(Error::NotProNilpotent);
    }
    let ctx = d.ctx();
    let mut images = Vec::with_capacity(ctx.nvars);
    for i in 0..ctx.nvars {
        let mut img = TruncSeries::var(ctx, i);
        let mut term = img.clone();
        for k in 1..=ctx.order {
            term = d.apply(&term)?.scale_rat(&Rat::new(1, k as i64));
            if term.is_zero() {
                break;
            }
            img = img.add(&term)?;
        }
        images.push(img);
    }
    JetAutomorphism::from_images(images)
}

/// Logarithm of a unipotent automorphism, via the matrix logarithm of its
/// substitution operator read off on the generators.
pub fn aut_log(f: &JetAutomorphism) -> Result<JetDerivation> {
    if !f.has_identity_linear_part() {
        return Err(Error::NotUnipotent);
    }
    let ctx = f.ctx();
    let op = f.to_operator();
    let log = op.log_unipotent()?;
    let basis = indices_up_to(ctx.nvars, ctx.order);
    let mut components = Vec::with_capacity(ctx.nvars);
    for i in 0..ctx.nvars {
        let col = basis
            .binary_search(&MultiIndex::unit(ctx.nvars, i))
            .expect("generator in basis");
        let mut series = TruncSeries::zero(ctx);
        for (row, idx) in basis.iter().enumerate() {
            let c = log.at(row, col);
            if !c.is_zero() {
                series = series.add(&TruncSeries::monomial(ctx, idx.clone(), c.clone()))?;
            }
        }
        components.push(series);
    }
    JetDerivation::new(components)
}

/// Right-hand side of the coefficient coproduct evaluated on a pair of
/// automorphisms:
///
/// ```text
/// sum_{r=1}^{|s|} 1/r! sum_{(j_1..j_r)} A_{i, e_{j_1}+..+e_{j_r}}(F)
///     sum_{(p_1..p_r) nonzero, sum = s} s!/(p_1!..p_r!) prod_k A_{j_k,p_k}(G)
/// ```
///
/// where the inner sum ranges over ordered compositions. The multinomial
/// weight together with the `1/r!` normalization reproduces the chain rule
/// exactly; composition is the ground truth it is checked against.
pub fn faa_di_bruno(
    i: usize,
    s: &MultiIndex,
    f: &JetAutomorphism,
    g: &JetAutomorphism,
) -> Result<RingElem> {
    let ctx = f.ctx();
    ctx.require_compatible(g.ctx())?;
    let n = ctx.nvars;
    let ring = &ctx.ring;
    let s_fact = s.factorial();
    let mut total = RingElem::zero(ring);
    for r in 1..=s.degree() as usize {
        let r_fact_inv = Rat::factorial(r as u32).inv().expect("nonzero");
        let comps = compositions(s, r);
        if comps.is_empty() {
            continue;
        }
        let mut tuples = vec![Vec::new()];
        for _ in 0..r {
            let mut next = Vec::new();
            for t in &tuples {
                for j in 0..n {
                    let mut t2: Vec<usize> = t.clone();
                    t2.push(j);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        for js in &tuples {
            let mut u = MultiIndex::zero(n);
            for &j in js {
                u = u.add(&MultiIndex::unit(n, j));
            }
            let outer = f.coefficient(i, &u)?;
            if outer.is_zero() {
                continue;
            }
            let mut inner_sum = RingElem::zero(ring);
            for parts in &comps {
                let mut weight = s_fact.clone();
                let mut prod = RingElem::one(ring);
                for (k, p) in parts.iter().enumerate() {
                    weight = weight * p.factorial().inv().expect("nonzero");
                    prod = prod.mul(&g.coefficient(js[k], p)?);
                }
                inner_sum = inner_sum.add(&prod.scale(&weight));
            }
            total = total.add(&outer.mul(&inner_sum).scale(&r_fact_inv));
        }
    }
    Ok(total)
}

/// Compare `A_{i,s}(F . G)` with the chain-rule sum; a mismatch is a report
/// finding, not an error.
pub fn coproduct_check(
    i: usize,
    s: &MultiIndex,
    f: &JetAutomorphism,
    g: &JetAutomorphism,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("coproduct");
    let composed = f.compose(g)?;
    let lhs = composed.coefficient(i, s)?;
    let rhs = faa_di_bruno(i, s, f, g)?;
    report.check(
        format!("A[{i},{s:?}] of F.G vs chain-rule sum"),
        &lhs,
        &rhs,
        RingElem::render,
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qctx(n: usize, order: u32) -> SeriesCtx {
        SeriesCtx::rational(n, order)
    }

    fn xpow(ctx: &SeriesCtx, k: u32) -> TruncSeries {
        TruncSeries::var(ctx, 0).pow(k).unwrap()
    }

    #[test]
    fn bracket_of_monomial_fields() {
        // [X^2 d/dX, X^3 d/dX] = X^4 d/dX
        let ctx = qctx(1, 5);
        let d1 = JetDerivation::single(xpow(&ctx, 2), 0);
        let d2 = JetDerivation::single(xpow(&ctx, 3), 0);
        let b = d1.bracket(&d2).unwrap();
        assert_eq!(b, JetDerivation::single(xpow(&ctx, 4), 0));
        assert!(d1.bracket(&d1).unwrap().is_zero());
    }

    #[test]
    fn gl2_relation() {
        // [X1 d/dX2, X2 d/dX1] = X1 d/dX1 - X2 d/dX2
        let ctx = qctx(2, 3);
        let x1 = TruncSeries::var(&ctx, 0);
        let x2 = TruncSeries::var(&ctx, 1);
        let d1 = JetDerivation::single(x1.clone(), 1);
        let d2 = JetDerivation::single(x2.clone(), 0);
        let b = d1.bracket(&d2).unwrap();
        let expected = JetDerivation::new(vec![x1, x2.neg()]).unwrap();
        assert_eq!(b, expected);
    }

    #[test]
    fn euler_operator() {
        let ctx = qctx(1, 4);
        let euler = JetDerivation::single(TruncSeries::var(&ctx, 0), 0);
        for k in 1..=4 {
            let f = xpow(&ctx, k);
            assert_eq!(
                euler.apply(&f).unwrap(),
                f.scale_rat(&Rat::from_int(k as i64))
            );
        }
        let c = TruncSeries::one(&ctx);
        assert!(euler.apply(&c).unwrap().is_zero());
    }

    #[test]
    fn filtration() {
        let ctx = qctx(1, 4);
        let d = JetDerivation::single(xpow(&ctx, 3), 0);
        assert!(d.is_in_lplus());
        assert_eq!(d.filtration_degree(), Some(3));
        assert!(d.in_mk_lplus(2));
        assert!(!d.in_mk_lplus(3));
        let with_const = JetDerivation::single(TruncSeries::one(&ctx), 0);
        assert!(!with_const.is_in_lplus());
    }

    #[test]
    fn composition_and_identity() {
        let ctx = qctx(1, 2);
        let f = JetAutomorphism::from_images(vec![
            TruncSeries::var(&ctx, 0).add(&xpow(&ctx, 2)).unwrap()
        ])
        .unwrap();
        let id = JetAutomorphism::identity(&ctx);
        assert_eq!(f.compose(&id).unwrap(), f);
        assert_eq!(id.compose(&f).unwrap(), f);

        // (aX) . (bX) = abX
        let a = Rat::from_int(3);
        let b = Rat::new(1, 2);
        let fa = JetAutomorphism::from_images(vec![TruncSeries::var(&ctx, 0).scale_rat(&a)]).unwrap();
        let fb = JetAutomorphism::from_images(vec![TruncSeries::var(&ctx, 0).scale_rat(&b)]).unwrap();
        let ab = JetAutomorphism::from_images(vec![
            TruncSeries::var(&ctx, 0).scale_rat(&(a.clone() * b.clone()))
        ])
        .unwrap();
        assert_eq!(fa.compose(&fb).unwrap(), ab);
    }

    /// Build the 1-variable automorphism with A-coefficients a1, a2, so the
    /// image is a1 X + (a2/2) X^2.
    fn aut_from_a(ctx: &SeriesCtx, a1: i64, a2: i64) -> JetAutomorphism {
        let img = TruncSeries::var(ctx, 0)
            .scale_rat(&Rat::from_int(a1))
            .add(&xpow(ctx, 2).scale_rat(&Rat::new(a2, 2)))
            .unwrap();
        JetAutomorphism::from_images(vec![img]).unwrap()
    }

    #[test]
    fn second_order_composition_coefficient() {
        // A_{1,2}(F.G) = a1 b2 + a2 b1^2
        let ctx = qctx(1, 2);
        let (a1, a2, b1, b2) = (2i64, 5, 3, -7);
        let f = aut_from_a(&ctx, a1, a2);
        let g = aut_from_a(&ctx, b1, b2);
        let composed = f.compose(&g).unwrap();
        let coeff = composed.coefficient(0, &MultiIndex::new(vec![2])).unwrap();
        assert_eq!(
            coeff.as_rat().unwrap(),
            Rat::from_int(a1 * b2 + a2 * b1 * b1)
        );
    }

    #[test]
    fn inversion() {
        let ctx = qctx(1, 3);
        // (X + X^2)^-1 = X - X^2 + 2X^3
        let f = JetAutomorphism::from_images(vec![
            TruncSeries::var(&ctx, 0).add(&xpow(&ctx, 2)).unwrap()
        ])
        .unwrap();
        let g = f.invert().unwrap();
        let expected = TruncSeries::var(&ctx, 0)
            .sub(&xpow(&ctx, 2))
            .unwrap()
            .add(&xpow(&ctx, 3).scale_rat(&Rat::from_int(2)))
            .unwrap();
        assert_eq!(g.images()[0], expected);
        assert!(f.compose(&g).unwrap().is_identity());
        assert!(g.compose(&f).unwrap().is_identity());

        // aX inverts to X/a
        let fa = JetAutomorphism::from_images(vec![TruncSeries::var(&ctx, 0).scale_rat(&Rat::from_int(4))])
            .unwrap();
        let ga = fa.invert().unwrap();
        assert_eq!(
            ga.images()[0],
            TruncSeries::var(&ctx, 0).scale_rat(&Rat::new(1, 4))
        );

        // zero linear part is rejected at construction
        assert!(matches!(
            JetAutomorphism::from_images(vec![xpow(&ctx, 2)]),
            Err(Error::NonInvertibleLinearPart)
        ));
    }

    #[test]
    fn operator_of_scaling() {
        // F = 2X on basis {1, X, X^2} is diag(1, 2, 4)
        let ctx = qctx(1, 2);
        let f =
            JetAutomorphism::from_images(vec![TruncSeries::var(&ctx, 0).scale_rat(&Rat::from_int(2))])
                .unwrap();
        let op = f.to_operator();
        assert_eq!(op.rows(), 3);
        for (i, expect) in [1i64, 2, 4].iter().enumerate() {
            assert_eq!(op.at(i, i).as_rat().unwrap(), Rat::from_int(*expect));
        }
        assert!(JetAutomorphism::identity(&ctx).to_operator().is_identity());
    }

    #[test]
    fn operator_is_contravariant() {
        let ctx = qctx(1, 3);
        let f = aut_from_a(&ctx, 2, 3);
        let g = aut_from_a(&ctx, 1, -4);
        let lhs = f.compose(&g).unwrap().to_operator();
        let rhs = g.to_operator().mul(&f.to_operator());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn exponential_of_alpha_x2() {
        // exp(a X^2 d/dX) X = X + aX^2 + a^2 X^3 + a^3 X^4
        let ctx = qctx(1, 4);
        let alpha = Rat::new(3, 5);
        let d = JetDerivation::single(xpow(&ctx, 2).scale_rat(&alpha), 0);
        let f = aut_exp(&d).unwrap();
        let mut expected = TruncSeries::zero(&ctx);
        for k in 1..=4u32 {
            expected = expected
                .add(&xpow(&ctx, k).scale_rat(&alpha.pow_i(k as i64 - 1).unwrap()))
                .unwrap();
        }
        assert_eq!(f.images()[0], expected);
        assert!(f.has_identity_linear_part());

        assert!(aut_exp(&JetDerivation::zero(&ctx)).unwrap().is_identity());
        let euler = JetDerivation::single(TruncSeries::var(&ctx, 0), 0);
        assert!(matches!(aut_exp(&euler), Err(Error::NotProNilpotent)));
    }

    #[test]
    fn logarithm() {
        // log(X + X^2) = X^2 d/dX - X^3 d/dX at N = 3
        let ctx = qctx(1, 3);
        let f = JetAutomorphism::from_images(vec![
            TruncSeries::var(&ctx, 0).add(&xpow(&ctx, 2)).unwrap()
        ])
        .unwrap();
        let d = aut_log(&f).unwrap();
        let expected = JetDerivation::single(xpow(&ctx, 2).sub(&xpow(&ctx, 3)).unwrap(), 0);
        assert_eq!(d, expected);
        assert_eq!(aut_exp(&d).unwrap(), f);

        assert!(aut_log(&JetAutomorphism::identity(&ctx)).unwrap().is_zero());
        let two_x = JetAutomorphism::from_images(vec![
            TruncSeries::var(&ctx, 0).scale_rat(&Rat::from_int(2))
        ])
        .unwrap();
        assert!(matches!(aut_log(&two_x), Err(Error::NotUnipotent)));
    }

    #[test]
    fn conjugation_by_identity_and_scaling() {
        let ctx = qctx(1, 4);
        let d = JetDerivation::single(xpow(&ctx, 2), 0);
        let id = JetAutomorphism::identity(&ctx);
        assert_eq!(id.conjugate_derivation(&d).unwrap(), d);

        // conjugating X^2 d/dX by aX rescales by a (ad-weight +1 under the
        // Euler grading)
        let a = Rat::from_int(3);
        let fa =
            JetAutomorphism::from_images(vec![TruncSeries::var(&ctx, 0).scale_rat(&a)]).unwrap();
        let conj = fa.conjugate_derivation(&d).unwrap();
        assert_eq!(conj, d.scale_rat(&a));
    }

    #[test]
    fn chain_rule_first_and_second_order() {
        let ctx = qctx(1, 3);
        let f = aut_from_a(&ctx, 2, 3);
        let g = aut_from_a(&ctx, -1, 5);
        // first order: jacobian multiplicativity
        let r = coproduct_check(0, &MultiIndex::new(vec![1]), &f, &g).unwrap();
        assert!(r.passed);
        // second order
        let r = coproduct_check(0, &MultiIndex::new(vec![2]), &f, &g).unwrap();
        assert!(r.passed);
        // third order
        let r = coproduct_check(0, &MultiIndex::new(vec![3]), &f, &g).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn chain_rule_two_variables_mixed_index() {
        // the displayed two-variable second-order case s = e1 + e2
        let ctx = qctx(2, 2);
        let mk = |c: [[i64; 2]; 2], q: [[i64; 3]; 2]| {
            // images: linear part c, plus quadratic coefficients q on
            // (X1^2, X1X2, X2^2)
            let quad = [
                MultiIndex::new(vec![2, 0]),
                MultiIndex::new(vec![1, 1]),
                MultiIndex::new(vec![0, 2]),
            ];
            let images = (0..2)
                .map(|i| {
                    let mut im = TruncSeries::zero(&ctx);
                    for j in 0..2 {
                        im = im
                            .add(&TruncSeries::var(&ctx, j).scale_rat(&Rat::from_int(c[i][j])))
                            .unwrap();
                    }
                    for (k, idx) in quad.iter().enumerate() {
                        im = im
                            .add(&TruncSeries::monomial(
                                &ctx,
                                idx.clone(),
                                RingElem::constant(&ctx.ring, Rat::from_int(q[i][k])),
                            ))
                            .unwrap();
                    }
                    im
                })
                .collect();
            JetAutomorphism::from_images(images).unwrap()
        };
        let f = mk([[1, 2], [0, 1]], [[3, -1, 2], [0, 1, 1]]);
        let g = mk([[2, 1], [1, 1]], [[1, 1, 0], [-2, 0, 3]]);
        for i in 0..2 {
            let r = coproduct_check(i, &MultiIndex::new(vec![1, 1]), &f, &g).unwrap();
            assert!(r.passed, "direction {i}: {:?}", r.findings);
            let r = coproduct_check(i, &MultiIndex::new(vec![2, 0]), &f, &g).unwrap();
            assert!(r.passed, "direction {i}: {:?}", r.findings);
        }
    }
}
