//! Truncated multivariate formal power series.
//!
//! A `TruncSeries` is an element of `R[[X_1..X_n]] / m^(N+1)` where `R` is a
//! localized polynomial ring and `m = <X_1..X_n>`. The truncation order `N`
//! is carried by every series; operations on series with different rings,
//! variable counts or orders are `MixedContext` errors, never coercions.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::idx::{indices_up_to, MultiIndex};
use crate::poly::render_monomial;
use crate::rat::Rat;
use crate::ring::{FnRing, RingElem};

/// Shared context of a series: coefficient ring, jet variable count and
/// truncation order.
#[derive(Clone)]
pub struct SeriesCtx {
    pub ring: Arc<FnRing>,
    pub nvars: usize,
    pub order: u32,
}

impl SeriesCtx {
    pub fn new(ring: Arc<FnRing>, nvars: usize, order: u32) -> Self {
        SeriesCtx { ring, nvars, order }
    }

    /// Series over the plain rationals.
    pub fn rational(nvars: usize, order: u32) -> Self {
        SeriesCtx::new(FnRing::rationals(), nvars, order)
    }

    pub fn compatible(&self, other: &SeriesCtx) -> bool {
        self.nvars == other.nvars
            && self.order == other.order
            && FnRing::same_ring(&self.ring, &other.ring)
    }

    pub fn require_compatible(&self, other: &SeriesCtx) -> Result<()> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(Error::MixedContext(format!(
                "series contexts differ: ({:?}, n={}, N={}) vs ({:?}, n={}, N={})",
                self.ring, self.nvars, self.order, other.ring, other.nvars, other.order
            )))
        }
    }
}

impl fmt::Debug for SeriesCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, n={}, N={})", self.ring, self.nvars, self.order)
    }
}

/// Multivariate power series truncated at total degree `order`.
#[derive(Clone)]
pub struct TruncSeries {
    ctx: SeriesCtx,
    coeffs: BTreeMap<MultiIndex, RingElem>,
}

impl TruncSeries {
    pub fn zero(ctx: &SeriesCtx) -> Self {
        TruncSeries {
            ctx: ctx.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &SeriesCtx, c: RingElem) -> Self {
        let mut s = TruncSeries::zero(ctx);
        s.set_coeff(MultiIndex::zero(ctx.nvars), c);
        s
    }

    pub fn one(ctx: &SeriesCtx) -> Self {
        TruncSeries::constant(ctx, RingElem::one(&ctx.ring))
    }

    /// The jet variable `X_j`.
    pub fn var(ctx: &SeriesCtx, j: usize) -> Self {
        let mut s = TruncSeries::zero(ctx);
        s.set_coeff(MultiIndex::unit(ctx.nvars, j), RingElem::one(&ctx.ring));
        s
    }

    pub fn monomial(ctx: &SeriesCtx, idx: MultiIndex, c: RingElem) -> Self {
        let mut s = TruncSeries::zero(ctx);
        s.set_coeff(idx, c);
        s
    }

    pub fn ctx(&self) -> &SeriesCtx {
        &self.ctx
    }

    pub fn order(&self) -> u32 {
        self.ctx.order
    }

    pub fn nvars(&self) -> usize {
        self.ctx.nvars
    }

    pub fn ring(&self) -> &Arc<FnRing> {
        &self.ctx.ring
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> RingElem {
        self.coeffs
            .get(idx)
            .cloned()
            .unwrap_or_else(|| RingElem::zero(&self.ctx.ring))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&MultiIndex, &RingElem)> {
        self.coeffs.iter()
    }

    pub fn constant_term(&self) -> RingElem {
        self.coeff(&MultiIndex::zero(self.ctx.nvars))
    }

    pub fn has_zero_constant_term(&self) -> bool {
        self.constant_term().is_zero()
    }

    /// Lowest total degree with a nonzero coefficient; `None` for the zero
    /// series.
    pub fn valuation(&self) -> Option<u32> {
        self.coeffs.keys().map(MultiIndex::degree).min()
    }

    fn set_coeff(&mut self, idx: MultiIndex, c: RingElem) {
        if c.is_zero() || idx.degree() > self.ctx.order {
            self.coeffs.remove(&idx);
        } else {
            self.coeffs.insert(idx, c);
        }
    }

    fn add_to_coeff(&mut self, idx: MultiIndex, c: &RingElem) {
        if idx.degree() > self.ctx.order || c.is_zero() {
            return;
        }
        let cur = self.coeff(&idx);
        self.set_coeff(idx, cur.add(c));
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.ctx.require_compatible(&other.ctx)?;
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.add_to_coeff(idx.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TruncSeries {
        TruncSeries {
            ctx: self.ctx.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(i, c)| (i.clone(), c.neg()))
                .collect(),
        }
    }

    /// Product truncated to the shared order.
    pub fn mul(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.ctx.require_compatible(&other.ctx)?;
        let mut out = TruncSeries::zero(&self.ctx);
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                if i.degree() + j.degree() > self.ctx.order {
                    continue;
                }
                out.add_to_coeff(i.add(j), &a.mul(b));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &RingElem) -> TruncSeries {
        if k.is_zero() {
            return TruncSeries::zero(&self.ctx);
        }
        let mut out = TruncSeries::zero(&self.ctx);
        for (i, c) in &self.coeffs {
            out.set_coeff(i.clone(), c.mul(k));
        }
        out
    }

    pub fn scale_rat(&self, k: &Rat) -> TruncSeries {
        self.scale(&RingElem::constant(&self.ctx.ring, k.clone()))
    }

    pub fn pow(&self, k: u32) -> Result<TruncSeries> {
        let mut out = TruncSeries::one(&self.ctx);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Multiplicative inverse modulo `m^(N+1)`; the constant term must be a
    /// unit of the coefficient ring.
    pub fn unit_invert(&self) -> Result<TruncSeries> {
        let c = self.constant_term();
        let c_inv = c.try_inv().map_err(|_| {
            Error::NonUnitConstantTerm(c.render())
        })?;
        // f = c (1 + u) with u in m; 1/f = c^-1 sum (-u)^k
        let scaled = self.scale(&c_inv);
        let u = scaled.sub(&TruncSeries::one(&self.ctx))?;
        let mut acc = TruncSeries::one(&self.ctx);
        let mut power = TruncSeries::one(&self.ctx);
        for _ in 1..=self.ctx.order {
            power = power.mul(&u.neg())?;
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
        }
        Ok(acc.scale(&c_inv))
    }

    /// Substitution `f(g_1, .., g_n)` truncated to the shared order. Every
    /// `g_i` must have a zero constant term.
    pub fn compose(&self, args: &[TruncSeries]) -> Result<TruncSeries> {
        if args.len() != self.ctx.nvars {
            return Err(Error::MixedContext("composition arity".into()));
        }
        for (i, g) in args.iter().enumerate() {
            if !g.has_zero_constant_term() {
                return Err(Error::NonzeroConstantTerm(i));
            }
        }
        let target_ctx = if let Some(g) = args.first() {
            for g2 in &args[1..] {
                g.ctx.require_compatible(&g2.ctx)?;
            }
            if !FnRing::same_ring(&self.ctx.ring, &g.ctx.ring) || self.ctx.order != g.ctx.order {
                return Err(Error::MixedContext(
                    "composition ring or order mismatch".into(),
                ));
            }
            g.ctx.clone()
        } else {
            self.ctx.clone()
        };
        // cache powers g_i^k for k <= N
        let order = target_ctx.order;
        let mut powers: Vec<Vec<TruncSeries>> = Vec::with_capacity(args.len());
        for g in args {
            let mut row = vec![TruncSeries::one(&target_ctx)];
            for k in 1..=order {
                let next = row[(k - 1) as usize].mul(g)?;
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = TruncSeries::zero(&target_ctx);
        for (s, c) in &self.coeffs {
            let mut term = TruncSeries::constant(&target_ctx, c.clone());
            for (i, &e) in s.exps().iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[i][e as usize])?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// The identity substitution tuple `(X_1, .., X_n)`.
    pub fn identity_tuple(ctx: &SeriesCtx) -> Vec<TruncSeries> {
        (0..ctx.nvars).map(|j| TruncSeries::var(ctx, j)).collect()
    }

    /// Partial derivative with respect to the jet variable `X_j`. Exact on
    /// the stored representative; callers multiply by elements of `m` to
    /// stay within the truncation order.
    pub fn derive(&self, j: usize) -> TruncSeries {
        let mut out = TruncSeries::zero(&self.ctx);
        let unit = MultiIndex::unit(self.ctx.nvars, j);
        for (idx, c) in &self.coeffs {
            let e = idx.get(j);
            if e == 0 {
                continue;
            }
            let down = idx.checked_sub(&unit).expect("positive exponent");
            out.add_to_coeff(down, &c.scale(&Rat::from_int(e as i64)));
        }
        out
    }

    /// Derivative of every coefficient with respect to base variable `j` of
    /// the coefficient ring.
    pub fn derive_base(&self, j: usize) -> TruncSeries {
        let mut out = TruncSeries::zero(&self.ctx);
        for (idx, c) in &self.coeffs {
            out.set_coeff(idx.clone(), c.derive(j));
        }
        out
    }

    /// Evaluate the jet variables at zero, recovering the constant term.
    pub fn at_zero(&self) -> RingElem {
        self.constant_term()
    }

    /// Apply a ring substitution to every coefficient, keeping the jet
    /// variables fixed.
    pub fn map_coeffs(
        &self,
        target: &SeriesCtx,
        f: impl Fn(&RingElem) -> Result<RingElem>,
    ) -> Result<TruncSeries> {
        let mut out = TruncSeries::zero(target);
        for (idx, c) in &self.coeffs {
            out.set_coeff(idx.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Render with explicit signs and fractions, lowest degree first.
    pub fn render(&self, jet_names: &[String]) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (pos, (idx, c)) in self.coeffs.iter().enumerate() {
            let mono = render_monomial(idx, jet_names);
            let body = c.render();
            let (sign, body) = match body.strip_prefix('-') {
                Some(rest) if !rest.contains(" - ") && !rest.contains(" + ") => ("-", rest.to_string()),
                _ => ("+", body),
            };
            if pos == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            let needs_parens =
                body.contains(" + ") || body.contains(" - ") || body.contains('/');
            if mono.is_empty() {
                out.push_str(&body);
            } else if body == "1" {
                out.push_str(&mono);
            } else if needs_parens {
                out.push_str(&format!("({body})*{mono}"));
            } else {
                out.push_str(&format!("{body}*{mono}"));
            }
        }
        out
    }

    /// Default jet variable names: `X` for one variable, else `X_1..X_n`.
    pub fn default_names(n: usize, letter: char) -> Vec<String> {
        if n == 1 {
            vec![letter.to_string()]
        } else {
            (1..=n).map(|i| format!("{letter}_{i}")).collect()
        }
    }
}

impl PartialEq for TruncSeries {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.compatible(&other.ctx)
            && self.coeffs.len() == other.coeffs.len()
            && self
                .coeffs
                .iter()
                .all(|(i, c)| other.coeffs.get(i).is_some_and(|d| c == d))
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            self.render(&TruncSeries::default_names(self.ctx.nvars, 'X'))
        )
    }
}

/// Taylor expansion `f(x + X)` of a ring element: the jet of `f` truncated
/// at total degree `order`, with coefficients `(1/s!) d^s f / dx^s` in the
/// same ring.
pub fn taylor_shift(f: &RingElem, order: u32) -> TruncSeries {
    let n = f.ring().nvars();
    let ctx = SeriesCtx::new(f.ring().clone(), n, order);
    let mut out = TruncSeries::zero(&ctx);
    let mut derivs: BTreeMap<MultiIndex, RingElem> = BTreeMap::new();
    derivs.insert(MultiIndex::zero(n), f.clone());
    for idx in indices_up_to(n, order) {
        let d = match derivs.get(&idx) {
            Some(d) => d.clone(),
            None => {
                // step down along the first positive exponent
                let j = idx.exps().iter().position(|&e| e > 0).expect("nonzero");
                let prev = idx.checked_sub(&MultiIndex::unit(n, j)).expect("step");
                let d = derivs.get(&prev).expect("computed in graded order").derive(j);
                derivs.insert(idx.clone(), d.clone());
                d
            }
        };
        let coeff = d.scale(&idx.factorial().inv().expect("nonzero factorial"));
        out.set_coeff(idx, coeff);
    }
    out
}
