//! Localized polynomial function rings.
//!
//! A `FnRing` is `Q[x_1..x_n]` localized at a finite multiplicative set of
//! nonzero polynomial generators. This covers every coefficient ring in the
//! library: the plain rationals (no variables), polynomial chart rings, and
//! overlap rings such as `Q[y][1/y]`. Elements keep an explicit denominator
//! as a vector of generator exponents; equality is decided exactly by
//! cross-multiplication.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rat::Rat;

/// Ring descriptor: variable names plus multiplicative-set generators.
#[derive(Clone, PartialEq)]
pub struct FnRing {
    vars: Vec<String>,
    dens: Vec<Poly>,
}

impl FnRing {
    /// The trivial ring of rationals (no variables).
    pub fn rationals() -> Arc<FnRing> {
        Arc::new(FnRing {
            vars: Vec::new(),
            dens: Vec::new(),
        })
    }

    pub fn poly_ring(vars: &[&str]) -> Arc<FnRing> {
        Arc::new(FnRing {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            dens: Vec::new(),
        })
    }

    /// Localization of `Q[vars]` at the given nonzero generators.
    pub fn localized(vars: &[&str], dens: Vec<Poly>) -> Result<Arc<FnRing>> {
        let n = vars.len();
        for d in &dens {
            if d.is_zero() {
                return Err(Error::ValidationFailed(
                    "zero polynomial in a multiplicative set".into(),
                ));
            }
            if d.nvars() != n {
                return Err(Error::MixedContext(
                    "denominator generator variable count".into(),
                ));
            }
        }
        Ok(Arc::new(FnRing {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            dens,
        }))
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn denominators(&self) -> &[Poly] {
        &self.dens
    }

    pub fn same_ring(a: &Arc<FnRing>, b: &Arc<FnRing>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

impl fmt::Debug for FnRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[{}]", self.vars.join(","))?;
        if !self.dens.is_empty() {
            let gens: Vec<String> = self.dens.iter().map(|d| d.render(&self.vars)).collect();
            write!(f, "[1/({})]", gens.join("), 1/("))?;
        }
        Ok(())
    }
}

/// Element `num / prod dens[i]^exp[i]` of a localized polynomial ring.
#[derive(Clone)]
pub struct RingElem {
    ring: Arc<FnRing>,
    num: Poly,
    den: Vec<u32>,
}

impl RingElem {
    pub fn new(ring: Arc<FnRing>, num: Poly, den: Vec<u32>) -> Self {
        debug_assert_eq!(num.nvars(), ring.nvars());
        debug_assert_eq!(den.len(), ring.denominators().len());
        let mut e = RingElem { ring, num, den };
        e.reduce();
        e
    }

    pub fn zero(ring: &Arc<FnRing>) -> Self {
        RingElem {
            num: Poly::zero(ring.nvars()),
            den: vec![0; ring.denominators().len()],
            ring: ring.clone(),
        }
    }

    pub fn one(ring: &Arc<FnRing>) -> Self {
        RingElem::constant(ring, Rat::one())
    }

    pub fn constant(ring: &Arc<FnRing>, c: Rat) -> Self {
        RingElem {
            num: Poly::constant(ring.nvars(), c),
            den: vec![0; ring.denominators().len()],
            ring: ring.clone(),
        }
    }

    pub fn from_poly(ring: &Arc<FnRing>, p: Poly) -> Self {
        RingElem::new(ring.clone(), p, vec![0; ring.denominators().len()])
    }

    pub fn var(ring: &Arc<FnRing>, j: usize) -> Self {
        RingElem::from_poly(ring, Poly::var(ring.nvars(), j))
    }

    pub fn ring(&self) -> &Arc<FnRing> {
        &self.ring
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn den_exps(&self) -> &[u32] {
        &self.den
    }

    /// Structural key for canonical grouping; equal keys imply equal
    /// elements (the converse needs cross-multiplication).
    pub fn structural_key(&self) -> (Vec<u32>, Poly) {
        (self.den.clone(), self.num.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.iter().all(|&e| e == 0) && self.num.is_one()
    }

    /// `Some(c)` when the element is the rational constant `c`.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.den.iter().all(|&e| e == 0) {
            self.num.as_constant()
        } else if self.num.is_zero() {
            Some(Rat::zero())
        } else {
            None
        }
    }

    /// Cancel generator factors out of the numerator.
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.iter_mut().for_each(|e| *e = 0);
            return;
        }
        for (i, d) in self.ring.denominators().iter().enumerate() {
            while self.den[i] > 0 {
                match self.num.try_exact_div(d) {
                    Some(q) => {
                        self.num = q;
                        self.den[i] -= 1;
                    }
                    None => break,
                }
            }
        }
    }

    fn check_ring(&self, other: &RingElem) {
        assert!(
            FnRing::same_ring(&self.ring, &other.ring),
            "ring mismatch: {:?} vs {:?}",
            self.ring,
            other.ring
        );
    }

    /// Denominator as an explicit polynomial.
    pub fn den_poly(&self) -> Poly {
        let mut p = Poly::one(self.ring.nvars());
        for (i, d) in self.ring.denominators().iter().enumerate() {
            p = p.mul(&d.pow(self.den[i]));
        }
        p
    }

    pub fn add(&self, other: &RingElem) -> RingElem {
        self.check_ring(other);
        let den: Vec<u32> = self
            .den
            .iter()
            .zip(&other.den)
            .map(|(a, b)| *a.max(b))
            .collect();
        let scale_up = |e: &RingElem| {
            let mut p = e.num.clone();
            for (i, d) in e.ring.denominators().iter().enumerate() {
                p = p.mul(&d.pow(den[i] - e.den[i]));
            }
            p
        };
        RingElem::new(self.ring.clone(), scale_up(self).add(&scale_up(other)), den)
    }

    pub fn sub(&self, other: &RingElem) -> RingElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RingElem {
        RingElem {
            ring: self.ring.clone(),
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RingElem) -> RingElem {
        self.check_ring(other);
        let den = self
            .den
            .iter()
            .zip(&other.den)
            .map(|(a, b)| a + b)
            .collect();
        RingElem::new(self.ring.clone(), self.num.mul(&other.num), den)
    }

    pub fn scale(&self, k: &Rat) -> RingElem {
        RingElem {
            ring: self.ring.clone(),
            num: self.num.scale(k),
            den: if k.is_zero() {
                vec![0; self.den.len()]
            } else {
                self.den.clone()
            },
        }
    }

    /// Multiplicative inverse when the element is a unit: the numerator must
    /// reduce to a nonzero constant times generator factors.
    pub fn try_inv(&self) -> Result<RingElem> {
        let mut residual = self.num.clone();
        let mut pulled = vec![0u32; self.den.len()];
        if residual.is_zero() {
            return Err(Error::NotAUnit("0".into()));
        }
        for (i, d) in self.ring.denominators().iter().enumerate() {
            while let Some(q) = residual.try_exact_div(d) {
                residual = q;
                pulled[i] += 1;
            }
        }
        let c = residual.as_constant().ok_or_else(|| {
            Error::NotAUnit(self.render())
        })?;
        if c.is_zero() {
            return Err(Error::NotAUnit("0".into()));
        }
        // self = c * prod d^pulled / prod d^den  =>  inverse below
        let mut num = Poly::constant(self.ring.nvars(), c.inv()?);
        for (i, d) in self.ring.denominators().iter().enumerate() {
            num = num.mul(&d.pow(self.den[i]));
        }
        Ok(RingElem::new(self.ring.clone(), num, pulled))
    }

    pub fn is_unit(&self) -> bool {
        self.try_inv().is_ok()
    }

    pub fn pow_i(&self, k: i64) -> Result<RingElem> {
        if k < 0 {
            return self.try_inv()?.pow_i(-k);
        }
        let mut out = RingElem::one(&self.ring);
        for _ in 0..k {
            out = out.mul(self);
        }
        Ok(out)
    }

    /// Partial derivative with respect to base variable `j`; the quotient
    /// rule keeps the result inside the ring.
    pub fn derive(&self, j: usize) -> RingElem {
        let dens = self.ring.denominators();
        // d(num * prod d_i^-e_i) over the common denominator prod d_i^(e_i+1)
        let mut lead = self.num.derive(j);
        for d in dens {
            lead = lead.mul(d);
        }
        let mut correction = Poly::zero(self.ring.nvars());
        for (i, d) in dens.iter().enumerate() {
            if self.den[i] == 0 {
                continue;
            }
            let mut term = self
                .num
                .mul(&d.derive(j))
                .scale(&Rat::from_int(self.den[i] as i64));
            for (k, other) in dens.iter().enumerate() {
                if k != i {
                    term = term.mul(other);
                }
            }
            correction = correction.add(&term);
        }
        let den = self.den.iter().map(|e| e + 1).collect();
        RingElem::new(self.ring.clone(), lead.sub(&correction), den)
    }

    /// Exact evaluation at a rational point. Every multiplicative-set
    /// generator must be nonzero at the point.
    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.ring.nvars() {
            return Err(Error::MixedContext("evaluation point arity".into()));
        }
        let mut den_val = Rat::one();
        for (i, d) in self.ring.denominators().iter().enumerate() {
            let v = d.eval(point);
            if v.is_zero() {
                return Err(Error::DenominatorVanishes(d.render(self.ring.var_names())));
            }
            den_val = den_val * v.pow_i(self.den[i] as i64)?;
        }
        Ok(self.num.eval(point) / den_val)
    }

    /// Substitute rational functions of a target ring for the base
    /// variables. Fails when a substituted denominator is not a unit of the
    /// target ring.
    pub fn substitute(&self, args: &[RingElem], target: &Arc<FnRing>) -> Result<RingElem> {
        if args.len() != self.ring.nvars() {
            return Err(Error::MixedContext("substitution arity".into()));
        }
        let eval_poly = |p: &Poly| -> RingElem {
            let mut acc = RingElem::zero(target);
            for (idx, c) in p.terms() {
                let mut term = RingElem::constant(target, c.clone());
                for (j, &e) in idx.exps().iter().enumerate() {
                    for _ in 0..e {
                        term = term.mul(&args[j]);
                    }
                }
                acc = acc.add(&term);
            }
            acc
        };
        let mut out = eval_poly(&self.num);
        for (i, d) in self.ring.denominators().iter().enumerate() {
            if self.den[i] == 0 {
                continue;
            }
            let image = eval_poly(d);
            let inv = image.try_inv().map_err(|_| {
                Error::DenominatorVanishes(format!(
                    "{} is not a unit after substitution",
                    d.render(self.ring.var_names())
                ))
            })?;
            out = out.mul(&inv.pow_i(self.den[i] as i64)?);
        }
        Ok(out)
    }

    pub fn render(&self) -> String {
        let names = self.ring.var_names();
        let num = self.num.render(names);
        let den_parts: Vec<String> = self
            .ring
            .denominators()
            .iter()
            .zip(&self.den)
            .filter(|(_, &e)| e > 0)
            .map(|(d, &e)| {
                let base = d.render(names);
                let needs_parens = d.terms().count() > 1;
                let base = if needs_parens {
                    format!("({base})")
                } else {
                    base
                };
                if e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect();
        if den_parts.is_empty() {
            num
        } else {
            let num = if self.num.terms().count() > 1 {
                format!("({num})")
            } else {
                num
            };
            format!("{num}/{}", den_parts.join("/"))
        }
    }
}

impl PartialEq for RingElem {
    /// Exact equality by cross-multiplication: a/b = c/d iff ad - cb = 0.
    fn eq(&self, other: &Self) -> bool {
        if !FnRing::same_ring(&self.ring, &other.ring) {
            return false;
        }
        self.num.mul(&other.den_poly()) == other.num.mul(&self.den_poly())
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laurent_y() -> Arc<FnRing> {
        FnRing::localized(&["y"], vec![Poly::var(1, 0)]).unwrap()
    }

    #[test]
    fn eval_and_vanishing() {
        let ring = laurent_y();
        let inv_y = RingElem::new(ring.clone(), Poly::one(1), vec![1]); // 1/y
        assert_eq!(inv_y.eval(&[Rat::from_int(2)]).unwrap(), Rat::new(1, 2));
        assert!(matches!(
            inv_y.eval(&[Rat::zero()]),
            Err(Error::DenominatorVanishes(_))
        ));

        let ring = FnRing::poly_ring(&["x"]);
        let p = RingElem::from_poly(&ring, Poly::var(1, 0).pow(2).sub(&Poly::one(1)));
        assert_eq!(p.eval(&[Rat::from_int(1)]).unwrap(), Rat::zero());
    }

    #[test]
    fn quotient_rule() {
        let ring = laurent_y();
        let inv_y = RingElem::new(ring.clone(), Poly::one(1), vec![1]);
        // d/dy (1/y) = -1/y^2
        let d = inv_y.derive(0);
        let expected = RingElem::new(ring.clone(), Poly::one(1).neg(), vec![2]);
        assert_eq!(d, expected);
        // d/dy (-1/y) = 1/y^2
        let d2 = inv_y.neg().derive(0);
        assert_eq!(d2, expected.neg());

        let xring = FnRing::poly_ring(&["x"]);
        let x3 = RingElem::from_poly(&xring, Poly::var(1, 0).pow(3));
        let expected = RingElem::from_poly(&xring, Poly::var(1, 0).pow(2).scale(&Rat::from_int(3)));
        assert_eq!(x3.derive(0), expected);
    }

    #[test]
    fn reduction_cancels_generator_factors() {
        let ring = laurent_y();
        let y = Poly::var(1, 0);
        // y^3 / y^2 reduces to y
        let e = RingElem::new(ring.clone(), y.pow(3), vec![2]);
        assert_eq!(e.den_exps(), &[0]);
        assert_eq!(e.numerator(), &y);
    }

    #[test]
    fn units_and_inverses() {
        let ring = laurent_y();
        let y = RingElem::var(&ring, 0);
        let inv = y.try_inv().unwrap();
        assert!(y.mul(&inv).is_one());
        // -2y^2 is a unit
        let u = y.mul(&y).scale(&Rat::from_int(-2));
        assert!(u.mul(&u.try_inv().unwrap()).is_one());
        // 1 + y is not
        let bad = y.add(&RingElem::one(&ring));
        assert!(matches!(bad.try_inv(), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn substitution_into_overlap() {
        // H(x) = -1/x substituted with x = G(y) = -1/y gives y.
        let xring = FnRing::localized(&["x"], vec![Poly::var(1, 0)]).unwrap();
        let yring = laurent_y();
        let h = RingElem::new(xring.clone(), Poly::one(1).neg(), vec![1]); // -1/x
        let g = RingElem::new(yring.clone(), Poly::one(1).neg(), vec![1]); // -1/y
        let result = h.substitute(&[g], &yring).unwrap();
        assert_eq!(result, RingElem::var(&yring, 0));
    }

    #[test]
    fn rendering() {
        let ring = laurent_y();
        let e = RingElem::new(ring.clone(), Poly::one(1).neg(), vec![2]);
        assert_eq!(e.render(), "-1/y^2");
    }
}
