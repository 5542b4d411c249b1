//! Sparse multivariate polynomials over the rationals.

use std::collections::BTreeMap;
use std::fmt;

use crate::idx::MultiIndex;
use crate::rat::Rat;

/// Polynomial in `nvars` variables; zero coefficients are never stored, so
/// structural equality is mathematical equality. The ordering is
/// structural, used only for canonical grouping.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<MultiIndex, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(MultiIndex::zero(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rat::one())
    }

    /// The variable `x_j`.
    pub fn var(nvars: usize, j: usize) -> Self {
        Poly::monomial(MultiIndex::unit(nvars, j), Rat::one())
    }

    pub fn monomial(idx: MultiIndex, c: Rat) -> Self {
        let mut p = Poly::zero(idx.len());
        if !c.is_zero() {
            p.terms.insert(idx, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&MultiIndex::zero(self.nvars))
                .is_some_and(Rat::is_one)
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&MultiIndex::zero(self.nvars)) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> Rat {
        self.terms.get(idx).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    fn insert(&mut self, idx: MultiIndex, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.insert(idx.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (i.clone(), -c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                out.insert(i.add(j), a * b);
            }
        }
        out
    }

    pub fn scale(&self, k: &Rat) -> Poly {
        if k.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (i.clone(), c * k))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative with respect to variable `j`.
    pub fn derive(&self, j: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (idx, c) in &self.terms {
            let e = idx.get(j);
            if e == 0 {
                continue;
            }
            let down = idx
                .checked_sub(&MultiIndex::unit(self.nvars, j))
                .expect("positive exponent");
            out.insert(down, c * &Rat::from_int(e as i64));
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        debug_assert_eq!(point.len(), self.nvars);
        let mut acc = Rat::zero();
        for (idx, c) in &self.terms {
            let mut term = c.clone();
            for (j, &e) in idx.exps().iter().enumerate() {
                for _ in 0..e {
                    term = term * point[j].clone();
                }
            }
            acc += term;
        }
        acc
    }

    /// Exact division: `Some(q)` with `self = q * d`, or `None` when `self`
    /// is not a multiple of `d`. Single-divisor multivariate division; the
    /// remainder vanishes exactly when `d` divides `self`.
    pub fn try_exact_div(&self, d: &Poly) -> Option<Poly> {
        debug_assert_eq!(self.nvars, d.nvars);
        if d.is_zero() {
            return None;
        }
        let (lead_idx, lead_coeff) = d.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((idx, c)) = rem.terms.iter().next_back() {
            let ratio_idx = idx.checked_sub(lead_idx)?;
            let ratio = c.clone() / lead_coeff.clone();
            let mono = Poly::monomial(ratio_idx, ratio);
            rem = rem.sub(&mono.mul(d));
            quot = quot.add(&mono);
        }
        Some(quot)
    }

    /// Substitute `args[j]` for variable `j`; `args` live in `target_nvars`
    /// variables. Used for composing rational coordinate changes.
    pub fn substitute(&self, args: &[Poly], target_nvars: usize) -> Poly {
        debug_assert_eq!(args.len(), self.nvars);
        let mut out = Poly::zero(target_nvars);
        for (idx, c) in &self.terms {
            let mut term = Poly::constant(target_nvars, c.clone());
            for (j, &e) in idx.exps().iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&args[j]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Render with the given variable names, leading term first.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (pos, (idx, c)) in self.terms.iter().rev().enumerate() {
            let mono = render_monomial(idx, names);
            let abs = if c.is_negative() { -c } else { c.clone() };
            let lead = if pos == 0 {
                if c.is_negative() { "-" } else { "" }.to_string()
            } else if c.is_negative() {
                " - ".to_string()
            } else {
                " + ".to_string()
            };
            out.push_str(&lead);
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }
}

pub(crate) fn render_monomial(idx: &MultiIndex, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (j, &e) in idx.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[j].clone()),
            _ => parts.push(format!("{}^{}", names[j], e)),
        }
    }
    parts.join("*")
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|j| format!("x{j}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(1, 0)
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let p = x().add(&Poly::one(1)); // x + 1
        let q = x().sub(&Poly::one(1)); // x - 1
        let prod = p.mul(&q);
        let expected = x().mul(&x()).sub(&Poly::one(1));
        assert_eq!(prod, expected);
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn derivative() {
        let p = x().pow(3); // x^3
        assert_eq!(p.derive(0), x().pow(2).scale(&Rat::from_int(3)));
        assert!(Poly::one(1).derive(0).is_zero());
    }

    #[test]
    fn evaluation() {
        let p = x().pow(2).sub(&Poly::one(1));
        assert_eq!(p.eval(&[Rat::from_int(1)]), Rat::zero());
        assert_eq!(p.eval(&[Rat::from_int(3)]), Rat::from_int(8));
    }

    #[test]
    fn exact_division() {
        let p = x().pow(2).sub(&Poly::one(1));
        let d = x().sub(&Poly::one(1));
        let q = p.try_exact_div(&d).unwrap();
        assert_eq!(q, x().add(&Poly::one(1)));
        assert!(p.try_exact_div(&x()).is_none());
    }

    #[test]
    fn substitution() {
        // p(x) = x^2, x -> y + 1 in one variable y
        let p = x().pow(2);
        let arg = Poly::var(1, 0).add(&Poly::one(1));
        let q = p.substitute(&[arg], 1);
        let y = Poly::var(1, 0);
        assert_eq!(
            q,
            y.pow(2).add(&y.scale(&Rat::from_int(2))).add(&Poly::one(1))
        );
    }

    #[test]
    fn rendering() {
        let p = x().pow(2).scale(&Rat::new(1, 2)).sub(&Poly::one(1));
        assert_eq!(p.render(&["x".into()]), "1/2*x^2 - 1");
    }
}
