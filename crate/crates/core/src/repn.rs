//! Finite-dimensional rational representations of the Lie algebra `L+` and
//! their integration to the truncated automorphism group.
//!
//! A representation is given by generator matrices `rho(X^s d/dX_i)` for
//! `1 <= |s| <= N_rep` together with a weight basis for the torus. Degrees
//! above `N_rep` act by zero. Integration factors an automorphism into a
//! linear part and a unipotent part: the unipotent part integrates through
//! the matrix exponential of the logarithm's image, the linear part through
//! an elementary-matrix factorization with the diagonal acting by integer
//! torus weights.
//!
//! With `compose(f, g)` substituting `g` into `f`, integration is
//! contravariant: `integrate(compose(f, g)) = integrate(g) * integrate(f)`.
//! This is the orientation that reproduces the closed-form matrices of both
//! built-in rank-2 families.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::idx::{indices_of_degree, indices_up_to, MultiIndex};
use crate::jets::{aut_log, JetAutomorphism, JetDerivation};
use crate::matrix::{Matrix, QMatrix, RMatrix};
use crate::rat::Rat;
use crate::report::CheckReport;
use crate::ring::{FnRing, RingElem};

/// Generator key: the monomial exponent `s` and the direction `i` of
/// `X^s d/dX_i`.
pub type GenKey = (MultiIndex, usize);

#[derive(Clone)]
pub struct RepSpec {
    name: String,
    nvars: usize,
    dim: usize,
    nilpotency_order: u32,
    generators: BTreeMap<GenKey, QMatrix>,
    /// Integer torus weights per weight-basis vector, per direction.
    weights: Vec<Vec<i64>>,
    /// Columns are the weight-basis vectors; identity for the built-ins.
    weight_basis: QMatrix,
}

impl RepSpec {
    /// Build and validate. Fails with `ValidationFailed` listing the first
    /// violated invariant.
    pub fn new(
        name: impl Into<String>,
        nvars: usize,
        dim: usize,
        nilpotency_order: u32,
        generators: BTreeMap<GenKey, QMatrix>,
        weights: Vec<Vec<i64>>,
        weight_basis: QMatrix,
    ) -> Result<Self> {
        let rep = RepSpec::unchecked(
            name,
            nvars,
            dim,
            nilpotency_order,
            generators,
            weights,
            weight_basis,
        );
        let report = rep.validate();
        if report.passed {
            Ok(rep)
        } else {
            let first = report
                .findings
                .first()
                .map(|f| format!("{}: expected {}, got {}", f.context, f.expected, f.actual))
                .unwrap_or_default();
            Err(Error::ValidationFailed(format!("{}: {first}", rep.name)))
        }
    }

    /// Build without validating; for mutation tests and diagnostics.
    pub fn unchecked(
        name: impl Into<String>,
        nvars: usize,
        dim: usize,
        nilpotency_order: u32,
        generators: BTreeMap<GenKey, QMatrix>,
        weights: Vec<Vec<i64>>,
        weight_basis: QMatrix,
    ) -> Self {
        RepSpec {
            name: name.into(),
            nvars,
            dim,
            nilpotency_order,
            generators,
            weights,
            weight_basis,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Degrees above this act by zero (`m^N_rep L+` annihilates the module).
    pub fn nilpotency_order(&self) -> u32 {
        self.nilpotency_order
    }

    pub fn generators(&self) -> &BTreeMap<GenKey, QMatrix> {
        &self.generators
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn weight_basis(&self) -> &QMatrix {
        &self.weight_basis
    }

    /// `rho(X^s d/dX_i)`; zero when unstored or beyond the nilpotency order.
    pub fn generator(&self, s: &MultiIndex, i: usize) -> QMatrix {
        self.generators
            .get(&(s.clone(), i))
            .cloned()
            .unwrap_or_else(|| Matrix::zero(self.dim, self.dim, &Rat::zero()))
    }

    /// Check bracket consistency, torus rationality and nilpotency of the
    /// off-diagonal linear generators. Violations are findings.
    pub fn validate(&self) -> CheckReport {
        let mut report = CheckReport::new(format!("rep_validate({})", self.name));
        let render = |m: &QMatrix| m.render(|r| r.to_string());

        for ((s, _), m) in &self.generators {
            let ok = s.len() == self.nvars
                && s.degree() >= 1
                && s.degree() <= self.nilpotency_order
                && m.rows() == self.dim
                && m.cols() == self.dim;
            report.require(
                format!("generator X^{s:?} shape within nilpotency order"),
                ok,
                format!("degree {} dim {}x{}", s.degree(), m.rows(), m.cols()),
            );
        }

        // bracket table: [X^s di, X^t dj] = t_i X^(s+t-e_i) dj - s_j X^(s+t-e_j) di
        let keys: Vec<GenKey> = self.generators.keys().cloned().collect();
        for (s, i) in &keys {
            for (t, j) in &keys {
                let lhs = {
                    let a = self.generator(s, *i);
                    let b = self.generator(t, *j);
                    a.mul(&b).sub(&b.mul(&a))
                };
                let mut rhs = Matrix::zero(self.dim, self.dim, &Rat::zero());
                let ti = t.get(*i);
                if ti > 0 {
                    let idx = s.add(t).checked_sub(&MultiIndex::unit(self.nvars, *i)).unwrap();
                    rhs = rhs.add(
                        &self
                            .truncated_generator(&idx, *j)
                            .scale_rat(&Rat::from_int(ti as i64)),
                    );
                }
                let sj = s.get(*j);
                if sj > 0 {
                    let idx = s.add(t).checked_sub(&MultiIndex::unit(self.nvars, *j)).unwrap();
                    rhs = rhs.sub(
                        &self
                            .truncated_generator(&idx, *i)
                            .scale_rat(&Rat::from_int(sj as i64)),
                    );
                }
                report.check(
                    format!("bracket [X^{s:?} d_{i}, X^{t:?} d_{j}]"),
                    &rhs,
                    &lhs,
                    render,
                );
            }
        }

        // torus rationality in the declared weight basis
        match self.weight_basis.try_inverse() {
            Err(_) => report.require("weight basis invertible", false, "singular basis"),
            Ok(b_inv) => {
                for j in 0..self.nvars {
                    let euler = self.generator(&MultiIndex::unit(self.nvars, j), j);
                    let diag = b_inv.mul(&euler).mul(&self.weight_basis);
                    for v in 0..self.dim {
                        for w in 0..self.dim {
                            if v == w {
                                report.check(
                                    format!("weight of basis vector {v} under X_{j} d/dX_{j}"),
                                    &Rat::from_int(self.weights[v][j]),
                                    diag.at(v, v),
                                    Rat::to_string,
                                );
                            } else if !diag.at(v, w).is_zero() {
                                report.require(
                                    format!("X_{j} d/dX_{j} diagonal in the weight basis"),
                                    false,
                                    format!("entry ({v},{w}) = {}", diag.at(v, w)),
                                );
                            }
                        }
                    }
                }
            }
        }

        // off-diagonal linear generators are nilpotent
        for i in 0..self.nvars {
            for j in 0..self.nvars {
                if i == j {
                    continue;
                }
                let g = self.generator(&MultiIndex::unit(self.nvars, j), i);
                let mut p = Matrix::identity(self.dim, &Rat::zero());
                for _ in 0..self.dim {
                    p = p.mul(&g);
                }
                report.require(
                    format!("rho(X_{j} d/dX_{i}) nilpotent"),
                    p.is_zero(),
                    render(&p),
                );
            }
        }

        report
    }

    fn truncated_generator(&self, s: &MultiIndex, i: usize) -> QMatrix {
        if s.degree() > self.nilpotency_order {
            Matrix::zero(self.dim, self.dim, &Rat::zero())
        } else {
            self.generator(s, i)
        }
    }

    fn embed(&self, m: &QMatrix, ring: &Arc<FnRing>) -> RMatrix {
        m.map(|r| RingElem::constant(ring, r.clone()))
    }

    /// Linear extension to a derivation with ring coefficients: monomials of
    /// degree above the nilpotency order contribute zero.
    pub fn apply(&self, d: &JetDerivation) -> Result<RMatrix> {
        if d.ctx().nvars != self.nvars {
            return Err(Error::MixedContext(
                "derivation variable count differs from representation".into(),
            ));
        }
        let ring = &d.ctx().ring;
        let zero = RingElem::zero(ring);
        let mut out = Matrix::zero(self.dim, self.dim, &zero);
        for (i, comp) in d.components().iter().enumerate() {
            if !comp.has_zero_constant_term() {
                return Err(Error::NotInLplus(i));
            }
            for (s, c) in comp.coeffs() {
                if s.degree() > self.nilpotency_order {
                    continue;
                }
                let gen = self.generator(s, i);
                out = out.add(&self.embed(&gen, ring).scale_elem(c));
            }
        }
        Ok(out)
    }

    /// Integrate the representation over an automorphism.
    ///
    /// Factors `f = compose(linear, unipotent)` and returns
    /// `rho(unipotent) * rho(linear)` per the contravariant orientation.
    pub fn integrate(&self, f: &JetAutomorphism) -> Result<RMatrix> {
        if f.ctx().nvars != self.nvars {
            return Err(Error::MixedContext(
                "automorphism variable count differs from representation".into(),
            ));
        }
        if f.ctx().order < self.nilpotency_order {
            return Err(Error::OrderTooSmall {
                needed: self.nilpotency_order,
                got: f.ctx().order,
            });
        }
        let ring = &f.ctx().ring;
        let lin = f.linear_part();
        let lin_inv = lin
            .try_inverse()
            .map_err(|_| Error::NonInvertibleLinearPart)?;
        let lin_inv_aut = JetAutomorphism::from_linear(f.ctx(), &lin_inv)?;
        let unipotent = lin_inv_aut.compose(f)?;
        let d = aut_log(&unipotent)?;
        let rho_unipotent = self.apply(&d)?.exp_nilpotent()?;
        let rho_linear = self.integrate_linear(&lin, ring)?;
        Ok(rho_unipotent.mul(&rho_linear))
    }

    /// Integrate a linear automorphism by factoring its matrix into
    /// transvections and a unit diagonal via row elimination.
    fn integrate_linear(&self, lin: &RMatrix, ring: &Arc<FnRing>) -> Result<RMatrix> {
        let n = self.nvars;
        let mut work = lin.clone();
        // (i, j, c): row_i += c * row_j applied to `work`
        let mut ops: Vec<(usize, usize, RingElem)> = Vec::new();
        let apply_op = |work: &mut RMatrix, i: usize, j: usize, c: &RingElem| {
            for col in 0..n {
                let v = work.at(i, col).add(&c.mul(work.at(j, col)));
                *work.at_mut(i, col) = v;
            }
        };
        for col in 0..n {
            if !work.at(col, col).is_unit() {
                let fix = (0..n).find(|&r| {
                    r != col && work.at(col, col).add(work.at(r, col)).is_unit()
                });
                match fix {
                    Some(r) => {
                        let one = RingElem::one(ring);
                        apply_op(&mut work, col, r, &one);
                        ops.push((col, r, one));
                    }
                    None => {
                        return Err(Error::FactorizationFailed(format!(
                            "no unit pivot in column {col}"
                        )))
                    }
                }
            }
            let pivot_inv = work.at(col, col).try_inv()?;
            for r in 0..n {
                if r == col || work.at(r, col).is_zero() {
                    continue;
                }
                let c = work.at(r, col).mul(&pivot_inv).neg();
                apply_op(&mut work, r, col, &c);
                ops.push((r, col, c));
            }
        }
        // work is now diagonal with unit entries: lin = E_1^-1 .. E_m^-1 D,
        // so rho(lin) = rho(D) * rho(E_m^-1) * .. * rho(E_1^-1)
        let mut acc = self.weight_diagonal(&work, ring)?;
        for (i, j, c) in ops.iter().rev() {
            // E^-1 = I - c E_{ij} integrates to exp(-c rho(X_j d/dX_i))
            let gen = self.generator(&MultiIndex::unit(n, *j), *i);
            let m = self.embed(&gen, ring).scale_elem(&c.neg());
            acc = acc.mul(&m.exp_nilpotent()?);
        }
        Ok(acc)
    }

    /// `rho(diag(d_1..d_n))`: each weight-basis vector scales by
    /// `prod_j d_j^(weight_j)`.
    fn weight_diagonal(&self, diag: &RMatrix, ring: &Arc<FnRing>) -> Result<RMatrix> {
        let zero = RingElem::zero(ring);
        let mut scaled = Matrix::zero(self.dim, self.dim, &zero);
        for v in 0..self.dim {
            let mut factor = RingElem::one(ring);
            for j in 0..self.nvars {
                let base = diag.at(j, j);
                factor = factor.mul(&base.pow_i(self.weights[v][j])?);
            }
            *scaled.at_mut(v, v) = factor;
        }
        if self.weight_basis.is_identity() {
            return Ok(scaled);
        }
        let b = self.embed(&self.weight_basis, ring);
        let b_inv = self.embed(&self.weight_basis.try_inverse()?, ring);
        Ok(b.mul(&scaled).mul(&b_inv))
    }

    /// Tensor product: `rho(a) = rho1(a) (x) I + I (x) rho2(a)`, weights add.
    pub fn tensor(&self, other: &RepSpec) -> Result<RepSpec> {
        if self.nvars != other.nvars {
            return Err(Error::MixedContext(
                "tensor factors over different variable counts".into(),
            ));
        }
        let n_rep = self.nilpotency_order.max(other.nilpotency_order);
        let dim = self.dim * other.dim;
        let id1 = Matrix::identity(self.dim, &Rat::zero());
        let id2 = Matrix::identity(other.dim, &Rat::zero());
        let mut generators = BTreeMap::new();
        for deg in 1..=n_rep {
            for s in indices_of_degree(self.nvars, deg) {
                for i in 0..self.nvars {
                    let a = self.truncated_generator(&s, i);
                    let b = other.truncated_generator(&s, i);
                    let m = a.kron(&id2).add(&id1.kron(&b));
                    if !m.is_zero() {
                        generators.insert((s.clone(), i), m);
                    }
                }
            }
        }
        let mut weights = Vec::with_capacity(dim);
        for w1 in &self.weights {
            for w2 in &other.weights {
                weights.push(w1.iter().zip(w2).map(|(a, b)| a + b).collect());
            }
        }
        RepSpec::new(
            format!("{} (x) {}", self.name, other.name),
            self.nvars,
            dim,
            n_rep,
            generators,
            weights,
            self.weight_basis.kron(&other.weight_basis),
        )
    }

    /// Dual representation `rho*(a) = -rho(a)^T`, weights negate.
    pub fn dual(&self) -> Result<RepSpec> {
        let generators = self
            .generators
            .iter()
            .map(|(k, m)| (k.clone(), m.transpose().neg()))
            .collect();
        let weights = self
            .weights
            .iter()
            .map(|w| w.iter().map(|x| -x).collect())
            .collect();
        let basis = self.weight_basis.transpose().try_inverse()?;
        RepSpec::new(
            format!("{}*", self.name),
            self.nvars,
            self.dim,
            self.nilpotency_order,
            generators,
            weights,
            basis,
        )
    }
}

impl fmt::Debug for RepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RepSpec({}, n={}, dim={}, N={})",
            self.name, self.nvars, self.dim, self.nilpotency_order
        )
    }
}

fn e12(dim: usize) -> QMatrix {
    let mut m = Matrix::zero(dim, dim, &Rat::zero());
    *m.at_mut(0, 1) = Rat::one();
    m
}

fn diag2(a: i64, b: i64) -> QMatrix {
    Matrix::from_rows(vec![
        vec![Rat::from_int(a), Rat::zero()],
        vec![Rat::zero(), Rat::from_int(b)],
    ])
}

/// The first built-in rank-2 family: `X d/dX -> diag(m+1, m)`,
/// `X^2 d/dX -> E12`, higher degrees zero.
pub fn rho_family(m: i64) -> RepSpec {
    let mut generators = BTreeMap::new();
    generators.insert((MultiIndex::new(vec![1]), 0), diag2(m + 1, m));
    generators.insert((MultiIndex::new(vec![2]), 0), e12(2));
    RepSpec::new(
        format!("rho({m})"),
        1,
        2,
        2,
        generators,
        vec![vec![m + 1], vec![m]],
        Matrix::identity(2, &Rat::zero()),
    )
    .expect("rho family is consistent")
}

/// The second built-in rank-2 family: `X d/dX -> diag(m+2, m)`,
/// `X^2 d/dX -> 0`, `X^3 d/dX -> E12`, higher degrees zero.
pub fn sigma_family(m: i64) -> RepSpec {
    let mut generators = BTreeMap::new();
    generators.insert((MultiIndex::new(vec![1]), 0), diag2(m + 2, m));
    generators.insert((MultiIndex::new(vec![3]), 0), e12(2));
    RepSpec::new(
        format!("sigma({m})"),
        1,
        2,
        3,
        generators,
        vec![vec![m + 2], vec![m]],
        Matrix::identity(2, &Rat::zero()),
    )
    .expect("sigma family is consistent")
}

/// One-dimensional weight representation for `n = 1`: `X d/dX -> k`.
pub fn weight_rep(k: i64) -> RepSpec {
    let mut generators = BTreeMap::new();
    generators.insert(
        (MultiIndex::new(vec![1]), 0),
        Matrix::from_rows(vec![vec![Rat::from_int(k)]]),
    );
    RepSpec::new(
        format!("weight({k})"),
        1,
        1,
        1,
        generators,
        vec![vec![k]],
        Matrix::identity(1, &Rat::zero()),
    )
    .expect("weight rep is consistent")
}

/// The trace character of `gl_n`: `X_j d/dX_i -> delta_ij`, integrating to
/// the determinant. For `n = 1` this is `weight(1)`.
pub fn k_tr(nvars: usize) -> RepSpec {
    let mut generators = BTreeMap::new();
    for j in 0..nvars {
        generators.insert(
            (MultiIndex::unit(nvars, j), j),
            Matrix::from_rows(vec![vec![Rat::one()]]),
        );
    }
    RepSpec::new(
        "K_tr",
        nvars,
        1,
        1,
        generators,
        vec![vec![1; nvars]],
        Matrix::identity(1, &Rat::zero()),
    )
    .expect("trace character is consistent")
}

/// The trivial one-dimensional representation.
pub fn trivial_rep(nvars: usize) -> RepSpec {
    RepSpec::new(
        "trivial",
        nvars,
        1,
        1,
        BTreeMap::new(),
        vec![vec![0; nvars]],
        Matrix::identity(1, &Rat::zero()),
    )
    .expect("trivial rep is consistent")
}

/// Look up a built-in by name: `rho(m)`, `sigma(m)`, `weight(k)`, `K_tr`,
/// `trivial`.
pub fn builtin_rep(name: &str, param: Option<i64>, nvars: usize) -> Result<RepSpec> {
    match (name, param) {
        ("rho", Some(m)) => Ok(rho_family(m)),
        ("sigma", Some(m)) => Ok(sigma_family(m)),
        ("weight", Some(k)) => Ok(weight_rep(k)),
        ("K_tr" | "k_tr", _) => Ok(k_tr(nvars)),
        ("trivial", _) => Ok(trivial_rep(nvars)),
        _ => Err(Error::UnknownName(format!("{name}({param:?})"))),
    }
}

/// Enumerate the generator keys a representation of order `n_rep` stores.
pub fn generator_keys(nvars: usize, n_rep: u32) -> Vec<GenKey> {
    let mut keys = Vec::new();
    for s in indices_up_to(nvars, n_rep) {
        if s.degree() == 0 {
            continue;
        }
        for i in 0..nvars {
            keys.push((s.clone(), i));
        }
    }
    keys
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::aut_exp;
    use crate::poly::Poly;
    use crate::series::{SeriesCtx, TruncSeries};

    fn qctx(order: u32) -> SeriesCtx {
        SeriesCtx::rational(1, order)
    }

    fn xpow(ctx: &SeriesCtx, k: u32) -> TruncSeries {
        TruncSeries::var(ctx, 0).pow(k).unwrap()
    }

    fn qm(rows: &[&[Rat]]) -> QMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn builtins_validate() {
        for m in -2..=3 {
            assert!(rho_family(m).validate().passed);
            assert!(sigma_family(m).validate().passed);
        }
        assert!(k_tr(2).validate().passed);
        assert!(weight_rep(-3).validate().passed);
        assert_eq!(rho_family(1).nilpotency_order(), 2);
        assert_eq!(sigma_family(1).nilpotency_order(), 3);
        assert!(matches!(
            builtin_rep("nonsense", None, 1),
            Err(Error::UnknownName(_))
        ));
    }

    #[test]
    fn bracket_mutant_fails() {
        // rho_m torus with the E12 moved to degree 3: the bracket table
        // demands [X d/dX, X^3 d/dX] = 2 X^3 d/dX but the matrices give E12.
        let m = 1;
        let mut generators = BTreeMap::new();
        generators.insert((MultiIndex::new(vec![1]), 0), diag2(m + 1, m));
        generators.insert((MultiIndex::new(vec![3]), 0), e12(2));
        let mutant = RepSpec::unchecked(
            "mutant",
            1,
            2,
            3,
            generators,
            vec![vec![m + 1], vec![m]],
            Matrix::identity(2, &Rat::zero()),
        );
        let report = mutant.validate();
        assert!(!report.passed);
        assert!(report
            .findings
            .iter()
            .any(|f| f.context.contains("bracket")));
    }

    #[test]
    fn apply_linear_combination() {
        // rho_m on (2X + X^2) d/dX = [[2m+2, 1], [0, 2m]]
        let m = 3;
        let rep = rho_family(m);
        let ctx = qctx(3);
        let d = JetDerivation::single(
            xpow(&ctx, 1).scale_rat(&Rat::from_int(2)).add(&xpow(&ctx, 2)).unwrap(),
            0,
        );
        let result = rep.apply(&d).unwrap();
        let expected = qm(&[
            &[Rat::from_int(2 * m + 2), Rat::one()],
            &[Rat::zero(), Rat::from_int(2 * m)],
        ]);
        assert_eq!(result, expected.map(|r| RingElem::constant(&ctx.ring, r.clone())));

        // degree three acts by zero
        let d3 = JetDerivation::single(xpow(&ctx, 3), 0);
        assert!(rep.apply(&d3).unwrap().is_zero());
        assert!(rep.apply(&JetDerivation::zero(&ctx)).unwrap().is_zero());
    }

    fn aut_cubic(ctx: &SeriesCtx, a: Rat, b: Rat, c: Rat) -> JetAutomorphism {
        let img = TruncSeries::var(ctx, 0)
            .scale_rat(&a)
            .add(&xpow(ctx, 2).scale_rat(&b))
            .unwrap()
            .add(&xpow(ctx, 3).scale_rat(&c))
            .unwrap();
        JetAutomorphism::from_images(vec![img]).unwrap()
    }

    #[test]
    fn integrate_rho_closed_form() {
        // rho_m(aX + bX^2) = a^m [[a, b/a], [0, 1]]
        for m in [-2i64, 0, 1, 3] {
            let rep = rho_family(m);
            let ctx = qctx(2);
            let a = Rat::from_int(2);
            let b = Rat::new(-3, 2);
            let f = aut_cubic(&ctx, a.clone(), b.clone(), Rat::zero());
            let got = rep.integrate(&f).unwrap();
            let am = a.pow_i(m).unwrap();
            let expected = qm(&[
                &[&am * &a, &am * &(b.clone() / a.clone())],
                &[Rat::zero(), am.clone()],
            ]);
            assert_eq!(
                got,
                expected.map(|r| RingElem::constant(&ctx.ring, r.clone())),
                "m = {m}"
            );
        }
    }

    #[test]
    fn integrate_sigma_closed_form() {
        // sigma_m(aX + bX^2 + cX^3) = a^m [[a^2, c/a - b^2/a^2], [0, 1]]
        for m in [-1i64, 0, 2] {
            let rep = sigma_family(m);
            let ctx = qctx(3);
            let (a, b, c) = (Rat::from_int(3), Rat::from_int(2), Rat::new(1, 2));
            let f = aut_cubic(&ctx, a.clone(), b.clone(), c.clone());
            let got = rep.integrate(&f).unwrap();
            let am = a.pow_i(m).unwrap();
            let top_right =
                c.clone() / a.clone() - (b.clone() * b.clone()) / (a.clone() * a.clone());
            let expected = qm(&[
                &[&am * &(a.clone() * a.clone()), &am * &top_right],
                &[Rat::zero(), am.clone()],
            ]);
            assert_eq!(
                got,
                expected.map(|r| RingElem::constant(&ctx.ring, r.clone())),
                "m = {m}"
            );
        }
    }

    #[test]
    fn integrate_over_laurent_ring() {
        // the P1 transition jet y^-2 Y - y^-3 Y^2 + y^-4 Y^3 integrates to
        // y^-2m [[y^-2, -y^-1], [0, 1]] under rho_m
        let ring = FnRing::localized(&["y"], vec![Poly::var(1, 0)]).unwrap();
        let ctx = SeriesCtx::new(ring.clone(), 1, 3);
        let y = RingElem::var(&ring, 0);
        let ypow = |k: i64| y.pow_i(k).unwrap();
        let img = TruncSeries::var(&ctx, 0)
            .scale(&ypow(-2))
            .add(&TruncSeries::var(&ctx, 0).pow(2).unwrap().scale(&ypow(-3).neg()))
            .unwrap()
            .add(&TruncSeries::var(&ctx, 0).pow(3).unwrap().scale(&ypow(-4)))
            .unwrap();
        let phi = JetAutomorphism::from_images(vec![img]).unwrap();
        for m in [-2i64, 1, 3] {
            let rep = rho_family(m);
            let got = rep.integrate(&phi).unwrap();
            let scale = ypow(-2 * m);
            let expected = Matrix::from_rows(vec![
                vec![scale.mul(&ypow(-2)), scale.mul(&ypow(-1)).neg()],
                vec![RingElem::zero(&ring), scale.clone()],
            ]);
            assert_eq!(got, expected, "m = {m}");
        }
    }

    #[test]
    fn integration_is_contravariant() {
        let rep = rho_family(2);
        let ctx = qctx(2);
        let f = aut_cubic(&ctx, Rat::from_int(2), Rat::from_int(1), Rat::zero());
        let g = aut_cubic(&ctx, Rat::new(1, 3), Rat::from_int(-2), Rat::zero());
        let lhs = rep.integrate(&f.compose(&g).unwrap()).unwrap();
        let rhs = rep.integrate(&g).unwrap().mul(&rep.integrate(&f).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn exponential_compatibility() {
        let rep = sigma_family(1);
        let ctx = qctx(3);
        let d = JetDerivation::single(
            xpow(&ctx, 2).scale_rat(&Rat::from_int(2)).add(&xpow(&ctx, 3)).unwrap(),
            0,
        );
        let lhs = rep.integrate(&aut_exp(&d).unwrap()).unwrap();
        let rhs = rep.apply(&d).unwrap().exp_nilpotent().unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn tensor_and_dual() {
        // K_tr (x) K_tr sends X d/dX to 2
        let t = k_tr(1).tensor(&k_tr(1)).unwrap();
        let g = t.generator(&MultiIndex::new(vec![1]), 0);
        assert_eq!(g.at(0, 0), &Rat::from_int(2));

        // dual of rho_m: X d/dX -> diag(-m-1, -m)
        let m = 2;
        let dual = rho_family(m).dual().unwrap();
        assert!(dual.validate().passed);
        let g = dual.generator(&MultiIndex::new(vec![1]), 0);
        assert_eq!(g, diag2(-m - 1, -m));

        // integrate(tensor) = kron of integrates
        let ctx = qctx(3);
        let f = aut_cubic(&ctx, Rat::from_int(2), Rat::from_int(3), Rat::from_int(-1));
        let r1 = rho_family(1);
        let r2 = sigma_family(0);
        let t = r1.tensor(&r2).unwrap();
        let lhs = t.integrate(&f).unwrap();
        let rhs = r1.integrate(&f).unwrap().kron(&r2.integrate(&f).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn weight_rep_integrates_to_power_of_linear_part() {
        let ctx = qctx(2);
        for k in [-3i64, 0, 2] {
            let rep = weight_rep(k);
            let a = Rat::new(2, 3);
            let f = aut_cubic(&ctx, a.clone(), Rat::from_int(1), Rat::zero());
            let got = rep.integrate(&f).unwrap();
            assert_eq!(got.at(0, 0).as_rat().unwrap(), a.pow_i(k).unwrap());
        }
    }

    #[test]
    fn integrate_requires_enough_order() {
        let rep = sigma_family(1);
        let ctx = qctx(2); // below N_rep = 3
        let f = aut_cubic(&ctx, Rat::one(), Rat::one(), Rat::zero());
        assert!(matches!(
            rep.integrate(&f),
            Err(Error::OrderTooSmall { needed: 3, got: 2 })
        ));
    }
}
