//! Multi-indices of monomial exponents.

use std::cmp::Ordering;
use std::fmt;

use crate::rat::Rat;

/// Exponent tuple `s = (s_1, .., s_n)` with the graded-lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        MultiIndex(exps)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The unit index with a single 1 in position `j`.
    pub fn unit(n: usize, j: usize) -> Self {
        let mut e = vec![0; n];
        e[j] = 1;
        MultiIndex(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0[j]
    }

    /// Total degree |s|.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// s! = s_1! .. s_n! as an exact rational.
    pub fn factorial(&self) -> Rat {
        let mut acc = Rat::one();
        for &e in &self.0 {
            acc = acc * Rat::factorial(e);
        }
        acc
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Componentwise difference, `None` if any entry would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        debug_assert_eq!(self.len(), other.len());
        let mut out = Vec::with_capacity(self.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(MultiIndex(out))
    }

    /// All indices t with t <= s componentwise, in graded-lex order.
    pub fn divisors(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zero(self.len())];
        for j in 0..self.len() {
            let mut next = Vec::new();
            for t in &out {
                for e in 0..=self.0[j] {
                    let mut v = t.0.clone();
                    v[j] = e;
                    next.push(MultiIndex(v));
                }
            }
            out = next;
        }
        out.sort();
        out
    }
}

/// All multi-indices in `n` variables with total degree at most `max_degree`,
/// in graded-lex order. The basis of `K[X]/m^(N+1)` when `max_degree = N`.
pub fn indices_up_to(n: usize, max_degree: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        collect_of_degree(n, d, &mut Vec::new(), &mut out);
    }
    out
}

/// All multi-indices in `n` variables with total degree exactly `degree`.
pub fn indices_of_degree(n: usize, degree: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    collect_of_degree(n, degree, &mut Vec::new(), &mut out);
    out
}

fn collect_of_degree(n: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if prefix.len() == n {
        if degree == 0 {
            out.push(MultiIndex(prefix.clone()));
        }
        return;
    }
    if prefix.len() + 1 == n {
        prefix.push(degree);
        out.push(MultiIndex(prefix.clone()));
        prefix.pop();
        return;
    }
    // lexicographically largest first exponent comes last in grlex order
    for e in 0..=degree {
        prefix.push(e);
        collect_of_degree(n, degree - e, prefix, out);
        prefix.pop();
    }
}

/// Ordered tuples `(p_1, .., p_r)` of nonzero multi-indices with sum `s`.
pub fn compositions(s: &MultiIndex, parts: usize) -> Vec<Vec<MultiIndex>> {
    let mut out = Vec::new();
    let mut acc = Vec::new();
    compose_rec(s, parts, &mut acc, &mut out);
    out
}

fn compose_rec(
    rest: &MultiIndex,
    parts: usize,
    acc: &mut Vec<MultiIndex>,
    out: &mut Vec<Vec<MultiIndex>>,
) {
    if parts == 1 {
        if !rest.is_zero() {
            let mut full = acc.clone();
            full.push(rest.clone());
            out.push(full);
        }
        return;
    }
    for p in rest.divisors() {
        if p.is_zero() || p == *rest {
            continue;
        }
        let remaining = rest.checked_sub(&p).expect("divisor");
        acc.push(p);
        compose_rec(&remaining, parts - 1, acc, out);
        acc.pop();
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    /// Graded order first, then lexicographic on the exponents.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn degree_and_factorial() {
        let s = mi(&[2, 1, 3]);
        assert_eq!(s.degree(), 6);
        assert_eq!(s.factorial(), Rat::from_int(2 * 1 * 6));
        assert_eq!(MultiIndex::unit(3, 1), mi(&[0, 1, 0]));
    }

    #[test]
    fn graded_lex_order() {
        assert!(mi(&[0, 2]) < mi(&[3, 0]));
        assert!(mi(&[1, 1]) < mi(&[2, 0]));
        assert!(mi(&[0, 2]) < mi(&[1, 1]));
    }

    #[test]
    fn basis_enumeration() {
        let basis = indices_up_to(2, 2);
        assert_eq!(basis.len(), 6); // 1, X2, X1, X2^2, X1X2, X1^2
        assert_eq!(basis[0], mi(&[0, 0]));
        assert_eq!(basis[5], mi(&[2, 0]));
    }

    #[test]
    fn compositions_of_two() {
        let comps = compositions(&mi(&[2]), 2);
        assert_eq!(comps, vec![vec![mi(&[1]), mi(&[1])]]);
        let comps = compositions(&mi(&[1, 1]), 2);
        assert_eq!(comps.len(), 2);
    }
}
