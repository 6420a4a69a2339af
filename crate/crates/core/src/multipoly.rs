//! Sparse multivariate polynomials over `F_q`, evaluation grids
//! `A_1 x ... x A_n`, and reduction modulo the grid's vanishing ideal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::finite_field::{Field, FieldElement, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("set {coord} is empty")]
    EmptySet { coord: usize },
    #[error("set {coord} lists element {code} more than once")]
    DuplicateElement { coord: usize, code: u32 },
    #[error("grid has more points than fit in 64 bits")]
    GridTooLarge,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Exponent vector `(a_1, ..., a_n)` of `t_1^a_1 ... t_n^a_n`.
///
/// Ordered by graded reverse lexicographic order with `t_1 > t_2 > ... > t_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.total_degree().cmp(&other.total_degree()))
            .then_with(|| {
                // reverse lex: the last differing exponent decides, smaller wins
                for (a, b) in self.0.iter().zip(&other.0).rev() {
                    if a != b {
                        return b.cmp(a);
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total degree of a polynomial. The zero polynomial has degree
/// [`Degree::MinusInfinity`], which sorts below every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(u32),
}

/// Sparse polynomial in `n` variables. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: FieldElement) -> Self {
        Self::monomial(Monomial::one(nvars), c)
    }

    pub fn monomial(m: Monomial, c: FieldElement) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { nvars, terms }
    }

    /// The variable `t_{i+1}` (zero-based index `i`).
    pub fn var(i: usize, nvars: usize) -> Self {
        Self::monomial(Monomial::var(i, nvars), FieldElement::ONE)
    }

    /// Sums the given terms; repeated monomials are combined.
    pub fn from_terms(
        field: &Field,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, FieldElement)>,
    ) -> Result<Self, PolyError> {
        let mut out = Self::zero(nvars);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(PolyError::ArityMismatch {
                    expected: nvars,
                    got: m.nvars(),
                });
            }
            out.add_term(field, m, c);
        }
        Ok(out)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing grevlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, FieldElement)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        self.terms.get(m).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .map_or(Degree::MinusInfinity, Degree::Finite)
    }

    /// Degree in the variable with zero-based index `i`.
    pub fn degree_in(&self, i: usize) -> Degree {
        self.terms
            .keys()
            .map(|m| m.0[i])
            .max()
            .map_or(Degree::MinusInfinity, Degree::Finite)
    }

    fn add_term(&mut self, field: &Field, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m);
        match slot {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = field.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, field: &Field, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(field, m.clone(), c);
        }
        out
    }

    pub fn sub(&self, field: &Field, other: &MultiPoly) -> MultiPoly {
        self.add(field, &other.scale(field, field.neg(FieldElement::ONE)))
    }

    pub fn scale(&self, field: &Field, c: FieldElement) -> MultiPoly {
        let mut out = Self::zero(self.nvars);
        for (m, a) in self.terms() {
            out.add_term(field, m.clone(), field.mul(a, c));
        }
        out
    }

    pub fn mul(&self, field: &Field, other: &MultiPoly) -> MultiPoly {
        let mut out = Self::zero(self.nvars);
        for (ma, a) in self.terms() {
            for (mb, b) in other.terms() {
                out.add_term(field, ma.mul(mb), field.mul(a, b));
            }
        }
        out
    }

    /// Value at `point`, using one table of powers per coordinate.
    pub fn evaluate(
        &self,
        field: &Field,
        point: &[FieldElement],
    ) -> Result<FieldElement, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::ArityMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let powers: Vec<Vec<FieldElement>> = (0..self.nvars)
            .map(|i| {
                let top = match self.degree_in(i) {
                    Degree::Finite(k) => k as usize,
                    Degree::MinusInfinity => 0,
                };
                let mut row = Vec::with_capacity(top + 1);
                let mut x = FieldElement::ONE;
                for _ in 0..=top {
                    row.push(x);
                    x = field.mul(x, point[i]);
                }
                row
            })
            .collect();
        let mut acc = FieldElement::ZERO;
        for (m, c) in self.terms() {
            let mut v = c;
            for (i, &a) in m.0.iter().enumerate() {
                v = field.mul(v, powers[i][a as usize]);
            }
            acc = field.add(acc, v);
        }
        Ok(acc)
    }

    /// Parses `c*t1^a1*...*tn^an + ...`. Coefficients are element codes;
    /// unit coefficients and unit exponents may be omitted, whitespace is
    /// ignored, and several numeric factors in one term are multiplied.
    pub fn parse(field: &Field, nvars: usize, text: &str) -> Result<MultiPoly, PolyError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(PolyError::Parse("empty input".into()));
        }
        let mut out = Self::zero(nvars);
        for term in compact.split('+') {
            if term.is_empty() {
                return Err(PolyError::Parse(format!("empty term in {text:?}")));
            }
            let mut coeff = FieldElement::ONE;
            let mut exps = vec![0u32; nvars];
            for factor in term.split('*') {
                if let Some(var) = factor.strip_prefix('t') {
                    let (idx, exp) = match var.split_once('^') {
                        Some((i, e)) => (i, parse_num(e)?),
                        None => (var, 1),
                    };
                    let idx = parse_num(idx)? as usize;
                    if idx == 0 || idx > nvars {
                        return Err(PolyError::Parse(format!(
                            "variable t{idx} outside t1..t{nvars}"
                        )));
                    }
                    exps[idx - 1] += u32::try_from(exp)
                        .map_err(|_| PolyError::Parse(format!("exponent {exp} too large")))?;
                } else {
                    coeff = field.mul(coeff, field.element(parse_num(factor)?)?);
                }
            }
            out.add_term(field, Monomial(exps), coeff);
        }
        Ok(out)
    }

    /// Text form accepted by [`MultiPoly::parse`], leading term first.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let terms: Vec<String> = self
            .terms()
            .rev()
            .map(|(m, c)| {
                let mut factors = Vec::new();
                for (i, &a) in m.0.iter().enumerate() {
                    match a {
                        0 => {}
                        1 => factors.push(format!("t{}", i + 1)),
                        _ => factors.push(format!("t{}^{a}", i + 1)),
                    }
                }
                if c != FieldElement::ONE || factors.is_empty() {
                    factors.insert(0, c.to_string());
                }
                factors.join("*")
            })
            .collect();
        terms.join(" + ")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn parse_num(s: &str) -> Result<u64, PolyError> {
    s.parse::<u64>()
        .map_err(|_| PolyError::Parse(format!("expected a number, found {s:?}")))
}

/// The point set `A_1 x ... x A_n` inside `F_q^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationGrid {
    field: Arc<Field>,
    sets: Vec<Vec<FieldElement>>,
    points: u64,
}

impl EvaluationGrid {
    /// Validates and sorts the sets. Duplicates are rejected rather than
    /// merged.
    pub fn new(field: Arc<Field>, sets: Vec<Vec<FieldElement>>) -> Result<Self, PolyError> {
        let mut sorted = Vec::with_capacity(sets.len());
        let mut points = 1u64;
        for (coord, mut set) in sets.into_iter().enumerate() {
            if set.is_empty() {
                return Err(PolyError::EmptySet { coord });
            }
            for &x in &set {
                field.element(u64::from(x.code()))?;
            }
            set.sort_unstable();
            if let Some(w) = set.windows(2).find(|w| w[0] == w[1]) {
                return Err(PolyError::DuplicateElement {
                    coord,
                    code: w[0].code(),
                });
            }
            points = points
                .checked_mul(set.len() as u64)
                .ok_or(PolyError::GridTooLarge)?;
            sorted.push(set);
        }
        Ok(EvaluationGrid {
            field,
            sets: sorted,
            points,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.sets.len()
    }

    /// The sets, each sorted by code.
    pub fn sets(&self) -> &[Vec<FieldElement>] {
        &self.sets
    }

    /// Cardinalities `d_i = |A_i|` in coordinate order.
    pub fn cards(&self) -> Vec<u64> {
        self.sets.iter().map(|s| s.len() as u64).collect()
    }

    pub fn point_count(&self) -> u64 {
        self.points
    }

    /// The point with the given position in [`EvaluationGrid::points`].
    pub fn point(&self, mut index: u64) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::ZERO; self.sets.len()];
        for (i, set) in self.sets.iter().enumerate().rev() {
            let d = set.len() as u64;
            out[i] = set[(index % d) as usize];
            index /= d;
        }
        out
    }

    /// All points in lexicographic order: `A_1` varies slowest, `A_n`
    /// fastest, each set in code order.
    pub fn points(&self) -> impl Iterator<Item = Vec<FieldElement>> + '_ {
        (0..self.points).map(move |i| self.point(i))
    }

    /// `f_i = prod_{g in A_i} (t_i - g)` as a univariate coefficient list,
    /// lowest degree first. Monic of degree `d_i`.
    pub fn vanishing_coeffs(&self, i: usize) -> Vec<FieldElement> {
        let f = &self.field;
        let mut poly = vec![FieldElement::ONE];
        for &g in &self.sets[i] {
            let mut next = vec![FieldElement::ZERO; poly.len() + 1];
            for (k, &c) in poly.iter().enumerate() {
                next[k + 1] = f.add(next[k + 1], c);
                next[k] = f.sub(next[k], f.mul(c, g));
            }
            poly = next;
        }
        poly
    }

    /// `f_i` as a polynomial in all `n` variables.
    pub fn vanishing_polynomial(&self, i: usize) -> MultiPoly {
        let n = self.nvars();
        let mut out = MultiPoly::zero(n);
        for (k, c) in self.vanishing_coeffs(i).into_iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = k as u32;
            out.add_term(&self.field, Monomial(e), c);
        }
        out
    }
}

/// Normal form of `f` modulo the vanishing ideal `(f_1, ..., f_n)` of the
/// grid.
///
/// Each `t_i^{d_i}` is rewritten as `t_i^{d_i} - f_i(t_i)` until every
/// exponent of `t_i` is below `d_i`. The leading terms of the `f_i` are
/// pairwise coprime pure powers, so they form a Gröbner basis under any
/// graded order and the result does not depend on the order of rewriting.
/// The result agrees with `f` on every grid point and never has larger
/// total degree.
pub fn reduce_mod_grid(f: &MultiPoly, grid: &EvaluationGrid) -> Result<MultiPoly, PolyError> {
    let n = grid.nvars();
    if f.nvars() != n {
        return Err(PolyError::ArityMismatch {
            expected: n,
            got: f.nvars(),
        });
    }
    let field = grid.field();
    // remainders[i][a] = t_i^a mod f_i, lowest degree first
    let remainders: Vec<Vec<Vec<FieldElement>>> = (0..n)
        .map(|i| {
            let top = match f.degree_in(i) {
                Degree::Finite(k) => k as usize,
                Degree::MinusInfinity => 0,
            };
            power_remainders(field, &grid.vanishing_coeffs(i), top)
        })
        .collect();

    let mut out = MultiPoly::zero(n);
    for (m, c) in f.terms() {
        let mut partial: Vec<(Vec<u32>, FieldElement)> = vec![(Vec::with_capacity(n), c)];
        for (i, &a) in m.0.iter().enumerate() {
            let rem = &remainders[i][a as usize];
            let mut next = Vec::with_capacity(partial.len() * rem.len());
            for (exps, coeff) in &partial {
                for (k, &r) in rem.iter().enumerate() {
                    if r.is_zero() {
                        continue;
                    }
                    let mut e = exps.clone();
                    e.push(k as u32);
                    next.push((e, field.mul(*coeff, r)));
                }
            }
            partial = next;
        }
        for (e, coeff) in partial {
            out.add_term(field, Monomial(e), coeff);
        }
    }
    Ok(out)
}

/// `t^a mod f` for `a = 0..=top`, where `f` is monic.
fn power_remainders(field: &Field, f: &[FieldElement], top: usize) -> Vec<Vec<FieldElement>> {
    let d = f.len() - 1;
    let mut out = Vec::with_capacity(top + 1);
    let mut cur = vec![FieldElement::ZERO; d.max(1)];
    if d == 0 {
        // f = 1 cannot occur for a non-empty set; keep the table total anyway
        cur = vec![FieldElement::ZERO];
        out.resize(top + 1, cur);
        return out;
    }
    cur[0] = FieldElement::ONE;
    for _ in 0..=top {
        out.push(cur.clone());
        // multiply by t, then replace t^d by t^d - f
        let carry = cur[d - 1];
        for k in (1..d).rev() {
            cur[k] = cur[k - 1];
        }
        cur[0] = FieldElement::ZERO;
        if !carry.is_zero() {
            for k in 0..d {
                cur[k] = field.sub(cur[k], field.mul(carry, f[k]));
            }
        }
    }
    out
}

/// `|{P in grid : f(P) = 0}|` by evaluating at every point.
pub fn zero_count(f: &MultiPoly, grid: &EvaluationGrid) -> Result<u64, PolyError> {
    if f.nvars() != grid.nvars() {
        return Err(PolyError::ArityMismatch {
            expected: grid.nvars(),
            got: f.nvars(),
        });
    }
    if f.is_zero() {
        return Ok(grid.point_count());
    }
    let field = grid.field();
    Ok((0..grid.point_count())
        .into_par_iter()
        .filter(|&i| {
            f.evaluate(field, &grid.point(i))
                .map(|v| v.is_zero())
                .unwrap_or(false)
        })
        .count() as u64)
}
