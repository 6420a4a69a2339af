//! Affine cartesian codes `C(d)`: the image of the evaluation map on
//! polynomials of total degree at most `d` over a grid `A_1 x ... x A_n`.
//!
//! Parameters come from closed formulas in the set sizes `d_1 <= ... <= d_n`
//! alone. The generator matrix and the extremal codeword are built from the
//! actual grid.
//!
//! Degree zero is handled as the repetition code: dimension one and minimum
//! distance equal to the length.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finite_field::{Field, FieldElement, FieldError};
use crate::linalg;
use crate::multipoly::{EvaluationGrid, Monomial, MultiPoly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("at least one set is required")]
    NoSets,
    #[error("set {coord} is empty")]
    EmptySet { coord: usize },
    #[error("degree {d} is outside 1..{regularity} (exclusive upper bound)")]
    OutOfRange { d: u64, regularity: u64 },
    #[error("expected a vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("code length does not fit in 64 bits")]
    Overflow,
    #[error("malformed matrix file: {0}")]
    Format(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Normalized set sizes: singletons dropped (unless every set is a
/// singleton, leaving `[1]`), sorted ascending, with a product that fits in
/// 64 bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cards(Vec<u64>);

impl Cards {
    pub fn new(cards: impl Into<Vec<u64>>) -> Result<Cards, CodeError> {
        let mut cards = cards.into();
        if cards.is_empty() {
            return Err(CodeError::NoSets);
        }
        if let Some(coord) = cards.iter().position(|&c| c == 0) {
            return Err(CodeError::EmptySet { coord });
        }
        cards.retain(|&c| c > 1);
        if cards.is_empty() {
            cards.push(1);
        }
        cards.sort_unstable();
        cards
            .iter()
            .try_fold(1u64, |acc, &c| acc.checked_mul(c))
            .ok_or(CodeError::Overflow)?;
        Ok(Cards(cards))
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    /// `d_1 ... d_n`, the code length.
    pub fn length(&self) -> u64 {
        self.0.iter().product()
    }

    /// `sum (d_i - 1)`: the least degree from which the code is the whole
    /// ambient space.
    pub fn regularity(&self) -> u64 {
        self.0.iter().map(|&c| c - 1).sum()
    }
}

/// The unique `(k, ell)` with `d = sum_{i<=k} (d_i - 1) + ell` and
/// `1 <= ell <= d_{k+1} - 1`. `k` counts whole coordinates; the partial
/// coordinate is `cards[k]` in zero-based indexing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KLDecomposition {
    pub k: usize,
    pub ell: u64,
}

pub fn decompose_k_ell(cards: &Cards, d: u64) -> Result<KLDecomposition, CodeError> {
    let regularity = cards.regularity();
    if d < 1 || d >= regularity {
        return Err(CodeError::OutOfRange { d, regularity });
    }
    let mut rest = d;
    for (k, &c) in cards.as_slice().iter().enumerate() {
        if rest < c {
            return Ok(KLDecomposition { k, ell: rest });
        }
        rest -= c - 1;
    }
    unreachable!("d < regularity leaves a partial coordinate")
}

/// Code dimension by inclusion-exclusion:
/// `sum_S (-1)^|S| C(n + d - s_S, d - s_S)` over subsets `S` of the
/// coordinates, with `s_S = sum_{i in S} d_i` and terms with `d < s_S`
/// vanishing.
///
/// Subsets with the same `s_S` share a binomial, so the signed subset
/// counts are tallied per `s_S` first (coefficients of
/// `prod_i (1 - x^{d_i})`) and the sum is taken over distinct values.
pub fn dimension_formula(cards: &Cards, d: u64) -> u64 {
    let n = cards.nvars() as u64;
    let sizes = cards.as_slice();
    let total: u64 = sizes.iter().sum();
    let reach = total.min(d) as usize;
    // signed[s] = sum over subsets S with s_S = s of (-1)^|S|
    let mut signed = vec![BigInt::zero(); reach + 1];
    signed[0] = BigInt::one();
    for &c in sizes {
        let c = c as usize;
        for s in (c..=reach).rev() {
            let moved = signed[s - c].clone();
            signed[s] -= moved;
        }
    }
    let mut acc = BigInt::zero();
    for (s, count) in signed.iter().enumerate() {
        if count.is_zero() {
            continue;
        }
        let top = n + d - s as u64;
        acc += count * BigInt::from(binomial(top, n));
    }
    acc.to_u64()
        .expect("dimension lies between 0 and the code length")
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Hilbert series data of the vanishing ideal: the numerator
/// `prod_i (1 + t + ... + t^{d_i - 1})`, the regularity and the degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertData {
    pub numerator: Vec<u64>,
    pub regularity: u64,
    pub degree: u64,
}

pub fn hilbert_data(cards: &Cards) -> HilbertData {
    let mut numerator = vec![1u64];
    for &c in cards.as_slice() {
        let mut next = vec![0u64; numerator.len() + c as usize - 1];
        for (i, &h) in numerator.iter().enumerate() {
            for slot in &mut next[i..i + c as usize] {
                *slot += h;
            }
        }
        numerator = next;
    }
    HilbertData {
        numerator,
        regularity: cards.regularity(),
        degree: cards.length(),
    }
}

/// Affine Hilbert function: partial sums of the Hilbert numerator.
pub fn hilbert_function(cards: &Cards, d: u64) -> u64 {
    hilbert_data(cards)
        .numerator
        .iter()
        .take(d.saturating_add(1).min(usize::MAX as u64) as usize)
        .sum()
}

/// `(d_{k+1} - ell) d_{k+2} ... d_n` inside `1..regularity`, one at or
/// beyond the regularity, and the length at `d = 0`.
pub fn min_distance_formula(cards: &Cards, d: u64) -> u64 {
    if d == 0 {
        return cards.length();
    }
    match decompose_k_ell(cards, d) {
        Ok(KLDecomposition { k, ell }) => {
            let c = cards.as_slice();
            (c[k] - ell) * c[k + 1..].iter().product::<u64>()
        }
        Err(_) => 1,
    }
}

/// Largest number of grid zeros of a degree-`d` polynomial that does not
/// vanish on the whole grid: `d_{k+2} ... d_n (d_1 ... d_{k+1} - d_{k+1} + ell)`.
pub fn zero_bound(cards: &Cards, d: u64) -> Result<u64, CodeError> {
    let KLDecomposition { k, ell } = decompose_k_ell(cards, d)?;
    let c = cards.as_slice();
    let head: u64 = c[..=k].iter().product();
    let tail: u64 = c[k + 1..].iter().product();
    Ok(tail * (head - c[k] + ell))
}

/// The coarser root bound `d_2 ... d_n * d` (`d` when `n = 1`). Not clamped
/// to the grid size.
pub fn loose_zero_bound(cards: &Cards, d: u64) -> u64 {
    let c = cards.as_slice();
    if c.len() == 1 {
        return d;
    }
    c[1..].iter().product::<u64>().saturating_mul(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub length: u64,
    pub dimension: u64,
    pub min_distance: u64,
    pub regularity: u64,
}

impl CodeParams {
    pub fn compute(cards: &Cards, d: u64) -> CodeParams {
        CodeParams {
            length: cards.length(),
            dimension: dimension_formula(cards, d),
            min_distance: min_distance_formula(cards, d),
            regularity: cards.regularity(),
        }
    }

    /// Whether the code is all of `F_q^length`.
    pub fn is_saturated(&self) -> bool {
        self.dimension == self.length
    }
}

/// A cartesian code: normalized grid plus evaluation degree.
///
/// Normalization drops singleton sets and sorts the rest by size. The
/// record of both steps maps normalized points back to input coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartesianSpec {
    grid: EvaluationGrid,
    degree: u64,
    /// `original_coords[j]` is the input index of normalized coordinate `j`.
    original_coords: Vec<usize>,
    /// Input coordinates that were dropped, with their single value.
    dropped: Vec<(usize, FieldElement)>,
    input_nvars: usize,
}

pub fn normalize_spec(
    field: Arc<Field>,
    sets: Vec<Vec<FieldElement>>,
    d: u64,
) -> Result<CartesianSpec, CodeError> {
    if sets.is_empty() {
        return Err(CodeError::NoSets);
    }
    if let Some(coord) = sets.iter().position(Vec::is_empty) {
        return Err(CodeError::EmptySet { coord });
    }
    let input_nvars = sets.len();
    // Validate every set (range, duplicates) before discarding any.
    let checked = EvaluationGrid::new(field.clone(), sets)?;
    let sets = checked.sets();

    let mut kept: Vec<usize> = (0..input_nvars).filter(|&i| sets[i].len() > 1).collect();
    let mut dropped: Vec<(usize, FieldElement)> = (0..input_nvars)
        .filter(|&i| sets[i].len() == 1)
        .map(|i| (i, sets[i][0]))
        .collect();
    if kept.is_empty() {
        kept.push(dropped.remove(0).0);
    }
    kept.sort_by_key(|&i| sets[i].len());
    let grid = EvaluationGrid::new(field, kept.iter().map(|&i| sets[i].clone()).collect())?;
    Ok(CartesianSpec {
        grid,
        degree: d,
        original_coords: kept,
        dropped,
        input_nvars,
    })
}

impl CartesianSpec {
    pub fn grid(&self) -> &EvaluationGrid {
        &self.grid
    }

    pub fn field(&self) -> &Arc<Field> {
        self.grid.field()
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// The same grid at another degree.
    pub fn with_degree(&self, d: u64) -> CartesianSpec {
        CartesianSpec {
            degree: d,
            ..self.clone()
        }
    }

    pub fn original_coords(&self) -> &[usize] {
        &self.original_coords
    }

    pub fn cards(&self) -> Cards {
        Cards::new(self.grid.cards()).expect("grid sizes are validated")
    }

    pub fn params(&self) -> CodeParams {
        CodeParams::compute(&self.cards(), self.degree)
    }

    /// Rewrites a normalized point in the input coordinate order, filling
    /// in the dropped singleton coordinates.
    pub fn lift_point(&self, point: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::ZERO; self.input_nvars];
        for (&orig, &x) in self.original_coords.iter().zip(point) {
            out[orig] = x;
        }
        for &(orig, x) in &self.dropped {
            out[orig] = x;
        }
        out
    }
}

/// Monomials `t^a` with `a_i <= d_i - 1` and `sum a_i <= d`, increasing in
/// grevlex order.
pub fn standard_monomials(cards: &[u64], d: u64) -> Vec<Monomial> {
    fn walk(cards: &[u64], budget: u64, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let i = prefix.len();
        if i == cards.len() {
            out.push(Monomial::new(prefix.clone()));
            return;
        }
        let top = (cards[i] - 1).min(budget);
        for a in 0..=top {
            prefix.push(a as u32);
            walk(cards, budget - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    walk(cards, d, &mut Vec::with_capacity(cards.len()), &mut out);
    out.sort();
    out
}

/// Rows: standard-monomial evaluations. Columns: grid points in
/// enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    field: Arc<Field>,
    monomials: Vec<Monomial>,
    rows: Vec<Vec<FieldElement>>,
}

impl GeneratorMatrix {
    /// Assembles a matrix from explicit rows, checking only the shape.
    pub fn from_parts(
        field: Arc<Field>,
        monomials: Vec<Monomial>,
        rows: Vec<Vec<FieldElement>>,
    ) -> Result<Self, CodeError> {
        if monomials.len() != rows.len() {
            return Err(CodeError::LengthMismatch {
                expected: monomials.len(),
                got: rows.len(),
            });
        }
        if let Some(first) = rows.first() {
            if let Some(bad) = rows.iter().find(|r| r.len() != first.len()) {
                return Err(CodeError::LengthMismatch {
                    expected: first.len(),
                    got: bad.len(),
                });
            }
        }
        Ok(GeneratorMatrix {
            field,
            monomials,
            rows,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.field, &self.rows)
    }

    /// `q n_rows n_cols`, then one line of element codes per row.
    pub fn to_matrix_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.field.order(), self.nrows(), self.ncols());
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|x| x.code().to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// One exponent vector per line, in row order.
    pub fn to_legend_text(&self) -> String {
        let mut out = String::new();
        for m in &self.monomials {
            let line: Vec<String> = m.exponents().iter().map(u32::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Reads the matrix text format back as `(q, rows of codes)`.
pub fn parse_matrix_text(text: &str) -> Result<(u64, Vec<Vec<u32>>), CodeError> {
    let bad = |m: &str| CodeError::Format(m.to_string());
    let mut lines = text.lines();
    let header: Vec<u64> = lines
        .next()
        .ok_or_else(|| bad("missing header"))?
        .split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|_| bad("non-numeric header")))
        .collect::<Result<_, _>>()?;
    let [q, nrows, ncols] = header[..] else {
        return Err(bad("header must be `q n_rows n_cols`"));
    };
    let rows: Vec<Vec<u32>> = lines
        .map(|l| {
            l.split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|_| bad("non-numeric entry")))
                .collect::<Result<Vec<u32>, _>>()
        })
        .collect::<Result<_, _>>()?;
    if rows.len() as u64 != nrows || rows.iter().any(|r| r.len() as u64 != ncols) {
        return Err(bad("shape does not match header"));
    }
    if rows.iter().flatten().any(|&c| u64::from(c) >= q) {
        return Err(bad("entry outside the field"));
    }
    Ok((q, rows))
}

/// Values of `t^a` at one point, for each monomial in `monomials`.
fn monomial_column(
    field: &Field,
    monomials: &[Monomial],
    point: &[FieldElement],
) -> Vec<FieldElement> {
    let top = monomials
        .iter()
        .flat_map(|m| m.exponents().iter().copied())
        .max()
        .unwrap_or(0) as usize;
    let powers: Vec<Vec<FieldElement>> = point
        .iter()
        .map(|&x| {
            let mut row = Vec::with_capacity(top + 1);
            let mut acc = FieldElement::ONE;
            for _ in 0..=top {
                row.push(acc);
                acc = field.mul(acc, x);
            }
            row
        })
        .collect();
    monomials
        .iter()
        .map(|m| {
            m.exponents()
                .iter()
                .enumerate()
                .fold(FieldElement::ONE, |acc, (i, &a)| {
                    field.mul(acc, powers[i][a as usize])
                })
        })
        .collect()
}

/// Evaluation matrix of arbitrary monomials against every grid point.
pub fn evaluation_matrix(grid: &EvaluationGrid, monomials: &[Monomial]) -> Vec<Vec<FieldElement>> {
    let field = grid.field();
    let columns: Vec<Vec<FieldElement>> = (0..grid.point_count())
        .into_par_iter()
        .map(|i| monomial_column(field, monomials, &grid.point(i)))
        .collect();
    (0..monomials.len())
        .map(|r| columns.iter().map(|col| col[r]).collect())
        .collect()
}

pub fn build_generator_matrix(spec: &CartesianSpec) -> GeneratorMatrix {
    let monomials = standard_monomials(&spec.grid.cards(), spec.degree);
    let rows = evaluation_matrix(&spec.grid, &monomials);
    GeneratorMatrix {
        field: spec.field().clone(),
        monomials,
        rows,
    }
}

/// `message * matrix`.
pub fn encode(
    matrix: &GeneratorMatrix,
    message: &[FieldElement],
) -> Result<Vec<FieldElement>, CodeError> {
    if message.len() != matrix.nrows() {
        return Err(CodeError::LengthMismatch {
            expected: matrix.nrows(),
            got: message.len(),
        });
    }
    let f = &matrix.field;
    let mut word = vec![FieldElement::ZERO; matrix.ncols()];
    for (&c, row) in message.iter().zip(&matrix.rows) {
        if c.is_zero() {
            continue;
        }
        for (w, &x) in word.iter_mut().zip(row) {
            *w = f.add(*w, f.mul(c, x));
        }
    }
    Ok(word)
}

pub fn hamming_weight(word: &[FieldElement]) -> u64 {
    word.iter().filter(|x| !x.is_zero()).count() as u64
}

/// A minimum-weight codeword and the polynomial it evaluates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalCodeword {
    pub polynomial: MultiPoly,
    pub codeword: Vec<FieldElement>,
}

impl ExtremalCodeword {
    pub fn weight(&self) -> u64 {
        hamming_weight(&self.codeword)
    }
}

/// The product `prod_{i<=k} prod_{j<d_i} (b_{i,j} - t_i) * prod_{j<=ell} (b_{k+1,j} - t_{k+1})`
/// taking each set's elements in code order, and its evaluation vector.
///
/// It vanishes everywhere except on `(d_{k+1} - ell) d_{k+2} ... d_n` points.
pub fn extremal_codeword(spec: &CartesianSpec) -> Result<ExtremalCodeword, CodeError> {
    let cards = spec.cards();
    let KLDecomposition { k, ell } = decompose_k_ell(&cards, spec.degree)?;
    let field = spec.field();
    let n = spec.grid.nvars();
    let sets = spec.grid.sets();
    let mut g = MultiPoly::constant(n, FieldElement::ONE);
    let factors = (0..k)
        .flat_map(|i| sets[i][..sets[i].len() - 1].iter().map(move |&b| (i, b)))
        .chain(sets[k][..ell as usize].iter().map(|&b| (k, b)));
    for (i, b) in factors {
        let linear = MultiPoly::constant(n, b).sub(field, &MultiPoly::var(i, n));
        g = g.mul(field, &linear);
    }
    let codeword = (0..spec.grid.point_count())
        .into_par_iter()
        .map(|i| g.evaluate(field, &spec.grid.point(i)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExtremalCodeword {
        polynomial: g,
        codeword,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::DEFAULT_MAX_FIELD;
    use crate::multipoly::Degree;

    fn cards(c: &[u64]) -> Cards {
        Cards::new(c.to_vec()).unwrap()
    }

    fn field(q: u64) -> Arc<Field> {
        Arc::new(Field::with_order(q, DEFAULT_MAX_FIELD).unwrap())
    }

    fn first_elements(f: &Field, sizes: &[usize]) -> Vec<Vec<FieldElement>> {
        sizes
            .iter()
            .map(|&s| f.elements().take(s).collect())
            .collect()
    }

    /// Independent scan: every k whose prefix sum leaves a valid ell.
    fn scan_k_ell(c: &[u64], d: u64) -> Vec<(usize, u64)> {
        (0..c.len())
            .filter_map(|k| {
                let prefix: u64 = c[..k].iter().map(|x| x - 1).sum();
                let ell = d.checked_sub(prefix)?;
                (1..=c[k] - 1).contains(&ell).then_some((k, ell))
            })
            .collect()
    }

    #[test]
    fn cards_normalization() {
        assert_eq!(cards(&[3, 1, 2]).as_slice(), &[2, 3]);
        assert_eq!(cards(&[1, 1]).as_slice(), &[1]);
        assert_eq!(cards(&[1, 1]).length(), 1);
        assert_eq!(Cards::new(vec![]).unwrap_err(), CodeError::NoSets);
        assert_eq!(
            Cards::new(vec![2, 0]).unwrap_err(),
            CodeError::EmptySet { coord: 1 }
        );
        assert_eq!(
            Cards::new(vec![u64::MAX, 2]).unwrap_err(),
            CodeError::Overflow
        );
    }

    #[test]
    fn k_ell_examples() {
        assert_eq!(scan_k_ell(&[2, 5, 9], 5), vec![(1, 4)]);
        assert_eq!(
            decompose_k_ell(&cards(&[2, 5, 9]), 5).unwrap(),
            KLDecomposition { k: 1, ell: 4 }
        );
        assert_eq!(scan_k_ell(&[9, 9, 9, 9], 10), vec![(1, 2)]);
        assert_eq!(
            decompose_k_ell(&cards(&[9, 9, 9, 9]), 10).unwrap(),
            KLDecomposition { k: 1, ell: 2 }
        );
        for n in 2..8 {
            let c = cards(&vec![2; n]);
            for d in 1..n as u64 {
                assert_eq!(
                    decompose_k_ell(&c, d).unwrap(),
                    KLDecomposition {
                        k: d as usize - 1,
                        ell: 1
                    }
                );
            }
        }
        assert_eq!(
            decompose_k_ell(&cards(&[2, 5, 9]), 0).unwrap_err(),
            CodeError::OutOfRange {
                d: 0,
                regularity: 13
            }
        );
        assert!(decompose_k_ell(&cards(&[2, 5, 9]), 13).is_err());
    }

    #[test]
    fn k_ell_unique_everywhere() {
        for c in [vec![2, 2, 3], vec![3, 4, 4, 7], vec![5], vec![2, 9]] {
            let cs = cards(&c);
            for d in 1..cs.regularity() {
                let found = scan_k_ell(cs.as_slice(), d);
                assert_eq!(found.len(), 1, "{c:?} d={d}");
                let kl = decompose_k_ell(&cs, d).unwrap();
                assert_eq!((kl.k, kl.ell), found[0]);
            }
        }
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dimension_formula(&cards(&[9, 9, 9, 9]), 2), 15);
        assert_eq!(dimension_formula(&cards(&[2, 5, 9]), 2), 9);
        for c in [vec![2], vec![3, 7], vec![4, 4, 4]] {
            assert_eq!(dimension_formula(&cards(&c), 0), 1);
        }
        assert_eq!(dimension_formula(&cards(&[1]), 5), 1);
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert_function(&cards(&[2, 5, 9]), 13), 90);
        assert_eq!(hilbert_function(&cards(&[9, 9, 9, 9]), 32), 6561);
        assert_eq!(hilbert_function(&cards(&[3]), 1), 2);
        let h = hilbert_data(&cards(&[2, 3]));
        assert_eq!(h.numerator, vec![1, 2, 2, 1]);
        assert_eq!((h.regularity, h.degree), (3, 6));
    }

    #[test]
    fn min_distance_examples() {
        assert_eq!(min_distance_formula(&cards(&[9, 9, 9, 9]), 10), 567);
        assert_eq!(min_distance_formula(&cards(&[2, 5, 9]), 6), 8);
        assert_eq!(min_distance_formula(&cards(&[2, 5, 9]), 13), 1);
        assert_eq!(min_distance_formula(&cards(&[2, 5, 9]), 0), 90);
        assert_eq!(min_distance_formula(&cards(&[1]), 0), 1);
        assert_eq!(min_distance_formula(&cards(&[1]), 3), 1);
    }

    #[test]
    fn zero_bounds() {
        assert_eq!(zero_bound(&cards(&[2, 5, 9]), 1).unwrap(), 90 - 45);
        assert_eq!(zero_bound(&cards(&[9, 9, 9, 9]), 31).unwrap(), 6559);
        assert_eq!(zero_bound(&cards(&[2, 2]), 1).unwrap(), 2);
        assert!(zero_bound(&cards(&[2, 2]), 2).is_err());
        assert_eq!(loose_zero_bound(&cards(&[2, 5, 9]), 1), 45);
        assert_eq!(loose_zero_bound(&cards(&[7]), 4), 4);
        assert_eq!(loose_zero_bound(&cards(&[2, 2]), 3), 6);
    }

    #[test]
    fn normalization_drops_and_sorts() {
        let f = field(5);
        let sets = vec![
            f.elements().take(3).collect(),
            vec![f.element(4).unwrap()],
            f.elements().skip(1).take(2).collect(),
        ];
        let spec = normalize_spec(f.clone(), sets, 2).unwrap();
        assert_eq!(spec.grid().cards(), vec![2, 3]);
        assert_eq!(spec.original_coords(), &[2, 0]);
        let p = spec.grid().point(0);
        let codes: Vec<u32> = spec.lift_point(&p).iter().map(|x| x.code()).collect();
        assert_eq!(codes, vec![0, 4, 1]);

        let singletons = vec![vec![f.element(2).unwrap()], vec![f.element(3).unwrap()]];
        let spec = normalize_spec(f.clone(), singletons, 1).unwrap();
        assert_eq!(spec.params().length, 1);
        assert_eq!(spec.params().min_distance, 1);
        assert_eq!(build_generator_matrix(&spec).nrows(), 1);

        let f9 = field(9);
        let spec = normalize_spec(f9.clone(), vec![f9.elements().collect(); 4], 3).unwrap();
        assert_eq!(spec.grid().cards(), vec![9, 9, 9, 9]);

        assert_eq!(
            normalize_spec(f.clone(), vec![vec![f.element(1).unwrap()], vec![]], 1).unwrap_err(),
            CodeError::EmptySet { coord: 1 }
        );
        assert_eq!(normalize_spec(f, vec![], 1).unwrap_err(), CodeError::NoSets);
    }

    #[test]
    fn generator_matrix_f2_square() {
        let f2 = field(2);
        let spec = normalize_spec(f2.clone(), first_elements(&f2, &[2, 2]), 1).unwrap();
        let g = build_generator_matrix(&spec);
        let exps: Vec<Vec<u32>> = g
            .monomials()
            .iter()
            .map(|m| m.exponents().to_vec())
            .collect();
        assert_eq!(exps, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        let codes: Vec<Vec<u32>> = g
            .rows()
            .iter()
            .map(|r| r.iter().map(|x| x.code()).collect())
            .collect();
        // points (0,0),(0,1),(1,0),(1,1): ev(1), ev(t2), ev(t1)
        assert_eq!(
            codes,
            vec![vec![1, 1, 1, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 1]]
        );
        assert_eq!(g.rank(), 3);
        assert_eq!(g.to_matrix_text(), "2 3 4\n1 1 1 1\n0 1 0 1\n0 0 1 1\n");
        assert_eq!(g.to_legend_text(), "0 0\n0 1\n1 0\n");
        let (q, rows) = parse_matrix_text(&g.to_matrix_text()).unwrap();
        assert_eq!((q, rows), (2, codes));
    }

    #[test]
    fn generator_matrix_univariate_f3() {
        let f3 = field(3);
        let spec = normalize_spec(f3.clone(), first_elements(&f3, &[3]), 1).unwrap();
        let g = build_generator_matrix(&spec);
        assert_eq!((g.nrows(), g.ncols()), (2, 3));
        assert_eq!(g.to_matrix_text(), "3 2 3\n1 1 1\n0 1 2\n");
        assert_eq!(g.rank(), 2);
    }

    #[test]
    fn saturated_matrix_is_square_invertible() {
        let f3 = field(3);
        let spec = normalize_spec(f3.clone(), first_elements(&f3, &[2, 3]), 3).unwrap();
        let g = build_generator_matrix(&spec);
        assert_eq!((g.nrows(), g.ncols(), g.rank()), (6, 6, 6));
    }

    #[test]
    fn matrix_text_rejects_garbage() {
        assert!(parse_matrix_text("").is_err());
        assert!(parse_matrix_text("2 1 2\n0 1 1\n").is_err());
        assert!(parse_matrix_text("2 1 2\n0 2\n").is_err());
        assert!(parse_matrix_text("2 x 2\n").is_err());
    }

    #[test]
    fn encoding() {
        let f3 = field(3);
        let spec = normalize_spec(f3.clone(), first_elements(&f3, &[3, 3]), 2).unwrap();
        let g = build_generator_matrix(&spec);
        let zero = vec![FieldElement::ZERO; g.nrows()];
        assert!(encode(&g, &zero).unwrap().iter().all(|x| x.is_zero()));
        let mut unit = zero.clone();
        unit[0] = FieldElement::ONE;
        assert_eq!(encode(&g, &unit).unwrap(), g.rows()[0]);
        assert_eq!(
            encode(&g, &zero[1..]).unwrap_err(),
            CodeError::LengthMismatch {
                expected: g.nrows(),
                got: g.nrows() - 1
            }
        );
    }

    #[test]
    fn extremal_codeword_small() {
        let f2 = field(2);
        let spec = normalize_spec(f2.clone(), first_elements(&f2, &[2, 2]), 1).unwrap();
        let ex = extremal_codeword(&spec).unwrap();
        // G = 0 - t1 = t1 over F_2
        assert_eq!(ex.polynomial, MultiPoly::var(0, 2));
        assert_eq!(ex.weight(), 2);
        assert_eq!(ex.polynomial.total_degree(), Degree::Finite(1));

        let g = build_generator_matrix(&spec);
        let message: Vec<FieldElement> = g
            .monomials()
            .iter()
            .map(|m| ex.polynomial.coefficient(m))
            .collect();
        assert_eq!(encode(&g, &message).unwrap(), ex.codeword);
    }

    #[test]
    fn extremal_codeword_large_grids() {
        let f181 = field(181);
        let torus: Vec<Vec<FieldElement>> = [2u64, 5, 9]
            .iter()
            .map(|&k| f181.subgroup_of_order(k).unwrap().into_elements())
            .collect();
        let spec = normalize_spec(f181.clone(), torus, 1).unwrap();
        assert_eq!(extremal_codeword(&spec).unwrap().weight(), 45);

        let f9 = field(9);
        let spec = normalize_spec(f9.clone(), vec![f9.elements().collect(); 4], 5).unwrap();
        let ex = extremal_codeword(&spec).unwrap();
        assert_eq!(ex.weight(), 2916);
        assert_eq!(ex.polynomial.total_degree(), Degree::Finite(5));
        assert!(extremal_codeword(&spec.with_degree(32)).is_err());
    }
}
