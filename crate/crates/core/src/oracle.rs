//! Brute-force checks of the closed formulas on small codes.
//!
//! Minimum distance and maximal zero counts come from enumerating every
//! message; the dimension comes from the rank of the evaluation matrix of
//! all monomials of degree at most `d`, standard or not. Nothing here reads
//! the formulas except [`verify_params`], which compares against them, and
//! the opt-in confirm mode of the minimum-distance scan.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::code_core::{
    self, build_generator_matrix, dimension_formula, extremal_codeword, hilbert_function,
    min_distance_formula, CartesianSpec, CodeError, GeneratorMatrix,
};
use crate::finite_field::FieldElement;
use crate::linalg::RowEchelon;
use crate::multipoly::{self, Degree, Monomial, MultiPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{what} needs {required} but the budget allows {limit}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        limit: u64,
    },
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Limits checked before any enumeration starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OracleBudget {
    /// Codewords enumerated by the distance and zero searches.
    pub max_words: u64,
    /// Grid points.
    pub max_points: u64,
    /// Entries of the all-monomials evaluation matrix used by the rank
    /// oracle.
    pub max_entries: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_words: 1 << 24,
            max_points: 1 << 16,
            max_entries: 1 << 24,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnumerationMode {
    /// Each step adds one scaled generator row to the running codeword.
    #[default]
    Incremental,
    /// Every message is encoded from scratch, and zeros are counted by
    /// evaluating the message polynomial on the grid.
    Naive,
}

#[derive(Debug, Clone, Default)]
pub struct OracleOptions {
    pub mode: EnumerationMode,
    /// Lets the distance scan stop once its running minimum reaches this
    /// value. Off by default so the scan stays independent of the formula.
    /// [`verify_params`] only looks at whether it is set and substitutes the
    /// formula distance.
    pub confirm_target: Option<u64>,
    /// Number of contiguous message ranges; defaults to a multiple of the
    /// worker count. Results do not depend on it.
    pub chunks: Option<usize>,
    /// Record wall-clock time per check.
    pub timing: bool,
}

fn budget_check(what: &'static str, required: u128, limit: u64) -> Result<(), OracleError> {
    if required > u128::from(limit) {
        Err(OracleError::BudgetExceeded {
            what,
            required,
            limit,
        })
    } else {
        Ok(())
    }
}

fn check_points(spec: &CartesianSpec, budget: &OracleBudget) -> Result<(), OracleError> {
    budget_check(
        "grid points",
        u128::from(spec.grid().point_count()),
        budget.max_points,
    )
}

/// `q^k`, saturating at `u128::MAX`.
fn word_count(q: u32, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc = acc.saturating_mul(u128::from(q));
    }
    acc
}

/// Extremes over all nonzero messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightExtremes {
    pub min_weight: u64,
    /// Index of the first message reaching `min_weight`.
    pub min_word: u64,
    pub max_zeros: u64,
}

impl WeightExtremes {
    fn merge(self, other: WeightExtremes) -> WeightExtremes {
        let (min_weight, min_word) =
            if (other.min_weight, other.min_word) < (self.min_weight, self.min_word) {
                (other.min_weight, other.min_word)
            } else {
                (self.min_weight, self.min_word)
            };
        WeightExtremes {
            min_weight,
            min_word,
            max_zeros: self.max_zeros.max(other.max_zeros),
        }
    }

    fn empty() -> WeightExtremes {
        WeightExtremes {
            min_weight: u64::MAX,
            min_word: u64::MAX,
            max_zeros: 0,
        }
    }
}

/// Message coefficients (element codes) of word index `w`: the code of row
/// `j` is base-`q` digit `j` of `w`, least significant first.
pub fn message_of_word(q: u32, k: usize, mut w: u64) -> Vec<FieldElement> {
    (0..k)
        .map(|_| {
            let c = (w % u64::from(q)) as u32;
            w /= u64::from(q);
            FieldElement::from_code(c)
        })
        .collect()
}

/// Enumerates every message of the code generated by `matrix` and returns
/// the weight extremes. `grid` is only used by the naive zero count.
pub fn weight_extremes(
    spec: &CartesianSpec,
    matrix: &GeneratorMatrix,
    budget: &OracleBudget,
    options: &OracleOptions,
) -> Result<WeightExtremes, OracleError> {
    check_points(spec, budget)?;
    let field = matrix.field();
    let k = matrix.nrows();
    let total = word_count(field.order(), k);
    budget_check("codewords", total, budget.max_words)?;
    let total = total as u64;
    if total <= 1 {
        return Ok(WeightExtremes::empty());
    }
    let chunks = options
        .chunks
        .unwrap_or_else(|| rayon::current_num_threads() * 4)
        .max(1) as u64;
    let span = total.div_ceil(chunks);
    let stop = AtomicBool::new(false);
    let ranges: Vec<(u64, u64)> = (0..chunks)
        .map(|c| (c * span, ((c + 1) * span).min(total)))
        .filter(|(lo, hi)| lo < hi)
        .collect();
    let result = ranges
        .into_par_iter()
        .map(|(lo, hi)| match options.mode {
            EnumerationMode::Incremental => {
                scan_incremental(matrix, lo, hi, options.confirm_target, &stop)
            }
            EnumerationMode::Naive => {
                scan_naive(spec, matrix, lo, hi, options.confirm_target, &stop)
            }
        })
        .reduce(WeightExtremes::empty, WeightExtremes::merge);
    Ok(result)
}

fn scan_incremental(
    matrix: &GeneratorMatrix,
    lo: u64,
    hi: u64,
    target: Option<u64>,
    stop: &AtomicBool,
) -> WeightExtremes {
    let field = matrix.field();
    let (p, e, q) = (
        field.characteristic(),
        field.degree() as usize,
        field.order(),
    );
    let k = matrix.nrows();
    let ncols = matrix.ncols();
    // scaled[j * e + b] = p^b (as an element) times row j
    let scaled: Vec<Vec<FieldElement>> = matrix
        .rows()
        .iter()
        .flat_map(|row| {
            (0..e).map(move |b| {
                let s = FieldElement::from_code(p.pow(b as u32));
                row.iter().map(|&x| field.mul(s, x)).collect::<Vec<_>>()
            })
        })
        .collect();
    let message = message_of_word(q, k, lo);
    let mut digits: Vec<u32> = message
        .iter()
        .flat_map(|c| {
            let mut code = c.code();
            (0..e).map(move |_| {
                let d = code % p;
                code /= p;
                d
            })
        })
        .collect();
    let mut word = code_core::encode(matrix, &message).expect("message length matches");
    let mut weight = code_core::hamming_weight(&word);
    let mut best = WeightExtremes::empty();
    let mut w = lo;
    loop {
        if w != 0 {
            if weight < best.min_weight {
                best.min_weight = weight;
                best.min_word = w;
            }
            best.max_zeros = best.max_zeros.max(ncols as u64 - weight);
            if let Some(t) = target {
                if weight <= t {
                    stop.store(true, Ordering::Relaxed);
                }
            }
        }
        w += 1;
        if w >= hi || (w.is_multiple_of(4096) && stop.load(Ordering::Relaxed)) {
            break;
        }
        let mut pos = 0;
        loop {
            let row = &scaled[pos];
            for (x, &r) in word.iter_mut().zip(row) {
                if r.is_zero() {
                    continue;
                }
                let before = x.is_zero();
                *x = field.add(*x, r);
                match (before, x.is_zero()) {
                    (true, false) => weight += 1,
                    (false, true) => weight -= 1,
                    _ => {}
                }
            }
            digits[pos] += 1;
            if digits[pos] < p {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
    best
}

fn scan_naive(
    spec: &CartesianSpec,
    matrix: &GeneratorMatrix,
    lo: u64,
    hi: u64,
    target: Option<u64>,
    stop: &AtomicBool,
) -> WeightExtremes {
    let field = matrix.field();
    let q = field.order();
    let k = matrix.nrows();
    let nvars = spec.grid().nvars();
    let mut best = WeightExtremes::empty();
    for w in lo.max(1)..hi {
        if w % 4096 == 0 && stop.load(Ordering::Relaxed) {
            break;
        }
        let message = message_of_word(q, k, w);
        let weight = code_core::hamming_weight(
            &code_core::encode(matrix, &message).expect("message length matches"),
        );
        if weight < best.min_weight {
            best.min_weight = weight;
            best.min_word = w;
        }
        let poly = MultiPoly::from_terms(
            field,
            nvars,
            matrix
                .monomials()
                .iter()
                .cloned()
                .zip(message.iter().copied()),
        )
        .expect("monomials match the grid arity");
        let zeros = multipoly::zero_count(&poly, spec.grid()).expect("arity matches");
        best.max_zeros = best.max_zeros.max(zeros);
        if let Some(t) = target {
            if weight <= t {
                stop.store(true, Ordering::Relaxed);
            }
        }
    }
    best
}

/// Exact minimum Hamming weight over all nonzero codewords.
pub fn brute_min_distance(
    spec: &CartesianSpec,
    budget: &OracleBudget,
    options: &OracleOptions,
) -> Result<u64, OracleError> {
    let matrix = build_matrix_within(spec, budget)?;
    Ok(weight_extremes(spec, &matrix, budget, options)?.min_weight)
}

/// Largest number of grid zeros of a nonzero reduced polynomial of degree
/// at most `d`.
pub fn max_zero_search(
    spec: &CartesianSpec,
    budget: &OracleBudget,
    options: &OracleOptions,
) -> Result<u64, OracleError> {
    let matrix = build_matrix_within(spec, budget)?;
    let options = OracleOptions {
        confirm_target: None,
        ..options.clone()
    };
    Ok(weight_extremes(spec, &matrix, budget, &options)?.max_zeros)
}

fn build_matrix_within(
    spec: &CartesianSpec,
    budget: &OracleBudget,
) -> Result<GeneratorMatrix, OracleError> {
    check_points(spec, budget)?;
    // q^k is checked again by the scan; checking here avoids building a
    // huge matrix for nothing.
    let k = code_core::standard_monomials(&spec.grid().cards(), spec.degree()).len();
    budget_check(
        "codewords",
        word_count(spec.field().order(), k),
        budget.max_words,
    )?;
    Ok(build_generator_matrix(spec))
}

/// All monomials in `n` variables of total degree at most `d`.
pub fn all_monomials(nvars: usize, d: u64) -> Vec<Monomial> {
    fn walk(nvars: usize, budget: u64, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() == nvars {
            out.push(Monomial::new(prefix.clone()));
            return;
        }
        for a in 0..=budget {
            prefix.push(a as u32);
            walk(nvars, budget - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    walk(nvars, d, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn binomial_u128(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(u128::from(n - i)) / u128::from(i + 1);
    }
    acc
}

/// Rank of the evaluation matrix of every monomial of degree at most `d`.
pub fn brute_rank_dimension(
    spec: &CartesianSpec,
    budget: &OracleBudget,
) -> Result<u64, OracleError> {
    check_points(spec, budget)?;
    let n = spec.grid().nvars() as u64;
    let d = spec.degree();
    let points = spec.grid().point_count();
    let count = binomial_u128(n + d, n);
    budget_check(
        "evaluation matrix entries",
        count.saturating_mul(u128::from(points)),
        budget.max_entries,
    )?;
    let monomials = all_monomials(n as usize, d);
    let rows = code_core::evaluation_matrix(spec.grid(), &monomials);
    let field = spec.field();
    let mut ech = RowEchelon::new(field);
    for row in &rows {
        if ech.rank() as u64 == points {
            break;
        }
        ech.insert(row);
    }
    Ok(ech.rank() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub formula: Option<u64>,
    pub oracle: Option<u64>,
    pub status: CheckStatus,
    pub elapsed_ms: f64,
    /// Counterexample on failure, reason on skip.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub q: u32,
    pub cards: Vec<u64>,
    pub d: u64,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    /// No check failed. Skipped checks are not failures, but see
    /// [`VerificationReport::fully_verified`].
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    /// Every check ran and passed.
    pub fn fully_verified(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check == name)
    }
}

struct Recorder {
    timing: bool,
    checks: Vec<CheckResult>,
}

impl Recorder {
    fn run(
        &mut self,
        name: &str,
        formula: u64,
        oracle: impl FnOnce() -> Result<(u64, Option<String>), OracleError>,
    ) {
        let start = Instant::now();
        let outcome = oracle();
        let elapsed_ms = if self.timing {
            start.elapsed().as_secs_f64() * 1e3
        } else {
            0.0
        };
        let (oracle, status, detail) = match outcome {
            Ok((value, _)) if value == formula => (Some(value), CheckStatus::Pass, None),
            Ok((value, witness)) => (Some(value), CheckStatus::Fail, witness),
            Err(e) => (None, CheckStatus::Skipped, Some(e.to_string())),
        };
        self.checks.push(CheckResult {
            check: name.to_string(),
            formula: Some(formula),
            oracle,
            status,
            elapsed_ms,
            detail,
        });
    }
}

/// Runs every applicable oracle against the formulas.
pub fn verify_params(
    spec: &CartesianSpec,
    budget: &OracleBudget,
    options: &OracleOptions,
) -> VerificationReport {
    if spec.grid().point_count() > budget.max_points {
        let mut rec = Recorder {
            timing: options.timing,
            checks: Vec::new(),
        };
        let dimension = dimension_formula(&spec.cards(), spec.degree());
        rec.run("generator_rank", dimension, || {
            check_points(spec, budget).map(|_| (0, None))
        });
        return finish(spec, rec.checks);
    }
    let matrix = build_generator_matrix(spec);
    verify_with_matrix(spec, &matrix, budget, options)
}

/// [`verify_params`] with a caller-supplied generator matrix, so a damaged
/// matrix can be shown to fail.
pub fn verify_with_matrix(
    spec: &CartesianSpec,
    matrix: &GeneratorMatrix,
    budget: &OracleBudget,
    options: &OracleOptions,
) -> VerificationReport {
    let cards = spec.cards();
    let d = spec.degree();
    let length = cards.length();
    let dimension = dimension_formula(&cards, d);
    let delta = min_distance_formula(&cards, d);
    let mut rec = Recorder {
        timing: options.timing,
        checks: Vec::new(),
    };

    rec.run("length", length, || Ok((spec.grid().point_count(), None)));
    rec.run("hilbert_function", dimension, || {
        Ok((hilbert_function(&cards, d), None))
    });
    rec.run("generator_rank", dimension, || {
        check_points(spec, budget)?;
        let field = matrix.field();
        let mut ech = RowEchelon::new(field);
        let mut witness = None;
        for (i, row) in matrix.rows().iter().enumerate() {
            if !ech.insert(row) && witness.is_none() {
                witness = Some(format!(
                    "row {i} (monomial {:?}) is a combination of earlier rows",
                    matrix.monomials()[i].exponents()
                ));
            }
        }
        let rank = ech.rank() as u64;
        if witness.is_none() && matrix.nrows() as u64 != dimension {
            witness = Some(format!("matrix has {} rows", matrix.nrows()));
        }
        // full row rank is part of the claim
        let value = if witness.is_some() && rank == dimension {
            u64::MAX
        } else {
            rank
        };
        Ok((value, witness))
    });
    rec.run("rank_dimension", dimension, || {
        brute_rank_dimension(spec, budget).map(|r| (r, None))
    });

    // confirm-only mode stops at the first word reaching the formula value
    let extremes = weight_extremes(
        spec,
        matrix,
        budget,
        &OracleOptions {
            confirm_target: options.confirm_target.map(|_| delta),
            ..options.clone()
        },
    );
    let q = matrix.field().order();
    rec.run("min_distance", delta, || {
        extremes.clone().map(|x| {
            let witness = format!(
                "message {:?} has weight {}",
                message_of_word(q, matrix.nrows(), x.min_word)
                    .iter()
                    .map(|c| c.code())
                    .collect::<Vec<_>>(),
                x.min_weight
            );
            (x.min_weight, Some(witness))
        })
    });
    let zeros = match code_core::zero_bound(&cards, d) {
        Ok(b) => b,
        Err(_) => length - delta,
    };
    rec.run("max_zeros", zeros, || extremes.map(|x| (x.max_zeros, None)));

    if code_core::decompose_k_ell(&cards, d).is_ok() {
        rec.run("extremal_weight", delta, || {
            let ex = extremal_codeword(spec)?;
            if ex.polynomial.total_degree() != Degree::Finite(d as u32) {
                return Ok((
                    u64::MAX,
                    Some(format!("polynomial {} has wrong degree", ex.polynomial)),
                ));
            }
            Ok((ex.weight(), Some(format!("polynomial {}", ex.polynomial))))
        });
    }
    finish(spec, rec.checks)
}

fn finish(spec: &CartesianSpec, checks: Vec<CheckResult>) -> VerificationReport {
    VerificationReport {
        q: spec.field().order(),
        cards: spec.grid().cards(),
        d: spec.degree(),
        checks,
    }
}
