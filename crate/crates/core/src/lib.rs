//! Affine cartesian evaluation codes over finite fields.
//!
//! A cartesian code `C(d)` evaluates every polynomial of total degree at
//! most `d` at the points of a grid `A_1 x ... x A_n` inside `F_q^n`. Its
//! length, dimension and minimum distance depend only on the set sizes
//! `d_1 <= ... <= d_n`; [`code_core`] computes them in closed form and
//! [`oracle`] checks them by exhaustive search on small instances.

pub mod arith;
pub mod code_core;
pub mod constructions;
pub mod finite_field;
pub mod linalg;
pub mod multipoly;
pub mod oracle;

pub use code_core::{
    build_generator_matrix, decompose_k_ell, dimension_formula, encode, extremal_codeword,
    hilbert_data, hilbert_function, loose_zero_bound, min_distance_formula, normalize_spec,
    zero_bound, Cards, CartesianSpec, CodeError, CodeParams, ExtremalCodeword, GeneratorMatrix,
    HilbertData, KLDecomposition,
};
pub use constructions::{
    degenerate_torus_for_degrees, projective_torus_params, reed_muller_params,
    torus_spec_from_type, ConstructionError, DegenerateTorusSpec, TorusSearch,
};
pub use finite_field::{
    make_field, make_field_capped, Field, FieldElement, FieldError, MultiplicativeSubgroup,
    DEFAULT_MAX_FIELD,
};
pub use multipoly::{
    reduce_mod_grid, zero_count, Degree, EvaluationGrid, Monomial, MultiPoly, PolyError,
};
pub use oracle::{
    brute_min_distance, brute_rank_dimension, max_zero_search, verify_params, OracleBudget,
    OracleError, OracleOptions, VerificationReport,
};
