//! Named families of cartesian codes: degenerate tori, the projective
//! torus, and affine Reed–Muller codes.

use std::sync::Arc;

use thiserror::Error;

use crate::arith;
use crate::code_core::{
    dimension_formula, normalize_spec, Cards, CartesianSpec, CodeError, CodeParams,
};
use crate::finite_field::{Field, FieldElement, FieldError, DEFAULT_MAX_FIELD};
use crate::multipoly::{EvaluationGrid, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("at least one degree is required")]
    NoDegrees,
    #[error("degree {value} at position {index} is below 2")]
    InvalidDegree { index: usize, value: u64 },
    #[error("no admissible field size q = 1 mod {modulus} up to {cap}")]
    SearchExceeded { modulus: u64, cap: u64 },
    #[error("no field of the required kind has {0} elements")]
    InvalidField(u64),
    #[error("the evaluation degree must be at least 1")]
    ZeroDegree,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Field search policy for [`degenerate_torus_for_degrees`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusSearch {
    /// Also accept prime powers, not just primes.
    pub allow_prime_powers: bool,
    pub max_field: u64,
}

impl Default for TorusSearch {
    fn default() -> Self {
        TorusSearch {
            allow_prime_powers: false,
            max_field: DEFAULT_MAX_FIELD,
        }
    }
}

/// The degenerate torus `{(x_1^{v_1}, ..., x_n^{v_n}) : x_i in F_q^*}`.
///
/// Coordinate `i` ranges over the cyclic subgroup of `F_q^*` generated by
/// `beta^{v_i}`, which has `(q - 1) / gcd(v_i, q - 1)` elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerateTorusSpec {
    field: Arc<Field>,
    v: Vec<u64>,
    degrees: Vec<u64>,
    grid: EvaluationGrid,
}

impl DegenerateTorusSpec {
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// The type vector `(v_1, ..., v_n)`.
    pub fn v(&self) -> &[u64] {
        &self.v
    }

    /// Subgroup orders `d_i = |A_i|`, in input order.
    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// The (unnormalized) grid of subgroups, in input order.
    pub fn grid(&self) -> &EvaluationGrid {
        &self.grid
    }

    pub fn cards(&self) -> Cards {
        Cards::new(self.degrees.clone()).expect("subgroups are non-empty")
    }

    /// The cartesian code of degree `d` on this torus.
    pub fn code(&self, d: u64) -> Result<CartesianSpec, CodeError> {
        normalize_spec(self.field.clone(), self.grid.sets().to_vec(), d)
    }

    pub fn params(&self, d: u64) -> CodeParams {
        CodeParams::compute(&self.cards(), d)
    }
}

/// Builds a degenerate torus whose coordinate subgroups have the requested
/// orders, over the smallest prime `q` with `q = 1 mod lcm(degrees)` (or
/// smallest prime power, if allowed).
pub fn degenerate_torus_for_degrees(
    degrees: &[u64],
    search: &TorusSearch,
) -> Result<DegenerateTorusSpec, ConstructionError> {
    if degrees.is_empty() {
        return Err(ConstructionError::NoDegrees);
    }
    if let Some((index, &value)) = degrees.iter().enumerate().find(|(_, &d)| d < 2) {
        return Err(ConstructionError::InvalidDegree { index, value });
    }
    let modulus = degrees
        .iter()
        .try_fold(1u64, |acc, &d| arith::lcm(acc, d))
        .ok_or(ConstructionError::SearchExceeded {
            modulus: u64::MAX,
            cap: search.max_field,
        })?;
    let exceeded = ConstructionError::SearchExceeded {
        modulus,
        cap: search.max_field,
    };
    let admissible = |m: u64| {
        if search.allow_prime_powers {
            arith::prime_power(m).is_some()
        } else {
            arith::is_prime(m)
        }
    };
    let mut q = modulus.checked_add(1).ok_or(exceeded.clone())?;
    while !admissible(q) {
        q = q.checked_add(modulus).ok_or(exceeded.clone())?;
        if q > search.max_field {
            return Err(exceeded);
        }
    }
    if q > search.max_field {
        return Err(exceeded);
    }
    let field = Arc::new(Field::with_order(q, search.max_field)?);
    let sets = degrees
        .iter()
        .map(|&d| field.subgroup_of_order(d).map(|g| g.into_elements()))
        .collect::<Result<Vec<_>, _>>()?;
    let grid = EvaluationGrid::new(field.clone(), sets)?;
    Ok(DegenerateTorusSpec {
        v: degrees.iter().map(|&d| (q - 1) / d).collect(),
        degrees: degrees.to_vec(),
        field,
        grid,
    })
}

/// The degenerate torus of type `v` over `field`, with each coordinate set
/// computed as the image of `x -> x^{v_i}` on `F_q^*`.
pub fn torus_spec_from_type(
    field: Arc<Field>,
    v: &[u64],
) -> Result<DegenerateTorusSpec, ConstructionError> {
    let sets: Vec<Vec<FieldElement>> = v
        .iter()
        .map(|&vi| {
            let mut image: Vec<FieldElement> =
                field.elements().skip(1).map(|x| field.pow(x, vi)).collect();
            image.sort_unstable();
            image.dedup();
            image
        })
        .collect();
    let degrees = sets.iter().map(|s| s.len() as u64).collect();
    let grid = EvaluationGrid::new(field.clone(), sets)?;
    Ok(DegenerateTorusSpec {
        field,
        v: v.to_vec(),
        degrees,
        grid,
    })
}

fn check_field_order(q: u64) -> Result<(), ConstructionError> {
    if arith::prime_power(q).is_none() {
        return Err(ConstructionError::InvalidField(q));
    }
    Ok(())
}

/// Parameters of the code on the projective torus (every `A_i = F_q^*`),
/// with the minimum distance from its own closed form
/// `(q-1)^{n-k-1} (q-1-ell)`, `d = k(q-2) + ell`, `1 <= ell <= q-2`.
pub fn projective_torus_params(q: u64, n: usize, d: u64) -> Result<CodeParams, ConstructionError> {
    check_field_order(q)?;
    if q == 2 {
        return Err(ConstructionError::InvalidField(q));
    }
    if d == 0 {
        return Err(ConstructionError::ZeroDegree);
    }
    let n64 = n as u64;
    let cards = Cards::new(vec![q - 1; n])?;
    let min_distance = if d >= (q - 2) * n64 {
        1
    } else {
        let k = (d - 1) / (q - 2);
        let ell = d - k * (q - 2);
        (q - 1).pow((n64 - k - 1) as u32) * (q - 1 - ell)
    };
    Ok(CodeParams {
        length: cards.length(),
        dimension: dimension_formula(&cards, d),
        min_distance,
        regularity: cards.regularity(),
    })
}

/// Parameters of the affine Reed–Muller code (every `A_i = F_q`), with the
/// minimum distance `(q - ell) q^{n-k-1}`, `d = k(q-1) + ell`,
/// `1 <= ell <= q-1`.
pub fn reed_muller_params(q: u64, n: usize, d: u64) -> Result<CodeParams, ConstructionError> {
    check_field_order(q)?;
    if d == 0 {
        return Err(ConstructionError::ZeroDegree);
    }
    let n64 = n as u64;
    let cards = Cards::new(vec![q; n])?;
    let min_distance = if d >= n64 * (q - 1) {
        1
    } else {
        let k = (d - 1) / (q - 1);
        let ell = d - k * (q - 1);
        (q - ell) * q.pow((n64 - k - 1) as u32)
    };
    Ok(CodeParams {
        length: cards.length(),
        dimension: dimension_formula(&cards, d),
        min_distance,
        regularity: cards.regularity(),
    })
}
