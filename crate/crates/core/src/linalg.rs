//! Gaussian elimination over `F_q`.

use crate::finite_field::{Field, FieldElement};

/// Incrementally built row-echelon basis of a row space.
///
/// Each stored row has a pivot entry equal to one and is zero at the pivot
/// columns of every row stored before it.
pub struct RowEchelon<'f> {
    field: &'f Field,
    pivots: Vec<(usize, Vec<FieldElement>)>,
}

impl<'f> RowEchelon<'f> {
    pub fn new(field: &'f Field) -> Self {
        RowEchelon {
            field,
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn reduce(&self, row: &[FieldElement]) -> Vec<FieldElement> {
        let f = self.field;
        let mut row = row.to_vec();
        for (col, pivot) in &self.pivots {
            let c = row[*col];
            if c.is_zero() {
                continue;
            }
            for (x, &p) in row.iter_mut().zip(pivot) {
                if !p.is_zero() {
                    *x = f.sub(*x, f.mul(c, p));
                }
            }
        }
        row
    }

    /// Adds `row` to the basis. Returns `false` when it already lies in the
    /// span.
    pub fn insert(&mut self, row: &[FieldElement]) -> bool {
        let mut reduced = self.reduce(row);
        let Some(col) = reduced.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = self
            .field
            .inv(reduced[col])
            .expect("pivot entry is nonzero");
        for x in reduced.iter_mut() {
            *x = self.field.mul(*x, inv);
        }
        self.pivots.push((col, reduced));
        true
    }

    pub fn contains(&self, row: &[FieldElement]) -> bool {
        self.reduce(row).iter().all(|x| x.is_zero())
    }
}

/// Rank of the matrix with the given rows.
pub fn rank<R: AsRef<[FieldElement]>>(field: &Field, rows: &[R]) -> usize {
    let mut ech = RowEchelon::new(field);
    for r in rows {
        ech.insert(r.as_ref());
    }
    ech.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::make_field;

    fn row(f: &Field, codes: &[u64]) -> Vec<FieldElement> {
        codes.iter().map(|&c| f.element(c).unwrap()).collect()
    }

    #[test]
    fn rank_over_f2_and_f5() {
        let f2 = make_field(2, 1).unwrap();
        let rows = vec![
            row(&f2, &[1, 1, 0]),
            row(&f2, &[0, 1, 1]),
            row(&f2, &[1, 0, 1]),
        ];
        assert_eq!(rank(&f2, &rows), 2);

        let f5 = make_field(5, 1).unwrap();
        let rows = vec![
            row(&f5, &[1, 2, 3]),
            row(&f5, &[0, 1, 4]),
            row(&f5, &[1, 3, 2]),
        ];
        // r3 = r1 + r2 over F_5
        assert_eq!(rank(&f5, &rows), 2);
        assert_eq!(rank::<Vec<FieldElement>>(&f5, &[]), 0);
    }

    #[test]
    fn membership() {
        let f4 = make_field(2, 2).unwrap();
        let mut ech = RowEchelon::new(&f4);
        assert!(ech.insert(&row(&f4, &[1, 2, 3, 0])));
        assert!(ech.insert(&row(&f4, &[0, 1, 1, 1])));
        let combo: Vec<FieldElement> = row(&f4, &[1, 2, 3, 0])
            .iter()
            .zip(row(&f4, &[0, 1, 1, 1]))
            .map(|(&a, b)| f4.add(f4.mul(a, f4.element(2).unwrap()), b))
            .collect();
        assert!(ech.contains(&combo));
        assert!(!ech.insert(&combo));
        assert!(!ech.contains(&row(&f4, &[0, 0, 0, 1])));
    }
}
