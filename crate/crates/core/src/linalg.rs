//! Exact Gaussian elimination over the rationals on sparse rows.
//!
//! Pivots are chosen deterministically: rows are consumed in order and each
//! new pivot is the smallest column left after reduction, so bases derived
//! from [`nullspace`] are reproducible.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::Rational;

pub type SparseVec = BTreeMap<usize, Rational>;

/// Reduced row echelon form built incrementally.
#[derive(Debug, Default, Clone)]
pub struct Echelon {
    /// pivot column -> row normalized to 1 at the pivot, zero on every other pivot column
    pivots: BTreeMap<usize, SparseVec>,
}

fn axpy(target: &mut SparseVec, factor: &Rational, row: &SparseVec) {
    for (c, v) in row {
        let delta = factor * v;
        match target.get_mut(c) {
            Some(t) => {
                *t += delta;
                if t.is_zero() {
                    target.remove(c);
                }
            }
            None => {
                if !delta.is_zero() {
                    target.insert(*c, delta);
                }
            }
        }
    }
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn reduce(&self, row: &mut SparseVec) {
        let hits: Vec<usize> = row.keys().filter(|c| self.pivots.contains_key(c)).copied().collect();
        for c in hits {
            if let Some(v) = row.get(&c).cloned() {
                axpy(row, &-v, &self.pivots[&c]);
            }
        }
    }

    /// Adds a row; returns whether it increased the rank.
    pub fn insert(&mut self, mut row: SparseVec) -> bool {
        row.retain(|_, v| !v.is_zero());
        self.reduce(&mut row);
        let Some((&pc, pv)) = row.iter().next() else {
            return false;
        };
        let inv = pv.recip();
        for v in row.values_mut() {
            *v *= &inv;
        }
        debug_assert!(row[&pc].is_one());
        for other in self.pivots.values_mut() {
            if let Some(v) = other.get(&pc).cloned() {
                axpy(other, &-v, &row);
            }
        }
        self.pivots.insert(pc, row);
        true
    }

    /// Basis of `{v : A v = 0}` for the rows inserted so far, one vector per
    /// free column in increasing order.
    pub fn nullspace(&self, ncols: usize) -> Vec<SparseVec> {
        let mut out = Vec::new();
        for free in (0..ncols).filter(|c| !self.pivots.contains_key(c)) {
            let mut v = SparseVec::new();
            v.insert(free, Rational::one());
            for (pc, row) in &self.pivots {
                if let Some(x) = row.get(&free) {
                    v.insert(*pc, -x.clone());
                }
            }
            out.push(v);
        }
        out
    }

    /// Whether `row` lies in the span of inserted rows.
    pub fn contains(&self, row: &SparseVec) -> bool {
        let mut r = row.clone();
        r.retain(|_, v| !v.is_zero());
        self.reduce(&mut r);
        r.is_empty()
    }
}

/// Basis of the kernel of the matrix with the given sparse rows.
pub fn nullspace(ncols: usize, rows: impl IntoIterator<Item = SparseVec>) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.nullspace(ncols)
}

pub fn rank(rows: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Echelon::new();
    rows.into_iter().filter(|r| e.insert(r.clone())).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn row(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|(c, v)| (*c, int(*v))).collect()
    }

    fn apply(rows: &[SparseVec], v: &SparseVec) -> Vec<Rational> {
        rows.iter()
            .map(|r| r.iter().fold(Rational::zero(), |acc, (c, x)| acc + x * v.get(c).cloned().unwrap_or_default()))
            .collect()
    }

    #[test]
    fn kernel_of_small_matrix() {
        // x0 + x1 + x2 = 0, x1 - x2 = 0
        let rows = vec![row(&[(0, 1), (1, 1), (2, 1)]), row(&[(1, 1), (2, -1)])];
        let k = nullspace(3, rows.clone());
        assert_eq!(k.len(), 1);
        assert!(apply(&rows, &k[0]).iter().all(|x| x.is_zero()));
        assert_eq!(k[0], row(&[(0, -2), (1, 1), (2, 1)]));
    }

    #[test]
    fn dependent_rows_do_not_raise_rank() {
        let rows = vec![row(&[(0, 2), (1, 4)]), row(&[(0, 1), (1, 2)]), row(&[(1, 3)])];
        assert_eq!(rank(rows.clone()), 2);
        assert!(nullspace(2, rows).is_empty());
    }

    #[test]
    fn rank_nullity() {
        let rows = vec![row(&[(0, 1), (3, 1)]), row(&[(1, 1), (3, -1)]), row(&[(0, 1), (1, 1)])];
        let k = nullspace(5, rows.clone());
        assert_eq!(rank(rows.clone()) + k.len(), 5);
        for v in &k {
            assert!(apply(&rows, v).iter().all(|x| x.is_zero()));
        }
    }
}
