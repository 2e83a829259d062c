//! Exact rational Gaussian elimination and nullspace bases.

use num_traits::{One, Zero};

use crate::Rat;

/// Reduce `m` (rows of equal length `ncols`) to reduced row echelon form
/// in place; returns the pivot column of each pivot row in order.
pub fn rref(m: &mut [Vec<Rat>], ncols: usize) -> Vec<usize> {
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone();
        if !inv.is_one() {
            for v in &mut m[r][c..ncols] {
                let t = std::mem::replace(v, Rat::zero());
                *v = t / &inv;
            }
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let factor = std::mem::replace(&mut m[i][c], Rat::zero());
                let (pivot_row, target_row) = two_rows(m, r, i);
                for (t, p) in target_row[c + 1..ncols]
                    .iter_mut()
                    .zip(&pivot_row[c + 1..ncols])
                {
                    let sub = &factor * p;
                    *t -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Borrow row `pivot` immutably and row `target` mutably at once.
fn two_rows(m: &mut [Vec<Rat>], pivot: usize, target: usize) -> (&Vec<Rat>, &mut Vec<Rat>) {
    if target < pivot {
        let (lo, hi) = m.split_at_mut(pivot);
        (&hi[0], &mut lo[target])
    } else {
        let (lo, hi) = m.split_at_mut(target);
        (&lo[pivot], &mut hi[0])
    }
}

pub fn rank(mut m: Vec<Vec<Rat>>, ncols: usize) -> usize {
    rref(&mut m, ncols).len()
}

/// A basis of { x : M x = 0 }, one vector per free column, in increasing
/// free-column order. The basis is deterministic for a given matrix.
pub fn nullspace_basis(mut m: Vec<Vec<Rat>>, ncols: usize) -> Vec<Vec<Rat>> {
    let pivots = rref(&mut m, ncols);
    let mut pivot_row_of_col = vec![None; ncols];
    for (row, &col) in pivots.iter().enumerate() {
        pivot_row_of_col[col] = Some(row);
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_row_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (row, &col) in pivots.iter().enumerate() {
            v[col] = -m[row][free].clone();
        }
        basis.push(v);
    }
    basis
}
