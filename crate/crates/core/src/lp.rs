//! Dense exact-rational simplex for small feasibility LPs.
//!
//! Maximizes a linear objective over { x : A x <= b } with every variable
//! unrestricted in sign. Free variables are split into differences of
//! nonnegative parts, rows with negative right-hand sides get artificial
//! variables, and a two-phase simplex with Bland's rule runs on the
//! resulting tableau. Bland's rule plus exact arithmetic rules out
//! cycling, so termination is unconditional.

use num_traits::{One, Signed, Zero};

use crate::Rat;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

/// Maximize `objective . x` subject to `rows[i] . x <= rhs[i]` with x free.
pub fn maximize_free(objective: &[Rat], rows: &[Vec<Rat>], rhs: &[Rat]) -> LpOutcome {
    let nv = objective.len();
    let m = rows.len();
    debug_assert!(rows.iter().all(|r| r.len() == nv));
    debug_assert_eq!(rhs.len(), m);

    let ns = 2 * nv; // split columns: var j -> (2j) positive part, (2j+1) negative part
    let slack0 = ns;
    let mut need_artificial = Vec::new();

    // constraint matrix with slack columns, rhs normalized nonnegative
    let mut a: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut b: Vec<Rat> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Rat::zero(); ns + m];
        let negate = rhs[i].is_negative();
        for j in 0..nv {
            let v = if negate {
                -rows[i][j].clone()
            } else {
                rows[i][j].clone()
            };
            row[2 * j + 1] = -v.clone();
            row[2 * j] = v;
        }
        row[slack0 + i] = if negate { -Rat::one() } else { Rat::one() };
        b.push(if negate {
            -rhs[i].clone()
        } else {
            rhs[i].clone()
        });
        if negate {
            need_artificial.push(i);
        }
        a.push(row);
    }

    let na = need_artificial.len();
    let art0 = ns + m;
    let total = ns + m + na;
    let mut basis = vec![usize::MAX; m];
    for row in a.iter_mut() {
        row.resize(total, Rat::zero());
    }
    for (k, &i) in need_artificial.iter().enumerate() {
        a[i][art0 + k] = Rat::one();
        basis[i] = art0 + k;
    }
    for (i, b) in basis.iter_mut().enumerate() {
        if *b == usize::MAX {
            *b = slack0 + i;
        }
    }

    let mut t = Tableau {
        cols: total,
        rows: a
            .into_iter()
            .zip(b)
            .map(|(mut r, bi)| {
                r.push(bi);
                r
            })
            .collect(),
        obj: vec![Rat::zero(); total + 1],
        basis,
        enterable: vec![true; total],
    };

    if na > 0 {
        // phase 1: maximize -(sum of artificials)
        let mut c1 = vec![Rat::zero(); total];
        for k in 0..na {
            c1[art0 + k] = -Rat::one();
        }
        t.set_objective(&c1);
        t.solve();
        if !t.obj[total].is_zero() {
            return LpOutcome::Infeasible;
        }
        // pivot remaining basic artificials out (degenerate pivots), or
        // drop redundant all-zero rows
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= art0 {
                if let Some(e) = (0..art0).find(|&j| !t.rows[i][j].is_zero()) {
                    t.pivot(i, e);
                } else {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }
        for k in 0..na {
            t.enterable[art0 + k] = false;
        }
    }

    // phase 2: the real objective on the split structural columns
    let mut c2 = vec![Rat::zero(); total];
    for j in 0..nv {
        c2[2 * j] = objective[j].clone();
        c2[2 * j + 1] = -objective[j].clone();
    }
    t.set_objective(&c2);
    if !t.solve() {
        return LpOutcome::Unbounded;
    }

    let mut point = vec![Rat::zero(); nv];
    for (row, &col) in t.basis.iter().enumerate() {
        if col < ns {
            let v = t.rows[row][t.cols].clone();
            if col % 2 == 0 {
                point[col / 2] += v;
            } else {
                point[col / 2] -= v;
            }
        }
    }
    LpOutcome::Optimal {
        value: t.obj[t.cols].clone(),
        point,
    }
}

struct Tableau {
    cols: usize,
    /// Each row has cols+1 entries, the right-hand side last.
    rows: Vec<Vec<Rat>>,
    /// Bottom row: obj[j] >= 0 for all enterable j means optimal;
    /// obj[cols] holds the current objective value.
    obj: Vec<Rat>,
    basis: Vec<usize>,
    enterable: Vec<bool>,
}

impl Tableau {
    /// Install a maximization objective and canonicalize it against the
    /// current basis.
    fn set_objective(&mut self, c: &[Rat]) {
        self.obj = c.iter().map(|v| -v.clone()).collect();
        self.obj.push(Rat::zero());
        for row in 0..self.rows.len() {
            let b = self.basis[row];
            if !self.obj[b].is_zero() {
                let factor = self.obj[b].clone();
                for j in 0..=self.cols {
                    let sub = &factor * &self.rows[row][j];
                    self.obj[j] -= sub;
                }
            }
        }
    }

    /// Run Bland-rule pivots to optimality. Returns false on unboundedness.
    fn solve(&mut self) -> bool {
        loop {
            let entering = (0..self.cols).find(|&j| self.enterable[j] && self.obj[j].is_negative());
            let Some(e) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][e].is_positive() {
                    let ratio = &self.rows[i][self.cols] / &self.rows[i][e];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, e);
        }
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let inv = self.rows[r][e].clone();
        if !inv.is_one() {
            for j in 0..=self.cols {
                let v = std::mem::replace(&mut self.rows[r][j], Rat::zero());
                self.rows[r][j] = v / &inv;
            }
        }
        for i in 0..self.rows.len() {
            if i != r && !self.rows[i][e].is_zero() {
                let factor = std::mem::replace(&mut self.rows[i][e], Rat::zero());
                for j in 0..=self.cols {
                    if j == e {
                        continue;
                    }
                    let sub = &factor * &self.rows[r][j];
                    self.rows[i][j] -= sub;
                }
            }
        }
        if !self.obj[e].is_zero() {
            let factor = std::mem::replace(&mut self.obj[e], Rat::zero());
            for j in 0..=self.cols {
                if j == e {
                    continue;
                }
                let sub = &factor * &self.rows[r][j];
                self.obj[j] -= sub;
            }
        }
        self.basis[r] = e;
    }
}
