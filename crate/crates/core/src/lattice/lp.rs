//! Phase-one simplex over the rationals.
//!
//! Only feasibility is needed: is there `x >= 0` with `A·x = b`? Pivoting
//! uses Bland's rule, so the method terminates and its output is a
//! deterministic function of the input.

use num_traits::{Signed, Zero};

use super::Rat;

/// A nonnegative solution of `rows · x = rhs`, or `None` if the system is
/// infeasible. Each row of `rows` must have the same length.
pub fn feasible_nonnegative(rows: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(rows.len(), rhs.len(), "one right-hand side per row");
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    if m == 0 {
        return Some(vec![Rat::zero(); n]);
    }

    // Tableau columns: n originals, m artificials, then the right-hand side.
    let width = n + m + 1;
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for (i, (row, b)) in rows.iter().zip(rhs).enumerate() {
        assert_eq!(row.len(), n, "ragged constraint rows");
        let flip = b.is_negative();
        let mut line = Vec::with_capacity(width);
        line.extend(row.iter().map(|a| if flip { -a } else { a.clone() }));
        line.extend((0..m).map(|j| if j == i { Rat::from_integer(1.into()) } else { Rat::zero() }));
        line.push(if flip { -b } else { b.clone() });
        t.push(line);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        // Reduced cost of column j for minimizing the sum of artificials:
        // entering is profitable when the column sum over artificial-basic rows is positive.
        let entering = (0..n).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let score: Rat = (0..m).filter(|&i| basis[i] >= n).map(|i| t[i][j].clone()).sum();
            score.is_positive()
        });
        let Some(j) = entering else {
            break;
        };
        // Ratio test; ties broken by the smallest basic variable index.
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            if !t[i][j].is_positive() {
                continue;
            }
            let ratio = &t[i][width - 1] / &t[i][j];
            leave = match leave {
                None => Some((i, ratio)),
                Some((li, lr)) => {
                    if ratio < lr || (ratio == lr && basis[i] < basis[li]) {
                        Some((i, ratio))
                    } else {
                        Some((li, lr))
                    }
                }
            };
        }
        let Some((r, _)) = leave else {
            // Unbounded direction for the phase-one objective cannot occur
            // (objective is bounded below by zero), but a column with no
            // positive entry simply cannot enter.
            break;
        };
        pivot(&mut t, r, j);
        basis[r] = j;
    }

    let infeasible = (0..m).any(|i| basis[i] >= n && !t[i][width - 1].is_zero());
    if infeasible {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<Rat>], r: usize, c: usize) {
    let inv = t[r][c].recip();
    for v in t[r].iter_mut() {
        *v *= &inv;
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let factor = row[c].clone();
        for (v, p) in row.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &factor * p;
            }
        }
    }
}
