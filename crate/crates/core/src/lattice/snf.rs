use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{Int, IntMatrix};

/// `u · m · v = s` with `s` diagonal, `d_1 | d_2 | …`, all `d_i >= 0`, and
/// `u`, `v` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.s.rows().min(self.s.cols())).map(|i| self.s.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    fn add_row(&mut self, dst: usize, src: usize, k: &Int) {
        self.a.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &Int) {
        self.a.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
    }

    /// Position of the smallest nonzero |entry| in the block `[t.., t..]`,
    /// first in row-major order on ties.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for r in t..self.a.rows() {
            for c in t..self.a.cols() {
                let x = self.a.get(r, c);
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((br, bc)) if self.a.get(br, bc).abs() <= x.abs() => {}
                    _ => best = Some((r, c)),
                }
            }
        }
        best
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut w = Work { a: m.clone(), u: IntMatrix::identity(rows), v: IntMatrix::identity(cols) };

    for t in 0..rows.min(cols) {
        let Some((pr, pc)) = w.min_pivot(t) else {
            break;
        };
        w.swap_rows(t, pr);
        w.swap_cols(t, pc);
        loop {
            let mut dirty = false;
            // Clear column t below the pivot.
            for r in t + 1..rows {
                if w.a.get(r, t).is_zero() {
                    continue;
                }
                let q = w.a.get(r, t).div_floor(w.a.get(t, t));
                w.add_row(r, t, &-q);
                if !w.a.get(r, t).is_zero() {
                    w.swap_rows(t, r);
                    dirty = true;
                }
            }
            // Clear row t right of the pivot.
            for c in t + 1..cols {
                if w.a.get(t, c).is_zero() {
                    continue;
                }
                let q = w.a.get(t, c).div_floor(w.a.get(t, t));
                w.add_col(c, t, &-q);
                if !w.a.get(t, c).is_zero() {
                    w.swap_cols(t, c);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: the pivot must divide the remaining block.
            let offender = (t + 1..rows).find(|&r| {
                (t + 1..cols).any(|c| !(w.a.get(r, c) % w.a.get(t, t)).is_zero())
            });
            match offender {
                Some(r) => w.add_row(t, r, &Int::from(1)),
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.a.negate_row(t);
            w.u.negate_row(t);
        }
    }

    SmithForm { s: w.a, u: w.u, v: w.v }
}
