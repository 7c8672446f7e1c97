//! Exact integer and rational linear algebra.
//!
//! Everything here works over [`BigInt`] / [`BigRational`]; there is no
//! floating point anywhere in the crate. Matrices are small (tens of rows),
//! so the algorithms favour clarity and determinism over asymptotics.

mod lp;
mod matrix;
mod snf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use lp::feasible_nonnegative;
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithForm};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Integer vector in some lattice `Z^n`.
pub type IntVector = Vec<Int>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("index {index} out of range for {len} generators")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("empty generator list")]
    Empty,
}

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn int_vec(values: &[i64]) -> IntVector {
    values.iter().copied().map(Int::from).collect()
}

pub fn zero_vec(n: usize) -> IntVector {
    vec![Int::zero(); n]
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add_vec(a: &[Int], b: &[Int]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Int], b: &[Int]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(k: &Int, a: &[Int]) -> IntVector {
    a.iter().map(|x| k * x).collect()
}

pub fn is_zero_vec(a: &[Int]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// gcd of the coordinates; zero for the zero vector.
pub fn content(a: &[Int]) -> Int {
    use num_integer::Integer;
    a.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Exact rational vector; entries are always reduced with positive denominators
/// (maintained by [`BigRational`] itself).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalVector(pub Vec<Rat>);

impl RationalVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.0
    }

    /// The entries as integers, if every denominator is one.
    pub fn to_integers(&self) -> Option<IntVector> {
        self.0
            .iter()
            .map(|q| q.is_integer().then(|| q.to_integer()))
            .collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|q| !q.is_negative())
    }

    /// Indices of strictly positive entries.
    pub fn positive_support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, q)| q.is_positive())
            .map(|(i, _)| i)
            .collect()
    }
}

fn check_dims(gens: &[IntVector], point: &[Int]) -> Result<usize, LatticeError> {
    let dim = point.len();
    for g in gens {
        if g.len() != dim {
            return Err(LatticeError::DimensionMismatch { expected: dim, found: g.len() });
        }
    }
    Ok(dim)
}

/// Rank of a list of integer vectors.
pub fn rank(vectors: &[IntVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    IntMatrix::from_rows(vectors).rank()
}

/// Coefficients of `point` in the basis `gens`, or `None` when `point` is not
/// in their span. Coefficients may be negative.
pub fn express_in_basis(
    gens: &[IntVector],
    point: &[Int],
) -> Result<Option<RationalVector>, LatticeError> {
    let dim = check_dims(gens, point)?;
    let k = gens.len();
    if rank(gens) != k {
        return Err(LatticeError::DependentGenerators);
    }
    // Augmented system [g_1 .. g_k | point], one row per coordinate.
    let mut rows: Vec<Vec<Rat>> = (0..dim)
        .map(|r| {
            let mut row: Vec<Rat> = gens.iter().map(|g| Rat::from(g[r].clone())).collect();
            row.push(Rat::from(point[r].clone()));
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..k {
        let Some(p) = (pivot_row..dim).find(|&r| !rows[r][col].is_zero()) else {
            return Err(LatticeError::DependentGenerators);
        };
        rows.swap(pivot_row, p);
        let inv = rows[pivot_row][col].recip();
        for entry in rows[pivot_row].iter_mut() {
            *entry *= &inv;
        }
        for r in 0..dim {
            if r != pivot_row && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..=k {
                    let delta = &factor * &rows[pivot_row][c];
                    rows[r][c] -= delta;
                }
            }
        }
        pivot_row += 1;
    }
    if rows[k..].iter().any(|row| !row[k].is_zero()) {
        return Ok(None);
    }
    Ok(Some(RationalVector(rows[..k].iter().map(|row| row[k].clone()).collect())))
}

/// Nonnegative coordinates of `point` in the simplicial cone spanned by the
/// linearly independent `gens`, or `None` if the point lies outside the cone.
pub fn cone_coordinates(
    gens: &[IntVector],
    point: &[Int],
) -> Result<Option<RationalVector>, LatticeError> {
    Ok(express_in_basis(gens, point)?.filter(RationalVector::is_nonnegative))
}

/// Some integer `x` with `M·x = v`, if one exists.
pub fn solve_integer(m: &IntMatrix, v: &[Int]) -> Result<Option<IntVector>, LatticeError> {
    if v.len() != m.rows() {
        return Err(LatticeError::DimensionMismatch { expected: m.rows(), found: v.len() });
    }
    // U·M·V = S, so M·x = v  <=>  S·y = U·v with x = V·y.
    let SmithForm { s, u, v: right } = smith_normal_form(m);
    let uv = u.mul_vec(v);
    let mut y = zero_vec(m.cols());
    for (i, target) in uv.iter().enumerate() {
        let d = if i < m.cols() { s.get(i, i).clone() } else { Int::zero() };
        if d.is_zero() {
            if !target.is_zero() {
                return Ok(None);
            }
        } else {
            if !(target % &d).is_zero() {
                return Ok(None);
            }
            y[i] = target / &d;
        }
    }
    let x = right.mul_vec(&y);
    debug_assert_eq!(m.mul_vec(&x), v);
    Ok(Some(x))
}

/// Whether `h` is a positive multiple of `g` (both nonzero).
pub fn is_positive_multiple(h: &[Int], g: &[Int]) -> bool {
    let Some(k) = g.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    if h[k].is_zero() || h[k].is_negative() != g[k].is_negative() {
        return false;
    }
    h.iter().zip(g).all(|(hi, gi)| hi * &g[k] == gi * &h[k])
}

/// Whether the cone generated by `gens` contains no line.
pub fn is_pointed(gens: &[IntVector]) -> bool {
    let nonzero: Vec<&IntVector> = gens.iter().filter(|g| !is_zero_vec(g)).collect();
    if nonzero.is_empty() {
        return true;
    }
    let dim = nonzero[0].len();
    // Σ λ_j g_j = 0 with Σ λ_j = 1, λ >= 0.
    let mut rows: Vec<Vec<Rat>> = (0..dim)
        .map(|r| nonzero.iter().map(|g| Rat::from(g[r].clone())).collect())
        .collect();
    rows.push(vec![Rat::one(); nonzero.len()]);
    let mut rhs = vec![Rat::zero(); dim];
    rhs.push(Rat::one());
    feasible_nonnegative(&rows, &rhs).is_none()
}

/// Whether the ray through `gens[index]` is a one-dimensional face of the
/// cone generated by all of `gens`.
pub fn is_extremal_generator(gens: &[IntVector], index: usize) -> Result<bool, LatticeError> {
    if gens.is_empty() {
        return Err(LatticeError::Empty);
    }
    if index >= gens.len() {
        return Err(LatticeError::IndexOutOfRange { index, len: gens.len() });
    }
    let target = &gens[index];
    check_dims(gens, target)?;
    if is_zero_vec(target) || !is_pointed(gens) {
        return Ok(false);
    }
    let off_ray: Vec<&IntVector> = gens
        .iter()
        .filter(|h| !is_zero_vec(h) && !is_positive_multiple(h, target))
        .collect();
    if off_ray.is_empty() {
        return Ok(true);
    }
    let rows: Vec<Vec<Rat>> = (0..target.len())
        .map(|r| off_ray.iter().map(|h| Rat::from(h[r].clone())).collect())
        .collect();
    let rhs: Vec<Rat> = target.iter().cloned().map(Rat::from).collect();
    Ok(feasible_nonnegative(&rows, &rhs).is_none())
}
