//! Oracles shared by the integration tests. They avoid the library's own
//! algorithms: facets come from brute-force hyperplane enumeration, curve
//! intersection numbers from wall relations solved by plain elimination.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use toric_whb::catalog::Variety;
use toric_whb::lattice::IntMatrix;
use toric_whb::Fan;

pub type Q = BigRational;

pub fn q(x: &BigInt) -> Q {
    Q::from(x.clone())
}

/// Row-reduces `rows` in place over Q and returns the rank.
pub fn rank_q(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                for k in c..cols {
                    let t = &f * &rows[r][k];
                    rows[i][k] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn rank_int(vectors: &[Vec<BigInt>]) -> usize {
    rank_q(vectors.iter().map(|v| v.iter().map(q).collect()).collect())
}

/// Solves `Σ x_j cols[j] = rhs` exactly, if solvable.
pub fn solve_q(cols: &[Vec<BigInt>], rhs: &[BigInt]) -> Option<Vec<Q>> {
    let n = cols.len();
    let m = rhs.len();
    let mut a: Vec<Vec<Q>> = (0..m)
        .map(|i| {
            let mut row: Vec<Q> = cols.iter().map(|c| q(&c[i])).collect();
            row.push(q(&rhs[i]));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for k in c..=n {
            a[r][k] = &a[r][k] * &inv;
        }
        for i in 0..m {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in c..=n {
                    let t = &f * &a[r][k];
                    a[i][k] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][n].clone();
    }
    Some(x)
}

fn det_i128(mut m: Vec<Vec<i128>>) -> i128 {
    // Bareiss elimination, exact for integer matrices.
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * m[n - 1][n - 1]
    }
}

fn same_ray(a: &[i128], b: &[i128]) -> bool {
    let Some(k) = a.iter().position(|&x| x != 0) else {
        return false;
    };
    b[k] != 0 && (a[k] > 0) == (b[k] > 0) && a.iter().zip(b).all(|(x, y)| x * b[k] == y * a[k])
}

/// For each generator, whether it spans a one-dimensional face of the cone
/// they generate. Facets are found by trying every hyperplane through
/// `rank - 1` independent generators.
pub fn brute_force_extremal(gens: &[Vec<BigInt>]) -> Vec<bool> {
    let small: Vec<Vec<i128>> = gens.iter().map(|g| g.iter().map(|x| x.to_i128().unwrap()).collect()).collect();
    // Distinct rays only.
    let mut reps: Vec<Vec<i128>> = Vec::new();
    for g in &small {
        if !reps.iter().any(|r| same_ray(r, g)) {
            reps.push(g.clone());
        }
    }
    let k = rank_int(gens);
    // Coordinates on which the span projects isomorphically.
    let mut coords: Vec<usize> = Vec::new();
    for c in 0..small[0].len() {
        let mut trial = coords.clone();
        trial.push(c);
        let proj: Vec<Vec<BigInt>> = reps.iter().map(|g| trial.iter().map(|&i| BigInt::from(g[i])).collect()).collect();
        if rank_int(&proj) == trial.len() {
            coords = trial;
        }
        if coords.len() == k {
            break;
        }
    }
    let p: Vec<Vec<i128>> = reps.iter().map(|g| coords.iter().map(|&i| g[i]).collect()).collect();
    let rep_extremal: Vec<bool> = if k == 1 {
        // A pointed one-dimensional cone is a single ray.
        vec![true; p.len()]
    } else {
        let mut facets: Vec<Vec<bool>> = Vec::new();
        for subset in subsets(p.len(), k - 1) {
            let normal: Vec<i128> = (0..k)
                .map(|col| {
                    let minor: Vec<Vec<i128>> = subset
                        .iter()
                        .map(|&s| (0..k).filter(|&c| c != col).map(|c| p[s][c]).collect())
                        .collect();
                    let d = det_i128(minor);
                    if col % 2 == 0 {
                        d
                    } else {
                        -d
                    }
                })
                .collect();
            if normal.iter().all(|&x| x == 0) {
                continue;
            }
            let vals: Vec<i128> = p.iter().map(|g| g.iter().zip(&normal).map(|(a, b)| a * b).sum()).collect();
            if vals.iter().all(|&v| v >= 0) || vals.iter().all(|&v| v <= 0) {
                let on: Vec<bool> = vals.iter().map(|&v| v == 0).collect();
                if !facets.contains(&on) {
                    facets.push(on);
                }
            }
        }
        (0..p.len())
            .map(|i| {
                let mut common = vec![true; p.len()];
                let mut any = false;
                for f in facets.iter().filter(|f| f[i]) {
                    any = true;
                    for (c, &on) in common.iter_mut().zip(f) {
                        *c &= on;
                    }
                }
                any && (0..p.len()).all(|j| !common[j] || j == i)
            })
            .collect()
    };
    small
        .iter()
        .map(|g| {
            let idx = reps.iter().position(|r| same_ray(r, g)).unwrap();
            rep_extremal[idx]
        })
        .collect()
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Intersection numbers `(D_i · C)` of the torus-invariant curve of a wall,
/// from the wall relation `x_a + x_b + Σ c_g x_g = 0`.
pub fn wall_curve(fan: &Fan, generators: &[usize], a: usize, b: usize) -> Vec<BigInt> {
    let cols: Vec<Vec<BigInt>> = generators.iter().map(|&g| fan.ray(g).clone()).collect();
    let rhs: Vec<BigInt> = fan.ray(a).iter().zip(fan.ray(b)).map(|(x, y)| -(x + y)).collect();
    let c = solve_q(&cols, &rhs).expect("wall relation is solvable");
    let mut v = vec![BigInt::zero(); fan.num_rays()];
    v[a] = BigInt::one();
    v[b] = BigInt::one();
    for (&g, cg) in generators.iter().zip(c) {
        assert!(cg.is_integer(), "smooth wall relations are integral");
        v[g] = cg.to_integer();
    }
    v
}

/// Every wall with its curve, found from pairs of maximal cones sharing a facet.
pub fn wall_curves(fan: &Fan) -> Vec<(Vec<usize>, Vec<BigInt>)> {
    let cones = fan.max_cones();
    let mut out = Vec::new();
    for i in 0..cones.len() {
        for j in i + 1..cones.len() {
            let common: Vec<usize> = cones[i].iter().copied().filter(|x| cones[j].contains(x)).collect();
            if common.len() + 1 != fan.dim() {
                continue;
            }
            let a = *cones[i].iter().find(|x| !common.contains(x)).unwrap();
            let b = *cones[j].iter().find(|x| !common.contains(x)).unwrap();
            let v = wall_curve(fan, &common, a, b);
            out.push((common, v));
        }
    }
    out
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A random unimodular matrix: a product of elementary moves, a permutation
/// and sign flips.
pub fn random_unimodular(dim: usize, rng: &mut impl Rng) -> IntMatrix {
    let mut m = IntMatrix::identity(dim);
    if dim == 1 {
        if rng.gen_bool(0.5) {
            m.negate_row(0);
        }
        return m;
    }
    for _ in 0..3 * dim {
        let i = rng.gen_range(0..dim);
        let mut j = rng.gen_range(0..dim - 1);
        if j >= i {
            j += 1;
        }
        let k: i64 = rng.gen_range(-2..=2);
        m.add_row_multiple(i, j, &BigInt::from(k));
    }
    for i in 0..dim {
        let j = rng.gen_range(i..dim);
        m.swap_rows(i, j);
        if rng.gen_bool(0.3) {
            m.negate_row(i);
        }
    }
    assert!(m.determinant().abs().is_one());
    m
}

/// The catalog fans with their parameter ranges.
pub fn catalog_varieties() -> Vec<Variety> {
    let mut out = Vec::new();
    for d in 1..=4 {
        out.push(Variety::ProjectiveSpace { d });
        out.push(Variety::ProductOfP1 { d });
    }
    for d in 2..=5 {
        for alpha in 0..=4 {
            out.push(Variety::Kleinschmidt { d, alpha });
        }
    }
    for d in 3..=5 {
        for a in 1..=2 {
            for b in 1..=2 {
                out.push(Variety::W { d, a, b });
            }
        }
    }
    out.extend([Variety::S7, Variety::S6, Variety::M1, Variety::PseudoV4, Variety::V4]);
    for k in 0..=2 {
        out.push(Variety::P2BundleOverP1 { k });
    }
    out
}

/// Degrees forced on `E^p ⊗ L|_C` by a tangent splitting `{2} ∪ N`, in the
/// two cases of the criterion. Case one trades one degree-2 summand for two
/// degree-1 summands; case two adds one degree-0 summand. Sorted.
pub fn forced_splitting(tangent: &[BigInt], case_one: bool) -> Vec<BigInt> {
    let count = |i: i64| tangent.iter().filter(|x| **x == BigInt::from(i)).count();
    let mut out: Vec<BigInt> = tangent.iter().filter(|x| x.is_negative()).cloned().collect();
    let (zeros, ones, twos) = if case_one {
        (count(0), count(1) + 2, count(2) - 1)
    } else {
        (count(0) + 1, count(1), count(2))
    };
    for (deg, n) in [(0, zeros), (1, ones), (2, twos)] {
        out.extend(std::iter::repeat(BigInt::from(deg)).take(n));
    }
    out.sort();
    out
}
