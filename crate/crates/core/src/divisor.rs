//! Torus-invariant divisors, the class group and intersection numbers.
//!
//! The class group is `Z^l / image(R)` where `R` is the `l × d` ray matrix.
//! With `U·R·V = S` in Smith form, `U` maps divisors onto coordinates in
//! which the image is `s_1 Z ⊕ … ⊕ s_k Z ⊕ 0`, so reducing the first `k`
//! coordinates gives a canonical representative.

use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{self, dot, int, smith_normal_form, Int, IntMatrix, IntVector};
use crate::primitive::CurveClass;

/// `Σ a_i D_i`, one coefficient per ray.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusDivisor {
    pub coeffs: IntVector,
}

impl TorusDivisor {
    pub fn new(coeffs: IntVector) -> Self {
        TorusDivisor { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        TorusDivisor { coeffs: lattice::int_vec(coeffs) }
    }

    pub fn zero(len: usize) -> Self {
        TorusDivisor { coeffs: lattice::zero_vec(len) }
    }

    /// The prime divisor `D_i` among `len` rays.
    pub fn prime(len: usize, i: usize) -> Self {
        let mut d = TorusDivisor::zero(len);
        d.coeffs[i] = Int::one();
        d
    }

    /// Sum of `k·D_i` over the given `(i, k)` pairs.
    pub fn from_terms(len: usize, terms: &[(usize, i64)]) -> Self {
        let mut d = TorusDivisor::zero(len);
        for &(i, k) in terms {
            d.coeffs[i] += k;
        }
        d
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, k: &Int) -> Self {
        TorusDivisor { coeffs: lattice::scale_vec(k, &self.coeffs) }
    }

    /// Principal divisor `Σ ⟨m, x_i⟩ D_i` of the character `m`.
    pub fn principal(fan: &Fan, m: &[Int]) -> Self {
        TorusDivisor { coeffs: fan.rays().iter().map(|x| dot(m, x)).collect() }
    }

    pub fn to_json(&self) -> Result<String> {
        let small = self
            .coeffs
            .iter()
            .map(|c| c.to_i64().ok_or_else(|| Error::input("coefficient exceeds 64 bits")))
            .collect::<Result<Vec<i64>>>()?;
        Ok(serde_json::to_string(&small)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Vec<i64> = serde_json::from_str(text)?;
        Ok(TorusDivisor::from_i64(&v))
    }
}

impl Add for &TorusDivisor {
    type Output = TorusDivisor;

    fn add(self, rhs: &TorusDivisor) -> TorusDivisor {
        TorusDivisor { coeffs: lattice::add_vec(&self.coeffs, &rhs.coeffs) }
    }
}

impl Sub for &TorusDivisor {
    type Output = TorusDivisor;

    fn sub(self, rhs: &TorusDivisor) -> TorusDivisor {
        TorusDivisor { coeffs: lattice::sub_vec(&self.coeffs, &rhs.coeffs) }
    }
}

impl Neg for &TorusDivisor {
    type Output = TorusDivisor;

    fn neg(self) -> TorusDivisor {
        self.scale(&int(-1))
    }
}

/// Canonical coordinates of a class: torsion part (each reduced into
/// `[0, order)`) followed by the free part.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    pub coords: IntVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGroup {
    u: IntMatrix,
    /// Nonzero Smith invariants `s_1 | s_2 | …` of the ray matrix.
    invariants: Vec<Int>,
    num_rays: usize,
}

impl ClassGroup {
    pub fn of(fan: &Fan) -> ClassGroup {
        let r = fan.ray_matrix();
        let snf = smith_normal_form(&r);
        let invariants = snf.diagonal().into_iter().take_while(|s| !s.is_zero()).collect();
        ClassGroup { u: snf.u, invariants, num_rays: fan.num_rays() }
    }

    /// Rank of the free part.
    pub fn rank(&self) -> usize {
        self.num_rays - self.invariants.len()
    }

    /// Orders of the nontrivial cyclic torsion factors.
    pub fn torsion(&self) -> Vec<Int> {
        self.invariants.iter().filter(|s| !s.is_one()).cloned().collect()
    }

    pub fn class_of(&self, d: &TorusDivisor) -> Result<DivisorClass> {
        if d.len() != self.num_rays {
            return Err(Error::input(format!(
                "divisor has {} coefficients, fan has {} rays",
                d.len(),
                self.num_rays
            )));
        }
        Ok(self.reduce(self.u.mul_vec(&d.coeffs)))
    }

    fn reduce(&self, raw: IntVector) -> DivisorClass {
        let mut coords = Vec::with_capacity(raw.len());
        for (i, x) in raw.into_iter().enumerate() {
            match self.invariants.get(i) {
                Some(s) if s.is_one() => {}
                Some(s) => coords.push(x.mod_floor(s)),
                None => coords.push(x),
            }
        }
        DivisorClass { coords }
    }

    pub fn zero(&self) -> DivisorClass {
        self.reduce(lattice::zero_vec(self.num_rays))
    }

    pub fn add(&self, a: &DivisorClass, b: &DivisorClass) -> DivisorClass {
        self.combine(a, b, |x, y| x + y)
    }

    pub fn sub(&self, a: &DivisorClass, b: &DivisorClass) -> DivisorClass {
        self.combine(a, b, |x, y| x - y)
    }

    pub fn scale(&self, k: &Int, a: &DivisorClass) -> DivisorClass {
        let orders = self.torsion();
        let coords = a
            .coords
            .iter()
            .enumerate()
            .map(|(i, x)| match orders.get(i) {
                Some(s) => (k * x).mod_floor(s),
                None => k * x,
            })
            .collect();
        DivisorClass { coords }
    }

    fn combine(&self, a: &DivisorClass, b: &DivisorClass, op: impl Fn(&Int, &Int) -> Int) -> DivisorClass {
        let orders = self.torsion();
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .enumerate()
            .map(|(i, (x, y))| match orders.get(i) {
                Some(s) => op(x, y).mod_floor(s),
                None => op(x, y),
            })
            .collect();
        DivisorClass { coords }
    }
}

pub fn class_group(fan: &Fan) -> &ClassGroup {
    fan.class_group_cache().get_or_init(|| ClassGroup::of(fan))
}

pub fn class_of(fan: &Fan, d: &TorusDivisor) -> Result<DivisorClass> {
    class_group(fan).class_of(d)
}

pub fn linearly_equivalent(fan: &Fan, a: &TorusDivisor, b: &TorusDivisor) -> Result<bool> {
    Ok(class_of(fan, a)? == class_of(fan, b)?)
}

/// `(D · C) = Σ a_i (D_i · C)`.
pub fn intersect(d: &TorusDivisor, c: &CurveClass) -> Result<Int> {
    if d.len() != c.intersection_vector.len() {
        return Err(Error::input(format!(
            "divisor has {} coefficients, curve class has {}",
            d.len(),
            c.intersection_vector.len()
        )));
    }
    Ok(dot(&d.coeffs, &c.intersection_vector))
}

/// `-K = Σ D_i`.
pub fn anticanonical(fan: &Fan) -> TorusDivisor {
    TorusDivisor { coeffs: vec![Int::one(); fan.num_rays()] }
}
