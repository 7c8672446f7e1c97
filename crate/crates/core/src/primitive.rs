//! Primitive collections and relations, Mori-cone extremality and
//! torus-invariant curve data.

use std::collections::BTreeSet;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{Fan, Wall};
use crate::lattice::{self, add_vec, dot, int, is_extremal_generator, zero_vec, Int, IntVector};

/// A minimal set of rays that does not span a cone.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimitiveCollection {
    members: Vec<usize>,
}

impl PrimitiveCollection {
    /// Sorts and deduplicates `members`. Does not check minimality; use
    /// [`PrimitiveCollection::checked`] for that.
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        PrimitiveCollection { members }
    }

    pub fn checked(fan: &Fan, members: Vec<usize>) -> Result<Self> {
        let pc = PrimitiveCollection::new(members);
        if let Some(&bad) = pc.members.iter().find(|&&i| i >= fan.num_rays()) {
            return Err(Error::input(format!("ray index {bad} out of range")));
        }
        if !is_minimal_non_face(fan, &pc.members) {
            return Err(Error::input(format!("{:?} is not a primitive collection", pc.members)));
        }
        Ok(pc)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }
}

fn is_minimal_non_face(fan: &Fan, set: &[usize]) -> bool {
    if set.is_empty() || fan.is_face(set) {
        return false;
    }
    (0..set.len()).all(|skip| {
        let sub: Vec<usize> =
            set.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &r)| r).collect();
        fan.is_face(&sub)
    })
}

/// `Σ_{x∈P} x = Σ b_i y_i` with the `y_i` spanning the cone whose relative
/// interior contains the left-hand side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveRelation {
    pub collection: PrimitiveCollection,
    /// Sorted ray indices of the target cone; empty when the sum is zero.
    pub target: Vec<usize>,
    /// Positive coefficients aligned with `target`.
    pub coeffs: Vec<Int>,
    pub degree: Int,
    /// `+1` on the collection, `-b_i` on the target, zero elsewhere.
    pub relation_vector: IntVector,
    pub extremal: bool,
}

impl PrimitiveRelation {
    /// `m`, the size of the collection.
    pub fn m(&self) -> usize {
        self.collection.size()
    }

    /// `n`, the number of target rays.
    pub fn n(&self) -> usize {
        self.target.len()
    }

    pub fn curve_class(&self) -> CurveClass {
        CurveClass { intersection_vector: self.relation_vector.clone() }
    }

    /// Human-readable form with one-based ray names, e.g. `x1+x2=x3`.
    pub fn display_with(&self, name: impl Fn(usize) -> String) -> String {
        let lhs: Vec<String> = self.collection.members().iter().map(|&i| name(i)).collect();
        let rhs: Vec<String> = self
            .target
            .iter()
            .zip(&self.coeffs)
            .map(|(&i, b)| if b == &int(1) { name(i) } else { format!("{b}{}", name(i)) })
            .collect();
        let rhs = if rhs.is_empty() { "0".to_string() } else { rhs.join("+") };
        format!("{}={}", lhs.join("+"), rhs)
    }
}

impl std::fmt::Display for PrimitiveRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.display_with(|i| format!("x{}", i + 1)))
    }
}

/// A 1-cycle class, recorded by its intersection numbers with every `D_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurveClass {
    pub intersection_vector: IntVector,
}

impl CurveClass {
    /// Whether the class satisfies `Σ (D_i·C) x_i = 0`.
    pub fn is_in_kernel(&self, fan: &Fan) -> bool {
        let mut sum = zero_vec(fan.dim());
        for (c, ray) in self.intersection_vector.iter().zip(fan.rays()) {
            sum = add_vec(&sum, &lattice::scale_vec(c, ray));
        }
        lattice::is_zero_vec(&sum)
    }

    /// Whether `self` is a positive rational multiple of `other`.
    pub fn is_proportional_to(&self, other: &CurveClass) -> bool {
        lattice::is_positive_multiple(&self.intersection_vector, &other.intersection_vector)
    }
}

/// Minimal non-faces of the fan in lexicographic order.
///
/// A set of size `k+1` is a candidate only if dropping its largest element
/// leaves a face; it is kept if it is not a face itself and every other
/// maximal proper subset is a face.
pub fn primitive_collections(fan: &Fan) -> Vec<PrimitiveCollection> {
    let mut found = Vec::new();
    for face in fan.all_faces() {
        if face.len() > fan.dim() {
            continue;
        }
        let start = face.last().map_or(0, |&l| l + 1);
        for j in start..fan.num_rays() {
            let mut candidate = face.clone();
            candidate.push(j);
            if is_minimal_non_face(fan, &candidate) {
                found.push(PrimitiveCollection { members: candidate });
            }
        }
    }
    found.sort();
    found
}

/// The relation of a primitive collection. `extremal` is left `false`;
/// [`mark_extremal`] fills it in.
pub fn primitive_relation(fan: &Fan, pc: &PrimitiveCollection) -> Result<PrimitiveRelation> {
    let pc = PrimitiveCollection::checked(fan, pc.members.clone())?;
    let mut sum = zero_vec(fan.dim());
    for &i in pc.members() {
        sum = add_vec(&sum, fan.ray(i));
    }
    let found = fan.find_containing_cone(&sum)?;
    let mut target = Vec::new();
    let mut coeffs = Vec::new();
    if let Some(cone) = found.cone {
        let rays = &fan.max_cones()[cone];
        for (k, q) in found.coordinates.entries().iter().enumerate() {
            if q.is_positive() {
                if !q.is_integer() {
                    return Err(Error::internal(format!(
                        "non-integral coefficient {q} in relation of {:?}",
                        pc.members()
                    )));
                }
                target.push(rays[k]);
                coeffs.push(q.to_integer());
            }
        }
    }
    let mut relation_vector = zero_vec(fan.num_rays());
    for &i in pc.members() {
        relation_vector[i] += 1;
    }
    for (&i, b) in target.iter().zip(&coeffs) {
        relation_vector[i] -= b;
    }
    let rhs = target
        .iter()
        .zip(&coeffs)
        .fold(zero_vec(fan.dim()), |acc, (&i, b)| add_vec(&acc, &lattice::scale_vec(b, fan.ray(i))));
    if rhs != sum {
        return Err(Error::internal(format!("relation identity fails for {:?}", pc.members())));
    }
    let m = int(pc.size() as i64);
    let degree = coeffs.iter().fold(m, |acc, b| acc - b);
    let rel = PrimitiveRelation {
        collection: pc,
        target,
        coeffs,
        degree,
        relation_vector,
        extremal: false,
    };
    self::degree(fan, &rel)?;
    Ok(rel)
}

/// `m - Σ b_i`, cross-checked against the anticanonical pairing.
pub fn degree(fan: &Fan, rel: &PrimitiveRelation) -> Result<Int> {
    let m = int(rel.m() as i64);
    let from_coeffs = rel.coeffs.iter().fold(m, |acc, b| acc - b);
    let anticanonical = vec![int(1); fan.num_rays()];
    let pairing = dot(&anticanonical, &rel.relation_vector);
    if from_coeffs != pairing || from_coeffs != rel.degree {
        return Err(Error::internal(format!(
            "degree mismatch for {}: m - Σb = {from_coeffs}, pairing = {pairing}",
            rel
        )));
    }
    Ok(from_coeffs)
}

/// Flags each relation whose class spans an extremal ray of the cone
/// generated by all the given relation classes.
pub fn mark_extremal(rels: &[PrimitiveRelation]) -> Result<Vec<PrimitiveRelation>> {
    if rels.is_empty() {
        return Ok(Vec::new());
    }
    let gens: Vec<IntVector> = rels.iter().map(|r| r.relation_vector.clone()).collect();
    rels.iter()
        .enumerate()
        .map(|(k, r)| {
            let mut r = r.clone();
            r.extremal = is_extremal_generator(&gens, k)?;
            Ok(r)
        })
        .collect()
}

/// All primitive relations of `fan`, in collection order, with extremality.
pub fn primitive_relations(fan: &Fan) -> Result<Vec<PrimitiveRelation>> {
    let rels = primitive_collections(fan)
        .iter()
        .map(|pc| primitive_relation(fan, pc))
        .collect::<Result<Vec<_>>>()?;
    mark_extremal(&rels)
}

pub fn is_fano(fan: &Fan) -> Result<bool> {
    Ok(primitive_relations(fan)?.iter().all(|r| r.degree.is_positive()))
}

/// Class of the torus-invariant curve of a wall: `1` on both opposite rays
/// and `-λ_i` on the wall generators, where `u + u' = Σ λ_i v_i`.
pub fn curve_class_of_wall(fan: &Fan, wall: &Wall) -> Result<CurveClass> {
    let (u, w) = wall.opposite_rays;
    let sum = add_vec(fan.ray(u), fan.ray(w));
    let lambda = fan
        .express_in_rays(&wall.generators, &sum)?
        .ok_or_else(|| Error::internal("opposite rays do not sum into the wall span"))?
        .to_integers()
        .ok_or_else(|| Error::internal("non-integral wall relation"))?;
    let mut v = zero_vec(fan.num_rays());
    v[u] += 1;
    v[w] += 1;
    for (&g, l) in wall.generators.iter().zip(&lambda) {
        v[g] -= l;
    }
    Ok(CurveClass { intersection_vector: v })
}

/// Degrees of the normal bundle of the torus-invariant curve in an extremal
/// class: `1` repeated `m-2` times, `0` repeated `d-m-n+1` times, and each
/// `-b_i`. Sorted ascending.
pub fn normal_bundle_splitting(dim: usize, rel: &PrimitiveRelation) -> Result<Vec<Int>> {
    if !rel.extremal {
        return Err(Error::input(format!("relation {rel} is not extremal")));
    }
    let (m, n) = (rel.m() as i64, rel.n() as i64);
    let zeros = dim as i64 - m - n + 1;
    if zeros < 0 || m < 2 {
        return Err(Error::input(format!(
            "relation {rel} has m={m}, n={n}, incompatible with dimension {dim}"
        )));
    }
    let mut out: Vec<Int> = Vec::with_capacity(dim.saturating_sub(1));
    out.extend(std::iter::repeat(int(1)).take((m - 2) as usize));
    out.extend(std::iter::repeat(Int::zero()).take(zeros as usize));
    out.extend(rel.coeffs.iter().map(|b| -b));
    out.sort();
    Ok(out)
}

/// Normal degrees read off a wall: `(D_i·C)` for each wall generator. Sorted
/// ascending.
pub fn wall_normal_degrees(fan: &Fan, wall: &Wall) -> Result<Vec<Int>> {
    let class = curve_class_of_wall(fan, wall)?;
    let mut out: Vec<Int> =
        wall.generators.iter().map(|&g| class.intersection_vector[g].clone()).collect();
    out.sort();
    Ok(out)
}

/// Walls whose curve class is a positive multiple of the relation's class.
pub fn walls_in_class(fan: &Fan, rel: &PrimitiveRelation) -> Result<Vec<Wall>> {
    let target = rel.curve_class();
    let mut out = Vec::new();
    for wall in fan.walls() {
        if curve_class_of_wall(fan, &wall)?.is_proportional_to(&target) {
            out.push(wall);
        }
    }
    Ok(out)
}

/// One entry of the relation report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationRecord {
    pub collection: Vec<usize>,
    pub target: Vec<usize>,
    pub coeffs: Vec<i64>,
    pub degree: i64,
    pub extremal: bool,
}

impl TryFrom<&PrimitiveRelation> for RelationRecord {
    type Error = Error;

    fn try_from(rel: &PrimitiveRelation) -> Result<Self> {
        let small = |x: &Int| x.to_i64().ok_or_else(|| Error::input("coefficient exceeds 64 bits"));
        Ok(RelationRecord {
            collection: rel.collection.members().to_vec(),
            target: rel.target.clone(),
            coeffs: rel.coeffs.iter().map(small).collect::<Result<_>>()?,
            degree: small(&rel.degree)?,
            extremal: rel.extremal,
        })
    }
}

pub fn relation_records(rels: &[PrimitiveRelation]) -> Result<Vec<RelationRecord>> {
    rels.iter().map(RelationRecord::try_from).collect()
}

/// Relation data as `(collection, sorted (target, coefficient) pairs)`,
/// convenient for set comparison against printed lists.
pub fn relation_key(rel: &PrimitiveRelation) -> (BTreeSet<usize>, Vec<(usize, i64)>) {
    let mut rhs: Vec<(usize, i64)> = rel
        .target
        .iter()
        .zip(&rel.coeffs)
        .map(|(&i, b)| (i, b.to_i64().unwrap_or(i64::MAX)))
        .collect();
    rhs.sort();
    (rel.collection.members().iter().copied().collect(), rhs)
}
