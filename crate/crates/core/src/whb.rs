//! Splitting-type arithmetic and the per-relation divisibility criterion for
//! wild hypersurface bundles, plus the Fano classification dispatch.

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{int, Int};
use crate::primitive::{normal_bundle_splitting, primitive_relations, PrimitiveRelation};

/// Degrees `i` (with multiplicity) of `T_S|_C = ⊕ O_C(i)^{a_i}`, sorted
/// ascending. Every degree is at most 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingType {
    degrees: Vec<Int>,
}

impl SplittingType {
    pub fn new(mut degrees: Vec<Int>) -> Result<Self> {
        if let Some(bad) = degrees.iter().find(|x| **x > int(2)) {
            return Err(Error::input(format!("splitting degree {bad} exceeds 2")));
        }
        degrees.sort();
        Ok(SplittingType { degrees })
    }

    pub fn from_i64(degrees: &[i64]) -> Result<Self> {
        SplittingType::new(degrees.iter().map(|&x| int(x)).collect())
    }

    /// `{2} ∪ N_{C/S}` for the torus-invariant curve of an extremal relation.
    pub fn of_relation(dim: usize, rel: &PrimitiveRelation) -> Result<Self> {
        let mut degrees = normal_bundle_splitting(dim, rel)?;
        degrees.push(int(2));
        SplittingType::new(degrees)
    }

    pub fn degrees(&self) -> &[Int] {
        &self.degrees
    }

    /// `a_i`, the multiplicity of degree `i`.
    pub fn multiplicity(&self, i: i64) -> usize {
        let i = int(i);
        self.degrees.iter().filter(|x| **x == i).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplittingCases {
    pub case_i: bool,
    pub case_ii: bool,
}

/// Case (i): `p | i-1` for every occurring degree `i`, except for one copy
/// of degree 2 (the tangent direction of the curve itself, which can never
/// satisfy it). Case (ii): `p = 2` and every occurring degree is even.
pub fn check_splitting_case(t: &SplittingType, p: u64) -> SplittingCases {
    let p_int = Int::from(p);
    let mut rest = t.degrees.clone();
    if let Some(k) = rest.iter().position(|i| *i == int(2)) {
        rest.remove(k);
    }
    let case_i = rest.iter().all(|i: &Int| (i - 1i32).is_multiple_of(&p_int));
    let case_ii = p == 2 && t.degrees.iter().all(|i| i.is_even());
    SplittingCases { case_i, case_ii }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Case {
    I,
    II,
}

/// Degrees of `E^p ⊗ L|_C` forced by the splitting type in the given case.
/// Sorted ascending.
pub fn expected_bundle_splitting(t: &SplittingType, case: Case) -> Result<Vec<Int>> {
    let (a0, a1, a2) = (t.multiplicity(0), t.multiplicity(1), t.multiplicity(2));
    let mut out: Vec<Int> = t.degrees.iter().filter(|x| x.is_negative()).cloned().collect();
    let (zeros, ones, twos) = match case {
        Case::I => {
            if a2 == 0 {
                return Err(Error::input("case (i) needs a degree-2 summand"));
            }
            (a0, a1 + 2, a2 - 1)
        }
        Case::II => (a0 + 1, a1, a2),
    };
    out.extend(std::iter::repeat(int(0)).take(zeros));
    out.extend(std::iter::repeat(int(1)).take(ones));
    out.extend(std::iter::repeat(int(2)).take(twos));
    out.sort();
    Ok(out)
}

/// Outcome of the criterion on one relation at one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationVerdict {
    pub collection: Vec<usize>,
    pub target: Vec<usize>,
    pub coeffs: Vec<i64>,
    pub extremal: bool,
    pub case_i: bool,
    pub case_ii: bool,
}

impl RelationVerdict {
    pub fn passes(&self) -> bool {
        self.case_i || self.case_ii
    }
}

/// Case (i): `m + n = d + 1` and `p | b_i + 1` for all `i`. Case (ii):
/// `p = 2`, `m = 2` and every `b_i` even.
pub fn check_relation(rel: &PrimitiveRelation, dim: usize, p: u64) -> RelationVerdict {
    let p_int = Int::from(p);
    let case_i = rel.m() + rel.n() == dim + 1
        && rel.coeffs.iter().all(|b: &Int| (b + 1i32).is_multiple_of(&p_int));
    let case_ii = p == 2 && rel.m() == 2 && rel.coeffs.iter().all(|b| b.is_even());
    RelationVerdict {
        collection: rel.collection.members().to_vec(),
        target: rel.target.clone(),
        coeffs: rel.coeffs.iter().map(|b| b.to_i64().unwrap_or(i64::MAX)).collect(),
        extremal: rel.extremal,
        case_i,
        case_ii,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionVerdict {
    pub prime: u64,
    pub admissible: bool,
    pub relations: Vec<RelationVerdict>,
}

impl CriterionVerdict {
    /// Admissible iff every extremal relation passes one of the two cases.
    pub fn from_records(prime: u64, relations: Vec<RelationVerdict>) -> Self {
        let admissible = relations.iter().filter(|r| r.extremal).all(RelationVerdict::passes);
        CriterionVerdict { prime, admissible, relations }
    }
}

pub const DEFAULT_P_MAX: u64 = 13;

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0)).collect()
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

pub fn verdict_for_relations(rels: &[PrimitiveRelation], dim: usize, p: u64) -> CriterionVerdict {
    CriterionVerdict::from_records(p, rels.iter().map(|r| check_relation(r, dim, p)).collect())
}

/// The criterion at every prime `p <= p_max`.
pub fn admissible_primes(fan: &Fan, p_max: u64) -> Result<Vec<CriterionVerdict>> {
    let rels = primitive_relations(fan)?;
    Ok(primes_up_to(p_max).into_iter().map(|p| verdict_for_relations(&rels, fan.dim(), p)).collect())
}

/// Just the admissible primes.
pub fn admissible_prime_set(fan: &Fan, p_max: u64) -> Result<Vec<u64>> {
    Ok(admissible_primes(fan, p_max)?.into_iter().filter(|v| v.admissible).map(|v| v.prime).collect())
}

/// Parameters of the five-collection Picard-3 family: block sizes
/// `p_0..p_4` (`v, y, z, t, u`) and the coefficients `c_2..c_{p_2}`,
/// `b_1..b_{p_3}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pic3CaseIIData {
    pub p: [u64; 5],
    pub c: Vec<u64>,
    pub b: Vec<u64>,
}

impl Pic3CaseIIData {
    pub fn new(p: [u64; 5], c: Vec<u64>, b: Vec<u64>) -> Result<Self> {
        if p.iter().any(|&x| x == 0) {
            return Err(Error::input("block sizes must be positive"));
        }
        if p.iter().sum::<u64>() < 4 {
            return Err(Error::input("block sizes sum below 4 give dimension below 1"));
        }
        if c.len() as u64 != p[2] - 1 || b.len() as u64 != p[3] {
            return Err(Error::input("need p_2 - 1 coefficients c and p_3 coefficients b"));
        }
        if c.iter().chain(&b).any(|&x| x == 0) {
            return Err(Error::input("coefficients must be positive"));
        }
        Ok(Pic3CaseIIData { p, c, b })
    }

    /// Data with every coefficient set to 1.
    pub fn with_unit_coefficients(p: [u64; 5]) -> Result<Self> {
        let c = vec![1; p[2].saturating_sub(1) as usize];
        let b = vec![1; p[3] as usize];
        Pic3CaseIIData::new(p, c, b)
    }

    /// `d = Σ p_i - 3`.
    pub fn dim(&self) -> u64 {
        self.p.iter().sum::<u64>() - 3
    }
}

/// `m`, `n` and the right-hand coefficients of one relation of the family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolicRelation {
    pub label: &'static str,
    pub m: u64,
    pub n: u64,
    pub coeffs: Vec<u64>,
    /// `m + n - (d + 1)`; zero when the dimension condition of case (i) holds.
    pub residual: i64,
    /// Coefficients `b` with `p ∤ b + 1`.
    pub divisibility_failures: Vec<u64>,
}

/// Result of applying case (i) to the three relations assumed extremal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pic3Certificate {
    pub dim: u64,
    pub prime: u64,
    /// Extremality of these three relations is an assumption, not computed.
    pub assumed_extremal: [&'static str; 3],
    pub relations: Vec<SymbolicRelation>,
    /// Whether the three dimension equations `m + n = d + 1` hold.
    pub dimension_equations_hold: bool,
    /// Whether the divisibility conditions hold as well.
    pub infeasible: bool,
    /// Human-readable reason for infeasibility, or the satisfied system.
    pub witness: String,
}

pub fn analyze_pic3_case_ii(data: &Pic3CaseIIData, p: u64) -> Result<Pic3Certificate> {
    if !is_prime(p) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    let [p0, p1, p2, p3, p4] = data.p;
    let d = data.dim();
    let mut first_coeffs: Vec<u64> = data.c.clone();
    first_coeffs.extend(data.b.iter().map(|b| b + 1));
    let specs: [(&'static str, u64, Vec<u64>); 3] = [
        ("v+y=cz+(b+1)t", p0 + p1, first_coeffs),
        ("y+z=u", p1 + p2, vec![1; p4 as usize]),
        ("t+u=y", p3 + p4, vec![1; p1 as usize]),
    ];
    let relations: Vec<SymbolicRelation> = specs
        .into_iter()
        .map(|(label, m, coeffs)| {
            let n = coeffs.len() as u64;
            SymbolicRelation {
                label,
                m,
                n,
                residual: (m + n) as i64 - (d + 1) as i64,
                divisibility_failures: coeffs.iter().copied().filter(|b| (b + 1) % p != 0).collect(),
                coeffs,
            }
        })
        .collect();
    let dimension_equations_hold = relations.iter().all(|r| r.residual == 0);
    let divisible = relations.iter().all(|r| r.divisibility_failures.is_empty());
    let infeasible = !(dimension_equations_hold && divisible);
    let witness = if !dimension_equations_hold {
        let broken: Vec<String> = relations
            .iter()
            .filter(|r| r.residual != 0)
            .map(|r| format!("{}: m+n-(d+1) = {}", r.label, r.residual))
            .collect();
        format!("dimension equations fail ({})", broken.join("; "))
    } else if !divisible {
        let broken: Vec<String> = relations
            .iter()
            .filter(|r| !r.divisibility_failures.is_empty())
            .map(|r| format!("{}: p does not divide b+1 for b in {:?}", r.label, r.divisibility_failures))
            .collect();
        format!("divisibility fails ({})", broken.join("; "))
    } else {
        format!(
            "all three case (i) conditions hold at (p_0..p_4) = ({p0},{p1},{p2},{p3},{p4}), d = {d}, p = {p}"
        )
    };
    Ok(Pic3Certificate {
        dim: d,
        prime: p,
        assumed_extremal: ["v+y=cz+(b+1)t", "y+z=u", "t+u=y"],
        relations,
        dimension_equations_hold,
        infeasible,
        witness,
    })
}

/// Every block-size tuple of the family with `1 <= d <= max_dim`.
pub fn pic3_tuples(max_dim: u64) -> Vec<[u64; 5]> {
    let mut out = Vec::new();
    let total_max = max_dim + 3;
    for p0 in 1..=total_max {
        for p1 in 1..=total_max {
            for p2 in 1..=total_max {
                for p3 in 1..=total_max {
                    for p4 in 1..=total_max {
                        let s = p0 + p1 + p2 + p3 + p4;
                        if s >= 4 && s <= total_max {
                            out.push([p0, p1, p2, p3, p4]);
                        }
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FanoCase {
    /// `S ≅ P^d`.
    ProjectiveSpace,
    /// `S ≅ (P^1)^d`.
    ProductOfLines,
    /// `S ≅ P(O ⊕ O(2a-1))` over `P^{d-1}`.
    OddTwistBundle { a: u64 },
    /// Every extremal contraction is a P^1-bundle or small, at least one small.
    SmallContractions,
    /// No wild hypersurface bundle can exist.
    Inadmissible { reason: String },
    /// None of the recognized patterns applies.
    Unclassified { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanoClassification {
    pub case: FanoCase,
    pub admissible_primes: Vec<u64>,
}

/// The twist `α` if the relations are those of `P(O ⊕ O(α))` over
/// `P^{d-1}`: two disjoint collections covering all rays, one `{u, u'}` with
/// `u + u' = 0` and one of size `d` summing to `α` times a ray of `{u, u'}`.
pub fn kleinschmidt_twist(fan: &Fan, rels: &[PrimitiveRelation]) -> Option<u64> {
    let d = fan.dim();
    if rels.len() != 2 || fan.num_rays() != d + 2 {
        return None;
    }
    for (fiber, base) in [(&rels[0], &rels[1]), (&rels[1], &rels[0])] {
        if fiber.m() != 2 || fiber.n() != 0 || base.m() != d {
            continue;
        }
        if base.collection.members().iter().any(|i| fiber.collection.members().contains(i)) {
            continue;
        }
        match base.n() {
            0 => return Some(0),
            1 if fiber.collection.members().contains(&base.target[0]) => {
                return base.coeffs[0].to_u64();
            }
            _ => {}
        }
    }
    None
}

pub fn classify_fano(fan: &Fan, p_max: u64) -> Result<FanoClassification> {
    let rels = primitive_relations(fan)?;
    if rels.iter().any(|r| !r.degree.is_positive()) {
        return Err(Error::input("fan is not Fano"));
    }
    let d = fan.dim();
    let admissible = primes_up_to(p_max)
        .into_iter()
        .filter(|&p| verdict_for_relations(&rels, d, p).admissible)
        .collect();
    let case = classify_relations(fan, &rels);
    Ok(FanoClassification { case, admissible_primes: admissible })
}

fn classify_relations(fan: &Fan, rels: &[PrimitiveRelation]) -> FanoCase {
    let d = fan.dim();
    if rels.len() == 1 && rels[0].m() == d + 1 && rels[0].n() == 0 {
        return FanoCase::ProjectiveSpace;
    }
    let all_lines = rels.iter().all(|r| r.m() == 2 && r.n() == 0);
    if rels.len() == d && all_lines && fan.num_rays() == 2 * d {
        return FanoCase::ProductOfLines;
    }
    if let Some(alpha) = kleinschmidt_twist(fan, rels) {
        if alpha % 2 == 1 {
            return FanoCase::OddTwistBundle { a: (alpha + 1) / 2 };
        }
        return FanoCase::Inadmissible {
            reason: format!("P^1-bundle over P^{} with even twist {alpha}", d - 1),
        };
    }
    if d < 3 {
        return FanoCase::Unclassified {
            reason: "the contraction analysis applies in dimension at least 3".into(),
        };
    }
    let extremal: Vec<&PrimitiveRelation> = rels.iter().filter(|r| r.extremal).collect();
    if let Some(r) = extremal.iter().find(|r| r.n() == 1 && r.m() + r.n() == d + 1) {
        return FanoCase::Inadmissible {
            reason: format!(
                "divisorial contraction to a point ({r}) on a fan that is not an odd-twist P^1-bundle over P^{}",
                d - 1
            ),
        };
    }
    let fiber_or_small = extremal.iter().all(|r| (r.m() == 2 && r.n() == 0) || r.n() >= 2);
    if fiber_or_small && extremal.iter().any(|r| r.n() >= 2) {
        return FanoCase::SmallContractions;
    }
    FanoCase::Unclassified {
        reason: "an extremal contraction is neither a P^1-bundle, small, nor covered above".into(),
    }
}

/// Multiset difference helper: whether two sorted degree lists agree.
pub fn same_multiset(a: &[Int], b: &[Int]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort();
    b.sort();
    a == b
}

/// Sum of a degree list, used in reports.
pub fn total_degree(a: &[Int]) -> Int {
    a.iter().fold(Int::zero(), |acc, x| acc + x)
}
