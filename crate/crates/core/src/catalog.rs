//! Named fans, bundle data and equations, with their printed relation lists.
//!
//! Relation lists are kept as text in the form `x1+x2=x3` (base fans) or
//! `x~1+x~2=x~3+y2+y3` (total spaces) and parsed on demand. Indices are
//! one-based in text and zero-based everywhere else.

use std::collections::BTreeSet;
use std::fmt;

use crate::bundle::{projectivize, BundleSpec, TotalSpaceFan};
use crate::divisor::TorusDivisor;
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{int, IntVector};
use crate::primitive::{relation_key, PrimitiveRelation};

/// A relation `sum(collection) = sum(coeff * target)`, zero-based indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExpectedRelation {
    pub collection: BTreeSet<usize>,
    /// Sorted by index, coefficients positive.
    pub target: Vec<(usize, i64)>,
}

impl ExpectedRelation {
    pub fn key(&self) -> (BTreeSet<usize>, Vec<(usize, i64)>) {
        (self.collection.clone(), self.target.clone())
    }
}

/// Parses `x1+x2=2x3`, `x~1+x~5=y2`, `y1+y2+y3=0` or `x_{10}+x_4=0`.
/// `y` indices are shifted by `y_offset` (the number of base rays).
pub fn parse_relation(text: &str, y_offset: usize) -> Result<ExpectedRelation> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let (lhs, rhs) = compact
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("missing '=' in relation {text:?}")))?;
    let parse_side = |side: &str| -> Result<Vec<(usize, i64)>> {
        if side == "0" {
            return Ok(Vec::new());
        }
        side.split('+').map(|term| parse_term(term, y_offset, text)).collect()
    };
    let left = parse_side(lhs)?;
    if left.is_empty() || left.iter().any(|&(_, c)| c != 1) {
        return Err(Error::Parse(format!("left side of {text:?} must be a sum of distinct rays")));
    }
    let collection: BTreeSet<usize> = left.iter().map(|&(i, _)| i).collect();
    if collection.len() != left.len() {
        return Err(Error::Parse(format!("repeated ray on the left of {text:?}")));
    }
    let mut target: Vec<(usize, i64)> = parse_side(rhs)?.into_iter().filter(|&(_, c)| c != 0).collect();
    target.sort();
    if target.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Parse(format!("repeated ray on the right of {text:?}")));
    }
    Ok(ExpectedRelation { collection, target })
}

fn parse_term(term: &str, y_offset: usize, whole: &str) -> Result<(usize, i64)> {
    let bad = || Error::Parse(format!("cannot read term {term:?} in {whole:?}"));
    let split = term.find(|c: char| !c.is_ascii_digit()).ok_or_else(bad)?;
    let coeff: i64 = if split == 0 { 1 } else { term[..split].parse().map_err(|_| bad())? };
    let rest = &term[split..];
    let (offset, rest) = if let Some(r) = rest.strip_prefix("x~") {
        (0, r)
    } else if let Some(r) = rest.strip_prefix('x') {
        (0, r)
    } else if let Some(r) = rest.strip_prefix('y') {
        (y_offset, r)
    } else {
        return Err(bad());
    };
    let digits = rest.strip_prefix('_').unwrap_or(rest);
    let digits = digits.strip_prefix('{').and_then(|d| d.strip_suffix('}')).unwrap_or(digits);
    let index: usize = digits.parse().map_err(|_| bad())?;
    if index == 0 {
        return Err(bad());
    }
    Ok((offset + index - 1, coeff))
}

pub fn parse_relation_list(texts: &[String], y_offset: usize) -> Result<Vec<ExpectedRelation>> {
    texts.iter().map(|t| parse_relation(t, y_offset)).collect()
}

/// Set difference between computed and expected relations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationDiff {
    pub missing: Vec<ExpectedRelation>,
    pub unexpected: Vec<ExpectedRelation>,
}

impl RelationDiff {
    pub fn matches(&self) -> bool {
        self.missing.is_empty() && self.unexpected.is_empty()
    }
}

pub fn compare_relations(computed: &[PrimitiveRelation], expected: &[ExpectedRelation]) -> RelationDiff {
    let got: BTreeSet<ExpectedRelation> = computed
        .iter()
        .map(|r| {
            let (collection, target) = relation_key(r);
            ExpectedRelation { collection, target }
        })
        .collect();
    let want: BTreeSet<ExpectedRelation> = expected.iter().cloned().collect();
    RelationDiff {
        missing: want.difference(&got).cloned().collect(),
        unexpected: got.difference(&want).cloned().collect(),
    }
}

// Text builders for parametric relation lists.

fn sum_of(prefix: &str, indices: impl IntoIterator<Item = usize>) -> String {
    indices.into_iter().map(|i| format!("{prefix}{i}")).collect::<Vec<_>>().join("+")
}

fn scaled(coeff: i64, name: String) -> Option<String> {
    match coeff {
        0 => None,
        1 => Some(name),
        c => Some(format!("{c}{name}")),
    }
}

fn rhs(parts: Vec<Option<String>>) -> String {
    let parts: Vec<String> = parts.into_iter().flatten().filter(|s| !s.is_empty()).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

fn strings(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

// Fans.

fn unit(dim: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[i] = 1;
    v
}

fn fan_from_i64(dim: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> Result<Fan> {
    let rays: Vec<IntVector> = rays.into_iter().map(|r| r.into_iter().map(int).collect()).collect();
    Fan::new(dim, rays, cones)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `P^d`: rays `e_1..e_d` and `-(e_1+...+e_d)`.
pub fn projective_space(d: usize) -> Result<Fan> {
    if d == 0 {
        return Err(Error::input("dimension must be at least 1"));
    }
    let mut rays: Vec<Vec<i64>> = (0..d).map(|i| unit(d, i)).collect();
    rays.push(vec![-1; d]);
    fan_from_i64(d, rays, subsets(d + 1, d))
}

/// `(P^1)^d`: ray `2i` is `e_i` and ray `2i+1` is `-e_i`.
pub fn product_of_p1(d: usize) -> Result<Fan> {
    if d == 0 {
        return Err(Error::input("dimension must be at least 1"));
    }
    let mut rays = Vec::with_capacity(2 * d);
    for i in 0..d {
        rays.push(unit(d, i));
        rays.push(unit(d, i).into_iter().map(|x| -x).collect());
    }
    let cones = (0..1usize << d).map(|mask| (0..d).map(|i| 2 * i + ((mask >> i) & 1)).collect()).collect();
    fan_from_i64(d, rays, cones)
}

/// `P(O + O(alpha))` over `P^{d-1}`, with relations
/// `x_1+...+x_d = alpha x_{d+1}` and `x_{d+1}+x_{d+2} = 0`.
pub fn kleinschmidt(d: usize, alpha: u64) -> Result<Fan> {
    if d < 2 {
        return Err(Error::input("kleinschmidt needs d >= 2"));
    }
    let alpha = i64::try_from(alpha).map_err(|_| Error::input("twist too large"))?;
    let mut rays: Vec<Vec<i64>> = (0..d - 1).map(|i| unit(d, i)).collect();
    let mut xd = vec![-1; d];
    xd[d - 1] = alpha;
    rays.push(xd);
    rays.push(unit(d, d - 1));
    rays.push(unit(d, d - 1).into_iter().map(|x| -x).collect());
    let mut cones = Vec::new();
    for drop in 0..d {
        for last in [d, d + 1] {
            let mut c: Vec<usize> = (0..d).filter(|&i| i != drop).collect();
            c.push(last);
            cones.push(c);
        }
    }
    fan_from_i64(d, rays, cones)
}

/// `W^d(a,b)`, whose relations are `x_1+...+x_{d-1} = (2a-1)x_d + (2b-1)x_{d+2}`,
/// `x_d+x_{d+1} = 0` and `x_{d+2}+x_{d+3} = 0`.
pub fn w_fan(d: usize, a: u64, b: u64) -> Result<Fan> {
    if d < 3 || a == 0 || b == 0 {
        return Err(Error::input("w_fan needs d >= 3 and a, b >= 1"));
    }
    let (a, b) = (a as i64, b as i64);
    let mut rays: Vec<Vec<i64>> = (0..d - 2).map(|i| unit(d, i)).collect();
    let mut x = vec![-1; d];
    x[d - 2] = 2 * a - 1;
    x[d - 1] = 2 * b - 1;
    rays.push(x);
    rays.push(unit(d, d - 2));
    rays.push(unit(d, d - 2).into_iter().map(|v| -v).collect());
    rays.push(unit(d, d - 1));
    rays.push(unit(d, d - 1).into_iter().map(|v| -v).collect());
    let mut cones = Vec::new();
    for drop in 0..d - 1 {
        for first in [d - 1, d] {
            for second in [d + 1, d + 2] {
                let mut c: Vec<usize> = (0..d - 1).filter(|&i| i != drop).collect();
                c.push(first);
                c.push(second);
                cones.push(c);
            }
        }
    }
    fan_from_i64(d, rays, cones)
}

const S7_RELATIONS: &[&str] = &["x1+x2=x3", "x1+x5=0", "x2+x4=x5", "x3+x4=0", "x3+x5=x2"];

const S6_RELATIONS: &[&str] = &[
    "x1+x5=0", "x3+x4=0", "x2+x6=0", "x3+x6=x1", "x3+x5=x2", "x1+x2=x3", "x5+x6=x4", "x2+x4=x5",
    "x1+x4=x6",
];

const M1_RELATIONS: &[&str] = &[
    "x1+x8=0",
    "x4+x5=0",
    "x6+x7=0",
    "x1+x2+x3=x4+x6",
    "x4+x6+x8=x2+x3",
    "x2+x3+x5=x6+x8",
    "x2+x3+x7=x4+x8",
];

const PSEUDO_V4_RELATIONS: &[&str] = &[
    "x4+x9=0",
    "x1+x5=0",
    "x2+x6=0",
    "x3+x7=0",
    "x1+x2+x9=x7+x8",
    "x1+x3+x9=x6+x8",
    "x2+x3+x9=x5+x8",
    "x1+x2+x3=x4+x8",
    "x4+x5+x8=x2+x3",
    "x4+x6+x8=x1+x3",
    "x4+x7+x8=x1+x2",
    "x5+x6+x8=x3+x9",
    "x5+x7+x8=x2+x9",
    "x6+x7+x8=x1+x9",
];

const V4_RELATIONS: &[&str] = &[
    "x4+x10=0",
    "x1+x5=0",
    "x2+x6=0",
    "x3+x7=0",
    "x8+x9=0",
    "x1+x2+x10=x7+x8",
    "x1+x3+x10=x6+x8",
    "x2+x3+x10=x5+x8",
    "x1+x2+x3=x4+x8",
    "x1+x9+x10=x6+x7",
    "x2+x9+x10=x5+x7",
    "x3+x9+x10=x5+x6",
    "x1+x2+x9=x4+x7",
    "x1+x3+x9=x4+x6",
    "x2+x3+x9=x4+x5",
    "x4+x5+x6=x3+x9",
    "x4+x5+x7=x2+x9",
    "x4+x6+x7=x1+x9",
    "x5+x6+x7=x9+x10",
    "x4+x5+x8=x2+x3",
    "x4+x6+x8=x1+x3",
    "x4+x7+x8=x1+x2",
    "x5+x6+x8=x3+x10",
    "x5+x7+x8=x2+x10",
    "x6+x7+x8=x1+x10",
];

/// Del Pezzo surface of degree 6 or 7.
pub fn del_pezzo_surface(degree: u32) -> Result<Fan> {
    match degree {
        7 => fan_from_i64(
            2,
            vec![vec![1, 0], vec![-1, 1], vec![0, 1], vec![0, -1], vec![-1, 0]],
            vec![vec![0, 2], vec![2, 1], vec![1, 4], vec![4, 3], vec![3, 0]],
        ),
        6 => fan_from_i64(
            2,
            vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![-1, -1], vec![-1, 0], vec![0, -1]],
            vec![vec![0, 2], vec![2, 1], vec![1, 4], vec![4, 3], vec![3, 5], vec![5, 0]],
        ),
        _ => Err(Error::input(format!("no toric del Pezzo surface S{degree} in the catalog"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fano4 {
    M1,
    PseudoDelPezzo,
    DelPezzo,
}

impl Fano4 {
    fn rays(self) -> Vec<Vec<i64>> {
        let e = |i: usize| unit(4, i);
        let neg = |v: Vec<i64>| v.into_iter().map(|x| -x).collect::<Vec<_>>();
        match self {
            Fano4::M1 => vec![
                vec![-1, -1, 1, 1],
                e(0),
                e(1),
                e(2),
                neg(e(2)),
                e(3),
                neg(e(3)),
                vec![1, 1, -1, -1],
            ],
            Fano4::PseudoDelPezzo => vec![
                e(0),
                e(1),
                e(2),
                neg(e(3)),
                neg(e(0)),
                neg(e(1)),
                neg(e(2)),
                vec![1, 1, 1, 1],
                e(3),
            ],
            Fano4::DelPezzo => vec![
                e(0),
                e(1),
                e(2),
                neg(e(3)),
                neg(e(0)),
                neg(e(1)),
                neg(e(2)),
                vec![1, 1, 1, 1],
                vec![-1, -1, -1, -1],
                e(3),
            ],
        }
    }

    fn printed(self) -> &'static [&'static str] {
        match self {
            Fano4::M1 => M1_RELATIONS,
            Fano4::PseudoDelPezzo => PSEUDO_V4_RELATIONS,
            Fano4::DelPezzo => V4_RELATIONS,
        }
    }
}

/// The named toric Fano 4-folds. Maximal cones are the 4-subsets of rays
/// containing none of the printed primitive collections.
pub fn fano4(which: Fano4) -> Result<Fan> {
    let rays = which.rays();
    let n = rays.len();
    let collections: Vec<BTreeSet<usize>> = which
        .printed()
        .iter()
        .map(|t| parse_relation(t, 0).map(|r| r.collection))
        .collect::<Result<_>>()?;
    let cones = subsets(n, 4)
        .into_iter()
        .filter(|c| collections.iter().all(|pc| !pc.iter().all(|i| c.contains(i))))
        .collect();
    fan_from_i64(4, rays, cones)
}

/// `P(O + O(k) + O)` over `P^1`, a Picard-2 `P^2`-bundle.
pub fn p2_bundle_over_p1(k: u64) -> Result<Fan> {
    let k = i64::try_from(k).map_err(|_| Error::input("twist too large"))?;
    let base = projective_space(1)?;
    let spec = BundleSpec::new(base, vec![TorusDivisor::from_i64(&[k, 0]), TorusDivisor::zero(2)])?;
    Ok(projectivize(&spec)?.fan)
}

/// Every base variety the catalog knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variety {
    ProjectiveSpace { d: usize },
    ProductOfP1 { d: usize },
    Kleinschmidt { d: usize, alpha: u64 },
    W { d: usize, a: u64, b: u64 },
    S7,
    S6,
    M1,
    PseudoV4,
    V4,
    P2BundleOverP1 { k: u64 },
}

/// Catalog names with the parameters each one takes.
pub const VARIETY_NAMES: &[(&str, &str)] = &[
    ("projective-space", "P^d; --d"),
    ("product-of-p1", "(P^1)^d; --d"),
    ("kleinschmidt", "P(O + O(alpha)) over P^(d-1); --d --alpha"),
    ("w", "W^d(a,b); --d --a --b"),
    ("S7", "del Pezzo surface of degree 7"),
    ("S6", "del Pezzo surface of degree 6"),
    ("M1", "toric Fano 4-fold of type M1"),
    ("pseudo-V4", "4-dimensional pseudo del Pezzo variety"),
    ("V4", "4-dimensional del Pezzo variety"),
    ("p2-bundle", "P(O + O(k) + O) over P^1; --alpha as k"),
];

impl Variety {
    /// Looks a name up, filling parameters from the options given.
    pub fn from_name(name: &str, d: Option<usize>, a: Option<u64>, b: Option<u64>, alpha: Option<u64>) -> Result<Self> {
        let need_d = || d.ok_or_else(|| Error::input(format!("{name} needs --d")));
        Ok(match name {
            "projective-space" => Variety::ProjectiveSpace { d: need_d()? },
            "product-of-p1" => Variety::ProductOfP1 { d: need_d()? },
            "kleinschmidt" => Variety::Kleinschmidt {
                d: need_d()?,
                alpha: alpha.ok_or_else(|| Error::input("kleinschmidt needs --alpha"))?,
            },
            "w" => Variety::W { d: need_d()?, a: a.unwrap_or(1), b: b.unwrap_or(1) },
            "S7" => Variety::S7,
            "S6" => Variety::S6,
            "M1" => Variety::M1,
            "pseudo-V4" => Variety::PseudoV4,
            "V4" => Variety::V4,
            "p2-bundle" => Variety::P2BundleOverP1 { k: alpha.unwrap_or(1) },
            _ => return Err(Error::input(format!("unknown catalog entry {name:?}"))),
        })
    }

    pub fn fan(&self) -> Result<Fan> {
        match *self {
            Variety::ProjectiveSpace { d } => projective_space(d),
            Variety::ProductOfP1 { d } => product_of_p1(d),
            Variety::Kleinschmidt { d, alpha } => kleinschmidt(d, alpha),
            Variety::W { d, a, b } => w_fan(d, a, b),
            Variety::S7 => del_pezzo_surface(7),
            Variety::S6 => del_pezzo_surface(6),
            Variety::M1 => fano4(Fano4::M1),
            Variety::PseudoV4 => fano4(Fano4::PseudoDelPezzo),
            Variety::V4 => fano4(Fano4::DelPezzo),
            Variety::P2BundleOverP1 { k } => p2_bundle_over_p1(k),
        }
    }

    /// The primitive relations as printed, or as given by the defining
    /// relations for the parametric families.
    pub fn printed_relations(&self) -> Vec<String> {
        match *self {
            Variety::ProjectiveSpace { d } => vec![format!("{}=0", sum_of("x", 1..=d + 1))],
            Variety::ProductOfP1 { d } => (1..=d).map(|i| format!("x{}+x{}=0", 2 * i - 1, 2 * i)).collect(),
            Variety::Kleinschmidt { d, alpha } => vec![
                format!("{}={}", sum_of("x", 1..=d), rhs(vec![scaled(alpha as i64, format!("x{}", d + 1))])),
                format!("x{}+x{}=0", d + 1, d + 2),
            ],
            Variety::W { d, a, b } => vec![
                format!(
                    "{}={}",
                    sum_of("x", 1..d),
                    rhs(vec![
                        scaled(2 * a as i64 - 1, format!("x{d}")),
                        scaled(2 * b as i64 - 1, format!("x{}", d + 2)),
                    ])
                ),
                format!("x{}+x{}=0", d, d + 1),
                format!("x{}+x{}=0", d + 2, d + 3),
            ],
            Variety::S7 => strings(S7_RELATIONS),
            Variety::S6 => strings(S6_RELATIONS),
            Variety::M1 => strings(M1_RELATIONS),
            Variety::PseudoV4 => strings(PSEUDO_V4_RELATIONS),
            Variety::V4 => strings(V4_RELATIONS),
            // Relations of P(O + O(k) + O): the fiber triangle and the lifted base pair.
            Variety::P2BundleOverP1 { k } => vec![
                "x3+x4+x5=0".into(),
                format!("x1+x2={}", rhs(vec![scaled(k as i64, "x3".into())])),
            ],
        }
    }

    pub fn expected_relations(&self) -> Result<Vec<ExpectedRelation>> {
        parse_relation_list(&self.printed_relations(), 0)
    }
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Variety::ProjectiveSpace { d } => write!(f, "P^{d}"),
            Variety::ProductOfP1 { d } => write!(f, "(P^1)^{d}"),
            Variety::Kleinschmidt { d, alpha } => write!(f, "P(O+O({alpha})) over P^{}", d - 1),
            Variety::W { d, a, b } => write!(f, "W^{d}({a},{b})"),
            Variety::S7 => f.write_str("S7"),
            Variety::S6 => f.write_str("S6"),
            Variety::M1 => f.write_str("M1"),
            Variety::PseudoV4 => f.write_str("pseudo-V4"),
            Variety::V4 => f.write_str("V4"),
            Variety::P2BundleOverP1 { k } => write!(f, "P(O+O({k})+O) over P^1"),
        }
    }
}

/// The five toric del Pezzo surfaces.
pub fn del_pezzo_surfaces() -> Vec<Variety> {
    vec![
        Variety::ProjectiveSpace { d: 2 },
        Variety::ProductOfP1 { d: 2 },
        Variety::Kleinschmidt { d: 2, alpha: 1 },
        Variety::S6,
        Variety::S7,
    ]
}

/// Bundle constructions with an explicit wild hypersurface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BundleId {
    CaseI { d: usize, a: u64 },
    CaseII { d: usize, a: u64, b: u64 },
    S7,
    S6,
    M1,
    PseudoV4,
    V4,
}

pub const BUNDLE_NAMES: &[(&str, &str)] = &[
    ("caseI", "Picard-2 construction over kleinschmidt(d, 2a-1); --d --a"),
    ("caseII", "Picard-3 construction over W^d(a,b); --d --a --b"),
    ("S7-bundle", "bundle over S7"),
    ("S6-bundle", "bundle over S6"),
    ("M1-bundle", "bundle over M1"),
    ("pseudo-V4-bundle", "bundle over the pseudo del Pezzo 4-fold"),
    ("V4-bundle", "bundle over the del Pezzo 4-fold"),
];

impl BundleId {
    pub fn from_name(name: &str, d: Option<usize>, a: Option<u64>, b: Option<u64>) -> Result<Self> {
        let need_d = || d.ok_or_else(|| Error::input(format!("{name} needs --d")));
        Ok(match name {
            "caseI" => BundleId::CaseI { d: need_d()?, a: a.unwrap_or(1) },
            "caseII" => BundleId::CaseII { d: need_d()?, a: a.unwrap_or(1), b: b.unwrap_or(1) },
            "S7-bundle" => BundleId::S7,
            "S6-bundle" => BundleId::S6,
            "M1-bundle" => BundleId::M1,
            "pseudo-V4-bundle" => BundleId::PseudoV4,
            "V4-bundle" => BundleId::V4,
            _ => return Err(Error::input(format!("unknown bundle {name:?}"))),
        })
    }

    /// The five fixed examples.
    pub fn examples() -> [BundleId; 5] {
        [BundleId::S7, BundleId::S6, BundleId::M1, BundleId::PseudoV4, BundleId::V4]
    }
}

impl fmt::Display for BundleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BundleId::CaseI { d, a } => write!(f, "caseI(d={d},a={a})"),
            BundleId::CaseII { d, a, b } => write!(f, "caseII(d={d},a={a},b={b})"),
            BundleId::S7 => f.write_str("S7-bundle"),
            BundleId::S6 => f.write_str("S6-bundle"),
            BundleId::M1 => f.write_str("M1-bundle"),
            BundleId::PseudoV4 => f.write_str("pseudo-V4-bundle"),
            BundleId::V4 => f.write_str("V4-bundle"),
        }
    }
}

/// A base variety, summands `E_1..E_r` (the leading trivial summand is
/// implicit), the twist `L`, the prime and the equation.
#[derive(Debug, Clone)]
pub struct Construction {
    pub id: BundleId,
    pub base: Variety,
    pub spec: BundleSpec,
    pub l: TorusDivisor,
    pub p: u64,
    /// In the `X_i`/`Y_j` text syntax.
    pub equation: String,
    /// Relations of the total space, `x~i` for lifted base rays and `yj` for fiber rays.
    pub printed_relations: Vec<String>,
}

impl Construction {
    pub fn total_space(&self) -> Result<TotalSpaceFan> {
        projectivize(&self.spec)
    }

    pub fn expected_relations(&self) -> Result<Vec<ExpectedRelation>> {
        parse_relation_list(&self.printed_relations, self.spec.base().num_rays())
    }
}

fn divisor(len: usize, terms: &[(usize, i64)]) -> TorusDivisor {
    // One-based in, zero-based out.
    let shifted: Vec<(usize, i64)> = terms.iter().map(|&(i, c)| (i - 1, c)).collect();
    TorusDivisor::from_terms(len, &shifted)
}

/// Bundle data for a named construction.
pub fn construction(id: BundleId) -> Result<Construction> {
    let p = 2;
    let (base, summands, l, equation, printed): (Variety, Vec<Vec<(usize, i64)>>, Vec<(usize, i64)>, String, Vec<String>) =
        match id {
            BundleId::CaseI { d, a } => {
                if d < 2 || a == 0 {
                    return Err(Error::input("caseI needs d >= 2 and a >= 1"));
                }
                let ai = a as i64;
                let mut summands = vec![vec![(1, ai - 1), (d + 1, 1)]];
                summands.extend((1..d).map(|_| Vec::new()));
                let mut eq = vec![format!("X{}X{}Y1^2", d + 1, d + 2)];
                eq.extend((1..=d).map(|i| format!("X{i}Y{}^2", i + 1)));
                let long_rhs = if a == 1 {
                    rhs(vec![Some(format!("x~{}", d + 1)), Some(sum_of("y", 2..=d + 1))])
                } else {
                    rhs(vec![scaled(2 * ai - 1, format!("x~{}", d + 1)), scaled(ai - 2, "y1".into())])
                };
                let printed = vec![
                    format!("x~{}+x~{}=y1", d + 1, d + 2),
                    format!("{}=0", sum_of("y", 1..=d + 1)),
                    format!("{}={long_rhs}", sum_of("x~", 1..=d)),
                ];
                (Variety::Kleinschmidt { d, alpha: 2 * a - 1 }, summands, vec![(1, 1)], eq.join("+"), printed)
            }
            BundleId::CaseII { d, a, b } => {
                if d < 3 || a == 0 || b == 0 {
                    return Err(Error::input("caseII needs d >= 3 and a, b >= 1"));
                }
                let (ai, bi) = (a as i64, b as i64);
                let mut summands = vec![vec![(1, ai - 1), (d, 1)], vec![(1, bi - 1), (d + 2, 1)]];
                summands.extend((2..d).map(|_| Vec::new()));
                let mut eq = vec![format!("X{}X{}Y1^2", d, d + 1), format!("X{}X{}Y2^2", d + 2, d + 3)];
                eq.extend((1..d).map(|i| format!("X{i}Y{}^2", i + 2)));
                let head = vec![
                    scaled(2 * ai - 1, format!("x~{d}")),
                    scaled(2 * bi - 1, format!("x~{}", d + 2)),
                ];
                let long_rhs = if a == 1 || b == 1 {
                    let mut parts = head;
                    parts.push(scaled(ai - 1, "y1".into()));
                    parts.push(scaled(bi - 1, "y2".into()));
                    parts.push(Some(sum_of("y", 3..=d + 1)));
                    rhs(parts)
                } else {
                    let mut parts = head;
                    parts.push(scaled(ai - 2, "y1".into()));
                    parts.push(scaled(bi - 2, "y2".into()));
                    rhs(parts)
                };
                let printed = vec![
                    format!("x~{}+x~{}=y1", d, d + 1),
                    format!("x~{}+x~{}=y2", d + 2, d + 3),
                    format!("{}=0", sum_of("y", 1..=d + 1)),
                    format!("{}={long_rhs}", sum_of("x~", 1..d)),
                ];
                (Variety::W { d, a, b }, summands, vec![(1, 1)], eq.join("+"), printed)
            }
            BundleId::S7 => (
                Variety::S7,
                vec![vec![(3, 1)], vec![(5, 1)]],
                vec![(2, 1)],
                "X3X4Y1^2+X1X5Y2^2+X2Y3^2".into(),
                strings(&[
                    "x~1+x~2=x~3+y2+y3",
                    "x~1+x~5=y2",
                    "x~2+x~4=x~5+y1+y3",
                    "x~3+x~4=y1",
                    "x~3+x~5=x~2+y1+y2",
                    "y1+y2+y3=0",
                ]),
            ),
            BundleId::S6 => (
                Variety::S6,
                vec![vec![(5, 1), (6, -1)], vec![(2, -1), (4, 1)]],
                vec![(2, 1), (3, 1)],
                "X1X5Y1^2+X3X4Y2^2+X2X6Y3^2".into(),
                strings(&[
                    "x~1+x~5=y1",
                    "x~3+x~4=y2",
                    "x~2+x~6=y3",
                    "x~3+x~6=x~1+y2+y3",
                    "x~3+x~5=x~2+y1+y2",
                    "x~1+x~2=x~3+y1+y3",
                    "x~5+x~6=x~4+y1+y3",
                    "x~2+x~4=x~5+y2+y3",
                    "x~1+x~4=x~6+y1+y2",
                    "y1+y2+y3=0",
                ]),
            ),
            BundleId::M1 => (
                Variety::M1,
                // The fiber labels follow D8, D4, D6 and then the trivial summands.
                vec![vec![(8, 1)], vec![(4, 1)], vec![(6, 1)], vec![]],
                vec![(3, 1)],
                "X1X8Y1^2+X4X5Y2^2+X6X7Y3^2+X2Y4^2+X3Y5^2".into(),
                strings(&[
                    "x~1+x~8=y1",
                    "x~4+x~5=y2",
                    "x~6+x~7=y3",
                    "x~1+x~2+x~3=x~4+x~6+y1+y4+y5",
                    "x~4+x~6+x~8=x~2+x~3+y1+y2+y3",
                    "x~2+x~3+x~5=x~6+x~8+y2+y4+y5",
                    "x~2+x~3+x~7=x~4+x~8+y3+y4+y5",
                    "y1+y2+y3+y4+y5=0",
                ]),
            ),
            BundleId::PseudoV4 => (
                Variety::PseudoV4,
                vec![vec![(1, 1)], vec![(2, 1)], vec![(3, 1)], vec![(9, 1)]],
                vec![(8, 1)],
                "X1X5Y1^2+X2X6Y2^2+X3X7Y3^2+X4X9Y4^2+X8Y5^2".into(),
                strings(&[
                    "x~4+x~9=y4",
                    "x~1+x~5=y1",
                    "x~2+x~6=y2",
                    "x~3+x~7=y3",
                    "x~1+x~2+x~9=x~7+x~8+y1+y2+y4",
                    "x~1+x~3+x~9=x~6+x~8+y1+y3+y4",
                    "x~2+x~3+x~9=x~5+x~8+y2+y3+y4",
                    "x~1+x~2+x~3=x~4+x~8+y1+y2+y3",
                    "x~4+x~5+x~8=x~2+x~3+y1+y4+y5",
                    "x~4+x~6+x~8=x~1+x~3+y2+y4+y5",
                    "x~4+x~7+x~8=x~1+x~2+y3+y4+y5",
                    "x~5+x~6+x~8=x~3+x~9+y1+y2+y5",
                    "x~5+x~7+x~8=x~2+x~9+y1+y3+y5",
                    "x~6+x~7+x~8=x~1+x~9+y2+y3+y5",
                    "y1+y2+y3+y4+y5=0",
                ]),
            ),
            BundleId::V4 => (
                Variety::V4,
                vec![vec![(1, 1), (9, -1)], vec![(2, 1), (9, -1)], vec![(3, 1), (9, -1)], vec![(10, 1), (9, -1)]],
                vec![(8, 1), (9, 1)],
                "X1X5Y1^2+X2X6Y2^2+X3X7Y3^2+X4X10Y4^2+X8X9Y5^2".into(),
                strings(&[
                    "x~4+x~10=y4",
                    "x~1+x~5=y1",
                    "x~2+x~6=y2",
                    "x~3+x~7=y3",
                    "x~8+x~9=y5",
                    "x~1+x~2+x~10=x~7+x~8+y1+y2+y4",
                    "x~1+x~3+x~10=x~6+x~8+y1+y3+y4",
                    "x~2+x~3+x~10=x~5+x~8+y2+y3+y4",
                    "x~1+x~2+x~3=x~4+x~8+y1+y2+y3",
                    "x~1+x~9+x~10=x~6+x~7+y1+y4+y5",
                    "x~2+x~9+x~10=x~5+x~7+y2+y4+y5",
                    "x~3+x~9+x~10=x~5+x~6+y3+y4+y5",
                    "x~1+x~2+x~9=x~4+x~7+y1+y2+y5",
                    "x~1+x~3+x~9=x~4+x~6+y1+y3+y5",
                    "x~2+x~3+x~9=x~4+x~5+y2+y3+y5",
                    "x~4+x~5+x~6=x~3+x~9+y1+y2+y4",
                    "x~4+x~5+x~7=x~2+x~9+y1+y3+y4",
                    "x~4+x~6+x~7=x~1+x~9+y2+y3+y4",
                    "x~5+x~6+x~7=x~9+x~10+y1+y2+y3",
                    "x~4+x~5+x~8=x~2+x~3+y1+y4+y5",
                    "x~4+x~6+x~8=x~1+x~3+y2+y4+y5",
                    "x~4+x~7+x~8=x~1+x~2+y3+y4+y5",
                    "x~5+x~6+x~8=x~3+x~10+y1+y2+y5",
                    "x~5+x~7+x~8=x~2+x~10+y1+y3+y5",
                    "x~6+x~7+x~8=x~1+x~10+y2+y3+y5",
                    "y1+y2+y3+y4+y5=0",
                ]),
            ),
        };
    let fan = base.fan()?;
    let n = fan.num_rays();
    let summands = summands.iter().map(|s| divisor(n, s)).collect();
    let l = divisor(n, &l);
    let spec = BundleSpec::new(fan, summands)?;
    Ok(Construction { id, base, spec, l, p, equation, printed_relations: printed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitive::primitive_relations;

    fn roundtrip(v: Variety) {
        let fan = v.fan().unwrap();
        assert!(fan.validate().passed(), "{v}: {}", fan.validate().summary());
        let diff = compare_relations(&primitive_relations(&fan).unwrap(), &v.expected_relations().unwrap());
        assert!(diff.matches(), "{v}: {diff:?}");
    }

    #[test]
    fn relation_parser() {
        let r = parse_relation("x1+x2=2x3", 0).unwrap();
        assert_eq!(r.collection, BTreeSet::from([0, 1]));
        assert_eq!(r.target, vec![(2, 2)]);
        let r = parse_relation("x~1+x_{10}=y2", 10).unwrap();
        assert_eq!(r.collection, BTreeSet::from([0, 9]));
        assert_eq!(r.target, vec![(11, 1)]);
        assert!(parse_relation("y1+y2+y3=0", 5).unwrap().target.is_empty());
        for bad in ["x1+x2", "2x1+x2=0", "x1+x1=0", "x0=0", "z1=0", "x1=x2+x2"] {
            assert!(parse_relation(bad, 0).is_err(), "{bad}");
        }
    }

    #[test]
    fn surfaces_roundtrip() {
        for v in del_pezzo_surfaces() {
            roundtrip(v);
        }
    }

    #[test]
    fn families_roundtrip() {
        for d in 1..=4 {
            roundtrip(Variety::ProjectiveSpace { d });
            roundtrip(Variety::ProductOfP1 { d });
        }
        for d in 2..=4 {
            for alpha in 0..=4 {
                roundtrip(Variety::Kleinschmidt { d, alpha });
            }
        }
        for d in 3..=4 {
            roundtrip(Variety::W { d, a: 1, b: 2 });
        }
        for k in 0..=2 {
            roundtrip(Variety::P2BundleOverP1 { k });
        }
    }

    #[test]
    fn m1_roundtrip() {
        roundtrip(Variety::M1);
    }

    #[test]
    fn names() {
        for (name, _) in VARIETY_NAMES {
            assert!(Variety::from_name(name, Some(3), Some(1), Some(1), Some(1)).is_ok());
        }
        assert!(Variety::from_name("projective-space", None, None, None, None).is_err());
        assert!(Variety::from_name("nope", None, None, None, None).is_err());
        for (name, _) in BUNDLE_NAMES {
            assert!(BundleId::from_name(name, Some(3), Some(1), Some(1)).is_ok());
        }
    }

    #[test]
    fn bundle_data_shapes() {
        let b = construction(BundleId::CaseI { d: 3, a: 2 }).unwrap();
        assert_eq!(b.spec.r(), 3);
        assert_eq!(b.equation, "X4X5Y1^2+X1Y2^2+X2Y3^2+X3Y4^2");
        assert_eq!(b.printed_relations[2], "x~1+x~2+x~3=3x~4");
        let b = construction(BundleId::CaseII { d: 3, a: 1, b: 2 }).unwrap();
        assert_eq!(b.printed_relations[3], "x~1+x~2=x~3+3x~5+y2+y3+y4");
        assert_eq!(b.total_space().unwrap().fan.num_rays(), 6 + 4);
        assert!(construction(BundleId::CaseI { d: 1, a: 1 }).is_err());
    }
}
