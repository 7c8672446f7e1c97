//! Smooth complete simplicial fans.
//!
//! Rays are referenced by index everywhere; maximal cones are stored as
//! sorted index sets. Derived data (face set, dual bases, class group) is
//! computed lazily and cached on the fan, which never changes after
//! construction.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::divisor::ClassGroup;
use crate::error::{Error, Result};
use crate::lattice::{
    self, content, dot, express_in_basis, feasible_nonnegative, Int, IntMatrix, IntVector, Rat,
    RationalVector,
};

#[derive(Clone)]
pub struct Fan {
    dim: usize,
    rays: Vec<IntVector>,
    max_cones: Vec<Vec<usize>>,
    cache: FanCache,
}

#[derive(Clone, Default)]
struct FanCache {
    faces: OnceLock<HashSet<Vec<usize>>>,
    dual_bases: OnceLock<Vec<Option<IntMatrix>>>,
    class_group: OnceLock<ClassGroup>,
}

/// A codimension-one cone shared by two maximal cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    /// Sorted ray indices spanning the wall.
    pub generators: Vec<usize>,
    /// Indices of the two maximal cones containing the wall.
    pub adjacent: (usize, usize),
    /// The ray completing each adjacent cone, in the same order.
    pub opposite_rays: (usize, usize),
}

/// Per-check outcome of [`Fan::validate`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Rays whose coordinates have a common factor (or are zero).
    pub non_primitive_rays: Vec<usize>,
    /// Maximal cones whose ray matrix has |det| != 1.
    pub non_smooth_cones: Vec<usize>,
    /// Pairs of maximal cones that do not meet in a common face.
    pub bad_intersections: Vec<(usize, usize)>,
    /// Facets contained in a number of maximal cones other than two.
    pub unpaired_facets: Vec<Vec<usize>>,
    /// Whether maximal cones are connected through shared facets.
    pub connected: bool,
}

impl ValidationReport {
    pub fn primitive(&self) -> bool {
        self.non_primitive_rays.is_empty()
    }

    pub fn smooth(&self) -> bool {
        self.non_smooth_cones.is_empty()
    }

    pub fn intersections_ok(&self) -> bool {
        self.bad_intersections.is_empty()
    }

    pub fn complete(&self) -> bool {
        self.unpaired_facets.is_empty() && self.connected
    }

    pub fn passed(&self) -> bool {
        self.primitive() && self.smooth() && self.intersections_ok() && self.complete()
    }

    pub fn summary(&self) -> String {
        if self.passed() {
            return "smooth complete".to_string();
        }
        let mut parts = Vec::new();
        if !self.primitive() {
            parts.push(format!("non-primitive rays {:?}", self.non_primitive_rays));
        }
        if !self.smooth() {
            parts.push(format!("non-smooth cones {:?}", self.non_smooth_cones));
        }
        if !self.intersections_ok() {
            parts.push(format!("improper cone intersections {:?}", self.bad_intersections));
        }
        if !self.unpaired_facets.is_empty() {
            parts.push(format!("unpaired facets {:?}", self.unpaired_facets));
        }
        if !self.connected {
            parts.push("cone adjacency graph disconnected".to_string());
        }
        parts.join("; ")
    }
}

/// A maximal cone containing a point, with the point's coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainingCone {
    /// Index of the maximal cone, `None` for the zero point.
    pub cone: Option<usize>,
    /// Coordinates aligned with the cone's (sorted) ray indices.
    pub coordinates: RationalVector,
    /// Ray indices carrying strictly positive coordinates: the face whose
    /// relative interior contains the point.
    pub support: Vec<usize>,
}

impl Fan {
    /// Builds a fan after structural checks (indices in range, cone sizes,
    /// no duplicate rays or cones). Geometric checks live in [`Fan::validate`].
    pub fn new(dim: usize, rays: Vec<IntVector>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("lattice dimension must be positive"));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::input(format!(
                    "ray {i} has {} coordinates, expected {dim}",
                    r.len()
                )));
            }
        }
        let mut seen = HashSet::new();
        for (i, r) in rays.iter().enumerate() {
            if !seen.insert(r) {
                return Err(Error::input(format!("duplicate ray {i}")));
            }
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        let mut seen_cones = HashSet::new();
        for (ci, cone) in max_cones.into_iter().enumerate() {
            let mut sorted = cone.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::input(format!("cone {ci} repeats a ray index")));
            }
            if let Some(&bad) = sorted.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::input(format!(
                    "cone {ci} references ray {bad}, only {} rays",
                    rays.len()
                )));
            }
            if sorted.len() != dim {
                return Err(Error::input(format!(
                    "cone {ci} has {} rays; maximal cones must have {dim}",
                    sorted.len()
                )));
            }
            if !seen_cones.insert(sorted.clone()) {
                return Err(Error::input(format!("duplicate cone {ci}")));
            }
            cones.push(sorted);
        }
        Ok(Fan { dim, rays, max_cones: cones, cache: FanCache::default() })
    }

    pub fn from_i64(dim: usize, rays: &[&[i64]], max_cones: &[&[usize]]) -> Result<Self> {
        Fan::new(
            dim,
            rays.iter().map(|r| lattice::int_vec(r)).collect(),
            max_cones.iter().map(|c| c.to_vec()).collect(),
        )
    }

    /// [`Fan::new`] followed by [`Fan::validate`]; fails unless every check passes.
    pub fn validated(dim: usize, rays: Vec<IntVector>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        let fan = Fan::new(dim, rays, max_cones)?;
        fan.ensure_valid()?;
        Ok(fan)
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.passed() {
            Ok(())
        } else {
            Err(Error::InvalidFan(report.summary()))
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &IntVector {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// `#rays - dim`, the Picard number of a smooth complete fan.
    pub fn picard_number(&self) -> usize {
        self.rays.len().saturating_sub(self.dim)
    }

    /// The `#rays × dim` matrix whose rows are the ray generators.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.rays)
    }

    pub(crate) fn class_group_cache(&self) -> &OnceLock<ClassGroup> {
        &self.cache.class_group
    }

    fn faces(&self) -> &HashSet<Vec<usize>> {
        self.cache.faces.get_or_init(|| {
            let mut faces = HashSet::new();
            for cone in &self.max_cones {
                for mask in 0u64..(1u64 << cone.len()) {
                    let face: Vec<usize> = cone
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &r)| r)
                        .collect();
                    faces.insert(face);
                }
            }
            faces
        })
    }

    /// All cones of the fan as sorted ray-index sets, ordered by size and
    /// then lexicographically.
    pub fn all_faces(&self) -> Vec<Vec<usize>> {
        let mut faces: Vec<Vec<usize>> = self.faces().iter().cloned().collect();
        faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        faces
    }

    /// Rows are the dual basis of each unimodular maximal cone (inverse of the
    /// matrix whose columns are its rays, in sorted index order).
    fn dual_bases(&self) -> &[Option<IntMatrix>] {
        self.cache.dual_bases.get_or_init(|| {
            self.max_cones
                .iter()
                .map(|cone| {
                    let cols: Vec<IntVector> = cone.iter().map(|&i| self.rays[i].clone()).collect();
                    IntMatrix::from_columns(&cols).inverse_unimodular()
                })
                .collect()
        })
    }

    /// Whether the given rays lie in a common maximal cone.
    pub fn is_face(&self, subset: &[usize]) -> bool {
        let mut key = subset.to_vec();
        key.sort_unstable();
        key.dedup();
        if key.len() > self.dim {
            return false;
        }
        self.faces().contains(&key)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();

        for (i, r) in self.rays.iter().enumerate() {
            if !content(r).is_one() {
                report.non_primitive_rays.push(i);
            }
        }

        for (ci, cone) in self.max_cones.iter().enumerate() {
            let cols: Vec<IntVector> = cone.iter().map(|&i| self.rays[i].clone()).collect();
            if !IntMatrix::from_columns(&cols).determinant().abs().is_one() {
                report.non_smooth_cones.push(ci);
            }
        }

        let facets = self.facet_map();
        for (facet, owners) in &facets {
            if owners.len() != 2 {
                report.unpaired_facets.push(facet.clone());
            }
        }
        report.connected = self.adjacency_connected(&facets);

        for a in 0..self.max_cones.len() {
            for b in a + 1..self.max_cones.len() {
                if !self.cones_meet_properly(a, b) {
                    report.bad_intersections.push((a, b));
                }
            }
        }
        report
    }

    /// Facet (sorted, size dim-1) -> list of (cone index, opposite ray).
    fn facet_map(&self) -> BTreeMap<Vec<usize>, Vec<(usize, usize)>> {
        let mut map: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        for (ci, cone) in self.max_cones.iter().enumerate() {
            for skip in 0..cone.len() {
                let facet: Vec<usize> =
                    cone.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &r)| r).collect();
                map.entry(facet).or_default().push((ci, cone[skip]));
            }
        }
        map
    }

    fn adjacency_connected(&self, facets: &BTreeMap<Vec<usize>, Vec<(usize, usize)>>) -> bool {
        let n = self.max_cones.len();
        if n == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); n];
        for owners in facets.values() {
            for x in owners {
                for y in owners {
                    if x.0 != y.0 {
                        adj[x.0].push(y.0);
                    }
                }
            }
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(c) = queue.pop_front() {
            for &nb in &adj[c] {
                if !seen[nb] {
                    seen[nb] = true;
                    queue.push_back(nb);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Whether maximal cones `a` and `b` intersect exactly in the cone on
    /// their common rays.
    fn cones_meet_properly(&self, a: usize, b: usize) -> bool {
        let ca = &self.max_cones[a];
        let cb = &self.max_cones[b];
        let common: BTreeSet<usize> = ca.iter().filter(|i| cb.contains(i)).copied().collect();
        let duals = self.dual_bases();
        if let (Some(da), Some(db)) = (&duals[a], &duals[b]) {
            if self.separated_by_dual_functionals(ca, da, cb, db, &common) {
                return true;
            }
        }
        !self.improper_intersection_lp(ca, cb, &common)
    }

    /// Cheap sufficient test: repeatedly use coordinate functionals of one
    /// cone that are nonpositive on the other to peel rays away. Succeeds when
    /// only common rays remain.
    fn separated_by_dual_functionals(
        &self,
        ca: &[usize],
        da: &IntMatrix,
        cb: &[usize],
        db: &IntMatrix,
        common: &BTreeSet<usize>,
    ) -> bool {
        let mut live_a: BTreeSet<usize> = ca.iter().copied().collect();
        let mut live_b: BTreeSet<usize> = cb.iter().copied().collect();
        loop {
            if live_a.is_subset(common) && live_b.is_subset(common) {
                return true;
            }
            let mut progress = false;
            for (pos, &ray) in ca.iter().enumerate() {
                if common.contains(&ray) || !live_a.contains(&ray) {
                    continue;
                }
                let h = da.row(pos);
                let values: Vec<(usize, Int)> =
                    live_b.iter().map(|&j| (j, dot(h, &self.rays[j]))).collect();
                if values.iter().all(|(_, v)| !v.is_positive()) {
                    live_a.remove(&ray);
                    for (j, v) in values {
                        if v.is_negative() {
                            live_b.remove(&j);
                        }
                    }
                    progress = true;
                }
            }
            for (pos, &ray) in cb.iter().enumerate() {
                if common.contains(&ray) || !live_b.contains(&ray) {
                    continue;
                }
                let h = db.row(pos);
                let values: Vec<(usize, Int)> =
                    live_a.iter().map(|&j| (j, dot(h, &self.rays[j]))).collect();
                if values.iter().all(|(_, v)| !v.is_positive()) {
                    live_b.remove(&ray);
                    for (j, v) in values {
                        if v.is_negative() {
                            live_a.remove(&j);
                        }
                    }
                    progress = true;
                }
            }
            if !progress {
                return false;
            }
        }
    }

    /// Exact test: is there a point of both cones with weight outside the
    /// common rays?
    fn improper_intersection_lp(&self, ca: &[usize], cb: &[usize], common: &BTreeSet<usize>) -> bool {
        let vars: Vec<(usize, bool)> =
            ca.iter().map(|&i| (i, true)).chain(cb.iter().map(|&i| (i, false))).collect();
        let mut rows: Vec<Vec<Rat>> = (0..self.dim)
            .map(|r| {
                vars.iter()
                    .map(|&(i, from_a)| {
                        let v = Rat::from(self.rays[i][r].clone());
                        if from_a {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect()
            })
            .collect();
        rows.push(
            vars.iter()
                .map(|(i, _)| if common.contains(i) { Rat::zero() } else { Rat::one() })
                .collect(),
        );
        let mut rhs = vec![Rat::zero(); self.dim];
        rhs.push(Rat::one());
        feasible_nonnegative(&rows, &rhs).is_some()
    }

    /// Walls in lexicographic order of their generator sets.
    pub fn walls(&self) -> Vec<Wall> {
        self.facet_map()
            .into_iter()
            .filter(|(_, owners)| owners.len() == 2)
            .map(|(generators, owners)| Wall {
                generators,
                adjacent: (owners[0].0, owners[1].0),
                opposite_rays: (owners[0].1, owners[1].1),
            })
            .collect()
    }

    /// Coordinates of `point` in maximal cone `cone`, if it lies in that cone.
    pub fn coordinates_in_cone(&self, cone: usize, point: &[Int]) -> Option<RationalVector> {
        if let Some(dual) = &self.dual_bases()[cone] {
            let coords = dual.mul_vec(point);
            if coords.iter().any(Signed::is_negative) {
                return None;
            }
            return Some(RationalVector(coords.into_iter().map(Rat::from).collect()));
        }
        let gens: Vec<IntVector> =
            self.max_cones[cone].iter().map(|&i| self.rays[i].clone()).collect();
        lattice::cone_coordinates(&gens, point).ok().flatten()
    }

    /// First maximal cone (in stored order) containing `point`.
    pub fn find_containing_cone(&self, point: &[Int]) -> Result<ContainingCone> {
        if point.len() != self.dim {
            return Err(Error::input(format!(
                "point has {} coordinates, expected {}",
                point.len(),
                self.dim
            )));
        }
        if lattice::is_zero_vec(point) {
            return Ok(ContainingCone {
                cone: None,
                coordinates: RationalVector(Vec::new()),
                support: Vec::new(),
            });
        }
        for (ci, cone) in self.max_cones.iter().enumerate() {
            if let Some(coords) = self.coordinates_in_cone(ci, point) {
                let support = coords.positive_support().into_iter().map(|k| cone[k]).collect();
                return Ok(ContainingCone { cone: Some(ci), coordinates: coords, support });
            }
        }
        Err(Error::InvalidFan("point not covered by any maximal cone (fan not complete)".into()))
    }

    /// Coordinates of `point` in the basis of a wall's generators plus nothing
    /// else (it must lie in their span).
    pub(crate) fn express_in_rays(&self, rays: &[usize], point: &[Int]) -> Result<Option<RationalVector>> {
        let gens: Vec<IntVector> = rays.iter().map(|&i| self.rays[i].clone()).collect();
        Ok(express_in_basis(&gens, point)?)
    }

    /// Applies a lattice automorphism (given by its matrix acting on column
    /// vectors) to every ray.
    pub fn transform(&self, m: &IntMatrix) -> Result<Fan> {
        if m.rows() != self.dim || m.cols() != self.dim || m.inverse_unimodular().is_none() {
            return Err(Error::input("transform must be a unimodular dim × dim matrix"));
        }
        Fan::new(
            self.dim,
            self.rays.iter().map(|r| m.mul_vec(r)).collect(),
            self.max_cones.clone(),
        )
    }

    pub fn to_file(&self) -> Result<FanFile> {
        let rays = self
            .rays
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        x.to_i64().ok_or_else(|| {
                            Error::input("ray coordinate exceeds 64-bit range for file output")
                        })
                    })
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FanFile { dim: self.dim, rays, max_cones: self.max_cones.clone() })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file()?)?)
    }

    pub fn from_json(text: &str) -> Result<Fan> {
        let file: FanFile = serde_json::from_str(text)?;
        file.into_fan()
    }
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.rays == other.rays && self.max_cones == other.max_cones
    }
}

impl Eq for Fan {}

impl fmt::Debug for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rays: Vec<Vec<String>> =
            self.rays.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        f.debug_struct("Fan")
            .field("dim", &self.dim)
            .field("rays", &rays)
            .field("max_cones", &self.max_cones)
            .finish()
    }
}

/// On-disk fan representation. Keys are written in field order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanFile {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl FanFile {
    pub fn into_fan(self) -> Result<Fan> {
        Fan::new(
            self.dim,
            self.rays.iter().map(|r| lattice::int_vec(r)).collect(),
            self.max_cones,
        )
    }
}
