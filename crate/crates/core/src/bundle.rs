//! Fans of projectivized split bundles `P(O ⊕ O(E_1) ⊕ … ⊕ O(E_r))`.
//!
//! Ray order in the total space: the lifted base rays `x̃_1..x̃_l` first, then
//! the fiber rays `y_1..y_{r+1}`.

use std::path::Path;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::divisor::{class_of, intersect, ClassGroup, DivisorClass, TorusDivisor};
use crate::error::{Error, Result};
use crate::fan::{Fan, FanFile};
use crate::lattice::{int, Int, IntVector};
use crate::primitive::CurveClass;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleSpec {
    base: Fan,
    summands: Vec<TorusDivisor>,
}

impl BundleSpec {
    pub fn new(base: Fan, summands: Vec<TorusDivisor>) -> Result<Self> {
        if summands.is_empty() {
            return Err(Error::input("a bundle needs at least one summand besides O"));
        }
        for (j, e) in summands.iter().enumerate() {
            if e.len() != base.num_rays() {
                return Err(Error::input(format!(
                    "summand {} has {} coefficients, base has {} rays",
                    j + 1,
                    e.len(),
                    base.num_rays()
                )));
            }
        }
        Ok(BundleSpec { base, summands })
    }

    pub fn base(&self) -> &Fan {
        &self.base
    }

    pub fn summands(&self) -> &[TorusDivisor] {
        &self.summands
    }

    /// Number of nontrivial summands; the fibers are `P^r`.
    pub fn r(&self) -> usize {
        self.summands.len()
    }

    pub fn to_file(&self) -> Result<BundleFile> {
        let summands = self
            .summands
            .iter()
            .map(|e| {
                e.coeffs
                    .iter()
                    .map(|c| c.to_i64().ok_or_else(|| Error::input("coefficient exceeds 64 bits")))
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BundleFile { base: FanSource::Inline(self.base.to_file()?), summands })
    }
}

/// Total-space fan together with the naming of its rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalSpaceFan {
    pub fan: Fan,
    /// `base_ray_map[i]` is the index of `x̃_{i+1}`.
    pub base_ray_map: Vec<usize>,
    /// `fiber_rays[j]` is the index of `y_{j+1}`.
    pub fiber_rays: Vec<usize>,
    base_dim: usize,
}

impl TotalSpaceFan {
    pub fn r(&self) -> usize {
        self.fiber_rays.len() - 1
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn num_base_rays(&self) -> usize {
        self.base_ray_map.len()
    }

    /// Prime divisor `F_j` (one-based `j`, as in `F_1..F_{r+1}`).
    pub fn fiber_divisor(&self, j: usize) -> TorusDivisor {
        TorusDivisor::prime(self.fan.num_rays(), self.fiber_rays[j - 1])
    }

    /// Prime divisor `D̃_i` (one-based).
    pub fn base_divisor(&self, i: usize) -> TorusDivisor {
        TorusDivisor::prime(self.fan.num_rays(), self.base_ray_map[i - 1])
    }

    /// One-based display name of a ray: `x~3` or `y2`.
    pub fn ray_name(&self, idx: usize) -> String {
        if let Some(i) = self.base_ray_map.iter().position(|&k| k == idx) {
            format!("x~{}", i + 1)
        } else if let Some(j) = self.fiber_rays.iter().position(|&k| k == idx) {
            format!("y{}", j + 1)
        } else {
            format!("?{idx}")
        }
    }

    /// Cox variable name of a ray: `X3` or `Y2`.
    pub fn variable_name(&self, idx: usize) -> String {
        let name = self.ray_name(idx);
        match name.strip_prefix("x~") {
            Some(rest) => format!("X{rest}"),
            None => name.replacen('y', "Y", 1),
        }
    }
}

pub fn projectivize(spec: &BundleSpec) -> Result<TotalSpaceFan> {
    let base = spec.base();
    base.ensure_valid().map_err(|e| Error::input(format!("base fan: {e}")))?;
    let d = base.dim();
    let r = spec.r();
    let l = base.num_rays();

    let mut rays: Vec<IntVector> = Vec::with_capacity(l + r + 1);
    for i in 0..l {
        let mut v = base.ray(i).clone();
        v.extend(spec.summands().iter().map(|e| e.coeffs[i].clone()));
        rays.push(v);
    }
    for j in 0..r {
        let mut v = vec![Int::from(0); d + r];
        v[d + j] = int(1);
        rays.push(v);
    }
    let mut last = vec![Int::from(0); d];
    last.extend(std::iter::repeat(int(-1)).take(r));
    rays.push(last);

    let fiber_rays: Vec<usize> = (l..l + r + 1).collect();
    let mut cones = Vec::with_capacity(base.max_cones().len() * (r + 1));
    for sigma in base.max_cones() {
        for skip in 0..=r {
            let mut cone = sigma.clone();
            cone.extend(fiber_rays.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &y)| y));
            cones.push(cone);
        }
    }
    let fan = Fan::new(d + r, rays, cones)?;
    Ok(TotalSpaceFan { fan, base_ray_map: (0..l).collect(), fiber_rays, base_dim: d })
}

/// `ξ = [F_{r+1}]`.
pub fn tautological_class(t: &TotalSpaceFan) -> Result<DivisorClass> {
    class_of(&t.fan, &t.fiber_divisor(t.r() + 1))
}

/// `π^*D`: the same coefficients on the lifted base rays.
pub fn pullback(t: &TotalSpaceFan, d: &TorusDivisor) -> Result<TorusDivisor> {
    if d.len() != t.num_base_rays() {
        return Err(Error::input(format!(
            "divisor has {} coefficients, base has {} rays",
            d.len(),
            t.num_base_rays()
        )));
    }
    let mut out = TorusDivisor::zero(t.fan.num_rays());
    for (i, c) in d.coeffs.iter().enumerate() {
        out.coeffs[t.base_ray_map[i]] = c.clone();
    }
    Ok(out)
}

/// `p·ξ + π^*L`.
pub fn hypersurface_class(t: &TotalSpaceFan, p: u64, l: &TorusDivisor) -> Result<DivisorClass> {
    let cg = crate::divisor::class_group(&t.fan);
    let xi = tautological_class(t)?;
    let pl = class_of(&t.fan, &pullback(t, l)?)?;
    Ok(cg.add(&cg.scale(&Int::from(p), &xi), &pl))
}

/// A divisor on the total space in the class `p·ξ + π^*L`, built from
/// prime divisors: `p·F_{r+1} + π^*L`.
pub fn hypersurface_divisor(t: &TotalSpaceFan, p: u64, l: &TorusDivisor) -> Result<TorusDivisor> {
    let f = t.fiber_divisor(t.r() + 1).scale(&Int::from(p));
    Ok(&f + &pullback(t, l)?)
}

/// Degrees of `E^p ⊗ L` restricted to a base curve: `p(E_j·C) + (L·C)` for
/// `j = 0..r` with `E_0 = 0`. Sorted ascending.
pub fn splitting_on_curve(spec: &BundleSpec, p: u64, l: &TorusDivisor, c: &CurveClass) -> Result<Vec<Int>> {
    let lc = intersect(l, c)?;
    let mut out = vec![lc.clone()];
    for e in spec.summands() {
        out.push(Int::from(p) * intersect(e, c)? + &lc);
    }
    out.sort();
    Ok(out)
}

/// Where a bundle file finds its base fan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FanSource {
    Inline(FanFile),
    Path(String),
}

/// On-disk bundle description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleFile {
    pub base: FanSource,
    pub summands: Vec<Vec<i64>>,
}

impl BundleFile {
    /// Resolves the base fan; relative base paths are taken relative to `dir`.
    pub fn resolve(self, dir: Option<&Path>) -> Result<BundleSpec> {
        let base = match self.base {
            FanSource::Inline(f) => f.into_fan()?,
            FanSource::Path(p) => {
                let path = match dir {
                    Some(d) if Path::new(&p).is_relative() => d.join(&p),
                    _ => Path::new(&p).to_path_buf(),
                };
                Fan::from_json(&std::fs::read_to_string(&path)?)?
            }
        };
        BundleSpec::new(base, self.summands.iter().map(|s| TorusDivisor::from_i64(s)).collect())
    }
}

/// Class-group helper used by callers comparing many classes on one fan.
pub fn total_class_group(t: &TotalSpaceFan) -> &ClassGroup {
    crate::divisor::class_group(&t.fan)
}
