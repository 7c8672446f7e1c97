//! Exact smoothness for forms whose partials are monomials, and the
//! fiberwise p-th power test.
//!
//! A point of the total space lies on a unique torus orbit, described by its
//! exact vanishing set `Z`, which must span a cone. A monomial vanishes at the
//! point iff it contains a variable of `Z`; a sum of at least two distinct
//! monomials always has a zero on the torus, a single monomial never does.

use serde::Serialize;

use super::{is_homogeneous, partials, CoxForm};
use crate::bundle::TotalSpaceFan;
use crate::error::{Error, Result};
use crate::fan::Fan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Combinatorial,
    FiniteFieldSearch,
}

/// A torus orbit on which the form and all partials have a common zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularWitness {
    /// Ray indices set to zero; they span a cone.
    pub vanishing_set: Vec<usize>,
    /// Indices of the terms not containing a variable of the vanishing set.
    pub surviving_terms: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SmoothnessOutcome {
    Smooth,
    Singular { witness: SingularWitness },
    Undecided { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmoothnessVerdict {
    #[serde(flatten)]
    pub outcome: SmoothnessOutcome,
    pub method: Method,
}

impl SmoothnessVerdict {
    fn undecided(reason: impl Into<String>) -> Self {
        SmoothnessVerdict {
            outcome: SmoothnessOutcome::Undecided { reason: reason.into() },
            method: Method::Combinatorial,
        }
    }

    pub fn is_smooth(&self) -> bool {
        self.outcome == SmoothnessOutcome::Smooth
    }

    pub fn is_singular(&self) -> bool {
        matches!(self.outcome, SmoothnessOutcome::Singular { .. })
    }

    pub fn witness(&self) -> Option<&SingularWitness> {
        match &self.outcome {
            SmoothnessOutcome::Singular { witness } => Some(witness),
            _ => None,
        }
    }
}

fn check_vars(fan: &Fan, form: &CoxForm) -> Result<()> {
    if form.num_vars() != fan.num_rays() {
        return Err(Error::input(format!(
            "form has {} variables, fan has {} rays",
            form.num_vars(),
            fan.num_rays()
        )));
    }
    Ok(())
}

fn surviving(form: &CoxForm, z: &[usize]) -> Vec<usize> {
    (0..form.terms().len()).filter(|&k| !form.terms()[k].contains_any(z)).collect()
}

/// Decides smoothness for char-2 forms whose partials are all monomials or
/// zero. Anything else comes back undecided.
pub fn decide_smooth_monomial_partials(fan: &Fan, form: &CoxForm) -> Result<SmoothnessVerdict> {
    check_vars(fan, form)?;
    if form.char() != 2 {
        return Ok(SmoothnessVerdict::undecided(format!("characteristic {} is not 2", form.char())));
    }
    if form.is_zero() {
        return Ok(SmoothnessVerdict::undecided("zero form"));
    }
    let ps = partials(form);
    if let Some(v) = ps.iter().position(|q| q.terms().len() > 1) {
        return Ok(SmoothnessVerdict::undecided(format!(
            "partial in variable {} has {} terms",
            v + 1,
            ps[v].terms().len()
        )));
    }
    // Support of each nonzero partial; Z must meet all of them.
    let supports: Vec<Vec<usize>> = ps
        .iter()
        .filter_map(|q| q.terms().first())
        .map(|t| (0..t.exponents.len()).filter(|&v| t.exponents[v] > 0).collect())
        .collect();
    // A nonzero constant partial never vanishes.
    if supports.iter().any(|s| s.is_empty()) {
        return Ok(SmoothnessVerdict { outcome: SmoothnessOutcome::Smooth, method: Method::Combinatorial });
    }
    for z in fan.all_faces() {
        if !supports.iter().all(|s| s.iter().any(|v| z.contains(v))) {
            continue;
        }
        let surv = surviving(form, &z);
        if surv.len() != 1 {
            return Ok(SmoothnessVerdict {
                outcome: SmoothnessOutcome::Singular {
                    witness: SingularWitness { vanishing_set: z, surviving_terms: surv },
                },
                method: Method::Combinatorial,
            });
        }
    }
    Ok(SmoothnessVerdict { outcome: SmoothnessOutcome::Smooth, method: Method::Combinatorial })
}

/// Rechecks a witness from scratch: the vanishing set spans a cone, every
/// partial contains one of its variables, and the surviving terms are not a
/// single monomial. With no surviving terms the point with `Z = 0` and all
/// other coordinates 1 is an explicit common zero.
pub fn verify_vanishing_witness(fan: &Fan, form: &CoxForm, witness: &SingularWitness) -> bool {
    let z = &witness.vanishing_set;
    if form.num_vars() != fan.num_rays() || z.iter().any(|&v| v >= fan.num_rays()) {
        return false;
    }
    if !fan.is_face(z) {
        return false;
    }
    let partials_vanish = partials(form)
        .iter()
        .all(|q| q.terms().iter().all(|t| t.contains_any(z)));
    partials_vanish && surviving(form, z).len() != 1 && surviving(form, z) == witness.surviving_terms
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum WildnessVerdict {
    Wild,
    NotWild { reason: String },
    Undecided { reason: String },
}

impl WildnessVerdict {
    pub fn is_wild(&self) -> bool {
        *self == WildnessVerdict::Wild
    }
}

/// Is the form, restricted to each fiber, the p-th power of a nonzero linear
/// form in the fiber coordinates?
///
/// Every term must be `m(X) * Y_j^p` for a single `j`. Grouping by `j` gives
/// coefficients `m_j`, which must have no common zero on the base.
pub fn is_wild_fiberwise(t: &TotalSpaceFan, form: &CoxForm, p: u64) -> Result<WildnessVerdict> {
    let fan = &t.fan;
    check_vars(fan, form)?;
    if is_homogeneous(fan, form)?.is_none() {
        return Err(Error::input("form is not homogeneous"));
    }
    let r1 = t.fiber_rays.len();
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); r1];
    for (k, term) in form.terms().iter().enumerate() {
        let fiber: Vec<(usize, u32)> = t
            .fiber_rays
            .iter()
            .enumerate()
            .filter(|(_, &v)| term.exponents[v] > 0)
            .map(|(j, &v)| (j, term.exponents[v]))
            .collect();
        if let Some((j, e)) = fiber.iter().find(|(_, e)| u64::from(*e) % p != 0) {
            return Ok(WildnessVerdict::NotWild {
                reason: format!("term {} has Y{}-exponent {e}, not divisible by {p}", k + 1, j + 1),
            });
        }
        match fiber.as_slice() {
            [(j, e)] if u64::from(*e) == p => groups[*j].push(k),
            _ => {
                return Ok(WildnessVerdict::NotWild {
                    reason: format!("fiber part of term {} is not a single Y^{p}", k + 1),
                })
            }
        }
    }
    let mut undecided: Option<Vec<usize>> = None;
    for z in fan.all_faces() {
        if !z.iter().all(|v| t.base_ray_map.contains(v)) {
            continue;
        }
        let counts: Vec<usize> = groups
            .iter()
            .map(|g| g.iter().filter(|&&k| !form.terms()[k].contains_any(&z)).count())
            .collect();
        if counts.contains(&1) {
            continue;
        }
        match counts.iter().filter(|&&c| c >= 2).count() {
            0 | 1 => {
                let names: Vec<String> = z.iter().map(|&v| t.variable_name(v)).collect();
                return Ok(WildnessVerdict::NotWild {
                    reason: format!("fiber coefficients have a common zero where {{{}}} vanish", names.join(",")),
                });
            }
            _ => {
                undecided.get_or_insert(z);
            }
        }
    }
    Ok(match undecided {
        None => WildnessVerdict::Wild,
        Some(z) => WildnessVerdict::Undecided {
            reason: format!("several fiber coefficients are not monomials on the stratum {z:?}"),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1xp1() -> Fan {
        Fan::from_i64(
            2,
            &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]],
            &[&[0, 2], &[0, 3], &[1, 2], &[1, 3]],
        )
        .unwrap()
    }

    #[test]
    fn product_of_coordinates_is_singular() {
        let fan = p1xp1();
        let f = CoxForm::parse_on_fan(&fan, "X1*X3", 2).unwrap();
        let v = decide_smooth_monomial_partials(&fan, &f).unwrap();
        let w = v.witness().unwrap();
        assert_eq!(w.vanishing_set, vec![0, 2]);
        assert!(w.surviving_terms.is_empty());
        assert!(verify_vanishing_witness(&fan, &f, w));
    }

    #[test]
    fn diagonal_conic_on_quadric_is_smooth() {
        // X1X3 + X2X4 is a (1,1) curve, smooth in every characteristic.
        let fan = p1xp1();
        let f = CoxForm::parse_on_fan(&fan, "X1*X3+X2*X4", 2).unwrap();
        assert!(decide_smooth_monomial_partials(&fan, &f).unwrap().is_smooth());
        // X1 alone: a fiber, smooth (its X1-partial is the constant 1).
        let g = CoxForm::parse_on_fan(&fan, "X1", 2).unwrap();
        assert!(decide_smooth_monomial_partials(&fan, &g).unwrap().is_smooth());
    }

    #[test]
    fn preconditions() {
        let fan = p1xp1();
        let f = CoxForm::parse_on_fan(&fan, "X1*X3+X2*X4", 3).unwrap();
        assert!(matches!(
            decide_smooth_monomial_partials(&fan, &f).unwrap().outcome,
            SmoothnessOutcome::Undecided { .. }
        ));
        let g = CoxForm::parse_on_fan(&fan, "X1*X3+X1*X4", 2).unwrap();
        assert!(matches!(
            decide_smooth_monomial_partials(&fan, &g).unwrap().outcome,
            SmoothnessOutcome::Undecided { .. }
        ));
    }

    #[test]
    fn forged_witness_rejected() {
        let fan = p1xp1();
        let f = CoxForm::parse_on_fan(&fan, "X1*X3+X2*X4", 2).unwrap();
        let fake = SingularWitness { vanishing_set: vec![0, 1], surviving_terms: vec![] };
        assert!(!verify_vanishing_witness(&fan, &f, &fake));
        let fake = SingularWitness { vanishing_set: vec![0, 2], surviving_terms: vec![1] };
        assert!(!verify_vanishing_witness(&fan, &f, &fake));
    }
}
