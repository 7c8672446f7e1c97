//! The full table of checks behind `toric-whb reproduce`.
//!
//! Each check compares a computed quantity with a printed one: relation
//! lists, linear equivalences, intersection numbers, splitting multisets,
//! admissible primes, and the homogeneity, smoothness and wildness of the
//! equations.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;

use crate::bundle::{hypersurface_divisor, splitting_on_curve, TotalSpaceFan};
use crate::catalog::{compare_relations, construction, BundleId, Construction, Variety};
use crate::cox::{decide_smooth_monomial_partials, is_homogeneous, is_wild_fiberwise, CoxForm};
use crate::divisor::{class_of, intersect, linearly_equivalent, TorusDivisor};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{int, Int};
use crate::primitive::{primitive_relations, PrimitiveRelation};
use crate::whb::{
    admissible_prime_set, check_splitting_case, classify_fano, expected_bundle_splitting, Case, FanoCase,
    SplittingType, DEFAULT_P_MAX,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Section {
    #[serde(rename = "4I")]
    PicardTwo,
    #[serde(rename = "4II")]
    PicardThree,
    #[serde(rename = "5")]
    Fano,
}

impl Section {
    pub const ALL: [Section; 3] = [Section::PicardTwo, Section::PicardThree, Section::Fano];

    pub fn label(self) -> &'static str {
        match self {
            Section::PicardTwo => "4I",
            Section::PicardThree => "4II",
            Section::Fano => "5",
        }
    }
}

impl FromStr for Section {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "4I" => Ok(Section::PicardTwo),
            "4II" => Ok(Section::PicardThree),
            "5" => Ok(Section::Fano),
            _ => Err(Error::input(format!("unknown section {s:?}; expected 4I, 4II or 5"))),
        }
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub section: Section,
    pub subject: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReproReport {
    pub checks: Vec<Check>,
}

impl ReproReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// One line per check, then a count.
    pub fn table(&self) -> String {
        let w_subject = self.checks.iter().map(|c| c.subject.len()).max().unwrap_or(0);
        let w_name = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let line = format!(
                "{status}  {:<3}  {:<w_subject$}  {:<w_name$}  {}",
                c.section.label(),
                c.subject,
                c.name,
                c.detail
            );
            let _ = writeln!(out, "{}", line.trim_end());
        }
        let failed = self.failures().count();
        let _ = writeln!(out, "{} checks, {} passed, {} failed", self.checks.len(), self.checks.len() - failed, failed);
        out
    }
}

/// Parameter ranges for the parametric families.
pub const PICARD_TWO_DIMS: std::ops::RangeInclusive<usize> = 2..=5;
pub const PICARD_TWO_A: std::ops::RangeInclusive<u64> = 1..=3;
pub const PICARD_THREE_DIMS: std::ops::RangeInclusive<usize> = 3..=5;
pub const PICARD_THREE_AB: std::ops::RangeInclusive<u64> = 1..=2;

struct Recorder<'a> {
    section: Section,
    subject: String,
    out: &'a mut Vec<Check>,
}

impl Recorder<'_> {
    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.out.push(Check {
            section: self.section,
            subject: self.subject.clone(),
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn equivalent(&mut self, fan: &Fan, name: &str, a: &TorusDivisor, b: &TorusDivisor) -> Result<()> {
        let ok = linearly_equivalent(fan, a, b)?;
        self.check(name, ok, "");
        Ok(())
    }
}

fn show(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(Int::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn show_primes(v: &[u64]) -> String {
    let parts: Vec<String> = v.iter().map(u64::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

/// Runs one section, or all of them.
pub fn reproduce(section: Option<Section>) -> Result<ReproReport> {
    let mut checks = Vec::new();
    for s in Section::ALL {
        if section.is_none_or(|x| x == s) {
            match s {
                Section::PicardTwo => picard_two(&mut checks)?,
                Section::PicardThree => picard_three(&mut checks)?,
                Section::Fano => fano(&mut checks)?,
            }
        }
    }
    Ok(ReproReport { checks })
}

/// Does `E^p ⊗ L|_C` agree with the splitting forced by `T_S|_C` on every
/// extremal curve?
pub fn splitting_matches_expected(b: &Construction, rels: &[PrimitiveRelation]) -> Result<(bool, String)> {
    let dim = b.spec.base().dim();
    let mut ok = true;
    let mut notes = Vec::new();
    for rel in rels.iter().filter(|r| r.extremal) {
        let t = SplittingType::of_relation(dim, rel)?;
        let cases = check_splitting_case(&t, b.p);
        let computed = splitting_on_curve(&b.spec, b.p, &b.l, &rel.curve_class())?;
        let mut candidates = Vec::new();
        if cases.case_i {
            candidates.push(expected_bundle_splitting(&t, Case::I)?);
        }
        if cases.case_ii {
            candidates.push(expected_bundle_splitting(&t, Case::II)?);
        }
        if !candidates.contains(&computed) {
            ok = false;
            let name = rel.display_with(|i| format!("x{}", i + 1));
            notes.push(format!("{name}: computed {}", show(&computed)));
        }
    }
    Ok((ok, notes.join("; ")))
}

fn relation_roundtrip(r: &mut Recorder, name: &str, computed: &[PrimitiveRelation], expected: &[crate::catalog::ExpectedRelation], show_ray: impl Fn(usize) -> String) {
    let diff = compare_relations(computed, expected);
    let render = |rels: &[crate::catalog::ExpectedRelation]| -> String {
        rels.iter()
            .map(|e| {
                let lhs: Vec<String> = e.collection.iter().map(|&i| show_ray(i)).collect();
                let rhs: Vec<String> = e
                    .target
                    .iter()
                    .map(|&(i, c)| if c == 1 { show_ray(i) } else { format!("{c}{}", show_ray(i)) })
                    .collect();
                format!("{}={}", lhs.join("+"), if rhs.is_empty() { "0".into() } else { rhs.join("+") })
            })
            .collect::<Vec<_>>()
            .join(", ")
    };
    let detail = if diff.matches() {
        format!("{} relations", expected.len())
    } else {
        format!("printed-only [{}] computed-only [{}]", render(&diff.missing), render(&diff.unexpected))
    };
    r.check(name, diff.matches(), detail);
}

/// Checks shared by every bundle construction.
fn bundle_checks(r: &mut Recorder, b: &Construction, base_rels: &[PrimitiveRelation]) -> Result<TotalSpaceFan> {
    let t = b.total_space()?;
    r.check("total space validates", t.fan.validate().passed(), t.fan.validate().summary());
    let rels = primitive_relations(&t.fan)?;
    relation_roundtrip(r, "relations of the total space", &rels, &b.expected_relations()?, |i| t.ray_name(i));

    let (ok, detail) = splitting_matches_expected(b, base_rels)?;
    r.check("E^2+L on extremal curves matches the splitting type", ok, detail);

    let form = CoxForm::parse_on_bundle(&t, &b.equation, b.p)?;
    let class = is_homogeneous(&t.fan, &form)?;
    let x = class_of(&t.fan, &hypersurface_divisor(&t, b.p, &b.l)?)?;
    r.check("equation homogeneous", class.is_some(), "");
    r.check("equation class = 2xi+pi*L", class.as_ref() == Some(&x), "");
    let smooth = decide_smooth_monomial_partials(&t.fan, &form)?;
    let detail = match smooth.witness() {
        Some(w) => format!("singular along {:?}", w.vanishing_set),
        None => String::new(),
    };
    r.check("equation smooth", smooth.is_smooth(), detail);
    let wild = is_wild_fiberwise(&t, &form, b.p)?;
    r.check("equation fiberwise wild", wild.is_wild(), format!("{wild:?}"));
    Ok(t)
}

fn picard_two(out: &mut Vec<Check>) -> Result<()> {
    for d in PICARD_TWO_DIMS {
        for a in PICARD_TWO_A {
            let ai = a as i64;
            let alpha = 2 * a - 1;
            let variety = Variety::Kleinschmidt { d, alpha };
            let mut r = Recorder { section: Section::PicardTwo, subject: format!("d={d} a={a}"), out };
            let fan = variety.fan()?;
            let n = fan.num_rays();
            let dv = |i: usize| TorusDivisor::prime(n, i - 1);
            let rels = primitive_relations(&fan)?;
            relation_roundtrip(&mut r, "relations (a), (b)", &rels, &variety.expected_relations()?, |i| format!("x{}", i + 1));

            let all_equal = (2..=d).map(|i| linearly_equivalent(&fan, &dv(i), &dv(1))).collect::<Result<Vec<_>>>()?;
            r.check("D_1=...=D_d", all_equal.iter().all(|&x| x), "");
            r.equivalent(&fan, "D_{d+2}=(2a-1)D_1+D_{d+1}", &dv(d + 2), &(&dv(1).scale(&int(2 * ai - 1)) + &dv(d + 1)))?;

            let c1 = rels.iter().find(|rel| rel.collection.size() == d).map(|rel| rel.curve_class());
            let c2 = rels.iter().find(|rel| rel.collection.members() == [d, d + 1]).map(|rel| rel.curve_class());
            let (Some(c1), Some(c2)) = (c1, c2) else {
                r.check("curves C_1, C_2 found", false, "relation (a) or (b) missing");
                continue;
            };
            for (name, dvz, c, want) in [
                ("(D_1.C_1)=1", dv(1), &c1, 1),
                ("(D_{d+1}.C_1)=-(2a-1)", dv(d + 1), &c1, -(2 * ai - 1)),
                ("(D_1.C_2)=0", dv(1), &c2, 0),
                ("(D_{d+1}.C_2)=1", dv(d + 1), &c2, 1),
            ] {
                let got = intersect(&dvz, c)?;
                r.check(name, got == int(want), format!("computed {got}"));
            }

            let b = construction(BundleId::CaseI { d, a })?;
            let s1 = splitting_on_curve(&b.spec, 2, &b.l, &c1)?;
            let mut want1 = vec![int(-1)];
            want1.extend(std::iter::repeat(int(1)).take(d));
            r.check("E^2+L|C_1 = O(-1)+O(1)^d", s1 == want1, format!("computed {}", show(&s1)));
            let s2 = splitting_on_curve(&b.spec, 2, &b.l, &c2)?;
            let mut want2 = vec![int(0); d];
            want2.push(int(2));
            r.check("E^2+L|C_2 = O^d+O(2)", s2 == want2, format!("computed {}", show(&s2)));

            let primes = admissible_prime_set(&fan, DEFAULT_P_MAX)?;
            r.check("admissible primes = {2}", primes == [2], format!("computed {}", show_primes(&primes)));

            let t = bundle_checks(&mut r, &b, &rels)?;
            let (tf, td, fd) = (&t.fan, |i: usize| t.base_divisor(i), |j: usize| t.fiber_divisor(j));
            let all_equal = (2..=d).map(|i| linearly_equivalent(tf, &td(i), &td(1))).collect::<Result<Vec<_>>>()?;
            r.check("D~_1=...=D~_d", all_equal.iter().all(|&x| x), "");
            r.equivalent(tf, "D~_{d+2}=(2a-1)D~_d+D~_{d+1}", &td(d + 2), &(&td(d).scale(&int(2 * ai - 1)) + &td(d + 1)))?;
            let all_equal = (2..=d).map(|j| linearly_equivalent(tf, &fd(j), &fd(d + 1))).collect::<Result<Vec<_>>>()?;
            r.check("F_2=...=F_{d+1}", all_equal.iter().all(|&x| x), "");
            let rhs = &(&td(1).scale(&int(ai - 1)) + &td(d + 1)) + &fd(1);
            r.equivalent(tf, "F_{d+1}=(a-1)D~_1+D~_{d+1}+F_1", &fd(d + 1), &rhs)?;
            let x = hypersurface_divisor(&t, 2, &b.l)?;
            let two_f = &fd(d + 1).scale(&int(2)) + &td(1);
            r.equivalent(tf, "X~2xi+pi*L=2F_{d+1}+D~_1", &x, &two_f)?;
            let alt = &(&td(d + 1) + &td(d + 2)) + &fd(1).scale(&int(2));
            r.equivalent(tf, "2F_{d+1}+D~_1=D~_{d+1}+D~_{d+2}+2F_1", &two_f, &alt)?;
        }
    }
    Ok(())
}

fn picard_three(out: &mut Vec<Check>) -> Result<()> {
    for d in PICARD_THREE_DIMS {
        for a in PICARD_THREE_AB {
            for bb in PICARD_THREE_AB {
                let (ai, bi) = (a as i64, bb as i64);
                let variety = Variety::W { d, a, b: bb };
                let mut r = Recorder { section: Section::PicardThree, subject: format!("d={d} a={a} b={bb}"), out };
                let fan = variety.fan()?;
                let rels = primitive_relations(&fan)?;
                relation_roundtrip(&mut r, "relations of W^d(a,b)", &rels, &variety.expected_relations()?, |i| format!("x{}", i + 1));
                let primes = admissible_prime_set(&fan, DEFAULT_P_MAX)?;
                r.check("admissible primes = {2}", primes == [2], format!("computed {}", show_primes(&primes)));

                let b = construction(BundleId::CaseII { d, a, b: bb })?;
                let t = bundle_checks(&mut r, &b, &rels)?;
                let (tf, td, fd) = (&t.fan, |i: usize| t.base_divisor(i), |j: usize| t.fiber_divisor(j));
                let all_equal = (2..d).map(|i| linearly_equivalent(tf, &td(i), &td(1))).collect::<Result<Vec<_>>>()?;
                r.check("D~_1=...=D~_{d-1}", all_equal.iter().all(|&x| x), "");
                r.equivalent(tf, "D~_{d+1}=(2a-1)D~_1+D~_d", &td(d + 1), &(&td(1).scale(&int(2 * ai - 1)) + &td(d)))?;
                r.equivalent(tf, "D~_{d+3}=(2b-1)D~_1+D~_{d+2}", &td(d + 3), &(&td(1).scale(&int(2 * bi - 1)) + &td(d + 2)))?;
                let all_equal = (3..=d).map(|j| linearly_equivalent(tf, &fd(j), &fd(d + 1))).collect::<Result<Vec<_>>>()?;
                r.check("F_3=...=F_{d+1}", all_equal.iter().all(|&x| x), "");
                r.equivalent(tf, "F_{d+1}=(a-1)D~_1+D~_d+F_1", &fd(d + 1), &(&(&td(1).scale(&int(ai - 1)) + &td(d)) + &fd(1)))?;
                r.equivalent(tf, "F_{d+1}=(b-1)D~_1+D~_{d+2}+F_2", &fd(d + 1), &(&(&td(1).scale(&int(bi - 1)) + &td(d + 2)) + &fd(2)))?;
                let x = hypersurface_divisor(&t, 2, &b.l)?;
                let two_f = &fd(d + 1).scale(&int(2)) + &td(1);
                r.equivalent(tf, "X~2xi+pi*L=2F_{d+1}+D~_1", &x, &two_f)?;
                r.equivalent(tf, "X~D~_d+D~_{d+1}+2F_1", &x, &(&(&td(d) + &td(d + 1)) + &fd(1).scale(&int(2))))?;
                r.equivalent(tf, "X~D~_{d+2}+D~_{d+3}+2F_2", &x, &(&(&td(d + 2) + &td(d + 3)) + &fd(2).scale(&int(2))))?;
            }
        }
    }
    Ok(())
}

fn fano(out: &mut Vec<Check>) -> Result<()> {
    for id in BundleId::examples() {
        let b = construction(id)?;
        let mut r = Recorder { section: Section::Fano, subject: b.base.to_string(), out };
        let fan = b.base.fan()?;
        r.check("base validates", fan.validate().passed(), fan.validate().summary());
        let rels = primitive_relations(&fan)?;
        relation_roundtrip(&mut r, "primitive relations", &rels, &b.base.expected_relations()?, |i| format!("x{}", i + 1));
        let primes = admissible_prime_set(&fan, DEFAULT_P_MAX)?;
        r.check("admissible primes = {2}", primes == [2], format!("computed {}", show_primes(&primes)));
        bundle_checks(&mut r, &b, &rels)?;
    }

    // Lists of bases over which bundles exist, by dimension.
    let lists: [(&str, Vec<Variety>); 3] = [
        ("toric del Pezzo surfaces", crate::catalog::del_pezzo_surfaces()),
        (
            "3-folds with a bundle",
            vec![
                Variety::ProjectiveSpace { d: 3 },
                Variety::ProductOfP1 { d: 3 },
                Variety::Kleinschmidt { d: 3, alpha: 1 },
            ],
        ),
        (
            "4-folds with a bundle",
            vec![
                Variety::ProjectiveSpace { d: 4 },
                Variety::ProductOfP1 { d: 4 },
                Variety::Kleinschmidt { d: 4, alpha: 1 },
                Variety::Kleinschmidt { d: 4, alpha: 3 },
                Variety::W { d: 4, a: 1, b: 1 },
                Variety::M1,
                Variety::PseudoV4,
                Variety::V4,
            ],
        ),
    ];
    for (label, list) in lists {
        for v in list {
            let mut r = Recorder { section: Section::Fano, subject: format!("{label}: {v}"), out };
            let fan = v.fan()?;
            let cls = classify_fano(&fan, DEFAULT_P_MAX)?;
            r.check("Fano and 2 admissible", cls.admissible_primes.contains(&2), format!("{:?}", cls.case));
            if matches!(v, Variety::W { .. } | Variety::M1 | Variety::PseudoV4 | Variety::V4) {
                r.check(
                    "only P^1-bundle and small contractions",
                    cls.case == FanoCase::SmallContractions,
                    format!("{:?}", cls.case),
                );
            }
        }
    }
    Ok(())
}
