//! Acceptance suite. Prints one PASS/FAIL line per criterion, then exits
//! nonzero unless the failing set is exactly `KNOWN_RED`.
//!
//! The red criteria are not bugs in the implementation: the printed data
//! they compare against disagrees with exact computation. Each FAIL line
//! names the offending items. If a red criterion turns green, or a green one
//! turns red, the run fails so the list is kept honest.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use toric_whb::bundle::{hypersurface_class, hypersurface_divisor, projectivize, splitting_on_curve};
use toric_whb::catalog::{compare_relations, del_pezzo_surfaces, construction, BundleId, Construction, Variety};
use toric_whb::cox::{
    decide_smooth_monomial_partials, is_homogeneous, is_wild_fiberwise, singular_point_search, verify_vanishing_witness,
    CoxForm,
};
use toric_whb::divisor::{class_of, intersect, linearly_equivalent, ClassGroup};
use toric_whb::lattice::int;
use toric_whb::primitive::primitive_relations;
use toric_whb::whb::{
    admissible_prime_set, admissible_primes, analyze_pic3_case_ii, check_splitting_case, expected_bundle_splitting,
    pic3_tuples, primes_up_to, Case, Pic3CaseIIData, SplittingType,
};
use toric_whb::{BundleSpec, Fan, TorusDivisor};

const KNOWN_RED: [u32; 4] = [2, 3, 5, 6];
const P_MAX: u64 = 13;
const FF_BUDGET: u128 = 1 << 20;

struct Tally {
    checks: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checks: 0, failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn case_one_bundles() -> Vec<BundleId> {
    let mut out = Vec::new();
    for d in 2..=5 {
        for a in 1..=3 {
            out.push(BundleId::CaseI { d, a });
        }
    }
    out
}

fn case_two_bundles() -> Vec<BundleId> {
    let mut out = Vec::new();
    for d in 3..=5 {
        for a in 1..=2 {
            for b in 1..=2 {
                out.push(BundleId::CaseII { d, a, b });
            }
        }
    }
    out
}

fn all_constructions() -> Vec<BundleId> {
    let mut out = case_one_bundles();
    out.extend(case_two_bundles());
    out.extend(BundleId::examples());
    out
}

fn relations_match(t: &mut Tally, label: &str, fan: &Fan, expected: &[toric_whb::catalog::ExpectedRelation]) {
    let rels = primitive_relations(fan).expect("relations");
    let diff = compare_relations(&rels, expected);
    t.check(diff.matches(), || {
        format!("{label}: {} printed-only, {} computed-only", diff.missing.len(), diff.unexpected.len())
    });
}

fn criterion_1() -> Tally {
    let mut t = Tally::new();
    let mut bases = vec![Variety::S7, Variety::S6, Variety::M1, Variety::PseudoV4, Variety::V4];
    for d in 3..=5 {
        for a in 1..=2 {
            for b in 1..=2 {
                bases.push(Variety::W { d, a, b });
            }
        }
    }
    for d in 2..=5 {
        for alpha in 1..=5 {
            bases.push(Variety::Kleinschmidt { d, alpha });
        }
    }
    let counts = [(Variety::S7, 5), (Variety::S6, 9), (Variety::M1, 7), (Variety::PseudoV4, 14), (Variety::V4, 25)];
    for v in bases {
        let fan = v.fan().unwrap();
        let expected = v.expected_relations().unwrap();
        relations_match(&mut t, &v.to_string(), &fan, &expected);
        let want = counts.iter().find(|(c, _)| *c == v).map(|&(_, n)| n).unwrap_or(match v {
            Variety::W { .. } => 3,
            _ => 2,
        });
        t.check(expected.len() == want, || format!("{v}: {} printed relations, expected {want}", expected.len()));
    }
    t
}

fn criterion_2() -> Tally {
    let mut t = Tally::new();
    for id in all_constructions() {
        let b = construction(id).unwrap();
        let total = b.total_space().unwrap();
        relations_match(&mut t, &id.to_string(), &total.fan, &b.expected_relations().unwrap());
    }
    t
}

fn equivalent(t: &mut Tally, fan: &Fan, label: String, a: &TorusDivisor, b: &TorusDivisor) {
    let ok = linearly_equivalent(fan, a, b).unwrap();
    t.check(ok, || label);
}

fn criterion_3() -> Tally {
    let mut t = Tally::new();
    for id in all_constructions() {
        let b = construction(id).unwrap();
        let total = b.total_space().unwrap();
        let tf = &total.fan;
        let td = |i: usize| total.base_divisor(i);
        let fd = |j: usize| total.fiber_divisor(j);
        let x = hypersurface_divisor(&total, b.p, &b.l).unwrap();
        match id {
            BundleId::CaseI { d, a } => {
                let a = a as i64;
                let base = b.spec.base();
                let n = base.num_rays();
                let dv = |i: usize| TorusDivisor::prime(n, i - 1);
                for i in 2..=d {
                    equivalent(&mut t, base, format!("{id}: D_{i}=D_1"), &dv(i), &dv(1));
                    equivalent(&mut t, tf, format!("{id}: D~_{i}=D~_1"), &td(i), &td(1));
                    equivalent(&mut t, tf, format!("{id}: F_{i}=F_{}", d + 1), &fd(i), &fd(d + 1));
                }
                let rhs = &dv(1).scale(&int(2 * a - 1)) + &dv(d + 1);
                equivalent(&mut t, base, format!("{id}: D_(d+2)=(2a-1)D_1+D_(d+1)"), &dv(d + 2), &rhs);
                let rhs = &td(d).scale(&int(2 * a - 1)) + &td(d + 1);
                equivalent(&mut t, tf, format!("{id}: D~_(d+2)=(2a-1)D~_d+D~_(d+1)"), &td(d + 2), &rhs);
                let rhs = &(&td(1).scale(&int(a - 1)) + &td(d + 1)) + &fd(1);
                equivalent(&mut t, tf, format!("{id}: F_(d+1)=(a-1)D~_1+D~_(d+1)+F_1"), &fd(d + 1), &rhs);
                let two_f = &fd(d + 1).scale(&int(2)) + &td(1);
                equivalent(&mut t, tf, format!("{id}: X=2F_(d+1)+D~_1"), &x, &two_f);
                let alt = &(&td(d + 1) + &td(d + 2)) + &fd(1).scale(&int(2));
                equivalent(&mut t, tf, format!("{id}: X=D~_(d+1)+D~_(d+2)+2F_1"), &x, &alt);
            }
            BundleId::CaseII { d, a, b: bb } => {
                let (a, bb) = (a as i64, bb as i64);
                for i in 2..d {
                    equivalent(&mut t, tf, format!("{id}: D~_{i}=D~_1"), &td(i), &td(1));
                }
                for j in 3..=d {
                    equivalent(&mut t, tf, format!("{id}: F_{j}=F_(d+1)"), &fd(j), &fd(d + 1));
                }
                let rhs = &td(1).scale(&int(2 * a - 1)) + &td(d);
                equivalent(&mut t, tf, format!("{id}: D~_(d+1)=(2a-1)D~_1+D~_d"), &td(d + 1), &rhs);
                let rhs = &td(1).scale(&int(2 * bb - 1)) + &td(d + 2);
                equivalent(&mut t, tf, format!("{id}: D~_(d+3)=(2b-1)D~_1+D~_(d+2)"), &td(d + 3), &rhs);
                let rhs = &(&td(1).scale(&int(a - 1)) + &td(d)) + &fd(1);
                equivalent(&mut t, tf, format!("{id}: F_(d+1)=(a-1)D~_1+D~_d+F_1"), &fd(d + 1), &rhs);
                let rhs = &(&td(1).scale(&int(bb - 1)) + &td(d + 2)) + &fd(2);
                equivalent(&mut t, tf, format!("{id}: F_(d+1)=(b-1)D~_1+D~_(d+2)+F_2"), &fd(d + 1), &rhs);
                let two_f = &fd(d + 1).scale(&int(2)) + &td(1);
                equivalent(&mut t, tf, format!("{id}: X=2F_(d+1)+D~_1"), &x, &two_f);
                let alt = &(&td(d) + &td(d + 1)) + &fd(1).scale(&int(2));
                equivalent(&mut t, tf, format!("{id}: X=D~_d+D~_(d+1)+2F_1"), &x, &alt);
                let alt = &(&td(d + 2) + &td(d + 3)) + &fd(2).scale(&int(2));
                equivalent(&mut t, tf, format!("{id}: X=D~_(d+2)+D~_(d+3)+2F_2"), &x, &alt);
            }
            _ => {}
        }
        // Every construction: the equation lies in the class 2ξ + π*L.
        let form = CoxForm::parse_on_bundle(&total, &b.equation, b.p).unwrap();
        let want = hypersurface_class(&total, b.p, &b.l).unwrap();
        let first = &form.terms()[0].exponents;
        let got = class_of(tf, &TorusDivisor::new(first.iter().map(|&e| BigInt::from(e)).collect())).unwrap();
        t.check(got == want, || format!("{id}: equation not in 2xi+pi*L"));
    }
    t
}

fn criterion_4() -> Tally {
    let mut t = Tally::new();
    for d in 2..=5 {
        for a in 1..=3i64 {
            let fan = Variety::Kleinschmidt { d, alpha: (2 * a - 1) as u64 }.fan().unwrap();
            let n = fan.num_rays();
            let rels = primitive_relations(&fan).unwrap();
            let c1 = rels.iter().find(|r| r.collection.members() == (0..d).collect::<Vec<_>>()).map(|r| r.curve_class());
            let c2 = rels.iter().find(|r| r.collection.members() == [d, d + 1]).map(|r| r.curve_class());
            let (Some(c1), Some(c2)) = (c1, c2) else {
                t.check(false, || format!("d={d} a={a}: curve relations missing"));
                continue;
            };
            for (i, c, want, name) in [
                (0, &c1, 1, "D_1.C_1"),
                (d, &c1, -(2 * a - 1), "D_(d+1).C_1"),
                (0, &c2, 0, "D_1.C_2"),
                (d, &c2, 1, "D_(d+1).C_2"),
            ] {
                let got = intersect(&TorusDivisor::prime(n, i), c).unwrap();
                t.check(got == int(want), || format!("d={d} a={a}: {name} = {got}, expected {want}"));
            }
        }
    }
    t
}

/// Degrees of `E^p ⊗ L` on a curve given by its intersection vector.
fn twisted_degrees(b: &Construction, curve: &[BigInt]) -> Vec<BigInt> {
    let lc = dot(&b.l.coeffs, curve);
    let mut out = vec![lc.clone()];
    for e in b.spec.summands() {
        out.push(BigInt::from(b.p) * dot(&e.coeffs, curve) + &lc);
    }
    out.sort();
    out
}

fn criterion_5() -> Tally {
    let mut t = Tally::new();
    for id in case_one_bundles() {
        let BundleId::CaseI { d, .. } = id else { unreachable!() };
        let b = construction(id).unwrap();
        let rels = primitive_relations(b.spec.base()).unwrap();
        let c1 = rels.iter().find(|r| r.collection.size() == d).unwrap().curve_class();
        let c2 = rels.iter().find(|r| r.collection.members() == [d, d + 1]).unwrap().curve_class();
        let s1 = splitting_on_curve(&b.spec, 2, &b.l, &c1).unwrap();
        let mut want1 = vec![int(-1)];
        want1.extend(std::iter::repeat(int(1)).take(d));
        t.check(s1 == want1, || format!("{id}: E^2+L|C_1 = {s1:?}"));
        let s2 = splitting_on_curve(&b.spec, 2, &b.l, &c2).unwrap();
        let mut want2 = vec![int(0); d];
        want2.push(int(2));
        t.check(s2 == want2, || format!("{id}: E^2+L|C_2 = {s2:?}"));
    }

    // Every extremal curve: the library's answer, and an independent one from
    // the wall relations, must both land on a forced splitting.
    for id in all_constructions() {
        let b = construction(id).unwrap();
        let base = b.spec.base();
        let walls = wall_curves(base);
        for rel in primitive_relations(base).unwrap().iter().filter(|r| r.extremal) {
            let Some((gens, curve)) = walls.iter().find(|(_, v)| *v == rel.relation_vector) else {
                t.check(false, || format!("{id}: no wall realizes {rel}"));
                continue;
            };
            let mut tangent: Vec<BigInt> = gens.iter().map(|&g| curve[g].clone()).collect();
            tangent.push(BigInt::from(2));
            tangent.sort();
            let p = BigInt::from(b.p);
            let mut rest = tangent.clone();
            rest.remove(rest.iter().position(|x| *x == BigInt::from(2)).unwrap());
            let case_one = rest.iter().all(|i| (i - BigInt::one()).is_multiple_of(&p));
            let case_two = b.p == 2 && tangent.iter().all(|i| i.is_even());
            let oracle = twisted_degrees(&b, curve);
            let mut forced = Vec::new();
            if case_one {
                forced.push(forced_splitting(&tangent, true));
            }
            if case_two {
                forced.push(forced_splitting(&tangent, false));
            }

            let st = SplittingType::of_relation(base.dim(), rel).unwrap();
            let cases = check_splitting_case(&st, b.p);
            let computed = splitting_on_curve(&b.spec, b.p, &b.l, &rel.curve_class()).unwrap();
            let mut expected = Vec::new();
            if cases.case_i {
                expected.push(expected_bundle_splitting(&st, Case::I).unwrap());
            }
            if cases.case_ii {
                expected.push(expected_bundle_splitting(&st, Case::II).unwrap());
            }
            t.check(st.degrees() == tangent.as_slice() && computed == oracle && expected == forced, || {
                format!("{id}: {rel}: library and wall oracle disagree")
            });
            t.check(expected.contains(&computed), || format!("{id}: {rel}: E^p+L|C = {computed:?}"));
        }
    }
    t
}

fn criterion_6() -> Tally {
    let mut t = Tally::new();
    let mut want_two: Vec<Variety> = del_pezzo_surfaces();
    want_two.extend((1..=4).map(|d| Variety::ProductOfP1 { d }));
    for d in 2..=5 {
        for a in 1..=3 {
            want_two.push(Variety::Kleinschmidt { d, alpha: 2 * a - 1 });
        }
    }
    for d in 3..=5 {
        for a in 1..=2 {
            for b in 1..=2 {
                want_two.push(Variety::W { d, a, b });
            }
        }
    }
    want_two.extend([Variety::M1, Variety::PseudoV4, Variety::V4]);
    let mut want_none: Vec<Variety> = Vec::new();
    for d in 2..=5 {
        for alpha in [2, 4] {
            want_none.push(Variety::Kleinschmidt { d, alpha });
        }
    }
    want_none.extend((0..=2).map(|k| Variety::P2BundleOverP1 { k }));
    for (list, want) in [(want_two, vec![2u64]), (want_none, vec![])] {
        for v in list {
            let got = admissible_prime_set(&v.fan().unwrap(), P_MAX).unwrap();
            t.check(got == want, || format!("{v}: admissible {got:?}, expected {want:?}"));
        }
    }

    // Exhaustive sweep of the Picard-3 family, with unit coefficients and
    // with every b set to 2.
    let start = Instant::now();
    let mut feasible: Vec<String> = Vec::new();
    let mut disagreements = 0;
    for tuple in pic3_tuples(10) {
        for p in primes_up_to(P_MAX) {
            for b_coeff in [1u64, 2] {
                let c = vec![1; tuple[2] as usize - 1];
                let b = vec![b_coeff; tuple[3] as usize];
                let data = Pic3CaseIIData::new(tuple, c.clone(), b.clone()).unwrap();
                let cert = analyze_pic3_case_ii(&data, p).unwrap();
                // Recomputed here from m, n and the right-hand coefficients.
                let [p0, p1, p2, p3, p4] = tuple;
                let d = p0 + p1 + p2 + p3 + p4 - 3;
                let mut first: Vec<u64> = c;
                first.extend(b.iter().map(|x| x + 1));
                let rels = [(p0 + p1, first), (p1 + p2, vec![1; p4 as usize]), (p3 + p4, vec![1; p1 as usize])];
                let ok = rels.iter().all(|(m, cs)| m + cs.len() as u64 == d + 1 && cs.iter().all(|x| (x + 1) % p == 0));
                if ok == cert.infeasible {
                    disagreements += 1;
                }
                if !cert.infeasible {
                    feasible.push(format!("{tuple:?} p={p} b={b_coeff}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    t.check(disagreements == 0, || format!("{disagreements} certificates disagree with the recomputation"));
    let n = feasible.len();
    t.check(feasible.is_empty(), || {
        format!("Picard-3 sweep: {n} feasible cases, e.g. {}", feasible.first().cloned().unwrap_or_default())
    });
    t.check(elapsed < Duration::from_secs(10), || format!("Picard-3 sweep took {elapsed:?}"));
    t.notes.push(format!("sweep {elapsed:.2?}"));
    t
}

fn equation_checks(t: &mut Tally, id: BundleId) {
    let b = construction(id).unwrap();
    let total = b.total_space().unwrap();
    let fan = &total.fan;
    let form = CoxForm::parse_on_bundle(&total, &b.equation, b.p).unwrap();
    t.check(is_homogeneous(fan, &form).unwrap().is_some(), || format!("{id}: not homogeneous"));
    t.check(decide_smooth_monomial_partials(fan, &form).unwrap().is_smooth(), || format!("{id}: not certified smooth"));
    t.check(is_wild_fiberwise(&total, &form, b.p).unwrap().is_wild(), || format!("{id}: not certified wild"));

    for k in 0..form.terms().len() {
        let m = form.without_term(k);
        let homogeneous = is_homogeneous(fan, &m).unwrap().is_some();
        let verdict = decide_smooth_monomial_partials(fan, &m).unwrap();
        let wild = homogeneous && is_wild_fiberwise(&total, &m, b.p).unwrap().is_wild();
        t.check(!homogeneous || verdict.is_singular() || !wild, || format!("{id}: deleting term {} goes unnoticed", k + 1));
        if let Some(w) = verdict.witness() {
            t.check(verify_vanishing_witness(fan, &m, w), || format!("{id}: witness for deletion {} fails", k + 1));
            let found = [2u64, 4].iter().any(|&q| {
                matches!(singular_point_search(fan, &m, q, FF_BUDGET), Ok(Some(_)))
            });
            t.check(found, || format!("{id}: no F_q point for deletion {} (q <= 4)", k + 1));
        }
    }
}

fn criterion_7() -> Tally {
    let mut t = Tally::new();
    let mut ids = Vec::new();
    for d in 2..=4 {
        for a in 1..=2 {
            ids.push(BundleId::CaseI { d, a });
        }
    }
    for d in 3..=4 {
        for a in 1..=2 {
            for b in 1..=2 {
                ids.push(BundleId::CaseII { d, a, b });
            }
        }
    }
    ids.extend([BundleId::S7, BundleId::S6, BundleId::M1, BundleId::PseudoV4]);
    for id in ids {
        equation_checks(&mut t, id);
    }
    let start = Instant::now();
    equation_checks(&mut t, BundleId::V4);
    let elapsed = start.elapsed();
    t.check(elapsed < Duration::from_secs(60), || format!("V4 bundle checks took {elapsed:?}"));
    t.notes.push(format!("V4 {elapsed:.2?}"));
    t
}

fn criterion_8() -> Tally {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for v in catalog_varieties() {
        let fan = v.fan().unwrap();
        let n = fan.num_rays();
        let rels = primitive_relations(&fan).unwrap();

        for rel in &rels {
            let x = &rel.relation_vector;
            let in_kernel = (0..fan.dim()).all(|k| (0..n).map(|i| &x[i] * &fan.ray(i)[k]).sum::<BigInt>().is_zero());
            let anti: BigInt = x.iter().sum();
            let m_minus_b = BigInt::from(rel.m()) - rel.coeffs.iter().sum::<BigInt>();
            t.check(in_kernel && rel.degree == anti && rel.degree == m_minus_b, || {
                format!("{v}: degree pairing fails on {rel}")
            });
        }

        let cg = ClassGroup::of(&fan);
        let rays: Vec<Vec<BigInt>> = fan.rays().to_vec();
        let rho = n - rank_int(&rays);
        t.check(cg.rank() == rho && cg.torsion().is_empty() && fan.picard_number() == rho, || {
            format!("{v}: class group rank {} torsion {:?}, expected {rho}", cg.rank(), cg.torsion())
        });

        let gens: Vec<Vec<BigInt>> = rels.iter().map(|r| r.relation_vector.clone()).collect();
        let brute = brute_force_extremal(&gens);
        for (rel, want) in rels.iter().zip(brute) {
            t.check(rel.extremal == want, || format!("{v}: {rel} extremal={} brute force={want}", rel.extremal));
        }

        let reference = admissible_primes(&fan, P_MAX).unwrap();
        for _ in 0..20 {
            let m = random_unimodular(fan.dim(), &mut rng);
            let moved = fan.transform(&m).unwrap();
            t.check(admissible_primes(&moved, P_MAX).unwrap() == reference, || {
                format!("{v}: verdicts change under a basis change")
            });
        }

        if fan.dim() <= 3 {
            for r in 1..=2 {
                let summands: Vec<TorusDivisor> = (0..r)
                    .map(|_| TorusDivisor::new((0..n).map(|_| BigInt::from(rand::Rng::gen_range(&mut rng, -2..=2))).collect()))
                    .collect();
                let spec = BundleSpec::new(fan.clone(), summands).unwrap();
                let total = projectivize(&spec).unwrap();
                let f = &total.fan;
                t.check(
                    f.validate().passed()
                        && f.num_rays() == n + r + 1
                        && f.max_cones().len() == fan.max_cones().len() * (r + 1)
                        && f.dim() == fan.dim() + r
                        && f.picard_number() == fan.picard_number() + 1,
                    || format!("{v}: projectivization with r={r} has the wrong shape"),
                );
            }
        }
    }
    t
}

fn main() {
    let criteria: [(u32, &str, fn() -> Tally); 8] = [
        (1, "relation round-trips", criterion_1),
        (2, "bundle-fan round-trips", criterion_2),
        (3, "Pic identities", criterion_3),
        (4, "intersection table", criterion_4),
        (5, "splitting multisets", criterion_5),
        (6, "criterion classifications", criterion_6),
        (7, "smoothness and wildness", criterion_7),
        (8, "property suites", criterion_8),
    ];
    let mut red = BTreeSet::new();
    for (id, name, run) in criteria {
        let start = Instant::now();
        let t = run();
        let elapsed = start.elapsed();
        let mut line = format!("{}  {id}  {name}: {} checks", if t.failures.is_empty() { "PASS" } else { "FAIL" }, t.checks);
        if !t.failures.is_empty() {
            red.insert(id);
            line += &format!(", {} failed: {}", t.failures.len(), t.failures.join("; "));
        }
        let mut notes = t.notes;
        notes.push(format!("{elapsed:.2?}"));
        line += &format!(" ({})", notes.join(", "));
        println!("{line}");
    }
    let known: BTreeSet<u32> = KNOWN_RED.into_iter().collect();
    if red != known {
        eprintln!("failing criteria {red:?} differ from the documented set {known:?}");
        std::process::exit(1);
    }
    println!("failing set matches the documented set {known:?}");
}
