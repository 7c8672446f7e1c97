//! Forms in Cox coordinates over a prime field.
//!
//! A [`CoxForm`] is a list of terms, each an exponent vector over the rays of
//! some fan plus a nonzero coefficient in `F_p`. The fan itself is passed to
//! the functions that need it.

mod gf;
mod parse;
mod search;
mod smooth;

pub use gf::GaloisField;
pub use search::{singular_point_search, singular_point_search_threads, FieldPoint, DEFAULT_POINT_BUDGET};
pub use smooth::{
    decide_smooth_monomial_partials, is_wild_fiberwise, verify_vanishing_witness, Method,
    SingularWitness, SmoothnessOutcome, SmoothnessVerdict, WildnessVerdict,
};

use serde::{Deserialize, Serialize};

use crate::bundle::TotalSpaceFan;
use crate::divisor::{class_of, DivisorClass, TorusDivisor};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::whb::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub exponents: Vec<u32>,
    /// In `1..p`.
    pub coeff: u64,
}

impl Term {
    pub fn degree_in(&self, var: usize) -> u32 {
        self.exponents[var]
    }

    pub fn contains_any(&self, vars: &[usize]) -> bool {
        vars.iter().any(|&v| self.exponents[v] > 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxForm {
    char: u64,
    num_vars: usize,
    terms: Vec<Term>,
}

impl CoxForm {
    /// Reduces coefficients mod `p`, merges repeated exponent vectors (keeping
    /// the position of the first occurrence) and drops zero terms.
    pub fn new(char: u64, num_vars: usize, raw: Vec<(Vec<u32>, i64)>) -> Result<Self> {
        if !is_prime(char) {
            return Err(Error::input(format!("characteristic {char} is not prime")));
        }
        let mut terms: Vec<Term> = Vec::new();
        for (exponents, coeff) in raw {
            if exponents.len() != num_vars {
                return Err(Error::input(format!(
                    "term has {} exponents, expected {num_vars}",
                    exponents.len()
                )));
            }
            let c = coeff.rem_euclid(char as i64) as u64;
            match terms.iter_mut().find(|t| t.exponents == exponents) {
                Some(t) => t.coeff = (t.coeff + c) % char,
                None => terms.push(Term { exponents, coeff: c }),
            }
        }
        terms.retain(|t| t.coeff != 0);
        Ok(CoxForm { char, num_vars, terms })
    }

    pub fn zero(char: u64, num_vars: usize) -> Self {
        CoxForm { char, num_vars, terms: Vec::new() }
    }

    pub fn char(&self) -> u64 {
        self.char
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The form with term `k` removed.
    pub fn without_term(&self, k: usize) -> CoxForm {
        let mut terms = self.terms.clone();
        terms.remove(k);
        CoxForm { char: self.char, num_vars: self.num_vars, terms }
    }

    /// The form with the exponents of variables `a` and `b` exchanged in term `k`.
    pub fn with_swapped_variables(&self, k: usize, a: usize, b: usize) -> Result<CoxForm> {
        let raw = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let mut e = t.exponents.clone();
                if i == k {
                    e.swap(a, b);
                }
                (e, t.coeff as i64)
            })
            .collect();
        CoxForm::new(self.char, self.num_vars, raw)
    }

    /// Parses text such as `X3*X4*Y1^2+X1*X5*Y2^2+X2*Y3^2` on a bundle total
    /// space, where `Xi` is the lift of base ray `i` and `Yj` the fiber ray
    /// `j` (both one-based).
    pub fn parse_on_bundle(t: &TotalSpaceFan, text: &str, char: u64) -> Result<Self> {
        parse::parse(text, char, t.fan.num_rays(), |kind, i| {
            let list = if kind == 'X' { &t.base_ray_map } else { &t.fiber_rays };
            i.checked_sub(1).and_then(|k| list.get(k)).copied()
        })
    }

    /// Parses text over a plain fan, where `Xi` is ray `i` (one-based).
    pub fn parse_on_fan(fan: &Fan, text: &str, char: u64) -> Result<Self> {
        let n = fan.num_rays();
        parse::parse(text, char, n, |kind, i| {
            (kind == 'X' && (1..=n).contains(&i)).then(|| i - 1)
        })
    }

    /// Formal partial derivative in variable `v`, coefficients mod `p`.
    pub fn partial(&self, v: usize) -> CoxForm {
        let p = self.char;
        let raw = self
            .terms
            .iter()
            .filter(|t| t.exponents[v] > 0)
            .map(|t| {
                let mut e = t.exponents.clone();
                let k = e[v] as u64;
                e[v] -= 1;
                (e, ((t.coeff * (k % p)) % p) as i64)
            })
            .collect();
        CoxForm::new(p, self.num_vars, raw).expect("partial of a valid form is valid")
    }

    pub fn to_file(&self) -> EquationFile {
        EquationFile {
            char: self.char,
            terms: self
                .terms
                .iter()
                .map(|t| TermFile { exponents: t.exponents.clone(), coeff: t.coeff as i64 })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    /// Reads an equation file; `num_vars` is the ray count of the fan it lives on.
    pub fn from_json(text: &str, num_vars: usize) -> Result<Self> {
        let file: EquationFile = serde_json::from_str(text)?;
        file.into_form(num_vars)
    }

    /// Text form using the given variable names, e.g. `X3*X4*Y1^2`.
    pub fn display_with(&self, name: impl Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|t| {
                let mut factors: Vec<String> = Vec::new();
                if t.coeff != 1 {
                    factors.push(t.coeff.to_string());
                }
                for (v, &e) in t.exponents.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => factors.push(name(v)),
                        _ => factors.push(format!("{}^{e}", name(v))),
                    }
                }
                if factors.is_empty() {
                    "1".to_string()
                } else {
                    factors.join("*")
                }
            })
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// On-disk equation representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationFile {
    pub char: u64,
    pub terms: Vec<TermFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermFile {
    pub exponents: Vec<u32>,
    pub coeff: i64,
}

impl EquationFile {
    pub fn into_form(self, num_vars: usize) -> Result<CoxForm> {
        CoxForm::new(self.char, num_vars, self.terms.into_iter().map(|t| (t.exponents, t.coeff)).collect())
    }
}

/// Class of the divisor whose coefficients are the exponents.
pub fn monomial_class(fan: &Fan, exponents: &[u32]) -> Result<DivisorClass> {
    let d = TorusDivisor::new(exponents.iter().map(|&e| e.into()).collect());
    class_of(fan, &d)
}

/// The common class of all terms, if there is one.
pub fn is_homogeneous(fan: &Fan, form: &CoxForm) -> Result<Option<DivisorClass>> {
    if form.num_vars != fan.num_rays() {
        return Err(Error::input(format!(
            "form has {} variables, fan has {} rays",
            form.num_vars,
            fan.num_rays()
        )));
    }
    let Some(first) = form.terms.first() else {
        return Err(Error::input("empty form"));
    };
    let class = monomial_class(fan, &first.exponents)?;
    for t in &form.terms[1..] {
        if monomial_class(fan, &t.exponents)? != class {
            return Ok(None);
        }
    }
    Ok(Some(class))
}

/// One partial derivative per variable.
pub fn partials(form: &CoxForm) -> Vec<CoxForm> {
    (0..form.num_vars).map(|v| form.partial(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Fan {
        Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]]).unwrap()
    }

    #[test]
    fn normalization() {
        let f = CoxForm::new(2, 2, vec![(vec![1, 0], 1), (vec![0, 1], 3), (vec![1, 0], 1)]).unwrap();
        assert_eq!(f.terms().len(), 1);
        assert_eq!(f.terms()[0].exponents, vec![0, 1]);
        assert!(CoxForm::new(4, 1, vec![]).is_err());
        assert!(CoxForm::new(2, 2, vec![(vec![1], 1)]).is_err());
        let g = CoxForm::new(3, 1, vec![(vec![2], -1)]).unwrap();
        assert_eq!(g.terms()[0].coeff, 2);
    }

    #[test]
    fn char_two_partials() {
        // X1*X2*X3^2 in char 2: the X3 partial vanishes.
        let f = CoxForm::new(2, 3, vec![(vec![1, 1, 2], 1)]).unwrap();
        let ps = partials(&f);
        assert!(ps[2].is_zero());
        assert_eq!(ps[0].terms()[0].exponents, vec![0, 1, 2]);
        let g = CoxForm::new(2, 1, vec![(vec![2], 1)]).unwrap();
        assert!(g.partial(0).is_zero());
        let h = CoxForm::new(3, 1, vec![(vec![2], 1)]).unwrap();
        assert_eq!(h.partial(0).terms()[0].coeff, 2);
    }

    #[test]
    fn homogeneity_on_p2() {
        let fan = p2();
        let f = CoxForm::parse_on_fan(&fan, "X1^2+X2*X3", 2).unwrap();
        assert!(is_homogeneous(&fan, &f).unwrap().is_some());
        let g = CoxForm::parse_on_fan(&fan, "X1+X1*X2", 2).unwrap();
        assert_eq!(is_homogeneous(&fan, &g).unwrap(), None);
        let single = CoxForm::parse_on_fan(&fan, "X2^3", 2).unwrap();
        assert_eq!(is_homogeneous(&fan, &single).unwrap(), Some(monomial_class(&fan, &[0, 3, 0]).unwrap()));
        assert!(is_homogeneous(&fan, &CoxForm::zero(2, 3)).is_err());
        assert_eq!(monomial_class(&fan, &[0, 0, 0]).unwrap(), crate::divisor::class_group(&fan).zero());
    }

    #[test]
    fn json_roundtrip() {
        let f = CoxForm::new(2, 3, vec![(vec![1, 0, 2], 1), (vec![0, 1, 2], 1)]).unwrap();
        let text = f.to_json().unwrap();
        assert!(text.find("\"char\"").unwrap() < text.find("\"terms\"").unwrap());
        assert_eq!(CoxForm::from_json(&text, 3).unwrap(), f);
        assert!(CoxForm::from_json(&text, 2).is_err());
    }

    #[test]
    fn display() {
        let f = CoxForm::new(3, 2, vec![(vec![1, 2], 2), (vec![0, 0], 1)]).unwrap();
        assert_eq!(f.display_with(|v| format!("X{}", v + 1)), "2*X1*X2^2+1");
    }
}
