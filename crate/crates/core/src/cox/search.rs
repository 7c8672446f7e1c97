//! Exhaustive search for singular `F_q`-points, one affine chart at a time.
//!
//! On the chart of a maximal cone the cone's variables are free and every
//! other Cox variable is 1. A common zero of the form and all its partials
//! there is a singular point. Finding nothing proves nothing.

use serde::Serialize;

use super::{partials, CoxForm, GaloisField};
use crate::error::{Error, Result};
use crate::fan::Fan;

pub const DEFAULT_POINT_BUDGET: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldPoint {
    pub field_order: usize,
    /// Index of the maximal cone whose chart contains the point.
    pub chart: usize,
    /// One value per Cox variable, as field element indices.
    pub values: Vec<u16>,
}

/// A form restricted to a chart: per term, its coefficient and the
/// (chart slot, exponent) pairs of its chart variables.
struct ChartPoly {
    terms: Vec<(u16, Vec<(usize, u32)>)>,
}

impl ChartPoly {
    fn new(form: &CoxForm, chart: &[usize], field: &GaloisField) -> Self {
        let terms = form
            .terms()
            .iter()
            .map(|t| {
                let factors = chart
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| t.exponents[v] > 0)
                    .map(|(slot, &v)| (slot, t.exponents[v]))
                    .collect();
                (field.from_int(t.coeff), factors)
            })
            .collect();
        ChartPoly { terms }
    }

    fn eval(&self, field: &GaloisField, point: &[u16]) -> u16 {
        let mut acc = 0u16;
        for (c, factors) in &self.terms {
            let mut m = *c;
            for &(slot, e) in factors {
                m = field.mul(m, field.pow(point[slot], e));
                if m == 0 {
                    break;
                }
            }
            acc = field.add(acc, m);
        }
        acc
    }
}

/// Looks for a point over `GF(q)` where the form and all partials vanish.
/// `q` must be a power of the form's characteristic, and `q^dim` may not
/// exceed `budget`.
pub fn singular_point_search(fan: &Fan, form: &CoxForm, q: u64, budget: u128) -> Result<Option<FieldPoint>> {
    singular_point_search_threads(fan, form, q, budget, 1)
}

/// As [`singular_point_search`], with the charts split over `threads`
/// workers. The witness returned is the one on the lowest-numbered chart, so
/// the answer does not depend on the thread count.
pub fn singular_point_search_threads(
    fan: &Fan,
    form: &CoxForm,
    q: u64,
    budget: u128,
    threads: usize,
) -> Result<Option<FieldPoint>> {
    if form.num_vars() != fan.num_rays() {
        return Err(Error::input(format!(
            "form has {} variables, fan has {} rays",
            form.num_vars(),
            fan.num_rays()
        )));
    }
    let field = GaloisField::new(q)?;
    if field.characteristic() != form.char() {
        return Err(Error::input(format!("{q} is not a power of {}", form.char())));
    }
    let needed = (q as u128).checked_pow(fan.dim() as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    let ps: Vec<CoxForm> = partials(form).into_iter().filter(|p| !p.is_zero()).collect();
    let cones = fan.max_cones();
    let threads = threads.clamp(1, cones.len().max(1));
    if threads == 1 {
        return Ok((0..cones.len()).find_map(|ci| search_chart(fan, form, &ps, &field, ci)));
    }
    let found: Vec<Option<FieldPoint>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                let (field, ps) = (&field, &ps);
                s.spawn(move || {
                    (w..cones.len()).step_by(threads).find_map(|ci| search_chart(fan, form, ps, field, ci))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("search worker panicked")).collect()
    });
    Ok(found.into_iter().flatten().min_by_key(|p| p.chart))
}

fn search_chart(fan: &Fan, form: &CoxForm, ps: &[CoxForm], field: &GaloisField, ci: usize) -> Option<FieldPoint> {
    let cone = &fan.max_cones()[ci];
    let dim = cone.len();
    let qn = field.order() as u16;
    let f = ChartPoly::new(form, cone, field);
    let dfs: Vec<ChartPoly> = ps.iter().map(|p| ChartPoly::new(p, cone, field)).collect();
    let mut point = vec![0u16; dim];
    loop {
        if f.eval(field, &point) == 0 && dfs.iter().all(|d| d.eval(field, &point) == 0) {
            let mut values = vec![1u16; fan.num_rays()];
            for (slot, &v) in cone.iter().enumerate() {
                values[v] = point[slot];
            }
            return Some(FieldPoint { field_order: field.order(), chart: ci, values });
        }
        // Next point in base-q counting order.
        let mut i = 0;
        while i < dim {
            point[i] += 1;
            if point[i] < qn {
                break;
            }
            point[i] = 0;
            i += 1;
        }
        if i == dim {
            return None;
        }
    }
}
