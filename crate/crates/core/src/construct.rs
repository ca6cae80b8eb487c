//! Reference constructions: centered intervals, the three-piece set whose
//! cross count grows like `M^2 / 12`, and its k-piece generalization with
//! cross count `sigma_k / k^{k-1} * M^{k-1}` to leading order.

use crate::counting::RepFunction;
use crate::error::{Error, Result};
use crate::model::{IntSet, LinearForm};

/// A pieced construction: the per-coordinate components, their union, the
/// scale parameter `M`, and the exact count of cross solutions (one
/// coordinate from each component) the construction guarantees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionResult {
    pub components: Vec<IntSet>,
    pub union_set: IntSet,
    pub parameter_m: i64,
    pub predicted_cross_count: u64,
}

/// The `n` consecutive integers centered about 0: odd `n` gives
/// `{-(n-1)/2, ..., (n-1)/2}`, even `n` gives `{-n/2 + 1, ..., n/2}`.
pub fn centered_interval(n: usize) -> IntSet {
    let n = n as i64;
    if n <= 0 {
        return IntSet::default();
    }
    if n % 2 == 1 {
        IntSet::interval(-(n - 1) / 2, (n - 1) / 2)
    } else {
        IntSet::interval(-n / 2 + 1, n / 2)
    }
}

/// Three-piece construction for `a_1 x_1 + a_2 x_2 + a_3 x_3 = 0`:
/// components `a_2 a_3 * I`, `a_1 a_3 * I`, `a_1 a_2 * I` for
/// `I = [-M/6, M/6]`. Every pair `(x_1', x_2')` of `I` with
/// `|x_1' + x_2'| <= M/6` yields a cross solution, so the guaranteed count
/// is the pair sum `sum_x (M/3 + 1 - |x|)`, which is `M^2/12 + O(M)`.
pub fn three_piece(form: &LinearForm, m: i64) -> Result<ConstructionResult> {
    if form.arity() != 3 {
        return Err(Error::BadParameter(format!(
            "three_piece needs a 3-variable form, got arity {}",
            form.arity()
        )));
    }
    if m <= 0 || m % 6 != 0 {
        return Err(Error::BadParameter(format!("M must be a positive multiple of 6, got {m}")));
    }
    let a = form.coefficients();
    let h = m / 6;
    let interval = IntSet::interval(-h, h);
    let mut components = Vec::with_capacity(3);
    for i in 0..3 {
        let mut factor: i64 = 1;
        for (j, &aj) in a.iter().enumerate() {
            if j != i {
                factor = factor.checked_mul(aj).ok_or(Error::Overflow("construction factor"))?;
            }
        }
        components.push(interval.dilate(factor)?);
    }
    let union_set = components.iter().fold(IntSet::default(), |acc, c| acc.union(c));
    let mut predicted: u64 = 0;
    for x in -h..=h {
        predicted += (m / 3 + 1 - x.abs()) as u64;
    }
    Ok(ConstructionResult {
        components,
        union_set,
        parameter_m: m,
        predicted_cross_count: predicted,
    })
}

/// k-piece construction: component `i` is `(prod_{j != i} a_j) * I` for
/// `I = [-M/2k, M/2k]`. Cross solutions correspond to (k-1)-tuples of `I`
/// whose sum lies back in `I`, counted here exactly through the
/// representation function of the first `k - 1` coordinates.
pub fn k_piece(form: &LinearForm, m: i64) -> Result<ConstructionResult> {
    let k = form.arity();
    let two_k = 2 * k as i64;
    if m <= 0 || m % two_k != 0 {
        return Err(Error::BadParameter(format!(
            "M must be a positive multiple of 2k = {two_k}, got {m}"
        )));
    }
    let a = form.coefficients();
    let h = m / two_k;
    let interval = IntSet::interval(-h, h);
    let mut components = Vec::with_capacity(k);
    for i in 0..k {
        let mut factor: i64 = 1;
        for (j, &aj) in a.iter().enumerate() {
            if j != i {
                factor = factor.checked_mul(aj).ok_or(Error::Overflow("construction factor"))?;
            }
        }
        // sign does not matter on a symmetric interval
        components.push(interval.dilate(factor.abs())?);
    }
    let union_set = components.iter().fold(IntSet::default(), |acc, c| acc.union(c));

    let ones = vec![1i64; k - 1];
    let sets: Vec<&IntSet> = vec![&interval; k - 1];
    let tail = RepFunction::of_linear_combo(&ones, &sets)?;
    let mut predicted: u64 = 0;
    for (t, mult) in tail.support() {
        if t.abs() <= h {
            predicted += mult;
        }
    }
    Ok(ConstructionResult {
        components,
        union_set,
        parameter_m: m,
        predicted_cross_count: predicted,
    })
}
