//! Shared domain types: linear forms, systems of equations, finite integer
//! sets, and the exact rational carrier used for densities.
//!
//! Everything here is immutable after construction and safe to share across
//! threads. Set elements are checked `i64`; the practical bound on any
//! computation is that intermediate products such as `a_i * x_i` must stay
//! inside `i64` (the engine reports `Overflow` instead of wrapping).

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;

/// Exact rational number: always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Convenience constructor for small rationals.
pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// The coefficient vector (a_1, ..., a_k) of one homogeneous linear equation
/// `a_1 x_1 + ... + a_k x_k = 0`.
///
/// Invariants: the coefficients are nonzero, coprime as a tuple, and there
/// are at least three of them. Construction normalizes by the gcd, since the
/// solution set is invariant under scaling the equation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearForm {
    coeffs: Vec<i64>,
}

impl LinearForm {
    /// Normalizes a raw coefficient vector: divides through by the gcd,
    /// preserving order and signs.
    pub fn new(raw: &[i64]) -> Result<Self> {
        if raw.len() < 3 {
            return Err(Error::ArityTooSmall(raw.len()));
        }
        if raw.contains(&0) {
            return Err(Error::ZeroCoefficient);
        }
        let g = raw.iter().fold(0i64, |acc, &a| acc.gcd(&a));
        let coeffs = raw.iter().map(|&a| a / g).collect();
        Ok(LinearForm { coeffs })
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn arity(&self) -> usize {
        self.coeffs.len()
    }
}

/// A finite set of distinct integers, stored strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntSet {
    elems: Vec<i64>,
}

impl IntSet {
    /// Builds the set of the given values: duplicates collapse, order is
    /// irrelevant.
    pub fn new(values: impl IntoIterator<Item = i64>) -> Self {
        let mut elems: Vec<i64> = values.into_iter().collect();
        elems.sort_unstable();
        elems.dedup();
        IntSet { elems }
    }

    /// The integers `lo..=hi` (empty when `lo > hi`).
    pub fn interval(lo: i64, hi: i64) -> Self {
        IntSet {
            elems: (lo..=hi).collect(),
        }
    }

    /// Wraps a vector already known to be strictly increasing.
    pub(crate) fn from_sorted(elems: Vec<i64>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        IntSet { elems }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    pub fn elements(&self) -> &[i64] {
        &self.elems
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.elems.iter().copied()
    }

    pub fn min(&self) -> Option<i64> {
        self.elems.first().copied()
    }

    pub fn max(&self) -> Option<i64> {
        self.elems.last().copied()
    }

    /// The dilated set `{c * x : x in self}`. Size is preserved since `c != 0`.
    pub fn dilate(&self, c: i64) -> Result<IntSet> {
        if c == 0 {
            return Err(Error::ZeroDilation);
        }
        let mut elems = Vec::with_capacity(self.elems.len());
        for &x in &self.elems {
            elems.push(x.checked_mul(c).ok_or(Error::Overflow("dilation"))?);
        }
        if c < 0 {
            elems.reverse();
        }
        Ok(IntSet { elems })
    }

    /// Set union by sorted merge.
    pub fn union(&self, other: &IntSet) -> IntSet {
        let mut elems = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.elems.len() && j < other.elems.len() {
            match self.elems[i].cmp(&other.elems[j]) {
                std::cmp::Ordering::Less => {
                    elems.push(self.elems[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    elems.push(other.elems[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    elems.push(self.elems[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        elems.extend_from_slice(&self.elems[i..]);
        elems.extend_from_slice(&other.elems[j..]);
        IntSet { elems }
    }
}

impl FromIterator<i64> for IntSet {
    fn from_iter<T: IntoIterator<Item = i64>>(iter: T) -> Self {
        IntSet::new(iter)
    }
}

/// An `m x k` integer coefficient matrix describing a system of `m`
/// homogeneous equations over `k` shared variables.
///
/// Invariants: `1 <= m <= k - 2` and the rows are linearly independent over
/// the rationals (checked by fraction-free elimination). Unlike
/// [`LinearForm`], rows may contain zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    rows: Vec<Vec<i64>>,
    vars: usize,
    pivot_cols: Vec<usize>,
    free_cols: Vec<usize>,
}

impl LinearSystem {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::DegenerateSystem("a system needs at least one equation".into()));
        }
        let vars = rows[0].len();
        if rows.iter().any(|r| r.len() != vars) {
            return Err(Error::DegenerateSystem("rows must share the variable count".into()));
        }
        if rows.len() + 2 > vars {
            return Err(Error::DegenerateSystem(format!(
                "need m <= k - 2, got m = {} equations in k = {} variables",
                rows.len(),
                vars
            )));
        }
        let pivot_cols = leftmost_pivot_columns(&rows)?;
        if pivot_cols.len() < rows.len() {
            return Err(Error::DegenerateSystem(
                "rows are linearly dependent over the rationals".into(),
            ));
        }
        let free_cols = (0..vars).filter(|c| !pivot_cols.contains(c)).collect();
        Ok(LinearSystem {
            rows,
            vars,
            pivot_cols,
            free_cols,
        })
    }

    pub fn equation_count(&self) -> usize {
        self.rows.len()
    }

    pub fn variable_count(&self) -> usize {
        self.vars
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// The lexicographically first set of columns carrying an invertible
    /// `m x m` submatrix; the complementary `free_cols` get enumerated by the
    /// system counter.
    pub(crate) fn pivot_columns(&self) -> &[usize] {
        &self.pivot_cols
    }

    pub(crate) fn free_columns(&self) -> &[usize] {
        &self.free_cols
    }
}

/// Greedy left-to-right pivot selection via fraction-free (Bareiss)
/// elimination over `i128`. Returns the pivot columns found; fewer than `m`
/// means the rows are dependent.
fn leftmost_pivot_columns(rows: &[Vec<i64>]) -> Result<Vec<usize>> {
    let m = rows.len();
    let k = rows[0].len();
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut pivots = Vec::with_capacity(m);
    let mut row = 0usize;
    let mut prev_pivot: i128 = 1;
    for col in 0..k {
        if row == m {
            break;
        }
        let Some(pr) = (row..m).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(row, pr);
        let piv = a[row][col];
        for r in row + 1..m {
            for c in col + 1..k {
                let hi = piv.checked_mul(a[r][c]).ok_or(Error::Overflow("system elimination"))?;
                let lo = a[r][col]
                    .checked_mul(a[row][c])
                    .ok_or(Error::Overflow("system elimination"))?;
                let num = hi.checked_sub(lo).ok_or(Error::Overflow("system elimination"))?;
                debug_assert_eq!(num % prev_pivot, 0); // exact by Bareiss
                a[r][c] = num / prev_pivot;
            }
            a[r][col] = 0;
        }
        prev_pivot = piv;
        pivots.push(col);
        row += 1;
    }
    Ok(pivots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_divides_by_gcd() {
        let f = LinearForm::new(&[2, 4, 6]).unwrap();
        assert_eq!(f.coefficients(), &[1, 2, 3]);
    }

    #[test]
    fn normalize_keeps_coprime_vectors() {
        let f = LinearForm::new(&[1, 60, 61]).unwrap();
        assert_eq!(f.coefficients(), &[1, 60, 61]);
    }

    #[test]
    fn normalize_preserves_signs() {
        let f = LinearForm::new(&[-2, 4, -6]).unwrap();
        assert_eq!(f.coefficients(), &[-1, 2, -3]);
    }

    #[test]
    fn normalize_rejects_zero_coefficient() {
        assert!(matches!(LinearForm::new(&[0, 1, 1]), Err(Error::ZeroCoefficient)));
    }

    #[test]
    fn normalize_rejects_small_arity() {
        assert!(matches!(LinearForm::new(&[1, 1]), Err(Error::ArityTooSmall(2))));
    }

    #[test]
    fn normalize_is_idempotent() {
        let once = LinearForm::new(&[6, -9, 12]).unwrap();
        let twice = LinearForm::new(once.coefficients()).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn make_set_dedupes_and_sorts() {
        assert_eq!(IntSet::new([3, 1, 1, 2]).elements(), &[1, 2, 3]);
        assert_eq!(IntSet::new([]).len(), 0);
        assert_eq!(IntSet::new([5, -5]).elements(), &[-5, 5]);
    }

    #[test]
    fn dilate_examples() {
        let s = IntSet::new([1, 2, 3]);
        assert_eq!(s.dilate(2).unwrap().elements(), &[2, 4, 6]);
        assert_eq!(s.dilate(1).unwrap(), s);
        let t = IntSet::new([0, 1, 4]);
        assert_eq!(t.dilate(-1).unwrap().elements(), &[-4, -1, 0]);
        assert!(matches!(s.dilate(0), Err(Error::ZeroDilation)));
    }

    #[test]
    fn dilate_detects_overflow() {
        let s = IntSet::new([i64::MAX / 2 + 1]);
        assert!(matches!(s.dilate(2), Err(Error::Overflow(_))));
    }

    #[test]
    fn union_merges() {
        let a = IntSet::new([1, 3, 5]);
        let b = IntSet::new([2, 3, 6]);
        assert_eq!(a.union(&b).elements(), &[1, 2, 3, 5, 6]);
    }

    #[test]
    fn system_accepts_two_by_four_shape() {
        let sys = LinearSystem::new(vec![vec![1, 1, -1, 0], vec![1, 2, 0, -1]]).unwrap();
        assert_eq!(sys.equation_count(), 2);
        assert_eq!(sys.variable_count(), 4);
        assert_eq!(sys.pivot_columns(), &[0, 1]);
        assert_eq!(sys.free_columns(), &[2, 3]);
    }

    #[test]
    fn system_rejects_dependent_rows() {
        let r = LinearSystem::new(vec![vec![1, 1, -1, 0, 0], vec![2, 2, -2, 0, 0]]);
        assert!(matches!(r, Err(Error::DegenerateSystem(_))));
    }

    #[test]
    fn system_rejects_too_many_equations() {
        let r = LinearSystem::new(vec![vec![1, 1, -1], vec![1, 2, 3]]);
        assert!(matches!(r, Err(Error::DegenerateSystem(_))));
    }

    #[test]
    fn system_pivots_skip_zero_columns() {
        // x2 never appears: pivots must come from columns 0 and 2.
        let sys = LinearSystem::new(vec![vec![1, 0, -1, 0, 0], vec![1, 0, 2, -1, 0]]).unwrap();
        assert_eq!(sys.pivot_columns(), &[0, 2]);
    }

    #[test]
    fn rational_is_reduced() {
        let r = rational(6, -4);
        assert_eq!(r, rational(-3, 2));
        assert!(r.denom() > &num_bigint::BigInt::from(0));
    }
}
