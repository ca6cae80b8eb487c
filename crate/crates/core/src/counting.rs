//! The counting engine: representation functions, solution counts `T`,
//! additive energy, sumsets and difference sets, doubling, dilated sumsets,
//! and solution counts for systems.
//!
//! Counts are exact `u64` values accumulated with checked arithmetic; the
//! representation-function tables are keyed by the exact integer value, so
//! there is no bound on where set elements may live beyond `i64` itself.
//! Sumset-style operations take a dense bitset fast path whenever the value
//! span is small enough; the hash fallback produces identical sets.

use crate::error::{Error, Result};
use crate::model::{IntSet, LinearForm, LinearSystem, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::{HashMap, HashSet};

/// Multiplicity table of a linear combination: maps each achievable value
/// `t = a_1 x_1 + ... + a_j x_j` to the number of ways of writing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepFunction {
    support: HashMap<i64, u64>,
}

impl RepFunction {
    /// Representation function of `t = a.0 * x1 + a.1 * x2` over `s1 x s2`.
    pub fn of_pair(a: (i64, i64), s1: &IntSet, s2: &IntSet) -> Result<Self> {
        Self::of_linear_combo(&[a.0, a.1], &[s1, s2])
    }

    /// Representation function of `t = sum_i coeffs[i] * x_i`, `x_i` ranging
    /// over `sets[i]`. With no coordinates this is the point mass at 0.
    pub fn of_linear_combo(coeffs: &[i64], sets: &[&IntSet]) -> Result<Self> {
        assert_eq!(coeffs.len(), sets.len());
        if coeffs.contains(&0) {
            return Err(Error::ZeroCoefficient);
        }
        let mut cur: HashMap<i64, u64> = HashMap::from([(0i64, 1u64)]);
        for (&a, &s) in coeffs.iter().zip(sets) {
            let mut next: HashMap<i64, u64> = HashMap::with_capacity(cur.len().max(s.len()));
            for (&t, &mult) in &cur {
                for x in s.iter() {
                    let ax = a.checked_mul(x).ok_or(Error::Overflow("representation value"))?;
                    let t2 = t.checked_add(ax).ok_or(Error::Overflow("representation value"))?;
                    *next.entry(t2).or_insert(0) += mult;
                }
            }
            cur = next;
        }
        Ok(RepFunction { support: cur })
    }

    pub fn multiplicity(&self, t: i64) -> u64 {
        self.support.get(&t).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.support.iter().map(|(&t, &m)| (t, m))
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    /// Total mass; equals the product of the generating set sizes.
    pub fn total(&self) -> u64 {
        self.support.values().sum()
    }
}

/// The result of one counting run: the exact number of ordered solution
/// tuples, the sizes of the participating sets, and the normalized density.
#[derive(Debug, Clone, PartialEq)]
pub struct CountReport {
    pub count: u64,
    pub set_sizes: Vec<usize>,
    pub density: Rational,
}

impl CountReport {
    fn new(count: u64, set_sizes: Vec<usize>, normalizer: BigInt) -> Self {
        let density = if normalizer.is_zero() {
            Rational::zero()
        } else {
            Rational::new(BigInt::from(count), normalizer)
        };
        CountReport {
            count,
            set_sizes,
            density,
        }
    }
}

/// `prod_{j != i} sizes[j]` minimized over `i`; the trivial bound on a family
/// count and the density normalizer (equals `n^{k-1}` for equal sizes).
fn family_normalizer(sizes: &[usize]) -> BigInt {
    let Some(max) = sizes.iter().max() else {
        return BigInt::zero();
    };
    let mut seen_max = false;
    let mut prod = BigInt::one();
    for &s in sizes {
        if s == *max && !seen_max {
            seen_max = true;
            continue;
        }
        prod *= BigInt::from(s);
    }
    prod
}

/// Number of ordered k-tuples `(x_1, ..., x_k) in S^k` with
/// `a_1 x_1 + ... + a_k x_k = 0`.
pub fn count_solutions(form: &LinearForm, s: &IntSet) -> Result<CountReport> {
    let family: Vec<&IntSet> = vec![s; form.arity()];
    count_solutions_family(form, &family)
}

/// Number of solutions with `x_i` drawn from `family[i]`.
///
/// Meet in the middle: the first `ceil((k-1)/2)` coordinates feed one
/// representation table, the rest feed the other, and the count is
/// `sum_t mu(t) * nu(-t)`.
pub fn count_solutions_family(form: &LinearForm, family: &[&IntSet]) -> Result<CountReport> {
    let k = form.arity();
    if family.len() != k {
        return Err(Error::ArityMismatch {
            expected: k,
            got: family.len(),
        });
    }
    let count = count_tuples_with_sum(form.coefficients(), family, 0)?;
    let sizes: Vec<usize> = family.iter().map(|s| s.len()).collect();
    let normalizer = family_normalizer(&sizes);
    Ok(CountReport::new(count, sizes, normalizer))
}

/// Number of tuples with `sum_i coeffs[i] * x_i = target`, `x_i in sets[i]`.
pub(crate) fn count_tuples_with_sum(
    coeffs: &[i64],
    sets: &[&IntSet],
    target: i64,
) -> Result<u64> {
    debug_assert_eq!(coeffs.len(), sets.len());
    let k = coeffs.len();
    let left = (k.saturating_sub(1)).div_ceil(2);
    let mu = RepFunction::of_linear_combo(&coeffs[..left], &sets[..left])?;
    let nu = RepFunction::of_linear_combo(&coeffs[left..], &sets[left..])?;
    let (small, large) = if mu.support_len() <= nu.support_len() {
        (&mu, &nu)
    } else {
        (&nu, &mu)
    };
    let mut count: u64 = 0;
    for (t, m) in small.support() {
        // mu(t) pairs with nu(target - t); the complement may overflow i64
        // only when it cannot be a table key, so such terms contribute 0.
        let Some(other) = target.checked_sub(t) else {
            continue;
        };
        let n = large.multiplicity(other);
        if n != 0 {
            let prod = m.checked_mul(n).ok_or(Error::Overflow("solution count"))?;
            count = count.checked_add(prod).ok_or(Error::Overflow("solution count"))?;
        }
    }
    Ok(count)
}

/// Additive energy `E(A, B)`: the number of quadruples
/// `(a_1, b_1, a_2, b_2)` with `a_1 + b_1 = a_2 + b_2`. Equals
/// `sum_t r(t)^2` for the representation function `r` of `A + B`.
pub fn additive_energy(a: &IntSet, b: &IntSet) -> Result<u64> {
    let r = RepFunction::of_pair((1, 1), a, b)?;
    let mut e: u64 = 0;
    for (_, m) in r.support() {
        let sq = m.checked_mul(m).ok_or(Error::Overflow("energy"))?;
        e = e.checked_add(sq).ok_or(Error::Overflow("energy"))?;
    }
    Ok(e)
}

/// `{a + b : a in A, b in B}`.
pub fn sumset(a: &IntSet, b: &IntSet) -> Result<IntSet> {
    pairwise_sums(a, b)
}

/// `{a - b : a in A, b in B}`.
pub fn difference_set(a: &IntSet, b: &IntSet) -> Result<IntSet> {
    pairwise_sums(a, &b.dilate(-1)?)
}

/// Doubling constant `delta[A] = |A - A| / |A|`.
pub fn doubling_delta(a: &IntSet) -> Result<Rational> {
    if a.is_empty() {
        return Err(Error::EmptySet("doubling_delta"));
    }
    let d = difference_set(a, a)?;
    Ok(Rational::new(BigInt::from(d.len()), BigInt::from(a.len())))
}

/// The dilated sumset `l1 * S + l2 * S`.
pub fn dilated_sum(l1: i64, l2: i64, s: &IntSet) -> Result<IntSet> {
    if l1 == 0 || l2 == 0 {
        return Err(Error::ZeroDilation);
    }
    pairwise_sums(&s.dilate(l1)?, &s.dilate(l2)?)
}

/// Spans up to this many bits use the dense-bitset path (8 MiB of words).
const DENSE_SPAN_BITS: u128 = 1 << 26;

fn pairwise_sums(a: &IntSet, b: &IntSet) -> Result<IntSet> {
    if a.is_empty() || b.is_empty() {
        return Ok(IntSet::default());
    }
    let (amin, amax) = (a.min().unwrap(), a.max().unwrap());
    let (bmin, bmax) = (b.min().unwrap(), b.max().unwrap());
    let lo = amin.checked_add(bmin).ok_or(Error::Overflow("sumset"))?;
    let hi = amax.checked_add(bmax).ok_or(Error::Overflow("sumset"))?;
    let span = (hi as i128 - lo as i128) as u128 + 1;
    if span <= DENSE_SPAN_BITS {
        Ok(pairwise_sums_dense(a, b, lo, span as usize))
    } else {
        pairwise_sums_hashed(a, b)
    }
}

/// Bitset sumset: represent `B - bmin` as a bitmask and OR a shifted copy
/// into the result for every `a in A`; `|A| * span(B) / 64` word operations.
fn pairwise_sums_dense(a: &IntSet, b: &IntSet, lo: i64, span: usize) -> IntSet {
    let bmin = b.min().unwrap();
    let b_span = (b.max().unwrap() - bmin) as usize + 1;
    let mut b_bits = vec![0u64; b_span.div_ceil(64)];
    for x in b.iter() {
        let off = (x - bmin) as usize;
        b_bits[off / 64] |= 1u64 << (off % 64);
    }
    // One extra word absorbs the high spill of shifted writes.
    let mut out = vec![0u64; span.div_ceil(64) + 1];
    let amin = a.min().unwrap();
    for x in a.iter() {
        // (x + bmin) - lo = x - amin
        let shift = (x - amin) as usize;
        let (words, bits) = (shift / 64, shift % 64);
        if bits == 0 {
            for (i, &w) in b_bits.iter().enumerate() {
                out[i + words] |= w;
            }
        } else {
            for (i, &w) in b_bits.iter().enumerate() {
                out[i + words] |= w << bits;
                out[i + words + 1] |= w >> (64 - bits);
            }
        }
    }
    let mut elems = Vec::new();
    for (i, &w) in out.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            let bit = w.trailing_zeros() as usize;
            elems.push(lo + (i * 64 + bit) as i64);
            w &= w - 1;
        }
    }
    IntSet::from_sorted(elems)
}

fn pairwise_sums_hashed(a: &IntSet, b: &IntSet) -> Result<IntSet> {
    let mut vals = HashSet::with_capacity(a.len() + b.len());
    for x in a.iter() {
        for y in b.iter() {
            vals.insert(x.checked_add(y).ok_or(Error::Overflow("sumset"))?);
        }
    }
    Ok(IntSet::new(vals))
}

/// Number of ordered k-tuples in `S^k` satisfying every row of the system.
///
/// The free (non-pivot) variables are enumerated over `S`; the pivot
/// variables are solved exactly via the adjugate of the pivot submatrix and
/// count only when integral and members of `S`.
pub fn count_system_solutions(system: &LinearSystem, s: &IntSet) -> Result<CountReport> {
    let m = system.equation_count();
    let k = system.variable_count();
    let sizes = vec![s.len(); k];
    let normalizer = if s.is_empty() {
        BigInt::zero()
    } else {
        BigInt::from(s.len()).pow((k - m) as u32)
    };
    if s.is_empty() {
        return Ok(CountReport::new(0, sizes, normalizer));
    }

    let pivots = system.pivot_columns();
    let free = system.free_columns();
    let rows = system.rows();
    let piv_mat: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| pivots.iter().map(|&c| r[c] as i128).collect())
        .collect();
    let det = determinant(&piv_mat)?;
    if det == 0 {
        return Err(Error::DegenerateSystem("pivot submatrix is singular".into()));
    }
    let adj = adjugate(&piv_mat)?;

    let nfree = free.len();
    let elems = s.elements();
    let mut assignment = vec![0usize; nfree];
    let mut count: u64 = 0;
    'outer: loop {
        // rhs_r = -sum_f rows[r][free[f]] * x_f
        let mut ok = true;
        let mut rhs = vec![0i128; m];
        for r in 0..m {
            let mut acc: i128 = 0;
            for f in 0..nfree {
                let c = rows[r][free[f]] as i128;
                let x = elems[assignment[f]] as i128;
                let term = c.checked_mul(x).ok_or(Error::Overflow("system rhs"))?;
                acc = acc.checked_add(term).ok_or(Error::Overflow("system rhs"))?;
            }
            rhs[r] = -acc;
        }
        for adj_row in &adj {
            let mut num: i128 = 0;
            for (&a, &r) in adj_row.iter().zip(&rhs) {
                let term = a.checked_mul(r).ok_or(Error::Overflow("system solve"))?;
                num = num.checked_add(term).ok_or(Error::Overflow("system solve"))?;
            }
            if num % det != 0 {
                ok = false;
                break;
            }
            let y = num / det;
            if y < i64::MIN as i128 || y > i64::MAX as i128 || !s.contains(y as i64) {
                ok = false;
                break;
            }
        }
        if ok {
            count = count.checked_add(1).ok_or(Error::Overflow("system count"))?;
        }
        // odometer over the free assignment
        for pos in (0..nfree).rev() {
            assignment[pos] += 1;
            if assignment[pos] < elems.len() {
                continue 'outer;
            }
            assignment[pos] = 0;
        }
        break;
    }
    Ok(CountReport::new(count, sizes, normalizer))
}

/// Bareiss fraction-free determinant of a small square `i128` matrix.
fn determinant(mat: &[Vec<i128>]) -> Result<i128> {
    let n = mat.len();
    let mut a: Vec<Vec<i128>> = mat.to_vec();
    let mut prev: i128 = 1;
    let mut sign: i128 = 1;
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| a[r][col] != 0) else {
            return Ok(0);
        };
        if pr != col {
            a.swap(col, pr);
            sign = -sign;
        }
        let piv = a[col][col];
        for r in col + 1..n {
            for c in col + 1..n {
                let hi = piv.checked_mul(a[r][c]).ok_or(Error::Overflow("determinant"))?;
                let lo = a[r][col].checked_mul(a[col][c]).ok_or(Error::Overflow("determinant"))?;
                let num = hi.checked_sub(lo).ok_or(Error::Overflow("determinant"))?;
                debug_assert_eq!(num % prev, 0);
                a[r][c] = num / prev;
            }
            a[r][col] = 0;
        }
        prev = piv;
    }
    Ok(sign * a[n - 1][n - 1])
}

/// Adjugate via cofactor determinants; fine for the small `m` of a system.
#[allow(clippy::needless_range_loop)]
fn adjugate(mat: &[Vec<i128>]) -> Result<Vec<Vec<i128>>> {
    let n = mat.len();
    if n == 1 {
        return Ok(vec![vec![1]]);
    }
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i128>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != j)
                        .map(|c| mat[r][c])
                        .collect()
                })
                .collect();
            let cof = determinant(&minor)?;
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = sign * cof;
        }
    }
    Ok(adj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[i64]) -> IntSet {
        IntSet::new(v.iter().copied())
    }

    fn form(c: &[i64]) -> LinearForm {
        LinearForm::new(c).unwrap()
    }

    #[test]
    fn rep_function_pair_examples() {
        let s = set(&[0, 1]);
        let r = RepFunction::of_pair((1, 1), &s, &s).unwrap();
        assert_eq!(r.multiplicity(0), 1);
        assert_eq!(r.multiplicity(1), 2);
        assert_eq!(r.multiplicity(2), 1);
        assert_eq!(r.total(), 4);

        let r = RepFunction::of_pair((1, 1), &IntSet::default(), &s).unwrap();
        assert_eq!(r.support_len(), 0);

        let r = RepFunction::of_pair((1, -2), &s, &s).unwrap();
        for (t, m) in [(0, 1), (1, 1), (-2, 1), (-1, 1)] {
            assert_eq!(r.multiplicity(t), m);
        }
    }

    #[test]
    fn count_solutions_examples() {
        assert_eq!(count_solutions(&form(&[1, 1, 1]), &set(&[-1, 0, 1])).unwrap().count, 7);
        assert_eq!(count_solutions(&form(&[1, 1, 1]), &IntSet::default()).unwrap().count, 0);
        assert_eq!(
            count_solutions(&form(&[1, -2, 1]), &set(&[-2, -1, 0, 1, 2])).unwrap().count,
            13
        );
        assert_eq!(count_solutions(&form(&[1, 2, -3]), &set(&[-1, 0, 1])).unwrap().count, 3);
    }

    #[test]
    fn count_family_examples() {
        let f = form(&[1, 1, 1]);
        let zero = set(&[0]);
        let r = count_solutions_family(&f, &[&zero, &zero, &zero]).unwrap();
        assert_eq!(r.count, 1);

        let s01 = set(&[0, 1]);
        let neg = set(&[-1]);
        let r = count_solutions_family(&f, &[&s01, &s01, &neg]).unwrap();
        assert_eq!(r.count, 2);

        let r = count_solutions_family(&f, &[&s01, &s01]);
        assert!(matches!(r, Err(Error::ArityMismatch { expected: 3, got: 2 })));
    }

    #[test]
    fn density_normalizer_matches_sizes() {
        let f = form(&[1, 1, 1]);
        let s = set(&[-1, 0, 1]);
        let r = count_solutions(&f, &s).unwrap();
        assert_eq!(r.density, crate::model::rational(7, 9));
        let empty = count_solutions(&f, &IntSet::default()).unwrap();
        assert_eq!(empty.density, Rational::zero());
    }

    #[test]
    fn energy_examples() {
        assert_eq!(additive_energy(&set(&[0, 1]), &set(&[0, 1])).unwrap(), 6);
        assert_eq!(additive_energy(&set(&[0]), &set(&[0, 5])).unwrap(), 2);
        assert_eq!(additive_energy(&IntSet::default(), &set(&[0, 1])).unwrap(), 0);
    }

    #[test]
    fn sumset_difference_examples() {
        assert_eq!(
            difference_set(&set(&[0, 1]), &set(&[0, 1])).unwrap().elements(),
            &[-1, 0, 1]
        );
        assert_eq!(
            difference_set(&set(&[1, 2, 4, 8]), &set(&[1, 2, 4, 8])).unwrap().len(),
            13
        );
        assert_eq!(
            sumset(&set(&[0, 1]), &set(&[0, 10])).unwrap().elements(),
            &[0, 1, 10, 11]
        );
    }

    #[test]
    fn doubling_examples() {
        assert_eq!(doubling_delta(&IntSet::interval(0, 9)).unwrap(), crate::model::rational(19, 10));
        assert_eq!(doubling_delta(&set(&[7])).unwrap(), crate::model::rational(1, 1));
        assert_eq!(doubling_delta(&set(&[1, 2, 4, 8])).unwrap(), crate::model::rational(13, 4));
        assert!(matches!(doubling_delta(&IntSet::default()), Err(Error::EmptySet(_))));
    }

    #[test]
    fn dilated_sum_examples() {
        for n in [1i64, 2, 5, 9] {
            let s = IntSet::interval(0, n - 1);
            assert_eq!(dilated_sum(1, 1, &s).unwrap().len() as i64, 2 * n - 1);
            assert_eq!(dilated_sum(1, 2, &s).unwrap().len() as i64, 3 * n - 2);
        }
        let s = IntSet::interval(0, 4);
        let d = dilated_sum(2, 3, &s).unwrap();
        assert_eq!(d.len(), 19);
        assert!(!d.contains(1) && !d.contains(19));
        assert!(matches!(dilated_sum(0, 3, &s), Err(Error::ZeroDilation)));
    }

    #[test]
    fn system_count_examples() {
        let sys = LinearSystem::new(vec![vec![1, 1, -1, 0], vec![1, 2, 0, -1]]).unwrap();
        let r = count_system_solutions(&sys, &IntSet::interval(0, 9)).unwrap();
        assert_eq!(r.count, 30);
        assert_eq!(r.density, crate::model::rational(30, 100));

        let r = count_system_solutions(&sys, &set(&[0])).unwrap();
        assert_eq!(r.count, 1);

        let r = count_system_solutions(&sys, &IntSet::default()).unwrap();
        assert_eq!(r.count, 0);
    }

    #[test]
    fn dense_and_hashed_sumsets_agree() {
        let a = set(&[-5, 0, 3, 17, 40]);
        let b = set(&[-9, -1, 2, 30]);
        let dense = pairwise_sums_dense(
            &a,
            &b,
            a.min().unwrap() + b.min().unwrap(),
            (a.max().unwrap() + b.max().unwrap() - a.min().unwrap() - b.min().unwrap()) as usize
                + 1,
        );
        let hashed = pairwise_sums_hashed(&a, &b).unwrap();
        assert_eq!(dense, hashed);
    }

    #[test]
    fn rep_function_rejects_zero_coefficient() {
        let s = set(&[0, 1]);
        assert!(matches!(
            RepFunction::of_pair((0, 1), &s, &s),
            Err(Error::ZeroCoefficient)
        ));
    }

    #[test]
    fn value_formation_overflow_is_reported() {
        let big = set(&[i64::MAX / 2, i64::MAX / 2 - 1]);
        let f = form(&[3, 1, 1]);
        assert!(matches!(count_solutions(&f, &big), Err(Error::Overflow(_))));
        let top = set(&[i64::MAX - 1, i64::MAX]);
        assert!(matches!(sumset(&top, &top), Err(Error::Overflow(_))));
    }
}
