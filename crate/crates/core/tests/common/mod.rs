//! Brute-force oracles, deliberately independent of the library's counting
//! paths: plain nested enumeration, no representation tables, no
//! meet-in-the-middle.
#![allow(dead_code)] // each test binary uses its own subset

use lincount::IntSet;

/// Number of tuples `(x_1, ..., x_k)` with `x_i` from `sets[i]` and
/// `sum coeffs[i] * x_i = target`, by full enumeration.
pub fn brute_count_target(coeffs: &[i64], sets: &[&IntSet], target: i64) -> u64 {
    fn rec(coeffs: &[i64], sets: &[&IntSet], acc: i64, target: i64) -> u64 {
        if coeffs.is_empty() {
            return u64::from(acc == target);
        }
        let mut total = 0;
        for x in sets[0].iter() {
            total += rec(&coeffs[1..], &sets[1..], acc + coeffs[0] * x, target);
        }
        total
    }
    rec(coeffs, sets, 0, target)
}

pub fn brute_count(coeffs: &[i64], sets: &[&IntSet]) -> u64 {
    brute_count_target(coeffs, sets, 0)
}

pub fn brute_count_same(coeffs: &[i64], s: &IntSet) -> u64 {
    let family: Vec<&IntSet> = vec![s; coeffs.len()];
    brute_count(coeffs, &family)
}

/// `E(A, B)` as the literal quadruple count.
pub fn brute_energy(a: &IntSet, b: &IntSet) -> u64 {
    let mut e = 0;
    for a1 in a.iter() {
        for b1 in b.iter() {
            for a2 in a.iter() {
                for b2 in b.iter() {
                    if a1 + b1 == a2 + b2 {
                        e += 1;
                    }
                }
            }
        }
    }
    e
}

/// Sumset by enumeration into a `BTreeSet`.
pub fn brute_sumset(a: &IntSet, b: &IntSet) -> Vec<i64> {
    let mut out = std::collections::BTreeSet::new();
    for x in a.iter() {
        for y in b.iter() {
            out.insert(x + y);
        }
    }
    out.into_iter().collect()
}

/// Exact solution count of a linear system over `S^k` by full enumeration,
/// checking every row against every tuple.
pub fn brute_system_count(rows: &[Vec<i64>], s: &IntSet) -> u64 {
    let k = rows[0].len();
    let elems: Vec<i64> = s.iter().collect();
    let mut tuple = vec![0usize; k];
    if elems.is_empty() {
        return 0;
    }
    let mut count = 0;
    'outer: loop {
        let ok = rows.iter().all(|row| {
            row.iter()
                .zip(&tuple)
                .map(|(&c, &i)| c * elems[i])
                .sum::<i64>()
                == 0
        });
        if ok {
            count += 1;
        }
        for pos in (0..k).rev() {
            tuple[pos] += 1;
            if tuple[pos] < elems.len() {
                continue 'outer;
            }
            tuple[pos] = 0;
        }
        break;
    }
    count
}
