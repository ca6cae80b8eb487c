//! Lower-bound estimation for the extremal solution density: exhaustive
//! search over tiny instances, seeded stochastic local search over medium
//! ones, and the two-equation system density sweep.
//!
//! Everything here is deterministic for a fixed configuration: restart
//! chains derive their generators from `(seed, restart index)` and the final
//! reduction orders by `(count, lexicographic element list)`, so parallel and
//! serial runs agree bit for bit.

use crate::construct;
use crate::counting::{count_solutions, count_system_solutions};
use crate::error::{Error, Result};
use crate::model::{IntSet, LinearForm, LinearSystem, Rational};
use crate::oracles::splitmix64;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::{HashMap, HashSet};

/// Documented default seed for every randomized entry point.
pub const DEFAULT_SEED: u64 = 42;

/// Default cap on the number of subsets [`exhaustive_max`] may enumerate.
pub const DEFAULT_EXHAUSTIVE_BUDGET: u64 = 10_000_000;

/// Local search handles each swap through a table indexed by position
/// subsets, which is exponential in the arity.
pub const MAX_SEARCH_ARITY: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum Acceptance {
    /// Accept any swap that does not lower the count.
    HillClimb,
    /// Accept worsening swaps with probability `exp(delta / T)` under a
    /// geometric cooling schedule `T = initial_temp * cooling^step`.
    Anneal { initial_temp: f64, cooling: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub set_size: usize,
    pub range_lo: i64,
    pub range_hi: i64,
    pub restarts: u32,
    pub steps_per_restart: u64,
    pub seed: u64,
    pub acceptance: Acceptance,
}

impl SearchConfig {
    pub fn new(set_size: usize, range_lo: i64, range_hi: i64) -> Self {
        SearchConfig {
            set_size,
            range_lo,
            range_hi,
            restarts: 8,
            steps_per_restart: 20_000,
            seed: DEFAULT_SEED,
            acceptance: Acceptance::HillClimb,
        }
    }

    fn width(&self) -> Result<u64> {
        let w = self.range_hi as i128 - self.range_lo as i128 + 1;
        u64::try_from(w).map_err(|_| {
            Error::BadParameter(format!(
                "bad ground range [{}, {}]",
                self.range_lo, self.range_hi
            ))
        })
    }

    fn validate(&self) -> Result<()> {
        if self.set_size == 0 {
            return Err(Error::BadParameter("set size must be at least 1".into()));
        }
        if self.width()? < self.set_size as u64 {
            return Err(Error::BadParameter(format!(
                "ground range [{}, {}] is smaller than the set size {}",
                self.range_lo, self.range_hi, self.set_size
            )));
        }
        if self.restarts == 0 {
            return Err(Error::BadParameter("need at least one restart".into()));
        }
        if let Acceptance::Anneal { initial_temp, cooling } = self.acceptance {
            let temp_ok = initial_temp > 0.0;
            let cooling_ok = cooling > 0.0 && cooling < 1.0;
            if !temp_ok || !cooling_ok {
                return Err(Error::BadParameter(
                    "annealing needs initial_temp > 0 and cooling in (0, 1)".into(),
                ));
            }
        }
        Ok(())
    }
}

/// A certified lower-bound witness: an explicit set together with its exact
/// solution count and density `count / n^{k-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaEstimate {
    pub form: LinearForm,
    pub best_set: IntSet,
    pub best_count: u64,
    pub density: Rational,
    pub trace: Vec<Rational>,
}

fn density_of(count: u64, size: usize, arity: usize) -> Rational {
    if size == 0 {
        return Rational::zero();
    }
    Rational::new(
        BigInt::from(count),
        BigInt::from(size).pow(arity as u32 - 1),
    )
}

/// Exact maximum of the count over all `n`-subsets of `[lo, hi]`, with the
/// lexicographically first maximizing set. Refuses to enumerate more than
/// `budget` subsets.
pub fn exhaustive_max_with_budget(
    form: &LinearForm,
    n: usize,
    lo: i64,
    hi: i64,
    budget: u64,
) -> Result<GammaEstimate> {
    if hi < lo {
        return Err(Error::BadParameter(format!("empty range [{lo}, {hi}]")));
    }
    let width = (hi as i128 - lo as i128 + 1) as u128;
    let width = u64::try_from(width).map_err(|_| Error::BadParameter("range too wide".into()))?;
    if (n as u64) > width {
        return Err(Error::BadParameter(format!(
            "cannot choose {n} elements from a range of {width}"
        )));
    }
    match binomial_capped(width, n as u64, budget) {
        Some(_) => {}
        None => {
            return Err(Error::BudgetExceeded(format!(
                "C({width}, {n}) exceeds the budget of {budget} subsets"
            )))
        }
    }

    let mut best: Option<(u64, Vec<i64>)> = None;
    let mut indices: Vec<usize> = (0..n).collect();
    let w = width as usize;
    loop {
        let elems: Vec<i64> = indices.iter().map(|&i| lo + i as i64).collect();
        let candidate = IntSet::from_sorted(elems);
        let count = count_solutions(form, &candidate)?.count;
        // strict improvement keeps the lexicographically first argmax
        if best.as_ref().is_none_or(|(c, _)| count > *c) {
            best = Some((count, candidate.elements().to_vec()));
        }
        if !advance_combination(&mut indices, w) {
            break;
        }
    }
    let (best_count, elems) = best.expect("at least one subset enumerated");
    let best_set = IntSet::from_sorted(elems);
    let density = density_of(best_count, best_set.len(), form.arity());
    Ok(GammaEstimate {
        form: form.clone(),
        best_set,
        best_count,
        density: density.clone(),
        trace: vec![density],
    })
}

pub fn exhaustive_max(form: &LinearForm, n: usize, lo: i64, hi: i64) -> Result<GammaEstimate> {
    exhaustive_max_with_budget(form, n, lo, hi, DEFAULT_EXHAUSTIVE_BUDGET)
}

fn advance_combination(indices: &mut [usize], width: usize) -> bool {
    let n = indices.len();
    for pos in (0..n).rev() {
        if indices[pos] != pos + width - n {
            indices[pos] += 1;
            for j in pos + 1..n {
                indices[j] = indices[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `C(w, n)` if it stays within `cap`, else `None`. Exact stepwise products.
fn binomial_capped(w: u64, n: u64, cap: u64) -> Option<u64> {
    if n > w {
        return Some(0);
    }
    let n = n.min(w - n);
    let mut acc: u128 = 1;
    for i in 0..n {
        acc = acc * (w - i) as u128 / (i + 1) as u128;
        if acc > cap as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

enum ChainInit {
    Random,
    Seeded(IntSet),
}

struct ChainOutcome {
    best_count: u64,
    best_elems: Vec<i64>,
}

/// Mutable search state: the current set, its exact count, and the
/// per-position-subset tables that make a swap update cost `O(k |S|)` at
/// arity 3 (two-variable residual counts) instead of a full recount.
struct ChainState<'a> {
    coeffs: &'a [i64],
    elems: Vec<i64>,
    members: HashSet<i64>,
    count: u64,
    // indexed by the bitmask of positions pinned to the swapped-in value
    mask_coeff_sum: Vec<i64>,
    mask_rest: Vec<Vec<usize>>,
}

impl<'a> ChainState<'a> {
    fn new(form: &'a LinearForm, set: &IntSet) -> Result<Self> {
        let coeffs = form.coefficients();
        let k = coeffs.len();
        let mut mask_coeff_sum = vec![0i64; 1 << k];
        let mut mask_rest = vec![Vec::new(); 1 << k];
        for mask in 1usize..1 << k {
            let mut sum: i64 = 0;
            let mut rest = Vec::with_capacity(k);
            for (i, &a) in coeffs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    sum = sum.checked_add(a).ok_or(Error::Overflow("coefficient sum"))?;
                } else {
                    rest.push(i);
                }
            }
            mask_coeff_sum[mask] = sum;
            mask_rest[mask] = rest;
        }
        let count = count_solutions(form, set)?.count;
        Ok(ChainState {
            coeffs,
            elems: set.elements().to_vec(),
            members: set.iter().collect(),
            count,
            mask_coeff_sum,
            mask_rest,
        })
    }

    fn insert(&mut self, v: i64) {
        let pos = self.elems.binary_search(&v).unwrap_err();
        self.elems.insert(pos, v);
        self.members.insert(v);
    }

    fn remove(&mut self, u: i64) {
        let pos = self.elems.binary_search(&u).expect("removing a member");
        self.elems.remove(pos);
        self.members.remove(&u);
    }

    /// Number of solutions over `current union {w}` that use `w` in at least
    /// one position (`w` must not be a current member). Tuples are
    /// partitioned by the exact set of positions holding `w`.
    fn add_delta(&self, w: i64) -> Result<u64> {
        debug_assert!(!self.members.contains(&w));
        let k = self.coeffs.len();
        let mut total: u64 = 0;
        for mask in 1usize..1 << k {
            let pinned = self.mask_coeff_sum[mask]
                .checked_mul(w)
                .ok_or(Error::Overflow("swap delta"))?;
            let target = pinned.checked_neg().ok_or(Error::Overflow("swap delta"))?;
            total = total
                .checked_add(self.count_rest(&self.mask_rest[mask], target)?)
                .ok_or(Error::Overflow("swap delta"))?;
        }
        Ok(total)
    }

    /// Tuples over the current members at the given positions whose
    /// coefficient-weighted sum hits `target`.
    fn count_rest(&self, positions: &[usize], target: i64) -> Result<u64> {
        match positions {
            [] => Ok(u64::from(target == 0)),
            [j] => {
                let a = self.coeffs[*j];
                Ok(u64::from(target % a == 0 && self.members.contains(&(target / a))))
            }
            [j1, j2] => {
                let a = self.coeffs[*j1];
                let b = self.coeffs[*j2];
                let mut acc: u64 = 0;
                for &x in &self.elems {
                    let ax = a.checked_mul(x).ok_or(Error::Overflow("swap delta"))?;
                    let Some(r) = target.checked_sub(ax) else {
                        continue;
                    };
                    if r % b == 0 && self.members.contains(&(r / b)) {
                        acc += 1;
                    }
                }
                Ok(acc)
            }
            [head @ .., last] => {
                let mut table: HashMap<i64, u64> = HashMap::from([(0i64, 1u64)]);
                for &j in head {
                    let a = self.coeffs[j];
                    let mut next = HashMap::with_capacity(table.len() * self.elems.len());
                    for (&t, &m) in &table {
                        for &x in &self.elems {
                            let ax = a.checked_mul(x).ok_or(Error::Overflow("swap delta"))?;
                            let t2 = t.checked_add(ax).ok_or(Error::Overflow("swap delta"))?;
                            *next.entry(t2).or_insert(0) += m;
                        }
                    }
                    table = next;
                }
                let b = self.coeffs[*last];
                let mut acc: u64 = 0;
                for (&t, &m) in &table {
                    let Some(r) = target.checked_sub(t) else {
                        continue;
                    };
                    if r % b == 0 && self.members.contains(&(r / b)) {
                        acc = acc.checked_add(m).ok_or(Error::Overflow("swap delta"))?;
                    }
                }
                Ok(acc)
            }
        }
    }
}

/// Uniform random `n`-subset of `[lo, lo + width)` by Floyd's algorithm.
fn random_subset(rng: &mut ChaCha8Rng, lo: i64, width: u64, n: usize) -> IntSet {
    let mut chosen: HashSet<u64> = HashSet::with_capacity(n);
    for j in (width - n as u64)..width {
        let t = rng.gen_range(0..=j);
        if chosen.contains(&t) {
            chosen.insert(j);
        } else {
            chosen.insert(t);
        }
    }
    IntSet::new(chosen.into_iter().map(|off| lo + off as i64))
}

fn chain_seed(seed: u64, restart: u64) -> u64 {
    splitmix64(seed ^ restart.wrapping_mul(0xD134_2543_DE82_EF95))
}

fn run_chain(
    form: &LinearForm,
    config: &SearchConfig,
    rng_seed: u64,
    init: ChainInit,
) -> Result<ChainOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let width = config.width()?;
    let initial = match init {
        ChainInit::Random => random_subset(&mut rng, config.range_lo, width, config.set_size),
        ChainInit::Seeded(s) => s,
    };
    let mut state = ChainState::new(form, &initial)?;
    let mut best_count = state.count;
    let mut best_elems = state.elems.clone();
    let span_lo = config.range_lo.min(initial.min().unwrap_or(config.range_lo));
    let span_hi = config.range_hi.max(initial.max().unwrap_or(config.range_hi));
    let span_width = (span_hi as i128 - span_lo as i128 + 1) as u64;

    let mut temp = match config.acceptance {
        Acceptance::Anneal { initial_temp, .. } => initial_temp,
        Acceptance::HillClimb => 0.0,
    };
    for _step in 0..config.steps_per_restart {
        if state.elems.is_empty() || span_width <= state.elems.len() as u64 {
            break; // no swap is possible
        }
        let u = state.elems[rng.gen_range(0..state.elems.len())];
        let v = loop {
            let cand = span_lo + rng.gen_range(0..span_width) as i64;
            if !state.members.contains(&cand) {
                break cand;
            }
        };
        state.remove(u);
        let down = state.add_delta(u)?;
        let up = state.add_delta(v)?;
        let delta = up as i128 - down as i128;
        let accept = match config.acceptance {
            Acceptance::HillClimb => delta >= 0,
            Acceptance::Anneal { cooling, .. } => {
                let ok = delta >= 0 || {
                    let p = ((delta as f64) / temp).exp();
                    rng.gen::<f64>() < p
                };
                temp *= cooling;
                ok
            }
        };
        if accept {
            state.insert(v);
            state.count = (state.count as i128 + delta) as u64;
            if state.count > best_count {
                best_count = state.count;
                best_elems = state.elems.clone();
            }
        } else {
            state.insert(u);
        }
    }
    Ok(ChainOutcome {
        best_count,
        best_elems,
    })
}

/// Picks the winner: highest count, ties broken toward the lexicographically
/// smaller element list. Re-verifies the winning count with a full recount.
fn reduce_chains(form: &LinearForm, outcomes: Vec<ChainOutcome>) -> Result<GammaEstimate> {
    let arity = form.arity();
    let trace: Vec<Rational> = outcomes
        .iter()
        .map(|o| density_of(o.best_count, o.best_elems.len(), arity))
        .collect();
    let winner = outcomes
        .into_iter()
        .reduce(|best, cand| {
            if cand.best_count > best.best_count
                || (cand.best_count == best.best_count && cand.best_elems < best.best_elems)
            {
                cand
            } else {
                best
            }
        })
        .expect("at least one chain");
    let best_set = IntSet::from_sorted(winner.best_elems);
    let recount = count_solutions(form, &best_set)?.count;
    assert_eq!(
        recount, winner.best_count,
        "incremental count diverged from the counting engine"
    );
    let density = density_of(winner.best_count, best_set.len(), arity);
    Ok(GammaEstimate {
        form: form.clone(),
        best_set,
        best_count: winner.best_count,
        density,
        trace,
    })
}

/// Stochastic local search: independent restart chains of single-element
/// swaps from seeded random subsets, reduced deterministically.
pub fn local_search_max(form: &LinearForm, config: &SearchConfig) -> Result<GammaEstimate> {
    config.validate()?;
    if form.arity() > MAX_SEARCH_ARITY {
        return Err(Error::BadArity(format!(
            "local search supports arity <= {MAX_SEARCH_ARITY}"
        )));
    }
    let outcomes: Vec<ChainOutcome> = (0..config.restarts)
        .into_par_iter()
        .map(|r| run_chain(form, config, chain_seed(config.seed, r as u64), ChainInit::Random))
        .collect::<Result<_>>()?;
    reduce_chains(form, outcomes)
}

/// Construction seed for a target set size: the largest union of the pieced
/// construction that still fits inside `n` elements.
fn construction_seed(form: &LinearForm, n: usize) -> Option<IntSet> {
    let k = form.arity();
    let step = 2 * k as i64;
    let mut best: Option<IntSet> = None;
    let mut m = step;
    while m <= k as i64 * (n as i64 + 1) {
        let built = if k == 3 {
            construct::three_piece(form, m)
        } else {
            construct::k_piece(form, m)
        };
        match built {
            Ok(c) if c.union_set.len() <= n => best = Some(c.union_set),
            _ => break,
        }
        m += step;
    }
    best
}

/// Runs [`local_search_max`] for every size in the schedule, adding one
/// chain per construction seed (centered interval; pieced union when one
/// fits), so the reported density never falls below the seeds'.
pub fn gamma_estimate(
    form: &LinearForm,
    schedule: &[usize],
    config: &SearchConfig,
) -> Result<Vec<GammaEstimate>> {
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadParameter(
            "schedule must be nonempty and strictly ascending".into(),
        ));
    }
    if form.arity() > MAX_SEARCH_ARITY {
        return Err(Error::BadArity(format!(
            "local search supports arity <= {MAX_SEARCH_ARITY}"
        )));
    }
    let mut results = Vec::with_capacity(schedule.len());
    for &n in schedule {
        let mut seeds = vec![construct::centered_interval(n)];
        if let Some(c) = construction_seed(form, n) {
            seeds.push(c);
        }
        let lo = seeds
            .iter()
            .filter_map(|s| s.min())
            .fold(config.range_lo, i64::min);
        let hi = seeds
            .iter()
            .filter_map(|s| s.max())
            .fold(config.range_hi, i64::max);
        let cfg = SearchConfig {
            set_size: n,
            range_lo: lo,
            range_hi: hi,
            ..config.clone()
        };
        cfg.validate()?;
        let restarts = cfg.restarts as u64;
        let mut specs: Vec<(u64, ChainInit)> =
            (0..restarts).map(|r| (r, ChainInit::Random)).collect();
        for (i, seed_set) in seeds.into_iter().enumerate() {
            specs.push((restarts + i as u64, ChainInit::Seeded(seed_set)));
        }
        let outcomes: Vec<ChainOutcome> = specs
            .into_par_iter()
            .map(|(r, init)| run_chain(form, &cfg, chain_seed(cfg.seed, r), init))
            .collect::<Result<_>>()?;
        results.push(reduce_chains(form, outcomes)?);
    }
    Ok(results)
}

/// One row of the system sweep: the parameter `M` of `{x + y = z, x + My = w}`,
/// the exact solution count over `S = [0, n-1]`, and the density `count/n^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub m: i64,
    pub count: u64,
    pub density: Rational,
}

/// Counts solutions of `{x + y = z, x + My = w}` over `[0, n-1]` for each
/// requested `M`. Densities drop roughly like `1/(2M)` on intervals.
pub fn system_density_sweep(m_values: &[i64], n: usize) -> Result<Vec<SweepPoint>> {
    if n < 10 {
        return Err(Error::BadParameter("sweep needs n >= 10".into()));
    }
    let s = IntSet::interval(0, n as i64 - 1);
    let mut out = Vec::with_capacity(m_values.len());
    for &m in m_values {
        if m < 2 {
            return Err(Error::BadParameter(format!("system parameter M must be >= 2, got {m}")));
        }
        let system = LinearSystem::new(vec![vec![1, 1, -1, 0], vec![1, m, 0, -1]])?;
        let report = count_system_solutions(&system, &s)?;
        out.push(SweepPoint {
            m,
            count: report.count,
            density: report.density,
        });
    }
    Ok(out)
}
