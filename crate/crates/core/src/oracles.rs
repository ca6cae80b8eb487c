//! Instance-by-instance checks of the inequalities the counting bounds rest
//! on, plus the dilated-sumset gap measurement. Every `check_*` returns a
//! [`CheckOutcome`] whose `holds` must be true on all valid inputs: these are
//! theorems, and a false outcome is a bug in the engine, not in the input.
//!
//! Comparisons are exact. Fractional exponents (`|A|^{3/2}`, `2 - 1/(k-2)`)
//! are removed by raising both sides to the least common integer power
//! before comparing, so the reported lhs/rhs of those checks are the raised
//! values.

use crate::counting::{
    additive_energy, count_solutions_family, difference_set, dilated_sum,
};
use crate::error::{Error, Result};
use crate::model::{IntSet, LinearForm, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Outcome of one exact comparison `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub holds: bool,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl CheckOutcome {
    fn compare(lhs: Rational, rhs: Rational) -> Self {
        CheckOutcome {
            holds: lhs <= rhs,
            lhs,
            rhs,
        }
    }

    pub fn slack(&self) -> Rational {
        &self.rhs - &self.lhs
    }
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

fn big_rat(x: BigInt) -> Rational {
    Rational::from_integer(x)
}

/// `T(S1, S2, S3)^2 <= E(a1 * S1, a2 * S2) * |S3|`.
pub fn check_tnrg3(
    form: &LinearForm,
    s1: &IntSet,
    s2: &IntSet,
    s3: &IntSet,
) -> Result<CheckOutcome> {
    if form.arity() != 3 {
        return Err(Error::ArityMismatch {
            expected: 3,
            got: form.arity(),
        });
    }
    check_tnrg_k(form, &[s1, s2, s3])
}

/// `T(S1,...,Sk)^2 <= E(a1 * S1, a2 * S2) * (|S3| ... |Sk|)^{2 - 1/(k-2)}`,
/// compared with both sides raised to the power `k - 2`. At `k = 3` the
/// exponent is 1 and this is exactly the three-set bound.
pub fn check_tnrg_k(form: &LinearForm, family: &[&IntSet]) -> Result<CheckOutcome> {
    let k = form.arity();
    if family.len() != k {
        return Err(Error::ArityMismatch {
            expected: k,
            got: family.len(),
        });
    }
    let a = form.coefficients();
    let t = count_solutions_family(form, family)?.count;
    let e = additive_energy(&family[0].dilate(a[0])?, &family[1].dilate(a[1])?)?;
    let tail_product: BigInt = family[2..]
        .iter()
        .fold(BigInt::one(), |acc, s| acc * big(s.len() as u64));
    let p = k - 2;
    let lhs = num_traits::pow(big(t), 2 * p);
    let rhs = num_traits::pow(big(e), p) * num_traits::pow(tail_product, 2 * p - 1);
    Ok(CheckOutcome::compare(big_rat(lhs), big_rat(rhs)))
}

/// `T(S1, S2, S3) <= (s1 s2 + s2 s3 + s1 s3 + 1) / 4`.
pub fn check_uniform_bound3(
    form: &LinearForm,
    s1: &IntSet,
    s2: &IntSet,
    s3: &IntSet,
) -> Result<CheckOutcome> {
    if form.arity() != 3 {
        return Err(Error::ArityMismatch {
            expected: 3,
            got: form.arity(),
        });
    }
    let t = count_solutions_family(form, &[s1, s2, s3])?.count;
    let (n1, n2, n3) = (
        big(s1.len() as u64),
        big(s2.len() as u64),
        big(s3.len() as u64),
    );
    let rhs = Rational::new(&n1 * &n2 + &n2 * &n3 + &n1 * &n3 + 1, BigInt::from(4));
    Ok(CheckOutcome::compare(big_rat(big(t)), rhs))
}

/// `E(A, B) <= E(A,A)^{1/2} E(B,B)^{1/2}`, compared squared.
pub fn check_energy_cs(a: &IntSet, b: &IntSet) -> Result<CheckOutcome> {
    let eab = big(additive_energy(a, b)?);
    let eaa = big(additive_energy(a, a)?);
    let ebb = big(additive_energy(b, b)?);
    Ok(CheckOutcome::compare(big_rat(&eab * &eab), big_rat(eaa * ebb)))
}

/// The three trivial energy bounds `E <= |A|^2 |B|`, `E <= |A| |B|^2`,
/// `E <= |A|^{3/2} |B|^{3/2}`, all compared squared so the fractional one
/// stays exact; `holds` iff all three hold.
pub fn check_energy_trivial(a: &IntSet, b: &IntSet) -> Result<CheckOutcome> {
    let e = big(additive_energy(a, b)?);
    let na = big(a.len() as u64);
    let nb = big(b.len() as u64);
    let b1 = num_traits::pow(&na * &na * &nb, 2);
    let b2 = num_traits::pow(&na * &nb * &nb, 2);
    let b3 = num_traits::pow(na, 3) * num_traits::pow(nb, 3);
    let tightest = b1.min(b2).min(b3);
    Ok(CheckOutcome::compare(big_rat(&e * &e), big_rat(tightest)))
}

/// Ruzsa triangle inequality `|A - C| |B| <= |A - B| |B - C|`.
pub fn check_ruzsa(a: &IntSet, b: &IntSet, c: &IntSet) -> Result<CheckOutcome> {
    if b.is_empty() {
        return Err(Error::EmptySet("check_ruzsa"));
    }
    let ac = big(difference_set(a, c)?.len() as u64);
    let ab = big(difference_set(a, b)?.len() as u64);
    let bc = big(difference_set(b, c)?.len() as u64);
    let nb = big(b.len() as u64);
    Ok(CheckOutcome::compare(big_rat(ac * nb), big_rat(ab * bc)))
}

/// The doubling lemma `|A - B| <= (delta[A] delta[B] / eta) |A|^{1/2} |B|^{1/2}`
/// with `eta` instantiated from the measured energy,
/// `eta = E(A,B) / (|A|^{3/2} |B|^{3/2})`, so its hypothesis is saturated.
/// The algebraically equivalent integer comparison is
/// `|A - B| * E(A, B) <= |A - A| * |B - B| * |A| * |B|`.
pub fn check_gs_doubling(a: &IntSet, b: &IntSet) -> Result<CheckOutcome> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet("check_gs_doubling"));
    }
    let e = big(additive_energy(a, b)?); // >= |A||B| > 0 for nonempty sets
    let ab = big(difference_set(a, b)?.len() as u64);
    let aa = big(difference_set(a, a)?.len() as u64);
    let bb = big(difference_set(b, b)?.len() as u64);
    let na = big(a.len() as u64);
    let nb = big(b.len() as u64);
    Ok(CheckOutcome::compare(big_rat(ab * e), big_rat(aa * bb * na * nb)))
}

/// One measurement of Bukh's lower bound: how far `|l1 * S + l2 * S|` sits
/// below the linear term `(|l1| + |l2|) |S|`. The gap may be negative; the
/// unquantified `o(|S|)` term means nothing is asserted here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BukhGap {
    pub measured: u64,
    pub linear_bound: u64,
    pub gap: i64,
}

pub fn bukh_gap(l1: i64, l2: i64, s: &IntSet) -> Result<BukhGap> {
    if l1 == 0 || l2 == 0 {
        return Err(Error::ZeroDilation);
    }
    if l1.unsigned_abs().gcd(&l2.unsigned_abs()) != 1 {
        return Err(Error::NotCoprime(l1, l2));
    }
    let measured = dilated_sum(l1, l2, s)?.len() as u64;
    let linear_bound = (l1.unsigned_abs() + l2.unsigned_abs())
        .checked_mul(s.len() as u64)
        .ok_or(Error::Overflow("bukh bound"))?;
    let gap = i64::try_from(linear_bound as i128 - measured as i128)
        .map_err(|_| Error::Overflow("bukh gap"))?;
    Ok(BukhGap {
        measured,
        linear_bound,
        gap,
    })
}

/// Which randomized suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Tnrg3,
    TnrgK,
    Uniform3,
    EnergyCs,
    EnergyTrivial,
    Ruzsa,
    GsDoubling,
}

impl CheckKind {
    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::Tnrg3 => "tnrg3",
            CheckKind::TnrgK => "tnrg_k",
            CheckKind::Uniform3 => "uniform3",
            CheckKind::EnergyCs => "energy_cs",
            CheckKind::EnergyTrivial => "energy_trivial",
            CheckKind::Ruzsa => "ruzsa",
            CheckKind::GsDoubling => "gs_doubling",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub instances: u64,
    pub seed: u64,
    pub max_size: usize,
    pub value_lo: i64,
    pub value_hi: i64,
    pub max_coeff: i64,
}

impl SuiteConfig {
    pub fn new(instances: u64, seed: u64, max_size: usize) -> Self {
        SuiteConfig {
            instances,
            seed,
            max_size,
            value_lo: -1000,
            value_hi: 1000,
            max_coeff: 9,
        }
    }
}

/// A counterexample dump. Real failures are build-stopping bugs.
#[derive(Debug, Clone)]
pub struct Failure {
    pub instance: u64,
    pub description: String,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub instances: u64,
    pub failures: Vec<Failure>,
}

/// Runs `cfg.instances` independent random instances of the given check.
/// Instance `i` derives its generator from `(cfg.seed, i)`, so results do
/// not depend on how the loop is scheduled across threads.
pub fn run_check_suite(kind: CheckKind, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let failures: Vec<Option<Failure>> = (0..cfg.instances)
        .into_par_iter()
        .map(|i| run_one(kind, cfg, i))
        .collect::<Result<_>>()?;
    Ok(SuiteReport {
        name: kind.name(),
        instances: cfg.instances,
        failures: failures.into_iter().flatten().collect(),
    })
}

fn run_one(kind: CheckKind, cfg: &SuiteConfig, instance: u64) -> Result<Option<Failure>> {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(
        cfg.seed ^ instance.wrapping_mul(0x9E37_79B9_7F4A_7C15),
    ));
    let (outcome, description) = match kind {
        CheckKind::Tnrg3 => {
            let form = rand_form(&mut rng, 3, cfg.max_coeff);
            let sets = rand_sets(&mut rng, 3, cfg, 0);
            let o = check_tnrg3(&form, &sets[0], &sets[1], &sets[2])?;
            (o, format!("form {:?}, sets {sets:?}", form.coefficients()))
        }
        CheckKind::TnrgK => {
            let k = rng.gen_range(4..=5);
            let form = rand_form(&mut rng, k, cfg.max_coeff);
            let sets = rand_sets(&mut rng, k, cfg, 0);
            let refs: Vec<&IntSet> = sets.iter().collect();
            let o = check_tnrg_k(&form, &refs)?;
            (o, format!("form {:?}, sets {sets:?}", form.coefficients()))
        }
        CheckKind::Uniform3 => {
            let form = rand_form(&mut rng, 3, cfg.max_coeff);
            let sets = rand_sets(&mut rng, 3, cfg, 0);
            let o = check_uniform_bound3(&form, &sets[0], &sets[1], &sets[2])?;
            (o, format!("form {:?}, sets {sets:?}", form.coefficients()))
        }
        CheckKind::EnergyCs => {
            let sets = rand_sets(&mut rng, 2, cfg, 0);
            let o = check_energy_cs(&sets[0], &sets[1])?;
            (o, format!("sets {sets:?}"))
        }
        CheckKind::EnergyTrivial => {
            let sets = rand_sets(&mut rng, 2, cfg, 0);
            let o = check_energy_trivial(&sets[0], &sets[1])?;
            (o, format!("sets {sets:?}"))
        }
        CheckKind::Ruzsa => {
            let a = rand_set(&mut rng, cfg, 0);
            let b = rand_set(&mut rng, cfg, 1);
            let c = rand_set(&mut rng, cfg, 0);
            let o = check_ruzsa(&a, &b, &c)?;
            (o, format!("sets [{a:?}, {b:?}, {c:?}]"))
        }
        CheckKind::GsDoubling => {
            let a = rand_set(&mut rng, cfg, 1);
            let b = rand_set(&mut rng, cfg, 1);
            let o = check_gs_doubling(&a, &b)?;
            (o, format!("sets [{a:?}, {b:?}]"))
        }
    };
    if outcome.holds {
        Ok(None)
    } else {
        Ok(Some(Failure {
            instance,
            description: format!(
                "{description}: lhs = {} > rhs = {}",
                outcome.lhs, outcome.rhs
            ),
        }))
    }
}

fn rand_set(rng: &mut ChaCha8Rng, cfg: &SuiteConfig, min_size: usize) -> IntSet {
    let size = rng.gen_range(min_size..=cfg.max_size.max(min_size));
    IntSet::new((0..size).map(|_| rng.gen_range(cfg.value_lo..=cfg.value_hi)))
}

fn rand_sets(rng: &mut ChaCha8Rng, k: usize, cfg: &SuiteConfig, min_size: usize) -> Vec<IntSet> {
    (0..k).map(|_| rand_set(rng, cfg, min_size)).collect()
}

fn rand_form(rng: &mut ChaCha8Rng, k: usize, max_coeff: i64) -> LinearForm {
    loop {
        let coeffs: Vec<i64> = (0..k)
            .map(|_| {
                let mag = rng.gen_range(1..=max_coeff);
                if rng.gen_bool(0.5) {
                    mag
                } else {
                    -mag
                }
            })
            .collect();
        if let Ok(f) = LinearForm::new(&coeffs) {
            return f;
        }
    }
}

pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// One point of the dilated-sumset sweep over centered-at-zero intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BukhMeasurement {
    pub lambda: (i64, i64),
    pub n: u64,
    pub measured: u64,
    pub linear_bound: u64,
    pub gap: i64,
}

/// Measures `bukh_gap` for the intervals `[0, n-1]` at every requested size.
pub fn bukh_interval_sweep(
    pairs: &[(i64, i64)],
    sizes: &[u64],
) -> Result<Vec<BukhMeasurement>> {
    let mut out = Vec::with_capacity(pairs.len() * sizes.len());
    for &(l1, l2) in pairs {
        for &n in sizes {
            let s = IntSet::interval(0, n as i64 - 1);
            let g = bukh_gap(l1, l2, &s)?;
            out.push(BukhMeasurement {
                lambda: (l1, l2),
                n,
                measured: g.measured,
                linear_bound: g.linear_bound,
                gap: g.gap,
            });
        }
    }
    Ok(out)
}

/// For each lambda pair, the gap should stabilize to a constant once the
/// interval is long enough; reports any measurement with `n >= min_n` whose
/// gap differs from the gap at the largest tested size.
pub fn bukh_gap_violations(measurements: &[BukhMeasurement], min_n: u64) -> Vec<String> {
    let mut violations = Vec::new();
    let mut pairs: Vec<(i64, i64)> = measurements.iter().map(|m| m.lambda).collect();
    pairs.sort_unstable();
    pairs.dedup();
    for lambda in pairs {
        let of_pair: Vec<&BukhMeasurement> = measurements
            .iter()
            .filter(|m| m.lambda == lambda && m.n >= min_n)
            .collect();
        let Some(last) = of_pair.iter().max_by_key(|m| m.n) else {
            continue;
        };
        for m in &of_pair {
            if m.gap != last.gap {
                violations.push(format!(
                    "lambda {:?}: gap {} at n = {} vs {} at n = {}",
                    lambda, m.gap, m.n, last.gap, last.n
                ));
            }
        }
    }
    violations
}
