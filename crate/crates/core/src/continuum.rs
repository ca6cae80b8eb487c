//! Continuum quantities: the convolution values `Phi_k(t_1, ..., t_k)` of
//! centered interval indicators at 0, the constants `sigma_k = Phi_k(1,...,1)`,
//! the rescaling `Theta`, and an independent numerical route to `sigma_k`
//! through the sinc-power integral.
//!
//! `phi3`, `phi_k`, `theta` and `sigma_exact` are exact rational arithmetic
//! throughout: the alternating 2^k sign sum cancels catastrophically in
//! floating point. Floats appear only in the quadrature and the asymptotic.

use crate::error::{Error, Result};
use crate::model::Rational;
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The general sign-vector sum has 2^k terms; beyond this arity callers get
/// an explicit error instead of an intractable computation.
pub const MAX_PHI_ARITY: usize = 30;

/// Largest `k` accepted by [`sigma_exact`], which uses the binomially grouped
/// form of the sum and therefore scales to large arity.
pub const MAX_SIGMA_ARITY: usize = 512;

/// Validated argument pack for `Phi_k`: at least three positive widths.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiArgs {
    widths: Vec<Rational>,
}

impl PhiArgs {
    pub fn new(widths: Vec<Rational>) -> Result<Self> {
        if widths.len() < 3 || widths.len() > MAX_PHI_ARITY {
            return Err(Error::BadArity(format!(
                "Phi takes between 3 and {MAX_PHI_ARITY} widths, got {}",
                widths.len()
            )));
        }
        if widths.iter().any(|t| !t.is_positive()) {
            return Err(Error::NonPositiveWidth);
        }
        Ok(PhiArgs { widths })
    }

    pub fn widths(&self) -> &[Rational] {
        &self.widths
    }

    pub fn arity(&self) -> usize {
        self.widths.len()
    }
}

/// `(I_{t1} * I_{t2} * I_{t3})(0)` via the two-branch closed form: after
/// sorting `t1 <= t2 <= t3`, the value is `t1 t2` when `t3 >= t1 + t2` and
/// `(2(t1 t2 + t2 t3 + t1 t3) - (t1^2 + t2^2 + t3^2)) / 4` otherwise.
pub fn phi3(t1: &Rational, t2: &Rational, t3: &Rational) -> Result<Rational> {
    if !t1.is_positive() || !t2.is_positive() || !t3.is_positive() {
        return Err(Error::NonPositiveWidth);
    }
    let mut t = [t1.clone(), t2.clone(), t3.clone()];
    t.sort();
    let [a, b, c] = t;
    if c >= &a + &b {
        Ok(&a * &b)
    } else {
        let cross = &a * &b + &b * &c + &a * &c;
        let squares = &a * &a + &b * &b + &c * &c;
        Ok((cross * BigInt::from(2) - squares) / BigInt::from(4))
    }
}

/// `Phi_k` through the sign-vector sum
/// `(1/((k-1)! 2^k)) * sum_{eps in {-1,1}^k} omega(eps) (eps.t)^{k-1} sgn(eps.t)`
/// with `omega(eps) = prod_i eps_i` and `sgn(0) = 0`.
///
/// Denominators are cleared once so the 2^k walk (in Gray-code order, one
/// update per step) runs on plain integers.
pub fn phi_k(args: &PhiArgs) -> Rational {
    let k = args.arity();
    let denom_lcm = args
        .widths
        .iter()
        .fold(BigInt::one(), |acc, t| acc.lcm(t.denom()));
    let scaled: Vec<BigInt> = args
        .widths
        .iter()
        .map(|t| t.numer() * (&denom_lcm / t.denom()))
        .collect();

    let mut s: BigInt = scaled.iter().sum(); // all eps_i = +1
    let mut negatives = 0u32; // popcount of the current mask
    let mut total = BigInt::zero();
    let steps: u64 = 1 << k;
    for i in 0..steps {
        if i > 0 {
            let bit = i.trailing_zeros() as usize;
            let gray = i ^ (i >> 1);
            let two_u = &scaled[bit] * BigInt::from(2);
            if gray >> bit & 1 == 1 {
                s -= two_u;
                negatives += 1;
            } else {
                s += two_u;
                negatives -= 1;
            }
        }
        let term = match s.sign() {
            Sign::NoSign => continue,
            Sign::Plus => num_traits::pow(s.clone(), k - 1),
            Sign::Minus => -num_traits::pow(s.clone(), k - 1),
        };
        if negatives.is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    let denominator =
        factorial(k - 1) * num_traits::pow(BigInt::from(2), k) * num_traits::pow(denom_lcm, k - 1);
    Rational::new(total, denominator)
}

/// `sigma_k = Phi_k(1, ..., 1)`, evaluated through the binomial grouping of
/// the sign sum (equal widths make all eps with the same number of minus
/// signs contribute identically), so large `k` stays cheap.
pub fn sigma_exact(k: usize) -> Result<Rational> {
    if !(3..=MAX_SIGMA_ARITY).contains(&k) {
        return Err(Error::BadArity(format!(
            "sigma_exact takes 3 <= k <= {MAX_SIGMA_ARITY}, got {k}"
        )));
    }
    let mut total = BigInt::zero();
    let mut binom = BigInt::one(); // C(k, j)
    for j in 0..=k {
        let x = k as i64 - 2 * j as i64;
        if x != 0 {
            let p = num_traits::pow(BigInt::from(x), k - 1);
            let signed = if x > 0 { p } else { -p };
            let term = &binom * signed;
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
    }
    let denominator = factorial(k - 1) * num_traits::pow(BigInt::from(2), k);
    Ok(Rational::new(total, denominator))
}

/// Numerical `sigma_k` from `int (sin(pi x) / (pi x))^k dx`.
///
/// Uses evenness, adaptive Simpson on unit subintervals of `[0, X]`, and the
/// majorant `|sinc(pi x)| <= 1/(pi x)` for the tail: `X` is chosen so
/// `2 / ((k-1) pi^k X^{k-1}) < tol/4`, the quadrature gets `tol/2`, and the
/// remainder is slack.
pub fn sigma_quadrature(k: usize, tol: f64) -> Result<f64> {
    if k < 3 {
        return Err(Error::BadArity(format!("sigma_quadrature needs k >= 3, got {k}")));
    }
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::ToleranceNotAchieved("tolerance must be positive and finite".into()));
    }
    let kf = k as f64;
    let pi_pow_k = std::f64::consts::PI.powi(k as i32);
    let x_cut = (8.0 / ((kf - 1.0) * pi_pow_k * tol))
        .powf(1.0 / (kf - 1.0))
        .max(2.0);
    let pieces = x_cut.ceil() as usize;
    let budget = tol / 2.0 / pieces as f64;
    let f = |x: f64| sinc_pi(x).powi(k as i32);
    let mut total = 0.0;
    for j in 0..pieces {
        total += adaptive_simpson(&f, j as f64, (j + 1) as f64, budget, 48)?;
    }
    Ok(2.0 * total)
}

fn sinc_pi(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

/// `sqrt(6 / (k pi))`, the leading term of `sigma_k` as `k` grows.
pub fn sigma_asymptotic(k: usize) -> f64 {
    (6.0 / (k as f64 * std::f64::consts::PI)).sqrt()
}

/// `Theta(t_1, ..., t_k) = t_1 ... t_k * Phi(1/t_1, ..., 1/t_k)`.
pub fn theta(args: &PhiArgs) -> Rational {
    let inverted: Vec<Rational> = args.widths.iter().map(|t| t.recip()).collect();
    let inv_args = PhiArgs::new(inverted).expect("inverted positive widths stay valid");
    let product = args.widths.iter().fold(Rational::one(), |acc, t| acc * t);
    product * phi_k(&inv_args)
}

/// Random search for an odd-`k` counterexample to the even-`k` bound
/// `Phi_k(t) <= sigma_k * (prod t_i)^{1 - 1/k}` (compared with both sides
/// raised to the k-th power). Returns the first violating width tuple, if
/// any; this is an experiment, not an assertion.
pub fn holder_counterexample_search(
    k: usize,
    instances: u64,
    seed: u64,
) -> Result<Option<Vec<Rational>>> {
    let sigma = sigma_exact(k)?;
    let sigma_pow_k = num_traits::pow(sigma, k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..instances {
        let widths: Vec<Rational> = (0..k)
            .map(|_| {
                Rational::new(
                    BigInt::from(rng.gen_range(1..=20i64)),
                    BigInt::from(rng.gen_range(1..=10i64)),
                )
            })
            .collect();
        let args = PhiArgs::new(widths.clone())?;
        let phi = phi_k(&args);
        let lhs = num_traits::pow(phi, k);
        let prod = widths.iter().fold(Rational::one(), |acc, t| acc * t);
        let rhs = &sigma_pow_k * num_traits::pow(prod, k - 1);
        if lhs > rhs {
            return Ok(Some(widths));
        }
    }
    Ok(None)
}

/// Lossy conversion for reporting; exact math should stay in [`Rational`].
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    eps: f64,
    max_depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    adapt(f, a, b, fa, fm, fb, whole, eps, max_depth)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * eps {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::ToleranceNotAchieved(format!(
            "adaptive refinement exhausted on [{a}, {b}]"
        )));
    }
    let half = 0.5 * eps;
    Ok(adapt(f, a, m, fa, flm, fm, left, half, depth - 1)?
        + adapt(f, m, b, fm, frm, fb, right, half, depth - 1)?)
}
