//! Exact and asymptotic enumeration of accessible complete automata and
//! their stack-output decorations.
//!
//! Exact counts are [`BigUint`]s. Asymptotic estimates are evaluated in log
//! space and only serve as validation of the exact formulas.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::alphabet::Alphabets;
use crate::error::{invalid, Result};

/// Arbitrary-precision nonnegative count.
pub type ExactCount = BigUint;

/// Rational output length per transition (λ = m / s).
pub type Lambda = Ratio<u64>;

/// Stirling number of the second kind `S(n, k)`.
pub fn stirling2(n: usize, k: usize) -> ExactCount {
    if k > n {
        return BigUint::zero();
    }
    // row[j] = S(i, j) for the current i, only j <= k is needed
    let mut row = vec![BigUint::zero(); k + 1];
    row[0] = BigUint::one();
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            let prev = std::mem::take(&mut row[j]);
            row[j] = prev * j + &row[j - 1];
        }
        row[0] = BigUint::zero();
    }
    row.swap_remove(k)
}

pub fn binomial(n: u64, k: u64) -> ExactCount {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> ExactCount {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Number of ways to give `s` ordered transitions output words over a
/// `beta`-letter stack alphabet with total length `m`: `β^m · C(s+m−1, m)`.
pub fn count_decorations(s: u64, m: u64, beta: u64) -> ExactCount {
    if s == 0 {
        return if m == 0 {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    BigUint::from(beta).pow(m as u32) * binomial(s + m - 1, m)
}

/// `A_j` for `j = 1..=n`: labelled accessible complete structures on `j`
/// states over `k` letters with a fixed initial state.
///
/// Splitting all `n^{kn}` structures by their accessible part gives
/// `n^{kn} = Σ_j C(n−1, j−1) · A_j · n^{k(n−j)}`.
pub fn labelled_accessible_counts(n: usize, k: usize) -> Vec<ExactCount> {
    let mut a: Vec<BigUint> = Vec::with_capacity(n);
    for size in 1..=n {
        let big = BigUint::from(size);
        let total = big.pow((k * size) as u32);
        let mut rest = BigUint::zero();
        for j in 1..size {
            rest += binomial((size - 1) as u64, (j - 1) as u64)
                * &a[j - 1]
                * big.pow((k * (size - j)) as u32);
        }
        a.push(total - rest);
    }
    a
}

/// Number of isomorphism classes of accessible complete deterministic
/// structures with `n` states over `k` letters.
///
/// Accessible deterministic automata have no non-trivial automorphism, so
/// every class has exactly `(n−1)!` labellings with initial state 0.
pub fn count_accessible_dfa_classes(n: usize, k: usize) -> ExactCount {
    assert!(n >= 1 && k >= 1, "n and k must be positive");
    let labelled = labelled_accessible_counts(n, k).pop().unwrap();
    let (q, r) = labelled.div_rem(&factorial(n as u64 - 1));
    debug_assert!(r.is_zero());
    q
}

/// Number of complete accessible RDPDA classes with `n` states and output
/// size `m` (final states not counted).
pub fn count_rdpda(n: usize, m: u64, alphabets: &Alphabets) -> ExactCount {
    let rho = alphabets.rho();
    count_accessible_dfa_classes(n, rho)
        * count_decorations((rho * n) as u64, m, alphabets.beta() as u64)
}

/// Natural logarithm of a big integer, exact to double precision.
pub fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// A `(1+o(1))` estimate, stored as its natural logarithm.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticEstimate {
    pub ln_value: f64,
    /// Saddle point ζ = λ / (β(λ+1)).
    pub zeta: f64,
    /// ξ = (λ+1)³β² / λ.
    pub xi: f64,
    pub regime: String,
}

impl AsymptoticEstimate {
    /// May be `inf` for very large parameters; use `ln_value` then.
    pub fn value(&self) -> f64 {
        self.ln_value.exp()
    }

    /// Value in scientific notation computed from the logarithm, valid past
    /// the `f64` range.
    pub fn scientific(&self) -> String {
        let log10 = self.ln_value / std::f64::consts::LN_10;
        let exp = log10.floor();
        let mantissa = 10f64.powf(log10 - exp);
        format!("{mantissa:.6}e{exp}")
    }
}

fn lambda_f64(lambda: Lambda) -> f64 {
    *lambda.numer() as f64 / *lambda.denom() as f64
}

fn integral_size(lambda: Lambda, s: u64) -> Result<u64> {
    if *lambda.numer() == 0 {
        return Err(invalid("lambda must be positive"));
    }
    let m = lambda * Ratio::from_integer(s);
    if !m.is_integer() {
        return Err(invalid(format!("lambda*s = {lambda}*{s} is not an integer")));
    }
    Ok(m.to_integer())
}

pub fn saddle_point(lambda: Lambda, beta: u64) -> f64 {
    let l = lambda_f64(lambda);
    l / (beta as f64 * (l + 1.0))
}

pub fn saddle_curvature(lambda: Lambda, beta: u64) -> f64 {
    let l = lambda_f64(lambda);
    (l + 1.0).powi(3) * (beta * beta) as f64 / l
}

/// Closed-form estimate of `[z^{λs}] (1/(1−βz))^s`:
/// `(λ+1)^{(λ+1)s−1/2} β^{λs} / (λ^{λs+1/2} √(2πs))`.
pub fn asymptotic_decorations(lambda: Lambda, s: u64, beta: u64) -> Result<AsymptoticEstimate> {
    let m = integral_size(lambda, s)?;
    let l = lambda_f64(lambda);
    let (s_f, m_f) = (s as f64, m as f64);
    let ln_value = ((l + 1.0) * s_f - 0.5) * (l + 1.0).ln() + m_f * (beta as f64).ln()
        - (m_f + 0.5) * l.ln()
        - 0.5 * (2.0 * PI * s_f).ln();
    Ok(AsymptoticEstimate {
        ln_value,
        zeta: saddle_point(lambda, beta),
        xi: saddle_curvature(lambda, beta),
        regime: "saddle point, C(z)=1/(1-beta z), infinite spread, m = lambda s".into(),
    })
}

/// General saddle-point form `C(ζ)^s / (ζ^{m+1} √(2π s ξ))` with
/// `C(z) = 1/(1−βz)` and ξ evaluated as the second derivative of
/// `log C(z) − λ log z` at ζ.
pub fn saddle_point_estimate(lambda: Lambda, s: u64, beta: u64) -> Result<AsymptoticEstimate> {
    let m = integral_size(lambda, s)?;
    let l = lambda_f64(lambda);
    let b = beta as f64;
    let zeta = saddle_point(lambda, beta);
    let ln_c = -(1.0 - b * zeta).ln();
    let xi = b * b / (1.0 - b * zeta).powi(2) + l / (zeta * zeta);
    let ln_value =
        s as f64 * ln_c - (m as f64 + 1.0) * zeta.ln() - 0.5 * (2.0 * PI * s as f64 * xi).ln();
    Ok(AsymptoticEstimate {
        ln_value,
        zeta,
        xi,
        regime: "saddle point (general form), infinite spread".into(),
    })
}

/// Estimate of the number of complete accessible RDPDA with `n` states and
/// output size `λρn`, given the constant `γ_ρ` of the DFA asymptotics.
pub fn asymptotic_rdpda(
    lambda: Lambda,
    n: usize,
    alphabets: &Alphabets,
    gamma_rho: f64,
) -> Result<AsymptoticEstimate> {
    if !(gamma_rho > 0.0 && gamma_rho.is_finite()) {
        return Err(invalid("gamma_rho must be a positive real"));
    }
    let rho = alphabets.rho();
    let s = (rho * n) as u64;
    let dec = asymptotic_decorations(lambda, s, alphabets.beta() as u64)?;
    let dfa = gamma_rho.ln() + (n as f64).ln() + ln_big(&stirling2(rho * n, n));
    Ok(AsymptoticEstimate {
        ln_value: dfa + dec.ln_value,
        regime: format!(
            "gamma_rho * n * S(rho n, n) times decoration estimate (gamma_rho = {gamma_rho})"
        ),
        ..dec
    })
}

/// Empirical `γ_ρ ≈ |classes| / (n · S(ρn, n))` at a given `n`.
pub fn estimate_gamma_rho(n: usize, rho: usize) -> f64 {
    let classes = count_accessible_dfa_classes(n, rho);
    (ln_big(&classes) - (n as f64).ln() - ln_big(&stirling2(rho * n, n))).exp()
}

/// Mean number of pop transitions over all decorations of `s` transitions
/// with output size `m`: `s(s−1)/(s+m−1)` (and `s` when `m = 0`).
pub fn avg_pop_transitions(s: u64, m: u64) -> Ratio<u64> {
    if m == 0 {
        return Ratio::from_integer(s);
    }
    Ratio::new(s * s.saturating_sub(1), s + m - 1)
}

/// Lower bound `(s−1) / (2β(s+m−1))` on the probability that a uniform
/// accessible RDPDA accepts a non-empty language.
pub fn nonempty_lower_bound(s: u64, m: u64, beta: u64) -> Ratio<u64> {
    if s <= 1 {
        return Ratio::from_integer(0);
    }
    Ratio::new(s - 1, 2 * beta * (s + m - 1))
}
