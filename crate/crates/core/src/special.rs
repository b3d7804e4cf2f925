//! Special functions behind the interval quantiles: log-gamma, log-beta,
//! regularized incomplete beta and gamma, and the normal and Student-t
//! distribution functions with their inverses.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_ITER: usize = 20_000;
const STIRLING_CUTOFF: f64 = 10.0;
const SERIES_LIMIT: f64 = 3.0;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Remainder of Stirling's series, lnΓ(x) − [(x−½)ln x − x + ½ln 2π].
fn stirling_remainder<T: Scalar>(x: T) -> T {
    let r = x.recip();
    let r2 = r * r;
    r * (T::lit(1.0 / 12.0)
        - r2 * (T::lit(1.0 / 360.0)
            - r2 * (T::lit(1.0 / 1260.0) - r2 * (T::lit(1.0 / 1680.0) - r2 * T::lit(1.0 / 1188.0)))))
}

fn half_ln_two_pi<T: Scalar>() -> T {
    T::lit(0.918_938_533_204_672_8)
}

/// Natural log of Γ(x) for x > 0.
pub fn ln_gamma<T: Scalar>(x: T) -> T {
    if x < T::lit(0.5) {
        return ln_gamma(x + T::one()) - x.ln();
    }
    if x >= T::lit(STIRLING_CUTOFF) {
        return (x - T::lit(0.5)) * x.ln() - x + half_ln_two_pi::<T>() + stirling_remainder(x);
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += T::lit(c) / (x + T::from_usize_lossy(i));
    }
    let t = x + T::lit(LANCZOS_G + 0.5);
    half_ln_two_pi::<T>() + (x + T::lit(0.5)) * t.ln() - t + acc.ln()
}

/// Natural log of B(a, b), avoiding the cancellation of three large
/// log-gammas when either argument is big.
pub fn ln_beta<T: Scalar>(a: T, b: T) -> T {
    let (small, large) = if a < b { (a, b) } else { (b, a) };
    let cutoff = T::lit(STIRLING_CUTOFF);
    if large < cutoff {
        return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
    }
    let sum = small + large;
    if small >= cutoff {
        return half_ln_two_pi::<T>() + (small - T::lit(0.5)) * (small / sum).ln()
            + large * (large / sum).ln()
            - T::lit(0.5) * large.ln()
            + stirling_remainder(small)
            + stirling_remainder(large)
            - stirling_remainder(sum);
    }
    // lnΓ(large) − lnΓ(large + small) from Stirling's series
    let ratio = -(large - T::lit(0.5)) * (small / large).ln_1p() - small * sum.ln()
        + small
        + stirling_remainder(large)
        - stirling_remainder(sum);
    ln_gamma(small) + ratio
}

/// Regularized incomplete beta I_x(a, b), taking both `x` and `y = 1 − x` so
/// callers can supply the smaller of the two without rounding loss.
pub fn beta_inc<T: Scalar>(a: T, b: T, x: T, y: T) -> Result<T> {
    if !(a > T::zero() && b > T::zero()) {
        return Err(Error::InvalidArgument(format!("beta_inc needs a, b > 0, got {a}, {b}")));
    }
    if !(x >= T::zero() && y >= T::zero()) || ((x + y) - T::one()).abs() > T::lit(4.0) * T::epsilon() {
        return Err(Error::InvalidArgument(format!("beta_inc needs x in [0, 1], got {x}")));
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    if y == T::zero() {
        return Ok(T::one());
    }
    // power series wherever it converges without heavy cancellation
    if x <= y && b * x <= T::lit(SERIES_LIMIT) {
        return beta_inc_series(a, b, x, y);
    }
    if y < x && a * y <= T::lit(SERIES_LIMIT) {
        return Ok(T::one() - beta_inc_series(b, a, y, x)?);
    }
    let two = T::lit(2.0);
    if x > (a + T::one()) / (a + b + two) {
        Ok(T::one() - beta_inc_cf(b, a, y, x)?)
    } else {
        beta_inc_cf(a, b, x, y)
    }
}

fn ln_accurate<T: Scalar>(v: T, complement: T) -> T {
    if v > T::lit(0.5) {
        (-complement).ln_1p()
    } else {
        v.ln()
    }
}

/// Power series I_x(a, b) = x^a/B(a, b) · [1/a + Σ_{j≥1} (1−b)(2−b)…(j−b)/j! · x^j/(a+j)].
fn beta_inc_series<T: Scalar>(a: T, b: T, x: T, y: T) -> Result<T> {
    let ln_prefix = a * ln_accurate(x, y) - ln_beta(a, b);
    let mut sum = T::zero();
    let mut coef = T::one();
    for j in 1..=MAX_ITER {
        let jt = T::from_usize_lossy(j);
        coef *= (jt - b) * x / jt;
        let term = coef / (a + jt);
        sum += term;
        if term.abs() <= T::epsilon() * (a.recip() + sum).abs() {
            return Ok(ln_prefix.exp() * (a.recip() + sum));
        }
    }
    Err(Error::Numerical(format!("incomplete beta series did not converge for a={a}, b={b}, x={x}")))
}

/// Continued fraction for I_x(a, b), modified Lentz evaluation.
fn beta_inc_cf<T: Scalar>(a: T, b: T, x: T, y: T) -> Result<T> {
    let one = T::one();
    let two = T::lit(2.0);
    let tiny = T::min_positive_value() / T::epsilon();
    let eps = T::epsilon();

    let ln_prefix = a * ln_accurate(x, y) + b * ln_accurate(y, x) - ln_beta(a, b);
    let prefix = ln_prefix.exp() / a;

    let qab = a + b;
    let qap = a + one;
    let qam = a - one;
    let clamp = |v: T| if v.abs() < tiny { tiny } else { v };

    let mut c = one;
    // 1 − (a+b)x/(a+1), written with y to avoid cancellation when x → 1
    let mut d = clamp((one - b + qab * y) / qap).recip();
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = T::from_usize_lossy(m);
        let m2 = two * m;
        let even = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = clamp(one + even * d).recip();
        c = clamp(one + even / c);
        h *= d * c;

        let odd = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = clamp(one + odd * d).recip();
        c = clamp(one + odd / c);
        let step = d * c;
        h *= step;
        if (step - one).abs() <= eps {
            return Ok(prefix * h);
        }
    }
    Err(Error::Numerical(format!("incomplete beta did not converge for a={a}, b={b}, x={x}")))
}

/// Upper regularized incomplete gamma Q(a, x).
pub fn gamma_q<T: Scalar>(a: T, x: T) -> Result<T> {
    if a.is_nan() || a <= T::zero() || x.is_nan() || x < T::zero() {
        return Err(Error::InvalidArgument(format!("gamma_q needs a > 0, x ≥ 0, got {a}, {x}")));
    }
    if x == T::zero() {
        return Ok(T::one());
    }
    let ln_prefix = a * x.ln() - x - ln_gamma(a);
    if x < a + T::one() {
        // series for P(a, x)
        let mut term = a.recip();
        let mut sum = term;
        let mut ap = a;
        for _ in 0..MAX_ITER {
            ap += T::one();
            term *= x / ap;
            sum += term;
            if term.abs() <= sum.abs() * T::epsilon() {
                return Ok(T::one() - sum * ln_prefix.exp());
            }
        }
    } else {
        let tiny = T::min_positive_value() / T::epsilon();
        let mut b = x + T::one() - a;
        let mut c = tiny.recip();
        let mut d = b.recip();
        let mut h = d;
        for i in 1..=MAX_ITER {
            let i = T::from_usize_lossy(i);
            let an = -i * (i - a);
            b += T::lit(2.0);
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = d.recip();
            let step = d * c;
            h *= step;
            if (step - T::one()).abs() <= T::epsilon() {
                return Ok(ln_prefix.exp() * h);
            }
        }
    }
    Err(Error::Numerical(format!("incomplete gamma did not converge for a={a}, x={x}")))
}

/// Complementary error function.
pub fn erfc<T: Scalar>(x: T) -> T {
    let half = T::lit(0.5);
    let q = gamma_q(half, x * x).expect("gamma_q(1/2, x²) is always in domain");
    if x >= T::zero() {
        q
    } else {
        T::lit(2.0) - q
    }
}

pub fn normal_cdf<T: Scalar>(x: T) -> T {
    T::lit(0.5) * erfc(-x * T::lit(std::f64::consts::FRAC_1_SQRT_2))
}

fn normal_pdf<T: Scalar>(x: T) -> T {
    T::lit(0.398_942_280_401_432_7) * (-(x * x) / T::lit(2.0)).exp()
}

/// Rational approximation to the lower-tail normal quantile (p ≤ ½),
/// relative error about 1e-9 before refinement.
fn normal_quantile_guess(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e1,
        2.209460984245205e2,
        -2.759285104469687e2,
        1.38357751867269e2,
        -3.066479806614716e1,
        2.506628277459239,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e1,
        1.615858368580409e2,
        -1.556989798598866e2,
        6.680131188771972e1,
        -1.328068155288572e1,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-3,
        -3.223964580411365e-1,
        -2.400758277161838,
        -2.549732539343734,
        4.374664141464968,
        2.938163982698783,
    ];
    const D: [f64; 4] = [7.784695709041462e-3, 3.224671290700398e-1, 2.445134137142996, 3.754408661907416];
    if p < 0.02425 {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

fn check_probability<T: Scalar>(p: T) -> Result<()> {
    if !(p > T::zero() && p < T::one()) {
        return Err(Error::InvalidArgument(format!("probability must lie in (0, 1), got {p}")));
    }
    Ok(())
}

/// Standard normal quantile, refined with Halley steps on [`normal_cdf`].
pub fn normal_quantile<T: Scalar>(p: T) -> Result<T> {
    check_probability(p)?;
    if p == T::lit(0.5) {
        return Ok(T::zero());
    }
    let lower = p.min(T::one() - p);
    let mut x = T::lit(normal_quantile_guess(lower.to_f64().unwrap_or(0.5)));
    for _ in 0..8 {
        let e = normal_cdf(x) - lower;
        let u = e / normal_pdf(x);
        let next = x - u / (T::one() + x * u / T::lit(2.0));
        let done = (next - x).abs() <= T::epsilon() * x.abs();
        x = next;
        if done {
            break;
        }
    }
    Ok(if p < T::lit(0.5) { x } else { -x })
}

fn df_scalar<T: Scalar>(df: u64) -> T {
    T::from_u64(df).expect("degrees of freedom representable")
}

/// P(T > t) for t ≥ 0 under Student's t with `df` degrees of freedom.
fn t_upper_tail<T: Scalar>(t: T, df: T) -> Result<T> {
    let t2 = t * t;
    let denom = df + t2;
    Ok(T::lit(0.5) * beta_inc(df / T::lit(2.0), T::lit(0.5), df / denom, t2 / denom)?)
}

fn t_pdf<T: Scalar>(t: T, df: T) -> T {
    let half = T::lit(0.5);
    let ln_norm = -ln_beta(df * half, half) - half * df.ln();
    (ln_norm - (df + T::one()) * half * (t * t / df).ln_1p()).exp()
}

/// Student-t cumulative distribution function.
pub fn t_cdf<T: Scalar>(t: T, df: u64) -> Result<T> {
    if df == 0 {
        return Err(Error::InvalidArgument("degrees of freedom must be at least 1".into()));
    }
    if t.is_nan() {
        return Err(Error::InvalidArgument("t is NaN".into()));
    }
    let tail = t_upper_tail(t.abs(), df_scalar(df))?;
    Ok(if t > T::zero() { T::one() - tail } else { tail })
}

/// Student-t quantile: the `q` with `t_cdf(q, df) = p`.
///
/// Starts from a Cornish-Fisher expansion around the normal quantile and
/// refines with Newton steps on the incomplete-beta tail, falling back to
/// bisection whenever a step leaves the current bracket.
pub fn t_quantile<T: Scalar>(p: T, df: u64) -> Result<T> {
    check_probability(p)?;
    if df == 0 {
        return Err(Error::InvalidArgument("degrees of freedom must be at least 1".into()));
    }
    if p == T::lit(0.5) {
        return Ok(T::zero());
    }
    let nu = df_scalar::<T>(df);
    let tail = p.min(T::one() - p);

    let z = -normal_quantile(tail)?;
    let inv = nu.recip();
    let z2 = z * z;
    let guess = z
        + z * (z2 + T::one()) * inv / T::lit(4.0)
        + z * ((T::lit(5.0) * z2 + T::lit(16.0)) * z2 + T::lit(3.0)) * inv * inv / T::lit(96.0);

    let mut lo = T::zero();
    let mut hi = guess.max(T::one());
    while t_upper_tail(hi, nu)? > tail {
        lo = hi;
        hi *= T::lit(2.0);
        if !hi.is_finite() {
            return Err(Error::Numerical(format!("t quantile overflow for p={p}, df={df}")));
        }
    }

    let mut t = if guess > lo && guess < hi { guess } else { (lo + hi) / T::lit(2.0) };
    for _ in 0..500 {
        let f = t_upper_tail(t, nu)? - tail;
        if f > T::zero() {
            lo = t;
        } else {
            hi = t;
        }
        let mut next = t + f / t_pdf(t, nu);
        if !(next > lo && next < hi) {
            next = (lo + hi) / T::lit(2.0);
        }
        let step = (next - t).abs();
        t = next;
        if step <= T::lit(4.0) * T::epsilon() * t.max(T::one()) || hi - lo <= T::epsilon() * hi {
            break;
        }
    }
    Ok(if p > T::lit(0.5) { t } else { -t })
}
