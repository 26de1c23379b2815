//! Special functions behind the test p-values: log-gamma, the
//! regularized incomplete beta and gamma functions, and the normal and
//! Student t distribution functions built on them.
//!
//! Series and continued fractions iterate to the scalar's own epsilon,
//! giving absolute error well below 1e-10 in f64 (checked against an
//! independent reference in the unit tests).

use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
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

const MAX_ITER: usize = 400;

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma<R: Real>(x: R) -> R {
    let half = R::c(0.5);
    if x < half {
        // reflection: Γ(x)Γ(1−x) = π / sin(πx)
        let pi = R::c(std::f64::consts::PI);
        return (pi / (pi * x).sin()).ln() - ln_gamma(R::one() - x);
    }
    let x = x - R::one();
    let mut acc = R::c(LANCZOS_COEF[0]);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += R::c(c) / (x + R::c(i as f64));
    }
    let t = x + R::c(LANCZOS_G) + half;
    let sqrt_2pi = R::c((2.0 * std::f64::consts::PI).sqrt());
    (sqrt_2pi * acc).ln() + (x + half) * t.ln() - t
}

/// Continued fraction for the incomplete beta (modified Lentz).
fn beta_cf<R: Real>(a: R, b: R, x: R) -> R {
    let one = R::one();
    let two = R::c(2.0);
    let tiny = R::c(1e-300).max(R::min_positive_value());
    let eps = R::epsilon();

    let qab = a + b;
    let qap = a + one;
    let qam = a - one;
    let mut c = one;
    let mut d = one - qab * x / qap;
    if d.abs() < tiny {
        d = tiny;
    }
    d = one / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m_r = R::c(m as f64);
        let m2 = two * m_r;
        // even step
        let aa = m_r * (b - m_r) * x / ((qam + m2) * (a + m2));
        d = one + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = one + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = one / d;
        h = h * d * c;
        // odd step
        let aa = -(a + m_r) * (qab + m_r) * x / ((a + m2) * (qap + m2));
        d = one + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = one + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = one / d;
        let del = d * c;
        h *= del;
        if (del - one).abs() < eps {
            break;
        }
    }
    h
}

/// Regularized incomplete beta function `I_x(a, b)` for `a, b > 0`,
/// `x` in `[0, 1]`.
pub fn reg_inc_beta<R: Real>(a: R, b: R, x: R) -> R {
    let one = R::one();
    if x <= R::zero() {
        return R::zero();
    }
    if x >= one {
        return one;
    }
    let front = (ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b)
        + a * x.ln()
        + b * (one - x).ln())
    .exp();
    // use the branch that converges fast, reflect otherwise
    if x < (a + one) / (a + b + R::c(2.0)) {
        front * beta_cf(a, b, x) / a
    } else {
        one - front * beta_cf(b, a, one - x) / b
    }
}

/// Series for the regularized lower incomplete gamma `P(a, x)`, `x < a+1`.
fn gamma_series<R: Real>(a: R, x: R) -> R {
    let eps = R::epsilon();
    let mut ap = a;
    let mut sum = R::one() / a;
    let mut del = sum;
    for _ in 0..MAX_ITER {
        ap += R::one();
        del = del * x / ap;
        sum += del;
        if del.abs() < sum.abs() * eps {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

/// Continued fraction for the regularized upper incomplete gamma
/// `Q(a, x)`, `x >= a+1` (modified Lentz).
fn gamma_cf<R: Real>(a: R, x: R) -> R {
    let one = R::one();
    let tiny = R::c(1e-300).max(R::min_positive_value());
    let eps = R::epsilon();

    let mut b = x + one - a;
    let mut c = one / tiny;
    let mut d = one / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -R::c(i as f64) * (R::c(i as f64) - a);
        b += R::c(2.0);
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = one / d;
        let del = d * c;
        h *= del;
        if (del - one).abs() < eps {
            break;
        }
    }
    h * (-x + a * x.ln() - ln_gamma(a)).exp()
}

/// Regularized upper incomplete gamma `Q(a, x)` for `a > 0`, `x >= 0`.
pub fn reg_upper_gamma<R: Real>(a: R, x: R) -> R {
    if x <= R::zero() {
        return R::one();
    }
    if x < a + R::one() {
        R::one() - gamma_series(a, x)
    } else {
        gamma_cf(a, x)
    }
}

/// Complementary error function.
pub fn erfc<R: Real>(x: R) -> R {
    let q = reg_upper_gamma(R::c(0.5), x * x);
    if x >= R::zero() {
        q
    } else {
        R::c(2.0) - q
    }
}

/// Standard normal cumulative distribution function.
pub fn normal_cdf<R: Real>(z: R) -> R {
    R::c(0.5) * erfc(-z / R::c(std::f64::consts::SQRT_2))
}

/// Two-sided normal tail probability `P(|Z| >= |z|)`.
pub fn normal_two_sided_p<R: Real>(z: R) -> R {
    erfc(z.abs() / R::c(std::f64::consts::SQRT_2))
}

/// Student t cumulative distribution function with `df > 0`.
pub fn student_t_cdf<R: Real>(t: R, df: R) -> R {
    let half = R::c(0.5);
    let x = df / (df + t * t);
    let tail = half * reg_inc_beta(half * df, half, x);
    if t <= R::zero() {
        tail
    } else {
        R::one() - tail
    }
}

/// Two-sided Student t tail probability `P(|T| >= |t|)`.
pub fn student_t_two_sided_p<R: Real>(t: R, df: R) -> R {
    reg_inc_beta(R::c(0.5) * df, R::c(0.5), df / (df + t * t))
}
