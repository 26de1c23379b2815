//! Significance testing: bilateral two-sample t-test (Welch by default,
//! pooled behind a switch), the pooled two-proportion z-test, and the
//! dagger/double-dagger significance marks used in the report tables.

pub mod special;

use crate::scalar::Real;
use thiserror::Error;

/// Default significance level (1%).
pub const DEFAULT_ALPHA: f64 = 0.01;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    InvalidAlpha(f64),
    #[error("invalid counts: {0}")]
    InvalidCounts(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestKind {
    TTest,
    ProportionTest,
}

/// Which two-sample t-test variant to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TVariant {
    /// Unequal-variance (Welch-Satterthwaite degrees of freedom).
    #[default]
    Welch,
    /// Pooled-variance, df = n_a + n_b - 2.
    Pooled,
}

/// Outcome of one significance test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult<R: Real = f64> {
    pub statistic: R,
    pub p_value: R,
    pub significant: bool,
    pub alpha: R,
    pub kind: TestKind,
    /// Degrees of freedom (t-tests only).
    pub df: Option<R>,
}

fn check_alpha<R: Real>(alpha: R) -> Result<(), StatsError> {
    if alpha <= R::zero() || alpha >= R::one() {
        return Err(StatsError::InvalidAlpha(
            alpha.to_f64().unwrap_or(f64::NAN),
        ));
    }
    Ok(())
}

fn mean_and_var<R: Real>(sample: &[R]) -> (R, R) {
    let n = R::from_count(sample.len());
    let mean = sample.iter().copied().sum::<R>() / n;
    let ss = sample
        .iter()
        .map(|&x| (x - mean) * (x - mean))
        .sum::<R>();
    (mean, ss / (n - R::one()))
}

/// Bilateral two-sample t-test, Welch variant.
pub fn t_test_two_sample<R: Real>(
    sample_a: &[R],
    sample_b: &[R],
    alpha: R,
) -> Result<TestResult<R>, StatsError> {
    t_test_two_sample_with(sample_a, sample_b, alpha, TVariant::Welch)
}

/// Bilateral two-sample t-test with an explicit variant.
pub fn t_test_two_sample_with<R: Real>(
    sample_a: &[R],
    sample_b: &[R],
    alpha: R,
    variant: TVariant,
) -> Result<TestResult<R>, StatsError> {
    check_alpha(alpha)?;
    if sample_a.len() < 2 || sample_b.len() < 2 {
        return Err(StatsError::DegenerateSample(format!(
            "need at least 2 values per sample, got {} and {}",
            sample_a.len(),
            sample_b.len()
        )));
    }
    let (mean_a, var_a) = mean_and_var(sample_a);
    let (mean_b, var_b) = mean_and_var(sample_b);
    let n_a = R::from_count(sample_a.len());
    let n_b = R::from_count(sample_b.len());

    if var_a.is_zero() && var_b.is_zero() {
        if mean_a == mean_b {
            return Ok(TestResult {
                statistic: R::zero(),
                p_value: R::one(),
                significant: false,
                alpha,
                kind: TestKind::TTest,
                df: None,
            });
        }
        return Err(StatsError::DegenerateSample(
            "both variances are zero with unequal means".to_string(),
        ));
    }

    let two = R::c(2.0);
    let (se, df) = match variant {
        TVariant::Welch => {
            let qa = var_a / n_a;
            let qb = var_b / n_b;
            let se2 = qa + qb;
            let df = se2 * se2 / (qa * qa / (n_a - R::one()) + qb * qb / (n_b - R::one()));
            (se2.sqrt(), df)
        }
        TVariant::Pooled => {
            let df = n_a + n_b - two;
            let pooled = ((n_a - R::one()) * var_a + (n_b - R::one()) * var_b) / df;
            ((pooled * (R::one() / n_a + R::one() / n_b)).sqrt(), df)
        }
    };
    let statistic = (mean_a - mean_b) / se;
    let p_value = special::student_t_two_sided_p(statistic, df);
    Ok(TestResult {
        statistic,
        p_value,
        significant: p_value < alpha,
        alpha,
        kind: TestKind::TTest,
        df: Some(df),
    })
}

/// Two-sided pooled two-proportion z-test.
pub fn proportion_test<R: Real>(
    hits_a: u64,
    n_a: u64,
    hits_b: u64,
    n_b: u64,
    alpha: R,
) -> Result<TestResult<R>, StatsError> {
    check_alpha(alpha)?;
    if n_a == 0 || n_b == 0 {
        return Err(StatsError::InvalidCounts(
            "sample sizes must be positive".to_string(),
        ));
    }
    if hits_a > n_a || hits_b > n_b {
        return Err(StatsError::InvalidCounts(format!(
            "hits exceed totals: {hits_a}/{n_a}, {hits_b}/{n_b}"
        )));
    }
    let pooled_hits = hits_a + hits_b;
    // pooled proportion 0 or 1 forces equal sample proportions
    if pooled_hits == 0 || pooled_hits == n_a + n_b {
        return Ok(TestResult {
            statistic: R::zero(),
            p_value: R::one(),
            significant: false,
            alpha,
            kind: TestKind::ProportionTest,
            df: None,
        });
    }
    let na = R::c(n_a as f64);
    let nb = R::c(n_b as f64);
    let pa = R::c(hits_a as f64) / na;
    let pb = R::c(hits_b as f64) / nb;
    let pooled = R::c(pooled_hits as f64) / (na + nb);
    let se = (pooled * (R::one() - pooled) * (R::one() / na + R::one() / nb)).sqrt();
    let statistic = (pa - pb) / se;
    let p_value = special::normal_two_sided_p(statistic);
    Ok(TestResult {
        statistic,
        p_value,
        significant: p_value < alpha,
        alpha,
        kind: TestKind::ProportionTest,
        df: None,
    })
}

/// Dagger marks summarizing a pair of tests against two baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SignificanceMarks {
    /// `†`: significant against the first baseline.
    pub vs_baseline_1: bool,
    /// `‡`: significant against the second baseline.
    pub vs_baseline_2: bool,
}

impl SignificanceMarks {
    pub fn render(&self) -> &'static str {
        match (self.vs_baseline_1, self.vs_baseline_2) {
            (true, true) => "\u{2020}\u{2021}",
            (true, false) => "\u{2020}",
            (false, true) => "\u{2021}",
            (false, false) => "",
        }
    }
}

/// Pair two test outcomes into marks. Both tests must have run at the
/// same alpha.
pub fn mark_significance<R: Real>(
    vs_baseline_1: &TestResult<R>,
    vs_baseline_2: &TestResult<R>,
) -> SignificanceMarks {
    debug_assert!(vs_baseline_1.alpha == vs_baseline_2.alpha);
    SignificanceMarks {
        vs_baseline_1: vs_baseline_1.significant,
        vs_baseline_2: vs_baseline_2.significant,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const ALPHA: f64 = DEFAULT_ALPHA;

    #[test]
    fn identical_samples() {
        let s = [1.0, 2.0, 3.0];
        let r = t_test_two_sample(&s, &s, ALPHA).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert!(!r.significant);
    }

    #[test]
    fn welch_worked_example() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0];
        let b = [2.0, 3.0, 4.0, 5.0, 6.0];
        let r = t_test_two_sample(&a, &b, ALPHA).unwrap();
        assert!((r.statistic - -1.0).abs() < 1e-12, "t = {}", r.statistic);
        assert!((r.df.unwrap() - 8.0).abs() < 1e-12);
        assert!((r.p_value - 0.34659350708733416).abs() < 1e-10);
        assert!(!r.significant);
    }

    #[test]
    fn large_shift_is_significant() {
        let a: Vec<f64> = (0..50).map(|i| (i % 7) as f64 * 0.1).collect();
        let b: Vec<f64> = a.iter().map(|x| x + 10.0).collect();
        let r = t_test_two_sample(&a, &b, ALPHA).unwrap();
        assert!(r.p_value < 0.01);
        assert!(r.significant);
    }

    #[test]
    fn too_small_sample_rejected() {
        assert!(matches!(
            t_test_two_sample(&[1.0], &[1.0, 2.0], ALPHA),
            Err(StatsError::DegenerateSample(_))
        ));
    }

    #[test]
    fn zero_variance_equal_means_ok() {
        let r = t_test_two_sample(&[2.0, 2.0], &[2.0, 2.0], ALPHA).unwrap();
        assert_eq!((r.statistic, r.p_value), (0.0, 1.0));
    }

    #[test]
    fn zero_variance_unequal_means_rejected() {
        assert!(matches!(
            t_test_two_sample(&[2.0, 2.0], &[3.0, 3.0], ALPHA),
            Err(StatsError::DegenerateSample(_))
        ));
    }

    #[test]
    fn pooled_variant_df() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0];
        let b = [2.0, 3.0, 4.0, 5.0, 6.0];
        let r = t_test_two_sample_with(&a, &b, ALPHA, TVariant::Pooled).unwrap();
        assert_eq!(r.df, Some(8.0));
        assert!((r.statistic - -1.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_alpha_rejected() {
        assert!(matches!(
            t_test_two_sample(&[1.0, 2.0], &[1.0, 2.0], 0.0),
            Err(StatsError::InvalidAlpha(_))
        ));
        assert!(matches!(
            proportion_test::<f64>(1, 10, 2, 10, 1.0),
            Err(StatsError::InvalidAlpha(_))
        ));
    }

    #[test]
    fn equal_proportions() {
        let r = proportion_test::<f64>(50, 100, 50, 100, ALPHA).unwrap();
        assert_eq!((r.statistic, r.p_value), (0.0, 1.0));
        assert!(!r.significant);
    }

    #[test]
    fn proportion_worked_example() {
        let r = proportion_test::<f64>(60, 100, 40, 100, ALPHA).unwrap();
        assert!(
            (r.statistic - 2.8284271247461903).abs() < 1e-12,
            "z = {}",
            r.statistic
        );
        assert!((r.p_value - 0.0046777349810472576).abs() < 1e-10);
        assert!(r.significant);
    }

    #[test]
    fn degenerate_pooled_proportion() {
        let r = proportion_test::<f64>(0, 10, 0, 10, ALPHA).unwrap();
        assert_eq!((r.statistic, r.p_value), (0.0, 1.0));
        let r = proportion_test::<f64>(10, 10, 10, 10, ALPHA).unwrap();
        assert_eq!((r.statistic, r.p_value), (0.0, 1.0));
    }

    #[test]
    fn invalid_counts_rejected() {
        assert!(matches!(
            proportion_test::<f64>(1, 0, 1, 10, ALPHA),
            Err(StatsError::InvalidCounts(_))
        ));
        assert!(matches!(
            proportion_test::<f64>(11, 10, 1, 10, ALPHA),
            Err(StatsError::InvalidCounts(_))
        ));
    }

    #[test]
    fn marks_pairing() {
        let sig = TestResult::<f64> {
            statistic: 3.0,
            p_value: 0.001,
            significant: true,
            alpha: 0.01,
            kind: TestKind::TTest,
            df: Some(10.0),
        };
        let not = TestResult::<f64> {
            statistic: 0.5,
            p_value: 0.6,
            significant: false,
            ..sig
        };
        assert_eq!(mark_significance(&sig, &sig).render(), "\u{2020}\u{2021}");
        assert_eq!(mark_significance(&not, &not).render(), "");
        assert_eq!(mark_significance(&not, &sig).render(), "\u{2021}");
        assert_eq!(mark_significance(&sig, &not).render(), "\u{2020}");
    }

    proptest! {
        /// Swapping samples negates t and preserves p.
        #[test]
        fn swap_symmetry(
            a in proptest::collection::vec(-50.0..50.0f64, 2..20),
            b in proptest::collection::vec(-50.0..50.0f64, 2..20),
        ) {
            let ab = t_test_two_sample(&a, &b, 0.01);
            let ba = t_test_two_sample(&b, &a, 0.01);
            if let (Ok(ab), Ok(ba)) = (ab, ba) {
                prop_assert!((ab.statistic + ba.statistic).abs() < 1e-12);
                prop_assert!((ab.p_value - ba.p_value).abs() < 1e-12);
            }
        }

        /// Proportion test symmetry.
        #[test]
        fn proportion_swap_symmetry(ha in 0u64..50, na in 1u64..50, hb in 0u64..50, nb in 1u64..50) {
            prop_assume!(ha <= na && hb <= nb);
            let ab = proportion_test::<f64>(ha, na, hb, nb, 0.01).unwrap();
            let ba = proportion_test::<f64>(hb, nb, ha, na, 0.01).unwrap();
            prop_assert!((ab.statistic + ba.statistic).abs() < 1e-12);
            prop_assert!((ab.p_value - ba.p_value).abs() < 1e-12);
        }

        /// p is invariant under a common affine transform of both samples.
        #[test]
        fn affine_invariance(
            a in proptest::collection::vec(-10.0..10.0f64, 3..15),
            b in proptest::collection::vec(-10.0..10.0f64, 3..15),
            scale in 0.1..20.0f64,
            shift in -100.0..100.0f64,
        ) {
            let ta = t_test_two_sample(&a, &b, 0.01);
            let a2: Vec<f64> = a.iter().map(|x| scale * x + shift).collect();
            let b2: Vec<f64> = b.iter().map(|x| scale * x + shift).collect();
            let tb = t_test_two_sample(&a2, &b2, 0.01);
            if let (Ok(ta), Ok(tb)) = (ta, tb) {
                prop_assert!((ta.p_value - tb.p_value).abs() < 1e-8,
                    "p {} vs {}", ta.p_value, tb.p_value);
            }
        }

        /// Larger mean separation never increases the p-value.
        #[test]
        fn monotone_in_separation(shift in 0.0..5.0f64, extra in 0.01..5.0f64) {
            let a = [0.0, 1.0, 2.0, 3.0, 4.0];
            let near: Vec<f64> = a.iter().map(|x| x + shift).collect();
            let far: Vec<f64> = a.iter().map(|x| x + shift + extra).collect();
            let p_near = t_test_two_sample(&a, &near, 0.01).unwrap().p_value;
            let p_far = t_test_two_sample(&a, &far, 0.01).unwrap().p_value;
            prop_assert!(p_far <= p_near + 1e-12);
        }
    }
}
