use serde::{Deserialize, Serialize};

/// Binomial standard error of a fraction.
pub fn binomial_stderr(fraction: f64, trials: u64) -> f64 {
    if trials == 0 {
        return f64::NAN;
    }
    (fraction * (1.0 - fraction) / trials as f64).sqrt()
}

/// One abscissa of a survival curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurvivalPoint {
    pub x: usize,
    pub trials: u64,
    pub exceedances: u64,
    pub survival: f64,
    pub stderr: f64,
    pub bound: Option<f64>,
}

impl SurvivalPoint {
    pub fn new(x: usize, trials: u64, exceedances: u64) -> Self {
        let survival = exceedances as f64 / trials as f64;
        Self {
            x,
            trials,
            exceedances,
            survival,
            stderr: binomial_stderr(survival, trials),
            bound: None,
        }
    }
}

/// Empirical `Pr(X > x)` over a range of abscissae.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalCurve {
    pub points: Vec<SurvivalPoint>,
}

impl SurvivalCurve {
    /// Survival of `values` at `x = 0..=max_x`. A value counts as an
    /// exceedance at every abscissa below it.
    pub fn from_values(values: &[usize], max_x: usize) -> Self {
        Self::from_values_from(values, 0, max_x)
    }

    /// Same, starting at `min_x`.
    pub fn from_values_from(values: &[usize], min_x: usize, max_x: usize) -> Self {
        let trials = values.len() as u64;
        let points = (min_x..=max_x)
            .map(|x| SurvivalPoint::new(x, trials, values.iter().filter(|&&v| v > x).count() as u64))
            .collect();
        Self { points }
    }

    /// Curve from exact survival values, as if observed with `trials` trials.
    pub fn from_survival(survival: &[f64], trials: u64) -> Self {
        let points = survival
            .iter()
            .enumerate()
            .map(|(x, &s)| SurvivalPoint {
                x,
                trials,
                exceedances: (s * trials as f64).round() as u64,
                survival: s,
                stderr: binomial_stderr(s, trials),
                bound: None,
            })
            .collect();
        Self { points }
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].survival <= w[0].survival)
    }
}

/// Least-squares line through `(x, ln survival)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub rate: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Abscissae used, from the first.
    pub points: usize,
}

/// Why no fit was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoFit {
    pub usable_points: usize,
}

/// Fits `ln survival = intercept + rate * x` over the leading run of points
/// with survival at least `10 / trials`; needs at least three of them.
pub fn fit_tail(curve: &SurvivalCurve) -> Result<TailFit, NoFit> {
    let usable: Vec<(f64, f64)> = curve
        .points
        .iter()
        .take_while(|p| p.trials > 0 && p.survival > 0.0 && p.survival * p.trials as f64 >= 10.0 - 1e-9)
        .map(|p| (p.x as f64, p.survival.ln()))
        .collect();
    if usable.len() < 3 {
        return Err(NoFit {
            usable_points: usable.len(),
        });
    }
    let n = usable.len() as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / n;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = usable.iter().map(|p| (p.1 - my).powi(2)).sum();
    let rate = sxy / sxx;
    let intercept = my - rate * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(TailFit {
        rate,
        intercept,
        r_squared,
        points: usable.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_exponentials() {
        let s: Vec<f64> = (0..8).map(|r| (-(r as f64)).exp()).collect();
        let fit = fit_tail(&SurvivalCurve::from_survival(&s, 1_000_000_000)).unwrap();
        assert!((fit.rate + 1.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(fit.intercept.abs() < 1e-12);

        let s: Vec<f64> = (0..8).map(|r| 2f64.powi(-r)).collect();
        let fit = fit_tail(&SurvivalCurve::from_survival(&s, 1_000_000_000)).unwrap();
        assert!((fit.rate + std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn too_few_points() {
        let c = SurvivalCurve::from_values(&[0, 0, 1, 3], 4);
        assert_eq!(fit_tail(&c), Err(NoFit { usable_points: 0 }));
    }

    #[test]
    fn survival_counts_exceedances_below_each_value() {
        let c = SurvivalCurve::from_values(&[0, 2, 2, 5], 6);
        let ex: Vec<u64> = c.points.iter().map(|p| p.exceedances).collect();
        assert_eq!(ex, vec![3, 3, 1, 1, 1, 0, 0]);
        assert!(c.is_nonincreasing());
    }

    #[test]
    fn stderr_formula() {
        let p = SurvivalPoint::new(0, 100, 7);
        assert!((p.survival - 0.07).abs() < 1e-15);
        assert!((p.stderr - 0.025514701644346147).abs() < 1e-15);
    }
}
