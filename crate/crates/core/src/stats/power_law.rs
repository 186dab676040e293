use nalgebra::{DMatrix, DVector};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MIN_RECORDS: usize = 5;
const SVD_EPS: f64 = 1e-12;
const VARIANCE_EPS: f64 = 1e-18;

/// y = a·Π x_i^{b_i} with every b_i ≥ 0, so predictions never decrease when
/// an argument grows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct PowerLaw {
    pub scale: f64,
    pub exponents: Vec<f64>,
}

impl PowerLaw {
    pub fn constant(value: f64, arity: usize) -> Self {
        Self {
            scale: value,
            exponents: vec![0.0; arity],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::InvalidModels(format!(
                "power-law scale {} must be positive",
                self.scale
            )));
        }
        if self.exponents.iter().any(|b| !b.is_finite() || *b < 0.0) {
            return Err(Error::InvalidModels(format!(
                "power-law exponents must be finite and nonnegative: {:?}",
                self.exponents
            )));
        }
        Ok(())
    }

    pub fn predict(&self, args: &[f64]) -> Result<f64> {
        if args.len() != self.exponents.len() {
            return Err(Error::domain(format!(
                "power law takes {} arguments, got {}",
                self.exponents.len(),
                args.len()
            )));
        }
        if args.iter().any(|x| !(*x > 0.0)) {
            return Err(Error::domain("power-law arguments must be positive"));
        }
        Ok(args
            .iter()
            .zip(&self.exponents)
            .fold(self.scale, |acc, (x, b)| acc * x.powf(*b)))
    }
}

/// Least-squares fit in log space with exponents constrained to be
/// nonnegative. The constraint is handled by trying every subset of free
/// regressors (the rest pinned at zero) and keeping the best admissible one;
/// the arity here is small so that is cheap and exact.
pub fn fit_power_law(samples: &[(Vec<f64>, f64)]) -> Result<PowerLaw> {
    if samples.len() < MIN_RECORDS {
        return Err(Error::Fit(format!(
            "need at least {MIN_RECORDS} records, got {}",
            samples.len()
        )));
    }
    let arity = samples[0].0.len();
    if samples.iter().any(|(x, _)| x.len() != arity) {
        return Err(Error::Fit("records have inconsistent argument counts".into()));
    }
    if samples
        .iter()
        .any(|(x, y)| !(*y > 0.0) || x.iter().any(|v| !(*v > 0.0)))
    {
        return Err(Error::Fit("power-law fit needs strictly positive data".into()));
    }
    let n = samples.len();
    let logs: Vec<Vec<f64>> = samples
        .iter()
        .map(|(x, _)| x.iter().map(|v| v.ln()).collect())
        .collect();
    let ly = DVector::from_iterator(n, samples.iter().map(|(_, y)| y.ln()));

    // Regressors that never vary carry no information about their exponent.
    let varying: Vec<usize> = (0..arity)
        .filter(|&j| {
            let mean = logs.iter().map(|r| r[j]).sum::<f64>() / n as f64;
            logs.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() > VARIANCE_EPS
        })
        .collect();

    let mut best: Option<(f64, PowerLaw)> = None;
    for mask in 0u32..(1 << varying.len()) {
        let cols: Vec<usize> = varying
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask & (1 << bit) != 0)
            .map(|(_, &j)| j)
            .collect();
        let design = DMatrix::from_fn(
            n,
            cols.len() + 1,
            |i, c| if c == 0 { 1.0 } else { logs[i][cols[c - 1]] },
        );
        let svd = design.clone().svd(true, true);
        let max_sv = svd.singular_values.max();
        if svd.singular_values.min() <= SVD_EPS * max_sv.max(1.0) {
            continue;
        }
        let Ok(beta) = svd.solve(&ly, SVD_EPS) else {
            continue;
        };
        if beta.iter().skip(1).any(|b| *b < 0.0) {
            continue;
        }
        let sse = (&design * &beta - &ly).norm_squared();
        let mut exponents = vec![0.0; arity];
        for (c, &j) in cols.iter().enumerate() {
            exponents[j] = beta[c + 1];
        }
        let law = PowerLaw {
            scale: beta[0].exp(),
            exponents,
        };
        // strict improvement keeps the smallest subset on exact ties
        if best
            .as_ref()
            .is_none_or(|(s, _)| sse < *s - 1e-12 * s.abs().max(1e-300))
        {
            best = Some((sse, law));
        }
    }
    best.map(|(_, law)| law)
        .ok_or_else(|| Error::Fit("degenerate design matrix".into()))
}
