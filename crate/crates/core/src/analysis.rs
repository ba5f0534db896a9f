//! Smooth-number densities via the Dickman-de Bruijn function and simple
//! scaling estimates for the relation collection.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::record::ExperimentRecord;
use crate::solver::Params;
use crate::{Error, Result};

pub const DEFAULT_STEP: f64 = 1e-4;

/// `rho` on the grid `1 + i h` from the integral form
/// `x rho(x) = int_{x-1}^x rho(t) dt` with trapezoidal quadrature, which keeps
/// the error relative to `rho` itself far into the tail. `h` is the requested
/// step rounded so that `1 / h` is an integer.
#[derive(Debug, Clone, PartialEq)]
pub struct DickmanTable {
    step: f64,
    values: Vec<f64>,
}

impl DickmanTable {
    pub fn new(a_max: f64, step: f64) -> Result<Self> {
        if !(step > 0.0 && step <= 1e-3) {
            return Err(Error::InvalidArgument(format!(
                "Dickman step must lie in (0, 1e-3], got {step}"
            )));
        }
        if !(a_max >= 0.0) || !a_max.is_finite() {
            return Err(Error::InvalidArgument(format!("invalid argument a = {a_max}")));
        }
        let per_unit = (1.0 / step).round() as usize;
        let h = 1.0 / per_unit as f64;
        let len = ((a_max - 1.0).max(0.0) / h).ceil() as usize + 1;
        // full[k] = rho(k h); everything up to k = per_unit is 1.
        let mut full = vec![1.0; per_unit + len];
        let mut window = 0.0;
        for k in per_unit + 1..full.len() {
            let lo = k - per_unit;
            if (k - per_unit - 1) % per_unit == 0 {
                window = full[lo + 1..k].iter().sum();
            } else {
                window += full[k - 1] - full[lo];
            }
            let x = k as f64 * h;
            full[k] = h * (0.5 * full[lo] + window) / (x - 0.5 * h);
        }
        full.drain(..per_unit);
        Ok(Self { step: h, values: full })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Largest argument covered by the grid.
    pub fn a_max(&self) -> f64 {
        1.0 + (self.values.len() - 1) as f64 * self.step
    }

    /// `rho(t - 1)` for `t` at most one step beyond the grid.
    fn delayed(&self, t: f64) -> f64 {
        self.lookup(t - 1.0)
    }

    fn lookup(&self, x: f64) -> f64 {
        if x <= 1.0 {
            return 1.0;
        }
        let pos = (x - 1.0) / self.step;
        let i = pos.floor() as usize;
        let frac = pos - i as f64;
        if i + 1 >= self.values.len() {
            return self.values[self.values.len() - 1];
        }
        if frac < 1e-9 {
            return self.values[i];
        }
        if frac > 1.0 - 1e-9 {
            return self.values[i + 1];
        }
        self.values[i] + frac * (self.values[i + 1] - self.values[i])
    }

    /// `rho(a)`; between grid points a final partial trapezoid step is taken.
    pub fn rho(&self, a: f64) -> Result<f64> {
        if !(a >= 0.0) {
            return Err(Error::InvalidArgument(format!("rho needs a >= 0, got {a}")));
        }
        if a <= 1.0 {
            return Ok(1.0);
        }
        if a > self.a_max() + 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "a = {a} lies beyond the table limit {}",
                self.a_max()
            )));
        }
        let pos = (a - 1.0) / self.step;
        let i = pos.floor() as usize;
        let rem = a - (1.0 + i as f64 * self.step);
        if rem <= 1e-12 * a || i + 1 >= self.values.len() {
            return Ok(self.values[i.min(self.values.len() - 1)]);
        }
        let t0 = 1.0 + i as f64 * self.step;
        Ok(self.values[i] - 0.5 * rem * (self.delayed(t0) / t0 + self.delayed(a) / a))
    }

    /// Grid points `(x, rho(x))` from 0 to the table limit every `stride` steps.
    pub fn curve(&self, stride: usize) -> Vec<(f64, f64)> {
        let stride = stride.max(1);
        let mut out = vec![(0.0, 1.0)];
        out.extend(
            self.values
                .iter()
                .enumerate()
                .step_by(stride)
                .map(|(i, &v)| (1.0 + i as f64 * self.step, v)),
        );
        out
    }
}

/// `rho(a)` with grid spacing `step`.
pub fn dickman_rho(a: f64, step: f64) -> Result<f64> {
    if !(a >= 0.0) {
        return Err(Error::InvalidArgument(format!("rho needs a >= 0, got {a}")));
    }
    if a <= 1.0 {
        if !(step > 0.0 && step <= 1e-3) {
            return Err(Error::InvalidArgument(format!(
                "Dickman step must lie in (0, 1e-3], got {step}"
            )));
        }
        return Ok(1.0);
    }
    DickmanTable::new(a, step)?.rho(a)
}

/// Density of `p_m`-smooth integers below `2^n_bits`:
/// `rho(n_bits ln 2 / (ln m + ln ln m))`.
pub fn smooth_density(n_bits: u32, m: usize) -> Result<f64> {
    dickman_rho(density_argument(n_bits, m)?, DEFAULT_STEP)
}

fn density_argument(n_bits: u32, m: usize) -> Result<f64> {
    if m < 3 {
        return Err(Error::InvalidArgument(format!(
            "smooth density needs m >= 3, got {m}"
        )));
    }
    let lm = (m as f64).ln();
    Ok(f64::from(n_bits) * std::f64::consts::LN_2 / (lm + lm.ln()))
}

/// How the lattice dimension grows with the input size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MRule {
    /// `ceil(ln n / ln ln n)`.
    Sublinear,
    /// `ceil(3/2 ln n / ln ln n)`.
    Default,
    /// `ceil(3/2 ln n / ln ln n)^2`, the extended factor base size.
    Squared,
}

impl std::str::FromStr for MRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sublinear" => Ok(Self::Sublinear),
            "default" => Ok(Self::Default),
            "squared" => Ok(Self::Squared),
            other => Err(Error::InvalidArgument(format!(
                "unknown m rule {other:?}; expected sublinear, default or squared"
            ))),
        }
    }
}

impl MRule {
    pub fn m_for_bits(&self, n_bits: u32) -> Result<usize> {
        let ln_n = f64::from(n_bits) * std::f64::consts::LN_2;
        if ln_n <= std::f64::consts::E.ln() {
            return Err(Error::InvalidArgument(format!("{n_bits} bits is too small")));
        }
        let base = ln_n / ln_n.ln();
        Ok(match self {
            Self::Sublinear => base.ceil() as usize,
            Self::Default => (1.5 * base).ceil() as usize,
            Self::Squared => ((1.5 * base).ceil() as usize).pow(2),
        }
        .max(3))
    }
}

/// `(bits, smooth_density(bits, rule(bits)))` over a bit range.
pub fn density_curve(bits: std::ops::RangeInclusive<u32>, rule: MRule) -> Result<Vec<(f64, f64)>> {
    let args: Vec<(u32, f64)> = bits
        .map(|b| Ok((b, density_argument(b, rule.m_for_bits(b)?)?)))
        .collect::<Result<_>>()?;
    let a_max = args.iter().map(|&(_, a)| a).fold(1.0, f64::max);
    let table = DickmanTable::new(a_max, DEFAULT_STEP)?;
    args.into_iter()
        .map(|(b, a)| Ok((f64::from(b), table.rho(a)?)))
        .collect()
}

/// Lattices needed for `M + 2` unique relations at the given per-lattice
/// yield. The yield is the empirical unique-per-lattice ratio of `empirical`
/// when given, else `smooth_density(n_bits, M) * candidates_per_lattice`.
/// `None` when the yield is zero.
pub fn expected_lattices(
    n_bits: u32,
    params: &Params,
    candidates_per_lattice: f64,
    empirical: Option<&[ExperimentRecord]>,
) -> Result<Option<f64>> {
    let needed = (params.big_m + 2) as f64;
    let per_lattice = match empirical {
        Some(records) => {
            let lattices: u64 = records.iter().map(|r| r.lattices_tested).sum();
            let unique: u64 = records.iter().map(|r| r.unique_sr_pairs).sum();
            if lattices == 0 {
                0.0
            } else {
                unique as f64 / lattices as f64
            }
        }
        None => smooth_density(n_bits, params.big_m.max(3))? * candidates_per_lattice,
    };
    Ok((per_lattice > 0.0).then(|| needed / per_lattice))
}

/// Least-squares line through `(x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogLinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn log_linear_fit(points: &[(f64, f64)]) -> Result<LogLinearFit> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument("a fit needs at least two points".into()));
    }
    if let Some(&(x, y)) = points.iter().find(|&&(_, y)| !(y > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "log-linear fit needs positive values, got ({x}, {y})"
        )));
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all x values coincide".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LogLinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}

/// Mean lattices tested per bit length.
pub fn lattice_scaling(records: &[ExperimentRecord]) -> Vec<(f64, f64)> {
    let mut groups: BTreeMap<u64, (f64, usize)> = BTreeMap::new();
    for r in records {
        let g = groups.entry(r.n_bits).or_insert((0.0, 0));
        g.0 += r.lattices_tested as f64;
        g.1 += 1;
    }
    groups
        .into_iter()
        .map(|(bits, (sum, count))| (bits as f64, sum / count as f64))
        .collect()
}
