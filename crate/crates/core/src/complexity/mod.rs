//! Asymptotic cost models for the classical (conjugate gradient) and quantum
//! (HHL) linear solvers, the speed ratio between them and the dimension at
//! which a handicapped quantum solver breaks even.
//!
//! Costs are unitless model units:
//!
//! * classical `N · s · k · log_b(1/ε)`
//! * quantum `log_b(N) · s² · k² / ε`
//!
//! The two logarithm bases are independent parameters; see [`LogBase`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Lower end of the crossover search range.
pub const SEARCH_MIN_N: f64 = 2.0;
/// Upper end of the crossover search range.
pub const SEARCH_MAX_N: f64 = 1e7;
const SCAN_POINTS: usize = 4001;
const SAMPLE_POINTS: usize = 61;
const BISECTION_REL_TOL: f64 = 1e-13;

#[derive(Debug, Error, PartialEq)]
pub enum ComplexityError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(f64),
    #[error("constant ratio must be positive and finite, got {0}")]
    InvalidRatio(f64),
    #[error("no crossover in [2, 1e7]: {0} is cheaper across the whole range")]
    NoCrossover(Dominance),
    #[error("invalid sweep range [{lo}, {hi}] with {steps} steps")]
    InvalidRange { lo: f64, hi: f64, steps: usize },
    #[error("unknown log base {0:?} (expected 2, e or 10)")]
    UnknownLogBase(String),
}

/// Which side wins when the curves never cross.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dominance {
    Classical,
    Quantum,
}

impl fmt::Display for Dominance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dominance::Classical => "classical",
            Dominance::Quantum => "quantum",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogBase {
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "e")]
    E,
    #[serde(rename = "10")]
    Ten,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::E => x.ln(),
            LogBase::Ten => x.log10(),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Two => "2",
            LogBase::E => "e",
            LogBase::Ten => "10",
        })
    }
}

impl FromStr for LogBase {
    type Err = ComplexityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "2" | "log2" => Ok(LogBase::Two),
            "e" | "ln" => Ok(LogBase::E),
            "10" | "log10" => Ok(LogBase::Ten),
            other => Err(ComplexityError::UnknownLogBase(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityParams {
    /// Sparsity, at least 1.
    pub s: f64,
    /// Condition parameter, taken literally (values below 1 are allowed).
    pub k: f64,
    /// Accuracy in `(0, 1)`.
    pub epsilon: f64,
    /// Base of `log(N)` in the quantum model.
    pub log_n_base: LogBase,
    /// Base of `log(1/ε)` in the classical model.
    pub log_eps_base: LogBase,
}

impl ComplexityParams {
    /// Parameters with the default bases: `ln` for `log(1/ε)`, `log2` for `log(N)`.
    pub fn new(s: f64, k: f64, epsilon: f64) -> Self {
        ComplexityParams {
            s,
            k,
            epsilon,
            log_n_base: LogBase::Two,
            log_eps_base: LogBase::E,
        }
    }

    pub fn with_bases(mut self, log_n_base: LogBase, log_eps_base: LogBase) -> Self {
        self.log_n_base = log_n_base;
        self.log_eps_base = log_eps_base;
        self
    }

    pub fn validate(&self) -> Result<(), ComplexityError> {
        self.check(false)
    }

    // The quantum model is also evaluated at the boundary ε = 1.
    fn check(&self, allow_unit_eps: bool) -> Result<(), ComplexityError> {
        if !(self.s.is_finite() && self.s >= 1.0) {
            return Err(ComplexityError::InvalidParams(format!(
                "s = {} must be >= 1",
                self.s
            )));
        }
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(ComplexityError::InvalidParams(format!(
                "k = {} must be > 0",
                self.k
            )));
        }
        let eps_ok =
            self.epsilon > 0.0 && (self.epsilon < 1.0 || (allow_unit_eps && self.epsilon == 1.0));
        if !eps_ok {
            return Err(ComplexityError::InvalidParams(format!(
                "epsilon = {} must lie in (0, 1)",
                self.epsilon
            )));
        }
        Ok(())
    }
}

fn check_n(n: f64) -> Result<(), ComplexityError> {
    if n.is_finite() && n >= 2.0 {
        Ok(())
    } else {
        Err(ComplexityError::InvalidDimension(n))
    }
}

/// `n · s · k · log_b(1/ε)`.
pub fn t_classical(n: f64, p: &ComplexityParams) -> Result<f64, ComplexityError> {
    check_n(n)?;
    p.validate()?;
    Ok(n * p.s * p.k * p.log_eps_base.log(1.0 / p.epsilon))
}

/// `log_b(n) · s² · k² / ε`.
pub fn t_quantum(n: f64, p: &ComplexityParams) -> Result<f64, ComplexityError> {
    check_n(n)?;
    p.check(true)?;
    Ok(p.log_n_base.log(n) * p.s * p.s * p.k * p.k / p.epsilon)
}

/// `t_classical / t_quantum` at `n`: how many times slower per unit the
/// quantum machine may be while still matching the classical one at `n`.
pub fn base_speed_ratio(
    n: f64,
    classical: &ComplexityParams,
    quantum: &ComplexityParams,
) -> Result<f64, ComplexityError> {
    Ok(t_classical(n, classical)? / t_quantum(n, quantum)?)
}

/// One evaluated point of both cost curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostSample {
    pub n: f64,
    pub classical_cost: f64,
    /// Quantum cost multiplied by the constant ratio.
    pub quantum_cost_scaled: f64,
}

/// Log bases used for a report, echoed so results can be audited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LogConvention {
    pub classical_log_eps_base: LogBase,
    pub quantum_log_n_base: LogBase,
}

impl fmt::Display for LogConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "classical log(1/eps) base {}, quantum log(N) base {}",
            self.classical_log_eps_base, self.quantum_log_n_base
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossoverReport {
    pub n_star: f64,
    pub constant_ratio: f64,
    pub convention: LogConvention,
    pub samples: Vec<CostSample>,
}

fn sample(
    n: f64,
    classical: &ComplexityParams,
    quantum: &ComplexityParams,
    ratio: f64,
) -> Result<CostSample, ComplexityError> {
    Ok(CostSample {
        n,
        classical_cost: t_classical(n, classical)?,
        quantum_cost_scaled: ratio * t_quantum(n, quantum)?,
    })
}

fn log_grid(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..points).map(move |i| {
        if i == 0 {
            lo
        } else if i + 1 == points {
            hi
        } else {
            (a + (b - a) * i as f64 / (points - 1) as f64).exp()
        }
    })
}

/// Dimension where `ratio · t_quantum` falls below `t_classical`.
///
/// The gap `ratio · t_quantum − t_classical` is scanned on a log grid over
/// `[2, 1e7]`; the first change from positive to non-positive is refined by
/// bisection in `ln N`.
pub fn find_crossover(
    classical: &ComplexityParams,
    quantum: &ComplexityParams,
    constant_ratio: f64,
) -> Result<CrossoverReport, ComplexityError> {
    classical.validate()?;
    quantum.validate()?;
    if !(constant_ratio.is_finite() && constant_ratio > 0.0) {
        return Err(ComplexityError::InvalidRatio(constant_ratio));
    }
    let gap = |n: f64| -> Result<f64, ComplexityError> {
        Ok(constant_ratio * t_quantum(n, quantum)? - t_classical(n, classical)?)
    };

    let mut bracket = None;
    let mut prev: Option<(f64, f64)> = None;
    for n in log_grid(SEARCH_MIN_N, SEARCH_MAX_N, SCAN_POINTS) {
        let g = gap(n)?;
        if let Some((pn, pg)) = prev {
            if pg > 0.0 && g <= 0.0 {
                bracket = Some((pn, n));
                break;
            }
        }
        prev = Some((n, g));
    }
    let Some((mut lo, mut hi)) = bracket else {
        let top = gap(SEARCH_MAX_N)?;
        let cheaper = if top > 0.0 {
            Dominance::Classical
        } else {
            Dominance::Quantum
        };
        return Err(ComplexityError::NoCrossover(cheaper));
    };

    for _ in 0..200 {
        if hi / lo - 1.0 <= BISECTION_REL_TOL {
            break;
        }
        let mid = (lo * hi).sqrt();
        if gap(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let n_star = (lo * hi).sqrt();

    let samples = log_grid(SEARCH_MIN_N, SEARCH_MAX_N, SAMPLE_POINTS)
        .map(|n| sample(n, classical, quantum, constant_ratio))
        .collect::<Result<_, _>>()?;
    Ok(CrossoverReport {
        n_star,
        constant_ratio,
        convention: LogConvention {
            classical_log_eps_base: classical.log_eps_base,
            quantum_log_n_base: quantum.log_n_base,
        },
        samples,
    })
}

/// Both cost curves on `steps` log-spaced dimensions from `lo` to `hi`.
pub fn sweep(
    classical: &ComplexityParams,
    quantum: &ComplexityParams,
    constant_ratio: f64,
    (lo, hi): (f64, f64),
    steps: usize,
) -> Result<Vec<CostSample>, ComplexityError> {
    classical.validate()?;
    quantum.validate()?;
    if !(constant_ratio.is_finite() && constant_ratio > 0.0) {
        return Err(ComplexityError::InvalidRatio(constant_ratio));
    }
    let bad_range = !(lo.is_finite() && hi.is_finite() && lo >= 2.0 && hi >= lo)
        || steps == 0
        || (steps == 1 && lo != hi);
    if bad_range {
        return Err(ComplexityError::InvalidRange { lo, hi, steps });
    }
    log_grid(lo, hi, steps)
        .map(|n| sample(n, classical, quantum, constant_ratio))
        .collect()
}

pub const CSV_HEADER: &str = "n,classical_cost,quantum_cost_scaled";

/// Renders samples as CSV with [`CSV_HEADER`] and six significant digits.
pub fn to_csv(samples: &[CostSample]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for s in samples {
        out.push_str(&format!(
            "{},{},{}\n",
            format_sig(s.n, 6),
            format_sig(s.classical_cost, 6),
            format_sig(s.quantum_cost_scaled, 6)
        ));
    }
    out
}

/// Decimal (non-exponent) rendering of `x` rounded to `digits` significant digits.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1) as i32;
    let mut exp = x.abs().log10().floor() as i32;
    // Rounding can carry into the next decade (9.9999996 -> 10.0000).
    let scale = 10f64.powi(exp - digits + 1);
    if ((x.abs() / scale).round() * scale) >= 10f64.powi(exp + 1) {
        exp += 1;
    }
    let decimals = digits - 1 - exp;
    if decimals >= 0 {
        format!("{:.*}", decimals as usize, x)
    } else {
        let scale = 10f64.powi(-decimals);
        format!("{:.0}", (x / scale).round() * scale)
    }
}
