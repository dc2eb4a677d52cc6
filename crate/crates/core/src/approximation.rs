//! Closed-form learning-curve approximations for the two-Gaussian problem.
//!
//! Two regimes, indexed by `N` objects per class in `p` dimensions:
//!
//! * pseudo-inverse regime (`2N < p`):
//!   `e = Φ(−(δ/2) T_r / √((1+γ²) T_μ + γ² 3δ²/(4p)))` with
//!   `T_μ = 1 + 1/N + 2p²/(δ²(2N−2)N) + p²/(δ²(2N−2)N²)` and `T_r = √((2N−2)/p)`;
//! * full-rank regime (`2N > p`):
//!   `e = Φ(−(δ/2) / √(T_μ T_Σ))` with `T_μ = 1 + 2p/(δ²N)` and `T_Σ = 1 + p/(2N−p)`.
//!
//! The semi-supervised variant evaluates `T_μ` at the labeled count only,
//! since unlabeled objects cannot improve the class-mean estimates; every
//! other term uses the total count.

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::evaluation::ErrorEstimate;
use crate::experiments::{CurvePoint, LearningCurve};
use crate::numerics::normal_cdf;

/// The eigenvalue-estimation term γ. No closed form is implied; callers supply it.
#[derive(Clone)]
pub enum GammaSpec {
    Constant(f64),
    /// `γ(N, p)` with `N` the (total) objects per class.
    Function(Arc<dyn Fn(usize, usize) -> f64 + Send + Sync>),
}

impl GammaSpec {
    pub fn function(f: impl Fn(usize, usize) -> f64 + Send + Sync + 'static) -> Self {
        GammaSpec::Function(Arc::new(f))
    }

    pub fn value(&self, n: usize, p: usize) -> f64 {
        match self {
            GammaSpec::Constant(g) => *g,
            GammaSpec::Function(f) => f(n, p),
        }
    }

    fn checked(&self, n: usize, p: usize) -> Result<f64> {
        let g = self.value(n, p);
        if !(g.is_finite() && g >= 0.0) {
            return Err(domain(format!(
                "gamma must be finite and non-negative, got {g} at N={n}, p={p}"
            )));
        }
        Ok(g)
    }
}

impl Default for GammaSpec {
    /// `γ = 0`: no eigenvalue-estimation penalty.
    fn default() -> Self {
        GammaSpec::Constant(0.0)
    }
}

impl fmt::Debug for GammaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaSpec::Constant(g) => write!(f, "Constant({g})"),
            GammaSpec::Function(_) => f.write_str("Function(..)"),
        }
    }
}

impl fmt::Display for GammaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaSpec::Constant(g) => write!(f, "{g}"),
            GammaSpec::Function(_) => f.write_str("function"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    PseudoInverse,
    FullRank,
}

impl Regime {
    /// `2N < p` → pseudo-inverse, `2N > p` → full rank, `2N == p` undefined.
    pub fn of(n_per_class: usize, p: usize) -> Option<Regime> {
        match (2 * n_per_class).cmp(&p) {
            std::cmp::Ordering::Less => Some(Regime::PseudoInverse),
            std::cmp::Ordering::Greater => Some(Regime::FullRank),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Regime::PseudoInverse => "pinv",
            Regime::FullRank => "fullrank",
        }
    }
}

/// The terms entering an approximation. Terms absent from a regime's
/// formula hold their neutral value (`t_r = 1`, `t_sigma = 1`, `gamma = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxTerms {
    pub t_mu: f64,
    pub t_r: f64,
    pub t_sigma: f64,
    pub gamma: f64,
}

fn check_common(p: usize, delta: f64) -> Result<()> {
    if p == 0 {
        return Err(domain("p must be positive"));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(domain(format!("delta must be positive and finite, got {delta}")));
    }
    Ok(())
}

/// Pseudo-inverse-regime terms; `n_mu` feeds `T_μ`, `n` everything else.
pub fn terms_pinv(n_mu: usize, n: usize, p: usize, delta: f64, gamma: &GammaSpec) -> Result<ApproxTerms> {
    check_common(p, delta)?;
    if n_mu < 2 || n < 2 {
        return Err(domain(format!(
            "pseudo-inverse approximation needs N >= 2, got {}",
            n_mu.min(n)
        )));
    }
    let (nm, pf, d2) = (n_mu as f64, p as f64, delta * delta);
    let dof = 2.0 * nm - 2.0;
    let t_mu = 1.0 + 1.0 / nm + 2.0 * pf * pf / (d2 * dof * nm) + pf * pf / (d2 * dof * nm * nm);
    let t_r = ((2.0 * n as f64 - 2.0) / pf).sqrt();
    Ok(ApproxTerms {
        t_mu,
        t_r,
        t_sigma: 1.0,
        gamma: gamma.checked(n, p)?,
    })
}

/// Full-rank-regime terms; `n_mu` feeds `T_μ`, `n` feeds `T_Σ`.
pub fn terms_fullrank(n_mu: usize, n: usize, p: usize, delta: f64) -> Result<ApproxTerms> {
    check_common(p, delta)?;
    if n_mu == 0 {
        return Err(domain("N must be positive"));
    }
    if 2 * n <= p {
        return Err(Error::Regime(format!(
            "full-rank approximation needs 2N > p, got N={n}, p={p}"
        )));
    }
    let (pf, d2) = (p as f64, delta * delta);
    let t_mu = 1.0 + 2.0 * pf / (d2 * n_mu as f64);
    let t_sigma = 1.0 + pf / (2.0 * n as f64 - pf);
    Ok(ApproxTerms {
        t_mu,
        t_r: 1.0,
        t_sigma,
        gamma: 0.0,
    })
}

impl ApproxTerms {
    pub fn error_pinv(&self, p: usize, delta: f64) -> f64 {
        let g2 = self.gamma * self.gamma;
        let denom = ((1.0 + g2) * self.t_mu + g2 * 3.0 * delta * delta / (4.0 * p as f64)).sqrt();
        normal_cdf(-(delta / 2.0) * self.t_r / denom)
    }

    pub fn error_fullrank(&self, delta: f64) -> f64 {
        normal_cdf(-(delta / 2.0) / (self.t_mu * self.t_sigma).sqrt())
    }
}

/// Pseudo-inverse-regime approximation at `n` objects per class.
///
/// `n == 1` leaves no within-class degrees of freedom: `T_r = 0` and the
/// error is exactly 0.5.
pub fn approx_error_pinv(n: usize, p: usize, delta: f64, gamma: &GammaSpec) -> Result<f64> {
    check_common(p, delta)?;
    match n {
        0 => Err(domain("N must be positive")),
        1 => Ok(0.5),
        _ => Ok(terms_pinv(n, n, p, delta, gamma)?.error_pinv(p, delta)),
    }
}

/// Full-rank approximation, valid for `2N > p`.
pub fn approx_error_fullrank(n: usize, p: usize, delta: f64) -> Result<f64> {
    Ok(terms_fullrank(n, n, p, delta)?.error_fullrank(delta))
}

/// Regime-appropriate approximation with `T_μ` evaluated at `n_mu`.
fn approx_mixed(n_mu: usize, n: usize, p: usize, delta: f64, gamma: &GammaSpec) -> Result<(f64, Regime)> {
    match Regime::of(n, p) {
        Some(Regime::PseudoInverse) => {
            let e = if n == 1 {
                approx_error_pinv(1, p, delta, gamma)?
            } else {
                terms_pinv(n_mu, n, p, delta, gamma)?.error_pinv(p, delta)
            };
            Ok((e, Regime::PseudoInverse))
        }
        Some(Regime::FullRank) => Ok((
            terms_fullrank(n_mu, n, p, delta)?.error_fullrank(delta),
            Regime::FullRank,
        )),
        None => Err(Error::Regime(format!(
            "2N == p (N={n}, p={p}): both approximations degenerate"
        ))),
    }
}

/// Supervised approximation picking the regime from `2N` versus `p`.
pub fn approx_error_supervised(n: usize, p: usize, delta: f64, gamma: &GammaSpec) -> Result<(f64, Regime)> {
    approx_mixed(n, n, p, delta, gamma)
}

/// Semi-supervised approximation: `T_μ` at the labeled count, the rest at the
/// total count (labeled plus unlabeled, per class).
pub fn approx_error_semisup(
    n_labeled: usize,
    n_total: usize,
    p: usize,
    delta: f64,
    gamma: &GammaSpec,
) -> Result<(f64, Regime)> {
    if n_labeled < 2 {
        return Err(domain(format!(
            "semi-supervised approximation needs N_labeled >= 2, got {n_labeled}"
        )));
    }
    if n_total < n_labeled {
        return Err(domain(format!(
            "N_total ({n_total}) below N_labeled ({n_labeled})"
        )));
    }
    approx_mixed(n_labeled, n_total, p, delta, gamma)
}

/// Grid of per-class object counts to tabulate.
#[derive(Debug, Clone, PartialEq)]
pub enum ApproxGrid {
    Supervised {
        n_per_class: Vec<usize>,
    },
    SemiSupervised {
        n_labeled_per_class: usize,
        n_total_per_class: Vec<usize>,
    },
}

#[derive(Debug, Clone)]
pub struct ApproxConfig {
    pub grid: ApproxGrid,
    pub p: usize,
    pub delta: f64,
    pub gamma: GammaSpec,
}

impl ApproxConfig {
    pub fn digest(&self) -> String {
        let grid = match &self.grid {
            ApproxGrid::Supervised { n_per_class } => format!("supervised;n_per_class={n_per_class:?}"),
            ApproxGrid::SemiSupervised { n_labeled_per_class, n_total_per_class } => format!(
                "semi-supervised;n_labeled_per_class={n_labeled_per_class};n_total_per_class={n_total_per_class:?}"
            ),
        };
        format!(
            "approx;{grid};p={};delta={};gamma={}",
            self.p, self.delta, self.gamma
        )
    }
}

/// Tabulates the approximation over the grid.
///
/// Curve ids carry the regime (`approx-supervised-pinv`,
/// `approx-semi-supervised-fullrank`, ...). Grid points with `2N == p` are
/// skipped and reported in the curve's warnings.
pub fn learning_curve_approx(config: &ApproxConfig) -> Result<LearningCurve> {
    let mut curve = LearningCurve::new(config.digest());
    let (name, n_labeled, totals): (&str, Option<usize>, &[usize]) = match &config.grid {
        ApproxGrid::Supervised { n_per_class } => ("approx-supervised", None, n_per_class),
        ApproxGrid::SemiSupervised {
            n_labeled_per_class,
            n_total_per_class,
        } => (
            "approx-semi-supervised",
            Some(*n_labeled_per_class),
            n_total_per_class,
        ),
    };
    let mut previous: Option<Regime> = None;
    for &n in totals {
        let result = match n_labeled {
            None => approx_error_supervised(n, config.p, config.delta, &config.gamma),
            Some(l) => approx_error_semisup(l, n, config.p, config.delta, &config.gamma),
        };
        let (error, regime) = match result {
            Ok(v) => v,
            Err(Error::Regime(msg)) => {
                curve.warnings.push(format!("{name}: skipped N={n}: {msg}"));
                continue;
            }
            Err(e) => return Err(e),
        };
        if previous.is_some_and(|r| r != regime) {
            curve
                .warnings
                .push(format!("{name}: regime switches to {} at N={n}", regime.tag()));
        }
        previous = Some(regime);
        let labeled = n_labeled.unwrap_or(n);
        curve.points.push(CurvePoint {
            curve_id: format!("{name}-{}", regime.tag()),
            n_labeled: 2 * labeled,
            n_unlabeled: 2 * (n - labeled),
            error: ErrorEstimate::exact(error),
        });
    }
    Ok(curve)
}
