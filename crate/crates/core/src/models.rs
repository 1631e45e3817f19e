//! Process families, market/contract parameters, admissible ranges, and the
//! characteristic function of normalized log-price.
//!
//! Prices are quoted per unit strike throughout: the spot enters only as the
//! moneyness ratio `S0/K`, and the characteristic function is that of
//! `ln(S_T/K)` under the risk-neutral measure, so `char_fn(-i)` equals the
//! discounted forward `m·exp((r-q)T)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One day in year units; "1 day" maturities are encoded as `1/365`.
pub const ONE_DAY: f64 = 1.0 / 365.0;

// ---------------------------------------------------------------------------
// Families and contracts
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelFamily {
    Gbm,
    Vg,
    Gbmsa,
    Vgsa,
}

impl ModelFamily {
    pub const ALL: [ModelFamily; 4] = [
        ModelFamily::Gbm,
        ModelFamily::Vg,
        ModelFamily::Gbmsa,
        ModelFamily::Vgsa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelFamily::Gbm => "gbm",
            ModelFamily::Vg => "vg",
            ModelFamily::Gbmsa => "gbmsa",
            ModelFamily::Vgsa => "vgsa",
        }
    }

    /// Model-parameter column names, in table order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            ModelFamily::Gbm => &["sigma"],
            ModelFamily::Vg => &["sigma", "theta", "nu"],
            ModelFamily::Gbmsa => &["sigma_v", "kappa", "rho", "theta_long", "v0"],
            ModelFamily::Vgsa => &["sigma", "theta", "nu", "kappa", "eta", "lambda"],
        }
    }

    pub fn param_count(self) -> usize {
        self.param_names().len()
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gbm" => Ok(ModelFamily::Gbm),
            "vg" => Ok(ModelFamily::Vg),
            "gbmsa" | "heston" => Ok(ModelFamily::Gbmsa),
            "vgsa" => Ok(ModelFamily::Vgsa),
            other => Err(Error::invalid(format!(
                "unknown model family '{other}' (expected gbm, vg, gbmsa, or vgsa)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContractKind {
    EuropeanCall,
    UpAndOutPut,
    AmericanPut,
}

impl ContractKind {
    pub fn name(self) -> &'static str {
        match self {
            ContractKind::EuropeanCall => "european-call",
            ContractKind::UpAndOutPut => "up-and-out-put",
            ContractKind::AmericanPut => "american-put",
        }
    }

    /// Up-and-out contracts carry a barrier column; the others must not.
    pub fn requires_barrier(self) -> bool {
        matches!(self, ContractKind::UpAndOutPut)
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "european-call" | "ec" => Ok(ContractKind::EuropeanCall),
            "up-and-out-put" | "uop" => Ok(ContractKind::UpAndOutPut),
            "american-put" | "ap" => Ok(ContractKind::AmericanPut),
            other => Err(Error::invalid(format!(
                "unknown contract '{other}' (expected european-call, up-and-out-put, or american-put)"
            ))),
        }
    }
}

// ---------------------------------------------------------------------------
// Market and model parameters
// ---------------------------------------------------------------------------

/// Product and market parameters, in normalized (per unit strike) units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketParams {
    /// Moneyness `S0/K`.
    pub moneyness: f64,
    /// Maturity in years.
    pub maturity: f64,
    /// Continuously-compounded risk-free rate per year.
    pub rate_r: f64,
    /// Continuous dividend yield per year.
    pub dividend_q: f64,
    /// Barrier level `H/K`; present only for barrier contracts.
    pub barrier_ratio: Option<f64>,
}

impl MarketParams {
    pub fn vanilla(moneyness: f64, maturity: f64, rate_r: f64, dividend_q: f64) -> Self {
        MarketParams {
            moneyness,
            maturity,
            rate_r,
            dividend_q,
            barrier_ratio: None,
        }
    }

    pub fn with_barrier(
        moneyness: f64,
        barrier_ratio: f64,
        maturity: f64,
        rate_r: f64,
        dividend_q: f64,
    ) -> Self {
        MarketParams {
            moneyness,
            maturity,
            rate_r,
            dividend_q,
            barrier_ratio: Some(barrier_ratio),
        }
    }

    pub fn check_invariants(&self) -> Result<()> {
        if !(self.moneyness > 0.0) || !self.moneyness.is_finite() {
            return Err(Error::invalid(format!("moneyness {} must be > 0", self.moneyness)));
        }
        if !(self.maturity > 0.0) || !self.maturity.is_finite() {
            return Err(Error::invalid(format!("maturity {} must be > 0", self.maturity)));
        }
        if !(self.rate_r >= 0.0) {
            return Err(Error::invalid(format!("rate {} must be >= 0", self.rate_r)));
        }
        if !(self.dividend_q >= 0.0) {
            return Err(Error::invalid(format!("dividend {} must be >= 0", self.dividend_q)));
        }
        if let Some(b) = self.barrier_ratio {
            if !(b > 0.0) || !b.is_finite() {
                return Err(Error::invalid(format!("barrier ratio {b} must be > 0")));
            }
            // knock-out level is above (or at) spot
            if self.moneyness > b {
                return Err(Error::invalid(format!(
                    "moneyness {} exceeds barrier ratio {b}",
                    self.moneyness
                )));
            }
        }
        Ok(())
    }

    /// Discounted forward per unit strike, `m·e^{(r-q)T}`.
    pub fn forward(&self) -> f64 {
        self.moneyness * ((self.rate_r - self.dividend_q) * self.maturity).exp()
    }
}

/// Process parameters; exactly one family at a time.
///
/// Field names follow the model tables: for GBMSA, `sigma_v` is the
/// volatility of variance and `theta_long` the long-run variance; for
/// VG/VGSA, `theta` is the skewness drift and `nu` the variance rate of the
/// gamma clock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ModelParams {
    Gbm {
        sigma: f64,
    },
    Vg {
        sigma: f64,
        theta: f64,
        nu: f64,
    },
    Gbmsa {
        sigma_v: f64,
        kappa: f64,
        rho: f64,
        theta_long: f64,
        v0: f64,
    },
    Vgsa {
        sigma: f64,
        theta: f64,
        nu: f64,
        kappa: f64,
        eta: f64,
        lambda: f64,
    },
}

/// Finite-moment condition for the VG martingale correction,
/// `1 - θν - σ²ν/2 > 0`.
pub fn vg_moment_margin(sigma: f64, theta: f64, nu: f64) -> f64 {
    1.0 - theta * nu - 0.5 * sigma * sigma * nu
}

impl ModelParams {
    pub fn family(&self) -> ModelFamily {
        match self {
            ModelParams::Gbm { .. } => ModelFamily::Gbm,
            ModelParams::Vg { .. } => ModelFamily::Vg,
            ModelParams::Gbmsa { .. } => ModelFamily::Gbmsa,
            ModelParams::Vgsa { .. } => ModelFamily::Vgsa,
        }
    }

    /// Parameter values in the family's table order.
    pub fn table_values(&self) -> Vec<f64> {
        match *self {
            ModelParams::Gbm { sigma } => vec![sigma],
            ModelParams::Vg { sigma, theta, nu } => vec![sigma, theta, nu],
            ModelParams::Gbmsa {
                sigma_v,
                kappa,
                rho,
                theta_long,
                v0,
            } => vec![sigma_v, kappa, rho, theta_long, v0],
            ModelParams::Vgsa {
                sigma,
                theta,
                nu,
                kappa,
                eta,
                lambda,
            } => vec![sigma, theta, nu, kappa, eta, lambda],
        }
    }

    /// Inverse of [`table_values`](Self::table_values).
    pub fn from_table_values(family: ModelFamily, v: &[f64]) -> Result<Self> {
        let want = family.param_count();
        if v.len() != want {
            return Err(Error::invalid(format!(
                "{} expects {want} model parameters, got {}",
                family.name(),
                v.len()
            )));
        }
        Ok(match family {
            ModelFamily::Gbm => ModelParams::Gbm { sigma: v[0] },
            ModelFamily::Vg => ModelParams::Vg {
                sigma: v[0],
                theta: v[1],
                nu: v[2],
            },
            ModelFamily::Gbmsa => ModelParams::Gbmsa {
                sigma_v: v[0],
                kappa: v[1],
                rho: v[2],
                theta_long: v[3],
                v0: v[4],
            },
            ModelFamily::Vgsa => ModelParams::Vgsa {
                sigma: v[0],
                theta: v[1],
                nu: v[2],
                kappa: v[3],
                eta: v[4],
                lambda: v[5],
            },
        })
    }

    pub fn check_invariants(&self) -> Result<()> {
        let pos = |name: &str, x: f64| -> Result<()> {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(format!("{name} = {x} must be > 0")))
            }
        };
        match *self {
            ModelParams::Gbm { sigma } => pos("sigma", sigma),
            ModelParams::Vg { sigma, theta, nu } => {
                pos("sigma", sigma)?;
                pos("nu", nu)?;
                if vg_moment_margin(sigma, theta, nu) <= 0.0 {
                    return Err(Error::invalid(format!(
                        "VG finite-moment condition violated: 1 - theta*nu - sigma^2*nu/2 = {}",
                        vg_moment_margin(sigma, theta, nu)
                    )));
                }
                Ok(())
            }
            ModelParams::Gbmsa {
                sigma_v,
                kappa,
                rho,
                theta_long,
                v0,
            } => {
                pos("sigma_v", sigma_v)?;
                pos("kappa", kappa)?;
                pos("theta_long", theta_long)?;
                pos("v0", v0)?;
                if !(rho > -1.0 && rho < 1.0) {
                    return Err(Error::invalid(format!("rho = {rho} must lie in (-1, 1)")));
                }
                Ok(())
            }
            ModelParams::Vgsa {
                sigma,
                theta,
                nu,
                kappa,
                eta,
                lambda,
            } => {
                pos("sigma", sigma)?;
                pos("nu", nu)?;
                pos("kappa", kappa)?;
                pos("eta", eta)?;
                pos("lambda", lambda)?;
                if vg_moment_margin(sigma, theta, nu) <= 0.0 {
                    return Err(Error::invalid(format!(
                        "VGSA finite-moment condition violated: 1 - theta*nu - sigma^2*nu/2 = {}",
                        vg_moment_margin(sigma, theta, nu)
                    )));
                }
                Ok(())
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Admissible ranges
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl Range {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo < hi, "range lower bound {lo} must be below upper bound {hi}");
        Range { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Per-parameter bounds for one family, aligned with the dataset column
/// order: `[moneyness, (barrier_ratio), maturity, r, q, <model params>]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamRanges {
    pub family: ModelFamily,
    pub with_barrier: bool,
    names: Vec<String>,
    ranges: Vec<Range>,
}

impl ParamRanges {
    /// Default market and model ranges: moneyness 0.8→1.2, maturity
    /// 1 day→3 years, r 1%→3%, q 0%→3%, and the per-family model table.
    pub fn defaults(family: ModelFamily, contract: ContractKind) -> Self {
        let mut names: Vec<String> = vec!["moneyness".into()];
        let mut ranges = vec![Range::new(0.8, 1.2)];
        let with_barrier = contract.requires_barrier();
        if with_barrier {
            names.push("barrier_ratio".into());
            ranges.push(Range::new(0.8, 1.2));
        }
        names.push("maturity".into());
        ranges.push(Range::new(ONE_DAY, 3.0));
        names.push("r".into());
        ranges.push(Range::new(0.01, 0.03));
        names.push("q".into());
        ranges.push(Range::new(0.0, 0.03));
        for (name, range) in family.param_names().iter().zip(Self::model_table(family)) {
            names.push((*name).into());
            ranges.push(range);
        }
        ParamRanges {
            family,
            with_barrier,
            names,
            ranges,
        }
    }

    fn model_table(family: ModelFamily) -> Vec<Range> {
        match family {
            ModelFamily::Gbm => vec![Range::new(0.05, 0.50)],
            ModelFamily::Vg => vec![
                Range::new(0.05, 0.50),
                Range::new(-0.90, -0.05),
                Range::new(0.05, 1.00),
            ],
            ModelFamily::Gbmsa => vec![
                Range::new(0.05, 0.50),
                Range::new(0.20, 2.00),
                Range::new(-0.90, -0.10),
                Range::new(0.01, 0.20),
                Range::new(0.01, 0.20),
            ],
            ModelFamily::Vgsa => vec![
                Range::new(0.05, 0.50),
                Range::new(-0.90, -0.05),
                Range::new(0.05, 1.00),
                Range::new(0.20, 3.00),
                Range::new(0.01, 0.20),
                Range::new(0.01, 0.20),
            ],
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn ranges(&self) -> &[Range] {
        &self.ranges
    }

    pub fn dim(&self) -> usize {
        self.ranges.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn get(&self, name: &str) -> Option<Range> {
        self.index_of(name).map(|i| self.ranges[i])
    }

    /// Replace one parameter's bounds (e.g. shift moneyness for the
    /// deep-out-of-the-money validation case).
    pub fn set(&mut self, name: &str, lo: f64, hi: f64) -> Result<()> {
        match self.index_of(name) {
            Some(i) => {
                self.ranges[i] = Range::new(lo, hi);
                Ok(())
            }
            None => Err(Error::invalid(format!("no parameter named '{name}'"))),
        }
    }

    /// Split a full parameter row into market and model parts.
    pub fn split_row(&self, row: &[f64]) -> Result<(MarketParams, ModelParams)> {
        if row.len() != self.dim() {
            return Err(Error::invalid(format!(
                "row has {} entries, ranges describe {}",
                row.len(),
                self.dim()
            )));
        }
        let mut i = 0;
        let moneyness = row[i];
        i += 1;
        let barrier_ratio = if self.with_barrier {
            i += 1;
            Some(row[i - 1])
        } else {
            None
        };
        let maturity = row[i];
        let rate_r = row[i + 1];
        let dividend_q = row[i + 2];
        i += 3;
        let market = MarketParams {
            moneyness,
            maturity,
            rate_r,
            dividend_q,
            barrier_ratio,
        };
        let model = ModelParams::from_table_values(self.family, &row[i..])?;
        Ok((market, model))
    }
}

/// True iff every market field lies inside its configured range and the
/// type invariants hold. Pure predicate: never errors.
pub fn validate_market(market: &MarketParams, ranges: &ParamRanges) -> bool {
    if market.check_invariants().is_err() {
        return false;
    }
    if market.barrier_ratio.is_some() != ranges.with_barrier {
        return false;
    }
    let checks = [
        ("moneyness", Some(market.moneyness)),
        ("barrier_ratio", market.barrier_ratio),
        ("maturity", Some(market.maturity)),
        ("r", Some(market.rate_r)),
        ("q", Some(market.dividend_q)),
    ];
    checks.iter().all(|(name, value)| match value {
        Some(x) => ranges.get(name).is_some_and(|r| r.contains(*x)),
        None => true,
    })
}

/// True iff every model parameter lies inside its configured range and the
/// type invariants (including the VG/VGSA finite-moment condition) hold.
pub fn validate_model(model: &ModelParams, ranges: &ParamRanges) -> bool {
    if model.family() != ranges.family || model.check_invariants().is_err() {
        return false;
    }
    model
        .table_values()
        .iter()
        .zip(ranges.family.param_names())
        .all(|(x, name)| ranges.get(name).is_some_and(|r| r.contains(*x)))
}

/// Joint check of a (market, model) row.
pub fn validate_row(market: &MarketParams, model: &ModelParams, ranges: &ParamRanges) -> bool {
    validate_market(market, ranges) && validate_model(model, ranges)
}

// ---------------------------------------------------------------------------
// Characteristic function of normalized log-price
// ---------------------------------------------------------------------------

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Prepared characteristic function of `ln(S_T/K)`.
///
/// Construction validates the parameters once; evaluation is then
/// infallible and cheap, which is what the transform pricer needs on its
/// frequency grid. The risk-neutral drift includes each model's martingale
/// correction, so `eval(-i) = m·e^{(r-q)T}` holds by construction.
#[derive(Debug, Clone)]
pub struct LogMoneynessCf {
    x0: f64,
    drift_t: f64,
    t: f64,
    kind: CfKind,
}

#[derive(Debug, Clone)]
enum CfKind {
    Gbm {
        sigma2: f64,
    },
    Vg {
        sigma: f64,
        theta: f64,
        nu: f64,
        /// ψ(-i), the VG Lévy exponent at the martingale point.
        psi_mi: f64,
    },
    Gbmsa {
        sigma_v: f64,
        kappa: f64,
        rho: f64,
        theta_long: f64,
        v0: f64,
    },
    Vgsa {
        sigma: f64,
        theta: f64,
        nu: f64,
        kappa: f64,
        eta: f64,
        lambda: f64,
        /// log E[e^{ψ(-i)·Y_T}], the stochastic-clock normalizer.
        log_norm: f64,
    },
}

impl LogMoneynessCf {
    pub fn new(model: &ModelParams, market: &MarketParams) -> Result<Self> {
        market.check_invariants()?;
        model.check_invariants()?;
        let t = market.maturity;
        let kind = match *model {
            ModelParams::Gbm { sigma } => CfKind::Gbm {
                sigma2: sigma * sigma,
            },
            ModelParams::Vg { sigma, theta, nu } => CfKind::Vg {
                sigma,
                theta,
                nu,
                psi_mi: -vg_moment_margin(sigma, theta, nu).ln() / nu,
            },
            ModelParams::Gbmsa {
                sigma_v,
                kappa,
                rho,
                theta_long,
                v0,
            } => CfKind::Gbmsa {
                sigma_v,
                kappa,
                rho,
                theta_long,
                v0,
            },
            ModelParams::Vgsa {
                sigma,
                theta,
                nu,
                kappa,
                eta,
                lambda,
            } => {
                let psi_mi = -vg_moment_margin(sigma, theta, nu).ln() / nu;
                let log_norm = cir_log_mgf(Complex64::new(psi_mi, 0.0), t, kappa, eta, lambda);
                if !log_norm.re.is_finite() {
                    return Err(Error::Numerical(
                        "VGSA clock normalizer is not finite".into(),
                    ));
                }
                CfKind::Vgsa {
                    sigma,
                    theta,
                    nu,
                    kappa,
                    eta,
                    lambda,
                    log_norm: log_norm.re,
                }
            }
        };
        Ok(LogMoneynessCf {
            x0: market.moneyness.ln(),
            drift_t: (market.rate_r - market.dividend_q) * t,
            t,
            kind,
        })
    }

    /// E[exp(i·u·ln(S_T/K))].
    pub fn eval(&self, u: Complex64) -> Complex64 {
        (I * u * (self.x0 + self.drift_t) + self.correction(u)).exp()
    }

    /// Same characteristic function with the spot normalized away:
    /// E[exp(i·u·ln(S_T/S_0))]. The transform pricer works in these
    /// coordinates and re-attaches moneyness through the strike grid.
    pub fn eval_spot_normalized(&self, u: Complex64) -> Complex64 {
        (I * u * self.drift_t + self.correction(u)).exp()
    }

    /// Log of the drift-free part; vanishes at `u = -i` for every family,
    /// which is exactly the martingale normalization.
    fn correction(&self, u: Complex64) -> Complex64 {
        let iu = I * u;
        match self.kind {
            CfKind::Gbm { sigma2 } => -0.5 * sigma2 * self.t * (iu + u * u),
            CfKind::Vg {
                sigma,
                theta,
                nu,
                psi_mi,
            } => self.t * (vg_levy_exponent(u, sigma, theta, nu) - iu * psi_mi),
            CfKind::Gbmsa {
                sigma_v,
                kappa,
                rho,
                theta_long,
                v0,
            } => heston_log_cf(u, self.t, sigma_v, kappa, rho, theta_long, v0),
            CfKind::Vgsa {
                sigma,
                theta,
                nu,
                kappa,
                eta,
                lambda,
                log_norm,
            } => {
                let psi = vg_levy_exponent(u, sigma, theta, nu);
                cir_log_mgf(psi, self.t, kappa, eta, lambda) - iu * log_norm
            }
        }
    }
}

/// Unit-time log-characteristic exponent of the VG process,
/// `ψ(u) = -ln(1 - iθνu + σ²νu²/2)/ν`.
fn vg_levy_exponent(u: Complex64, sigma: f64, theta: f64, nu: f64) -> Complex64 {
    let arg = 1.0 - I * u * (theta * nu) + 0.5 * sigma * sigma * nu * u * u;
    -arg.ln() / nu
}

/// Drift-free log-CF of the square-root stochastic-variance diffusion in
/// the branch-stable formulation.
///
/// The raw closed form divides `ξ - d` by `σ_v²`, which cancels
/// catastrophically as `σ_v → 0`. Rewriting
/// `(ξ - d)/σ_v² = -(iu + u²)/(ξ + d)` keeps the degenerate limit (where
/// the model collapses to constant variance) accurate to machine
/// precision, and the remaining `log/σ_v²` term switches to a series when
/// the trap ratio `g` is tiny.
fn heston_log_cf(
    u: Complex64,
    t: f64,
    sigma_v: f64,
    kappa: f64,
    rho: f64,
    theta_long: f64,
    v0: f64,
) -> Complex64 {
    let iu = I * u;
    let sv2 = sigma_v * sigma_v;
    let xi = kappa - rho * sigma_v * iu;
    let d = (xi * xi + sv2 * (iu + u * u)).sqrt();
    let em = -(iu + u * u) / (xi + d); // (ξ - d)/σ_v², cancellation-free
    let g = sv2 * em / (xi + d); // little-trap ratio (ξ - d)/(ξ + d)
    let edt = (-d * t).exp();

    // (1/σ_v²)·[ln(1 - g·edt) - ln(1 - g)]
    let log_term = if g.norm() < 1e-4 {
        // series in g; w = g/σ_v² stays O(1)
        let w = em / (xi + d);
        let y = edt;
        -w * ((y - 1.0) + g * (y * y - 1.0) / 2.0 + g * g * (y * y * y - 1.0) / 3.0)
    } else {
        ((1.0 - g * edt).ln() - (1.0 - g).ln()) / sv2
    };

    let a = kappa * theta_long * (em * t - 2.0 * log_term);
    let b = v0 * em * (1.0 - edt) / (1.0 - g * edt);
    a + b
}

/// Log moment-generating function of the integrated CIR clock,
/// `ln E[exp(s·∫_0^T y_u du)]` with `y_0 = 1`,
/// `dy = κ(η - y)dt + λ√y dW`.
///
/// Same cancellation concern as the variance diffusion: the textbook form
/// subtracts two terms of size `κ²ηT/λ²`. Using
/// `κ - γ = 2λ²s/(κ + γ)` and `ζ = λ²s/(γ(κ+γ))` every piece stays O(1)
/// and the `log/λ²` factor gets a series branch for small arguments.
fn cir_log_mgf(s: Complex64, t: f64, kappa: f64, eta: f64, lambda: f64) -> Complex64 {
    let l2 = lambda * lambda;
    let gamma = (kappa * kappa - 2.0 * l2 * s).sqrt();
    let kg = kappa + gamma;
    let edt = (-gamma * t).exp();
    let one_m_edt = 1.0 - edt;

    let first = 2.0 * kappa * eta * s * t / kg;

    // ln(1 + ζ(1-e^{-γT}))/λ² with ζ = λ²s/(γ(κ+γ))
    let w = s / (gamma * kg); // ζ/λ²
    let zeta = l2 * w;
    let z = zeta * one_m_edt;
    let log_over_l2 = if z.norm() < 1e-4 {
        let wu = w * one_m_edt;
        wu - l2 * wu * wu / 2.0 + l2 * l2 * wu * wu * wu / 3.0
    } else {
        (1.0 + z).ln() / l2
    };
    let second = -2.0 * kappa * eta * log_over_l2;

    // B·y0 with y0 = 1; coth(γT/2) = (1+e^{-γT})/(1-e^{-γT})
    let third = 2.0 * s * one_m_edt / (kappa * one_m_edt + gamma * (1.0 + edt));

    first + second + third
}

/// Characteristic function of `ln(S_T/K)` under the risk-neutral measure.
///
/// Rejects parameters violating the family's invariants (notably the
/// VG/VGSA finite-moment condition) and non-finite arguments.
pub fn char_fn(model: &ModelParams, market: &MarketParams, u: Complex64) -> Result<Complex64> {
    if !u.re.is_finite() || !u.im.is_finite() {
        return Err(Error::invalid(format!("non-finite argument u = {u}")));
    }
    let cf = LogMoneynessCf::new(model, market)?;
    let value = cf.eval(u);
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::Numerical(format!(
            "characteristic function not finite at u = {u}"
        )));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn vanilla(m: f64, t: f64, r: f64, q: f64) -> MarketParams {
        MarketParams::vanilla(m, t, r, q)
    }

    fn sample_models() -> Vec<(ModelParams, MarketParams)> {
        vec![
            (ModelParams::Gbm { sigma: 0.2 }, vanilla(1.0, 1.0, 0.02, 0.01)),
            (
                ModelParams::Vg {
                    sigma: 0.2,
                    theta: -0.14,
                    nu: 0.2,
                },
                vanilla(1.1, 0.5, 0.03, 0.0),
            ),
            (
                ModelParams::Gbmsa {
                    sigma_v: 0.3,
                    kappa: 1.2,
                    rho: -0.6,
                    theta_long: 0.04,
                    v0: 0.05,
                },
                vanilla(0.9, 2.0, 0.01, 0.02),
            ),
            (
                ModelParams::Vgsa {
                    sigma: 0.25,
                    theta: -0.3,
                    nu: 0.4,
                    kappa: 1.5,
                    eta: 0.1,
                    lambda: 0.15,
                },
                vanilla(1.05, 1.5, 0.02, 0.0),
            ),
        ]
    }

    #[test]
    fn char_fn_at_zero_is_one() {
        for (model, market) in sample_models() {
            let v = char_fn(&model, &market, Complex64::new(0.0, 0.0)).unwrap();
            assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn char_fn_martingale_condition() {
        for (model, market) in sample_models() {
            let v = char_fn(&model, &market, -I).unwrap();
            let fwd = market.forward();
            assert!(
                (v.re - fwd).abs() / fwd <= 1e-10 && v.im.abs() <= 1e-12,
                "{:?}: got {v}, want {fwd}",
                model.family()
            );
        }
    }

    #[test]
    fn char_fn_gbm_reference_point() {
        // m=1, T=1, r=q=0, sigma=0.2, u=1: exp(-0.02i - 0.02).
        // A 10^7-draw lognormal Monte-Carlo estimate of E[e^{i ln S_T}]
        // confirms this closed form; see tests/oracle_cross_checks.rs.
        let model = ModelParams::Gbm { sigma: 0.2 };
        let market = vanilla(1.0, 1.0, 0.0, 0.0);
        let v = char_fn(&model, &market, Complex64::new(1.0, 0.0)).unwrap();
        let expected = Complex64::new(0.0, -0.02).exp() * (-0.02f64).exp();
        assert_abs_diff_eq!(v.re, expected.re, epsilon = 1e-12);
        assert_abs_diff_eq!(v.im, expected.im, epsilon = 1e-12);
        assert_abs_diff_eq!(v.re, 0.98000, epsilon = 5e-5);
        assert_abs_diff_eq!(v.im, -0.01960, epsilon = 5e-5);
    }

    #[test]
    fn char_fn_conjugate_symmetry() {
        for (model, market) in sample_models() {
            for &ur in &[0.3, 1.7, 12.0, 100.0] {
                let plus = char_fn(&model, &market, Complex64::new(ur, 0.0)).unwrap();
                let minus = char_fn(&model, &market, Complex64::new(-ur, 0.0)).unwrap();
                assert_abs_diff_eq!(plus.re, minus.re, epsilon = 1e-12);
                assert_abs_diff_eq!(plus.im, -minus.im, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn gbmsa_degenerates_to_gbm() {
        let sigma = 0.25;
        let market = vanilla(1.05, 1.3, 0.02, 0.01);
        let gbm = ModelParams::Gbm { sigma };
        let heston = ModelParams::Gbmsa {
            sigma_v: 1e-8,
            kappa: 1.0,
            rho: -0.5,
            theta_long: sigma * sigma,
            v0: sigma * sigma,
        };
        for &ur in &[0.0, 0.5, 1.0, 3.0, 10.0, 50.0] {
            let a = char_fn(&gbm, &market, Complex64::new(ur, 0.0)).unwrap();
            let b = char_fn(&heston, &market, Complex64::new(ur, 0.0)).unwrap();
            assert!(
                (a - b).norm() <= 1e-8,
                "u={ur}: gbm {a} vs degenerate heston {b}"
            );
        }
    }

    #[test]
    fn vgsa_degenerates_to_vg() {
        // lambda→0, kappa→∞, eta=1 makes the clock deterministic.
        let (sigma, theta, nu) = (0.2, -0.2, 0.3);
        let market = vanilla(0.95, 0.8, 0.02, 0.0);
        let vg = ModelParams::Vg { sigma, theta, nu };
        let vgsa = ModelParams::Vgsa {
            sigma,
            theta,
            nu,
            kappa: 1e6,
            eta: 1.0,
            lambda: 1e-6,
        };
        for &ur in &[0.0, 0.7, 2.0, 8.0, 30.0] {
            let a = char_fn(&vg, &market, Complex64::new(ur, 0.0)).unwrap();
            let b = char_fn(&vgsa, &market, Complex64::new(ur, 0.0)).unwrap();
            assert!((a - b).norm() <= 1e-4, "u={ur}: vg {a} vs degenerate vgsa {b}");
        }
    }

    #[test]
    fn char_fn_rejects_bad_inputs() {
        let market = vanilla(1.0, 1.0, 0.02, 0.0);
        // moment condition: 1 - 0.5·1 - 0.5·2.25·1 < 0
        let bad_vg = ModelParams::Vg {
            sigma: 1.5,
            theta: 0.5,
            nu: 1.0,
        };
        assert!(char_fn(&bad_vg, &market, Complex64::new(1.0, 0.0)).is_err());
        let gbm = ModelParams::Gbm { sigma: 0.2 };
        assert!(char_fn(&gbm, &market, Complex64::new(f64::NAN, 0.0)).is_err());
        let bad_market = vanilla(1.0, -1.0, 0.02, 0.0);
        assert!(char_fn(&gbm, &bad_market, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn validate_examples() {
        let ranges = ParamRanges::defaults(ModelFamily::Gbm, ContractKind::EuropeanCall);
        assert!(validate_model(&ModelParams::Gbm { sigma: 0.25 }, &ranges));
        assert!(!validate_market(
            &vanilla(0.5, 1.0, 0.02, 0.0),
            &ranges
        ));
        // interior market point passes
        assert!(validate_market(&vanilla(1.0, 1.0, 0.02, 0.0), &ranges));

        // table corner: the finite-moment condition holds, so validate is true
        let vg_ranges = ParamRanges::defaults(ModelFamily::Vg, ContractKind::EuropeanCall);
        let corner = ModelParams::Vg {
            sigma: 0.5,
            theta: -0.9,
            nu: 1.0,
        };
        assert!(vg_moment_margin(0.5, -0.9, 1.0) > 0.0);
        assert!(validate_model(&corner, &vg_ranges));
    }

    #[test]
    fn vg_moment_condition_holds_on_entire_default_box() {
        // worst corner of the table box is theta = -0.05 (least negative),
        // sigma = 0.5, nu = 1.0; margin there is 0.925
        let worst = vg_moment_margin(0.5, -0.05, 1.0);
        assert!(worst > 0.9 && worst < 0.95);
        for &family in &[ModelFamily::Vg, ModelFamily::Vgsa] {
            let ranges = ParamRanges::defaults(family, ContractKind::EuropeanCall);
            let s = ranges.get("sigma").unwrap();
            let th = ranges.get("theta").unwrap();
            let nu = ranges.get("nu").unwrap();
            for &sig in &[s.lo, s.hi] {
                for &t in &[th.lo, th.hi] {
                    for &n in &[nu.lo, nu.hi] {
                        assert!(vg_moment_margin(sig, t, n) > 0.0, "corner ({sig},{t},{n})");
                    }
                }
            }
        }
    }

    #[test]
    fn barrier_market_invariants() {
        let bad = MarketParams::with_barrier(1.1, 1.0, 0.5, 0.02, 0.0);
        assert!(bad.check_invariants().is_err());
        let ok = MarketParams::with_barrier(1.0, 1.1, 0.5, 0.02, 0.0);
        assert!(ok.check_invariants().is_ok());
    }

    #[test]
    fn ranges_split_row_round_trip() {
        let ranges = ParamRanges::defaults(ModelFamily::Gbmsa, ContractKind::UpAndOutPut);
        assert_eq!(
            ranges.names(),
            &[
                "moneyness",
                "barrier_ratio",
                "maturity",
                "r",
                "q",
                "sigma_v",
                "kappa",
                "rho",
                "theta_long",
                "v0"
            ]
        );
        let row = [1.0, 1.15, 0.5, 0.02, 0.01, 0.3, 1.0, -0.5, 0.04, 0.05];
        let (market, model) = ranges.split_row(&row).unwrap();
        assert_eq!(market.barrier_ratio, Some(1.15));
        assert_eq!(model.table_values(), vec![0.3, 1.0, -0.5, 0.04, 0.05]);
    }
}
