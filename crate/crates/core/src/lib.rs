//! Pricing oracles, dataset generation, and feedforward-network surrogates
//! for vanilla and exotic options under diffusion and pure-jump dynamics.
//!
//! The crate is organized around a simple pipeline:
//!
//! 1. [`models`] defines the four process families (GBM, VG, GBMSA, VGSA),
//!    market/contract parameters, admissible ranges, and the characteristic
//!    function of normalized log-price used by the transform pricer.
//! 2. [`pricers`] holds the label-generating oracles: closed-form
//!    Black-Merton-Scholes and barrier formulas, a damped-transform FFT
//!    pricer, Monte-Carlo path engines for the stochastic-arrival models,
//!    the Ju-Zhong American-put approximation, and a CRR binomial reference.
//! 3. [`sampling`] draws parameter matrices (uniform or Halton), labels them
//!    through the oracles, and persists datasets as CSV plus a metadata
//!    sidecar.
//! 4. [`neuralnet`] is a from-scratch fully-connected network: forward,
//!    exact reverse-mode gradients, SGD/RMSProp/Adam, inverted dropout,
//!    early-stopped training, metrics, and a versioned model format.
//! 5. [`validation`] reproduces the experiment grid: width/depth/activation
//!    sweeps, three-case validation (interpolation, deep-OTM, long
//!    maturity), quasi vs non-quasi sampling comparison, inference speed
//!    benchmarks, and surrogate-based calibration.

pub mod calibrate;
pub mod error;
pub mod models;
pub mod neuralnet;
pub mod pricers;
pub mod sampling;
pub mod seeds;
pub mod validation;

pub use error::{Error, Result};
pub use models::{ContractKind, MarketParams, ModelFamily, ModelParams, ParamRanges};
pub use neuralnet::{ActivationKind, Metrics, Network, NetworkConfig, Optimizer, TrainConfig};
pub use pricers::{FftConfig, McConfig, PriceEstimate};
pub use sampling::{Dataset, SamplingScheme};
