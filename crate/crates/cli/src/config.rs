//! Run configuration: a versioned TOML file with a `[model]` block and one
//! block per experiment. Everything is validated against the library
//! invariants before any computation starts.

use serde::Deserialize;

use epdt_core::{Error, ModelParams, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Config dialect version; this binary understands version 1.
    pub config_version: u32,
    pub model: ModelBlock,
    #[serde(default)]
    pub linear: LinearBlock,
    #[serde(default)]
    pub kato: KatoBlock,
    #[serde(default)]
    pub radon: RadonBlock,
    #[serde(default)]
    pub sweep: SweepBlock,
    #[serde(default)]
    pub iterate: IterateBlock,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBlock {
    pub ell: f64,
    pub mu: f64,
    pub nu2: f64,
    pub n: usize,
    pub radius: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinearBlock {
    pub t_end: f64,
    pub dx: f64,
    /// Comparison points across the cone of the data.
    pub samples: usize,
    pub u0_amplitude: f64,
    pub u1_amplitude: f64,
    /// Pass/fail threshold on the relative L-infinity error.
    pub tolerance: f64,
}

impl Default for LinearBlock {
    fn default() -> Self {
        Self {
            t_end: 3.0,
            dx: 1.0 / 400.0,
            samples: 33,
            u0_amplitude: 1.0,
            u1_amplitude: 0.5,
            tolerance: 2e-3,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KatoBlock {
    pub draws: usize,
    pub blowup_threshold: f64,
    pub mu_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub b_min: f64,
    pub b_max: f64,
    pub a_span: f64,
}

impl Default for KatoBlock {
    fn default() -> Self {
        Self {
            draws: 60,
            blowup_threshold: 1e12,
            mu_max: 4.0,
            p_min: 1.3,
            p_max: 3.0,
            b_min: 1.0,
            b_max: 10.0,
            a_span: 2.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadonBlock {
    /// "bump" (smooth) or "ball" (indicator).
    pub profile: String,
    pub rho_points: usize,
    /// Also evaluate the hyperplane-definition oracle (n <= 4).
    pub with_oracle: bool,
}

impl Default for RadonBlock {
    fn default() -> Self {
        Self {
            profile: "bump".into(),
            rho_points: 41,
            with_oracle: true,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepBlock {
    pub eps_min: f64,
    pub eps_max: f64,
    pub eps_count: usize,
    pub t_max: f64,
    pub dx: f64,
    /// 0 = use the shifted Strauss exponent of the model.
    pub p: f64,
    pub u0_amplitude: f64,
    pub u1_amplitude: f64,
    pub blowup_threshold: f64,
}

impl Default for SweepBlock {
    fn default() -> Self {
        Self {
            eps_min: 0.4,
            eps_max: 1.6,
            eps_count: 8,
            t_max: 400.0,
            dx: 0.02,
            p: 0.0,
            u0_amplitude: 1.0,
            u1_amplitude: 4.0,
            blowup_threshold: 1e8,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IterateBlock {
    /// 0 = use the shifted Strauss exponent of the model.
    pub p: f64,
    pub theta: f64,
    pub a0: f64,
    /// 0 = just above the floor 2(T2^{l+1} - 1).
    pub alpha0: f64,
    pub j_max: u32,
    pub eps_min: f64,
    pub eps_max: f64,
    pub eps_count: usize,
}

impl Default for IterateBlock {
    fn default() -> Self {
        Self {
            p: 0.0,
            theta: 0.75,
            a0: 2.0,
            alpha0: 0.0,
            j_max: 25,
            eps_min: 0.2,
            eps_max: 2.0,
            eps_count: 10,
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text)
            .map_err(|e| Error::InvalidParams(format!("config parse error: {e}")))?;
        if cfg.config_version != 1 {
            return Err(Error::InvalidParams(format!(
                "unsupported config_version {} (expected 1)",
                cfg.config_version
            )));
        }
        cfg.model_params()?; // surface model invariant violations up front
        Ok(cfg)
    }

    pub fn model_params(&self) -> Result<ModelParams> {
        ModelParams::new(
            self.model.ell,
            self.model.mu,
            self.model.nu2,
            self.model.n,
            self.model.radius,
        )
    }

    /// File-name slug derived from the model block.
    pub fn slug(&self) -> String {
        fn num(v: f64) -> String {
            format!("{v}").replace('-', "m").replace('.', "p")
        }
        format!(
            "l{}_mu{}_nu{}_n{}",
            num(self.model.ell),
            num(self.model.mu),
            num(self.model.nu2),
            self.model.n
        )
    }
}
