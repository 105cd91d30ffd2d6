//! JSON run configuration.
//!
//! Every field except `steps` has a default, and unknown keys are rejected.
//! Errors carry the line of the offending key when it appears in the file.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use qw_core::protocol::{DEFAULT_SEED, STANDARD_KICK};
use qw_core::{
    initial_ratchet_state, CoinParams, EnsembleSpec, KickParams, MomentumLattice, ReversalForm,
    ShiftMode, Spin, SpinorState, WalkConfig, WalkError, RESONANT_PERIOD,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ideal,
    Ratchet,
}

impl From<Mode> for ShiftMode {
    fn from(mode: Mode) -> Self {
        match mode {
            Mode::Ideal => ShiftMode::Ideal,
            Mode::Ratchet => ShiftMode::Ratchet,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Kick {
    #[serde(default = "default_k1")]
    pub k1: f64,
    #[serde(default = "default_k2")]
    pub k2: f64,
    #[serde(default = "default_tau")]
    pub tau: f64,
}

impl Default for Kick {
    fn default() -> Self {
        Self {
            k1: default_k1(),
            k2: default_k2(),
            tau: default_tau(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coin {
    pub alpha: f64,
    pub chi: f64,
}

impl From<CoinParams> for Coin {
    fn from(c: CoinParams) -> Self {
        Self {
            alpha: c.alpha,
            chi: c.chi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialKind {
    /// `(|0> + e^{i phi} |1>)/sqrt(2)` in one spin state.
    Ratchet,
    /// A single momentum eigenstate.
    Localized,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Initial {
    pub kind: InitialKind,
    #[serde(default = "default_spin")]
    pub spin: u8,
    /// Momentum of a localized start.
    #[serde(default)]
    pub n: i64,
    #[serde(default)]
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ensemble {
    #[serde(default = "default_samples")]
    pub n_samples: usize,
    #[serde(default)]
    pub sigma_beta: f64,
    #[serde(default)]
    pub thermal_fraction: f64,
    #[serde(default = "default_thermal_sigma")]
    pub thermal_sigma: f64,
}

impl Default for Ensemble {
    fn default() -> Self {
        Self {
            n_samples: default_samples(),
            sigma_beta: 0.0,
            thermal_fraction: 0.0,
            thermal_sigma: default_thermal_sigma(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lattice {
    pub n_min: i64,
    pub n_max: i64,
}

/// One explicit sweep point; unset fields keep the base configuration.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPoint {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_eps: Option<f64>,
    /// `[k1, k2]`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kick: Option<[f64; 2]>,
    /// Pulse area of both coins.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coin_alpha: Option<f64>,
    /// Probability of spin 1 after a coin toss from `|1>`; sets `coin_alpha`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coin_bias: Option<f64>,
}

/// Parameter grid. Exactly one of the fields must be given.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_eps: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kicks: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coin_alpha: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coin_bias: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<SweepPoint>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Composed,
    Direct,
}

impl From<Form> for ReversalForm {
    fn from(form: Form) -> Self {
        match form {
            Form::Composed => ReversalForm::Composed,
            Form::Direct => ReversalForm::DirectConjugate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Reverse {
    /// Forward steps before reversal; defaults to `steps`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps_forward: Option<usize>,
    #[serde(default = "default_form")]
    pub form: Form,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub steps: usize,
    #[serde(default = "default_mode")]
    pub shift_mode: Mode,
    #[serde(default = "default_q")]
    pub q: u32,
    #[serde(default)]
    pub kick: Kick,
    #[serde(default = "default_first_coin")]
    pub first_coin: Coin,
    #[serde(default = "default_step_coin")]
    pub step_coin: Coin,
    #[serde(default)]
    pub noise_eps: f64,
    #[serde(default = "default_phi")]
    pub phi: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Defaults to the ratchet superposition in ratchet mode and to
    /// `|1> (x) |0>` in ideal mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Initial>,
    #[serde(default)]
    pub ensemble: Ensemble,
    /// Sized from steps, shift and kick strength when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<Lattice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reverse: Option<Reverse>,
}

fn default_k1() -> f64 {
    -STANDARD_KICK
}
fn default_k2() -> f64 {
    STANDARD_KICK
}
fn default_tau() -> f64 {
    RESONANT_PERIOD
}
fn default_spin() -> u8 {
    1
}
fn default_samples() -> usize {
    1
}
fn default_thermal_sigma() -> f64 {
    1.0
}
fn default_form() -> Form {
    Form::Composed
}
fn default_mode() -> Mode {
    Mode::Ratchet
}
fn default_q() -> u32 {
    1
}
fn default_first_coin() -> Coin {
    CoinParams::hadamard().into()
}
fn default_step_coin() -> Coin {
    CoinParams::balanced().into()
}
fn default_phi() -> f64 {
    FRAC_PI_2
}
fn default_seed() -> u64 {
    DEFAULT_SEED
}

/// A sweep point resolved against the base configuration.
#[derive(Debug, Clone)]
pub struct ResolvedPoint {
    pub label: String,
    pub config: WalkConfig,
}

/// Parsed configuration together with its source text, for error anchoring.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub path: PathBuf,
    pub source: String,
    pub config: RunConfig,
}

impl LoadedConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let source = std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(path, source)
    }

    pub fn parse(path: &Path, source: String) -> Result<Self, CliError> {
        let config: RunConfig = serde_json::from_str(&source).map_err(|e| {
            let text = e.to_string();
            let message = match text.rsplit_once(" at line ") {
                Some((head, _)) => head.to_string(),
                None => text,
            };
            CliError::Schema {
                path: path.to_path_buf(),
                line: e.line(),
                column: e.column(),
                message,
            }
        })?;
        let loaded = Self {
            path: path.to_path_buf(),
            source,
            config,
        };
        loaded.validate()?;
        Ok(loaded)
    }

    /// Error anchored at the line where `keys` (a nested key path) appears.
    pub fn invalid(&self, keys: &[&str], message: impl Into<String>) -> CliError {
        CliError::Invalid {
            path: self.path.clone(),
            line: locate(&self.source, keys),
            message: message.into(),
        }
    }

    fn walk_error(&self, prefix: &[&str], e: WalkError) -> CliError {
        let mut keys: Vec<&str> = prefix.to_vec();
        let message = e.to_string();
        match &e {
            WalkError::Domain { name, .. } => {
                let segments: Vec<&str> = name.split('.').collect();
                match segments.as_slice() {
                    [k @ ("k1" | "k2" | "tau")] => keys.extend(["kick", k]),
                    [k @ ("n_samples" | "sigma_beta" | "thermal_fraction" | "thermal_sigma")] => {
                        keys.extend(["ensemble", k])
                    }
                    other => keys.extend(other),
                }
            }
            WalkError::InvalidLattice(_) => keys.push("lattice"),
            _ => {}
        }
        self.invalid(&keys, message)
    }

    /// Semantic checks beyond the JSON shape.
    pub fn validate(&self) -> Result<(), CliError> {
        let c = &self.config;
        self.walk_config()
            .validate()
            .map_err(|e| self.walk_error(&[], e))?;
        self.ensemble_spec()
            .validate()
            .map_err(|e| self.walk_error(&[], e))?;
        if let Some(l) = c.lattice {
            MomentumLattice::new(l.n_min, l.n_max).map_err(|e| self.walk_error(&[], e))?;
        }
        if let Some(init) = c.initial {
            if !matches!(init.spin, 1 | 2) {
                return Err(self.invalid(
                    &["initial", "spin"],
                    format!("initial.spin = {} must be 1 or 2", init.spin),
                ));
            }
            if !(0.0..1.0).contains(&init.beta) {
                return Err(self.invalid(
                    &["initial", "beta"],
                    format!(
                        "initial.beta = {} is outside the valid domain [0, 1)",
                        init.beta
                    ),
                ));
            }
            if init.kind == InitialKind::Ratchet && init.n != 0 {
                return Err(self.invalid(
                    &["initial", "n"],
                    "initial.n only applies to a localized start",
                ));
            }
        }
        if let Some(r) = c.reverse {
            if r.steps_forward.unwrap_or(c.steps) == 0 {
                return Err(self.invalid(
                    &["reverse"],
                    "reversal needs at least one forward step (reverse.steps_forward or steps)",
                ));
            }
        }
        if c.sweep.is_some() {
            let points = self.sweep_points()?;
            for (i, point) in points.iter().enumerate() {
                point.config.validate().map_err(|e| {
                    let mut err = self.walk_error(&["sweep"], e);
                    if let CliError::Invalid { message, .. } = &mut err {
                        *message = format!("sweep point {i} ({}): {message}", point.label);
                    }
                    err
                })?;
            }
        }
        Ok(())
    }

    pub fn walk_config(&self) -> WalkConfig {
        let c = &self.config;
        WalkConfig {
            steps: c.steps,
            shift_mode: c.shift_mode.into(),
            q: c.q,
            kick: KickParams {
                k1: c.kick.k1,
                k2: c.kick.k2,
                tau: c.kick.tau,
            },
            first_coin: CoinParams::new(c.first_coin.alpha, c.first_coin.chi),
            step_coin: CoinParams::new(c.step_coin.alpha, c.step_coin.chi),
            noise_eps: c.noise_eps,
            phi: c.phi,
            seed: c.seed,
        }
    }

    pub fn ensemble_spec(&self) -> EnsembleSpec {
        let e = &self.config.ensemble;
        EnsembleSpec {
            n_samples: e.n_samples,
            sigma_beta: e.sigma_beta,
            thermal_fraction: e.thermal_fraction,
            thermal_sigma: e.thermal_sigma,
        }
    }

    /// Explicit initial state, filling in the mode default.
    pub fn initial(&self) -> Initial {
        self.config.initial.unwrap_or(Initial {
            kind: match self.config.shift_mode {
                Mode::Ratchet => InitialKind::Ratchet,
                Mode::Ideal => InitialKind::Localized,
            },
            spin: 1,
            n: 0,
            beta: 0.0,
        })
    }

    pub fn lattice_for(&self, walk: &WalkConfig) -> Result<MomentumLattice, CliError> {
        match self.config.lattice {
            Some(l) => MomentumLattice::new(l.n_min, l.n_max).map_err(|e| self.walk_error(&[], e)),
            None => walk.lattice().map_err(CliError::from),
        }
    }

    pub fn initial_state(
        &self,
        lattice: MomentumLattice,
        walk: &WalkConfig,
    ) -> Result<SpinorState, CliError> {
        let init = self.initial();
        let spin = if init.spin == 2 { Spin::Two } else { Spin::One };
        let state = match init.kind {
            InitialKind::Ratchet => initial_ratchet_state(lattice, walk.phi, spin),
            InitialKind::Localized => SpinorState::basis(lattice, init.n, spin),
        }
        .and_then(|s| s.with_beta(init.beta));
        state.map_err(|e| self.invalid(&["initial"], format!("initial state: {e}")))
    }

    /// Configuration echo with every default made explicit.
    pub fn resolved(&self) -> RunConfig {
        RunConfig {
            initial: Some(self.initial()),
            ..self.config.clone()
        }
    }

    pub fn sweep_points(&self) -> Result<Vec<ResolvedPoint>, CliError> {
        let Some(sweep) = &self.config.sweep else {
            return Err(self.invalid(&[], "the sweep command needs a \"sweep\" section"));
        };
        let given = [
            sweep.noise_eps.is_some(),
            sweep.kicks.is_some(),
            sweep.coin_alpha.is_some(),
            sweep.coin_bias.is_some(),
            sweep.points.is_some(),
        ]
        .iter()
        .filter(|&&g| g)
        .count();
        if given != 1 {
            return Err(self.invalid(
                &["sweep"],
                "sweep must set exactly one of noise_eps, kicks, coin_alpha, coin_bias, points",
            ));
        }

        let points: Vec<SweepPoint> = if let Some(v) = &sweep.noise_eps {
            v.iter()
                .map(|&x| SweepPoint {
                    noise_eps: Some(x),
                    ..SweepPoint::default()
                })
                .collect()
        } else if let Some(v) = &sweep.kicks {
            v.iter()
                .map(|&k| SweepPoint {
                    kick: Some(k),
                    ..SweepPoint::default()
                })
                .collect()
        } else if let Some(v) = &sweep.coin_alpha {
            v.iter()
                .map(|&a| SweepPoint {
                    coin_alpha: Some(a),
                    ..SweepPoint::default()
                })
                .collect()
        } else if let Some(v) = &sweep.coin_bias {
            v.iter()
                .map(|&p| SweepPoint {
                    coin_bias: Some(p),
                    ..SweepPoint::default()
                })
                .collect()
        } else {
            sweep.points.clone().unwrap_or_default()
        };
        if points.is_empty() {
            return Err(self.invalid(&["sweep"], "sweep grid is empty"));
        }

        let base = self.walk_config();
        points
            .into_iter()
            .enumerate()
            .map(|(i, p)| self.resolve_point(&base, i, p))
            .collect()
    }

    fn resolve_point(
        &self,
        base: &WalkConfig,
        index: usize,
        point: SweepPoint,
    ) -> Result<ResolvedPoint, CliError> {
        let mut config = base.clone();
        let mut parts = Vec::new();
        if let Some(eps) = point.noise_eps {
            config.noise_eps = eps;
            parts.push(format!("noise_eps={eps}"));
        }
        if let Some([k1, k2]) = point.kick {
            config.kick.k1 = k1;
            config.kick.k2 = k2;
            parts.push(format!("k1={k1} k2={k2}"));
        }
        if point.coin_alpha.is_some() && point.coin_bias.is_some() {
            return Err(self.invalid(
                &["sweep"],
                format!("sweep point {index} sets both coin_alpha and coin_bias"),
            ));
        }
        if let Some(alpha) = point.coin_alpha {
            config.first_coin.alpha = alpha;
            config.step_coin.alpha = alpha;
            parts.push(format!("coin_alpha={alpha}"));
        }
        if let Some(p) = point.coin_bias {
            if !(0.0..=1.0).contains(&p) {
                return Err(self.invalid(
                    &["sweep", "coin_bias"],
                    format!(
                        "sweep point {index}: coin_bias = {p} is outside the valid domain [0, 1]"
                    ),
                ));
            }
            let alpha = CoinParams::biased(p).alpha;
            config.first_coin.alpha = alpha;
            config.step_coin.alpha = alpha;
            parts.push(format!("coin_bias={p}"));
        }
        let label = point.label.unwrap_or_else(|| {
            if parts.is_empty() {
                format!("point{index}")
            } else {
                parts.join(" ")
            }
        });
        Ok(ResolvedPoint { label, config })
    }

    /// Forward step count and form for the reverse command.
    pub fn reverse_plan(&self) -> (usize, Form) {
        let r = self.config.reverse.unwrap_or(Reverse {
            steps_forward: None,
            form: default_form(),
        });
        (r.steps_forward.unwrap_or(self.config.steps), r.form)
    }
}

/// 1-based line of the last key in `keys`, each searched after the previous.
/// Falls back to the deepest key that was found.
fn locate(source: &str, keys: &[&str]) -> Option<usize> {
    let mut pos = 0;
    let mut found = None;
    for key in keys {
        let needle = format!("\"{key}\"");
        match source[pos..].find(&needle) {
            Some(offset) => {
                pos += offset;
                found = Some(pos);
                pos += needle.len();
            }
            None => break,
        }
    }
    found.map(|p| source[..p].matches('\n').count() + 1)
}
