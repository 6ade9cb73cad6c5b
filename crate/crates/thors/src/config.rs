//! Experiment configuration: a flat TOML table, overridable from the CLI.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thors_core::baselines::{BaselineMethod, METACOST_DEFAULT_REPLICATES};
use thors_core::classifiers::{LogisticConfig, ScorerKind};
use thors_core::CostMatrix;

use crate::error::{HarnessError, Result};
use crate::io::NaPolicy;
use crate::synthetic::{Preset, SyntheticSpec};

/// A cost-sensitive method compared in the experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Thors,
    Null,
    Theoretical,
    Empirical,
    Metacost,
    Crs,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Thors,
        Method::Null,
        Method::Theoretical,
        Method::Empirical,
        Method::Metacost,
        Method::Crs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Thors => "thors",
            Method::Null => "null",
            Method::Theoretical => "theoretical",
            Method::Empirical => "empirical",
            Method::Metacost => "metacost",
            Method::Crs => "crs",
        }
    }

    pub fn from_name(name: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.name() == name)
    }

    pub fn baseline(self) -> Option<BaselineMethod> {
        match self {
            Method::Thors => None,
            Method::Null => Some(BaselineMethod::Null),
            Method::Theoretical => Some(BaselineMethod::Theoretical),
            Method::Empirical => Some(BaselineMethod::Empirical),
            Method::Metacost => Some(BaselineMethod::Metacost),
            Method::Crs => Some(BaselineMethod::Crs),
        }
    }
}

mod scorer_names {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};
    use thors_core::classifiers::ScorerKind;

    pub fn serialize<S: Serializer>(kinds: &[ScorerKind], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(kinds.iter().map(|k| k.name()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<ScorerKind>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|n| {
                ScorerKind::from_name(n)
                    .ok_or_else(|| D::Error::custom(format!("unknown scorer `{n}`")))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Feature CSV; mutually exclusive with `preset`.
    pub data: Option<PathBuf>,
    pub label_column: String,
    pub positive_value: String,
    pub na_policy: NaPolicy,
    /// Synthetic profile used when `data` is unset.
    pub preset: Option<Preset>,
    pub synthetic_n0: Option<usize>,
    pub synthetic_n1: Option<usize>,
    pub synthetic_features: Option<usize>,
    pub synthetic_informative: Option<usize>,
    pub synthetic_separation: Option<f64>,
    /// Seed for generating synthetic data; defaults to `seed`.
    pub data_seed: Option<u64>,
    /// Defaults to the preset's costs when a preset is used.
    pub fn_cost: Option<f64>,
    pub fp_cost: Option<f64>,
    #[serde(with = "scorer_names")]
    pub scorers: Vec<ScorerKind>,
    pub methods: Vec<Method>,
    pub rounds: usize,
    /// Train, validation, test proportions.
    pub split: [f64; 3],
    /// Number of ANOVA-selected features; 0 keeps all.
    pub select_k: usize,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    pub metacost_replicates: usize,
    /// Run rounds on the rayon pool.
    pub parallel: bool,
    pub logistic_max_iter: usize,
    pub logistic_tol: f64,
    pub logistic_l2: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let lc = LogisticConfig::default();
        ExperimentConfig {
            data: None,
            label_column: "label".into(),
            positive_value: "1".into(),
            na_policy: NaPolicy::Missing,
            preset: None,
            synthetic_n0: None,
            synthetic_n1: None,
            synthetic_features: None,
            synthetic_informative: None,
            synthetic_separation: None,
            data_seed: None,
            fn_cost: None,
            fp_cost: None,
            scorers: vec![
                ScorerKind::Logistic,
                ScorerKind::NaiveBayes,
                ScorerKind::Lda,
            ],
            methods: Method::ALL.to_vec(),
            rounds: 20,
            split: [2.0, 2.0, 1.0],
            select_k: 10,
            seed: 0,
            output_dir: None,
            metacost_replicates: METACOST_DEFAULT_REPLICATES,
            parallel: true,
            logistic_max_iter: lc.max_iter,
            logistic_tol: lc.tol,
            logistic_l2: lc.l2,
        }
    }
}

/// Where the rows come from.
#[derive(Clone, Debug, PartialEq)]
pub enum DataSource {
    Csv(PathBuf),
    Synthetic { spec: SyntheticSpec, seed: u64 },
}

impl ExperimentConfig {
    pub fn for_preset(preset: Preset) -> Self {
        ExperimentConfig {
            preset: Some(preset),
            ..Default::default()
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn cost_matrix(&self) -> Result<CostMatrix> {
        let preset = self.preset.map(Preset::costs);
        let fnc = self.fn_cost.or(preset.map(|c| c.fn_cost()));
        let fpc = self.fp_cost.or(preset.map(|c| c.fp_cost()));
        match (fnc, fpc) {
            (Some(a), Some(b)) => Ok(CostMatrix::new(a, b)?),
            _ => Err(HarnessError::Config(
                "fn_cost and fp_cost are required without a preset".into(),
            )),
        }
    }

    pub fn source(&self) -> Result<DataSource> {
        let has_synth = self.preset.is_some()
            || self.synthetic_n0.is_some()
            || self.synthetic_n1.is_some()
            || self.synthetic_features.is_some()
            || self.synthetic_informative.is_some()
            || self.synthetic_separation.is_some();
        match (&self.data, has_synth) {
            (Some(_), true) => Err(HarnessError::Config(
                "set either `data` or synthetic options, not both".into(),
            )),
            (Some(p), false) => Ok(DataSource::Csv(p.clone())),
            (None, _) => {
                let base = match self.preset {
                    Some(p) => p.spec(),
                    None => {
                        if self.synthetic_n0.is_none() || self.synthetic_n1.is_none() {
                            return Err(HarnessError::Config(
                                "no data: set `data`, `preset`, or synthetic_n0 and synthetic_n1"
                                    .into(),
                            ));
                        }
                        SyntheticSpec {
                            n0: 0,
                            n1: 0,
                            n_features: 10,
                            n_informative: 3,
                            separation: 2.0,
                        }
                    }
                };
                let spec = SyntheticSpec {
                    n0: self.synthetic_n0.unwrap_or(base.n0),
                    n1: self.synthetic_n1.unwrap_or(base.n1),
                    n_features: self.synthetic_features.unwrap_or(base.n_features),
                    n_informative: self.synthetic_informative.unwrap_or(base.n_informative),
                    separation: self.synthetic_separation.unwrap_or(base.separation),
                };
                spec.validate()?;
                Ok(DataSource::Synthetic {
                    spec,
                    seed: self.data_seed.unwrap_or(self.seed),
                })
            }
        }
    }

    pub fn logistic(&self) -> LogisticConfig {
        LogisticConfig {
            max_iter: self.logistic_max_iter,
            tol: self.logistic_tol,
            l2: self.logistic_l2,
        }
    }

    /// Split proportions normalized to sum to one.
    pub fn split_fractions(&self) -> Result<[f64; 3]> {
        let s: f64 = self.split.iter().sum();
        if self.split.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(HarnessError::Config("split ratios must be positive".into()));
        }
        Ok(self.split.map(|r| r / s))
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(HarnessError::Config("rounds must be at least 1".into()));
        }
        if self.scorers.is_empty() {
            return Err(HarnessError::Config("no scorers selected".into()));
        }
        if self.methods.is_empty() {
            return Err(HarnessError::Config("no methods selected".into()));
        }
        if self.methods.contains(&Method::Metacost) && self.metacost_replicates == 0 {
            return Err(HarnessError::Config(
                "metacost_replicates must be at least 1".into(),
            ));
        }
        self.split_fractions()?;
        self.cost_matrix()?;
        self.source()?;
        Ok(())
    }

    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = &o.$f { self.$f = v.clone(); } )* };
        }
        macro_rules! set_opt {
            ($($f:ident),*) => { $( if let Some(v) = &o.$f { self.$f = Some(v.clone()); } )* };
        }
        set!(
            label_column,
            positive_value,
            scorers,
            methods,
            rounds,
            select_k,
            seed,
            metacost_replicates,
            parallel
        );
        set_opt!(data, preset, fn_cost, fp_cost, output_dir, data_seed);
    }
}

/// Command-line values that replace file settings when present.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub data: Option<PathBuf>,
    pub preset: Option<Preset>,
    pub label_column: Option<String>,
    pub positive_value: Option<String>,
    pub fn_cost: Option<f64>,
    pub fp_cost: Option<f64>,
    pub scorers: Option<Vec<ScorerKind>>,
    pub methods: Option<Vec<Method>>,
    pub rounds: Option<usize>,
    pub select_k: Option<usize>,
    pub seed: Option<u64>,
    pub data_seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub metacost_replicates: Option<usize>,
    pub parallel: Option<bool>,
}
