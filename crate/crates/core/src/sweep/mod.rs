//! One-dimensional parameter sweeps over the analytical and simulated metrics.
//!
//! A [`Study`] is a list of [`SweepSpec`]s, read from TOML:
//!
//! ```toml
//! [[sweep]]
//! label = "N=5"
//! axis = "snr_d_db"
//! values = [0.0, 10.0, 20.0]
//! outputs = ["sop", "mc_sop"]
//!
//! [sweep.base]
//! n_elements = 5
//! snr_d_db = 0.0
//! snr_e_db = -10.0
//! kappa_d_t2 = 0.01
//! kappa_d_r2 = 0.01
//! kappa_e_t2 = 0.01
//! kappa_e_r2 = 0.01
//! c_th = 1.0
//! ```

mod output;
mod presets;

use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{derive_stats, SystemParams};
use crate::error::{Error, Result};
use crate::monte_carlo::{self, McConfig};
use crate::secrecy::{self, NumericsConfig};

pub use output::{emit, read_csv, write_csv, write_json, Format, CSV_HEADER};
pub use presets::{preset, preset_names, preset_source};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    SnrDDb,
    NElements,
    Kappa2,
    SnrEDb,
    CTh,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::SnrDDb => "snr_d_db",
            Axis::NElements => "n_elements",
            Axis::Kappa2 => "kappa2",
            Axis::SnrEDb => "snr_e_db",
            Axis::CTh => "c_th",
        }
    }

    pub fn parse(s: &str) -> Option<Axis> {
        [Axis::SnrDDb, Axis::NElements, Axis::Kappa2, Axis::SnrEDb, Axis::CTh]
            .into_iter()
            .find(|a| a.name() == s)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Sop,
    SopAsymptotic,
    Asc,
    McSop,
    McAsc,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Sop => "sop",
            Metric::SopAsymptotic => "sop_asymptotic",
            Metric::Asc => "asc",
            Metric::McSop => "mc_sop",
            Metric::McAsc => "mc_asc",
        }
    }

    fn is_mc(self) -> bool {
        matches!(self, Metric::McSop | Metric::McAsc)
    }
}

/// How the numbers on a `kappa2` axis are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaLevels {
    /// Each value is the squared level `κ²` applied to all four impairments.
    #[default]
    Squared,
    /// Each value is the amplitude `κ`; it is squared before use.
    Amplitude,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Curve name, appended to the metric as `sop[label]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub axis: Axis,
    pub values: Vec<f64>,
    pub outputs: Vec<Metric>,
    #[serde(default)]
    pub kappa_levels: KappaLevels,
    pub base: SystemParams,
    #[serde(default)]
    pub numerics: NumericsConfig,
    #[serde(default)]
    pub mc: McConfig,
}

impl SweepSpec {
    pub fn new(axis: Axis, values: Vec<f64>, base: SystemParams, outputs: Vec<Metric>) -> Self {
        SweepSpec {
            label: None,
            axis,
            values,
            outputs,
            kappa_levels: KappaLevels::Squared,
            base,
            numerics: NumericsConfig::default(),
            mc: McConfig::default(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.outputs.is_empty() {
            return Err(Error::invalid("outputs", "at least one metric is required"));
        }
        for (i, m) in self.outputs.iter().enumerate() {
            if self.outputs[..i].contains(m) {
                return Err(Error::invalid("outputs", format!("`{}` listed twice", m.name())));
            }
        }
        if self.values.is_empty() {
            return Err(Error::invalid("values", "must not be empty"));
        }
        if let Some(v) = self.values.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid("values", format!("non-finite value {v}")));
        }
        let up = self.values.windows(2).all(|w| w[1] > w[0]);
        let down = self.values.windows(2).all(|w| w[1] < w[0]);
        if !(up || down) {
            return Err(Error::invalid("values", "must be strictly monotone"));
        }
        if self.axis == Axis::NElements {
            if let Some(v) = self.values.iter().find(|v| v.fract() != 0.0 || **v < 1.0 || **v > f64::from(u32::MAX)) {
                return Err(Error::invalid("values", format!("{v} is not a positive element count")));
            }
        }
        self.base.validate()?;
        self.numerics.validate()?;
        if self.outputs.iter().any(|m| m.is_mc()) {
            self.mc.validate()?;
        }
        Ok(())
    }

    /// Base parameters with the axis field set to `value`.
    pub fn params_at(&self, value: f64) -> SystemParams {
        let mut p = self.base.clone();
        match self.axis {
            Axis::SnrDDb => {
                p.snr_d_db = value;
                p.geometry = None;
            }
            Axis::SnrEDb => {
                p.snr_e_db = value;
                p.geometry = None;
            }
            Axis::NElements => p.n_elements = value as u32,
            Axis::Kappa2 => {
                let k2 = match self.kappa_levels {
                    KappaLevels::Squared => value,
                    KappaLevels::Amplitude => value * value,
                };
                p = p.with_uniform_impairment(k2);
            }
            Axis::CTh => p.c_th = value,
        }
        p
    }

    fn metric_name(&self, m: Metric) -> String {
        match &self.label {
            Some(l) => format!("{}[{l}]", m.name()),
            None => m.name().to_string(),
        }
    }
}

/// A named set of sweeps; the on-disk config format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Study {
    pub sweep: Vec<SweepSpec>,
}

impl Study {
    pub fn from_toml(text: &str) -> Result<Self> {
        let study: Study = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        study.validate()?;
        Ok(study)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Output(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweep.is_empty() {
            return Err(Error::Config("no [[sweep]] tables".into()));
        }
        for (i, s) in self.sweep.iter().enumerate() {
            s.validate().map_err(|e| match e {
                Error::InvalidParameter { field, reason } => Error::InvalidParameter {
                    field: format!("sweep[{i}].{field}"),
                    reason,
                },
                other => other,
            })?;
        }
        Ok(())
    }

    /// Apply the same override to every sweep.
    pub fn map_sweeps(&mut self, f: impl Fn(&mut SweepSpec)) {
        self.sweep.iter_mut().for_each(f);
    }
}

pub fn load_config(path: &Path) -> Result<Study> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Study::from_toml(&text)
}

/// One output row. Analytical rows carry no standard error, trials or seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub axis: String,
    pub axis_value: f64,
    pub metric: String,
    /// `None` when the point failed; see `error`.
    pub value: Option<f64>,
    pub std_error: Option<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn point_rows(spec: &SweepSpec, x: f64) -> Vec<Row> {
    let params = spec.params_at(x);
    let row = |m: Metric| Row {
        axis: spec.axis.name().to_string(),
        axis_value: x,
        metric: spec.metric_name(m),
        value: None,
        std_error: None,
        trials: None,
        seed: None,
        error: None,
    };
    let fail = |m: Metric, e: &Error| Row {
        error: Some(e.to_string()),
        ..row(m)
    };
    if let Err(e) = params.validate() {
        return spec.outputs.iter().map(|&m| fail(m, &e)).collect();
    }
    let stats = derive_stats(&params);
    let num = &spec.numerics;
    let mc = if spec.outputs.iter().any(|m| m.is_mc()) {
        Some(monte_carlo::estimate_all(&params, &spec.mc))
    } else {
        None
    };
    spec.outputs
        .iter()
        .map(|&m| {
            let analytic = |v: Result<f64>| match v {
                Ok(v) => Row {
                    value: Some(v),
                    ..row(m)
                },
                Err(e) => fail(m, &e),
            };
            let simulated = |pick: fn(&monte_carlo::McEstimates) -> monte_carlo::EstimateWithCI| match mc
                .as_ref()
                .expect("mc estimates computed for mc metrics")
            {
                Ok(e) => {
                    let est = pick(e);
                    Row {
                        value: Some(est.value),
                        std_error: Some(est.std_error),
                        trials: Some(est.trials),
                        seed: Some(est.seed),
                        ..row(m)
                    }
                }
                Err(e) => fail(m, e),
            };
            match m {
                Metric::Sop => analytic(secrecy::sop(&params, &stats, num).map(|o| o.probability)),
                Metric::SopAsymptotic => analytic(secrecy::sop_asymptotic(&params, &stats, num)),
                Metric::Asc => analytic(secrecy::avg_secrecy_capacity(&params, &stats, num).map(|c| c.total)),
                Metric::McSop => simulated(|e| e.sop),
                Metric::McAsc => simulated(|e| e.asc_rate_difference),
            }
        })
        .collect()
}

/// Evaluate every requested metric at every axis value. Points run in
/// parallel; rows come back in axis order, then in `outputs` order. A failing
/// point yields rows with `value = None` and an `error` message.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<Row>> {
    spec.validate()?;
    let per_point: Vec<Vec<Row>> = spec.values.par_iter().map(|&x| point_rows(spec, x)).collect();
    Ok(per_point.into_iter().flatten().collect())
}

pub fn run_study(study: &Study) -> Result<Vec<Row>> {
    study.validate()?;
    let mut rows = Vec::new();
    for s in &study.sweep {
        rows.extend(run_sweep(s)?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> SweepSpec {
        SweepSpec::new(
            Axis::SnrDDb,
            vec![0.0, 10.0, 20.0],
            SystemParams::new(5, 0.0, -10.0).with_uniform_impairment(0.01),
            vec![Metric::Sop, Metric::Asc],
        )
    }

    #[test]
    fn empty_outputs_rejected() {
        let mut s = spec();
        s.outputs.clear();
        assert!(matches!(s.validate(), Err(Error::InvalidParameter { field, .. }) if field == "outputs"));
    }

    #[test]
    fn non_monotone_values_rejected() {
        let mut s = spec();
        s.values = vec![0.0, 10.0, 5.0];
        assert!(s.validate().is_err());
        s.values = vec![20.0, 10.0];
        assert!(s.validate().is_ok());
    }

    #[test]
    fn rows_follow_axis_then_output_order() {
        let rows = run_sweep(&spec()).unwrap();
        let keys: Vec<_> = rows.iter().map(|r| (r.axis_value, r.metric.as_str())).collect();
        assert_eq!(
            keys,
            [(0.0, "sop"), (0.0, "asc"), (10.0, "sop"), (10.0, "asc"), (20.0, "sop"), (20.0, "asc")]
        );
        assert!(rows.iter().all(|r| r.std_error.is_none() && r.error.is_none()));
    }

    #[test]
    fn point_errors_do_not_abort() {
        let mut s = spec();
        s.axis = Axis::Kappa2;
        s.values = vec![0.0, 0.01];
        s.outputs = vec![Metric::SopAsymptotic];
        let rows = run_sweep(&s).unwrap();
        assert!(rows[0].value.is_none() && rows[0].error.is_some());
        assert!(rows[1].value.is_some());
    }

    #[test]
    fn axis_overrides() {
        let mut s = spec();
        s.axis = Axis::Kappa2;
        s.kappa_levels = KappaLevels::Amplitude;
        let p = s.params_at(0.1);
        assert!((p.kappa_e_r2 - 0.01).abs() < 1e-15);
        s.axis = Axis::NElements;
        assert_eq!(s.params_at(10.0).n_elements, 10);
        s.values = vec![2.5];
        assert!(s.validate().is_err());
    }

    #[test]
    fn label_decorates_metric() {
        let rows = run_sweep(&spec().with_label("N=5")).unwrap();
        assert_eq!(rows[0].metric, "sop[N=5]");
    }

    #[test]
    fn study_toml_round_trip() {
        let study = Study {
            sweep: vec![spec().with_label("a"), spec()],
        };
        let text = study.to_toml().unwrap();
        assert_eq!(Study::from_toml(&text).unwrap(), study);
    }

    #[test]
    fn invalid_base_names_field() {
        let text = r#"
            [[sweep]]
            axis = "snr_d_db"
            values = [0.0]
            outputs = ["sop"]
            [sweep.base]
            n_elements = 0
            snr_d_db = 0.0
            snr_e_db = 0.0
            c_th = 1.0
        "#;
        match Study::from_toml(text) {
            Err(Error::InvalidParameter { field, .. }) => assert!(field.ends_with("n_elements"), "{field}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_errors_are_config_errors() {
        let e = Study::from_toml("[[sweep]]\naxis = \"bogus\"\n").unwrap_err();
        assert!(matches!(e, Error::Config(_)));
        assert_eq!(e.exit_code(), 1);
    }
}
