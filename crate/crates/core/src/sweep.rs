//! Parameter sweeps and their CSV tables.
//!
//! A configuration is a flat `key = value` map (from a file, command-line
//! flags, or both). Every point of the φ grid is evaluated independently in
//! parallel; rows are sorted by φ before emission and every float is
//! rounded to 12 significant digits when the row is built, so the in-memory
//! result and its CSV text carry identical values.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::boson::{
    boson_visibility, jaynes_cummings_ramsey, rf_disturbance, run_boson_ramsey, BosonRefParams,
    FreeEvolutionParams,
};
use crate::error::{Error, Result};
use crate::fermion::{
    fermion_relational_check, postselect_and_fidelity, run_fermion_ramsey, two_system_phase_test,
    FermionRefParams, FrameKind, TwoSystemOptions,
};
use crate::ramsey::{run_ramsey, sinusoid_visibility};
use crate::relational::relational_protocol_check;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Experiment {
    Ramsey,
    Boson,
    Jc,
    Fermion,
    TwoSystem,
    RelationalCheck,
    FidelityStudy,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Ramsey,
        Experiment::Boson,
        Experiment::Jc,
        Experiment::Fermion,
        Experiment::TwoSystem,
        Experiment::RelationalCheck,
        Experiment::FidelityStudy,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Ramsey => "ramsey",
            Experiment::Boson => "boson",
            Experiment::Jc => "jc",
            Experiment::Fermion => "fermion",
            Experiment::TwoSystem => "two_system",
            Experiment::RelationalCheck => "relational_check",
            Experiment::FidelityStudy => "fidelity_study",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub phi_grid: Vec<f64>,
    pub nbar: Option<f64>,
    pub k: Option<usize>,
    pub epsilon: Option<f64>,
    /// Reserved: every production path is an exact mixture, so nothing is sampled.
    pub seed: u64,
    pub output_path: Option<PathBuf>,
}

const KEYS: [&str; 10] = ["experiment", "phi_min", "phi_max", "phi_steps", "phi_grid", "nbar", "K", "epsilon", "seed", "out"];

/// Flat `key = value` configuration before validation.
pub type RawConfig = BTreeMap<String, String>;

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config_text(text: &str) -> Result<RawConfig> {
    let mut map = RawConfig::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let key = canonical_key(key.trim())?;
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

pub fn read_config_file(path: &Path) -> Result<RawConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_config_text(&text)
}

fn canonical_key(key: &str) -> Result<String> {
    let key = key.replace('-', "_");
    let key = if key == "k" { "K".to_string() } else { key };
    if KEYS.contains(&key.as_str()) {
        Ok(key)
    } else {
        Err(Error::Config(format!("unknown key '{key}'")))
    }
}

/// Applies `overrides` on top of `base`. Any explicit grid bound replaces a
/// `phi_grid` list from the base.
pub fn merge_config(base: &RawConfig, overrides: &RawConfig) -> RawConfig {
    let mut out = base.clone();
    if ["phi_min", "phi_max", "phi_steps"].iter().any(|k| overrides.contains_key(*k)) {
        out.remove("phi_grid");
    }
    out.extend(overrides.iter().map(|(k, v)| (k.clone(), v.clone())));
    out
}

fn parse_value<T: FromStr>(map: &RawConfig, key: &str) -> Result<Option<T>> {
    map.get(key)
        .map(|v| v.parse::<T>().map_err(|_| Error::Config(format!("cannot parse {key} = '{v}'"))))
        .transpose()
}

/// `steps` evenly spaced points from `min` to `max` inclusive.
pub fn linear_grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..steps).map(|i| min + (max - min) * i as f64 / (steps - 1) as f64).collect(),
    }
}

impl ExperimentConfig {
    /// Validates a raw map. Missing grid keys default to 32 points over `[0, 2π]`.
    pub fn from_raw(map: &RawConfig) -> Result<Self> {
        let experiment: Experiment = map
            .get("experiment")
            .ok_or_else(|| Error::Config("missing parameter experiment".into()))?
            .parse()?;
        let phi_grid = match map.get("phi_grid") {
            Some(list) => list
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<f64>().map_err(|_| Error::Config(format!("cannot parse phi_grid entry '{s}'"))))
                .collect::<Result<Vec<_>>>()?,
            None => linear_grid(
                parse_value(map, "phi_min")?.unwrap_or(0.0),
                parse_value(map, "phi_max")?.unwrap_or(TAU),
                parse_value(map, "phi_steps")?.unwrap_or(32),
            ),
        };
        let config = Self {
            experiment,
            phi_grid,
            nbar: parse_value(map, "nbar")?,
            k: parse_value(map, "K")?,
            epsilon: parse_value(map, "epsilon")?,
            seed: parse_value(map, "seed")?.unwrap_or(0),
            output_path: map.get("out").map(PathBuf::from),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.phi_grid.is_empty() {
            return Err(Error::Config("phi_grid must be nonempty".into()));
        }
        if self.phi_grid.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("phi_grid entries must be finite".into()));
        }
        self.frame().map(|_| ())
    }

    fn require<T: Copy>(&self, value: Option<T>, name: &str) -> Result<T> {
        value.ok_or_else(|| Error::Config(format!("experiment {} requires {name}", self.experiment)))
    }

    fn fermion_params(&self) -> Result<FermionRefParams> {
        FermionRefParams::new(self.require(self.k, "K")?, self.require(self.epsilon, "epsilon")?)
    }

    /// Which reference frame the experiment runs against.
    fn frame(&self) -> Result<Frame> {
        let fermion_given = self.k.is_some() || self.epsilon.is_some();
        match self.experiment {
            Experiment::Ramsey => Ok(Frame::External),
            Experiment::Boson | Experiment::Jc => Ok(Frame::Boson(BosonRefParams::new(self.require(self.nbar, "nbar")?)?)),
            Experiment::Fermion => Ok(Frame::Fermion(self.fermion_params()?)),
            Experiment::TwoSystem | Experiment::RelationalCheck | Experiment::FidelityStudy => {
                match (self.nbar, fermion_given) {
                    (Some(_), true) => Err(Error::Config(format!(
                        "experiment {} takes either nbar or K and epsilon, not both",
                        self.experiment
                    ))),
                    (Some(nbar), false) => Ok(Frame::Boson(BosonRefParams::new(nbar)?)),
                    (None, true) => Ok(Frame::Fermion(self.fermion_params()?)),
                    (None, false) => Err(Error::Config(format!(
                        "experiment {} requires nbar or K and epsilon",
                        self.experiment
                    ))),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Frame {
    External,
    Boson(BosonRefParams),
    Fermion(FermionRefParams),
}

/// Rounds to the 12 significant digits written to CSV.
fn quantize(x: f64) -> f64 {
    format!("{x:.11e}").parse().expect("formatted float parses")
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub experiment: Experiment,
    pub nbar: Option<f64>,
    pub k: Option<usize>,
    pub epsilon: Option<f64>,
    pub phi: f64,
    pub p_a: Option<f64>,
    pub p_m: Option<f64>,
    pub p_sym: Option<f64>,
    pub visibility: Option<f64>,
    pub fidelity_min: Option<f64>,
    pub bound: Option<f64>,
    pub flatness: Option<f64>,
    pub deviation: Option<f64>,
}

impl SweepRow {
    fn new(config: &ExperimentConfig, frame: &Frame, phi: f64) -> Self {
        let (nbar, k, epsilon) = match frame {
            Frame::External => (None, None, None),
            Frame::Boson(r) => (Some(r.nbar()), None, None),
            Frame::Fermion(p) => (None, Some(p.k()), Some(p.epsilon())),
        };
        Self {
            experiment: config.experiment,
            nbar,
            k,
            epsilon,
            phi,
            p_a: None,
            p_m: None,
            p_sym: None,
            visibility: None,
            fidelity_min: None,
            bound: None,
            flatness: None,
            deviation: None,
        }
    }

    fn quantized(self) -> Self {
        let q = |x: Option<f64>| x.map(quantize);
        Self {
            nbar: q(self.nbar),
            epsilon: q(self.epsilon),
            phi: quantize(self.phi),
            p_a: q(self.p_a),
            p_m: q(self.p_m),
            p_sym: q(self.p_sym),
            visibility: q(self.visibility),
            fidelity_min: q(self.fidelity_min),
            bound: q(self.bound),
            flatness: q(self.flatness),
            deviation: q(self.deviation),
            ..self
        }
    }
}

pub const CSV_HEADER: &str =
    "experiment,nbar,K,epsilon,phi,p_A,p_M,p_sym,visibility,fidelity_min,bound,flatness,deviation";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

/// Quantities shared by every row of one sweep.
#[derive(Debug, Clone, Copy, Default)]
struct SweepWide {
    visibility: Option<f64>,
    flatness: Option<f64>,
}

fn sweep_wide(config: &ExperimentConfig, frame: &Frame) -> Result<SweepWide> {
    Ok(match (config.experiment, frame) {
        (Experiment::Ramsey, _) => SweepWide { visibility: Some(sinusoid_visibility(|phi| run_ramsey(phi).1)), ..Default::default() },
        (Experiment::Boson | Experiment::Jc, Frame::Boson(r)) => {
            SweepWide { visibility: Some(boson_visibility(r)?), ..Default::default() }
        }
        (Experiment::Fermion, Frame::Fermion(p)) => {
            SweepWide { visibility: Some(run_fermion_ramsey(p, 0.0).visibility), ..Default::default() }
        }
        (Experiment::TwoSystem, frame) => {
            let kind = match frame {
                Frame::Boson(r) => FrameKind::Boson { nbar: r.nbar() },
                Frame::Fermion(p) => FrameKind::Fermion(*p),
                Frame::External => unreachable!("validated"),
            };
            let t = two_system_phase_test(&kind, &config.phi_grid, TwoSystemOptions::default())?;
            SweepWide { flatness: Some(t.flatness), ..Default::default() }
        }
        _ => SweepWide::default(),
    })
}

fn evaluate(config: &ExperimentConfig, frame: &Frame, wide: SweepWide, phi: f64) -> Result<SweepRow> {
    let mut row = SweepRow::new(config, frame, phi);
    row.visibility = wide.visibility;
    row.flatness = wide.flatness;
    match (config.experiment, frame) {
        (Experiment::Ramsey, _) => {
            let (g, e) = run_ramsey(phi);
            row.p_a = Some(g);
            row.p_m = Some(e);
        }
        (Experiment::Boson, Frame::Boson(r)) | (Experiment::Jc, Frame::Boson(r)) => {
            let free = FreeEvolutionParams::from_phi(phi);
            let out = if config.experiment == Experiment::Boson {
                run_boson_ramsey(r, &free)?
            } else {
                jaynes_cummings_ramsey(r, &free)?
            };
            row.p_a = Some(out.p_a);
            row.p_m = Some(out.p_m);
            row.fidelity_min = Some(rf_disturbance(r, &free)?.into_iter().fold(1.0, f64::min));
        }
        (Experiment::Fermion, Frame::Fermion(p)) => {
            let out = run_fermion_ramsey(p, phi);
            row.p_a = Some(out.p_a);
            row.p_m = Some(out.p_m);
        }
        (Experiment::TwoSystem, Frame::Boson(r)) => {
            let t = two_system_phase_test(&FrameKind::Boson { nbar: r.nbar() }, &[phi], TwoSystemOptions::default())?;
            row.p_sym = Some(t.p_symmetric[0]);
        }
        (Experiment::TwoSystem, Frame::Fermion(p)) => {
            let t = two_system_phase_test(&FrameKind::Fermion(*p), &[phi], TwoSystemOptions::default())?;
            row.p_sym = Some(t.p_symmetric[0]);
        }
        (Experiment::RelationalCheck, Frame::Boson(r)) => {
            row.deviation = Some(relational_protocol_check(r.nbar(), phi)?.worst());
        }
        (Experiment::RelationalCheck, Frame::Fermion(p)) => {
            row.deviation = Some(fermion_relational_check(p, phi)?.worst());
        }
        (Experiment::FidelityStudy, Frame::Boson(r)) => {
            let free = FreeEvolutionParams::from_phi(phi);
            let out = run_boson_ramsey(r, &free)?;
            row.p_a = Some(out.p_a);
            row.p_m = Some(out.p_m);
            row.fidelity_min = Some(rf_disturbance(r, &free)?.into_iter().fold(1.0, f64::min));
        }
        (Experiment::FidelityStudy, Frame::Fermion(p)) => {
            let out = run_fermion_ramsey(p, phi);
            row.p_a = Some(out.p_a);
            row.p_m = Some(out.p_m);
            // a certain outcome leaves the other conditional state undefined
            if let Ok(post) = postselect_and_fidelity(p, phi) {
                row.fidelity_min = Some(post.f_am.min(post.f_a0).min(post.f_m0));
                row.bound = Some(post.bound);
            }
        }
        _ => unreachable!("frame validated against experiment"),
    }
    Ok(row.quantized())
}

/// Evaluates the configured experiment at every grid point.
pub fn run(config: &ExperimentConfig) -> Result<SweepResult> {
    config.validate()?;
    let frame = config.frame()?;
    let wide = sweep_wide(config, &frame)?;
    let mut rows = config
        .phi_grid
        .par_iter()
        .map(|&phi| evaluate(config, &frame, wide, phi))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.phi.total_cmp(&b.phi));
    Ok(SweepResult { rows })
}

/// Runs the sweep and writes its CSV to `config.output_path`, if set.
pub fn run_to_file(config: &ExperimentConfig) -> Result<SweepResult> {
    let result = run(config)?;
    if let Some(path) = &config.output_path {
        std::fs::write(path, result.to_csv()).map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(result)
}

/// `max_φ |p_A^a − p_A^b|` over a shared grid.
pub fn compare(a: &ExperimentConfig, b: &ExperimentConfig) -> Result<f64> {
    if a.phi_grid.len() != b.phi_grid.len() || a.phi_grid.iter().zip(&b.phi_grid).any(|(x, y)| x.to_bits() != y.to_bits()) {
        return Err(Error::Config("compared configurations must share a phi_grid".into()));
    }
    let (ra, rb) = (run(a)?, run(b)?);
    ra.rows.iter().zip(&rb.rows).try_fold(0.0f64, |worst, (x, y)| match (x.p_a, y.p_a) {
        (Some(pa), Some(pb)) => Ok(worst.max((pa - pb).abs())),
        _ => Err(Error::Config(format!("cannot compare {} with {}: no p_A column", x.experiment, y.experiment))),
    })
}

fn fmt_float(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.11e}")).unwrap_or_default()
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let cells = [
                r.experiment.name().to_string(),
                fmt_float(r.nbar),
                r.k.map(|k| k.to_string()).unwrap_or_default(),
                fmt_float(r.epsilon),
                fmt_float(Some(r.phi)),
                fmt_float(r.p_a),
                fmt_float(r.p_m),
                fmt_float(r.p_sym),
                fmt_float(r.visibility),
                fmt_float(r.fidelity_min),
                fmt_float(r.bound),
                fmt_float(r.flatness),
                fmt_float(r.deviation),
            ];
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next() != Some(CSV_HEADER) {
            return Err(Error::Config("unexpected CSV header".into()));
        }
        let rows = lines
            .map(|line| {
                let cells: Vec<&str> = line.split(',').collect();
                if cells.len() != 13 {
                    return Err(Error::Config(format!("expected 13 cells, got {}", cells.len())));
                }
                let float = |i: usize| -> Result<Option<f64>> {
                    (!cells[i].is_empty())
                        .then(|| cells[i].parse::<f64>().map_err(|_| Error::Config(format!("bad number '{}'", cells[i]))))
                        .transpose()
                };
                Ok(SweepRow {
                    experiment: cells[0].parse()?,
                    nbar: float(1)?,
                    k: (!cells[2].is_empty())
                        .then(|| cells[2].parse::<usize>().map_err(|_| Error::Config(format!("bad K '{}'", cells[2]))))
                        .transpose()?,
                    epsilon: float(3)?,
                    phi: float(4)?.ok_or_else(|| Error::Config("missing phi".into()))?,
                    p_a: float(5)?,
                    p_m: float(6)?,
                    p_sym: float(7)?,
                    visibility: float(8)?,
                    fidelity_min: float(9)?,
                    bound: float(10)?,
                    flatness: float(11)?,
                    deviation: float(12)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rows })
    }
}
