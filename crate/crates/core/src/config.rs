//! Run configuration: a flat `key = value` file whose keys mirror the fields of
//! [`Config`]. Lines starting with `#` and blank lines are ignored.

use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geodesic_lab::MAX_STEP;
use crate::spectral_probe::MAX_DEGREE;

/// Largest CR dimension the laboratory accepts.
pub const MAX_N: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Config {
    pub n: usize,
    pub degree: u32,
    pub degree_max: u32,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub lemma_tol: f64,
    pub commutation_tol: f64,
    pub connection_tol: f64,
    pub route_tol: f64,
    pub steps: usize,
    pub step_size: f64,
    pub geodesic_trials: usize,
    pub hj_tol: f64,
    pub hamiltonian_tol: f64,
    pub lengthiness_tol: f64,
    pub speed_tol: f64,
    pub great_circle_tol: f64,
    pub cc_pairs: usize,
    pub cc_tol: f64,
    pub cc_success_rate: f64,
    pub contraction_tol: f64,
    pub k_samples: usize,
    pub equality_tol: f64,
    pub a: f64,
    pub b: f64,
    pub reach_samples: usize,
    pub fit_tol: f64,
    pub identity_tol: f64,
    pub reach_tol: f64,
    pub critical_tol: f64,
    pub timing: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            n: 1,
            degree: 3,
            degree_max: 3,
            trials: 100,
            seed: 42,
            tol: 1e-8,
            lemma_tol: 1e-9,
            commutation_tol: 1e-8,
            connection_tol: 1e-9,
            route_tol: 1e-8,
            steps: 1000,
            step_size: 1e-3,
            geodesic_trials: 20,
            hj_tol: 1e-5,
            hamiltonian_tol: 1e-7,
            lengthiness_tol: 1e-7,
            speed_tol: 1e-7,
            great_circle_tol: 1e-6,
            cc_pairs: 100,
            cc_tol: 1e-5,
            cc_success_rate: 0.95,
            contraction_tol: 1e-6,
            k_samples: 64,
            equality_tol: 1e-12,
            a: 0.0,
            b: 1.0,
            reach_samples: 16,
            fit_tol: 1e-9,
            identity_tol: 1e-8,
            reach_tol: 1e-8,
            critical_tol: 1e-9,
            timing: false,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Config(format!("cannot parse {key} = {value:?}")))
}

impl Config {
    /// Sets one key from its textual value. Unknown keys are errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "n" => self.n = parse(key, v)?,
            "degree" => self.degree = parse(key, v)?,
            "degree_max" => self.degree_max = parse(key, v)?,
            "trials" => self.trials = parse(key, v)?,
            "seed" => self.seed = parse(key, v)?,
            "tol" => self.tol = parse(key, v)?,
            "lemma_tol" => self.lemma_tol = parse(key, v)?,
            "commutation_tol" => self.commutation_tol = parse(key, v)?,
            "connection_tol" => self.connection_tol = parse(key, v)?,
            "route_tol" => self.route_tol = parse(key, v)?,
            "steps" => self.steps = parse(key, v)?,
            "step_size" => self.step_size = parse(key, v)?,
            "geodesic_trials" => self.geodesic_trials = parse(key, v)?,
            "hj_tol" => self.hj_tol = parse(key, v)?,
            "hamiltonian_tol" => self.hamiltonian_tol = parse(key, v)?,
            "lengthiness_tol" => self.lengthiness_tol = parse(key, v)?,
            "speed_tol" => self.speed_tol = parse(key, v)?,
            "great_circle_tol" => self.great_circle_tol = parse(key, v)?,
            "cc_pairs" => self.cc_pairs = parse(key, v)?,
            "cc_tol" => self.cc_tol = parse(key, v)?,
            "cc_success_rate" => self.cc_success_rate = parse(key, v)?,
            "contraction_tol" => self.contraction_tol = parse(key, v)?,
            "k_samples" => self.k_samples = parse(key, v)?,
            "equality_tol" => self.equality_tol = parse(key, v)?,
            "a" => self.a = parse(key, v)?,
            "b" => self.b = parse(key, v)?,
            "reach_samples" => self.reach_samples = parse(key, v)?,
            "fit_tol" => self.fit_tol = parse(key, v)?,
            "identity_tol" => self.identity_tol = parse(key, v)?,
            "reach_tol" => self.reach_tol = parse(key, v)?,
            "critical_tol" => self.critical_tol = parse(key, v)?,
            "timing" => self.timing = parse(key, v)?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Applies every `key = value` line of `text` on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Config> {
        let mut c = Config::default();
        c.apply_text(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Config> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if !(1..=MAX_N).contains(&self.n) {
            return fail(format!("n = {} must lie in 1..={MAX_N}", self.n));
        }
        if !(1..=MAX_DEGREE).contains(&self.degree) {
            return fail(format!("degree = {} must lie in 1..={MAX_DEGREE}", self.degree));
        }
        if !(1..=MAX_DEGREE).contains(&self.degree_max) {
            return fail(format!("degree_max = {} must lie in 1..={MAX_DEGREE}", self.degree_max));
        }
        if !(self.step_size > 0.0 && self.step_size <= MAX_STEP) {
            return fail(format!("step_size = {} must lie in (0, {MAX_STEP}]", self.step_size));
        }
        let counts = [
            ("trials", self.trials),
            ("steps", self.steps),
            ("geodesic_trials", self.geodesic_trials),
            ("cc_pairs", self.cc_pairs),
            ("k_samples", self.k_samples),
            ("reach_samples", self.reach_samples),
        ];
        if let Some((key, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return fail(format!("{key} must be at least 1"));
        }
        let tolerances = [
            ("tol", self.tol),
            ("lemma_tol", self.lemma_tol),
            ("commutation_tol", self.commutation_tol),
            ("connection_tol", self.connection_tol),
            ("route_tol", self.route_tol),
            ("hj_tol", self.hj_tol),
            ("hamiltonian_tol", self.hamiltonian_tol),
            ("lengthiness_tol", self.lengthiness_tol),
            ("speed_tol", self.speed_tol),
            ("great_circle_tol", self.great_circle_tol),
            ("cc_tol", self.cc_tol),
            ("contraction_tol", self.contraction_tol),
            ("equality_tol", self.equality_tol),
            ("fit_tol", self.fit_tol),
            ("identity_tol", self.identity_tol),
            ("reach_tol", self.reach_tol),
            ("critical_tol", self.critical_tol),
        ];
        if let Some((key, v)) = tolerances.iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
            return fail(format!("{key} = {v} must be positive"));
        }
        if !(0.0..=1.0).contains(&self.cc_success_rate) {
            return fail(format!("cc_success_rate = {} must lie in [0, 1]", self.cc_success_rate));
        }
        if !self.a.is_finite() || !self.b.is_finite() {
            return fail("a and b must be finite".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_overrides_and_comments() {
        let c = Config::parse("# run\nn = 2\n\nseed=7\ntol = 1e-6\ntiming = true\n").unwrap();
        assert_eq!(c.n, 2);
        assert_eq!(c.seed, 7);
        assert_eq!(c.tol, 1e-6);
        assert!(c.timing);
        assert_eq!(c.trials, Config::default().trials);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Config::parse("colour = blue"), Err(Error::Config(_))));
        assert!(matches!(Config::parse("n = 4"), Err(Error::Config(_))));
        assert!(matches!(Config::parse("n = 0"), Err(Error::Config(_))));
        assert!(matches!(Config::parse("n"), Err(Error::Config(_))));
        assert!(matches!(Config::parse("n = two"), Err(Error::Config(_))));
        assert!(matches!(Config::parse("step_size = 0.5"), Err(Error::Config(_))));
        assert!(matches!(Config::parse("degree = 7"), Err(Error::Config(_))));
        assert!(matches!(Config::parse("tol = -1"), Err(Error::Config(_))));
        assert!(matches!(Config::parse("trials = 0"), Err(Error::Config(_))));
    }

    #[test]
    fn defaults_are_valid() {
        Config::default().validate().unwrap();
    }
}
