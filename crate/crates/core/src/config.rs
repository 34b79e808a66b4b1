//! JSON scenario files.
//!
//! A scenario names the equation, the noise, the truncation and the data.
//! Required keys: `equation`, `noise`, `sigma`, `m_order`, `L`, `nx`, `T`,
//! `nt`, `chaos_order`, `chaos_modes`, `u0`. Everything else is optional.

use std::path::Path;

use serde_json::{Map, Value};

use crate::chaos::{ChaosSeries, Coeff, CoefficientSpace, DirectionH, WeightSequence};
use crate::error::{Error, Result};
use crate::multiindex::TruncationBox;
use crate::operators::{
    EvolutionProblem, NoiseModel, NoiseOperatorFamily, OperatorFamily, PeriodicGrid, SpatialAction,
};
use crate::oracle::{moment_integrability, wick_space_noise_integrability, Integrability};
use crate::propagator::DEFAULT_R;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equation {
    Heat,
    Ode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoiseKind {
    TimeWhite,
    SpaceWhite,
    SpaceTime,
    SingleGaussian,
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialDatum {
    GaussianBump { width: f64 },
    Constant { value: f64 },
    CustomGrid { values: Vec<f64> },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightChoice {
    Derived,
    Constant(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub equation: Equation,
    pub noise: NoiseKind,
    pub sigma: f64,
    pub m_order: u32,
    pub length: f64,
    pub nx: usize,
    pub horizon: f64,
    pub nt: usize,
    pub chaos_order: u32,
    pub chaos_modes: usize,
    pub u0: InitialDatum,
    pub weights: WeightChoice,
    pub r_exponent: f64,
    pub seed: u64,
    /// `a₀` in `A = a₂∂² + a₀` (heat) or the scalar `A` (ode).
    pub drift: f64,
    /// `a₂`; ignored for the ode.
    pub diffusion: f64,
    /// Time modes of space-time noise; the space modes are
    /// `chaos_modes / time_modes`.
    pub time_modes: usize,
    pub paths: usize,
    pub mc_dt: Option<f64>,
    pub h: Option<Vec<f64>>,
    pub r_sweep: Vec<f64>,
}

fn err(key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        message: message.into(),
    }
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| err(key, "missing required key"))
}

fn as_f64(v: &Value, key: &str) -> Result<f64> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| err(key, format!("expected a finite number, got {v}")))
}

fn as_usize(v: &Value, key: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| err(key, format!("expected a non-negative integer, got {v}")))
}

fn as_str<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| err(key, format!("expected a string, got {v}")))
}

fn as_f64_list(v: &Value, key: &str) -> Result<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| err(key, "expected an array of numbers"))?
        .iter()
        .map(|x| as_f64(x, key))
        .collect()
}

fn opt<T>(obj: &Map<String, Value>, key: &str, f: impl Fn(&Value, &str) -> Result<T>) -> Result<Option<T>> {
    obj.get(key).map(|v| f(v, key)).transpose()
}

const KNOWN_KEYS: [&str; 24] = [
    "equation", "noise", "sigma", "m_order", "L", "nx", "T", "nt", "chaos_order", "chaos_modes", "u0",
    "weights", "r_exponent", "seed", "drift", "diffusion", "bump_width", "u0_value", "u0_values",
    "time_modes", "paths", "mc_dt", "h", "r_sweep",
];

impl Scenario {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| err("<document>", e.to_string()))?;
        Self::from_value(&value)
    }

    pub fn from_value(value: &Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| err("<document>", "expected a JSON object"))?;
        if let Some(k) = obj.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(err(k, "unknown key"));
        }
        let equation = match as_str(required(obj, "equation")?, "equation")? {
            "heat" => Equation::Heat,
            "ode" => Equation::Ode,
            other => return Err(err("equation", format!("expected \"heat\" or \"ode\", got \"{other}\""))),
        };
        let noise = match as_str(required(obj, "noise")?, "noise")? {
            "time-white" => NoiseKind::TimeWhite,
            "space-white" => NoiseKind::SpaceWhite,
            "space-time" => NoiseKind::SpaceTime,
            "single-gaussian" => NoiseKind::SingleGaussian,
            other => return Err(err("noise", format!("unknown noise kind \"{other}\""))),
        };
        let sigma = as_f64(required(obj, "sigma")?, "sigma")?;
        let m_order = as_usize(required(obj, "m_order")?, "m_order")?;
        if m_order > 2 {
            return Err(err("m_order", format!("expected 0, 1 or 2, got {m_order}")));
        }
        let length = as_f64(required(obj, "L")?, "L")?;
        let nx = as_usize(required(obj, "nx")?, "nx")?;
        let horizon = as_f64(required(obj, "T")?, "T")?;
        let nt = as_usize(required(obj, "nt")?, "nt")?;
        let chaos_order = as_usize(required(obj, "chaos_order")?, "chaos_order")?;
        let chaos_modes = as_usize(required(obj, "chaos_modes")?, "chaos_modes")?;
        let u0 = match as_str(required(obj, "u0")?, "u0")? {
            "gaussian-bump" => InitialDatum::GaussianBump {
                width: opt(obj, "bump_width", as_f64)?.unwrap_or(length / 16.0),
            },
            "constant" => InitialDatum::Constant {
                value: opt(obj, "u0_value", as_f64)?.unwrap_or(1.0),
            },
            "custom-grid" => InitialDatum::CustomGrid {
                values: opt(obj, "u0_values", as_f64_list)?
                    .ok_or_else(|| err("u0_values", "required when u0 is \"custom-grid\""))?,
            },
            other => return Err(err("u0", format!("unknown initial datum \"{other}\""))),
        };
        let weights = match obj.get("weights") {
            None => WeightChoice::Derived,
            Some(Value::String(s)) if s == "derived" => WeightChoice::Derived,
            Some(Value::String(s)) if s == "constant" => WeightChoice::Constant(1.0),
            Some(Value::Object(m)) if m.len() == 1 && m.contains_key("constant") => {
                WeightChoice::Constant(as_f64(&m["constant"], "weights")?)
            }
            Some(v) => {
                return Err(err(
                    "weights",
                    format!("expected \"derived\", \"constant\" or {{\"constant\": q}}, got {v}"),
                ))
            }
        };
        let s = Self {
            equation,
            noise,
            sigma,
            m_order: m_order as u32,
            length,
            nx,
            horizon,
            nt,
            chaos_order: u32::try_from(chaos_order).map_err(|_| err("chaos_order", "too large"))?,
            chaos_modes,
            u0,
            weights,
            r_exponent: opt(obj, "r_exponent", as_f64)?.unwrap_or(DEFAULT_R),
            seed: opt(obj, "seed", |v, k| v.as_u64().ok_or_else(|| err(k, "expected a u64")))?.unwrap_or(0),
            drift: opt(obj, "drift", as_f64)?.unwrap_or(0.0),
            diffusion: opt(obj, "diffusion", as_f64)?.unwrap_or(1.0),
            time_modes: opt(obj, "time_modes", as_usize)?.unwrap_or(1),
            paths: opt(obj, "paths", as_usize)?.unwrap_or(10_000),
            mc_dt: opt(obj, "mc_dt", as_f64)?,
            h: opt(obj, "h", as_f64_list)?,
            r_sweep: opt(obj, "r_sweep", as_f64_list)?.unwrap_or_else(|| vec![-4.0, -3.0, -2.5, -2.0, -1.0, 0.0]),
        };
        s.validate()?;
        Ok(s)
    }

    /// Checks ranges and cross-key consistency.
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64, key: &str| if x > 0.0 { Ok(()) } else { Err(err(key, format!("must be positive, got {x}"))) };
        positive(self.length, "L")?;
        positive(self.horizon, "T")?;
        positive(self.diffusion, "diffusion")?;
        if self.nt == 0 {
            return Err(err("nt", "must be at least 1"));
        }
        if self.chaos_modes == 0 {
            return Err(err("chaos_modes", "must be at least 1"));
        }
        if self.paths == 0 {
            return Err(err("paths", "must be at least 1"));
        }
        if let Some(dt) = self.mc_dt {
            positive(dt, "mc_dt")?;
        }
        if let WeightChoice::Constant(q) = self.weights {
            if !(q >= 1.0) {
                return Err(err("weights", format!("constant weight {q} < 1")));
            }
        }
        match self.equation {
            Equation::Ode => {
                if self.m_order != 0 {
                    return Err(err("m_order", "the ode has no spatial derivative; use 0"));
                }
                if !matches!(self.u0, InitialDatum::Constant { .. }) {
                    return Err(err("u0", "the ode takes a \"constant\" initial datum"));
                }
                if matches!(self.noise, NoiseKind::SpaceWhite | NoiseKind::SpaceTime) {
                    return Err(err("noise", "the ode has no space variable"));
                }
            }
            Equation::Heat => {
                if self.nx < 2 {
                    return Err(err("nx", "must be at least 2"));
                }
                if let InitialDatum::CustomGrid { values } = &self.u0 {
                    if values.len() != self.nx {
                        return Err(err("u0_values", format!("expected {} values, got {}", self.nx, values.len())));
                    }
                }
                if let InitialDatum::GaussianBump { width } = self.u0 {
                    positive(width, "bump_width")?;
                }
            }
        }
        match self.noise {
            NoiseKind::SingleGaussian if self.chaos_modes != 1 => {
                Err(err("chaos_modes", "single-gaussian noise has exactly one mode"))
            }
            NoiseKind::SpaceTime if self.time_modes == 0 || self.chaos_modes % self.time_modes != 0 => {
                Err(err("time_modes", format!("must divide chaos_modes = {}", self.chaos_modes)))
            }
            _ => Ok(()),
        }
    }

    /// Applies command-line overrides.
    pub fn with_overrides(mut self, seed: Option<u64>, order: Option<u32>, modes: Option<usize>) -> Result<Self> {
        if let Some(s) = seed {
            self.seed = s;
        }
        if let Some(n) = order {
            self.chaos_order = n;
        }
        if let Some(k) = modes {
            self.chaos_modes = k;
        }
        self.validate()?;
        Ok(self)
    }

    pub fn grid(&self) -> Option<PeriodicGrid> {
        (self.equation == Equation::Heat).then(|| PeriodicGrid::new(self.length, self.nx))
    }

    pub fn tbox(&self) -> TruncationBox {
        TruncationBox::new(self.chaos_order, self.chaos_modes)
    }

    pub fn noise_model(&self) -> NoiseModel {
        match self.noise {
            NoiseKind::TimeWhite => NoiseModel::time_white(self.horizon, self.chaos_modes),
            NoiseKind::SingleGaussian => NoiseModel::SingleGaussian,
            NoiseKind::SpaceWhite => NoiseModel::SpaceWhite {
                grid: PeriodicGrid::new(self.length, self.nx),
                modes: self.chaos_modes,
            },
            NoiseKind::SpaceTime => NoiseModel::space_time(
                self.horizon,
                PeriodicGrid::new(self.length, self.nx),
                self.time_modes,
                self.chaos_modes / self.time_modes,
            ),
        }
    }

    /// Fixed weights, or `None` when they are derived from `C_k`.
    pub fn fixed_weights(&self) -> Result<Option<WeightSequence>> {
        match self.weights {
            WeightChoice::Derived => Ok(None),
            WeightChoice::Constant(q) => WeightSequence::constant(q).map(Some),
        }
    }

    /// The direction `h` used by the pairing check: the configured one, or
    /// `0.3/√K` in every mode.
    pub fn direction(&self) -> DirectionH {
        match &self.h {
            Some(h) => DirectionH::new(h.clone()),
            None => DirectionH::new(vec![0.3 / (self.chaos_modes as f64).sqrt(); self.chaos_modes]),
        }
    }

    pub fn problem(&self) -> Result<EvolutionProblem> {
        let tbox = self.tbox();
        let noise = self.noise_model();
        let (a, m, u0) = match self.equation {
            Equation::Ode => {
                let value = match self.u0 {
                    InitialDatum::Constant { value } => value,
                    _ => unreachable!("validated"),
                };
                let u0 = ChaosSeries::deterministic(CoefficientSpace::scalar(), tbox, vec![Coeff::new(value, 0.0)])?;
                let m = NoiseOperatorFamily::uniform(noise, SpatialAction::Scalar(self.sigma));
                (OperatorFamily::scalar(self.drift), m, u0)
            }
            Equation::Heat => {
                let grid = PeriodicGrid::new(self.length, self.nx);
                let space = grid.fourier_space();
                let a = OperatorFamily::multiplier(space.clone(), self.diffusion, 0.0, self.drift)?;
                let m = match self.noise {
                    NoiseKind::TimeWhite | NoiseKind::SingleGaussian => {
                        NoiseOperatorFamily::uniform(noise, SpatialAction::derivative(&space, self.sigma, self.m_order)?)
                    }
                    NoiseKind::SpaceWhite | NoiseKind::SpaceTime => {
                        NoiseOperatorFamily::space_multiplication(noise, &grid, self.sigma, self.m_order)?
                    }
                };
                let values = match &self.u0 {
                    InitialDatum::GaussianBump { width } => grid.gaussian_bump(*width),
                    InitialDatum::Constant { value } => vec![*value; self.nx],
                    InitialDatum::CustomGrid { values } => values.clone(),
                };
                let u0 = ChaosSeries::deterministic(space, tbox, grid.forward_real(&values))?;
                (a, m, u0)
            }
        };
        EvolutionProblem::new(a, m, u0, self.horizon, self.nt, tbox)
    }

    /// Integrability of the second moment in the wavenumber, when a closed
    /// form is available for this scenario.
    pub fn regime(&self) -> Option<Integrability> {
        match (self.equation, self.noise) {
            (Equation::Heat, NoiseKind::TimeWhite) if self.drift == 0.0 && self.diffusion == 1.0 => {
                Some(moment_integrability(self.m_order, self.sigma))
            }
            (Equation::Heat, NoiseKind::SingleGaussian)
                if self.m_order == 1 && self.sigma.abs() == 1.0 && self.drift == 0.0 && self.diffusion == 1.0 =>
            {
                Some(wick_space_noise_integrability(self.horizon))
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const WICK: &str = r#"{"equation":"ode","noise":"single-gaussian","sigma":1,"m_order":0,"L":1,"nx":1,
        "T":2,"nt":64,"chaos_order":4,"chaos_modes":1,"u0":"constant","drift":1}"#;

    #[test]
    fn parses_and_builds() {
        let s = Scenario::from_json_str(WICK).unwrap();
        assert_eq!(s.equation, Equation::Ode);
        assert_eq!(s.weights, WeightChoice::Derived);
        let p = s.problem().unwrap();
        assert_eq!(p.nt, 64);
        assert_eq!(p.tbox, TruncationBox::new(4, 1));
    }

    #[test]
    fn missing_key_is_named() {
        let text = WICK.replace("\"T\":2,", "");
        match Scenario::from_json_str(&text) {
            Err(Error::Config { key, .. }) => assert_eq!(key, "T"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_values_are_named() {
        for (from, to, key) in [
            ("\"m_order\":0", "\"m_order\":3", "m_order"),
            ("\"nt\":64", "\"nt\":0", "nt"),
            ("\"drift\":1", "\"drift\":1,\"colour\":2", "colour"),
            ("\"u0\":\"constant\"", "\"u0\":\"gaussian-bump\"", "u0"),
            ("\"chaos_modes\":1", "\"chaos_modes\":2", "chaos_modes"),
        ] {
            match Scenario::from_json_str(&WICK.replace(from, to)) {
                Err(Error::Config { key: k, .. }) => assert_eq!(k, key, "{to}"),
                other => panic!("{to}: {other:?}"),
            }
        }
    }

    #[test]
    fn overrides() {
        let s = Scenario::from_json_str(WICK).unwrap().with_overrides(Some(9), Some(6), None).unwrap();
        assert_eq!((s.seed, s.chaos_order), (9, 6));
        assert!(Scenario::from_json_str(WICK).unwrap().with_overrides(None, None, Some(3)).is_err());
    }
}
