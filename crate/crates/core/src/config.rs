//! Job configuration: one JSON document, optionally overridden by flags.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{HallError, Result, DEFAULT_BUDGET};
use crate::hall::Twist;
use crate::quiver::Quiver;
use crate::ring::is_prime;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuiverSpec {
    Preset(String),
    Explicit { vertices: Vec<String>, arrows: Vec<(String, String)> },
}

impl Default for QuiverSpec {
    fn default() -> Self {
        QuiverSpec::Preset("a2".into())
    }
}

impl QuiverSpec {
    pub fn build(&self) -> Result<Quiver> {
        match self {
            QuiverSpec::Preset(name) => Quiver::preset(name),
            QuiverSpec::Explicit { vertices, arrows } => Quiver::from_labels(vertices.clone(), arrows),
        }
    }

    /// A preset name, or else a path to a JSON quiver description.
    pub fn from_arg(arg: &str) -> Result<Self> {
        if Quiver::preset(arg).is_ok() {
            return Ok(QuiverSpec::Preset(arg.to_string()));
        }
        let text = std::fs::read_to_string(arg)
            .map_err(|e| HallError::Parse(format!("quiver `{arg}` is neither a preset nor a readable file: {e}")))?;
        serde_json::from_str(&text).map_err(|e| HallError::Parse(format!("{arg}: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QList {
    One(u32),
    Many(Vec<u32>),
}

impl QList {
    pub fn values(&self) -> Vec<u32> {
        match self {
            QList::One(q) => vec![*q],
            QList::Many(v) => v.clone(),
        }
    }
}

impl Default for QList {
    fn default() -> Self {
        QList::One(2)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JobConfig {
    pub quiver: QuiverSpec,
    pub q: QList,
    pub n: u32,
    pub twist: Twist,
    pub budget: u64,
    pub seed: u64,
    pub format: Format,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            quiver: QuiverSpec::default(),
            q: QList::default(),
            n: 2,
            twist: Twist::Half,
            budget: DEFAULT_BUDGET,
            seed: 0,
            format: Format::Text,
        }
    }
}

impl JobConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: JobConfig = serde_json::from_str(text).map_err(|e| HallError::Parse(e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HallError::Parse(format!("{}: {e}", path.display())))?;
        JobConfig::from_json(&text)
    }

    pub fn validate(&self) -> Result<Quiver> {
        let qs = self.q.values();
        if qs.is_empty() {
            return Err(HallError::InvalidParams("empty prime list".into()));
        }
        if let Some(q) = qs.iter().find(|&&q| !is_prime(q as u64)) {
            return Err(HallError::InvalidParams(format!("q = {q} is not prime")));
        }
        if self.n == 0 {
            return Err(HallError::InvalidParams("n must be at least 1".into()));
        }
        if self.budget == 0 {
            return Err(HallError::InvalidParams("budget must be positive".into()));
        }
        self.quiver.build()
    }
}

/// Parses `"1,2,0"` into integers.
pub fn parse_csv(s: &str) -> Result<Vec<u32>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| HallError::Parse(format!("bad list entry `{x}` in `{s}`"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_and_partial_configs() {
        let c = JobConfig::from_json(r#"{"quiver":"a3","q":[2,3],"n":3,"twist":"integer","format":"json"}"#).unwrap();
        assert_eq!(c.q.values(), vec![2, 3]);
        assert_eq!(c.twist, Twist::Integer);
        assert_eq!(c.validate().unwrap(), Quiver::preset("a3").unwrap());
        let c = JobConfig::from_json("{}").unwrap();
        assert_eq!(c, JobConfig::default());
        let c = JobConfig::from_json(r#"{"quiver":{"vertices":["a","b"],"arrows":[["b","a"]]},"q":5}"#).unwrap();
        assert_eq!(c.validate().unwrap().arrows(), &[(1, 0)]);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(JobConfig::from_json(r#"{"colour":1}"#).is_err());
        assert!(JobConfig::from_json(r#"{"q":4}"#).unwrap().validate().is_err());
        assert!(JobConfig::from_json(r#"{"n":0}"#).unwrap().validate().is_err());
        assert!(JobConfig::from_json(r#"{"quiver":"b7"}"#).unwrap().validate().is_err());
    }

    #[test]
    fn csv() {
        assert_eq!(parse_csv("1, 2,0").unwrap(), vec![1, 2, 0]);
        assert_eq!(parse_csv("").unwrap(), Vec::<u32>::new());
        assert!(parse_csv("1,x").is_err());
    }
}
