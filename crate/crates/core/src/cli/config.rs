//! Sweep configuration files.
//!
//! ```text
//! # comment
//! [experiment]
//! algorithm = rlnc
//! n = 64
//! p = 0.4
//! beta = 2
//!
//! [experiment]
//! algorithm = r1
//! n = 64
//! p = 0.4
//! alpha = 0.5
//! ```
//!
//! Keys mirror [`ExperimentConfig`] fields. `algorithm`, `n` and `p` are
//! required; the rest default as in [`ExperimentConfig::new`].

use std::str::FromStr;

use thiserror::Error;

use crate::montecarlo::{Algorithm, ExperimentConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("no experiments defined")]
    Empty,
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

fn line_err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Line {
        line,
        message: message.into(),
    }
}

const KEYS: &[&str] = &[
    "algorithm",
    "n",
    "p",
    "beta",
    "alpha",
    "replicates",
    "base_seed",
    "max_rounds",
    "strict_decoding",
    "payload_check",
];

#[derive(Default)]
struct Section {
    header_line: usize,
    entries: Vec<(usize, String, String)>,
}

impl Section {
    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.entries
            .iter()
            .find(|(_, k, _)| k == key)
            .map(|(l, _, v)| (*l, v.as_str()))
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some((line, raw)) => raw
                .parse()
                .map(Some)
                .map_err(|_| line_err(line, format!("invalid value {raw:?} for {key}"))),
        }
    }

    fn flag(&self, key: &str) -> Result<bool, ConfigError> {
        match self.get(key) {
            None => Ok(false),
            Some((line, raw)) => match raw.to_ascii_lowercase().as_str() {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                _ => Err(line_err(line, format!("invalid boolean {raw:?} for {key}"))),
            },
        }
    }

    fn required<T: FromStr>(&self, key: &str) -> Result<T, ConfigError> {
        self.parsed(key)?.ok_or_else(|| {
            line_err(
                self.header_line,
                format!("experiment is missing required key {key}"),
            )
        })
    }

    fn into_config(self) -> Result<ExperimentConfig, ConfigError> {
        let (alg_line, alg_raw) = self.get("algorithm").ok_or_else(|| {
            line_err(self.header_line, "experiment is missing required key algorithm")
        })?;
        let algorithm = Algorithm::parse(alg_raw)
            .ok_or_else(|| line_err(alg_line, format!("unknown algorithm {alg_raw:?}")))?;
        let mut cfg = ExperimentConfig::new(algorithm, self.required("n")?, self.required("p")?);
        if let Some((line, _)) = self.get("beta") {
            if !algorithm.is_rlnc() {
                return Err(line_err(line, "beta requires rlnc"));
            }
        }
        for key in ["strict_decoding", "payload_check"] {
            if let Some((line, _)) = self.get(key) {
                if !algorithm.is_rlnc() {
                    return Err(line_err(line, format!("{key} requires rlnc")));
                }
            }
        }
        if let Some(beta) = self.parsed("beta")? {
            cfg.beta = beta;
        }
        if let Some(alpha) = self.parsed("alpha")? {
            cfg.alpha = alpha;
        }
        if let Some(r) = self.parsed("replicates")? {
            cfg.replicates = r;
        }
        if let Some(s) = self.parsed("base_seed")? {
            cfg.base_seed = s;
        }
        cfg.max_rounds = self.parsed("max_rounds")?;
        cfg.strict_decoding = self.flag("strict_decoding")?;
        cfg.payload_check = self.flag("payload_check")?;
        cfg.validate()
            .map_err(|e| line_err(self.header_line, e.to_string()))?;
        Ok(cfg)
    }
}

pub fn parse_sweep_config(text: &str) -> Result<Vec<ExperimentConfig>, ConfigError> {
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            if line != "[experiment]" {
                return Err(line_err(line_no, format!("unknown section {line}")));
            }
            sections.push(Section {
                header_line: line_no,
                entries: Vec::new(),
            });
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| line_err(line_no, format!("expected key = value, got {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(line_err(line_no, format!("unknown key {key:?}")));
        }
        let section = sections
            .last_mut()
            .ok_or_else(|| line_err(line_no, "key outside an [experiment] section"))?;
        if section.get(key).is_some() {
            return Err(line_err(line_no, format!("duplicate key {key}")));
        }
        section.entries.push((line_no, key.to_string(), value.to_string()));
    }
    if sections.is_empty() {
        return Err(ConfigError::Empty);
    }
    sections.into_iter().map(Section::into_config).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_sections_in_order() {
        let text = "# sweep\n[experiment]\nalgorithm = rlnc\nn = 64\np = 0.4\nbeta = 2\n\n[experiment]\nalgorithm=r1\nn=32\np=0.5\nalpha = 0.25\nreplicates = 10\nbase_seed = 9\n";
        let cfgs = parse_sweep_config(text).unwrap();
        assert_eq!(cfgs.len(), 2);
        assert_eq!(cfgs[0].algorithm, Algorithm::Rlnc);
        assert_eq!(cfgs[0].beta, 2.0);
        assert_eq!(cfgs[0].replicates, 10_000);
        assert_eq!(cfgs[1].algorithm, Algorithm::R1);
        assert_eq!((cfgs[1].n, cfgs[1].alpha, cfgs[1].replicates, cfgs[1].base_seed), (32, 0.25, 10, 9));
    }

    #[test]
    fn empty_is_rejected() {
        assert_eq!(parse_sweep_config("").unwrap_err(), ConfigError::Empty);
        assert_eq!(parse_sweep_config("# nothing\n\n").unwrap_err().to_string(), "no experiments defined");
    }

    #[test]
    fn errors_name_the_line() {
        let cases = [
            ("[experiment]\nalgorithm = r1\nn = 4\np = 0.5\ncolour = red\n", 5),
            ("n = 4\n", 1),
            ("[experiment]\nalgorithm = r1\nn = four\np = 0.5\n", 3),
            ("[experiment]\nalgorithm = r1\nn = 4\n", 1),
            ("[experiment]\nalgorithm = r1\nn = 4\np = 0.5\nbeta = 2\n", 5),
            ("[experiment]\nalgorithm = r3\nn = 4\np = 0.5\n", 2),
            ("[other]\n", 1),
            ("[experiment]\nalgorithm = r1\nn = 4\nn = 5\np = 0.5\n", 4),
            ("[experiment]\nalgorithm = r1\nn = 4\np = 1.5\n", 1),
        ];
        for (text, line) in cases {
            match parse_sweep_config(text) {
                Err(ConfigError::Line { line: got, .. }) => assert_eq!(got, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }
}
