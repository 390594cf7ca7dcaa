//! Value parsers shared by flags and the key=value config file.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::solver::{log_grid, TestFunctionFamily};
use crate::Complex;

/// Flat `key = value` file; `#` starts a comment, blank lines are ignored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile(BTreeMap<String, String>);

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        text.parse()
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    /// `flag` if given, else the parsed file entry, else `None`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match (flag, self.get(key)) {
            (Some(v), _) => Ok(Some(v)),
            (None, Some(raw)) => raw
                .parse()
                .map(Some)
                .map_err(|e| CliError::Config(format!("config key `{key}` = `{raw}`: {e}"))),
            (None, None) => Ok(None),
        }
    }

    /// Comma-separated list: the flag values if any were given, else the file entry.
    pub fn pick_list<T: FromStr>(&self, flag: Vec<T>, key: &str) -> Result<Vec<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        if !flag.is_empty() {
            return Ok(flag);
        }
        match self.get(key) {
            Some(raw) => raw
                .split(',')
                .map(|item| {
                    item.trim()
                        .parse()
                        .map_err(|e| CliError::Config(format!("config key `{key}` item `{item}`: {e}")))
                })
                .collect(),
            None => Ok(Vec::new()),
        }
    }
}

impl FromStr for ConfigFile {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("config line {}: expected key = value", n + 1)))?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self(map))
    }
}

/// Complex number written `re+imi`, `re-imi`, `re` or `imi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexArg(pub Complex);

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(raw: &str) -> Result<Self, String> {
        let text = raw.trim();
        let bad = |e: std::num::ParseFloatError| format!("invalid complex number `{raw}`: {e}");
        let Some(body) = text.strip_suffix('i') else {
            return text.parse().map(|re| Self(Complex::new(re, 0.0))).map_err(bad);
        };
        // Split at the last sign that is neither leading nor part of an exponent.
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(k) => (body[..k].parse().map_err(bad)?, body[k..].parse().map_err(bad)?),
            None => (0.0, body.parse().map_err(bad)?),
        };
        Ok(Self(Complex::new(re, im)))
    }
}

/// `p=<int>,q=<real>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyArg(pub TestFunctionFamily);

impl FromStr for FamilyArg {
    type Err = String;

    fn from_str(raw: &str) -> Result<Self, String> {
        let (mut p, mut q) = (None, None);
        for part in raw.split(',') {
            match part.trim().split_once('=') {
                Some(("p", v)) => p = Some(v.trim().parse::<u32>().map_err(|e| format!("family p: {e}"))?),
                Some(("q", v)) => q = Some(v.trim().parse::<f64>().map_err(|e| format!("family q: {e}"))?),
                _ => return Err(format!("invalid family `{raw}`, expected p=<int>,q=<real>")),
            }
        }
        let (Some(p), Some(q)) = (p, q) else {
            return Err(format!("family `{raw}` needs both p and q"));
        };
        TestFunctionFamily::new(p, q).map(Self).map_err(|e| e.to_string())
    }
}

/// `lo:hi:n`, expanded to `n` log-spaced points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogGridArg {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl LogGridArg {
    pub fn points(&self) -> Vec<f64> {
        log_grid(self.lo, self.hi, self.n)
    }
}

impl FromStr for LogGridArg {
    type Err = String;

    fn from_str(raw: &str) -> Result<Self, String> {
        let parts: Vec<&str> = raw.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(format!("invalid grid `{raw}`, expected lo:hi:n"));
        };
        let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("grid `{raw}`: {e}"));
        let (lo, hi) = (num(lo)?, num(hi)?);
        let n = n.trim().parse::<usize>().map_err(|e| format!("grid `{raw}`: {e}"))?;
        if !(lo > 0.0 && hi > lo && hi.is_finite()) || n == 0 {
            return Err(format!("grid `{raw}` needs 0 < lo < hi and n >= 1"));
        }
        Ok(Self { lo, hi, n })
    }
}

/// Known right-hand sides for `solve`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fixture {
    /// `f ≡ 0`.
    Zero,
    /// The forward transform of the configured test family.
    Family,
    /// `f(t) = t^{−k}`.
    Power(f64),
}

impl FromStr for Fixture {
    type Err = String;

    fn from_str(raw: &str) -> Result<Self, String> {
        match raw.trim() {
            "zero" => Ok(Self::Zero),
            "family" => Ok(Self::Family),
            other => match other.strip_prefix("power:") {
                Some(k) => k.parse().map(Self::Power).map_err(|e| format!("fixture `{raw}`: {e}")),
                None => Err(format!("unknown fixture `{raw}` (zero, family, power:<k>)")),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(raw: &str) -> Complex {
        raw.parse::<ComplexArg>().unwrap().0
    }

    #[test]
    fn complex_forms() {
        assert_eq!(z("-0.5+0i"), Complex::new(-0.5, 0.0));
        assert_eq!(z("1e-3-2.5e+1i"), Complex::new(1e-3, -25.0));
        assert_eq!(z("2"), Complex::new(2.0, 0.0));
        assert_eq!(z("-3i"), Complex::new(0.0, -3.0));
        assert_eq!(z("-1E-2+4i"), Complex::new(-0.01, 4.0));
        assert!("1+i".parse::<ComplexArg>().is_err());
        assert!("abc".parse::<ComplexArg>().is_err());
    }

    #[test]
    fn config_file_precedence() {
        let file: ConfigFile = "# comment\nnu = -0.6\n\na=2 # trailing\nx = 1.5, 2".parse().unwrap();
        assert_eq!(file.pick(None::<f64>, "nu").unwrap(), Some(-0.6));
        assert_eq!(file.pick(Some(-0.7), "nu").unwrap(), Some(-0.7));
        assert_eq!(file.pick(None::<f64>, "missing").unwrap(), None);
        assert_eq!(file.pick_list(Vec::<f64>::new(), "x").unwrap(), vec![1.5, 2.0]);
        assert_eq!(file.pick_list(vec![3.0], "x").unwrap(), vec![3.0]);
        assert!(file.pick(None::<u32>, "nu").is_err());
        assert!("novalue".parse::<ConfigFile>().is_err());
    }

    #[test]
    fn family_grid_fixture() {
        let fam = "p=2,q=1".parse::<FamilyArg>().unwrap().0;
        assert_eq!((fam.p, fam.q), (2, 1.0));
        assert!("p=0,q=1".parse::<FamilyArg>().is_err());
        assert!("p=2".parse::<FamilyArg>().is_err());
        assert_eq!("0.1:10:20".parse::<LogGridArg>().unwrap().points().len(), 20);
        assert!("10:0.1:20".parse::<LogGridArg>().is_err());
        assert_eq!("power:2".parse::<Fixture>().unwrap(), Fixture::Power(2.0));
        assert!("cubic".parse::<Fixture>().is_err());
    }
}
