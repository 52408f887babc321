//! Run configuration: defaults, then a `key = value` file, then environment
//! overrides, then command-line flags.

use std::path::{Path, PathBuf};

use ffzeta::scalars::FieldSpec;
use serde::Serialize;

pub const ENV_CACHE: &str = "FFZETA_CACHE";
pub const ENV_THREADS: &str = "FFZETA_THREADS";

pub const DEFAULT_PREC: i64 = 30;
pub const DEFAULT_CAP: u64 = ffzeta::rings::DEFAULT_CAP;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Format, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format \"{s}\" (text, json, csv)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub q: u32,
    /// Degree of E over F_q.
    pub ext: u32,
    pub prec: i64,
    pub cap: u64,
    pub threads: Option<usize>,
    pub cache: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    /// Modulus of F_q over F_p, lowest degree first.
    pub modulus_q: Option<Vec<u32>>,
    /// Modulus of E over F_q, coefficients as packed F_q indices.
    pub modulus_e: Option<Vec<u32>>,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            q: 2,
            ext: 1,
            prec: DEFAULT_PREC,
            cap: DEFAULT_CAP,
            threads: None,
            cache: None,
            format: Format::Text,
            seed: 0,
            modulus_q: None,
            modulus_e: None,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("bad value for {key}: \"{v}\""))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<u32>, String> {
    v.split(',').map(|c| parse_num(key, c.trim())).collect()
}

impl RunConfig {
    /// The field tower: shipped defaults unless moduli were given.
    pub fn field_spec(&self) -> Result<FieldSpec, String> {
        let q = self.q;
        let base = match &self.modulus_q {
            None => FieldSpec::default_for_q(q).map_err(|e| e.to_string())?,
            Some(m) => {
                let p = (2..=q).find(|d| q.is_multiple_of(*d)).ok_or_else(|| format!("q = {q} is not a prime power"))?;
                let m0 = m.len().saturating_sub(1) as u32;
                if m0 == 0 || (p as u64).checked_pow(m0) != Some(q as u64) {
                    return Err(format!("modulus_q has degree {m0}, but q = {q}"));
                }
                FieldSpec { p, m0, n: 1, modulus_q: m.clone(), modulus_e: vec![0, 1] }
            }
        };
        match &self.modulus_e {
            None => base.extended(self.ext).map_err(|e| e.to_string()),
            Some(m) => {
                let n = m.len().saturating_sub(1) as u32;
                if self.ext != 1 && self.ext != n {
                    return Err(format!("modulus_e has degree {n}, but ext = {}", self.ext));
                }
                Ok(FieldSpec { n, modulus_e: m.clone(), ..base })
            }
        }
    }

    /// Checks `N ≥ 1` and `cap ≥ q`.
    pub fn validate(&self) -> Result<(), String> {
        if self.prec < 1 {
            return Err("precision must be at least 1".into());
        }
        if self.cap < self.q as u64 {
            return Err(format!("cap {} is below q = {}", self.cap, self.q));
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "q" => self.q = parse_num(key, value)?,
            "ext" => self.ext = parse_num(key, value)?,
            "prec" => self.prec = parse_num(key, value)?,
            "cap" => self.cap = parse_num(key, value)?,
            "threads" => self.threads = Some(parse_num(key, value)?),
            "cache" => self.cache = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            "seed" => self.seed = parse_num(key, value)?,
            "modulus_q" => self.modulus_q = Some(parse_list(key, value)?),
            "modulus_e" => self.modulus_e = Some(parse_list(key, value)?),
            _ => return Err(format!("unknown config key \"{key}\"")),
        }
        Ok(())
    }

    /// Applies a config file. Lines are `key = value`; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), String> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key = value", no + 1))?;
            self.set(k.trim(), v.trim()).map_err(|e| format!("config line {}: {e}", no + 1))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        self.apply_text(&text)
    }

    pub fn apply_env(&mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<(), String> {
        if let Some(v) = lookup(ENV_CACHE) {
            if !v.is_empty() {
                self.cache = Some(PathBuf::from(v));
            }
        }
        if let Some(v) = lookup(ENV_THREADS) {
            if !v.is_empty() {
                self.threads = Some(parse_num(ENV_THREADS, &v)?);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_env() {
        let mut c = RunConfig::default();
        c.apply_text("# run\nq = 3\nprec=40  # digits\ncache = /tmp/a\nformat = json\n").unwrap();
        assert_eq!((c.q, c.prec, c.format), (3, 40, Format::Json));
        c.apply_env(|k| match k {
            ENV_CACHE => Some("/tmp/b".into()),
            ENV_THREADS => Some("2".into()),
            _ => None,
        })
        .unwrap();
        assert_eq!(c.cache, Some(PathBuf::from("/tmp/b")));
        assert_eq!(c.threads, Some(2));
    }

    #[test]
    fn custom_moduli() {
        let mut c = RunConfig::default();
        c.apply_text("q = 4\nmodulus_q = 1,1,1\nmodulus_e = 2,1,1").unwrap();
        let spec = c.field_spec().unwrap();
        assert_eq!((spec.p, spec.m0, spec.n), (2, 2, 2));
        assert!(ffzeta::scalars::Field::new(&spec).is_ok());
        c.apply_text("modulus_q = 1,0,1").unwrap();
        assert!(ffzeta::scalars::Field::new(&c.field_spec().unwrap()).is_err());
        c.apply_text("modulus_q = 1,1").unwrap();
        assert!(c.field_spec().is_err());
        let mut d = RunConfig::default();
        d.prec = 0;
        assert!(d.validate().is_err());
    }

    #[test]
    fn rejects_garbage() {
        let mut c = RunConfig::default();
        assert!(c.apply_text("q 3").is_err());
        assert!(c.apply_text("colour = red").is_err());
        assert!(c.apply_text("prec = many").is_err());
        assert!(c.apply_env(|k| (k == ENV_THREADS).then(|| "x".into())).is_err());
    }
}
