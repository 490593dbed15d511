//! Merges `--config` files with command-line flags and records the
//! resolved values.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use socnet::io::{self, RunConfig};

use crate::CliError;

/// Typed view over the merged configuration. Every value read through it,
/// defaults included, ends up in the resolved copy.
pub struct Settings {
    given: RunConfig,
    resolved: RunConfig,
    out: PathBuf,
}

impl Settings {
    /// Reads `config` (if any) restricted to `keys`, then applies the flag
    /// values, which take precedence.
    pub fn load(
        config: Option<&Path>,
        out: Option<String>,
        keys: &[&str],
        flags: Vec<(&str, Option<String>)>,
    ) -> Result<Self, CliError> {
        let mut allowed = keys.to_vec();
        allowed.push("out");
        let mut given = match config {
            Some(path) => {
                RunConfig::read(path, &allowed).map_err(|e| CliError::Usage(e.to_string()))?
            }
            None => RunConfig::new(),
        };
        for (key, value) in flags {
            debug_assert!(keys.contains(&key), "flag {key} missing from key list");
            if let Some(v) = value {
                given.set(key, v);
            }
        }
        if let Some(o) = out {
            given.set("out", o);
        }
        let out = given.get("out").map(PathBuf::from).ok_or_else(|| {
            CliError::Usage("missing required setting `out` (use --out DIR)".into())
        })?;
        Ok(Settings {
            given,
            resolved: RunConfig::new(),
            out,
        })
    }

    pub fn out_dir(&self) -> &Path {
        &self.out
    }

    pub fn raw(&mut self, key: &str) -> Option<String> {
        let v = self.given.get(key)?.to_owned();
        self.resolved.set(key, v.clone());
        Some(v)
    }

    pub fn opt<T>(&mut self, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.raw(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| CliError::Usage(format!("invalid value `{v}` for `{key}`: {e}")))
            })
            .transpose()
    }

    pub fn req<T>(&mut self, key: &str) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.opt(key)?
            .ok_or_else(|| CliError::Usage(format!("missing required setting `{key}`")))
    }

    pub fn or<T>(&mut self, key: &str, default: T) -> Result<T, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        match self.opt(key)? {
            Some(v) => Ok(v),
            None => {
                self.resolved.set(key, default.to_string());
                Ok(default)
            }
        }
    }

    /// Creates the output directory and writes `resolved.cfg` into it. The
    /// output location itself is not recorded, so runs into different
    /// directories produce identical copies.
    pub fn finish(&self) -> Result<(), CliError> {
        std::fs::create_dir_all(&self.out)
            .map_err(|e| CliError::Runtime(format!("{}: {e}", self.out.display())))?;
        self.resolved.write(&self.out.join("resolved.cfg"))?;
        Ok(())
    }

    pub fn write(&self, name: &str, text: &str) -> Result<(), CliError> {
        io::write_text(&self.out.join(name), text)?;
        Ok(())
    }
}
