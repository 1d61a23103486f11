use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use privrep_core::{Error, Manifest, Result};

/// Parameters merged from a config file and command-line flags.
///
/// Every value read is echoed into [`Settings::effective`], including
/// defaults, so the effective manifest alone reproduces a run.
pub struct Settings {
    given: Manifest,
    effective: Manifest,
}

impl Settings {
    pub fn load(command: &str, config: Option<&Path>, flags: Manifest) -> Result<Self> {
        let mut given = match config {
            Some(path) => Manifest::load(path)?,
            None => Manifest::new(),
        };
        if let Some(c) = given.get("command") {
            if c != command {
                return Err(Error::InvalidInput(format!(
                    "config was written by `{c}`, not `{command}`"
                )));
            }
        }
        given.merge(&flags);
        let mut effective = Manifest::new();
        effective.set("command", command);
        Ok(Self { given, effective })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.given.get(key)
    }

    pub fn get<T>(&mut self, key: &str, default: T) -> Result<T>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        match self.raw(key).map(str::to_owned) {
            Some(v) => {
                let parsed = parse(key, &v)?;
                self.effective.set(key, v);
                Ok(parsed)
            }
            None => {
                self.effective.set(key, &default);
                Ok(default)
            }
        }
    }

    /// Comma-separated list.
    pub fn list<T>(&mut self, key: &str, default: &str) -> Result<Vec<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        let v = self.raw(key).unwrap_or(default).to_owned();
        let items = v
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| parse(key, s))
            .collect::<Result<Vec<T>>>()?;
        if items.is_empty() {
            return Err(Error::InvalidInput(format!("{key} must list at least one value")));
        }
        self.effective.set(key, v);
        Ok(items)
    }

    pub fn has(&self, key: &str) -> bool {
        self.raw(key).is_some()
    }

    /// The master seed; drawn from system entropy when not given.
    pub fn seed(&mut self) -> Result<u64> {
        let drawn = rand::random::<u64>();
        self.get("seed", drawn)
    }

    pub fn effective(&self) -> &Manifest {
        &self.effective
    }
}

fn parse<T>(key: &str, v: &str) -> Result<T>
where
    T: FromStr,
    T::Err: Display,
{
    v.parse::<T>()
        .map_err(|e| Error::InvalidInput(format!("bad value for {key}: {v:?} ({e})")))
}

/// Adds `key=value` to `m` for every flag that was given.
pub fn put<T: Display>(m: &mut Manifest, key: &str, value: &Option<T>) {
    if let Some(v) = value {
        m.set(key, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config_and_defaults_are_echoed() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        std::fs::write(&path, "gamma=0.5\narms=3\n").unwrap();
        let mut flags = Manifest::new();
        flags.set("arms", 4);
        let mut s = Settings::load("frontier", Some(&path), flags).unwrap();
        assert_eq!(s.get("gamma", 0.1).unwrap(), 0.5);
        assert_eq!(s.get("arms", 1u32).unwrap(), 4);
        assert_eq!(s.get("points", 11usize).unwrap(), 11);
        assert_eq!(
            s.effective().to_string(),
            "command=frontier\ngamma=0.5\narms=4\npoints=11\n"
        );
    }

    #[test]
    fn wrong_command_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        std::fs::write(&path, "command=simulate\n").unwrap();
        assert!(Settings::load("frontier", Some(&path), Manifest::new()).is_err());
    }

    #[test]
    fn lists_parse_and_echo() {
        let mut flags = Manifest::new();
        flags.set("p", "0.9, 0,0");
        let mut s = Settings::load("simulate", None, flags).unwrap();
        assert_eq!(s.list::<f64>("p", "0.5").unwrap(), vec![0.9, 0.0, 0.0]);
        assert_eq!(s.list::<u32>("c", "1,2").unwrap(), vec![1, 2]);
        assert!(s.list::<f64>("x", "a").is_err());
    }
}
