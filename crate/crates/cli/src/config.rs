use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde_json::{json, Value};
use steiner_core::cohomology::GoldenTable;
use steiner_core::tangweights::{calibrate, SignConvention};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub jobs: usize,
    /// `None` means calibrate (or read the cached calibration).
    pub convention: Option<SignConvention>,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
}

/// `auto` or an explicit convention.
#[derive(Clone, Copy, Debug)]
pub struct ConventionArg(pub Option<SignConvention>);

pub fn parse_convention(s: &str) -> Result<ConventionArg, String> {
    if s == "auto" {
        return Ok(ConventionArg(None));
    }
    s.parse()
        .map(|c| ConventionArg(Some(c)))
        .map_err(|e| format!("{e}"))
}

fn cache_file(dir: &Path) -> PathBuf {
    dir.join(format!("calibration-{}.json", env!("CARGO_PKG_VERSION")))
}

fn read_cache(dir: &Path) -> Option<SignConvention> {
    let text = fs::read_to_string(cache_file(dir)).ok()?;
    let value: Value = serde_json::from_str(&text).ok()?;
    value.get("convention")?.as_str()?.parse().ok()
}

impl RunConfig {
    /// The explicit convention, else a cached calibration for this version,
    /// else a fresh calibration (written back to the cache directory).
    pub fn convention(&self) -> Result<SignConvention> {
        if let Some(c) = self.convention {
            return Ok(c);
        }
        if let Some(c) = self.cache_dir.as_deref().and_then(read_cache) {
            return Ok(c);
        }
        let cal = calibrate(&GoldenTable::embedded()).context("calibration failed")?;
        if let Some(dir) = &self.cache_dir {
            fs::create_dir_all(dir)
                .with_context(|| format!("cannot create cache directory {}", dir.display()))?;
            let body = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "convention": cal.convention.to_string(),
                "reference_matches": cal.reference_matches,
                "disambiguation_matches": cal.disambiguation_matches,
            });
            let path = cache_file(dir);
            fs::write(&path, format!("{body:#}\n"))
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
        Ok(cal.convention)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convention_argument() {
        assert!(parse_convention("auto").unwrap().0.is_none());
        let c = parse_convention("---neg").unwrap().0.unwrap();
        assert_eq!(c.to_string(), "---neg");
        assert!(parse_convention("sideways").is_err());
    }

    #[test]
    fn explicit_convention_skips_the_cache() {
        let c: SignConvention = "+-+pos".parse().unwrap();
        let cfg = RunConfig {
            jobs: 1,
            convention: Some(c),
            format: Format::Json,
            cache_dir: Some(PathBuf::from("/nonexistent/never-created")),
        };
        assert_eq!(cfg.convention().unwrap(), c);
    }

    #[test]
    fn unreadable_cache_is_ignored() {
        let dir = std::env::temp_dir().join(format!("steiner-config-test-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        fs::write(cache_file(&dir), "not json").unwrap();
        assert_eq!(read_cache(&dir), None);
        fs::write(cache_file(&dir), r#"{"convention": "---pos"}"#).unwrap();
        assert_eq!(
            read_cache(&dir).map(|c| c.to_string()),
            Some("---pos".into())
        );
        fs::remove_dir_all(&dir).unwrap();
    }
}
