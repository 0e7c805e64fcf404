//! Production-code filtering: drops tests, examples and vendored sources.

use globset::{Glob, GlobSet, GlobSetBuilder};

use crate::config::CorpusManifest;
use crate::error::{Error, Result};

/// Directory names that mark non-production code wherever they appear in a path.
pub const DEFAULT_EXCLUSIONS: [&str; 10] =
    ["test", "tests", "testing", "examples", "samples", "demo", "vendor", "third_party", "third-party", "thirdparty"];

const TEST_FILE_SUFFIXES: [&str; 2] = ["Test.java", "Tests.java"];

/// Default segment rules plus user globs, matched against `/`-separated relative paths.
#[derive(Debug, Clone)]
pub struct ExclusionFilter {
    globs: GlobSet,
}

impl ExclusionFilter {
    pub fn new(patterns: &[String]) -> Result<Self> {
        let mut builder = GlobSetBuilder::new();
        for p in patterns {
            let glob = Glob::new(p).map_err(|e| Error::Config(format!("bad glob `{p}`: {e}")))?;
            builder.add(glob);
        }
        let globs = builder.build().map_err(|e| Error::Config(e.to_string()))?;
        Ok(ExclusionFilter { globs })
    }

    pub fn keeps(&self, rel_path: &str) -> bool {
        let mut segments = rel_path.split('/').peekable();
        while let Some(seg) = segments.next() {
            let is_dir = segments.peek().is_some();
            if is_dir && DEFAULT_EXCLUSIONS.contains(&seg) {
                return false;
            }
            if !is_dir && TEST_FILE_SUFFIXES.iter().any(|s| seg.ends_with(s)) {
                return false;
            }
        }
        !self.globs.is_match(rel_path)
    }
}

/// Keeps only the production files among `paths`.
pub fn filter_production_code(paths: &[String], manifest: &CorpusManifest) -> Result<Vec<String>> {
    let filter = ExclusionFilter::new(&manifest.exclude)?;
    Ok(paths.iter().filter(|p| filter.keeps(p)).cloned().collect())
}
