//! The JSON pair-description format.
//!
//! ```json
//! { "rank": 1, "gram": [[1]], "K": [-3], "chi": 3, "sigma": 1,
//!   "components": [{ "class": [4], "smooth": true, "rational": false }],
//!   "curves": [{ "class": [1], "rational": true, "smooth": true }] }
//! ```
//!
//! Optional keys: `name`, `height_bound`, `reference` (class used to bound
//! the lattice enumeration) and per-curve `irreducible` (default true).

use std::path::Path;

use logpair::lattice::{validate, ValidationReport};
use logpair::{BoundaryComponent, CurveRecord, DivisorClass, Lattice, SurfacePair};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    #[serde(rename = "K")]
    pub k: Vec<i64>,
    pub chi: i64,
    pub sigma: i64,
    pub components: Vec<ComponentEntry>,
    #[serde(default)]
    pub curves: Vec<CurveEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height_bound: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentEntry {
    pub class: Vec<i64>,
    pub smooth: bool,
    pub rational: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveEntry {
    pub class: Vec<i64>,
    pub rational: bool,
    pub smooth: bool,
    #[serde(default = "yes")]
    pub irreducible: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug)]
pub enum InputError {
    Io { path: String, source: std::io::Error },
    Schema { path: String, message: String },
    Validation(ValidationReport),
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InputError::Io { path, source } => write!(f, "cannot read {path}: {source}"),
            InputError::Schema { path, message } => write!(f, "schema error at {path}: {message}"),
            InputError::Validation(report) => write!(f, "validation failed\n{report}"),
        }
    }
}

impl std::error::Error for InputError {}

fn schema(path: impl Into<String>, message: impl Into<String>) -> InputError {
    InputError::Schema { path: path.into(), message: message.into() }
}

impl PairFile {
    pub fn from_json(text: &str) -> Result<Self, InputError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let p = e.path().to_string();
            let path = if p == "." { p } else { format!(".{p}") };
            schema(path, e.inner().to_string())
        })
    }

    /// Shape checks, then the lattice-level pair (not yet validated).
    pub fn to_pair(&self) -> Result<SurfacePair, InputError> {
        let n = self.rank;
        if self.gram.len() != n {
            return Err(schema(".gram", format!("{} rows for rank {n}", self.gram.len())));
        }
        if let Some(i) = self.gram.iter().position(|row| row.len() != n) {
            return Err(schema(format!(".gram[{i}]"), format!("row has {} entries for rank {n}", self.gram[i].len())));
        }
        let class = |v: &[i64], path: String| {
            if v.len() == n {
                Ok(DivisorClass::from_ints(v))
            } else {
                Err(schema(path, format!("class has {} entries for rank {n}", v.len())))
            }
        };
        let canonical = class(&self.k, ".K".into())?;
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                Ok(BoundaryComponent {
                    class: class(&c.class, format!(".components[{i}].class"))?,
                    smooth: c.smooth,
                    rational: c.rational,
                })
            })
            .collect::<Result<Vec<_>, InputError>>()?;
        let catalog = self
            .curves
            .iter()
            .enumerate()
            .map(|(i, c)| {
                Ok(CurveRecord {
                    class: class(&c.class, format!(".curves[{i}].class"))?,
                    irreducible: c.irreducible,
                    rational: c.rational,
                    smooth: c.smooth,
                })
            })
            .collect::<Result<Vec<_>, InputError>>()?;
        let lattice = Lattice::new(self.gram.clone()).map_err(|e| schema(".gram", e.to_string()))?;
        let mut pair = SurfacePair::new(lattice, canonical, components, self.chi, self.sigma, catalog)
            .map_err(|e| schema(".", e.to_string()))?;
        if let Some(name) = &self.name {
            pair = pair.with_name(name.clone());
        }
        if let Some(b) = self.height_bound {
            pair = pair.with_height_bound(b);
        }
        if let Some(r) = &self.reference {
            let h = class(r, ".reference".into())?;
            pair = pair.with_reference(h).map_err(|e| schema(".reference", e.to_string()))?;
        }
        Ok(pair)
    }
}

/// Parses and validates; validation warnings are returned alongside.
pub fn load_str(text: &str) -> Result<(SurfacePair, ValidationReport), InputError> {
    let pair = PairFile::from_json(text)?.to_pair()?;
    let report = validate(&pair);
    if !report.is_valid() {
        return Err(InputError::Validation(report));
    }
    Ok((pair, report))
}

/// Reads a file; a missing path that names a bundled example loads that.
pub fn load(path: &Path) -> Result<(SurfacePair, ValidationReport), InputError> {
    match std::fs::read_to_string(path) {
        Ok(text) => load_str(&text),
        Err(source) => match path.to_str().and_then(crate::bundled::get) {
            Some(text) if !path.exists() => load_str(text),
            _ => Err(InputError::Io { path: path.display().to_string(), source }),
        },
    }
}
