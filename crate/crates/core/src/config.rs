//! Group presentations and splittings read from JSON files.
//!
//! ```json
//! {
//!   "name": "Z2HNN",
//!   "generators": ["a", "t"],
//!   "strategy": {"kind": "free-product", "orders": [2, 0]},
//!   "ends": "many",
//!   "splitting": {
//!     "kind": "hnn",
//!     "base": {"generators": ["a"], "strategy": {"kind": "free-product", "orders": [2]}, "ends": "many"},
//!     "letters": [{"base": 0}, "stable"],
//!     "a": ["1"], "b": ["1"]
//!   }
//! }
//! ```

use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{builtin_group, AbelianWp, BaumslagSolitarWp, BuiltinGroup, Ends, FreeProductWp, GroupOracle, Word, WordCertificate, WordProblem};
use crate::stallings::{builtin_splitting, AmalgamData, AmalgamLetter, HnnData, HnnLetter, Splitting};

/// One of the shipped word-problem strategies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WpStrategy {
    Abelian {
        rank: usize,
    },
    /// Free product of cyclic groups; order 0 is infinite.
    FreeProduct {
        orders: Vec<u32>,
    },
    BaumslagSolitar,
}

impl WpStrategy {
    fn build(&self) -> Arc<dyn WordProblem> {
        match self {
            WpStrategy::Abelian { rank } => Arc::new(AbelianWp { rank: *rank }),
            WpStrategy::FreeProduct { orders } => Arc::new(FreeProductWp { orders: orders.clone() }),
            WpStrategy::BaumslagSolitar => Arc::new(BaumslagSolitarWp),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateConfig {
    pub separator: Vec<String>,
    pub side_a: Vec<String>,
    pub side_b: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SplittingConfig {
    Hnn {
        base: Box<GroupConfig>,
        letters: Vec<HnnLetter>,
        a: Vec<String>,
        b: Vec<String>,
    },
    Amalgam {
        left: Box<GroupConfig>,
        right: Box<GroupConfig>,
        letters: Vec<AmalgamLetter>,
        a: Vec<String>,
        b: Vec<String>,
        /// Left and right words whose product generates the infinite cyclic
        /// subgroup.
        designated: [String; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub generators: Vec<String>,
    pub strategy: WpStrategy,
    pub ends: Ends,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splitting: Option<SplittingConfig>,
}

fn config_error(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

fn words(g: &GroupOracle, texts: &[String]) -> Result<Vec<Word>> {
    texts.iter().map(|t| g.parse_word(t)).collect()
}

impl GroupConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn group(&self) -> Result<GroupOracle> {
        let wp = self.strategy.build();
        let name = self.name.clone().unwrap_or_else(|| "custom".into());
        let bare = GroupOracle::new(name.clone(), self.generators.clone(), wp.clone(), Ends::One, None).map_err(config_error)?;
        let certificate = match &self.certificate {
            None => None,
            Some(c) => Some(WordCertificate {
                separator: words(&bare, &c.separator).map_err(config_error)?,
                side_a: words(&bare, &c.side_a).map_err(config_error)?,
                side_b: words(&bare, &c.side_b).map_err(config_error)?,
            }),
        };
        GroupOracle::new(name, self.generators.clone(), wp, self.ends, certificate).map_err(config_error)
    }

    pub fn splitting(&self) -> Result<Option<Splitting>> {
        let Some(s) = &self.splitting else { return Ok(None) };
        let group = self.group()?;
        let split = match s {
            SplittingConfig::Hnn { base, letters, a, b } => {
                let base = base.group()?;
                let (a, b) = (words(&base, a)?, words(&base, b)?);
                Splitting::Hnn(HnnData::new(group, base, letters.clone(), a, b)?)
            }
            SplittingConfig::Amalgam { left, right, letters, a, b, designated } => {
                let (left, right) = (left.group()?, right.group()?);
                let (a, b) = (words(&left, a)?, words(&right, b)?);
                let designated = (left.parse_word(&designated[0])?, right.parse_word(&designated[1])?);
                Splitting::Amalgam(AmalgamData::new(group, left, right, letters.clone(), a, b, designated)?)
            }
        };
        Ok(Some(split))
    }
}

/// A group with its splitting, when it has more than two ends and ships one.
#[derive(Debug, Clone)]
pub struct LoadedGroup {
    pub group: GroupOracle,
    pub splitting: Option<Splitting>,
}

/// A built-in name, or a path to a JSON [`GroupConfig`].
pub fn load_group(source: &str) -> Result<LoadedGroup> {
    if let Ok(name) = BuiltinGroup::from_str(source) {
        let group = builtin_group(name)?;
        let splitting = match group.declared_ends() {
            Ends::Many => builtin_splitting(name).ok(),
            _ => None,
        };
        return Ok(LoadedGroup { group, splitting });
    }
    let path = Path::new(source);
    if !path.is_file() {
        return Err(Error::Config(format!("unknown group {source:?}")));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{source}: {e}")))?;
    let config = GroupConfig::from_json(&text)?;
    let splitting = config.splitting().map_err(config_error)?;
    Ok(LoadedGroup { group: config.group()?, splitting })
}
