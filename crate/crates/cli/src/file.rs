//! Presentation files.
//!
//! A presentation is a small TOML document:
//!
//! ```toml
//! generators = ["x"]        # ordered, smallest first
//! commutative = true
//! weight = "0"              # rational, "p/q" or an integer
//! order = "deglex"          # or "lex" (commutative only)
//! relations = ["x^2"]
//! ```

use std::path::Path;
use std::sync::Arc;

use diffgsb::diffmon::{GenTable, MonOrder, Variant};
use diffgsb::diffpoly::{DiffPoly, Ring, Scalar};
use diffgsb::gsb::Presentation;
use diffgsb::Error;
use serde::Deserialize;

use crate::parse::{is_identifier, parse_poly, DERIVATION};

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Weight {
    Int(i64),
    Text(String),
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum OrderName {
    #[default]
    Deglex,
    Lex,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub generators: Vec<String>,
    #[serde(default)]
    pub commutative: bool,
    #[serde(default = "zero_weight")]
    weight: Weight,
    #[serde(default)]
    pub order: OrderName,
    #[serde(default)]
    pub relations: Vec<String>,
}

fn zero_weight() -> Weight {
    Weight::Int(0)
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed presentation file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("invalid weight `{0}`")]
    Weight(String),
    #[error("the lexicographic order needs commutative = true")]
    LexNeedsCommutative,
    #[error("relation {index}: {source}")]
    Relation { index: usize, source: Error },
    #[error(transparent)]
    Core(#[from] Error),
}

/// A parsed presentation together with the order commands run under.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub presentation: Presentation,
    pub order: MonOrder,
    /// Relation sources as written in the file.
    pub sources: Vec<String>,
}

impl Loaded {
    pub fn ring(&self) -> &Arc<Ring> {
        self.presentation.ring()
    }
}

fn parse_weight(w: &Weight) -> Result<Scalar, LoadError> {
    match w {
        Weight::Int(n) => Ok(Scalar::from_integer((*n).into())),
        Weight::Text(s) => s
            .trim()
            .parse::<Scalar>()
            .map_err(|_| LoadError::Weight(s.clone())),
    }
}

impl PresentationFile {
    pub fn from_toml(src: &str) -> Result<Self, LoadError> {
        Ok(toml::from_str(src)?)
    }

    pub fn weight(&self) -> Result<Scalar, LoadError> {
        parse_weight(&self.weight)
    }

    pub fn load(&self) -> Result<Loaded, LoadError> {
        for g in &self.generators {
            if !is_identifier(g) || g == DERIVATION {
                return Err(Error::InvalidGenerator(g.clone()).into());
            }
        }
        let table = GenTable::new(self.generators.iter().cloned())?;
        let variant = if self.commutative {
            Variant::Commutative
        } else {
            Variant::NonCommutative
        };
        let order = match (self.order, variant) {
            (OrderName::Deglex, Variant::NonCommutative) => MonOrder::DegLexNc,
            (OrderName::Deglex, Variant::Commutative) => MonOrder::DegLexC,
            (OrderName::Lex, Variant::Commutative) => MonOrder::LexC,
            (OrderName::Lex, Variant::NonCommutative) => return Err(LoadError::LexNeedsCommutative),
        };
        let ring = Ring::new(table, variant, self.weight()?);
        let relations = self
            .relations
            .iter()
            .enumerate()
            .map(|(index, src)| {
                let f = parse_poly(&ring, src).map_err(|source| LoadError::Relation { index, source })?;
                if f.is_zero() {
                    return Err(LoadError::Relation {
                        index,
                        source: Error::ZeroPolynomial,
                    });
                }
                if f.max_order() > 0 {
                    return Err(LoadError::Relation {
                        index,
                        source: Error::PositiveOrder,
                    });
                }
                Ok(f)
            })
            .collect::<Result<Vec<DiffPoly>, _>>()?;
        Ok(Loaded {
            presentation: Presentation::new(&ring, relations)?,
            order,
            sources: self.relations.clone(),
        })
    }
}

pub fn load_path(path: &Path) -> Result<Loaded, LoadError> {
    let src = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    PresentationFile::from_toml(&src)?.load()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_a_commutative_presentation() {
        let f = PresentationFile::from_toml(
            "generators = [\"y\", \"x\"]\ncommutative = true\nweight = \"-3/2\"\nrelations = [\"x + y + 1\"]\n",
        )
        .unwrap();
        let l = f.load().unwrap();
        assert_eq!(l.order, MonOrder::DegLexC);
        assert_eq!(l.ring().weight(), &diffgsb::diffpoly::ratio(-3, 2));
        assert_eq!(l.presentation.relations().len(), 1);
    }

    #[test]
    fn integer_weights_are_accepted() {
        let f = PresentationFile::from_toml("generators = [\"x\"]\nweight = 2\n").unwrap();
        assert_eq!(f.weight().unwrap(), diffgsb::diffpoly::int(2));
    }

    #[test]
    fn rejects_bad_files() {
        let lex_nc = "generators = [\"x\"]\norder = \"lex\"\n";
        assert!(matches!(
            PresentationFile::from_toml(lex_nc).unwrap().load(),
            Err(LoadError::LexNeedsCommutative)
        ));
        let reserved = "generators = [\"d\"]\n";
        assert!(matches!(
            PresentationFile::from_toml(reserved).unwrap().load(),
            Err(LoadError::Core(Error::InvalidGenerator(_)))
        ));
        let derived = "generators = [\"x\"]\nrelations = [\"x^(1)\"]\n";
        assert!(matches!(
            PresentationFile::from_toml(derived).unwrap().load(),
            Err(LoadError::Relation { index: 0, source: Error::PositiveOrder })
        ));
        assert!(PresentationFile::from_toml("generators = [\"x\"]\nfoo = 1\n").is_err());
        let weight = "generators = [\"x\"]\nweight = \"half\"\n";
        assert!(matches!(
            PresentationFile::from_toml(weight).unwrap().load(),
            Err(LoadError::Weight(_))
        ));
    }
}
