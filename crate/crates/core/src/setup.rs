//! Setup files: a valuation, a choice function or construction, and
//! campaign parameters, written in TOML.
//!
//! ```toml
//! [valuation]
//! variables = ["x", "y"]
//! subring = "polynomial"
//! lifting = "constants"
//!
//! [valuation.weights]
//! x = "(1,0)"
//! y = "(0,1)"
//!
//! [choice]
//! kind = "free"
//!
//! [choice.generators]
//! "(1,0)" = "x"
//! "(0,1)" = "y"
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use num::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{CounterexampleInput, SubgroupWithChoice};
use crate::graded::{ConstantLifter, FieldLifter, GradedAlgebra, ResidueLifter, Subring};
use crate::mpoly::{RationalFunction, VarNames};
use crate::ordgroup::{parse_rational, GroupElement};
use crate::twist::{ChoiceFunction, Domain, DomainKind};
use crate::valuation::MonomialValuation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetupError {
    #[error("cannot parse setup: {0}")]
    Toml(String),
    #[error("invalid setup: {0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> SetupError {
    SetupError::Invalid(msg.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetupFile {
    pub valuation: ValuationSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choice: Option<ChoiceSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extend: Option<ExtendSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub campaign: Option<CampaignSection>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValuationSection {
    pub variables: Vec<String>,
    #[serde(default = "default_subring")]
    pub subring: String,
    #[serde(default = "default_lifting")]
    pub lifting: String,
    pub weights: BTreeMap<String, String>,
}

fn default_subring() -> String {
    "polynomial".into()
}

fn default_lifting() -> String {
    "none".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChoiceSection {
    /// `table` or `free`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtendSection {
    pub base_generator: String,
    pub base_witness: String,
    #[serde(default)]
    pub step: Vec<StepSection>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepSection {
    pub gamma: String,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleSection {
    pub primes: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<u32>,
    #[serde(default)]
    pub enumerate: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<Vec<String>>,
    #[serde(default)]
    pub candidates: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

impl SetupFile {
    pub fn parse(text: &str) -> Result<Self, SetupError> {
        toml::from_str(text).map_err(|e| SetupError::Toml(e.to_string()))
    }

    pub fn print(&self) -> String {
        toml::to_string(self).expect("setup serializes")
    }
}

pub const DEFAULT_SEED: u64 = 0x5eed;
pub const DEFAULT_BOUND: u32 = 6;
pub const DEFAULT_SAMPLES: usize = 200;

/// A validated setup with every name resolved.
pub struct Setup {
    pub file: SetupFile,
    pub names: VarNames,
    pub valuation: Arc<MonomialValuation>,
    pub subring: Subring,
    pub lifter: Option<Box<dyn ResidueLifter>>,
    pub lifting: String,
    pub choice: Option<ChoiceFunction>,
    pub extend: Option<ExtendPlan>,
    pub counterexample: Option<CounterexamplePlan>,
    pub seed: u64,
    pub bound: u32,
    pub samples: usize,
}

pub struct ExtendPlan {
    pub base_generator: GroupElement,
    pub base_witness: RationalFunction,
    pub steps: Vec<(GroupElement, RationalFunction)>,
}

pub struct CounterexamplePlan {
    pub input: CounterexampleInput,
    pub names: VarNames,
    pub degree_bound: u32,
    pub enumerate: bool,
    pub constants: Vec<BigRational>,
}

fn parse_group(s: &str, dim: usize) -> Result<GroupElement, SetupError> {
    let g: GroupElement = s.parse().map_err(|e| invalid(format!("{e}")))?;
    if g.dim() != dim {
        return Err(invalid(format!("`{s}` has dimension {}, expected {dim}", g.dim())));
    }
    Ok(g)
}

fn parse_rf(names: &VarNames, s: &str) -> Result<RationalFunction, SetupError> {
    names.parse_rf(s).map_err(|e| invalid(format!("`{s}`: {e}")))
}

impl Setup {
    pub fn load(text: &str) -> Result<Self, SetupError> {
        Self::from_file(SetupFile::parse(text)?)
    }

    pub fn from_file(file: SetupFile) -> Result<Self, SetupError> {
        let val = &file.valuation;
        if val.variables.is_empty() {
            return Err(invalid("no variables"));
        }
        for (i, name) in val.variables.iter().enumerate() {
            let ok = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(invalid(format!("bad variable name `{name}`")));
            }
            if val.variables[..i].contains(name) {
                return Err(invalid(format!("variable `{name}` declared twice")));
            }
        }
        for key in val.weights.keys() {
            if !val.variables.contains(key) {
                return Err(invalid(format!("weight for undeclared variable `{key}`")));
            }
        }
        let mut weights = Vec::new();
        for name in &val.variables {
            let w = val.weights.get(name).ok_or_else(|| invalid(format!("variable `{name}` has no weight")))?;
            let g: GroupElement = w.parse().map_err(|e| invalid(format!("{e}")))?;
            weights.push(g);
        }
        let valuation = Arc::new(MonomialValuation::new(weights).map_err(|e| invalid(e.to_string()))?);
        let dim = valuation.dim();
        let names = VarNames::named(val.variables.clone());
        let subring = match val.subring.as_str() {
            "polynomial" => Subring::Polynomial,
            "field" => Subring::Field,
            other => return Err(invalid(format!("unknown subring `{other}`"))),
        };
        let lifter: Option<Box<dyn ResidueLifter>> = match val.lifting.as_str() {
            "constants" => Some(Box::new(ConstantLifter)),
            "field" => {
                if subring != Subring::Field {
                    return Err(invalid("field lifting needs subring = \"field\""));
                }
                Some(Box::new(FieldLifter))
            }
            "none" => None,
            other => return Err(invalid(format!("unknown lifting `{other}`"))),
        };

        let choice = match &file.choice {
            None => None,
            Some(c) => Some(Self::load_choice(c, &valuation, &names, dim)?),
        };
        let extend = match &file.extend {
            None => None,
            Some(e) => Some(ExtendPlan {
                base_generator: parse_group(&e.base_generator, dim)?,
                base_witness: parse_rf(&names, &e.base_witness)?,
                steps: e
                    .step
                    .iter()
                    .map(|s| Ok((parse_group(&s.gamma, dim)?, parse_rf(&names, &s.witness)?)))
                    .collect::<Result<_, SetupError>>()?,
            }),
        };
        let counterexample = match &file.counterexample {
            None => None,
            Some(c) => Some(Self::load_counterexample(c)?),
        };
        let campaign = file.campaign.clone().unwrap_or(CampaignSection { seed: None, bound: None, samples: None });
        Ok(Self {
            lifting: val.lifting.clone(),
            names,
            valuation,
            subring,
            lifter,
            choice,
            extend,
            counterexample,
            seed: campaign.seed.unwrap_or(DEFAULT_SEED),
            bound: campaign.bound.unwrap_or(DEFAULT_BOUND),
            samples: campaign.samples.unwrap_or(DEFAULT_SAMPLES),
            file,
        })
    }

    fn load_choice(
        c: &ChoiceSection,
        valuation: &Arc<MonomialValuation>,
        names: &VarNames,
        dim: usize,
    ) -> Result<ChoiceFunction, SetupError> {
        match c.kind.as_str() {
            "table" => {
                let table = c.table.as_ref().ok_or_else(|| invalid("table choice needs [choice.table]"))?;
                let mut entries = BTreeMap::new();
                for (k, f) in table {
                    let g = parse_group(k, dim)?;
                    if entries.insert(g.clone(), parse_rf(names, f)?).is_some() {
                        return Err(invalid(format!("degree {g} listed twice")));
                    }
                }
                let generators = match &c.domain {
                    Some(d) => d.iter().map(|s| parse_group(s, dim)).collect::<Result<_, _>>()?,
                    None => entries.keys().filter(|g| !g.is_zero()).cloned().collect(),
                };
                let kind = match c.domain_kind.as_deref() {
                    None | Some("semigroup") => DomainKind::Semigroup,
                    Some("group") => DomainKind::Group,
                    Some(other) => return Err(invalid(format!("unknown domain kind `{other}`"))),
                };
                ChoiceFunction::from_table(valuation.clone(), Domain { generators, kind }, entries)
                    .map_err(|e| invalid(e.to_string()))
            }
            "free" => {
                let gens = c.generators.as_ref().ok_or_else(|| invalid("free choice needs [choice.generators]"))?;
                let mut generators = Vec::new();
                let mut witnesses = Vec::new();
                for (k, f) in gens {
                    generators.push(parse_group(k, dim)?);
                    witnesses.push(parse_rf(names, f)?);
                }
                crate::constructions::free_choice(valuation.clone(), generators, witnesses)
                    .map_err(|e| invalid(e.to_string()))
            }
            other => Err(invalid(format!("unknown choice kind `{other}`"))),
        }
    }

    fn load_counterexample(c: &CounterexampleSection) -> Result<CounterexamplePlan, SetupError> {
        let names = if c.primes.is_empty() {
            VarNames::named(Vec::<String>::new())
        } else {
            crate::constructions::prime_valuation(&c.primes).map_err(|e| invalid(e.to_string()))?.1
        };
        let mut candidates = BTreeMap::new();
        for (k, f) in &c.candidates {
            candidates.insert(parse_group(k, 1)?, parse_rf(&names, f)?);
        }
        let constants = match &c.constants {
            None => crate::constructions::default_constants(),
            Some(list) => list
                .iter()
                .map(|s| match parse_rational(s) {
                    Some(q) if q != BigRational::from_integer(0.into()) => Ok(q),
                    _ => Err(invalid(format!("bad constant `{s}`"))),
                })
                .collect::<Result<_, _>>()?,
        };
        Ok(CounterexamplePlan {
            input: CounterexampleInput { primes: c.primes.clone(), candidates },
            names,
            degree_bound: c.degree_bound.unwrap_or(8),
            enumerate: c.enumerate,
            constants,
        })
    }

    pub fn graded(&self) -> GradedAlgebra {
        GradedAlgebra::new(self.valuation.clone(), self.subring)
    }

    /// The base pair of the extension plan, `⟨g⟩` with `ε(n g) = w^n`.
    pub fn extension_base(&self) -> Option<Result<SubgroupWithChoice, crate::constructions::ConstructionError>> {
        let plan = self.extend.as_ref()?;
        Some(SubgroupWithChoice::cyclic(
            self.valuation.clone(),
            plan.base_generator.clone(),
            plan.base_witness.clone(),
        ))
    }
}
