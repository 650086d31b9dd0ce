//! JSON file formats. Every rational is a string (`"p/q"`, an integer, or
//! `"inf"` where infinity is allowed) so values survive serialization
//! exactly.

use std::collections::BTreeSet;
use std::fmt;

use mixsolve_core::caratheodory::Decomposition;
use mixsolve_core::cmdp::Mdp;
use mixsolve_core::instance::parse_rational;
use mixsolve_core::pareto_face::{Certificate, Hyperplane};
use mixsolve_core::{
    Branch, ExtReal, Instance, Mixture, PerfVec, Rational, Solution, SolveOutcome,
};
use num_traits::{One, Zero};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::CliError;

/// A rational stored as a JSON string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rat(pub Rational);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s)
            .map(Rat)
            .map_err(|_| de::Error::custom(format!("invalid rational `{s}`")))
    }
}

/// A rational or `"inf"` stored as a JSON string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ext(pub ExtReal);

impl Serialize for Ext {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Ext {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<ExtReal>()
            .map(Ext)
            .map_err(|_| de::Error::custom(format!("invalid rational `{s}`")))
    }
}

fn rats(v: &[Rational]) -> Vec<Rat> {
    v.iter().cloned().map(Rat).collect()
}

fn unrat(v: &[Rat]) -> Vec<Rational> {
    v.iter().map(|r| r.0.clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomFile {
    pub w: Vec<Ext>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(rename = "J")]
    pub j: usize,
    pub d: Vec<Rat>,
    pub atoms: Vec<AtomFile>,
}

impl InstanceFile {
    pub fn from_instance(instance: &Instance) -> Self {
        InstanceFile {
            j: instance.constraints(),
            d: rats(instance.bounds()),
            atoms: instance
                .atoms()
                .iter()
                .map(|a| AtomFile {
                    w: a.w.0.iter().cloned().map(Ext).collect(),
                })
                .collect(),
        }
    }

    pub fn to_instance(&self) -> Result<Instance, CliError> {
        if self.d.len() != self.j {
            return Err(CliError::Invalid(format!(
                "J = {} but d has {} entries",
                self.j,
                self.d.len()
            )));
        }
        if let Some(i) = self.atoms.iter().position(|a| a.w.len() != self.j + 1) {
            return Err(CliError::Invalid(format!(
                "atom {i} has {} coordinates, expected J+1 = {}",
                self.atoms[i].w.len(),
                self.j + 1
            )));
        }
        let atoms = self
            .atoms
            .iter()
            .map(|a| PerfVec(a.w.iter().map(|e| e.0.clone()).collect()))
            .collect();
        Ok(Instance::new(atoms, unrat(&self.d))?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightFile {
    pub atom: usize,
    pub weight: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneFile {
    pub b: Vec<Rat>,
    pub beta: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub w_star: Vec<Rat>,
    pub planes: Vec<PlaneFile>,
    pub active: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionFile {
    pub point: Vec<Rat>,
    pub parts: Vec<WeightFile>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Optimal,
    Inconsistent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Ext>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mixture: Vec<WeightFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced_value: Option<Rat>,
}

fn weights(parts: &[(usize, Rational)]) -> Vec<WeightFile> {
    parts
        .iter()
        .map(|(atom, w)| WeightFile {
            atom: *atom,
            weight: Rat(w.clone()),
        })
        .collect()
}

fn unweights(parts: &[WeightFile]) -> Vec<(usize, Rational)> {
    parts.iter().map(|p| (p.atom, p.weight.0.clone())).collect()
}

impl SolutionFile {
    pub fn from_outcome(outcome: &SolveOutcome) -> Self {
        let SolveOutcome::Solved(s) = outcome else {
            return SolutionFile {
                status: Status::Inconsistent,
                value: None,
                mixture: Vec::new(),
                branch: None,
                certificate: None,
                decomposition: None,
                reduced_value: None,
            };
        };
        SolutionFile {
            status: Status::Optimal,
            value: Some(Ext(s.value.clone())),
            mixture: weights(s.mixture.support()),
            branch: Some(s.branch.as_str().to_string()),
            certificate: s.certificate.as_ref().map(|c| CertificateFile {
                w_star: rats(&c.w_star),
                planes: c
                    .planes
                    .iter()
                    .map(|p| PlaneFile {
                        b: rats(&p.b),
                        beta: Rat(p.beta.clone()),
                    })
                    .collect(),
                active: c.active.iter().copied().collect(),
            }),
            decomposition: s.decomposition.as_ref().map(|d| DecompositionFile {
                point: rats(&d.point),
                parts: weights(&d.parts),
            }),
            reduced_value: s.reduced_value.clone().map(Rat),
        }
    }

    /// Sum of the listed mixture weights.
    pub fn weight_sum(&self) -> Rational {
        self.mixture
            .iter()
            .map(|w| &w.weight.0)
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn weights_sum_to_one(&self) -> bool {
        self.weight_sum() == Rational::one()
    }

    /// The solution this file describes. Fails on malformed mixtures or
    /// branch names, and on an optimal status with no value.
    pub fn to_outcome(&self) -> Result<SolveOutcome, CliError> {
        if self.status == Status::Inconsistent {
            return Ok(SolveOutcome::Inconsistent);
        }
        let value = self
            .value
            .as_ref()
            .ok_or_else(|| CliError::Invalid("optimal solution without a value".into()))?
            .0
            .clone();
        let branch_name = self
            .branch
            .as_deref()
            .ok_or_else(|| CliError::Invalid("optimal solution without a branch".into()))?;
        let branch = Branch::parse(branch_name)
            .ok_or_else(|| CliError::Invalid(format!("unknown branch `{branch_name}`")))?;
        let mixture = Mixture::new(unweights(&self.mixture))?;
        let certificate = self.certificate.as_ref().map(|c| Certificate {
            w_star: unrat(&c.w_star),
            planes: c
                .planes
                .iter()
                .map(|p| Hyperplane {
                    b: unrat(&p.b),
                    beta: p.beta.0.clone(),
                })
                .collect(),
            active: c.active.iter().copied().collect::<BTreeSet<usize>>(),
        });
        let decomposition = self.decomposition.as_ref().map(|d| Decomposition {
            parts: unweights(&d.parts),
            point: unrat(&d.point),
        });
        Ok(SolveOutcome::Solved(Solution {
            mixture,
            value,
            branch,
            certificate,
            decomposition,
            reduced_value: self.reduced_value.as_ref().map(|r| r.0.clone()),
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MdpFile {
    pub states: usize,
    pub actions: Vec<usize>,
    #[serde(rename = "P")]
    pub p: Vec<Vec<Vec<Rat>>>,
    pub costs: Vec<Vec<Vec<Rat>>>,
    pub gamma: Rat,
    pub initial: Vec<Rat>,
}

impl MdpFile {
    pub fn from_mdp(mdp: &Mdp) -> Self {
        let nest = |t: &Vec<Vec<Rational>>| t.iter().map(|row| rats(row)).collect();
        MdpFile {
            states: mdp.states(),
            actions: mdp.actions.clone(),
            p: mdp.transition.iter().map(nest).collect(),
            costs: mdp.costs.iter().map(nest).collect(),
            gamma: Rat(mdp.gamma.clone()),
            initial: rats(&mdp.initial),
        }
    }

    pub fn to_mdp(&self) -> Result<Mdp, CliError> {
        if self.actions.len() != self.states {
            return Err(CliError::Invalid(format!(
                "states = {} but actions lists {} states",
                self.states,
                self.actions.len()
            )));
        }
        let nest = |t: &Vec<Vec<Rat>>| t.iter().map(|row| unrat(row)).collect();
        Ok(Mdp::new(
            self.actions.clone(),
            self.p.iter().map(nest).collect(),
            self.costs.iter().map(nest).collect(),
            self.gamma.0.clone(),
            unrat(&self.initial),
        )?)
    }
}

/// Parse JSON, keeping serde's line and column in the message.
pub fn from_json<T: for<'de> Deserialize<'de>>(what: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        what: what.to_string(),
        message: e.to_string(),
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file types always serialize");
    s.push('\n');
    s
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Inconsistent => "inconsistent",
        })
    }
}
