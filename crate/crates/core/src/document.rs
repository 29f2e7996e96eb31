//! JSON documents for models, assessments and witnesses.
//!
//! Rationals are written as strings (`"3/8"`, `"-2"`); integers are also
//! accepted as JSON numbers on input. Worlds default to the `2^N` atoms over
//! the listed propositions; a world's `assign` may omit propositions, which
//! are then false.
//!
//! ```json
//! {"props": ["p", "q"],
//!  "worlds": [{"id": "w1", "assign": {"p": true}}, …],
//!  "measure": {"type": "probability", "values": ["1/2", …]}}
//! ```
//!
//! Measure types: `probability` (`values`, one per world), `credal`
//! (`measures`, a list of such lists), `mass` (`masses`, keyed by
//! comma-joined world ids), `possibility` (`values`), and `belief`
//! (`values` keyed by comma-joined world ids, one entry for every subset
//! including the empty one, `""`).

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::atoms::{AtomSpace, World, WorldSet};
use crate::coherence::Assessment;
use crate::error::{Error, Result};
use crate::measures::{validate_model, RawModel, UncertaintyModel};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::semantics::FuncAssignment;

/// A rational as written in a document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatText {
    Text(String),
    Int(i64),
}

impl RatText {
    pub fn parse(&self) -> Result<Rational> {
        match self {
            RatText::Text(s) => parse_rational(s),
            RatText::Int(n) => Ok(Rational::from_integer((*n).into())),
        }
    }
}

impl From<&Rational> for RatText {
    fn from(r: &Rational) -> Self {
        RatText::Text(format_rational(r))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldDoc {
    pub id: String,
    #[serde(default)]
    pub assign: BTreeMap<String, bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub props: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worlds: Option<Vec<WorldDoc>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum MeasureDoc {
    Probability { values: Vec<RatText> },
    Credal { measures: Vec<Vec<RatText>> },
    Mass { masses: BTreeMap<String, RatText> },
    Possibility { values: Vec<RatText> },
    Belief { values: BTreeMap<String, RatText> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub props: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worlds: Option<Vec<WorldDoc>>,
    pub measure: MeasureDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssessedDoc {
    pub gamble: String,
    pub lower: RatText,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssessmentDoc {
    pub model_space: SpaceDoc,
    pub assessments: Vec<AssessedDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuncAssignmentDoc {
    pub domain_size: usize,
    pub functions: BTreeMap<String, Vec<RatText>>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Document(e.to_string())
}

fn rationals(v: &[RatText]) -> Result<Vec<Rational>> {
    v.iter().map(RatText::parse).collect()
}

fn texts(v: &[Rational]) -> Vec<RatText> {
    v.iter().map(RatText::from).collect()
}

/// Builds the space described by `props` and optional explicit worlds.
pub fn build_space(props: &[String], worlds: Option<&[WorldDoc]>) -> Result<Arc<AtomSpace>> {
    let Some(worlds) = worlds else {
        return Ok(Arc::new(AtomSpace::full(props.iter().cloned())?));
    };
    let mut out = Vec::with_capacity(worlds.len());
    for w in worlds {
        if let Some(unknown) = w.assign.keys().find(|k| !props.contains(k)) {
            return Err(Error::UnknownProposition(unknown.clone()));
        }
        out.push(World {
            id: w.id.clone(),
            assign: props.iter().map(|p| w.assign.get(p).copied().unwrap_or(false)).collect(),
        });
    }
    Ok(Arc::new(AtomSpace::with_worlds(props.iter().cloned(), out)?))
}

pub fn space_doc(space: &AtomSpace) -> SpaceDoc {
    SpaceDoc { props: space.props().to_vec(), worlds: Some(world_docs(space)) }
}

fn world_docs(space: &AtomSpace) -> Vec<WorldDoc> {
    space
        .worlds()
        .iter()
        .map(|w| WorldDoc { id: w.id.clone(), assign: space.props().iter().cloned().zip(w.assign.iter().copied()).collect() })
        .collect()
}

/// Parses a comma-joined list of world ids (the empty string is `∅`).
pub fn parse_world_set(space: &AtomSpace, key: &str) -> Result<WorldSet> {
    let mut set = WorldSet::EMPTY;
    for id in key.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let i = space.world_index(id).ok_or_else(|| Error::Document(format!("unknown world id `{id}`")))?;
        set = set.with(i);
    }
    Ok(set)
}

pub fn world_set_key(space: &AtomSpace, set: WorldSet) -> String {
    set.iter().map(|i| space.worlds()[i].id.as_str()).collect::<Vec<_>>().join(",")
}

fn raw_measure(space: &AtomSpace, m: &MeasureDoc) -> Result<RawModel> {
    Ok(match m {
        MeasureDoc::Probability { values } => RawModel::Probability(rationals(values)?),
        MeasureDoc::Credal { measures } => RawModel::Credal(measures.iter().map(|r| rationals(r)).collect::<Result<_>>()?),
        MeasureDoc::Mass { masses } => {
            let mut entries = Vec::with_capacity(masses.len());
            for (k, v) in masses {
                entries.push((parse_world_set(space, k)?, v.parse()?));
            }
            RawModel::Mass(entries)
        }
        MeasureDoc::Possibility { values } => RawModel::Possibility(rationals(values)?),
        MeasureDoc::Belief { values } => {
            let n = space.len();
            if n > crate::measures::MAX_SET_FUNCTION_WORLDS {
                return Err(Error::TooManyWorlds(n));
            }
            let mut table: Vec<Option<Rational>> = vec![None; 1 << n];
            for (k, v) in values {
                let set = parse_world_set(space, k)?;
                if table[set.bits() as usize].replace(v.parse()?).is_some() {
                    return Err(Error::Document(format!("subset `{k}` is listed twice")));
                }
            }
            let missing = table.iter().position(Option::is_none);
            if let Some(mask) = missing {
                return Err(Error::Document(format!(
                    "belief values must cover every subset; `{}` is missing",
                    world_set_key(space, WorldSet::from_bits(mask as u64))
                )));
            }
            RawModel::SetFunction(table.into_iter().map(|x| x.expect("checked")).collect())
        }
    })
}

/// Reads and validates a model document.
pub fn parse_model(json: &str) -> Result<UncertaintyModel> {
    let doc: ModelDoc = serde_json::from_str(json).map_err(json_error)?;
    model_from_doc(&doc)
}

pub fn model_from_doc(doc: &ModelDoc) -> Result<UncertaintyModel> {
    let space = build_space(&doc.props, doc.worlds.as_deref())?;
    let raw = raw_measure(&space, &doc.measure)?;
    validate_model(&space, &raw).map_err(Error::InvalidModel)?;
    UncertaintyModel::from_raw(&space, raw)
}

/// The raw (unvalidated) content of a model document, with its space.
pub fn parse_raw_model(json: &str) -> Result<(Arc<AtomSpace>, RawModel)> {
    let doc: ModelDoc = serde_json::from_str(json).map_err(json_error)?;
    let space = build_space(&doc.props, doc.worlds.as_deref())?;
    let raw = raw_measure(&space, &doc.measure)?;
    Ok((space, raw))
}

pub fn model_doc(model: &UncertaintyModel) -> ModelDoc {
    let space = model.space();
    let measure = match model {
        UncertaintyModel::Probability(mu) => MeasureDoc::Probability { values: texts(mu.probs()) },
        UncertaintyModel::Credal(set) => MeasureDoc::Credal { measures: set.measures().iter().map(|m| texts(m.probs())).collect() },
        UncertaintyModel::Belief(m) => MeasureDoc::Mass {
            masses: m.masses().iter().map(|(u, x)| (world_set_key(space, *u), RatText::from(x))).collect(),
        },
        UncertaintyModel::Possibility(p) => MeasureDoc::Possibility { values: texts(p.values()) },
    };
    ModelDoc { props: space.props().to_vec(), worlds: Some(world_docs(space)), measure }
}

pub fn model_to_json(model: &UncertaintyModel) -> String {
    serde_json::to_string_pretty(&model_doc(model)).expect("documents serialize")
}

pub fn parse_space(json: &str) -> Result<Arc<AtomSpace>> {
    let doc: SpaceDoc = serde_json::from_str(json).map_err(json_error)?;
    build_space(&doc.props, doc.worlds.as_deref())
}

/// Reads an assessment document; gambles are in the text syntax
/// `c₁*φ₁ + c₂*φ₂ - …`.
pub fn parse_assessment(json: &str) -> Result<Assessment> {
    let doc: AssessmentDoc = serde_json::from_str(json).map_err(json_error)?;
    let space = build_space(&doc.model_space.props, doc.model_space.worlds.as_deref())?;
    let mut items = Vec::with_capacity(doc.assessments.len());
    for a in &doc.assessments {
        let g = crate::logic::parse_syntactic_gamble(&a.gamble)?;
        items.push((crate::atoms::realize_gamble(&g, &space)?, a.lower.parse()?));
    }
    Assessment::new(&space, items)
}

pub fn func_assignment_doc(a: &FuncAssignment) -> FuncAssignmentDoc {
    FuncAssignmentDoc {
        domain_size: a.domain_size,
        functions: a.values.iter().map(|(k, v)| (k.clone(), texts(v))).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Axiom;
    use crate::rational::rat;

    #[test]
    fn probability_round_trip() {
        let json = r#"{"props":["p","q"],"worlds":[
            {"id":"w1","assign":{"p":true,"q":false}},
            {"id":"w2","assign":{"p":true,"q":true}},
            {"id":"w3","assign":{}}],
            "measure":{"type":"probability","values":["1/3","2/3",0]}}"#;
        let m = parse_model(json).unwrap();
        let again = parse_model(&model_to_json(&m)).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn every_measure_type_parses() {
        let base = r#""props":["p"],"#;
        for measure in [
            r#"{"type":"credal","measures":[["1","0"],["1/2","1/2"]]}"#,
            r#"{"type":"mass","masses":{"w1,w2":"1/2","w2":"1/2"}}"#,
            r#"{"type":"possibility","values":["1","1/4"]}"#,
            r#"{"type":"belief","values":{"":"0","w1":"0","w2":"1/2","w1,w2":"1"}}"#,
        ] {
            let m = parse_model(&format!("{{{base}\"measure\":{measure}}}")).unwrap();
            assert_eq!(parse_model(&model_to_json(&m)).unwrap(), m);
        }
    }

    #[test]
    fn invalid_models_report_violations() {
        let json = r#"{"props":["p","q"],"worlds":[{"id":"a"},{"id":"b","assign":{"p":true}},{"id":"c","assign":{"q":true}}],
            "measure":{"type":"probability","values":["1/2","1/2","1/2"]}}"#;
        match parse_model(json) {
            Err(Error::InvalidModel(v)) => assert_eq!(v[0].axiom, Axiom::SumToOne),
            other => panic!("expected a violation, got {other:?}"),
        }
        let b3 = r#"{"props":["p","q"],"worlds":[{"id":"a"},{"id":"b","assign":{"p":true}},{"id":"c","assign":{"q":true}}],
            "measure":{"type":"belief","values":{"":"0","a":"0","b":"0","c":"0","a,b":"3/8","a,c":"3/8","b,c":"3/8","a,b,c":"1"}}}"#;
        assert!(matches!(parse_model(b3), Err(Error::InvalidModel(_))));
        assert!(matches!(parse_model(r#"{"props":["p"],"measure":{"type":"probability","values":["1/0","1"]}}"#), Err(Error::Document(_))));
        assert!(matches!(parse_model(r#"{"props":["p"],"measure":{"type":"mass","masses":{"zz":"1"}}}"#), Err(Error::Document(_))));
    }

    #[test]
    fn assessment_documents() {
        let json = r#"{"model_space":{"props":["p","q"]},"assessments":[{"gamble":"1*p + 2*(p&q)","lower":"3/8"}]}"#;
        let a = parse_assessment(json).unwrap();
        assert_eq!(a.items().len(), 1);
        assert_eq!(a.items()[0].1, rat(3, 8));
        assert_eq!(a.items()[0].0.values()[3], rat(3, 1));
    }
}
