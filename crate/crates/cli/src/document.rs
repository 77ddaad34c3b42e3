//! The JSON distribution document: chart, symbols, frame, optional
//! splitting, point valuation and expectations.

use std::collections::BTreeMap;

use b3tower::poly::Q;
use b3tower::{Chart, ChartRef, Distribution, Scalar, Splitting, SymbolDecl, VectorField};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

/// Results a document claims for itself; commands compare against them.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub claims: Vec<String>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub coefficients: IndexMap<String, String>,
}

impl Expect {
    pub fn is_empty(&self) -> bool {
        *self == Expect::default()
    }
}

/// The wire form. Report fields are accepted and ignored, so a report can
/// be fed back as a document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDocument {
    pub chart: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub symbols: Vec<SymbolDecl>,
    pub frame: Vec<IndexMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splitting: Option<IndexMap<String, Vec<usize>>>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub point: IndexMap<String, String>,
    #[serde(default, skip_serializing_if = "Expect::is_empty")]
    pub expect: Expect,
    #[serde(default, skip_serializing)]
    pub version: Option<Value>,
    #[serde(default, skip_serializing)]
    pub command: Option<Value>,
    #[serde(default, skip_serializing)]
    pub results: Option<Value>,
    #[serde(default, skip_serializing)]
    pub status: Option<Value>,
}

/// Coordinate values and jet values of a rational point.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Valuation {
    pub coords: BTreeMap<String, Q>,
    pub jets: BTreeMap<String, Q>,
}

impl Valuation {
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty() && self.jets.is_empty()
    }

    pub fn to_literals(&self) -> IndexMap<String, String> {
        self.coords
            .iter()
            .chain(&self.jets)
            .map(|(k, v)| (k.clone(), b3tower::scalar::format_q(v)))
            .collect()
    }
}

/// A parsed and validated document.
#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub distribution: Distribution,
    pub splitting: Option<Splitting>,
    pub point: Valuation,
    pub expect: Expect,
}

impl Document {
    pub fn new(distribution: Distribution) -> Document {
        Document {
            distribution,
            splitting: None,
            point: Valuation::default(),
            expect: Expect::default(),
        }
    }

    pub fn with_splitting(splitting: Splitting) -> Document {
        Document {
            distribution: splitting.distribution.clone(),
            splitting: Some(splitting),
            point: Valuation::default(),
            expect: Expect::default(),
        }
    }

    pub fn chart(&self) -> &ChartRef {
        self.distribution.chart()
    }

    pub fn parse(src: &str) -> Result<Document, CliError> {
        let raw: RawDocument = serde_json::from_str(src).map_err(|e| {
            CliError::Input(format!("document line {} column {}: {e}", e.line(), e.column()))
        })?;
        Document::from_raw(&raw)
    }

    pub fn from_raw(raw: &RawDocument) -> Result<Document, CliError> {
        let chart = Chart::from_names(raw.chart.clone(), raw.symbols.clone())?;
        let frame = raw
            .frame
            .iter()
            .enumerate()
            .map(|(i, entry)| field(&chart, i, entry))
            .collect::<Result<Vec<_>, _>>()?;
        let distribution = Distribution::new(&chart, frame)?;
        let splitting = match &raw.splitting {
            None => None,
            Some(parts) => {
                let parts = parts.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
                Some(Splitting::new(distribution.clone(), parts)?)
            }
        };
        let point = parse_valuation(&chart, &raw.point)?;
        Ok(Document {
            distribution,
            splitting,
            point,
            expect: raw.expect.clone(),
        })
    }

    pub fn to_raw(&self) -> RawDocument {
        let chart = self.chart();
        RawDocument {
            chart: chart.coords().to_vec(),
            symbols: chart.symbols().to_vec(),
            frame: self
                .distribution
                .frame()
                .iter()
                .map(|v| v.to_literal_pairs().into_iter().collect())
                .collect(),
            splitting: self
                .splitting
                .as_ref()
                .map(|s| s.parts.iter().cloned().collect()),
            point: self.point.to_literals(),
            expect: self.expect.clone(),
            version: None,
            command: None,
            results: None,
            status: None,
        }
    }

    /// Canonical JSON text of the document.
    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("document serializes")
    }
}

fn field(chart: &ChartRef, i: usize, entry: &IndexMap<String, String>) -> Result<VectorField, CliError> {
    let mut coeffs = vec![Scalar::zero(); chart.dim()];
    for (coord, lit) in entry {
        let k = chart
            .index(coord)
            .map_err(|e| CliError::Input(format!("frame[{i}]: {e}")))?;
        coeffs[k] = literal(chart, lit).map_err(|e| CliError::Input(format!("frame[{i}].{coord}: {e}")))?;
    }
    Ok(VectorField::from_coeffs(chart, coeffs))
}

fn literal(chart: &ChartRef, lit: &str) -> Result<Scalar, b3tower::Error> {
    let s = Scalar::parse(lit)?;
    chart.check_scalar(&s, false)?;
    Ok(s)
}

fn rational(key: &str, lit: &str) -> Result<Q, CliError> {
    Scalar::parse(lit)
        .ok()
        .and_then(|s| s.as_constant())
        .ok_or_else(|| CliError::Input(format!("value of `{key}` is not a rational number: {lit}")))
}

/// Keys are chart coordinates or jet literals such as `m'(x6)`.
pub fn parse_valuation(chart: &ChartRef, map: &IndexMap<String, String>) -> Result<Valuation, CliError> {
    let mut out = Valuation::default();
    for (key, lit) in map {
        let v = rational(key, lit)?;
        if chart.contains(key) {
            out.coords.insert(key.clone(), v);
            continue;
        }
        let jet = literal(chart, key).map_err(|e| CliError::Input(format!("point key `{key}`: {e}")))?;
        match jet.vars().as_slice() {
            [var] if Scalar::var(var.clone()) == jet => {
                out.jets.insert(var.to_string(), v);
            }
            _ => return Err(CliError::Input(format!("point key `{key}` is not a coordinate or jet"))),
        }
    }
    Ok(out)
}

/// Parses `x1=1,x2=3/2,m'(x6)=2`.
pub fn parse_assignments(chart: &ChartRef, src: &str) -> Result<Valuation, CliError> {
    let mut map = IndexMap::new();
    for part in src.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("expected name=value, found `{part}`")))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    parse_valuation(chart, &map)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{
        "chart": ["x1", "x2", "x3", "x4", "x5", "x6"],
        "symbols": [{"name": "m", "arg": "x6"}],
        "frame": [
            {"x1": "1", "x4": "x3", "x6": "x2 + m(x6)"},
            {"x2": "1", "x5": "x3"},
            {"x3": "1"}
        ],
        "point": {"x6": "1/2", "m'(x6)": "3"}
    }"#;

    #[test]
    fn parse_emit_parse_is_parse() {
        let d = Document::parse(EXAMPLE).unwrap();
        let again = Document::parse(&d.emit()).unwrap();
        assert_eq!(d, again);
        assert_eq!(d.emit(), again.emit());
        assert_eq!(d.point.jets.len(), 1);
    }

    #[test]
    fn json_errors_carry_positions() {
        let err = Document::parse("{\n  \"chart\": [\"a\",\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn bad_literals_name_the_entry() {
        let src = r#"{"chart": ["a", "b"], "frame": [{"a": "1 +* b"}]}"#;
        let err = Document::parse(src).unwrap_err().to_string();
        assert!(err.contains("frame[0].a"), "{err}");
    }

    #[test]
    fn dependent_frames_are_rejected() {
        let src = r#"{"chart": ["a", "b"], "frame": [{"a": "b"}, {"a": "b^2"}]}"#;
        assert_eq!(Document::parse(src).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn assignments_accept_jets() {
        let d = Document::parse(EXAMPLE).unwrap();
        let v = parse_assignments(d.chart(), "x1=1, m(x6)=-2/3").unwrap();
        assert_eq!(v.coords.len(), 1);
        assert_eq!(v.jets.len(), 1);
        assert!(parse_assignments(d.chart(), "q=1").is_err());
    }
}
