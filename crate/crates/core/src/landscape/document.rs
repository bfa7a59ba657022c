use super::{Controls, Domain, Family, LandscapeError, PotentialField, ProtocolSchedule, Result, Segment};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// JSON form of a driven potential:
///
/// ```json
/// {"family": "double_well",
///  "params": {"a": 1.0, "b": 2.0, "f": 0.0},
///  "domain": [-3.0, 3.0],
///  "schedule": [{"duration": 5.0, "targets": {"b": 0.0}, "ramp": "raised_cosine"}]}
/// ```
///
/// `domain` is optional; every parameter of the family must be present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolDocument {
    pub family: Family,
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<[f64; 2]>,
    #[serde(default)]
    pub schedule: Vec<Segment>,
}

impl ProtocolDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| LandscapeError::Document(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn controls(&self) -> Result<Controls> {
        let names = self.family.param_names();
        for key in self.params.keys() {
            self.family.param_index(key)?;
        }
        let values: Vec<f64> = names
            .iter()
            .map(|n| {
                self.params.get(*n).copied().ok_or_else(|| LandscapeError::Document(format!("missing parameter `{n}`")))
            })
            .collect::<Result<_>>()?;
        let c = match self.family {
            Family::DoubleWell => Controls::double_well(values[0], values[1], values[2]),
            Family::PartitionedBox => {
                Controls::partitioned_box(values[0], values[1], values[2], values[3], values[4], values[5])
            }
            Family::Staircase => Controls::staircase(values[0], values[1], values[2], values[3], values[4], values[5]),
            Family::HarmonicWell => Controls::harmonic(values[0], values[1]),
        };
        c.validate()?;
        Ok(c)
    }

    /// Builds the field and its schedule. An empty schedule yields a
    /// zero-length protocol.
    pub fn build(&self) -> Result<(PotentialField, ProtocolSchedule)> {
        let controls = self.controls()?;
        let domain = match self.domain {
            Some([lo, hi]) => Domain::new(lo, hi)?,
            None => default_domain(&controls),
        };
        let field = PotentialField::new(controls, domain)?;
        let schedule = ProtocolSchedule::new(controls, self.schedule.clone())?;
        Ok((field, schedule))
    }

    pub fn from_parts(field: &PotentialField, schedule: &ProtocolSchedule) -> Self {
        let c = field.controls();
        let params = c.family().param_names().iter().zip(c.values()).map(|(n, v)| (n.to_string(), *v)).collect();
        let d = field.domain();
        Self { family: c.family(), params, domain: Some([d.lo, d.hi]), schedule: schedule.segments().to_vec() }
    }
}

/// A domain wide enough that the potential confines the particle well
/// inside it at the initial controls.
pub fn default_domain(c: &Controls) -> Domain {
    let v = c.values();
    let (lo, hi) = match c.family() {
        Family::DoubleWell => {
            let (a, b) = (v[0], v[1]);
            let well = (b / (2.0 * a)).sqrt();
            let quartic = (20.0 / a).powf(0.25);
            let half = 1.5 * well.max(quartic);
            (-half, half)
        }
        Family::PartitionedBox => (-0.1 * v[0], 1.1 * v[0]),
        Family::Staircase => (-3.0 * v[1], 40.0 * v[1]),
        Family::HarmonicWell => {
            let half = if v[0] > 0.0 { 10.0 / v[0].sqrt() } else { 10.0 };
            (v[1] - half, v[1] + half)
        }
    };
    Domain { lo, hi }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r#"{
        "family": "double_well",
        "params": {"a": 1.0, "b": 2.0, "f": 0.0},
        "domain": [-2.5, 2.5],
        "schedule": [
            {"duration": 2.0, "targets": {"b": 0.0}, "ramp": "raised_cosine"},
            {"duration": 1.0, "ramp": "hold"},
            {"duration": 2.0, "targets": {"b": 2.0, "f": -1.0}, "ramp": "linear"},
            {"duration": 0.5, "targets": {"f": 0.0}, "ramp": "jump"}
        ]
    }"#;

    #[test]
    fn parses_and_builds() {
        let doc = ProtocolDocument::from_json(DOC).unwrap();
        let (field, schedule) = doc.build().unwrap();
        assert_eq!(field.family(), Family::DoubleWell);
        assert_eq!(field.domain(), Domain { lo: -2.5, hi: 2.5 });
        assert_eq!(schedule.total_duration(), 5.5);
        let mid = schedule.controls_at(4.0).unwrap();
        assert!((mid.by_name("f").unwrap() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn ramp_defaults_to_raised_cosine() {
        let text = r#"{"family":"harmonic_well","params":{"k":1,"c":0},
            "schedule":[{"duration":1,"targets":{"c":1}}]}"#;
        let doc = ProtocolDocument::from_json(text).unwrap();
        assert_eq!(doc.schedule[0].ramp, super::super::Ramp::RaisedCosine);
        let (field, _) = doc.build().unwrap();
        assert!(field.domain().contains(9.0));
    }

    #[test]
    fn rejects_missing_and_unknown_parameters() {
        let missing = r#"{"family":"double_well","params":{"a":1,"b":2}}"#;
        assert!(ProtocolDocument::from_json(missing).unwrap().build().is_err());
        let unknown = r#"{"family":"double_well","params":{"a":1,"b":2,"f":0,"zz":1}}"#;
        assert!(ProtocolDocument::from_json(unknown).unwrap().build().is_err());
        let bad_family = r#"{"family":"triple_well","params":{}}"#;
        assert!(ProtocolDocument::from_json(bad_family).is_err());
    }

    #[test]
    fn round_trips_through_parts() {
        let doc = ProtocolDocument::from_json(DOC).unwrap();
        let (field, schedule) = doc.build().unwrap();
        let again = ProtocolDocument::from_parts(&field, &schedule);
        assert_eq!(again, doc);
    }
}
