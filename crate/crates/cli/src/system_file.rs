use std::fs;
use std::path::Path;

use pulsekit_core::{ControlSystem, DiagonalControl, SquareMatrix};
use serde::{Deserialize, Serialize};

/// JSON document describing a system:
///
/// ```json
/// {"name": "demo", "time_unit": "days", "A": [[-2, 1], [1, 1]], "D": [0.5, 0.25]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub time_unit: String,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "D")]
    pub d: Vec<f64>,
}

impl SystemFile {
    pub fn from_system(name: Option<&str>, sys: &ControlSystem) -> Self {
        Self {
            name: name.map(str::to_owned),
            time_unit: sys.time_unit().to_owned(),
            a: sys.a().to_rows(),
            d: sys.d().entries().to_vec(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text)
            .map_err(|e| format!("line {}, column {}: {e}", e.line(), e.column()))
    }

    pub fn read(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("system file serializes")
    }

    pub fn into_system(self) -> Result<ControlSystem, String> {
        let a = SquareMatrix::from_rows(&self.a).map_err(|e| format!("A: {e}"))?;
        let d = DiagonalControl::new(self.d).map_err(|e| format!("D: {e}"))?;
        ControlSystem::new(a, d, self.time_unit).map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pulsekit_core::presets;

    #[test]
    fn parses_scientific_notation() {
        let f = SystemFile::parse(
            r#"{"time_unit": "days", "A": [[-2.8e-3, 1.3E-8], [5e3, -0.016]], "D": [0.62875, 1]}"#,
        )
        .unwrap();
        assert_eq!(f.a[0][1], 1.3e-8);
        assert_eq!(f.a[1][0], 5000.0);
        assert!(f.name.is_none());
        assert!(f.into_system().unwrap().is_symmetrizable());
    }

    #[test]
    fn parse_errors_carry_position() {
        let err =
            SystemFile::parse("{\n  \"time_unit\": \"days\",\n  \"A\": [[1, 2],\n}").unwrap_err();
        assert!(err.starts_with("line 4, column"), "{err}");
        let err =
            SystemFile::parse(r#"{"time_unit": "t", "A": [[1]], "D": [1], "B": 2}"#).unwrap_err();
        assert!(err.contains("unknown field"), "{err}");
    }

    #[test]
    fn invalid_systems() {
        let ragged = SystemFile {
            name: None,
            time_unit: "t".into(),
            a: vec![vec![1.0, 2.0], vec![3.0]],
            d: vec![1.0, 1.0],
        };
        assert!(ragged.into_system().is_err());
        let mismatch = SystemFile {
            name: None,
            time_unit: "t".into(),
            a: vec![vec![1.0]],
            d: vec![1.0, 1.0],
        };
        assert!(mismatch.into_system().is_err());
        let negative = SystemFile {
            name: None,
            time_unit: "t".into(),
            a: vec![vec![1.0]],
            d: vec![-1.0],
        };
        assert!(negative.into_system().is_err());
    }

    #[test]
    fn presets_round_trip_bit_identically() {
        for p in presets::all() {
            let file = SystemFile::from_system(Some(p.id), &p.system);
            let back = SystemFile::parse(&file.to_json()).unwrap();
            assert_eq!(back, file);
            let sys = back.into_system().unwrap();
            let bits =
                |m: &SquareMatrix| m.as_slice().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
            assert_eq!(bits(sys.a()), bits(p.system.a()), "{}", p.id);
            assert_eq!(sys.d().entries(), p.system.d().entries());
        }
    }
}
