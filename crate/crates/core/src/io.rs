//! Versioned JSON problem files.
//!
//! Integers beyond the 53-bit range are written as decimal strings so the
//! files survive a round trip through JavaScript-style parsers; heights are
//! always rational strings such as `"-3/4"`.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::complex::Ambient;
use crate::critical::Origin;
use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticePolytope};
use crate::signs::SignDistribution;
use crate::triangulation::{HeightFunction, Triangulation};

pub const FORMAT: &str = "patchwork-problem/1";

const SAFE: i64 = (1 << 53) - 1;

/// An integer that serializes as a JSON number when it is exactly
/// representable as a double and as a decimal string otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JsonInt(pub i64);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.abs() <= SAFE {
            s.serialize_i64(self.0)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = JsonInt;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<JsonInt, E> {
                Ok(JsonInt(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<JsonInt, E> {
                i64::try_from(v).map(JsonInt).map_err(E::custom)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<JsonInt, E> {
                v.trim().parse().map(JsonInt).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

fn to_json(p: &LatticePoint) -> Vec<JsonInt> {
    p.0.iter().copied().map(JsonInt).collect()
}

fn from_json(p: &[JsonInt]) -> LatticePoint {
    LatticePoint(p.iter().map(|x| x.0).collect())
}

pub fn rational_to_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("bad rational {s:?}"));
    let (num, den) = s.trim().split_once('/').unwrap_or((s.trim(), "1"));
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = den.trim().parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// The on-disk document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
    pub polytope: Vec<Vec<JsonInt>>,
    pub points: Vec<Vec<JsonInt>>,
    pub cells: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heights: Option<Vec<String>>,
    pub signs: Vec<String>,
    pub ambient: Ambient,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<Vec<JsonInt>>,
}

/// A problem after validation: everything the pipeline needs.
#[derive(Debug, Clone)]
pub struct Problem {
    pub construction: Option<String>,
    pub triangulation: Triangulation,
    pub heights: Option<HeightFunction>,
    pub signs: SignDistribution,
    pub ambient: Ambient,
    pub origin: Option<Origin>,
}

impl Problem {
    pub fn to_file(&self) -> ProblemFile {
        let t = &self.triangulation;
        ProblemFile {
            format: FORMAT.into(),
            construction: self.construction.clone(),
            polytope: t.polytope().vertices().iter().map(to_json).collect(),
            points: t.points().iter().map(to_json).collect(),
            cells: t.cells().to_vec(),
            heights: self.heights.as_ref().map(|h| h.0.iter().map(rational_to_string).collect()),
            signs: self.signs.to_strings(),
            ambient: self.ambient.clone(),
            origin: self.origin.as_ref().map(|o| to_json(&o.0)),
        }
    }

    pub fn from_file(file: ProblemFile) -> Result<Self> {
        if file.format != FORMAT {
            return Err(Error::InvalidInput(format!("unsupported format {:?}, expected {FORMAT:?}", file.format)));
        }
        let polytope = LatticePolytope::new(file.polytope.iter().map(|p| from_json(p)).collect())?;
        let points: Vec<LatticePoint> = file.points.iter().map(|p| from_json(p)).collect();
        for cell in &file.cells {
            if let Some(&i) = cell.iter().find(|&&i| i >= points.len()) {
                return Err(Error::InvalidInput(format!("cell index {i} out of range ({} points)", points.len())));
            }
        }
        // the triangulation sorts its points, so carry per-point data along
        let order: Vec<LatticePoint> = points.clone();
        let triangulation = Triangulation::new(polytope, points, file.cells)?;
        let position = |k: usize| triangulation.point_index(&order[k]).expect("point kept by triangulation");
        let mut raw_signs = SignDistribution::from_strings(&file.signs)?.as_slice().to_vec();
        if raw_signs.len() != order.len() {
            return Err(Error::NonTotalSigns { expected: order.len(), found: raw_signs.len() });
        }
        let mut signs = vec![0i8; triangulation.points().len()];
        for (k, s) in raw_signs.drain(..).enumerate() {
            signs[position(k)] = s;
        }
        let signs = SignDistribution::new(signs)?;
        let heights = match file.heights {
            None => None,
            Some(hs) => {
                if hs.len() != order.len() {
                    return Err(Error::MissingHeight(hs.len().min(order.len())));
                }
                let mut out = vec![BigRational::from_integer(BigInt::from(0)); order.len()];
                for (k, h) in hs.iter().enumerate() {
                    out[position(k)] = parse_rational(h)?;
                }
                Some(HeightFunction(out))
            }
        };
        file.ambient.check(&triangulation)?;
        let origin = file.origin.map(|o| Origin(from_json(&o)));
        if let Some(o) = &origin {
            if o.0.dim() != triangulation.dim() {
                return Err(Error::DimensionMismatch { expected: triangulation.dim(), found: o.0.dim() });
            }
        }
        Ok(Problem { construction: file.construction, triangulation, heights, signs, ambient: file.ambient, origin })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("problem files always serialize") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ProblemFile = serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
        Self::from_file(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

impl From<crate::constructions::Construction> for Problem {
    fn from(c: crate::constructions::Construction) -> Self {
        Problem {
            construction: Some(c.spec.to_string()),
            triangulation: c.triangulation,
            heights: c.heights,
            signs: c.signs,
            ambient: c.ambient,
            origin: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::lemma56;

    #[test]
    fn big_integers_become_strings() {
        let v = vec![JsonInt(3), JsonInt(1 << 60), JsonInt(-(1 << 54))];
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, r#"[3,"1152921504606846976","-18014398509481984"]"#);
        let back: Vec<JsonInt> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn rationals_round_trip() {
        for s in ["0", "-7", "3/4", "-1/1024"] {
            assert_eq!(rational_to_string(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(rational_to_string(&parse_rational("6/8").unwrap()), "3/4");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn construction_round_trips() {
        let p: Problem = lemma56().unwrap().into();
        let text = p.to_json();
        let q = Problem::from_json(&text).unwrap();
        assert_eq!(q.to_json(), text);
        assert_eq!(q.signs, p.signs);
        assert_eq!(q.triangulation.cells(), p.triangulation.cells());
    }

    #[test]
    fn unsorted_points_keep_their_signs() {
        let text = r#"{"format":"patchwork-problem/1","polytope":[[0],[2]],"points":[[2],[0]],
            "cells":[[0,1]],"signs":["-","+"],"ambient":{"kind":"affine"}}"#;
        let p = Problem::from_json(text).unwrap();
        assert_eq!(p.triangulation.points()[0], LatticePoint(vec![0]));
        assert_eq!(p.signs.as_slice(), &[1, -1]);
    }

    #[test]
    fn schema_errors() {
        let ok = r#"{"format":"patchwork-problem/1","polytope":[[0],[2]],"points":[[0],[2]],
            "cells":[[0,1]],"signs":["+","-"],"ambient":{"kind":"affine"}}"#;
        assert!(Problem::from_json(ok).is_ok());
        assert!(Problem::from_json(&ok.replace("problem/1", "problem/9")).is_err());
        assert!(Problem::from_json(&ok.replace("[[0,1]]", "[[0,5]]")).is_err());
        assert!(Problem::from_json(&ok.replace(r#"["+","-"]"#, r#"["+"]"#)).is_err());
        assert!(Problem::from_json(&ok.replace(r#""-""#, r#""?""#)).is_err());
        assert!(Problem::from_json("{").is_err());
    }
}
