//! Sign distributions on triangulation vertices and their reflected copies.
//!
//! A reflection copy is a bitmask `eps`: bit `i` set means coordinate `i`
//! is negated. Composition of copies is XOR.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::triangulation::Triangulation;

/// One sign (+1 or -1) per vertex of a triangulation, in vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignDistribution(Vec<i8>);

impl SignDistribution {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if let Some(bad) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidInput(format!("sign {bad} is not +1 or -1")));
        }
        Ok(SignDistribution(signs))
    }

    /// Signs for `tri`'s vertices given by a function of the vertex.
    pub fn from_fn(tri: &Triangulation, f: impl Fn(&LatticePoint) -> i8) -> Result<Self> {
        Self::new(tri.points().iter().map(f).collect())
    }

    /// `+` iff the coordinate sum is even.
    pub fn checkerboard(vertices: &[LatticePoint]) -> Self {
        SignDistribution(vertices.iter().map(|v| if v.0.iter().sum::<i64>() % 2 == 0 { 1 } else { -1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, vertex: usize) -> i8 {
        self.0[vertex]
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn check_total(&self, tri: &Triangulation) -> Result<()> {
        if self.0.len() != tri.points().len() {
            return Err(Error::NonTotalSigns { expected: tri.points().len(), found: self.0.len() });
        }
        Ok(())
    }

    /// Sign of the vertex's reflection in copy `eps`.
    pub fn in_copy(&self, vertex: usize, point: &LatticePoint, eps: u32) -> i8 {
        extend_to_copy(self.0[vertex], point, eps)
    }

    /// `"+"`/`"-"` per vertex.
    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|&s| if s > 0 { "+".to_string() } else { "-".to_string() }).collect()
    }

    pub fn from_strings(items: &[String]) -> Result<Self> {
        items
            .iter()
            .map(|s| match s.as_str() {
                "+" => Ok(1),
                "-" | "\u{2212}" => Ok(-1),
                other => Err(Error::InvalidInput(format!("bad sign {other:?}"))),
            })
            .collect::<Result<Vec<i8>>>()
            .map(SignDistribution)
    }
}

impl Serialize for SignDistribution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SignDistribution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        SignDistribution::from_strings(&v).map_err(serde::de::Error::custom)
    }
}

/// Parity rule: the sign flips once per reflected coordinate that is odd.
pub fn extend_to_copy(sign: i8, point: &LatticePoint, eps: u32) -> i8 {
    let flips = point.0.iter().enumerate().filter(|&(i, &x)| eps >> i & 1 == 1 && x % 2 != 0).count();
    if flips % 2 == 0 {
        sign
    } else {
        -sign
    }
}

/// Both signs occur among the face's vertices in copy `eps`.
pub fn is_mixed(tri: &Triangulation, signs: &SignDistribution, face: &[usize], eps: u32) -> bool {
    let mut plus = false;
    let mut minus = false;
    for &v in face {
        if signs.in_copy(v, &tri.points()[v], eps) > 0 {
            plus = true;
        } else {
            minus = true;
        }
    }
    plus && minus
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> LatticePoint {
        LatticePoint(c.to_vec())
    }

    #[test]
    fn parity_rule() {
        assert_eq!(extend_to_copy(1, &p(&[1, 0]), 0), 1);
        assert_eq!(extend_to_copy(1, &p(&[1, 0]), 0b01), -1);
        assert_eq!(extend_to_copy(1, &p(&[1, 0]), 0b10), 1);
        for eps in 0..4 {
            assert_eq!(extend_to_copy(-1, &p(&[2, 4]), eps), -1);
        }
    }

    #[test]
    fn checkerboard_signs() {
        let s = SignDistribution::checkerboard(&[p(&[0, 0]), p(&[1, 0]), p(&[1, 1])]);
        assert_eq!(s.as_slice(), &[1, -1, 1]);
        assert_eq!(s.to_strings(), vec!["+", "-", "+"]);
        let back: SignDistribution = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
        assert!(SignDistribution::new(vec![0]).is_err());
    }

    #[test]
    fn mixedness() {
        use crate::lattice::LatticePolytope;
        let tri = Triangulation::new(
            LatticePolytope::standard_simplex(2, 2),
            vec![p(&[0, 0]), p(&[2, 0]), p(&[0, 2])],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        let all_plus = SignDistribution::new(vec![1, 1, 1]).unwrap();
        assert!(!is_mixed(&tri, &all_plus, &[0, 1, 2], 0));
        let s = SignDistribution::new(vec![1, 1, -1]).unwrap();
        assert!(is_mixed(&tri, &s, &[0, 1], 0) == false);
        assert!(is_mixed(&tri, &s, &[1, 2], 0));
        // even vertices: same pattern in every copy
        for eps in 0..4 {
            for f in [vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]] {
                assert_eq!(is_mixed(&tri, &s, &f, eps), is_mixed(&tri, &s, &f, 0));
            }
        }
    }

    proptest! {
        #[test]
        fn copies_compose_by_xor(coords in proptest::collection::vec(0i64..7, 1..5), a in 0u32..16, b in 0u32..16, sign in prop_oneof![Just(1i8), Just(-1i8)]) {
            let pt = LatticePoint(coords);
            let mask = (1u32 << pt.dim()) - 1;
            let (a, b) = (a & mask, b & mask);
            prop_assert_eq!(extend_to_copy(extend_to_copy(sign, &pt, a), &pt, b), extend_to_copy(sign, &pt, a ^ b));
        }
    }
}
