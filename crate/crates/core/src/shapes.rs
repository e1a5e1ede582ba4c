//! Partitions with explicit length (negative parts allowed) and symmetric
//! coweights: the multiset of block exponents of a canonical block-diagonal
//! form, carried both as block data and as a padded partition of length m.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Weakly decreasing integer tuple with significant length (zeros count).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<i64>,
}

impl Partition {
    pub fn new(mut parts: Vec<i64>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// Accepts the parts as given; fails unless weakly decreasing.
    pub fn from_sorted(parts: Vec<i64>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Precondition(format!(
                "parts {:?} are not weakly decreasing",
                parts
            )));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[i64] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.parts.iter().sum()
    }

    /// Multiplicity of the value `v`.
    pub fn multiplicity(&self, v: i64) -> usize {
        self.parts.iter().filter(|&&p| p == v).count()
    }

    pub fn add_scalar(&self, k: i64) -> Self {
        Partition {
            parts: self.parts.iter().map(|p| p + k).collect(),
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

/// The symmetric coweight sigma of a double coset K\G/H: one part `a >= 2`
/// per two-dimensional block [[1,z],[0,z^a]], one `z` block per count_z,
/// one `1` block per count_one.
///
/// The padded view is a length-m partition: each big part contributes `a`
/// and a paired 0, each z block a 1, each 1 block a 0. The shape constraint
/// m_0 >= sum_{i>1} m_i holds automatically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymCoweight {
    /// Exponents of two-dimensional blocks, weakly decreasing, each >= 2.
    big: Vec<i64>,
    count_z: usize,
    count_one: usize,
}

impl SymCoweight {
    pub fn new(mut big: Vec<i64>, count_z: usize, count_one: usize) -> Result<Self> {
        if big.iter().any(|&a| a < 2) {
            return Err(Error::Precondition(format!(
                "two-dimensional block exponents must be >= 2, got {:?}",
                big
            )));
        }
        big.sort_unstable_by(|a, b| b.cmp(a));
        Ok(SymCoweight {
            big,
            count_z,
            count_one,
        })
    }

    /// Parse a padded partition (length m) back into block data.
    pub fn from_padded(parts: &[i64]) -> Result<Self> {
        let mut sorted = parts.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        if sorted.iter().any(|&p| p < 0) {
            return Err(Error::Precondition(format!(
                "padded symmetric coweight cannot have negative parts: {:?}",
                parts
            )));
        }
        let big: Vec<i64> = sorted.iter().copied().filter(|&p| p > 1).collect();
        let count_z = sorted.iter().filter(|&&p| p == 1).count();
        let zeros = sorted.iter().filter(|&&p| p == 0).count();
        if zeros < big.len() {
            return Err(Error::Precondition(format!(
                "padded shape {:?} violates m_0 >= number of big parts",
                parts
            )));
        }
        let count_one = zeros - big.len();
        Ok(SymCoweight {
            big,
            count_z,
            count_one,
        })
    }

    pub fn big_parts(&self) -> &[i64] {
        &self.big
    }

    pub fn count_z(&self) -> usize {
        self.count_z
    }

    pub fn count_one(&self) -> usize {
        self.count_one
    }

    pub fn dim(&self) -> usize {
        self.count_one + self.count_z + 2 * self.big.len()
    }

    /// Length-m weakly decreasing padded view.
    pub fn padded(&self) -> Vec<i64> {
        let mut out = self.big.clone();
        out.extend(std::iter::repeat(1).take(self.count_z));
        out.extend(std::iter::repeat(0).take(self.count_one + self.big.len()));
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// Multiplicity m_v in the padded view.
    pub fn multiplicity(&self, v: i64) -> usize {
        match v {
            0 => self.count_one + self.big.len(),
            1 => self.count_z,
            _ => self.big.iter().filter(|&&a| a == v).count(),
        }
    }

    /// t_1 = m - 2 * (number of two-dimensional blocks): the size of the
    /// one-dimensional sector.
    pub fn t1(&self) -> usize {
        self.count_z + self.count_one
    }

    /// Valuation of the determinant of the canonical form.
    pub fn det_valuation(&self) -> i64 {
        self.big.iter().sum::<i64>() + self.count_z as i64
    }

    /// Parse "3,1,0,0" (padded) or "blocks=3;z=1;one=1" (block shorthand).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('=') {
            let mut big = Vec::new();
            let mut count_z = 0usize;
            let mut count_one = 0usize;
            for field in s.split(';') {
                let field = field.trim();
                if field.is_empty() {
                    continue;
                }
                let (key, value) = field
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("bad shape field '{}'", field)))?;
                match key.trim() {
                    "blocks" => {
                        for v in value.split(',').filter(|v| !v.trim().is_empty()) {
                            big.push(
                                v.trim()
                                    .parse::<i64>()
                                    .map_err(|e| Error::Parse(e.to_string()))?,
                            );
                        }
                    }
                    "z" => {
                        count_z = value
                            .trim()
                            .parse()
                            .map_err(|e: std::num::ParseIntError| Error::Parse(e.to_string()))?
                    }
                    "one" => {
                        count_one = value
                            .trim()
                            .parse()
                            .map_err(|e: std::num::ParseIntError| Error::Parse(e.to_string()))?
                    }
                    other => return Err(Error::Parse(format!("unknown shape key '{}'", other))),
                }
            }
            SymCoweight::new(big, count_z, count_one)
        } else {
            let parts: Vec<i64> = s
                .split(',')
                .filter(|v| !v.trim().is_empty())
                .map(|v| v.trim().parse::<i64>().map_err(|e| Error::Parse(e.to_string())))
                .collect::<Result<_>>()?;
            SymCoweight::from_padded(&parts)
        }
    }
}

impl fmt::Display for SymCoweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let padded: Vec<String> = self.padded().iter().map(|p| p.to_string()).collect();
        write!(f, "{}", padded.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padded_round_trip() {
        let s = SymCoweight::new(vec![3], 1, 1).unwrap();
        assert_eq!(s.dim(), 4);
        assert_eq!(s.padded(), vec![3, 1, 0, 0]);
        let back = SymCoweight::from_padded(&[3, 1, 0, 0]).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn shape_constraint_enforced() {
        // {2, 2, 0} has two big parts but only one zero
        assert!(SymCoweight::from_padded(&[2, 2, 0]).is_err());
        assert!(SymCoweight::from_padded(&[2, 2, 0, 0]).is_ok());
    }

    #[test]
    fn parse_both_forms() {
        let a = SymCoweight::parse("3,1,0,0").unwrap();
        let b = SymCoweight::parse("blocks=3;z=1;one=1").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn t1_matches_definition() {
        let s = SymCoweight::from_padded(&[3, 1, 0, 0]).unwrap();
        // t1 = n - 2 * (number of blocks with part > 1)
        assert_eq!(s.t1(), 4 - 2 * 1);
    }
}
