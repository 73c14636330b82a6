//! Labels of harmonic d-tensors: a coupling chain of angular momenta, final
//! magnetic indices, and a per-slot variance pattern.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coupling::triangle_ok;
use crate::{Error, Result};

/// Whether a tensor slot transforms as a tangent vector or a covector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Vector,
    Covector,
}

impl Variance {
    pub fn opposite(self) -> Variance {
        match self {
            Variance::Vector => Variance::Covector,
            Variance::Covector => Variance::Vector,
        }
    }
}

/// Signature `(l0 | l1..lk; m, n)` with one variance per chain slot.
///
/// Validity: consecutive chain labels couple through spin 1 (so they differ
/// by at most one and never pair two zeros), `|m|` is bounded by the last
/// label and `|n|` by the first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DTensorSignature {
    l0: u32,
    chain: Vec<u32>,
    m: i32,
    n: i32,
    variances: Vec<Variance>,
}

impl DTensorSignature {
    pub fn new(
        l0: u32,
        chain: Vec<u32>,
        m: i32,
        n: i32,
        variances: Vec<Variance>,
    ) -> Result<Self> {
        if variances.len() != chain.len() {
            return Err(Error::InvalidSignature(format!(
                "chain has {} labels but {} variances were given",
                chain.len(),
                variances.len()
            )));
        }
        let mut prev = l0;
        for (i, &l) in chain.iter().enumerate() {
            if !triangle_ok(prev, 1, l) {
                return Err(Error::InvalidSignature(format!(
                    "chain step {} couples {} -> {} which spin 1 cannot reach",
                    i + 1,
                    prev,
                    l
                )));
            }
            prev = l;
        }
        let last = prev;
        if m.unsigned_abs() > last {
            return Err(Error::InvalidSignature(format!(
                "|m| = {} exceeds the final chain label {last}",
                m.abs()
            )));
        }
        if n.unsigned_abs() > l0 {
            return Err(Error::InvalidSignature(format!(
                "|n| = {} exceeds the leading label {l0}",
                n.abs()
            )));
        }
        Ok(DTensorSignature {
            l0,
            chain,
            m,
            n,
            variances,
        })
    }

    pub fn scalar(l0: u32, m: i32, n: i32) -> Result<Self> {
        Self::new(l0, Vec::new(), m, n, Vec::new())
    }

    pub fn l0(&self) -> u32 {
        self.l0
    }

    pub fn chain(&self) -> &[u32] {
        &self.chain
    }

    /// Chain label at position `i` with the convention that position 0 is
    /// `l0`; positions `1..=k` index the chain.
    pub fn label(&self, i: usize) -> u32 {
        if i == 0 {
            self.l0
        } else {
            self.chain[i - 1]
        }
    }

    /// The label bounding `|m|`: the last chain entry, or `l0` at rank 0.
    pub fn last_label(&self) -> u32 {
        self.chain.last().copied().unwrap_or(self.l0)
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn n(&self) -> i32 {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.chain.len()
    }

    pub fn variances(&self) -> &[Variance] {
        &self.variances
    }

    /// Same labels with a different variance pattern.
    pub fn with_variances(&self, variances: Vec<Variance>) -> Result<Self> {
        Self::new(self.l0, self.chain.clone(), self.m, self.n, variances)
    }

    /// Same pattern with one chain label replaced; fails if the new chain is
    /// not a valid coupling sequence.
    pub(crate) fn with_chain_label(&self, slot: usize, l: u32) -> Result<Self> {
        let mut chain = self.chain.clone();
        chain[slot - 1] = l;
        Self::new(self.l0, chain, self.m, self.n, self.variances.clone())
    }

    /// Same chain with both magnetic labels replaced.
    pub(crate) fn with_magnetics(&self, m: i32, n: i32) -> Result<Self> {
        Self::new(self.l0, self.chain.clone(), m, n, self.variances.clone())
    }

    /// Signature with tensor slots `i` and `i + 1` (0-indexed) removed from
    /// chain and variances.
    pub(crate) fn with_pair_removed(&self, i: usize) -> Result<Self> {
        let mut chain = self.chain.clone();
        let mut variances = self.variances.clone();
        chain.drain(i..=i + 1);
        variances.drain(i..=i + 1);
        Self::new(self.l0, chain, self.m, self.n, variances)
    }
}

impl fmt::Display for DTensorSignature {
    /// Grammar: `l0|l1,...,lk;m,n;v,...` with `v`/`c` variance letters.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|", self.l0)?;
        for (i, l) in self.chain.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ";{},{};", self.m, self.n)?;
        for (i, v) in self.variances.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match v {
                Variance::Vector => write!(f, "v")?,
                Variance::Covector => write!(f, "c")?,
            }
        }
        Ok(())
    }
}

impl FromStr for DTensorSignature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |msg: &str| Error::Parse(format!("signature '{s}': {msg}"));
        let (head, rest) = s
            .split_once('|')
            .ok_or_else(|| parse_err("expected 'l0|chain;m,n;variances'"))?;
        let l0: u32 = head
            .trim()
            .parse()
            .map_err(|_| parse_err("l0 must be a nonnegative integer"))?;
        let mut sections = rest.split(';');
        let chain_s = sections.next().unwrap_or_default();
        let mn_s = sections
            .next()
            .ok_or_else(|| parse_err("missing ';m,n' section"))?;
        let var_s = sections
            .next()
            .ok_or_else(|| parse_err("missing variance section"))?;
        if sections.next().is_some() {
            return Err(parse_err("too many ';' sections"));
        }
        let chain: Vec<u32> = if chain_s.trim().is_empty() {
            Vec::new()
        } else {
            chain_s
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| parse_err("chain labels must be nonnegative integers"))
                })
                .collect::<Result<_>>()?
        };
        let (m_s, n_s) = mn_s
            .split_once(',')
            .ok_or_else(|| parse_err("expected 'm,n'"))?;
        let m: i32 = m_s
            .trim()
            .parse()
            .map_err(|_| parse_err("m must be an integer"))?;
        let n: i32 = n_s
            .trim()
            .parse()
            .map_err(|_| parse_err("n must be an integer"))?;
        let variances: Vec<Variance> = if var_s.trim().is_empty() {
            Vec::new()
        } else {
            var_s
                .split(',')
                .map(|t| match t.trim() {
                    "v" => Ok(Variance::Vector),
                    "c" => Ok(Variance::Covector),
                    other => Err(parse_err(&format!(
                        "variance must be 'v' or 'c', got '{other}'"
                    ))),
                })
                .collect::<Result<_>>()?
        };
        DTensorSignature::new(l0, chain, m, n, variances)
    }
}

impl Serialize for DTensorSignature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for DTensorSignature {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        // 0 -> 0 coupling through spin 1 is impossible
        assert!(DTensorSignature::new(0, vec![0], 0, 0, vec![Variance::Vector]).is_err());
        // label jump of two
        assert!(DTensorSignature::new(1, vec![3], 0, 0, vec![Variance::Vector]).is_err());
        // m bound uses the last chain label
        assert!(DTensorSignature::new(2, vec![1], 2, 0, vec![Variance::Vector]).is_err());
        assert!(DTensorSignature::new(2, vec![1], 1, 2, vec![Variance::Vector]).is_ok());
        // n bound uses l0
        assert!(DTensorSignature::new(1, vec![2], 0, 2, vec![Variance::Vector]).is_err());
        // variance count must match
        assert!(DTensorSignature::new(1, vec![2], 0, 1, vec![]).is_err());
    }

    #[test]
    fn display_round_trips() {
        let sigs = [
            "0|1,0;0,0;v,c",
            "2|;1,-2;",
            "1|2,3;-3,1;c,c",
            "0|1,1,0;0,0;c,c,c",
        ];
        for s in sigs {
            let sig: DTensorSignature = s.parse().expect("parses");
            assert_eq!(sig.to_string(), s);
        }
    }

    #[test]
    fn parse_rejects_malformed_input() {
        for s in [
            "",
            "1",
            "1|2",
            "1|2;0",
            "1|2;0,0",
            "1|2;0,0;x",
            "1|2;0,0;v;v",
            "a|1;0,0;v",
            "1|b;0,0;v",
        ] {
            assert!(s.parse::<DTensorSignature>().is_err(), "accepted '{s}'");
        }
    }
}
