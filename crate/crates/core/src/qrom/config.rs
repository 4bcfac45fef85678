//! Address-line partitions: which lines are pre-decoded together.
//!
//! Textual form is `<size><mode>` groups joined by `+`, e.g. `2P+2P+1U`.
//! Groups claim address lines MSB-first in the order listed.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_ENUMERATED_LINES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GroupMode {
    /// Pre-decoded: all `2^size` minterms are computed onto ancilla.
    P,
    /// Undecoded: each line feeds the final MCX directly.
    U,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Group {
    pub size: usize,
    pub mode: GroupMode,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PartitionConfig {
    groups: Vec<Group>,
}

impl PartitionConfig {
    pub fn new(groups: Vec<Group>) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::Config("no groups".into()));
        }
        if let Some(g) = groups.iter().find(|g| g.size == 0) {
            return Err(Error::Config(format!("zero-size {:?} group", g.mode)));
        }
        Ok(PartitionConfig { groups })
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    /// Number of address lines covered.
    pub fn total_lines(&self) -> usize {
        self.groups.iter().map(|g| g.size).sum()
    }

    pub fn predecoded_groups(&self) -> impl Iterator<Item = &Group> {
        self.groups.iter().filter(|g| g.mode == GroupMode::P)
    }

    /// Ancilla needed for the minterm signals: `Σ 2^size` over P groups.
    pub fn predecode_ancilla(&self) -> usize {
        self.predecoded_groups().map(|g| 1usize << g.size).sum()
    }

    /// Splits U groups into singletons and orders P groups by descending size,
    /// U lines last. Two configs with equal normal forms build equivalent circuits
    /// up to a relabelling of address lines.
    pub fn normalized(&self) -> PartitionConfig {
        let mut p: Vec<usize> = self.predecoded_groups().map(|g| g.size).collect();
        p.sort_unstable_by(|a, b| b.cmp(a));
        let u: usize = self
            .groups
            .iter()
            .filter(|g| g.mode == GroupMode::U)
            .map(|g| g.size)
            .sum();
        let groups = p
            .into_iter()
            .map(|size| Group {
                size,
                mode: GroupMode::P,
            })
            .chain((0..u).map(|_| Group {
                size: 1,
                mode: GroupMode::U,
            }))
            .collect();
        PartitionConfig { groups }
    }

    /// `⌈n/2⌉P + ⌊n/2⌋P` (just `1P` for n = 1).
    pub fn optimal(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("address width must be at least 1".into()));
        }
        let hi = n.div_ceil(2);
        let lo = n / 2;
        let mut groups = vec![Group {
            size: hi,
            mode: GroupMode::P,
        }];
        if lo > 0 {
            groups.push(Group {
                size: lo,
                mode: GroupMode::P,
            });
        }
        PartitionConfig::new(groups)
    }
}

impl fmt::Display for PartitionConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.groups.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{}{:?}", g.size, g.mode)?;
        }
        Ok(())
    }
}

impl FromStr for PartitionConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        parse_config(text)
    }
}

/// Parses `2P+3U`, `5p`, or the parenthesised `2(P)+3(U)`.
pub fn parse_config(text: &str) -> Result<PartitionConfig> {
    let mut groups = Vec::new();
    for token in text.split('+') {
        let t: String = token.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t.to_ascii_uppercase();
        let digits_end = t.find(|c: char| !c.is_ascii_digit()).unwrap_or(t.len());
        let (num, rest) = t.split_at(digits_end);
        let mode = match rest {
            "P" | "(P)" => GroupMode::P,
            "U" | "(U)" => GroupMode::U,
            _ => return Err(Error::Config(format!("malformed group {token:?}"))),
        };
        let size: usize = num
            .parse()
            .map_err(|_| Error::Config(format!("malformed group {token:?}")))?;
        groups.push(Group { size, mode });
    }
    PartitionConfig::new(groups)
}

fn partitions(n: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for part in (1..=max_part.min(n)).rev() {
        prefix.push(part);
        partitions(n - part, part, prefix, out);
        prefix.pop();
    }
}

/// Every distinct configuration for an `n`-line address, in normal form,
/// sorted by their textual representation.
pub fn enumerate_configs(n: usize) -> Result<Vec<PartitionConfig>> {
    if !(1..=MAX_ENUMERATED_LINES).contains(&n) {
        return Err(Error::Config(format!(
            "enumeration supports 1..={MAX_ENUMERATED_LINES} address lines, got {n}"
        )));
    }
    let mut out = Vec::new();
    for undecoded in 0..=n {
        let mut parts = Vec::new();
        partitions(n - undecoded, n - undecoded, &mut Vec::new(), &mut parts);
        for p in parts {
            let groups = p
                .into_iter()
                .map(|size| Group {
                    size,
                    mode: GroupMode::P,
                })
                .chain((0..undecoded).map(|_| Group {
                    size: 1,
                    mode: GroupMode::U,
                }))
                .collect();
            out.push(PartitionConfig { groups });
        }
    }
    out.sort_by_key(|c| c.to_string());
    Ok(out)
}

/// Distinct normal forms reachable from `configs`.
pub fn normal_forms<'a>(
    configs: impl IntoIterator<Item = &'a PartitionConfig>,
) -> BTreeSet<String> {
    configs
        .into_iter()
        .map(|c| c.normalized().to_string())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(size: usize, mode: GroupMode) -> Group {
        Group { size, mode }
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse_config("2P+3U").unwrap().groups(),
            &[g(2, GroupMode::P), g(3, GroupMode::U)]
        );
        assert_eq!(parse_config("5P").unwrap().groups(), &[g(5, GroupMode::P)]);
        assert_eq!(
            parse_config("2(p) + 2(P)+1u").unwrap().to_string(),
            "2P+2P+1U"
        );
        assert!(matches!(parse_config("2P+0U"), Err(Error::Config(_))));
        assert!(matches!(parse_config("2X"), Err(Error::Config(_))));
        assert!(matches!(parse_config("P"), Err(Error::Config(_))));
        assert!(matches!(parse_config(""), Err(Error::Config(_))));
    }

    #[test]
    fn enumerate_small() {
        let names: Vec<String> = enumerate_configs(2)
            .unwrap()
            .iter()
            .map(|c| c.to_string())
            .collect();
        assert_eq!(names, vec!["1P+1P", "1P+1U", "1U+1U", "2P"]);
        let names: Vec<String> = enumerate_configs(1)
            .unwrap()
            .iter()
            .map(|c| c.to_string())
            .collect();
        assert_eq!(names, vec!["1P", "1U"]);
    }

    #[test]
    fn optimal_splits() {
        assert_eq!(PartitionConfig::optimal(8).unwrap().to_string(), "4P+4P");
        assert_eq!(PartitionConfig::optimal(5).unwrap().to_string(), "3P+2P");
        assert_eq!(PartitionConfig::optimal(1).unwrap().to_string(), "1P");
    }

    #[test]
    fn normalization() {
        let c = parse_config("2P+3U+3P").unwrap();
        assert_eq!(c.normalized().to_string(), "3P+2P+1U+1U+1U");
    }
}
