use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An eventually periodic sequence of generator indices `theta_1, theta_2, ...`,
/// written `prefix | cycle` with 1-based indices in text form.
///
/// `theta_1` is the outermost map: `gamma_n = theta_1 o theta_2 o ... o theta_n`.
/// Indices are stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SequenceCoding {
    prefix: Vec<usize>,
    cycle: Vec<usize>,
}

impl SequenceCoding {
    pub fn new(prefix: Vec<usize>, cycle: Vec<usize>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidCoding("the cycle must be nonempty".into()));
        }
        Ok(SequenceCoding { prefix, cycle })
    }

    /// The constant sequence `i, i, i, ...` (0-based).
    pub fn constant(i: usize) -> Self {
        SequenceCoding {
            prefix: Vec::new(),
            cycle: vec![i],
        }
    }

    /// A coding whose first `word.len()` entries are `word`, continued by
    /// repeating the last entry.
    pub fn from_word(word: &[usize]) -> Result<Self> {
        let (&last, init) = word
            .split_last()
            .ok_or_else(|| Error::InvalidCoding("empty word".into()))?;
        Self::new(init.to_vec(), vec![last])
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    /// 0-based generator index of `theta_n`, `n >= 1`.
    pub fn index(&self, n: usize) -> usize {
        assert!(n >= 1, "levels start at 1");
        let i = n - 1;
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// `theta_1 .. theta_n` as 0-based indices.
    pub fn word(&self, n: usize) -> Vec<usize> {
        (1..=n).map(|k| self.index(k)).collect()
    }

    pub fn validate(&self, set_len: usize) -> Result<()> {
        match self.prefix.iter().chain(&self.cycle).find(|&&i| i >= set_len) {
            Some(&i) => Err(Error::InvalidCoding(format!(
                "index {} exceeds the {set_len} generators",
                i + 1
            ))),
            None => Ok(()),
        }
    }
}

fn parse_indices(part: &str, offset: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    let mut pos = offset;
    for tok in part.split(',') {
        let t = tok.trim();
        if !t.is_empty() {
            let i: usize = t.parse().map_err(|_| {
                Error::parse(pos, format!("expected a positive index, found `{t}`"))
            })?;
            if i == 0 {
                return Err(Error::parse(pos, "indices are 1-based"));
            }
            out.push(i - 1);
        }
        pos += tok.len() + 1;
    }
    Ok(out)
}

impl FromStr for SequenceCoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (prefix, cycle) = s
            .split_once('|')
            .ok_or_else(|| Error::parse(0, "expected `prefix|cycle`"))?;
        let prefix = parse_indices(prefix, 0)?;
        let cycle = parse_indices(cycle, s.find('|').unwrap() + 1)?;
        Self::new(prefix, cycle)
    }
}

impl fmt::Display for SequenceCoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(|i| (i + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{}|{}", join(&self.prefix), join(&self.cycle))
    }
}
