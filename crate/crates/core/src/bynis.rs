//! Stego network synthesis: every message byte becomes one edge whose two
//! integer node IDs sum to `byte + bias` (modulo `bias`).
//!
//! Source IDs follow a greedy hub schedule taken from a reference degree
//! sequence sorted in non-increasing order: node `0` is the source of the
//! first `D_r[0]` edges, node `1` of the next `D_r[1]`, and so on. Every
//! emitted edge consumes one unit of its hub's reference degree.

use std::collections::HashSet;
use std::fmt;
use std::io::BufRead;

use crate::edgelist::{EdgeList, EdgeListBuilder};
use crate::error::{Error, Result};
use crate::keyperm::SplitMix64;

pub const DEFAULT_BIAS: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReferenceSource {
    File,
    BarabasiAlbert { n: usize, m: usize, seed: u64 },
    Explicit,
}

impl fmt::Display for ReferenceSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReferenceSource::File => f.write_str("file"),
            ReferenceSource::BarabasiAlbert { n, m, seed } => write!(f, "ba:n={n},m={m},seed={seed}"),
            ReferenceSource::Explicit => f.write_str("explicit"),
        }
    }
}

/// Target degrees, sorted non-increasing, all at least one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceDegrees {
    degrees: Vec<u64>,
    source: ReferenceSource,
}

impl ReferenceDegrees {
    pub fn new(mut degrees: Vec<u64>, source: ReferenceSource) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidReference("no degrees".into()));
        }
        if degrees.contains(&0) {
            return Err(Error::InvalidReference("degrees must be at least 1".into()));
        }
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Ok(ReferenceDegrees { degrees, source })
    }

    /// One non-negative integer per line; blank lines are skipped.
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let mut degrees = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let d = t.parse::<u64>().map_err(|e| Error::Parse {
                line: i as u64 + 1,
                reason: format!("bad degree '{t}': {e}"),
            })?;
            degrees.push(d);
        }
        Self::new(degrees, ReferenceSource::File)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.degrees
    }

    pub fn source(&self) -> &ReferenceSource {
        &self.source
    }

    /// Total number of edges the hub schedule can emit.
    pub fn capacity(&self) -> u64 {
        self.degrees.iter().sum()
    }
}

/// Synthesizes one edge per message byte, in message order.
pub fn bynis_encode(msg: &[u8], reference: &ReferenceDegrees, bias: u64) -> Result<EdgeList> {
    if bias < DEFAULT_BIAS {
        return Err(Error::BiasTooSmall(bias));
    }
    if msg.is_empty() {
        return Err(Error::EmptyMessage);
    }
    if reference.capacity() < msg.len() as u64 {
        return Err(Error::ReferenceExhausted {
            capacity: reference.capacity(),
            needed: msg.len() as u64,
        });
    }
    let d_r = reference.as_slice();
    let bias = bias as i128;
    let mut consumed = vec![0u64; d_r.len()];
    let mut hub = 0usize;
    let mut seen: HashSet<(u64, i128)> = HashSet::with_capacity(msg.len());
    let mut builder = EdgeListBuilder::default();

    for &byte in msg {
        let target = byte as i128 + bias;
        if consumed[hub] == d_r[hub] {
            hub += 1;
        }
        consumed[hub] += 1;
        let id1 = hub as i128;
        let mut id2 = target - id1;
        if id2 < 0 {
            let deficit = id1 - target;
            id2 += bias * ((deficit + bias - 1) / bias) + bias;
        }
        let mut j = 1;
        while !seen.insert((hub as u64, id2)) {
            id2 += bias * j;
            j += 1;
        }
        builder.push(hub.to_string().as_bytes(), id2.to_string().as_bytes())?;
    }
    Ok(builder.build())
}

fn parse_id(token: &[u8], index: usize) -> Result<u128> {
    if token.is_empty() || !token.iter().all(u8::is_ascii_digit) {
        return Err(Error::Decode {
            index,
            reason: format!(
                "node token '{}' is not a decimal integer",
                String::from_utf8_lossy(token)
            ),
        });
    }
    std::str::from_utf8(token)
        .ok()
        .and_then(|s| s.parse::<u128>().ok())
        .ok_or_else(|| Error::Decode {
            index,
            reason: "node id out of range".into(),
        })
}

/// Byte `i` is `(id1 + id2) mod bias` of edge `i`.
pub fn bynis_decode(el: &EdgeList, bias: u64) -> Result<Vec<u8>> {
    if bias < DEFAULT_BIAS {
        return Err(Error::BiasTooSmall(bias));
    }
    el.records()
        .enumerate()
        .map(|(i, rec)| {
            let sum = parse_id(rec.src, i)? + parse_id(rec.dst, i)?;
            let b = sum % bias as u128;
            u8::try_from(b).map_err(|_| Error::Decode {
                index: i,
                reason: format!("residue {b} is not a byte"),
            })
        })
        .collect()
}

/// Edges of a Barabási–Albert graph: a star on `m + 1` nodes, then each
/// new node attaches to `m` distinct targets drawn with probability
/// proportional to current degree.
pub fn ba_edges(n: usize, m: usize, seed: u64) -> Result<Vec<(usize, usize)>> {
    if m < 1 || m >= n {
        return Err(Error::InvalidParameters(format!("need n > m >= 1, got n={n}, m={m}")));
    }
    let mut rng = SplitMix64::new(seed);
    let mut edges: Vec<(usize, usize)> = (1..=m).map(|v| (0, v)).collect();
    // Each node appears once per unit of degree.
    let mut repeated: Vec<usize> = std::iter::repeat_n(0, m).chain(1..=m).collect();
    let mut targets = Vec::with_capacity(m);
    for source in (m + 1)..n {
        targets.clear();
        while targets.len() < m {
            let pick = repeated[(rng.next_u64() % repeated.len() as u64) as usize];
            if !targets.contains(&pick) {
                targets.push(pick);
            }
        }
        for &t in &targets {
            edges.push((source, t));
        }
        repeated.extend_from_slice(&targets);
        repeated.extend(std::iter::repeat_n(source, m));
    }
    Ok(edges)
}

pub fn ba_degree_sequence(n: usize, m: usize, seed: u64) -> Result<ReferenceDegrees> {
    let mut degrees = vec![0u64; n];
    for (a, b) in ba_edges(n, m, seed)? {
        degrees[a] += 1;
        degrees[b] += 1;
    }
    ReferenceDegrees::new(degrees, ReferenceSource::BarabasiAlbert { n, m, seed })
}
