//! Edge-type classification, supply partitioning and capacity estimates.

use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::edgelist::{self, DegreeMap, EdgeList, ParseOptions};
use crate::error::Result;

/// Bits of framing overhead the codec spends on the length header.
pub const HEADER_BITS: u64 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Two bits per edge from the parities of the endpoint degrees.
    Bind,
    /// One byte per edge from the endpoint degree sum modulo 256.
    Bymond,
}

impl Algorithm {
    pub fn num_types(self) -> usize {
        match self {
            Algorithm::Bind => 4,
            Algorithm::Bymond => 256,
        }
    }

    pub fn bits_per_symbol(self) -> u32 {
        match self {
            Algorithm::Bind => 2,
            Algorithm::Bymond => 8,
        }
    }

    pub fn symbols_per_byte(self) -> usize {
        8 / self.bits_per_symbol() as usize
    }

    /// Type index of an edge whose endpoints have degrees `k1` (source) and
    /// `k2` (destination). For BIND the index is `(k1 odd) << 1 | (k2 odd)`,
    /// which is exactly the 2-bit symbol the edge carries.
    #[inline]
    pub fn classify(self, k1: u64, k2: u64) -> u8 {
        match self {
            Algorithm::Bind => (((k1 & 1) << 1) | (k2 & 1)) as u8,
            Algorithm::Bymond => (k1.wrapping_add(k2) % 256) as u8,
        }
    }

    pub fn edge_type(self, index: u8) -> EdgeType {
        debug_assert!((index as usize) < self.num_types());
        EdgeType { algorithm: self, index }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Bind => "bind",
            Algorithm::Bymond => "bymond",
        })
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bind" => Ok(Algorithm::Bind),
            "bymond" => Ok(Algorithm::Bymond),
            other => Err(format!("unknown algorithm '{other}' (expected bind or bymond)")),
        }
    }
}

/// Edge type key. BIND types print as parity pairs (`EE`, `EO`, `OE`, `OO`,
/// source first); BYMOND types print as their residue `0..=255`.
///
/// Keys order by index, so BIND sorts `EE < EO < OE < OO`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeType {
    pub algorithm: Algorithm,
    pub index: u8,
}

const BIND_NAMES: [&str; 4] = ["EE", "EO", "OE", "OO"];

impl fmt::Display for EdgeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.algorithm {
            Algorithm::Bind => f.write_str(BIND_NAMES[self.index as usize]),
            Algorithm::Bymond => write!(f, "{}", self.index),
        }
    }
}

impl Serialize for EdgeType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn bind_classify(k1: u64, k2: u64) -> EdgeType {
    Algorithm::Bind.edge_type(Algorithm::Bind.classify(k1, k2))
}

pub fn bymond_classify(k1: u64, k2: u64) -> EdgeType {
    Algorithm::Bymond.edge_type(Algorithm::Bymond.classify(k1, k2))
}

/// Edge indices of a cover grouped by type, each queue in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    algorithm: Algorithm,
    queues: Vec<Vec<usize>>,
    total: usize,
}

impl Partition {
    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn queue(&self, index: u8) -> &[usize] {
        &self.queues[index as usize]
    }

    pub fn histogram(&self) -> Vec<u64> {
        self.queues.iter().map(|q| q.len() as u64).collect()
    }
}

/// Type index of every edge, in file order.
pub fn edge_types(el: &EdgeList, deg: &DegreeMap, algorithm: Algorithm) -> Vec<u8> {
    el.edges()
        .iter()
        .map(|e| algorithm.classify(deg.degree(e.src), deg.degree(e.dst)))
        .collect()
}

pub fn partition_edges(el: &EdgeList, deg: &DegreeMap, algorithm: Algorithm) -> Partition {
    let mut queues = vec![Vec::new(); algorithm.num_types()];
    for (i, t) in edge_types(el, deg, algorithm).into_iter().enumerate() {
        queues[t as usize].push(i);
    }
    Partition {
        algorithm,
        queues,
        total: el.len(),
    }
}

/// One value per edge type, serialized as an ordered `{type: value}` object.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeMap<T> {
    pub algorithm: Algorithm,
    pub values: Vec<T>,
}

pub type Histogram = TypeMap<u64>;

impl<T: Serialize> Serialize for TypeMap<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.values.len()))?;
        for (i, v) in self.values.iter().enumerate() {
            map.serialize_entry(&self.algorithm.edge_type(i as u8), v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityReport {
    pub algorithm: Algorithm,
    /// Rows in the edge list, duplicates included.
    pub edges: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unique_pairs: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
    pub histogram: Histogram,
    pub e_min_type: EdgeType,
    pub e_min: u64,
    /// 4·|E_min| for BIND, 8·256·|E_min| for BYMOND.
    pub b_max_est_bits: u64,
    /// 2·|E| for BIND, 8·|E| for BYMOND.
    pub b_max_thr_bits: u64,
    pub bpe_max_est: f64,
    pub r_e_t: f64,
    /// num_types·|E_min|: edges a perfectly matched message could use.
    pub b_max_est_symbols: u64,
    pub header_bits: u64,
    pub usable_body_bits: u64,
    pub notes: Vec<String>,
}

const THR_NOTE: &str = "b_max_thr_bits counts every row at full symbol width (2 bits for bind, 8 for bymond); \
tables that count one unit per row differ from it by that factor";

impl CapacityReport {
    pub fn from_histogram(algorithm: Algorithm, counts: Vec<u64>) -> Self {
        assert_eq!(counts.len(), algorithm.num_types());
        let edges: u64 = counts.iter().sum();
        let (min_index, e_min) = counts
            .iter()
            .copied()
            .enumerate()
            .min_by_key(|&(i, c)| (c, i))
            .expect("nonempty histogram");
        let (b_max_est_bits, b_max_thr_bits) = match algorithm {
            Algorithm::Bind => (4 * e_min, 2 * edges),
            Algorithm::Bymond => (8 * 256 * e_min, 8 * edges),
        };
        let ratio = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        CapacityReport {
            algorithm,
            edges,
            unique_pairs: None,
            nodes: None,
            e_min_type: algorithm.edge_type(min_index as u8),
            e_min,
            b_max_est_bits,
            b_max_thr_bits,
            bpe_max_est: ratio(b_max_est_bits, edges),
            r_e_t: ratio(b_max_est_bits, b_max_thr_bits),
            b_max_est_symbols: algorithm.num_types() as u64 * e_min,
            header_bits: HEADER_BITS,
            usable_body_bits: b_max_est_bits.saturating_sub(HEADER_BITS),
            histogram: TypeMap {
                algorithm,
                values: counts,
            },
            notes: vec![THR_NOTE.to_string()],
        }
    }

    pub fn with_graph_counts(mut self, nodes: u64, unique_pairs: u64) -> Self {
        self.nodes = Some(nodes);
        self.unique_pairs = Some(unique_pairs);
        self
    }

    /// One header line and one data row; per-type counts follow the summary.
    pub fn to_csv(&self) -> String {
        let mut head = String::from("algo,edges,e_min_type,e_min,b_max_est_bits,b_max_thr_bits,bpe_max_est,r_e_t");
        let mut row = format!(
            "{},{},{},{},{},{},{},{}",
            self.algorithm,
            self.edges,
            self.e_min_type,
            self.e_min,
            self.b_max_est_bits,
            self.b_max_thr_bits,
            self.bpe_max_est,
            self.r_e_t
        );
        for (i, c) in self.histogram.values.iter().enumerate() {
            head.push_str(&format!(",type_{}", self.algorithm.edge_type(i as u8)));
            row.push_str(&format!(",{c}"));
        }
        format!("{head}\n{row}\n")
    }
}

impl fmt::Display for CapacityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algorithm         {}", self.algorithm)?;
        writeln!(f, "edges (rows)      {}", self.edges)?;
        if let Some(u) = self.unique_pairs {
            writeln!(f, "unique pairs      {u}")?;
        }
        if let Some(n) = self.nodes {
            writeln!(f, "nodes             {n}")?;
        }
        writeln!(f, "E_min type        {}", self.e_min_type)?;
        writeln!(f, "|E_min|           {}", self.e_min)?;
        writeln!(f, "B_max est (bits)  {}", self.b_max_est_bits)?;
        writeln!(f, "B_max thr (bits)  {}", self.b_max_thr_bits)?;
        writeln!(f, "BPE_max est       {:.6}", self.bpe_max_est)?;
        writeln!(f, "R_E/T             {:.6}", self.r_e_t)?;
        writeln!(f, "usable body bits  {}", self.usable_body_bits)?;
        writeln!(f)?;
        writeln!(f, "{:>6}  {:>12}  {:>8}", "type", "count", "share")?;
        for (i, &c) in self.histogram.values.iter().enumerate() {
            let share = if self.edges == 0 {
                0.0
            } else {
                c as f64 / self.edges as f64
            };
            writeln!(
                f,
                "{:>6}  {:>12}  {:>8.4}",
                self.algorithm.edge_type(i as u8).to_string(),
                c,
                share
            )?;
        }
        writeln!(f)?;
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        Ok(())
    }
}

pub fn estimate_capacity(p: &Partition) -> CapacityReport {
    CapacityReport::from_histogram(p.algorithm, p.histogram())
}

/// In-memory capacity for a parsed cover.
pub fn capacity_of(el: &EdgeList, algorithm: Algorithm) -> CapacityReport {
    let deg = edgelist::compute_degrees(el);
    let report = estimate_capacity(&partition_edges(el, &deg, algorithm));
    report.with_graph_counts(el.node_count() as u64, deg.unique_pairs())
}

/// Two-pass streaming capacity of an edge-list file. Memory holds the node
/// table and at most `run_capacity` pairs, never the rows themselves.
pub fn capacity_from_path(
    path: &Path,
    opts: &ParseOptions,
    algorithm: Algorithm,
    run_capacity: usize,
) -> Result<CapacityReport> {
    let reader = BufReader::with_capacity(1 << 20, File::open(path)?);
    let scan = edgelist::scan_degrees(reader, opts, run_capacity)?;
    let mut counts = vec![0u64; algorithm.num_types()];
    let reader = BufReader::with_capacity(1 << 20, File::open(path)?);
    edgelist::for_each_row(reader, opts, |s, d| {
        let (k1, k2) = edgelist::scan_row_degrees(&scan, s, d)?;
        counts[algorithm.classify(k1, k2) as usize] += 1;
        Ok(())
    })?;
    Ok(CapacityReport::from_histogram(algorithm, counts)
        .with_graph_counts(scan.node_count() as u64, scan.degrees.unique_pairs()))
}
