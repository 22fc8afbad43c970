//! Edge-list parsing, serialization and degree computation.
//!
//! Node tokens are opaque byte strings. They are interned into dense
//! [`NodeId`]s on parse so that multi-million-row files stay compact, but
//! every token is written back byte-for-byte.
//!
//! Degrees are total degrees (in + out) over the set of *unique* directed
//! pairs, so they do not depend on row order or on duplicated rows. A
//! self-loop `(v, v)` counts twice.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Dense identifier of an interned node token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A directed edge between two interned nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
}

impl Edge {
    #[inline]
    fn packed(self) -> u64 {
        ((self.src.0 as u64) << 32) | self.dst.0 as u64
    }
}

/// Borrowed view of one row: the raw source and destination tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeRecord<'a> {
    pub src: &'a [u8],
    pub dst: &'a [u8],
}

/// Ordered list of directed edges. Duplicate rows are kept.
#[derive(Debug, Clone, Default)]
pub struct EdgeList {
    nodes: Vec<Box<[u8]>>,
    edges: Vec<Edge>,
}

impl EdgeList {
    /// Builds an edge list from `(src, dst)` token pairs, in order.
    pub fn from_pairs<I, S, D>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, D)>,
        S: AsRef<[u8]>,
        D: AsRef<[u8]>,
    {
        let mut builder = EdgeListBuilder::default();
        for (s, d) in pairs {
            builder.push(s.as_ref(), d.as_ref())?;
        }
        Ok(builder.build())
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, index: usize) -> Edge {
        self.edges[index]
    }

    pub fn token(&self, node: NodeId) -> &[u8] {
        &self.nodes[node.index()]
    }

    pub fn record(&self, index: usize) -> EdgeRecord<'_> {
        let e = self.edges[index];
        EdgeRecord {
            src: self.token(e.src),
            dst: self.token(e.dst),
        }
    }

    pub fn records(&self) -> impl ExactSizeIterator<Item = EdgeRecord<'_>> + '_ {
        (0..self.edges.len()).map(move |i| self.record(i))
    }

    /// Returns a new list whose `k`-th edge is `self.edge(order[k])`.
    ///
    /// `order` may select any subset or repetition of indices.
    pub fn select(&self, order: &[usize]) -> EdgeList {
        EdgeList {
            nodes: self.nodes.clone(),
            edges: order.iter().map(|&i| self.edges[i]).collect(),
        }
    }

    /// Records sorted lexicographically; equal for two lists iff they hold
    /// the same multiset of rows.
    pub fn sorted_records(&self) -> Vec<EdgeRecord<'_>> {
        let mut recs: Vec<_> = self.records().collect();
        recs.sort_unstable();
        recs
    }

    pub(crate) fn from_parts(nodes: Vec<Box<[u8]>>, edges: Vec<Edge>) -> Self {
        EdgeList { nodes, edges }
    }
}

impl PartialEq for EdgeList {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.records().eq(other.records())
    }
}

impl Eq for EdgeList {}

/// Token interner shared by the in-memory parser and the streaming scanner.
#[derive(Debug, Default)]
pub(crate) struct Interner {
    ids: HashMap<Box<[u8]>, u32>,
}

impl Interner {
    pub(crate) fn intern(&mut self, token: &[u8]) -> Result<NodeId> {
        if let Some(&id) = self.ids.get(token) {
            return Ok(NodeId(id));
        }
        let id = u32::try_from(self.ids.len()).map_err(|_| Error::TooManyNodes)?;
        self.ids.insert(token.into(), id);
        Ok(NodeId(id))
    }

    pub(crate) fn get(&self, token: &[u8]) -> Option<NodeId> {
        self.ids.get(token).map(|&id| NodeId(id))
    }

    pub(crate) fn len(&self) -> usize {
        self.ids.len()
    }

    fn into_tokens(self) -> Vec<Box<[u8]>> {
        let mut slots: Vec<Option<Box<[u8]>>> = vec![None; self.ids.len()];
        for (token, id) in self.ids {
            slots[id as usize] = Some(token);
        }
        slots.into_iter().map(|t| t.expect("dense ids")).collect()
    }
}

/// Incremental builder for [`EdgeList`].
#[derive(Debug, Default)]
pub struct EdgeListBuilder {
    interner: Interner,
    edges: Vec<Edge>,
}

impl EdgeListBuilder {
    pub fn push(&mut self, src: &[u8], dst: &[u8]) -> Result<()> {
        let src = self.interner.intern(src)?;
        let dst = self.interner.intern(dst)?;
        self.edges.push(Edge { src, dst });
        Ok(())
    }

    pub fn build(self) -> EdgeList {
        EdgeList::from_parts(self.interner.into_tokens(), self.edges)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseOptions {
    pub delimiter: u8,
    pub has_header: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            delimiter: b',',
            has_header: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseStats {
    /// Data rows read (header excluded).
    pub rows: u64,
    /// Rows that carried more than two fields; the extras were dropped.
    pub extra_field_rows: u64,
    pub header: Option<Vec<u8>>,
}

/// Streams `(src, dst)` token pairs out of an edge-list reader.
///
/// The callback sees borrowed slices valid only for the duration of the call.
pub fn for_each_row<R, F>(mut reader: R, opts: &ParseOptions, mut f: F) -> Result<ParseStats>
where
    R: BufRead,
    F: FnMut(&[u8], &[u8]) -> Result<()>,
{
    let mut stats = ParseStats::default();
    let mut buf = Vec::with_capacity(256);
    let mut line_no = 0u64;
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let mut line = buf.as_slice();
        if let Some(rest) = line.strip_suffix(b"\n") {
            line = rest;
        }
        if let Some(rest) = line.strip_suffix(b"\r") {
            line = rest;
        }
        if line_no == 1 && opts.has_header {
            stats.header = Some(line.to_vec());
            continue;
        }
        let (src, dst, extra) = split_row(line, opts.delimiter).ok_or_else(|| Error::Parse {
            line: line_no,
            reason: "expected at least two delimited fields".into(),
        })?;
        if src.is_empty() || dst.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                reason: "empty node token".into(),
            });
        }
        if extra {
            stats.extra_field_rows += 1;
        }
        stats.rows += 1;
        f(src, dst)?;
    }
    if stats.rows == 0 {
        return Err(Error::EmptyEdgeList);
    }
    Ok(stats)
}

fn split_row(line: &[u8], delim: u8) -> Option<(&[u8], &[u8], bool)> {
    let first = line.iter().position(|&b| b == delim)?;
    let src = &line[..first];
    let rest = &line[first + 1..];
    match rest.iter().position(|&b| b == delim) {
        Some(second) => Some((src, &rest[..second], true)),
        None => Some((src, rest, false)),
    }
}

/// Parses a whole edge list into memory, preserving row order and duplicates.
pub fn parse_edge_list<R: BufRead>(reader: R, opts: &ParseOptions) -> Result<(EdgeList, ParseStats)> {
    let mut builder = EdgeListBuilder::default();
    let stats = for_each_row(reader, opts, |s, d| builder.push(s, d))?;
    Ok((builder.build(), stats))
}

pub fn read_edge_list_file(path: &Path, opts: &ParseOptions) -> Result<(EdgeList, ParseStats)> {
    let file = File::open(path)?;
    parse_edge_list(BufReader::with_capacity(1 << 20, file), opts)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WriteOptions {
    pub delimiter: u8,
    /// Written verbatim as the first line when present.
    pub header: Option<Vec<u8>>,
}

impl Default for WriteOptions {
    fn default() -> Self {
        WriteOptions {
            delimiter: b',',
            header: None,
        }
    }
}

/// Writes one `src<delim>dst\n` line per edge.
pub fn write_edge_list<W: Write>(el: &EdgeList, writer: W, opts: &WriteOptions) -> Result<()> {
    let mut w = BufWriter::with_capacity(1 << 20, writer);
    if let Some(header) = &opts.header {
        w.write_all(header)?;
        w.write_all(b"\n")?;
    }
    for rec in el.records() {
        w.write_all(rec.src)?;
        w.write_all(&[opts.delimiter])?;
        w.write_all(rec.dst)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Per-node total degree over unique directed pairs, indexed by [`NodeId`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeMap {
    degrees: Vec<u64>,
    unique_pairs: u64,
}

impl DegreeMap {
    #[inline]
    pub fn degree(&self, node: NodeId) -> u64 {
        self.degrees[node.index()]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.degrees
    }

    /// Number of distinct `(src, dst)` pairs the degrees were computed over.
    pub fn unique_pairs(&self) -> u64 {
        self.unique_pairs
    }

    /// Token-keyed view, for comparing degree maps of independently
    /// interned edge lists.
    pub fn by_token(&self, el: &EdgeList) -> BTreeMap<Vec<u8>, u64> {
        self.degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| (el.token(NodeId(i as u32)).to_vec(), d))
            .collect()
    }
}

pub fn compute_degrees(el: &EdgeList) -> DegreeMap {
    let mut pairs: Vec<u64> = el.edges().iter().map(|e| e.packed()).collect();
    pairs.sort_unstable();
    pairs.dedup();
    let mut degrees = vec![0u64; el.node_count()];
    for &p in &pairs {
        degrees[(p >> 32) as usize] += 1;
        degrees[(p & 0xffff_ffff) as usize] += 1;
    }
    DegreeMap {
        degrees,
        unique_pairs: pairs.len() as u64,
    }
}

/// Default number of packed pairs held in memory before a sorted run is
/// spilled to disk (8 MiB of pairs).
pub const DEFAULT_RUN_CAPACITY: usize = 1 << 20;

/// Deduplicates packed pairs with bounded memory: sorted runs are spilled to
/// anonymous temp files and merged at the end.
struct UniquePairCounter {
    run: Vec<u64>,
    run_capacity: usize,
    spills: Vec<File>,
}

impl UniquePairCounter {
    fn new(run_capacity: usize) -> Self {
        UniquePairCounter {
            run: Vec::new(),
            run_capacity: run_capacity.max(1),
            spills: Vec::new(),
        }
    }

    fn push(&mut self, pair: u64) -> Result<()> {
        if self.run.len() == self.run_capacity {
            self.spill()?;
        }
        self.run.push(pair);
        Ok(())
    }

    fn spill(&mut self) -> Result<()> {
        self.run.sort_unstable();
        self.run.dedup();
        let mut file = tempfile::tempfile()?;
        {
            let mut w = BufWriter::with_capacity(1 << 16, &mut file);
            for &p in &self.run {
                w.write_all(&p.to_le_bytes())?;
            }
            w.flush()?;
        }
        file.seek(SeekFrom::Start(0))?;
        self.spills.push(file);
        self.run.clear();
        Ok(())
    }

    fn finish(mut self, node_count: usize) -> Result<DegreeMap> {
        let mut degrees = vec![0u64; node_count];
        let mut unique = 0u64;
        let mut count = |p: u64| {
            degrees[(p >> 32) as usize] += 1;
            degrees[(p & 0xffff_ffff) as usize] += 1;
            unique += 1;
        };
        if self.spills.is_empty() {
            self.run.sort_unstable();
            self.run.dedup();
            self.run.iter().copied().for_each(&mut count);
        } else {
            if !self.run.is_empty() {
                self.spill()?;
            }
            self.run = Vec::new();
            let mut readers: Vec<BufReader<File>> = self
                .spills
                .drain(..)
                .map(|f| BufReader::with_capacity(1 << 16, f))
                .collect();
            let mut heap = BinaryHeap::with_capacity(readers.len());
            for (i, r) in readers.iter_mut().enumerate() {
                if let Some(p) = read_pair(r)? {
                    heap.push(Reverse((p, i)));
                }
            }
            let mut last = None;
            while let Some(Reverse((p, i))) = heap.pop() {
                if last != Some(p) {
                    count(p);
                    last = Some(p);
                }
                if let Some(next) = read_pair(&mut readers[i])? {
                    heap.push(Reverse((next, i)));
                }
            }
        }
        Ok(DegreeMap {
            degrees,
            unique_pairs: unique,
        })
    }
}

fn read_pair<R: Read>(r: &mut R) -> Result<Option<u64>> {
    let mut bytes = [0u8; 8];
    match r.read_exact(&mut bytes) {
        Ok(()) => Ok(Some(u64::from_le_bytes(bytes))),
        Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Result of a streaming degree scan: the node interner plus degrees.
pub struct DegreeScan {
    pub(crate) interner: Interner,
    pub degrees: DegreeMap,
    pub stats: ParseStats,
}

impl DegreeScan {
    pub fn node_count(&self) -> usize {
        self.interner.len()
    }

    pub fn degree_of(&self, token: &[u8]) -> Option<u64> {
        self.interner.get(token).map(|id| self.degrees.degree(id))
    }
}

/// Computes degrees from a reader without materializing the edge list.
///
/// Memory is the node interner plus at most `run_capacity` packed pairs.
pub fn scan_degrees<R: BufRead>(reader: R, opts: &ParseOptions, run_capacity: usize) -> Result<DegreeScan> {
    let mut interner = Interner::default();
    let mut pairs = UniquePairCounter::new(run_capacity);
    let stats = for_each_row(reader, opts, |s, d| {
        let e = Edge {
            src: interner.intern(s)?,
            dst: interner.intern(d)?,
        };
        pairs.push(e.packed())
    })?;
    let degrees = pairs.finish(interner.len())?;
    Ok(DegreeScan {
        interner,
        degrees,
        stats,
    })
}

/// Looks up both endpoints of a row in a completed scan.
pub(crate) fn scan_row_degrees(scan: &DegreeScan, src: &[u8], dst: &[u8]) -> Result<(u64, u64)> {
    match (scan.degree_of(src), scan.degree_of(dst)) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::Parse {
            line: 0,
            reason: "input changed between passes".into(),
        }),
    }
}

/// Node degrees sorted in non-increasing order.
pub fn degree_sequence(el: &EdgeList) -> Vec<u64> {
    let mut seq = compute_degrees(el).as_slice().to_vec();
    seq.sort_unstable_by(|a, b| b.cmp(a));
    seq
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<EdgeList> {
        parse_edge_list(s.as_bytes(), &ParseOptions::default()).map(|(el, _)| el)
    }

    fn degs(el: &EdgeList) -> BTreeMap<String, u64> {
        compute_degrees(el)
            .by_token(el)
            .into_iter()
            .map(|(k, v)| (String::from_utf8(k).unwrap(), v))
            .collect()
    }

    #[test]
    fn parses_rows_in_order() {
        let el = parse("A,B\nB,C\n").unwrap();
        let recs: Vec<_> = el.records().collect();
        assert_eq!(
            recs,
            vec![EdgeRecord { src: b"A", dst: b"B" }, EdgeRecord { src: b"B", dst: b"C" }]
        );
    }

    #[test]
    fn keeps_duplicates() {
        let el = parse("0,1\n0,1\n").unwrap();
        assert_eq!(el.len(), 2);
        assert_eq!(el.record(0), el.record(1));
    }

    #[test]
    fn single_field_row_is_an_error() {
        match parse("X\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
        match parse("A,B\nC\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(parse(""), Err(Error::EmptyEdgeList)));
        let opts = ParseOptions {
            has_header: true,
            ..Default::default()
        };
        assert!(matches!(
            parse_edge_list(&b"src,dst\n"[..], &opts),
            Err(Error::EmptyEdgeList)
        ));
    }

    #[test]
    fn empty_token_is_an_error() {
        assert!(matches!(parse("A,\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn extra_columns_are_counted_and_dropped() {
        let (el, stats) = parse_edge_list(&b"A,B,7\nB,C\nC,D,1,2\n"[..], &ParseOptions::default()).unwrap();
        assert_eq!(stats.extra_field_rows, 2);
        assert_eq!(stats.rows, 3);
        assert_eq!(el.record(2), EdgeRecord { src: b"C", dst: b"D" });
    }

    #[test]
    fn crlf_and_missing_final_newline() {
        let el = parse("A,B\r\nB,C").unwrap();
        assert_eq!(el.record(0), EdgeRecord { src: b"A", dst: b"B" });
        assert_eq!(el.record(1), EdgeRecord { src: b"B", dst: b"C" });
    }

    #[test]
    fn header_and_delimiter_options() {
        let opts = ParseOptions {
            delimiter: b'\t',
            has_header: true,
        };
        let (el, stats) = parse_edge_list(&b"from\tto\nx\ty\n"[..], &opts).unwrap();
        assert_eq!(stats.header.as_deref(), Some(&b"from\tto"[..]));
        assert_eq!(el.len(), 1);
    }

    #[test]
    fn write_format() {
        let el = EdgeList::from_pairs([("A", "B")]).unwrap();
        let mut out = Vec::new();
        write_edge_list(&el, &mut out, &WriteOptions::default()).unwrap();
        assert_eq!(out, b"A,B\n");

        let el = EdgeList::from_pairs([("0", "1"), ("0", "1")]).unwrap();
        let mut out = Vec::new();
        write_edge_list(&el, &mut out, &WriteOptions::default()).unwrap();
        assert_eq!(out, b"0,1\n0,1\n");
    }

    #[test]
    fn path_degrees() {
        let el = EdgeList::from_pairs([("A", "B"), ("B", "C")]).unwrap();
        let d = degs(&el);
        assert_eq!(d["A"], 1);
        assert_eq!(d["B"], 2);
        assert_eq!(d["C"], 1);
    }

    #[test]
    fn duplicate_and_reverse_edges() {
        let el = EdgeList::from_pairs([("A", "B"), ("A", "B"), ("B", "A")]).unwrap();
        let d = degs(&el);
        assert_eq!(d["A"], 2);
        assert_eq!(d["B"], 2);
        assert_eq!(compute_degrees(&el).unique_pairs(), 2);
    }

    #[test]
    fn self_loop_counts_twice() {
        let el = EdgeList::from_pairs([("A", "A")]).unwrap();
        assert_eq!(degs(&el)["A"], 2);
    }

    #[test]
    fn spilling_scan_matches_in_memory_degrees() {
        let mut text = String::new();
        for i in 0..500u32 {
            let a = (i * 7919) % 37;
            let b = (i * 104729) % 41;
            text.push_str(&format!("{a},{b}\n"));
            if i % 5 == 0 {
                text.push_str(&format!("{a},{b}\n"));
            }
        }
        let el = parse(&text).unwrap();
        let expected = compute_degrees(&el);
        for run in [1usize, 3, 64, 10_000] {
            let scan = scan_degrees(text.as_bytes(), &ParseOptions::default(), run).unwrap();
            assert_eq!(scan.degrees.unique_pairs(), expected.unique_pairs());
            for rec in el.records() {
                let (a, b) = scan_row_degrees(&scan, rec.src, rec.dst).unwrap();
                let (ea, eb) = {
                    let by = expected.by_token(&el);
                    (by[rec.src], by[rec.dst])
                };
                assert_eq!((a, b), (ea, eb));
            }
        }
    }
}
