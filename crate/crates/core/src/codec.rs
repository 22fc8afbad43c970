//! Hiding messages in the row order of a cover edge list.
//!
//! Each edge carries the symbol of its type: a 2-bit parity pair for BIND,
//! a byte for BYMOND. Encoding picks, for every message symbol, the next
//! unused edge of that type (FIFO in file order), appends the untouched
//! edges in file order, then shuffles the whole list with the password
//! permutation. The multiset of rows, and therefore every degree, is left
//! unchanged, so the decoder can reclassify edges from the stego alone.
//!
//! Framed messages start with a 32-bit big-endian body length. The length
//! is always carried by 16 parity-typed (BIND) edges, also under BYMOND:
//! parity types exist in practically every cover, whereas a byte-typed
//! header would need three edges whose degree sum is a multiple of 256 for
//! any message under 16 MiB.
//!
//! BIND bit order is MSB-first: byte `b` yields symbols `b>>6, b>>4, b>>2,
//! b` (each `& 3`), and in every symbol the high bit is the source parity
//! (`0` = even), so `01` travels on an `EO` edge.

use crate::classify::{edge_types, Algorithm};
use crate::edgelist::{compute_degrees, EdgeList};
use crate::error::{Error, Result};
use crate::keyperm::{permutation, StegoKey};

/// Edges spent on the length header.
pub const HEADER_EDGES: usize = 16;

/// Message body plus its length framing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Payload {
    body: Vec<u8>,
}

impl Payload {
    pub fn new(body: impl Into<Vec<u8>>) -> Result<Self> {
        let body = body.into();
        u32::try_from(body.len()).map_err(|_| Error::BodyTooLong(body.len()))?;
        Ok(Payload { body })
    }

    pub fn body(&self) -> &[u8] {
        &self.body
    }

    pub fn framed(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + self.body.len());
        out.extend_from_slice(&(self.body.len() as u32).to_be_bytes());
        out.extend_from_slice(&self.body);
        out
    }
}

#[derive(Debug, Clone)]
pub struct EncodeOutcome {
    pub stego: EdgeList,
    /// Edges that carry header or body symbols.
    pub used_edges: usize,
}

/// Splits bytes into the symbol stream of `algorithm`.
pub fn symbols(algorithm: Algorithm, bytes: &[u8]) -> impl Iterator<Item = u8> + '_ {
    let per_byte = algorithm.symbols_per_byte();
    let width = algorithm.bits_per_symbol();
    let mask = ((1u16 << width) - 1) as u8;
    bytes.iter().flat_map(move |&b| {
        (0..per_byte).map(move |k| {
            let shift = width as usize * (per_byte - 1 - k);
            ((b as u16 >> shift) as u8) & mask
        })
    })
}

pub(crate) fn header_symbols(len: u32) -> impl Iterator<Item = u8> {
    let bytes = len.to_be_bytes();
    (0..HEADER_EDGES).map(move |k| (bytes[k / 4] >> (6 - 2 * (k % 4))) & 3)
}

/// Walks a symbol stream against per-type supplies and returns the first
/// type that runs out, with the stream position where it happens.
pub fn first_shortfall<I>(supply: &[u64], symbols: I) -> Option<(u8, usize)>
where
    I: IntoIterator<Item = u8>,
{
    let mut used = vec![0u64; supply.len()];
    for (pos, s) in symbols.into_iter().enumerate() {
        let slot = &mut used[s as usize];
        if *slot == supply[s as usize] {
            return Some((s, pos));
        }
        *slot += 1;
    }
    None
}

/// FIFO queues of edge indices per type, skipping edges already taken.
struct Supply {
    queues: Vec<Vec<usize>>,
    heads: Vec<usize>,
}

impl Supply {
    fn new(types: &[u8], num_types: usize) -> Self {
        let mut queues = vec![Vec::new(); num_types];
        for (i, &t) in types.iter().enumerate() {
            queues[t as usize].push(i);
        }
        Supply {
            heads: vec![0; num_types],
            queues,
        }
    }

    fn pop(&mut self, t: u8, taken: &mut [bool]) -> Option<usize> {
        let q = &self.queues[t as usize];
        let head = &mut self.heads[t as usize];
        while *head < q.len() && taken[q[*head]] {
            *head += 1;
        }
        let idx = *q.get(*head)?;
        *head += 1;
        taken[idx] = true;
        Some(idx)
    }
}

fn embed(
    el: &EdgeList,
    algorithm: Algorithm,
    header: Option<u32>,
    body: &[u8],
    key: &StegoKey,
) -> Result<EncodeOutcome> {
    let n = el.len();
    if n == 0 {
        return Err(Error::EmptyEdgeList);
    }
    let header_edges = if header.is_some() { HEADER_EDGES } else { 0 };
    let needed = header_edges + body.len() * algorithm.symbols_per_byte();

    let deg = compute_degrees(el);
    let body_types = edge_types(el, &deg, algorithm);
    let mut body_supply = Supply::new(&body_types, algorithm.num_types());
    let mut taken = vec![false; n];
    let mut order = Vec::with_capacity(needed.min(n));

    // More symbols than edges always exhausts some type; that type is
    // reported alongside the size mismatch.
    let too_large = |err: Error| match err {
        Error::TypeExhausted { edge_type, .. } if needed > n => Error::MessageTooLarge {
            needed,
            available: n,
            edge_type,
        },
        other => other,
    };

    if let Some(len) = header {
        let mut parity_supply = match algorithm {
            Algorithm::Bind => None,
            Algorithm::Bymond => Some(Supply::new(&edge_types(el, &deg, Algorithm::Bind), 4)),
        };
        for (pos, s) in header_symbols(len).enumerate() {
            let supply = parity_supply.as_mut().unwrap_or(&mut body_supply);
            let idx = supply
                .pop(s, &mut taken)
                .ok_or(Error::TypeExhausted {
                    edge_type: Algorithm::Bind.edge_type(s),
                    position: pos,
                })
                .map_err(too_large)?;
            order.push(idx);
        }
    }
    for (pos, s) in symbols(algorithm, body).enumerate() {
        let idx = body_supply
            .pop(s, &mut taken)
            .ok_or(Error::TypeExhausted {
                edge_type: algorithm.edge_type(s),
                position: header_edges + pos,
            })
            .map_err(too_large)?;
        order.push(idx);
    }
    let used_edges = order.len();
    order.extend((0..n).filter(|&i| !taken[i]));

    let perm = permutation(key.seed(), n);
    let mut shuffled = vec![0usize; n];
    for (k, &p) in perm.iter().enumerate() {
        shuffled[p] = order[k];
    }
    Ok(EncodeOutcome {
        stego: el.select(&shuffled),
        used_edges,
    })
}

/// Hides `msg` (framed with its length) in the order of `el`.
pub fn encode(el: &EdgeList, algorithm: Algorithm, msg: &[u8], key: &StegoKey) -> Result<EncodeOutcome> {
    let payload = Payload::new(msg)?;
    embed(el, algorithm, Some(payload.body().len() as u32), payload.body(), key)
}

/// Encodes raw message symbols with no length header. The receiver must
/// learn the length out of band.
pub fn encode_unframed(el: &EdgeList, algorithm: Algorithm, msg: &[u8], key: &StegoKey) -> Result<EncodeOutcome> {
    embed(el, algorithm, None, msg, key)
}

/// Stego edges in message order, with a type lookup for each position.
struct Reader<'a> {
    stego: &'a EdgeList,
    perm: Vec<usize>,
    degrees: crate::edgelist::DegreeMap,
}

impl<'a> Reader<'a> {
    fn new(stego: &'a EdgeList, key: &StegoKey) -> Self {
        Reader {
            stego,
            perm: permutation(key.seed(), stego.len()),
            degrees: compute_degrees(stego),
        }
    }

    fn symbol(&self, algorithm: Algorithm, pos: usize) -> u8 {
        let e = self.stego.edge(self.perm[pos]);
        algorithm.classify(self.degrees.degree(e.src), self.degrees.degree(e.dst))
    }

    fn bytes(&self, algorithm: Algorithm, start: usize, len: usize) -> Vec<u8> {
        let per_byte = algorithm.symbols_per_byte();
        let width = algorithm.bits_per_symbol();
        (0..len)
            .map(|b| {
                (0..per_byte).fold(0u8, |acc, k| {
                    let s = self.symbol(algorithm, start + b * per_byte + k);
                    ((acc as u16) << width) as u8 | s
                })
            })
            .collect()
    }
}

/// Recovers a framed message. Uses only the stego, the algorithm and the key.
pub fn decode(stego: &EdgeList, algorithm: Algorithm, key: &StegoKey) -> Result<Vec<u8>> {
    if stego.len() < HEADER_EDGES {
        return Err(Error::CorruptOrWrongKey);
    }
    let reader = Reader::new(stego, key);
    let len_bytes = reader.bytes(Algorithm::Bind, 0, 4);
    let len = u32::from_be_bytes(len_bytes.try_into().expect("4 bytes")) as usize;
    let needed = len
        .checked_mul(algorithm.symbols_per_byte())
        .and_then(|s| s.checked_add(HEADER_EDGES))
        .ok_or(Error::CorruptOrWrongKey)?;
    if needed > stego.len() {
        return Err(Error::CorruptOrWrongKey);
    }
    Ok(reader.bytes(algorithm, HEADER_EDGES, len))
}

/// Recovers `len` bytes written by [`encode_unframed`].
pub fn decode_unframed(stego: &EdgeList, algorithm: Algorithm, key: &StegoKey, len: usize) -> Result<Vec<u8>> {
    if len * algorithm.symbols_per_byte() > stego.len() {
        return Err(Error::CorruptOrWrongKey);
    }
    Ok(Reader::new(stego, key).bytes(algorithm, 0, len))
}
