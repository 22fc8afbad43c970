//! Monte Carlo encoding trials over a grid of message-size ratios.
//!
//! For each ratio `R` the message holds `R` times the estimated maximum
//! number of symbols (`4·|E_min|` for BIND, `256·|E_min|` for BYMOND),
//! rounded down to whole bytes. A trial succeeds when no edge type is asked
//! for more symbols than the cover supplies; otherwise the first type to
//! run out is charged with the failure. That predicate is exactly the
//! condition under which the FIFO encoder succeeds, so trials never build a
//! stego list.

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{edge_types, Algorithm, CapacityReport, EdgeType, TypeMap};
use crate::codec::{first_shortfall, header_symbols, symbols, HEADER_EDGES};
use crate::edgelist::{compute_degrees, EdgeList};
use crate::error::{Error, Result};
use crate::keyperm::SplitMix64;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub algorithm: Algorithm,
    pub r_values: Vec<f64>,
    pub trials: usize,
    pub meta_seed: u64,
    /// Prepend the codec's 32-bit length header to every message.
    pub framed: bool,
}

impl SimConfig {
    pub fn new(algorithm: Algorithm, r_values: Vec<f64>, trials: usize, meta_seed: u64) -> Self {
        SimConfig {
            algorithm,
            r_values,
            trials,
            meta_seed,
            framed: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameters("trials must be at least 1".into()));
        }
        if self.r_values.is_empty() {
            return Err(Error::InvalidParameters("no R values".into()));
        }
        if let Some(r) = self.r_values.iter().find(|r| !(**r > 0.0 && **r <= 1.0)) {
            return Err(Error::InvalidParameters(format!("R = {r} is outside (0, 1]")));
        }
        Ok(())
    }
}

/// Evenly spaced ratios from `start` to `end` inclusive. The last point is
/// kept when floating-point drift leaves it within `step / 1000` of `end`.
pub fn r_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || start.is_nan() || end.is_nan() || start > end {
        return Err(Error::InvalidParameters(format!("bad grid {start}:{end}:{step}")));
    }
    let n = ((end - start) / step + 1e-3).floor() as usize;
    Ok((0..=n)
        .map(|i| {
            let r = start + step * i as f64;
            // Snap to 1e-9 so 0.7 + 5·0.05 prints as 0.95, not 0.9500000000000001.
            (r * 1e9).round() / 1e9
        })
        .collect())
}

/// Parses `start:end:step` or a comma-separated list of ratios.
pub fn parse_r_values(spec: &str) -> Result<Vec<f64>> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::InvalidParameters(format!("bad R value '{s}'")))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [start, end, step] => r_grid(num(start)?, num(end)?, num(step)?),
        [_] => spec.split(',').map(num).collect(),
        _ => Err(Error::InvalidParameters(format!("bad R spec '{spec}'"))),
    }
}

/// Message bytes for ratio `r`: `floor(r · num_types · e_min)` symbols,
/// rounded down to whole bytes.
pub fn message_len(algorithm: Algorithm, e_min: u64, r: f64) -> usize {
    let symbols = r * (algorithm.num_types() as u64 * e_min) as f64;
    // The small slack keeps products like 0.7 · 20 from landing just below 14.
    ((symbols + 1e-9).floor() as usize) / algorithm.symbols_per_byte()
}

/// Seed of trial `trial`: the trial-th output of SplitMix64 seeded with
/// `meta_seed`. Trials with the same index share a seed across ratios.
pub fn trial_seed(meta_seed: u64, trial: usize) -> u64 {
    SplitMix64::nth_output(meta_seed, trial as u64)
}

/// Uniformly random message bytes drawn from the trial seed.
pub fn trial_message(meta_seed: u64, trial: usize, len: usize) -> Vec<u8> {
    let mut msg = vec![0u8; len];
    SplitMix64::new(trial_seed(meta_seed, trial)).fill_bytes(&mut msg);
    msg
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialOutcome {
    Success,
    /// The first exhausted type of the active algorithm.
    Exhausted(u8),
    /// Framed mode only: the length header ran out of parity-typed edges.
    HeaderExhausted(u8),
    /// Framed mode only: header plus body need more edges than the cover has.
    TooLarge,
}

/// Per-type supply of a cover, plus what a framed header leaves behind.
struct CoverModel {
    algorithm: Algorithm,
    edges: usize,
    types: Vec<u8>,
    parity_types: Vec<u8>,
    supply: Vec<u64>,
}

impl CoverModel {
    fn new(el: &EdgeList, algorithm: Algorithm) -> Self {
        let deg = compute_degrees(el);
        let types = edge_types(el, &deg, algorithm);
        let parity_types = match algorithm {
            Algorithm::Bind => Vec::new(),
            Algorithm::Bymond => edge_types(el, &deg, Algorithm::Bind),
        };
        let mut supply = vec![0u64; algorithm.num_types()];
        for &t in &types {
            supply[t as usize] += 1;
        }
        CoverModel {
            algorithm,
            edges: el.len(),
            types,
            parity_types,
            supply,
        }
    }

    /// Body supply left after the header of a `len`-byte message, or the
    /// parity type the header ran out of.
    fn after_header(&self, len: usize) -> std::result::Result<Vec<u64>, u8> {
        let header: Vec<u8> = header_symbols(len as u32).collect();
        match self.algorithm {
            Algorithm::Bind => {
                if let Some((t, _)) = first_shortfall(&self.supply, header.iter().copied()) {
                    return Err(t);
                }
                let mut left = self.supply.clone();
                for &s in &header {
                    left[s as usize] -= 1;
                }
                Ok(left)
            }
            Algorithm::Bymond => {
                // Header symbols take the earliest parity-typed edges in file
                // order; each one removes its byte type from the body supply.
                let mut need = [0usize; 4];
                for &s in &header {
                    need[s as usize] += 1;
                }
                let mut left = self.supply.clone();
                for (i, &p) in self.parity_types.iter().enumerate() {
                    if need[p as usize] > 0 {
                        need[p as usize] -= 1;
                        left[self.types[i] as usize] -= 1;
                    }
                }
                match need.iter().position(|&n| n > 0) {
                    // Report the first header symbol whose queue is short.
                    Some(_) => Err(
                        first_shortfall(&parity_supply(&self.parity_types), header.iter().copied())
                            .map(|(t, _)| t)
                            .expect("short parity queue"),
                    ),
                    None => Ok(left),
                }
            }
        }
    }
}

fn parity_supply(parity_types: &[u8]) -> Vec<u64> {
    let mut s = vec![0u64; 4];
    for &p in parity_types {
        s[p as usize] += 1;
    }
    s
}

/// Outcome of every trial at ratio `r`, in trial order.
pub fn trial_outcomes(el: &EdgeList, cfg: &SimConfig, r: f64) -> Result<Vec<TrialOutcome>> {
    cfg.validate()?;
    if el.is_empty() {
        return Err(Error::EmptyEdgeList);
    }
    let model = CoverModel::new(el, cfg.algorithm);
    Ok(outcomes_at(&model, cfg, r).1)
}

fn outcomes_at(model: &CoverModel, cfg: &SimConfig, r: f64) -> (usize, Vec<TrialOutcome>) {
    let algorithm = model.algorithm;
    let e_min = *model.supply.iter().min().expect("nonempty supply");
    let len = message_len(algorithm, e_min, r);

    let body_supply = if cfg.framed {
        if HEADER_EDGES + len * algorithm.symbols_per_byte() > model.edges {
            return (len, vec![TrialOutcome::TooLarge; cfg.trials]);
        }
        match model.after_header(len) {
            Ok(left) => left,
            Err(t) => return (len, vec![TrialOutcome::HeaderExhausted(t); cfg.trials]),
        }
    } else {
        model.supply.clone()
    };

    let outcomes = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let msg = trial_message(cfg.meta_seed, trial, len);
            match first_shortfall(&body_supply, symbols(algorithm, &msg)) {
                None => TrialOutcome::Success,
                Some((t, _)) => TrialOutcome::Exhausted(t),
            }
        })
        .collect();
    (len, outcomes)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimPoint {
    pub r: f64,
    pub message_bytes: usize,
    pub message_bits: u64,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub failures: TypeMap<u64>,
    /// Share of all failures at this ratio charged to each type; all zero
    /// when every trial succeeded.
    pub failure_ratios: TypeMap<f64>,
    pub header_failures: u64,
    pub too_large: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub algorithm: Algorithm,
    pub edges: u64,
    pub e_min_type: EdgeType,
    pub e_min: u64,
    pub trials: usize,
    pub meta_seed: u64,
    pub framed: bool,
    pub points: Vec<SimPoint>,
}

impl SimReport {
    /// Columns `algo,R,trials,successes,rate`, then one failure count per
    /// type; framed reports add `header_failures,too_large`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("algo,R,trials,successes,rate");
        for i in 0..self.algorithm.num_types() {
            out.push_str(&format!(",fail_{}", self.algorithm.edge_type(i as u8)));
        }
        if self.framed {
            out.push_str(",header_failures,too_large");
        }
        out.push('\n');
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{}",
                self.algorithm, p.r, p.trials, p.successes, p.success_rate
            ));
            for c in &p.failures.values {
                out.push_str(&format!(",{c}"));
            }
            if self.framed {
                out.push_str(&format!(",{},{}", p.header_failures, p.too_large));
            }
            out.push('\n');
        }
        out
    }
}

pub fn run_trials(el: &EdgeList, cfg: &SimConfig) -> Result<SimReport> {
    cfg.validate()?;
    if el.is_empty() {
        return Err(Error::EmptyEdgeList);
    }
    let algorithm = cfg.algorithm;
    let model = CoverModel::new(el, algorithm);
    let capacity = CapacityReport::from_histogram(algorithm, model.supply.clone());

    let points = cfg
        .r_values
        .iter()
        .map(|&r| {
            let (len, outcomes) = outcomes_at(&model, cfg, r);
            let mut failures = vec![0u64; algorithm.num_types()];
            let (mut successes, mut header_failures, mut too_large) = (0usize, 0u64, 0u64);
            for o in outcomes {
                match o {
                    TrialOutcome::Success => successes += 1,
                    TrialOutcome::Exhausted(t) => failures[t as usize] += 1,
                    TrialOutcome::HeaderExhausted(_) => header_failures += 1,
                    TrialOutcome::TooLarge => too_large += 1,
                }
            }
            let typed: u64 = failures.iter().sum();
            let ratios = failures
                .iter()
                .map(|&c| if typed == 0 { 0.0 } else { c as f64 / typed as f64 })
                .collect();
            SimPoint {
                r,
                message_bytes: len,
                message_bits: len as u64 * 8,
                trials: cfg.trials,
                successes,
                success_rate: successes as f64 / cfg.trials as f64,
                failures: TypeMap {
                    algorithm,
                    values: failures,
                },
                failure_ratios: TypeMap {
                    algorithm,
                    values: ratios,
                },
                header_failures,
                too_large,
            }
        })
        .collect();

    Ok(SimReport {
        algorithm,
        edges: el.len() as u64,
        e_min_type: capacity.e_min_type,
        e_min: capacity.e_min,
        trials: cfg.trials,
        meta_seed: cfg.meta_seed,
        framed: cfg.framed,
        points,
    })
}
