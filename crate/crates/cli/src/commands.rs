use std::fs::{self, File};
use std::io::BufReader;
use std::path::Path;

use anyhow::{Context, Result};
use netsteg::bynis::{ba_degree_sequence, bynis_decode, bynis_encode, ReferenceDegrees};
use netsteg::classify::capacity_from_path;
use netsteg::codec::{decode_unframed, encode_unframed};
use netsteg::edgelist::{
    degree_sequence, read_edge_list_file, write_edge_list, EdgeList, ParseOptions, ParseStats, WriteOptions,
    DEFAULT_RUN_CAPACITY,
};
use netsteg::simulate::{parse_r_values, run_trials, SimConfig, SimReport};
use netsteg::stats::ks_two_sample;
use netsteg::{decode, encode, Algorithm, StegoKey};

use crate::args::*;
use crate::output::{check_output, key_value_table, parse_delimiter, render, write_out};
use crate::UsageError;

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Capacity(a) => capacity(a),
        Command::Encode(a) => encode_cmd(a),
        Command::Decode(a) => decode_cmd(a),
        Command::Synthesize(a) => synthesize(a),
        Command::Extract(a) => extract(a),
        Command::Simulate(a) => simulate(a),
        Command::CompareDegrees(a) => compare(a),
    }
}

fn parse_opts(csv: &CsvArgs) -> Result<ParseOptions, UsageError> {
    Ok(ParseOptions {
        delimiter: parse_delimiter(&csv.delimiter)?,
        has_header: csv.header,
    })
}

fn key(p: &PasswordArgs) -> Result<StegoKey, UsageError> {
    p.password
        .as_deref()
        .map(StegoKey::new)
        .ok_or_else(|| UsageError("a password is required: pass --password or set NETSTEG_PASSWORD".into()))
}

fn read_list(path: &Path, opts: &ParseOptions) -> Result<(EdgeList, ParseStats)> {
    let (el, stats) = read_edge_list_file(path, opts).with_context(|| format!("reading {}", path.display()))?;
    if stats.extra_field_rows > 0 {
        eprintln!(
            "warning: {}: {} rows had more than two fields; extra fields were dropped",
            path.display(),
            stats.extra_field_rows
        );
    }
    Ok((el, stats))
}

fn edge_list_bytes(el: &EdgeList, delimiter: u8, header: Option<Vec<u8>>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_edge_list(el, &mut buf, &WriteOptions { delimiter, header })?;
    Ok(buf)
}

fn read_message(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading message {}", path.display()))
}

fn capacity(a: CapacityArgs) -> Result<()> {
    let opts = parse_opts(&a.csv)?;
    check_output(a.out.as_deref(), &[&a.cover])?;
    let report = capacity_from_path(&a.cover, &opts, a.algo.into(), DEFAULT_RUN_CAPACITY)
        .with_context(|| format!("reading {}", a.cover.display()))?;
    let text = render(&report, a.format, || report.to_csv(), || report.to_string())?;
    write_out(a.out.as_deref(), text.as_bytes())
}

fn encode_cmd(a: EncodeArgs) -> Result<()> {
    let opts = parse_opts(&a.csv)?;
    let key = key(&a.password)?;
    check_output(a.out.as_deref(), &[&a.cover, &a.message])?;
    let algorithm: Algorithm = a.algo.into();
    let (cover, stats) = read_list(&a.cover, &opts)?;
    let msg = read_message(&a.message)?;
    let outcome = if a.unframed {
        encode_unframed(&cover, algorithm, &msg, &key)?
    } else {
        encode(&cover, algorithm, &msg, &key)?
    };
    eprintln!(
        "encoded {} bytes with {algorithm} into {} of {} edges",
        msg.len(),
        outcome.used_edges,
        cover.len()
    );
    let bytes = edge_list_bytes(&outcome.stego, opts.delimiter, stats.header)?;
    write_out(a.out.as_deref(), &bytes)
}

fn decode_cmd(a: DecodeArgs) -> Result<()> {
    let opts = parse_opts(&a.csv)?;
    let key = key(&a.password)?;
    check_output(a.out.as_deref(), &[&a.stego])?;
    let algorithm: Algorithm = a.algo.into();
    let (stego, _) = read_list(&a.stego, &opts)?;
    let msg = match a.length {
        Some(len) => decode_unframed(&stego, algorithm, &key, len)?,
        None => decode(&stego, algorithm, &key)?,
    };
    write_out(a.out.as_deref(), &msg)
}

enum ReferenceSource<'a> {
    File(&'a Path),
    Ba { n: usize, m: usize, seed: u64 },
}

fn parse_reference(text: &str) -> Result<ReferenceSource<'_>, UsageError> {
    let Some(params) = text.strip_prefix("ba:") else {
        return Ok(ReferenceSource::File(Path::new(text)));
    };
    let (mut n, mut m, mut seed) = (None, None, 0u64);
    for kv in params.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| UsageError(format!("expected key=value in --ref, got '{kv}'")))?;
        let bad = || UsageError(format!("bad value for '{k}' in --ref: '{v}'"));
        match k.trim() {
            "n" => n = Some(v.trim().parse().map_err(|_| bad())?),
            "m" => m = Some(v.trim().parse().map_err(|_| bad())?),
            "seed" => seed = v.trim().parse().map_err(|_| bad())?,
            other => return Err(UsageError(format!("unknown --ref parameter '{other}'"))),
        }
    }
    match (n, m) {
        (Some(n), Some(m)) => Ok(ReferenceSource::Ba { n, m, seed }),
        _ => Err(UsageError("--ref ba: needs n=<nodes> and m=<edges per node>".into())),
    }
}

fn synthesize(a: SynthesizeArgs) -> Result<()> {
    let delimiter = parse_delimiter(&a.delimiter)?;
    let source = parse_reference(&a.reference)?;
    let mut inputs = vec![a.message.as_path()];
    if let ReferenceSource::File(p) = source {
        inputs.push(p);
    }
    check_output(a.out.as_deref(), &inputs)?;
    let reference = match source {
        ReferenceSource::File(p) => {
            let f = File::open(p).with_context(|| format!("reading {}", p.display()))?;
            ReferenceDegrees::from_reader(BufReader::new(f)).with_context(|| format!("reading {}", p.display()))?
        }
        ReferenceSource::Ba { n, m, seed } => ba_degree_sequence(n, m, seed)?,
    };
    let msg = read_message(&a.message)?;
    let el = bynis_encode(&msg, &reference, a.bias)?;
    eprintln!(
        "synthesized {} edges over {} nodes from reference {}",
        el.len(),
        el.node_count(),
        reference.source()
    );
    write_out(a.out.as_deref(), &edge_list_bytes(&el, delimiter, None)?)
}

fn extract(a: ExtractArgs) -> Result<()> {
    let opts = parse_opts(&a.csv)?;
    check_output(a.out.as_deref(), &[&a.stego])?;
    if a.bias < netsteg::bynis::DEFAULT_BIAS {
        return Err(netsteg::Error::BiasTooSmall(a.bias).into());
    }
    let (el, _) = read_list(&a.stego, &opts)?;
    write_out(a.out.as_deref(), &bynis_decode(&el, a.bias)?)
}

fn simulation_table(report: &SimReport) -> String {
    let mut out = format!(
        "algorithm {}  edges {}  E_min {} ({})  trials {}  seed {}{}\n\n{:>6}  {:>10}  {:>10}  {:>8}  {}\n",
        report.algorithm,
        report.edges,
        report.e_min,
        report.e_min_type,
        report.trials,
        report.meta_seed,
        if report.framed { "  framed" } else { "" },
        "R",
        "bytes",
        "successes",
        "rate",
        "most failures"
    );
    for p in &report.points {
        let top = p
            .failures
            .values
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .max_by_key(|&(i, &c)| (c, std::cmp::Reverse(i)))
            .map(|(i, &c)| format!("{} ({c})", report.algorithm.edge_type(i as u8)))
            .unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "{:>6}  {:>10}  {:>10}  {:>8.4}  {top}\n",
            p.r, p.message_bytes, p.successes, p.success_rate
        ));
    }
    out
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let opts = parse_opts(&a.csv)?;
    let r_values = parse_r_values(&a.r).map_err(|e| UsageError(e.to_string()))?;
    let mut cfg = SimConfig::new(a.algo.into(), r_values, a.trials, a.seed);
    cfg.framed = a.framed;
    cfg.validate().map_err(|e| UsageError(e.to_string()))?;
    check_output(a.out.as_deref(), &[&a.cover])?;
    let (cover, _) = read_list(&a.cover, &opts)?;
    let report = run_trials(&cover, &cfg)?;
    let text = render(&report, a.format, || report.to_csv(), || simulation_table(&report))?;
    write_out(a.out.as_deref(), text.as_bytes())
}

fn compare(a: CompareArgs) -> Result<()> {
    let opts = parse_opts(&a.csv)?;
    check_output(a.out.as_deref(), &[&a.a, &a.b])?;
    let (la, _) = read_list(&a.a, &opts)?;
    let (lb, _) = read_list(&a.b, &opts)?;
    let result = ks_two_sample(&degree_sequence(&la), &degree_sequence(&lb))?;
    let text = render(
        &result,
        a.format,
        || {
            format!(
                "d,p,n_a,n_b\n{},{},{},{}\n",
                result.d_stat, result.p_value, result.n_a, result.n_b
            )
        },
        || key_value_table(&serde_json::to_value(result).unwrap_or_default()),
    )?;
    write_out(a.out.as_deref(), text.as_bytes())
}
