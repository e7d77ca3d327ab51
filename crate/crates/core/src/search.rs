//! Seed-space sweep: enumerate balanced seeds, compute and factor `|C|`,
//! stream one CSV row per seed and keep the largest prime seen per `N`.
//!
//! Seeds are evaluated in parallel chunks and written in enumeration order,
//! so the output only depends on the bounds. After every chunk a checkpoint
//! records the last completed seed and the CSV length, which makes an
//! interrupted run resumable with byte-identical output.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler::{compute_both, compute_c_direct};
use crate::factor::{factorize, format_factors, max_prime, parse_factors, product_of};
use crate::seed::{Block, SeedData};

pub const CSV_HEADER: [&str; 8] = [
    "n",
    "m",
    "blocks",
    "N",
    "len_x",
    "C_abs",
    "factors",
    "max_prime",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub n_min: usize,
    pub n_max: usize,
    pub m_max: usize,
    pub a_max: usize,
}

/// Every balanced seed within the bounds, exactly once, in lexicographic
/// order of `(n, m, k-vector, a-vector)`.
pub fn enumerate_seeds(bounds: SearchBounds) -> impl Iterator<Item = SeedData> {
    let n_lo = bounds.n_min.max(2);
    (n_lo..=bounds.n_max)
        .flat_map(move |n| (1..=bounds.m_max).map(move |m| (n, m)))
        .flat_map(move |(n, m)| seeds_for(n, m, bounds.a_max))
}

fn seeds_for(n: usize, m: usize, a_max: usize) -> Vec<SeedData> {
    let mut out = Vec::new();
    let mut ks = Vec::with_capacity(m);
    k_vectors(n, m, a_max, &mut ks, &mut |ks| {
        let total: usize = ks.iter().map(|k| n - k).sum();
        let mut parts = Vec::with_capacity(m);
        compositions(total, m, &mut parts, &mut |parts| {
            let blocks = ks
                .iter()
                .zip(parts)
                .map(|(&k, &a)| Block { k, a })
                .collect();
            out.push(SeedData::new(n, blocks).expect("enumerated seeds are balanced"));
        });
    });
    out
}

/// k-vectors in lexicographic order with `Σ (n - k_i) <= budget`.
fn k_vectors(
    n: usize,
    m: usize,
    budget: usize,
    ks: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if ks.len() == m {
        emit(ks);
        return;
    }
    let slots_after = m - ks.len() - 1;
    for k in 1..n {
        let len = n - k;
        // each later block needs length >= 1
        if len + slots_after > budget {
            continue;
        }
        ks.push(k);
        k_vectors(n, m, budget - len, ks, emit);
        ks.pop();
    }
}

/// Compositions of `total` into `m` positive parts, lexicographically.
fn compositions(total: usize, m: usize, parts: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    if parts.len() + 1 == m {
        if total >= 1 {
            parts.push(total);
            emit(parts);
            parts.pop();
        }
        return;
    }
    let slots_after = m - parts.len() - 1;
    for first in 1..=total.saturating_sub(slots_after) {
        parts.push(first);
        compositions(total - first, m, parts, emit);
        parts.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchRecord {
    pub seed: SeedData,
    pub big_n: usize,
    pub len_x: usize,
    pub c_abs: BigUint,
    pub factors: Vec<(BigUint, u32)>,
}

impl SearchRecord {
    pub fn max_prime(&self) -> Option<&BigUint> {
        max_prime(&self.factors)
    }

    fn csv_row(&self) -> [String; 8] {
        [
            self.seed.n().to_string(),
            self.seed.m().to_string(),
            self.seed.compact_blocks(),
            self.big_n.to_string(),
            self.len_x.to_string(),
            self.c_abs.to_string(),
            format_factors(&self.factors),
            self.max_prime().map(|p| p.to_string()).unwrap_or_default(),
        ]
    }
}

/// Computes `|C|` by both routes (aborting on disagreement) and factors it.
pub fn evaluate_seed(seed: &SeedData) -> Result<SearchRecord> {
    let routes = compute_both(seed)?;
    let c = routes.abs();
    let factors = if c.is_zero() {
        Vec::new()
    } else {
        factorize(&c)?
    };
    Ok(SearchRecord {
        seed: seed.clone(),
        big_n: seed.ambient(),
        len_x: seed.expected_x_length(),
        c_abs: c.magnitude().clone(),
        factors,
    })
}

/// The largest prime factor of `|C|` seen at each `N`, with the first seed
/// (in enumeration order) attaining it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecordTable {
    best: BTreeMap<usize, (BigUint, SeedData)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordRow {
    #[serde(rename = "N")]
    pub big_n: usize,
    pub max_prime: String,
    pub running_max: String,
    pub n: usize,
    pub blocks: String,
}

impl RecordTable {
    pub fn observe(&mut self, rec: &SearchRecord) {
        let Some(p) = rec.max_prime() else { return };
        match self.best.get(&rec.big_n) {
            Some((q, _)) if q >= p => {}
            _ => {
                self.best.insert(rec.big_n, (p.clone(), rec.seed.clone()));
            }
        }
    }

    /// One row per `N`, with the running maximum over all `N' <= N`, which
    /// is weakly increasing by construction.
    pub fn rows(&self) -> Vec<RecordRow> {
        let mut running = BigUint::zero();
        self.best
            .iter()
            .map(|(&big_n, (p, seed))| {
                if *p > running {
                    running = p.clone();
                }
                RecordRow {
                    big_n,
                    max_prime: p.to_string(),
                    running_max: running.to_string(),
                    n: seed.n(),
                    blocks: seed.compact_blocks(),
                }
            })
            .collect()
    }

    fn from_rows(rows: &[RecordRow]) -> Result<Self> {
        let mut best = BTreeMap::new();
        for r in rows {
            let seed = SeedData::parse_compact(r.n, &r.blocks).map_err(Error::Checkpoint)?;
            let p: BigUint = r
                .max_prime
                .parse()
                .map_err(|_| Error::Checkpoint(format!("bad prime {:?}", r.max_prime)))?;
            best.insert(r.big_n, (p, seed));
        }
        Ok(Self { best })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_path(path)
            .map_err(csv_err)?;
        w.write_record(["N", "max_prime", "running_max", "n", "blocks"])
            .map_err(csv_err)?;
        for row in self.rows() {
            w.serialize(row).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Checkpoint {
    pub bounds: SearchBounds,
    pub completed: u64,
    pub last_seed: Option<SeedData>,
    pub csv_bytes: u64,
    pub records: Vec<RecordRow>,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    fn store(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string_pretty(self)? + "\n")?;
        fs::rename(tmp, path)?;
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub out: PathBuf,
    pub checkpoint: PathBuf,
    pub records: PathBuf,
    pub resume_from: Option<PathBuf>,
    pub chunk_size: usize,
    /// Stop after this many seeds in this invocation, as if interrupted.
    pub stop_after: Option<u64>,
    pub threads: Option<usize>,
    /// Progress lines with elapsed time on stderr.
    pub timestamps: bool,
}

impl SearchOptions {
    /// Checkpoint and record table next to `out`.
    pub fn new(out: impl Into<PathBuf>) -> Self {
        let out = out.into();
        let mut checkpoint = out.clone().into_os_string();
        checkpoint.push(".checkpoint.json");
        let mut records = out.clone().into_os_string();
        records.push(".records.csv");
        Self {
            out,
            checkpoint: checkpoint.into(),
            records: records.into(),
            resume_from: None,
            chunk_size: 64,
            stop_after: None,
            threads: None,
            timestamps: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchSummary {
    pub completed: u64,
    pub processed_now: u64,
    pub finished: bool,
    pub records: RecordTable,
}

fn csv_err(e: csv::Error) -> Error {
    Error::RecordFile(e.to_string())
}

pub fn run_search(bounds: SearchBounds, opts: &SearchOptions) -> Result<SearchSummary> {
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(t) = opts.threads {
            b = b.num_threads(t);
        }
        b.build()
            .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?
    };
    let start = Instant::now();

    let (mut file, mut state) = match &opts.resume_from {
        Some(cp_path) => {
            let cp = Checkpoint::load(cp_path)?;
            if cp.bounds != bounds {
                return Err(Error::Checkpoint(format!(
                    "checkpoint bounds {:?} differ from requested {:?}",
                    cp.bounds, bounds
                )));
            }
            let mut f = OpenOptions::new().read(true).write(true).open(&opts.out)?;
            let len = f.metadata()?.len();
            if len < cp.csv_bytes {
                return Err(Error::Checkpoint(format!(
                    "{} holds {len} bytes but the checkpoint expects {}",
                    opts.out.display(),
                    cp.csv_bytes
                )));
            }
            // drop rows written after the last checkpoint
            f.set_len(cp.csv_bytes)?;
            f.seek(SeekFrom::End(0))?;
            (f, cp)
        }
        None => {
            let mut f = File::create(&opts.out)?;
            let mut header = csv::Writer::from_writer(Vec::new());
            header.write_record(CSV_HEADER).map_err(csv_err)?;
            let bytes = header
                .into_inner()
                .map_err(|e| Error::RecordFile(e.to_string()))?;
            f.write_all(&bytes)?;
            f.flush()?;
            let cp = Checkpoint {
                bounds,
                completed: 0,
                last_seed: None,
                csv_bytes: bytes.len() as u64,
                records: Vec::new(),
            };
            cp.store(&opts.checkpoint)?;
            (f, cp)
        }
    };
    let mut records = RecordTable::from_rows(&state.records)?;

    let mut seeds = enumerate_seeds(bounds).skip(state.completed as usize);
    if let (Some(last), Some(expected)) = (state.last_seed.as_ref(), state.completed.checked_sub(1))
    {
        let check = enumerate_seeds(bounds).nth(expected as usize);
        if check.as_ref() != Some(last) {
            return Err(Error::Checkpoint(format!(
                "seed #{} is {:?}, checkpoint says {last}",
                expected + 1,
                check
            )));
        }
    }

    let chunk = opts.chunk_size.max(1);
    let mut processed_now = 0u64;
    let mut finished = false;
    loop {
        let allowance = match opts.stop_after {
            Some(limit) => (limit - processed_now).min(chunk as u64) as usize,
            None => chunk,
        };
        if allowance == 0 {
            break;
        }
        let batch: Vec<SeedData> = seeds.by_ref().take(allowance).collect();
        if batch.is_empty() {
            finished = true;
            break;
        }
        let results: Vec<SearchRecord> =
            pool.install(|| batch.par_iter().map(evaluate_seed).collect::<Result<_>>())?;

        let mut writer = csv::Writer::from_writer(BufWriter::new(&mut file));
        for rec in &results {
            writer.write_record(rec.csv_row()).map_err(csv_err)?;
            records.observe(rec);
        }
        writer.flush()?;
        drop(writer);
        file.sync_data()?;

        processed_now += results.len() as u64;
        state.completed += results.len() as u64;
        state.last_seed = results.last().map(|r| r.seed.clone());
        state.csv_bytes = file.stream_position()?;
        state.records = records.rows();
        state.store(&opts.checkpoint)?;
        if opts.timestamps {
            eprintln!(
                "[{:>9.3}s] {} seeds done, last {}",
                start.elapsed().as_secs_f64(),
                state.completed,
                state
                    .last_seed
                    .as_ref()
                    .map(|s| s.to_string())
                    .unwrap_or_default()
            );
        }
    }
    if !finished && opts.stop_after.is_some() && seeds.next().is_none() {
        finished = true;
    }
    records.write_csv(&opts.records)?;
    Ok(SearchSummary {
        completed: state.completed,
        processed_now,
        finished,
        records,
    })
}

/// Re-reads a record file and recomputes every `|C|` with the direct route.
/// Returns the number of rows verified.
pub fn replay_records(path: &Path) -> Result<usize> {
    let mut rdr = csv::Reader::from_path(path).map_err(csv_err)?;
    let mut count = 0;
    for row in rdr.records() {
        let row = row.map_err(csv_err)?;
        let field = |k: usize| row.get(k).unwrap_or_default();
        let bad = |why: String| Error::RecordFile(format!("row {}: {why}", count + 1));
        let n: usize = field(0).parse().map_err(|_| bad("bad n".into()))?;
        let seed = SeedData::parse_compact(n, field(2)).map_err(bad)?;
        let c_abs: BigUint = field(5).parse().map_err(|_| bad("bad C_abs".into()))?;
        let factors = parse_factors(field(6)).map_err(bad)?;
        let recomputed = compute_c_direct(&seed)?;
        if *recomputed.magnitude() != c_abs {
            return Err(bad(format!(
                "{seed}: recorded |C| = {c_abs}, recomputed {recomputed}"
            )));
        }
        if !c_abs.is_zero() && product_of(&factors) != c_abs {
            return Err(bad(format!(
                "factors {} do not multiply to {c_abs}",
                field(6)
            )));
        }
        if field(3) != seed.ambient().to_string() {
            return Err(bad("N does not match the seed".into()));
        }
        count += 1;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bounds(n_min: usize, n_max: usize, m_max: usize, a_max: usize) -> SearchBounds {
        SearchBounds {
            n_min,
            n_max,
            m_max,
            a_max,
        }
    }

    #[test]
    fn single_seed_space() {
        let v: Vec<_> = enumerate_seeds(bounds(2, 2, 1, 1)).collect();
        assert_eq!(v, vec![SeedData::from_pairs(2, &[(1, 1)]).unwrap()]);
    }

    #[test]
    fn two_seed_space() {
        let v: Vec<_> = enumerate_seeds(bounds(2, 2, 2, 2)).collect();
        assert_eq!(
            v,
            vec![
                SeedData::from_pairs(2, &[(1, 1)]).unwrap(),
                SeedData::from_pairs(2, &[(1, 1), (1, 1)]).unwrap(),
            ]
        );
    }

    #[test]
    fn enumeration_is_sorted_and_unique() {
        let v: Vec<_> = enumerate_seeds(bounds(2, 4, 3, 5)).collect();
        let key = |s: &SeedData| {
            (
                s.n(),
                s.m(),
                s.blocks().iter().map(|b| b.k).collect::<Vec<_>>(),
                s.blocks().iter().map(|b| b.a).collect::<Vec<_>>(),
            )
        };
        for w in v.windows(2) {
            assert!(key(&w[0]) < key(&w[1]), "{} !< {}", w[0], w[1]);
        }
    }

    #[test]
    fn record_table_keeps_first_maximum() {
        let mut t = RecordTable::default();
        let rec = |pairs: &[(usize, usize)], p: u32| SearchRecord {
            seed: SeedData::from_pairs(3, pairs).unwrap(),
            big_n: 5,
            len_x: 5,
            c_abs: BigUint::from(p),
            factors: vec![(BigUint::from(p), 1)],
        };
        t.observe(&rec(&[(1, 2)], 3));
        t.observe(&rec(&[(2, 1), (2, 1)], 3));
        let rows = t.rows();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].blocks, "1:2");
    }
}
