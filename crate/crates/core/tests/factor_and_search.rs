//! Factorization against trial division, and the resumable sweep.

use std::fs;

use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use schubert_torsion::factor::{factorize, factorize_u64, product_of};
use schubert_torsion::search::{replay_records, Checkpoint, RecordTable};
use schubert_torsion::*;

fn trial_division(mut x: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= x {
        let mut e = 0;
        while x.is_multiple_of(p) {
            x /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if x > 1 {
        out.push((x, 1));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, ..ProptestConfig::default() })]

    // products of two 24-bit factors keep the oracle fast
    #[test]
    fn matches_trial_division(a in 2u64..1 << 24, b in 1u64..1 << 24) {
        prop_assert_eq!(factorize_u64(a * b).unwrap(), trial_division(a * b));
    }

    #[test]
    fn product_round_trips(x in 1u64..u64::MAX) {
        let f = factorize(&BigInt::from(x)).unwrap();
        prop_assert_eq!(product_of(&f), BigUint::from(x));
    }
}

fn bounds() -> SearchBounds {
    SearchBounds {
        n_min: 3,
        n_max: 3,
        m_max: 6,
        a_max: 6,
    }
}

fn opts(dir: &std::path::Path, name: &str) -> SearchOptions {
    let mut o = SearchOptions::new(dir.join(name));
    o.chunk_size = 7;
    o
}

#[test]
fn search_is_deterministic_and_resumable() {
    let dir = tempfile::tempdir().unwrap();
    let a = opts(dir.path(), "a.csv");
    let summary = run_search(bounds(), &a).unwrap();
    assert!(summary.finished);
    assert_eq!(
        summary.completed as usize,
        enumerate_seeds(bounds()).count()
    );

    let mut b = opts(dir.path(), "b.csv");
    b.threads = Some(1);
    b.chunk_size = 3;
    run_search(bounds(), &b).unwrap();
    assert_eq!(fs::read(&a.out).unwrap(), fs::read(&b.out).unwrap());
    assert_eq!(fs::read(&a.records).unwrap(), fs::read(&b.records).unwrap());

    // stop part way, leave a torn row behind, then resume
    let mut c = opts(dir.path(), "c.csv");
    c.stop_after = Some(20);
    let first = run_search(bounds(), &c).unwrap();
    assert!(!first.finished);
    assert_eq!(first.completed, 20);
    fs::OpenOptions::new()
        .append(true)
        .open(&c.out)
        .and_then(|mut f| std::io::Write::write_all(&mut f, b"3,2,1:1"))
        .unwrap();
    let cp = Checkpoint::load(&c.checkpoint).unwrap();
    assert_eq!(cp.completed, 20);
    c.stop_after = None;
    c.resume_from = Some(c.checkpoint.clone());
    let second = run_search(bounds(), &c).unwrap();
    assert!(second.finished);
    assert_eq!(fs::read(&a.out).unwrap(), fs::read(&c.out).unwrap());
    assert_eq!(fs::read(&a.records).unwrap(), fs::read(&c.records).unwrap());

    assert_eq!(replay_records(&a.out).unwrap(), summary.completed as usize);
}

#[test]
fn resume_rejects_other_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let mut o = opts(dir.path(), "x.csv");
    o.stop_after = Some(2);
    run_search(bounds(), &o).unwrap();
    o.resume_from = Some(o.checkpoint.clone());
    let other = SearchBounds {
        a_max: 5,
        ..bounds()
    };
    assert!(run_search(other, &o).is_err());
}

#[test]
fn replay_catches_a_tampered_row() {
    let dir = tempfile::tempdir().unwrap();
    let o = opts(dir.path(), "t.csv");
    run_search(
        SearchBounds {
            n_min: 4,
            n_max: 4,
            m_max: 3,
            a_max: 4,
        },
        &o,
    )
    .unwrap();
    let text = fs::read_to_string(&o.out).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    let mut fields: Vec<String> = lines[1].split(',').map(str::to_owned).collect();
    fields[5] = "7".into();
    fields[6] = "7^1".into();
    lines[1] = fields.join(",");
    fs::write(&o.out, lines.join("\n") + "\n").unwrap();
    assert!(replay_records(&o.out).is_err());
}

#[test]
fn record_table_is_monotone() {
    let mut t = RecordTable::default();
    for s in enumerate_seeds(SearchBounds {
        n_min: 2,
        n_max: 5,
        m_max: 5,
        a_max: 6,
    }) {
        t.observe(&schubert_torsion::search::evaluate_seed(&s).unwrap());
    }
    let rows = t.rows();
    let running: Vec<BigUint> = rows
        .iter()
        .map(|r| r.running_max.parse().unwrap())
        .collect();
    assert!(running.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn example_seed_is_enumerated_with_its_snapshot() {
    let example = SeedData::from_pairs(4, &[(2, 3), (3, 2), (2, 2), (1, 2), (1, 2)]).unwrap();
    let bounds = SearchBounds {
        n_min: 4,
        n_max: 4,
        m_max: 5,
        a_max: 11,
    };
    let hit = enumerate_seeds(bounds).find(|s| *s == example).unwrap();
    let rec = schubert_torsion::search::evaluate_seed(&hit).unwrap();
    assert_eq!(rec.big_n, 15);
    assert_eq!(rec.len_x, 77);
    assert_eq!(rec.c_abs, BigUint::from(2u32));
    assert_eq!(rec.factors, vec![(BigUint::from(2u32), 1)]);
}
