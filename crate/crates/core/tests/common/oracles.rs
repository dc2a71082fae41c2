//! Brute-force reference implementations, written without reusing any of
//! the library's helpers.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

/// −Σ p·log2 p over token frequencies, counted by linear scan.
pub fn entropy(tokens: &[String]) -> f64 {
    let n = tokens.len() as f64;
    let mut seen: Vec<&String> = Vec::new();
    let mut h = 0.0;
    for t in tokens {
        if seen.contains(&t) {
            continue;
        }
        seen.push(t);
        let c = tokens.iter().filter(|u| *u == t).count() as f64;
        h -= (c / n) * (c / n).log2();
    }
    h
}

pub fn jaccard(a: &[String], b: &[String]) -> f64 {
    let mut union: Vec<&String> = Vec::new();
    for t in a.iter().chain(b) {
        if !union.contains(&t) {
            union.push(t);
        }
    }
    let inter = union.iter().filter(|t| a.contains(t) && b.contains(t)).count();
    inter as f64 / union.len() as f64
}

pub fn hamming(a: &[String], b: &[String]) -> usize {
    let mut d = 0;
    for i in 0..a.len() {
        if a[i] != b[i] {
            d += 1;
        }
    }
    d
}

/// Index of the first center at minimum distance.
pub fn argmin_center(record: &[String], centers: &[Vec<String>]) -> usize {
    let dists: Vec<usize> = centers.iter().map(|c| hamming(record, c)).collect();
    let min = *dists.iter().min().unwrap();
    dists.iter().position(|&d| d == min).unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub n_g: usize,
    pub n_p: usize,
    pub n_c: usize,
    pub ga: f64,
    pub pga: f64,
    pub rga: f64,
    pub fga: f64,
}

/// Grouping metrics by comparing line-id sets directly: a parsed group is
/// correct iff its set of lines equals some ground-truth group's set.
pub fn metrics(parsed: &[(usize, String)], truth: &[(usize, String)]) -> Metrics {
    fn groups(rows: &[(usize, String)]) -> Vec<BTreeSet<usize>> {
        let mut by: BTreeMap<&str, BTreeSet<usize>> = BTreeMap::new();
        for (l, e) in rows {
            by.entry(e.as_str()).or_default().insert(*l);
        }
        by.into_values().collect()
    }
    let pg = groups(parsed);
    let tg = groups(truth);
    let correct: Vec<&BTreeSet<usize>> = pg.iter().filter(|g| tg.contains(g)).collect();
    let n_c = correct.len();
    let lines: usize = correct.iter().map(|g| g.len()).sum();
    let ga = if parsed.is_empty() {
        0.0
    } else {
        lines as f64 / parsed.len() as f64
    };
    let pga = if pg.is_empty() {
        0.0
    } else {
        n_c as f64 / pg.len() as f64
    };
    let rga = if tg.is_empty() {
        0.0
    } else {
        n_c as f64 / tg.len() as f64
    };
    let fga = if pga + rga > 0.0 {
        2.0 * pga * rga / (pga + rga)
    } else {
        0.0
    };
    Metrics {
        n_g: tg.len(),
        n_p: pg.len(),
        n_c,
        ga,
        pga,
        rga,
        fga,
    }
}
