//! Stand-alone witness checker for bound records.
//!
//! Works on the textual strands with its own distance routines so that a
//! defect in the search path cannot vouch for itself.

use std::collections::HashSet;

use super::{BoundKey, BoundRecord, Metric, Variant};
use crate::z4::Base;

fn complement_char(c: u8) -> u8 {
    match c {
        b'A' => b'T',
        b'T' => b'A',
        b'C' => b'G',
        b'G' => b'C',
        other => other,
    }
}

fn image(variant: Variant, word: &[u8]) -> Vec<u8> {
    match variant {
        Variant::Plain => word.to_vec(),
        Variant::R => word.iter().rev().copied().collect(),
        Variant::RC => word.iter().rev().map(|&c| complement_char(c)).collect(),
    }
}

fn base_of(c: u8) -> Base {
    Base::from_char(c as char).expect("validated strand")
}

/// Full-table edit distance, no row rolling, no fast paths.
fn table_edit(s: &[u8], t: &[u8], metric: &Metric) -> f64 {
    let Metric::Edit(cm) = metric else { unreachable!() };
    let mut table = vec![vec![0.0f64; t.len() + 1]; s.len() + 1];
    for i in 1..=s.len() {
        table[i][0] = table[i - 1][0] + cm.deletion(base_of(s[i - 1]));
    }
    for j in 1..=t.len() {
        table[0][j] = table[0][j - 1] + cm.insertion(base_of(t[j - 1]));
    }
    for i in 1..=s.len() {
        for j in 1..=t.len() {
            let a = base_of(s[i - 1]);
            let b = base_of(t[j - 1]);
            let options = [
                table[i - 1][j - 1] + cm.substitution(a, b),
                table[i - 1][j] + cm.deletion(a),
                table[i][j - 1] + cm.insertion(b),
            ];
            table[i][j] = options.into_iter().fold(f64::INFINITY, f64::min);
        }
    }
    table[s.len()][t.len()]
}

fn distance(s: &[u8], t: &[u8], metric: &Metric) -> f64 {
    match metric {
        Metric::Hamming => {
            let mut diff = s.len().abs_diff(t.len());
            for k in 0..s.len().min(t.len()) {
                if s[k] != t[k] {
                    diff += 1;
                }
            }
            diff as f64
        }
        Metric::Edit(_) => table_edit(s, t, metric),
    }
}

fn meets(value: f64, d: usize, metric: &Metric) -> bool {
    match metric {
        Metric::Hamming => value + 0.5 > d as f64,
        Metric::Edit(cm) => value >= d as f64 - cm.tolerance(),
    }
}

/// Checks `words` against every constraint of `key`. Returns the list of
/// violations, empty when the code is valid.
pub fn check_code(key: &BoundKey, words: &[String]) -> Vec<String> {
    let mut problems = Vec::new();
    let mut seen = HashSet::new();
    for w in words {
        let bytes = w.as_bytes();
        if bytes.len() != key.n {
            problems.push(format!("{w}: length {} != {}", bytes.len(), key.n));
        }
        if let Some(c) = bytes.iter().find(|c| !b"ACGT".contains(c)) {
            problems.push(format!("{w}: symbol {:?}", *c as char));
            return problems;
        }
        if let Some(target) = key.w {
            let gc = bytes.iter().filter(|&&c| c == b'G' || c == b'C').count();
            if gc != target {
                problems.push(format!("{w}: GC weight {gc} != {target}"));
            }
        }
        if !seen.insert(bytes.to_vec()) {
            problems.push(format!("{w}: duplicate"));
        }
    }
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            let dist = distance(words[i].as_bytes(), words[j].as_bytes(), &key.metric);
            if key.d > 0 && !meets(dist, key.d, &key.metric) {
                problems.push(format!("d({}, {}) = {dist} < {}", words[i], words[j], key.d));
            }
        }
    }
    if key.variant != Variant::Plain {
        for w in words {
            let img = image(key.variant, w.as_bytes());
            if key.cross_distance {
                for other in words {
                    let dist = distance(&img, other.as_bytes(), &key.metric);
                    if key.d > 0 && !meets(dist, key.d, &key.metric) {
                        problems.push(format!(
                            "d({}({w}), {other}) = {dist} < {}",
                            key.variant, key.d
                        ));
                    }
                }
            } else if !seen.contains(&img) {
                problems.push(format!("{w}: {} image {} missing", key.variant, String::from_utf8_lossy(&img)));
            }
        }
    }
    problems
}

/// Checks a record's witness and its consistency with the stated bounds.
pub fn check_record(record: &BoundRecord) -> Vec<String> {
    let words: Vec<String> = record.witness.iter().map(|s| s.to_string()).collect();
    let mut problems = check_code(&record.key, &words);
    if words.len() as u64 != record.lower {
        problems.push(format!("witness has {} words, lower bound says {}", words.len(), record.lower));
    }
    if record.lower > record.upper {
        problems.push(format!("lower {} > upper {}", record.lower, record.upper));
    }
    problems
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::BoundKey;

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn detects_each_kind_of_violation() {
        let key = BoundKey::gc(4, 2, 2, Metric::unit_edit()).with_variant(Variant::R);
        assert!(check_code(&key, &strs(&["GAAC", "CAAG"])).is_empty());
        assert!(!check_code(&key, &strs(&["GAAC"])).is_empty());
        assert!(!check_code(&key, &strs(&["GAAC", "CAAG", "GAAG"])).is_empty());
        assert!(!check_code(&key, &strs(&["GGGA"])).is_empty());
        let plain = BoundKey::gc(4, 2, 2, Metric::Hamming);
        assert!(!check_code(&plain, &strs(&["GAAC", "GAAG"])).is_empty());
        assert!(!check_code(&plain, &strs(&["GAAC", "GAAC"])).is_empty());
        assert!(check_code(&plain, &strs(&["GAAC", "CTAG"])).is_empty());
    }

    #[test]
    fn table_edit_examples() {
        let m = Metric::unit_edit();
        assert_eq!(table_edit(b"GGGG", b"GCGC", &m), 2.0);
        assert_eq!(table_edit(b"ACTG", b"ATG", &m), 1.0);
        assert_eq!(table_edit(b"", b"ACG", &m), 3.0);
    }
}
