//! Acceptance suite. Prints one line per criterion and fails if the set of
//! failing criteria differs from `EXPECTED_RED`.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::thread;
use std::time::{Duration, Instant};

use dnalex::bounds::relations::{check_relations, Outcome, Relation, RelationRange};
use dnalex::bounds::transforms::half_complement_experiment;
use dnalex::bounds::{Metric, Oracle, SearchBudget};
use dnalex::lexicode::{build_lexicode, LexicodeOptions, OrderedBasis};
use dnalex::metrics::{edit_distance, CostModel};
use dnalex::property::PropertySpec;
use dnalex::tables;
use dnalex::z4::{Base, DnaStrand, Z4Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TABLE1_DIAGONAL_LIMIT: Duration = Duration::from_secs(10);
const TABLE1_DENSE_LIMIT: Duration = Duration::from_secs(60);
const LINEARITY_SUITE_LIMIT: Duration = Duration::from_secs(120);
const HALF_COMPLEMENT_LIMIT: Duration = Duration::from_secs(60);
const LINEARITY_CONFIGS: usize = 200;
const RANDOM_PAIRS: usize = 10_000;
const RANDOM_TRIPLES: usize = 10_000;
const HALF_COMPLEMENT_PAIRS: usize = 500;
const EXACT: f64 = 0.0;
const SEED: u64 = 0x5eed;

/// Criteria known to fail, with the reason.
const EXPECTED_RED: &[(&str, &str)] = &[
    ("2[gc>=w]", "GC weight alone admits every GC-heavy vector: dH = 1 and the code is far larger than 64"),
    ("7[puncture]", "dropping an A/T symbol can raise distance-constrained counts, e.g. A(1,1,1)=2 < A(2,2,1)=4"),
    ("7[first-symbol-partition]", "removing a G/C first symbol changes GC weight, e.g. A(2,1,2)=4 < A(3,1,2)/4=6"),
    ("8[distance]", "half-complementing does not preserve edit distance; counterexamples are printed on the criterion line"),
];

struct Line {
    id: String,
    pass: bool,
    detail: String,
}

fn line(id: impl Into<String>, pass: bool, detail: impl Into<String>) -> Line {
    Line { id: id.into(), pass, detail: detail.into() }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

/// Coordinates holding residue 0 or 2 map to G or C.
fn gc(x: &Z4Vector) -> usize {
    x.coords().iter().filter(|&&c| c % 2 == 0).count()
}

fn span(n: usize, gens: &[Z4Vector]) -> BTreeSet<Vec<u8>> {
    let mut set = BTreeSet::from([vec![0u8; n]]);
    for g in gens {
        let g = g.coords();
        let mut next = BTreeSet::new();
        for c in &set {
            for u in 0..4u8 {
                next.insert(c.iter().zip(&g).map(|(a, b)| (a + u * b) % 4).collect::<Vec<u8>>());
            }
        }
        set = next;
    }
    set
}

fn criterion_1() -> Vec<Line> {
    let start = Instant::now();
    let rows = tables::table1().unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for row in rows.iter().filter(|r| r.number("n").unwrap() == r.number("w").unwrap()) {
        let (n, w) = (row.number("n").unwrap(), row.number("w").unwrap());
        let p = PropertySpec::parse(&format!("gc>={w}"), &CostModel::unit()).unwrap();
        let code = build_lexicode(&OrderedBasis::canonical(n).unwrap(), &p, &LexicodeOptions::default()).unwrap();
        let diagonal: Vec<Z4Vector> = (0..n).map(|i| Z4Vector::unit(n, i).unwrap().scale(2)).collect();
        let exact = code.generators() == row.generators.as_slice() && row.generators == diagonal;
        let params = code.size() == 1 << n && code.min_nonzero_weight() == Some(1);
        ok &= exact && params;
        notes.push(format!(
            "n={n} size={} dH={:?} diagonal-exact={exact}",
            code.size(),
            code.min_nonzero_weight()
        ));
    }
    let elapsed = start.elapsed();
    ok &= notes.len() == 2 && notes[0].starts_with("n=10") && notes[1].starts_with("n=12") && elapsed < TABLE1_DIAGONAL_LIMIT;
    vec![line("1", ok, format!("{} in {}", notes.join("; "), secs(elapsed)))]
}

fn criterion_2() -> Vec<Line> {
    let start = Instant::now();
    let report = tables::reproduce_table1().unwrap();
    let elapsed = start.elapsed();
    let rows = &report.rows[..2];
    let readings = [("gc>=w", 0usize), ("gc>=w&hw>=d", 1), ("gc>=w&lee>=6", 2)];
    let mut out = Vec::new();
    for (name, idx) in readings {
        let mut hard = true;
        let mut notes = Vec::new();
        for (row, printed) in rows.iter().zip(tables::table1().unwrap()) {
            let (w, d) = (printed.number("w").unwrap(), printed.number("dH").unwrap());
            let property = &tables::gc_readings(w, d)[idx];
            let mut row_ok = false;
            for a in row.attempts.iter().filter(|a| &a.property == property) {
                let params = a.linear && a.generators.len() == 3 && a.size == 64 && a.min_distance == Some(4) && a.min_gc >= w;
                row_ok |= params;
                let diff: Vec<String> = a
                    .generators
                    .iter()
                    .zip(&row.printed)
                    .filter(|(g, p)| g != p)
                    .map(|(g, p)| format!("{g}!={p}"))
                    .collect();
                notes.push(format!(
                    "n={} {}: size={} dH={:?} gens={} params={} generators={}",
                    printed.number("n").unwrap(),
                    a.mode,
                    a.size,
                    a.min_distance,
                    a.generators.len(),
                    if params { "match" } else { "mismatch" },
                    if a.generators_match { "exact".to_string() } else { format!("diff[{}]", diff.join(",")) }
                ));
            }
            hard &= row_ok;
        }
        hard &= elapsed < TABLE1_DENSE_LIMIT;
        out.push(line(format!("2[{name}]"), hard, format!("{} ({} for the table)", notes.join("; "), secs(elapsed))));
    }
    out
}

fn criterion_3() -> Vec<Line> {
    let report = tables::reproduce_table2().unwrap();
    let p = PropertySpec::parse(&report.property, &CostModel::unit()).unwrap();
    let code = build_lexicode(&OrderedBasis::canonical(8).unwrap(), &p, &LexicodeOptions::default()).unwrap();
    let members: BTreeSet<Z4Vector> = code.codewords().iter().copied().collect();
    let strands_ok = code.size() == 64 && code.codewords().iter().all(|c| gc(c) >= 4);
    // every documented non-member must really be outside the code, with a real nearest codeword
    let witnesses_ok = report.non_members.iter().all(|m| {
        !members.contains(&m.vector)
            && members.contains(&m.nearest)
            && m.vector.coords().iter().zip(m.nearest.coords()).filter(|(a, b)| *a != b).count() == m.distance
    });
    let documented = report.discrepancies_documented() && witnesses_ok;
    let pass = strands_ok && report.generated_size == 64 && (report.overlap >= 60 || documented);
    vec![line(
        "3",
        pass,
        format!(
            "generated={} minGC={} overlap={}/{} non-members={} with verified witnesses={witnesses_ok}",
            report.generated_size,
            report.generated_min_gc,
            report.overlap,
            report.transcribed,
            report.non_members.len()
        ),
    )]
}

fn criterion_4() -> Vec<Line> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut violations = 0usize;
    for _ in 0..LINEARITY_CONFIGS {
        let n = rng.gen_range(1..=6);
        let w = rng.gen_range(0..=n);
        let basis = OrderedBasis::random(n, &mut rng).unwrap();
        let p = PropertySpec::parse(&format!("gc>={w}"), &CostModel::unit()).unwrap();
        let code = build_lexicode(&basis, &p, &LexicodeOptions::default()).unwrap();
        let words: BTreeSet<Vec<u8>> = code.codewords().iter().map(Z4Vector::coords).collect();
        if words != span(n, code.generators()) || words.len() != code.size() {
            violations += 1;
        }
        violations += code.codewords().iter().filter(|c| !c.is_zero() && gc(c) < w).count();
        if !code.report().is_some_and(|r| r.passes()) {
            violations += 1;
        }
    }
    let elapsed = start.elapsed();
    vec![line(
        "4",
        violations == 0 && elapsed < LINEARITY_SUITE_LIMIT,
        format!("{LINEARITY_CONFIGS} configurations, {violations} violations, {}", secs(elapsed)),
    )]
}

fn recursive_edit(s: &[Base], t: &[Base], cm: &CostModel, memo: &mut HashMap<(usize, usize), f64>) -> f64 {
    if let Some(&v) = memo.get(&(s.len(), t.len())) {
        return v;
    }
    let v = match (s.split_last(), t.split_last()) {
        (None, None) => 0.0,
        (Some((&a, rest)), None) => recursive_edit(rest, t, cm, memo) + cm.deletion(a),
        (None, Some((&b, rest))) => recursive_edit(s, rest, cm, memo) + cm.insertion(b),
        (Some((&a, sr)), Some((&b, tr))) => {
            let sub = recursive_edit(sr, tr, cm, memo) + if a == b { 0.0 } else { cm.substitution(a, b) };
            let del = recursive_edit(sr, t, cm, memo) + cm.deletion(a);
            let ins = recursive_edit(s, tr, cm, memo) + cm.insertion(b);
            sub.min(del).min(ins)
        }
    };
    memo.insert((s.len(), t.len()), v);
    v
}

fn oracle_edit(s: &[Base], t: &[Base], cm: &CostModel) -> f64 {
    recursive_edit(s, t, cm, &mut HashMap::new())
}

fn random_strand(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<Base> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| Base::ALL[rng.gen_range(0..4)]).collect()
}

fn criterion_5() -> Vec<Line> {
    let unit = CostModel::unit();
    let weighted = CostModel::parse(
        "substitution A = 0 1 0.5 1\nsubstitution C = 1 0 1 0.5\nsubstitution G = 0.5 1 0 1\nsubstitution T = 1 0.5 1 0\ninsertion = 1.5 1.5 1.5 1.5\ndeletion = 1.25 1.25 1.25 1.25\n",
    ).unwrap();
    let mut strings: Vec<Vec<Base>> = vec![Vec::new()];
    let mut frontier = strings.clone();
    for _ in 0..3 {
        frontier = frontier
            .iter()
            .flat_map(|s| Base::ALL.iter().map(move |&b| [s.as_slice(), &[b]].concat()))
            .collect();
        strings.extend(frontier.iter().cloned());
    }
    let mut mismatches = 0usize;
    let mut compared = 0usize;
    for cm in [&unit, &weighted] {
        for s in &strings {
            for t in &strings {
                compared += 1;
                if (edit_distance(s, t, cm) - oracle_edit(s, t, cm)).abs() > EXACT {
                    mismatches += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    for i in 0..RANDOM_PAIRS {
        let cm = if i % 2 == 0 { &unit } else { &weighted };
        let (s, t) = (random_strand(&mut rng, 8), random_strand(&mut rng, 8));
        compared += 1;
        if (edit_distance(&s, &t, cm) - oracle_edit(&s, &t, cm)).abs() > EXACT {
            mismatches += 1;
        }
    }
    let mut axiom_failures = 0usize;
    for _ in 0..RANDOM_TRIPLES {
        let (x, y, z) = (random_strand(&mut rng, 8), random_strand(&mut rng, 8), random_strand(&mut rng, 8));
        let (xy, yx, yz, xz) =
            (edit_distance(&x, &y, &unit), edit_distance(&y, &x, &unit), edit_distance(&y, &z, &unit), edit_distance(&x, &z, &unit));
        let identity = edit_distance(&x, &x, &unit) == 0.0 && ((xy == 0.0) == (x == y));
        if xy != yx || !identity || xz > xy + yz {
            axiom_failures += 1;
        }
    }
    vec![
        line("5[dp]", mismatches == 0, format!("{compared} pairs against memoized recursion, {mismatches} mismatches")),
        line("5[axioms]", axiom_failures == 0, format!("{RANDOM_TRIPLES} unit-cost triples, {axiom_failures} failures")),
    ]
}

fn criterion_6() -> Vec<Line> {
    let mut counterexamples = 0usize;
    let mut doubled_off = 0usize;
    let mut checked = 0usize;
    for n in 1..=6usize {
        let props: Vec<PropertySpec> =
            (0..=n).map(|w| PropertySpec::parse(&format!("gc>={w}"), &CostModel::unit()).unwrap()).collect();
        for bits in 0..1u64 << (2 * n) {
            let x = Z4Vector::from_packed(bits, n).unwrap();
            let tripled = x.scale(3);
            for p in &props {
                checked += 1;
                if p.holds(&x, &[]) && !p.holds(&tripled, &[]) {
                    counterexamples += 1;
                }
            }
            if gc(&x.scale(2)) != n || x.scale(2).gc_weight() != n {
                doubled_off += 1;
            }
        }
    }
    vec![line(
        "6",
        counterexamples == 0 && doubled_off == 0,
        format!("{checked} (x, w) cases, {counterexamples} counterexamples, gc(2x)!=n in {doubled_off}"),
    )]
}

fn criterion_7() -> Vec<Line> {
    let mut oracle = Oracle::new(SearchBudget { allow_gap: true, ..SearchBudget::default() });
    let report = check_relations(&RelationRange::desk(4), &mut oracle).unwrap();
    let mut out = Vec::new();

    let eq1: Vec<_> = ["hamming", "edit"]
        .iter()
        .flat_map(|m| (1..=3).map(move |d| (*m, d)))
        .map(|(m, d)| report.find(Relation::GcZeroBinary, m, 3, d, 0).map(|c| c.outcome))
        .collect();
    out.push(line("7[gc-zero-binary]", eq1.iter().all(|o| *o == Some(Outcome::Pass)), format!("(3,d,0) for d=1..3, both metrics: {eq1:?}")));

    let summarize = |rel: Relation| {
        let checks: Vec<_> = report.of(rel).collect();
        let count = |o: Outcome| checks.iter().filter(|c| c.outcome == o).count();
        let first = checks.iter().find(|c| c.outcome == Outcome::Finding).map(|c| format!("; first finding: {c}"));
        let pass = count(Outcome::Finding) == 0 && count(Outcome::Pass) > 0;
        let detail = format!(
            "{} pass, {} findings, {} not computable{}",
            count(Outcome::Pass),
            count(Outcome::Finding),
            count(Outcome::Skipped),
            first.unwrap_or_default()
        );
        (pass, detail)
    };
    for rel in [Relation::GcSymmetry, Relation::Puncture, Relation::FirstSymbolPartition, Relation::ReverseLength, Relation::ReverseDistance] {
        let (pass, detail) = summarize(rel);
        out.push(line(format!("7[{}]", rel.name()), pass, detail));
    }

    let hw = report.find(Relation::HalfWeightFour, "hamming", 2, 1, 1);
    let detected = hw.is_some_and(|c| c.outcome == Outcome::Finding && c.lhs == Some(8) && c.rhs == Some(4));
    out.push(line(
        "7[half-weight-four detected]",
        detected,
        hw.map_or("no check at (2,1,1)".to_string(), |c| format!("{c}")),
    ));
    for rel in [Relation::ReversePartition, Relation::RcEqualsREven, Relation::RcOddLower, Relation::RcOddUpperLoose, Relation::RcOddUpperTight] {
        let (_, detail) = summarize(rel);
        println!("  info  7 {:<24} {detail}", rel.name());
    }
    out
}

fn criterion_8() -> Vec<Line> {
    let start = Instant::now();
    let metric = Metric::unit_edit();
    let mut gc_ok = true;
    let mut dist_ok = true;
    let mut examples_real = true;
    let mut gc_notes = Vec::new();
    let mut dist_notes = Vec::new();
    let mut cross_notes = Vec::new();
    for n in [4, 6, 8] {
        let stats = half_complement_experiment(n, HALF_COMPLEMENT_PAIRS, SEED + n as u64, &metric);
        gc_ok &= stats.gc_preserved == HALF_COMPLEMENT_PAIRS;
        dist_ok &= stats.distance_preserved == HALF_COMPLEMENT_PAIRS;
        for ex in &stats.distance_examples {
            let hc = |s: &DnaStrand| -> Vec<Base> {
                s.bases().iter().enumerate().map(|(i, &b)| if i < n / 2 { b.complement() } else { b }).collect()
            };
            let unit = CostModel::unit();
            examples_real &= oracle_edit(ex.x.bases(), ex.y.bases(), &unit) == ex.before
                && oracle_edit(&hc(&ex.x), &hc(&ex.y), &unit) == ex.after
                && ex.before != ex.after;
        }
        gc_notes.push(format!("n={n}: {}/{}", stats.gc_preserved, stats.pairs));
        let example = stats.distance_examples.first().map_or(String::new(), |e| format!(" e.g. {}/{} {}->{}", e.x, e.y, e.before, e.after));
        dist_notes.push(format!("n={n}: {}/{}{example}", stats.distance_preserved, stats.pairs));
        cross_notes.push(format!("n={n}: {:.1}%", 100.0 * stats.cross_rate()));
    }
    let elapsed = start.elapsed();
    let timely = elapsed < HALF_COMPLEMENT_LIMIT;
    println!("  info  8 cross-distance identity pass rate: {}", cross_notes.join(", "));
    vec![
        line("8[gc]", gc_ok && timely, format!("{} ({})", gc_notes.join(", "), secs(elapsed))),
        line(
            "8[distance]",
            dist_ok && timely,
            format!("{}; counterexamples re-checked independently: {examples_real}", dist_notes.join(", ")),
        ),
    ]
}

fn run_cli(args: &[&str], out_dir: &Path) -> Vec<u8> {
    let output = Command::new(env!("CARGO_BIN_EXE_dnalex"))
        .args(args)
        .env("DNALEX_OUT", out_dir)
        .output()
        .expect("run dnalex");
    let mut bytes = output.stdout;
    bytes.extend(format!("\nexit={:?}\n", output.status.code()).bytes());
    let mut files: Vec<_> = walk(out_dir);
    files.sort();
    for f in files.iter().filter(|f| f.file_name().is_some_and(|n| n != "timings.log")) {
        bytes.extend(f.strip_prefix(out_dir).unwrap().to_string_lossy().bytes());
        bytes.extend(fs::read(f).unwrap());
    }
    bytes
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).into_iter().flatten().flatten() {
        let p = entry.path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

fn criterion_9() -> Vec<Line> {
    let scratch = tempfile::tempdir().unwrap();
    let code_file = scratch.path().join("code.txt");
    fs::write(&code_file, "GGGG\nCCCC\nGCGC\nCGCG\n").unwrap();
    let code_path = code_file.to_str().unwrap();
    let matrix: Vec<Vec<&str>> = vec![
        vec!["construct", "-n", "8", "-P", "gc>=4&lee>=6"],
        vec!["construct", "-n", "6", "-b", "random", "--seed", "7", "-P", "gc>=3", "--fasta", "--log"],
        vec!["--json", "construct", "-n", "5", "-P", "gc>=2&hw>=2", "--mode", "as-written", "-o", "-"],
        vec!["tables", "2"],
        vec!["tables", "3"],
        vec!["--json", "tables", "4"],
        vec!["distance", "ACTA", "CTCG", "--transcript"],
        vec!["--json", "distance", "0231", "GCTA", "--metric", "hamming"],
        vec!["bounds", "-n", "1..3", "-d", "1..3", "-w", "all", "--metric", "edit", "--check-relations"],
        vec!["bounds", "-n", "3", "--metric", "hamming", "--variant", "rc", "--timings"],
        vec!["--json", "bounds", "-n", "7", "-d", "5", "-w", "3", "--metric", "hamming", "--allow-gap"],
        vec!["bounds", "-n", "7", "-d", "5", "-w", "3", "--metric", "hamming"],
        vec!["convert", "21111000", "--to", "dna"],
        vec!["verify", code_path, "gc>=2"],
        vec!["--json", "verify", code_path, "gc>=4&hw>=2"],
    ];
    let mut differing = Vec::new();
    for args in &matrix {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        if run_cli(args, a.path()) != run_cli(args, b.path()) {
            differing.push(args.join(" "));
        }
    }
    vec![line(
        "9",
        differing.is_empty(),
        format!("{} commands run twice, differing: {:?}", matrix.len(), differing),
    )]
}

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: Vec<fn() -> Vec<Line>> =
        vec![criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9];
    let results: Vec<Vec<Line>> = thread::scope(|s| {
        let handles: Vec<_> = criteria.iter().map(|f| s.spawn(f)).collect();
        handles.into_iter().map(|h| h.join().expect("criterion panicked")).collect()
    });
    let expected: BTreeSet<&str> = EXPECTED_RED.iter().map(|(id, _)| *id).collect();
    let mut red = BTreeSet::new();
    for l in results.iter().flatten() {
        let tag = match (l.pass, expected.contains(l.id.as_str())) {
            (true, _) => "PASS",
            (false, true) => "FAIL (expected)",
            (false, false) => "FAIL",
        };
        println!("criterion {:<30} {tag:<16} {}", l.id, l.detail);
        if !l.pass {
            red.insert(l.id.clone());
        }
    }
    for (id, why) in EXPECTED_RED {
        println!("  known red {id}: {why}");
    }
    let unexpected: Vec<_> = red.iter().filter(|id| !expected.contains(id.as_str())).collect();
    let recovered: Vec<_> = expected.iter().filter(|id| !red.contains(**id)).collect();
    println!("acceptance: {} lines, {} red, {}", results.iter().map(Vec::len).sum::<usize>(), red.len(), secs(start.elapsed()));
    if unexpected.is_empty() && recovered.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}; expected reds now passing: {recovered:?}");
        ExitCode::FAILURE
    }
}
