//! Acceptance suite. Runs every criterion in order, prints one
//! `[PASS]`/`[FAIL]` line each, and exits nonzero if any failed.
//!
//! Pass a substring as the first argument to run a subset.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::{BufRead, BufReader};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Child, Command, Stdio};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use qgec::decoders::{build_syndrome_table, Decoder, Endpoint, ExternalDecoder, MatchDecoder, TableDecoder};
use qgec::golay::{build_parity_matrix, kernel_min_weight, GOLAY_N};
use qgec::harness::stats::monotone_trend;
use qgec::harness::{run_sweep_with, CodeId, SweepConfig};
use qgec::{build_golay_css, build_toric, BitVec, CssCode, NoiseModel, Pauli, PauliError, PolyLabel, ResidualClass};
use qgec::{StreamSeeder, ToricLattice};

// time limits
const LIMIT_VALIDITY: Duration = Duration::from_secs(1);
const LIMIT_TABLES: Duration = Duration::from_secs(1);
const LIMIT_GOLAY_CORRECTION: Duration = Duration::from_secs(10);
const LIMIT_TORIC: Duration = Duration::from_secs(60);
const LIMIT_NOISE: Duration = Duration::from_secs(10);
const LIMIT_SWEEP: Duration = Duration::from_secs(300);
const LIMIT_PROTOCOL: Duration = Duration::from_secs(120);

// sample sizes and tolerances
const RANDOM_JOINT_SAMPLES: usize = 100_000;
const NOISE_DRAWS: u64 = 1_000_000;
const NOISE_SIGMAS: f64 = 4.0;
const NOISE_PS: [f64; 2] = [0.01, 0.05];
const NOISE_ETAS: [f64; 4] = [0.25, 0.5, 1.0, 3.0];
const SWEEP_SEED: u64 = 20_240_601;
const PROTOCOL_SYNDROMES: usize = 10_000;
/// Per-axis tail bound at p = 0.001 must stay below this.
const TAIL_BOUND_CEILING: f64 = 2.0e-9;

type CheckResult = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> CheckResult);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn lib<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

// ---------------------------------------------------------------- oracles

/// Generator exponents restated here so the oracle does not read library tables.
fn oracle_exponents(label: PolyLabel) -> &'static [u32] {
    match label {
        PolyLabel::H1 => &[0, 1, 2, 3, 4, 7, 10, 12],
        PolyLabel::H2 => &[0, 1, 2, 3, 5, 6, 8, 10, 11, 12, 14, 16],
        PolyLabel::H3 => &[0, 1, 3, 5, 7, 8, 10, 11, 12, 13, 14, 15, 16, 17, 18, 21],
    }
}

fn rows_u32(m: &qgec::BitMat) -> Vec<u32> {
    m.rows().iter().map(|r| r.to_u64() as u32).collect()
}

fn rotate23(v: u32, k: u32) -> u32 {
    let mask = (1u32 << 23) - 1;
    let k = k % 23;
    ((v << k) | (v >> (23 - k))) & mask
}

/// Insert into an xor basis keyed by leading bit; returns false if dependent.
fn insert(basis: &mut [u32; 32], mut v: u32) -> bool {
    while v != 0 {
        let top = 31 - v.leading_zeros() as usize;
        if basis[top] == 0 {
            basis[top] = v;
            return true;
        }
        v ^= basis[top];
    }
    false
}

fn oracle_rank(rows: &[u32]) -> usize {
    let mut b = [0u32; 32];
    rows.iter().filter(|&&r| insert(&mut b, r)).count()
}

fn in_span(basis: &[u32; 32], mut v: u32) -> bool {
    while v != 0 {
        let top = 31 - v.leading_zeros() as usize;
        if basis[top] == 0 {
            return false;
        }
        v ^= basis[top];
    }
    true
}

/// Gray-code walk over all 2^23 words; returns (min nonzero kernel weight, number of kernel words of that weight).
fn oracle_kernel_scan(rows: &[u32]) -> (u32, u64) {
    let columns: Vec<u32> = (0..23)
        .map(|j| {
            rows.iter()
                .enumerate()
                .fold(0u32, |acc, (i, r)| acc | (((r >> j) & 1) << i))
        })
        .collect();
    let (mut word, mut syn) = (0u32, 0u32);
    let (mut best, mut count) = (u32::MAX, 0u64);
    for g in 1u32..(1 << 23) {
        let j = g.trailing_zeros() as usize;
        word ^= 1 << j;
        syn ^= columns[j];
        if syn == 0 {
            let w = word.count_ones();
            if w < best {
                best = w;
                count = 1;
            } else if w == best {
                count += 1;
            }
        }
    }
    (best, count)
}

fn oracle_syndrome(rows: &[u32], v: u32) -> u32 {
    rows.iter()
        .enumerate()
        .fold(0, |acc, (i, r)| acc | (((r & v).count_ones() & 1) << i))
}

/// All subsets of `0..n` with at most `max` elements.
fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&l| l + 1);
            for i in start..n {
                let mut t: Vec<usize> = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn binom(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Golay residual with zero syndrome is a stabilizer iff both parts have even
/// weight: ker(H) is rowspace(H) plus the odd all-ones word, and every
/// rowspace word is even.
fn oracle_golay_trivial(rows: &[u32], r: &PauliError) -> bool {
    let x = r.x_part().to_u64() as u32;
    let z = r.z_part().to_u64() as u32;
    oracle_syndrome(rows, x) == 0
        && oracle_syndrome(rows, z) == 0
        && x.count_ones().is_multiple_of(2)
        && z.count_ones().is_multiple_of(2)
}

/// Toric residual: cycles with even crossing number through both cuts are trivial.
/// X chains are tested against the Z-logical supports (vertical edges in
/// column 0, horizontal edges in row 0); Z chains against the dual cuts.
fn oracle_toric_trivial(d: usize, code: &CssCode, r: &PauliError) -> bool {
    let h = |row: usize, col: usize| row * d + col;
    let v = |row: usize, col: usize| d * d + row * d + col;
    if !code.extract_syndrome(r).map(|s| s.is_zero()).unwrap_or(false) {
        return false;
    }
    let parity = |bits: &BitVec, idx: &[usize]| idx.iter().filter(|&&i| bits.get(i)).count() % 2;
    let col0_vertical: Vec<usize> = (0..d).map(|r| v(r, 0)).collect();
    let row0_horizontal: Vec<usize> = (0..d).map(|c| h(0, c)).collect();
    let row0_vertical: Vec<usize> = (0..d).map(|c| v(0, c)).collect();
    let col0_horizontal: Vec<usize> = (0..d).map(|r| h(r, 0)).collect();
    parity(r.x_part(), &col0_vertical) == 0
        && parity(r.x_part(), &row0_horizontal) == 0
        && parity(r.z_part(), &row0_vertical) == 0
        && parity(r.z_part(), &col0_horizontal) == 0
}

// ---------------------------------------------------------------- criteria

fn code_validity() -> CheckResult {
    let mut notes = Vec::new();
    for label in PolyLabel::ALL {
        let h = lib(build_parity_matrix(label))?.matrix;
        ensure!(h.row_count() == 11 && h.col_count() == 23, "{label}: shape");
        ensure!(h.rank() == 11, "{label}: library rank {}", h.rank());
        ensure!(
            h.mul_transpose(&h).map(|m| m.is_zero()).unwrap_or(false),
            "{label}: H·Hᵀ ≠ 0"
        );
        let min = lib(kernel_min_weight(&h))?;
        ensure!(min == Some(7), "{label}: library kernel min weight {min:?}");

        let rows = rows_u32(&h);
        ensure!(oracle_rank(&rows) == 11, "{label}: oracle rank {}", oracle_rank(&rows));
        for (i, a) in rows.iter().enumerate() {
            for (j, b) in rows.iter().enumerate() {
                ensure!((a & b).count_ones() % 2 == 0, "{label}: rows {i},{j} overlap oddly");
            }
        }
        let poly = oracle_exponents(label).iter().fold(0u32, |acc, e| acc | 1 << e);
        let mut shifts = [0u32; 32];
        for k in 0..23 {
            insert(&mut shifts, rotate23(poly, k));
        }
        for (i, r) in rows.iter().enumerate() {
            ensure!(
                in_span(&shifts, *r),
                "{label}: row {i} not a combination of polynomial shifts"
            );
        }
        let (best, count) = oracle_kernel_scan(&rows);
        ensure!(best == 7, "{label}: oracle kernel min weight {best}");
        // weight enumerator of the [23,12,7] Golay code: A7 = 253
        ensure!(count == 253, "{label}: {count} weight-7 codewords, expected 253");
        notes.push(format!("{label} ok"));
    }
    Ok(format!(
        "{}; rank 11, H·Hᵀ=0, cyclic span, dmin 7 (253 weight-7 words)",
        notes.join(", ")
    ))
}

fn perfect_tables() -> CheckResult {
    for label in PolyLabel::ALL {
        let h = lib(build_parity_matrix(label))?.matrix;
        let table = lib(build_syndrome_table(&h))?;
        ensure!(table.len() == 2048, "{label}: {} entries", table.len());
        ensure!(table.radius() == 3, "{label}: radius {}", table.radius());
        let rows = rows_u32(&h);
        let mut seen = vec![false; 2048];
        for (key, leader) in table.leaders().iter().enumerate() {
            let v = leader.to_u64() as u32;
            ensure!(
                v.count_ones() <= 3,
                "{label}: leader {key} has weight {}",
                v.count_ones()
            );
            let s = oracle_syndrome(&rows, v) as usize;
            ensure!(s == key, "{label}: leader filed under {key} has syndrome {s}");
            ensure!(!seen[s], "{label}: duplicate syndrome {s}");
            seen[s] = true;
        }
        ensure!(seen.iter().all(|&b| b), "{label}: uncovered syndrome");
    }
    Ok("2048 collision-free entries, radius 3, for h1/h2/h3".into())
}

fn golay_correction() -> CheckResult {
    let patterns = subsets(GOLAY_N, 3);
    ensure!(patterns.len() == 2048, "{} patterns", patterns.len());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut total = 0usize;
    for label in PolyLabel::ALL {
        let code = lib(build_golay_css(label))?;
        let rows = rows_u32(code.hz());
        let dec = lib(TableDecoder::new(&code))?;
        let run = |e: &PauliError| -> Result<(), String> {
            let s = lib(code.extract_syndrome(e))?;
            let c = lib(dec.decode(&s))?.correction;
            let r = lib(e.product(&c))?;
            let class = lib(code.classify_residual(&r))?;
            ensure!(class == ResidualClass::Trivial, "{label}: {e} left {class:?}");
            ensure!(
                oracle_golay_trivial(&rows, &r),
                "{label}: oracle rejects residual of {e}"
            );
            Ok(())
        };
        for support in &patterns {
            let bits = BitVec::from_indices(GOLAY_N, support.iter().copied());
            run(&PauliError::from_x(bits.clone()))?;
            run(&PauliError::from_z(bits))?;
            total += 2;
        }
        for _ in 0..RANDOM_JOINT_SAMPLES {
            let mut part = || {
                let w = rng.gen_range(0..=3);
                BitVec::from_indices(GOLAY_N, rand::seq::index::sample(&mut rng, GOLAY_N, w))
            };
            let x = part();
            let z = part();
            run(&lib(PauliError::new(x, z))?)?;
            total += 1;
        }
    }
    Ok(format!(
        "{total} errors decoded, 0 failures (2048/axis/H exhaustive + {RANDOM_JOINT_SAMPLES} joint/H)"
    ))
}

fn toric_d5() -> CheckResult {
    let d = 5;
    let code = lib(build_toric(d))?;
    ensure!(code.num_qubits() == 50, "n = {}", code.num_qubits());
    ensure!(code.num_logicals() == 2, "k = {}", code.num_logicals());
    for (i, l) in code.logicals().iter().enumerate() {
        ensure!(
            l.x.weight() == 5 && l.z.weight() == 5,
            "logical pair {i} weights {}/{}",
            l.x.weight(),
            l.z.weight()
        );
    }
    let dist = lib(code.verified_distance())?;
    ensure!(dist == 5, "distance {dist}");

    let dec = MatchDecoder::new(lib(ToricLattice::new(d))?);
    let check = |e: &PauliError| -> Result<(), String> {
        let s = lib(code.extract_syndrome(e))?;
        let c = lib(dec.decode(&s))?.correction;
        let r = lib(e.product(&c))?;
        let class = lib(code.classify_residual(&r))?;
        ensure!(class == ResidualClass::Trivial, "{e} left {class:?}");
        ensure!(oracle_toric_trivial(d, &code, &r), "oracle rejects residual of {e}");
        Ok(())
    };
    let supports = subsets(50, 2);
    let mut count = 0usize;
    for s in &supports {
        let bits = BitVec::from_indices(50, s.iter().copied());
        check(&PauliError::from_x(bits.clone()))?;
        check(&PauliError::from_z(bits))?;
        count += 2;
    }
    // every Pauli error of weight <= 2, mixing X, Y and Z
    let paulis = [Pauli::X, Pauli::Y, Pauli::Z];
    for s in &supports {
        let mut choice = vec![0usize; s.len()];
        loop {
            let mut e = PauliError::identity(50);
            for (q, &c) in s.iter().zip(&choice) {
                e.set(*q, paulis[c]);
            }
            check(&e)?;
            count += 1;
            let Some(pos) = choice.iter().position(|&c| c < 2) else {
                break;
            };
            choice[pos] += 1;
            choice[..pos].fill(0);
        }
    }
    // every (x, z) pair with per-axis weight <= 2
    let axis: Vec<BitVec> = supports
        .iter()
        .map(|s| BitVec::from_indices(50, s.iter().copied()))
        .collect();
    let joint = axis
        .par_iter()
        .map(|x| {
            axis.iter()
                .try_for_each(|z| check(&lib(PauliError::new(x.clone(), z.clone()))?))
                .map(|_| axis.len())
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(format!(
        "n=50 k=2 d=5, logical weights 5; {count} weight<=2 Paulis and {joint} per-axis weight<=2 pairs corrected"
    ))
}

fn noise_frequencies() -> CheckResult {
    let mut worst: f64 = 0.0;
    for (pi, &p) in NOISE_PS.iter().enumerate() {
        for (ei, &eta) in NOISE_ETAS.iter().enumerate() {
            let model = lib(NoiseModel::new(p, eta))?;
            let mut rng = StreamSeeder::new(99).stream((pi * NOISE_ETAS.len() + ei) as u64, 0);
            let mut counts = [0u64; 4];
            for _ in 0..NOISE_DRAWS {
                let k = match model.sample_pauli(&mut rng) {
                    Pauli::I => 0,
                    Pauli::X => 1,
                    Pauli::Y => 2,
                    Pauli::Z => 3,
                };
                counts[k] += 1;
            }
            let px = p / (eta + 2.0);
            let expected = [1.0 - p, px, eta * p / (eta + 2.0), px];
            for (k, (&c, &q)) in counts.iter().zip(&expected).enumerate() {
                let n = NOISE_DRAWS as f64;
                let sigma = (n * q * (1.0 - q)).sqrt();
                let dev = (c as f64 - n * q).abs();
                ensure!(
                    dev <= NOISE_SIGMAS * sigma,
                    "p={p} eta={eta} {}: {c} vs {:.1} ({:.2} sigma)",
                    ["I", "X", "Y", "Z"][k],
                    n * q,
                    dev / sigma
                );
                worst = worst.max(dev / sigma);
            }
        }
    }
    Ok(format!(
        "8 (p, eta) cells x 10^6 draws, worst deviation {worst:.2} sigma (limit {NOISE_SIGMAS})"
    ))
}

fn sweep_sanity() -> CheckResult {
    let p0 = 0.001_f64;
    let q = 2.0 * p0 / 3.0;
    let tail = binom(23, 4) * q.powi(4);
    ensure!(tail < TAIL_BOUND_CEILING, "tail bound {tail:e}");

    let config = SweepConfig::standard(CodeId::Golay(PolyLabel::H1), 1.0, SWEEP_SEED);
    let bundle = lib(config.code.build())?;
    let dec = lib(TableDecoder::new(&bundle.code))?;
    let result = lib(run_sweep_with(&bundle, &dec, &config, |_| Ok(())))?;
    ensure!(result.points.len() == 50, "{} grid points", result.points.len());
    let first = &result.points[0];
    ensure!((first.p - p0).abs() < 1e-12, "first p {}", first.p);
    ensure!(first.tally.trials == 10_000, "{} trials", first.tally.trials);
    ensure!(
        first.tally.failures == 0,
        "{} failures at p=0.001",
        first.tally.failures
    );
    let curve: Vec<(u64, u64)> = result
        .points
        .iter()
        .map(|pt| (pt.tally.failures, pt.tally.trials))
        .collect();
    let trend = monotone_trend(&curve);
    ensure!(
        trend.is_monotone(),
        "trend test failed: MK z={:.2}, drops {:?}",
        trend.mann_kendall_z,
        trend.significant_drops
    );
    let last = result.points.last().unwrap();
    Ok(format!(
        "rate(0.001)=0 (tail bound {tail:.2e}/axis), rate(0.05)={:.4}, MK z={:.2}, no significant drops",
        last.rate, trend.mann_kendall_z
    ))
}

struct Server(Child);

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.0.kill();
        let _ = self.0.wait();
    }
}

fn listen(addr: &str) -> Result<(Server, String), String> {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qgec"))
        .args(["serve", "--code", "golay:h1", "--listen", addr])
        .stdout(Stdio::piped())
        .stderr(Stdio::inherit())
        .spawn()
        .map_err(|e| e.to_string())?;
    let mut line = String::new();
    BufReader::new(child.stdout.take().unwrap())
        .read_line(&mut line)
        .map_err(|e| e.to_string())?;
    let server = Server(child);
    let announced = line
        .trim()
        .strip_prefix("LISTENING ")
        .ok_or_else(|| format!("bad announcement {line:?}"))?
        .to_string();
    Ok((server, announced))
}

fn protocol_equivalence() -> CheckResult {
    let bundle = lib(CodeId::Golay(PolyLabel::H1).build())?;
    let code = &bundle.code;
    let table = lib(TableDecoder::new(code))?;
    let exe = env!("CARGO_BIN_EXE_qgec");

    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let syndromes: Vec<BitVec> = (0..PROTOCOL_SYNDROMES)
        .map(|_| BitVec::from_u64(code.syndrome_len(), rng.gen::<u64>() & ((1 << 22) - 1)))
        .collect();
    let expected: Vec<BitVec> = syndromes
        .iter()
        .map(|s| {
            Ok(table
                .decode(&code.syndrome_from_bits(s.clone())?)?
                .correction
                .to_label())
        })
        .collect::<qgec::Result<_>>()
        .map_err(|e| e.to_string())?;

    let mut config = SweepConfig::standard(CodeId::Golay(PolyLabel::H1), 1.0, 77);
    config.p_min = 0.01;
    config.p_max = 0.05;
    config.p_step = 0.01;
    config.trials = 2_000;
    let reference = lib(run_sweep_with(&bundle, &table, &config, |_| Ok(())))?;

    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let sock = tmp.path().join("qgec.sock");
    let (_tcp, tcp_addr) = listen("tcp://127.0.0.1:0")?;
    let mut transports = vec![("stdio", format!("{exe} serve --code golay:h1")), ("tcp", tcp_addr)];
    let _unix = if cfg!(unix) {
        let (server, addr) = listen(&format!("unix:{}", sock.display()))?;
        transports.push(("unix", addr));
        Some(server)
    } else {
        None
    };

    let mut names = Vec::new();
    for (name, target) in &transports {
        let endpoint = lib(Endpoint::parse(target))?;
        let ext = lib(ExternalDecoder::connect(&endpoint, "golay:h1", 22, 46))?;
        for (i, (s, want)) in syndromes.iter().zip(&expected).enumerate() {
            let got = lib(ext.request(s))?;
            ensure!(&got == want, "{name}: syndrome #{i} {s}: got {got}, want {want}");
        }
        let remote = lib(run_sweep_with(&bundle, &ext, &config, |_| Ok(())))?;
        ensure!(remote.points.len() == reference.points.len(), "{name}: point count");
        for (a, b) in remote.points.iter().zip(&reference.points) {
            ensure!(
                a.tally == b.tally && a.p == b.p,
                "{name}: p={} tallies differ {:?} vs {:?}",
                a.p,
                a.tally,
                b.tally
            );
        }
        ext.close();
        names.push(*name);
    }
    Ok(format!(
        "{} syndromes bit-identical and 5x2000-trial sweep identical over {}",
        PROTOCOL_SYNDROMES,
        names.join(", ")
    ))
}

// ---------------------------------------------------------------- runner

fn main() {
    let criteria: [Criterion; 7] = [
        ("code validity (h1/h2/h3)", LIMIT_VALIDITY, code_validity),
        ("perfect-code syndrome tables", LIMIT_TABLES, perfect_tables),
        (
            "distance-7 correction guarantee",
            LIMIT_GOLAY_CORRECTION,
            golay_correction,
        ),
        ("toric d=5 build and matching", LIMIT_TORIC, toric_d5),
        ("noise model frequencies", LIMIT_NOISE, noise_frequencies),
        ("golay h1 sweep sanity", LIMIT_SWEEP, sweep_sanity),
        ("protocol equivalence", LIMIT_PROTOCOL, protocol_equivalence),
    ];
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    let mut ran = 0;
    println!();
    for (name, limit, check) in criteria {
        if filter.as_deref().is_some_and(|f| !name.contains(f)) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail} ({elapsed:.2?}, limit {limit:?})"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name}: {why} ({elapsed:.2?}, limit {limit:?})");
            }
        }
    }
    println!("\nacceptance: {} passed, {failed} failed\n", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
