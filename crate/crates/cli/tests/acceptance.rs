//! Acceptance gate: one line per criterion, nonzero exit on any failure.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use geosym::*;
use geosym_cli::analysis::{ratio_report, Settings};
use geosym_cli::run_captured;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn sign_char(s: Sign) -> char {
    s.as_char()
}

// ---------------------------------------------------------------- 1

/// The thirteen rows of the configuration table, (first, curvature, last).
const TABLE: [(u8, [i8; 3]); 13] = [
    (1, [-1, 1, -1]),
    (2, [1, -1, 1]),
    (3, [1, 1, 1]),
    (4, [-1, -1, -1]),
    (5, [-1, 1, 1]),
    (6, [1, -1, -1]),
    (7, [1, 0, 1]),
    (8, [-1, 0, -1]),
    (9, [0, 0, 0]),
    (10, [0, 1, 1]),
    (11, [0, -1, -1]),
    (12, [1, -1, 0]),
    (13, [-1, 1, 0]),
];

fn sign(v: i8) -> Sign {
    match v {
        -1 => Sign::Neg,
        0 => Sign::Zero,
        _ => Sign::Pos,
    }
}

fn exhaustiveness() -> Outcome {
    let start = Instant::now();
    let valid = enumerate_valid_patterns();
    let mut invalid = 0;
    let mut matched = 0;
    for a in Sign::ALL {
        for b in Sign::ALL {
            for c in Sign::ALL {
                match pattern_lookup(a, b, c) {
                    Some(cfg) => {
                        let row = TABLE[cfg.index()];
                        check(row.0 == cfg.id(), format!("id mismatch for {cfg}"))?;
                        check(
                            (sign(row.1[0]), sign(row.1[1]), sign(row.1[2])) == (a, b, c),
                            format!(
                                "row {} does not match ({},{},{})",
                                cfg.id(),
                                sign_char(a),
                                sign_char(b),
                                sign_char(c)
                            ),
                        )?;
                        check(
                            valid.contains(&(a, b, c)),
                            "lookup and enumeration disagree",
                        )?;
                        matched += 1;
                    }
                    None => invalid += 1,
                }
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        valid.len() == 13 && matched == 13,
        format!("{} valid patterns", valid.len()),
    )?;
    check(invalid == 14, format!("{invalid} invalid patterns"))?;
    check(
        elapsed < Duration::from_millis(1),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "13 valid rows match the table, 14 invalid, {elapsed:?}"
    ))
}

// ---------------------------------------------------------------- 2

fn random_triple(rng: &mut ChaCha8Rng) -> [f64; 3] {
    // half the draws from a small integer lattice so that zero differences occur
    if rng.random::<bool>() {
        [0; 3].map(|_| rng.random_range(-2i32..=2) as f64)
    } else {
        [0; 3].map(|_| rng.random_range(-10.0..10.0))
    }
}

fn sign_hierarchy() -> Outcome {
    const N: usize = 1_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut violations = 0usize;
    let mut both_zero = 0usize;
    let mut both_zero_rows = BTreeSet::new();
    for _ in 0..N {
        let [a, b, c] = random_triple(&mut rng);
        let t = DifferenceTriple::from_points(a, b, c, 1);
        let (l, r) = (
            sign_of(t.left_product(), 0.0).unwrap(),
            sign_of(t.right_product(), 0.0).unwrap(),
        );
        if l > r {
            violations += 1;
        }
        if l == Sign::Zero && r == Sign::Zero {
            both_zero += 1;
            both_zero_rows.insert(classify(&[a, b, c], 1, 0.0).unwrap().id());
        }
    }
    check(violations == 0, format!("{violations} violations"))?;
    let allowed: BTreeSet<u8> = [7, 8, 9].into();
    check(
        both_zero_rows == allowed,
        format!("both-zero products in rows {both_zero_rows:?}"),
    )?;
    Ok(format!(
        "{N} triples, 0 violations; {both_zero} both-zero cases, all in rows {both_zero_rows:?}"
    ))
}

// ---------------------------------------------------------------- 3

/// Expected successors of each configuration, written out by hand.
fn expected_successors(id: u8) -> &'static [u8] {
    match id {
        1 | 4 | 6 | 8 | 11 => &[1, 4, 5, 8, 13],
        2 | 3 | 5 | 7 | 10 => &[2, 3, 6, 7, 12],
        _ => &[9, 10, 11],
    }
}

fn transition_structure() -> Outcome {
    let mask = validity_mask();
    check(
        mask.admissible_count() == 59,
        format!("{} admissible cells", mask.admissible_count()),
    )?;
    for from in Configuration::ALL {
        let got: Vec<u8> = mask.successors(from).iter().map(|c| c.id()).collect();
        check(
            got == expected_successors(from.id()),
            format!("row {} is {got:?}", from.id()),
        )?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut total = TransitionMatrix::default();
    let mut worst_sum = 0.0f64;
    let mut pairs = 0u64;
    // mixed continuous and tie-heavy signals so sparse rows are exercised
    for k in 0..40 {
        let x: Vec<f64> = (0..30_000)
            .map(|_| {
                if k % 2 == 0 {
                    rng.random_range(-1.0..1.0)
                } else {
                    rng.random_range(-1i32..=1) as f64
                }
            })
            .collect();
        let symbols = symbolize(&x, 0.0).map_err(|e| e.to_string())?;
        let m = count_transitions(&symbols).map_err(|e| format!("forbidden transition: {e}"))?;
        let sum: f64 = m.frequencies().iter().flatten().sum();
        worst_sum = worst_sum.max((sum - 1.0).abs());
        pairs += m.total();
        total.merge(&m);
    }
    check(pairs >= 1_000_000, format!("only {pairs} pairs"))?;
    check(
        worst_sum <= 1e-12,
        format!("matrix sums off by {worst_sum:e}"),
    )?;
    for from in Configuration::ALL {
        for to in Configuration::ALL {
            check(
                mask.is_admissible(from, to) || total.count(from, to) == 0,
                format!("observed forbidden {from}->{to}"),
            )?;
        }
    }
    let observed = Configuration::ALL
        .iter()
        .flat_map(|&f| Configuration::ALL.iter().map(move |&t| (f, t)))
        .filter(|&(f, t)| total.count(f, t) > 0)
        .count();
    Ok(format!("59 cells match the reference rows; {pairs} pairs, {observed} distinct, none forbidden; |sum-1| <= {worst_sum:e}"))
}

// ---------------------------------------------------------------- 4

fn closed_forms() -> Outcome {
    let window = WindowSpec::new(50, 50).unwrap();
    let opts = MeasureOptions64::default();
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12;

    let constant = Signal64::new(vec![3.5; 200], 1.0).unwrap();
    let se = semantic_entropy(&symbolize(constant.samples(), 0.0).unwrap()).unwrap();
    let ip = information_power(constant.samples(), Product::Left).unwrap();
    let ratio = ratio_series(&constant, window, &opts).unwrap().ratio;
    check(
        se == 0.0 && ip == 0.0,
        format!("constant: SE {se}, IP {ip}"),
    )?;
    check(
        ratio.defined_values().count() == 0 && !ratio.is_empty(),
        "constant: a ratio window is defined",
    )?;

    let triangle = Signal64::new((0..200).map(|k| (k % 2) as f64).collect(), 1.0).unwrap();
    let se = semantic_entropy(&symbolize(triangle.samples(), 0.0).unwrap()).unwrap();
    let ip = information_power(triangle.samples(), Product::Left).unwrap();
    check(
        close(se, 1.0) && close(ip, 2.0),
        format!("triangle: SE {se}, IP {ip}"),
    )?;
    let ratio = ratio_series(&triangle, window, &opts).unwrap().ratio;
    check(
        ratio.values().iter().all(|v| *v == Some(0.5)),
        "triangle: ratio not exactly 0.5",
    )?;

    let ramp: Vec<f64> = (0..200).map(|k| 0.25 * k as f64).collect();
    let symbols = symbolize(&ramp, 0.0).unwrap();
    let se = semantic_entropy(&symbols).unwrap();
    check(
        symbols.iter().all(|&c| c.id() == 7),
        "ramp: symbol other than 7",
    )?;
    check(close(se, 0.0), format!("ramp: SE {se}"))?;
    Ok("constant SE=IP=0 with all ratios undefined; triangle SE=1, IP=2, E/P=0.5; ramp all 7, SE=0".into())
}

// ---------------------------------------------------------------- 5

fn entropy_bounds() -> Outcome {
    let max13 = 13f64.log2();
    let max6 = 6f64.log2();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut highest = 0.0f64;
    for trial in 0..200 {
        let len = rng.random_range(3..2000);
        let x: Vec<f64> = match trial % 3 {
            0 => (0..len)
                .map(|_| rng.random_range(-3i32..=3) as f64)
                .collect(),
            1 => (0..len).map(|_| rng.random_range(-1.0..1.0)).collect(),
            _ => (0..len)
                .map(|k| (k / rng.random_range(1..4)) as f64)
                .collect(),
        };
        let h = semantic_entropy(&symbolize(&x, 0.0).unwrap()).unwrap();
        check(
            (0.0..=max13).contains(&h),
            format!("SE {h} out of [0, log2 13]"),
        )?;
        highest = highest.max(h);
    }
    let mut worst = 0.0f64;
    for seed in 0..20 {
        let noise = generate(
            &GeneratorSpec::new(GeneratorKind::WhiteNoise { sigma: 1.0 }, 256.0, 50_000).seed(seed),
        )
        .unwrap();
        let symbols = symbolize(noise.samples(), 0.0).unwrap();
        check(
            symbols.iter().all(|c| c.id() <= 6),
            format!("seed {seed}: sparse configuration in continuous noise"),
        )?;
        let h = semantic_entropy(&symbols).unwrap();
        check(h <= max6, format!("seed {seed}: SE {h} > log2 6"))?;
        worst = worst.max(h);
    }
    Ok(format!("200 signals within [0, {max13:.4}] (max {highest:.4}); noise uses ids 1-6 only, SE max {worst:.4} <= {max6:.4}"))
}

// ---------------------------------------------------------------- 6

fn permutation_entropy() -> Outcome {
    let monotone: Vec<f64> = (0..1000).map(|k| k as f64 * 0.3 - 7.0).collect();
    let h0 = permutation_entropy3(&monotone, TiePolicy::Stable).unwrap();
    check(h0 == 0.0, format!("monotone: {h0}"))?;
    let noise = generate(
        &GeneratorSpec::new(GeneratorKind::WhiteNoise { sigma: 1.0 }, 1.0, 100_000).seed(6),
    )
    .unwrap();
    let hn = permutation_entropy3(noise.samples(), TiePolicy::Stable).unwrap();
    check((hn - 6f64.log2()).abs() <= 0.05, format!("noise: {hn}"))?;
    let triangle: Vec<f64> = (0..1000).map(|k| (k % 2) as f64).collect();
    let ht = permutation_entropy3(&triangle, TiePolicy::Stable).unwrap();
    check(ht == 1.0, format!("triangle: {ht}"))?;
    Ok(format!(
        "monotone 0, iid noise {hn:.4} (target 2.585 +/- 0.05), triangle {ht}"
    ))
}

// ---------------------------------------------------------------- 7

fn power_consistency() -> Outcome {
    let (amplitude, f, fs) = (1.0, 10.0, 1000.0);
    let sine = generate(&GeneratorSpec::new(
        GeneratorKind::Sine {
            amplitude,
            frequency_hz: f,
            phase: 0.0,
        },
        fs,
        1000, // ten whole periods
    ))
    .unwrap();
    let discrete = information_power(sine.samples(), Product::Left).unwrap() * fs.powi(3);
    let w = 2.0 * PI * f;
    let continuous = amplitude * amplitude * w.powi(3) / PI;
    let rel = (discrete / continuous - 1.0).abs();
    check(rel < 0.02, format!("relative error {rel}"))?;
    Ok(format!(
        "mean|P|*fs^3 = {discrete:.1}, A^2 w^3/pi = {continuous:.1}, rel err {:.3}%",
        rel * 100.0
    ))
}

// ---------------------------------------------------------------- 8

fn seizure_surrogate() -> Outcome {
    let start = Instant::now();
    let params = SurrogateParams::default();
    let mut hits = 0;
    for seed in 0..100u64 {
        let signal = generate(&GeneratorSpec::seizure_surrogate(seed)).unwrap();
        let window = WindowSpec::from_seconds(2.0, 2.0, signal.sample_rate()).unwrap();
        let ratio = ratio_series(&signal, window, &MeasureOptions64::default())
            .unwrap()
            .ratio;
        let min = locate_min(&ratio).unwrap();
        let end = min.start_s + window.width() as f64 / signal.sample_rate();
        if min.start_s >= params.onset_s && end <= params.offset_s {
            hits += 1;
        }
    }
    let elapsed = start.elapsed();
    check(
        hits >= 95,
        format!("minimum inside the oscillation in {hits}/100"),
    )?;
    check(
        elapsed < Duration::from_secs(10),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "minimum inside [{}, {}) s in {hits}/100 seeds, {elapsed:.2?}",
        params.onset_s, params.offset_s
    ))
}

// ---------------------------------------------------------------- 9

fn tail_mean_r(k: f64, seed: u64) -> f64 {
    let net =
        OscillatorNetwork64::seeded(10, Coupling::Global(k), seed, 1.0, SignConvention::Standard)
            .unwrap();
    let r = integrate(&net, 0.01, 5000)
        .unwrap()
        .order_parameter_series();
    let tail = &r[r.len() - r.len() / 5..];
    tail.iter().sum::<f64>() / tail.len() as f64
}

fn kuramoto() -> Outcome {
    // free rotation
    let omega = vec![0.3, -1.2, 2.5, 0.0];
    let theta0 = vec![0.1, 1.0, -2.0, 3.0];
    let free = OscillatorNetwork64::new(
        omega.clone(),
        Coupling::Global(0.0),
        theta0.clone(),
        SignConvention::Standard,
    )
    .unwrap();
    let tr = integrate(&free, 0.01, 1000).unwrap();
    let mut drift = 0.0f64;
    for step in [0, 1, 500, 1000] {
        let t = tr.time(step);
        for i in 0..4 {
            drift = drift.max((tr.phases_at(step)[i] - (theta0[i] + omega[i] * t)).abs());
        }
    }
    check(drift <= 1e-9, format!("K=0 drift {drift:e}"))?;

    // equal-frequency pair from a 0.5 rad offset
    let pair = OscillatorNetwork64::new(
        vec![1.0, 1.0],
        Coupling::Global(1.0),
        vec![0.5, 0.0],
        SignConvention::Standard,
    )
    .unwrap();
    let tr = integrate(&pair, 0.01, 2000).unwrap();
    let gap: Vec<f64> = (0..tr.len())
        .map(|k| (tr.phases_at(k)[0] - tr.phases_at(k)[1]).abs())
        .collect();
    check(
        gap.windows(2).all(|w| w[1] <= w[0]),
        "pair gap not monotone",
    )?;
    let final_gap = *gap.last().unwrap();
    check(final_gap < 1e-3, format!("pair gap at 20 s: {final_gap:e}"))?;

    // synchrony on the seeded ten-oscillator network
    let strong = tail_mean_r(5.0, 0);
    let weak = tail_mean_r(0.1, 0);
    check(strong > 0.9, format!("r at K=5: {strong}"))?;
    check(weak < 0.4, format!("r at K=0.1: {weak}"))?;
    let seeds = 30u64;
    let strong_ok = (0..seeds).filter(|&s| tail_mean_r(5.0, s) > 0.9).count();
    let weak_ok = (0..seeds).filter(|&s| tail_mean_r(0.1, s) < 0.4).count();

    // convergence order against the closed-form pair solution
    let exact = 2.0 * ((1.0f64).tan() * (-2.0f64).exp()).atan();
    let err = |dt: f64| {
        let net = OscillatorNetwork64::new(
            vec![0.3, 0.3],
            Coupling::Global(1.0),
            vec![2.0, 0.0],
            SignConvention::Standard,
        )
        .unwrap();
        let p = integrate(&net, dt, (2.0 / dt).round() as usize).unwrap();
        let p = p.final_phases();
        ((p[0] - p[1]) - exact).abs()
    };
    let errors = [0.2, 0.1, 0.05].map(err);
    let orders: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    check(
        orders.iter().all(|o| (4.0..=5.0).contains(o)),
        format!("observed orders {orders:?}"),
    )?;
    Ok(format!(
        "K=0 drift {drift:.1e}; pair gap {final_gap:.1e} at 20 s; seed 0 r(K=5)={strong:.3}, r(K=0.1)={weak:.3} \
         (across {seeds} seeds: {strong_ok} and {weak_ok} meet the bounds); RK4 orders {:.2}, {:.2}",
        orders[0], orders[1]
    ))
}

// ---------------------------------------------------------------- 10

fn performance() -> Outcome {
    const CHANNELS: u64 = 8;
    let fs = 256.0;
    let samples = 3600 * 256;
    let signals: Vec<Signal64> = (0..CHANNELS)
        .map(|k| {
            generate(
                &GeneratorSpec::new(
                    GeneratorKind::SeizureSurrogate(SurrogateParams::default()),
                    fs,
                    samples,
                )
                .seed(k),
            )
            .unwrap()
            .with_label(format!("ch{k}"))
        })
        .collect();
    let table = ChannelTable::new(signals, "memory").unwrap();
    let settings = Settings {
        options: MeasureOptions64::default(),
        window_s: 2.0,
        hop_s: 2.0,
    };
    let run = || {
        let report = ratio_report(&table, None, &settings).unwrap();
        match write_report(&report, Format::Json).unwrap() {
            ReportOutput::Json(bytes) => bytes,
            ReportOutput::Csv(_) => unreachable!(),
        }
    };
    let start = Instant::now();
    let first = run();
    let elapsed = start.elapsed();
    let second = run();
    check(first == second, "two runs differ")?;
    check(
        elapsed < Duration::from_secs(5),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "{CHANNELS} x {samples} samples -> {} byte report in {elapsed:.2?}, identical on rerun",
        first.len()
    ))
}

// ---------------------------------------------------------------- 11

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).display().to_string();

    let surrogate = path("surrogate.csv");
    let (code, _, err) = run_captured([
        "geosym",
        "generate",
        "--kind",
        "seizure_surrogate",
        "--seed",
        "4",
        "--channels",
        "3",
        "--output",
        &surrogate,
    ]);
    check(
        code == 0,
        format!("generate failed: {}", String::from_utf8_lossy(&err)),
    )?;
    let triangle = path("triangle.csv");
    let (code, _, _) = run_captured([
        "geosym",
        "generate",
        "--kind",
        "triangle",
        "--low",
        "-1",
        "--high",
        "1",
        "--samples",
        "300",
        "--output",
        &triangle,
    ]);
    check(code == 0, "generate triangle failed")?;
    let network = path("network.json");
    std::fs::write(
        &network,
        r#"{"oscillators": 6, "coupling": {"global": 2.0}, "seed": 9}"#,
    )
    .unwrap();

    let matrix: Vec<Vec<&str>> = vec![
        vec![
            "generate",
            "--kind",
            "ar1",
            "--coefficient",
            "0.7",
            "--seed",
            "1",
            "--samples",
            "500",
        ],
        vec![
            "generate",
            "--kind",
            "sine",
            "--frequency-hz",
            "3",
            "--duration",
            "2",
        ],
        vec!["symbolize", &surrogate],
        vec!["symbolize", &triangle, "--tau", "0.05", "--format", "csv"],
        vec!["transitions", &surrogate, "--windowed"],
        vec!["transitions", &surrogate, "--format", "csv"],
        vec!["measure", &surrogate],
        vec![
            "measure",
            &surrogate,
            "--measure",
            "permutation_entropy,spectral_power",
            "--format",
            "csv",
        ],
        vec!["ratio", &surrogate],
        vec![
            "ratio",
            &surrogate,
            "--window-s",
            "1",
            "--hop-s",
            "0.5",
            "--product",
            "right",
            "--format",
            "csv",
        ],
        vec!["simulate", &network, "--duration", "10"],
        vec![
            "simulate",
            &network,
            "--steps",
            "400",
            "--convention",
            "paper",
            "--seed",
            "2",
            "--format",
            "csv",
        ],
    ];
    for args in &matrix {
        let line: Vec<&str> = std::iter::once("geosym")
            .chain(args.iter().copied())
            .collect();
        let (c1, o1, e1) = run_captured(&line);
        let (c2, o2, _) = run_captured(&line);
        check(
            c1 == 0,
            format!(
                "{} exited {c1}: {}",
                args.join(" "),
                String::from_utf8_lossy(&e1)
            ),
        )?;
        check(
            c1 == c2 && o1 == o2 && !o1.is_empty(),
            format!("{} differs between runs", args.join(" ")),
        )?;
    }
    Ok(format!(
        "{} command lines byte-identical across two runs",
        matrix.len()
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("configuration exhaustiveness", exhaustiveness),
        ("sign hierarchy", sign_hierarchy),
        ("transition structure", transition_structure),
        ("closed-form measures", closed_forms),
        ("entropy bounds", entropy_bounds),
        ("permutation entropy", permutation_entropy),
        ("power consistency", power_consistency),
        ("seizure surrogate", seizure_surrogate),
        ("kuramoto", kuramoto),
        ("performance", performance),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {why}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
