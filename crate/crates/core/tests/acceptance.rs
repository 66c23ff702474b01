//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qpd::bench::{evaluate, load_truth, measure_scaling, random_circuit, ScaleMode, ScalingSpec};
use qpd::circuit::{invert, layers, Circuit, Gate};
use qpd::detect::{
    detect_all, detect_creating_entanglement, detect_qpe, find_inverse_subcircuit, run_detector, CeMode,
    DetectorConfig, PatternKind, Payload,
};
use qpd::numerics::{purity, schmidt, CMatrix, StateVector};
use qpd::qasm::parse_circuit;
use qpd::sim;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn bell_worked_example() -> Outcome {
    let start = Instant::now();
    let src = std::fs::read_to_string(corpus().join("bell.qasm")).map_err(|e| e.to_string())?;
    let circuit = parse_circuit(&src).map_err(|e| e.to_string())?;
    let report = detect_all("bell.qasm", &circuit, &DetectorConfig::default());
    let ce: Vec<_> = report.matches.iter().filter(|m| m.kind == PatternKind::CE).collect();
    check(ce.len() == 1, format!("expected one CE match, got {}", ce.len()))?;
    let cx = circuit.instructions().iter().position(|i| i.is_gate(Gate::CX)).unwrap();
    check(ce[0].span == [cx, cx], format!("CE at {:?}, cx at {cx}", ce[0].span))?;
    let Payload::Entanglement { coefficients, .. } = &ce[0].payload else {
        return Err("CE payload".into());
    };
    check(
        coefficients.len() == 2 && coefficients.iter().all(|s| (s - FRAC_1_SQRT_2).abs() <= 1e-10),
        format!("coefficients {coefficients:?}"),
    )?;
    let trace = sim::trace(&circuit, 16).map_err(|e| e.to_string())?;
    let before = schmidt(trace.state_before(cx), &[0]).map_err(|e| e.to_string())?;
    check(
        before.rank == 1 && (before.coefficients[0] - 1.0).abs() <= 1e-10,
        format!("pre-cx coefficients {:?}", before.coefficients),
    )?;
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!(
        "CE at instruction {cx}, coefficients {coefficients:.12?}, pre-cx rank 1, {elapsed:.2?}"
    ))
}

fn corpus_accuracy() -> Outcome {
    let start = Instant::now();
    let truth = load_truth(&corpus().join("truth.json")).map_err(|e| e.to_string())?;
    let report = evaluate(&corpus(), &truth, &DetectorConfig::default());
    if let Some(f) = report.files.iter().find(|f| f.error.is_some()) {
        return Err(format!("{}: {}", f.file.display(), f.error.as_deref().unwrap()));
    }
    let mut notes = Vec::new();
    for (kind, s) in &report.per_pattern {
        if matches!(kind, PatternKind::US | PatternKind::CE) {
            check(
                s.precision == Some(1.0) && s.recall == Some(1.0) && s.f1 == 1.0,
                format!("{kind}: {s:?}"),
            )?;
        }
        if s.tp + s.fn_ > 0 {
            check(s.recall == Some(1.0), format!("{kind} recall {:?}", s.recall))?;
        }
        if let Some(p) = s.precision {
            check(p >= 0.75, format!("{kind} precision {p}"))?;
        }
        notes.push(format!("{kind} P={} R={}", fmt(s.precision), fmt(s.recall)));
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} files; {}; {elapsed:.2?}",
        report.files.len(),
        notes.join(", ")
    ))
}

fn fmt(v: Option<f64>) -> String {
    v.map_or("-".into(), |v| format!("{v:.2}"))
}

/// Product states, sometimes entangled on one pair by a controlled phase,
/// sometimes replaced by a fully random state.
fn random_structured_state(n: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let mut state = StateVector::random(1, rng);
    for _ in 1..n {
        let fresh = StateVector::random(1, rng);
        state = state.tensor(&fresh);
    }
    if rng.gen_bool(0.5) {
        // entangle a random pair with a controlled phase
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n)) % n;
        sim::apply_gate(&mut state, Gate::CP, &[rng.gen_range(0.1..PI)], &[a, b]).unwrap();
    }
    if rng.gen_bool(0.3) {
        state = StateVector::random(n, rng);
    }
    state
}

fn entanglement_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut entangled, mut product) = (0, 0);
    for trial in 0..600 {
        let n = 2 + trial % 3;
        let state = random_structured_state(n, &mut rng);
        for q in 0..n {
            let rank_verdict = schmidt(&state, &[q]).map_err(|e| e.to_string())?.rank > 1;
            let purity_verdict = purity(&state, &[q]).map_err(|e| e.to_string())? < 1.0 - 1e-7;
            check(
                rank_verdict == purity_verdict,
                format!("trial {trial} qubit {q} disagrees"),
            )?;
            if rank_verdict {
                entangled += 1;
            } else {
                product += 1;
            }
        }
    }
    Ok(format!(
        "600 states, 0 disagreements ({entangled} entangled cuts, {product} product cuts)"
    ))
}

fn ce_mode_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut total = 0;
    for seed in 0..240u64 {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=10);
        let c = random_circuit(n, m, seed);
        let trace = sim::trace(&c, 16).map_err(|e| e.to_string())?;
        let faithful = detect_creating_entanglement(&c, &trace, CeMode::Faithful);
        let fast = detect_creating_entanglement(&c, &trace, CeMode::Fast);
        check(faithful == fast, format!("seed {seed} (n={n}, m={m}) differs"))?;
        total += faithful.len();
    }
    Ok(format!("240 circuits identical, {total} CE matches in total"))
}

fn inverse_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for seed in 0..100u64 {
        let n = rng.gen_range(1..=5);
        let m = rng.gen_range(2..=6);
        let a = random_circuit(n, m, 1000 + seed);
        check(a.gate_count() >= 2, format!("seed {seed}: too few gates"))?;
        let c = a
            .compose(&invert(&a).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let hit = find_inverse_subcircuit(&c, 2, 1e-9).ok_or(format!("seed {seed}: no hit"))?;
        let lc = layers(&c);
        let ra = lc.slice(&c, hit.a, hit.size).map_err(|e| e.to_string())?;
        let rb = lc.slice(&c, hit.b, hit.size).map_err(|e| e.to_string())?;
        let u = sim::unitary(&ra.compose(&rb).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let d = u.max_abs_diff(&CMatrix::identity(1 << n));
        worst = worst.max(d);
        check(d <= 1e-9, format!("seed {seed}: |U - I| = {d:e}"))?;
    }
    Ok(format!("100 hits, max |U_A U_B - I| = {worst:.1e}"))
}

/// Three counting qubits estimating the phase of `p(theta)`.
fn textbook_qpe(theta: f64, with_iqft: bool) -> Circuit {
    let mut c = Circuit::with_registers(&[("c", 3), ("t", 1)], &[]);
    c.gate(Gate::H, &[], &[3]);
    for q in 0..3 {
        c.gate(Gate::H, &[], &[q]);
    }
    for q in 0..3 {
        c.gate(Gate::CP, &[theta * f64::from(1u32 << q)], &[q, 3]);
    }
    if with_iqft {
        c.gate(Gate::Swap, &[], &[0, 2])
            .gate(Gate::H, &[], &[0])
            .gate(Gate::CP, &[-PI / 2.0], &[0, 1])
            .gate(Gate::H, &[], &[1])
            .gate(Gate::CP, &[-PI / 4.0], &[0, 2])
            .gate(Gate::CP, &[-PI / 2.0], &[1, 2])
            .gate(Gate::H, &[], &[2]);
    }
    c
}

/// Conjugate-transposed DFT matrix, F_jk = exp(2 pi i jk / N) / sqrt(N),
/// with qubit 0 as the least significant bit of j and k.
fn dft_dagger(n: usize) -> CMatrix {
    let dim = 1usize << n;
    let mut m = CMatrix::zeros(dim, dim);
    for j in 0..dim {
        for k in 0..dim {
            let phase = 2.0 * PI * (j * k) as f64 / dim as f64;
            m[(j, k)] = Complex64::from_polar(1.0 / (dim as f64).sqrt(), phase).conj();
        }
    }
    m
}

fn qpe_detection() -> Outcome {
    let c = textbook_qpe(2.0 * PI * 0.625, true);
    let found = detect_qpe(&c, true, 1e-6);
    check(found.len() == 1, format!("expected one QPE match, got {}", found.len()))?;
    let Payload::PhaseEstimation {
        counting,
        stages,
        verified,
        ..
    } = &found[0].payload
    else {
        return Err("QPE payload".into());
    };
    check(counting.len() == 3, format!("counting set {counting:?}"))?;
    check(*verified == Some(true), "detector verification did not confirm")?;
    check(
        detect_qpe(&textbook_qpe(2.0 * PI * 0.625, false), false, 1e-6).is_empty(),
        "match without inverse QFT",
    )?;

    // independent check of the reported stage-3 block
    let mut block = Circuit::new(3);
    for inst in &c.instructions()[stages[2][0]..=stages[2][1]] {
        let (g, p) = inst.unitary_gate().ok_or("non-unitary in block")?;
        block.gate(g, p, &inst.qubits);
    }
    let u = sim::unitary(&block).map_err(|e| e.to_string())?;
    let d = sim::phase_distance(&u, &dft_dagger(3));
    check(d <= 1e-6, format!("stage 3 differs from the inverse DFT by {d:e}"))?;
    Ok(format!(
        "|C| = 3, stages {stages:?}, stage-3 distance to inverse DFT {d:.1e}"
    ))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn scalability() -> Outcome {
    let config = DetectorConfig::default();
    let mut notes = Vec::new();
    for (n, m) in [(1000, 5), (3, 1000)] {
        let c = random_circuit(n, m, 11);
        for kind in [PatternKind::BE, PatternKind::AE, PatternKind::QPE, PatternKind::PSM] {
            let (res, t) = timed(|| run_detector(kind, &c, &config));
            res.map_err(|e| e.to_string())?;
            check(t < Duration::from_secs(5), format!("{kind} on n={n}, m={m} took {t:?}"))?;
        }
        notes.push(format!("n={n} m={m} ok"));
    }
    let wide = random_circuit(12, 5, 11);
    let (res, t) = timed(|| run_detector(PatternKind::CE, &wide, &config));
    res.map_err(|e| e.to_string())?;
    check(t < Duration::from_secs(120), format!("CE at n=12 took {t:?}"))?;
    notes.push(format!("CE n=12 m=5 {t:.2?}"));

    let spec = ScalingSpec {
        mode: ScaleMode::Width,
        fixed: 5,
        sizes: (6..=12).collect(),
        repeats: 5,
        detectors: vec![PatternKind::CE],
        seed: 3,
    };
    let rows = measure_scaling(&spec, &config);
    let means: Vec<f64> = rows.iter().map(|r| r.mean_s.unwrap_or(f64::NAN)).collect();
    check(
        means.windows(2).all(|w| w[1] > w[0]),
        format!("CE width means not increasing: {means:?}"),
    )?;
    notes.push("CE means increase over n=6..12".into());

    let too_wide = random_circuit(20, 2, 1);
    let (res, t) = timed(|| run_detector(PatternKind::CE, &too_wide, &config));
    match res {
        Err(sim::SimError::WidthExceeded { .. }) if t < Duration::from_secs(1) => {}
        other => return Err(format!("n=20 CE: expected a capacity error, got {other:?} after {t:?}")),
    }
    notes.push("n=20 rejected".into());
    Ok(notes.join("; "))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_qpd");
    let run = |args: &[&str]| -> Result<Vec<u8>, String> {
        let out = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        check(out.status.success(), format!("qpd {args:?} failed"))?;
        Ok(out.stdout)
    };
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus())
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "qasm"))
        .collect();
    files.sort();
    for f in &files {
        let path = f.to_str().unwrap();
        let args = ["detect", path, "--format", "json", "--qpe-verify", "--unc-copy-swap"];
        check(
            run(&args)? == run(&args)?,
            format!("{} differs between runs", f.display()),
        )?;
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let a = dir.path().join("a.qasm");
    let b = dir.path().join("b.qasm");
    for p in [&a, &b] {
        run(&[
            "random",
            "--qubits",
            "3",
            "--depth",
            "5",
            "--seed",
            "7",
            "--out",
            p.to_str().unwrap(),
        ])?;
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    check(ta == tb, "random output differs")?;
    Ok(format!(
        "{} corpus files byte-identical; random --seed 7 identical",
        files.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 worked example", bell_worked_example),
        ("2 corpus accuracy", corpus_accuracy),
        ("3 entanglement oracle", entanglement_oracle),
        ("4 CE mode equivalence", ce_mode_equivalence),
        ("5 inverse soundness", inverse_soundness),
        ("6 QPE detection", qpe_detection),
        ("7 scalability", scalability),
        ("8 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
