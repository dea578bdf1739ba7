//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use floatconv::export::{self, SvgOptions};
use floatconv::pulley::{self, CounterElement, PulleyProfile};
use floatconv::{Error, FloatingConverter, ForceCharacteristic, GripperModel};

const SEED: u64 = 0x5eed_f10a;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(a.abs())
    }
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn random_tabulated(rng: &mut ChaCha8Rng) -> ForceCharacteristic<f64> {
    let n = rng.gen_range(2..10);
    let mut x = 0.0;
    let mut pts = vec![(0.0, rng.gen_range(0.0..5.0))];
    for _ in 0..n {
        x += rng.gen_range(0.005..0.04);
        pts.push((x, rng.gen_range(0.0..40.0)));
    }
    ForceCharacteristic::tabulated(pts).unwrap()
}

fn balance_exactness(rng: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let target = if i % 2 == 0 {
            ForceCharacteristic::linear(rng.gen_range(10.0..500.0), rng.gen_range(0.05..0.3)).unwrap()
        } else {
            random_tabulated(rng)
        };
        let radius = rng.gen_range(0.005..0.05);
        let load = rng.gen_range(1.0..50.0);
        let counter = CounterElement::weight(load).unwrap();
        let profile = pulley::synthesize_weight_counter(&target, radius, load, 512).unwrap();
        let peak = target.peak_force(4096);
        let theta_max = profile.theta_max();
        for j in 0..512 {
            let theta = theta_max * j as f64 / 511.0;
            let res = pulley::balance_residual(&profile, &counter, &target, theta).unwrap();
            worst = worst.max(res.abs() / peak);
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-9 && elapsed < Duration::from_secs(1),
        format!("max |residual|/peak = {worst:.3e}, {elapsed:.2?}"),
    )
}

fn slope_closed_form(rng: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let k = 10f64.powf(rng.gen_range(0.0..4.0));
        let radius = 10f64.powf(rng.gen_range(-3.0..-0.7));
        let load = 10f64.powf(rng.gen_range(-1.0..3.0));
        let target = ForceCharacteristic::linear(k, radius * rng.gen_range(1.0..10.0)).unwrap();
        let a = pulley::synthesize_weight_counter(&target, radius, load, 16)
            .unwrap()
            .slope()
            .unwrap();
        worst = worst.max(rel(a, k * radius * radius / load));
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-12 && elapsed < Duration::from_secs(1),
        format!("max relative slope error = {worst:.3e}, {elapsed:.2?}"),
    )
}

fn energy_identity(rng: &mut ChaCha8Rng) -> Outcome {
    let mut identity: f64 = 0.0;
    for &(k, radius, load) in &[
        (124.55_f64, 0.02_f64, 10.0_f64),
        (100.0, 0.02, 10.0),
        (37.0, 0.013, 2.5),
    ] {
        let target = ForceCharacteristic::linear(k, 0.2).unwrap();
        let profile = pulley::synthesize_weight_counter(&target, radius, load, 512).unwrap();
        for &(theta, _) in profile.samples().iter().skip(1) {
            let stored = 0.5 * k * (radius * theta).powi(2);
            identity = identity.max(rel(load * profile.payout(theta).unwrap(), stored));
        }
    }

    let left = ForceCharacteristic::<f64>::linear(100.0, 0.12).unwrap();
    let spring = CounterElement::spring(10.0, 40.0).unwrap();
    let weight = CounterElement::weight(10.0).unwrap();
    let converters = [
        FloatingConverter::new(
            left.clone(),
            pulley::synthesize_spring_counter(&left, 0.02, &spring, 2048).unwrap(),
            spring,
        ),
        FloatingConverter::new(
            left.clone(),
            pulley::synthesize_weight_counter(&left, 0.02, 10.0, 512).unwrap(),
            weight,
        ),
    ];
    let mut closure: f64 = 0.0;
    for i in 0..100 {
        let conv = converters[i % 2].clone().with_gap(rng.gen_range(0.0..0.03)).unwrap();
        let u0 = rng.gen_range(0.0..conv.u_max());
        let u1 = rng.gen_range(0.0..conv.u_max());
        let l = conv.energy_ledger(u0, u1).unwrap();
        let scale = l
            .delta_spring
            .abs()
            .max(l.delta_counter.abs())
            .max(l.operator_work.abs());
        if scale > 0.0 {
            closure = closure.max(l.closure_error().abs() / scale);
        }
    }
    outcome(
        identity <= 1e-9 && closure <= 1e-6,
        format!("payout identity {identity:.3e}, ledger closure {closure:.3e}"),
    )
}

fn matched_converter(k: f64, x_max: f64) -> FloatingConverter<f64> {
    let left = ForceCharacteristic::linear(k, x_max).unwrap();
    let profile = pulley::synthesize_weight_counter(&left, 0.02, 10.0, 512).unwrap();
    FloatingConverter::new(left, profile, CounterElement::weight(10.0).unwrap())
}

fn constant_operating_force() -> Outcome {
    let k = 100.0;
    let base = matched_converter(k, 0.12);
    let mut spread: f64 = 0.0;
    let mut level: f64 = 0.0;
    let mut doubling: f64 = 0.0;
    let mean = |gap: f64| -> (f64, f64) {
        let t = base.clone().with_gap(gap).unwrap().sweep(gap, 0.12, 401).unwrap();
        let ops: Vec<f64> = t.rows.iter().map(|r| r.operating_force_ideal).collect();
        let lo = ops.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ops.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (ops.iter().sum::<f64>() / ops.len() as f64, hi - lo)
    };
    for gap in [0.005, 0.010, 0.020] {
        let (f, s) = mean(gap);
        spread = spread.max(s);
        level = level.max((f - k * gap).abs());
        let (f2, _) = mean(2.0 * gap);
        doubling = doubling.max((f2 - 2.0 * f).abs());
    }
    outcome(
        spread <= 1e-9 && level <= 1e-9 && doubling <= 1e-9,
        format!("spread {spread:.3e} N, |F - kx| {level:.3e} N, |F(2x) - 2F(x)| {doubling:.3e} N"),
    )
}

fn ratio_calibration() -> Outcome {
    let start = Instant::now();
    let base = matched_converter(124.55, 0.2);
    let ratio = |gap: f64, mu: f64| {
        let conv = base.clone().with_gap(gap).unwrap().with_friction(mu, 0.0).unwrap();
        conv.sweep(0.0, conv.u_max(), 201).unwrap().summary().ratio_peak
    };
    let r10 = ratio(0.010, 0.0);
    let r20 = ratio(0.020, 0.0);
    let r0 = ratio(0.0, 0.003);
    let elapsed = start.elapsed();
    // Hardware measured about 8% at 20 mm; the ideal model is linear in the
    // gap and is kept at 10% rather than fitted to that point.
    let note_holds = (r20 - 0.08).abs() > 0.01;
    println!(
        "note: 20 mm gap gives {:.1}% in the ideal model; the measured hardware value was about 8%",
        r20 * 100.0
    );
    outcome(
        (r10 - 0.050).abs() <= 1e-9
            && (r20 - 0.100).abs() <= 1e-9
            && r0 <= 0.003 + 1e-6
            && note_holds
            && elapsed < Duration::from_secs(1),
        format!(
            "10 mm {:.4}%, 20 mm {:.4}%, friction-only {:.4}%, {elapsed:.2?}",
            r10 * 100.0,
            r20 * 100.0,
            r0 * 100.0
        ),
    )
}

fn truncation_offset() -> Outcome {
    let k = 124.55;
    let radius = 0.02;
    let load = 10.0;
    let target = ForceCharacteristic::linear(k, 0.125).unwrap();
    let counter = CounterElement::weight(load).unwrap();
    let ideal = pulley::synthesize_weight_counter_over(&target, radius, load, 512, 345f64.to_radians()).unwrap();
    let profile = pulley::truncate_profile(&ideal, 0.010, 0.040).unwrap();
    let residual = |theta: f64| pulley::balance_residual(&profile, &counter, &target, theta).unwrap();
    let r0 = residual(0.0);
    let peak = k * 0.125;

    let n = 100_000;
    let theta_max = profile.theta_max();
    let mut root = None;
    let mut monotone = true;
    let mut last = r0;
    for i in 1..=n {
        let theta = theta_max * i as f64 / n as f64;
        let r = residual(theta);
        if root.is_none() {
            monotone &= r >= last - 1e-12;
            last = r;
            if r >= -1e-9 * peak {
                root = Some(theta);
            }
        }
    }
    let panel = theta_max / (profile.len() - 1) as f64;
    let expected = 0.010 * load / (k * radius * radius);
    match root {
        Some(theta) => outcome(
            format!("{r0:.6}") == "-5.000000"
                && (theta - expected).abs() <= panel
                && (theta - 2.007).abs() <= panel
                && monotone,
            format!("residual(0) = {r0:.6} N, zero at θ = {theta:.4} rad (panel {panel:.4} rad)"),
        ),
        None => outcome(false, format!("residual(0) = {r0:.6} N, no zero crossing found")),
    }
}

fn reference_radii(
    force: impl Fn(f64) -> f64,
    radius: f64,
    t0: f64,
    k2: f64,
    theta_max: f64,
    steps: usize,
) -> Vec<f64> {
    let h = theta_max / steps as f64;
    let rhs = |theta: f64, s: f64| radius * force(radius * theta) / (t0 + k2 * s);
    let mut s = 0.0;
    let mut out = vec![radius * force(0.0) / t0];
    for i in 0..steps {
        let theta = i as f64 * h;
        let a = rhs(theta, s);
        let b = rhs(theta + 0.5 * h, s + 0.5 * h * a);
        let c = rhs(theta + 0.5 * h, s + 0.5 * h * b);
        let d = rhs(theta + h, s + h * c);
        s += h / 6.0 * (a + 2.0 * b + 2.0 * c + d);
        out.push(radius * force(radius * (i + 1) as f64 * h) / (t0 + k2 * s));
    }
    out
}

/// Target, its force law as a plain closure, R, T0, k2.
type OracleCase = (ForceCharacteristic<f64>, Box<dyn Fn(f64) -> f64>, f64, f64, f64);

fn spring_counter_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    let cases: [OracleCase; 2] = [
        (
            ForceCharacteristic::linear(100.0, 0.12).unwrap(),
            Box::new(|x| 100.0 * x),
            0.02,
            10.0,
            50.0,
        ),
        (
            ForceCharacteristic::power_law(0.5, 0.05, 2.0, 0.1).unwrap(),
            Box::new(|x: f64| 0.5 / (x + 0.05).powi(2)),
            0.02,
            50.0,
            100.0,
        ),
    ];
    for (target, f, radius, t0, k2) in &cases {
        let counter = CounterElement::spring(*t0, *k2).unwrap();
        let profile = pulley::synthesize_spring_counter(target, *radius, &counter, 2048).unwrap();
        let fine = reference_radii(f, *radius, *t0, *k2, target.x_max() / radius, 20480);
        let peak = fine.iter().cloned().fold(0.0, f64::max);
        for (j, &(_, r)) in profile.samples().iter().enumerate() {
            worst = worst.max((r - fine[10 * j]).abs() / peak);
        }
    }
    let target = ForceCharacteristic::linear(100.0, 0.12).unwrap();
    let zero_rate =
        pulley::synthesize_spring_counter(&target, 0.02, &CounterElement::spring(10.0, 0.0).unwrap(), 2048).unwrap();
    let weight = pulley::synthesize_weight_counter(&target, 0.02, 10.0, 2049).unwrap();
    let identical = zero_rate.samples() == weight.samples();
    outcome(
        worst <= 1e-6 && identical,
        format!("max relative radius deviation {worst:.3e}, k2 = 0 identical to weight case: {identical}"),
    )
}

fn gripper(cap: f64, latch: bool) -> GripperModel<f64> {
    GripperModel {
        converter: matched_converter(100.0, 0.12),
        stage_travel: 0.2,
        stage_step: 0.01,
        latch_holds: latch,
        actuator_force_cap: cap,
        object_position: 0.05,
        object_rigid: true,
    }
}

fn grasp(model: &GripperModel<f64>) -> Result<(f64, floatconv::GraspTraceF64), Error> {
    let plan = model.plan_grasp(10.0)?;
    Ok((plan.gap_x, model.simulate_grasp(&plan)?))
}

fn gripper_amplification() -> Outcome {
    let (gap, trace) = match grasp(&gripper(2.0, true)) {
        Ok(v) => v,
        Err(e) => return outcome(false, format!("nominal grasp failed: {e}")),
    };
    let max_act = trace.max_actuator_force();
    let grip = trace.final_grip_force();
    let amp = trace.amplification().unwrap_or(0.0);
    let stall = matches!(grasp(&gripper(0.5, true)), Err(Error::ActuatorStall { .. }));
    let backdrive = matches!(grasp(&gripper(2.0, false)), Err(Error::BackdriveFault { .. }));
    outcome(
        (gap - 0.010).abs() <= 1e-12
            && (max_act - 1.0).abs() <= 1e-6
            && (grip - 10.0).abs() <= 1e-6
            && (amp - 10.0).abs() <= 1e-6
            && stall
            && backdrive,
        format!(
            "gap {:.3} mm, max actuator {max_act:.6} N, final grip {grip:.6} N, amplification {amp:.6}, \
             cap 0.5 stalls: {stall}, latch off backdrives: {backdrive}",
            gap * 1000.0
        ),
    )
}

fn arc_length_oracle(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let a: f64 = rng.gen_range(1e-3..2e-2);
        let theta_max: f64 = rng.gen_range(0.5..6.5);
        let profile = PulleyProfile::sampled(0.02, theta_max, 2049, |th| a * th).unwrap();
        let closed = 0.5 * a * (theta_max * (theta_max * theta_max + 1.0).sqrt() + theta_max.asinh());
        worst = worst.max(rel(profile.arc_length(theta_max).unwrap(), closed));
    }
    outcome(worst <= 1e-6, format!("max relative arc-length error {worst:.3e}"))
}

fn run_cli(args: &[&std::ffi::OsStr]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_floatconv"))
        .args(args)
        .output()
        .unwrap()
}

fn io_determinism() -> Outcome {
    let mut failures = Vec::new();

    let target = ForceCharacteristic::linear(124.55, 0.125).unwrap();
    let profile = pulley::synthesize_weight_counter_over(&target, 0.02, 10.0, 512, 345f64.to_radians()).unwrap();
    let csv = export::profile_to_csv(&profile);
    let back = export::read_profile_csv(&csv, 0.02).unwrap();
    if export::profile_to_csv(&back) != csv {
        failures.push("CSV round trip not lossless".to_owned());
    }

    let dir = tempfile::tempdir().unwrap();
    let out = |name: &str| dir.path().join(name);
    let cfg = configs_dir();
    let prototype = cfg.join("prototype_pulley.json");
    let ideal = cfg.join("ideal_linear.json");
    let runs: Vec<(&str, Vec<std::ffi::OsString>)> = vec![
        (
            "synthesize",
            vec![
                "synthesize".into(),
                "--config".into(),
                prototype.clone().into(),
                "--out".into(),
            ],
        ),
        (
            "sweep",
            vec![
                "sweep".into(),
                "--config".into(),
                prototype.clone().into(),
                "--gap-mm".into(),
                "10".into(),
                "--out".into(),
            ],
        ),
        (
            "grasp",
            vec![
                "grasp".into(),
                "--config".into(),
                ideal.clone().into(),
                "--target-force-n".into(),
                "10".into(),
                "--out".into(),
            ],
        ),
    ];
    for (name, args) in &runs {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let path = out(&format!("{name}{rep}.csv"));
            let mut full: Vec<&std::ffi::OsStr> = args.iter().map(|a| a.as_os_str()).collect();
            full.push(path.as_os_str());
            let o = run_cli(&full);
            if !o.status.success() {
                failures.push(format!("{name} exited {:?}", o.status.code()));
            }
            outputs.push(std::fs::read(&path).unwrap_or_default());
        }
        if outputs[0] != outputs[1] || outputs[0].is_empty() {
            failures.push(format!("{name} output differs between runs"));
        }
    }
    let mut svgs = Vec::new();
    for rep in 0..2 {
        let path = out(&format!("p{rep}.svg"));
        let o = run_cli(&[
            "export-svg".as_ref(),
            "--profile".as_ref(),
            out("synthesize0.csv").as_os_str(),
            "--out".as_ref(),
            path.as_os_str(),
        ]);
        if !o.status.success() {
            failures.push(format!("export-svg exited {:?}", o.status.code()));
        }
        svgs.push(std::fs::read(&path).unwrap_or_default());
    }
    if svgs[0] != svgs[1] || svgs[0].is_empty() {
        failures.push("SVG output differs between runs".to_owned());
    }
    let opts = SvgOptions::default();
    if export::profile_to_svg(&profile, &opts).unwrap() != export::profile_to_svg(&profile, &opts).unwrap() {
        failures.push("in-process SVG differs".to_owned());
    }

    for name in ["ideal_linear.json", "spring_counter.json"] {
        let config = cfg.join(name);
        let csv_path = out(&format!("{name}.csv"));
        let s = run_cli(&[
            "synthesize".as_ref(),
            "--config".as_ref(),
            config.as_os_str(),
            "--out".as_ref(),
            csv_path.as_os_str(),
        ]);
        let v = run_cli(&[
            "verify".as_ref(),
            "--config".as_ref(),
            config.as_os_str(),
            "--profile".as_ref(),
            csv_path.as_os_str(),
        ]);
        if !s.status.success() || v.status.code() != Some(0) {
            failures.push(format!(
                "{name}: synthesize {:?}, verify {:?} {}",
                s.status.code(),
                v.status.code(),
                String::from_utf8_lossy(&v.stderr).trim()
            ));
        }
    }

    if failures.is_empty() {
        outcome(
            true,
            "round trip lossless, outputs byte-identical, synthesize→verify exit 0",
        )
    } else {
        outcome(false, failures.join("; "))
    }
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let criteria: Vec<(&str, Outcome)> = vec![
        ("balance exactness", balance_exactness(&mut rng)),
        ("slope closed form", slope_closed_form(&mut rng)),
        ("energy identity and ledger closure", energy_identity(&mut rng)),
        ("constant operating force", constant_operating_force()),
        ("operating-force ratio calibration", ratio_calibration()),
        ("truncation offset", truncation_offset()),
        ("spring-counter oracle", spring_counter_oracle()),
        ("gripper amplification", gripper_amplification()),
        ("arc-length oracle", arc_length_oracle(&mut rng)),
        ("I/O determinism", io_determinism()),
    ];
    let mut failed = 0;
    for (i, (name, o)) in criteria.iter().enumerate() {
        println!(
            "{} {:>2} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
        if !o.pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
