//! Acceptance suite. One PASS/FAIL line per criterion with the measured
//! figure next to its bound; exits nonzero if anything is red.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, TAU};
use std::path::Path;
use std::time::Instant;

use coherent_clock::classical::Units;
use coherent_clock::clock::{
    amplitude_correlation, classical_limit_check, clock_symbol_q1, default_amplitude_sweep, default_phase_sweep,
    phase_correlation,
};
use coherent_clock::coherent::{
    overlap, project_coherent, resolution_of_unity, sample_xi, su2_coherent, CoherentLabel, ReducedLabel,
};
use coherent_clock::fit::fit_sinusoid;
use coherent_clock::fock::{casimir, spin_operators, PhysOperator, Spin};
use coherent_clock::quadrature::{GaugeGrid, RadialGrid, SphereGrid};
use coherent_clock::symbols::{
    project_lower_symbol, radial_grid_for, reconstruct_operator, s3_lower_symbol, s3_upper_shape,
    spin_symbols_closed_form, spin_symbols_from_matrices, FullLowerSymbol,
};
use coherent_clock::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x00C0_FFEE;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED + salt)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values
        .into_iter()
        .fold(0.0, |a: f64, v| if v.is_nan() || a.is_nan() { f64::NAN } else { a.max(v) })
}

fn resolution_of_unity_check() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for two_j in [1u32, 2, 4, 10, 20] {
        let spin = Spin::from_two_j(two_j);
        let start = Instant::now();
        let grid = SphereGrid::for_spin(spin);
        let dev = resolution_of_unity(spin, &grid).max_abs_diff(&PhysOperator::identity(spin.m_prime()));
        let secs = start.elapsed().as_secs_f64();
        pass &= dev < 1e-10 && secs < 1.0;
        parts.push(format!("j={spin}: {dev:.1e} in {secs:.3}s"));
    }
    Outcome {
        pass,
        detail: format!("{} (bound 1e-10, < 1 s each)", parts.join(", ")),
    }
}

fn overlap_check() -> Outcome {
    let mut rng = rng(2);
    let mut parts = Vec::new();
    let mut worst = 0.0f64;
    for two_j in [2u32, 20, 50] {
        let spin = Spin::from_two_j(two_j);
        let dev = max_of((0..1000).map(|_| {
            let a = ReducedLabel::new(sample_xi(&mut rng), spin);
            let b = ReducedLabel::new(sample_xi(&mut rng), spin);
            let closed = overlap(&a, &b).unwrap();
            (su2_coherent(&a).inner(&su2_coherent(&b)).unwrap() - closed).norm()
        }));
        worst = worst.max(dev);
        parts.push(format!("j={spin}: {dev:.1e}"));
    }
    Outcome {
        pass: worst < 1e-12,
        detail: format!("{} over 1000 pairs each (bound 1e-12)", parts.join(", ")),
    }
}

fn projection_check() -> Outcome {
    let mut rng = rng(3);
    let dev = max_of((0..500).map(|_| {
        let m = rng.gen_range(0..=50u32);
        let mut z = || c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let (alpha, mut beta) = (z(), z());
        if beta.norm() < 1e-3 {
            beta += 0.5;
        }
        let label = CoherentLabel::new(alpha, beta);
        let chart = label.chart().unwrap();
        let expected = su2_coherent(&ReducedLabel::new(chart.xi, Spin::from_m_prime(m)))
            .scale(Complex64::from_polar(1.0, f64::from(m) * chart.theta));
        project_coherent(&label, m).normalized().unwrap().max_abs_diff(&expected)
    }));
    Outcome {
        pass: dev < 1e-12,
        detail: format!("max {dev:.1e} over 500 labels, m' <= 50 (bound 1e-12)"),
    }
}

fn spin_symbol_check() -> Outcome {
    let mut rng = rng(4);
    let (mut d1, mut d2, mut d3, mut mirrored, mut sphere) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for two_j in [1u32, 2, 10, 50] {
        let spin = Spin::from_two_j(two_j);
        for _ in 0..200 {
            let label = ReducedLabel::new(sample_xi(&mut rng), spin);
            let closed = spin_symbols_closed_form(&label);
            let matrix = spin_symbols_from_matrices(&label);
            d1 = d1.max((closed.s1 - matrix.s1).abs());
            d2 = d2.max((closed.s2 - matrix.s2).abs());
            d3 = d3.max((closed.s3 - matrix.s3).abs());
            mirrored = mirrored.max((closed.s2 + matrix.s2).abs());
            sphere = sphere.max((closed.norm_sqr() - spin.j() * spin.j()).abs());
        }
    }
    Outcome {
        pass: d1 < 1e-12 && d2 < 1e-12 && d3 < 1e-12 && sphere < 1e-10,
        detail: format!(
            "s1 {d1:.1e}, s2 {d2:.1e}, s3 {d3:.1e} (bound 1e-12); sphere {sphere:.1e} (bound 1e-10); \
             s2 agrees with the opposite sign to {mirrored:.1e}"
        ),
    }
}

fn su2_check() -> Outcome {
    let i = Complex64::i();
    let mut pass = true;
    let mut parts = Vec::new();
    for m in [1u32, 2, 20, 200] {
        let s = spin_operators(m);
        let [s1, s2, s3] = s.as_array();
        let devs = [
            s1.commutator(s2).unwrap().max_abs_diff(&s3.scale(i)),
            s2.commutator(s3).unwrap().max_abs_diff(&s1.scale(i)),
            s3.commutator(s1).unwrap().max_abs_diff(&s2.scale(i)),
        ];
        let j = f64::from(m) / 2.0;
        let cas = casimir(m).max_abs_diff(&PhysOperator::identity(m).scale(Complex64::from(j * (j + 1.0))));
        pass &= devs.iter().all(|&d| d < 1e-12) && cas < 1e-12;
        parts.push(format!(
            "m'={m}: [S1,S2] {:.1e} [S2,S3] {:.1e} [S3,S1] {:.1e} casimir {cas:.1e}",
            devs[0], devs[1], devs[2]
        ));
    }
    Outcome {
        pass,
        detail: format!("{} (bound 1e-12)", parts.join("; ")),
    }
}

fn gauge_average_check() -> Outcome {
    let mut rng = rng(6);
    let xis: Vec<Complex64> = (0..100).map(|_| sample_xi(&mut rng)).collect();
    let gauge = GaugeGrid::default();
    let mut parts = Vec::new();
    let mut worst = 0.0f64;
    for m in [5u32, 50] {
        let q2 = project_lower_symbol(&FullLowerSymbol::q2_position(), &RadialGrid::with_default_order(m), &gauge);
        let dev = max_of(xis.iter().map(|&x| q2.eval(x).abs()));
        worst = worst.max(dev);
        parts.push(format!("m={m}: {dev:.1e}"));
    }
    Outcome {
        pass: worst < 1e-14,
        detail: format!("{} at 100 points (bound 1e-14)", parts.join(", ")),
    }
}

fn peaking_check() -> Outcome {
    let gauge = GaugeGrid::default();
    let sym = FullLowerSymbol::radius();
    let mut parts = Vec::new();
    let mut worst = 0.0f64;
    for m in [10u32, 100, 1000] {
        let projected = project_lower_symbol(&sym, &radial_grid_for(&sym, m), &gauge);
        let target = f64::from(m) + 1.0;
        let rel = (projected.eval(c(0.7, -0.2)) - target).abs() / target;
        let dev = (rel - 1.0 / target).abs();
        worst = worst.max(dev);
        parts.push(format!("m={m}: rel {rel:.6e} vs 1/(m+1), off by {dev:.1e}"));
    }
    Outcome {
        pass: worst < 1e-12,
        detail: format!("{} (bound 1e-12)", parts.join("; ")),
    }
}

fn classical_limit_check_criterion() -> Outcome {
    let taus: Vec<f64> = (0..64).map(|k| TAU * f64::from(k) / 64.0).collect();
    let mut rng = rng(8);
    let mut xis = vec![Complex64::from_polar(1.0, FRAC_PI_3)];
    xis.extend((0..10).map(|_| sample_xi(&mut rng)));
    let phi_prime = 0.4;
    let phases: Vec<f64> = taus.iter().map(|t| t + phi_prime).collect();
    let (mut residual, mut phase) = (0.0f64, 0.0f64);
    for &xi in &xis {
        for m in [10u32, 100, 1000] {
            let values: Vec<f64> = taus.iter().map(|&t| clock_symbol_q1(xi, m, t, phi_prime, 1.0)).collect();
            let fit = fit_sinusoid(&phases, &values).unwrap();
            residual = residual.max(fit.max_residual);
            let d = (fit.phase_offset - xi.arg()).rem_euclid(TAU);
            phase = phase.max(d.min(TAU - d));
        }
    }
    let report = classical_limit_check(xis[0], &[10, 100, 1000], &taus, phi_prime, Units::default()).unwrap();
    let shrink = report.shrink_ratios();
    let shrink_ok = shrink.iter().all(|(measured, predicted)| (measured / predicted - 1.0).abs() < 0.2);
    let shrink_text: Vec<String> = shrink
        .iter()
        .map(|(m, p)| format!("{m:.3} vs {p:.0}"))
        .collect();
    Outcome {
        pass: residual < 1e-12 && phase < 1e-12 && shrink_ok,
        detail: format!(
            "fit residual {residual:.1e} (bound 1e-12), phase error {phase:.1e} (bound 1e-12), \
             deviation shrink {} (within 20%), limit ratio {:.6}",
            shrink_text.join(", "),
            report.limit_ratio
        ),
    }
}

fn parse_csv(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

fn figure1_baseline(out_dir: &Path) -> Result<String, String> {
    let path = out_dir.join("figure1_j50.csv");
    let code = coherent_clock::cli::run([
        "coherent-clock",
        "figure",
        "1",
        "--j",
        "50",
        "--theta",
        "0.7853981633974483",
        "--out",
        path.to_str().unwrap(),
    ]);
    if code != 0 {
        return Err(format!("figure 1 exited {code}"));
    }
    let fresh = parse_csv(&std::fs::read_to_string(&path).map_err(|e| e.to_string())?);
    let baseline_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/baselines/figure1_j50.csv");
    let baseline = parse_csv(&std::fs::read_to_string(&baseline_path).map_err(|e| e.to_string())?);
    if fresh.len() != baseline.len() || fresh[0] != baseline[0] {
        return Err("shape or header differs from baseline".into());
    }
    let mut worst = 0.0f64;
    for (a, b) in fresh.iter().zip(&baseline).skip(1) {
        for (x, y) in a.iter().zip(b) {
            match (x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(x), Ok(y)) => worst = worst.max((x - y).abs() / y.abs().max(1e-300)),
                _ if x == y => {}
                _ => return Err(format!("cell {x:?} differs from baseline {y:?}")),
            }
        }
    }
    if worst > 1e-12 {
        return Err(format!("relative drift {worst:.1e} from baseline"));
    }
    // shape: single peak of height one at the reference, falling off on both sides
    let overlaps: Vec<f64> = fresh.iter().skip(1).map(|r| r[3].parse().unwrap()).collect();
    let mid = overlaps.len() / 2;
    let rising = overlaps[..=mid].windows(2).all(|w| w[0] < w[1]);
    let falling = overlaps[mid..].windows(2).all(|w| w[0] > w[1]);
    let edges = overlaps[0].max(overlaps[overlaps.len() - 1]);
    if !(rising && falling && (overlaps[mid] - 1.0).abs() < 1e-12 && edges < 1e-3) {
        return Err("trace is not a single sharp peak at the reference".into());
    }
    Ok(format!("baseline drift {worst:.1e}, peak {:.15}, edges {edges:.1e}", overlaps[mid]))
}

fn figure1_check() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for two_j in [20u32, 100, 200] {
        let spin = Spin::from_two_j(two_j);
        let trace = amplitude_correlation(FRAC_PI_4, spin, &default_amplitude_sweep(FRAC_PI_4, spin)).unwrap();
        let scaled = trace.fit.sigma_sqr * f64::from(two_j);
        pass &= (0.99..=1.01).contains(&scaled);
        parts.push(format!("j={spin}: {scaled:.5}"));
    }
    let dir = tempfile::tempdir().unwrap();
    let baseline = figure1_baseline(dir.path());
    pass &= baseline.is_ok();
    Outcome {
        pass,
        detail: format!(
            "sigma2*2j {} (within [0.99, 1.01]); j=50 trace: {}",
            parts.join(", "),
            baseline.unwrap_or_else(|e| format!("FAILED {e}"))
        ),
    }
}

fn figure2_check() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for xi in [1.0, 0.5, 2.0] {
        for two_j in [40u32, 100, 200] {
            let spin = Spin::from_two_j(two_j);
            let trace = phase_correlation(xi, spin, &default_phase_sweep(xi, spin)).unwrap();
            let ratio = trace.width_ratio();
            pass &= (0.99..=1.01).contains(&ratio);
            parts.push(format!("|xi|={xi} j={spin}: {ratio:.5}"));
        }
    }
    Outcome {
        pass,
        detail: format!("sigma2*E1E2/2j {} (within [0.99, 1.01])", parts.join(", ")),
    }
}

fn lower_upper_check() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for two_j in [1u32, 2, 10] {
        let spin = Spin::from_two_j(two_j);
        let grid = SphereGrid::for_spin(spin);
        let s3 = spin_operators(two_j).s3;
        let lower = reconstruct_operator(&s3_lower_symbol(spin), spin, &grid).max_abs_diff(&s3);
        let upper = reconstruct_operator(&s3_upper_shape(spin), spin, &grid);
        let rel = upper.sub(&s3).unwrap().frobenius_norm() / s3.frobenius_norm();
        pass &= lower < 1e-10 && rel > 0.1;
        parts.push(format!("j={spin}: lower {lower:.1e}, upper off by {rel:.3} of |S3|"));
    }
    Outcome {
        pass,
        detail: format!("{} (lower < 1e-10, upper > 0.1)", parts.join("; ")),
    }
}

fn determinism_check() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let many = std::thread::available_parallelism().map_or(4, |n| n.get()).max(2).to_string();
    let commands: [&[&str]; 3] = [
        &["verify"],
        &["figure", "1", "--j", "50", "--format", "json"],
        &["figure", "2", "--j", "50"],
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, cmd) in commands.iter().enumerate() {
        let mut outputs = Vec::new();
        for (run, threads) in [many.as_str(), many.as_str(), "1"].into_iter().enumerate() {
            let path = dir.path().join(format!("out_{k}_{run}"));
            let mut args = vec!["coherent-clock"];
            args.extend_from_slice(cmd);
            args.extend_from_slice(&["--threads", threads, "--out", path.to_str().unwrap()]);
            let code = coherent_clock::cli::run(args);
            pass &= code == 0;
            outputs.push(std::fs::read(&path).unwrap_or_default());
        }
        let same = !outputs[0].is_empty() && outputs.iter().all(|o| *o == outputs[0]);
        pass &= same;
        parts.push(format!("{}: {}", cmd.join(" "), if same { "identical" } else { "DIFFERENT" }));
    }
    Outcome {
        pass,
        detail: format!("{} (runs: {many} threads twice, 1 thread)", parts.join("; ")),
    }
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("resolution of unity", resolution_of_unity_check),
        ("overlap closed form", overlap_check),
        ("projection and gauge covariance", projection_check),
        ("spin symbols", spin_symbol_check),
        ("su(2) structure", su2_check),
        ("gauge-averaged position", gauge_average_check),
        ("constraint peaking", peaking_check),
        ("clock classical limit", classical_limit_check_criterion),
        ("amplitude correlation width", figure1_check),
        ("phase correlation width", figure2_check),
        ("lower vs upper symbol", lower_upper_check),
        ("end-to-end determinism", determinism_check),
    ];
    let mut failed = Vec::new();
    for (k, (title, check)) in criteria.iter().enumerate() {
        let n = k + 1;
        let start = Instant::now();
        let outcome = check();
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {n:>2} {verdict} {title} [{:.2} s]: {}",
            start.elapsed().as_secs_f64(),
            outcome.detail
        );
        if !outcome.pass {
            failed.push(n);
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed.len(), criteria.len());
    if !failed.is_empty() {
        println!("red: {failed:?}");
        std::process::exit(1);
    }
}
