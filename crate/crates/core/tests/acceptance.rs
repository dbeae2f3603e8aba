//! Acceptance criteria. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; the process fails if any line fails.

use std::f64::consts::PI;
use std::process::ExitCode;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ris_models::config::{
    anomalous_pairs, beam_reshape, grating_lobes, monte_carlo_power, phase_compensation, random_phase_expected_power,
    random_phase_expected_rcs, PhaseCompensation, ReshapeOptions, SolverPath,
};
use ris_models::em::{Direction, ObservationPoint, WaveContext};
use ris_models::linear::{linear_field, linear_field_multi, InPlanePoint, InPlaneWave, LinearCell, LinearRis};
use ris_models::mimo::{apply_mimo, assemble_mimo, dft_grid};
use ris_models::patch::{
    patch_bistatic_rcs, patch_scattered_field, po_far_field, po_radiation_integrals, Patch, PlaneWave,
};
use ris_models::pattern::{field_db, find_peaks, golden_max, linspace};
use ris_models::scenario::signed_cut;

const QUADRATURE_ORDER: usize = 64;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn deg(x: f64) -> f64 {
    x.to_radians()
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn broadside_patch() -> Outcome {
    let ctx = WaveContext::default();
    let patch = Patch::new(5.0, 5.0).unwrap();
    let normal = Direction::from_degrees(0.0, 0.0);
    let want = 4.0 * PI * 625.0;
    let rel = (patch_bistatic_rcs(&patch, normal, normal, &ctx) - want).abs() / want;

    let null = 0.2f64.asin().to_degrees();
    let mut worst: f64 = 0.0;
    for sign in [-1.0, 1.0] {
        let rcs = |t: f64| patch_bistatic_rcs(&patch, normal, signed_cut(t, 0.0), &ctx);
        let found = golden_max(|t| -rcs(t), sign * null - 0.5, sign * null + 0.5, 1e-10);
        worst = worst.max((found - sign * null).abs());
    }
    outcome(
        rel <= 1e-9 && worst <= 1e-6,
        format!("broadside rel err {rel:.2e} (tol 1e-9), null offset {worst:.2e} deg (tol 1e-6)"),
    )
}

fn quadrature_oracle() -> Outcome {
    let ctx = WaveContext::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pairs = 200;
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let patch = Patch::new(rng.random_range(0.1..=5.0), rng.random_range(0.1..=5.0)).unwrap();
        let inc = Direction::from_degrees(rng.random_range(0.0..85.0), rng.random_range(-180.0..180.0));
        let sct = Direction::from_degrees(rng.random_range(0.0..85.0), rng.random_range(-180.0..180.0));
        let wave = PlaneWave::new(inc, 1.0);
        let r = 100.0;
        let closed = patch_scattered_field(&patch, &wave, &ObservationPoint::new(r, sct), &ctx);
        let (nt, np) = po_radiation_integrals(&patch, &wave, sct, &ctx, QUADRATURE_ORDER).unwrap();
        let quad = po_far_field(nt, np, r, &ctx);
        let diff = ((quad.e_theta - closed.e_theta).norm_sqr() + (quad.e_phi - closed.e_phi).norm_sqr()).sqrt();
        worst = worst.max(diff / closed.magnitude());
    }
    outcome(
        worst <= 1e-6,
        format!("{pairs} random pairs, order {QUADRATURE_ORDER}: worst rel err {worst:.2e} (tol 1e-6)"),
    )
}

fn compensated(n: usize, d: f64, b: f64) -> LinearRis {
    let mut ris = LinearRis::uniform(n, d, b * b, b, WaveContext::default()).unwrap();
    ris.set_phases(&phase_compensation(deg(30.0), deg(-50.0), &ris))
        .unwrap();
    ris
}

fn pattern_peaks(ris: &LinearRis, waves: &[InPlaneWave]) -> Vec<(f64, f64)> {
    let f = |t: f64| linear_field_multi(ris, waves, &InPlanePoint::new(100.0, deg(t))).norm();
    find_peaks(f, &linspace(-90.0, 90.0, 1801), 1e-9)
        .into_iter()
        .map(|p| (p.x, p.value))
        .collect()
}

fn grating_lobe() -> Outcome {
    let wave = [InPlaneWave::new(deg(30.0), 1.0)];
    let delta = PhaseCompensation::steer(deg(30.0), deg(-50.0)).delta;

    let wide = pattern_peaks(&compensated(100, 0.7, 0.1), &wave);
    let secondary = wide[1].0;
    let narrow = pattern_peaks(&compensated(100, 0.5, 0.1), &wave);
    let second_db = field_db(narrow[1].1 / narrow[0].1);
    let predicted = grating_lobes(delta, 0.5, 1.0, deg(30.0));
    outcome(
        (secondary - 41.49).abs() <= 0.05 && second_db < -3.0 && predicted.is_empty(),
        format!(
            "d=0.7 secondary at {secondary:.4} deg (41.49 ± 0.05); d=0.5 next peak {second_db:.2} dB (< -3), predicted {predicted:?}"
        ),
    )
}

fn anomalous_reflection() -> Outcome {
    let ris = compensated(100, 0.5, 0.1);
    let waves = [InPlaneWave::new(deg(30.0), 1.0), InPlaneWave::new(deg(70.0), 0.5)];
    let both = pattern_peaks(&ris, &waves);
    let main = both[0].0;
    // The lobe carried by the 70° wave; the coherent sum sits ~0.1° lower
    // because of the 30° wave's sidelobes.
    let f70 = |t: f64| linear_field(&ris, &waves[1], &InPlanePoint::new(100.0, deg(t))).norm();
    let lobe = golden_max(f70, 51.5, 53.5, 1e-9);

    let delta = deg(30.0).sin() + deg(-50.0).sin();
    let exact = (delta - deg(70.0).sin() + 2.0).asin();
    let pairs = anomalous_pairs(delta, 0.5, 1.0, deg(70.0));
    let sine_err = pairs
        .iter()
        .map(|t| (t.sin() - exact.sin()).abs())
        .fold(f64::INFINITY, f64::min);
    let rounds = (exact.to_degrees() - 52.59).abs() <= 0.005;
    outcome(
        (main + 50.0).abs() <= 0.05 && (lobe - 52.59).abs() <= 0.05 && sine_err <= 1e-6 && rounds,
        format!(
            "main {main:.4} deg, 70 deg lobe {lobe:.4} deg (52.59 ± 0.05), anomalous_pairs sine err {sine_err:.1e} vs {:.6} deg",
            exact.to_degrees()
        ),
    )
}

fn beam_reshaping() -> Outcome {
    let n = 100;
    let ctx = WaveContext::default();
    let r = 100.0;
    let mut steer = LinearRis::uniform(n, 0.5, 0.01, 0.0, ctx).unwrap();
    steer
        .set_phases(&phase_compensation(deg(30.0), deg(-50.0), &steer))
        .unwrap();
    let grid = dft_grid(n);
    let points: Vec<InPlanePoint> = grid.iter().map(|&t| InPlanePoint::new(r, t)).collect();
    let target: Vec<Complex64> = points
        .iter()
        .map(|p| linear_field(&steer, &InPlaneWave::new(deg(30.0), 1.0), p))
        .collect();

    let mut ris = LinearRis::uniform(n, 0.5, 0.01, 0.0, ctx).unwrap();
    let sys = assemble_mimo(&ris, &[deg(30.0), deg(70.0)], &points).unwrap();
    let sol = beam_reshape(
        &sys,
        &[c64(1.0, 0.0), c64(0.5, 0.0)],
        &target,
        &ReshapeOptions::default(),
    )
    .unwrap();
    ris.set_weights(&sol.weights).unwrap();

    let waves = [InPlaneWave::new(deg(30.0), 1.0), InPlaneWave::new(deg(70.0), 0.5)];
    let f = |t: f64| linear_field_multi(&ris, &waves, &InPlanePoint::new(r, deg(t))).norm();
    let peak = f(golden_max(f, -51.0, -49.0, 1e-9));
    let level = field_db(f(52.59) / peak);
    outcome(
        sol.conditioning.solver == SolverPath::Dft && level <= -20.0,
        format!(
            "{:?} solve, |E(52.59)| at {level:.1} dB relative to -50 deg peak (<= -20)",
            sol.conditioning.solver
        ),
    )
}

fn compensation_gain() -> Outcome {
    let (ti, ts) = (deg(30.0), deg(-50.0));
    let r = 100.0;
    let ctx = WaveContext::default();
    let ris = compensated(100, 0.5, 0.1);
    let got = linear_field(&ris, &InPlaneWave::new(ti, 1.0), &InPlanePoint::new(r, ts)).norm();
    let lambda = ctx.wavelength();
    let x = PI * 0.1 * (ts.sin() + ti.sin()) / lambda;
    let sa = (x.sin() / x).abs();
    let bound = ctx.c().norm() / (lambda * r) * ti.cos() * ris.cells().iter().map(|c| c.area * sa).sum::<f64>();
    let bound_rel = (got - bound).abs() / bound;

    let n = 100;
    let mut point = LinearRis::uniform(n, 0.5, 0.01, 0.0, ctx).unwrap();
    point.set_phases(&phase_compensation(ti, ts, &point)).unwrap();
    let wave = InPlaneWave::new(ti, 1.0);
    let obs = InPlanePoint::new(r, ts);
    let ratio = linear_field(&point, &wave, &obs).norm_sqr() / random_phase_expected_power(&point, &wave, &obs);
    let ratio_rel = (ratio - n as f64).abs() / n as f64;
    outcome(
        bound_rel <= 1e-12 && ratio_rel <= 1e-9,
        format!("equality bound rel err {bound_rel:.1e} (tol 1e-12), gain ratio {ratio:.9} vs N = {n} (rel {ratio_rel:.1e}, tol 1e-9)"),
    )
}

fn random_phase_statistics() -> Outcome {
    let ris = LinearRis::uniform(100, 0.5, 0.01, 0.0, WaveContext::default()).unwrap();
    let wave = InPlaneWave::new(deg(30.0), 1.0);
    let r = 100.0;
    let points: Vec<InPlanePoint> = linspace(-90.0, 90.0, 19)
        .into_iter()
        .map(|t| InPlanePoint::new(r, deg(t)))
        .collect();
    let trials = 10_000;
    let est = monte_carlo_power(&ris, &[wave], &points, trials, 20_240).unwrap();
    let worst_z = points
        .iter()
        .zip(&est)
        .map(|(p, e)| (e.mean - random_phase_expected_power(&ris, &wave, p)).abs() / e.std_error)
        .fold(0.0, f64::max);

    let first = random_phase_expected_rcs(&ris, deg(30.0), deg(-90.0));
    let flat = linspace(-90.0, 90.0, 181)
        .into_iter()
        .all(|t| random_phase_expected_rcs(&ris, deg(30.0), deg(t)).to_bits() == first.to_bits());
    outcome(
        worst_z <= 3.0 && flat,
        format!("{trials} trials, worst deviation {worst_z:.2} standard errors (<= 3) over 19 angles; expected RCS bit-identical: {flat}"),
    )
}

fn mimo_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let ctx = WaveContext::default();
    let k = ctx.wavenumber();
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.random_range(1..=64);
        let m = rng.random_range(1..=8);
        let t = rng.random_range(1..=16);
        let d = rng.random_range(0.1..=1.0);
        let cells: Vec<LinearCell> = (0..n)
            .map(|_| LinearCell::new(rng.random_range(0.001..0.05), 0.0, rng.random_range(-PI..PI)))
            .collect();
        let ris = LinearRis::new(cells, d, ctx).unwrap();
        let inc: Vec<f64> = (0..m).map(|_| rng.random_range(-1.5..1.5)).collect();
        let amps: Vec<Complex64> = (0..m)
            .map(|_| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let obs: Vec<InPlanePoint> = (0..t)
            .map(|_| InPlanePoint::new(rng.random_range(20.0..200.0), rng.random_range(-1.5..1.5)))
            .collect();
        let sys = assemble_mimo(&ris, &inc, &obs).unwrap();
        let got = apply_mimo(&sys, &amps).unwrap();
        for (p, g) in obs.iter().zip(&got) {
            let mut sum = c64(0.0, 0.0);
            for (ti, e) in inc.iter().zip(&amps) {
                for (idx, cell) in ris.cells().iter().enumerate() {
                    let phase = cell.phase_shift() + k * idx as f64 * d * (ti.sin() + p.theta.sin());
                    sum += cell.area * ti.cos() * e * Complex64::from_polar(1.0, phase);
                }
            }
            let direct = ctx.c() * sum * Complex64::from_polar(1.0 / p.r, -k * p.r);
            let rel = (g - direct).norm() / direct.norm();
            worst = worst.max(rel);
        }
    }
    outcome(
        worst <= 1e-12,
        format!("200 random systems, worst rel err {worst:.1e} (tol 1e-12)"),
    )
}

fn dft_unitarity() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 1..=256 {
        let ris = LinearRis::uniform(n, 0.5, 0.01, 0.0, WaveContext::default()).unwrap();
        let points: Vec<InPlanePoint> = dft_grid(n).into_iter().map(|t| InPlanePoint::new(10.0, t)).collect();
        let v = assemble_mimo(&ris, &[0.0], &points).unwrap().scatter_vandermonde();
        let gram = &v * v.adjoint() - DMatrix::<Complex64>::identity(n, n) * c64(n as f64, 0.0);
        worst = worst.max(gram.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    outcome(
        worst <= 1e-10,
        format!("N = 1..=256, worst |V Vᴴ - N I| entry {worst:.1e} (tol 1e-10)"),
    )
}

fn reshape_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    while runs < 50 {
        let n = rng.random_range(2..=128);
        let ris = LinearRis::uniform(n, 0.5, 0.01, 0.0, WaveContext::default()).unwrap();
        let points: Vec<InPlanePoint> = dft_grid(n).into_iter().map(|t| InPlanePoint::new(100.0, t)).collect();
        let m = rng.random_range(1..=3);
        let inc: Vec<f64> = (0..m).map(|_| rng.random_range(-1.2..1.2)).collect();
        let amps: Vec<Complex64> = (0..m)
            .map(|_| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let sys = assemble_mimo(&ris, &inc, &points).unwrap();
        let lit = sys.effective_incident(&amps).unwrap();
        let max = lit.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if lit.iter().any(|z| z.norm() < 1e-2 * max) {
            continue;
        }
        let w0: Vec<Complex64> = (0..n)
            .map(|_| Complex64::from_polar(rng.random_range(0.001..0.05), rng.random_range(-PI..PI)))
            .collect();
        let desired = apply_mimo(&sys.with_weights(&w0).unwrap(), &amps).unwrap();
        let sol = beam_reshape(&sys, &amps, &desired, &ReshapeOptions::default()).unwrap();
        let num: f64 = sol.weights.iter().zip(&w0).map(|(a, b)| (a - b).norm_sqr()).sum();
        let den: f64 = w0.iter().map(|z| z.norm_sqr()).sum();
        worst = worst.max((num / den).sqrt());
        runs += 1;
    }
    outcome(
        worst <= 1e-10,
        format!("{runs} random round trips, worst rel err {worst:.1e} (tol 1e-10)"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("broadside patch RCS and first nulls", broadside_patch),
        ("quadrature matches closed form", quadrature_oracle),
        ("grating lobe at 0.7 wavelength spacing", grating_lobe),
        ("anomalous reflection of the 70 deg wave", anomalous_reflection),
        ("beam reshaping suppresses the anomalous lobe", beam_reshaping),
        ("phase compensation gain", compensation_gain),
        ("random phase statistics", random_phase_statistics),
        ("MIMO factorization equals direct sum", mimo_equivalence),
        ("DFT grid unitarity", dft_unitarity),
        ("reshape round trip", reshape_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("acceptance {:2} {tag}: {name}: {}", i + 1, o.detail);
        failed += usize::from(!o.passed);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
