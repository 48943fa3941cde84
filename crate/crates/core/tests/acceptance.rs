//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polyqubit::dynamics::{
    evolve, joint_slot, monoqubit_ms_oracle, participant_populations, phase_space_trajectory, DriveKind,
    MonoqubitDrive,
};
use polyqubit::experiments::{haar_qubit, run_sweep, Experiment, MismatchIons, SweepRecord, SweepSpec};
use polyqubit::intragates::{cnot_program, cz_program, deutsch3_program, hadamard_program, swap_program};
use polyqubit::linop::trace_distance;
use polyqubit::polyenc::{atomic_pauli, hypercube_edges, qubit_pauli, PauliAxis, PolyEncoding, QubitLabel};
use polyqubit::tolerances as tol;
use polyqubit::{OperatorMatrix, PartialTrace, StateVector, C64};

use common::{effective_limit_error, matched_config, operating_point};

const V: QubitLabel = QubitLabel::V;
const H: QubitLabel = QubitLabel::H;
const SEEDS: u64 = 100;

type Verdict = (bool, String);

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn dense(rows: &[Vec<C64>]) -> OperatorMatrix {
    OperatorMatrix::from_fn(rows.len(), |i, j| rows[i][j])
}

fn identity_rows(n: usize) -> Vec<Vec<C64>> {
    (0..n).map(|i| (0..n).map(|j| c(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect()
}

fn gate_identities() -> Verdict {
    let start = Instant::now();
    let enc = PolyEncoding::new(2).unwrap();

    let mut cnot = identity_rows(4);
    cnot[2][2] = c(0.0, 0.0);
    cnot[3][3] = c(0.0, 0.0);
    cnot[2][3] = c(1.0, 0.0);
    cnot[3][2] = c(1.0, 0.0);
    let e_cnot = cnot_program(&enc, H, V).unwrap().compose().unwrap().max_abs_diff(&dense(&cnot));

    let mut toffoli = identity_rows(8);
    toffoli[6][6] = c(0.0, 0.0);
    toffoli[7][7] = c(0.0, 0.0);
    toffoli[6][7] = c(1.0, 0.0);
    toffoli[7][6] = c(1.0, 0.0);
    let e_toff = deutsch3_program(FRAC_PI_2).unwrap().compose().unwrap().max_abs_diff(&dense(&toffoli));

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut e_d3: f64 = 0.0;
    for _ in 0..20 {
        let theta: f64 = rng.random_range(0.0..2.0 * PI);
        let mut printed = identity_rows(8);
        printed[6][6] = c(0.0, theta.cos());
        printed[7][7] = c(0.0, theta.cos());
        printed[6][7] = c(theta.sin(), 0.0);
        printed[7][6] = c(theta.sin(), 0.0);
        let u = deutsch3_program(theta).unwrap().compose().unwrap();
        e_d3 = e_d3.max(u.max_abs_diff(&dense(&printed)));
    }
    let secs = start.elapsed().as_secs_f64();
    let worst = e_cnot.max(e_toff).max(e_d3);
    (
        worst <= tol::GATE_SYNTHESIS && secs < 1.0,
        format!("cnot {e_cnot:.1e}, toffoli {e_toff:.1e}, D3 x20 {e_d3:.1e}, {secs:.3} s"),
    )
}

fn random_product(enc: &PolyEncoding, rng: &mut ChaCha8Rng) -> StateVector {
    let amps = enc.labels().iter().fold(vec![c(1.0, 0.0)], |acc, _| {
        let q = haar_qubit(rng);
        acc.iter().flat_map(|&z| [z * q[0], z * q[1]]).collect()
    });
    StateVector::new(amps, vec![2; enc.qubits()]).unwrap()
}

fn spectator_invariance() -> Verdict {
    let mut intra: f64 = 0.0;
    for p in 2..=4 {
        let enc = PolyEncoding::new(p).unwrap();
        let labels = enc.labels().to_vec();
        let mut progs = Vec::new();
        for &a in &labels {
            progs.push((hadamard_program(&enc, a).unwrap(), vec![a]));
            for &b in labels.iter().filter(|&&b| b != a) {
                progs.push((cnot_program(&enc, a, b).unwrap(), vec![a, b]));
                if a < b {
                    progs.push((cz_program(&enc, a, b).unwrap(), vec![a, b]));
                    progs.push((swap_program(&enc, a, b).unwrap(), vec![a, b]));
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(100 + p as u64);
        let states: Vec<StateVector> = (0..SEEDS).map(|_| random_product(&enc, &mut rng)).collect();
        for (prog, support) in &progs {
            let u = prog.compose().unwrap();
            for psi in &states {
                let out = StateVector::new(u.apply(psi).unwrap().into_amplitudes(), vec![2; p]).unwrap();
                for &l in labels.iter().filter(|l| !support.contains(l)) {
                    let s = enc.slot(l).unwrap();
                    let d = trace_distance(&psi.partial_trace(&[s]).unwrap(), &out.partial_trace(&[s]).unwrap());
                    intra = intra.max(d.unwrap());
                }
            }
        }
    }

    let mut inter: f64 = 0.0;
    for kind in [DriveKind::Xx, DriveKind::Zz] {
        for seed in 0..SEEDS {
            let m = operating_point(kind, [V, V], seed, usize::MAX);
            let traj = evolve(&m.config).unwrap();
            for ion in 0..2 {
                let slot = joint_slot(&m.enc, ion, H).unwrap();
                let before = m.config.initial_state.partial_trace(&[slot]).unwrap();
                let after = traj.final_state().partial_trace(&[slot]).unwrap();
                inter = inter.max(trace_distance(&before, &after).unwrap());
            }
        }
    }
    (
        intra <= tol::SPECTATOR_DYNAMICS && inter <= tol::SPECTATOR_DYNAMICS,
        format!("intra-atomic {intra:.1e}, matched XX/ZZ {inter:.1e} over {SEEDS} seeds"),
    )
}

fn mono_poly_equivalence() -> Verdict {
    let mono = PolyEncoding::new(1).unwrap();
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for seed in 0..10 {
        let m = operating_point(DriveKind::Xx, [V, V], seed, 10);
        let traj = evolve(&m.config).unwrap();
        let oracle = monoqubit_ms_oracle(
            &MonoqubitDrive {
                g1: 1.0,
                g2: 1.0,
                mode: m.config.mode,
                duration: m.config.duration,
                dt: m.config.dt,
                sample_stride: 10,
            },
            &StateVector::basis(0, vec![2, 2]).unwrap(),
        )
        .unwrap();
        let levels = m.config.mode.levels();
        for (a, b) in traj.samples.iter().zip(&oracle.samples) {
            let pa = participant_populations(&m.enc, [V, V], levels, a.state.amplitudes());
            let pb = participant_populations(&mono, [V, V], levels, b.state.amplitudes());
            worst = pa.iter().zip(&pb).fold(worst, |w, (x, y)| w.max((x - y).abs()));
            points += 1;
        }
    }
    (worst <= tol::MONO_POLY_POPULATION, format!("max population gap {worst:.1e} over {points} samples"))
}

fn sweep(experiment: Experiment, grid: &[f64], ions: MismatchIons) -> Vec<SweepRecord> {
    let mut spec = SweepSpec::new(experiment);
    spec.grid = Some(grid.to_vec());
    spec.mismatch_ions = ions;
    run_sweep(&spec).unwrap().records
}

fn rabi_mismatch() -> Verdict {
    let grid = [0.0, 0.005, 0.02, 0.05];
    let both = sweep(Experiment::XxRabiMismatch, &grid, MismatchIons::Both);
    let first = sweep(Experiment::XxRabiMismatch, &grid, MismatchIons::First);
    let f: Vec<f64> = both.iter().map(|r| r.mean_fidelity).collect();
    let monotone = f.windows(2).all(|w| w[1] < w[0]);
    let ok = f[0] >= 1.0 - tol::MATCHED_INFIDELITY && f[1] >= tol::RABI_MISMATCH_FLOOR && monotone;
    (
        ok,
        format!(
            "F(0)={:.9}, F(0.005)={:.7} (reference {}), F(0.02)={:.7}, F(0.05)={:.7}; one ion: F(0.005)={:.7}, F(0.05)={:.7}",
            f[0], f[1], tol::RABI_MISMATCH_REFERENCE, f[2], f[3], first[1].mean_fidelity, first[3].mean_fidelity
        ),
    )
}

fn r_squared(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    sxy * sxy / (sxx * syy)
}

fn phase_space_loops() -> Verdict {
    let mut closure: f64 = 0.0;
    let mut origin: f64 = 0.0;
    let (mut lambdas, mut radii) = (Vec::new(), Vec::new());
    let cases = [([1.0, 1.0], 1), ([1.0, 0.5], 2), ([1.0, 0.25], 3), ([0.8, 0.3], 4)];
    for (g, seed) in cases {
        let m = matched_config(2, DriveKind::Zz, [V, V], g, 2.0, 12, PI, PI / 4000.0, 40, seed);
        let result = phase_space_trajectory(&m.config).unwrap();
        for b in &result.branches {
            let lambda = b.eigenvalue.unwrap().norm();
            closure = closure.max(b.points.last().unwrap().alpha.norm());
            if lambda < 1e-12 {
                origin = origin.max(b.points.iter().map(|p| p.alpha.norm()).fold(0.0, f64::max));
                continue;
            }
            // One full loop sampled uniformly; drop the endpoint that repeats t = 0.
            let loop_pts = &b.points[..b.points.len() - 1];
            let centre = loop_pts.iter().map(|p| p.alpha).sum::<C64>() / loop_pts.len() as f64;
            let radius = loop_pts.iter().map(|p| (p.alpha - centre).norm()).sum::<f64>() / loop_pts.len() as f64;
            lambdas.push(lambda);
            radii.push(radius);
        }
    }
    let r2 = r_squared(&lambdas, &radii);
    (
        closure < tol::LOOP_CLOSURE && origin < tol::LOOP_CLOSURE && r2 > tol::RADIUS_LINEARITY_R2,
        format!("closure {closure:.1e}, zero branch {origin:.1e}, radius R² {r2:.9} over {} branches", lambdas.len()),
    )
}

fn phase_mismatch() -> Verdict {
    let r = sweep(Experiment::ZzPhaseMismatch, &[0.0, 0.1, 1.0], MismatchIons::Both);
    let f: Vec<f64> = r.iter().map(|r| r.mean_fidelity).collect();
    let ok = f[0] >= 1.0 - tol::MATCHED_INFIDELITY && (f[0] - f[1]) < (f[0] - f[2]);
    (ok, format!("F(0)={:.9}, F(0.1)={:.7}, F(1.0)={:.5}", f[0], f[1], f[2]))
}

fn effective_limit() -> Verdict {
    let mut ok = true;
    let mut detail = Vec::new();
    for kind in [DriveKind::Xx, DriveKind::Zz] {
        let e: Vec<f64> = [10.0, 20.0, 50.0].iter().map(|&r| effective_limit_error(kind, r)).collect();
        ok &= e[0] > e[1] && e[1] > e[2] && e[2] < tol::EFFECTIVE_LIMIT_ERROR;
        detail.push(format!("{kind:?} {:.1e}/{:.1e}/{:.1e}", e[0], e[1], e[2]));
    }
    (ok, format!("error at δ/g = 10/20/50: {}", detail.join(", ")))
}

fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    &(a * b) - &(b * a)
}

fn algebra() -> Verdict {
    let mut worst: f64 = 0.0;
    for p in 1..=3 {
        let enc = PolyEncoding::new(p).unwrap();
        let d = enc.level_count();
        let pairs: Vec<(usize, usize)> = (0..d).flat_map(|m| (m + 1..d).map(move |n| (m, n))).collect();
        for &(m, n) in &pairs {
            for &(k, l) in pairs.iter().filter(|(k, l)| ![*k, *l].contains(&m) && ![*k, *l].contains(&n)) {
                for a in PauliAxis::ALL {
                    for b in PauliAxis::ALL {
                        let sa = atomic_pauli(&enc, a, m, n).unwrap();
                        let sb = atomic_pauli(&enc, b, k, l).unwrap();
                        worst = worst.max(commutator(&sa, &sb).max_abs());
                    }
                }
            }
        }
        let one = OperatorMatrix::identity(d);
        for &l1 in enc.labels() {
            let [x, y, z] = PauliAxis::ALL.map(|a| qubit_pauli(&enc, a, l1).unwrap());
            worst = worst.max((&x * &y).max_abs_diff(&z.scale(c(0.0, 1.0))));
            for s in [&x, &y, &z] {
                worst = worst.max((s * s).max_abs_diff(&one));
            }
            for &l2 in enc.labels().iter().filter(|&&l| l != l1) {
                for a in PauliAxis::ALL {
                    for b in PauliAxis::ALL {
                        let s1 = qubit_pauli(&enc, a, l1).unwrap();
                        let s2 = qubit_pauli(&enc, b, l2).unwrap();
                        worst = worst.max(commutator(&s1, &s2).max_abs());
                    }
                }
            }
        }
    }
    let counts: Vec<usize> =
        (1..=4).map(|p| hypercube_edges(p).unwrap().iter().map(|(_, e)| e.len()).sum()).collect();
    let edges_ok = counts.iter().zip(1..=4u32).all(|(&n, p)| n == p as usize * (1 << (p - 1)));
    (worst <= 1e-12 && edges_ok, format!("max residual {worst:.1e}, edge counts {counts:?}"))
}

fn hygiene() -> Verdict {
    let mut drift: f64 = 0.0;
    for kind in [DriveKind::Xx, DriveKind::Zz] {
        drift = drift.max(evolve(&operating_point(kind, [V, V], 5, usize::MAX).config).unwrap().max_norm_drift);
    }

    let mut fock: f64 = 0.0;
    for (experiment, grid) in [
        (Experiment::XxRabiMismatch, vec![0.0, 0.005, 0.05]),
        (Experiment::ZzPhaseMismatch, vec![0.0, 0.1, 1.0]),
    ] {
        let mut spec = SweepSpec::new(experiment);
        spec.grid = Some(grid);
        let a = run_sweep(&spec).unwrap().records;
        spec.gate.fock_cutoff = 24;
        let b = run_sweep(&spec).unwrap().records;
        for (x, y) in a.iter().zip(&b) {
            fock = fock
                .max((x.mean_fidelity - y.mean_fidelity).abs())
                .max((x.min_fidelity - y.min_fidelity).abs());
        }
    }

    let run = |n: usize| {
        let mut m = operating_point(DriveKind::Xx, [V, V], 0, usize::MAX);
        m.config.dt = PI / n as f64;
        evolve(&m.config).unwrap().final_state().clone()
    };
    let (a, b, c) = (run(400), run(800), run(1600));
    let order = (a.max_abs_diff(&b) / b.max_abs_diff(&c)).log2();

    (
        drift < tol::NORM_DRIFT_TARGET && fock < tol::FOCK_CONVERGENCE && order >= 3.95,
        format!("norm drift {drift:.1e}, Fock doubling {fock:.1e}, dt-halving order {order:.4}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("gate identities", gate_identities),
        ("spectator invariance", spectator_invariance),
        ("mono/poly equivalence", mono_poly_equivalence),
        ("Rabi mismatch sweep", rabi_mismatch),
        ("phase-space loops", phase_space_loops),
        ("phase mismatch ordering", phase_mismatch),
        ("effective-Hamiltonian limit", effective_limit),
        ("operator algebra", algebra),
        ("numerical hygiene", hygiene),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = check();
        failed += usize::from(!ok);
        println!(
            "{} {}. {name}: {detail} [{:.1} s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
