//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the observed numbers (run with `-- --nocapture` to see
//! them). Tolerances are pinned in the constants below.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qintersect_core::amplify::{
    apply_grover_diffusion, apply_partial_diffusion, run_common_entry_search, run_grover_baseline,
    run_loop, AmplifierKind,
};
use qintersect_core::analytics::{amplitude_recursion, success_probability, IterationSchedule};
use qintersect_core::classical::classical_common_entries;
use qintersect_core::oracle::{
    apply_composed_oracle, common_solution_set, mark_reset_probability, BlackBox,
    InvocationCounter, ProblemInstance,
};
use qintersect_core::report::{
    grover_iteration_count, run_sweep, synthetic_instance, CommonCountStrategy, SweepConfig,
};
use qintersect_core::statevector::StateVector;

/// Simulated vs closed-form success probability.
const CLOSED_FORM_TOL: f64 = 1e-9;
/// Elementwise involution residual.
const INVOLUTION_TOL: f64 = 1e-12;
/// Norm drift allowed over a full run.
const NORM_DRIFT_TOL: f64 = 1e-8;
/// Probability mass allowed on set mark qubits after an oracle call.
const MARK_LEAK_TOL: f64 = 1e-10;
/// Success floor claimed for the scheduled search.
const SUCCESS_FLOOR: f64 = 2.0 / 3.0;

fn random_instance(rng: &mut ChaCha8Rng, n: usize, kappa: usize, density: f64) -> ProblemInstance {
    let num_entries = 1u64 << n;
    let boxes: Vec<BlackBox> = (0..kappa)
        .map(|j| {
            let picks: Vec<u64> = (0..num_entries).filter(|_| rng.gen_bool(density)).collect();
            BlackBox::new(n, format!("db{j}"), picks).unwrap()
        })
        .collect();
    ProblemInstance::new(boxes).unwrap()
}

fn random_state(num_qubits: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let dim = 1usize << num_qubits;
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    StateVector::from_amplitudes(amps).unwrap()
}

/// Drive the amplified loop on `instance`, checking after every iteration
/// up to the schedule that (a) the simulated success probability matches
/// the closed form and (b) every amplitude sits on its predicted
/// three-class recursion value. Returns the worst deviation seen across
/// both checks and the worst mark leak after an oracle call.
fn check_run_against_closed_form(instance: &ProblemInstance) -> (f64, f64) {
    let layout = instance.layout().unwrap();
    let common = common_solution_set(instance);
    let m_c = common.len() as u64;
    let num_entries = instance.num_entries();
    let schedule = IterationSchedule::new(num_entries, m_c).unwrap();
    let recursion = amplitude_recursion(num_entries, m_c, schedule.iterations()).unwrap();

    let mut state = StateVector::new(layout.num_qubits()).unwrap();
    state.hadamard_layer(layout.search_qubits()).unwrap();
    let mut counter = InvocationCounter::new();

    // q = 0: the uniform superposition itself.
    let mut worst_dev: f64 = {
        let p = state.probability_of(|b| common.contains(&layout.search_index(b)));
        (p - success_probability(num_entries, m_c, 0).unwrap()).abs()
    };
    let mut worst_leak: f64 = 0.0;

    for step in &recursion {
        apply_composed_oracle(&mut state, instance, &mut counter).unwrap();
        worst_leak = worst_leak.max(1.0 - mark_reset_probability(&state, layout.kappa()));
        apply_partial_diffusion(&mut state, &layout).unwrap();

        let simulated = state.probability_of(|b| common.contains(&layout.search_index(b)));
        let predicted = success_probability(num_entries, m_c, step.iteration).unwrap();
        worst_dev = worst_dev.max((simulated - predicted).abs());

        for i in 0..num_entries {
            let unflagged = state.amplitude(layout.basis_index(i, 0, false));
            let flagged = state.amplitude(layout.basis_index(i, 0, true));
            let (want_unflagged, want_flagged) = if common.contains(&i) {
                (step.solution_unflagged, step.solution_flagged)
            } else {
                (step.non_solution, 0.0)
            };
            worst_dev = worst_dev.max((unflagged.re - want_unflagged).abs().max(unflagged.im.abs()));
            worst_dev = worst_dev.max((flagged.re - want_flagged).abs().max(flagged.im.abs()));
        }
    }
    (worst_dev, worst_leak)
}

#[test]
fn criterion_1_closed_form_agreement() {
    let mut worst: (f64, usize, usize, u64) = (0.0, 0, 0, 0);
    let mut runs = 0usize;

    for kappa in [2usize, 3] {
        // Exhaustive common counts for n <= 6.
        for n in 2..=6usize {
            let num_entries = 1u64 << n;
            for m_c in 1..=num_entries {
                let instance = synthetic_instance(n, kappa, m_c).unwrap();
                let (dev, _) = check_run_against_closed_form(&instance);
                runs += 1;
                if dev > worst.0 {
                    worst = (dev, n, kappa, m_c);
                }
            }
        }
        // Randomized instances for n = 7, 8.
        let mut rng = ChaCha8Rng::seed_from_u64(0xC1A0);
        for n in [7usize, 8] {
            for _ in 0..6 {
                let instance = random_instance(&mut rng, n, kappa, 0.5);
                let m_c = common_solution_set(&instance).len() as u64;
                if m_c == 0 {
                    continue;
                }
                let (dev, _) = check_run_against_closed_form(&instance);
                runs += 1;
                if dev > worst.0 {
                    worst = (dev, n, kappa, m_c);
                }
            }
        }
    }

    assert!(
        worst.0 <= CLOSED_FORM_TOL,
        "worst |simulated - closed form| = {:.3e} at n={}, kappa={}, M_c={}",
        worst.0,
        worst.1,
        worst.2,
        worst.3
    );
    println!(
        "criterion 1 (closed-form agreement): PASS: {runs} runs, worst deviation {:.3e} \
         (n={}, kappa={}, M_c={}) over success probabilities and class amplitudes, \
         tolerance {CLOSED_FORM_TOL:.0e}",
        worst.0, worst.1, worst.2, worst.3
    );
}

#[test]
fn criterion_2_success_floor() {
    let mut min = (f64::INFINITY, 0u64, 0u64);
    for n in 1..=12u32 {
        let num_entries = 1u64 << n;
        for m_c in 1..=num_entries {
            let schedule = IterationSchedule::new(num_entries, m_c).unwrap();
            if schedule.predicted_success() < min.0 {
                min = (schedule.predicted_success(), num_entries, m_c);
            }
        }
    }
    assert!(
        min.0 >= SUCCESS_FLOOR,
        "minimum scheduled success {:.6} at (N={}, M_c={}) is below 2/3",
        min.0,
        min.1,
        min.2
    );
    println!(
        "criterion 2 (success floor): PASS: min P_s at q_c is {:.6} at (N={}, M_c={}), floor {:.4}",
        min.0, min.1, min.2, SUCCESS_FLOOR
    );
}

#[test]
fn criterion_3_oracle_call_accounting() {
    let mut runs = 0usize;
    for kappa in [2usize, 3] {
        for n in 2..=5usize {
            let num_entries = 1u64 << n;
            for m_c in 1..=num_entries {
                let instance = synthetic_instance(n, kappa, m_c).unwrap();
                let schedule = IterationSchedule::new(num_entries, m_c).unwrap();
                let q_c = schedule.iterations();
                let report = run_common_entry_search(&instance, q_c, 1, 0).unwrap();
                for label in instance.labels() {
                    assert_eq!(
                        report.counters.black_box_calls(&label),
                        2 * q_c,
                        "n={n} kappa={kappa} M_c={m_c} label={label}"
                    );
                }
                assert_eq!(report.counters.conjunction_calls(), q_c);
                let q_t = report.counters.total_black_box_calls();
                assert_eq!(q_t, 2 * kappa as u64 * q_c);
                let bound = schedule.oracle_call_bound(kappa) + 2.0 * kappa as f64;
                assert!(
                    q_t as f64 <= bound,
                    "q_t = {q_t} exceeds bound {bound:.3} at n={n} kappa={kappa} M_c={m_c}"
                );
                runs += 1;
            }
        }
    }
    println!(
        "criterion 3 (oracle-call accounting): PASS: {runs} runs, every counter exactly 2*kappa*q_c \
         and within the query bound"
    );
}

#[test]
fn criterion_4_involution_and_unitarity() {
    let mut rng = ChaCha8Rng::seed_from_u64(4100);
    let mut checked = 0usize;
    let mut worst_residual: f64 = 0.0;

    while checked < 100 {
        let n = rng.gen_range(1..=5usize);
        let kappa = rng.gen_range(2..=4usize);
        let instance = random_instance(&mut rng, n, kappa, 0.5);
        let layout = instance.layout().unwrap();
        let state0 = random_state(layout.num_qubits(), &mut rng);

        // Composed oracle applied twice restores the state.
        let mut state = state0.clone();
        let mut counter = InvocationCounter::new();
        apply_composed_oracle(&mut state, &instance, &mut counter).unwrap();
        apply_composed_oracle(&mut state, &instance, &mut counter).unwrap();
        for (got, want) in state.amplitudes().iter().zip(state0.amplitudes()) {
            let r = (got - want).norm();
            worst_residual = worst_residual.max(r);
            assert!(r < INVOLUTION_TOL, "oracle involution residual {r:.3e}");
        }

        // Partial diffusion applied twice restores the state.
        let mut state = state0.clone();
        apply_partial_diffusion(&mut state, &layout).unwrap();
        apply_partial_diffusion(&mut state, &layout).unwrap();
        for (got, want) in state.amplitudes().iter().zip(state0.amplitudes()) {
            let r = (got - want).norm();
            worst_residual = worst_residual.max(r);
            assert!(r < INVOLUTION_TOL, "diffusion involution residual {r:.3e}");
        }

        // Standard diffusion too, since the baseline depends on it.
        let mut state = state0.clone();
        apply_grover_diffusion(&mut state, n).unwrap();
        apply_grover_diffusion(&mut state, n).unwrap();
        for (got, want) in state.amplitudes().iter().zip(state0.amplitudes()) {
            assert!((got - want).norm() < INVOLUTION_TOL);
        }

        checked += 1;
    }

    // Norm drift over full scheduled runs.
    let mut worst_drift: f64 = 0.0;
    for kappa in [2usize, 3] {
        for n in 2..=6usize {
            let num_entries = 1u64 << n;
            for m_c in [1, num_entries / 2 + 1, num_entries] {
                let instance = synthetic_instance(n, kappa, m_c).unwrap();
                let schedule = IterationSchedule::new(num_entries, m_c).unwrap();
                let outcome =
                    run_loop(&instance, AmplifierKind::PartialDiffusion, schedule.iterations())
                        .unwrap();
                let drift = (outcome.state.norm_sqr() - 1.0).abs();
                worst_drift = worst_drift.max(drift);
                assert!(drift <= NORM_DRIFT_TOL, "norm drift {drift:.3e} after full run");
            }
        }
    }

    println!(
        "criterion 4 (involution and unitarity): PASS: 100 random states, worst involution \
         residual {worst_residual:.3e} (tol {INVOLUTION_TOL:.0e}); worst run norm drift \
         {worst_drift:.3e} (tol {NORM_DRIFT_TOL:.0e})"
    );
}

#[test]
fn criterion_5_ancilla_disentanglement() {
    let mut worst_leak: f64 = 0.0;
    let mut oracle_calls = 0usize;
    for kappa in [2usize, 3] {
        for n in 2..=6usize {
            let num_entries = 1u64 << n;
            for m_c in [1, 2, num_entries / 2, num_entries] {
                if m_c == 0 {
                    continue;
                }
                let instance = synthetic_instance(n, kappa, m_c).unwrap();
                let layout = instance.layout().unwrap();
                let schedule = IterationSchedule::new(num_entries, m_c).unwrap();
                let mut state = StateVector::new(layout.num_qubits()).unwrap();
                state.hadamard_layer(layout.search_qubits()).unwrap();
                let mut counter = InvocationCounter::new();
                for _ in 0..schedule.iterations() {
                    apply_composed_oracle(&mut state, &instance, &mut counter).unwrap();
                    let leak = 1.0 - mark_reset_probability(&state, layout.kappa());
                    worst_leak = worst_leak.max(leak);
                    oracle_calls += 1;
                    assert!(
                        leak <= MARK_LEAK_TOL,
                        "mark qubits kept {leak:.3e} mass at n={n} kappa={kappa} M_c={m_c}"
                    );
                    apply_partial_diffusion(&mut state, &layout).unwrap();
                }
            }
        }
    }
    println!(
        "criterion 5 (ancilla disentanglement): PASS: {oracle_calls} oracle calls, worst \
         residual mark mass {worst_leak:.3e} (tol {MARK_LEAK_TOL:.0e})"
    );
}

#[test]
fn criterion_6_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(6200);
    for trial in 0..200 {
        let n = rng.gen_range(1..=10usize);
        let kappa = rng.gen_range(2..=5usize);
        let density = rng.gen_range(0.2..0.9);
        let instance = random_instance(&mut rng, n, kappa, density);

        let by_intersection = common_solution_set(&instance);
        let (by_scan, queries) = classical_common_entries(&instance);
        assert_eq!(by_intersection, by_scan, "trial {trial}");
        assert_eq!(queries, kappa as u64 * instance.num_entries());

        // Branches flagged by one composed-oracle call on the uniform state.
        let layout = instance.layout().unwrap();
        let mut state = StateVector::new(layout.num_qubits()).unwrap();
        state.hadamard_layer(layout.search_qubits()).unwrap();
        let mut counter = InvocationCounter::new();
        apply_composed_oracle(&mut state, &instance, &mut counter).unwrap();
        let threshold = 0.5 / instance.num_entries() as f64;
        let by_marking: BTreeSet<u64> = (0..instance.num_entries())
            .filter(|&i| {
                state
                    .amplitude(layout.basis_index(i, 0, true))
                    .norm_sqr()
                    > threshold
            })
            .collect();
        assert_eq!(by_intersection, by_marking, "trial {trial}");
    }
    println!(
        "criterion 6 (oracle equivalence): PASS: 200 random instances (n <= 10, kappa <= 5), \
         intersection, classical scan and quantum marking all agree"
    );
}

#[test]
fn criterion_7_sampling_consistency() {
    let instance = ProblemInstance::new(vec![
        BlackBox::new(2, "A", [1, 3]).unwrap(),
        BlackBox::new(2, "B", [2, 3]).unwrap(),
    ])
    .unwrap();
    let shots = 10_000u64;
    let seed = 20_240u64;
    let report = run_common_entry_search(&instance, 2, shots, seed).unwrap();

    let p = report.exact_success;
    assert!((p - 61.0 / 64.0).abs() < 1e-12, "exact success {p}");
    let common = BTreeSet::from([3u64]);
    let observed = report.frequency_of(&common) as f64;
    let mean = shots as f64 * p;
    let band = 4.0 * (shots as f64 * p * (1.0 - p)).sqrt();
    assert!(
        (observed - mean).abs() <= band,
        "common-entry frequency {observed} outside {mean:.1} +- {band:.1}"
    );
    println!(
        "criterion 7 (sampling consistency): PASS: common-entry frequency {observed} within \
         {mean:.2} +- {band:.2} (4-sigma, p = 61/64, {shots} shots, seed {seed})"
    );
}

#[test]
fn criterion_8_reliability_contrast() {
    let report = run_sweep(&SweepConfig {
        n_min: 4,
        n_max: 4,
        kappa: 2,
        common_counts: CommonCountStrategy::Exhaustive,
        include_grover: true,
    })
    .unwrap();
    assert_eq!(report.rows.len(), 16);

    let contrast_rows: Vec<_> = report
        .rows
        .iter()
        .filter(|r| r.common_count > 12 && r.grover_success.unwrap() < r.simulated_success)
        .collect();
    assert!(
        !contrast_rows.is_empty(),
        "no M_c > 12 row shows the baseline strictly behind the amplified search"
    );

    // Cross-check one row end to end through the run API.
    let row = contrast_rows[0];
    let instance = synthetic_instance(4, 2, row.common_count).unwrap();
    let baseline = run_grover_baseline(
        &instance,
        grover_iteration_count(16, row.common_count),
        1,
        0,
    )
    .unwrap();
    assert!((baseline.exact_success - row.grover_success.unwrap()).abs() < 1e-12);

    let detail: Vec<String> = contrast_rows
        .iter()
        .map(|r| {
            format!(
                "M_c={}: baseline {:.4} < amplified {:.4}",
                r.common_count,
                r.grover_success.unwrap(),
                r.simulated_success
            )
        })
        .collect();
    println!(
        "criterion 8 (reliability contrast): PASS: n=4 rows with the baseline strictly behind: {}",
        detail.join("; ")
    );
}
