//! Acceptance suite. Each criterion writes one PASS/FAIL line to stderr.

use std::io::Write;
use std::time::{Duration, Instant};

use num_traits::Zero;
use serde_json::json;

use gossez_lab::checks::{identity_samples, infinity_point};
use gossez_lab::fitz::{divergence_search, fitz_closed_first, fitz_sampled, orthogonality_report, annihilator_truncated, ExtendedValue, SampledGraph};
use gossez_lab::gossez::{range_ratio_family, weakstar_approximate};
use gossez_lab::probe::{graph_point, ProbeSet, ProbeSpec, Sampler};
use gossez_lab::props::{dichotomy_crosscheck, extension_probe, ni_witness_search, CrossCheckParams, OperatorId, ScaledSearch};
use gossez_lab::rational::{int, q};
use gossez_lab::report::{emit, run_checks, CheckConfig, Format};
use gossez_lab::verdict::Status;
use gossez_lab::{apply_g, apply_gstar, couple, pair_measure, solve_g, DualSystem, ModelMeasure, PairPoint, Rational, SparseSeq, TailSeq};

const SEED: u64 = 0;
const N: usize = 64;
const SAMPLES: usize = 1000;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn samples() -> Vec<SparseSeq> {
    identity_samples(SEED, 9000, N, SAMPLES)
}

fn frac(ok: usize, total: usize) -> String {
    format!("{ok}/{total}")
}

/// Kernel of G written out from its definition.
fn alpha_oracle(k: usize, n: usize) -> i64 {
    match k.cmp(&n) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    }
}

fn g_oracle(x: &SparseSeq, n: usize) -> Rational {
    x.iter().map(|(k, v)| v * int(alpha_oracle(k, n))).sum()
}

fn c1_skewness() -> Outcome {
    let xs = samples();
    let zero = xs.iter().filter(|x| couple(x, &apply_g(x)).is_zero()).count();
    let oracle = xs[..100]
        .iter()
        .filter(|x| {
            let g = apply_g(x);
            (1..=x.max_index() + 2).all(|n| g.get(n) == g_oracle(x, n))
        })
        .count();
    outcome(
        zero == SAMPLES && oracle == 100,
        format!("skew {}; G matches kernel sum {}", frac(zero, SAMPLES), frac(oracle, 100)),
    )
}

fn c2_antisymmetry() -> Outcome {
    let xs = samples();
    let ys = identity_samples(SEED, 9001, N, SAMPLES);
    let ok = xs
        .iter()
        .zip(&ys)
        .filter(|(x, y)| (couple(x, &apply_g(y)) + couple(y, &apply_g(x))).is_zero())
        .count();
    outcome(ok == SAMPLES, frac(ok, SAMPLES))
}

fn c3_norm_bound() -> Outcome {
    let xs = samples();
    let ok = xs.iter().filter(|x| apply_g(x).linf_norm() <= x.l1_norm()).count();
    let e1 = SparseSeq::unit(1);
    let eq = apply_g(&e1).linf_norm() == int(1) && e1.l1_norm() == int(1);
    outcome(ok == SAMPLES && eq, format!("bound {}; equality at e1 {eq}", frac(ok, SAMPLES)))
}

fn c4_range_and_injectivity() -> Outcome {
    let xs = samples();
    let mut limit_ok = 0;
    let mut inverse_ok = 0;
    for x in &xs {
        let g = apply_g(x);
        let sum: Rational = x.iter().map(|(_, v)| v.clone()).sum();
        if g.limit() == Some(-sum) {
            limit_ok += 1;
        }
        if solve_g(&g).preimage.as_ref() == Some(x) {
            inverse_ok += 1;
        }
    }
    let blocked = |y: &TailSeq| {
        let c = solve_g(y);
        !c.feasible && c.preimage.is_none() && c.obstruction.is_some() && c.alternating_magnitude.is_some()
    };
    let ones = blocked(&TailSeq::ones());
    let e1 = blocked(&TailSeq::from_sparse(&SparseSeq::unit(1)));
    outcome(
        limit_ok == SAMPLES && inverse_ok == SAMPLES && ones && e1,
        format!(
            "limit {}; inverse {}; 1 infeasible {ones}; e1 infeasible {e1}",
            frac(limit_ok, SAMPLES),
            frac(inverse_ok, SAMPLES)
        ),
    )
}

fn random_measures(stream: u64) -> Vec<ModelMeasure> {
    let mut s = Sampler::fork(SEED, stream, 1000);
    (0..SAMPLES).map(|_| s.measure(N, N)).collect()
}

fn c5_adjoint() -> Outcome {
    let ys = samples();
    let mus = random_measures(9002);
    let ok = ys
        .iter()
        .zip(&mus)
        .filter(|(y, mu)| pair_measure(mu, &apply_g(y)) == Ok(couple(y, &apply_gstar(mu))))
        .count();
    outcome(ok == SAMPLES, frac(ok, SAMPLES))
}

fn c6_first_fitzpatrick() -> Outcome {
    let graph_xs = identity_samples(SEED, 9003, N, 200);
    let on_graph = graph_xs
        .iter()
        .filter(|x| fitz_closed_first(&graph_point(x)) == Ok(ExtendedValue::zero()))
        .count();

    let off = ProbeSet::off_graph(ProbeSpec::new(SEED, N, 50));
    let threshold = int(1_000_000);
    let diverged = off
        .points
        .iter()
        .filter(|z| {
            matches!(divergence_search(z, &threshold, &threshold), Ok(Some(d)) if d.value > threshold && d.scale <= threshold)
        })
        .count();

    let pool: Vec<PairPoint> = identity_samples(SEED, 9004, 16, 40).iter().map(graph_point).collect();
    let probes = ProbeSet::generate(ProbeSpec::new(SEED, 16, 100), DualSystem::First);
    let mut s = Sampler::fork(SEED, 9005, 20);
    let combos = 10_000;
    let mut below = 0;
    let mut direct_ok = 0;
    for i in 0..combos {
        let z = &probes.points[i % probes.points.len()];
        let size = s.small_int(1, 6) as usize;
        let subset: Vec<PairPoint> = (0..size).map(|_| pool[s.index(pool.len()) - 1].clone()).collect();
        let sample = SampledGraph::new(DualSystem::First, "subset", subset.clone()).unwrap();
        let lo = fitz_sampled(z, &sample).unwrap();
        if lo <= fitz_closed_first(z).unwrap() {
            below += 1;
        }
        if i < 200 {
            let PairPoint::First { x, y } = z else { unreachable!() };
            let direct = subset
                .iter()
                .map(|w| {
                    let PairPoint::First { x: u, y: v } = w else { unreachable!() };
                    couple(x, v) + couple(u, y) - couple(u, v)
                })
                .max()
                .unwrap();
            if lo == ExtendedValue::Finite(direct) {
                direct_ok += 1;
            }
        }
    }
    outcome(
        on_graph == 200 && diverged == 50 && below == combos && direct_ok == 200,
        format!(
            "zero on graph {}; diverged {}; sampled <= closed {}; direct formula {}",
            frac(on_graph, 200),
            frac(diverged, 50),
            frac(below, combos),
            frac(direct_ok, 200)
        ),
    )
}

fn c7_self_orthogonality() -> Outcome {
    let xs = identity_samples(SEED, 9006, N, 40);
    let a = SampledGraph::graph_g(&xs, DualSystem::First);
    let report = orthogonality_report(&a, &a);
    let pairs_ok = report.status == Status::VerifiedOnSamples && report.stats["pairs_checked"] == json!(1600);

    let span: Vec<PairPoint> = (1..=32).map(|k| graph_point(&SparseSeq::unit(k))).collect();
    let ann = annihilator_truncated(&span, 32, DualSystem::First).unwrap();
    let inside = identity_samples(SEED, 9007, 32, 100);
    let contained = inside.iter().filter(|x| ann.contains(&graph_point(x)) == Ok(true)).count();
    let off = ProbeSet::off_graph(ProbeSpec::new(SEED, 32, 100));
    let excluded = off.points.iter().filter(|z| ann.contains(z) == Ok(false)).count();
    outcome(
        pairs_ok && contained == 100 && excluded == 100 && off.points.len() == 100,
        format!(
            "40x40 violations-free {pairs_ok}; contains graph {}; excludes off-graph {}",
            frac(contained, 100),
            frac(excluded, off.points.len())
        ),
    )
}

fn c8_ni_dichotomy() -> Outcome {
    let z = infinity_point();
    let single = ProbeSet {
        system: DualSystem::Second,
        points: vec![z.clone()],
        generation: ProbeSpec::new(SEED, N, 1),
    };
    let g = ni_witness_search(OperatorId::GSecond, &single);
    let g_ok = g.status == Status::WitnessFound && g.witness[0].value == int(1) && g.witness[0].points == vec![z];

    let second = ProbeSet::generate(ProbeSpec::new(SEED, N, 1000), DualSystem::Second);
    let neg = ni_witness_search(OperatorId::NegGSecond, &second);
    let neg_ok = neg.status == Status::VerifiedOnSamples && neg.stats["probes_checked"] == json!(1000);
    let first = ProbeSet::generate(ProbeSpec::new(SEED, N, 1000), DualSystem::First);
    let fst = ni_witness_search(OperatorId::GFirst, &first);
    let fst_ok = fst.status == Status::VerifiedOnSamples && fst.stats["probes_checked"] == json!(1000);

    let mus = random_measures(9008);
    let couplings = mus
        .iter()
        .filter(|mu| {
            let a2 = &mu.infinity_mass * &mu.infinity_mass;
            let gs = apply_gstar(mu);
            pair_measure(mu, &-&gs) == Ok(a2.clone()) && pair_measure(mu, &gs) == Ok(-a2)
        })
        .count();
    outcome(
        g_ok && neg_ok && fst_ok && couplings == SAMPLES,
        format!(
            "G-second margin 1 {g_ok}; negG-second clean {neg_ok}; G-first clean {fst_ok}; +-a^2 {}",
            frac(couplings, SAMPLES)
        ),
    )
}

fn c9_maximality_contrast() -> Outcome {
    let scale_max = int(1_000_000);
    let graph = OperatorId::GFirst.sample_graph(&identity_samples(SEED, 9009, 16, 24));
    let search = ScaledSearch {
        operator: OperatorId::GFirst,
        scale_max: scale_max.clone(),
        truncation: 16,
    };
    let off = ProbeSet::off_graph(ProbeSpec::new(SEED, 16, 100));
    let refuted = off
        .points
        .iter()
        .filter(|z| {
            let v = extension_probe(&graph, z, Some(&search));
            v.status == Status::Refuted && v.witness[0].value < Rational::zero()
        })
        .count();

    let second = OperatorId::GSecond.sample_graph(&identity_samples(SEED, 9010, 16, 24));
    let search = ScaledSearch {
        operator: OperatorId::GSecond,
        ..search
    };
    let z = infinity_point();
    let ext = extension_probe(&second, &z, Some(&search));
    let ext_ok = ext.status == Status::WitnessFound && ext.witness[0].points[0] == z;

    let params = CrossCheckParams::default();
    let expected = [
        (OperatorId::GFirst, "maximal-consistent"),
        (OperatorId::GSecond, "not-maximal-consistent"),
        (OperatorId::NegGSecond, "ni-but-not-maximal-consistent"),
    ];
    let profiles = expected
        .iter()
        .filter(|(op, profile)| {
            let v = dichotomy_crosscheck(*op, &params);
            v.status == Status::VerifiedOnSamples && v.stats["profile"] == json!(profile)
        })
        .count();
    outcome(
        refuted == 100 && off.points.len() == 100 && ext_ok && profiles == 3,
        format!(
            "first-system refuted {}; second-system witness {ext_ok}; profiles {}",
            frac(refuted, off.points.len()),
            frac(profiles, 3)
        ),
    )
}

fn c10_range_pathology() -> Outcome {
    let ratios = [1i64, 10, 100, 1000]
        .iter()
        .all(|&m| range_ratio_family(m as usize) <= q(1, m));
    let y = TailSeq::periodic(vec![int(1), int(-1)]).unwrap();
    let xs = identity_samples(SEED, 9011, N, 500);
    let far = xs.iter().filter(|x| (&apply_g(x) - &y).linf_norm() >= int(1)).count();

    let mut s = Sampler::fork(SEED, 9012, 1000);
    let tests: Vec<SparseSeq> = (0..5)
        .map(|_| loop {
            let w = s.sparse(4, 16);
            if !w.is_zero() {
                break w;
            }
        })
        .collect();
    let target = TailSeq::ones();
    let matched = match weakstar_approximate(&target, &tests) {
        Ok(x) => {
            let gx = apply_g(&x);
            tests.iter().filter(|w| couple(w, &gx) == couple(w, &target)).count()
        }
        Err(_) => 0,
    };
    outcome(
        ratios && far == 500 && matched == 5,
        format!("ratios {ratios}; distance >= 1 {}; weak* matches {}", frac(far, 500), frac(matched, 5)),
    )
}

fn c11_determinism() -> Outcome {
    let config = CheckConfig::default();
    let mut runs = Vec::new();
    let mut times = Vec::new();
    for _ in 0..2 {
        let start = Instant::now();
        let report = run_checks(&config).unwrap();
        times.push(start.elapsed());
        runs.push((report.all_passed(), emit(&report, Format::Json)));
    }
    let identical = runs[0].1 == runs[1].1;
    let passed = runs.iter().all(|(p, _)| *p);
    let fast = times.iter().all(|t| *t < Duration::from_secs(60));
    outcome(
        identical && passed && fast,
        format!(
            "byte-identical {identical}; all checks passed {passed}; wallclock {:.1}s / {:.1}s",
            times[0].as_secs_f64(),
            times[1].as_secs_f64()
        ),
    )
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        ("skewness", c1_skewness),
        ("anti-symmetry", c2_antisymmetry),
        ("norm bound", c3_norm_bound),
        ("range law and injectivity", c4_range_and_injectivity),
        ("adjoint identity", c5_adjoint),
        ("first-system Fitzpatrick function", c6_first_fitzpatrick),
        ("self-orthogonality", c7_self_orthogonality),
        ("NI dichotomy", c8_ni_dichotomy),
        ("maximality contrast", c9_maximality_contrast),
        ("range pathology", c10_range_pathology),
        ("report determinism", c11_determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let verdict = if o.ok { "PASS" } else { "FAIL" };
        let line = format!("criterion {:>2} {:<36} {verdict} ({})\n", i + 1, name, o.detail);
        let _ = std::io::stderr().write_all(line.as_bytes());
        if !o.ok {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
