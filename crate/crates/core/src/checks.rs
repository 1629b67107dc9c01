//! The catalog of named checks, one per claim, and their implementations.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::fitz::{
    annihilator_truncated, divergence_search, fitz_closed_first, fitz_closed_second_g,
    fitz_closed_second_neg_g, fitz_sampled, orthogonality_report, ExtendedValue, SampledGraph,
};
use crate::gossez::{alpha, apply_g, range_ratio_family, solve_g, weakstar_approximate};
use crate::measure::{apply_gstar, graph_neg_gstar_point, in_kernel_model, pair_measure, ModelMeasure};
use crate::point::{DualSystem, PairPoint};
use crate::probe::{graph_point, ProbeSet, ProbeSpec, Sampler};
use crate::props::{
    dichotomy_crosscheck, extension_probe, is_monotone, ni_witness_search, representability_check,
    CrossCheckParams, OperatorId, ScaledSearch,
};
use crate::rational::{self, int, Rational};
use crate::report::CheckConfig;
use crate::sparse::SparseSeq;
use crate::tail::{couple, TailSeq};
use crate::verdict::{Status, Witness, WitnessKind};

/// Result of one catalog check before it is wrapped into a report record.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub witnesses: Vec<Witness>,
    pub stats: BTreeMap<String, Value>,
}

pub struct CatalogEntry {
    pub name: &'static str,
    /// The claim being checked, stated as formulas.
    pub anchor: &'static str,
    /// Stable identifiers of the claims covered; each appears in exactly one entry.
    pub claims: &'static [&'static str],
    pub expected: Status,
    pub run: fn(&CheckConfig) -> Outcome,
}

pub static CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "g-basic",
        anchor: "R(G) ⊂ c and G is one-to-one; G is linear bounded skew: <x,Gx> = 0, <x,Gy> = -<y,Gx>, ||Gx||_inf <= ||x||_1",
        claims: &["g.range-in-c", "g.injective", "g.skew", "g.antisymmetric", "g.bounded"],
        expected: Status::VerifiedOnSamples,
        run: g_basic,
    },
    CatalogEntry {
        name: "g-orth",
        anchor: "(Graph G)^⊥ = Graph G relative to (l1 x l_inf, l_inf x l1)",
        claims: &["g.self-orthogonal"],
        expected: Status::VerifiedOnSamples,
        run: g_orth,
    },
    CatalogEntry {
        name: "gstar",
        anchor: "G*mu = -mu(bN \\ N) 1 - G mu_bar, <y, G*mu> = <mu, Gy>; Ker G* = {mu(bN \\ N) = 0, mu({n}) = 0}",
        claims: &["gstar.formula", "gstar.adjoint", "gstar.kernel"],
        expected: Status::VerifiedOnSamples,
        run: gstar,
    },
    CatalogEntry {
        name: "range",
        anchor: "R(G) is sigma(l_inf, l1)-dense and neither (strongly-)closed nor dense in l_inf",
        claims: &["range.weakstar-dense", "range.not-closed", "range.not-dense"],
        expected: Status::VerifiedOnSamples,
        run: range,
    },
    CatalogEntry {
        name: "fds",
        anchor: "in (l1, l_inf): G is maximal monotone with phi_G = psi_G = iota_{Graph G} = c_G",
        claims: &["fds.fitzpatrick", "fds.ni"],
        expected: Status::VerifiedOnSamples,
        run: fds,
    },
    CatalogEntry {
        name: "sds-i",
        anchor: "in (l_inf*, l_inf): G is skew monotone unique and not NI; Phi_G = iota_{Graph(neg G*)}; Graph G ⊂ (Graph G)^⊥ = Graph(neg G*)",
        claims: &["sds.not-ni", "sds.phi-formula", "sds.orthogonal", "sds.extension"],
        expected: Status::WitnessFound,
        run: sds_i,
    },
    CatalogEntry {
        name: "sds-ii",
        anchor: "in (l_inf*, l_inf): neg G is NI but not maximal monotone",
        claims: &["sds.neg-ni"],
        expected: Status::VerifiedOnSamples,
        run: sds_ii,
    },
    CatalogEntry {
        name: "dichotomy",
        anchor: "T is maximal monotone iff it is representable and NI",
        claims: &["dichotomy.profiles", "fds.maximal"],
        expected: Status::VerifiedOnSamples,
        run: dichotomy,
    },
];

/// Collects sub-assertions of one check.
#[derive(Default)]
struct Tally {
    stats: BTreeMap<String, Value>,
    failures: Vec<String>,
    witnesses: Vec<Witness>,
}

impl Tally {
    fn count(&mut self, key: &str, ok: usize, total: usize) {
        self.stats.insert(key.into(), json!(format!("{ok}/{total}")));
        if ok != total {
            self.failures.push(key.into());
        }
    }

    fn holds(&mut self, key: &str, cond: bool) {
        self.stats.insert(key.into(), json!(cond));
        if !cond {
            self.failures.push(key.into());
        }
    }

    fn info(&mut self, key: &str, value: impl Into<Value>) {
        self.stats.insert(key.into(), value.into());
    }

    fn finish(mut self, success: Status) -> Outcome {
        let status = if self.failures.is_empty() {
            success
        } else {
            Status::Refuted
        };
        self.stats.insert("failures".into(), json!(self.failures));
        Outcome {
            status,
            witnesses: self.witnesses,
            stats: self.stats,
        }
    }
}

fn count_where<T>(items: &[T], f: impl Fn(&T) -> bool) -> usize {
    items.iter().filter(|i| f(i)).count()
}

/// Samples used by the identity checks: support up to the truncation,
/// numerators and denominators up to 10³.
pub fn identity_samples(seed: u64, stream: u64, truncation: usize, count: usize) -> Vec<SparseSeq> {
    let n = truncation.max(1);
    let mut s = Sampler::fork(seed, stream, 1000);
    (0..count).map(|_| s.sparse(n, n)).collect()
}

fn g_basic(cfg: &CheckConfig) -> Outcome {
    let mut t = Tally::default();
    let xs = identity_samples(cfg.seed, 100, cfg.truncation, cfg.trials);
    let gxs: Vec<TailSeq> = xs.iter().map(apply_g).collect();
    let idx: Vec<usize> = (0..xs.len()).collect();
    let total = xs.len();

    t.count("skew", count_where(&idx, |&i| couple(&xs[i], &gxs[i]).is_zero()), total);
    t.count(
        "antisymmetry",
        count_where(&idx, |&i| {
            let j = (i + 1) % total;
            (couple(&xs[i], &gxs[j]) + couple(&xs[j], &gxs[i])).is_zero()
        }),
        total,
    );
    t.count("norm_bound", count_where(&idx, |&i| gxs[i].linf_norm() <= xs[i].l1_norm()), total);
    t.count("range_law", count_where(&idx, |&i| gxs[i].limit() == Some(-xs[i].sum())), total);
    t.count(
        "injectivity",
        count_where(&idx, |&i| solve_g(&gxs[i]).preimage.as_ref() == Some(&xs[i])),
        total,
    );
    t.count(
        "difference_recurrence",
        count_where(&idx, |&i| {
            let (x, g) = (&xs[i], &gxs[i]);
            (1..=g.head().len()).all(|k| g.get(k + 1) - g.get(k) == -(x.get(k) + x.get(k + 1)))
        }),
        total,
    );
    let mut s = Sampler::fork(cfg.seed, 101, 1000);
    let scalars: Vec<(Rational, Rational)> = (0..total).map(|_| (s.rational(), s.rational())).collect();
    t.count(
        "linearity",
        count_where(&idx, |&i| {
            let j = (i + 1) % total;
            let (a, b) = &scalars[i];
            let lhs = apply_g(&(&xs[i].scale(a) + &xs[j].scale(b)));
            lhs == &gxs[i].scale(a) + &gxs[j].scale(b)
        }),
        total,
    );

    let e1 = SparseSeq::unit(1);
    t.holds("norm_equality_at_e1", apply_g(&e1).linf_norm() == int(1) && e1.l1_norm() == int(1));
    t.holds("kernel_trivial", apply_g(&SparseSeq::zero()).is_zero());

    for (key, target) in [("solve_ones", TailSeq::ones()), ("solve_e1", TailSeq::from_sparse(&e1))] {
        let cert = solve_g(&target);
        t.holds(&format!("{key}_infeasible"), !cert.feasible && cert.alternating_magnitude.is_some());
        t.info(&format!("{key}_obstruction"), cert.obstruction.unwrap_or_default());
    }
    t.info("samples", total as u64);
    t.finish(Status::VerifiedOnSamples)
}

fn g_orth(cfg: &CheckConfig) -> Outcome {
    let mut t = Tally::default();
    let xs = identity_samples(cfg.seed, 200, cfg.truncation, 40);
    let a = SampledGraph::graph_g(&xs, DualSystem::First);
    let orth = orthogonality_report(&a, &a);
    t.holds("orthogonality_40x40", orth.status == Status::VerifiedOnSamples);
    t.info("orthogonality_pairs", orth.stats["pairs_checked"].clone());
    t.witnesses.extend(orth.witness);

    let n = cfg.truncation.clamp(2, 32);
    let span: Vec<PairPoint> = (1..=n).map(|k| graph_point(&SparseSeq::unit(k))).collect();
    let ann = match annihilator_truncated(&span, n, DualSystem::First) {
        Ok(a) => a,
        Err(e) => {
            t.holds("annihilator", false);
            t.info("annihilator_error", e.to_string());
            return t.finish(Status::VerifiedOnSamples);
        }
    };
    t.info("annihilator_truncation", n as u64);
    t.info("annihilator_dimension", ann.basis.len() as u64);

    let inside = identity_samples(cfg.seed, 201, n, 100);
    let contained = count_where(&inside, |x| ann.contains(&graph_point(x)).unwrap_or(false));
    t.count("annihilator_contains_graph", contained, inside.len());

    let off = ProbeSet::off_graph(ProbeSpec::new(cfg.seed, n, 100));
    let excluded = count_where(&off.points, |z| matches!(ann.contains(z), Ok(false)));
    t.count("annihilator_excludes_off_graph", excluded, off.points.len());
    t.finish(Status::VerifiedOnSamples)
}

/// `(G*μ)_n` from the kernel sum, independent of `apply_gstar`.
fn gstar_entry(mu: &ModelMeasure, n: usize) -> Rational {
    let terms: Vec<Rational> = mu.atomic.iter().map(|(k, v)| v * int(alpha(k, n))).collect();
    -&mu.infinity_mass - rational::sum(&terms)
}

/// Indices at which the kernel sum is compared: both ends of the support,
/// its middle, and three points in the tail.
fn probe_indices(h: usize) -> Vec<usize> {
    let mut idx = vec![1, h / 2, h, h + 1, h + 2, h + 7];
    idx.retain(|&n| n >= 1);
    idx.sort_unstable();
    idx.dedup();
    idx
}

fn gstar(cfg: &CheckConfig) -> Outcome {
    let mut t = Tally::default();
    let n = cfg.truncation.max(1);
    let mut s = Sampler::fork(cfg.seed, 300, 1000);
    let pairs: Vec<(SparseSeq, ModelMeasure)> =
        (0..cfg.trials).map(|_| (s.sparse(n, n), s.measure(n, n))).collect();
    let total = pairs.len();
    let gys: Vec<TailSeq> = pairs.iter().map(|(y, _)| apply_g(y)).collect();
    let gss: Vec<TailSeq> = pairs.iter().map(|(_, mu)| apply_gstar(mu)).collect();
    let idx: Vec<usize> = (0..total).collect();

    t.count(
        "adjoint_identity",
        count_where(&idx, |&i| {
            let (y, mu) = &pairs[i];
            pair_measure(mu, &gys[i]).is_ok_and(|r| r == couple(y, &gss[i]))
        }),
        total,
    );
    t.count(
        "formula_vs_kernel_sum",
        count_where(&idx, |&i| {
            let mu = &pairs[i].1;
            probe_indices(mu.atomic.max_index()).into_iter().all(|k| gss[i].get(k) == gstar_entry(mu, k))
        }),
        total,
    );
    t.count(
        "coupling_on_graph_neg_gstar_is_a2",
        count_where(&idx, |&i| {
            let mu = &pairs[i].1;
            let a2 = &mu.infinity_mass * &mu.infinity_mass;
            pair_measure(mu, &-&gss[i]).is_ok_and(|r| r == a2)
        }),
        total,
    );
    t.count(
        "coupling_on_graph_gstar_is_minus_a2",
        count_where(&idx, |&i| {
            let mu = &pairs[i].1;
            let a2 = &mu.infinity_mass * &mu.infinity_mass;
            pair_measure(mu, &gss[i]).is_ok_and(|r| r == -a2)
        }),
        total,
    );
    t.count(
        "linearity",
        count_where(&idx, |&i| {
            let j = (i + 1) % total;
            apply_gstar(&(&pairs[i].1 + &pairs[j].1)) == &gss[i] + &gss[j]
        }),
        total,
    );
    t.count(
        "restriction_to_l1",
        count_where(&idx, |&i| {
            let x = &pairs[i].0;
            let y = &gys[(i + 1) % total];
            pair_measure(&ModelMeasure::atomic_only(x.clone()), y).is_ok_and(|r| r == couple(x, y))
        }),
        total,
    );
    t.count(
        "graph_g_inside_graph_neg_gstar",
        count_where(&idx, |&i| {
            let x = &pairs[i].0;
            graph_neg_gstar_point(&ModelMeasure::atomic_only(x.clone()))
                == PairPoint::first(x.clone(), gys[i].clone()).embed()
        }),
        total,
    );
    t.holds(
        "kernel_model",
        in_kernel_model(&ModelMeasure::zero())
            && !in_kernel_model(&ModelMeasure::atomic_only(SparseSeq::unit(1)))
            && !in_kernel_model(&ModelMeasure::at_infinity(int(1))),
    );
    t.info(
        "kernel_note",
        "kernel elements with no atoms and no mass at infinity are not representable in the model",
    );
    t.finish(Status::VerifiedOnSamples)
}

fn range(cfg: &CheckConfig) -> Outcome {
    let mut t = Tally::default();
    let mut ratios = serde_json::Map::new();
    let mut ratio_ok = true;
    for m in [1usize, 10, 100, 1000] {
        let r = range_ratio_family(m);
        ratio_ok &= r <= rational::q(1, m as i64);
        ratios.insert(m.to_string(), json!(rational::to_text(&r)));
    }
    t.holds("ratio_below_one_over_m", ratio_ok);
    t.info("ratios", Value::Object(ratios));
    t.info(
        "not_closed",
        "injective G has no lower bound ||Gx|| >= c||x||, so R(G) is not closed",
    );

    let y = TailSeq::periodic(vec![int(1), int(-1)]).expect("nonempty");
    let osc = y.oscillation();
    t.holds("oscillation_is_one", osc == int(1));
    let xs = identity_samples(cfg.seed, 400, cfg.truncation, (cfg.trials / 2).max(1));
    t.count(
        "distance_to_alternating_at_least_one",
        count_where(&xs, |x| {
            let d = (&apply_g(x) - &y).linf_norm();
            d >= int(1) && d >= osc
        }),
        xs.len(),
    );
    let cert = solve_g(&y);
    t.holds("alternating_not_in_range", !cert.feasible);

    let n = cfg.truncation.clamp(1, 16);
    let mut s = Sampler::fork(cfg.seed, 401, 1000);
    let tests: Vec<SparseSeq> = (0..5)
        .map(|_| loop {
            let w = s.sparse(4, n);
            if !w.is_zero() {
                break w;
            }
        })
        .collect();
    for (key, target) in [("weakstar_ones", TailSeq::ones()), ("weakstar_alternating", y.clone())] {
        match weakstar_approximate(&target, &tests) {
            Ok(x) => {
                let gx = apply_g(&x);
                let matched = count_where(&tests, |w| couple(w, &gx) == couple(w, &target));
                t.count(key, matched, tests.len());
                t.info(&format!("{key}_support"), x.max_index() as u64);
            }
            Err(e) => {
                t.holds(key, false);
                t.info(&format!("{key}_error"), e.to_string());
            }
        }
    }
    t.finish(Status::VerifiedOnSamples)
}

fn fds(cfg: &CheckConfig) -> Outcome {
    let mut t = Tally::default();
    let graph_xs = identity_samples(cfg.seed, 500, cfg.truncation, 200);
    t.count(
        "closed_form_zero_on_graph",
        count_where(&graph_xs, |x| {
            fitz_closed_first(&graph_point(x)).is_ok_and(|v| v == ExtendedValue::zero())
        }),
        graph_xs.len(),
    );

    let threshold = int(1_000_000);
    let off = ProbeSet::off_graph(ProbeSpec::new(cfg.seed, cfg.truncation.max(2), 50));
    let mut diverged = 0;
    let mut max_scale = Rational::zero();
    for z in &off.points {
        if let Ok(Some(d)) = divergence_search(z, &threshold, &cfg.scale_max) {
            diverged += 1;
            if d.scale > max_scale {
                max_scale = d.scale.clone();
            }
            if t.witnesses.is_empty() {
                t.witnesses.push(
                    Witness::new(WitnessKind::FitzpatrickTerm, vec![z.clone(), d.sample], d.value)
                        .with_note("sampled Fitzpatrick value above 10^6 off the graph"),
                );
            }
        }
    }
    t.count("divergence_off_graph", diverged, off.points.len());
    t.info("divergence_max_scale", rational::to_text(&max_scale));

    let pool = SampledGraph::graph_g(&identity_samples(cfg.seed, 501, cfg.truncation.min(16), 40), DualSystem::First);
    let probes = ProbeSet::generate(ProbeSpec::new(cfg.seed, cfg.truncation.clamp(2, 16), 100), DualSystem::First);
    let mut s = Sampler::fork(cfg.seed, 502, 20);
    let combos = cfg.trials * 10;
    let mut below = 0;
    for i in 0..combos {
        let z = &probes.points[i % probes.points.len()];
        let size = s.small_int(1, 6) as usize;
        let subset: Vec<PairPoint> = (0..size)
            .map(|_| pool.points[s.index(pool.len()) - 1].clone())
            .collect();
        let subset = SampledGraph::new(DualSystem::First, "subset", subset).expect("first system");
        if let (Ok(lo), Ok(hi)) = (fitz_sampled(z, &subset), fitz_closed_first(z)) {
            if lo <= hi {
                below += 1;
            }
        }
    }
    t.count("sampled_below_closed_form", below, combos);

    let exact = count_where(&graph_xs[..50], |x| {
        let z = graph_point(x);
        let mut pts = pool.points.clone();
        pts.push(z.clone());
        let sample = SampledGraph::new(DualSystem::First, "with z", pts).expect("first system");
        fitz_sampled(&z, &sample).is_ok_and(|v| v == ExtendedValue::zero())
    });
    t.count("sampled_exact_on_graph", exact, 50);

    let grid = ProbeSet::generate(ProbeSpec::new(cfg.seed, cfg.truncation.clamp(2, 16), cfg.trials), DualSystem::First);
    let ni = ni_witness_search(OperatorId::GFirst, &grid);
    t.holds("ni_no_witness", ni.status == Status::VerifiedOnSamples);
    t.info("ni_probes", ni.stats["probes_checked"].clone());
    t.finish(Status::VerifiedOnSamples)
}

/// `((0, 1), 𝟙)`: unit mass at infinity paired with the constant sequence.
pub fn infinity_point() -> PairPoint {
    PairPoint::second(ModelMeasure::at_infinity(rational::one()), TailSeq::ones())
}

fn sds_i(cfg: &CheckConfig) -> Outcome {
    let mut t = Tally::default();
    let z = infinity_point();
    let n = cfg.truncation.clamp(2, 16);

    let single = ProbeSet {
        system: DualSystem::Second,
        points: vec![z.clone()],
        generation: ProbeSpec::new(cfg.seed, n, 1),
    };
    let ni = ni_witness_search(OperatorId::GSecond, &single);
    t.holds(
        "ni_witness_at_infinity_point",
        ni.status == Status::WitnessFound && ni.witness[0].value == int(1),
    );
    t.witnesses.extend(ni.witness.iter().cloned());

    let grid = ProbeSet::generate(ProbeSpec::new(cfg.seed, n, cfg.trials), DualSystem::Second);
    let ni_grid = ni_witness_search(OperatorId::GSecond, &grid);
    t.holds("ni_witnesses_on_grid", ni_grid.status == Status::WitnessFound);
    t.holds(
        "ni_margins_equal_mass_squared",
        ni_grid.stats.get("margins_equal_mass_squared") == Some(&json!(true)),
    );
    t.info("ni_grid_witnesses", ni_grid.stats["witnesses_found"].clone());

    let xs = identity_samples(cfg.seed, 600, n, 40);
    let graph = OperatorId::GSecond.sample_graph(&xs);
    t.holds("graph_monotone", is_monotone(&graph).status == Status::VerifiedOnSamples);
    t.count(
        "graph_inside_c_zero",
        count_where(&graph.points, |p| p.coupling().is_ok_and(|c| c.is_zero())),
        graph.len(),
    );
    let search = ScaledSearch {
        operator: OperatorId::GSecond,
        scale_max: cfg.scale_max.clone(),
        truncation: n,
    };
    let ext = extension_probe(&graph, &z, Some(&search));
    t.holds("extension_witness", ext.status == Status::WitnessFound);
    t.holds("extension_in_graph_neg_gstar", ext.stats.get("in_graph_neg_gstar") == Some(&json!(true)));
    t.witnesses.extend(ext.witness.iter().cloned());

    t.holds(
        "phi_g_at_infinity_point",
        fitz_closed_second_g(&z).is_ok_and(|v| v == ExtendedValue::zero()) && z.coupling() == Ok(int(1)),
    );

    let mut s = Sampler::fork(cfg.seed, 601, 20);
    let mut neg_gstar: Vec<PairPoint> = (0..20).map(|_| graph_neg_gstar_point(&s.measure(6, n))).collect();
    neg_gstar.push(z.clone());
    let b = SampledGraph::new(DualSystem::Second, "Graph negG*", neg_gstar.clone()).expect("second system");
    let orth = orthogonality_report(&graph, &b);
    t.holds("graph_neg_gstar_orthogonal_to_graph", orth.status == Status::VerifiedOnSamples);

    match annihilator_truncated(&graph_units(n, DualSystem::Second), n, DualSystem::Second) {
        Ok(ann) => {
            let mass_dirs = [-3i64, 1, 5]
                .iter()
                .all(|&a| ann.contains(&PairPoint::second(ModelMeasure::at_infinity(int(a)), TailSeq::constant(int(a)))) == Ok(true));
            t.holds("annihilator_contains_mass_directions", mass_dirs);
            t.count(
                "annihilator_contains_graph_neg_gstar",
                count_where(&neg_gstar, |p| ann.contains(p) == Ok(true)),
                neg_gstar.len(),
            );
        }
        Err(e) => {
            t.holds("annihilator", false);
            t.info("annihilator_error", e.to_string());
        }
    }

    let mut probes = ProbeSet::generate(ProbeSpec::new(cfg.seed, n, 80), DualSystem::Second);
    probes.points.push(z);
    let rep = representability_check(&OperatorId::GSecond.fitzpatrick(), &graph, &probes);
    t.holds("phi_g_equals_c_on_graph", rep.stats.get("equal_on_sample") == Some(&json!(true)));
    t.holds("phi_g_below_c_somewhere", rep.status == Status::Refuted);
    t.holds(
        "equality_set_is_zero_mass_slice",
        rep.stats.get("equality_set_size") == rep.stats.get("equality_set_zero_infinity_mass"),
    );
    t.info(
        "strict_inclusions",
        "Graph G ⊊ L ⊊ Graph(G*) asserted analytically; L \\ Graph G is outside the model",
    );
    t.finish(Status::WitnessFound)
}

fn graph_units(n: usize, system: DualSystem) -> Vec<PairPoint> {
    (1..=n)
        .map(|k| {
            let p = graph_point(&SparseSeq::unit(k));
            match system {
                DualSystem::First => p,
                DualSystem::Second => p.embed(),
            }
        })
        .collect()
}

fn sds_ii(cfg: &CheckConfig) -> Outcome {
    let mut t = Tally::default();
    let n = cfg.truncation.clamp(2, 16);
    let grid = ProbeSet::generate(ProbeSpec::new(cfg.seed, n, cfg.trials), DualSystem::Second);
    let ni = ni_witness_search(OperatorId::NegGSecond, &grid);
    t.holds("ni_no_witness", ni.status == Status::VerifiedOnSamples);
    t.info("ni_probes", ni.stats["probes_checked"].clone());

    t.count(
        "fitzpatrick_mirror_identity",
        count_where(&grid.points, |z| {
            fitz_closed_second_neg_g(z).ok() == fitz_closed_second_g(&z.negate_y()).ok()
        }),
        grid.points.len(),
    );

    let xs = identity_samples(cfg.seed, 700, n, 40);
    let graph = OperatorId::NegGSecond.sample_graph(&xs);
    t.holds("graph_monotone", is_monotone(&graph).status == Status::VerifiedOnSamples);

    let mut s = Sampler::fork(cfg.seed, 701, 20);
    let gstar_pts: Vec<PairPoint> = (0..20)
        .map(|_| {
            let mu = s.measure(6, n);
            let y = apply_gstar(&mu);
            PairPoint::second(mu, y)
        })
        .collect();
    let b = SampledGraph::new(DualSystem::Second, "Graph G*", gstar_pts.clone()).expect("second system");
    t.holds(
        "graph_gstar_orthogonal_to_graph",
        orthogonality_report(&graph, &b).status == Status::VerifiedOnSamples,
    );
    t.count(
        "sampled_below_closed_form",
        count_where(&gstar_pts, |z| {
            matches!((fitz_sampled(z, &graph), fitz_closed_second_neg_g(z)), (Ok(lo), Ok(hi)) if lo <= hi)
        }),
        gstar_pts.len(),
    );
    t.count(
        "coupling_nonpositive_on_graph_gstar",
        count_where(&gstar_pts, |z| z.coupling().is_ok_and(|c| !c.is_positive())),
        gstar_pts.len(),
    );
    t.info(
        "non_maximality",
        "the unique maximal extension has graph neg L, whose extra points are outside the model",
    );
    t.finish(Status::VerifiedOnSamples)
}

fn dichotomy(cfg: &CheckConfig) -> Outcome {
    let mut t = Tally::default();
    let params = CrossCheckParams {
        seed: cfg.seed,
        truncation: cfg.truncation.clamp(2, 16),
        samples: 24,
        probes: 120,
        scale_max: cfg.scale_max.clone(),
    };
    for op in OperatorId::ALL {
        let v = dichotomy_crosscheck(op, &params);
        t.holds(&format!("{op}_consistent"), v.status == Status::VerifiedOnSamples);
        t.info(&format!("{op}_profile"), v.stats["profile"].clone());
        t.info(&format!("{op}_non_maximality"), v.stats["non_maximality"].clone());
    }

    let n = cfg.truncation.clamp(2, 16);
    let graph = OperatorId::GFirst.sample_graph(&identity_samples(cfg.seed, 800, n, 24));
    let search = ScaledSearch {
        operator: OperatorId::GFirst,
        scale_max: cfg.scale_max.clone(),
        truncation: n,
    };
    let off = ProbeSet::off_graph(ProbeSpec::new(cfg.seed, n, 100));
    let refuted = count_where(&off.points, |z| extension_probe(&graph, z, Some(&search)).status == Status::Refuted);
    t.count("first_system_off_graph_refuted", refuted, off.points.len());

    let second = OperatorId::GSecond.sample_graph(&identity_samples(cfg.seed, 801, n, 24));
    let search = ScaledSearch {
        operator: OperatorId::GSecond,
        ..search
    };
    let ext = extension_probe(&second, &infinity_point(), Some(&search));
    t.holds("second_system_extension_witness", ext.status == Status::WitnessFound);
    t.witnesses.extend(ext.witness);
    t.finish(Status::VerifiedOnSamples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn catalog_names_are_unique() {
        let names: BTreeSet<_> = CATALOG.iter().map(|e| e.name).collect();
        assert_eq!(names.len(), CATALOG.len());
        assert_eq!(CATALOG.len(), 8);
    }

    #[test]
    fn every_claim_has_exactly_one_entry() {
        let manifest = [
            "g.range-in-c",
            "g.injective",
            "g.skew",
            "g.antisymmetric",
            "g.bounded",
            "g.self-orthogonal",
            "gstar.formula",
            "gstar.adjoint",
            "gstar.kernel",
            "range.weakstar-dense",
            "range.not-closed",
            "range.not-dense",
            "fds.fitzpatrick",
            "fds.ni",
            "fds.maximal",
            "sds.not-ni",
            "sds.phi-formula",
            "sds.orthogonal",
            "sds.extension",
            "sds.neg-ni",
            "dichotomy.profiles",
        ];
        for claim in manifest {
            let hits = CATALOG.iter().filter(|e| e.claims.contains(&claim)).count();
            assert_eq!(hits, 1, "{claim}");
        }
        let listed: usize = CATALOG.iter().map(|e| e.claims.len()).sum();
        assert_eq!(listed, manifest.len());
    }

    #[test]
    fn gstar_kernel_sum_matches_examples() {
        let mu = ModelMeasure::at_infinity(int(1));
        assert_eq!(gstar_entry(&mu, 5), int(-1));
        let e1 = ModelMeasure::atomic_only(SparseSeq::unit(1));
        assert_eq!(gstar_entry(&e1, 1), int(0));
        assert_eq!(gstar_entry(&e1, 2), int(1));
    }

    #[test]
    fn every_check_passes_on_a_small_config() {
        let cfg = CheckConfig {
            truncation: 10,
            trials: 60,
            ..CheckConfig::default()
        };
        for e in CATALOG {
            let out = (e.run)(&cfg);
            assert_eq!(out.status, e.expected, "{}: {:?}", e.name, out.stats["failures"]);
            for w in &out.witnesses {
                assert!(w.recheck().unwrap(), "{}: witness does not recheck", e.name);
            }
        }
    }
}
