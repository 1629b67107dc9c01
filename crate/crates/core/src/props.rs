//! Monotone-operator property checks over finite samples.
//!
//! A finite computation can refute maximality or exhibit an NI gap, but it
//! can never certify maximality. Verdicts say `verified-on-samples` when no
//! counterexample turned up and `witness-found` / `refuted` only with an exact
//! witness attached.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{LabError, Result};
use crate::fitz::{scale_ladder, ExtendedValue, RepresentedFunction, SampledGraph};
use crate::gossez::{apply_g, apply_neg_g};
use crate::measure::{apply_gstar, graph_neg_gstar_point, ModelMeasure};
use crate::point::{DualSystem, PairPoint};
use crate::probe::{ProbeSet, ProbeSpec, Sampler};
use crate::rational::{self, Rational};
use crate::sparse::SparseSeq;
use crate::verdict::{PropertyVerdict, Status, Witness, WitnessKind};

/// The three operator profiles the lab distinguishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OperatorId {
    /// G in (ℓ₁, ℓ∞).
    #[serde(rename = "G-first")]
    GFirst,
    /// G in (ℓ∞*, ℓ∞).
    #[serde(rename = "G-second")]
    GSecond,
    /// ¬G in (ℓ∞*, ℓ∞).
    #[serde(rename = "negG-second")]
    NegGSecond,
}

impl OperatorId {
    pub const ALL: [OperatorId; 3] = [OperatorId::GFirst, OperatorId::GSecond, OperatorId::NegGSecond];

    pub fn name(self) -> &'static str {
        match self {
            OperatorId::GFirst => "G-first",
            OperatorId::GSecond => "G-second",
            OperatorId::NegGSecond => "negG-second",
        }
    }

    pub fn system(self) -> DualSystem {
        match self {
            OperatorId::GFirst => DualSystem::First,
            OperatorId::GSecond | OperatorId::NegGSecond => DualSystem::Second,
        }
    }

    /// Closed-form Fitzpatrick function of the operator in its system.
    pub fn fitzpatrick(self) -> RepresentedFunction {
        match self {
            OperatorId::GFirst => RepresentedFunction::IndicatorGraphG,
            OperatorId::GSecond => RepresentedFunction::IndicatorGraphNegGstar,
            OperatorId::NegGSecond => RepresentedFunction::IndicatorGraphGstar,
        }
    }

    /// Graph point of the operator at `x ∈ ℓ₁`.
    pub fn graph_point(self, x: &SparseSeq) -> PairPoint {
        match self {
            OperatorId::GFirst => PairPoint::first(x.clone(), apply_g(x)),
            OperatorId::GSecond => PairPoint::first(x.clone(), apply_g(x)).embed(),
            OperatorId::NegGSecond => PairPoint::first(x.clone(), apply_neg_g(x)).embed(),
        }
    }

    pub fn sample_graph(self, xs: &[SparseSeq]) -> SampledGraph {
        let source = match self {
            OperatorId::NegGSecond => "Graph negG",
            _ => "Graph G",
        };
        let points = xs.iter().map(|x| self.graph_point(x)).collect();
        SampledGraph::new(self.system(), source, points).expect("uniform system")
    }

    /// Whether `z` lies on the operator's graph (domain ℓ₁).
    pub fn on_graph(self, z: &PairPoint) -> bool {
        if z.system() != self.system() {
            return false;
        }
        let mu = z.measure();
        mu.infinity_mass.is_zero() && self.graph_point(&mu.atomic) == *z
    }
}

impl fmt::Display for OperatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorId {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        OperatorId::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| LabError::Parse(format!("unknown operator {s:?}")))
    }
}

/// `c(z₁ − z₂) = ⟨x₁ − x₂, y₁ − y₂⟩`.
pub fn pair_value(z1: &PairPoint, z2: &PairPoint) -> Result<Rational> {
    z1.sub(z2)?.coupling()
}

/// Checks `⟨x₁ − x₂, y₁ − y₂⟩ ≥ 0` over all unordered pairs of the sample.
pub fn is_monotone(a: &SampledGraph) -> PropertyVerdict {
    let mut checked = 0u64;
    let mut skipped = 0u64;
    let mut min: Option<Rational> = None;
    let mut violation = None;
    'outer: for (i, z1) in a.points.iter().enumerate() {
        for z2 in &a.points[i + 1..] {
            match pair_value(z1, z2) {
                Ok(v) => {
                    checked += 1;
                    if min.as_ref().is_none_or(|m| &v < m) {
                        min = Some(v.clone());
                    }
                    if v.is_negative() {
                        violation = Some(Witness::new(
                            WitnessKind::PairCoupling,
                            vec![z1.clone(), z2.clone()],
                            v,
                        ));
                        break 'outer;
                    }
                }
                Err(_) => skipped += 1,
            }
        }
    }
    let status = match (&violation, skipped) {
        (Some(_), _) => Status::Refuted,
        (None, 0) => Status::VerifiedOnSamples,
        (None, _) => Status::Inconclusive,
    };
    let mut v = PropertyVerdict::new("monotone", status)
        .stat("pairs_checked", checked)
        .stat("pairs_skipped", skipped)
        .stat("sample_size", a.len() as u64)
        .stat("source", a.source.clone());
    if let Some(m) = &min {
        v = v.stat_q("min_value", m);
    }
    if let Some(w) = violation {
        v = v.witness(w);
    }
    v
}

/// Scaled graph points searched by [`extension_probe`] beyond the sample itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledSearch {
    /// Operator whose (linear) graph the sample is drawn from.
    pub operator: OperatorId,
    /// Largest scale in the geometric ladder.
    pub scale_max: Rational,
    /// Unit directions `e_1..e_N` are also scanned.
    pub truncation: usize,
}

impl ScaledSearch {
    fn candidates<'a>(&'a self, a: &'a SampledGraph) -> impl Iterator<Item = PairPoint> + 'a {
        let ladder = scale_ladder(&self.scale_max);
        let dirs: Vec<SparseSeq> = a
            .points
            .iter()
            .map(|p| p.measure().atomic)
            .filter(|u| !u.is_zero())
            .chain((1..=self.truncation).map(SparseSeq::unit))
            .collect();
        dirs.into_iter().flat_map(move |u| {
            let ladder = ladder.clone();
            ladder.into_iter().flat_map(move |t| {
                let up = u.scale(&t);
                let down = -&up;
                [self.operator.graph_point(&up), self.operator.graph_point(&down)]
            })
        })
    }
}

/// Tests whether `z` extends the sample monotonically.
///
/// Scans the sample and then, if given, the scaled family, stopping at the
/// first `w` with `c(z − w) < 0`.
pub fn extension_probe(a: &SampledGraph, z: &PairPoint, search: Option<&ScaledSearch>) -> PropertyVerdict {
    let mut checked = 0u64;
    let mut skipped = 0u64;
    let mut min: Option<(Rational, PairPoint)> = None;
    let scaled = search.into_iter().flat_map(|s| s.candidates(a));
    for w in a.points.iter().cloned().chain(scaled) {
        if &w == z {
            continue;
        }
        match pair_value(z, &w) {
            Ok(v) => {
                checked += 1;
                if v.is_negative() {
                    let witness = Witness::new(WitnessKind::PairCoupling, vec![z.clone(), w], v);
                    return PropertyVerdict::new("monotone-extension", Status::Refuted)
                        .stat("candidates_checked", checked)
                        .stat("candidates_skipped", skipped)
                        .stat("scaled_search", search.is_some())
                        .witness(witness);
                }
                if min.as_ref().is_none_or(|(m, _)| &v < m) {
                    min = Some((v, w));
                }
            }
            Err(_) => skipped += 1,
        }
    }
    let status = if skipped > 0 || a.contains(z) {
        Status::Inconclusive
    } else {
        Status::WitnessFound
    };
    let mut verdict = PropertyVerdict::new("monotone-extension", status)
        .stat("candidates_checked", checked)
        .stat("candidates_skipped", skipped)
        .stat("scaled_search", search.is_some());
    if let Some(s) = search {
        verdict = verdict
            .stat_q("scale_max", &s.scale_max)
            .stat("already_in_analytic_graph", s.operator.on_graph(z));
    }
    if z.system() == DualSystem::Second {
        verdict = verdict.stat("in_graph_neg_gstar", graph_neg_gstar_point(&z.measure()) == *z);
    }
    if a.contains(z) {
        verdict = verdict.stat("already_in_sample", true);
    }
    if let (Status::WitnessFound, Some((m, w))) = (status, min) {
        let mut witness = Witness::new(WitnessKind::PairCoupling, vec![z.clone(), w], m)
            .with_note("minimum of c(z - w) over all candidates");
        if search.is_some_and(|s| s.operator.on_graph(z)) {
            witness = witness.with_note("already in analytic graph");
        }
        verdict = verdict.witness(witness);
    }
    verdict
}

/// Searches probes for `z` with `φ(z) < c(z)`, where φ is the operator's
/// closed-form Fitzpatrick function.
pub fn ni_witness_search(op: OperatorId, probes: &ProbeSet) -> PropertyVerdict {
    let f = op.fitzpatrick();
    let mut checked = 0u64;
    let mut skipped = 0u64;
    let mut found = 0u64;
    let mut first = None;
    let mut margins_are_mass_squared = true;
    for z in &probes.points {
        if z.system() != op.system() {
            skipped += 1;
            continue;
        }
        let (phi, c) = match (f.eval(z), z.coupling()) {
            (Ok(phi), Ok(c)) => (phi, c),
            _ => {
                skipped += 1;
                continue;
            }
        };
        checked += 1;
        if let ExtendedValue::Finite(phi) = &phi {
            if phi < &c {
                found += 1;
                let margin = &c - phi;
                let a = z.measure().infinity_mass;
                margins_are_mass_squared &= margin == &a * &a;
                if first.is_none() {
                    first = Some(Witness::new(
                        WitnessKind::CouplingGap { function: f.clone() },
                        vec![z.clone()],
                        margin,
                    ));
                }
            }
        }
    }
    let status = if first.is_some() {
        Status::WitnessFound
    } else if skipped > 0 {
        Status::Inconclusive
    } else {
        Status::VerifiedOnSamples
    };
    let mut v = PropertyVerdict::new(format!("NI[{op}]"), status)
        .stat("probes_checked", checked)
        .stat("probes_skipped", skipped)
        .stat("witnesses_found", found)
        .stat("probe_generation", json!(probes.generation))
        .seed(probes.generation.seed);
    if found > 0 {
        v = v.stat("margins_equal_mass_squared", margins_are_mass_squared);
    }
    if let Some(w) = first {
        v = v.witness(w);
    }
    v
}

/// Checks `f = c` on the sample, `f ≥ c` on the probes, and midpoint convexity
/// between consecutive probes where `f` is finite.
pub fn representability_check(f: &RepresentedFunction, a: &SampledGraph, probes: &ProbeSet) -> PropertyVerdict {
    let mut witnesses = Vec::new();
    let mut skipped = 0u64;
    let mut on_sample_ok = true;
    for z in &a.points {
        match (f.eval(z), z.coupling()) {
            (Ok(fz), Ok(c)) if fz == ExtendedValue::Finite(c.clone()) => {}
            (Ok(fz), Ok(c)) => {
                on_sample_ok = false;
                if let Some(fv) = fz.finite() {
                    witnesses.push(
                        Witness::new(
                            WitnessKind::CouplingGap { function: f.clone() },
                            vec![z.clone()],
                            c - fv,
                        )
                        .with_note("sample point with f != c"),
                    );
                }
            }
            _ => skipped += 1,
        }
    }

    let mut below = 0u64;
    let mut equality = Vec::new();
    let mut finite = Vec::new();
    for z in &probes.points {
        let (fz, c) = match (f.eval(z), z.coupling()) {
            (Ok(fz), Ok(c)) => (fz, c),
            _ => {
                skipped += 1;
                continue;
            }
        };
        if let ExtendedValue::Finite(fv) = &fz {
            finite.push((z, fv.clone()));
            if fv < &c {
                below += 1;
                if below == 1 {
                    witnesses.push(
                        Witness::new(
                            WitnessKind::CouplingGap { function: f.clone() },
                            vec![z.clone()],
                            &c - fv,
                        )
                        .with_note("probe with f < c"),
                    );
                }
            } else if fv == &c {
                equality.push(z);
            }
        }
    }

    let mut convexity_pairs = 0u64;
    let mut convexity_ok = true;
    let half = rational::q(1, 2);
    for pair in finite.windows(2) {
        let [(z1, f1), (z2, f2)] = pair else { unreachable!() };
        let Ok(mid) = z1.add(z2).map(|s| s.scale(&half)) else {
            continue;
        };
        let Ok(fm) = f.eval(&mid) else {
            skipped += 1;
            continue;
        };
        convexity_pairs += 1;
        let bound = (f1 + f2) * &half;
        if fm.cmp_finite(&bound) == std::cmp::Ordering::Greater {
            convexity_ok = false;
        }
    }

    let zero_mass = equality
        .iter()
        .filter(|z| z.measure().infinity_mass.is_zero())
        .count() as u64;
    let status = if on_sample_ok && below == 0 && convexity_ok {
        Status::VerifiedOnSamples
    } else {
        Status::Refuted
    };
    let mut v = PropertyVerdict::new(format!("representable[{}]", f.label()), status)
        .stat("equal_on_sample", on_sample_ok)
        .stat("probes_below_c", below)
        .stat("convexity_pairs", convexity_pairs)
        .stat("midpoint_convex", convexity_ok)
        .stat("equality_set_size", equality.len() as u64)
        .stat("equality_set_zero_infinity_mass", zero_mass)
        .stat("skipped", skipped)
        .seed(probes.generation.seed);
    for w in witnesses {
        v = v.witness(w);
    }
    v
}

/// Parameters shared by the aggregated checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheckParams {
    pub seed: u64,
    pub truncation: usize,
    pub samples: usize,
    pub probes: usize,
    pub scale_max: Rational,
}

impl Default for CrossCheckParams {
    fn default() -> Self {
        Self {
            seed: 0,
            truncation: 16,
            samples: 24,
            probes: 120,
            scale_max: rational::int(1_000_000),
        }
    }
}

/// Properties asserted analytically for each operator profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExpectedProfile {
    pub maximal: bool,
    pub ni: bool,
    pub representable: bool,
}

pub fn expected_profile(op: OperatorId) -> ExpectedProfile {
    match op {
        OperatorId::GFirst => ExpectedProfile {
            maximal: true,
            ni: true,
            representable: true,
        },
        OperatorId::GSecond => ExpectedProfile {
            maximal: false,
            ni: false,
            representable: false,
        },
        OperatorId::NegGSecond => ExpectedProfile {
            maximal: false,
            ni: true,
            representable: false,
        },
    }
}

/// Candidate extension points for the second-system profiles.
fn second_system_candidates(s: &mut Sampler, params: &CrossCheckParams, count: usize) -> Vec<PairPoint> {
    let n = params.truncation;
    let mut out = vec![PairPoint::second(ModelMeasure::at_infinity(rational::one()), crate::tail::TailSeq::ones())];
    for i in 0..count {
        let mu = s.measure(n.min(6), n);
        out.push(match i % 3 {
            0 => graph_neg_gstar_point(&mu),
            1 => {
                let y = apply_gstar(&mu);
                PairPoint::second(mu, y)
            }
            _ => PairPoint::second(mu, s.constant_tail(n)),
        });
    }
    out
}

/// Runs every property check for `op` and tests the combination against the
/// characterisation "maximal monotone iff representable and NI".
pub fn dichotomy_crosscheck(op: OperatorId, params: &CrossCheckParams) -> PropertyVerdict {
    let n = params.truncation;
    let mut s = Sampler::fork(params.seed, 10 + op as u64, 20);
    let xs: Vec<SparseSeq> = (0..params.samples).map(|_| s.sparse(n.min(6), n)).collect();
    let graph = op.sample_graph(&xs);
    let probes = ProbeSet::generate(ProbeSpec::new(params.seed, n, params.probes), op.system());

    let monotone = is_monotone(&graph);
    let ni = ni_witness_search(op, &probes);
    let rep = representability_check(&op.fitzpatrick(), &graph, &probes);

    let search = ScaledSearch {
        operator: op,
        scale_max: params.scale_max.clone(),
        truncation: n,
    };
    let candidates: Vec<PairPoint> = match op {
        OperatorId::GFirst => ProbeSet::off_graph(ProbeSpec::new(params.seed, n, params.probes / 4)).points,
        _ => second_system_candidates(&mut s, params, params.probes / 4),
    };
    let mut ext_witnesses = Vec::new();
    let mut refuted = 0u64;
    let mut off_graph = 0u64;
    for z in &candidates {
        if op.on_graph(z) {
            continue;
        }
        off_graph += 1;
        let v = extension_probe(&graph, z, Some(&search));
        match v.status {
            Status::Refuted => refuted += 1,
            Status::WitnessFound => ext_witnesses.push(v),
            _ => {}
        }
    }
    let witnesses_in_neg_gstar = ext_witnesses
        .iter()
        .filter(|v| v.stats.get("in_graph_neg_gstar") == Some(&json!(true)))
        .count();

    let expected = expected_profile(op);
    let observed_monotone = monotone.status == Status::VerifiedOnSamples;
    let observed_ni = ni.status == Status::VerifiedOnSamples;
    let observed_rep = rep.status == Status::VerifiedOnSamples;
    let extension_found = !ext_witnesses.is_empty();
    let all_refuted = refuted == off_graph;

    let mut problems = Vec::new();
    if !observed_monotone {
        problems.push("sample is not monotone".to_string());
    }
    if observed_ni != expected.ni {
        problems.push(format!("NI observed {observed_ni}, expected {}", expected.ni));
    }
    if expected.maximal != (expected.representable && expected.ni) {
        problems.push("expected profile violates maximal <=> representable and NI".into());
    }
    if extension_found && expected.maximal {
        problems.push("monotone extension found for an operator expected maximal".into());
    }
    if expected.maximal && !all_refuted {
        problems.push(format!("only {refuted} of {off_graph} off-graph probes refuted"));
    }
    if !observed_rep && expected.representable {
        problems.push("Fitzpatrick representation fails on probes".into());
    }

    let profile = match (expected.maximal, expected.ni) {
        (true, _) => "maximal-consistent",
        (false, false) => "not-maximal-consistent",
        (false, true) => "ni-but-not-maximal-consistent",
    };
    let non_maximality = if expected.maximal {
        "n/a"
    } else if extension_found {
        "extension witness in model"
    } else {
        "extension lies outside the model (closure of the graph)"
    };
    let status = if problems.is_empty() {
        Status::VerifiedOnSamples
    } else {
        Status::Refuted
    };
    let mut v = PropertyVerdict::new(format!("dichotomy[{op}]"), status)
        .stat("profile", if problems.is_empty() { profile } else { "inconsistent" })
        .stat("expected", json!(expected))
        .stat("monotone", monotone.status.as_str())
        .stat("ni", ni.status.as_str())
        .stat("representable_on_probes", rep.status.as_str())
        .stat("extension_candidates", off_graph)
        .stat("extension_refuted", refuted)
        .stat("extension_witnesses", ext_witnesses.len() as u64)
        .stat("extension_witnesses_in_graph_neg_gstar", witnesses_in_neg_gstar as u64)
        .stat("non_maximality", non_maximality)
        .stat("problems", json!(problems))
        .seed(params.seed);
    if let Some(w) = ext_witnesses.first().and_then(|e| e.witness.first()) {
        v = v.witness(w.clone());
    }
    if let Some(w) = ni.witness.first() {
        v = v.witness(w.clone());
    }
    v
}
